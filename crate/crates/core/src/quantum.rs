//! Quantum levels, separated wavefunctions and Wigner small-d functions.
//!
//! Quantum numbers follow the integer convention of the `ϑ`-equation with the
//! `(m² + 2ml cos ϑ + l²)/(4 sin²ϑ)` barrier. The half-integer convention
//! (barrier over `sin²ϑ`, `m', l' ∈ ½ℤ`) is the relabeling `m = 2m'`, `l = 2l'`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::models::{ModelKind, PhysicalParams};
use crate::quad::GaussLegendre;

/// A non-negative or negative half-integer, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const fn from_twice(t: i32) -> Self {
        Self(t)
    }

    pub const fn int(k: i32) -> Self {
        Self(2 * k)
    }

    pub fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        0.5 * self.0 as f64
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// Parses `"3"`, `"-1/2"`, `"1.5"`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Domain(format!("not a half-integer: {s:?}"));
        if let Some((num, den)) = s.split_once('/') {
            let n: i32 = num.trim().parse().map_err(|_| bad())?;
            return match den.trim() {
                "1" => Ok(Self(2 * n)),
                "2" => Ok(Self(n)),
                _ => Err(bad()),
            };
        }
        let v: f64 = s.parse().map_err(|_| bad())?;
        let t = 2.0 * v;
        if t.fract() != 0.0 || t.abs() > i32::MAX as f64 {
            return Err(bad());
        }
        Ok(Self(t as i32))
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Labeling convention for the angular quantum numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    #[default]
    Integer,
    HalfInteger,
}

/// `n_a, n_b` are `(n_α, n_β)` in the `(α, β)` separation and `(n_r, n_ϑ)` in
/// the polar one; `m, l` are in the integer convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuantumNumbers {
    pub n_a: u32,
    pub n_b: u32,
    pub m: i32,
    pub l: i32,
}

impl QuantumNumbers {
    pub fn new(n_a: u32, n_b: u32, m: i32, l: i32) -> Self {
        Self { n_a, n_b, m, l }
    }

    /// Reads `m, l` in the given convention.
    pub fn with_convention(n_a: u32, n_b: u32, m: HalfInt, l: HalfInt, conv: Convention) -> Result<Self> {
        match conv {
            Convention::Integer => {
                if !m.is_integer() || !l.is_integer() {
                    return domain(format!("m = {m}, l = {l} must be integers in the integer convention"));
                }
                Ok(Self::new(n_a, n_b, m.twice() / 2, l.twice() / 2))
            }
            Convention::HalfInteger => Ok(Self::new(n_a, n_b, m.twice(), l.twice())),
        }
    }

    pub fn n(&self) -> u32 {
        self.n_a + self.n_b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Analytic,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub numbers: QuantumNumbers,
    pub energy: f64,
    pub model: ModelKind,
    pub provenance: Provenance,
    /// `(n_α + n_β + |m + l|, |m − l|)` for the anharmonic models.
    pub effective: Option<[u32; 2]>,
    /// Separation constant `e_ϑ` with the shear potential `2C tan²(ϑ/2)/r`.
    pub e_theta: Option<f64>,
}

/// Terminating Pochhammer-ratio series `Σ_k (−n)_k (a)_k / (b)_k x^k / k!`,
/// with the `(a)_k` factor omitted when `a` is `None`.
fn terminating_series(n: u32, a: Option<f64>, b: f64, x: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..n {
        let kf = k as f64;
        let den = b + kf;
        if den == 0.0 {
            return domain(format!("lower parameter {b} hits a nonpositive integer"));
        }
        term *= (kf - n as f64) * a.map_or(1.0, |a| a + kf) / den * x / (kf + 1.0);
        sum += term;
    }
    Ok(sum)
}

/// Confluent polynomial `F₂(−n; b; x)`, the terminating `₁F₁`.
pub fn confluent_poly(n: u32, b: f64, x: f64) -> Result<f64> {
    terminating_series(n, None, b, x)
}

/// Gauss polynomial `F₁(−n, a2; b; x)`, the terminating `₂F₁`.
pub fn gauss_poly(n: u32, a2: f64, b: f64, x: f64) -> Result<f64> {
    terminating_series(n, Some(a2), b, x)
}

fn binomial(n: i64, k: i64) -> f64 {
    if k < 0 || k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn jacobi(k: i64, a: i64, b: i64, x: f64) -> f64 {
    let (xm, xp) = (0.5 * (x - 1.0), 0.5 * (x + 1.0));
    (0..=k).map(|s| binomial(k + a, k - s) * binomial(k + b, s) * xm.powi(s as i32) * xp.powi((k - s) as i32)).sum()
}

fn check_jm(j: HalfInt, m: HalfInt) -> Result<()> {
    if j.twice() < 0 || m.twice().abs() > j.twice() || (j.twice() - m.twice()) % 2 != 0 {
        return domain(format!("incompatible j = {j}, m = {m}"));
    }
    Ok(())
}

/// Wigner small-d `d^j_{ml}(θ) = ⟨j m| exp(−iθJ_y) |j l⟩` via Jacobi polynomials.
pub fn wigner_small_d(j: HalfInt, m: HalfInt, l: HalfInt, theta: f64) -> Result<f64> {
    check_jm(j, m)?;
    check_jm(j, l)?;
    // all in units of one half
    let (j2, m2, l2) = (j.twice() as i64, m.twice() as i64, l.twice() as i64);
    let cands = [(j2 + l2, 0), (j2 - l2, 1), (j2 + m2, 2), (j2 - m2, 3)];
    let (k2, which) = cands.into_iter().min_by_key(|c| c.0).unwrap();
    let (a2, lam2) = match which {
        0 => (m2 - l2, m2 - l2),
        1 => (l2 - m2, 0),
        2 => (l2 - m2, 0),
        _ => (m2 - l2, m2 - l2),
    };
    let (k, a, lam) = (k2 / 2, a2 / 2, lam2 / 2);
    let b = j2 - 2 * k - a;
    let sign = if lam % 2 == 0 { 1.0 } else { -1.0 };
    let norm = (binomial(j2 - k, k + a) / binomial(k + b, b)).sqrt();
    let (s, c) = (0.5 * theta).sin_cos();
    Ok(sign * norm * s.powi(a as i32) * c.powi(b as i32) * jacobi(k, a, b, theta.cos()))
}

/// Nutation factor solving the `sin²ϑ`-barrier nutation equation with the
/// `+2ml cos ϑ` cross term; equals `d^j_{m,−l}`.
pub fn nutation_eigenfunction(j: HalfInt, m: HalfInt, l: HalfInt, theta: f64) -> Result<f64> {
    wigner_small_d(j, m, HalfInt::from_twice(-l.twice()), theta)
}

/// `e_Θj = (2ħ²/μ) j(j+1)`.
pub fn nutation_eigenvalue(j: HalfInt, p: &PhysicalParams) -> f64 {
    let jv = j.value();
    2.0 * p.hbar * p.hbar / p.mu * jv * (jv + 1.0)
}

/// `C` entering the `16Cμ/ħ²` barrier term; zero for the harmonic law.
fn barrier(kind: ModelKind, p: &PhysicalParams) -> Result<f64> {
    match kind {
        ModelKind::Harmonic => Ok(0.0),
        ModelKind::AnharmonicAlphaBeta | ModelKind::AnharmonicRTheta => Ok(p.c),
        k => Err(Error::Unsupported(format!("no quantum spectrum for the {k} model"))),
    }
}

/// `χ = ½√((m − l)² + 16C'μ/ħ²)`; reduces to `σ = |m − l|/2` when `C' = 0`.
fn chi(q: &QuantumNumbers, cb: f64, p: &PhysicalParams) -> f64 {
    let d = (q.m - q.l) as f64;
    0.5 * (d * d + 16.0 * cb * p.mu / (p.hbar * p.hbar)).sqrt()
}

fn gamma_exp(q: &QuantumNumbers) -> f64 {
    0.5 * (q.m + q.l).abs() as f64
}

/// `N = 4n_ϑ + 2 + |m + l| + 2χ`.
fn big_n(q: &QuantumNumbers, cb: f64, p: &PhysicalParams) -> f64 {
    4.0 * q.n_b as f64 + 2.0 + 2.0 * gamma_exp(q) + 2.0 * chi(q, cb, p)
}

/// One separated coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WaveVariable {
    Alpha,
    Beta,
    R,
    Theta,
    Rho,
}

impl WaveVariable {
    pub const ALL: [WaveVariable; 5] = [Self::Alpha, Self::Beta, Self::R, Self::Theta, Self::Rho];

    pub fn name(self) -> &'static str {
        match self {
            Self::Alpha => "alpha",
            Self::Beta => "beta",
            Self::R => "r",
            Self::Theta => "theta",
            Self::Rho => "rho",
        }
    }
}

impl fmt::Display for WaveVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for WaveVariable {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|v| v.name() == s).ok_or_else(|| Error::Domain(format!("unknown variable {s:?}")))
    }
}

/// Eigenvalue of one separated equation.
///
/// `Alpha`, `Beta`: slice energies `E_α`, `E_β`. `Theta`: the separation
/// constant for the split `V = (C/2)r + 2C sec²(ϑ/2)/r` used by
/// [`crate::models::polar_v_theta`], i.e. `e_ϑ + 2C`. `R`, `Rho`: total `E`.
pub fn slice_eigenvalue(kind: ModelKind, var: WaveVariable, q: &QuantumNumbers, p: &PhysicalParams) -> Result<f64> {
    let cb = barrier(kind, p)?;
    let hw = p.hbar * p.omega();
    Ok(match var {
        WaveVariable::Alpha => hw * (2.0 * q.n_a as f64 + 1.0 + chi(q, cb, p)),
        WaveVariable::Beta => hw * (2.0 * q.n_b as f64 + 1.0 + gamma_exp(q)),
        WaveVariable::Theta => {
            let n = big_n(q, cb, p);
            p.hbar * p.hbar / (8.0 * p.mu) * (n * n - 4.0)
        }
        WaveVariable::R | WaveVariable::Rho => hw * (2.0 * q.n_a as f64 + 1.0 + 0.5 * big_n(q, cb, p)),
    })
}

/// Harmonic levels `E = ½ħω(4n + 4 + |m − l| + |m + l|)`.
pub fn energy_harmonic(q: &QuantumNumbers, p: &PhysicalParams) -> SpectrumEntry {
    let hw = p.hbar * p.omega();
    let e = 0.5 * hw * (4.0 * q.n() as f64 + 4.0 + (q.m - q.l).abs() as f64 + (q.m + q.l).abs() as f64);
    SpectrumEntry { numbers: *q, energy: e, model: ModelKind::Harmonic, provenance: Provenance::Analytic, effective: None, e_theta: None }
}

fn anharmonic_energy(q: &QuantumNumbers, p: &PhysicalParams) -> f64 {
    let hw = p.hbar * p.omega();
    0.5 * hw * (4.0 * q.n() as f64 + 4.0 + (q.m + q.l).abs() as f64 + 2.0 * chi(q, p.c, p))
}

fn effective(q: &QuantumNumbers) -> [u32; 2] {
    [q.n() + (q.m + q.l).unsigned_abs(), (q.m - q.l).unsigned_abs()]
}

/// `E = ½ħω(4n + 4 + |m + l| + √((m − l)² + 16Cμ/ħ²))` for the `(α, β)` model.
pub fn energy_anharmonic_ab(q: &QuantumNumbers, p: &PhysicalParams) -> SpectrumEntry {
    SpectrumEntry {
        numbers: *q,
        energy: anharmonic_energy(q, p),
        model: ModelKind::AnharmonicAlphaBeta,
        provenance: Provenance::Analytic,
        effective: Some(effective(q)),
        e_theta: None,
    }
}

/// Same level formula for the `(r, ϑ)` model, with `n = n_r + n_ϑ` and
/// `e_ϑ = (ħ²/8μ)(N² − 4 − 16Cμ/ħ²)`.
pub fn energy_anharmonic_rtheta(q: &QuantumNumbers, p: &PhysicalParams) -> SpectrumEntry {
    let n = big_n(q, p.c, p);
    let e_theta = p.hbar * p.hbar / (8.0 * p.mu) * (n * n - 4.0 - 16.0 * p.c * p.mu / (p.hbar * p.hbar));
    SpectrumEntry {
        numbers: *q,
        energy: anharmonic_energy(q, p),
        model: ModelKind::AnharmonicRTheta,
        provenance: Provenance::Analytic,
        effective: Some(effective(q)),
        e_theta: Some(e_theta),
    }
}

pub fn energy(kind: ModelKind, q: &QuantumNumbers, p: &PhysicalParams) -> Result<SpectrumEntry> {
    match kind {
        ModelKind::Harmonic => Ok(energy_harmonic(q, p)),
        ModelKind::AnharmonicAlphaBeta => Ok(energy_anharmonic_ab(q, p)),
        ModelKind::AnharmonicRTheta => Ok(energy_anharmonic_rtheta(q, p)),
        k => Err(Error::Unsupported(format!("no quantum spectrum for the {k} model"))),
    }
}

/// A separated wavefunction factor in the closed form of the polynomial method.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveFactor {
    pub variable: WaveVariable,
    /// `σ`/`χ` (α), `γ` (β), `ε` (r, ρ) or `χ` (ϑ, cosine power).
    pub exponent: f64,
    /// Sine power `γ` of the ϑ factor; zero otherwise.
    pub exponent2: f64,
    pub degree: u32,
    pub kappa: f64,
}

impl WaveFactor {
    pub fn new(kind: ModelKind, var: WaveVariable, q: &QuantumNumbers, p: &PhysicalParams) -> Result<Self> {
        let cb = barrier(kind, p)?;
        let kappa = p.kappa();
        let (exponent, exponent2, degree) = match var {
            WaveVariable::Alpha => (chi(q, cb, p), 0.0, q.n_a),
            WaveVariable::Beta => (gamma_exp(q), 0.0, q.n_b),
            // ε = ½√(1 + 2μ(e_ϑ + 2C)/ħ²) = N/4
            WaveVariable::R | WaveVariable::Rho => (0.25 * big_n(q, cb, p), 0.0, q.n_a),
            WaveVariable::Theta => (chi(q, cb, p), gamma_exp(q), q.n_b),
        };
        Ok(Self { variable: var, exponent, exponent2, degree, kappa })
    }

    /// Closed-form value, including the `κ`-power prefactor.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let (a, k, n) = (self.exponent, self.kappa, self.degree);
        match self.variable {
            WaveVariable::Alpha | WaveVariable::Beta => {
                if !(x >= 0.0) {
                    return domain(format!("{} = {x} outside [0, ∞)", self.variable));
                }
                Ok(x.powf(a) * k.powf(0.25 + 0.5 * a) * (-0.5 * k * x * x).exp() * confluent_poly(n, 1.0 + a, k * x * x)?)
            }
            WaveVariable::R => {
                if !(x > 0.0) {
                    return domain(format!("r = {x} outside (0, ∞)"));
                }
                Ok(x.powf(a - 0.5) * k.powf(0.5 + a) * (-0.5 * k * x).exp() * confluent_poly(n, 1.0 + 2.0 * a, k * x)?)
            }
            WaveVariable::Rho => {
                if !(x > 0.0) {
                    return domain(format!("rho = {x} outside (0, ∞)"));
                }
                Self { variable: WaveVariable::R, ..*self }.eval(x * x)
            }
            WaveVariable::Theta => {
                if !(0.0..=std::f64::consts::PI).contains(&x) {
                    return domain(format!("theta = {x} outside [0, π]"));
                }
                let (s, c) = (0.5 * x).sin_cos();
                let g = self.exponent2;
                Ok(c.powf(a) * s.powf(g) * gauss_poly(n, 1.0 + n as f64 + g + a, 1.0 + a, c * c)?)
            }
        }
    }

    /// Weight of the self-adjoint form: `α`, `β`, `r`, `sin ϑ`, `ρ³`.
    pub fn measure(&self, x: f64) -> f64 {
        match self.variable {
            WaveVariable::Alpha | WaveVariable::Beta | WaveVariable::R => x,
            WaveVariable::Theta => x.sin(),
            WaveVariable::Rho => x * x * x,
        }
    }

    /// Integration range; unbounded ends are cut where the envelope is below
    /// `e^{−35}` relative to the polynomial growth.
    pub fn support(&self) -> (f64, f64) {
        let grow = 2.0 * self.degree as f64 + 2.0 * self.exponent + 2.0;
        match self.variable {
            WaveVariable::Alpha | WaveVariable::Beta | WaveVariable::Rho => (0.0, ((80.0 + 4.0 * grow) / self.kappa).sqrt()),
            WaveVariable::R => (0.0, (80.0 + 4.0 * grow) / self.kappa),
            WaveVariable::Theta => (0.0, std::f64::consts::PI),
        }
    }

    /// `∫ f g w dx` over the support.
    pub fn overlap(&self, other: &WaveFactor) -> Result<f64> {
        if self.variable != other.variable {
            return domain("overlap of factors in different variables");
        }
        let (a, b1) = self.support();
        let b = b1.max(other.support().1);
        let gl = GaussLegendre::new(32);
        let v = gl.integrate_composite(a, b, 96, |x| match (self.eval(x), other.eval(x)) {
            (Ok(f), Ok(g)) => f * g * self.measure(x),
            _ => f64::NAN,
        });
        if !v.is_finite() {
            return Err(Error::Solver(format!("overlap quadrature failed for {}", self.variable)));
        }
        Ok(v)
    }

    pub fn norm(&self) -> Result<f64> {
        Ok(self.overlap(self)?.sqrt())
    }

    pub fn normalized(&self) -> Result<NormalizedWave> {
        Ok(NormalizedWave { factor: *self, scale: 1.0 / self.norm()? })
    }

    /// Number of sign changes on the open support, from a uniform scan.
    pub fn node_count(&self, samples: usize) -> Result<usize> {
        let (a, b) = self.support();
        let h = (b - a) / samples as f64;
        let mut count = 0;
        let mut prev = 0.0;
        for i in 1..samples {
            let v = self.eval(a + i as f64 * h)?;
            if v != 0.0 {
                if prev * v < 0.0 {
                    count += 1;
                }
                prev = v;
            }
        }
        Ok(count)
    }
}

/// A [`WaveFactor`] rescaled to unit norm under its measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalizedWave {
    pub factor: WaveFactor,
    pub scale: f64,
}

impl NormalizedWave {
    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(self.scale * self.factor.eval(x)?)
    }
}

/// Closed-form factor value at `x`.
pub fn wavefunction(q: &QuantumNumbers, p: &PhysicalParams, kind: ModelKind, var: WaveVariable, x: f64) -> Result<f64> {
    WaveFactor::new(kind, var, q, p)?.eval(x)
}

/// Factor value at `x` after numerical normalization.
pub fn wavefunction_normalized(q: &QuantumNumbers, p: &PhysicalParams, kind: ModelKind, var: WaveVariable, x: f64) -> Result<f64> {
    WaveFactor::new(kind, var, q, p)?.normalized()?.eval(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TopLevel {
    pub energy: f64,
    pub degeneracy: u64,
}

/// Rigid-top levels. `I = K` is the spherical top `E_j = (ħ²/2I) j(j+1)` with
/// degeneracy `(2j+1)²`; otherwise the symmetric top
/// `E_{j,l} = (ħ²/2I) j(j+1) + ħ²(1/2I − 1/2K) l²` with degeneracy `2(2j+1)`
/// (`2j+1` when `l = 0`).
pub fn top_levels(j: HalfInt, l: HalfInt, i: f64, k: f64, hbar: f64) -> Result<TopLevel> {
    check_jm(j, l)?;
    if !(i > 0.0 && k > 0.0 && hbar > 0.0) {
        return domain("moments of inertia and hbar must be positive");
    }
    let jv = j.value();
    let dim = (j.twice() + 1) as u64;
    let base = hbar * hbar / (2.0 * i) * jv * (jv + 1.0);
    if i == k {
        return Ok(TopLevel { energy: base, degeneracy: dim * dim });
    }
    let lv = l.value();
    let energy = base + hbar * hbar * (0.5 / i - 0.5 / k) * lv * lv;
    let degeneracy = if l.twice() == 0 { dim } else { 2 * dim };
    Ok(TopLevel { energy, degeneracy })
}
