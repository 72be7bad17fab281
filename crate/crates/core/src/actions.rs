//! Action variables, energy-from-action laws, frequencies, resonances and
//! Bohr–Sommerfeld levels.
//!
//! Angular actions follow `J_φ = 2π p_φ`, `J_ψ = 2π p_ψ`, so the centrifugal
//! momenta are `p_η = (J_φ − J_ψ)/4π` and `p_γ = (J_φ + J_ψ)/4π`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::models::{polar_v_r, polar_v_theta, ModelKind, PotentialModel};
use crate::quad::GaussLegendre;

/// Which separable chart the deformation actions refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ActionFamily {
    /// `(J_α, J_β, J_φ, J_ψ)`
    AlphaBeta,
    /// `(J_r, J_ϑ, J_φ, J_ψ)`
    Polar,
}

/// Action variables. `j1, j2` are `(J_α, J_β)` or `(J_r, J_ϑ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActionSet {
    pub family: ActionFamily,
    pub j1: f64,
    pub j2: f64,
    pub j_phi: f64,
    pub j_psi: f64,
}

impl ActionSet {
    pub fn alpha_beta(j_alpha: f64, j_beta: f64, j_phi: f64, j_psi: f64) -> Self {
        Self { family: ActionFamily::AlphaBeta, j1: j_alpha, j2: j_beta, j_phi, j_psi }
    }

    pub fn polar(j_r: f64, j_theta: f64, j_phi: f64, j_psi: f64) -> Self {
        Self { family: ActionFamily::Polar, j1: j_r, j2: j_theta, j_phi, j_psi }
    }

    fn validate(&self) -> Result<()> {
        if !(self.j1 >= 0.0 && self.j2 >= 0.0) {
            return domain("libration actions must be nonnegative");
        }
        if !(self.j_phi.is_finite() && self.j_psi.is_finite() && self.j1.is_finite() && self.j2.is_finite()) {
            return domain("non-finite action");
        }
        Ok(())
    }
}

/// Bohr–Sommerfeld quantum numbers: `J = nh`, `J_φ = mh`, `J_ψ = lh`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BsQuantumNumbers {
    pub n: u32,
    pub m: i32,
    pub l: i32,
}

/// Phase-space regions of the harmonic energy law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HarmonicRegion {
    /// `|J_φ| > |J_ψ|`: `E = (ω/2π)(2J ± J_φ)`
    PhiDominant,
    /// `|J_φ| < |J_ψ|`: `E = (ω/2π)(2J ± J_ψ)`
    PsiDominant,
    /// `|J_φ| = |J_ψ|`
    Separatrix,
}

pub fn harmonic_region(a: &ActionSet) -> HarmonicRegion {
    let (p, s) = (a.j_phi.abs(), a.j_psi.abs());
    if p > s {
        HarmonicRegion::PhiDominant
    } else if p < s {
        HarmonicRegion::PsiDominant
    } else {
        HarmonicRegion::Separatrix
    }
}

fn golden_minimum(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-15 * (a.abs() + b.abs()).max(1e-300) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Root of `f` in `[a, b]` given `f(a) ≥ 0 > f(b)` or the reverse.
fn bisect(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let fa_pos = f(a) > 0.0;
    for _ in 0..400 {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        if (f(m) > 0.0) == fa_pos {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Search interval for [`turning_points_in`]. A reflecting end is a hard wall
/// of the chart (e.g. a radial origin); reaching it with `veff < E` returns
/// the end itself instead of an error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub reflect_lo: bool,
    pub reflect_hi: bool,
}

/// Turning points of a single well of `veff` at energy `e` inside `[lo, hi]`.
pub fn turning_points(veff: &dyn Fn(f64) -> f64, e: f64, lo: f64, hi: f64) -> Result<(f64, f64)> {
    turning_points_in(veff, e, Interval { lo, hi, reflect_lo: false, reflect_hi: false })
}

pub fn turning_points_in(veff: &dyn Fn(f64) -> f64, e: f64, iv: Interval) -> Result<(f64, f64)> {
    if !(iv.lo < iv.hi) || !e.is_finite() {
        return domain("empty search interval or non-finite energy");
    }
    let (xmin, vmin) = golden_minimum(veff, iv.lo, iv.hi);
    let tol = 1e-12 * e.abs().max(vmin.abs()) + 1e-14;
    if e < vmin - tol {
        return Err(Error::NoMotion { energy: e, minimum: vmin });
    }
    if e <= vmin + tol {
        return Ok((xmin, xmin));
    }
    let f = |x: f64| {
        let v = veff(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v - e
        }
    };
    let side = |end: f64, reflect: bool, name: &str| -> Result<f64> {
        if f(end) > 0.0 {
            Ok(bisect(&f, end, xmin))
        } else if reflect {
            Ok(end)
        } else {
            domain(format!("well is open on the {name} side at this energy"))
        }
    };
    let xm = side(iv.lo, iv.reflect_lo, "lower")?;
    let xp = side(iv.hi, iv.reflect_hi, "upper")?;
    Ok((xm, xp))
}

fn rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(128))
}

/// `2∫ √p²(x) dx` between the turning points, with `x = x₋ + (x₊ − x₋) sin²u`.
pub fn action_quadrature(p2: &dyn Fn(f64) -> f64, x_minus: f64, x_plus: f64) -> f64 {
    let w = x_plus - x_minus;
    if w <= 0.0 {
        return 0.0;
    }
    let integral = rule().integrate(0.0, 0.5 * PI, |u| {
        let (s, c) = u.sin_cos();
        let x = x_minus + w * s * s;
        p2(x).max(0.0).sqrt() * 2.0 * w * s * c
    });
    2.0 * integral
}

/// One separated degree of freedom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ActionSlice {
    /// `α` at slice energy `E_α`.
    Alpha,
    /// `β` at slice energy `E_β`.
    Beta,
    /// `ρ = √r` at total energy `E` with angular separation constant `h_ϑ`.
    Radial { h_theta: f64 },
    /// `ϑ` at separation constant `h_ϑ` (passed as the slice energy).
    Theta,
}

/// `p²(x)` on the slice, the search interval and the local `V_eff` whose well
/// holds the motion (`p² = 2m(E − V_eff)` with the slice's effective mass).
struct SliceProblem {
    p2: Box<dyn Fn(f64) -> f64>,
    veff: Box<dyn Fn(f64) -> f64>,
    interval: Interval,
}

fn centrifugal(k: f64, x: f64) -> f64 {
    if k == 0.0 {
        0.0
    } else {
        k / (x * x)
    }
}

fn slice_problem(m: &PotentialModel, slice: ActionSlice, e: f64, j_phi: f64, j_psi: f64) -> Result<SliceProblem> {
    let mu = m.params.mu;
    let c = m.params.c;
    let p_eta = (j_phi - j_psi) / (4.0 * PI);
    let p_gamma = (j_phi + j_psi) / (4.0 * PI);
    let kind = m.kind;
    let big = 1e3 * (1.0 + e.abs() / c).sqrt() + 10.0;
    match slice {
        ActionSlice::Alpha | ActionSlice::Beta => {
            if kind == ModelKind::CollapseGuard {
                return Err(Error::Unsupported("collapse-guard does not separate in (alpha, beta)".into()));
            }
            let (k, anh) = if slice == ActionSlice::Alpha { (p_eta * p_eta, kind.is_anharmonic()) } else { (p_gamma * p_gamma, false) };
            let cc = if kind == ModelKind::Free { 0.0 } else { c };
            let v = move |x: f64| 0.5 * cc * x * x + if anh { 2.0 * cc / (x * x) } else { 0.0 };
            let veff = move |x: f64| centrifugal(k, x) / (2.0 * mu) + v(x);
            Ok(SliceProblem {
                p2: Box::new(move |x| 2.0 * mu * (e - veff(x))),
                veff: Box::new(veff),
                interval: Interval { lo: 0.0, hi: big, reflect_lo: true, reflect_hi: false },
            })
        }
        ActionSlice::Radial { h_theta } => {
            let mm = *m;
            let veff = move |rho: f64| polar_v_r(&mm, rho * rho) + centrifugal(h_theta, rho);
            Ok(SliceProblem {
                p2: Box::new(move |x| 2.0 * mu * (e - veff(x))),
                veff: Box::new(veff),
                interval: Interval { lo: 0.0, hi: big, reflect_lo: true, reflect_hi: false },
            })
        }
        ActionSlice::Theta => {
            let mm = *m;
            // W / sin²ϑ = p_γ'²/(4 sin²(ϑ/2)) + p_η'²/(4 cos²(ϑ/2)) with p_γ' = p_φ + p_ψ, p_η' = p_φ − p_ψ
            let b = (2.0 * p_gamma).powi(2) / 16.0;
            let d = (2.0 * p_eta).powi(2) / 16.0;
            let veff = move |th: f64| {
                let (s, co) = (0.5 * th).sin_cos();
                let vt = polar_v_theta(&mm, th).unwrap_or(f64::INFINITY);
                vt + (centrifugal(b, s) + centrifugal(d, co)) * 2.0 / mu
            };
            Ok(SliceProblem {
                p2: Box::new(move |th| 0.5 * mu * (e - veff(th))),
                veff: Box::new(veff),
                interval: Interval { lo: 0.0, hi: PI, reflect_lo: true, reflect_hi: true },
            })
        }
    }
}

/// Action of one separated degree of freedom by quadrature.
pub fn action_integral(m: &PotentialModel, slice: ActionSlice, e_slice: f64, j_phi: f64, j_psi: f64) -> Result<f64> {
    let sp = slice_problem(m, slice, e_slice, j_phi, j_psi)?;
    let (xm, xp) = turning_points_in(&*sp.veff, e_slice, sp.interval)?;
    Ok(action_quadrature(&*sp.p2, xm, xp))
}

/// `C` in the √(64μπ²C + (J_φ − J_ψ)²) term: zero for the harmonic law.
fn barrier_strength(m: &PotentialModel) -> Result<f64> {
    match m.kind {
        ModelKind::Harmonic => Ok(0.0),
        ModelKind::AnharmonicAlphaBeta | ModelKind::AnharmonicRTheta => Ok(m.params.c),
        k => Err(Error::Unsupported(format!("no closed-form energy law for the {k} model"))),
    }
}

fn root_term(m: &PotentialModel, d: f64) -> Result<f64> {
    let cb = barrier_strength(m)?;
    Ok((64.0 * m.params.mu * PI * PI * cb + d * d).sqrt())
}

/// Closed-form slice action; the inverse of the corresponding slice energy law.
pub fn slice_action_closed_form(m: &PotentialModel, slice: ActionSlice, e_slice: f64, j_phi: f64, j_psi: f64) -> Result<f64> {
    let w = m.params.omega();
    let mu = m.params.mu;
    let j = match slice {
        ActionSlice::Alpha => (PI / w) * e_slice - 0.25 * root_term(m, j_phi - j_psi)?,
        ActionSlice::Beta => {
            barrier_strength(m)?;
            (PI / w) * e_slice - 0.25 * (j_phi + j_psi).abs()
        }
        ActionSlice::Radial { h_theta } => {
            barrier_strength(m)?;
            PI * (e_slice / w - (2.0 * mu * h_theta).sqrt())
        }
        ActionSlice::Theta => {
            let pg = (j_phi + j_psi) / (2.0 * PI);
            PI * ((2.0 * mu * e_slice).sqrt() - 0.5 * pg.abs()) - 0.25 * root_term(m, j_phi - j_psi)?
        }
    };
    if j < -1e-12 * j.abs().max(1.0) {
        return Err(Error::NoMotion { energy: e_slice, minimum: f64::NAN });
    }
    Ok(j.max(0.0))
}

/// Energy as a function of the actions.
///
/// `E = (ω/4π)(4(J₁ + J₂) + |J_φ + J_ψ| + √(64μπ²C' + (J_φ − J_ψ)²))`, with
/// `C' = C` for both anharmonic models and `C' = 0` for the harmonic one, where
/// it reduces to `(ω/2π)(2J + max(|J_φ|, |J_ψ|))`.
pub fn energy_from_actions(m: &PotentialModel, a: &ActionSet) -> Result<f64> {
    a.validate()?;
    let w = m.params.omega();
    if m.kind == ModelKind::Harmonic {
        let jj = a.j1 + a.j2;
        return Ok(match harmonic_region(a) {
            HarmonicRegion::PhiDominant | HarmonicRegion::Separatrix => w / (2.0 * PI) * (2.0 * jj + a.j_phi.abs()),
            HarmonicRegion::PsiDominant => w / (2.0 * PI) * (2.0 * jj + a.j_psi.abs()),
        });
    }
    let root = root_term(m, a.j_phi - a.j_psi)?;
    Ok(w / (4.0 * PI) * (4.0 * (a.j1 + a.j2) + (a.j_phi + a.j_psi).abs() + root))
}

/// `ν = ∂E/∂J` for `(J₁, J₂, J_φ, J_ψ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Frequencies {
    pub nu1: f64,
    pub nu2: f64,
    pub nu_phi: f64,
    pub nu_psi: f64,
}

impl Frequencies {
    pub fn as_array(&self) -> [f64; 4] {
        [self.nu1, self.nu2, self.nu_phi, self.nu_psi]
    }
}

/// Analytic partials of [`energy_from_actions`].
pub fn frequencies(m: &PotentialModel, a: &ActionSet) -> Result<Frequencies> {
    a.validate()?;
    let w = m.params.omega();
    let nu = w / PI;
    if m.kind == ModelKind::Harmonic {
        let k = w / (2.0 * PI);
        return match harmonic_region(a) {
            HarmonicRegion::PhiDominant => Ok(Frequencies { nu1: nu, nu2: nu, nu_phi: k * a.j_phi.signum(), nu_psi: 0.0 }),
            HarmonicRegion::PsiDominant => Ok(Frequencies { nu1: nu, nu2: nu, nu_phi: 0.0, nu_psi: k * a.j_psi.signum() }),
            HarmonicRegion::Separatrix => Err(Error::NonDifferentiable("harmonic energy law on the separatrix |J_phi| = |J_psi|".into())),
        };
    }
    let sum = a.j_phi + a.j_psi;
    if sum == 0.0 {
        return Err(Error::NonDifferentiable("|J_phi + J_psi| at J_phi + J_psi = 0".into()));
    }
    let d = a.j_phi - a.j_psi;
    let x = d / root_term(m, d)?;
    let k = w / (4.0 * PI);
    Ok(Frequencies { nu1: nu, nu2: nu, nu_phi: k * (sum.signum() + x), nu_psi: k * (sum.signum() - x) })
}

/// Central-difference partials of [`energy_from_actions`] with step `h`.
pub fn frequencies_numeric(m: &PotentialModel, a: &ActionSet, h: f64) -> Result<Frequencies> {
    let e = |b: ActionSet| energy_from_actions(m, &b);
    let mut out = [0.0; 4];
    for (i, o) in out.iter_mut().enumerate() {
        let mut p = *a;
        let mut q = *a;
        let (pp, qq) = match i {
            0 => (&mut p.j1, &mut q.j1),
            1 => (&mut p.j2, &mut q.j2),
            2 => (&mut p.j_phi, &mut q.j_phi),
            _ => (&mut p.j_psi, &mut q.j_psi),
        };
        *pp += h;
        *qq -= h;
        *o = (e(p)? - e(q)?) / (2.0 * h);
    }
    Ok(Frequencies { nu1: out[0], nu2: out[1], nu_phi: out[2], nu_psi: out[3] })
}

/// An integer relation `Σ cᵢ νᵢ = 0` over `(ν₁, ν₂, ν_φ, ν_ψ)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResonanceRelation {
    pub label: &'static str,
    pub coefficients: [i32; 4],
}

const fn rel(label: &'static str, coefficients: [i32; 4]) -> ResonanceRelation {
    ResonanceRelation { label, coefficients }
}

/// Candidate relations tested by [`resonance_check`], with `ν_γ = ν_φ + ν_ψ`,
/// `ν_η = ν_φ − ν_ψ` and, for the polar family, `ν_ρ = 2ν_r`.
pub fn resonance_candidates(family: ActionFamily) -> Vec<ResonanceRelation> {
    match family {
        ActionFamily::AlphaBeta => vec![
            rel("nu_alpha - nu_beta", [1, -1, 0, 0]),
            rel("nu_alpha - 2 nu_gamma", [1, 0, -2, -2]),
            rel("nu_alpha + 2 nu_gamma", [1, 0, 2, 2]),
            rel("nu_alpha - 2 nu_eta", [1, 0, -2, 2]),
            rel("nu_alpha + 2 nu_eta", [1, 0, 2, -2]),
            rel("nu_alpha - 2 nu_phi", [1, 0, -2, 0]),
            rel("nu_alpha + 2 nu_phi", [1, 0, 2, 0]),
            rel("nu_alpha - 2 nu_psi", [1, 0, 0, -2]),
            rel("nu_alpha + 2 nu_psi", [1, 0, 0, 2]),
            rel("nu_phi", [0, 0, 1, 0]),
            rel("nu_psi", [0, 0, 0, 1]),
        ],
        ActionFamily::Polar => vec![
            rel("nu_rho - 2 nu_theta", [2, -2, 0, 0]),
            rel("nu_theta - 2 nu_phi - 2 nu_psi", [0, 1, -2, -2]),
            rel("nu_theta + 2 nu_phi + 2 nu_psi", [0, 1, 2, 2]),
            rel("nu_theta - 2 nu_phi + 2 nu_psi", [0, 1, -2, 2]),
            rel("nu_theta + 2 nu_phi - 2 nu_psi", [0, 1, 2, -2]),
            rel("nu_theta - 2 nu_phi", [0, 1, -2, 0]),
            rel("nu_theta + 2 nu_phi", [0, 1, 2, 0]),
            rel("nu_theta - 2 nu_psi", [0, 1, 0, -2]),
            rel("nu_theta + 2 nu_psi", [0, 1, 0, 2]),
            rel("nu_phi", [0, 0, 1, 0]),
            rel("nu_psi", [0, 0, 0, 1]),
        ],
    }
}

/// Candidate relations satisfied to relative `1e-9` at `a`.
pub fn resonance_check(m: &PotentialModel, a: &ActionSet) -> Result<Vec<ResonanceRelation>> {
    let nu = frequencies(m, a)?.as_array();
    let scale = nu.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    Ok(resonance_candidates(a.family)
        .into_iter()
        .filter(|r| {
            let lhs: f64 = r.coefficients.iter().zip(&nu).map(|(&c, v)| c as f64 * v).sum();
            let weight: f64 = r.coefficients.iter().map(|c| c.abs() as f64).sum();
            lhs.abs() <= 1e-9 * scale * weight
        })
        .collect())
}

/// Number of linearly independent relations in `rels`.
pub fn relation_rank(rels: &[ResonanceRelation]) -> usize {
    let mut rows: Vec<[f64; 4]> = rels.iter().map(|r| r.coefficients.map(|c| c as f64)).collect();
    let mut rank = 0;
    for col in 0..4 {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][col].abs() > 1e-12) else {
            continue;
        };
        rows.swap(rank, piv);
        let pr = rows[rank];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank {
                let f = row[col] / pr[col];
                for k in 0..4 {
                    row[k] -= f * pr[k];
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Bohr–Sommerfeld level with `h = 2πħ`.
///
/// Harmonic: `(ħω/2)(4n + |m − l| + |m + l|)`; anharmonic:
/// `(ħω/2)(4n + |m + l| + √((m − l)² + 16Cμ/ħ²))`.
pub fn bs_spectrum(m: &PotentialModel, q: &BsQuantumNumbers) -> Result<f64> {
    let p = &m.params;
    let hw = p.hbar * p.omega();
    let (n, mm, l) = (q.n as f64, q.m as f64, q.l as f64);
    let cb = barrier_strength(m)?;
    let root = ((mm - l).powi(2) + 16.0 * cb * p.mu / (p.hbar * p.hbar)).sqrt();
    Ok(0.5 * hw * (4.0 * n + (mm + l).abs() + root))
}
