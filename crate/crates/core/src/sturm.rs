//! Finite-difference Sturm–Liouville oracle for the separated equations.
//!
//! Solves `−(p f′)′ + q f = λ w f` on a flux-form three-point grid, so the
//! discrete operator is a symmetric tridiagonal pencil. Eigenvalues come from
//! Sturm-sequence bisection and are Richardson-extrapolated over two grids.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{polar_v_r, polar_v_theta, ModelKind, PotentialModel};
use crate::quantum::{self, Convention, HalfInt, QuantumNumbers, WaveVariable};

type Coef = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Endpoint treatment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    Dirichlet,
    /// `p` vanishes at the end; the grid is staggered by half a step and
    /// boundedness is imposed by the vanishing flux.
    RegularSingular,
}

/// Separated equation selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Equation {
    AlphaRadial,
    BetaRadial,
    ThetaAngular,
    RRadial,
    RhoRadial,
}

impl Equation {
    pub fn variable(self) -> WaveVariable {
        match self {
            Self::AlphaRadial => WaveVariable::Alpha,
            Self::BetaRadial => WaveVariable::Beta,
            Self::ThetaAngular => WaveVariable::Theta,
            Self::RRadial => WaveVariable::R,
            Self::RhoRadial => WaveVariable::Rho,
        }
    }
}

/// `−(p f′)′ + q f = λ w f` on `(lo, hi)`; the physical eigenvalue is `scale · λ`.
#[derive(Clone)]
pub struct SLProblem {
    pub p: Coef,
    /// `p′`, used only to check the expanded operator.
    pub dp: Coef,
    pub q: Coef,
    pub w: Coef,
    pub lo: f64,
    pub hi: f64,
    pub bc_lo: Boundary,
    pub bc_hi: Boundary,
    pub grid_n: usize,
    pub scale: f64,
    /// Endpoint behaviour factored out of the unknown before discretizing.
    pub factor: Option<Factor>,
}

/// `f = φ g`: the solver discretizes `−(pφ² g′)′ + φ²(q − k) g = λ wφ² g` with
/// `k = (pφ′)′/φ`, which has the same spectrum and a smooth `g` when `φ`
/// carries the Frobenius exponents of the singular ends.
#[derive(Clone)]
pub struct Factor {
    pub phi: Coef,
    pub k: Coef,
}

impl fmt::Debug for SLProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SLProblem")
            .field("lo", &self.lo)
            .field("hi", &self.hi)
            .field("bc_lo", &self.bc_lo)
            .field("bc_hi", &self.bc_hi)
            .field("grid_n", &self.grid_n)
            .field("scale", &self.scale)
            .field("factored", &self.factor.is_some())
            .finish()
    }
}

impl SLProblem {
    pub fn new<P, DP, Q, W>(p: P, dp: DP, q: Q, w: W, lo: f64, hi: f64, bc: (Boundary, Boundary)) -> Self
    where
        P: Fn(f64) -> f64 + Send + Sync + 'static,
        DP: Fn(f64) -> f64 + Send + Sync + 'static,
        Q: Fn(f64) -> f64 + Send + Sync + 'static,
        W: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            p: Arc::new(p),
            dp: Arc::new(dp),
            q: Arc::new(q),
            w: Arc::new(w),
            lo,
            hi,
            bc_lo: bc.0,
            bc_hi: bc.1,
            grid_n: DEFAULT_GRID,
            scale: 1.0,
            factor: None,
        }
    }

    pub fn with_factor<F, K>(mut self, phi: F, k: K) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        K: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        self.factor = Some(Factor { phi: Arc::new(phi), k: Arc::new(k) });
        self
    }

    /// Coefficients `(P, Q, W)` actually discretized.
    fn transformed(&self, x: f64) -> (f64, f64, f64) {
        match &self.factor {
            None => ((self.p)(x), (self.q)(x), (self.w)(x)),
            Some(fac) => {
                let f2 = (fac.phi)(x).powi(2);
                ((self.p)(x) * f2, f2 * ((self.q)(x) - (fac.k)(x)), (self.w)(x) * f2)
            }
        }
    }

    fn big_p(&self, x: f64) -> f64 {
        match &self.factor {
            None => (self.p)(x),
            Some(fac) => (self.p)(x) * (fac.phi)(x).powi(2),
        }
    }

    pub fn with_grid(mut self, n: usize) -> Self {
        self.grid_n = n;
        self
    }

    pub fn with_scale(mut self, s: f64) -> Self {
        self.scale = s;
        self
    }

    /// `−(1/w)(p f′)′ + (q/w) f` from the value and first two derivatives of `f`.
    pub fn apply(&self, x: f64, f: f64, df: f64, d2f: f64) -> f64 {
        (-((self.dp)(x) * df + (self.p)(x) * d2f) + (self.q)(x) * f) / (self.w)(x)
    }

    /// Grid nodes and step for `n` unknowns.
    pub fn grid(&self, n: usize) -> (Vec<f64>, f64) {
        use Boundary::*;
        let len = self.hi - self.lo;
        let nf = n as f64;
        let (h, first) = match (self.bc_lo, self.bc_hi) {
            (RegularSingular, RegularSingular) => (len / nf, 0.5),
            (RegularSingular, Dirichlet) => (len / (nf + 0.5), 0.5),
            (Dirichlet, RegularSingular) => (len / (nf + 0.5), 1.0),
            (Dirichlet, Dirichlet) => (len / (nf + 1.0), 1.0),
        };
        ((0..n).map(|i| self.lo + (i as f64 + first) * h).collect(), h)
    }

    /// Symmetric tridiagonal `W^{-1/2} A W^{-1/2}` as `(diagonal, off-diagonal)`,
    /// with the node positions and `√w`.
    fn matrix(&self, n: usize) -> Result<Discrete> {
        let (x, h) = self.grid(n);
        let h2 = h * h;
        let flux = |xm: f64, at_singular_end: bool| if at_singular_end { 0.0 } else { self.big_p(xm) };
        let mut d = Vec::with_capacity(n);
        let mut e = Vec::with_capacity(n.saturating_sub(1));
        let mut sw = Vec::with_capacity(n);
        for (i, &xi) in x.iter().enumerate() {
            let left = flux(xi - 0.5 * h, i == 0 && self.bc_lo == Boundary::RegularSingular);
            let right = flux(xi + 0.5 * h, i + 1 == n && self.bc_hi == Boundary::RegularSingular);
            let (_, q, w) = self.transformed(xi);
            if !(w > 0.0) || !(left >= 0.0 && right >= 0.0) {
                return Err(Error::Solver(format!("p or w not positive near x = {xi}")));
            }
            if !q.is_finite() {
                return Err(Error::Solver(format!("q not finite at x = {xi}")));
            }
            sw.push(w.sqrt());
            d.push(((left + right) / h2 + q) / w);
            if i + 1 < n {
                e.push(right / h2);
            }
        }
        for (i, ei) in e.iter_mut().enumerate() {
            *ei = -*ei / (sw[i] * sw[i + 1]);
        }
        let phi = match &self.factor {
            None => vec![1.0; n],
            Some(fac) => x.iter().map(|&xi| (fac.phi)(xi)).collect(),
        };
        Ok(Discrete { x, d, e, sw, phi })
    }
}

pub const DEFAULT_GRID: usize = 2000;

struct Discrete {
    x: Vec<f64>,
    d: Vec<f64>,
    e: Vec<f64>,
    sw: Vec<f64>,
    phi: Vec<f64>,
}

impl Discrete {
    /// Number of eigenvalues below `s`.
    fn count_below(&self, s: f64) -> usize {
        let mut count = 0;
        let mut u = 1.0;
        for i in 0..self.d.len() {
            let e2 = if i == 0 { 0.0 } else { self.e[i - 1] * self.e[i - 1] };
            u = self.d[i] - s - if i == 0 { 0.0 } else { e2 / u };
            if u == 0.0 {
                u = -f64::EPSILON * (self.d[i].abs() + s.abs()).max(f64::MIN_POSITIVE);
            }
            if u < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.d.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.e[i - 1].abs() } else { 0.0 } + if i + 1 < n { self.e[i].abs() } else { 0.0 };
            lo = lo.min(self.d[i] - r);
            hi = hi.max(self.d[i] + r);
        }
        (lo, hi)
    }

    /// The `k` lowest eigenvalues by bisection.
    fn lowest(&self, k: usize) -> Result<Vec<f64>> {
        let (glo, ghi) = self.gershgorin();
        if self.d.len() < k {
            return Err(Error::Solver(format!("grid has {} unknowns, {k} eigenvalues requested", self.d.len())));
        }
        let mut out = Vec::with_capacity(k);
        let mut lo = glo;
        for idx in 0..k {
            // the (idx+1)-th eigenvalue is the smallest s with count_below(s) > idx
            let mut a = lo;
            let mut b = ghi;
            if self.count_below(b) <= idx {
                return Err(Error::Solver(format!("bisection bracket [{a}, {b}] holds fewer than {} eigenvalues", idx + 1)));
            }
            let mut iters = 0;
            while b - a > 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(1e-300) {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                if self.count_below(mid) > idx {
                    b = mid;
                } else {
                    a = mid;
                }
                iters += 1;
                if iters > 400 {
                    return Err(Error::Solver(format!("bisection did not converge in [{a}, {b}] for eigenvalue {idx}")));
                }
            }
            let v = 0.5 * (a + b);
            out.push(v);
            lo = a;
        }
        Ok(out)
    }

    /// Inverse iteration on `B − σ` with a partially pivoted tridiagonal LU.
    fn eigenvector(&self, sigma: f64) -> Result<Vec<f64>> {
        let n = self.d.len();
        let shift = sigma + 1e-10 * sigma.abs().max(1.0);
        let mut v = vec![1.0; n];
        for (i, vi) in v.iter_mut().enumerate() {
            *vi += 1e-3 * ((i * 7919) % 97) as f64;
        }
        for _ in 0..3 {
            v = tridiag_solve(&self.d, &self.e, shift, &v)?;
            let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if !(nrm.is_finite() && nrm > 0.0) {
                return Err(Error::Solver("inverse iteration broke down".into()));
            }
            v.iter_mut().for_each(|x| *x /= nrm);
        }
        Ok(v)
    }
}

/// Solves `(T − s) x = b` for symmetric tridiagonal `T` with partial pivoting.
fn tridiag_solve(d: &[f64], e: &[f64], s: f64, b: &[f64]) -> Result<Vec<f64>> {
    let n = d.len();
    // rows as (sub, diag, sup, sup2) during elimination
    let mut dl: Vec<f64> = e.to_vec();
    let mut dd: Vec<f64> = d.iter().map(|x| x - s).collect();
    let mut du: Vec<f64> = e.to_vec();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let mut rhs = b.to_vec();
    for i in 0..n.saturating_sub(1) {
        if dd[i].abs() >= dl[i].abs() {
            if dd[i] == 0.0 {
                dd[i] = f64::EPSILON;
            }
            let f = dl[i] / dd[i];
            dl[i] = f;
            dd[i + 1] -= f * du[i];
            rhs[i + 1] -= f * rhs[i];
        } else {
            let f = dd[i] / dl[i];
            dd[i] = dl[i];
            dl[i] = f;
            let tmp = du[i];
            du[i] = dd[i + 1];
            dd[i + 1] = tmp - f * dd[i + 1];
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] *= -f;
            }
            rhs.swap(i, i + 1);
            rhs[i + 1] -= f * rhs[i];
        }
    }
    if n > 0 && dd[n - 1] == 0.0 {
        dd[n - 1] = f64::EPSILON;
    }
    let mut x = rhs;
    for i in (0..n).rev() {
        let mut v = x[i];
        if i + 1 < n {
            v -= du[i] * x[i + 1];
        }
        if i + 2 < n {
            v -= du2[i] * x[i + 2];
        }
        x[i] = v / dd[i];
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Solver("tridiagonal solve produced non-finite values".into()));
    }
    Ok(x)
}

/// Eigenvalues on `grid_n`, on `2·grid_n` and their order-2 extrapolation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenResult {
    pub grid_n: usize,
    pub coarse: Vec<f64>,
    pub fine: Vec<f64>,
    pub extrapolated: Vec<f64>,
    /// `|extrapolated − fine|`.
    pub error_estimates: Vec<f64>,
    pub scale: f64,
}

impl EigenResult {
    /// Extrapolated eigenvalues in physical units.
    pub fn physical(&self) -> Vec<f64> {
        self.extrapolated.iter().map(|l| l * self.scale).collect()
    }
}

pub fn lowest_eigenvalues(prob: &SLProblem, k: usize) -> Result<EigenResult> {
    if k == 0 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    if prob.grid_n < 200 {
        return Err(Error::Domain(format!("grid_n = {} below 200", prob.grid_n)));
    }
    let (n1, n2) = (prob.grid_n, 2 * prob.grid_n);
    let c = prob.matrix(n1)?.lowest(k)?;
    let f = prob.matrix(n2)?.lowest(k)?;
    let (h1, h2) = (prob.grid(n1).1, prob.grid(n2).1);
    let (a, b) = (h1 * h1, h2 * h2);
    let extrapolated: Vec<f64> = c.iter().zip(&f).map(|(lc, lf)| (a * lf - b * lc) / (a - b)).collect();
    for wdw in extrapolated.windows(2) {
        if !(wdw[1] > wdw[0]) {
            return Err(Error::Solver(format!("eigenvalues not strictly increasing: {} then {}", wdw[0], wdw[1])));
        }
    }
    let error_estimates = extrapolated.iter().zip(&f).map(|(x, y)| (x - y).abs()).collect();
    Ok(EigenResult { grid_n: n1, coarse: c, fine: f, extrapolated, error_estimates, scale: prob.scale })
}

/// Discrete eigenvectors at `grid_n` as `(nodes, values)` with `Σ w f_i f_j h = δ_ij`.
pub fn eigenvectors(prob: &SLProblem, k: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let disc = prob.matrix(prob.grid_n)?;
    let h = prob.grid(prob.grid_n).1;
    let vals = disc.lowest(k)?;
    let mut out = Vec::with_capacity(k);
    for &l in &vals {
        let v = disc.eigenvector(l)?;
        out.push(v.iter().zip(&disc.sw).zip(&disc.phi).map(|((vi, s), f)| f * vi / (s * h.sqrt())).collect());
    }
    Ok((disc.x, out))
}

/// Cutoff where `e^{−κx²/2}` drops below `1e-14`, rounded up.
fn gaussian_cutoff(kappa: f64) -> f64 {
    (2.0 * 14.0 * std::f64::consts::LN_10 / kappa).sqrt().ceil()
}

/// Self-adjoint data of one separated equation. `e_theta` is the separation
/// constant of the radial equations (ignored otherwise), in the split of
/// [`polar_v_theta`].
pub fn build_problem(
    eq: Equation,
    model: &PotentialModel,
    m: HalfInt,
    l: HalfInt,
    conv: Convention,
    e_theta: Option<f64>,
) -> Result<SLProblem> {
    let qn = QuantumNumbers::with_convention(0, 0, m, l, conv)?;
    let (mi, li) = (qn.m as f64, qn.l as f64);
    let par = model.params;
    let k2 = 2.0 * par.mu / (par.hbar * par.hbar);
    let c = par.c;
    let kind = model.kind;
    let unsupported = || Err(Error::Unsupported(format!("{eq:?} is not a bound-state slice of the {kind} model")));
    if !matches!(kind, ModelKind::Harmonic | ModelKind::AnharmonicAlphaBeta | ModelKind::AnharmonicRTheta) {
        return unsupported();
    }
    let singular_dirichlet = (Boundary::RegularSingular, Boundary::Dirichlet);
    Ok(match eq {
        Equation::AlphaRadial | Equation::BetaRadial => {
            let (cent, barrier) = if eq == Equation::AlphaRadial {
                ((mi - li).powi(2) / 4.0, if kind.is_anharmonic() { 2.0 * c } else { 0.0 })
            } else {
                ((mi + li).powi(2) / 4.0, 0.0)
            };
            let hi = gaussian_cutoff(par.kappa());
            let nu = (cent + k2 * barrier).sqrt();
            SLProblem::new(
                |x| x,
                |_| 1.0,
                move |x| cent / x + k2 * x * (0.5 * c * x * x + barrier / (x * x)),
                |x| x,
                0.0,
                hi,
                singular_dirichlet,
            )
            .with_scale(1.0 / k2)
            .with_factor(move |x| x.powf(nu), move |x| nu * nu / x)
        }
        Equation::ThetaAngular => {
            let mm = *model;
            let g = par.mu / (2.0 * par.hbar * par.hbar);
            // exponents of sin(ϑ/2) and cos(ϑ/2) from the barriers at ϑ = 0 and π
            let sec2 = if kind.is_anharmonic() { 2.0 * c } else { 0.0 };
            let ga = 0.5 * (mi + li).abs();
            let ch = 2.0 * ((mi - li).powi(2) / 16.0 + g * sec2).sqrt();
            SLProblem::new(
                f64::sin,
                f64::cos,
                move |t: f64| {
                    let s = t.sin();
                    let v = polar_v_theta(&mm, t).unwrap_or(f64::INFINITY);
                    s * ((mi * mi + 2.0 * mi * li * t.cos() + li * li) / (4.0 * s * s) + g * v)
                },
                f64::sin,
                0.0,
                std::f64::consts::PI,
                (Boundary::RegularSingular, Boundary::RegularSingular),
            )
            .with_scale(1.0 / g)
            .with_factor(
                move |t: f64| {
                    let (s, co) = (0.5 * t).sin_cos();
                    s.powf(ga) * co.powf(ch)
                },
                move |t: f64| {
                    let (s, co) = (0.5 * t).sin_cos();
                    0.5 * ga * ga * co.powi(3) / s + 0.5 * ch * ch * s.powi(3) / co - (ga * ch + ga + ch) * s * co
                },
            )
        }
        Equation::RRadial | Equation::RhoRadial => {
            let Some(e) = e_theta else {
                return Err(Error::Domain("radial equation needs the separation constant e_theta".into()));
            };
            let mm = *model;
            let kappa = par.kappa();
            let disc = 1.0 + k2 * e;
            if disc < 0.0 {
                return Err(Error::Domain(format!("e_theta = {e} leaves no bounded radial solution")));
            }
            if eq == Equation::RRadial {
                let sr = -0.5 + 0.5 * disc.sqrt();
                let hi = (2.0 * 14.0 * std::f64::consts::LN_10 / kappa).ceil();
                SLProblem::new(|r| 4.0 * r * r, |r| 8.0 * r, move |r| k2 * (r * polar_v_r(&mm, r) + e), |r| r, 0.0, hi, singular_dirichlet)
                    .with_scale(1.0 / k2)
                    .with_factor(move |r| r.powf(sr), move |_| 4.0 * sr * (sr + 1.0))
            } else {
                let hi = gaussian_cutoff(kappa);
                let t = disc.sqrt() - 1.0;
                SLProblem::new(
                    |x| x * x * x,
                    |x| 3.0 * x * x,
                    move |x| k2 * x * x * x * (polar_v_r(&mm, x * x) + e / (x * x)),
                    |x| x * x * x,
                    0.0,
                    hi,
                    singular_dirichlet,
                )
                .with_scale(1.0 / k2)
                .with_factor(move |x| x.powf(t), move |x| t * (t + 2.0) * x)
            }
        }
    })
}

/// Separation used to assemble composite levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Separation {
    AlphaBeta,
    Polar,
}

impl Separation {
    pub fn default_for(kind: ModelKind) -> Self {
        if kind == ModelKind::AnharmonicRTheta {
            Self::Polar
        } else {
            Self::AlphaBeta
        }
    }
}

/// One analytic-versus-oracle row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    /// `"alpha"`, `"beta"`, `"theta"` for slice eigenvalues, `"level"` for `E`.
    pub quantity: String,
    pub numbers: QuantumNumbers,
    pub analytic: f64,
    pub oracle: f64,
    pub rel_error: f64,
    pub error_estimate: f64,
}

/// `floor` is the natural unit of the quantity, used when the analytic value is zero.
fn row(quantity: &str, numbers: QuantumNumbers, analytic: f64, oracle: f64, est: f64, floor: f64) -> Comparison {
    Comparison {
        quantity: quantity.into(),
        numbers,
        analytic,
        oracle,
        rel_error: (oracle - analytic).abs() / analytic.abs().max(floor),
        error_estimate: est,
    }
}

/// Oracle check of the `k` lowest slice eigenvalues and the composite levels
/// with `n_a, n_b < k`, using the model's natural separation.
pub fn validate_spectrum(model: &PotentialModel, m: i32, l: i32, k: usize) -> Result<Vec<Comparison>> {
    validate_spectrum_with(model, Separation::default_for(model.kind), m, l, k)
}

pub fn validate_spectrum_with(model: &PotentialModel, sep: Separation, m: i32, l: i32, k: usize) -> Result<Vec<Comparison>> {
    validate_spectrum_on(model, sep, m, l, k, DEFAULT_GRID)
}

/// As [`validate_spectrum_with`] on a coarse grid of `grid_n` cells.
pub fn validate_spectrum_on(model: &PotentialModel, sep: Separation, m: i32, l: i32, k: usize, grid_n: usize) -> Result<Vec<Comparison>> {
    let kind = model.kind;
    let p = model.params;
    let (mh, lh) = (HalfInt::int(m), HalfInt::int(l));
    let conv = Convention::Integer;
    let qn = |na: usize, nb: usize| QuantumNumbers::new(na as u32, nb as u32, m, l);
    let hw = p.hbar * p.omega();
    let eunit = p.hbar * p.hbar / p.mu;
    let mut rows = Vec::new();
    match sep {
        Separation::AlphaBeta => {
            let ra = lowest_eigenvalues(&build_problem(Equation::AlphaRadial, model, mh, lh, conv, None)?.with_grid(grid_n), k)?;
            let rb = lowest_eigenvalues(&build_problem(Equation::BetaRadial, model, mh, lh, conv, None)?.with_grid(grid_n), k)?;
            let (ea, eb) = (ra.physical(), rb.physical());
            for n in 0..k {
                let q = qn(n, n);
                rows.push(row(
                    "alpha",
                    q,
                    quantum::slice_eigenvalue(kind, WaveVariable::Alpha, &q, &p)?,
                    ea[n],
                    ra.error_estimates[n] * ra.scale,
                    hw,
                ));
                rows.push(row(
                    "beta",
                    q,
                    quantum::slice_eigenvalue(kind, WaveVariable::Beta, &q, &p)?,
                    eb[n],
                    rb.error_estimates[n] * rb.scale,
                    hw,
                ));
            }
            for na in 0..k {
                for nb in 0..k - na {
                    let q = qn(na, nb);
                    let est = ra.error_estimates[na] * ra.scale + rb.error_estimates[nb] * rb.scale;
                    rows.push(row("level", q, quantum::energy(kind, &q, &p)?.energy, ea[na] + eb[nb], est, hw));
                }
            }
        }
        Separation::Polar => {
            let rt = lowest_eigenvalues(&build_problem(Equation::ThetaAngular, model, mh, lh, conv, None)?.with_grid(grid_n), k)?;
            let et = rt.physical();
            for (nt, &e) in et.iter().enumerate() {
                let q = qn(0, nt);
                rows.push(row(
                    "theta",
                    q,
                    quantum::slice_eigenvalue(kind, WaveVariable::Theta, &q, &p)?,
                    e,
                    rt.error_estimates[nt] * rt.scale,
                    eunit,
                ));
                let rr = lowest_eigenvalues(&build_problem(Equation::RRadial, model, mh, lh, conv, Some(e))?.with_grid(grid_n), k - nt)?;
                for (nr, &er) in rr.physical().iter().enumerate() {
                    let q = qn(nr, nt);
                    rows.push(row("level", q, quantum::energy(kind, &q, &p)?.energy, er, rr.error_estimates[nr] * rr.scale, hw));
                }
            }
        }
    }
    Ok(rows)
}
