//! Potentials, Hamiltonians and constants of motion.

use serde::{Deserialize, Serialize};

use crate::charts::{invariants_with_gradient, Chart, ChartPoint};
use crate::error::{domain, Error, Result};

/// Inertia `μ`, stiffness `C` and Planck constant `ħ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalParams {
    pub mu: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub hbar: f64,
}

impl PhysicalParams {
    pub fn new(mu: f64, c: f64, hbar: f64) -> Result<Self> {
        let p = Self { mu, c, hbar };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("mu", self.mu), ("C", self.c), ("hbar", self.hbar)] {
            if !(v > 0.0 && v.is_finite()) {
                return domain(format!("{name} must be positive and finite"));
            }
        }
        Ok(())
    }

    /// `ω = √(C/μ)`
    pub fn omega(&self) -> f64 {
        (self.c / self.mu).sqrt()
    }

    /// `κ = √(Cμ)/ħ`
    pub fn kappa(&self) -> f64 {
        (self.c * self.mu).sqrt() / self.hbar
    }
}

impl Default for PhysicalParams {
    fn default() -> Self {
        Self { mu: 1.0, c: 1.0, hbar: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Free,
    /// `V = (C/2)(α² + β²)`
    Harmonic,
    /// `V = (C/2)(α² + 4/α²) + (C/2)β²`
    AnharmonicAlphaBeta,
    /// `V = (C/2)ρ² + (2C/ρ²)/cos²(ϑ/2)`
    AnharmonicRTheta,
    /// `V = C(1/(D₁D₂) + (D₁² + D₂²)/2)`
    CollapseGuard,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] =
        [ModelKind::Free, ModelKind::Harmonic, ModelKind::AnharmonicAlphaBeta, ModelKind::AnharmonicRTheta, ModelKind::CollapseGuard];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Free => "free",
            ModelKind::Harmonic => "harmonic",
            ModelKind::AnharmonicAlphaBeta => "anharmonic-alpha-beta",
            ModelKind::AnharmonicRTheta => "anharmonic-r-theta",
            ModelKind::CollapseGuard => "collapse-guard",
        }
    }

    pub fn is_anharmonic(self) -> bool {
        matches!(self, ModelKind::AnharmonicAlphaBeta | ModelKind::AnharmonicRTheta)
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ModelKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| Error::Unsupported(format!("unknown model '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialModel {
    pub kind: ModelKind,
    pub params: PhysicalParams,
}

impl PotentialModel {
    pub fn new(kind: ModelKind, params: PhysicalParams) -> Self {
        Self { kind, params }
    }
}

/// A chart point with its conjugate momenta (same coordinate order).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseState {
    pub point: ChartPoint,
    pub momenta: [f64; 4],
}

impl PhaseState {
    pub fn new(point: ChartPoint, momenta: [f64; 4]) -> Self {
        Self { point, momenta }
    }

    pub fn chart(&self) -> Chart {
        self.point.chart
    }

    /// Canonical coordinates flattened as `(q₁..q₄, p₁..p₄)`.
    pub fn to_vector(&self) -> [f64; 8] {
        let mut v = [0.0; 8];
        v[..4].copy_from_slice(&self.point.coords);
        v[4..].copy_from_slice(&self.momenta);
        v
    }

    pub fn from_vector(chart: Chart, v: &[f64; 8]) -> Self {
        Self::new(ChartPoint::new(chart, [v[0], v[1], v[2], v[3]]), [v[4], v[5], v[6], v[7]])
    }

    /// Re-expresses the state in another chart by the induced cotangent map.
    pub fn to_chart(&self, target: Chart) -> Result<PhaseState> {
        let (q, p) = crate::charts::transform_covector(&self.point, &self.momenta, target)?;
        Ok(PhaseState::new(q, p))
    }
}

/// `V(s, d)` and its partials, where `s = D₁² + D₂²` and `d = D₁D₂`.
fn potential_of_invariants(m: &PotentialModel, s: f64, d: f64) -> Result<(f64, f64, f64)> {
    let c = m.params.c;
    match m.kind {
        ModelKind::Free => Ok((0.0, 0.0, 0.0)),
        ModelKind::Harmonic => Ok((0.5 * c * s, 0.5 * c, 0.0)),
        ModelKind::AnharmonicAlphaBeta | ModelKind::AnharmonicRTheta => {
            // s + 2d = (D₁ + D₂)² = 2α²
            let w = s + 2.0 * d;
            if w <= 1e-300 {
                return domain("alpha = 0: anharmonic barrier is singular");
            }
            let k = 4.0 * c / (w * w);
            Ok((0.5 * c * s + 4.0 * c / w, 0.5 * c - k, -2.0 * k))
        }
        ModelKind::CollapseGuard => {
            if d <= 0.0 {
                return domain("D1*D2 > 0 required by the collapse-guard potential");
            }
            Ok((c * (1.0 / d + 0.5 * s), 0.5 * c, -c / (d * d)))
        }
    }
}

/// `V` at a point of any chart.
pub fn potential_value(m: &PotentialModel, p: &ChartPoint) -> Result<f64> {
    Ok(potential_with_gradient(m, p)?.0)
}

/// `V` and `∂V/∂q` in the point's chart.
pub fn potential_with_gradient(m: &PotentialModel, p: &ChartPoint) -> Result<(f64, [f64; 4])> {
    let ((s, d), (gs, gd)) = invariants_with_gradient(p)?;
    let (v, vs, vd) = potential_of_invariants(m, s, d)?;
    let mut g = [0.0; 4];
    for i in 0..4 {
        g[i] = vs * gs[i] + vd * gd[i];
    }
    Ok((v, g))
}

/// Kinetic Hamiltonian `(1/2μ) G^{ij} p_i p_j` with `∂/∂q` and `∂/∂p`.
pub fn kinetic_with_gradient(s: &PhaseState, mu: f64) -> Result<(f64, [f64; 4], [f64; 4])> {
    let q = &s.point.coords;
    let p = &s.momenta;
    let k = 0.5 / mu;
    let sing = |v: f64, what: &str| -> Result<()> {
        if v.abs() > 1e-12 && v.is_finite() {
            Ok(())
        } else {
            domain(format!("{what} = 0: singular locus of the chart"))
        }
    };
    if q.iter().chain(p.iter()).any(|v| !v.is_finite()) {
        return domain("non-finite phase-space coordinates");
    }
    let out = match s.point.chart {
        Chart::Cartesian => {
            let t = k * p.iter().map(|v| v * v).sum::<f64>();
            (t, [0.0; 4], p.map(|v| 2.0 * k * v))
        }
        Chart::TwoPolar => {
            let (d1, d2) = (q[2], q[3]);
            let (sg, dl) = (d1 + d2, d1 - d2);
            sing(sg, "D1 + D2")?;
            sing(dl, "D1 - D2")?;
            let a = p[0] - p[1];
            let b = p[0] + p[1];
            let (s2, l2) = (sg * sg, dl * dl);
            let t = k * (a * a / (2.0 * s2) + b * b / (2.0 * l2) + p[2] * p[2] + p[3] * p[3]);
            let ga = -a * a / (s2 * sg);
            let gb = b * b / (l2 * dl);
            (t, [0.0, 0.0, k * (ga - gb), k * (ga + gb)], [k * (a / s2 + b / l2), k * (-a / s2 + b / l2), 2.0 * k * p[2], 2.0 * k * p[3]])
        }
        Chart::AlphaBeta => {
            let (al, be) = (q[2], q[3]);
            sing(al, "alpha")?;
            sing(be, "beta")?;
            let (a2, b2) = (al * al, be * be);
            let t = k * (p[0] * p[0] / a2 + p[1] * p[1] / b2 + p[2] * p[2] + p[3] * p[3]);
            (
                t,
                [0.0, 0.0, -2.0 * k * p[0] * p[0] / (a2 * al), -2.0 * k * p[1] * p[1] / (b2 * be)],
                [2.0 * k * p[0] / a2, 2.0 * k * p[1] / b2, 2.0 * k * p[2], 2.0 * k * p[3]],
            )
        }
        Chart::PolarRTheta => {
            let (r, th) = (q[2], q[3]);
            if r <= 0.0 {
                return domain("r > 0 required");
            }
            let (sn, cs) = th.sin_cos();
            sing(sn, "sin theta")?;
            let s2 = sn * sn;
            let w = p[0] * p[0] + p[1] * p[1] + 2.0 * p[0] * p[1] * cs;
            let ang = w / s2 + 4.0 * p[3] * p[3];
            let t = k * (4.0 * r * p[2] * p[2] + ang / r);
            let dw = -2.0 * p[0] * p[1] / sn - 2.0 * w * cs / (s2 * sn);
            (
                t,
                [0.0, 0.0, k * (4.0 * p[2] * p[2] - ang / (r * r)), k * dw / r],
                [k * 2.0 * (p[0] + p[1] * cs) / (r * s2), k * 2.0 * (p[1] + p[0] * cs) / (r * s2), 8.0 * k * r * p[2], 8.0 * k * p[3] / r],
            )
        }
        Chart::RhoEpsilon => {
            let (rho, eps) = (q[2], q[3]);
            if rho <= 0.0 {
                return domain("rho > 0 required");
            }
            let (sn, cs) = eps.sin_cos();
            sing(sn, "sin epsilon")?;
            sing(cs, "cos epsilon")?;
            let (s2, c2, r2) = (sn * sn, cs * cs, rho * rho);
            let bracket = p[0] * p[0] / c2 + p[1] * p[1] / s2 + p[3] * p[3];
            let t = k * (bracket / r2 + p[2] * p[2]);
            let de = 2.0 * p[0] * p[0] * sn / (c2 * cs) - 2.0 * p[1] * p[1] * cs / (s2 * sn);
            (
                t,
                [0.0, 0.0, -2.0 * k * bracket / (r2 * rho), k * de / r2],
                [2.0 * k * p[0] / (r2 * c2), 2.0 * k * p[1] / (r2 * s2), 2.0 * k * p[2], 2.0 * k * p[3] / r2],
            )
        }
        Chart::ExponentialAB => {
            let (a, b) = (q[2], q[3]);
            sing(b, "b")?;
            let ema = (-a).exp();
            let (ch, sh) = (b.cosh(), b.sinh());
            let sh2 = sh * sh;
            let n = ch * (p[0] * p[0] + p[1] * p[1]) + 2.0 * p[0] * p[1];
            let mm = ch * (p[2] * p[2] + p[3] * p[3]) - 2.0 * sh * p[2] * p[3];
            let t = k * ema * (n / (2.0 * sh2) + 2.0 * mm);
            let dn = sh * (p[0] * p[0] + p[1] * p[1]);
            let dm = sh * (p[2] * p[2] + p[3] * p[3]) - 2.0 * ch * p[2] * p[3];
            let db = k * ema * (0.5 * dn / sh2 - n * ch / (sh2 * sh) + 2.0 * dm);
            (
                t,
                [0.0, 0.0, -t, db],
                [
                    k * ema * (ch * p[0] + p[1]) / sh2,
                    k * ema * (ch * p[1] + p[0]) / sh2,
                    4.0 * k * ema * (ch * p[2] - sh * p[3]),
                    4.0 * k * ema * (ch * p[3] - sh * p[2]),
                ],
            )
        }
        Chart::Elliptic => {
            let (kap, lam) = (q[2], q[3]);
            let (ch, shk) = (kap.cosh(), kap.sinh());
            let (sl, cl) = lam.sin_cos();
            let delta = ch * ch - cl * cl;
            sing(delta, "cosh^2 kappa - cos^2 lambda")?;
            sing(cl, "cos lambda")?;
            sing(shk * sl, "sinh kappa sin lambda")?;
            let (ch2, sh2, c2, s2) = (ch * ch, shk * shk, cl * cl, sl * sl);
            let pk = p[2] * p[2] + p[3] * p[3];
            let h = 0.5 * k;
            let t = h * (pk / delta + p[0] * p[0] / (ch2 * c2) + p[1] * p[1] / (sh2 * s2));
            let dk = h
                * (-pk * 2.0 * ch * shk / (delta * delta)
                    - p[0] * p[0] * 2.0 * shk / (ch2 * ch * c2)
                    - p[1] * p[1] * 2.0 * ch / (sh2 * shk * s2));
            let dlam = h
                * (-pk * 2.0 * cl * sl / (delta * delta) + p[0] * p[0] * 2.0 * sl / (ch2 * c2 * cl)
                    - p[1] * p[1] * 2.0 * cl / (sh2 * s2 * sl));
            (
                t,
                [0.0, 0.0, dk, dlam],
                [2.0 * h * p[0] / (ch2 * c2), 2.0 * h * p[1] / (sh2 * s2), 2.0 * h * p[2] / delta, 2.0 * h * p[3] / delta],
            )
        }
    };
    Ok(out)
}

/// `H = (1/2μ) G^{ij} p_i p_j + V`.
pub fn hamiltonian(m: &PotentialModel, s: &PhaseState) -> Result<f64> {
    let (t, _, _) = kinetic_with_gradient(s, m.params.mu)?;
    Ok(t + potential_value(m, &s.point)?)
}

/// `(∂H/∂q, ∂H/∂p)`.
pub fn hamiltonian_gradient(m: &PotentialModel, s: &PhaseState) -> Result<([f64; 4], [f64; 4])> {
    let (_, tq, tp) = kinetic_with_gradient(s, m.params.mu)?;
    let (_, vq) = potential_with_gradient(m, &s.point)?;
    let mut dq = [0.0; 4];
    for i in 0..4 {
        dq[i] = tq[i] + vq[i];
    }
    Ok((dq, tp))
}

/// A named scalar on phase space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedValue {
    pub name: &'static str,
    pub value: f64,
}

fn named(name: &'static str, value: f64) -> NamedValue {
    NamedValue { name, value }
}

/// Which chart [`constants_of_motion`] evaluates a state in.
pub fn constants_chart(m: &PotentialModel, chart: Chart) -> Result<Chart> {
    match chart {
        Chart::Cartesian => Ok(Chart::Cartesian),
        Chart::AlphaBeta if m.kind != ModelKind::CollapseGuard => Ok(Chart::AlphaBeta),
        Chart::AlphaBeta => Err(Error::Unsupported("collapse-guard does not separate in (alpha, beta); use the polar chart".into())),
        Chart::Elliptic if m.kind == ModelKind::Free => Ok(Chart::Elliptic),
        Chart::Elliptic => Err(Error::Unsupported(format!("{} model has no elliptic constants of motion (geodetic case only)", m.kind))),
        _ => Ok(Chart::PolarRTheta),
    }
}

/// The involutive constants of motion certifying separability.
///
/// * Cartesian: `H, p_φ, p_ψ`
/// * `AlphaBeta`: `p_φ, p_ψ, H_α, H_β`
/// * `Elliptic` (free motion): `p_φ, p_ψ, K, L`
/// * all other charts are evaluated in `PolarRTheta`: `p_φ, p_ψ, h_ϑ, H`
pub fn constants_of_motion(m: &PotentialModel, s: &PhaseState) -> Result<Vec<NamedValue>> {
    let target = constants_chart(m, s.chart())?;
    let st = if target == s.chart() { *s } else { s.to_chart(target)? };
    let mu = m.params.mu;
    let c = m.params.c;
    let q = &st.point.coords;
    let p = &st.momenta;
    match target {
        Chart::Cartesian => {
            let p_phi = -p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1];
            let p_psi = -p[0] * q[1] + p[1] * q[0] - p[2] * q[3] + p[3] * q[2];
            Ok(vec![named("H", hamiltonian(m, &st)?), named("p_phi", p_phi), named("p_psi", p_psi)])
        }
        Chart::AlphaBeta => {
            let (al, be) = (q[2], q[3]);
            if al == 0.0 || be == 0.0 {
                return domain("alpha and beta must be nonzero");
            }
            let k = 0.5 / mu;
            let v_alpha = match m.kind {
                ModelKind::Free => 0.0,
                ModelKind::Harmonic => 0.5 * c * al * al,
                _ => 0.5 * c * (al * al + 4.0 / (al * al)),
            };
            let v_beta = if m.kind == ModelKind::Free { 0.0 } else { 0.5 * c * be * be };
            Ok(vec![
                named("p_phi", p[0] + p[1]),
                named("p_psi", p[1] - p[0]),
                named("H_alpha", k * (p[2] * p[2] + p[0] * p[0] / (al * al)) + v_alpha),
                named("H_beta", k * (p[3] * p[3] + p[1] * p[1] / (be * be)) + v_beta),
            ])
        }
        Chart::PolarRTheta => {
            let th = q[3];
            let sn = th.sin();
            if sn == 0.0 {
                return domain("sin theta = 0: singular locus of the polar chart");
            }
            let w = p[0] * p[0] + p[1] * p[1] + 2.0 * p[0] * p[1] * th.cos();
            let h_theta = w / (2.0 * mu * sn * sn) + 2.0 * p[3] * p[3] / mu + polar_v_theta(m, th)?;
            Ok(vec![named("p_phi", p[0]), named("p_psi", p[1]), named("h_theta", h_theta), named("H", hamiltonian(m, &st)?)])
        }
        Chart::Elliptic => {
            let (hk, hl) = elliptic_separation_functions(&st, mu);
            let (kap, lam) = (q[2], q[3]);
            let (ch2, sh2) = (kap.cosh().powi(2), kap.sinh().powi(2));
            let (c2, s2) = (lam.cos().powi(2), lam.sin().powi(2));
            let two_delta = 2.0 * (ch2 - c2);
            Ok(vec![
                named("p_phi", p[0] + p[1]),
                named("p_psi", p[1] - p[0]),
                named("K", (hk * c2 + hl * ch2) / two_delta),
                named("L", (hk * s2 - hl * sh2) / two_delta),
            ])
        }
        _ => unreachable!(),
    }
}

/// Angular part `V_ϑ` of a potential written as `V_r(r) + V_ϑ(ϑ)/r`.
pub fn polar_v_theta(m: &PotentialModel, theta: f64) -> Result<f64> {
    let c = m.params.c;
    match m.kind {
        ModelKind::Free | ModelKind::Harmonic => Ok(0.0),
        ModelKind::AnharmonicAlphaBeta | ModelKind::AnharmonicRTheta => {
            let ch = (0.5 * theta).cos();
            if ch == 0.0 {
                return domain("cos(theta/2) = 0");
            }
            Ok(2.0 * c / (ch * ch))
        }
        ModelKind::CollapseGuard => {
            let cs = theta.cos();
            if cs <= 0.0 {
                return domain("cos theta > 0 required by the collapse-guard potential");
            }
            Ok(2.0 * c / cs)
        }
    }
}

/// Radial part `V_r(r)` of a potential written as `V_r(r) + V_ϑ(ϑ)/r`.
pub fn polar_v_r(m: &PotentialModel, r: f64) -> f64 {
    match m.kind {
        ModelKind::Free => 0.0,
        _ => 0.5 * m.params.c * r,
    }
}

/// Elliptic separation functions `(h_κ, h_λ)` of free motion.
///
/// These are not themselves constants of motion; `K` and `L` are.
pub fn elliptic_separation_functions(s: &PhaseState, mu: f64) -> (f64, f64) {
    let q = &s.point.coords;
    let p = &s.momenta;
    let (ch2, sh2) = (q[2].cosh().powi(2), q[2].sinh().powi(2));
    let (c2, s2) = (q[3].cos().powi(2), q[3].sin().powi(2));
    let k = 0.5 / mu;
    let hk = k * (p[2] * p[2] - p[0] * p[0] / ch2 + p[1] * p[1] / sh2);
    let hl = k * (p[3] * p[3] + p[0] * p[0] / c2 + p[1] * p[1] / s2);
    (hk, hl)
}

/// `{f, g}` at `s` by central differences with step `1e-5·max(1, |xᵢ|)`.
pub fn poisson_bracket<F, G>(f: F, g: G, s: &PhaseState) -> Result<f64>
where
    F: Fn(&PhaseState) -> Result<f64>,
    G: Fn(&PhaseState) -> Result<f64>,
{
    let chart = s.chart();
    let x = s.to_vector();
    let grad = |h: &dyn Fn(&PhaseState) -> Result<f64>| -> Result<[f64; 8]> {
        let mut out = [0.0; 8];
        for i in 0..8 {
            let step = 1e-5 * x[i].abs().max(1.0);
            let mut xp = x;
            let mut xm = x;
            xp[i] += step;
            xm[i] -= step;
            out[i] = (h(&PhaseState::from_vector(chart, &xp))? - h(&PhaseState::from_vector(chart, &xm))?) / (2.0 * step);
        }
        Ok(out)
    };
    let df = grad(&f)?;
    let dg = grad(&g)?;
    Ok((0..4).map(|i| df[i] * dg[4 + i] - df[4 + i] * dg[i]).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    fn model(kind: ModelKind, c: f64) -> PotentialModel {
        PotentialModel::new(kind, PhysicalParams::new(1.0, c, 1.0).unwrap())
    }

    #[test]
    fn potential_examples() {
        let unit = ChartPoint::new(Chart::TwoPolar, [0.0, 0.0, 1.0, 1.0]);
        assert!((potential_value(&model(ModelKind::Harmonic, 2.0), &unit).unwrap() - 2.0).abs() < 1e-15);
        let (v, g) = potential_with_gradient(&model(ModelKind::CollapseGuard, 1.0), &unit).unwrap();
        assert!((v - 2.0).abs() < 1e-15);
        assert!(g.iter().all(|x| x.abs() < 1e-15));
        let ab = ChartPoint::new(Chart::AlphaBeta, [0.0, 0.0, SQRT_2, 0.0]);
        assert!((potential_value(&model(ModelKind::AnharmonicAlphaBeta, 1.0), &ab).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn anharmonic_needs_alpha() {
        let p = ChartPoint::new(Chart::AlphaBeta, [0.0, 0.0, 0.0, 1.0]);
        assert!(potential_value(&model(ModelKind::AnharmonicRTheta, 1.0), &p).is_err());
    }

    #[test]
    fn hamiltonian_examples() {
        let s = PhaseState::new(ChartPoint::new(Chart::AlphaBeta, [0.0, 0.0, 1.0, 1.0]), [0.0, 0.0, 1.0, 0.0]);
        assert_eq!(hamiltonian(&model(ModelKind::Free, 1.0), &s).unwrap(), 0.5);
        let mu = 2.0;
        let m = PotentialModel::new(ModelKind::Free, PhysicalParams::new(mu, 1.0, 1.0).unwrap());
        let s = PhaseState::new(ChartPoint::new(Chart::PolarRTheta, [0.0, 0.0, 1.5, 0.7]), [0.0, 0.0, 0.3, 0.0]);
        let want = 2.0 / mu * 1.5 * 0.09;
        assert!((hamiltonian(&m, &s).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn canonical_pair_bracket() {
        let s = PhaseState::new(ChartPoint::new(Chart::AlphaBeta, [0.1, 0.2, 1.0, 0.5]), [0.3, 0.1, 0.2, 0.4]);
        let b = poisson_bracket(|s| Ok(s.point.coords[0]), |s| Ok(s.momenta[0]), &s).unwrap();
        assert!((b - 1.0).abs() < 1e-8);
    }

    #[test]
    fn collapse_guard_is_unsupported_in_alpha_beta() {
        let s = PhaseState::new(ChartPoint::new(Chart::AlphaBeta, [0.1, 0.2, 1.0, 0.5]), [0.3, 0.1, 0.2, 0.4]);
        assert!(matches!(constants_of_motion(&model(ModelKind::CollapseGuard, 1.0), &s), Err(Error::Unsupported(_))));
    }
}
