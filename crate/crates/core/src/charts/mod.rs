//! Coordinate charts on GL(2,R).
//!
//! Every chart is reached through the two-polar coordinates `(φ, ψ, D₁, D₂)`
//! of `φ = O(φ)·diag(D₁, D₂)·R(ψ)ᵀ`. Coordinate order inside a [`ChartPoint`]:
//!
//! | chart            | coords           |
//! |------------------|------------------|
//! | `Cartesian`      | `(x, y, z, u)`   |
//! | `TwoPolar`       | `(φ, ψ, D₁, D₂)` |
//! | `AlphaBeta`      | `(η, γ, α, β)`   |
//! | `PolarRTheta`    | `(φ, ψ, r, ϑ)`   |
//! | `RhoEpsilon`     | `(η, γ, ρ, ε)`   |
//! | `ExponentialAB`  | `(φ, ψ, a, b)`   |
//! | `Elliptic`       | `(η, γ, κ, λ)`   |
//!
//! with `η = φ − ψ`, `γ = φ + ψ`, `α = (D₁+D₂)/√2`, `β = (D₁−D₂)/√2`,
//! `α = √r cos(ϑ/2)`, `β = √r sin(ϑ/2)`, `ρ = √r`, `ε = ϑ/2`,
//! `D₁ = e^{(a+b)/2}`, `D₂ = e^{(a−b)/2}`, `α = √2 cosh κ cos λ`, `β = √2 sinh κ sin λ`.
//!
//! Angles are never reduced by chart transforms; only [`two_polar_decompose`]
//! returns angles in `[0, 2π)`.

mod group;
mod metric;

pub use group::{
    euler_from_polar, euler_from_polar_top_convention, group_metric_cartan, group_metric_cartan_complex, group_metric_closed_form,
    invariant_gl2_angular_block, GroupFamily, GroupMetricSpec,
};
pub use metric::{kinetic_energy, metric_at, polar_line_element_forms, MetricTensor};

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use nalgebra::{Matrix2, Matrix4, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

const TAU: f64 = 2.0 * PI;

/// Real 2×2 configuration matrix `[[x, y], [z, u]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfigurationMatrix {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub u: f64,
}

impl ConfigurationMatrix {
    pub fn new(x: f64, y: f64, z: f64, u: f64) -> Self {
        Self { x, y, z, u }
    }

    pub fn identity() -> Self {
        Self::new(1.0, 0.0, 0.0, 1.0)
    }

    pub fn det(&self) -> f64 {
        self.x * self.u - self.y * self.z
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.x, self.y, self.z, self.u]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_matrix(self) -> Matrix2<f64> {
        Matrix2::new(self.x, self.y, self.z, self.u)
    }

    pub fn from_matrix(m: &Matrix2<f64>) -> Self {
        Self::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)])
    }

    /// Max-norm of the entries.
    pub fn max_norm(&self) -> f64 {
        self.to_array().iter().fold(0.0f64, |a, v| a.max(v.abs()))
    }
}

/// Two-polar coordinates `(φ, ψ, D₁, D₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoPolarCoords {
    pub phi: f64,
    pub psi: f64,
    pub d1: f64,
    pub d2: f64,
}

impl TwoPolarCoords {
    pub fn new(phi: f64, psi: f64, d1: f64, d2: f64) -> Self {
        Self { phi, psi, d1, d2 }
    }
}

/// Options for [`two_polar_decompose_with`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DecomposeOptions {
    /// Admit mirror-reflected configurations (det < 0), returned with `D₂ < 0`.
    pub discrete_system: bool,
}

pub(crate) fn rotation(angle: f64) -> Matrix2<f64> {
    let (s, c) = angle.sin_cos();
    Matrix2::new(c, -s, s, c)
}

/// Canonical two-polar decomposition of a GL⁺(2,R) matrix.
pub fn two_polar_decompose(m: &ConfigurationMatrix) -> Result<TwoPolarCoords> {
    two_polar_decompose_with(m, DecomposeOptions::default())
}

/// Two-polar decomposition with explicit options.
///
/// The output satisfies `D₁ ≥ |D₂|`. On the degenerate locus `D₁ = D₂` the
/// rotation is carried entirely by `φ` and `ψ = 0`. The residual discrete
/// gauge `(φ, ψ) → (φ + π, ψ + π)` is fixed by the branch of `atan2`.
pub fn two_polar_decompose_with(m: &ConfigurationMatrix, opts: DecomposeOptions) -> Result<TwoPolarCoords> {
    let det = m.det();
    let scale = m.max_norm();
    if !det.is_finite() || scale == 0.0 || det.abs() <= f64::EPSILON * scale * scale {
        return Err(Error::SingularMatrix);
    }
    if det < 0.0 && !opts.discrete_system {
        return domain("det < 0: mirror-reflected configuration (enable discrete-system mode)");
    }
    // Split into conformal [[e, -h], [h, e]] and anticonformal [[f, g], [g, -f]] parts.
    let e = 0.5 * (m.x + m.u);
    let f = 0.5 * (m.x - m.u);
    let g = 0.5 * (m.z + m.y);
    let h = 0.5 * (m.z - m.y);
    let q = e.hypot(h);
    let r = f.hypot(g);
    let d1 = q + r;
    let d2 = q - r;
    let a2 = h.atan2(e);
    let (phi, psi) = if r <= 4.0 * f64::EPSILON * q {
        (a2, 0.0)
    } else {
        let a1 = g.atan2(f);
        (0.5 * (a2 + a1), 0.5 * (a1 - a2))
    };
    Ok(TwoPolarCoords::new(phi.rem_euclid(TAU), psi.rem_euclid(TAU), d1, d2))
}

/// `O(φ)·diag(D₁, D₂)·R(ψ)ᵀ`.
pub fn two_polar_compose(c: &TwoPolarCoords) -> ConfigurationMatrix {
    let m = rotation(c.phi) * Matrix2::new(c.d1, 0.0, 0.0, c.d2) * rotation(c.psi).transpose();
    ConfigurationMatrix::from_matrix(&m)
}

/// Chart identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Chart {
    Cartesian,
    TwoPolar,
    AlphaBeta,
    PolarRTheta,
    RhoEpsilon,
    #[serde(rename = "exponential-ab")]
    ExponentialAB,
    Elliptic,
}

impl Chart {
    pub const ALL: [Chart; 7] =
        [Chart::Cartesian, Chart::TwoPolar, Chart::AlphaBeta, Chart::PolarRTheta, Chart::RhoEpsilon, Chart::ExponentialAB, Chart::Elliptic];

    pub fn name(self) -> &'static str {
        match self {
            Chart::Cartesian => "cartesian",
            Chart::TwoPolar => "two-polar",
            Chart::AlphaBeta => "alpha-beta",
            Chart::PolarRTheta => "polar-r-theta",
            Chart::RhoEpsilon => "rho-epsilon",
            Chart::ExponentialAB => "exponential-ab",
            Chart::Elliptic => "elliptic",
        }
    }

    /// Coordinate labels in storage order.
    pub fn coordinate_names(self) -> [&'static str; 4] {
        match self {
            Chart::Cartesian => ["x", "y", "z", "u"],
            Chart::TwoPolar => ["phi", "psi", "d1", "d2"],
            Chart::AlphaBeta => ["eta", "gamma", "alpha", "beta"],
            Chart::PolarRTheta => ["phi", "psi", "r", "theta"],
            Chart::RhoEpsilon => ["eta", "gamma", "rho", "epsilon"],
            Chart::ExponentialAB => ["phi", "psi", "a", "b"],
            Chart::Elliptic => ["eta", "gamma", "kappa", "lambda"],
        }
    }

    /// How the first two coordinates relate to the two-polar angles.
    pub fn angle_kind(self) -> AngleKind {
        match self {
            Chart::Cartesian => AngleKind::None,
            Chart::TwoPolar | Chart::PolarRTheta | Chart::ExponentialAB => AngleKind::PhiPsi,
            Chart::AlphaBeta | Chart::RhoEpsilon | Chart::Elliptic => AngleKind::EtaGamma,
        }
    }
}

impl std::fmt::Display for Chart {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Chart {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Chart::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| Error::Unsupported(format!("unknown chart '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngleKind {
    None,
    /// `(φ, ψ)`
    PhiPsi,
    /// `(η, γ) = (φ − ψ, φ + ψ)`
    EtaGamma,
}

/// A point of GL(2,R) expressed in a chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint {
    pub chart: Chart,
    pub coords: [f64; 4],
}

impl ChartPoint {
    pub fn new(chart: Chart, coords: [f64; 4]) -> Self {
        Self { chart, coords }
    }

    pub fn cartesian(m: &ConfigurationMatrix) -> Self {
        Self::new(Chart::Cartesian, m.to_array())
    }

    pub fn two_polar(c: &TwoPolarCoords) -> Self {
        Self::new(Chart::TwoPolar, [c.phi, c.psi, c.d1, c.d2])
    }

    /// The configuration matrix this point represents.
    pub fn to_matrix(&self) -> Result<ConfigurationMatrix> {
        match self.chart {
            Chart::Cartesian => Ok(ConfigurationMatrix::from_array(self.coords)),
            _ => Ok(two_polar_compose(&to_two_polar(self)?)),
        }
    }

    /// Deformation invariants `(s, d) = (D₁² + D₂², D₁D₂) = (Tr φᵀφ, det φ)`.
    pub fn invariants(&self) -> Result<(f64, f64)> {
        Ok(invariants_with_gradient(self)?.0)
    }

    /// Equality up to the angular identifications of the chart, including the
    /// residual gauge `(φ, ψ) → (φ + π, ψ + π)`.
    pub fn equivalent(&self, other: &ChartPoint, tol: f64) -> bool {
        if self.chart != other.chart {
            return false;
        }
        let a = &self.coords;
        let b = &other.coords;
        let close = |x: f64, y: f64| (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs()));
        match self.chart.angle_kind() {
            AngleKind::None => (0..4).all(|i| close(a[i], b[i])),
            AngleKind::PhiPsi => {
                close(a[2], b[2])
                    && close(a[3], b[3])
                    && angle_close(a[0] - a[1], b[0] - b[1], TAU, tol)
                    && angle_close(a[0] + a[1], b[0] + b[1], TAU, tol)
            }
            AngleKind::EtaGamma => {
                close(a[2], b[2]) && close(a[3], b[3]) && angle_close(a[0], b[0], TAU, tol) && angle_close(a[1], b[1], TAU, tol)
            }
        }
    }
}

fn angle_close(a: f64, b: f64, period: f64, tol: f64) -> bool {
    let d = (a - b).rem_euclid(period);
    d.min(period - d) <= tol * (1.0 + a.abs().max(b.abs()))
}

/// Angles `(φ, ψ)` from the chart's first two coordinates.
fn phi_psi(chart: Chart, q: &[f64; 4]) -> (f64, f64) {
    match chart.angle_kind() {
        AngleKind::EtaGamma => (0.5 * (q[0] + q[1]), 0.5 * (q[1] - q[0])),
        _ => (q[0], q[1]),
    }
}

/// `(α, β)` of a curvilinear point together with `∂(α, β)/∂(q₃, q₄)`.
fn alpha_beta_with_jacobian(chart: Chart, q: &[f64; 4]) -> ((f64, f64), [[f64; 2]; 2]) {
    match chart {
        Chart::TwoPolar => {
            let (d1, d2) = (q[2], q[3]);
            ((FRAC_1_SQRT_2 * (d1 + d2), FRAC_1_SQRT_2 * (d1 - d2)), [[FRAC_1_SQRT_2, FRAC_1_SQRT_2], [FRAC_1_SQRT_2, -FRAC_1_SQRT_2]])
        }
        Chart::AlphaBeta => ((q[2], q[3]), [[1.0, 0.0], [0.0, 1.0]]),
        Chart::PolarRTheta => {
            let (r, th) = (q[2], q[3]);
            let sr = r.sqrt();
            let (s, c) = (0.5 * th).sin_cos();
            ((sr * c, sr * s), [[c / (2.0 * sr), -0.5 * sr * s], [s / (2.0 * sr), 0.5 * sr * c]])
        }
        Chart::RhoEpsilon => {
            let (rho, eps) = (q[2], q[3]);
            let (s, c) = eps.sin_cos();
            ((rho * c, rho * s), [[c, -rho * s], [s, rho * c]])
        }
        Chart::ExponentialAB => {
            let (a, b) = (q[2], q[3]);
            let d1 = (0.5 * (a + b)).exp();
            let d2 = (0.5 * (a - b)).exp();
            (
                (FRAC_1_SQRT_2 * (d1 + d2), FRAC_1_SQRT_2 * (d1 - d2)),
                [
                    [0.5 * FRAC_1_SQRT_2 * (d1 + d2), 0.5 * FRAC_1_SQRT_2 * (d1 - d2)],
                    [0.5 * FRAC_1_SQRT_2 * (d1 - d2), 0.5 * FRAC_1_SQRT_2 * (d1 + d2)],
                ],
            )
        }
        Chart::Elliptic => {
            let (k, l) = (q[2], q[3]);
            let (ch, sh) = (k.cosh(), k.sinh());
            let (s, c) = l.sin_cos();
            ((SQRT_2 * ch * c, SQRT_2 * sh * s), [[SQRT_2 * sh * c, -SQRT_2 * ch * s], [SQRT_2 * ch * s, SQRT_2 * sh * c]])
        }
        Chart::Cartesian => unreachable!("cartesian has no (alpha, beta) parametrisation"),
    }
}

/// Two-polar coordinates of any chart point (angles unreduced).
pub fn to_two_polar(p: &ChartPoint) -> Result<TwoPolarCoords> {
    check_finite(p)?;
    match p.chart {
        Chart::Cartesian => two_polar_decompose(&ConfigurationMatrix::from_array(p.coords)),
        Chart::TwoPolar => Ok(TwoPolarCoords::new(p.coords[0], p.coords[1], p.coords[2], p.coords[3])),
        chart => {
            check_source_domain(p)?;
            let (phi, psi) = phi_psi(chart, &p.coords);
            let ((a, b), _) = alpha_beta_with_jacobian(chart, &p.coords);
            Ok(TwoPolarCoords::new(phi, psi, FRAC_1_SQRT_2 * (a + b), FRAC_1_SQRT_2 * (a - b)))
        }
    }
}

fn check_finite(p: &ChartPoint) -> Result<()> {
    if p.coords.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        domain(format!("non-finite coordinates in {} chart", p.chart))
    }
}

fn check_source_domain(p: &ChartPoint) -> Result<()> {
    let q = &p.coords;
    match p.chart {
        Chart::PolarRTheta if q[2] <= 0.0 => domain("r > 0 required"),
        Chart::RhoEpsilon if q[2] <= 0.0 => domain("rho > 0 required"),
        Chart::Elliptic if q[2] < 0.0 => domain("kappa >= 0 required"),
        _ => Ok(()),
    }
}

/// Re-expresses `p` in the `target` chart.
pub fn transform(p: &ChartPoint, target: Chart) -> Result<ChartPoint> {
    if p.chart == target {
        check_finite(p)?;
        return Ok(*p);
    }
    let tp = to_two_polar(p)?;
    from_two_polar(&tp, target)
}

/// Expresses two-polar coordinates in `target`.
pub fn from_two_polar(tp: &TwoPolarCoords, target: Chart) -> Result<ChartPoint> {
    let (phi, psi, d1, d2) = (tp.phi, tp.psi, tp.d1, tp.d2);
    let alpha = FRAC_1_SQRT_2 * (d1 + d2);
    let beta = FRAC_1_SQRT_2 * (d1 - d2);
    let (eta, gamma) = (phi - psi, phi + psi);
    let coords = match target {
        Chart::Cartesian => return Ok(ChartPoint::cartesian(&two_polar_compose(tp))),
        Chart::TwoPolar => [phi, psi, d1, d2],
        Chart::AlphaBeta => [eta, gamma, alpha, beta],
        Chart::PolarRTheta | Chart::RhoEpsilon => {
            if alpha <= 0.0 {
                return domain("alpha > 0 required for the polar charts");
            }
            if beta < 0.0 {
                return domain("beta < 0 lies outside the principal polar branch (need D1 >= D2)");
            }
            let r = d1 * d1 + d2 * d2;
            let theta = 2.0 * beta.atan2(alpha);
            if target == Chart::PolarRTheta {
                [phi, psi, r, theta]
            } else {
                [eta, gamma, r.sqrt(), 0.5 * theta]
            }
        }
        Chart::ExponentialAB => {
            if d1 <= 0.0 || d2 <= 0.0 {
                return domain("D1 > 0 and D2 > 0 required for the exponential chart");
            }
            [phi, psi, (d1 * d2).ln(), (d1 / d2).ln()]
        }
        Chart::Elliptic => {
            if alpha <= 0.0 {
                return domain("alpha > 0 required for the elliptic chart");
            }
            let w = Complex64::new(alpha, beta) / SQRT_2;
            let kl = w.acosh();
            let (kappa, lambda) = if kl.re < 0.0 { (-kl.re, -kl.im) } else { (kl.re, kl.im) };
            [eta, gamma, kappa, lambda]
        }
    };
    Ok(ChartPoint::new(target, coords))
}

/// Maps the double-angle Euler convention back: `Φ = 2φ, Θ = ϑ, Ψ = 2ψ`.
pub fn polar_from_euler(r: f64, big_phi: f64, big_theta: f64, big_psi: f64) -> ChartPoint {
    ChartPoint::new(Chart::PolarRTheta, [0.5 * big_phi, 0.5 * big_psi, r, big_theta])
}

/// `∂(x, y, z, u)/∂(φ, ψ, D₁, D₂)` at two-polar coordinates.
fn cartesian_jacobian_two_polar(tp: &TwoPolarCoords) -> Matrix4<f64> {
    let o = rotation(tp.phi);
    let rt = rotation(tp.psi).transpose();
    let d = Matrix2::new(tp.d1, 0.0, 0.0, tp.d2);
    let j = Matrix2::new(0.0, -1.0, 1.0, 0.0);
    let m = o * d * rt;
    let cols = [j * m, -(m * j), o * Matrix2::new(1.0, 0.0, 0.0, 0.0) * rt, o * Matrix2::new(0.0, 0.0, 0.0, 1.0) * rt];
    let mut out = Matrix4::zeros();
    for (k, c) in cols.iter().enumerate() {
        out[(0, k)] = c[(0, 0)];
        out[(1, k)] = c[(0, 1)];
        out[(2, k)] = c[(1, 0)];
        out[(3, k)] = c[(1, 1)];
    }
    out
}

/// Analytic Jacobian `∂(x, y, z, u)/∂q` of the chart-to-Cartesian map.
pub fn cartesian_jacobian(p: &ChartPoint) -> Result<Matrix4<f64>> {
    if p.chart == Chart::Cartesian {
        return Ok(Matrix4::identity());
    }
    let tp = to_two_polar(p)?;
    let outer = cartesian_jacobian_two_polar(&tp);
    if p.chart == Chart::TwoPolar {
        return Ok(outer);
    }
    // ∂(φ, ψ, D₁, D₂)/∂q
    let mut inner = Matrix4::zeros();
    match p.chart.angle_kind() {
        AngleKind::EtaGamma => {
            inner[(0, 0)] = 0.5;
            inner[(0, 1)] = 0.5;
            inner[(1, 0)] = -0.5;
            inner[(1, 1)] = 0.5;
        }
        _ => {
            inner[(0, 0)] = 1.0;
            inner[(1, 1)] = 1.0;
        }
    }
    let (_, jab) = alpha_beta_with_jacobian(p.chart, &p.coords);
    for k in 0..2 {
        inner[(2, 2 + k)] = FRAC_1_SQRT_2 * (jab[0][k] + jab[1][k]);
        inner[(3, 2 + k)] = FRAC_1_SQRT_2 * (jab[0][k] - jab[1][k]);
    }
    Ok(outer * inner)
}

/// Pushes a tangent vector at `p` into the `target` chart.
pub fn transform_tangent(p: &ChartPoint, v: &[f64; 4], target: Chart) -> Result<(ChartPoint, [f64; 4])> {
    let q = transform(p, target)?;
    let js = cartesian_jacobian(p)?;
    let jt = cartesian_jacobian(&q)?;
    let vc = js * Vector4::from(*v);
    let inv = jt.try_inverse().ok_or_else(|| Error::Domain(format!("{target} chart is singular at this point")))?;
    let w = inv * vc;
    Ok((q, [w[0], w[1], w[2], w[3]]))
}

/// Pulls conjugate momenta at `p` back into the `target` chart (`p_B = J_Bᵀ J_A⁻ᵀ p_A`).
pub fn transform_covector(p: &ChartPoint, m: &[f64; 4], target: Chart) -> Result<(ChartPoint, [f64; 4])> {
    let q = transform(p, target)?;
    let js = cartesian_jacobian(p)?;
    let jt = cartesian_jacobian(&q)?;
    let inv = js.try_inverse().ok_or_else(|| Error::Domain(format!("{} chart is singular at this point", p.chart)))?;
    let pc = inv.transpose() * Vector4::from(*m);
    let w = jt.transpose() * pc;
    Ok((q, [w[0], w[1], w[2], w[3]]))
}

/// `((s, d), (∇s, ∇d))`.
pub type InvariantsWithGradient = ((f64, f64), ([f64; 4], [f64; 4]));

/// `(s, d) = (D₁² + D₂², D₁D₂)` with their gradients in the chart coordinates.
pub fn invariants_with_gradient(p: &ChartPoint) -> Result<InvariantsWithGradient> {
    check_finite(p)?;
    let q = &p.coords;
    if p.chart == Chart::Cartesian {
        let s = q.iter().map(|v| v * v).sum();
        let d = q[0] * q[3] - q[1] * q[2];
        return Ok(((s, d), ([2.0 * q[0], 2.0 * q[1], 2.0 * q[2], 2.0 * q[3]], [q[3], -q[2], -q[1], q[0]])));
    }
    check_source_domain(p)?;
    let ((a, b), jab) = alpha_beta_with_jacobian(p.chart, q);
    let s = a * a + b * b;
    let d = 0.5 * (a * a - b * b);
    let mut gs = [0.0; 4];
    let mut gd = [0.0; 4];
    for k in 0..2 {
        gs[2 + k] = 2.0 * (a * jab[0][k] + b * jab[1][k]);
        gd[2 + k] = a * jab[0][k] - b * jab[1][k];
    }
    Ok(((s, d), (gs, gd)))
}
