//! Euler-type parametrisations of `R⁺SU(2)` and `GL⁺(2,R)` and the metrics
//! built on them.
//!
//! A group point is `(δ, Φ, Θ, Ψ)` for the breathing top and `(δ, Φ, b, Ψ)`
//! for `GL⁺(2,R)`, with
//! `φ = δ·exp(Φτ₂)·exp(Θτ₃)·exp(Ψτ₂)` and `φ = δ·exp(Φτ̃₂)·exp(bτ̃₃)·exp(Ψτ̃₂)`,
//! where `τₐ = σₐ/(2i)`, `τ̃₂ = τ₂`, `τ̃₃ = iτ₃`.

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Chart, ChartPoint};
use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupFamily {
    /// `R⁺SU(2)`, the spinorial breathing top.
    BreathingTopSu2,
    /// Affinely invariant metrics on `GL⁺(2,R)`.
    InvariantGl2,
}

/// Metric `(1+c)dδ² + (δ²/4)(angular block)` of a [`GroupFamily`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupMetricSpec {
    pub family: GroupFamily,
    pub c: f64,
}

impl GroupMetricSpec {
    pub fn new(family: GroupFamily, c: f64) -> Self {
        Self { family, c }
    }

    /// The degenerate Killing metric of `GL(2,R)`: coefficients of `Tr Ω²`
    /// and `(Tr Ω)²` in the ratio 4 : −2.
    pub fn killing() -> Self {
        Self::new(GroupFamily::InvariantGl2, -1.0)
    }

    /// Builds the spec from the coefficients of `Tr Ω²` and `(Tr Ω)²`,
    /// up to overall scale. The main coefficient must be nonzero.
    pub fn from_trace_ratio(family: GroupFamily, main: f64, correction: f64) -> Result<Self> {
        if main == 0.0 || !main.is_finite() || !correction.is_finite() {
            return domain("the coefficient of the main Tr(Omega^2) term must be nonzero");
        }
        Ok(Self::new(family, 2.0 * correction / main))
    }

    /// Coefficients `(k₁, k₂)` with `ds² = det φ·(k₁ Tr Ω² + k₂ (Tr Ω)²)`;
    /// for the breathing top `Tr Ω²` is replaced by `Tr Ω†Ω`.
    pub fn trace_coefficients(&self) -> (f64, f64) {
        (0.5, 0.25 * self.c)
    }
}

fn check_delta(p: &[f64; 4]) -> Result<()> {
    if p[0] > 0.0 && p.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        domain("delta > 0 required")
    }
}

/// `ds²` along `v` from the closed-form line element.
pub fn group_metric_closed_form(spec: &GroupMetricSpec, p: &[f64; 4], v: &[f64; 4]) -> Result<f64> {
    check_delta(p)?;
    let [delta, _, mid, _] = *p;
    let [dd, dphi, dmid, dpsi] = *v;
    let angular = match spec.family {
        GroupFamily::BreathingTopSu2 => dmid * dmid + dphi * dphi + 2.0 * mid.cos() * dphi * dpsi + dpsi * dpsi,
        GroupFamily::InvariantGl2 => invariant_gl2_angular_block(mid.into(), dmid.into(), dphi, dpsi).re,
    };
    Ok((1.0 + spec.c) * dd * dd + 0.25 * delta * delta * angular)
}

/// `db² − dΦ² − 2 cosh b dΦ dΨ − dΨ²`, evaluated for complex `b`.
///
/// At `b = iΘ`, `db = i dΘ` this is `−(dΘ² + dΦ² + 2 cos Θ dΦ dΨ + dΨ²)`.
pub fn invariant_gl2_angular_block(b: Complex64, db: Complex64, dphi: f64, dpsi: f64) -> Complex64 {
    db * db - dphi * dphi - 2.0 * b.cosh() * dphi * dpsi - dpsi * dpsi
}

type M2 = Matrix2<Complex64>;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `τ₂ = τ̃₂ = ½[[0, −1], [1, 0]]`.
fn tau2() -> M2 {
    M2::new(c(0.0), c(-0.5), c(0.5), c(0.0))
}

fn exp_tau2(t: Complex64) -> M2 {
    let (s, co) = ((0.5 * t).sin(), (0.5 * t).cos());
    M2::new(co, -s, s, co)
}

/// The diagonal generator and its exponential for the family.
fn diag_generator(family: GroupFamily) -> M2 {
    match family {
        // τ₃ = σ₃/(2i)
        GroupFamily::BreathingTopSu2 => M2::new(Complex64::new(0.0, -0.5), c(0.0), c(0.0), Complex64::new(0.0, 0.5)),
        // τ̃₃ = σ₃/2
        GroupFamily::InvariantGl2 => M2::new(c(0.5), c(0.0), c(0.0), c(-0.5)),
    }
}

fn exp_diag(g: &M2, t: Complex64) -> M2 {
    M2::new((g[(0, 0)] * t).exp(), c(0.0), c(0.0), (g[(1, 1)] * t).exp())
}

/// `φ(p)` and `dφ(v)` for complex group coordinates.
fn group_element_and_differential(family: GroupFamily, p: &[Complex64; 4], v: &[Complex64; 4]) -> (M2, M2) {
    let t2 = tau2();
    let g = diag_generator(family);
    let a = exp_tau2(p[1]);
    let b = exp_diag(&g, p[2]);
    let cc = exp_tau2(p[3]);
    let abc = a * b * cc;
    let phi = abc * p[0];
    let dphi = abc * v[0] + (t2 * abc * v[1] + a * g * b * cc * v[2] + a * b * t2 * cc * v[3]) * p[0];
    (phi, dphi)
}

/// Complex-coordinate Cartan-form metric; `Tr Ω†Ω` for the breathing top and
/// `Tr Ω²` for `GL⁺(2,R)` (holomorphic in the coordinates).
pub fn group_metric_cartan_complex(spec: &GroupMetricSpec, p: &[Complex64; 4], v: &[Complex64; 4]) -> Result<Complex64> {
    let (phi, dphi) = group_element_and_differential(spec.family, p, v);
    let inv = phi.try_inverse().ok_or_else(|| crate::error::Error::Domain("group element is singular".into()))?;
    let omega = dphi * inv;
    let tr = omega.trace();
    let main = match spec.family {
        GroupFamily::BreathingTopSu2 => (omega.adjoint() * omega).trace(),
        GroupFamily::InvariantGl2 => (omega * omega).trace(),
    };
    let (k1, k2) = spec.trace_coefficients();
    Ok(phi.determinant() * (main * k1 + tr * tr * k2))
}

/// `ds²` along `v` computed from the Cartan one-form `Ω = (dφ)φ⁻¹`.
pub fn group_metric_cartan(spec: &GroupMetricSpec, p: &[f64; 4], v: &[f64; 4]) -> Result<f64> {
    check_delta(p)?;
    let pc = p.map(c);
    let vc = v.map(c);
    Ok(group_metric_cartan_complex(spec, &pc, &vc)?.re)
}

/// `(r, Φ, Θ, Ψ)` with the doubled-angle map `Φ = 2φ, Θ = ϑ, Ψ = 2ψ`.
///
/// In these variables the polar metric has the cross term `−2 cos Θ dΦ dΨ`.
pub fn euler_from_polar(p: &ChartPoint) -> Result<[f64; 4]> {
    let q = super::transform(p, Chart::PolarRTheta)?.coords;
    Ok([q[2], 2.0 * q[0], q[3], 2.0 * q[1]])
}

/// `(r, Φ, Θ, Ψ)` with `Ψ = −2ψ`, matching the spherical-top form
/// `dρ² + (ρ²/4)(dΘ² + dΦ² + 2 cos Θ dΦ dΨ + dΨ²)`.
pub fn euler_from_polar_top_convention(p: &ChartPoint) -> Result<[f64; 4]> {
    let q = super::transform(p, Chart::PolarRTheta)?.coords;
    Ok([q[2], 2.0 * q[0], q[3], -2.0 * q[1]])
}
