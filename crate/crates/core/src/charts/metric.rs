//! The kinetic-energy metric `Tr(dφᵀ dφ)` in every chart.

use nalgebra::{Matrix4, Vector4};

use super::{Chart, ChartPoint};
use crate::error::{domain, Result};

/// Metric components `G_ij` in the chart's coordinate order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricTensor {
    pub chart: Chart,
    pub g: Matrix4<f64>,
}

impl MetricTensor {
    pub fn quadratic_form(&self, v: &[f64; 4]) -> f64 {
        let v = Vector4::from(*v);
        (v.transpose() * self.g * v)[(0, 0)]
    }
}

const SINGULAR_TOL: f64 = 1e-12;

fn nonzero(v: f64, what: &str) -> Result<()> {
    if v.abs() > SINGULAR_TOL && v.is_finite() {
        Ok(())
    } else {
        domain(format!("{what} = 0: singular locus of the chart"))
    }
}

/// Closed-form metric components at `p`.
pub fn metric_at(p: &ChartPoint) -> Result<MetricTensor> {
    let q = &p.coords;
    if q.iter().any(|v| !v.is_finite()) {
        return domain("non-finite coordinates");
    }
    let mut g = Matrix4::zeros();
    match p.chart {
        Chart::Cartesian => g = Matrix4::identity(),
        Chart::TwoPolar => {
            let (d1, d2) = (q[2], q[3]);
            nonzero(d1 + d2, "D1 + D2")?;
            nonzero(d1 - d2, "D1 - D2")?;
            let s = d1 * d1 + d2 * d2;
            let pp = 2.0 * d1 * d2;
            g[(0, 0)] = s;
            g[(1, 1)] = s;
            g[(0, 1)] = -pp;
            g[(1, 0)] = -pp;
            g[(2, 2)] = 1.0;
            g[(3, 3)] = 1.0;
        }
        Chart::AlphaBeta => {
            nonzero(q[2], "alpha")?;
            nonzero(q[3], "beta")?;
            g = Matrix4::from_diagonal(&Vector4::new(q[2] * q[2], q[3] * q[3], 1.0, 1.0));
        }
        Chart::PolarRTheta => {
            let (r, th) = (q[2], q[3]);
            if r <= 0.0 {
                return domain("r > 0 required");
            }
            nonzero(th.sin(), "sin theta")?;
            g[(0, 0)] = r;
            g[(1, 1)] = r;
            g[(0, 1)] = -r * th.cos();
            g[(1, 0)] = g[(0, 1)];
            g[(2, 2)] = 0.25 / r;
            g[(3, 3)] = 0.25 * r;
        }
        Chart::RhoEpsilon => {
            let (rho, eps) = (q[2], q[3]);
            if rho <= 0.0 {
                return domain("rho > 0 required");
            }
            let (s, c) = eps.sin_cos();
            nonzero(s, "sin epsilon")?;
            nonzero(c, "cos epsilon")?;
            let r2 = rho * rho;
            g = Matrix4::from_diagonal(&Vector4::new(r2 * c * c, r2 * s * s, 1.0, r2));
        }
        Chart::ExponentialAB => {
            let (a, b) = (q[2], q[3]);
            nonzero(b, "b")?;
            let ea = a.exp();
            let (ch, sh) = (b.cosh(), b.sinh());
            g[(0, 0)] = 2.0 * ea * ch;
            g[(1, 1)] = 2.0 * ea * ch;
            g[(0, 1)] = -2.0 * ea;
            g[(1, 0)] = -2.0 * ea;
            g[(2, 2)] = 0.5 * ea * ch;
            g[(3, 3)] = 0.5 * ea * ch;
            g[(2, 3)] = 0.5 * ea * sh;
            g[(3, 2)] = 0.5 * ea * sh;
        }
        Chart::Elliptic => {
            let (k, l) = (q[2], q[3]);
            let (ch, sh) = (k.cosh(), k.sinh());
            let (s, c) = l.sin_cos();
            let delta = ch * ch - c * c;
            nonzero(delta, "cosh^2 kappa - cos^2 lambda")?;
            nonzero(c, "cos lambda")?;
            nonzero(s * sh, "sinh kappa sin lambda")?;
            g = Matrix4::from_diagonal(&Vector4::new(2.0 * ch * ch * c * c, 2.0 * sh * sh * s * s, 2.0 * delta, 2.0 * delta));
        }
    }
    Ok(MetricTensor { chart: p.chart, g })
}

/// `T = (μ/2) vᵀ G(p) v`.
pub fn kinetic_energy(p: &ChartPoint, v: &[f64; 4], mu: f64) -> Result<f64> {
    Ok(0.5 * mu * metric_at(p)?.quadratic_form(v))
}

/// The three equivalent polar forms of `ds²` at `(r, ϑ)` for the tangent
/// `(dr, dϑ, dη, dγ)`: in `(r, ϑ)`, in `(ρ, ε)` and in the mixed `(ρ, ϑ)`.
pub fn polar_line_element_forms(r: f64, theta: f64, dr: f64, dtheta: f64, deta: f64, dgamma: f64) -> [f64; 3] {
    let (sh, ch) = (0.5 * theta).sin_cos();
    let rho = r.sqrt();
    let drho = dr / (2.0 * rho);
    let (eps, deps) = (0.5 * theta, 0.5 * dtheta);
    let (se, ce) = eps.sin_cos();
    let first = r * ch * ch * deta * deta + r * sh * sh * dgamma * dgamma + dr * dr / (4.0 * r) + 0.25 * r * dtheta * dtheta;
    let second = drho * drho + rho * rho * deps * deps + rho * rho * ce * ce * deta * deta + rho * rho * se * se * dgamma * dgamma;
    let third =
        drho * drho + 0.25 * rho * rho * dtheta * dtheta + rho * rho * ch * ch * deta * deta + rho * rho * sh * sh * dgamma * dgamma;
    [first, second, third]
}
