//! Hamilton's equations, trajectory integration and drift of the invariants.

use serde::{Deserialize, Serialize};

use crate::charts::Chart;
use crate::error::{domain, Error, Result};
use crate::models::{
    constants_of_motion, hamiltonian, hamiltonian_gradient, potential_with_gradient, PhaseState, PhysicalParams, PotentialModel,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Second-order symplectic leapfrog; Cartesian chart only.
    StormerVerlet,
    /// Classical fourth-order Runge–Kutta; any chart.
    Rk4,
}

impl std::str::FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stormer-verlet" => Ok(Scheme::StormerVerlet),
            "rk4" => Ok(Scheme::Rk4),
            _ => Err(Error::Unsupported(format!("unknown scheme '{s}'"))),
        }
    }
}

/// Why a trajectory stopped before the requested step count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Termination {
    pub step: usize,
    pub t: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub model: PotentialModel,
    pub dt: f64,
    pub scheme: Scheme,
    pub times: Vec<f64>,
    pub states: Vec<PhaseState>,
    /// Set when the flow left the chart's admissible domain.
    pub termination: Option<Termination>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last(&self) -> &PhaseState {
        self.states.last().expect("trajectory holds the initial state")
    }
}

/// Harmonic period `T = 2π/ω` at the model's `(μ, C)`.
pub fn harmonic_period(p: &PhysicalParams) -> f64 {
    2.0 * std::f64::consts::PI / p.omega()
}

/// `T/1000`.
pub fn default_dt(p: &PhysicalParams) -> f64 {
    harmonic_period(p) / 1000.0
}

/// `(dq/dt, dp/dt) = (∂H/∂p, −∂H/∂q)`.
pub fn equations_of_motion(m: &PotentialModel, s: &PhaseState) -> Result<([f64; 4], [f64; 4])> {
    let (dq, dp) = hamiltonian_gradient(m, s)?;
    Ok((dp, dq.map(|v| -v)))
}

fn derivative(m: &PotentialModel, chart: Chart, y: &[f64; 8]) -> Result<[f64; 8]> {
    let (qd, pd) = equations_of_motion(m, &PhaseState::from_vector(chart, y))?;
    let mut out = [0.0; 8];
    out[..4].copy_from_slice(&qd);
    out[4..].copy_from_slice(&pd);
    Ok(out)
}

fn axpy(y: &[f64; 8], a: f64, k: &[f64; 8]) -> [f64; 8] {
    std::array::from_fn(|i| y[i] + a * k[i])
}

fn rk4_step(m: &PotentialModel, chart: Chart, y: &[f64; 8], dt: f64) -> Result<[f64; 8]> {
    let k1 = derivative(m, chart, y)?;
    let k2 = derivative(m, chart, &axpy(y, 0.5 * dt, &k1))?;
    let k3 = derivative(m, chart, &axpy(y, 0.5 * dt, &k2))?;
    let k4 = derivative(m, chart, &axpy(y, dt, &k3))?;
    Ok(std::array::from_fn(|i| y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])))
}

fn verlet_step(m: &PotentialModel, y: &[f64; 8], dt: f64) -> Result<[f64; 8]> {
    let mu = m.params.mu;
    let force = |q: &[f64; 4]| -> Result<[f64; 4]> {
        let (_, g) = potential_with_gradient(m, &crate::charts::ChartPoint::new(Chart::Cartesian, *q))?;
        Ok(g)
    };
    let q0 = [y[0], y[1], y[2], y[3]];
    let g0 = force(&q0)?;
    let half: [f64; 4] = std::array::from_fn(|i| y[4 + i] - 0.5 * dt * g0[i]);
    let q1: [f64; 4] = std::array::from_fn(|i| q0[i] + dt * half[i] / mu);
    let g1 = force(&q1)?;
    let mut out = [0.0; 8];
    for i in 0..4 {
        out[i] = q1[i];
        out[4 + i] = half[i] - 0.5 * dt * g1[i];
    }
    Ok(out)
}

/// Integrates `steps` steps of size `dt` from `s0`.
///
/// If the flow leaves the admissible domain of the chart the trajectory is
/// truncated at the last admissible state and [`Trajectory::termination`]
/// records why.
pub fn integrate(m: &PotentialModel, s0: &PhaseState, dt: f64, steps: usize, scheme: Scheme) -> Result<Trajectory> {
    if !(dt > 0.0 && dt.is_finite()) {
        return domain("dt must be positive and finite");
    }
    let chart = s0.chart();
    if scheme == Scheme::StormerVerlet && chart != Chart::Cartesian {
        return Err(Error::Unsupported(format!("stormer-verlet needs a constant kinetic metric (cartesian chart), got {chart}")));
    }
    hamiltonian(m, s0)?;
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(*s0);
    let mut y = s0.to_vector();
    let mut termination = None;
    for n in 1..=steps {
        let next = match scheme {
            Scheme::Rk4 => rk4_step(m, chart, &y, dt),
            Scheme::StormerVerlet => verlet_step(m, &y, dt),
        }
        .and_then(|v| {
            let s = PhaseState::from_vector(chart, &v);
            let h = hamiltonian(m, &s)?;
            if v.iter().all(|x| x.is_finite()) && h.is_finite() {
                Ok(v)
            } else {
                domain("non-finite state")
            }
        });
        match next {
            Ok(v) => {
                y = v;
                times.push(n as f64 * dt);
                states.push(PhaseState::from_vector(chart, &y));
            }
            Err(e) => {
                termination = Some(Termination { step: n, t: n as f64 * dt, reason: e.to_string() });
                break;
            }
        }
    }
    Ok(Trajectory { model: *m, dt, scheme, times, states, termination })
}

/// Drift statistics of one invariant along a trajectory.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantDrift {
    pub name: &'static str,
    pub initial: f64,
    pub max_abs_deviation: f64,
    /// `max |deviation| / max(|initial|, |H₀|)`
    pub relative_drift: f64,
    /// Difference of the means over the last and first tenth of the samples,
    /// on the same scale as `relative_drift`.
    pub secular_drift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DriftReport {
    pub samples: usize,
    pub invariants: Vec<InvariantDrift>,
    pub termination: Option<Termination>,
}

impl DriftReport {
    pub fn get(&self, name: &str) -> Option<&InvariantDrift> {
        self.invariants.iter().find(|d| d.name == name)
    }
}

/// `H` followed by the model's constants of motion at `s`.
pub fn invariants_at(m: &PotentialModel, s: &PhaseState) -> Result<Vec<(&'static str, f64)>> {
    let consts = match constants_of_motion(m, s) {
        Err(Error::Unsupported(_)) => constants_of_motion(m, &s.to_chart(Chart::Cartesian)?)?,
        other => other?,
    };
    let mut out = vec![("H", hamiltonian(m, s)?)];
    out.extend(consts.into_iter().filter(|c| c.name != "H").map(|c| (c.name, c.value)));
    Ok(out)
}

/// Evaluates `H` and the model's constants of motion along `t`.
pub fn invariant_drift(t: &Trajectory) -> Result<DriftReport> {
    if t.is_empty() {
        return domain("empty trajectory");
    }
    let series = t.states.iter().map(|s| invariants_at(&t.model, s)).collect::<Result<Vec<_>>>()?;
    let n = series.len();
    let h0 = series[0][0].1.abs();
    let window = (n / 10).max(1);
    let invariants = (0..series[0].len())
        .map(|k| {
            let name = series[0][k].0;
            let initial = series[0][k].1;
            let max_dev = series.iter().map(|row| (row[k].1 - initial).abs()).fold(0.0, f64::max);
            let mut scale = initial.abs().max(h0);
            if scale == 0.0 {
                scale = 1.0;
            }
            let mean = |rows: &[Vec<(&str, f64)>]| rows.iter().map(|r| r[k].1).sum::<f64>() / rows.len() as f64;
            let secular = (mean(&series[n - window..]) - mean(&series[..window])).abs();
            InvariantDrift { name, initial, max_abs_deviation: max_dev, relative_drift: max_dev / scale, secular_drift: secular / scale }
        })
        .collect();
    Ok(DriftReport { samples: n, invariants, termination: t.termination.clone() })
}
