use std::f64::consts::PI;

use affine_body::actions::{self, ActionSet, ActionSlice};
use affine_body::charts::*;
use affine_body::dynamics::{self, invariant_drift, invariants_at};
use affine_body::models::{ModelKind, PhaseState, PhysicalParams, PotentialModel};
use affine_body::quantum::{self, Convention, HalfInt, QuantumNumbers, WaveFactor};
use affine_body::sturm::{validate_spectrum_on, Separation};
use affine_body::Error;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::config::RunConfig;
use crate::output::{Cell, Table};

#[derive(Debug)]
pub enum Failure {
    Config(String),
    Io(std::io::Error),
    Lib(Error),
    /// The trajectory left the chart; partial output has been written.
    Truncated(String),
    Check(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Config(_) | Failure::Io(_) => 1,
            Failure::Lib(Error::Unsupported(_)) => 4,
            Failure::Lib(_) => 2,
            Failure::Truncated(_) => 3,
            Failure::Check(_) => 5,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "config error: {m}"),
            Failure::Io(e) => write!(f, "i/o error: {e}"),
            Failure::Lib(e) => write!(f, "{e}"),
            Failure::Truncated(m) => write!(f, "trajectory truncated: {m}"),
            Failure::Check(m) => write!(f, "check failed: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

pub type Outcome<T> = Result<T, Failure>;

fn model(cfg: &RunConfig) -> Outcome<PotentialModel> {
    let m = &cfg.model;
    Ok(PotentialModel::new(m.kind, PhysicalParams::new(m.mu, m.c, m.hbar)?))
}

pub fn decompose(entries: [f64; 4]) -> Outcome<Table> {
    let [x, y, z, u] = entries;
    let c = two_polar_decompose(&ConfigurationMatrix::new(x, y, z, u))?;
    let mut t = Table::new(["phi", "psi", "d1", "d2"]);
    t.push(vec![c.phi.into(), c.psi.into(), c.d1.into(), c.d2.into()]);
    Ok(t)
}

pub struct Simulation {
    pub trajectory: Table,
    pub summary: serde_json::Value,
    pub termination: Option<String>,
}

pub fn simulate(cfg: &RunConfig) -> Outcome<Simulation> {
    let m = model(cfg)?;
    let ic = &cfg.initial;
    let s0 = PhaseState::new(ChartPoint::new(ic.chart, ic.coords), ic.momenta).to_chart(cfg.chart)?;
    let it = &cfg.integrator;
    let dt = it.dt.unwrap_or_else(|| dynamics::default_dt(&m.params));
    let traj = dynamics::integrate(&m, &s0, dt, it.steps, it.scheme)?;

    let names: Vec<&str> = invariants_at(&m, &s0)?.into_iter().map(|(n, _)| n).collect();
    let mut table = Table::new(["t", "q1", "q2", "q3", "q4", "p1", "p2", "p3", "p4"].into_iter().chain(names.iter().copied()));
    let picked: Vec<usize> = (0..traj.len()).step_by(it.stride).collect();
    let rows = picked
        .par_iter()
        .map(|&i| {
            let s = &traj.states[i];
            let mut row: Vec<Cell> = vec![traj.times[i].into()];
            row.extend(s.point.coords.iter().chain(&s.momenta).map(|&v| Cell::from(v)));
            row.extend(invariants_at(&m, s)?.into_iter().map(|(_, v)| Cell::from(v)));
            Ok(row)
        })
        .collect::<Result<Vec<_>, Error>>()?;
    rows.into_iter().for_each(|r| table.push(r));

    let drift = invariant_drift(&traj)?;
    let summary = json!({
        "model": m.kind,
        "chart": cfg.chart,
        "scheme": it.scheme,
        "dt": dt,
        "steps_requested": it.steps,
        "drift": drift,
        "max_relative_drift": drift.invariants.iter().map(|d| d.relative_drift).fold(0.0, f64::max),
        "max_secular_drift": drift.invariants.iter().map(|d| d.secular_drift).fold(0.0, f64::max),
    });
    let termination = traj.termination.as_ref().map(|t| format!("step {} (t = {}): {}", t.step, t.t, t.reason));
    Ok(Simulation { trajectory: table, summary, termination })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Source {
    Bs,
    Analytic,
    Oracle,
    Compare,
}

/// `(m, l)` in the configured convention, as twice-values.
fn angular_pairs(cfg: &RunConfig) -> Vec<(HalfInt, HalfInt)> {
    let q = &cfg.quantum;
    let step = if q.convention == Convention::HalfInteger { 1 } else { 2 };
    let range = |max: u32| (-2 * max as i32..=2 * max as i32).step_by(step).map(HalfInt::from_twice).collect::<Vec<_>>();
    let ls = range(q.l_max);
    range(q.m_max).into_iter().flat_map(|m| ls.iter().map(move |&l| (m, l))).collect()
}

fn ml_cells(conv: Convention, m: HalfInt, l: HalfInt) -> [Cell; 2] {
    match conv {
        Convention::Integer => [Cell::Int((m.twice() / 2).into()), Cell::Int((l.twice() / 2).into())],
        Convention::HalfInteger => [m.value().into(), l.value().into()],
    }
}

pub fn spectrum(cfg: &RunConfig, source: Source) -> Outcome<Table> {
    let md = model(cfg)?;
    let conv = cfg.quantum.convention;
    let n_max = cfg.quantum.n_max;
    let pairs = angular_pairs(cfg);
    let levels = |m: HalfInt, l: HalfInt| -> Outcome<Vec<QuantumNumbers>> {
        let mut out = vec![];
        for na in 0..=n_max {
            for nb in 0..=n_max - na {
                out.push(QuantumNumbers::with_convention(na, nb, m, l, conv)?);
            }
        }
        Ok(out)
    };
    match source {
        Source::Bs | Source::Analytic => {
            let label = if source == Source::Bs { "bohr-sommerfeld" } else { "analytic" };
            let blocks = pairs
                .par_iter()
                .map(|&(m, l)| {
                    levels(m, l)?
                        .into_iter()
                        .map(|q| {
                            let e = match source {
                                Source::Bs => actions::bs_spectrum(&md, &actions::BsQuantumNumbers { n: q.n(), m: q.m, l: q.l })?,
                                _ => quantum::energy(md.kind, &q, &md.params)?.energy,
                            };
                            let [mc, lc] = ml_cells(conv, m, l);
                            Ok(vec![q.n_a.into(), q.n_b.into(), mc, lc, e.into(), label.into()])
                        })
                        .collect::<Outcome<Vec<_>>>()
                })
                .collect::<Outcome<Vec<_>>>()?;
            let mut t = Table::new(["n_a", "n_b", "m", "l", "E", "provenance"]);
            blocks.into_iter().flatten().for_each(|r| t.push(r));
            Ok(t)
        }
        Source::Oracle | Source::Compare => {
            let sep = Separation::default_for(md.kind);
            let k = n_max as usize + 1;
            let blocks = pairs
                .par_iter()
                .map(|&(m, l)| {
                    let q = QuantumNumbers::with_convention(0, 0, m, l, conv)?;
                    Ok((m, l, validate_spectrum_on(&md, sep, q.m, q.l, k, cfg.grid.n)?))
                })
                .collect::<Outcome<Vec<_>>>()?;
            let mut t = if source == Source::Oracle {
                Table::new(["n_a", "n_b", "m", "l", "E", "provenance"])
            } else {
                Table::new(["quantity", "n_a", "n_b", "m", "l", "analytic", "oracle", "rel_error", "error_estimate"])
            };
            for (m, l, rows) in blocks {
                for r in rows {
                    let [mc, lc] = ml_cells(conv, m, l);
                    let (na, nb) = (r.numbers.n_a.into(), r.numbers.n_b.into());
                    if source == Source::Oracle {
                        if r.quantity == "level" {
                            t.push(vec![na, nb, mc, lc, r.oracle.into(), "oracle".into()]);
                        }
                    } else {
                        t.push(vec![
                            r.quantity.into(),
                            na,
                            nb,
                            mc,
                            lc,
                            r.analytic.into(),
                            r.oracle.into(),
                            r.rel_error.into(),
                            r.error_estimate.into(),
                        ]);
                    }
                }
            }
            Ok(t)
        }
    }
}

pub fn actions(cfg: &RunConfig) -> Outcome<Table> {
    let md = model(cfg)?;
    let polar = md.kind == ModelKind::AnharmonicRTheta;
    let mut t = Table::new([
        "family",
        "e1",
        "e2",
        "j_phi",
        "j_psi",
        "j1_quadrature",
        "j1_closed",
        "j2_quadrature",
        "j2_closed",
        "energy",
        "nu1",
        "nu2",
        "nu_phi",
        "nu_psi",
        "resonances",
        "rank",
    ]);
    let rows = cfg
        .actions
        .states_for(polar)
        .par_iter()
        .map(|&[e1, e2, jp, js]| {
            let (s1, s2) =
                if polar { (ActionSlice::Radial { h_theta: e2 }, ActionSlice::Theta) } else { (ActionSlice::Alpha, ActionSlice::Beta) };
            let j1 = actions::action_integral(&md, s1, e1, jp, js)?;
            let j2 = actions::action_integral(&md, s2, e2, jp, js)?;
            let c1 = actions::slice_action_closed_form(&md, s1, e1, jp, js)?;
            let c2 = actions::slice_action_closed_form(&md, s2, e2, jp, js)?;
            let set = if polar { ActionSet::polar(j1, j2, jp, js) } else { ActionSet::alpha_beta(j1, j2, jp, js) };
            let e = actions::energy_from_actions(&md, &set)?;
            let f = actions::frequencies(&md, &set)?;
            let rels = actions::resonance_check(&md, &set)?;
            let labels = rels.iter().map(|r| r.label).collect::<Vec<_>>().join("; ");
            let family = if polar { "polar" } else { "alpha-beta" };
            let nums = [e1, e2, jp, js, j1, c1, j2, c2, e, f.nu1, f.nu2, f.nu_phi, f.nu_psi];
            let mut row: Vec<Cell> = vec![family.into()];
            row.extend(nums.into_iter().map(Cell::from));
            row.push(labels.into());
            row.push(actions::relation_rank(&rels).into());
            Ok(row)
        })
        .collect::<Outcome<Vec<_>>>()?;
    rows.into_iter().for_each(|r| t.push(r));
    Ok(t)
}

pub fn wavefunction(cfg: &RunConfig) -> Outcome<Table> {
    let md = model(cfg)?;
    let w = &cfg.wavefunction;
    let (m, l) = (HalfInt::parse(&w.m)?, HalfInt::parse(&w.l)?);
    let q = QuantumNumbers::with_convention(w.n_a, w.n_b, m, l, cfg.quantum.convention)?;
    let factor = WaveFactor::new(md.kind, w.variable, &q, &md.params)?;
    let normalized = if w.normalized { Some(factor.normalized()?) } else { None };
    let (lo, hi) = factor.support();
    let h = (hi - lo) / w.samples as f64;
    let rows = (0..w.samples)
        .into_par_iter()
        .map(|i| {
            let x = lo + (i as f64 + 0.5) * h;
            let v = match &normalized {
                Some(n) => n.eval(x)?,
                None => factor.eval(x)?,
            };
            Ok(vec![Cell::from(x), Cell::from(v)])
        })
        .collect::<Outcome<Vec<_>>>()?;
    let mut t = Table::new(["x", "value"]);
    rows.into_iter().for_each(|r| t.push(r));
    Ok(t)
}

struct Sample {
    tp: TwoPolarCoords,
    v: [f64; 4],
    group: [f64; 4],
    gv: [f64; 4],
    gc: f64,
    angles: [f64; 4],
}

fn random_sample(rng: &mut ChaCha8Rng) -> Sample {
    let d2 = rng.gen_range(0.4..1.5);
    let tp = TwoPolarCoords::new(rng.gen_range(-PI..PI), rng.gen_range(-PI..PI), d2 + rng.gen_range(0.1..1.2), d2);
    let mut unit = || [0; 4].map(|_| rng.gen_range(-1.0..1.0));
    let (v, gv) = (unit(), unit());
    let group = [rng.gen_range(0.2..3.0), rng.gen_range(-PI..PI), rng.gen_range(-2.0..2.0), rng.gen_range(-PI..PI)];
    let gc = rng.gen_range(-2.0..2.0);
    let angles = [rng.gen_range(0.5..2.0), rng.gen_range(-PI..PI), rng.gen_range(0.1..3.0), rng.gen_range(-PI..PI)];
    Sample { tp, v, group, gv, gc, angles }
}

/// Chart map Jacobian by five-point central differences, Richardson-extrapolated over `h` and `h/2`.
fn fd_jacobian(p: &ChartPoint) -> Result<[[f64; 4]; 4], Error> {
    let mut jac = [[0.0; 4]; 4];
    for k in 0..4 {
        let base = 1e-3 * p.coords[k].abs().max(1.0);
        let stencil = |h: f64| -> Result<[f64; 4], Error> {
            let at = |s: f64| {
                let mut q = *p;
                q.coords[k] += s * h;
                q.to_matrix().map(|m| m.to_array())
            };
            let (a2, a1, b1, b2) = (at(2.0)?, at(1.0)?, at(-1.0)?, at(-2.0)?);
            Ok(std::array::from_fn(|i| (b2[i] - a2[i] + 8.0 * (a1[i] - b1[i])) / (12.0 * h)))
        };
        let (d1, d2) = (stencil(base)?, stencil(0.5 * base)?);
        for i in 0..4 {
            jac[i][k] = (64.0 * d2[i] - d1[i]) / 63.0;
        }
    }
    Ok(jac)
}

/// Worst deviations for one sample, in the order of [`CHECKS`].
fn sample_deviations(s: &Sample) -> Result<[f64; 6], Error> {
    let m = two_polar_compose(&s.tp);
    let back = two_polar_compose(&two_polar_decompose(&m)?).to_array();
    let ma = m.to_array();
    let round_trip = (0..4).map(|i| (back[i] - ma[i]).abs()).fold(0.0, f64::max) / m.max_norm();

    let src = ChartPoint::cartesian(&m);
    let t0 = kinetic_energy(&src, &s.v, 1.0)?;
    let (mut kin, mut push) = (0.0f64, 0.0f64);
    for chart in Chart::ALL {
        let (q, w) = transform_tangent(&src, &s.v, chart)?;
        kin = kin.max((kinetic_energy(&q, &w, 1.0)? - t0).abs() / t0.max(1e-3));
        let g = metric_at(&q)?.quadratic_form(&w);
        let jac = fd_jacobian(&q)?;
        let pushed: f64 = jac.iter().map(|row| row.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>().powi(2)).sum();
        push = push.max((g - pushed).abs() / (1.0 + g.abs()));
    }

    let mut cartan = 0.0f64;
    for fam in [GroupFamily::BreathingTopSu2, GroupFamily::InvariantGl2] {
        let spec = GroupMetricSpec::new(fam, s.gc);
        let a = group_metric_cartan(&spec, &s.group, &s.gv)?;
        let b = group_metric_closed_form(&spec, &s.group, &s.gv)?;
        cartan = cartan.max((a - b).abs() / (1.0 + b.abs()));
    }

    let [delta, phi, th, psi] = s.angles;
    let v = s.gv;
    let p = [delta.into(), phi.into(), Complex64::new(0.0, th), psi.into()];
    let dv = [0.0.into(), v[1].into(), Complex64::new(0.0, v[2]), v[3].into()];
    let z = group_metric_cartan_complex(&GroupMetricSpec::new(GroupFamily::InvariantGl2, 0.0), &p, &dv)? / (0.25 * delta * delta);
    let top = v[2] * v[2] + v[1] * v[1] + 2.0 * th.cos() * v[1] * v[3] + v[3] * v[3];
    Ok([round_trip, kin, push, cartan, z.im.abs(), (z.re + top).abs()])
}

const CHECKS: [(&str, f64); 6] = [
    ("decompose-compose round trip", 1e-12),
    ("cross-chart kinetic energy", 1e-10),
    ("metric pushforward", 1e-10),
    ("cartan vs closed-form group metric", 1e-10),
    ("complexified metric imaginary residue", 1e-12),
    ("complexified metric angular block", 1e-10),
];

/// Runs every check; the table is returned together with the names of failed checks.
pub fn chart_check(cfg: &RunConfig) -> Outcome<(Table, Vec<&'static str>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let samples: Vec<Sample> = (0..cfg.chart_check.samples).map(|_| random_sample(&mut rng)).collect();
    let devs = samples.par_iter().map(sample_deviations).collect::<Result<Vec<_>, Error>>()?;
    let mut t = Table::new(["check", "max_deviation", "threshold", "status"]);
    let mut failed = vec![];
    for (k, (name, tol)) in CHECKS.iter().enumerate() {
        let tol = &(tol * cfg.chart_check.tolerance_scale);
        let worst = devs.iter().map(|d| d[k]).fold(0.0, f64::max);
        let ok = worst < *tol;
        if !ok {
            failed.push(*name);
        }
        t.push(vec![(*name).into(), worst.into(), (*tol).into(), if ok { "pass" } else { "fail" }.into()]);
    }
    Ok((t, failed))
}
