use affine_body::models::{polar_v_theta, ModelKind, PhysicalParams, PotentialModel};
use affine_body::quantum::{slice_eigenvalue, Convention, HalfInt, QuantumNumbers, WaveFactor, WaveVariable};
use affine_body::sturm::*;
use affine_body::Error;
use std::f64::consts::PI;

fn model(kind: ModelKind) -> PotentialModel {
    PotentialModel::new(kind, PhysicalParams::new(1.0, 1.0, 1.0).unwrap())
}

fn hi(k: i32) -> HalfInt {
    HalfInt::int(k)
}

fn sine(n: usize) -> SLProblem {
    SLProblem::new(|_| 1.0, |_| 0.0, |_| 0.0, |_| 1.0, 0.0, PI, (Boundary::Dirichlet, Boundary::Dirichlet)).with_grid(n)
}

#[test]
fn second_order_convergence_on_sine_problem() {
    let coarse = |n| lowest_eigenvalues(&sine(n), 3).unwrap().coarse;
    let (a, b, c) = (coarse(200), coarse(400), coarse(800));
    for i in 0..3 {
        // h = π/(N+1), so the ratio of successive differences tends to 4
        let ratio = (a[i] - b[i]) / (b[i] - c[i]);
        assert!((ratio - 4.0).abs() < 0.05, "mode {i}: {ratio}");
    }
}

#[test]
fn assembled_operator_expands_to_the_raw_equations() {
    let pars = PhysicalParams::new(1.3, 0.7, 0.9).unwrap();
    let k2 = 2.0 * pars.mu / (pars.hbar * pars.hbar);
    let (m, l) = (2, -1);
    let cubic = |x: f64| (1.0 + 2.0 * x - x * x + 0.5 * x.powi(3), 2.0 - 2.0 * x + 1.5 * x * x, -2.0 + 3.0 * x);
    for kind in [ModelKind::Harmonic, ModelKind::AnharmonicAlphaBeta, ModelKind::AnharmonicRTheta] {
        let md = PotentialModel::new(kind, pars);
        let cb = if kind == ModelKind::Harmonic { 0.0 } else { pars.c };
        let e = 1.7;
        for eq in [Equation::AlphaRadial, Equation::BetaRadial, Equation::ThetaAngular, Equation::RRadial, Equation::RhoRadial] {
            let prob = build_problem(eq, &md, hi(m), hi(l), Convention::Integer, Some(e)).unwrap();
            for i in 1..=20 {
                let x = if eq == Equation::ThetaAngular { PI * i as f64 / 21.0 } else { 0.2 * i as f64 };
                let (f, d1, d2) = cubic(x);
                let (mf, lf) = (m as f64, l as f64);
                // raw forms rearranged to −(…) = λ f with λ the scaled eigenvalue
                let raw = match eq {
                    Equation::AlphaRadial => {
                        -(d2 + d1 / x - (mf - lf).powi(2) / (4.0 * x * x) * f - k2 * (0.5 * pars.c * x * x + 2.0 * cb / (x * x)) * f)
                    }
                    Equation::BetaRadial => -(d2 + d1 / x - (mf + lf).powi(2) / (4.0 * x * x) * f - k2 * 0.5 * pars.c * x * x * f),
                    Equation::ThetaAngular => {
                        let bar = (mf * mf + 2.0 * mf * lf * x.cos() + lf * lf) / (4.0 * x.sin().powi(2));
                        let v = polar_v_theta(&md, x).unwrap();
                        -(d2 + d1 / x.tan() - (bar + pars.mu / (2.0 * pars.hbar * pars.hbar) * v) * f)
                    }
                    Equation::RRadial => -(4.0 * x * d2 + 8.0 * d1 - k2 * (0.5 * pars.c * x + e / x) * f),
                    Equation::RhoRadial => -(d2 + 3.0 * d1 / x - k2 * (0.5 * pars.c * x * x + e / (x * x)) * f),
                };
                let got = prob.apply(x, f, d1, d2);
                assert!((got - raw).abs() <= 1e-12 * raw.abs().max(1.0), "{kind} {eq:?} x={x}: {got} vs {raw}");
            }
        }
    }
}

#[test]
fn coefficient_examples() {
    let md = model(ModelKind::Harmonic);
    let prob = build_problem(Equation::AlphaRadial, &md, hi(1), hi(1), Convention::Integer, None).unwrap();
    for &x in &[0.3, 1.0, 2.5] {
        assert!(((prob.q)(x) - 2.0 * 0.5 * x * x * x).abs() < 1e-15);
        assert_eq!((prob.p)(x), x);
        assert_eq!((prob.w)(x), x);
    }
    let th = build_problem(Equation::ThetaAngular, &md, hi(2), hi(1), Convention::Integer, None).unwrap();
    let t: f64 = 1.1;
    let want = t.sin() * (4.0 + 4.0 * t.cos() + 1.0) / (4.0 * t.sin().powi(2));
    assert!(((th.q)(t) - want).abs() < 1e-15);
    let r = build_problem(Equation::RRadial, &md, hi(0), hi(0), Convention::Integer, Some(0.5)).unwrap();
    assert_eq!((r.p)(2.0), 16.0);
    assert_eq!((r.w)(2.0), 2.0);
}

#[test]
fn harmonic_alpha_ground_state_is_hbar_omega() {
    let md = model(ModelKind::Harmonic);
    let r = lowest_eigenvalues(&build_problem(Equation::AlphaRadial, &md, hi(2), hi(2), Convention::Integer, None).unwrap(), 1).unwrap();
    assert!((r.physical()[0] - 1.0).abs() < 1e-6);
}

#[test]
fn free_nutation_gives_top_eigenvalues() {
    let md = model(ModelKind::Harmonic);
    for (m2, l2) in [(0, 0), (1, 1), (1, -1), (3, 1), (2, -4), (5, 3)] {
        // integer labels m = 2m'
        let prob =
            build_problem(Equation::ThetaAngular, &md, HalfInt::from_twice(m2), HalfInt::from_twice(l2), Convention::HalfInteger, None)
                .unwrap();
        let r = lowest_eigenvalues(&prob, 4).unwrap();
        let j0 = 0.5 * (m2.abs().max(l2.abs()) as f64);
        for (k, e) in r.physical().iter().enumerate() {
            let j = j0 + k as f64;
            let want = 2.0 * j * (j + 1.0);
            assert!((e - want).abs() < 1e-6 * want.max(1.0), "m'={m2}/2 l'={l2}/2 k={k}: {e} vs {want}");
        }
    }
}

#[test]
fn conventions_relabel_consistently() {
    let md = model(ModelKind::AnharmonicRTheta);
    let a =
        build_problem(Equation::ThetaAngular, &md, HalfInt::from_twice(1), HalfInt::from_twice(3), Convention::HalfInteger, None).unwrap();
    let b = build_problem(Equation::ThetaAngular, &md, hi(1), hi(3), Convention::Integer, None).unwrap();
    let (ra, rb) = (lowest_eigenvalues(&a, 3).unwrap(), lowest_eigenvalues(&b, 3).unwrap());
    assert_eq!(ra.extrapolated, rb.extrapolated);
    assert!(build_problem(Equation::ThetaAngular, &md, HalfInt::from_twice(1), hi(0), Convention::Integer, None).is_err());
}

#[test]
fn validate_examples() {
    let cases = [(ModelKind::Harmonic, 0, 0, 3), (ModelKind::AnharmonicAlphaBeta, 0, 2, 4), (ModelKind::AnharmonicRTheta, 1, -2, 4)];
    for (kind, m, l, k) in cases {
        let rows = validate_spectrum(&model(kind), m, l, k).unwrap();
        assert!(!rows.is_empty());
        for r in rows {
            assert!(r.rel_error < 1e-6, "{kind} {} {:?}: {} vs {}", r.quantity, r.numbers, r.analytic, r.oracle);
        }
    }
}

#[test]
fn tan_split_theta_constant_is_oracle_minus_two_c() {
    let pars = PhysicalParams::new(1.0, 1.0, 1.0).unwrap();
    let md = PotentialModel::new(ModelKind::AnharmonicRTheta, pars);
    let r = lowest_eigenvalues(&build_problem(Equation::ThetaAngular, &md, hi(1), hi(0), Convention::Integer, None).unwrap(), 3).unwrap();
    for (n, e) in r.physical().iter().enumerate() {
        let q = QuantumNumbers::new(0, n as u32, 1, 0);
        let tan_split = affine_body::quantum::energy_anharmonic_rtheta(&q, &pars).e_theta.unwrap();
        assert!((e - 2.0 * pars.c - tan_split).abs() < 1e-6 * tan_split, "n={n}");
    }
}

#[test]
fn harmonic_levels_also_separate_in_polar_form() {
    for (m, l) in [(0, 0), (2, -1), (-3, 3)] {
        for r in validate_spectrum_with(&model(ModelKind::Harmonic), Separation::Polar, m, l, 3).unwrap() {
            assert!(r.rel_error < 1e-6, "{} {:?}", r.quantity, r.numbers);
        }
    }
}

#[test]
fn rho_and_r_equations_share_eigenvalues() {
    let md = model(ModelKind::AnharmonicRTheta);
    for e in [0.0, 1.3, 7.0] {
        let r = lowest_eigenvalues(&build_problem(Equation::RRadial, &md, hi(0), hi(0), Convention::Integer, Some(e)).unwrap(), 4).unwrap();
        let rho =
            lowest_eigenvalues(&build_problem(Equation::RhoRadial, &md, hi(0), hi(0), Convention::Integer, Some(e)).unwrap(), 4).unwrap();
        for (a, b) in r.physical().iter().zip(rho.physical()) {
            assert!((a - b).abs() < 1e-6 * a, "e={e}: {a} vs {b}");
        }
    }
}

#[test]
fn larger_cutoff_does_not_raise_bound_states() {
    let md = model(ModelKind::AnharmonicAlphaBeta);
    let base = build_problem(Equation::AlphaRadial, &md, hi(1), hi(-2), Convention::Integer, None).unwrap();
    let r0 = lowest_eigenvalues(&base, 4).unwrap();
    let mut wide = base.clone();
    wide.hi *= 1.5;
    wide.grid_n = 3000;
    let r1 = lowest_eigenvalues(&wide, 4).unwrap();
    for (a, b) in r0.extrapolated.iter().zip(&r1.extrapolated) {
        assert!(b - a < 1e-8 * a.abs().max(1.0), "{a} -> {b}");
    }
}

#[test]
fn eigenvectors_are_weighted_orthonormal_and_match_closed_forms() {
    let pars = PhysicalParams::new(1.0, 1.0, 1.0).unwrap();
    for kind in [ModelKind::Harmonic, ModelKind::AnharmonicAlphaBeta] {
        let md = PotentialModel::new(kind, pars);
        let prob = build_problem(Equation::AlphaRadial, &md, hi(2), hi(1), Convention::Integer, None).unwrap();
        let (x, vecs) = eigenvectors(&prob, 4).unwrap();
        let h = prob.grid(prob.grid_n).1;
        for i in 0..4 {
            for j in 0..4 {
                let ip: f64 = x.iter().enumerate().map(|(k, &xk)| (prob.w)(xk) * vecs[i][k] * vecs[j][k] * h).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((ip - want).abs() < 1e-10, "{kind} ({i},{j}): {ip}");
            }
            let wf =
                WaveFactor::new(kind, WaveVariable::Alpha, &QuantumNumbers::new(i as u32, 0, 2, 1), &pars).unwrap().normalized().unwrap();
            let mid = x.len() / 8;
            let sign = (wf.eval(x[mid]).unwrap() / vecs[i][mid]).signum();
            let dev = x.iter().zip(&vecs[i]).step_by(37).map(|(&xk, &v)| (sign * v - wf.eval(xk).unwrap()).abs()).fold(0.0, f64::max);
            assert!(dev < 1e-4, "{kind} n={i}: {dev}");
        }
    }
}

#[test]
fn eigenvalues_strictly_increase() {
    let md = model(ModelKind::AnharmonicRTheta);
    let r = lowest_eigenvalues(&build_problem(Equation::ThetaAngular, &md, hi(3), hi(-3), Convention::Integer, None).unwrap(), 6).unwrap();
    assert!(r.extrapolated.windows(2).all(|w| w[1] > w[0]));
    assert!(r.error_estimates.iter().all(|e| *e < 1e-3));
}

#[test]
fn analytic_slice_values_match_oracle_per_variable() {
    let pars = PhysicalParams::new(0.8, 1.4, 1.2).unwrap();
    let md = PotentialModel::new(ModelKind::AnharmonicAlphaBeta, pars);
    let r = lowest_eigenvalues(&build_problem(Equation::BetaRadial, &md, hi(2), hi(1), Convention::Integer, None).unwrap(), 4).unwrap();
    for (n, e) in r.physical().iter().enumerate() {
        let want =
            slice_eigenvalue(ModelKind::AnharmonicAlphaBeta, WaveVariable::Beta, &QuantumNumbers::new(0, n as u32, 2, 1), &pars).unwrap();
        assert!((e - want).abs() < 1e-6 * want);
    }
}

#[test]
fn unsupported_and_missing_inputs() {
    let free = model(ModelKind::Free);
    assert!(matches!(build_problem(Equation::AlphaRadial, &free, hi(0), hi(0), Convention::Integer, None), Err(Error::Unsupported(_))));
    let h = model(ModelKind::Harmonic);
    assert!(matches!(build_problem(Equation::RRadial, &h, hi(0), hi(0), Convention::Integer, None), Err(Error::Domain(_))));
    assert!(lowest_eigenvalues(&sine(300), 0).is_err());
}
