use affine_body::charts::*;
use nalgebra::Vector4;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// A generic two-polar point with `D₁ > D₂ > 0`, away from every chart's singular locus.
fn random_two_polar(rng: &mut ChaCha8Rng) -> TwoPolarCoords {
    let d2 = rng.gen_range(0.3..1.5);
    let d1 = d2 + rng.gen_range(0.1..1.5);
    TwoPolarCoords::new(rng.gen_range(-PI..PI), rng.gen_range(-PI..PI), d1, d2)
}

fn random_vec(rng: &mut ChaCha8Rng) -> [f64; 4] {
    [0; 4].map(|_| rng.gen_range(-1.0..1.0))
}

fn central_jacobian(p: &ChartPoint) -> nalgebra::Matrix4<f64> {
    let mut j = nalgebra::Matrix4::zeros();
    for k in 0..4 {
        let h = 1e-6 * p.coords[k].abs().max(1.0);
        let mut a = *p;
        let mut b = *p;
        a.coords[k] += h;
        b.coords[k] -= h;
        let xa = a.to_matrix().unwrap().to_array();
        let xb = b.to_matrix().unwrap().to_array();
        for i in 0..4 {
            j[(i, k)] = (xa[i] - xb[i]) / (2.0 * h);
        }
    }
    j
}

#[test]
fn decompose_round_trip_on_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut done = 0;
    while done < 100 {
        let m = ConfigurationMatrix::from_array(random_vec(&mut rng).map(|v| 3.0 * v));
        if m.det() < 1e-8 {
            continue;
        }
        let c = two_polar_decompose(&m).unwrap();
        assert!(c.d1 >= c.d2 && c.d2 > 0.0);
        assert!((0.0..2.0 * PI).contains(&c.phi) && (0.0..2.0 * PI).contains(&c.psi));
        let back = two_polar_compose(&c);
        let err = (0..4).map(|i| (back.to_array()[i] - m.to_array()[i]).abs()).fold(0.0, f64::max);
        assert!(err < 1e-12 * m.max_norm(), "err {err}");
        done += 1;
    }
}

#[test]
fn transforms_preserve_the_matrix_and_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let tp = random_two_polar(&mut rng);
        let m = two_polar_compose(&tp);
        for src in Chart::ALL {
            let p = from_two_polar(&tp, src).unwrap();
            for dst in Chart::ALL {
                let q = transform(&p, dst).unwrap();
                let mq = q.to_matrix().unwrap();
                let err = (0..4).map(|i| (mq.to_array()[i] - m.to_array()[i]).abs()).fold(0.0, f64::max);
                assert!(err < 1e-12 * (1.0 + m.max_norm()), "{src}->{dst}: {err}");
                let back = transform(&q, src).unwrap();
                assert!(back.equivalent(&p, 1e-10), "{src}->{dst}->{src}: {:?} vs {:?}", back, p);
            }
        }
    }
}

#[test]
fn analytic_jacobians_match_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let tp = random_two_polar(&mut rng);
        for chart in Chart::ALL {
            let p = from_two_polar(&tp, chart).unwrap();
            let a = cartesian_jacobian(&p).unwrap();
            let n = central_jacobian(&p);
            assert!((a - n).amax() < 1e-8, "{chart}: {}", (a - n).amax());
        }
    }
}

#[test]
fn metric_matches_pushforward_norm() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..100 {
        let tp = random_two_polar(&mut rng);
        for chart in Chart::ALL {
            let p = from_two_polar(&tp, chart).unwrap();
            let v = random_vec(&mut rng);
            let g = metric_at(&p).unwrap();
            assert_eq!(g.g, g.g.transpose());
            let w = central_jacobian(&p) * Vector4::from(v);
            let lhs = g.quadratic_form(&v);
            assert!((lhs - w.norm_squared()).abs() < 1e-8 * (1.0 + lhs.abs()), "{chart}");
        }
    }
}

#[test]
fn kinetic_energy_agrees_across_charts() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let tp = random_two_polar(&mut rng);
        let src = ChartPoint::cartesian(&two_polar_compose(&tp));
        let v = random_vec(&mut rng);
        let t0 = kinetic_energy(&src, &v, 1.7).unwrap();
        for chart in Chart::ALL {
            let (q, w) = transform_tangent(&src, &v, chart).unwrap();
            let t = kinetic_energy(&q, &w, 1.7).unwrap();
            assert!((t - t0).abs() <= 1e-10 * t0.abs().max(1e-3), "{chart}: {t} vs {t0}");
        }
    }
}

#[test]
fn polar_line_element_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let r = rng.gen_range(0.1..5.0);
        let th = rng.gen_range(0.01..PI - 0.01);
        let v = random_vec(&mut rng);
        let f = polar_line_element_forms(r, th, v[0], v[1], v[2], v[3]);
        assert!((f[0] - f[1]).abs() < 1e-12 && (f[0] - f[2]).abs() < 1e-12);
    }
}

#[test]
fn euler_conventions_reproduce_top_metric() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let tp = random_two_polar(&mut rng);
        let p = from_two_polar(&tp, Chart::PolarRTheta).unwrap();
        let v = random_vec(&mut rng);
        let t = metric_at(&p).unwrap().quadratic_form(&v);
        let [r, _, th, _] = euler_from_polar_top_convention(&p).unwrap();
        let (dphi, dpsi, dr, dth) = (v[0], v[1], v[2], v[3]);
        let (d_big_phi, d_big_psi) = (2.0 * dphi, -2.0 * dpsi);
        let top = dr * dr / (4.0 * r)
            + 0.25 * r * (dth * dth + d_big_phi * d_big_phi + 2.0 * th.cos() * d_big_phi * d_big_psi + d_big_psi * d_big_psi);
        assert!((t - top).abs() < 1e-12 * (1.0 + t.abs()));
        let e = euler_from_polar(&p).unwrap();
        assert!((e[3] - 2.0 * p.coords[1]).abs() < 1e-15);
    }
}

#[test]
fn cartan_route_matches_closed_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for fam in [GroupFamily::BreathingTopSu2, GroupFamily::InvariantGl2] {
        for _ in 0..100 {
            let spec = GroupMetricSpec::new(fam, rng.gen_range(-2.0..2.0));
            let p = [rng.gen_range(0.2..3.0), rng.gen_range(-PI..PI), rng.gen_range(-2.0..2.0), rng.gen_range(-PI..PI)];
            let v = random_vec(&mut rng);
            let a = group_metric_cartan(&spec, &p, &v).unwrap();
            let b = group_metric_closed_form(&spec, &p, &v).unwrap();
            assert!((a - b).abs() < 1e-10 * (1.0 + b.abs()), "{fam:?}: {a} vs {b}");
        }
    }
}

#[test]
fn complexified_cartan_form_gives_negated_top() {
    use num_complex::Complex64;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let spec = GroupMetricSpec::new(GroupFamily::InvariantGl2, 0.0);
    for _ in 0..50 {
        let (delta, phi, th, psi) = (rng.gen_range(0.5..2.0), rng.gen_range(-PI..PI), rng.gen_range(0.1..3.0), rng.gen_range(-PI..PI));
        let v = random_vec(&mut rng);
        let p = [delta.into(), phi.into(), Complex64::new(0.0, th), psi.into()];
        // Pure angular tangent: dδ = 0.
        let dv = [0.0.into(), v[1].into(), Complex64::new(0.0, v[2]), v[3].into()];
        let z = group_metric_cartan_complex(&spec, &p, &dv).unwrap() / (0.25 * delta * delta);
        let top = v[2] * v[2] + v[1] * v[1] + 2.0 * th.cos() * v[1] * v[3] + v[3] * v[3];
        assert!(z.im.abs() < 1e-12, "imaginary residue {}", z.im);
        assert!((z.re + top).abs() < 1e-10);
    }
}

proptest! {
    #[test]
    fn decomposition_is_canonical(x in -5.0..5.0f64, y in -5.0..5.0f64, z in -5.0..5.0f64, u in -5.0..5.0f64) {
        let m = ConfigurationMatrix::new(x, y, z, u);
        prop_assume!(m.det() > 1e-6);
        let c = two_polar_decompose(&m).unwrap();
        prop_assert!(c.d1 >= c.d2 && c.d2 > 0.0);
        prop_assert!((c.d1 * c.d2 - m.det()).abs() < 1e-10 * (1.0 + m.det()));
        let back = two_polar_compose(&c).to_array();
        for i in 0..4 {
            prop_assert!((back[i] - m.to_array()[i]).abs() < 1e-12 * m.max_norm());
        }
    }

    #[test]
    fn metric_is_positive_definite(phi in -3.0..3.0f64, psi in -3.0..3.0f64, d2 in 0.2..2.0f64, gap in 0.05..2.0f64) {
        let tp = TwoPolarCoords::new(phi, psi, d2 + gap, d2);
        for chart in Chart::ALL {
            let g = metric_at(&from_two_polar(&tp, chart).unwrap()).unwrap().g;
            prop_assert!(g.symmetric_eigenvalues().iter().all(|&e| e > 0.0));
        }
    }
}
