use std::collections::HashMap;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_affine-body")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Csv {
    fn parse(text: &str) -> Self {
        let mut lines = text.lines();
        let header = lines.next().expect("header row").split(',').map(String::from).collect();
        let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
        Self { header, rows }
    }

    fn col(&self, name: &str) -> usize {
        self.header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name} in {:?}", self.header))
    }

    fn num(&self, row: usize, name: &str) -> f64 {
        self.rows[row][self.col(name)].parse().unwrap()
    }

    fn column(&self, name: &str) -> Vec<f64> {
        (0..self.rows.len()).map(|r| self.num(r, name)).collect()
    }
}

fn summary(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn decompose_examples() {
    let o = run(&["decompose", "1", "0", "0", "1"]);
    assert_eq!(code(&o), 0);
    let t = Csv::parse(&stdout(&o));
    assert_eq!([t.num(0, "phi"), t.num(0, "psi"), t.num(0, "d1"), t.num(0, "d2")], [0.0, 0.0, 1.0, 1.0]);

    let t = Csv::parse(&stdout(&run(&["decompose", "2", "0", "0", "1"])));
    assert_eq!((t.num(0, "d1"), t.num(0, "d2")), (2.0, 1.0));

    let o = run(&["decompose", "1", "0", "0", "0"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("singular matrix"));
}

#[test]
fn decompose_accepts_negative_entries_and_json() {
    let o = run(&["decompose", "-1", "0", "0", "-1", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["columns"][0], "phi");
    assert!((v["rows"][0][0].as_f64().unwrap().abs() - std::f64::consts::PI).abs() < 1e-15);
}

#[test]
fn numbers_use_seventeen_significant_digits() {
    let t = Csv::parse(&stdout(&run(&["decompose", "3", "0", "0", "1"])));
    let cell = &t.rows[0][t.col("d1")];
    let mantissa = cell.split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17, "{cell}");
}

#[test]
fn simulate_harmonic_default_keeps_energy() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("traj.csv");
    let o = run(&["simulate", "--output", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let t = Csv::parse(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(&t.header[..10], ["t", "q1", "q2", "q3", "q4", "p1", "p2", "p3", "p4", "H"]);
    assert_eq!(t.rows.len(), 10_001);

    let s = summary(&dir.path().join("traj.summary.json"));
    assert!(s["max_secular_drift"].as_f64().unwrap() < 1e-6);
    let drifts = s["drift"]["invariants"].as_array().unwrap();
    let h = drifts.iter().find(|d| d["name"] == "H").unwrap();
    assert!(h["secular_drift"].as_f64().unwrap() < 1e-6);
    assert!(s["drift"]["termination"].is_null());
}

#[test]
fn simulate_free_elliptic_has_near_constant_k_and_l() {
    let o = run(&[
        "simulate",
        "--model",
        "free",
        "--chart",
        "elliptic",
        "--scheme",
        "rk4",
        "--steps",
        "2000",
        "--set",
        "initial.momenta=[0.1,0.2,-0.1,0.05]",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let t = Csv::parse(&stdout(&o));
    for name in ["K", "L"] {
        let c = t.column(name);
        let spread = c.iter().map(|v| (v - c[0]).abs()).fold(0.0, f64::max);
        assert!(spread < 1e-8 * c[0].abs().max(1e-3), "{name}: {spread}");
    }
}

#[test]
fn simulate_collapse_guard_equilibrium_is_stationary() {
    let o = run(&[
        "simulate",
        "--model",
        "collapse-guard",
        "--steps",
        "200",
        "--set",
        "initial.coords=[1,0,0,1]",
        "--set",
        "initial.momenta=[0,0,0,0]",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let t = Csv::parse(&stdout(&o));
    for name in t.header.iter().filter(|h| *h != "t") {
        let c = t.column(name);
        assert!(c.iter().all(|v| (v - c[0]).abs() < 1e-14), "{name} moved");
    }
}

#[test]
fn simulate_truncation_keeps_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let o = run(&[
        "simulate",
        "--model",
        "free",
        "--chart",
        "polar-r-theta",
        "--scheme",
        "rk4",
        "--dt",
        "0.01",
        "--steps",
        "300",
        "--set",
        "initial.coords=[1.2,0,0,1]",
        "--set",
        "initial.momenta=[-1.2,0,0,-1]",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    assert!(stderr(&o).contains("truncated"));
    let t = Csv::parse(&std::fs::read_to_string(&out).unwrap());
    assert!(t.rows.len() > 10 && t.rows.len() < 301);
    let s = summary(&dir.path().join("t.summary.json"));
    assert!(s["drift"]["termination"]["reason"].as_str().unwrap().contains("r > 0"));
}

#[test]
fn verlet_outside_cartesian_is_unsupported() {
    let o = run(&["simulate", "--chart", "alpha-beta", "--steps", "10"]);
    assert_eq!(code(&o), 4);
}

#[test]
fn harmonic_analytic_degeneracy_classes() {
    let o = run(&["spectrum", "analytic", "--model", "harmonic"]);
    assert_eq!(code(&o), 0);
    let t = Csv::parse(&stdout(&o));
    let mut classes: HashMap<i64, f64> = HashMap::new();
    for r in 0..t.rows.len() {
        let g = |c: &str| t.rows[r][t.col(c)].parse::<i64>().unwrap();
        let key = 2 * (g("n_a") + g("n_b")) + 2 + g("m").abs().max(g("l").abs());
        let e = t.num(r, "E");
        assert_eq!(*classes.entry(key).or_insert(e), e, "class {key}");
        assert_eq!(e, key as f64);
    }
    assert!(classes.len() >= 6);
}

#[test]
fn bohr_sommerfeld_is_shifted_by_two_hbar_omega() {
    for model in ["harmonic", "anharmonic-alpha-beta"] {
        let bs = Csv::parse(&stdout(&run(&["spectrum", "bs", "--model", model, "--set", "model.mu=2", "--set", "model.C=3"])));
        let an = Csv::parse(&stdout(&run(&["spectrum", "analytic", "--model", model, "--set", "model.mu=2", "--set", "model.C=3"])));
        assert_eq!(bs.rows.len(), an.rows.len());
        let hw = (3.0f64 / 2.0).sqrt();
        for r in 0..bs.rows.len() {
            assert_eq!(bs.rows[r][..4], an.rows[r][..4]);
            let d = an.num(r, "E") - bs.num(r, "E");
            assert!((d - 2.0 * hw).abs() < 1e-13, "{model} row {r}: {d}");
        }
    }
}

#[test]
fn compare_harmonic_agrees_with_oracle() {
    let o = run(&["spectrum", "compare", "--model", "harmonic", "--set", "quantum.m_max=1", "--set", "quantum.l_max=1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let t = Csv::parse(&stdout(&o));
    assert!(!t.rows.is_empty());
    let worst = t.column("rel_error").into_iter().fold(0.0, f64::max);
    assert!(worst < 1e-6, "{worst}");
}

#[test]
fn oracle_source_lists_levels_only() {
    let o = run(&[
        "spectrum",
        "oracle",
        "--model",
        "anharmonic-r-theta",
        "--set",
        "quantum.n_max=1",
        "--set",
        "quantum.m_max=0",
        "--set",
        "quantum.l_max=0",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let t = Csv::parse(&stdout(&o));
    assert_eq!(t.rows.len(), 3);
    assert!(t.rows.iter().all(|r| r[t.col("provenance")] == "oracle"));
}

#[test]
fn half_integer_spectrum_steps_by_half() {
    let o = run(&[
        "spectrum",
        "analytic",
        "--set",
        "quantum.convention=\"half-integer\"",
        "--set",
        "quantum.m_max=1",
        "--set",
        "quantum.l_max=0",
        "--set",
        "quantum.n_max=0",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let t = Csv::parse(&stdout(&o));
    assert_eq!(t.column("m"), [-1.0, -0.5, 0.0, 0.5, 1.0]);
}

#[test]
fn unsupported_model_source_pairs_exit_4() {
    for source in ["bs", "analytic", "oracle", "compare"] {
        let o = run(&["spectrum", source, "--model", "free"]);
        assert_eq!(code(&o), 4, "{source}: {}", stderr(&o));
    }
    assert_eq!(code(&run(&["spectrum", "oracle", "--model", "collapse-guard"])), 4);
}

#[test]
fn actions_table_reassembles_energy() {
    for (model, family, labels) in [
        ("anharmonic-alpha-beta", "alpha-beta", "nu_alpha - nu_beta; nu_alpha - 2 nu_gamma"),
        ("anharmonic-r-theta", "polar", "nu_rho - 2 nu_theta; nu_theta - 2 nu_phi - 2 nu_psi"),
    ] {
        let o = run(&["actions", "--model", model]);
        assert_eq!(code(&o), 0, "{model}: {}", stderr(&o));
        let t = Csv::parse(&stdout(&o));
        for r in 0..t.rows.len() {
            assert_eq!(t.rows[r][t.col("family")], family);
            assert_eq!(t.rows[r][t.col("resonances")], labels);
            for j in ["j1", "j2"] {
                let (q, c) = (t.num(r, &format!("{j}_quadrature")), t.num(r, &format!("{j}_closed")));
                assert!((q - c).abs() < 1e-9 * c, "{model} {j}");
            }
            let e = if family == "polar" { t.num(r, "e1") } else { t.num(r, "e1") + t.num(r, "e2") };
            assert!((t.num(r, "energy") - e).abs() < 1e-9 * e);
        }
    }
}

#[test]
fn actions_below_the_well_is_a_domain_error() {
    let o = run(&["actions", "--model", "anharmonic-r-theta", "--set", "actions.states=[[3.0,2.0,0.5,0.3]]"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn harmonic_ground_alpha_factor_is_gaussian() {
    let o = run(&["wavefunction", "--set", "wavefunction.samples=50"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let t = Csv::parse(&stdout(&o));
    let ratios: Vec<f64> = (0..t.rows.len()).map(|r| t.num(r, "value") / (-0.5 * t.num(r, "x").powi(2)).exp()).collect();
    assert!(ratios.iter().all(|q| (q - ratios[0]).abs() < 1e-12 * ratios[0].abs()));
    // normalised under the measure α dα: the Gaussian factor is √2
    assert!((ratios[0].abs() - 2f64.sqrt()).abs() < 1e-8, "{}", ratios[0]);
}

#[test]
fn wavefunction_half_integer_theta() {
    let o = run(&[
        "wavefunction",
        "--model",
        "anharmonic-r-theta",
        "--variable",
        "theta",
        "--set",
        "quantum.convention=\"half-integer\"",
        "--set",
        "wavefunction.m=\"1/2\"",
        "--set",
        "wavefunction.l=\"-3/2\"",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let t = Csv::parse(&stdout(&o));
    let x = t.column("x");
    assert!(x[0] > 0.0 && *x.last().unwrap() < std::f64::consts::PI);
    // half-integer m in the integer convention is rejected
    let o = run(&["wavefunction", "--set", "wavefunction.m=\"1/2\""]);
    assert_eq!(code(&o), 2);
}

#[test]
fn chart_check_passes_and_reports_each_check() {
    let o = run(&["chart-check"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let t = Csv::parse(&stdout(&o));
    assert_eq!(t.rows.len(), 6);
    let row = |name: &str| t.rows.iter().position(|r| r[0] == name).unwrap();
    assert!(t.num(row("cartan vs closed-form group metric"), "max_deviation") < 1e-10);
    assert!(t.num(row("complexified metric imaginary residue"), "max_deviation") < 1e-12);
    assert!(t.rows.iter().all(|r| r[3] == "pass"));
}

#[test]
fn chart_check_breach_exits_5_naming_the_check() {
    let o = run(&["chart-check", "--samples", "20", "--set", "chart_check.tolerance_scale=1e-4"]);
    assert_eq!(code(&o), 5);
    assert!(stderr(&o).contains("metric pushforward"));
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        &["chart-check", "--samples", "50", "--seed", "9", "--format", "json"][..],
        &["spectrum", "compare", "--set", "quantum.m_max=1", "--set", "quantum.l_max=0"][..],
        &["simulate", "--steps", "300"][..],
    ] {
        let (a, b) = (run(args), run(args));
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn config_errors_exit_1() {
    assert_eq!(code(&run(&["spectrum", "bs", "--set", "quantum.bogus=1"])), 1);
    assert_eq!(code(&run(&["simulate", "--set", "model.mu=0"])), 1);
    assert_eq!(code(&run(&["simulate", "--set", "chart=\"nowhere\""])), 1);
    assert_eq!(code(&run(&["spectrum", "--config", "/nonexistent/run.toml", "bs"])), 1);
    assert_eq!(code(&run(&["frobnicate"])), 1);

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[integrator]\nstep = 3\n").unwrap();
    let o = run(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("step"));
}

#[test]
fn shipped_example_config_loads() {
    let cfg = concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/example.toml");
    let o = run(&["spectrum", "bs", "--config", cfg]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = run(&["simulate", "--config", cfg, "--steps", "100"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}

#[test]
fn config_file_values_apply_and_flags_override_them() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "[model]\nkind = \"anharmonic-alpha-beta\"\n[quantum]\nn_max = 0\nm_max = 0\nl_max = 0\n").unwrap();
    let t = Csv::parse(&stdout(&run(&["spectrum", "analytic", "--config", cfg.to_str().unwrap()])));
    assert_eq!(t.rows.len(), 1);
    // anharmonic ground level: ħω(1 + χ) + ħω(1 + γ) with χ = ½√(16Cμ/ħ²) = 2, γ = 0
    assert!((t.num(0, "E") - 4.0).abs() < 1e-14, "{}", t.num(0, "E"));
    let t = Csv::parse(&stdout(&run(&["spectrum", "analytic", "--config", cfg.to_str().unwrap(), "--model", "harmonic"])));
    assert_eq!(t.num(0, "E"), 2.0);
}
