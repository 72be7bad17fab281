use std::path::{Path, PathBuf};

use affine_body::charts::Chart;
use affine_body::dynamics::Scheme;
use affine_body::models::ModelKind;
use affine_body::quantum::{Convention, WaveVariable};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub seed: u64,
    /// Chart the equations of motion are integrated in.
    pub chart: Chart,
    pub model: ModelSection,
    pub initial: InitialSection,
    pub integrator: IntegratorSection,
    pub grid: GridSection,
    pub quantum: QuantumSection,
    pub actions: ActionsSection,
    pub wavefunction: WavefunctionSection,
    pub chart_check: ChartCheckSection,
    pub output: OutputSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 20240917,
            chart: Chart::Cartesian,
            model: ModelSection::default(),
            initial: InitialSection::default(),
            integrator: IntegratorSection::default(),
            grid: GridSection::default(),
            quantum: QuantumSection::default(),
            actions: ActionsSection::default(),
            wavefunction: WavefunctionSection::default(),
            chart_check: ChartCheckSection::default(),
            output: OutputSection::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelSection {
    pub kind: ModelKind,
    pub mu: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub hbar: f64,
}

impl Default for ModelSection {
    fn default() -> Self {
        Self { kind: ModelKind::Harmonic, mu: 1.0, c: 1.0, hbar: 1.0 }
    }
}

/// Initial phase-space point, given in `chart` and converted to the run chart.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InitialSection {
    pub chart: Chart,
    pub coords: [f64; 4],
    pub momenta: [f64; 4],
}

impl Default for InitialSection {
    fn default() -> Self {
        Self { chart: Chart::Cartesian, coords: [1.0, 0.3, -0.2, 0.7], momenta: [0.1, 0.5, -0.4, 0.2] }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IntegratorSection {
    pub scheme: Scheme,
    /// Defaults to a thousandth of the harmonic period.
    pub dt: Option<f64>,
    pub steps: usize,
    /// Write every `stride`-th state.
    pub stride: usize,
}

impl Default for IntegratorSection {
    fn default() -> Self {
        Self { scheme: Scheme::StormerVerlet, dt: None, steps: 10_000, stride: 1 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub n: usize,
}

impl Default for GridSection {
    fn default() -> Self {
        Self { n: affine_body::sturm::DEFAULT_GRID }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuantumSection {
    pub convention: Convention,
    /// Rows cover `n_a + n_b ≤ n_max`.
    pub n_max: u32,
    /// In the half-integer convention `m, l` step by ½ up to these bounds.
    pub m_max: u32,
    pub l_max: u32,
}

impl Default for QuantumSection {
    fn default() -> Self {
        Self { convention: Convention::Integer, n_max: 2, m_max: 2, l_max: 2 }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ActionsSection {
    /// Each entry is `[e1, e2, j_phi, j_psi]`: the slice energies `(E_α, E_β)`,
    /// or `(E, h_ϑ)` for the polar family. Defaults depend on the family.
    pub states: Option<Vec<[f64; 4]>>,
}

impl ActionsSection {
    pub fn states_for(&self, polar: bool) -> Vec<[f64; 4]> {
        match (&self.states, polar) {
            (Some(s), _) => s.clone(),
            (None, false) => vec![[3.0, 2.0, 0.5, 0.3], [4.0, 4.0, -0.7, 1.1]],
            (None, true) => vec![[5.0, 3.0, 0.5, 0.3], [8.0, 9.0, -0.7, 1.1]],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WavefunctionSection {
    pub variable: WaveVariable,
    pub n_a: u32,
    pub n_b: u32,
    /// Integers, or halves such as `"1/2"` in the half-integer convention.
    pub m: String,
    pub l: String,
    pub samples: usize,
    pub normalized: bool,
}

impl Default for WavefunctionSection {
    fn default() -> Self {
        Self { variable: WaveVariable::Alpha, n_a: 0, n_b: 0, m: "0".into(), l: "0".into(), samples: 200, normalized: true }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChartCheckSection {
    pub samples: usize,
    /// Multiplies every pass threshold; values below 1 tighten the checks.
    pub tolerance_scale: f64,
}

impl Default for ChartCheckSection {
    fn default() -> Self {
        Self { samples: 1000, tolerance_scale: 1.0 }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub path: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    /// Reads `path` (if any), applies `key=value` overrides and validates.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self, String> {
        let mut table = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
                text.parse::<toml::Table>().map_err(|e| format!("{}: {e}", p.display()))?
            }
            None => toml::Table::new(),
        };
        for o in overrides {
            apply_override(&mut table, o)?;
        }
        let cfg: RunConfig = toml::Value::Table(table).try_into().map_err(|e: toml::de::Error| e.message().to_string())?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), String> {
        let m = &self.model;
        for (name, v) in [("model.mu", m.mu), ("model.hbar", m.hbar)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(format!("{name} must be positive, got {v}"));
            }
        }
        if !m.c.is_finite() || m.c < 0.0 {
            return Err(format!("model.C must be nonnegative, got {}", m.c));
        }
        if let Some(dt) = self.integrator.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(format!("integrator.dt must be positive, got {dt}"));
            }
        }
        let positive = [
            ("integrator.steps", self.integrator.steps),
            ("integrator.stride", self.integrator.stride),
            ("wavefunction.samples", self.wavefunction.samples),
            ("chart_check.samples", self.chart_check.samples),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| *v == 0) {
            return Err(format!("{name} must be at least 1"));
        }
        let ts = self.chart_check.tolerance_scale;
        if !(ts > 0.0 && ts.is_finite()) {
            return Err(format!("chart_check.tolerance_scale must be positive, got {ts}"));
        }
        if self.grid.n < 200 {
            return Err(format!("grid.n must be at least 200, got {}", self.grid.n));
        }
        if self.actions.states.as_ref().is_some_and(Vec::is_empty) {
            return Err("actions.states must not be empty".into());
        }
        Ok(())
    }
}

/// `a.b.c=value`; the value is read as a TOML literal, or as a bare string.
fn apply_override(table: &mut toml::Table, spec: &str) -> Result<(), String> {
    let (key, raw) = spec.split_once('=').ok_or_else(|| format!("override '{spec}' is not key=value"))?;
    let value = match format!("v = {raw}").parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").expect("single key"),
        Err(_) => toml::Value::String(raw.to_string()),
    };
    let parts: Vec<&str> = key.trim().split('.').collect();
    let (last, path) = parts.split_last().expect("split yields one part");
    let mut cur = table;
    for p in path {
        let entry = cur.entry(p.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = entry.as_table_mut().ok_or_else(|| format!("override '{key}': '{p}' is not a section"))?;
    }
    cur.insert(last.to_string(), value);
    Ok(())
}
