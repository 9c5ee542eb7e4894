//! Run configuration: a TOML file, overridden by flags.

use crate::evolution::{Compact, EvolutionError, EvolutionProblem, InitialData, DEFAULT_THETA};
use crate::greens::{Green, GreensError, GreensFunctionSpec};
use crate::quadrature::QuadratureConfig;
use crate::specfun::SpecfunError;
use crate::C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("unsupported configuration: {0}")]
    Capability(String),
}

impl ConfigError {
    pub fn exit_code(&self) -> i32 {
        match self {
            ConfigError::Capability(_) => 3,
            _ => 2,
        }
    }
}

pub(crate) fn is_capability(e: &EvolutionError) -> bool {
    matches!(
        e,
        EvolutionError::Capability(_)
            | EvolutionError::Green(GreensError::Unsupported(_))
            | EvolutionError::Green(GreensError::Specfun(SpecfunError::UnsupportedOrder(_)))
    )
}

impl From<EvolutionError> for ConfigError {
    fn from(e: EvolutionError) -> Self {
        if is_capability(&e) {
            ConfigError::Capability(e.to_string())
        } else {
            ConfigError::Invalid(e.to_string())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Variant {
    Free,
    CentrifugalAttractive,
    CentrifugalRepulsive,
    PointInteraction,
}

/// `alpha` and `beta` are a and b of J = e^{iφ}[[a, −b̄], [b, ā]].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PotentialConfig {
    pub variant: Variant,
    pub lambda: f64,
    pub phi: f64,
    pub alpha_re: f64,
    pub alpha_im: f64,
    pub beta_re: f64,
    pub beta_im: f64,
}

impl Default for PotentialConfig {
    fn default() -> Self {
        PotentialConfig { variant: Variant::Free, lambda: 1.0, phi: 0.0, alpha_re: -1.0, alpha_im: 0.0, beta_re: 0.0, beta_im: 0.0 }
    }
}

impl PotentialConfig {
    pub fn spec(&self) -> GreensFunctionSpec {
        match self.variant {
            Variant::Free => GreensFunctionSpec::Free,
            Variant::CentrifugalAttractive => GreensFunctionSpec::CentrifugalAttractive { lambda: self.lambda },
            Variant::CentrifugalRepulsive => GreensFunctionSpec::CentrifugalRepulsive { lambda: self.lambda },
            Variant::PointInteraction => GreensFunctionSpec::PointInteraction {
                phi: self.phi,
                a_j: C64::new(self.alpha_re, self.alpha_im),
                b_j: C64::new(self.beta_re, self.beta_im),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum InitialKind {
    PlaneWave,
    Superosc,
    CustomPolyExp,
}

/// plane_wave: e^{ikx}. superosc: F_n with band [−k0, k0] shifting towards e^{ikx}.
/// custom_poly_exp: (Σ c_j x^j)e^{ikx}.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InitialConfig {
    pub kind: InitialKind,
    pub k: f64,
    pub n: usize,
    pub k0: f64,
    pub coeffs_re: Vec<f64>,
    pub coeffs_im: Vec<f64>,
}

impl Default for InitialConfig {
    fn default() -> Self {
        InitialConfig { kind: InitialKind::PlaneWave, k: 1.0, n: 16, k0: 1.0, coeffs_re: vec![1.0], coeffs_im: vec![0.0] }
    }
}

impl InitialConfig {
    pub fn data(&self) -> Result<InitialData, ConfigError> {
        finite("initial.k", self.k)?;
        match self.kind {
            InitialKind::PlaneWave => Ok(InitialData::plane_wave(self.k)),
            InitialKind::Superosc => {
                finite("initial.k0", self.k0)?;
                InitialData::superosc(self.k0, self.k, self.n).map_err(|e| ConfigError::Invalid(e.to_string()))
            }
            InitialKind::CustomPolyExp => {
                if self.coeffs_re.is_empty() || self.coeffs_re.len() != self.coeffs_im.len() {
                    return Err(ConfigError::Invalid("initial.coeffs_re and coeffs_im must be nonempty and of equal length".into()));
                }
                let coeffs: Vec<C64> = self.coeffs_re.iter().zip(&self.coeffs_im).map(|(&r, &i)| C64::new(r, i)).collect();
                if coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(ConfigError::Invalid("initial.coeffs must be finite".into()));
                }
                Ok(InitialData::PolyExp { coeffs, k: self.k })
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ContourConfig {
    pub theta: f64,
}

impl Default for ContourConfig {
    fn default() -> Self {
        ContourConfig { theta: DEFAULT_THETA }
    }
}

/// An explicit list, or `{ start, stop, count }` for evenly spaced points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Axis {
    List(Vec<f64>),
    Linspace { start: f64, stop: f64, count: usize },
}

impl Axis {
    pub fn points(&self) -> Vec<f64> {
        match self {
            Axis::List(v) => v.clone(),
            Axis::Linspace { count: 0, .. } => Vec::new(),
            Axis::Linspace { start, count: 1, .. } => vec![*start],
            Axis::Linspace { start, stop, count } => {
                (0..*count).map(|i| if i + 1 == *count { *stop } else { start + (stop - start) * i as f64 / (count - 1) as f64 }).collect()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub t: Axis,
    pub x: Axis,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { t: Axis::List(vec![0.2, 0.5, 1.0]), x: Axis::List(vec![-1.0, -0.5, 0.5, 1.0]) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SupershiftConfig {
    pub k0: f64,
    pub kappa: f64,
    pub n_seq: Vec<usize>,
    pub t: f64,
    pub lo: f64,
    pub hi: f64,
    pub samples: usize,
}

impl Default for SupershiftConfig {
    fn default() -> Self {
        SupershiftConfig { k0: 1.0, kappa: 3.0, n_seq: vec![4, 8, 16, 32], t: 0.2, lo: 0.5, hi: 2.0, samples: 31 }
    }
}

/// Points z = z_re[i] + i·z_im[i] at which G(t, x, z) is tabulated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GreenTableConfig {
    pub z_re: Vec<f64>,
    pub z_im: Vec<f64>,
}

impl Default for GreenTableConfig {
    fn default() -> Self {
        GreenTableConfig { z_re: vec![-1.0, 0.5, 1.0, 1.5], z_im: vec![0.0, 0.0, 0.0, 0.25] }
    }
}

impl GreenTableConfig {
    pub fn points(&self) -> Vec<C64> {
        self.z_re.iter().zip(&self.z_im).map(|(&r, &i)| C64::new(r, i)).collect()
    }
}

/// No path means stdout.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub potential: PotentialConfig,
    pub initial: InitialConfig,
    pub contour: ContourConfig,
    pub quadrature: QuadratureConfig,
    pub grid: GridConfig,
    pub supershift: SupershiftConfig,
    pub green_table: GreenTableConfig,
    pub output: OutputConfig,
}

fn finite(name: &str, v: f64) -> Result<(), ConfigError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(ConfigError::Invalid(format!("{name} = {v} is not finite")))
    }
}

fn increasing(name: &str, v: &[f64]) -> Result<(), ConfigError> {
    if v.is_empty() {
        return Err(ConfigError::Invalid(format!("{name} is empty")));
    }
    if v.iter().any(|x| !x.is_finite()) || v.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(ConfigError::Invalid(format!("{name} must be finite and strictly increasing")));
    }
    Ok(())
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &str) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.into(), source })?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn spec(&self) -> GreensFunctionSpec {
        self.potential.spec()
    }

    /// Validated problem; fails before any evaluation of Ψ.
    pub fn problem(&self) -> Result<EvolutionProblem, ConfigError> {
        for (name, v) in [
            ("potential.lambda", self.potential.lambda),
            ("potential.phi", self.potential.phi),
            ("potential.alpha_re", self.potential.alpha_re),
            ("potential.alpha_im", self.potential.alpha_im),
            ("potential.beta_re", self.potential.beta_re),
            ("potential.beta_im", self.potential.beta_im),
        ] {
            finite(name, v)?;
        }
        Ok(EvolutionProblem::new(self.spec(), self.initial.data()?, self.contour.theta, self.quadrature)?)
    }

    pub fn evolve_grid(&self) -> Result<(Vec<f64>, Vec<f64>), ConfigError> {
        let (t, x) = (self.grid.t.points(), self.grid.x.points());
        increasing("grid.t", &t)?;
        increasing("grid.x", &x)?;
        if t.iter().any(|&v| v <= 0.0) {
            return Err(ConfigError::Invalid("grid.t must be positive".into()));
        }
        if x.contains(&0.0) {
            return Err(ConfigError::Invalid("grid.x must exclude 0".into()));
        }
        Ok((t, x))
    }

    pub fn compact(&self) -> Result<Compact, ConfigError> {
        let s = &self.supershift;
        finite("supershift.t", s.t)?;
        if s.t <= 0.0 {
            return Err(ConfigError::Invalid("supershift.t must be positive".into()));
        }
        if !(s.kappa.abs() > s.k0 && s.k0 > 0.0 && s.kappa.is_finite()) {
            return Err(ConfigError::Invalid(format!("need 0 < k0 < |kappa|, got k0 = {}, kappa = {}", s.k0, s.kappa)));
        }
        if s.n_seq.contains(&0) {
            return Err(ConfigError::Invalid("supershift.n_seq entries must be positive".into()));
        }
        Ok(Compact::new(s.lo, s.hi, s.samples)?)
    }

    pub fn green(&self) -> Result<Green, ConfigError> {
        Green::new(self.spec()).map_err(|e| ConfigError::from(EvolutionError::from(e)))
    }

    pub fn green_points(&self) -> Result<Vec<C64>, ConfigError> {
        let g = &self.green_table;
        if g.z_re.is_empty() || g.z_re.len() != g.z_im.len() {
            return Err(ConfigError::Invalid("green_table.z_re and z_im must be nonempty and of equal length".into()));
        }
        let z = g.points();
        if z.iter().any(|z| !z.is_finite()) {
            return Err(ConfigError::Invalid("green_table points must be finite".into()));
        }
        if self.spec() != GreensFunctionSpec::Free && z.iter().any(|z| z.re == 0.0) {
            return Err(ConfigError::Invalid("green_table points need Re z ≠ 0".into()));
        }
        Ok(z)
    }
}
