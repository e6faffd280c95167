//! Sweep configuration as read from JSON.

use serde::{Deserialize, Serialize};

use gausson_core::channels::LossSpec;
use gausson_core::gaussian::{ArrayCoupling, Component};
use gausson_core::wigner::{GridSpec, QuadratureAxis};
use gausson_core::SqueezeParam;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("could not parse config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid `{field}`: {reason}")]
    Invalid { field: String, reason: String },
    #[error("observable `{observable}` is not available for {context}")]
    Mismatch { observable: &'static str, context: String },
}

fn invalid(field: impl Into<String>, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { field: field.into(), reason: reason.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum System {
    Dimer,
    Trimer,
    TrimerGeneral,
}

impl System {
    pub fn n_modes(&self) -> usize {
        match self {
            Self::Dimer => 2,
            _ => 3,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Dimer => "dimer",
            Self::Trimer => "trimer",
            Self::TrimerGeneral => "trimer-general",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSpec {
    pub r: f64,
    #[serde(default)]
    pub mu: f64,
}

impl InputSpec {
    pub fn real(r: f64) -> Self {
        Self { r, mu: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    /// Dimensionless coupler length.
    Kz,
    /// Input polarization angle (rad) of a dimer of length `z_out`.
    PolarizationAngle,
    /// Propagation distance (cm) with distributed loss.
    ZWithLoss,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl SweepSpec {
    pub fn values(&self) -> Vec<f64> {
        let step = (self.stop - self.start) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| if i + 1 == self.steps { self.stop } else { self.start + step * i as f64 })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LossConfig {
    pub alpha_db_per_cm: f64,
    #[serde(default)]
    pub injection_loss: f64,
}

/// Independent couplings of a general trimer: `θ = scale·kz` with phase `δ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrimerCouplingConfig {
    pub alpha_scale: f64,
    pub alpha_phase: f64,
    pub beta_scale: f64,
    pub beta_phase: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolarizationConfig {
    pub kappa_h: f64,
    pub kappa_v: f64,
    /// Defaults to `π/(2κ_H)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_out: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    Coeffs,
    Variances,
    SqueezingDb,
    NptEigenvalues,
    Scenario,
    WignerMarginal,
    OracleCheck,
}

impl Observable {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Coeffs => "coeffs",
            Self::Variances => "variances",
            Self::SqueezingDb => "squeezing_db",
            Self::NptEigenvalues => "npt_eigenvalues",
            Self::Scenario => "scenario",
            Self::WignerMarginal => "wigner_marginal",
            Self::OracleCheck => "oracle_check",
        }
    }
}

/// `phi0` sets single-mode quadratures, `phi` the multimode ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureAngles {
    #[serde(default)]
    pub phi0: f64,
    #[serde(default = "quarter_pi")]
    pub phi: f64,
}

fn quarter_pi() -> f64 {
    std::f64::consts::FRAC_PI_4
}

impl Default for QuadratureAngles {
    fn default() -> Self {
        Self { phi0: 0.0, phi: quarter_pi() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ComponentName {
    X1,
    X2,
}

impl From<ComponentName> for Component {
    fn from(c: ComponentName) -> Self {
        match c {
            ComponentName::X1 => Component::X1,
            ComponentName::X2 => Component::X2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisConfig {
    pub mode: usize,
    pub component: ComponentName,
    #[serde(default)]
    pub angle: f64,
}

impl AxisConfig {
    pub fn new(mode: usize, component: ComponentName, angle: f64) -> Self {
        Self { mode, component, angle }
    }

    pub fn axis(&self) -> QuadratureAxis {
        QuadratureAxis::rotated(self.mode, self.component.into(), self.angle)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WignerConfig {
    /// Sweep values at which grids are produced; every sweep point when empty.
    #[serde(default)]
    pub at: Vec<f64>,
    /// Axis pairs; when empty, each mode's own `(X₁, X₂)` plus `X₁X₁` and
    /// `X₂X₂` for every mode pair.
    #[serde(default)]
    pub pairs: Vec<[AxisConfig; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<[f64; 2]>,
    #[serde(default = "default_sigmas")]
    pub range_sigmas: f64,
    #[serde(default = "default_resolution")]
    pub resolution: usize,
}

fn default_sigmas() -> f64 {
    gausson_core::wigner::DEFAULT_RANGE_SIGMAS
}

fn default_resolution() -> usize {
    gausson_core::wigner::DEFAULT_RESOLUTION
}

impl Default for WignerConfig {
    fn default() -> Self {
        Self {
            at: Vec::new(),
            pairs: Vec::new(),
            range: None,
            range_sigmas: default_sigmas(),
            resolution: default_resolution(),
        }
    }
}

impl WignerConfig {
    pub fn grid(&self) -> GridSpec {
        GridSpec {
            range: self.range.map(|[lo, hi]| (lo, hi)),
            range_sigmas: self.range_sigmas,
            resolution: self.resolution,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    /// Photons per mode; 20 for the dimer and 10 for the trimer when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation_budget: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub system: System,
    pub inputs: Vec<InputSpec>,
    pub sweep: SweepSpec,
    pub outputs: Vec<Observable>,
    #[serde(default)]
    pub quadrature_angles: QuadratureAngles,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loss: Option<LossConfig>,
    /// Coupling constant in 1/cm, used to turn distance into `kz`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling: Option<TrimerCouplingConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polarization: Option<PolarizationConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wigner: Option<WignerConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleConfig>,
    /// Largest `kz` step between loss applications.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_kz_step: Option<f64>,
}

fn merge(base: &mut serde_json::Value, patch: serde_json::Value) {
    match (base, patch) {
        (serde_json::Value::Object(b), serde_json::Value::Object(p)) => {
            for (k, v) in p {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

fn finite(field: &str, v: f64) -> Result<(), ConfigError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(invalid(field, format!("must be finite, got {v}")))
    }
}

fn positive(field: &str, v: f64) -> Result<(), ConfigError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(invalid(field, format!("must be positive, got {v}")))
    }
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let config: Self = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    /// Applies a partial JSON document over this config. Nested objects merge
    /// key by key; every other value replaces what was there.
    pub fn overlay(&self, text: &str) -> Result<Self, ConfigError> {
        let patch: serde_json::Value = serde_json::from_str(text)?;
        let mut base = serde_json::to_value(self).expect("config serializes");
        merge(&mut base, patch);
        let config: Self = serde_json::from_value(base)?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn wants(&self, o: Observable) -> bool {
        self.outputs.contains(&o)
    }

    pub fn squeeze_params(&self) -> Result<Vec<SqueezeParam>, ConfigError> {
        self.inputs
            .iter()
            .enumerate()
            .map(|(i, s)| {
                SqueezeParam::new(s.r, s.mu).map_err(|e| invalid(format!("inputs[{i}]"), e.to_string()))
            })
            .collect()
    }

    pub fn array(&self) -> ArrayCoupling {
        match (self.system, self.coupling) {
            (System::Dimer, _) => ArrayCoupling::Dimer,
            (System::Trimer, _) => ArrayCoupling::Trimer,
            (System::TrimerGeneral, Some(c)) => ArrayCoupling::GeneralTrimer {
                alpha_scale: c.alpha_scale,
                alpha_phase: c.alpha_phase,
                beta_scale: c.beta_scale,
                beta_phase: c.beta_phase,
            },
            (System::TrimerGeneral, None) => ArrayCoupling::Trimer,
        }
    }

    pub fn loss_spec(&self) -> Result<LossSpec, ConfigError> {
        match self.loss {
            None => Ok(LossSpec::lossless()),
            Some(l) => LossSpec::new(l.alpha_db_per_cm, l.injection_loss).map_err(|e| match e {
                gausson_core::Error::InvalidParameter { name, reason } => invalid(format!("loss.{name}"), reason),
                other => invalid("loss", other.to_string()),
            }),
        }
    }

    fn mismatch(&self, o: Observable, context: impl Into<String>) -> ConfigError {
        ConfigError::Mismatch { observable: o.as_str(), context: context.into() }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let n = self.system.n_modes();
        if self.inputs.len() != n {
            return Err(invalid(
                "inputs",
                format!("{} needs {n} entries, got {}", self.system.as_str(), self.inputs.len()),
            ));
        }
        self.squeeze_params()?;
        if self.sweep.steps < 2 {
            return Err(invalid("sweep.steps", format!("must be at least 2, got {}", self.sweep.steps)));
        }
        finite("sweep.start", self.sweep.start)?;
        finite("sweep.stop", self.sweep.stop)?;
        finite("quadrature_angles.phi0", self.quadrature_angles.phi0)?;
        finite("quadrature_angles.phi", self.quadrature_angles.phi)?;
        if self.outputs.is_empty() {
            return Err(invalid("outputs", "at least one observable is required"));
        }
        for (i, o) in self.outputs.iter().enumerate() {
            if self.outputs[..i].contains(o) {
                return Err(invalid("outputs", format!("`{}` listed twice", o.as_str())));
            }
        }
        match (self.system, self.coupling) {
            (System::TrimerGeneral, None) => {
                return Err(invalid("coupling", "required for trimer-general"));
            }
            (System::TrimerGeneral, Some(c)) => {
                for (f, v) in [
                    ("coupling.alpha_scale", c.alpha_scale),
                    ("coupling.alpha_phase", c.alpha_phase),
                    ("coupling.beta_scale", c.beta_scale),
                    ("coupling.beta_phase", c.beta_phase),
                ] {
                    finite(f, v)?;
                }
            }
            (_, Some(_)) => return Err(invalid("coupling", "only used by trimer-general")),
            _ => {}
        }
        if let Some(k) = self.kappa {
            positive("kappa", k)?;
        }
        if let Some(s) = self.max_kz_step {
            positive("max_kz_step", s)?;
        }
        self.loss_spec()?;

        match self.sweep.variable {
            SweepVariable::Kz => {
                if self.loss.is_some() {
                    return Err(invalid("loss", "only used with the z_with_loss sweep"));
                }
            }
            SweepVariable::PolarizationAngle => {
                if self.system != System::Dimer {
                    return Err(invalid("sweep.variable", "polarization_angle needs the dimer"));
                }
                let p = self
                    .polarization
                    .ok_or_else(|| invalid("polarization", "required for polarization_angle sweeps"))?;
                positive("polarization.kappa_h", p.kappa_h)?;
                positive("polarization.kappa_v", p.kappa_v)?;
                if let Some(z) = p.z_out {
                    positive("polarization.z_out", z)?;
                }
                if self.loss.is_some() {
                    return Err(invalid("loss", "only used with the z_with_loss sweep"));
                }
            }
            SweepVariable::ZWithLoss => {
                if self.kappa.is_none() {
                    return Err(invalid("kappa", "required for z_with_loss sweeps"));
                }
                if self.sweep.start < 0.0 || self.sweep.stop < 0.0 {
                    return Err(invalid("sweep.start", "distances must be non-negative"));
                }
                for o in [Observable::Coeffs, Observable::OracleCheck] {
                    if self.wants(o) {
                        return Err(self.mismatch(o, "lossy propagation (the state is mixed)"));
                    }
                }
            }
        }
        if self.polarization.is_some() && self.sweep.variable != SweepVariable::PolarizationAngle {
            return Err(invalid("polarization", "only used with the polarization_angle sweep"));
        }
        if self.wants(Observable::Scenario) && self.system == System::Dimer {
            return Err(self.mismatch(Observable::Scenario, "the dimer (scenarios need three modes)"));
        }
        if self.wants(Observable::OracleCheck) && self.system == System::TrimerGeneral {
            return Err(self.mismatch(Observable::OracleCheck, "trimer-general (unequal couplings)"));
        }
        if let Some(o) = self.oracle {
            if let Some(c) = o.cutoff {
                if c < 1 {
                    return Err(invalid("oracle.cutoff", "must be at least 1"));
                }
            }
            if let Some(b) = o.truncation_budget {
                if !(0.0..1.0).contains(&b) {
                    return Err(invalid("oracle.truncation_budget", format!("must lie in [0, 1), got {b}")));
                }
            }
        }
        if let Some(w) = &self.wigner {
            if !self.wants(Observable::WignerMarginal) {
                return Err(invalid("wigner", "set but wigner_marginal is not requested"));
            }
            if w.resolution < 2 {
                return Err(invalid("wigner.resolution", format!("must be at least 2, got {}", w.resolution)));
            }
            positive("wigner.range_sigmas", w.range_sigmas)?;
            if let Some([lo, hi]) = w.range {
                if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                    return Err(invalid("wigner.range", format!("need finite min < max, got [{lo}, {hi}]")));
                }
            }
            for (i, pair) in w.pairs.iter().enumerate() {
                for a in pair {
                    if a.mode >= n {
                        return Err(invalid(format!("wigner.pairs[{i}]"), format!("mode {} out of range", a.mode)));
                    }
                    finite(&format!("wigner.pairs[{i}].angle"), a.angle)?;
                }
            }
            for (i, v) in w.at.iter().enumerate() {
                finite(&format!("wigner.at[{i}]"), *v)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal() -> &'static str {
        r#"{
            "system": "dimer",
            "inputs": [{"r": 0.5}, {"r": 0.5}],
            "sweep": {"variable": "kz", "start": 0.0, "stop": 1.0, "steps": 5},
            "outputs": ["coeffs"]
        }"#
    }

    #[test]
    fn parses_minimal_document() {
        let c = SweepConfig::from_json(minimal()).unwrap();
        assert_eq!(c.system, System::Dimer);
        assert_eq!(c.quadrature_angles, QuadratureAngles::default());
        assert_eq!(c.sweep.values(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn round_trips() {
        let c = SweepConfig::from_json(minimal()).unwrap();
        assert_eq!(SweepConfig::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn unknown_field_is_named() {
        let text = minimal().replace("\"outputs\"", "\"outptus\"");
        let msg = SweepConfig::from_json(&text).unwrap_err().to_string();
        assert!(msg.contains("outptus"), "{msg}");
    }

    #[test]
    fn validation_names_the_field() {
        let cases = [
            (minimal().replace("\"steps\": 5", "\"steps\": 1"), "sweep.steps"),
            (minimal().replace("[{\"r\": 0.5}, {\"r\": 0.5}]", "[{\"r\": 0.5}]"), "inputs"),
            (minimal().replace("{\"r\": 0.5}, {\"r\": 0.5}", "{\"r\": -0.5}, {\"r\": 0.5}"), "inputs[0]"),
            (minimal().replace("[\"coeffs\"]", "[]"), "outputs"),
        ];
        for (text, field) in cases {
            match SweepConfig::from_json(&text).unwrap_err() {
                ConfigError::Invalid { field: f, .. } => assert_eq!(f, field),
                other => panic!("{other}"),
            }
        }
    }

    #[test]
    fn observable_mismatches() {
        let text = minimal().replace("[\"coeffs\"]", "[\"scenario\"]");
        assert!(matches!(SweepConfig::from_json(&text), Err(ConfigError::Mismatch { .. })));
        let text = minimal()
            .replace("\"kz\"", "\"z_with_loss\"")
            .replace("\"outputs\"", "\"kappa\": 2.0, \"outputs\"");
        assert!(matches!(SweepConfig::from_json(&text), Err(ConfigError::Mismatch { observable: "coeffs", .. })));
    }
}
