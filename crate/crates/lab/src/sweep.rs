//! Evaluation of a sweep into an ordered dataset.

use rayon::prelude::*;

use gausson_core::channels::{
    eta_of_z, half_transfer_length, kappa_of_polarization, LossyPropagation, PolarizationCoupling,
};
use gausson_core::coeffs::{
    classify_multimodality, default_tolerance, dimer_coeffs, trimer_coeffs, trimer_coeffs_general,
    Multimodality,
};
use gausson_core::entangle::{classify_scenario, npt_min_eigenvalue, DEFAULT_TOLERANCE};
use gausson_core::fock::{FockHamiltonian, FockState};
use gausson_core::gaussian::{squeezing_db, Component};
use gausson_core::wigner::{marginal_density, QuadratureAxis, WignerGrid};
use gausson_core::{GaussianState, QuadratureSpec, SqueezeParam};
use num_complex::Complex64;

use crate::config::{ConfigError, Observable, SweepConfig, SweepVariable, System};

pub const THREADS_ENV: &str = "GAUSSON_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("numerical failure at {variable} = {value}: {source}")]
    Numerical {
        variable: &'static str,
        value: f64,
        #[source]
        source: gausson_core::Error,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Text(String),
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Num(x) => write!(f, "{x}"),
            Self::Text(s) => f.write_str(s),
        }
    }
}

/// One sweep point as ordered `(column, value)` pairs.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Record {
    pub fields: Vec<(String, Value)>,
}

impl Record {
    fn num(&mut self, name: impl Into<String>, v: f64) {
        self.fields.push((name.into(), Value::Num(v)));
    }

    fn text(&mut self, name: impl Into<String>, v: impl Into<String>) {
        self.fields.push((name.into(), Value::Text(v.into())));
    }

    fn complex(&mut self, name: &str, z: Complex64) {
        self.num(format!("{name}_re"), z.re);
        self.num(format!("{name}_im"), z.im);
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.fields.iter().find(|(k, _)| k == name).map(|(_, v)| v)
    }

    pub fn number(&self, name: &str) -> Option<f64> {
        match self.get(name)? {
            Value::Num(x) => Some(*x),
            Value::Text(_) => None,
        }
    }

    pub fn columns(&self) -> impl Iterator<Item = &str> {
        self.fields.iter().map(|(k, _)| k.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WignerOutput {
    pub sweep_value: f64,
    pub kz: f64,
    pub label: String,
    pub grid: WignerGrid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub config: SweepConfig,
    pub records: Vec<Record>,
    pub wigner: Vec<WignerOutput>,
}

impl Dataset {
    pub fn columns(&self) -> Vec<String> {
        self.records.first().map(|r| r.columns().map(str::to_owned).collect()).unwrap_or_default()
    }

    pub fn column(&self, name: &str) -> Vec<f64> {
        self.records.iter().filter_map(|r| r.number(name)).collect()
    }
}

pub fn mode_letters(modes: &[usize]) -> String {
    modes.iter().map(|&m| (b'a' + m as u8) as char).collect()
}

/// Multimode groups reported for each array.
fn groups(system: System) -> Vec<Vec<usize>> {
    match system {
        System::Dimer => vec![vec![0, 1]],
        _ => vec![vec![0, 1], vec![1, 2], vec![0, 2], vec![0, 1, 2]],
    }
}

fn quadratures(config: &SweepConfig) -> Vec<(String, QuadratureSpec)> {
    let angles = config.quadrature_angles;
    let mut out = Vec::new();
    for m in 0..config.system.n_modes() {
        for (c, tag) in [(Component::X1, "X1"), (Component::X2, "X2")] {
            out.push((format!("{tag}_{}", mode_letters(&[m])), QuadratureSpec::single(m, angles.phi0, c)));
        }
    }
    for g in groups(config.system) {
        for (c, tag) in [(Component::X1, "X1"), (Component::X2, "X2")] {
            let spec = QuadratureSpec::multimode(&g, angles.phi, c).expect("distinct modes");
            out.push((format!("{tag}_{}", mode_letters(&g)), spec));
        }
    }
    out
}

/// Coupler position and propagated state at sweep value `x`.
struct Point {
    kz: f64,
    state: GaussianState,
    leading: Record,
}

fn locate(config: &SweepConfig, inputs: &[SqueezeParam], x: f64) -> gausson_core::Result<Point> {
    let initial = GaussianState::squeezed_vacuum(inputs)?;
    let array = config.array();
    let mut leading = Record::default();
    let (kz, state) = match config.sweep.variable {
        SweepVariable::Kz => {
            leading.num("kz", x);
            (x, initial.evolve(&array.symplectic(x)?)?)
        }
        SweepVariable::PolarizationAngle => {
            let p = config.polarization.expect("validated");
            let pc = PolarizationCoupling::new(p.kappa_h, p.kappa_v, x)?;
            let kappa = kappa_of_polarization(pc);
            let kz = kappa * p.z_out.unwrap_or_else(|| half_transfer_length(p.kappa_h));
            leading.num("theta_p", x);
            leading.num("kappa", kappa);
            leading.num("kz", kz);
            (kz, initial.evolve(&array.symplectic(kz)?)?)
        }
        SweepVariable::ZWithLoss => {
            let kappa = config.kappa.expect("validated");
            let loss = config.loss_spec().expect("validated");
            let mut prop = LossyPropagation::new(array, kappa, loss)?;
            if let Some(step) = config.max_kz_step {
                prop = prop.with_max_kz_step(step)?;
            }
            leading.num("z_cm", x);
            leading.num("kz", kappa * x);
            leading.num("eta", eta_of_z(loss, x)?);
            (kappa * x, prop.propagate(&initial, x)?)
        }
    };
    Ok(Point { kz, state, leading })
}

fn push_coeffs(rec: &mut Record, config: &SweepConfig, inputs: &[SqueezeParam], kz: f64) -> gausson_core::Result<()> {
    let tol = default_tolerance(inputs);
    let label: Multimodality = match config.system {
        System::Dimer => {
            let c = dimer_coeffs(inputs[0], inputs[1], kz);
            rec.complex("Z_a", c.z_a);
            rec.complex("Z_b", c.z_b);
            rec.complex("Z_ab", c.z_ab);
            classify_multimodality(&c, tol)
        }
        System::Trimer | System::TrimerGeneral => {
            let c = if config.system == System::Trimer {
                trimer_coeffs(inputs[0], inputs[1], inputs[2], kz)
            } else {
                trimer_coeffs_general(inputs[0], inputs[1], inputs[2], config.array().trimer_coupler(kz)?)
            };
            for (name, z) in ["T_a", "T_b", "T_c", "T_ab", "T_ac", "T_bc"].iter().zip(c.as_array()) {
                rec.complex(name, z);
            }
            classify_multimodality(&c, tol)
        }
    };
    rec.text("multimodality", label.as_str());
    Ok(())
}

struct Variances {
    fixed: Vec<(String, f64)>,
    minima: Vec<(String, f64, f64)>,
}

fn variances(config: &SweepConfig, state: &GaussianState) -> gausson_core::Result<Variances> {
    let mut fixed = Vec::new();
    for (name, spec) in quadratures(config) {
        fixed.push((name, state.quadrature_variance(&spec)?));
    }
    let mut minima = Vec::new();
    let singles = (0..config.system.n_modes()).map(|m| vec![m]);
    for modes in singles.chain(groups(config.system)) {
        let (angle, v) = state.min_quadrature_variance(&modes)?;
        minima.push((mode_letters(&modes), angle, v));
    }
    Ok(Variances { fixed, minima })
}

fn push_variances(rec: &mut Record, v: &Variances) {
    for (name, x) in &v.fixed {
        rec.num(format!("V_{name}"), *x);
    }
    for (name, angle, x) in &v.minima {
        rec.num(format!("Vmin_{name}"), *x);
        rec.num(format!("Vmin_{name}_angle"), *angle);
    }
}

fn push_db(rec: &mut Record, config: &SweepConfig, v: &Variances) -> gausson_core::Result<()> {
    for (name, x) in &v.fixed {
        rec.num(format!("S_{name}_db"), squeezing_db(*x)?);
    }
    let n = config.system.n_modes();
    let single = v.minima[..n].iter().map(|m| m.2).fold(f64::INFINITY, f64::min);
    rec.num("S1_db", squeezing_db(single)?);
    let lookup = |name: &str| v.fixed.iter().find(|(k, _)| k == name).map(|(_, x)| *x).expect("reported");
    let pair_min = |g: &[usize]| {
        let l = mode_letters(g);
        lookup(&format!("X1_{l}")).min(lookup(&format!("X2_{l}")))
    };
    let pairs: Vec<Vec<usize>> = groups(config.system).into_iter().filter(|g| g.len() == 2).collect();
    let two = pairs.iter().map(|g| pair_min(g)).fold(f64::INFINITY, f64::min);
    rec.num("S2M_db", squeezing_db(two)?);
    if n == 3 {
        rec.num("S3M_db", squeezing_db(pair_min(&[0, 1, 2]))?);
    }
    Ok(())
}

fn oracle_defaults(config: &SweepConfig) -> (usize, f64) {
    let o = config.oracle.unwrap_or(crate::config::OracleConfig { cutoff: None, truncation_budget: None });
    match config.system {
        System::Dimer => (o.cutoff.unwrap_or(20), o.truncation_budget.unwrap_or(1e-6)),
        _ => (o.cutoff.unwrap_or(10), o.truncation_budget.unwrap_or(1e-4)),
    }
}

fn push_oracle(
    rec: &mut Record,
    config: &SweepConfig,
    inputs: &[SqueezeParam],
    kz: f64,
    v: &Variances,
) -> gausson_core::Result<()> {
    let (cutoff, budget) = oracle_defaults(config);
    let hamiltonian = match config.system {
        System::Dimer => FockHamiltonian::Dimer,
        _ => FockHamiltonian::Trimer,
    };
    let fock = FockState::squeezed_vacuum(inputs, cutoff, budget)?.evolve(hamiltonian, kz)?;
    let mut worst: f64 = 0.0;
    for ((_, spec), (_, gauss)) in quadratures(config).iter().zip(&v.fixed) {
        worst = worst.max((fock.variance(spec)? - gauss).abs());
    }
    let tol = (10.0 * fock.norm_loss()).max(1e-3);
    rec.num("oracle_max_abs_diff", worst);
    rec.num("oracle_norm_loss", fock.norm_loss());
    rec.text("oracle_ok", if worst <= tol { "true" } else { "false" });
    Ok(())
}

fn evaluate(config: &SweepConfig, inputs: &[SqueezeParam], x: f64) -> gausson_core::Result<Record> {
    let Point { kz, state, mut leading } = locate(config, inputs, x)?;
    let needs_variances = config.outputs.iter().any(|o| {
        matches!(o, Observable::Variances | Observable::SqueezingDb | Observable::OracleCheck)
    });
    let v = if needs_variances { Some(variances(config, &state)?) } else { None };
    for o in &config.outputs {
        match o {
            Observable::Coeffs => push_coeffs(&mut leading, config, inputs, kz)?,
            Observable::Variances => push_variances(&mut leading, v.as_ref().expect("computed")),
            Observable::SqueezingDb => push_db(&mut leading, config, v.as_ref().expect("computed"))?,
            Observable::NptEigenvalues => {
                for m in 0..config.system.n_modes() {
                    leading.num(format!("npt_{}", mode_letters(&[m])), npt_min_eigenvalue(&state, m)?);
                }
            }
            Observable::Scenario => {
                let s = classify_scenario(&state, DEFAULT_TOLERANCE)?;
                leading.text("scenario", s.label.as_str());
                let sites: String =
                    (0..3).filter(|&m| s.violating[m]).map(|m| mode_letters(&[m])).collect();
                leading.text("violating_sites", if sites.is_empty() { "-".to_owned() } else { sites });
            }
            Observable::OracleCheck => {
                push_oracle(&mut leading, config, inputs, kz, v.as_ref().expect("computed"))?
            }
            Observable::WignerMarginal => {}
        }
    }
    Ok(leading)
}

fn default_pairs(n_modes: usize, angles: crate::config::QuadratureAngles) -> Vec<[QuadratureAxis; 2]> {
    let mut pairs = Vec::new();
    for m in 0..n_modes {
        pairs.push([
            QuadratureAxis::rotated(m, Component::X1, angles.phi0),
            QuadratureAxis::rotated(m, Component::X2, angles.phi0),
        ]);
    }
    for j in 0..n_modes {
        for k in j + 1..n_modes {
            for c in [Component::X1, Component::X2] {
                pairs.push([QuadratureAxis::rotated(j, c, angles.phi), QuadratureAxis::rotated(k, c, angles.phi)]);
            }
        }
    }
    pairs
}

fn wigner_at(config: &SweepConfig, inputs: &[SqueezeParam], x: f64) -> gausson_core::Result<Vec<WignerOutput>> {
    let w = config.wigner.clone().unwrap_or_default();
    let Point { kz, state, .. } = locate(config, inputs, x)?;
    let pairs: Vec<[QuadratureAxis; 2]> = if w.pairs.is_empty() {
        default_pairs(config.system.n_modes(), config.quadrature_angles)
    } else {
        w.pairs.iter().map(|[a, b]| [a.axis(), b.axis()]).collect()
    };
    pairs
        .into_iter()
        .map(|axes| {
            let grid = marginal_density(&state, axes, &w.grid())?;
            let label = format!("{}__{}", axes[0].label(), axes[1].label());
            Ok(WignerOutput { sweep_value: x, kz, label, grid })
        })
        .collect()
}

fn variable_name(v: SweepVariable) -> &'static str {
    match v {
        SweepVariable::Kz => "kz",
        SweepVariable::PolarizationAngle => "theta_p",
        SweepVariable::ZWithLoss => "z_cm",
    }
}

/// Thread cap from `GAUSSON_THREADS`; `None` lets rayon decide.
pub fn threads_from_env() -> Result<Option<usize>, ConfigError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(ConfigError::Invalid {
                field: THREADS_ENV.into(),
                reason: format!("expected a positive integer, got `{s}`"),
            }),
        },
    }
}

pub fn run_sweep(config: &SweepConfig) -> Result<Dataset, RunError> {
    run_sweep_with_threads(config, threads_from_env()?)
}

/// Evaluates every sweep point in parallel and gathers them in sweep order.
pub fn run_sweep_with_threads(config: &SweepConfig, threads: Option<usize>) -> Result<Dataset, RunError> {
    config.validate()?;
    let inputs = config.squeeze_params()?;
    let values = config.sweep.values();
    let variable = variable_name(config.sweep.variable);
    let numerical = |value: f64| move |source| RunError::Numerical { variable, value, source };

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().expect("thread pool");

    pool.install(|| {
        let records = values
            .par_iter()
            .map(|&x| evaluate(config, &inputs, x).map_err(numerical(x)))
            .collect::<Result<Vec<_>, _>>()?;
        let wigner = if config.wants(Observable::WignerMarginal) {
            let at = config.wigner.as_ref().map(|w| w.at.clone()).unwrap_or_default();
            let at = if at.is_empty() { values.clone() } else { at };
            at.par_iter()
                .map(|&x| wigner_at(config, &inputs, x).map_err(numerical(x)))
                .collect::<Result<Vec<_>, _>>()?
                .into_iter()
                .flatten()
                .collect()
        } else {
            Vec::new()
        };
        Ok(Dataset { config: config.clone(), records, wigner })
    })
}
