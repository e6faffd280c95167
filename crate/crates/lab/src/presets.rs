//! Built-in sweep configurations.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2, TAU};

use crate::config::{
    AxisConfig, ComponentName, InputSpec, LossConfig, Observable, PolarizationConfig, QuadratureAngles,
    SweepConfig, SweepSpec, SweepVariable, System, WignerConfig,
};

pub const NAMES: &[&str] = &["fig2", "fig3", "fig4", "fig5", "fig5-dimer", "fig6", "fig7", "fig7-trimer"];

/// `kz` where equal-ratio trimer inputs leave only three-mode squeezing.
pub fn sole_three_mode_kz() -> f64 {
    SQRT_2.atan() / SQRT_2
}

fn dimer_inputs() -> Vec<InputSpec> {
    vec![InputSpec::real(0.5), InputSpec::real(0.5)]
}

fn trimer_inputs() -> Vec<InputSpec> {
    vec![InputSpec::real(0.25), InputSpec::real(0.5), InputSpec::real(0.25)]
}

fn kz_sweep(stop: f64, steps: usize) -> SweepSpec {
    SweepSpec { variable: SweepVariable::Kz, start: 0.0, stop, steps }
}

fn base(system: System, inputs: Vec<InputSpec>, sweep: SweepSpec, outputs: Vec<Observable>) -> SweepConfig {
    SweepConfig {
        system,
        inputs,
        sweep,
        outputs,
        quadrature_angles: QuadratureAngles::default(),
        loss: None,
        kappa: None,
        coupling: None,
        polarization: None,
        wigner: None,
        oracle: None,
        max_kz_step: None,
    }
}

fn pair(a: usize, b: usize, c: ComponentName, angle: f64) -> [AxisConfig; 2] {
    [AxisConfig::new(a, c, angle), AxisConfig::new(b, c, angle)]
}

pub fn preset(name: &str) -> Option<SweepConfig> {
    use Observable::*;
    let config = match name {
        "fig2" => base(
            System::Dimer,
            dimer_inputs(),
            kz_sweep(TAU, 401),
            vec![Coeffs, Variances, SqueezingDb],
        ),
        "fig3" => {
            let mut c = base(System::Dimer, dimer_inputs(), kz_sweep(FRAC_PI_4, 2), vec![WignerMarginal]);
            let mut pairs = vec![
                [AxisConfig::new(0, ComponentName::X1, 0.0), AxisConfig::new(0, ComponentName::X2, 0.0)],
                [AxisConfig::new(1, ComponentName::X1, 0.0), AxisConfig::new(1, ComponentName::X2, 0.0)],
            ];
            pairs.push(pair(0, 1, ComponentName::X1, FRAC_PI_4));
            pairs.push(pair(0, 1, ComponentName::X2, FRAC_PI_4));
            c.wigner = Some(WignerConfig { pairs, range_sigmas: 5.0, ..WignerConfig::default() });
            c
        }
        "fig4" => {
            let kz1 = sole_three_mode_kz();
            let mut c = base(System::Trimer, trimer_inputs(), kz_sweep(SQRT_2 * PI, 201), vec![Coeffs, WignerMarginal]);
            let pairs = vec![
                pair(0, 1, ComponentName::X1, FRAC_PI_4),
                pair(0, 1, ComponentName::X2, FRAC_PI_4),
                pair(1, 2, ComponentName::X1, FRAC_PI_4),
                pair(1, 2, ComponentName::X2, FRAC_PI_4),
                pair(0, 2, ComponentName::X1, 0.0),
                pair(0, 2, ComponentName::X2, 0.0),
            ];
            c.wigner = Some(WignerConfig { at: vec![kz1], pairs, range_sigmas: 5.0, ..WignerConfig::default() });
            c
        }
        "fig5" => base(
            System::Trimer,
            trimer_inputs(),
            kz_sweep(SQRT_2 * PI, 501),
            vec![NptEigenvalues, Scenario],
        ),
        "fig5-dimer" => base(System::Dimer, dimer_inputs(), kz_sweep(PI, 501), vec![NptEigenvalues]),
        "fig6" => {
            let mut c = base(
                System::Dimer,
                dimer_inputs(),
                SweepSpec { variable: SweepVariable::PolarizationAngle, start: 0.0, stop: FRAC_PI_2, steps: 91 },
                vec![Coeffs],
            );
            c.polarization = Some(PolarizationConfig { kappa_h: 1.0, kappa_v: 2.0, z_out: None });
            c
        }
        "fig7" | "fig7-trimer" => {
            let (system, inputs) = if name == "fig7" {
                (System::Dimer, dimer_inputs())
            } else {
                (System::Trimer, trimer_inputs())
            };
            let mut c = base(
                system,
                inputs,
                SweepSpec { variable: SweepVariable::ZWithLoss, start: 0.0, stop: PI, steps: 801 },
                vec![Variances, SqueezingDb],
            );
            c.kappa = Some(2.0);
            c.loss = Some(LossConfig { alpha_db_per_cm: 0.3, injection_loss: 0.0 });
            c
        }
        _ => return None,
    };
    Some(config)
}
