//! Propagation loss and polarization-tuned coupling.

use std::f64::consts::FRAC_PI_2;

use crate::coeffs::{dimer_coeffs, DimerCoeffs, SqueezeParam};
use crate::error::{Error, Result};
use crate::gaussian::{ArrayCoupling, GaussianState, VACUUM_VARIANCE};

/// Largest coupler step between successive loss applications.
pub const DEFAULT_MAX_KZ_STEP: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossSpec {
    alpha_db_per_cm: f64,
    injection_loss: f64,
}

impl LossSpec {
    pub fn new(alpha_db_per_cm: f64, injection_loss: f64) -> Result<Self> {
        if !(alpha_db_per_cm.is_finite() && alpha_db_per_cm >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "alpha_db_per_cm",
                reason: format!("must be finite and non-negative, got {alpha_db_per_cm}"),
            });
        }
        if !(0.0..1.0).contains(&injection_loss) {
            return Err(Error::InvalidParameter {
                name: "injection_loss",
                reason: format!("must lie in [0, 1), got {injection_loss}"),
            });
        }
        Ok(Self { alpha_db_per_cm, injection_loss })
    }

    pub fn lossless() -> Self {
        Self { alpha_db_per_cm: 0.0, injection_loss: 0.0 }
    }

    pub fn alpha_db_per_cm(&self) -> f64 {
        self.alpha_db_per_cm
    }

    pub fn injection_loss(&self) -> f64 {
        self.injection_loss
    }

    /// Beer-Lambert transmission over `z` cm, without the injection loss.
    fn attenuation(&self, z: f64) -> f64 {
        10f64.powf(-self.alpha_db_per_cm * z / 10.0)
    }
}

/// `η(z) = (1 − injection_loss)·10^{−α z / 10}`.
pub fn eta_of_z(spec: LossSpec, z: f64) -> Result<f64> {
    if !(z >= 0.0) {
        return Err(Error::NegativeDistance(z));
    }
    Ok((1.0 - spec.injection_loss) * spec.attenuation(z))
}

fn check_eta(eta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::InvalidTransmissivity(eta));
    }
    Ok(())
}

/// Squeezing parameter surviving a channel of transmissivity `eta`:
/// `−½ ln(η e^{−2s} + 1 − η)`.
pub fn lossy_squeezing(s_in: f64, eta: f64) -> Result<f64> {
    check_eta(eta)?;
    if !(s_in >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "s_in",
            reason: format!("must be non-negative, got {s_in}"),
        });
    }
    Ok(-0.5 * (eta * (-2.0 * s_in).exp() + (1.0 - eta)).ln())
}

/// Uniform attenuation of every mode: `cov → η·cov + (1 − η)/4·I`.
pub fn apply_loss(state: &GaussianState, eta: f64) -> Result<GaussianState> {
    check_eta(eta)?;
    let d = state.cov().nrows();
    let cov = state.cov() * eta + nalgebra::DMatrix::identity(d, d) * ((1.0 - eta) * VACUUM_VARIANCE);
    Ok(state.with_cov(cov).with_mean(state.mean() * eta.sqrt()))
}

/// Lossy propagation through an array with coupling constant `kappa` (1/cm).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossyPropagation {
    pub coupling: ArrayCoupling,
    pub kappa: f64,
    pub loss: LossSpec,
    pub max_kz_step: f64,
}

impl LossyPropagation {
    pub fn new(coupling: ArrayCoupling, kappa: f64, loss: LossSpec) -> Result<Self> {
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::InvalidParameter {
                name: "kappa",
                reason: format!("must be positive, got {kappa}"),
            });
        }
        Ok(Self { coupling, kappa, loss, max_kz_step: DEFAULT_MAX_KZ_STEP })
    }

    pub fn with_max_kz_step(mut self, step: f64) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidParameter {
                name: "max_kz_step",
                reason: format!("must be positive, got {step}"),
            });
        }
        self.max_kz_step = step;
        Ok(self)
    }

    /// Injection loss at the input, then alternating coupler and loss steps
    /// up to distance `z` cm.
    pub fn propagate(&self, input: &GaussianState, z: f64) -> Result<GaussianState> {
        if !(z >= 0.0) {
            return Err(Error::NegativeDistance(z));
        }
        let kz = self.kappa * z;
        let steps = (kz / self.max_kz_step).ceil().max(1.0) as usize;
        let dz = z / steps as f64;
        let step = self.coupling.symplectic(kz / steps as f64)?;
        let eta_step = self.loss.attenuation(dz);
        let mut state = apply_loss(input, 1.0 - self.loss.injection_loss)?;
        for _ in 0..steps {
            state = apply_loss(&state.evolve(&step)?, eta_step)?;
        }
        Ok(state)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationCoupling {
    pub kappa_h: f64,
    pub kappa_v: f64,
    pub angle: f64,
}

impl PolarizationCoupling {
    pub fn new(kappa_h: f64, kappa_v: f64, angle: f64) -> Result<Self> {
        for (name, v) in [("kappa_h", kappa_h), ("kappa_v", kappa_v)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter { name, reason: format!("must be positive, got {v}") });
            }
        }
        Ok(Self { kappa_h, kappa_v, angle })
    }

    pub fn at(&self, angle: f64) -> Self {
        Self { angle, ..*self }
    }
}

/// `κ(θ_p) = κ_H cos²θ_p + κ_V sin²θ_p`.
pub fn kappa_of_polarization(pc: PolarizationCoupling) -> f64 {
    let (s, c) = pc.angle.sin_cos();
    pc.kappa_h * c * c + pc.kappa_v * s * s
}

/// Length with `κ_H·z_out = π/2`.
pub fn half_transfer_length(kappa_h: f64) -> f64 {
    FRAC_PI_2 / kappa_h
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationPoint {
    pub angle: f64,
    pub kappa: f64,
    pub kz: f64,
    pub coeffs: DimerCoeffs,
}

/// Dimer coefficients at `kz = κ(θ_p)·z_out` for each polarization angle.
pub fn polarization_sweep(
    xi: SqueezeParam,
    pc: PolarizationCoupling,
    z_out: f64,
    angles: &[f64],
) -> Result<Vec<PolarizationPoint>> {
    if !(z_out >= 0.0) {
        return Err(Error::NegativeDistance(z_out));
    }
    Ok(angles
        .iter()
        .map(|&angle| {
            let kappa = kappa_of_polarization(pc.at(angle));
            let kz = kappa * z_out;
            PolarizationPoint { angle, kappa, kz, coeffs: dimer_coeffs(xi, xi, kz) }
        })
        .collect())
}

/// Angles in `[0, π/2]` where equal inputs leave only two-mode squeezing,
/// i.e. `κ(θ_p)·z_out = π/4 + nπ/2`.
pub fn sole_two_mode_angles(pc: PolarizationCoupling, z_out: f64) -> Result<Vec<f64>> {
    if !(z_out > 0.0) {
        return Err(Error::InvalidParameter {
            name: "z_out",
            reason: format!("must be positive, got {z_out}"),
        });
    }
    let (k0, k1) = (pc.kappa_h * z_out, pc.kappa_v * z_out);
    let (lo, hi) = (k0.min(k1), k0.max(k1));
    let quarter = std::f64::consts::FRAC_PI_4;
    let mut n = ((lo - quarter) / FRAC_PI_2).ceil() as i64;
    let mut angles = Vec::new();
    loop {
        let target = quarter + n as f64 * FRAC_PI_2;
        if target > hi {
            break;
        }
        if target >= lo {
            angles.push(if k1 == k0 {
                0.0
            } else {
                // κ_H + (κ_V − κ_H) sin²θ = target / z_out
                ((target - k0) / (k1 - k0)).clamp(0.0, 1.0).sqrt().asin()
            });
        }
        n += 1;
    }
    angles.sort_by(f64::total_cmp);
    Ok(angles)
}
