//! Closed-form squeezing coefficients for the optical dimer and trimer.
//!
//! After propagation the array state keeps the form
//! `exp{½(Σ_j C_j* a_j² + Σ_{j<k} C_jk a_j† a_k† − H.c.)}|0⟩`, so the single-mode
//! coefficients `C_j` and pairwise coefficients `C_jk` fully describe it.
//! [`DimerCoeffs::squeezing_matrix`] and [`TrimerCoeffs::squeezing_matrix`] turn
//! them into the symmetric exponent matrix consumed by
//! [`GaussianState::from_squeezing_exponent`](crate::GaussianState::from_squeezing_exponent).

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI, SQRT_2, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Complex single-mode squeezing parameter `ξ = r·e^{iμ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParam {
    r: f64,
    mu: f64,
}

impl SqueezeParam {
    /// Builds `r·e^{iμ}`; `μ` is wrapped into `[0, 2π)`.
    pub fn new(r: f64, mu: f64) -> Result<Self> {
        if !(r >= 0.0 && r.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "r",
                reason: format!("squeezing magnitude must be finite and >= 0, got {r}"),
            });
        }
        if !mu.is_finite() {
            return Err(Error::InvalidParameter {
                name: "mu",
                reason: format!("phase must be finite, got {mu}"),
            });
        }
        let mut mu = mu.rem_euclid(TAU);
        if mu >= TAU {
            mu = 0.0;
        }
        Ok(Self { r, mu })
    }

    /// Real squeezing parameter (`μ = 0`).
    pub fn real(r: f64) -> Result<Self> {
        Self::new(r, 0.0)
    }

    pub fn from_complex(xi: Complex64) -> Result<Self> {
        let (r, mu) = xi.to_polar();
        Self::new(r, mu)
    }

    pub fn zero() -> Self {
        Self { r: 0.0, mu: 0.0 }
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(self.r, self.mu)
    }
}

/// Complex dimer coupling `γ = θ·e^{iδ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplerSpec {
    theta: f64,
    delta: f64,
}

impl CouplerSpec {
    pub fn new(theta: f64, delta: f64) -> Result<Self> {
        if !(theta >= 0.0 && theta.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "theta",
                reason: format!("coupling amplitude must be finite and >= 0, got {theta}"),
            });
        }
        if !delta.is_finite() {
            return Err(Error::InvalidParameter {
                name: "delta",
                reason: format!("coupling phase must be finite, got {delta}"),
            });
        }
        Ok(Self { theta, delta })
    }

    /// Evanescent coupling, `δ = π/2` and `θ = κz`.
    pub fn evanescent(kz: f64) -> Result<Self> {
        Self::new(kz, FRAC_PI_2)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn gamma(&self) -> Complex64 {
        Complex64::from_polar(self.theta, self.delta)
    }
}

/// Trimer couplings `α` (between a and b) and `β` (between b and c).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrimerCouplerSpec {
    pub alpha: CouplerSpec,
    pub beta: CouplerSpec,
}

impl TrimerCouplerSpec {
    pub fn new(alpha: CouplerSpec, beta: CouplerSpec) -> Self {
        Self { alpha, beta }
    }

    /// Equal evanescent couplings `α = β = i·κz`.
    pub fn evanescent(kz: f64) -> Result<Self> {
        let c = CouplerSpec::evanescent(kz)?;
        Ok(Self { alpha: c, beta: c })
    }

    /// `λ = √(θ_α² + θ_β²)`.
    pub fn lambda(&self) -> f64 {
        self.alpha.theta.hypot(self.beta.theta)
    }
}

pub trait SqueezingCoefficients {
    /// Single-mode coefficients, one per waveguide.
    fn single_mode(&self) -> Vec<Complex64>;
    /// Pairwise coefficients (`Z_ab`, or `T_ab, T_ac, T_bc`).
    fn pairwise(&self) -> Vec<Complex64>;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimerCoeffs {
    pub z_a: Complex64,
    pub z_b: Complex64,
    pub z_ab: Complex64,
}

impl DimerCoeffs {
    /// Symmetric exponent matrix `M` with `M_jj = Z_j` and `M_ab = −Z_ab/2`.
    pub fn squeezing_matrix(&self) -> DMatrix<Complex64> {
        let off = -self.z_ab / 2.0;
        DMatrix::from_row_slice(2, 2, &[self.z_a, off, off, self.z_b])
    }
}

impl SqueezingCoefficients for DimerCoeffs {
    fn single_mode(&self) -> Vec<Complex64> {
        vec![self.z_a, self.z_b]
    }

    fn pairwise(&self) -> Vec<Complex64> {
        vec![self.z_ab]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrimerCoeffs {
    pub t_a: Complex64,
    pub t_b: Complex64,
    pub t_c: Complex64,
    pub t_ab: Complex64,
    pub t_ac: Complex64,
    pub t_bc: Complex64,
}

impl TrimerCoeffs {
    pub fn squeezing_matrix(&self) -> DMatrix<Complex64> {
        let (ab, ac, bc) = (-self.t_ab / 2.0, -self.t_ac / 2.0, -self.t_bc / 2.0);
        DMatrix::from_row_slice(
            3,
            3,
            &[self.t_a, ab, ac, ab, self.t_b, bc, ac, bc, self.t_c],
        )
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    pub fn as_array(&self) -> [Complex64; 6] {
        [self.t_a, self.t_b, self.t_c, self.t_ab, self.t_ac, self.t_bc]
    }
}

impl SqueezingCoefficients for TrimerCoeffs {
    fn single_mode(&self) -> Vec<Complex64> {
        vec![self.t_a, self.t_b, self.t_c]
    }

    fn pairwise(&self) -> Vec<Complex64> {
        vec![self.t_ab, self.t_ac, self.t_bc]
    }
}

/// Coefficients of a two-mode squeezed input `exp{χ a†b† − χ* ab}|0,0⟩`
/// after the dimer coupler. The output exponent is
/// `φ_a* a² + φ_b* b² + φ_ab a†b† − H.c.` (no factor ½).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeInjection {
    pub chi: Complex64,
    pub phi_a: Complex64,
    pub phi_b: Complex64,
    pub phi_ab: Complex64,
}

impl TwoModeInjection {
    pub fn squeezing_matrix(&self) -> DMatrix<Complex64> {
        let off = -self.phi_ab;
        DMatrix::from_row_slice(2, 2, &[2.0 * self.phi_a, off, off, 2.0 * self.phi_b])
    }
}

pub fn dimer_coeffs_general(
    xi_a: SqueezeParam,
    xi_b: SqueezeParam,
    coupler: CouplerSpec,
) -> DimerCoeffs {
    let (xa, xb) = (xi_a.value(), xi_b.value());
    let (s, c) = coupler.theta.sin_cos();
    let d = coupler.delta;
    let e = |k: f64| Complex64::from_polar(1.0, k * d);
    DimerCoeffs {
        z_a: xa * c * c + xb * e(2.0) * s * s,
        z_b: xa * e(-2.0) * s * s + xb * c * c,
        // The printed pairwise term drops the subscript on its second ξ; ξ_b is
        // the only reading that reproduces the evanescent case 2i(ξ_a + ξ_b)cs.
        z_ab: -2.0 * c * s * (xa * e(-1.0) - xb * e(1.0)),
    }
}

/// Evanescent dimer (`δ = π/2`) after a propagation `kz`.
pub fn dimer_coeffs(xi_a: SqueezeParam, xi_b: SqueezeParam, kz: f64) -> DimerCoeffs {
    let (xa, xb) = (xi_a.value(), xi_b.value());
    let (s, c) = kz.sin_cos();
    DimerCoeffs {
        z_a: xa * c * c - xb * s * s,
        z_b: -xa * s * s + xb * c * c,
        z_ab: 2.0 * I * (xa + xb) * c * s,
    }
}

/// Evanescent trimer with equal couplings after a propagation `kz`.
pub fn trimer_coeffs(
    xi_a: SqueezeParam,
    xi_b: SqueezeParam,
    xi_c: SqueezeParam,
    kz: f64,
) -> TrimerCoeffs {
    let (xa, xb, xc) = (xi_a.value(), xi_b.value(), xi_c.value());
    let c2 = (kz / SQRT_2).cos().powi(2);
    let s2 = (kz / SQRT_2).sin().powi(2);
    let sin1 = (SQRT_2 * kz).sin();
    let cos1 = (SQRT_2 * kz).cos();
    let sin2 = (2.0 * SQRT_2 * kz).sin();
    let half_sq = 0.5 * sin1 * sin1;
    TrimerCoeffs {
        t_a: xa * c2 * c2 - xb * half_sq + xc * s2 * s2,
        t_b: -xa * half_sq + xb * cos1 * cos1 - xc * half_sq,
        t_c: xa * s2 * s2 - xb * half_sq + xc * c2 * c2,
        t_ab: I * (xa * SQRT_2 * sin1 * c2 + xb * FRAC_1_SQRT_2 * sin2 - xc * SQRT_2 * sin1 * s2),
        t_ac: xa * half_sq + xb * sin1 * sin1 + xc * half_sq,
        t_bc: I * (-xa * SQRT_2 * sin1 * s2 + xb * FRAC_1_SQRT_2 * sin2 + xc * SQRT_2 * sin1 * c2),
    }
}

/// Trimer with arbitrary complex couplings `α`, `β`.
///
/// With `λ = 0` nothing propagates and the input parameters are returned.
pub fn trimer_coeffs_general(
    xi_a: SqueezeParam,
    xi_b: SqueezeParam,
    xi_c: SqueezeParam,
    coupler: TrimerCouplerSpec,
) -> TrimerCoeffs {
    let (xa, xb, xc) = (xi_a.value(), xi_b.value(), xi_c.value());
    let lambda = coupler.lambda();
    if lambda == 0.0 {
        return TrimerCoeffs {
            t_a: xa,
            t_b: xb,
            t_c: xc,
            t_ab: Complex64::default(),
            t_ac: Complex64::default(),
            t_bc: Complex64::default(),
        };
    }
    let (ta, da) = (coupler.alpha.theta, coupler.alpha.delta);
    let (tb, db) = (coupler.beta.theta, coupler.beta.delta);
    let e = |x: f64| Complex64::from_polar(1.0, x);
    let l2 = lambda * lambda;
    let half = (lambda / 2.0).sin().powi(2);
    let (sl, cl) = lambda.sin_cos();
    let s2l = (2.0 * lambda).sin();
    let pa = 1.0 - 2.0 * ta * ta / l2 * half;
    let pc = 1.0 - 2.0 * tb * tb / l2 * half;
    let corner = 4.0 * ta * ta * tb * tb / (l2 * l2) * half * half;

    TrimerCoeffs {
        t_a: xa * pa * pa + xb * ta * ta / l2 * e(2.0 * da) * sl * sl + xc * corner * e(2.0 * (da + db)),
        t_b: xa * ta * ta / l2 * e(-2.0 * da) * sl * sl
            + xb * cl * cl
            + xc * tb * tb / l2 * e(2.0 * db) * sl * sl,
        t_c: xa * corner * e(-2.0 * (da + db)) + xb * tb * tb / l2 * e(-2.0 * db) * sl * sl + xc * pc * pc,
        t_ab: -(xa * 2.0 * ta / lambda * e(-da) * pa * sl
            - xb * ta / lambda * e(da) * s2l
            - xc * 4.0 * ta * tb * tb / (l2 * lambda) * e(da + 2.0 * db) * sl * half),
        t_ac: -(xa * 4.0 * ta * tb / l2 * e(-(da + db)) * pa * half
            - xb * 2.0 * ta * tb / l2 * e(da - db) * sl * sl
            + xc * 4.0 * ta * tb / l2 * e(da + db) * pc * half),
        t_bc: -(xa * 4.0 * ta * ta * tb / (l2 * lambda) * e(-(2.0 * da + db)) * sl * half
            + xb * tb / lambda * e(-db) * s2l
            - xc * 2.0 * tb / lambda * e(db) * pc * sl),
    }
}

/// Equal-coupling (`|α| = |β| = θ`, `δ_α = δ_β = δ`) closed form.
///
/// The printed version of this reduction carries `ξ_c` on the leading term of
/// `T_c`; mirror symmetry of the array fixes it to `ξ_a`.
pub fn trimer_coeffs_equal(
    xi_a: SqueezeParam,
    xi_b: SqueezeParam,
    xi_c: SqueezeParam,
    coupler: CouplerSpec,
) -> TrimerCoeffs {
    let (xa, xb, xc) = (xi_a.value(), xi_b.value(), xi_c.value());
    let (theta, d) = (coupler.theta, coupler.delta);
    let e = |k: f64| Complex64::from_polar(1.0, k * d);
    let c2 = (theta / SQRT_2).cos().powi(2);
    let s2 = (theta / SQRT_2).sin().powi(2);
    let sin1 = (SQRT_2 * theta).sin();
    let cos1 = (SQRT_2 * theta).cos();
    let sin2 = (2.0 * SQRT_2 * theta).sin();
    let half_sq = 0.5 * sin1 * sin1;
    TrimerCoeffs {
        t_a: xa * c2 * c2 + xb * half_sq * e(2.0) + xc * e(4.0) * s2 * s2,
        t_b: xa * half_sq * e(-2.0) + xb * cos1 * cos1 + xc * half_sq * e(2.0),
        t_c: xa * e(-4.0) * s2 * s2 + xb * half_sq * e(-2.0) + xc * c2 * c2,
        t_ab: -(xa * SQRT_2 * e(-1.0) * sin1 * c2
            - xb * FRAC_1_SQRT_2 * e(1.0) * sin2
            - xc * SQRT_2 * e(3.0) * sin1 * s2),
        t_ac: -(xa * half_sq * e(-2.0) - xb * sin1 * sin1 + xc * half_sq * e(2.0)),
        t_bc: -(xa * SQRT_2 * e(-3.0) * sin1 * s2 + xb * FRAC_1_SQRT_2 * e(-1.0) * sin2
            - xc * SQRT_2 * e(1.0) * sin1 * c2),
    }
}

/// Two-mode squeezed vacuum `χ = r_ab·e^{iμ_ab}` injected into the dimer.
pub fn tmss_injection_coeffs(chi: Complex64, coupler: CouplerSpec) -> TwoModeInjection {
    let (s, c) = coupler.theta.sin_cos();
    let d = coupler.delta;
    TwoModeInjection {
        chi,
        phi_a: chi * Complex64::from_polar(1.0, d) * c * s,
        phi_b: -chi * Complex64::from_polar(1.0, -d) * c * s,
        phi_ab: chi * (c * c - s * s),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Multimodality {
    SeparableSingleMode,
    SoleTwoMode,
    SoleThreeMode,
    Mixed,
}

impl Multimodality {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::SeparableSingleMode => "separable-single-mode",
            Self::SoleTwoMode => "sole-two-mode",
            Self::SoleThreeMode => "sole-three-mode",
            Self::Mixed => "mixed",
        }
    }
}

impl std::fmt::Display for Multimodality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Default zero threshold: `1e-9 · max|ξ_j|`.
pub fn default_tolerance(inputs: &[SqueezeParam]) -> f64 {
    let scale = inputs.iter().map(|x| x.r).fold(0.0, f64::max);
    1e-9 * scale.max(f64::MIN_POSITIVE)
}

/// Labels a coefficient set by which groups vanish (`|c| < tol`).
///
/// No pairwise coupling gives separable single-mode squeezing (this includes the
/// vacuum). Vanishing single-mode terms with exactly one pairwise term is sole
/// two-mode squeezing; with all three trimer pairs it is sole three-mode
/// squeezing. Anything else is mixed.
pub fn classify_multimodality<C: SqueezingCoefficients + ?Sized>(c: &C, tol: f64) -> Multimodality {
    let singles_zero = c.single_mode().iter().all(|z| z.norm() < tol);
    let live_pairs = c.pairwise().iter().filter(|z| z.norm() >= tol).count();
    match (singles_zero, live_pairs) {
        (_, 0) => Multimodality::SeparableSingleMode,
        (true, 1) => Multimodality::SoleTwoMode,
        (true, 3) => Multimodality::SoleThreeMode,
        _ => Multimodality::Mixed,
    }
}

/// Which extreme of the dimer condition table a configuration satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimerRegime {
    /// `2δ + μ_a − μ_b = 2nπ`, `r_a = r_b`: two single-mode squeezed states for every θ.
    TwoSingleMode,
    /// `2δ + μ_a − μ_b = (2n+1)π`, `r_a = r_b`, `θ = (2m+1)π/4`: sole two-mode squeezing.
    SoleTwoMode,
}

fn phase_matches(phase: f64, offset: f64, tol: f64) -> bool {
    (-2..=2).any(|n: i32| (phase - offset - 2.0 * PI * f64::from(n)).abs() < tol)
}

/// Checks the analytic dimer conditions; `None` when neither extreme applies.
pub fn dimer_regime(
    xi_a: SqueezeParam,
    xi_b: SqueezeParam,
    coupler: CouplerSpec,
    tol: f64,
) -> Option<DimerRegime> {
    if (xi_a.r - xi_b.r).abs() >= tol {
        return None;
    }
    let phase = (2.0 * coupler.delta + xi_a.mu - xi_b.mu).rem_euclid(TAU);
    if phase_matches(phase, 0.0, tol) {
        return Some(DimerRegime::TwoSingleMode);
    }
    let odd_quarter = (2.0 * coupler.theta).cos().abs() < tol;
    if phase_matches(phase, PI, tol) && odd_quarter {
        return Some(DimerRegime::SoleTwoMode);
    }
    None
}
