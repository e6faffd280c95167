//! Zero-mean Gaussian states in the quadrature picture.
//!
//! Quadratures are `X₁ = ½(a + a†)` and `X₂ = (1/2i)(a − a†)`, so
//! `[X₁, X₂] = i/2` and the vacuum covariance is `¼·I`. The quadrature vector
//! is ordered `(X₁^a, X₂^a, X₁^b, X₂^b, …)`.
//!
//! Array propagation follows the coefficient convention in [`crate::coeffs`]:
//! the propagated state is `U⁻¹|ψ₀⟩` where `U⁻¹ a_j U = Σ_k R_jk a_k` is the
//! mode substitution of the coupler. Expectation values therefore evolve with
//! the inverse map `a_j → Σ_k (R†)_jk a_k`, and that is the matrix the
//! `*_symplectic` constructors return.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::coeffs::{CouplerSpec, SqueezeParam, TrimerCouplerSpec};
use crate::error::{Error, Result};

pub const VACUUM_VARIANCE: f64 = 0.25;

/// Value of `[X₁, X₂]/i`.
pub const COMMUTATOR: f64 = 0.5;

/// Real `2N×2N` matrix acting on the quadrature vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Symplectic(DMatrix<f64>);

impl Symplectic {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() % 2 != 0 || m.nrows() == 0 {
            return Err(Error::DimensionMismatch {
                expected: 2 * (m.nrows() / 2).max(1),
                actual: m.ncols(),
            });
        }
        Ok(Self(m))
    }

    pub fn identity(n_modes: usize) -> Self {
        Self(DMatrix::identity(2 * n_modes, 2 * n_modes))
    }

    pub fn n_modes(&self) -> usize {
        self.0.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    /// `self` applied after `first`.
    pub fn after(&self, first: &Symplectic) -> Symplectic {
        Symplectic(&self.0 * &first.0)
    }

    /// `max |SᵀΩS − Ω|`.
    pub fn symplectic_defect(&self) -> f64 {
        let omega = symplectic_form(self.n_modes());
        (self.0.transpose() * &omega * &self.0 - omega).amax()
    }

    /// `max |SᵀS − I|`; zero for passive (photon-number preserving) maps.
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.0.nrows();
        (self.0.transpose() * &self.0 - DMatrix::identity(n, n)).amax()
    }

    /// Heisenberg map `a_j → Σ_k U_jk a_k` for a unitary mode mixing `U`.
    pub fn from_passive(u: &DMatrix<Complex64>) -> Self {
        let zero = DMatrix::zeros(u.nrows(), u.ncols());
        Self::from_bogoliubov(u, &zero)
    }

    /// Heisenberg map `a_j → Σ_k (A_jk a_k + B_jk a_k†)`.
    pub fn from_bogoliubov(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Self {
        let n = a.nrows();
        let mut s = DMatrix::zeros(2 * n, 2 * n);
        for j in 0..n {
            for k in 0..n {
                // a_k = X₁ + iX₂ and a_k† = X₁ − iX₂.
                let on_x1 = a[(j, k)] + b[(j, k)];
                let on_x2 = Complex64::i() * (a[(j, k)] - b[(j, k)]);
                s[(2 * j, 2 * k)] = on_x1.re;
                s[(2 * j, 2 * k + 1)] = on_x2.re;
                s[(2 * j + 1, 2 * k)] = on_x1.im;
                s[(2 * j + 1, 2 * k + 1)] = on_x2.im;
            }
        }
        Self(s)
    }
}

/// Block-diagonal canonical form with blocks `[[0, 1], [−1, 0]]`.
pub fn symplectic_form(n_modes: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for j in 0..n_modes {
        m[(2 * j, 2 * j + 1)] = 1.0;
        m[(2 * j + 1, 2 * j)] = -1.0;
    }
    m
}

/// Mode substitution `U⁻¹ a U = R a` of the general dimer coupler.
pub fn dimer_mode_substitution(coupler: CouplerSpec) -> DMatrix<Complex64> {
    let (s, c) = coupler.theta().sin_cos();
    let e = Complex64::from_polar(1.0, coupler.delta());
    DMatrix::from_row_slice(
        2,
        2,
        &[c.into(), e * s, -e.conj() * s, c.into()],
    )
}

/// Mode substitution `U_T⁻¹ a U_T = R a` of the general trimer.
pub fn trimer_mode_substitution(coupler: TrimerCouplerSpec) -> DMatrix<Complex64> {
    let lambda = coupler.lambda();
    if lambda == 0.0 {
        return DMatrix::identity(3, 3);
    }
    let (ta, da) = (coupler.alpha.theta(), coupler.alpha.delta());
    let (tb, db) = (coupler.beta.theta(), coupler.beta.delta());
    let half = (lambda / 2.0).sin().powi(2);
    let (sl, cl) = lambda.sin_cos();
    let l2 = lambda * lambda;
    let e = |x: f64| Complex64::from_polar(1.0, x);
    let corner = 2.0 * ta * tb / l2 * half;
    DMatrix::from_row_slice(
        3,
        3,
        &[
            (1.0 - 2.0 * ta * ta / l2 * half).into(),
            ta / lambda * e(da) * sl,
            corner * e(da + db),
            -ta / lambda * e(-da) * sl,
            cl.into(),
            tb / lambda * e(db) * sl,
            corner * e(-(da + db)),
            -tb / lambda * e(-db) * sl,
            (1.0 - 2.0 * tb * tb / l2 * half).into(),
        ],
    )
}

fn heisenberg(substitution: &DMatrix<Complex64>) -> Symplectic {
    Symplectic::from_passive(&substitution.adjoint())
}

/// General dimer coupler `γ = θe^{iδ}`.
pub fn coupler_symplectic(coupler: CouplerSpec) -> Symplectic {
    heisenberg(&dimer_mode_substitution(coupler))
}

/// Evanescent dimer after `kz`: substitution `a → a cos kz + i b sin kz`,
/// `b → b cos kz + i a sin kz`.
pub fn dimer_symplectic(kz: f64) -> Symplectic {
    let (s, c) = kz.sin_cos();
    let i = Complex64::i();
    let r = DMatrix::from_row_slice(2, 2, &[c.into(), i * s, i * s, c.into()]);
    heisenberg(&r)
}

/// Evanescent trimer with equal couplings after `kz`.
pub fn trimer_symplectic(kz: f64) -> Symplectic {
    let c2 = (kz / SQRT_2).cos().powi(2);
    let s2 = (kz / SQRT_2).sin().powi(2);
    let side = Complex64::new(0.0, (SQRT_2 * kz).sin() / SQRT_2);
    let mid = (SQRT_2 * kz).cos();
    let r = DMatrix::from_row_slice(
        3,
        3,
        &[
            c2.into(),
            side,
            (-s2).into(),
            side,
            mid.into(),
            side,
            (-s2).into(),
            side,
            c2.into(),
        ],
    );
    heisenberg(&r)
}

/// Trimer with independent couplings `α` and `β`.
pub fn general_trimer_symplectic(coupler: TrimerCouplerSpec) -> Symplectic {
    heisenberg(&trimer_mode_substitution(coupler))
}

/// Coupled-array geometry, parameterised by the dimensionless distance `κz`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ArrayCoupling {
    Dimer,
    Trimer,
    /// `θ_α = alpha_scale·κz`, `θ_β = beta_scale·κz` with fixed phases.
    GeneralTrimer {
        alpha_scale: f64,
        alpha_phase: f64,
        beta_scale: f64,
        beta_phase: f64,
    },
}

impl ArrayCoupling {
    pub fn n_modes(&self) -> usize {
        match self {
            Self::Dimer => 2,
            _ => 3,
        }
    }

    pub fn symplectic(&self, kz: f64) -> Result<Symplectic> {
        Ok(match *self {
            Self::Dimer => dimer_symplectic(kz),
            Self::Trimer => trimer_symplectic(kz),
            Self::GeneralTrimer { .. } => general_trimer_symplectic(self.trimer_coupler(kz)?),
        })
    }

    /// Trimer coupler at `kz`; the evanescent trimer has `α = β = i·kz`.
    pub fn trimer_coupler(&self, kz: f64) -> Result<TrimerCouplerSpec> {
        match *self {
            Self::GeneralTrimer { alpha_scale, alpha_phase, beta_scale, beta_phase } => {
                Ok(TrimerCouplerSpec::new(
                    CouplerSpec::new(alpha_scale * kz, alpha_phase)?,
                    CouplerSpec::new(beta_scale * kz, beta_phase)?,
                ))
            }
            _ => TrimerCouplerSpec::evanescent(kz),
        }
    }

    /// Covariance period in `kz` for the preset geometries.
    pub fn period(&self) -> Option<f64> {
        match self {
            Self::Dimer => Some(PI),
            Self::Trimer => Some(SQRT_2 * PI),
            Self::GeneralTrimer { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Component {
    X1,
    X2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureKind {
    Single,
    Multimode,
}

/// A (possibly multimode) phase-rotated quadrature.
///
/// For modes `j ∈ S`, `|S| = M`, the X₁ component is
/// `(1/(2√M)) Σ_j (e^{−iφ} a_j + e^{iφ} a_j†)`, which keeps the vacuum variance
/// at ¼ for every `M` (the two-mode case is the usual `1/2^{3/2}` prefactor).
/// X₂ is X₁ at `φ + π/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    modes: Vec<usize>,
    angle: f64,
    component: Component,
}

impl QuadratureSpec {
    pub fn new(modes: Vec<usize>, angle: f64, component: Component) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::EmptyModeSet);
        }
        for (i, m) in modes.iter().enumerate() {
            if modes[..i].contains(m) {
                return Err(Error::DuplicateMode(*m));
            }
        }
        Ok(Self { modes, angle, component })
    }

    pub fn single(mode: usize, phi0: f64, component: Component) -> Self {
        Self { modes: vec![mode], angle: phi0, component }
    }

    pub fn multimode(modes: &[usize], phi: f64, component: Component) -> Result<Self> {
        Self::new(modes.to_vec(), phi, component)
    }

    pub fn modes(&self) -> &[usize] {
        &self.modes
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn component(&self) -> Component {
        self.component
    }

    pub fn kind(&self) -> QuadratureKind {
        if self.modes.len() == 1 {
            QuadratureKind::Single
        } else {
            QuadratureKind::Multimode
        }
    }

    /// Rotation angle of the measured component in each mode's phase space.
    pub fn effective_angle(&self) -> f64 {
        match self.component {
            Component::X1 => self.angle,
            Component::X2 => self.angle + FRAC_PI_2,
        }
    }

    /// Coefficient vector `w` with `X = wᵀζ`.
    pub fn weights(&self, n_modes: usize) -> Result<DVector<f64>> {
        let mut w = DVector::zeros(2 * n_modes);
        let norm = (self.modes.len() as f64).sqrt();
        let (s, c) = self.effective_angle().sin_cos();
        for &m in &self.modes {
            if m >= n_modes {
                return Err(Error::ModeOutOfRange { mode: m, n_modes });
            }
            w[2 * m] = c / norm;
            w[2 * m + 1] = s / norm;
        }
        Ok(w)
    }
}

/// `10·log₁₀(variance / ¼)`.
pub fn squeezing_db(variance: f64) -> Result<f64> {
    if !(variance > 0.0) {
        return Err(Error::NonPositiveVariance(variance));
    }
    Ok(10.0 * (variance / VACUUM_VARIANCE).log10())
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    pub fn vacuum(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::NoModes);
        }
        let d = 2 * n_modes;
        Ok(Self {
            mean: DVector::zeros(d),
            cov: DMatrix::identity(d, d) * VACUUM_VARIANCE,
        })
    }

    /// Zero-mean state with the given covariance.
    pub fn from_covariance(cov: DMatrix<f64>) -> Result<Self> {
        let d = cov.nrows();
        if d == 0 || d % 2 != 0 || cov.ncols() != d {
            return Err(Error::DimensionMismatch { expected: 2 * (d / 2).max(1), actual: cov.ncols() });
        }
        let asym = (&cov - cov.transpose()).amax();
        if asym > 1e-12 {
            return Err(Error::NotSymmetric(asym));
        }
        Ok(Self { mean: DVector::zeros(d), cov: symmetrized(cov) })
    }

    /// Product of single-mode squeezed vacua, one parameter per mode.
    pub fn squeezed_vacuum(inputs: &[SqueezeParam]) -> Result<Self> {
        let mut state = Self::vacuum(inputs.len())?;
        for (mode, xi) in inputs.iter().enumerate() {
            state = state.apply_squeezer(mode, *xi)?;
        }
        Ok(state)
    }

    /// Multimode squeezed vacuum `exp{½ Σ_jk (M*_jk a_j a_k − M_jk a_j† a_k†)}|0⟩`
    /// for a complex symmetric `M`.
    pub fn from_squeezing_exponent(m: &DMatrix<Complex64>) -> Result<Self> {
        let n = m.nrows();
        if n == 0 {
            return Err(Error::NoModes);
        }
        if m.ncols() != n {
            return Err(Error::DimensionMismatch { expected: n, actual: m.ncols() });
        }
        let asym = (m - m.transpose()).camax();
        if asym > 1e-12 {
            return Err(Error::NotSymmetric(asym));
        }
        // (a, a†) evolve linearly under the exponent with generator [[0, −M], [−M*, 0]].
        let mut g = DMatrix::<Complex64>::zeros(2 * n, 2 * n);
        g.view_mut((0, n), (n, n)).copy_from(&(-m));
        g.view_mut((n, 0), (n, n)).copy_from(&(-m.conjugate()));
        let e = g.exp();
        let a = e.view((0, 0), (n, n)).into_owned();
        let b = e.view((0, n), (n, n)).into_owned();
        Self::vacuum(n)?.evolve(&Symplectic::from_bogoliubov(&a, &b))
    }

    pub fn n_modes(&self) -> usize {
        self.cov.nrows() / 2
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    pub(crate) fn with_cov(&self, cov: DMatrix<f64>) -> Self {
        Self { mean: self.mean.clone(), cov: symmetrized(cov) }
    }

    pub(crate) fn with_mean(mut self, mean: DVector<f64>) -> Self {
        self.mean = mean;
        self
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.n_modes() {
            return Err(Error::ModeOutOfRange { mode, n_modes: self.n_modes() });
        }
        Ok(())
    }

    /// `S_j = exp{½(ξ* a_j² − ξ a_j†²)}` on one mode.
    pub fn apply_squeezer(&self, mode: usize, xi: SqueezeParam) -> Result<Self> {
        self.check_mode(mode)?;
        let (ch, sh) = (xi.r().cosh(), xi.r().sinh());
        let (sm, cm) = xi.mu().sin_cos();
        let block = [
            [ch - sh * cm, -sh * sm],
            [-sh * sm, ch + sh * cm],
        ];
        let mut s = DMatrix::identity(2 * self.n_modes(), 2 * self.n_modes());
        for (i, row) in block.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                s[(2 * mode + i, 2 * mode + j)] = *v;
            }
        }
        self.evolve(&Symplectic(s))
    }

    /// `S_jk = exp{χ a_j†a_k† − χ* a_j a_k}`.
    pub fn apply_two_mode_squeezer(&self, j: usize, k: usize, chi: Complex64) -> Result<Self> {
        self.check_mode(j)?;
        self.check_mode(k)?;
        if j == k {
            return Err(Error::DuplicateMode(j));
        }
        let n = self.n_modes();
        let (r, mu) = chi.to_polar();
        let mut a = DMatrix::<Complex64>::identity(n, n);
        let mut b = DMatrix::<Complex64>::zeros(n, n);
        a[(j, j)] = r.cosh().into();
        a[(k, k)] = r.cosh().into();
        b[(j, k)] = Complex64::from_polar(r.sinh(), mu);
        b[(k, j)] = Complex64::from_polar(r.sinh(), mu);
        self.evolve(&Symplectic::from_bogoliubov(&a, &b))
    }

    /// `cov → S·cov·Sᵀ`, `mean → S·mean`.
    pub fn evolve(&self, s: &Symplectic) -> Result<Self> {
        if s.0.nrows() != self.cov.nrows() {
            return Err(Error::DimensionMismatch { expected: self.cov.nrows(), actual: s.0.nrows() });
        }
        let cov = &s.0 * &self.cov * s.0.transpose();
        Ok(Self { mean: &s.0 * &self.mean, cov: symmetrized(cov) })
    }

    pub fn quadrature_variance(&self, spec: &QuadratureSpec) -> Result<f64> {
        let w = spec.weights(self.n_modes())?;
        Ok((w.transpose() * &self.cov * &w)[(0, 0)])
    }

    /// Minimum over the angle of the quadrature on `modes`, as
    /// `(angle of the X₁ component, variance)`, angle in `[0, π)`. An isotropic
    /// marginal has no preferred angle and reports 0.
    pub fn min_quadrature_variance(&self, modes: &[usize]) -> Result<(f64, f64)> {
        let p = QuadratureSpec::multimode(modes, 0.0, Component::X1)?.weights(self.n_modes())?;
        let q = QuadratureSpec::multimode(modes, 0.0, Component::X2)?.weights(self.n_modes())?;
        let vpp = (p.transpose() * &self.cov * &p)[(0, 0)];
        let vqq = (q.transpose() * &self.cov * &q)[(0, 0)];
        let vpq = (p.transpose() * &self.cov * &q)[(0, 0)];
        let mid = 0.5 * (vpp + vqq);
        let radius = (0.25 * (vpp - vqq).powi(2) + vpq * vpq).sqrt();
        if radius <= 1e-12 * mid {
            return Ok((0.0, mid));
        }
        let angle = (0.5 * (2.0 * vpq).atan2(vpp - vqq) + FRAC_PI_2).rem_euclid(PI);
        Ok((angle, mid - radius))
    }

    /// 2×2 covariance of two modes' own blocks, or of any pair of weighted quadratures.
    pub fn pair_covariance(&self, u: &DVector<f64>, v: &DVector<f64>) -> [[f64; 2]; 2] {
        let uu = (u.transpose() * &self.cov * u)[(0, 0)];
        let vv = (v.transpose() * &self.cov * v)[(0, 0)];
        let uv = (u.transpose() * &self.cov * v)[(0, 0)];
        [[uu, uv], [uv, vv]]
    }

    /// `det(4·cov)`; one for pure states.
    pub fn purity_determinant(&self) -> f64 {
        (&self.cov * 4.0).determinant()
    }
}

fn symmetrized(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, FRAC_PI_4, TAU};

    fn real(r: f64) -> SqueezeParam {
        SqueezeParam::real(r).unwrap()
    }

    fn var(state: &GaussianState, mode: usize, phi0: f64, c: Component) -> f64 {
        state.quadrature_variance(&QuadratureSpec::single(mode, phi0, c)).unwrap()
    }

    #[test]
    fn vacuum_covariance() {
        for n in 1..=3 {
            let v = GaussianState::vacuum(n).unwrap();
            assert_eq!(v.cov(), &(DMatrix::identity(2 * n, 2 * n) * 0.25));
            assert!(v.mean().iter().all(|x| *x == 0.0));
        }
        assert_eq!(GaussianState::vacuum(0), Err(Error::NoModes));
    }

    #[test]
    fn single_mode_squeezer() {
        let s = GaussianState::vacuum(1).unwrap().apply_squeezer(0, real(0.5)).unwrap();
        assert!((var(&s, 0, 0.0, Component::X1) - (-1.0f64).exp() / 4.0).abs() < 1e-15);
        assert!((var(&s, 0, 0.0, Component::X2) - E / 4.0).abs() < 1e-15);

        let flipped = GaussianState::vacuum(1)
            .unwrap()
            .apply_squeezer(0, SqueezeParam::new(0.5, PI).unwrap())
            .unwrap();
        assert!((var(&flipped, 0, 0.0, Component::X1) - E / 4.0).abs() < 1e-14);
        assert!((var(&flipped, 0, 0.0, Component::X2) - (-1.0f64).exp() / 4.0).abs() < 1e-14);

        let v = GaussianState::vacuum(2).unwrap();
        assert_eq!(v.apply_squeezer(1, SqueezeParam::zero()).unwrap(), v);
        assert!(matches!(v.apply_squeezer(2, real(0.1)), Err(Error::ModeOutOfRange { .. })));
    }

    #[test]
    fn squeezing_phase_rotates_ellipse_by_half() {
        let mu = 1.1;
        let s = GaussianState::vacuum(1)
            .unwrap()
            .apply_squeezer(0, SqueezeParam::new(0.4, mu).unwrap())
            .unwrap();
        let (angle, v) = s.min_quadrature_variance(&[0]).unwrap();
        assert!((angle - mu / 2.0).abs() < 1e-12);
        assert!((v - (-0.8f64).exp() / 4.0).abs() < 1e-14);
    }

    #[test]
    fn dimer_preset_matrices() {
        let id = dimer_symplectic(0.0);
        assert!((id.matrix() - DMatrix::identity(4, 4)).amax() < 1e-15);
        let flip = dimer_symplectic(PI);
        assert!((flip.matrix() + DMatrix::identity(4, 4)).amax() < 1e-15);
        let t = trimer_symplectic(0.0);
        assert!((t.matrix() - DMatrix::identity(6, 6)).amax() < 1e-15);
    }

    #[test]
    fn dimer_transfers_squeezing_at_half_pi() {
        let input = GaussianState::squeezed_vacuum(&[real(0.5), SqueezeParam::zero()]).unwrap();
        let out = input.evolve(&dimer_symplectic(FRAC_PI_2)).unwrap();
        let b = out.cov().view((2, 2), (2, 2)).into_owned();
        let a = out.cov().view((0, 0), (2, 2)).into_owned();
        assert!((a - DMatrix::identity(2, 2) * 0.25).amax() < 1e-15);
        // The transfer carries a factor −i, which swaps the two quadratures.
        let r = (-1.0f64).exp() / 4.0;
        let want = DMatrix::from_row_slice(2, 2, &[E / 4.0, 0.0, 0.0, r]);
        assert!((b - want).amax() < 1e-14);
    }

    #[test]
    fn trimer_transfers_a_to_c() {
        let z = SqueezeParam::zero();
        let input = GaussianState::squeezed_vacuum(&[SqueezeParam::new(0.5, 0.7).unwrap(), z, z]).unwrap();
        let out = input.evolve(&trimer_symplectic(PI / SQRT_2)).unwrap();
        let c = out.cov().view((4, 4), (2, 2)).into_owned();
        let want = input.cov().view((0, 0), (2, 2)).into_owned();
        assert!((c - want).amax() < 1e-14);
    }

    #[test]
    fn general_trimer_matches_equal_coupling() {
        for kz in [0.0, 0.4, 1.9, 3.3, 7.0] {
            let g = general_trimer_symplectic(TrimerCouplerSpec::evanescent(kz).unwrap());
            assert!((g.matrix() - trimer_symplectic(kz).matrix()).amax() < 1e-12);
        }
    }

    #[test]
    fn general_trimer_without_beta_embeds_dimer() {
        let alpha = CouplerSpec::evanescent(0.9).unwrap();
        let g = general_trimer_symplectic(TrimerCouplerSpec::new(alpha, CouplerSpec::new(0.0, 0.0).unwrap()));
        let d = dimer_symplectic(0.9);
        assert!((g.matrix().view((0, 0), (4, 4)) - d.matrix()).amax() < 1e-14);
        assert!((g.matrix().view((4, 4), (2, 2)) - DMatrix::<f64>::identity(2, 2)).amax() < 1e-15);
        assert!(g.matrix().view((0, 4), (4, 2)).amax() < 1e-15);
    }

    #[test]
    fn general_trimer_is_symplectic() {
        let cp = TrimerCouplerSpec::new(
            CouplerSpec::evanescent(1.0).unwrap(),
            CouplerSpec::evanescent(2.0).unwrap(),
        );
        let s = general_trimer_symplectic(cp);
        assert!(s.symplectic_defect() < 1e-12);
        assert!(s.orthogonality_defect() < 1e-12);
    }

    #[test]
    fn evolve_checks_dimension() {
        let v = GaussianState::vacuum(3).unwrap();
        assert!(matches!(v.evolve(&dimer_symplectic(0.2)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn evolved_pair_loses_single_mode_squeezing() {
        let input = GaussianState::squeezed_vacuum(&[real(0.5), real(0.5)]).unwrap();
        let out = input.evolve(&dimer_symplectic(FRAC_PI_4)).unwrap();
        for mode in 0..2 {
            for c in [Component::X1, Component::X2] {
                assert!((var(&out, mode, 0.0, c) - 1.0f64.cosh() / 4.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn two_mode_quadrature_collects_input_squeezing() {
        let input = GaussianState::squeezed_vacuum(&[real(0.5), real(0.5)]).unwrap();
        let out = input.evolve(&dimer_symplectic(FRAC_PI_4)).unwrap();
        let sq = QuadratureSpec::multimode(&[0, 1], FRAC_PI_4, Component::X2).unwrap();
        let anti = QuadratureSpec::multimode(&[0, 1], FRAC_PI_4, Component::X1).unwrap();
        assert!((out.quadrature_variance(&sq).unwrap() - (-1.0f64).exp() / 4.0).abs() < 1e-14);
        assert!((out.quadrature_variance(&anti).unwrap() - E / 4.0).abs() < 1e-14);
        let (angle, v) = out.min_quadrature_variance(&[0, 1]).unwrap();
        assert!((angle - 3.0 * FRAC_PI_4).abs() < 1e-12);
        assert!((v - (-1.0f64).exp() / 4.0).abs() < 1e-14);
    }

    #[test]
    fn vacuum_variance_is_quarter_for_every_mode_count() {
        let v = GaussianState::vacuum(3).unwrap();
        for modes in [vec![0], vec![0, 2], vec![0, 1, 2]] {
            for phi in [0.0, 0.3, 2.0] {
                for c in [Component::X1, Component::X2] {
                    let q = QuadratureSpec::new(modes.clone(), phi, c).unwrap();
                    assert!((v.quadrature_variance(&q).unwrap() - 0.25).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn quadrature_spec_errors() {
        assert_eq!(QuadratureSpec::new(vec![], 0.0, Component::X1), Err(Error::EmptyModeSet));
        assert_eq!(QuadratureSpec::new(vec![1, 1], 0.0, Component::X1), Err(Error::DuplicateMode(1)));
        let v = GaussianState::vacuum(2).unwrap();
        let q = QuadratureSpec::single(2, 0.0, Component::X1);
        assert!(matches!(v.quadrature_variance(&q), Err(Error::ModeOutOfRange { .. })));
    }

    #[test]
    fn decibels() {
        assert_eq!(squeezing_db(0.25).unwrap(), 0.0);
        assert!((squeezing_db((-1.0f64).exp() / 4.0).unwrap() + 4.342_944_819).abs() < 1e-8);
        assert!((squeezing_db(E / 4.0).unwrap() - 4.342_944_819).abs() < 1e-8);
        assert!(squeezing_db(0.0).is_err());
        assert!(squeezing_db(-1.0).is_err());
    }

    #[test]
    fn two_mode_squeezer_matches_exponent_route() {
        let chi = Complex64::from_polar(0.4, 0.8);
        let direct = GaussianState::vacuum(2).unwrap().apply_two_mode_squeezer(0, 1, chi).unwrap();
        let m = DMatrix::from_row_slice(2, 2, &[Complex64::default(), -chi, -chi, Complex64::default()]);
        let via = GaussianState::from_squeezing_exponent(&m).unwrap();
        assert!((direct.cov() - via.cov()).amax() < 1e-13);
    }

    #[test]
    fn single_mode_exponent_route() {
        let xi = SqueezeParam::new(0.6, 2.1).unwrap();
        let direct = GaussianState::squeezed_vacuum(&[xi]).unwrap();
        let via = GaussianState::from_squeezing_exponent(&DMatrix::from_element(1, 1, xi.value())).unwrap();
        assert!((direct.cov() - via.cov()).amax() < 1e-13);
    }

    #[test]
    fn periodicity() {
        let input = GaussianState::squeezed_vacuum(&[SqueezeParam::new(0.3, 1.0).unwrap(), real(0.5)]).unwrap();
        let once = input.evolve(&dimer_symplectic(0.7)).unwrap();
        let later = input.evolve(&dimer_symplectic(0.7 + PI)).unwrap();
        assert!((once.cov() - later.cov()).amax() < 1e-13);

        let input = GaussianState::squeezed_vacuum(&[real(0.2), real(0.4), SqueezeParam::new(0.1, 3.0).unwrap()]).unwrap();
        let once = input.evolve(&trimer_symplectic(0.7)).unwrap();
        let later = input.evolve(&trimer_symplectic(0.7 + SQRT_2 * PI)).unwrap();
        assert!((once.cov() - later.cov()).amax() < 1e-13);
        assert_eq!(ArrayCoupling::Trimer.period(), Some(SQRT_2 * PI));
        let _ = TAU;
    }
}
