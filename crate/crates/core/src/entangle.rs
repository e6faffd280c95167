//! Negative-partial-transpose test for Gaussian states.
//!
//! A separable state satisfies `V̄_j ≥ (i/4)Λ` for every single-site partial
//! transpose `V̄_j = Γ_j V Γ_j`. A negative eigenvalue of `V̄_j − (i/4)Λ`
//! witnesses entanglement across the cut `j | rest`.

use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::{symplectic_form, GaussianState};

/// Default violation threshold for eigenvalues.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Commutator matrix `Λ`, block-diagonal in `[[0, 1], [−1, 0]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaMatrix {
    matrix: DMatrix<f64>,
}

impl LambdaMatrix {
    pub fn new(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::NoModes);
        }
        Ok(Self { matrix: symplectic_form(n_modes) })
    }

    pub fn n_modes(&self) -> usize {
        self.matrix.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

/// Symmetrized second moments of the quadrature vector.
pub fn correlation_matrix(state: &GaussianState) -> Result<DMatrix<f64>> {
    let m = state.mean().amax();
    if m > 1e-12 {
        return Err(Error::NonZeroMean(m));
    }
    Ok(state.cov().clone())
}

/// `Γ_j V Γ_j`, with `Γ_j` flipping the sign of `X₂` on `site`.
pub fn partial_transpose(v: &DMatrix<f64>, site: usize) -> Result<DMatrix<f64>> {
    let n_modes = v.nrows() / 2;
    if site >= n_modes {
        return Err(Error::ModeOutOfRange { mode: site, n_modes });
    }
    let mut out = v.clone();
    let k = 2 * site + 1;
    for i in 0..v.nrows() {
        if i != k {
            out[(k, i)] = -out[(k, i)];
            out[(i, k)] = -out[(i, k)];
        }
    }
    Ok(out)
}

/// `V + s·(i/4)Λ` as a complex Hermitian matrix.
fn shifted(v: &DMatrix<f64>, sign: f64) -> DMatrix<Complex64> {
    let lambda = symplectic_form(v.nrows() / 2);
    DMatrix::from_fn(v.nrows(), v.ncols(), |i, j| {
        Complex64::new(v[(i, j)], sign * 0.25 * lambda[(i, j)])
    })
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    let eig = SymmetricEigen::try_new(m.clone(), 1e-15, 10_000).ok_or(Error::EigenFailure)?;
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    if values.iter().any(|x| !x.is_finite()) {
        return Err(Error::EigenFailure);
    }
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Partial transpose at one site, with the spectrum of `V̄_j − (i/4)Λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationTest {
    pub transposed_site: usize,
    pub matrix: DMatrix<Complex64>,
    pub eigenvalues: Vec<f64>,
}

impl CorrelationTest {
    pub fn new(state: &GaussianState, site: usize) -> Result<Self> {
        let v = partial_transpose(&correlation_matrix(state)?, site)?;
        let matrix = shifted(&v, -1.0);
        let eigenvalues = hermitian_eigenvalues(&matrix)?;
        Ok(Self { transposed_site: site, matrix, eigenvalues })
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn violates(&self, tol: f64) -> bool {
        self.min_eigenvalue() < -tol
    }
}

pub fn npt_min_eigenvalue(state: &GaussianState, site: usize) -> Result<f64> {
    Ok(CorrelationTest::new(state, site)?.min_eigenvalue())
}

/// Minimum NPT eigenvalue for every site in order.
pub fn npt_min_eigenvalues(state: &GaussianState) -> Result<Vec<f64>> {
    (0..state.n_modes()).map(|j| npt_min_eigenvalue(state, j)).collect()
}

/// Smallest eigenvalue of `V + (i/4)Λ`; non-negative for physical states.
pub fn uncertainty_min_eigenvalue(state: &GaussianState) -> Result<f64> {
    let values = hermitian_eigenvalues(&shifted(state.cov(), 1.0))?;
    Ok(values[0])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioLabel {
    /// Every single-site transpose violates the bound: fully inseparable.
    I,
    II,
    III,
    /// No violation.
    IV,
}

impl ScenarioLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::I => "I",
            Self::II => "II",
            Self::III => "III",
            Self::IV => "IV",
        }
    }
}

impl fmt::Display for ScenarioLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparabilityScenario {
    pub label: ScenarioLabel,
    pub violating: [bool; 3],
    pub min_eigenvalues: [f64; 3],
}

/// Counts violating sites of a three-mode state: 3 → I, 2 → II, 1 → III, 0 → IV.
pub fn classify_scenario(state: &GaussianState, tol: f64) -> Result<SeparabilityScenario> {
    if state.n_modes() != 3 {
        return Err(Error::WrongModeCount { expected: 3, actual: state.n_modes() });
    }
    let mut min_eigenvalues = [0.0; 3];
    let mut violating = [false; 3];
    for site in 0..3 {
        min_eigenvalues[site] = npt_min_eigenvalue(state, site)?;
        violating[site] = min_eigenvalues[site] < -tol;
    }
    let label = match violating.iter().filter(|v| **v).count() {
        3 => ScenarioLabel::I,
        2 => ScenarioLabel::II,
        1 => ScenarioLabel::III,
        _ => ScenarioLabel::IV,
    };
    Ok(SeparabilityScenario { label, violating, min_eigenvalues })
}
