//! Two-variable marginals of Gaussian Wigner functions on regular grids.
//!
//! Marginalizing a Gaussian keeps it Gaussian, so the density over any two
//! quadratures is the bivariate normal with the matching 2×2 block of the
//! covariance. No high-dimensional integration is involved.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::gaussian::{Component, GaussianState, QuadratureSpec};

pub const DEFAULT_RANGE_SIGMAS: f64 = 4.0;
pub const DEFAULT_RESOLUTION: usize = 201;

/// Single-mode quadrature `X₁` or `X₂` of `mode` at phase `angle`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureAxis {
    pub mode: usize,
    pub component: Component,
    pub angle: f64,
}

impl QuadratureAxis {
    pub fn new(mode: usize, component: Component) -> Self {
        Self { mode, component, angle: 0.0 }
    }

    pub fn rotated(mode: usize, component: Component, angle: f64) -> Self {
        Self { mode, component, angle }
    }

    pub fn label(&self) -> String {
        let c = match self.component {
            Component::X1 => "X1",
            Component::X2 => "X2",
        };
        let m = mode_letter(self.mode);
        if self.angle == 0.0 {
            format!("{c}_{m}")
        } else {
            format!("{c}_{m}@{}", self.angle)
        }
    }

    fn spec(&self) -> QuadratureSpec {
        QuadratureSpec::single(self.mode, self.angle, self.component)
    }

    fn effective_angle(&self) -> f64 {
        match self.component {
            Component::X1 => self.angle,
            Component::X2 => self.angle + FRAC_PI_2,
        }
    }
}

pub(crate) fn mode_letter(mode: usize) -> String {
    if mode < 26 {
        ((b'a' + mode as u8) as char).to_string()
    } else {
        mode.to_string()
    }
}

/// Grid extent and sampling, identical on both axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Explicit `[min, max]`; when absent the grid spans `±range_sigmas` of the
    /// wider marginal standard deviation.
    pub range: Option<(f64, f64)>,
    pub range_sigmas: f64,
    pub resolution: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { range: None, range_sigmas: DEFAULT_RANGE_SIGMAS, resolution: DEFAULT_RESOLUTION }
    }
}

impl GridSpec {
    pub fn sigmas(range_sigmas: f64, resolution: usize) -> Self {
        Self { range: None, range_sigmas, resolution }
    }

    pub fn fixed(min: f64, max: f64, resolution: usize) -> Self {
        Self { range: Some((min, max)), range_sigmas: DEFAULT_RANGE_SIGMAS, resolution }
    }

    fn validate(&self) -> Result<()> {
        if self.resolution < 2 {
            return Err(Error::InvalidParameter {
                name: "resolution",
                reason: format!("need at least 2 points, got {}", self.resolution),
            });
        }
        match self.range {
            Some((lo, hi)) if !(lo.is_finite() && hi.is_finite() && lo < hi) => {
                Err(Error::InvalidParameter {
                    name: "range",
                    reason: format!("need finite min < max, got [{lo}, {hi}]"),
                })
            }
            None if !(self.range_sigmas.is_finite() && self.range_sigmas > 0.0) => {
                Err(Error::InvalidParameter {
                    name: "range_sigmas",
                    reason: format!("must be positive, got {}", self.range_sigmas),
                })
            }
            _ => Ok(()),
        }
    }

    fn points(&self, cov: &[[f64; 2]; 2]) -> Vec<f64> {
        let (lo, hi) = self.range.unwrap_or_else(|| {
            let s = cov[0][0].max(cov[1][1]).sqrt() * self.range_sigmas;
            (-s, s)
        });
        let step = (hi - lo) / (self.resolution - 1) as f64;
        (0..self.resolution).map(|i| lo + step * i as f64).collect()
    }
}

/// Density sampled on `x × y`; `values[i][j]` is the density at `(x[i], y[j])`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    pub axes: [QuadratureAxis; 2],
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    /// Analytic covariance of the two axes.
    pub covariance: [[f64; 2]; 2],
}

impl WignerGrid {
    fn cell_area(&self) -> f64 {
        (self.x[1] - self.x[0]) * (self.y[1] - self.y[0])
    }

    fn moment(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        let mut acc = 0.0;
        for (i, row) in self.values.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                acc += v * f(self.x[i], self.y[j]);
            }
        }
        acc * self.cell_area()
    }

    pub fn riemann_sum(&self) -> f64 {
        self.moment(|_, _| 1.0)
    }

    /// Second moments about the origin by grid quadrature.
    pub fn estimated_covariance(&self) -> [[f64; 2]; 2] {
        let xy = self.moment(|x, y| x * y);
        [[self.moment(|x, _| x * x), xy], [xy, self.moment(|_, y| y * y)]]
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().flatten().copied().fold(0.0, f64::max)
    }
}

fn axis_covariance(state: &GaussianState, axes: &[QuadratureAxis; 2]) -> Result<[[f64; 2]; 2]> {
    let mut w: Vec<DVector<f64>> = Vec::with_capacity(2);
    for a in axes {
        w.push(a.spec().weights(state.n_modes())?);
    }
    Ok(state.pair_covariance(&w[0], &w[1]))
}

/// Bivariate normal density of two quadratures of `state`.
pub fn marginal_density(
    state: &GaussianState,
    axes: [QuadratureAxis; 2],
    grid: &GridSpec,
) -> Result<WignerGrid> {
    grid.validate()?;
    let same_mode = axes[0].mode == axes[1].mode;
    let d = (axes[0].effective_angle() - axes[1].effective_angle()).rem_euclid(PI);
    if same_mode && d.min(PI - d) < 1e-12 {
        return Err(Error::InvalidParameter {
            name: "axes",
            reason: format!("{} and {} are not distinct", axes[0].label(), axes[1].label()),
        });
    }
    let cov = axis_covariance(state, &axes)?;
    let det = cov[0][0] * cov[1][1] - cov[0][1] * cov[0][1];
    let scale = cov[0][0].max(cov[1][1]);
    if !(det > 1e-14 * scale * scale) {
        return Err(Error::SingularMarginal(det));
    }
    let inv = [
        [cov[1][1] / det, -cov[0][1] / det],
        [-cov[0][1] / det, cov[0][0] / det],
    ];
    let norm = 1.0 / (2.0 * PI * det.sqrt());
    let x = grid.points(&cov);
    let y = x.clone();
    let values = x
        .iter()
        .map(|&u| {
            y.iter()
                .map(|&v| {
                    let q = inv[0][0] * u * u + 2.0 * inv[0][1] * u * v + inv[1][1] * v * v;
                    norm * (-0.5 * q).exp()
                })
                .collect()
        })
        .collect();
    Ok(WignerGrid { axes, x, y, values, covariance: cov })
}

/// Wigner function of one mode's reduced state over `(X₁, X₂)`.
pub fn reduced_single_mode_density(
    state: &GaussianState,
    mode: usize,
    grid: &GridSpec,
) -> Result<WignerGrid> {
    marginal_density(
        state,
        [QuadratureAxis::new(mode, Component::X1), QuadratureAxis::new(mode, Component::X2)],
        grid,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::SqueezeParam;
    use crate::gaussian::dimer_symplectic;
    use std::f64::consts::{E, FRAC_PI_4};

    fn dimer(kz: f64) -> GaussianState {
        let r = SqueezeParam::real(0.5).unwrap();
        GaussianState::squeezed_vacuum(&[r, r]).unwrap().evolve(&dimer_symplectic(kz)).unwrap()
    }

    fn x(mode: usize) -> QuadratureAxis {
        QuadratureAxis::new(mode, Component::X1)
    }

    fn p(mode: usize) -> QuadratureAxis {
        QuadratureAxis::new(mode, Component::X2)
    }

    #[test]
    fn vacuum_marginal_is_isotropic() {
        let v = GaussianState::vacuum(2).unwrap();
        let g = marginal_density(&v, [x(0), x(1)], &GridSpec::sigmas(5.0, 201)).unwrap();
        assert_eq!(g.covariance, [[0.25, 0.0], [0.0, 0.25]]);
        assert!((g.riemann_sum() - 1.0).abs() < 1e-3);
        let mid = 100;
        assert!((g.values[mid][mid] - 1.0 / (2.0 * PI * 0.25)).abs() < 1e-12);
        assert!((g.values[mid + 7][mid] - g.values[mid][mid + 7]).abs() < 1e-15);
    }

    #[test]
    fn grid_recovers_covariance() {
        let s = dimer(FRAC_PI_4);
        let g = marginal_density(&s, [x(0), x(1)], &GridSpec::sigmas(5.0, 201)).unwrap();
        let est = g.estimated_covariance();
        for i in 0..2 {
            for j in 0..2 {
                let rel = (est[i][j] - g.covariance[i][j]).abs() / g.covariance[i][i];
                assert!(rel < 1e-3, "{i}{j}: {rel}");
            }
        }
        assert!(g.values.iter().flatten().all(|v| *v >= 0.0));
    }

    #[test]
    fn dimer_quarter_point_cross_correlations() {
        let s = dimer(FRAC_PI_4);
        let rot = |m, c| QuadratureAxis::rotated(m, c, FRAC_PI_4);
        let g1 = marginal_density(&s, [rot(0, Component::X1), rot(1, Component::X1)], &GridSpec::default()).unwrap();
        let g2 = marginal_density(&s, [rot(0, Component::X2), rot(1, Component::X2)], &GridSpec::default()).unwrap();
        assert!(g1.covariance[0][1] > 0.1);
        assert!(g2.covariance[0][1] < -0.1);
        let unrotated = marginal_density(&s, [x(0), x(1)], &GridSpec::default()).unwrap();
        assert!(unrotated.covariance[0][1].abs() < 1e-14);
    }

    #[test]
    fn single_mode_reductions() {
        let r = SqueezeParam::real(0.5).unwrap();
        let input = GaussianState::squeezed_vacuum(&[r, SqueezeParam::zero()]).unwrap();
        let g = reduced_single_mode_density(&input, 0, &GridSpec::default()).unwrap();
        assert!((g.covariance[0][0] - (-1.0f64).exp() / 4.0).abs() < 1e-15);
        assert!((g.covariance[1][1] - E / 4.0).abs() < 1e-15);

        let g = reduced_single_mode_density(&dimer(FRAC_PI_4), 1, &GridSpec::default()).unwrap();
        let want = 1.0f64.cosh() / 4.0;
        assert!((g.covariance[0][0] - want).abs() < 1e-14);
        assert!((g.covariance[1][1] - want).abs() < 1e-14);
        assert!(g.covariance[0][1].abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_axes_and_grids() {
        let v = GaussianState::vacuum(2).unwrap();
        assert!(matches!(
            marginal_density(&v, [x(0), x(0)], &GridSpec::default()),
            Err(Error::InvalidParameter { name: "axes", .. })
        ));
        let turned = QuadratureAxis::rotated(0, Component::X2, -FRAC_PI_2);
        assert!(marginal_density(&v, [x(0), turned], &GridSpec::default()).is_err());
        assert!(matches!(
            marginal_density(&v, [x(0), x(2)], &GridSpec::default()),
            Err(Error::ModeOutOfRange { .. })
        ));
        assert!(marginal_density(&v, [x(0), p(0)], &GridSpec::fixed(1.0, -1.0, 11)).is_err());
        assert!(marginal_density(&v, [x(0), p(0)], &GridSpec::sigmas(4.0, 1)).is_err());
    }

    #[test]
    fn singular_marginal_is_flagged() {
        let cov = nalgebra::DMatrix::from_row_slice(2, 2, &[0.25, 0.0, 0.0, 0.0]);
        let s = GaussianState::from_covariance(cov).unwrap();
        assert!(matches!(
            reduced_single_mode_density(&s, 0, &GridSpec::default()),
            Err(Error::SingularMarginal(_))
        ));
    }

    #[test]
    fn labels() {
        assert_eq!(x(0).label(), "X1_a");
        assert_eq!(p(2).label(), "X2_c");
    }
}
