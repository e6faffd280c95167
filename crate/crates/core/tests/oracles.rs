//! Cross-checks between independent routes to the same numbers.

use std::f64::consts::{FRAC_PI_4, PI, TAU};

use gausson_core::coeffs::dimer_coeffs;
use gausson_core::entangle::{npt_min_eigenvalue, partial_transpose};
use gausson_core::fock::{squeezed_from_exponent, FockHamiltonian, FockState};
use gausson_core::gaussian::{dimer_symplectic, symplectic_form, trimer_symplectic, Component};
use gausson_core::{GaussianState, QuadratureSpec, SqueezeParam};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Cyclic Jacobi eigenvalues of a real symmetric matrix.
fn jacobi_eigenvalues(mut a: DMatrix<f64>) -> Vec<f64> {
    let n = a.nrows();
    for _ in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|(i, j)| i != j).map(|(i, j)| a[(i, j)].powi(2)).sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[(p, q)].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * a[(p, q)]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut d: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    d.sort_by(f64::total_cmp);
    d
}

/// Minimum eigenvalue of `V − (i/4)Λ` through the real embedding
/// `[[Re, −Im], [Im, Re]]`, whose spectrum doubles the Hermitian one.
fn npt_by_jacobi(state: &GaussianState, site: usize) -> f64 {
    let v = partial_transpose(state.cov(), site).unwrap();
    let im = symplectic_form(state.n_modes()) * -0.25;
    let n = v.nrows();
    let mut big = DMatrix::zeros(2 * n, 2 * n);
    big.view_mut((0, 0), (n, n)).copy_from(&v);
    big.view_mut((n, n), (n, n)).copy_from(&v);
    big.view_mut((0, n), (n, n)).copy_from(&(-&im));
    big.view_mut((n, 0), (n, n)).copy_from(&im);
    jacobi_eigenvalues(big)[0]
}

fn random_xi(rng: &mut ChaCha8Rng, r_max: f64) -> SqueezeParam {
    SqueezeParam::new(rng.gen_range(0.0..r_max), rng.gen_range(0.0..TAU)).unwrap()
}

#[test]
fn npt_eigenvalues_agree_with_jacobi() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let inputs: Vec<_> = (0..3).map(|_| random_xi(&mut rng, 1.0)).collect();
        let kz = rng.gen_range(0.0..TAU);
        let t = GaussianState::squeezed_vacuum(&inputs).unwrap().evolve(&trimer_symplectic(kz)).unwrap();
        for site in 0..3 {
            assert!((npt_min_eigenvalue(&t, site).unwrap() - npt_by_jacobi(&t, site)).abs() < 1e-10);
        }
        let d = GaussianState::squeezed_vacuum(&inputs[..2]).unwrap().evolve(&dimer_symplectic(kz)).unwrap();
        assert!((npt_min_eigenvalue(&d, 1).unwrap() - npt_by_jacobi(&d, 1)).abs() < 1e-10);
    }
}

#[test]
fn two_mode_squeezed_vacuum_npt_value() {
    // Equal real inputs r at the quarter point leave a two-mode squeezed vacuum
    // of parameter r (up to local phases). Its transposed, shifted correlation
    // matrix splits into 2×2 blocks with eigenvalues (cosh 2r ± sinh 2r ± 1)/4.
    let r = 0.5;
    let s = GaussianState::squeezed_vacuum(&[SqueezeParam::real(r).unwrap(); 2])
        .unwrap()
        .evolve(&dimer_symplectic(FRAC_PI_4))
        .unwrap();
    let want = ((-2.0 * r).exp() - 1.0) / 4.0;
    for site in 0..2 {
        assert!((npt_min_eigenvalue(&s, site).unwrap() - want).abs() < 1e-12);
        assert!((npt_by_jacobi(&s, site) - want).abs() < 1e-12);
    }
}

#[test]
fn fock_dimer_matches_gaussian_variances() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..6 {
        let inputs = [random_xi(&mut rng, 0.5), random_xi(&mut rng, 0.5)];
        let kz = rng.gen_range(0.0..TAU);
        let phi = rng.gen_range(0.0..PI);
        let fock = FockState::squeezed_vacuum(&inputs, 20, 1e-6).unwrap().evolve(FockHamiltonian::Dimer, kz).unwrap();
        let gauss = GaussianState::squeezed_vacuum(&inputs).unwrap().evolve(&dimer_symplectic(kz)).unwrap();
        for c in [Component::X1, Component::X2] {
            for q in [
                QuadratureSpec::single(0, phi, c),
                QuadratureSpec::single(1, phi, c),
                QuadratureSpec::multimode(&[0, 1], phi, c).unwrap(),
            ] {
                let diff = (fock.variance(&q).unwrap() - gauss.quadrature_variance(&q).unwrap()).abs();
                assert!(diff < 1e-6, "{diff}");
            }
        }
    }
}

#[test]
fn fock_trimer_matches_gaussian_at_one_point() {
    let inputs = [SqueezeParam::real(0.25).unwrap(), SqueezeParam::new(0.5, 1.0).unwrap(), SqueezeParam::new(0.3, 4.0).unwrap()];
    let kz = 0.8;
    let fock = FockState::squeezed_vacuum(&inputs, 10, 1e-4).unwrap().evolve(FockHamiltonian::Trimer, kz).unwrap();
    let gauss = GaussianState::squeezed_vacuum(&inputs).unwrap().evolve(&trimer_symplectic(kz)).unwrap();
    for q in [
        QuadratureSpec::single(1, 0.3, Component::X1),
        QuadratureSpec::multimode(&[0, 2], 0.7, Component::X2).unwrap(),
        QuadratureSpec::multimode(&[0, 1, 2], 1.9, Component::X1).unwrap(),
    ] {
        let diff = (fock.variance(&q).unwrap() - gauss.quadrature_variance(&q).unwrap()).abs();
        assert!(diff < 1e-3, "{diff}");
    }
}

#[test]
fn fock_cutoff_convergence() {
    let xi = [SqueezeParam::real(0.5).unwrap(), SqueezeParam::new(0.5, 2.0).unwrap()];
    let q = QuadratureSpec::multimode(&[0, 1], 0.4, Component::X1).unwrap();
    let at = |cutoff| {
        FockState::squeezed_vacuum(&xi, cutoff, 1e-6)
            .unwrap()
            .evolve(FockHamiltonian::Dimer, 0.6)
            .unwrap()
            .variance(&q)
            .unwrap()
    };
    assert!((at(20) - at(40)).abs() < 1e-6);
}

#[test]
fn coefficient_state_matches_fock_propagation() {
    // The coefficients describe the propagated state itself, not just its
    // covariance, so overlap in Fock space checks phases as well.
    let (a, b) = (SqueezeParam::new(0.3, 0.4).unwrap(), SqueezeParam::new(0.2, 2.5).unwrap());
    for kz in [0.3, FRAC_PI_4, 1.2] {
        let m = dimer_coeffs(a, b, kz).squeezing_matrix();
        let dense = squeezed_from_exponent(&m, 12).unwrap();
        let propagated = FockState::squeezed_vacuum(&[a, b], 12, 1e-4).unwrap().evolve(FockHamiltonian::Dimer, kz).unwrap();
        assert!((dense.overlap(&propagated) - 1.0).abs() < 1e-5);
    }
}
