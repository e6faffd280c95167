//! Brute-force state-vector simulation in a truncated Fock space.
//!
//! This is an independent check on the Gaussian layer. It shares no linear
//! algebra with it beyond the quadrature definitions. States are never
//! renormalized, so the norm lost to truncation stays visible.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::coeffs::SqueezeParam;
use crate::error::{Error, Result};
use crate::gaussian::QuadratureSpec;

pub const DEFAULT_CUTOFF: usize = 20;
pub const DEFAULT_TRUNCATION_BUDGET: f64 = 1e-6;
const NORM_DRIFT_LIMIT: f64 = 1e-9;

/// Coupled-array Hamiltonian up to the factor `−ħκ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FockHamiltonian {
    /// `a†b + ab†`
    Dimer,
    /// `a†b + ab† + b†c + c†b`
    Trimer,
}

impl FockHamiltonian {
    pub fn n_modes(&self) -> usize {
        match self {
            Self::Dimer => 2,
            Self::Trimer => 3,
        }
    }

    fn bonds(&self) -> &'static [(usize, usize)] {
        match self {
            Self::Dimer => &[(0, 1)],
            Self::Trimer => &[(0, 1), (1, 2)],
        }
    }
}

/// Amplitudes over `|n_0, …, n_{N−1}⟩` with every `n_j ≤ cutoff`, mode 0 most
/// significant.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    n_modes: usize,
    cutoff: usize,
    budget: f64,
    amps: DVector<Complex64>,
}

impl FockState {
    pub fn vacuum(n_modes: usize, cutoff: usize) -> Result<Self> {
        Self::number_state(&vec![0; n_modes], cutoff)
    }

    pub fn number_state(occupation: &[usize], cutoff: usize) -> Result<Self> {
        let n_modes = occupation.len();
        if n_modes == 0 {
            return Err(Error::NoModes);
        }
        if cutoff == 0 {
            return Err(Error::InvalidParameter { name: "cutoff", reason: "must be at least 1".into() });
        }
        if let Some(&n) = occupation.iter().find(|&&n| n > cutoff) {
            return Err(Error::InvalidParameter {
                name: "occupation",
                reason: format!("{n} photons exceeds cutoff {cutoff}"),
            });
        }
        let dim = (cutoff + 1).pow(n_modes as u32);
        let mut amps = DVector::zeros(dim);
        let mut state = Self { n_modes, cutoff, budget: DEFAULT_TRUNCATION_BUDGET, amps: DVector::zeros(0) };
        amps[state.index(occupation)] = Complex64::new(1.0, 0.0);
        state.amps = amps;
        Ok(state)
    }

    /// Product of single-mode squeezed vacua.
    pub fn squeezed_vacuum(inputs: &[SqueezeParam], cutoff: usize, budget: f64) -> Result<Self> {
        let mut state = Self::vacuum(inputs.len(), cutoff)?.with_truncation_budget(budget)?;
        for (mode, xi) in inputs.iter().enumerate() {
            state = state.squeeze(mode, *xi)?;
        }
        Ok(state)
    }

    pub fn with_truncation_budget(mut self, budget: f64) -> Result<Self> {
        if !(budget >= 0.0 && budget < 1.0) {
            return Err(Error::InvalidParameter {
                name: "truncation_budget",
                reason: format!("must lie in [0, 1), got {budget}"),
            });
        }
        self.budget = budget;
        Ok(self)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amps
    }

    pub fn index(&self, occupation: &[usize]) -> usize {
        occupation.iter().fold(0, |acc, &n| acc * (self.cutoff + 1) + n)
    }

    pub fn occupation(&self, mut index: usize) -> Vec<usize> {
        let mut occ = vec![0; self.n_modes];
        for slot in occ.iter_mut().rev() {
            *slot = index % (self.cutoff + 1);
            index /= self.cutoff + 1;
        }
        occ
    }

    pub fn amplitude(&self, occupation: &[usize]) -> Complex64 {
        self.amps[self.index(occupation)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.norm_squared()
    }

    pub fn norm_loss(&self) -> f64 {
        (1.0 - self.norm_sqr()).max(0.0)
    }

    fn stride(&self, mode: usize) -> usize {
        (self.cutoff + 1).pow((self.n_modes - 1 - mode) as u32)
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.n_modes {
            return Err(Error::ModeOutOfRange { mode, n_modes: self.n_modes });
        }
        Ok(())
    }

    /// `exp{½(ξ* a² − ξ a†²)}` on one mode.
    ///
    /// The generator is exponentiated in a space of `2·cutoff + 1` levels and
    /// the result projected back, so the only error is the amplitude pushed
    /// above the cutoff.
    pub fn squeeze(&self, mode: usize, xi: SqueezeParam) -> Result<Self> {
        self.check_mode(mode)?;
        if xi.r() == 0.0 {
            return Ok(self.clone());
        }
        if (self.cutoff as f64) < 4.0 * xi.r() * xi.r().exp() {
            return Err(Error::CutoffTooSmall { cutoff: self.cutoff, r: xi.r() });
        }
        let levels = 2 * self.cutoff + 2;
        let z = xi.value();
        let mut g = DMatrix::<Complex64>::zeros(levels, levels);
        for n in 0..levels - 2 {
            let s = ((n + 1) as f64 * (n + 2) as f64).sqrt() * 0.5;
            g[(n, n + 2)] = z.conj() * s;
            g[(n + 2, n)] = -z * s;
        }
        let k = self.cutoff + 1;
        let block = g.exp().view((0, 0), (k, k)).into_owned();
        let out = self.map_fibers(mode, &block);
        if out.norm_loss() > self.budget {
            return Err(Error::TruncationLoss { lost: out.norm_loss(), budget: self.budget });
        }
        Ok(out)
    }

    fn map_fibers(&self, mode: usize, block: &DMatrix<Complex64>) -> Self {
        let k = self.cutoff + 1;
        let stride = self.stride(mode);
        let mut out = DVector::zeros(self.amps.len());
        let mut fiber = DVector::<Complex64>::zeros(k);
        for base in 0..self.amps.len() {
            if (base / stride) % k != 0 {
                continue;
            }
            for n in 0..k {
                fiber[n] = self.amps[base + n * stride];
            }
            let mapped = block * &fiber;
            for n in 0..k {
                out[base + n * stride] = mapped[n];
            }
        }
        Self { amps: out, ..self.clone() }
    }

    /// Propagates by `exp(−i·kz·K)`, `K` the hopping operator.
    ///
    /// With the coupling Hamiltonian `H = −ħκK` this is the inverse of the
    /// evolution operator `exp(−iHz/ħ)`, matching the state convention of the
    /// coefficient formulas. `K` conserves the total photon number, so it is
    /// exponentiated one number sector at a time.
    pub fn evolve(&self, hamiltonian: FockHamiltonian, kz: f64) -> Result<Self> {
        if hamiltonian.n_modes() != self.n_modes {
            return Err(Error::WrongModeCount { expected: hamiltonian.n_modes(), actual: self.n_modes });
        }
        if kz == 0.0 {
            return Ok(self.clone());
        }
        let mut sectors: Vec<Vec<usize>> = vec![Vec::new(); self.n_modes * self.cutoff + 1];
        for idx in 0..self.amps.len() {
            sectors[self.occupation(idx).iter().sum::<usize>()].push(idx);
        }
        let mut out = DVector::zeros(self.amps.len());
        for members in sectors.iter().filter(|m| !m.is_empty()) {
            let local = |idx: usize| members.binary_search(&idx).ok();
            let n = members.len();
            let mut k = DMatrix::<Complex64>::zeros(n, n);
            for (col, &idx) in members.iter().enumerate() {
                let occ = self.occupation(idx);
                for &(p, q) in hamiltonian.bonds() {
                    for (from, to) in [(q, p), (p, q)] {
                        // a_to† a_from
                        if occ[from] == 0 || occ[to] == self.cutoff {
                            continue;
                        }
                        let amp = ((occ[from] * (occ[to] + 1)) as f64).sqrt();
                        let mut next = occ.clone();
                        next[from] -= 1;
                        next[to] += 1;
                        if let Some(row) = local(self.index(&next)) {
                            k[(row, col)] += Complex64::new(amp, 0.0);
                        }
                    }
                }
            }
            let u = (k * Complex64::new(0.0, -kz)).exp();
            let v = DVector::from_iterator(n, members.iter().map(|&i| self.amps[i]));
            let w = u * v;
            for (slot, &idx) in members.iter().enumerate() {
                out[idx] = w[slot];
            }
        }
        let evolved = Self { amps: out, ..self.clone() };
        let drift = (evolved.norm_sqr() - self.norm_sqr()).abs();
        if drift > NORM_DRIFT_LIMIT {
            return Err(Error::NormDrift(drift));
        }
        Ok(evolved)
    }

    /// `a_mode |ψ⟩`, exact in the truncated space.
    fn lower(&self, mode: usize, v: &DVector<Complex64>) -> DVector<Complex64> {
        let k = self.cutoff + 1;
        let stride = self.stride(mode);
        let mut out = DVector::zeros(v.len());
        for idx in 0..v.len() {
            let n = (idx / stride) % k;
            if n + 1 < k {
                out[idx] = v[idx + stride] * ((n + 1) as f64).sqrt();
            }
        }
        out
    }

    fn apply_combination(&self, weights: &[(usize, Complex64)], v: &DVector<Complex64>) -> DVector<Complex64> {
        let mut out = DVector::zeros(v.len());
        for &(mode, w) in weights {
            out += self.lower(mode, v) * w;
        }
        out
    }

    /// `⟨X²⟩ − ⟨X⟩²`, evaluated with lowering operators only:
    /// for `X = A + A†`, `⟨X²⟩ = 2 Re⟨A²⟩ + 2⟨A†A⟩ + [A, A†]`.
    pub fn variance(&self, spec: &QuadratureSpec) -> Result<f64> {
        for &m in spec.modes() {
            self.check_mode(m)?;
        }
        let scale = 0.5 / (spec.modes().len() as f64).sqrt();
        let w = Complex64::from_polar(scale, -spec.effective_angle());
        let weights: Vec<(usize, Complex64)> = spec.modes().iter().map(|&m| (m, w)).collect();
        let commutator = weights.len() as f64 * scale * scale;
        let norm = self.norm_sqr();
        let a1 = self.apply_combination(&weights, &self.amps);
        let a2 = self.apply_combination(&weights, &a1);
        let mean_a = self.amps.dotc(&a1) / norm;
        let mean_a2 = self.amps.dotc(&a2) / norm;
        let mean_ada = a1.norm_squared() / norm;
        let second = 2.0 * mean_a2.re + 2.0 * mean_ada + commutator;
        let first = 2.0 * mean_a.re;
        Ok(second - first * first)
    }

    /// `⟨n_mode⟩`, or the total photon number when `mode` is `None`.
    pub fn photon_number(&self, mode: Option<usize>) -> f64 {
        let norm = self.norm_sqr();
        let mut total = 0.0;
        for idx in 0..self.amps.len() {
            let occ = self.occupation(idx);
            let n = match mode {
                Some(m) => occ[m],
                None => occ.iter().sum(),
            };
            total += n as f64 * self.amps[idx].norm_sqr();
        }
        total / norm
    }

    /// `|⟨self|other⟩|²`.
    pub fn overlap(&self, other: &Self) -> f64 {
        self.amps.dotc(&other.amps).norm_sqr()
    }
}

/// `exp{½ Σ_jk (M*_jk a_j a_k − M_jk a_j† a_k†)}|0⟩` built as one dense
/// exponential. Intended for two modes at small cutoffs.
pub fn squeezed_from_exponent(m: &DMatrix<Complex64>, cutoff: usize) -> Result<FockState> {
    let n = m.nrows();
    let vac = FockState::vacuum(n, cutoff)?;
    let dim = vac.amps.len();
    let basis = |i: usize| {
        let mut e = DVector::<Complex64>::zeros(dim);
        e[i] = Complex64::new(1.0, 0.0);
        e
    };
    // Lowering operators as dense matrices, one column per basis vector.
    let lowering: Vec<DMatrix<Complex64>> = (0..n)
        .map(|j| {
            let mut op = DMatrix::zeros(dim, dim);
            for i in 0..dim {
                op.set_column(i, &vac.lower(j, &basis(i)));
            }
            op
        })
        .collect();
    let mut g = DMatrix::<Complex64>::zeros(dim, dim);
    for j in 0..n {
        for k in 0..n {
            let down = &lowering[j] * &lowering[k];
            let up = lowering[j].adjoint() * lowering[k].adjoint();
            g += down * (m[(j, k)].conj() * 0.5) - up * (m[(j, k)] * 0.5);
        }
    }
    let amps = g.exp() * &vac.amps;
    Ok(FockState { amps, ..vac })
}
