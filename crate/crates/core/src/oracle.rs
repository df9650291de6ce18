//! Brute-force density-matrix verifier.
//!
//! Works on the full `4^m`-dimensional joint space. The network is a
//! permutation built photon by photon from [`crate::optics::elements`]
//! (never from [`crate::optics::LocalGateTable`]), Hadamard layers are
//! applied as explicit 2x2 unitaries on the density matrix, and corrections
//! are dense `2^m x 2^m` unitaries. Nothing here reuses the sparse engine's
//! evolution code.
//!
//! Basis ordering: photon 1 is most significant; each photon contributes
//! two bits, polarization (high) then spatial/port (low).

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::optics::elements;
use crate::protocol::{
    AcceptanceRule, CorrectionOp, CorrectionPlan, PortPattern, Protocol, ProtocolResult,
};
use crate::scenario::Case;
use crate::state::{Ensemble, Layout, PolBit, PureState, SpatialBit};

pub const MAX_ORACLE_PHOTONS: usize = 5;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * other.data[k * n + c];
                }
            }
        }
        out
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, unitary: &Self) -> Self {
        unitary.mul(self).mul(&unitary.adjoint())
    }

    pub fn scale(&mut self, factor: f64) {
        for v in &mut self.data {
            *v *= factor;
        }
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (0..self.dim)
            .all(|r| (0..self.dim).all(|c| (self[(r, c)] - self[(c, r)].conj()).norm() <= tol))
    }

    /// `<v|M|v>` for a vector given as `(index, amplitude)` pairs.
    pub fn expectation(&self, vector: &[(usize, Complex64)]) -> Complex64 {
        let mut acc = ZERO;
        for &(r, a) in vector {
            for &(c, b) in vector {
                acc += a.conj() * self[(r, c)] * b;
            }
        }
        acc
    }
}

impl core::ops::Index<(usize, usize)> for Matrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.dim + c]
    }
}

impl core::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.dim + c]
    }
}

/// Density operator over the joint polarization ⊗ mode space.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseState {
    photons: usize,
    rho: Matrix,
}

/// Position in the dense ordering of photon `k`'s (pol, mode) pair.
fn shift(photon: usize, photons: usize) -> usize {
    2 * (photons - 1 - photon)
}

fn dense_index(photons: usize, pol: u32, mode: u32) -> usize {
    let mut idx = 0;
    for k in 0..photons {
        let bit = photons - 1 - k;
        let p = ((pol >> bit) & 1) as usize;
        let s = ((mode >> bit) & 1) as usize;
        idx |= ((p << 1) | s) << shift(k, photons);
    }
    idx
}

fn check_capacity(photons: usize) -> Result<()> {
    if photons > MAX_ORACLE_PHOTONS {
        Err(Error::Capacity { photons })
    } else {
        Ok(())
    }
}

/// `Σ_k p_k |ψ_k><ψ_k|` for a joint (hyper or port) ensemble.
pub fn densify(ensemble: &Ensemble) -> Result<DenseState> {
    let photons = ensemble.photons();
    check_capacity(photons)?;
    match ensemble.layout() {
        Layout::Hyper | Layout::Ports => {}
        other => return Err(Error::UnsupportedLayout(other)),
    }
    let dim = 1usize << (2 * photons);
    let mut rho = Matrix::zeros(dim);
    for (p, state) in ensemble.members() {
        let vec: Vec<(usize, Complex64)> = state
            .terms()
            .map(|t| (dense_index(photons, t.label.pol, t.label.mode), t.amplitude))
            .collect();
        for &(r, a) in &vec {
            for &(c, b) in &vec {
                rho[(r, c)] += a * b.conj() * *p;
            }
        }
    }
    Ok(DenseState { photons, rho })
}

impl DenseState {
    pub fn photons(&self) -> usize {
        self.photons
    }

    pub fn dim(&self) -> usize {
        self.rho.dim
    }

    pub fn matrix(&self) -> &Matrix {
        &self.rho
    }

    pub fn trace(&self) -> f64 {
        self.rho.trace().re
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.rho.is_hermitian(tol)
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.rho.data.iter().map(|v| v.norm_sqr()).sum()
    }

    /// `ρ → U ρ U†` with a 2x2 `gate[out][in]` on the index bit `bit`.
    fn apply_qubit_gate(&mut self, bit: usize, gate: &[[Complex64; 2]; 2]) {
        let n = self.rho.dim;
        let mask = 1usize << bit;
        let data = &mut self.rho.data;
        for i0 in (0..n).filter(|i| i & mask == 0) {
            let i1 = i0 | mask;
            for c in 0..n {
                let a = data[i0 * n + c];
                let b = data[i1 * n + c];
                data[i0 * n + c] = gate[0][0] * a + gate[0][1] * b;
                data[i1 * n + c] = gate[1][0] * a + gate[1][1] * b;
            }
        }
        for r in 0..n {
            for i0 in (0..n).filter(|i| i & mask == 0) {
                let i1 = i0 | mask;
                let a = data[r * n + i0];
                let b = data[r * n + i1];
                data[r * n + i0] = a * gate[0][0].conj() + b * gate[0][1].conj();
                data[r * n + i1] = a * gate[1][0].conj() + b * gate[1][1].conj();
            }
        }
    }

    /// Hadamard on every polarization and every spatial qubit.
    fn hadamard_layers(&mut self) {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let gate = [
            [Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
            [Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
        ];
        for k in 0..self.photons {
            let base = shift(k, self.photons);
            self.apply_qubit_gate(base + 1, &gate);
            self.apply_qubit_gate(base, &gate);
        }
    }

    fn permute(&mut self, perm: &[usize]) {
        let n = self.rho.dim;
        let mut out = Matrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out[(perm[r], perm[c])] = self.rho[(r, c)];
            }
        }
        self.rho = out;
    }
}

/// The network as a basis permutation `in → out` on the dense ordering,
/// chained from the individual optical elements.
pub fn network_permutation(photons: usize) -> Result<Vec<usize>> {
    check_capacity(photons)?;
    let dim = 1usize << (2 * photons);
    let mut perm = vec![0usize; dim];
    let mut hit = vec![false; dim];
    for (idx, slot) in perm.iter_mut().enumerate() {
        let mut out = 0usize;
        for k in 0..photons {
            let pair = (idx >> shift(k, photons)) & 0b11;
            let pol = PolBit::from_bit(pair & 0b10 != 0);
            let mode = SpatialBit::from_bit(pair & 0b01 != 0);
            let (q, port) = elements::route(pol, mode).ok_or(Error::NotReversible)?;
            let pair = (usize::from(q.bit()) << 1) | usize::from(port.bit());
            out |= pair << shift(k, photons);
        }
        if hit[out] {
            return Err(Error::NotReversible);
        }
        hit[out] = true;
        *slot = out;
    }
    Ok(perm)
}

/// Dense `2^m x 2^m` unitary of a correction sequence on the polarization
/// register (photon 1 most significant).
pub fn correction_unitary(photons: usize, ops: &[CorrectionOp]) -> Matrix {
    let dim = 1usize << photons;
    let mut u = Matrix::identity(dim);
    for op in ops {
        let step = match *op {
            CorrectionOp::FlipPol(mask) => {
                let mut x = Matrix::zeros(dim);
                for a in 0..dim {
                    x[(a ^ mask as usize, a)] = ONE;
                }
                x
            }
            CorrectionOp::HadamardPol => {
                let mut h = Matrix::zeros(dim);
                let norm = 1.0 / libm::sqrt(dim as f64);
                for y in 0..dim {
                    for x in 0..dim {
                        let sign = if (x & y).count_ones() % 2 == 0 {
                            1.0
                        } else {
                            -1.0
                        };
                        h[(y, x)] = Complex64::new(sign * norm, 0.0);
                    }
                }
                h
            }
        };
        u = step.mul(&u);
    }
    u
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub pre_hadamard: bool,
    pub acceptance: AcceptanceRule,
    pub corrections: CorrectionPlan,
    pub target: PureState,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub photons: usize,
    pub trace_after_network: f64,
    pub pattern_probabilities: BTreeMap<PortPattern, f64>,
    /// Accepted patterns with their corrected, normalized polarization
    /// density matrices.
    pub accepted: BTreeMap<PortPattern, (f64, Matrix)>,
    pub success_probability: f64,
    pub rejected_probability: f64,
    pub output_fidelity: Option<f64>,
}

fn pol_vector(target: &PureState) -> Result<Vec<(usize, Complex64)>> {
    if target.layout() != Layout::Polarization {
        return Err(Error::LayoutMismatch {
            expected: Layout::Polarization,
            found: target.layout(),
        });
    }
    Ok(target
        .terms()
        .map(|t| (t.label.pol as usize, t.amplitude))
        .collect())
}

impl OracleReport {
    pub fn fidelity_against(&self, target: &PureState) -> Result<Option<f64>> {
        if self.success_probability <= 0.0 {
            return Ok(None);
        }
        let v = pol_vector(target)?;
        let acc: f64 = self
            .accepted
            .values()
            .map(|(p, rho)| p * rho.expectation(&v).re)
            .sum();
        Ok(Some(acc / self.success_probability))
    }
}

pub fn oracle_run(dense: &DenseState, config: &OracleConfig) -> Result<OracleReport> {
    let m = dense.photons;
    check_capacity(m)?;
    if config.corrections.photons() != m || config.target.photons() != m {
        return Err(Error::DimensionMismatch {
            left: m,
            right: config.corrections.photons(),
        });
    }
    let target = pol_vector(&config.target)?;

    let mut rho = dense.clone();
    if config.pre_hadamard {
        rho.hadamard_layers();
    }
    rho.permute(&network_permutation(m)?);
    let trace_after_network = rho.trace();

    let pol_dim = 1usize << m;
    let mut pattern_probabilities = BTreeMap::new();
    let mut accepted = BTreeMap::new();
    let mut success = 0.0;
    let mut rejected = 0.0;
    for pattern in PortPattern::all(m) {
        let idx: Vec<usize> = (0..pol_dim as u32)
            .map(|a| dense_index(m, a, pattern.swaps()))
            .collect();
        let mut block = Matrix::zeros(pol_dim);
        for (r, &ir) in idx.iter().enumerate() {
            for (c, &ic) in idx.iter().enumerate() {
                block[(r, c)] = rho.rho[(ir, ic)];
            }
        }
        let prob = block.trace().re;
        if prob <= 0.0 {
            continue;
        }
        pattern_probabilities.insert(pattern, prob);
        if !config.acceptance.accepts(&pattern) {
            rejected += prob;
            continue;
        }
        success += prob;
        block.scale(1.0 / prob);
        let u = correction_unitary(m, config.corrections.ops(&pattern));
        accepted.insert(pattern, (prob, block.conjugate_by(&u)));
    }

    let mut report = OracleReport {
        photons: m,
        trace_after_network,
        pattern_probabilities,
        accepted,
        success_probability: success,
        rejected_probability: rejected,
        output_fidelity: None,
    };
    if success > 0.0 {
        let acc: f64 = report
            .accepted
            .values()
            .map(|(p, block)| p * block.expectation(&target).re)
            .sum();
        report.output_fidelity = Some(acc / success);
    }
    Ok(report)
}

/// Largest absolute disagreement between engine and oracle across success
/// probability, output fidelity and every pattern probability.
pub fn max_deviation(engine: &ProtocolResult, oracle: &OracleReport) -> f64 {
    let mut worst = (engine.success_probability - oracle.success_probability).abs();
    worst = worst.max((engine.rejected_probability - oracle.rejected_probability).abs());
    worst = worst.max(match (engine.output_fidelity, oracle.output_fidelity) {
        (Some(a), Some(b)) => (a - b).abs(),
        (None, None) => 0.0,
        _ => f64::INFINITY,
    });
    for pattern in PortPattern::all(engine.photons) {
        let a = engine
            .pattern_probabilities
            .get(&pattern)
            .copied()
            .unwrap_or(0.0);
        let b = oracle
            .pattern_probabilities
            .get(&pattern)
            .copied()
            .unwrap_or(0.0);
        worst = worst.max((a - b).abs());
    }
    worst
}

impl OracleConfig {
    /// Mirrors a protocol's pipeline; the gate table is deliberately ignored.
    pub fn for_protocol(protocol: &Protocol) -> Result<Self> {
        Ok(Self {
            pre_hadamard: protocol.pre_hadamard,
            acceptance: protocol.acceptance,
            corrections: protocol.corrections.clone(),
            target: protocol.target.polarization(protocol.photons())?,
        })
    }
}

/// Engine and oracle on the same case; returns the worst deviation.
pub fn check_case(case: &Case) -> Result<f64> {
    let engine = case.protocol.run(&case.input)?;
    let config = OracleConfig::for_protocol(&case.protocol)?;
    let report = oracle_run(&densify(&case.input)?, &config)?;
    Ok(max_deviation(&engine, &report))
}
