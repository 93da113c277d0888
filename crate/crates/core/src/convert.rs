//! Converting block coherence into entanglement with a target system.
//!
//! The control state `rho` on `S` is paired with `|0><0|` on a `d_A`-level
//! target `A` and rotated by the block-incoherent unitary
//!
//! ```text
//! U = sum_{i, j < d_P} P_i (x) |(i + j) mod d_P><j|  +  sum_{i, j >= d_P} P_i (x) |j><j|
//! ```
//!
//! which produces `sum_{i,j} P_i rho P_j (x) |i><j|`. For that output the
//! relative entropy of entanglement is pinned from both sides: the hashing
//! bound `S(tr_A sigma) - S(sigma)` from below and `S(sigma || tau)` with the
//! separable `tau = sum_i P_i rho P_i (x) |i><i|` from above. Both equal the
//! block coherence `C_r(rho, P)`.

use crate::coherence::block_coherence;
use crate::error::{Error, Result};
use crate::measure::{DensityMatrix, ProjectiveMeasurement};
use crate::qmat::{
    c64, partial_trace, partial_transpose, quantum_relative_entropy, tensor_product, trace_norm, von_neumann_entropy,
    ComplexMatrix,
};

/// Bounds disagreeing with the coherence by more than this abort with `SandwichViolation`.
pub const SANDWICH_ABORT_TOL: f64 = 1e-6;
/// Agreement required for a passing Theorem-1 trial.
pub const EQUALITY_TOL: f64 = 1e-8;
/// Coherence and negativity above this count as strictly positive.
pub const POSITIVITY_TOL: f64 = 1e-9;

fn unit(d: usize, row: usize, col: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d, d);
    m[(row, col)] = c64(1.0, 0.0);
    m
}

/// The block-incoherent entangling unitary on `C^{d_S} (x) C^{d_A}`.
pub fn build_entangling_unitary(p: &ProjectiveMeasurement, target_dim: usize) -> Result<ComplexMatrix> {
    let outcomes = p.outcomes();
    if target_dim < outcomes {
        return Err(Error::TargetTooSmall {
            target: target_dim,
            outcomes,
        });
    }
    let n = p.dim() * target_dim;
    let mut u = ComplexMatrix::zeros(n, n);
    for (i, proj) in p.projectors().iter().enumerate() {
        for j in 0..target_dim {
            let row = if j < outcomes { (i + j) % outcomes } else { j };
            u += tensor_product(proj, &unit(target_dim, row, j));
        }
    }
    Ok(u)
}

/// Output of the conversion protocol.
#[derive(Debug, Clone)]
pub struct ConversionResult {
    /// `U (rho (x) |0><0|) U^dagger` on `C^{d_S} (x) C^{d_A}`.
    pub output_state: DensityMatrix,
    /// `[d_S, d_A]`.
    pub dims: [usize; 2],
    pub unitary: ComplexMatrix,
    pub negativity: f64,
    /// Relative entropy of entanglement across `S:A`, bits, evaluated as
    /// `S(sigma || tau)` and certified by the matching lower bound.
    pub rel_ent_entanglement: f64,
    /// `C_r(rho, P)`, bits.
    pub coherence_input: f64,
}

/// Two-sided bound on the relative entropy of entanglement of a converted state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sandwich {
    /// `S(tr_A sigma) - S(sigma)`.
    pub lower: f64,
    /// `C_r(rho, P)`.
    pub value: f64,
    /// `S(sigma || tau)`.
    pub upper: f64,
}

impl Sandwich {
    pub fn width(&self) -> f64 {
        (self.upper - self.value).abs().max((self.lower - self.value).abs())
    }
}

fn check_dims(rho: &DensityMatrix, p: &ProjectiveMeasurement) -> Result<()> {
    if rho.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: rho.dim(),
        });
    }
    Ok(())
}

fn apply_protocol(rho: &DensityMatrix, u: &ComplexMatrix, target_dim: usize) -> Result<DensityMatrix> {
    let mut target = ComplexMatrix::zeros(target_dim, target_dim);
    target[(0, 0)] = c64(1.0, 0.0);
    let input = tensor_product(rho.matrix(), &target);
    DensityMatrix::new(u * input * u.adjoint())
}

/// `sum_i P_i rho P_i (x) |i><i|`.
fn closest_separable(rho: &DensityMatrix, p: &ProjectiveMeasurement, target_dim: usize) -> Result<DensityMatrix> {
    let n = p.dim() * target_dim;
    let tau = p
        .projectors()
        .iter()
        .enumerate()
        .fold(ComplexMatrix::zeros(n, n), |acc, (i, proj)| {
            acc + tensor_product(&(proj * rho.matrix() * proj), &unit(target_dim, i, i))
        });
    DensityMatrix::new(tau)
}

fn sandwich_for(rho: &DensityMatrix, p: &ProjectiveMeasurement, output: &DensityMatrix, target_dim: usize) -> Result<Sandwich> {
    let value = block_coherence(rho, p)?;
    let marginal = DensityMatrix::new(partial_trace(output.matrix(), &[p.dim(), target_dim], &[0])?)?;
    let lower = von_neumann_entropy(&marginal) - von_neumann_entropy(output);
    let tau = closest_separable(rho, p, target_dim)?;
    let upper = quantum_relative_entropy(output, &tau)?;
    let s = Sandwich { lower, value, upper };
    if !upper.is_finite() || s.width() > SANDWICH_ABORT_TOL {
        return Err(Error::SandwichViolation { lower, value, upper });
    }
    Ok(s)
}

/// Runs the conversion protocol with a `target_dim`-level target initialized to `|0>`.
pub fn convert(rho: &DensityMatrix, p: &ProjectiveMeasurement, target_dim: usize) -> Result<ConversionResult> {
    check_dims(rho, p)?;
    let unitary = build_entangling_unitary(p, target_dim)?;
    let output_state = apply_protocol(rho, &unitary, target_dim)?;
    let dims = [p.dim(), target_dim];
    let negativity = negativity(&output_state, dims)?;
    let sandwich = sandwich_for(rho, p, &output_state, target_dim)?;
    Ok(ConversionResult {
        output_state,
        dims,
        unitary,
        negativity,
        rel_ent_entanglement: sandwich.upper,
        coherence_input: sandwich.value,
    })
}

/// `(||rho^{T_B}||_1 - 1) / 2`.
pub fn negativity(rho: &DensityMatrix, dims: [usize; 2]) -> Result<f64> {
    let pt = partial_transpose(rho.matrix(), dims)?;
    Ok(((trace_norm(&pt)? - 1.0) / 2.0).max(0.0))
}

/// Relative entropy of entanglement of the converted state (target dimension `d_P`),
/// with the two bounds that certify it.
pub fn rel_ent_entanglement_bounds(rho: &DensityMatrix, p: &ProjectiveMeasurement) -> Result<Sandwich> {
    check_dims(rho, p)?;
    let target_dim = p.outcomes();
    let u = build_entangling_unitary(p, target_dim)?;
    let output = apply_protocol(rho, &u, target_dim)?;
    sandwich_for(rho, p, &output, target_dim)
}

/// Relative entropy of entanglement of the converted state, in bits.
pub fn rel_ent_entanglement_converted(rho: &DensityMatrix, p: &ProjectiveMeasurement) -> Result<f64> {
    rel_ent_entanglement_bounds(rho, p).map(|s| s.value)
}

/// One trial of the coherence-iff-entanglement check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem1Report {
    pub coherence: f64,
    pub negativity: f64,
    pub rel_ent_entanglement: f64,
    pub sandwich: Sandwich,
    /// `coherence > 0` iff `negativity > 0`.
    pub iff_holds: bool,
    /// Both bounds within `EQUALITY_TOL` of the coherence.
    pub equality_holds: bool,
    pub passed: bool,
}

pub fn theorem1_check(rho: &DensityMatrix, p: &ProjectiveMeasurement, target_dim: usize) -> Result<Theorem1Report> {
    check_dims(rho, p)?;
    let unitary = build_entangling_unitary(p, target_dim)?;
    let output = apply_protocol(rho, &unitary, target_dim)?;
    let negativity = negativity(&output, [p.dim(), target_dim])?;
    let sandwich = sandwich_for(rho, p, &output, target_dim)?;
    let coherence = sandwich.value;
    let iff_holds = (coherence > POSITIVITY_TOL) == (negativity > POSITIVITY_TOL);
    let equality_holds = sandwich.width() < EQUALITY_TOL;
    Ok(Theorem1Report {
        coherence,
        negativity,
        rel_ent_entanglement: sandwich.upper,
        sandwich,
        iff_holds,
        equality_holds,
        passed: iff_holds && equality_holds,
    })
}

/// Negativity of a pure bipartite state whose Schmidt probabilities are `p`:
/// `((sum_i sqrt p_i)^2 - 1) / 2`.
pub fn pure_state_negativity(schmidt_probabilities: &[f64]) -> f64 {
    let s: f64 = schmidt_probabilities.iter().map(|x| x.max(0.0).sqrt()).sum();
    (s * s - 1.0) / 2.0
}
