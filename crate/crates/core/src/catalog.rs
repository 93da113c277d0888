//! Named measurements and states used by the worked examples.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use num_complex::Complex64;

use crate::error::Result;
use crate::measure::{validate_povm, validate_projective, DensityMatrix, Povm};
use crate::naimark::{root_of_unity, Embedding, KrausBlock, NaimarkExtension};
use crate::qmat::{c64, diag, outer, ComplexMatrix};

/// `(|0> + nu^k |1>)/sqrt 2` with `nu = exp(2 pi i / d)`.
pub fn qubit_phase_vector(d: usize, k: usize) -> Vec<Complex64> {
    vec![c64(FRAC_1_SQRT_2, 0.0), root_of_unity(d, k) * FRAC_1_SQRT_2]
}

fn scaled_rank_one(vectors: &[Vec<Complex64>], weight: f64) -> Vec<ComplexMatrix> {
    vectors.iter().map(|v| outer(v, v) * c64(weight, 0.0)).collect()
}

/// Two-outcome full-rank qubit POVM
/// `E_0 = a|0><0| + (1-a)|1><1|`, `E_1 = (1-a)|0><0| + a|1><1|`.
pub fn example1_povm(a: f64) -> Result<Povm> {
    validate_povm(vec![diag(&[a, 1.0 - a]), diag(&[1.0 - a, a])])
}

/// The explicit dilation operators listed for the two-outcome POVM:
/// `A_{i,0} = sqrt(E_i)`, `A_{0,1} = -sqrt(1-a)|0><0| + sqrt(a)|1><1|`,
/// `A_{1,1} = sqrt(a)|0><0| - sqrt(1-a)|1><1|`.
pub fn example1_kraus_block(a: f64) -> KrausBlock {
    let (sa, sb) = (a.sqrt(), (1.0 - a).sqrt());
    KrausBlock {
        operators: vec![
            vec![diag(&[sa, sb]), diag(&[-sb, sa])],
            vec![diag(&[sb, sa]), diag(&[sa, -sb])],
        ],
    }
}

/// Qubit trine `{(2/3)|phi_k><phi_k|}`.
pub fn trine_povm() -> Povm {
    let vectors: Vec<_> = (0..3).map(|k| qubit_phase_vector(3, k)).collect();
    validate_povm(scaled_rank_one(&vectors, 2.0 / 3.0)).expect("trine is a POVM")
}

/// Trine extension `{|varphi_k><varphi_k|}` on `C^3` (direct-sum embedding).
pub fn trine_extension() -> Result<NaimarkExtension> {
    let w = root_of_unity(3, 1);
    let s = 1.0 / 3f64.sqrt();
    let one = c64(1.0, 0.0);
    let vectors = [
        vec![one * s, one * s, one * s],
        vec![one * s, w * s, w * w * s],
        vec![one * s, w * w * s, w * s],
    ];
    let measurement = validate_projective(scaled_rank_one(&vectors, 1.0))?;
    NaimarkExtension::new(measurement, Embedding::DirectSum { target_dim: 3 }, 2)
}

/// Four-outcome qubit POVM `{(1/2)|phi_k><phi_k|}` with `|phi_k> = (|0> + i^k|1>)/sqrt 2`.
pub fn four_element_povm() -> Povm {
    validate_povm(scaled_rank_one(&e0_vectors(), 0.5)).expect("four-element POVM")
}

fn e0_vectors() -> Vec<Vec<Complex64>> {
    (0..4).map(|k| qubit_phase_vector(4, k)).collect()
}

fn e1_vectors() -> Vec<Vec<Complex64>> {
    let h = FRAC_1_SQRT_2;
    let e = |x: f64| Complex64::from_polar(1.0, x);
    vec![
        vec![c64(1.0, 0.0), c64(0.0, 0.0)],
        vec![-e(FRAC_PI_4) * h, e(FRAC_PI_4) * h],
        vec![c64(0.0, 0.0), c64(0.0, -1.0)],
        vec![-e(-FRAC_PI_4) * h, e(3.0 * FRAC_PI_4) * h],
    ]
}

/// The second POVM carried by the four-outcome extension when the ancilla is `|1>`:
/// `{(1/2)|phi_j^(1)><phi_j^(1)|}` with `|phi_0^(1)> = |0>`, `|phi_2^(1)> = -i|1>`, etc.
pub fn selected_povm_e1() -> Povm {
    validate_povm(scaled_rank_one(&e1_vectors(), 0.5)).expect("E_1 is a POVM")
}

/// Extension vectors in the printed layout, where the ancilla is the most
/// significant factor: index `a * 2 + s`.
pub fn four_element_vectors_ancilla_major() -> Vec<Vec<Complex64>> {
    let e = |x: f64| Complex64::from_polar(1.0, x);
    let r2 = 2f64.sqrt();
    let one = c64(1.0, 0.0);
    let i = c64(0.0, 1.0);
    let zero = c64(0.0, 0.0);
    [
        vec![one, one, one * r2, zero],
        vec![one, i, -e(FRAC_PI_4), e(FRAC_PI_4)],
        vec![one, -one, zero, -i * r2],
        vec![one, -i, -e(-FRAC_PI_4), e(3.0 * FRAC_PI_4)],
    ]
    .into_iter()
    .map(|v| v.into_iter().map(|z| z * 0.5).collect())
    .collect()
}

/// Extension vectors `|varphi_j> = (1/sqrt 2) sum_a |phi_j^(a)> (x) |a>`
/// in the system-major layout (index `s * 2 + a`).
pub fn four_element_vectors() -> Vec<Vec<Complex64>> {
    let families = [e0_vectors(), e1_vectors()];
    (0..4)
        .map(|j| {
            let mut v = vec![Complex64::default(); 4];
            for (a, family) in families.iter().enumerate() {
                for s in 0..2 {
                    v[s * 2 + a] = family[j][s] * FRAC_1_SQRT_2;
                }
            }
            v
        })
        .collect()
}

/// The rank-one extension of the four-outcome POVM on `C^2 (x) C^2`
/// with ancilla reference `|0>`.
pub fn four_element_extension() -> Result<NaimarkExtension> {
    let measurement = validate_projective(scaled_rank_one(&four_element_vectors(), 1.0))?;
    NaimarkExtension::new(
        measurement,
        Embedding::Ancilla {
            ancilla_dim: 2,
            reference: 0,
        },
        2,
    )
}

/// `{(1/2)|0><0|, (1/2)|1><1|, (1/2)|+><+|, (1/2)|-><-|}`.
pub fn bb84_povm() -> Povm {
    let h = FRAC_1_SQRT_2;
    let vectors = vec![
        vec![c64(1.0, 0.0), c64(0.0, 0.0)],
        vec![c64(0.0, 0.0), c64(1.0, 0.0)],
        vec![c64(h, 0.0), c64(h, 0.0)],
        vec![c64(h, 0.0), c64(-h, 0.0)],
    ];
    validate_povm(scaled_rank_one(&vectors, 0.5)).expect("BB84 POVM")
}

/// `|psi_t><psi_t|` with `|psi_t> = cos t |0> + i sin t |1>`.
pub fn phase_state(t: f64) -> DensityMatrix {
    DensityMatrix::pure(&[c64(t.cos(), 0.0), c64(0.0, t.sin())]).expect("unit vector")
}
