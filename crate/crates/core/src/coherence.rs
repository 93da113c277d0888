//! Relative-entropy block coherence and POVM-based coherence.

use crate::error::{Error, Result};
use crate::measure::{block_dephase, measurement_operators, projective_part, DensityMatrix, Povm, ProjectiveMeasurement};
use crate::naimark::{embed_state, NaimarkExtension};
use crate::qmat::{c64, shannon_entropy, von_neumann_entropy, ComplexMatrix};

/// Outcomes with probability below this are dropped from the post-measurement sum.
pub const NEGLIGIBLE_PROBABILITY: f64 = 1e-12;
/// Two routes to the POVM-based coherence disagreeing by more than this is an error.
pub const ROUTE_AGREEMENT_TOL: f64 = 1e-6;
/// Frobenius threshold for the POVM-incoherence test.
pub const INCOHERENCE_TOL: f64 = 1e-9;

/// Breakdown of the closed-form POVM-based coherence.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceReport {
    /// Coherence in bits.
    pub value: f64,
    /// `p_i = tr(E_i rho)`.
    pub probabilities: Vec<f64>,
    /// `S(rho_i)` for each outcome; zero for negligible outcomes.
    pub post_measurement_entropies: Vec<f64>,
    /// `S(rho)`.
    pub state_entropy: f64,
}

impl CoherenceReport {
    /// `H(p) + sum_i p_i S(rho_i) - S(rho)` recomputed from the stored parts.
    pub fn recomputed(&self) -> f64 {
        let h = shannon_entropy(&self.probabilities).unwrap_or(f64::NAN);
        let avg: f64 = self
            .probabilities
            .iter()
            .zip(&self.post_measurement_entropies)
            .map(|(p, s)| p * s)
            .sum();
        h + avg - self.state_entropy
    }
}

/// `C_r(rho, P) = S(Delta[rho]) - S(rho)`.
pub fn block_coherence(rho: &DensityMatrix, p: &ProjectiveMeasurement) -> Result<f64> {
    let dephased = block_dephase(rho, p)?;
    Ok((von_neumann_entropy(&dephased) - von_neumann_entropy(rho)).max(0.0))
}

/// POVM-based coherence via `H(p) + sum_i p_i S(rho_i) - S(rho)` with
/// `rho_i = sqrt(E_i) rho sqrt(E_i) / p_i`.
pub fn povm_coherence(rho: &DensityMatrix, povm: &Povm) -> Result<CoherenceReport> {
    let probabilities = povm.probabilities(rho)?;
    let ops = measurement_operators(povm)?;
    let mut post_measurement_entropies = Vec::with_capacity(ops.len());
    for (a, &p) in ops.iter().zip(&probabilities) {
        if p < NEGLIGIBLE_PROBABILITY {
            post_measurement_entropies.push(0.0);
            continue;
        }
        let unnormalized = a * rho.matrix() * a.adjoint();
        let tr = unnormalized.trace().re;
        let post = DensityMatrix::new(unnormalized / c64(tr, 0.0))?;
        post_measurement_entropies.push(von_neumann_entropy(&post));
    }
    let state_entropy = von_neumann_entropy(rho);
    let h = shannon_entropy(&probabilities)?;
    let avg: f64 = probabilities.iter().zip(&post_measurement_entropies).map(|(p, s)| p * s).sum();
    Ok(CoherenceReport {
        value: h + avg - state_entropy,
        probabilities,
        post_measurement_entropies,
        state_entropy,
    })
}

/// Block coherence of the embedded state, cross-checked against [`povm_coherence`].
pub fn povm_coherence_via_naimark(rho: &DensityMatrix, povm: &Povm, ext: &NaimarkExtension) -> Result<f64> {
    if povm.outcomes() != ext.measurement.outcomes() {
        return Err(Error::DimensionMismatch {
            expected: ext.measurement.outcomes(),
            found: povm.outcomes(),
        });
    }
    let embedded_state = embed_state(rho, ext)?;
    let embedded = block_coherence(&embedded_state, &ext.measurement)?;
    let direct = povm_coherence(rho, povm)?.value;
    if (embedded - direct).abs() > ROUTE_AGREEMENT_TOL {
        return Err(Error::InconsistentExtension { direct, embedded });
    }
    Ok(embedded)
}

/// Whether `sum_i Ebar_i rho Ebar_i = rho`, `Ebar_i` the range projector of `E_i`.
pub fn is_povm_incoherent(rho: &DensityMatrix, povm: &Povm) -> Result<bool> {
    if rho.dim() != povm.dim() {
        return Err(Error::DimensionMismatch {
            expected: povm.dim(),
            found: rho.dim(),
        });
    }
    let d = rho.dim();
    let mut sum = ComplexMatrix::zeros(d, d);
    for e in povm.effects() {
        let bar = projective_part(e)?;
        sum += &bar * rho.matrix() * &bar;
    }
    Ok((sum - rho.matrix()).norm() < INCOHERENCE_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::measure::validate_projective;
    use crate::naimark::canonical_extension;
    use crate::qmat::{c64, diag};

    fn plus() -> DensityMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::pure(&[c64(h, 0.0), c64(h, 0.0)]).unwrap()
    }

    #[test]
    fn block_coherence_examples() {
        let comp = ProjectiveMeasurement::computational(2);
        assert!((block_coherence(&plus(), &comp).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(block_coherence(&plus(), &ProjectiveMeasurement::trivial(2)).unwrap(), 0.0);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let block = validate_projective(vec![diag(&[1.0, 1.0, 0.0]), diag(&[0.0, 0.0, 1.0])]).unwrap();
        let psi = DensityMatrix::pure(&[c64(h, 0.0), c64(h, 0.0), c64(0.0, 0.0)]).unwrap();
        assert!(block_coherence(&psi, &block).unwrap() < 1e-14);
        assert!(matches!(block_coherence(&psi, &comp), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn povm_coherence_examples() {
        let zero = DensityMatrix::basis(2, 0);
        let trine = catalog::trine_povm();
        let r = povm_coherence(&zero, &trine).unwrap();
        assert!((r.value - 3f64.log2()).abs() < 1e-12);
        assert!((r.value - r.recomputed()).abs() < 1e-10);

        let r = povm_coherence(&zero, &catalog::four_element_povm()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);

        // p_i = 1/3 and each rho_i pure: log2(3) - S(I/2)
        let r = povm_coherence(&DensityMatrix::maximally_mixed(2), &trine).unwrap();
        for p in &r.probabilities {
            assert!((p - 1.0 / 3.0).abs() < 1e-14);
        }
        for s in &r.post_measurement_entropies {
            assert!(s.abs() < 1e-12);
        }
        assert!((r.value - (3f64.log2() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn zero_probability_outcomes_are_skipped() {
        let comp = ProjectiveMeasurement::computational(2).to_povm();
        let r = povm_coherence(&DensityMatrix::basis(2, 1), &comp).unwrap();
        assert_eq!(r.post_measurement_entropies[0], 0.0);
        assert!(r.value.abs() < 1e-14);
    }

    #[test]
    fn via_naimark_examples() {
        let zero = DensityMatrix::basis(2, 0);
        let trine = catalog::trine_povm();
        let ext = catalog::trine_extension().unwrap();
        let v = povm_coherence_via_naimark(&zero, &trine, &ext).unwrap();
        assert!((v - 3f64.log2()).abs() < 1e-12);

        let e1 = catalog::example1_povm(0.25).unwrap();
        let (ext, _) = canonical_extension(&e1).unwrap();
        let v = povm_coherence_via_naimark(&zero, &e1, &ext).unwrap();
        let oracle = -(0.25f64 * 0.25f64.log2() + 0.75 * 0.75f64.log2());
        assert!((v - oracle).abs() < 1e-12);

        let p4 = catalog::four_element_extension().unwrap().with_reference(1).unwrap();
        let v = povm_coherence_via_naimark(&catalog::phase_state(0.0), &catalog::selected_povm_e1(), &p4).unwrap();
        assert!((v - 1.5).abs() < 1e-12);
    }

    #[test]
    fn via_naimark_detects_wrong_extension() {
        let ext = catalog::trine_extension().unwrap();
        let rho = DensityMatrix::new(diag(&[0.9, 0.1])).unwrap();
        let e1 = catalog::example1_povm(0.1).unwrap();
        assert!(matches!(
            povm_coherence_via_naimark(&rho, &e1, &ext),
            Err(Error::DimensionMismatch { .. })
        ));
        let (canon, _) = canonical_extension(&catalog::example1_povm(0.4).unwrap()).unwrap();
        assert!(matches!(
            povm_coherence_via_naimark(&rho, &e1, &canon),
            Err(Error::InconsistentExtension { .. })
        ));
    }

    #[test]
    fn incoherence_examples() {
        let comp = ProjectiveMeasurement::computational(2).to_povm();
        assert!(is_povm_incoherent(&DensityMatrix::new(diag(&[0.3, 0.7])).unwrap(), &comp).unwrap());
        assert!(!is_povm_incoherent(&plus(), &comp).unwrap());

        let e1 = catalog::example1_povm(0.3).unwrap();
        assert!(!is_povm_incoherent(&DensityMatrix::new(diag(&[0.3, 0.7])).unwrap(), &e1).unwrap());

        let trine = catalog::trine_povm();
        for rho in [DensityMatrix::basis(2, 0), DensityMatrix::maximally_mixed(2), plus()] {
            assert!(!is_povm_incoherent(&rho, &trine).unwrap());
        }
    }
}
