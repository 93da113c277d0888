//! Validated states and measurements, block dephasing, and measurement operators.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qmat::{
    all_finite, ensure_square, hermitian_eig, hermiticity_defect, matrix_sqrt_psd, max_abs_diff, ComplexMatrix,
    EIGEN_CLIP_TOL, HERMITIAN_TOL,
};

/// Tolerance for completeness, idempotence and orthogonality checks.
pub const MEASUREMENT_TOL: f64 = 1e-9;
/// Eigenvalues above this count towards the range of an effect.
pub const RANK_TOL: f64 = 1e-10;

/// A quantum state: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        ensure_square(&mat)?;
        if !all_finite(&mat) {
            return Err(Error::NonFinite);
        }
        let deviation = hermiticity_defect(&mat);
        if deviation > HERMITIAN_TOL {
            return Err(Error::NonHermitian { deviation });
        }
        let trace = mat.trace();
        if (trace.re - 1.0).abs() > 1e-9 || trace.im.abs() > 1e-9 {
            return Err(Error::NotDensity(format!("trace is {trace}")));
        }
        let spectrum = hermitian_eig(&mat)?;
        if let Some(&lowest) = spectrum.eigenvalues.last() {
            if lowest < -EIGEN_CLIP_TOL {
                return Err(Error::NotPsd {
                    index: None,
                    eigenvalue: lowest,
                });
            }
        }
        let mat = (&mat + mat.adjoint()) * Complex64::new(0.5, 0.0);
        Ok(Self { mat })
    }

    /// `|psi><psi|` for a (not necessarily normalized) nonzero vector.
    pub fn pure(amplitudes: &[Complex64]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotDensity("zero or non-finite state vector".into()));
        }
        let psi: Vec<Complex64> = amplitudes.iter().map(|z| z / norm).collect();
        Self::new(crate::qmat::outer(&psi, &psi))
    }

    /// `|k><k|` in dimension `d`.
    pub fn basis(d: usize, k: usize) -> Self {
        Self {
            mat: crate::qmat::basis_projector(d, k),
        }
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            mat: ComplexMatrix::identity(d, d) * Complex64::new(1.0 / d as f64, 0.0),
        }
    }

    /// `weight * self + (1 - weight) * other`.
    pub fn mix(&self, other: &Self, weight: f64) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Self::new(&self.mat * Complex64::new(weight, 0.0) + &other.mat * Complex64::new(1.0 - weight, 0.0))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// `tr(op * rho)`, real part.
    pub fn expectation(&self, op: &ComplexMatrix) -> f64 {
        (op * &self.mat).trace().re
    }
}

fn check_family(ops: &[ComplexMatrix]) -> Result<usize> {
    let first = ops.first().ok_or(Error::Empty)?;
    let d = ensure_square(first)?;
    for op in ops {
        let n = ensure_square(op)?;
        if n != d {
            return Err(Error::DimensionMismatch { expected: d, found: n });
        }
        if !all_finite(op) {
            return Err(Error::NonFinite);
        }
    }
    Ok(d)
}

fn completeness_residual(ops: &[ComplexMatrix], d: usize) -> f64 {
    let sum = ops.iter().fold(ComplexMatrix::zeros(d, d), |acc, op| acc + op);
    max_abs_diff(&sum, &ComplexMatrix::identity(d, d))
}

/// A positive-operator-valued measure with a fixed outcome order.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    effects: Vec<ComplexMatrix>,
    dim: usize,
}

impl Povm {
    pub fn effects(&self) -> &[ComplexMatrix] {
        &self.effects
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn outcomes(&self) -> usize {
        self.effects.len()
    }

    /// Outcome probabilities `tr(E_i rho)`.
    pub fn probabilities(&self, rho: &DensityMatrix) -> Result<Vec<f64>> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rho.dim(),
            });
        }
        Ok(self.effects.iter().map(|e| rho.expectation(e)).collect())
    }
}

/// Validates a list of effects as a POVM, keeping the given outcome order.
pub fn validate_povm(effects: Vec<ComplexMatrix>) -> Result<Povm> {
    let dim = check_family(&effects)?;
    for (index, e) in effects.iter().enumerate() {
        let deviation = hermiticity_defect(e);
        if deviation > HERMITIAN_TOL {
            return Err(Error::NonHermitian { deviation });
        }
        let spectrum = hermitian_eig(e)?;
        let lowest = *spectrum.eigenvalues.last().expect("nonempty");
        if lowest < -EIGEN_CLIP_TOL {
            return Err(Error::NotPsd {
                index: Some(index),
                eigenvalue: lowest,
            });
        }
    }
    let residual = completeness_residual(&effects, dim);
    if residual > MEASUREMENT_TOL {
        return Err(Error::NotComplete { residual });
    }
    Ok(Povm { effects, dim })
}

/// Orthogonal projectors of arbitrary rank summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveMeasurement {
    projectors: Vec<ComplexMatrix>,
    dim: usize,
}

impl ProjectiveMeasurement {
    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of projectors, `d_P`.
    pub fn outcomes(&self) -> usize {
        self.projectors.len()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.projectors.iter().map(|p| p.trace().re.round() as usize).collect()
    }

    /// Rank-one projectors onto the computational basis.
    pub fn computational(d: usize) -> Self {
        Self {
            projectors: (0..d).map(|k| crate::qmat::basis_projector(d, k)).collect(),
            dim: d,
        }
    }

    /// The single-outcome measurement `{I}`.
    pub fn trivial(d: usize) -> Self {
        Self {
            projectors: vec![ComplexMatrix::identity(d, d)],
            dim: d,
        }
    }

    pub fn to_povm(&self) -> Povm {
        Povm {
            effects: self.projectors.clone(),
            dim: self.dim,
        }
    }
}

/// Validates a list of orthogonal projectors summing to the identity.
pub fn validate_projective(projectors: Vec<ComplexMatrix>) -> Result<ProjectiveMeasurement> {
    let dim = check_family(&projectors)?;
    for (i, p) in projectors.iter().enumerate() {
        let deviation = hermiticity_defect(p);
        if deviation > HERMITIAN_TOL {
            return Err(Error::NonHermitian { deviation });
        }
        if max_abs_diff(&(p * p), p) > MEASUREMENT_TOL {
            return Err(Error::NotIdempotent(i));
        }
    }
    for i in 0..projectors.len() {
        for j in (i + 1)..projectors.len() {
            let prod = &projectors[i] * &projectors[j];
            if prod.iter().any(|z| z.norm() > MEASUREMENT_TOL) {
                return Err(Error::NotOrthogonal(i, j));
            }
        }
    }
    let residual = completeness_residual(&projectors, dim);
    if residual > MEASUREMENT_TOL {
        return Err(Error::NotComplete { residual });
    }
    Ok(ProjectiveMeasurement { projectors, dim })
}

/// Block-dephasing map `sum_i P_i rho P_i`.
pub fn block_dephase(rho: &DensityMatrix, p: &ProjectiveMeasurement) -> Result<DensityMatrix> {
    dephase_matrix(rho.matrix(), p).and_then(DensityMatrix::new)
}

pub(crate) fn dephase_matrix(m: &ComplexMatrix, p: &ProjectiveMeasurement) -> Result<ComplexMatrix> {
    if m.nrows() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: m.nrows(),
        });
    }
    Ok(p
        .projectors()
        .iter()
        .fold(ComplexMatrix::zeros(p.dim(), p.dim()), |acc, proj| acc + proj * m * proj))
}

/// Projector onto the range of a PSD operator.
pub fn projective_part(effect: &ComplexMatrix) -> Result<ComplexMatrix> {
    let spectrum = hermitian_eig(effect)?;
    spectrum.clipped_eigenvalues()?;
    Ok(spectrum.map(|x| if x > RANK_TOL { 1.0 } else { 0.0 }))
}

/// Canonical measurement operators `A_i = sqrt(E_i)`.
pub fn measurement_operators(povm: &Povm) -> Result<Vec<ComplexMatrix>> {
    povm.effects()
        .iter()
        .enumerate()
        .map(|(index, e)| {
            matrix_sqrt_psd(e).map_err(|err| match err {
                Error::NotPsd { eigenvalue, .. } => Error::NotPsd {
                    index: Some(index),
                    eigenvalue,
                },
                other => other,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::qmat::{basis_projector, c64, diag, outer};

    #[test]
    fn povm_examples_validate() {
        assert_eq!(
            validate_povm(vec![basis_projector(2, 0), basis_projector(2, 1)])
                .unwrap()
                .outcomes(),
            2
        );
        let e = catalog::example1_povm(0.25).unwrap();
        assert_eq!(e.outcomes(), 2);
        assert_eq!(catalog::trine_povm().outcomes(), 3);
    }

    #[test]
    fn povm_errors() {
        assert_eq!(validate_povm(vec![]), Err(Error::Empty));
        assert!(matches!(
            validate_povm(vec![diag(&[1.0, 1.0]), diag(&[0.0, 0.0, 0.0])]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            validate_povm(vec![diag(&[1.2, 0.5]), diag(&[-0.2, 0.5])]),
            Err(Error::NotPsd { index: Some(1), .. })
        ));
        assert!(matches!(
            validate_povm(vec![diag(&[0.5, 0.5]), diag(&[0.4, 0.5])]),
            Err(Error::NotComplete { .. })
        ));
    }

    #[test]
    fn povm_preserves_order() {
        let effects = vec![basis_projector(2, 1), basis_projector(2, 0)];
        let povm = validate_povm(effects.clone()).unwrap();
        assert_eq!(povm.effects(), &effects[..]);
    }

    #[test]
    fn projective_examples() {
        let p = validate_projective(vec![basis_projector(2, 0), basis_projector(2, 1)]).unwrap();
        assert_eq!(p.outcomes(), 2);
        let block = validate_projective(vec![diag(&[1.0, 1.0, 0.0]), diag(&[0.0, 0.0, 1.0])]).unwrap();
        assert_eq!(block.ranks(), vec![2, 1]);
        let trine = catalog::trine_extension().unwrap();
        assert_eq!(trine.measurement.ranks(), vec![1, 1, 1]);
    }

    #[test]
    fn projective_errors() {
        assert_eq!(
            validate_projective(vec![diag(&[0.5, 0.0]), diag(&[0.5, 1.0])]),
            Err(Error::NotIdempotent(0))
        );
        assert_eq!(
            validate_projective(vec![diag(&[1.0, 0.0]), diag(&[1.0, 1.0])]),
            Err(Error::NotOrthogonal(0, 1))
        );
        assert!(matches!(
            validate_projective(vec![diag(&[1.0, 0.0, 0.0]), diag(&[0.0, 1.0, 0.0])]),
            Err(Error::NotComplete { .. })
        ));
    }

    #[test]
    fn dephasing_examples() {
        let comp = ProjectiveMeasurement::computational(2);
        let d = DensityMatrix::new(diag(&[0.3, 0.7])).unwrap();
        assert_eq!(block_dephase(&d, &comp).unwrap(), d);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = DensityMatrix::pure(&[c64(h, 0.0), c64(h, 0.0)]).unwrap();
        let out = block_dephase(&plus, &comp).unwrap();
        assert!(max_abs_diff(out.matrix(), &diag(&[0.5, 0.5])) < 1e-15);

        let block = validate_projective(vec![diag(&[1.0, 1.0, 0.0]), diag(&[0.0, 0.0, 1.0])]).unwrap();
        let psi = DensityMatrix::pure(&[c64(h, 0.0), c64(h, 0.0), c64(0.0, 0.0)]).unwrap();
        let out = block_dephase(&psi, &block).unwrap();
        assert!(max_abs_diff(out.matrix(), psi.matrix()) < 1e-15);

        assert!(matches!(
            block_dephase(&psi, &comp),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn projective_part_examples() {
        let p0 = basis_projector(2, 0);
        assert!(max_abs_diff(&projective_part(&p0).unwrap(), &p0) < 1e-14);
        let e = catalog::example1_povm(0.3).unwrap();
        let id = ComplexMatrix::identity(2, 2);
        assert!(max_abs_diff(&projective_part(&e.effects()[0]).unwrap(), &id) < 1e-14);
        let out = projective_part(&diag(&[0.3, 0.0, 0.7])).unwrap();
        assert!(max_abs_diff(&out, &diag(&[1.0, 0.0, 1.0])) < 1e-14);
        assert!(matches!(projective_part(&diag(&[1.0, -0.1])), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn measurement_operator_examples() {
        let comp = ProjectiveMeasurement::computational(3).to_povm();
        for (a, e) in measurement_operators(&comp).unwrap().iter().zip(comp.effects()) {
            assert!(max_abs_diff(a, e) < 1e-14);
        }

        let trine = catalog::trine_povm();
        let ops = measurement_operators(&trine).unwrap();
        for (k, a) in ops.iter().enumerate() {
            let phi = catalog::qubit_phase_vector(3, k);
            let expected = outer(&phi, &phi) * c64((2.0f64 / 3.0).sqrt(), 0.0);
            assert!(max_abs_diff(a, &expected) < 1e-14);
        }

        let e1 = catalog::example1_povm(0.25).unwrap();
        let ops = measurement_operators(&e1).unwrap();
        let s3 = 3f64.sqrt() / 2.0;
        assert!(max_abs_diff(&ops[0], &diag(&[0.5, s3])) < 1e-14);
        assert!(max_abs_diff(&ops[1], &diag(&[s3, 0.5])) < 1e-14);
    }
}
