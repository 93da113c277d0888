//! Naimark extensions: projective measurements on an enlarged space that
//! reproduce a POVM's statistics on embedded states.
//!
//! Three builders are provided:
//!
//! * [`canonical_extension`] works for any POVM. It attaches an `n`-level
//!   ancilla (`n` = number of outcomes) and completes the isometry
//!   `sum_i sqrt(E_i) (x) |i>` to a unitary `V = sum_{i,a} A_{i,a} (x) |i><a|`.
//!   The projectors are `P_i = V^dagger (I (x) |i><i|) V`.
//! * [`minimal_rank_one_extension`] handles POVMs whose effects are all rank
//!   one, using a direct-sum embedding into `C^n`.
//! * [`fourier_family_extension`] builds the qubit POVM with `d` equally
//!   spaced phases together with its Fourier-basis extension on `C^d`.
//!
//! Composite indices on `C^{d_0} (x) C^n` are `i_system * n + i_ancilla`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measure::{measurement_operators, validate_povm, validate_projective, DensityMatrix, Povm, ProjectiveMeasurement, RANK_TOL};
use crate::qmat::{basis_projector, c64, hermitian_eig, max_abs_diff, outer, tensor_product, ComplexMatrix};
use crate::random;

/// Residual norm below which a Gram-Schmidt candidate is rejected.
const COMPLETION_TOL: f64 = 1e-8;
/// Probability reproduction threshold for a passing verification.
pub const REPRODUCTION_TOL: f64 = 1e-9;

/// How states of the original system enter the Naimark space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Embedding {
    /// `rho -> rho (+) 0`, zero-padded to `target_dim`.
    DirectSum { target_dim: usize },
    /// `rho -> rho (x) |reference><reference|` on an `ancilla_dim`-level ancilla.
    Ancilla { ancilla_dim: usize, reference: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct NaimarkExtension {
    pub measurement: ProjectiveMeasurement,
    pub embedding: Embedding,
    pub source_dim: usize,
}

impl NaimarkExtension {
    pub fn new(measurement: ProjectiveMeasurement, embedding: Embedding, source_dim: usize) -> Result<Self> {
        let d = measurement.dim();
        let expected = match embedding {
            Embedding::DirectSum { target_dim } => {
                if target_dim < source_dim {
                    return Err(Error::DimensionMismatch {
                        expected: source_dim,
                        found: target_dim,
                    });
                }
                target_dim
            }
            Embedding::Ancilla { ancilla_dim, reference } => {
                if reference >= ancilla_dim {
                    return Err(Error::BadSubsystemIndex(reference));
                }
                source_dim * ancilla_dim
            }
        };
        if expected != d {
            return Err(Error::DimensionMismatch { expected, found: d });
        }
        Ok(Self {
            measurement,
            embedding,
            source_dim,
        })
    }

    /// Dimension of the Naimark space.
    pub fn dim(&self) -> usize {
        self.measurement.dim()
    }

    /// Same extension with a different ancilla reference state `|a><a|`.
    pub fn with_reference(&self, reference: usize) -> Result<Self> {
        match self.embedding {
            Embedding::Ancilla { ancilla_dim, .. } => Self::new(
                self.measurement.clone(),
                Embedding::Ancilla { ancilla_dim, reference },
                self.source_dim,
            ),
            Embedding::DirectSum { .. } => Err(Error::NotAncillaStructured),
        }
    }

    /// The embedding as a linear map on matrices.
    fn embed_matrix(&self, m: &ComplexMatrix) -> ComplexMatrix {
        match self.embedding {
            Embedding::DirectSum { target_dim } => {
                let mut out = ComplexMatrix::zeros(target_dim, target_dim);
                out.view_mut((0, 0), (self.source_dim, self.source_dim)).copy_from(m);
                out
            }
            Embedding::Ancilla { ancilla_dim, reference } => {
                tensor_product(m, &basis_projector(ancilla_dim, reference))
            }
        }
    }
}

/// `Phi[rho]`, the state placed into the Naimark space.
pub fn embed_state(rho: &DensityMatrix, ext: &NaimarkExtension) -> Result<DensityMatrix> {
    if rho.dim() != ext.source_dim {
        return Err(Error::DimensionMismatch {
            expected: ext.source_dim,
            found: rho.dim(),
        });
    }
    DensityMatrix::new(ext.embed_matrix(rho.matrix()))
}

/// Operators `A_{i,a}` forming the blocks of the dilation unitary `V`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausBlock {
    /// `operators[i][a]`, outcome `i`, ancilla label `a`.
    pub operators: Vec<Vec<ComplexMatrix>>,
}

impl KrausBlock {
    pub fn get(&self, outcome: usize, label: usize) -> &ComplexMatrix {
        &self.operators[outcome][label]
    }

    pub fn outcomes(&self) -> usize {
        self.operators.len()
    }

    pub fn labels(&self) -> usize {
        self.operators.first().map_or(0, Vec::len)
    }

    fn source_dim(&self) -> usize {
        self.operators.first().and_then(|row| row.first()).map_or(0, |m| m.nrows())
    }

    /// `V = sum_{i,a} A_{i,a} (x) |i><a|`.
    pub fn unitary(&self) -> ComplexMatrix {
        let (n, m) = (self.outcomes(), self.labels());
        let mut v = ComplexMatrix::zeros(self.source_dim() * n, self.source_dim() * m);
        for (i, row) in self.operators.iter().enumerate() {
            for (a, op) in row.iter().enumerate() {
                let unit = outer_basis(n, m, i, a);
                v += tensor_product(op, &unit);
            }
        }
        v
    }

    /// `P_i = sum_{a,b} A_{i,a}^dagger A_{i,b} (x) |a><b|`.
    pub fn projector(&self, outcome: usize) -> ComplexMatrix {
        let m = self.labels();
        let row = &self.operators[outcome];
        let mut p = ComplexMatrix::zeros(self.source_dim() * m, self.source_dim() * m);
        for a in 0..m {
            for b in 0..m {
                p += tensor_product(&(row[a].adjoint() * &row[b]), &outer_basis(m, m, a, b));
            }
        }
        p
    }

    /// Largest entrywise deviation of `sum_a A_{i,a} A_{j,a}^dagger` from `delta_{ij} I`.
    pub fn row_orthogonality_defect(&self) -> f64 {
        let d = self.source_dim();
        let mut worst = 0.0f64;
        for i in 0..self.outcomes() {
            for j in 0..self.outcomes() {
                let mut sum = ComplexMatrix::zeros(d, d);
                for a in 0..self.labels() {
                    sum += self.get(i, a) * self.get(j, a).adjoint();
                }
                if i == j {
                    sum -= ComplexMatrix::identity(d, d);
                }
                worst = worst.max(sum.iter().map(|z| z.norm()).fold(0.0, f64::max));
            }
        }
        worst
    }
}

fn outer_basis(rows: usize, cols: usize, i: usize, j: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(rows, cols);
    m[(i, j)] = c64(1.0, 0.0);
    m
}

/// Extends the orthonormal columns of `isometry` to a square unitary.
///
/// Candidates are standard basis vectors in index order, orthogonalized by
/// modified Gram-Schmidt (two passes); candidates whose residual falls below
/// `COMPLETION_TOL` are skipped.
pub(crate) fn complete_to_unitary(isometry: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = isometry.nrows();
    let mut columns: Vec<Vec<Complex64>> = (0..isometry.ncols())
        .map(|j| isometry.column(j).iter().copied().collect())
        .collect();
    for candidate in 0..n {
        if columns.len() == n {
            break;
        }
        let mut v = vec![Complex64::default(); n];
        v[candidate] = c64(1.0, 0.0);
        for _ in 0..2 {
            for q in &columns {
                let overlap: Complex64 = q.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= overlap * qi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < COMPLETION_TOL {
            continue;
        }
        columns.push(v.into_iter().map(|z| z / norm).collect());
    }
    if columns.len() != n {
        return Err(Error::CompletionFailure(format!(
            "only {} of {n} columns could be completed",
            columns.len()
        )));
    }
    Ok(ComplexMatrix::from_fn(n, n, |i, j| columns[j][i]))
}

fn check_unitary(u: &ComplexMatrix) -> Result<()> {
    let n = u.nrows();
    let defect = crate::qmat::max_abs_diff(&(u.adjoint() * u), &ComplexMatrix::identity(n, n));
    if defect > 1e-8 {
        return Err(Error::CompletionFailure(format!("completed matrix is not unitary ({defect:e})")));
    }
    Ok(())
}

/// Canonical extension on `C^{d_0} (x) C^n` with ancilla reference `|0>`.
///
/// `A_{i,0} = sqrt(E_i)`; the remaining `A_{i,a}` come from completing the
/// first block-column of `V` to a unitary.
pub fn canonical_extension(povm: &Povm) -> Result<(NaimarkExtension, KrausBlock)> {
    let d = povm.dim();
    let n = povm.outcomes();
    let roots = measurement_operators(povm)?;

    // Column t*n of V (label a = 0) has entries A_i[s, t] at row s*n + i.
    let mut isometry = ComplexMatrix::zeros(d * n, d);
    for (i, root) in roots.iter().enumerate() {
        for s in 0..d {
            for t in 0..d {
                isometry[(s * n + i, t)] = root[(s, t)];
            }
        }
    }
    let completed = complete_to_unitary(&isometry)?;
    check_unitary(&completed)?;

    // Completed column d + k fills label a = 1 + k / d, system column t = k % d.
    let slot = |col: usize| -> (usize, usize) {
        if col < d {
            (col, 0)
        } else {
            let k = col - d;
            (k % d, 1 + k / d)
        }
    };
    let mut operators = vec![vec![ComplexMatrix::zeros(d, d); n]; n];
    for col in 0..d * n {
        let (t, a) = slot(col);
        for s in 0..d {
            for (i, row) in operators.iter_mut().enumerate() {
                row[a][(s, t)] = completed[(s * n + i, col)];
            }
        }
    }
    let kraus = KrausBlock { operators };
    let projectors = (0..n).map(|i| kraus.projector(i)).collect();
    let measurement = validate_projective(projectors)
        .map_err(|e| Error::CompletionFailure(format!("assembled projectors invalid: {e}")))?;
    let ext = NaimarkExtension::new(
        measurement,
        Embedding::Ancilla {
            ancilla_dim: n,
            reference: 0,
        },
        d,
    )?;
    Ok((ext, kraus))
}

/// Splits a rank-one PSD operator into `(c, |phi>)` with `E = c |phi><phi|`.
fn rank_one_factor(effect: &ComplexMatrix, index: usize) -> Result<(f64, Vec<Complex64>)> {
    let s = hermitian_eig(effect)?;
    let top = s.eigenvalues[0];
    let rest_max = s.eigenvalues[1..].iter().map(|x| x.abs()).fold(0.0, f64::max);
    if top <= RANK_TOL || rest_max > RANK_TOL {
        return Err(Error::NotRankOne(index));
    }
    Ok((top, s.eigenvectors.column(0).iter().copied().collect()))
}

/// Rank-one extension on `C^n` with a direct-sum embedding.
///
/// Builds `W = sum_k sqrt(c_k) |k><phi_k|`, completes its columns to a
/// unitary `U`, and sets `P_k = U^dagger |k><k| U`.
pub fn minimal_rank_one_extension(povm: &Povm) -> Result<NaimarkExtension> {
    let d = povm.dim();
    let n = povm.outcomes();
    let mut w = ComplexMatrix::zeros(n, d);
    for (k, e) in povm.effects().iter().enumerate() {
        let (weight, phi) = rank_one_factor(e, k)?;
        for j in 0..d {
            w[(k, j)] = phi[j].conj() * weight.sqrt();
        }
    }
    let u = complete_to_unitary(&w)?;
    check_unitary(&u)?;
    let projectors = (0..n)
        .map(|k| {
            let row: Vec<Complex64> = (0..n).map(|j| u[(k, j)].conj()).collect();
            outer(&row, &row)
        })
        .collect();
    let measurement = validate_projective(projectors)
        .map_err(|e| Error::CompletionFailure(format!("assembled projectors invalid: {e}")))?;
    NaimarkExtension::new(measurement, Embedding::DirectSum { target_dim: n }, d)
}

pub(crate) fn is_prime(d: usize) -> bool {
    d >= 2 && (2..).take_while(|k| k * k <= d).all(|k| !d.is_multiple_of(k))
}

/// `exp(2 pi i k / d)`.
pub(crate) fn root_of_unity(d: usize, k: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (k % d) as f64 / d as f64)
}

/// Fourier vector `(1/sqrt d) sum_i nu^{ik mod d} |i>` with `nu = exp(2 pi i / d)`.
pub fn fourier_vector(d: usize, k: usize) -> Vec<Complex64> {
    let norm = 1.0 / (d as f64).sqrt();
    (0..d).map(|i| root_of_unity(d, i * k) * norm).collect()
}

/// Qubit POVM `{(2/d)|phi_k><phi_k|}` with `|phi_k> = (|0> + nu^k |1>)/sqrt 2`,
/// and its Fourier extension `{|varphi_k><varphi_k|}` on `C^d`.
pub fn fourier_family_extension(d: usize) -> Result<(Povm, NaimarkExtension)> {
    if d < 3 || !is_prime(d) {
        return Err(Error::NotPrime(d));
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let effects = (0..d)
        .map(|k| {
            let phi = [c64(h, 0.0), root_of_unity(d, k) * h];
            outer(&phi, &phi) * c64(2.0 / d as f64, 0.0)
        })
        .collect();
    let povm = validate_povm(effects)?;
    let projectors = (0..d)
        .map(|k| {
            let v = fourier_vector(d, k);
            outer(&v, &v)
        })
        .collect();
    let measurement = validate_projective(projectors)?;
    let ext = NaimarkExtension::new(measurement, Embedding::DirectSum { target_dim: d }, 2)?;
    Ok((povm, ext))
}

/// Fourier-family extension for `povm`, provided it is the `n`-outcome family
/// in the listed order.
pub fn fourier_extension_for(povm: &Povm) -> Result<NaimarkExtension> {
    let (family, ext) = fourier_family_extension(povm.outcomes())?;
    if povm.dim() != family.dim() {
        return Err(Error::DimensionMismatch {
            expected: family.dim(),
            found: povm.dim(),
        });
    }
    let deviation = povm
        .effects()
        .iter()
        .zip(family.effects())
        .map(|(a, b)| max_abs_diff(a, b))
        .fold(0.0, f64::max);
    if deviation > REPRODUCTION_TOL {
        return Err(Error::NotFourierFamily { deviation });
    }
    Ok(ext)
}

/// Outcome of [`verify_extension`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerificationReport {
    pub trials: usize,
    /// `max |tr(E_i rho) - tr(P_i Phi[rho])|` over all trial states and outcomes.
    pub max_deviation: f64,
    pub passed: bool,
}

/// Checks probability reproduction on seeded random states.
///
/// Trials alternate between full-rank mixed states and pure states.
pub fn verify_extension(povm: &Povm, ext: &NaimarkExtension, trials: usize, seed: u64) -> Result<VerificationReport> {
    if povm.dim() != ext.source_dim {
        return Err(Error::DimensionMismatch {
            expected: ext.source_dim,
            found: povm.dim(),
        });
    }
    if povm.outcomes() != ext.measurement.outcomes() {
        return Err(Error::DimensionMismatch {
            expected: ext.measurement.outcomes(),
            found: povm.outcomes(),
        });
    }
    let mut rng = random::rng(seed);
    let mut max_deviation = 0.0f64;
    for trial in 0..trials {
        let rho = if trial % 2 == 0 {
            random::random_density(povm.dim(), &mut rng)
        } else {
            random::random_pure(povm.dim(), &mut rng)
        };
        let embedded = embed_state(&rho, ext)?;
        for (e, p) in povm.effects().iter().zip(ext.measurement.projectors()) {
            let dev = (rho.expectation(e) - embedded.expectation(p)).abs();
            max_deviation = max_deviation.max(dev);
        }
    }
    Ok(VerificationReport {
        trials,
        max_deviation,
        passed: max_deviation < REPRODUCTION_TOL,
    })
}

/// The POVMs `E_a = {(I (x) <a|) P_i (I (x) |a>)}_i`, one per ancilla label `a`.
pub fn extract_povm_family(ext: &NaimarkExtension) -> Result<Vec<Povm>> {
    let Embedding::Ancilla { ancilla_dim, .. } = ext.embedding else {
        return Err(Error::NotAncillaStructured);
    };
    let d = ext.source_dim;
    (0..ancilla_dim)
        .map(|a| {
            let effects = ext
                .measurement
                .projectors()
                .iter()
                .map(|p| ComplexMatrix::from_fn(d, d, |s, t| p[(s * ancilla_dim + a, t * ancilla_dim + a)]))
                .collect();
            validate_povm(effects)
        })
        .collect()
}
