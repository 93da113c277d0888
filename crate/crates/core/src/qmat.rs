//! Dense complex linear algebra and entropy primitives.
//!
//! Everything here operates on small dense matrices (dimension up to a few
//! dozen). Eigendecompositions use a cyclic complex Jacobi iteration, which is
//! deterministic for a fixed input and resolves tiny eigenvalues to near
//! machine precision, which matters for the logarithms taken downstream.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measure::DensityMatrix;

/// Dense complex matrix, the carrier for states, effects, projectors and unitaries.
pub type ComplexMatrix = DMatrix<Complex64>;

/// Hermiticity tolerance (max entrywise |m - m^dagger|).
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues in `[-EIGEN_CLIP_TOL, 0)` are roundoff and get clipped to zero.
pub const EIGEN_CLIP_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 64;

/// Shorthand for `Complex64::new`.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `|u><v|` for column vectors `u`, `v` given as slices.
pub fn outer(u: &[Complex64], v: &[Complex64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
}

/// `|k><k|` in dimension `d`.
pub fn basis_projector(d: usize, k: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d, d);
    m[(k, k)] = c64(1.0, 0.0);
    m
}

/// Real diagonal matrix.
pub fn diag(values: &[f64]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(values.len(), values.len());
    for (i, v) in values.iter().enumerate() {
        m[(i, i)] = c64(*v, 0.0);
    }
    m
}

/// Largest entrywise modulus of `m - m^dagger`.
pub fn hermiticity_defect(m: &ComplexMatrix) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn all_finite(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub(crate) fn ensure_square(m: &ComplexMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

/// Eigendecomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Eigenvalues, sorted descending.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    /// `V diag(f(lambda)) V^dagger`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.nrows();
        let mut scaled = v.clone();
        for (k, lambda) in self.eigenvalues.iter().enumerate() {
            let w = f(*lambda);
            for i in 0..n {
                scaled[(i, k)] *= w;
            }
        }
        scaled * v.adjoint()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|x| x)
    }

    /// Eigenvalues with roundoff negatives clipped to zero.
    ///
    /// Fails with `NotPsd` when any eigenvalue is below `-EIGEN_CLIP_TOL`.
    pub fn clipped_eigenvalues(&self) -> Result<Vec<f64>> {
        self.eigenvalues
            .iter()
            .map(|&x| {
                if x < -EIGEN_CLIP_TOL {
                    Err(Error::NotPsd {
                        index: None,
                        eigenvalue: x,
                    })
                } else {
                    Ok(x.max(0.0))
                }
            })
            .collect()
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Eigenvalues come out sorted descending; each eigenvector is rephased so its
/// first non-negligible component is real and positive.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<Spectrum> {
    let n = ensure_square(m)?;
    if !all_finite(m) {
        return Err(Error::NonFinite);
    }
    let deviation = hermiticity_defect(m);
    if deviation > HERMITIAN_TOL {
        return Err(Error::NonHermitian { deviation });
    }

    let mut a = (m + m.adjoint()) * c64(0.5, 0.0);
    let mut v = ComplexMatrix::identity(n, n);
    let scale = a.norm();

    let mut converged = n <= 1 || scale == 0.0;
    let mut sweep = 0;
    while !converged {
        if sweep == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
        }
        sweep += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= 1e-300 || r < 1e-20 * scale {
                    a[(p, q)] = Complex64::default();
                    a[(q, p)] = Complex64::default();
                    continue;
                }
                rotate(&mut a, &mut v, p, q, apq / r, r);
            }
        }
        converged = off_diagonal_norm(&a) <= 1e-15 * scale;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));

    let eigenvalues = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        let phase = (0..n)
            .map(|i| v[(i, k)])
            .find(|z| z.norm() > 1e-8)
            .map(|z| z.conj() / z.norm())
            .unwrap_or(c64(1.0, 0.0));
        for i in 0..n {
            eigenvectors[(i, col)] = v[(i, k)] * phase;
        }
    }
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One Jacobi step zeroing `a[(p,q)] = r * phase`.
///
/// The rotation is `G = diag(1, conj(phase)) * [[c, s], [-s, c]]` on the
/// `(p, q)` plane, applied as `a <- G^dagger a G` and `v <- v G`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, phase: Complex64, r: f64) {
    let n = a.nrows();
    let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let ph = phase.conj();
    let g_pp = c64(c, 0.0);
    let g_pq = c64(s, 0.0);
    let g_qp = ph * (-s);
    let g_qq = ph * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = Complex64::default();
    a[(q, p)] = Complex64::default();
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

/// PSD square root `R` with `R R = m`.
pub fn matrix_sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let spectrum = hermitian_eig(m)?;
    let clipped = spectrum.clipped_eigenvalues()?;
    let s = Spectrum {
        eigenvalues: clipped,
        eigenvectors: spectrum.eigenvectors,
    };
    Ok(s.map(f64::sqrt))
}

/// `-sum x log2 x` over the given weights, with `0 log 0 = 0`.
pub(crate) fn entropy_bits(weights: impl IntoIterator<Item = f64>) -> f64 {
    weights
        .into_iter()
        .filter(|&x| x > 0.0)
        .map(|x| -x * x.log2())
        .sum()
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    // A validated density matrix always has a clean spectrum.
    let spectrum = hermitian_eig(rho.matrix()).expect("validated density matrix");
    entropy_bits(spectrum.eigenvalues.iter().map(|&x| x.max(0.0)))
}

/// Shannon entropy in bits of a probability vector.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    if p.iter().any(|x| !x.is_finite()) {
        return Err(Error::NotDistribution("non-finite entry".into()));
    }
    if let Some(x) = p.iter().find(|&&x| x < -1e-12) {
        return Err(Error::NotDistribution(format!("negative entry {x}")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::NotDistribution(format!("entries sum to {total}")));
    }
    Ok(entropy_bits(p.iter().map(|&x| x.max(0.0))))
}

/// Quantum relative entropy `S(rho || sigma)` in bits.
///
/// Returns `f64::INFINITY` when the support of `rho` is not contained in the
/// support of `sigma`.
pub fn quantum_relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    let neg_entropy = -von_neumann_entropy(rho);
    let s = hermitian_eig(sigma.matrix())?;
    let rotated = s.eigenvectors.adjoint() * rho.matrix() * &s.eigenvectors;

    let mut cross = 0.0;
    let mut kernel_weight = 0.0;
    for (k, &lambda) in s.eigenvalues.iter().enumerate() {
        let w = rotated[(k, k)].re;
        if lambda <= EIGEN_CLIP_TOL {
            kernel_weight += w;
        } else {
            cross += w * lambda.log2();
        }
    }
    if kernel_weight > EIGEN_CLIP_TOL {
        return Ok(f64::INFINITY);
    }
    Ok((neg_entropy - cross).max(0.0))
}

/// Kronecker product; composite index is `i_a * dim_b + i_b`.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Reduced operator on the subsystems listed in `keep`.
///
/// `dims` lists the factor dimensions with the first factor most significant.
/// Kept subsystems appear in ascending order in the result.
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    let n = ensure_square(m)?;
    let total: usize = dims.iter().product();
    if total != n {
        return Err(Error::DimensionMismatch {
            expected: total,
            found: n,
        });
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    for w in kept.windows(2) {
        if w[0] == w[1] {
            return Err(Error::BadSubsystemIndex(w[0]));
        }
    }
    if let Some(&bad) = kept.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::BadSubsystemIndex(bad));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|s| !kept.contains(s)).collect();

    let mut strides = vec![1usize; dims.len()];
    for s in (0..dims.len().saturating_sub(1)).rev() {
        strides[s] = strides[s + 1] * dims[s + 1];
    }
    let offsets = |subsystems: &[usize]| -> Vec<usize> {
        let size: usize = subsystems.iter().map(|&s| dims[s]).product();
        (0..size)
            .map(|mut linear| {
                let mut offset = 0;
                for &s in subsystems.iter().rev() {
                    offset += (linear % dims[s]) * strides[s];
                    linear /= dims[s];
                }
                offset
            })
            .collect()
    };
    let kept_off = offsets(&kept);
    let traced_off = offsets(&traced);

    Ok(ComplexMatrix::from_fn(kept_off.len(), kept_off.len(), |r, c| {
        traced_off
            .iter()
            .map(|&t| m[(kept_off[r] + t, kept_off[c] + t)])
            .sum()
    }))
}

/// Transpose on the second tensor factor of a bipartite operator.
pub fn partial_transpose(m: &ComplexMatrix, dims: [usize; 2]) -> Result<ComplexMatrix> {
    let n = ensure_square(m)?;
    let [da, db] = dims;
    if da * db != n {
        return Err(Error::DimensionMismatch {
            expected: da * db,
            found: n,
        });
    }
    let mut out = ComplexMatrix::zeros(n, n);
    for ia in 0..da {
        for ja in 0..da {
            for ib in 0..db {
                for jb in 0..db {
                    out[(ia * db + jb, ja * db + ib)] = m[(ia * db + ib, ja * db + jb)];
                }
            }
        }
    }
    Ok(out)
}

/// Sum of singular values.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    ensure_square(m)?;
    if hermiticity_defect(m) <= HERMITIAN_TOL {
        let s = hermitian_eig(m)?;
        return Ok(s.eigenvalues.iter().map(|x| x.abs()).sum());
    }
    let gram = m.adjoint() * m;
    let s = hermitian_eig(&gram)?;
    Ok(s.eigenvalues.iter().map(|x| x.max(0.0).sqrt()).sum())
}
