//! Characteristic polynomial and adjugate series of `sI + L`.
//!
//! The Faddeev–LeVerrier recursion yields both at once:
//!
//! ```text
//! Q_0 = I
//! g_{N-k} = tr(L Q_{k-1}) / k
//! Q_k = g_{N-k} I - L Q_{k-1}
//! ```
//!
//! so that `det(sI + L) = sum g_i s^i` and `adj(sI + L) = sum_k Q_k s^{N-k-1}`.
//! For a Laplacian, `(Q_k)_{ij}` is the weight of the out-forests with `k` arcs
//! in which `i` lies in a tree rooted at `j`.

use nalgebra::SVD;

use crate::graph::source_component_count;
use crate::poly::{poly_roots, ComplexMultiset, Polynomial};
use crate::Matrix;

/// Default relative singular-value threshold for [`matrix_rank`].
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct ForestSeries {
    char_poly: Polynomial,
    q_matrices: Vec<Matrix>,
}

impl ForestSeries {
    /// `g(s) = det(sI + L)`, monic of degree N.
    pub fn char_poly(&self) -> &Polynomial {
        &self.char_poly
    }

    /// `Q_0 .. Q_{N-1}`.
    pub fn q_matrices(&self) -> &[Matrix] {
        &self.q_matrices
    }

    pub fn dimension(&self) -> usize {
        self.q_matrices.len()
    }

    /// Entry `(row, col)` (0-based) of `adj(sI + L)` as a polynomial in `s`.
    pub fn adjugate_entry(&self, row: usize, col: usize) -> Polynomial {
        let n = self.dimension();
        Polynomial::new(
            (0..n)
                .map(|i| self.q_matrices[n - i - 1][(row, col)])
                .collect(),
        )
    }

    /// `adj(sI + L) * v` as a vector of polynomials, indexed by row.
    pub fn adjugate_times(&self, v: &[f64]) -> Vec<Polynomial> {
        let n = self.dimension();
        (0..n)
            .map(|row| {
                Polynomial::new(
                    (0..n)
                        .map(|i| {
                            let q = &self.q_matrices[n - i - 1];
                            (0..n).map(|col| q[(row, col)] * v[col]).sum()
                        })
                        .collect(),
                )
            })
            .collect()
    }
}

/// Characteristic polynomial and adjugate coefficient matrices of `sI + m`.
///
/// # Panics
/// If `m` is not square.
pub fn faddeev_leverrier(m: &Matrix) -> ForestSeries {
    assert!(m.is_square(), "faddeev_leverrier needs a square matrix");
    let n = m.nrows();
    let mut g = vec![0.0; n + 1];
    g[n] = 1.0;
    let mut q_matrices = Vec::with_capacity(n);
    let mut q = Matrix::identity(n, n);
    for k in 1..=n {
        let lq = m * &q;
        let coeff = lq.trace() / k as f64;
        g[n - k] = coeff;
        q_matrices.push(q);
        q = Matrix::identity(n, n) * coeff - lq;
    }
    ForestSeries {
        char_poly: Polynomial::new(g),
        q_matrices,
    }
}

/// `det(sI + m)`.
pub fn char_poly(m: &Matrix) -> Polynomial {
    faddeev_leverrier(m).char_poly
}

/// Algebraic multiplicity of the zero eigenvalue of a Laplacian, read off its
/// sparsity pattern: one per source component of the underlying digraph.
pub fn zero_eigenvalue_multiplicity(l: &Matrix) -> usize {
    let n = l.nrows();
    let out_adj: Vec<Vec<usize>> = (0..n)
        .map(|u| (0..n).filter(|&v| v != u && l[(v, u)] != 0.0).collect())
        .collect();
    source_component_count(&out_adj, &vec![true; n])
}

/// `det(sI + L)` with the coefficients of `s^0 .. s^{m-1}` set to exactly zero,
/// where `m` is the zero-eigenvalue multiplicity.
pub fn laplacian_char_poly(l: &Matrix) -> Polynomial {
    let m = zero_eigenvalue_multiplicity(l);
    let mut c = char_poly(l).coeffs().to_vec();
    for x in c.iter_mut().take(m) {
        *x = 0.0;
    }
    Polynomial::new(c)
}

/// Eigenvalues of `L` as the negated roots of `det(sI + L)`. Zero eigenvalues
/// are exact.
pub fn laplacian_eigenvalues(l: &Matrix, tol: f64) -> ComplexMultiset {
    poly_roots(&laplacian_char_poly(l), tol)
        .expect("characteristic polynomial is monic")
        .negated()
}

pub fn matrix_power(m: &Matrix, power: usize) -> Matrix {
    (0..power).fold(Matrix::identity(m.nrows(), m.ncols()), |acc, _| &acc * m)
}

/// `(L^m)_{o,c}` with 1-based `o`, `c`.
pub fn laplacian_power_entry(l: &Matrix, m: usize, o: usize, c: usize) -> f64 {
    matrix_power(l, m)[(o - 1, c - 1)]
}

/// Number of singular values above `tol * sigma_max`.
pub fn matrix_rank(m: &Matrix, tol: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = SVD::new(m.clone(), false, false).singular_values;
    let max = sv.iter().fold(0.0f64, |a, &b| a.max(b));
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&x| x > tol * max).count()
}
