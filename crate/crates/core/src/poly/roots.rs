//! Polynomial roots as eigenvalues of a balanced companion matrix.

use std::ops::Deref;

use nalgebra::linalg::Schur;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Polynomial;
use crate::error::{Error, Result};
use crate::Matrix;

pub const DEFAULT_ROOT_TOL: f64 = 1e-9;

/// Complex values with multiplicity, kept sorted by `(re, im)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ComplexMultiset(Vec<Complex64>);

impl ComplexMultiset {
    pub fn new(mut values: Vec<Complex64>) -> Self {
        values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        ComplexMultiset(values)
    }

    pub fn from_real(values: &[f64]) -> Self {
        ComplexMultiset::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.0
    }

    /// Elementwise negation; exact zeros stay `+0.0`.
    pub fn negated(&self) -> ComplexMultiset {
        let zero = Complex64::new(0.0, 0.0);
        ComplexMultiset::new(self.0.iter().map(|z| zero - z).collect())
    }

    pub fn max_norm(&self) -> f64 {
        self.0.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Whether every value has a conjugate partner within `tol`.
    pub fn is_conjugate_closed(&self, tol: f64) -> bool {
        let mut used = vec![false; self.0.len()];
        for i in 0..self.0.len() {
            if used[i] {
                continue;
            }
            let target = self.0[i].conj();
            let partner = (0..self.0.len())
                .filter(|&j| !used[j] && j != i)
                .min_by(|&a, &b| {
                    (self.0[a] - target)
                        .norm()
                        .total_cmp(&(self.0[b] - target).norm())
                });
            if self.0[i].im.abs() <= tol {
                used[i] = true;
                continue;
            }
            match partner {
                Some(j) if (self.0[j] - target).norm() <= tol => {
                    used[i] = true;
                    used[j] = true;
                }
                _ => return false,
            }
        }
        true
    }
}

impl Deref for ComplexMultiset {
    type Target = [Complex64];
    fn deref(&self) -> &[Complex64] {
        &self.0
    }
}

/// All roots of `p` with multiplicity.
///
/// Roots come from the eigenvalues of the balanced companion matrix and are
/// then polished by guarded Newton steps on `p` itself until the residual stops
/// improving or drops below `tol * (1 + |p|)`. Exact zero low-order
/// coefficients yield exact zero roots.
pub fn poly_roots(p: &Polynomial, tol: f64) -> Result<ComplexMultiset> {
    let degree = p.degree().ok_or(Error::ZeroPolynomial)?;
    let c = p.coeffs();
    let zeros = c.iter().take_while(|&&x| x == 0.0).count();
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    let reduced = &c[zeros..];
    let n = degree - zeros;
    if n == 0 {
        return Ok(ComplexMultiset::new(roots));
    }
    let lead = reduced[n];
    let mut companion = Matrix::zeros(n, n);
    for j in 0..n {
        companion[(0, j)] = -reduced[n - 1 - j] / lead;
    }
    for i in 1..n {
        companion[(i, i - 1)] = 1.0;
    }
    balance(&mut companion);
    let eig: Vec<Complex64> = match Schur::try_new(companion.clone(), f64::EPSILON, 10_000) {
        Some(schur) => schur.complex_eigenvalues().iter().copied().collect(),
        None => Schur::new(companion)
            .complex_eigenvalues()
            .iter()
            .copied()
            .collect(),
    };

    let reduced_poly = Polynomial::new(reduced.to_vec());
    let deriv = reduced_poly.derivative();
    let target = tol * (1.0 + reduced_poly.norm());
    let upper: Vec<Complex64> = eig.iter().copied().filter(|z| z.im > 0.0).collect();
    let lower = eig.iter().filter(|z| z.im < 0.0).count();
    if upper.len() == lower {
        for z in eig.iter().filter(|z| z.im == 0.0) {
            roots.push(polish(&reduced_poly, &deriv, *z, target));
        }
        for z in upper {
            let z = polish(&reduced_poly, &deriv, z, target);
            roots.push(z);
            roots.push(z.conj());
        }
    } else {
        roots.extend(
            eig.into_iter()
                .map(|z| polish(&reduced_poly, &deriv, z, target)),
        );
    }
    Ok(ComplexMultiset::new(roots))
}

fn polish(p: &Polynomial, dp: &Polynomial, mut z: Complex64, target: f64) -> Complex64 {
    let mut res = p.eval(z).norm();
    for _ in 0..8 {
        if res <= target * 1e-6 {
            break;
        }
        let d = dp.eval(z);
        if d.norm() == 0.0 {
            break;
        }
        let next = z - p.eval(z) / d;
        let next_res = p.eval(next).norm();
        if next_res.is_nan() || next_res >= res {
            break;
        }
        z = next;
        res = next_res;
    }
    z
}

/// Parlett-Reinsch diagonal similarity balancing, radix 2.
fn balance(a: &mut Matrix) {
    const RADIX: f64 = 2.0;
    let n = a.nrows();
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
    }
}
