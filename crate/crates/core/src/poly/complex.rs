use std::ops::Mul;

use num_complex::Complex64;

use super::Polynomial;

/// Complex-coefficient polynomial, ascending powers.
///
/// Only needed while a closed-loop factor carries a complex gain; conjugate
/// factors are multiplied back together before anything leaves this module.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPolynomial {
    coeffs: Vec<Complex64>,
}

impl ComplexPolynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| c.re == 0.0 && c.im == 0.0) {
            coeffs.pop();
        }
        ComplexPolynomial { coeffs }
    }

    pub fn from_real(p: &Polynomial) -> Self {
        ComplexPolynomial::new(p.coeffs().iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn one() -> Self {
        ComplexPolynomial::new(vec![Complex64::new(1.0, 0.0)])
    }

    /// Monic `prod (s - r)`.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        roots.iter().fold(ComplexPolynomial::one(), |acc, &r| {
            &acc * &ComplexPolynomial::new(vec![-r, Complex64::new(1.0, 0.0)])
        })
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn conj(&self) -> Self {
        ComplexPolynomial::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c)
    }

    /// Largest `|Im c|` relative to the largest `|c|`.
    pub fn relative_imag_residue(&self) -> f64 {
        let scale = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm()));
        if scale == 0.0 {
            return 0.0;
        }
        self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.im.abs())) / scale
    }

    /// Real parts of the coefficients.
    pub fn real_part(&self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c.re).collect())
    }
}

impl Mul for &ComplexPolynomial {
    type Output = ComplexPolynomial;
    fn mul(self, rhs: &ComplexPolynomial) -> ComplexPolynomial {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return ComplexPolynomial::new(Vec::new());
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ComplexPolynomial::new(out)
    }
}

/// Characteristic polynomial `psi + k * phi` of the output-feedback loop with
/// open loop `phi / psi` and gain `k`.
pub fn closed_loop_factor(psi: &Polynomial, phi: &Polynomial, k: Complex64) -> ComplexPolynomial {
    let n = psi.coeffs().len().max(phi.coeffs().len());
    ComplexPolynomial::new(
        (0..n)
            .map(|i| Complex64::new(psi.coeff(i), 0.0) + k * phi.coeff(i))
            .collect(),
    )
}
