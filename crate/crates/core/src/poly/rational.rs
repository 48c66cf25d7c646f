use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Polynomial;
use crate::error::{Error, Result};

/// Numerator/denominator pair. Never cancels common factors implicitly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRational")]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

#[derive(Deserialize)]
struct RawRational {
    num: Polynomial,
    den: Polynomial,
}

impl TryFrom<RawRational> for RationalFunction {
    type Error = Error;
    fn try_from(raw: RawRational) -> Result<Self> {
        RationalFunction::new(raw.num, raw.den)
    }
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(RationalFunction { num, den })
    }

    pub fn from_coeffs(num: &[f64], den: &[f64]) -> Result<Self> {
        RationalFunction::new(Polynomial::new(num.to_vec()), Polynomial::new(den.to_vec()))
    }

    pub fn one() -> Self {
        RationalFunction {
            num: Polynomial::one(),
            den: Polynomial::one(),
        }
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.num.eval(s) / self.den.eval(s)
    }

    /// Unreduced product.
    pub fn mul(&self, other: &RationalFunction) -> RationalFunction {
        RationalFunction {
            num: &self.num * &other.num,
            den: &self.den * &other.den,
        }
    }

    pub fn scale(&self, alpha: f64) -> RationalFunction {
        RationalFunction {
            num: self.num.scale(alpha),
            den: self.den.clone(),
        }
    }

    pub fn relative_degree(&self) -> Result<i64> {
        rational_relative_degree(self)
    }
}

/// `deg(den) - deg(num)`.
pub fn rational_relative_degree(r: &RationalFunction) -> Result<i64> {
    let num = r.num.degree().ok_or(Error::ZeroNumerator)?;
    let den = r.den.degree().ok_or(Error::ZeroDenominator)?;
    Ok(den as i64 - num as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_degrees() {
        let m = RationalFunction::from_coeffs(&[1.0, 1.0], &[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(m.relative_degree().unwrap(), 1);
        assert_eq!(RationalFunction::one().relative_degree().unwrap(), 0);
        let z = RationalFunction::from_coeffs(&[], &[1.0]).unwrap();
        assert_eq!(z.relative_degree().unwrap_err(), Error::ZeroNumerator);
        assert_eq!(
            RationalFunction::from_coeffs(&[1.0], &[0.0]).unwrap_err(),
            Error::ZeroDenominator
        );
    }

    #[test]
    fn json_shape() {
        let r: RationalFunction = serde_json::from_str(r#"{"num":[1,1],"den":[0,0,1]}"#).unwrap();
        assert_eq!(r.num().coeffs(), &[1.0, 1.0]);
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"num":[1.0,1.0],"den":[0.0,0.0,1.0]}"#
        );
        assert!(serde_json::from_str::<RationalFunction>(r#"{"num":[1],"den":[0]}"#).is_err());
    }
}
