use nalgebra::{Schur, SVD};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::CMatrix;
use crate::poly::RationalFunction;
use crate::spectral::matrix_power;
use crate::Matrix;

/// Largest accepted condition number of the eigenvector matrix.
pub const MAX_EIGENVECTOR_COND: f64 = 1e8;

/// `L = V diag(lambda) V^{-1}`, accepted only when `V` is well conditioned.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub vectors: CMatrix,
    pub values: Vec<Complex64>,
    pub inverse: CMatrix,
    pub condition: f64,
}

fn to_complex(m: &Matrix) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

fn singular_values_sorted(m: &CMatrix) -> Vec<f64> {
    let mut sv: Vec<f64> = SVD::new(m.clone(), false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

impl EigenDecomposition {
    /// Eigenvalues from a Schur form; eigenvalues closer than a small
    /// tolerance are grouped and given the null space of `L - mu I` as their
    /// eigenvectors. `Err` carries the reason the matrix was rejected.
    pub fn new(l: &Matrix) -> Result<Self, String> {
        let n = l.nrows();
        let scale = l.norm().max(1.0);
        let values: Vec<Complex64> = Schur::try_new(l.clone(), f64::EPSILON, 10_000)
            .ok_or("Schur iteration did not converge")?
            .complex_eigenvalues()
            .iter()
            .copied()
            .collect();
        let mut sorted = values.clone();
        sorted.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));

        let cluster_tol = 1e-6 * scale;
        let mut clusters: Vec<Vec<Complex64>> = Vec::new();
        for z in sorted {
            match clusters
                .iter_mut()
                .find(|c| (c[0] - z).norm() <= cluster_tol)
            {
                Some(c) => c.push(z),
                None => clusters.push(vec![z]),
            }
        }

        let lc = to_complex(l);
        let mut vectors = CMatrix::zeros(n, n);
        let mut ordered = Vec::with_capacity(n);
        for cluster in &clusters {
            let mu = cluster.iter().sum::<Complex64>() / cluster.len() as f64;
            let shifted = &lc - CMatrix::identity(n, n) * mu;
            let svd = SVD::new(shifted, false, true);
            let v_t = svd.v_t.ok_or("SVD failed")?;
            let mut idx: Vec<usize> = (0..n).collect();
            idx.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
            let m = cluster.len();
            if svd.singular_values[idx[m - 1]] > 1e-6 * scale {
                return Err("defective eigenvalue".into());
            }
            for &i in &idx[..m] {
                let col = ordered.len();
                for r in 0..n {
                    vectors[(r, col)] = v_t[(i, r)].conj();
                }
                ordered.push(mu);
            }
        }

        let sv = singular_values_sorted(&vectors);
        let condition = sv[0] / sv[n - 1];
        if condition.is_nan() || condition > MAX_EIGENVECTOR_COND {
            return Err("ill-conditioned V".into());
        }
        let inverse = vectors.clone().try_inverse().ok_or("singular V")?;
        let lambda = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(ordered.clone()));
        let residual = (&lc * &vectors - &vectors * lambda).norm();
        if residual > 1e-7 * scale {
            return Err("eigen residual too large".into());
        }
        Ok(EigenDecomposition {
            vectors,
            values: ordered,
            inverse,
            condition,
        })
    }

    /// `rho_i = (V^{-1})_{ic}` for 1-based `c`.
    pub fn rho(&self, c: usize) -> Vec<Complex64> {
        self.inverse.column(c - 1).iter().copied().collect()
    }

    /// `sum_i rho_i v_oi lambda_i^k`.
    pub fn eigensum(&self, o: usize, c: usize, k: u32) -> Complex64 {
        let rho = self.rho(c);
        (0..self.values.len())
            .map(|i| rho[i] * self.vectors[(o - 1, i)] * self.values[i].powu(k))
            .sum()
    }
}

/// Modal evaluation `sum_i v_oi rho_i phi / (psi + lambda_i phi)`: one
/// scalar feedback loop per eigenvalue.
pub fn modal_tf_eval(
    decomp: &EigenDecomposition,
    c: usize,
    o: usize,
    m: &RationalFunction,
    s: Complex64,
) -> Complex64 {
    let psi = m.den().eval(s);
    let phi = m.num().eval(s);
    let rho = decomp.rho(c);
    (0..decomp.values.len())
        .map(|i| decomp.vectors[(o - 1, i)] * rho[i] * phi / (psi + decomp.values[i] * phi))
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum IdentityStatus {
    Checked { max_err: f64, pass: bool },
    Skipped { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    /// Number of `(k, o, c)` triples compared.
    pub checks: usize,
    #[serde(flatten)]
    pub status: IdentityStatus,
}

impl IdentityReport {
    /// A skipped check does not count as a failure.
    pub fn ok(&self) -> bool {
        !matches!(self.status, IdentityStatus::Checked { pass: false, .. })
    }
}

/// Check `sum_i rho_i v_oi lambda_i^k = (L^k)_{oc}` for `k = 0..=k_max` and
/// every pair `(o, c)`. Errors are relative to the largest entry of `L^k`.
pub fn eigensum_identity_check(l: &Matrix, k_max: usize, tol: f64) -> IdentityReport {
    let decomp = match EigenDecomposition::new(l) {
        Ok(d) => d,
        Err(reason) => {
            return IdentityReport {
                checks: 0,
                status: IdentityStatus::Skipped {
                    reason: format!("skipped: {reason}"),
                },
            }
        }
    };
    let n = l.nrows();
    let mut max_err = 0.0f64;
    let mut checks = 0;
    for k in 0..=k_max {
        let lk = matrix_power(l, k);
        let scale = lk.amax().max(1.0);
        for o in 1..=n {
            for c in 1..=n {
                let err = (decomp.eigensum(o, c, k as u32) - lk[(o - 1, c - 1)]).norm() / scale;
                max_err = max_err.max(err);
                checks += 1;
            }
        }
    }
    IdentityReport {
        checks,
        status: IdentityStatus::Checked {
            max_err,
            pass: max_err <= tol,
        },
    }
}
