//! Numerators from grounded Laplacians: removing the vertices of a path from
//! `L` leaves a principal submatrix whose characteristic polynomial carries
//! the transfer-function zeros.

use crate::error::{Error, Result};
use crate::graph::{enumerate_simple_paths, path_weight, reduced_laplacian, WeightedDigraph};
use crate::poly::Polynomial;
use crate::spectral::char_poly;

/// Default cap on the number of simple paths summed by [`multi_path_numerator`].
pub const DEFAULT_PATH_CAP: usize = 10_000;

/// `det(sI + L')` where `L'` is `L` without the listed vertices; 1 when
/// nothing is left.
fn grounded_char_poly(g: &WeightedDigraph, removed: &[usize]) -> Result<Polynomial> {
    match reduced_laplacian(g, removed) {
        Ok(l) => Ok(char_poly(&l)),
        Err(Error::RemovesAllVertices) => Ok(Polynomial::one()),
        Err(e) => Err(e),
    }
}

/// Numerator for `c = o`: the characteristic polynomial of `L` with row and
/// column `c` deleted.
pub fn collocated_numerator(g: &WeightedDigraph, c: usize) -> Result<Polynomial> {
    grounded_char_poly(g, &[c])
}

/// Numerator when exactly one simple path joins `c` to `o`: its weight times
/// the characteristic polynomial of `L` with the path vertices removed.
pub fn one_path_numerator(g: &WeightedDigraph, c: usize, o: usize) -> Result<Polynomial> {
    // enumeration stops at the second path; `count` is then a lower bound
    let paths = enumerate_simple_paths(g, c, o, 2).map_err(|e| match e {
        Error::PathCapExceeded { .. } => Error::PathNotUnique {
            from: c,
            to: o,
            count: 2,
        },
        e => e,
    })?;
    let [path] = paths.as_slice() else {
        return Err(Error::PathNotUnique {
            from: c,
            to: o,
            count: paths.len(),
        });
    };
    Ok(grounded_char_poly(g, path.vertices())?.scale(path_weight(g, path)))
}

/// Sum over all simple `c -> o` paths of path weight times the grounded
/// characteristic polynomial. Fails when more than `cap` paths exist.
pub fn multi_path_numerator(
    g: &WeightedDigraph,
    c: usize,
    o: usize,
    cap: usize,
) -> Result<Polynomial> {
    enumerate_simple_paths(g, c, o, cap)?
        .iter()
        .try_fold(Polynomial::zero(), |acc, p| {
            Ok(&acc + &grounded_char_poly(g, p.vertices())?.scale(path_weight(g, p)))
        })
}
