//! Kleene star over ℝ ∪ {−∞, +∞} and the predicates built on it.
//!
//! `A*` is computed with the Floyd-Warshall (Kleene/Lehmann) elimination
//! `D[i][j] ← D[i][j] ⊕ D[i][k] ⊗ (D[k][k])* ⊗ D[k][j]`, where the scalar star
//! of a positive diagonal value is `+∞`. A node lying on a positive-weight
//! circuit therefore saturates every pair it connects during the same sweep,
//! which yields the supremum of path weights over the extended line.

use crate::error::{MaxPlusError, Result};
use crate::matrix::TropicalMatrix;
use crate::par::{self, Execution};
use crate::scalar::ExtendedScalar;

/// Longest-path transitive closure `A⁺ = A ⊕ A² ⊕ …` (no identity term).
pub fn plus_closure(a: &TropicalMatrix) -> Result<TropicalMatrix> {
    let n = a.require_square()?;
    plus_closure_with(a, Execution::default().for_dim(n))
}

pub fn plus_closure_with(a: &TropicalMatrix, exec: Execution) -> Result<TropicalMatrix> {
    let n = a.require_square()?;
    let mut d = a.clone();
    for k in 0..n {
        let pivot = d.get(k, k).star();
        let row_k: Vec<ExtendedScalar> = d.row(k).to_vec();
        let col_k: Vec<ExtendedScalar> = d.column(k);
        par::for_each_row(d.data_mut(), n, exec, |i, row| {
            let lead = col_k[i].otimes(&pivot);
            if lead.is_neg_inf() {
                return;
            }
            for (slot, b) in row.iter_mut().zip(&row_k) {
                if b.is_neg_inf() {
                    continue;
                }
                let cand = lead.otimes(b);
                if cand > *slot {
                    *slot = cand;
                }
            }
        });
    }
    Ok(d)
}

/// `A* = E ⊕ A ⊕ A² ⊕ …` with `+∞` wherever path weights are unbounded.
pub fn kleene_star(a: &TropicalMatrix) -> Result<TropicalMatrix> {
    let n = a.require_square()?;
    kleene_star_with(a, Execution::default().for_dim(n))
}

pub fn kleene_star_with(a: &TropicalMatrix, exec: Execution) -> Result<TropicalMatrix> {
    let mut d = plus_closure_with(a, exec)?;
    for i in 0..d.rows() {
        let diag = d.get(i, i).oplus(&ExtendedScalar::zero());
        d.set(i, i, diag);
    }
    Ok(d)
}

/// True iff the precedence graph of `a` has a circuit of positive weight.
pub fn has_positive_circuit(a: &TropicalMatrix) -> Result<bool> {
    let closure = plus_closure(a)?;
    Ok((0..closure.rows()).any(|i| closure.get(i, i).is_positive()))
}

pub fn is_star_matrix(a: &TropicalMatrix) -> Result<bool> {
    Ok(kleene_star(a)? == *a)
}

/// Membership of `x` in the image of the star matrix `s`, tested as `x = s ⊗ x`.
pub fn image_member(s: &TropicalMatrix, x: &[ExtendedScalar]) -> Result<bool> {
    if !is_star_matrix(s)? {
        return Err(MaxPlusError::NotStarMatrix);
    }
    Ok(s.apply(x)? == x)
}

/// `Im A* = Im B*`, decided as `A* = B*`.
pub fn image_equal(a: &TropicalMatrix, b: &TropicalMatrix) -> Result<bool> {
    if a.dims() != b.dims() {
        return Err(MaxPlusError::DimensionMismatch {
            op: "image_equal",
            left: a.dims(),
            right: b.dims(),
        });
    }
    Ok(kleene_star(a)? == kleene_star(b)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> TropicalMatrix {
        s.parse().unwrap()
    }

    const POSITIVE_TWO_CYCLE: &str = "-3 -1; 2 -inf";

    /// Best weight over all walks of length ≤ `max_len`, by explicit enumeration.
    fn brute_force_star(a: &[Vec<Option<i64>>], max_len: usize) -> Vec<Vec<Option<i64>>> {
        let n = a.len();
        let mut best = vec![vec![None; n]; n];
        fn walk(
            a: &[Vec<Option<i64>>],
            start: usize,
            at: usize,
            w: i64,
            left: usize,
            best: &mut [Vec<Option<i64>>],
        ) {
            let cur = &mut best[at][start];
            if cur.is_none_or(|c| w > c) {
                *cur = Some(w);
            }
            if left == 0 {
                return;
            }
            for next in 0..a.len() {
                if let Some(arc) = a[next][at] {
                    walk(a, start, next, w + arc, left - 1, best);
                }
            }
        }
        for j in 0..n {
            walk(a, j, j, 0, max_len, &mut best);
        }
        best
    }

    #[test]
    fn star_of_neg_inf_is_identity() {
        let eps = TropicalMatrix::neg_inf(2, 2);
        assert_eq!(kleene_star(&eps).unwrap(), TropicalMatrix::identity(2));
    }

    #[test]
    fn star_with_positive_circuit_saturates() {
        let star = kleene_star(&m(POSITIVE_TWO_CYCLE)).unwrap();
        assert_eq!(star, m("+inf +inf; +inf +inf"));
    }

    #[test]
    fn star_of_acyclic_matches_enumeration() {
        let c = [vec![None, None], vec![Some(0), None]];
        let oracle = brute_force_star(&c, 2);
        assert_eq!(oracle, vec![vec![Some(0), None], vec![Some(0), Some(0)]]);
        assert_eq!(
            kleene_star(&m("-inf -inf; 0 -inf")).unwrap(),
            m("0 -inf; 0 0")
        );
    }

    #[test]
    fn saturation_only_through_positive_nodes() {
        // node 0 has a positive loop and feeds node 1; node 2 is disconnected
        let a = m("1 -inf -inf; 0 -inf -inf; -inf -inf -2");
        let star = kleene_star(&a).unwrap();
        assert_eq!(star, m("+inf -inf -inf; +inf 0 -inf; -inf -inf 0"));
    }

    #[test]
    fn zero_weight_circuits_are_benign() {
        let a = m("-inf 3; -3 -inf");
        assert!(!has_positive_circuit(&a).unwrap());
        assert_eq!(kleene_star(&a).unwrap(), m("0 3; -3 0"));
    }

    #[test]
    fn positive_circuit_detection() {
        assert!(has_positive_circuit(&m(POSITIVE_TWO_CYCLE)).unwrap());
        assert!(!has_positive_circuit(&TropicalMatrix::neg_inf(3, 3)).unwrap());
        assert!(!has_positive_circuit(&m("0")).unwrap());
        assert!(has_positive_circuit(&m("1/1000")).unwrap());
    }

    #[test]
    fn star_matrix_predicate() {
        assert!(is_star_matrix(&TropicalMatrix::identity(3)).unwrap());
        assert!(is_star_matrix(&m("0 -inf; 0 0")).unwrap());
        assert!(!is_star_matrix(&m(POSITIVE_TWO_CYCLE)).unwrap());
        assert!(matches!(
            is_star_matrix(&m("0 1")),
            Err(MaxPlusError::NotSquare { .. })
        ));
    }

    #[test]
    fn image_membership() {
        let s = m("0 -inf; 0 0");
        let v = |a: &str, b: &str| vec![a.parse().unwrap(), b.parse().unwrap()];
        assert!(image_member(&TropicalMatrix::identity(2), &v("3", "-inf")).unwrap());
        assert!(image_member(&s, &v("0", "0")).unwrap());
        assert!(!image_member(&s, &v("0", "-1")).unwrap());
        assert_eq!(
            image_member(&m(POSITIVE_TWO_CYCLE), &v("0", "0")),
            Err(MaxPlusError::NotStarMatrix)
        );
        assert!(matches!(
            image_member(&s, &v("0", "0")[..1]),
            Err(MaxPlusError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn image_equality() {
        let a = m("-inf 2; -5 -inf");
        assert!(image_equal(&a, &a).unwrap());
        assert!(image_equal(&TropicalMatrix::neg_inf(2, 2), &TropicalMatrix::identity(2)).unwrap());
        assert!(!image_equal(&m(POSITIVE_TWO_CYCLE), &TropicalMatrix::neg_inf(2, 2)).unwrap());
    }

    #[test]
    fn parallel_star_matches_sequential() {
        let n = 48;
        let data: Vec<ExtendedScalar> = (0..n * n)
            .map(|k| match (k * 2654435761usize) % 7 {
                0..=3 => ExtendedScalar::NegInf,
                r => ExtendedScalar::from_int(-(r as i64) - (k % 5) as i64),
            })
            .collect();
        let a = TropicalMatrix::new(n, n, data).unwrap();
        assert_eq!(
            kleene_star_with(&a, Execution::Sequential).unwrap(),
            kleene_star_with(&a, Execution::Parallel).unwrap()
        );
    }
}
