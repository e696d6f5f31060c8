//! Precedence constraints `x ≥ A ⊗ x`, block-tridiagonal matrices `M_[K]`
//! and their precedence graphs.

use std::fmt::Write as _;

use num_rational::BigRational;

use crate::error::{MaxPlusError, Result};
use crate::matrix::TropicalMatrix;
use crate::scalar::ExtendedScalar;
use crate::star::{has_positive_circuit, kleene_star};

/// Constraints `x_i ≥ A_ij + x_j`; the arc `j → i` carries weight `A_ij`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrecedenceSystem {
    a: TropicalMatrix,
}

impl PrecedenceSystem {
    pub fn new(a: TropicalMatrix) -> Result<Self> {
        a.require_square()?;
        if a.has_pos_inf() {
            return Err(MaxPlusError::PosInfInput { name: "A" });
        }
        Ok(PrecedenceSystem { a })
    }

    pub fn matrix(&self) -> &TropicalMatrix {
        &self.a
    }
}

/// A real solution of `x ≥ A ⊗ x`, or `None` when `A*` is not ℝmax-valued.
///
/// The witness is `x = A* ⊗ 0`, i.e. the row maxima of `A*`: the least
/// solution dominating the zero vector.
pub fn solve_precedence(p: &PrecedenceSystem) -> Option<Vec<BigRational>> {
    let star = kleene_star(&p.a).expect("square by construction");
    if star.has_pos_inf() {
        return None;
    }
    let zeros = vec![ExtendedScalar::zero(); star.cols()];
    let x = star.apply(&zeros).expect("square by construction");
    // the diagonal of A* is at least 0, so every row maximum is finite
    Some(
        x.into_iter()
            .map(|v| v.as_finite().cloned().expect("finite row maximum"))
            .collect(),
    )
}

/// The blocks `C`, `L`, `R` of the tridiagonal matrices `M_[K]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockMatrixSpec {
    c: TropicalMatrix,
    l: TropicalMatrix,
    r: TropicalMatrix,
}

impl BlockMatrixSpec {
    pub fn new(c: TropicalMatrix, l: TropicalMatrix, r: TropicalMatrix) -> Result<Self> {
        let n = c.rows();
        for (name, block) in [("C", &c), ("L", &l), ("R", &r)] {
            if block.dims() != (n, n) {
                return Err(MaxPlusError::BlockDimensionMismatch {
                    block: name,
                    n,
                    got: block.rows(),
                    got_cols: block.cols(),
                });
            }
            if block.has_pos_inf() {
                return Err(MaxPlusError::PosInfInput { name });
            }
        }
        Ok(BlockMatrixSpec { c, l, r })
    }

    /// Block size `n`.
    pub fn dim(&self) -> usize {
        self.c.rows()
    }

    pub fn c(&self) -> &TropicalMatrix {
        &self.c
    }

    pub fn l(&self) -> &TropicalMatrix {
        &self.l
    }

    pub fn r(&self) -> &TropicalMatrix {
        &self.r
    }
}

/// `M_[K]`: `C` on the block diagonal, `L` above it, `R` below it.
pub fn build_block_matrix(spec: &BlockMatrixSpec, k: usize) -> Result<TropicalMatrix> {
    if k == 0 {
        return Err(MaxPlusError::HorizonTooShort { min: 1, got: 0 });
    }
    let n = spec.dim();
    let mut m = TropicalMatrix::neg_inf(k * n, k * n);
    for b in 0..k {
        m.put_block(b * n, b * n, &spec.c);
        if b + 1 < k {
            m.put_block(b * n, (b + 1) * n, &spec.l);
            m.put_block((b + 1) * n, b * n, &spec.r);
        }
    }
    Ok(m)
}

/// Exact check that the `K`-event-horizon constraints admit a real solution.
pub fn finite_weak_feasibility(spec: &BlockMatrixSpec, k: usize) -> Result<bool> {
    let m = build_block_matrix(spec, k)?;
    Ok(!has_positive_circuit(&m)?)
}

/// Graphviz rendering of the precedence graph of `M_[K]`.
///
/// Nodes are `x_i(k)` in block-major order; arcs are listed by source node,
/// then target node, so identical inputs always give identical bytes.
pub fn export_dot(spec: &BlockMatrixSpec, k: usize) -> Result<String> {
    let m = build_block_matrix(spec, k)?;
    let n = spec.dim();
    let id = |flat: usize| format!("x{}_{}", flat % n + 1, flat / n + 1);
    let mut out = String::new();
    out.push_str("digraph precedence {\n");
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=circle];\n");
    for block in 0..k {
        let _ = write!(
            out,
            "  subgraph cluster_k{} {{\n    label=\"k={}\";\n",
            block + 1,
            block + 1
        );
        for i in 0..n {
            let flat = block * n + i;
            let _ = writeln!(
                out,
                "    {} [label=\"x_{}({})\"];",
                id(flat),
                i + 1,
                block + 1
            );
        }
        out.push_str("  }\n");
    }
    let mut arcs: Vec<(usize, usize, &ExtendedScalar)> =
        m.arcs().map(|(row, col, w)| (col, row, w)).collect();
    arcs.sort_by_key(|&(src, dst, _)| (src, dst));
    for (src, dst, w) in arcs {
        let _ = writeln!(out, "  {} -> {} [label=\"{}\"];", id(src), id(dst), w);
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> TropicalMatrix {
        s.parse().unwrap()
    }

    fn drifting() -> BlockMatrixSpec {
        BlockMatrixSpec::new(
            m("-inf -inf; 0 -inf"),
            m("-inf -inf; -inf -1"),
            m("2 -inf; -inf -inf"),
        )
        .unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter()
            .map(|&x| BigRational::from_integer(x.into()))
            .collect()
    }

    #[test]
    fn unconstrained_solution_is_zero() {
        let p = PrecedenceSystem::new(TropicalMatrix::neg_inf(2, 2)).unwrap();
        assert_eq!(solve_precedence(&p), Some(ints(&[0, 0])));
    }

    #[test]
    fn positive_circuit_has_no_solution() {
        let p = PrecedenceSystem::new(m("-3 -1; 2 -inf")).unwrap();
        assert_eq!(solve_precedence(&p), None);
    }

    #[test]
    fn solution_satisfies_constraints() {
        let a = m("-inf -inf; 0 -inf");
        let p = PrecedenceSystem::new(a.clone()).unwrap();
        let x = solve_precedence(&p).unwrap();
        assert_eq!(x, ints(&[0, 0]));
        let xs: Vec<ExtendedScalar> = x.into_iter().map(ExtendedScalar::Finite).collect();
        let ax = a.apply(&xs).unwrap();
        assert!(xs.iter().zip(&ax).all(|(l, r)| l >= r));
    }

    #[test]
    fn rejects_pos_inf_input() {
        assert_eq!(
            PrecedenceSystem::new(m("+inf")),
            Err(MaxPlusError::PosInfInput { name: "A" })
        );
    }

    #[test]
    fn block_matrix_shapes() {
        let spec = drifting();
        assert_eq!(build_block_matrix(&spec, 1).unwrap(), *spec.c());
        let h = TropicalMatrix::from_blocks(spec.c(), spec.l(), spec.r(), spec.c()).unwrap();
        assert_eq!(build_block_matrix(&spec, 2).unwrap(), h);
        assert!(build_block_matrix(&spec, 0).is_err());
    }

    #[test]
    fn block_matrix_k3_matches_hand_built() {
        // arcs of the first three columns of the infinite graph: x1(k)→x2(k) weight 0,
        // x1(k)→x1(k+1) weight 2, x2(k+1)→x2(k) weight -1
        let expected = m("
            -inf -inf -inf -inf -inf -inf;
               0 -inf -inf   -1 -inf -inf;
               2 -inf -inf -inf -inf -inf;
            -inf -inf    0 -inf -inf   -1;
            -inf -inf    2 -inf -inf -inf;
            -inf -inf -inf -inf    0 -inf");
        assert_eq!(build_block_matrix(&drifting(), 3).unwrap(), expected);
    }

    #[test]
    fn block_dims_checked() {
        let err = BlockMatrixSpec::new(m("0"), m("0 0; 0 0"), m("0")).unwrap_err();
        assert!(matches!(
            err,
            MaxPlusError::BlockDimensionMismatch { block: "L", .. }
        ));
    }

    #[test]
    fn weak_feasibility_per_horizon() {
        let spec = drifting();
        for k in 1..8 {
            assert!(finite_weak_feasibility(&spec, k).unwrap());
        }
        let empty = BlockMatrixSpec::new(
            TropicalMatrix::neg_inf(1, 1),
            TropicalMatrix::neg_inf(1, 1),
            TropicalMatrix::neg_inf(1, 1),
        )
        .unwrap();
        assert!(finite_weak_feasibility(&empty, 1).unwrap());
    }

    #[test]
    fn dot_single_arc() {
        let spec = BlockMatrixSpec::new(
            m("-inf -inf; 0 -inf"),
            TropicalMatrix::neg_inf(2, 2),
            TropicalMatrix::neg_inf(2, 2),
        )
        .unwrap();
        let dot = export_dot(&spec, 1).unwrap();
        let arcs: Vec<&str> = dot.lines().filter(|l| l.contains("->")).collect();
        assert_eq!(arcs, vec!["  x1_1 -> x2_1 [label=\"0\"];"]);
        assert!(dot.contains("x1_1 [label=\"x_1(1)\"]"));
    }

    #[test]
    fn dot_drifting_structure() {
        let dot = export_dot(&drifting(), 5).unwrap();
        let count = |needle: &str| {
            dot.lines()
                .filter(|l| l.contains("->") && l.contains(needle))
                .count()
        };
        assert_eq!(count("[label=\"0\"]"), 5);
        assert_eq!(count("[label=\"2\"]"), 4);
        assert_eq!(count("[label=\"-1\"]"), 4);
        assert!(dot.contains("x1_1 -> x1_2 [label=\"2\"]"));
        assert!(dot.contains("x2_2 -> x2_1 [label=\"-1\"]"));
        assert_eq!(dot, export_dot(&drifting(), 5).unwrap());
    }
}
