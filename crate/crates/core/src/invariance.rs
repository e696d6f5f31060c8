//! Controlled invariance for the lifted system `x̄(k) = [x(k−1); x(k)]`.
//!
//! The constraint set is `K = Im H*` with `H = [[C, L], [R, C]]`, and the
//! iterates of the shrinking map φ are `φᵏ(K) = Im S_{k+2}` with
//!
//! ```text
//! S_{k+2} = [ Π_{k+1}              Π_{k+1} L (Π_k ⊕ Ψ)* ]
//!           [ (Π_k ⊕ Ψ)* R Π_{k+1}  (Π_k ⊕ Ψ)*          ]     Ψ = (R C* L ⊕ C)*
//! ```
//!
//! `S_{k+2}` is also the top-left `2n × 2n` block of `M*_[k+2]`; that slower
//! route is kept as [`s_matrix_oracle`] for cross-checking.

use crate::error::Result;
use crate::matrix::TropicalMatrix;
use crate::precedence::build_block_matrix;
use crate::pteg::{check_consistency, ConsistencyVerdict, PiIter, PtegSystem};
use crate::scalar::ExtendedScalar;
use crate::star::{image_member, kleene_star};

/// `x̄(k+1) = Ā x̄(k) ⊕ B̄ u(k)` with constraint matrix `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedSystem {
    abar: TropicalMatrix,
    bbar: TropicalMatrix,
    h: TropicalMatrix,
}

impl LiftedSystem {
    pub fn abar(&self) -> &TropicalMatrix {
        &self.abar
    }

    pub fn bbar(&self) -> &TropicalMatrix {
        &self.bbar
    }

    pub fn h(&self) -> &TropicalMatrix {
        &self.h
    }

    /// Original state dimension `n`.
    pub fn dim(&self) -> usize {
        self.bbar.cols()
    }
}

pub fn lift_system(sys: &PtegSystem) -> LiftedSystem {
    let n = sys.dim();
    let e = TropicalMatrix::identity(n);
    let eps = TropicalMatrix::neg_inf(n, n);
    let abar = TropicalMatrix::from_blocks(&eps, &e, &eps, &eps).expect("n×n blocks");
    let mut bbar = TropicalMatrix::neg_inf(2 * n, n);
    bbar.put_block(n, 0, &e);
    let h = TropicalMatrix::from_blocks(sys.c(), sys.l(), &sys.r(), sys.c()).expect("n×n blocks");
    LiftedSystem { abar, bbar, h }
}

/// `Ψ = (R ⊗ C* ⊗ L ⊕ C)*`.
pub fn psi(sys: &PtegSystem) -> TropicalMatrix {
    let c_star = kleene_star(sys.c()).expect("square");
    let inner = sys
        .r()
        .otimes(&c_star)
        .and_then(|m| m.otimes(sys.l()))
        .and_then(|m| m.oplus(sys.c()))
        .expect("blocks share dimension");
    kleene_star(&inner).expect("square")
}

fn assemble_s(
    pi_k: &TropicalMatrix,
    pi_next: &TropicalMatrix,
    psi: &TropicalMatrix,
    l: &TropicalMatrix,
    r: &TropicalMatrix,
) -> TropicalMatrix {
    let q = kleene_star(&pi_k.oplus(psi).expect("n×n")).expect("square");
    let top_right = pi_next.otimes(l).and_then(|m| m.otimes(&q)).expect("n×n");
    let bottom_left = q.otimes(r).and_then(|m| m.otimes(pi_next)).expect("n×n");
    TropicalMatrix::from_blocks(pi_next, &top_right, &bottom_left, &q).expect("n×n blocks")
}

/// `S_{k+2}` from the closed-form block formula.
pub fn s_matrix(sys: &PtegSystem, k: usize) -> TropicalMatrix {
    let mut pis = PiIter::new(sys).skip(k);
    let pi_k = pis.next().expect("infinite iterator");
    let pi_next = pis.next().expect("infinite iterator");
    assemble_s(&pi_k, &pi_next, &psi(sys), sys.l(), &sys.r())
}

/// `S_{k+2}` as the leading `2n × 2n` block of `M*_[k+2]`.
pub fn s_matrix_oracle(sys: &PtegSystem, k: usize) -> Result<TropicalMatrix> {
    let n = sys.dim();
    let m = build_block_matrix(&sys.block_spec(), k + 2)?;
    Ok(kleene_star(&m)?.submatrix(0, 0, 2 * n, 2 * n))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PhiClass {
    /// φ reaches a fixed point whose image contains real vectors.
    ConvergedNonEmpty,
    /// Some φᵏ(K) has no real vector.
    RealEmptyAtStep,
    /// Every computed `S` is finite and the sequence never repeated.
    NonConvergentWeakOpen,
}

impl PhiClass {
    pub fn name(self) -> &'static str {
        match self {
            PhiClass::ConvergedNonEmpty => "ConvergedNonEmpty",
            PhiClass::RealEmptyAtStep => "RealEmptyAtStep",
            PhiClass::NonConvergentWeakOpen => "NonConvergentWeakOpen",
        }
    }
}

/// Result of iterating φ through the `S` matrices.
///
/// `step` depends on the class:
/// * `ConvergedNonEmpty`: least `k` with `S_{k+3}` equal to the fixed point;
///   `kstar_generator` is that fixed point, `s_matrices[step + 1]`.
/// * `RealEmptyAtStep`: least `k` such that `S_{k+2}` has a `+∞` entry.
/// * `NonConvergentWeakOpen`: last `k` examined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiReport {
    /// `S₂, S₃, …` in order, up to the matrix that ended the iteration.
    pub s_matrices: Vec<TropicalMatrix>,
    pub classification: PhiClass,
    pub step: usize,
    pub kstar_generator: Option<TropicalMatrix>,
}

/// Iterates φ until `S` repeats, diverges, or the probe bound is reached
/// (default `10·n²`, never below `n² + 2`).
pub fn phi_iterate(sys: &PtegSystem, probe_bound: Option<usize>) -> PhiReport {
    let bound = sys.effective_probe_bound(probe_bound);
    let psi = psi(sys);
    let (l, r) = (sys.l().clone(), sys.r());
    let mut pis = PiIter::new(sys);
    let mut pi_k = pis.next().expect("infinite iterator");
    let mut s_matrices: Vec<TropicalMatrix> = Vec::new();

    for k in 0..bound {
        let pi_next = pis.next().expect("infinite iterator");
        let s = assemble_s(&pi_k, &pi_next, &psi, &l, &r);
        let diverged = s.has_pos_inf();
        let repeated = s_matrices.last() == Some(&s);
        s_matrices.push(s);
        if diverged {
            return PhiReport {
                s_matrices,
                classification: PhiClass::RealEmptyAtStep,
                step: k,
                kstar_generator: None,
            };
        }
        if repeated {
            // S_{k+1} = S_{k+2}: the fixed point was first reached at S_{k+1}
            let first_fixed = k - 1;
            let generator = s_matrices[first_fixed].clone();
            return PhiReport {
                s_matrices,
                classification: PhiClass::ConvergedNonEmpty,
                step: first_fixed.saturating_sub(1),
                kstar_generator: Some(generator),
            };
        }
        pi_k = pi_next;
    }
    PhiReport {
        s_matrices,
        classification: PhiClass::NonConvergentWeakOpen,
        step: bound - 1,
        kstar_generator: None,
    }
}

/// Generator `S` with `Im S = K*` when `K*` contains real vectors.
pub fn maximal_invariant(sys: &PtegSystem) -> Option<TropicalMatrix> {
    phi_iterate(sys, None).kstar_generator
}

pub fn invariant_member(generator: &TropicalMatrix, xbar: &[ExtendedScalar]) -> Result<bool> {
    image_member(generator, xbar)
}

/// One admissible successor `[x₂; x₃]` of `x̄ = [x₁; x₂]` under a converged
/// generator, with `x₃ = (Π_∞ ⊕ Ψ)* ⊗ R ⊗ x₂`. The factor `(Π_∞ ⊕ Ψ)*` is
/// the bottom-right block of the generator.
pub fn successor_state(
    sys: &PtegSystem,
    generator: &TropicalMatrix,
    xbar: &[ExtendedScalar],
) -> Result<Vec<ExtendedScalar>> {
    let n = sys.dim();
    let q = generator.submatrix(n, n, n, n);
    let x2 = xbar.get(n..).filter(|tail| tail.len() == n).ok_or(
        crate::error::MaxPlusError::DimensionMismatch {
            op: "successor_state",
            left: generator.dims(),
            right: (xbar.len(), 1),
        },
    )?;
    let x3 = q.otimes(&sys.r())?.apply(x2)?;
    Ok(x2.iter().cloned().chain(x3).collect())
}

/// Both decision procedures on one system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Analysis {
    pub verdict: ConsistencyVerdict,
    pub phi: PhiReport,
}

impl Analysis {
    /// The class-by-class correspondence between the two procedures.
    pub fn coherent(&self) -> bool {
        matches!(
            (&self.verdict, self.phi.classification),
            (
                ConsistencyVerdict::Consistent { .. },
                PhiClass::ConvergedNonEmpty
            ) | (
                ConsistencyVerdict::NotWeaklyConsistent { .. },
                PhiClass::RealEmptyAtStep
            ) | (
                ConsistencyVerdict::NotConsistentWeakOpen { .. },
                PhiClass::NonConvergentWeakOpen
            )
        )
    }
}

/// Runs [`check_consistency`] and [`phi_iterate`] with the same probe bound.
pub fn analyze(sys: &PtegSystem, probe_bound: Option<usize>) -> Analysis {
    let analysis = Analysis {
        verdict: check_consistency(sys, probe_bound),
        phi: phi_iterate(sys, probe_bound),
    };
    debug_assert!(analysis.coherent(), "verdicts disagree: {analysis:?}");
    analysis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> TropicalMatrix {
        s.parse().unwrap()
    }

    fn drifting() -> PtegSystem {
        PtegSystem::new(
            m("2 -inf; -inf -inf"),
            m("-inf -inf; -inf -1"),
            m("-inf -inf; 0 -inf"),
            TropicalMatrix::neg_inf(2, 2),
        )
        .unwrap()
    }

    fn trivial(n: usize) -> PtegSystem {
        let e = TropicalMatrix::neg_inf(n, n);
        PtegSystem::new(e.clone(), e.clone(), e.clone(), e).unwrap()
    }

    #[test]
    fn lift_drifting() {
        let lifted = lift_system(&drifting());
        assert_eq!(
            *lifted.h(),
            m("-inf -inf -inf -inf;
                  0 -inf -inf   -1;
                  2 -inf -inf -inf;
               -inf -inf    0 -inf")
        );
        assert_eq!(
            *lifted.abar(),
            m("-inf -inf 0 -inf; -inf -inf -inf 0; -inf -inf -inf -inf; -inf -inf -inf -inf")
        );
        assert_eq!(*lifted.bbar(), m("-inf -inf; -inf -inf; 0 -inf; -inf 0"));
        assert_eq!(lifted.dim(), 2);
    }

    #[test]
    fn lift_trivial() {
        let lifted = lift_system(&trivial(2));
        assert_eq!(*lifted.h(), TropicalMatrix::neg_inf(4, 4));
        assert_eq!(*lifted.abar(), lift_system(&drifting()).abar().clone());
    }

    #[test]
    fn psi_values() {
        assert_eq!(psi(&trivial(3)), TropicalMatrix::identity(3));
        // R C* L vanishes for this system, leaving C*
        assert_eq!(psi(&drifting()), m("0 -inf; 0 0"));
    }

    #[test]
    fn trivial_s_is_identity() {
        for k in 0..4 {
            assert_eq!(s_matrix(&trivial(2), k), TropicalMatrix::identity(4));
        }
        let report = phi_iterate(&trivial(2), None);
        assert_eq!(report.classification, PhiClass::ConvergedNonEmpty);
        assert_eq!(report.step, 0);
        assert_eq!(report.kstar_generator, Some(TropicalMatrix::identity(4)));
    }

    #[test]
    fn drifting_s_closed_form() {
        let sys = drifting();
        for k in 0..6i64 {
            let expected = m(&format!(
                "0 -inf -inf -inf; {} 0 {} -1; 2 -inf 0 -inf; {} -inf {} 0",
                1 + k,
                k - 1,
                2 + k,
                k
            ));
            assert_eq!(s_matrix(&sys, k as usize), expected, "k = {k}");
            assert_eq!(
                s_matrix_oracle(&sys, k as usize).unwrap(),
                expected,
                "k = {k}"
            );
        }
    }

    #[test]
    fn drifting_never_converges() {
        let report = phi_iterate(&drifting(), Some(30));
        assert_eq!(report.classification, PhiClass::NonConvergentWeakOpen);
        assert_eq!(report.step, 29);
        assert_eq!(report.s_matrices.len(), 30);
        assert_eq!(maximal_invariant(&drifting()), None);
    }

    #[test]
    fn member_delegates_to_image() {
        let gen = TropicalMatrix::identity(4);
        let x: Vec<ExtendedScalar> = ["1", "-inf", "3", "0"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        assert!(invariant_member(&gen, &x).unwrap());
        assert!(invariant_member(&m("1 0; 0 0"), &x[..2]).is_err());
    }

    #[test]
    fn analysis_coherent_on_drifting() {
        let a = analyze(&drifting(), None);
        assert!(a.coherent());
        assert_eq!(
            a.verdict,
            ConsistencyVerdict::NotConsistentWeakOpen { verified_up_to: 40 }
        );
    }
}
