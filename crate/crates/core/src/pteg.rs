//! Fully actuated max-plus systems under time-window constraints, seen as
//! P-time event graphs:
//!
//! ```text
//! x(k)   ≥ L ⊗ x(k+1)
//! x(k)   ≥ C ⊗ x(k)
//! x(k+1) ≥ R ⊗ x(k),    R = A ⊕ R̃
//! ```
//!
//! Consistency is decided through the matrices `Π₀ = C*`,
//! `Π_{k+1} = (L ⊗ Π_k ⊗ R ⊕ C)*`.

use num_rational::BigRational;

use crate::error::{Infeasibility, MaxPlusError, Result};
use crate::matrix::TropicalMatrix;
use crate::precedence::{build_block_matrix, BlockMatrixSpec};
use crate::scalar::ExtendedScalar;
use crate::star::kleene_star;

/// The data `(A, L, C, R̃)` of a constrained fully actuated system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PtegSystem {
    a: TropicalMatrix,
    l: TropicalMatrix,
    c: TropicalMatrix,
    rtilde: TropicalMatrix,
}

impl PtegSystem {
    pub fn new(
        a: TropicalMatrix,
        l: TropicalMatrix,
        c: TropicalMatrix,
        rtilde: TropicalMatrix,
    ) -> Result<Self> {
        let n = a.require_square()?;
        for (name, block) in [("A", &a), ("L", &l), ("C", &c), ("Rtilde", &rtilde)] {
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
        Ok(PtegSystem { a, l, c, rtilde })
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn a(&self) -> &TropicalMatrix {
        &self.a
    }

    pub fn l(&self) -> &TropicalMatrix {
        &self.l
    }

    pub fn c(&self) -> &TropicalMatrix {
        &self.c
    }

    pub fn rtilde(&self) -> &TropicalMatrix {
        &self.rtilde
    }

    /// `R = A ⊕ R̃`, computed from the current blocks.
    pub fn r(&self) -> TropicalMatrix {
        self.a.oplus(&self.rtilde).expect("blocks share dimension")
    }

    pub fn block_spec(&self) -> BlockMatrixSpec {
        BlockMatrixSpec::new(self.c.clone(), self.l.clone(), self.r())
            .expect("blocks validated on construction")
    }

    /// Default probe bound `10·n²`.
    pub fn default_probe_bound(&self) -> usize {
        10 * self.dim() * self.dim()
    }

    /// Probe bound actually used by the consistency and φ iterations: never
    /// below `n² + 2`, so both cover the indices needed for a decision.
    pub fn effective_probe_bound(&self, requested: Option<usize>) -> usize {
        let n2 = self.dim() * self.dim();
        requested.unwrap_or(self.default_probe_bound()).max(n2 + 2)
    }
}

/// Lazily generated `Π₀, Π₁, …`; holds only the current matrix.
#[derive(Clone, Debug)]
pub struct PiIter {
    l: TropicalMatrix,
    c: TropicalMatrix,
    r: TropicalMatrix,
    next: Option<TropicalMatrix>,
}

impl PiIter {
    pub fn new(sys: &PtegSystem) -> Self {
        PiIter {
            l: sys.l.clone(),
            c: sys.c.clone(),
            r: sys.r(),
            next: None,
        }
    }

    fn step(&self, prev: &TropicalMatrix) -> TropicalMatrix {
        let inner = self
            .l
            .otimes(prev)
            .and_then(|m| m.otimes(&self.r))
            .and_then(|m| m.oplus(&self.c))
            .expect("blocks share dimension");
        let next = kleene_star(&inner).expect("square");
        debug_assert!(prev.le(&next), "Π sequence must be monotone");
        next
    }
}

impl Iterator for PiIter {
    type Item = TropicalMatrix;

    fn next(&mut self) -> Option<TropicalMatrix> {
        let current = match self.next.take() {
            None => kleene_star(&self.c).expect("square"),
            Some(m) => m,
        };
        self.next = Some(self.step(&current));
        Some(current)
    }
}

/// `[Π₀, …, Π_{k_max}]`.
pub fn pi_sequence(sys: &PtegSystem, k_max: usize) -> Vec<TropicalMatrix> {
    PiIter::new(sys).take(k_max + 1).collect()
}

/// Outcome of the consistency test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConsistencyVerdict {
    /// `Π_{n²+1} = Π_{n²}` and finite; `pi_fixed` is `Π_k` for all `k ≥ n²`.
    Consistent { pi_fixed: TropicalMatrix },
    /// Not consistent, and every `Π_k` up to `verified_up_to` is ℝmax-valued.
    /// Weak consistency beyond that index is not decided.
    NotConsistentWeakOpen { verified_up_to: usize },
    /// `Π_k` has a `+∞` entry for `k = first_divergent_k`.
    NotWeaklyConsistent { first_divergent_k: usize },
}

impl ConsistencyVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            ConsistencyVerdict::Consistent { .. } => "Consistent",
            ConsistencyVerdict::NotConsistentWeakOpen { .. } => "NotConsistentWeakOpen",
            ConsistencyVerdict::NotWeaklyConsistent { .. } => "NotWeaklyConsistent",
        }
    }
}

/// Decides consistency exactly and probes weak consistency up to a bound
/// (default `10·n²`, never below `n² + 2`).
pub fn check_consistency(sys: &PtegSystem, weak_probe_bound: Option<usize>) -> ConsistencyVerdict {
    let n2 = sys.dim() * sys.dim();
    let bound = sys.effective_probe_bound(weak_probe_bound);
    let mut prev: Option<TropicalMatrix> = None;
    for (k, pi) in PiIter::new(sys).enumerate().take(bound + 1) {
        if pi.has_pos_inf() {
            return ConsistencyVerdict::NotWeaklyConsistent {
                first_divergent_k: k,
            };
        }
        // Π_{k+1} depends only on Π_k, so one repetition fixes the rest of the
        // sequence; past n²+1 a repetition is impossible.
        if k <= n2 + 1 && prev.as_ref() == Some(&pi) {
            return ConsistencyVerdict::Consistent { pi_fixed: pi };
        }
        prev = Some(pi);
    }
    ConsistencyVerdict::NotConsistentWeakOpen {
        verified_up_to: bound,
    }
}

/// A finite real trajectory `x(1..K)` with inputs `u(k) = x(k+1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    pub horizon: usize,
    pub states: Vec<Vec<BigRational>>,
    pub inputs: Vec<Vec<BigRational>>,
}

/// Builds `x_[K] = M*_[K] ⊗ ũ`, where `ũ` repeats `seed` (default `0`) in
/// every block. The result is the least solution of the `K`-step constraints
/// that dominates the seed.
pub fn synthesize_trajectory(
    sys: &PtegSystem,
    horizon: usize,
    seed: Option<&[ExtendedScalar]>,
) -> Result<Trajectory> {
    if horizon < 2 {
        return Err(MaxPlusError::HorizonTooShort {
            min: 2,
            got: horizon,
        });
    }
    let n = sys.dim();
    let seed: Vec<ExtendedScalar> = match seed {
        Some(s) if s.len() != n => {
            return Err(MaxPlusError::SeedLength {
                expected: n,
                got: s.len(),
            })
        }
        Some(s) if s.iter().any(ExtendedScalar::is_pos_inf) => {
            return Err(MaxPlusError::SeedPosInf)
        }
        Some(s) => s.to_vec(),
        None => vec![ExtendedScalar::zero(); n],
    };
    let m_star = kleene_star(&build_block_matrix(&sys.block_spec(), horizon)?)?;
    let stacked: Vec<ExtendedScalar> = seed.iter().cloned().cycle().take(horizon * n).collect();
    let x = m_star.apply(&stacked)?;

    if let Some(idx) = x.iter().position(ExtendedScalar::is_pos_inf) {
        return Err(MaxPlusError::InfeasibleHorizon {
            kind: Infeasibility::Divergent,
            horizon,
            component: idx,
        });
    }
    if let Some(idx) = x.iter().position(ExtendedScalar::is_neg_inf) {
        return Err(MaxPlusError::InfeasibleHorizon {
            kind: Infeasibility::Unreached,
            horizon,
            component: idx,
        });
    }
    let states: Vec<Vec<BigRational>> = x
        .chunks(n)
        .map(|block| {
            block
                .iter()
                .map(|v| v.as_finite().cloned().expect("finite"))
                .collect()
        })
        .collect();
    let inputs = states[1..].to_vec();
    Ok(Trajectory {
        horizon,
        states,
        inputs,
    })
}

fn dominates(lhs: &[ExtendedScalar], rhs: &[ExtendedScalar]) -> bool {
    lhs.iter().zip(rhs).all(|(a, b)| a >= b)
}

/// Exact check of every inequality over the horizon, plus `u(k) = x(k+1)`
/// and `u(k) ≥ A ⊗ x(k)`.
pub fn validate_trajectory(sys: &PtegSystem, t: &Trajectory) -> bool {
    let n = sys.dim();
    if t.horizon == 0
        || t.states.len() != t.horizon
        || t.inputs.len() + 1 != t.horizon
        || t.states.iter().chain(&t.inputs).any(|v| v.len() != n)
    {
        return false;
    }
    let lift = |v: &[BigRational]| -> Vec<ExtendedScalar> {
        v.iter().cloned().map(ExtendedScalar::Finite).collect()
    };
    let xs: Vec<Vec<ExtendedScalar>> = t.states.iter().map(|v| lift(v)).collect();
    let r = sys.r();
    let apply = |m: &TropicalMatrix, v: &[ExtendedScalar]| m.apply(v).expect("dimension checked");

    let within_blocks = xs.iter().all(|x| dominates(x, &apply(&sys.c, x)));
    let across_blocks = xs.windows(2).zip(&t.inputs).all(|(pair, u)| {
        let (now, next) = (&pair[0], &pair[1]);
        dominates(now, &apply(&sys.l, next))
            && dominates(next, &apply(&r, now))
            && lift(u) == *next
            && dominates(next, &apply(&sys.a, now))
    });
    within_blocks && across_blocks
}
