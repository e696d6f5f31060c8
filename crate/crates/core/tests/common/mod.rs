#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tropinv::{ExtendedScalar, PtegSystem, TropicalMatrix};

pub fn m(s: &str) -> TropicalMatrix {
    s.parse().unwrap()
}

pub fn eps(n: usize) -> TropicalMatrix {
    TropicalMatrix::neg_inf(n, n)
}

pub fn drifting() -> PtegSystem {
    PtegSystem::new(
        m("2 -inf; -inf -inf"),
        m("-inf -inf; -inf -1"),
        m("-inf -inf; 0 -inf"),
        eps(2),
    )
    .unwrap()
}

pub const RAILWAY_A: &str = "
      0   17 -inf -inf;
   -inf    0   11    9;
     14 -inf   11    9;
     14 -inf   11    0";

pub fn railway(ell: &str) -> PtegSystem {
    let mut l = eps(4);
    l.set(3, 3, ell.parse().unwrap());
    PtegSystem::new(m(RAILWAY_A), l, eps(4), eps(4)).unwrap()
}

pub const POSITIVE_TWO_CYCLE: &str = "-3 -1; 2 -inf";

/// Integer matrices with entries in `[-5, 5]`, roughly half of them `−∞`.
pub fn random_int_matrix(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<Option<i64>>> {
    (0..n)
        .map(|_| {
            (0..n)
                .map(|_| rng.random_bool(0.5).then(|| rng.random_range(-5..=5)))
                .collect()
        })
        .collect()
}

pub fn to_matrix(a: &[Vec<Option<i64>>]) -> TropicalMatrix {
    TropicalMatrix::from_rows(
        a.iter()
            .map(|row| {
                row.iter()
                    .map(|e| e.map_or(ExtendedScalar::NegInf, ExtendedScalar::from_int))
                    .collect()
            })
            .collect(),
    )
    .unwrap()
}

pub fn random_system(rng: &mut ChaCha8Rng, n: usize) -> PtegSystem {
    let mut block = || to_matrix(&random_int_matrix(rng, n));
    let (a, l, c, rt) = (block(), block(), block(), block());
    PtegSystem::new(a, l, c, rt).unwrap()
}

/// The fixed random corpus: 200 systems with `n ∈ {1, 2, 3}`.
pub fn corpus(seed: u64, count: usize) -> Vec<PtegSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = 1 + i % 3;
            random_system(&mut rng, n)
        })
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// Independent oracles on plain integers. `None` is −∞.

pub type IntMat = Vec<Vec<Option<i64>>>;

pub fn int_identity(n: usize) -> IntMat {
    (0..n)
        .map(|i| (0..n).map(|j| (i == j).then_some(0)).collect())
        .collect()
}

pub fn int_mul(a: &IntMat, b: &IntMat) -> IntMat {
    let n = a.len();
    let p = b[0].len();
    (0..n)
        .map(|i| {
            (0..p)
                .map(|j| (0..b.len()).filter_map(|k| Some(a[i][k]? + b[k][j]?)).max())
                .collect()
        })
        .collect()
}

pub fn int_add(a: &IntMat, b: &IntMat) -> IntMat {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| (*x).max(*y)).collect())
        .collect()
}

/// `E ⊕ A ⊕ … ⊕ A^{n−1}`.
pub fn power_sum(a: &IntMat) -> IntMat {
    let n = a.len();
    let mut acc = int_identity(n);
    let mut power = int_identity(n);
    for _ in 1..n {
        power = int_mul(&power, a);
        acc = int_add(&acc, &power);
    }
    acc
}

/// Nodes lying on a positive-weight circuit: some `(A^m)_{ii} > 0`, `m ≤ n`.
pub fn positive_nodes(a: &IntMat) -> Vec<bool> {
    let n = a.len();
    let mut on = vec![false; n];
    let mut power = int_identity(n);
    for _ in 0..n {
        power = int_mul(&power, a);
        for i in 0..n {
            if power[i][i].is_some_and(|w| w > 0) {
                on[i] = true;
            }
        }
    }
    on
}

/// Kleene star over ℝ ∪ {±∞} by powers plus explicit saturation.
pub fn oracle_star(a: &IntMat) -> TropicalMatrix {
    let n = a.len();
    let reach = power_sum(a);
    let pos = positive_nodes(a);
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let saturated =
                        (0..n).any(|k| pos[k] && reach[k][j].is_some() && reach[i][k].is_some());
                    if saturated {
                        ExtendedScalar::PosInf
                    } else {
                        reach[i][j].map_or(ExtendedScalar::NegInf, ExtendedScalar::from_int)
                    }
                })
                .collect()
        })
        .collect();
    TropicalMatrix::from_rows(rows).unwrap()
}

pub fn is_real_vector(v: &[ExtendedScalar]) -> bool {
    v.iter().all(ExtendedScalar::is_finite)
}
