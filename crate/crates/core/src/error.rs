use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid scalar {0:?}: expected a decimal, a fraction p/q, or -inf")]
pub struct ParseScalarError(pub String);

/// Why a finite horizon admits no real trajectory for the chosen seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Infeasibility {
    /// Some component is `−∞`: the seed never reaches that coordinate.
    Unreached,
    /// Some component is `+∞`: the block precedence graph has a positive circuit.
    Divergent,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MaxPlusError {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix must have at least one row and one column")]
    Empty,
    #[error("expected {expected} entries for a {rows}x{cols} matrix, got {got}")]
    EntryCount {
        rows: usize,
        cols: usize,
        expected: usize,
        got: usize,
    },
    #[error("matrix is not a star matrix")]
    NotStarMatrix,
    #[error("block {block} is {got}x{got_cols}, expected {n}x{n}")]
    BlockDimensionMismatch {
        block: &'static str,
        n: usize,
        got: usize,
        got_cols: usize,
    },
    #[error("matrix {name} contains +inf; problem inputs must be R_max-valued")]
    PosInfInput { name: &'static str },
    #[error("horizon must be at least {min}, got {got}")]
    HorizonTooShort { min: usize, got: usize },
    #[error("{}", infeasible_message(*.kind, *.horizon, *.component))]
    InfeasibleHorizon {
        kind: Infeasibility,
        horizon: usize,
        /// Flat index into the stacked state `x(1..K)`.
        component: usize,
    },
    #[error("seed has length {got}, expected {expected}")]
    SeedLength { expected: usize, got: usize },
    #[error("seed entries must not be +inf")]
    SeedPosInf,
}

fn infeasible_message(kind: Infeasibility, horizon: usize, component: usize) -> String {
    match kind {
        Infeasibility::Unreached => format!(
            "infeasible horizon K={horizon}: component {component} is -inf (not reached from the seed; choose a different seed)"
        ),
        Infeasibility::Divergent => format!(
            "infeasible horizon K={horizon}: component {component} is +inf (positive-weight circuit; the constraints cannot be met over this horizon)"
        ),
    }
}

pub type Result<T, E = MaxPlusError> = std::result::Result<T, E>;
