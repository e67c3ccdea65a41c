//! Coin, shift and oracle operators acting on [`State`], and one step of the
//! search walk `U' = S·(G ⊗ I)·R`.

mod coin;
pub mod dense;
mod oracle;
mod shift;

pub use coin::{apply_coin, grover_coin, GroverCoin};
pub use dense::{dense_operator, max_unitarity_defect, DenseKind, DENSE_DIM_LIMIT};
pub use oracle::{apply_oracle, OracleSpec};
pub use shift::{
    apply_shift, apply_shift_dynamic, apply_shift_open, apply_shift_periodic, shift_destination,
};

use crate::error::{Error, Result};
use crate::hilbert::State;
use crate::scalar::Real;

/// One search step `S·(G ⊗ I)·R·ψ`, with `S` chosen by the state's boundary
/// and labeling.
pub fn step<T: Real>(state: &State<T>, spec: &OracleSpec) -> Result<State<T>> {
    if state.config() != spec.config() {
        return Err(Error::InvalidArgument(
            "state and oracle are defined on different lattices".into(),
        ));
    }
    let reflected = apply_oracle(state, spec);
    Ok(apply_shift(&apply_coin(&reflected)))
}

/// Plain walk step `S·(G ⊗ I)`.
pub fn walk_step<T: Real>(state: &State<T>) -> State<T> {
    apply_shift(&apply_coin(state))
}
