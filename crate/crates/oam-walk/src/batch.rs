//! Data-parallel evaluation of independent walk runs. A single run is
//! inherently sequential (each step depends on the last), but sweeps over
//! initial coins, step counts, or configurations are embarrassingly parallel.
//!
//! With the default `parallel` feature the batch entry points fan out over a
//! rayon pool; built with `--no-default-features` they fall back to the
//! sequential path, which is also exported directly for benchmarking.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::walk::{self, StepParams, WalkState};

/// Map `f` over `items`, in parallel when the `parallel` feature is enabled.
/// Output order always matches input order.
pub fn map_items<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Final state of an `n_steps` walk for each initial state.
pub fn run_final_states(
    initials: &[WalkState],
    params: &StepParams,
    n_steps: usize,
) -> Vec<WalkState> {
    map_items(initials, |initial| {
        let mut state = initial.clone();
        for _ in 0..n_steps {
            state = walk::step(&state, params);
        }
        state
    })
}

/// Sequential reference for [`run_final_states`], kept unconditionally for
/// the comparison benches.
pub fn run_final_states_sequential(
    initials: &[WalkState],
    params: &StepParams,
    n_steps: usize,
) -> Vec<WalkState> {
    initials
        .iter()
        .map(|initial| {
            let mut state = initial.clone();
            for _ in 0..n_steps {
                state = walk::step(&state, params);
            }
            state
        })
        .collect()
}

/// (n, variance) of the walk distribution for each requested step count, each
/// run evaluated independently from the initial state.
pub fn variance_curve(
    initial: &WalkState,
    params: &StepParams,
    step_counts: &[u32],
) -> Vec<(u32, f64)> {
    map_items(step_counts, |&n| {
        let mut state = initial.clone();
        for _ in 0..n {
            state = walk::step(&state, params);
        }
        let (_, var) = walk::spread_stats(&walk::distribution(&state));
        (n, var)
    })
}
