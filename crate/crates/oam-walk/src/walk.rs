//! The abstract coined quantum walk on the OAM lattice.
//!
//! The walker lives on the integer lattice of azimuthal indices ℓ with a
//! two-dimensional coin (↑, ↓). One step is the conditional shift followed by
//! the coin flip: (I ⊗ C)·S, where S moves the ↑ amplitude by +2q sites and
//! the ↓ amplitude by −2q. The lattice is an unbounded sparse map; the support
//! grows by exactly |2q| per step, so no truncation is ever needed.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mat2::{self, Mat2};
use crate::TOL_OP;

#[derive(Debug, Error, PartialEq)]
pub enum ParamError {
    #[error("q-plate charge must be nonzero")]
    ZeroCharge,
    #[error("q must be a half integer (2q integral), got q = {0}")]
    NotHalfInteger(f64),
    #[error("coin matrix is not unitary (max |U\u{2020}U - I| = {0:.3e})")]
    NonUnitaryCoin(f64),
}

/// Half-integer q-plate charge, stored as the integer 2q. The shift magnitude
/// of one walk step is |2q| lattice sites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QPlateCharge {
    twice_q: i32,
}

impl QPlateCharge {
    pub fn from_twice_q(twice_q: i32) -> Result<Self, ParamError> {
        if twice_q == 0 {
            return Err(ParamError::ZeroCharge);
        }
        Ok(Self { twice_q })
    }

    /// Parse a numeric q, requiring 2q to be a nonzero integer.
    pub fn try_from_f64(q: f64) -> Result<Self, ParamError> {
        let doubled = 2.0 * q;
        let rounded = doubled.round();
        if !doubled.is_finite() || (doubled - rounded).abs() > 1e-9 {
            return Err(ParamError::NotHalfInteger(q));
        }
        Self::from_twice_q(rounded as i32)
    }

    pub fn twice_q(self) -> i32 {
        self.twice_q
    }

    pub fn value(self) -> f64 {
        f64::from(self.twice_q) / 2.0
    }

    pub fn flipped(self) -> Self {
        Self { twice_q: -self.twice_q }
    }
}

/// Coin amplitudes over the basis {↑, ↓}, identified with circular
/// polarization {R, L}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoinVector {
    pub up: C64,
    pub down: C64,
}

impl CoinVector {
    pub fn new(up: C64, down: C64) -> Self {
        Self { up, down }
    }

    pub fn zero() -> Self {
        Self::new(C64::new(0.0, 0.0), C64::new(0.0, 0.0))
    }

    /// (↑ + i↓)/√2 — the initial coin used for the symmetric walk.
    pub fn symmetric() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::new(C64::new(s, 0.0), C64::new(0.0, s))
    }

    pub fn pure_up() -> Self {
        Self::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0))
    }

    pub fn pure_down() -> Self {
        Self::new(C64::new(0.0, 0.0), C64::new(1.0, 0.0))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.up.norm_sqr() + self.down.norm_sqr()
    }

    pub fn is_finite(&self) -> bool {
        self.up.re.is_finite()
            && self.up.im.is_finite()
            && self.down.re.is_finite()
            && self.down.im.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        self.up == C64::new(0.0, 0.0) && self.down == C64::new(0.0, 0.0)
    }
}

/// Parameters of one walk step: q-plate charge and coin unitary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepParams {
    q: QPlateCharge,
    coin: Mat2,
}

impl StepParams {
    /// Any 2×2 unitary is accepted as the coin; the walk itself only uses the
    /// Hadamard, but the quarter-wave-plate angle generalization needs the hook.
    pub fn new(q: QPlateCharge, coin: Mat2) -> Result<Self, ParamError> {
        let defect = mat2::unitarity_defect(&coin);
        if defect > TOL_OP {
            return Err(ParamError::NonUnitaryCoin(defect));
        }
        Ok(Self { q, coin })
    }

    pub fn hadamard_walk(q: QPlateCharge) -> Self {
        Self { q, coin: hadamard() }
    }

    pub fn q(&self) -> QPlateCharge {
        self.q
    }

    pub fn coin(&self) -> &Mat2 {
        &self.coin
    }
}

/// Joint state on lattice ⊗ coin: a sparse map ℓ → coin amplitudes.
/// Exact-zero components are never stored, so the support and checkerboard
/// parity invariants are structural.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkState {
    amplitudes: BTreeMap<i64, CoinVector>,
    step_count: u32,
}

impl WalkState {
    pub fn localized(ell: i64, coin: CoinVector) -> Self {
        let mut amplitudes = BTreeMap::new();
        if !coin.is_zero() {
            amplitudes.insert(ell, coin);
        }
        Self { amplitudes, step_count: 0 }
    }

    pub fn from_amplitudes(amplitudes: BTreeMap<i64, CoinVector>, step_count: u32) -> Self {
        let amplitudes = amplitudes.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Self { amplitudes, step_count }
    }

    pub fn amplitudes(&self) -> &BTreeMap<i64, CoinVector> {
        &self.amplitudes
    }

    pub fn coin_at(&self, ell: i64) -> CoinVector {
        self.amplitudes.get(&ell).copied().unwrap_or_else(CoinVector::zero)
    }

    pub fn step_count(&self) -> u32 {
        self.step_count
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(CoinVector::norm_sqr).sum()
    }

    /// Smallest and largest populated ℓ, if any amplitude is nonzero.
    pub fn support(&self) -> Option<(i64, i64)> {
        let min = *self.amplitudes.keys().next()?;
        let max = *self.amplitudes.keys().next_back()?;
        Some((min, max))
    }
}

/// The Hadamard coin (1/√2)[[1, 1], [1, −1]] in the (↑, ↓) basis.
pub fn hadamard() -> Mat2 {
    let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[s, s], [s, -s]]
}

/// Conditional shift: (ℓ, ↑) → (ℓ+2q, ↑), (ℓ, ↓) → (ℓ−2q, ↓).
/// A pure relabeling; the norm is preserved exactly.
pub fn shift(state: &WalkState, q: QPlateCharge) -> WalkState {
    let d = i64::from(q.twice_q());
    let zero = C64::new(0.0, 0.0);
    let mut out: BTreeMap<i64, CoinVector> = BTreeMap::new();
    for (&ell, coin) in &state.amplitudes {
        if coin.up != zero {
            out.entry(ell + d).or_insert_with(CoinVector::zero).up = coin.up;
        }
        if coin.down != zero {
            out.entry(ell - d).or_insert_with(CoinVector::zero).down = coin.down;
        }
    }
    WalkState { amplitudes: out, step_count: state.step_count }
}

/// One walk step: shift first, then the coin on every site.
pub fn step(state: &WalkState, params: &StepParams) -> WalkState {
    let shifted = shift(state, params.q);
    let amplitudes = shifted
        .amplitudes
        .into_iter()
        .filter_map(|(ell, coin)| {
            let [up, down] = mat2::apply(params.coin(), [coin.up, coin.down]);
            let coin = CoinVector::new(up, down);
            (!coin.is_zero()).then_some((ell, coin))
        })
        .collect();
    WalkState { amplitudes, step_count: state.step_count + 1 }
}

/// Inverse of [`step`]: coin† on every site, then the opposite shift.
pub fn step_inverse(state: &WalkState, params: &StepParams) -> WalkState {
    let coin_dag = mat2::dagger(params.coin());
    let amplitudes: BTreeMap<i64, CoinVector> = state
        .amplitudes
        .iter()
        .filter_map(|(&ell, coin)| {
            let [up, down] = mat2::apply(&coin_dag, [coin.up, coin.down]);
            let coin = CoinVector::new(up, down);
            (!coin.is_zero()).then_some((ell, coin))
        })
        .collect();
    let mut out = shift(
        &WalkState { amplitudes, step_count: state.step_count },
        params.q.flipped(),
    );
    out.step_count = state.step_count.saturating_sub(1);
    out
}

/// Run `n_steps` iterations, returning the trajectory; element k is the state
/// after k steps (element 0 is the initial state).
pub fn run(initial: &WalkState, params: &StepParams, n_steps: usize) -> Vec<WalkState> {
    let mut states = Vec::with_capacity(n_steps + 1);
    states.push(initial.clone());
    for _ in 0..n_steps {
        let next = step(states.last().expect("nonempty"), params);
        states.push(next);
    }
    states
}

/// P(ℓ) = |up_ℓ|² + |down_ℓ|².
pub fn distribution(state: &WalkState) -> BTreeMap<i64, f64> {
    state
        .amplitudes
        .iter()
        .map(|(&ell, coin)| (ell, coin.norm_sqr()))
        .collect()
}

/// First and second moments (mean, variance) of a distribution over ℓ.
pub fn spread_stats(dist: &BTreeMap<i64, f64>) -> (f64, f64) {
    let mut mean = 0.0;
    let mut second = 0.0;
    for (&ell, &p) in dist {
        let x = ell as f64;
        mean += x * p;
        second += x * x * p;
    }
    (mean, second - mean * mean)
}
