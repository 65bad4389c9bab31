//! Small Fock-space engine for up to two photons over (polarization, ℓ) modes.
//!
//! States are stored in the occupation-number basis, so bosonic exchange
//! symmetry is structural. A walk step acts by substituting every creation
//! operator with its linear image under the compiled mode map and re-expanding
//! the product with the √n! bosonic normalization. The single-photon sector
//! reproduces the coined walk exactly; the two-photon sector shows the
//! Hong–Ou–Mandel bunching after two round trips.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::jones::{self, Polarization};
use crate::walk::{CoinVector, QPlateCharge, StepParams, WalkState};

pub type Mode = (i64, Polarization);

/// Occupation-number configuration: sorted (mode, count) pairs, counts ≥ 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Occupation(Vec<(Mode, u32)>);

impl Occupation {
    pub fn vacuum() -> Self {
        Self(Vec::new())
    }

    /// Build from an unordered list of created modes.
    pub fn from_modes(modes: &[Mode]) -> Self {
        let mut counts: BTreeMap<Mode, u32> = BTreeMap::new();
        for &m in modes {
            *counts.entry(m).or_insert(0) += 1;
        }
        Self(counts.into_iter().collect())
    }

    pub fn entries(&self) -> &[(Mode, u32)] {
        &self.0
    }

    pub fn total_photons(&self) -> u32 {
        self.0.iter().map(|&(_, n)| n).sum()
    }

    /// Π n_m! over the occupied modes.
    fn count_factorial(&self) -> f64 {
        self.0
            .iter()
            .map(|&(_, n)| (1..=n).map(f64::from).product::<f64>())
            .product()
    }

    /// The created modes with multiplicity, flattened.
    fn to_ops(&self) -> Vec<Mode> {
        let mut ops = Vec::new();
        for &(m, n) in &self.0 {
            for _ in 0..n {
                ops.push(m);
            }
        }
        ops
    }

    /// Photons at a given OAM index, any polarization.
    pub fn photons_at_ell(&self, ell: i64) -> u32 {
        self.0.iter().filter(|&&((l, _), _)| l == ell).map(|&(_, n)| n).sum()
    }
}

/// Complex-weighted superposition of occupation configurations with a common
/// total photon number.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct FockState {
    terms: BTreeMap<Occupation, C64>,
}

impl FockState {
    pub fn vacuum() -> Self {
        Self { terms: BTreeMap::from([(Occupation::vacuum(), C64::new(1.0, 0.0))]) }
    }

    /// Normalized state Π a†_m |0⟩ / √(Π n_m!) for the given creation operators.
    pub fn from_creation_ops(modes: &[Mode]) -> Self {
        let occ = Occupation::from_modes(modes);
        Self { terms: BTreeMap::from([(occ, C64::new(1.0, 0.0))]) }
    }

    pub fn terms(&self) -> &BTreeMap<Occupation, C64> {
        &self.terms
    }

    pub fn amplitude(&self, occ: &Occupation) -> C64 {
        self.terms.get(occ).copied().unwrap_or_else(|| C64::new(0.0, 0.0))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum()
    }

    /// Total photon number, identical across terms by construction.
    pub fn total_photons(&self) -> Option<u32> {
        self.terms.keys().next().map(Occupation::total_photons)
    }
}

/// One walk iteration: substitute each creation operator by its image under
/// the compiled mode map, expand the product, and collect configurations with
/// bosonic normalization. Norm is preserved for unitary maps.
pub fn apply_mode_map(state: &FockState, params: &StepParams) -> FockState {
    apply_operator(state, &jones::step_mode_operator(params))
}

/// Apply an arbitrary compiled linear mode transformation to the creation
/// operators of every term.
pub fn apply_operator(state: &FockState, op: &jones::ModeOperator) -> FockState {
    let mut out: BTreeMap<Occupation, C64> = BTreeMap::new();

    for (occ, &amp) in state.terms() {
        // |occ⟩ = Π (a†)^n / √(Π n!) |0⟩, so the operator product carries the
        // prefactor amp / √(Π n!).
        let prefactor = amp / occ.count_factorial().sqrt();
        // Expand Π_k ( Σ_m U_{m,op_k} a†_m ) term by term.
        let mut poly: Vec<(Vec<Mode>, C64)> = vec![(Vec::new(), prefactor)];
        for &(ell, pol) in &occ.to_ops() {
            let image = op.image_of(pol, ell);
            let mut next = Vec::with_capacity(poly.len() * image.len());
            for (modes, coeff) in &poly {
                for &(p, target, w) in &image {
                    let mut modes = modes.clone();
                    modes.push((target, p));
                    next.push((modes, coeff * w));
                }
            }
            poly = next;
        }
        for (modes, coeff) in poly {
            let occ_out = Occupation::from_modes(&modes);
            let weight = coeff * occ_out.count_factorial().sqrt();
            *out.entry(occ_out).or_insert_with(|| C64::new(0.0, 0.0)) += weight;
        }
    }

    let terms = out.into_iter().filter(|(_, a)| a.norm_sqr() > 1e-30).collect();
    FockState { terms }
}

/// Input of the Hong–Ou–Mandel footnote experiment: one photon at (R, ℓ) and
/// one at (L, ℓ+2).
pub fn hom_input(ell: i64) -> FockState {
    FockState::from_creation_ops(&[(ell, Polarization::Right), (ell + 2, Polarization::Left)])
}

/// Two round trips of the q = 1/2 Hadamard walk applied to [`hom_input`].
/// The output bunches: double occupancy at OAM ℓ in superposition with double
/// occupancy at ℓ+2, with no coincidence term.
pub fn hom_two_roundtrips(ell: i64) -> FockState {
    let params = StepParams::hadamard_walk(
        QPlateCharge::try_from_f64(0.5).expect("1/2 is a valid charge"),
    );
    let mut state = hom_input(ell);
    for _ in 0..2 {
        state = apply_mode_map(&state, &params);
    }
    state
}

/// Largest |amplitude| over configurations with exactly one photon at OAM
/// `ell_a` and one at `ell_b` (any polarizations).
pub fn max_coincidence_amplitude(state: &FockState, ell_a: i64, ell_b: i64) -> f64 {
    state
        .terms()
        .iter()
        .filter(|(occ, _)| occ.photons_at_ell(ell_a) == 1 && occ.photons_at_ell(ell_b) == 1)
        .map(|(_, a)| a.norm())
        .fold(0.0, f64::max)
}

/// Probability of finding one photon at OAM `ell_a` and one at `ell_b`.
pub fn coincidence_probability(state: &FockState, ell_a: i64, ell_b: i64) -> f64 {
    state
        .terms()
        .iter()
        .filter(|(occ, _)| occ.photons_at_ell(ell_a) == 1 && occ.photons_at_ell(ell_b) == 1)
        .map(|(_, a)| a.norm_sqr())
        .sum()
}

/// Max deviation between the single-photon Fock amplitudes and the coined-walk
/// amplitudes after `n` steps from a common initial coin at ℓ = 0.
pub fn single_photon_equivalence(initial: &CoinVector, params: &StepParams, n: u32) -> f64 {
    let mut fock = FockState {
        terms: [
            (Occupation::from_modes(&[(0, Polarization::Right)]), initial.up),
            (Occupation::from_modes(&[(0, Polarization::Left)]), initial.down),
        ]
        .into_iter()
        .filter(|(_, a)| a.norm_sqr() > 0.0)
        .collect(),
    };
    let mut walk_state = WalkState::localized(0, *initial);
    for _ in 0..n {
        fock = apply_mode_map(&fock, params);
        walk_state = crate::walk::step(&walk_state, params);
    }

    let reach = i64::from(n) * i64::from(params.q().twice_q().unsigned_abs()) + 1;
    let mut residual = 0.0f64;
    for ell in -reach..=reach {
        let coin = walk_state.coin_at(ell);
        for (pol, want) in [(Polarization::Right, coin.up), (Polarization::Left, coin.down)] {
            let got = fock.amplitude(&Occupation::from_modes(&[(ell, pol)]));
            residual = residual.max((got - want).norm());
        }
    }
    residual
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{TOL_ACC, TOL_OP};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    const S: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn params() -> StepParams {
        StepParams::hadamard_walk(QPlateCharge::try_from_f64(0.5).unwrap())
    }

    fn occ(modes: &[Mode]) -> Occupation {
        Occupation::from_modes(modes)
    }

    #[test]
    fn vacuum_is_fixed() {
        let out = apply_mode_map(&FockState::vacuum(), &params());
        assert_eq!(out, FockState::vacuum());
    }

    #[test]
    fn one_photon_one_step_matches_walk() {
        // a†_{R,0}|0⟩ → (1/√2)(a†_{R,1} + a†_{L,1})|0⟩
        let out = apply_mode_map(
            &FockState::from_creation_ops(&[(0, Polarization::Right)]),
            &params(),
        );
        assert!((out.amplitude(&occ(&[(1, Polarization::Right)])) - c(S, 0.0)).norm() < TOL_OP);
        assert!((out.amplitude(&occ(&[(1, Polarization::Left)])) - c(S, 0.0)).norm() < TOL_OP);
        assert_eq!(out.terms().len(), 2);
    }

    #[test]
    fn qwp_only_cancels_cross_term() {
        // a†_R a†_L → (1/2)(a†_R² − a†_L²) under the quarter-wave mixing alone,
        // i.e. configuration amplitudes ±1/√2 and no RL cross term.
        let qwp = jones::compile_to_modes(&jones::JonesElement::quarter_wave(
            std::f64::consts::FRAC_PI_4,
        ))
        .unwrap();
        let state = FockState::from_creation_ops(&[
            (0, Polarization::Right),
            (0, Polarization::Left),
        ]);
        let out = apply_operator(&state, &qwp);
        let rr = out.amplitude(&occ(&[(0, Polarization::Right), (0, Polarization::Right)]));
        let ll = out.amplitude(&occ(&[(0, Polarization::Left), (0, Polarization::Left)]));
        let rl = out.amplitude(&occ(&[(0, Polarization::Right), (0, Polarization::Left)]));
        assert!((rr - c(S, 0.0)).norm() < TOL_OP);
        assert!((ll + c(S, 0.0)).norm() < TOL_OP);
        assert!(rl.norm() < TOL_OP);
    }

    #[test]
    fn hom_coincidence_cancels() {
        let out = hom_two_roundtrips(0);
        assert!(max_coincidence_amplitude(&out, 0, 2) < TOL_OP);
        assert!((out.norm_sqr() - 1.0).abs() < TOL_ACC);
        // Every populated configuration has both photons at ℓ = 0 or both at 2.
        for occ in out.terms().keys() {
            assert!(occ.photons_at_ell(0) == 2 || occ.photons_at_ell(2) == 2);
        }
    }

    #[test]
    fn hom_cancellation_is_translation_invariant() {
        for ell in [-3i64, 1, 7] {
            let out = hom_two_roundtrips(ell);
            assert!(max_coincidence_amplitude(&out, ell, ell + 2) < TOL_OP);
        }
    }

    #[test]
    fn norm_preserved_over_twenty_two_photon_steps() {
        let mut state = hom_input(0);
        for _ in 0..20 {
            state = apply_mode_map(&state, &params());
            assert_eq!(state.total_photons(), Some(2));
        }
        assert!((state.norm_sqr() - 1.0).abs() < TOL_ACC);
    }

    #[test]
    fn single_photon_sector_equals_walk() {
        assert!(single_photon_equivalence(&CoinVector::symmetric(), &params(), 1) < TOL_OP);
        assert_eq!(single_photon_equivalence(&CoinVector::pure_up(), &params(), 0), 0.0);
        assert!(single_photon_equivalence(&CoinVector::symmetric(), &params(), 10) < TOL_ACC);
    }
}
