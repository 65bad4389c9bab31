//! Classical-field layer: Jones vectors expanded over OAM, Jones matrices for
//! wave plates and q-plates, and their compilation into exact mode-space
//! operators.
//!
//! All 2×2 matrices here are written in the circular basis with component
//! ordering (R, L), matching the Jones-vector column [u_R, u_L]. Entries that
//! depend on the azimuthal angle φ are pure monomials c·e^{imφ}; they are
//! carried symbolically (integer Fourier index m per entry), never sampled on
//! a φ grid, so compilation to OAM-mode operators is exact: e^{imφ} relabels
//! ℓ → ℓ + m.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mat2::{self, Mat2};
use crate::walk::{CoinVector, QPlateCharge, StepParams, WalkState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Polarization {
    /// Right circular; identified with the coin state ↑.
    Right,
    /// Left circular; identified with the coin state ↓.
    Left,
}

impl Polarization {
    pub fn flipped(self) -> Self {
        match self {
            Self::Right => Self::Left,
            Self::Left => Self::Right,
        }
    }

    fn index(self) -> usize {
        match self {
            Self::Right => 0,
            Self::Left => 1,
        }
    }

    const BOTH: [Self; 2] = [Self::Right, Self::Left];
}

/// Optical field as a sparse OAM expansion of the Jones vector: for each ℓ the
/// pair (c_R, c_L), plus an overall complex scale housing E₀. The per-mode
/// amplitudes are kept normalized; `overall_scale` never enters probabilities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JonesField {
    amplitudes: BTreeMap<i64, [C64; 2]>,
    overall_scale: C64,
}

impl JonesField {
    pub fn new(amplitudes: BTreeMap<i64, [C64; 2]>, overall_scale: C64) -> Self {
        let zero = C64::new(0.0, 0.0);
        let amplitudes = amplitudes
            .into_iter()
            .filter(|(_, a)| a[0] != zero || a[1] != zero)
            .collect();
        Self { amplitudes, overall_scale }
    }

    pub fn localized(ell: i64, c_r: C64, c_l: C64) -> Self {
        Self::new(BTreeMap::from([(ell, [c_r, c_l])]), C64::new(1.0, 0.0))
    }

    pub fn amplitudes(&self) -> &BTreeMap<i64, [C64; 2]> {
        &self.amplitudes
    }

    pub fn amplitude(&self, pol: Polarization, ell: i64) -> C64 {
        self.amplitudes
            .get(&ell)
            .map(|a| a[pol.index()])
            .unwrap_or_else(|| C64::new(0.0, 0.0))
    }

    pub fn overall_scale(&self) -> C64 {
        self.overall_scale
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes
            .values()
            .map(|a| a[0].norm_sqr() + a[1].norm_sqr())
            .sum()
    }

    /// Map to the walk-layer state under the identification R ↔ ↑, L ↔ ↓.
    pub fn to_walk_state(&self, step_count: u32) -> WalkState {
        let amps = self
            .amplitudes
            .iter()
            .map(|(&ell, a)| (ell, CoinVector::new(a[0], a[1])))
            .collect();
        WalkState::from_amplitudes(amps, step_count)
    }

    pub fn from_walk_state(state: &WalkState) -> Self {
        let amplitudes = state
            .amplitudes()
            .iter()
            .map(|(&ell, c)| (ell, [c.up, c.down]))
            .collect();
        Self { amplitudes, overall_scale: C64::new(1.0, 0.0) }
    }
}

/// One matrix entry of the form `coeff · e^{i·frequency·φ}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhiMonomial {
    pub coeff: C64,
    pub frequency: f64,
}

impl PhiMonomial {
    pub fn constant(coeff: C64) -> Self {
        Self { coeff, frequency: 0.0 }
    }
}

/// An optical element of the setup, as a (possibly φ-dependent) Jones matrix.
#[derive(Clone, Debug, PartialEq)]
pub enum JonesElement {
    /// Homogeneous retarder with retardance δ and fast axis at `axis_angle`.
    /// Quarter-wave: δ = π/2; half-wave: δ = π.
    WavePlate { retardance: f64, axis_angle: f64 },
    /// Inhomogeneous half-wave plate whose optic axis rotates as qφ; swaps the
    /// circular polarizations and shifts ℓ by ±2q.
    QPlate { q: QPlateCharge },
    /// Rotation of the polarization frame: diag(e^{iθ}, e^{−iθ}).
    FreeRotation { angle: f64 },
    /// Arbitrary matrix of φ-monomials; compiles only if every frequency is an
    /// integer.
    Custom { entries: [[PhiMonomial; 2]; 2] },
}

impl JonesElement {
    pub fn quarter_wave(axis_angle: f64) -> Self {
        Self::WavePlate { retardance: std::f64::consts::FRAC_PI_2, axis_angle }
    }

    pub fn constant(matrix: Mat2) -> Self {
        Self::Custom {
            entries: [
                [PhiMonomial::constant(matrix[0][0]), PhiMonomial::constant(matrix[0][1])],
                [PhiMonomial::constant(matrix[1][0]), PhiMonomial::constant(matrix[1][1])],
            ],
        }
    }

    /// Symbolic matrix entries; the φ-dependence of every supported element is
    /// a single monomial per entry.
    pub fn symbolic(&self) -> [[PhiMonomial; 2]; 2] {
        let zero = PhiMonomial::constant(C64::new(0.0, 0.0));
        match *self {
            Self::WavePlate { retardance, axis_angle } => {
                let half = retardance / 2.0;
                let diag = PhiMonomial::constant(C64::new(half.cos(), 0.0));
                let off = C64::new(0.0, half.sin());
                [
                    [diag, PhiMonomial {
                        coeff: off * C64::from_polar(1.0, -2.0 * axis_angle),
                        frequency: 0.0,
                    }],
                    [PhiMonomial {
                        coeff: off * C64::from_polar(1.0, 2.0 * axis_angle),
                        frequency: 0.0,
                    }, diag],
                ]
            }
            Self::QPlate { q } => {
                let one = C64::new(1.0, 0.0);
                let m = f64::from(q.twice_q());
                [
                    [zero, PhiMonomial { coeff: one, frequency: -m }],
                    [PhiMonomial { coeff: one, frequency: m }, zero],
                ]
            }
            Self::FreeRotation { angle } => [
                [PhiMonomial::constant(C64::from_polar(1.0, angle)), zero],
                [zero, PhiMonomial::constant(C64::from_polar(1.0, -angle))],
            ],
            Self::Custom { entries } => entries,
        }
    }

    /// Numeric Jones matrix at azimuthal angle φ.
    pub fn matrix_at(&self, phi: f64) -> Mat2 {
        let s = self.symbolic();
        let mut out = [[C64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = s[i][j].coeff * C64::from_polar(1.0, s[i][j].frequency * phi);
            }
        }
        out
    }
}

/// Quarter-wave plate rotated to `axis_angle`, in the circular (R, L) basis.
/// At axis_angle = 0 this is J_w = (1/√2)[[1, i], [i, 1]]; at π/4 it maps
/// R → (R − L)/√2 and L → (R + L)/√2.
pub fn qwp_matrix(axis_angle: f64) -> Mat2 {
    JonesElement::quarter_wave(axis_angle).matrix_at(0.0)
}

/// q-plate Jones matrix [[0, e^{−i2qφ}], [e^{i2qφ}, 0]] at azimuthal angle φ.
pub fn qplate_matrix(q: QPlateCharge, phi: f64) -> Mat2 {
    JonesElement::QPlate { q }.matrix_at(phi)
}

#[derive(Debug, Error, PartialEq)]
pub enum CompileError {
    #[error("entry ({row},{col}) has non-integer azimuthal frequency {frequency}; only pure e^{{imφ}} factors with integer m act within the OAM basis")]
    NonIntegerFrequency { row: usize, col: usize, frequency: f64 },
}

/// Compiled action of an element on (polarization, ℓ) modes. Everything the
/// setup contains is ℓ-translation-invariant, so one scatter list per input
/// polarization suffices: input (s, ℓ) maps to Σ (s′, ℓ + offset) · amp.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeOperator {
    columns: [Vec<(Polarization, i64, C64)>; 2],
}

impl ModeOperator {
    pub fn identity() -> Self {
        let one = C64::new(1.0, 0.0);
        Self {
            columns: [
                vec![(Polarization::Right, 0, one)],
                vec![(Polarization::Left, 0, one)],
            ],
        }
    }

    /// Image of the basis mode (pol, ℓ).
    pub fn image_of(&self, pol: Polarization, ell: i64) -> Vec<(Polarization, i64, C64)> {
        self.columns[pol.index()]
            .iter()
            .map(|&(p, off, a)| (p, ell + off, a))
            .collect()
    }

    /// `after ∘ before`: apply `before` first.
    pub fn compose(after: &Self, before: &Self) -> Self {
        let mut columns: [Vec<(Polarization, i64, C64)>; 2] = [Vec::new(), Vec::new()];
        for pol in Polarization::BOTH {
            let mut acc: BTreeMap<(i64, Polarization), C64> = BTreeMap::new();
            for &(p1, off1, a1) in &before.columns[pol.index()] {
                for &(p2, off2, a2) in &after.columns[p1.index()] {
                    *acc.entry((off1 + off2, p2)).or_insert_with(|| C64::new(0.0, 0.0)) +=
                        a1 * a2;
                }
            }
            columns[pol.index()] = acc
                .into_iter()
                .filter(|&(_, a)| a.norm_sqr() > 0.0)
                .map(|((off, p), a)| (p, off, a))
                .collect();
        }
        Self { columns }
    }

    pub fn adjoint(&self) -> Self {
        let mut columns: [Vec<(Polarization, i64, C64)>; 2] = [Vec::new(), Vec::new()];
        for pol in Polarization::BOTH {
            for &(p, off, a) in &self.columns[pol.index()] {
                columns[p.index()].push((pol, -off, a.conj()));
            }
        }
        for col in &mut columns {
            col.sort_by_key(|&(p, off, _)| (off, p));
        }
        Self { columns }
    }

    /// Max deviation of U†U from the identity on the (pol, offset) space; the
    /// translation invariance makes this check window-free.
    pub fn unitarity_defect(&self) -> f64 {
        let prod = Self::compose(&self.adjoint(), self);
        let mut defect = 0.0f64;
        for pol in Polarization::BOTH {
            let mut diag_seen = false;
            for &(p, off, a) in &prod.columns[pol.index()] {
                if p == pol && off == 0 {
                    diag_seen = true;
                    defect = defect.max((a - C64::new(1.0, 0.0)).norm());
                } else {
                    defect = defect.max(a.norm());
                }
            }
            if !diag_seen {
                defect = 1.0;
            }
        }
        defect
    }
}

/// Compile an element into its exact action on (polarization, ℓ) modes:
/// an entry c·e^{imφ} in row s′, column s scatters (s, ℓ) → (s′, ℓ + m) · c.
pub fn compile_to_modes(element: &JonesElement) -> Result<ModeOperator, CompileError> {
    let entries = element.symbolic();
    let mut columns: [Vec<(Polarization, i64, C64)>; 2] = [Vec::new(), Vec::new()];
    for (i, row_pol) in Polarization::BOTH.into_iter().enumerate() {
        for (j, col_pol) in Polarization::BOTH.into_iter().enumerate() {
            let entry = entries[i][j];
            if entry.coeff.norm_sqr() == 0.0 {
                continue;
            }
            let rounded = entry.frequency.round();
            if !entry.frequency.is_finite() || (entry.frequency - rounded).abs() > 1e-9 {
                return Err(CompileError::NonIntegerFrequency {
                    row: i,
                    col: j,
                    frequency: entry.frequency,
                });
            }
            columns[col_pol.index()].push((row_pol, rounded as i64, entry.coeff));
        }
    }
    Ok(ModeOperator { columns })
}

/// Apply a compiled operator to a field. Linear scatter; norm preserved for
/// unitary operators.
pub fn apply(op: &ModeOperator, field: &JonesField) -> JonesField {
    let mut out: BTreeMap<i64, [C64; 2]> = BTreeMap::new();
    for (&ell, amps) in field.amplitudes() {
        for pol in Polarization::BOTH {
            let a = amps[pol.index()];
            if a.norm_sqr() == 0.0 {
                continue;
            }
            for (p, target, w) in op.image_of(pol, ell) {
                out.entry(target).or_insert([C64::new(0.0, 0.0); 2])[p.index()] += a * w;
            }
        }
    }
    JonesField::new(out, field.overall_scale())
}

/// Compiled operator of one full walk iteration at the optical layer. For the
/// Hadamard coin this is W(π/4)·J_q; for a general coin C the constant factor
/// is C·X (the q-plate already swaps the polarizations, X undoes the swap
/// before the coin acts).
pub fn step_mode_operator(params: &StepParams) -> ModeOperator {
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let swap: Mat2 = [[zero, one], [one, zero]];
    let constant = mat2::mul(params.coin(), &swap);
    let coin_op = compile_to_modes(&JonesElement::constant(constant))
        .expect("constant element always compiles");
    let qplate = compile_to_modes(&JonesElement::QPlate { q: params.q() })
        .expect("q-plate element always compiles");
    ModeOperator::compose(&coin_op, &qplate)
}

/// Dense matrix of a mode operator on the truncated lattice |ℓ| ≤ half_width,
/// basis index (ℓ + half_width)·2 + pol. Amplitudes scattered outside the
/// window are dropped. Row-major.
pub fn dense_on_window(op: &ModeOperator, half_width: i64) -> Vec<Vec<C64>> {
    let sites = (2 * half_width + 1) as usize;
    let dim = 2 * sites;
    let mut out = vec![vec![C64::new(0.0, 0.0); dim]; dim];
    for ell in -half_width..=half_width {
        for pol in Polarization::BOTH {
            let col = ((ell + half_width) as usize) * 2 + pol.index();
            for (p, target, a) in op.image_of(pol, ell) {
                if target.abs() <= half_width {
                    let row = ((target + half_width) as usize) * 2 + p.index();
                    out[row][col] += a;
                }
            }
        }
    }
    out
}

/// Residual of the factorization of the optical step into the walk step:
/// max elementwise difference, on a 41-site truncated lattice, between the
/// compiled W(π/4)·J_q and the directly constructed (I ⊗ H)·S with shift ±2q,
/// under the identification R ↔ ↑, L ↔ ↓.
pub fn factorization_check(q: QPlateCharge) -> f64 {
    const HALF_WIDTH: i64 = 20;
    let _ = StepParams::hadamard_walk(q);

    let optical = ModeOperator::compose(
        &compile_to_modes(&JonesElement::quarter_wave(std::f64::consts::FRAC_PI_4)).unwrap(),
        &compile_to_modes(&JonesElement::QPlate { q }).unwrap(),
    );
    let lhs = dense_on_window(&optical, HALF_WIDTH);

    // (I ⊗ H)·S built directly from its matrix elements, not via step().
    let sites = (2 * HALF_WIDTH + 1) as usize;
    let dim = 2 * sites;
    let mut rhs = vec![vec![C64::new(0.0, 0.0); dim]; dim];
    let h = crate::walk::hadamard();
    let d = i64::from(q.twice_q());
    for ell in -HALF_WIDTH..=HALF_WIDTH {
        for (coin_in, target) in [(0usize, ell + d), (1usize, ell - d)] {
            if target.abs() > HALF_WIDTH {
                continue;
            }
            let col = ((ell + HALF_WIDTH) as usize) * 2 + coin_in;
            for coin_out in 0..2 {
                let row = ((target + HALF_WIDTH) as usize) * 2 + coin_out;
                rhs[row][col] += h[coin_out][coin_in];
            }
        }
    }

    let mut residual = 0.0f64;
    for (lr, rr) in lhs.iter().zip(&rhs) {
        for (a, b) in lr.iter().zip(rr) {
            residual = residual.max((a - b).norm());
        }
    }
    residual
}
