//! Independent brute-force references used by the acceptance suite.
//!
//! The single-particle oracle evolves a dense state vector on a truncated
//! lattice by explicit matrix–vector products, built straight from the step's
//! matrix elements; it shares no code with the sparse engine. The two-photon
//! oracle expands the tensor product of two single-photon evolutions, either
//! bosonically symmetrized or as a labeled (distinguishable) pair.

use std::collections::BTreeMap;

use oam_walk::mat2::Mat2;
use oam_walk::C64;

/// Dense step operator on the window |ℓ| ≤ half_width; basis index
/// (ℓ + half_width)·2 + c with c = 0 for ↑/R and 1 for ↓/L. Amplitude moved
/// outside the window is dropped.
pub struct DenseWalk {
    pub half_width: i64,
    pub dim: usize,
    matrix: Vec<C64>,
}

impl DenseWalk {
    pub fn new(half_width: i64, twice_q: i32, coin: &Mat2) -> Self {
        let sites = (2 * half_width + 1) as usize;
        let dim = 2 * sites;
        let mut matrix = vec![C64::new(0.0, 0.0); dim * dim];
        let d = i64::from(twice_q);
        for ell in -half_width..=half_width {
            for (coin_in, target) in [(0usize, ell + d), (1usize, ell - d)] {
                if target.abs() > half_width {
                    continue;
                }
                let col = ((ell + half_width) as usize) * 2 + coin_in;
                for coin_out in 0..2 {
                    let row = ((target + half_width) as usize) * 2 + coin_out;
                    matrix[row * dim + col] += coin[coin_out][coin_in];
                }
            }
        }
        Self { half_width, dim, matrix }
    }

    pub fn index(&self, ell: i64, coin: usize) -> usize {
        ((ell + self.half_width) as usize) * 2 + coin
    }

    pub fn delta_vector(&self, ell: i64, up: C64, down: C64) -> Vec<C64> {
        let mut v = vec![C64::new(0.0, 0.0); self.dim];
        v[self.index(ell, 0)] = up;
        v[self.index(ell, 1)] = down;
        v
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.dim];
        for row in 0..self.dim {
            let mut acc = C64::new(0.0, 0.0);
            for col in 0..self.dim {
                let m = self.matrix[row * self.dim + col];
                if m.norm_sqr() > 0.0 {
                    acc += m * v[col];
                }
            }
            out[row] = acc;
        }
        out
    }

    pub fn evolve(&self, v: &[C64], steps: usize) -> Vec<C64> {
        let mut state = v.to_vec();
        for _ in 0..steps {
            state = self.apply(&state);
        }
        state
    }

    pub fn distribution(&self, v: &[C64]) -> BTreeMap<i64, f64> {
        let mut dist = BTreeMap::new();
        for ell in -self.half_width..=self.half_width {
            let p = v[self.index(ell, 0)].norm_sqr() + v[self.index(ell, 1)].norm_sqr();
            if p > 0.0 {
                dist.insert(ell, p);
            }
        }
        dist
    }

    pub fn moments(&self, v: &[C64]) -> (f64, f64) {
        let mut mean = 0.0;
        let mut second = 0.0;
        for (&ell, &p) in &self.distribution(v) {
            let x = ell as f64;
            mean += x * p;
            second += x * x * p;
        }
        (mean, second - mean * mean)
    }
}

/// Two bosons launched in distinct modes `a` and `b`, each evolved by the
/// single-photon oracle; the output is the symmetrized configuration
/// amplitude map: unordered pair (m, n) → amplitude, with m ≤ n and the √2
/// double-occupancy normalization.
pub fn two_boson_output(
    walk: &DenseWalk,
    steps: usize,
    a: usize,
    b: usize,
) -> BTreeMap<(usize, usize), C64> {
    let mut va = vec![C64::new(0.0, 0.0); walk.dim];
    va[a] = C64::new(1.0, 0.0);
    let mut vb = vec![C64::new(0.0, 0.0); walk.dim];
    vb[b] = C64::new(1.0, 0.0);
    let va = walk.evolve(&va, steps);
    let vb = walk.evolve(&vb, steps);

    let mut out = BTreeMap::new();
    for m in 0..walk.dim {
        for n in m..walk.dim {
            let amp = if m == n {
                std::f64::consts::SQRT_2 * va[m] * vb[m]
            } else {
                va[m] * vb[n] + va[n] * vb[m]
            };
            if amp.norm_sqr() > 1e-28 {
                out.insert((m, n), amp);
            }
        }
    }
    out
}

/// Same pair evolved as labeled, distinguishable particles: joint probability
/// of photon A in mode m and photon B in mode n is |⟨m|U|a⟩|²·|⟨n|U|b⟩|².
/// Returns the probability that one particle ends at OAM `ell_1` and the
/// other at `ell_2`.
pub fn distinguishable_coincidence(
    walk: &DenseWalk,
    steps: usize,
    a: usize,
    b: usize,
    ell_1: i64,
    ell_2: i64,
) -> f64 {
    let mut va = vec![C64::new(0.0, 0.0); walk.dim];
    va[a] = C64::new(1.0, 0.0);
    let mut vb = vec![C64::new(0.0, 0.0); walk.dim];
    vb[b] = C64::new(1.0, 0.0);
    let va = walk.evolve(&va, steps);
    let vb = walk.evolve(&vb, steps);

    let site_prob = |v: &[C64], ell: i64| -> f64 {
        v[walk.index(ell, 0)].norm_sqr() + v[walk.index(ell, 1)].norm_sqr()
    };
    site_prob(&va, ell_1) * site_prob(&vb, ell_2) + site_prob(&va, ell_2) * site_prob(&vb, ell_1)
}
