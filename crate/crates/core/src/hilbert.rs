//! Truncated composite space `QD1 ⊗ QD2 ⊗ Fock(0..=n_max)` and its elementary
//! operators.
//!
//! Basis states `|e1, e2, n⟩` (with `e = 0` ground, `e = 1` excited) are laid
//! out as `idx = n + (n_max + 1) * (e2 + 2 * e1)`. The photon number is the
//! fastest-varying index, so each dot configuration owns a contiguous block of
//! `n_max + 1` rows, and tracing out the cavity is a sum over block diagonals.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Dense operator on the composite space.
pub type OperatorMatrix = DMatrix<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Smallest truncation that still contains `|g,g,2⟩`.
pub const MIN_N_MAX: usize = 2;

/// Which quantum dot an operator acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dot {
    One,
    Two,
}

impl Dot {
    pub fn from_index(which: usize) -> Result<Self> {
        match which {
            1 => Ok(Dot::One),
            2 => Ok(Dot::Two),
            other => Err(Error::InvalidDotIndex(other)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertSpace {
    n_max: usize,
}

impl HilbertSpace {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < MIN_N_MAX {
            return Err(Error::InvalidTruncation(n_max));
        }
        Ok(Self { n_max })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Number of Fock levels kept, `n_max + 1`.
    pub fn fock_dim(&self) -> usize {
        self.n_max + 1
    }

    pub fn dim(&self) -> usize {
        4 * self.fock_dim()
    }

    /// Index of `|e1, e2, n⟩`. Panics if a label is out of range.
    pub fn index(&self, e1: usize, e2: usize, n: usize) -> usize {
        assert!(e1 < 2 && e2 < 2 && n <= self.n_max, "basis label out of range");
        n + self.fock_dim() * (e2 + 2 * e1)
    }

    /// Inverse of [`HilbertSpace::index`]: `(e1, e2, n)`.
    pub fn labels(&self, idx: usize) -> (usize, usize, usize) {
        let n = idx % self.fock_dim();
        let dots = idx / self.fock_dim();
        (dots / 2, dots % 2, n)
    }

    pub fn ket(&self, e1: usize, e2: usize, n: usize) -> DVector<C64> {
        let mut v = DVector::zeros(self.dim());
        v[self.index(e1, e2, n)] = ONE;
        v
    }

    pub fn identity(&self) -> OperatorMatrix {
        DMatrix::identity(self.dim(), self.dim())
    }

    /// Photon annihilation `a`, identity on both dots.
    pub fn annihilation(&self) -> OperatorMatrix {
        let mut a = DMatrix::zeros(self.dim(), self.dim());
        for idx in 0..self.dim() {
            let (e1, e2, n) = self.labels(idx);
            if n > 0 {
                a[(self.index(e1, e2, n - 1), idx)] = C64::from((n as f64).sqrt());
            }
        }
        a
    }

    pub fn creation(&self) -> OperatorMatrix {
        self.annihilation().adjoint()
    }

    /// `σ₋ = |g⟩⟨e|` on the selected dot.
    pub fn sigma_minus(&self, dot: Dot) -> OperatorMatrix {
        let mut s = DMatrix::zeros(self.dim(), self.dim());
        for idx in 0..self.dim() {
            let (e1, e2, n) = self.labels(idx);
            match dot {
                Dot::One if e1 == 1 => s[(self.index(0, e2, n), idx)] = ONE,
                Dot::Two if e2 == 1 => s[(self.index(e1, 0, n), idx)] = ONE,
                _ => {}
            }
        }
        s
    }

    /// Like [`HilbertSpace::sigma_minus`] but takes the dot as 1 or 2.
    pub fn sigma_minus_at(&self, which: usize) -> Result<OperatorMatrix> {
        Ok(self.sigma_minus(Dot::from_index(which)?))
    }

    pub fn sigma_plus(&self, dot: Dot) -> OperatorMatrix {
        self.sigma_minus(dot).adjoint()
    }

    /// Total excitation number `a†a + σ₊¹σ₋¹ + σ₊²σ₋²`.
    pub fn excitation_number(&self) -> OperatorMatrix {
        DMatrix::from_diagonal(&DVector::from_iterator(
            self.dim(),
            (0..self.dim()).map(|idx| {
                let (e1, e2, n) = self.labels(idx);
                C64::from((n + e1 + e2) as f64)
            }),
        ))
    }

    /// Projector onto the top Fock level, summed over the dot states.
    pub fn top_fock_projector(&self) -> OperatorMatrix {
        DMatrix::from_diagonal(&DVector::from_iterator(
            self.dim(),
            (0..self.dim()).map(|idx| if self.labels(idx).2 == self.n_max { ONE } else { ZERO }),
        ))
    }
}

pub fn commutator(a: &OperatorMatrix, b: &OperatorMatrix) -> OperatorMatrix {
    a * b - b * a
}

/// Largest entry modulus.
pub fn max_abs(m: &OperatorMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}
