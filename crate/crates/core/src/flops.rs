//! Arithmetic operation tally used to instrument the estimators.
//!
//! Only additions, subtractions, multiplications, divisions and square
//! roots are counted. Trigonometric evaluations are not: the closed-form
//! complexity model assumes they come from tables. Diagnostic quantities
//! recorded in traces (residual energies) are not counted either.

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FlopCounter {
    total: u64,
}

impl FlopCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    #[inline]
    pub fn add(&mut self, ops: usize) {
        self.total += ops as u64;
    }

    /// Dot product of two length-`len` vectors: `len` multiplies and `len`
    /// accumulations.
    #[inline]
    pub fn dot(&mut self, len: usize) {
        self.add(2 * len);
    }

    /// `y -= a * x` over `len` samples.
    #[inline]
    pub fn axpy(&mut self, len: usize) {
        self.add(2 * len);
    }

    pub fn merge(&mut self, other: FlopCounter) {
        self.total += other.total;
    }
}
