use core::fmt;
use core::ops::Add;

/// Counts of negative, zero and positive eigenvalues of a symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Inertia {
    pub n_minus: usize,
    pub n_zero: usize,
    pub n_plus: usize,
}

impl Inertia {
    pub const fn new(n_minus: usize, n_zero: usize, n_plus: usize) -> Self {
        Self {
            n_minus,
            n_zero,
            n_plus,
        }
    }

    pub const fn dimension(&self) -> usize {
        self.n_minus + self.n_zero + self.n_plus
    }

    pub const fn as_array(&self) -> [usize; 3] {
        [self.n_minus, self.n_zero, self.n_plus]
    }

    /// Componentwise difference, `None` if any component would go negative.
    pub fn checked_sub(self, rhs: Self) -> Option<Self> {
        Some(Self {
            n_minus: self.n_minus.checked_sub(rhs.n_minus)?,
            n_zero: self.n_zero.checked_sub(rhs.n_zero)?,
            n_plus: self.n_plus.checked_sub(rhs.n_plus)?,
        })
    }
}

impl Add for Inertia {
    type Output = Inertia;

    fn add(self, rhs: Self) -> Self {
        Self {
            n_minus: self.n_minus + rhs.n_minus,
            n_zero: self.n_zero + rhs.n_zero,
            n_plus: self.n_plus + rhs.n_plus,
        }
    }
}

impl fmt::Display for Inertia {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.n_minus, self.n_zero, self.n_plus)
    }
}
