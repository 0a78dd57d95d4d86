use std::fmt;

use crate::istate::MAX_LINES;

/// A monomial in the central variables `U_1, ..., U_n`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial([u16; MAX_LINES]);

impl Monomial {
    pub const ONE: Self = Self([0; MAX_LINES]);

    /// `exponents[i - 1]` is the exponent of `U_i`.
    pub fn from_exponents(exponents: &[u32]) -> Self {
        assert!(exponents.len() <= MAX_LINES);
        let mut m = Self::ONE;
        for (slot, &e) in m.0.iter_mut().zip(exponents) {
            *slot = e as u16;
        }
        m
    }

    /// The squarefree product of `U_i` over a line mask.
    pub fn from_lines(mask: u32) -> Self {
        let mut m = Self::ONE;
        for i in 1..=MAX_LINES {
            if mask >> i & 1 == 1 {
                m.0[i - 1] = 1;
            }
        }
        m
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0[i - 1] as u32
    }

    pub fn set_exponent(&mut self, i: usize, e: u32) {
        self.0[i - 1] = e as u16;
    }

    pub fn exponents(&self, n: usize) -> Vec<u32> {
        self.0[..n].iter().map(|&e| e as u32).collect()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Lines with a positive exponent.
    pub fn support(&self) -> u32 {
        (1..=MAX_LINES)
            .filter(|&i| self.0[i - 1] > 0)
            .fold(0, |m, i| m | 1 << i)
    }

    /// Whether every `U_i` with `i` in `mask` divides the monomial.
    #[inline]
    pub fn covers(&self, mask: u32) -> bool {
        self.support() & mask == mask
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn times(&self, other: &Self) -> Self {
        let mut m = *self;
        for (a, b) in m.0.iter_mut().zip(&other.0) {
            *a += *b;
        }
        m
    }

    /// `self / other`, or `None` when `other` does not divide `self`.
    pub fn quotient(&self, other: &Self) -> Option<Self> {
        let mut m = *self;
        for (a, b) in m.0.iter_mut().zip(&other.0) {
            *a = a.checked_sub(*b)?;
        }
        Some(m)
    }

    /// The image under `U_i -> U_{n+1-i}`.
    pub fn reflect(&self, n: usize) -> Self {
        let mut m = Self::ONE;
        for i in 1..=n {
            m.0[n - i] = self.0[i - 1];
        }
        m
    }
}

impl fmt::Display for Monomial {
    /// `U1^2*U3^1`, or `1` for the empty monomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                if !first {
                    f.write_str("*")?;
                }
                write!(f, "U{}^{}", i + 1, e)?;
                first = false;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
