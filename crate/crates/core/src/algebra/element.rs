use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul};

use super::{AlgebraContext, BasisElement, GradingVector};
use crate::error::{Error, Result};
use crate::istate::IState;

/// An `F_2`-linear combination of canonical basis elements.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element {
    ctx: AlgebraContext,
    terms: BTreeSet<BasisElement>,
}

impl Element {
    pub fn zero(ctx: AlgebraContext) -> Self {
        Self {
            ctx,
            terms: BTreeSet::new(),
        }
    }

    /// Sums canonical basis elements; repeated terms cancel in pairs.
    pub fn from_basis_iter(ctx: AlgebraContext, iter: impl IntoIterator<Item = BasisElement>) -> Self {
        let mut e = Self::zero(ctx);
        for b in iter {
            e.toggle(b);
        }
        e
    }

    pub fn from_basis(ctx: AlgebraContext, b: BasisElement) -> Self {
        Self::from_basis_iter(ctx, [b])
    }

    pub(crate) fn from_option(ctx: AlgebraContext, b: Option<BasisElement>) -> Self {
        Self::from_basis_iter(ctx, b)
    }

    /// Validates raw terms, reduces each to canonical form and sums.
    pub fn from_raw_terms(
        ctx: AlgebraContext,
        iter: impl IntoIterator<Item = BasisElement>,
    ) -> Result<Self> {
        let mut e = Self::zero(ctx);
        for b in iter {
            if let Some(b) = ctx.basis(b.left, b.right, b.u, b.c)? {
                e.toggle(b);
            }
        }
        Ok(e)
    }

    pub fn context(&self) -> AlgebraContext {
        self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = &BasisElement> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, b: &BasisElement) -> bool {
        self.terms.contains(b)
    }

    pub(crate) fn toggle(&mut self, b: BasisElement) {
        if !self.terms.remove(&b) {
            self.terms.insert(b);
        }
    }

    fn same_context(&self, other: &Self) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(Error::ContextMismatch(self.ctx.to_string(), other.ctx.to_string()))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_context(other)?;
        let mut out = self.clone();
        for b in &other.terms {
            out.toggle(*b);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_context(other)?;
        let mut out = Self::zero(self.ctx);
        for a in &self.terms {
            for b in other.terms.range(BasisElement::lower_bound(a.right)..) {
                if b.left != a.right {
                    break;
                }
                if let Some(p) = self.ctx.mul_basis(a, b) {
                    out.toggle(p);
                }
            }
        }
        Ok(out)
    }

    pub fn differential(&self) -> Self {
        let mut out = Self::zero(self.ctx);
        for b in &self.terms {
            for t in self.ctx.differential_terms(b) {
                out.toggle(t);
            }
        }
        out
    }

    /// `I_x · self · I_y`.
    pub fn corner(&self, x: &IState, y: &IState) -> Self {
        Self::from_basis_iter(
            self.ctx,
            self.terms
                .iter()
                .filter(|b| b.left == *x && b.right == *y)
                .copied(),
        )
    }

    /// The common grading of all terms, or `None` for zero or inhomogeneous elements.
    pub fn grading(&self) -> Option<GradingVector> {
        let mut iter = self.terms.iter();
        let g = self.ctx.grading(iter.next()?);
        iter.all(|b| self.ctx.grading(b) == g).then_some(g)
    }

    /// Left and right idempotents shared by every term.
    pub fn endpoints(&self) -> Option<(IState, IState)> {
        let first = self.terms.iter().next()?;
        self.terms
            .iter()
            .all(|b| b.left == first.left && b.right == first.right)
            .then_some((first.left, first.right))
    }

    /// Applies a basis-level map to every term.
    pub fn map_terms(
        &self,
        ctx: AlgebraContext,
        f: impl Fn(&BasisElement) -> Option<BasisElement>,
    ) -> Self {
        Self::from_basis_iter(ctx, self.terms.iter().filter_map(f))
    }
}

impl BasisElement {
    /// The smallest basis element with the given left idempotent.
    fn lower_bound(left: IState) -> Self {
        Self::new(
            left,
            IState::from_bits(left.width(), 0),
            super::Monomial::ONE,
            crate::istate::LineSet::EMPTY,
        )
    }
}

impl Add for &Element {
    type Output = Element;

    /// Panics when the contexts differ; see [`Element::checked_add`].
    fn add(self, rhs: &Element) -> Element {
        self.checked_add(rhs).expect("adding elements of different algebras")
    }
}

impl Mul for &Element {
    type Output = Element;

    /// Panics when the contexts differ; see [`Element::checked_mul`].
    fn mul(self, rhs: &Element) -> Element {
        self.checked_mul(rhs).expect("multiplying elements of different algebras")
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut shown: Vec<String> = self.terms.iter().map(|b| b.to_string()).collect();
        shown.sort();
        f.write_str(&shown.join("+"))
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
