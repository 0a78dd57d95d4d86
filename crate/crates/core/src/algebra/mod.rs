//! The algebras `B0(n,k)`, `B(n,k,S)` and their truncations, with canonical bases.
//!
//! A basis element is `C_c · U^r · f_{x,y}` with `c ⊆ S` squarefree. In the
//! quotient flavors a basis element is canonical when `x, y` are not far and
//! `U^r` is not divisible by the monomial of any generating interval.

mod element;
mod grading;
mod monomial;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::istate::{
    check_width, enumerate_istates, far_bits, weight_entry, GeneratingMasks, IState, LineSet,
};

pub use element::Element;
pub use grading::GradingVector;
pub use monomial::Monomial;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Flavor {
    /// The unreduced algebra, no exterior variables.
    B0,
    B,
    /// States avoiding coordinate 0.
    Br,
    /// States avoiding coordinate n.
    Bl,
    /// States avoiding both 0 and n.
    Bprime,
}

impl Flavor {
    pub const QUOTIENTS: [Flavor; 4] = [Flavor::B, Flavor::Br, Flavor::Bl, Flavor::Bprime];

    pub fn name(&self) -> &'static str {
        match self {
            Flavor::B0 => "b0",
            Flavor::B => "b",
            Flavor::Br => "br",
            Flavor::Bl => "bl",
            Flavor::Bprime => "bprime",
        }
    }

    /// The flavor obtained by reflecting `0 <-> n`.
    pub fn reflect(&self) -> Self {
        match self {
            Flavor::Br => Flavor::Bl,
            Flavor::Bl => Flavor::Br,
            other => *other,
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "b0" => Ok(Flavor::B0),
            "b" => Ok(Flavor::B),
            "br" => Ok(Flavor::Br),
            "bl" => Ok(Flavor::Bl),
            "bprime" => Ok(Flavor::Bprime),
            _ => Err(Error::Parse {
                pos: 0,
                msg: format!("unknown flavor {s:?}"),
            }),
        }
    }
}

/// A basis element `C_c · U^u · f_{left,right}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisElement {
    pub left: IState,
    pub right: IState,
    pub u: Monomial,
    pub c: LineSet,
}

impl BasisElement {
    pub fn new(left: IState, right: IState, u: Monomial, c: LineSet) -> Self {
        Self { left, right, u, c }
    }

    pub fn generator(left: IState, right: IState) -> Self {
        Self::new(left, right, Monomial::ONE, LineSet::EMPTY)
    }
}

impl fmt::Debug for BasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Which family of generators an algebra-level sum `Σ_x g·I_x` refers to.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum GeneratorKind {
    R,
    L,
    U,
    C,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct AlgebraContext {
    n: u8,
    k: u8,
    orientation: LineSet,
    flavor: Flavor,
}

impl AlgebraContext {
    pub fn new(n: usize, k: usize, orientation: LineSet, flavor: Flavor) -> Result<Self> {
        check_width(n)?;
        if k > n + 1 {
            return Err(Error::SizeOutOfRange { n, k });
        }
        if !orientation.is_subset(LineSet::all(n)) {
            let line = orientation.last().unwrap_or(0);
            return Err(Error::LineOutOfRange { n, line });
        }
        if flavor == Flavor::B0 && !orientation.is_empty() {
            return Err(Error::UnsupportedFlavor {
                flavor: flavor.to_string(),
                what: "a nonempty orientation set".into(),
            });
        }
        Ok(Self {
            n: n as u8,
            k: k as u8,
            orientation,
            flavor,
        })
    }

    /// Every context of the given width and flavor: all sizes, and every
    /// orientation set the flavor allows.
    pub fn all(n: usize, flavor: Flavor) -> Result<Vec<Self>> {
        check_width(n)?;
        let mut out = Vec::new();
        for k in 0..=n + 1 {
            for s in LineSet::all_subsets(n) {
                if flavor == Flavor::B0 && !s.is_empty() {
                    continue;
                }
                out.push(Self::new(n, k, s, flavor)?);
            }
        }
        Ok(out)
    }

    /// Convenience constructor taking the orientation set as a slice of lines.
    pub fn with_lines(n: usize, k: usize, lines: &[usize], flavor: Flavor) -> Result<Self> {
        Self::new(n, k, LineSet::new(n, lines)?, flavor)
    }

    pub fn width(&self) -> usize {
        self.n as usize
    }

    pub fn size(&self) -> usize {
        self.k as usize
    }

    pub fn orientation(&self) -> LineSet {
        self.orientation
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    /// The same context with another flavor and orientation set.
    pub fn variant(&self, orientation: LineSet, flavor: Flavor) -> Result<Self> {
        Self::new(self.width(), self.size(), orientation, flavor)
    }

    pub fn is_admissible(&self, x: &IState) -> bool {
        let n = self.width();
        if x.width() != n || x.size() != self.size() {
            return false;
        }
        match self.flavor {
            Flavor::B0 | Flavor::B => true,
            Flavor::Br => !x.contains(0),
            Flavor::Bl => !x.contains(n),
            Flavor::Bprime => !x.contains(0) && !x.contains(n),
        }
    }

    pub fn check_state(&self, x: &IState) -> Result<()> {
        if self.is_admissible(x) {
            Ok(())
        } else {
            Err(Error::Inadmissible {
                state: x.to_string(),
                context: self.to_string(),
            })
        }
    }

    /// Vertices of the algebra in lexicographic order.
    pub fn states(&self) -> Vec<IState> {
        enumerate_istates(self.width(), self.size())
            .expect("context parameters are validated")
            .into_iter()
            .filter(|x| self.is_admissible(x))
            .collect()
    }

    /// Pairs of vertices that are not far (all pairs for `B0`).
    pub fn pairs(&self) -> Vec<(IState, IState)> {
        let states = self.states();
        let mut out = Vec::new();
        for &x in &states {
            for &y in &states {
                if self.flavor == Flavor::B0 || !far_bits(x.bits(), y.bits()) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn is_quotient(&self) -> bool {
        self.flavor != Flavor::B0
    }

    /// Sends a raw basis element to its canonical form, or `None` when it is zero.
    pub fn reduce(&self, b: BasisElement) -> Option<BasisElement> {
        if !self.is_quotient() {
            return Some(b);
        }
        let (x, y) = (b.left.bits(), b.right.bits());
        if far_bits(x, y) {
            return None;
        }
        let support = b.u.support();
        if GeneratingMasks::new(self.width(), x, y).any(|g| support & g == g) {
            return None;
        }
        Some(b)
    }

    /// Validates the parts of a basis element, then reduces it.
    pub fn basis(
        &self,
        left: IState,
        right: IState,
        u: Monomial,
        c: LineSet,
    ) -> Result<Option<BasisElement>> {
        self.check_state(&left)?;
        self.check_state(&right)?;
        if let Some(bad) = c.difference(self.orientation).first() {
            return Err(Error::NotOriented(bad));
        }
        let n = self.width();
        if let Some(i) = (n + 1..=crate::istate::MAX_LINES).find(|&i| u.exponent(i) > 0) {
            return Err(Error::LineOutOfRange { n, line: i });
        }
        Ok(self.reduce(BasisElement::new(left, right, u, c)))
    }

    /// The monomial `Π U_i^{defect_i / 2}` with `f_{x,y} · f_{y,z} = U^defect · f_{x,z}`.
    pub(crate) fn defect_monomial(&self, x: &IState, y: &IState, z: &IState) -> Monomial {
        let n = self.width();
        let (x, y, z) = (x.bits(), y.bits(), z.bits());
        let mut m = Monomial::ONE;
        for i in 1..=n {
            let d = weight_entry(n, y, z, i).abs() - weight_entry(n, x, z, i).abs()
                + weight_entry(n, x, y, i).abs();
            debug_assert!(d >= 0 && d % 2 == 0);
            m.set_exponent(i, (d / 2) as u32);
        }
        m
    }

    /// Product of two canonical basis elements.
    pub fn mul_basis(&self, a: &BasisElement, b: &BasisElement) -> Option<BasisElement> {
        if a.right != b.left || !a.c.intersection(b.c).is_empty() {
            return None;
        }
        let u = a
            .u
            .times(&b.u)
            .times(&self.defect_monomial(&a.left, &a.right, &b.right));
        self.reduce(BasisElement::new(a.left, b.right, u, a.c.union(b.c)))
    }

    /// Terms of the differential of a canonical basis element: each `C_j -> U_j`.
    pub fn differential_terms(&self, b: &BasisElement) -> impl Iterator<Item = BasisElement> + '_ {
        let b = *b;
        b.c.iter()
            .filter_map(move |j| {
                let mut u = b.u;
                u.set_exponent(j, u.exponent(j) + 1);
                self.reduce(BasisElement::new(b.left, b.right, u, b.c.without(j)))
            })
            .collect::<Vec<_>>()
            .into_iter()
    }

    /// Canonical basis elements of `I_x · A · I_y` in doubled Alexander degree `alex2`,
    /// ordered by the exterior part.
    pub fn graded_piece_basis(
        &self,
        x: &IState,
        y: &IState,
        alex2: &[i32],
    ) -> Result<Vec<BasisElement>> {
        self.check_state(x)?;
        self.check_state(y)?;
        let n = self.width();
        if alex2.len() != n {
            return Err(Error::LineOutOfRange { n, line: alex2.len() });
        }
        if self.is_quotient() && far_bits(x.bits(), y.bits()) {
            return Ok(Vec::new());
        }
        let mut base = [0i32; crate::istate::MAX_LINES];
        for i in 1..=n {
            let r = alex2[i - 1] - weight_entry(n, x.bits(), y.bits(), i).abs();
            if r < 0 || r % 2 != 0 {
                return Ok(Vec::new());
            }
            base[i - 1] = r / 2;
        }
        let mut out = Vec::new();
        let s = self.orientation.bits() >> 1;
        let mut sub = 0u32;
        loop {
            // sub runs over subsets of S, in increasing bit order
            let c = LineSet::from_bits(sub << 1);
            let mut u = Monomial::ONE;
            let ok = (1..=n).all(|i| {
                let e = base[i - 1] - c.contains(i) as i32;
                u.set_exponent(i, e.max(0) as u32);
                e >= 0
            });
            if ok {
                if let Some(b) = self.reduce(BasisElement::new(*x, *y, u, c)) {
                    out.push(b);
                }
            }
            if sub == s {
                break;
            }
            sub = (sub.wrapping_sub(s)) & s;
        }
        Ok(out)
    }

    /// `I_x` as an element.
    pub fn idempotent(&self, x: &IState) -> Result<Element> {
        self.gen_f(x, x)
    }

    /// `Σ_x I_x`.
    pub fn one(&self) -> Element {
        Element::from_basis_iter(
            *self,
            self.states().into_iter().map(|x| BasisElement::generator(x, x)),
        )
    }

    /// The generator `f_{x,y}` (zero in the quotient flavors when `x, y` are far).
    pub fn gen_f(&self, x: &IState, y: &IState) -> Result<Element> {
        Ok(Element::from_option(
            *self,
            self.basis(*x, *y, Monomial::ONE, LineSet::EMPTY)?,
        ))
    }

    /// `Σ_x g·I_x` over the vertices where the generator `g` is defined.
    pub fn gen_sum(&self, kind: GeneratorKind, i: usize) -> Result<Element> {
        let n = self.width();
        if i == 0 || i > n {
            return Err(Error::LineOutOfRange { n, line: i });
        }
        if kind == GeneratorKind::C && !self.orientation.contains(i) {
            return Err(Error::NotOriented(i));
        }
        let mut terms = Vec::new();
        for x in self.states() {
            let b = match kind {
                GeneratorKind::R | GeneratorKind::L => {
                    let (from, to) = if kind == GeneratorKind::R { (i - 1, i) } else { (i, i - 1) };
                    if !x.contains(from) || x.contains(to) {
                        continue;
                    }
                    let y = x.with_moved(from, to);
                    if !self.is_admissible(&y) {
                        continue;
                    }
                    BasisElement::generator(x, y)
                }
                GeneratorKind::U => {
                    BasisElement::new(x, x, Monomial::from_lines(1 << i), LineSet::EMPTY)
                }
                GeneratorKind::C => BasisElement::new(x, x, Monomial::ONE, LineSet::EMPTY.with(i)),
            };
            terms.extend(self.reduce(b));
        }
        Ok(Element::from_basis_iter(*self, terms))
    }

    /// Parses an element in the canonical text grammar.
    pub fn parse_element(&self, text: &str) -> Result<Element> {
        crate::text::parse_element(self, text)
    }
}

impl fmt::Display for AlgebraContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.flavor {
            Flavor::B0 => return write!(f, "B0({},{})", self.n, self.k),
            Flavor::B => "B",
            Flavor::Br => "Br",
            Flavor::Bl => "Bl",
            Flavor::Bprime => "B'",
        };
        write!(f, "{name}({},{},{})", self.n, self.k, self.orientation)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(n: usize, m: &[usize]) -> IState {
        IState::new(n, m).unwrap()
    }

    #[test]
    fn context_validation() {
        assert!(AlgebraContext::with_lines(2, 4, &[], Flavor::B).is_err());
        assert!(AlgebraContext::with_lines(2, 1, &[3], Flavor::B).is_err());
        assert!(AlgebraContext::with_lines(2, 1, &[1], Flavor::B0).is_err());
        assert!(AlgebraContext::with_lines(0, 0, &[], Flavor::B).is_err());
        let ctx = AlgebraContext::with_lines(3, 1, &[], Flavor::Bprime).unwrap();
        assert_eq!(ctx.states(), vec![st(3, &[1]), st(3, &[2])]);
    }

    #[test]
    fn piece_basis_small() {
        let ctx = AlgebraContext::with_lines(1, 1, &[1], Flavor::B).unwrap();
        let x = st(1, &[0]);
        let piece = ctx.graded_piece_basis(&x, &x, &[2]).unwrap();
        let shown: Vec<_> = piece.iter().map(|b| b.to_string()).collect();
        assert_eq!(shown, vec!["U1^1*f[{0},{0}]", "C1*f[{0},{0}]"]);
        assert!(ctx.graded_piece_basis(&x, &x, &[1]).unwrap().is_empty());
    }

    #[test]
    fn u_vanishing_is_a_generating_interval() {
        // x ∩ {i-1, i} = ∅ makes [i, i] a generating interval of (x, x).
        let ctx = AlgebraContext::with_lines(3, 1, &[], Flavor::B).unwrap();
        let x = st(3, &[0]);
        for i in 2..=3 {
            let b = BasisElement::new(x, x, Monomial::from_lines(1 << i), LineSet::EMPTY);
            assert_eq!(ctx.reduce(b), None);
        }
        let b = BasisElement::new(x, x, Monomial::from_lines(1 << 1), LineSet::EMPTY);
        assert!(ctx.reduce(b).is_some());
    }

    #[test]
    fn gen_sum_respects_truncation() {
        let ctx = AlgebraContext::with_lines(2, 1, &[], Flavor::Br).unwrap();
        assert!(ctx.gen_sum(GeneratorKind::R, 1).unwrap().is_zero());
        assert_eq!(ctx.gen_sum(GeneratorKind::R, 2).unwrap().to_string(), "f[{1},{2}]");
    }
}
