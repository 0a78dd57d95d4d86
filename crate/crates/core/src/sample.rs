//! Seeded random sampling of basis elements, elements and paths.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgebraContext, BasisElement, Element, Monomial};
use crate::istate::{IState, LineSet};
use crate::quiver::{edges_from, Path};

pub struct Sampler {
    ctx: AlgebraContext,
    pairs: Vec<(IState, IState)>,
    by_left: HashMap<IState, Vec<IState>>,
    max_exponent: u32,
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(ctx: AlgebraContext, seed: u64, max_exponent: u32) -> Self {
        let pairs = ctx.pairs();
        let mut by_left: HashMap<IState, Vec<IState>> = HashMap::new();
        for (x, y) in &pairs {
            by_left.entry(*x).or_default().push(*y);
        }
        Self {
            ctx,
            pairs,
            by_left,
            max_exponent,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn context(&self) -> AlgebraContext {
        self.ctx
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn random_parts(&mut self) -> (Monomial, LineSet) {
        let n = self.ctx.width();
        let exps: Vec<u32> = (0..n).map(|_| self.rng.gen_range(0..=self.max_exponent)).collect();
        let c = self
            .ctx
            .orientation()
            .iter()
            .filter(|_| self.rng.gen_bool(0.5))
            .fold(LineSet::EMPTY, |c, i| c.with(i));
        (Monomial::from_exponents(&exps), c)
    }

    /// A nonzero basis element between the given states, when one is found.
    pub fn basis_between(&mut self, x: IState, y: IState) -> Option<BasisElement> {
        for attempt in 0..64 {
            let (u, c) = if attempt < 48 {
                self.random_parts()
            } else {
                (Monomial::ONE, LineSet::EMPTY)
            };
            if let Some(b) = self.ctx.reduce(BasisElement::new(x, y, u, c)) {
                return Some(b);
            }
        }
        None
    }

    /// A random nonzero basis element, if the algebra has any.
    pub fn basis(&mut self) -> Option<BasisElement> {
        let &(x, y) = self.pairs.choose(&mut self.rng)?;
        self.basis_between(x, y)
    }

    /// A random nonzero basis element with the given left idempotent.
    pub fn basis_from(&mut self, x: IState) -> Option<BasisElement> {
        let y = *self.by_left.get(&x)?.choose(&mut self.rng)?;
        self.basis_between(x, y)
    }

    /// A sum of up to `terms` random basis elements.
    pub fn element(&mut self, terms: usize) -> Element {
        let count = self.rng.gen_range(1..=terms.max(1));
        let basis: Vec<BasisElement> = (0..count).filter_map(|_| self.basis()).collect();
        Element::from_basis_iter(self.ctx, basis)
    }

    /// A random walk of at most `len` edges.
    pub fn path(&mut self, len: usize) -> Option<Path> {
        let states = self.ctx.states();
        let start = *states.choose(&mut self.rng)?;
        let mut cur = start;
        let mut edges = Vec::new();
        for _ in 0..len {
            let out = edges_from(&self.ctx, &cur).ok()?;
            let &(e, next) = out.choose(&mut self.rng)?;
            edges.push(e);
            cur = next;
        }
        Path::new(&self.ctx, start, edges).ok()
    }
}
