//! Length-three Massey products on homology.
//!
//! For classes `[a1], [a2], [a3]` with `[a1 a2] = [a2 a3] = 0`, pick `ξ02, ξ13`
//! with `∂ξ02 = a1 a2` and `∂ξ13 = a2 a3`; the product is the class of
//! `ξ02 a3 + a1 ξ13`. Admissibility also asks that the homology where the
//! witnesses live vanish, so the class does not depend on the choices.

use std::collections::HashMap;

use serde::Serialize;

use crate::algebra::{AlgebraContext, Element};
use crate::error::{Error, Result};
use crate::homology::{degrees_for_pair, PieceHomology};
use crate::istate::IState;

/// A homogeneous nonzero cycle standing for its homology class.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomClass {
    pub rep: Element,
    pub x: IState,
    pub y: IState,
    pub alex2: Vec<i32>,
    pub maslov: i32,
}

impl HomClass {
    pub fn new(rep: Element) -> Result<Self> {
        let g = rep.grading().ok_or(Error::NotHomogeneous)?;
        let (x, y) = rep.endpoints().ok_or(Error::NotHomogeneous)?;
        if !rep.differential().is_zero() {
            return Err(Error::NotCycle);
        }
        Ok(Self {
            rep,
            x,
            y,
            alex2: g.alex2,
            maslov: g.maslov,
        })
    }
}

fn add(a: &[i32], b: &[i32]) -> Vec<i32> {
    a.iter().zip(b).map(|(p, q)| p + q).collect()
}

/// Homology of graded pieces, computed once per `(x, y, alex2)`.
pub struct HomologyCache {
    ctx: AlgebraContext,
    pieces: HashMap<(IState, IState, Vec<i32>), PieceHomology>,
}

impl HomologyCache {
    pub fn new(ctx: AlgebraContext) -> Self {
        Self {
            ctx,
            pieces: HashMap::new(),
        }
    }

    pub fn context(&self) -> AlgebraContext {
        self.ctx
    }

    pub fn piece(&mut self, x: &IState, y: &IState, alex2: &[i32]) -> Result<&PieceHomology> {
        let key = (*x, *y, alex2.to_vec());
        if !self.pieces.contains_key(&key) {
            let h = PieceHomology::build(&self.ctx, x, y, alex2)?;
            self.pieces.insert(key.clone(), h);
        }
        Ok(&self.pieces[&key])
    }

    pub fn is_boundary(&mut self, e: &Element, x: &IState, y: &IState, alex2: &[i32], m: i32) -> Result<bool> {
        if e.is_zero() {
            return Ok(true);
        }
        self.piece(x, y, alex2)?.is_boundary(m, e)
    }

    /// Rank of the homology of `I_x · B · I_y` in the Maslov degree `m`
    /// summed over every `alex2` with the given single Alexander grading.
    pub fn single_graded_rank(&mut self, x: &IState, y: &IState, single2: i32, m: i32) -> Result<usize> {
        let s = self.ctx.orientation();
        let oriented_max = s.len() as i32 - m;
        if oriented_max < 0 {
            return Ok(0);
        }
        let cap = 2 * oriented_max + single2;
        let mut total = 0;
        for alex2 in degrees_for_pair(x, y, cap.max(0)) {
            let single: i32 = alex2
                .iter()
                .enumerate()
                .map(|(i, &a)| if s.contains(i + 1) { -a } else { a })
                .sum();
            if single == single2 {
                total += self.piece(x, y, &alex2)?.rank(m);
            }
        }
        Ok(total)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct Admissibility {
    /// `[a1 a2] = 0` and `[a2 a3] = 0`.
    pub products_vanish: bool,
    /// The homology holding the witnesses vanishes.
    pub witness_homology_vanishes: bool,
}

impl Admissibility {
    pub fn admissible(&self) -> bool {
        self.products_vanish && self.witness_homology_vanishes
    }
}

fn check_composable(seq: &[HomClass; 3]) -> Result<()> {
    let ctx = seq[0].rep.context();
    if seq.iter().any(|a| a.rep.context() != ctx) || seq[0].y != seq[1].x || seq[1].y != seq[2].x {
        return Err(Error::NotComposable);
    }
    Ok(())
}

pub fn is_massey_admissible3(cache: &mut HomologyCache, seq: &[HomClass; 3]) -> Result<Admissibility> {
    check_composable(seq)?;
    let mut out = Admissibility {
        products_vanish: true,
        witness_homology_vanishes: true,
    };
    for (a, b) in [(&seq[0], &seq[1]), (&seq[1], &seq[2])] {
        let alex2 = add(&a.alex2, &b.alex2);
        let m = a.maslov + b.maslov;
        let product = &a.rep * &b.rep;
        if !cache.is_boundary(&product, &a.x, &b.y, &alex2, m)? {
            out.products_vanish = false;
        }
        if cache.piece(&a.x, &b.y, &alex2)?.rank(m + 1) != 0 {
            out.witness_homology_vanishes = false;
        }
    }
    Ok(out)
}

/// The admissibility conditions with the single Alexander grading in place of
/// the multi-grading for the witness homology.
pub fn is_massey_admissible3_single(cache: &mut HomologyCache, seq: &[HomClass; 3]) -> Result<Admissibility> {
    let mut out = is_massey_admissible3(cache, seq)?;
    let s = cache.context().orientation();
    out.witness_homology_vanishes = true;
    for (a, b) in [(&seq[0], &seq[1]), (&seq[1], &seq[2])] {
        let alex2 = add(&a.alex2, &b.alex2);
        let single: i32 = alex2
            .iter()
            .enumerate()
            .map(|(i, &v)| if s.contains(i + 1) { -v } else { v })
            .sum();
        if cache.single_graded_rank(&a.x, &b.y, single, a.maslov + b.maslov + 1)? != 0 {
            out.witness_homology_vanishes = false;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct MasseyProduct {
    /// Normal form of the class modulo boundaries.
    pub value: Element,
    pub xi02: Element,
    pub xi13: Element,
    pub x: IState,
    pub y: IState,
    pub alex2: Vec<i32>,
    pub maslov: i32,
}

impl MasseyProduct {
    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

/// Solves for `ξ` with `∂ξ = a·b`.
fn witness(cache: &mut HomologyCache, a: &HomClass, b: &HomClass) -> Result<Element> {
    let alex2 = add(&a.alex2, &b.alex2);
    let m = a.maslov + b.maslov;
    let product = &a.rep * &b.rep;
    if product.is_zero() {
        return Ok(Element::zero(a.rep.context()));
    }
    cache
        .piece(&a.x, &b.y, &alex2)?
        .solve_boundary(m, &product)?
        .ok_or_else(|| Error::NotAdmissible(format!("{product} is not a boundary")))
}

/// The Massey product of an admissible sequence, given explicit witnesses.
pub fn massey3_with(
    cache: &mut HomologyCache,
    seq: &[HomClass; 3],
    xi02: Element,
    xi13: Element,
) -> Result<MasseyProduct> {
    let alex2 = add(&add(&seq[0].alex2, &seq[1].alex2), &seq[2].alex2);
    let maslov = seq[0].maslov + seq[1].maslov + seq[2].maslov + 1;
    let raw = &(&xi02 * &seq[2].rep) + &(&seq[0].rep * &xi13);
    let value = if raw.is_zero() {
        raw
    } else {
        cache.piece(&seq[0].x, &seq[2].y, &alex2)?.normal_form(maslov, &raw)?
    };
    Ok(MasseyProduct {
        value,
        xi02,
        xi13,
        x: seq[0].x,
        y: seq[2].y,
        alex2,
        maslov,
    })
}

pub fn massey3(cache: &mut HomologyCache, seq: &[HomClass; 3]) -> Result<MasseyProduct> {
    let adm = is_massey_admissible3(cache, seq)?;
    if !adm.admissible() {
        return Err(Error::NotAdmissible(format!("{adm:?}")));
    }
    let xi02 = witness(cache, &seq[0], &seq[1])?;
    let xi13 = witness(cache, &seq[1], &seq[2])?;
    massey3_with(cache, seq, xi02, xi13)
}

/// Whether two cycles with the same grading represent the same class.
pub fn same_class(cache: &mut HomologyCache, a: &Element, b: &Element) -> Result<bool> {
    let sum = a + b;
    if sum.is_zero() {
        return Ok(true);
    }
    let g = sum.grading().ok_or(Error::NotHomogeneous)?;
    let (x, y) = sum.endpoints().ok_or(Error::NotHomogeneous)?;
    cache.is_boundary(&sum, &x, &y, &g.alex2, g.maslov)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Flavor;

    #[test]
    fn two_line_product() {
        let ctx = AlgebraContext::with_lines(2, 1, &[1], Flavor::B).unwrap();
        let cls = |t: &str| HomClass::new(ctx.parse_element(t).unwrap()).unwrap();
        let seq = [cls("f[{1},{0}]"), cls("f[{0},{1}]"), cls("f[{1},{2}]")];
        let mut cache = HomologyCache::new(ctx);
        assert!(is_massey_admissible3(&mut cache, &seq).unwrap().admissible());
        let mu = massey3(&mut cache, &seq).unwrap();
        assert_eq!(mu.value.to_string(), "C1*f[{1},{2}]");
        assert_eq!(mu.maslov, -1);
        assert_eq!(mu.xi02.to_string(), "C1*f[{1},{1}]");
    }

    #[test]
    fn non_composable_is_an_error() {
        let ctx = AlgebraContext::with_lines(2, 1, &[1], Flavor::B).unwrap();
        let cls = |t: &str| HomClass::new(ctx.parse_element(t).unwrap()).unwrap();
        let seq = [cls("f[{1},{0}]"), cls("f[{1},{2}]"), cls("f[{2},{1}]")];
        let mut cache = HomologyCache::new(ctx);
        assert_eq!(is_massey_admissible3(&mut cache, &seq), Err(Error::NotComposable));
    }
}
