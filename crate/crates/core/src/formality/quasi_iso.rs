//! Direct checks of the explicit maps between an algebra and its homology.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::algebra::{AlgebraContext, BasisElement, Element, Flavor, GeneratorKind, Monomial};
use crate::error::{Error, Result};
use crate::f2::{BitVec, Elimination};
use crate::homology::{degrees_for_pair, theorem_basis, theorem_decompose, GradedComplex, PieceHomology};
use crate::istate::LineSet;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum MapKind {
    /// The differential vanishes; the identity is the map.
    NoDifferential,
    /// `F_2[U_i : i ∉ S]` included into the single idempotent piece.
    Inclusion,
    /// Projection sending every `C_i` and every `U_i` with `i ∈ S` to zero.
    ZeroOnExterior,
    /// Homology sent to the closed-form representatives.
    Section,
}

impl fmt::Display for MapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The explicit map available for a context, if any.
pub fn map_kind_for(ctx: &AlgebraContext) -> Option<MapKind> {
    let (n, k, s, flavor) = (ctx.width(), ctx.size(), ctx.orientation(), ctx.flavor());
    if flavor == Flavor::B0 || s.is_empty() || k == 0 {
        return Some(MapKind::NoDifferential);
    }
    if flavor == Flavor::B && k == n + 1 {
        return Some(MapKind::Inclusion);
    }
    if k == n && matches!(flavor, Flavor::B | Flavor::Br | Flavor::Bl) {
        return Some(MapKind::ZeroOnExterior);
    }
    let first = LineSet::new(n, &[1]).expect("line 1");
    let last = LineSet::new(n, &[n]).expect("line n");
    let section = match flavor {
        Flavor::Br => s == first,
        Flavor::Bl => s == last,
        Flavor::Bprime => s.is_subset(first.union(last)) || k + 1 == n,
        _ => false,
    };
    section.then_some(MapKind::Section)
}

#[derive(Clone, Debug, Serialize)]
pub struct QuasiIsoReport {
    pub context: String,
    pub map: MapKind,
    pub cap: i32,
    pub pieces: usize,
    pub classes: usize,
    pub products: usize,
    pub failures: Vec<String>,
}

impl QuasiIsoReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Piece {
    x: crate::istate::IState,
    y: crate::istate::IState,
    alex2: Vec<i32>,
}

fn pieces(ctx: &AlgebraContext, cap: i32) -> Vec<Piece> {
    let mut out = Vec::new();
    for (x, y) in ctx.pairs() {
        for alex2 in degrees_for_pair(&x, &y, cap) {
            out.push(Piece { x, y, alex2 });
        }
    }
    out
}

/// Checks that `kind` is a dg quasi-isomorphism in every piece with
/// `Σ alex2 <= cap`.
pub fn verify_quasi_iso(ctx: &AlgebraContext, kind: MapKind, cap: i32) -> Result<QuasiIsoReport> {
    if map_kind_for(ctx) != Some(kind) {
        return Err(Error::UnsupportedFlavor {
            flavor: ctx.to_string(),
            what: format!("the {kind} map"),
        });
    }
    let mut rep = QuasiIsoReport {
        context: ctx.to_string(),
        map: kind,
        cap,
        pieces: 0,
        classes: 0,
        products: 0,
        failures: Vec::new(),
    };
    match kind {
        MapKind::NoDifferential => check_no_differential(ctx, cap, &mut rep)?,
        MapKind::Inclusion => check_inclusion(ctx, cap, &mut rep)?,
        MapKind::ZeroOnExterior => check_projection(ctx, cap, &mut rep)?,
        MapKind::Section => check_section(ctx, cap, &mut rep)?,
    }
    Ok(rep)
}

fn check_no_differential(ctx: &AlgebraContext, cap: i32, rep: &mut QuasiIsoReport) -> Result<()> {
    for i in ctx.orientation().iter() {
        let g = ctx.gen_sum(GeneratorKind::C, i)?;
        if !g.differential().is_zero() {
            rep.failures.push(format!("d(C{i}) = {} is not zero", g.differential()));
        }
    }
    for p in pieces(ctx, cap) {
        rep.pieces += 1;
        for b in ctx.graded_piece_basis(&p.x, &p.y, &p.alex2)? {
            rep.classes += 1;
            if ctx.differential_terms(&b).next().is_some() {
                rep.failures.push(format!("d({b}) is not zero"));
            }
        }
    }
    Ok(())
}

fn check_inclusion(ctx: &AlgebraContext, cap: i32, rep: &mut QuasiIsoReport) -> Result<()> {
    let s = ctx.orientation();
    let image = |alex2: &[i32]| -> Option<Monomial> {
        let free = alex2
            .iter()
            .enumerate()
            .all(|(i, &a)| a % 2 == 0 && (a == 0 || !s.contains(i + 1)));
        free.then(|| Monomial::from_exponents(&alex2.iter().map(|&a| (a / 2) as u32).collect::<Vec<_>>()))
    };
    let mut images: Vec<(BasisElement, i32)> = Vec::new();
    for p in pieces(ctx, cap) {
        rep.pieces += 1;
        let h = PieceHomology::build(ctx, &p.x, &p.y, &p.alex2)?;
        let rank: usize = h.ranks().values().sum();
        let Some(u) = image(&p.alex2) else {
            if rank != 0 {
                rep.failures.push(format!("{:?}: homology of rank {rank} outside the polynomial image", p.alex2));
            }
            continue;
        };
        rep.classes += 1;
        let Some(b) = ctx.reduce(BasisElement::new(p.x, p.y, u, LineSet::EMPTY)) else {
            rep.failures.push(format!("{u} vanishes in {ctx}"));
            continue;
        };
        let e = Element::from_basis(*ctx, b);
        let m = ctx.maslov(&b);
        if !e.differential().is_zero() || h.is_boundary(m, &e)? || rank != 1 {
            rep.failures.push(format!("{b} does not generate the homology of its piece (rank {rank})"));
        }
        images.push((b, p.alex2.iter().sum()));
    }
    for (a, da) in &images {
        for (b, db) in &images {
            if da + db > cap {
                continue;
            }
            rep.products += 1;
            let want = ctx.reduce(BasisElement::new(a.left, b.right, a.u.times(&b.u), LineSet::EMPTY));
            if ctx.mul_basis(a, b) != want {
                rep.failures.push(format!("inclusion is not multiplicative on {a} * {b}"));
            }
        }
    }
    Ok(())
}

/// `None` when the projection kills the basis element.
fn project(ctx: &AlgebraContext, b: &BasisElement) -> Option<BasisElement> {
    let s = ctx.orientation();
    (b.c.is_empty() && s.iter().all(|i| b.u.exponent(i) == 0)).then_some(*b)
}

fn check_projection(ctx: &AlgebraContext, cap: i32, rep: &mut QuasiIsoReport) -> Result<()> {
    let mut kernel: Vec<BasisElement> = Vec::new();
    for p in pieces(ctx, cap) {
        rep.pieces += 1;
        let complex = GradedComplex::build(ctx, &p.x, &p.y, &p.alex2)?;
        let basis = ctx.graded_piece_basis(&p.x, &p.y, &p.alex2)?;
        for b in &basis {
            if ctx.differential_terms(b).any(|t| project(ctx, &t).is_some()) {
                rep.failures.push(format!("projection of d({b}) is not zero"));
            }
            if project(ctx, b).is_none() {
                kernel.push(*b);
            }
        }
        let image: Vec<BasisElement> = basis.iter().filter_map(|b| project(ctx, b)).collect();
        let index: HashMap<BasisElement, usize> = image.iter().enumerate().map(|(i, b)| (*b, i)).collect();
        let h = PieceHomology::compute(complex);
        let mut vectors = Vec::new();
        for (m, _) in h.ranks() {
            for r in h.representatives(m) {
                let mut v = BitVec::zeros(image.len());
                for t in r.terms() {
                    if let Some(b) = project(ctx, t) {
                        v.flip(index[&b]);
                    }
                }
                vectors.push(v);
            }
        }
        rep.classes += vectors.len();
        let rank = Elimination::new(&vectors, image.len()).rank();
        if vectors.len() != image.len() || rank != image.len() {
            rep.failures.push(format!(
                "{}->{} {:?}: homology rank {} vs projected rank {rank} of {}",
                p.x,
                p.y,
                p.alex2,
                vectors.len(),
                image.len()
            ));
        }
    }
    // the kernel must be an ideal: closed under multiplication by generators
    let mut generators = Vec::new();
    for x in ctx.states() {
        for (e, _) in crate::quiver::edges_from(ctx, &x)? {
            let path = crate::quiver::Path::new(ctx, x, vec![e])?;
            generators.extend(crate::quiver::normalize(ctx, &path)?.terms().copied());
        }
    }
    for k in &kernel {
        for g in &generators {
            for prod in [ctx.mul_basis(k, g), ctx.mul_basis(g, k)].into_iter().flatten() {
                rep.products += 1;
                if project(ctx, &prod).is_some() {
                    rep.failures.push(format!("kernel is not an ideal: {k} and {g} give {prod}"));
                }
            }
        }
    }
    Ok(())
}

fn check_section(ctx: &AlgebraContext, cap: i32, rep: &mut QuasiIsoReport) -> Result<()> {
    let mut reps: Vec<(BasisElement, i32)> = Vec::new();
    for p in pieces(ctx, cap) {
        rep.pieces += 1;
        let h = PieceHomology::build(ctx, &p.x, &p.y, &p.alex2)?;
        let theorem = theorem_basis(ctx, &p.x, &p.y, &p.alex2)?;
        let mut by_degree: HashMap<i32, Vec<BitVec>> = HashMap::new();
        for t in &theorem {
            let b = t.representative;
            let e = Element::from_basis(*ctx, b);
            if !e.differential().is_zero() {
                rep.failures.push(format!("{b} is not a cycle"));
                continue;
            }
            let m = ctx.maslov(&b);
            by_degree.entry(m).or_default().push(h.class_coordinates(m, &e)?);
            reps.push((b, p.alex2.iter().sum()));
        }
        rep.classes += theorem.len();
        let ranks = h.ranks();
        for (m, vectors) in &by_degree {
            let r = ranks.get(m).copied().unwrap_or(0);
            if Elimination::new(vectors, r).rank() != vectors.len() || vectors.len() != r {
                rep.failures.push(format!(
                    "{}->{} {:?} degree {m}: {} representatives for rank {r}",
                    p.x,
                    p.y,
                    p.alex2,
                    vectors.len()
                ));
            }
        }
        for (m, r) in ranks {
            if !by_degree.contains_key(&m) {
                rep.failures.push(format!("{}->{} {:?} degree {m}: rank {r} has no representatives", p.x, p.y, p.alex2));
            }
        }
    }
    let mut by_left: HashMap<_, Vec<(BasisElement, i32)>> = HashMap::new();
    for (b, d) in &reps {
        by_left.entry(b.left).or_default().push((*b, *d));
    }
    for (a, da) in &reps {
        let Some(next) = by_left.get(&a.right) else { continue };
        for (b, db) in next {
            if da + db > cap {
                continue;
            }
            rep.products += 1;
            if let Some(prod) = ctx.mul_basis(a, b) {
                if theorem_decompose(ctx, &prod).is_none() {
                    rep.failures.push(format!("{a} * {b} = {prod} leaves the representatives"));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(n: usize, k: usize, s: &[usize], flavor: Flavor) -> AlgebraContext {
        AlgebraContext::with_lines(n, k, s, flavor).unwrap()
    }

    #[test]
    fn kinds_by_family() {
        assert_eq!(map_kind_for(&ctx(3, 3, &[1, 3], Flavor::B)), Some(MapKind::ZeroOnExterior));
        assert_eq!(map_kind_for(&ctx(2, 3, &[1], Flavor::B)), Some(MapKind::Inclusion));
        assert_eq!(map_kind_for(&ctx(3, 1, &[1], Flavor::Br)), Some(MapKind::Section));
        assert_eq!(map_kind_for(&ctx(3, 1, &[2], Flavor::B)), None);
    }

    #[test]
    fn explicit_maps_small() {
        for c in [ctx(3, 3, &[1, 3], Flavor::B), ctx(2, 3, &[1], Flavor::B), ctx(3, 1, &[1], Flavor::Br)] {
            let kind = map_kind_for(&c).unwrap();
            let rep = verify_quasi_iso(&c, kind, 6).unwrap();
            assert!(rep.passed(), "{c}: {:?}", rep.failures);
            assert!(rep.classes > 0);
        }
    }

    #[test]
    fn wrong_kind_is_rejected() {
        assert!(verify_quasi_iso(&ctx(3, 1, &[2], Flavor::B), MapKind::Section, 4).is_err());
    }
}
