//! The reflection `ρ` (coordinates `a -> n - a`) and the orientation reversal
//! `o` (swap the two idempotents).
//!
//! `ρ` is an algebra isomorphism `B(n,k,S) -> B(n,k,ρS)` exchanging `Br` and
//! `Bl`; `o` is an anti-automorphism of each flavor.

use serde::Serialize;

use crate::algebra::{AlgebraContext, BasisElement, Element};
use crate::error::Result;
use crate::homology::degrees_for_pair;
use crate::quiver::{edges_from, normalize, EdgeLabel, Path};

/// The context receiving `ρ`.
pub fn rho_context(ctx: &AlgebraContext) -> AlgebraContext {
    ctx.variant(ctx.orientation().reflect(ctx.width()), ctx.flavor().reflect())
        .expect("reflection preserves validity")
}

pub fn rho_basis(ctx: &AlgebraContext, b: &BasisElement) -> BasisElement {
    let n = ctx.width();
    BasisElement::new(b.left.reflect(), b.right.reflect(), b.u.reflect(n), b.c.reflect(n))
}

pub fn o_basis(b: &BasisElement) -> BasisElement {
    BasisElement::new(b.right, b.left, b.u, b.c)
}

pub fn rho(a: &Element) -> Element {
    let ctx = a.context();
    let target = rho_context(&ctx);
    a.map_terms(target, |b| target.reduce(rho_basis(&ctx, b)))
}

pub fn o(a: &Element) -> Element {
    let ctx = a.context();
    a.map_terms(ctx, |b| ctx.reduce(o_basis(b)))
}

/// `ρ` on paths: `R_i -> L_{n+1-i}`, loops to mirrored loops.
pub fn rho_path(ctx: &AlgebraContext, p: &Path) -> Result<Path> {
    let n = ctx.width();
    Path::new(
        &rho_context(ctx),
        p.start().reflect(),
        p.edges().iter().map(|e| e.reflect(n)).collect(),
    )
}

/// `o` on paths: reverse the path, exchanging `R_i` and `L_i`.
pub fn o_path(ctx: &AlgebraContext, p: &Path) -> Result<Path> {
    Path::new(
        ctx,
        p.end(),
        p.edges().iter().rev().map(EdgeLabel::opposite).collect(),
    )
}

/// `τ_i -> β_{n+1-i}`, `β_i -> τ_{n+1-i}` on the unrefined grading.
pub fn rho_unrefined(unrefined: &[i32]) -> Vec<i32> {
    let n = unrefined.len() / 2;
    let mut out = vec![0; 2 * n];
    for i in 0..n {
        let j = n - 1 - i;
        out[2 * j + 1] = unrefined[2 * i];
        out[2 * j] = unrefined[2 * i + 1];
    }
    out
}

/// `τ_i <-> β_i` on the unrefined grading.
pub fn o_unrefined(unrefined: &[i32]) -> Vec<i32> {
    unrefined.chunks(2).flat_map(|c| [c[1], c[0]]).collect()
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SymmetryReport {
    pub context: String,
    pub elements: usize,
    pub products: usize,
    pub paths: usize,
    pub failures: Vec<String>,
}

impl SymmetryReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks involutivity, commutation, compatibility with `∂` and the gradings on
/// every basis element with `Σ alex2 <= cap`; the (anti)homomorphism laws on
/// pairs whose degrees sum to at most `cap`; and agreement with the quiver
/// maps on paths of length at most two.
pub fn symmetry_report(ctx: &AlgebraContext, cap: i32) -> Result<SymmetryReport> {
    let mut rep = SymmetryReport {
        context: ctx.to_string(),
        ..Default::default()
    };
    let target = rho_context(ctx);
    let mut fail = |msg: String| rep.failures.push(msg);
    let mut basis: Vec<(BasisElement, i32)> = Vec::new();
    for (x, y) in ctx.pairs() {
        for alex2 in degrees_for_pair(&x, &y, cap) {
            let total = alex2.iter().sum();
            for b in ctx.graded_piece_basis(&x, &y, &alex2)? {
                basis.push((b, total));
            }
        }
    }
    let mut count = 0;
    for (b, _) in &basis {
        count += 1;
        let e = Element::from_basis(*ctx, *b);
        let r = rho(&e);
        let oe = o(&e);
        if r.len() != 1 || !target.is_admissible(&r.terms().next().expect("one term").left) {
            fail(format!("rho({b}) = {r} is not a basis element of {target}"));
            continue;
        }
        if oe.len() != 1 {
            fail(format!("o({b}) = {oe} is not a basis element"));
            continue;
        }
        if rho(&r) != e {
            fail(format!("rho is not an involution at {b}"));
        }
        if o(&oe) != e {
            fail(format!("o is not an involution at {b}"));
        }
        if rho(&oe) != o(&r) {
            fail(format!("rho and o do not commute at {b}"));
        }
        if rho(&e.differential()) != r.differential() {
            fail(format!("rho does not commute with d at {b}"));
        }
        if o(&e.differential()) != oe.differential() {
            fail(format!("o does not commute with d at {b}"));
        }
        let g = ctx.grading(b);
        let gr = target.grading(r.terms().next().expect("one term"));
        let go = ctx.grading(oe.terms().next().expect("one term"));
        let mut reversed = g.alex2.clone();
        reversed.reverse();
        if gr.maslov != g.maslov || gr.alex2 != reversed || gr.unrefined != rho_unrefined(&g.unrefined) {
            fail(format!("rho does not transform the gradings of {b} as expected"));
        }
        if go.maslov != g.maslov || go.alex2 != g.alex2 || go.unrefined != o_unrefined(&g.unrefined) {
            fail(format!("o does not transform the gradings of {b} as expected"));
        }
    }
    rep.elements = count;

    let mut by_left: std::collections::HashMap<_, Vec<(BasisElement, i32)>> = Default::default();
    for (b, d) in &basis {
        by_left.entry(b.left).or_default().push((*b, *d));
    }
    let mut products = 0;
    for (a, da) in &basis {
        let Some(next) = by_left.get(&a.right) else { continue };
        for (b, db) in next {
            if da + db > cap {
                continue;
            }
            products += 1;
            let ea = Element::from_basis(*ctx, *a);
            let eb = Element::from_basis(*ctx, *b);
            let ab = &ea * &eb;
            if rho(&ab) != &rho(&ea) * &rho(&eb) {
                rep.failures.push(format!("rho is not multiplicative on {a} * {b}"));
            }
            if o(&ab) != &o(&eb) * &o(&ea) {
                rep.failures.push(format!("o is not anti-multiplicative on {a} * {b}"));
            }
        }
    }
    rep.products = products;

    for x in ctx.states() {
        for (e1, y) in edges_from(ctx, &x)? {
            let mut paths = vec![Path::new(ctx, x, vec![e1])?];
            for (e2, _) in edges_from(ctx, &y)? {
                paths.push(Path::new(ctx, x, vec![e1, e2])?);
            }
            for p in paths {
                rep.paths += 1;
                let image = normalize(ctx, &p)?;
                if normalize(&target, &rho_path(ctx, &p)?)? != rho(&image) {
                    rep.failures.push(format!("rho on the path {p} disagrees with rho on its image"));
                }
                if normalize(ctx, &o_path(ctx, &p)?)? != o(&image) {
                    rep.failures.push(format!("o on the path {p} disagrees with o on its image"));
                }
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Flavor;

    #[test]
    fn rho_example() {
        let ctx = AlgebraContext::with_lines(2, 1, &[1], Flavor::B).unwrap();
        let e = ctx.parse_element("C1*U1^1*f[{0},{1}]").unwrap();
        let r = rho(&e);
        assert_eq!(r.context().to_string(), "B(2,1,{2})");
        assert_eq!(r.to_string(), "C2*U2^1*f[{2},{1}]");
        assert_eq!(o(&e).to_string(), "C1*U1^1*f[{1},{0}]");
    }

    #[test]
    fn truncations_swap() {
        let ctx = AlgebraContext::with_lines(3, 1, &[], Flavor::Br).unwrap();
        assert_eq!(rho_context(&ctx).flavor(), Flavor::Bl);
        assert!(symmetry_report(&ctx, 4).unwrap().passed());
    }

    #[test]
    fn unrefined_maps() {
        assert_eq!(rho_unrefined(&[1, 0, 0, 0]), vec![0, 0, 0, 1]);
        assert_eq!(o_unrefined(&[1, 0, 2, 3]), vec![0, 1, 3, 2]);
    }
}
