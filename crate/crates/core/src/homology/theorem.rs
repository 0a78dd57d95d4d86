//! The closed-form homology basis.
//!
//! Classes are `p · Π_a (C_{i_a} · p_a / U_{i_a})^{ε_a}` where `p` is a monomial
//! in the `U_i` with `i ∉ S` not divisible by any interval monomial, `p_a` is
//! the monomial of the generating interval `G_a`, `ε_a = 0` unless `G_a` meets
//! `S`, and `i_a ∈ G_a ∩ S` is a chosen line (by default the smallest).

use crate::algebra::{AlgebraContext, BasisElement, Monomial};
use crate::error::{Error, Result};
use crate::istate::{classify_intervals, weight_entry, IState, Interval, LineSet};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TheoremElement {
    /// The free monomial factor.
    pub p: Monomial,
    /// One flag per generating interval that meets `S`, in interval order.
    pub eps: Vec<bool>,
    pub representative: BasisElement,
}

/// The closed-form basis of `H(I_x · B · I_y)` in degree `alex2`, choosing the
/// smallest oriented line of each interval.
pub fn theorem_basis(
    ctx: &AlgebraContext,
    x: &IState,
    y: &IState,
    alex2: &[i32],
) -> Result<Vec<TheoremElement>> {
    theorem_basis_with(ctx, x, y, alex2, |_, lines| {
        lines.first().expect("interval meets S")
    })
}

/// As [`theorem_basis`], with `choose(G, G ∩ S)` picking the line `i_a`.
pub fn theorem_basis_with(
    ctx: &AlgebraContext,
    x: &IState,
    y: &IState,
    alex2: &[i32],
    choose: impl Fn(&Interval, LineSet) -> usize,
) -> Result<Vec<TheoremElement>> {
    if !ctx.is_quotient() {
        return Err(Error::UnsupportedFlavor {
            flavor: ctx.flavor().to_string(),
            what: "the closed-form homology basis".into(),
        });
    }
    ctx.check_state(x)?;
    ctx.check_state(y)?;
    let n = ctx.width();
    if alex2.len() != n {
        return Err(Error::LineOutOfRange { n, line: alex2.len() });
    }
    let cls = classify_intervals(x, y)?;
    let s = ctx.orientation();
    let mut total = vec![0i32; n + 1];
    for i in 1..=n {
        let r = alex2[i - 1] - weight_entry(n, x.bits(), y.bits(), i).abs();
        if r < 0 || r % 2 != 0 {
            return Ok(Vec::new());
        }
        total[i] = r / 2;
    }
    let meeting: Vec<(Interval, usize)> = cls
        .generating
        .iter()
        .filter_map(|g| {
            let hit = g.lines().intersection(s);
            (!hit.is_empty()).then(|| (*g, choose(g, hit)))
        })
        .collect();
    let free: Vec<Interval> = cls
        .generating
        .iter()
        .filter(|g| g.lines().intersection(s).is_empty())
        .copied()
        .collect();

    let mut out = Vec::new();
    for mask in 0u32..1 << meeting.len() {
        let eps: Vec<bool> = (0..meeting.len()).map(|a| mask >> a & 1 == 1).collect();
        let mut c = LineSet::EMPTY;
        let mut p = total.clone();
        for ((g, i), &on) in meeting.iter().zip(&eps) {
            if on {
                c = c.with(*i);
                for j in g.start..=g.end {
                    p[j] -= 1;
                }
            }
        }
        if p[1..].iter().any(|&e| e < 0) || s.iter().any(|i| p[i] != 0) {
            continue;
        }
        if free.iter().any(|g| (g.start..=g.end).all(|j| p[j] > 0)) {
            continue;
        }
        let mut u = Monomial::ONE;
        for i in 1..=n {
            u.set_exponent(i, (total[i] - c.contains(i) as i32) as u32);
        }
        let p_mono = Monomial::from_exponents(&p[1..].iter().map(|&e| e as u32).collect::<Vec<_>>());
        let b = BasisElement::new(*x, *y, u, c);
        if let Some(b) = ctx.reduce(b) {
            out.push(TheoremElement {
                p: p_mono,
                eps,
                representative: b,
            });
        }
    }
    Ok(out)
}

/// The closed-form descriptor of a basis element, if it is one of the default
/// representatives.
pub fn theorem_decompose(ctx: &AlgebraContext, b: &BasisElement) -> Option<TheoremElement> {
    let alex2 = ctx.alex2(b);
    theorem_basis(ctx, &b.left, &b.right, &alex2)
        .ok()?
        .into_iter()
        .find(|t| t.representative == *b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Flavor;

    #[test]
    fn exterior_class_on_a_crossed_pair() {
        let ctx = AlgebraContext::with_lines(2, 1, &[1], Flavor::B).unwrap();
        let x = IState::new(2, &[1]).unwrap();
        let y = IState::new(2, &[2]).unwrap();
        let basis = theorem_basis(&ctx, &x, &y, &[2, 1]).unwrap();
        let shown: Vec<String> = basis.iter().map(|t| t.representative.to_string()).collect();
        assert_eq!(shown, ["C1*f[{1},{2}]"]);
        assert!(theorem_decompose(&ctx, &basis[0].representative).is_some());
    }

    #[test]
    fn free_interval_truncates_powers() {
        let ctx = AlgebraContext::with_lines(2, 1, &[], Flavor::B).unwrap();
        let x = IState::new(2, &[1]).unwrap();
        // the interval [1,2] kills U1 U2 but not U1^2
        assert_eq!(theorem_basis(&ctx, &x, &x, &[4, 0]).unwrap().len(), 1);
        assert_eq!(theorem_basis(&ctx, &x, &x, &[2, 2]).unwrap().len(), 0);
    }
}
