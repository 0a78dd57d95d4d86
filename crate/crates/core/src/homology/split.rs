//! Tensor splitting of `I_x · B · I_y` along its interval decomposition.
//!
//! The piece is a product of a polynomial-exterior algebra on the crossed
//! lines with one small algebra per interval: `B(l, l-1)` corners for
//! generating intervals, `B(l, l)` corners for edge intervals and `B(n, n+1)`
//! for the two-faced interval. Missing edge intervals contribute `F_2`.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{degrees_for_pair, GradedComplex, PieceHomology};
use crate::algebra::{AlgebraContext, Flavor};
use crate::error::Result;
use crate::istate::{classify_intervals, IState, Interval, LineSet};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum FactorKind {
    LeftEdge,
    Generating,
    RightEdge,
    TwoFaced,
    /// `F_2`, standing in for an absent edge interval.
    Trivial,
}

/// One tensor factor attached to a run of lines.
#[derive(Clone, Debug)]
pub struct Factor {
    pub kind: FactorKind,
    /// Lines of the full algebra covered by this factor.
    pub lines: Option<Interval>,
    /// The small algebra and the idempotent it is cut down by.
    pub local: Option<(AlgebraContext, IState)>,
}

/// `F_2[U_i : i ∈ crossed][C_j : j ∈ crossed ∩ S]`.
#[derive(Clone, Copy, Debug)]
pub struct CrossedFactor {
    pub lines: LineSet,
    pub oriented: LineSet,
}

#[derive(Clone, Debug)]
pub struct SplitFactors {
    pub crossed: CrossedFactor,
    pub factors: Vec<Factor>,
}

pub fn split_factors(ctx: &AlgebraContext, x: &IState, y: &IState) -> Result<SplitFactors> {
    ctx.check_state(x)?;
    ctx.check_state(y)?;
    let cls = classify_intervals(x, y)?;
    let n = ctx.width();
    let s = ctx.orientation();
    let local_s = |g: &Interval| -> LineSet {
        let shift = g.start - 1;
        LineSet::from_bits(g.lines().intersection(s).bits() >> shift)
    };
    let make = |kind: FactorKind, g: Interval, k: usize, lo: usize, hi: usize| -> Result<Factor> {
        let l = g.len();
        let local = AlgebraContext::new(l, k, local_s(&g), Flavor::B)?;
        let state = IState::interval(l, lo, hi)?;
        Ok(Factor {
            kind,
            lines: Some(g),
            local: Some((local, state)),
        })
    };
    let trivial = Factor {
        kind: FactorKind::Trivial,
        lines: None,
        local: None,
    };
    let mut factors = Vec::new();
    if let Some(e) = cls.two_faced {
        factors.push(make(FactorKind::TwoFaced, e.lines, n + 1, 0, n)?);
    } else {
        match cls.left_edge {
            Some(e) => factors.push(make(FactorKind::LeftEdge, e.lines, e.length, 0, e.length - 1)?),
            None => factors.push(trivial.clone()),
        }
        for g in &cls.generating {
            let l = g.len();
            // [1, l-1] is empty when l = 1
            let (lo, hi) = if l == 1 { (1, 0) } else { (1, l - 1) };
            factors.push(make(FactorKind::Generating, *g, l - 1, lo, hi)?);
        }
        match cls.right_edge {
            Some(e) => factors.push(make(FactorKind::RightEdge, e.lines, e.length, 1, e.length)?),
            None => factors.push(trivial),
        }
    }
    Ok(SplitFactors {
        crossed: CrossedFactor {
            lines: cls.crossed,
            oriented: cls.crossed.intersection(s),
        },
        factors,
    })
}

type Distribution = BTreeMap<i32, usize>;

fn convolve(a: &Distribution, b: &Distribution) -> Distribution {
    let mut out = Distribution::new();
    for (&ma, &da) in a {
        for (&mb, &db) in b {
            *out.entry(ma + mb).or_default() += da * db;
        }
    }
    out.retain(|_, d| *d > 0);
    out
}

impl CrossedFactor {
    /// Chain dimensions and homology ranks in degree `alex2` (full-width vector).
    fn distributions(&self, alex2: &[i32]) -> (Distribution, Distribution) {
        let mut chains = Distribution::from([(0, 1)]);
        let mut homology = Distribution::from([(0, 1)]);
        for i in self.lines.iter() {
            let a = alex2[i - 1];
            if a < 1 || a % 2 == 0 {
                return (Distribution::new(), Distribution::new());
            }
            let t = (a - 1) / 2;
            let (c, h) = if self.oriented.contains(i) {
                // U_i^t in degree -1-2t; C_i U_i^{t-1} in degree -2t hits it
                let mut c = Distribution::from([(-1 - 2 * t, 1)]);
                if t >= 1 {
                    c.insert(-2 * t, 1);
                }
                let h = if t == 0 { Distribution::from([(-1, 1)]) } else { Distribution::new() };
                (c, h)
            } else {
                (Distribution::from([(0, 1)]), Distribution::from([(0, 1)]))
            };
            chains = convolve(&chains, &c);
            homology = convolve(&homology, &h);
        }
        (chains, homology)
    }
}

impl Factor {
    fn distributions(&self, alex2: &[i32]) -> Result<(Distribution, Distribution)> {
        let (Some((local, state)), Some(lines)) = (&self.local, self.lines) else {
            return Ok((Distribution::from([(0, 1)]), Distribution::from([(0, 1)])));
        };
        let sub = &alex2[lines.start - 1..lines.end];
        let complex = GradedComplex::build(local, state, state, sub)?;
        let chains = complex.dimensions();
        let homology = PieceHomology::compute(complex).ranks();
        Ok((chains, homology))
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SplittingReport {
    pub context: String,
    pub pairs: usize,
    pub degrees: usize,
    pub failures: Vec<String>,
}

impl SplittingReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn absorb(&mut self, other: SplittingReport) {
        self.pairs += other.pairs;
        self.degrees += other.degrees;
        self.failures.extend(other.failures);
    }
}

/// Compares chain dimensions and homology ranks of `I_x · B · I_y` with the
/// convolution over the tensor factors, in every degree with `Σ alex2 <= cap`.
pub fn verify_splitting(
    ctx: &AlgebraContext,
    x: &IState,
    y: &IState,
    cap: i32,
) -> Result<SplittingReport> {
    let split = split_factors(ctx, x, y)?;
    let mut rep = SplittingReport {
        context: ctx.to_string(),
        pairs: 1,
        ..Default::default()
    };
    for alex2 in degrees_for_pair(x, y, cap) {
        rep.degrees += 1;
        let complex = GradedComplex::build(ctx, x, y, &alex2)?;
        let chains = complex.dimensions();
        let homology = PieceHomology::compute(complex).ranks();
        let (mut want_c, mut want_h) = split.crossed.distributions(&alex2);
        for f in &split.factors {
            let (c, h) = f.distributions(&alex2)?;
            want_c = convolve(&want_c, &c);
            want_h = convolve(&want_h, &h);
        }
        let mut chains = chains;
        chains.retain(|_, d| *d > 0);
        if chains != want_c {
            rep.failures.push(format!(
                "{x}->{y} alex2 {alex2:?}: chain dims {chains:?} vs factors {want_c:?}"
            ));
        }
        if homology != want_h {
            rep.failures.push(format!(
                "{x}->{y} alex2 {alex2:?}: homology {homology:?} vs factors {want_h:?}"
            ));
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_shapes() {
        let ctx = AlgebraContext::with_lines(3, 1, &[2], Flavor::B).unwrap();
        let x = IState::new(3, &[1]).unwrap();
        let split = split_factors(&ctx, &x, &x).unwrap();
        let kinds: Vec<FactorKind> = split.factors.iter().map(|f| f.kind).collect();
        assert_eq!(
            kinds,
            [FactorKind::Trivial, FactorKind::Generating, FactorKind::Generating, FactorKind::Trivial]
        );
        let (local, state) = split.factors[1].local.unwrap();
        assert_eq!(local.to_string(), "B(2,1,{2})");
        assert_eq!(state.to_string(), "{1}");
        assert!(verify_splitting(&ctx, &x, &x, 8).unwrap().passed());
    }
}
