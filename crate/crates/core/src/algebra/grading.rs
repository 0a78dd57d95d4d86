use serde::{Deserialize, Serialize};

use super::{AlgebraContext, BasisElement};
use crate::istate::weight_entry;

/// All gradings of a basis element.
///
/// `alex2` is twice the refined Alexander multi-grading, so it stays integral.
/// `unrefined` lists `(τ_1, β_1, ..., τ_n, β_n)` multiplicities.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct GradingVector {
    pub maslov: i32,
    pub alex2: Vec<i32>,
    pub unrefined: Vec<i32>,
    pub alex_single2: i32,
}

impl AlgebraContext {
    pub fn alex2(&self, b: &BasisElement) -> Vec<i32> {
        let n = self.width();
        (1..=n)
            .map(|i| {
                2 * b.u.exponent(i) as i32
                    + weight_entry(n, b.left.bits(), b.right.bits(), i).abs()
                    + 2 * b.c.contains(i) as i32
            })
            .collect()
    }

    pub fn maslov(&self, b: &BasisElement) -> i32 {
        let alex2 = self.alex2(b);
        b.c.len() as i32 - self.orientation().iter().map(|i| alex2[i - 1]).sum::<i32>()
    }

    pub fn grading(&self, b: &BasisElement) -> GradingVector {
        let n = self.width();
        let alex2 = self.alex2(b);
        let s = self.orientation();
        let maslov = b.c.len() as i32 - s.iter().map(|i| alex2[i - 1]).sum::<i32>();
        let alex_single2 = (1..=n)
            .map(|i| if s.contains(i) { -alex2[i - 1] } else { alex2[i - 1] })
            .sum();
        // The canonical path crosses line i exactly |v_i| times, rightward when v_i > 0.
        let mut unrefined = Vec::with_capacity(2 * n);
        for i in 1..=n {
            let v = weight_entry(n, b.left.bits(), b.right.bits(), i);
            let loops = b.u.exponent(i) as i32 + b.c.contains(i) as i32;
            unrefined.push(v.max(0) + loops);
            unrefined.push((-v).max(0) + loops);
        }
        GradingVector {
            maslov,
            alex2,
            unrefined,
            alex_single2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{Flavor, Monomial};
    use super::*;
    use crate::istate::{IState, LineSet};

    #[test]
    fn single_edge_maslov() {
        let ctx = AlgebraContext::with_lines(2, 1, &[1], Flavor::B).unwrap();
        let x = IState::new(2, &[0]).unwrap();
        let y = IState::new(2, &[1]).unwrap();
        let z = IState::new(2, &[2]).unwrap();
        let r1 = BasisElement::generator(x, y);
        let r2 = BasisElement::generator(y, z);
        assert_eq!(ctx.maslov(&r1), -1);
        assert_eq!(ctx.maslov(&r2), 0);
        let u1 = BasisElement::new(y, y, Monomial::from_lines(1 << 1), LineSet::EMPTY);
        let u2 = BasisElement::new(y, y, Monomial::from_lines(1 << 2), LineSet::EMPTY);
        let c1 = BasisElement::new(y, y, Monomial::ONE, LineSet::EMPTY.with(1));
        assert_eq!(ctx.maslov(&u1), -2);
        assert_eq!(ctx.maslov(&u2), 0);
        assert_eq!(ctx.maslov(&c1), -1);
        assert_eq!(ctx.grading(&r1).unrefined, vec![1, 0, 0, 0]);
        assert_eq!(ctx.grading(&c1).alex2, vec![2, 0]);
    }
}
