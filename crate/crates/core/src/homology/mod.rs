//! Homology of graded pieces `I_x · B · I_y` by Gaussian elimination over `F_2`.
//!
//! A graded piece is fixed by `(x, y, alex2)`; inside it the differential
//! lowers the Maslov grading by one, so each piece is a finite chain complex.

mod split;
mod theorem;

use std::collections::{BTreeMap, HashMap};

use crate::algebra::{AlgebraContext, BasisElement, Element};
use crate::error::{Error, Result};
use crate::f2::{BitVec, Echelon, Elimination, F2Matrix};
use crate::istate::IState;

pub use split::{split_factors, verify_splitting, CrossedFactor, Factor, FactorKind, SplitFactors, SplittingReport};
pub use theorem::{theorem_basis, theorem_basis_with, theorem_decompose, TheoremElement};

/// The chain complex of one graded piece, split by Maslov degree.
#[derive(Clone, Debug)]
pub struct GradedComplex {
    ctx: AlgebraContext,
    x: IState,
    y: IState,
    alex2: Vec<i32>,
    strata: BTreeMap<i32, Vec<BasisElement>>,
    index: HashMap<BasisElement, (i32, usize)>,
    /// `d[m]` has one row per basis element of degree `m`, valued in degree `m - 1`.
    d: BTreeMap<i32, F2Matrix>,
}

impl GradedComplex {
    pub fn build(ctx: &AlgebraContext, x: &IState, y: &IState, alex2: &[i32]) -> Result<Self> {
        let mut strata: BTreeMap<i32, Vec<BasisElement>> = BTreeMap::new();
        for b in ctx.graded_piece_basis(x, y, alex2)? {
            strata.entry(ctx.maslov(&b)).or_default().push(b);
        }
        let mut index = HashMap::new();
        for (&m, basis) in &strata {
            for (i, b) in basis.iter().enumerate() {
                index.insert(*b, (m, i));
            }
        }
        let mut d = BTreeMap::new();
        for (&m, basis) in &strata {
            let cols = strata.get(&(m - 1)).map_or(0, Vec::len);
            let rows = basis
                .iter()
                .map(|b| {
                    BitVec::from_ones(
                        cols,
                        ctx.differential_terms(b).map(|t| {
                            let (dm, j) = index[&t];
                            debug_assert_eq!(dm, m - 1);
                            j
                        }),
                    )
                })
                .collect();
            d.insert(m, F2Matrix::from_rows(rows, cols));
        }
        Ok(Self {
            ctx: *ctx,
            x: *x,
            y: *y,
            alex2: alex2.to_vec(),
            strata,
            index,
            d,
        })
    }

    pub fn context(&self) -> AlgebraContext {
        self.ctx
    }

    pub fn endpoints(&self) -> (IState, IState) {
        (self.x, self.y)
    }

    pub fn alex2(&self) -> &[i32] {
        &self.alex2
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.strata.keys().copied()
    }

    pub fn stratum(&self, m: i32) -> &[BasisElement] {
        self.strata.get(&m).map_or(&[], Vec::as_slice)
    }

    /// Chain dimensions by Maslov degree.
    pub fn dimensions(&self) -> BTreeMap<i32, usize> {
        self.strata.iter().map(|(&m, b)| (m, b.len())).collect()
    }

    pub fn dim(&self) -> usize {
        self.index.len()
    }

    pub fn differential_matrix(&self, m: i32) -> Option<&F2Matrix> {
        self.d.get(&m)
    }

    /// Whether `d[m] · d[m+1] = 0` for every degree.
    pub fn squares_to_zero(&self) -> bool {
        self.d.iter().all(|(&m, dm)| match self.d.get(&(m - 1)) {
            Some(dn) if dm.ncols() == dn.nrows() => dm.mul(dn).is_zero(),
            _ => true,
        })
    }

    /// Coordinates of a homogeneous element of degree `m`.
    pub fn vector(&self, m: i32, e: &Element) -> Result<BitVec> {
        let mut v = BitVec::zeros(self.stratum(m).len());
        for b in e.terms() {
            match self.index.get(b) {
                Some(&(dm, i)) if dm == m => v.flip(i),
                _ => return Err(Error::NotHomogeneous),
            }
        }
        Ok(v)
    }

    pub fn element(&self, m: i32, v: &BitVec) -> Element {
        let basis = self.stratum(m);
        Element::from_basis_iter(self.ctx, v.ones().map(|i| basis[i]))
    }
}

#[derive(Clone, Debug)]
struct DegreeHomology {
    /// Elimination of the images `∂b` of degree `m + 1` basis elements.
    boundaries: Elimination,
    /// Cycles of degree `m`, as combinations of the stratum basis.
    cycles: Vec<BitVec>,
    /// Class representatives in normal form modulo boundaries.
    reps: Vec<BitVec>,
}

/// Homology of a graded piece, with normal forms for classes.
#[derive(Clone, Debug)]
pub struct PieceHomology {
    complex: GradedComplex,
    degrees: BTreeMap<i32, DegreeHomology>,
}

impl PieceHomology {
    pub fn compute(complex: GradedComplex) -> Self {
        let mut degrees = BTreeMap::new();
        for m in complex.degrees() {
            let dim = complex.stratum(m).len();
            let sources: Vec<BitVec> = complex
                .d
                .get(&(m + 1))
                .map_or_else(Vec::new, |d| d.rows().to_vec());
            let boundaries = Elimination::new(&sources, dim);
            let dm = &complex.d[&m];
            let cycles = Elimination::new(dm.rows(), dm.ncols()).kernel().to_vec();
            let mut span = boundaries.echelon().clone();
            let mut reps = Vec::new();
            for z in &cycles {
                let nf = boundaries.echelon().reduce(z);
                if span.insert(nf.clone()) {
                    reps.push(nf);
                }
            }
            degrees.insert(
                m,
                DegreeHomology {
                    boundaries,
                    cycles,
                    reps,
                },
            );
        }
        Self { complex, degrees }
    }

    pub fn build(ctx: &AlgebraContext, x: &IState, y: &IState, alex2: &[i32]) -> Result<Self> {
        Ok(Self::compute(GradedComplex::build(ctx, x, y, alex2)?))
    }

    pub fn complex(&self) -> &GradedComplex {
        &self.complex
    }

    pub fn rank(&self, m: i32) -> usize {
        self.degrees.get(&m).map_or(0, |d| d.reps.len())
    }

    /// Nonzero homology ranks by Maslov degree.
    pub fn ranks(&self) -> BTreeMap<i32, usize> {
        self.degrees
            .iter()
            .filter(|(_, d)| !d.reps.is_empty())
            .map(|(&m, d)| (m, d.reps.len()))
            .collect()
    }

    pub fn representatives(&self, m: i32) -> Vec<Element> {
        self.degrees.get(&m).map_or_else(Vec::new, |d| {
            d.reps.iter().map(|v| self.complex.element(m, v)).collect()
        })
    }

    /// A basis of the cycles of degree `m`.
    pub fn cycles(&self, m: i32) -> Vec<Element> {
        self.degrees.get(&m).map_or_else(Vec::new, |d| {
            d.cycles.iter().map(|v| self.complex.element(m, v)).collect()
        })
    }

    fn boundary_echelon(&self, m: i32) -> Option<&Echelon> {
        self.degrees.get(&m).map(|d| d.boundaries.echelon())
    }

    /// The unique representative of the class of `e` reduced against boundaries.
    pub fn normal_form(&self, m: i32, e: &Element) -> Result<Element> {
        let v = self.complex.vector(m, e)?;
        Ok(match self.boundary_echelon(m) {
            Some(b) => self.complex.element(m, &b.reduce(&v)),
            None => e.clone(),
        })
    }

    pub fn is_boundary(&self, m: i32, e: &Element) -> Result<bool> {
        Ok(self.normal_form(m, e)?.is_zero())
    }

    /// Some `ξ` of degree `m + 1` with `∂ξ = target`, if `target` is a boundary.
    pub fn solve_boundary(&self, m: i32, target: &Element) -> Result<Option<Element>> {
        let v = self.complex.vector(m, target)?;
        if v.is_zero() {
            return Ok(Some(Element::zero(self.complex.ctx)));
        }
        let Some(d) = self.degrees.get(&m) else {
            return Ok(None);
        };
        Ok(d.boundaries
            .solve(&v)
            .map(|combo| self.complex.element(m + 1, &combo)))
    }

    /// Coordinates of the class of a cycle in the representative basis.
    pub fn class_coordinates(&self, m: i32, e: &Element) -> Result<BitVec> {
        let v = self.complex.vector(m, e)?;
        let Some(d) = self.degrees.get(&m) else {
            return Ok(BitVec::zeros(0));
        };
        let sources: Vec<BitVec> = d.reps.clone();
        let quotient = d.boundaries.echelon().reduce(&v);
        let elim = Elimination::new(&sources, v.len());
        let combo = elim.solve(&quotient).ok_or(Error::NotCycle)?;
        Ok(combo)
    }
}

/// Ranks and representatives by Maslov degree.
pub fn homology_basis(complex: GradedComplex) -> BTreeMap<i32, (usize, Vec<Element>)> {
    let h = PieceHomology::compute(complex);
    h.degrees
        .keys()
        .map(|&m| (m, (h.rank(m), h.representatives(m))))
        .filter(|(_, (r, _))| *r > 0)
        .collect()
}

/// Doubled Alexander degrees `alex2` with `Σ alex2 <= cap` in which `I_x · B · I_y`
/// can be nonzero: `alex2_i >= |v_i|` with matching parity.
pub fn degrees_for_pair(x: &IState, y: &IState, cap: i32) -> Vec<Vec<i32>> {
    let n = x.width();
    let base: Vec<i32> = (1..=n)
        .map(|i| crate::istate::weight_entry(n, x.bits(), y.bits(), i).abs())
        .collect();
    let slack = cap - base.iter().sum::<i32>();
    let mut out = Vec::new();
    if slack < 0 {
        return out;
    }
    let mut cur = vec![0i32; n];
    fn rec(i: usize, left: i32, cur: &mut Vec<i32>, base: &[i32], out: &mut Vec<Vec<i32>>) {
        if i == cur.len() {
            out.push(cur.iter().zip(base).map(|(c, b)| b + 2 * c).collect());
            return;
        }
        for c in 0..=left / 2 {
            cur[i] = c;
            rec(i + 1, left - 2 * c, cur, base, out);
        }
        cur[i] = 0;
    }
    rec(0, slack, &mut cur, &base, &mut out);
    out
}
