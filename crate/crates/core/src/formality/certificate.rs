//! Concrete Massey triples witnessing non-formality, and the sweep over
//! single-edge classes used to clear formal cells.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::massey::{is_massey_admissible3, massey3, same_class, HomClass, HomologyCache, MasseyProduct};
use crate::algebra::{AlgebraContext, Element};
use crate::error::Result;
use crate::homology::degrees_for_pair;
use crate::istate::IState;
use crate::quiver::{edges_from, normalize, EdgeKind, EdgeLabel, Path};

/// Shapes of the triples, named by their edge sequences.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum CertificateFamily {
    /// `(L_i, R_i, R_{i+1})`, valued `C_i R_{i+1}`.
    LeftRightRight,
    /// `(R_{i+1}, L_{i+1}, L_i)`, valued `C_{i+1} L_i`.
    RightLeftLeft,
    /// `(L_i, R_i, U_{i+1})`, valued `C_i U_{i+1}`.
    LeftRightU,
    /// `(R_{i+1}, L_{i+1}, U_i)`, valued `C_{i+1} U_i`.
    RightLeftU,
    /// `(R_l..R_2, L_2..L_l, U_1)`, valued `U_1..U_{l-1} C_l`.
    LeftSegment,
    /// `(L_m..L_{n-1}, R_{n-1}..R_m, U_n)`, valued `C_m U_{m+1}..U_n`.
    RightSegment,
    /// Found by sweeping triples of single-edge classes.
    EdgeSweep,
}

impl CertificateFamily {
    pub const TWO_LINE: [CertificateFamily; 4] = [
        CertificateFamily::LeftRightRight,
        CertificateFamily::RightLeftLeft,
        CertificateFamily::LeftRightU,
        CertificateFamily::RightLeftU,
    ];
}

impl fmt::Display for CertificateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A triple of edge paths together with the value it is expected to produce.
#[derive(Clone, Debug)]
pub struct CandidateSequence {
    pub family: CertificateFamily,
    pub line: usize,
    pub start: IState,
    pub paths: [Vec<EdgeLabel>; 3],
    pub expected: Vec<EdgeLabel>,
}

fn interval_members(x: &IState, lo: usize, hi: usize) -> Vec<usize> {
    x.members().filter(|&a| a >= lo && a <= hi).collect()
}

/// Candidates of one family whose conditions on `S` and the start state hold.
pub fn candidates(ctx: &AlgebraContext, family: CertificateFamily) -> Vec<CandidateSequence> {
    let n = ctx.width();
    let s = ctx.orientation();
    let mut out = Vec::new();
    let mut push = |line: usize, start: IState, paths: [Vec<EdgeLabel>; 3], expected: Vec<EdgeLabel>| {
        out.push(CandidateSequence {
            family,
            line,
            start,
            paths,
            expected,
        })
    };
    for x in ctx.states() {
        match family {
            CertificateFamily::LeftRightRight
            | CertificateFamily::RightLeftLeft
            | CertificateFamily::LeftRightU
            | CertificateFamily::RightLeftU => {
                for i in 1..n {
                    if interval_members(&x, i - 1, i + 1) != [i] {
                        continue;
                    }
                    let (lower, upper) = (s.contains(i), s.contains(i + 1));
                    match family {
                        CertificateFamily::LeftRightRight if lower => push(
                            i,
                            x,
                            [vec![EdgeLabel::l(i)], vec![EdgeLabel::r(i)], vec![EdgeLabel::r(i + 1)]],
                            vec![EdgeLabel::c(i), EdgeLabel::r(i + 1)],
                        ),
                        CertificateFamily::RightLeftLeft if upper => push(
                            i,
                            x,
                            [vec![EdgeLabel::r(i + 1)], vec![EdgeLabel::l(i + 1)], vec![EdgeLabel::l(i)]],
                            vec![EdgeLabel::c(i + 1), EdgeLabel::l(i)],
                        ),
                        CertificateFamily::LeftRightU if lower && !upper => push(
                            i,
                            x,
                            [vec![EdgeLabel::l(i)], vec![EdgeLabel::r(i)], vec![EdgeLabel::u(i + 1)]],
                            vec![EdgeLabel::c(i), EdgeLabel::u(i + 1)],
                        ),
                        CertificateFamily::RightLeftU if upper && !lower => push(
                            i,
                            x,
                            [vec![EdgeLabel::r(i + 1)], vec![EdgeLabel::l(i + 1)], vec![EdgeLabel::u(i)]],
                            vec![EdgeLabel::c(i + 1), EdgeLabel::u(i)],
                        ),
                        _ => {}
                    }
                }
            }
            CertificateFamily::LeftSegment => {
                for l in s.iter().filter(|&l| l >= 2) {
                    if !(1..l).all(|a| x.contains(a)) || x.contains(l) {
                        continue;
                    }
                    let mut expected: Vec<EdgeLabel> = (1..l).map(EdgeLabel::u).collect();
                    expected.push(EdgeLabel::c(l));
                    push(
                        l,
                        x,
                        [
                            (2..=l).rev().map(EdgeLabel::r).collect(),
                            (2..=l).map(EdgeLabel::l).collect(),
                            vec![EdgeLabel::u(1)],
                        ],
                        expected,
                    );
                }
            }
            CertificateFamily::RightSegment => {
                for m in s.iter().filter(|&m| m < n) {
                    if !(m..n).all(|a| x.contains(a)) || x.contains(m - 1) {
                        continue;
                    }
                    let mut expected = vec![EdgeLabel::c(m)];
                    expected.extend((m + 1..=n).map(EdgeLabel::u));
                    push(
                        m,
                        x,
                        [
                            (m..n).map(EdgeLabel::l).collect(),
                            (m..n).rev().map(EdgeLabel::r).collect(),
                            vec![EdgeLabel::u(n)],
                        ],
                        expected,
                    );
                }
            }
            CertificateFamily::EdgeSweep => {}
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct MasseyCertificate {
    pub family: CertificateFamily,
    pub line: usize,
    pub start: String,
    pub classes: [String; 3],
    pub value: String,
    pub expected: Option<String>,
    pub matches_expected: bool,
    pub maslov: i32,
    pub alex2: Vec<i32>,
    #[serde(skip)]
    pub product: MasseyProduct,
}

/// Outcome of evaluating a candidate sequence.
#[derive(Clone, Debug)]
pub enum CandidateOutcome {
    /// Some path leaves the vertices, or some class vanishes.
    Unavailable,
    NotAdmissible,
    Evaluated(Box<MasseyCertificate>),
}

fn edge_class(ctx: &AlgebraContext, start: IState, edges: &[EdgeLabel]) -> Result<Option<HomClass>> {
    let Ok(path) = Path::new(ctx, start, edges.to_vec()) else {
        return Ok(None);
    };
    let rep = normalize(ctx, &path)?;
    if rep.is_zero() || !rep.differential().is_zero() {
        return Ok(None);
    }
    Ok(Some(HomClass::new(rep)?))
}

fn path_text(start: IState, edges: &[EdgeLabel]) -> String {
    let labels: Vec<String> = edges.iter().map(EdgeLabel::to_string).collect();
    format!("{start}:{}", labels.join(","))
}

pub fn evaluate(cache: &mut HomologyCache, cand: &CandidateSequence) -> Result<CandidateOutcome> {
    let ctx = cache.context();
    let mut classes = Vec::with_capacity(3);
    let mut at = cand.start;
    let mut texts = Vec::with_capacity(3);
    for edges in &cand.paths {
        let Some(c) = edge_class(&ctx, at, edges)? else {
            return Ok(CandidateOutcome::Unavailable);
        };
        texts.push(path_text(at, edges));
        at = c.y;
        classes.push(c);
    }
    let seq: [HomClass; 3] = classes.try_into().expect("three classes");
    if !is_massey_admissible3(cache, &seq)?.admissible() {
        return Ok(CandidateOutcome::NotAdmissible);
    }
    let product = massey3(cache, &seq)?;
    let expected = expected_element(&ctx, cand)?;
    let matches_expected = match &expected {
        Some(e) if !e.is_zero() && e.grading().map(|g| g.alex2) == Some(product.alex2.clone()) => {
            same_class(cache, e, &product.value)?
        }
        _ => false,
    };
    Ok(CandidateOutcome::Evaluated(Box::new(MasseyCertificate {
        family: cand.family,
        line: cand.line,
        start: cand.start.to_string(),
        classes: texts.try_into().expect("three paths"),
        value: product.value.to_string(),
        expected: expected.map(|e| e.to_string()),
        matches_expected,
        maslov: product.maslov,
        alex2: product.alex2.clone(),
        product,
    })))
}

/// Nonzero homology classes of single `R`, `L` and `U` edges leaving `x`.
pub fn single_edge_classes(cache: &mut HomologyCache, x: &IState) -> Result<Vec<(EdgeLabel, HomClass)>> {
    let ctx = cache.context();
    let mut out = Vec::new();
    for (e, _) in edges_from(&ctx, x)? {
        if e.kind == EdgeKind::C {
            continue;
        }
        let Some(c) = edge_class(&ctx, *x, &[e])? else { continue };
        if !cache.is_boundary(&c.rep, &c.x, &c.y, &c.alex2, c.maslov)? {
            out.push((e, c));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ClearanceReport {
    pub context: String,
    /// Nonzero single-edge classes.
    pub edge_classes: usize,
    /// Admissible triples of single-edge classes.
    pub edge_admissible: usize,
    /// Basis classes of homology with `Σ alex2` at most the sweep bound.
    pub low_degree_classes: usize,
    pub low_degree_admissible: usize,
    /// Admissible sequences from the structured families, on longer paths.
    pub family_admissible: usize,
    /// Admissible sequences with a nonzero product.
    pub nonzero: Vec<String>,
}

impl ClearanceReport {
    pub fn passed(&self) -> bool {
        self.nonzero.is_empty()
    }

    pub fn admissible(&self) -> usize {
        self.edge_admissible + self.low_degree_admissible + self.family_admissible
    }
}

type LabelledClasses = BTreeMap<IState, Vec<(String, HomClass)>>;

struct SweepOutcome {
    classes: usize,
    admissible: usize,
    nonzero: Vec<String>,
    first: Option<MasseyCertificate>,
}

/// Evaluates every admissible composable triple drawn from `by_vertex`.
fn sweep(cache: &mut HomologyCache, by_vertex: &LabelledClasses, stop_after: Option<usize>) -> Result<SweepOutcome> {
    let mut out = SweepOutcome {
        classes: by_vertex.values().map(Vec::len).sum(),
        admissible: 0,
        nonzero: Vec::new(),
        first: None,
    };
    let none = Vec::new();
    for (x, starts) in by_vertex {
        for (l1, a1) in starts {
            for (l2, a2) in by_vertex.get(&a1.y).unwrap_or(&none) {
                for (l3, a3) in by_vertex.get(&a2.y).unwrap_or(&none) {
                    let seq = [a1.clone(), a2.clone(), a3.clone()];
                    if !is_massey_admissible3(cache, &seq)?.admissible() {
                        continue;
                    }
                    out.admissible += 1;
                    let product = massey3(cache, &seq)?;
                    if product.is_zero() {
                        continue;
                    }
                    out.nonzero.push(format!("{l1} {l2} {l3} -> {}", product.value));
                    if out.first.is_none() {
                        out.first = Some(MasseyCertificate {
                            family: CertificateFamily::EdgeSweep,
                            line: 0,
                            start: x.to_string(),
                            classes: [l1.clone(), l2.clone(), l3.clone()],
                            value: product.value.to_string(),
                            expected: None,
                            matches_expected: false,
                            maslov: product.maslov,
                            alex2: product.alex2.clone(),
                            product,
                        });
                    }
                    if stop_after.is_some_and(|k| out.nonzero.len() >= k) {
                        return Ok(out);
                    }
                }
            }
        }
    }
    Ok(out)
}

fn edge_classes(cache: &mut HomologyCache) -> Result<LabelledClasses> {
    let mut by_vertex = BTreeMap::new();
    for x in cache.context().states() {
        let classes = single_edge_classes(cache, &x)?
            .into_iter()
            .map(|(e, c)| (path_text(x, &[e]), c))
            .collect();
        by_vertex.insert(x, classes);
    }
    Ok(by_vertex)
}

/// A basis of homology classes in every piece with `Σ alex2 <= max_degree`.
pub fn low_degree_classes(cache: &mut HomologyCache, max_degree: i32) -> Result<BTreeMap<IState, Vec<HomClass>>> {
    let ctx = cache.context();
    let mut by_vertex: BTreeMap<IState, Vec<HomClass>> = BTreeMap::new();
    for (x, y) in ctx.pairs() {
        for alex2 in degrees_for_pair(&x, &y, max_degree) {
            let h = cache.piece(&x, &y, &alex2)?;
            let reps: Vec<Element> = h.ranks().keys().flat_map(|&m| h.representatives(m)).collect();
            for rep in reps {
                by_vertex.entry(x).or_default().push(HomClass::new(rep)?);
            }
        }
    }
    Ok(by_vertex)
}

/// Evaluates every admissible composable triple of single-edge classes.
/// Stops after `stop_after` nonzero products when given.
pub fn edge_sweep(cache: &mut HomologyCache, stop_after: Option<usize>) -> Result<(ClearanceReport, Option<MasseyCertificate>)> {
    let classes = edge_classes(cache)?;
    let out = sweep(cache, &classes, stop_after)?;
    let rep = ClearanceReport {
        context: cache.context().to_string(),
        edge_classes: out.classes,
        edge_admissible: out.admissible,
        nonzero: out.nonzero,
        ..Default::default()
    };
    Ok((rep, out.first))
}

const FAMILIES: [CertificateFamily; 6] = [
    CertificateFamily::LeftRightRight,
    CertificateFamily::RightLeftLeft,
    CertificateFamily::LeftRightU,
    CertificateFamily::RightLeftU,
    CertificateFamily::LeftSegment,
    CertificateFamily::RightSegment,
];

/// Degree bound for the low-degree sweep: paths of length at most two.
pub const CLEARANCE_DEGREE: i32 = 2;

/// Sweeps of single-edge classes and of low-degree homology classes, together
/// with every admissible sequence of the structured families. For a formal
/// algebra all of them vanish.
pub fn clearance(cache: &mut HomologyCache) -> Result<ClearanceReport> {
    let ctx = cache.context();
    let (mut rep, _) = edge_sweep(cache, None)?;
    let low: LabelledClasses = low_degree_classes(cache, CLEARANCE_DEGREE)?
        .into_iter()
        .map(|(x, cs)| (x, cs.into_iter().map(|c| (c.rep.to_string(), c)).collect()))
        .collect();
    let out = sweep(cache, &low, None)?;
    rep.low_degree_classes = out.classes;
    rep.low_degree_admissible = out.admissible;
    rep.nonzero.extend(out.nonzero);
    for family in FAMILIES {
        for cand in candidates(&ctx, family) {
            if let CandidateOutcome::Evaluated(cert) = evaluate(cache, &cand)? {
                rep.family_admissible += 1;
                if !cert.product.is_zero() {
                    rep.nonzero.push(format!("{family} {} -> {}", cert.classes.join(" "), cert.value));
                }
            }
        }
    }
    Ok(rep)
}

/// The first nonzero triple from the structured families, falling back to the
/// single-edge sweep.
pub fn find_certificate(cache: &mut HomologyCache) -> Result<Option<MasseyCertificate>> {
    let ctx = cache.context();
    for family in FAMILIES {
        for cand in candidates(&ctx, family) {
            if let CandidateOutcome::Evaluated(cert) = evaluate(cache, &cand)? {
                if !cert.product.is_zero() {
                    return Ok(Some(*cert));
                }
            }
        }
    }
    Ok(edge_sweep(cache, Some(1))?.1)
}

/// The expected value of a candidate as an element, when its path is valid.
pub fn expected_element(ctx: &AlgebraContext, cand: &CandidateSequence) -> Result<Option<Element>> {
    match Path::new(ctx, cand.start, cand.expected.clone()) {
        Ok(p) => Ok(Some(normalize(ctx, &p)?)),
        Err(_) => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Flavor;

    #[test]
    fn two_line_families() {
        let ctx = AlgebraContext::with_lines(2, 1, &[1], Flavor::B).unwrap();
        let mut cache = HomologyCache::new(ctx);
        let cands = candidates(&ctx, CertificateFamily::LeftRightRight);
        assert_eq!(cands.len(), 1);
        let CandidateOutcome::Evaluated(cert) = evaluate(&mut cache, &cands[0]).unwrap() else {
            panic!("sequence should be admissible");
        };
        assert_eq!(cert.value, "C1*f[{1},{2}]");
        assert!(cert.matches_expected);
        assert_eq!(cert.classes[0], "{1}:L1");
    }

    #[test]
    fn segment_certificate_in_right_truncation() {
        let ctx = AlgebraContext::with_lines(2, 1, &[2], Flavor::Br).unwrap();
        let mut cache = HomologyCache::new(ctx);
        let cands = candidates(&ctx, CertificateFamily::LeftSegment);
        assert_eq!(cands.len(), 1);
        let CandidateOutcome::Evaluated(cert) = evaluate(&mut cache, &cands[0]).unwrap() else {
            panic!("sequence should be admissible");
        };
        assert!(!cert.product.is_zero());
        assert!(cert.matches_expected, "{}", cert.value);
    }

    #[test]
    fn sweep_is_clear_without_orientation() {
        let ctx = AlgebraContext::with_lines(3, 1, &[], Flavor::B).unwrap();
        let mut cache = HomologyCache::new(ctx);
        let (rep, cert) = edge_sweep(&mut cache, None).unwrap();
        assert!(rep.passed() && cert.is_none());
        assert!(rep.edge_admissible > 0);
    }
}
