//! The quiver `Γ(n,k,S)`, its relations, and the normalization map from
//! paths to algebra elements.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::algebra::{AlgebraContext, BasisElement, Element, Flavor, Monomial};
use crate::error::{Error, Result};
use crate::f2::{BitVec, Echelon};
use crate::istate::{weight_entry, IState, LineSet};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum EdgeKind {
    R,
    L,
    U,
    C,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct EdgeLabel {
    pub kind: EdgeKind,
    pub line: usize,
}

impl EdgeLabel {
    pub fn r(line: usize) -> Self {
        Self { kind: EdgeKind::R, line }
    }

    pub fn l(line: usize) -> Self {
        Self { kind: EdgeKind::L, line }
    }

    pub fn u(line: usize) -> Self {
        Self { kind: EdgeKind::U, line }
    }

    pub fn c(line: usize) -> Self {
        Self { kind: EdgeKind::C, line }
    }

    pub fn is_loop(&self) -> bool {
        matches!(self.kind, EdgeKind::U | EdgeKind::C)
    }

    /// The head of this edge out of `x`, ignoring truncation and orientation.
    pub fn apply(&self, x: &IState) -> Option<IState> {
        let i = self.line;
        if i == 0 || i > x.width() {
            return None;
        }
        match self.kind {
            EdgeKind::R => (x.contains(i - 1) && !x.contains(i)).then(|| x.with_moved(i - 1, i)),
            EdgeKind::L => (x.contains(i) && !x.contains(i - 1)).then(|| x.with_moved(i, i - 1)),
            EdgeKind::U | EdgeKind::C => Some(*x),
        }
    }

    /// The matching label in the opposite quiver: `R_i <-> L_i`.
    pub fn opposite(&self) -> Self {
        let kind = match self.kind {
            EdgeKind::R => EdgeKind::L,
            EdgeKind::L => EdgeKind::R,
            k => k,
        };
        Self { kind, line: self.line }
    }

    /// The image under the reflection of width `n`: `R_i -> L_{n+1-i}`.
    pub fn reflect(&self, n: usize) -> Self {
        Self {
            line: n + 1 - self.line,
            ..self.opposite()
        }
    }

    /// Contribution to the doubled Alexander grading on its line.
    fn alex2(&self) -> i32 {
        if self.is_loop() {
            2
        } else {
            1
        }
    }
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.kind, self.line)
    }
}

/// A path in the quiver: a start vertex and a sequence of edges.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Path {
    start: IState,
    edges: Vec<EdgeLabel>,
}

impl Path {
    /// Validates that every edge exists in the quiver of `ctx`.
    pub fn new(ctx: &AlgebraContext, start: IState, edges: Vec<EdgeLabel>) -> Result<Self> {
        ctx.check_state(&start)?;
        let mut cur = start;
        for (pos, e) in edges.iter().enumerate() {
            cur = step(ctx, &cur, e).ok_or_else(|| {
                Error::InvalidPath(format!("edge {e} at position {pos} is not available at {cur}"))
            })?;
        }
        Ok(Self { start, edges })
    }

    pub fn empty(start: IState) -> Self {
        Self {
            start,
            edges: Vec::new(),
        }
    }

    pub fn start(&self) -> IState {
        self.start
    }

    pub fn edges(&self) -> &[EdgeLabel] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Vertices visited, including both ends.
    pub fn vertices(&self) -> Vec<IState> {
        let mut out = vec![self.start];
        let mut cur = self.start;
        for e in &self.edges {
            cur = e.apply(&cur).expect("path was validated");
            out.push(cur);
        }
        out
    }

    pub fn end(&self) -> IState {
        *self.vertices().last().expect("at least the start vertex")
    }

    pub fn concat(&self, other: &Path) -> Result<Path> {
        if self.end() != other.start {
            return Err(Error::InvalidPath(format!(
                "cannot append a path from {} to one ending at {}",
                other.start,
                self.end()
            )));
        }
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Ok(Path {
            start: self.start,
            edges,
        })
    }

    /// Splits after the first `at` edges.
    pub fn split_at(&self, at: usize) -> (Path, Path) {
        let mid = self.vertices()[at];
        (
            Path {
                start: self.start,
                edges: self.edges[..at].to_vec(),
            },
            Path {
                start: mid,
                edges: self.edges[at..].to_vec(),
            },
        )
    }

    /// Parses `{0}:R1,R2`; the empty path is `{0}:`.
    pub fn parse(ctx: &AlgebraContext, text: &str) -> Result<Path> {
        let mut cur = crate::text::Cursor::new(text);
        let start = cur.istate(ctx.width())?;
        cur.expect(b':')?;
        let mut edges = Vec::new();
        if !cur.at_end() {
            loop {
                let c = cur.peek();
                let kind = match c {
                    Some(b'R') => EdgeKind::R,
                    Some(b'L') => EdgeKind::L,
                    Some(b'U') => EdgeKind::U,
                    Some(b'C') => EdgeKind::C,
                    _ => return cur.error("expected an edge label R, L, U or C"),
                };
                cur.eat(c.expect("matched a label"));
                let line = cur.number()?;
                edges.push(EdgeLabel { kind, line });
                if !cur.eat(b',') {
                    break;
                }
            }
        }
        cur.finish()?;
        Path::new(ctx, start, edges)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.start)?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

fn step(ctx: &AlgebraContext, x: &IState, e: &EdgeLabel) -> Option<IState> {
    if e.kind == EdgeKind::C && !ctx.orientation().contains(e.line) {
        return None;
    }
    e.apply(x).filter(|y| ctx.is_admissible(y))
}

/// Outgoing edges at `x`: moves by line, then `U` loops, then `C` loops.
pub fn edges_from(ctx: &AlgebraContext, x: &IState) -> Result<Vec<(EdgeLabel, IState)>> {
    ctx.check_state(x)?;
    let n = ctx.width();
    let mut out = Vec::new();
    for i in 1..=n {
        for e in [EdgeLabel::r(i), EdgeLabel::l(i)] {
            if let Some(y) = step(ctx, x, &e) {
                out.push((e, y));
            }
        }
    }
    for i in 1..=n {
        out.push((EdgeLabel::u(i), *x));
    }
    for i in ctx.orientation().iter() {
        out.push((EdgeLabel::c(i), *x));
    }
    Ok(out)
}

fn edge_image(x: &IState, e: &EdgeLabel) -> BasisElement {
    match e.kind {
        EdgeKind::R | EdgeKind::L => BasisElement::generator(*x, e.apply(x).expect("validated edge")),
        EdgeKind::U => BasisElement::new(*x, *x, Monomial::from_lines(1 << e.line), LineSet::EMPTY),
        EdgeKind::C => BasisElement::new(*x, *x, Monomial::ONE, LineSet::EMPTY.with(e.line)),
    }
}

/// The image of a path: the product of its edge images.
pub fn normalize(ctx: &AlgebraContext, path: &Path) -> Result<Element> {
    let path = Path::new(ctx, path.start, path.edges.clone())?;
    Ok(Element::from_option(*ctx, normalize_basis(ctx, &path)))
}

fn normalize_basis(ctx: &AlgebraContext, path: &Path) -> Option<BasisElement> {
    let mut acc = ctx.reduce(BasisElement::generator(path.start, path.start))?;
    let mut cur = path.start;
    for e in &path.edges {
        let b = ctx.reduce(edge_image(&cur, e))?;
        acc = ctx.mul_basis(&acc, &b)?;
        cur = b.right;
    }
    Some(acc)
}

/// The canonical path from `x` to `y`: move the rightmost dot that must move
/// right, else the leftmost dot that must move left.
pub fn canonical_path(ctx: &AlgebraContext, x: &IState, y: &IState) -> Result<Path> {
    ctx.check_state(x)?;
    ctx.check_state(y)?;
    let target: Vec<usize> = y.members().collect();
    let mut cur = *x;
    let mut edges = Vec::new();
    while cur != *y {
        let now: Vec<usize> = cur.members().collect();
        if let Some(a) = (0..now.len()).rev().find(|&a| now[a] < target[a]) {
            for i in now[a] + 1..=target[a] {
                edges.push(EdgeLabel::r(i));
            }
            cur = cur.with_moved(now[a], target[a]);
        } else {
            let a = (0..now.len())
                .find(|&a| now[a] > target[a])
                .expect("states differ");
            for i in (target[a] + 1..=now[a]).rev() {
                edges.push(EdgeLabel::l(i));
            }
            cur = cur.with_moved(now[a], target[a]);
        }
    }
    Path::new(ctx, *x, edges)
}

/// Counts of `R_i` and `L_i` edges per line, checked against the weight vector.
pub fn path_counts(path: &Path) -> Result<(Vec<u32>, Vec<u32>)> {
    let end = path.end();
    let n = path.start.width();
    let mut rho = vec![0u32; n];
    let mut lambda = vec![0u32; n];
    for e in &path.edges {
        match e.kind {
            EdgeKind::R => rho[e.line - 1] += 1,
            EdgeKind::L => lambda[e.line - 1] += 1,
            _ => {}
        }
    }
    for i in 1..=n {
        let v = weight_entry(n, path.start.bits(), end.bits(), i);
        if rho[i - 1] as i32 - lambda[i - 1] as i32 != v {
            return Err(Error::InvalidPath(format!(
                "edge counts on line {i} disagree with the weight vector"
            )));
        }
    }
    Ok((rho, lambda))
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum RelationFamily {
    /// Relations of the unreduced algebra.
    Base,
    /// Adds two-line passes and `U` vanishing.
    Tilde,
    /// Adds the exterior relations.
    TildeS,
}

impl fmt::Display for RelationFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, PartialOrd, Ord)]
pub enum RelationKind {
    UCentral,
    Loop,
    DistantCommutation,
    TwoLinePass,
    UVanishing,
    CSquared,
    CCentral,
    /// `U_1⋯U_n` at `[1, n-1]` in `B'(n, n-1)`.
    Corner,
}

/// A homogeneous sum of paths with common endpoints.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Relation {
    pub kind: RelationKind,
    pub terms: Vec<Path>,
}

impl Relation {
    pub fn start(&self) -> IState {
        self.terms[0].start()
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown: Vec<String> = self.terms.iter().map(|p| p.to_string()).collect();
        write!(f, "{:?}: {}", self.kind, shown.join(" + "))
    }
}

impl AlgebraContext {
    /// The relation family presenting this algebra.
    pub fn default_relation_family(&self) -> RelationFamily {
        if self.flavor() == Flavor::B0 {
            RelationFamily::Base
        } else {
            RelationFamily::TildeS
        }
    }
}

/// All relations of a family, enumerated over base vertices and index pairs.
/// In truncated flavors only relations whose paths stay among the vertices
/// are kept; `B'(n, n-1, S)` adds the corner monomial.
pub fn relation_elements(ctx: &AlgebraContext, family: RelationFamily) -> Result<Vec<Relation>> {
    if ctx.flavor() == Flavor::B0 && family != RelationFamily::Base {
        return Err(Error::FamilyMismatch {
            family: family.to_string(),
            context: ctx.to_string(),
        });
    }
    let n = ctx.width();
    let mut out = Vec::new();
    for x in ctx.states() {
        let mut push = |kind: RelationKind, words: Vec<Vec<EdgeLabel>>| {
            let terms: Result<Vec<Path>> =
                words.into_iter().map(|w| Path::new(ctx, x, w)).collect();
            if let Ok(terms) = terms {
                out.push(Relation { kind, terms });
            }
        };
        let moves: Vec<EdgeLabel> = (1..=n)
            .flat_map(|i| [EdgeLabel::r(i), EdgeLabel::l(i)])
            .filter(|e| step(ctx, &x, e).is_some())
            .collect();
        for a in &moves {
            for j in 1..=n {
                let u = EdgeLabel::u(j);
                push(RelationKind::UCentral, vec![vec![*a, u], vec![u, *a]]);
            }
        }
        for i in 1..=n {
            for j in i + 1..=n {
                let (a, b) = (EdgeLabel::u(i), EdgeLabel::u(j));
                push(RelationKind::UCentral, vec![vec![a, b], vec![b, a]]);
            }
        }
        for a in &moves {
            let back = a.opposite();
            push(RelationKind::Loop, vec![vec![*a, back], vec![EdgeLabel::u(a.line)]]);
        }
        for i in 1..=n {
            for j in 1..=n {
                if i.abs_diff(j) <= 1 {
                    continue;
                }
                let pairs = [
                    (EdgeLabel::r(i), EdgeLabel::r(j), i < j),
                    (EdgeLabel::l(i), EdgeLabel::l(j), i < j),
                    (EdgeLabel::r(i), EdgeLabel::l(j), true),
                ];
                for (a, b, keep) in pairs {
                    if keep {
                        push(RelationKind::DistantCommutation, vec![vec![a, b], vec![b, a]]);
                    }
                }
            }
        }
        if family == RelationFamily::Base {
            continue;
        }
        for i in 1..n {
            push(RelationKind::TwoLinePass, vec![vec![EdgeLabel::r(i), EdgeLabel::r(i + 1)]]);
            push(RelationKind::TwoLinePass, vec![vec![EdgeLabel::l(i + 1), EdgeLabel::l(i)]]);
        }
        for i in 1..=n {
            if !x.contains(i - 1) && !x.contains(i) {
                push(RelationKind::UVanishing, vec![vec![EdgeLabel::u(i)]]);
            }
        }
        if family == RelationFamily::TildeS {
            let s: Vec<usize> = ctx.orientation().iter().collect();
            for &i in &s {
                let c = EdgeLabel::c(i);
                push(RelationKind::CSquared, vec![vec![c, c]]);
                let mut others: Vec<EdgeLabel> = moves.clone();
                others.extend((1..=n).map(EdgeLabel::u));
                others.extend(s.iter().filter(|&&j| j > i).map(|&j| EdgeLabel::c(j)));
                for a in others {
                    push(RelationKind::CCentral, vec![vec![c, a], vec![a, c]]);
                }
            }
        }
        if ctx.flavor() == Flavor::Bprime
            && ctx.size() + 1 == n
            && x == IState::interval(n, 1, n - 1).expect("in range")
        {
            push(RelationKind::Corner, vec![(1..=n).map(EdgeLabel::u).collect()]);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PresentationReport {
    pub context: String,
    pub relations: usize,
    pub pairs: usize,
    pub edges: usize,
    pub segments: usize,
    pub failures: Vec<String>,
}

impl PresentationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that relations normalize to zero, that canonical paths normalize to
/// the generators, that single edges are their own canonical paths, and that
/// products of canonical segments are monomial multiples of canonical paths.
pub fn verify_presentation(ctx: &AlgebraContext) -> Result<PresentationReport> {
    let mut rep = PresentationReport {
        context: ctx.to_string(),
        ..Default::default()
    };
    for rel in relation_elements(ctx, ctx.default_relation_family())? {
        rep.relations += 1;
        let mut sum = Element::zero(*ctx);
        for p in &rel.terms {
            sum = &sum + &normalize(ctx, p)?;
        }
        if !sum.is_zero() {
            rep.failures.push(format!("relation {rel} normalizes to {sum}"));
        }
    }
    let states = ctx.states();
    let unreduced = AlgebraContext::new(ctx.width(), ctx.size(), LineSet::EMPTY, Flavor::B0)?;
    for x in &states {
        for y in &states {
            rep.pairs += 1;
            let gamma = canonical_path(ctx, x, y)?;
            let image = normalize(ctx, &gamma)?;
            if image != ctx.gen_f(x, y)? {
                rep.failures.push(format!("canonical path {gamma} normalizes to {image}"));
            }
            path_counts(&gamma)?;
        }
        for (e, y) in edges_from(ctx, x)? {
            if e.is_loop() {
                continue;
            }
            rep.edges += 1;
            let gamma = canonical_path(ctx, x, &y)?;
            if gamma.edges() != [e] {
                rep.failures.push(format!("edge {e} at {x} has canonical path {gamma}"));
            }
            for z in &states {
                rep.segments += 1;
                let joined = gamma.concat(&canonical_path(ctx, &y, z)?)?;
                let want = BasisElement::new(
                    *x,
                    *z,
                    unreduced.defect_monomial(x, &y, z),
                    LineSet::EMPTY,
                );
                if normalize_basis(&unreduced, &joined) != Some(want) {
                    rep.failures.push(format!("segment product {joined} is not U^d·f"));
                }
            }
        }
    }
    Ok(rep)
}

/// Dimension of `I_x · (Path / ideal) · I_y` in doubled Alexander degree `alex2`,
/// where the ideal is generated by `relations`. Computed by linear algebra
/// over all paths of that degree.
pub fn quotient_dimension(
    ctx: &AlgebraContext,
    relations: &[Relation],
    x: &IState,
    y: &IState,
    alex2: &[i32],
) -> Result<usize> {
    ctx.check_state(x)?;
    ctx.check_state(y)?;
    let n = ctx.width();
    let mut paths: Vec<Vec<EdgeLabel>> = Vec::new();
    let mut remaining = alex2.to_vec();
    let mut word = Vec::new();
    collect_paths(ctx, x, y, &mut remaining, &mut word, &mut paths);
    let index: HashMap<&[EdgeLabel], usize> =
        paths.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();

    let mut by_term: HashMap<(IState, &[EdgeLabel]), Vec<usize>> = HashMap::new();
    let mut lengths = HashSet::new();
    for (r, rel) in relations.iter().enumerate() {
        for t in &rel.terms {
            by_term.entry((t.start, t.edges())).or_default().push(r);
            lengths.insert(t.len());
        }
    }
    let mut ideal = Echelon::new(paths.len());
    for w in &paths {
        let verts = Path::new(ctx, *x, w.clone())?.vertices();
        for p in 0..w.len() {
            for &len in &lengths {
                if len == 0 || p + len > w.len() {
                    continue;
                }
                let Some(rels) = by_term.get(&(verts[p], &w[p..p + len])) else {
                    continue;
                };
                for &r in rels {
                    let mut v = BitVec::zeros(paths.len());
                    for t in &relations[r].terms {
                        let mut nw = w[..p].to_vec();
                        nw.extend_from_slice(t.edges());
                        nw.extend_from_slice(&w[p + len..]);
                        let j = index.get(nw.as_slice()).ok_or_else(|| {
                            Error::InvalidPath(format!("relation {} is not homogeneous", relations[r]))
                        })?;
                        v.flip(*j);
                    }
                    ideal.insert(v);
                }
            }
        }
    }
    debug_assert!(n == alex2.len());
    Ok(paths.len() - ideal.rank())
}

fn collect_paths(
    ctx: &AlgebraContext,
    cur: &IState,
    target: &IState,
    remaining: &mut [i32],
    word: &mut Vec<EdgeLabel>,
    out: &mut Vec<Vec<EdgeLabel>>,
) {
    if remaining.iter().all(|&r| r == 0) {
        if cur == target {
            out.push(word.clone());
        }
        return;
    }
    for (e, next) in edges_from(ctx, cur).expect("admissible vertex") {
        let d = e.alex2();
        if remaining[e.line - 1] < d {
            continue;
        }
        remaining[e.line - 1] -= d;
        word.push(e);
        collect_paths(ctx, &next, target, remaining, word, out);
        word.pop();
        remaining[e.line - 1] += d;
    }
}

/// Graphviz rendering of the quiver.
pub fn to_dot(ctx: &AlgebraContext) -> String {
    let mut s = format!("digraph \"{ctx}\" {{\n");
    for x in ctx.states() {
        s.push_str(&format!("  \"{x}\";\n"));
    }
    for x in ctx.states() {
        for (e, y) in edges_from(ctx, &x).expect("admissible vertex") {
            s.push_str(&format!("  \"{x}\" -> \"{y}\" [label=\"{e}\"];\n"));
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(n: usize, m: &[usize]) -> IState {
        IState::new(n, m).unwrap()
    }

    #[test]
    fn edges_at_a_vertex() {
        let ctx = AlgebraContext::with_lines(2, 1, &[1], Flavor::B).unwrap();
        let shown: Vec<String> = edges_from(&ctx, &st(2, &[1]))
            .unwrap()
            .iter()
            .map(|(e, y)| format!("{e}->{y}"))
            .collect();
        assert_eq!(shown, ["L1->{0}", "R2->{2}", "U1->{1}", "U2->{1}", "C1->{1}"]);
        let ctx = AlgebraContext::with_lines(1, 1, &[], Flavor::B).unwrap();
        assert_eq!(edges_from(&ctx, &st(1, &[0])).unwrap().len(), 2);
    }

    #[test]
    fn canonical_path_examples() {
        let ctx = AlgebraContext::with_lines(2, 1, &[], Flavor::B0).unwrap();
        let p = canonical_path(&ctx, &st(2, &[0]), &st(2, &[2])).unwrap();
        assert_eq!(p.to_string(), "{0}:R1,R2");
        assert_eq!(normalize(&ctx, &p).unwrap().to_string(), "f[{0},{2}]");
        let ctx = AlgebraContext::with_lines(2, 1, &[], Flavor::B).unwrap();
        assert!(normalize(&ctx, &p).unwrap().is_zero());
    }

    #[test]
    fn loop_relation_normalizes_to_zero() {
        let ctx = AlgebraContext::with_lines(1, 1, &[], Flavor::B).unwrap();
        let p = Path::parse(&ctx, "{0}:R1,L1").unwrap();
        assert_eq!(normalize(&ctx, &p).unwrap().to_string(), "U1^1*f[{0},{0}]");
        let q = Path::parse(&ctx, "{0}:U1").unwrap();
        assert_eq!(normalize(&ctx, &p).unwrap(), normalize(&ctx, &q).unwrap());
    }

    #[test]
    fn path_parse_rejects_missing_edges() {
        let ctx = AlgebraContext::with_lines(2, 1, &[], Flavor::B).unwrap();
        assert!(Path::parse(&ctx, "{0}:L1").is_err());
        assert!(Path::parse(&ctx, "{0}:C1").is_err());
        assert_eq!(Path::parse(&ctx, "{0}:").unwrap().len(), 0);
    }

    #[test]
    fn dot_lists_every_edge() {
        let ctx = AlgebraContext::with_lines(1, 1, &[1], Flavor::B).unwrap();
        let dot = to_dot(&ctx);
        assert_eq!(dot.matches("->").count(), 6);
        assert!(dot.contains("\"{0}\" -> \"{1}\" [label=\"R1\"]"));
    }
}
