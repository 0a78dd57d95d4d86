//! I-states, weight vectors and the interval decomposition of a pair of states.
//!
//! An I-state of width `n` and size `k` is a `k`-element subset of the
//! coordinates `{0, ..., n}`. Lines are indexed `1..=n`; line `i` sits between
//! coordinates `i - 1` and `i`.

use std::cmp::Ordering;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported width.
pub const MAX_LINES: usize = 16;

pub(crate) fn check_width(n: usize) -> Result<()> {
    if (1..=MAX_LINES).contains(&n) {
        Ok(())
    } else {
        Err(Error::WidthOutOfRange(n))
    }
}

/// Bit mask of the coordinates (or lines) `>= i`, clipped to `0..=n`.
#[inline]
pub(crate) fn mask_from(n: usize, i: usize) -> u32 {
    let upto = (1u32 << (n + 1)) - 1;
    if i > n {
        0
    } else {
        upto & !((1u32 << i) - 1)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct IState {
    n: u8,
    bits: u32,
}

impl IState {
    pub fn new(n: usize, members: &[usize]) -> Result<Self> {
        check_width(n)?;
        let mut bits = 0u32;
        let mut prev: Option<usize> = None;
        for &m in members {
            if m > n {
                return Err(Error::CoordinateOutOfRange { n, coord: m });
            }
            if prev.is_some_and(|p| m <= p) {
                return Err(Error::NotIncreasing);
            }
            bits |= 1 << m;
            prev = Some(m);
        }
        Ok(Self { n: n as u8, bits })
    }

    pub(crate) fn from_bits(n: usize, bits: u32) -> Self {
        debug_assert!(bits & !mask_from(n, 0) == 0);
        Self { n: n as u8, bits }
    }

    /// The interval `[lo, hi]` of coordinates (empty when `lo > hi`).
    pub fn interval(n: usize, lo: usize, hi: usize) -> Result<Self> {
        check_width(n)?;
        if hi > n {
            return Err(Error::CoordinateOutOfRange { n, coord: hi });
        }
        if lo > hi {
            return Ok(Self::from_bits(n, 0));
        }
        Ok(Self::from_bits(n, mask_from(n, lo) & !mask_from(n, hi + 1)))
    }

    /// Parses `{0,2,5}`.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let mut parser = crate::text::Cursor::new(text);
        let state = parser.istate(n)?;
        parser.finish()?;
        Ok(state)
    }

    pub fn width(&self) -> usize {
        self.n as usize
    }

    pub fn size(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn contains(&self, coord: usize) -> bool {
        coord <= self.width() && self.bits >> coord & 1 == 1
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        (0..=self.width()).filter(|&c| self.contains(c))
    }

    /// `|x ∩ [i, n]|`.
    pub fn count_from(&self, i: usize) -> i32 {
        (self.bits & mask_from(self.width(), i)).count_ones() as i32
    }

    /// The reflection `a -> n - a`.
    pub fn reflect(&self) -> Self {
        let n = self.width();
        let mut bits = 0;
        for c in self.members() {
            bits |= 1 << (n - c);
        }
        Self::from_bits(n, bits)
    }

    pub(crate) fn with_moved(&self, from: usize, to: usize) -> Self {
        Self::from_bits(self.width(), (self.bits & !(1 << from)) | (1 << to))
    }
}

impl Ord for IState {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.members().cmp(other.members()))
    }
}

impl PartialOrd for IState {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for IState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.members().join(","))
    }
}

impl fmt::Debug for IState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// All I-states of width `n` and size `k`, in lexicographic order.
pub fn enumerate_istates(n: usize, k: usize) -> Result<Vec<IState>> {
    check_width(n)?;
    if k > n + 1 {
        return Err(Error::SizeOutOfRange { n, k });
    }
    Ok((0..=n)
        .combinations(k)
        .map(|c| IState::from_bits(n, c.iter().fold(0, |b, &m| b | 1 << m)))
        .collect())
}

fn check_pair(x: &IState, y: &IState) -> Result<()> {
    if x.n != y.n || x.size() != y.size() {
        return Err(Error::StateMismatch(x.to_string(), y.to_string()));
    }
    Ok(())
}

/// A set of lines, a subset of `[1, n]`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LineSet(u32);

impl LineSet {
    pub const EMPTY: Self = Self(0);

    pub fn new(n: usize, lines: &[usize]) -> Result<Self> {
        let mut bits = 0;
        for &i in lines {
            if i == 0 || i > n {
                return Err(Error::LineOutOfRange { n, line: i });
            }
            bits |= 1 << i;
        }
        Ok(Self(bits))
    }

    /// All lines `1..=n`.
    pub fn all(n: usize) -> Self {
        Self(mask_from(n, 1))
    }

    pub(crate) fn from_bits(bits: u32) -> Self {
        debug_assert!(bits & 1 == 0);
        Self(bits)
    }

    pub fn bits(&self) -> u32 {
        self.0
    }

    pub fn contains(&self, i: usize) -> bool {
        i < 32 && self.0 >> i & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (1..32).filter(|&i| self.contains(i))
    }

    pub fn first(&self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn last(&self) -> Option<usize> {
        (self.0 != 0).then(|| 31 - self.0.leading_zeros() as usize)
    }

    pub fn with(&self, i: usize) -> Self {
        Self(self.0 | 1 << i)
    }

    pub fn without(&self, i: usize) -> Self {
        Self(self.0 & !(1 << i))
    }

    pub fn union(&self, other: Self) -> Self {
        Self(self.0 | other.0)
    }

    pub fn intersection(&self, other: Self) -> Self {
        Self(self.0 & other.0)
    }

    pub fn difference(&self, other: Self) -> Self {
        Self(self.0 & !other.0)
    }

    pub fn is_subset(&self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// The reflection `i -> n + 1 - i`.
    pub fn reflect(&self, n: usize) -> Self {
        Self(self.iter().fold(0, |b, i| b | 1 << (n + 1 - i)))
    }

    /// Every subset of `[1, n]`, ordered by bit pattern.
    pub fn all_subsets(n: usize) -> impl Iterator<Item = Self> {
        (0u32..1 << n).map(|m| Self(m << 1))
    }

    /// Parses a comma-separated list such as `1,3`; the empty string is the empty set.
    pub fn parse_list(n: usize, text: &str) -> Result<Self> {
        let text = text.trim().trim_start_matches('{').trim_end_matches('}');
        let mut lines = Vec::new();
        for (pos, part) in text.split(',').enumerate() {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let line = part.parse::<usize>().map_err(|_| Error::Parse {
                pos,
                msg: format!("bad line index {part:?}"),
            })?;
            lines.push(line);
        }
        Self::new(n, &lines)
    }
}

impl fmt::Display for LineSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.iter().join(","))
    }
}

impl fmt::Debug for LineSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The weight vector `v_i(x, y) = |y ∩ [i,n]| - |x ∩ [i,n]|`, indexed by line.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightVector(Vec<i32>);

impl WeightVector {
    /// The entry for line `i`, `1 <= i <= n`.
    pub fn get(&self, i: usize) -> i32 {
        self.0[i - 1]
    }

    pub fn entries(&self) -> &[i32] {
        &self.0
    }

    pub fn abs(&self) -> Vec<i32> {
        self.0.iter().map(|v| v.abs()).collect()
    }
}

#[inline]
pub(crate) fn weight_entry(n: usize, x: u32, y: u32, i: usize) -> i32 {
    let m = mask_from(n, i);
    (y & m).count_ones() as i32 - (x & m).count_ones() as i32
}

pub fn weight_vector(x: &IState, y: &IState) -> Result<WeightVector> {
    check_pair(x, y)?;
    let n = x.width();
    Ok(WeightVector(
        (1..=n).map(|i| weight_entry(n, x.bits, y.bits, i)).collect(),
    ))
}

/// `|v|_i(y,z) - |v|_i(x,z) + |v|_i(x,y)`; always even and non-negative.
pub fn subadditivity_defect(x: &IState, y: &IState, z: &IState, i: usize) -> Result<u32> {
    check_pair(x, y)?;
    check_pair(y, z)?;
    let n = x.width();
    if i == 0 || i > n {
        return Err(Error::LineOutOfRange { n, line: i });
    }
    let d = weight_entry(n, y.bits, z.bits, i).abs() - weight_entry(n, x.bits, z.bits, i).abs()
        + weight_entry(n, x.bits, y.bits, i).abs();
    Ok(d as u32)
}

#[inline]
pub(crate) fn far_bits(x: u32, y: u32) -> bool {
    let (mut x, mut y) = (x, y);
    while x != 0 {
        let a = x.trailing_zeros() as i32;
        let b = y.trailing_zeros() as i32;
        if (a - b).abs() > 1 {
            return true;
        }
        x &= x - 1;
        y &= y - 1;
    }
    false
}

/// Whether some pair of matched coordinates differs by more than one.
pub fn is_far(x: &IState, y: &IState) -> Result<bool> {
    check_pair(x, y)?;
    Ok(far_bits(x.bits, y.bits))
}

/// Lines with `v_i(x, y) != 0`, as a line mask.
#[inline]
pub(crate) fn crossed_mask(n: usize, x: u32, y: u32) -> u32 {
    (1..=n)
        .filter(|&i| weight_entry(n, x, y, i) != 0)
        .fold(0, |m, i| m | 1 << i)
}

/// Iterates the line masks of the generating intervals of a pair that is not far.
pub(crate) struct GeneratingMasks {
    not_used: u32,
    crossed: u32,
}

impl GeneratingMasks {
    pub(crate) fn new(n: usize, x: u32, y: u32) -> Self {
        Self {
            not_used: mask_from(n, 0) & !(x & y),
            crossed: crossed_mask(n, x, y),
        }
    }
}

impl Iterator for GeneratingMasks {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        while self.not_used != 0 {
            let lo = self.not_used.trailing_zeros();
            self.not_used &= self.not_used - 1;
            if self.not_used == 0 {
                return None;
            }
            let hi = self.not_used.trailing_zeros();
            // lines lo+1 ..= hi
            let lines = ((1u32 << (hi + 1)) - 1) & !((1u32 << (lo + 1)) - 1);
            if lines & self.crossed == 0 {
                return Some(lines);
            }
        }
        None
    }
}

/// A run of consecutive lines `start..=end`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Interval {
    pub start: usize,
    pub end: usize,
}

impl Interval {
    pub fn len(&self) -> usize {
        self.end + 1 - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end < self.start
    }

    pub fn contains(&self, i: usize) -> bool {
        self.start <= i && i <= self.end
    }

    pub fn lines(&self) -> LineSet {
        LineSet((self.start..=self.end).fold(0, |m, i| m | 1 << i))
    }

    pub(crate) fn from_mask(mask: u32) -> Self {
        Self {
            start: mask.trailing_zeros() as usize,
            end: 31 - mask.leading_zeros() as usize,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.start, self.end)
    }
}

/// An edge interval: its lines and its length (the two-faced interval has
/// length `n + 1` while covering the `n` lines).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct EdgeInterval {
    pub lines: Interval,
    pub length: usize,
}

/// How the lines `1..=n` split for a pair of states that is not far.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct IntervalClassification {
    pub crossed: LineSet,
    pub generating: Vec<Interval>,
    pub left_edge: Option<EdgeInterval>,
    pub right_edge: Option<EdgeInterval>,
    pub two_faced: Option<EdgeInterval>,
}

impl IntervalClassification {
    /// Every line lies in exactly one part: crossed, an interval or an edge.
    pub fn is_partition(&self, n: usize) -> bool {
        let mut seen = 0u32;
        let mut parts = vec![self.crossed.bits()];
        parts.extend(self.generating.iter().map(|g| g.lines().bits()));
        for e in [self.left_edge, self.right_edge, self.two_faced]
            .into_iter()
            .flatten()
        {
            parts.push(e.lines.lines().bits());
        }
        for p in parts {
            if seen & p != 0 {
                return false;
            }
            seen |= p;
        }
        seen == LineSet::all(n).bits()
    }
}

pub fn classify_intervals(x: &IState, y: &IState) -> Result<IntervalClassification> {
    check_pair(x, y)?;
    if far_bits(x.bits, y.bits) {
        return Err(Error::FarPair(x.to_string(), y.to_string()));
    }
    let n = x.width();
    let not_used = mask_from(n, 0) & !(x.bits & y.bits);
    let mut out = IntervalClassification {
        crossed: LineSet(crossed_mask(n, x.bits, y.bits)),
        generating: GeneratingMasks::new(n, x.bits, y.bits)
            .map(Interval::from_mask)
            .collect(),
        ..Default::default()
    };
    if not_used == 0 {
        out.two_faced = Some(EdgeInterval {
            lines: Interval { start: 1, end: n },
            length: n + 1,
        });
        return Ok(out);
    }
    let first = not_used.trailing_zeros() as usize;
    let last = 31 - not_used.leading_zeros() as usize;
    if first >= 1 {
        out.left_edge = Some(EdgeInterval {
            lines: Interval { start: 1, end: first },
            length: first,
        });
    }
    if last < n {
        out.right_edge = Some(EdgeInterval {
            lines: Interval {
                start: last + 1,
                end: n,
            },
            length: n - last,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(n: usize, m: &[usize]) -> IState {
        IState::new(n, m).unwrap()
    }

    #[test]
    fn enumeration_counts_and_order() {
        let states = enumerate_istates(2, 1).unwrap();
        assert_eq!(states, vec![st(2, &[0]), st(2, &[1]), st(2, &[2])]);
        let states = enumerate_istates(3, 2).unwrap();
        assert_eq!(states.len(), 6);
        assert!(states.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(states[0].to_string(), "{0,1}");
        assert_eq!(enumerate_istates(3, 0).unwrap(), vec![st(3, &[])]);
        assert!(enumerate_istates(3, 5).is_err());
    }

    #[test]
    fn weight_and_far() {
        let v = weight_vector(&st(2, &[0]), &st(2, &[2])).unwrap();
        assert_eq!(v.entries(), &[1, 1]);
        assert!(is_far(&st(2, &[0]), &st(2, &[2])).unwrap());
        assert!(!is_far(&st(2, &[0]), &st(2, &[1])).unwrap());
        assert!(weight_vector(&st(2, &[0]), &st(2, &[0, 1])).is_err());
    }

    #[test]
    fn defect_example() {
        let d = subadditivity_defect(&st(2, &[0]), &st(2, &[1]), &st(2, &[0]), 1).unwrap();
        assert_eq!(d, 2);
    }

    #[test]
    fn classification_of_long_example() {
        let x = st(14, &[0, 1, 3, 5, 7, 8, 9, 11, 14]);
        let y = st(14, &[1, 2, 3, 4, 6, 9, 10, 12, 13]);
        let c = classify_intervals(&x, &y).unwrap();
        let gens: Vec<_> = c.generating.iter().map(|g| (g.start, g.end)).collect();
        assert_eq!(gens, vec![(3, 4), (6, 6), (8, 8), (11, 11), (13, 13)]);
        assert!(c.left_edge.is_none() && c.right_edge.is_none());
        assert!(c.is_partition(14));
    }

    #[test]
    fn edge_intervals() {
        let x = st(1, &[0]);
        let c = classify_intervals(&x, &x).unwrap();
        assert_eq!(c.left_edge.unwrap().length, 1);
        assert!(c.generating.is_empty());

        let full = IState::interval(3, 0, 3).unwrap();
        let c = classify_intervals(&full, &full).unwrap();
        assert_eq!(c.two_faced.unwrap().length, 4);

        let x = st(3, &[2, 3]);
        let c = classify_intervals(&x, &x).unwrap();
        assert_eq!(c.right_edge.unwrap().lines, Interval { start: 2, end: 3 });
        assert_eq!(c.generating, vec![Interval { start: 1, end: 1 }]);
    }

    #[test]
    fn far_pair_is_rejected() {
        assert!(matches!(
            classify_intervals(&st(2, &[0]), &st(2, &[2])),
            Err(Error::FarPair(..))
        ));
    }

    #[test]
    fn reflection() {
        assert_eq!(st(4, &[0, 3]).reflect(), st(4, &[1, 4]));
        assert_eq!(LineSet::new(4, &[1, 2]).unwrap().reflect(4), LineSet::new(4, &[3, 4]).unwrap());
    }
}
