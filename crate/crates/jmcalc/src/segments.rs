//! Half-integer exponents, segments and cuspidal supports.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SegmentError {
    #[error("exponent {0} is not in Z+1/2")]
    NotHalfIntegral(HalfInt),
    #[error("the empty segment has no centre")]
    Empty,
    #[error("union of {0} and {1} is not a segment")]
    UnionNotSegment(Segment, Segment),
    #[error("segments carry different cuspidal labels")]
    LabelMismatch,
    #[error("cannot parse half-integer `{0}`")]
    Parse(String),
}

/// Exact element of (1/2)Z, stored doubled.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub const HALF: HalfInt = HalfInt { twice: 1 };
    pub const NEG_HALF: HalfInt = HalfInt { twice: -1 };
    pub const ZERO: HalfInt = HalfInt { twice: 0 };
    pub const ONE: HalfInt = HalfInt { twice: 2 };

    pub const fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }

    pub const fn from_int(n: i64) -> Self {
        HalfInt { twice: 2 * n }
    }

    pub const fn twice(self) -> i64 {
        self.twice
    }

    /// True for elements of Z + 1/2.
    pub const fn is_half_odd(self) -> bool {
        self.twice % 2 != 0
    }

    pub fn to_ratio(self) -> Ratio<i64> {
        Ratio::new(self.twice, 2)
    }

    /// Shift by an integer.
    pub const fn plus(self, n: i64) -> Self {
        HalfInt { twice: self.twice + 2 * n }
    }

    pub fn abs(self) -> Self {
        HalfInt { twice: self.twice.abs() }
    }

    /// Integer steps from `self` up to `other` (both in the same coset).
    pub fn steps_to(self, other: HalfInt) -> i64 {
        debug_assert_eq!((other.twice - self.twice).rem_euclid(2), 0);
        (other.twice - self.twice) / 2
    }

    /// Inclusive range `self, self+1, ..., hi`.
    pub fn range_to(self, hi: HalfInt) -> impl Iterator<Item = HalfInt> {
        let n = if hi.twice >= self.twice { (hi.twice - self.twice) / 2 + 1 } else { 0 };
        (0..n).map(move |k| self.plus(k))
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice + rhs.twice }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice - rhs.twice }
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt { twice: -self.twice }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// Accepts `p/2`, integers, and decimals ending in `.5` or `.0`.
impl FromStr for HalfInt {
    type Err = SegmentError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || SegmentError::Parse(s.to_string());
        if let Some((num, den)) = t.split_once('/') {
            let num: i64 = num.trim().parse().map_err(|_| bad())?;
            return match den.trim() {
                "2" => Ok(HalfInt::from_twice(num)),
                "1" => Ok(HalfInt::from_int(num)),
                _ => Err(bad()),
            };
        }
        if let Some((int, frac)) = t.split_once('.') {
            let neg = int.starts_with('-');
            let int_part: i64 = match int {
                "" | "+" => 0,
                "-" => 0,
                _ => int.parse().map_err(|_| bad())?,
            };
            let half = match frac.trim_end_matches('0') {
                "" => 0,
                "5" => 1,
                _ => return Err(bad()),
            };
            let sign = if neg { -1 } else { 1 };
            return Ok(HalfInt::from_twice(2 * int_part + sign * half));
        }
        t.parse::<i64>().map(HalfInt::from_int).map_err(|_| bad())
    }
}

/// Label of the self-dual cuspidal representation a segment is built on.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default, Serialize, Deserialize)]
pub struct CuspLabel(pub u32);

/// `[x, y]` over a cuspidal label, or the empty segment.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Segment {
    bounds: Option<(HalfInt, HalfInt)>,
    rho: CuspLabel,
}

/// Builds `[x, y]`; anything with `y < x` is the empty segment.
pub fn make_segment(x: HalfInt, y: HalfInt) -> Result<Segment, SegmentError> {
    for v in [x, y] {
        if !v.is_half_odd() {
            return Err(SegmentError::NotHalfIntegral(v));
        }
    }
    Ok(Segment::span(x, y))
}

impl Segment {
    pub const EMPTY: Segment = Segment { bounds: None, rho: CuspLabel(0) };

    /// Unchecked constructor for internal index arithmetic, where parity is
    /// guaranteed by construction.
    pub(crate) fn span(x: HalfInt, y: HalfInt) -> Segment {
        if y < x {
            Segment::EMPTY
        } else {
            Segment { bounds: Some((x, y)), rho: CuspLabel(0) }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.bounds.is_none()
    }

    pub fn low(&self) -> Option<HalfInt> {
        self.bounds.map(|b| b.0)
    }

    pub fn high(&self) -> Option<HalfInt> {
        self.bounds.map(|b| b.1)
    }

    pub fn bounds(&self) -> Option<(HalfInt, HalfInt)> {
        self.bounds
    }

    pub fn rho(&self) -> CuspLabel {
        self.rho
    }

    pub fn cardinality(&self) -> usize {
        match self.bounds {
            None => 0,
            Some((x, y)) => (x.steps_to(y) + 1) as usize,
        }
    }

    pub fn e_center(&self) -> Result<Ratio<i64>, SegmentError> {
        let (x, y) = self.bounds.ok_or(SegmentError::Empty)?;
        Ok(Ratio::new(x.twice() + y.twice(), 4))
    }

    /// Twice the e-centre, always an integer.
    pub(crate) fn e_twice(&self) -> Option<i64> {
        self.bounds.map(|(x, y)| x.twice() + y.twice())
    }

    pub fn contragredient(&self) -> Segment {
        match self.bounds {
            None => *self,
            Some((x, y)) => Segment { bounds: Some((-y, -x)), rho: self.rho },
        }
    }

    pub fn support(&self) -> CuspSupport {
        let mut s = CuspSupport::new();
        if let Some((x, y)) = self.bounds {
            for v in x.range_to(y) {
                s.insert(v, 1);
            }
        }
        s
    }

    /// Exponents from high to low, the word of the minimal Jacquet module of
    /// the corresponding essentially square-integrable representation.
    pub fn decreasing_word(&self) -> Vec<HalfInt> {
        match self.bounds {
            None => Vec::new(),
            Some((x, y)) => {
                let mut w: Vec<HalfInt> = x.range_to(y).collect();
                w.reverse();
                w
            }
        }
    }

    pub fn contains(&self, other: &Segment) -> bool {
        match (self.bounds, other.bounds) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some((a, b)), Some((c, d))) => a <= c && d <= b,
        }
    }

    pub fn contains_point(&self, v: HalfInt) -> bool {
        matches!(self.bounds, Some((x, y)) if x <= v && v <= y)
    }

    /// True when the union is a segment (overlap or adjacency).
    fn union_is_segment(&self, other: &Segment) -> bool {
        match (self.bounds, other.bounds) {
            (Some((a, b)), Some((c, d))) => c <= b.plus(1) && a <= d.plus(1),
            _ => true,
        }
    }

    pub fn is_linked(&self, other: &Segment) -> bool {
        if self.is_empty() || other.is_empty() || self.rho != other.rho {
            return false;
        }
        self.union_is_segment(other) && !self.contains(other) && !other.contains(self)
    }

    pub fn union(&self, other: &Segment) -> Result<Segment, SegmentError> {
        if self.rho != other.rho && !self.is_empty() && !other.is_empty() {
            return Err(SegmentError::LabelMismatch);
        }
        match (self.bounds, other.bounds) {
            (None, _) => Ok(*other),
            (_, None) => Ok(*self),
            (Some((a, b)), Some((c, d))) => {
                if !self.union_is_segment(other) {
                    return Err(SegmentError::UnionNotSegment(*self, *other));
                }
                Ok(Segment { bounds: Some((a.min(c), b.max(d))), rho: self.rho })
            }
        }
    }

    pub fn intersection(&self, other: &Segment) -> Segment {
        match (self.bounds, other.bounds) {
            (Some((a, b)), Some((c, d))) => Segment::span(a.max(c), b.min(d)),
            _ => Segment::EMPTY,
        }
    }
}

pub fn is_linked(d1: &Segment, d2: &Segment) -> bool {
    d1.is_linked(d2)
}

pub fn seg_union(d1: &Segment, d2: &Segment) -> Result<Segment, SegmentError> {
    d1.union(d2)
}

pub fn seg_intersection(d1: &Segment, d2: &Segment) -> Segment {
    d1.intersection(d2)
}

pub fn e_center(d: &Segment) -> Result<Ratio<i64>, SegmentError> {
    d.e_center()
}

pub fn contragredient_seg(d: &Segment) -> Segment {
    d.contragredient()
}

pub fn support_of_segment(d: &Segment) -> CuspSupport {
    d.support()
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.bounds {
            None => write!(f, "[]"),
            Some((x, y)) => write!(f, "[{x},{y}]"),
        }
    }
}

/// Multiset of signed exponents.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default, Serialize, Deserialize)]
pub struct CuspSupport {
    exps: BTreeMap<HalfInt, u32>,
}

impl CuspSupport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_exps<I: IntoIterator<Item = HalfInt>>(it: I) -> Self {
        let mut s = Self::new();
        for v in it {
            s.insert(v, 1);
        }
        s
    }

    pub fn insert(&mut self, v: HalfInt, n: u32) {
        if n > 0 {
            *self.exps.entry(v).or_insert(0) += n;
        }
    }

    pub fn count(&self, v: HalfInt) -> u32 {
        self.exps.get(&v).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.exps.values().map(|&n| n as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn union(&self, other: &CuspSupport) -> CuspSupport {
        let mut s = self.clone();
        s.extend(other);
        s
    }

    pub fn extend(&mut self, other: &CuspSupport) {
        for (&v, &n) in &other.exps {
            self.insert(v, n);
        }
    }

    /// Sub-multiset test.
    pub fn is_within(&self, other: &CuspSupport) -> bool {
        self.exps.iter().all(|(v, &n)| other.count(*v) >= n)
    }

    /// Folds `x` and `-x` together; the classical-group side only sees
    /// exponents up to sign.
    pub fn folded(&self) -> CuspSupport {
        let mut s = CuspSupport::new();
        for (&v, &n) in &self.exps {
            s.insert(v.abs(), n);
        }
        s
    }

    pub fn iter(&self) -> impl Iterator<Item = (HalfInt, u32)> + '_ {
        self.exps.iter().map(|(&v, &n)| (v, n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(t: i64) -> HalfInt {
        HalfInt::from_twice(t)
    }

    #[test]
    fn parse_forms() {
        assert_eq!("5/2".parse::<HalfInt>().unwrap(), h(5));
        assert_eq!("-3/2".parse::<HalfInt>().unwrap(), h(-3));
        assert_eq!("2.5".parse::<HalfInt>().unwrap(), h(5));
        assert_eq!(".5".parse::<HalfInt>().unwrap(), h(1));
        assert_eq!("-0.5".parse::<HalfInt>().unwrap(), h(-1));
        assert_eq!("3".parse::<HalfInt>().unwrap(), h(6));
        assert!("1/3".parse::<HalfInt>().is_err());
        assert!("0.25".parse::<HalfInt>().is_err());
        assert_eq!(h(-3).to_string(), "-3/2");
        assert_eq!(h(4).to_string(), "2");
    }

    #[test]
    fn json_uses_doubled_integer() {
        assert_eq!(serde_json::to_string(&h(5)).unwrap(), r#"{"twice":5}"#);
    }

    #[test]
    fn make_segment_cases() {
        assert_eq!(make_segment(h(1), h(5)).unwrap().cardinality(), 3);
        assert!(make_segment(h(1), h(-1)).unwrap().is_empty());
        assert_eq!(make_segment(h(-3), h(5)).unwrap().cardinality(), 5);
        assert!(make_segment(h(2), h(5)).is_err());
    }

    #[test]
    fn linking() {
        let s = |x, y| make_segment(h(x), h(y)).unwrap();
        assert!(!s(-1, 5).is_linked(&s(1, 3)));
        assert!(s(1, 3).is_linked(&s(5, 7)));
        assert!(!s(1, 3).is_linked(&s(7, 9)));
        assert!(!s(1, 3).is_linked(&Segment::EMPTY));
    }

    #[test]
    fn union_and_intersection() {
        let s = |x, y| make_segment(h(x), h(y)).unwrap();
        assert_eq!(s(-1, 3).union(&s(1, 5)).unwrap(), s(-1, 5));
        assert_eq!(s(-1, 3).intersection(&s(1, 5)), s(1, 3));
        assert_eq!(s(-1, -1).union(&s(1, 1)).unwrap(), s(-1, 1));
        assert!(s(-1, -1).intersection(&s(1, 1)).is_empty());
        assert!(s(1, 3).union(&s(7, 9)).is_err());
    }

    #[test]
    fn centres_and_duals() {
        let s = |x, y| make_segment(h(x), h(y)).unwrap();
        assert_eq!(s(-1, 5).e_center().unwrap(), Ratio::from_integer(1));
        assert_eq!(s(1, 3).e_center().unwrap(), Ratio::from_integer(1));
        assert_eq!(s(-3, 5).e_center().unwrap(), Ratio::new(1, 2));
        assert!(Segment::EMPTY.e_center().is_err());
        assert_eq!(s(-1, 5).contragredient(), s(-5, 1));
        assert_eq!(s(1, 3).contragredient(), s(-3, -1));
        assert!(Segment::EMPTY.contragredient().is_empty());
    }

    #[test]
    fn supports() {
        let s = |x, y| make_segment(h(x), h(y)).unwrap();
        assert_eq!(s(-1, 5).support(), CuspSupport::from_exps([h(-1), h(1), h(3), h(5)]));
        assert_eq!(s(1, 3).support().len(), 2);
        assert!(Segment::EMPTY.support().is_empty());
    }
}
