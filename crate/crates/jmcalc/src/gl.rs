//! The general linear side: products of essentially square-integrable
//! representations, the exchange rule, and containment queries.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::segments::{CuspSupport, HalfInt, Segment};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GlError {
    #[error("expected a segment delta, got {0}")]
    NotDelta(GLIrrep),
    #[error("{0} and {1} are not linked")]
    NotLinked(Segment, Segment),
    #[error("irreducibility is only certified for products of segment deltas")]
    NotCertified,
}

/// Irreducible representation of a general linear group appearing here.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum GLIrrep {
    Unit,
    Delta(Segment),
    /// Langlands quotient of a linked pair, larger e-centre first.
    Pair(Segment, Segment),
}

impl GLIrrep {
    pub fn delta(s: Segment) -> GLIrrep {
        if s.is_empty() {
            GLIrrep::Unit
        } else {
            GLIrrep::Delta(s)
        }
    }

    /// `L(δ1, δ2)` for a linked pair, in canonical order.
    pub fn pair(s1: Segment, s2: Segment) -> Result<GLIrrep, GlError> {
        if !s1.is_linked(&s2) {
            return Err(GlError::NotLinked(s1, s2));
        }
        let (e1, e2) = (s1.e_twice().unwrap(), s2.e_twice().unwrap());
        if e1 > e2 || (e1 == e2 && s1.low() <= s2.low()) {
            Ok(GLIrrep::Pair(s1, s2))
        } else {
            Ok(GLIrrep::Pair(s2, s1))
        }
    }

    pub fn support(&self) -> CuspSupport {
        match self {
            GLIrrep::Unit => CuspSupport::new(),
            GLIrrep::Delta(s) => s.support(),
            GLIrrep::Pair(s1, s2) => s1.support().union(&s2.support()),
        }
    }

    pub fn segments(&self) -> Vec<Segment> {
        match self {
            GLIrrep::Unit => vec![],
            GLIrrep::Delta(s) => vec![*s],
            GLIrrep::Pair(s1, s2) => vec![*s1, *s2],
        }
    }

    pub fn as_delta(&self) -> Option<Segment> {
        match self {
            GLIrrep::Delta(s) => Some(*s),
            _ => None,
        }
    }
}

impl fmt::Display for GLIrrep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GLIrrep::Unit => write!(f, "1"),
            GLIrrep::Delta(s) => write_delta(f, s),
            GLIrrep::Pair(s1, s2) => {
                write!(f, "Lp(")?;
                write_delta(f, s1)?;
                write!(f, ",")?;
                write_delta(f, s2)?;
                write!(f, ")")
            }
        }
    }
}

fn write_delta(f: &mut fmt::Formatter<'_>, s: &Segment) -> fmt::Result {
    match s.bounds() {
        None => write!(f, "1"),
        Some((x, y)) => write!(f, "d({x},{y})"),
    }
}

/// Commutative product; factors kept sorted with units dropped.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default, Serialize, Deserialize)]
pub struct GLProduct {
    factors: Vec<GLIrrep>,
}

impl GLProduct {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn new<I: IntoIterator<Item = GLIrrep>>(it: I) -> Self {
        let mut factors: Vec<GLIrrep> = it.into_iter().filter(|f| *f != GLIrrep::Unit).collect();
        factors.sort();
        GLProduct { factors }
    }

    pub fn from_segments<I: IntoIterator<Item = Segment>>(it: I) -> Self {
        Self::new(it.into_iter().map(GLIrrep::delta))
    }

    pub fn factors(&self) -> &[GLIrrep] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn times(&self, other: &GLProduct) -> GLProduct {
        Self::new(self.factors.iter().chain(other.factors.iter()).cloned())
    }

    pub fn times_irrep(&self, f: GLIrrep) -> GLProduct {
        Self::new(self.factors.iter().cloned().chain(std::iter::once(f)))
    }

    pub fn support(&self) -> CuspSupport {
        let mut s = CuspSupport::new();
        for f in &self.factors {
            s.extend(&f.support());
        }
        s
    }

    /// All factors as segments, if every factor is a delta.
    pub fn delta_segments(&self) -> Option<Vec<Segment>> {
        self.factors.iter().map(|f| f.as_delta()).collect()
    }

    /// Pairwise-unlinked product of deltas.
    pub fn is_irreducible(&self) -> Result<bool, GlError> {
        let segs = self.delta_segments().ok_or(GlError::NotCertified)?;
        for i in 0..segs.len() {
            for j in i + 1..segs.len() {
                if segs[i].is_linked(&segs[j]) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

impl fmt::Display for GLProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (k, x) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// Formal integer combination of products.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct GLSum {
    terms: BTreeMap<GLProduct, i64>,
}

impl GLSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, p: GLProduct, n: i64) {
        let e = self.terms.entry(p.clone()).or_insert(0);
        *e += n;
        if *e == 0 {
            self.terms.remove(&p);
        }
    }

    pub fn terms(&self) -> &BTreeMap<GLProduct, i64> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Exact, bounded-below, or undetermined multiplicity.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Multiplicity {
    Exact(u64),
    AtLeast(u64),
    Unknown,
}

impl Multiplicity {
    pub fn lower(self) -> u64 {
        match self {
            Multiplicity::Exact(n) | Multiplicity::AtLeast(n) => n,
            Multiplicity::Unknown => 0,
        }
    }

    pub fn exact(self) -> Option<u64> {
        match self {
            Multiplicity::Exact(n) => Some(n),
            _ => None,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Multiplicity::Exact(_))
    }

    fn from_lower(n: u64) -> Multiplicity {
        if n == 0 {
            Multiplicity::Unknown
        } else {
            Multiplicity::AtLeast(n)
        }
    }

    /// Tightens a lower-bound answer with a known upper bound.
    pub fn cap(self, upper: u64) -> Multiplicity {
        match self {
            Multiplicity::Exact(n) => Multiplicity::Exact(n.min(upper)),
            _ if upper == 0 => Multiplicity::Exact(0),
            m if m.lower() >= upper => Multiplicity::Exact(upper),
            m => m,
        }
    }
}

impl std::ops::Add for Multiplicity {
    type Output = Multiplicity;

    fn add(self, other: Multiplicity) -> Multiplicity {
        match (self, other) {
            (Multiplicity::Exact(a), Multiplicity::Exact(b)) => Multiplicity::Exact(a + b),
            (a, b) => Multiplicity::from_lower(a.lower() + b.lower()),
        }
    }
}

/// An exact zero annihilates.
impl std::ops::Mul for Multiplicity {
    type Output = Multiplicity;

    fn mul(self, other: Multiplicity) -> Multiplicity {
        match (self, other) {
            (Multiplicity::Exact(0), _) | (_, Multiplicity::Exact(0)) => Multiplicity::Exact(0),
            (Multiplicity::Exact(a), Multiplicity::Exact(b)) => Multiplicity::Exact(a * b),
            (a, b) => Multiplicity::from_lower(a.lower() * b.lower()),
        }
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Exact(n) => write!(f, "{n}"),
            Multiplicity::AtLeast(n) => write!(f, ">={n}"),
            Multiplicity::Unknown => write!(f, "?"),
        }
    }
}

/// Exchange rule: δ1×δ2 = δ(∪)×δ(∩) + L(δ1,δ2) when linked, else irreducible.
pub fn pair_decompose(d1: &GLIrrep, d2: &GLIrrep) -> Result<GLSum, GlError> {
    let as_seg = |d: &GLIrrep| match d {
        GLIrrep::Unit => Ok(Segment::EMPTY),
        GLIrrep::Delta(s) => Ok(*s),
        other => Err(GlError::NotDelta(other.clone())),
    };
    let (s1, s2) = (as_seg(d1)?, as_seg(d2)?);
    let mut out = GLSum::new();
    if s1.is_linked(&s2) {
        let u = s1.union(&s2).expect("linked segments have a union");
        out.add_term(GLProduct::from_segments([u, s1.intersection(&s2)]), 1);
        out.add_term(GLProduct::new([GLIrrep::pair(s1, s2)?]), 1);
    } else {
        out.add_term(GLProduct::from_segments([s1, s2]), 1);
    }
    Ok(out)
}

pub fn product_support(p: &GLProduct) -> CuspSupport {
    p.support()
}

pub fn is_irreducible_product(p: &GLProduct) -> Result<bool, GlError> {
    p.is_irreducible()
}

/// Splits `(δ([z+1,high]), δ([low,z]))` for `z = low-1 ..= high`.
pub fn comult_delta(d: &Segment) -> Vec<(Segment, Segment)> {
    match d.bounds() {
        None => vec![(Segment::EMPTY, Segment::EMPTY)],
        Some((x, y)) => x.plus(-1).range_to(y).map(|z| (Segment::span(z.plus(1), y), Segment::span(x, z))).collect(),
    }
}

/// Langlands quotient of `δ(s1) × δ(s2)` as a product of irreducibles; for
/// unlinked pairs this is the whole (irreducible) product.
pub fn langlands_of_pair(s1: Segment, s2: Segment) -> GLProduct {
    if s1.is_linked(&s2) {
        GLProduct::new([GLIrrep::pair(s1, s2).expect("checked linked")])
    } else {
        GLProduct::from_segments([s1, s2])
    }
}

// ---------------------------------------------------------------------------
// Minimal Jacquet words.
//
// The minimal Jacquet module of δ([x,y]) is the single word y, y-1, ..., x;
// that of a product is the shuffle of its factors' words, and that of L(δ1,δ2)
// is r(δ1×δ2) - r(δ(∪)×δ(∩)).

/// Multiplicity of `word` in the minimal Jacquet module of the product.
pub fn word_count(word: &[HalfInt], factors: &[GLIrrep]) -> i64 {
    let factors: Vec<&GLIrrep> = factors.iter().filter(|f| **f != GLIrrep::Unit).collect();
    count_rec(word, &factors)
}

fn count_rec(word: &[HalfInt], factors: &[&GLIrrep]) -> i64 {
    let Some((first, rest)) = factors.split_first() else {
        return word.is_empty() as i64;
    };
    if rest.is_empty() {
        return irrep_word_count(word, first);
    }
    let need = first.support();
    let mut total = 0;
    for picked in position_choices(word, &need) {
        let mut mask = vec![false; word.len()];
        for &p in &picked {
            mask[p] = true;
        }
        let sub: Vec<HalfInt> = picked.iter().map(|&p| word[p]).collect();
        let here = irrep_word_count(&sub, first);
        if here == 0 {
            continue;
        }
        let remaining: Vec<HalfInt> = word.iter().zip(&mask).filter(|(_, &m)| !m).map(|(&v, _)| v).collect();
        total += here * count_rec(&remaining, rest);
    }
    total
}

fn irrep_word_count(word: &[HalfInt], f: &GLIrrep) -> i64 {
    match f {
        GLIrrep::Unit => word.is_empty() as i64,
        GLIrrep::Delta(s) => (word == s.decreasing_word().as_slice()) as i64,
        GLIrrep::Pair(s1, s2) => {
            let u = s1.union(s2).expect("pair is linked");
            let i = s1.intersection(s2);
            word_count(word, &[GLIrrep::Delta(*s1), GLIrrep::Delta(*s2)])
                - word_count(word, &[GLIrrep::delta(u), GLIrrep::delta(i)])
        }
    }
}

/// Every sorted set of positions of `word` whose letters form `need`.
fn position_choices(word: &[HalfInt], need: &CuspSupport) -> Vec<Vec<usize>> {
    let mut by_letter: BTreeMap<HalfInt, Vec<usize>> = BTreeMap::new();
    for (p, &v) in word.iter().enumerate() {
        by_letter.entry(v).or_default().push(p);
    }
    let mut acc: Vec<Vec<usize>> = vec![vec![]];
    for (v, n) in need.iter() {
        let positions = by_letter.get(&v).cloned().unwrap_or_default();
        if positions.len() < n as usize {
            return vec![];
        }
        let combos = combinations(&positions, n as usize);
        let mut next = Vec::with_capacity(acc.len() * combos.len());
        for a in &acc {
            for c in &combos {
                let mut v = a.clone();
                v.extend_from_slice(c);
                next.push(v);
            }
        }
        acc = next;
    }
    for a in &mut acc {
        a.sort_unstable();
    }
    acc
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

/// All minimal Jacquet words of an irreducible product, with multiplicity.
pub fn minimal_words(p: &GLProduct) -> BTreeMap<Vec<HalfInt>, i64> {
    let mut out = BTreeMap::new();
    let letters: Vec<HalfInt> = p.support().iter().flat_map(|(v, n)| std::iter::repeat_n(v, n as usize)).collect();
    for w in distinct_permutations(&letters) {
        let n = word_count(&w, p.factors());
        if n != 0 {
            out.insert(w, n);
        }
    }
    out
}

fn distinct_permutations(letters: &[HalfInt]) -> Vec<Vec<HalfInt>> {
    let mut counts: BTreeMap<HalfInt, usize> = BTreeMap::new();
    for &v in letters {
        *counts.entry(v).or_insert(0) += 1;
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(letters.len());
    perm_rec(&mut counts, letters.len(), &mut cur, &mut out);
    out
}

fn perm_rec(counts: &mut BTreeMap<HalfInt, usize>, len: usize, cur: &mut Vec<HalfInt>, out: &mut Vec<Vec<HalfInt>>) {
    if cur.len() == len {
        out.push(cur.clone());
        return;
    }
    let keys: Vec<HalfInt> = counts.iter().filter(|(_, &n)| n > 0).map(|(&k, _)| k).collect();
    for k in keys {
        *counts.get_mut(&k).unwrap() -= 1;
        cur.push(k);
        perm_rec(counts, len, cur, out);
        cur.pop();
        *counts.get_mut(&k).unwrap() += 1;
    }
}

/// Words that certainly occur in the minimal Jacquet module of the
/// irreducible `target`: concatenations of factor words in some order.
fn candidate_words(target: &GLProduct) -> Vec<Vec<HalfInt>> {
    let factors = target.factors();
    let mut seen = BTreeSet::new();
    let mut order: Vec<usize> = (0..factors.len()).collect();
    let mut perms = Vec::new();
    permute_indices(&mut order, 0, &mut perms);
    for perm in perms {
        let mut partial: Vec<Vec<HalfInt>> = vec![vec![]];
        for &k in &perm {
            let options: Vec<Vec<HalfInt>> = match &factors[k] {
                GLIrrep::Unit => vec![vec![]],
                GLIrrep::Delta(s) => vec![s.decreasing_word()],
                GLIrrep::Pair(s1, s2) => {
                    let (w1, w2) = (s1.decreasing_word(), s2.decreasing_word());
                    vec![[w1.clone(), w2.clone()].concat(), [w2, w1].concat()]
                }
            };
            partial =
                partial.iter().flat_map(|p| options.iter().map(move |o| [p.clone(), o.clone()].concat())).collect();
        }
        seen.extend(partial);
    }
    seen.into_iter().filter(|w| word_count(w, factors) > 0).collect()
}

fn permute_indices(v: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == v.len() {
        out.push(v.clone());
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permute_indices(v, k + 1, out);
        v.swap(k, i);
    }
}

/// Upper bound from minimal Jacquet words: the target contributes its words,
/// so its multiplicity cannot exceed any ratio of word counts.
fn word_upper_bound(target: &GLProduct, ambient: &GLProduct) -> Option<u64> {
    candidate_words(target)
        .iter()
        .map(|w| {
            let t = word_count(w, target.factors());
            let a = word_count(w, ambient.factors()).max(0);
            (a / t) as u64
        })
        .min()
}

/// Multiplicity of the irreducible class `target` among the composition
/// factors of `ambient`.
pub fn contains_gl(target: &GLProduct, ambient: &GLProduct) -> Multiplicity {
    contains_rec(target, ambient, 0)
}

const CONTAINS_DEPTH: usize = 24;

fn contains_rec(target: &GLProduct, ambient: &GLProduct, depth: usize) -> Multiplicity {
    let supp = target.support();
    if supp != ambient.support() {
        return Multiplicity::Exact(0);
    }
    if target.is_irreducible() == Ok(false) {
        return Multiplicity::Unknown;
    }
    if supp.iter().all(|(_, n)| n == 1) {
        // Every word occurs once in total, so it pins down one factor.
        return match word_upper_bound(target, ambient) {
            Some(n) => Multiplicity::Exact(n),
            None => Multiplicity::Unknown,
        };
    }
    let (target, ambient) = cancel_common(target, ambient);
    if target == ambient {
        return Multiplicity::Exact(1);
    }
    let upper = word_upper_bound(&target, &ambient);
    if upper == Some(0) {
        return Multiplicity::Exact(0);
    }
    if ambient.is_irreducible() == Ok(true) {
        return Multiplicity::Exact(0);
    }
    let lower = if depth >= CONTAINS_DEPTH { Multiplicity::Unknown } else { expand_lower(&target, &ambient, depth) };
    match upper {
        Some(u) => lower.cap(u),
        None => lower,
    }
}

/// Removes delta factors shared by target and ambient that are unlinked with
/// everything else in the ambient.
fn cancel_common(target: &GLProduct, ambient: &GLProduct) -> (GLProduct, GLProduct) {
    let mut t: Vec<GLIrrep> = target.factors().to_vec();
    let mut a: Vec<GLIrrep> = ambient.factors().to_vec();
    loop {
        let mut hit = None;
        'outer: for (ti, f) in t.iter().enumerate() {
            let Some(s) = f.as_delta() else { continue };
            for (ai, g) in a.iter().enumerate() {
                if g != f {
                    continue;
                }
                let free = a
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != ai)
                    .flat_map(|(_, h)| h.segments())
                    .all(|o| !s.is_linked(&o));
                if free {
                    hit = Some((ti, ai));
                    break 'outer;
                }
            }
        }
        match hit {
            Some((ti, ai)) => {
                t.remove(ti);
                a.remove(ai);
            }
            None => return (GLProduct::new(t), GLProduct::new(a)),
        }
    }
}

/// Lower bound by expanding the first linked pair of deltas.
fn expand_lower(target: &GLProduct, ambient: &GLProduct, depth: usize) -> Multiplicity {
    let f = ambient.factors();
    for i in 0..f.len() {
        for j in i + 1..f.len() {
            let (Some(s1), Some(s2)) = (f[i].as_delta(), f[j].as_delta()) else { continue };
            if !s1.is_linked(&s2) {
                continue;
            }
            let rest: Vec<GLIrrep> =
                f.iter().enumerate().filter(|(k, _)| *k != i && *k != j).map(|(_, x)| x.clone()).collect();
            let split = pair_decompose(&f[i], &f[j]).expect("deltas");
            let mut total = Multiplicity::Exact(0);
            for (p, n) in split.terms() {
                let amb = GLProduct::new(rest.iter().cloned().chain(p.factors().iter().cloned()));
                let m = contains_rec(target, &amb, depth + 1);
                for _ in 0..*n {
                    total = total + m;
                }
            }
            return total;
        }
    }
    Multiplicity::Unknown
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::segments::make_segment;

    fn s(x: i64, y: i64) -> Segment {
        make_segment(HalfInt::from_twice(x), HalfInt::from_twice(y)).unwrap()
    }
    fn d(x: i64, y: i64) -> GLIrrep {
        GLIrrep::delta(s(x, y))
    }

    #[test]
    fn exchange_rule_examples() {
        let r = pair_decompose(&d(-1, -1), &d(1, 1)).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.terms().contains_key(&GLProduct::from_segments([s(-1, 1)])));
        assert!(r.terms().contains_key(&GLProduct::new([GLIrrep::pair(s(-1, -1), s(1, 1)).unwrap()])));

        assert_eq!(pair_decompose(&d(1, 3), &d(-1, 5)).unwrap().len(), 1);

        let r = pair_decompose(&d(1, 3), &d(5, 5)).unwrap();
        assert!(r.terms().contains_key(&GLProduct::from_segments([s(1, 5)])));
        assert_eq!(r.len(), 2);
    }

    #[test]
    fn pair_canonical_order() {
        let p = GLIrrep::pair(s(-1, -1), s(1, 1)).unwrap();
        assert_eq!(p, GLIrrep::Pair(s(1, 1), s(-1, -1)));
        assert_eq!(p, GLIrrep::pair(s(1, 1), s(-1, -1)).unwrap());
        assert!(GLIrrep::pair(s(1, 3), s(7, 9)).is_err());
    }

    #[test]
    fn supports_and_irreducibility() {
        let p = GLProduct::new([d(1, 3), d(-1, 5)]);
        assert_eq!(p.support().len(), 6);
        assert_eq!(p.support().count(HalfInt::from_twice(1)), 2);
        assert_eq!(GLProduct::new([GLIrrep::pair(s(-1, -1), s(1, 1)).unwrap()]).support().len(), 2);
        assert!(GLProduct::one().support().is_empty());
        assert_eq!(p.is_irreducible(), Ok(true));
        assert_eq!(GLProduct::new([d(-1, -1), d(1, 1)]).is_irreducible(), Ok(false));
        assert_eq!(GLProduct::new([d(1, 1), d(7, 7)]).is_irreducible(), Ok(true));
        let lp = GLProduct::new([GLIrrep::pair(s(-1, -1), s(1, 1)).unwrap()]);
        assert_eq!(lp.is_irreducible(), Err(GlError::NotCertified));
    }

    #[test]
    fn containment_examples() {
        let t = GLProduct::new([d(-1, 1)]);
        let a = GLProduct::new([d(1, 1), d(-1, -1)]);
        assert_eq!(contains_gl(&t, &a), Multiplicity::Exact(1));

        let t = GLProduct::new([d(1, 3), d(7, 7)]);
        assert_eq!(contains_gl(&t, &t), Multiplicity::Exact(1));

        let t = GLProduct::new([d(-1, 5), d(1, 3)]);
        let a = GLProduct::new([d(-1, 3), d(1, 5)]);
        assert_eq!(contains_gl(&t, &a), Multiplicity::Exact(1));
        let lp = GLProduct::new([GLIrrep::pair(s(-1, 3), s(1, 5)).unwrap()]);
        assert_eq!(contains_gl(&lp, &a), Multiplicity::Exact(1));

        let t = GLProduct::new([GLIrrep::pair(s(-1, -1), s(1, 1)).unwrap()]);
        assert_eq!(contains_gl(&t, &GLProduct::new([d(1, 1), d(-1, -1)])), Multiplicity::Exact(1));
        assert_eq!(contains_gl(&t, &GLProduct::new([d(-1, 1)])), Multiplicity::Exact(0));
    }

    #[test]
    fn repeated_support() {
        let half = d(1, 1);
        let a = GLProduct::new([half.clone(), half.clone()]);
        assert_eq!(contains_gl(&a, &a), Multiplicity::Exact(1));
        let a = GLProduct::new([d(1, 3), d(1, 3), d(-1, -1)]);
        let t = GLProduct::new([d(-1, 3), d(1, 3)]);
        assert_eq!(contains_gl(&t, &a), Multiplicity::Exact(1));
    }

    #[test]
    fn comult_splits() {
        let c = comult_delta(&s(1, 3));
        assert_eq!(c, vec![(s(1, 3), Segment::EMPTY), (s(3, 3), s(1, 1)), (Segment::EMPTY, s(1, 3))]);
        assert_eq!(comult_delta(&s(5, 5)).len(), 2);
        assert_eq!(comult_delta(&Segment::EMPTY), vec![(Segment::EMPTY, Segment::EMPTY)]);
    }

    #[test]
    fn pair_words() {
        let lp = GLProduct::new([GLIrrep::pair(s(-1, -1), s(1, 1)).unwrap()]);
        let w = minimal_words(&lp);
        assert_eq!(w.len(), 1);
        assert!(w.contains_key(&vec![HalfInt::from_twice(-1), HalfInt::from_twice(1)]));
    }
}
