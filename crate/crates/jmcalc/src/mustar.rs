//! Jacquet modules: the structure formula for induced representations, closed
//! forms for atoms, multiplicity queries and a brute-force word oracle.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::atoms::{classify_seg_induced, AtomError, GAtom};
use crate::gl::{contains_gl, langlands_of_pair, minimal_words, GLProduct, Multiplicity};
use crate::segments::{CuspSupport, HalfInt, Segment};

pub const DEFAULT_WORD_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MuStarError {
    #[error("no closed form for the Jacquet module of {0}")]
    Unsupported(GAtom),
    #[error("expression has {len} exponents, above the word cap {cap}")]
    WordCap { len: usize, cap: usize },
    #[error(transparent)]
    Atom(#[from] AtomError),
}

/// Word cap for the oracle, overridable through `JMCALC_WORD_CAP`.
pub fn word_cap_from_env() -> usize {
    std::env::var("JMCALC_WORD_CAP").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_WORD_CAP)
}

fn seg(x: HalfInt, y: HalfInt) -> Segment {
    Segment::span(x, y)
}

// ---------------------------------------------------------------------------
// Induced expressions.

/// `δ(Δ1)×…×δ(Δk)⋊π` up to semisimplification: segments with negative
/// centre are replaced by their contragredients and the list is sorted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GExpr {
    segs: Vec<Segment>,
    atom: GAtom,
}

fn canonical_seg(s: Segment) -> Segment {
    match s.e_twice() {
        Some(e) if e < 0 => s.contragredient(),
        _ => s,
    }
}

impl GExpr {
    pub fn atom(atom: GAtom) -> GExpr {
        GExpr { segs: Vec::new(), atom }
    }

    pub fn induced(segs: Vec<Segment>, atom: GAtom) -> GExpr {
        GExpr::atom(atom).induce(segs)
    }

    pub fn induce(&self, segs: Vec<Segment>) -> GExpr {
        let mut all = self.segs.clone();
        all.extend(segs.into_iter().filter(|s| !s.is_empty()).map(canonical_seg));
        all.sort();
        GExpr { segs: all, atom: self.atom.clone() }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segs
    }

    pub fn base(&self) -> &GAtom {
        &self.atom
    }

    pub fn as_atom(&self) -> Option<&GAtom> {
        self.segs.is_empty().then_some(&self.atom)
    }

    /// Cuspidal support with every exponent replaced by its absolute value.
    pub fn folded_support(&self) -> CuspSupport {
        let mut s = self.atom.cusp_support();
        for d in &self.segs {
            s.extend(&d.support());
        }
        s.folded()
    }

    pub fn exponent_count(&self) -> usize {
        self.folded_support().iter().map(|(_, n)| n as usize).sum()
    }
}

impl fmt::Display for GExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.segs.is_empty() {
            return write!(f, "{}", self.atom);
        }
        write!(f, "ind({}, {})", GLProduct::from_segments(self.segs.iter().copied()), self.atom)
    }
}

impl Serialize for GExpr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        crate::parse::parse_expr(&s).map_err(serde::de::Error::custom)
    }
}

/// A term `gl ⊗ g` of a Jacquet module.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct GGTerm {
    pub gl: GLProduct,
    pub g: GExpr,
}

impl GGTerm {
    pub fn new(gl: GLProduct, g: GExpr) -> GGTerm {
        GGTerm { gl, g }
    }

    pub fn of_atom(gl: GLProduct, g: GAtom) -> GGTerm {
        GGTerm { gl, g: GExpr::atom(g) }
    }
}

impl fmt::Display for GGTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⊗ {}", self.gl, self.g)
    }
}

/// Formal sum of `gl ⊗ g` terms. `partial` marks a lower bound.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct MuStarSum {
    terms: BTreeMap<GGTerm, i64>,
    partial: bool,
}

impl MuStarSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, gl: GLProduct, g: GExpr, n: i64) {
        self.add_term(GGTerm { gl, g }, n);
    }

    pub fn add_term(&mut self, t: GGTerm, n: i64) {
        if n == 0 {
            return;
        }
        match self.terms.entry(t) {
            Entry::Vacant(v) => {
                v.insert(n);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += n;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    pub fn add_sum(&mut self, other: &MuStarSum, scale: i64) {
        for (t, n) in &other.terms {
            self.add_term(t.clone(), n * scale);
        }
        self.partial |= other.partial;
    }

    pub fn terms(&self) -> &BTreeMap<GGTerm, i64> {
        &self.terms
    }

    pub fn coeff(&self, t: &GGTerm) -> i64 {
        self.terms.get(t).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_partial(&self) -> bool {
        self.partial
    }

    pub fn mark_partial(&mut self) {
        self.partial = true;
    }

    /// Total of all coefficients.
    pub fn total(&self) -> i64 {
        self.terms.values().sum()
    }
}

impl fmt::Display for MuStarSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (t, n) in &self.terms {
            writeln!(f, "{n} {t}")?;
        }
        if self.partial {
            writeln!(f, "+ ... (lower bound)")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Closed forms.

/// Source of Jacquet modules of atoms.
pub trait AtomMuStar {
    fn atom_mu_star(&self, atom: &GAtom) -> Result<MuStarSum, MuStarError>;
}

/// The closed-form tables only.
#[derive(Clone, Copy, Debug, Default)]
pub struct ClosedForm;

impl AtomMuStar for ClosedForm {
    fn atom_mu_star(&self, atom: &GAtom) -> Result<MuStarSum, MuStarError> {
        mu_star_atom(atom)
    }
}

fn strict_or_cusp(j: HalfInt) -> GAtom {
    if j < HalfInt::HALF {
        GAtom::Cuspidal
    } else {
        GAtom::StrictDS { a: j }
    }
}

fn halves(from: HalfInt, to: HalfInt) -> impl Iterator<Item = HalfInt> {
    from.range_to(to)
}

/// `μ*(σ_c) = Σ_{j=-1/2}^{c} δ([j+1,c]) ⊗ σ_j`.
fn mu_star_strict(c: HalfInt) -> MuStarSum {
    let mut out = MuStarSum::new();
    for j in halves(HalfInt::NEG_HALF, c) {
        out.add(GLProduct::from_segments([seg(j.plus(1), c)]), GExpr::atom(strict_or_cusp(j)), 1);
    }
    out
}

/// `δ([p,q]_±;σ)` as an atom, if nonzero. A segment with negative centre
/// names the same pieces as its reflection `[-q,-p]`.
fn seg_pm_atom(p: HalfInt, q: HalfInt, plus: bool) -> Result<Option<GAtom>, MuStarError> {
    let (lo, hi) = if (p + q).twice() < 0 { (-q, -p) } else { (p, q) };
    Ok(if lo > HalfInt::HALF {
        None
    } else if lo == HalfInt::HALF {
        plus.then_some(GAtom::StrictDS { a: hi })
    } else if plus {
        Some(GAtom::seg_plus(lo, hi)?)
    } else {
        Some(GAtom::seg_minus(lo, hi)?)
    })
}

/// `μ*(δ([-a,c]_±;σ))`.
fn mu_star_seg(a: HalfInt, c: HalfInt, plus: bool) -> Result<MuStarSum, MuStarError> {
    let mut out = MuStarSum::new();
    let gl2 = |s1: Segment, s2: Segment| GLProduct::from_segments([s1, s2]);
    let first_top = if plus { HalfInt::NEG_HALF } else { HalfInt::from_twice(-3) };
    for i in halves((-a).plus(-1), first_top) {
        out.add(gl2(seg(-i, a), seg(i.plus(1), c)), GExpr::atom(GAtom::Cuspidal), 1);
    }
    for i in halves((-a).plus(-1), a) {
        let lo = i.plus(1);
        for j in halves(lo, c) {
            let g = seg_pm_atom(lo, j, plus)?;
            if let Some(g) = g {
                out.add(gl2(seg(-i, a), seg(j.plus(1), c)), GExpr::atom(g), 1);
            }
        }
        for j in halves(lo, a) {
            if (i + j).twice() >= -2 {
                continue;
            }
            let l = GAtom::langlands(vec![seg(lo, j)], GAtom::Cuspidal)?;
            out.add(gl2(seg(-i, a), seg(j.plus(1), c)), GExpr::atom(l), 1);
        }
    }
    Ok(out)
}

/// `μ*(L(δ([-a,c]);σ))` for `a ≥ 1/2`, `c > a`.
fn mu_star_l_linked(a: HalfInt, c: HalfInt) -> Result<MuStarSum, MuStarError> {
    let mut out = MuStarSum::new();
    for i in halves(HalfInt::HALF, c) {
        out.add(langlands_of_pair(seg(-i, a), seg(i.plus(1), c)), GExpr::atom(GAtom::Cuspidal), 1);
    }
    for i in halves((-a).plus(-1), c) {
        for j in halves(i.plus(1), c) {
            if (i + j).twice() < 0 {
                continue;
            }
            let g = GAtom::langlands(vec![seg(i.plus(1), j)], GAtom::Cuspidal)?;
            out.add(langlands_of_pair(seg(-i, a), seg(j.plus(1), c)), GExpr::atom(g), 1);
        }
    }
    Ok(out)
}

/// Replaces right-hand sides `δ([x,y])⋊σ` by their atoms.
fn resolve_over_cuspidal(sum: &MuStarSum) -> Result<MuStarSum, MuStarError> {
    let mut out = MuStarSum::new();
    for (t, n) in sum.terms() {
        match (t.g.segments(), t.g.base()) {
            ([d], GAtom::Cuspidal) => {
                let (x, y) = d.bounds().expect("nonempty");
                for (a, m) in classify_seg_induced(x, y)?.terms() {
                    out.add(t.gl.clone(), GExpr::atom(a.clone()), n * m);
                }
            }
            _ => out.add_term(t.clone(), *n),
        }
    }
    if sum.is_partial() {
        out.mark_partial();
    }
    Ok(out)
}

/// True when `δ([p,q])⋊π` is irreducible for a discrete series `π` by the
/// Jordan-block criterion.
pub fn seg_induced_irreducible(p: HalfInt, q: HalfInt, pi: &GAtom) -> bool {
    if p < HalfInt::from_twice(3) || q < p {
        return false;
    }
    let Ok(jd) = pi.jordan() else { return false };
    let (lo, hi) = (p.twice() - 1, q.twice() + 1);
    jd.jord.iter().all(|&(n, _)| (n as i64) < lo || (n as i64) > hi)
}

/// Jacquet module of an atom from the closed-form tables. Triple atoms only
/// have lower bounds, returned with the partial flag set.
pub fn mu_star_atom(atom: &GAtom) -> Result<MuStarSum, MuStarError> {
    let one = GLProduct::one;
    let mut out = match atom {
        GAtom::Cuspidal => {
            let mut s = MuStarSum::new();
            s.add(one(), GExpr::atom(GAtom::Cuspidal), 1);
            s
        }
        GAtom::StrictDS { a } => mu_star_strict(*a),
        GAtom::SegPlus { lo, hi } => mu_star_seg(-*lo, *hi, true)?,
        GAtom::SegMinus { lo, hi } => mu_star_seg(-*lo, *hi, false)?,
        GAtom::TriplePlus { a, b, c } => {
            let (a, b, c) = (*a, *b, *c);
            let mut s = MuStarSum::new();
            s.add(one(), GExpr::atom(atom.clone()), 1);
            s.add(GLProduct::from_segments([seg(-a, b)]), GExpr::atom(GAtom::StrictDS { a: c }), 1);
            s.add(GLProduct::from_segments([seg(-b, c)]), GExpr::atom(GAtom::StrictDS { a }), 1);
            s.add(GLProduct::from_segments([seg(HalfInt::HALF, a)]), GExpr::atom(GAtom::seg_plus(-b, c)?), 1);
            s.mark_partial();
            s
        }
        GAtom::TripleMinusBCA { a, b, c } => {
            let (a, b, c) = (*a, *b, *c);
            let mut s = MuStarSum::new();
            s.add(one(), GExpr::atom(atom.clone()), 1);
            s.add(GLProduct::from_segments([seg(-b, c)]), GExpr::atom(GAtom::StrictDS { a }), 1);
            s.add(GLProduct::from_segments([seg(HalfInt::HALF, a)]), GExpr::atom(GAtom::seg_minus(-b, c)?), 1);
            s.mark_partial();
            s
        }
        GAtom::TripleMinusABC { a, b, c } => {
            let (a, b, c) = (*a, *b, *c);
            let mut s = MuStarSum::new();
            s.add(one(), GExpr::atom(atom.clone()), 1);
            s.add(GLProduct::from_segments([seg(-a, b)]), GExpr::atom(GAtom::StrictDS { a: c }), 1);
            s.mark_partial();
            s
        }
        GAtom::Langlands { gl, temp } => match (gl.as_slice(), temp.as_ref()) {
            ([s], GAtom::Cuspidal) => {
                let (p, q) = s.bounds().expect("nonempty");
                if p < HalfInt::ZERO {
                    mu_star_l_linked(-p, q)?
                } else {
                    let mut full = resolve_over_cuspidal(&mu_star_induced(*s, &mu_star_atom(&GAtom::Cuspidal)?))?;
                    if p == HalfInt::HALF {
                        full.add_sum(&mu_star_strict(q), -1);
                    }
                    full
                }
            }
            ([s], t) if seg_induced_irreducible(s.low().unwrap(), s.high().unwrap(), t) => {
                mu_star_induced(*s, &mu_star_atom(t)?)
            }
            _ => return Err(MuStarError::Unsupported(atom.clone())),
        },
    };
    if matches!(atom, GAtom::TriplePlus { .. } | GAtom::TripleMinusBCA { .. } | GAtom::TripleMinusABC { .. }) {
        out.mark_partial();
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// The structure formula.

/// One application of the structure formula to `δ([x,y]) ⋊ (gl ⊗ g)`,
/// unmerged, in index order `(i, j)`.
pub fn structure_terms(d: Segment, gl: &GLProduct, g: &GExpr) -> Vec<GGTerm> {
    let Some((x, y)) = d.bounds() else {
        return vec![GGTerm::new(gl.clone(), g.clone())];
    };
    let len = d.cardinality() as i64;
    let mut out = Vec::with_capacity(((len + 1) * (len + 2) / 2) as usize);
    for i in 0..=len {
        for j in 0..=i {
            let left = seg((-y).plus(i), -x);
            let right = seg(y.plus(1 - j), y);
            let mid = seg(y.plus(1 - i), y.plus(-j));
            out.push(GGTerm::new(gl.times(&GLProduct::from_segments([left, right])), g.induce(vec![mid])));
        }
    }
    out
}

fn apply_segment(d: Segment, sum: &MuStarSum, keep: &dyn Fn(&GLProduct) -> bool) -> MuStarSum {
    let mut out = MuStarSum::new();
    for (t, n) in sum.terms() {
        if !keep(&t.gl) {
            continue;
        }
        for nt in structure_terms(d, &t.gl, &t.g) {
            if keep(&nt.gl) {
                out.add_term(nt, *n);
            }
        }
    }
    if sum.is_partial() {
        out.mark_partial();
    }
    out
}

/// `μ*(δ(d) ⋊ π)` given `μ*(π)`.
pub fn mu_star_induced(d: Segment, pi: &MuStarSum) -> MuStarSum {
    apply_segment(d, pi, &|_| true)
}

/// `μ*` of an induced expression, applying the structure formula once per
/// segment. `keep` prunes terms by their general linear part; since later
/// segments only multiply that part, a pruned term never comes back.
pub fn mu_star_expr_with(
    e: &GExpr,
    src: &dyn AtomMuStar,
    keep: &dyn Fn(&GLProduct) -> bool,
) -> Result<MuStarSum, MuStarError> {
    let mut acc = src.atom_mu_star(e.base())?;
    for d in e.segments() {
        acc = apply_segment(*d, &acc, keep);
    }
    Ok(acc)
}

pub fn mu_star_expr(e: &GExpr) -> Result<MuStarSum, MuStarError> {
    mu_star_expr_with(e, &ClosedForm, &|_| true)
}

/// How far to restrict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Depth {
    /// `n` nested applications of `μ*`, flattening the general linear blocks.
    Levels(u32),
    /// The minimal level: terms whose classical-group part is cuspidal.
    Full,
}

pub fn mu_star_depth(e: &GExpr, depth: Depth) -> Result<MuStarSum, MuStarError> {
    let first = mu_star_expr(e)?;
    match depth {
        Depth::Full => {
            let mut out = MuStarSum::new();
            for (t, n) in first.terms() {
                if t.g.as_atom() == Some(&GAtom::Cuspidal) {
                    out.add_term(t.clone(), *n);
                }
            }
            if first.is_partial() {
                out.mark_partial();
            }
            Ok(out)
        }
        Depth::Levels(n) => {
            let mut acc = first;
            for _ in 1..n.max(1) {
                let mut next = MuStarSum::new();
                for (t, c) in acc.terms() {
                    let inner = mu_star_expr(&t.g)?;
                    for (u, m) in inner.terms() {
                        next.add(t.gl.times(&u.gl), u.g.clone(), c * m);
                    }
                    if inner.is_partial() {
                        next.mark_partial();
                    }
                }
                if acc.is_partial() {
                    next.mark_partial();
                }
                acc = next;
            }
            Ok(acc)
        }
    }
}

// ---------------------------------------------------------------------------
// Multiplicity queries.

/// Multiplicity of an atom inside an induced expression, with the names of
/// the table entries the answer used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GMult {
    pub mult: Multiplicity,
    pub sources: BTreeSet<String>,
}

impl GMult {
    pub fn exact(n: u64) -> GMult {
        GMult { mult: Multiplicity::Exact(n), sources: BTreeSet::new() }
    }

    pub fn unknown() -> GMult {
        GMult { mult: Multiplicity::Unknown, sources: BTreeSet::new() }
    }

    pub fn with_source(mut self, s: impl Into<String>) -> GMult {
        self.sources.insert(s.into());
        self
    }
}

/// Classical-group knowledge used to resolve the right-hand factors.
pub trait GResolver: AtomMuStar {
    fn g_mult(&self, atom: &GAtom, expr: &GExpr) -> GMult;

    /// The atom an irreducible expression equals, when known.
    fn irreducible_atom(&self, expr: &GExpr) -> Option<GAtom>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultReport {
    pub mult: Multiplicity,
    pub sources: BTreeSet<String>,
    /// Surviving terms `(gl ⊗ g, coefficient)` after support pruning.
    pub surviving: usize,
}

/// Multiplicity of `target` in `μ*(host)`.
pub fn multiplicity_of(target: &GGTerm, host: &GExpr, r: &dyn GResolver) -> MultReport {
    let mut sources = BTreeSet::new();
    let t_atom = match target.g.as_atom() {
        Some(a) => a.clone(),
        None => match r.irreducible_atom(&target.g) {
            Some(a) => {
                sources.insert("irreducible-induced".to_string());
                a
            }
            None => return MultReport { mult: Multiplicity::Unknown, sources, surviving: 0 },
        },
    };
    let t_supp = target.gl.support();
    let t_fold = t_supp.folded();
    let g_fold = t_atom.cusp_support().folded();
    if host.folded_support() != t_fold.union(&g_fold) {
        return MultReport { mult: Multiplicity::Exact(0), sources, surviving: 0 };
    }
    let keep = |p: &GLProduct| p.support().is_within(&t_supp);
    let sum = match mu_star_expr_with(host, r, &keep) {
        Ok(s) => s,
        Err(_) => return MultReport { mult: Multiplicity::Unknown, sources, surviving: 0 },
    };
    let mut total = Multiplicity::Exact(0);
    let mut surviving = 0;
    let mut negative = false;
    for (t, n) in sum.terms() {
        if t.gl.support() != t_supp || t.g.folded_support() != g_fold {
            continue;
        }
        surviving += 1;
        let gl = contains_gl(&target.gl, &t.gl);
        if gl == Multiplicity::Exact(0) {
            continue;
        }
        let g = r.g_mult(&t_atom, &t.g);
        sources.extend(g.sources);
        let m = gl * g.mult;
        if *n < 0 {
            // Only closed forms built by subtraction have negative terms;
            // they are exact only when the subtracted part resolves to 0.
            if m != Multiplicity::Exact(0) {
                negative = true;
            }
            continue;
        }
        for _ in 0..*n {
            total = total + m;
        }
    }
    if negative {
        total = Multiplicity::Unknown;
    }
    if sum.is_partial() {
        total = match total {
            Multiplicity::Exact(0) => Multiplicity::Unknown,
            Multiplicity::Exact(n) => Multiplicity::AtLeast(n),
            m => m,
        };
    }
    MultReport { mult: total, sources, surviving }
}

// ---------------------------------------------------------------------------
// Minimal Jacquet words.

pub type WordSet = BTreeMap<Vec<HalfInt>, i64>;

fn base_words(atom: &GAtom) -> Result<Vec<Vec<HalfInt>>, MuStarError> {
    match atom {
        GAtom::Cuspidal => Ok(vec![vec![]]),
        GAtom::StrictDS { a } => Ok(vec![seg(HalfInt::HALF, *a).decreasing_word()]),
        other => Err(MuStarError::Unsupported(other.clone())),
    }
}

fn shuffle_into(pieces: &[Vec<HalfInt>], out: &mut WordSet) {
    let total: usize = pieces.iter().map(Vec::len).sum();
    let mut pos = vec![0usize; pieces.len()];
    let mut cur = Vec::with_capacity(total);
    shuffle_rec(pieces, &mut pos, &mut cur, total, out);
}

fn shuffle_rec(pieces: &[Vec<HalfInt>], pos: &mut [usize], cur: &mut Vec<HalfInt>, total: usize, out: &mut WordSet) {
    if cur.len() == total {
        *out.entry(cur.clone()).or_insert(0) += 1;
        return;
    }
    for k in 0..pieces.len() {
        if pos[k] < pieces[k].len() {
            cur.push(pieces[k][pos[k]]);
            pos[k] += 1;
            shuffle_rec(pieces, pos, cur, total, out);
            pos[k] -= 1;
            cur.pop();
        }
    }
}

/// Minimal Jacquet module by brute force: split every segment, reflect the
/// lower piece, and shuffle all pieces with the base word.
pub fn minimal_jacquet_oracle(e: &GExpr, cap: usize) -> Result<WordSet, MuStarError> {
    let len = e.exponent_count();
    if len > cap {
        return Err(MuStarError::WordCap { len, cap });
    }
    let mut choices: Vec<Vec<Vec<Vec<HalfInt>>>> = Vec::new();
    for d in e.segments() {
        let (x, y) = d.bounds().expect("canonical segments are nonempty");
        let mut opts = Vec::new();
        for z in x.plus(-1).range_to(y) {
            let upper = seg(z.plus(1), y).decreasing_word();
            let lower: Vec<HalfInt> = x.range_to(z).map(|v| -v).collect();
            opts.push(vec![upper, lower]);
        }
        choices.push(opts);
    }
    let mut out = WordSet::new();
    for base in base_words(e.base())? {
        let mut idx = vec![0usize; choices.len()];
        loop {
            let mut pieces = vec![base.clone()];
            for (k, &c) in idx.iter().enumerate() {
                pieces.extend(choices[k][c].iter().filter(|p| !p.is_empty()).cloned());
            }
            pieces.retain(|p| !p.is_empty());
            shuffle_into(&pieces, &mut out);
            let mut k = 0;
            while k < idx.len() {
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
    }
    Ok(out)
}

/// Minimal Jacquet words read off from the structure formula: the terms with
/// cuspidal right-hand side, expanded into words.
pub fn minimal_words_structural(e: &GExpr) -> Result<WordSet, MuStarError> {
    let sum = mu_star_expr(e)?;
    let mut out = WordSet::new();
    for (t, n) in sum.terms() {
        if t.g.as_atom() != Some(&GAtom::Cuspidal) {
            continue;
        }
        for (w, m) in minimal_words(&t.gl) {
            *out.entry(w).or_insert(0) += n * m;
        }
    }
    out.retain(|_, v| *v != 0);
    Ok(out)
}

/// Rewrites every general linear part by its minimal Jacquet words, which
/// determine it in the Grothendieck group.
pub fn word_expand(sum: &MuStarSum) -> BTreeMap<(Vec<HalfInt>, GExpr), i64> {
    let mut out = BTreeMap::new();
    for (t, n) in sum.terms() {
        for (w, m) in minimal_words(&t.gl) {
            *out.entry((w, t.g.clone())).or_insert(0) += n * m;
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

/// Casselman's criterion on one exponent word: all prefix sums positive.
pub fn casselman_positive(word: &[HalfInt]) -> bool {
    let mut acc = 0i64;
    for v in word {
        acc += v.twice();
        if acc <= 0 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(t: i64) -> HalfInt {
        HalfInt::from_twice(t)
    }

    fn s(x: i64, y: i64) -> Segment {
        seg(h(x), h(y))
    }

    fn induced_sum(lo: i64, hi: i64) -> MuStarSum {
        resolve_over_cuspidal(&mu_star_induced(s(lo, hi), &mu_star_atom(&GAtom::Cuspidal).unwrap())).unwrap()
    }

    fn sum_of_atoms(lo: i64, hi: i64) -> MuStarSum {
        let mut out = MuStarSum::new();
        for (a, n) in classify_seg_induced(h(lo), h(hi)).unwrap().terms() {
            out.add_sum(&mu_star_atom(a).unwrap(), *n);
        }
        out
    }

    #[test]
    fn single_point() {
        let m = mu_star_induced(s(1, 1), &mu_star_atom(&GAtom::Cuspidal).unwrap());
        assert_eq!(m.len(), 3);
        let cusp = GExpr::atom(GAtom::Cuspidal);
        assert_eq!(m.coeff(&GGTerm::new(GLProduct::from_segments([s(1, 1)]), cusp.clone())), 1);
        assert_eq!(m.coeff(&GGTerm::new(GLProduct::from_segments([s(-1, -1)]), cusp)), 1);
    }

    #[test]
    fn strict_ds_term_count() {
        let m = mu_star_atom(&GAtom::StrictDS { a: h(5) }).unwrap();
        assert_eq!(m.len(), 4);
    }

    #[test]
    fn atom_tables_add_up_to_induced() {
        // (lo, hi) with lo <= -1/2: the tempered and Langlands pieces
        // together must give the structure formula for the whole induced.
        for (lo, hi) in [(-1, 1), (-1, 3), (-3, 3), (-1, 5), (-3, 5), (-3, 7), (-5, 7), (1, 3), (1, 5), (3, 5)] {
            assert_eq!(word_expand(&sum_of_atoms(lo, hi)), word_expand(&induced_sum(lo, hi)), "[{lo},{hi}]");
        }
    }

    #[test]
    fn oracle_small() {
        let e = GExpr::induced(vec![s(1, 3)], GAtom::Cuspidal);
        let w = minimal_jacquet_oracle(&e, 12).unwrap();
        assert_eq!(w.values().sum::<i64>(), 4);
        assert_eq!(w, minimal_words_structural(&e).unwrap());
    }

    #[test]
    fn casselman() {
        assert!(casselman_positive(&[h(3), h(1)]));
        assert!(casselman_positive(&[]));
        assert!(!casselman_positive(&[h(1), h(-1), h(-3), h(5), h(3), h(1)]));
    }
}
