//! Named irreducible representations of the classical group.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::segments::{CuspLabel, CuspSupport, HalfInt, Segment};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AtomError {
    #[error("invalid atom parameters: {0}")]
    Invalid(String),
    #[error("{0} is not a discrete series")]
    NotDiscreteSeries(GAtom),
    #[error("{0} is not tempered")]
    NotTempered(GAtom),
}

/// Irreducible representation of the classical group, by canonical name.
///
/// `SegPlus`/`SegMinus` with `lo = -a`, `hi = c` stand for δ([-a,c]_±;σ);
/// the triples carry `a < b < c`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum GAtom {
    Cuspidal,
    StrictDS {
        a: HalfInt,
    },
    SegPlus {
        lo: HalfInt,
        hi: HalfInt,
    },
    SegMinus {
        lo: HalfInt,
        hi: HalfInt,
    },
    TriplePlus {
        a: HalfInt,
        b: HalfInt,
        c: HalfInt,
    },
    TripleMinusBCA {
        a: HalfInt,
        b: HalfInt,
        c: HalfInt,
    },
    TripleMinusABC {
        a: HalfInt,
        b: HalfInt,
        c: HalfInt,
    },
    /// Langlands quotient of `δ(Δ1)×…×δ(Δk)⋊temp`, e-centres positive and
    /// decreasing (ties by lower end).
    Langlands {
        gl: Vec<Segment>,
        temp: Box<GAtom>,
    },
}

fn check_half(v: HalfInt, what: &str) -> Result<(), AtomError> {
    if v.is_half_odd() {
        Ok(())
    } else {
        Err(AtomError::Invalid(format!("{what} = {v} is not in Z+1/2")))
    }
}

impl GAtom {
    pub fn strict_ds(a: HalfInt) -> Result<GAtom, AtomError> {
        check_half(a, "a")?;
        if a < HalfInt::HALF {
            return Err(AtomError::Invalid(format!("ds({a}) needs a >= 1/2")));
        }
        Ok(GAtom::StrictDS { a })
    }

    fn seg_check(lo: HalfInt, hi: HalfInt) -> Result<(), AtomError> {
        check_half(lo, "lo")?;
        check_half(hi, "hi")?;
        if -lo < HalfInt::HALF || -lo > hi {
            return Err(AtomError::Invalid(format!("segment atom [{lo},{hi}] needs 1/2 <= -lo <= hi")));
        }
        Ok(())
    }

    pub fn seg_plus(lo: HalfInt, hi: HalfInt) -> Result<GAtom, AtomError> {
        Self::seg_check(lo, hi)?;
        Ok(GAtom::SegPlus { lo, hi })
    }

    pub fn seg_minus(lo: HalfInt, hi: HalfInt) -> Result<GAtom, AtomError> {
        Self::seg_check(lo, hi)?;
        Ok(GAtom::SegMinus { lo, hi })
    }

    fn triple_check(a: HalfInt, b: HalfInt, c: HalfInt) -> Result<(), AtomError> {
        for (v, n) in [(a, "a"), (b, "b"), (c, "c")] {
            check_half(v, n)?;
        }
        if !(HalfInt::HALF <= a && a < b && b < c) {
            return Err(AtomError::Invalid(format!("triple ({a},{b},{c}) needs 1/2 <= a < b < c")));
        }
        Ok(())
    }

    pub fn triple_plus(a: HalfInt, b: HalfInt, c: HalfInt) -> Result<GAtom, AtomError> {
        Self::triple_check(a, b, c)?;
        Ok(GAtom::TriplePlus { a, b, c })
    }

    pub fn triple_minus_bca(a: HalfInt, b: HalfInt, c: HalfInt) -> Result<GAtom, AtomError> {
        Self::triple_check(a, b, c)?;
        Ok(GAtom::TripleMinusBCA { a, b, c })
    }

    pub fn triple_minus_abc(a: HalfInt, b: HalfInt, c: HalfInt) -> Result<GAtom, AtomError> {
        Self::triple_check(a, b, c)?;
        Ok(GAtom::TripleMinusABC { a, b, c })
    }

    /// `L(δ(Δ1)×…⋊temp)`, normalised: empty segments dropped, segments with
    /// negative centre replaced by their contragredients, sorted.
    pub fn langlands(segs: Vec<Segment>, temp: GAtom) -> Result<GAtom, AtomError> {
        if !temp.is_tempered() {
            return Err(AtomError::NotTempered(temp));
        }
        let mut gl = Vec::new();
        for s in segs.into_iter().filter(|s| !s.is_empty()) {
            let e = s.e_twice().expect("nonempty");
            match e.signum() {
                0 => return Err(AtomError::Invalid(format!("segment {s} has centre 0"))),
                -1 => gl.push(s.contragredient()),
                _ => gl.push(s),
            }
        }
        if gl.is_empty() {
            return Ok(temp);
        }
        sort_langlands(&mut gl);
        Ok(GAtom::Langlands { gl, temp: Box::new(temp) })
    }

    /// δ([lo,hi]_±;σ) read as an atom: `lo = 1/2` gives σ_hi for the plus
    /// sign and nothing for the minus sign.
    pub fn seg_ds(lo: HalfInt, hi: HalfInt, plus: bool) -> Option<GAtom> {
        if lo == HalfInt::HALF {
            return plus.then_some(GAtom::StrictDS { a: hi });
        }
        if plus {
            GAtom::seg_plus(lo, hi).ok()
        } else {
            GAtom::seg_minus(lo, hi).ok()
        }
    }

    pub fn is_tempered(&self) -> bool {
        !matches!(self, GAtom::Langlands { .. })
    }

    pub fn is_discrete_series(&self) -> bool {
        match self {
            GAtom::SegPlus { lo, hi } | GAtom::SegMinus { lo, hi } => -*lo < *hi,
            GAtom::Langlands { .. } => false,
            _ => true,
        }
    }

    /// Jordan blocks (as `2x+1`) and signs.
    pub fn jordan(&self) -> Result<JordanData, AtomError> {
        if !self.is_discrete_series() {
            return Err(AtomError::NotDiscreteSeries(self.clone()));
        }
        let j = |x: HalfInt| (x.twice() + 1) as u32;
        let entries: Vec<(u32, i8)> = match *self {
            GAtom::Cuspidal => vec![],
            GAtom::StrictDS { a } => vec![(j(a), 1)],
            GAtom::SegPlus { lo, hi } => vec![(j(-lo), 1), (j(hi), 1)],
            GAtom::SegMinus { lo, hi } => vec![(j(-lo), -1), (j(hi), -1)],
            GAtom::TriplePlus { a, b, c } => vec![(j(a), 1), (j(b), 1), (j(c), 1)],
            GAtom::TripleMinusBCA { a, b, c } => vec![(j(a), 1), (j(b), -1), (j(c), -1)],
            GAtom::TripleMinusABC { a, b, c } => vec![(j(a), -1), (j(b), -1), (j(c), 1)],
            GAtom::Langlands { .. } => unreachable!(),
        };
        let rho = CuspLabel::default();
        Ok(JordanData {
            jord: entries.iter().map(|&(n, _)| (n, rho)).collect(),
            eps: entries.into_iter().collect(),
            partial_cusp: rho,
        })
    }

    /// Signed cuspidal support on the general linear side.
    pub fn cusp_support(&self) -> CuspSupport {
        let span = |x: HalfInt, y: HalfInt| Segment::span(x, y).support();
        match self {
            GAtom::Cuspidal => CuspSupport::new(),
            GAtom::StrictDS { a } => span(HalfInt::HALF, *a),
            GAtom::SegPlus { lo, hi } | GAtom::SegMinus { lo, hi } => span(*lo, *hi),
            GAtom::TriplePlus { a, b, c } | GAtom::TripleMinusBCA { a, b, c } => {
                span(HalfInt::HALF, *a).union(&span(-*b, *c))
            }
            GAtom::TripleMinusABC { a, b, c } => span(-*a, *b).union(&span(HalfInt::HALF, *c)),
            GAtom::Langlands { gl, temp } => {
                let mut s = temp.cusp_support();
                for g in gl {
                    s.extend(&g.support());
                }
                s
            }
        }
    }

    /// The duality functor fixes irreducibles.
    pub fn dual(&self) -> GAtom {
        self.clone()
    }
}

pub(crate) fn sort_langlands(gl: &mut [Segment]) {
    gl.sort_by(|x, y| {
        y.e_twice().cmp(&x.e_twice()).then_with(|| x.low().cmp(&y.low())).then_with(|| x.high().cmp(&y.high()))
    });
}

pub fn jordan_of(atom: &GAtom) -> Result<JordanData, AtomError> {
    atom.jordan()
}

pub fn dual_atom(atom: &GAtom) -> GAtom {
    atom.dual()
}

pub fn cusp_support_g(atom: &GAtom) -> CuspSupport {
    atom.cusp_support()
}

/// Reverses a bottom-to-top filtration.
pub fn dualize_layers(layers: &[RGSum]) -> Vec<RGSum> {
    layers.iter().rev().map(|l| l.map_atoms(GAtom::dual)).collect()
}

/// Semisimplification of `δ([lo,hi])⋊σ`.
pub fn classify_seg_induced(lo: HalfInt, hi: HalfInt) -> Result<RGSum, AtomError> {
    check_half(lo, "lo")?;
    check_half(hi, "hi")?;
    if lo > hi {
        return Err(AtomError::Invalid(format!("[{lo},{hi}] is empty")));
    }
    if lo + hi < HalfInt::ZERO {
        return classify_seg_induced(-hi, -lo);
    }
    let seg = Segment::span(lo, hi);
    let l = || GAtom::langlands(vec![seg], GAtom::Cuspidal);
    let mut out = RGSum::new();
    if lo > HalfInt::HALF {
        out.add_atom(l()?, 1);
    } else if lo == HalfInt::HALF {
        out.add_atom(GAtom::StrictDS { a: hi }, 1);
        out.add_atom(l()?, 1);
    } else {
        out.add_atom(GAtom::seg_plus(lo, hi)?, 1);
        out.add_atom(GAtom::seg_minus(lo, hi)?, 1);
        if -lo < hi {
            out.add_atom(l()?, 1);
        }
    }
    Ok(out)
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct JordanData {
    pub jord: BTreeSet<(u32, CuspLabel)>,
    pub eps: BTreeMap<u32, i8>,
    pub partial_cusp: CuspLabel,
}

impl fmt::Display for GAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GAtom::Cuspidal => write!(f, "sigma"),
            GAtom::StrictDS { a } => write!(f, "ds({a})"),
            GAtom::SegPlus { lo, hi } => write!(f, "seg+({lo},{hi})"),
            GAtom::SegMinus { lo, hi } => write!(f, "seg-({lo},{hi})"),
            GAtom::TriplePlus { a, b, c } => write!(f, "tri+({a},{b},{c})"),
            GAtom::TripleMinusBCA { a, b, c } => write!(f, "tri-bca({a},{b},{c})"),
            GAtom::TripleMinusABC { a, b, c } => write!(f, "tri-abc({a},{b},{c})"),
            GAtom::Langlands { gl, temp } => {
                write!(f, "L(")?;
                for (k, s) in gl.iter().enumerate() {
                    if k > 0 {
                        write!(f, "*")?;
                    }
                    let (x, y) = s.bounds().expect("nonempty");
                    write!(f, "d({x},{y})")?;
                }
                write!(f, "; {temp})")
            }
        }
    }
}

impl Serialize for GAtom {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GAtom {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        crate::parse::parse_atom(&s).map_err(serde::de::Error::custom)
    }
}

/// Element of R(G): integer combination of atoms.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default, Serialize, Deserialize)]
pub struct RGSum {
    terms: BTreeMap<GAtom, i64>,
}

impl RGSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_atoms<I: IntoIterator<Item = GAtom>>(it: I) -> Self {
        let mut s = Self::new();
        for a in it {
            s.add_atom(a, 1);
        }
        s
    }

    pub fn add_atom(&mut self, a: GAtom, n: i64) {
        if n == 0 {
            return;
        }
        let e = self.terms.entry(a.clone()).or_insert(0);
        *e += n;
        if *e == 0 {
            self.terms.remove(&a);
        }
    }

    pub fn coeff(&self, a: &GAtom) -> i64 {
        self.terms.get(a).copied().unwrap_or(0)
    }

    pub fn set_coeff(&mut self, a: GAtom, n: i64) {
        if n == 0 {
            self.terms.remove(&a);
        } else {
            self.terms.insert(a, n);
        }
    }

    pub fn terms(&self) -> &BTreeMap<GAtom, i64> {
        &self.terms
    }

    pub fn atoms(&self) -> impl Iterator<Item = &GAtom> {
        self.terms.keys()
    }

    pub fn contains(&self, a: &GAtom) -> bool {
        self.terms.contains_key(a)
    }

    /// Number of distinct atoms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn map_atoms(&self, f: impl Fn(&GAtom) -> GAtom) -> RGSum {
        let mut out = RGSum::new();
        for (a, &n) in &self.terms {
            out.add_atom(f(a), n);
        }
        out
    }
}

impl fmt::Display for RGSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (a, n)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if *n != 1 {
                write!(f, "{n}*")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}
