//! Executable derivations: candidate enumeration, the multiplicity lemmas,
//! kernel ledgers, composition factors, layer structures and the four-step
//! filtration of `ψ = δ([-a,c])×δ([1/2,b])⋊σ`.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::atoms::{dualize_layers, GAtom, RGSum};
use crate::gl::{GLIrrep, GLProduct, Multiplicity};
use crate::ledger::{decomposition_of, table_value, Knowledge, LedgerError, Triple};
use crate::mustar::{casselman_positive, mu_star_atom, multiplicity_of, seg_induced_irreducible, GExpr, GGTerm};
use crate::segments::{HalfInt, Segment};

const H: HalfInt = HalfInt::HALF;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoremError {
    #[error("unknown check `{id}`; registered: {known}")]
    UnknownCheck { id: String, known: String },
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("identity fails: {0}")]
    Identity(String),
    #[error(transparent)]
    Ledger(#[from] LedgerError),
}

type TResult<T> = Result<T, TheoremError>;

fn seg(x: HalfInt, y: HalfInt) -> Segment {
    Segment::span(x, y)
}

fn gl(segs: &[(HalfInt, HalfInt)]) -> GLProduct {
    GLProduct::from_segments(segs.iter().map(|&(x, y)| seg(x, y)))
}

fn term(segs: &[(HalfInt, HalfInt)], g: GAtom) -> GGTerm {
    GGTerm::of_atom(gl(segs), g)
}

fn ind(segs: &[(HalfInt, HalfInt)], base: GAtom) -> GExpr {
    GExpr::induced(segs.iter().map(|&(x, y)| seg(x, y)).collect(), base)
}

fn ex(n: u64) -> Multiplicity {
    Multiplicity::Exact(n)
}

fn need(m: Multiplicity, what: impl fmt::Display) -> TResult<u64> {
    m.exact().ok_or_else(|| TheoremError::Inconclusive(format!("multiplicity of {what} is {m}")))
}

fn sorted(mut v: Vec<GAtom>) -> Vec<GAtom> {
    v.sort();
    v.dedup();
    v
}

fn total(layers: &[RGSum]) -> RGSum {
    layers.iter().fold(RGSum::new(), |acc, l| &acc + l)
}

/// Layers aligned from the bottom and added.
fn merge_layers(x: &[RGSum], y: &[RGSum]) -> Vec<RGSum> {
    (0..x.len().max(y.len()))
        .map(|i| {
            let e = RGSum::new();
            x.get(i).unwrap_or(&e) + y.get(i).unwrap_or(&e)
        })
        .collect()
}

fn restrict(sum: &RGSum, to: &RGSum) -> RGSum {
    let mut out = RGSum::new();
    for (a, &n) in sum.terms() {
        out.add_atom(a.clone(), n.min(to.coeff(a)).max(0));
    }
    out
}

fn dual_host(e: &GExpr) -> GExpr {
    GExpr::induced(e.segments().iter().map(Segment::contragredient).collect(), e.base().clone())
}

// ---------------------------------------------------------------------------
// Check values and results.

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Partial,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Partial => "partial",
            Status::Fail => "fail",
        })
    }
}

/// Parameters as doubled integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Params {
    pub a2: i64,
    pub b2: i64,
    pub c2: i64,
}

impl From<Triple> for Params {
    fn from(t: Triple) -> Params {
        let (a2, b2, c2) = t.twice();
        Params { a2, b2, c2 }
    }
}

impl Params {
    pub fn triple(&self) -> Result<Triple, LedgerError> {
        Triple::from_twice(self.a2, self.b2, self.c2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum CheckValue {
    Mult(Multiplicity),
    Mults(Vec<Multiplicity>),
    Sum(RGSum),
    Layers(Vec<RGSum>),
    Flags(Vec<bool>),
    Counts(Vec<u64>),
    Atoms(Vec<GAtom>),
    Tuple(Vec<CheckValue>),
    Inconclusive(String),
}

fn join<T: fmt::Display>(xs: &[T], sep: &str) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

impl fmt::Display for CheckValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckValue::Mult(m) => write!(f, "{m}"),
            CheckValue::Mults(v) => write!(f, "[{}]", join(v, ", ")),
            CheckValue::Sum(s) => write!(f, "{s}"),
            CheckValue::Layers(ls) => {
                let parts: Vec<String> = ls.iter().map(|l| format!("[{l}]")).collect();
                write!(f, "{}", parts.join(" / "))
            }
            CheckValue::Flags(v) => write!(f, "[{}]", join(v, ", ")),
            CheckValue::Counts(v) => write!(f, "[{}]", join(v, ", ")),
            CheckValue::Atoms(v) => write!(f, "{{{}}}", join(v, ", ")),
            CheckValue::Tuple(v) => write!(f, "({})", join(v, "; ")),
            CheckValue::Inconclusive(why) => write!(f, "inconclusive: {why}"),
        }
    }
}

/// Status of a computed multiplicity against the expected one. An expected
/// `AtLeast(n)` is met by any value known to be at least `n`.
pub fn mult_status(expected: Multiplicity, computed: Multiplicity) -> Status {
    use Multiplicity::*;
    match (expected, computed) {
        (_, Unknown) | (Unknown, _) => Status::Partial,
        (Exact(e), Exact(g)) => {
            if e == g {
                Status::Pass
            } else {
                Status::Fail
            }
        }
        (Exact(e), AtLeast(g)) => {
            if g <= e {
                Status::Partial
            } else {
                Status::Fail
            }
        }
        (AtLeast(e), Exact(g) | AtLeast(g)) if g >= e => Status::Pass,
        (AtLeast(_), Exact(_)) => Status::Fail,
        (AtLeast(_), AtLeast(_)) => Status::Partial,
    }
}

fn worst(it: impl IntoIterator<Item = Status>) -> Status {
    it.into_iter().max().unwrap_or(Status::Pass)
}

pub fn compare(expected: &CheckValue, computed: &CheckValue) -> Status {
    use CheckValue::*;
    match (expected, computed) {
        (_, Inconclusive(_)) => Status::Partial,
        (Mult(x), Mult(y)) => mult_status(*x, *y),
        (Mults(x), Mults(y)) if x.len() == y.len() => worst(x.iter().zip(y).map(|(e, g)| mult_status(*e, *g))),
        (Tuple(x), Tuple(y)) if x.len() == y.len() => worst(x.iter().zip(y).map(|(e, g)| compare(e, g))),
        _ if expected == computed => Status::Pass,
        _ => Status::Fail,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub claim: String,
    pub params: Params,
    pub expected: CheckValue,
    pub computed: CheckValue,
    pub status: Status,
    /// Tables, rules and named axioms the computation used.
    pub rests_on: Vec<String>,
}

// ---------------------------------------------------------------------------
// Derivation context.

/// One parameter triple, a shared knowledge base, and the record of what
/// the current derivation rests on.
pub struct Ctx<'k> {
    pub t: Triple,
    pub k: &'k Knowledge,
    rests_on: RefCell<BTreeSet<String>>,
}

impl<'k> Ctx<'k> {
    pub fn new(t: Triple, k: &'k Knowledge) -> Ctx<'k> {
        Ctx { t, k, rests_on: RefCell::new(BTreeSet::new()) }
    }

    fn note(&self, s: &str) {
        self.rests_on.borrow_mut().insert(s.to_string());
    }

    fn sources(&self) -> Vec<String> {
        self.rests_on.borrow().iter().cloned().collect()
    }

    fn record(&self, srcs: BTreeSet<String>) {
        let mut r = self.rests_on.borrow_mut();
        r.extend(srcs.into_iter().filter(|s| !s.starts_with("witness ")));
    }

    /// Multiplicity of a Jacquet term in `μ*(host)`.
    pub fn m(&self, t: &GGTerm, host: &GExpr) -> Multiplicity {
        let r = multiplicity_of(t, host, self.k);
        self.record(r.sources);
        r.mult
    }

    /// Multiplicity of an atom in an induced expression.
    pub fn g(&self, atom: &GAtom, host: &GExpr) -> Multiplicity {
        use crate::mustar::GResolver;
        let r = self.k.g_mult(atom, host);
        self.record(r.sources);
        r.mult
    }

    fn table(&self, name: &str, params: &[HalfInt]) -> TResult<RGSum> {
        self.note(name);
        Ok(decomposition_of(name, params)?)
    }

    fn triple_table(&self, name: &str) -> TResult<RGSum> {
        self.table(name, &[self.t.a, self.t.b, self.t.c])
    }

    /// `lower ≤ n ≤ (m(carrier, host) − others) / c(atom, carrier)`.
    fn squeeze(&self, atom: &GAtom, host: &GExpr, lower: u64, carrier: &GGTerm, others: u64) -> Multiplicity {
        let c = self.k.carrier_lower(atom, carrier);
        let upper = match self.m(carrier, host).exact() {
            Some(m) if c > 0 => m.checked_sub(others).map(|r| r / c),
            _ => None,
        };
        match upper {
            Some(u) if u == lower => ex(u),
            Some(u) if u < lower => Multiplicity::Unknown,
            _ if lower > 0 => Multiplicity::AtLeast(lower),
            _ => Multiplicity::Unknown,
        }
    }

    /// Multiplicity of `atom` in `sub ≤ sup` when `atom` accounts for every
    /// copy of `carrier` in `μ*(sup)`.
    fn inherit(&self, atom: &GAtom, sub: &GExpr, sup: &GExpr, n_sup: Multiplicity, carrier: &GGTerm) -> Multiplicity {
        let c = self.k.carrier_lower(atom, carrier);
        match (n_sup.exact(), self.m(carrier, sup).exact(), self.m(carrier, sub).exact()) {
            (Some(n), Some(ms), Some(mb)) if c > 0 && n * c == ms && mb % c == 0 => ex(mb / c),
            _ => Multiplicity::Unknown,
        }
    }

    fn ds_atoms(&self) -> [GAtom; 3] {
        [self.t.tri_plus(), self.t.tri_minus_bca(), self.t.tri_minus_abc()]
    }
}

// ---------------------------------------------------------------------------
// Candidate enumeration.

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DsCandidates {
    /// Folded cuspidal support of `ψ` at `1/2, 3/2, …, c`.
    pub counts: Vec<(HalfInt, u32)>,
    /// The Jordan blocks `x` (for `2x+1`) the support forces.
    pub jord: Vec<HalfInt>,
    pub hosts: Vec<GExpr>,
    pub atoms: Vec<GAtom>,
}

/// Discrete series that can occur in `ψ`: the support fixes the Jordan
/// blocks, each nesting pattern fixes a host, and the hosts' discrete series
/// factors are the candidates.
pub fn enumerate_ds_candidates(t: &Triple, k: &Knowledge) -> TResult<DsCandidates> {
    let supp = t.psi().folded_support();
    let counts: Vec<(HalfInt, u32)> = H.range_to(t.c).map(|e| (e, supp.count(e))).collect();
    let mut jord = Vec::new();
    for (i, &(e, n)) in counts.iter().enumerate() {
        let next = counts.get(i + 1).map_or(0, |p| p.1);
        if next > n {
            return Err(TheoremError::Inconclusive(format!("support count rises at {e}")));
        }
        jord.extend(std::iter::repeat_n(e, (n - next) as usize));
    }
    let [x1, x2, x3] = jord[..] else {
        return Err(TheoremError::Inconclusive(format!("expected three Jordan blocks, got {}", jord.len())));
    };
    if !(x1 < x2 && x2 < x3) {
        return Err(TheoremError::Inconclusive("repeated Jordan block".into()));
    }
    // 0 < x < y < z: δ([-y,z])⋊σ_x; 0 < y < z < x: δ([-x,y])⋊σ_z.
    let hosts = vec![ind(&[(-x2, x3)], Triple::ds(x1)), ind(&[(-x1, x2)], Triple::ds(x3))];
    let mut atoms = Vec::new();
    for h in &hosts {
        let d = k.decompose(h);
        if !d.complete {
            return Err(TheoremError::Inconclusive(format!("no decomposition of {h}")));
        }
        atoms.extend(d.lower.atoms().filter(|a| a.is_discrete_series()).cloned());
    }
    Ok(DsCandidates { counts, jord, hosts, atoms: sorted(atoms) })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "detail", rename_all = "snake_case")]
pub enum Outcome {
    Candidate(GAtom),
    Pruned(String),
    Inconclusive(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub case: String,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NontemperedSearch {
    pub candidates: Vec<GAtom>,
    pub branches: Vec<Branch>,
}

impl NontemperedSearch {
    pub fn is_conclusive(&self) -> bool {
        !self.branches.iter().any(|b| matches!(b.outcome, Outcome::Inconclusive(_)))
    }
}

/// Frobenius certificate for a unique irreducible subrepresentation:
/// the witness occurs exactly once in `μ*(ambient)`.
pub fn unique_sub_check(ambient: &GExpr, witness: &GGTerm, k: &Knowledge) -> TResult<bool> {
    match multiplicity_of(witness, ambient, k).mult {
        Multiplicity::Exact(n) => Ok(n == 1),
        m => Err(TheoremError::Inconclusive(format!("{witness} in μ*({ambient}) is {m}"))),
    }
}

impl Ctx<'_> {
    /// Non-tempered subquotients of `δ([1/2,b])⋊σ^±_{a,c}` other than the
    /// Langlands quotient, by the embedding case tree.
    pub fn enumerate_nontempered(&self, plus: bool) -> NontemperedSearch {
        let t = self.t;
        let base = Triple::pm(t.a, t.c, plus);
        let jord = [t.a, t.c];
        let mut branches = Vec::new();
        let mut push = |case: String, outcome: Outcome| branches.push(Branch { case, outcome });

        // β1 = -1/2: π ↪ δ([-α1,-1/2])⋊π' with π' ≤ δ([α1+1,b])⋊σ^±_{a,c}.
        for &alpha in &jord {
            let case = format!("β1 = -1/2, α1 = {alpha}");
            if alpha > t.b {
                push(case, Outcome::Pruned(format!("α1 = {alpha} ≤ b would imply b ≥ {alpha}")));
                continue;
            }
            let y = if alpha == t.a { t.c } else { t.a };
            if !(alpha < t.b && t.b < y) {
                push(case, Outcome::Inconclusive("Jordan blocks out of order".into()));
                continue;
            }
            self.note("tempered-are-ds");
            self.note("sign-propagation");
            match self.k.sign_propagation(alpha, t.b, y, plus).result {
                Some((1, 0)) => push(
                    format!("{case}, π' tempered"),
                    Outcome::Candidate(Triple::l(&[(H, alpha)], Triple::pm(t.b, y, plus))),
                ),
                _ => push(format!("{case}, π' tempered"), Outcome::Inconclusive("sign propagation unresolved".into())),
            }
            push(
                format!("{case}, π' non-tempered"),
                if y > t.b {
                    Outcome::Pruned(format!("a further Jordan block below b is needed, but {y} > b"))
                } else {
                    Outcome::Inconclusive("branch not covered".into())
                },
            );
        }

        // β1 > 1/2: π ↪ δ([-α1,β1])×δ([-b,-α1-1])⋊σ1 with
        // μ*(σ^±_{a,c}) ≥ δ([1/2,β1]) ⊗ σ1.
        let ms = mu_star_atom(&base);
        for &beta in &jord {
            let case = format!("β1 = {beta}");
            if beta >= t.b {
                push(case, Outcome::Pruned(format!("β1 = {beta} < α1 ≤ b is impossible")));
                continue;
            }
            let Ok(ms) = &ms else {
                push(case, Outcome::Inconclusive(format!("no Jacquet module for {base}")));
                continue;
            };
            let want = gl(&[(H, beta)]);
            let sigma1: Vec<GAtom> = ms
                .terms()
                .iter()
                .filter(|(u, &n)| n > 0 && u.gl == want)
                .filter_map(|(u, _)| u.g.as_atom().cloned())
                .collect();
            if sigma1.is_empty() {
                let y = if beta == t.a { t.c } else { t.a };
                push(
                    case,
                    Outcome::Pruned(format!(
                        "μ*({base}) has no term δ([1/2,{beta}]) ⊗ σ1: δ([1/2,{y}]_-;σ) is not defined"
                    )),
                );
                continue;
            }
            for s1 in sigma1 {
                let cand = Triple::l(&[(-beta, t.b)], s1.clone());
                for alpha in beta.plus(1).range_to(t.b) {
                    let case = format!("β1 = {beta}, σ1 = {s1}, α1 = {alpha}");
                    if alpha == t.b {
                        push(case, Outcome::Candidate(cand.clone()));
                        continue;
                    }
                    if !seg_induced_irreducible(alpha.plus(1), t.b, &s1) {
                        push(case, Outcome::Inconclusive(format!("δ([{},{}])⋊{s1} may reduce", alpha.plus(1), t.b)));
                        continue;
                    }
                    let ambient = ind(&[(-alpha, beta), (-t.b, -alpha.plus(1))], s1.clone());
                    let witness = GGTerm::new(gl(&[(-alpha, beta)]), ind(&[(-t.b, -alpha.plus(1))], s1.clone()));
                    self.note("frobenius-reciprocity");
                    push(
                        case,
                        match unique_sub_check(&ambient, &witness, self.k) {
                            Ok(true) => Outcome::Candidate(cand.clone()),
                            Ok(false) => {
                                Outcome::Inconclusive(format!("{ambient} may have several subrepresentations"))
                            }
                            Err(e) => Outcome::Inconclusive(e.to_string()),
                        },
                    );
                }
            }
        }
        let candidates = sorted(
            branches
                .iter()
                .filter_map(|b| match &b.outcome {
                    Outcome::Candidate(a) => Some(a.clone()),
                    _ => None,
                })
                .collect(),
        );
        NontemperedSearch { candidates, branches }
    }
}

// ---------------------------------------------------------------------------
// Multiplicities in ψ and in the kernels.

/// Discrete series multiplicities, in the order σ⁺, σ⁻_{b,c,a}, σ⁻_{a,b,c}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DsContent {
    pub psi: [Multiplicity; 3],
    pub plus: [Multiplicity; 3],
    pub minus: [Multiplicity; 3],
}

/// Certificate `ν^1/2 × ν^1/2 ⋊ σ`: decomposition of the one table entry
/// with no parameters.
pub fn half_times_half(k: &Knowledge) -> TResult<RGSum> {
    let host = ind(&[(H, H), (H, H)], GAtom::Cuspidal);
    let tempered = ind(&[(-H, H)], GAtom::Cuspidal);
    let lp = GLIrrep::pair(seg(-H, -H), seg(H, H)).expect("linked");
    let t = GGTerm::of_atom(GLProduct::new([lp]), GAtom::Cuspidal);
    let in_host = multiplicity_of(&t, &host, k).mult;
    let in_tempered = multiplicity_of(&t, &tempered, k).mult;
    if (in_host, in_tempered) != (ex(2), ex(0)) {
        return Err(TheoremError::Inconclusive(format!(
            "{t}: {in_host} in the host, {in_tempered} in δ([-1/2,1/2])⋊σ"
        )));
    }
    // host = δ([-1/2,1/2])⋊σ + L(ν^-1/2,ν^1/2)⋊σ; every factor of the second
    // carries t, so it has at most two factors. Both Langlands quotients
    // below lie in it and are distinct.
    let d = k.decompose(&tempered);
    if !d.complete {
        return Err(TheoremError::Inconclusive("no decomposition of δ([-1/2,1/2])⋊σ".into()));
    }
    let quotients = [Triple::l(&[(H, H)], Triple::ds(H)), Triple::l(&[(H, H), (H, H)], GAtom::Cuspidal)];
    if quotients.iter().any(|q| d.lower.contains(q)) {
        return Err(TheoremError::Identity("a Langlands quotient lies in δ([-1/2,1/2])⋊σ".into()));
    }
    Ok(&d.lower + &RGSum::from_atoms(quotients))
}

impl Ctx<'_> {
    fn carrier_ds(&self, plus: bool) -> GGTerm {
        term(&[(H, self.t.a)], Triple::pm(self.t.b, self.t.c, plus))
    }

    fn carrier_ab_c(&self) -> GGTerm {
        term(&[(-self.t.a, self.t.b)], Triple::ds(self.t.c))
    }

    pub fn ds_content(&self) -> TResult<DsContent> {
        let t = self.t;
        let [sp, smb, sma] = self.ds_atoms();
        let (psi, kp, km) = (t.psi(), t.k1_host(true), t.k1_host(false));
        let k2 = self.triple_table("seg-times-strict")?;
        let k3 = self.triple_table("seg-rtimes-sigma_b")?;
        self.note("long-intertwining");
        self.note("ds-embedding");
        let lower = |x: &GAtom| k2.coeff(x).max(k3.coeff(x)).max(0) as u64;
        let (wp, wm, wc) = (self.carrier_ds(true), self.carrier_ds(false), self.carrier_ab_c());

        let psi_p = self.squeeze(&sp, &psi, lower(&sp), &wp, 0);
        let psi_mb = self.squeeze(&smb, &psi, lower(&smb), &wm, 0);
        let plus_p = self.inherit(&sp, &kp, &psi, psi_p, &wp);
        let plus_mb = self.squeeze(&smb, &kp, 0, &wm, 0);
        let plus_ma = match plus_p.exact() {
            Some(n) => self.squeeze(&sma, &kp, 0, &wc, n * self.k.carrier_lower(&sp, &wc)),
            None => Multiplicity::Unknown,
        };
        let minus_p = self.squeeze(&sp, &km, 0, &wc, 0);
        let minus_mb = self.squeeze(&smb, &km, 0, &wm, 0);
        let minus_ma = self.squeeze(&sma, &km, 0, &wc, 0);
        // σ⁻_{a,b,c} in ψ: bounded by its coefficient in K1+K2+K3.
        let psi_ma = match (plus_ma.exact(), minus_ma.exact()) {
            (Some(x), Some(y)) if x + y + lower(&sma) == 0 && k2.coeff(&sma) + k3.coeff(&sma) == 0 => {
                self.note("sandwich");
                ex(0)
            }
            _ => Multiplicity::Unknown,
        };
        Ok(DsContent {
            psi: [psi_p, psi_mb, psi_ma],
            plus: [plus_p, plus_mb, plus_ma],
            minus: [minus_p, minus_mb, minus_ma],
        })
    }

    /// `L(δ([1/2,a])⋊σ^±_{b,c})` in `ψ` and in `δ([1/2,b])⋊σ^±_{a,c}`.
    pub fn l_half_a(&self, plus: bool) -> TResult<(Multiplicity, Multiplicity)> {
        let t = self.t;
        let atom = t.l_half_a_bc(plus);
        let w = term(&[(-t.a, -H)], Triple::pm(t.b, t.c, plus));
        let k2 = self.triple_table("seg-times-strict")?;
        self.note("long-intertwining");
        let psi = t.psi();
        let in_psi = self.squeeze(&atom, &psi, k2.coeff(&atom).max(0) as u64, &w, 0);
        let in_k1 = self.inherit(&atom, &t.k1_host(plus), &psi, in_psi, &w);
        Ok((in_psi, in_k1))
    }

    /// `L(δ([-a,b])⋊σ_c)` in `ψ` and in `δ([1/2,b])⋊σ⁺_{a,c}`.
    pub fn l_ab_c(&self) -> TResult<(Multiplicity, Multiplicity)> {
        let t = self.t;
        let atom = t.l_ab_c();
        let pi = term(&[(H, t.a)], Triple::l(&[(H, t.b)], Triple::ds(t.c)));
        let k3 = self.triple_table("seg-rtimes-sigma_b")?;
        self.note("long-intertwining");
        let psi = t.psi();
        let in_psi = self.squeeze(&atom, &psi, k3.coeff(&atom).max(0) as u64, &pi, 0);
        let in_k1 = self.inherit(&atom, &t.k1_host(true), &psi, in_psi, &pi);
        Ok((in_psi, in_k1))
    }

    /// `L(δ([-b,c])⋊σ_a)` in `ψ`.
    pub fn l_bc_a(&self) -> TResult<Multiplicity> {
        let t = self.t;
        let atom = t.l_bc_a();
        let pi = term(&[(H, t.a)], Triple::l(&[(-t.b, t.c)], GAtom::Cuspidal));
        let k2 = self.triple_table("seg-times-strict")?;
        self.note("long-intertwining");
        Ok(self.squeeze(&atom, &t.psi(), k2.coeff(&atom).max(0) as u64, &pi, 0))
    }

    /// Composition factors of `δ([1/2,b])⋊σ^±_{a,c}`.
    pub fn k1_decomposition(&self, plus: bool) -> TResult<RGSum> {
        let t = self.t;
        let ds = self.ds_content()?;
        let col = if plus { ds.plus } else { ds.minus };
        let mut out = RGSum::new();
        for (atom, m) in self.ds_atoms().into_iter().zip(col) {
            let n = need(m, format_args!("{atom} in {}", t.k1_host(plus)))?;
            out.add_atom(atom, n as i64);
        }
        self.note("langlands-quotient");
        out.add_atom(t.l_half_b_ac(plus), 1);
        let search = self.enumerate_nontempered(plus);
        if !search.is_conclusive() {
            return Err(TheoremError::Inconclusive("non-tempered case tree has open branches".into()));
        }
        for cand in search.candidates {
            let m = if cand == t.l_half_a_bc(plus) {
                self.l_half_a(plus)?.1
            } else if cand == t.l_ab_c() {
                self.l_ab_c()?.1
            } else {
                return Err(TheoremError::Inconclusive(format!("no multiplicity argument for {cand}")));
            };
            let n = need(m, format_args!("{cand} in {}", t.k1_host(plus)))?;
            out.add_atom(cand, n as i64);
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Kernels {
    pub k: [RGSum; 3],
    pub h: [RGSum; 3],
}

impl Ctx<'_> {
    /// `K1` from the derivation above, `K2`, `K3` from the tables, and
    /// `H_i = K_{4-i}^∧`.
    pub fn kernel_ledgers(&self) -> TResult<Kernels> {
        let k1 = &self.k1_decomposition(true)? + &self.k1_decomposition(false)?;
        let k2 = self.triple_table("seg-times-strict")?;
        let k3 = self.triple_table("seg-rtimes-sigma_b")?;
        self.note("duality");
        let dual = |s: &RGSum| s.map_atoms(GAtom::dual);
        let h = [dual(&k3), dual(&k2), dual(&k1)];
        Ok(Kernels { k: [k1, k2, k3], h })
    }

    /// Composition factors of `ψ` with multiplicities.
    pub fn main_decomposition(&self) -> TResult<RGSum> {
        let t = self.t;
        let kern = self.kernel_ledgers()?;
        let l_psi = t.l_psi();
        let all = total(&kern.k);
        let ds = self.ds_content()?;
        self.note("long-intertwining");
        self.note("sandwich");
        let mut out = RGSum::new();
        out.add_atom(l_psi.clone(), 1);
        let atoms: Vec<GAtom> = all.atoms().cloned().collect();
        for atom in atoms {
            let m = if let Some(i) = self.ds_atoms().iter().position(|d| *d == atom) {
                ds.psi[i]
            } else if atom == t.l_half_a_bc(true) {
                self.l_half_a(true)?.0
            } else if atom == t.l_half_a_bc(false) {
                self.l_half_a(false)?.0
            } else if atom == t.l_ab_c() {
                self.l_ab_c()?.0
            } else if atom == t.l_bc_a() {
                self.l_bc_a()?
            } else if all.coeff(&atom) == 1 {
                ex(1)
            } else {
                return Err(TheoremError::Inconclusive(format!("no multiplicity argument for {atom} in ψ")));
            };
            let n = need(m, format_args!("{atom} in ψ"))?;
            out.add_atom(atom, n as i64);
        }
        if ds.psi[2] != ex(0) {
            return Err(TheoremError::Inconclusive(format!("{} in ψ is {}", t.tri_minus_abc(), ds.psi[2])));
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// Layer structures and the filtration.

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub claim: String,
    pub expected: Multiplicity,
    pub computed: Multiplicity,
}

impl Certificate {
    pub fn holds(&self) -> bool {
        self.expected == self.computed
    }
}

/// Composition series of a host, bottom layer first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerStructure {
    pub host: GExpr,
    pub layers: Vec<RGSum>,
    pub certificates: Vec<Certificate>,
    pub axioms: Vec<String>,
}

impl LayerStructure {
    pub fn total(&self) -> RGSum {
        total(&self.layers)
    }

    /// The dual structure: contragredient host, reversed layers.
    pub fn dual(&self) -> LayerStructure {
        let mut axioms = self.axioms.clone();
        axioms.push("duality".into());
        LayerStructure {
            host: dual_host(&self.host),
            layers: dualize_layers(&self.layers),
            certificates: self.certificates.clone(),
            axioms,
        }
    }
}

impl Ctx<'_> {
    fn cert(&self, claim: String, expected: u64, computed: Multiplicity) -> Certificate {
        Certificate { claim, expected: ex(expected), computed }
    }

    fn cert_m(&self, t: &GGTerm, host: &GExpr, expected: u64) -> Certificate {
        self.cert(format!("{t} in μ*({host})"), expected, self.m(t, host))
    }

    fn cert_g(&self, atom: &GAtom, host: &GExpr, expected: u64) -> Certificate {
        self.cert(format!("{atom} in {host}"), expected, self.g(atom, host))
    }

    fn cert_unique(&self, ambient: &GExpr, witness: &GGTerm) -> Certificate {
        self.note("frobenius-reciprocity");
        self.cert(format!("{ambient} has a unique subrepresentation ({witness} once)"), 1, self.m(witness, ambient))
    }

    /// Socle `[discrete series]`, middle, top `[Langlands quotient]`.
    fn three_layers(
        &self,
        host: GExpr,
        factors: &RGSum,
        top: &GAtom,
        certificates: Vec<Certificate>,
        axioms: &[&str],
    ) -> TResult<LayerStructure> {
        let mut bottom = RGSum::new();
        let mut mid = RGSum::new();
        let mut up = RGSum::new();
        for (a, &n) in factors.terms() {
            let slot = if a == top {
                &mut up
            } else if a.is_discrete_series() {
                &mut bottom
            } else {
                &mut mid
            };
            slot.add_atom(a.clone(), n);
        }
        self.finish(host, vec![bottom, mid, up], certificates, axioms)
    }

    fn finish(
        &self,
        host: GExpr,
        layers: Vec<RGSum>,
        certificates: Vec<Certificate>,
        axioms: &[&str],
    ) -> TResult<LayerStructure> {
        if let Some(c) = certificates.iter().find(|c| !c.holds()) {
            return Err(match c.computed {
                Multiplicity::Exact(_) => {
                    TheoremError::Identity(format!("{}: {} expected, {} found", c.claim, c.expected, c.computed))
                }
                m => TheoremError::Inconclusive(format!("{}: {m}", c.claim)),
            });
        }
        for a in axioms {
            self.note(a);
        }
        let layers: Vec<RGSum> = layers.into_iter().filter(|l| !l.is_empty()).collect();
        Ok(LayerStructure { host, layers, certificates, axioms: axioms.iter().map(|s| s.to_string()).collect() })
    }

    pub fn layer_structures(&self) -> TResult<BTreeMap<String, LayerStructure>> {
        let t = self.t;
        let mut out = BTreeMap::new();

        // δ([1/2,b])⋊σ⁺_{a,c}
        let kp = t.k1_host(true);
        let both = ind(&[(H, t.b), (H, t.a)], Triple::ds(t.c));
        let certs = vec![
            self.cert_m(&self.carrier_ab_c(), &both, 2),
            self.cert_g(&t.tri_plus(), &ind(&[(-t.a, t.b)], Triple::ds(t.c)), 1),
            self.cert_m(&self.carrier_ds(true), &both, 1),
            self.cert_m(&term(&[(-t.b, t.c)], Triple::l(&[(H, t.a)], GAtom::Cuspidal)), &both, 1),
            self.cert_m(
                &term(&[(-t.b, t.c)], Triple::l(&[(H, t.a)], GAtom::Cuspidal)),
                &ind(&[(H, t.a)], Triple::pm(t.b, t.c, true)),
                1,
            ),
            self.cert_m(
                &term(&[(-t.b, t.c)], Triple::l(&[(H, t.a)], GAtom::Cuspidal)),
                &ind(&[(-t.a, t.b)], Triple::ds(t.c)),
                0,
            ),
        ];
        let f = self.k1_decomposition(true)?;
        let s = self.three_layers(kp, &f, &t.l_half_b_ac(true), certs, &["long-intertwining"])?;
        out.insert("k1-plus-dual".to_string(), s.dual());
        out.insert("k1-plus".to_string(), s);

        // δ([1/2,b])⋊σ⁻_{a,c}
        let km = t.k1_host(false);
        let f = self.k1_decomposition(false)?;
        let s = self.three_layers(km, &f, &t.l_half_b_ac(false), Vec::new(), &[])?;
        out.insert("k1-minus-dual".to_string(), s.dual());
        out.insert("k1-minus".to_string(), s);

        // δ([-c,b])×δ([1/2,a])⋊σ
        let f = self.triple_table("seg-times-strict")?;
        let mut certs =
            vec![self.cert_unique(&ind(&[(-t.c, t.b)], Triple::ds(t.a)), &term(&[(-t.c, t.b)], Triple::ds(t.a)))];
        for plus in [true, false] {
            let base = Triple::pm(t.b, t.c, plus);
            certs.push(self.cert_unique(&ind(&[(-t.a, -H)], base.clone()), &term(&[(-t.a, -H)], base)));
        }
        let bottom = RGSum::from_atoms([t.l_bc_a()]);
        let top = RGSum::from_atoms([t.l_half_a_bc(true), t.l_half_a_bc(false)]);
        let mid = &(&f - &bottom) - &top;
        if mid.has_negative() {
            return Err(TheoremError::Identity("kernel K2 misses a certified layer atom".into()));
        }
        let s = self.finish(t.k2_host(), vec![bottom, mid, top], certs, &["seg-times-strict-layers"])?;
        out.insert("k2-dual".to_string(), s.dual());
        out.insert("k2".to_string(), s);

        // δ([-a,c])⋊σ_b
        let h1 = ind(&[(-t.a, t.c)], Triple::ds(t.b));
        let f = self.triple_table("seg-rtimes-sigma_b")?;
        let big = ind(&[(H, t.c), (H, t.b)], Triple::ds(t.a));
        let small = ind(&[(H, t.c)], Triple::pm(t.a, t.b, true));
        let lbc = term(&[(H, t.a)], Triple::l(&[(-t.b, t.c)], GAtom::Cuspidal));
        let certs = vec![
            self.cert_m(&self.carrier_ds(true), &big, 1),
            self.cert_m(&self.carrier_ds(false), &big, 1),
            self.cert_m(&lbc, &big, 1),
            self.cert_m(&self.carrier_ds(true), &small, 1),
            self.cert_m(&self.carrier_ds(false), &small, 0),
            self.cert_m(&lbc, &small, 1),
        ];
        let s = self.three_layers(h1, &f, &t.l_ac_b(), certs, &["ds-embedding"])?;
        out.insert("k3".to_string(), s.dual());
        out.insert("h1".to_string(), s);
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideCondition {
    pub claim: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Filtration {
    /// `W1 … W4`.
    pub layers: Vec<RGSum>,
    /// `k1, k2, k3`.
    pub k: Vec<RGSum>,
    /// `h1, h2, h3`.
    pub h: Vec<RGSum>,
    pub maximality: Vec<SideCondition>,
}

fn peel(parts: &[RGSum]) -> Vec<RGSum> {
    let mut out: Vec<RGSum> = Vec::new();
    for p in parts {
        let rest = out.iter().fold(p.clone(), |acc, q| &acc - q).floor_plus();
        out.push(rest);
    }
    out
}

impl Ctx<'_> {
    pub fn filtration(&self) -> TResult<Filtration> {
        let t = self.t;
        let ls = self.layer_structures()?;
        let main = self.main_decomposition()?;
        let l_psi = RGSum::from_atoms([t.l_psi()]);
        let k_layers = [
            merge_layers(&ls["k1-plus"].layers, &ls["k1-minus"].layers),
            ls["k2"].layers.clone(),
            ls["k3"].layers.clone(),
        ];
        let h_layers = [
            ls["h1"].layers.clone(),
            ls["k2-dual"].layers.clone(),
            merge_layers(&ls["k1-plus-dual"].layers, &ls["k1-minus-dual"].layers),
        ];
        let k = peel(&k_layers.iter().map(|l| total(l)).collect::<Vec<_>>());
        let h = peel(&h_layers.iter().map(|l| total(l)).collect::<Vec<_>>());
        for (name, parts) in [("k", &k), ("h", &h)] {
            if &total(parts) + &l_psi != main {
                return Err(TheoremError::Identity(format!("ψ = {name}1+{name}2+{name}3+L(ψ)")));
            }
        }

        let mut level: BTreeMap<GAtom, usize> = BTreeMap::new();
        for (i, (small, layers)) in k.iter().zip(&k_layers).enumerate() {
            let kept = layers.iter().map(|l| restrict(l, small)).filter(|l| !l.is_empty());
            for (j, l) in kept.enumerate() {
                for a in l.atoms() {
                    level.entry(a.clone()).or_insert(i + j + 1);
                }
            }
        }
        let mut w = vec![RGSum::new(); 3];
        for (a, &l) in &level {
            let slot = w.get_mut(l - 1).ok_or_else(|| TheoremError::Identity(format!("{a} above level 3")))?;
            slot.add_atom(a.clone(), main.coeff(a));
        }
        let w4 = &main - &total(&w);
        if w4 != l_psi {
            return Err(TheoremError::Identity("ψ = W1+W2+W3+L(ψ)".into()));
        }
        w.push(w4);
        if w.iter().any(RGSum::is_empty) {
            return Err(TheoremError::Identity("every Wi is nonzero".into()));
        }

        let k2_index = |a: &GAtom| ls["k2"].layers.iter().position(|l| l.contains(a)).map(|i| i + 1);
        let k1 = total(&k_layers[0]);
        let mut maximality = Vec::new();
        for a in [t.tri_minus_bca(), t.l_bc_half_a()] {
            maximality.push(SideCondition { claim: format!("{a} is not a factor of K1"), holds: k1.coeff(&a) == 0 });
            maximality.push(SideCondition {
                claim: format!("{a} is not a subrepresentation of K2"),
                holds: k2_index(&a).is_some_and(|i| i > 1),
            });
        }
        Ok(Filtration { layers: w, k, h, maximality })
    }
}

// ---------------------------------------------------------------------------
// Derived table entries.

/// Recomputes a derived table entry from scratch.
pub fn recompute_entry(name: &str, params: &[HalfInt]) -> Result<RGSum, LedgerError> {
    let k = Knowledge::new();
    let incon = |e: TheoremError| LedgerError::Inconclusive { name: name.into(), why: e.to_string() };
    if name == "half-times-half" {
        return half_times_half(&k).map_err(incon);
    }
    let &[a, b, c] = params else {
        return Err(LedgerError::Arity { name: name.into(), expected: 3, got: params.len() });
    };
    let ctx = Ctx::new(Triple::new(a, b, c)?, &k);
    match name {
        "strict-rtimes-plus-upper" => ctx.k1_decomposition(true),
        "strict-rtimes-minus-upper" => ctx.k1_decomposition(false),
        "psi" => ctx.main_decomposition(),
        _ => Err(TheoremError::Inconclusive("no derivation registered".into())),
    }
    .map_err(incon)
}

// ---------------------------------------------------------------------------
// The check registry.

type Outcomes = (CheckValue, TResult<CheckValue>);

pub struct CheckDef {
    pub id: &'static str,
    pub claim: &'static str,
    run: fn(&Ctx) -> Outcomes,
}

fn mults(v: &[u64]) -> CheckValue {
    CheckValue::Mults(v.iter().map(|&n| ex(n)).collect())
}

fn atoms(v: Vec<GAtom>) -> CheckValue {
    CheckValue::Atoms(sorted(v))
}

fn raw(name: &str, t: &Triple) -> RGSum {
    table_value(name, &[t.a, t.b, t.c]).expect("admissible triple")
}

fn c_ds_candidates(c: &Ctx) -> Outcomes {
    let t = c.t;
    c.note("ds-embedding");
    let got = enumerate_ds_candidates(&t, c.k).map(|d| CheckValue::Atoms(d.atoms));
    (atoms(c.ds_atoms().to_vec()), got)
}

fn c_support_counts(c: &Ctx) -> Outcomes {
    let t = c.t;
    let exp = H
        .range_to(t.c)
        .map(|e| {
            if e <= t.a {
                3
            } else if e <= t.b {
                2
            } else {
                1
            }
        })
        .collect();
    let got =
        enumerate_ds_candidates(&t, c.k).map(|d| CheckValue::Counts(d.counts.iter().map(|p| p.1 as u64).collect()));
    (CheckValue::Counts(exp), got)
}

fn c_l42_mult2(c: &Ctx) -> Outcomes {
    let t = c.t;
    let host = ind(&[(H, t.b), (H, t.c)], GAtom::Cuspidal);
    let got =
        vec![c.m(&term(&[(-t.b, t.c)], GAtom::Cuspidal), &host), c.m(&term(&[(-t.c, t.b)], GAtom::Cuspidal), &host)];
    (mults(&[2, 1]), Ok(CheckValue::Mults(got)))
}

fn c_l42_factors(c: &Ctx) -> Outcomes {
    let t = c.t;
    let host = ind(&[(H, t.b), (H, t.c)], GAtom::Cuspidal);
    let got = [Triple::pm(t.b, t.c, true), Triple::pm(t.b, t.c, false), Triple::l(&[(-t.b, t.c)], GAtom::Cuspidal)]
        .iter()
        .map(|a| c.g(a, &host))
        .collect();
    (mults(&[1, 1, 1]), Ok(CheckValue::Mults(got)))
}

fn c_l43(c: &Ctx) -> Outcomes {
    let psi = c.t.psi();
    let got = vec![c.m(&c.carrier_ds(true), &psi), c.m(&c.carrier_ds(false), &psi)];
    (mults(&[1, 1]), Ok(CheckValue::Mults(got)))
}

fn c_l44(c: &Ctx) -> Outcomes {
    let host = c.t.k1_host(true);
    let got = vec![c.m(&c.carrier_ab_c(), &host), c.m(&c.carrier_ds(true), &host), c.m(&c.carrier_ds(false), &host)];
    (mults(&[1, 1, 0]), Ok(CheckValue::Mults(got)))
}

fn c_l45(c: &Ctx) -> Outcomes {
    let host = c.t.k1_host(false);
    let got = vec![c.m(&c.carrier_ab_c(), &host), c.m(&c.carrier_ds(false), &host)];
    (mults(&[0, 0]), Ok(CheckValue::Mults(got)))
}

fn c_p46(c: &Ctx) -> Outcomes {
    let got = c.ds_content().map(|d| CheckValue::Mults(d.psi.iter().chain(&d.plus).chain(&d.minus).copied().collect()));
    (mults(&[1, 1, 0, 1, 0, 0, 0, 0, 0]), got)
}

fn c_l51(c: &Ctx) -> Outcomes {
    let t = c.t;
    let low = (t.a.plus(1), t.b);
    let host = |plus| ind(&[low], Triple::pm(t.a, t.c, plus));
    let cross = |plus| term(&[low], Triple::pm(t.a, t.c, plus));
    let got = vec![
        c.m(&cross(false), &host(true)),
        c.m(&cross(true), &host(false)),
        c.m(&cross(false), &GExpr::atom(Triple::pm(t.b, t.c, false))),
        c.m(&cross(true), &GExpr::atom(Triple::pm(t.b, t.c, true))),
    ];
    let exp = vec![ex(0), ex(0), Multiplicity::AtLeast(1), Multiplicity::AtLeast(1)];
    (CheckValue::Mults(exp), Ok(CheckValue::Mults(got)))
}

fn c_p52(c: &Ctx) -> Outcomes {
    let t = c.t;
    let s = c.enumerate_nontempered(true);
    let got = if s.is_conclusive() {
        Ok(CheckValue::Atoms(s.candidates))
    } else {
        Err(TheoremError::Inconclusive(format!("{:?}", s.branches)))
    };
    (atoms(vec![t.l_half_a_bc(true), t.l_ab_c()]), got)
}

fn c_p53(c: &Ctx) -> Outcomes {
    let t = c.t;
    let s = c.enumerate_nontempered(false);
    let got = if s.is_conclusive() {
        Ok(CheckValue::Atoms(s.candidates))
    } else {
        Err(TheoremError::Inconclusive(format!("{:?}", s.branches)))
    };
    (atoms(vec![t.l_half_a_bc(false)]), got)
}

fn c_p53_pruned(c: &Ctx) -> Outcomes {
    let t = c.t;
    let s = c.enumerate_nontempered(false);
    let pruned = s
        .branches
        .iter()
        .filter(|b| b.case == format!("β1 = {}", t.a))
        .map(|b| matches!(&b.outcome, Outcome::Pruned(r) if r.contains("not defined")))
        .collect();
    (CheckValue::Flags(vec![true]), Ok(CheckValue::Flags(pruned)))
}

fn c_p52_unique(c: &Ctx) -> Outcomes {
    let t = c.t;
    let s1 = Triple::ds(t.c);
    let mut got = Vec::new();
    let alphas: Vec<HalfInt> = t.a.plus(1).range_to(t.b).filter(|&x| x < t.b).collect();
    for &alpha in &alphas {
        let ambient = ind(&[(-alpha, t.a), (-t.b, -alpha.plus(1))], s1.clone());
        let witness = GGTerm::new(gl(&[(-alpha, t.a)]), ind(&[(-t.b, -alpha.plus(1))], s1.clone()));
        c.note("frobenius-reciprocity");
        match unique_sub_check(&ambient, &witness, c.k) {
            Ok(b) => got.push(b),
            Err(e) => return (CheckValue::Flags(vec![true; alphas.len()]), Err(e)),
        }
    }
    (CheckValue::Flags(vec![true; alphas.len()]), Ok(CheckValue::Flags(got)))
}

fn c_l61_pair(c: &Ctx) -> Outcomes {
    let t = c.t;
    let host = ind(&[(t.a.plus(1), t.b), (-t.a, t.c)], GAtom::Cuspidal);
    let w = term(&[(t.a.plus(1), t.b), (-t.a, t.c)], GAtom::Cuspidal);
    let got = vec![c.g(&Triple::pm(t.b, t.c, true), &host), c.g(&Triple::pm(t.b, t.c, false), &host), c.m(&w, &host)];
    (mults(&[1, 1, 2]), Ok(CheckValue::Mults(got)))
}

fn c_l61_sign(c: &Ctx) -> Outcomes {
    let t = c.t;
    let host = |plus| ind(&[(t.a.plus(1), t.b)], Triple::pm(t.a, t.c, plus));
    let got = vec![
        c.g(&Triple::pm(t.b, t.c, true), &host(true)),
        c.g(&Triple::pm(t.b, t.c, false), &host(true)),
        c.g(&Triple::pm(t.b, t.c, false), &host(false)),
        c.g(&Triple::pm(t.b, t.c, true), &host(false)),
    ];
    (mults(&[1, 0, 1, 0]), Ok(CheckValue::Mults(got)))
}

fn c_l62(c: &Ctx) -> Outcomes {
    let t = c.t;
    let psi = t.psi();
    let got = [true, false].iter().map(|&p| c.m(&term(&[(-t.a, -H)], Triple::pm(t.b, t.c, p)), &psi)).collect();
    (mults(&[1, 1]), Ok(CheckValue::Mults(got)))
}

fn c_l63(c: &Ctx) -> Outcomes {
    let t = c.t;
    let got =
        [true, false].iter().map(|&p| c.m(&term(&[(-t.a, -H)], Triple::pm(t.b, t.c, p)), &t.k1_host(p))).collect();
    (mults(&[1, 1]), Ok(CheckValue::Mults(got)))
}

fn c_p64(c: &Ctx) -> Outcomes {
    let got = (|| {
        let (p0, p1) = c.l_half_a(true)?;
        let (m0, m1) = c.l_half_a(false)?;
        Ok(CheckValue::Mults(vec![p0, p1, m0, m1]))
    })();
    (mults(&[1, 1, 1, 1]), got)
}

fn lp_half() -> GLProduct {
    GLProduct::new([GLIrrep::pair(seg(-H, -H), seg(H, H)).expect("linked")])
}

fn c_l71_carrier(c: &Ctx) -> Outcomes {
    let t = GGTerm::of_atom(lp_half(), GAtom::Cuspidal);
    c.note("unitarity-half");
    let got = vec![c.m(&t, &ind(&[(H, H), (H, H)], GAtom::Cuspidal)), c.m(&t, &ind(&[(-H, H)], GAtom::Cuspidal))];
    (mults(&[2, 0]), Ok(CheckValue::Mults(got)))
}

fn c_l71_factors(c: &Ctx) -> Outcomes {
    c.note("unitarity-half");
    let exp = table_value("half-times-half", &[]).expect("no parameters");
    (CheckValue::Sum(exp), half_times_half(c.k).map(CheckValue::Sum))
}

fn c_l72(c: &Ctx) -> Outcomes {
    let t = c.t;
    let d = (H.plus(1), t.b);
    let pi = term(&[d, d], Triple::l(&[(H, H)], Triple::ds(H)));
    let two = ind(&[(H, t.b), (H, t.b)], GAtom::Cuspidal);
    c.note("unitarity-half");
    let got = vec![
        c.m(&pi, &ind(&[(H, t.b)], Triple::ds(t.b))),
        c.m(&pi, &ind(&[(-t.b, t.b)], GAtom::Cuspidal)),
        c.m(&pi, &two),
        c.g(&Triple::l(&[(H, t.b)], Triple::ds(t.b)), &two),
    ];
    (CheckValue::Mults(vec![Multiplicity::AtLeast(1), ex(0), ex(1), ex(1)]), Ok(CheckValue::Mults(got)))
}

fn c_l72b(c: &Ctx) -> Outcomes {
    let t = c.t;
    let xi = term(&[(t.b.plus(1), t.c)], Triple::l(&[(H, t.b)], Triple::ds(t.b)));
    let host = ind(&[(H, t.c), (H, t.b)], GAtom::Cuspidal);
    let got = vec![
        c.m(&xi, &ind(&[(H, t.b)], Triple::ds(t.c))),
        c.m(&xi, &ind(&[(-t.b, t.c)], GAtom::Cuspidal)),
        c.m(&xi, &host),
        c.g(&Triple::l(&[(H, t.b)], Triple::ds(t.c)), &host),
    ];
    (CheckValue::Mults(vec![Multiplicity::AtLeast(1), ex(0), ex(1), ex(1)]), Ok(CheckValue::Mults(got)))
}

fn pi_ab_c(t: &Triple) -> GGTerm {
    term(&[(H, t.a)], Triple::l(&[(H, t.b)], Triple::ds(t.c)))
}

fn c_l73(c: &Ctx) -> Outcomes {
    let t = c.t;
    let m = c.m(&pi_ab_c(&t), &ind(&[(-t.a, t.b)], Triple::ds(t.c)));
    let mut word = seg(H, t.a).decreasing_word();
    word.extend(seg(-t.b, -H).decreasing_word());
    word.extend(seg(H, t.c).decreasing_word());
    c.note("casselman-criterion");
    let exp =
        CheckValue::Tuple(vec![CheckValue::Mults(vec![Multiplicity::AtLeast(1)]), CheckValue::Flags(vec![false])]);
    let got = CheckValue::Tuple(vec![CheckValue::Mults(vec![m]), CheckValue::Flags(vec![casselman_positive(&word)])]);
    (exp, Ok(got))
}

fn c_l74(c: &Ctx) -> Outcomes {
    let t = c.t;
    (CheckValue::Mult(ex(1)), Ok(CheckValue::Mult(c.m(&pi_ab_c(&t), &t.psi()))))
}

fn c_l75(c: &Ctx) -> Outcomes {
    let t = c.t;
    (CheckValue::Mult(ex(1)), Ok(CheckValue::Mult(c.m(&pi_ab_c(&t), &t.k1_host(true)))))
}

fn c_p77(c: &Ctx) -> Outcomes {
    (mults(&[1, 1]), c.l_ab_c().map(|(x, y)| CheckValue::Mults(vec![x, y])))
}

fn pi_bc_a(t: &Triple) -> GGTerm {
    term(&[(H, t.a)], Triple::l(&[(-t.b, t.c)], GAtom::Cuspidal))
}

fn c_l81(c: &Ctx) -> Outcomes {
    let t = c.t;
    let pi = pi_bc_a(&t);
    let got = vec![
        c.m(&pi, &ind(&[(-t.b, t.c)], Triple::ds(t.a))),
        c.m(&pi, &ind(&[(H, t.a)], Triple::pm(t.b, t.c, true))),
        c.m(&pi, &ind(&[(H, t.a)], Triple::pm(t.b, t.c, false))),
    ];
    (CheckValue::Mults(vec![Multiplicity::AtLeast(1), ex(0), ex(0)]), Ok(CheckValue::Mults(got)))
}

fn c_p82(c: &Ctx) -> Outcomes {
    let t = c.t;
    let got = c.l_bc_a().map(|m| CheckValue::Mults(vec![c.m(&pi_bc_a(&t), &t.psi()), m]));
    (mults(&[1, 1]), got)
}

fn c_p91(c: &Ctx) -> Outcomes {
    let exp = raw("strict-rtimes-plus-upper", &c.t);
    (CheckValue::Sum(exp), c.k1_decomposition(true).map(CheckValue::Sum))
}

fn c_p92(c: &Ctx) -> Outcomes {
    let exp = raw("strict-rtimes-minus-upper", &c.t);
    (CheckValue::Sum(exp), c.k1_decomposition(false).map(CheckValue::Sum))
}

fn c_t93(c: &Ctx) -> Outcomes {
    let exp = raw("psi", &c.t);
    (CheckValue::Sum(exp), c.main_decomposition().map(CheckValue::Sum))
}

/// Atoms with coefficient at least 2 in `K1+K2+K3`.
pub fn overlap_atoms(kern: &Kernels) -> Vec<GAtom> {
    let all = total(&kern.k);
    all.terms().iter().filter(|(_, &n)| n >= 2).map(|(a, _)| a.clone()).collect()
}

fn c_sandwich(c: &Ctx) -> Outcomes {
    let t = c.t;
    let exp = CheckValue::Tuple(vec![
        CheckValue::Flags(vec![true; 8]),
        atoms(vec![t.l_half_a_bc(true), t.l_half_a_bc(false), t.l_ab_c(), t.l_bc_a()]),
    ]);
    let got = (|| {
        let kern = c.kernel_ledgers()?;
        let main = c.main_decomposition()?;
        let l_psi = t.l_psi();
        let upper = &total(&kern.k) + &RGSum::from_atoms([l_psi.clone()]);
        let mut flags: Vec<bool> = kern.k.iter().map(|k| k.leq(&main)).collect();
        flags.push(main.leq(&upper));
        flags.push(kern.k.iter().all(|k| !k.contains(&l_psi)));
        flags.extend((0..3).map(|i| kern.h[i] == kern.k[2 - i]));
        let shared: Vec<GAtom> =
            overlap_atoms(&kern).into_iter().filter(|a| matches!(a, GAtom::Langlands { .. })).collect();
        Ok(CheckValue::Tuple(vec![CheckValue::Flags(flags), CheckValue::Atoms(shared)]))
    })();
    (exp, got)
}

fn c_sizes(c: &Ctx) -> Outcomes {
    let got = c.kernel_ledgers().map(|k| CheckValue::Counts(k.k.iter().map(|s| s.len() as u64).collect()));
    (CheckValue::Counts(vec![6, 6, 4]), got)
}

fn c_ds_exclusion(c: &Ctx) -> Outcomes {
    let t = c.t;
    let sma = t.tri_minus_abc();
    let got = (|| {
        let main = c.main_decomposition()?;
        let tab = c.triple_table("seg-rtimes-sigma_c")?;
        Ok(CheckValue::Mults(vec![ex(main.coeff(&sma) as u64), ex(tab.coeff(&sma) as u64)]))
    })();
    (mults(&[0, 1]), got)
}

fn c_l101(c: &Ctx) -> Outcomes {
    let t = c.t;
    let host = ind(&[(H, t.b), (H, t.a)], Triple::ds(t.c));
    (CheckValue::Mult(ex(2)), Ok(CheckValue::Mult(c.m(&c.carrier_ab_c(), &host))))
}

fn structure(c: &Ctx, names: &[&str]) -> TResult<CheckValue> {
    let ls = c.layer_structures()?;
    let mut parts: Vec<CheckValue> = names.iter().map(|n| CheckValue::Layers(ls[*n].layers.clone())).collect();
    let dual_ok = names.iter().all(|n| {
        let d = ls.iter().find(|(k, _)| **k == format!("{n}-dual") || (*n == "h1" && *k == "k3")).map(|p| p.1);
        d.is_some_and(|d| d.layers == dualize_layers(&ls[*n].layers))
    });
    let totals_ok = names.iter().all(|n| ls[*n].layers.iter().all(|l| !l.has_negative()));
    parts.push(CheckValue::Flags(vec![dual_ok, totals_ok]));
    Ok(CheckValue::Tuple(parts))
}

fn layers(v: Vec<Vec<GAtom>>) -> CheckValue {
    CheckValue::Layers(v.into_iter().map(RGSum::from_atoms).collect())
}

fn c_p10(c: &Ctx) -> Outcomes {
    let t = c.t;
    let exp = CheckValue::Tuple(vec![
        layers(vec![vec![t.tri_plus()], vec![t.l_half_a_bc(true), t.l_ab_c()], vec![t.l_half_b_ac(true)]]),
        layers(vec![vec![t.l_half_a_bc(false)], vec![t.l_half_b_ac(false)]]),
        CheckValue::Flags(vec![true, true]),
    ]);
    (exp, structure(c, &["k1-plus", "k1-minus"]))
}

fn c_p11(c: &Ctx) -> Outcomes {
    let t = c.t;
    let exp = CheckValue::Tuple(vec![
        layers(vec![
            vec![t.l_bc_a()],
            vec![t.tri_plus(), t.l_bc_half_a(), t.tri_minus_bca()],
            vec![t.l_half_a_bc(true), t.l_half_a_bc(false)],
        ]),
        CheckValue::Flags(vec![true, true]),
    ]);
    (exp, structure(c, &["k2"]))
}

fn c_p12(c: &Ctx) -> Outcomes {
    let t = c.t;
    let exp = CheckValue::Tuple(vec![
        layers(vec![vec![t.tri_plus()], vec![t.l_bc_a(), t.l_ab_c()], vec![t.l_ac_b()]]),
        CheckValue::Flags(vec![true, true]),
    ]);
    (exp, structure(c, &["h1"]))
}

fn c_t13(c: &Ctx) -> Outcomes {
    let t = c.t;
    let exp = CheckValue::Tuple(vec![
        layers(vec![
            vec![t.tri_plus(), t.l_half_a_bc(false)],
            vec![t.l_half_a_bc(true), t.l_ab_c(), t.l_half_b_ac(false), t.l_bc_a()],
            vec![t.l_half_b_ac(true), t.l_bc_half_a(), t.tri_minus_bca(), t.l_ac_b()],
            vec![t.l_psi()],
        ]),
        CheckValue::Flags(vec![true; 4]),
    ]);
    let got = c.filtration().map(|f| {
        CheckValue::Tuple(vec![
            CheckValue::Layers(f.layers),
            CheckValue::Flags(f.maximality.iter().map(|s| s.holds).collect()),
        ])
    });
    (exp, got)
}

pub static REGISTRY: &[CheckDef] = &[
    CheckDef {
        id: "C-ds-exclusion",
        claim: "σ⁻_{a,b,c} is absent from ψ but occurs once in δ([-a,b])⋊σ_c",
        run: c_ds_exclusion,
    },
    CheckDef {
        id: "K-sandwich",
        claim: "K_i ≤ ψ ≤ K1+K2+K3+L(ψ), H_i = K_{4-i}, and the shared Langlands quotients",
        run: c_sandwich,
    },
    CheckDef { id: "K-sizes", claim: "the kernels have 6, 6 and 4 factors", run: c_sizes },
    CheckDef {
        id: "L10.1-mult2", claim: "δ([-a,b])⊗σ_c occurs twice in μ*(δ([1/2,b])×δ([1/2,a])⋊σ_c)", run: c_l101
    },
    CheckDef {
        id: "L4.1-ds-candidates",
        claim: "the discrete series candidates of ψ are the three triple atoms",
        run: c_ds_candidates,
    },
    CheckDef {
        id: "L4.1-support-counts",
        claim: "ν^±x occurs 3, 2, 1 times in the support of ψ for x ≤ a, ≤ b, ≤ c",
        run: c_support_counts,
    },
    CheckDef {
        id: "L4.2-factors",
        claim: "σ^±_{b,c} and L(δ([-b,c]);σ) occur once in δ([1/2,b])×δ([1/2,c])⋊σ",
        run: c_l42_factors,
    },
    CheckDef {
        id: "L4.2-mult2",
        claim: "δ([-b,c])⊗σ twice and δ([-c,b])⊗σ once in μ*(δ([1/2,b])×δ([1/2,c])⋊σ)",
        run: c_l42_mult2,
    },
    CheckDef { id: "L4.3-pm", claim: "δ([1/2,a])⊗σ^±_{b,c} occur once each in μ*(ψ)", run: c_l43 },
    CheckDef {
        id: "L4.4-plus-host",
        claim: "μ*(δ([1/2,b])⋊σ⁺_{a,c}): δ([-a,b])⊗σ_c once, δ([1/2,a])⊗σ⁺_{b,c} once, δ([1/2,a])⊗σ⁻_{b,c} never",
        run: c_l44,
    },
    CheckDef {
        id: "L4.5-neg-zero",
        claim: "μ*(δ([1/2,b])⋊σ⁻_{a,c}) has neither δ([-a,b])⊗σ_c nor δ([1/2,a])⊗σ⁻_{b,c}",
        run: c_l45,
    },
    CheckDef {
        id: "L5.1-sign-preservation", claim: "σ^∓_{b,c} is not a factor of δ([a+1,b])⋊σ^±_{a,c}", run: c_l51
    },
    CheckDef { id: "L6.1-pair", claim: "σ^±_{b,c} occur once in δ([a+1,b])×δ([-a,c])⋊σ", run: c_l61_pair },
    CheckDef {
        id: "L6.1-sign",
        claim: "δ([a+1,b])⋊σ^ε_{a,c} contains σ^ε_{b,c} once and σ^-ε_{b,c} never",
        run: c_l61_sign,
    },
    CheckDef { id: "L6.2-jacq-psi", claim: "δ([-a,-1/2])⊗σ^±_{b,c} occur once in μ*(ψ)", run: c_l62 },
    CheckDef {
        id: "L6.3-jacq-kernel",
        claim: "δ([-a,-1/2])⊗σ^ε_{b,c} occurs once in μ*(δ([1/2,b])⋊σ^ε_{a,c})",
        run: c_l63,
    },
    CheckDef {
        id: "L7.1-carrier",
        claim: "L(ν^-1/2,ν^1/2)⊗σ occurs twice in μ*(ν^1/2×ν^1/2⋊σ), never in μ*(δ([-1/2,1/2])⋊σ)",
        run: c_l71_carrier,
    },
    CheckDef {
        id: "L7.1-factors",
        claim: "ν^1/2×ν^1/2⋊σ = σ^±_{1/2,1/2} + L(ν^1/2;σ_1/2) + L(ν^1/2,ν^1/2;σ)",
        run: c_l71_factors,
    },
    CheckDef {
        id: "L7.2-mult-one", claim: "L(δ([1/2,b]);σ_b) occurs once in δ([1/2,b])×δ([1/2,b])⋊σ", run: c_l72
    },
    CheckDef {
        id: "L7.2b-mult-one", claim: "L(δ([1/2,b]);σ_c) occurs once in δ([1/2,c])×δ([1/2,b])⋊σ", run: c_l72b
    },
    CheckDef {
        id: "L7.3-hook",
        claim: "δ([1/2,a])⊗L(δ([1/2,b]);σ_c) lies in μ*(δ([-a,b])⋊σ_c) and fails the square-integrability test",
        run: c_l73,
    },
    CheckDef { id: "L7.4-mult-psi", claim: "δ([1/2,a])⊗L(δ([1/2,b]);σ_c) occurs once in μ*(ψ)", run: c_l74 },
    CheckDef {
        id: "L7.5-mult-kernel",
        claim: "δ([1/2,a])⊗L(δ([1/2,b]);σ_c) occurs once in μ*(δ([1/2,b])⋊σ⁺_{a,c})",
        run: c_l75,
    },
    CheckDef {
        id: "L8.1-hook",
        claim: "δ([1/2,a])⊗L(δ([-b,c]);σ) lies in μ*(δ([-b,c])⋊σ_a) but not in μ*(δ([1/2,a])⋊σ^±_{b,c})",
        run: c_l81,
    },
    CheckDef { id: "P10-layers", claim: "layers of δ([1/2,b])⋊σ^±_{a,c} and their duals", run: c_p10 },
    CheckDef { id: "P11-layers", claim: "layers of δ([-c,b])×δ([1/2,a])⋊σ and its dual", run: c_p11 },
    CheckDef { id: "P12-layers", claim: "layers of δ([-a,c])⋊σ_b and its dual", run: c_p12 },
    CheckDef {
        id: "P4.6-ds", claim: "discrete series multiplicities in ψ and in δ([1/2,b])⋊σ^±_{a,c}", run: c_p46
    },
    CheckDef {
        id: "P5.2-candidates",
        claim: "non-tempered factors of δ([1/2,b])⋊σ⁺_{a,c} below the Langlands quotient",
        run: c_p52,
    },
    CheckDef {
        id: "P5.2-unique-sub",
        claim: "δ([-α,a])×δ([-b,-α-1])⋊σ_c has a unique subrepresentation for a < α < b",
        run: c_p52_unique,
    },
    CheckDef {
        id: "P5.3-branch-pruned",
        claim: "the branch β1 = a is empty for δ([1/2,b])⋊σ⁻_{a,c}",
        run: c_p53_pruned,
    },
    CheckDef {
        id: "P5.3-candidates",
        claim: "non-tempered factors of δ([1/2,b])⋊σ⁻_{a,c} below the Langlands quotient",
        run: c_p53,
    },
    CheckDef {
        id: "P6.4-mult-one",
        claim: "L(δ([1/2,a])⋊σ^±_{b,c}) occur once in ψ and in δ([1/2,b])⋊σ^±_{a,c}",
        run: c_p64,
    },
    CheckDef {
        id: "P7.7-mult-one", claim: "L(δ([-a,b])⋊σ_c) occurs once in ψ and in δ([1/2,b])⋊σ⁺_{a,c}", run: c_p77
    },
    CheckDef { id: "P8.2-mult-one", claim: "L(δ([-b,c])⋊σ_a) occurs once in ψ", run: c_p82 },
    CheckDef { id: "P9.1-factors", claim: "composition factors of δ([1/2,b])⋊σ⁺_{a,c}", run: c_p91 },
    CheckDef { id: "P9.2-factors", claim: "composition factors of δ([1/2,b])⋊σ⁻_{a,c}", run: c_p92 },
    CheckDef {
        id: "T13-filtration", claim: "ψ has a filtration with subquotients W1 … W4 and maximal W1", run: c_t13
    },
    CheckDef { id: "T9.3-main", claim: "ψ has eleven composition factors, each once", run: c_t93 },
];

pub fn check_ids() -> Vec<&'static str> {
    REGISTRY.iter().map(|d| d.id).collect()
}

fn find_check(id: &str) -> TResult<&'static CheckDef> {
    REGISTRY
        .iter()
        .find(|d| d.id == id)
        .ok_or_else(|| TheoremError::UnknownCheck { id: id.into(), known: check_ids().join(", ") })
}

fn run_def(def: &CheckDef, t: Triple, k: &Knowledge) -> CheckResult {
    let ctx = Ctx::new(t, k);
    let (expected, got) = (def.run)(&ctx);
    let computed = got.unwrap_or_else(|e| CheckValue::Inconclusive(e.to_string()));
    let status = compare(&expected, &computed);
    CheckResult {
        id: def.id.to_string(),
        claim: def.claim.to_string(),
        params: t.into(),
        expected,
        computed,
        status,
        rests_on: ctx.sources(),
    }
}

pub fn verify_lemma(id: &str, t: Triple) -> TResult<CheckResult> {
    let def = find_check(id)?;
    Ok(run_def(def, t, &Knowledge::new()))
}

/// Runs the registry (or the listed ids) on one triple, sorted by id.
pub fn run_checks(t: Triple, only: Option<&[String]>) -> TResult<Vec<CheckResult>> {
    let defs: Vec<&CheckDef> = match only {
        Some(ids) => ids.iter().map(|id| find_check(id)).collect::<TResult<_>>()?,
        None => REGISTRY.iter().collect(),
    };
    let k = Knowledge::new();
    let mut out: Vec<CheckResult> = defs.into_iter().map(|d| run_def(d, t, &k)).collect();
    out.sort_by(|x, y| x.id.cmp(&y.id));
    out.dedup_by(|x, y| x.id == y.id);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> Triple {
        Triple::from_twice(1, 3, 5).unwrap()
    }

    #[test]
    fn unique_sub_examples() {
        let k = Knowledge::new();
        let nu = ind(&[(H, H)], GAtom::Cuspidal);
        assert!(unique_sub_check(&nu, &term(&[(H, H)], GAtom::Cuspidal), &k).unwrap());
        let d = ind(&[(-H, H)], GAtom::Cuspidal);
        assert!(!unique_sub_check(&d, &term(&[(-H, H)], GAtom::Cuspidal), &k).unwrap());
    }

    #[test]
    fn mult_status_rules() {
        use Multiplicity::*;
        assert_eq!(mult_status(Exact(1), Exact(1)), Status::Pass);
        assert_eq!(mult_status(Exact(1), Exact(2)), Status::Fail);
        assert_eq!(mult_status(Exact(2), AtLeast(1)), Status::Partial);
        assert_eq!(mult_status(Exact(1), AtLeast(2)), Status::Fail);
        assert_eq!(mult_status(AtLeast(1), Exact(3)), Status::Pass);
        assert_eq!(mult_status(AtLeast(1), Exact(0)), Status::Fail);
        assert_eq!(mult_status(Exact(0), Unknown), Status::Partial);
    }

    #[test]
    fn registry_ids_unique_and_sorted() {
        let ids = check_ids();
        let mut s = ids.clone();
        s.sort();
        s.dedup();
        assert_eq!(s, ids);
        assert!(ids.len() >= 20);
        assert!(matches!(verify_lemma("nope", t()), Err(TheoremError::UnknownCheck { .. })));
    }

    #[test]
    fn check_value_json_round_trip() {
        let v = CheckValue::Tuple(vec![
            CheckValue::Mult(Multiplicity::AtLeast(1)),
            CheckValue::Atoms(vec![t().tri_plus()]),
        ]);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(serde_json::from_str::<CheckValue>(&s).unwrap(), v);
    }
}
