//! Strategies and property bodies shared by the property suite and the
//! acceptance harness.
#![allow(dead_code)]

use jmcalc::atoms::{dualize_layers, GAtom, RGSum};
use jmcalc::gl::{pair_decompose, GLIrrep};
use jmcalc::ledger::{floor_plus, leq, Triple};
use jmcalc::mustar::{mu_star_atom, mu_star_induced, GExpr};
use jmcalc::segments::{make_segment, HalfInt, Segment};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub fn h(twice: i64) -> HalfInt {
    HalfInt::from_twice(twice)
}

pub fn s(x: i64, y: i64) -> Segment {
    make_segment(h(x), h(y)).unwrap()
}

/// Nonempty segment with lower end in [-9/2, 9/2] and at most `max_len` points.
pub fn segment(max_len: i64) -> impl Strategy<Value = Segment> {
    (-5i64..=4, 0..max_len).prop_map(|(k, n)| {
        let lo = 2 * k + 1;
        s(lo, lo + 2 * n)
    })
}

pub fn base_atom() -> impl Strategy<Value = GAtom> {
    prop_oneof![
        Just(GAtom::Cuspidal),
        (0i64..4).prop_map(|k| GAtom::StrictDS { a: h(2 * k + 1) }),
        (0i64..3, 1i64..3).prop_map(|(k, d)| GAtom::seg_plus(h(-(2 * k + 1)), h(2 * (k + d) + 1)).unwrap()),
        (0i64..3, 1i64..3).prop_map(|(k, d)| GAtom::seg_minus(h(-(2 * k + 1)), h(2 * (k + d) + 1)).unwrap()),
    ]
}

fn atom_pool() -> Vec<GAtom> {
    let t = Triple::from_twice(1, 3, 5).unwrap();
    vec![
        GAtom::Cuspidal,
        GAtom::StrictDS { a: h(3) },
        t.tri_plus(),
        t.tri_minus_bca(),
        t.tri_minus_abc(),
        t.l_psi(),
        t.l_ab_c(),
        t.l_bc_a(),
    ]
}

pub fn rg_sum() -> impl Strategy<Value = RGSum> {
    prop::collection::vec((0usize..8, -3i64..=3), 0..6).prop_map(|v| {
        let pool = atom_pool();
        let mut s = RGSum::new();
        for (i, n) in v {
            s.add_atom(pool[i].clone(), n);
        }
        s
    })
}

pub fn nonneg_sum() -> impl Strategy<Value = RGSum> {
    rg_sum().prop_map(|s| floor_plus(&s))
}

pub fn layers() -> impl Strategy<Value = Vec<RGSum>> {
    prop::collection::vec(nonneg_sum(), 0..5)
}

/// Induced expression over σ with at most four exponents in total.
pub fn small_induced() -> impl Strategy<Value = GExpr> {
    prop::collection::vec(segment(4), 1..=4)
        .prop_filter("at most four exponents", |v| v.iter().map(Segment::cardinality).sum::<usize>() <= 4)
        .prop_map(|v| GExpr::induced(v, GAtom::Cuspidal))
}

pub fn support_conserved(d: Segment, pi: &GAtom) -> Result<(), TestCaseError> {
    let m = mu_star_induced(d, &mu_star_atom(pi).unwrap());
    let want = d.support().union(&pi.cusp_support()).folded();
    for t in m.terms().keys() {
        let got = t.gl.support().union(&t.g.folded_support()).folded();
        prop_assert_eq!(&got, &want, "term {}", t);
    }
    Ok(())
}

pub fn floor_plus_laws(x: &RGSum) -> Result<(), TestCaseError> {
    let f = floor_plus(x);
    prop_assert_eq!(floor_plus(&f), f.clone());
    prop_assert!(leq(x, &f));
    prop_assert_eq!(leq(&f, x), !x.has_negative());
    Ok(())
}

pub fn order_laws(x: &RGSum, y: &RGSum, z: &RGSum) -> Result<(), TestCaseError> {
    prop_assert!(leq(x, x));
    if leq(x, y) && leq(y, x) {
        prop_assert_eq!(x, y);
    }
    if leq(x, y) && leq(y, z) {
        prop_assert!(leq(x, z));
    }
    prop_assert!(leq(x, &(x + y)));
    Ok(())
}

pub fn exchange_rule_laws(d1: Segment, d2: Segment) -> Result<(), TestCaseError> {
    let out = pair_decompose(&GLIrrep::delta(d1), &GLIrrep::delta(d2)).unwrap();
    let want = d1.support().union(&d2.support());
    for (p, &n) in out.terms() {
        prop_assert_eq!(n, 1);
        prop_assert_eq!(p.support(), want.clone());
    }
    prop_assert_eq!(out.len(), if d1.is_linked(&d2) { 2 } else { 1 });
    Ok(())
}

pub fn dualize_involution(layers: &[RGSum]) -> Result<(), TestCaseError> {
    prop_assert_eq!(dualize_layers(&dualize_layers(layers)), layers.to_vec());
    Ok(())
}

/// Checks the sign table of the three triple atoms and that their Jordan
/// data are pairwise distinct.
pub fn triple_signs(t: Triple) -> Result<(), String> {
    let j = |x: HalfInt| (x.twice() + 1) as u32;
    let table = [(t.tri_plus(), [1, 1, 1]), (t.tri_minus_bca(), [1, -1, -1]), (t.tri_minus_abc(), [-1, -1, 1])];
    let mut seen = Vec::new();
    for (atom, signs) in table {
        let jd = atom.jordan().map_err(|e| e.to_string())?;
        let got = [jd.eps[&j(t.a)], jd.eps[&j(t.b)], jd.eps[&j(t.c)]];
        if got != signs {
            return Err(format!("{atom} at {t}: signs {got:?}, want {signs:?}"));
        }
        if seen.contains(&jd) {
            return Err(format!("{atom} repeats Jordan data at {t}"));
        }
        seen.push(jd);
    }
    Ok(())
}
