//! Worked values for each layer, from single segments up to the filtration.

use jmcalc::atoms::{classify_seg_induced, jordan_of, GAtom, RGSum};
use jmcalc::gl::{comult_delta, contains_gl, pair_decompose, GLIrrep, GLProduct, Multiplicity};
use jmcalc::ledger::{decomposition_of, floor_plus, sub, Knowledge, Provenance, Triple, TABLE};
use jmcalc::mustar::{
    casselman_positive, minimal_jacquet_oracle, minimal_words_structural, mu_star_atom, mu_star_induced,
    multiplicity_of, GExpr, GGTerm,
};
use jmcalc::segments::{make_segment, CuspSupport, HalfInt, Segment};
use jmcalc::theorems::{enumerate_ds_candidates, unique_sub_check, Ctx, Outcome};
use num_rational::Ratio;

fn h(twice: i64) -> HalfInt {
    HalfInt::from_twice(twice)
}

fn s(x: i64, y: i64) -> Segment {
    make_segment(h(x), h(y)).unwrap()
}

fn first() -> Triple {
    Triple::from_twice(1, 3, 5).unwrap()
}

fn sigma() -> GAtom {
    GAtom::Cuspidal
}

// Segments.

#[test]
fn segment_basics() {
    let d = s(-1, 5);
    assert_eq!(d.cardinality(), 4);
    assert_eq!(d.support(), CuspSupport::from_exps([h(-1), h(1), h(3), h(5)]));
    assert_eq!(d.e_center().unwrap(), Ratio::new(1, 1));
    assert_eq!(s(1, 3).contragredient(), s(-3, -1));
    assert!(Segment::EMPTY.support().is_empty());
    assert!(s(1, 3).is_linked(&s(5, 5)));
    assert!(!s(1, 5).is_linked(&s(3, 3)));
    assert_eq!(s(1, 3).union(&s(3, 5)).unwrap(), s(1, 5));
    assert_eq!(s(1, 3).intersection(&s(3, 5)), s(3, 3));
}

// General linear side.

#[test]
fn exchange_rule_on_half_points() {
    let out = pair_decompose(&GLIrrep::delta(s(-1, -1)), &GLIrrep::delta(s(1, 1))).unwrap();
    assert_eq!(out.len(), 2);
    assert_eq!(out.terms()[&GLProduct::from_segments([s(-1, 1)])], 1);
    assert_eq!(out.terms()[&GLProduct::new([GLIrrep::pair(s(-1, -1), s(1, 1)).unwrap()])], 1);
}

#[test]
fn exchange_rule_adjacent() {
    let out = pair_decompose(&GLIrrep::delta(s(1, 3)), &GLIrrep::delta(s(5, 5))).unwrap();
    assert_eq!(out.len(), 2);
    assert_eq!(out.terms()[&GLProduct::from_segments([s(1, 5)])], 1);
    assert_eq!(out.terms()[&GLProduct::new([GLIrrep::pair(s(1, 3), s(5, 5)).unwrap()])], 1);
}

#[test]
fn delta_inside_point_product() {
    let target = GLProduct::from_segments([s(-1, 1)]);
    let ambient = GLProduct::from_segments([s(1, 1), s(-1, -1)]);
    assert_eq!(contains_gl(&target, &ambient), Multiplicity::Exact(1));
}

#[test]
fn delta_comultiplication() {
    assert_eq!(comult_delta(&s(1, 3)), vec![(s(1, 3), Segment::EMPTY), (s(3, 3), s(1, 1)), (Segment::EMPTY, s(1, 3))]);
    assert_eq!(comult_delta(&s(5, 5)).len(), 2);
    assert_eq!(comult_delta(&Segment::EMPTY), vec![(Segment::EMPTY, Segment::EMPTY)]);
}

// Classical group atoms.

#[test]
fn segment_over_cuspidal() {
    let irreducible = classify_seg_induced(h(3), h(5)).unwrap();
    assert_eq!(irreducible, RGSum::from_atoms([Triple::l(&[(h(3), h(5))], sigma())]));

    let strict = classify_seg_induced(h(1), h(5)).unwrap();
    assert_eq!(strict, RGSum::from_atoms([GAtom::StrictDS { a: h(5) }, Triple::l(&[(h(1), h(5))], sigma())]));

    let long = classify_seg_induced(h(-3), h(5)).unwrap();
    assert_eq!(
        long,
        RGSum::from_atoms([
            GAtom::seg_plus(h(-3), h(5)).unwrap(),
            GAtom::seg_minus(h(-3), h(5)).unwrap(),
            Triple::l(&[(h(-3), h(5))], sigma()),
        ])
    );
}

#[test]
fn jordan_signs() {
    let strict = jordan_of(&GAtom::StrictDS { a: h(1) }).unwrap();
    assert_eq!(strict.eps[&2], 1);

    let minus = jordan_of(&GAtom::seg_minus(h(-3), h(5)).unwrap()).unwrap();
    assert_eq!((minus.eps[&4], minus.eps[&6]), (-1, -1));

    let t = first();
    let abc = jordan_of(&t.tri_minus_abc()).unwrap();
    assert_eq!((abc.eps[&2], abc.eps[&4], abc.eps[&6]), (-1, -1, 1));
}

#[test]
fn duality_fixes_irreducibles() {
    let a = GAtom::StrictDS { a: h(3) };
    assert_eq!(a.dual(), a);
}

#[test]
fn triple_plus_support() {
    let got = first().tri_plus().cusp_support();
    let want = s(1, 1).support().union(&s(-3, 5).support());
    assert_eq!(got, want);
}

// Jacquet modules.

#[test]
fn point_over_cuspidal() {
    let m = mu_star_induced(s(1, 1), &mu_star_atom(&sigma()).unwrap());
    assert_eq!(m.len(), 3);
    let one = GGTerm::new(GLProduct::one(), GExpr::induced(vec![s(1, 1)], sigma()));
    assert_eq!(m.coeff(&one), 1);
    assert_eq!(m.coeff(&GGTerm::of_atom(GLProduct::from_segments([s(1, 1)]), sigma())), 1);
    assert_eq!(m.coeff(&GGTerm::of_atom(GLProduct::from_segments([s(-1, -1)]), sigma())), 1);
}

#[test]
fn reflected_first_factor() {
    // Top term of δ([-1/2,5/2])⋊σ carries the reflected segment [-5/2,1/2].
    let m = mu_star_induced(s(-1, 5), &mu_star_atom(&sigma()).unwrap());
    let t = GGTerm::of_atom(GLProduct::from_segments([s(-5, 1)]), sigma());
    assert_eq!(m.coeff(&t), 1);
}

#[test]
fn strict_ds_jacquet_size() {
    for c2 in [1, 3, 5, 7] {
        let m = mu_star_atom(&GAtom::StrictDS { a: h(c2) }).unwrap();
        assert_eq!(m.len() as i64, (c2 + 3) / 2, "c = {c2}/2");
    }
}

#[test]
fn triple_plus_partial_jacquet() {
    let t = first();
    let m = mu_star_atom(&t.tri_plus()).unwrap();
    let term = GGTerm::of_atom(GLProduct::from_segments([s(-1, 3)]), GAtom::StrictDS { a: t.c });
    assert!(m.coeff(&term) >= 1);
}

#[test]
fn multiplicity_two_in_strict_pair() {
    let k = Knowledge::new();
    let host = GExpr::induced(vec![s(1, 3), s(1, 5)], sigma());
    let target = GGTerm::of_atom(GLProduct::from_segments([s(-3, 5)]), sigma());
    assert_eq!(multiplicity_of(&target, &host, &k).mult, Multiplicity::Exact(2));
}

#[test]
fn multiplicities_over_tempered_hosts() {
    let t = first();
    let k = Knowledge::new();
    let minus_host = GExpr::induced(vec![s(1, 3)], Triple::pm(t.a, t.c, false));
    let zero = GGTerm::of_atom(GLProduct::from_segments([s(-1, 3)]), GAtom::StrictDS { a: t.c });
    assert_eq!(multiplicity_of(&zero, &minus_host, &k).mult, Multiplicity::Exact(0));

    let plus_host = GExpr::induced(vec![s(1, 3)], Triple::pm(t.a, t.c, true));
    let one = GGTerm::of_atom(GLProduct::from_segments([s(1, 1)]), Triple::pm(t.b, t.c, true));
    assert_eq!(multiplicity_of(&one, &plus_host, &k).mult, Multiplicity::Exact(1));
}

#[test]
fn oracle_words() {
    let point = minimal_jacquet_oracle(&GExpr::induced(vec![s(1, 1)], sigma()), 12).unwrap();
    assert_eq!(point.len(), 2);
    assert_eq!(point[&vec![h(1)]], 1);
    assert_eq!(point[&vec![h(-1)]], 1);

    let e = GExpr::induced(vec![s(1, 3)], sigma());
    let words = minimal_jacquet_oracle(&e, 12).unwrap();
    assert_eq!(words.values().sum::<i64>(), 4);
    assert_eq!(words, minimal_words_structural(&e).unwrap());
}

#[test]
fn negative_prefix_sum() {
    // a = 1/2, b = 3/2, c = 5/2
    let w = [h(1), h(-1), h(-3), h(5), h(3), h(1)];
    assert!(!casselman_positive(&w));
    assert!(casselman_positive(&[h(3), h(1)]));
    assert!(casselman_positive(&[]));
}

// Ledger.

#[test]
fn second_kernel_minus_first() {
    let t = first();
    let k = Knowledge::new();
    let kern = Ctx::new(t, &k).kernel_ledgers().unwrap();
    let k2 = decomposition_of("seg-times-strict", &[t.a, t.b, t.c]).unwrap();
    assert_eq!(kern.k[1], k2);
    let rest = floor_plus(&sub(&k2, &kern.k[0]));
    assert_eq!(rest, RGSum::from_atoms([t.l_bc_a(), t.tri_minus_bca(), t.l_bc_half_a()]));
}

#[test]
fn kernels_below_total() {
    let t = first();
    let k = Knowledge::new();
    let ctx = Ctx::new(t, &k);
    let kern = ctx.kernel_ledgers().unwrap();
    let psi = ctx.main_decomposition().unwrap();
    for ki in &kern.k {
        assert!(ki.leq(&psi));
        assert_eq!(ki.coeff(&t.l_psi()), 0);
    }
    let sizes: Vec<usize> = kern.k.iter().map(RGSum::len).collect();
    assert_eq!(sizes, [6, 6, 4]);
}

#[test]
fn imported_tables() {
    let t = first();
    let p = [t.a, t.b, t.c];
    let main = decomposition_of("seg-times-strict", &p).unwrap();
    assert_eq!(
        main,
        RGSum::from_atoms([
            t.l_half_a_bc(true),
            t.l_half_a_bc(false),
            t.tri_plus(),
            t.tri_minus_bca(),
            t.l_bc_a(),
            t.l_bc_half_a(),
        ])
    );
    assert_eq!(decomposition_of("seg-rtimes-sigma_b", &p).unwrap().len(), 4);
    assert_eq!(
        decomposition_of("strict-rtimes-sigma", &[t.a]).unwrap(),
        RGSum::from_atoms([GAtom::StrictDS { a: t.a }, Triple::l(&[(h(1), t.a)], sigma())])
    );
}

#[test]
fn derived_tables_match_recomputation() {
    for t in Triple::grid(h(9)) {
        for e in TABLE.iter().filter(|e| e.provenance == Provenance::Derived) {
            let p: Vec<HalfInt> = if e.params.is_empty() { vec![] } else { vec![t.a, t.b, t.c] };
            decomposition_of(e.name, &p).unwrap_or_else(|err| panic!("{} at {t}: {err}", e.name));
        }
    }
}

// Derivations.

#[test]
fn discrete_series_candidates() {
    let t = first();
    let d = enumerate_ds_candidates(&t, &Knowledge::new()).unwrap();
    assert_eq!(d.atoms.len(), 3);
    for a in [t.tri_plus(), t.tri_minus_bca(), t.tri_minus_abc()] {
        assert!(d.atoms.contains(&a), "{a}");
    }
    let half = d.counts.iter().find(|(x, _)| *x == h(1)).map(|&(_, n)| n);
    assert_eq!(half, Some(3));
}

#[test]
fn nontempered_candidates() {
    let t = first();
    let k = Knowledge::new();
    let ctx = Ctx::new(t, &k);
    let plus = ctx.enumerate_nontempered(true);
    assert_eq!(plus.candidates.len(), 2);
    let minus = ctx.enumerate_nontempered(false);
    assert_eq!(minus.candidates, vec![t.l_half_a_bc(false)]);
    assert!(minus.branches.iter().any(|b| matches!(b.outcome, Outcome::Pruned(_))));
}

#[test]
fn unique_subquotient_witnesses() {
    let k = Knowledge::new();
    let point = GExpr::induced(vec![s(1, 1)], sigma());
    let w = GGTerm::of_atom(GLProduct::from_segments([s(1, 1)]), sigma());
    assert!(unique_sub_check(&point, &w, &k).unwrap());

    let tempered = GExpr::induced(vec![s(-1, 1)], sigma());
    let w = GGTerm::of_atom(GLProduct::from_segments([s(-1, 1)]), sigma());
    assert!(!unique_sub_check(&tempered, &w, &k).unwrap());

    // (a,b,c) = (1/2,5/2,7/2), α = 3/2: δ([-3/2,1/2])×δ([-5/2,-5/2])⋊σ_{7/2}
    let c = GAtom::StrictDS { a: h(7) };
    let ambient = GExpr::induced(vec![s(-3, 1), s(-5, -5)], c.clone());
    let w = GGTerm::new(GLProduct::from_segments([s(-3, 1)]), GExpr::induced(vec![s(-5, -5)], c));
    assert!(unique_sub_check(&ambient, &w, &k).unwrap());
}

#[test]
fn main_decomposition_values() {
    let t = first();
    let k = Knowledge::new();
    let main = Ctx::new(t, &k).main_decomposition().unwrap();
    assert_eq!(main.len(), 11);
    assert!(main.terms().values().all(|&n| n == 1));
    assert!(main.contains(&t.tri_plus()));
    assert!(main.contains(&t.tri_minus_bca()));
    assert!(!main.contains(&t.tri_minus_abc()));
}

#[test]
fn layer_structures_of_hosts() {
    let t = first();
    let k = Knowledge::new();
    let ls = Ctx::new(t, &k).layer_structures().unwrap();
    let plus = &ls["k1-plus"].layers;
    assert_eq!(plus[0], RGSum::from_atoms([GAtom::triple_plus(t.a, t.b, t.c).unwrap()]));
    assert_eq!(plus[1], RGSum::from_atoms([t.l_half_a_bc(true), t.l_ab_c()]));
    assert_eq!(plus[2], RGSum::from_atoms([t.l_half_b_ac(true)]));

    let minus = &ls["k1-minus"].layers;
    assert_eq!(minus, &vec![RGSum::from_atoms([t.l_half_a_bc(false)]), RGSum::from_atoms([t.l_half_b_ac(false)])]);

    // δ([-a,c])⋊σ_b
    let h1 = &ls["h1"].layers;
    assert_eq!(h1[0], RGSum::from_atoms([t.tri_plus()]));
    assert_eq!(h1[1], RGSum::from_atoms([t.l_bc_a(), t.l_ab_c()]));
    assert_eq!(h1[2], RGSum::from_atoms([t.l_ac_b()]));
}

#[test]
fn filtration_values() {
    let t = first();
    let k = Knowledge::new();
    let ctx = Ctx::new(t, &k);
    let f = ctx.filtration().unwrap();
    let sizes: Vec<usize> = f.layers.iter().map(RGSum::len).collect();
    assert_eq!(sizes, [2, 4, 4, 1]);
    assert_eq!(f.layers[0], RGSum::from_atoms([t.tri_plus(), t.l_half_a_bc(false)]));
    assert!(f.layers[2].contains(&t.tri_minus_bca()));
    assert!(f.layers[2].contains(&t.l_bc_half_a()));
    assert_eq!(f.layers[3], RGSum::from_atoms([t.l_psi()]));
    let total = f.layers.iter().fold(RGSum::new(), |acc, l| &acc + l);
    assert_eq!(total, ctx.main_decomposition().unwrap());
}
