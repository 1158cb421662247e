use monoclone::export::{clone_from_json, clone_json, monomial_from_json, monomial_json};
use monoclone::minorset::{is_downward_closed, minor_m, phi_minor};
use monoclone::oracle::monomial_table;
use monoclone::*;
use proptest::prelude::*;

const QS: [u64; 5] = [2, 3, 4, 5, 7];

fn field() -> impl Strategy<Value = FieldParam> {
    prop::sample::select(QS.to_vec()).prop_map(|q| FieldParam::new(q).unwrap())
}

/// A field together with a raw exponent list of the given width range.
fn raw_monomial(max_width: usize) -> impl Strategy<Value = (FieldParam, Vec<u64>)> {
    field().prop_flat_map(move |fp| {
        let top = 3 * fp.q as u64;
        (Just(fp), prop::collection::vec(1..=top, 1..=max_width))
    })
}

fn small_generators() -> impl Strategy<Value = (FieldParam, Vec<Monomial>, Monomial)> {
    prop::sample::select(vec![2u64, 3, 4]).prop_flat_map(|q| {
        let fp = FieldParam::new(q).unwrap();
        let pool = all_monomials(&fp, 2);
        (Just(fp), prop::sample::subsequence(pool.clone(), 1..=2), prop::sample::select(pool))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduction_is_idempotent_and_positive(q in prop::sample::select(QS.to_vec()), a in 0u64..1000) {
        let fp = FieldParam::new(q).unwrap();
        let r = reduce_exponent(a, &fp);
        prop_assert_eq!(reduce_exponent(r as u64, &fp), r);
        prop_assert_eq!(r == 0, a == 0);
        prop_assert!(r < fp.q);
    }

    #[test]
    fn equivalent_exponents_give_the_same_monomial((fp, ex) in raw_monomial(5), i in 0usize..5, k in 1u64..4) {
        let m = canonicalize(&ex, &fp).unwrap();
        let mut other = ex.clone();
        let i = i % ex.len();
        other[i] += k * fp.n() as u64;
        prop_assert_eq!(canonicalize(&other, &fp).unwrap(), m.clone());
        other.reverse();
        prop_assert_eq!(canonicalize(&other, &fp).unwrap(), m);
    }

    #[test]
    fn identify_drops_width_by_one((fp, ex) in raw_monomial(6), i in 0usize..6, j in 0usize..6) {
        prop_assume!(ex.len() >= 2);
        let (i, j) = (i % ex.len(), j % ex.len());
        prop_assume!(i != j);
        let m = canonicalize(&ex, &fp).unwrap();
        let r1 = reduce_exponent(ex[i], &fp);
        let r2 = reduce_exponent(ex[j], &fp);
        let k = m.identify(r1, r2, &fp).unwrap();
        prop_assert_eq!(k.width() + 1, m.width());
    }

    #[test]
    fn evaluation_matches_the_product_table((fp, ex) in raw_monomial(3)) {
        prop_assume!(fp.q <= 5);
        let m = canonicalize(&ex, &fp).unwrap();
        let e: Vec<(usize, u64)> = m.exponents().into_iter().enumerate().map(|(i, e)| (i, e as u64)).collect();
        let q = fp.q as usize;
        let table = monomial_table(&e, q, e.len());
        for (idx, want) in table.iter().enumerate() {
            let mut x = idx;
            let mut p = vec![Elem::NegInf; e.len()];
            for slot in p.iter_mut().rev() {
                let d = x % q;
                x /= q;
                if d > 0 {
                    *slot = Elem::Log(d as u32 - 1);
                }
            }
            let got = match m.evaluate(&p, &fp).unwrap() {
                Elem::NegInf => 0,
                Elem::Log(l) => l as u8 + 1,
            };
            prop_assert_eq!(got, *want);
        }
    }

    #[test]
    fn monomial_json_round_trips((fp, ex) in raw_monomial(6)) {
        let m = canonicalize(&ex, &fp).unwrap();
        let (fp2, back) = monomial_from_json(&monomial_json(&m, &fp)).unwrap();
        prop_assert_eq!(fp2, fp);
        prop_assert_eq!(back, m);
    }

    #[test]
    fn parse_display_round_trips((fp, ex) in raw_monomial(6)) {
        let m = canonicalize(&ex, &fp).unwrap();
        prop_assert_eq!(parse_monomial(&m.to_string(), &fp).unwrap(), m);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn closure_contains_generators_and_is_idempotent((fp, gens, _) in small_generators()) {
        let c = generate_default(&gens, &fp).unwrap();
        for g in &gens {
            prop_assert!(c.contains(g));
        }
        prop_assert!(c.contains(&Monomial::x1(&fp)));
        let mut more = gens.clone();
        more.extend(c.up_to_width(2).cloned());
        let again = generate(&more, &fp, &c.cap).unwrap();
        prop_assert_eq!(again.members(), c.members());
    }

    #[test]
    fn closure_is_monotone((fp, gens, extra) in small_generators()) {
        let mut bigger = gens.clone();
        bigger.push(extra);
        let cap = CapPolicy::default_for(&fp, &bigger);
        let a = generate(&gens, &fp, &cap).unwrap();
        let b = generate(&bigger, &fp, &cap).unwrap();
        prop_assert!(subset(&a, &b).unwrap().0);
    }

    #[test]
    fn meet_is_idempotent_and_below_both((fp, gens, extra) in small_generators()) {
        let cap = CapPolicy::default_for(&fp, &[gens[0].clone(), extra.clone()]);
        let a = generate(&gens, &fp, &cap).unwrap();
        let b = generate(&[extra], &fp, &cap).unwrap();
        prop_assert!(equal(&meet(&a, &a).unwrap(), &a).unwrap().0);
        let m = meet(&a, &b).unwrap();
        prop_assert!(subset(&m, &a).unwrap().0 && subset(&m, &b).unwrap().0);
    }

    #[test]
    fn targeted_membership_agrees_with_materialized((fp, gens, target) in small_generators()) {
        let mut all = gens.clone();
        all.push(target.clone());
        let cap = CapPolicy::default_for(&fp, &all);
        let c = generate(&gens, &fp, &cap).unwrap();
        let r = member_query(&target, &gens, &fp, &cap).unwrap();
        prop_assert_eq!(r.member, c.contains(&target));
    }

    #[test]
    fn clone_dump_round_trips((fp, gens, _) in small_generators()) {
        let c = generate_default(&gens, &fp).unwrap();
        let back = clone_from_json(&clone_json(&c)).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn minor_image_is_valid_and_slices_are_downward_closed((fp, gens, _) in small_generators()) {
        prop_assume!(fp.q >= 3);
        let s = phi_minor(&generate_default(&gens, &fp).unwrap());
        prop_assert!(s.is_valid());
        let n = fp.n();
        for b0 in 0..n {
            for b1 in 0..n {
                let mut b = vec![0; n as usize];
                b[0] = b0;
                if n > 1 {
                    b[1] = b1;
                }
                prop_assert!(is_downward_closed(&minor_m(&b, &s).unwrap()));
            }
        }
    }
}
