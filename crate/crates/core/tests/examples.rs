use monoclone::lattice::{
    ascending_chain, atom_generators, coatom_member, coatoms, divisor_interval, idempotent_interval, single_generator,
    CoatomDescriptor,
};
use monoclone::minorset::{embedding_check, minor_m, phi_minor, QMinorSet};
use monoclone::semiaffine::{enumerate_semiaffine_lattice, linear_closure, phi_affine, LinearForm};
use monoclone::*;

fn fp(q: u64) -> FieldParam {
    FieldParam::new(q).unwrap()
}

fn m(s: &str, f: &FieldParam) -> Monomial {
    parse_monomial(s, f).unwrap()
}

fn gen(s: &str, f: &FieldParam) -> MonomialClone {
    generate_default(&parse_monomial_list(s, f).unwrap(), f).unwrap()
}

#[test]
fn reduction_and_canonical_form() {
    let f = fp(5);
    assert_eq!(reduce_exponent(0, &f), 0);
    assert_eq!(reduce_exponent(8, &f), 4);
    assert_eq!(reduce_exponent(9, &f), 1);
    assert_eq!(canonicalize(&[3, 2, 2], &f).unwrap(), Monomial::from_pairs(&[(3, 1), (2, 2)], &f).unwrap());
    assert_eq!(canonicalize(&[7, 0, 11], &f).unwrap(), Monomial::from_pairs(&[(3, 2)], &f).unwrap());
    assert_eq!(canonicalize(&[4, 4], &f).unwrap(), Monomial::from_pairs(&[(4, 2)], &f).unwrap());
    assert!(matches!(canonicalize(&[0, 0], &f), Err(Error::InvalidMonomial(_))));
}

#[test]
fn idempotency() {
    let f = fp(5);
    assert!(m("x1*x2*x3*x4*x5", &f).is_idempotent(&f));
    assert!(m("x1*x2^4", &f).is_idempotent(&f));
    assert!(!m("x1^2", &f).is_idempotent(&f));
}

#[test]
fn substitution() {
    let f3 = fp(3);
    let a = m("x1*x2^2", &f3);
    assert_eq!(a.substitute(1, &a, &f3).unwrap(), m("x1*x2^2*x3^2", &f3));
    let f5 = fp(5);
    assert_eq!(m("x1^2", &f5).substitute(2, &m("x1^2", &f5), &f5).unwrap(), m("x1^4", &f5));
    let b = m("x1*x2^4", &f5);
    assert_eq!(b.substitute(4, &b, &f5).unwrap(), m("x1*x2^4*x3^4", &f5));
    assert!(matches!(b.substitute(2, &b, &f5), Err(Error::Precondition(_))));
}

#[test]
fn identification() {
    let f5 = fp(5);
    let a = m("x1^3*x2^2*x3^2", &f5).identify(2, 2, &f5).unwrap();
    assert_eq!(a, m("x1^3*x2^4", &f5));
    assert_eq!(a.identify(4, 3, &f5).unwrap(), m("x1^3", &f5));
    let f3 = fp(3);
    assert_eq!(m("x1*x2", &f3).identify(1, 1, &f3).unwrap(), m("x1^2", &f3));
    assert_eq!(m("x1*x2^2", &f3).identify(1, 2, &f3).unwrap(), m("x1", &f3));
    assert!(m("x1^2", &f3).identify(2, 2, &f3).is_err());
}

#[test]
fn evaluation() {
    let f5 = fp(5);
    let a = m("x1^2*x2", &f5);
    // exponents ascending: (1, 2); point (1, 2) gives 1 + 4
    assert_eq!(a.evaluate(&[Elem::Log(1), Elem::Log(2)], &f5).unwrap(), Elem::Log(1));
    assert_eq!(a.evaluate(&[Elem::Log(2), Elem::Log(1)], &f5).unwrap(), Elem::Log(0));
    assert_eq!(a.evaluate(&[Elem::NegInf, Elem::Log(1)], &f5).unwrap(), Elem::NegInf);
    assert_eq!(m("x1^4", &f5).evaluate(&[Elem::Log(3)], &f5).unwrap(), Elem::Log(0));
    assert!(a.evaluate(&[Elem::Log(1)], &f5).is_err());
}

#[test]
fn generate_on_small_fields() {
    let f2 = fp(2);
    let c = gen("x1*x2", &f2);
    assert_eq!(c.len() as u32, c.cap.per_residue_cap);
    assert!(c.stable);

    let f3 = fp(3);
    let c = gen("x1*x2^2", &f3);
    assert!(c.members().iter().all(|x| x.count(1) == 1));
    assert_eq!(c.len() as u32, c.cap.per_residue_cap + 1);

    let f5 = fp(5);
    let c = gen("x1^4", &f5);
    assert_eq!(c.members(), &[m("x1^4", &f5), m("x1", &f5)]);

    let c = gen("x1*x2*x3", &f5);
    assert!(c.members().iter().all(|x| x.exponent_sum() % 2 == 1));
    assert!(c.contains(&m("x1^2*x2^3*x3^2", &f5)));
}

#[test]
fn membership_and_comparison() {
    let f3 = fp(3);
    let c = gen("x1*x2^2", &f3);
    assert_eq!(c.member(&m("x1^2", &f3)).unwrap(), (false, Confidence::Exact));
    assert_eq!(c.member(&m("x1", &f3)).unwrap().0, true);
    assert!(gen("x1*x2*x3, x1^2", &f3).contains(&m("x1*x2", &f3)));
    let huge = Monomial::all_ones(c.cap.per_residue_cap + 1, &f3);
    assert!(matches!(c.member(&huge), Err(Error::CapTooSmall(_))));

    let a = gen("x1^2", &f3);
    let j = join(&a, &c).unwrap();
    let top = gen("x1*x2", &f3);
    assert!(subset(&a, &j).unwrap().0 && subset(&c, &j).unwrap().0);
    assert!(!equal(&j, &a).unwrap().0 && !equal(&j, &c).unwrap().0 && !equal(&j, &top).unwrap().0);
    assert!(subset(&j, &top).unwrap().0);
    assert_eq!(subset(&c, &gen("x1*x2*x3", &f3)).unwrap(), (true, Confidence::Exact));
    assert!(equal(&meet(&j, &j).unwrap(), &j).unwrap().0);
    assert!(matches!(subset(&c, &gen("x1", &fp(4))), Err(Error::FieldMismatch(..))));
}

#[test]
fn congruence_clones() {
    let f5 = fp(5);
    assert!(congruence_clone_member(&m("x1*x2*x3", &f5), 2, &f5).unwrap());
    assert!(!congruence_clone_member(&m("x1*x2", &f5), 2, &f5).unwrap());
    assert!(congruence_clone_member(&m("x1^2*x2^3", &f5), 4, &f5).unwrap());
    assert!(congruence_clone_member(&m("x1", &f5), 3, &f5).is_err());
}

#[test]
fn empty_generators_rejected() {
    let f3 = fp(3);
    assert_eq!(generate_default(&[], &f3).unwrap_err(), Error::EmptyGenerators);
}

#[test]
fn closed_form_atoms() {
    let names = |q| -> Vec<String> {
        let f = fp(q);
        atom_generators(&f).iter().map(|g| g.to_string()).collect()
    };
    assert_eq!(names(3), ["x1*x2^2", "x1^2"]);
    assert_eq!(names(4), ["x1*x2^3", "x1^2", "x1^3"]);
    assert_eq!(names(5), ["x1*x2^4", "x1^3", "x1^4"]);
}

#[test]
fn coatom_descriptors() {
    assert_eq!(coatoms(&fp(3)).unwrap().len(), 2);
    assert_eq!(coatoms(&fp(4)).unwrap().len(), 2);
    assert_eq!(coatoms(&fp(7)).unwrap().len(), 5);
    assert!(coatoms(&fp(2)).is_err());
    let f7 = fp(7);
    assert!(coatom_member(&m("x1^2*x2^2", &f7), &[1], &f7).unwrap());
    assert!(coatom_member(&m("x1*x2^2", &f7), &[1], &f7).unwrap());
    assert!(!coatom_member(&m("x1*x2*x3^2", &f7), &[1], &f7).unwrap());
    assert!(coatoms(&f7).unwrap().contains(&CoatomDescriptor::Kd { indices: vec![1, 2], t: 6 }));
}

#[test]
fn divisor_chains() {
    let d = divisor_interval(&fp(5)).unwrap();
    assert_eq!(d.divisors, [1, 2, 4]);
    assert!(d.anti_isomorphic());
    let d = divisor_interval(&fp(3)).unwrap();
    assert!(d.included[1][0].member && !d.included[0][1].member);
}

#[test]
fn ascending_chains() {
    let c = ascending_chain(&fp(5), 3).unwrap();
    let gens: Vec<String> = c.clones.iter().map(|c| c.generators[0].to_string()).collect();
    assert_eq!(gens, ["x1^2", "x1^2*x2^2*x3^2", "x1^2*x2^2*x3^2*x4^2*x5^2"]);
    assert_eq!(c.strict, [true, true]);
    let c = ascending_chain(&fp(9), 2).unwrap();
    assert_eq!(c.clones[1].generators[0].to_string(), "x1^4*x2^4*x3^4");
    assert_eq!(c.strict, [true]);
    assert_eq!(ascending_chain(&fp(7), 3).unwrap_err(), Error::SquareFree(6));
}

#[test]
fn idempotent_intervals() {
    for (q, want) in [(3, vec!["x1", "x1*x2^2", "x1*x2*x3"]), (4, vec!["x1", "x1*x2^3", "x1*x2*x3*x4"])] {
        let f = fp(q);
        let d = idempotent_interval(&f, q as u32, None).unwrap();
        let got: Vec<String> = d.labels.iter().map(|l| l[0].to_string()).collect();
        assert_eq!(got, want);
    }
}

#[test]
fn single_generator_compositions() {
    let f3 = fp(3);
    let s = single_generator(&m("x1*x2^2", &f3), &m("x1*x2*x3", &f3), &f3).unwrap();
    assert_eq!(s, Monomial::from_pairs(&[(1, 3), (2, 3)], &f3).unwrap());
    let f5 = fp(5);
    let a = m("x1*x2^4", &f5);
    assert_eq!(single_generator(&a, &a, &f5).unwrap(), Monomial::from_pairs(&[(1, 1), (4, 3)], &f5).unwrap());
    let x = m("x1*x2^2*x3^2", &f5);
    assert_eq!(single_generator(&Monomial::x1(&f5), &x, &f5).unwrap(), x);
    assert!(single_generator(&m("x1^2", &f5), &a, &f5).is_err());
}

#[test]
fn semiaffine_small_moduli() {
    assert_eq!(enumerate_semiaffine_lattice(1, None).len(), 1);
    assert_eq!(enumerate_semiaffine_lattice(2, None).len(), 4);
    assert_eq!(enumerate_semiaffine_lattice(3, None).len(), 6);
    let f3 = fp(3);
    let proj = linear_closure(&[], 2, None);
    assert_eq!(phi_affine(&gen("x1*x2^2", &f3)).members(), proj.members());
    let zero = linear_closure(&[LinearForm::zero(2)], 2, None);
    assert_eq!(phi_affine(&gen("x1^2", &f3)).members(), zero.members());
}

#[test]
fn minor_sets() {
    let f3 = fp(3);
    let delta = phi_minor(&gen("x1", &f3));
    assert_eq!(delta.points.iter().cloned().collect::<Vec<_>>(), [vec![0, 0], vec![1, 0]]);
    let sq = phi_minor(&gen("x1^2", &f3));
    assert_eq!(sq.points.iter().cloned().collect::<Vec<_>>(), [vec![0, 0], vec![0, 1], vec![1, 0]]);
    let c = gen("x1*x2^2", &f3);
    let s = phi_minor(&c);
    let bound = s.bound;
    let want: Vec<Vec<u32>> =
        std::iter::once(vec![0, 0]).chain((0..=bound).map(|k| vec![1, k])).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    assert_eq!(s.points.iter().cloned().collect::<Vec<_>>(), want);
    assert!(s.is_valid());

    assert_eq!(minor_m(&[0, 0], &delta).unwrap().into_iter().collect::<Vec<_>>(), [vec![0, 0]]);
    let m10 = minor_m(&[1, 0], &s).unwrap();
    assert!(m10.contains(&vec![0, 0]) && m10.contains(&vec![0, 1]) && !m10.contains(&vec![1, 0]));

    // the three sets share a cap, so they are comparable
    let cap = CapPolicy::per_residue(&f3, 4);
    let at = |g: &str| phi_minor(&generate(&parse_monomial_list(g, &f3).unwrap(), &f3, &cap).unwrap());
    let (d, x2, x12) = (at("x1"), at("x1^2"), at("x1*x2^2"));
    assert!(embedding_check(&d, &x2).unwrap());
    assert!(embedding_check(&x2, &x2).unwrap());
    assert!(!embedding_check(&x2, &x12).unwrap());
    let other = QMinorSet { bound: 9, ..d.clone() };
    assert!(matches!(embedding_check(&d, &other), Err(Error::BoundMismatch(..))));
}
