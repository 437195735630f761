use proptest::prelude::*;
use rand_chacha::ChaCha8Rng;
use slotchain_core::algebra::{centralizer, Algebra};
use slotchain_core::cert;
use slotchain_core::clifford::clifford_algebra;
use slotchain_core::config;
use slotchain_core::elements::{chain, classify, decompose_wrt};
use slotchain_core::field::{Elem, Field};
use slotchain_core::forms::{is_isotropic, witt_decompose, QuadraticForm};
use slotchain_core::linalg::Vector;
use slotchain_core::quaternion::{QuaternionSymbol, TensorPresentation};

fn fields() -> Vec<Field> {
    vec![Field::rationals(), Field::gf(2, 1), Field::gf(3, 1), Field::gf(2, 2), Field::gf(3, 2), Field::gf(5, 1), Field::rat_func(3, 1), Field::rat_func(2, 1)]
}

fn field_strategy() -> impl Strategy<Value = Field> {
    (0..fields().len()).prop_map(|i| fields()[i].clone())
}

fn form(f: &Field, rng: &mut ChaCha8Rng, dim: usize) -> QuadraticForm {
    if f.is_char2() {
        let pairs = (0..dim / 2).map(|_| (f.sample(rng, 3), f.sample(rng, 3))).collect();
        QuadraticForm::pairs(f, pairs).unwrap()
    } else {
        QuadraticForm::diagonal(f, (0..dim).map(|_| f.sample_nonzero(rng, 3)).collect()).unwrap()
    }
}

fn symbol(f: &Field, rng: &mut ChaCha8Rng) -> QuaternionSymbol {
    let a = if f.is_char2() { f.sample(rng, 3) } else { f.sample_nonzero(rng, 3) };
    QuaternionSymbol::new(f, a, f.sample_nonzero(rng, 3)).unwrap()
}

fn random_unit(a: &Algebra, basis: &[Vector], rng: &mut ChaCha8Rng) -> Vector {
    let f = a.field();
    loop {
        let mut u = a.zero();
        for b in basis {
            u = a.add(&u, &a.scale(&f.sample(rng, 2), b));
        }
        if a.inverse(&u).is_some() {
            return u;
        }
    }
}

fn conjugate(a: &Algebra, u: &[Elem], v: &[Elem]) -> Vector {
    a.mul3(u, v, &a.inverse(u).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(f in field_strategy(), seed in any::<u64>()) {
        let mut rng = config::rng(seed);
        let (a, b, c) = (f.sample(&mut rng, 5), f.sample(&mut rng, 5), f.sample(&mut rng, 5));
        prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
        prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
        prop_assert_eq!(f.add(&a, &b), f.add(&b, &a));
        prop_assert!(f.is_zero(&f.add(&a, &f.neg(&a))));
        if let Some(ai) = f.inv(&a) {
            prop_assert!(f.is_one(&f.mul(&a, &ai)));
        } else {
            prop_assert!(f.is_zero(&a));
        }
        prop_assert_eq!(f.parse(&f.format(&a)).unwrap(), a);
    }

    #[test]
    fn discriminant_respects_orthogonal_sum(f in field_strategy(), seed in any::<u64>()) {
        let mut rng = config::rng(seed);
        let (g, h) = (form(&f, &mut rng, 2), form(&f, &mut rng, 4));
        let (dg, dh, ds) = (g.discriminant(), h.discriminant(), g.orthogonal_sum(&h).unwrap().discriminant());
        let expected = if f.is_char2() {
            f.add(&dg.representative, &dh.representative)
        } else {
            f.mul(&dg.representative, &dh.representative)
        };
        prop_assert_eq!(ds.representative, expected);
    }

    #[test]
    fn clifford_vectors_square_to_form_values(f in field_strategy(), seed in any::<u64>()) {
        let mut rng = config::rng(seed);
        let q = form(&f, &mut rng, 2 + 2 * (seed as usize % 2));
        let c = clifford_algebra(&q).unwrap();
        let u: Vector = (0..q.dim()).map(|_| f.sample(&mut rng, 4)).collect();
        let v = c.vector_element(&u);
        prop_assert_eq!(c.algebra().square(&v), c.algebra().scalar(&q.eval(&u)));
        prop_assert_eq!(c.algebra().dim(), 1 << q.dim());
    }

    #[test]
    fn isotropy_witnesses_are_zeros(seed in any::<u64>(), k in 0usize..4) {
        let f = [Field::gf(3, 1), Field::gf(2, 1), Field::gf(5, 1), Field::rationals()][k].clone();
        let mut rng = config::rng(seed);
        let q = form(&f, &mut rng, 4);
        let r = is_isotropic(&q);
        if let Some(w) = r.witness() {
            prop_assert!(w.iter().any(|c| !f.is_zero(c)));
            prop_assert!(f.is_zero(&q.eval(w)));
        }
        if f.is_finite() {
            prop_assert_eq!(r.flag(), Some(true));
            let d = witt_decompose(&q).unwrap();
            prop_assert!(d.verify(&q));
            prop_assert!(d.index >= 1);
        }
    }

    #[test]
    fn decomposition_identities(f in field_strategy(), seed in any::<u64>()) {
        let mut rng = config::rng(seed);
        let s = symbol(&f, &mut rng);
        let r = s.realize();
        let a = &r.algebra;
        let u = random_unit(a, &a.basis(), &mut rng);
        let x = conjugate(a, &u, &r.x);
        let t = a.random_element(&mut rng, 3);
        let d = decompose_wrt(a, &t, &x).unwrap();
        prop_assert_eq!(a.add(&d.t0, &d.t1), t);
        prop_assert!(a.commute(&d.t0, &x));
        if f.is_char2() {
            prop_assert_eq!(a.anticommutator(&x, &d.t1), d.t1.clone());
        } else {
            prop_assert!(a.is_zero(&a.anticommutator(&x, &d.t1)));
        }
    }

    #[test]
    fn json_round_trips(f in field_strategy(), seed in any::<u64>()) {
        let mut rng = config::rng(seed);
        let q = form(&f, &mut rng, 4);
        prop_assert_eq!(QuadraticForm::from_json(&q.to_json(), None).unwrap(), q);
        let s = symbol(&f, &mut rng);
        prop_assert_eq!(QuaternionSymbol::from_json(&s.to_json(), None).unwrap(), s.clone());
        let a = s.realize().algebra;
        prop_assert_eq!(Algebra::from_json(&a.to_json(), None).unwrap(), a);
        let p = TensorPresentation::realize(&[s.clone(), symbol(&f, &mut rng)]).unwrap();
        prop_assert_eq!(TensorPresentation::from_json(&p.to_json(), None).unwrap(), p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // Endpoints share the pivot 1⊗x: both are conjugates of factor generators
    // by units of its centralizer.
    #[test]
    fn chains_validate_and_reject_tampering(seed in any::<u64>(), k in 0usize..3) {
        let f = [Field::gf(3, 1), Field::gf(2, 1), Field::gf(5, 1)][k].clone();
        let mut rng = config::rng(seed);
        let p = TensorPresentation::realize(&[symbol(&f, &mut rng), symbol(&f, &mut rng)]).unwrap();
        let a = p.algebra();
        let fs = p.factors();
        let z = fs[1].x.clone();
        let cent = centralizer(a, std::slice::from_ref(&z));
        let x = if f.is_char2() { a.add(&fs[0].x, &z) } else { a.mul(&fs[0].x, &z) };
        let x = conjugate(a, &random_unit(a, &cent, &mut rng), &x);
        let second = if f.is_char2() { &fs[0].x } else { &fs[0].y };
        let xp = conjugate(a, &random_unit(a, &cent, &mut rng), second);
        prop_assert!(classify(a, &x).value().is_some() && classify(a, &xp).value().is_some());
        let c = chain(a, &x, &xp, None).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let v = c.to_json();
        prop_assert!(cert::check(&v).is_ok());
        let max_links = if f.is_char2() { 6 } else { 4 };
        prop_assert!(c.links() <= max_links);
        let bad = cert::tamper(&v, &mut rng).unwrap();
        prop_assert!(matches!(cert::check(&bad), Err(cert::CheckError::Identity(_))));
    }
}
