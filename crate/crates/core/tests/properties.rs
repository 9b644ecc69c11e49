//! Randomized invariants across the engine.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use geovertex::arith::{binomial, iterated_laurent, laurent_expand, qf, RatFunc, Scalar, Q};
use geovertex::bf::{boson_create, fermion_create, random_config_poly};
use geovertex::checker::{run_suite, Config};
use geovertex::fock::{
    anticommutator_matrix, b_minus_coeff, b_plus_coeff, from_integral, g_coefficient, localize, to_integral, unlocalize,
    vertex_apply, vertex_coeff, FermionPair, Field, Flavor, FockElement, HElem, HEngine, TPoly,
};
use geovertex::mm::MMElement;
use geovertex::ops::{fine_residue, fusion, make_f, make_m, make_psi, make_psi_plus, LocalEquation};
use geovertex::p1::{DivisorFunction, PointJet};

fn rat() -> impl Strategy<Value = Q> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| qf(n, d))
}

fn nonzero_rat() -> impl Strategy<Value = Q> {
    (1i64..=9, 1i64..=5, any::<bool>()).prop_map(|(n, d, neg)| qf(if neg { -n } else { n }, d))
}

fn sq(c: &Q) -> Scalar {
    Scalar::from_q(c.clone())
}

/// `(c0 + c1·a + c2·a·b) / (1 + c3·b)`.
fn scalar() -> impl Strategy<Value = Scalar> {
    (rat(), rat(), rat(), rat()).prop_map(|(c0, c1, c2, c3)| {
        let (a, b) = (Scalar::param("a"), Scalar::param("b"));
        let num = sq(&c0).add(&sq(&c1).mul(&a)).add(&sq(&c2).mul(&a).mul(&b));
        num.div(&Scalar::one().add(&sq(&c3).mul(&b))).unwrap()
    })
}

/// `u^e (p0 + p1 u + p2 u²) / (d0 + d1 u)` with `d0 ≠ 0`.
fn laurent_input() -> impl Strategy<Value = RatFunc> {
    (-2i64..=2, rat(), rat(), rat(), nonzero_rat(), rat()).prop_map(|(e, p0, p1, p2, d0, d1)| {
        let u = Scalar::param("u");
        let num = sq(&p0).add(&sq(&p1).mul(&u)).add(&sq(&p2).mul(&u).mul(&u));
        let den = sq(&d0).add(&sq(&d1).mul(&u));
        num.mul(&u.pow(e).unwrap()).div(&den).unwrap().into_ratfunc()
    })
}

fn divisor() -> impl Strategy<Value = DivisorFunction> {
    (nonzero_rat(), prop::collection::vec((rat(), prop::sample::select(vec![-2i64, -1, 1, 2])), 0..3))
        .prop_map(|(c, pairs)| DivisorFunction::from_parts(sq(&c), pairs.into_iter().map(|(a, m)| (sq(&a), m))))
}

/// Products of jets at a few points, with small integer coefficients.
fn mm_elem() -> impl Strategy<Value = MMElement> {
    let points = prop::sample::select(vec!["a", "b", "1", "-2", "a+1"]);
    let factor = (points, 0u32..=2, 1i64..=2).prop_map(|(p, k, e)| format!("E[{p};{k}]^{e}"));
    (prop::collection::vec(factor, 1..=3), -4i64..=4, any::<bool>()).prop_map(|(fs, c, inv)| {
        let c = if c == 0 { 1 } else { c };
        let body = fs.join("*");
        let text = if inv { format!("{c}/({body})") } else { format!("{c}*{body}") };
        MMElement::parse(&text).unwrap()
    })
}

/// A homogeneous Fock vector with up to three terms.
fn fock_vec() -> impl Strategy<Value = FockElement<Q>> {
    let mono = (prop::collection::vec(0u32..=2, 0..=3), nonzero_rat());
    (-2i64..=2, prop::collection::vec(mono, 1..=3)).prop_map(|(l, ms)| {
        let mut p = TPoly::zero();
        for (e, c) in ms {
            let mut e = e;
            while e.last() == Some(&0) {
                e.pop();
            }
            p.add_term(&e, &c);
        }
        FockElement::graded(l, p)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_axioms(x in scalar(), y in scalar(), z in scalar()) {
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert_eq!(x.add(&y).add(&z), x.add(&y.add(&z)));
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        if !x.is_zero() {
            prop_assert_eq!(x.inv().unwrap().inv().unwrap(), x.clone());
            prop_assert!(x.mul(&x.inv().unwrap()).is_one());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn laurent_expansion_is_multiplicative(f in laurent_input(), g in laurent_input()) {
        let lo = i64::MIN / 4;
        let sf = laurent_expand(&f, "u", &RatFunc::zero(), lo, 5).unwrap();
        let sg = laurent_expand(&g, "u", &RatFunc::zero(), lo, 5).unwrap();
        let prod = sf.times(&sg);
        let direct = laurent_expand(&f.mul(&g), "u", &RatFunc::zero(), lo, prod.hi()).unwrap();
        for k in prod.lo()..=prod.hi() {
            prop_assert_eq!(prod.coeff(k).unwrap_or_else(RatFunc::zero), direct.coeff(k).unwrap_or_else(RatFunc::zero), "u^{}", k);
        }
    }

    #[test]
    fn regular_functions_have_no_polar_part(f in laurent_input()) {
        let f = f.mul(&RatFunc::param("u").pow(4).unwrap());
        let s = laurent_expand(&f, "u", &RatFunc::zero(), -6, 3).unwrap();
        for n in 1..=6 {
            prop_assert!(s.coeff(-n).map_or(true, |c| c.is_zero()));
        }
    }

    #[test]
    fn flags_agree_without_mixed_pole(c1 in nonzero_rat(), c2 in nonzero_rat(), a in rat(), b in rat()) {
        let (r, s) = (Scalar::param("r"), Scalar::param("s"));
        let num = Scalar::one().add(&sq(&a).mul(&r).mul(&s)).add(&sq(&b).mul(&s));
        let den = sq(&c1).add(&r).mul(&sq(&c2).add(&s)).mul(&r);
        let f = num.div(&den).unwrap().into_ratfunc();
        let auto = i64::MIN / 4;
        let x = iterated_laurent(&f, "r", "s", (auto, 4), (auto, 4)).unwrap();
        let y = iterated_laurent(&f, "s", "r", (auto, 4), (auto, 4)).unwrap();
        for i in -1..=4 {
            for j in 0..=4 {
                prop_assert_eq!(x.coeff_named("r", i, "s", j), y.coeff_named("r", i, "s", j));
            }
        }
    }

    #[test]
    fn derivatives_obey_leibniz(x1 in divisor(), x2 in divisor(), k in 0u32..=4) {
        let t = Scalar::param("t");
        let lhs = x1.mul(&x2).eval_deriv(&t, k).unwrap();
        let mut rhs = Scalar::zero();
        for j in 0..=k {
            let term = x1.eval_deriv(&t, j).unwrap().mul(&x2.eval_deriv(&t, k - j).unwrap());
            rhs = rhs.add(&term.mul(&Scalar::from_q(binomial(k as i64, j))));
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn jets_multiply(x1 in divisor(), x2 in divisor()) {
        let t = Scalar::param("t");
        let (a, b) = (x1.taylor_at(&t, 4).unwrap(), x2.taylor_at(&t, 4).unwrap());
        let ab = x1.mul(&x2).taylor_at(&t, 4).unwrap();
        for k in 0..=4 {
            let mut c = Scalar::zero();
            for j in 0..=k {
                c = c.add(&a.coeffs[j].mul(&b.coeffs[k - j]));
            }
            prop_assert_eq!(&ab.coeffs[k], &c);
        }
        // Log coordinates: the bases multiply and the t_k add.
        let (ta, va) = a.log_coords().unwrap();
        let (tb, vb) = b.log_coords().unwrap();
        let (tab, vab) = ab.log_coords().unwrap();
        prop_assert_eq!(tab, ta.mul(&tb));
        for k in 0..4 {
            prop_assert_eq!(&vab[k], &va[k].add(&vb[k]));
        }
        let back = PointJet::exp_coords(t.clone(), &ab.coeffs[0], &vab).unwrap();
        prop_assert_eq!(back.coeffs, ab.coeffs);
    }

    #[test]
    fn support_and_degree(f in mm_elem(), g in mm_elem()) {
        let both: std::collections::BTreeSet<Scalar> = f.support().union(&g.support()).cloned().collect();
        prop_assert!(f.mul(&g).support().is_subset(&both));
        prop_assert!(f.add(&g).support().is_subset(&both));
        if let (Some(a), Some(b)) = (f.homogeneity_degree(), g.homogeneity_degree()) {
            prop_assert_eq!(f.mul(&g).homogeneity_degree(), Some(a + b));
        }
        let once = MMElement::parse(&f.to_string()).unwrap();
        prop_assert_eq!(&once, &f);
        prop_assert_eq!(MMElement::parse(&once.to_string()).unwrap().to_string(), once.to_string());
    }

    #[test]
    fn multiplication_operators(x1 in divisor(), x2 in divisor(), f in mm_elem(), g in mm_elem()) {
        let (m1, m2) = (make_m(x1.clone()), make_m(x2.clone()));
        if let (Ok(a), Ok(b), Ok(ab)) = (m1.apply(&f), m1.apply(&g), m1.apply(&f.mul(&g))) {
            prop_assert_eq!(ab, a.mul(&b));
            prop_assert_eq!(m1.apply(&f.add(&g)).unwrap(), a.add(&b));
            prop_assert_eq!(a.support(), f.support());
        }
        if let (Ok(inner), Ok(both)) = (m2.apply(&f), make_m(x1.mul(&x2)).apply(&f)) {
            if let Ok(outer) = m1.apply(&inner) {
                prop_assert_eq!(outer, both);
            }
        }
        prop_assert_eq!(m1.compose(&m2).unwrap().degree, m1.degree + m2.degree);
    }

    #[test]
    fn fusion_matches_fine_residue(f in mm_elem(), n in 1i64..=2) {
        let (r, s) = (Scalar::param("r"), Scalar::param("s"));
        let op = make_psi(&r).compose(&make_psi_plus(&s)).unwrap();
        let eq = LocalEquation::new("s", r.clone());
        prop_assert_eq!(fusion(&op, &eq, n).unwrap().apply(&f).unwrap(), fine_residue(&op, &eq, n, &f).unwrap());
    }

    #[test]
    fn localization_roundtrip(v in fock_vec()) {
        prop_assert_eq!(localize(&unlocalize(&v)).unwrap(), v);
    }

    #[test]
    fn h_coordinates_roundtrip(v in fock_vec()) {
        let h = HElem::from_t(&v);
        prop_assert_eq!(h.to_t(), v.clone());
        let (z, den) = to_integral(&h);
        prop_assert_eq!(from_integral(&z, &den), h);
    }

    #[test]
    fn grade_bookkeeping(v in fock_vec(), k in -4i64..=4, m in -4i64..=4) {
        let l = v.grade().unwrap();
        let grade = |x: &FockElement<Q>| x.grades();
        prop_assert_eq!(Field::Psi.spec().grade_shift, 1);
        prop_assert_eq!(Field::PsiPlus.spec().grade_shift, -1);
        for field in Field::ALL {
            let shift = field.spec().grade_shift;
            let out = vertex_coeff(field, k, &v);
            prop_assert!(out.is_zero() || grade(&out) == vec![l + shift]);
        }
        for x in [g_coefficient(k, m, Flavor::Smooth, &v), b_plus_coeff(k, &v), b_minus_coeff(k, &v)] {
            prop_assert!(x.is_zero() || grade(&x) == vec![l]);
        }
    }

    #[test]
    fn engine_matches_direct(v in fock_vec(), k in -5i64..=5) {
        let mut eng = HEngine::new((-3, 3));
        let h = HElem::from_t(&v);
        for field in [Field::Psi, Field::PsiPlus, Field::E] {
            prop_assert_eq!(eng.coeff(field, k, &h).to_t(), vertex_coeff(field, k, &v));
        }
    }

    #[test]
    fn windows_are_robust(v in fock_vec()) {
        let small = anticommutator_matrix(FermionPair::PsiPlus, &v, (-2, 2), (-2, 2)).unwrap();
        let big = anticommutator_matrix(FermionPair::PsiPlus, &v, (-4, 4), (-4, 4)).unwrap();
        for (key, x) in &small {
            prop_assert_eq!(x, &big[key]);
        }
        let a = vertex_apply(Field::Psi, &v, (-3, 3));
        let b = vertex_apply(Field::Psi, &v, (-5, 5));
        for k in -3..=3 {
            prop_assert_eq!(a.coeff(k).unwrap(), b.coeff(k).unwrap());
        }
    }

    #[test]
    fn creation_operators(seed in any::<u64>(), a in rat(), b in rat()) {
        prop_assume!(a != b);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_config_poly(&mut rng, 3, 3, 2);
        let (za, zb) = (sq(&a), sq(&b));
        let ab = boson_create(&za, &boson_create(&zb, &p).unwrap()).unwrap();
        let ba = boson_create(&zb, &boson_create(&za, &p).unwrap()).unwrap();
        prop_assert_eq!(ab.n, 1);
        prop_assert_eq!(&ab, &ba);
        let fab = fermion_create(&za, &fermion_create(&zb, &p).unwrap()).unwrap();
        let fba = fermion_create(&zb, &fermion_create(&za, &p).unwrap()).unwrap();
        prop_assert_eq!(fab.f, fba.f.neg());
        prop_assert!(fermion_create(&za, &fermion_create(&za, &p).unwrap()).unwrap().f.is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3))]

    #[test]
    fn reports_are_deterministic(seed in any::<u64>()) {
        let cfg = Config { seed, ..Config::default() };
        let a = run_suite("mxi-ez", &cfg).unwrap();
        let b = run_suite("mxi-ez", &cfg).unwrap();
        prop_assert_eq!(a.to_json_lines(), b.to_json_lines());
        prop_assert!(a.passed());
    }
}

/// Fusing `F(z+,z-)F(w+,w-)` first at `w+ = z+`, then at `w- = z-`, gives the
/// squared twist with prefactor `E[z+]²/E[z-]²`, scaled by `−(z+ − z-)²`.
#[test]
fn double_fusion_of_f_squares_the_twist() {
    let p = Scalar::param;
    let (zp, zm) = (p("zp"), p("zm"));
    let c = make_f(&zp, &zm).compose(&make_f(&p("wp"), &p("wm"))).unwrap();
    let a = fusion(&c, &LocalEquation::new("wp", zp.clone()), 1).unwrap();
    let b = fusion(&a, &LocalEquation::new("wm", zm.clone()), 1).unwrap();
    let d = zp.sub(&zm);
    let scale = d.mul(&d).neg();
    for text in ["E[x;0]", "E[x;1]*E[y;0]", "1/E[x;2]"] {
        let f = MMElement::parse(text).unwrap();
        let pre = MMElement::parse("E[zp;0]^2/E[zm;0]^2").unwrap();
        let twisted = make_m(DivisorFunction::parse("(z-zm)^2/(z-zp)^2").unwrap()).apply(&f).unwrap();
        assert_eq!(b.apply(&f).unwrap(), pre.mul(&twisted).scale(&scale), "{text}");
    }
}
