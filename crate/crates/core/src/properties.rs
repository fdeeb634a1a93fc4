use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cli::model_betti;
use crate::gca::{AlgebraPresentation, CharacterVector, Element, Monomial};
use crate::mc_dgcat::{build_extension, extension_iso, realize_mc, rep_to_mc, twisted_d, FormsOnSquare, HomElement, MCObject, DEFAULT_POLY_BOUND};
use crate::qlinalg::rational::{frac, int, Rational};
use crate::qlinalg::snf::{smith_normal_form, IntMatrix};
use crate::qlinalg::Matrix;
use crate::t2_forms::{build_l, FormReader, Poly, Poly2, SectionCandidate, SquareForm};
use crate::torus_rep::{CharacterScalarPair, IsoVerdict, TorusRep};
use crate::xmodel::{build_lambda_z, build_m, build_n, twisted_invariants_complex, ParameterSpec, Variant};

fn small_rational() -> impl Strategy<Value = Rational> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| frac(n, d))
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (1i64..=4, 1i64..=3, any::<bool>()).prop_map(|(n, d, neg)| frac(if neg { -n } else { n }, d))
}

fn matrix(max: usize) -> impl Strategy<Value = Matrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| prop::collection::vec(small_rational(), r * c).prop_map(move |e| Matrix::from_rows(e.chunks(c).map(<[_]>::to_vec).collect())))
}

fn pool() -> Vec<Rational> {
    vec![int(1), int(-1), int(2), int(-2), int(3), frac(1, 2)]
}

/// An upper-triangular pair with `g₂ = βg₁ + γ`, or a direct sum of two such pairs.
fn random_rep(seed: u64, n: usize) -> TorusRep {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let block = |rng: &mut ChaCha8Rng, n: usize| {
        let pool = pool();
        let pick = |rng: &mut ChaCha8Rng| pool.choose(rng).expect("nonempty").clone();
        let mut g1 = Matrix::zeros(n, n);
        for i in 0..n {
            g1[(i, i)] = pick(rng);
            for j in i + 1..n {
                g1[(i, j)] = if rng.gen_bool(0.3) { int(0) } else { pick(rng) };
            }
        }
        loop {
            let beta = if rng.gen_bool(0.25) { int(0) } else { pick(rng) };
            let g2 = &g1.scale(&beta) + &Matrix::identity(n).scale(&pick(rng));
            if !num_traits::Zero::is_zero(&g2.det()) {
                return TorusRep::new(g1, g2).expect("commuting");
            }
        }
    };
    if n >= 2 && rng.gen_bool(0.3) {
        let a = block(&mut rng, n / 2);
        let b = block(&mut rng, n - n / 2);
        TorusRep::direct_sum(&a, &b)
    } else {
        block(&mut rng, n)
    }
}

fn rep() -> impl Strategy<Value = TorusRep> {
    (any::<u64>(), 1usize..=4).prop_map(|(s, n)| random_rep(s, n))
}

fn homogeneous(alg: &AlgebraPresentation, n: u32, coeffs: &[i64]) -> Element {
    let mut x = Element::zero();
    for (m, c) in alg.enumerate_basis(n).into_iter().zip(coeffs.iter().cycle()) {
        x.add_term(m, int(*c));
    }
    x
}

fn model_m() -> AlgebraPresentation {
    build_m(ParameterSpec::generic(), Variant::S2).algebra
}

fn square_form(coeffs: &[i64]) -> SquareForm {
    let mut out = SquareForm::zero();
    let mut it = coeffs.iter();
    for mask in 0..4u8 {
        let mut p = Poly2::zero();
        for i in 0..=4u32 {
            for j in 0..=4 - i {
                p.add_term([i, j], int(*it.next().unwrap_or(&0)));
            }
        }
        out.add_term(mask, Monomial::unit(0), p);
    }
    out
}

fn hom_element(amb: &FormsOnSquare, rows: usize, cols: usize, coeffs: &[i64]) -> HomElement<FormsOnSquare> {
    let mut it = coeffs.iter().cycle();
    let entries = (0..rows * cols)
        .map(|_| {
            let mut p = Poly2::zero();
            for (e, _) in [([0, 0], ()), ([1, 0], ()), ([0, 1], ()), ([1, 1], ()), ([2, 0], ())] {
                p.add_term(e, int(*it.next().expect("cycle")));
            }
            amb.function(p)
        })
        .collect();
    HomElement::from_entries(rows, cols, 0, entries)
}

fn add(a: &CharacterVector, b: &CharacterVector) -> CharacterVector {
    CharacterVector(std::array::from_fn(|i| a.0[i] + b.0[i]))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn rank_nullity(m in matrix(8)) {
        let (rank, kernel) = m.rank_kernel();
        prop_assert_eq!(rank + kernel.len(), m.cols());
        for k in &kernel {
            prop_assert!(m.apply(k).iter().all(num_traits::Zero::is_zero));
        }
    }

    #[test]
    fn inverse_both_ways(m in (1usize..=6).prop_flat_map(|n| prop::collection::vec(small_rational(), n * n).prop_map(move |e| Matrix::from_rows(e.chunks(n).map(<[_]>::to_vec).collect())))) {
        if let Some(inv) = m.invert() {
            prop_assert!((&m * &inv).is_identity());
            prop_assert!((&inv * &m).is_identity());
        } else {
            prop_assert!(num_traits::Zero::is_zero(&m.det()));
        }
    }

    #[test]
    fn smith_form(rows in 1usize..=4, cols in 1usize..=4, e in prop::collection::vec(-6i64..=6, 16)) {
        let m = IntMatrix::from_rows(&(0..rows).map(|i| e[i * cols..(i + 1) * cols].to_vec()).collect::<Vec<_>>());
        let s = smith_normal_form(&m);
        let prod = s.u.mul(&m).mul(&s.v);
        prop_assert!(prod.is_diagonal());
        for i in 0..rows.min(cols) {
            prop_assert_eq!(prod[(i, i)], s.d[i]);
        }
        for w in s.d.windows(2) {
            prop_assert!(w[1] == 0 || (w[0] != 0 && w[1] % w[0] == 0));
        }
        for u in [&s.u, &s.v] {
            prop_assert_eq!(crate::qlinalg::rational::abs(&u.to_rational().det()), int(1));
        }
    }

    #[test]
    fn product_is_associative_and_graded_commutative(
        (p, q, r) in (0u32..=6, 0u32..=6, 0u32..=6),
        c in prop::collection::vec(-3i64..=3, 1..6),
    ) {
        let alg = model_m();
        let x = homogeneous(&alg, p, &c);
        let y = homogeneous(&alg, q, &c[1..]);
        let z = homogeneous(&alg, r, &c);
        prop_assert_eq!(alg.multiply(&alg.multiply(&x, &y), &z), alg.multiply(&x, &alg.multiply(&y, &z)));
        let sign = if p * q % 2 == 1 { int(-1) } else { int(1) };
        prop_assert_eq!(alg.multiply(&x, &y), alg.multiply(&y, &x).scale(&sign));
        let leibniz = {
            let s = if p % 2 == 1 { int(-1) } else { int(1) };
            let mut acc = alg.multiply(&alg.differential(&x), &y);
            for (m, k) in alg.multiply(&x, &alg.differential(&y)).scale(&s).terms() {
                acc.add_term(m.clone(), k.clone());
            }
            acc
        };
        prop_assert_eq!(alg.differential(&alg.multiply(&x, &y)), leibniz);
    }

    #[test]
    fn character_is_additive(p in 0u32..=6, q in 0u32..=6, i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let alg = model_m();
        let (a, b) = (alg.enumerate_basis(p), alg.enumerate_basis(q));
        prop_assume!(!a.is_empty() && !b.is_empty());
        let (a, b) = (i.get(&a), j.get(&b));
        if let Some((m, _)) = alg.multiply_monomials(a, b) {
            prop_assert_eq!(alg.character_of(&m), add(&alg.character_of(a), &alg.character_of(b)));
        }
    }

    #[test]
    fn de_rham_squares_to_zero(c in prop::collection::vec(-5i64..=5, 60)) {
        let k = AlgebraPresentation::scalars();
        prop_assert!(square_form(&c).d(&k).d(&k).is_zero());
    }

    #[test]
    fn restriction_is_multiplicative(a in prop::collection::vec(-3i64..=3, 60), b in prop::collection::vec(-3i64..=3, 60), i in 1u8..=2, j in 0u8..=1) {
        let k = AlgebraPresentation::scalars();
        let (x, y) = (square_form(&a), square_form(&b));
        prop_assert_eq!(x.wedge(&y, &k).restrict_edge(i, j), x.restrict_edge(i, j).wedge(&y.restrict_edge(i, j), &k));
    }

    #[test]
    fn constant_sections_of_l(p in prop::collection::vec(nonzero_rational(), 4)) {
        let ls = build_l(p[0].clone(), p[1].clone(), p[2].clone(), p[3].clone()).unwrap();
        prop_assert!(ls.validate().is_ok());
        let read = |s: &str| FormReader::<2> { alg: ls.algebra(), params: ls.params() }.read(s).unwrap();
        let inv = |q: &Rational| int(1) / q;
        for (g, t1, t2) in [
            ("y", inv(&p[1]), inv(&p[3])),
            ("z", inv(&p[0]), inv(&p[2])),
            ("u", inv(&(&p[0] * &p[1])), inv(&(&p[2] * &p[3]))),
        ] {
            let report = ls.is_global_section(&SectionCandidate::on_square(read(g), CharacterScalarPair::new(t1, t2)));
            prop_assert!(report.passed(), "{}: {:?}", g, report);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn semisimplify_reconjugates(r in rep()) {
        let ss = r.semisimplify().unwrap();
        let p = &ss.basis;
        let pinv = p.invert().unwrap();
        prop_assert_eq!(&(&pinv * r.g1()) * p, &ss.diagonal(1) + &ss.n1);
        prop_assert_eq!(&(&pinv * r.g2()) * p, &ss.diagonal(2) + &ss.n2);
        prop_assert!(ss.n1.is_strictly_upper_triangular() && ss.n2.is_strictly_upper_triangular());
    }

    #[test]
    fn cellular_complex_is_a_complex(r in rep(), shear in -2i64..=2) {
        let c = r.cellular_complex();
        prop_assert!(c.check_d_squared().is_ok());
        prop_assert_eq!(c.euler_characteristic(), 0);
        let b = r.cellular_betti();
        prop_assert_eq!(b[0] as i64 - b[1] as i64 + b[2] as i64, 0);
        let mut t = Matrix::identity(r.dim());
        for i in 1..r.dim() {
            t[(i, i - 1)] = int(shear);
        }
        prop_assert_eq!(r.conjugate(&t).cellular_betti(), b);
    }

    #[test]
    fn characters_by_brute_force(a in nonzero_rational(), b in nonzero_rational()) {
        let r = TorusRep::character(&CharacterScalarPair::new(a.clone(), b.clone()));
        let expected = if a == int(1) && b == int(1) { vec![1, 2, 1] } else { vec![0, 0, 0] };
        prop_assert_eq!(r.cellular_betti(), expected.clone());
        let d0 = Matrix::from_rows(vec![vec![&a - &int(1)], vec![&b - &int(1)]]);
        let h0 = 1 - d0.rank();
        prop_assert_eq!(h0, expected[0]);
    }

    #[test]
    fn oracle_equivalence(r in rep()) {
        let model = model_betti(&r).unwrap();
        prop_assert_eq!(model, r.cellular_betti());
    }

    #[test]
    fn realization_roundtrip(r in rep()) {
        let forms = FormsOnSquare::new();
        let out = rep_to_mc(&forms, &r, DEFAULT_POLY_BOUND).unwrap();
        prop_assert!(out.object.mc_check(&forms).passed());
        let back = realize_mc(&forms, &out.object).unwrap();
        prop_assert!(back.g1().commutes_with(back.g2()));
        prop_assert!(matches!(TorusRep::isomorphism(&back, &r).unwrap(), IsoVerdict::Isomorphic(_)));
    }

    #[test]
    fn twisted_d_squares_to_zero(r in rep(), s in rep(), c in prop::collection::vec(-3i64..=3, 1..8)) {
        let forms = FormsOnSquare::new();
        let a = rep_to_mc(&forms, &r, DEFAULT_POLY_BOUND).unwrap().object;
        let b = rep_to_mc(&forms, &s, DEFAULT_POLY_BOUND).unwrap().object;
        let f = hom_element(&forms, b.dim(), a.dim(), &c);
        let df = twisted_d(&forms, &f, &a, &b).unwrap();
        prop_assert!(twisted_d(&forms, &df, &a, &b).unwrap().is_zero(&forms));
    }

    #[test]
    fn extension_classes_agree_up_to_exact_terms(e1 in small_rational(), e2 in small_rational(), k in small_rational(), l in small_rational()) {
        let forms = FormsOnSquare::new();
        let triv = MCObject::untwisted(&forms, TorusRep::trivial(1));
        let omega = HomElement::linear(&forms, &Matrix::diagonal(&[e1]), &Matrix::diagonal(&[e2]));
        // a periodic function on the square, so d of it is exact among sections
        let (t1, t2): (Poly2, Poly2) = (Poly::var(0), Poly::var(1));
        let bump = &(&t1 * &(&Poly::one() - &t1)) * &(&t2 * &(&Poly::one() - &t2));
        let gamma = HomElement::from_entries(1, 1, 0, vec![forms.function(&bump.scale(&k) + &Poly::constant(l))]);
        let shifted = omega.add(&forms, &gamma.d(&forms)).unwrap();
        let x = build_extension(&forms, &omega, &triv, &triv).unwrap();
        let y = build_extension(&forms, &shifted, &triv, &triv).unwrap();
        let iso = extension_iso(&forms, &x, &y, DEFAULT_POLY_BOUND).unwrap();
        prop_assert!(iso.is_invertible(&forms));
    }
}

#[test]
fn differentials_preserve_characters() {
    for alg in [build_lambda_z(), model_m(), build_m(ParameterSpec::generic(), Variant::S1).algebra] {
        for (i, g) in alg.generators().iter().enumerate() {
            for (m, _) in alg.differential(&alg.gen_element(i)).terms() {
                assert_eq!(alg.character_of(m), g.character, "{}", g.name);
            }
        }
    }
}

#[test]
fn d_squared_as_matrices() {
    for alg in [build_lambda_z(), build_n().algebra, model_m()] {
        for n in 0..9 {
            assert!((&alg.differential_matrix(n + 1) * &alg.differential_matrix(n)).is_zero());
        }
    }
    let s1 = build_m(ParameterSpec::generic(), Variant::S1).algebra;
    let bad: Vec<u32> = (0..9).filter(|&n| !(&s1.differential_matrix(n + 1) * &s1.differential_matrix(n)).is_zero()).collect();
    assert_eq!(bad.first(), Some(&6));
}

#[test]
fn model_complexes_have_zero_euler_characteristic() {
    let forms = FormsOnSquare::new();
    let s = crate::mc_dgcat::SAlgebra::new();
    for seed in 0..12 {
        let r = random_rep(seed, 1 + seed as usize % 4);
        let o = crate::mc_dgcat::mc_to_s(&forms, &s, &rep_to_mc(&forms, &r, DEFAULT_POLY_BOUND).unwrap().object).unwrap();
        let c = twisted_invariants_complex(&build_n(), &o, 2).unwrap();
        assert!(c.check_d_squared().is_ok());
        let b = c.betti(0..3).unwrap();
        assert_eq!(c.euler_characteristic(), b[0] as i64 - b[1] as i64 + b[2] as i64);
        assert_eq!(c.euler_characteristic(), 0);
    }
}
