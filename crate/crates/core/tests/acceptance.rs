use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use eqmodel::cli::{self, CheckOptions};
use eqmodel::gca::CharacterVector;
use eqmodel::mc_dgcat::{mc_to_s, realize_mc, rep_to_mc, unit_matrix, FormsOnSquare, HomElement, MCObject, SAlgebra, DEFAULT_POLY_BOUND};
use eqmodel::qlinalg::rational::{frac, int, Rational};
use eqmodel::qlinalg::Matrix;
use eqmodel::t2_forms::{build_l, FormReader, SectionCandidate};
use eqmodel::torus_rep::{CharacterScalarPair, IsoVerdict, TorusRep};
use eqmodel::xmodel::{
    build_lambda_z, build_m, build_n, compare_actions, invariant_basis, nilpotent_model, product_span, resonant_generators, same_span,
    twisted_invariants_complex, verify_f, CoefficientCharacter, ParameterSpec, Variant,
};

const SUITE_SEED: u64 = 0x5eed_7042;
const SUITE_RANDOM: usize = 24;
const LIMIT_EXAMPLES: Duration = Duration::from_secs(1);
const LIMIT_ORACLE: Duration = Duration::from_secs(10);
const LIMIT_NILPOTENT: Duration = Duration::from_secs(10);
const MODEL_TOP_DEGREE: u32 = 9;
const X_BOUND: u32 = 8;
const GENERIC_VALUES: [i64; 4] = [2, 3, 5, 7];

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn generic_values() -> [Rational; 4] {
    GENERIC_VALUES.map(int)
}

fn pool() -> Vec<Rational> {
    vec![int(1), int(-1), int(2), int(-2), int(3), frac(1, 2)]
}

fn random_upper(rng: &mut ChaCha8Rng, n: usize) -> TorusRep {
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
        let gamma = pick(rng);
        let g2 = &g1.scale(&beta) + &Matrix::identity(n).scale(&gamma);
        if !g2.det().is_zero() {
            return TorusRep::new(g1, g2).expect("polynomial in g1 commutes");
        }
    }
}

/// Upper-triangular test representations of dimension 1 to 4.
fn suite() -> Vec<(String, TorusRep)> {
    let ch = |a: Rational, b: Rational| CharacterScalarPair::new(a, b);
    let mut out = vec![
        ("trivial character".to_string(), TorusRep::trivial(1)),
        ("character (2,1)".to_string(), TorusRep::character(&ch(int(2), int(1)))),
        ("character (1,-1)".to_string(), TorusRep::character(&ch(int(1), int(-1)))),
        ("character (1/2,3)".to_string(), TorusRep::character(&ch(frac(1, 2), int(3)))),
        ("unipotent V3(1,1,1,0)".to_string(), cli::v3(&[int(1), int(1), int(1), int(0)])),
        ("V1(1,2)".to_string(), cli::v1(&int(1), &int(2))),
        ("V3(2,3,-1,1/2)".to_string(), cli::v3(&[int(2), int(3), int(-1), frac(1, 2)])),
        ("V5(1,2,1,3)".to_string(), cli::v5(&[int(1), int(2), int(1), int(3)])),
        ("V5(-1,1,2,-2)".to_string(), cli::v5(&[int(-1), int(1), int(2), int(-2)])),
        (
            "trivial plus (2,1) plus (1,2)".to_string(),
            TorusRep::from_characters(&[ch(int(1), int(1)), ch(int(2), int(1)), ch(int(1), int(2))]),
        ),
        (
            "Jordan block in g2".to_string(),
            TorusRep::new(Matrix::identity(2), Matrix::from_i64(&[&[1, 1], &[0, 1]])).expect("commuting"),
        ),
        ("trivial rank 4".to_string(), TorusRep::trivial(4)),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    for k in 0..SUITE_RANDOM {
        let n = 1 + k % 4;
        let r = if k % 3 == 2 && n >= 2 {
            let a = random_upper(&mut rng, n / 2);
            let b = random_upper(&mut rng, n - n / 2);
            TorusRep::direct_sum(&a, &b)
        } else {
            random_upper(&mut rng, n)
        };
        out.push((format!("random #{k} (dim {n})"), r));
    }
    out
}

fn c1_examples() -> Outcome {
    let start = Instant::now();
    let forms = FormsOnSquare::new();
    let s = SAlgebra::new();
    for t in cli::example_tuples() {
        let text = cli::v3(&t).to_text();
        let out = cli::cmd_ssify(&text).map_err(|e| e.message)?;
        let expected = HomElement::linear(&s, &cli::v4_matrix(&t), &Matrix::zeros(3, 3)).format(&s);
        ensure(out.json["eta_matrix"] == serde_json::json!(expected), || format!("V3 {t:?}: got {}", out.json["eta_matrix"]))?;

        let (c, e) = (&t[0], &t[1]);
        let so = mc_to_s(&forms, &s, &rep_to_mc(&forms, &cli::v1(c, e), DEFAULT_POLY_BOUND).map_err(|e| e.to_string())?.object)
            .map_err(|e| e.to_string())?;
        ensure(so.eta == HomElement::linear(&s, &unit_matrix(2, 0, 1, -(e / c)), &Matrix::zeros(2, 2)), || format!("V1 {t:?}"))?;

        let iso = cli::v1_v2_iso(&forms, c, e).map_err(|e| e.message)?.ok_or_else(|| format!("V1 -> V2 {t:?}: not an invertible cocycle"))?;
        let mut target = HomElement::identity(&forms, 2);
        target.set(0, 1, forms.function(eqmodel::t2_forms::Poly::var(0).scale(&(e / c))));
        ensure(iso == target, || format!("V1 -> V2 {t:?}: got {:?}", iso.format(&forms)))?;
    }
    for t in cli::v5_tuples() {
        let so = mc_to_s(&forms, &s, &rep_to_mc(&forms, &cli::v5(&t), DEFAULT_POLY_BOUND).map_err(|e| e.to_string())?.object)
            .map_err(|e| e.to_string())?;
        let n1 = unit_matrix(3, 0, 1, -(&t[1] / &t[0]));
        let n2 = unit_matrix(3, 0, 2, -(&t[3] / &t[2]));
        ensure(so.eta == HomElement::linear(&s, &n1, &n2), || format!("V5 {t:?}"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < LIMIT_EXAMPLES, || format!("took {elapsed:?}"))?;
    Ok(format!("5 tuples each for V1, V3, V5 and V1 -> V2 in {elapsed:?}"))
}

fn c2_oracle() -> Outcome {
    let start = Instant::now();
    let reps = suite();
    ensure(reps.len() >= 20, || "suite too small".into())?;
    for (name, r) in &reps {
        let cellular = r.cellular_betti();
        let model = cli::model_betti(r).map_err(|e| format!("{name}: {}", e.message))?;
        ensure(cellular == model, || format!("{name}: cellular {cellular:?} vs model {model:?}"))?;
    }
    let expect = |name: &str, betti: [usize; 3]| -> Result<(), String> {
        let r = &reps.iter().find(|(n, _)| n == name).expect("in suite").1;
        let got = r.cellular_betti();
        ensure(got == betti, || format!("{name}: {got:?} vs {betti:?}"))
    };
    expect("trivial character", [1, 2, 1])?;
    expect("character (2,1)", [0, 0, 0])?;
    expect("character (1,-1)", [0, 0, 0])?;
    expect("character (1/2,3)", [0, 0, 0])?;
    expect("unipotent V3(1,1,1,0)", [1, 2, 1])?;
    let elapsed = start.elapsed();
    ensure(elapsed < LIMIT_ORACLE, || format!("took {elapsed:?}"))?;
    Ok(format!("{} representations agree in {elapsed:?}", reps.len()))
}

fn c3_roundtrip() -> Outcome {
    let forms = FormsOnSquare::new();
    let reps = suite();
    for (name, r) in &reps {
        let out = rep_to_mc(&forms, r, DEFAULT_POLY_BOUND).map_err(|e| format!("{name}: {e}"))?;
        let realized = realize_mc(&forms, &out.object).map_err(|e| format!("{name}: {e}"))?;
        ensure(realized.g1().commutes_with(realized.g2()), || format!("{name}: realized pair does not commute"))?;
        match TorusRep::isomorphism(&realized, r).map_err(|e| format!("{name}: {e}"))? {
            IsoVerdict::Isomorphic(t) => {
                ensure(&(&t * realized.g1()) == &(r.g1() * &t) && &(&t * realized.g2()) == &(r.g2() * &t), || format!("{name}: bad conjugator"))?
            }
            IsoVerdict::NotIsomorphic(cert) => return Err(format!("{name}: {cert:?}")),
        }
    }
    Ok(format!("{} representations realized back up to isomorphism", reps.len()))
}

fn c4_integrity() -> Outcome {
    let mut failures = Vec::new();
    if !build_lambda_z().d_squared_zero_through(MODEL_TOP_DEGREE) {
        failures.push("Lambda Z".to_string());
    }
    if !build_n().algebra.d_squared_zero_through(MODEL_TOP_DEGREE) {
        failures.push("Lambda(s1, s2)".to_string());
    }
    for v in Variant::ALL {
        let m = build_m(ParameterSpec::generic(), v);
        if !m.algebra.d_squared_zero_through(MODEL_TOP_DEGREE) {
            let w = m.algebra.generator("wbar").map_err(|e| e.to_string())?;
            let dd = m.algebra.differential(&m.algebra.differential(&w));
            failures.push(format!("M with dxbar = {v}*zbar: d(d(wbar)) = {}", m.algebra.format_element(&dd)));
        }
    }
    let [a1, b1, a2, b2] = generic_values();
    let ls = build_l(a1.clone(), b1, a2.clone(), b2).map_err(|e| e.to_string())?;
    if let Err(e) = ls.validate() {
        failures.push(format!("face maps of L: {e}"));
    }
    let reader = FormReader::<2> { alg: ls.algebra(), params: ls.params() };
    let xp = reader.read("-x + t2*z").map_err(|e| e.to_string())?;
    let one = || -> Rational { int(1) };
    let rep = ls.is_global_section(&SectionCandidate::on_square(xp, CharacterScalarPair::new(one() / &a1, one() / &a2)));
    let boundary = rep.equations.iter().take(2).all(|e| e.lhs == "-x" && e.rhs == "-x");
    if !(rep.passed() && boundary) {
        failures.push("x' boundary computation".to_string());
    }
    for v in Variant::ALL {
        let r = verify_f(&generic_values(), v).map_err(|e| e.to_string())?;
        for s in &r.sections {
            if !s.report.passed() {
                failures.push(format!("{} is not a global section", s.name));
            }
        }
    }
    if failures.is_empty() {
        Ok("both models of the torus, both variants of M, L and x', w' verified".into())
    } else {
        Err(failures.join("; "))
    }
}

fn c5_discrepancy() -> Outcome {
    let p = generic_values();
    let s1 = verify_f(&p, Variant::S1).map_err(|e| e.to_string())?;
    ensure(s1.failing_generators() == ["xbar"], || format!("variant s1 fails at {:?}", s1.failing_generators()))?;
    let x = s1.generators.iter().find(|g| g.generator == "xbar").expect("xbar checked");
    ensure(x.f_of_d == "dt1*z" && x.d_of_f == "dt2*z", || format!("xbar: F(d) = {}, d(F) = {}", x.f_of_d, x.d_of_f))?;
    let s2 = verify_f(&p, Variant::S2).map_err(|e| e.to_string())?;
    ensure(s2.passed(), || format!("variant s2 fails at {:?}", s2.failing_generators()))?;
    ensure(s2.identities.iter().any(|i| i.holds && i.name.contains("w'")), || "w' identity".into())?;

    let cmp = compare_actions(&p, 3, Variant::S2).map_err(|e| e.to_string())?;
    let t = match &cmp.verdict {
        IsoVerdict::Isomorphic(t) => t.clone(),
        IsoVerdict::NotIsomorphic(c) => return Err(format!("variant s2 not isomorphic: {c:?}")),
    };
    let sign = Matrix::diagonal(&[int(-1), int(1), int(1)]);
    let conj = |m: &Matrix| -> bool {
        (&(m * cmp.recovered.g1()) == &(cmp.monodromy.g1() * m) && &(m * cmp.recovered.g2()) == &(cmp.monodromy.g2() * m))
            || (&(m * cmp.monodromy.g1()) == &(cmp.recovered.g1() * m) && &(m * cmp.monodromy.g2()) == &(cmp.recovered.g2() * m))
    };
    ensure(conj(&t), || "found conjugator does not intertwine".into())?;
    ensure(conj(&sign), || "diag(-1,1,1) does not intertwine".into())?;
    let cmp = compare_actions(&p, 3, Variant::S1).map_err(|e| e.to_string())?;
    ensure(matches!(cmp.verdict, IsoVerdict::NotIsomorphic(_)), || "variant s1 unexpectedly isomorphic".into())?;
    Ok("s1 fails only at xbar, s2 passes everywhere; pi3 actions: s2 conjugate by diag(-1,1,1), s1 certified distinct".into())
}

fn c6_nilpotent() -> Outcome {
    let start = Instant::now();
    let generic = nilpotent_model(&ParameterSpec::generic(), Variant::S2, X_BOUND).map_err(|e| e.to_string())?;
    let expected = vec![1, 2, 1, 0, 0, 0, 0, 0, 0];
    ensure(generic.dims == expected, || format!("generic dims {:?}", generic.dims))?;
    ensure(generic.betti == expected, || format!("generic betti {:?}", generic.betti))?;

    let relations = vec![CharacterVector([1, 1, 0, 0]), CharacterVector([0, 0, 1, 1])];
    let spec = ParameterSpec::specialized_with_relations([int(2), frac(1, 2), int(3), frac(1, 3)], relations).map_err(|e| e.to_string())?;
    let m = build_m(spec, Variant::S2);
    let gens = resonant_generators(&m);
    let triv = [CoefficientCharacter::Formal(CharacterVector::TRIVIAL)];
    let mut dims = Vec::new();
    for n in 0..=X_BOUND {
        let basis = m.algebra.enumerate_basis(n);
        let inv = invariant_basis(&m, &triv, n);
        let cols: Vec<Vec<Rational>> = inv.iter().map(|(mono, _)| basis.iter().map(|b| if b == mono { int(1) } else { int(0) }).collect()).collect();
        let products = product_span(&m.algebra, &gens, n);
        ensure(same_span(&Matrix::from_columns(&cols, basis.len()), &products), || format!("degree {n}: invariants {} vs products rank {}", inv.len(), products.rank()))?;
        dims.push(inv.len());
    }
    let elapsed = start.elapsed();
    ensure(elapsed < LIMIT_NILPOTENT, || format!("took {elapsed:?}"))?;
    Ok(format!("generic (1,2,1,0,...); resonant dims {dims:?} match products, in {elapsed:?}"))
}

fn c7_complexes() -> Outcome {
    let s = SAlgebra::new();
    let forms = FormsOnSquare::new();
    for t in cli::example_tuples() {
        let o = MCObject::new(
            TorusRep::from_characters(&vec![CharacterScalarPair::new(t[0].clone(), int(1)); 3]),
            HomElement::linear(&s, &cli::v4_matrix(&t), &Matrix::zeros(3, 3)),
        );
        for v in Variant::ALL {
            let c = twisted_invariants_complex(&build_m(ParameterSpec::generic(), v), &o, X_BOUND).map_err(|e| format!("D {t:?} {v}: {e}"))?;
            c.check_d_squared().map_err(|e| format!("D {t:?} {v}: {e}"))?;
        }
        let mut unit = t.clone();
        unit[0] = int(1);
        let so = mc_to_s(&forms, &s, &rep_to_mc(&forms, &cli::v3(&unit), DEFAULT_POLY_BOUND).map_err(|e| e.to_string())?.object)
            .map_err(|e| e.to_string())?;
        let c = twisted_invariants_complex(&build_m(ParameterSpec::generic(), Variant::S2), &so, X_BOUND).map_err(|e| e.to_string())?;
        let betti = c.betti(0..3).map_err(|e| e.to_string())?;
        let oracle = cli::v3(&unit).cellular_betti();
        ensure(betti == oracle && oracle == [1, 2, 1], || format!("V3 {unit:?}: model {betti:?}, oracle {oracle:?}"))?;
    }
    for t in cli::v5_tuples() {
        let n1 = unit_matrix(3, 0, 1, -(&t[1] / &t[0]));
        let n2 = unit_matrix(3, 0, 2, -(&t[3] / &t[2]));
        let o = MCObject::new(
            TorusRep::from_characters(&vec![CharacterScalarPair::new(t[0].clone(), t[2].clone()); 3]),
            HomElement::linear(&s, &n1, &n2),
        );
        for v in Variant::ALL {
            let c = twisted_invariants_complex(&build_m(ParameterSpec::generic(), v), &o, X_BOUND).map_err(|e| format!("D' {t:?} {v}: {e}"))?;
            c.check_d_squared().map_err(|e| format!("D' {t:?} {v}: {e}"))?;
        }
    }
    for c in [int(1), int(2), frac(1, 2)] {
        let zero = [c.clone(), int(0), int(0), int(0)];
        let so = mc_to_s(&forms, &s, &rep_to_mc(&forms, &cli::v3(&zero), DEFAULT_POLY_BOUND).map_err(|e| e.to_string())?.object)
            .map_err(|e| e.to_string())?;
        let plain = MCObject::untwisted(&s, TorusRep::from_characters(&vec![CharacterScalarPair::new(c.clone(), int(1)); 3]));
        let m = build_m(ParameterSpec::generic(), Variant::S2);
        let a = twisted_invariants_complex(&m, &so, X_BOUND).map_err(|e| e.to_string())?;
        let b = twisted_invariants_complex(&m, &plain, X_BOUND).map_err(|e| e.to_string())?;
        for n in 0..=a.top_degree() {
            ensure(a.basis(n) == b.basis(n), || format!("c = {c}: bases differ in degree {n}"))?;
            if n < a.top_degree() {
                ensure(a.differential(n) == b.differential(n), || format!("c = {c}: differentials differ in degree {n}"))?;
            }
        }
    }
    Ok("D and D' square to zero at 5 tuples each; c = 1 gives (1,2,1); e = f = h = 0 is untwisted".into())
}

fn c8_determinism() -> Outcome {
    let a = cli::render_json(&cli::cmd_check_paper(&CheckOptions::default()).map_err(|e| e.message)?.json);
    let b = cli::render_json(&cli::cmd_check_paper(&CheckOptions::default()).map_err(|e| e.message)?.json);
    ensure(a == b, || "in-process runs differ".into())?;
    let run = || Command::new(env!("CARGO_BIN_EXE_eqmodel")).arg("check-paper").output().map_err(|e| e.to_string());
    let (x, y) = (run()?, run()?);
    ensure(x.stdout == y.stdout, || "binary runs differ".into())?;
    ensure(x.stdout == a.as_bytes(), || "binary output differs from the library report".into())?;
    Ok(format!("{} identical bytes; check-paper exit code {:?}", a.len(), x.status.code()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("1 worked examples", c1_examples),
        ("2 oracle equivalence", c2_oracle),
        ("3 realization roundtrip", c3_roundtrip),
        ("4 model integrity", c4_integrity),
        ("5 discrepancy detection", c5_discrepancy),
        ("6 nilpotent models", c6_nilpotent),
        ("7 complexes over the total space", c7_complexes),
        ("8 determinism", c8_determinism),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    println!("{} of 8 criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
