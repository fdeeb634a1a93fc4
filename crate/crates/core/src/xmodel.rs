//! The models `𝓝 = Λ(s₁, s₂)` of the torus and `𝓜` of the total space, invariant
//! subcomplexes under the character lattice, twisted-invariants complexes, nilpotent
//! models, recovery of the homotopy action, and the comparison map `F: 𝓜 → Γ(𝓛 ⊗ U)`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::complex::{ComplexError, TwistedComplex};
use crate::gca::{AlgebraError, AlgebraPresentation, CharacterVector, Element, Monomial};
use crate::mc_dgcat::{realize_mc, HomElement, MCObject, McError, SAlgebra};
use crate::qlinalg::rational::{self, Rational};
use crate::qlinalg::{lattice_contains, smith_normal_form, IntMatrix, Matrix};
use crate::t2_forms::{build_l, map_element, FormReader, LocalSystemError, LocalSystemT2, SectionCandidate, SectionReport, SquareForm};
use crate::torus_rep::{CharacterScalarPair, IsoVerdict, RepError, TorusRep};

/// Degree bound for cohomology reports on the total space.
pub const X_DEGREE_BOUND: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum XModelError {
    #[error("twisted differential is inconsistent: {0}")]
    MCInconsistent(String),
    #[error("this operation needs specialized parameter values")]
    MissingValues,
    #[error("parameter {0} is zero")]
    ParameterZero(&'static str),
    #[error("relation {0} does not hold for the given values")]
    RelationViolated(CharacterVector),
    #[error("no generators of degree {0}")]
    NoGenerators(u32),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    LocalSystem(#[from] LocalSystemError),
    #[error(transparent)]
    Mc(#[from] McError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Which degree-one generator twists `x̄`: `dx̄ = s₁z̄` or `dx̄ = s₂z̄`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    S1,
    S2,
}

impl Variant {
    pub const ALL: [Variant; 2] = [Variant::S1, Variant::S2];
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::S1 => "s1",
            Variant::S2 => "s2",
        })
    }
}

impl FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "s1" => Ok(Variant::S1),
            "s2" => Ok(Variant::S2),
            other => Err(format!("unknown variant {other:?}, expected s1 or s2")),
        }
    }
}

/// Formal parameters `a₁, b₁, a₂, b₂`, optionally with values and multiplicative relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParameterSpec {
    values: Option<[Rational; 4]>,
    relations: Vec<CharacterVector>,
}

const PARAM_NAMES: [&str; 4] = ["a1", "b1", "a2", "b2"];

impl ParameterSpec {
    pub fn generic() -> Self {
        ParameterSpec { values: None, relations: Vec::new() }
    }

    pub fn with_relations(relations: Vec<CharacterVector>) -> Self {
        ParameterSpec { values: None, relations }
    }

    pub fn specialized(values: [Rational; 4]) -> Result<Self, XModelError> {
        Self::specialized_with_relations(values, Vec::new())
    }

    pub fn specialized_with_relations(values: [Rational; 4], relations: Vec<CharacterVector>) -> Result<Self, XModelError> {
        for (v, name) in values.iter().zip(PARAM_NAMES) {
            if v.is_zero() {
                return Err(XModelError::ParameterZero(name));
            }
        }
        for r in &relations {
            if total_product(r, &values) != Rational::one() {
                return Err(XModelError::RelationViolated(*r));
            }
        }
        Ok(ParameterSpec { values: Some(values), relations })
    }

    pub fn values(&self) -> Option<&[Rational; 4]> {
        self.values.as_ref()
    }

    pub fn relations(&self) -> &[CharacterVector] {
        &self.relations
    }

    pub fn is_generic(&self) -> bool {
        self.values.is_none() && self.relations.is_empty()
    }

    /// Generators of the lattice of `(k, l, m, n)` with `a₁ᵏb₁ˡa₂ᵐb₂ⁿ = 1`.
    pub fn relation_lattice(&self) -> Vec<[i64; 4]> {
        match &self.values {
            Some(v) => value_relation_lattice(v),
            None => self.relations.iter().map(|r| r.0).collect(),
        }
    }

    /// Whether `g₁` and `g₂` both act trivially through the character.
    pub fn is_trivial(&self, ch: &CharacterVector) -> bool {
        if let Some(v) = &self.values {
            let (g1, g2) = ch.evaluate(v);
            return g1.is_one() && g2.is_one();
        }
        let lattice: Vec<Vec<i64>> = self.relations.iter().map(|r| r.0.to_vec()).collect();
        let e = ch.0;
        lattice_contains(&lattice, &[e[0], e[1], 0, 0]) && lattice_contains(&lattice, &[0, 0, e[2], e[3]])
    }

    /// Action of a character on a coefficient line with the given scalars.
    fn is_trivial_with(&self, ch: &CharacterVector, coeff: &CoefficientCharacter) -> bool {
        match coeff {
            CoefficientCharacter::Formal(c) => self.is_trivial(&(*ch + *c)),
            CoefficientCharacter::Scalar(pair) => match &self.values {
                Some(v) => {
                    let (g1, g2) = ch.evaluate(v);
                    (g1 * &pair.g1).is_one() && (g2 * &pair.g2).is_one()
                }
                // formal parameters never cancel a rational scalar other than 1
                None => pair.is_trivial() && self.is_trivial(ch),
            },
        }
    }
}

fn total_product(r: &CharacterVector, values: &[Rational; 4]) -> Rational {
    r.0.iter().zip(values).fold(Rational::one(), |acc, (&e, v)| acc * rational::pow(v, e))
}

fn factor(n: &BigInt, primes: &mut Vec<BigInt>, out: &mut Vec<(BigInt, i64)>) {
    let mut n = n.abs();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        let mut e = 0;
        while n.is_multiple_of(&p) {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    for (q, _) in out.iter() {
        if !primes.contains(q) {
            primes.push(q.clone());
        }
    }
}

/// Kernel lattice of `v ↦ (Σ eₚⱼvⱼ)ₚ` together with the parity of the negative entries.
fn value_relation_lattice(values: &[Rational; 4]) -> Vec<[i64; 4]> {
    let mut primes = Vec::new();
    let mut exps: Vec<Vec<(BigInt, i64)>> = Vec::new();
    for v in values {
        let mut num = Vec::new();
        let mut den = Vec::new();
        factor(v.numer(), &mut primes, &mut num);
        factor(v.denom(), &mut primes, &mut den);
        exps.push(num.into_iter().chain(den.into_iter().map(|(p, e)| (p, -e))).collect());
    }
    primes.sort();
    // rows: one per prime, then the sign row with an extra column for 2w
    let rows = primes.len() + 1;
    let mut m = IntMatrix::zeros(rows, 5);
    for (j, ex) in exps.iter().enumerate() {
        for (p, e) in ex {
            let i = primes.iter().position(|q| q == p).expect("collected");
            m[(i, j)] += e;
        }
        if values[j].is_negative() {
            m[(rows - 1, j)] = 1;
        }
    }
    m[(rows - 1, 4)] = -2;
    let snf = smith_normal_form(&m);
    let rank = snf.d.iter().filter(|&&d| d != 0).count();
    let mut gens: Vec<[i64; 4]> = (rank..5)
        .map(|j| [0, 1, 2, 3].map(|i| snf.v[(i, j)]))
        .filter(|g| g.iter().any(|&c| c != 0))
        .collect();
    gens.sort();
    gens
}

/// How the group acts on a coefficient basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoefficientCharacter {
    Formal(CharacterVector),
    Scalar(CharacterScalarPair),
}

#[derive(Clone, Debug)]
pub struct ModelPresentation {
    pub algebra: AlgebraPresentation,
    pub params: ParameterSpec,
    pub variant: Option<Variant>,
}

fn ch(e: [i64; 4]) -> CharacterVector {
    CharacterVector(e)
}

/// `Λ(s₁, s₂)` with zero differential and trivial action.
pub fn build_n() -> ModelPresentation {
    ModelPresentation { algebra: SAlgebra::new().algebra().clone(), params: ParameterSpec::generic(), variant: None }
}

/// `𝓜 = Λ(s₁, s₂, x̄, ȳ, z̄, w̄, ū)`. The presentation is not required to satisfy `d² = 0`;
/// use [`AlgebraPresentation::check_d_squared`] to test it.
pub fn build_m(params: ParameterSpec, variant: Variant) -> ModelPresentation {
    let a = ch([1, 0, 1, 0]);
    let b = ch([0, 1, 0, 1]);
    let ab = ch([1, 1, 1, 1]);
    let mut alg = AlgebraPresentation::new(&[
        ("s1", 1, CharacterVector::TRIVIAL),
        ("s2", 1, CharacterVector::TRIVIAL),
        ("xbar", 3, a),
        ("ybar", 3, b),
        ("zbar", 3, a),
        ("wbar", 6, ab),
        ("ubar", 5, ab),
    ])
    .expect("distinct generators");
    let dx = match variant {
        Variant::S1 => "s1*zbar",
        Variant::S2 => "s2*zbar",
    };
    for (g, d) in [("xbar", dx), ("wbar", "s1*xbar*ybar - s1*s2*ubar"), ("ubar", "ybar*zbar")] {
        let e = alg.parse_element(d).expect("well-formed");
        alg.set_differential(g, e).expect("degree and character match");
    }
    ModelPresentation { algebra: alg, params, variant: Some(variant) }
}

/// `ΛZ = Λ(x, y, z, w, u)`, `du = yz`, the fibre of `𝓛`.
pub fn build_lambda_z() -> AlgebraPresentation {
    let mut alg = AlgebraPresentation::new(&[
        ("x", 3, CharacterVector::TRIVIAL),
        ("y", 3, CharacterVector::TRIVIAL),
        ("z", 3, CharacterVector::TRIVIAL),
        ("w", 6, CharacterVector::TRIVIAL),
        ("u", 5, CharacterVector::TRIVIAL),
    ])
    .expect("distinct generators");
    let du = alg.parse_element("y*z").expect("well-formed");
    alg.set_differential("u", du).expect("degree matches");
    alg
}

/// Pairs `(monomial, coefficient index)` of degree `n` on which the action is trivial.
pub fn invariant_basis(m: &ModelPresentation, coeffs: &[CoefficientCharacter], n: u32) -> Vec<(Monomial, usize)> {
    let mut out = Vec::new();
    for mono in m.algebra.enumerate_basis(n) {
        let c = m.algebra.character_of(&mono);
        for (k, coeff) in coeffs.iter().enumerate() {
            if m.params.is_trivial_with(&c, coeff) {
                out.push((mono.clone(), k));
            }
        }
    }
    out
}

fn s_to_model(m: &AlgebraPresentation, x: &Element) -> Result<Element, XModelError> {
    let idx = [m.index_of("s1"), m.index_of("s2")];
    let [Some(i1), Some(i2)] = idx else {
        return Err(XModelError::MCInconsistent("the model has no generators s1, s2".into()));
    };
    let mut out = Element::zero();
    for (mono, c) in x.terms() {
        let mut e = vec![0u32; m.ngens()];
        e[i1] = mono.exponents()[0];
        e[i2] = mono.exponents()[1];
        out.add_term(Monomial(e), c.clone());
    }
    Ok(out)
}

fn scalar_characters(base: &TorusRep) -> Vec<CoefficientCharacter> {
    (0..base.dim())
        .map(|i| CoefficientCharacter::Scalar(CharacterScalarPair::new(base.g1()[(i, i)].clone(), base.g2()[(i, i)].clone())))
        .collect()
}

/// `((𝓜 ⊗ V_ss)^π, D)` with `D(ω ⊗ eₖ) = dω ⊗ eₖ + Σᵣ ηᵣₖ ω ⊗ eᵣ`, degrees `0..=bound + 1`.
pub fn twisted_invariants_complex(m: &ModelPresentation, o: &MCObject<SAlgebra>, bound: u32) -> Result<TwistedComplex, XModelError> {
    let coeffs = scalar_characters(&o.base);
    twisted_invariants_with(m, &coeffs, &o.eta, bound)
}

/// As [`twisted_invariants_complex`] with explicit coefficient characters.
pub fn twisted_invariants_with(
    m: &ModelPresentation,
    coeffs: &[CoefficientCharacter],
    eta: &HomElement<SAlgebra>,
    bound: u32,
) -> Result<TwistedComplex, XModelError> {
    let alg = &m.algebra;
    let n = coeffs.len();
    let eta_m: Vec<Element> = eta.entries.iter().map(|e| s_to_model(alg, e)).collect::<Result<_, _>>()?;
    let top = bound + 1;
    let bases: Vec<Vec<(Monomial, usize)>> = (0..=top).map(|d| invariant_basis(m, coeffs, d)).collect();
    let labels = bases
        .iter()
        .map(|b| b.iter().map(|(mono, k)| format!("{}(x)e{}", alg.monomial_label(mono), k + 1)).collect())
        .collect();
    let mut ds = Vec::new();
    for d in 0..top as usize {
        let target: std::collections::HashMap<(&Monomial, usize), usize> = bases[d + 1].iter().enumerate().map(|(i, (mono, k))| ((mono, *k), i)).collect();
        let mut mat = Matrix::zeros(bases[d + 1].len(), bases[d].len());
        for (j, (mono, k)) in bases[d].iter().enumerate() {
            let omega = Element::monomial(mono.clone(), Rational::one());
            let mut image: Vec<(Element, usize)> = vec![(alg.differential(&omega), *k)];
            for r in 0..n {
                let e = &eta_m[r * n + k];
                if !e.is_zero() {
                    image.push((alg.multiply(e, &omega), r));
                }
            }
            for (x, r) in image {
                for (t, c) in x.terms() {
                    let row = target.get(&(t, r)).ok_or_else(|| {
                        XModelError::MCInconsistent(format!("D({}(x)e{}) leaves the invariants", alg.monomial_label(mono), k + 1))
                    })?;
                    mat[(*row, j)] += c;
                }
            }
        }
        ds.push(mat);
    }
    TwistedComplex::new(labels, ds).map_err(|e| match e {
        ComplexError::DSquaredNonzero(n) => XModelError::MCInconsistent(format!("D² ≠ 0 on degree {n}")),
        other => other.into(),
    })
}

/// Betti numbers of a complex in the given degrees.
pub fn betti(c: &TwistedComplex, degrees: std::ops::Range<usize>) -> Result<Vec<usize>, XModelError> {
    Ok(c.betti(degrees)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NilpotentModel {
    pub bases: Vec<Vec<String>>,
    pub dims: Vec<usize>,
    pub betti: Vec<usize>,
}

/// `𝓜^π` through `bound` and its cohomology.
pub fn nilpotent_model(p: &ParameterSpec, variant: Variant, bound: u32) -> Result<NilpotentModel, XModelError> {
    let m = build_m(p.clone(), variant);
    let coeffs = [CoefficientCharacter::Formal(CharacterVector::TRIVIAL)];
    let s = SAlgebra::new();
    let c = twisted_invariants_with(&m, &coeffs, &HomElement::zero(&s, 1, 1, 1), bound)?;
    let degrees = 0..bound as usize + 1;
    let bases: Vec<Vec<String>> = degrees.clone().map(|n| c.basis(n).iter().map(|l| l.trim_end_matches("(x)e1").to_string()).collect()).collect();
    Ok(NilpotentModel { dims: bases.iter().map(Vec::len).collect(), bases, betti: c.betti(degrees)? })
}

/// Column span in `basis(n)` of all degree-`n` products of the given elements.
pub fn product_span(alg: &AlgebraPresentation, gens: &[Element], n: u32) -> Matrix {
    let basis = alg.enumerate_basis(n);
    let index: std::collections::HashMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let degs: Vec<u32> = gens.iter().map(|g| alg.homogeneous_degree(g).expect("homogeneous generator")).collect();
    let mut cols: Vec<Vec<Rational>> = Vec::new();
    let mut exps = vec![0u32; gens.len()];
    fn rec(i: usize, rem: u32, degs: &[u32], exps: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == degs.len() {
            if rem == 0 {
                out.push(exps.clone());
            }
            return;
        }
        for e in 0..=rem / degs[i] {
            exps[i] = e;
            rec(i + 1, rem - e * degs[i], degs, exps, out);
        }
        exps[i] = 0;
    }
    let mut all = Vec::new();
    rec(0, n, &degs, &mut exps, &mut all);
    for ex in all {
        let mut prod = alg.one();
        for (g, &e) in gens.iter().zip(&ex) {
            prod = alg.multiply(&prod, &alg.power(g, e));
        }
        let mut col = vec![Rational::zero(); basis.len()];
        for (m, c) in prod.terms() {
            col[index[m]] = c.clone();
        }
        cols.push(col);
    }
    Matrix::from_columns(&cols, basis.len())
}

/// Whether two column spans coincide.
pub fn same_span(a: &Matrix, b: &Matrix) -> bool {
    let (ra, rb) = (a.rank(), b.rank());
    ra == rb && a.hstack(b).rank() == ra
}

/// Generators of degree `i` in reverse declaration order, the twist read off from
/// the `𝓜¹ ⊗ Vⁱ` part of their differentials, and its realization.
pub fn recover_homotopy_action(m: &ModelPresentation, i: u32) -> Result<(Vec<String>, TorusRep), XModelError> {
    let values = m.params.values().ok_or(XModelError::MissingValues)?;
    let alg = &m.algebra;
    let gens: Vec<usize> = (0..alg.ngens()).rev().filter(|&k| alg.generators()[k].degree == i).collect();
    if gens.is_empty() {
        return Err(XModelError::NoGenerators(i));
    }
    let s_idx = [alg.index_of("s1"), alg.index_of("s2")];
    let n = gens.len();
    let mut n1 = Matrix::zeros(n, n);
    let mut n2 = Matrix::zeros(n, n);
    for (c, &g) in gens.iter().enumerate() {
        let dg = alg.differential(&alg.gen_element(g));
        for (mono, q) in dg.terms() {
            for (r, &v) in gens.iter().enumerate() {
                for (slot, si) in s_idx.iter().enumerate() {
                    let Some(si) = *si else { continue };
                    let mut e = vec![0u32; alg.ngens()];
                    e[si] = 1;
                    e[v] += 1;
                    if mono.exponents() == e.as_slice() {
                        let target = if slot == 0 { &mut n1 } else { &mut n2 };
                        target[(r, c)] += q;
                    }
                }
            }
        }
    }
    let chars: Vec<CharacterScalarPair> = gens
        .iter()
        .map(|&g| {
            let (a, b) = alg.generators()[g].character.evaluate(values);
            CharacterScalarPair::new(a, b)
        })
        .collect();
    let s = SAlgebra::new();
    let o = MCObject::new(TorusRep::from_characters(&chars), HomElement::linear(&s, &n1, &n2));
    let rep = realize_mc(&s, &o)?;
    Ok((gens.iter().map(|&g| alg.generators()[g].name.clone()).collect(), rep))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorCheck {
    pub generator: String,
    pub f_of_d: String,
    pub d_of_f: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionCheck {
    pub name: String,
    pub form: String,
    pub report: SectionReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FReport {
    pub variant: Variant,
    pub sections: Vec<SectionCheck>,
    pub generators: Vec<GeneratorCheck>,
    pub identities: Vec<IdentityCheck>,
    /// Checks on the literal sign of `w′`; never part of the verdict.
    pub informational: Vec<IdentityCheck>,
}

impl FReport {
    pub fn failing_generators(&self) -> Vec<&str> {
        self.generators.iter().filter(|g| !g.passed).map(|g| g.generator.as_str()).collect()
    }

    pub fn passed(&self) -> bool {
        self.sections.iter().all(|s| s.report.passed()) && self.generators.iter().all(|g| g.passed) && self.identities.iter().all(|i| i.holds)
    }
}

const X_PRIME: &str = "-x + t2*z";
const W_PRIME_PRINTED: &str = "-w + t1*x*y - t2*dt1*u";
const W_PRIME: &str = "w - t1*x*y + t2*dt1*u";

fn read_square(ls: &LocalSystemT2, s: &str) -> SquareForm {
    FormReader::<2> { alg: ls.algebra(), params: ls.params() }.read(s).expect("well-formed constant expression")
}

fn inv(q: &Rational) -> Rational {
    Rational::one() / q
}

/// Checks that `s ↦ dt`, `ȳ, z̄, ū ↦ y, z, u`, `x̄ ↦ x′`, `w̄ ↦ w′` commutes with the differentials.
pub fn verify_f(values: &[Rational; 4], variant: Variant) -> Result<FReport, XModelError> {
    let [a1, b1, a2, b2] = values.clone();
    let ls = build_l(a1.clone(), b1.clone(), a2.clone(), b2.clone())?;
    let lz = ls.algebra();
    let l1 = CharacterScalarPair::new(inv(&a1), inv(&a2));
    let l12 = CharacterScalarPair::new(inv(&(&a1 * &b1)), inv(&(&a2 * &b2)));
    let x_prime = read_square(&ls, X_PRIME);
    let w_prime = read_square(&ls, W_PRIME);
    let w_printed = read_square(&ls, W_PRIME_PRINTED);

    let mut sections = Vec::new();
    for (name, text, form, twist) in [("x'", X_PRIME, &x_prime, &l1), ("w'", W_PRIME, &w_prime, &l12)] {
        let report = ls.is_global_section(&SectionCandidate::on_square(form.clone(), twist.clone()));
        sections.push(SectionCheck { name: name.into(), form: text.into(), report });
    }

    let m = build_m(ParameterSpec::specialized(values.clone())?, variant);
    let images: Vec<SquareForm> = ["dt1", "dt2", X_PRIME, "y", "z", W_PRIME, "u"].iter().map(|s| read_square(&ls, s)).collect();
    let mut generators = Vec::new();
    for (k, g) in m.algebra.generators().iter().enumerate() {
        let f_of_d = map_element(&m.algebra.differential(&m.algebra.gen_element(k)), &images, lz);
        let d_of_f = images[k].d(lz);
        generators.push(GeneratorCheck { generator: g.name.clone(), f_of_d: f_of_d.format(lz), d_of_f: d_of_f.format(lz), passed: f_of_d == d_of_f });
    }

    let target = &read_square(&ls, "dt1").wedge(&x_prime, lz).wedge(&read_square(&ls, "y"), lz) - &read_square(&ls, "dt1*dt2*u");
    let identities = vec![
        identity("d(x') = dt2*z", &x_prime.d(lz), &read_square(&ls, "dt2*z"), lz),
        identity("d(w') = dt1*x'*y - dt1*dt2*u", &w_prime.d(lz), &target, lz),
    ];
    let informational = vec![identity("d(-w + t1*x*y - t2*dt1*u) = dt1*x'*y - dt1*dt2*u", &w_printed.d(lz), &target, lz)];
    Ok(FReport { variant, sections, generators, identities, informational })
}

fn identity(name: &str, lhs: &SquareForm, rhs: &SquareForm, alg: &AlgebraPresentation) -> IdentityCheck {
    IdentityCheck { name: name.into(), lhs: lhs.format(alg), rhs: rhs.format(alg), holds: lhs == rhs }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionComparison {
    pub labels: Vec<String>,
    pub recovered: TorusRep,
    pub monodromy: TorusRep,
    pub verdict: IsoVerdict,
}

/// Compares the action recovered from `𝓜` with the monodromy of `𝓛` on degree-`i` generators.
pub fn compare_actions(values: &[Rational; 4], i: u32, variant: Variant) -> Result<ActionComparison, XModelError> {
    let [a1, b1, a2, b2] = values.clone();
    let ls = build_l(a1, b1, a2, b2)?;
    let (labels, monodromy) = ls.monodromy_of(i)?;
    let m = build_m(ParameterSpec::specialized(values.clone())?, variant);
    let (_, recovered) = recover_homotopy_action(&m, i)?;
    let verdict = TorusRep::isomorphism(&recovered, &monodromy)?;
    Ok(ActionComparison { labels, recovered, monodromy, verdict })
}

/// The subalgebra generators `s₁, s₂, x̄ȳ, ȳz̄, ū, w̄` of the resonant nilpotent model.
pub fn resonant_generators(m: &ModelPresentation) -> Vec<Element> {
    ["s1", "s2", "xbar*ybar", "ybar*zbar", "ubar", "wbar"].iter().map(|s| m.algebra.parse_element(s).expect("generator names")).collect()
}
