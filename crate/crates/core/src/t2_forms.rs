//! Polynomial differential forms on the square `[0,1]²`, the interval and the point,
//! with coefficients in a free graded-commutative algebra, and local systems of such
//! algebras on the torus cell structure (one vertex, edges σ₁, σ₂, square τ).
//!
//! On τ the edge `σ₁` sits at `t₂ = 1 − j` (face `d₁ⱼ`) and `σ₂` at `t₁ = 1 − j`
//! (face `d₂ⱼ`); the vertex sits at `t = 1 − j` on each edge (face `dⱼ`).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::error::ParseError;
use crate::expr::{self, Interpret};
use crate::gca::{AlgebraError, AlgebraPresentation, CharacterVector, Element, Monomial};
use crate::qlinalg::rational::{self, Rational};
use crate::qlinalg::Matrix;
use crate::torus_rep::{CharacterScalarPair, TorusRep};

/// Polynomial in `V` commuting variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly<const V: usize> {
    terms: BTreeMap<[u32; V], Rational>,
}

pub type Poly2 = Poly<2>;
pub type Poly1 = Poly<1>;

impl<const V: usize> Default for Poly<V> {
    fn default() -> Self {
        Poly { terms: BTreeMap::new() }
    }
}

impl<const V: usize> Poly<V> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial([0; V], c)
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn var(k: usize) -> Self {
        let mut e = [0; V];
        e[k] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn monomial(exps: [u32; V], c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(exps, c);
        p
    }

    pub fn add_term(&mut self, exps: [u32; V], c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exps).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; V], &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u32; V]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&[0; V])
    }

    /// Maximal total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            out.add_term(*e, c * s);
        }
        out
    }

    pub fn derivative(&self, k: usize) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e[k] > 0 {
                let mut f = *e;
                f[k] -= 1;
                out.add_term(f, c * rational::int(e[k] as i64));
            }
        }
        out
    }

    /// Substitutes a constant for variable `k`, leaving the exponent slot at zero.
    pub fn substitute(&self, k: usize, value: &Rational) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let mut f = *e;
            f[k] = 0;
            out.add_term(f, c * rational::pow(value, e[k] as i64));
        }
        out
    }

    pub fn evaluate(&self, values: &[Rational; V]) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, (e, c)| {
            acc + e.iter().zip(values).fold(c.clone(), |p, (&k, v)| p * rational::pow(v, k as i64))
        })
    }
}

impl<const V: usize> std::ops::Add for &Poly<V> {
    type Output = Poly<V>;
    fn add(self, o: &Poly<V>) -> Poly<V> {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<const V: usize> std::ops::Neg for &Poly<V> {
    type Output = Poly<V>;
    fn neg(self) -> Poly<V> {
        self.scale(&-Rational::one())
    }
}

impl<const V: usize> std::ops::Sub for &Poly<V> {
    type Output = Poly<V>;
    fn sub(self, o: &Poly<V>) -> Poly<V> {
        self + &-o
    }
}

impl<const V: usize> std::ops::Mul for &Poly<V> {
    type Output = Poly<V>;
    fn mul(self, o: &Poly<V>) -> Poly<V> {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            for (f, d) in &o.terms {
                let mut g = *e;
                for k in 0..V {
                    g[k] += f[k];
                }
                out.add_term(g, c * d);
            }
        }
        out
    }
}

impl Poly<2> {
    /// Fixes variable `fixed` to `value` and keeps the other as the single variable.
    pub fn restrict(&self, fixed: usize, value: &Rational) -> Poly1 {
        let keep = 1 - fixed;
        let mut out = Poly1::zero();
        for (e, c) in &self.terms {
            out.add_term([e[keep]], c * rational::pow(value, e[fixed] as i64));
        }
        out
    }
}

impl Poly<1> {
    pub fn at(&self, t: &Rational) -> Rational {
        self.evaluate(&[t.clone()])
    }
}

fn var_names<const V: usize>() -> &'static [&'static str] {
    match V {
        0 => &[],
        1 => &["t"],
        _ => &["t1", "t2"],
    }
}

fn dt_names<const V: usize>() -> &'static [&'static str] {
    match V {
        0 => &[],
        1 => &["dt"],
        _ => &["dt1", "dt2"],
    }
}

/// Differential form `Σ p(t)·dt^M ⊗ a` on a `V`-dimensional cube with coefficients
/// in a graded-commutative algebra. Keys are `(dt mask, coefficient monomial)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Form<const V: usize> {
    terms: BTreeMap<(u8, Monomial), Poly<V>>,
}

pub type SquareForm = Form<2>;
pub type IntervalForm = Form<1>;
pub type PointForm = Form<0>;

impl<const V: usize> Default for Form<V> {
    fn default() -> Self {
        Form { terms: BTreeMap::new() }
    }
}

fn mask_sign(a: u8, b: u8) -> bool {
    // parity of pairs (i in a, j in b) with i > j
    let mut n = 0;
    for i in 0..8 {
        if a & (1 << i) != 0 {
            n += (b & ((1u8 << i) - 1)).count_ones();
        }
    }
    n % 2 == 1
}

impl<const V: usize> Form<V> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(mask: u8, p: Poly<V>, m: Monomial) -> Self {
        let mut f = Self::zero();
        f.add_term(mask, m, p);
        f
    }

    /// The 0-form `p ⊗ 1`.
    pub fn function(p: Poly<V>, ngens: usize) -> Self {
        Self::term(0, p, Monomial::unit(ngens))
    }

    pub fn scalar(c: Rational, ngens: usize) -> Self {
        Self::function(Poly::constant(c), ngens)
    }

    pub fn dt(k: usize, ngens: usize) -> Self {
        Self::term(1 << k, Poly::one(), Monomial::unit(ngens))
    }

    /// Constant form with coefficient `x`.
    pub fn from_element(x: &Element) -> Self {
        let mut f = Self::zero();
        for (m, c) in x.terms() {
            f.add_term(0, m.clone(), Poly::constant(c.clone()));
        }
        f
    }

    pub fn add_term(&mut self, mask: u8, m: Monomial, p: Poly<V>) {
        if p.is_zero() {
            return;
        }
        let key = (mask, m);
        let sum = match self.terms.get(&key) {
            Some(q) => q + &p,
            None => p,
        };
        if sum.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u8, Monomial), &Poly<V>)> {
        self.terms.iter()
    }

    /// The polynomial in front of `dt^mask ⊗ m`.
    pub fn component(&self, mask: u8, m: &Monomial) -> Poly<V> {
        self.terms.get(&(mask, m.clone())).cloned().unwrap_or_default()
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let mut out = Self::zero();
        for ((mask, m), p) in &self.terms {
            out.add_term(*mask, m.clone(), p.scale(s));
        }
        out
    }

    /// Multiplication by a function (a 0-form with scalar coefficient).
    pub fn mul_poly(&self, q: &Poly<V>) -> Self {
        let mut out = Self::zero();
        for ((mask, m), p) in &self.terms {
            out.add_term(*mask, m.clone(), p * q);
        }
        out
    }

    pub fn form_degree_bound(&self) -> Option<u32> {
        self.terms.values().filter_map(Poly::degree).max()
    }

    /// Total degree if homogeneous.
    pub fn degree(&self, alg: &AlgebraPresentation) -> Option<u32> {
        let mut degs = self.terms.keys().map(|(mask, m)| mask.count_ones() + alg.degree_of(m));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn wedge(&self, other: &Self, alg: &AlgebraPresentation) -> Self {
        let mut out = Self::zero();
        for ((ma, a), p) in &self.terms {
            let a_odd = alg.degree_of(a) % 2 == 1;
            for ((mb, b), q) in &other.terms {
                if ma & mb != 0 {
                    continue;
                }
                let Some((m, mut negative)) = alg.multiply_monomials(a, b) else {
                    continue;
                };
                negative ^= mask_sign(*ma, *mb);
                negative ^= a_odd && mb.count_ones() % 2 == 1;
                let pq = p * q;
                out.add_term(ma | mb, m, if negative { -&pq } else { pq });
            }
        }
        out
    }

    /// `d(p dt^M ⊗ a) = dp ∧ dt^M ⊗ a + (−1)^{|M|} p dt^M ⊗ da`.
    pub fn d(&self, alg: &AlgebraPresentation) -> Self {
        let mut out = Self::zero();
        for ((mask, a), p) in &self.terms {
            for k in 0..V {
                let bit = 1u8 << k;
                if mask & bit != 0 {
                    continue;
                }
                let dp = p.derivative(k);
                if dp.is_zero() {
                    continue;
                }
                let negative = (mask & (bit - 1)).count_ones() % 2 == 1;
                out.add_term(mask | bit, a.clone(), if negative { -&dp } else { dp });
            }
            let da = alg.differential(&Element::monomial(a.clone(), Rational::one()));
            let odd = mask.count_ones() % 2 == 1;
            for (m, c) in da.terms() {
                let s = if odd { -c } else { c.clone() };
                out.add_term(*mask, m.clone(), p.scale(&s));
            }
        }
        out
    }

    /// Applies the algebra map sending generator `k` of `alg` to `images[k]` on the
    /// coefficients, keeping the form part: `Σ p dt^M ∧ φ(a)`.
    pub fn substitute(&self, images: &[Form<V>], target: &AlgebraPresentation) -> Self {
        let mut out = Self::zero();
        for ((mask, a), p) in &self.terms {
            let front = Self::term(*mask, p.clone(), Monomial::unit(target.ngens()));
            out = &out + &front.wedge(&map_monomial(a, images, target), target);
        }
        out
    }

    /// Pretty form such as `-x + t2*z` or `dt1*dt2*u`.
    pub fn format(&self, alg: &AlgebraPresentation) -> String {
        let mut pieces: Vec<(Rational, String)> = Vec::new();
        let mut keys: Vec<&(u8, Monomial)> = self.terms.keys().collect();
        keys.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        for key in keys {
            let (mask, m) = key;
            let p = &self.terms[key];
            for (e, c) in p.terms() {
                let mut factors: Vec<String> = Vec::new();
                for (k, &ek) in e.iter().enumerate() {
                    match ek {
                        0 => {}
                        1 => factors.push(var_names::<V>()[k].to_string()),
                        _ => factors.push(format!("{}^{}", var_names::<V>()[k], ek)),
                    }
                }
                for k in 0..V {
                    if mask & (1 << k) != 0 {
                        factors.push(dt_names::<V>()[k].to_string());
                    }
                }
                if !m.is_unit() {
                    factors.push(alg.monomial_label(m));
                }
                pieces.push((c.clone(), factors.join("*")));
            }
        }
        format_signed_sum(&pieces)
    }
}

pub(crate) fn format_signed_sum(pieces: &[(Rational, String)]) -> String {
    if pieces.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (c, body)) in pieces.iter().enumerate() {
        let neg = c < &Rational::zero();
        let abs = rational::abs(c);
        if i == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if body.is_empty() {
            s.push_str(&rational::format(&abs));
        } else if abs.is_one() {
            s.push_str(body);
        } else {
            let _ = write!(s, "{}*{}", rational::format(&abs), body);
        }
    }
    s
}

/// Image of a monomial of `alg` under the algebra map given on generators.
pub fn map_monomial<const V: usize>(a: &Monomial, images: &[Form<V>], target: &AlgebraPresentation) -> Form<V> {
    let mut acc = Form::scalar(Rational::one(), target.ngens());
    for (k, &e) in a.exponents().iter().enumerate() {
        for _ in 0..e {
            acc = acc.wedge(&images[k], target);
        }
    }
    acc
}

/// Image of an element of `alg` under the algebra map given on generators.
pub fn map_element<const V: usize>(x: &Element, images: &[Form<V>], target: &AlgebraPresentation) -> Form<V> {
    let mut out = Form::zero();
    for (m, c) in x.terms() {
        out = &out + &map_monomial(m, images, target).scale(c);
    }
    out
}

impl<const V: usize> std::ops::Add for &Form<V> {
    type Output = Form<V>;
    fn add(self, o: &Form<V>) -> Form<V> {
        let mut out = self.clone();
        for ((mask, m), p) in &o.terms {
            out.add_term(*mask, m.clone(), p.clone());
        }
        out
    }
}

impl<const V: usize> std::ops::Neg for &Form<V> {
    type Output = Form<V>;
    fn neg(self) -> Form<V> {
        self.scale(&-Rational::one())
    }
}

impl<const V: usize> std::ops::Sub for &Form<V> {
    type Output = Form<V>;
    fn sub(self, o: &Form<V>) -> Form<V> {
        self + &-o
    }
}

impl SquareForm {
    /// Pullback along the edge `i` at `j`: for `i = 1`, `t ↦ (t, 1 − j)`; for `i = 2`, `t ↦ (1 − j, t)`.
    pub fn restrict_edge(&self, i: u8, j: u8) -> IntervalForm {
        assert!((i == 1 || i == 2) && j <= 1, "edge index out of range");
        let fixed = if i == 1 { 1 } else { 0 };
        let keep = 1 - fixed;
        let value = rational::int(1 - j as i64);
        let mut out = IntervalForm::zero();
        for ((mask, m), p) in &self.terms {
            if mask & (1 << fixed) != 0 {
                continue;
            }
            let new_mask = (mask >> keep) & 1;
            out.add_term(new_mask, m.clone(), p.restrict(fixed, &value));
        }
        out
    }
}

impl IntervalForm {
    /// Pullback to the endpoint `t = 1 − j`.
    pub fn restrict_endpoint(&self, j: u8) -> PointForm {
        let value = rational::int(1 - j as i64);
        let mut out = PointForm::zero();
        for ((mask, m), p) in &self.terms {
            if *mask == 0 {
                out.add_term(0, m.clone(), Poly::constant(p.at(&value)));
            }
        }
        out
    }
}

impl PointForm {
    pub fn to_element(&self) -> Element {
        let mut e = Element::zero();
        for ((_, m), p) in &self.terms {
            e.add_term(m.clone(), p.constant_term());
        }
        e
    }
}

/// Reads [`Form`] expressions: generator names, `t`/`dt` (interval) or `t1`, `t2`,
/// `dt1`, `dt2` (square), and named parameters standing for constants.
pub struct FormReader<'a, const V: usize> {
    pub alg: &'a AlgebraPresentation,
    pub params: &'a BTreeMap<String, Rational>,
}

impl<const V: usize> FormReader<'_, V> {
    pub fn read(&self, text: &str) -> Result<Form<V>, ParseError> {
        expr::parse(text)?.eval(self)
    }
}

impl<const V: usize> Interpret for FormReader<'_, V> {
    type Value = Form<V>;
    fn constant(&self, q: &Rational) -> Form<V> {
        Form::scalar(q.clone(), self.alg.ngens())
    }
    fn symbol(&self, name: &str) -> Result<Form<V>, ParseError> {
        let n = self.alg.ngens();
        if let Some(k) = var_names::<V>().iter().position(|v| *v == name) {
            return Ok(Form::function(Poly::var(k), n));
        }
        if let Some(k) = dt_names::<V>().iter().position(|v| *v == name) {
            return Ok(Form::dt(k, n));
        }
        if let Some(q) = self.params.get(name) {
            return Ok(Form::scalar(q.clone(), n));
        }
        let g = self.alg.generator(name).map_err(|_| ParseError::UnknownSymbol(name.into()))?;
        Ok(Form::from_element(&g))
    }
    fn add(&self, a: &Form<V>, b: &Form<V>) -> Form<V> {
        a + b
    }
    fn mul(&self, a: &Form<V>, b: &Form<V>) -> Form<V> {
        a.wedge(b, self.alg)
    }
    fn neg(&self, a: &Form<V>) -> Form<V> {
        -a
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalSystemError {
    #[error("parameter {0} must be nonzero")]
    ParameterZero(String),
    #[error("face {face} does not preserve the degree of {generator}")]
    DegreeMismatch { face: String, generator: String },
    #[error("face {face} does not commute with d on {generator}")]
    NotChainMap { face: String, generator: String },
    #[error("faces disagree at the corner {corner:?} on {generator}")]
    CornerMismatch { corner: (u8, u8), generator: String },
    #[error("face d0 on sigma{edge} sends {generator} outside the span of degree-{degree} generators")]
    NotLinearOnGenerators { edge: u8, degree: u32, generator: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A local system on the torus whose value on every cell is `A(cell) ⊗ ΛZ`, given by its face maps on generators of ΛZ.
#[derive(Clone, Debug)]
pub struct LocalSystemT2 {
    algebra: AlgebraPresentation,
    params: BTreeMap<String, Rational>,
    /// `edge_faces[i-1][j]`: `d_{ij}` from τ to σᵢ.
    edge_faces: [[Vec<IntervalForm>; 2]; 2],
    /// `point_faces[i-1][j]`: `d_j` from σᵢ to the vertex.
    point_faces: [[Vec<PointForm>; 2]; 2],
}

fn face_name_edge(i: usize, j: usize) -> String {
    format!("tau.d{}{}", i + 1, j)
}

fn face_name_point(i: usize, j: usize) -> String {
    format!("sigma{}.d{}", i + 1, j)
}

/// A candidate global section of `𝓛 ⊗ χ` for a character line χ; edge and
/// vertex components default to the values induced through the untwisted faces.
#[derive(Clone, Debug)]
pub struct SectionCandidate {
    pub tau: SquareForm,
    pub sigma: [Option<IntervalForm>; 2],
    pub pt: Option<PointForm>,
    /// Scalars by which `g₁`, `g₂` act on the coefficient line.
    pub twist: CharacterScalarPair,
}

impl SectionCandidate {
    pub fn on_square(tau: SquareForm, twist: CharacterScalarPair) -> Self {
        SectionCandidate { tau, sigma: [None, None], pt: None, twist }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionEquation {
    pub equation: String,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionReport {
    pub equations: Vec<SectionEquation>,
}

impl SectionReport {
    pub fn passed(&self) -> bool {
        self.equations.iter().all(|e| e.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SectionEquation> {
        self.equations.iter().filter(|e| !e.holds)
    }
}

impl LocalSystemT2 {
    /// Local system with identity faces everywhere.
    pub fn constant(algebra: AlgebraPresentation) -> Self {
        let n = algebra.ngens();
        let edge: Vec<IntervalForm> = (0..n).map(|k| IntervalForm::from_element(&algebra.gen_element(k))).collect();
        let point: Vec<PointForm> = (0..n).map(|k| PointForm::from_element(&algebra.gen_element(k))).collect();
        LocalSystemT2 {
            algebra,
            params: BTreeMap::new(),
            edge_faces: [[edge.clone(), edge.clone()], [edge.clone(), edge]],
            point_faces: [[point.clone(), point.clone()], [point.clone(), point]],
        }
    }

    pub fn algebra(&self) -> &AlgebraPresentation {
        &self.algebra
    }

    pub fn params(&self) -> &BTreeMap<String, Rational> {
        &self.params
    }

    pub fn set_param(&mut self, name: &str, value: Rational) -> Result<(), LocalSystemError> {
        if value.is_zero() {
            return Err(LocalSystemError::ParameterZero(name.into()));
        }
        self.params.insert(name.into(), value);
        Ok(())
    }

    pub fn set_edge_face(&mut self, i: u8, j: u8, generator: &str, image: IntervalForm) -> Result<(), LocalSystemError> {
        let k = self.algebra.index_of(generator).ok_or_else(|| AlgebraError::UnknownGenerator(generator.into()))?;
        self.edge_faces[i as usize - 1][j as usize][k] = image;
        Ok(())
    }

    pub fn set_point_face(&mut self, i: u8, j: u8, generator: &str, image: PointForm) -> Result<(), LocalSystemError> {
        let k = self.algebra.index_of(generator).ok_or_else(|| AlgebraError::UnknownGenerator(generator.into()))?;
        self.point_faces[i as usize - 1][j as usize][k] = image;
        Ok(())
    }

    pub fn edge_image(&self, i: u8, j: u8, generator: &str) -> Option<&IntervalForm> {
        let k = self.algebra.index_of(generator)?;
        Some(&self.edge_faces[i as usize - 1][j as usize][k])
    }

    pub fn point_image(&self, i: u8, j: u8, generator: &str) -> Option<&PointForm> {
        let k = self.algebra.index_of(generator)?;
        Some(&self.point_faces[i as usize - 1][j as usize][k])
    }

    /// `d_{ij}` applied to a form on τ.
    pub fn apply_edge_face(&self, i: u8, j: u8, x: &SquareForm) -> IntervalForm {
        x.restrict_edge(i, j).substitute(&self.edge_faces[i as usize - 1][j as usize], &self.algebra)
    }

    /// `d_j` on σᵢ applied to a form on σᵢ.
    pub fn apply_point_face(&self, i: u8, j: u8, x: &IntervalForm) -> PointForm {
        x.restrict_endpoint(j).substitute(&self.point_faces[i as usize - 1][j as usize], &self.algebra)
    }

    /// Checks that every face map preserves degrees and commutes with `d`, and that
    /// the two ways around each corner of the square agree.
    pub fn validate(&self) -> Result<(), LocalSystemError> {
        let alg = &self.algebra;
        for (k, g) in alg.generators().iter().enumerate() {
            let dg = alg.differential(&alg.gen_element(k));
            for i in 0..2 {
                for j in 0..2 {
                    let img = &self.edge_faces[i][j][k];
                    check_face(alg, img, g.degree, &dg, &self.edge_faces[i][j], &face_name_edge(i, j), &g.name)?;
                    let img = &self.point_faces[i][j][k];
                    check_face(alg, img, g.degree, &dg, &self.point_faces[i][j], &face_name_point(i, j), &g.name)?;
                }
            }
            let gen = SquareForm::from_element(&alg.gen_element(k));
            for c1 in 0..2u8 {
                for c2 in 0..2u8 {
                    let via1 = self.apply_point_face(1, 1 - c1, &self.apply_edge_face(1, 1 - c2, &gen));
                    let via2 = self.apply_point_face(2, 1 - c2, &self.apply_edge_face(2, 1 - c1, &gen));
                    if via1 != via2 {
                        return Err(LocalSystemError::CornerMismatch { corner: (c1, c2), generator: g.name.clone() });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_global_section(&self, s: &SectionCandidate) -> SectionReport {
        let alg = &self.algebra;
        let chi = [&s.twist.g1, &s.twist.g2];
        let mut equations = Vec::new();
        let mut push = |equation: String, lhs: String, rhs: String, holds: bool| {
            equations.push(SectionEquation { equation, lhs, rhs, holds });
        };
        let sigma: Vec<IntervalForm> =
            (0..2).map(|i| s.sigma[i].clone().unwrap_or_else(|| self.apply_edge_face(i as u8 + 1, 1, &s.tau))).collect();
        for i in 0..2 {
            let e = i as u8 + 1;
            let twisted = self.apply_edge_face(e, 0, &s.tau).scale(chi[1 - i]);
            let plain = self.apply_edge_face(e, 1, &s.tau);
            push(format!("d{e}0(tau) = sigma{e}"), twisted.format(alg), sigma[i].format(alg), twisted == sigma[i]);
            push(format!("d{e}1(tau) = sigma{e}"), plain.format(alg), sigma[i].format(alg), plain == sigma[i]);
        }
        let pt = s.pt.clone().unwrap_or_else(|| self.apply_point_face(1, 1, &sigma[0]));
        for i in 0..2 {
            let e = i as u8 + 1;
            let twisted = self.apply_point_face(e, 0, &sigma[i]).scale(chi[i]);
            let plain = self.apply_point_face(e, 1, &sigma[i]);
            push(format!("d0(sigma{e}) = pt"), twisted.format(alg), pt.format(alg), twisted == pt);
            push(format!("d1(sigma{e}) = pt"), plain.format(alg), pt.format(alg), plain == pt);
        }
        SectionReport { equations }
    }

    /// Matrices of `d₀` on σ₁ and σ₂ on the degree-`n` generators, listed in reverse
    /// declaration order (so that extensions by later generators are upper triangular).
    pub fn monodromy_of(&self, n: u32) -> Result<(Vec<String>, TorusRep), LocalSystemError> {
        let alg = &self.algebra;
        let gens: Vec<usize> = (0..alg.ngens()).rev().filter(|&k| alg.generators()[k].degree == n).collect();
        let labels: Vec<String> = gens.iter().map(|&k| alg.generators()[k].name.clone()).collect();
        let mut mats = Vec::new();
        for i in 0..2 {
            let mut cols = Vec::new();
            for &k in &gens {
                let img = self.point_faces[i][0][k].to_element();
                let mut col = vec![Rational::zero(); gens.len()];
                let mut covered = 0;
                for (r, &kr) in gens.iter().enumerate() {
                    let c = img.coefficient(&Monomial::generator(alg.ngens(), kr));
                    if !c.is_zero() {
                        covered += 1;
                    }
                    col[r] = c;
                }
                if covered != img.len() {
                    return Err(LocalSystemError::NotLinearOnGenerators {
                        edge: i as u8 + 1,
                        degree: n,
                        generator: alg.generators()[k].name.clone(),
                    });
                }
                cols.push(col);
            }
            mats.push(Matrix::from_columns(&cols, gens.len()));
        }
        let g2 = mats.pop().unwrap();
        let g1 = mats.pop().unwrap();
        Ok((labels, TorusRep::new_unchecked(g1, g2)))
    }

    /// Parses the local-system text format:
    ///
    /// ```text
    /// gen x 3 0              # generator, degree, differential
    /// gen u 5 y*z
    /// param a1 2
    /// face sigma1 d0 x = a1*x
    /// face tau d10 w = a2*b2*(w - t*y*z - dt*u)
    /// ```
    ///
    /// Unlisted face images are identities.
    pub fn parse(text: &str) -> Result<Self, LocalSystemError> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(n, l)| (n + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        let syntax = |n: usize, msg: &str| LocalSystemError::Parse(ParseError::syntax(n, msg));
        let mut decls = Vec::new();
        for &(n, line) in &lines {
            let mut parts = line.splitn(4, char::is_whitespace);
            if parts.next() != Some("gen") {
                continue;
            }
            let name = parts.next().ok_or_else(|| syntax(n, "expected a generator name"))?;
            let degree: u32 = parts.next().and_then(|d| d.parse().ok()).ok_or_else(|| syntax(n, "expected a degree"))?;
            let d = parts.next().map(str::trim).filter(|s| !s.is_empty()).ok_or_else(|| syntax(n, "expected a differential"))?;
            decls.push((name, degree, d, n));
        }
        let specs: Vec<(&str, u32, CharacterVector)> = decls.iter().map(|(nm, deg, _, _)| (*nm, *deg, CharacterVector::TRIVIAL)).collect();
        let mut alg = AlgebraPresentation::new(&specs)?;
        for (name, _, d, n) in &decls {
            let dx = alg.parse_element(d).map_err(|e| match e {
                AlgebraError::Parse(ParseError::Syntax { msg, .. }) => syntax(*n, &msg),
                other => other.into(),
            })?;
            alg.set_differential(name, dx)?;
        }
        alg.check_d_squared()?;
        let mut ls = LocalSystemT2::constant(alg);
        for &(n, line) in &lines {
            let mut parts = line.splitn(3, char::is_whitespace);
            match parts.next() {
                Some("param") => {
                    let name = parts.next().ok_or_else(|| syntax(n, "expected a parameter name"))?;
                    let value = parts.next().map(|v| v.trim().trim_start_matches('=').trim()).ok_or_else(|| syntax(n, "expected a value"))?;
                    ls.set_param(name, rational::parse(value)?)?;
                }
                Some("gen") => {}
                Some("face") => {}
                _ => return Err(syntax(n, "expected gen, param or face")),
            }
        }
        for &(n, line) in &lines {
            let Some(rest) = line.strip_prefix("face") else { continue };
            let (lhs, rhs) = rest.split_once('=').ok_or_else(|| syntax(n, "expected '='"))?;
            let words: Vec<&str> = lhs.split_whitespace().collect();
            let [cell, face, generator] = words[..] else {
                return Err(syntax(n, "expected: face <cell> <face> <generator> = <expression>"));
            };
            let with_line = |e: ParseError| match e {
                ParseError::Syntax { msg, .. } => ParseError::syntax(n, msg),
                other => other,
            };
            match (cell, face) {
                ("tau", f) if f.len() == 3 && f.starts_with('d') => {
                    let (i, j) = (f.as_bytes()[1] - b'0', f.as_bytes()[2] - b'0');
                    if !(1..=2).contains(&i) || j > 1 {
                        return Err(syntax(n, "square faces are d10, d11, d20, d21"));
                    }
                    let img = FormReader::<1> { alg: &ls.algebra, params: &ls.params }.read(rhs).map_err(with_line)?;
                    ls.set_edge_face(i, j, generator, img)?;
                }
                (c, f) if (c == "sigma1" || c == "sigma2") && (f == "d0" || f == "d1") => {
                    let i = c.as_bytes()[5] - b'0';
                    let j = f.as_bytes()[1] - b'0';
                    let img = FormReader::<0> { alg: &ls.algebra, params: &ls.params }.read(rhs).map_err(with_line)?;
                    ls.set_point_face(i, j, generator, img)?;
                }
                _ => return Err(syntax(n, "unknown cell or face")),
            }
        }
        ls.validate()?;
        Ok(ls)
    }
}

fn check_face<const V: usize>(
    alg: &AlgebraPresentation,
    img: &Form<V>,
    degree: u32,
    dg: &Element,
    images: &[Form<V>],
    face: &str,
    generator: &str,
) -> Result<(), LocalSystemError> {
    if !img.is_zero() && img.degree(alg) != Some(degree) {
        return Err(LocalSystemError::DegreeMismatch { face: face.into(), generator: generator.into() });
    }
    if img.d(alg) != map_element(dg, images, alg) {
        return Err(LocalSystemError::NotChainMap { face: face.into(), generator: generator.into() });
    }
    Ok(())
}

const L_TEMPLATE: &str = "
gen x 3 0
gen y 3 0
gen z 3 0
gen w 6 0
gen u 5 y*z
face sigma1 d0 x = a1*x
face sigma1 d0 y = b1*y
face sigma1 d0 z = a1*z
face sigma1 d0 w = a1*b1*(w + x*y)
face sigma1 d0 u = a1*b1*u
face sigma2 d0 x = a2*(x + z)
face sigma2 d0 y = b2*y
face sigma2 d0 z = a2*z
face sigma2 d0 w = a2*b2*w
face sigma2 d0 u = a2*b2*u
face tau d10 x = a2*(x + z)
face tau d10 y = b2*y
face tau d10 z = a2*z
face tau d10 w = a2*b2*(w - t*y*z - dt*u)
face tau d10 u = a2*b2*u
face tau d20 x = a1*x
face tau d20 y = b1*y
face tau d20 z = a1*z
face tau d20 w = a1*b1*(w + x*y)
face tau d20 u = a1*b1*u
";

/// The local system `𝓛` on `T²` with fibre `Λ(x, y, z, w, u)`, `du = yz`, with parameters `a₁, b₁, a₂, b₂`.
pub fn build_l(a1: Rational, b1: Rational, a2: Rational, b2: Rational) -> Result<LocalSystemT2, LocalSystemError> {
    let mut text = String::new();
    for (name, v) in [("a1", &a1), ("b1", &b1), ("a2", &a2), ("b2", &b2)] {
        if v.is_zero() {
            return Err(LocalSystemError::ParameterZero(name.into()));
        }
        let _ = writeln!(text, "param {name} {}", rational::format(v));
    }
    text.push_str(L_TEMPLATE);
    LocalSystemT2::parse(&text)
}
