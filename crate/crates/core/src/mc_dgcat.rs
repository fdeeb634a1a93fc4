//! Maurer–Cartan objects over the torus: hom-complexes twisted by MC elements,
//! extensions with splittings, extension classes, isomorphisms between extensions
//! with the same class, realization of constant MC elements as representations,
//! and the reduction of a representation to a semisimple base plus a constant twist.
//!
//! Two ambients are supported: polynomial forms on the square with rational
//! coefficients, where sections are subject to the gluing conditions of the
//! torus, and the exterior algebra `Λ(s₁, s₂)` with invariance under the action.

use std::fmt::Debug;

use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::gca::{AlgebraPresentation, CharacterVector, Element, Monomial};
use crate::qlinalg::rational::{self, Rational};
use crate::qlinalg::Matrix;
use crate::t2_forms::{IntervalForm, Poly, Poly2, SquareForm};
use crate::torus_rep::{RepError, TorusRep};

/// Default polynomial degree bound for chains found by linear solves.
pub const DEFAULT_POLY_BOUND: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum McError {
    #[error("shapes do not match: {0}")]
    Shape(String),
    #[error("the class is not a cocycle for the twisted differential")]
    NotACocycle,
    #[error("no chain of polynomial degree <= {0} bounds the difference")]
    NoGammaAtBound(u32),
    #[error("the extension classes differ: the difference has nonzero periods {0}")]
    ClassesDiffer(String),
    #[error("f{0} is not equivariant: r'_j f_i r_j^-1 != f_i")]
    NotEquivariant(u8),
    #[error("the twist has non-constant coefficients or forms of degree other than one")]
    NonConstantCoefficients,
    #[error("no constant representative found with chains of polynomial degree <= {0}")]
    StraighteningFailedAtBound(u32),
    #[error("the twist does not satisfy the Maurer-Cartan equation")]
    NotMaurerCartan,
    #[error("the map is not invertible")]
    NotInvertible,
    #[error(transparent)]
    Rep(#[from] RepError),
}

/// The coefficient ring of hom-complexes.
pub trait Ambient {
    type Entry: Clone + PartialEq + Debug;
    fn zero(&self) -> Self::Entry;
    fn scalar(&self, q: &Rational) -> Self::Entry;
    fn add(&self, a: &Self::Entry, b: &Self::Entry) -> Self::Entry;
    fn scale(&self, a: &Self::Entry, q: &Rational) -> Self::Entry;
    fn mul(&self, a: &Self::Entry, b: &Self::Entry) -> Self::Entry;
    fn d(&self, a: &Self::Entry) -> Self::Entry;
    fn is_zero(&self, a: &Self::Entry) -> bool;
    /// Degree if homogeneous; `None` for zero or mixed entries.
    fn degree(&self, a: &Self::Entry) -> Option<u32>;
    fn format(&self, a: &Self::Entry) -> String;
    /// `[c₁, c₂]` if `a = c₁e₁ + c₂e₂` for the two degree-one generators.
    fn linear_coefficients(&self, a: &Self::Entry) -> Option<[Rational; 2]>;
    fn from_linear(&self, c: &[Rational; 2]) -> Self::Entry;
    /// Whether `f ∈ Hom(source, target)` is invariant (or a global section).
    fn is_equivariant(&self, f: &HomElement<Self>, source: &TorusRep, target: &TorusRep) -> bool
    where
        Self: Sized;
}

/// Polynomial forms on the square with rational coefficients.
#[derive(Clone, Debug)]
pub struct FormsOnSquare {
    k: AlgebraPresentation,
}

impl Default for FormsOnSquare {
    fn default() -> Self {
        FormsOnSquare { k: AlgebraPresentation::scalars() }
    }
}

impl FormsOnSquare {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn scalars(&self) -> &AlgebraPresentation {
        &self.k
    }

    pub fn function(&self, p: Poly2) -> SquareForm {
        SquareForm::function(p, 0)
    }

    pub fn dt(&self, k: usize) -> SquareForm {
        SquareForm::dt(k, 0)
    }

    pub fn poly(&self, a: &SquareForm, mask: u8) -> Poly2 {
        a.component(mask, &Monomial::unit(0))
    }

    /// `R′ⱼ f|_{tⱼ=1} Rⱼ⁻¹ − f|_{tⱼ=0}` for `j = 2` (index 0) and `j = 1` (index 1).
    pub fn section_residuals(&self, f: &HomElement<Self>, source: &TorusRep, target: &TorusRep) -> [Vec<IntervalForm>; 2] {
        let mut out: [Vec<IntervalForm>; 2] = [Vec::new(), Vec::new()];
        // the edge σ₁ (t₂ fixed) glues along g₂, the edge σ₂ (t₁ fixed) along g₁
        for (slot, (edge, g)) in [(1u8, 2u8), (2, 1)].into_iter().enumerate() {
            let rinv = source.action(g).invert().expect("valid representation");
            let tgt = target.action(g);
            let at1: Vec<IntervalForm> = f.entries.iter().map(|e| e.restrict_edge(edge, 0)).collect();
            for r in 0..f.rows {
                for c in 0..f.cols {
                    let mut acc = f.entries[r * f.cols + c].restrict_edge(edge, 1).scale(&-Rational::one());
                    for a in 0..f.rows {
                        if tgt[(r, a)].is_zero() {
                            continue;
                        }
                        for b in 0..f.cols {
                            let coeff = &tgt[(r, a)] * &rinv[(b, c)];
                            if !coeff.is_zero() {
                                acc = &acc + &at1[a * f.cols + b].scale(&coeff);
                            }
                        }
                    }
                    out[slot].push(acc);
                }
            }
        }
        out
    }
}

impl Ambient for FormsOnSquare {
    type Entry = SquareForm;
    fn zero(&self) -> SquareForm {
        SquareForm::zero()
    }
    fn scalar(&self, q: &Rational) -> SquareForm {
        SquareForm::scalar(q.clone(), 0)
    }
    fn add(&self, a: &SquareForm, b: &SquareForm) -> SquareForm {
        a + b
    }
    fn scale(&self, a: &SquareForm, q: &Rational) -> SquareForm {
        a.scale(q)
    }
    fn mul(&self, a: &SquareForm, b: &SquareForm) -> SquareForm {
        a.wedge(b, &self.k)
    }
    fn d(&self, a: &SquareForm) -> SquareForm {
        a.d(&self.k)
    }
    fn is_zero(&self, a: &SquareForm) -> bool {
        a.is_zero()
    }
    fn degree(&self, a: &SquareForm) -> Option<u32> {
        a.degree(&self.k)
    }
    fn format(&self, a: &SquareForm) -> String {
        a.format(&self.k)
    }
    fn linear_coefficients(&self, a: &SquareForm) -> Option<[Rational; 2]> {
        let mut c = [Rational::zero(), Rational::zero()];
        for ((mask, _), p) in a.terms() {
            let k = match mask {
                1 => 0,
                2 => 1,
                _ => return None,
            };
            if p.degree() != Some(0) {
                return None;
            }
            c[k] = p.constant_term();
        }
        Some(c)
    }
    fn from_linear(&self, c: &[Rational; 2]) -> SquareForm {
        &self.dt(0).scale(&c[0]) + &self.dt(1).scale(&c[1])
    }
    fn is_equivariant(&self, f: &HomElement<Self>, source: &TorusRep, target: &TorusRep) -> bool {
        self.section_residuals(f, source, target).iter().all(|v| v.iter().all(IntervalForm::is_zero))
    }
}

/// The exterior algebra on two degree-one generators with trivial action.
#[derive(Clone, Debug)]
pub struct SAlgebra {
    alg: AlgebraPresentation,
}

impl Default for SAlgebra {
    fn default() -> Self {
        let alg = AlgebraPresentation::new(&[("s1", 1, CharacterVector::TRIVIAL), ("s2", 1, CharacterVector::TRIVIAL)])
            .expect("two distinct generators");
        SAlgebra { alg }
    }
}

impl SAlgebra {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn algebra(&self) -> &AlgebraPresentation {
        &self.alg
    }

    pub fn s(&self, k: usize) -> Element {
        self.alg.gen_element(k)
    }
}

impl Ambient for SAlgebra {
    type Entry = Element;
    fn zero(&self) -> Element {
        Element::zero()
    }
    fn scalar(&self, q: &Rational) -> Element {
        self.alg.constant(q.clone())
    }
    fn add(&self, a: &Element, b: &Element) -> Element {
        a + b
    }
    fn scale(&self, a: &Element, q: &Rational) -> Element {
        a.scale(q)
    }
    fn mul(&self, a: &Element, b: &Element) -> Element {
        self.alg.multiply(a, b)
    }
    fn d(&self, a: &Element) -> Element {
        self.alg.differential(a)
    }
    fn is_zero(&self, a: &Element) -> bool {
        a.is_zero()
    }
    fn degree(&self, a: &Element) -> Option<u32> {
        self.alg.homogeneous_degree(a)
    }
    fn format(&self, a: &Element) -> String {
        self.alg.format_element(a)
    }
    fn linear_coefficients(&self, a: &Element) -> Option<[Rational; 2]> {
        let mut c = [Rational::zero(), Rational::zero()];
        for (m, q) in a.terms() {
            match m.exponents() {
                [1, 0] => c[0] = q.clone(),
                [0, 1] => c[1] = q.clone(),
                _ => return None,
            }
        }
        Some(c)
    }
    fn from_linear(&self, c: &[Rational; 2]) -> Element {
        &self.s(0).scale(&c[0]) + &self.s(1).scale(&c[1])
    }
    fn is_equivariant(&self, f: &HomElement<Self>, source: &TorusRep, target: &TorusRep) -> bool {
        // the generators are invariant, so each monomial's coefficient matrix must intertwine
        let mut monomials: Vec<Monomial> = f.entries.iter().flat_map(|e| e.terms().map(|(m, _)| m.clone())).collect();
        monomials.sort();
        monomials.dedup();
        monomials.iter().all(|m| {
            let coeffs = Matrix::from_rows(
                (0..f.rows).map(|r| (0..f.cols).map(|c| f.entries[r * f.cols + c].coefficient(m)).collect()).collect(),
            );
            (1..=2).all(|g| target.action(g) * &coeffs == &coeffs * source.action(g))
        })
    }
}

/// A homogeneous matrix of ambient entries, a map `source → target` of the stated degree.
pub struct HomElement<A: Ambient> {
    pub rows: usize,
    pub cols: usize,
    pub degree: u32,
    pub entries: Vec<A::Entry>,
}

impl<A: Ambient> HomElement<A> {
    pub fn zero(amb: &A, rows: usize, cols: usize, degree: u32) -> Self {
        HomElement { rows, cols, degree, entries: vec![amb.zero(); rows * cols] }
    }

    pub fn identity(amb: &A, n: usize) -> Self {
        Self::from_matrix(amb, &Matrix::identity(n))
    }

    pub fn from_matrix(amb: &A, m: &Matrix) -> Self {
        HomElement { rows: m.rows(), cols: m.cols(), degree: 0, entries: m.entries().iter().map(|q| amb.scalar(q)).collect() }
    }

    pub fn from_entries(rows: usize, cols: usize, degree: u32, entries: Vec<A::Entry>) -> Self {
        assert_eq!(entries.len(), rows * cols);
        HomElement { rows, cols, degree, entries }
    }

    /// `Σᵢ Nᵢ ⊗ eᵢ` for the two degree-one generators.
    pub fn linear(amb: &A, n1: &Matrix, n2: &Matrix) -> Self {
        let entries = n1.entries().iter().zip(n2.entries()).map(|(a, b)| amb.from_linear(&[a.clone(), b.clone()])).collect();
        HomElement { rows: n1.rows(), cols: n1.cols(), degree: 1, entries }
    }

    pub fn get(&self, r: usize, c: usize) -> &A::Entry {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, e: A::Entry) {
        self.entries[r * self.cols + c] = e;
    }

    pub fn is_zero(&self, amb: &A) -> bool {
        self.entries.iter().all(|e| amb.is_zero(e))
    }

    /// Entries are homogeneous of the stated degree (zero entries allowed).
    pub fn is_homogeneous(&self, amb: &A) -> bool {
        self.entries.iter().all(|e| amb.is_zero(e) || amb.degree(e) == Some(self.degree))
    }

    pub fn add(&self, amb: &A, o: &Self) -> Result<Self, McError> {
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return Err(McError::Shape(format!("{}x{} + {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        let entries = self.entries.iter().zip(&o.entries).map(|(a, b)| amb.add(a, b)).collect();
        Ok(HomElement { rows: self.rows, cols: self.cols, degree: self.degree.max(o.degree), entries })
    }

    pub fn sub(&self, amb: &A, o: &Self) -> Result<Self, McError> {
        self.add(amb, &o.scale(amb, &-Rational::one()))
    }

    pub fn scale(&self, amb: &A, q: &Rational) -> Self {
        HomElement { entries: self.entries.iter().map(|e| amb.scale(e, q)).collect(), ..self.clone() }
    }

    /// Composite `self ∘ o`.
    pub fn compose(&self, amb: &A, o: &Self) -> Result<Self, McError> {
        if self.cols != o.rows {
            return Err(McError::Shape(format!("{}x{} * {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        let mut entries = Vec::with_capacity(self.rows * o.cols);
        for r in 0..self.rows {
            for c in 0..o.cols {
                let mut acc = amb.zero();
                for k in 0..self.cols {
                    let (a, b) = (self.get(r, k), o.get(k, c));
                    if !amb.is_zero(a) && !amb.is_zero(b) {
                        acc = amb.add(&acc, &amb.mul(a, b));
                    }
                }
                entries.push(acc);
            }
        }
        Ok(HomElement { rows: self.rows, cols: o.cols, degree: self.degree + o.degree, entries })
    }

    pub fn d(&self, amb: &A) -> Self {
        HomElement { rows: self.rows, cols: self.cols, degree: self.degree + 1, entries: self.entries.iter().map(|e| amb.d(e)).collect() }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let entries = (r0..r0 + rows).flat_map(|r| (c0..c0 + cols).map(move |c| (r, c))).map(|(r, c)| self.get(r, c).clone()).collect();
        HomElement { rows, cols, degree: self.degree, entries }
    }

    /// `[[a, b], [c, d]]` from four blocks.
    pub fn blocks(amb: &A, a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let (rows, cols) = (a.rows + c.rows, a.cols + b.cols);
        let mut out = Self::zero(amb, rows, cols, a.degree.max(b.degree).max(c.degree).max(d.degree));
        for (blk, r0, c0) in [(a, 0, 0), (b, 0, a.cols), (c, a.rows, 0), (d, a.rows, a.cols)] {
            for r in 0..blk.rows {
                for cc in 0..blk.cols {
                    out.set(r0 + r, c0 + cc, blk.get(r, cc).clone());
                }
            }
        }
        out
    }

    pub fn format(&self, amb: &A) -> Vec<Vec<String>> {
        (0..self.rows).map(|r| (0..self.cols).map(|c| amb.format(self.get(r, c))).collect()).collect()
    }

    /// `(N₁, N₂)` if every entry is a constant combination of the degree-one generators.
    pub fn linear_parts(&self, amb: &A) -> Option<(Matrix, Matrix)> {
        let mut n1 = Matrix::zeros(self.rows, self.cols);
        let mut n2 = Matrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let [a, b] = amb.linear_coefficients(self.get(r, c))?;
                n1[(r, c)] = a;
                n2[(r, c)] = b;
            }
        }
        Some((n1, n2))
    }

    /// Scalar matrix for a degree-0 element with constant entries.
    pub fn constant_matrix(&self, amb: &A) -> Option<Matrix>
    where
        A: ConstantPart,
    {
        let rows = (0..self.rows).map(|r| (0..self.cols).map(|c| amb.constant_part(self.get(r, c))).collect::<Option<Vec<_>>>()).collect::<Option<Vec<_>>>()?;
        Some(Matrix::from_rows(rows))
    }
}

/// Degree-0 constants of an ambient.
pub trait ConstantPart: Ambient {
    fn constant_part(&self, a: &Self::Entry) -> Option<Rational>;
}

impl ConstantPart for FormsOnSquare {
    fn constant_part(&self, a: &SquareForm) -> Option<Rational> {
        let p = self.poly(a, 0);
        if a.terms().count() > usize::from(!p.is_zero()) || p.degree().unwrap_or(0) > 0 {
            return None;
        }
        Some(p.constant_term())
    }
}

impl HomElement<FormsOnSquare> {
    /// Evaluation of a degree-0 element at a point of the square.
    pub fn evaluate(&self, amb: &FormsOnSquare, t: &[Rational; 2]) -> Matrix {
        Matrix::from_rows((0..self.rows).map(|r| (0..self.cols).map(|c| amb.poly(self.get(r, c), 0).evaluate(t)).collect()).collect())
    }

    /// Determinant of a degree-0 element as a polynomial.
    pub fn determinant(&self, amb: &FormsOnSquare) -> Poly2 {
        let m: Vec<Vec<Poly2>> = (0..self.rows).map(|r| (0..self.cols).map(|c| amb.poly(self.get(r, c), 0)).collect()).collect();
        poly_det(&m)
    }

    /// Degree-0 polynomial matrices are invertible iff the determinant is a nonzero constant.
    pub fn is_invertible(&self, amb: &FormsOnSquare) -> bool {
        let det = self.determinant(amb);
        self.degree == 0 && self.rows == self.cols && det.degree() == Some(0)
    }

    /// Inverse of an invertible degree-0 polynomial matrix, by the adjugate.
    pub fn inverse(&self, amb: &FormsOnSquare) -> Result<Self, McError> {
        if !self.is_invertible(amb) {
            return Err(McError::NotInvertible);
        }
        let n = self.rows;
        let det_inv = Rational::one() / self.determinant(amb).constant_term();
        let m: Vec<Vec<Poly2>> = (0..n).map(|r| (0..n).map(|c| amb.poly(self.get(r, c), 0)).collect()).collect();
        let mut out = Self::zero(amb, n, n, 0);
        for r in 0..n {
            for c in 0..n {
                let minor: Vec<Vec<Poly2>> = (0..n)
                    .filter(|&i| i != c)
                    .map(|i| (0..n).filter(|&j| j != r).map(|j| m[i][j].clone()).collect())
                    .collect();
                let sign = if (r + c) % 2 == 0 { det_inv.clone() } else { -det_inv.clone() };
                out.set(r, c, amb.function(poly_det(&minor).scale(&sign)));
            }
        }
        Ok(out)
    }
}

fn poly_det(m: &[Vec<Poly2>]) -> Poly2 {
    match m.len() {
        0 => Poly2::one(),
        1 => m[0][0].clone(),
        n => {
            let mut acc = Poly2::zero();
            for c in 0..n {
                if m[0][c].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Poly2>> = m[1..].iter().map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, p)| p.clone()).collect()).collect();
                let term = &m[0][c] * &poly_det(&minor);
                acc = if c % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

/// A representation with a Maurer–Cartan twist `η` of degree one.
pub struct MCObject<A: Ambient> {
    pub base: TorusRep,
    pub eta: HomElement<A>,
}

impl<A: Ambient> Clone for HomElement<A> {
    fn clone(&self) -> Self {
        HomElement { rows: self.rows, cols: self.cols, degree: self.degree, entries: self.entries.clone() }
    }
}

impl<A: Ambient> PartialEq for HomElement<A> {
    fn eq(&self, o: &Self) -> bool {
        (self.rows, self.cols, self.degree) == (o.rows, o.cols, o.degree) && self.entries == o.entries
    }
}

impl<A: Ambient> Debug for HomElement<A> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HomElement").field("rows", &self.rows).field("cols", &self.cols).field("degree", &self.degree).field("entries", &self.entries).finish()
    }
}

impl<A: Ambient> Clone for MCObject<A> {
    fn clone(&self) -> Self {
        MCObject { base: self.base.clone(), eta: self.eta.clone() }
    }
}

impl<A: Ambient> PartialEq for MCObject<A> {
    fn eq(&self, o: &Self) -> bool {
        self.base == o.base && self.eta == o.eta
    }
}

impl<A: Ambient> Debug for MCObject<A> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MCObject").field("base", &self.base).field("eta", &self.eta).finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McReport {
    pub maurer_cartan: bool,
    pub equivariant: bool,
    pub homogeneous: bool,
}

impl McReport {
    pub fn passed(&self) -> bool {
        self.maurer_cartan && self.equivariant && self.homogeneous
    }
}

impl<A: Ambient> MCObject<A> {
    pub fn untwisted(amb: &A, base: TorusRep) -> Self {
        let n = base.dim();
        MCObject { base, eta: HomElement::zero(amb, n, n, 1) }
    }

    pub fn new(base: TorusRep, eta: HomElement<A>) -> Self {
        MCObject { base, eta }
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn mc_check(&self, amb: &A) -> McReport {
        let curvature = self.eta.d(amb).add(amb, &self.eta.compose(amb, &self.eta).expect("square")).expect("same shape");
        McReport {
            maurer_cartan: curvature.is_zero(amb),
            equivariant: amb.is_equivariant(&self.eta, &self.base, &self.base),
            homogeneous: self.eta.is_homogeneous(amb),
        }
    }

    pub fn to_json(&self, amb: &A) -> Value {
        let chars: Vec<[String; 2]> = (0..self.dim())
            .map(|i| [rational::format(&self.base.g1()[(i, i)]), rational::format(&self.base.g2()[(i, i)])])
            .collect();
        json!({ "characters": chars, "eta": self.eta.format(amb) })
    }
}

/// `d f + η′ f − (−1)^{|f|} f η` for `f: source → target`.
pub fn twisted_d<A: Ambient>(amb: &A, f: &HomElement<A>, source: &MCObject<A>, target: &MCObject<A>) -> Result<HomElement<A>, McError> {
    if f.cols != source.dim() || f.rows != target.dim() {
        return Err(McError::Shape(format!("{}x{} map from dim {} to dim {}", f.rows, f.cols, source.dim(), target.dim())));
    }
    let left = target.eta.compose(amb, f)?;
    let right = f.compose(amb, &source.eta)?;
    let right = if f.degree % 2 == 0 { right } else { right.scale(amb, &-Rational::one()) };
    let mut out = f.d(amb).add(amb, &left)?.sub(amb, &right)?;
    out.degree = f.degree + 1;
    Ok(out)
}

/// `top → middle → bottom` with `p`, `q` cocycles and `qp = 0`.
#[derive(Clone, Debug)]
pub struct Extension<A: Ambient> {
    pub top: MCObject<A>,
    pub middle: MCObject<A>,
    pub bottom: MCObject<A>,
    pub p: HomElement<A>,
    pub q: HomElement<A>,
}

/// `α: middle → top`, `β: bottom → middle` with `αβ = 0`, `αp = 1`, `qβ = 1`, `pα + βq = 1`.
#[derive(Clone, Debug)]
pub struct Splitting<A: Ambient> {
    pub alpha: HomElement<A>,
    pub beta: HomElement<A>,
}

impl<A: Ambient> Extension<A> {
    /// Checks the cocycle and exactness conditions on `p`, `q`.
    pub fn is_valid(&self, amb: &A) -> bool {
        let zero = |h: Result<HomElement<A>, McError>| h.map(|h| h.is_zero(amb)).unwrap_or(false);
        zero(twisted_d(amb, &self.p, &self.top, &self.middle))
            && zero(twisted_d(amb, &self.q, &self.middle, &self.bottom))
            && zero(self.q.compose(amb, &self.p))
            && amb.is_equivariant(&self.p, &self.top.base, &self.middle.base)
            && amb.is_equivariant(&self.q, &self.middle.base, &self.bottom.base)
    }

    pub fn splitting_holds(&self, amb: &A, s: &Splitting<A>) -> bool {
        let is = |h: Result<HomElement<A>, McError>, n: usize| h.map(|h| h == HomElement::identity(amb, n)).unwrap_or(false);
        let ab = s.alpha.compose(amb, &s.beta).map(|h| h.is_zero(amb)).unwrap_or(false);
        let sum = self.p.compose(amb, &s.alpha).and_then(|pa| pa.add(amb, &s.beta.compose(amb, &self.q)?));
        ab && is(s.alpha.compose(amb, &self.p), self.top.dim())
            && is(self.q.compose(amb, &s.beta), self.bottom.dim())
            && is(sum, self.middle.dim())
            && amb.is_equivariant(&s.alpha, &self.middle.base, &self.top.base)
            && amb.is_equivariant(&s.beta, &self.bottom.base, &self.middle.base)
    }
}

fn inclusion_projection<A: Ambient>(amb: &A, top: usize, bottom: usize) -> [HomElement<A>; 4] {
    let n = top + bottom;
    let mut p = Matrix::zeros(n, top);
    let mut a = Matrix::zeros(top, n);
    for i in 0..top {
        p[(i, i)] = Rational::one();
        a[(i, i)] = Rational::one();
    }
    let mut q = Matrix::zeros(bottom, n);
    let mut b = Matrix::zeros(n, bottom);
    for i in 0..bottom {
        q[(i, top + i)] = Rational::one();
        b[(top + i, i)] = Rational::one();
    }
    [p, q, a, b].map(|m| HomElement::from_matrix(amb, &m))
}

/// The extension `top → (top ⊕ bottom, [[η′, ω], [0, η]]) → bottom` with its obvious splitting.
pub fn build_extension<A: Ambient>(
    amb: &A,
    omega: &HomElement<A>,
    top: &MCObject<A>,
    bottom: &MCObject<A>,
) -> Result<(Extension<A>, Splitting<A>), McError> {
    if !twisted_d(amb, omega, bottom, top)?.is_zero(amb) || !amb.is_equivariant(omega, &bottom.base, &top.base) {
        return Err(McError::NotACocycle);
    }
    let lower = HomElement::zero(amb, bottom.dim(), top.dim(), 1);
    let eta = HomElement::blocks(amb, &top.eta, omega, &lower, &bottom.eta);
    let base = TorusRep::direct_sum(&top.base, &bottom.base);
    let middle = MCObject::new(base, eta);
    let [p, q, alpha, beta] = inclusion_projection(amb, top.dim(), bottom.dim());
    Ok((Extension { top: top.clone(), middle, bottom: bottom.clone(), p, q }, Splitting { alpha, beta }))
}

/// The degree-one cocycle `α ∘ dβ` in `Hom(bottom, top)`.
pub fn extension_class<A: Ambient>(amb: &A, e: &Extension<A>, s: &Splitting<A>) -> Result<HomElement<A>, McError> {
    let dbeta = twisted_d(amb, &s.beta, &e.bottom, &e.middle)?;
    s.alpha.compose(amb, &dbeta)
}

/// Unknown-coefficient bookkeeping for linear solves over polynomial forms.
struct FormSystem {
    rows: std::collections::BTreeMap<(u8, usize, u8, [u32; 2]), usize>,
    columns: Vec<Vec<(usize, Rational)>>,
}

impl FormSystem {
    fn new() -> Self {
        FormSystem { rows: Default::default(), columns: Vec::new() }
    }

    fn row(&mut self, key: (u8, usize, u8, [u32; 2])) -> usize {
        let n = self.rows.len();
        *self.rows.entry(key).or_insert(n)
    }

    fn flatten(&mut self, tag: u8, h: &HomElement<FormsOnSquare>) -> Vec<(usize, Rational)> {
        let mut out = Vec::new();
        for (idx, e) in h.entries.iter().enumerate() {
            for ((mask, _), p) in e.terms() {
                for (ex, c) in p.terms() {
                    out.push((self.row((tag, idx, *mask, *ex)), c.clone()));
                }
            }
        }
        out
    }

    fn flatten_interval(&mut self, tag: u8, v: &[IntervalForm]) -> Vec<(usize, Rational)> {
        let mut out = Vec::new();
        for (idx, e) in v.iter().enumerate() {
            for ((mask, _), p) in e.terms() {
                for (ex, c) in p.terms() {
                    out.push((self.row((tag, idx, *mask, [ex[0], 0])), c.clone()));
                }
            }
        }
        out
    }

    fn push_column(&mut self, entries: Vec<(usize, Rational)>) {
        self.columns.push(entries);
    }

    fn solve(&mut self, rhs: Vec<(usize, Rational)>) -> Option<Vec<Rational>> {
        let nrows = self.rows.len();
        let mut a = Matrix::zeros(nrows, self.columns.len());
        for (j, col) in self.columns.iter().enumerate() {
            for (i, c) in col {
                a[(*i, j)] += c;
            }
        }
        let mut b = vec![Rational::zero(); nrows];
        for (i, c) in rhs {
            b[i] += c;
        }
        a.solve(&b).map(|s| s.particular)
    }
}

/// Monomials `t₁ⁱt₂ʲ` with `i + j ≤ bound`, by increasing total degree.
fn monomials_up_to(bound: u32, include_constant: bool) -> Vec<[u32; 2]> {
    let start = if include_constant { 0 } else { 1 };
    (start..=bound).flat_map(|d| (0..=d).rev().map(move |i| [i, d - i])).collect()
}

/// Degree-0 polynomial chains `source → target` spanned entrywise by monomials of degree ≤ bound.
fn chain_basis(amb: &FormsOnSquare, rows: usize, cols: usize, bound: u32, include_constant: bool) -> Vec<HomElement<FormsOnSquare>> {
    let mut out = Vec::new();
    for ex in monomials_up_to(bound, include_constant) {
        for idx in 0..rows * cols {
            let mut h = HomElement::zero(amb, rows, cols, 0);
            h.entries[idx] = amb.function(Poly::monomial(ex, Rational::one()));
            out.push(h);
        }
    }
    out
}

fn combine(amb: &FormsOnSquare, basis: &[HomElement<FormsOnSquare>], coeffs: &[Rational], rows: usize, cols: usize, degree: u32) -> HomElement<FormsOnSquare> {
    let mut acc = HomElement::zero(amb, rows, cols, degree);
    for (b, c) in basis.iter().zip(coeffs) {
        if !c.is_zero() {
            acc = acc.add(amb, &b.scale(amb, c)).expect("same shape");
        }
    }
    acc.degree = degree;
    acc
}

/// A degree-0 section `γ: source → target` with `d_tw γ = target_form`, polynomial degree ≤ bound.
pub fn find_gamma(
    amb: &FormsOnSquare,
    rhs: &HomElement<FormsOnSquare>,
    source: &MCObject<FormsOnSquare>,
    target: &MCObject<FormsOnSquare>,
    bound: u32,
) -> Option<HomElement<FormsOnSquare>> {
    let (rows, cols) = (target.dim(), source.dim());
    let basis = chain_basis(amb, rows, cols, bound, true);
    let mut sys = FormSystem::new();
    for b in &basis {
        let mut col = sys.flatten(0, &twisted_d(amb, b, source, target).ok()?);
        let [r1, r2] = amb.section_residuals(b, &source.base, &target.base);
        col.extend(sys.flatten_interval(1, &r1));
        col.extend(sys.flatten_interval(2, &r2));
        sys.push_column(col);
    }
    let rhs = sys.flatten(0, rhs);
    let x = sys.solve(rhs)?;
    Some(combine(amb, &basis, &x, rows, cols, 0))
}

/// Periods `(∫_{σ₁} ω, ∫_{σ₂} ω)` of a degree-one form along the two edges through the base point.
pub fn periods(amb: &FormsOnSquare, omega: &HomElement<FormsOnSquare>) -> (Matrix, Matrix) {
    let integrate = |p: &Poly2, var: usize| -> Rational {
        p.terms().filter(|(e, _)| e[1 - var] == 0).fold(Rational::zero(), |acc, (e, c)| acc + c / rational::int(e[var] as i64 + 1))
    };
    let mat = |mask: u8, var: usize| {
        Matrix::from_rows((0..omega.rows).map(|r| (0..omega.cols).map(|c| integrate(&amb.poly(omega.get(r, c), mask), var)).collect()).collect())
    };
    (mat(1, 0), mat(2, 1))
}

/// The isomorphism `p₂α₁ + β₂q₁ − p₂γq₁` between extensions with the same class.
pub fn extension_iso(
    amb: &FormsOnSquare,
    e1: &(Extension<FormsOnSquare>, Splitting<FormsOnSquare>),
    e2: &(Extension<FormsOnSquare>, Splitting<FormsOnSquare>),
    bound: u32,
) -> Result<HomElement<FormsOnSquare>, McError> {
    let (x1, s1) = e1;
    let (x2, s2) = e2;
    let diff = extension_class(amb, x2, s2)?.sub(amb, &extension_class(amb, x1, s1)?)?;
    let gamma = match find_gamma(amb, &diff, &x1.bottom, &x1.top, bound) {
        Some(g) => g,
        None => return Err(classes_differ_or_bound(amb, &diff, &x1.bottom, &x1.top, bound)),
    };
    let iso = x2
        .p
        .compose(amb, &s1.alpha)?
        .add(amb, &s2.beta.compose(amb, &x1.q)?)?
        .sub(amb, &x2.p.compose(amb, &gamma)?.compose(amb, &x1.q)?)?;
    if !twisted_d(amb, &iso, &x1.middle, &x2.middle)?.is_zero(amb) || !amb.is_equivariant(&iso, &x1.middle.base, &x2.middle.base) {
        return Err(McError::NotACocycle);
    }
    if !iso.is_invertible(amb) {
        return Err(McError::NotInvertible);
    }
    Ok(iso)
}

/// Between untwisted objects a twisted-exact form has periods in the image of
/// `v ↦ ((g₁⁻¹ − 1)v, (g₂⁻¹ − 1)v)` for the hom representation; outside it the classes differ.
fn classes_differ_or_bound(amb: &FormsOnSquare, diff: &HomElement<FormsOnSquare>, source: &MCObject<FormsOnSquare>, target: &MCObject<FormsOnSquare>, bound: u32) -> McError {
    if !source.eta.is_zero(amb) || !target.eta.is_zero(amb) {
        return McError::NoGammaAtBound(bound);
    }
    let hom = TorusRep::hom(&source.base, &target.base);
    let n = hom.dim();
    let id = Matrix::identity(n);
    let inv = |g: u8| hom.action(g).invert().expect("valid representation");
    let image = (&inv(1) - &id).vstack(&(&inv(2) - &id));
    let (p1, p2) = periods(amb, diff);
    let v: Vec<Rational> = p1.entries().iter().chain(p2.entries()).cloned().collect();
    if image.solve(&v).is_some() {
        McError::NoGammaAtBound(bound)
    } else {
        let fmt = |m: &Matrix| serde_json::to_string(&m.to_strings()).unwrap_or_default();
        McError::ClassesDiffer(format!("{} and {}", fmt(&p1), fmt(&p2)))
    }
}

/// Triangular realization: the representation `[[r′ᵢ, −r′ᵢfᵢ], [0, rᵢ]]` on `V′ ⊕ V` with splitting
/// `α = [1, −(t₁f₁ + t₂f₂)]`, `β = ᵗ[t₁f₁ + t₂f₂, 1]`.
pub fn realize_rep(
    amb: &FormsOnSquare,
    top: &TorusRep,
    bottom: &TorusRep,
    f1: &Matrix,
    f2: &Matrix,
) -> Result<(TorusRep, Splitting<FormsOnSquare>), McError> {
    for (i, f) in [(1u8, f1), (2, f2)] {
        let j = 3 - i;
        let lhs = &(top.action(j) * f) * &bottom.action(j).invert().expect("valid representation");
        if &lhs != f {
            return Err(McError::NotEquivariant(i));
        }
    }
    let block = |i: u8, f: &Matrix| {
        let r = top.action(i);
        let mut m = Matrix::block_diag(r, bottom.action(i));
        m.set_block(0, r.cols(), &-&(r * f));
        m
    };
    let rep = TorusRep::new(block(1, f1), block(2, f2))?;
    let (nt, nb) = (top.dim(), bottom.dim());
    let b = HomElement::from_entries(
        nt,
        nb,
        0,
        f1.entries()
            .iter()
            .zip(f2.entries())
            .map(|(a, c)| amb.function(&Poly::var(0).scale(a) + &Poly::var(1).scale(c)))
            .collect(),
    );
    let id_t = HomElement::identity(amb, nt);
    let id_b = HomElement::identity(amb, nb);
    let alpha = HomElement::blocks(amb, &id_t, &b.scale(amb, &-Rational::one()), &HomElement::zero(amb, 0, nt, 0), &HomElement::zero(amb, 0, nb, 0));
    let beta = HomElement::blocks(amb, &b, &HomElement::zero(amb, nt, 0, 0), &id_b, &HomElement::zero(amb, nb, 0, 0));
    Ok((rep, Splitting { alpha, beta }))
}

/// `gᵢ = Dᵢ·exp(−Nᵢ)` for a constant twist `η = N₁e₁ + N₂e₂` over a diagonal base `D`.
pub fn realize_mc<A: Ambient>(amb: &A, o: &MCObject<A>) -> Result<TorusRep, McError> {
    let (n1, n2) = o.eta.linear_parts(amb).ok_or(McError::NonConstantCoefficients)?;
    if !o.mc_check(amb).passed() {
        return Err(McError::NotMaurerCartan);
    }
    let g1 = o.base.g1() * &(-&n1).exp_nilpotent();
    let g2 = o.base.g2() * &(-&n2).exp_nilpotent();
    Ok(TorusRep::new(g1, g2)?)
}

/// The isomorphism `exp(−t₁N₁ − t₂N₂)` from the realized representation (untwisted) to `o`.
pub fn realization_iso(amb: &FormsOnSquare, o: &MCObject<FormsOnSquare>) -> Result<HomElement<FormsOnSquare>, McError> {
    let (n1, n2) = o.eta.linear_parts(amb).ok_or(McError::NonConstantCoefficients)?;
    let n = o.dim();
    let x: Vec<Poly2> = n1.entries().iter().zip(n2.entries()).map(|(a, b)| -&(&Poly::var(0).scale(a) + &Poly::var(1).scale(b))).collect();
    // exp of a nilpotent polynomial matrix: Σ Xᵏ/k!
    let mut term: Vec<Poly2> = Matrix::identity(n).entries().iter().map(|q| Poly::constant(q.clone())).collect();
    let mut sum = term.clone();
    for k in 1..=n {
        let mut next = vec![Poly2::zero(); n * n];
        for r in 0..n {
            for c in 0..n {
                for m in 0..n {
                    next[r * n + c] = &next[r * n + c] + &(&term[r * n + m] * &x[m * n + c]);
                }
            }
        }
        term = next.iter().map(|p| p.scale(&(Rational::one() / rational::int(k as i64)))).collect();
        for (s, t) in sum.iter_mut().zip(&term) {
            *s = &*s + t;
        }
    }
    Ok(HomElement::from_entries(n, n, 0, sum.into_iter().map(|p| amb.function(p)).collect()))
}

/// Result of reducing a representation: the MC object over its semisimplification and an
/// isomorphism from the untwisted representation to it.
#[derive(Clone, Debug)]
pub struct RepToMc {
    pub object: MCObject<FormsOnSquare>,
    pub iso: HomElement<FormsOnSquare>,
    pub flag_basis: Matrix,
}

/// The splitting data `b = t₁u₁ + t₂u₂ + t₁t₂u₁₂` of the extension
/// `[[Aᵢ, Bᵢ], [0, cᵢ]]` of a character by a representation.
fn triangular_splitting(amb: &FormsOnSquare, a: &TorusRep, b: [&Matrix; 2], c: [&Rational; 2]) -> Result<HomElement<FormsOnSquare>, McError> {
    let inv = |i: u8| a.action(i).invert().expect("valid representation");
    let u1 = -&(&inv(1) * b[0]);
    let u2 = -&(&inv(2) * b[1]);
    let id = Matrix::identity(a.dim());
    let u12 = &(&inv(1).scale(c[0]) - &id) * &u2;
    if &(&inv(2).scale(c[1]) - &id) * &u1 != u12 {
        return Err(McError::NotEquivariant(2));
    }
    let entries = (0..a.dim())
        .map(|r| {
            let mut p = Poly::monomial([1, 0], u1[(r, 0)].clone());
            p.add_term([0, 1], u2[(r, 0)].clone());
            p.add_term([1, 1], u12[(r, 0)].clone());
            amb.function(p)
        })
        .collect();
    Ok(HomElement::from_entries(a.dim(), 1, 0, entries))
}

/// Reduces `r` to a semisimple base with a constant twist, one composition factor at a time.
pub fn rep_to_mc(amb: &FormsOnSquare, r: &TorusRep, bound: u32) -> Result<RepToMc, McError> {
    let ss = r.semisimplify()?;
    let tri = ss.triangular();
    let n = r.dim();
    let sub = |k: usize| TorusRep::new_unchecked(tri.g1().block(0, 0, k, k), tri.g2().block(0, 0, k, k));
    let char_rep = |k: usize| TorusRep::character(&ss.characters[k]);
    if n == 0 {
        return Ok(RepToMc { object: MCObject::untwisted(amb, TorusRep::trivial(0)), iso: HomElement::identity(amb, 0), flag_basis: ss.basis });
    }
    let mut object = MCObject::untwisted(amb, char_rep(0));
    let mut iso = HomElement::identity(amb, 1);
    for k in 1..n {
        let a = sub(k);
        let c = char_rep(k);
        let bcol = [tri.g1().block(0, k, k, 1), tri.g2().block(0, k, k, 1)];
        let cvals = [&ss.characters[k].g1, &ss.characters[k].g2];
        let b = triangular_splitting(amb, &a, [&bcol[0], &bcol[1]], cvals)?;
        let omega = b.d(amb);
        let pushed = iso.compose(amb, &omega)?;
        let c_obj = MCObject::untwisted(amb, c.clone());
        let deg = pushed.entries.iter().filter_map(SquareForm::form_degree_bound).max().unwrap_or(0);
        let effective = bound.max(deg + 1);
        let (gamma, kmat) = straighten(amb, &pushed, &c_obj, &object, effective, false)
            .or_else(|| straighten(amb, &pushed, &c_obj, &object, effective, true))
            .ok_or(McError::StraighteningFailedAtBound(effective))?;
        let zero_row = HomElement::zero(amb, 1, k, 1);
        let zero_corner = HomElement::zero(amb, 1, 1, 1);
        object = MCObject::new(TorusRep::direct_sum(&object.base, &c), HomElement::blocks(amb, &object.eta, &kmat, &zero_row, &zero_corner));
        let corner = iso.compose(amb, &b)?.scale(amb, &-Rational::one()).add(amb, &gamma)?;
        iso = HomElement::blocks(amb, &iso, &corner, &HomElement::zero(amb, 1, k, 0), &HomElement::identity(amb, 1));
    }
    let pinv = HomElement::from_matrix(amb, &ss.basis.invert().expect("flag basis is invertible"));
    let iso = iso.compose(amb, &pinv)?;
    Ok(RepToMc { object, iso, flag_basis: ss.basis })
}

/// Solves `ω − d_tw γ = K₁dt₁ + K₂dt₂` with `γ` a polynomial section and `K` constant,
/// supported where the source and target characters agree.
/// Without `with_constant`, `γ` vanishes at the origin; a nontrivial character between
/// source and target can force a nonzero value there.
fn straighten(
    amb: &FormsOnSquare,
    omega: &HomElement<FormsOnSquare>,
    source: &MCObject<FormsOnSquare>,
    target: &MCObject<FormsOnSquare>,
    bound: u32,
    with_constant: bool,
) -> Option<(HomElement<FormsOnSquare>, HomElement<FormsOnSquare>)> {
    let (rows, cols) = (target.dim(), source.dim());
    let gammas = chain_basis(amb, rows, cols, bound, with_constant);
    let mut ks = Vec::new();
    let same_char = |r: usize, c: usize| {
        (1..=2).all(|i: u8| target.base.action(i)[(r, r)] == source.base.action(i)[(c, c)])
    };
    for dt in 0..2 {
        for idx in (0..rows * cols).filter(|&idx| same_char(idx / cols, idx % cols)) {
            let mut h = HomElement::zero(amb, rows, cols, 1);
            h.entries[idx] = amb.dt(dt);
            ks.push(h);
        }
    }
    let mut sys = FormSystem::new();
    for g in &gammas {
        let mut col = sys.flatten(0, &twisted_d(amb, g, source, target).ok()?);
        let [r1, r2] = amb.section_residuals(g, &source.base, &target.base);
        col.extend(sys.flatten_interval(1, &r1));
        col.extend(sys.flatten_interval(2, &r2));
        sys.push_column(col);
    }
    for k in &ks {
        let col = sys.flatten(0, k);
        sys.push_column(col);
    }
    let rhs = sys.flatten(0, omega);
    let x = sys.solve(rhs)?;
    let gamma = combine(amb, &gammas, &x[..gammas.len()], rows, cols, 0);
    let kmat = combine(amb, &ks, &x[gammas.len()..], rows, cols, 1);
    Some((gamma, kmat))
}

/// Replaces `dtᵢ` by `sᵢ` in a constant twist.
pub fn mc_to_s(forms: &FormsOnSquare, s: &SAlgebra, o: &MCObject<FormsOnSquare>) -> Result<MCObject<SAlgebra>, McError> {
    let (n1, n2) = o.eta.linear_parts(forms).ok_or(McError::NonConstantCoefficients)?;
    let out = MCObject::new(o.base.clone(), HomElement::linear(s, &n1, &n2));
    if !out.mc_check(s).passed() {
        return Err(McError::NotMaurerCartan);
    }
    Ok(out)
}

/// Elementary matrix helper used by callers assembling twists.
pub fn unit_matrix(n: usize, r: usize, c: usize, value: Rational) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    m[(r, c)] = value;
    m
}
