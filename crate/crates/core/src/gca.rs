//! Free graded-commutative differential algebras given by generators.
//!
//! A [`Monomial`] is an exponent vector in the global generator order; odd
//! generators square to zero and anticommute with each other. Each generator
//! carries a [`CharacterVector`] recording how ℤ×ℤ acts on it.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::error::ParseError;
use crate::expr::{self, Interpret};
use crate::qlinalg::rational::{self, Rational};
use crate::qlinalg::Matrix;

pub const DEFAULT_DEGREE_BOUND: u32 = 10;

/// Exponents of (a₁, b₁, a₂, b₂): `g₁` acts by `a₁^e₀ b₁^e₁`, `g₂` by `a₂^e₂ b₂^e₃`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CharacterVector(pub [i64; 4]);

impl CharacterVector {
    pub const TRIVIAL: CharacterVector = CharacterVector([0; 4]);

    pub fn is_trivial(&self) -> bool {
        self.0 == [0; 4]
    }

    pub fn scaled(&self, k: i64) -> CharacterVector {
        CharacterVector(self.0.map(|e| e * k))
    }

    /// Scalars by which `g₁` and `g₂` act for the given values of (a₁, b₁, a₂, b₂).
    pub fn evaluate(&self, params: &[Rational; 4]) -> (Rational, Rational) {
        let e = self.0;
        (
            rational::pow(&params[0], e[0]) * rational::pow(&params[1], e[1]),
            rational::pow(&params[2], e[2]) * rational::pow(&params[3], e[3]),
        )
    }
}

impl Add for CharacterVector {
    type Output = CharacterVector;
    fn add(self, rhs: CharacterVector) -> CharacterVector {
        CharacterVector([0, 1, 2, 3].map(|i| self.0[i] + rhs.0[i]))
    }
}

impl Neg for CharacterVector {
    type Output = CharacterVector;
    fn neg(self) -> CharacterVector {
        self.scaled(-1)
    }
}

impl fmt::Display for CharacterVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = self.0;
        write!(f, "({},{},{},{})", e[0], e[1], e[2], e[3])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn unit(ngens: usize) -> Self {
        Monomial(vec![0; ngens])
    }

    pub fn generator(ngens: usize, i: usize) -> Self {
        let mut m = Self::unit(ngens);
        m.0[i] = 1;
        m
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }
}

/// A finite linear combination of monomials with nonzero rational coefficients.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Element {
    terms: BTreeMap<Monomial, Rational>,
}

impl Element {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut e = Self::zero();
        e.add_term(m, c);
        e
    }

    pub fn scalar(ngens: usize, c: Rational) -> Self {
        Self::monomial(Monomial::unit(ngens), c)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, s: &Rational) -> Element {
        if s.is_zero() {
            return Element::zero();
        }
        Element { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect() }
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self + &(-rhs)
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("{}·{:?}", rational::format(c), m.0)).collect();
        write!(f, "[{}]", parts.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: u32,
    pub character: CharacterVector,
    pub differential: Element,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("generator {0:?} declared twice")]
    DuplicateGenerator(String),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("differential of {name} is not homogeneous of degree {expected}")]
    DifferentialDegree { name: String, expected: u32 },
    #[error("differential of {0} does not preserve its character")]
    DifferentialCharacter(String),
    #[error("d² ≠ 0 on generator {0}")]
    DSquaredNonzero(String),
    #[error("generators must have positive degree ({0})")]
    NonPositiveDegree(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Generators in a fixed global order, plus the degree bound for basis enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraPresentation {
    gens: Vec<GeneratorSpec>,
    bound: u32,
}

impl AlgebraPresentation {
    /// Generators with zero differentials; set them afterwards with [`Self::set_differential`].
    pub fn new(gens: &[(&str, u32, CharacterVector)]) -> Result<Self, AlgebraError> {
        let mut specs: Vec<GeneratorSpec> = Vec::new();
        for &(name, degree, character) in gens {
            if degree == 0 {
                return Err(AlgebraError::NonPositiveDegree(name.into()));
            }
            if specs.iter().any(|g| g.name == name) {
                return Err(AlgebraError::DuplicateGenerator(name.into()));
            }
            specs.push(GeneratorSpec { name: name.into(), degree, character, differential: Element::zero() });
        }
        Ok(AlgebraPresentation { gens: specs, bound: DEFAULT_DEGREE_BOUND })
    }

    /// The ground field ℚ as an algebra with no generators.
    pub fn scalars() -> Self {
        AlgebraPresentation { gens: Vec::new(), bound: DEFAULT_DEGREE_BOUND }
    }

    pub fn with_bound(mut self, bound: u32) -> Self {
        self.bound = bound;
        self
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.gens
    }

    pub fn ngens(&self) -> usize {
        self.gens.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn generator(&self, name: &str) -> Result<Element, AlgebraError> {
        let i = self.index_of(name).ok_or_else(|| AlgebraError::UnknownGenerator(name.into()))?;
        Ok(self.gen_element(i))
    }

    pub fn gen_element(&self, i: usize) -> Element {
        Element::monomial(Monomial::generator(self.ngens(), i), Rational::one())
    }

    pub fn one(&self) -> Element {
        Element::scalar(self.ngens(), Rational::one())
    }

    pub fn constant(&self, c: Rational) -> Element {
        Element::scalar(self.ngens(), c)
    }

    pub fn set_differential(&mut self, name: &str, d: Element) -> Result<(), AlgebraError> {
        let i = self.index_of(name).ok_or_else(|| AlgebraError::UnknownGenerator(name.into()))?;
        let expected = self.gens[i].degree + 1;
        if !d.is_zero() && self.homogeneous_degree(&d) != Some(expected) {
            return Err(AlgebraError::DifferentialDegree { name: name.into(), expected });
        }
        let ch = self.gens[i].character;
        if d.terms().any(|(m, _)| self.character_of(m) != ch) {
            return Err(AlgebraError::DifferentialCharacter(name.into()));
        }
        self.gens[i].differential = d;
        Ok(())
    }

    /// Parses a differential expression in the generators of this algebra.
    pub fn parse_element(&self, s: &str) -> Result<Element, AlgebraError> {
        Ok(expr::parse(s)?.eval(self)?)
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.gens[i].degree % 2 == 1
    }

    pub fn degree_of(&self, m: &Monomial) -> u32 {
        m.0.iter().zip(&self.gens).map(|(&e, g)| e * g.degree).sum()
    }

    pub fn homogeneous_degree(&self, x: &Element) -> Option<u32> {
        let mut degs = x.terms().map(|(m, _)| self.degree_of(m));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn character_of(&self, m: &Monomial) -> CharacterVector {
        m.0.iter()
            .zip(&self.gens)
            .fold(CharacterVector::TRIVIAL, |acc, (&e, g)| acc + g.character.scaled(e as i64))
    }

    /// Product of two monomials as `(monomial, sign)`, or `None` if it vanishes.
    pub fn multiply_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(Monomial, bool)> {
        let mut negative = false;
        let mut odd_in_a_after = 0u32;
        // walk from the back so that `odd_in_a_after` counts odd generators of `a` with larger index
        for j in (0..self.ngens()).rev() {
            if self.is_odd(j) {
                if b.0[j] > 0 {
                    if a.0[j] > 0 {
                        return None;
                    }
                    negative ^= odd_in_a_after % 2 == 1;
                }
                if a.0[j] > 0 {
                    odd_in_a_after += 1;
                }
            }
        }
        let exps = a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect();
        Some((Monomial(exps), negative))
    }

    pub fn multiply(&self, x: &Element, y: &Element) -> Element {
        let mut out = Element::zero();
        for (ma, ca) in x.terms() {
            for (mb, cb) in y.terms() {
                if let Some((m, neg)) = self.multiply_monomials(ma, mb) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    pub fn power(&self, x: &Element, k: u32) -> Element {
        (0..k).fold(self.one(), |acc, _| self.multiply(&acc, x))
    }

    /// Leibniz differential, with `d(g)` taken from the presentation.
    pub fn differential(&self, x: &Element) -> Element {
        let mut out = Element::zero();
        for (m, c) in x.terms() {
            let dm = self.differential_monomial(m);
            out = &out + &dm.scale(c);
        }
        out
    }

    fn differential_monomial(&self, m: &Monomial) -> Element {
        let n = self.ngens();
        let mut out = Element::zero();
        let mut prefix = Monomial::unit(n);
        let mut prefix_degree = 0;
        for k in 0..n {
            let e = m.0[k];
            if e == 0 {
                continue;
            }
            let dg = &self.gens[k].differential;
            if !dg.is_zero() {
                let mut suffix = m.clone();
                for i in 0..=k {
                    suffix.0[i] = 0;
                }
                let mut rest = Monomial::unit(n);
                rest.0[k] = e - 1;
                let middle = self.multiply(&Element::monomial(rest, rational::int(e as i64)), dg);
                let left = self.multiply(&Element::monomial(prefix.clone(), Rational::one()), &middle);
                let term = self.multiply(&left, &Element::monomial(suffix, Rational::one()));
                out = if prefix_degree % 2 == 1 { &out - &term } else { &out + &term };
            }
            prefix.0[k] = e;
            prefix_degree += e * self.gens[k].degree;
        }
        out
    }

    /// Monomials of total degree `n`, in descending lexicographic order of exponent vectors.
    pub fn enumerate_basis(&self, n: u32) -> Vec<Monomial> {
        assert!(n <= self.bound, "degree {n} exceeds the enumeration bound {}", self.bound);
        let mut out = Vec::new();
        let mut current = vec![0u32; self.ngens()];
        self.enumerate_rec(0, n, &mut current, &mut out);
        out.sort_by(|a, b| b.cmp(a));
        out
    }

    fn enumerate_rec(&self, i: usize, remaining: u32, current: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == self.ngens() {
            if remaining == 0 {
                out.push(Monomial(current.clone()));
            }
            return;
        }
        let deg = self.gens[i].degree;
        let max_e = if self.is_odd(i) { 1 } else { remaining / deg };
        for e in 0..=max_e.min(remaining / deg) {
            current[i] = e;
            self.enumerate_rec(i + 1, remaining - e * deg, current, out);
        }
        current[i] = 0;
    }

    /// Matrix of `d` from degree `n` to degree `n + 1` in [`Self::enumerate_basis`] order.
    pub fn differential_matrix(&self, n: u32) -> Matrix {
        assert!(n < self.bound, "degree {} exceeds the enumeration bound {}", n + 1, self.bound);
        let source = self.enumerate_basis(n);
        let target = self.enumerate_basis(n + 1);
        let index: HashMap<&Monomial, usize> = target.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut mat = Matrix::zeros(target.len(), source.len());
        for (j, m) in source.iter().enumerate() {
            let dm = self.differential(&Element::monomial(m.clone(), Rational::one()));
            for (t, c) in dm.terms() {
                mat[(index[t], j)] = c.clone();
            }
        }
        mat
    }

    /// Verifies `d(d(g)) = 0` for every generator and `d∘d = 0` degreewise up to the bound.
    pub fn check_d_squared(&self) -> Result<(), AlgebraError> {
        for (i, g) in self.gens.iter().enumerate() {
            if !self.differential(&self.differential(&self.gen_element(i))).is_zero() {
                return Err(AlgebraError::DSquaredNonzero(g.name.clone()));
            }
        }
        Ok(())
    }

    pub fn d_squared_zero_through(&self, top: u32) -> bool {
        (0..top.min(self.bound.saturating_sub(1))).all(|n| (&self.differential_matrix(n + 1) * &self.differential_matrix(n)).is_zero())
    }

    pub fn monomial_label(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .0
            .iter()
            .zip(&self.gens)
            .filter(|(&e, _)| e > 0)
            .map(|(&e, g)| if e == 1 { g.name.clone() } else { format!("{}^{}", g.name, e) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn format_element(&self, x: &Element) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let mut terms: Vec<(&Monomial, &Rational)> = x.terms().collect();
        terms.sort_by(|a, b| b.0.cmp(a.0));
        let mut s = String::new();
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let neg = c < &Rational::zero();
            let abs = if neg { -c } else { c.clone() };
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let label = self.monomial_label(m);
            if m.is_unit() {
                s.push_str(&rational::format(&abs));
            } else if abs.is_one() {
                s.push_str(&label);
            } else {
                s.push_str(&format!("{}*{}", rational::format(&abs), label));
            }
        }
        s
    }

    /// Parses the presentation text format, one generator per line:
    /// `name degree (e1,e2,e3,e4) dExpression`. Blank lines and `#` comments are skipped.
    /// Differentials may mention any generator of the file.
    pub fn parse(text: &str) -> Result<Self, AlgebraError> {
        let mut decls = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| AlgebraError::Parse(ParseError::syntax(lineno + 1, msg));
            let (name, rest) = line.split_once(char::is_whitespace).ok_or_else(|| err("expected a degree"))?;
            let rest = rest.trim_start();
            let (deg, rest) = rest.split_once(char::is_whitespace).ok_or_else(|| err("expected a character"))?;
            let degree: u32 = deg.parse().map_err(|_| err("bad degree"))?;
            let rest = rest.trim_start();
            let close = rest.find(')').ok_or_else(|| err("character must be (e1,e2,e3,e4)"))?;
            let ch = parse_character(&rest[..=close]).map_err(|_| err("character must be (e1,e2,e3,e4)"))?;
            let dexpr = rest[close + 1..].trim().to_string();
            if dexpr.is_empty() {
                return Err(err("missing differential (write 0 for a cocycle)"));
            }
            decls.push((name.to_string(), degree, ch, dexpr, lineno + 1));
        }
        let specs: Vec<(&str, u32, CharacterVector)> = decls.iter().map(|(n, d, c, _, _)| (n.as_str(), *d, *c)).collect();
        let mut p = Self::new(&specs)?;
        for (name, _, _, dexpr, lineno) in &decls {
            let d = p.parse_element(dexpr).map_err(|e| match e {
                AlgebraError::Parse(ParseError::Syntax { msg, .. }) => AlgebraError::Parse(ParseError::syntax(*lineno, msg)),
                other => other,
            })?;
            p.set_differential(name, d)?;
        }
        p.check_d_squared()?;
        Ok(p)
    }
}

pub fn parse_character(s: &str) -> Result<CharacterVector, ParseError> {
    let inner = s.trim().strip_prefix('(').and_then(|s| s.strip_suffix(')')).ok_or_else(|| ParseError::syntax(0, "expected (e1,e2,e3,e4)"))?;
    let parts: Vec<i64> = inner
        .split(',')
        .map(|p| p.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| ParseError::syntax(0, "bad character exponent"))?;
    let arr: [i64; 4] = parts.try_into().map_err(|_| ParseError::syntax(0, "character needs four exponents"))?;
    Ok(CharacterVector(arr))
}

impl Interpret for AlgebraPresentation {
    type Value = Element;
    fn constant(&self, q: &Rational) -> Element {
        Element::scalar(self.ngens(), q.clone())
    }
    fn symbol(&self, name: &str) -> Result<Element, ParseError> {
        self.generator(name).map_err(|_| ParseError::UnknownSymbol(name.into()))
    }
    fn add(&self, a: &Element, b: &Element) -> Element {
        a + b
    }
    fn mul(&self, a: &Element, b: &Element) -> Element {
        self.multiply(a, b)
    }
    fn neg(&self, a: &Element) -> Element {
        -a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TRIV: CharacterVector = CharacterVector::TRIVIAL;

    fn lambda_s() -> AlgebraPresentation {
        AlgebraPresentation::new(&[("s1", 1, TRIV), ("s2", 1, TRIV)]).unwrap()
    }

    fn lambda_z() -> AlgebraPresentation {
        AlgebraPresentation::parse(
            "x 3 (0,0,0,0) 0\n\
             y 3 (0,0,0,0) 0\n\
             z 3 (0,0,0,0) 0\n\
             w 6 (0,0,0,0) 0\n\
             u 5 (0,0,0,0) y*z\n",
        )
        .unwrap()
    }

    #[test]
    fn basis_of_exterior_algebra() {
        let p = lambda_s();
        let b1: Vec<String> = p.enumerate_basis(1).iter().map(|m| p.monomial_label(m)).collect();
        assert_eq!(b1, ["s1", "s2"]);
        assert!(p.enumerate_basis(3).is_empty());
        assert_eq!(p.enumerate_basis(2).len(), 1);
    }

    #[test]
    fn koszul_signs() {
        let p = lambda_s();
        let (s1, s2) = (p.generator("s1").unwrap(), p.generator("s2").unwrap());
        assert_eq!(p.format_element(&p.multiply(&s1, &s2)), "s1*s2");
        assert_eq!(p.format_element(&p.multiply(&s2, &s1)), "-s1*s2");
        assert!(p.multiply(&s1, &s1).is_zero());

        let z = lambda_z();
        let (y, zz, w) = (z.generator("y").unwrap(), z.generator("z").unwrap(), z.generator("w").unwrap());
        assert_eq!(z.format_element(&z.multiply(&zz, &y)), "-y*z");
        assert_eq!(z.format_element(&z.multiply(&w, &w)), "w^2");
    }

    #[test]
    fn leibniz_on_lambda_z() {
        let z = lambda_z();
        assert_eq!(z.format_element(&z.differential(&z.generator("u").unwrap())), "y*z");
        let dm = z.differential_matrix(5);
        assert_eq!(dm.cols(), 1);
        let target = z.enumerate_basis(6);
        let yz = z.parse_element("y*z").unwrap();
        let (m, _) = yz.terms().next().unwrap();
        let row = target.iter().position(|t| t == m).unwrap();
        assert_eq!(dm[(row, 0)], rational::int(1));
        assert_eq!(dm.column(0).iter().filter(|c| !c.is_zero()).count(), 1);
        assert!(z.d_squared_zero_through(9));
    }

    #[test]
    fn parse_errors() {
        assert!(AlgebraPresentation::parse("x 3 (0,0,0) 0").is_err());
        assert!(AlgebraPresentation::parse("x 3 (0,0,0,0) q").is_err());
        assert!(matches!(
            AlgebraPresentation::parse("x 3 (0,0,0,0) 0\nu 5 (0,0,0,0) x"),
            Err(AlgebraError::DifferentialDegree { .. })
        ));
        assert!(matches!(
            AlgebraPresentation::parse("x 3 (1,0,0,0) 0\ny 3 (0,0,0,0) 0\nu 5 (0,0,0,0) x*y"),
            Err(AlgebraError::DifferentialCharacter(_))
        ));
    }

    #[test]
    fn d_squared_violation_detected() {
        let mut p = AlgebraPresentation::new(&[("a", 1, TRIV), ("b", 2, TRIV), ("c", 3, TRIV)]).unwrap();
        p.set_differential("a", p.parse_element("b").unwrap()).unwrap();
        p.set_differential("b", p.parse_element("c").unwrap()).unwrap();
        assert_eq!(p.check_d_squared(), Err(AlgebraError::DSquaredNonzero("a".into())));
    }
}
