//! Finite-dimensional representations of ℤ×ℤ over ℚ.
//!
//! A representation is a pair of commuting invertible matrices, the actions of
//! the generators `g₁`, `g₂`. The module provides simultaneous triangularisation
//! (semi-simplification), hom/tensor/dual constructions, an isomorphism search
//! and the cellular cochain complex of the torus with twisted coefficients.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::complex::TwistedComplex;
use crate::error::ParseError;
use crate::qlinalg::rational::{self, Rational};
use crate::qlinalg::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("the actions of g1 and g2 do not commute")]
    NonCommuting,
    #[error("the action of g{0} is singular")]
    Singular(u8),
    #[error("g1 and g2 must be square matrices of the same size")]
    BadShape,
    #[error("no rational common eigenvector; the representation is not triangularisable over ℚ")]
    IrrationalSpectrum,
    #[error("intertwiners exist but no invertible one was found within the search budget")]
    InconclusiveSearch,
    #[error("representations have different dimensions ({0} vs {1})")]
    DimensionMismatch(usize, usize),
}

/// Scalars by which `g₁` and `g₂` act on a one-dimensional representation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharacterScalarPair {
    pub g1: Rational,
    pub g2: Rational,
}

impl CharacterScalarPair {
    pub fn new(g1: Rational, g2: Rational) -> Self {
        assert!(!g1.is_zero() && !g2.is_zero(), "character values must be nonzero");
        CharacterScalarPair { g1, g2 }
    }

    pub fn trivial() -> Self {
        Self::new(Rational::one(), Rational::one())
    }

    pub fn is_trivial(&self) -> bool {
        self.g1.is_one() && self.g2.is_one()
    }

    pub fn to_strings(&self) -> [String; 2] {
        [rational::format(&self.g1), rational::format(&self.g2)]
    }
}

impl Serialize for CharacterScalarPair {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusRep {
    g1: Matrix,
    g2: Matrix,
}

/// Simultaneous triangularisation `P⁻¹ gᵢ P = Dᵢ + nᵢ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiSimpleData {
    pub characters: Vec<CharacterScalarPair>,
    pub n1: Matrix,
    pub n2: Matrix,
    /// Columns form the flag basis `P`.
    pub basis: Matrix,
}

impl SemiSimpleData {
    pub fn diagonal(&self, i: u8) -> Matrix {
        let d: Vec<Rational> = self.characters.iter().map(|c| if i == 1 { c.g1.clone() } else { c.g2.clone() }).collect();
        Matrix::diagonal(&d)
    }

    /// `Dᵢ + nᵢ` in the flag basis.
    pub fn triangular(&self) -> TorusRep {
        TorusRep { g1: &self.diagonal(1) + &self.n1, g2: &self.diagonal(2) + &self.n2 }
    }
}

/// Why two representations were judged non-isomorphic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NonIsoCertificate {
    DimensionsDiffer,
    NoIntertwiners,
    RankInvariantDiffers { operator: String, left: usize, right: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoVerdict {
    Isomorphic(Matrix),
    NotIsomorphic(NonIsoCertificate),
}

const SWEEP_VALUES: [i64; 5] = [0, 1, -1, 2, -2];
const SWEEP_BUDGET: usize = 20_000;
const RANDOM_ATTEMPTS: usize = 256;
const RANDOM_SEED: u64 = 0x5eed_70_2025;

impl TorusRep {
    pub fn new(g1: Matrix, g2: Matrix) -> Result<Self, RepError> {
        let r = TorusRep { g1, g2 };
        r.validate()?;
        Ok(r)
    }

    /// Skips validation; used for intermediate constructions known to be valid.
    pub fn new_unchecked(g1: Matrix, g2: Matrix) -> Self {
        TorusRep { g1, g2 }
    }

    pub fn trivial(n: usize) -> Self {
        TorusRep { g1: Matrix::identity(n), g2: Matrix::identity(n) }
    }

    pub fn character(c: &CharacterScalarPair) -> Self {
        TorusRep { g1: Matrix::diagonal(&[c.g1.clone()]), g2: Matrix::diagonal(&[c.g2.clone()]) }
    }

    pub fn from_characters(chars: &[CharacterScalarPair]) -> Self {
        let d1: Vec<Rational> = chars.iter().map(|c| c.g1.clone()).collect();
        let d2: Vec<Rational> = chars.iter().map(|c| c.g2.clone()).collect();
        TorusRep { g1: Matrix::diagonal(&d1), g2: Matrix::diagonal(&d2) }
    }

    pub fn dim(&self) -> usize {
        self.g1.rows()
    }

    pub fn g1(&self) -> &Matrix {
        &self.g1
    }

    pub fn g2(&self) -> &Matrix {
        &self.g2
    }

    pub fn action(&self, i: u8) -> &Matrix {
        if i == 1 {
            &self.g1
        } else {
            &self.g2
        }
    }

    pub fn validate(&self) -> Result<(), RepError> {
        let n = self.g1.rows();
        if !self.g1.is_square() || !self.g2.is_square() || self.g2.rows() != n {
            return Err(RepError::BadShape);
        }
        if !self.g1.commutes_with(&self.g2) {
            return Err(RepError::NonCommuting);
        }
        if self.g1.det().is_zero() {
            return Err(RepError::Singular(1));
        }
        if self.g2.det().is_zero() {
            return Err(RepError::Singular(2));
        }
        Ok(())
    }

    /// Change of basis: the representation `P⁻¹ gᵢ P`.
    pub fn conjugate(&self, p: &Matrix) -> TorusRep {
        let inv = p.invert().expect("conjugating matrix must be invertible");
        TorusRep { g1: &(&inv * &self.g1) * p, g2: &(&inv * &self.g2) * p }
    }

    pub fn semisimplify(&self) -> Result<SemiSimpleData, RepError> {
        let n = self.dim();
        let mut flag: Vec<Vec<Rational>> = Vec::new();
        while flag.len() < n {
            let complement = complete_basis(&flag, n);
            let full = Matrix::from_columns(&[flag.clone(), complement.clone()].concat(), n);
            let inv = full.invert().expect("flag extended to a basis");
            let k = flag.len();
            let h1 = (&(&inv * &self.g1) * &full).block(k, k, n - k, n - k);
            let h2 = (&(&inv * &self.g2) * &full).block(k, k, n - k, n - k);
            let y = common_eigenvector(&h1, &h2)?;
            let c = Matrix::from_columns(&complement, n);
            flag.push(c.apply(&y));
        }
        let basis = Matrix::from_columns(&flag, n);
        let tri = self.conjugate(&basis);
        let characters = (0..n).map(|i| CharacterScalarPair::new(tri.g1[(i, i)].clone(), tri.g2[(i, i)].clone())).collect();
        let strict = |m: &Matrix| {
            let mut s = m.clone();
            for i in 0..n {
                s[(i, i)] = Rational::zero();
            }
            s
        };
        Ok(SemiSimpleData { characters, n1: strict(&tri.g1), n2: strict(&tri.g2), basis })
    }

    /// `Hom(V, W)` with `gᵢ · f = w.gᵢ ∘ f ∘ v.gᵢ⁻¹`, on row-major vectorised `W.dim × V.dim` matrices.
    pub fn hom(v: &TorusRep, w: &TorusRep) -> TorusRep {
        let act = |i: u8| {
            let vinv = v.action(i).invert().expect("valid representation");
            w.action(i).kron(&vinv.transpose())
        };
        TorusRep { g1: act(1), g2: act(2) }
    }

    pub fn tensor(v: &TorusRep, w: &TorusRep) -> TorusRep {
        TorusRep { g1: v.g1.kron(&w.g1), g2: v.g2.kron(&w.g2) }
    }

    pub fn dual(&self) -> TorusRep {
        Self::hom(self, &TorusRep::trivial(1))
    }

    pub fn direct_sum(v: &TorusRep, w: &TorusRep) -> TorusRep {
        TorusRep { g1: Matrix::block_diag(&v.g1, &w.g1), g2: Matrix::block_diag(&v.g2, &w.g2) }
    }

    /// Cellular cochains of the torus with coefficients in this representation:
    /// `V → V ⊕ V → V`, `d⁰v = ((g₁−1)v, (g₂−1)v)`, `d¹(v₁, v₂) = (g₂−1)v₁ − (g₁−1)v₂`.
    pub fn cellular_complex(&self) -> TwistedComplex {
        let n = self.dim();
        let id = Matrix::identity(n);
        let a1 = &self.g1 - &id;
        let a2 = &self.g2 - &id;
        let d0 = a1.vstack(&a2);
        let d1 = a2.hstack(&-&a1);
        let labels = |prefix: &str| (0..n).map(|i| format!("{prefix}e{}", i + 1)).collect::<Vec<_>>();
        let bases = vec![labels(""), [labels("σ1⊗"), labels("σ2⊗")].concat(), labels("τ⊗"), Vec::new()];
        TwistedComplex::new(bases, vec![d0, d1, Matrix::zeros(0, n)]).expect("commuting actions give d² = 0")
    }

    /// Betti numbers of the torus with these coefficients, via the cellular complex.
    pub fn cellular_betti(&self) -> Vec<usize> {
        self.cellular_complex().betti(0..3).expect("degrees 0..2 are complete")
    }

    /// Finds `T` with `T·v.gᵢ = w.gᵢ·T` for `i = 1, 2`, or a certificate that none exists.
    pub fn isomorphism(v: &TorusRep, w: &TorusRep) -> Result<IsoVerdict, RepError> {
        if v.dim() != w.dim() {
            return Ok(IsoVerdict::NotIsomorphic(NonIsoCertificate::DimensionsDiffer));
        }
        let n = v.dim();
        if n == 0 {
            return Ok(IsoVerdict::Isomorphic(Matrix::identity(0)));
        }
        let id = Matrix::identity(n);
        // vec(T A) = (I ⊗ Aᵀ) vec T, vec(B T) = (B ⊗ I) vec T
        let eq = |i: u8| &id.kron(&v.action(i).transpose()) - &w.action(i).kron(&id);
        let system = eq(1).vstack(&eq(2));
        let kernel = system.kernel();
        if kernel.is_empty() {
            return Ok(IsoVerdict::NotIsomorphic(NonIsoCertificate::NoIntertwiners));
        }
        if let Some(cert) = rank_invariant_mismatch(v, w) {
            return Ok(IsoVerdict::NotIsomorphic(cert));
        }
        let to_matrix = |coeffs: &[Rational]| {
            let mut t = vec![Rational::zero(); n * n];
            for (c, k) in coeffs.iter().zip(&kernel) {
                if c.is_zero() {
                    continue;
                }
                for (slot, x) in t.iter_mut().zip(k) {
                    *slot += c * x;
                }
            }
            Matrix::from_rows(t.chunks(n).map(<[Rational]>::to_vec).collect())
        };
        for coeffs in sweep(kernel.len()) {
            let t = to_matrix(&coeffs);
            if !t.det().is_zero() {
                return Ok(IsoVerdict::Isomorphic(t));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED);
        for _ in 0..RANDOM_ATTEMPTS {
            let coeffs: Vec<Rational> = (0..kernel.len()).map(|_| rational::int(rng.gen_range(-1000..=1000))).collect();
            let t = to_matrix(&coeffs);
            if !t.det().is_zero() {
                return Ok(IsoVerdict::Isomorphic(t));
            }
        }
        Err(RepError::InconclusiveSearch)
    }

    pub fn is_isomorphic(v: &TorusRep, w: &TorusRep) -> Result<Option<Matrix>, RepError> {
        Ok(match Self::isomorphism(v, w)? {
            IsoVerdict::Isomorphic(t) => Some(t),
            IsoVerdict::NotIsomorphic(_) => None,
        })
    }

    pub fn to_strings(&self) -> [Vec<Vec<String>>; 2] {
        [self.g1.to_strings(), self.g2.to_strings()]
    }

    /// Text format: the dimension, then two matrices as nested JSON arrays whose
    /// entries are `"p/q"` strings or integers.
    pub fn parse(text: &str) -> Result<Self, RepFileError> {
        let text = text.trim_start();
        let split = text.find(|c: char| c.is_whitespace()).unwrap_or(text.len());
        let dim: usize = text[..split].trim().parse().map_err(|_| ParseError::BadMatrix("first token must be the dimension".into()))?;
        let mut stream = serde_json::Deserializer::from_str(&text[split..]).into_iter::<serde_json::Value>();
        let mut next = |which: &str| -> Result<Matrix, ParseError> {
            let v = stream
                .next()
                .ok_or_else(|| ParseError::BadMatrix(format!("missing matrix for {which}")))?
                .map_err(|e| ParseError::BadMatrix(e.to_string()))?;
            parse_json_matrix(&v, dim)
        };
        let g1 = next("g1")?;
        let g2 = next("g2")?;
        Ok(TorusRep::new(g1, g2)?)
    }

    pub fn to_text(&self) -> String {
        let g = self.to_strings();
        format!(
            "{}\n{}\n{}\n",
            self.dim(),
            serde_json::to_string(&g[0]).expect("serialisable"),
            serde_json::to_string(&g[1]).expect("serialisable")
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepFileError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Rep(#[from] RepError),
}

pub fn parse_json_matrix(v: &serde_json::Value, dim: usize) -> Result<Matrix, ParseError> {
    let bad = |msg: &str| ParseError::BadMatrix(msg.to_string());
    let rows = v.as_array().ok_or_else(|| bad("matrix must be an array of rows"))?;
    if rows.len() != dim {
        return Err(bad(&format!("expected {dim} rows, found {}", rows.len())));
    }
    let mut out = Vec::with_capacity(dim);
    for row in rows {
        let row = row.as_array().ok_or_else(|| bad("row must be an array"))?;
        if row.len() != dim {
            return Err(bad(&format!("expected {dim} columns, found {}", row.len())));
        }
        let parsed: Result<Vec<Rational>, ParseError> = row
            .iter()
            .map(|x| match x {
                serde_json::Value::String(s) => rational::parse(s),
                serde_json::Value::Number(n) if n.is_i64() => Ok(rational::int(n.as_i64().unwrap())),
                other => Err(ParseError::BadRational(other.to_string())),
            })
            .collect();
        out.push(parsed?);
    }
    Ok(Matrix::from_rows(out))
}

/// Coefficient vectors over `SWEEP_VALUES`, fewest nonzero entries first.
fn sweep(m: usize) -> impl Iterator<Item = Vec<Rational>> {
    let mut all: Vec<Vec<usize>> = Vec::new();
    let mut cur = vec![0usize; m];
    let total = SWEEP_VALUES.len().checked_pow(m as u32).unwrap_or(usize::MAX).min(SWEEP_BUDGET);
    for _ in 0..total {
        all.push(cur.clone());
        // odometer increment, leftmost digit slowest
        for d in (0..m).rev() {
            cur[d] += 1;
            if cur[d] < SWEEP_VALUES.len() {
                break;
            }
            cur[d] = 0;
        }
    }
    all.sort_by_key(|c| c.iter().filter(|&&d| d != 0).count());
    all.into_iter().map(|c| c.into_iter().map(|d| rational::int(SWEEP_VALUES[d])).collect())
}

/// Extends linearly independent `flag` vectors to a basis with standard vectors, in index order.
fn complete_basis(flag: &[Vec<Rational>], n: usize) -> Vec<Vec<Rational>> {
    let mut chosen: Vec<Vec<Rational>> = flag.to_vec();
    let mut complement = Vec::new();
    for j in 0..n {
        if chosen.len() == n {
            break;
        }
        let mut e = vec![Rational::zero(); n];
        e[j] = Rational::one();
        chosen.push(e.clone());
        if Matrix::from_columns(&chosen, n).rank() == chosen.len() {
            complement.push(e);
        } else {
            chosen.pop();
        }
    }
    complement
}

fn common_eigenvector(h1: &Matrix, h2: &Matrix) -> Result<Vec<Rational>, RepError> {
    let m = h1.rows();
    // a standard vector that is already a common eigenvector keeps triangular inputs fixed
    for j in 0..m {
        let is_eigen = |h: &Matrix| (0..m).all(|i| i == j || h[(i, j)].is_zero());
        if is_eigen(h1) && is_eigen(h2) {
            let mut e = vec![Rational::zero(); m];
            e[j] = Rational::one();
            return Ok(e);
        }
    }
    for l1 in rational_roots(&charpoly(h1)) {
        let space = (h1 - &Matrix::identity(m).scale(&l1)).kernel();
        let b = Matrix::from_columns(&space, m);
        // matrix of h2 restricted to the (h2-stable) eigenspace: B X = h2 B
        let hb = h2 * &b;
        let cols: Vec<Vec<Rational>> = (0..space.len())
            .map(|j| b.solve(&hb.column(j)).expect("eigenspace of a commuting operator is stable").particular)
            .collect();
        let x = Matrix::from_columns(&cols, space.len());
        if let Some(l2) = rational_roots(&charpoly(&x)).into_iter().next() {
            let y = (&x - &Matrix::identity(space.len()).scale(&l2)).kernel().remove(0);
            return Ok(b.apply(&y));
        }
    }
    Err(RepError::IrrationalSpectrum)
}

/// Coefficients `[c₀, …, cₙ]` (cₙ = 1) of `det(λI − A)` by Faddeev–LeVerrier.
pub fn charpoly(a: &Matrix) -> Vec<Rational> {
    let n = a.rows();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut m = Matrix::zeros(n, n);
    let id = Matrix::identity(n);
    for k in 1..=n {
        m = &(a * &m) + &id.scale(&coeffs[n - k + 1]);
        let am = a * &m;
        let trace = (0..n).fold(Rational::zero(), |acc, i| acc + &am[(i, i)]);
        coeffs[n - k] = -trace / rational::int(k as i64);
    }
    coeffs
}

/// Distinct rational roots in ascending order, by the rational root theorem.
pub fn rational_roots(poly: &[Rational]) -> Vec<Rational> {
    let mut p: Vec<Rational> = poly.to_vec();
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    let mut roots = Vec::new();
    let lead_zeros = p.iter().take_while(|c| c.is_zero()).count();
    if lead_zeros > 0 && p.len() > 1 {
        roots.push(Rational::zero());
        p.drain(..lead_zeros);
    }
    if p.len() <= 1 {
        return roots;
    }
    let lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let a0 = ints[0].abs();
    let an = ints[ints.len() - 1].abs();
    let (Some(a0), Some(an)) = (a0.to_u64(), an.to_u64()) else {
        return roots;
    };
    let eval = |x: &Rational| p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c);
    for num in divisors(a0) {
        for den in divisors(an) {
            for sign in [1i64, -1] {
                let cand = Rational::new(BigInt::from(num) * sign, BigInt::from(den));
                if eval(&cand).is_zero() && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort();
    roots
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Compares ranks of `(g₁ − λ)^k (g₂ − μ)^l` over joint candidate eigenvalues.
fn rank_invariant_mismatch(v: &TorusRep, w: &TorusRep) -> Option<NonIsoCertificate> {
    let n = v.dim();
    let mut eig1 = rational_roots(&charpoly(&v.g1));
    eig1.extend(rational_roots(&charpoly(&w.g1)));
    eig1.sort();
    eig1.dedup();
    let mut eig2 = rational_roots(&charpoly(&v.g2));
    eig2.extend(rational_roots(&charpoly(&w.g2)));
    eig2.sort();
    eig2.dedup();
    let id = Matrix::identity(n);
    let op = |r: &TorusRep, l1: &Rational, k: u32, l2: &Rational, l: u32| {
        &(&r.g1 - &id.scale(l1)).pow(k) * &(&r.g2 - &id.scale(l2)).pow(l)
    };
    for l1 in &eig1 {
        for l2 in &eig2 {
            for k in 0..=n as u32 {
                for l in 0..=n as u32 {
                    if k == 0 && l == 0 {
                        continue;
                    }
                    let left = op(v, l1, k, l2, l).rank();
                    let right = op(w, l1, k, l2, l).rank();
                    if left != right {
                        let operator = format!(
                            "(g1 - {})^{k} (g2 - {})^{l}",
                            rational::format(l1),
                            rational::format(l2)
                        );
                        return Some(NonIsoCertificate::RankInvariantDiffers { operator, left, right });
                    }
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::rational::{frac, int};

    fn rep(g1: &[&[i64]], g2: &[&[i64]]) -> Result<TorusRep, RepError> {
        TorusRep::new(Matrix::from_i64(g1), Matrix::from_i64(g2))
    }

    fn chr(a: i64, b: i64) -> CharacterScalarPair {
        CharacterScalarPair::new(int(a), int(b))
    }

    #[test]
    fn validation() {
        assert!(TorusRep::trivial(2).validate().is_ok());
        assert_eq!(rep(&[&[1, 1], &[0, 1]], &[&[0, 1], &[1, 0]]), Err(RepError::NonCommuting));
        assert_eq!(rep(&[&[0, 0], &[0, 1]], &[&[1, 0], &[0, 1]]), Err(RepError::Singular(1)));
    }

    #[test]
    fn semisimplify_v1() {
        let v1 = rep(&[&[2, 3], &[0, 2]], &[&[1, 0], &[0, 1]]).unwrap();
        let ss = v1.semisimplify().unwrap();
        assert_eq!(ss.characters, vec![chr(2, 1), chr(2, 1)]);
        assert_eq!(ss.n1, Matrix::from_i64(&[&[0, 3], &[0, 0]]));
        assert!(ss.n2.is_zero());
        assert!(ss.basis.is_identity());
    }

    #[test]
    fn semisimplify_diagonal_and_irrational() {
        let d = rep(&[&[2, 0], &[0, 3]], &[&[5, 0], &[0, 1]]).unwrap();
        let ss = d.semisimplify().unwrap();
        assert!(ss.n1.is_zero() && ss.n2.is_zero() && ss.basis.is_identity());

        let rot = rep(&[&[0, -1], &[1, 0]], &[&[1, 0], &[0, 1]]).unwrap();
        assert_eq!(rot.semisimplify(), Err(RepError::IrrationalSpectrum));
    }

    #[test]
    fn semisimplify_lower_triangular() {
        let v = rep(&[&[2, 0], &[5, 3]], &[&[1, 0], &[0, 1]]).unwrap();
        let ss = v.semisimplify().unwrap();
        assert_eq!(v.conjugate(&ss.basis), ss.triangular());
        assert!(ss.triangular().g1().is_upper_triangular());
    }

    #[test]
    fn hom_tensor_dual() {
        let t = TorusRep::hom(&TorusRep::trivial(2), &TorusRep::trivial(3));
        assert_eq!(t, TorusRep::trivial(6));
        let d = TorusRep::character(&chr(2, -3)).dual();
        assert_eq!(d, TorusRep::character(&CharacterScalarPair::new(frac(1, 2), frac(-1, 3))));
        let p = TorusRep::tensor(&TorusRep::character(&chr(2, 1)), &TorusRep::character(&chr(3, 1)));
        assert_eq!(p, TorusRep::character(&chr(6, 1)));
    }

    #[test]
    fn cellular_betti_examples() {
        assert_eq!(TorusRep::trivial(1).cellular_betti(), vec![1, 2, 1]);
        assert_eq!(TorusRep::character(&chr(2, 1)).cellular_betti(), vec![0, 0, 0]);
        // unipotent V3 with c = 1, e = f = 1, h = 0
        let v3 = rep(&[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]], &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]).unwrap();
        let c = v3.cellular_complex();
        assert_eq!(c.differential(0).rank(), 2);
        assert_eq!(c.differential(1).rank(), 2);
        assert_eq!(v3.cellular_betti(), vec![1, 2, 1]);
    }

    #[test]
    fn isomorphism_examples() {
        let v = rep(&[&[2, 1], &[0, 2]], &[&[1, 0], &[0, 1]]).unwrap();
        assert!(TorusRep::is_isomorphic(&v, &v).unwrap().is_some());

        let g2 = Matrix::from_i64(&[&[5, 0, 0], &[0, 7, 0], &[0, 0, 5]]);
        let a = TorusRep::new(Matrix::from_i64(&[&[2, 0, 2], &[0, 3, 0], &[0, 0, 2]]), g2.clone()).unwrap();
        let b = TorusRep::new(Matrix::from_i64(&[&[2, 0, -2], &[0, 3, 0], &[0, 0, 2]]), g2).unwrap();
        let t = TorusRep::is_isomorphic(&a, &b).unwrap().unwrap();
        assert_eq!(&t * a.g1(), b.g1() * &t);
        assert_eq!(&t * a.g2(), b.g2() * &t);
        assert_eq!(t, Matrix::from_i64(&[&[-1, 0, 0], &[0, 1, 0], &[0, 0, 1]]));

        let c2 = TorusRep::character(&chr(2, 1));
        let c3 = TorusRep::character(&chr(3, 1));
        assert_eq!(
            TorusRep::isomorphism(&c2, &c3).unwrap(),
            IsoVerdict::NotIsomorphic(NonIsoCertificate::NoIntertwiners)
        );
    }

    #[test]
    fn jordan_type_certificate() {
        let j = rep(&[&[2, 1], &[0, 2]], &[&[1, 0], &[0, 1]]).unwrap();
        let d = rep(&[&[2, 0], &[0, 2]], &[&[1, 0], &[0, 1]]).unwrap();
        assert!(matches!(
            TorusRep::isomorphism(&j, &d).unwrap(),
            IsoVerdict::NotIsomorphic(NonIsoCertificate::RankInvariantDiffers { .. })
        ));
    }

    #[test]
    fn roots_and_charpoly() {
        let a = Matrix::from_i64(&[&[2, 1], &[0, 3]]);
        assert_eq!(charpoly(&a), vec![int(6), int(-5), int(1)]);
        assert_eq!(rational_roots(&charpoly(&a)), vec![int(2), int(3)]);
        // 2x² − x − 1 = (2x + 1)(x − 1)
        assert_eq!(rational_roots(&[int(-1), int(-1), int(2)]), vec![frac(-1, 2), int(1)]);
        assert!(rational_roots(&[int(1), int(0), int(1)]).is_empty());
    }

    #[test]
    fn text_format_roundtrip() {
        let v = rep(&[&[2, 3], &[0, 2]], &[&[1, 0], &[0, 1]]).unwrap();
        assert_eq!(TorusRep::parse(&v.to_text()).unwrap(), v);
        let r = TorusRep::parse("2\n[[\"1/2\", 0],[0, 1]]\n[[1,0],[0,1]]").unwrap();
        assert_eq!(r.g1()[(0, 0)], frac(1, 2));
        assert!(matches!(TorusRep::parse("2\n[[1,0]]"), Err(RepFileError::Parse(_))));
        assert!(matches!(
            TorusRep::parse("2\n[[1,1],[0,1]]\n[[0,1],[1,0]]"),
            Err(RepFileError::Rep(RepError::NonCommuting))
        ));
    }
}
