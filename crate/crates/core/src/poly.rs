//! Sparse multivariate polynomial arithmetic over exact rationals.
//!
//! Polynomials are stored as maps from monomials to nonzero rational
//! coefficients. Variables are dense `usize` indices; a model's
//! [`ParameterSpace`](crate::model::ParameterSpace) assigns each index a rate
//! constant. Everything here is exact: coefficients are arbitrary-precision
//! rationals and no operation rounds.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational scalar used for every coefficient and evaluation.
pub type Rational = BigRational;

/// Dense variable index into a model's parameter list.
pub type Var = usize;

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational `n/d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    /// `evaluate` was called with a point that does not assign every
    /// variable appearing in the polynomial.
    #[error("no value assigned to variable {var} (point assigns {assigned} variables)")]
    MissingAssignment { var: Var, assigned: usize },
}

/// A power product of variables, kept sorted by variable index with all
/// exponents positive. The empty monomial is the constant 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_powers(mut powers: Vec<(Var, u32)>) -> Self {
        powers.retain(|&(_, e)| e > 0);
        powers.sort_unstable_by_key(|&(v, _)| v);
        powers.dedup_by(|later, earlier| {
            if later.0 == earlier.0 {
                earlier.1 += later.1;
                true
            } else {
                false
            }
        });
        Monomial(powers)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn powers(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn max_var(&self) -> Option<Var> {
        self.0.last().map(|&(v, _)| v)
    }

    /// Product of two monomials (exponents add).
    pub fn product(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(va, ea)), Some(&&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => {
                        out.push((va, ea));
                        a.next();
                    }
                    Ordering::Greater => {
                        out.push((vb, eb));
                        b.next();
                    }
                    Ordering::Equal => {
                        out.push((va, ea + eb));
                        a.next();
                        b.next();
                    }
                },
                (Some(&&p), None) => {
                    out.push(p);
                    a.next();
                }
                (None, Some(&&p)) => {
                    out.push(p);
                    b.next();
                }
                (None, None) => break,
            }
        }
        Monomial(out)
    }
}

/// Graded lexicographic order on the dense variable index: compare total
/// degree first, then the exponent vectors lexicographically (a higher
/// exponent on an earlier variable wins).
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| {
                let (mut a, mut b) = (self.0.iter().peekable(), other.0.iter().peekable());
                loop {
                    match (a.peek(), b.peek()) {
                        (None, None) => return Ordering::Equal,
                        (Some(_), None) => return Ordering::Greater,
                        (None, Some(_)) => return Ordering::Less,
                        (Some(&&(va, ea)), Some(&&(vb, eb))) => {
                            if va != vb {
                                // The side owning the earlier variable has a
                                // positive exponent where the other has zero.
                                return if va < vb {
                                    Ordering::Greater
                                } else {
                                    Ordering::Less
                                };
                            }
                            if ea != eb {
                                return ea.cmp(&eb);
                            }
                            a.next();
                            b.next();
                        }
                    }
                }
            })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Stored terms never have a zero coefficient; the zero polynomial is the
/// empty map. Values are immutable in practice: every operation returns a
/// fresh polynomial, so sharing across threads is safe. The derived ordering
/// is an arbitrary total order used only for deterministic sorting.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly::default()
    }

    pub fn one() -> Self {
        MultiPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = MultiPoly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn from_int(n: i64) -> Self {
        MultiPoly::constant(rat_int(n))
    }

    /// The polynomial consisting of the single variable `v`.
    pub fn var(v: Var) -> Self {
        let mut p = MultiPoly::zero();
        p.add_term(Monomial::var(v), Rational::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Monomial::one())
                .is_some_and(|c| c.is_one())
    }

    /// True when the polynomial has no variables (including zero).
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .unwrap_or(0)
    }

    /// Largest variable index appearing in any term.
    pub fn max_var(&self) -> Option<Var> {
        self.terms.keys().filter_map(Monomial::max_var).max()
    }

    /// Terms in ascending canonical (graded lexicographic) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Adds `c·m` into the polynomial, merging like terms and dropping the
    /// entry if the merged coefficient is zero.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let merged = e.get() + &c;
                if merged.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = merged;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k * c))
                .collect(),
        }
    }

    /// Formal partial derivative with respect to `v`.
    pub fn partial_derivative(&self, v: Var) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let mut powers: Vec<(Var, u32)> = m.powers().to_vec();
            for p in powers.iter_mut() {
                if p.0 == v {
                    p.1 -= 1;
                }
            }
            out.add_term(
                Monomial::from_powers(powers),
                c * Rational::from_integer(BigInt::from(e)),
            );
        }
        out
    }

    /// Exact evaluation at a dense point: `point[v]` is the value of
    /// variable `v`. Errors if a term mentions a variable the point does not
    /// assign.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for &(v, e) in m.powers() {
                let val = point.get(v).ok_or(PolyError::MissingAssignment {
                    var: v,
                    assigned: point.len(),
                })?;
                term *= rat_pow(val, e);
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Renders the polynomial with `namer` supplying variable names, terms in
    /// descending canonical order, rational coefficients as `p/q`.
    pub fn to_text(&self, namer: &dyn Fn(Var) -> String) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mag = c.abs();
            let mono = monomial_text(m, namer);
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{} {}", mag, mono));
            }
        }
        out
    }
}

fn monomial_text(m: &Monomial, namer: &dyn Fn(Var) -> String) -> String {
    m.powers()
        .iter()
        .map(|&(v, e)| {
            if e == 1 {
                namer(v)
            } else {
                format!("{}^{}", namer(v), e)
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text(&|v| format!("x{}", v)))
    }
}

fn rat_pow(base: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= base;
    }
    acc
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.product(mb), ca * cb);
            }
        }
        out
    }
}

/// Minimal ring interface for the shared determinant routine.
pub trait Ring: Clone {
    fn ring_zero() -> Self;
    fn ring_one() -> Self;
    fn ring_is_zero(&self) -> bool;
    fn ring_add(&self, other: &Self) -> Self;
    fn ring_mul(&self, other: &Self) -> Self;
    fn ring_neg(&self) -> Self;
}

impl Ring for MultiPoly {
    fn ring_zero() -> Self {
        MultiPoly::zero()
    }
    fn ring_one() -> Self {
        MultiPoly::one()
    }
    fn ring_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn ring_add(&self, other: &Self) -> Self {
        self + other
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn ring_neg(&self) -> Self {
        -self
    }
}

/// Exact determinant by Laplace expansion along rows, memoized on the set of
/// remaining columns. The matrices this library meets are sparse (band plus a
/// few corner entries), so minor reuse beats fraction-free elimination at the
/// sizes involved (n <= 12).
pub fn det_laplace<T: Ring>(mat: &[Vec<T>]) -> T {
    let n = mat.len();
    assert!(n <= 32, "determinant limited to 32x32 matrices");
    for row in mat {
        assert_eq!(row.len(), n, "determinant requires a square matrix");
    }
    if n == 0 {
        return T::ring_one();
    }
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut memo: HashMap<u32, T> = HashMap::new();
    det_minor(mat, n, full, &mut memo)
}

fn det_minor<T: Ring>(mat: &[Vec<T>], n: usize, mask: u32, memo: &mut HashMap<u32, T>) -> T {
    if mask == 0 {
        return T::ring_one();
    }
    if let Some(hit) = memo.get(&mask) {
        return hit.clone();
    }
    let row = n - mask.count_ones() as usize;
    let mut acc = T::ring_zero();
    let mut sign_flip = false;
    for col in 0..n {
        if mask & (1 << col) == 0 {
            continue;
        }
        let entry = &mat[row][col];
        if !entry.ring_is_zero() {
            let sub = det_minor(mat, n, mask & !(1 << col), memo);
            let contrib = entry.ring_mul(&sub);
            acc = if sign_flip {
                acc.ring_add(&contrib.ring_neg())
            } else {
                acc.ring_add(&contrib)
            };
        }
        sign_flip = !sign_flip;
    }
    memo.insert(mask, acc.clone());
    acc
}

/// The `m`-th elementary symmetric polynomial of the given entries (which may
/// themselves be polynomials, e.g. sums of an edge and a leak parameter).
///
/// Computed by the one-pass convolution recurrence rather than subset
/// enumeration. By convention the result is 1 for `m == 0`, and 0 when
/// `m > items.len()`.
pub fn elementary_symmetric(items: &[MultiPoly], m: usize) -> MultiPoly {
    let mut e: Vec<MultiPoly> = Vec::with_capacity(m + 1);
    e.push(MultiPoly::one());
    for _ in 0..m {
        e.push(MultiPoly::zero());
    }
    for item in items {
        for j in (1..=m.min(e.len() - 1)).rev() {
            let bump = &e[j - 1] * item;
            e[j] = &e[j] + &bump;
        }
    }
    e.pop().unwrap_or_else(MultiPoly::one)
}

/// Checks that the Jacobian of the elementary symmetric polynomials
/// `(e_1, ..., e_n)` on `n` variables has symbolic determinant equal, up to
/// sign, to the Vandermonde polynomial `prod_{i<j} (x_i - x_j)`.
pub fn vandermonde_check(n: usize) -> bool {
    let vars: Vec<MultiPoly> = (0..n).map(MultiPoly::var).collect();
    let jac: Vec<Vec<MultiPoly>> = (1..=n)
        .map(|m| {
            let em = elementary_symmetric(&vars, m);
            (0..n).map(|i| em.partial_derivative(i)).collect()
        })
        .collect();
    let det = det_laplace(&jac);
    let mut vandermonde = MultiPoly::one();
    for i in 0..n {
        for j in (i + 1)..n {
            let diff = &MultiPoly::var(i) - &MultiPoly::var(j);
            vandermonde = &vandermonde * &diff;
        }
    }
    det == vandermonde || det == -&vandermonde
}
