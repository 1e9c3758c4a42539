//! Input-output equations and the coefficient map.
//!
//! For a model with compartmental matrix `A`, the input-output equation for
//! output `i` is `det(dI - A) y_i = sum_{j in In} (-1)^{i+j}
//! det((dI - A)_{ji}) u_j`, where `dI` is the diagonal matrix of the
//! differential operator `s = d/dt` and `(B)_{ji}` removes row `j` and
//! column `i`. The coefficient map collects the non-monic, not identically
//! zero coefficients of these equations in a fixed order; its Jacobian rank
//! decides identifiability.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::model::{ModelSpec, ParameterSpace};
use crate::poly::{det_laplace, MultiPoly, PolyError, Rational, Ring, Var};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IoeqError {
    #[error("compartment {output} is not an output of the model")]
    NotAnOutput { output: usize },
    #[error("model has no input; input-output equations require at least one")]
    NoInput,
}

/// Polynomial in the differential operator `s = d/dt` with [`MultiPoly`]
/// coefficients. `coeffs[p]` is the coefficient of `s^p`; the vector carries
/// no trailing zero entries, and the zero polynomial is the empty vector.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SPoly {
    coeffs: Vec<MultiPoly>,
}

impl SPoly {
    pub fn zero() -> Self {
        SPoly::default()
    }

    pub fn one() -> Self {
        SPoly::constant(MultiPoly::one())
    }

    pub fn constant(c: MultiPoly) -> Self {
        SPoly::from_coeffs(vec![c])
    }

    /// The monomial `s`.
    pub fn s() -> Self {
        SPoly::from_coeffs(vec![MultiPoly::zero(), MultiPoly::one()])
    }

    /// Builds from `coeffs[p] = coefficient of s^p`, trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<MultiPoly>) -> Self {
        while coeffs.last().is_some_and(MultiPoly::is_zero) {
            coeffs.pop();
        }
        SPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in `s`, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[MultiPoly] {
        &self.coeffs
    }

    /// Coefficient of `s^p` (zero when `p` exceeds the degree).
    pub fn coeff(&self, p: usize) -> MultiPoly {
        self.coeffs.get(p).cloned().unwrap_or_else(MultiPoly::zero)
    }

    pub fn add(&self, other: &SPoly) -> SPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(len);
        for p in 0..len {
            let a = self.coeffs.get(p);
            let b = other.coeffs.get(p);
            out.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => MultiPoly::zero(),
            });
        }
        SPoly::from_coeffs(out)
    }

    pub fn neg(&self) -> SPoly {
        SPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &SPoly) -> SPoly {
        if self.is_zero() || other.is_zero() {
            return SPoly::zero();
        }
        let mut out = vec![MultiPoly::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (p, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (q, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let prod = a * b;
                out[p + q] = &out[p + q] + &prod;
            }
        }
        SPoly::from_coeffs(out)
    }

    /// Exact evaluation with `s` specialized to a rational and every model
    /// parameter assigned by `point`.
    pub fn evaluate(&self, s: &Rational, point: &[Rational]) -> Result<Rational, PolyError> {
        let mut acc = Rational::from_integer(0.into());
        let mut s_pow = Rational::from_integer(1.into());
        for c in &self.coeffs {
            acc += c.evaluate(point)? * &s_pow;
            s_pow *= s;
        }
        Ok(acc)
    }

    /// Canonical text: powers of `s` descending, each coefficient rendered
    /// canonically and parenthesized when it has more than one term.
    pub fn to_text(&self, namer: &dyn Fn(Var) -> String) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        let mut first = true;
        for p in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[p];
            if c.is_zero() {
                continue;
            }
            let power = match p {
                0 => String::new(),
                1 => "s".to_string(),
                _ => format!("s^{}", p),
            };
            let (sign_negative, body) = if c.num_terms() == 1 {
                let text = c.to_text(namer);
                if let Some(stripped) = text.strip_prefix('-') {
                    (true, stripped.to_string())
                } else {
                    (false, text)
                }
            } else {
                (false, format!("({})", c.to_text(namer)))
            };
            let body = if power.is_empty() {
                body
            } else if body == "1" {
                power
            } else {
                format!("{} {}", body, power)
            };
            if first {
                if sign_negative {
                    out.push('-');
                }
                first = false;
            } else {
                out.push_str(if sign_negative { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

impl fmt::Display for SPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text(&|v| format!("x{}", v)))
    }
}

impl Ring for SPoly {
    fn ring_zero() -> Self {
        SPoly::zero()
    }
    fn ring_one() -> Self {
        SPoly::one()
    }
    fn ring_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn ring_add(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn ring_neg(&self) -> Self {
        self.neg()
    }
}

/// The matrix `dI - A`: diagonal entries `s - A_{ii}`, off-diagonal entries
/// `-A_{ij}`.
pub fn char_matrix(m: &ModelSpec, ps: &ParameterSpace) -> Vec<Vec<SPoly>> {
    let a = m.compartmental_matrix(ps);
    let n = m.n;
    let mut out = vec![vec![SPoly::zero(); n]; n];
    for (i, row) in a.into_iter().enumerate() {
        for (j, entry) in row.into_iter().enumerate() {
            out[i][j] = if i == j {
                SPoly::from_coeffs(vec![-&entry, MultiPoly::one()])
            } else {
                SPoly::constant(-&entry)
            };
        }
    }
    out
}

/// Exact determinant of a matrix over the operator-polynomial ring.
pub fn det_spoly(mat: &[Vec<SPoly>]) -> SPoly {
    det_laplace(mat)
}

fn minor(mat: &[Vec<SPoly>], drop_row: usize, drop_col: usize) -> Vec<Vec<SPoly>> {
    mat.iter()
        .enumerate()
        .filter(|&(r, _)| r != drop_row)
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|&(c, _)| c != drop_col)
                .map(|(_, e)| e.clone())
                .collect()
        })
        .collect()
}

/// One input-output equation: `lhs` applied to `y_output` equals, for each
/// input `j`, `rhs[j]` applied to `u_j` (the sign `(-1)^{i+j}` is folded into
/// `rhs[j]`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IOEquation {
    pub output: usize,
    pub lhs: SPoly,
    pub rhs: BTreeMap<usize, SPoly>,
}

impl IOEquation {
    pub fn to_text(&self, namer: &dyn Fn(Var) -> String) -> String {
        let rhs = self
            .rhs
            .iter()
            .map(|(j, p)| format!("({}) u{}", p.to_text(namer), j))
            .collect::<Vec<_>>()
            .join(" + ");
        format!("({}) y{} = {}", self.lhs.to_text(namer), self.output, rhs)
    }
}

/// Builds the input-output equation for output compartment `i`.
pub fn io_equation(m: &ModelSpec, ps: &ParameterSpace, i: usize) -> Result<IOEquation, IoeqError> {
    if !m.outputs.contains(&i) {
        return Err(IoeqError::NotAnOutput { output: i });
    }
    if m.inputs.is_empty() {
        return Err(IoeqError::NoInput);
    }
    let a = char_matrix(m, ps);
    let lhs = det_spoly(&a);
    let mut rhs = BTreeMap::new();
    for &j in &m.inputs {
        let sub = det_spoly(&minor(&a, j - 1, i - 1));
        let signed = if (i + j) % 2 == 0 { sub } else { sub.neg() };
        rhs.insert(j, signed);
    }
    Ok(IOEquation {
        output: i,
        lhs,
        rhs,
    })
}

/// Identifies one coefficient slot of an input-output equation: the output
/// it belongs to, the side (`input == None` is the left-hand side), and the
/// power of `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct CoeffLabel {
    pub output: usize,
    pub input: Option<usize>,
    pub s_power: usize,
}

impl fmt::Display for CoeffLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.input {
            None => write!(f, "y{}:s^{}", self.output, self.s_power),
            Some(j) => write!(f, "y{}:u{}:s^{}", self.output, j, self.s_power),
        }
    }
}

/// The coefficient map `c`: every non-monic, not identically zero
/// coefficient of every input-output equation, in a deterministic order
/// (outputs ascending; within an output the left-hand coefficients by
/// descending power of `s`, then each input's right-hand coefficients by
/// descending power). Slots that are identically zero are dropped from
/// `entries` but recorded in `dropped`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientMap {
    pub entries: Vec<(CoeffLabel, MultiPoly)>,
    pub dropped: Vec<CoeffLabel>,
}

impl CoefficientMap {
    /// The dimension `m` of the map's codomain.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn polys(&self) -> impl Iterator<Item = &MultiPoly> {
        self.entries.iter().map(|(_, p)| p)
    }

    pub fn labels(&self) -> impl Iterator<Item = &CoeffLabel> {
        self.entries.iter().map(|(l, _)| l)
    }
}

/// Extracts the coefficient map of a model from its input-output equations.
pub fn coefficient_map(m: &ModelSpec, ps: &ParameterSpace) -> Result<CoefficientMap, IoeqError> {
    let mut entries = Vec::new();
    let mut dropped = Vec::new();
    for &out in &m.outputs {
        let eq = io_equation(m, ps, out)?;
        let deg = eq.lhs.degree().unwrap_or(0);
        // Left-hand side: skip the monic leading coefficient of s^n.
        for p in (0..deg).rev() {
            let label = CoeffLabel {
                output: out,
                input: None,
                s_power: p,
            };
            let c = eq.lhs.coeff(p);
            if c.is_zero() {
                dropped.push(label);
            } else {
                entries.push((label, c));
            }
        }
        for (&j, op) in &eq.rhs {
            let rdeg = match op.degree() {
                Some(d) => d,
                None => continue,
            };
            for p in (0..=rdeg).rev() {
                let label = CoeffLabel {
                    output: out,
                    input: Some(j),
                    s_power: p,
                };
                let c = op.coeff(p);
                if c.is_zero() {
                    dropped.push(label);
                } else {
                    entries.push((label, c));
                }
            }
        }
    }
    Ok(CoefficientMap { entries, dropped })
}
