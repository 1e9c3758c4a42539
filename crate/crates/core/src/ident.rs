//! Generic local identifiability via the Jacobian of the coefficient map.
//!
//! A strongly connected model with at least one input is generically locally
//! identifiable exactly when the Jacobian of its coefficient map has rank
//! `|E| + |Leak|` at a generic parameter point. Rank is computed exactly
//! over the rationals at random integer points: a single full-rank witness
//! certifies generic full rank (rank is maximal on a Zariski-open set), while
//! a rank deficit across all sampled points is strong Monte Carlo evidence of
//! unidentifiability (by Schwartz-Zippel, a random point avoids the vanishing
//! locus of any one nonzero minor with high probability). Where a structural
//! argument applies -- more parameters than coefficients, or a dependent
//! column pattern among leak and edge columns of a cycle model -- the verdict
//! carries a machine-checked certificate and does not rely on sampling.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::ioeq::{coefficient_map, CoeffLabel, CoefficientMap, IoeqError};
use crate::model::{ModelSpec, ParameterSpace, ValidationError, VarId};
use crate::poly::{rat_int, MultiPoly, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IdentError {
    #[error(transparent)]
    Invalid(#[from] ValidationError),
    #[error("model is not strongly connected; the rank criterion is stated only for strongly connected models with at least one input")]
    NotStronglyConnected,
    #[error("model has no input; the rank criterion is stated only for strongly connected models with at least one input")]
    NoInput,
    #[error(transparent)]
    Ioeq(#[from] IoeqError),
    #[error("coefficient {entry} mentions variable index {var}, outside the {space}-parameter space")]
    UnhousedVariable {
        entry: String,
        var: usize,
        space: usize,
    },
}

/// Default upper bound for sampled integer coordinates.
pub const DEFAULT_SAMPLING_BOUND: i64 = 10_000;

/// Number of random evaluation trials used when the caller does not choose.
pub const DEFAULT_TRIALS: u32 = 5;

/// A machine-checked structural reason for a verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// More parameters than coefficient-map entries: the map cannot be
    /// finite-to-one, so the model is unidentifiable regardless of sampling.
    CountingBound {
        parameters: usize,
        coefficients: usize,
    },
    /// For a cycle model with output position `p` and two leaks at cyclic
    /// positions `>= p`: the Jacobian columns of each leak's rate constant
    /// and of the edge leaving its compartment differ in at most one row
    /// (`row`, when present) -- verified symbolically -- so the four columns
    /// are linearly dependent and the Jacobian cannot reach full rank.
    LeakPairDependence {
        leak_i: usize,
        leak_j: usize,
        row: Option<CoeffLabel>,
    },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::CountingBound { .. } => "counting-bound",
            Certificate::LeakPairDependence { .. } => "leak-pair-dependence",
        }
    }
}

/// The identifiability decision for one model.
///
/// Invariants: `identifiable` iff `generic_rank == required_rank`, and
/// `generic_rank <= min(num_coefficients, required_rank)`. When the counting
/// bound applies (`num_coefficients < required_rank`) no sampling happens:
/// `generic_rank` then reports the coefficient count, which the true generic
/// rank cannot exceed, `trials` is 0, and no witness is recorded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub identifiable: bool,
    /// True when the verdict is proved rather than sampled: a full-rank
    /// witness point for identifiable models, or a structural certificate
    /// for unidentifiable ones.
    pub certified: bool,
    pub generic_rank: usize,
    pub required_rank: usize,
    pub num_coefficients: usize,
    pub trials: u32,
    pub seed: u64,
    /// A sampled point achieving `generic_rank`, in parameter-space order.
    pub witness_point: Option<Vec<(VarId, Rational)>>,
    pub certificates: Vec<Certificate>,
}

/// Jacobian of the coefficient map: row per entry, column per parameter,
/// entry `(r, v)` the formal partial derivative of entry `r` with respect to
/// parameter `v`. Errors if an entry mentions a variable outside the space.
pub fn jacobian(
    c: &CoefficientMap,
    ps: &ParameterSpace,
) -> Result<Vec<Vec<MultiPoly>>, IdentError> {
    for (label, poly) in &c.entries {
        if let Some(v) = poly.max_var() {
            if v >= ps.len() {
                return Err(IdentError::UnhousedVariable {
                    entry: label.to_string(),
                    var: v,
                    space: ps.len(),
                });
            }
        }
    }
    Ok(c.entries
        .iter()
        .map(|(_, poly)| {
            (0..ps.len())
                .map(|v| poly.partial_derivative(v))
                .collect()
        })
        .collect())
}

/// Exact rank over the rationals by fraction-free (Bareiss) elimination.
///
/// Each row is scaled to integers first (scaling does not change rank); the
/// elimination then divides exactly by the previous pivot at every step, so
/// no pivot is ever lost to rounding.
pub fn exact_rank(mat: &[Vec<Rational>]) -> usize {
    let ints: Vec<Vec<BigInt>> = mat
        .iter()
        .map(|row| {
            let scale = row
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&scale / x.denom())).collect()
        })
        .collect();
    bareiss_rank(ints)
}

fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut rank = 0usize;
    let mut prev = BigInt::one();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot_row) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot_row);
        for r in (rank + 1)..rows {
            for c in (col + 1)..cols {
                let num = &m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c];
                debug_assert!((&num % &prev).is_zero(), "Bareiss division must be exact");
                m[r][c] = num / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Result of the randomized generic-rank estimate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankEstimate {
    /// Maximum exact rank observed; a sound lower bound for the generic rank
    /// and, when it equals `min(rows, cols)`, a proof of generic full rank.
    pub rank: usize,
    /// A point achieving `rank` (dense, parameter-space order).
    pub witness: Option<Vec<Rational>>,
    pub trials_run: u32,
}

/// Estimates the generic rank of a polynomial matrix by exact evaluation at
/// random integer points.
///
/// Coordinates are drawn uniformly from `[1, B]` (initially
/// [`DEFAULT_SAMPLING_BOUND`]) by a deterministic seeded generator; the
/// maximum rank over `trials` evaluations is returned with a witness point.
/// The sampled rank never exceeds the generic rank, and by Schwartz-Zippel it
/// falls below it only on the vanishing locus of some nonzero minor, so
/// independent trials miss simultaneously with vanishing probability. The
/// bound `B` is raised tenfold whenever two trials disagree on the rank, and
/// the run stops early once the rank cannot grow further.
pub fn generic_rank(jac: &[Vec<MultiPoly>], nvars: usize, trials: u32, seed: u64) -> RankEstimate {
    let rows = jac.len();
    let cols = if rows == 0 { 0 } else { jac[0].len() };
    let cap = rows.min(cols);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut bound = DEFAULT_SAMPLING_BOUND;
    let mut best = 0usize;
    let mut witness: Option<Vec<Rational>> = None;
    let mut prev_rank: Option<usize> = None;
    let mut trials_run = 0u32;
    for _ in 0..trials.max(1) {
        let point: Vec<Rational> = (0..nvars)
            .map(|_| rat_int(rng.random_range(1..=bound)))
            .collect();
        let evaluated: Vec<Vec<Rational>> = jac
            .iter()
            .map(|row| {
                row.iter()
                    .map(|p| p.evaluate(&point).expect("jacobian variables are housed"))
                    .collect()
            })
            .collect();
        let r = exact_rank(&evaluated);
        trials_run += 1;
        if r > best || witness.is_none() {
            best = r;
            witness = Some(point);
        }
        if prev_rank.is_some_and(|p| p != r) {
            bound = bound.saturating_mul(10);
        }
        prev_rank = Some(r);
        if best == cap {
            break;
        }
    }
    RankEstimate {
        rank: best,
        witness,
        trials_run,
    }
}

/// Deterministic per-model random stream: the user seed mixed with a hash of
/// the canonical model JSON, so concurrent analyses never share a stream and
/// identical `(model, seed)` pairs reproduce exactly.
pub fn stream_seed(m: &ModelSpec, seed: u64) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |b: u8| {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    };
    for b in m.to_canonical_json().bytes() {
        eat(b);
    }
    for b in seed.to_le_bytes() {
        eat(b);
    }
    h
}

/// Decides generic local identifiability.
///
/// The model must be valid, strongly connected, and have at least one input;
/// anything else is rejected rather than guessed at. The verdict is
/// `identifiable` exactly when the sampled generic rank reaches
/// `|E| + |Leak|`; structural certificates are attached whenever the
/// counting bound or the leak-pair column dependence applies.
pub fn decide(m: &ModelSpec, trials: u32, seed: u64) -> Result<Verdict, IdentError> {
    m.validate()?;
    if m.inputs.is_empty() {
        return Err(IdentError::NoInput);
    }
    if !m.is_strongly_connected() {
        return Err(IdentError::NotStronglyConnected);
    }
    let ps = ParameterSpace::for_model(m);
    let cmap = coefficient_map(m, &ps)?;
    let required = ps.len();
    let m_count = cmap.len();
    let jac = jacobian(&cmap, &ps)?;
    let mut certificates = leak_pair_certificates(m, &ps, &cmap, &jac);
    if m_count < required {
        certificates.insert(
            0,
            Certificate::CountingBound {
                parameters: required,
                coefficients: m_count,
            },
        );
        return Ok(Verdict {
            identifiable: false,
            certified: true,
            generic_rank: m_count,
            required_rank: required,
            num_coefficients: m_count,
            trials: 0,
            seed,
            witness_point: None,
            certificates,
        });
    }
    let est = generic_rank(&jac, required, trials, stream_seed(m, seed));
    let identifiable = est.rank == required;
    let certified = identifiable || !certificates.is_empty();
    let witness_point = est
        .witness
        .map(|pt| ps.vars().iter().copied().zip(pt).collect());
    Ok(Verdict {
        identifiable,
        certified,
        generic_rank: est.rank,
        required_rank: required,
        num_coefficients: m_count,
        trials,
        seed,
        witness_point,
        certificates,
    })
}

/// A model whose edge set is exactly one directed cycle through all
/// compartments, with a single input. Positions are 1-based along the cycle
/// starting from the input compartment.
#[derive(Debug, Clone)]
pub(crate) struct CycleStructure {
    /// `order[t]` is the original compartment at cyclic position `t + 1`.
    pub order: Vec<usize>,
}

impl CycleStructure {
    pub fn position(&self, comp: usize) -> Option<usize> {
        self.order.iter().position(|&v| v == comp).map(|t| t + 1)
    }
}

pub(crate) fn cycle_structure(m: &ModelSpec) -> Option<CycleStructure> {
    if m.n < 3 || m.inputs.len() != 1 || m.edges.len() != m.n {
        return None;
    }
    let mut succ = vec![0usize; m.n + 1];
    let mut indeg = vec![0usize; m.n + 1];
    for &(from, to) in &m.edges {
        if succ[from] != 0 {
            return None;
        }
        succ[from] = to;
        indeg[to] += 1;
    }
    if (1..=m.n).any(|v| succ[v] == 0 || indeg[v] != 1) {
        return None;
    }
    let start = *m.inputs.iter().next().expect("single input");
    let mut order = Vec::with_capacity(m.n);
    let mut cur = start;
    for _ in 0..m.n {
        order.push(cur);
        cur = succ[cur];
    }
    if cur != start || order.len() != m.n {
        return None;
    }
    let mut distinct: Vec<usize> = order.clone();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() != m.n {
        return None;
    }
    Some(CycleStructure { order })
}

/// For cycle models with a single output at position `p` and two leaks at
/// positions `>= p`, checks symbolically that for each such leak the
/// Jacobian column of the leak rate and the column of the edge leaving the
/// same compartment agree everywhere except possibly one shared row. Each
/// verified pair becomes a [`Certificate::LeakPairDependence`].
fn leak_pair_certificates(
    m: &ModelSpec,
    ps: &ParameterSpace,
    cmap: &CoefficientMap,
    jac: &[Vec<MultiPoly>],
) -> Vec<Certificate> {
    let Some(cyc) = cycle_structure(m) else {
        return Vec::new();
    };
    if m.outputs.len() != 1 {
        return Vec::new();
    }
    let out = *m.outputs.iter().next().expect("single output");
    let p = cyc.position(out).expect("output is a compartment");
    let mut qualifying: Vec<usize> = m
        .leaks
        .iter()
        .copied()
        .filter(|&c| cyc.position(c).expect("leak is a compartment") >= p)
        .collect();
    qualifying.sort_unstable_by_key(|&c| cyc.position(c));
    let mut certs = Vec::new();
    for a in 0..qualifying.len() {
        for b in (a + 1)..qualifying.len() {
            let (ci, cj) = (qualifying[a], qualifying[b]);
            let (Some(si), Some(sj)) = (
                column_difference_support(m, ps, &cyc, jac, ci),
                column_difference_support(m, ps, &cyc, jac, cj),
            ) else {
                continue;
            };
            let union: BTreeSet<usize> = si.union(&sj).copied().collect();
            if union.len() <= 1 {
                let row = union
                    .iter()
                    .next()
                    .map(|&r| cmap.entries[r].0);
                certs.push(Certificate::LeakPairDependence {
                    leak_i: ci,
                    leak_j: cj,
                    row,
                });
            }
        }
    }
    certs
}

/// Rows where the Jacobian column of the edge leaving `comp` differs from
/// the column of `comp`'s leak rate. `None` when the support has more than
/// one row (no certificate possible).
fn column_difference_support(
    m: &ModelSpec,
    ps: &ParameterSpace,
    cyc: &CycleStructure,
    jac: &[Vec<MultiPoly>],
    comp: usize,
) -> Option<BTreeSet<usize>> {
    let pos = cyc.position(comp).expect("compartment on cycle");
    let next = cyc.order[pos % m.n];
    let edge_col = ps.index_of(&VarId::edge(comp, next))?;
    let leak_col = ps.index_of(&VarId::leak(comp))?;
    let mut support = BTreeSet::new();
    for (r, row) in jac.iter().enumerate() {
        if row[edge_col] != row[leak_col] {
            support.insert(r);
            if support.len() > 1 {
                return None;
            }
        }
    }
    Some(support)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{cycle_edges, Family, FamilyGraph};
    use crate::ioeq::coefficient_map;
    use crate::poly::{det_laplace, elementary_symmetric, MultiPoly};

    fn cycle4() -> (ModelSpec, ParameterSpace) {
        let m = ModelSpec::new(4, cycle_edges(4), [1], [3], []);
        let ps = ParameterSpace::for_model(&m);
        (m, ps)
    }

    /// The factored determinant of the 4x4 Jacobian submatrix of the
    /// 4-cycle's first four coefficients:
    /// `-(k32-k21)(k14-k43)((k14-k32)(k32-k43) + k14 k21 - k21^2 - k21 k32 + k21 k43)`.
    fn cycle4_jacobian_det_formula(ps: &ParameterSpace) -> MultiPoly {
        let k21 = ps.poly(VarId::edge(1, 2));
        let k32 = ps.poly(VarId::edge(2, 3));
        let k43 = ps.poly(VarId::edge(3, 4));
        let k14 = ps.poly(VarId::edge(4, 1));
        let inner = &(&(&(&(&k14 - &k32) * &(&k32 - &k43)) + &(&k14 * &k21)) - &(&k21 * &k21))
            - &(&(&k21 * &k32) - &(&k21 * &k43));
        -&(&(&(&k32 - &k21) * &(&k14 - &k43)) * &inner)
    }

    #[test]
    fn jacobian_submatrix_determinant_matches_factored_form() {
        let (m, ps) = cycle4();
        let cmap = coefficient_map(&m, &ps).unwrap();
        let jac = jacobian(&cmap, &ps).unwrap();
        // First four rows: e1, e2, e3, kappa.
        let sub: Vec<Vec<MultiPoly>> = jac[..4].to_vec();
        let det = det_laplace(&sub);
        assert!(!det.is_zero());
        assert_eq!(det, cycle4_jacobian_det_formula(&ps));
    }

    #[test]
    fn evaluated_jacobian_rank_at_a_concrete_point() {
        let (m, ps) = cycle4();
        let cmap = coefficient_map(&m, &ps).unwrap();
        let jac = jacobian(&cmap, &ps).unwrap();
        let point = [rat_int(2), rat_int(3), rat_int(5), rat_int(7)];
        let formula = cycle4_jacobian_det_formula(&ps);
        assert_eq!(formula.evaluate(&point).unwrap(), rat_int(-12));
        let evaluated: Vec<Vec<Rational>> = jac
            .iter()
            .map(|row| row.iter().map(|p| p.evaluate(&point).unwrap()).collect())
            .collect();
        assert_eq!(exact_rank(&evaluated), 4);
    }

    #[test]
    fn jacobian_of_constant_map_is_zero() {
        let (_, ps) = cycle4();
        let cmap = crate::ioeq::CoefficientMap {
            entries: vec![(
                crate::ioeq::CoeffLabel {
                    output: 3,
                    input: None,
                    s_power: 0,
                },
                MultiPoly::from_int(5),
            )],
            dropped: vec![],
        };
        let jac = jacobian(&cmap, &ps).unwrap();
        assert!(jac[0].iter().all(MultiPoly::is_zero));
    }

    #[test]
    fn jacobian_rejects_unhoused_variables() {
        let (_, ps) = cycle4();
        let cmap = crate::ioeq::CoefficientMap {
            entries: vec![(
                crate::ioeq::CoeffLabel {
                    output: 3,
                    input: None,
                    s_power: 1,
                },
                MultiPoly::var(9),
            )],
            dropped: vec![],
        };
        assert!(matches!(
            jacobian(&cmap, &ps),
            Err(IdentError::UnhousedVariable { var: 9, .. })
        ));
    }

    #[test]
    fn exact_rank_basics() {
        let id3: Vec<Vec<Rational>> = (0..3)
            .map(|i| (0..3).map(|j| rat_int((i == j) as i64)).collect())
            .collect();
        assert_eq!(exact_rank(&id3), 3);
        let dependent = vec![
            vec![rat_int(1), rat_int(2)],
            vec![rat_int(2), rat_int(4)],
        ];
        assert_eq!(exact_rank(&dependent), 1);
        let with_fractions = vec![
            vec![crate::poly::rat(1, 2), crate::poly::rat(1, 3)],
            vec![crate::poly::rat(3, 2), rat_int(1)],
        ];
        assert_eq!(exact_rank(&with_fractions), 1);
        assert_eq!(exact_rank(&[]), 0);
        assert_eq!(exact_rank(&[vec![], vec![]]), 0);
    }

    #[test]
    fn generic_rank_basics() {
        let zero = vec![vec![MultiPoly::zero(); 3]; 2];
        let est = generic_rank(&zero, 3, 5, 1);
        assert_eq!(est.rank, 0);
        assert!(est.witness.is_some());
        // The elementary symmetric Jacobian has full generic rank.
        let n = 4;
        let vars: Vec<MultiPoly> = (0..n).map(MultiPoly::var).collect();
        let jac: Vec<Vec<MultiPoly>> = (1..=n)
            .map(|m| {
                let em = elementary_symmetric(&vars, m);
                (0..n).map(|i| em.partial_derivative(i)).collect()
            })
            .collect();
        assert_eq!(generic_rank(&jac, n, 5, 1).rank, n);
    }

    #[test]
    fn generic_rank_is_monotone_in_trials() {
        let m = ModelSpec::new(5, cycle_edges(5), [1], [1], [1, 2]);
        let ps = ParameterSpace::for_model(&m);
        let cmap = coefficient_map(&m, &ps).unwrap();
        let jac = jacobian(&cmap, &ps).unwrap();
        let seed = stream_seed(&m, 0);
        let mut last = 0;
        for trials in 1..=5 {
            let est = generic_rank(&jac, ps.len(), trials, seed);
            assert!(est.rank >= last, "rank must be non-decreasing in trials");
            last = est.rank;
        }
        assert!(last < ps.len(), "two-leak cycle stays rank-deficient");
    }

    #[test]
    fn decide_the_four_cycle() {
        let (m, _) = cycle4();
        let v = decide(&m, 5, 0).unwrap();
        assert!(v.identifiable);
        assert!(v.certified);
        assert_eq!(v.generic_rank, 4);
        assert_eq!(v.required_rank, 4);
        assert_eq!(v.num_coefficients, 5);
        assert!(v.witness_point.is_some());
        assert!(v.certificates.is_empty());
    }

    #[test]
    fn decide_is_reproducible() {
        let m = ModelSpec::new(5, cycle_edges(5), [1], [3], [1]);
        let a = decide(&m, 5, 42).unwrap();
        let b = decide(&m, 5, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn counting_bound_decides_without_sampling() {
        // Output at 3 of a 4-cycle: 6 coefficients, but 4 + 3 parameters.
        let m = ModelSpec::new(4, cycle_edges(4), [1], [3], [1, 3, 4]);
        let v = decide(&m, 5, 0).unwrap();
        assert!(!v.identifiable);
        assert!(v.certified);
        assert_eq!(v.trials, 0);
        assert!(v.witness_point.is_none());
        assert_eq!(v.generic_rank, v.num_coefficients);
        assert!(v
            .certificates
            .iter()
            .any(|c| matches!(c, Certificate::CountingBound { parameters: 7, coefficients: 6 })));
    }

    #[test]
    fn leak_pair_past_the_output_yields_a_symbolic_certificate() {
        let m = ModelSpec::new(5, cycle_edges(5), [1], [3], [3, 5]);
        let v = decide(&m, 5, 0).unwrap();
        assert!(!v.identifiable);
        assert!(v.certified);
        assert!(v.trials > 0, "this model is decided by sampling, certificate attached");
        let cert = v
            .certificates
            .iter()
            .find_map(|c| match c {
                Certificate::LeakPairDependence { leak_i, leak_j, row } => {
                    Some((*leak_i, *leak_j, *row))
                }
                _ => None,
            })
            .expect("leak-pair certificate must validate");
        assert_eq!((cert.0, cert.1), (3, 5));
        let row = cert.2.expect("columns differ in exactly one row");
        assert_eq!(row.to_string(), "y3:s^0");
    }

    #[test]
    fn two_leaks_with_shared_compartment_input_output() {
        let m = ModelSpec::new(5, cycle_edges(5), [1], [1], [1, 2]);
        let v = decide(&m, 5, 0).unwrap();
        assert!(!v.identifiable);
        assert!(v.generic_rank < 7);
        assert!(v
            .certificates
            .iter()
            .any(|c| matches!(c, Certificate::LeakPairDependence { .. })));
    }

    #[test]
    fn decide_rejects_hypothesis_violations() {
        let path = ModelSpec::new(3, vec![(1, 2), (2, 3)], [1], [3], []);
        assert_eq!(decide(&path, 5, 0), Err(IdentError::NotStronglyConnected));
        let no_input = ModelSpec::new(3, cycle_edges(3), [], [1], []);
        assert_eq!(decide(&no_input, 5, 0), Err(IdentError::NoInput));
        let invalid = ModelSpec::new(3, cycle_edges(3), [1], [], []);
        assert!(matches!(decide(&invalid, 5, 0), Err(IdentError::Invalid(_))));
    }

    #[test]
    fn stream_seeds_separate_models_and_seeds() {
        let (m, _) = cycle4();
        let other = ModelSpec::new(4, cycle_edges(4), [1], [2], []);
        assert_ne!(stream_seed(&m, 0), stream_seed(&other, 0));
        assert_ne!(stream_seed(&m, 0), stream_seed(&m, 1));
        assert_eq!(stream_seed(&m, 7), stream_seed(&m.clone(), 7));
    }

    #[test]
    fn cycle_structure_detection() {
        let (m, _) = cycle4();
        let cyc = cycle_structure(&m).unwrap();
        assert_eq!(cyc.order, vec![1, 2, 3, 4]);
        assert_eq!(cyc.position(3), Some(3));
        // Input elsewhere rotates the positions.
        let rotated = ModelSpec::new(4, cycle_edges(4), [3], [1], []);
        let cyc = cycle_structure(&rotated).unwrap();
        assert_eq!(cyc.order, vec![3, 4, 1, 2]);
        assert_eq!(cyc.position(1), Some(3));
        // Non-cycle graphs are rejected.
        let fin = Family::new(FamilyGraph::Fin { n: 4 }, [1], [1], [])
            .build()
            .unwrap();
        assert!(cycle_structure(&fin).is_none());
    }
}
