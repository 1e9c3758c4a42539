//! Generators for the classical model families (catenary, cycle,
//! mammillary) and the cycle-with-added-edges families (fin, wing), together
//! with closed-form coefficient maps that are checked symbolically against
//! the general determinant pipeline.
//!
//! Conventions: compartments are 1-based; index arithmetic around the cycle
//! treats `n + 1` as `1` and is centralized in [`cyclic_succ`]. A fin graph
//! is the cycle plus every incoming edge `i -> 1` (`2 <= i <= n-1`); a wing
//! graph is the cycle plus every outgoing edge `1 -> j` (`3 <= j <= n`).

use std::collections::BTreeSet;

use thiserror::Error;

use crate::ioeq::{coefficient_map, CoeffLabel, CoefficientMap};
use crate::model::{ModelSpec, ParameterSpace, ValidationError, VarId};
use crate::poly::{elementary_symmetric, MultiPoly};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("{family} models require n >= {min}, got n = {n}")]
    TooSmall {
        family: &'static str,
        n: usize,
        min: usize,
    },
    #[error("incoming edge source {i} must lie in 2..={max}")]
    BadIncoming { i: usize, max: usize },
    #[error("outgoing edge target {j} must lie in 3..={max}")]
    BadOutgoing { j: usize, max: usize },
    #[error("placement index {index} out of range 1..={n}")]
    BadPlacement { index: usize, n: usize },
    #[error("closed-form cycle map without leaks requires output position p in 2..={n}, got {p}")]
    BadOutputPosition { p: usize, n: usize },
    #[error("closed-form cycle map with leaks requires a nonempty leak set")]
    EmptyLeaks,
    #[error("no closed-form coefficient map is defined for this family and placement")]
    NoClosedForm,
    #[error(transparent)]
    Invalid(#[from] ValidationError),
}

/// Successor of `l` around the `n`-cycle, wrapping `n + 1` to `1`. Every
/// off-by-one in cycle index arithmetic funnels through here.
pub fn cyclic_succ(n: usize, l: usize) -> usize {
    if l == n {
        1
    } else {
        l + 1
    }
}

/// The underlying graph of a family member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyGraph {
    /// Bidirected path `1 <-> 2 <-> ... <-> n`.
    Catenary { n: usize },
    /// Directed cycle `1 -> 2 -> ... -> n -> 1`.
    Cycle { n: usize },
    /// Star with bidirected spokes `1 <-> i` for `2 <= i <= n`.
    Mammillary { n: usize },
    /// Cycle plus all incoming edges.
    Fin { n: usize },
    /// Cycle plus all outgoing edges.
    Wing { n: usize },
    /// Cycle plus chosen incoming edge sources and outgoing edge targets.
    CyclePlusEdges {
        n: usize,
        incoming: BTreeSet<usize>,
        outgoing: BTreeSet<usize>,
    },
}

impl FamilyGraph {
    pub fn n(&self) -> usize {
        match *self {
            FamilyGraph::Catenary { n }
            | FamilyGraph::Cycle { n }
            | FamilyGraph::Mammillary { n }
            | FamilyGraph::Fin { n }
            | FamilyGraph::Wing { n }
            | FamilyGraph::CyclePlusEdges { n, .. } => n,
        }
    }

    pub fn edges(&self) -> Result<Vec<(usize, usize)>, FamilyError> {
        match self {
            FamilyGraph::Catenary { n } => {
                require_min("catenary", *n, 2)?;
                let mut edges = Vec::new();
                for i in 1..*n {
                    edges.push((i, i + 1));
                    edges.push((i + 1, i));
                }
                Ok(edges)
            }
            FamilyGraph::Cycle { n } => {
                require_min("cycle", *n, 3)?;
                Ok(cycle_edges(*n))
            }
            FamilyGraph::Mammillary { n } => {
                require_min("mammillary", *n, 2)?;
                let mut edges = Vec::new();
                for i in 2..=*n {
                    edges.push((1, i));
                    edges.push((i, 1));
                }
                Ok(edges)
            }
            FamilyGraph::Fin { n } => {
                require_min("fin", *n, 3)?;
                let mut edges = cycle_edges(*n);
                edges.extend((2..*n).map(|i| (i, 1)));
                Ok(edges)
            }
            FamilyGraph::Wing { n } => {
                require_min("wing", *n, 3)?;
                let mut edges = cycle_edges(*n);
                edges.extend((3..=*n).map(|j| (1, j)));
                Ok(edges)
            }
            FamilyGraph::CyclePlusEdges {
                n,
                incoming,
                outgoing,
            } => {
                require_min("cycle", *n, 3)?;
                let mut edges = cycle_edges(*n);
                for &i in incoming {
                    if i < 2 || i > n - 1 {
                        return Err(FamilyError::BadIncoming { i, max: n - 1 });
                    }
                    edges.push((i, 1));
                }
                for &j in outgoing {
                    if j < 3 || j > *n {
                        return Err(FamilyError::BadOutgoing { j, max: *n });
                    }
                    edges.push((1, j));
                }
                Ok(edges)
            }
        }
    }
}

fn require_min(family: &'static str, n: usize, min: usize) -> Result<(), FamilyError> {
    if n < min {
        Err(FamilyError::TooSmall { family, n, min })
    } else {
        Ok(())
    }
}

/// Edges of the directed `n`-cycle, in canonical order.
pub fn cycle_edges(n: usize) -> Vec<(usize, usize)> {
    (1..=n).map(|l| (l, cyclic_succ(n, l))).collect()
}

/// A family graph plus input/output/leak placements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    pub graph: FamilyGraph,
    pub inputs: BTreeSet<usize>,
    pub outputs: BTreeSet<usize>,
    pub leaks: BTreeSet<usize>,
}

impl Family {
    pub fn new(
        graph: FamilyGraph,
        inputs: impl IntoIterator<Item = usize>,
        outputs: impl IntoIterator<Item = usize>,
        leaks: impl IntoIterator<Item = usize>,
    ) -> Self {
        Family {
            graph,
            inputs: inputs.into_iter().collect(),
            outputs: outputs.into_iter().collect(),
            leaks: leaks.into_iter().collect(),
        }
    }

    /// Builds and validates the model.
    pub fn build(&self) -> Result<ModelSpec, FamilyError> {
        let n = self.graph.n();
        for set in [&self.inputs, &self.outputs, &self.leaks] {
            for &i in set {
                if i < 1 || i > n {
                    return Err(FamilyError::BadPlacement { index: i, n });
                }
            }
        }
        let model = ModelSpec::new(
            n,
            self.graph.edges()?,
            self.inputs.iter().copied(),
            self.outputs.iter().copied(),
            self.leaks.iter().copied(),
        );
        model.validate()?;
        Ok(model)
    }
}

fn lhs_label(output: usize, s_power: usize) -> CoeffLabel {
    CoeffLabel {
        output,
        input: None,
        s_power,
    }
}

fn rhs_label(output: usize, input: usize, s_power: usize) -> CoeffLabel {
    CoeffLabel {
        output,
        input: Some(input),
        s_power,
    }
}

fn edge_poly(ps: &ParameterSpace, from: usize, to: usize) -> MultiPoly {
    ps.poly(VarId::edge(from, to))
}

/// Closed-form coefficient map for the `n`-cycle with `In = {1}`,
/// `Out = {p}` (`p != 1`), and no leaks:
/// `(e_1, ..., e_{n-1}, kappa, e*_1 kappa, ..., e*_{n-p} kappa)` where
/// `kappa` is the product of the edge rates from compartment 1 up to `p`,
/// the `e_j` are elementary symmetric polynomials of all cycle edge rates,
/// and the `e*_j` of the edge rates beyond `p`. The `p = 1` placement has no
/// closed form here; use the general pipeline.
pub fn cycle_coeff_map_noleak(n: usize, p: usize) -> Result<CoefficientMap, FamilyError> {
    require_min("cycle", n, 3)?;
    if p < 2 || p > n {
        return Err(FamilyError::BadOutputPosition { p, n });
    }
    let family = Family::new(FamilyGraph::Cycle { n }, [1], [p], []);
    let ps = ParameterSpace::for_model(&family.build()?);
    let cycle_rates: Vec<MultiPoly> = (1..=n)
        .map(|l| edge_poly(&ps, l, cyclic_succ(n, l)))
        .collect();
    let mut entries = Vec::new();
    for j in 1..n {
        entries.push((
            lhs_label(p, n - j),
            elementary_symmetric(&cycle_rates, j),
        ));
    }
    let kappa = (2..=p).fold(MultiPoly::one(), |acc, i| &acc * &edge_poly(&ps, i - 1, i));
    let tail_rates: Vec<MultiPoly> = ((p + 1)..=n)
        .map(|l| edge_poly(&ps, l, cyclic_succ(n, l)))
        .collect();
    for t in 0..=(n - p) {
        let coeff = &elementary_symmetric(&tail_rates, t) * &kappa;
        entries.push((rhs_label(p, 1, n - p - t), coeff));
    }
    Ok(CoefficientMap {
        entries,
        dropped: vec![lhs_label(p, 0)],
    })
}

/// Closed-form coefficient map for the `n`-cycle with `In = {1}`,
/// `Out = {p}`, and a nonempty leak set: as in the no-leak case but with
/// each leaking compartment's edge rate replaced by the sum of its edge and
/// leak rates, plus the extra entry `e_n - prod(edge rates)` in place of the
/// identically-zero constant term.
pub fn cycle_coeff_map_leaks(
    n: usize,
    p: usize,
    leaks: &BTreeSet<usize>,
) -> Result<CoefficientMap, FamilyError> {
    require_min("cycle", n, 3)?;
    if p < 1 || p > n {
        return Err(FamilyError::BadPlacement { index: p, n });
    }
    if leaks.is_empty() {
        return Err(FamilyError::EmptyLeaks);
    }
    let family = Family::new(FamilyGraph::Cycle { n }, [1], [p], leaks.iter().copied());
    let ps = ParameterSpace::for_model(&family.build()?);
    let departure_rate = |l: usize| -> MultiPoly {
        let edge = edge_poly(&ps, l, cyclic_succ(n, l));
        if leaks.contains(&l) {
            &edge + &ps.poly(VarId::leak(l))
        } else {
            edge
        }
    };
    let rates: Vec<MultiPoly> = (1..=n).map(departure_rate).collect();
    let mut entries = Vec::new();
    for j in 1..n {
        entries.push((lhs_label(p, n - j), elementary_symmetric(&rates, j)));
    }
    let edge_product = (1..=n).fold(MultiPoly::one(), |acc, l| {
        &acc * &edge_poly(&ps, l, cyclic_succ(n, l))
    });
    entries.push((
        lhs_label(p, 0),
        &elementary_symmetric(&rates, n) - &edge_product,
    ));
    let kappa = (2..=p).fold(MultiPoly::one(), |acc, i| &acc * &edge_poly(&ps, i - 1, i));
    let tail_rates: Vec<MultiPoly> = ((p + 1)..=n).map(departure_rate).collect();
    for t in 0..=(n - p) {
        let coeff = &elementary_symmetric(&tail_rates, t) * &kappa;
        entries.push((rhs_label(p, 1, n - p - t), coeff));
    }
    Ok(CoefficientMap {
        entries,
        dropped: Vec::new(),
    })
}

/// Closed-form coefficient map for the fin model with `In = Out = {1}` and
/// no leaks. Writing `e^{[l]}_m` for the `m`-th elementary symmetric
/// polynomial of `{k_{1,l} + k_{l+1,l}, ..., k_{1,n-1} + k_{n,n-1}, k_{1,n}}`
/// and `P_l = k_{1,l} k_{2,1} k_{3,2} ... k_{l,l-1}`, the entries are
/// `e^{[2]}_1 + k_{2,1}` and `phi_l = e^{[2]}_l + k_{2,1} e^{[2]}_{l-1} -
/// sum_{i=2}^{l} P_i e^{[i+1]}_{l-i}` for `2 <= l <= n-1` on the output
/// side, then `e^{[2]}_1, ..., e^{[2]}_{n-1}` from the input side.
pub fn fin_coeff_map(n: usize) -> Result<CoefficientMap, FamilyError> {
    require_min("fin", n, 3)?;
    let family = Family::new(FamilyGraph::Fin { n }, [1], [1], []);
    let ps = ParameterSpace::for_model(&family.build()?);
    // Entries of E^{[l]}: mixed sums for positions l..n-1, then k_{1,n}.
    let e_set = |l: usize| -> Vec<MultiPoly> {
        let mut items: Vec<MultiPoly> = (l..n)
            .map(|j| &edge_poly(&ps, j, 1) + &edge_poly(&ps, j, j + 1))
            .collect();
        items.push(edge_poly(&ps, n, 1));
        items
    };
    let e2 = e_set(2);
    let k21 = edge_poly(&ps, 1, 2);
    let path_product = |l: usize| (2..=l).fold(MultiPoly::one(), |acc, t| &acc * &edge_poly(&ps, t - 1, t));
    let p_term = |l: usize| &edge_poly(&ps, l, 1) * &path_product(l);
    let mut entries = Vec::new();
    entries.push((
        lhs_label(1, n - 1),
        &elementary_symmetric(&e2, 1) + &k21,
    ));
    for l in 2..n {
        let mut phi = &elementary_symmetric(&e2, l)
            + &(&k21 * &elementary_symmetric(&e2, l - 1));
        for i in 2..=l {
            let correction = &p_term(i) * &elementary_symmetric(&e_set(i + 1), l - i);
            phi = &phi - &correction;
        }
        entries.push((lhs_label(1, n - l), phi));
    }
    for j in 1..n {
        entries.push((rhs_label(1, 1, n - 1 - j), elementary_symmetric(&e2, j)));
    }
    Ok(CoefficientMap {
        entries,
        dropped: vec![lhs_label(1, 0)],
    })
}

/// Closed-form coefficient map for the wing model with `In = Out = {1}` and
/// no leaks. Writing `e'_m` for the elementary symmetric polynomials of
/// `{k_{3,2}, ..., k_{n,n-1}, k_{1,n}}`, `h^j_m` for those of
/// `{k_{3,2}, ..., k_{j,j-1}}`, `K = k_{2,1} + k_{3,1} + ... + k_{n,1}` and
/// `Q_j = k_{1,n} k_{j,1} k_{j+1,j} ... k_{n,n-1}`, the output-side entries
/// are `e'_1 + K` and `psi_l = e'_l + e'_{l-1} K -
/// sum_{i=n-l+2}^{n} Q_i h^i_{i-n+l-2}` for `2 <= l <= n-1`, followed by
/// `e'_1, ..., e'_{n-1}` from the input side. (The identically-zero constant
/// term of the output operator is dropped, as the general pipeline does.)
pub fn wing_coeff_map(n: usize) -> Result<CoefficientMap, FamilyError> {
    require_min("wing", n, 3)?;
    let family = Family::new(FamilyGraph::Wing { n }, [1], [1], []);
    let ps = ParameterSpace::for_model(&family.build()?);
    let tail_rates: Vec<MultiPoly> = {
        let mut items: Vec<MultiPoly> = (2..n).map(|l| edge_poly(&ps, l, l + 1)).collect();
        items.push(edge_poly(&ps, n, 1));
        items
    };
    let big_k = (2..=n).fold(MultiPoly::zero(), |acc, j| &acc + &edge_poly(&ps, 1, j));
    let h_set = |j: usize| -> Vec<MultiPoly> {
        (3..=j).map(|t| edge_poly(&ps, t - 1, t)).collect()
    };
    let q_term = |j: usize| -> MultiPoly {
        let chain = ((j + 1)..=n).fold(MultiPoly::one(), |acc, t| &acc * &edge_poly(&ps, t - 1, t));
        &(&edge_poly(&ps, n, 1) * &edge_poly(&ps, 1, j)) * &chain
    };
    let e_prime = |m: usize| elementary_symmetric(&tail_rates, m);
    let mut entries = Vec::new();
    entries.push((lhs_label(1, n - 1), &e_prime(1) + &big_k));
    for l in 2..n {
        let mut psi = &e_prime(l) + &(&e_prime(l - 1) * &big_k);
        for i in (n - l + 2)..=n {
            let correction = &q_term(i) * &elementary_symmetric(&h_set(i), i - n + l - 2);
            psi = &psi - &correction;
        }
        entries.push((lhs_label(1, n - l), psi));
    }
    for j in 1..n {
        entries.push((rhs_label(1, 1, n - 1 - j), e_prime(j)));
    }
    Ok(CoefficientMap {
        entries,
        dropped: vec![lhs_label(1, 0)],
    })
}

/// The closed-form coefficient map for a family placement, when one exists:
/// cycle models with `In = {1}` and a single output (leaks or not), and fin
/// and wing models with `In = Out = {1}` and no leaks.
pub fn closed_form_map(f: &Family) -> Result<CoefficientMap, FamilyError> {
    let single_output = || -> Option<usize> {
        if f.outputs.len() == 1 {
            f.outputs.iter().next().copied()
        } else {
            None
        }
    };
    let in_is_one = f.inputs.len() == 1 && f.inputs.contains(&1);
    match &f.graph {
        FamilyGraph::Cycle { n } if in_is_one => {
            let Some(p) = single_output() else {
                return Err(FamilyError::NoClosedForm);
            };
            if f.leaks.is_empty() {
                cycle_coeff_map_noleak(*n, p)
            } else {
                cycle_coeff_map_leaks(*n, p, &f.leaks)
            }
        }
        FamilyGraph::Fin { n }
            if in_is_one && single_output() == Some(1) && f.leaks.is_empty() =>
        {
            fin_coeff_map(*n)
        }
        FamilyGraph::Wing { n }
            if in_is_one && single_output() == Some(1) && f.leaks.is_empty() =>
        {
            wing_coeff_map(*n)
        }
        _ => Err(FamilyError::NoClosedForm),
    }
}

/// Outcome of comparing a closed-form map against the general pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClosedFormComparison {
    /// Entry-by-entry symbolic equality in the pipeline order.
    Equal,
    /// The same entries appear, but permuted; `perm[i]` is the pipeline
    /// position of closed-form entry `i`.
    EqualUpToPermutation(Vec<usize>),
    /// Genuine symbolic difference.
    Different(String),
}

impl ClosedFormComparison {
    pub fn is_equal(&self) -> bool {
        !matches!(self, ClosedFormComparison::Different(_))
    }
}

/// Compares the closed-form coefficient map against the general pipeline.
///
/// Degree-zero (constant) entries are dropped from both sides before the
/// comparison: the pipeline keeps every nonzero coefficient, including the
/// constant leading coefficient an input-side operator can have, while the
/// closed forms list only the parameter-dependent entries. Constants carry
/// no Jacobian information, so the normalization does not affect rank. An
/// ordering difference with identical entry multisets counts as equal, with
/// the permutation reported.
pub fn compare_closed_form(f: &Family) -> Result<ClosedFormComparison, FamilyError> {
    let closed = closed_form_map(f)?;
    let model = f.build()?;
    let ps = ParameterSpace::for_model(&model);
    let general = coefficient_map(&model, &ps).map_err(|_| FamilyError::NoClosedForm)?;
    let strip = |m: &CoefficientMap| -> Vec<MultiPoly> {
        m.polys().filter(|p| !p.is_constant()).cloned().collect()
    };
    let (a, b) = (strip(&closed), strip(&general));
    if a == b {
        return Ok(ClosedFormComparison::Equal);
    }
    if a.len() != b.len() {
        return Ok(ClosedFormComparison::Different(format!(
            "closed form has {} nonconstant entries, pipeline has {}",
            a.len(),
            b.len()
        )));
    }
    let mut sa = a.clone();
    let mut sb = b.clone();
    sa.sort();
    sb.sort();
    if sa == sb {
        let perm: Vec<usize> = a
            .iter()
            .map(|p| b.iter().position(|q| q == p).unwrap_or(usize::MAX))
            .collect();
        return Ok(ClosedFormComparison::EqualUpToPermutation(perm));
    }
    let idx = a.iter().zip(&b).position(|(x, y)| x != y).unwrap_or(0);
    let namer = ps.namer();
    Ok(ClosedFormComparison::Different(format!(
        "entry {} differs: closed form {} vs pipeline {}",
        idx,
        a[idx].to_text(&namer),
        b[idx].to_text(&namer)
    )))
}

/// True iff the family's closed-form coefficient map equals the general
/// pipeline map symbolically (see [`compare_closed_form`]).
pub fn verify_closed_form(f: &Family) -> Result<bool, FamilyError> {
    Ok(compare_closed_form(f)?.is_equal())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelSpec;
    use crate::poly::elementary_symmetric;

    #[test]
    fn cycle_four_is_the_worked_example_model() {
        let m = Family::new(FamilyGraph::Cycle { n: 4 }, [1], [3], [])
            .build()
            .unwrap();
        assert_eq!(
            m,
            ModelSpec::new(4, vec![(1, 2), (2, 3), (3, 4), (4, 1)], [1], [3], [])
        );
    }

    #[test]
    fn edge_counts() {
        for n in 3..=7 {
            let fin = Family::new(FamilyGraph::Fin { n }, [1], [1], [])
                .build()
                .unwrap();
            assert_eq!(fin.edges.len(), 2 * n - 2);
            let wing = Family::new(FamilyGraph::Wing { n }, [1], [1], [])
                .build()
                .unwrap();
            assert_eq!(wing.edges.len(), 2 * n - 2);
        }
    }

    #[test]
    fn cycle_plus_all_added_edges_recovers_fin_and_wing() {
        let n = 5;
        let all_incoming = Family::new(
            FamilyGraph::CyclePlusEdges {
                n,
                incoming: (2..n).collect(),
                outgoing: BTreeSet::new(),
            },
            [1],
            [1],
            [],
        )
        .build()
        .unwrap();
        let fin = Family::new(FamilyGraph::Fin { n }, [1], [1], [])
            .build()
            .unwrap();
        assert_eq!(all_incoming, fin);
        let all_outgoing = Family::new(
            FamilyGraph::CyclePlusEdges {
                n,
                incoming: BTreeSet::new(),
                outgoing: (3..=n).collect(),
            },
            [1],
            [1],
            [],
        )
        .build()
        .unwrap();
        let wing = Family::new(FamilyGraph::Wing { n }, [1], [1], [])
            .build()
            .unwrap();
        assert_eq!(all_outgoing, wing);
    }

    #[test]
    fn family_rejects_bad_parameters() {
        assert!(matches!(
            FamilyGraph::Cycle { n: 2 }.edges(),
            Err(FamilyError::TooSmall { .. })
        ));
        assert!(matches!(
            FamilyGraph::CyclePlusEdges {
                n: 4,
                incoming: BTreeSet::from([4]),
                outgoing: BTreeSet::new(),
            }
            .edges(),
            Err(FamilyError::BadIncoming { i: 4, max: 3 })
        ));
        assert!(matches!(
            FamilyGraph::CyclePlusEdges {
                n: 4,
                incoming: BTreeSet::new(),
                outgoing: BTreeSet::from([2]),
            }
            .edges(),
            Err(FamilyError::BadOutgoing { j: 2, max: 4 })
        ));
        assert!(matches!(
            Family::new(FamilyGraph::Cycle { n: 3 }, [1], [4], []).build(),
            Err(FamilyError::BadPlacement { index: 4, n: 3 })
        ));
    }

    #[test]
    fn cycle_closed_form_matches_the_worked_example() {
        let closed = cycle_coeff_map_noleak(4, 3).unwrap();
        let family = Family::new(FamilyGraph::Cycle { n: 4 }, [1], [3], []);
        let model = family.build().unwrap();
        let ps = ParameterSpace::for_model(&model);
        let general = coefficient_map(&model, &ps).unwrap();
        assert_eq!(closed.entries, general.entries);
        assert_eq!(closed.len(), 5);
    }

    #[test]
    fn three_cycle_output_three_closed_form() {
        let closed = cycle_coeff_map_noleak(3, 3).unwrap();
        let family = Family::new(FamilyGraph::Cycle { n: 3 }, [1], [3], []);
        let ps = ParameterSpace::for_model(&family.build().unwrap());
        let rates: Vec<MultiPoly> = (1..=3)
            .map(|l| ps.poly(VarId::edge(l, cyclic_succ(3, l))))
            .collect();
        let kappa = &ps.poly(VarId::edge(1, 2)) * &ps.poly(VarId::edge(2, 3));
        let expected = vec![
            elementary_symmetric(&rates, 1),
            elementary_symmetric(&rates, 2),
            kappa,
        ];
        assert_eq!(closed.polys().cloned().collect::<Vec<_>>(), expected);
        // The last entry is kappa times the trivial tail symmetric polynomial.
        assert_eq!(closed.len(), 3);
    }

    #[test]
    fn noleak_closed_form_rejects_output_at_one() {
        assert_eq!(
            cycle_coeff_map_noleak(4, 1),
            Err(FamilyError::BadOutputPosition { p: 1, n: 4 })
        );
    }

    #[test]
    fn leaky_cycle_closed_form_small_case() {
        let leaks = BTreeSet::from([1]);
        let closed = cycle_coeff_map_leaks(3, 1, &leaks).unwrap();
        assert_eq!(closed.len(), 6); // 2n - p + 1
        let family = Family::new(FamilyGraph::Cycle { n: 3 }, [1], [1], [1]);
        let ps = ParameterSpace::for_model(&family.build().unwrap());
        // kappa is the empty product.
        let kappa_entry = &closed.entries[3];
        assert_eq!(kappa_entry.0.to_string(), "y1:u1:s^2");
        assert!(kappa_entry.1.is_one());
        // Entry n is e_n minus the plain edge product.
        let e_entry = &closed.entries[2];
        assert_eq!(e_entry.0.to_string(), "y1:s^0");
        let edge_product = &(&ps.poly(VarId::edge(1, 2)) * &ps.poly(VarId::edge(2, 3)))
            * &ps.poly(VarId::edge(3, 1));
        let rates = vec![
            &ps.poly(VarId::edge(1, 2)) + &ps.poly(VarId::leak(1)),
            ps.poly(VarId::edge(2, 3)),
            ps.poly(VarId::edge(3, 1)),
        ];
        assert_eq!(
            e_entry.1,
            &elementary_symmetric(&rates, 3) - &edge_product
        );
        assert_eq!(compare_closed_form(&family).unwrap(), ClosedFormComparison::Equal);
    }

    #[test]
    fn fin_closed_form_smallest_case() {
        let closed = fin_coeff_map(3).unwrap();
        assert_eq!(closed.len(), 4); // 2n - 2
        let family = Family::new(FamilyGraph::Fin { n: 3 }, [1], [1], []);
        let ps = ParameterSpace::for_model(&family.build().unwrap());
        let k21 = ps.poly(VarId::edge(1, 2));
        let k12 = ps.poly(VarId::edge(2, 1));
        let k32 = ps.poly(VarId::edge(2, 3));
        let k13 = ps.poly(VarId::edge(3, 1));
        let mixed = vec![&k12 + &k32, k13.clone()];
        let e1 = elementary_symmetric(&mixed, 1);
        let e2 = elementary_symmetric(&mixed, 2);
        let phi2 = &(&e2 + &(&k21 * &e1)) - &(&k12 * &k21);
        let expected = vec![&e1 + &k21, phi2, e1.clone(), e2.clone()];
        assert_eq!(closed.polys().cloned().collect::<Vec<_>>(), expected);
        assert_eq!(compare_closed_form(&family).unwrap(), ClosedFormComparison::Equal);
    }

    #[test]
    fn wing_closed_form_carries_the_two_cycle_correction() {
        // The s^{n-2} output coefficient includes the -k_{1,n} k_{n,1} term
        // from the length-two loop through compartment n; the general
        // pipeline is the arbiter.
        let closed = wing_coeff_map(4).unwrap();
        assert_eq!(closed.len(), 6);
        let family = Family::new(FamilyGraph::Wing { n: 4 }, [1], [1], []);
        let ps = ParameterSpace::for_model(&family.build().unwrap());
        let k21 = ps.poly(VarId::edge(1, 2));
        let k32 = ps.poly(VarId::edge(2, 3));
        let k43 = ps.poly(VarId::edge(3, 4));
        let k14 = ps.poly(VarId::edge(4, 1));
        let k31 = ps.poly(VarId::edge(1, 3));
        let k41 = ps.poly(VarId::edge(1, 4));
        let tail = vec![k32.clone(), k43.clone(), k14.clone()];
        let e1 = elementary_symmetric(&tail, 1);
        let e2 = elementary_symmetric(&tail, 2);
        let e3 = elementary_symmetric(&tail, 3);
        let big_k = &(&k21 + &k31) + &k41;
        let q4 = &k14 * &k41;
        let q3 = &(&k14 * &k31) * &k43;
        let psi2 = &(&e2 + &(&e1 * &big_k)) - &q4;
        let psi3 = &(&e3 + &(&e2 * &big_k)) - &(&q3 + &(&q4 * &k32));
        let expected = vec![&e1 + &big_k, psi2, psi3, e1.clone(), e2.clone(), e3.clone()];
        assert_eq!(closed.polys().cloned().collect::<Vec<_>>(), expected);
        assert_eq!(compare_closed_form(&family).unwrap(), ClosedFormComparison::Equal);
    }

    #[test]
    fn closed_forms_match_the_pipeline_on_small_sweeps() {
        for n in 3..=6 {
            for p in 2..=n {
                let f = Family::new(FamilyGraph::Cycle { n }, [1], [p], []);
                assert!(
                    verify_closed_form(&f).unwrap(),
                    "cycle n={} p={} no leaks",
                    n,
                    p
                );
            }
        }
        for n in 3..=4 {
            let all: Vec<usize> = (1..=n).collect();
            for p in 1..=n {
                for leaks in crate::suites::subsets(&all) {
                    if leaks.is_empty() {
                        continue;
                    }
                    let f = Family::new(
                        FamilyGraph::Cycle { n },
                        [1],
                        [p],
                        leaks.iter().copied(),
                    );
                    assert!(
                        verify_closed_form(&f).unwrap(),
                        "cycle n={} p={} leaks={:?}",
                        n,
                        p,
                        leaks
                    );
                }
            }
        }
        for n in 3..=5 {
            for graph in [FamilyGraph::Fin { n }, FamilyGraph::Wing { n }] {
                let f = Family::new(graph, [1], [1], []);
                assert!(verify_closed_form(&f).unwrap(), "fin/wing n={}", n);
            }
        }
    }

    #[test]
    fn closed_form_map_requires_a_supported_placement() {
        let catenary = Family::new(FamilyGraph::Catenary { n: 4 }, [1], [1], []);
        assert_eq!(closed_form_map(&catenary), Err(FamilyError::NoClosedForm));
        let shifted_input = Family::new(FamilyGraph::Cycle { n: 4 }, [2], [3], []);
        assert_eq!(
            closed_form_map(&shifted_input),
            Err(FamilyError::NoClosedForm)
        );
        let leaky_fin = Family::new(FamilyGraph::Fin { n: 4 }, [1], [1], [2]);
        assert_eq!(closed_form_map(&leaky_fin), Err(FamilyError::NoClosedForm));
    }
}
