//! Linear compartmental models: a directed graph plus input, output, and
//! leak compartment sets.
//!
//! Compartments are 1-indexed everywhere a user sees them (files, reports,
//! parameter names); adjacency computations shift to 0-based indices
//! internally. An edge `(j, i)` denotes transfer from compartment `j` to
//! compartment `i` with rate constant `k_{i,j}`; a leak at `j` has rate
//! constant `k_{0,j}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{MultiPoly, Var};

/// A single violated model invariant.
#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum Violation {
    #[error("model must have at least one compartment")]
    NoCompartments,
    #[error("{what} index {index} out of range 1..={n}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        n: usize,
    },
    #[error("self-loop at compartment {comp}")]
    SelfLoop { comp: usize },
    #[error("duplicate edge ({from}, {to})")]
    DuplicateEdge { from: usize, to: usize },
    #[error("model has no output compartment")]
    NoOutput,
}

/// All invariant violations found by [`ModelSpec::validate`].
#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub struct ValidationError(pub Vec<Violation>);

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid model: ")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{}", v)?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum ModelError {
    #[error(transparent)]
    Invalid(#[from] ValidationError),
    #[error("inductive connectivity search supports up to {limit} compartments, model has {n}")]
    SearchLimitExceeded { n: usize, limit: usize },
}

/// A linear compartmental model `(G, In, Out, Leak)`.
///
/// Serialized form (the on-disk model format consumed by the CLI):
/// `{ "n": int, "edges": [[from, to], ...], "in": [int], "out": [int],
/// "leak": [int] }` with 1-based indices. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(rename = "in")]
    pub inputs: BTreeSet<usize>,
    #[serde(rename = "out")]
    pub outputs: BTreeSet<usize>,
    #[serde(rename = "leak")]
    pub leaks: BTreeSet<usize>,
}

impl ModelSpec {
    pub fn new(
        n: usize,
        edges: Vec<(usize, usize)>,
        inputs: impl IntoIterator<Item = usize>,
        outputs: impl IntoIterator<Item = usize>,
        leaks: impl IntoIterator<Item = usize>,
    ) -> Self {
        ModelSpec {
            n,
            edges,
            inputs: inputs.into_iter().collect(),
            outputs: outputs.into_iter().collect(),
            leaks: leaks.into_iter().collect(),
        }
        .canonicalized()
    }

    /// Sorts the edge list into canonical ascending `(from, to)` order.
    pub fn canonicalized(mut self) -> Self {
        self.edges.sort_unstable();
        self
    }

    /// Parses a model from its JSON file form and canonicalizes edge order.
    pub fn from_json_str(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str::<ModelSpec>(s).map(ModelSpec::canonicalized)
    }

    /// Canonical JSON form: sorted edges, sets ascending, fixed key order.
    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string(&self.clone().canonicalized())
            .expect("model serialization cannot fail")
    }

    /// Checks every structural invariant, reporting all violations at once.
    pub fn validate(&self) -> Result<(), ValidationError> {
        let mut violations = Vec::new();
        if self.n == 0 {
            violations.push(Violation::NoCompartments);
        }
        let in_range = |i: usize| i >= 1 && i <= self.n;
        let mut seen = BTreeSet::new();
        for &(from, to) in &self.edges {
            if !in_range(from) {
                violations.push(Violation::IndexOutOfRange {
                    what: "edge source",
                    index: from,
                    n: self.n,
                });
            }
            if !in_range(to) {
                violations.push(Violation::IndexOutOfRange {
                    what: "edge target",
                    index: to,
                    n: self.n,
                });
            }
            if from == to {
                violations.push(Violation::SelfLoop { comp: from });
            }
            if !seen.insert((from, to)) {
                violations.push(Violation::DuplicateEdge { from, to });
            }
        }
        for (what, set) in [
            ("input", &self.inputs),
            ("output", &self.outputs),
            ("leak", &self.leaks),
        ] {
            for &i in set {
                if !in_range(i) {
                    violations.push(Violation::IndexOutOfRange {
                        what,
                        index: i,
                        n: self.n,
                    });
                }
            }
        }
        if self.outputs.is_empty() {
            violations.push(Violation::NoOutput);
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(ValidationError(violations))
        }
    }

    /// Number of parameters, `|E| + |Leak|`.
    pub fn num_parameters(&self) -> usize {
        self.edges.len() + self.leaks.len()
    }

    /// Out-neighbors as 0-based adjacency lists.
    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(from, to) in &self.edges {
            adj[from - 1].push(to - 1);
        }
        adj
    }

    fn reverse_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(from, to) in &self.edges {
            adj[to - 1].push(from - 1);
        }
        adj
    }

    /// True iff the graph has a directed path from each vertex to every
    /// other vertex.
    pub fn is_strongly_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let all: Vec<bool> = vec![true; self.n];
        reaches_all(&self.adjacency(), 0, &all) && reaches_all(&self.reverse_adjacency(), 0, &all)
    }

    /// True iff some reordering of the vertices that keeps compartment 1
    /// first makes every prefix-induced subgraph strongly connected.
    ///
    /// Backtracking search over prefixes; worst case exponential in `n`, so
    /// the search refuses models larger than [`ISC_DEFAULT_LIMIT`]
    /// compartments (see [`Self::is_inductively_strongly_connected_with_limit`]).
    pub fn is_inductively_strongly_connected(&self) -> Result<bool, ModelError> {
        self.is_inductively_strongly_connected_with_limit(ISC_DEFAULT_LIMIT)
    }

    pub fn is_inductively_strongly_connected_with_limit(
        &self,
        limit: usize,
    ) -> Result<bool, ModelError> {
        if self.n > limit {
            return Err(ModelError::SearchLimitExceeded { n: self.n, limit });
        }
        if self.n == 0 {
            return Ok(false);
        }
        let adj = self.adjacency();
        let radj = self.reverse_adjacency();
        let mut dead: BTreeSet<u32> = BTreeSet::new();
        Ok(grow_isc_prefix(&adj, &radj, self.n, 1u32, &mut dead))
    }

    /// Checks one explicit vertex ordering (1-based, starting at compartment
    /// 1) for the inductive strong connectivity property.
    pub fn admits_isc_ordering(&self, order: &[usize]) -> bool {
        if order.len() != self.n || order.first() != Some(&1) {
            return false;
        }
        let mut sorted: Vec<usize> = order.to_vec();
        sorted.sort_unstable();
        if sorted != (1..=self.n).collect::<Vec<_>>() {
            return false;
        }
        let adj = self.adjacency();
        let radj = self.reverse_adjacency();
        let mut members = vec![false; self.n];
        for &v in order {
            members[v - 1] = true;
            if !subgraph_strongly_connected(&adj, &radj, &members, v - 1) {
                return false;
            }
        }
        true
    }

    /// The compartmental matrix `A`: off-diagonal `(i, j)` holds `k_{i,j}`
    /// when `j -> i` is an edge, and diagonal `(i, i)` holds the negated sum
    /// of all outflow rates from `i` (edges out of `i`, plus the leak
    /// `k_{0,i}` when present).
    pub fn compartmental_matrix(&self, ps: &ParameterSpace) -> Vec<Vec<MultiPoly>> {
        let n = self.n;
        let mut mat = vec![vec![MultiPoly::zero(); n]; n];
        for &(from, to) in &self.edges {
            let v = ps
                .index_of(&VarId::edge(from, to))
                .expect("parameter space matches model");
            // Outflow from `from` subtracts on its diagonal entry.
            let col = from - 1;
            mat[col][col] = &mat[col][col] - &MultiPoly::var(v);
            // Inflow k_{to,from} on the (to, from) entry.
            mat[to - 1][col] = MultiPoly::var(v);
        }
        for &leak in &self.leaks {
            let v = ps
                .index_of(&VarId::leak(leak))
                .expect("parameter space matches model");
            let d = leak - 1;
            mat[d][d] = &mat[d][d] - &MultiPoly::var(v);
        }
        mat
    }
}

/// Default cap for the inductive-strong-connectivity search.
pub const ISC_DEFAULT_LIMIT: usize = 12;

fn reaches_all(adj: &[Vec<usize>], start: usize, members: &[bool]) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![start];
    seen[start] = true;
    let mut count = 1usize;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if members[w] && !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == members.iter().filter(|&&m| m).count()
}

fn subgraph_strongly_connected(
    adj: &[Vec<usize>],
    radj: &[Vec<usize>],
    members: &[bool],
    start: usize,
) -> bool {
    reaches_all(adj, start, members) && reaches_all(radj, start, members)
}

fn grow_isc_prefix(
    adj: &[Vec<usize>],
    radj: &[Vec<usize>],
    n: usize,
    chosen: u32,
    dead: &mut BTreeSet<u32>,
) -> bool {
    if chosen.count_ones() as usize == n {
        return true;
    }
    if dead.contains(&chosen) {
        return false;
    }
    for v in 1..n {
        if chosen & (1 << v) != 0 {
            continue;
        }
        let next = chosen | (1 << v);
        let members: Vec<bool> = (0..n).map(|i| next & (1 << i) != 0).collect();
        if subgraph_strongly_connected(adj, radj, &members, 0)
            && grow_isc_prefix(adj, radj, n, next, dead)
        {
            return true;
        }
    }
    dead.insert(chosen);
    false
}

/// A model parameter: either an edge rate constant `k_{to,from}` or a leak
/// rate constant `k_{0,comp}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarId {
    Edge { from: usize, to: usize },
    Leak { comp: usize },
}

impl VarId {
    pub fn edge(from: usize, to: usize) -> Self {
        VarId::Edge { from, to }
    }

    pub fn leak(comp: usize) -> Self {
        VarId::Leak { comp }
    }

    /// Canonical textual name: `k_{i,j}` for an edge `j -> i`, `k_{0,j}` for
    /// a leak at `j`.
    pub fn name(&self) -> String {
        match *self {
            VarId::Edge { from, to } => format!("k_{{{},{}}}", to, from),
            VarId::Leak { comp } => format!("k_{{0,{}}}", comp),
        }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// The ordered parameter list of a model: edge parameters in canonical
/// ascending `(from, to)` order, then leak parameters by ascending
/// compartment. The ordering is deterministic for a given model, fixing the
/// Jacobian column order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParameterSpace {
    vars: Vec<VarId>,
    index: BTreeMap<VarId, Var>,
}

impl ParameterSpace {
    pub fn for_model(m: &ModelSpec) -> Self {
        let mut edges = m.edges.clone();
        edges.sort_unstable();
        let mut vars: Vec<VarId> = edges
            .into_iter()
            .map(|(from, to)| VarId::edge(from, to))
            .collect();
        vars.extend(m.leaks.iter().map(|&c| VarId::leak(c)));
        let index = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        ParameterSpace { vars, index }
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn vars(&self) -> &[VarId] {
        &self.vars
    }

    pub fn var(&self, i: Var) -> VarId {
        self.vars[i]
    }

    pub fn index_of(&self, v: &VarId) -> Option<Var> {
        self.index.get(v).copied()
    }

    /// The polynomial consisting of the named parameter. Panics if the
    /// parameter is not in the space.
    pub fn poly(&self, v: VarId) -> MultiPoly {
        MultiPoly::var(
            self.index_of(&v)
                .unwrap_or_else(|| panic!("parameter {} not in model", v.name())),
        )
    }

    pub fn names(&self) -> Vec<String> {
        self.vars.iter().map(VarId::name).collect()
    }

    /// Name lookup closure for polynomial rendering.
    pub fn namer(&self) -> impl Fn(Var) -> String + '_ {
        move |v: Var| self.vars[v].name()
    }
}
