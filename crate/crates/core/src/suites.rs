//! Parametrized sweeps that replay each structural identifiability result as
//! an executable check: every instance carries the verdict the theory
//! predicts, and a run reports pass/fail per instance.

use std::collections::BTreeSet;

use crate::families::{compare_closed_form, ClosedFormComparison, Family, FamilyGraph};
use crate::ident::{decide, Certificate};
use crate::model::ModelSpec;
use crate::poly::vandermonde_check;

/// The named sweeps exposed by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteKind {
    /// Cycle models with any input/output placement and at most one leak are
    /// identifiable.
    BigCycle,
    /// With input and output together (and, separately, with the output one
    /// step behind the input), a cycle model is identifiable iff it has at
    /// most one leak; two or more leaks also yield a symbolic
    /// column-dependence certificate when input and output coincide.
    LeakConverse,
    /// Two leaks at cycle positions at or past the output make the model
    /// unidentifiable.
    LeakPosition,
    /// More leaks than `n - p + 2` (output at position `p`) exceed the
    /// coefficient count, so the model is unidentifiable by counting alone.
    TooManyLeaks,
    /// Fin and wing models with input and output at compartment 1 and at
    /// most one leak are identifiable.
    FinWing,
    /// A cycle plus one incoming edge, or one or two outgoing edges, with at
    /// most one leak, is identifiable.
    AddEdges,
    /// Catenary, cycle, and mammillary models with input and output at
    /// compartment 1: identifiable with one leak anywhere, and still
    /// identifiable with the leak removed.
    LeakRemoval,
    /// Closed-form coefficient maps agree symbolically with the general
    /// determinant pipeline.
    ClosedForms,
    /// The Jacobian determinant of the elementary symmetric polynomials is
    /// the Vandermonde polynomial up to sign.
    Vandermonde,
    /// Experimental sweep over cycle models with arbitrary subsets of
    /// incoming or outgoing edges added; reports verdicts without asserting
    /// a prediction.
    ConjectureSweep,
}

impl SuiteKind {
    pub const ALL: [SuiteKind; 10] = [
        SuiteKind::BigCycle,
        SuiteKind::LeakConverse,
        SuiteKind::LeakPosition,
        SuiteKind::TooManyLeaks,
        SuiteKind::FinWing,
        SuiteKind::AddEdges,
        SuiteKind::LeakRemoval,
        SuiteKind::ClosedForms,
        SuiteKind::Vandermonde,
        SuiteKind::ConjectureSweep,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteKind::BigCycle => "big-cycle",
            SuiteKind::LeakConverse => "leak-converse",
            SuiteKind::LeakPosition => "leak-position",
            SuiteKind::TooManyLeaks => "too-many-leaks",
            SuiteKind::FinWing => "fin-wing",
            SuiteKind::AddEdges => "add-edges",
            SuiteKind::LeakRemoval => "leak-removal",
            SuiteKind::ClosedForms => "closed-forms",
            SuiteKind::Vandermonde => "vandermonde",
            SuiteKind::ConjectureSweep => "conjecture-sweep",
        }
    }

    pub fn parse(name: &str) -> Option<SuiteKind> {
        SuiteKind::ALL.iter().copied().find(|k| k.name() == name)
    }

    /// Largest model size swept by default.
    pub fn default_max_n(self) -> usize {
        match self {
            SuiteKind::BigCycle | SuiteKind::FinWing => 7,
            SuiteKind::ClosedForms => 8,
            SuiteKind::Vandermonde => 6,
            _ => 6,
        }
    }

    /// Whether failures are possible (conjecture sweeps only report).
    pub fn informational(self) -> bool {
        matches!(self, SuiteKind::ConjectureSweep)
    }
}

/// What the theory predicts for one instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expected {
    Identifiable,
    Unidentifiable,
    Informational,
}

impl Expected {
    fn label(self) -> &'static str {
        match self {
            Expected::Identifiable => "identifiable",
            Expected::Unidentifiable => "unidentifiable",
            Expected::Informational => "informational",
        }
    }
}

/// One check of a sweep.
#[derive(Debug, Clone)]
pub enum Check {
    Decide {
        model: ModelSpec,
        expected: Expected,
        /// Require the leak-pair column-dependence certificate to validate.
        require_leak_pair_certificate: bool,
        /// Require the counting-bound certificate (decided without sampling).
        require_counting_certificate: bool,
    },
    ClosedForm {
        family: Family,
    },
    Vandermonde {
        n: usize,
    },
}

#[derive(Debug, Clone)]
pub struct SuiteInstance {
    pub name: String,
    pub check: Check,
}

/// The scored result of one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceOutcome {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
    pub detail: String,
}

fn set_text(s: &BTreeSet<usize>) -> String {
    let items: Vec<String> = s.iter().map(usize::to_string).collect();
    format!("{{{}}}", items.join(","))
}

fn decide_instance(
    name: String,
    model: ModelSpec,
    expected: Expected,
) -> SuiteInstance {
    SuiteInstance {
        name,
        check: Check::Decide {
            model,
            expected,
            require_leak_pair_certificate: false,
            require_counting_certificate: false,
        },
    }
}

pub(crate) fn subsets(items: &[usize]) -> Vec<BTreeSet<usize>> {
    let mut out = vec![BTreeSet::new()];
    for &x in items {
        let mut grown: Vec<BTreeSet<usize>> = out
            .iter()
            .map(|s| {
                let mut t = s.clone();
                t.insert(x);
                t
            })
            .collect();
        out.append(&mut grown);
    }
    out.sort();
    out
}

fn cycle_model(n: usize, input: usize, output: usize, leaks: &BTreeSet<usize>) -> ModelSpec {
    Family::new(
        FamilyGraph::Cycle { n },
        [input],
        [output],
        leaks.iter().copied(),
    )
    .build()
    .expect("cycle placements are valid")
}

/// Enumerates the instances of a sweep up to model size `max_n`.
pub fn enumerate(kind: SuiteKind, max_n: usize) -> Vec<SuiteInstance> {
    let mut out = Vec::new();
    match kind {
        SuiteKind::BigCycle => {
            for n in 3..=max_n {
                let mut leak_sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new()];
                leak_sets.extend((1..=n).map(|c| BTreeSet::from([c])));
                for input in 1..=n {
                    for output in 1..=n {
                        for leaks in &leak_sets {
                            out.push(decide_instance(
                                format!(
                                    "cycle n={} in={} out={} leak={}",
                                    n,
                                    input,
                                    output,
                                    set_text(leaks)
                                ),
                                cycle_model(n, input, output, leaks),
                                Expected::Identifiable,
                            ));
                        }
                    }
                }
            }
        }
        SuiteKind::LeakConverse => {
            for n in 3..=max_n {
                let all: Vec<usize> = (1..=n).collect();
                for leaks in subsets(&all) {
                    let expected = if leaks.len() <= 1 {
                        Expected::Identifiable
                    } else {
                        Expected::Unidentifiable
                    };
                    out.push(SuiteInstance {
                        name: format!("cycle n={} in=1 out=1 leak={}", n, set_text(&leaks)),
                        check: Check::Decide {
                            model: cycle_model(n, 1, 1, &leaks),
                            expected,
                            require_leak_pair_certificate: leaks.len() >= 2,
                            require_counting_certificate: false,
                        },
                    });
                }
                // Output one step behind the input around the cycle.
                for input in 1..=n {
                    let output = if input == 1 { n } else { input - 1 };
                    for leaks in subsets(&all) {
                        let expected = if leaks.len() <= 1 {
                            Expected::Identifiable
                        } else {
                            Expected::Unidentifiable
                        };
                        out.push(decide_instance(
                            format!(
                                "cycle n={} in={} out={} leak={}",
                                n,
                                input,
                                output,
                                set_text(&leaks)
                            ),
                            cycle_model(n, input, output, &leaks),
                            expected,
                        ));
                    }
                }
            }
        }
        SuiteKind::LeakPosition => {
            for n in 3..=max_n {
                let all: Vec<usize> = (1..=n).collect();
                for p in 1..=n {
                    for leaks in subsets(&all) {
                        if leaks.iter().filter(|&&c| c >= p).count() < 2 {
                            continue;
                        }
                        out.push(SuiteInstance {
                            name: format!(
                                "cycle n={} in=1 out={} leak={}",
                                n,
                                p,
                                set_text(&leaks)
                            ),
                            check: Check::Decide {
                                model: cycle_model(n, 1, p, &leaks),
                                expected: Expected::Unidentifiable,
                                require_leak_pair_certificate: true,
                                require_counting_certificate: false,
                            },
                        });
                    }
                }
            }
        }
        SuiteKind::TooManyLeaks => {
            for n in 3..=max_n {
                let all: Vec<usize> = (1..=n).collect();
                for p in 1..=n {
                    for leaks in subsets(&all) {
                        if leaks.len() < n - p + 2 {
                            continue;
                        }
                        out.push(SuiteInstance {
                            name: format!(
                                "cycle n={} in=1 out={} leak={}",
                                n,
                                p,
                                set_text(&leaks)
                            ),
                            check: Check::Decide {
                                model: cycle_model(n, 1, p, &leaks),
                                expected: Expected::Unidentifiable,
                                require_leak_pair_certificate: false,
                                require_counting_certificate: true,
                            },
                        });
                    }
                }
            }
        }
        SuiteKind::FinWing => {
            for n in 3..=max_n {
                for (label, graph) in [
                    ("fin", FamilyGraph::Fin { n }),
                    ("wing", FamilyGraph::Wing { n }),
                ] {
                    let mut leak_sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new()];
                    leak_sets.extend((1..=n).map(|c| BTreeSet::from([c])));
                    for leaks in leak_sets {
                        let family =
                            Family::new(graph.clone(), [1], [1], leaks.iter().copied());
                        out.push(decide_instance(
                            format!("{} n={} leak={}", label, n, set_text(&leaks)),
                            family.build().expect("fin/wing placements are valid"),
                            Expected::Identifiable,
                        ));
                    }
                }
            }
        }
        SuiteKind::AddEdges => {
            for n in 3..=max_n {
                let mut additions: Vec<(String, BTreeSet<usize>, BTreeSet<usize>)> = Vec::new();
                for i in 2..n {
                    additions.push((
                        format!("+in{{{}}}", i),
                        BTreeSet::from([i]),
                        BTreeSet::new(),
                    ));
                }
                for j in 3..=n {
                    additions.push((
                        format!("+out{{{}}}", j),
                        BTreeSet::new(),
                        BTreeSet::from([j]),
                    ));
                }
                if n >= 4 {
                    for j in 3..=n {
                        for l in (j + 1)..=n {
                            additions.push((
                                format!("+out{{{},{}}}", j, l),
                                BTreeSet::new(),
                                BTreeSet::from([j, l]),
                            ));
                        }
                    }
                }
                let mut leak_sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new()];
                leak_sets.extend((1..=n).map(|c| BTreeSet::from([c])));
                for (tag, incoming, outgoing) in additions {
                    for leaks in &leak_sets {
                        let family = Family::new(
                            FamilyGraph::CyclePlusEdges {
                                n,
                                incoming: incoming.clone(),
                                outgoing: outgoing.clone(),
                            },
                            [1],
                            [1],
                            leaks.iter().copied(),
                        );
                        out.push(decide_instance(
                            format!("cycle{} n={} leak={}", tag, n, set_text(leaks)),
                            family.build().expect("edge additions are valid"),
                            Expected::Identifiable,
                        ));
                    }
                }
            }
        }
        SuiteKind::LeakRemoval => {
            for n in 3..=max_n {
                for (label, graph) in [
                    ("catenary", FamilyGraph::Catenary { n }),
                    ("cycle", FamilyGraph::Cycle { n }),
                    ("mammillary", FamilyGraph::Mammillary { n }),
                ] {
                    let mut leak_sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new()];
                    leak_sets.extend((1..=n).map(|c| BTreeSet::from([c])));
                    for leaks in leak_sets {
                        let family =
                            Family::new(graph.clone(), [1], [1], leaks.iter().copied());
                        out.push(decide_instance(
                            format!("{} n={} leak={}", label, n, set_text(&leaks)),
                            family.build().expect("family placements are valid"),
                            Expected::Identifiable,
                        ));
                    }
                }
            }
        }
        SuiteKind::ClosedForms => {
            for n in 3..=max_n {
                for p in 2..=n {
                    out.push(SuiteInstance {
                        name: format!("closed-form cycle n={} p={} leak={{}}", n, p),
                        check: Check::ClosedForm {
                            family: Family::new(FamilyGraph::Cycle { n }, [1], [p], []),
                        },
                    });
                }
            }
            let smaller = max_n.saturating_sub(1).max(3);
            for n in 3..=smaller {
                let all: Vec<usize> = (1..=n).collect();
                for p in 1..=n {
                    for leaks in subsets(&all) {
                        if leaks.is_empty() {
                            continue;
                        }
                        out.push(SuiteInstance {
                            name: format!(
                                "closed-form cycle n={} p={} leak={}",
                                n,
                                p,
                                set_text(&leaks)
                            ),
                            check: Check::ClosedForm {
                                family: Family::new(
                                    FamilyGraph::Cycle { n },
                                    [1],
                                    [p],
                                    leaks.iter().copied(),
                                ),
                            },
                        });
                    }
                }
                for (label, graph) in [
                    ("fin", FamilyGraph::Fin { n }),
                    ("wing", FamilyGraph::Wing { n }),
                ] {
                    out.push(SuiteInstance {
                        name: format!("closed-form {} n={}", label, n),
                        check: Check::ClosedForm {
                            family: Family::new(graph, [1], [1], []),
                        },
                    });
                }
            }
        }
        SuiteKind::Vandermonde => {
            for n in 1..=max_n {
                out.push(SuiteInstance {
                    name: format!("vandermonde n={}", n),
                    check: Check::Vandermonde { n },
                });
            }
        }
        SuiteKind::ConjectureSweep => {
            for n in 3..=max_n {
                let incoming_pool: Vec<usize> = (2..n).collect();
                let outgoing_pool: Vec<usize> = (3..=n).collect();
                for s in subsets(&incoming_pool) {
                    if s.is_empty() {
                        continue;
                    }
                    let family = Family::new(
                        FamilyGraph::CyclePlusEdges {
                            n,
                            incoming: s.clone(),
                            outgoing: BTreeSet::new(),
                        },
                        [1],
                        [1],
                        [],
                    );
                    out.push(decide_instance(
                        format!("cycle+in{} n={}", set_text(&s), n),
                        family.build().expect("edge additions are valid"),
                        Expected::Informational,
                    ));
                }
                for s in subsets(&outgoing_pool) {
                    if s.is_empty() {
                        continue;
                    }
                    let family = Family::new(
                        FamilyGraph::CyclePlusEdges {
                            n,
                            incoming: BTreeSet::new(),
                            outgoing: s.clone(),
                        },
                        [1],
                        [1],
                        [],
                    );
                    out.push(decide_instance(
                        format!("cycle+out{} n={}", set_text(&s), n),
                        family.build().expect("edge additions are valid"),
                        Expected::Informational,
                    ));
                }
            }
        }
    }
    out
}

/// Runs one instance and scores it against its prediction.
pub fn run_instance(inst: &SuiteInstance, trials: u32, seed: u64) -> InstanceOutcome {
    match &inst.check {
        Check::Decide {
            model,
            expected,
            require_leak_pair_certificate,
            require_counting_certificate,
        } => {
            let verdict = match decide(model, trials, seed) {
                Ok(v) => v,
                Err(e) => {
                    return InstanceOutcome {
                        name: inst.name.clone(),
                        expected: expected.label().to_string(),
                        actual: "error".to_string(),
                        pass: false,
                        detail: e.to_string(),
                    }
                }
            };
            let actual = if verdict.identifiable {
                "identifiable"
            } else {
                "unidentifiable"
            };
            let has_leak_pair = verdict
                .certificates
                .iter()
                .any(|c| matches!(c, Certificate::LeakPairDependence { .. }));
            let has_counting = verdict
                .certificates
                .iter()
                .any(|c| matches!(c, Certificate::CountingBound { .. }));
            let pass = match expected {
                Expected::Identifiable => {
                    verdict.identifiable && verdict.certified && verdict.witness_point.is_some()
                }
                Expected::Unidentifiable => {
                    !verdict.identifiable
                        && (!require_leak_pair_certificate || has_leak_pair)
                        && (!require_counting_certificate || (has_counting && verdict.trials == 0))
                }
                Expected::Informational => true,
            };
            let mut notes: Vec<String> = verdict
                .certificates
                .iter()
                .map(|c| c.kind().to_string())
                .collect();
            notes.dedup();
            InstanceOutcome {
                name: inst.name.clone(),
                expected: expected.label().to_string(),
                actual: actual.to_string(),
                pass,
                detail: format!(
                    "rank {}/{} over {} coefficients{}",
                    verdict.generic_rank,
                    verdict.required_rank,
                    verdict.num_coefficients,
                    if notes.is_empty() {
                        String::new()
                    } else {
                        format!("; certificates: {}", notes.join(", "))
                    }
                ),
            }
        }
        Check::ClosedForm { family } => match compare_closed_form(family) {
            Ok(cmp) => {
                let (actual, detail) = match &cmp {
                    ClosedFormComparison::Equal => {
                        ("equal".to_string(), "symbolic equality".to_string())
                    }
                    ClosedFormComparison::EqualUpToPermutation(perm) => (
                        "equal".to_string(),
                        format!("equal up to entry permutation {:?}", perm),
                    ),
                    ClosedFormComparison::Different(d) => ("different".to_string(), d.clone()),
                };
                InstanceOutcome {
                    name: inst.name.clone(),
                    expected: "equal".to_string(),
                    actual,
                    pass: cmp.is_equal(),
                    detail,
                }
            }
            Err(e) => InstanceOutcome {
                name: inst.name.clone(),
                expected: "equal".to_string(),
                actual: "error".to_string(),
                pass: false,
                detail: e.to_string(),
            },
        },
        Check::Vandermonde { n } => {
            let ok = vandermonde_check(*n);
            InstanceOutcome {
                name: inst.name.clone(),
                expected: "det = +/-vandermonde".to_string(),
                actual: if ok {
                    "det = +/-vandermonde".to_string()
                } else {
                    "mismatch".to_string()
                },
                pass: ok,
                detail: String::new(),
            }
        }
    }
}
