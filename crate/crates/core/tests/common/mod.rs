//! Fixture corpus, random automata and brute-force oracles shared by the
//! integration tests. Nothing here calls the library's algorithms.
#![allow(dead_code)]

use std::collections::HashMap;
use std::ops::Range;

use freeenergy::{fixtures, CostAutomaton, PairCostFunction, StateId, Transition};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::Rng;

pub fn doubled_branching() -> CostAutomaton {
    CostAutomaton::from_edges(
        "s",
        &["s", "t"],
        &[
            ("s", "a", "s", 0.0),
            ("s", "a", "t", 0.0),
            ("t", "a", "s", 0.0),
            ("t", "a", "t", 0.0),
        ],
    )
}

/// Strongly connected fixtures with at most six states.
pub fn strongly_connected() -> Vec<(&'static str, CostAutomaton)> {
    vec![
        ("two-cycle", fixtures::ab_cycle(1.0, 2.0)),
        (
            "cycle b2 a5",
            CostAutomaton::from_edges("B", &["C"], &[("B", "b", "C", 2.0), ("C", "a", "B", 5.0)]),
        ),
        ("branching nfa", fixtures::branching_nfa()),
        ("branching nfa, zero cost", fixtures::branching_nfa().zero_costs()),
        ("nucleotide 1", fixtures::nucleotide_1()),
        ("nucleotide 2", fixtures::nucleotide_2()),
        ("(ab)*", fixtures::ab_star()),
        ("doubled branching", doubled_branching()),
        (
            "golden mean",
            CostAutomaton::from_edges(
                "0",
                &["0"],
                &[("0", "a", "0", 0.3), ("0", "b", "1", 0.1), ("1", "a", "0", -0.2)],
            ),
        ),
        (
            "ring with chord",
            CostAutomaton::from_edges(
                "x",
                &["x", "y", "z"],
                &[
                    ("x", "a", "y", 0.5),
                    ("y", "b", "z", 1.5),
                    ("z", "a", "x", 0.0),
                    ("z", "b", "y", 0.25),
                ],
            ),
        ),
        (
            "full shift",
            CostAutomaton::from_edges("s", &["s"], &[("s", "a", "s", 0.0), ("s", "b", "s", 0.0)]),
        ),
        (
            "five ring",
            CostAutomaton::from_edges(
                "0",
                &["0", "3"],
                &[
                    ("0", "a", "1", 0.2),
                    ("1", "a", "2", 0.4),
                    ("2", "a", "3", 0.1),
                    ("3", "a", "4", 0.9),
                    ("4", "a", "0", 0.0),
                    ("2", "b", "0", 1.2),
                    ("4", "b", "2", 0.3),
                ],
            ),
        ),
        (
            "negative costs",
            CostAutomaton::from_edges(
                "p",
                &["p", "q"],
                &[("p", "a", "q", -1.0), ("q", "a", "p", -0.5), ("p", "b", "p", -2.0)],
            ),
        ),
    ]
}

/// The same automaton with every state accepting.
pub fn all_accepting(a: &CostAutomaton) -> CostAutomaton {
    CostAutomaton {
        accepting: a.states.clone(),
        ..a.clone()
    }
}

fn build(n: usize, alphabet: usize, edges: Vec<(usize, usize, usize, f64)>, accepting: Vec<bool>) -> CostAutomaton {
    let name = |i: usize| StateId::new(format!("s{i}"));
    CostAutomaton {
        alphabet: (0..alphabet)
            .map(|i| ((b'a' + i as u8) as char).to_string().as_str().into())
            .collect(),
        states: (0..n).map(name).collect(),
        initial: Some(name(0)),
        accepting: (0..n).filter(|&i| accepting[i]).map(name).collect(),
        transitions: edges
            .into_iter()
            .map(|(p, a, q, c)| {
                Transition::new(
                    format!("s{p}"),
                    ((b'a' + a as u8) as char).to_string(),
                    format!("s{q}"),
                    c,
                )
            })
            .collect(),
    }
}

/// Random NFA over the first `alphabet` letters; each possible transition is
/// present with probability `density`.
pub fn random_nfa(
    rng: &mut StdRng,
    max_states: usize,
    alphabet: usize,
    density: f64,
    cost: Range<f64>,
) -> CostAutomaton {
    let n = rng.random_range(1..=max_states);
    let mut edges = Vec::new();
    for p in 0..n {
        for a in 0..alphabet {
            for q in 0..n {
                if rng.random_bool(density) {
                    edges.push((p, a, q, rng.random_range(cost.clone())));
                }
            }
        }
    }
    let accepting = (0..n).map(|_| rng.random_bool(0.5)).collect();
    build(n, alphabet, edges, accepting)
}

/// Random DFA: each `(state, symbol)` has a successor with probability `density`.
pub fn random_dfa(
    rng: &mut StdRng,
    max_states: usize,
    alphabet: usize,
    density: f64,
    cost: Range<f64>,
) -> CostAutomaton {
    let n = rng.random_range(1..=max_states);
    let mut edges = Vec::new();
    for p in 0..n {
        for a in 0..alphabet {
            if rng.random_bool(density) {
                edges.push((p, a, rng.random_range(0..n), rng.random_range(cost.clone())));
            }
        }
    }
    let accepting = (0..n).map(|_| rng.random_bool(0.5)).collect();
    build(n, alphabet, edges, accepting)
}

pub fn arb_nfa(max_states: usize, alphabet: usize) -> impl Strategy<Value = CostAutomaton> {
    (1..=max_states).prop_flat_map(move |n| {
        (
            proptest::collection::vec(proptest::option::weighted(0.3, -2.0..2.0f64), n * alphabet * n),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(move |(slots, accepting)| {
                let edges = slots
                    .into_iter()
                    .enumerate()
                    .filter_map(|(i, c)| c.map(|c| (i / (alphabet * n), (i / n) % alphabet, i % n, c)))
                    .collect();
                build(n, alphabet, edges, accepting)
            })
    })
}

pub fn arb_dfa(max_states: usize, alphabet: usize) -> impl Strategy<Value = CostAutomaton> {
    (1..=max_states).prop_flat_map(move |n| {
        (
            proptest::collection::vec(proptest::option::weighted(0.7, (0..n, -2.0..2.0f64)), n * alphabet),
            proptest::collection::vec(any::<bool>(), n),
        )
            .prop_map(move |(slots, accepting)| {
                let edges = slots
                    .into_iter()
                    .enumerate()
                    .filter_map(|(i, t)| t.map(|(q, c)| (i / alphabet, i % alphabet, q, c)))
                    .collect();
                build(n, alphabet, edges, accepting)
            })
    })
}

/// Every word over `alphabet` of length exactly `n`.
pub fn words_of_length(alphabet: &[String], n: usize) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                alphabet.iter().map(move |s| {
                    let mut w = w.clone();
                    w.push(s.clone());
                    w
                })
            })
            .collect();
    }
    out
}

pub fn words_up_to(alphabet: &[String], max: usize) -> Vec<Vec<String>> {
    (0..=max).flat_map(|n| words_of_length(alphabet, n)).collect()
}

pub fn alphabet_of(a: &CostAutomaton) -> Vec<String> {
    a.alphabet.iter().map(ToString::to_string).collect()
}

/// NFA acceptance by tracking the set of current states.
pub fn accepts(a: &CostAutomaton, word: &[String]) -> bool {
    let Some(init) = &a.initial else { return false };
    let mut current = vec![init.clone()];
    for s in word {
        let mut next: Vec<StateId> = a
            .transitions
            .iter()
            .filter(|t| t.symbol.as_str() == s && current.contains(&t.from))
            .map(|t| t.to.clone())
            .collect();
        next.sort();
        next.dedup();
        current = next;
    }
    current.iter().any(|q| a.accepting.contains(q))
}

/// All runs of `word` from `from`, as transition lists.
pub fn runs_on<'a>(a: &'a CostAutomaton, from: &StateId, word: &[String]) -> Vec<Vec<&'a Transition>> {
    let Some((first, rest)) = word.split_first() else {
        return vec![Vec::new()];
    };
    let mut out = Vec::new();
    for t in a
        .transitions
        .iter()
        .filter(|t| &t.from == from && t.symbol.as_str() == first)
    {
        for mut tail in runs_on(a, &t.to, rest) {
            tail.insert(0, t);
            out.push(tail);
        }
    }
    out
}

/// `Σ e^{cost}` over explicitly enumerated runs of length `n`: from every
/// state to anywhere (`accepting_only = false`) or initial to accepting.
pub fn enumerate_runs(a: &CostAutomaton, n: usize, accepting_only: bool) -> f64 {
    fn go(a: &CostAutomaton, q: &StateId, left: usize, cost: f64, accepting_only: bool) -> f64 {
        if left == 0 {
            return if !accepting_only || a.accepting.contains(q) {
                cost.exp()
            } else {
                0.0
            };
        }
        a.transitions
            .iter()
            .filter(|t| &t.from == q)
            .map(|t| go(a, &t.to, left - 1, cost + t.cost, accepting_only))
            .sum()
    }
    if accepting_only {
        a.initial.as_ref().map_or(0.0, |i| go(a, i, n, 0.0, true))
    } else {
        a.states.iter().map(|q| go(a, q, n, 0.0, false)).sum()
    }
}

pub fn pair_cost_of(u: &PairCostFunction, word: &[String]) -> f64 {
    word.windows(2)
        .map(|p| u.get(&p[0].as_str().into(), &p[1].as_str().into()))
        .sum()
}

/// `Σ e^{U(w)}` over explicitly enumerated accepted words of length `n`.
pub fn enumerate_words(a: &CostAutomaton, u: &PairCostFunction, n: usize) -> f64 {
    words_of_length(&alphabet_of(a), n)
        .iter()
        .filter(|w| accepts(a, w))
        .map(|w| pair_cost_of(u, w).exp())
        .sum()
}

/// Reflexive-transitive reachability by Floyd–Warshall.
pub fn reachability(a: &CostAutomaton) -> (HashMap<StateId, usize>, Vec<Vec<bool>>) {
    let ix: HashMap<StateId, usize> = a.states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let n = a.states.len();
    let mut r = vec![vec![false; n]; n];
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = true;
    }
    for t in &a.transitions {
        r[ix[&t.from]][ix[&t.to]] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    (ix, r)
}

/// Names of states reachable from the initial state and co-reachable to an accepting one.
pub fn useful_states(a: &CostAutomaton) -> Vec<StateId> {
    let (ix, r) = reachability(a);
    let Some(init) = &a.initial else { return Vec::new() };
    a.states
        .iter()
        .filter(|q| r[ix[init]][ix[*q]] && a.accepting.iter().any(|f| r[ix[*q]][ix[f]]))
        .cloned()
        .collect()
}

/// Largest eigenvalue modulus via nalgebra.
pub fn eigen_radius(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    if n == 0 {
        return 0.0;
    }
    let m = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    m.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Free energy from first principles: restrict to useful states, then
/// `ln ρ` of the whole exponentiated-cost matrix (which is the maximum over
/// its irreducible blocks), floored at 0 when some useful state lies on no
/// cycle.
pub fn reference_energy(a: &CostAutomaton) -> f64 {
    let useful = useful_states(a);
    if useful.is_empty() {
        return 0.0;
    }
    let pos: HashMap<&StateId, usize> = useful.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let n = useful.len();
    let mut rows = vec![vec![0.0; n]; n];
    for t in &a.transitions {
        if let (Some(&i), Some(&j)) = (pos.get(&t.from), pos.get(&t.to)) {
            rows[i][j] += t.cost.exp();
        }
    }
    let (ix, r) = reachability(a);
    let on_cycle = |q: &StateId| {
        a.transitions
            .iter()
            .any(|t| pos.contains_key(&t.from) && pos.contains_key(&t.to) && &t.to == q && r[ix[q]][ix[&t.from]])
    };
    let acyclic_exists = useful.iter().any(|q| !on_cycle(q));
    let cyclic_exists = useful.iter().any(on_cycle);
    let mut best = f64::NEG_INFINITY;
    if cyclic_exists {
        best = eigen_radius(&rows).ln();
    }
    if acyclic_exists {
        best = best.max(0.0);
    }
    best
}

/// `ln(x + y)` from `ln x`, `ln y` (either may be absent for 0).
pub fn log_add(x: Option<f64>, y: Option<f64>) -> Option<f64> {
    match (x, y) {
        (Some(a), Some(b)) => {
            let m = a.max(b);
            Some(m + ((a - m).exp() + (b - m).exp()).ln())
        }
        (a, None) => a,
        (None, b) => b,
    }
}
