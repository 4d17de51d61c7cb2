//! Small reference automata used throughout the test-suites and the CLI
//! documentation: the running examples of the free-energy literature.

use crate::automaton::CostAutomaton;
use crate::lang_cost::PairCostFunction;

/// Two-state machine for `(ab)*` with one cost per symbol.
pub fn ab_cycle(cost_a: f64, cost_b: f64) -> CostAutomaton {
    CostAutomaton::from_edges("A", &["A"], &[("A", "a", "B", cost_a), ("B", "b", "A", cost_b)])
}

/// Three-state machine for `(ab)*` realising U(a,b)=2, U(b,a)=5.
pub fn pair_machine() -> CostAutomaton {
    CostAutomaton::from_edges(
        "A",
        &["A", "C"],
        &[("A", "a", "B", 0.0), ("B", "b", "C", 2.0), ("C", "a", "B", 5.0)],
    )
}

/// Six-state NFA with branching costs ln k(p,a) already attached.
pub fn branching_nfa() -> CostAutomaton {
    let ln3 = 3f64.ln();
    let ln2 = 2f64.ln();
    CostAutomaton::from_edges(
        "A",
        &["A"],
        &[
            ("A", "a", "B", ln3),
            ("A", "a", "C", ln3),
            ("A", "a", "D", ln3),
            ("A", "b", "E", 0.0),
            ("B", "a", "F", 0.0),
            ("C", "a", "F", 0.0),
            ("D", "a", "F", 0.0),
            ("E", "a", "F", 0.0),
            ("F", "b", "E", ln2),
            ("F", "b", "A", ln2),
        ],
    )
}

/// First nucleotide NFA of the similarity example.
pub fn nucleotide_1() -> CostAutomaton {
    CostAutomaton::from_edges(
        "1",
        &["2", "3"],
        &[
            ("1", "A", "2", 0.14),
            ("1", "G", "2", 0.1),
            ("1", "A", "3", 0.76),
            ("2", "G", "1", 0.2),
            ("2", "T", "4", 0.8),
            ("4", "C", "2", 0.35),
            ("4", "C", "3", 0.65),
            ("3", "G", "1", 0.7),
        ],
    )
}

/// Second nucleotide NFA of the similarity example.
pub fn nucleotide_2() -> CostAutomaton {
    CostAutomaton::from_edges(
        "5",
        &["5", "6"],
        &[
            ("5", "C", "6", 0.2),
            ("5", "G", "6", 0.4),
            ("5", "A", "6", 0.9),
            ("6", "T", "5", 0.7),
            ("6", "C", "5", 0.2),
        ],
    )
}

/// Edges of the Cartesian product of [`nucleotide_1`] and [`nucleotide_2`], with
/// pair states written `left|right`.
pub fn nucleotide_product_edges() -> Vec<(&'static str, &'static str, &'static str, f64)> {
    vec![
        ("1|5", "G", "2|6", 0.5),
        ("1|5", "A", "2|6", 1.04),
        ("1|5", "A", "3|6", 1.66),
        ("2|6", "T", "4|5", 1.5),
        ("4|5", "C", "2|6", 0.55),
        ("4|5", "C", "3|6", 0.85),
    ]
}

/// Two-state DFA for `(ab)*`.
pub fn ab_star() -> CostAutomaton {
    CostAutomaton::from_edges("p", &["p"], &[("p", "a", "q", 0.0), ("q", "b", "p", 0.0)])
}

/// U(a,b)=2, U(b,a)=5, every other pair 0.
pub fn ab_pair_costs() -> PairCostFunction {
    PairCostFunction::new(["a", "b"])
        .with("a", "b", 2.0)
        .with("b", "a", 5.0)
}
