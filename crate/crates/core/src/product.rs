use std::collections::{HashMap, VecDeque};

use crate::automaton::{CostAutomaton, StateId, Symbol, Transition};
use crate::error::Result;
use crate::structure::trim;

pub const DEFAULT_PAIR_SEPARATOR: &str = "|";

/// Cartesian product synchronised on shared symbols, with summed costs and
/// pair states named `left|right`. The result is trimmed; an empty
/// intersection yields [`crate::Error::EmptyAutomaton`].
pub fn product(a1: &CostAutomaton, a2: &CostAutomaton) -> Result<CostAutomaton> {
    product_with_separator(a1, a2, DEFAULT_PAIR_SEPARATOR)
}

pub fn product_with_separator(a1: &CostAutomaton, a2: &CostAutomaton, separator: &str) -> Result<CostAutomaton> {
    let x1 = a1.index()?;
    let x2 = a2.index()?;
    let alphabet: Vec<Symbol> = a1
        .alphabet
        .iter()
        .filter(|s| a2.alphabet.contains(s))
        .cloned()
        .collect();
    let (Some(i1), Some(i2)) = (x1.initial, x2.initial) else {
        return trim(&CostAutomaton::empty(alphabet));
    };
    // symbol index of a2 for each symbol index of a1
    let to_right: Vec<Option<usize>> = a1
        .alphabet
        .iter()
        .map(|s| a2.alphabet.iter().position(|t| t == s))
        .collect();
    let out1 = x1.out_edges();
    let out2 = x2.out_edges();

    let mut pairs = vec![(i1, i2)];
    let mut lookup = HashMap::from([((i1, i2), 0usize)]);
    let mut queue = VecDeque::from([0usize]);
    let mut edges = Vec::new();
    while let Some(id) = queue.pop_front() {
        let (q, p) = pairs[id];
        for e1 in &out1[q] {
            let Some(sym2) = to_right[e1.symbol] else { continue };
            for e2 in out2[p].iter().filter(|e| e.symbol == sym2) {
                let key = (e1.to, e2.to);
                let target = *lookup.entry(key).or_insert_with(|| {
                    pairs.push(key);
                    queue.push_back(pairs.len() - 1);
                    pairs.len() - 1
                });
                edges.push((id, e1.symbol, target, e1.cost + e2.cost));
            }
        }
    }

    let names: Vec<StateId> = pairs
        .iter()
        .map(|&(q, p)| StateId::new(format!("{}{separator}{}", a1.states[q], a2.states[p])))
        .collect();
    let joined = CostAutomaton {
        alphabet,
        states: names.clone(),
        initial: Some(names[0].clone()),
        accepting: pairs
            .iter()
            .zip(&names)
            .filter(|(&(q, p), _)| x1.accepting[q] && x2.accepting[p])
            .map(|(_, n)| n.clone())
            .collect(),
        transitions: edges
            .into_iter()
            .map(|(from, sym, to, cost)| Transition {
                from: names[from].clone(),
                symbol: a1.alphabet[sym].clone(),
                to: names[to].clone(),
                cost,
            })
            .collect(),
    };
    trim(&joined)
}
