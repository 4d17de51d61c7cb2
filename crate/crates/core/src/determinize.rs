use std::collections::{HashMap, VecDeque};

use crate::automaton::{CostAutomaton, StateId, Transition};
use crate::error::{Error, Result};
use crate::structure::trim_or_empty;

/// Default bound on the number of subset states explored by [`determinize_capped`].
pub const DEFAULT_STATE_CAP: usize = 1 << 20;

/// Subset construction. The result is deterministic, trimmed, accepts the same
/// language and carries zero costs. Subset states are named `{p,q,...}` in the
/// order of the input's state list.
pub fn determinize(a: &CostAutomaton) -> Result<CostAutomaton> {
    determinize_capped(a, usize::MAX)
}

/// As [`determinize`], failing with [`Error::StateCapExceeded`] once more than
/// `cap` subsets have been discovered.
pub fn determinize_capped(a: &CostAutomaton, cap: usize) -> Result<CostAutomaton> {
    let ix = a.index()?;
    let Some(init) = ix.initial else {
        return Ok(CostAutomaton::empty(a.alphabet.clone()));
    };
    // succ[state][symbol] = successors
    let mut succ = vec![vec![Vec::new(); ix.num_symbols]; ix.num_states];
    for e in &ix.edges {
        succ[e.from][e.symbol].push(e.to);
    }

    let mut subsets: Vec<Vec<usize>> = vec![vec![init]];
    let mut lookup: HashMap<Vec<usize>, usize> = HashMap::from([(vec![init], 0)]);
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    let mut mark = vec![false; ix.num_states];
    while let Some(id) = queue.pop_front() {
        for sym in 0..ix.num_symbols {
            let mut next = Vec::new();
            for &q in &subsets[id] {
                for &t in succ[q].get(sym).into_iter().flatten() {
                    if !mark[t] {
                        mark[t] = true;
                        next.push(t);
                    }
                }
            }
            if next.is_empty() {
                continue;
            }
            for &t in &next {
                mark[t] = false;
            }
            next.sort_unstable();
            let target = match lookup.get(&next) {
                Some(&t) => t,
                None => {
                    if subsets.len() >= cap {
                        return Err(Error::StateCapExceeded { cap });
                    }
                    let t = subsets.len();
                    lookup.insert(next.clone(), t);
                    subsets.push(next);
                    queue.push_back(t);
                    t
                }
            };
            edges.push((id, sym, target));
        }
    }

    let name = |set: &[usize]| {
        let parts: Vec<&str> = set.iter().map(|&q| a.states[q].as_str()).collect();
        StateId::new(format!("{{{}}}", parts.join(",")))
    };
    let names: Vec<StateId> = subsets.iter().map(|s| name(s)).collect();
    let dfa = CostAutomaton {
        alphabet: a.alphabet.clone(),
        states: names.clone(),
        initial: Some(names[0].clone()),
        accepting: subsets
            .iter()
            .zip(&names)
            .filter(|(s, _)| s.iter().any(|&q| ix.accepting[q]))
            .map(|(_, n)| n.clone())
            .collect(),
        transitions: edges
            .into_iter()
            .map(|(p, sym, q)| Transition {
                from: names[p].clone(),
                symbol: a.alphabet[sym].clone(),
                to: names[q].clone(),
                cost: 0.0,
            })
            .collect(),
    };
    trim_or_empty(&dfa)
}
