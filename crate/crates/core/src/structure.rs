//! Clean-up (trimming) and strongly connected components.

use std::collections::{HashMap, VecDeque};

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::automaton::{CostAutomaton, Indexed, StateId};
use crate::error::{Error, Result};

fn bfs(n: usize, starts: impl IntoIterator<Item = usize>, adj: &[Vec<usize>]) -> Vec<bool> {
    let mut seen = vec![false; n];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for s in starts {
        if !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen
}

/// States reachable from the initial state and co-reachable to an accepting one.
pub(crate) fn useful_states(ix: &Indexed) -> Vec<bool> {
    let n = ix.num_states;
    let Some(init) = ix.initial else {
        return vec![false; n];
    };
    let mut fwd = vec![Vec::new(); n];
    let mut bwd = vec![Vec::new(); n];
    for e in &ix.edges {
        fwd[e.from].push(e.to);
        bwd[e.to].push(e.from);
    }
    let reach = bfs(n, [init], &fwd);
    let coreach = bfs(n, (0..n).filter(|&i| ix.accepting[i]), &bwd);
    (0..n).map(|i| reach[i] && coreach[i]).collect()
}

/// Removes every state that is unreachable from the initial state or cannot
/// reach an accepting state. Fails with [`Error::EmptyAutomaton`] when nothing
/// is left.
pub fn trim(a: &CostAutomaton) -> Result<CostAutomaton> {
    let ix = a.index()?;
    let keep = useful_states(&ix);
    if !keep.iter().any(|&k| k) {
        return Err(Error::EmptyAutomaton);
    }
    let kept: Vec<StateId> = a
        .states
        .iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(s, _)| s.clone())
        .collect();
    Ok(a.restrict(&kept))
}

/// Trims, mapping an empty language to the empty automaton instead of an error.
pub fn trim_or_empty(a: &CostAutomaton) -> Result<CostAutomaton> {
    match trim(a) {
        Err(Error::EmptyAutomaton) => Ok(CostAutomaton::empty(a.alphabet.clone())),
        other => other,
    }
}

/// Partition of the states into maximal strongly connected components.
#[derive(Clone, Debug, PartialEq)]
pub struct SccPartition {
    pub components: Vec<Vec<StateId>>,
    pub component_of: HashMap<StateId, usize>,
    /// Per component: a single state with no self-loop.
    pub is_singleton_without_loop: Vec<bool>,
}

/// Components as index lists, in the order produced by Tarjan's algorithm
/// (sink components first). States inside a component are sorted.
pub(crate) fn components(ix: &Indexed) -> Vec<Vec<usize>> {
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(ix.num_states, ix.edges.len());
    for _ in 0..ix.num_states {
        g.add_node(());
    }
    for e in &ix.edges {
        g.add_edge(NodeIndex::new(e.from), NodeIndex::new(e.to), ());
    }
    tarjan_scc(&g)
        .into_iter()
        .map(|c| {
            let mut v: Vec<usize> = c.into_iter().map(NodeIndex::index).collect();
            v.sort_unstable();
            v
        })
        .collect()
}

pub(crate) fn has_self_loop(ix: &Indexed, state: usize) -> bool {
    ix.edges.iter().any(|e| e.from == state && e.to == state)
}

pub fn scc(a: &CostAutomaton) -> Result<SccPartition> {
    let ix = a.index()?;
    let comps = components(&ix);
    let mut component_of = HashMap::new();
    for (c, states) in comps.iter().enumerate() {
        for &s in states {
            component_of.insert(a.states[s].clone(), c);
        }
    }
    Ok(SccPartition {
        is_singleton_without_loop: comps
            .iter()
            .map(|c| c.len() == 1 && !has_self_loop(&ix, c[0]))
            .collect(),
        components: comps
            .iter()
            .map(|c| c.iter().map(|&s| a.states[s].clone()).collect())
            .collect(),
        component_of,
    })
}
