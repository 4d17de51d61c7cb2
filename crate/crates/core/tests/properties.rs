mod common;

use std::collections::{HashMap, HashSet};

use common::*;
use freeenergy::energy::{free_energy_with, EnergyOptions, MatrixForm};
use freeenergy::lang_cost::implement_construction;
use freeenergy::nondet::lambda_exact;
use freeenergy::spectral::spectral_radius;
use freeenergy::{
    determinize, free_energy, lambda_plus, product, scc, similarity, trim, CostAutomaton, Error, NonnegativeMatrix,
    PairCostFunction, SolverConfig, StateId, Symbol, Transition,
};
use proptest::prelude::*;

const TOL: f64 = 1e-12;

fn radius(rows: Vec<Vec<f64>>) -> f64 {
    spectral_radius(&NonnegativeMatrix::from_rows(rows).unwrap(), &SolverConfig::default())
        .unwrap()
        .radius
}

fn energy(a: &CostAutomaton) -> f64 {
    free_energy(a).unwrap().energy
}

fn arb_matrix(max_dim: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1..=max_dim).prop_flat_map(|n| {
        proptest::collection::vec(
            proptest::collection::vec(
                proptest::option::weighted(0.6, 0.0..3.0f64).prop_map(|x| x.unwrap_or(0.0)),
                n,
            ),
            n,
        )
    })
}

fn arb_positive_matrix(max_dim: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1..=max_dim).prop_flat_map(|n| proptest::collection::vec(proptest::collection::vec(0.01..3.0f64, n), n))
}

fn rename(a: &CostAutomaton) -> CostAutomaton {
    let s = |q: &StateId| StateId::new(format!("renamed-{q}"));
    let y = |x: &Symbol| Symbol::new(format!("{x}'"));
    let mut states: Vec<StateId> = a.states.iter().map(s).collect();
    states.reverse();
    let mut transitions: Vec<Transition> = a
        .transitions
        .iter()
        .map(|t| Transition {
            from: s(&t.from),
            symbol: y(&t.symbol),
            to: s(&t.to),
            cost: t.cost,
        })
        .collect();
    transitions.reverse();
    CostAutomaton {
        alphabet: a.alphabet.iter().map(y).collect(),
        states,
        initial: a.initial.as_ref().map(s),
        accepting: a.accepting.iter().map(s).collect(),
        transitions,
    }
}

fn nonnegative(a: &CostAutomaton) -> CostAutomaton {
    a.map_costs(|t| t.cost.abs())
}

fn cyclic_energies(report: &freeenergy::EnergyReport) -> Vec<(Vec<String>, f64)> {
    report
        .per_component
        .iter()
        .filter(|c| !c.singleton_without_loop)
        .map(|c| (c.states.clone(), c.energy))
        .collect()
}

// structure

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trim_is_idempotent(a in arb_nfa(6, 2)) {
        match trim(&a) {
            Ok(t) => {
                let again = trim(&t).unwrap();
                prop_assert_eq!(&again.states, &t.states);
                prop_assert_eq!(again.transitions.len(), t.transitions.len());
            }
            Err(Error::EmptyAutomaton) => prop_assert!(useful_states(&a).is_empty()),
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn trim_keeps_exactly_the_useful_states(a in arb_nfa(6, 2)) {
        let want: HashSet<StateId> = useful_states(&a).into_iter().collect();
        let got: HashSet<StateId> = trim(&a).map(|t| t.states).unwrap_or_default().into_iter().collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn determinize_preserves_the_language(a in arb_nfa(6, 2)) {
        let d = determinize(&a).unwrap();
        prop_assert!(d.is_deterministic());
        for w in words_up_to(&alphabet_of(&a), 8) {
            prop_assert_eq!(accepts(&d, &w), accepts(&a, &w), "word {:?}", w);
        }
    }

    #[test]
    fn product_accepts_the_intersection(a1 in arb_nfa(4, 2), a2 in arb_nfa(4, 2)) {
        let p = match product(&a1, &a2) {
            Ok(p) => Some(p),
            Err(Error::EmptyAutomaton) => None,
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        for w in words_up_to(&alphabet_of(&a1), 8) {
            let both = accepts(&a1, &w) && accepts(&a2, &w);
            prop_assert_eq!(p.as_ref().is_some_and(|p| accepts(p, &w)), both, "word {:?}", w);
        }
    }

    #[test]
    fn scc_is_a_partition_into_mutually_reachable_classes(a in arb_nfa(6, 2)) {
        let part = scc(&a).unwrap();
        let (ix, r) = reachability(&a);
        let mut seen = HashSet::new();
        for c in &part.components {
            for q in c {
                prop_assert!(seen.insert(q.clone()), "{} in two components", q);
            }
        }
        prop_assert_eq!(seen.len(), a.states.len());
        for p in &a.states {
            for q in &a.states {
                let same = part.component_of[p] == part.component_of[q];
                prop_assert_eq!(same, r[ix[p]][ix[q]] && r[ix[q]][ix[p]]);
            }
        }
        for (c, states) in part.components.iter().enumerate() {
            let lone = states.len() == 1
                && !a.transitions.iter().any(|t| t.from == states[0] && t.to == states[0]);
            prop_assert_eq!(part.is_singleton_without_loop[c], lone);
        }
    }

    #[test]
    fn product_costs_add_along_runs(a1 in arb_nfa(3, 2), a2 in arb_nfa(3, 2)) {
        let Ok(p) = product(&a1, &a2) else { return Ok(()) };
        let cost = |a: &CostAutomaton, from: &str, sym: &str, to: &str| {
            a.transitions
                .iter()
                .find(|t| t.from.as_str() == from && t.symbol.as_str() == sym && t.to.as_str() == to)
                .map(|t| t.cost)
        };
        let init = p.initial.clone().unwrap();
        for w in words_up_to(&alphabet_of(&p), 6) {
            for run in runs_on(&p, &init, &w) {
                if !run.last().is_some_and(|t| p.accepting.contains(&t.to)) {
                    continue;
                }
                let (mut total, mut left, mut right) = (0.0, 0.0, 0.0);
                for t in run {
                    let (f1, f2) = t.from.as_str().split_once('|').unwrap();
                    let (t1, t2) = t.to.as_str().split_once('|').unwrap();
                    total += t.cost;
                    left += cost(&a1, f1, t.symbol.as_str(), t1).unwrap();
                    right += cost(&a2, f2, t.symbol.as_str(), t2).unwrap();
                }
                prop_assert!((total - (left + right)).abs() < 1e-12);
            }
        }
    }
}

// spectral

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn radius_matches_eigenvalues(m in arb_matrix(6)) {
        let exact = eigen_radius(&m);
        let got = radius(m);
        prop_assert!((got - exact).abs() <= 1e-9 * exact.max(1.0), "{} vs {}", got, exact);
    }

    #[test]
    fn identity_shift_adds_one(m in arb_positive_matrix(6)) {
        let base = radius(m.clone());
        let shifted = NonnegativeMatrix::from_rows(m).unwrap().shifted(1.0);
        let r = spectral_radius(&shifted, &SolverConfig::default()).unwrap().radius;
        prop_assert!((r - (base + 1.0)).abs() <= 10.0 * TOL * r, "{} vs {}", r, base + 1.0);
    }

    #[test]
    fn scaling_scales(m in arb_matrix(6), c in prop::sample::select(vec![0.5, 2.0, 10.0])) {
        let base = radius(m.clone());
        let scaled = NonnegativeMatrix::from_rows(m).unwrap().scaled(c).unwrap();
        let r = spectral_radius(&scaled, &SolverConfig::default()).unwrap().radius;
        prop_assert!((r - c * base).abs() <= 10.0 * TOL * r.max(1.0), "{} vs {}", r, c * base);
    }

    #[test]
    fn permutation_invariance(m in arb_matrix(6), seed in any::<u64>()) {
        let n = m.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let base = radius(m.clone());
        let p = NonnegativeMatrix::from_rows(m).unwrap().permuted(&perm);
        let r = spectral_radius(&p, &SolverConfig::default()).unwrap().radius;
        prop_assert!((r - base).abs() <= 10.0 * TOL * base.max(1.0), "{} vs {}", r, base);
    }

    #[test]
    fn monotone_in_entries(m in arb_matrix(5), bump in proptest::collection::vec(0.0..1.0f64, 25)) {
        let n = m.len();
        let bigger: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| m[i][j] + bump[i * n + j]).collect()).collect();
        let lo = radius(m);
        let hi = radius(bigger);
        prop_assert!(lo <= hi + 10.0 * TOL * hi.max(1.0), "{} > {}", lo, hi);
    }
}

#[test]
fn circulant_and_rank_one_radii() {
    // circulant with first row (c0, c1, c2, c3): radius c0+c1+c2+c3 for nonnegative entries
    let c = [0.5, 1.5, 0.25, 2.0];
    let rows: Vec<Vec<f64>> = (0..4).map(|i| (0..4).map(|j| c[(j + 4 - i) % 4]).collect()).collect();
    let exact: f64 = c.iter().sum();
    assert!((radius(rows) - exact).abs() / exact <= TOL);
    // u vᵀ has the single nonzero eigenvalue v·u
    let u = [1.0, 2.0, 0.5];
    let v = [0.3, 0.7, 4.0];
    let rows: Vec<Vec<f64>> = u.iter().map(|&a| v.iter().map(|&b| a * b).collect()).collect();
    let exact: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
    assert!((radius(rows) - exact).abs() / exact <= TOL);
}

#[test]
fn corpus_identity_shift() {
    for (name, a) in strongly_connected() {
        let m = freeenergy::energy::gurevich_matrix_compact(&a).unwrap();
        let base = spectral_radius(&m, &SolverConfig::default()).unwrap().radius;
        let r = spectral_radius(&m.shifted(1.0), &SolverConfig::default())
            .unwrap()
            .radius;
        assert!(
            (r - base - 1.0).abs() <= 10.0 * TOL * r,
            "{name}: {r} vs {}",
            base + 1.0
        );
    }
}

// energy

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn energy_matches_first_principles(a in arb_nfa(6, 2)) {
        let want = reference_energy(&a);
        let got = energy(&a);
        prop_assert!((got - want).abs() < 1e-8, "{} vs {}", got, want);
    }

    #[test]
    fn forms_agree(a in arb_nfa(6, 2)) {
        let bip = EnergyOptions { form: MatrixForm::Bipartite, ..Default::default() };
        let x = energy(&a);
        let y = free_energy_with(&a, &bip).unwrap().energy;
        prop_assert!((x - y).abs() < 1e-8, "{} vs {}", x, y);
    }

    #[test]
    fn renaming_keeps_energy(a in arb_nfa(6, 2)) {
        prop_assert!((energy(&a) - energy(&rename(&a))).abs() < 1e-10);
    }

    #[test]
    fn shift_moves_every_cyclic_component(a in arb_nfa(6, 2), c in prop::sample::select(vec![-1.0, 0.5, 3.0])) {
        let before = cyclic_energies(&free_energy(&a).unwrap());
        let after = cyclic_energies(&free_energy(&a.map_costs(|t| t.cost + c)).unwrap());
        prop_assert_eq!(before.len(), after.len());
        for ((s1, e1), (s2, e2)) in before.iter().zip(&after) {
            prop_assert_eq!(s1, s2);
            prop_assert!((e2 - e1 - c).abs() < 1e-8);
        }
    }
}

#[test]
fn cost_shift_on_strongly_connected_corpus() {
    for (name, a) in strongly_connected() {
        for c in [-1.0, 0.5, 3.0] {
            let shifted = energy(&a.map_costs(|t| t.cost + c));
            assert!((shifted - energy(&a) - c).abs() < 1e-8, "{name}, c={c}");
        }
    }
}

#[test]
fn forms_agree_on_corpus() {
    let bip = EnergyOptions {
        form: MatrixForm::Bipartite,
        ..Default::default()
    };
    for (name, a) in strongly_connected() {
        let x = energy(&a);
        let y = free_energy_with(&a, &bip).unwrap().energy;
        assert!((x - y).abs() < 1e-8, "{name}: {x} vs {y}");
    }
}

#[test]
fn complete_one_state_automaton_has_log_alphabet_energy() {
    for s in 1..=5 {
        let edges: Vec<(String, f64)> = (0..s).map(|i| (format!("x{i}"), 0.0)).collect();
        let edges: Vec<(&str, &str, &str, f64)> = edges.iter().map(|(x, c)| ("q", x.as_str(), "q", *c)).collect();
        let a = CostAutomaton::from_edges("q", &["q"], &edges);
        assert!((energy(&a) - (s as f64).ln()).abs() < 1e-12);
    }
}

// nondeterminism

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_rate_is_below_the_estimate(a in arb_nfa(5, 2)) {
        let r = lambda_exact(&a).unwrap();
        let exact = r.lambda_exact.unwrap();
        prop_assert!(exact >= 0.0 && r.lambda_plus >= 0.0);
        prop_assert!(exact <= r.lambda_plus + 1e-6, "{} > {}", exact, r.lambda_plus);
    }

    #[test]
    fn deterministic_automata_have_no_nondeterminism(a in arb_dfa(6, 2)) {
        let r = lambda_exact(&a).unwrap();
        prop_assert!(r.lambda_plus.abs() < 1e-9);
        prop_assert!(r.lambda_exact.unwrap().abs() < 1e-9);
    }

    #[test]
    fn estimate_is_invariant_under_renaming(a in arb_nfa(5, 2)) {
        let x = lambda_plus(&a).unwrap().lambda_plus;
        let y = lambda_plus(&rename(&a)).unwrap().lambda_plus;
        prop_assert!((x - y).abs() < 1e-10);
    }
}

// similarity

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn similarity_is_symmetric(a1 in arb_nfa(4, 2), a2 in arb_nfa(4, 2)) {
        let x = similarity(&a1, &a2).unwrap().delta;
        let y = similarity(&a2, &a1).unwrap().delta;
        prop_assert!((x - y).abs() < 1e-9, "{} vs {}", x, y);
    }

    #[test]
    fn similarity_is_bounded(a1 in arb_nfa(5, 2), a2 in arb_nfa(5, 2)) {
        let r = similarity(&nonnegative(&a1), &nonnegative(&a2)).unwrap();
        prop_assert!(r.delta >= 0.0);
        prop_assert!(r.delta <= r.energy_1 + r.energy_2 + 1e-6, "{:?}", r);
    }

    #[test]
    fn self_similarity_is_the_doubled_cost_energy(a in arb_dfa(5, 2)) {
        let a = nonnegative(&a);
        let r = similarity(&a, &a).unwrap();
        let doubled = energy(&a.map_costs(|t| 2.0 * t.cost));
        prop_assert!((r.delta - doubled).abs() < 1e-8);
        prop_assert!(r.delta <= 2.0 * r.energy_1 + 1e-8);
    }

    #[test]
    fn fresh_symbols_remove_all_similarity(a1 in arb_nfa(4, 2), a2 in arb_nfa(4, 2)) {
        let fresh = a2.clone();
        let fresh = CostAutomaton {
            alphabet: fresh.alphabet.iter().map(|s| Symbol::new(format!("{s}#"))).collect(),
            transitions: fresh
                .transitions
                .iter()
                .map(|t| Transition { symbol: Symbol::new(format!("{}#", t.symbol)), ..t.clone() })
                .collect(),
            ..fresh
        };
        prop_assert_eq!(similarity(&a1, &fresh).unwrap().delta, 0.0);
    }
}

#[test]
fn self_similarity_on_single_cycle_reaches_the_bound() {
    let a = CostAutomaton::from_edges("B", &["C"], &[("B", "b", "C", 2.0), ("C", "a", "B", 5.0)]);
    let r = similarity(&a, &a).unwrap();
    assert!((r.delta - 2.0 * r.energy_1).abs() < 1e-6);
}

// pair-cost languages

fn arb_pair_cost() -> impl Strategy<Value = PairCostFunction> {
    proptest::collection::vec(-1.0..2.0f64, 4).prop_map(|c| {
        PairCostFunction::new(["a", "b"])
            .with("a", "a", c[0])
            .with("a", "b", c[1])
            .with("b", "a", c[2])
            .with("b", "b", c[3])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn construction_has_one_run_per_word_with_the_word_cost(dfa in arb_dfa(4, 2), u in arb_pair_cost()) {
        let m = implement_construction(&dfa, &u).unwrap();
        let init = m.initial.clone();
        for w in words_up_to(&alphabet_of(&dfa), 8) {
            prop_assert_eq!(accepts(&m, &w), accepts(&dfa, &w), "word {:?}", w);
            let Some(init) = &init else { continue };
            let runs: Vec<_> = runs_on(&m, init, &w)
                .into_iter()
                .filter(|r| r.last().map_or(m.accepting.contains(init), |t| m.accepting.contains(&t.to)))
                .collect();
            if accepts(&dfa, &w) {
                prop_assert_eq!(runs.len(), 1, "word {:?}", w);
                let cost: f64 = runs[0].iter().map(|t| t.cost).sum();
                if w.len() >= 2 {
                    prop_assert!((cost - pair_cost_of(&u, &w)).abs() < 1e-9);
                }
            } else {
                prop_assert!(runs.is_empty());
            }
        }
    }

    #[test]
    fn pair_cost_shift_moves_the_cyclic_part(dfa in arb_dfa(4, 2), u in arb_pair_cost(), c in prop::sample::select(vec![-1.0, 0.5, 3.0])) {
        let base = implement_construction(&dfa, &u).unwrap();
        let shifted = implement_construction(&dfa, &u.shifted(c)).unwrap();
        let init = base.initial.clone();
        let lookup: HashMap<(String, String, String), f64> = base
            .transitions
            .iter()
            .map(|t| ((t.from.to_string(), t.symbol.to_string(), t.to.to_string()), t.cost))
            .collect();
        for t in &shifted.transitions {
            let old = lookup[&(t.from.to_string(), t.symbol.to_string(), t.to.to_string())];
            let want = if Some(&t.from) == init.as_ref() { old } else { old + c };
            prop_assert!((t.cost - want).abs() < 1e-12);
        }
        let before = cyclic_energies(&free_energy(&base).unwrap());
        let after = cyclic_energies(&free_energy(&shifted).unwrap());
        for ((_, e1), (_, e2)) in before.iter().zip(&after) {
            prop_assert!((e2 - e1 - c).abs() < 1e-8);
        }
    }
}
