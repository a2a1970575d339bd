//! Reachable acceptance values: `R(q)` is the set of acceptance values of
//! all states reachable from `q`, including `q` itself.

use std::collections::BTreeSet;

use crate::mdfa::{AcceptanceValue, Mdfa};
use crate::regex::StateId;

/// Strongly connected components of the transition graph.
#[derive(Debug, Clone)]
pub struct Components {
    /// Members of each component. Components are numbered in reverse
    /// topological order: every edge goes to a component with id ≤ its own.
    pub members: Vec<Vec<StateId>>,
    pub component_of: Vec<usize>,
    /// Distinct successor components, excluding the component itself.
    pub children: Vec<Vec<usize>>,
}

impl Components {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Tarjan's lowlink algorithm with an explicit call stack.
pub fn scc_graph(n: usize, k: usize, delta: &[StateId]) -> Components {
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut component_of = vec![UNSEEN; n];
    let mut members: Vec<Vec<StateId>> = Vec::new();
    let mut next_index = 0;
    // (state, next letter to explore)
    let mut calls: Vec<(StateId, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        calls.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&(v, a)) = calls.last() {
            if a < k {
                let w = delta[v * k + a];
                calls.last_mut().unwrap().1 += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    calls.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            calls.pop();
            if let Some(&(parent, _)) = calls.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let id = members.len();
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().unwrap();
                    on_stack[w] = false;
                    component_of[w] = id;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                members.push(comp);
            }
        }
    }

    let mut children = vec![Vec::new(); members.len()];
    for (c, comp) in members.iter().enumerate() {
        let mut seen = BTreeSet::new();
        for &q in comp {
            for a in 0..k {
                let d = component_of[delta[q * k + a]];
                if d != c {
                    seen.insert(d);
                }
            }
        }
        children[c] = seen.into_iter().collect();
    }
    Components {
        members,
        component_of,
        children,
    }
}

pub fn scc(m: &Mdfa) -> Components {
    scc_graph(m.num_states(), m.alphabet().len(), m.transitions())
}

/// `R(q)` for every state of an MDFA.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachSets {
    sets: Vec<BTreeSet<AcceptanceValue>>,
}

impl ReachSets {
    pub fn get(&self, q: StateId) -> &BTreeSet<AcceptanceValue> {
        &self.sets[q]
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &BTreeSet<AcceptanceValue>> {
        self.sets.iter()
    }

    /// Reachable live values of `q`, leaving out the dead marker.
    pub fn live(&self, q: StateId) -> impl Iterator<Item = AcceptanceValue> + '_ {
        self.sets[q].iter().copied().filter(|v| !v.dead)
    }
}

/// Unions member values per component, then accumulates children in
/// reverse topological order; every member shares its component's set.
pub fn compute_reachable_acceptance_values(m: &Mdfa) -> ReachSets {
    let comps = scc(m);
    let mut per_comp: Vec<BTreeSet<AcceptanceValue>> = Vec::with_capacity(comps.len());
    // ids are already reverse topological: children come first
    for c in 0..comps.len() {
        let mut set: BTreeSet<AcceptanceValue> =
            comps.members[c].iter().map(|&q| m.accept(q)).collect();
        for &d in &comps.children[c] {
            set.extend(per_comp[d].iter().copied());
        }
        per_comp.push(set);
    }
    let sets = (0..m.num_states())
        .map(|q| per_comp[comps.component_of[q]].clone())
        .collect();
    ReachSets { sets }
}
