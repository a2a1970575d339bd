//! Hopcroft partition refinement shared by DFA and MDFA minimization.

use std::collections::HashMap;
use std::collections::VecDeque;

/// Refinable partition over `0..n`: each block occupies a contiguous slice of
/// `elems`; marked members are swapped to the front of their block.
struct Partition {
    elems: Vec<usize>,
    loc: Vec<usize>,
    block_of: Vec<usize>,
    first: Vec<usize>,
    end: Vec<usize>,
    mid: Vec<usize>,
    touched: Vec<usize>,
}

impl Partition {
    fn new(labels: &[usize]) -> Self {
        let n = labels.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&s| labels[s]);
        let mut p = Partition {
            elems: order,
            loc: vec![0; n],
            block_of: vec![0; n],
            first: Vec::new(),
            end: Vec::new(),
            mid: Vec::new(),
            touched: Vec::new(),
        };
        let mut i = 0;
        while i < n {
            let b = p.first.len();
            let mut j = i;
            while j < n && labels[p.elems[j]] == labels[p.elems[i]] {
                p.block_of[p.elems[j]] = b;
                j += 1;
            }
            p.first.push(i);
            p.mid.push(i);
            p.end.push(j);
            i = j;
        }
        for (i, &e) in p.elems.iter().enumerate() {
            p.loc[e] = i;
        }
        p
    }

    fn block_count(&self) -> usize {
        self.first.len()
    }

    fn size(&self, b: usize) -> usize {
        self.end[b] - self.first[b]
    }

    fn members(&self, b: usize) -> &[usize] {
        &self.elems[self.first[b]..self.end[b]]
    }

    fn mark(&mut self, e: usize) {
        let b = self.block_of[e];
        let i = self.loc[e];
        let j = self.mid[b];
        if i < j {
            return;
        }
        self.elems.swap(i, j);
        self.loc[self.elems[i]] = i;
        self.loc[self.elems[j]] = j;
        if j == self.first[b] {
            self.touched.push(b);
        }
        self.mid[b] += 1;
    }

    /// Splits every touched block into its marked and unmarked parts.
    /// Returns `(old, new)` pairs where `new` holds the marked members.
    fn split(&mut self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for b in std::mem::take(&mut self.touched) {
            if self.mid[b] == self.end[b] {
                self.mid[b] = self.first[b];
                continue;
            }
            let nb = self.first.len();
            self.first.push(self.first[b]);
            self.end.push(self.mid[b]);
            self.mid.push(self.first[b]);
            self.first[b] = self.mid[b];
            for i in self.first[nb]..self.end[nb] {
                self.block_of[self.elems[i]] = nb;
            }
            out.push((b, nb));
        }
        out
    }
}

/// Coarsest partition of the states of a total automaton that refines
/// `labels` and is stable under the transition function.
///
/// `delta[q * k + a]` is the successor of `q` on symbol `a`. Returns a class
/// id per state.
pub fn refine(n: usize, k: usize, delta: &[usize], labels: &[usize]) -> Vec<usize> {
    debug_assert_eq!(delta.len(), n * k);
    debug_assert_eq!(labels.len(), n);
    if n == 0 {
        return Vec::new();
    }
    // inverse transitions in CSR form, indexed by (symbol, target)
    let mut count = vec![0usize; k * n + 1];
    for q in 0..n {
        for a in 0..k {
            count[a * n + delta[q * k + a] + 1] += 1;
        }
    }
    for i in 1..count.len() {
        count[i] += count[i - 1];
    }
    let start = count.clone();
    let mut fill = count;
    let mut preds = vec![0usize; n * k];
    for q in 0..n {
        for a in 0..k {
            let slot = a * n + delta[q * k + a];
            preds[fill[slot]] = q;
            fill[slot] += 1;
        }
    }

    let mut p = Partition::new(labels);
    let mut queued = vec![true; p.block_count()];
    let mut work: VecDeque<usize> = (0..p.block_count()).collect();
    while let Some(splitter) = work.pop_front() {
        queued[splitter] = false;
        let members: Vec<usize> = p.members(splitter).to_vec();
        for a in 0..k {
            for &t in &members {
                let slot = a * n + t;
                for &q in &preds[start[slot]..start[slot + 1]] {
                    p.mark(q);
                }
            }
            for (old, new) in p.split() {
                queued.push(false);
                if queued[old] || p.size(new) <= p.size(old) {
                    queued[new] = true;
                    work.push_back(new);
                } else {
                    queued[old] = true;
                    work.push_back(old);
                }
            }
        }
    }
    (0..n).map(|q| p.block_of[q]).collect()
}

/// States reachable from `source`, in BFS order with symbols scanned in order.
pub fn bfs_order(n: usize, k: usize, delta: &[usize], source: usize) -> Vec<usize> {
    let mut seen = vec![false; n];
    let mut order = vec![source];
    seen[source] = true;
    let mut i = 0;
    while i < order.len() {
        let q = order[i];
        i += 1;
        for a in 0..k {
            let t = delta[q * k + a];
            if !seen[t] {
                seen[t] = true;
                order.push(t);
            }
        }
    }
    order
}

/// Result of minimizing a labelled total automaton.
pub struct Quotient {
    /// Successor table of the minimal automaton, `k` entries per state.
    pub delta: Vec<usize>,
    /// For each new state, one original representative.
    pub representative: Vec<usize>,
    /// For each original state, its new id (`None` if unreachable).
    pub map: Vec<Option<usize>>,
}

/// Removes unreachable states, merges equivalent ones and renumbers the
/// result in BFS order from `source` (which becomes state 0).
pub fn minimize<L: Ord + Clone + std::hash::Hash>(
    n: usize,
    k: usize,
    delta: &[usize],
    source: usize,
    labels: &[L],
) -> Quotient {
    let reach = bfs_order(n, k, delta, source);
    let mut local = vec![usize::MAX; n];
    for (i, &q) in reach.iter().enumerate() {
        local[q] = i;
    }
    let m = reach.len();
    let mut sub_delta = Vec::with_capacity(m * k);
    for &q in &reach {
        for a in 0..k {
            sub_delta.push(local[delta[q * k + a]]);
        }
    }
    let mut label_ids: HashMap<&L, usize> = HashMap::new();
    let sub_labels: Vec<usize> = reach
        .iter()
        .map(|&q| {
            let next = label_ids.len();
            *label_ids.entry(&labels[q]).or_insert(next)
        })
        .collect();
    let class = refine(m, k, &sub_delta, &sub_labels);

    // renumber classes by BFS over the quotient; `reach` is already BFS order
    // and the first member seen of each class is its earliest-discovered state
    let mut class_id = vec![usize::MAX; m];
    let mut rep_local = Vec::new();
    let mut order = Vec::new();
    let source_class = class[0];
    class_id[source_class] = 0;
    rep_local.push(0usize);
    order.push(source_class);
    let mut i = 0;
    while i < order.len() {
        let r = rep_local[i];
        i += 1;
        for a in 0..k {
            let c = class[sub_delta[r * k + a]];
            if class_id[c] == usize::MAX {
                class_id[c] = rep_local.len();
                rep_local.push(sub_delta[r * k + a]);
                order.push(c);
            }
        }
    }
    let mut new_delta = Vec::with_capacity(rep_local.len() * k);
    for &r in &rep_local {
        for a in 0..k {
            new_delta.push(class_id[class[sub_delta[r * k + a]]]);
        }
    }
    let mut map = vec![None; n];
    for (i, &q) in reach.iter().enumerate() {
        map[q] = Some(class_id[class[i]]);
    }
    Quotient {
        delta: new_delta,
        representative: rep_local.iter().map(|&r| reach[r]).collect(),
        map,
    }
}
