//! Reduced ordered binary decision diagrams over the atom variables.
//!
//! Variable `j` is the atom with ordinal `j`; atoms of one string variable
//! form a contiguous block, so block projection quantifies everything
//! outside one ordinal range.

use std::collections::{BTreeSet, HashMap};
use std::ops::Range;

use crate::formula::Formula;

/// Handle to a node of a [`DdStore`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DdRef(u32);

impl DdRef {
    pub const FALSE: DdRef = DdRef(0);
    pub const TRUE: DdRef = DdRef(1);

    pub fn is_false(self) -> bool {
        self == DdRef::FALSE
    }

    pub fn is_true(self) -> bool {
        self == DdRef::TRUE
    }

    pub fn is_terminal(self) -> bool {
        self.0 < 2
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Node {
    var: u32,
    low: DdRef,
    high: DdRef,
}

const TERMINAL_VAR: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Op {
    And,
    Or,
    Xor,
}

/// Set of acceptance vectors for one block; bit `j` of a vector is the
/// value of the block's `j`-th atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockVectorSet {
    pub var_index: usize,
    pub width: usize,
    pub vectors: BTreeSet<u64>,
}

impl BlockVectorSet {
    pub fn contains(&self, bits: u64) -> bool {
        self.vectors.contains(&bits)
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }
}

/// Hash-consed node table with an operation cache. Never collects garbage,
/// so every handle stays valid for the life of the store.
#[derive(Debug, Clone)]
pub struct DdStore {
    nodes: Vec<Node>,
    unique: HashMap<Node, DdRef>,
    cache: HashMap<(Op, DdRef, DdRef), DdRef>,
    not_cache: HashMap<DdRef, DdRef>,
    num_vars: usize,
}

impl DdStore {
    pub fn new(num_vars: usize) -> Self {
        let terminal = |v| Node {
            var: TERMINAL_VAR,
            low: DdRef(v),
            high: DdRef(v),
        };
        Self {
            nodes: vec![terminal(0), terminal(1)],
            unique: HashMap::new(),
            cache: HashMap::new(),
            not_cache: HashMap::new(),
            num_vars,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Total nodes allocated, including both terminals.
    pub fn allocated(&self) -> usize {
        self.nodes.len()
    }

    fn node(&self, r: DdRef) -> Node {
        self.nodes[r.index()]
    }

    fn top(&self, r: DdRef) -> u32 {
        self.node(r).var
    }

    fn mk(&mut self, var: u32, low: DdRef, high: DdRef) -> DdRef {
        if low == high {
            return low;
        }
        let n = Node { var, low, high };
        if let Some(&r) = self.unique.get(&n) {
            return r;
        }
        let r = DdRef(u32::try_from(self.nodes.len()).expect("node table overflow"));
        self.nodes.push(n);
        self.unique.insert(n, r);
        r
    }

    pub fn constant(&self, value: bool) -> DdRef {
        if value {
            DdRef::TRUE
        } else {
            DdRef::FALSE
        }
    }

    pub fn var(&mut self, j: usize) -> DdRef {
        assert!(j < self.num_vars, "variable {j} out of range");
        self.mk(j as u32, DdRef::FALSE, DdRef::TRUE)
    }

    pub fn literal(&mut self, j: usize, value: bool) -> DdRef {
        assert!(j < self.num_vars, "variable {j} out of range");
        if value {
            self.mk(j as u32, DdRef::FALSE, DdRef::TRUE)
        } else {
            self.mk(j as u32, DdRef::TRUE, DdRef::FALSE)
        }
    }

    pub fn not(&mut self, a: DdRef) -> DdRef {
        if a.is_terminal() {
            return DdRef(1 - a.0);
        }
        if let Some(&r) = self.not_cache.get(&a) {
            return r;
        }
        let n = self.node(a);
        let low = self.not(n.low);
        let high = self.not(n.high);
        let r = self.mk(n.var, low, high);
        self.not_cache.insert(a, r);
        r
    }

    fn apply(&mut self, op: Op, a: DdRef, b: DdRef) -> DdRef {
        match op {
            Op::And => {
                if a.is_false() || b.is_false() {
                    return DdRef::FALSE;
                }
                if a.is_true() || a == b {
                    return b;
                }
                if b.is_true() {
                    return a;
                }
            }
            Op::Or => {
                if a.is_true() || b.is_true() {
                    return DdRef::TRUE;
                }
                if a.is_false() || a == b {
                    return b;
                }
                if b.is_false() {
                    return a;
                }
            }
            Op::Xor => {
                if a == b {
                    return DdRef::FALSE;
                }
                if a.is_false() {
                    return b;
                }
                if b.is_false() {
                    return a;
                }
                if a.is_true() {
                    return self.not(b);
                }
                if b.is_true() {
                    return self.not(a);
                }
            }
        }
        // all three operations are commutative
        let key = if a <= b { (op, a, b) } else { (op, b, a) };
        if let Some(&r) = self.cache.get(&key) {
            return r;
        }
        let (na, nb) = (self.node(a), self.node(b));
        let var = na.var.min(nb.var);
        let (a0, a1) = if na.var == var { (na.low, na.high) } else { (a, a) };
        let (b0, b1) = if nb.var == var { (nb.low, nb.high) } else { (b, b) };
        let low = self.apply(op, a0, b0);
        let high = self.apply(op, a1, b1);
        let r = self.mk(var, low, high);
        self.cache.insert(key, r);
        r
    }

    pub fn and(&mut self, a: DdRef, b: DdRef) -> DdRef {
        self.apply(Op::And, a, b)
    }

    pub fn or(&mut self, a: DdRef, b: DdRef) -> DdRef {
        self.apply(Op::Or, a, b)
    }

    pub fn xor(&mut self, a: DdRef, b: DdRef) -> DdRef {
        self.apply(Op::Xor, a, b)
    }

    pub fn implies(&mut self, a: DdRef, b: DdRef) -> DdRef {
        let na = self.not(a);
        self.or(na, b)
    }

    pub fn iff(&mut self, a: DdRef, b: DdRef) -> DdRef {
        let x = self.xor(a, b);
        self.not(x)
    }

    pub fn is_unsat(&self, a: DdRef) -> bool {
        a.is_false()
    }

    /// Existentially quantifies every variable outside `keep`.
    pub fn exists_outside(&mut self, a: DdRef, keep: Range<usize>) -> DdRef {
        let mut memo = HashMap::new();
        self.exists_rec(a, &keep, &mut memo)
    }

    fn exists_rec(
        &mut self,
        a: DdRef,
        keep: &Range<usize>,
        memo: &mut HashMap<DdRef, DdRef>,
    ) -> DdRef {
        if a.is_terminal() {
            return a;
        }
        if let Some(&r) = memo.get(&a) {
            return r;
        }
        let n = self.node(a);
        let low = self.exists_rec(n.low, keep, memo);
        let r = if keep.contains(&(n.var as usize)) {
            let high = self.exists_rec(n.high, keep, memo);
            self.mk(n.var, low, high)
        } else if low.is_true() {
            DdRef::TRUE
        } else {
            let high = self.exists_rec(n.high, keep, memo);
            self.or(low, high)
        };
        memo.insert(a, r);
        r
    }

    /// Diagram of a formula over atom ordinals.
    pub fn encode_formula(&mut self, f: &Formula<usize>) -> DdRef {
        match f {
            Formula::Atom(j) => self.var(*j),
            Formula::Not(x) => {
                let x = self.encode_formula(x);
                self.not(x)
            }
            Formula::Or(x, y) => {
                let (x, y) = (self.encode_formula(x), self.encode_formula(y));
                self.or(x, y)
            }
            Formula::And(x, y) => {
                let (x, y) = (self.encode_formula(x), self.encode_formula(y));
                self.and(x, y)
            }
            Formula::Implies(x, y) => {
                let (x, y) = (self.encode_formula(x), self.encode_formula(y));
                self.implies(x, y)
            }
            Formula::Iff(x, y) => {
                let (x, y) = (self.encode_formula(x), self.encode_formula(y));
                self.iff(x, y)
            }
        }
    }

    /// `y ∈ B` for the atoms in `block`: the disjunction over the vectors
    /// of `B` of the conjunction of the matching literals.
    pub fn encode_block_membership(
        &mut self,
        block: Range<usize>,
        vectors: impl IntoIterator<Item = u64>,
    ) -> DdRef {
        let mut acc = DdRef::FALSE;
        for bits in vectors {
            // build bottom-up so each cube is made without apply calls
            let mut cube = DdRef::TRUE;
            for j in block.clone().rev() {
                let bit = bits >> (j - block.start) & 1 == 1;
                cube = if bit {
                    self.mk(j as u32, DdRef::FALSE, cube)
                } else {
                    self.mk(j as u32, cube, DdRef::FALSE)
                };
            }
            acc = self.or(acc, cube);
        }
        acc
    }

    /// `{b | ∃ solution of g with block = b}`.
    pub fn project_block(&mut self, g: DdRef, var_index: usize, block: Range<usize>) -> BlockVectorSet {
        let h = self.exists_outside(g, block.clone());
        let mut vectors = BTreeSet::new();
        self.minterms(h, block.start, &block, 0, &mut vectors);
        BlockVectorSet {
            var_index,
            width: block.len(),
            vectors,
        }
    }

    fn minterms(&self, a: DdRef, pos: usize, block: &Range<usize>, bits: u64, out: &mut BTreeSet<u64>) {
        if a.is_false() {
            return;
        }
        if pos == block.end {
            debug_assert!(a.is_true());
            out.insert(bits);
            return;
        }
        let bit = 1u64 << (pos - block.start);
        let n = self.node(a);
        if n.var as usize == pos {
            self.minterms(n.low, pos + 1, block, bits, out);
            self.minterms(n.high, pos + 1, block, bits | bit, out);
        } else {
            self.minterms(a, pos + 1, block, bits, out);
            self.minterms(a, pos + 1, block, bits | bit, out);
        }
    }

    /// Evaluates under a full assignment indexed by variable.
    pub fn eval(&self, mut a: DdRef, assignment: &[bool]) -> bool {
        while !a.is_terminal() {
            let n = self.node(a);
            a = if assignment[n.var as usize] { n.high } else { n.low };
        }
        a.is_true()
    }

    /// Decision nodes reachable from `a`.
    pub fn size(&self, a: DdRef) -> usize {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![a];
        while let Some(r) = stack.pop() {
            if r.is_terminal() || !seen.insert(r) {
                continue;
            }
            let n = self.node(r);
            stack.push(n.low);
            stack.push(n.high);
        }
        seen.len()
    }

    /// All satisfying assignments over the first `num_vars` variables, as
    /// bit masks. Exponential; for tests and small diagnostics.
    pub fn solutions(&self, a: DdRef) -> Vec<u64> {
        assert!(self.num_vars <= 20);
        (0..1u64 << self.num_vars)
            .filter(|&m| {
                let bits: Vec<bool> = (0..self.num_vars).map(|j| m >> j & 1 == 1).collect();
                self.eval(a, &bits)
            })
            .collect()
    }

    /// Checks the reduced and ordered invariants below `a`.
    pub fn is_well_formed(&self, a: DdRef) -> bool {
        let mut stack = vec![a];
        let mut seen = std::collections::HashSet::new();
        while let Some(r) = stack.pop() {
            if r.is_terminal() || !seen.insert(r) {
                continue;
            }
            let n = self.node(r);
            if n.low == n.high {
                return false;
            }
            for c in [n.low, n.high] {
                if !c.is_terminal() && self.top(c) <= n.var {
                    return false;
                }
                stack.push(c);
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    use super::*;

    /// Diagram of an arbitrary truth table by Shannon expansion.
    fn from_table(store: &mut DdStore, table: &[bool]) -> DdRef {
        let m = store.num_vars();
        let mut acc = DdRef::FALSE;
        for (mask, &v) in table.iter().enumerate() {
            if v {
                let cube = store.encode_block_membership(0..m, [mask as u64]);
                acc = store.or(acc, cube);
            }
        }
        acc
    }

    fn random_table(m: usize, rng: &mut impl Rng) -> Vec<bool> {
        let density = rng.gen_range(0.0..1.0);
        (0..1 << m).map(|_| rng.gen_bool(density)).collect()
    }

    #[test]
    fn small_diagrams() {
        let mut s = DdStore::new(3);
        // ordinal 0 is y¹₁, 1 is y²₁
        let f = Formula::or(Formula::Atom(1), Formula::Atom(0));
        let g = s.encode_formula(&f);
        assert_eq!(s.size(g), 2);
        assert_eq!(s.solutions(g), [0b001, 0b010, 0b011, 0b101, 0b110, 0b111]);

        let y = s.var(2);
        let ny = s.not(y);
        assert!(s.or(y, ny).is_true());
        assert!(s.and(y, ny).is_false());
        assert_eq!(s.and(y, DdRef::TRUE), y);
        assert!(s.is_unsat(DdRef::FALSE));
        assert!(!s.is_unsat(y));
    }

    #[test]
    fn worked_example() {
        // y¹₁ = 0, y²₁ = 1, y²₂ = 2
        let mut s = DdStore::new(3);
        let g1 = s.encode_formula(&Formula::or(Formula::Atom(1), Formula::Atom(0)));
        let g2 = s.var(2);
        let g = s.and(g1, g2);
        let sols = s.solutions(g);
        assert_eq!(sols, [0b101, 0b110, 0b111]);

        let r1 = s.encode_block_membership(0..1, [0b1, 0b0]);
        let r2 = s.encode_block_membership(1..3, [0b10, 0b01]);
        let g = s.and(g, r1);
        let g = s.and(g, r2);
        assert!(!s.is_unsat(g));
        assert_eq!(s.solutions(g), [0b101]);
        assert_eq!(s.project_block(g, 0, 0..1).vectors, BTreeSet::from([0b1]));
        assert_eq!(s.project_block(g, 1, 1..3).vectors, BTreeSet::from([0b10]));
    }

    #[test]
    fn block_membership_examples() {
        let mut s = DdStore::new(3);
        let m = s.encode_block_membership(1..3, [0b10, 0b01]);
        let (a, b) = (s.var(1), s.var(2));
        assert_eq!(m, s.xor(a, b));
        assert!(s.encode_block_membership(1..3, []).is_false());
        assert!(s.encode_block_membership(1..3, 0..4).is_true());
        assert_eq!(s.project_block(DdRef::TRUE, 1, 1..3).vectors, (0..4).collect());
        assert!(s.project_block(DdRef::FALSE, 1, 1..3).is_empty());
        // empty block: one empty vector iff satisfiable
        assert_eq!(s.project_block(m, 0, 0..0).vectors, BTreeSet::from([0]));
    }

    #[test]
    fn canonical_handles() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..60 {
            let m = rng.gen_range(1..=10);
            let mut s = DdStore::new(m);
            let t = random_table(m, &mut rng);
            let a = from_table(&mut s, &t);
            assert!(s.is_well_formed(a));
            // the same function built differently: ¬¬a and via xor
            let na = s.not(a);
            assert_eq!(s.not(na), a);
            let x = s.xor(a, DdRef::TRUE);
            assert_eq!(x, na);
            let mut u = t.clone();
            let flip = rng.gen_range(0..u.len());
            u[flip] = !u[flip];
            let b = from_table(&mut s, &u);
            assert_ne!(a, b);
            let back = from_table(&mut s, &t);
            assert_eq!(back, a);
        }
    }

    proptest! {
        #[test]
        fn projection_matches_truth_table(m in 1usize..=12, seed in any::<u64>(), lo in 0usize..12, len in 0usize..=5) {
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let mut s = DdStore::new(m);
            let t = random_table(m, &mut rng);
            let a = from_table(&mut s, &t);
            let lo = lo % m;
            let hi = (lo + len).min(m);
            let got = s.project_block(a, 0, lo..hi).vectors;
            let want: BTreeSet<u64> = t
                .iter()
                .enumerate()
                .filter(|(_, &v)| v)
                .map(|(mask, _)| (mask as u64 >> lo) & ((1u64 << (hi - lo)) - 1))
                .collect();
            prop_assert_eq!(got, want);
        }

        #[test]
        fn membership_round_trip(k in 1usize..=5, offset in 0usize..3, seed in any::<u64>()) {
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let vectors: BTreeSet<u64> = (0..1u64 << k).filter(|_| rng.gen_bool(0.5)).collect();
            let mut s = DdStore::new(offset + k + 2);
            let block = offset..offset + k;
            let m = s.encode_block_membership(block.clone(), vectors.iter().copied());
            let g = s.and(DdRef::TRUE, m);
            prop_assert_eq!(s.project_block(g, 0, block).vectors, vectors);
        }

        #[test]
        fn formula_encoding_matches_eval(seed in any::<u64>()) {
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            fn gen(rng: &mut rand::rngs::StdRng, m: usize, depth: u32) -> Formula<usize> {
                if depth == 0 || rng.gen_bool(0.3) {
                    return Formula::Atom(rng.gen_range(0..m));
                }
                let a = gen(rng, m, depth - 1);
                match rng.gen_range(0..5) {
                    0 => Formula::not(a),
                    1 => Formula::or(a, gen(rng, m, depth - 1)),
                    2 => Formula::and(a, gen(rng, m, depth - 1)),
                    3 => Formula::implies(a, gen(rng, m, depth - 1)),
                    _ => Formula::iff(a, gen(rng, m, depth - 1)),
                }
            }
            let m = rng.gen_range(1..=6);
            let f = gen(&mut rng, m, 5);
            let mut s = DdStore::new(m);
            let d = s.encode_formula(&f);
            prop_assert!(s.is_well_formed(d));
            for mask in 0..1u32 << m {
                let bits: Vec<bool> = (0..m).map(|j| mask >> j & 1 == 1).collect();
                prop_assert_eq!(s.eval(d, &bits), f.eval(&|&j| bits[j]));
            }
        }
    }
}
