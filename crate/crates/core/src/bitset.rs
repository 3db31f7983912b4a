//! Fixed-universe bit sets used for vertex sets, wall sets and per-vertex
//! wall signatures. All hot-path set algebra in the crate goes through this
//! type, so it stays small and branch-free.

/// A set over a fixed universe `0..len`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitSet {
    len: usize,
    blocks: Vec<u64>,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        BitSet { len, blocks: vec![0; len.div_ceil(64)] }
    }

    pub fn full(len: usize) -> Self {
        let mut s = Self::new(len);
        for b in &mut s.blocks {
            *b = !0;
        }
        s.trim();
        s
    }

    pub fn universe_len(&self) -> usize {
        self.len
    }

    fn trim(&mut self) {
        let spare = self.blocks.len() * 64 - self.len;
        if spare > 0 {
            if let Some(last) = self.blocks.last_mut() {
                *last &= !0 >> spare;
            }
        }
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.blocks[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.blocks[i / 64] &= !(1 << (i % 64));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.blocks[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn union_with(&mut self, other: &BitSet) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a &= b;
        }
    }

    pub fn subtract(&mut self, other: &BitSet) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a &= !b;
        }
    }

    pub fn complement(&self) -> BitSet {
        let mut out = self.clone();
        for b in &mut out.blocks {
            *b = !*b;
        }
        out.trim();
        out
    }

    pub fn intersects(&self, other: &BitSet) -> bool {
        self.blocks.iter().zip(&other.blocks).any(|(a, b)| a & b != 0)
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.blocks.iter().zip(&other.blocks).all(|(a, b)| a & !b == 0)
    }

    pub fn is_proper_subset(&self, other: &BitSet) -> bool {
        self.is_subset(other) && self != other
    }

    /// Number of positions where the two sets disagree.
    #[inline]
    pub fn hamming(&self, other: &BitSet) -> usize {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// True when no position differs from `a` on one side and from `b` on the
    /// other; with wall signatures this is exactly interval membership.
    #[inline]
    pub fn between(&self, a: &BitSet, b: &BitSet) -> bool {
        self.blocks
            .iter()
            .zip(&a.blocks)
            .zip(&b.blocks)
            .all(|((s, x), y)| (s ^ x) & (s ^ y) == 0)
    }

    /// Coordinatewise majority of three sets.
    pub fn majority(a: &BitSet, b: &BitSet, c: &BitSet) -> BitSet {
        let mut out = BitSet::new(a.len);
        for i in 0..out.blocks.len() {
            out.blocks[i] =
                (a.blocks[i] & b.blocks[i]) | (b.blocks[i] & c.blocks[i]) | (a.blocks[i] & c.blocks[i]);
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(bi, &block)| {
            let mut b = block;
            std::iter::from_fn(move || {
                if b == 0 {
                    None
                } else {
                    let t = b.trailing_zeros() as usize;
                    b &= b - 1;
                    Some(bi * 64 + t)
                }
            })
        })
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }
}

/// Maximum clique in an undirected graph given as adjacency rows, by branch
/// and bound. Returns a witness clique (deterministic for fixed input).
pub fn max_clique(adj: &[BitSet]) -> Vec<usize> {
    let n = adj.len();
    if n == 0 {
        return Vec::new();
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(adj[v].count()));
    let mut best: Vec<usize> = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    fn expand(
        adj: &[BitSet],
        cands: &[usize],
        chosen: &mut Vec<usize>,
        best: &mut Vec<usize>,
    ) {
        if chosen.len() > best.len() {
            *best = chosen.clone();
        }
        for (i, &v) in cands.iter().enumerate() {
            if chosen.len() + (cands.len() - i) <= best.len() {
                return;
            }
            let next: Vec<usize> = cands[i + 1..]
                .iter()
                .copied()
                .filter(|&u| adj[v].contains(u))
                .collect();
            chosen.push(v);
            expand(adj, &next, chosen, best);
            chosen.pop();
        }
    }
    expand(adj, &order, &mut chosen, &mut best);
    best.sort_unstable();
    best
}

impl std::fmt::Debug for BitSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for BitSet {
    /// Panics on an empty iterator; callers build from `new` in that case.
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let items: Vec<usize> = iter.into_iter().collect();
        let len = items.iter().max().map_or(0, |m| m + 1);
        let mut s = BitSet::new(len);
        for i in items {
            s.insert(i);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_algebra() {
        let mut a = BitSet::new(130);
        a.insert(0);
        a.insert(64);
        a.insert(129);
        assert_eq!(a.count(), 3);
        assert!(a.contains(64));
        let c = a.complement();
        assert_eq!(c.count(), 127);
        assert!(!c.intersects(&a));
        let mut b = BitSet::new(130);
        b.insert(64);
        assert!(b.is_proper_subset(&a));
        assert_eq!(a.hamming(&b), 2);
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![0, 64, 129]);
    }

    #[test]
    fn majority_and_between() {
        let mut a = BitSet::new(8);
        let mut b = BitSet::new(8);
        let mut c = BitSet::new(8);
        a.insert(0);
        a.insert(1);
        b.insert(1);
        b.insert(2);
        c.insert(0);
        c.insert(2);
        let m = BitSet::majority(&a, &b, &c);
        assert_eq!(m.iter().collect::<Vec<_>>(), vec![0, 1, 2]);
        let mut mid = BitSet::new(8);
        mid.insert(1);
        assert!(mid.between(&a, &b));
        assert!(!c.between(&a, &b));
    }
}
