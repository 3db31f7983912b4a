//! Half-space systems in the abstract: finite posets with an order-reversing
//! fixed-point-free involution, their ultrafilters, and the dual complex
//! construction. The two duality round trips are exposed as checked
//! operations: the canonical correspondences are verified element by element
//! rather than assumed.

use std::collections::HashMap;

use crate::bitset::{max_clique, BitSet};
use crate::graph::{CubeGraph, Halfspace, MedianPolicy, Provenance, RawGraph};
use crate::{Error, Result};

/// Elements are stored so that the involution is `e ^ 1`: pair `p` owns
/// elements `2p` and `2p + 1`. `less[a]` is the strict up-set of `a`,
/// transitively closed and mirrored through the involution at build time.
#[derive(Debug, Clone)]
pub struct Pocset {
    names: Vec<String>,
    less: Vec<BitSet>,
}

/// Validation outcome for a pocset.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct PocsetReport {
    pub ok: bool,
    pub pair_count: usize,
    pub width: usize,
    /// Largest number of elements in a closed order interval `[a, b]`.
    pub max_interval: usize,
    pub violation: Option<String>,
}

impl Pocset {
    /// Builds from pair names and generating relations between element
    /// names. The relation set is closed transitively and under the
    /// involution mirror `a < b  =>  b* < a*`; axioms are then checked.
    pub fn new(pairs: &[(String, String)], relations: &[(String, String)]) -> Result<Pocset> {
        let mut names = Vec::with_capacity(pairs.len() * 2);
        let mut index: HashMap<&str, usize> = HashMap::new();
        for (a, b) in pairs {
            if a == b {
                return Err(Error::InvalidPocset(format!("pair ({a}, {b}) repeats a name")));
            }
            for name in [a, b] {
                if index.insert(name, names.len()).is_some() {
                    return Err(Error::InvalidPocset(format!("element {name} appears in two pairs")));
                }
                names.push(name.clone());
            }
        }
        let n = names.len();
        let mut less = vec![BitSet::new(n); n];
        for (a, b) in relations {
            let &ia = index
                .get(a.as_str())
                .ok_or_else(|| Error::InvalidPocset(format!("relation names unknown element {a}")))?;
            let &ib = index
                .get(b.as_str())
                .ok_or_else(|| Error::InvalidPocset(format!("relation names unknown element {b}")))?;
            less[ia].insert(ib);
            less[ib ^ 1].insert(ia ^ 1);
        }
        // transitive closure
        for k in 0..n {
            for a in 0..n {
                if less[a].contains(k) {
                    let row = less[k].clone();
                    less[a].union_with(&row);
                }
            }
        }
        let p = Pocset { names, less };
        let report = p.verify();
        if !report.ok {
            return Err(Error::InvalidPocset(report.violation.unwrap_or_default()));
        }
        Ok(p)
    }

    /// Wraps an already-closed order without re-deriving it; used by
    /// [`halfspace_pocset`]. Axioms are still checked.
    fn from_closed(names: Vec<String>, less: Vec<BitSet>) -> Result<Pocset> {
        let p = Pocset { names, less };
        let report = p.verify();
        if !report.ok {
            return Err(Error::InvalidPocset(report.violation.unwrap_or_default()));
        }
        Ok(p)
    }

    pub fn pair_count(&self) -> usize {
        self.names.len() / 2
    }

    pub fn element_count(&self) -> usize {
        self.names.len()
    }

    pub fn element_name(&self, e: usize) -> &str {
        &self.names[e]
    }

    pub fn involute(&self, e: usize) -> usize {
        e ^ 1
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        self.less[a].contains(b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.lt(a, b) || self.lt(b, a)
    }

    /// Two pairs are transverse when no element of one is comparable to any
    /// element of the other.
    pub fn pairs_transverse(&self, p: usize, q: usize) -> bool {
        if p == q {
            return false;
        }
        for a in [2 * p, 2 * p + 1] {
            for b in [2 * q, 2 * q + 1] {
                if self.comparable(a, b) {
                    return false;
                }
            }
        }
        true
    }

    /// Checks the axioms and reports width and maximal interval size.
    pub fn verify(&self) -> PocsetReport {
        let n = self.element_count();
        let fail = |msg: String| PocsetReport {
            ok: false,
            pair_count: self.pair_count(),
            width: 0,
            max_interval: 0,
            violation: Some(msg),
        };
        // down[b] = { a : a < b }
        let mut down = vec![BitSet::new(n); n];
        for a in 0..n {
            if self.lt(a, a) {
                return fail(format!("order is not strict at {}", self.names[a]));
            }
            for b in self.less[a].iter() {
                down[b].insert(a);
            }
        }
        for a in 0..n {
            for b in self.less[a].iter() {
                if self.lt(b, a) {
                    return fail(format!(
                        "order is not antisymmetric on ({}, {})",
                        self.names[a], self.names[b]
                    ));
                }
                if !self.lt(b ^ 1, a ^ 1) {
                    return fail(format!(
                        "involution is not order-reversing on ({}, {})",
                        self.names[a], self.names[b]
                    ));
                }
                if !self.less[b].is_subset(&self.less[a]) {
                    return fail(format!(
                        "order is not transitively closed above ({}, {})",
                        self.names[a], self.names[b]
                    ));
                }
            }
        }
        for a in 0..n {
            if self.comparable(a, a ^ 1) {
                return fail(format!("element comparable to involute: {}", self.names[a]));
            }
        }
        let mut max_interval = 0usize;
        for a in 0..n {
            for b in self.less[a].iter() {
                let mut inside = self.less[a].clone();
                inside.intersect_with(&down[b]);
                max_interval = max_interval.max(inside.count() + 2);
            }
        }
        PocsetReport {
            ok: true,
            pair_count: self.pair_count(),
            width: self.width(),
            max_interval,
            violation: None,
        }
    }

    /// Size of a maximum transverse family of pairs; equals the dimension of
    /// the dual complex.
    pub fn width(&self) -> usize {
        let p = self.pair_count();
        let mut adj = vec![BitSet::new(p); p];
        for i in 0..p {
            for j in 0..p {
                if i != j && self.pairs_transverse(i, j) {
                    adj[i].insert(j);
                }
            }
        }
        max_clique(&adj).len()
    }

    /// Enumerates ultrafilters by backtracking over pairs in index order with
    /// upward-closure propagation. Output order is deterministic. Errors if
    /// more than `cap` ultrafilters exist.
    pub fn ultrafilters(&self, cap: usize) -> Result<Vec<BitSet>> {
        let n = self.element_count();
        let pairs = self.pair_count();
        let mut out = Vec::new();
        // state: 0 undecided, 1 in, 2 out
        let mut state = vec![0u8; n];
        let mut trail: Vec<usize> = Vec::new();

        fn choose(
            p: &Pocset,
            e: usize,
            state: &mut [u8],
            trail: &mut Vec<usize>,
        ) -> bool {
            // put e in, e* out, propagate up-closure
            let mut stack = vec![e];
            while let Some(x) = stack.pop() {
                match state[x] {
                    1 => continue,
                    2 => return false,
                    _ => {}
                }
                state[x] = 1;
                state[x ^ 1] = 2;
                trail.push(x);
                for y in p.less[x].iter() {
                    if state[y] == 2 {
                        return false;
                    }
                    if state[y] == 0 {
                        stack.push(y);
                    }
                }
            }
            true
        }

        fn undo(state: &mut [u8], trail: &mut [usize], mark: usize) {
            for &x in &trail[mark..] {
                state[x] = 0;
                state[x ^ 1] = 0;
            }
        }

        fn rec(
            p: &Pocset,
            pair: usize,
            pairs: usize,
            state: &mut Vec<u8>,
            trail: &mut Vec<usize>,
            out: &mut Vec<BitSet>,
            cap: usize,
        ) -> Result<()> {
            if pair == pairs {
                let mut uf = BitSet::new(p.element_count());
                for (e, &s) in state.iter().enumerate() {
                    if s == 1 {
                        uf.insert(e);
                    }
                }
                out.push(uf);
                if out.len() > cap {
                    return Err(Error::BudgetExceeded(format!(
                        "dual complex would exceed {cap} vertices (bounded by 2^{pairs})"
                    )));
                }
                return Ok(());
            }
            if state[2 * pair] != 0 {
                return rec(p, pair + 1, pairs, state, trail, out, cap);
            }
            for e in [2 * pair, 2 * pair + 1] {
                let mark = trail.len();
                if choose(p, e, state, trail) {
                    rec(p, pair + 1, pairs, state, trail, out, cap)?;
                }
                undo(state, trail, mark);
                trail.truncate(mark);
            }
            Ok(())
        }

        rec(self, 0, pairs, &mut state, &mut trail, &mut out, cap)?;
        Ok(out)
    }

    /// Brute-force ultrafilter count: filters all side selections by upward
    /// closure. Exponential; only sensible for small pocsets, where it serves
    /// as the independent oracle for the backtracking enumerator.
    pub fn ultrafilters_brute(&self) -> Vec<BitSet> {
        let pairs = self.pair_count();
        let n = self.element_count();
        assert!(pairs <= 20, "brute-force enumeration is a small-instance oracle");
        let mut out = Vec::new();
        'sel: for mask in 0..(1u64 << pairs) {
            let mut uf = BitSet::new(n);
            for p in 0..pairs {
                uf.insert(2 * p + ((mask >> p) & 1) as usize);
            }
            for a in uf.clone().iter() {
                for b in self.less[a].iter() {
                    if !uf.contains(b) {
                        continue 'sel;
                    }
                }
            }
            out.push(uf);
        }
        out
    }
}

pub const DEFAULT_DUAL_CAP: usize = 1 << 16;

/// The dual complex: vertices are ultrafilters, edges join ultrafilters that
/// differ on a single pair. The empty pocset yields a single vertex.
pub fn dual_complex(p: &Pocset, cap: usize) -> Result<CubeGraph> {
    let ufs = p.ultrafilters(cap)?;
    let index: HashMap<&BitSet, u32> =
        ufs.iter().enumerate().map(|(i, u)| (u, i as u32)).collect();
    let names = (0..ufs.len()).map(|i| format!("u{i}")).collect();
    let mut edges = Vec::new();
    for (i, uf) in ufs.iter().enumerate() {
        for pair in 0..p.pair_count() {
            let mut flipped = uf.clone();
            let e = if uf.contains(2 * pair) { 2 * pair } else { 2 * pair + 1 };
            flipped.remove(e);
            flipped.insert(e ^ 1);
            if let Some(&j) = index.get(&flipped) {
                if (i as u32) < j {
                    edges.push((i as u32, j));
                }
            }
        }
    }
    let raw = RawGraph::new(names, &edges)?;
    CubeGraph::from_raw(raw, MedianPolicy::Trusted, Provenance::Dual)
}

/// The half-space system of a complex: elements are wall sides, the order is
/// proper vertex-set inclusion, the involution is complementation. Pair `w`
/// holds the positive side at `2w` and the negative side at `2w + 1`.
pub fn halfspace_pocset(x: &CubeGraph) -> Result<Pocset> {
    let w = x.wall_count();
    let mut names = Vec::with_capacity(2 * w);
    let mut sides = Vec::with_capacity(2 * w);
    for wall in 0..w as u32 {
        names.push(format!("h{wall}"));
        names.push(format!("h{wall}*"));
        sides.push(x.side_bits(Halfspace::pos(wall)));
        sides.push(x.side_bits(Halfspace::neg(wall)));
    }
    let mut less = vec![BitSet::new(2 * w); 2 * w];
    for a in 0..2 * w {
        for b in 0..2 * w {
            if a != b && sides[a].is_proper_subset(&sides[b]) {
                less[a].insert(b);
            }
        }
    }
    Pocset::from_closed(names, less)
}

pub fn pocset_width(p: &Pocset) -> usize {
    p.width()
}

/// Round trip A: the canonical map sending an element to the set of
/// ultrafilters containing it must be an isomorphism onto the half-space
/// system of the dual complex.
pub fn roundtrip_pocset(p: &Pocset, cap: usize) -> Result<()> {
    let x = dual_complex(p, cap)?;
    let q = halfspace_pocset(&x)?;
    if q.pair_count() != p.pair_count() {
        return Err(Error::InvalidPocset(format!(
            "round trip changed pair count: {} -> {}",
            p.pair_count(),
            q.pair_count()
        )));
    }
    let ufs = p.ultrafilters(cap)?;
    let n = p.element_count();
    // element -> vertex set of the dual complex
    let mut member_sets = Vec::with_capacity(n);
    for e in 0..n {
        let mut s = BitSet::new(ufs.len());
        for (i, uf) in ufs.iter().enumerate() {
            if uf.contains(e) {
                s.insert(i);
            }
        }
        member_sets.push(s);
    }
    // match each to a unique half-space of x
    let mut side_of: HashMap<BitSet, usize> = HashMap::new();
    for w in 0..x.wall_count() as u32 {
        side_of.insert(x.side_bits(Halfspace::pos(w)), 2 * w as usize);
        side_of.insert(x.side_bits(Halfspace::neg(w)), 2 * w as usize + 1);
    }
    let mut image = vec![usize::MAX; n];
    for e in 0..n {
        image[e] = *side_of.get(&member_sets[e]).ok_or_else(|| {
            Error::InvalidPocset(format!(
                "element {} does not map to a half-space of the dual",
                p.element_name(e)
            ))
        })?;
    }
    let mut seen = vec![false; n];
    for &i in &image {
        if seen[i] {
            return Err(Error::InvalidPocset("canonical map is not injective".into()));
        }
        seen[i] = true;
    }
    for e in 0..n {
        if image[e] ^ 1 != image[e ^ 1] {
            return Err(Error::InvalidPocset("canonical map breaks the involution".into()));
        }
        for f in 0..n {
            if p.lt(e, f) != q.lt(image[e], image[f]) {
                return Err(Error::InvalidPocset(format!(
                    "canonical map is not an order isomorphism at ({}, {})",
                    p.element_name(e),
                    p.element_name(f)
                )));
            }
        }
    }
    Ok(())
}

/// Round trip B: the canonical map sending a vertex to the ultrafilter of
/// half-spaces containing it must be a graph isomorphism onto the dual of
/// the half-space system.
pub fn roundtrip_complex(x: &CubeGraph, cap: usize) -> Result<()> {
    let p = halfspace_pocset(x)?;
    let y = dual_complex(&p, cap)?;
    if y.vertex_count() != x.vertex_count() {
        return Err(Error::InvalidGraph(format!(
            "round trip changed vertex count: {} -> {}",
            x.vertex_count(),
            y.vertex_count()
        )));
    }
    let ufs = p.ultrafilters(cap)?;
    let index: HashMap<&BitSet, u32> =
        ufs.iter().enumerate().map(|(i, u)| (u, i as u32)).collect();
    let mut image = Vec::with_capacity(x.vertex_count());
    for v in 0..x.vertex_count() as u32 {
        // ultrafilter of v: element 2w when v is on the positive side
        let mut uf = BitSet::new(p.element_count());
        for w in 0..x.wall_count() as u32 {
            let e = if x.in_halfspace(Halfspace::pos(w), v) { 2 * w } else { 2 * w + 1 };
            uf.insert(e as usize);
        }
        let &i = index.get(&uf).ok_or_else(|| {
            Error::InvalidGraph(format!("vertex {v} has no ultrafilter image in the dual"))
        })?;
        image.push(i);
    }
    let mut seen = vec![false; y.vertex_count()];
    for &i in &image {
        if seen[i as usize] {
            return Err(Error::InvalidGraph("canonical vertex map is not injective".into()));
        }
        seen[i as usize] = true;
    }
    let mut mapped: Vec<(u32, u32)> = x
        .edges()
        .iter()
        .map(|&(a, b)| {
            let (ia, ib) = (image[a as usize], image[b as usize]);
            (ia.min(ib), ia.max(ib))
        })
        .collect();
    mapped.sort_unstable();
    if mapped.as_slice() != y.edges() {
        return Err(Error::InvalidGraph("canonical vertex map is not a graph isomorphism".into()));
    }
    Ok(())
}

/// Ordered-set-with-involution isomorphism, by backtracking over pair
/// matchings with up/down profile pruning. Desk-scale only.
pub fn isomorphic(p: &Pocset, q: &Pocset) -> bool {
    if p.pair_count() != q.pair_count() {
        return false;
    }
    let np = p.pair_count();
    let profile = |poc: &Pocset, e: usize| -> (usize, usize) {
        let up = poc.less[e].count();
        let down = (0..poc.element_count()).filter(|&c| poc.lt(c, e)).count();
        (up, down)
    };
    let pair_profile = |poc: &Pocset, pr: usize| -> [(usize, usize); 2] {
        let mut pf = [profile(poc, 2 * pr), profile(poc, 2 * pr + 1)];
        pf.sort_unstable();
        pf
    };
    let pprof: Vec<_> = (0..np).map(|i| pair_profile(p, i)).collect();
    let qprof: Vec<_> = (0..np).map(|i| pair_profile(q, i)).collect();

    // map[e] = image element in q
    fn rec(
        p: &Pocset,
        q: &Pocset,
        pair: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        pprof: &[[(usize, usize); 2]],
        qprof: &[[(usize, usize); 2]],
    ) -> bool {
        let np = p.pair_count();
        if pair == np {
            return true;
        }
        for target in 0..np {
            if used[target] || pprof[pair] != qprof[target] {
                continue;
            }
            'orient: for flip in [0usize, 1] {
                // tentative images for elements 2*pair, 2*pair+1
                let imgs = [2 * target + flip, 2 * target + (flip ^ 1)];
                for (off, &img) in imgs.iter().enumerate() {
                    let e = 2 * pair + off;
                    for earlier in 0..2 * pair {
                        if p.lt(e, earlier) != q.lt(img, map[earlier])
                            || p.lt(earlier, e) != q.lt(map[earlier], img)
                        {
                            continue 'orient;
                        }
                    }
                    if p.lt(e, e ^ 1) != q.lt(img, img ^ 1) {
                        continue 'orient;
                    }
                }
                map.push(imgs[0]);
                map.push(imgs[1]);
                used[target] = true;
                if rec(p, q, pair + 1, map, used, pprof, qprof) {
                    return true;
                }
                used[target] = false;
                map.pop();
                map.pop();
            }
        }
        false
    }
    rec(p, q, 0, &mut Vec::new(), &mut vec![false; np], &pprof, &qprof)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    fn named(names: &[&str]) -> Vec<(String, String)> {
        names
            .chunks(2)
            .map(|c| (c[0].to_string(), c[1].to_string()))
            .collect()
    }

    #[test]
    fn empty_pocset_is_valid_with_width_zero() {
        let p = Pocset::new(&[], &[]).unwrap();
        let r = p.verify();
        assert!(r.ok);
        assert_eq!(r.width, 0);
        let x = dual_complex(&p, DEFAULT_DUAL_CAP).unwrap();
        assert_eq!(x.vertex_count(), 1);
    }

    #[test]
    fn three_transverse_pairs_dualize_to_the_three_cube() {
        let p = Pocset::new(&named(&["a", "a*", "b", "b*", "c", "c*"]), &[]).unwrap();
        let r = p.verify();
        assert!(r.ok);
        assert_eq!(r.width, 3);
        // oracle: every one of the 2^3 selections is upward closed
        assert_eq!(p.ultrafilters_brute().len(), 8);
        let x = dual_complex(&p, DEFAULT_DUAL_CAP).unwrap();
        assert_eq!(x.vertex_count(), 8);
        assert_eq!(x.edges().len(), 12);
    }

    #[test]
    fn element_comparable_to_involute_is_rejected() {
        let err = Pocset::new(
            &named(&["a", "a*"]),
            &[("a".into(), "a*".into())],
        )
        .unwrap_err();
        assert!(err.to_string().contains("comparable to involute"));
    }

    #[test]
    fn chain_of_three_dualizes_to_a_path() {
        // h1 < h2 < h3 and the mirrored relations
        let p = Pocset::new(
            &named(&["h1", "h1*", "h2", "h2*", "h3", "h3*"]),
            &[("h1".into(), "h2".into()), ("h2".into(), "h3".into())],
        )
        .unwrap();
        assert_eq!(p.verify().width, 1);
        // oracle: brute-force enumeration of the chain's ultrafilters
        let brute = p.ultrafilters_brute();
        assert_eq!(brute.len(), 4);
        let x = dual_complex(&p, DEFAULT_DUAL_CAP).unwrap();
        assert_eq!(x.vertex_count(), 4);
        assert_eq!(x.edges().len(), 3);
        assert_eq!(x.dimension(), 1);
    }

    #[test]
    fn grid_pocset_is_two_transverse_chains() {
        let g = generate::grid(2, 2).unwrap();
        let p = halfspace_pocset(&g).unwrap();
        assert_eq!(p.pair_count(), 4);
        // exhaustive crossing search: width 2
        assert_eq!(p.width(), 2);
        assert_eq!(g.dimension(), 2);
        // two chains of length 2: count comparable pairs of distinct walls
        let mut nested_pairs = 0;
        for a in 0..p.element_count() {
            for b in 0..p.element_count() {
                if p.lt(a, b) && a / 2 != b / 2 {
                    nested_pairs += 1;
                }
            }
        }
        // each chain h1 < h2 contributes 2 ordered relations plus mirrors
        assert_eq!(nested_pairs, 4);
    }

    #[test]
    fn enumerator_matches_brute_force() {
        let g = generate::tree(3, 2).unwrap();
        let p = halfspace_pocset(&g).unwrap();
        let fast = p.ultrafilters(DEFAULT_DUAL_CAP).unwrap();
        let brute = p.ultrafilters_brute();
        let fast_set: std::collections::HashSet<_> = fast.iter().cloned().collect();
        let brute_set: std::collections::HashSet<_> = brute.into_iter().collect();
        assert_eq!(fast_set, brute_set);
    }

    #[test]
    fn roundtrips_on_fixtures() {
        for g in [
            generate::cube(3).unwrap(),
            generate::grid(3, 2).unwrap(),
            generate::tree(3, 3).unwrap(),
            generate::path(4).unwrap(),
        ] {
            roundtrip_complex(&g, DEFAULT_DUAL_CAP).unwrap();
            let p = halfspace_pocset(&g).unwrap();
            roundtrip_pocset(&p, DEFAULT_DUAL_CAP).unwrap();
            assert_eq!(p.width(), g.dimension());
        }
    }

    #[test]
    fn isomorphism_distinguishes() {
        let chain = Pocset::new(
            &named(&["a", "a*", "b", "b*"]),
            &[("a".into(), "b".into())],
        )
        .unwrap();
        let free = Pocset::new(&named(&["x", "x*", "y", "y*"]), &[]).unwrap();
        assert!(!isomorphic(&chain, &free));
        let chain2 = Pocset::new(
            &named(&["u", "u*", "v", "v*"]),
            &[("v".into(), "u".into())],
        )
        .unwrap();
        assert!(isomorphic(&chain, &chain2));
        assert!(isomorphic(&free, &free));
    }
}
