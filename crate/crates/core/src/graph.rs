//! The 1-skeleton model of a CAT(0) cube complex: a median graph with its
//! wall (theta-class) decomposition.
//!
//! Every vertex carries a signature: one bit per wall recording which side it
//! lies on. Distances, intervals, medians and hulls are all signature algebra,
//! which keeps the combinatorial metric honest: the distance between two
//! vertices equals the number of walls separating them.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::{Error, Result};

pub type VertexId = u32;
pub type EdgeId = u32;
pub type WallId = u32;

/// Where a complex came from; windows carry their development data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    Explicit,
    Generated(String),
    Dual,
    Quotient,
    Window {
        basepoint: VertexId,
        radius: u32,
        frontier: Vec<VertexId>,
        base_digest: String,
    },
}

/// One side of a wall.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Halfspace {
    pub wall: WallId,
    pub pos: bool,
}

impl Halfspace {
    pub fn pos(wall: WallId) -> Self {
        Halfspace { wall, pos: true }
    }
    pub fn neg(wall: WallId) -> Self {
        Halfspace { wall, pos: false }
    }
    pub fn opposite(self) -> Self {
        Halfspace { wall: self.wall, pos: !self.pos }
    }
}

/// A theta class of edges together with its two complementary sides.
///
/// The negative side is the one containing the smaller endpoint of the
/// anchor (lexicographically minimal) dual edge, which fixes orientations
/// deterministically.
#[derive(Debug, Clone)]
pub struct Wall {
    pub id: WallId,
    pub dual_edges: Vec<EdgeId>,
    pub pos_side: BitSet,
}

/// A plain graph before any cube structure is trusted.
#[derive(Debug, Clone)]
pub struct RawGraph {
    pub names: Vec<String>,
    pub adj: Vec<Vec<VertexId>>,
    pub edges: Vec<(VertexId, VertexId)>,
}

impl RawGraph {
    pub fn new(names: Vec<String>, edge_list: &[(u32, u32)]) -> Result<Self> {
        let n = names.len();
        let mut seen = std::collections::HashSet::new();
        let mut edges: Vec<(u32, u32)> = Vec::with_capacity(edge_list.len());
        for &(a, b) in edge_list {
            if a as usize >= n || b as usize >= n {
                return Err(Error::InvalidGraph(format!("edge ({a},{b}) out of range")));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("loop edge at vertex {a}")));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(Error::InvalidGraph(format!("duplicate edge ({},{})", e.0, e.1)));
            }
            edges.push(e);
        }
        edges.sort_unstable();
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &edges {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        Ok(RawGraph { names, adj, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn bfs_distances(&self, from: VertexId) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.names.len()];
        let mut queue = std::collections::VecDeque::new();
        dist[from as usize] = 0;
        queue.push_back(from);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u as usize] {
                if dist[v as usize] == u32::MAX {
                    dist[v as usize] = dist[u as usize] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        if self.names.is_empty() {
            return false;
        }
        self.bfs_distances(0).iter().all(|&d| d != u32::MAX)
    }

    pub fn is_bipartite(&self) -> bool {
        let mut color = vec![2u8; self.names.len()];
        for s in 0..self.names.len() {
            if color[s] != 2 {
                continue;
            }
            color[s] = 0;
            let mut queue = std::collections::VecDeque::from([s as u32]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u as usize] {
                    if color[v as usize] == 2 {
                        color[v as usize] = 1 - color[u as usize];
                        queue.push_back(v);
                    } else if color[v as usize] == color[u as usize] {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// How thoroughly `verify_median` inspects triples.
#[derive(Debug, Clone, Copy)]
pub enum MedianPolicy {
    /// Exhaustive up to the stated vertex bound, seeded sampling above it.
    Auto { seed: u64 },
    /// Skip the check; used for graphs correct by construction. Wall
    /// separation is still validated.
    Trusted,
}

pub const EXHAUSTIVE_MEDIAN_BOUND: usize = 300;

/// Outcome of the median verification oracle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MedianReport {
    pub ok: bool,
    pub vertex_count: usize,
    pub exhaustive: bool,
    pub triples_checked: u64,
    /// A triple with its number of medians when not exactly one.
    pub violation: Option<(VertexId, VertexId, VertexId, usize)>,
    pub detail: String,
}

/// Checks that every inspected vertex triple has exactly one median.
///
/// Disconnected input is rejected before any median is computed. Up to
/// [`EXHAUSTIVE_MEDIAN_BOUND`] vertices all triples are inspected; above,
/// `10 * |V|` seeded-random triples.
pub fn verify_median(raw: &RawGraph, seed: u64) -> MedianReport {
    use rand::Rng;
    use rand::SeedableRng;

    let n = raw.vertex_count();
    if n == 0 {
        return MedianReport {
            ok: false,
            vertex_count: 0,
            exhaustive: true,
            triples_checked: 0,
            violation: None,
            detail: "empty graph".into(),
        };
    }
    if !raw.is_connected() {
        return MedianReport {
            ok: false,
            vertex_count: n,
            exhaustive: true,
            triples_checked: 0,
            violation: None,
            detail: "graph is disconnected".into(),
        };
    }
    if !raw.is_bipartite() {
        // An odd cycle always breaks the median property; report it as such.
        return MedianReport {
            ok: false,
            vertex_count: n,
            exhaustive: true,
            triples_checked: 0,
            violation: None,
            detail: "graph is not bipartite".into(),
        };
    }

    let exhaustive = n <= EXHAUSTIVE_MEDIAN_BOUND;
    let mut checked = 0u64;
    if exhaustive {
        let dist: Vec<Vec<u32>> = (0..n as u32).map(|v| raw.bfs_distances(v)).collect();
        // Cache intervals as bitsets over vertices for pair (x, y), x < y.
        let mut intervals: HashMap<(u32, u32), BitSet> = HashMap::new();
        let interval = |x: u32, y: u32, intervals: &mut HashMap<(u32, u32), BitSet>| {
            let key = (x.min(y), x.max(y));
            intervals
                .entry(key)
                .or_insert_with(|| {
                    let mut s = BitSet::new(n);
                    let dxy = dist[key.0 as usize][key.1 as usize];
                    for z in 0..n {
                        if dist[key.0 as usize][z] + dist[key.1 as usize][z] == dxy {
                            s.insert(z);
                        }
                    }
                    s
                })
                .clone()
        };
        for x in 0..n as u32 {
            for y in (x + 1)..n as u32 {
                let ixy = interval(x, y, &mut intervals);
                for z in (y + 1)..n as u32 {
                    checked += 1;
                    let mut m = ixy.clone();
                    m.intersect_with(&interval(y, z, &mut intervals));
                    m.intersect_with(&interval(x, z, &mut intervals));
                    let c = m.count();
                    if c != 1 {
                        return MedianReport {
                            ok: false,
                            vertex_count: n,
                            exhaustive,
                            triples_checked: checked,
                            violation: Some((x, y, z, c)),
                            detail: format!("triple ({x},{y},{z}) has {c} medians"),
                        };
                    }
                }
            }
        }
    } else {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let target = 10 * n as u64;
        while checked < target {
            let x = rng.gen_range(0..n as u32);
            let y = rng.gen_range(0..n as u32);
            let z = rng.gen_range(0..n as u32);
            if x == y || y == z || x == z {
                continue;
            }
            checked += 1;
            let dx = raw.bfs_distances(x);
            let dy = raw.bfs_distances(y);
            let dz = raw.bfs_distances(z);
            let mut medians = 0usize;
            for v in 0..n {
                if dx[v] + dy[v] == dx[y as usize]
                    && dy[v] + dz[v] == dy[z as usize]
                    && dx[v] + dz[v] == dx[z as usize]
                {
                    medians += 1;
                }
            }
            if medians != 1 {
                return MedianReport {
                    ok: false,
                    vertex_count: n,
                    exhaustive,
                    triples_checked: checked,
                    violation: Some((x, y, z, medians)),
                    detail: format!("triple ({x},{y},{z}) has {medians} medians"),
                };
            }
        }
    }
    MedianReport {
        ok: true,
        vertex_count: n,
        exhaustive,
        triples_checked: checked,
        violation: None,
        detail: "median property holds on all checked triples".into(),
    }
}

/// A verified cube complex 1-skeleton with its wall decomposition.
///
/// Immutable after construction; all queries are pure.
#[derive(Debug, Clone)]
pub struct CubeGraph {
    raw: RawGraph,
    walls: Vec<Wall>,
    wall_of_edge: Vec<WallId>,
    /// Per-vertex side bits over walls.
    signatures: Vec<BitSet>,
    sig_index: HashMap<BitSet, VertexId>,
    /// Crossing matrix rows.
    crossing: Vec<BitSet>,
    pub meta: Provenance,
}

const CONVEXITY_CHECK_BOUND: usize = 4096;

impl CubeGraph {
    /// Runs the median gatekeeper, then the wall decomposition with its
    /// separation (and, at moderate size, convexity) validation.
    pub fn from_raw(raw: RawGraph, policy: MedianPolicy, meta: Provenance) -> Result<CubeGraph> {
        if raw.names.is_empty() {
            return Err(Error::InvalidGraph("empty vertex set".into()));
        }
        if !raw.is_connected() {
            return Err(Error::InvalidGraph("graph is disconnected".into()));
        }
        match policy {
            MedianPolicy::Auto { seed } => {
                let report = verify_median(&raw, seed);
                if !report.ok {
                    return Err(Error::InvalidGraph(format!("median check failed: {}", report.detail)));
                }
            }
            MedianPolicy::Trusted => {}
        }
        Self::decompose_walls(raw, meta)
    }

    fn decompose_walls(raw: RawGraph, meta: Provenance) -> Result<CubeGraph> {
        let n = raw.vertex_count();
        let m = raw.edges.len();
        let edge_index: HashMap<(u32, u32), u32> = raw
            .edges
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, i as u32))
            .collect();
        let eid = |a: u32, b: u32| edge_index[&(a.min(b), a.max(b))];

        // Union theta-related edges: opposite sides of each 4-cycle.
        let mut uf: Vec<u32> = (0..m as u32).collect();
        fn find(uf: &mut Vec<u32>, x: u32) -> u32 {
            let mut r = x;
            while uf[r as usize] != r {
                r = uf[r as usize];
            }
            let mut c = x;
            while uf[c as usize] != r {
                let next = uf[c as usize];
                uf[c as usize] = r;
                c = next;
            }
            r
        }
        let mut squares: Vec<(u32, u32, u32, u32)> = Vec::new(); // (u, v, w, x): u-v, u-w, v-x, w-x
        for u in 0..n as u32 {
            let nb = &raw.adj[u as usize];
            for i in 0..nb.len() {
                for j in (i + 1)..nb.len() {
                    let (v, w) = (nb[i], nb[j]);
                    // common neighbors of v and w besides u close a square
                    let (mut a, mut b) = (0usize, 0usize);
                    let (av, aw) = (&raw.adj[v as usize], &raw.adj[w as usize]);
                    while a < av.len() && b < aw.len() {
                        match av[a].cmp(&aw[b]) {
                            std::cmp::Ordering::Less => a += 1,
                            std::cmp::Ordering::Greater => b += 1,
                            std::cmp::Ordering::Equal => {
                                let x = av[a];
                                if x != u {
                                    squares.push((u, v, w, x));
                                }
                                a += 1;
                                b += 1;
                            }
                        }
                    }
                }
            }
        }
        for &(u, v, w, x) in &squares {
            let (e1, e2) = (eid(u, v), eid(w, x));
            let (f1, f2) = (eid(u, w), eid(v, x));
            let (r1, r2) = (find(&mut uf, e1), find(&mut uf, e2));
            if r1 != r2 {
                uf[r1.max(r2) as usize] = r1.min(r2);
            }
            let (s1, s2) = (find(&mut uf, f1), find(&mut uf, f2));
            if s1 != s2 {
                uf[s1.max(s2) as usize] = s1.min(s2);
            }
        }

        // Wall ids ordered by the minimal edge id of each class.
        let mut class_of_edge = vec![0u32; m];
        let mut class_order: Vec<u32> = Vec::new();
        let mut class_map: HashMap<u32, u32> = HashMap::new();
        for e in 0..m as u32 {
            let r = find(&mut uf, e);
            let id = *class_map.entry(r).or_insert_with(|| {
                class_order.push(r);
                (class_order.len() - 1) as u32
            });
            class_of_edge[e as usize] = id;
        }
        let wall_count = class_order.len();

        let mut dual_edges: Vec<Vec<EdgeId>> = vec![Vec::new(); wall_count];
        for e in 0..m as u32 {
            dual_edges[class_of_edge[e as usize] as usize].push(e);
        }

        // Separation: removing a wall's dual edges must leave exactly two
        // sides, with the class's edges exactly the edges between them.
        let mut walls = Vec::with_capacity(wall_count);
        let mut signatures = vec![BitSet::new(wall_count); n];
        for (w, duals) in dual_edges.iter().enumerate() {
            let anchor = raw.edges[duals[0] as usize];
            let mut side = vec![2u8; n]; // 0 = neg, 1 = pos
            let removed: std::collections::HashSet<u32> = duals.iter().copied().collect();
            let mut queue = std::collections::VecDeque::new();
            side[anchor.0 as usize] = 0;
            queue.push_back(anchor.0);
            while let Some(u) = queue.pop_front() {
                for &v in &raw.adj[u as usize] {
                    if removed.contains(&eid(u, v)) {
                        continue;
                    }
                    if side[v as usize] == 2 {
                        side[v as usize] = side[u as usize];
                        queue.push_back(v);
                    }
                }
            }
            if side[anchor.1 as usize] == 0 {
                return Err(Error::InvalidGraph(format!(
                    "wall {w} fails to separate: anchor endpoints stay connected without it"
                )));
            }
            side[anchor.1 as usize] = 1;
            queue.push_back(anchor.1);
            while let Some(u) = queue.pop_front() {
                for &v in &raw.adj[u as usize] {
                    if removed.contains(&eid(u, v)) {
                        continue;
                    }
                    if side[v as usize] == 2 {
                        side[v as usize] = 1;
                        queue.push_back(v);
                    }
                }
            }
            if side.iter().any(|&s| s == 2) {
                return Err(Error::InvalidGraph(format!(
                    "wall {w} fails to separate into two components"
                )));
            }
            for &e in duals {
                let (a, b) = raw.edges[e as usize];
                if side[a as usize] == side[b as usize] {
                    return Err(Error::InvalidGraph(format!(
                        "wall {w} has a dual edge inside one side; input is not cubical"
                    )));
                }
            }
            let mut pos_side = BitSet::new(n);
            for v in 0..n {
                if side[v] == 1 {
                    pos_side.insert(v);
                    signatures[v].insert(w);
                }
            }
            walls.push(Wall { id: w as u32, dual_edges: duals.clone(), pos_side });
        }

        // The anchor check above catches misidentified classes, but on an
        // honest median graph sides are also convex; verify at desk scale.
        let mut sig_index = HashMap::with_capacity(n);
        for (v, sig) in signatures.iter().enumerate() {
            if sig_index.insert(sig.clone(), v as u32).is_some() {
                return Err(Error::InvalidGraph(
                    "two vertices share a wall signature; input is not cubical".into(),
                ));
            }
        }

        let mut crossing = vec![BitSet::new(wall_count); wall_count];
        for &(u, v, w, _) in &squares {
            let w1 = class_of_edge[eid(u, v) as usize];
            let w2 = class_of_edge[eid(u, w) as usize];
            if w1 != w2 {
                crossing[w1 as usize].insert(w2 as usize);
                crossing[w2 as usize].insert(w1 as usize);
            }
        }

        let g = CubeGraph {
            raw,
            walls,
            wall_of_edge: class_of_edge,
            signatures,
            sig_index,
            crossing,
            meta,
        };

        if n <= CONVEXITY_CHECK_BOUND {
            for w in 0..g.walls.len() {
                for pos in [false, true] {
                    let side = g.side_bits(Halfspace { wall: w as u32, pos });
                    if g.convex_hull(&side) != side {
                        return Err(Error::InvalidGraph(format!(
                            "side of wall {w} is not convex; input is not cubical"
                        )));
                    }
                }
            }
        }
        Ok(g)
    }

    // ------------------------------------------------------------------
    // basic accessors
    // ------------------------------------------------------------------

    pub fn raw(&self) -> &RawGraph {
        &self.raw
    }

    pub fn vertex_count(&self) -> usize {
        self.raw.names.len()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.raw.names[v as usize]
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.raw.edges
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.raw.adj[v as usize]
    }

    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    pub fn wall_count(&self) -> usize {
        self.walls.len()
    }

    pub fn wall_of_edge(&self, e: EdgeId) -> WallId {
        self.wall_of_edge[e as usize]
    }

    pub fn edge_id(&self, a: VertexId, b: VertexId) -> Option<EdgeId> {
        let key = (a.min(b), a.max(b));
        self.raw.edges.binary_search(&key).ok().map(|i| i as u32)
    }

    pub fn signature(&self, v: VertexId) -> &BitSet {
        &self.signatures[v as usize]
    }

    pub fn vertex_with_signature(&self, sig: &BitSet) -> Option<VertexId> {
        self.sig_index.get(sig).copied()
    }

    /// Anchor dual edge of a wall: its lexicographically least dual edge.
    pub fn wall_anchor(&self, w: WallId) -> (VertexId, VertexId) {
        self.raw.edges[self.walls[w as usize].dual_edges[0] as usize]
    }

    // ------------------------------------------------------------------
    // metric queries
    // ------------------------------------------------------------------

    /// Edge-count distance; equals the number of separating walls.
    pub fn distance(&self, x: VertexId, y: VertexId) -> usize {
        self.signatures[x as usize].hamming(&self.signatures[y as usize])
    }

    pub fn bfs_distances(&self, from: VertexId) -> Vec<u32> {
        self.raw.bfs_distances(from)
    }

    pub fn separating_walls(&self, x: VertexId, y: VertexId) -> Vec<WallId> {
        let (sx, sy) = (&self.signatures[x as usize], &self.signatures[y as usize]);
        (0..self.walls.len() as u32)
            .filter(|&w| sx.contains(w as usize) != sy.contains(w as usize))
            .collect()
    }

    pub fn in_halfspace(&self, h: Halfspace, v: VertexId) -> bool {
        self.signatures[v as usize].contains(h.wall as usize) == h.pos
    }

    pub fn side_bits(&self, h: Halfspace) -> BitSet {
        let pos = &self.walls[h.wall as usize].pos_side;
        if h.pos {
            pos.clone()
        } else {
            pos.complement()
        }
    }

    /// Endpoints of the wall's dual edges.
    pub fn carrier(&self, w: WallId) -> BitSet {
        let mut s = BitSet::new(self.vertex_count());
        for &e in &self.walls[w as usize].dual_edges {
            let (a, b) = self.raw.edges[e as usize];
            s.insert(a as usize);
            s.insert(b as usize);
        }
        s
    }

    /// Distance from every vertex to the wall (multi-source from its carrier).
    pub fn wall_distances(&self, w: WallId) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.vertex_count()];
        let mut queue = std::collections::VecDeque::new();
        for c in self.carrier(w).iter() {
            dist[c] = 0;
            queue.push_back(c as u32);
        }
        while let Some(u) = queue.pop_front() {
            for &v in &self.raw.adj[u as usize] {
                if dist[v as usize] == u32::MAX {
                    dist[v as usize] = dist[u as usize] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Vertex in `x`..`y` geodesics: signature between the endpoints'.
    pub fn in_interval(&self, z: VertexId, x: VertexId, y: VertexId) -> bool {
        self.signatures[z as usize]
            .between(&self.signatures[x as usize], &self.signatures[y as usize])
    }

    pub fn interval(&self, x: VertexId, y: VertexId) -> BitSet {
        let mut s = BitSet::new(self.vertex_count());
        for z in 0..self.vertex_count() as u32 {
            if self.in_interval(z, x, y) {
                s.insert(z as usize);
            }
        }
        s
    }

    /// The unique median of a triple.
    pub fn median(&self, x: VertexId, y: VertexId, z: VertexId) -> VertexId {
        let m = BitSet::majority(
            &self.signatures[x as usize],
            &self.signatures[y as usize],
            &self.signatures[z as usize],
        );
        *self
            .sig_index
            .get(&m)
            .expect("majority signature realized: graph passed the median gate")
    }

    /// Smallest intersection of half-spaces containing `set`.
    pub fn convex_hull(&self, set: &BitSet) -> BitSet {
        if set.is_empty() {
            return set.clone();
        }
        let mut hull = BitSet::full(self.vertex_count());
        for w in 0..self.walls.len() {
            let pos = &self.walls[w].pos_side;
            if set.is_subset(pos) {
                hull.intersect_with(pos);
            } else {
                let neg = pos.complement();
                if set.is_subset(&neg) {
                    hull.intersect_with(&neg);
                }
            }
        }
        hull
    }

    pub fn is_convex(&self, set: &BitSet) -> bool {
        !set.is_empty() && self.convex_hull(set) == *set
    }

    /// Nearest vertex of the (convex) target set; ties broken by vertex id.
    pub fn gate(&self, from: VertexId, target: &BitSet) -> Option<VertexId> {
        if target.is_empty() {
            return None;
        }
        if target.contains(from as usize) {
            return Some(from);
        }
        let dist = self.bfs_distances(from);
        let best = target.iter().map(|v| dist[v]).min().unwrap();
        target.iter().find(|&v| dist[v] == best).map(|v| v as u32)
    }

    // ------------------------------------------------------------------
    // crossing structure
    // ------------------------------------------------------------------

    pub fn crosses(&self, w1: WallId, w2: WallId) -> bool {
        self.crossing[w1 as usize].contains(w2 as usize)
    }

    pub fn crossing_row(&self, w: WallId) -> &BitSet {
        &self.crossing[w as usize]
    }

    /// Crossing decided from the four sector sets; must agree with the
    /// square-based relation on a cubical graph (checked in tests).
    pub fn crosses_by_sectors(&self, w1: WallId, w2: WallId) -> bool {
        if w1 == w2 {
            return false;
        }
        let p1 = &self.walls[w1 as usize].pos_side;
        let p2 = &self.walls[w2 as usize].pos_side;
        let n1 = p1.complement();
        let n2 = p2.complement();
        p1.intersects(p2) && p1.intersects(&n2) && n1.intersects(p2) && n1.intersects(&n2)
    }

    /// Maximum size of a pairwise crossing wall family, by branch and bound
    /// over the crossing graph.
    pub fn dimension(&self) -> usize {
        crate::bitset::max_clique(&self.crossing).len()
    }

    /// Restriction of a vertex signature to a wall subset (in subset order).
    pub fn signature_on(&self, v: VertexId, walls: &[WallId]) -> BitSet {
        let sig = &self.signatures[v as usize];
        let mut s = BitSet::new(walls.len());
        for (i, &w) in walls.iter().enumerate() {
            if sig.contains(w as usize) {
                s.insert(i);
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    fn cycle(n: usize) -> RawGraph {
        let names = (0..n).map(|i| i.to_string()).collect();
        let edges: Vec<(u32, u32)> =
            (0..n).map(|i| (i as u32, ((i + 1) % n) as u32)).collect();
        RawGraph::new(names, &edges).unwrap()
    }

    #[test]
    fn square_is_median() {
        assert!(verify_median(&cycle(4), 0).ok);
    }

    #[test]
    fn five_cycle_has_medianless_triple() {
        let r = verify_median(&cycle(5), 0);
        assert!(!r.ok);
    }

    #[test]
    fn k4_fails() {
        let names = (0..4).map(|i| i.to_string()).collect();
        let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let raw = RawGraph::new(names, &edges).unwrap();
        assert!(!verify_median(&raw, 0).ok);
    }

    #[test]
    fn cube_walls() {
        let g = generate::cube(3).unwrap();
        assert_eq!(g.vertex_count(), 8);
        assert_eq!(g.wall_count(), 3);
        for w in g.walls() {
            assert_eq!(w.dual_edges.len(), 4);
        }
        assert_eq!(g.dimension(), 3);
        // antipodal corners: distance 3, all walls separate
        assert_eq!(g.distance(0, 7), 3);
        assert_eq!(g.separating_walls(0, 7).len(), 3);
    }

    #[test]
    fn path_walls_and_tree_dimension() {
        let g = generate::path(3).unwrap();
        assert_eq!(g.wall_count(), 3);
        for w in g.walls() {
            assert_eq!(w.dual_edges.len(), 1);
        }
        assert_eq!(g.dimension(), 1);
        let t = generate::tree(3, 3).unwrap();
        assert_eq!(t.dimension(), 1);
    }

    #[test]
    fn grid_theta_classes() {
        // 3x3 squares, 4x4 vertices: six walls, three per direction, each
        // with four dual edges (counted by brute-force square pairing).
        let g = generate::grid(3, 3).unwrap();
        assert_eq!(g.vertex_count(), 16);
        assert_eq!(g.wall_count(), 6);
        for w in g.walls() {
            assert_eq!(w.dual_edges.len(), 4);
        }
        assert_eq!(g.dimension(), 2);
    }

    #[test]
    fn grid_distance_is_wall_count() {
        let g = generate::grid(3, 2).unwrap();
        // corners (0,0) and (3,2)
        let a = 0;
        let b = g.vertex_count() as u32 - 1;
        assert_eq!(g.distance(a, b), 5);
        assert_eq!(g.separating_walls(a, b).len(), 5);
        let bfs = g.bfs_distances(a);
        assert_eq!(bfs[b as usize], 5);
    }

    #[test]
    fn medians_and_intervals() {
        let g = generate::cube(2).unwrap();
        // single point triple
        assert_eq!(g.median(1, 1, 1), 1);
        // three corners of a square: median is adjacent to all pairs; check
        // against brute-force interval intersection
        let (x, y, z) = (0u32, 1u32, 2u32);
        let m = g.median(x, y, z);
        let mut brute = None;
        for v in 0..g.vertex_count() as u32 {
            if g.in_interval(v, x, y) && g.in_interval(v, y, z) && g.in_interval(v, x, z) {
                assert!(brute.is_none(), "median must be unique");
                brute = Some(v);
            }
        }
        assert_eq!(Some(m), brute);

        // tree: median of three leaves is the branch vertex
        let t = generate::tree(3, 1).unwrap(); // star with 3 leaves
        assert_eq!(t.median(1, 2, 3), 0);
    }

    #[test]
    fn hulls() {
        let g = generate::cube(3).unwrap();
        let mut single = BitSet::new(8);
        single.insert(5);
        assert_eq!(g.convex_hull(&single), single);

        let sq = generate::cube(2).unwrap();
        let mut anti = BitSet::new(4);
        anti.insert(0);
        anti.insert(3);
        assert_eq!(sq.distance(0, 3), 2);
        assert_eq!(sq.convex_hull(&anti).count(), 4);

        // hulls agree with the independent oracle: iterated interval closure
        let interval_closure = |g: &CubeGraph, start: &BitSet| {
            let mut s = start.clone();
            loop {
                let mut grew = false;
                let members: Vec<usize> = s.iter().collect();
                for &x in &members {
                    for &y in &members {
                        for z in 0..g.vertex_count() {
                            if !s.contains(z) && g.in_interval(z as u32, x as u32, y as u32) {
                                s.insert(z);
                                grew = true;
                            }
                        }
                    }
                }
                if !grew {
                    return s;
                }
            }
        };
        // three corners of the 3-cube at pairwise distance two: the closure
        // fills the whole cube (half-space intersections are subcubes)
        let mut three = BitSet::new(8);
        three.insert(1);
        three.insert(2);
        three.insert(4);
        assert_eq!(g.convex_hull(&three), interval_closure(&g, &three));
        assert_eq!(g.convex_hull(&three).count(), 8);
        // three corners of one face hull to that face
        let mut face = BitSet::new(8);
        face.insert(0);
        face.insert(1);
        face.insert(3);
        assert_eq!(g.convex_hull(&face), interval_closure(&g, &face));
        assert_eq!(g.convex_hull(&face).count(), 4);
    }

    #[test]
    fn sector_crossing_matches_square_crossing() {
        for g in [generate::grid(3, 3).unwrap(), generate::cube(3).unwrap()] {
            for w1 in 0..g.wall_count() as u32 {
                for w2 in 0..g.wall_count() as u32 {
                    if w1 != w2 {
                        assert_eq!(g.crosses(w1, w2), g.crosses_by_sectors(w1, w2));
                    }
                }
            }
        }
    }

    #[test]
    fn both_wall_sides_are_convex() {
        for g in [
            generate::grid(3, 2).unwrap(),
            generate::tree(3, 3).unwrap(),
            generate::cube(3).unwrap(),
        ] {
            for w in 0..g.wall_count() as u32 {
                for pos in [true, false] {
                    assert!(g.is_convex(&g.side_bits(Halfspace { wall: w, pos })));
                }
            }
        }
    }
}
