//! Restriction and orbit quotients, the essential / half-essential / trivial
//! wall classification (absolute and relative to a group action), essential
//! cores, and the pruning process that removes half-essential walls.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::actions::{self, GroupAction, SearchParams};
use crate::bitset::BitSet;
use crate::cert::SkewerCert;
use crate::graph::{CubeGraph, Halfspace, MedianPolicy, Provenance, RawGraph, VertexId, WallId};
use crate::{Error, Result};

/// A restriction quotient: the complex dual to a subfamily of walls, with
/// its cubical projection from the source.
#[derive(Debug, Clone)]
pub struct RestrictionQuotient {
    pub kept_walls: Vec<WallId>,
    pub quotient: CubeGraph,
    /// source vertex -> quotient vertex
    pub projection: Vec<VertexId>,
    /// kept wall (by position in `kept_walls`) -> wall id in the quotient
    pub wall_map: Vec<WallId>,
}

/// Builds the quotient by identifying vertices with equal side signatures on
/// the kept walls. Quotient vertex ids follow first occurrence in source
/// order, so the construction is deterministic.
pub fn restriction_quotient(g: &CubeGraph, kept: &[WallId]) -> Result<RestrictionQuotient> {
    let mut kept = kept.to_vec();
    kept.sort_unstable();
    kept.dedup();
    for &w in &kept {
        if w as usize >= g.wall_count() {
            return Err(Error::InvalidGraph(format!("kept wall {w} out of range")));
        }
    }
    let n = g.vertex_count();
    let mut index: HashMap<BitSet, u32> = HashMap::new();
    let mut projection = Vec::with_capacity(n);
    for v in 0..n as u32 {
        let sig = g.signature_on(v, &kept);
        let next = index.len() as u32;
        let q = *index.entry(sig).or_insert(next);
        projection.push(q);
    }
    let qn = index.len();
    let names = (0..qn).map(|i| format!("q{i}")).collect();
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for &(a, b) in g.edges() {
        let (qa, qb) = (projection[a as usize], projection[b as usize]);
        if qa != qb {
            edges.push((qa.min(qb), qa.max(qb)));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let raw = RawGraph::new(names, &edges)?;
    let quotient = CubeGraph::from_raw(raw, MedianPolicy::Trusted, Provenance::Quotient)?;
    if quotient.wall_count() != kept.len() {
        return Err(Error::InvalidGraph(format!(
            "quotient walls ({}) do not biject with kept walls ({})",
            quotient.wall_count(),
            kept.len()
        )));
    }
    // locate each kept wall in the quotient through a crossing edge
    let mut wall_map = vec![u32::MAX; kept.len()];
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        let w = g.wall_of_edge(e as u32);
        if let Ok(i) = kept.binary_search(&w) {
            if wall_map[i] == u32::MAX {
                let (qa, qb) = (projection[a as usize], projection[b as usize]);
                if qa != qb {
                    let qe = quotient.edge_id(qa, qb).expect("projected edge exists");
                    wall_map[i] = quotient.wall_of_edge(qe);
                }
            }
        }
    }
    if wall_map.iter().any(|&w| w == u32::MAX) {
        return Err(Error::InvalidGraph("a kept wall has no edge in the quotient".into()));
    }
    Ok(RestrictionQuotient { kept_walls: kept, quotient, projection, wall_map })
}

/// Quotient onto the walls crossing `w`; the result carries the cube
/// structure of the wall itself.
pub fn hyperplane_complex(g: &CubeGraph, w: WallId) -> Result<RestrictionQuotient> {
    let crossers: Vec<WallId> = g.crossing_row(w).iter().map(|x| x as u32).collect();
    restriction_quotient(g, &crossers)
}

/// Orbit of a wall under the generated group, within the complex. `closed`
/// is false when some image is undefined because the window is too small.
pub fn wall_orbit(g: &CubeGraph, group: &GroupAction, w: WallId) -> (Vec<WallId>, bool) {
    let mut seen = BitSet::new(g.wall_count());
    seen.insert(w as usize);
    let mut queue = vec![w];
    let mut closed = true;
    while let Some(x) = queue.pop() {
        for auto in &group.gens {
            for map in [&auto.fwd, &auto.inv] {
                match actions::wall_image(g, map, x) {
                    Some((img, _)) => {
                        if !seen.contains(img as usize) {
                            seen.insert(img as usize);
                            queue.push(img);
                        }
                    }
                    None => closed = false,
                }
            }
        }
    }
    (seen.iter().map(|x| x as u32).collect(), closed)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrbitQuotientReport {
    pub wall: WallId,
    pub orbit: Vec<WallId>,
    pub orbit_closed: bool,
    pub quotient_vertices: usize,
    pub quotient_diameter: usize,
    /// Present when some element skewers the wall: the quotient grows
    /// unboundedly with the window.
    pub skewer: Option<SkewerCert>,
}

pub struct OrbitQuotient {
    pub restriction: RestrictionQuotient,
    pub report: OrbitQuotientReport,
}

/// Restriction quotient onto the orbit of one wall. When the orbit does not
/// close inside the window the report says so rather than guessing.
pub fn orbit_quotient(
    g: &CubeGraph,
    group: &GroupAction,
    w: WallId,
    params: &SearchParams,
) -> Result<OrbitQuotient> {
    let (orbit, closed) = wall_orbit(g, group, w);
    let restriction = restriction_quotient(g, &orbit)?;
    let q = &restriction.quotient;
    let diameter = (0..q.vertex_count() as u32)
        .map(|v| q.bfs_distances(v).into_iter().max().unwrap_or(0))
        .max()
        .unwrap_or(0) as usize;
    let skewer = if group.gens.is_empty() {
        None
    } else {
        actions::find_skewer_in_ball(g, group, w, params)
    };
    let report = OrbitQuotientReport {
        wall: w,
        orbit: orbit.clone(),
        orbit_closed: closed,
        quotient_vertices: q.vertex_count(),
        quotient_diameter: diameter,
        skewer,
    };
    Ok(OrbitQuotient { restriction, report })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WallKind {
    Essential,
    HalfEssential,
    Trivial,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WallClassEntry {
    pub wall: WallId,
    pub kind: WallKind,
    pub pos_deep: bool,
    pub neg_deep: bool,
    /// Skewer evidence promotes a wall to essential independently of depth.
    pub skewer: Option<SkewerCert>,
    /// True when backed by a skewer certificate rather than the
    /// window-relative depth heuristic.
    pub exact: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Classification {
    pub depth: u32,
    pub basepoint: VertexId,
    /// Number of vertices whose positions witness depth: the basepoint
    /// orbit, or every vertex when the group is trivial.
    pub orbit_size: usize,
    pub entries: Vec<WallClassEntry>,
}

impl Classification {
    pub fn of_kind(&self, kind: WallKind) -> Vec<WallId> {
        self.entries.iter().filter(|e| e.kind == kind).map(|e| e.wall).collect()
    }
}

fn basepoint_of(g: &CubeGraph) -> VertexId {
    match &g.meta {
        Provenance::Window { basepoint, .. } => *basepoint,
        _ => 0,
    }
}

/// Orbit of the basepoint under the generated group within the complex;
/// every vertex when there are no generators (absolute classification).
pub fn depth_witnesses(g: &CubeGraph, group: &GroupAction) -> BitSet {
    if group.gens.is_empty() {
        return BitSet::full(g.vertex_count());
    }
    let mut orbit = BitSet::new(g.vertex_count());
    let base = basepoint_of(g);
    orbit.insert(base as usize);
    let mut queue = vec![base];
    while let Some(v) = queue.pop() {
        for auto in &group.gens {
            for map in [&auto.fwd, &auto.inv] {
                if let Some(u) = map[v as usize] {
                    if !orbit.contains(u as usize) {
                        orbit.insert(u as usize);
                        queue.push(u);
                    }
                }
            }
        }
    }
    orbit
}

/// Classifies every wall. A side is deep when it contains a depth witness at
/// wall-distance at least `depth`; a skewer certificate found within the
/// search budget marks the wall essential exactly.
pub fn classify_walls(
    g: &CubeGraph,
    group: &GroupAction,
    depth: u32,
    params: &SearchParams,
) -> Classification {
    let witnesses = depth_witnesses(g, group);
    let mut entries = Vec::with_capacity(g.wall_count());
    for w in 0..g.wall_count() as u32 {
        let dist = g.wall_distances(w);
        let pos = &g.walls()[w as usize].pos_side;
        let mut pos_deep = false;
        let mut neg_deep = false;
        for v in witnesses.iter() {
            if dist[v] >= depth {
                if pos.contains(v) {
                    pos_deep = true;
                } else {
                    neg_deep = true;
                }
                if pos_deep && neg_deep {
                    break;
                }
            }
        }
        let skewer = if group.gens.is_empty() {
            None
        } else {
            actions::find_skewer_in_ball(g, group, w, params)
        };
        let kind = if skewer.is_some() || (pos_deep && neg_deep) {
            WallKind::Essential
        } else if pos_deep || neg_deep {
            WallKind::HalfEssential
        } else {
            WallKind::Trivial
        };
        entries.push(WallClassEntry {
            wall: w,
            kind,
            pos_deep,
            neg_deep,
            exact: skewer.is_some(),
            skewer,
        });
    }
    Classification {
        depth,
        basepoint: basepoint_of(g),
        orbit_size: witnesses.count(),
        entries,
    }
}

/// Restriction quotient onto the essential walls.
pub fn essential_core(g: &CubeGraph, class: &Classification) -> Result<RestrictionQuotient> {
    restriction_quotient(g, &class.of_kind(WallKind::Essential))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PruneStage {
    pub removed_walls: Vec<WallId>,
    pub vertices_left: usize,
}

#[derive(Debug, Clone)]
pub struct PruneOutcome {
    /// Nested vertex sets, starting from the full complex.
    pub chain: Vec<BitSet>,
    pub stages: Vec<PruneStage>,
    /// Set when an orbit failed to close inside the window; the chain up to
    /// that point is still meaningful.
    pub inconclusive: Option<String>,
}

impl PruneOutcome {
    pub fn final_vertices(&self) -> &BitSet {
        self.chain.last().expect("chain starts with the full complex")
    }
}

/// Walls with at least one dual edge inside the (convex) vertex set.
pub fn live_walls(g: &CubeGraph, inside: &BitSet) -> Vec<WallId> {
    let mut live = BitSet::new(g.wall_count());
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        if inside.contains(a as usize) && inside.contains(b as usize) {
            live.insert(g.wall_of_edge(e as u32) as usize);
        }
    }
    live.iter().map(|w| w as u32).collect()
}

/// Wall-side depth restricted to a convex subset: a side is deep when a
/// witness inside the subset sits at distance >= depth from the wall, with
/// distances measured inside the subset.
fn deep_sides_within(
    g: &CubeGraph,
    inside: &BitSet,
    witnesses: &BitSet,
    w: WallId,
    depth: u32,
) -> (bool, bool) {
    let mut dist = vec![u32::MAX; g.vertex_count()];
    let mut queue = std::collections::VecDeque::new();
    for c in g.carrier(w).iter() {
        if inside.contains(c) {
            dist[c] = 0;
            queue.push_back(c as u32);
        }
    }
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            if inside.contains(v as usize) && dist[v as usize] == u32::MAX {
                dist[v as usize] = dist[u as usize] + 1;
                queue.push_back(v);
            }
        }
    }
    let pos = &g.walls()[w as usize].pos_side;
    let (mut pos_deep, mut neg_deep) = (false, false);
    for v in witnesses.iter() {
        if inside.contains(v) && dist[v] != u32::MAX && dist[v] >= depth {
            if pos.contains(v) {
                pos_deep = true;
            } else {
                neg_deep = true;
            }
            if pos_deep && neg_deep {
                break;
            }
        }
    }
    (pos_deep, neg_deep)
}

/// Iteratively intersects the group-invariant deep half-spaces of the
/// half-essential walls, one batch per round, until no half-essential wall
/// remains. Batching is order-independent because intersections of convex
/// sets commute.
pub fn prune(
    g: &CubeGraph,
    group: &GroupAction,
    depth: u32,
    params: &SearchParams,
) -> Result<PruneOutcome> {
    let witnesses = depth_witnesses(g, group);
    let mut current = BitSet::full(g.vertex_count());
    let mut chain = vec![current.clone()];
    let mut stages = Vec::new();
    let mut inconclusive = None;

    'rounds: loop {
        let live = live_walls(g, &current);
        let mut cuts: Vec<Halfspace> = Vec::new();
        let mut removed = Vec::new();
        for &w in &live {
            let (pos_deep, neg_deep) = deep_sides_within(g, &current, &witnesses, w, depth);
            if pos_deep == neg_deep {
                continue; // essential or trivial: not pruned
            }
            if !group.gens.is_empty()
                && actions::find_skewer_in_ball(g, group, w, params).is_some()
            {
                continue; // skewered: essential regardless of window depth
            }
            cuts.push(Halfspace { wall: w, pos: pos_deep });
            removed.push(w);
        }
        if cuts.is_empty() {
            break;
        }
        let mut next = current.clone();
        for h in cuts {
            // the invariant cut is the intersection of the half-space's
            // whole group orbit
            let mut orbit_sides: Vec<Halfspace> = vec![h];
            let mut seen = std::collections::BTreeSet::new();
            seen.insert((h.wall, h.pos));
            let mut stack = vec![h];
            while let Some(x) = stack.pop() {
                for auto in &group.gens {
                    for map in [&auto.fwd, &auto.inv] {
                        match actions::halfspace_image(g, map, x) {
                            Some(img) => {
                                if seen.insert((img.wall, img.pos)) {
                                    orbit_sides.push(img);
                                    stack.push(img);
                                }
                            }
                            None => {
                                inconclusive = Some(format!(
                                    "orbit of wall {} does not close inside the window",
                                    h.wall
                                ));
                                break 'rounds;
                            }
                        }
                    }
                }
            }
            for side in orbit_sides {
                next.intersect_with(&g.side_bits(side));
            }
        }
        if next.is_empty() {
            inconclusive = Some("pruning emptied the window".into());
            break;
        }
        stages.push(PruneStage { removed_walls: removed, vertices_left: next.count() });
        chain.push(next.clone());
        current = next;
    }

    Ok(PruneOutcome { chain, stages, inconclusive })
}

/// The subcomplex induced by a vertex set (used on pruning chains, whose
/// stages are convex).
pub fn induced_subcomplex(g: &CubeGraph, inside: &BitSet) -> Result<CubeGraph> {
    let verts: Vec<usize> = inside.iter().collect();
    if verts.is_empty() {
        return Err(Error::InvalidGraph("empty vertex set".into()));
    }
    let mut remap = vec![u32::MAX; g.vertex_count()];
    for (i, &v) in verts.iter().enumerate() {
        remap[v] = i as u32;
    }
    let names = verts.iter().map(|&v| g.vertex_name(v as u32).to_string()).collect();
    let mut edges = Vec::new();
    for &(a, b) in g.edges() {
        if inside.contains(a as usize) && inside.contains(b as usize) {
            edges.push((remap[a as usize], remap[b as usize]));
        }
    }
    let raw = RawGraph::new(names, &edges)?;
    CubeGraph::from_raw(raw, MedianPolicy::Trusted, Provenance::Quotient)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    fn no_group() -> GroupAction {
        GroupAction { gens: Vec::new() }
    }

    fn params() -> SearchParams {
        SearchParams::default()
    }

    #[test]
    fn restriction_to_all_walls_is_identity() {
        let g = generate::grid(2, 2).unwrap();
        let all: Vec<WallId> = (0..g.wall_count() as u32).collect();
        let rq = restriction_quotient(&g, &all).unwrap();
        assert_eq!(rq.quotient.vertex_count(), g.vertex_count());
        assert_eq!(rq.quotient.edges().len(), g.edges().len());
    }

    #[test]
    fn restriction_to_no_walls_is_a_point() {
        let g = generate::grid(2, 2).unwrap();
        let rq = restriction_quotient(&g, &[]).unwrap();
        assert_eq!(rq.quotient.vertex_count(), 1);
    }

    #[test]
    fn quotient_onto_crossers_is_the_wall_complex() {
        let g = generate::grid(3, 3).unwrap();
        // a vertical wall is crossed by the three horizontal ones, so its
        // complex is a path of length 3
        let rq = hyperplane_complex(&g, 0).unwrap();
        assert_eq!(rq.quotient.vertex_count(), 4);
        assert_eq!(rq.quotient.edges().len(), 3);
        assert_eq!(rq.quotient.dimension(), 1);

        let cube = generate::cube(3).unwrap();
        let rq = hyperplane_complex(&cube, 0).unwrap();
        assert_eq!(rq.quotient.vertex_count(), 4);
        assert_eq!(rq.quotient.wall_count(), 2);

        let tree = generate::tree(3, 2).unwrap();
        let rq = hyperplane_complex(&tree, 0).unwrap();
        assert_eq!(rq.quotient.vertex_count(), 1);
    }

    #[test]
    fn projection_is_cubical_and_drops_exactly_the_lost_walls() {
        let g = generate::grid(3, 2).unwrap();
        let rq = restriction_quotient(&g, &[0, 1]).unwrap();
        for &(a, b) in g.edges() {
            let (qa, qb) = (rq.projection[a as usize], rq.projection[b as usize]);
            assert!(qa == qb || rq.quotient.edge_id(qa, qb).is_some());
        }
        for a in 0..g.vertex_count() as u32 {
            for b in 0..g.vertex_count() as u32 {
                let dropped = g
                    .separating_walls(a, b)
                    .iter()
                    .filter(|w| !rq.kept_walls.contains(w))
                    .count();
                let da = g.distance(a, b);
                let dq = rq
                    .quotient
                    .distance(rq.projection[a as usize], rq.projection[b as usize]);
                assert_eq!(da - dropped, dq);
            }
        }
    }

    #[test]
    fn quarter_grid_absolute_classification() {
        // the corner window of the squared quarter-plane at depth 3: every
        // wall has exactly one deep side
        let g = generate::quarter_grid(12).unwrap();
        let class = classify_walls(&g, &no_group(), 3, &params());
        assert_eq!(class.entries.len(), 12);
        for e in &class.entries {
            assert_eq!(e.kind, WallKind::HalfEssential, "wall {}", e.wall);
        }
        let core = essential_core(&g, &class).unwrap();
        assert_eq!(core.quotient.vertex_count(), 1);
    }

    #[test]
    fn star_walls_are_trivial_beyond_diameter() {
        let g = generate::tree(4, 1).unwrap(); // star, diameter 2
        let class = classify_walls(&g, &no_group(), 3, &params());
        for e in &class.entries {
            assert_eq!(e.kind, WallKind::Trivial);
        }
    }

    #[test]
    fn prune_quarter_grid_to_a_point() {
        let g = generate::quarter_grid(12).unwrap();
        let out = prune(&g, &no_group(), 3, &params()).unwrap();
        assert!(out.inconclusive.is_none());
        assert_eq!(out.final_vertices().count(), 1);
        for pair in out.chain.windows(2) {
            assert!(pair[1].is_subset(&pair[0]));
        }
        // no half-essential wall survives in the final stage
        let witnesses = depth_witnesses(&g, &no_group());
        for &w in &live_walls(&g, out.final_vertices()) {
            let (p, n) = deep_sides_within(&g, out.final_vertices(), &witnesses, w, 3);
            assert_eq!(p, n);
        }
    }

    #[test]
    fn all_trivial_walls_are_left_alone() {
        // every vertex of the 3-cube touches every wall, so at depth 1 all
        // walls are trivial and pruning is a zero-length chain
        let g = generate::cube(3).unwrap();
        let class = classify_walls(&g, &no_group(), 1, &params());
        for e in &class.entries {
            assert_eq!(e.kind, WallKind::Trivial);
        }
        let out = prune(&g, &no_group(), 1, &params()).unwrap();
        assert_eq!(out.chain.len(), 1);
        assert!(out.stages.is_empty());
    }

    #[test]
    fn prune_path_with_pendant_edge() {
        // path 0-1-2 with pendant 3 at vertex 1: at depth 1 each wall has
        // exactly one deep side ({1,2,3}, {0,1,3}, {0,1,2}); one batch round
        // intersects them and leaves the center vertex 1
        let raw = RawGraph::new(
            vec!["0".into(), "1".into(), "2".into(), "3".into()],
            &[(0, 1), (1, 2), (1, 3)],
        )
        .unwrap();
        let g = CubeGraph::from_raw(raw, MedianPolicy::Auto { seed: 0 }, Provenance::Explicit)
            .unwrap();
        let out = prune(&g, &no_group(), 1, &params()).unwrap();
        assert!(out.inconclusive.is_none());
        assert_eq!(out.chain.len(), 2);
        let last: Vec<usize> = out.final_vertices().iter().collect();
        assert_eq!(last, vec![1]);
    }
}
