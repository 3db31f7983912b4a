//! Serializable certificates and the independent checker.
//!
//! Every search in [`crate::actions`] and [`crate::walls`] returns a witness
//! that can be re-verified here from scratch. The checker only evaluates
//! words on vertices and asks side-membership / adjacency questions of the
//! complex; it never looks at search state. Walls are referenced through a
//! dual-edge anchor and an orientation vertex rather than bare indices, so a
//! certificate found on a window still resolves after the window grows.

use serde::{Deserialize, Serialize};

use crate::actions::{self, GroupAction, Word};
use crate::graph::{CubeGraph, Halfspace, VertexId};
use crate::{Error, Result};

/// A half-space pinned by one of its wall's dual edges (the anchor, by
/// convention the wall's lexicographically least dual edge) and the anchor
/// endpoint lying inside the half-space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfspaceRef {
    pub edge: (VertexId, VertexId),
    pub toward: VertexId,
}

impl HalfspaceRef {
    pub fn of(g: &CubeGraph, h: Halfspace) -> Self {
        let (a, b) = g.wall_anchor(h.wall);
        let toward = if g.in_halfspace(h, a) { a } else { b };
        HalfspaceRef { edge: (a, b), toward }
    }

    pub fn resolve(&self, g: &CubeGraph) -> Result<Halfspace> {
        let e = g.edge_id(self.edge.0, self.edge.1).ok_or_else(|| {
            Error::CertificateRejected(format!(
                "anchor edge ({}, {}) does not exist in this complex",
                self.edge.0, self.edge.1
            ))
        })?;
        if self.toward != self.edge.0 && self.toward != self.edge.1 {
            return Err(Error::CertificateRejected(
                "orientation vertex is not an endpoint of the anchor edge".into(),
            ));
        }
        let wall = g.wall_of_edge(e);
        let pos = g.in_halfspace(Halfspace::pos(wall), self.toward);
        Ok(Halfspace { wall, pos })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkewerCert {
    /// Word in the declared generators; `n` is the exponent applied to it.
    pub element: Vec<String>,
    pub n: u32,
    pub halfspace: HalfspaceRef,
    /// Image of `halfspace` under the n-th power: properly inside it.
    pub image: HalfspaceRef,
    /// A vertex of the half-space outside its image.
    pub witness: VertexId,
    pub checked: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlipCert {
    pub element: Vec<String>,
    pub halfspace: HalfspaceRef,
    /// Image of `halfspace`: properly contains the complement of `halfspace`.
    pub image: HalfspaceRef,
    /// A vertex of the image inside `halfspace` itself.
    pub witness: VertexId,
    pub checked: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoubleSkewerCert {
    pub element: Vec<String>,
    pub inner: HalfspaceRef,
    pub outer: HalfspaceRef,
    /// element . outer, properly inside `inner`.
    pub image_outer: HalfspaceRef,
    /// The two flips composed per the two-step construction, when that
    /// route produced the element (a direct power otherwise).
    pub via_flips: Option<Box<(FlipCert, FlipCert)>>,
    pub checked: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractingCert {
    pub element: Vec<String>,
    /// Nested pair with strongly separated walls; the element carries the
    /// outer half-space properly inside the inner one.
    pub inner: HalfspaceRef,
    pub outer: HalfspaceRef,
    pub image_outer: HalfspaceRef,
    pub checked: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SsPairCert {
    pub through: HalfspaceRef,
    pub inner: HalfspaceRef,
    pub outer: HalfspaceRef,
    pub checked: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FacingTripleCert {
    pub halves: [HalfspaceRef; 3],
    pub checked: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PencilCert {
    /// Nested chain, innermost first.
    pub chain: Vec<HalfspaceRef>,
    pub checked: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchottkyCert {
    /// Four pairwise-disjoint half-spaces, the ping-pong domains:
    /// `a` shuttles between the first two, `b` between the last two.
    pub domains: [HalfspaceRef; 4],
    pub a_element: Vec<String>,
    pub b_element: Vec<String>,
    pub checked: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionCert {
    /// Wall classes by anchor edges; every wall in one class crosses every
    /// wall in every other class, and classes are unsplittable.
    pub classes: Vec<Vec<(VertexId, VertexId)>>,
    pub checked: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Certificate {
    Skewer(SkewerCert),
    Flip(FlipCert),
    DoubleSkewer(DoubleSkewerCert),
    Contracting(ContractingCert),
    SsPair(SsPairCert),
    FacingTriple(FacingTripleCert),
    Pencil(PencilCert),
    Schottky(SchottkyCert),
    Decomposition(DecompositionCert),
}

impl Certificate {
    pub fn set_checked(&mut self, value: bool) {
        match self {
            Certificate::Skewer(c) => c.checked = value,
            Certificate::Flip(c) => c.checked = value,
            Certificate::DoubleSkewer(c) => c.checked = value,
            Certificate::Contracting(c) => c.checked = value,
            Certificate::SsPair(c) => c.checked = value,
            Certificate::FacingTriple(c) => c.checked = value,
            Certificate::Pencil(c) => c.checked = value,
            Certificate::Schottky(c) => c.checked = value,
            Certificate::Decomposition(c) => c.checked = value,
        }
    }
}

fn resolve_word(group: &GroupAction, names: &[String]) -> Result<Word> {
    actions::word_from_names(group, names)
}

fn need_group<'a>(group: Option<&'a GroupAction>, what: &str) -> Result<&'a GroupAction> {
    group.ok_or_else(|| {
        Error::CertificateRejected(format!("{what} certificate needs the group file"))
    })
}

/// The image of a half-space under a word power, or a rejection when the
/// word is not defined on the half-space's carrier.
fn word_image(
    g: &CubeGraph,
    group: &GroupAction,
    word: &Word,
    power: u32,
    h: Halfspace,
) -> Result<Halfspace> {
    let base = actions::realize(g, group, word);
    let mut map = base.clone();
    for _ in 1..power {
        map = actions::compose(&base, &map);
    }
    actions::halfspace_image(g, &map, h).ok_or_else(|| {
        Error::CertificateRejected("element is not defined on the half-space carrier".into())
    })
}

fn expect_proper_subset(g: &CubeGraph, small: Halfspace, big: Halfspace, what: &str) -> Result<()> {
    if g.side_bits(small).is_proper_subset(&g.side_bits(big)) {
        Ok(())
    } else {
        Err(Error::CertificateRejected(format!("{what}: inclusion fails")))
    }
}

fn check_skewer(g: &CubeGraph, group: &GroupAction, c: &SkewerCert) -> Result<()> {
    if c.n == 0 {
        return Err(Error::CertificateRejected("skewer exponent must be non-zero".into()));
    }
    let h = c.halfspace.resolve(g)?;
    let claimed_image = c.image.resolve(g)?;
    let word = resolve_word(group, &c.element)?;
    let image = word_image(g, group, &word, c.n, h)?;
    if image != claimed_image {
        return Err(Error::CertificateRejected("image half-space does not match".into()));
    }
    if image.wall == h.wall || g.crosses(image.wall, h.wall) {
        return Err(Error::CertificateRejected(
            "skewer image wall must be distinct and non-crossing".into(),
        ));
    }
    expect_proper_subset(g, image, h, "skewer")?;
    if !(g.in_halfspace(h, c.witness) && !g.in_halfspace(image, c.witness)) {
        return Err(Error::CertificateRejected("skewer witness vertex misplaced".into()));
    }
    Ok(())
}

fn check_flip(g: &CubeGraph, group: &GroupAction, c: &FlipCert) -> Result<()> {
    let h = c.halfspace.resolve(g)?;
    let claimed_image = c.image.resolve(g)?;
    let word = resolve_word(group, &c.element)?;
    let image = word_image(g, group, &word, 1, h)?;
    if image != claimed_image {
        return Err(Error::CertificateRejected("flip image half-space does not match".into()));
    }
    expect_proper_subset(g, h.opposite(), image, "flip")?;
    if !(g.in_halfspace(image, c.witness) && g.in_halfspace(h, c.witness)) {
        return Err(Error::CertificateRejected("flip witness vertex misplaced".into()));
    }
    Ok(())
}

fn check_double_skewer(g: &CubeGraph, group: &GroupAction, c: &DoubleSkewerCert) -> Result<()> {
    let inner = c.inner.resolve(g)?;
    let outer = c.outer.resolve(g)?;
    expect_proper_subset(g, inner, outer, "double skewer nesting")?;
    let word = resolve_word(group, &c.element)?;
    let image = word_image(g, group, &word, 1, outer)?;
    if image != c.image_outer.resolve(g)? {
        return Err(Error::CertificateRejected("double skewer image does not match".into()));
    }
    expect_proper_subset(g, image, inner, "double skewer")?;
    if let Some(flips) = &c.via_flips {
        check_flip(g, group, &flips.0)?;
        check_flip(g, group, &flips.1)?;
    }
    Ok(())
}

fn check_contracting(g: &CubeGraph, group: &GroupAction, c: &ContractingCert) -> Result<()> {
    let inner = c.inner.resolve(g)?;
    let outer = c.outer.resolve(g)?;
    expect_proper_subset(g, inner, outer, "contracting nesting")?;
    if !crate::walls::strongly_separated(g, inner.wall, outer.wall)? {
        return Err(Error::CertificateRejected(
            "contracting pair walls are not strongly separated".into(),
        ));
    }
    let word = resolve_word(group, &c.element)?;
    let image = word_image(g, group, &word, 1, outer)?;
    if image != c.image_outer.resolve(g)? {
        return Err(Error::CertificateRejected("contracting image does not match".into()));
    }
    expect_proper_subset(g, image, inner, "contracting")?;
    Ok(())
}

fn check_ss_pair(g: &CubeGraph, c: &SsPairCert) -> Result<()> {
    let through = c.through.resolve(g)?;
    let inner = c.inner.resolve(g)?;
    let outer = c.outer.resolve(g)?;
    expect_proper_subset(g, inner, through, "sandwich lower")?;
    expect_proper_subset(g, through, outer, "sandwich upper")?;
    if !crate::walls::strongly_separated(g, inner.wall, outer.wall)? {
        return Err(Error::CertificateRejected("pair is not strongly separated".into()));
    }
    Ok(())
}

fn check_facing_triple(g: &CubeGraph, c: &FacingTripleCert) -> Result<()> {
    let sides: Vec<Halfspace> =
        c.halves.iter().map(|r| r.resolve(g)).collect::<Result<_>>()?;
    for i in 0..3 {
        for j in (i + 1)..3 {
            if g.side_bits(sides[i]).intersects(&g.side_bits(sides[j])) {
                return Err(Error::CertificateRejected(format!(
                    "facing triple half-spaces {i} and {j} intersect"
                )));
            }
        }
    }
    Ok(())
}

fn check_pencil(g: &CubeGraph, c: &PencilCert) -> Result<()> {
    if c.chain.len() < 2 {
        return Err(Error::CertificateRejected("pencil needs at least two walls".into()));
    }
    let sides: Vec<Halfspace> =
        c.chain.iter().map(|r| r.resolve(g)).collect::<Result<_>>()?;
    for pair in sides.windows(2) {
        expect_proper_subset(g, pair[0], pair[1], "pencil chain")?;
    }
    Ok(())
}

fn check_schottky(g: &CubeGraph, group: &GroupAction, c: &SchottkyCert) -> Result<()> {
    let d: Vec<Halfspace> = c.domains.iter().map(|r| r.resolve(g)).collect::<Result<_>>()?;
    for i in 0..4 {
        for j in (i + 1)..4 {
            if g.side_bits(d[i]).intersects(&g.side_bits(d[j])) {
                return Err(Error::CertificateRejected(format!(
                    "ping-pong domains {i} and {j} intersect"
                )));
            }
        }
    }
    let a = resolve_word(group, &c.a_element)?;
    let b = resolve_word(group, &c.b_element)?;
    // a carries everything outside domains[1] properly into domains[0]
    let a_img = word_image(g, group, &a, 1, d[1].opposite())?;
    expect_proper_subset(g, a_img, d[0], "ping-pong for a")?;
    let b_img = word_image(g, group, &b, 1, d[3].opposite())?;
    expect_proper_subset(g, b_img, d[2], "ping-pong for b")?;
    Ok(())
}

fn check_decomposition(g: &CubeGraph, c: &DecompositionCert) -> Result<()> {
    let mut seen = vec![false; g.wall_count()];
    let mut classes = Vec::new();
    for anchors in &c.classes {
        let mut class = Vec::new();
        for &(a, b) in anchors {
            let e = g.edge_id(a, b).ok_or_else(|| {
                Error::CertificateRejected(format!("anchor edge ({a}, {b}) missing"))
            })?;
            let w = g.wall_of_edge(e);
            if seen[w as usize] {
                return Err(Error::CertificateRejected(format!("wall {w} listed twice")));
            }
            seen[w as usize] = true;
            class.push(w);
        }
        classes.push(class);
    }
    if seen.iter().any(|&s| !s) {
        return Err(Error::CertificateRejected("classes do not cover all walls".into()));
    }
    for (i, ci) in classes.iter().enumerate() {
        for cj in classes.iter().skip(i + 1) {
            for &w1 in ci {
                for &w2 in cj {
                    if !g.crosses(w1, w2) {
                        return Err(Error::CertificateRejected(format!(
                            "cross-class walls {w1} and {w2} do not cross"
                        )));
                    }
                }
            }
        }
        // unsplittable: the non-crossing relation connects the class
        if !ci.is_empty() {
            let mut reached = vec![false; ci.len()];
            reached[0] = true;
            let mut frontier = vec![0usize];
            while let Some(k) = frontier.pop() {
                for (l, &w2) in ci.iter().enumerate() {
                    if !reached[l] && !g.crosses(ci[k], w2) {
                        reached[l] = true;
                        frontier.push(l);
                    }
                }
            }
            if reached.iter().any(|&r| !r) {
                return Err(Error::CertificateRejected(format!("class {i} splits further")));
            }
        }
    }
    Ok(())
}

/// Re-verifies a certificate against a complex (and group, where the
/// certificate names group elements).
pub fn check_certificate(
    g: &CubeGraph,
    group: Option<&GroupAction>,
    cert: &Certificate,
) -> Result<()> {
    match cert {
        Certificate::Skewer(c) => check_skewer(g, need_group(group, "skewer")?, c),
        Certificate::Flip(c) => check_flip(g, need_group(group, "flip")?, c),
        Certificate::DoubleSkewer(c) => {
            check_double_skewer(g, need_group(group, "double skewer")?, c)
        }
        Certificate::Contracting(c) => {
            check_contracting(g, need_group(group, "contracting")?, c)
        }
        Certificate::SsPair(c) => check_ss_pair(g, c),
        Certificate::FacingTriple(c) => check_facing_triple(g, c),
        Certificate::Pencil(c) => check_pencil(g, c),
        Certificate::Schottky(c) => check_schottky(g, need_group(group, "Schottky")?, c),
        Certificate::Decomposition(c) => check_decomposition(g, c),
    }
}

/// Checks and stamps a certificate. Searches call this before emitting.
pub fn seal(g: &CubeGraph, group: Option<&GroupAction>, cert: &mut Certificate) -> Result<()> {
    check_certificate(g, group, cert)?;
    cert.set_checked(true);
    Ok(())
}
