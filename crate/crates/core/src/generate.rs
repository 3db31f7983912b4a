//! Builtin complex generators: `cube(n)`, `grid(w,h)`, `path(n)`,
//! `quarter_grid(n)`, `tree(valence,depth)` and Cartesian products.

use crate::graph::{CubeGraph, MedianPolicy, Provenance, RawGraph};
use crate::{Error, Result};

const MAX_GENERATED_VERTICES: usize = 1 << 16;

fn finish(names: Vec<String>, edges: Vec<(u32, u32)>, label: String) -> Result<CubeGraph> {
    if names.len() > MAX_GENERATED_VERTICES {
        return Err(Error::BudgetExceeded(format!(
            "{label}: {} vertices exceeds the generator cap {MAX_GENERATED_VERTICES}",
            names.len()
        )));
    }
    let raw = RawGraph::new(names, &edges)?;
    CubeGraph::from_raw(raw, MedianPolicy::Trusted, Provenance::Generated(label))
}

/// 1-skeleton of the n-cube.
pub fn cube(n: u32) -> Result<CubeGraph> {
    if n > 14 {
        return Err(Error::BudgetExceeded(format!("cube({n}) too large")));
    }
    let size = 1usize << n;
    let names = (0..size).map(|v| format!("{v:0width$b}", width = n.max(1) as usize)).collect();
    let mut edges = Vec::new();
    for v in 0..size {
        for bit in 0..n {
            let u = v ^ (1 << bit);
            if u > v {
                edges.push((v as u32, u as u32));
            }
        }
    }
    if n == 0 {
        return finish(vec!["0".into()], vec![], "cube(0)".into());
    }
    finish(names, edges, format!("cube({n})"))
}

/// Grid of `w x h` squares: `(w+1) x (h+1)` vertices.
pub fn grid(w: u32, h: u32) -> Result<CubeGraph> {
    let (cols, rows) = (w as usize + 1, h as usize + 1);
    let id = |x: usize, y: usize| (y * cols + x) as u32;
    let mut names = Vec::with_capacity(cols * rows);
    let mut edges = Vec::new();
    for y in 0..rows {
        for x in 0..cols {
            names.push(format!("{x},{y}"));
            if x + 1 < cols {
                edges.push((id(x, y), id(x + 1, y)));
            }
            if y + 1 < rows {
                edges.push((id(x, y), id(x, y + 1)));
            }
        }
    }
    finish(names, edges, format!("grid({w},{h})"))
}

/// Path with `n` edges.
pub fn path(n: u32) -> Result<CubeGraph> {
    grid(n, 0).map(|mut g| {
        g.meta = Provenance::Generated(format!("path({n})"));
        g
    })
}

/// Corner window of the squared quarter-plane: the quarter of an `n x n`
/// grid, i.e. `n/2` squares in each direction from the corner. At this
/// truncation every wall has one short side toward the corner and one long
/// side away from it.
pub fn quarter_grid(n: u32) -> Result<CubeGraph> {
    let m = n / 2;
    grid(m, m).map(|mut g| {
        g.meta = Provenance::Generated(format!("quarter_grid({n})"));
        g
    })
}

/// Rooted tree in which every non-leaf vertex has the given valence, grown
/// to the given depth. `tree(3, 2)` is the trivalent tree of depth 2.
pub fn tree(valence: u32, depth: u32) -> Result<CubeGraph> {
    if valence == 0 {
        return Err(Error::InvalidGraph("tree valence must be positive".into()));
    }
    let mut names = vec!["r".to_string()];
    let mut edges = Vec::new();
    let mut frontier = vec![0u32];
    for level in 1..=depth {
        let mut next = Vec::new();
        for &v in &frontier {
            let children = if v == 0 { valence } else { valence - 1 };
            for _ in 0..children {
                let c = names.len() as u32;
                names.push(format!("d{level}v{c}"));
                edges.push((v, c));
                next.push(c);
                if names.len() > MAX_GENERATED_VERTICES {
                    return Err(Error::BudgetExceeded("tree too large".into()));
                }
            }
        }
        frontier = next;
    }
    finish(names, edges, format!("tree({valence},{depth})"))
}

/// Cartesian product of two complexes.
pub fn product(a: &CubeGraph, b: &CubeGraph) -> Result<CubeGraph> {
    let (na, nb) = (a.vertex_count(), b.vertex_count());
    let id = |i: usize, j: usize| (i * nb + j) as u32;
    let mut names = Vec::with_capacity(na * nb);
    for i in 0..na {
        for j in 0..nb {
            names.push(format!("{}|{}", a.vertex_name(i as u32), b.vertex_name(j as u32)));
        }
    }
    let mut edges = Vec::new();
    for &(u, v) in a.edges() {
        for j in 0..nb {
            edges.push((id(u as usize, j), id(v as usize, j)));
        }
    }
    for &(u, v) in b.edges() {
        for i in 0..na {
            edges.push((id(i, u as usize), id(i, v as usize)));
        }
    }
    finish(names, edges, "product".into())
}

/// Parses expressions like `grid(3,2)` or `cube(3)`.
pub fn from_expression(expr: &str) -> Result<CubeGraph> {
    let expr = expr.trim();
    let open = expr
        .find('(')
        .ok_or_else(|| Error::InvalidFormat(format!("not a generator expression: {expr}")))?;
    if !expr.ends_with(')') {
        return Err(Error::InvalidFormat(format!("unbalanced generator expression: {expr}")));
    }
    let name = &expr[..open];
    let args: Vec<&str> = expr[open + 1..expr.len() - 1]
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    let num = |i: usize| -> Result<u32> {
        args.get(i)
            .ok_or_else(|| Error::InvalidFormat(format!("{name} needs argument {i}")))?
            .parse()
            .map_err(|_| Error::InvalidFormat(format!("bad numeric argument in {expr}")))
    };
    match name {
        "cube" => cube(num(0)?),
        "grid" => grid(num(0)?, num(1)?),
        "path" => path(num(0)?),
        "quarter_grid" => quarter_grid(num(0)?),
        "tree" => tree(num(0)?, num(1)?),
        _ => Err(Error::InvalidFormat(format!("unknown generator: {name}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::verify_median;

    #[test]
    fn generated_complexes_are_median() {
        for g in [
            cube(3).unwrap(),
            grid(3, 3).unwrap(),
            quarter_grid(12).unwrap(),
            tree(3, 3).unwrap(),
            path(5).unwrap(),
        ] {
            assert!(verify_median(g.raw(), 0).ok);
        }
    }

    #[test]
    fn counts() {
        assert_eq!(cube(3).unwrap().vertex_count(), 8);
        let g = grid(3, 3).unwrap();
        assert_eq!(g.vertex_count(), 16);
        assert_eq!(g.wall_count(), 6);
        let t = tree(3, 2).unwrap();
        assert_eq!(t.vertex_count(), 10);
        let p = product(&tree(3, 2).unwrap(), &path(2).unwrap()).unwrap();
        assert_eq!(p.vertex_count(), 10 * 3);
        assert_eq!(p.wall_count(), t.wall_count() + 2);
    }

    #[test]
    fn expression_parser() {
        assert_eq!(from_expression("grid(2, 2)").unwrap().vertex_count(), 9);
        assert!(from_expression("blob(2)").is_err());
        assert!(from_expression("grid(2").is_err());
    }
}
