//! Lattice graphs the data vectors are mapped onto, plus the reference spin
//! patterns used to name ordered ground states.
//!
//! All lattices are finite with open boundaries. Sites are indexed `0..n`,
//! edges are stored as `(i, j)` with `i < j`, sorted lexicographically, with
//! no duplicates or self-loops.

use crate::error::{Error, Result};

/// A single spin: `+1` (up) or `-1` (down).
pub type Spin = i8;

/// Which lattice family a [`LatticeGraph`] was built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeKind {
    Chain,
    SquareLadder,
    TriangleLadder,
    TriangleGrid { rows: usize, cols: usize },
}

/// A named spin configuration, e.g. an antiferromagnetic reference state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinPattern {
    pub name: String,
    pub spins: Vec<Spin>,
}

/// Undirected interaction graph over `n` sites.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeGraph {
    n_sites: usize,
    edges: Vec<(usize, usize)>,
    kind: LatticeKind,
}

impl LatticeGraph {
    /// Open chain: edges `(i, i+1)` for `i < n-1`. Requires `n >= 2`.
    pub fn chain(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("chain needs at least 2 sites, got {n}")));
        }
        let edges = (0..n - 1).map(|i| (i, i + 1)).collect();
        Ok(Self::finish(n, edges, LatticeKind::Chain))
    }

    /// Two-leg square ladder with `n` sites (`n` even, `n >= 4`).
    ///
    /// Rung `k` hosts sites `2k` and `2k+1`; the leg assignment of the even
    /// and odd index swaps on every rung (a boustrophedon numbering). Rungs
    /// are `(2k, 2k+1)`; legs connect consecutive rungs as `(2k, 2k+3)` and
    /// `(2k+1, 2k+2)`. Every edge then joins an even and an odd index, so the
    /// index-alternating patterns are proper 2-colorings of the ladder.
    pub fn square_ladder(n: usize) -> Result<Self> {
        if n < 4 || n % 2 != 0 {
            return Err(Error::invalid(format!(
                "square ladder needs an even number of sites >= 4, got {n}"
            )));
        }
        let rungs = n / 2;
        let mut edges = Vec::with_capacity(rungs + n - 2);
        for k in 0..rungs {
            edges.push((2 * k, 2 * k + 1));
            if k + 1 < rungs {
                edges.push((2 * k, 2 * k + 3));
                edges.push((2 * k + 1, 2 * k + 2));
            }
        }
        Ok(Self::finish(n, edges, LatticeKind::SquareLadder))
    }

    /// Triangle ladder: chain edges plus next-nearest `(i, i+2)`. Requires `n >= 3`.
    pub fn triangle_ladder(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::invalid(format!(
                "triangle ladder needs at least 3 sites, got {n}"
            )));
        }
        let mut edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        edges.extend((0..n - 2).map(|i| (i, i + 2)));
        Ok(Self::finish(n, edges, LatticeKind::TriangleLadder))
    }

    /// Triangulated rectangular grid in row-major order (`rows, cols >= 2`).
    ///
    /// Site `(r, c)` has index `r * cols + c`. Edges are horizontal, vertical,
    /// and the `(r, c)-(r+1, c+1)` diagonal, so every unit square is split
    /// into two triangles.
    pub fn triangle_grid(rows: usize, cols: usize) -> Result<Self> {
        if rows < 2 || cols < 2 {
            return Err(Error::invalid(format!(
                "triangle grid needs rows, cols >= 2, got {rows}x{cols}"
            )));
        }
        let idx = |r: usize, c: usize| r * cols + c;
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                if c + 1 < cols {
                    edges.push((idx(r, c), idx(r, c + 1)));
                }
                if r + 1 < rows {
                    edges.push((idx(r, c), idx(r + 1, c)));
                }
                if r + 1 < rows && c + 1 < cols {
                    edges.push((idx(r, c), idx(r + 1, c + 1)));
                }
            }
        }
        Ok(Self::finish(rows * cols, edges, LatticeKind::TriangleGrid { rows, cols }))
    }

    fn finish(n_sites: usize, mut edges: Vec<(usize, usize)>, kind: LatticeKind) -> Self {
        for e in &mut edges {
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
            debug_assert!(e.0 < e.1 && e.1 < n_sites);
        }
        edges.sort_unstable();
        edges.dedup();
        Self { n_sites, edges, kind }
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    /// Neighbor lists, one per site.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n_sites];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        adj
    }

    /// Reference patterns used to name ordered ground states.
    ///
    /// Every lattice carries the two index-alternating states `AF1`
    /// (`+1` on even sites) and `AF2` (its global flip). Triangle grids
    /// additionally carry stripe states `zigzag-0/1/2` (spin constant along
    /// rows, columns, or the `(1,1)` diagonal) and the three honeycomb-like
    /// states `graphene-0/1/2` (down spins on the sublattice with
    /// `(r + c) % 3 == k`), each together with its global flip under the
    /// same name.
    pub fn reference_patterns(&self) -> Vec<SpinPattern> {
        let n = self.n_sites;
        let af1: Vec<Spin> = (0..n).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
        let af2: Vec<Spin> = af1.iter().map(|&s| -s).collect();
        let mut out = vec![
            SpinPattern { name: "AF1".into(), spins: af1 },
            SpinPattern { name: "AF2".into(), spins: af2 },
        ];
        if let LatticeKind::TriangleGrid { rows, cols } = self.kind {
            let mut push_with_flip = |name: &str, spins: Vec<Spin>| {
                let flip = spins.iter().map(|&s| -s).collect();
                out.push(SpinPattern { name: name.into(), spins });
                out.push(SpinPattern { name: name.into(), spins: flip });
            };
            let stripe = |f: &dyn Fn(usize, usize) -> bool| -> Vec<Spin> {
                let mut s = Vec::with_capacity(rows * cols);
                for r in 0..rows {
                    for c in 0..cols {
                        s.push(if f(r, c) { -1 } else { 1 });
                    }
                }
                s
            };
            push_with_flip("zigzag-0", stripe(&|r, _| r % 2 == 1));
            push_with_flip("zigzag-1", stripe(&|_, c| c % 2 == 1));
            push_with_flip("zigzag-2", stripe(&|r, c| (r + c) % 2 == 1));
            for k in 0..3 {
                push_with_flip(&format!("graphene-{k}"), stripe(&|r, c| (r + c) % 3 == k));
            }
        }
        out
    }
}
