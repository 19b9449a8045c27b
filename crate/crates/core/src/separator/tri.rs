//! Plane graphs given by rotation systems, repair of loops and parallel
//! edges, and triangulation of all faces.

use serde::{Deserialize, Serialize};
use std::collections::{HashSet, VecDeque};

/// Graph with a combinatorial embedding. Dart `2e + s` leaves `edges[e][s]`
/// and its twin is `dart ^ 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneGraph {
    pub edges: Vec<[usize; 2]>,
    /// Darts leaving each vertex in counterclockwise order.
    pub rot: Vec<Vec<usize>>,
    pub weight: Vec<u64>,
    /// Vertex of the unrepaired graph that each vertex was derived from.
    pub origin: Vec<usize>,
}

impl PlaneGraph {
    pub fn len(&self) -> usize {
        self.rot.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rot.is_empty()
    }

    pub fn tail(&self, d: usize) -> usize {
        self.edges[d / 2][d % 2]
    }

    pub fn head(&self, d: usize) -> usize {
        self.edges[d / 2][1 - d % 2]
    }

    pub fn total_weight(&self) -> u64 {
        self.weight.iter().sum()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rot[v].len()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.rot[v].iter().map(move |&d| self.head(d))
    }

    /// Straight-line embedding: rotations sorted by angle around each point.
    pub fn from_positions(pos: &[(f64, f64)], edges: &[(usize, usize)], weight: Vec<u64>) -> PlaneGraph {
        let n = pos.len();
        let mut rot: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (e, &(u, v)) in edges.iter().enumerate() {
            rot[u].push(2 * e);
            rot[v].push(2 * e + 1);
        }
        let edges: Vec<[usize; 2]> = edges.iter().map(|&(u, v)| [u, v]).collect();
        let mut g = PlaneGraph { edges, rot, weight, origin: (0..n).collect() };
        for v in 0..n {
            let mut r = std::mem::take(&mut g.rot[v]);
            r.sort_by(|&a, &b| {
                let ang = |d: usize| {
                    let w = g.head(d);
                    (pos[w].1 - pos[v].1).atan2(pos[w].0 - pos[v].0)
                };
                ang(a).total_cmp(&ang(b))
            });
            g.rot[v] = r;
        }
        g
    }

    fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; 2 * self.edges.len()];
        for r in &self.rot {
            for (i, &d) in r.iter().enumerate() {
                pos[d] = i;
            }
        }
        pos
    }

    /// Next dart along the face to the left of `d`.
    fn next_with(&self, pos: &[usize], d: usize) -> usize {
        let v = self.head(d);
        let n = self.rot[v].len();
        self.rot[v][(pos[d ^ 1] + n - 1) % n]
    }

    /// Faces as dart cycles, each face to the left of its darts.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let pos = self.positions();
        let mut seen = vec![false; 2 * self.edges.len()];
        let mut out = Vec::new();
        for d0 in 0..seen.len() {
            if seen[d0] {
                continue;
            }
            let mut face = Vec::new();
            let mut d = d0;
            while !seen[d] {
                seen[d] = true;
                face.push(d);
                d = self.next_with(&pos, d);
            }
            out.push(face);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        if self.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.len()];
        let mut q = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = q.pop_front() {
            for w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    q.push_back(w);
                }
            }
        }
        count == self.len()
    }

    /// No loops and no parallel edges.
    pub fn is_simple(&self) -> bool {
        let mut seen = HashSet::new();
        self.edges.iter().all(|&[u, v]| u != v && seen.insert((u.min(v), u.max(v))))
    }

    pub fn min_degree(&self) -> usize {
        self.rot.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Euler characteristic of the embedding is 2 (connected, genus zero).
    pub fn is_spherical(&self) -> bool {
        let (v, e, f) = (self.len() as i64, self.edges.len() as i64, self.faces().len() as i64);
        self.is_connected() && v - e + f == 2
    }

    /// Simple, spherical, every face a triangle.
    pub fn is_triangulation(&self) -> bool {
        self.is_simple() && self.is_spherical() && self.faces().iter().all(|f| f.len() == 3)
    }

    fn add_vertex(&mut self, weight: u64, origin: usize) -> usize {
        self.rot.push(Vec::new());
        self.weight.push(weight);
        self.origin.push(origin);
        self.rot.len() - 1
    }

    fn add_edge(&mut self, u: usize, v: usize) -> (usize, usize) {
        self.edges.push([u, v]);
        let e = self.edges.len() - 1;
        (2 * e, 2 * e + 1)
    }

    /// Put a new vertex in the middle of edge `e`.
    fn subdivide(&mut self, e: usize) -> usize {
        let [u, v] = self.edges[e];
        let x = self.add_vertex(0, self.origin[u]);
        self.edges[e] = [u, x];
        let (xv, vx) = self.add_edge(x, v);
        let old = 2 * e + 1;
        let i = self.rot[v].iter().position(|&d| d == old).expect("dart in rotation");
        self.rot[v][i] = vx;
        self.rot[x] = vec![old, xv];
        x
    }
}

/// Expand loops into triangles of new vertices, subdivide parallel edges and
/// triangulate every face longer than three: a ring vertex per face edge and
/// a center vertex, so that the result is simple with triangular faces and
/// at most linearly many new vertices. Weights stay on the original vertices;
/// graphs with fewer than three vertices are returned repaired but as is.
pub fn fix_and_triangulate(g: &PlaneGraph) -> PlaneGraph {
    let mut h = g.clone();
    for e in 0..g.edges.len() {
        if h.edges[e][0] == h.edges[e][1] {
            h.subdivide(e);
            let f = h.edges.len() - 1;
            h.subdivide(f);
        }
    }
    let mut pairs = HashSet::new();
    for e in 0..h.edges.len() {
        let [u, v] = h.edges[e];
        if !pairs.insert((u.min(v), u.max(v))) {
            h.subdivide(e);
        }
    }
    if h.len() < 3 {
        return h;
    }
    for face in h.faces() {
        let k = face.len();
        if k <= 3 {
            continue;
        }
        let c: Vec<usize> = face.iter().map(|&d| h.tail(d)).collect();
        let ring: Vec<usize> = (0..k).map(|i| h.add_vertex(0, h.origin[c[i]])).collect();
        let z = h.add_vertex(0, h.origin[c[0]]);
        // darts: c_i -> r_i, c_{i+1} -> r_i, r_i -> r_{i+1}, r_i -> z
        let mut to_own = Vec::with_capacity(k);
        let mut to_prev = Vec::with_capacity(k);
        let mut ring_next = Vec::with_capacity(k);
        let mut ring_z = Vec::with_capacity(k);
        for i in 0..k {
            to_own.push(h.add_edge(c[i], ring[i]));
            to_prev.push(h.add_edge(c[(i + 1) % k], ring[i]));
            ring_next.push(h.add_edge(ring[i], ring[(i + 1) % k]));
            ring_z.push(h.add_edge(ring[i], z));
        }
        for i in 0..k {
            let prev = (i + k - 1) % k;
            let at = h.rot[c[i]].iter().position(|&d| d == face[i]).expect("face dart in rotation");
            h.rot[c[i]].splice(at + 1..at + 1, [to_own[i].0, to_prev[prev].0]);
            h.rot[ring[i]] = vec![to_own[i].1, to_prev[i].1, ring_next[i].0, ring_z[i].0, ring_next[prev].1];
        }
        h.rot[z] = ring_z.iter().map(|d| d.1).collect();
    }
    h
}
