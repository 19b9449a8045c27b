//! Exact maximum weight independent set over the open-set intersection graph.

use crate::error::{Error, Result};
use crate::geom::{interiors_intersect, Id, WeightedPolygon};
use crate::par;
use serde::{Deserialize, Serialize};

pub const MAX_VERTICES: usize = 60;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConflictGraph {
    pub ids: Vec<Id>,
    pub weights: Vec<u64>,
    pub adj: Vec<Vec<usize>>,
}

impl ConflictGraph {
    pub fn new(ids: Vec<Id>, weights: Vec<u64>, edges: &[(usize, usize)]) -> ConflictGraph {
        let mut adj = vec![Vec::new(); ids.len()];
        for &(a, b) in edges {
            if a != b && !adj[a].contains(&b) {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        ConflictGraph { ids, weights, adj }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_independent(&self, verts: &[usize]) -> bool {
        verts.iter().all(|&v| verts.iter().all(|u| !self.adj[v].contains(u)))
    }
}

pub fn build_conflict_graph(polys: &[WeightedPolygon]) -> ConflictGraph {
    let rows: Vec<Vec<usize>> = par::map_range(polys.len(), |i| {
        (i + 1..polys.len()).filter(|&j| interiors_intersect(&polys[i].vertices, &polys[j].vertices)).collect()
    });
    let edges: Vec<(usize, usize)> =
        rows.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |&j| (i, j))).collect();
    ConflictGraph::new(polys.iter().map(|p| p.id).collect(), polys.iter().map(|p| p.weight).collect(), &edges)
}

/// Pairwise-disjoint check under open-set semantics.
pub fn is_independent_set(polys: &[WeightedPolygon]) -> bool {
    (0..polys.len()).all(|i| (i + 1..polys.len()).all(|j| !interiors_intersect(&polys[i].vertices, &polys[j].vertices)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mwis {
    pub weight: u64,
    /// Chosen ids in increasing order.
    pub ids: Vec<Id>,
}

struct Search<'a> {
    nbr: Vec<u64>,
    w: &'a [u64],
    best: u64,
}

impl Search<'_> {
    fn bits(mut s: u64) -> impl Iterator<Item = usize> {
        std::iter::from_fn(move || {
            if s == 0 {
                None
            } else {
                let v = s.trailing_zeros() as usize;
                s &= s - 1;
                Some(v)
            }
        })
    }

    /// Greedy clique cover: every independent set takes at most one vertex
    /// per clique, so the sum of clique maxima bounds it.
    fn bound(&self, mut cand: u64) -> u64 {
        let mut total = 0;
        while cand != 0 {
            let v = Self::bits(cand).max_by_key(|&v| (self.w[v], std::cmp::Reverse(v))).unwrap();
            total += self.w[v];
            let mut clique_ok = self.nbr[v] & cand;
            cand &= !(1u64 << v);
            while clique_ok != 0 {
                let u = clique_ok.trailing_zeros() as usize;
                clique_ok &= self.nbr[u];
                cand &= !(1u64 << u);
            }
        }
        total
    }

    fn run(&mut self, cand: u64, cur: u64) {
        if cand == 0 {
            self.best = self.best.max(cur);
            return;
        }
        if cur + self.bound(cand) <= self.best {
            return;
        }
        let (v, deg) = Self::bits(cand)
            .map(|v| (v, (self.nbr[v] & cand).count_ones()))
            .max_by_key(|&(v, d)| (d, std::cmp::Reverse(v)))
            .unwrap();
        if deg == 0 {
            let s: u64 = Self::bits(cand).map(|v| self.w[v]).sum();
            self.best = self.best.max(cur + s);
            return;
        }
        let rest = cand & !(1u64 << v);
        self.run(rest & !self.nbr[v], cur + self.w[v]);
        self.run(rest, cur);
    }
}

fn best_weight(nbr: &[u64], w: &[u64], cand: u64) -> u64 {
    let mut s = Search { nbr: nbr.to_vec(), w, best: 0 };
    s.run(cand, 0);
    s.best
}

/// Exact MWIS; among optimal sets the lexicographically smallest sorted id
/// list is returned.
pub fn mwis_exact(g: &ConflictGraph) -> Result<Mwis> {
    let n = g.len();
    if n > MAX_VERTICES {
        return Err(Error::CapExceeded(format!(
            "exact oracle handles at most {MAX_VERTICES} vertices, got {n} (worst case ~2^{n} branches)"
        )));
    }
    // vertex order = id order, so index order is id order for the tie-break
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| g.ids[i]);
    let mut pos = vec![0usize; n];
    for (k, &i) in order.iter().enumerate() {
        pos[i] = k;
    }
    let w: Vec<u64> = order.iter().map(|&i| g.weights[i]).collect();
    let nbr: Vec<u64> = order.iter().map(|&i| g.adj[i].iter().fold(0u64, |m, &j| m | (1u64 << pos[j]))).collect();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let target = best_weight(&nbr, &w, all);

    let mut chosen = Vec::new();
    let mut cand = all;
    let mut got = 0u64;
    for v in 0..n {
        if cand & (1u64 << v) == 0 {
            continue;
        }
        let rest = cand & !(1u64 << v) & !nbr[v];
        if got + w[v] + best_weight(&nbr, &w, rest) == target {
            chosen.push(g.ids[order[v]]);
            got += w[v];
            cand = rest;
        } else {
            cand &= !(1u64 << v);
        }
    }
    debug_assert_eq!(got, target);
    Ok(Mwis { weight: target, ids: chosen })
}

/// Exact MWIS of a polygon family.
pub fn mwis_polygons(polys: &[WeightedPolygon]) -> Result<Mwis> {
    mwis_exact(&build_conflict_graph(polys))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point;
    use proptest::prelude::*;

    fn brute(g: &ConflictGraph) -> u64 {
        let n = g.len();
        (0u32..1 << n)
            .filter(|s| (0..n).all(|i| s & (1 << i) == 0 || g.adj[i].iter().all(|&j| s & (1 << j) == 0)))
            .map(|s| (0..n).filter(|i| s & (1 << i) != 0).map(|i| g.weights[i]).sum())
            .max()
            .unwrap_or(0)
    }

    fn sq(id: Id, x: i64, y: i64, s: i64) -> WeightedPolygon {
        WeightedPolygon::new(
            id,
            vec![Point::int(x, y), Point::int(x + s, y), Point::int(x + s, y + s), Point::int(x, y + s)],
            1,
        )
        .unwrap()
    }

    #[test]
    fn examples() {
        let g = ConflictGraph::new(vec![0, 1], vec![3, 5], &[]);
        assert_eq!(mwis_exact(&g).unwrap(), Mwis { weight: 8, ids: vec![0, 1] });
        let g = ConflictGraph::new(vec![0, 1], vec![3, 5], &[(0, 1)]);
        assert_eq!(mwis_exact(&g).unwrap(), Mwis { weight: 5, ids: vec![1] });
        let c5 = ConflictGraph::new((0..5).collect(), vec![1; 5], &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        assert_eq!(mwis_exact(&c5).unwrap(), Mwis { weight: 2, ids: vec![0, 2] });
    }

    #[test]
    fn conflict_graph_examples() {
        let g = build_conflict_graph(&[sq(0, 0, 0, 2), sq(1, 5, 5, 2)]);
        assert_eq!(g.edge_count(), 0);
        let g = build_conflict_graph(&[sq(0, 0, 0, 10), sq(1, 2, 2, 2)]);
        assert_eq!(g.edge_count(), 1);
        let g = build_conflict_graph(&[sq(0, 0, 0, 2), sq(1, 2, 0, 2)]);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn refuses_beyond_cap() {
        let g = ConflictGraph::new((0..61).collect(), vec![1; 61], &[]);
        assert!(matches!(mwis_exact(&g), Err(Error::CapExceeded(_))));
    }

    proptest! {
        #[test]
        fn matches_full_enumeration(n in 1usize..16, seed in any::<u64>(), ws in proptest::collection::vec(1u64..20, 16)) {
            let mut r = crate::rng::rng(seed);
            use rand::Rng;
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if r.gen_bool(0.3) {
                        edges.push((i, j));
                    }
                }
            }
            let ids: Vec<Id> = (0..n as Id).rev().collect();
            let g = ConflictGraph::new(ids, ws[..n].to_vec(), &edges);
            let m = mwis_exact(&g).unwrap();
            prop_assert_eq!(m.weight, brute(&g));
            let idx: Vec<usize> = m.ids.iter().map(|id| g.ids.iter().position(|x| x == id).unwrap()).collect();
            prop_assert!(g.is_independent(&idx));
            prop_assert_eq!(idx.iter().map(|&i| g.weights[i]).sum::<u64>(), m.weight);
        }

        #[test]
        fn graph_is_symmetric(sqs in proptest::collection::vec((0i64..20, 0i64..20, 1i64..6), 1..10)) {
            let polys: Vec<_> = sqs.iter().enumerate().map(|(i, &(x, y, s))| sq(i as Id, x, y, s)).collect();
            let g = build_conflict_graph(&polys);
            for (i, l) in g.adj.iter().enumerate() {
                prop_assert!(!l.contains(&i));
                for &j in l {
                    prop_assert!(g.adj[j].contains(&i));
                }
            }
        }
    }
}
