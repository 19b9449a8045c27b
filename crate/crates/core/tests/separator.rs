use geomis_core::cuttings::{build_cutting, total_weight, CuttingParams};
use geomis_core::gen::{disjoint_polygons, Shape, Weights};
use geomis_core::geom::{area, signed_area2};
use geomis_core::separator::encode::tokenize;
use geomis_core::separator::planar::Label;
use geomis_core::separator::trace::{canonical_ring, trace_regions};
use geomis_core::separator::*;
use geomis_core::{Point, Rat, Rect, WeightedPolygon};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn instance(m: usize, n: i64, seed: u64, shape: Shape) -> (Vec<WeightedPolygon>, Rect) {
    (disjoint_polygons(m, n, seed, shape, Weights::Uniform { lo: 1, hi: 5 }).unwrap(), Rect::int(0, n, 0, n))
}

/// Even-odd ray casting with exact rationals; `None` on the boundary.
fn strictly_inside(p: &Point, ring: &[Point]) -> Option<bool> {
    let n = ring.len();
    let mut inside = false;
    for i in 0..n {
        let (a, b) = (&ring[i], &ring[(i + 1) % n]);
        let cross = &(&(&b.x - &a.x) * &(&p.y - &a.y)) - &(&(&b.y - &a.y) * &(&p.x - &a.x));
        let within = |u: &Rat, v: &Rat, w: &Rat| (u <= w && w <= v) || (v <= w && w <= u);
        if cross.is_zero() && within(&a.x, &b.x, &p.x) && within(&a.y, &b.y, &p.y) {
            return None;
        }
        if (a.y > p.y) != (b.y > p.y) {
            let t = &(&p.y - &a.y) / &(&b.y - &a.y);
            let x = &a.x + &(&t * &(&b.x - &a.x));
            if x > p.x {
                inside = !inside;
            }
        }
    }
    Some(inside)
}

/// Interior sample points of a convex polygon.
fn interior_samples(p: &WeightedPolygon) -> Vec<Point> {
    let v = &p.vertices;
    let mut out = Vec::new();
    for i in 1..v.len() - 1 {
        for (a, b, c) in [(1, 1, 1), (4, 1, 1), (1, 4, 1), (1, 1, 4), (10, 10, 1), (1, 10, 10), (10, 1, 10)] {
            let s = Rat::int(a + b + c);
            let x = &(&(&Rat::int(a) * &v[0].x) + &(&(&Rat::int(b) * &v[i].x) + &(&Rat::int(c) * &v[i + 1].x))) / &s;
            let y = &(&(&Rat::int(a) * &v[0].y) + &(&(&Rat::int(b) * &v[i].y) + &(&Rat::int(c) * &v[i + 1].y))) / &s;
            out.push(Point::new(x, y));
        }
    }
    out
}

fn check_classification(sp: &SeparatingPolygon, polys: &[WeightedPolygon]) {
    let total = total_weight(polys);
    assert_eq!(sp.inside_weight + sp.outside_weight + sp.cut_weight, total);
    for p in polys {
        let sides: Vec<Option<bool>> = interior_samples(p).iter().map(|q| strictly_inside(q, &sp.boundary)).collect();
        if sp.classification.inside.contains(&p.id) {
            assert!(sides.iter().all(|s| *s != Some(false)), "polygon {} classified inside has a point outside", p.id);
        } else if sp.classification.outside.contains(&p.id) {
            assert!(sides.iter().all(|s| *s != Some(true)), "polygon {} classified outside has a point inside", p.id);
        } else {
            assert!(sp.classification.intersecting.contains(&p.id));
        }
        if sides.contains(&Some(true)) && sides.contains(&Some(false)) {
            assert!(sp.classification.intersecting.contains(&p.id));
        }
    }
}

#[test]
fn dual_graph_weights_and_embedding() {
    for seed in 0..6 {
        let (ps, f) = instance(50, 300, seed, if seed % 2 == 0 { Shape::Squares } else { Shape::Convex });
        let c = build_cutting(&ps, &f, 4, seed, &CuttingParams::default()).unwrap();
        let d = dual_graph(&c, &ps, &ps).unwrap();
        assert_eq!(d.graph.len(), c.size());
        assert_eq!(d.graph.total_weight(), total_weight(&ps));
        assert!(d.graph.is_connected());
        assert!(d.graph.is_spherical(), "Euler characteristic of the dual rotation system");
        for &(id, r) in &d.assignment {
            let p = ps.iter().find(|p| p.id == id).unwrap();
            match d.map.regions[r].kind {
                RegionKind::Island(i) => assert_eq!(i, id),
                RegionKind::Corridor(_) => {
                    assert!(!c.islands.contains(&id));
                    assert_ne!(strictly_inside(p.leftmost(), &d.map.regions[r].loops[0]), Some(false));
                }
            }
        }
    }
}

#[test]
fn two_corridors_sharing_a_spoke_give_one_edge() {
    let (ps, f) = instance(1, 100, 3, Shape::Squares);
    let two = disjoint_polygons(2, 100, 5, Shape::Squares, Weights::Equal).unwrap();
    let c1 = build_cutting(&ps, &f, 2, 0, &CuttingParams::default()).unwrap();
    let d1 = dual_graph(&c1, &ps, &ps).unwrap();
    assert_eq!((d1.graph.len(), d1.graph.edges.len()), (2, 1), "annulus corridor plus island");
    let c2 = build_cutting(&two, &f, 2, 0, &CuttingParams::default()).unwrap();
    let d2 = dual_graph(&c2, &two, &two).unwrap();
    let corridors = c2.decomposition.corridors.len();
    for i in 0..corridors {
        for j in i + 1..corridors {
            let shared: Vec<_> = c2.decomposition.corridors[i]
                .spokes
                .iter()
                .filter(|s| c2.decomposition.corridors[j].spokes.contains(s))
                .collect();
            let edges = d2.graph.edges.iter().filter(|e| (e[0] == i && e[1] == j) || (e[0] == j && e[1] == i)).count();
            assert_eq!(edges, shared.len(), "corridors {i} and {j}");
        }
    }
}

#[test]
fn triangulation_repairs_small_graphs() {
    let tri = PlaneGraph::from_positions(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)], &[(0, 1), (1, 2), (2, 0)], vec![1, 1, 1]);
    assert_eq!(fix_and_triangulate(&tri), tri);
    let looped = PlaneGraph { edges: vec![[0, 0]], rot: vec![vec![0, 1]], weight: vec![5], origin: vec![0] };
    let h = fix_and_triangulate(&looped);
    assert_eq!(h.len(), 3);
    assert!(h.is_triangulation());
    assert_eq!(h.total_weight(), 5);
    // a path: one face of length four around it
    let path = PlaneGraph::from_positions(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)], &[(0, 1), (1, 2)], vec![1, 0, 1]);
    let h = fix_and_triangulate(&path);
    assert!(h.is_triangulation());
    assert!(h.min_degree() >= 3);
}

#[test]
fn triangulated_cutting_duals_pass_structural_checks() {
    for seed in 0..8 {
        let (ps, f) = instance(20 + 10 * seed as usize, 300, seed, if seed % 2 == 0 { Shape::Squares } else { Shape::Convex });
        let c = build_cutting(&ps, &f, 2 + seed % 4, seed, &CuttingParams::default()).unwrap();
        let d = dual_graph(&c, &ps, &ps).unwrap();
        let h = fix_and_triangulate(&d.graph);
        assert!(h.is_simple());
        assert!(h.min_degree() >= 3);
        let faces = h.faces();
        assert!(faces.iter().all(|f| f.len() == 3));
        assert_eq!(faces.len() as i64, 2 - h.len() as i64 + h.edges.len() as i64);
        assert!(h.len() <= 12 * d.graph.len(), "{} vertices from {}", h.len(), d.graph.len());
        assert_eq!(h.total_weight(), d.graph.total_weight());
        for v in 0..d.graph.len() {
            assert_eq!(h.weight[v], d.graph.weight[v]);
        }
    }
}

fn grid(w: usize, h: usize, weight: impl Fn(usize, usize) -> u64) -> (PlaneGraph, Vec<(f64, f64)>) {
    let id = |x: usize, y: usize| y * w + x;
    let mut pos = Vec::new();
    let mut wt = Vec::new();
    for y in 0..h {
        for x in 0..w {
            pos.push((x as f64, y as f64));
            wt.push(weight(x, y));
        }
    }
    let mut edges = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if x + 1 < w {
                edges.push((id(x, y), id(x + 1, y)));
            }
            if y + 1 < h {
                edges.push((id(x, y), id(x, y + 1)));
            }
            if x + 1 < w && y + 1 < h {
                edges.push((id(x, y), id(x + 1, y + 1)));
            }
        }
    }
    (PlaneGraph::from_positions(&pos, &edges, wt), pos)
}

/// Sides recomputed from coordinates: inside the cycle polygon or not.
fn geometric_sides(cycle: &[usize], pos: &[(f64, f64)]) -> Vec<Option<bool>> {
    let ring: Vec<(f64, f64)> = cycle.iter().map(|&v| pos[v]).collect();
    (0..pos.len())
        .map(|v| {
            if cycle.contains(&v) {
                return None;
            }
            let (px, py) = pos[v];
            let mut inside = false;
            for i in 0..ring.len() {
                let (a, b) = (ring[i], ring[(i + 1) % ring.len()]);
                if (a.1 > py) != (b.1 > py) && a.0 + (py - a.1) / (b.1 - a.1) * (b.0 - a.0) > px {
                    inside = !inside;
                }
            }
            Some(inside)
        })
        .collect()
}

#[test]
fn grid_separator_meets_length_and_balance() {
    let (g, pos) = grid(10, 10, |_, _| 1);
    let fixed = fix_and_triangulate(&g);
    let s = cycle_separator(&fixed).unwrap();
    assert!(s.cycle.len() <= 40);
    assert!(s.left_weight <= 75 && s.right_weight <= 75);
    // the grid is already a triangulation apart from its outer face
    let ring_only: Vec<usize> = s.cycle.iter().copied().filter(|&v| v < 100).collect();
    if ring_only.len() == s.cycle.len() {
        let sides = geometric_sides(&s.cycle, &pos);
        let inside: u64 = sides.iter().filter(|x| **x == Some(true)).count() as u64;
        let outside: u64 = sides.iter().filter(|x| **x == Some(false)).count() as u64;
        let mut got = [s.left_weight, s.right_weight];
        got.sort();
        let mut want = [inside, outside];
        want.sort();
        assert_eq!(got, want);
    }
}

#[test]
fn separator_splits_two_clusters_joined_by_a_path() {
    let (g, _) = grid(14, 4, |x, _| if x < 4 || x >= 10 { 1 } else { 0 });
    let fixed = fix_and_triangulate(&g);
    let s = cycle_separator(&fixed).unwrap();
    assert!(s.balanced(fixed.total_weight()));
    let cluster = |v: usize| match v % 14 {
        _ if v >= 56 => None,
        x if x < 4 => Some(0),
        x if x >= 10 => Some(1),
        _ => None,
    };
    for side in [&s.left, &s.right] {
        let mut seen: Vec<_> = side.iter().filter_map(|&v| cluster(v)).collect();
        seen.sort_unstable();
        seen.dedup();
        assert!(seen.len() <= 1, "one side holds vertices of both clusters");
    }
    assert!(s.left_weight > 0 && s.right_weight > 0);
}

#[test]
fn separator_contract_on_cutting_duals() {
    for seed in 0..10 {
        let (ps, f) = instance(10 + 9 * seed as usize, 300, seed, if seed % 2 == 0 { Shape::Squares } else { Shape::Convex });
        let c = build_cutting(&ps, &f, 2 + seed % 5, seed, &CuttingParams::default()).unwrap();
        let d = dual_graph(&c, &ps, &ps).unwrap();
        let h = fix_and_triangulate(&d.graph);
        let s = cycle_separator(&h).unwrap();
        assert!(s.short(h.len()));
        assert!(s.balanced(h.total_weight()));
        let again = split_by_cycle(&h, &s.cycle).unwrap();
        assert_eq!(again, s);
        let mut seen = s.cycle.clone();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), s.cycle.len(), "cycle is simple");
        for i in 0..s.cycle.len() {
            let (a, b) = (s.cycle[i], s.cycle[(i + 1) % s.cycle.len()]);
            assert!(h.neighbors(a).any(|w| w == b));
        }
    }
}

#[test]
fn single_and_paired_regions_trace_their_outline() {
    let (ps, f) = instance(12, 200, 4, Shape::Squares);
    let c = build_cutting(&ps, &f, 3, 1, &CuttingParams::default()).unwrap();
    let d = dual_graph(&c, &ps, &ps).unwrap();
    let corridors = &c.decomposition.corridors;
    for (i, cor) in corridors.iter().enumerate() {
        let t = trace_regions(&d.map, &[i]).unwrap();
        let ring: Vec<Point> = t.ring.iter().map(|x| x.0.clone()).collect();
        if t.diagnostics.is_empty() && cor.hole.is_none() {
            assert_eq!(canonical_ring(&ring), canonical_ring(&cor.boundary), "corridor {i}");
        }
    }
    let mut checked = 0;
    for e in &d.graph.edges {
        let (i, j) = (e[0], e[1]);
        if i == j || i >= corridors.len() || j >= corridors.len() || corridors[i].hole.is_some() || corridors[j].hole.is_some() {
            continue;
        }
        let t = trace_regions(&d.map, &[i, j]).unwrap();
        if !t.diagnostics.is_empty() {
            continue;
        }
        let ring: Vec<Point> = t.ring.iter().map(|x| x.0.clone()).collect();
        let a = signed_area2(&ring) / Rat::int(2);
        if a == &corridors[i].area() + &corridors[j].area() {
            checked += 1;
        }
    }
    assert!(checked > 0);
}

#[test]
fn random_region_sets_encode_and_classify_exactly() {
    let mut traced = 0;
    for seed in 0..12u64 {
        let m = 8 + 5 * seed as usize;
        let (ps, f) = instance(m, 300, seed, if seed % 2 == 0 { Shape::Squares } else { Shape::Convex });
        let c = build_cutting(&ps, &f, 2 + seed % 3, seed, &CuttingParams::default()).unwrap();
        let d = dual_graph(&c, &ps, &ps).unwrap();
        let u = Universe::new(&ps, &f);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = d.graph.len();
        for _ in 0..10 {
            let k = rng.gen_range(1..=n.min(10));
            let set: Vec<usize> = (0..k).map(|_| rng.gen_range(0..n)).collect();
            let sp = trace_separating_polygon(&set, &d, &c, &u, &ps).unwrap();
            traced += 1;
            assert_eq!(decode(&sp.encoding, &u).unwrap(), sp.boundary);
            assert!(sp.classification.intersecting.iter().all(|i| !c.islands.contains(i)));
            check_classification(&sp, &ps);
            let ib = (usize::BITS - (m + 1 - 1).leading_zeros()) as usize;
            let prefix = 2 * (usize::BITS - sp.tokens.len().leading_zeros()) as usize;
            assert!(sp.encoding.len() <= prefix + sp.tokens.len() * (4 * ib + 9));
        }
    }
    assert_eq!(traced, 120);
}

#[test]
fn frame_outline_encodes_as_four_subchains() {
    let (ps, f) = instance(10, 100, 2, Shape::Squares);
    let u = Universe::new(&ps, &f);
    let ring: Vec<(Point, Label)> =
        f.corners().into_iter().map(|p| (p, Label::Chain { site: geomis_core::corridor::FRAME })).collect();
    let tokens = tokenize(&ring, &[], &u).unwrap();
    assert_eq!(tokens.len(), 4);
    assert!(tokens.iter().all(|t| matches!(t, Token::Anchored { .. })));
    let bits = encode(&tokens, &f.corners(), &u).unwrap();
    assert_eq!(decode(&bits, &u).unwrap(), canonical_ring(&f.corners()));
}

#[test]
fn heavy_polygon_short_circuits() {
    let mut ps = disjoint_polygons(10, 100, 1, Shape::Squares, Weights::Equal).unwrap();
    ps[3].weight = 100;
    let cut = cheap_balanced_cut(&ps, &Rect::int(0, 100, 0, 100), 0.5, 1, &CutParams::default()).unwrap();
    assert_eq!(cut, Cut::Heavy(ps[3].id));
}

#[test]
fn cheap_balanced_cut_on_equal_squares() {
    for seed in 0..3 {
        let ps = disjoint_polygons(100, 400, seed, Shape::Squares, Weights::Equal).unwrap();
        let f = Rect::int(0, 400, 0, 400);
        let Cut::Polygon(sp) = cheap_balanced_cut(&ps, &f, 0.5, seed, &CutParams::default()).unwrap() else {
            panic!("no heavy polygon among equal weights");
        };
        // 0.5 / log2(100) * 100 = 7.53
        assert!(sp.cut_weight <= 7);
        assert!(3 * sp.inside_weight <= 200 && 3 * sp.outside_weight <= 200);
        assert!(sp.inside_weight >= 10 && sp.outside_weight >= 10);
        check_classification(&sp, &ps);
        let u = Universe::new(&ps, &f);
        assert_eq!(decode(&sp.encoding, &u).unwrap(), sp.boundary);
        assert!(area(&sp.boundary).is_positive());
    }
}

#[test]
fn small_instances_cut_or_report_heavy() {
    for m in 1..6 {
        let ps = disjoint_polygons(m, 60, m as u64, Shape::Squares, Weights::Equal).unwrap();
        let f = Rect::int(0, 60, 0, 60);
        match cheap_balanced_cut(&ps, &f, 0.5, 7, &CutParams::default()).unwrap() {
            Cut::Heavy(_) => assert!(m <= 1),
            Cut::Polygon(sp) => {
                assert!(m >= 2);
                assert!(is_cheap_balanced(&sp, m as u64, m, 0.5, true));
                check_classification(&sp, &ps);
            }
        }
    }
}
