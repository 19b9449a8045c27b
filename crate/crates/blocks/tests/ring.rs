use geomis_blocks::dp::{ring_split, RingParams, RingSplit};
use geomis_blocks::grid::{build_grid, Grid, Item};
use geomis_blocks::region::{Region, ShapeKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn annulus() -> (Grid, Region) {
    let g = build_grid(12, 1.0 / 3.0).unwrap();
    let ring = Region::rect(12, 1, 11, 1, 11).restrict(|x, y| !((3..9).contains(&x) && (3..9).contains(&y)));
    (g, ring)
}

fn random_blocks(r: &mut ChaCha8Rng, ring: &Region) -> Vec<Item> {
    let mut out: Vec<Item> = Vec::new();
    for _ in 0..300 {
        let len = r.gen_range(5..=10);
        let (w, h) = if r.gen_bool(0.5) { (len, 1) } else { (1, len) };
        let (x1, y1) = (r.gen_range(0..=12 - w), r.gen_range(0..=12 - h));
        let b = Item::new(out.len() as u32, x1, x1 + w, y1, y1 + h, r.gen_range(1..9));
        if ring.contains_item(&b) && !out.iter().any(|o| o.overlaps(&b)) {
            out.push(b);
        }
    }
    out
}

fn cells(r: &Region) -> Vec<(i64, i64)> {
    let mut v: Vec<_> = r.cells().collect();
    v.sort();
    v
}

/// Checks the contract of each outcome; returns its letter.
fn check(g: &Grid, ring: &Region, blocks: &[Item], s: &RingSplit) -> char {
    let n = g.n;
    match s {
        RingSplit::TrailRewrite { trail } => {
            let t = trail.region(n);
            assert_eq!(cells(&t), cells(ring));
            assert_eq!(t.shape(g).kind, ShapeKind::Trail);
            assert!(blocks.iter().all(|b| t.contains_item(b)));
            'A'
        }
        RingSplit::TwoPieces { pieces } => {
            let (a, b) = (pieces[0].region(n), pieces[1].region(n));
            assert!(a.is_disjoint(&b));
            assert_eq!(cells(&a.union(&b)), cells(ring));
            for p in [&a, &b] {
                assert_ne!(p.shape(g).kind, ShapeKind::Other);
            }
            for blk in blocks {
                assert_eq!([&a, &b].iter().filter(|p| p.contains_item(blk)).count(), 1);
            }
            'B'
        }
        RingSplit::Ladder { trails, cut, cut_weight, total_weight, stride, .. } => {
            assert_eq!(*stride, 16);
            assert!(8 * cut_weight <= *total_weight);
            let ts: Vec<Region> = trails.iter().map(|t| t.region(n)).collect();
            let mut all: Vec<(i64, i64)> = ts.iter().flat_map(cells).collect();
            all.sort();
            assert_eq!(all, cells(ring));
            for t in &ts {
                assert_eq!(t.shape(g).kind, ShapeKind::Trail);
            }
            for blk in blocks {
                let held = ts.iter().filter(|t| t.contains_item(blk)).count();
                assert_eq!(held, usize::from(!cut.contains(&blk.id)));
            }
            'C'
        }
    }
}

#[test]
fn ring_without_blocks_is_cut_along_a_grid_edge() {
    let (g, ring) = annulus();
    assert_eq!(ring.shape(&g).kind, ShapeKind::Ring);
    let s = ring_split(&g, &ring, &[], 0.5, &RingParams::default()).unwrap();
    assert_eq!(check(&g, &ring, &[], &s), 'A');
}

#[test]
fn blocked_ring_forced_to_a_ladder() {
    let (g, ring) = annulus();
    let b = |id, x1, x2, y1, y2, w| Item::new(id, x1, x2, y1, y2, w);
    let blocks = vec![
        b(0, 4, 9, 2, 3, 4),
        b(1, 9, 10, 1, 10, 5),
        b(2, 1, 8, 1, 2, 1),
        b(3, 6, 11, 10, 11, 5),
        b(4, 1, 2, 3, 10, 6),
        b(5, 2, 3, 4, 9, 2),
        b(6, 10, 11, 1, 9, 1),
        b(7, 3, 9, 9, 10, 7),
        b(8, 1, 6, 10, 11, 6),
    ];
    // every grid-edge crossing of the ring meets a block
    let s = ring_split(&g, &ring, &blocks, 0.5, &RingParams::default()).unwrap();
    assert_eq!(check(&g, &ring, &blocks, &s), 'A');
    let s = ring_split(&g, &ring, &blocks, 0.5, &RingParams { trail_factor: 0.0 }).unwrap();
    assert_eq!(check(&g, &ring, &blocks, &s), 'C');
}

#[test]
fn random_rings_meet_every_outcome_contract() {
    let (g, ring) = annulus();
    let mut r = ChaCha8Rng::seed_from_u64(1);
    let mut seen = std::collections::BTreeSet::new();
    for _ in 0..300 {
        let blocks = random_blocks(&mut r, &ring);
        for factor in [2.0, 0.0] {
            let s = ring_split(&g, &ring, &blocks, 0.5, &RingParams { trail_factor: factor }).unwrap();
            seen.insert(check(&g, &ring, &blocks, &s));
        }
    }
    assert_eq!(seen.into_iter().collect::<String>(), "ABC");
}

#[test]
fn rejects_non_rings_and_dependent_blocks() {
    let (g, ring) = annulus();
    let trail = Region::rect(12, 0, 12, 0, 2);
    assert!(ring_split(&g, &trail, &[], 0.5, &RingParams::default()).is_err());
    let a = Item::new(0, 1, 7, 1, 2, 1);
    let b = Item::new(1, 2, 8, 1, 2, 1);
    assert!(ring_split(&g, &ring, &[a, b], 0.5, &RingParams::default()).is_err());
}
