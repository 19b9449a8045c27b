use geomis_blocks::dp::{exact_in, trail_dp, trail_split};
use geomis_blocks::grid::{build_grid, pairwise_disjoint, Grid, Item};
use geomis_blocks::region::{Region, ShapeKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random union of up to three rectangles that is a trail of at most `k`
/// corners.
fn random_trail(r: &mut ChaCha8Rng, g: &Grid, k: usize) -> Region {
    loop {
        let n = g.n;
        let mut reg = Region::empty(n);
        for _ in 0..r.gen_range(1..=3) {
            let (x1, y1) = (r.gen_range(0..n), r.gen_range(0..n));
            let (x2, y2) = (r.gen_range(x1 + 1..=n), r.gen_range(y1 + 1..=n));
            reg = reg.union(&Region::rect(n, x1, x2, y1, y2));
        }
        let s = reg.shape(g);
        if s.kind == ShapeKind::Trail && s.corners <= k && reg.len() >= 4 {
            return reg;
        }
    }
}

/// Up to `m` random blocks inside the trail.
fn random_blocks(r: &mut ChaCha8Rng, g: &Grid, trail: &Region, m: usize) -> Vec<Item> {
    let mut out = Vec::new();
    for _ in 0..400 {
        if out.len() == m {
            break;
        }
        let len = r.gen_range(g.big + 1..=g.n);
        let horizontal = r.gen_bool(0.5);
        let (w, h) = if horizontal { (len, 1) } else { (1, len) };
        let x1 = r.gen_range(0..=g.n - w);
        let y1 = r.gen_range(0..=g.n - h);
        let b = Item::new(out.len() as u32, x1, x1 + w, y1, y1 + h, r.gen_range(1..=9));
        if trail.contains_item(&b) && !out.iter().any(|o: &Item| (o.x1, o.x2, o.y1, o.y2) == (b.x1, b.x2, b.y1, b.y2)) {
            out.push(b);
        }
    }
    out
}

#[test]
fn trail_dp_matches_brute_force() {
    let g = build_grid(6, 0.5).unwrap();
    let mut r = ChaCha8Rng::seed_from_u64(5);
    let mut nontrivial = 0;
    for case in 0..100 {
        let t = random_trail(&mut r, &g, 8);
        let m = r.gen_range(2..=6);
        let blocks = random_blocks(&mut r, &g, &t, m);
        let dp = trail_dp(g, 8, &blocks, &t).unwrap();
        let exact = exact_in(&t, &blocks).unwrap();
        assert_eq!(dp.weight, exact.weight, "case {case}: {:?} {:?}", t.canonical(), blocks);
        if exact.ids.len() >= 2 && !pairwise_disjoint(&blocks) {
            nontrivial += 1;
        }
    }
    assert!(nontrivial >= 15, "only {nontrivial} cases needed a split");
}

#[test]
fn trail_split_keeps_blocks_whole() {
    let g = build_grid(6, 0.5).unwrap();
    let mut r = ChaCha8Rng::seed_from_u64(9);
    let mut done = 0;
    for _ in 0..200 {
        let t = random_trail(&mut r, &g, 8);
        let all = random_blocks(&mut r, &g, &t, 6);
        let o: Vec<Item> = {
            let v = exact_in(&t, &all).unwrap();
            all.iter().copied().filter(|b| v.ids.contains(&b.id)).collect()
        };
        if o.len() < 2 {
            continue;
        }
        let (a, b) = trail_split(&g, &t, &o, 8).unwrap();
        assert!(a.is_disjoint(&b));
        assert_eq!(a.union(&b).cells().collect::<Vec<_>>(), t.cells().collect::<Vec<_>>());
        for p in [&a, &b] {
            let s = p.shape(&g);
            assert_eq!(s.kind, ShapeKind::Trail);
            assert!(s.corners <= 8);
        }
        for blk in &o {
            assert_eq!([&a, &b].iter().filter(|p| p.contains_item(blk)).count(), 1);
        }
        done += 1;
    }
    assert!(done >= 20);
}
