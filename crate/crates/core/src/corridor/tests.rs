use super::*;

fn diamond(id: Id, cx: i64, cy: i64, a: i64, b: i64) -> WeightedPolygon {
    let v = vec![Point::int(cx, cy - a), Point::int(cx + b, cy), Point::int(cx, cy + a), Point::int(cx - b, cy)];
    WeightedPolygon::new(id, v, 1).unwrap()
}

#[test]
fn single_polygon_axis_is_loop_plus_corner_tendrils() {
    let f = Rect::int(0, 40, 0, 40);
    let one = vec![diamond(0, 20, 21, 3, 2)];
    let ax = medial_axis(&one, &f).unwrap();
    let ends: Vec<Point> = ax.vertices().into_iter().filter(|(_, d)| *d == 1).map(|(p, _)| p).collect();
    assert_eq!(ends, vec![Point::int(0, 0), Point::int(0, 40), Point::int(40, 0), Point::int(40, 40)]);
    let red = reduce(&ax);
    let deg = red.degrees();
    // a single cycle: every node has degree two, so V = E
    assert!(deg.values().all(|&d| d == 2));
    assert_eq!(deg.len(), red.pieces.len());
    assert!(red.pieces.iter().all(|p| p.left != p.right));
    let cd = build_corridors(&one, &f).unwrap();
    assert_eq!(cd.corridors.len(), 1);
    let c = &cd.corridors[0];
    assert!(c.hole.is_some() && c.spokes.is_empty());
    assert_eq!(c.area() + one[0].area(), Rat::int(1600));
}

#[test]
fn mirrored_pair_has_midline_bisector() {
    let f = Rect::int(0, 40, 0, 40);
    let ps = vec![diamond(0, 12, 21, 3, 2), diamond(1, 28, 21, 3, 2)];
    let ax = reduce(&medial_axis(&ps, &f).unwrap());
    let mid = ax.canonical().into_iter().find(|p| {
        p.a.x == Rat::int(20) && p.b.x == Rat::int(20) && p.left != FRAME && p.right != FRAME
    });
    let mid = mid.expect("vertical bisector on x = 20");
    assert!(mid.b.y > Rat::int(21) && mid.a.y < Rat::int(21));
}

#[test]
fn reduce_removes_tendril_and_is_idempotent() {
    let p = |x, y| Point::int(x, y);
    let piece = |a, b, l, r| AxisPiece { a, b, left: l, right: r };
    let tri = vec![
        piece(p(0, 0), p(4, 0), 0, 1),
        piece(p(4, 0), p(2, 3), 0, 2),
        piece(p(2, 3), p(0, 0), 0, 3),
        piece(p(2, 3), p(2, 6), 0, 0),
    ];
    let ax = MedialAxis { pieces: tri.clone() };
    let r = reduce(&ax);
    assert_eq!(r.pieces, tri[..3].to_vec());
    assert_eq!(reduce(&r), r);
}

#[test]
fn walk_wraps_around() {
    let sq = vec![Point::int(0, 0), Point::int(4, 0), Point::int(4, 4), Point::int(0, 4)];
    let w = walk(&sq, &Point::int(2, 0), &Point::int(1, 0), false).unwrap();
    assert_eq!(w.len(), 6);
    let w = walk(&sq, &Point::int(1, 0), &Point::int(3, 0), false).unwrap();
    assert_eq!(w, vec![Point::int(1, 0), Point::int(3, 0)]);
    let w = walk(&sq, &Point::int(4, 0), &Point::int(4, 0), false).unwrap();
    assert_eq!(w, vec![Point::int(4, 0)]);
}

#[test]
fn rejects_bad_inputs() {
    let f = Rect::int(0, 40, 0, 40);
    let over = vec![diamond(0, 20, 21, 3, 2), diamond(1, 21, 21, 3, 2)];
    assert_eq!(medial_axis(&over, &f), Err(Error::InputsNotDisjoint(0, 1)));
    let axis_parallel =
        vec![WeightedPolygon::new(0, vec![Point::int(5, 5), Point::int(9, 5), Point::int(9, 9), Point::int(5, 9)], 1).unwrap()];
    assert!(matches!(medial_axis(&axis_parallel, &f), Err(Error::GeneralPositionViolated(_))));
    assert_eq!(medial_axis(&[diamond(3, 1, 20, 3, 2)], &f), Err(Error::OutsideFrame(3)));
}
