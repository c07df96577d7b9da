use emanet::{
    build_emanation, build_seg, check_planarity, delaunay, generate_points, spanning_ratio, Coord, Point, PointModel,
    SegConfig, TiePolicy, VertexKind,
};
use proptest::prelude::*;

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Number of points on the convex hull boundary, collinear ones included.
fn hull_boundary_count(pts: &[(i64, i64)]) -> usize {
    let mut s = pts.to_vec();
    s.sort_unstable();
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for pass in [s.clone(), s.iter().rev().copied().collect()] {
        let base = hull.len();
        for p in pass {
            while hull.len() >= base + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    let on = |p: (i64, i64), a: (i64, i64), b: (i64, i64)| {
        cross(a, b, p) == 0 && a.0.min(b.0) <= p.0 && p.0 <= a.0.max(b.0) && a.1.min(b.1) <= p.1 && p.1 <= a.1.max(b.1)
    };
    pts.iter()
        .filter(|&&p| (0..hull.len()).any(|i| on(p, hull[i], hull[(i + 1) % hull.len()])))
        .count()
}

fn milli(points: &[Point]) -> Vec<(i64, i64)> {
    let m = |c: &Coord| (c.to_f64() * 1000.0).round() as i64;
    points.iter().map(|p| (m(&p.pos.x), m(&p.pos.y))).collect()
}

#[test]
fn delaunay_edge_count_matches_euler() {
    for seed in 0..20 {
        let points = generate_points(150, seed, PointModel::Uniform).unwrap();
        let h = hull_boundary_count(&milli(&points));
        let g = delaunay(&points).unwrap();
        assert_eq!(g.edge_count(), 3 * points.len() - 3 - h, "seed {seed}");
        assert!(check_planarity(&g).is_plane());
    }
}

#[test]
fn original_vertices_keep_input_order() {
    let mut points = generate_points(80, 3, PointModel::Clustered).unwrap();
    points.reverse();
    let graphs = [
        build_seg(&points, &SegConfig::default()).unwrap(),
        build_emanation(&points, 2, &Coord::from_int(1), TiePolicy::DeterministicLex).unwrap(),
        delaunay(&points).unwrap(),
    ];
    for g in &graphs {
        for (i, p) in points.iter().enumerate() {
            assert_eq!(g.vertices[i].pos, p.pos);
            assert_eq!(g.vertices[i].kind, VertexKind::Original);
        }
        assert!(g.vertices[points.len()..].iter().all(|v| v.kind != VertexKind::Original));
    }
}

fn small_sets() -> impl Strategy<Value = Vec<Point>> {
    prop::collection::btree_set((0i64..40, 0i64..40), 2..25).prop_map(|s| {
        s.into_iter()
            .enumerate()
            .map(|(i, (x, y))| Point::from_ints(i as u32, x, y))
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn seg_is_plane_connected_and_sparse(points in small_sets()) {
        let g = build_seg(&points, &SegConfig::default()).unwrap();
        prop_assert_eq!(check_planarity(&g).proper_crossings(), 0);
        prop_assert!(spanning_ratio(&g).0.is_finite());
        prop_assert!(g.degrees().into_iter().max().unwrap() <= 8);
        prop_assert!(g.count_kind(VertexKind::Steiner) <= 4 * points.len());
    }

    #[test]
    fn seg_is_no_denser_than_its_emanation_graph(points in small_sets()) {
        let seg = build_seg(&points, &SegConfig::default()).unwrap();
        let m2 = build_emanation(&points, 2, &Coord::from_int(1), TiePolicy::DeterministicLex).unwrap();
        prop_assert!(seg.count_kind(VertexKind::Steiner) <= m2.count_kind(VertexKind::Steiner));
    }
}
