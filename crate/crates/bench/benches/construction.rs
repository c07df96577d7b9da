use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use emanet::{
    build_emanation, build_seg, delaunay, generate_points, spanning_ratio, Coord, NeighborQueries, PointModel,
    SegConfig, TiePolicy,
};

fn seg_queries(c: &mut Criterion) {
    let mut group = c.benchmark_group("seg");
    group.sample_size(10);
    for n in [1_000usize, 4_000, 16_000] {
        let points = generate_points(n, 7, PointModel::Uniform).unwrap();
        group.throughput(Throughput::Elements(n as u64));
        for (name, queries) in [("range-tree", NeighborQueries::RangeTree), ("naive", NeighborQueries::Naive)] {
            if queries == NeighborQueries::Naive && n > 4_000 {
                continue;
            }
            let config = SegConfig {
                queries,
                ..SegConfig::default()
            };
            group.bench_with_input(BenchmarkId::new(name, n), &points, |b, pts| {
                b.iter(|| build_seg(pts, &config).unwrap())
            });
        }
    }
    group.finish();
}

fn emanation(c: &mut Criterion) {
    let mut group = c.benchmark_group("emanation");
    group.sample_size(10);
    let margin = Coord::from_int(1);
    for n in [100usize, 400, 1_600] {
        let points = generate_points(n, 7, PointModel::Uniform).unwrap();
        for grade in [1, 2] {
            group.bench_with_input(BenchmarkId::new(format!("grade{grade}"), n), &points, |b, pts| {
                b.iter(|| build_emanation(pts, grade, &margin, TiePolicy::DeterministicLex).unwrap())
            });
        }
    }
    group.finish();
}

fn baseline(c: &mut Criterion) {
    let mut group = c.benchmark_group("baseline");
    group.sample_size(10);
    for n in [100usize, 1_000, 4_000] {
        let points = generate_points(n, 7, PointModel::Uniform).unwrap();
        group.bench_with_input(BenchmarkId::new("delaunay", n), &points, |b, pts| b.iter(|| delaunay(pts).unwrap()));
    }
    let points = generate_points(500, 7, PointModel::Uniform).unwrap();
    let seg = build_seg(&points, &SegConfig::default()).unwrap();
    group.bench_function("spanning-ratio/seg-500", |b| b.iter(|| spanning_ratio(&seg)));
    group.finish();
}

criterion_group!(benches, seg_queries, emanation, baseline);
criterion_main!(benches);
