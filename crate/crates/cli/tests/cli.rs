use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_emanet"))
        .current_dir(dir)
        .args(args)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn gen_writes_each_format() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&run(d, &["gen", "-n", "25", "--seed", "4", "--out", "p.json"])), 0);
    assert_eq!(code(&run(d, &["gen", "-n", "25", "--seed", "4", "--out", "p.csv"])), 0);
    assert_eq!(code(&run(d, &["gen", "-n", "25", "--seed", "4", "--out", "p.node"])), 0);

    let v = json(&d.join("p.json"));
    assert_eq!(v["points"].as_array().unwrap().len(), 25);
    assert_eq!(v["meta"]["generator"], "uniform");
    assert_eq!(v["meta"]["seed"], 4);
    let csv = std::fs::read_to_string(d.join("p.csv")).unwrap();
    assert_eq!(csv.lines().count(), 26);
    // same points in both files
    assert_eq!(csv.lines().nth(1).unwrap(), format!("0,{},{}", v["points"][0]["x"].as_str().unwrap(), v["points"][0]["y"].as_str().unwrap()));
    let node = std::fs::read_to_string(d.join("p.node")).unwrap();
    assert_eq!(node.lines().next().unwrap(), "25 2 0 0");
}

#[test]
fn build_then_measure_and_render() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    run(d, &["gen", "-n", "60", "--seed", "2", "--out", "p.csv"]);
    let out = run(d, &["build", "--in", "p.csv", "--out", "g.json", "--svg", "g.svg"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let g = json(&d.join("g.json"));
    assert_eq!(g["meta"]["algorithm"], "seg");
    assert_eq!(g["meta"]["diagnostics"]["planarity_repairs"], 0);

    let out = run(d, &["metrics", "--in", "g.json"]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["point_count"], 60);
    assert!((report["min_angle_deg"].as_f64().unwrap() - 45.0).abs() < 1e-9);
    assert!(report["max_degree"].as_f64().unwrap() <= 8.0);

    assert_eq!(code(&run(d, &["render", "--in", "g.json", "--out", "r.svg"])), 0);
    let svg = std::fs::read_to_string(d.join("r.svg")).unwrap();
    roxmltree::Document::parse(&svg).unwrap();
    assert_eq!(svg, std::fs::read_to_string(d.join("g.svg")).unwrap());
}

#[test]
fn emanation_grades_and_modes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    run(d, &["gen", "-n", "20", "--out", "p.json"]);
    for grade in ["1", "2"] {
        let out = run(d, &["build", "--in", "p.json", "--alg", "emanation", "--grade", grade, "--out", "m.json"]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
        assert_eq!(json(&d.join("m.json"))["meta"]["grade"].as_u64().unwrap().to_string(), grade);
    }
    let out = run(d, &["build", "--in", "p.json", "--alg", "emanation", "--grade", "3", "--out", "m.json"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("grade 3"));
    let out = run(d, &["build", "--in", "p.json", "--alg", "emanation", "--grade", "3", "--approx", "--out", "m.json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(json(&d.join("m.json"))["meta"]["diagnostics"]["approximate"], true);
    assert_eq!(code(&run(d, &["build", "--in", "p.json", "--grade", "3", "--out", "s.json"])), 2);
}

#[test]
fn input_errors_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("dup.csv"), "id,x,y\n0,1,1\n1,1,1\n").unwrap();
    std::fs::write(d.join("bad.csv"), "id,x,y\n0,1,1\n1,one,1\n").unwrap();
    std::fs::write(d.join("bad.json"), "{\"points\": [").unwrap();
    for args in [
        &["build", "--in", "dup.csv", "--out", "g.json"][..],
        &["build", "--in", "bad.csv", "--out", "g.json"],
        &["build", "--in", "bad.json", "--out", "g.json"],
        &["build", "--in", "missing.json", "--out", "g.json"],
        &["build", "--in", "dup.csv", "--out", "g.json", "--tie", "coin"],
        &["gen", "-n", "0", "--out", "p.json"],
        &["metrics", "--in", "missing.json"],
        &["compare", "--sizes", "10", "--instances", "0", "--out", "t.csv"],
        &["frobnicate"],
    ] {
        let out = run(d, args);
        assert_eq!(code(&out), 2, "{args:?}: {}", stderr(&out));
        assert!(!stderr(&out).is_empty());
    }
    let out = run(d, &["build", "--in", "bad.csv", "--out", "g.json"]);
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));
}

#[test]
fn crossing_mesh_is_written_but_exits_with_3() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    // both diagonals of the unit square
    std::fs::write(d.join("sq.1.node"), "4 2 0 0\n0 0 0\n1 1 0\n2 1 1\n3 0 1\n").unwrap();
    std::fs::write(d.join("sq.1.ele"), "2 3 0\n0 0 1 2\n1 1 2 3\n").unwrap();
    let out = run(d, &["import-triangle", "--in", "sq.1.node", "--out", "g.json"]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    assert!(stderr(&out).contains("planarity"));
    assert_eq!(json(&d.join("g.json"))["edges"].as_array().unwrap().len(), 5);

    std::fs::write(d.join("ok.1.ele"), "2 3 0\n0 0 1 2\n1 0 2 3\n").unwrap();
    let out = run(d, &["import-triangle", "--in", "sq.1.node", "--ele", "ok.1.ele", "--out", "g.json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
}

#[test]
fn triangle_import_marks_steiner_nodes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("p.csv"), "id,x,y\n0,0,0\n1,2,0\n2,0,2\n").unwrap();
    // Triangle numbering from 1, with the hypotenuse midpoint added
    std::fs::write(d.join("m.1.node"), "# refined\n4 2 0 1\n1 0 0 1\n2 2 0 1\n3 0 2 1\n4 1 1 1\n").unwrap();
    std::fs::write(d.join("m.1.ele"), "2 3 0\n1 1 2 4\n2 1 4 3\n").unwrap();
    let out = run(d, &["import-triangle", "--in", "m.1.node", "--points", "p.csv", "--out", "g.json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let g = json(&d.join("g.json"));
    let kinds: Vec<&str> = g["vertices"].as_array().unwrap().iter().map(|v| v["kind"].as_str().unwrap()).collect();
    assert_eq!(kinds, ["original", "original", "original", "steiner"]);
}

#[test]
fn delaunay_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("p.csv"), "id,x,y\n0,0,0\n1,4,0\n2,0,3\n3,4,3.5\n").unwrap();
    assert_eq!(code(&run(d, &["delaunay", "--in", "p.csv", "--out", "g.json"])), 0);
    let g = json(&d.join("g.json"));
    assert_eq!(g["edges"].as_array().unwrap().len(), 5);
    assert_eq!(g["meta"]["algorithm"], "delaunay");
}

#[test]
fn compare_writes_table_and_raw_records() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = run(
        d,
        &["compare", "--sizes", "20", "--instances", "3", "--alg", "seg,delaunay", "--out", "t.csv", "--raw", "r.jsonl"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let table = std::fs::read_to_string(d.join("t.csv")).unwrap();
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(
        lines[0],
        "configuration,point_count,data_set,steiner_points,max_degree,avg_degree,edge_count,max_edge_len,avg_edge_len,total_edge_len,min_angle_deg,spanning_ratio"
    );
    assert!(lines[1].starts_with("seg,20,uniform,"));
    assert!(lines[2].starts_with("delaunay,20,uniform,0.000000,"));
    let raw = std::fs::read_to_string(d.join("r.jsonl")).unwrap();
    assert_eq!(raw.lines().count(), 6);
    for line in raw.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["report"]["point_count"], 20);
    }
}

#[test]
fn compare_from_config_file_with_triangle_meshes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let config = r#"{"sizes": [12], "instances_per_size": 2, "seed": 5, "generator": "clustered",
        "algorithms": ["delaunay", "triangle-import:meshes"]}"#;
    std::fs::write(d.join("exp.json"), config).unwrap();
    let out = run(d, &["compare", "--in", "exp.json", "--node-dir", "meshes"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(d.join("meshes/n12-0.node").exists() && d.join("meshes/n12-1.node").exists());

    // no Triangle output yet: both import instances are skipped
    let out = run(d, &["compare", "--in", "exp.json", "--out", "t.csv"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stderr(&out).contains("2 instance(s) skipped"), "{}", stderr(&out));
    let table = std::fs::read_to_string(d.join("t.csv")).unwrap();
    assert_eq!(table.lines().count(), 2);
    assert!(table.lines().nth(1).unwrap().starts_with("delaunay,12,clustered,"));
}
