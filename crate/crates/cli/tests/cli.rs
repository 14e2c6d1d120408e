use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;
use tspgap::instances::parse_instance;
use tspgap::reduction::parse_triangulation;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tspgaplab"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn tspgaplab")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = run(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn value<'a>(report: &'a str, key: &str) -> &'a str {
    report
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .unwrap_or_else(|| panic!("no {key} in\n{report}"))
}

fn stable(report: &str) -> String {
    report
        .lines()
        .filter(|l| !l.starts_with("elapsed_ms:") && !l.starts_with("threads:"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

fn unique5(dir: &TempDir) -> PathBuf {
    ok(
        dir.path(),
        &["gen", "--kind", "unique", "--n", "5", "--out", "u5.gap"],
    );
    dir.path().join("u5.gap")
}

#[test]
fn gen_then_solve_unique() {
    let dir = TempDir::new().unwrap();
    unique5(&dir);
    let inst = parse_instance(&read(dir.path(), "u5.gap")).unwrap();
    assert_eq!(inst.n(), 5);
    let rep = ok(dir.path(), &["solve", "u5.gap", "--csv", "s.csv"]);
    assert_eq!(value(&rep, "distinct_costs"), "true");
    assert_eq!(value(&rep, "num_opt_tours"), "1");
    assert_eq!(value(&rep, "cycles_evaluated"), "24");
    assert_eq!(value(&rep, "opt_cost"), "972");
    assert_eq!(read(dir.path(), "s.csv"), "tour,cost\n1 3 4 2 5,972\n");
}

#[test]
fn gen_without_out_prints_instance() {
    let dir = TempDir::new().unwrap();
    let text = ok(
        dir.path(),
        &["gen", "--kind", "random-gap", "--n", "4", "--seed", "9"],
    );
    assert!(text.starts_with("gap 4\n"));
    assert_eq!(parse_instance(&text).unwrap().n(), 4);
}

#[test]
fn audit_finds_violations() {
    let dir = TempDir::new().unwrap();
    unique5(&dir);
    let rep = ok(dir.path(), &["audit", "u5.gap", "--csv", "a.csv"]);
    assert!(value(&rep, "violations").parse::<u64>().unwrap() > 0);
    let csv = read(dir.path(), "a.csv");
    assert!(csv.starts_with("i,k,j\n2,1,3\n"));
}

#[test]
fn missing_file_is_reported() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["solve", "missing.gap"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("file not found"), "{err}");
    assert_eq!(err.lines().count(), 1);
}

#[test]
fn distinct_exit_codes() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));

    std::fs::write(
        dir.path().join("bad.gap"),
        "gap 3\n1 2 3\n4 inf 6\n7 8 inf\n",
    )
    .unwrap();
    let out = run(dir.path(), &["solve", "bad.gap"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("diagonal must be inf"));

    ok(
        dir.path(),
        &["gen", "--kind", "unique", "--n", "13", "--out", "u13.gap"],
    );
    let out = run(dir.path(), &["solve", "u13.gap"]);
    assert_eq!(out.status.code(), Some(5));
    assert!(String::from_utf8_lossy(&out.stderr).contains("guard"));
}

#[test]
fn reduce_writes_triangulation_and_svg() {
    let dir = TempDir::new().unwrap();
    ok(
        dir.path(),
        &[
            "gen",
            "--kind",
            "random-e2d",
            "--n",
            "8",
            "--seed",
            "3",
            "--out",
            "e8.e2d",
        ],
    );
    let rep = ok(
        dir.path(),
        &[
            "reduce", "e8.e2d", "--tri", "t.tri", "--svg", "t.svg", "--csv", "t.csv",
        ],
    );
    assert_eq!(value(&rep, "contained"), "true");
    assert_eq!(value(&rep, "optimum_preserved"), "true");
    let tr = parse_triangulation(&read(dir.path(), "t.tri")).unwrap();
    assert_eq!(
        tr.edge_count().to_string(),
        value(&rep, "triangulation_edges")
    );
    assert!(read(dir.path(), "t.svg").contains("<svg"));
    assert_eq!(
        read(dir.path(), "t.csv").lines().count(),
        tr.edge_count() + 1
    );

    // The same triangulation as a mask gives the same optimum.
    let solved = ok(dir.path(), &["solve", "e8.e2d", "--mask", "t.tri"]);
    assert_eq!(value(&solved, "opt_cost"), value(&rep, "full_opt_cost"));

    let dl = ok(dir.path(), &["reduce", "e8.e2d", "--method", "delaunay"]);
    assert_eq!(value(&dl, "method"), "delaunay");
}

#[test]
fn reduce_rejects_gap_instances() {
    let dir = TempDir::new().unwrap();
    unique5(&dir);
    let out = run(dir.path(), &["reduce", "u5.gap"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a Euclidean"));
}

#[test]
fn scm_outputs_are_byte_deterministic() {
    let dir = TempDir::new().unwrap();
    ok(
        dir.path(),
        &[
            "gen",
            "--kind",
            "random-e2d",
            "--n",
            "8",
            "--seed",
            "3",
            "--out",
            "e8.e2d",
        ],
    );
    for tag in ["a", "b"] {
        ok(
            dir.path(),
            &[
                "scm",
                "e8.e2d",
                "--ppm",
                &format!("{tag}.ppm"),
                "--csv",
                &format!("{tag}.csv"),
            ],
        );
    }
    assert_eq!(read(dir.path(), "a.ppm"), read(dir.path(), "b.ppm"));
    assert_eq!(read(dir.path(), "a.csv"), read(dir.path(), "b.csv"));
    let ppm = read(dir.path(), "a.ppm");
    assert!(ppm.starts_with("P3\n7 8\n255\n"));
    assert!(ppm.lines().all(|l| l.len() <= 70));
    assert!(read(dir.path(), "a.csv").starts_with("vertex,rank,neighbor,cost,tag\n"));
}

#[test]
fn sample_records_seed_and_repeats() {
    let dir = TempDir::new().unwrap();
    unique5(&dir);
    let args = [
        "sample", "u5.gap", "--k", "20000", "--seed", "11", "--csv", "c.csv",
    ];
    let a = ok(dir.path(), &args);
    let csv = read(dir.path(), "c.csv");
    let b = ok(dir.path(), &args);
    assert_eq!(stable(&a), stable(&b));
    assert_eq!(read(dir.path(), "c.csv"), csv);
    assert_eq!(value(&a, "seeds"), "11");
    let total: u64 = csv
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 20000);
}

#[test]
fn compose_writes_composition() {
    let dir = TempDir::new().unwrap();
    let rep = ok(dir.path(), &["compose", "--seed", "2", "--out", "c.gap"]);
    assert_eq!(value(&rep, "edges"), "56");
    assert_eq!(value(&rep, "inherited_edges"), "24");
    assert_eq!(value(&rep, "random_edges"), "32");
    assert_eq!(value(&rep, "seeds"), "2");
    let inst = parse_instance(&read(dir.path(), "c.gap")).unwrap();
    assert_eq!(inst.n(), 8);
    assert!(inst.provenance.unwrap().contains("fill seed=2"));

    let out = run(dir.path(), &["compose", "--lo", "2", "--hi", "1"]);
    assert!(!out.status.success());
}

#[test]
fn compose_from_files() {
    let dir = TempDir::new().unwrap();
    ok(
        dir.path(),
        &[
            "gen",
            "--kind",
            "random-e2d",
            "--n",
            "4",
            "--seed",
            "1",
            "--out",
            "a.e2d",
        ],
    );
    ok(
        dir.path(),
        &["gen", "--kind", "unique", "--n", "3", "--out", "b.gap"],
    );
    ok(
        dir.path(),
        &[
            "compose", "--a", "a.e2d", "--b", "b.gap", "--hi", "5", "--out", "c.gap",
        ],
    );
    let cm = parse_instance(&read(dir.path(), "c.gap"))
        .unwrap()
        .cost_matrix();
    assert_eq!(cm.n(), 7);
    assert_eq!(cm.get_f64(4, 5), 1.0);
}

#[test]
fn sweeps_run_and_emit_csv() {
    let dir = TempDir::new().unwrap();
    let p = dir.path();
    let rep = ok(
        p,
        &[
            "sweep",
            "containment",
            "--n",
            "6",
            "--count",
            "10",
            "--csv",
            "c.csv",
        ],
    );
    assert_eq!(value(&rep, "runs"), "10");
    assert_eq!(read(p, "c.csv").lines().count(), 11);

    let rep = ok(
        p,
        &[
            "sweep",
            "preservation",
            "--count",
            "30",
            "--archive",
            "w.gap",
            "--csv",
            "p.csv",
        ],
    );
    assert_eq!(value(&rep, "seeds"), "0..=29 (30 seeds)");
    assert!(
        read(p, "p.csv").starts_with("seed,composed_opt_cost,sub_preserved,triangle_violations\n")
    );
    if value(&rep, "first_non_preserved_seed") != "none" {
        assert_eq!(parse_instance(&read(p, "w.gap")).unwrap().n(), 8);
    }

    let rep = ok(
        p,
        &["sweep", "monotonicity", "--kind", "unique", "--n", "3"],
    );
    assert!(rep.contains("(2 3) costs 6 > (2 1 3) costs 5"));

    let rep = ok(p, &["sweep", "bounds", "--n", "10"]);
    assert!(rep.contains("p_j: 5/18144"));

    let rep = ok(p, &["sweep", "coincidence", "--n", "6", "--csv", "k.csv"]);
    assert!(rep.contains("n=6: tours 120 max_coincident_edges 3"));
    assert_eq!(read(p, "k.csv").lines().last().unwrap(), "6,120,3,3");
}

#[test]
fn report_files_repeat_modulo_runtime() {
    let dir = TempDir::new().unwrap();
    unique5(&dir);
    ok(dir.path(), &["solve", "u5.gap", "--out", "r1.txt"]);
    ok(
        dir.path(),
        &["solve", "u5.gap", "--out", "r2.txt", "--threads", "3"],
    );
    let (a, b) = (read(dir.path(), "r1.txt"), read(dir.path(), "r2.txt"));
    assert!(a.contains("elapsed_ms: "));
    assert_eq!(
        stable(&a).replace("r1.txt", "rX"),
        stable(&b).replace("r2.txt", "rX")
    );
}
