use std::process::{Command, Output};

fn qem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qem"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(args: &[&str]) -> i32 {
    qem(args).status.code().unwrap()
}

#[test]
fn solve_su2_steady() {
    let o = qem(&["solve", "--case", "SU2_R0", "--p", "0"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("a0 = 2\n"), "{s}");
    assert!(s.contains("lambda = 0\n"), "{s}");
    assert!(s.contains("nontrivial"), "{s}");
}

#[test]
fn solve_json_has_exact_strings() {
    let o = qem(&["solve", "--case", "SPK_UK(k=2)", "--a1", "0.5", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["p"], "1/2");
    assert_eq!(v["a_k"][0], "2/1");
    assert_eq!(v["lambda"], "1/4");
}

#[test]
fn interval_e6() {
    let o = qem(&["interval", "--case", "E6_SO10SO2"]);
    assert_eq!(stdout(&o), "(17/31, 1)\n");
    let o = qem(&["interval", "--case", "SUK1_S", "--k", "3"]);
    assert_eq!(stdout(&o), "empty\n");
}

#[test]
fn certify_sp2() {
    let o = qem(&[
        "certify", "--case", "SPK_UK", "--k", "2", "--a1", "1/2", "--m", "2", "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], true);
    assert!((v["lambda_fit"].as_f64().unwrap() - 0.25).abs() < 1e-10);
}

#[test]
fn certify_tolerance_failure_exits_one() {
    assert_eq!(
        code(&["certify", "--case", "SPK_UK", "--k", "2", "--a1", "1/2", "--m", "2", "--tol", "0"]),
        1
    );
}

#[test]
fn dual_certificate() {
    let o = qem(&[
        "certify",
        "--case",
        "SPK_UK(k=2)",
        "--a1",
        "-1",
        "--m",
        "2",
        "--dual",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["signature"]["positive"], 1);
    assert_eq!(v["signature"]["negative"], 9);
}

#[test]
fn exit_code_matrix() {
    let cases: &[(&[&str], i32)] = &[
        (&["catalog"], 0),
        (&["catalog", "--max-rank", "3", "--json"], 0),
        (&["checks", "--case", "SO2K_UK", "--k", "3"], 0),
        (&["solve", "--case", "E8_TABLE2"], 0),
        (&["solve", "--case", "NOPE", "--p", "0"], 2),
        (&["solve", "--case", "SU2_R0", "--p", "1/0"], 2),
        (&["solve", "--case", "SU2_R0", "--p", "abc"], 2),
        (&["solve", "--case", "SU2_R0", "--a1", "1"], 2),
        (&["solve", "--case", "SPK_UK", "--a1", "1"], 2),
        (&["solve", "--case", "SPK_UK", "--k", "1", "--a1", "1"], 2),
        (
            &["certify", "--case", "E6_SO10SO2", "--a1", "3/5", "--m", "1"],
            2,
        ),
        (
            &[
                "certify", "--case", "SPK_UK", "--k", "2", "--a1", "1/2", "--m", "0",
            ],
            2,
        ),
        (&["interval", "--case", "SU2_R0"], 2),
        (&["report"], 2),
        (&["frobnicate"], 2),
    ];
    for (args, expected) in cases {
        let o = qem(args);
        assert_eq!(o.status.code(), Some(*expected), "{args:?}");
        if *expected == 2 {
            let err = String::from_utf8_lossy(&o.stderr);
            assert!(!err.trim().is_empty(), "{args:?}");
        }
    }
}

#[test]
fn input_errors_are_one_line() {
    let o = qem(&["solve", "--case", "NOPE", "--p", "0"]);
    let err = String::from_utf8(o.stderr).unwrap();
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with("error:"));
}

#[test]
fn csv_interval_table() {
    let o = qem(&["report", "--all", "--format", "csv"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("case,n,s1,c1,lo,hi,empty"));
    assert!(s.contains("SPK_UK(k=2),6,3,1/3,2/7,1/1,false"));
    assert!(s.contains("E7_E6SO2,54,78,2/3,28/53,1/1,false"));
    assert!(s.contains("SUK1_S(k=2),4,3,2/3,,,true"));
    assert!(lines.all(|l| l.split(',').count() == 7));
}

#[test]
fn report_is_deterministic_and_complete() {
    let dir = std::env::temp_dir().join(format!("qem-report-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p1 = dir.join("a.json");
    let p2 = dir.join("b.json");
    let args = |p: &std::path::Path| {
        vec![
            "report".to_string(),
            "--all".into(),
            "--max-rank".into(),
            "4".into(),
            "--out".into(),
            p.display().to_string(),
        ]
    };
    let a1 = args(&p1);
    let a2 = args(&p2);
    assert_eq!(code(&a1.iter().map(String::as_str).collect::<Vec<_>>()), 0);
    assert_eq!(code(&a2.iter().map(String::as_str).collect::<Vec<_>>()), 0);
    let t1 = std::fs::read_to_string(&p1).unwrap();
    let t2 = std::fs::read_to_string(&p2).unwrap();
    // the command echo names the output path; everything else must agree
    let strip = |t: &str| {
        t.lines()
            .filter(|l| !l.contains(".json\""))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&t1), strip(&t2));

    let v: serde_json::Value = serde_json::from_str(&t1).unwrap();
    let entries = v["entries"].as_array().unwrap();
    let find = |id: &str| entries.iter().find(|e| e["case"] == id).unwrap();
    let e8 = &find("E8_TABLE2")["solutions"];
    assert!(e8
        .as_array()
        .unwrap()
        .iter()
        .any(|s| s["a_k"][0] == "-279/25" && s["a_k"][1] == "9/25" && s["p"] == "4864/375"));
    let t1_disc = find("F4_TABLE1")["discrepancies"].as_array().unwrap();
    assert!(t1_disc
        .iter()
        .any(|d| d["id"] == "table1.solution_slot_order"));
    assert!(t1_disc
        .iter()
        .any(|d| d["id"] == "table1.r_b1.bi_invariant"));
    assert_eq!(v["summary"]["fail_count"], 0);
    assert!(v["summary"]["discrepancy_count"].as_u64().unwrap() >= 2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn stdout_report_is_byte_identical() {
    let a = qem(&["report", "--case", "SPK_UK(k=2)", "--case", "G2_TABLE2"]);
    let b = qem(&["report", "--case", "SPK_UK(k=2)", "--case", "G2_TABLE2"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn export_import_round_trip() {
    let dir = std::env::temp_dir().join(format!("qem-export-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sp2.json");
    let p = path.display().to_string();
    assert_eq!(code(&["export", "--case", "SPK_UK(k=2)", "--out", &p]), 0);
    let o = qem(&["import", "--file", &p]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("dim 10"));
    assert!(s.contains("killing_signature (0, 10)"));
    assert!(s.contains("blocks k=(1,3) p=(6)"), "{s}");

    assert_eq!(
        code(&["export", "--case", "SPK_UK(k=2)", "--dual", "--out", &p]),
        0
    );
    let s = stdout(&qem(&["import", "--file", &p]));
    assert!(s.contains("killing_signature (6, 4)"), "{s}");

    std::fs::write(&path, "{\"dim\": 2}").unwrap();
    assert_eq!(code(&["import", "--file", &p]), 2);
    std::fs::remove_dir_all(&dir).ok();
}
