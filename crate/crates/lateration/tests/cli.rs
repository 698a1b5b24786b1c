//! Exit-code taxonomy and output hygiene of the command-line interface.

use std::path::Path;
use std::process::Output;

fn run(args: &[&str]) -> Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_lateration"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_minimal_inputs(dir: &Path) {
    std::fs::write(
        dir.join("anchors.csv"),
        "# lateration-anchors v1\nanchor_id,x_cm,y_cm\na,0,0\nb,600,0\nc,0,900\nd,700,800\n",
    )
    .unwrap();
    // Line 5 carries a non-numeric rssi.
    std::fs::write(
        dir.join("trace.csv"),
        "# lateration-trace v1\ntimestamp_s,anchor_id,rssi_dbm\n0,a,-45\n0,b,-52\n0,c,strong\n",
    )
    .unwrap();
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error: usage"));
}

#[test]
fn missing_required_flag_is_a_usage_error() {
    let out = run(&["locate", "--db", "x.caldb"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error: usage"));
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    for sub in ["calibrate", "locate", "simulate", "evaluate", "render-map"] {
        assert!(text.contains(sub), "--help does not mention {sub}");
    }
}

#[test]
fn missing_input_file_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "locate",
        "--db",
        dir.path().join("nope.caldb").to_str().unwrap(),
        "--anchors",
        dir.path().join("nope.csv").to_str().unwrap(),
        "--trace",
        dir.path().join("nope2.csv").to_str().unwrap(),
        "--out",
        dir.path().join("out.csv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).starts_with("error: io-failure:"));
}

#[test]
fn malformed_input_exits_two_and_leaves_no_output() {
    let dir = tempfile::tempdir().unwrap();
    write_minimal_inputs(dir.path());
    let out_path = dir.path().join("map.svg");
    let table_path = dir.path().join("bubbles.csv");
    let out = run(&[
        "render-map",
        "--anchors",
        dir.path().join("anchors.csv").to_str().unwrap(),
        "--trace",
        dir.path().join("trace.csv").to_str().unwrap(),
        "--out-svg",
        out_path.to_str().unwrap(),
        "--out-table",
        table_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.starts_with("error: malformed-input:"), "stderr: {err}");
    assert!(err.contains("line 5"), "diagnostics missing line: {err}");
    assert!(!out_path.exists(), "failed run left an output file behind");
    assert!(!table_path.exists());
}

#[test]
fn estimation_failure_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("anchors.csv"),
        "# lateration-anchors v1\nanchor_id,x_cm,y_cm\na,0,0\nb,600,0\n",
    )
    .unwrap();
    // Only one visible anchor per scan: nothing to laterate from.
    std::fs::write(
        dir.path().join("trace.csv"),
        "# lateration-trace v1\ntimestamp_s,anchor_id,rssi_dbm\n0,a,-45\n",
    )
    .unwrap();
    std::fs::write(
        dir.path().join("db.caldb"),
        "# lateration-caldb v1\nm=2\nalpha_hat=2\nalpha_samples=2\n\
         anchor_id,power_dbm,distance_cm,source_x_cm,source_y_cm\na,-40,100,0,0\n",
    )
    .unwrap();
    let out_path = dir.path().join("estimates.csv");
    let out = run(&[
        "locate",
        "--db",
        dir.path().join("db.caldb").to_str().unwrap(),
        "--anchors",
        dir.path().join("anchors.csv").to_str().unwrap(),
        "--trace",
        dir.path().join("trace.csv").to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).starts_with("error: estimation-failure:"));
    assert!(!out_path.exists());
}

#[test]
fn zero_noise_pipeline_reports_negligible_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name).to_str().unwrap().to_string();
    std::fs::write(
        dir.path().join("sim.toml"),
        r#"
version = 1

[testbed]
floor_min_cm = [0.0, 0.0]
floor_max_cm = [3000.0, 2000.0]
anchors = [
    { id = "ap00", x_cm = 100.0, y_cm = 150.0 },
    { id = "ap01", x_cm = 2900.0, y_cm = 200.0 },
    { id = "ap02", x_cm = 150.0, y_cm = 1900.0 },
    { id = "ap03", x_cm = 2850.0, y_cm = 1800.0 },
]

[channel]
shadow_sigma_db = 0.0
dropout_prob = 0.0
seed = 5

[trajectory]
waypoints_cm = [[700.0, 600.0], [1500.0, 1000.0], [2200.0, 1400.0], [900.0, 1500.0]]
"#,
    )
    .unwrap();
    std::fs::write(
        dir.path().join("anchors.csv"),
        "# lateration-anchors v1\nanchor_id,x_cm,y_cm\n\
         ap00,100,150\nap01,2900,200\nap02,150,1900\nap03,2850,1800\n",
    )
    .unwrap();

    let steps: Vec<Vec<String>> = vec![
        vec![
            "simulate".into(),
            "--config".into(),
            p("sim.toml"),
            "--out-trace".into(),
            p("trace.csv"),
            "--out-truth".into(),
            p("truth.csv"),
        ],
        vec![
            "calibrate".into(),
            "--anchors".into(),
            p("anchors.csv"),
            "--trace".into(),
            p("trace.csv"),
            "--ground-truth".into(),
            p("truth.csv"),
            "--out".into(),
            p("db.caldb"),
        ],
        vec![
            "evaluate".into(),
            "--db".into(),
            p("db.caldb"),
            "--anchors".into(),
            p("anchors.csv"),
            "--trace".into(),
            p("trace.csv"),
            "--ground-truth".into(),
            p("truth.csv"),
            "--out".into(),
            p("report.csv"),
        ],
    ];
    for step in &steps {
        let args: Vec<&str> = step.iter().map(String::as_str).collect();
        let out = run(&args);
        assert!(out.status.success(), "{:?}: {}", step[0], stderr(&out));
    }

    // Without noise the pipeline inverts the channel; every error is tiny.
    let report = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
    let mut rows = 0;
    for line in report.lines().filter(|l| !l.starts_with('#')).skip(1)
    // column header
    {
        let err: f64 = line.split(',').nth(4).unwrap().parse().unwrap();
        assert!(err <= 1e-4, "row error {err} above 1e-4 cm: {line}");
        rows += 1;
    }
    assert_eq!(rows, 4);
    assert!(report.contains("# rows=4 failures=0"));
}

#[test]
fn locate_writes_estimates_with_param_header() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("anchors.csv"),
        "# lateration-anchors v1\nanchor_id,x_cm,y_cm\na,0,0\nb,600,0\nc,0,900\nd,700,800\n",
    )
    .unwrap();
    // Noiseless powers for truth (300, 400) with alpha = 2, ref -40 dBm @ 100 cm.
    let truth = (300.0f64, 400.0f64);
    let anchors = [
        ("a", (0.0, 0.0)),
        ("b", (600.0, 0.0)),
        ("c", (0.0, 900.0)),
        ("d", (700.0, 800.0)),
    ];
    let mut trace = String::from("# lateration-trace v1\ntimestamp_s,anchor_id,rssi_dbm\n");
    for (id, (x, y)) in anchors {
        let d = ((truth.0 - x).powi(2) + (truth.1 - y).powi(2)).sqrt();
        let p = -40.0 - 20.0 * (d / 100.0).log10();
        trace.push_str(&format!("0,{id},{p}\n"));
    }
    std::fs::write(dir.path().join("trace.csv"), trace).unwrap();
    std::fs::write(
        dir.path().join("db.caldb"),
        "# lateration-caldb v1\nm=2\nalpha_hat=2\nalpha_samples=2\n\
         anchor_id,power_dbm,distance_cm,source_x_cm,source_y_cm\na,-40,100,0,0\n",
    )
    .unwrap();
    let out_path = dir.path().join("estimates.csv");
    let out = run(&[
        "locate",
        "--db",
        dir.path().join("db.caldb").to_str().unwrap(),
        "--anchors",
        dir.path().join("anchors.csv").to_str().unwrap(),
        "--trace",
        dir.path().join("trace.csv").to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.starts_with("# lateration-estimates v1\n"));
    assert!(text.contains("# params: n=4 min_pairs=1"));
    // The noiseless scan against a consistent database localizes exactly.
    let row = text
        .lines()
        .find(|l| !l.starts_with('#') && l.starts_with("0,"))
        .expect("estimate row");
    let fields: Vec<&str> = row.split(',').collect();
    let (x, y): (f64, f64) = (fields[1].parse().unwrap(), fields[2].parse().unwrap());
    assert!(
        (x - 300.0).abs() < 1e-6 && (y - 400.0).abs() < 1e-6,
        "row: {row}"
    );
}
