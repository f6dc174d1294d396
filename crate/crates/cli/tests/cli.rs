use std::io::Write;
use std::process::{Command, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_snowflake"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn ok_json(args: &[&str]) -> Value {
    let (code, out, err) = run(args, "");
    assert_eq!(code, 0, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

fn temp_path(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("snowflake-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn eigen_example() {
    let v = ok_json(&["eigen", "--matrix", "[[1,1],[2,1]]", "--r", "4"]);
    let s = &v["summary"];
    assert!((s["lambda"].as_f64().unwrap() - 2.414_213_562_4).abs() < 1e-9);
    let alpha = 4f64.ln() / (1.0 + 2f64.sqrt()).ln();
    assert!((s["alpha"].as_f64().unwrap() - alpha).abs() < 1e-9);
    assert!((s["dehn_exponent"].as_f64().unwrap() - 2.0 * alpha).abs() < 1e-9);
    assert!(v["growth"]["lower"].as_f64().unwrap() > 0.0);
}

#[test]
fn eigen_exact_and_z2() {
    let v = ok_json(&["eigen", "--matrix", "[[16]]", "--r", "32"]);
    assert_eq!(v["lambda"], serde_json::json!({"num": 16, "den": 1}));
    assert_eq!(v["dehn_exponent"], serde_json::json!({"num": 5, "den": 2}));
    let v = ok_json(&["eigen", "--family", "z2"]);
    assert_eq!(v["dehn_exponent"], serde_json::json!({"num": 2, "den": 1}));
}

#[test]
fn fit_example() {
    let v = ok_json(&["fit", "--matrix", "[[4]]", "--r", "8", "--kind", "disk", "--depths", "2..12", "--tol", "0.1"]);
    assert!((v["slope"].as_f64().unwrap() - 3.0).abs() < 0.3);
    assert_eq!(v["target"].as_f64(), Some(3.0));
    assert_eq!(v["pass"], true);
}

#[test]
fn present_formats() {
    let (code, out, _) = run(&["present", "--family", "vm", "--m", "2", "--format", "json"], "");
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["generators"], serde_json::json!(["a_1", "a_2"]));
    assert_eq!(v["relators"], serde_json::json!([[["a_1", 1], ["a_2", 1], ["a_1", -1], ["a_2", -1]]]));

    let (_, out, _) = run(&["present", "--matrix", "[[4]]", "--r", "8", "--suspend", "1", "--format", "json"], "");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["generators"].as_array().unwrap().len(), 10);
    assert_eq!(v["relators"].as_array().unwrap().len(), 7 + 16);

    let (_, out, _) = run(&["present", "--matrix", "[[16]]", "--r", "32", "--product", "1", "--format", "json"], "");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["generators"].as_array().unwrap().len(), 33);
    assert_eq!(v["relators"].as_array().unwrap().len(), 31 + 32);

    let (code, out, _) = run(&["present", "--family", "z2", "--r", "2", "--format", "calg"], "");
    assert_eq!(code, 0);
    assert!(out.starts_with("F := FreeGroup(\"a_1\", \"a_2\");"));
}

#[test]
fn matrix_from_file_and_out_flag() {
    let m = temp_path("p.txt");
    std::fs::write(&m, "2; 1 1; 2 1\n").unwrap();
    let out = temp_path("disk.csv");
    let (code, stdout, err) = run(
        &["disk", "--matrix", m.to_str().unwrap(), "--r", "4", "--depths", "1..3", "--out", out.to_str().unwrap()],
        "",
    );
    assert_eq!(code, 0, "{err}");
    assert!(stdout.is_empty());
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("index,n,perimeter,area\n"));
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn disk_terminal_example() {
    let (code, out, _) = run(&["disk", "--matrix", "[[4]]", "--r", "8", "--N", "96,0"], "");
    assert_eq!(code, 0);
    assert_eq!(out, "index,n,perimeter,area\n1,96,768,55296\n2,0,0,0\n");
}

#[test]
fn ball_z2_closed_forms() {
    let (code, out, _) = run(&["ball", "--family", "z2", "--r", "2", "--k", "3", "--js", "1..6"], "");
    assert_eq!(code, 0);
    for line in out.lines().skip(1) {
        let f: Vec<u64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        let j = f[0] as u32;
        assert_eq!(f[1], 16 * (2u64.pow(j) - 1) + 8, "boundary at j={j}");
        assert_eq!(3 * f[2], 8 * (4u64.pow(j) - 1), "interior at j={j}");
        assert_eq!(f[3], 8);
    }
}

#[test]
fn word_outputs() {
    let (code, out, _) = run(&["word", "--matrix", "[[4]]", "--r", "8", "--N", "2"], "");
    assert_eq!(code, 0);
    assert_eq!(out, "a_1^2 a_2^2 a_3^2 a_4^2\n");
    let (_, out, _) = run(&["word", "--matrix", "[[4]]", "--r", "8", "--N", "2", "--sign", "negative"], "");
    assert_eq!(out, "a_4^2 a_3^2 a_2^2 a_1^2\n");
    let v =
        ok_json(&["word", "--matrix", "[[4]]", "--r", "8", "--N", "rpow:3", "--terminal", "unit", "--emit", "stats"]);
    assert_eq!(v["s_count"], 168);
    let v = ok_json(&["word", "--matrix", "[[4]]", "--r", "8", "--N", "50", "--emit", "verify"]);
    assert_eq!(v["ok"], true);
    assert_eq!(v["solver_checked"], true);
    let v = ok_json(&["word", "--matrix", "[[4]]", "--r", "8", "--N", "100", "--emit", "json"]);
    assert_eq!(v["strands"].as_array().unwrap().len(), 4);
}

#[test]
fn vm_actions() {
    let v = ok_json(&["vm", "nf", "--m", "3", "--word", "a1 a2 a1^-1 a2^-1"]);
    assert_eq!(v["identity"], false);
    let v = ok_json(&["vm", "eq", "--m", "4", "--word", "a1^3 a2^3 a3^3 a4^3", "--other", "(a1 a2 a3 a4)^3"]);
    assert_eq!(v["equal"], true);
    let v = ok_json(&["vm", "fill", "--m", "2", "--word", "a1^2 b1^2", "--target", "b0", "--power", "2"]);
    assert!(v["steps"].as_u64().unwrap() <= 12);
    let (code, _, err) = run(&["vm", "shuffle", "--m", "3", "--word", "a1"], "");
    assert_eq!(code, 2);
    assert!(err.contains("not a power of c"));
}

#[test]
fn solve_killed_words() {
    let input = "s_1\ns_2\ns_1^-1 a_1^4 s_1 a_1^-1 a_2^-1\n";
    let (code, out, err) = run(&["solve", "--matrix", "[[1,1],[2,1]]", "--r", "4", "--killed"], input);
    assert_eq!(code, 0, "{err}");
    let v: Vec<Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(v.len(), 3);
    assert_eq!(v[0]["trivial"], false);
    assert_eq!(v[1]["trivial"], true);
    assert_eq!(v[2]["trivial"], true);
}

#[test]
fn spectrum_actions() {
    let v = ok_json(&["spectrum", "s-of-ell", "--alpha2", "2", "--ell", "3"]);
    assert_eq!(v["values"][3]["s"], "5/4");
    assert_eq!(v["recurrence_holds"], true);
    let v = ok_json(&["spectrum", "invert", "--s", "5/2", "--k", "1"]);
    assert_eq!(v["recipe"], serde_json::json!({"family": "snowflake", "q": 1, "ell": 0, "p": 5, "q_prime": 2}));
    let (code, _, err) = run(&["spectrum", "invert", "--s", "1", "--k", "2"], "");
    assert_eq!(code, 2);
    assert!(err.contains("below (k+1)/k"));
}

#[test]
fn render_is_deterministic_svg() {
    let args = ["render", "--matrix", "[[1,1],[2,1]]", "--r", "4", "--N", "rpow:4", "--vertex", "2"];
    let (code, a, _) = run(&args, "");
    let (_, b, _) = run(&args, "");
    assert_eq!(code, 0);
    assert_eq!(a, b);
    assert!(a.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\""));
    assert!(a.trim_end().ends_with("</svg>"));
    assert!(a.matches("<polygon").count() > 10);
}

#[test]
fn validation_errors_exit_2_with_one_line() {
    let cases: &[&[&str]] = &[
        &["eigen", "--matrix", "[[4]]", "--r", "3"],
        &["eigen", "--matrix", "[[1,0],[0,1]]"],
        &["eigen", "--matrix", "[[0,1],[1,0]]", "--r", "2"],
        &["present", "--matrix", "[[4]]", "--r", "8/3", "--suspend", "1"],
        &["present", "--family", "vm", "--m", "0"],
        &["word", "--matrix", "[[4]]", "--r", "8", "--N", "rpow:40"],
        &["word", "--matrix", "[[4]]", "--r", "8", "--N", "12", "--vertex", "2"],
        &["word", "--matrix", "[[4]]", "--r", "8", "--N", "rpow:12", "--emit", "flat"],
        &["disk", "--matrix", "[[4]]", "--r", "8", "--depths", "5..2"],
        &["ball", "--matrix", "[[4]]", "--r", "17/2", "--k", "3"],
        &["ball", "--matrix", "[[4]]", "--r", "8", "--k", "1"],
        &["fit", "--matrix", "[[4]]", "--r", "8", "--kind", "disk", "--depths", "2..3"],
        &["fit", "--matrix", "[[4]]", "--r", "8", "--kind", "disk", "--depths", "2..9", "--tol=-1"],
        &["vm", "nf", "--m", "2", "--word", "a3"],
        &["vm", "nf", "--m", "2", "--word", "a1^"],
        &["spectrum", "s-of-ell", "--alpha2", "1/2", "--ell", "1"],
        &["spectrum", "s-of-ell", "--alpha2", "x", "--ell", "1"],
        &["render", "--family", "z2", "--r", "2", "--N", "4"],
        &["eigen", "--matrix", "[[1,2],[3]]"],
        &["eigen", "--matrix", "[[4]]", "--r", "0/1"],
    ];
    for args in cases {
        let (code, out, err) = run(args, "");
        assert_eq!(code, 2, "{args:?}: {err}");
        assert!(out.is_empty(), "{args:?}");
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
    }
    let (_, _, err) = run(&["eigen", "--matrix", "[[4]]", "--r", "3"], "");
    assert_eq!(err.trim_end(), "error: r must exceed max row sum 4; got 3");
}

#[test]
fn usage_and_io_exit_codes() {
    assert_eq!(run(&[], "").0, 64);
    assert_eq!(run(&["frobnicate"], "").0, 64);
    assert_eq!(run(&["fit", "--matrix", "[[4]]", "--r", "8"], "").0, 64);
    assert_eq!(run(&["word", "--matrix", "[[4]]", "--r", "8", "--N", "4", "--policy", "up"], "").0, 64);
    assert_eq!(run(&["--help"], "").0, 0);
    assert_eq!(run(&["disk", "--help"], "").0, 0);
    assert_eq!(run(&["--version"], "").0, 0);
    assert_eq!(run(&["eigen", "--matrix", "/no/such/file"], "").0, 74);
    let bad = temp_path("missing-dir").join("x").join("out.csv");
    assert_eq!(run(&["disk", "--family", "z2", "--r", "2", "--N", "3", "--out", bad.to_str().unwrap()], "").0, 74);
    assert_eq!(run(&["--replay", "/no/such/manifest.json"], "").0, 74);
}

#[test]
fn help_documents_csv_columns() {
    let (_, out, _) = run(&["disk", "--help"], "");
    assert!(out.contains("index,n,perimeter,area"));
    let (_, out, _) = run(&["ball", "--help"], "");
    assert!(out.contains("index,boundary,interior,shell"));
}

#[test]
fn manifest_replay_detects_tampering() {
    let manifest = temp_path("ball.manifest.json");
    let (code, first, _) = run(
        &[
            "ball",
            "--matrix",
            "[[4]]",
            "--r",
            "8",
            "--k",
            "4",
            "--js",
            "1..5",
            "--manifest",
            manifest.to_str().unwrap(),
        ],
        "",
    );
    assert_eq!(code, 0);
    let (code, report, _) = run(&["--replay", manifest.to_str().unwrap()], "");
    assert_eq!(code, 0);
    assert!(report.contains("\"match\": true"));
    let mut m: Value = serde_json::from_str(&std::fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(m["output"]["bytes"].as_u64().unwrap() as usize, first.len());
    m["argv"][6] = Value::from("5");
    std::fs::write(&manifest, serde_json::to_string(&m).unwrap()).unwrap();
    let (code, _, err) = run(&["--replay", manifest.to_str().unwrap()], "");
    assert_eq!(code, 2);
    assert!(err.contains("digest mismatch"));
}

#[test]
fn malformed_inputs_never_panic() {
    let words = ["", "1", "a", "a1^", "a1^^2", "(a1", "a1)", "a99999999999", "s_0", "c^-", "a1^99999999999999999999"];
    let mut codes = Vec::new();
    for w in words {
        codes.push(run(&["vm", "nf", "--m", "3", "--word", w], "").0);
        codes.push(run(&["solve", "--matrix", "[[4]]", "--r", "8"], w).0);
    }
    for n in ["", "x", "rpow:", "rpow:-1", "9223372036854775807", "-9223372036854775808", "rpow:99"] {
        codes.push(run(&["word", "--matrix", "[[4]]", "--r", "8", "--N", n, "--emit", "stats"], "").0);
        codes.push(run(&["render", "--matrix", "[[4]]", "--r", "8", "--N", n], "").0);
    }
    for m in ["[]", "[[]]", "[[-1]]", "[[1,1],[1]]", "0;", "2; 1 1", "[[18446744073709551615]]", "x"] {
        codes.push(run(&["eigen", "--matrix", m, "--r", "9"], "").0);
    }
    for r in ["", "0", "1/0", "-3", "8/", "99999999999999999999"] {
        codes.push(run(&["fit", "--matrix", "[[4]]", "--r", r, "--kind", "alpha", "--depths", "1..3"], "").0);
    }
    assert!(codes.iter().all(|c| [0, 2, 64, 74].contains(c)), "{codes:?}");
}
