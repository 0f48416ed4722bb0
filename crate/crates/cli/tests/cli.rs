//! End-to-end tests of the `socf` binary: document round trips, command
//! behavior, and the exit-code contract.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use socf::{socf_equal, TolerancePolicy, Vector};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_socf")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary should spawn")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal exit")
}

struct Workdir(PathBuf);

impl Workdir {
    fn new(tag: &str) -> Workdir {
        let dir = std::env::temp_dir().join(format!("socf-cli-{tag}-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        Workdir(dir)
    }

    fn file(&self, name: &str, contents: &str) -> PathBuf {
        let path = self.0.join(name);
        fs::write(&path, contents).unwrap();
        path
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.join(name)
    }
}

impl Drop for Workdir {
    fn drop(&mut self) {
        let _ = fs::remove_dir_all(&self.0);
    }
}

const TALL_GENERAL: &str = r#"{"form":"general","c":[0,0],"d":0,
    "A":[[1,0],[-1,1],[0,2]],"b":[1,1,-1]}"#;

const CONE_2D: &str = r#"{"form":"general","c":[0,0],"d":0,
    "A":[[1,0],[0,1]],"b":[0,0]}"#;

fn parse_doc(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn canonicalize_writes_expected_parameters() {
    let dir = Workdir::new("canon");
    let input = dir.file("in.json", TALL_GENERAL);
    let output = dir.path("out.json");
    let out = run(&[
        "canonicalize",
        input.to_str().unwrap(),
        output.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{out:?}");
    let doc = parse_doc(&output);
    assert_eq!(doc["form"], "canonical");
    assert!((doc["delta"].as_f64().unwrap() - 5.0 / 3.0).abs() < 1e-12);
    assert!((doc["x_star"][0].as_f64().unwrap() - 1.0 / 9.0).abs() < 1e-12);
    assert!((doc["x_star"][1].as_f64().unwrap() - 2.0 / 9.0).abs() < 1e-12);
    assert_eq!(doc["M"][0][0].as_f64().unwrap(), 2.0);
    assert_eq!(doc["M"][0][1].as_f64().unwrap(), -1.0);
    assert_eq!(doc["M"][1][1].as_f64().unwrap(), 5.0);
}

#[test]
fn canonicalize_is_idempotent_on_canonical_input() {
    let dir = Workdir::new("idem");
    let input = dir.file("in.json", TALL_GENERAL);
    let once = dir.path("once.json");
    let twice = dir.path("twice.json");
    assert_eq!(
        exit_code(&run(&[
            "canonicalize",
            input.to_str().unwrap(),
            once.to_str().unwrap()
        ])),
        0
    );
    assert_eq!(
        exit_code(&run(&[
            "canonicalize",
            once.to_str().unwrap(),
            twice.to_str().unwrap()
        ])),
        0
    );
    assert_eq!(
        fs::read_to_string(&once).unwrap(),
        fs::read_to_string(&twice).unwrap()
    );
}

#[test]
fn malformed_field_exits_2_and_names_it() {
    let dir = Workdir::new("badfield");
    let input = dir.file(
        "in.json",
        r#"{"form":"general","c":[0],"d":0,"A":[[1]],"bee":[0]}"#,
    );
    let out = run(&["classify", input.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("bee"),
        "diagnostic must name the field: {stderr}"
    );
}

#[test]
fn classify_reports_pd4_for_the_showcase_function() {
    let dir = Workdir::new("classify");
    let input = dir.file(
        "in.json",
        r#"{"form":"canonical","c":[0.7,0.7],"d":0,"delta":1,
            "M":[[2,-1],[-1,5]],"x_star":[0,0]}"#,
    );
    let out = run(&["classify", input.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["boundedness"]["case_tag"], "PD4");
    let sup = report["boundedness"]["supremum"].as_f64().unwrap();
    assert!((sup + 0.51f64.sqrt()).abs() < 1e-12);
    assert_eq!(report["region"], "Empty");
    assert_eq!(report["boundedness"]["critical_set"]["kind"], "Point");
}

#[test]
fn classify_handles_singular_bounded_case() {
    let dir = Workdir::new("semidef");
    let input = dir.file(
        "in.json",
        r#"{"form":"canonical","c":[1,0],"d":0,"delta":1,
            "M":[[4,0],[0,0]],"x_star":[0,0]}"#,
    );
    let out = run(&["classify", input.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["boundedness"]["case_tag"], "SemiDefBounded");
    assert!((report["boundedness"]["q"].as_f64().unwrap() - 0.25).abs() < 1e-12);
}

#[test]
fn probe_runs_are_byte_identical_for_a_fixed_seed() {
    let dir = Workdir::new("determinism");
    let input = dir.file(
        "in.json",
        r#"{"form":"canonical","c":[1.3,1.3],"d":0,"delta":1,
            "M":[[2,-1],[-1,5]],"x_star":[0,0]}"#,
    );
    let args = [
        "classify",
        input.to_str().unwrap(),
        "--probe",
        "--seed",
        "42",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(exit_code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn eval_prints_full_precision_values() {
    let dir = Workdir::new("eval");
    let cone = dir.file("cone.json", CONE_2D);
    let out = run(&["eval", cone.to_str().unwrap(), "--at", "3,4"]);
    assert_eq!(exit_code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.trim().parse::<f64>().unwrap(), -5.0);

    // One-variable function with a vertex at 0: f(0) = d − δ.
    let one = dir.file(
        "one.json",
        r#"{"form":"canonical","c":[0],"d":1,"delta":0.2,"M":[[1]],"x_star":[0]}"#,
    );
    let out = run(&["eval", one.to_str().unwrap(), "--at", "0"]);
    assert_eq!(exit_code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!((text.trim().parse::<f64>().unwrap() - 0.8).abs() < 1e-15);

    // Dimension mismatch is exit 3.
    let out = run(&["eval", cone.to_str().unwrap(), "--at", "1,2,3"]);
    assert_eq!(exit_code(&out), 3);
}

#[test]
fn restrict_produces_an_equivalent_document() {
    let dir = Workdir::new("restrict");
    let tol = TolerancePolicy::default();
    let input = dir.file("in.json", TALL_GENERAL);
    let output = dir.path("restricted.json");

    // Identity restriction: same function after canonicalization.
    let out = run(&[
        "restrict",
        input.to_str().unwrap(),
        "--x0",
        "0,0",
        "--B",
        "1,0;0,1",
        output.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{out:?}");
    let text = fs::read_to_string(&output).unwrap();
    let restricted = socf::GeneralForm::new(
        Vector::new(
            serde_json::from_str::<serde_json::Value>(&text).unwrap()["c"]
                .as_array()
                .unwrap()
                .iter()
                .map(|v| v.as_f64().unwrap())
                .collect(),
        )
        .unwrap(),
        0.0,
        socf::Matrix::from_rows([[1.0, 0.0], [-1.0, 1.0], [0.0, 2.0]]).unwrap(),
        Vector::new(vec![1.0, 1.0, -1.0]).unwrap(),
    )
    .unwrap();
    let original = restricted.canonicalize(&tol).unwrap();
    let doc = socf_cli_parse(&text);
    assert!(socf_equal(&doc, &original, &tol).unwrap());

    // Empty restriction basis is a shape error.
    let out = run(&[
        "restrict",
        input.to_str().unwrap(),
        "--x0",
        "0,0",
        "--B",
        "",
        output.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 3);
}

/// Parses a general-form document through the library and canonicalizes it.
fn socf_cli_parse(text: &str) -> socf::CanonicalForm {
    let v: serde_json::Value = serde_json::from_str(text).unwrap();
    let tol = TolerancePolicy::default();
    let c: Vec<f64> = v["c"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    let b: Vec<f64> = v["b"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    let a: Vec<Vec<f64>> = v["A"]
        .as_array()
        .unwrap()
        .iter()
        .map(|row| {
            row.as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_f64().unwrap())
                .collect()
        })
        .collect();
    socf::GeneralForm::new(
        Vector::new(c).unwrap(),
        v["d"].as_f64().unwrap(),
        socf::Matrix::from_nested(&a).unwrap(),
        Vector::new(b).unwrap(),
    )
    .unwrap()
    .canonicalize(&tol)
    .unwrap()
}

#[test]
fn restrict_to_one_variable_matches_the_formula() {
    let dir = Workdir::new("restrict1d");
    let input = dir.file(
        "in.json",
        r#"{"form":"general","c":[0,0],"d":0,
            "A":[[1,0],[0,1],[0,0]],"b":[0,0,0.3]}"#,
    );
    let output = dir.path("line.json");
    let out = run(&[
        "restrict",
        input.to_str().unwrap(),
        "--x0",
        "0,0",
        "--B",
        "1;0",
        output.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{out:?}");
    let text = fs::read_to_string(&output).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["c"].as_array().unwrap().len(), 1);
    // Evaluate the restricted document at a few points: −√(0.09 + y²).
    for &y in &[-1.0f64, 0.0, 0.7, 2.0] {
        let out = run(&["eval", output.to_str().unwrap(), "--at", &y.to_string()]);
        assert_eq!(exit_code(&out), 0);
        let value: f64 = String::from_utf8(out.stdout)
            .unwrap()
            .trim()
            .parse()
            .unwrap();
        assert!((value + (0.09 + y * y).sqrt()).abs() < 1e-12);
    }
}

#[test]
fn contour_csv_matches_reevaluation_bit_for_bit() {
    let dir = Workdir::new("contour");
    let input = dir.file("cone.json", CONE_2D);
    let output = dir.path("grid.csv");
    let out = run(&[
        "contour",
        input.to_str().unwrap(),
        "--xrange",
        "-1:1",
        "--yrange",
        "-1:1",
        "--nx",
        "3",
        "--ny",
        "3",
        output.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{out:?}");
    let text = fs::read_to_string(&output).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y,f"));
    let tol = TolerancePolicy::default();
    let g = socf_cli_parse(CONE_2D);
    let mut rows = 0;
    for line in lines {
        let parts: Vec<f64> = line.split(',').map(|p| p.parse().unwrap()).collect();
        let expected = g
            .eval(&Vector::new(vec![parts[0], parts[1]]).unwrap())
            .unwrap();
        assert_eq!(parts[2].to_bits(), expected.to_bits(), "row {line}");
        rows += 1;
    }
    assert_eq!(rows, 9);
    let _ = tol;

    // x varies fastest: first two rows share y, advance x.
    let data: Vec<&str> = text.lines().skip(1).collect();
    let first: Vec<f64> = data[0].split(',').map(|p| p.parse().unwrap()).collect();
    let second: Vec<f64> = data[1].split(',').map(|p| p.parse().unwrap()).collect();
    assert_eq!(first[1], second[1]);
    assert!(first[0] < second[0]);
}

#[test]
fn contour_of_critical_ray_function_hits_zero_on_the_ray() {
    let dir = Workdir::new("ray");
    // q = 1, δ = 0: the zero contour is the ray in direction (2/3, 1/3).
    let input = dir.file(
        "in.json",
        r#"{"form":"canonical","c":[1,1],"d":0,"delta":0,
            "M":[[2,-1],[-1,5]],"x_star":[0,0]}"#,
    );
    let output = dir.path("grid.csv");
    let out = run(&[
        "contour",
        input.to_str().unwrap(),
        "--xrange",
        "-2:2",
        "--yrange",
        "-2:2",
        "--nx",
        "81",
        "--ny",
        "81",
        output.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    let text = fs::read_to_string(&output).unwrap();
    // Lattice points on the ray t(2/3, 1/3), t ≥ 0: x = 0.1k, y = 0.05k.
    let mut on_ray = 0;
    for line in text.lines().skip(1) {
        let parts: Vec<f64> = line.split(',').map(|p| p.parse().unwrap()).collect();
        let (x, y, f) = (parts[0], parts[1], parts[2]);
        if x >= 0.0 && (y - x / 2.0).abs() < 1e-12 {
            assert!(f.abs() < 1e-9, "f({x},{y}) = {f} should vanish on the ray");
            on_ray += 1;
        }
    }
    assert!(on_ray > 10, "expected many lattice points on the ray");
}

#[test]
fn contour_rejects_non_planar_functions() {
    let dir = Workdir::new("dim");
    let input = dir.file(
        "one.json",
        r#"{"form":"canonical","c":[0],"d":0,"delta":1,"M":[[1]],"x_star":[0]}"#,
    );
    let out = run(&[
        "contour",
        input.to_str().unwrap(),
        "--xrange",
        "-1:1",
        "--yrange",
        "-1:1",
        "--nx",
        "3",
        "--ny",
        "3",
        dir.path("grid.csv").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 3);
}
