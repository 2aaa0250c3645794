//! End-to-end checks of the command-line surface: file schemas, output
//! determinism, and exit codes.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Parser;

use circlift::cli::{run, RunConfig};
use circlift::{GroupElement, Harmonic, Lifting, Probe};

fn workdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("circlift-cli-{}-{tag}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn invoke(args: &[&str]) -> i32 {
    let config = RunConfig::try_parse_from(args).expect("flags parse");
    run(config)
}

fn write_paper_probe(dir: &Path) -> PathBuf {
    let f = Lifting::new(
        0.1,
        2,
        vec![Harmonic {
            k: 1,
            sin: 1.0 / (2.1 * PI),
            cos: 0.0,
        }],
    )
    .unwrap();
    let probe = Probe::type_ii(f, Lifting::rotation(0.2 * PI, 2)).unwrap();
    let path = dir.join("paper_probe.json");
    fs::write(&path, serde_json::to_string(&probe).unwrap()).unwrap();
    path
}

#[test]
fn validate_identity_exits_zero() {
    let dir = workdir("validate");
    let input = dir.join("identity.json");
    fs::write(
        &input,
        serde_json::to_string(&Lifting::identity(2)).unwrap(),
    )
    .unwrap();
    let output = dir.join("cert.json");
    let code = invoke(&[
        "circlift",
        "validate",
        "--input",
        input.to_str().unwrap(),
        "--output",
        output.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let cert: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(output).unwrap()).unwrap();
    assert_eq!(cert["is_diffeo"], true);
    assert_eq!(cert["min_derivative"], 1.0);
}

#[test]
fn validate_folding_map_exits_two() {
    let dir = workdir("validate2");
    let input = dir.join("folding.json");
    let bad = Lifting::new(
        0.0,
        2,
        vec![Harmonic {
            k: 1,
            sin: 1.0,
            cos: 0.0,
        }],
    )
    .unwrap();
    fs::write(&input, serde_json::to_string(&bad).unwrap()).unwrap();
    let output = dir.join("cert.json");
    let code = invoke(&[
        "circlift",
        "validate",
        "--input",
        input.to_str().unwrap(),
        "--output",
        output.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
    // the certificate is still written before the failing exit
    let cert: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(output).unwrap()).unwrap();
    assert_eq!(cert["is_diffeo"], false);
}

#[test]
fn missing_file_exits_one() {
    let code = invoke(&["circlift", "validate", "--input", "/nonexistent/map.json"]);
    assert_eq!(code, 1);
}

#[test]
fn malformed_json_exits_one() {
    let dir = workdir("schema");
    let input = dir.join("broken.json");
    fs::write(
        &input,
        "{\"c0\": 0.0, \"r\": 2, \"harmonics\": [{\"k\": 1, \"sin\": 0.1, ",
    )
    .unwrap();
    assert_eq!(
        invoke(&["circlift", "validate", "--input", input.to_str().unwrap()]),
        1
    );

    let dup = dir.join("dup.json");
    fs::write(
        &dup,
        "{\"c0\": 0.0, \"r\": 2, \"harmonics\": [\
         {\"k\": 1, \"sin\": 0.1, \"cos\": 0.0}, {\"k\": 1, \"sin\": 0.2, \"cos\": 0.0}]}",
    )
    .unwrap();
    assert_eq!(
        invoke(&["circlift", "validate", "--input", dup.to_str().unwrap()]),
        1
    );
}

#[test]
fn probe_with_folding_endpoint_exits_two() {
    let dir = workdir("badprobe");
    let input = dir.join("bad_probe.json");
    // schema is fine, but F is not a diffeomorphism lifting
    fs::write(
        &input,
        "{\"F\": {\"c0\": 0.0, \"r\": 2, \"harmonics\": [{\"k\": 1, \"sin\": 1.0, \"cos\": 0.0}]}, \
         \"kind\": \"II\", \"G\": {\"c0\": 0.5, \"r\": 2, \"harmonics\": []}}",
    )
    .unwrap();
    assert_eq!(
        invoke(&[
            "circlift",
            "probe-domain",
            "--input",
            input.to_str().unwrap()
        ]),
        2
    );
}

#[test]
fn probe_domain_prints_paper_interval() {
    let dir = workdir("domain");
    let input = write_paper_probe(&dir);
    let output = dir.join("domain.json");
    let code = invoke(&[
        "circlift",
        "probe-domain",
        "--input",
        input.to_str().unwrap(),
        "--output",
        output.to_str().unwrap(),
        "--grid",
        "16384",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(output).unwrap()).unwrap();
    assert!((v["a"].as_f64().unwrap() + 0.05).abs() < 1e-6);
    assert!((v["b"].as_f64().unwrap() - 2.05).abs() < 1e-6);
    assert!(v["sigma"].as_f64().unwrap() > 0.37);
    assert_eq!(v["f_has_fixed_point"], true);
}

#[test]
fn group_report_round_trips_through_schema() {
    let dir = workdir("group");
    let w = Lifting::rotation(0.4, 2);
    let element = GroupElement::new(
        0.5,
        vec![
            circlift::Term {
                a: 0.2,
                w: w.clone(),
            },
            circlift::Term { a: 0.3, w },
        ],
    )
    .unwrap();
    let input = dir.join("element.json");
    fs::write(&input, serde_json::to_string(&element).unwrap()).unwrap();
    let output = dir.join("report.json");
    let code = invoke(&[
        "circlift",
        "group",
        "--input",
        input.to_str().unwrap(),
        "--output",
        output.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    // the report re-parses as a GroupElement (extra keys are ignored)
    let text = fs::read_to_string(&output).unwrap();
    let back: GroupElement = serde_json::from_str(&text).unwrap();
    assert_eq!(back.delta(), 0.5);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["is_conditional"], true);
}

#[test]
fn group_rejects_mismatched_weights() {
    let dir = workdir("group2");
    let input = dir.join("bad.json");
    fs::write(
        &input,
        format!(
            "{{\"delta\": 0.5, \"terms\": [{{\"a\": 0.4, \"w\": {}}}]}}",
            serde_json::to_string(&Lifting::identity(2)).unwrap()
        ),
    )
    .unwrap();
    assert_eq!(
        invoke(&["circlift", "group", "--input", input.to_str().unwrap()]),
        1
    );
}

#[test]
fn eval_map_emits_csv_rows() {
    let dir = workdir("evalmap");
    let input = write_paper_probe(&dir);
    let output = dir.join("evalmap.csv");
    let code = invoke(&[
        "circlift",
        "eval-map",
        "--input",
        input.to_str().unwrap(),
        "--output",
        output.to_str().unwrap(),
        "--nmax",
        "1",
        "--branches",
        "0",
        "--grid",
        "64",
    ]);
    assert_eq!(code, 0);
    let text = fs::read_to_string(output).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,lambda,d_x,delta_prime,branch"));
    let first = lines.next().expect("at least one solved row");
    assert_eq!(first.split(',').count(), 5);
}

#[test]
fn critical_warns_on_degenerate_probe() {
    let dir = workdir("critical");
    let probe = Probe::type_i(Lifting::rotation(0.3, 2), 1.0).unwrap();
    let input = dir.join("rigid.json");
    fs::write(&input, serde_json::to_string(&probe).unwrap()).unwrap();
    let output = dir.join("critical.json");
    let code = invoke(&[
        "circlift",
        "critical",
        "--input",
        input.to_str().unwrap(),
        "--output",
        output.to_str().unwrap(),
        "--nmax",
        "1",
        "--grid",
        "128",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(output).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 0);
}

#[test]
fn rotation_reports_rho_and_convergents() {
    let dir = workdir("rotation");
    let input = dir.join("rigid.json");
    fs::write(
        &input,
        serde_json::to_string(&Lifting::rotation(0.3, 2)).unwrap(),
    )
    .unwrap();
    let output = dir.join("rotation.json");
    let code = invoke(&[
        "circlift",
        "rotation",
        "--input",
        input.to_str().unwrap(),
        "--output",
        output.to_str().unwrap(),
        "--iters",
        "1000",
        "--qmax",
        "100",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(output).unwrap()).unwrap();
    assert!((v["rho"].as_f64().unwrap() - 0.3).abs() < 1e-9);
    assert!(!v["convergents"].as_array().unwrap().is_empty());
    assert!(v["star_beta"]["possibly_rational"].is_object());
    // 0.3 = 3/10 certifies a genuine periodic orbit of the rigid rotation
    assert!(v["periodic_certificate"].is_object());
}

#[test]
fn ccc_gap_meets_tail_bound() {
    let dir = workdir("ccc");
    let output = dir.join("ccc.json");
    let code = invoke(&[
        "circlift",
        "ccc",
        "--terms",
        "10000",
        "--output",
        output.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(output).unwrap()).unwrap();
    assert!(v["gap_to_sin1"].as_f64().unwrap().abs() < 1e-4);
    assert_eq!(v["coefficients"].as_array().unwrap().len(), 10000);
}

#[test]
fn measure_reads_box_union() {
    let dir = workdir("measure");
    let input = dir.join("boxes.json");
    fs::write(
        &input,
        "{\"dim\": 2, \"boxes\": [[{\"lo\": 0.0, \"hi\": 1.0}, {\"lo\": 0.0, \"hi\": 1.0}], \
         [{\"lo\": 1.0, \"hi\": 2.0}, {\"lo\": 0.0, \"hi\": 1.0}]]}",
    )
    .unwrap();
    let output = dir.join("measure.json");
    let code = invoke(&[
        "circlift",
        "measure",
        "--input",
        input.to_str().unwrap(),
        "--output",
        output.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(output).unwrap()).unwrap();
    assert_eq!(v["measure"].as_f64().unwrap(), 2.0);
}

#[test]
fn foliate_csv_has_expected_shape() {
    let dir = workdir("foliate");
    let input = write_paper_probe(&dir);
    let output = dir.join("foliation.csv");
    let code = invoke(&[
        "circlift",
        "foliate",
        "--input",
        input.to_str().unwrap(),
        "--output",
        output.to_str().unwrap(),
        "--lambda-window",
        "0,1",
        "--iters",
        "3",
        "--grid",
        "16",
    ]);
    assert_eq!(code, 0);
    let text = fs::read_to_string(output).unwrap();
    assert_eq!(text.lines().count(), 1 + 3 * 16);
    assert!(text.starts_with("lambda,x,alpha,in_h0"));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let dir = workdir("determinism");
    let input = write_paper_probe(&dir);
    let out1 = dir.join("a.csv");
    let out2 = dir.join("b.csv");
    for out in [&out1, &out2] {
        let code = invoke(&[
            "circlift",
            "qks",
            "--input",
            input.to_str().unwrap(),
            "--output",
            out.to_str().unwrap(),
            "--nmax",
            "2",
            "--gammas",
            "0.05,0.1",
            "--grid",
            "512",
            "--branches",
            "0,1",
        ]);
        assert_eq!(code, 0);
    }
    assert_eq!(fs::read(&out1).unwrap(), fs::read(&out2).unwrap());
    // interval detail sidecar exists and parses
    let detail = fs::read_to_string(dir.join("a.csv.intervals.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&detail).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 4);
}

#[test]
fn binary_warns_about_degenerate_probes_on_stderr() {
    let dir = workdir("subprocess");
    let probe = Probe::type_i(Lifting::rotation(0.3, 2), 1.0).unwrap();
    let input = dir.join("rigid.json");
    fs::write(&input, serde_json::to_string(&probe).unwrap()).unwrap();
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_circlift"))
        .args([
            "critical",
            "--input",
            input.to_str().unwrap(),
            "--grid",
            "64",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("degenerate probe"), "stderr was: {stderr}");
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "[]");
}

#[test]
fn binary_rejects_unknown_flags_with_usage_error() {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_circlift"))
        .args(["validate", "--no-such-flag"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn probe_file_schema_round_trips() {
    let dir = workdir("probe-schema");
    let input = write_paper_probe(&dir);
    let text = fs::read_to_string(&input).unwrap();
    let probe: Probe = serde_json::from_str(&text).unwrap();
    let again = serde_json::to_string(&probe).unwrap();
    assert_eq!(text, again);
}
