use std::ffi::OsString;
use std::path::Path;

use raag_flats::builders::{
    build_sl3, build_sl5z, build_so32, default_sl3_rotations, default_so32_rotations, power_scale, Configuration,
};
use raag_flats::certify::{certify_configuration, Verdict};
use raag_flats::cli::run;
use serde_json::Value;

fn cli(args: &[&str]) -> (i32, String, String) {
    let argv: Vec<OsString> = std::iter::once("raag-flats").chain(args.iter().copied()).map(OsString::from).collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_config(p: &Path) -> Configuration {
    let v: Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
    Configuration::from_json(&v).unwrap()
}

fn all_three() -> Vec<Configuration> {
    let (a1, a2) = default_sl3_rotations();
    let (b1, b2, b3) = default_so32_rotations();
    vec![build_sl3(&a1, &a2).unwrap(), build_so32(&b1, &b2, &b3).unwrap(), build_sl5z(2).unwrap()]
}

#[test]
fn emitted_sl3_records_solved_rotations_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("sl3.json");
    let (code, _, err) = cli(&["build-sl3", "--emit", path_str(&file)]);
    assert_eq!(code, 0, "{err}");
    let config = read_config(&file);
    for key in ["r1", "r2", "r3", "r4"] {
        assert!(config.provenance().get(key).is_some(), "missing {key}");
    }
    let (r1, r2) = default_sl3_rotations();
    assert_eq!(config, build_sl3(&r1, &r2).unwrap());
    assert_eq!(Configuration::from_json(&config.to_json()).unwrap(), config);
}

#[test]
fn emitted_output_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for construction in ["sl3", "so32", "sl5z"] {
        let a = dir.path().join(format!("{construction}-a.json"));
        let b = dir.path().join(format!("{construction}-b.json"));
        assert_eq!(cli(&["emit", construction, "--output", path_str(&a)]).0, 0);
        assert_eq!(cli(&["emit", construction, "--output", path_str(&b)]).0, 0);
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    }
}

#[test]
fn certify_and_smoke_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("sl5z.json");
    let cert = dir.path().join("cert.json");
    assert_eq!(cli(&["build-sl5z", "--n", "3", "--emit", path_str(&file)]).0, 0);
    let (code, _, _) = cli(&["certify", path_str(&file), "--output", path_str(&cert)]);
    assert_eq!(code, 0);
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(report["verdict"], "pass");
    assert_eq!(report["pair_count"], 75);
    let (code, out, _) = cli(&["smoke", path_str(&file), "--syllables", "3"]);
    assert_eq!(code, 0, "{out}");

    // A configuration with a generator swapped for its neighbour no longer certifies.
    let broken = read_config(&file).with_generator(2, read_config(&file).generator(1).clone()).unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&broken.to_json()).unwrap()).unwrap();
    assert_eq!(cli(&["certify", path_str(&bad)]).0, 1);
    assert_eq!(cli(&["certify", path_str(&dir.path().join("missing.json"))]).0, 2);
}

#[test]
fn powered_configurations_still_certify() {
    for c in all_three() {
        let n = c.graph().vertex_count();
        for pattern in [vec![2; n], (0..n).map(|i| 1 + (i % 3) as u32).collect()] {
            let scaled = power_scale(&c, &pattern).unwrap();
            let cert = certify_configuration(&scaled);
            assert!(cert.verdict.is_pass(), "{} {pattern:?}: {:?}", c.name(), cert.verdict);
        }
    }
}

#[test]
fn witnesses_are_nonzero_commutator_entries() {
    for c in all_three() {
        let cert = certify_configuration(&c);
        for check in &cert.pairs {
            let w = check.witness.as_ref().expect("every pair witnessed");
            let a = check.requirement.left.matrix(&c).unwrap();
            let b = check.requirement.right.matrix(&c).unwrap();
            let comm = a.commutator(b).unwrap();
            assert_eq!(comm.get(w.row, w.col), &w.value);
            assert!(!w.value.is_zero());
        }
    }
}

#[test]
fn replacing_a_generator_fails_certification() {
    for c in all_three() {
        let n = c.graph().vertex_count();
        for v in 0..n {
            let other = c.generator((v + 2) % n).clone();
            let cert = certify_configuration(&c.with_generator(v, other).unwrap());
            assert!(matches!(cert.verdict, Verdict::Fail(_)), "{} vertex {v}", c.name());
        }
    }
}
