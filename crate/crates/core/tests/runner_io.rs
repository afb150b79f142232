//! End-to-end checks of the experiment driver: determinism, report
//! round-trips, CSV emission, and the command-line contract.

use std::process::Command;

use diolab::manifest::{ExperimentKind, Manifest};
use diolab::report::Report;
use diolab::runner;

fn manifest_from(text: &str) -> Manifest {
    Manifest::parse(text).expect("manifest parses")
}

#[test]
fn identical_manifests_give_identical_reports() {
    let text = "kind = best_approx\nsystem = scalar(sqrt2)\nengine = guided\n\
                bounds.y_max = 20000\nbounds.exhaustive_up_to = 1000\n";
    let m = manifest_from(text);
    let a = runner::run(&m).expect("first run");
    let b = runner::run(&m).expect("second run");
    assert_eq!(a.to_comparable_text(), b.to_comparable_text());
}

#[test]
fn structured_report_round_trips_through_disk() {
    let text = "kind = transference\nsystem = scalar(sqrt2)\nsamples = 5\nseed = 3\nbounds.y = 20\n";
    let m = manifest_from(text);
    let report = runner::run(&m).expect("run");
    let dir = tempfile::tempdir().unwrap();
    let written = runner::write_outputs(&report, dir.path(), "t").expect("write");
    // Structured report plus one CSV per table plus the verdicts CSV.
    assert_eq!(written.len(), 1 + report.tables.len() + 1);
    let body = std::fs::read_to_string(&written[0]).unwrap();
    let back = Report::from_structured_text(&body).expect("parse back");
    assert_eq!(back.manifest_echo, report.manifest_echo);
    assert_eq!(back.verdicts, report.verdicts);
    assert_eq!(back.tables, report.tables);
}

#[test]
fn every_template_round_trips() {
    for kind in ExperimentKind::all() {
        let t = Manifest::template(kind);
        let back = Manifest::parse(&t.render()).expect("template parses");
        assert_eq!(back.kind, kind);
    }
}

#[test]
fn verify_rederives_stored_verdicts() {
    let text = "kind = hom_exponents\nsystem = scalar(golden)\nengine = guided\n\
                bounds.y_max = 50000\nbounds.exhaustive_up_to = 2000\n";
    let report = runner::run(&manifest_from(text)).expect("run");
    let rechecked = runner::verify_report(&report);
    let derived: Vec<&str> = rechecked
        .iter()
        .filter(|(_, o)| o.is_some())
        .map(|(n, _)| n.as_str())
        .collect();
    assert!(derived.contains(&"sequence_invariants"));
    assert!(derived.contains(&"dirichlet_bound"));
    assert!(derived.contains(&"growth_step"));
    for (name, outcome) in rechecked {
        if let Some(pass) = outcome {
            assert!(pass, "re-derived verdict {name} must pass");
        }
    }
}

#[test]
fn khintchine_run_and_recheck() {
    let text = "kind = khintchine_audit\nsystem = powers(fib(1,2),2,row)\n\
                bounds.y_max = 20000\ntol = 0.1\n";
    let report = runner::run(&manifest_from(text)).expect("run");
    assert!(report.verdict("khintchine_transfer").unwrap().pass);
    let rechecked = runner::verify_report(&report);
    let kh = rechecked
        .iter()
        .find(|(n, _)| n == "khintchine_transfer")
        .unwrap();
    assert_eq!(kh.1, Some(true));
}

#[test]
fn adversarial_run_produces_certified_tables() {
    let text = "kind = adversarial\nsystem = scalar(golden)\nengine = guided\n\
                bounds.y_max = 200000\nbounds.x_bound = 300\n";
    let report = runner::run(&manifest_from(text)).expect("run");
    for name in ["thinning_growth", "quarter_separation", "prop1_floor"] {
        assert!(report.verdict(name).unwrap().pass, "{name}");
    }
    let rechecked = runner::verify_report(&report);
    for (name, outcome) in rechecked {
        if let Some(pass) = outcome {
            assert!(pass, "{name}");
        }
    }
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_diolab"))
}

#[test]
fn cli_exit_codes() {
    let dir = tempfile::tempdir().unwrap();

    // 4: invalid manifest.
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "kind = best_approx\nsystem = scalar(sqrt2)\nbounds.y_max = 0\n").unwrap();
    let out = binary().arg("run").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));

    // 0: passing run; wrote report files.
    let good = dir.path().join("good.txt");
    std::fs::write(
        &good,
        "kind = best_approx\nsystem = scalar(sqrt2)\nengine = exhaustive\nbounds.y_max = 500\n",
    )
    .unwrap();
    let out = binary()
        .arg("run")
        .arg(&good)
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report_path = dir.path().join("good.report.txt");
    assert!(report_path.exists());

    // 0: verify the stored report.
    let out = binary().arg("verify").arg(&report_path).output().unwrap();
    assert_eq!(out.status.code(), Some(0));

    // 2: a tampered report must fail verification.
    let tampered = std::fs::read_to_string(&report_path)
        .unwrap()
        .replacen("2,2,2,", "2,3,2,", 1);
    let tpath = dir.path().join("tampered.report.txt");
    std::fs::write(&tpath, tampered).unwrap();
    let out = binary().arg("verify").arg(&tpath).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // 3: budget exhaustion.
    let out = binary()
        .arg("run")
        .arg(&good)
        .env("DIOLAB_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));

    // gen-manifest emits a parseable template.
    let out = binary().arg("gen-manifest").arg("transference").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    Manifest::parse(&String::from_utf8_lossy(&out.stdout)).expect("template parses");
}

#[test]
fn environment_overrides_are_echoed() {
    let text = "kind = best_approx\nsystem = scalar(sqrt2)\nengine = exhaustive\nbounds.y_max = 100\n";
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.txt");
    std::fs::write(&path, text).unwrap();
    let out = binary()
        .arg("run")
        .arg(&path)
        .arg("--print")
        .env("DIOLAB_MANTISSA_BITS", "192")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("resolved.mantissa_bits = 192"));
}
