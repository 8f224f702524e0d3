//! End-to-end checks of the command-line interface: exit codes, output
//! determinism, and the bundled-rule workflows.

use std::process::Command;

fn subtile() -> Command {
    Command::new(env!("CARGO_BIN_EXE_subtile"))
}

#[test]
fn validate_bundled_rules_exits_zero() {
    for rule in ["pinwheel", "pinwheel_variant"] {
        let out = subtile().args(["validate", rule]).output().unwrap();
        assert!(out.status.success(), "{rule}: {:?}", out);
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.contains("[pass] condition i"));
        assert!(text.contains("[pass] condition ii"));
        assert!(text.contains("[pass] condition iii"));
        assert!(text.contains("[pass] condition v"));
    }
}

#[test]
fn validate_broken_rule_exits_one_and_names_the_condition() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    // shift one child translation: breaks the exact partition
    let text = subtile::rules::BUILTIN_PINWHEEL.replacen(
        "\"translation\": [[\"0\", \"0\"], [\"0\", \"0\"]]",
        "\"translation\": [[\"1/7\", \"0\"], [\"0\", \"0\"]]",
        1,
    );
    assert_ne!(text, subtile::rules::BUILTIN_PINWHEEL);
    std::fs::write(&path, text).unwrap();
    let out = subtile().args(["validate", path.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("[FAIL] condition ii"), "{stdout}");
}

#[test]
fn gen_writes_deterministic_svg_with_stats() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.svg");
    let b = dir.path().join("b.svg");
    for (path, _) in [(&a, 0), (&b, 1)] {
        let out = subtile()
            .args([
                "gen",
                "pinwheel",
                "--proto",
                "0",
                "--level",
                "4",
                "--out",
                path.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert!(out.status.success());
        let stats = String::from_utf8(out.stdout).unwrap();
        assert!(stats.contains("\"tiles\": 625"), "{stats}");
    }
    assert_eq!(
        std::fs::read(&a).unwrap(),
        std::fs::read(&b).unwrap(),
        "identical invocations must be byte-identical"
    );
}

#[test]
fn gen_respects_the_resource_cap() {
    let dir = tempfile::tempdir().unwrap();
    let out = subtile()
        .args([
            "gen",
            "pinwheel",
            "--proto",
            "0",
            "--level",
            "9",
            "--cap",
            "1000",
            "--out",
            dir.path().join("x.svg").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn gen_level_zero_and_variant_level_one() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("one.svg");
    let out = subtile()
        .args(["gen", "pinwheel", "--proto", "0", "--level", "0", "--out", p.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(String::from_utf8(out.stdout).unwrap().contains("\"tiles\": 1"));
    let out = subtile()
        .args([
            "gen",
            "pinwheel_variant",
            "--proto",
            "0",
            "--level",
            "1",
            "--out",
            p.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(String::from_utf8(out.stdout).unwrap().contains("\"tiles\": 10"));
}

#[test]
fn orient_reports_basis_and_comparison() {
    let out = subtile()
        .args(["orient", "pinwheel", "--proto", "0", "--level", "6", "--compare", "pinwheel_variant"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("basis decomposition"), "{text}");
    assert!(text.contains("rot(3/5, 4/5) ∘ rot(4/5, 3/5) = rot(0, 1)"), "{text}");
    assert!(text.contains("DISCREPANCY"), "{text}");
}

#[test]
fn gpq_subcommands() {
    let out = subtile().args(["gpq", "spectrum", "6", "4"]).output().unwrap();
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("{1, 2, 3, 4, 6}"));

    let out = subtile()
        .args(["gpq", "obstruction", "6", "4", "10", "4"])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("3 (realized only in G(6,4))"), "{text}");
    assert!(text.contains("5 (realized only in G(10,4))"), "{text}");

    let out = subtile().args(["gpq", "order", "a b", "5", "3"]).output().unwrap();
    assert!(String::from_utf8(out.stdout).unwrap().contains("infinite"));

    let out = subtile().args(["gpq", "check-relations", "8", "4"]).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("all relators hold"));
}

#[test]
fn distance_identical_specs_give_zero() {
    let out = subtile()
        .args([
            "distance",
            "pinwheel",
            "--left",
            "supertile:0:3:t=(-14,-11/4)",
            "--right",
            "supertile:0:3:t=(-14,-11/4)",
            "--nmax",
            "2",
            "--tol",
            "1e-9",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("distance 0 "));
}

#[test]
fn distance_translated_pair_is_positive_and_symmetric() {
    let run = |l: &str, r: &str| -> f64 {
        let out = subtile()
            .args([
                "distance", "pinwheel", "--left", l, "--right", r, "--nmax", "1", "--tol", "1e-6",
            ])
            .output()
            .unwrap();
        assert!(out.status.success(), "{:?}", out);
        let text = String::from_utf8(out.stdout).unwrap();
        text.split_whitespace().nth(1).unwrap().parse().unwrap()
    };
    let a = "supertile:0:3:t=(-14,-11/4)";
    let b = "supertile:0:3:t=(-141/10,-11/4)";
    let d1 = run(a, b);
    let d2 = run(b, a);
    assert!(d1 > 0.0);
    assert!((d1 - d2).abs() < 2e-6);
}

#[test]
fn usage_errors_exit_two() {
    let out = subtile().args(["validate", "no-such-rule-anywhere"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = subtile().args(["frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = subtile()
        .args(["distance", "pinwheel", "--left", "garbage", "--right", "garbage", "--nmax", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
