use lndkit_cli::{run_from, Outcome};

fn run(args: &[&str]) -> Outcome {
    let mut v = vec!["lndkit"];
    v.extend_from_slice(args);
    run_from(v)
}

fn write_manifest(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const COMMANDS: &[&str] = &["check-lnd", "exp", "slice", "kernel", "psi", "inject", "certify", "pipeline"];

#[test]
fn every_command_reports_version_and_assumptions() {
    for ex in ["danielewski", "affine-plane"] {
        let manifest = format!("example:{ex}");
        for c in COMMANDS {
            let o = run(&[c, "--manifest", &manifest]);
            assert_eq!(o.code, 0, "{ex} {c}: {}", o.stderr);
            assert!(o.stdout.starts_with("lndkit "), "{c}");
            assert!(o.stdout.contains("assumptions:\n  asserted: K_Delta = k\n  asserted: domain\n"), "{c}");
            assert!(o.stdout.contains("lnd("), "{c}");
        }
    }
}

#[test]
fn example_then_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dani.toml");
    let p = path.to_str().unwrap();
    let o = run(&["example", "danielewski", "--out", p]);
    assert_eq!(o.code, 0);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), o.stdout);
    let o = run(&["pipeline", "--manifest", p]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.contains("  N: 2\n  n: 2\n"));
    assert!(o.stdout.contains("verdict: success: N = 2, n = 2"));
}

#[test]
fn out_writes_text_and_dump() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.txt");
    let o = run(&["psi", "--manifest", "example:danielewski", "--out", out.to_str().unwrap()]);
    assert_eq!(o.code, 0);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), o.stdout);
    let dump: toml::Table = toml::from_str(&std::fs::read_to_string(dir.path().join("report.txt.toml")).unwrap()).unwrap();
    assert_eq!(dump["report"]["command"].as_str(), Some("psi"));
    assert_eq!(dump["psi"]["generic_rank"].as_integer(), Some(2));
    let assumptions = dump["report"]["assumptions"].as_array().unwrap();
    assert!(assumptions.iter().any(|a| a.as_str() == Some("asserted: domain")));
}

#[test]
fn empty_derivations_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_manifest(
        &dir,
        "empty.toml",
        "[field]\nbase = \"Q\"\n\n[ring]\nvars = [\"x\"]\ndomain = true\n\n[derivations]\n",
    );
    let o = run(&["psi", "--manifest", &m]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("[derivations]") && o.stderr.contains("no derivations declared"), "{}", o.stderr);
}

#[test]
fn errors_carry_manifest_positions() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_manifest(&dir, "bad.toml", "[field]\nbase = \"Q\"\n\n[ring]\nvars = [\"x\"]\nrelatons = []\n");
    let o = run(&["psi", "--manifest", &m]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("bad.toml:6:1"), "{}", o.stderr);

    let m = write_manifest(
        &dir,
        "poly.toml",
        "[field]\nbase = \"Q\"\n\n[ring]\nvars = [\"x\", \"y\"]\nrelations = [\"x*y + \"]\n",
    );
    let o = run(&["kernel", "--manifest", &m]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("poly.toml:6:") && o.stderr.contains("[ring.relations[0]]"), "{}", o.stderr);

    let o = run(&["psi", "--manifest", "example:nope"]);
    assert_eq!(o.code, 1);
    let o = run(&["psi"]);
    assert_eq!(o.code, 1);
}

const DANI_D1_ONLY: &str = r#"
[field]
base = "Q"

[ring]
vars = ["x", "y", "z"]
relations = ["x*y + z^2 + 1"]
domain = true

[derivations.D1]
values = { y = "-2*z", z = "x" }

[run]
assume_trivial_fixed_field = true
"#;

#[test]
fn single_derivation_pipeline_is_evidence() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_manifest(&dir, "d1.toml", DANI_D1_ONLY);
    let o = run(&["pipeline", "--manifest", &m]);
    assert_eq!(o.code, 2, "{}", o.stderr);
    assert!(o.stdout.contains("GenericNotInjective: Jacobian rank 1 < dim B = 2"));
    let o = run(&["psi", "--manifest", &m]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("generic_injective: false"));
    let o = run(&["certify", "--manifest", &m]);
    assert_eq!(o.code, 2);
}

#[test]
fn pipeline_requires_asserted_fixed_field() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_manifest(&dir, "d1.toml", &DANI_D1_ONLY.replace("assume_trivial_fixed_field = true", ""));
    let o = run(&["pipeline", "--manifest", &m]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("run.assume_trivial_fixed_field"));
}

#[test]
fn oracle_disagreement_on_a_non_domain_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_manifest(
        &dir,
        "fat.toml",
        r#"
[field]
base = "Q"

[ring]
vars = ["x", "y"]
relations = ["x^2"]

[derivations.dy]
values = { y = "1" }

[[points.explicit]]
label = "origin"
coords = ["0", "0"]
"#,
    );
    let o = run(&["inject", "--manifest", &m]);
    assert_eq!(o.code, 2, "{}", o.stderr);
    assert!(o.stdout.contains("not asserted: domain"));
    assert!(o.stdout.contains("oracle disagreement"));
    let o = run(&["inject", "--manifest", &m, "--method", "jacobian"]);
    assert_eq!(o.code, 0);
}

#[test]
fn non_nilpotent_derivation() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_manifest(
        &dir,
        "euler.toml",
        "[field]\nbase = \"Q\"\n\n[ring]\nvars = [\"x\"]\ndomain = true\n\n[derivations.E]\nvalues = { x = \"x\" }\nlnd = \"certify(5)\"\n",
    );
    let o = run(&["check-lnd", "--manifest", &m]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("verdict: not certified: E"));
    assert!(o.stdout.contains("unverified: lnd(E)"));
    let o = run(&["exp", "--manifest", &m]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("[derivations.E]"), "{}", o.stderr);
}

#[test]
fn conic_classification() {
    let o = run(&["xk-conic", "--manifest", "example:char2-conic", "--lambda", "0,1,t"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.contains("derivation pipeline unavailable (char 2)"));
    assert!(o.stdout.contains("verdict: 3 points in X_k(B), 3 points outside"));
    let o = run(&["pipeline", "--manifest", "example:char2-conic"]);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("derivation pipeline unavailable (char 2)"));
    let o = run(&["xk-conic", "--manifest", "example:danielewski"]);
    assert_eq!(o.code, 1);
}

#[test]
fn flags_override_run_block() {
    let a = run(&["inject", "--manifest", "example:danielewski", "--seed", "5"]);
    let b = run(&["inject", "--manifest", "example:danielewski"]);
    assert_eq!(a.code, 0);
    assert!(a.stdout.contains("seed: 5\n"));
    assert_ne!(a.stdout, b.stdout);
    let c = run(&["inject", "--manifest", "example:danielewski", "--method", "jacobian"]);
    assert!(c.stdout.contains("method: jacobian") && !c.stdout.contains("kernel_trivial"));
}

#[test]
fn repeated_runs_are_identical() {
    for c in COMMANDS {
        let a = run(&[c, "--manifest", "example:danielewski", "--seed", "11"]);
        let b = run(&[c, "--manifest", "example:danielewski", "--seed", "11"]);
        assert_eq!(a, b, "{c}");
    }
}
