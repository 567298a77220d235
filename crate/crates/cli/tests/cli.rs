//! End-to-end tests that drive the installed binary: pinned outputs for the
//! published examples, the exit-code taxonomy, machine-mode determinism,
//! and oracle session persistence.

use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::atomic::{AtomicUsize, Ordering};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_numerosity"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

/// A fresh scratch directory per call, under the system temp dir.
fn scratch() -> PathBuf {
    static COUNTER: AtomicUsize = AtomicUsize::new(0);
    let dir = std::env::temp_dir().join(format!(
        "numerosity-cli-test-{}-{}",
        std::process::id(),
        COUNTER.fetch_add(1, Ordering::Relaxed)
    ));
    std::fs::create_dir_all(&dir).expect("create scratch dir");
    dir
}

#[test]
fn count_of_a_product_is_exact() {
    let out = run(&["count", "ap(0,2)*ap(1,2)", "5"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "9\n");
}

#[test]
fn norm_of_the_first_interesting_set() {
    let out = run(&["nu", "{0,1,2,3}"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "nu=1\n");
    let naive = run(&["nu", "{0,1,2,3}", "--strategy", "naive"]);
    assert_eq!(stdout(&naive), "nu=1\n");
}

#[test]
fn equinum_after_committing_the_odd_indices() {
    let oracle = scratch().join("odds.ora");
    let oracle = oracle.to_str().expect("utf-8 path");

    let commit = run(&[
        "oracle",
        "commit",
        "periodic mod=2 residues=1",
        "--oracle",
        oracle,
    ]);
    assert_eq!(code(&commit), 0, "{commit:?}");

    let expected = "verdict=Equal D=periodic mod=2 residues=1 cert=periodic mod=2 residues=1 H=64";
    let machine = run(&[
        "equinum",
        "ap(0,2)",
        "ap(1,2)",
        "--oracle",
        oracle,
        "--horizon",
        "64",
        "--machine",
    ]);
    assert_eq!(code(&machine), 0);
    assert_eq!(stdout(&machine), format!("{expected}\n"));

    // Human mode leads with the same verdict line, then the evidence.
    let human = run(&[
        "equinum",
        "ap(0,2)",
        "ap(1,2)",
        "--oracle",
        oracle,
        "--horizon",
        "64",
    ]);
    assert_eq!(code(&human), 0);
    let text = stdout(&human);
    assert_eq!(text.lines().next(), Some(expected));
    assert!(text.contains("evidence partition"), "{text}");

    // Without the committed oracle the same query is open.
    let open = run(&["equinum", "ap(0,2)", "ap(1,2)", "--machine"]);
    assert_eq!(code(&open), 0);
    assert!(
        stdout(&open).starts_with("verdict=DependsOnOracle"),
        "{}",
        stdout(&open)
    );
}

#[test]
fn exit_codes_follow_the_taxonomy() {
    // 0: success.
    assert_eq!(code(&run(&["count", "range(0,3)", "7"])), 0);
    // 2: parse error (zero progression step).
    assert_eq!(code(&run(&["count", "ap(0,0)", "5"])), 2);
    // 2: domain error (mixed dimensions).
    assert_eq!(code(&run(&["count", "ap(0,2) | ap(0,1)*ap(0,1)", "5"])), 2);
    // 2: failed precondition (naturals do not embed into the evens
    // without a commitment accepting the domination set).
    assert_eq!(code(&run(&["subset-rep", "ap(0,1)", "ap(0,2)"])), 2);
    // 2: usage error.
    assert_eq!(code(&run(&["frobnicate"])), 2);
    // 3: work budget exhausted by the coloring search.
    assert_eq!(
        code(&run(&["nu", "{0,1,2,3,4,5,6}", "--budget", "1000"])),
        3
    );
    // 3: horizon too small for the witness construction.
    assert_eq!(
        code(&run(&[
            "subset-rep",
            "ap(0,2)",
            "ap(0,1)",
            "--horizon",
            "0"
        ])),
        3
    );
}

#[test]
fn machine_output_is_deterministic() {
    let commands: [&[&str]; 4] = [
        &["seq", "ap(1,3) * range(0,9)", "--machine"],
        &["cmp", "ap(0,3)", "range(0,5)", "--machine"],
        &["axiom-check", "--samples", "4", "--seed", "3", "--machine"],
        &[
            "decompose",
            "(1)=2, (3,4)=-1, (2,2)=1",
            "--bound",
            "2",
            "--machine",
        ],
    ];
    for args in commands {
        let first = run(args);
        let second = run(args);
        assert_eq!(code(&first), code(&second));
        assert_eq!(stdout(&first), stdout(&second), "{args:?}");
        assert_eq!(
            stdout(&first).lines().count(),
            1,
            "machine mode prints one line: {args:?}"
        );
    }
}

#[test]
fn oracle_session_round_trip() {
    let dir = scratch();
    let session = dir.join("session.ora");
    let session = session.to_str().expect("utf-8 path");
    let copy = dir.join("copy.ora");
    let copy = copy.to_str().expect("utf-8 path");

    let commit = run(&[
        "oracle",
        "commit",
        "periodic mod=3 residues=0",
        "--oracle",
        session,
    ]);
    assert_eq!(code(&commit), 0);

    // A second, consistent commitment accumulates.
    let refine = run(&[
        "oracle",
        "commit",
        "periodic mod=2 residues=0",
        "--oracle",
        session,
    ]);
    assert_eq!(code(&refine), 0);
    assert!(
        stdout(&refine).contains("commitments=2"),
        "{}",
        stdout(&refine)
    );

    // An inconsistent commitment is refused and leaves the session intact.
    let clash = run(&[
        "oracle",
        "commit",
        "periodic mod=6 residues=1",
        "--oracle",
        session,
    ]);
    assert_eq!(code(&clash), 2);
    let list = run(&["oracle", "list", "--oracle", session]);
    assert!(
        stdout(&list).starts_with("commitments=2"),
        "{}",
        stdout(&list)
    );

    // Save a copy, reload it, and query through it.
    assert_eq!(
        code(&run(&["oracle", "save", copy, "--oracle", session])),
        0
    );
    let loaded = run(&["oracle", "load", copy]);
    assert_eq!(code(&loaded), 0);
    assert!(
        stdout(&loaded).contains("commitments=2"),
        "{}",
        stdout(&loaded)
    );

    let member = run(&[
        "oracle",
        "query",
        "periodic mod=6 residues=0",
        "--oracle",
        session,
        "--machine",
    ]);
    assert_eq!(code(&member), 0);
    assert!(
        stdout(&member).starts_with("answer=member"),
        "{}",
        stdout(&member)
    );

    let rejected = run(&[
        "oracle",
        "query",
        "periodic mod=2 residues=1",
        "--oracle",
        session,
        "--machine",
    ]);
    assert!(
        stdout(&rejected).starts_with("answer=non-member"),
        "{}",
        stdout(&rejected)
    );
}

#[test]
fn bare_value_commands_print_only_the_value() {
    let phi = run(&["phi", "3 + 2*S[ap(0,2)] - S[range(0,9)]", "6"]);
    assert_eq!(stdout(&phi), "4\n");
    let ack = run(&["ackermann", "2", "3"]);
    assert_eq!(stdout(&ack), "9\n");
    let neg = run(&["phi", "-S[ap(0,1)]", "4"]);
    assert_eq!(stdout(&neg), "-5\n");
}
