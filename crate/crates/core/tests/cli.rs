use hybrid_mknf::cli::run;
use std::io::Cursor;
use std::path::PathBuf;
use std::process::Command;

fn kb(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "examples", "kb", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn call(args: &[&str]) -> (i32, String) {
    call_with_input(args, "")
}

fn call_with_input(args: &[&str], input: &str) -> (i32, String) {
    let mut out = Vec::new();
    let mut argv = vec!["hybridmknf"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut Cursor::new(input.as_bytes().to_vec()));
    (code, String::from_utf8(out).unwrap())
}

fn temp_kb(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("hybridmknf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn query_exit_codes() {
    let ex = kb("existential.kb");
    assert_eq!(call(&["query", &ex, "G(a)"]), (0, "true\n".into()));
    assert_eq!(call(&["query", &ex, "G(b)"]), (1, "false\n".into()));
    let run = kb("running.kb");
    assert_eq!(call(&["query", &run, "E(a)"]), (4, "undefined\n".into()));
    assert_eq!(call(&["query", &run, "D(X)"]).0, 3);
    assert_eq!(call(&["query", &run, "p(X"]).0, 2);
    for strategy in ["local", "batched"] {
        let (code, out) = call(&["--strategy", strategy, "query", &run, "p(X), o(X)"]);
        assert_eq!(code, 0);
        assert_eq!(out, "X=a: true\nX=b: true\n");
    }
}

#[test]
fn parse_and_safety_errors() {
    let bad = temp_kb("bad.kb", "%tbox\nA <= B\n");
    assert_eq!(call(&["classify", &bad]).0, 2);
    let unsafe_kb = temp_kb("unsafe.kb", "%tbox\nC <= D.\n%rules\np(X) :- C(X).\n");
    assert_eq!(call(&["translate", &unsafe_kb]).0, 3);
    let alc = temp_kb("alc.kb", "%tbox\nA <= forall r.B.\n");
    assert_eq!(call(&["classify", &alc]).0, 3);
    assert_eq!(call(&["classify", "/nonexistent/file.kb"]).0, 2);
    assert_eq!(call(&["frobnicate"]).0, 2);
}

#[test]
fn inconsistent_ontology() {
    let p = temp_kb("incons.kb", "%tbox\nA and B <= bot.\n%abox\nA(a).\nB(a).\n");
    for cmd in ["translate", "model", "check"] {
        assert_eq!(call(&[cmd, &p]).0, 5, "{cmd}");
    }
    assert_eq!(call(&["query", &p, "A(a)"]).0, 5);
}

#[test]
fn check_verdicts() {
    let (code, out) = call(&["check", &kb("contradiction.kb")]);
    assert_eq!(code, 6);
    assert!(out.contains("Γ'(P_ω) ⊂ Γ(P_ω)"), "{out}");
    assert_eq!(call(&["check", &kb("undefined_body.kb")]).0, 6);
    assert_eq!(call(&["check", &kb("existential.kb")]), (0, "MKNF-consistent\n".into()));
    let (code, out) = call(&["--format", "structured", "check", &kb("existential.kb")]);
    assert_eq!((code, out.as_str()), (0, "kind=verdict value=consistent text=\n"));
    let (_, out) = call(&["--trace", "check", &kb("running.kb")]);
    assert!(out.contains("N_1 = "), "{out}");
    assert!(out.contains("unfounded sets skipped"), "{out}");
    let (_, out) = call(&["--trace", "check", &kb("contradiction.kb")]);
    assert!(out.contains("U^d_0 = {"), "{out}");
    let (_, out) = call(&["--trace", "--unfounded-cap", "2", "check", &kb("contradiction.kb")]);
    assert!(out.contains("unfounded sets skipped"), "{out}");
}

#[test]
fn model_output() {
    let (code, out) = call(&["model", &kb("existential.kb")]);
    assert_eq!(code, 0);
    assert!(out.starts_with("%true\n"));
    assert!(out.contains("G(a).") && out.contains("%false"));
    let (code, out) = call(&["model", &kb("marker.kb")]);
    assert_eq!(code, 6);
    assert!(out.contains("conflict: R(a)"), "{out}");
    let (code, out) = call(&["--format", "structured", "model", "--semantic", &kb("existential.kb")]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l == "kind=atom value=true text=G(a)"), "{out}");
    assert_eq!(call(&["--ground-cap", "1", "model", "--semantic", &kb("existential.kb")]).0, 7);
    assert_eq!(call(&["--ground-cap", "0", "model", &kb("existential.kb")]).0, 2);
}

#[test]
fn classify_reduce_translate() {
    assert_eq!(call(&["classify", &kb("empty.kb")]), (0, "S(top) = {top}\n".into()));
    let (_, out) = call(&["reduce", &kb("existential.kb")]);
    let reduced = out.split("# reduced\n").nth(1).unwrap();
    assert!(!reduced.contains("<= exists"));
    let (_, out) = call(&["translate", &kb("running.kb")]);
    assert!(out.contains("E^d(X) :- not E(X), o^d(X), not N^E(X).  #tag: user-2b.i"), "{out}");
    let (_, out) = call(&["--format", "structured", "translate", "--undouble-guards", &kb("running.kb")]);
    assert!(out.contains("kind=rule tag=user-2b.ii text=p^d(X) :- not D(X), o(X)."), "{out}");
}

#[test]
fn subcommands_are_deterministic() {
    for args in [
        vec!["classify", "existential.kb"],
        vec!["translate", "running.kb"],
        vec!["model", "running.kb"],
        vec!["--trace", "query", "running.kb", "p(X), o(X)"],
        vec!["--strategy", "batched", "--trace", "query", "running.kb", "E(a)"],
    ] {
        let args: Vec<String> =
            args.iter().map(|a| if a.ends_with(".kb") { kb(a) } else { a.to_string() }).collect();
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(call(&args), call(&args));
    }
}

#[test]
fn repl_session() {
    let input = "E(a)\n:probe E(b)\n:probe E(a)\n:trace on\nnot D(a)\n:trace off\np(X\n:what\n:quit\nE(a)\n";
    let (code, out) = call_with_input(&["repl", &kb("running.kb")], input);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "undefined");
    assert!(lines[1].starts_with("MKNF-inconsistent: E(b)"));
    assert_eq!(lines[2], "not flagged");
    assert_eq!(lines[3], "true");
    assert!(out.contains("[complete]"));
    assert!(out.contains("error: 1:4: syntax error"));
    assert!(out.contains("commands: :probe A"));
    // nothing after :quit
    assert!(out.trim_end().ends_with(":quit"));
}

/// `model` and `query` agree on every atom.
#[test]
fn model_agrees_with_query() {
    for name in ["running.kb", "existential.kb", "marker.kb", "contradiction.kb", "undefined_body.kb"] {
        let (_, out) = call(&["model", &kb(name)]);
        let mut section = "";
        for line in out.lines() {
            if let Some(s) = line.strip_prefix('%') {
                section = s;
                continue;
            }
            if line.starts_with('#') {
                continue;
            }
            let atom = line.trim_end_matches('.');
            let (_, got) = call(&["query", &kb(name), atom]);
            assert_eq!(got.trim(), section, "{name}: {atom}");
        }
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_hybridmknf");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let o = status(&["query", &kb("existential.kb"), "G(a)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&o.stdout), "true\n");
    assert_eq!(status(&["query", &kb("running.kb"), "E(a)"]).status.code(), Some(4));
    assert_eq!(status(&["check", &kb("contradiction.kb")]).status.code(), Some(6));
    let o = status(&["classify", &temp_kb("bin-bad.kb", "%tbox\nA <= B\n")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bin-bad.kb:"));
    assert_eq!(status(&["--help"]).status.code(), Some(0));
}
