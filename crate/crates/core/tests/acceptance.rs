//! Acceptance suite: one PASS/FAIL line per criterion on stderr.
//!
//! Run with `cargo test -p sandal --test acceptance`. The lines are written
//! straight to the stderr handle so they show up without `--nocapture`.

mod support;

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sandal::checker::{eval_prop, CheckConfig, Checker, SpecPattern, StepLabel};
use sandal::smv::emit_smv;
use sandal::{corpus, instantiate_source, System};
use support::naive::{atoms_of, pattern, random_prop, validate, Naive};
use support::rendezvous::{assert_isomorphic, handshake_safe, Op, Oracle};

const TWO_PC: [(&str, &str, bool); 5] = [
    ("2pc_nofault", corpus::TWO_PC_NOFAULT, true),
    ("2pc_timeout", corpus::TWO_PC_TIMEOUT, true),
    ("2pc_drop", corpus::TWO_PC_DROP, false),
    ("2pc_shutdown", corpus::TWO_PC_SHUTDOWN, false),
    ("2pc_all", corpus::TWO_PC_ALL, false),
];

fn verdict_matrix() {
    let start = Instant::now();
    for (name, src, pass) in TWO_PC {
        let sys = System::from_source(src).unwrap();
        assert_eq!(sys.instance.specs.len(), 1, "{name}");
        let checker = Checker::new(&sys, CheckConfig::default());
        let out = checker.check(&sys.instance.specs[0].formula).unwrap();
        assert_eq!(out.verdict.is_pass(), pass, "{name}");
    }
    assert!(start.elapsed() < Duration::from_secs(60), "{:?}", start.elapsed());
}

fn counterexamples_replay() {
    let mut failures = 0;
    for (name, src) in corpus::corpus() {
        let sys = System::from_source(src).unwrap();
        for fairness in [true, false] {
            let checker = Checker::new(
                &sys,
                CheckConfig {
                    fairness,
                    ..CheckConfig::default()
                },
            );
            for spec in &sys.instance.specs {
                let out = checker.check(&spec.formula).unwrap();
                let Some(cx) = out.verdict.counterexample() else {
                    continue;
                };
                failures += 1;
                cx.replay(&checker)
                    .unwrap_or_else(|e| panic!("{name}: {e}"));
                let end = cx.state(cx.steps.len());
                match cx.loop_start {
                    Some(k) => assert_eq!(end, cx.state(k), "{name}: loop not closed"),
                    None => {
                        let pat = SpecPattern::extract(&spec.formula).unwrap();
                        assert!(!eval_prop(pat.prop(), end), "{name}: final state satisfies the property");
                    }
                }
            }
        }
    }
    assert_eq!(failures, 6);
}

/// Removes fault markers and maps `timeout_recv` back to `recv`.
fn normalize(line: &str) -> String {
    line.replace(" @drop", "")
        .replace(" @shutdown", "")
        .replace("timeout_recv(", "recv(")
}

fn modularity() {
    let base: Vec<&str> = corpus::TWO_PC_NOFAULT.lines().collect();
    for (name, src, _) in &TWO_PC[1..] {
        let variant: Vec<&str> = src.lines().collect();
        assert_eq!(variant.len(), base.len(), "{name}: line count");
        let mut changed = 0;
        for (i, (a, b)) in base.iter().zip(&variant).enumerate() {
            if a != b {
                changed += 1;
                assert_eq!(normalize(b), *a, "{name}: line {} is not a fault-only change", i + 1);
            }
        }
        assert!(changed > 0, "{name}: identical to the no-fault model");
    }
}

const TWO_SENDERS: &str = "\
proc S(out channel { bool }, v bool) {
  send(out, v)
}
proc R(inp channel { bool }) {
  var a bool
  var b bool
  recv(inp, a)
  recv(inp, b)
}
init {
  c : channel { bool },
  s1 : S(c, true),
  s2 : S(c, false),
  r : R(c),
}
";

fn handshake_oracle() {
    let cases = [
        (
            corpus::PINGPONG,
            Oracle {
                procs: vec![
                    vec![Op::Var(0), Op::Send(1, true), Op::Recv(0, 0)],
                    vec![Op::Var(0), Op::Recv(1, 0), Op::Send(0, true)],
                ],
                nvars: vec![1, 1],
                nchans: 2,
            },
            vec![vec!["v"], vec!["v"]],
        ),
        (
            TWO_SENDERS,
            Oracle {
                procs: vec![
                    vec![Op::Send(0, true)],
                    vec![Op::Send(0, false)],
                    vec![Op::Var(0), Op::Var(1), Op::Recv(0, 0), Op::Recv(0, 1)],
                ],
                nvars: vec![0, 0, 2],
                nchans: 1,
            },
            vec![vec![], vec![], vec!["a", "b"]],
        ),
    ];
    for (src, oracle, names) in cases {
        let sys = System::from_source(src).unwrap();
        let checker = Checker::new(&sys, CheckConfig::default());
        let graph = checker.explore().unwrap();
        assert_isomorphic(&sys, &graph, &oracle, &names);
        assert!(checker.check_invariant(handshake_safe).unwrap().verdict.is_pass());
    }
}

fn weaving_superset() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce);
    for (name, src) in corpus::corpus() {
        let inst = instantiate_source(src).unwrap();
        let plain = System::unwoven(inst.clone());
        let woven = System::woven(inst);
        let base = Checker::new(&plain, CheckConfig::default());
        let full = Checker::new(&woven, CheckConfig::default());
        for trial in 0..1000 {
            let mut s = base.initial_state();
            assert_eq!(s, full.initial_state());
            for step in 0..200 {
                let (label, next) = base.successors(&s).choose(&mut rng).unwrap().clone();
                if label == StepLabel::Stutter {
                    break;
                }
                let ok = full.successors(&s).into_iter().any(|(l, t)| l == label && t == next);
                assert!(ok, "{name}: trace {trial} diverges at step {step}");
                s = next;
            }
        }
    }
}

fn fragment_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0f4a);
    let mut systems = 0;
    for (name, src) in corpus::corpus() {
        let sys = System::from_source(src).unwrap();
        let checker = Checker::new(&sys, CheckConfig::default());
        let graph = checker.explore().unwrap();
        if graph.len() > 10_000 {
            continue;
        }
        systems += 1;
        let atoms = atoms_of(&sys.instance);
        let naive = Naive::new(&graph, sys.automata.len());
        let specs: Vec<SpecPattern> = (0..24)
            .map(|i| pattern(i, random_prop(&mut rng, &atoms, 2)))
            .collect();
        for pat in &specs {
            for fairness in [false, true] {
                let expected = naive.violated(pat, fairness);
                let outcome = match pat {
                    SpecPattern::Always(p) => checker.check_safety(p),
                    _ => checker.check_liveness(pat, fairness),
                }
                .unwrap();
                let text = sys.instance.formula_text(&pat.to_formula());
                assert_eq!(!outcome.verdict.is_pass(), expected, "{name}: {text}, fairness {fairness}");
                if let Some(cx) = outcome.verdict.counterexample() {
                    if cx.is_lasso() {
                        validate(&graph, cx, pat, fairness);
                    }
                }
            }
        }
    }
    assert_eq!(systems, 6);
}

fn smv_determinism() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for (name, src) in corpus::corpus() {
        let first = emit_smv(&System::from_source(src).unwrap(), true).unwrap().to_string();
        let second = emit_smv(&System::from_source(src).unwrap(), true).unwrap().to_string();
        assert_eq!(first, second, "{name}");
        let golden = std::fs::read_to_string(dir.join(format!("{name}.smv"))).unwrap();
        assert_eq!(first, golden, "{name}");
    }
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn()); 7] = [
        ("2PC verdict matrix", verdict_matrix),
        ("failing verdicts carry replayable counterexamples", counterexamples_replay),
        ("fault variants differ only by markers", modularity),
        ("handshake graphs equal the brute-force enumerator", handshake_oracle),
        ("unwoven traces replay on woven systems", weaving_superset),
        ("pattern checks equal the naive oracle", fragment_oracle),
        ("SMV emission is deterministic and matches golden files", smv_determinism),
    ];
    let mut failed = Vec::new();
    let mut err = std::io::stderr();
    for (i, (title, run)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(run));
        let status = if result.is_ok() { "PASS" } else { "FAIL" };
        writeln!(err, "criterion {}: {title} ... {status}", i + 1).unwrap();
        if result.is_err() {
            failed.push(i + 1);
        }
    }
    writeln!(err, "criterion 8: timing, BDD and external state counts ... EXCLUDED").unwrap();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
