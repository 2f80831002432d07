//! Rendezvous semantics against an independent brute-force enumerator.

mod support;

use sandal::checker::{ChannelState, CheckConfig, Checker, StepLabel};
use sandal::ir::Action;
use sandal::types::Value;
use sandal::{corpus, System};
use support::rendezvous::{assert_isomorphic, handshake_safe, Op, Oracle};

const PINGPONG_STATES: usize = 12;

#[test]
fn pingpong_matches_oracle() {
    // Channels: 0 receiver_to_starter, 1 starter_to_receiver.
    let oracle = Oracle {
        procs: vec![
            vec![Op::Var(0), Op::Send(1, true), Op::Recv(0, 0)],
            vec![Op::Var(0), Op::Recv(1, 0), Op::Send(0, true)],
        ],
        nvars: vec![1, 1],
        nchans: 2,
    };
    let sys = System::from_source(corpus::PINGPONG).unwrap();
    let checker = Checker::new(&sys, CheckConfig::default());
    let graph = checker.explore().unwrap();
    assert_isomorphic(&sys, &graph, &oracle, &[vec!["v"], vec!["v"]]);
    assert_eq!(graph.len(), PINGPONG_STATES);
    assert!(checker.check_invariant(handshake_safe).unwrap().verdict.is_pass());
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

const TWO_SENDERS_STATES: usize = 19;

#[test]
fn two_senders_one_receiver_matches_oracle() {
    let oracle = Oracle {
        procs: vec![
            vec![Op::Send(0, true)],
            vec![Op::Send(0, false)],
            vec![Op::Var(0), Op::Var(1), Op::Recv(0, 0), Op::Recv(0, 1)],
        ],
        nvars: vec![0, 0, 2],
        nchans: 1,
    };
    let sys = System::from_source(TWO_SENDERS).unwrap();
    let checker = Checker::new(&sys, CheckConfig::default());
    let graph = checker.explore().unwrap();
    assert_isomorphic(&sys, &graph, &oracle, &[vec![], vec![], vec!["a", "b"]]);
    assert_eq!(graph.len(), TWO_SENDERS_STATES);
    assert!(checker.check_invariant(handshake_safe).unwrap().verdict.is_pass());

    // Neither message is lost or duplicated: once the receiver is done it
    // holds both values.
    let r = 2;
    let term = sys.automata[r].terminal;
    let (a, b) = (
        sys.instance.template_of(r).local("a").unwrap(),
        sys.instance.template_of(r).local("b").unwrap(),
    );
    let done: Vec<_> = graph.states.iter().filter(|s| s.procs[r].loc == term).collect();
    assert!(!done.is_empty());
    for s in done {
        assert_ne!(s.local(r, a), s.local(r, b));
    }
}

#[test]
fn one_sender_two_receivers_deliver_once() {
    let src = "proc S(out channel { bool }) {\n  send(out, true)\n}\n\
               proc R(inp channel { bool }) {\n  var x bool\n  recv(inp, x)\n}\n\
               init {\n  c : channel { bool },\n  s : S(c),\n  r1 : R(c),\n  r2 : R(c),\n}\n";
    let sys = System::from_source(src).unwrap();
    let graph = Checker::new(&sys, CheckConfig::default()).explore().unwrap();
    let x = sys.instance.template_of(1).local("x").unwrap();
    for (i, s) in graph.states.iter().enumerate() {
        let got = [1, 2]
            .iter()
            .filter(|&&r| s.local(r, x) == Value::Bool(true))
            .count();
        assert!(got <= 1);
        if graph.edges[i] == [(StepLabel::Stutter, i as u32)] {
            assert_eq!(got, 1, "deadlock with {got} deliveries");
        }
    }
}

#[test]
fn nonblocking_receive_has_exactly_one_branch() {
    let src = "proc S(out channel { bool }) {\n  send(out, true)\n}\n\
               proc R(inp channel { bool }) {\n  var x bool\n  var got bool = nonblock_recv(inp, x)\n}\n\
               init {\n  c : channel { bool },\n  s : S(c),\n  r : R(c),\n}\n";
    let sys = System::from_source(src).unwrap();
    let checker = Checker::new(&sys, CheckConfig::default());
    let graph = checker.explore().unwrap();
    let out = sys.automata[1].outgoing();
    let branch = (0..out.len()).find(|&l| out[l].len() == 2).unwrap();
    let mut seen = 0;
    for (i, s) in graph.states.iter().enumerate() {
        if s.procs[1].loc.index() != branch {
            continue;
        }
        seen += 1;
        let moves = graph.edges[i]
            .iter()
            .filter(|(l, _)| l.process() == Some(1))
            .count();
        assert_eq!(moves, 1);
    }
    assert!(seen > 1);
}

#[test]
fn sender_done_implies_value_delivered() {
    let src = "proc S(out channel { bool }) {\n  send(out, true)\n}\n\
               proc R(inp channel { bool }) {\n  var x bool\n  recv(inp, x)\n}\n\
               init {\n  c : channel { bool },\n  s : S(c),\n  r : R(c),\n}\n";
    let sys = System::from_source(src).unwrap();
    let graph = Checker::new(&sys, CheckConfig::default()).explore().unwrap();
    let x = sys.instance.template_of(1).local("x").unwrap();
    for s in &graph.states {
        if s.procs[0].loc == sys.automata[0].terminal {
            assert_eq!(s.local(1, x), Value::Bool(true));
        }
    }
}

#[test]
fn corpus_handshakes_are_safe() {
    for (name, src) in corpus::corpus() {
        let sys = System::from_source(src).unwrap();
        let checker = Checker::new(&sys, CheckConfig::default());
        let graph = checker.explore().unwrap();
        assert!(graph.states.iter().all(handshake_safe), "{name}");
        // Every receive copies the value currently in the slot.
        for (i, out) in graph.edges.iter().enumerate() {
            let s = graph.state(i as u32);
            for &(label, t) in out {
                let StepLabel::Fire {
                    process,
                    transition,
                } = label
                else {
                    continue;
                };
                for a in &sys.automata[process].transitions[transition].actions {
                    if let Action::CopyBuffer(c, vars) = a {
                        let ChannelState::Rendezvous {
                            buffer: Some(vals), ..
                        } = &s.chans[c.index()]
                        else {
                            panic!("{name}: receive from an empty slot");
                        };
                        let after = graph.state(t);
                        for (v, x) in vars.iter().zip(vals.iter()) {
                            assert_eq!(after.local(process, *v), *x, "{name}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn unrolled_loop_follows_binding_order() {
    let sys = System::from_source(corpus::TWO_PC_NOFAULT).unwrap();
    let arbiter = sys.instance.process_index("arbiter").unwrap();
    let offers: Vec<String> = sys.automata[arbiter]
        .transitions
        .iter()
        .flat_map(|t| &t.actions)
        .filter_map(|a| match a {
            Action::SetReady(c, true) => Some(sys.instance.channel(*c).name.clone()),
            _ => None,
        })
        .take(2)
        .collect();
    assert_eq!(offers, ["chWorker1Recv", "chWorker2Recv"]);
}
