//! Fragment checker against a brute-force oracle.

mod support;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sandal::checker::{eval_prop, find_lasso, CheckConfig, Checker, SpecPattern};
use sandal::ltl::Formula;
use sandal::types::VarId;
use sandal::{corpus, System};
use support::naive::{atoms_of, pattern, random_graph, random_prop, validate, Naive};

#[test]
fn lasso_search_matches_oracle_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    let atoms = [
        Formula::Var { process: 0, var: VarId(0) },
        Formula::Var { process: 0, var: VarId(1) },
    ];
    let mut fails = [0usize; 2];
    let mut disagreements_between_modes = 0;
    for round in 0..1000 {
        let processes = rng.gen_range(1..=3);
        let n = rng.gen_range(1..=12);
        let g = random_graph(&mut rng, n, processes);
        let naive = Naive::new(&g, processes);
        let pat = pattern(round, random_prop(&mut rng, &atoms, 2));
        let mut verdicts = [false; 2];
        for (m, fairness) in [false, true].into_iter().enumerate() {
            let expected = naive.violated(&pat, fairness);
            let found = find_lasso(&g, &pat, processes, fairness);
            assert_eq!(found.is_some(), expected, "round {round}, fairness {fairness}: {pat:?}\n{g:?}");
            if let Some(cx) = found {
                validate(&g, &cx, &pat, fairness);
                fails[m] += 1;
            }
            verdicts[m] = expected;
        }
        // Fairness only removes counterexamples.
        assert!(verdicts[0] || !verdicts[1]);
        if verdicts[0] != verdicts[1] {
            disagreements_between_modes += 1;
        }
    }
    // The generated graphs exercise both outcomes and the fairness filter.
    assert!(fails[0] > 150 && fails[0] < 850, "{fails:?}");
    assert!(disagreements_between_modes >= 10, "{disagreements_between_modes}");
}

#[test]
fn checker_matches_oracle_on_corpus() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for (name, src) in corpus::corpus() {
        let sys = System::from_source(src).unwrap();
        let checker = Checker::new(&sys, CheckConfig::default());
        let graph = checker.explore().unwrap();
        if graph.len() > 10_000 {
            continue;
        }
        let atoms = atoms_of(&sys.instance);
        let naive = Naive::new(&graph, sys.automata.len());
        let mut specs: Vec<SpecPattern> = (0..8)
            .map(|i| pattern(i, random_prop(&mut rng, &atoms, 2)))
            .collect();
        for spec in &sys.instance.specs {
            specs.push(SpecPattern::extract(&spec.formula).unwrap());
        }
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
                    cx.replay(&checker).unwrap();
                    if cx.is_lasso() {
                        validate(&graph, cx, pat, fairness);
                    } else {
                        let last = cx.state(cx.steps.len());
                        assert!(!eval_prop(pat.prop(), last));
                    }
                }
                checked += 1;
            }
        }
    }
    assert!(checked >= 40, "{checked}");
}
