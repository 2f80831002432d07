use std::path::PathBuf;
use std::process::Command;

use sandal::smv::{emit_smv, sanitize, EmitError, ModuleKind};
use sandal::{corpus, System};

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{name}.smv"))
}

fn emit(src: &str) -> String {
    emit_smv(&System::from_source(src).unwrap(), true).unwrap().to_string()
}

/// Set `UPDATE_GOLDEN=1` to rewrite the expected files.
#[test]
fn corpus_matches_golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for (name, src) in corpus::corpus() {
        let text = emit(src);
        assert_eq!(text, emit(src), "{name}: emission is not deterministic");
        let path = golden_path(name);
        if update {
            std::fs::write(&path, &text).unwrap();
            continue;
        }
        let expected = std::fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(text, expected, "{name}: output differs from {}", path.display());
    }
}

#[test]
fn pingpong_module_structure() {
    let doc = emit_smv(&System::from_source(corpus::PINGPONG).unwrap(), true).unwrap();
    assert_eq!(doc.modules_of(ModuleKind::Process).count(), 2);
    assert_eq!(doc.modules_of(ModuleKind::Channel).count(), 2);
    assert_eq!(doc.modules_of(ModuleKind::Main).count(), 1);
    assert_eq!(doc.modules.last().unwrap().name, "main");
    assert!(doc.specs.is_empty());
}

#[test]
fn all_faults_model_carries_fault_edges() {
    let sys = System::from_source(corpus::TWO_PC_ALL).unwrap();
    let doc = emit_smv(&sys, true).unwrap();
    let text = doc.to_string();
    assert_eq!(text.matches("shutdown location").count(), 3);
    let lost: usize = sys.report.drop.iter().map(|(_, n)| n).sum();
    assert_eq!(text.matches("[lost]").count(), lost);
    assert_eq!(sys.report.drop.iter().filter(|(_, n)| *n > 0).count(), 4);
    assert_eq!(doc.specs.len(), 1);
    assert!(doc.specs[0].starts_with("LTLSPEC F (G ("));
}

#[test]
fn empty_system() {
    let doc = emit_smv(&System::from_source("init {}\n").unwrap(), true).unwrap();
    assert_eq!(doc.modules.len(), 1);
    assert_eq!(doc.modules[0].kind, ModuleKind::Main);
    assert!(doc.specs.is_empty());
    assert_eq!(doc.to_string(), "MODULE main\n");
}

#[test]
fn fairness_toggle_controls_compassion() {
    let sys = System::from_source(corpus::TWO_PC_NOFAULT).unwrap();
    let on = emit_smv(&sys, true).unwrap().to_string();
    let off = emit_smv(&sys, false).unwrap().to_string();
    assert_eq!(on.matches("COMPASSION").count(), 3);
    assert!(!off.contains("COMPASSION"));
}

#[test]
fn reserved_constructor_names_are_rejected() {
    let src = "data Mode { next, idle }\nproc P() {\n  var m Mode\n}\ninit {\n  p : P(),\n}\n";
    let err = emit_smv(&System::from_source(src).unwrap(), true).unwrap_err();
    assert_eq!(err, EmitError::ReservedConstructor { name: "next".into() });
}

#[test]
fn identifiers_are_sanitized_and_disambiguated() {
    assert_eq!(sanitize("recv#3"), "recv_3");
    assert_eq!(sanitize("9lives"), "_9lives");
    let src = "proc P(c channel { bool }) {\n  var loc bool\n  var enabled bool = timeout_recv(c, loc) && true\n}\n\
               proc Q(c channel { bool }) {\n  send(c, true)\n}\n\
               init {\n  c : channel { bool },\n  case : P(c),\n  q : Q(c),\n}\n";
    let text = emit(src);
    assert!(text.contains("  loc_1 : boolean;"), "{text}");
    assert!(text.contains("  enabled_1 : boolean;"), "{text}");
    assert!(text.contains("  recv_1 : boolean;"), "{text}");
    assert!(text.contains("  case_1 : proc_case(sched = s_case, c);"), "{text}");
}

#[test]
fn output_is_well_bracketed() {
    for (name, src) in corpus::corpus() {
        let text = emit(src);
        let mut depth = 0i64;
        for ch in text.chars() {
            match ch {
                '(' | '{' => depth += 1,
                ')' | '}' => depth -= 1,
                _ => {}
            }
            assert!(depth >= 0, "{name}");
        }
        assert_eq!(depth, 0, "{name}");
        assert_eq!(text.matches("case ").count(), text.matches("esac").count(), "{name}");
    }
}

/// Runs NuSMV on every corpus model when it is installed and compares its
/// verdicts with the built-in checker.
#[test]
fn external_checker_agrees_when_available() {
    let Ok(probe) = Command::new("NuSMV").arg("-h").output() else {
        eprintln!("NuSMV not found; skipping external agreement check");
        return;
    };
    let _ = probe;
    let dir = tempdir();
    for (name, src) in corpus::corpus() {
        let sys = System::from_source(src).unwrap();
        if sys.instance.specs.is_empty() {
            continue;
        }
        let path = dir.join(format!("{name}.smv"));
        std::fs::write(&path, emit_smv(&sys, true).unwrap().to_string()).unwrap();
        let out = Command::new("NuSMV").arg(&path).output().unwrap();
        let stdout = String::from_utf8_lossy(&out.stdout);
        let external: Vec<bool> = stdout
            .lines()
            .filter(|l| l.starts_with("-- specification"))
            .map(|l| l.ends_with("is true"))
            .collect();
        let checker = sandal::checker::Checker::new(&sys, Default::default());
        let internal: Vec<bool> = sys
            .instance
            .specs
            .iter()
            .map(|s| checker.check(&s.formula).unwrap().verdict.is_pass())
            .collect();
        assert_eq!(external, internal, "{name}\n{stdout}");
    }
}

fn tempdir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sandal-smv-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
