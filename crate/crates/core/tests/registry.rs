use bnc_core::bubbles::Bulle;
use bnc_core::envelope::{dims_via_series, SubOperad};
use bnc_core::exec::Strategy;
use bnc_core::presentations::{builtin_names, orbit_registry, verify_presentation, CncbModel, Presentation};
use bnc_core::rewrite::Interpretation;
use bnc_core::series::{check_poly_equation, equation};
use bnc_core::trees::Colour;
use bnc_core::Error;

#[test]
fn every_builtin_presentation_verifies() {
    for name in builtin_names() {
        let p = Presentation::builtin(name).unwrap();
        let r = verify_presentation(&p, 6, Strategy::Parallel).unwrap();
        assert!(r.passed(), "{name}: {r:?}");
    }
}

/// Envelope dimensions of each coloured suboperad agree with the BNC
/// closure and satisfy the registered equation.
#[test]
fn orbit_series_three_ways() {
    let n = 8;
    for rec in orbit_registry().unwrap() {
        let gens = rec.generators();
        let sub = SubOperad::generate(Bulle, &gens, n, Strategy::Parallel);
        let f = dims_via_series(&sub, n).unwrap().total;
        let closure = CncbModel::new(&gens, n, Strategy::Parallel);
        for k in 2..=n {
            assert_eq!(f.to_u64s()[k] as usize, closure.dimension(k, Colour::ONE), "orbit {} arity {k}", rec.index);
            assert_eq!(f.to_u64s()[k], rec.dimensions[k - 1], "orbit {} arity {k}", rec.index);
        }
        let p = equation(&rec.equation).unwrap().polynomial().unwrap();
        let check = check_poly_equation(&p, &f.to_multi("t"), "t", n).unwrap();
        assert!(check.passed(), "orbit {}: {check:?}", rec.index);
    }
}

#[test]
fn malformed_presentations_are_rejected() {
    assert!(matches!(Presentation::from_json("{"), Err(Error::Parse(_))));
    let wrong_name = r#"{"name": "x", "generators": {"AAA": "b:2:11"}, "model": "bulle"}"#;
    assert!(matches!(Presentation::from_json(wrong_name), Err(Error::Parse(_))));
    let no_arrow = r#"{"name": "x", "generators": {"BAB": "b:1:11"},
        "orientation": ["BAB[*,BAB[*,*]] BAB[BAB[*,*],*]"], "model": "bulle"}"#;
    assert!(matches!(Presentation::from_json(no_arrow), Err(Error::Parse(_))));
    let clash = r#"{"name": "x", "generators": {"AAA": "b:1:22"},
        "orientation": ["AAA[AAA[*,*],*] -> AAA[*,AAA[*,*]]"], "model": "bulle"}"#;
    assert!(matches!(Presentation::from_json(clash), Err(Error::Parse(m)) if m.contains("colour compatible")));
}

#[test]
fn presentations_load_from_files() {
    let text = r#"{"name": "assoc", "generators": {"BAB": "b:1:11"},
        "relations": [["BAB[*,BAB[*,*]]", "BAB[BAB[*,*],*]"]],
        "orientation": ["BAB[*,BAB[*,*]] -> BAB[BAB[*,*],*]"], "model": "bulle"}"#;
    let path = std::env::temp_dir().join(format!("bnc-assoc-{}.json", std::process::id()));
    std::fs::write(&path, text).unwrap();
    let p = Presentation::load(path.to_str().unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    let r = verify_presentation(&p, 7, Strategy::Sequential).unwrap();
    assert!(r.passed());
    assert!(matches!(Presentation::load("/nonexistent/file.json"), Err(Error::Io(_))));
}

#[test]
fn wrong_orientation_is_caught() {
    // sending the associativity rule the other way still terminates and
    // counts one normal form per arity; dropping it leaves too many
    let base = r#"{"name": "assoc", "generators": {"BAB": "b:1:11"},
        "relations": [["BAB[*,BAB[*,*]]", "BAB[BAB[*,*],*]"]], "orientation": ORIENT, "model": "bulle"}"#;
    let rev = Presentation::from_json(&base.replace("ORIENT", r#"["BAB[BAB[*,*],*] -> BAB[*,BAB[*,*]]"]"#)).unwrap();
    assert!(verify_presentation(&rev, 6, Strategy::Sequential).unwrap().passed());
    let none = Presentation::from_json(&base.replace("ORIENT", r#"["BAB[*,BAB[*,*]] -> BAB[*,BAB[*,*]]"]"#)).unwrap();
    let r = verify_presentation(&none, 4, Strategy::Sequential).unwrap();
    assert!(!r.passed());
    assert!(!r.coloured.unwrap().terminating);
}
