use std::path::PathBuf;

use operad_workbench::cli::{
    cmd_classes, cmd_classify, cmd_decide, cmd_eval, cmd_perm_block_compose, cmd_term_info, run,
    ClassifyOutput, DecideOutput, EvalOutput, PermOutput, StrictifyOutput, TermInfo,
};
use operad_workbench::terms::{Classification, Flavor, SaturationOptions};
use operad_workbench::weakening::{Classes, Decision};
use serde::de::DeserializeOwned;
use serde::Serialize;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).to_string_lossy().into_owned()
}

fn src(name: &str) -> String {
    std::fs::read_to_string(data(name)).unwrap()
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("operad-workbench").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn roundtrip<T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug>(x: &T) {
    let text = serde_json::to_string_pretty(x).unwrap();
    let back: T = serde_json::from_str(&text).unwrap();
    assert_eq!(&back, x);
}

#[test]
fn classify_bundled_theories() {
    assert_eq!(cmd_classify(&src("monoid.th")).unwrap().overall, Classification::StronglyRegular);
    assert_eq!(cmd_classify(&src("pointed.th")).unwrap().overall, Classification::StronglyRegular);
    assert_eq!(cmd_classify(&src("comm_monoid.th")).unwrap().overall, Classification::Linear);
    let idem = "theory Band\nflavor fp\nops:\n  m : 2\neqs:\n  m(x1,x1) = x1\n";
    assert_eq!(cmd_classify(idem).unwrap().overall, Classification::General);
}

#[test]
fn parse_errors_carry_position() {
    let err = cmd_classify("theory T\nflavor plain\nops:\n  m : 2\neqs:\n  m(x1 = x1\n").unwrap_err();
    assert!(err.to_string().contains("6:8"), "{err}");
    let (code, _, e) = cli(&["term-info", &data("monoid.th"), "--arity", "2", "m(x1,"]);
    assert_eq!(code, 3, "{e}");
}

#[test]
fn decide_examples_and_exit_codes() {
    let comm = data("comm_monoid.th");
    let monoid = data("monoid.th");
    let (code, out, _) = cli(&["decide", &comm, "m(x1,m(x2,x3))", "m(m(x3,x1),x2)"]);
    assert_eq!(code, 0, "{out}");
    let (code, _, _) = cli(&["decide", &monoid, "--target", "terminal-plain", "m(x1,e)", "m(e,x1)"]);
    assert_eq!(code, 0);
    let (code, _, _) = cli(&["decide", &monoid, "x1", "m(x1,x2)"]);
    assert_eq!(code, 1);
    let (code, _, _) = cli(&["decide", &monoid, "--steps", "0", "x1", "x1"]);
    assert_eq!(code, 3);
    let (code, _, _) = cli(&["no-such-command"]);
    assert_eq!(code, 3);
}

#[test]
fn closure_mode_prints_a_trace() {
    let (code, out, _) = cli(&["decide", &data("comm_monoid.th"), "m(x1,x2)", "m(x2,x1)"]);
    assert_eq!(code, 0);
    assert!(out.contains('~'), "{out}");
}

#[test]
fn starved_budget_is_unknown() {
    let (code, out, _) = cli(&[
        "decide",
        &data("monoid.th"),
        "--max-size",
        "1",
        "--steps",
        "1",
        "m(m(x1,x2),m(x3,x4))",
        "m(x1,m(x2,m(x3,x4)))",
    ]);
    assert_eq!(code, 2, "{out}");
}

#[test]
fn classes_examples() {
    let c = cmd_classes(&src("comm_monoid.th"), "terminal-symmetric", &[], 2, 5, 64).unwrap();
    assert_eq!(c.classes.len(), 1);
    let c = cmd_classes(&src("pointed_abcd.th"), "terminal-plain", &[], 0, 5, 64).unwrap();
    assert_eq!(c.classes.len(), 1);
    assert_eq!(c.classes[0].members.len(), 4);
    let c = cmd_classes(&src("trivial.th"), "none", &[], 0, 5, 64).unwrap();
    assert!(c.classes.is_empty());
}

#[test]
fn eval_reads_comm_monoid_as_fp() {
    let out = cmd_eval(&src("comm_monoid.th"), "comm-monoid-fp", &[], "m(x1,m(x2,x2))", Some(3), Some(Flavor::Fp))
        .unwrap();
    assert_eq!(out.value, "[1,2,0]");
}

#[test]
fn perm_block_compose() {
    let out = cmd_perm_block_compose("[2,1]", &["[1,2]".into(), "[1]".into()]).unwrap();
    assert_eq!(out.result.to_string(), "[2,3,1]");
    let (code, out, _) = cli(&["perm", "block-compose", "[2,1]", "[1,2]", "[1]"]);
    assert_eq!((code, out.trim()), (0, "[2,3,1]"));
    let (code, _, _) = cli(&["perm", "block-compose", "[2,1]", "[1]"]);
    assert_eq!(code, 3);
}

#[test]
fn strictify_bundled_instance_passes() {
    let (code, out, err) = cli(&["--format", "json", "strictify", &data("indiscrete_monoid_weakcat.json")]);
    assert_eq!(code, 0, "{err}");
    let parsed: StrictifyOutput = serde_json::from_str(&out).unwrap();
    assert!(parsed.passed);
    assert_eq!(parsed.elements, 4);
    roundtrip(&parsed);
}

#[test]
fn json_payloads_round_trip() {
    let classify: ClassifyOutput = cmd_classify(&src("comm_monoid.th")).unwrap();
    roundtrip(&classify);
    let info: TermInfo = cmd_term_info(&src("monoid.th"), 2, "m(x1,m(x2,x2))").unwrap();
    roundtrip(&info);
    let eval: EvalOutput = cmd_eval(&src("monoid.th"), "terminal-plain", &[], "m(x1,e)", None, None).unwrap();
    roundtrip(&eval);
    for (t1, t2) in [("m(x1,x2)", "m(x2,x1)"), ("x1", "m(x1,x2)")] {
        let d: DecideOutput =
            cmd_decide(&src("comm_monoid.th"), "none", &[], t1, t2, SaturationOptions::default()).unwrap();
        roundtrip(&d);
    }
    let classes: Classes = cmd_classes(&src("pointed_abcd.th"), "none", &[], 0, 5, 64).unwrap();
    roundtrip(&classes);
    let perm: PermOutput = cmd_perm_block_compose("[3,1,2]", &["[1]".into(), "[2,1]".into(), "[]".into()]).unwrap();
    roundtrip(&perm);
}

#[test]
fn json_output_parses_back() {
    let (code, out, _) = cli(&["--format", "json", "decide", &data("monoid.th"), "x1", "m(x1,e)"]);
    assert_eq!(code, 0);
    let d: DecideOutput = serde_json::from_str(&out).unwrap();
    assert_eq!(d.verdict.decision, Decision::Yes);
    let (_, out, _) = cli(&["--format", "json", "classify", &data("comm_monoid.th")]);
    let c: ClassifyOutput = serde_json::from_str(&out).unwrap();
    assert_eq!(c.overall, Classification::Linear);
}

#[test]
fn fp_flavor_is_rejected() {
    let fp = src("comm_monoid.th").replace("flavor symmetric", "flavor fp");
    let err = cmd_decide(&fp, "none", &[], "m(x1,x2)", "m(x2,x1)", SaturationOptions::default()).unwrap_err();
    assert!(err.to_string().contains("τ_AA"), "{err}");
}
