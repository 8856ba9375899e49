use super::*;
use crate::syntax::{parse_term, parse_type};

fn env(src: &str) -> TypeEnv {
    TypeEnv::parse(src).unwrap()
}

fn ty(src: &str) -> Type {
    parse_type(src).unwrap()
}

const GAMMA_STAR: &str = "e : {E: all(b: {V: Top .. Top}) {V: Top .. Top} .. all(b: {V: Top .. Top}) {Z: Top .. Top}} ;";

fn sub(g: &str, s: &str, t: &str) -> bool {
    step_subtype(&env(g), &ty(s), &ty(t)).unwrap().holds()
}

fn typed(g: &str, t: &str) -> Option<Type> {
    step_type(&env(g), &parse_term(t).unwrap()).unwrap().ty().cloned()
}

#[test]
fn subtyping_examples() {
    assert!(sub("", "Bot", "Top"));
    assert!(sub(GAMMA_STAR, "all(b: {V: Top .. Top}) {V: Top .. Top}", "e.E"));
    assert!(!sub(GAMMA_STAR, "{V: Top .. Top}", "{Z: Top .. Top}"));
    assert!(!sub(GAMMA_STAR, "{Z: Top .. Top}", "{V: Top .. Top}"));
    assert!(!sub("", "all(x: Top) Top", "all(x: Bot) Top"));
    assert!(!sub("", "Top", "Bot"));
}

#[test]
fn trace_shape_for_sel() {
    let g = env(GAMMA_STAR);
    let s = ty("all(b: {V: Top .. Top}) {V: Top .. Top}");
    let out = step_subtype(&g, &s, &ty("e.E")).unwrap();
    let tr = out.trace().unwrap();
    assert_eq!(tr.rule, StepRule::SSelSub);
    assert_eq!(tr.children[0].rule, StepRule::XOther);
    assert_eq!(tr.children[1].rule, StepRule::SAllAll);
}

#[test]
fn both_path_rules_are_tried() {
    // left path exposes to a declaration whose upper bound fails, right
    // path succeeds through its lower bound
    let g = "x : {A: Bot .. Top} ;\ny : {B: Bot .. Bot} ;";
    assert!(!sub(g, "x.A", "y.B"));
    let g = "x : {A: Bot .. Top} ;\ny : {B: x.A .. Top} ;";
    assert!(sub(g, "x.A", "y.B"));
}

#[test]
fn functions_with_alpha_equal_parameters() {
    assert!(sub("", "all(x: Top) Bot", "all(y: Top) Top"));
    let g = "z : {A: Bot .. Top} ;";
    assert!(sub(g, "all(x: {A: Bot .. Top}) x.A", "all(y: {A: Bot .. Top}) Top"));
    // binder clashing with the environment
    assert!(sub(g, "all(z: {A: Bot .. Top}) z.A", "all(z: {A: Bot .. Top}) z.A"));
}

#[test]
fn reflexivity_on_samples() {
    let g = "x : {A: Bot .. Top} ;\ny : x.A ;\nf : all(z: Top) Bot ;";
    for t in ["Top", "Bot", "x.A", "y.B", "f.C", "{A: x.A .. Top}", "all(w: x.A) w.B", "all(x: Top) x.A"] {
        assert!(sub(g, t, t), "{t}");
    }
}

#[test]
fn unbound_types_fail_with_note() {
    match step_subtype(&TypeEnv::empty(), &ty("x.A"), &Type::Top).unwrap() {
        Subtyping::Fails(Some(note)) => assert!(note.contains('x')),
        other => panic!("{other:?}"),
    }
}

#[test]
fn typing_examples() {
    assert_eq!(typed("", "lam(x: Top) x"), Some(ty("all(x: Top) Top")));
    assert_eq!(typed("", "{A = Top}"), Some(ty("{A: Top .. Top}")));
    assert!(typed("", "let x = {A = Top} in lam(y: x.A) y").unwrap().alpha_eq(&ty("all(y: Top) Top")));
    let w = "let f = lam(b: {V: Top .. Top}) b in let b1 = {V = Top} in f b1";
    assert_eq!(typed(GAMMA_STAR, w), Some(ty("{V: Top .. Top}")));
}

#[test]
fn application_rules() {
    assert_eq!(typed("f : Bot ;\ny : Top ;", "f y"), Some(Type::Bot));
    let g = "x : {A: Top .. Top} ;\nf : all(z: x.A) z.B ;\ny : Top ;";
    assert_eq!(typed(g, "f y"), Some(ty("y.B")));
    match step_type(&env("f : Top ;\ny : Top ;"), &parse_term("f y").unwrap()).unwrap() {
        StepTypingOutcome::Untypable { reason, .. } => {
            assert!(reason.contains("function position not exposable"))
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn untypable_location() {
    let g = env("y : Top ;");
    let t = parse_term("let a = {A = Top} in let b = y y in b").unwrap();
    match step_type(&g, &t).unwrap() {
        StepTypingOutcome::Untypable { location, .. } => assert_eq!(location, "body.rhs"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn let_promotion_stuck() {
    // the body's type mentions x.A but x's type declares no A
    let t = parse_term("let x = {B = Top} in lam(y: Top) lam(z: x.A) z").unwrap();
    assert!(matches!(
        step_type(&TypeEnv::empty(), &t).unwrap(),
        StepTypingOutcome::Untypable { .. }
    ));
}

#[test]
fn binder_clash_is_renamed() {
    let g = "x : {A: Top .. Top} ;";
    let out = typed(g, "lam(x: Top) x").unwrap();
    assert!(out.alpha_eq(&ty("all(y: Top) Top")));
    assert_eq!(typed(g, "let x = {B = Bot} in x"), Some(ty("{B: Bot .. Bot}")));
}

#[test]
fn depth_limit_is_reported() {
    let checker = Checker::new(Config { depth_limit: 0, check_measure: true });
    let r = checker.subtype(&TypeEnv::empty(), &ty("{A: Top .. Top}"), &ty("{A: Top .. Top}"));
    assert_eq!(r, Err(StepError::InternalLimit(0)));
}
