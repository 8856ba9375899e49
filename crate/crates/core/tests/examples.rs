use dsub_core::dotty::{bad_bounds_universe, make_pn, scala_sub, SType};
use dsub_core::exposure::{expose, ExposureResult};
use dsub_core::lab::{count_types, gamma_star, Alphabet, Enumerator};
use dsub_core::shift::{demote, promote, ShiftResult};
use dsub_core::step::{step_subtype, step_type, weight};
use dsub_core::syntax::{fv_term, fv_type, parse_term, parse_type, var};
use dsub_core::TypeEnv;

fn ty(s: &str) -> dsub_core::Type {
    parse_type(s).unwrap()
}

fn env(s: &str) -> TypeEnv {
    TypeEnv::parse(s).unwrap()
}

#[test]
fn free_variables() {
    let names = |s: &[&str]| s.iter().map(|x| var(x)).collect();
    assert_eq!(fv_type(&ty("all(x: x.A) x.B")), names(&["x"]));
    assert_eq!(fv_term(&parse_term("let x = y in x z").unwrap()), names(&["y", "z"]));
    assert_eq!(ty("all(x: Top) x.A").to_string(), "all(x: Top) x.A");
}

#[test]
fn weights() {
    assert_eq!(weight(&TypeEnv::empty(), &ty("Top")), Ok(1));
    assert_eq!(weight(&TypeEnv::empty(), &ty("{A: Top .. Top}")), Ok(2));
    assert_eq!(weight(&env("x : Top ;"), &ty("x.A")), Ok(2));
    assert_eq!(weight(&TypeEnv::empty(), &ty("all(x: Top) x.A")), Ok(3));
}

#[test]
fn exposures() {
    let exposed = |g: &str, t: &str| expose(&env(g), &ty(t)).unwrap();
    assert_eq!(exposed("x : {A: Bot .. Top} ;", "x.A"), ExposureResult::Exposed(ty("Top")));
    assert_eq!(exposed("x : Bot ;", "x.A"), ExposureResult::Exposed(ty("Bot")));
    assert_eq!(
        exposed("x : {A: Bot .. Top} ;\ny : {B: Bot .. x.A} ;", "y.B"),
        ExposureResult::Exposed(ty("Top"))
    );
    assert!(matches!(exposed("x : Top ;", "x.A"), ExposureResult::Stuck { .. }));
}

#[test]
fn promotion_and_demotion() {
    let g = env("x : {A: Bot .. Top} ;");
    let x = var("x");
    assert_eq!(promote(&g, &ty("x.A"), &x), Ok(ShiftResult::Shifted(ty("Top"))));
    assert_eq!(promote(&g, &ty("{B: x.A .. x.A}"), &x), Ok(ShiftResult::Shifted(ty("{B: Bot .. Top}"))));
    assert_eq!(demote(&g, &ty("x.A"), &x), Ok(ShiftResult::Shifted(ty("Bot"))));
    assert_eq!(demote(&env("x : Bot ;"), &ty("x.A"), &x), Ok(ShiftResult::Shifted(ty("Top"))));
}

#[test]
fn step_relations() {
    let g = gamma_star();
    assert!(step_subtype(&g, &ty("all(b: {V: Top .. Top}) {V: Top .. Top}"), &ty("e.E")).unwrap().holds());
    assert!(!step_subtype(&g, &ty("{V: Top .. Top}"), &ty("{Z: Top .. Top}")).unwrap().holds());
    let typed = |src: &str| step_type(&TypeEnv::empty(), &parse_term(src).unwrap()).unwrap().ty().cloned();
    assert_eq!(typed("let x = {A = Top} in lam(y: x.A) y"), Some(ty("all(y: Top) Top")));
}

#[test]
fn scala_model_is_not_transitive() {
    let u = bad_bounds_universe();
    let (a, b) = (SType::fun(SType::base("Int"), SType::base("Int")), SType::member("E"));
    let c = SType::fun(SType::base("Int"), SType::base("String"));
    assert!(scala_sub(&u, &a, &b).unwrap().result);
    assert!(scala_sub(&u, &b, &c).unwrap().result);
    assert!(!scala_sub(&u, &a, &c).unwrap().result);
    let (u, t1, t2) = make_pn(12);
    let stats = scala_sub(&u, &t1, &t2).unwrap();
    assert!(!stats.result);
    assert!(stats.calls >= 4096);
}

#[test]
fn enumerator_matches_count() {
    let mut en = Enumerator::new(Alphabet::small().labels);
    let free = Alphabet::small().vars;
    for size in 1..=5 {
        assert_eq!(en.types(&free, 0, size).len() as u128, count_types(size, 2, 3), "size {size}");
    }
}
