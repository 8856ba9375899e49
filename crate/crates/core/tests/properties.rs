use std::collections::BTreeSet;

use dsub_core::declarative::{decl_search, decl_verify, elaborate_shift, elaborate_subtype, elaborate_typing, Judgment};
use dsub_core::exposure::{expose, ExposureResult};
use dsub_core::shift::{demote, promote, Direction, ShiftResult};
use dsub_core::step::{step_subtype, step_type, weight, StepTypingOutcome};
use dsub_core::syntax::{
    fv_type, label, parse_term, parse_type, subst_var_in_type, var, Term, Type, VarName,
};
use dsub_core::TypeEnv;
use proptest::prelude::*;

const NAMES: [&str; 4] = ["x", "y", "z", "w"];
const LABELS: [&str; 2] = ["A", "B"];

fn name() -> impl Strategy<Value = VarName> {
    prop::sample::select(NAMES.to_vec()).prop_map(var)
}

fn type_label() -> impl Strategy<Value = dsub_core::TypeLabel> {
    prop::sample::select(LABELS.to_vec()).prop_map(label)
}

/// Types over a small name pool; may be open and may shadow.
fn raw_type() -> impl Strategy<Value = Type> {
    let leaf = prop_oneof![
        Just(Type::Top),
        Just(Type::Bot),
        (name(), type_label()).prop_map(|(x, a)| Type::path(x, a)),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (type_label(), inner.clone(), inner.clone()).prop_map(|(a, l, u)| Type::decl(a, l, u)),
            (name(), inner.clone(), inner).prop_map(|(x, p, r)| Type::all(x, p, r)),
        ]
    })
}

fn raw_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        name().prop_map(Term::Var),
        (name(), name()).prop_map(|(f, x)| Term::App(f, x)),
        (type_label(), raw_type()).prop_map(|(a, t)| Term::Tag(a, t)),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (name(), raw_type(), inner.clone()).prop_map(|(x, t, b)| Term::lam(x, t, b)),
            (name(), inner.clone(), inner).prop_map(|(x, r, b)| Term::let_in(x, r, b)),
        ]
    })
}

/// Replaces out-of-scope paths by `Top` so the type is closed over `scope`.
fn close(t: &Type, scope: &BTreeSet<VarName>) -> Type {
    match t {
        Type::Top | Type::Bot => t.clone(),
        Type::Path(x, _) if scope.contains(x) => t.clone(),
        Type::Path(..) => Type::Top,
        Type::Decl(a, l, u) => Type::decl(a.clone(), close(l, scope), close(u, scope)),
        Type::All(x, p, r) => {
            let mut inner = scope.clone();
            inner.insert(x.clone());
            Type::all(x.clone(), close(p, scope), close(r, &inner))
        }
    }
}

/// An environment `x: T1, y: T2` (either may be absent) and a type in scope.
fn env_and_type() -> impl Strategy<Value = (TypeEnv, Type)> {
    (0usize..=2, raw_type(), raw_type(), raw_type()).prop_map(|(n, t1, t2, t)| {
        let mut g = TypeEnv::empty();
        for (x, raw) in [("x", t1), ("y", t2)].into_iter().take(n) {
            let closed = close(&raw, &g.dom());
            g = g.extend(var(x), closed).expect("closed over the prefix");
        }
        let t = close(&t, &g.dom());
        (g, t)
    })
}

fn closed_term(t: &Term, scope: &BTreeSet<VarName>) -> Term {
    let fix = |x: &VarName| if scope.contains(x) { x.clone() } else { scope.iter().next().cloned().unwrap_or(x.clone()) };
    match t {
        Term::Var(x) => Term::Var(fix(x)),
        Term::App(f, x) => Term::App(fix(f), fix(x)),
        Term::Tag(a, ty) => Term::Tag(a.clone(), close(ty, scope)),
        Term::Lam(x, ty, b) => {
            let mut inner = scope.clone();
            inner.insert(x.clone());
            Term::lam(x.clone(), close(ty, scope), closed_term(b, &inner))
        }
        Term::Let(x, r, b) => {
            let mut inner = scope.clone();
            inner.insert(x.clone());
            Term::let_in(x.clone(), closed_term(r, scope), closed_term(b, &inner))
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn type_round_trip(t in raw_type()) {
        let back = parse_type(&t.to_string()).unwrap();
        prop_assert!(back.alpha_eq(&t), "{} reparsed as {}", t, back);
    }

    #[test]
    fn term_round_trip(t in raw_term()) {
        let back = parse_term(&t.to_string()).unwrap();
        prop_assert!(back.alpha_eq(&t), "{} reparsed as {}", t, back);
    }

    #[test]
    fn substitution_free_vars(t in raw_type(), z in name(), y in name()) {
        let out = fv_type(&subst_var_in_type(&t, &z, &y));
        let mut allowed = fv_type(&t);
        allowed.remove(&z);
        allowed.insert(y);
        prop_assert!(out.is_subset(&allowed));
    }

    #[test]
    fn substitution_identity(t in raw_type(), z in name()) {
        prop_assert!(subst_var_in_type(&t, &z, &z).alpha_eq(&t));
    }

    #[test]
    fn alpha_eq_is_an_equivalence(a in raw_type(), b in raw_type(), fresh in name()) {
        prop_assert!(a.alpha_eq(&a));
        prop_assert_eq!(a.alpha_eq(&b), b.alpha_eq(&a));
        // Renaming a bound variable to an unused name gives an alpha-equal type.
        if let Type::All(x, p, r) = &a {
            if !r.has_free(&fresh) && !a.free_vars().contains(&fresh) {
                let renamed = Type::all(fresh.clone(), p.as_ref().clone(), r.rename(x, &fresh));
                prop_assert!(renamed.alpha_eq(&a));
                prop_assert_eq!(renamed.alpha_eq(&b), a.alpha_eq(&b));
            }
        }
    }

    #[test]
    fn reflexivity((g, t) in env_and_type()) {
        prop_assert!(step_subtype(&g, &t, &t).unwrap().holds());
    }

    #[test]
    fn exposure_never_path_and_not_heavier((g, t) in env_and_type()) {
        if let ExposureResult::Exposed(e) = expose(&g, &t).unwrap() {
            prop_assert!(!e.is_path());
            prop_assert!(weight(&g, &e).unwrap() <= weight(&g, &t).unwrap());
            let d = dsub_core::declarative::elaborate_exposure(&g, &t).unwrap();
            prop_assert!(decl_verify(&d).is_ok());
        }
    }

    #[test]
    fn shift_erases_and_elaborates((g, t) in env_and_type()) {
        for x in g.dom() {
            for dir in [Direction::Promote, Direction::Demote] {
                let r = dsub_core::shift::shift(&g, &t, &x, dir).unwrap();
                if let ShiftResult::Shifted(s) = r {
                    prop_assert!(!s.has_free(&x));
                    let d = elaborate_shift(&g, &t, &x, dir).unwrap();
                    prop_assert!(decl_verify(&d).is_ok(), "{:?}", decl_verify(&d));
                }
            }
        }
    }

    #[test]
    fn shift_is_identity_without_the_variable((g, t) in env_and_type()) {
        for x in g.dom() {
            if !t.has_free(&x) {
                // Up to the renaming of binders that clash with the environment.
                for r in [promote(&g, &t, &x).unwrap(), demote(&g, &t, &x).unwrap()] {
                    prop_assert!(r.shifted().is_some_and(|s| s.alpha_eq(&t)), "{:?} from {}", r, t);
                }
            }
        }
    }

    #[test]
    fn subtyping_is_sound((g, s) in env_and_type(), t in raw_type()) {
        let t = close(&t, &g.dom());
        if step_subtype(&g, &s, &t).unwrap().holds() {
            let d = elaborate_subtype(&g, &s, &t).unwrap();
            prop_assert!(decl_verify(&d).is_ok(), "{:?}", decl_verify(&d));
        }
    }

    #[test]
    fn typing_is_sound_and_deterministic((g, _) in env_and_type(), t in raw_term()) {
        let t = closed_term(&t, &g.dom());
        let first = step_type(&g, &t).unwrap();
        let second = step_type(&g, &t).unwrap();
        prop_assert_eq!(first.ty(), second.ty());
        if let StepTypingOutcome::Typed(..) = first {
            let d = elaborate_typing(&g, &t).unwrap();
            prop_assert!(decl_verify(&d).is_ok(), "{:?}", decl_verify(&d));
        }
    }

    #[test]
    fn search_results_verify((g, s) in env_and_type(), t in raw_type()) {
        let t = close(&t, &g.dom());
        if let Some(d) = decl_search(&Judgment::sub(&g, s, t), 3) {
            prop_assert!(decl_verify(&d).is_ok());
        }
    }
}
