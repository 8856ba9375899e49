//! The bad-bounds counterexample: abbreviations `B` and `C`, the
//! environment `Γ⋆`, the term `w`, and hand-built declarative derivations.

use crate::declarative::{DeclRule, Derivation, Judgment};
use crate::env::TypeEnv;
use crate::syntax::{label, var, Term, Type};

/// `{V: Top .. Top}`
pub fn b_type() -> Type {
    Type::decl(label("V"), Type::Top, Type::Top)
}

/// `{Z: Top .. Top}`
pub fn c_type() -> Type {
    Type::decl(label("Z"), Type::Top, Type::Top)
}

/// `all(b: B) B`
pub fn fun_b_b() -> Type {
    Type::all(var("b"), b_type(), b_type())
}

/// `all(b: B) C`
pub fn fun_b_c() -> Type {
    Type::all(var("b"), b_type(), c_type())
}

/// `e : {E: all(b: B) B .. all(b: B) C}`
pub fn gamma_star() -> TypeEnv {
    TypeEnv::empty()
        .extend(var("e"), Type::decl(label("E"), fun_b_b(), fun_b_c()))
        .expect("closed type")
}

/// `let f = lam(b: B) b in let b1 = {V = Top} in f b1`
pub fn term_w() -> Term {
    Term::let_in(
        var("f"),
        Term::lam(var("b"), b_type(), Term::Var(var("b"))),
        Term::let_in(
            var("b1"),
            Term::Tag(label("V"), Type::Top),
            Term::App(var("f"), var("b1")),
        ),
    )
}

/// `g ⊢ all(b: B) B <: all(b: B) C` through `e.E`; `g` must extend `Γ⋆`.
pub fn bad_bounds_tree(g: &TypeEnv) -> Derivation {
    let e = var("e");
    let e_ty = g.lookup(&e).expect("environment binds e").clone();
    let e_var = || Derivation::leaf(DeclRule::Var, Judgment::typ(g, Term::Var(e.clone()), e_ty.clone()));
    let path = Type::path(e.clone(), label("E"));
    let lower = Derivation::node(DeclRule::SubSel, Judgment::sub(g, fun_b_b(), path.clone()), vec![e_var()]);
    let upper = Derivation::node(DeclRule::SelSub, Judgment::sub(g, path, fun_b_c()), vec![e_var()]);
    Derivation::node(DeclRule::Trans, Judgment::sub(g, fun_b_b(), fun_b_c()), vec![lower, upper])
}

/// `Γ⋆ ⊢ w : target` for `target` either `B` or `C`.
fn w_tree(target: Type) -> Derivation {
    let g0 = gamma_star();
    let (f, b, b1) = (var("f"), var("b"), var("b1"));
    let g_lam = g0.extend(b.clone(), b_type()).unwrap();
    let g1 = g0.extend(f.clone(), fun_b_b()).unwrap();
    let g2 = g1.extend(b1.clone(), b_type()).unwrap();

    let lam = Derivation::node(
        DeclRule::AllI,
        Judgment::typ(&g0, Term::lam(b.clone(), b_type(), Term::Var(b.clone())), fun_b_b()),
        vec![Derivation::leaf(DeclRule::Var, Judgment::typ(&g_lam, Term::Var(b), b_type()))],
    );
    let tag = Derivation::leaf(DeclRule::TypI, Judgment::typ(&g1, Term::Tag(label("V"), Type::Top), b_type()));

    let f_var = Derivation::leaf(DeclRule::Var, Judgment::typ(&g2, Term::Var(f.clone()), fun_b_b()));
    let fun = if target == b_type() {
        f_var
    } else {
        Derivation::node(
            DeclRule::Sub,
            Judgment::typ(&g2, Term::Var(f.clone()), fun_b_c()),
            vec![f_var, bad_bounds_tree(&g2)],
        )
    };
    let arg = Derivation::leaf(DeclRule::Var, Judgment::typ(&g2, Term::Var(b1.clone()), b_type()));
    let app = Derivation::node(
        DeclRule::AllE,
        Judgment::typ(&g2, Term::App(f.clone(), b1.clone()), target.clone()),
        vec![fun, arg],
    );

    let Term::Let(_, _, inner_term) = term_w() else { unreachable!() };
    let inner = Derivation::node(
        DeclRule::Let,
        Judgment::typ(&g1, *inner_term, target.clone()),
        vec![tag, app],
    );
    Derivation::node(DeclRule::Let, Judgment::typ(&g0, term_w(), target), vec![lam, inner])
}

pub fn w_typed_b_tree() -> Derivation {
    w_tree(b_type())
}

pub fn w_typed_c_tree() -> Derivation {
    w_tree(c_type())
}
