//! Abstract syntax of D<: types and terms.
//!
//! Variables are represented by name. Binders are `All` (in types), `Lam`
//! and `Let` (in terms); every operation that walks under a binder respects
//! it, and all observable results are meaningful up to alpha-equivalence.

mod parse;
mod print;

use std::collections::BTreeSet;
use std::fmt;

pub use parse::{parse_env_bindings, parse_term, parse_type, ParseError};

const KEYWORDS: &[&str] = &["all", "lam", "let", "in"];
const TYPE_KEYWORDS: &[&str] = &["Top", "Bot"];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NameError {
    #[error("`{0}` is not a valid variable name")]
    BadVar(String),
    #[error("`{0}` is not a valid type label")]
    BadLabel(String),
}

fn ident_tail_ok(s: &str) -> bool {
    s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A term variable. Starts with a lowercase letter.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarName(String);

impl VarName {
    pub fn new(name: impl Into<String>) -> Result<Self, NameError> {
        let name = name.into();
        let ok = name.chars().next().is_some_and(|c| c.is_ascii_lowercase())
            && ident_tail_ok(&name)
            && !KEYWORDS.contains(&name.as_str());
        if ok {
            Ok(VarName(name))
        } else {
            Err(NameError::BadVar(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The first of `self1`, `self2`, ... for which `taken` is false.
    pub fn freshen(&self, taken: impl Fn(&VarName) -> bool) -> VarName {
        (1u64..)
            .map(|n| VarName(format!("{}{}", self.0, n)))
            .find(|candidate| !taken(candidate))
            .expect("unbounded counter")
    }
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// The label of a type member. Starts with an uppercase letter.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeLabel(String);

impl TypeLabel {
    pub fn new(name: impl Into<String>) -> Result<Self, NameError> {
        let name = name.into();
        let ok = name.chars().next().is_some_and(|c| c.is_ascii_uppercase())
            && ident_tail_ok(&name)
            && !TYPE_KEYWORDS.contains(&name.as_str());
        if ok {
            Ok(TypeLabel(name))
        } else {
            Err(NameError::BadLabel(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Shorthand used throughout tests and the lab corpus. Panics on bad names.
pub fn var(name: &str) -> VarName {
    VarName::new(name).unwrap()
}

/// Shorthand label constructor. Panics on bad names.
pub fn label(name: &str) -> TypeLabel {
    TypeLabel::new(name).unwrap()
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Type {
    Top,
    Bot,
    /// `{A: lower .. upper}`
    Decl(TypeLabel, Box<Type>, Box<Type>),
    /// `x.A`
    Path(VarName, TypeLabel),
    /// `all(x: param) result`; `x` is bound in `result` only.
    All(VarName, Box<Type>, Box<Type>),
}

impl Type {
    pub fn decl(l: TypeLabel, lower: Type, upper: Type) -> Type {
        Type::Decl(l, Box::new(lower), Box::new(upper))
    }

    pub fn path(x: VarName, l: TypeLabel) -> Type {
        Type::Path(x, l)
    }

    pub fn all(x: VarName, param: Type, result: Type) -> Type {
        Type::All(x, Box::new(param), Box::new(result))
    }

    pub fn is_path(&self) -> bool {
        matches!(self, Type::Path(..))
    }

    /// Node count; paths, `Top` and `Bot` count as one.
    pub fn size(&self) -> usize {
        match self {
            Type::Top | Type::Bot | Type::Path(..) => 1,
            Type::Decl(_, s, t) | Type::All(_, s, t) => 1 + s.size() + t.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<VarName> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    pub fn has_free(&self, x: &VarName) -> bool {
        match self {
            Type::Top | Type::Bot => false,
            Type::Path(y, _) => y == x,
            Type::Decl(_, s, t) => s.has_free(x) || t.has_free(x),
            Type::All(y, s, t) => s.has_free(x) || (y != x && t.has_free(x)),
        }
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a VarName>, out: &mut BTreeSet<VarName>) {
        match self {
            Type::Top | Type::Bot => {}
            Type::Path(x, _) => {
                if !bound.contains(&x) {
                    out.insert(x.clone());
                }
            }
            Type::Decl(_, s, t) => {
                s.collect_free(bound, out);
                t.collect_free(bound, out);
            }
            Type::All(x, s, t) => {
                s.collect_free(bound, out);
                bound.push(x);
                t.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_names(&self, out: &mut BTreeSet<VarName>) {
        match self {
            Type::Top | Type::Bot => {}
            Type::Path(x, _) => {
                out.insert(x.clone());
            }
            Type::Decl(_, s, t) => {
                s.all_names(out);
                t.all_names(out);
            }
            Type::All(x, s, t) => {
                out.insert(x.clone());
                s.all_names(out);
                t.all_names(out);
            }
        }
    }

    /// Capture-avoiding `[from := to]`.
    pub fn rename(&self, from: &VarName, to: &VarName) -> Type {
        if from == to {
            return self.clone();
        }
        match self {
            Type::Top | Type::Bot => self.clone(),
            Type::Path(x, a) => {
                if x == from {
                    Type::Path(to.clone(), a.clone())
                } else {
                    self.clone()
                }
            }
            Type::Decl(a, s, t) => Type::decl(a.clone(), s.rename(from, to), t.rename(from, to)),
            Type::All(y, s, t) => {
                let s = s.rename(from, to);
                if y == from || !t.has_free(from) {
                    return Type::All(y.clone(), Box::new(s), t.clone());
                }
                if y == to {
                    let fresh = y.freshen(|c| c == from || c == to || t.has_free(c));
                    let body = t.rename(y, &fresh).rename(from, to);
                    Type::all(fresh, s, body)
                } else {
                    Type::all(y.clone(), s, t.rename(from, to))
                }
            }
        }
    }

    /// Equality up to consistent renaming of `All` binders.
    pub fn alpha_eq(&self, other: &Type) -> bool {
        alpha_type(self, other, &mut Vec::new())
    }
}

/// Position of `x` among binders, innermost first, or `None` when free.
fn bound_index(scope: &[(&VarName, &VarName)], x: &VarName, left: bool) -> Option<usize> {
    scope
        .iter()
        .rev()
        .position(|(l, r)| if left { *l == x } else { *r == x })
}

fn alpha_path(scope: &[(&VarName, &VarName)], x: &VarName, y: &VarName) -> bool {
    match (bound_index(scope, x, true), bound_index(scope, y, false)) {
        (Some(i), Some(j)) => i == j,
        (None, None) => x == y,
        _ => false,
    }
}

fn alpha_type<'a>(a: &'a Type, b: &'a Type, scope: &mut Vec<(&'a VarName, &'a VarName)>) -> bool {
    match (a, b) {
        (Type::Top, Type::Top) | (Type::Bot, Type::Bot) => true,
        (Type::Path(x, la), Type::Path(y, lb)) => la == lb && alpha_path(scope, x, y),
        (Type::Decl(la, s1, t1), Type::Decl(lb, s2, t2)) => {
            la == lb && alpha_type(s1, s2, scope) && alpha_type(t1, t2, scope)
        }
        (Type::All(x, s1, t1), Type::All(y, s2, t2)) => {
            if !alpha_type(s1, s2, scope) {
                return false;
            }
            scope.push((x, y));
            let ok = alpha_type(t1, t2, scope);
            scope.pop();
            ok
        }
        _ => false,
    }
}

/// Terms in administrative normal form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(VarName),
    /// `{A = T}`
    Tag(TypeLabel, Type),
    Lam(VarName, Type, Box<Term>),
    App(VarName, VarName),
    Let(VarName, Box<Term>, Box<Term>),
}

impl Term {
    pub fn lam(x: VarName, param: Type, body: Term) -> Term {
        Term::Lam(x, param, Box::new(body))
    }

    pub fn let_in(x: VarName, rhs: Term, body: Term) -> Term {
        Term::Let(x, Box::new(rhs), Box::new(body))
    }

    pub fn is_value(&self) -> bool {
        matches!(self, Term::Tag(..) | Term::Lam(..))
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::App(..) => 1,
            Term::Tag(_, t) => 1 + t.size(),
            Term::Lam(_, t, b) => 1 + t.size() + b.size(),
            Term::Let(_, r, b) => 1 + r.size() + b.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<VarName> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    pub fn has_free(&self, x: &VarName) -> bool {
        match self {
            Term::Var(y) => y == x,
            Term::Tag(_, t) => t.has_free(x),
            Term::App(f, a) => f == x || a == x,
            Term::Lam(y, t, b) => t.has_free(x) || (y != x && b.has_free(x)),
            Term::Let(y, r, b) => r.has_free(x) || (y != x && b.has_free(x)),
        }
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a VarName>, out: &mut BTreeSet<VarName>) {
        let mut note = |x: &VarName, bound: &Vec<&VarName>| {
            if !bound.contains(&x) {
                out.insert(x.clone());
            }
        };
        match self {
            Term::Var(x) => note(x, bound),
            Term::App(f, a) => {
                note(f, bound);
                note(a, bound);
            }
            Term::Tag(_, t) => {
                for x in t.free_vars() {
                    note(&x, bound);
                }
            }
            Term::Lam(x, t, b) => {
                for y in t.free_vars() {
                    note(&y, bound);
                }
                bound.push(x);
                b.collect_free(bound, out);
                bound.pop();
            }
            Term::Let(x, r, b) => {
                r.collect_free(bound, out);
                bound.push(x);
                b.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Capture-avoiding `[from := to]`, reaching into type annotations.
    pub fn rename(&self, from: &VarName, to: &VarName) -> Term {
        if from == to {
            return self.clone();
        }
        let swap = |x: &VarName| if x == from { to.clone() } else { x.clone() };
        match self {
            Term::Var(x) => Term::Var(swap(x)),
            Term::App(f, a) => Term::App(swap(f), swap(a)),
            Term::Tag(l, t) => Term::Tag(l.clone(), t.rename(from, to)),
            Term::Lam(y, t, b) => {
                let t = t.rename(from, to);
                let (y, b) = rename_under(y, b, from, to);
                Term::Lam(y, t, Box::new(b))
            }
            Term::Let(y, r, b) => {
                let r = r.rename(from, to);
                let (y, b) = rename_under(y, b, from, to);
                Term::Let(y, Box::new(r), Box::new(b))
            }
        }
    }

    pub fn alpha_eq(&self, other: &Term) -> bool {
        alpha_term(self, other, &mut Vec::new())
    }
}

fn rename_under(binder: &VarName, body: &Term, from: &VarName, to: &VarName) -> (VarName, Term) {
    if binder == from || !body.has_free(from) {
        return (binder.clone(), body.clone());
    }
    if binder == to {
        let fresh = binder.freshen(|c| c == from || c == to || body.has_free(c));
        let body = body.rename(binder, &fresh).rename(from, to);
        (fresh, body)
    } else {
        (binder.clone(), body.rename(from, to))
    }
}

fn alpha_type_in(a: &Type, b: &Type, scope: &[(&VarName, &VarName)]) -> bool {
    let mut scope = scope.to_vec();
    alpha_type(a, b, &mut scope)
}

fn alpha_term<'a>(a: &'a Term, b: &'a Term, scope: &mut Vec<(&'a VarName, &'a VarName)>) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => alpha_path(scope, x, y),
        (Term::App(f1, a1), Term::App(f2, a2)) => {
            alpha_path(scope, f1, f2) && alpha_path(scope, a1, a2)
        }
        (Term::Tag(l1, t1), Term::Tag(l2, t2)) => l1 == l2 && alpha_type_in(t1, t2, scope),
        (Term::Lam(x, t1, b1), Term::Lam(y, t2, b2)) => {
            if !alpha_type_in(t1, t2, scope) {
                return false;
            }
            scope.push((x, y));
            let ok = alpha_term(b1, b2, scope);
            scope.pop();
            ok
        }
        (Term::Let(x, r1, b1), Term::Let(y, r2, b2)) => {
            if !alpha_term(r1, r2, scope) {
                return false;
            }
            scope.push((x, y));
            let ok = alpha_term(b1, b2, scope);
            scope.pop();
            ok
        }
        _ => false,
    }
}

/// Free variables of a type.
pub fn fv_type(t: &Type) -> BTreeSet<VarName> {
    t.free_vars()
}

/// Free variables of a term.
pub fn fv_term(t: &Term) -> BTreeSet<VarName> {
    t.free_vars()
}

pub fn subst_var_in_type(t: &Type, from: &VarName, to: &VarName) -> Type {
    t.rename(from, to)
}

pub fn alpha_eq_type(a: &Type, b: &Type) -> bool {
    a.alpha_eq(b)
}

pub fn print_type(t: &Type) -> String {
    t.to_string()
}

pub fn print_term(t: &Term) -> String {
    t.to_string()
}
