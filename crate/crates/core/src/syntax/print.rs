use std::fmt;

use super::{Term, Type};

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Top => f.write_str("Top"),
            Type::Bot => f.write_str("Bot"),
            Type::Decl(a, s, t) => write!(f, "{{{a}: {s} .. {t}}}"),
            Type::Path(x, a) => write!(f, "{x}.{a}"),
            Type::All(x, s, t) => write!(f, "all({x}: {s}) {t}"),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => write!(f, "{x}"),
            Term::Tag(a, t) => write!(f, "{{{a} = {t}}}"),
            Term::Lam(x, t, b) => write!(f, "lam({x}: {t}) {b}"),
            Term::App(g, x) => write!(f, "{g} {x}"),
            Term::Let(x, r, b) => write!(f, "let {x} = {r} in {b}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::syntax::{label, var, Term, Type};

    #[test]
    fn prints_surface_syntax() {
        let t = Type::all(var("x"), Type::Top, Type::path(var("x"), label("A")));
        assert_eq!(t.to_string(), "all(x: Top) x.A");
        let d = Type::decl(label("V"), Type::Top, Type::Top);
        assert_eq!(d.to_string(), "{V: Top .. Top}");
        let w = Term::let_in(
            var("f"),
            Term::lam(var("b"), d.clone(), Term::Var(var("b"))),
            Term::App(var("f"), var("b")),
        );
        assert_eq!(w.to_string(), "let f = lam(b: {V: Top .. Top}) b in f b");
        assert_eq!(Term::Tag(label("A"), Type::Bot).to_string(), "{A = Bot}");
    }
}
