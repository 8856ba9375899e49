//! Typing environments.
//!
//! A `TypeEnv` is an append-only persistent list: `extend` shares the
//! existing bindings, so taking the prefix in front of a binding is free.
//! Construction only goes through `extend`, which enforces well-formedness:
//! the new variable is fresh, does not occur in its own type, and every
//! other variable in the type is already bound (closed scoping).

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::syntax::{parse_env_bindings, ParseError, Type, VarName};

/// `g1`, the type of the split variable, and the bindings after it.
pub type Split = (TypeEnv, Type, Vec<(VarName, Type)>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnvError {
    #[error("`{0}` is already bound")]
    DuplicateBinding(VarName),
    #[error("`{0}` occurs free in its own type")]
    SelfReference(VarName),
    #[error("type of `{var}` mentions unbound variable `{missing}`")]
    OutOfScope { var: VarName, missing: VarName },
    #[error(transparent)]
    Parse(#[from] ParseError),
}

struct Node {
    name: VarName,
    ty: Type,
    prev: Option<Arc<Node>>,
}

#[derive(Clone, Default)]
pub struct TypeEnv {
    head: Option<Arc<Node>>,
    len: usize,
}

impl TypeEnv {
    pub fn empty() -> TypeEnv {
        TypeEnv::default()
    }

    pub fn extend(&self, x: VarName, t: Type) -> Result<TypeEnv, EnvError> {
        if self.contains(&x) {
            return Err(EnvError::DuplicateBinding(x));
        }
        if t.has_free(&x) {
            return Err(EnvError::SelfReference(x));
        }
        if let Some(missing) = t.free_vars().into_iter().find(|y| !self.contains(y)) {
            return Err(EnvError::OutOfScope { var: x, missing });
        }
        Ok(TypeEnv {
            head: Some(Arc::new(Node { name: x, ty: t, prev: self.head.clone() })),
            len: self.len + 1,
        })
    }

    pub fn from_bindings(
        bindings: impl IntoIterator<Item = (VarName, Type)>,
    ) -> Result<TypeEnv, EnvError> {
        bindings.into_iter().try_fold(TypeEnv::empty(), |g, (x, t)| g.extend(x, t))
    }

    /// Reads the `x : T ;` file format.
    pub fn parse(src: &str) -> Result<TypeEnv, EnvError> {
        TypeEnv::from_bindings(parse_env_bindings(src)?)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn nodes(&self) -> impl Iterator<Item = &Node> {
        std::iter::successors(self.head.as_deref(), |n| n.prev.as_deref())
    }

    pub fn contains(&self, x: &VarName) -> bool {
        self.nodes().any(|n| &n.name == x)
    }

    pub fn lookup(&self, x: &VarName) -> Option<&Type> {
        self.nodes().find(|n| &n.name == x).map(|n| &n.ty)
    }

    pub fn dom(&self) -> BTreeSet<VarName> {
        self.nodes().map(|n| n.name.clone()).collect()
    }

    /// Bindings oldest first.
    pub fn bindings(&self) -> Vec<(VarName, Type)> {
        let mut out: Vec<_> = self.nodes().map(|n| (n.name.clone(), n.ty.clone())).collect();
        out.reverse();
        out
    }

    /// The environment strictly before `x` together with `x`'s type.
    pub fn prefix_before(&self, x: &VarName) -> Option<(TypeEnv, &Type)> {
        let mut len = self.len;
        for node in self.nodes() {
            len -= 1;
            if &node.name == x {
                return Some((TypeEnv { head: node.prev.clone(), len }, &node.ty));
            }
        }
        None
    }

    /// The newest binding and the environment before it.
    pub fn split_last(&self) -> Option<(TypeEnv, &VarName, &Type)> {
        let node = self.head.as_deref()?;
        Some((TypeEnv { head: node.prev.clone(), len: self.len - 1 }, &node.name, &node.ty))
    }

    /// Splits `g` as `g1, x: T, g2`.
    pub fn split_at(&self, x: &VarName) -> Option<Split> {
        let (prefix, ty) = self.prefix_before(x)?;
        let suffix = self.bindings().split_off(prefix.len + 1);
        Some((prefix, ty.clone(), suffix))
    }

    /// Re-checks the well-formedness judgment from scratch.
    pub fn is_wellformed(&self) -> bool {
        TypeEnv::from_bindings(self.bindings()).is_ok()
    }

    pub fn covers(&self, t: &Type) -> bool {
        t.free_vars().iter().all(|x| self.contains(x))
    }

    /// A binder name based on `base` that is not bound here and not in `avoid`.
    pub fn fresh_name(&self, base: &VarName, avoid: &BTreeSet<VarName>) -> VarName {
        if !self.contains(base) && !avoid.contains(base) {
            return base.clone();
        }
        base.freshen(|c| self.contains(c) || avoid.contains(c))
    }

    /// Same names in the same order with alpha-equal types.
    pub fn alpha_eq(&self, other: &TypeEnv) -> bool {
        self.len == other.len
            && self
                .nodes()
                .zip(other.nodes())
                .all(|(a, b)| a.name == b.name && a.ty.alpha_eq(&b.ty))
    }
}

impl PartialEq for TypeEnv {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len
            && self.nodes().zip(other.nodes()).all(|(a, b)| a.name == b.name && a.ty == b.ty)
    }
}

impl Eq for TypeEnv {}

impl Hash for TypeEnv {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.len.hash(state);
        for n in self.nodes() {
            n.name.hash(state);
            n.ty.hash(state);
        }
    }
}

impl fmt::Debug for TypeEnv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.bindings().iter().map(|(x, t)| format!("{x}: {t}")))
            .finish()
    }
}

/// The environment file format: one `x : T ;` binding per line.
impl fmt::Display for TypeEnv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (x, t) in self.bindings() {
            writeln!(f, "{x} : {t} ;")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{label, var};

    fn xa() -> Type {
        Type::path(var("x"), label("A"))
    }

    #[test]
    fn empty_environment() {
        let g = TypeEnv::empty();
        assert!(g.is_wellformed());
        assert!(g.dom().is_empty());
        assert_eq!(g.lookup(&var("x")), None);
        assert!(g.split_at(&var("x")).is_none());
    }

    #[test]
    fn extend_checks_w_cons() {
        let g = TypeEnv::empty().extend(var("x"), Type::Top).unwrap();
        assert_eq!(g.bindings(), vec![(var("x"), Type::Top)]);
        let g2 = g.extend(var("y"), xa()).unwrap();
        assert_eq!(g2.bindings(), vec![(var("x"), Type::Top), (var("y"), xa())]);
        assert_eq!(
            TypeEnv::empty().extend(var("x"), xa()),
            Err(EnvError::SelfReference(var("x")))
        );
        assert_eq!(g.extend(var("x"), Type::Bot), Err(EnvError::DuplicateBinding(var("x"))));
        assert!(matches!(
            TypeEnv::empty().extend(var("y"), xa()),
            Err(EnvError::OutOfScope { .. })
        ));
    }

    #[test]
    fn lookup_and_split() {
        let g = TypeEnv::from_bindings([(var("x"), Type::Top), (var("y"), Type::Bot)]).unwrap();
        assert_eq!(g.lookup(&var("x")), Some(&Type::Top));
        assert_eq!(g.lookup(&var("y")), Some(&Type::Bot));
        assert_eq!(g.lookup(&var("z")), None);

        let (pre, t, suf) = g.split_at(&var("y")).unwrap();
        assert_eq!(pre.bindings(), vec![(var("x"), Type::Top)]);
        assert_eq!(t, Type::Bot);
        assert!(suf.is_empty());

        let (pre, t, suf) = g.split_at(&var("x")).unwrap();
        assert!(pre.is_empty());
        assert_eq!(t, Type::Top);
        assert_eq!(suf, vec![(var("y"), Type::Bot)]);
    }

    #[test]
    fn split_after_extend_returns_original() {
        let g = TypeEnv::parse("x : {A: Bot .. Top} ;").unwrap();
        let g2 = g.extend(var("y"), xa()).unwrap();
        let (pre, t, suf) = g2.split_at(&var("y")).unwrap();
        assert_eq!(pre, g);
        assert_eq!(t, xa());
        assert!(suf.is_empty());
    }

    #[test]
    fn file_round_trip() {
        let g = TypeEnv::parse("x : {A: Bot .. Top} ;\ny : all(z: x.A) x.A ;").unwrap();
        assert_eq!(TypeEnv::parse(&g.to_string()).unwrap(), g);
        assert!(TypeEnv::parse("y : x.A ;").is_err());
    }
}
