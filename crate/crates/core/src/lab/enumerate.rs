//! Exhaustive enumeration of types, terms and environments by size.
//!
//! Bound variables get canonical names: a binder with `k` enclosing
//! binders is called `b{k}`. Two alpha-equivalent enumerated values are
//! therefore syntactically equal, so each size class is duplicate-free.
//! Every type has odd size.

use std::collections::HashMap;
use std::rc::Rc;

use crate::env::TypeEnv;
use crate::syntax::{label, var, Term, Type, TypeLabel, VarName};

/// Free variables and labels the enumerator draws from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    pub vars: Vec<VarName>,
    pub labels: Vec<TypeLabel>,
}

impl Alphabet {
    /// `x`, `y` and `A`, `B`, `C`.
    pub fn small() -> Alphabet {
        Alphabet { vars: vec![var("x"), var("y")], labels: vec![label("A"), label("B"), label("C")] }
    }

    /// The variable and labels of the bad-bounds environment.
    pub fn gamma_star() -> Alphabet {
        Alphabet { vars: vec![var("e")], labels: vec![label("E"), label("V"), label("Z")] }
    }
}

pub fn binder(depth: usize) -> VarName {
    var(&format!("b{depth}"))
}

#[derive(Default)]
pub struct Enumerator {
    labels: Vec<TypeLabel>,
    types: HashMap<(Vec<VarName>, usize, usize), Rc<Vec<Type>>>,
    terms: HashMap<(Vec<VarName>, usize, usize), Rc<Vec<Term>>>,
}

impl Enumerator {
    pub fn new(labels: Vec<TypeLabel>) -> Enumerator {
        Enumerator { labels, ..Default::default() }
    }

    pub fn labels(&self) -> &[TypeLabel] {
        &self.labels
    }

    /// Types of exactly `size` over `free` plus `depth` enclosing binders.
    pub fn types(&mut self, free: &[VarName], depth: usize, size: usize) -> Rc<Vec<Type>> {
        let key = (free.to_vec(), depth, size);
        if let Some(ts) = self.types.get(&key) {
            return ts.clone();
        }
        let mut out = Vec::new();
        if size == 1 {
            out.push(Type::Top);
            out.push(Type::Bot);
            let scope: Vec<VarName> = free.iter().cloned().chain((0..depth).map(binder)).collect();
            for x in &scope {
                for a in &self.labels {
                    out.push(Type::path(x.clone(), a.clone()));
                }
            }
        } else if size >= 3 {
            for a in 1..size - 1 {
                let b = size - 1 - a;
                let lows = self.types(free, depth, a);
                let highs = self.types(free, depth, b);
                for l in self.labels.clone() {
                    for lo in lows.iter() {
                        for hi in highs.iter() {
                            out.push(Type::decl(l.clone(), lo.clone(), hi.clone()));
                        }
                    }
                }
            }
            for a in 1..size - 1 {
                let b = size - 1 - a;
                let params = self.types(free, depth, a);
                let results = self.types(free, depth + 1, b);
                for p in params.iter() {
                    for r in results.iter() {
                        out.push(Type::all(binder(depth), p.clone(), r.clone()));
                    }
                }
            }
        }
        let out = Rc::new(out);
        self.types.insert(key, out.clone());
        out
    }

    /// Closed-over-`free` types of every size up to `max_size`, smallest first.
    pub fn types_up_to(&mut self, free: &[VarName], max_size: usize) -> Vec<Type> {
        (1..=max_size).flat_map(|s| self.types(free, 0, s).as_ref().clone()).collect()
    }

    /// Terms of exactly `size` over `free` plus `depth` enclosing binders.
    pub fn terms(&mut self, free: &[VarName], depth: usize, size: usize) -> Rc<Vec<Term>> {
        let key = (free.to_vec(), depth, size);
        if let Some(ts) = self.terms.get(&key) {
            return ts.clone();
        }
        let mut out = Vec::new();
        let scope: Vec<VarName> = free.iter().cloned().chain((0..depth).map(binder)).collect();
        if size == 1 {
            out.extend(scope.iter().cloned().map(Term::Var));
            for f in &scope {
                for x in &scope {
                    out.push(Term::App(f.clone(), x.clone()));
                }
            }
        } else if size >= 2 {
            for t in self.types(free, depth, size - 1).iter() {
                for a in self.labels.clone() {
                    out.push(Term::Tag(a, t.clone()));
                }
            }
            for a in 1..size - 1 {
                let b = size - 1 - a;
                let params = self.types(free, depth, a);
                let bodies = self.terms(free, depth + 1, b);
                for p in params.iter() {
                    for body in bodies.iter() {
                        out.push(Term::lam(binder(depth), p.clone(), body.clone()));
                    }
                }
            }
            for a in 1..size - 1 {
                let b = size - 1 - a;
                let rhss = self.terms(free, depth, a);
                let bodies = self.terms(free, depth + 1, b);
                for r in rhss.iter() {
                    for body in bodies.iter() {
                        out.push(Term::let_in(binder(depth), r.clone(), body.clone()));
                    }
                }
            }
        }
        let out = Rc::new(out);
        self.terms.insert(key, out.clone());
        out
    }

    pub fn terms_up_to(&mut self, free: &[VarName], max_size: usize) -> Vec<Term> {
        (1..=max_size).flat_map(|s| self.terms(free, 0, s).as_ref().clone()).collect()
    }

    /// Well-formed environments binding a prefix of `vars` in order, each
    /// type of size at most `max_size` over the variables before it.
    pub fn envs(&mut self, vars: &[VarName], max_size: usize) -> Vec<TypeEnv> {
        let mut layer = vec![TypeEnv::empty()];
        let mut all = layer.clone();
        for (i, x) in vars.iter().enumerate() {
            let tys = self.types_up_to(&vars[..i], max_size);
            let mut next = Vec::new();
            for g in &layer {
                for t in &tys {
                    next.push(g.extend(x.clone(), t.clone()).expect("enumerated types are in scope"));
                }
            }
            all.extend(next.iter().cloned());
            layer = next;
        }
        all
    }
}

/// Independent count of enumerated types of exactly `size` with `scope`
/// variables in scope and `labels` labels.
pub fn count_types(size: usize, scope: usize, labels: usize) -> u128 {
    fn go(s: usize, v: usize, l: u128, memo: &mut HashMap<(usize, usize), u128>) -> u128 {
        if s == 0 || s.is_multiple_of(2) {
            return 0;
        }
        if s == 1 {
            return 2 + v as u128 * l;
        }
        if let Some(&n) = memo.get(&(s, v)) {
            return n;
        }
        let mut n = 0;
        for a in 1..s - 1 {
            let b = s - 1 - a;
            n += l * go(a, v, l, memo) * go(b, v, l, memo);
            n += go(a, v, l, memo) * go(b, v + 1, l, memo);
        }
        memo.insert((s, v), n);
        n
    }
    go(size, scope, labels as u128, &mut HashMap::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn gamma_star_alphabet_sizes() {
        let ab = Alphabet::gamma_star();
        let mut en = Enumerator::new(ab.labels.clone());
        let counts: Vec<usize> = (1..=4).map(|s| en.types(&ab.vars, 0, s).len()).collect();
        assert_eq!(counts, vec![5, 0, 115, 0]);
        assert_eq!(en.types_up_to(&ab.vars, 4).len(), 120);
    }

    #[test]
    fn counts_match_recount() {
        let ab = Alphabet::small();
        let mut en = Enumerator::new(ab.labels.clone());
        for scope in 0..=2 {
            for size in 1..=7 {
                let n = en.types(&ab.vars[..scope], 0, size).len() as u128;
                assert_eq!(n, count_types(size, scope, 3), "size {size}, scope {scope}");
            }
        }
    }

    #[test]
    fn duplicate_free_up_to_alpha() {
        let ab = Alphabet::small();
        let mut en = Enumerator::new(ab.labels.clone());
        let ts = en.types_up_to(&ab.vars, 5);
        let set: BTreeSet<_> = ts.iter().collect();
        assert_eq!(set.len(), ts.len());
        let small = en.types_up_to(&ab.vars, 3);
        for (i, a) in small.iter().enumerate() {
            for b in &small[i + 1..] {
                assert!(!a.alpha_eq(b), "{a} ~ {b}");
            }
        }
    }

    #[test]
    fn terms_are_scoped() {
        let ab = Alphabet::small();
        let mut en = Enumerator::new(ab.labels.clone());
        for t in en.terms_up_to(&ab.vars[..1], 4) {
            assert!(t.free_vars().iter().all(|x| *x == ab.vars[0]), "{t}");
        }
    }

    #[test]
    fn envs_are_wellformed() {
        let ab = Alphabet::small();
        let mut en = Enumerator::new(ab.labels.clone());
        let envs = en.envs(&ab.vars, 3);
        assert_eq!(envs.len(), 1 + 24 + 24 * 120);
        assert!(envs.iter().all(TypeEnv::is_wellformed));
    }
}
