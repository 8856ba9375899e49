//! Depth-bounded search for declarative derivations.
//!
//! `Trans` and `Sub` need a guessed middle type. Guesses come from a fixed
//! candidate pool built once from the root goal; a subgoal under extra
//! binders uses the part of the pool that is in scope there. Not finding a
//! tree says nothing about derivability.
//!
//! Results are memoized per searcher. The answer for a goal at a given fuel
//! is always the first tree in rule and candidate order, so it does not
//! depend on which queries ran before.

use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use crate::env::TypeEnv;
use crate::exposure::{expose, ExposureResult};
use crate::step::step_type;
use crate::syntax::{Term, Type, TypeLabel, VarName};

use super::{DeclRule, Derivation, Judgment};

/// Searches `j` with derivation depth at most `fuel`, using the candidate
/// pool of `j` itself.
pub fn decl_search(j: &Judgment, fuel: u32) -> Option<Derivation> {
    Searcher::for_judgment(j).search(j, fuel)
}

fn subterms(t: &Type, out: &mut BTreeSet<Type>) {
    if !out.insert(t.clone()) {
        return;
    }
    match t {
        Type::Top | Type::Bot | Type::Path(..) => {}
        Type::Decl(_, lo, hi) => {
            subterms(lo, out);
            subterms(hi, out);
        }
        Type::All(_, p, r) => {
            subterms(p, out);
            subterms(r, out);
        }
    }
}

fn term_types(t: &Term, out: &mut Vec<Type>) {
    match t {
        Term::Var(_) | Term::App(..) => {}
        Term::Tag(_, ty) => out.push(ty.clone()),
        Term::Lam(_, ty, body) => {
            out.push(ty.clone());
            term_types(body, out);
        }
        Term::Let(_, rhs, body) => {
            term_types(rhs, out);
            term_types(body, out);
        }
    }
}

fn labels(t: &Type, out: &mut BTreeSet<TypeLabel>) {
    match t {
        Type::Top | Type::Bot => {}
        Type::Path(_, a) => {
            out.insert(a.clone());
        }
        Type::Decl(a, lo, hi) => {
            out.insert(a.clone());
            labels(lo, out);
            labels(hi, out);
        }
        Type::All(_, p, r) => {
            labels(p, out);
            labels(r, out);
        }
    }
}

/// Middle-type candidates for `j`: `Top`, `Bot`, every subterm of the
/// types in the goal and in the environment, every selection `x.A` of a
/// bound variable and a label occurring there, and the exposure of each
/// path among them. Sorted by size, then structurally.
pub fn candidate_pool(j: &Judgment) -> Vec<Type> {
    let seeds = match j {
        Judgment::Sub { lhs, rhs, .. } => vec![lhs.clone(), rhs.clone()],
        Judgment::Typ { term, ty, .. } => {
            let mut out = vec![ty.clone()];
            term_types(term, &mut out);
            out
        }
    };
    pool_from(j.env(), &seeds)
}

/// The candidate pool for goals in `env` mentioning `seeds`.
pub fn pool_from(env: &TypeEnv, seeds: &[Type]) -> Vec<Type> {
    let mut set = BTreeSet::from([Type::Top, Type::Bot]);
    for t in seeds {
        subterms(t, &mut set);
    }
    for (_, t) in env.bindings() {
        subterms(&t, &mut set);
    }
    let mut ls = BTreeSet::new();
    for t in &set {
        labels(t, &mut ls);
    }
    for x in env.dom() {
        for a in &ls {
            set.insert(Type::path(x.clone(), a.clone()));
        }
    }
    let paths: Vec<Type> = set.iter().filter(|t| t.is_path()).cloned().collect();
    for p in paths {
        if let Ok(ExposureResult::Exposed(t)) = expose(env, &p) {
            set.insert(t);
        }
    }
    let mut pool: Vec<Type> = set.into_iter().collect();
    pool.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| a.cmp(b)));
    pool
}

type Id = u32;

/// Hash-consing table: each distinct value gets a small id.
struct Table<T> {
    ids: HashMap<T, Id>,
    items: Vec<T>,
}

impl<T: Clone + Eq + std::hash::Hash> Table<T> {
    fn new() -> Self {
        Table { ids: HashMap::new(), items: Vec::new() }
    }

    fn id(&mut self, t: &T) -> Id {
        if let Some(&i) = self.ids.get(t) {
            return i;
        }
        let i = self.items.len() as Id;
        self.items.push(t.clone());
        self.ids.insert(t.clone(), i);
        i
    }

    fn get(&self, i: Id) -> &T {
        &self.items[i as usize]
    }
}

/// A goal by interned environment, left side or term, and type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Goal {
    Sub(Id, Id, Id),
    Typ(Id, Id, Id),
}

#[derive(Default)]
struct Entry {
    /// Highest fuel known to fail.
    failed: u32,
    found: Vec<(u32, Derivation)>,
}

/// A memoizing search over a fixed candidate pool.
pub struct Searcher {
    pool: Vec<Type>,
    types: Table<Type>,
    terms: Table<Term>,
    envs: Table<TypeEnv>,
    in_scope: HashMap<Id, Rc<Vec<Id>>>,
    memo: HashMap<Goal, Entry>,
}

impl Searcher {
    pub fn new(pool: Vec<Type>) -> Searcher {
        Searcher {
            pool,
            types: Table::new(),
            terms: Table::new(),
            envs: Table::new(),
            in_scope: HashMap::new(),
            memo: HashMap::new(),
        }
    }

    pub fn for_judgment(j: &Judgment) -> Searcher {
        Searcher::new(candidate_pool(j))
    }

    pub fn pool(&self) -> &[Type] {
        &self.pool
    }

    pub fn search(&mut self, j: &Judgment, fuel: u32) -> Option<Derivation> {
        let goal = match j {
            Judgment::Sub { env, lhs, rhs } => {
                if !(env.covers(lhs) && env.covers(rhs)) {
                    return None;
                }
                Goal::Sub(self.envs.id(env), self.types.id(lhs), self.types.id(rhs))
            }
            Judgment::Typ { env, term, ty } => {
                if !(env.covers(ty) && term.free_vars().iter().all(|x| env.contains(x))) {
                    return None;
                }
                Goal::Typ(self.envs.id(env), self.terms.id(term), self.types.id(ty))
            }
        };
        self.go(goal, fuel)
    }

    fn candidates(&mut self, env: Id) -> Rc<Vec<Id>> {
        if let Some(c) = self.in_scope.get(&env) {
            return c.clone();
        }
        let g = self.envs.get(env).clone();
        let pool: Vec<Type> = self.pool.iter().filter(|t| g.covers(t)).cloned().collect();
        let c = Rc::new(pool.iter().map(|t| self.types.id(t)).collect::<Vec<_>>());
        self.in_scope.insert(env, c.clone());
        c
    }

    fn go(&mut self, goal: Goal, fuel: u32) -> Option<Derivation> {
        if fuel == 0 {
            return None;
        }
        if let Some(entry) = self.memo.get(&goal) {
            if fuel <= entry.failed {
                return None;
            }
            if let Some((_, d)) = entry.found.iter().find(|(f, _)| *f == fuel) {
                return Some(d.clone());
            }
        }
        let result = match goal {
            Goal::Sub(e, s, t) => self.sub(e, s, t, fuel),
            Goal::Typ(e, term, ty) => self.typ(e, term, ty, fuel),
        };
        let entry = self.memo.entry(goal).or_default();
        match &result {
            Some(d) => entry.found.push((fuel, d.clone())),
            None => entry.failed = entry.failed.max(fuel),
        }
        result
    }

    fn both(&mut self, a: Goal, b: Goal, fuel: u32) -> Option<Vec<Derivation>> {
        let first = self.go(a, fuel)?;
        let second = self.go(b, fuel)?;
        Some(vec![first, second])
    }

    fn sub_goal(&mut self, env: Id, s: &Type, t: &Type) -> Goal {
        Goal::Sub(env, self.types.id(s), self.types.id(t))
    }

    fn typ_goal(&mut self, env: Id, term: &Term, t: &Type) -> Goal {
        Goal::Typ(env, self.terms.id(term), self.types.id(t))
    }

    fn sub(&mut self, e: Id, s_id: Id, t_id: Id, fuel: u32) -> Option<Derivation> {
        let env = self.envs.get(e).clone();
        let (s, t) = (self.types.get(s_id).clone(), self.types.get(t_id).clone());
        let j = || Judgment::sub(&env, s.clone(), t.clone());
        if t == Type::Top {
            return Some(Derivation::leaf(DeclRule::Top, j()));
        }
        if s == Type::Bot {
            return Some(Derivation::leaf(DeclRule::Bot, j()));
        }
        if s.alpha_eq(&t) {
            return Some(Derivation::leaf(DeclRule::Refl, j()));
        }
        let n = fuel - 1;
        match (&s, &t) {
            (Type::Decl(a1, s1, t1), Type::Decl(a2, s2, t2)) if a1 == a2 => {
                let lower = self.sub_goal(e, s2, s1);
                let upper = self.sub_goal(e, t1, t2);
                if let Some(ps) = self.both(lower, upper, n) {
                    return Some(Derivation::node(DeclRule::TypTyp, j(), ps));
                }
            }
            (Type::All(x1, p1, r1), Type::All(x2, p2, r2)) => {
                let z = env.fresh_name(x1, &BTreeSet::new());
                let inner = env.extend(z.clone(), p2.as_ref().clone()).expect("parameter in scope");
                let inner = self.envs.id(&inner);
                let params = self.sub_goal(e, p2, p1);
                let body = self.sub_goal(inner, &r1.rename(x1, &z), &r2.rename(x2, &z));
                if let Some(ps) = self.both(params, body, n) {
                    return Some(Derivation::node(DeclRule::AllAll, j(), ps));
                }
            }
            _ => {}
        }
        if let Type::Path(x, a) = &s {
            for lower in bound_candidates(&env, x, a, Bound::Lower) {
                let decl = Type::decl(a.clone(), lower, t.clone());
                let goal = self.typ_goal(e, &Term::Var(x.clone()), &decl);
                if let Some(p) = self.go(goal, n) {
                    return Some(Derivation::node(DeclRule::SelSub, j(), vec![p]));
                }
            }
        }
        if let Type::Path(x, a) = &t {
            for upper in bound_candidates(&env, x, a, Bound::Upper) {
                let decl = Type::decl(a.clone(), s.clone(), upper);
                let goal = self.typ_goal(e, &Term::Var(x.clone()), &decl);
                if let Some(p) = self.go(goal, n) {
                    return Some(Derivation::node(DeclRule::SubSel, j(), vec![p]));
                }
            }
        }
        for &m in self.candidates(e).iter() {
            if m == s_id || m == t_id {
                continue;
            }
            if let Some(ps) = self.both(Goal::Sub(e, s_id, m), Goal::Sub(e, m, t_id), n) {
                return Some(Derivation::node(DeclRule::Trans, j(), ps));
            }
        }
        None
    }

    fn typ(&mut self, e: Id, term_id: Id, ty_id: Id, fuel: u32) -> Option<Derivation> {
        let env = self.envs.get(e).clone();
        let (term, ty) = (self.terms.get(term_id).clone(), self.types.get(ty_id).clone());
        let j = || Judgment::typ(&env, term.clone(), ty.clone());
        let n = fuel - 1;
        match (&term, &ty) {
            (Term::Var(x), _) => {
                if env.lookup(x).is_some_and(|t| t.alpha_eq(&ty)) {
                    return Some(Derivation::leaf(DeclRule::Var, j()));
                }
            }
            (Term::Tag(a, t), Type::Decl(b, lo, hi)) => {
                if a == b && lo.alpha_eq(t) && hi.alpha_eq(t) {
                    return Some(Derivation::leaf(DeclRule::TypI, j()));
                }
            }
            (Term::Lam(x, s, body), Type::All(y, s2, u)) if s.alpha_eq(s2) => {
                let z = env.fresh_name(x, &BTreeSet::new());
                let inner = env.extend(z.clone(), s.clone()).expect("parameter in scope");
                let inner = self.envs.id(&inner);
                let premise = self.typ_goal(inner, &body.rename(x, &z), &u.rename(y, &z));
                if let Some(p) = self.go(premise, n) {
                    return Some(Derivation::node(DeclRule::AllI, j(), vec![p]));
                }
            }
            (Term::App(f, y), _) => {
                for fun_ty in self.function_candidates(e, &env, f, y, &ty) {
                    let Type::All(_, param, _) = &fun_ty else { unreachable!() };
                    let fun = self.typ_goal(e, &Term::Var(f.clone()), &fun_ty);
                    let arg = self.typ_goal(e, &Term::Var(y.clone()), param);
                    if let Some(ps) = self.both(fun, arg, n) {
                        return Some(Derivation::node(DeclRule::AllE, j(), ps));
                    }
                }
            }
            (Term::Let(x, rhs, body), _) => {
                let z = env.fresh_name(x, &BTreeSet::new());
                let body = body.rename(x, &z);
                let mut rhs_types: Vec<Type> = Vec::new();
                if let Ok(out) = step_type(&env, rhs) {
                    rhs_types.extend(out.ty().cloned());
                }
                let cands = self.candidates(e);
                rhs_types.extend(cands.iter().map(|&c| self.types.get(c).clone()));
                for t in dedup_alpha(rhs_types) {
                    let inner = env.extend(z.clone(), t.clone()).expect("candidate in scope");
                    let inner = self.envs.id(&inner);
                    let first = self.typ_goal(e, rhs, &t);
                    let second = self.typ_goal(inner, &body, &ty);
                    if let Some(ps) = self.both(first, second, n) {
                        return Some(Derivation::node(DeclRule::Let, j(), ps));
                    }
                }
            }
            _ => {}
        }
        for &m in self.candidates(e).iter() {
            if m == ty_id {
                continue;
            }
            if let Some(ps) = self.both(Goal::Typ(e, term_id, m), Goal::Sub(e, m, ty_id), n) {
                return Some(Derivation::node(DeclRule::Sub, j(), ps));
            }
        }
        None
    }

    /// Function types `all(z: S) R` for `f` with `R[z:=y]` equal to the goal.
    fn function_candidates(&mut self, e: Id, env: &TypeEnv, f: &VarName, y: &VarName, goal: &Type) -> Vec<Type> {
        let mut out = Vec::new();
        if let Some(tf) = env.lookup(f) {
            out.push(tf.clone());
            if let Ok(ExposureResult::Exposed(t)) = expose(env, tf) {
                out.push(t);
            }
        }
        let cands = self.candidates(e);
        out.extend(cands.iter().map(|&c| self.types.get(c).clone()));
        out.retain(|t| matches!(t, Type::All(z, _, r) if r.rename(z, y).alpha_eq(goal)));
        if let Some(ty_y) = env.lookup(y) {
            let z = env.fresh_name(&crate::syntax::var("z"), &BTreeSet::new());
            out.push(Type::all(z, ty_y.clone(), goal.clone()));
        }
        dedup_alpha(out)
    }
}

fn dedup_alpha(ts: Vec<Type>) -> Vec<Type> {
    let mut out: Vec<Type> = Vec::with_capacity(ts.len());
    for t in ts {
        if !out.iter().any(|u| u.alpha_eq(&t)) {
            out.push(t);
        }
    }
    out
}

#[derive(Clone, Copy)]
enum Bound {
    Lower,
    Upper,
}

/// Bounds for `x`'s declaration of `a` worth trying in the Sel rules: the
/// declared one, the one in the exposure of `Γ(x)`, then `Bot` or `Top`.
fn bound_candidates(env: &TypeEnv, x: &VarName, a: &TypeLabel, which: Bound) -> Vec<Type> {
    let mut out = Vec::new();
    let pick = |t: &Type, out: &mut Vec<Type>| {
        if let Type::Decl(b, lo, hi) = t {
            if b == a {
                out.push(match which {
                    Bound::Lower => lo.as_ref().clone(),
                    Bound::Upper => hi.as_ref().clone(),
                });
            }
        }
    };
    if let Some(tx) = env.lookup(x) {
        pick(tx, &mut out);
        if let Ok(ExposureResult::Exposed(t)) = expose(env, tx) {
            pick(&t, &mut out);
        }
    }
    out.push(match which {
        Bound::Lower => Type::Bot,
        Bound::Upper => Type::Top,
    });
    dedup_alpha(out)
}
