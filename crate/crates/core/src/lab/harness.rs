//! Falsification harnesses for the lemmas about `Γ⋆`.
//!
//! Derivability comes from bounded search, so a clean report means no
//! counterexample was found within the bounds. It is not a proof.

use std::fmt;

use crate::declarative::{decl_verify, pool_from, Judgment, Searcher};
use crate::env::TypeEnv;
use crate::step::{step_subtype, step_type, StepError, Subtyping};
use crate::syntax::{Term, Type};

use super::colours::Colouring;
use super::corpus::{b_type, bad_bounds_tree, c_type, gamma_star, term_w, w_typed_b_tree, w_typed_c_tree};
use super::enumerate::{Alphabet, Enumerator};

pub const REPORT_HEADER: &str =
    "falsification by bounded derivation search; a clean report is not a proof";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub statement: &'static str,
    pub judgment: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.statement, self.judgment)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    pub name: &'static str,
    pub max_size: usize,
    pub fuel: u32,
    pub types: usize,
    pub queries: usize,
    /// Judgments for which search found a derivation.
    pub derivable: usize,
    /// Sorted.
    pub violations: Vec<Violation>,
}

impl LemmaReport {
    pub fn clean(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for LemmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# {REPORT_HEADER}")?;
        writeln!(f, "{}: max size {}, fuel {}", self.name, self.max_size, self.fuel)?;
        writeln!(f, "types: {}", self.types)?;
        writeln!(f, "queries: {}", self.queries)?;
        writeln!(f, "derivable: {}", self.derivable)?;
        writeln!(f, "violations: {}", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

struct Sweep {
    env: TypeEnv,
    types: Vec<Type>,
    searcher: Searcher,
    fuel: u32,
}

impl Sweep {
    /// One searcher for every query, with the union of the queries' pools.
    fn new(max_size: usize, fuel: u32) -> Sweep {
        let ab = Alphabet::gamma_star();
        let env = gamma_star();
        let types = Enumerator::new(ab.labels).types_up_to(&ab.vars, max_size);
        let searcher = Searcher::new(pool_from(&env, &types));
        Sweep { env, types, searcher, fuel }
    }

    fn derivable(&mut self, j: &Judgment) -> bool {
        match self.searcher.search(j, self.fuel) {
            Some(d) => {
                debug_assert!(decl_verify(&d).is_ok(), "search produced an invalid tree");
                true
            }
            None => false,
        }
    }
}

/// Checks the seven well-behavedness statements and colour disjointness
/// over all `Γ⋆` types up to `max_size`.
pub fn check_wellbehaved(max_size: usize, fuel: u32) -> LemmaReport {
    let mut sw = Sweep::new(max_size, fuel);
    let col = Colouring::default();
    let (mut queries, mut derivable) = (0, 0);
    let mut violations = Vec::new();
    let mut flag = |statement: &'static str, judgment: String| {
        violations.push(Violation { statement, judgment });
    };

    for t in &sw.types {
        if col.is_red(t) && col.is_blue(t) {
            flag("colours disjoint", t.to_string());
        }
    }
    let e = Term::Var(crate::syntax::var("e"));
    for t in sw.types.clone() {
        queries += 1;
        if sw.derivable(&Judgment::typ(&sw.env, e.clone(), t.clone())) {
            derivable += 1;
            if !(t == Type::Top || col.is_red(&t)) {
                flag("(1) e : T implies T = Top or red T", format!("e : {t}"));
            }
        }
    }
    for lhs in sw.types.clone() {
        for rhs in sw.types.clone() {
            queries += 1;
            if !sw.derivable(&Judgment::sub(&sw.env, lhs.clone(), rhs.clone())) {
                continue;
            }
            derivable += 1;
            let j = || format!("{lhs} <: {rhs}");
            if col.is_red(&lhs) && !(rhs == Type::Top || col.is_red(&rhs)) {
                flag("(2) red T, T <: S implies S = Top or red S", j());
            }
            if col.is_red(&rhs) && !(lhs == Type::Bot || col.is_red(&lhs)) {
                flag("(3) red T, S <: T implies S = Bot or red S", j());
            }
            if col.is_blue(&lhs) && !(rhs == Type::Top || col.is_blue(&rhs)) {
                flag("(4) blue T, T <: S implies S = Top or blue S", j());
            }
            if col.is_blue(&rhs) && !(lhs == Type::Bot || col.is_blue(&lhs)) {
                flag("(5) blue T, S <: T implies S = Bot or blue S", j());
            }
            if rhs == Type::Bot && lhs != Type::Bot {
                flag("(6) T <: Bot implies T = Bot", j());
            }
            if lhs == Type::Top && rhs != Type::Top {
                flag("(7) Top <: T implies T = Top", j());
            }
        }
    }
    violations.sort_by(|a, b| (a.statement, &a.judgment).cmp(&(b.statement, &b.judgment)));
    LemmaReport {
        name: "well-behavedness of the bad-bounds environment",
        max_size,
        fuel,
        types: sw.types.len(),
        queries,
        derivable,
        violations,
    }
}

/// Checks that `T <: {X: X1 .. X2}` only holds for `T = Bot` or a
/// declaration of the same label `X`.
pub fn check_no_tag_switch(max_size: usize, fuel: u32) -> LemmaReport {
    let mut sw = Sweep::new(max_size, fuel);
    let (mut queries, mut derivable) = (0, 0);
    let mut violations = Vec::new();
    let targets: Vec<Type> = sw.types.iter().filter(|t| matches!(t, Type::Decl(..))).cloned().collect();
    for lhs in sw.types.clone() {
        for rhs in &targets {
            queries += 1;
            if !sw.derivable(&Judgment::sub(&sw.env, lhs.clone(), rhs.clone())) {
                continue;
            }
            derivable += 1;
            let Type::Decl(x, _, _) = rhs else { unreachable!() };
            let ok = match &lhs {
                Type::Bot => true,
                Type::Decl(y, _, _) => y == x,
                _ => false,
            };
            if !ok {
                violations.push(Violation {
                    statement: "declarations keep their label",
                    judgment: format!("{lhs} <: {rhs}"),
                });
            }
        }
    }
    violations.sort_by(|a, b| a.judgment.cmp(&b.judgment));
    LemmaReport {
        name: "declarations do not switch labels",
        max_size,
        fuel,
        types: sw.types.len(),
        queries,
        derivable,
        violations,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimalityReport {
    /// Step type of `w` in `Γ⋆`.
    pub step_type_w: Option<Type>,
    pub w_typed_b: bool,
    pub w_typed_c: bool,
    pub b_sub_c: bool,
    pub c_sub_b: bool,
    pub bad_bounds: bool,
}

impl MinimalityReport {
    pub fn reproduced(&self) -> bool {
        self.step_type_w.as_ref() == Some(&b_type())
            && self.w_typed_b
            && self.w_typed_c
            && !self.b_sub_c
            && !self.c_sub_b
            && self.bad_bounds
    }
}

impl fmt::Display for MinimalityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yn = |b: bool| if b { "accepted" } else { "rejected" };
        match &self.step_type_w {
            Some(t) => writeln!(f, "step type of w: {t}")?,
            None => writeln!(f, "step type of w: untypable")?,
        }
        writeln!(f, "derivation of w : {}: {}", b_type(), yn(self.w_typed_b))?;
        writeln!(f, "derivation of w : {}: {}", c_type(), yn(self.w_typed_c))?;
        writeln!(f, "step subtype {} <: {}: {}", b_type(), c_type(), self.b_sub_c)?;
        writeln!(f, "step subtype {} <: {}: {}", c_type(), b_type(), self.c_sub_b)?;
        writeln!(f, "derivation of all(b: B) B <: all(b: B) C: {}", yn(self.bad_bounds))?;
        writeln!(f, "reproduced: {}", self.reproduced())
    }
}

pub fn run_minimality_counterexample() -> Result<MinimalityReport, StepError> {
    let g = gamma_star();
    let holds = |s: Subtyping| s.holds();
    Ok(MinimalityReport {
        step_type_w: step_type(&g, &term_w())?.ty().cloned(),
        w_typed_b: decl_verify(&w_typed_b_tree()).is_ok(),
        w_typed_c: decl_verify(&w_typed_c_tree()).is_ok(),
        b_sub_c: holds(step_subtype(&g, &b_type(), &c_type())?),
        c_sub_b: holds(step_subtype(&g, &c_type(), &b_type())?),
        bad_bounds: decl_verify(&bad_bounds_tree(&g)).is_ok(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimality_reproduced() {
        let r = run_minimality_counterexample().unwrap();
        assert_eq!(r.step_type_w, Some(b_type()));
        assert!(r.reproduced(), "{r}");
    }

    #[test]
    fn small_sweeps_are_clean() {
        let r = check_wellbehaved(3, 4);
        println!("{r}");
        assert!(r.derivable > 0);
        let r = check_no_tag_switch(3, 4);
        assert!(r.clean(), "{r}");
    }
}
