//! A toy model of Scala's bounds-aware subtype check.
//!
//! Types are base names, functions and abstract members with optional
//! bounds. The check tries the lower bound of the right side, then the upper
//! bound of the left side, then the structural cases. It has no
//! transitivity rule, so it can accept `a <: b` and `b <: c` and reject
//! `a <: c`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

pub const DEFAULT_DEPTH_LIMIT: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SType {
    Base(String),
    Fun(Box<SType>, Box<SType>),
    Member(String),
}

impl SType {
    pub fn base(name: &str) -> SType {
        SType::Base(name.to_string())
    }

    pub fn member(name: &str) -> SType {
        SType::Member(name.to_string())
    }

    pub fn fun(param: SType, result: SType) -> SType {
        SType::Fun(Box::new(param), Box::new(result))
    }

    fn members<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            SType::Base(_) => {}
            SType::Member(m) => out.push(m),
            SType::Fun(p, r) => {
                p.members(out);
                r.members(out);
            }
        }
    }
}

impl fmt::Display for SType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SType::Base(n) => write!(f, "{n}"),
            SType::Member(n) => write!(f, "#{n}"),
            SType::Fun(p, r) if matches!(**p, SType::Fun(..)) => write!(f, "({p}) -> {r}"),
            SType::Fun(p, r) => write!(f, "{p} -> {r}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bounds {
    pub lower: Option<SType>,
    pub upper: Option<SType>,
}

/// Named members and their bounds. Iteration order is by name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BoundsUniverse {
    members: BTreeMap<String, Bounds>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DottyError {
    #[error("unknown member `{0}`")]
    UnknownMember(String),
    #[error("recursion depth exceeded {0}")]
    DepthLimit(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl BoundsUniverse {
    pub fn new() -> BoundsUniverse {
        BoundsUniverse::default()
    }

    pub fn with_member(mut self, name: &str, lower: Option<SType>, upper: Option<SType>) -> Self {
        self.members.insert(name.to_string(), Bounds { lower, upper });
        self
    }

    pub fn bounds(&self, name: &str) -> Option<&Bounds> {
        self.members.get(name)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Every member mentioned in a bound or in `extra` must be declared.
    pub fn check(&self, extra: &[&SType]) -> Result<(), DottyError> {
        let mut refs = Vec::new();
        for b in self.members.values() {
            b.lower.iter().chain(b.upper.iter()).for_each(|t| t.members(&mut refs));
        }
        extra.iter().for_each(|t| t.members(&mut refs));
        match refs.into_iter().find(|m| !self.members.contains_key(*m)) {
            Some(m) => Err(DottyError::UnknownMember(m.to_string())),
            None => Ok(()),
        }
    }
}

impl fmt::Display for BoundsUniverse {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, b) in &self.members {
            write!(f, "member {name}")?;
            if let Some(l) = &b.lower {
                write!(f, " lower {l}")?;
            }
            if let Some(u) = &b.upper {
                write!(f, " upper {u}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubStats {
    pub result: bool,
    pub calls: u64,
    pub max_depth: usize,
}

struct Run<'a> {
    u: &'a BoundsUniverse,
    limit: usize,
    calls: u64,
    max_depth: usize,
}

impl Run<'_> {
    fn sub(&mut self, t1: &SType, t2: &SType, depth: usize) -> Result<bool, DottyError> {
        self.calls += 1;
        self.max_depth = self.max_depth.max(depth);
        if depth > self.limit {
            return Err(DottyError::DepthLimit(self.limit));
        }
        let u = self.u;
        if let SType::Member(m) = t2 {
            if let Some(l2) = &u.members[m].lower {
                if self.sub(t1, l2, depth + 1)? {
                    return Ok(true);
                }
            }
        }
        if let SType::Member(m) = t1 {
            if let Some(u1) = &u.members[m].upper {
                if self.sub(u1, t2, depth + 1)? {
                    return Ok(true);
                }
            }
        }
        Ok(match (t1, t2) {
            (SType::Base(a), SType::Base(b)) | (SType::Member(a), SType::Member(b)) => a == b,
            (SType::Fun(p1, r1), SType::Fun(p2, r2)) => {
                self.sub(p2, p1, depth + 1)? && self.sub(r1, r2, depth + 1)?
            }
            _ => false,
        })
    }
}

pub fn scala_sub(u: &BoundsUniverse, t1: &SType, t2: &SType) -> Result<SubStats, DottyError> {
    scala_sub_with_limit(u, t1, t2, DEFAULT_DEPTH_LIMIT)
}

pub fn scala_sub_with_limit(
    u: &BoundsUniverse,
    t1: &SType,
    t2: &SType,
    limit: usize,
) -> Result<SubStats, DottyError> {
    u.check(&[t1, t2])?;
    let mut run = Run { u, limit, calls: 0, max_depth: 0 };
    let result = run.sub(t1, t2, 0)?;
    Ok(SubStats { result, calls: run.calls, max_depth: run.max_depth })
}

/// `E >: Int -> Int <: Int -> String`.
pub fn bad_bounds_universe() -> BoundsUniverse {
    let int = SType::base("Int");
    let string = SType::base("String");
    BoundsUniverse::new().with_member(
        "E",
        Some(SType::fun(int.clone(), int.clone())),
        Some(SType::fun(int, string)),
    )
}

/// Upper-bound chain `T1 <: ... <: TN`, lower-bound chain
/// `TN+1 <: ... <: T2N`, and the query `T1 <: T2N`.
pub fn make_pn(n: usize) -> (BoundsUniverse, SType, SType) {
    assert!(n >= 1, "make_pn needs n >= 1");
    let name = |i: usize| format!("T{i}");
    let mut u = BoundsUniverse::new();
    for i in 1..=n {
        let upper = (i < n).then(|| SType::Member(name(i + 1)));
        u = u.with_member(&name(i), None, upper);
    }
    for j in n + 1..=2 * n {
        let lower = (j > n + 1).then(|| SType::Member(name(j - 1)));
        u = u.with_member(&name(j), lower, None);
    }
    (u, SType::Member(name(1)), SType::Member(name(2 * n)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Calls,
    Nanos,
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Metric, String> {
        match s {
            "calls" => Ok(Metric::Calls),
            "nanos" => Ok(Metric::Nanos),
            other => Err(format!("unknown metric `{other}` (expected calls or nanos)")),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Calls => "calls",
            Metric::Nanos => "nanos",
        })
    }
}

/// One `(N, value)` row per `N` in `min..=max`.
pub fn bench_pn(min: usize, max: usize, metric: Metric) -> Result<Vec<(usize, u128)>, DottyError> {
    (min.max(1)..=max)
        .map(|n| {
            let (u, t1, t2) = make_pn(n);
            let start = Instant::now();
            let stats = scala_sub(&u, &t1, &t2)?;
            let value = match metric {
                Metric::Calls => stats.calls as u128,
                Metric::Nanos => start.elapsed().as_nanos(),
            };
            Ok((n, value))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Hash,
    Arrow,
    Open,
    Close,
    Sub,
}

fn tokens(line: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            c if c.is_whitespace() => {}
            '#' => out.push(Tok::Hash),
            '(' => out.push(Tok::Open),
            ')' => out.push(Tok::Close),
            '-' if chars.next_if_eq(&'>').is_some() => out.push(Tok::Arrow),
            '<' if chars.next_if_eq(&':').is_some() => out.push(Tok::Sub),
            c if c.is_alphanumeric() || c == '_' => {
                let mut w = c.to_string();
                while let Some(d) = chars.next_if(|d| d.is_alphanumeric() || *d == '_') {
                    w.push(d);
                }
                out.push(Tok::Word(w));
            }
            other => return Err(format!("unexpected character `{other}`")),
        }
    }
    Ok(out)
}

struct Cursor {
    toks: Vec<Tok>,
    pos: usize,
}

impl Cursor {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn keyword(&mut self, kw: &str) -> bool {
        if self.peek() == Some(&Tok::Word(kw.to_string())) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ty(&mut self) -> Result<SType, String> {
        let head = match self.next() {
            Some(Tok::Hash) => match self.next() {
                Some(Tok::Word(w)) => SType::Member(w),
                _ => return Err("expected a member name after `#`".into()),
            },
            Some(Tok::Word(w)) if w != "lower" && w != "upper" => SType::Base(w),
            Some(Tok::Open) => {
                let t = self.ty()?;
                if self.next() != Some(Tok::Close) {
                    return Err("expected `)`".into());
                }
                t
            }
            _ => return Err("expected a type".into()),
        };
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            return Ok(SType::fun(head, self.ty()?));
        }
        Ok(head)
    }
}

pub fn parse_stype(src: &str) -> Result<SType, DottyError> {
    let err = |message: String| DottyError::Parse { line: 1, message };
    let mut c = Cursor { toks: tokens(src).map_err(err)?, pos: 0 };
    let t = c.ty().map_err(err)?;
    if c.peek().is_some() {
        return Err(err("trailing input".into()));
    }
    Ok(t)
}

/// A universe file: `member NAME [lower TYPE] [upper TYPE]` lines, plus
/// optional `query S <: T` lines. `//` starts a comment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniverseFile {
    pub universe: BoundsUniverse,
    pub queries: Vec<(SType, SType)>,
}

pub fn parse_universe(src: &str) -> Result<UniverseFile, DottyError> {
    let mut universe = BoundsUniverse::new();
    let mut queries = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = raw.split("//").next().unwrap_or_default();
        let err = |message: String| DottyError::Parse { line: i + 1, message };
        let mut c = Cursor { toks: tokens(line).map_err(err)?, pos: 0 };
        if c.peek().is_none() {
            continue;
        }
        if c.keyword("member") {
            let Some(Tok::Word(name)) = c.next() else {
                return Err(err("expected a member name".into()));
            };
            if universe.bounds(&name).is_some() {
                return Err(err(format!("member `{name}` declared twice")));
            }
            let lower = if c.keyword("lower") { Some(c.ty().map_err(err)?) } else { None };
            let upper = if c.keyword("upper") { Some(c.ty().map_err(err)?) } else { None };
            universe = universe.with_member(&name, lower, upper);
        } else if c.keyword("query") {
            let s = c.ty().map_err(err)?;
            if c.next() != Some(Tok::Sub) {
                return Err(err("expected `<:`".into()));
            }
            queries.push((s, c.ty().map_err(err)?));
        } else {
            return Err(err("expected `member` or `query`".into()));
        }
        if c.peek().is_some() {
            return Err(err("trailing input".into()));
        }
    }
    universe.check(&[])?;
    Ok(UniverseFile { universe, queries })
}
