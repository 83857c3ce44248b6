//! Level-2 rewriting: named equivalences between combinators, a rewrite
//! evaluator that applies them at explicitly chosen positions, and a
//! checker for step-by-step equational proofs.
//!
//! Rules match only at the root of the term they are given. Reaching inside
//! a term is done with the congruences [`Rw::RespSeq`], [`Rw::RespPlus`]
//! and [`Rw::RespTimes`], with [`Rw::Id2`] for the parts left alone.

mod catalog;
mod proof;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::syntax::typing::{infer_term, render_terms, Unifier};
use crate::syntax::{adjoint, check, Comb, CombBuilder, ParseError, Parser, Path, PathStep, Prim, Ty, TypeError};

pub use catalog::{rule, rule_registry, Direction, Group, Role, Rule, RuleRecord};
pub(crate) use catalog::schema;
pub use proof::{check_proof, parse_proof, Claim, ProofFailure, ProofParseError, ProofReport, ProofScript, Step};

/// A combinator with metavariables, used as the two sides of a rule.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Pattern {
    Prim(Prim),
    Meta(String),
    /// The adjoint of whatever the metavariable is bound to.
    AdjMeta(String),
    Seq(Box<Pattern>, Box<Pattern>),
    Plus(Box<Pattern>, Box<Pattern>),
    Times(Box<Pattern>, Box<Pattern>),
}

impl CombBuilder for Pattern {
    fn constant(p: Prim) -> Self {
        Pattern::Prim(p)
    }
    fn meta(name: &str) -> Option<Self> {
        Some(Pattern::Meta(name.to_string()))
    }
    fn seq(a: Self, b: Self) -> Self {
        Pattern::Seq(Box::new(a), Box::new(b))
    }
    fn plus(a: Self, b: Self) -> Self {
        Pattern::Plus(Box::new(a), Box::new(b))
    }
    fn times(a: Self, b: Self) -> Self {
        Pattern::Times(Box::new(a), Box::new(b))
    }
    fn adjoint(self) -> Self {
        match self {
            Pattern::Prim(p) => Pattern::Prim(p.inverse()),
            Pattern::Meta(m) => Pattern::AdjMeta(m),
            Pattern::AdjMeta(m) => Pattern::Meta(m),
            Pattern::Seq(a, b) => Pattern::Seq(Box::new(b.adjoint()), Box::new(a.adjoint())),
            Pattern::Plus(a, b) => Pattern::Plus(Box::new(a.adjoint()), Box::new(b.adjoint())),
            Pattern::Times(a, b) => Pattern::Times(Box::new(a.adjoint()), Box::new(b.adjoint())),
        }
    }
}

impl Pattern {
    /// Parses the combinator grammar extended with `$name` metavariables.
    pub fn parse(text: &str) -> Result<Pattern, ParseError> {
        let mut p = Parser::new(text)?;
        let pat = p.comb::<Pattern>()?;
        p.finish()?;
        Ok(pat)
    }

    /// Metavariable names in order of first occurrence.
    pub fn metas(&self) -> Vec<String> {
        fn go(p: &Pattern, out: &mut Vec<String>) {
            match p {
                Pattern::Prim(_) => {}
                Pattern::Meta(m) | Pattern::AdjMeta(m) => {
                    if !out.contains(m) {
                        out.push(m.clone());
                    }
                }
                Pattern::Seq(a, b) | Pattern::Plus(a, b) | Pattern::Times(a, b) => {
                    go(a, out);
                    go(b, out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    /// Replaces every metavariable by its binding.
    pub fn instantiate(&self, env: &BTreeMap<String, Comb>) -> Option<Comb> {
        Some(match self {
            Pattern::Prim(p) => Comb::Prim(*p),
            Pattern::Meta(m) => env.get(m)?.clone(),
            Pattern::AdjMeta(m) => adjoint(env.get(m)?),
            Pattern::Seq(a, b) => Comb::seq(a.instantiate(env)?, b.instantiate(env)?),
            Pattern::Plus(a, b) => Comb::plus(a.instantiate(env)?, b.instantiate(env)?),
            Pattern::Times(a, b) => Comb::times(a.instantiate(env)?, b.instantiate(env)?),
        })
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn operand(p: &Pattern, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match p {
                Pattern::Seq(..) | Pattern::Plus(..) | Pattern::Times(..) => write!(f, "({p})"),
                _ => write!(f, "{p}"),
            }
        }
        let (a, op, b) = match self {
            Pattern::Prim(p) => return write!(f, "{p}"),
            Pattern::Meta(m) => return write!(f, "${m}"),
            Pattern::AdjMeta(m) => return write!(f, "!${m}"),
            Pattern::Seq(a, b) => (a, ";", b),
            Pattern::Plus(a, b) => (a, "+", b),
            Pattern::Times(a, b) => (a, "*", b),
        };
        operand(a, f)?;
        write!(f, " {op} ")?;
        operand(b, f)
    }
}

/// A level-2 term: a justification that rewrites one combinator into an
/// equivalent one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rw {
    /// A catalog rule applied at the root. Metavariables that occur only on
    /// the rule's right-hand side must be given in `bindings`; any others
    /// given there must agree with what matching finds.
    Prim {
        rule: &'static Rule,
        bindings: BTreeMap<String, Comb>,
    },
    Id2,
    Trans2(Box<Rw>, Box<Rw>),
    RespSeq(Box<Rw>, Box<Rw>),
    RespPlus(Box<Rw>, Box<Rw>),
    RespTimes(Box<Rw>, Box<Rw>),
}

impl Rw {
    pub fn rule(name: &str) -> Result<Rw, RewriteError> {
        let rule = catalog::rule(name).ok_or_else(|| RewriteError::UnknownRule(name.to_string()))?;
        Ok(Rw::Prim {
            rule,
            bindings: BTreeMap::new(),
        })
    }

    pub fn rule_with(name: &str, bindings: &[(&str, Comb)]) -> Result<Rw, RewriteError> {
        let mut rw = Rw::rule(name)?;
        if let Rw::Prim { bindings: b, .. } = &mut rw {
            b.extend(bindings.iter().map(|(k, v)| (k.to_string(), v.clone())));
        }
        Ok(rw)
    }

    pub fn trans(a: Rw, b: Rw) -> Rw {
        Rw::Trans2(Box::new(a), Box::new(b))
    }

    pub fn resp_seq(a: Rw, b: Rw) -> Rw {
        Rw::RespSeq(Box::new(a), Box::new(b))
    }

    pub fn resp_plus(a: Rw, b: Rw) -> Rw {
        Rw::RespPlus(Box::new(a), Box::new(b))
    }

    pub fn resp_times(a: Rw, b: Rw) -> Rw {
        Rw::RespTimes(Box::new(a), Box::new(b))
    }

    /// Parses `NAME`, `NAME[$m := comb, ...]`, `id2`, and the infix forms
    /// `.` (transitivity), `;`, `(+)`, `(*)` (congruences), loosest first,
    /// all right-associative.
    pub fn parse(text: &str) -> Result<Rw, ParseError> {
        let mut p = Parser::new(text)?;
        let rw = rw_trans(&mut p)?;
        p.finish()?;
        Ok(rw)
    }
}

fn rw_binary(
    p: &mut Parser,
    tok: &crate::syntax::lex::Tok,
    next: fn(&mut Parser) -> Result<Rw, ParseError>,
    this: fn(&mut Parser) -> Result<Rw, ParseError>,
    build: fn(Rw, Rw) -> Rw,
) -> Result<Rw, ParseError> {
    let left = next(p)?;
    if p.eat(tok) {
        Ok(build(left, this(p)?))
    } else {
        Ok(left)
    }
}

fn rw_trans(p: &mut Parser) -> Result<Rw, ParseError> {
    rw_binary(p, &crate::syntax::lex::Tok::Dot, rw_seq, rw_trans, Rw::trans)
}

fn rw_seq(p: &mut Parser) -> Result<Rw, ParseError> {
    rw_binary(p, &crate::syntax::lex::Tok::Semi, rw_plus, rw_seq, Rw::resp_seq)
}

fn rw_plus(p: &mut Parser) -> Result<Rw, ParseError> {
    rw_binary(p, &crate::syntax::lex::Tok::OPlus, rw_times, rw_plus, Rw::resp_plus)
}

fn rw_times(p: &mut Parser) -> Result<Rw, ParseError> {
    rw_binary(p, &crate::syntax::lex::Tok::OTimes, rw_atom, rw_times, Rw::resp_times)
}

fn rw_atom(p: &mut Parser) -> Result<Rw, ParseError> {
    use crate::syntax::lex::Tok;
    match p.peek().cloned() {
        Some(Tok::LParen) => {
            p.bump();
            let inner = rw_trans(p)?;
            p.expect(&Tok::RParen)?;
            Ok(inner)
        }
        Some(Tok::Word(w)) if w == "id2" => {
            p.bump();
            Ok(Rw::Id2)
        }
        Some(Tok::Word(name)) => {
            let at = p.position();
            p.bump();
            let Some(rule) = catalog::rule(&name) else {
                return Err(ParseError {
                    position: at,
                    expected: format!("a rule name, found unknown `{name}`"),
                });
            };
            let mut bindings = BTreeMap::new();
            if p.eat(&Tok::LBracket) {
                loop {
                    let meta = match p.peek().cloned() {
                        Some(Tok::Meta(m)) => {
                            p.bump();
                            m
                        }
                        _ => return Err(p.error("a metavariable `$name`")),
                    };
                    p.expect(&Tok::Assign)?;
                    let c = p.comb::<Comb>()?;
                    bindings.insert(meta, c);
                    if !p.eat(&Tok::Comma) {
                        break;
                    }
                }
                p.expect(&Tok::RBracket)?;
            }
            Ok(Rw::Prim { rule, bindings })
        }
        _ => Err(p.error("a rewrite (`id2`, a rule name or `(`)")),
    }
}

impl fmt::Display for Rw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn operand(r: &Rw, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match r {
                Rw::Prim { .. } | Rw::Id2 => write!(f, "{r}"),
                _ => write!(f, "({r})"),
            }
        }
        let (a, op, b) = match self {
            Rw::Id2 => return f.write_str("id2"),
            Rw::Prim { rule, bindings } => {
                f.write_str(&rule.name)?;
                if !bindings.is_empty() {
                    f.write_str("[")?;
                    for (i, (m, c)) in bindings.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "${m} := {c}")?;
                    }
                    f.write_str("]")?;
                }
                return Ok(());
            }
            Rw::Trans2(a, b) => (a, ".", b),
            Rw::RespSeq(a, b) => (a, ";", b),
            Rw::RespPlus(a, b) => (a, "(+)", b),
            Rw::RespTimes(a, b) => (a, "(*)", b),
        };
        operand(a, f)?;
        write!(f, " {op} ")?;
        operand(b, f)
    }
}

/// Two occurrences of one metavariable matched different subterms.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("at {path}: {rule} needs both occurrences of ${meta} to agree (first at {first_path}): {first} vs {second}")]
pub struct Conflict {
    pub path: Path,
    pub first_path: String,
    pub rule: String,
    pub meta: String,
    pub first: String,
    pub second: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("at {path}: {rule} expects {expected}, found {found}")]
    Mismatch {
        path: Path,
        rule: String,
        expected: String,
        found: String,
    },
    #[error("{0}")]
    NonLinear(Box<Conflict>),
    #[error("{rule} needs an explicit binding for ${meta}")]
    Unbound { rule: String, meta: String },
    #[error("{rule} has no metavariable ${meta}")]
    UnknownBinding { rule: String, meta: String },
    #[error("at {path}: {rule} needs ${meta} : {role}, but {comb} is not")]
    Role {
        path: Path,
        rule: String,
        meta: String,
        role: String,
        comb: String,
    },
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("{rw} does not preserve the type: {reason}")]
    TypeChanged { rw: String, reason: String },
    #[error(transparent)]
    Type(#[from] TypeError),
}

impl RewriteError {
    /// Short machine-readable name of the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            RewriteError::Mismatch { .. } => "RewriteMismatch",
            RewriteError::NonLinear(_) => "NonLinearMismatch",
            RewriteError::Unbound { .. } => "UnboundMetavariable",
            RewriteError::UnknownBinding { .. } => "UnknownBinding",
            RewriteError::Role { .. } => "RoleMismatch",
            RewriteError::UnknownRule(_) => "UnknownRule",
            RewriteError::TypeChanged { .. } => "TypeNotPreserved",
            RewriteError::Type(_) => "TypeError",
        }
    }
}

struct Matcher<'a> {
    rule: &'a Rule,
    env: HashMap<String, (Comb, String)>,
}

impl Matcher<'_> {
    fn bind(&mut self, meta: &str, c: Comb, path: &Path) -> Result<(), RewriteError> {
        match self.env.get(meta) {
            Some((prev, first_path)) if prev != &c => Err(RewriteError::NonLinear(Box::new(Conflict {
                path: path.clone(),
                first_path: first_path.clone(),
                rule: self.rule.name.clone(),
                meta: meta.to_string(),
                first: prev.to_string(),
                second: c.to_string(),
            }))),
            Some(_) => Ok(()),
            None => {
                self.env.insert(meta.to_string(), (c, path.to_string()));
                Ok(())
            }
        }
    }

    fn go(&mut self, pat: &Pattern, c: &Comb, path: &Path) -> Result<(), RewriteError> {
        let mismatch = || RewriteError::Mismatch {
            path: path.clone(),
            rule: self.rule.name.clone(),
            expected: pat.to_string(),
            found: c.to_string(),
        };
        match (pat, c) {
            (Pattern::Prim(p), Comb::Prim(q)) if p == q => Ok(()),
            (Pattern::Meta(m), _) => self.bind(m, c.clone(), path),
            (Pattern::AdjMeta(m), _) => self.bind(m, adjoint(c), path),
            (Pattern::Seq(pa, pb), Comb::Seq(a, b)) => {
                self.go(pa, a, &path.child(PathStep::SeqLeft))?;
                self.go(pb, b, &path.child(PathStep::SeqRight))
            }
            (Pattern::Plus(pa, pb), Comb::Plus(a, b)) => {
                self.go(pa, a, &path.child(PathStep::PlusLeft))?;
                self.go(pb, b, &path.child(PathStep::PlusRight))
            }
            (Pattern::Times(pa, pb), Comb::Times(a, b)) => {
                self.go(pa, a, &path.child(PathStep::TimesLeft))?;
                self.go(pb, b, &path.child(PathStep::TimesRight))
            }
            _ => Err(mismatch()),
        }
    }
}

/// Matches `rule`'s left side against `c` and returns the full set of
/// metavariable bindings, explicit ones included.
fn bind_rule(
    rule: &Rule,
    bindings: &BTreeMap<String, Comb>,
    c: &Comb,
    path: &Path,
) -> Result<BTreeMap<String, Comb>, RewriteError> {
    let metas = rule.metas();
    let mut m = Matcher {
        rule,
        env: HashMap::new(),
    };
    for (meta, comb) in bindings {
        if !metas.contains(meta) {
            return Err(RewriteError::UnknownBinding {
                rule: rule.name.clone(),
                meta: meta.clone(),
            });
        }
        m.env.insert(meta.clone(), (comb.clone(), "binding".to_string()));
    }
    m.go(&rule.lhs, c, path)?;
    let mut env = BTreeMap::new();
    for meta in metas {
        let Some((comb, _)) = m.env.remove(&meta) else {
            return Err(RewriteError::Unbound {
                rule: rule.name.clone(),
                meta,
            });
        };
        if let Some(Role::Fixed { input, output }) = rule.role(&meta) {
            if check(&comb, input, output).is_err() {
                return Err(RewriteError::Role {
                    path: path.clone(),
                    rule: rule.name.clone(),
                    meta,
                    role: format!("{input} <-> {output}"),
                    comb: comb.to_string(),
                });
            }
        }
        env.insert(meta, comb);
    }
    Ok(env)
}

fn congruence_mismatch(path: &Path, r: &Rw, shape: &str, c: &Comb) -> RewriteError {
    RewriteError::Mismatch {
        path: path.clone(),
        rule: format!("`{r}`"),
        expected: shape.to_string(),
        found: c.to_string(),
    }
}

fn eval1_at_path(r: &Rw, c: &Comb, path: &Path) -> Result<Comb, RewriteError> {
    match r {
        Rw::Id2 => Ok(c.clone()),
        Rw::Prim { rule, bindings } => {
            let env = bind_rule(rule, bindings, c, path)?;
            Ok(rule.rhs.instantiate(&env).expect("every metavariable is bound"))
        }
        Rw::Trans2(a, b) => {
            let mid = eval1_at_path(a, c, path)?;
            eval1_at_path(b, &mid, path)
        }
        Rw::RespSeq(ra, rb) => match c {
            Comb::Seq(a, b) => Ok(Comb::seq(
                eval1_at_path(ra, a, &path.child(PathStep::SeqLeft))?,
                eval1_at_path(rb, b, &path.child(PathStep::SeqRight))?,
            )),
            _ => Err(congruence_mismatch(path, r, "a `;` node", c)),
        },
        Rw::RespPlus(ra, rb) => match c {
            Comb::Plus(a, b) => Ok(Comb::plus(
                eval1_at_path(ra, a, &path.child(PathStep::PlusLeft))?,
                eval1_at_path(rb, b, &path.child(PathStep::PlusRight))?,
            )),
            _ => Err(congruence_mismatch(path, r, "a `+` node", c)),
        },
        Rw::RespTimes(ra, rb) => match c {
            Comb::Times(a, b) => Ok(Comb::times(
                eval1_at_path(ra, a, &path.child(PathStep::TimesLeft))?,
                eval1_at_path(rb, b, &path.child(PathStep::TimesRight))?,
            )),
            _ => Err(congruence_mismatch(path, r, "a `*` node", c)),
        },
    }
}

/// Applies `r` to `c` syntactically.
pub fn eval1(r: &Rw, c: &Comb) -> Result<Comb, RewriteError> {
    eval1_at_path(r, c, &Path::root())
}

/// [`eval1`] for a combinator used at input type `domain`: also checks that
/// the result has the same type as `c`. Some laws only hold at particular
/// types (`absorbr <=> absorbl` at `0 * 0`, `id + id <=> id` at sums), and
/// this is where that is enforced.
pub fn eval1_typed(r: &Rw, c: &Comb, domain: &Ty) -> Result<Comb, RewriteError> {
    let mut u = Unifier::new();
    let dom = domain.into();
    let before = infer_term(c, &dom, &mut u, &Path::root())?;
    let out = eval1(r, c)?;
    let after = infer_term(&out, &dom, &mut u, &Path::root()).map_err(|e| RewriteError::TypeChanged {
        rw: r.to_string(),
        reason: format!("the result is ill-typed at {domain}: {e}"),
    })?;
    let shown = [u.zonk(&before), u.zonk(&after)];
    if !u.unify(&before, &after) {
        let names = render_terms(&[&shown[0], &shown[1]]);
        return Err(RewriteError::TypeChanged {
            rw: r.to_string(),
            reason: format!("output type {} became {}", names[0], names[1]),
        });
    }
    Ok(out)
}

/// The intermediate combinators of a chain of `.` steps, ending with the
/// final result.
pub fn eval1_trace(r: &Rw, c: &Comb) -> Result<Vec<Comb>, RewriteError> {
    fn flatten<'a>(r: &'a Rw, out: &mut Vec<&'a Rw>) {
        match r {
            Rw::Trans2(a, b) => {
                flatten(a, out);
                flatten(b, out);
            }
            other => out.push(other),
        }
    }
    let mut parts = Vec::new();
    flatten(r, &mut parts);
    let mut cur = c.clone();
    let mut out = Vec::new();
    for part in parts {
        cur = eval1(part, &cur)?;
        out.push(cur.clone());
    }
    Ok(out)
}

/// Whether `r` rewrites `c` to exactly `expected`.
pub fn exact(r: &Rw, c: &Comb, expected: &Comb) -> Result<bool, RewriteError> {
    Ok(crate::syntax::comb_equal(&eval1(r, c)?, expected))
}

/// Fills in every metavariable binding of every rule application, as
/// found by matching against `c`. The result can be flipped with
/// [`rw_flip`].
pub fn elaborate(r: &Rw, c: &Comb) -> Result<Rw, RewriteError> {
    fn go(r: &Rw, c: &Comb, path: &Path) -> Result<Rw, RewriteError> {
        Ok(match (r, c) {
            (Rw::Id2, _) => Rw::Id2,
            (Rw::Prim { rule, bindings }, _) => Rw::Prim {
                rule,
                bindings: bind_rule(rule, bindings, c, path)?,
            },
            (Rw::Trans2(a, b), _) => {
                let ea = go(a, c, path)?;
                let mid = eval1_at_path(&ea, c, path)?;
                Rw::trans(ea, go(b, &mid, path)?)
            }
            (Rw::RespSeq(ra, rb), Comb::Seq(a, b)) => Rw::resp_seq(
                go(ra, a, &path.child(PathStep::SeqLeft))?,
                go(rb, b, &path.child(PathStep::SeqRight))?,
            ),
            (Rw::RespPlus(ra, rb), Comb::Plus(a, b)) => Rw::resp_plus(
                go(ra, a, &path.child(PathStep::PlusLeft))?,
                go(rb, b, &path.child(PathStep::PlusRight))?,
            ),
            (Rw::RespTimes(ra, rb), Comb::Times(a, b)) => Rw::resp_times(
                go(ra, a, &path.child(PathStep::TimesLeft))?,
                go(rb, b, &path.child(PathStep::TimesRight))?,
            ),
            _ => return Err(eval1_at_path(r, c, path).expect_err("shape mismatch")),
        })
    }
    go(r, c, &Path::root())
}

/// The same rewrite read right to left. Rule applications keep their
/// bindings, so flip an [`elaborate`]d rewrite to undo one whose partner
/// mentions metavariables the original only matched.
pub fn rw_flip(r: &Rw) -> Rw {
    match r {
        Rw::Id2 => Rw::Id2,
        Rw::Prim { rule, bindings } => Rw::Prim {
            rule: rule.partner(),
            bindings: bindings.clone(),
        },
        Rw::Trans2(a, b) => Rw::trans(rw_flip(b), rw_flip(a)),
        Rw::RespSeq(a, b) => Rw::resp_seq(rw_flip(a), rw_flip(b)),
        Rw::RespPlus(a, b) => Rw::resp_plus(rw_flip(a), rw_flip(b)),
        Rw::RespTimes(a, b) => Rw::resp_times(rw_flip(a), rw_flip(b)),
    }
}

/// Names of the rules used anywhere in `r`.
pub fn rules_used(r: &Rw) -> BTreeSet<&'static str> {
    fn go(r: &Rw, out: &mut BTreeSet<&'static str>) {
        match r {
            Rw::Id2 => {}
            Rw::Prim { rule, .. } => {
                out.insert(rule.name.as_str());
            }
            Rw::Trans2(a, b) | Rw::RespSeq(a, b) | Rw::RespPlus(a, b) | Rw::RespTimes(a, b) => {
                go(a, out);
                go(b, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    go(r, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_comb;

    fn comb(s: &str) -> Comb {
        parse_comb(s).unwrap()
    }

    #[test]
    fn patterns_parse_with_metas_and_adjoints() {
        let p = Pattern::parse("$c0 ; !$c0").unwrap();
        assert_eq!(
            p,
            Pattern::Seq(
                Box::new(Pattern::Meta("c0".into())),
                Box::new(Pattern::AdjMeta("c0".into()))
            )
        );
        assert_eq!(p.to_string(), "$c0 ; !$c0");
        assert_eq!(
            Pattern::parse("!($a ; unite+l)").unwrap().to_string(),
            "uniti+l ; !$a"
        );
    }

    #[test]
    fn left_identity() {
        let r = Rw::rule("idl_seq_l").unwrap();
        assert_eq!(eval1(&r, &comb("id ; swap+")).unwrap(), comb("swap+"));
        let err = eval1(&r, &comb("swap+")).unwrap_err();
        assert_eq!(err.kind(), "RewriteMismatch");
        assert!(exact(&r, &comb("id ; swap+"), &comb("swap+")).unwrap());
        assert!(!exact(&r, &comb("id ; swap+"), &comb("id")).unwrap());
        assert!(exact(&Rw::Id2, &comb("swap+"), &comb("swap+")).unwrap());
    }

    #[test]
    fn swap_naturality() {
        let r = Rw::rule("swapl_plus_nat").unwrap();
        assert_eq!(
            eval1(&r, &comb("swap+ ; (dist + swap*)")).unwrap(),
            comb("(swap* + dist) ; swap+")
        );
    }

    #[test]
    fn flipped_identity_needs_no_binding() {
        let r = rw_flip(&Rw::rule("idl_seq_l").unwrap());
        assert_eq!(eval1(&r, &comb("swap+")).unwrap(), comb("id ; swap+"));
    }

    #[test]
    fn target_only_metavariables_need_bindings() {
        let r = Rw::rule("linv_seq_r").unwrap();
        assert_eq!(eval1(&r, &comb("id")).unwrap_err().kind(), "UnboundMetavariable");
        let r = Rw::rule_with("linv_seq_r", &[("c0", comb("dist"))]).unwrap();
        assert_eq!(eval1(&r, &comb("id")).unwrap(), comb("dist ; factor"));
        let r = Rw::rule_with("linv_seq_r", &[("zz", comb("dist"))]).unwrap();
        assert_eq!(eval1(&r, &comb("id")).unwrap_err().kind(), "UnknownBinding");
    }

    #[test]
    fn repeated_metavariables_must_agree() {
        let r = Rw::rule("distl_nat_r").unwrap();
        let good = comb("distl ; ((swap+ * id) + (swap+ * swap*))");
        assert_eq!(
            eval1(&r, &good).unwrap(),
            comb("(swap+ * (id + swap*)) ; distl")
        );
        let bad = comb("distl ; ((swap+ * id) + (id * swap*))");
        let err = eval1(&r, &bad).unwrap_err();
        assert_eq!(err.kind(), "NonLinearMismatch", "{err}");
        let r = Rw::rule("linv_seq_l").unwrap();
        assert_eq!(eval1(&r, &comb("dist ; factor")).unwrap(), comb("id"));
        assert!(eval1(&r, &comb("dist ; dist")).is_err());
    }

    #[test]
    fn fixed_roles_are_enforced() {
        let r = Rw::rule("unite_plus_l_nat_r").unwrap();
        let ok = comb("(id + swap+) ; unite+l");
        assert_eq!(eval1(&r, &ok).unwrap(), comb("unite+l ; swap+"));
        let wrong = comb("(swap+ + swap+) ; unite+l");
        assert_eq!(eval1(&r, &wrong).unwrap_err().kind(), "RoleMismatch");
    }

    #[test]
    fn congruences_navigate() {
        let r = Rw::resp_seq(Rw::Id2, Rw::rule("idl_seq_l").unwrap());
        assert_eq!(eval1(&r, &comb("swap+ ; (id ; swap+)")).unwrap(), comb("swap+ ; swap+"));
        let err = eval1(&r, &comb("swap+ + swap+")).unwrap_err();
        assert!(matches!(err, RewriteError::Mismatch { .. }));
        let r = Rw::resp_plus(Rw::rule("idr_seq_l").unwrap(), Rw::Id2);
        assert_eq!(eval1(&r, &comb("(dist ; id) + id")).unwrap(), comb("dist + id"));
        let err = eval1(&r, &comb("(dist ; swap+) + id")).unwrap_err();
        let RewriteError::Mismatch { path, .. } = err else { panic!() };
        assert_eq!(path.to_string(), "plus.0/seq.1");
    }

    #[test]
    fn transitivity_and_trace() {
        let r = Rw::trans(
            Rw::rule("idl_seq_l").unwrap(),
            Rw::rule("idl_seq_l").unwrap(),
        );
        let c = comb("id ; (id ; swap+)");
        assert_eq!(eval1(&r, &c).unwrap(), comb("swap+"));
        assert_eq!(
            eval1_trace(&r, &c).unwrap(),
            vec![comb("id ; swap+"), comb("swap+")]
        );
    }

    #[test]
    fn typed_rewrites_reject_type_changes() {
        let r = Rw::rule("absorbr_is_absorbl").unwrap();
        let zz = Ty::prod(Ty::Zero, Ty::Zero);
        assert_eq!(eval1_typed(&r, &comb("absorbr"), &zz).unwrap(), comb("absorbl"));
        let z1 = Ty::prod(Ty::Zero, Ty::One);
        let err = eval1_typed(&r, &comb("absorbr"), &z1).unwrap_err();
        assert_eq!(err.kind(), "TypeNotPreserved");
        let r = Rw::rule("id_plus_id_r").unwrap();
        assert!(eval1_typed(&r, &comb("id"), &Ty::One).is_err());
        assert_eq!(eval1_typed(&r, &comb("id"), &Ty::bool()).unwrap(), comb("id + id"));
    }

    #[test]
    fn flip_is_an_involution_and_inverts() {
        let c = comb("(swap+ ; (id ; dist)) + (id ; id)");
        let r = Rw::resp_plus(
            Rw::trans(Rw::rule("assoc_seq_l").unwrap(), Rw::rule("idr_seq_r").unwrap()),
            Rw::rule("idl_seq_l").unwrap(),
        );
        let r = elaborate(&r, &c).unwrap();
        assert_eq!(rw_flip(&rw_flip(&r)), r);
        let out = eval1(&r, &c).unwrap();
        assert_eq!(eval1(&rw_flip(&r), &out).unwrap(), c);
    }

    #[test]
    fn rw_text_round_trip() {
        let r = Rw::parse("id2 ; (linv_seq_l ; id2)").unwrap();
        assert_eq!(
            r,
            Rw::resp_seq(
                Rw::Id2,
                Rw::resp_seq(Rw::rule("linv_seq_l").unwrap(), Rw::Id2)
            )
        );
        let r = Rw::parse("linv_seq_r[$c0 := dist ; swap+] . id2 (+) idl_seq_l (*) id2").unwrap();
        assert_eq!(Rw::parse(&r.to_string()).unwrap(), r);
        assert!(matches!(Rw::parse("frobnicate"), Err(ParseError { .. })));
    }
}
