//! Evaluation, value enumeration and brute-force equivalence.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::normalize::size;
use crate::syntax::typing::{infer_term, render_terms, TyTerm, Unifier};
use crate::syntax::{adjoint, Comb, Path, Prim, Ty, TypeError, Val};

/// Default limit on the domain size that [`obs_equiv`] will exhaust.
pub const DEFAULT_BRUTE_FORCE_CAP: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("value {value} does not fit the combinator: {reason}")]
    IllTypedValue { value: Val, reason: String },
    /// Reached a clause that needs an inhabitant of `0`; only a typing bug
    /// can get here.
    #[error("`{combinator}` would need a value of type 0")]
    ImpossibleValue { combinator: Prim },
    #[error("index {index} out of range for a type of size {size}")]
    IndexOutOfRange { index: u64, size: u64 },
    #[error("domain of size {size} exceeds the brute-force limit {cap}")]
    RefusedTooLarge { size: u64, cap: u64 },
    #[error(transparent)]
    Type(#[from] TypeError),
}

fn value_term(v: &Val, u: &mut Unifier) -> TyTerm {
    match v {
        Val::Unit => TyTerm::One,
        Val::InL(x) => {
            let l = value_term(x, u);
            TyTerm::sum(l, u.fresh())
        }
        Val::InR(x) => {
            let r = value_term(x, u);
            TyTerm::sum(u.fresh(), r)
        }
        Val::Pair(a, b) => {
            let l = value_term(a, u);
            let r = value_term(b, u);
            TyTerm::prod(l, r)
        }
    }
}

/// Checks that some type of `v` is a domain of `c`.
fn check_value(c: &Comb, v: &Val) -> Result<(), EvalError> {
    let mut u = Unifier::new();
    let dom = value_term(v, &mut u);
    infer_term(c, &dom, &mut u, &Path::root())
        .map(|_| ())
        .map_err(|e| EvalError::IllTypedValue {
            value: v.clone(),
            reason: e.to_string(),
        })
}

fn stuck(v: &Val, expected: &str) -> EvalError {
    EvalError::IllTypedValue {
        value: v.clone(),
        reason: format!("expected a value of shape {expected}"),
    }
}

fn prim_step(p: Prim, v: Val) -> Result<Val, EvalError> {
    use Val::*;
    Ok(match (p, v) {
        (Prim::Id, v) => v,

        (Prim::UniteSumL, InR(v)) => *v,
        (Prim::UniteSumL, v) => return Err(stuck(&v, "inr v")),
        (Prim::UnitiSumL, v) => Val::inr(v),
        (Prim::UniteSumR, InL(v)) => *v,
        (Prim::UniteSumR, v) => return Err(stuck(&v, "inl v")),
        (Prim::UnitiSumR, v) => Val::inl(v),
        (Prim::SwapSum, InL(v)) => InR(v),
        (Prim::SwapSum, InR(v)) => InL(v),
        (Prim::AssoclSum, InL(v)) => Val::inl(InL(v)),
        (Prim::AssoclSum, InR(v)) => match *v {
            InL(v2) => Val::inl(InR(v2)),
            InR(v3) => InR(v3),
            v => return Err(stuck(&Val::inr(v), "inr (inl v) or inr (inr v)")),
        },
        (Prim::AssocrSum, InL(v)) => match *v {
            InL(v1) => InL(v1),
            InR(v2) => Val::inr(InL(v2)),
            v => return Err(stuck(&Val::inl(v), "inl (inl v) or inl (inr v)")),
        },
        (Prim::AssocrSum, InR(v3)) => Val::inr(InR(v3)),

        (Prim::UniteProdL, Pair(u, v)) if *u == Unit => *v,
        (Prim::UnitiProdL, v) => Val::pair(Unit, v),
        (Prim::UniteProdR, Pair(v, u)) if *u == Unit => *v,
        (Prim::UnitiProdR, v) => Val::pair(v, Unit),
        (Prim::SwapProd, Pair(a, b)) => Pair(b, a),
        (Prim::AssoclProd, Pair(a, bc)) => match *bc {
            Pair(b, c) => Val::pair(Pair(a, b), *c),
            bc => return Err(stuck(&Pair(a, Box::new(bc)), "(v1,(v2,v3))")),
        },
        (Prim::AssocrProd, Pair(ab, c)) => match *ab {
            Pair(a, b) => Val::pair(*a, Pair(b, c)),
            ab => return Err(stuck(&Pair(Box::new(ab), c), "((v1,v2),v3)")),
        },
        // The first component inhabits 0; it is passed through unchanged.
        (Prim::AbsorbR, Pair(a, _)) => *a,
        (Prim::AbsorbL, Pair(_, b)) => *b,
        (p @ (Prim::FactorZL | Prim::FactorZR), _) => {
            return Err(EvalError::ImpossibleValue { combinator: p })
        }

        (Prim::Dist, Pair(ab, c)) => match *ab {
            InL(a) => Val::inl(Pair(a, c)),
            InR(b) => Val::inr(Pair(b, c)),
            ab => return Err(stuck(&Pair(Box::new(ab), c), "(inl v1,v3) or (inr v2,v3)")),
        },
        (Prim::DistL, Pair(a, bc)) => match *bc {
            InL(b) => Val::inl(Pair(a, b)),
            InR(c) => Val::inr(Pair(a, c)),
            bc => return Err(stuck(&Pair(a, Box::new(bc)), "(v1,inl v2) or (v1,inr v3)")),
        },
        (Prim::Factor, InL(ac)) => match *ac {
            Pair(a, c) => Pair(Box::new(InL(a)), c),
            ac => return Err(stuck(&Val::inl(ac), "inl (v1,v3)")),
        },
        (Prim::Factor, InR(bc)) => match *bc {
            Pair(b, c) => Pair(Box::new(InR(b)), c),
            bc => return Err(stuck(&Val::inr(bc), "inr (v2,v3)")),
        },
        (Prim::FactorL, InL(ab)) => match *ab {
            Pair(a, b) => Pair(a, Box::new(InL(b))),
            ab => return Err(stuck(&Val::inl(ab), "inl (v1,v2)")),
        },
        (Prim::FactorL, InR(ac)) => match *ac {
            Pair(a, c) => Pair(a, Box::new(InR(c))),
            ac => return Err(stuck(&Val::inr(ac), "inr (v1,v3)")),
        },

        (p, v) => return Err(stuck(&v, &format!("an input of `{p}`"))),
    })
}

/// Evaluation without the up-front type check.
pub(crate) fn eval_unchecked(c: &Comb, v: Val) -> Result<Val, EvalError> {
    match c {
        Comb::Prim(p) => prim_step(*p, v),
        Comb::Seq(a, b) => eval_unchecked(b, eval_unchecked(a, v)?),
        Comb::Plus(a, b) => match v {
            Val::InL(x) => Ok(Val::inl(eval_unchecked(a, *x)?)),
            Val::InR(x) => Ok(Val::inr(eval_unchecked(b, *x)?)),
            v => Err(stuck(&v, "inl v or inr v")),
        },
        Comb::Times(a, b) => match v {
            Val::Pair(x, y) => Ok(Val::pair(eval_unchecked(a, *x)?, eval_unchecked(b, *y)?)),
            v => Err(stuck(&v, "(v1,v2)")),
        },
    }
}

/// Runs `c` forwards on `v`. The value is checked against the combinator's
/// domain before anything runs.
pub fn eval(c: &Comb, v: &Val) -> Result<Val, EvalError> {
    check_value(c, v)?;
    eval_unchecked(c, v.clone())
}

/// Runs `c` backwards, i.e. its adjoint forwards.
pub fn eval_rev(c: &Comb, v: &Val) -> Result<Val, EvalError> {
    eval(&adjoint(c), v)
}

/// Type-checks `c` at `input` and `v : input`, then evaluates.
pub fn run(c: &Comb, input: &Ty, v: &Val) -> Result<Val, EvalError> {
    if !v.has_type(input) {
        return Err(EvalError::IllTypedValue {
            value: v.clone(),
            reason: format!("it does not have type {input}"),
        });
    }
    let mut u = Unifier::new();
    infer_term(c, &input.into(), &mut u, &Path::root())?;
    eval_unchecked(c, v.clone())
}

/// All values of `b`: sums list the left summand first, products are
/// row-major with the left component as the row.
pub fn enumerate(b: &Ty) -> Vec<Val> {
    match b {
        Ty::Zero => Vec::new(),
        Ty::One => vec![Val::Unit],
        Ty::Sum(l, r) => enumerate(l)
            .into_iter()
            .map(Val::inl)
            .chain(enumerate(r).into_iter().map(Val::inr))
            .collect(),
        Ty::Prod(l, r) => {
            let rs = enumerate(r);
            enumerate(l)
                .into_iter()
                .flat_map(|a| rs.iter().map(move |b| Val::pair(a.clone(), b.clone())))
                .collect()
        }
    }
}

/// Position of `v` in [`enumerate`]`(b)`.
pub fn rank(b: &Ty, v: &Val) -> Result<u64, EvalError> {
    fn go(b: &Ty, v: &Val) -> Option<u64> {
        match (b, v) {
            (Ty::One, Val::Unit) => Some(0),
            (Ty::Sum(l, _), Val::InL(x)) => go(l, x),
            (Ty::Sum(l, r), Val::InR(x)) => Some(size(l) + go(r, x)?),
            (Ty::Prod(l, r), Val::Pair(x, y)) => Some(go(l, x)? * size(r) + go(r, y)?),
            _ => None,
        }
    }
    go(b, v).ok_or_else(|| EvalError::IllTypedValue {
        value: v.clone(),
        reason: format!("it does not have type {b}"),
    })
}

/// The value at position `i` of [`enumerate`]`(b)`.
pub fn unrank(b: &Ty, i: u64) -> Result<Val, EvalError> {
    let n = size(b);
    if i >= n {
        return Err(EvalError::IndexOutOfRange { index: i, size: n });
    }
    fn go(b: &Ty, i: u64) -> Val {
        match b {
            Ty::One => Val::Unit,
            Ty::Sum(l, r) => {
                let m = size(l);
                if i < m {
                    Val::inl(go(l, i))
                } else {
                    Val::inr(go(r, i - m))
                }
            }
            Ty::Prod(l, r) => {
                let n = size(r);
                Val::pair(go(l, i / n), go(r, i % n))
            }
            Ty::Zero => unreachable!("no index is in range for 0"),
        }
    }
    Ok(go(b, i))
}

/// Outcome of an exhaustive comparison of two combinators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivReport {
    pub equivalent: bool,
    pub agreeing: u64,
    pub total: u64,
    /// First input (in enumeration order) where the two disagree, with both
    /// outputs.
    pub counterexample: Option<(Val, Val, Val)>,
}

impl fmt::Display for EquivReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.equivalent {
            write!(f, "equivalent ({}/{} values agree)", self.agreeing, self.total)
        } else {
            write!(f, "not equivalent ({}/{} values agree)", self.agreeing, self.total)?;
            if let Some((v, a, b)) = &self.counterexample {
                write!(f, "; first difference at {v}: {a} vs {b}")?;
            }
            Ok(())
        }
    }
}

/// Compares `c1` and `c2` on every value of `domain`, refusing domains
/// larger than `cap`.
pub fn compare(c1: &Comb, c2: &Comb, domain: &Ty, cap: u64) -> Result<EquivReport, EvalError> {
    let mut u = Unifier::new();
    let dom: TyTerm = domain.into();
    let o1 = infer_term(c1, &dom, &mut u, &Path::root())?;
    let o2 = infer_term(c2, &dom, &mut u, &Path::root())?;
    let (s1, s2) = (u.zonk(&o1), u.zonk(&o2));
    if !u.unify(&o1, &o2) {
        let shown = render_terms(&[&s1, &s2]);
        return Err(TypeError::Codomain {
            expected: shown[0].clone(),
            found: shown[1].clone(),
        }
        .into());
    }
    let total = size(domain);
    if total > cap {
        return Err(EvalError::RefusedTooLarge { size: total, cap });
    }
    let mut report = EquivReport {
        equivalent: true,
        agreeing: 0,
        total,
        counterexample: None,
    };
    for v in enumerate(domain) {
        let a = eval_unchecked(c1, v.clone())?;
        let b = eval_unchecked(c2, v.clone())?;
        if a == b {
            report.agreeing += 1;
        } else if report.counterexample.is_none() {
            report.equivalent = false;
            report.counterexample = Some((v, a, b));
        }
    }
    Ok(report)
}

/// Observational equivalence on `domain` with the default size limit.
pub fn obs_equiv(c1: &Comb, c2: &Comb, domain: &Ty) -> Result<bool, EvalError> {
    Ok(compare(c1, c2, domain, DEFAULT_BRUTE_FORCE_CAP)?.equivalent)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub comb: Comb,
    pub value: Val,
}

/// One line per component of the top-level `;` chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalTrace {
    pub initial: Val,
    pub steps: Vec<TraceStep>,
}

#[derive(Serialize)]
pub struct TraceRecord {
    pub step: usize,
    pub combinator: String,
    pub value: String,
}

impl EvalTrace {
    pub fn result(&self) -> &Val {
        self.steps.last().map_or(&self.initial, |s| &s.value)
    }

    pub fn records(&self) -> Vec<TraceRecord> {
        self.steps
            .iter()
            .enumerate()
            .map(|(i, s)| TraceRecord {
                step: i + 1,
                combinator: s.comb.to_string(),
                value: s.value.to_string(),
            })
            .collect()
    }
}

impl fmt::Display for EvalTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(f, "{} |-> {}", s.comb, s.value)?;
        }
        Ok(())
    }
}

pub fn trace(c: &Comb, v: &Val) -> Result<EvalTrace, EvalError> {
    check_value(c, v)?;
    let mut steps = Vec::new();
    let mut cur = v.clone();
    for part in c.seq_components() {
        cur = eval_unchecked(part, cur)?;
        steps.push(TraceStep {
            comb: part.clone(),
            value: cur.clone(),
        });
    }
    Ok(EvalTrace {
        initial: v.clone(),
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_comb, parse_type, parse_value};

    fn comb(s: &str) -> Comb {
        parse_comb(s).unwrap()
    }

    fn val(s: &str) -> Val {
        parse_value(s).unwrap()
    }

    fn ty(s: &str) -> Ty {
        parse_type(s).unwrap()
    }

    #[test]
    fn reduction_rules() {
        assert_eq!(eval(&comb("swap+"), &val("inl ()")).unwrap(), val("inr ()"));
        assert_eq!(
            eval(&comb("dist"), &val("(inr (), ())")).unwrap(),
            val("inr ((),())")
        );
        assert_eq!(eval(&comb("unite*l"), &val("((), inl ())")).unwrap(), val("inl ()"));
        assert_eq!(
            eval(&comb("assocl+"), &val("inr inl ()")).unwrap(),
            val("inl inr ()")
        );
        assert_eq!(
            eval(&comb("factorl"), &val("inr ((), inl ())")).unwrap(),
            val("((), inr inl ())")
        );
        let v = val("(inl (), inr inl ())");
        assert_eq!(eval(&comb("id"), &v).unwrap(), v);
    }

    #[test]
    fn reverse_reverses() {
        let reverse = comb("swap* ; (swap* * id) ; assocr*");
        let v = val("(inl (), (inr inl (), inr inr ()))");
        assert_eq!(
            eval(&reverse, &v).unwrap(),
            val("(inr inr (), (inr inl (), inl ()))")
        );
    }

    #[test]
    fn backwards() {
        assert_eq!(eval_rev(&comb("swap+"), &val("inr ()")).unwrap(), val("inl ()"));
        assert_eq!(eval_rev(&comb("uniti+l"), &val("inr ((),())")).unwrap(), val("((),())"));
    }

    #[test]
    fn ill_typed_values_are_rejected_before_running() {
        let err = eval(&comb("swap+ ; unite*l"), &val("inl ()")).unwrap_err();
        assert!(matches!(err, EvalError::IllTypedValue { .. }), "{err}");
        let err = run(&comb("swap+"), &ty("1 + 1"), &val("((),())")).unwrap_err();
        assert!(matches!(err, EvalError::IllTypedValue { .. }));
    }

    #[test]
    fn factorzl_cannot_be_reached_with_a_value() {
        let err = prim_step(Prim::FactorZL, Val::Unit).unwrap_err();
        assert_eq!(err, EvalError::ImpossibleValue { combinator: Prim::FactorZL });
        // absorbr transports its first component
        assert_eq!(
            prim_step(Prim::AbsorbR, val("(inl (), ())")).unwrap(),
            val("inl ()")
        );
    }

    #[test]
    fn enumeration_order() {
        assert_eq!(enumerate(&ty("1 + 1")), vec![val("inl ()"), val("inr ()")]);
        assert!(enumerate(&Ty::Zero).is_empty());
        assert_eq!(
            enumerate(&ty("(1 + 1) * (1 + 1)")),
            vec![
                val("(inl (), inl ())"),
                val("(inl (), inr ())"),
                val("(inr (), inl ())"),
                val("(inr (), inr ())"),
            ]
        );
    }

    #[test]
    fn rank_and_unrank() {
        assert_eq!(rank(&ty("1 + 1"), &val("inr ()")).unwrap(), 1);
        assert_eq!(
            unrank(&ty("(1 + 1) * (1 + 1)"), 2).unwrap(),
            val("(inr (), inl ())")
        );
        assert!(matches!(
            unrank(&ty("1 + 1"), 2),
            Err(EvalError::IndexOutOfRange { index: 2, size: 2 })
        ));
        assert!(rank(&ty("1 + 1"), &val("()")).is_err());
    }

    #[test]
    fn equivalence() {
        let b = ty("1 + 1");
        assert!(!obs_equiv(&comb("id"), &comb("swap+"), &b).unwrap());
        assert!(obs_equiv(&comb("swap+ ; swap+"), &comb("id"), &b).unwrap());
        let r = compare(&comb("id"), &comb("swap+"), &b, 10).unwrap();
        assert_eq!(r.to_string(), "not equivalent (0/2 values agree); first difference at inl (): inl () vs inr ()");
    }

    #[test]
    fn equivalence_needs_matching_codomains() {
        let err = compare(&comb("id"), &comb("uniti+l"), &ty("1"), 10).unwrap_err();
        assert!(matches!(err, EvalError::Type(TypeError::Codomain { .. })));
    }

    #[test]
    fn equivalence_refuses_large_domains() {
        let big = crate::syntax::Ty::word(13);
        let err = compare(&comb("id"), &comb("id"), &big, DEFAULT_BRUTE_FORCE_CAP).unwrap_err();
        assert_eq!(err, EvalError::RefusedTooLarge { size: 8192, cap: 4096 });
    }

    #[test]
    fn single_step_trace() {
        let t = trace(&comb("swap+"), &val("inl ()")).unwrap();
        assert_eq!(t.steps.len(), 1);
        assert_eq!(t.to_string(), "swap+ |-> inr ()\n");
    }
}
