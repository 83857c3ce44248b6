use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::{eval1_typed, Rw};
use crate::syntax::typing::{infer_term, render_terms, Unifier};
use crate::syntax::{comb_equal, parse_comb, parse_type, Comb, Path, Ty};

/// `start <=> end at domain`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Claim {
    pub start: Comb,
    pub end: Comb,
    pub domain: Ty,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub justification: Rw,
    pub expected: Comb,
    /// 1-based line in the source text, 0 when built in code.
    pub line: usize,
}

/// An equational proof: each step rewrites the previous combinator (the
/// claim's start for the first step) into the step's expected one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofScript {
    pub claim: Claim,
    pub steps: Vec<Step>,
}

impl ProofScript {
    /// The whole proof as one rewrite.
    pub fn as_rw(&self) -> Rw {
        let mut steps = self.steps.iter().rev().map(|s| s.justification.clone());
        let Some(mut acc) = steps.next() else {
            return Rw::Id2;
        };
        for r in steps {
            acc = Rw::trans(r, acc);
        }
        acc
    }
}

impl fmt::Display for ProofScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.claim;
        writeln!(f, "claim: {} <=> {} at {}", c.start, c.end, c.domain)?;
        for s in &self.steps {
            writeln!(f, "step: {} by {}", s.expected, s.justification)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ProofParseError {
    pub line: usize,
    pub message: String,
}

fn split_keyword<'a>(text: &'a str, keyword: &str) -> Option<(&'a str, &'a str)> {
    let bytes = text.as_bytes();
    let mut from = 0;
    while let Some(i) = text[from..].find(keyword).map(|i| i + from) {
        let before = i == 0 || bytes[i - 1].is_ascii_whitespace();
        let after = bytes.get(i + keyword.len()).is_none_or(|b| b.is_ascii_whitespace());
        if before && after {
            return Some((&text[..i], &text[i + keyword.len()..]));
        }
        from = i + keyword.len();
    }
    None
}

/// Reads the `.piproof` format:
///
/// ```text
/// claim: <comb> <=> <comb> at <type>
/// step: <comb> by <rewrite>
/// ```
///
/// `#` starts a comment.
pub fn parse_proof(text: &str) -> Result<ProofScript, ProofParseError> {
    let mut claim = None;
    let mut steps = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |message: String| ProofParseError { line, message };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("claim:") {
            if claim.is_some() {
                return Err(err("a second `claim:` line".into()));
            }
            let (combs, ty) = split_keyword(rest, "at")
                .ok_or_else(|| err("expected `claim: <comb> <=> <comb> at <type>`".into()))?;
            let (start, end) = combs
                .split_once("<=>")
                .ok_or_else(|| err("expected `<=>` between the two combinators".into()))?;
            claim = Some(Claim {
                start: parse_comb(start).map_err(|e| err(format!("start: {e}")))?,
                end: parse_comb(end).map_err(|e| err(format!("end: {e}")))?,
                domain: parse_type(ty).map_err(|e| err(format!("type: {e}")))?,
            });
        } else if let Some(rest) = content.strip_prefix("step:") {
            if claim.is_none() {
                return Err(err("`step:` before the `claim:` line".into()));
            }
            let (c, r) = split_keyword(rest, "by")
                .ok_or_else(|| err("expected `step: <comb> by <rewrite>`".into()))?;
            steps.push(Step {
                expected: parse_comb(c).map_err(|e| err(format!("combinator: {e}")))?,
                justification: Rw::parse(r).map_err(|e| err(format!("rewrite: {e}")))?,
                line,
            });
        } else {
            return Err(err("expected a `claim:` or `step:` line".into()));
        }
    }
    let claim = claim.ok_or(ProofParseError {
        line: 0,
        message: "missing `claim:` line".into(),
    })?;
    Ok(ProofScript { claim, steps })
}

/// Why a proof was rejected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProofFailure {
    /// 1-based step number; 0 for the claim itself.
    pub step: usize,
    pub line: usize,
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProofReport {
    pub accepted: bool,
    /// Rows of the equational chain, the starting combinator included.
    pub steps: usize,
    pub failure: Option<ProofFailure>,
}

impl fmt::Display for ProofReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "accepted ({} steps)", self.steps),
            Some(fail) if fail.line > 0 => write!(
                f,
                "rejected at step {} (line {}): {}: {}",
                fail.step, fail.line, fail.kind, fail.message
            ),
            Some(fail) => write!(f, "rejected at step {}: {}: {}", fail.step, fail.kind, fail.message),
        }
    }
}

fn claim_failure(kind: &str, message: String) -> ProofFailure {
    ProofFailure {
        step: 0,
        line: 0,
        kind: kind.into(),
        message,
    }
}

fn check_claim(c: &Claim) -> Result<(), ProofFailure> {
    let mut u = Unifier::new();
    let dom = (&c.domain).into();
    let a = infer_term(&c.start, &dom, &mut u, &Path::root())
        .map_err(|e| claim_failure("TypeError", format!("start: {e}")))?;
    let b = infer_term(&c.end, &dom, &mut u, &Path::root())
        .map_err(|e| claim_failure("TypeError", format!("end: {e}")))?;
    let shown = [u.zonk(&a), u.zonk(&b)];
    if !u.unify(&a, &b) {
        let names = render_terms(&[&shown[0], &shown[1]]);
        return Err(claim_failure(
            "TypeError",
            format!("start has output type {} but end has {}", names[0], names[1]),
        ));
    }
    Ok(())
}

/// Replays every step with [`eval1_typed`] and checks it lands exactly on
/// the step's expected combinator, then that the last one is the claim's
/// end.
pub fn check_proof(s: &ProofScript) -> ProofReport {
    let rows = s.steps.len() + 1;
    let reject = |failure| ProofReport {
        accepted: false,
        steps: rows,
        failure: Some(failure),
    };
    if let Err(f) = check_claim(&s.claim) {
        return reject(f);
    }
    let mut cur = s.claim.start.clone();
    for (i, step) in s.steps.iter().enumerate() {
        let fail = |kind: &str, message: String| ProofFailure {
            step: i + 1,
            line: step.line,
            kind: kind.into(),
            message,
        };
        match eval1_typed(&step.justification, &cur, &s.claim.domain) {
            Err(e) => return reject(fail(e.kind(), e.to_string())),
            Ok(got) if !comb_equal(&got, &step.expected) => {
                return reject(fail(
                    "NotExact",
                    format!("{} gives {got}, not {}", step.justification, step.expected),
                ))
            }
            Ok(_) => cur = step.expected.clone(),
        }
    }
    if !comb_equal(&cur, &s.claim.end) {
        let last = s.steps.last();
        return reject(ProofFailure {
            step: s.steps.len(),
            line: last.map_or(0, |l| l.line),
            kind: "Incomplete".into(),
            message: format!("the chain ends at {cur}, not at {}", s.claim.end),
        });
    }
    ProofReport {
        accepted: true,
        steps: rows,
        failure: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::eval1;

    #[test]
    fn reflexive_proof() {
        let s = parse_proof("claim: swap+ <=> swap+ at 1 + 1\nstep: swap+ by id2\n").unwrap();
        let r = check_proof(&s);
        assert!(r.accepted);
        assert_eq!(r.to_string(), "accepted (2 steps)");
    }

    #[test]
    fn wrong_target_is_rejected_at_its_step() {
        let s = parse_proof(
            "claim: id ; swap+ <=> swap+ at 1 + 1\n# comment\nstep: id by idl_seq_l\n",
        )
        .unwrap();
        let r = check_proof(&s);
        let f = r.failure.unwrap();
        assert_eq!((f.step, f.line, f.kind.as_str()), (1, 3, "NotExact"));
    }

    #[test]
    fn unfinished_chain() {
        let s = parse_proof("claim: id ; swap+ <=> swap+ at 1 + 1\n").unwrap();
        assert_eq!(check_proof(&s).failure.unwrap().kind, "Incomplete");
    }

    #[test]
    fn ill_typed_claim() {
        let s = parse_proof("claim: swap+ <=> swap* at 1 + 1\n").unwrap();
        let f = check_proof(&s).failure.unwrap();
        assert_eq!((f.step, f.kind.as_str()), (0, "TypeError"));
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = parse_proof("claim: id <=> id at 1\nstep: id by nonsense_rule\n").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(parse_proof("step: id by id2").is_err());
        assert!(parse_proof("").is_err());
    }

    #[test]
    fn bundled_swap_script() {
        let s = parse_proof(include_str!("../../examples/pi/swapfl.piproof")).unwrap();
        assert_eq!(s.steps.len(), 9);
        let r = check_proof(&s);
        assert_eq!(r.to_string(), "accepted (10 steps)");
        assert_eq!(eval1(&s.as_rw(), &s.claim.start).unwrap(), s.claim.end);
    }

    #[test]
    fn keywords_need_whitespace() {
        assert_eq!(split_keyword("abyss by x", "by"), Some(("abyss ", " x")));
        assert_eq!(split_keyword("x at", "at"), Some(("x ", "")));
        assert_eq!(split_keyword("flat", "at"), None);
    }
}
