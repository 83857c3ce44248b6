use thiserror::Error;

use super::lex::{lex, Spanned, Tok};
use super::{adjoint, Comb, Prim, Ty, Val};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("parse error at offset {position}: expected {expected}")]
pub struct ParseError {
    /// Byte offset into the input; equal to the input length at end of input.
    pub position: usize,
    pub expected: String,
}

/// Leaf and node constructors used by the combinator grammar, so the same
/// parser serves plain terms and rule schemas with metavariables.
pub(crate) trait CombBuilder: Sized {
    fn constant(p: Prim) -> Self;
    /// `None` when metavariables are not allowed in this grammar.
    fn meta(name: &str) -> Option<Self>;
    fn seq(a: Self, b: Self) -> Self;
    fn plus(a: Self, b: Self) -> Self;
    fn times(a: Self, b: Self) -> Self;
    fn adjoint(self) -> Self;
}

impl CombBuilder for Comb {
    fn constant(p: Prim) -> Self {
        Comb::Prim(p)
    }
    fn meta(_: &str) -> Option<Self> {
        None
    }
    fn seq(a: Self, b: Self) -> Self {
        Comb::seq(a, b)
    }
    fn plus(a: Self, b: Self) -> Self {
        Comb::plus(a, b)
    }
    fn times(a: Self, b: Self) -> Self {
        Comb::times(a, b)
    }
    fn adjoint(self) -> Self {
        adjoint(&self)
    }
}

pub(crate) struct Parser {
    toks: Vec<Spanned>,
    idx: usize,
    end: usize,
}

impl Parser {
    pub(crate) fn new(src: &str) -> Result<Parser, ParseError> {
        let toks = lex(src).map_err(|position| ParseError {
            position,
            expected: "a valid token".into(),
        })?;
        Ok(Parser {
            toks,
            idx: 0,
            end: src.len(),
        })
    }

    pub(crate) fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|s| &s.tok)
    }

    pub(crate) fn position(&self) -> usize {
        self.toks.get(self.idx).map_or(self.end, |s| s.pos)
    }

    pub(crate) fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.idx).map(|s| s.tok.clone());
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn error(&self, expected: impl Into<String>) -> ParseError {
        let mut expected = expected.into();
        match self.peek() {
            Some(t) => expected = format!("{expected}, found {}", t.describe()),
            None => expected = format!("{expected}, found end of input"),
        }
        ParseError {
            position: self.position(),
            expected,
        }
    }

    pub(crate) fn expect(&mut self, tok: &Tok) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(tok.describe()))
        }
    }

    pub(crate) fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.error("end of input")),
        }
    }

    // type := sum ; sum := prod ('+' sum)? ; prod := atom ('*' prod)?
    pub(crate) fn ty(&mut self) -> Result<Ty, ParseError> {
        let left = self.ty_prod()?;
        if self.eat(&Tok::Plus) {
            Ok(Ty::sum(left, self.ty()?))
        } else {
            Ok(left)
        }
    }

    fn ty_prod(&mut self) -> Result<Ty, ParseError> {
        let left = self.ty_atom()?;
        if self.eat(&Tok::Star) {
            Ok(Ty::prod(left, self.ty_prod()?))
        } else {
            Ok(left)
        }
    }

    fn ty_atom(&mut self) -> Result<Ty, ParseError> {
        match self.peek() {
            Some(Tok::Num(0)) => {
                self.bump();
                Ok(Ty::Zero)
            }
            Some(Tok::Num(1)) => {
                self.bump();
                Ok(Ty::One)
            }
            Some(Tok::LParen) => {
                self.bump();
                let t = self.ty()?;
                self.expect(&Tok::RParen)?;
                Ok(t)
            }
            _ => Err(self.error("a type (`0`, `1` or `(`)")),
        }
    }

    // Precedence `!` > `*` > `+` > `;`, binaries right-associative.
    pub(crate) fn comb<B: CombBuilder>(&mut self) -> Result<B, ParseError> {
        let left = self.comb_plus()?;
        if self.eat(&Tok::Semi) {
            Ok(B::seq(left, self.comb()?))
        } else {
            Ok(left)
        }
    }

    fn comb_plus<B: CombBuilder>(&mut self) -> Result<B, ParseError> {
        let left = self.comb_times()?;
        if self.eat(&Tok::Plus) {
            Ok(B::plus(left, self.comb_plus()?))
        } else {
            Ok(left)
        }
    }

    fn comb_times<B: CombBuilder>(&mut self) -> Result<B, ParseError> {
        let left = self.comb_unary()?;
        if self.eat(&Tok::Star) {
            Ok(B::times(left, self.comb_times()?))
        } else {
            Ok(left)
        }
    }

    fn comb_unary<B: CombBuilder>(&mut self) -> Result<B, ParseError> {
        if self.eat(&Tok::Bang) {
            return Ok(self.comb_unary::<B>()?.adjoint());
        }
        match self.peek().cloned() {
            Some(Tok::Const(p)) => {
                self.bump();
                Ok(B::constant(p))
            }
            Some(Tok::Meta(name)) => match B::meta(&name) {
                Some(m) => {
                    self.bump();
                    Ok(m)
                }
                None => Err(self.error("a combinator constant")),
            },
            Some(Tok::LParen) => {
                self.bump();
                let c = self.comb()?;
                self.expect(&Tok::RParen)?;
                Ok(c)
            }
            _ => Err(self.error("a combinator")),
        }
    }

    pub(crate) fn value(&mut self) -> Result<Val, ParseError> {
        match self.peek() {
            Some(Tok::Word(w)) if w == "inl" => {
                self.bump();
                Ok(Val::inl(self.value()?))
            }
            Some(Tok::Word(w)) if w == "inr" => {
                self.bump();
                Ok(Val::inr(self.value()?))
            }
            Some(Tok::LParen) => {
                self.bump();
                if self.eat(&Tok::RParen) {
                    return Ok(Val::Unit);
                }
                let a = self.value()?;
                self.expect(&Tok::Comma)?;
                let b = self.value()?;
                self.expect(&Tok::RParen)?;
                Ok(Val::pair(a, b))
            }
            _ => Err(self.error("a value (`()`, `inl`, `inr` or a pair)")),
        }
    }
}

pub fn parse_type(text: &str) -> Result<Ty, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.ty()?;
    p.finish()?;
    Ok(t)
}

/// Parses a combinator; `! c` is expanded to the adjoint of `c`.
pub fn parse_comb(text: &str) -> Result<Comb, ParseError> {
    let mut p = Parser::new(text)?;
    let c = p.comb::<Comb>()?;
    p.finish()?;
    Ok(c)
}

pub fn parse_value(text: &str) -> Result<Val, ParseError> {
    let mut p = Parser::new(text)?;
    let v = p.value()?;
    p.finish()?;
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type_examples() {
        assert_eq!(parse_type("1 + 1").unwrap(), Ty::sum(Ty::One, Ty::One));
        assert_eq!(
            parse_type("(1 + 0) * (1 + 1)").unwrap(),
            Ty::prod(Ty::sum(Ty::One, Ty::Zero), Ty::sum(Ty::One, Ty::One))
        );
        let err = parse_type("1 +").unwrap_err();
        assert_eq!(err.position, 3);
    }

    #[test]
    fn type_precedence_and_associativity() {
        assert_eq!(
            parse_type("1 + 1 * 0 + 1").unwrap(),
            Ty::sum(Ty::One, Ty::sum(Ty::prod(Ty::One, Ty::Zero), Ty::One))
        );
        assert_eq!(
            parse_type("1*1*1").unwrap(),
            Ty::prod(Ty::One, Ty::prod(Ty::One, Ty::One))
        );
        assert!(parse_type("2").is_err());
    }

    #[test]
    fn comb_examples() {
        assert_eq!(parse_comb("swap+").unwrap(), Comb::Prim(Prim::SwapSum));
        assert_eq!(
            parse_comb("swap* ; (swap* * id) ; assocr*").unwrap(),
            Comb::seq(
                Prim::SwapProd.into(),
                Comb::seq(
                    Comb::times(Prim::SwapProd.into(), Comb::id()),
                    Prim::AssocrProd.into()
                )
            )
        );
        assert_eq!(parse_comb("! unite+l").unwrap(), Comb::Prim(Prim::UnitiSumL));
    }

    #[test]
    fn comb_precedence() {
        // `!` binds tightest, then `*`, then `+`, then `;`.
        let c = parse_comb("!dist ; id + swap+ * id").unwrap();
        assert_eq!(
            c,
            Comb::seq(
                Prim::Factor.into(),
                Comb::plus(Comb::id(), Comb::times(Prim::SwapSum.into(), Comb::id()))
            )
        );
        assert_eq!(
            parse_comb("!(dist ; swap+)").unwrap(),
            Comb::seq(Prim::SwapSum.into(), Prim::Factor.into())
        );
    }

    #[test]
    fn comb_errors_report_position() {
        let err = parse_comb("swap+ ;").unwrap_err();
        assert_eq!(err.position, 7);
        let err = parse_comb("swap+ frob").unwrap_err();
        assert_eq!(err.position, 6);
        assert!(parse_comb("$c").is_err());
    }

    #[test]
    fn values() {
        assert_eq!(
            parse_value("((),((),()))").unwrap(),
            Val::pair(Val::Unit, Val::pair(Val::Unit, Val::Unit))
        );
        assert_eq!(parse_value("inr inl ()").unwrap(), Val::inr(Val::inl(Val::Unit)));
        let v = Val::pair(Val::inl(Val::Unit), Val::inr(Val::pair(Val::Unit, Val::Unit)));
        assert_eq!(parse_value(&v.to_string()).unwrap(), v);
        assert!(parse_value("(())").is_err());
    }
}
