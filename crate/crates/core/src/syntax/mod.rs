//! Types, values and level-1 combinator terms.
//!
//! Types are built from `0`, `1`, `+` and `*`. Values inhabit them, and a
//! [`Comb`] witnesses an isomorphism between two types. There is no inverse
//! node in the term language: `! c` is expanded with [`adjoint`] by the
//! parser.

pub(crate) mod lex;
mod parse;
pub(crate) mod typing;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use parse::{parse_comb, parse_type, parse_value, ParseError};
pub(crate) use parse::{CombBuilder, Parser};
pub use typing::{check, infer, Path, PathStep, TypeError};

/// A finite structured type.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Ty {
    Zero,
    One,
    Sum(Box<Ty>, Box<Ty>),
    Prod(Box<Ty>, Box<Ty>),
}

impl Ty {
    pub fn sum(left: Ty, right: Ty) -> Ty {
        Ty::Sum(Box::new(left), Box::new(right))
    }

    pub fn prod(left: Ty, right: Ty) -> Ty {
        Ty::Prod(Box::new(left), Box::new(right))
    }

    /// `1 + 1`, with `inl ()` read as true.
    pub fn bool() -> Ty {
        Ty::sum(Ty::One, Ty::One)
    }

    /// Right-nested product of `n` booleans (`n >= 1`).
    pub fn word(n: usize) -> Ty {
        assert!(n >= 1, "a word needs at least one bit");
        let mut ty = Ty::bool();
        for _ in 1..n {
            ty = Ty::prod(Ty::bool(), ty);
        }
        ty
    }

    /// Height of the type tree; leaves have depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Ty::Zero | Ty::One => 1,
            Ty::Sum(a, b) | Ty::Prod(a, b) => 1 + a.depth().max(b.depth()),
        }
    }
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn operand(t: &Ty, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t {
                Ty::Zero | Ty::One => write!(f, "{t}"),
                _ => write!(f, "({t})"),
            }
        }
        match self {
            Ty::Zero => f.write_str("0"),
            Ty::One => f.write_str("1"),
            Ty::Sum(a, b) => {
                operand(a, f)?;
                f.write_str(" + ")?;
                operand(b, f)
            }
            Ty::Prod(a, b) => {
                operand(a, f)?;
                f.write_str(" * ")?;
                operand(b, f)
            }
        }
    }
}

/// A closed value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Val {
    Unit,
    InL(Box<Val>),
    InR(Box<Val>),
    Pair(Box<Val>, Box<Val>),
}

impl Val {
    pub fn inl(v: Val) -> Val {
        Val::InL(Box::new(v))
    }

    pub fn inr(v: Val) -> Val {
        Val::InR(Box::new(v))
    }

    pub fn pair(a: Val, b: Val) -> Val {
        Val::Pair(Box::new(a), Box::new(b))
    }

    pub fn bool(b: bool) -> Val {
        if b {
            Val::inl(Val::Unit)
        } else {
            Val::inr(Val::Unit)
        }
    }

    /// Reads a boolean back; `None` if the value is not `inl ()`/`inr ()`.
    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Val::InL(v) if **v == Val::Unit => Some(true),
            Val::InR(v) if **v == Val::Unit => Some(false),
            _ => None,
        }
    }

    pub fn has_type(&self, ty: &Ty) -> bool {
        match (self, ty) {
            (Val::Unit, Ty::One) => true,
            (Val::InL(v), Ty::Sum(a, _)) => v.has_type(a),
            (Val::InR(v), Ty::Sum(_, b)) => v.has_type(b),
            (Val::Pair(x, y), Ty::Prod(a, b)) => x.has_type(a) && y.has_type(b),
            _ => false,
        }
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Unit => f.write_str("()"),
            Val::InL(v) => write!(f, "inl {v}"),
            Val::InR(v) => write!(f, "inr {v}"),
            Val::Pair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

/// The primitive isomorphisms. Each has a named inverse partner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Prim {
    Id,
    UniteSumL,
    UnitiSumL,
    SwapSum,
    AssoclSum,
    AssocrSum,
    UniteProdL,
    UnitiProdL,
    SwapProd,
    AssoclProd,
    AssocrProd,
    AbsorbR,
    FactorZL,
    Dist,
    Factor,
    UniteSumR,
    UnitiSumR,
    UniteProdR,
    UnitiProdR,
    AbsorbL,
    FactorZR,
    DistL,
    FactorL,
}

impl Prim {
    pub const ALL: [Prim; 23] = [
        Prim::Id,
        Prim::UniteSumL,
        Prim::UnitiSumL,
        Prim::SwapSum,
        Prim::AssoclSum,
        Prim::AssocrSum,
        Prim::UniteProdL,
        Prim::UnitiProdL,
        Prim::SwapProd,
        Prim::AssoclProd,
        Prim::AssocrProd,
        Prim::AbsorbR,
        Prim::FactorZL,
        Prim::Dist,
        Prim::Factor,
        Prim::UniteSumR,
        Prim::UnitiSumR,
        Prim::UniteProdR,
        Prim::UnitiProdR,
        Prim::AbsorbL,
        Prim::FactorZR,
        Prim::DistL,
        Prim::FactorL,
    ];

    /// Concrete spelling, e.g. `unite+l` or `assocr*`.
    pub fn name(self) -> &'static str {
        match self {
            Prim::Id => "id",
            Prim::UniteSumL => "unite+l",
            Prim::UnitiSumL => "uniti+l",
            Prim::SwapSum => "swap+",
            Prim::AssoclSum => "assocl+",
            Prim::AssocrSum => "assocr+",
            Prim::UniteProdL => "unite*l",
            Prim::UnitiProdL => "uniti*l",
            Prim::SwapProd => "swap*",
            Prim::AssoclProd => "assocl*",
            Prim::AssocrProd => "assocr*",
            Prim::AbsorbR => "absorbr",
            Prim::FactorZL => "factorzl",
            Prim::Dist => "dist",
            Prim::Factor => "factor",
            Prim::UniteSumR => "unite+r",
            Prim::UnitiSumR => "uniti+r",
            Prim::UniteProdR => "unite*r",
            Prim::UnitiProdR => "uniti*r",
            Prim::AbsorbL => "absorbl",
            Prim::FactorZR => "factorzr",
            Prim::DistL => "distl",
            Prim::FactorL => "factorl",
        }
    }

    pub fn from_name(name: &str) -> Option<Prim> {
        Prim::ALL.into_iter().find(|p| p.name() == name)
    }

    pub fn inverse(self) -> Prim {
        match self {
            Prim::Id => Prim::Id,
            Prim::UniteSumL => Prim::UnitiSumL,
            Prim::UnitiSumL => Prim::UniteSumL,
            Prim::SwapSum => Prim::SwapSum,
            Prim::AssoclSum => Prim::AssocrSum,
            Prim::AssocrSum => Prim::AssoclSum,
            Prim::UniteProdL => Prim::UnitiProdL,
            Prim::UnitiProdL => Prim::UniteProdL,
            Prim::SwapProd => Prim::SwapProd,
            Prim::AssoclProd => Prim::AssocrProd,
            Prim::AssocrProd => Prim::AssoclProd,
            Prim::AbsorbR => Prim::FactorZL,
            Prim::FactorZL => Prim::AbsorbR,
            Prim::Dist => Prim::Factor,
            Prim::Factor => Prim::Dist,
            Prim::UniteSumR => Prim::UnitiSumR,
            Prim::UnitiSumR => Prim::UniteSumR,
            Prim::UniteProdR => Prim::UnitiProdR,
            Prim::UnitiProdR => Prim::UniteProdR,
            Prim::AbsorbL => Prim::FactorZR,
            Prim::FactorZR => Prim::AbsorbL,
            Prim::DistL => Prim::FactorL,
            Prim::FactorL => Prim::DistL,
        }
    }
}

impl fmt::Display for Prim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A level-1 combinator term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Comb {
    Prim(Prim),
    /// Run the left term, then the right one.
    Seq(Box<Comb>, Box<Comb>),
    /// Choice: dispatch on `inl`/`inr`.
    Plus(Box<Comb>, Box<Comb>),
    /// Parallel: act on both components of a pair.
    Times(Box<Comb>, Box<Comb>),
}

impl Comb {
    pub fn id() -> Comb {
        Comb::Prim(Prim::Id)
    }

    pub fn seq(a: Comb, b: Comb) -> Comb {
        Comb::Seq(Box::new(a), Box::new(b))
    }

    pub fn plus(a: Comb, b: Comb) -> Comb {
        Comb::Plus(Box::new(a), Box::new(b))
    }

    pub fn times(a: Comb, b: Comb) -> Comb {
        Comb::Times(Box::new(a), Box::new(b))
    }

    /// Right-nested sequence of the given terms; `id` when empty.
    pub fn seq_all<I>(terms: I) -> Comb
    where
        I: IntoIterator<Item = Comb>,
        I::IntoIter: DoubleEndedIterator,
    {
        let mut iter = terms.into_iter().rev();
        let Some(mut acc) = iter.next() else {
            return Comb::id();
        };
        for c in iter {
            acc = Comb::seq(c, acc);
        }
        acc
    }

    /// Flattens the top-level chain of `;` nodes in execution order.
    pub fn seq_components(&self) -> Vec<&Comb> {
        let mut out = Vec::new();
        fn walk<'a>(c: &'a Comb, out: &mut Vec<&'a Comb>) {
            match c {
                Comb::Seq(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                other => out.push(other),
            }
        }
        walk(self, &mut out);
        out
    }

    /// Number of nodes in the term tree.
    pub fn node_count(&self) -> usize {
        match self {
            Comb::Prim(_) => 1,
            Comb::Seq(a, b) | Comb::Plus(a, b) | Comb::Times(a, b) => {
                1 + a.node_count() + b.node_count()
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Comb::Prim(_) => 1,
            Comb::Seq(a, b) | Comb::Plus(a, b) | Comb::Times(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }
}

impl From<Prim> for Comb {
    fn from(p: Prim) -> Comb {
        Comb::Prim(p)
    }
}

impl fmt::Display for Comb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn operand(c: &Comb, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match c {
                Comb::Prim(p) => write!(f, "{p}"),
                _ => write!(f, "({c})"),
            }
        }
        let (a, op, b) = match self {
            Comb::Prim(p) => return write!(f, "{p}"),
            Comb::Seq(a, b) => (a, ";", b),
            Comb::Plus(a, b) => (a, "+", b),
            Comb::Times(a, b) => (a, "*", b),
        };
        operand(a, f)?;
        write!(f, " {op} ")?;
        operand(b, f)
    }
}

/// The syntactic inverse: primitives map to their partner, `;` reverses
/// its operands, `+` and `*` invert componentwise.
pub fn adjoint(c: &Comb) -> Comb {
    match c {
        Comb::Prim(p) => Comb::Prim(p.inverse()),
        Comb::Seq(a, b) => Comb::seq(adjoint(b), adjoint(a)),
        Comb::Plus(a, b) => Comb::plus(adjoint(a), adjoint(b)),
        Comb::Times(a, b) => Comb::times(adjoint(a), adjoint(b)),
    }
}

/// Structural equality; no quotient by associativity or any level-2 law.
pub fn comb_equal(a: &Comb, b: &Comb) -> bool {
    a == b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_prim_round_trips_through_its_name() {
        for p in Prim::ALL {
            assert_eq!(Prim::from_name(p.name()), Some(p));
            assert_eq!(p.inverse().inverse(), p);
        }
    }

    #[test]
    fn self_inverse_constants() {
        let selfinv: Vec<_> = Prim::ALL.into_iter().filter(|p| p.inverse() == *p).collect();
        assert_eq!(selfinv, vec![Prim::Id, Prim::SwapSum, Prim::SwapProd]);
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(adjoint(&Prim::SwapSum.into()), Comb::Prim(Prim::SwapSum));
        assert_eq!(adjoint(&Prim::UniteSumL.into()), Comb::Prim(Prim::UnitiSumL));
        let c = Comb::seq(Prim::Dist.into(), Comb::plus(Comb::id(), Comb::id()));
        let expected = Comb::seq(Comb::plus(Comb::id(), Comb::id()), Prim::Factor.into());
        assert_eq!(adjoint(&c), expected);
        assert!(comb_equal(&adjoint(&adjoint(&c)), &c));
    }

    #[test]
    fn structural_equality_is_not_observational() {
        let swap: Comb = Prim::SwapSum.into();
        assert!(comb_equal(&swap, &swap));
        assert!(!comb_equal(&Comb::seq(Comb::id(), swap.clone()), &swap));
    }

    #[test]
    fn values_check_against_types() {
        let word = Ty::word(3);
        let v = Val::pair(Val::bool(true), Val::pair(Val::bool(false), Val::bool(true)));
        assert!(v.has_type(&word));
        assert!(!Val::Unit.has_type(&Ty::Zero));
        assert!(!Val::inl(Val::Unit).has_type(&Ty::sum(Ty::Zero, Ty::One)));
    }

    #[test]
    fn printing_is_fully_parenthesized() {
        let c = Comb::seq_all([
            Prim::SwapProd.into(),
            Comb::times(Prim::SwapProd.into(), Comb::id()),
            Prim::AssocrProd.into(),
        ]);
        assert_eq!(c.to_string(), "swap* ; ((swap* * id) ; assocr*)");
        let t = Ty::prod(Ty::sum(Ty::One, Ty::Zero), Ty::bool());
        assert_eq!(t.to_string(), "(1 + 0) * (1 + 1)");
    }
}
