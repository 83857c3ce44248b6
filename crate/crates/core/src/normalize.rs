//! Sizes, canonical types, and combinators that normalize a type to the
//! canonical type of its size.

use crate::syntax::{Comb, Prim, Ty};

/// Number of values of `b`. Saturates at `u64::MAX`.
pub fn size(b: &Ty) -> u64 {
    match b {
        Ty::Zero => 0,
        Ty::One => 1,
        Ty::Sum(x, y) => size(x).saturating_add(size(y)),
        Ty::Prod(x, y) => {
            let (m, n) = (size(x), size(y));
            if m == 0 || n == 0 {
                0
            } else {
                m.saturating_mul(n)
            }
        }
    }
}

/// `1 + (1 + (... + 0))` with `n` units.
pub fn canonical_type(n: u64) -> Ty {
    let mut t = Ty::Zero;
    for _ in 0..n {
        t = Ty::sum(Ty::One, t);
    }
    t
}

/// The canonical type of the same size as `b`.
pub fn canonical_of(b: &Ty) -> Ty {
    canonical_type(size(b))
}

fn seq(a: impl Into<Comb>, b: impl Into<Comb>) -> Comb {
    Comb::seq(a.into(), b.into())
}

/// A combinator `b <-> canonical_of(b)`.
///
/// Clauses are tried in order: `0`, `1`, `0+b`, `1+b`, `(s+t)+b`,
/// `(s*t)+b`, `0*b`, `1*b`, `(s+t)*b`, `(s*t)*b`. Each recursive call is on
/// a type whose left operand is strictly smaller, or on a strictly smaller
/// type, so the recursion terminates. The output is not minimized.
pub fn normalizer(b: &Ty) -> Comb {
    match b {
        Ty::Zero => Comb::id(),
        Ty::One => Prim::UnitiSumR.into(),
        Ty::Sum(l, r) => match l.as_ref() {
            Ty::Zero => seq(Prim::UniteSumL, normalizer(r)),
            Ty::One => Comb::plus(Comb::id(), normalizer(r)),
            Ty::Sum(s, t) => {
                let reassociated = Ty::sum((**s).clone(), Ty::sum((**t).clone(), (**r).clone()));
                seq(Prim::AssocrSum, normalizer(&reassociated))
            }
            Ty::Prod(..) => {
                let flat_left = canonical_of(l);
                seq(
                    Comb::plus(normalizer(l), Comb::id()),
                    normalizer(&Ty::sum(flat_left, (**r).clone())),
                )
            }
        },
        Ty::Prod(l, r) => match l.as_ref() {
            Ty::Zero => Prim::AbsorbR.into(),
            Ty::One => seq(Prim::UniteProdL, normalizer(r)),
            Ty::Sum(s, t) => {
                let distributed = Ty::sum(
                    Ty::prod((**s).clone(), (**r).clone()),
                    Ty::prod((**t).clone(), (**r).clone()),
                );
                seq(Prim::Dist, normalizer(&distributed))
            }
            Ty::Prod(s, t) => {
                let reassociated = Ty::prod((**s).clone(), Ty::prod((**t).clone(), (**r).clone()));
                seq(Prim::AssocrProd, normalizer(&reassociated))
            }
        },
    }
}

/// Decides whether two types are isomorphic and, if so, returns a witness
/// `a <-> b` built from the two normalizers.
pub fn isomorphism(a: &Ty, b: &Ty) -> Option<Comb> {
    (size(a) == size(b)).then(|| Comb::seq(normalizer(a), crate::syntax::adjoint(&normalizer(b))))
}
