//! Type inference for combinators.
//!
//! Constants are schematic, so inference runs first-order unification over
//! types with variables. Almost every constant's output is determined by its
//! input; the exceptions are `factorzl : 0 <-> 0 * t` and
//! `factorzr : 0 <-> t * 0`, whose `t` can only be fixed by context. A fully
//! closed term can therefore still have an undetermined codomain, which
//! [`infer`] reports as [`TypeError::Ambiguous`] and [`check`] accepts.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use super::{Comb, Prim, Ty};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PathStep {
    SeqLeft,
    SeqRight,
    PlusLeft,
    PlusRight,
    TimesLeft,
    TimesRight,
}

/// A position inside a term, from the root downwards.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Path(pub Vec<PathStep>);

impl Path {
    pub fn root() -> Path {
        Path(Vec::new())
    }

    pub fn child(&self, step: PathStep) -> Path {
        let mut steps = self.0.clone();
        steps.push(step);
        Path(steps)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("/")?;
            }
            f.write_str(match s {
                PathStep::SeqLeft => "seq.0",
                PathStep::SeqRight => "seq.1",
                PathStep::PlusLeft => "plus.0",
                PathStep::PlusRight => "plus.1",
                PathStep::TimesLeft => "times.0",
                PathStep::TimesRight => "times.1",
            })?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("at {path}: expected input of shape {expected}, found {found}")]
    Mismatch {
        path: Path,
        expected: String,
        found: String,
    },
    #[error("codomain mismatch: expected {expected}, found {found}")]
    Codomain { expected: String, found: String },
    #[error("output type {found} is not determined by the input type")]
    Ambiguous { found: String },
}

/// A type with unification variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum TyTerm {
    Var(u32),
    Zero,
    One,
    Sum(Box<TyTerm>, Box<TyTerm>),
    Prod(Box<TyTerm>, Box<TyTerm>),
}

impl TyTerm {
    pub(crate) fn sum(a: TyTerm, b: TyTerm) -> TyTerm {
        TyTerm::Sum(Box::new(a), Box::new(b))
    }

    pub(crate) fn prod(a: TyTerm, b: TyTerm) -> TyTerm {
        TyTerm::Prod(Box::new(a), Box::new(b))
    }

    fn collect_vars(&self, out: &mut Vec<u32>) {
        match self {
            TyTerm::Var(v) => {
                if !out.contains(v) {
                    out.push(*v)
                }
            }
            TyTerm::Zero | TyTerm::One => {}
            TyTerm::Sum(a, b) | TyTerm::Prod(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub(crate) fn vars(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn fmt_with(&self, names: &HashMap<u32, String>, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let operand = |t: &TyTerm, f: &mut fmt::Formatter<'_>| match t {
            TyTerm::Sum(..) | TyTerm::Prod(..) => {
                f.write_str("(")?;
                t.fmt_with(names, f)?;
                f.write_str(")")
            }
            _ => t.fmt_with(names, f),
        };
        match self {
            TyTerm::Var(v) => match names.get(v) {
                Some(n) => f.write_str(n),
                None => write!(f, "t{v}"),
            },
            TyTerm::Zero => f.write_str("0"),
            TyTerm::One => f.write_str("1"),
            TyTerm::Sum(a, b) => {
                operand(a, f)?;
                f.write_str(" + ")?;
                operand(b, f)
            }
            TyTerm::Prod(a, b) => {
                operand(a, f)?;
                f.write_str(" * ")?;
                operand(b, f)
            }
        }
    }
}

impl From<&Ty> for TyTerm {
    fn from(t: &Ty) -> TyTerm {
        match t {
            Ty::Zero => TyTerm::Zero,
            Ty::One => TyTerm::One,
            Ty::Sum(a, b) => TyTerm::sum(a.as_ref().into(), b.as_ref().into()),
            Ty::Prod(a, b) => TyTerm::prod(a.as_ref().into(), b.as_ref().into()),
        }
    }
}

/// Renders terms with their variables renamed `a`, `b`, ... in order of
/// first appearance across all of `terms`.
pub(crate) fn render_terms(terms: &[&TyTerm]) -> Vec<String> {
    let mut vars = Vec::new();
    for t in terms {
        t.collect_vars(&mut vars);
    }
    let names: HashMap<u32, String> = vars
        .iter()
        .enumerate()
        .map(|(i, v)| (*v, var_name(i)))
        .collect();
    struct Show<'a>(&'a TyTerm, &'a HashMap<u32, String>);
    impl fmt::Display for Show<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            self.0.fmt_with(self.1, f)
        }
    }
    terms.iter().map(|t| Show(t, &names).to_string()).collect()
}

pub(crate) fn var_name(i: usize) -> String {
    let letter = (b'a' + (i % 26) as u8) as char;
    if i < 26 {
        letter.to_string()
    } else {
        format!("{letter}{}", i / 26)
    }
}

#[derive(Default)]
pub(crate) struct Unifier {
    subst: Vec<Option<TyTerm>>,
}

impl Unifier {
    pub(crate) fn new() -> Unifier {
        Unifier::default()
    }

    pub(crate) fn fresh(&mut self) -> TyTerm {
        self.subst.push(None);
        TyTerm::Var(self.subst.len() as u32 - 1)
    }

    fn shallow(&self, t: &TyTerm) -> TyTerm {
        let mut t = t.clone();
        while let TyTerm::Var(v) = t {
            match &self.subst[v as usize] {
                Some(next) => t = next.clone(),
                None => break,
            }
        }
        t
    }

    /// Applies the current substitution everywhere.
    pub(crate) fn zonk(&self, t: &TyTerm) -> TyTerm {
        match self.shallow(t) {
            TyTerm::Sum(a, b) => TyTerm::sum(self.zonk(&a), self.zonk(&b)),
            TyTerm::Prod(a, b) => TyTerm::prod(self.zonk(&a), self.zonk(&b)),
            other => other,
        }
    }

    fn occurs(&self, v: u32, t: &TyTerm) -> bool {
        match self.shallow(t) {
            TyTerm::Var(w) => v == w,
            TyTerm::Zero | TyTerm::One => false,
            TyTerm::Sum(a, b) | TyTerm::Prod(a, b) => self.occurs(v, &a) || self.occurs(v, &b),
        }
    }

    /// Unifies two terms. On failure the substitution may be partially
    /// extended; callers abandon the unifier after an error.
    pub(crate) fn unify(&mut self, a: &TyTerm, b: &TyTerm) -> bool {
        let a = self.shallow(a);
        let b = self.shallow(b);
        match (&a, &b) {
            (TyTerm::Var(x), TyTerm::Var(y)) if x == y => true,
            (TyTerm::Var(x), t) | (t, TyTerm::Var(x)) => {
                if self.occurs(*x, t) {
                    return false;
                }
                self.subst[*x as usize] = Some(t.clone());
                true
            }
            (TyTerm::Zero, TyTerm::Zero) | (TyTerm::One, TyTerm::One) => true,
            (TyTerm::Sum(a1, b1), TyTerm::Sum(a2, b2))
            | (TyTerm::Prod(a1, b1), TyTerm::Prod(a2, b2)) => {
                self.unify(a1, a2) && self.unify(b1, b2)
            }
            _ => false,
        }
    }

    /// Grounds a term, replacing unconstrained variables by `default`.
    pub(crate) fn ground(&self, t: &TyTerm, default: &Ty) -> Ty {
        match self.shallow(t) {
            TyTerm::Var(_) => default.clone(),
            TyTerm::Zero => Ty::Zero,
            TyTerm::One => Ty::One,
            TyTerm::Sum(a, b) => Ty::sum(self.ground(&a, default), self.ground(&b, default)),
            TyTerm::Prod(a, b) => Ty::prod(self.ground(&a, default), self.ground(&b, default)),
        }
    }

    pub(crate) fn try_ground(&self, t: &TyTerm) -> Option<Ty> {
        match self.shallow(t) {
            TyTerm::Var(_) => None,
            TyTerm::Zero => Some(Ty::Zero),
            TyTerm::One => Some(Ty::One),
            TyTerm::Sum(a, b) => Some(Ty::sum(self.try_ground(&a)?, self.try_ground(&b)?)),
            TyTerm::Prod(a, b) => Some(Ty::prod(self.try_ground(&a)?, self.try_ground(&b)?)),
        }
    }
}

/// Domain and codomain schemas of a constant, with fresh variables.
pub(crate) fn signature(p: Prim, u: &mut Unifier) -> (TyTerm, TyTerm) {
    use TyTerm as T;
    let a = u.fresh();
    let b = u.fresh();
    let c = u.fresh();
    match p {
        Prim::Id => (a.clone(), a),
        Prim::UniteSumL => (T::sum(T::Zero, a.clone()), a),
        Prim::UnitiSumL => (a.clone(), T::sum(T::Zero, a)),
        Prim::UniteSumR => (T::sum(a.clone(), T::Zero), a),
        Prim::UnitiSumR => (a.clone(), T::sum(a, T::Zero)),
        Prim::SwapSum => (T::sum(a.clone(), b.clone()), T::sum(b, a)),
        Prim::AssoclSum => (
            T::sum(a.clone(), T::sum(b.clone(), c.clone())),
            T::sum(T::sum(a, b), c),
        ),
        Prim::AssocrSum => (
            T::sum(T::sum(a.clone(), b.clone()), c.clone()),
            T::sum(a, T::sum(b, c)),
        ),
        Prim::UniteProdL => (T::prod(T::One, a.clone()), a),
        Prim::UnitiProdL => (a.clone(), T::prod(T::One, a)),
        Prim::UniteProdR => (T::prod(a.clone(), T::One), a),
        Prim::UnitiProdR => (a.clone(), T::prod(a, T::One)),
        Prim::SwapProd => (T::prod(a.clone(), b.clone()), T::prod(b, a)),
        Prim::AssoclProd => (
            T::prod(a.clone(), T::prod(b.clone(), c.clone())),
            T::prod(T::prod(a, b), c),
        ),
        Prim::AssocrProd => (
            T::prod(T::prod(a.clone(), b.clone()), c.clone()),
            T::prod(a, T::prod(b, c)),
        ),
        Prim::AbsorbR => (T::prod(T::Zero, a), T::Zero),
        Prim::FactorZL => (T::Zero, T::prod(T::Zero, a)),
        Prim::AbsorbL => (T::prod(a, T::Zero), T::Zero),
        Prim::FactorZR => (T::Zero, T::prod(a, T::Zero)),
        Prim::Dist => (
            T::prod(T::sum(a.clone(), b.clone()), c.clone()),
            T::sum(T::prod(a, c.clone()), T::prod(b, c)),
        ),
        Prim::Factor => (
            T::sum(T::prod(a.clone(), c.clone()), T::prod(b.clone(), c.clone())),
            T::prod(T::sum(a, b), c),
        ),
        Prim::DistL => (
            T::prod(a.clone(), T::sum(b.clone(), c.clone())),
            T::sum(T::prod(a.clone(), b), T::prod(a, c)),
        ),
        Prim::FactorL => (
            T::sum(T::prod(a.clone(), b.clone()), T::prod(a.clone(), c.clone())),
            T::prod(a, T::sum(b, c)),
        ),
    }
}

pub(crate) fn mismatch(u: &Unifier, path: &Path, expected: &TyTerm, found: &TyTerm) -> TypeError {
    let e = u.zonk(expected);
    let f = u.zonk(found);
    let shown = render_terms(&[&e, &f]);
    TypeError::Mismatch {
        path: path.clone(),
        expected: shown[0].clone(),
        found: shown[1].clone(),
    }
}

/// Unifies `dom` with the domain of `p` and returns its codomain.
pub(crate) fn apply_prim(
    p: Prim,
    dom: &TyTerm,
    u: &mut Unifier,
    path: &Path,
) -> Result<TyTerm, TypeError> {
    let (d, o) = signature(p, u);
    let before = u.zonk(dom);
    let shape = u.zonk(&d);
    if !u.unify(dom, &d) {
        return Err(mismatch(u, path, &shape, &before));
    }
    Ok(o)
}

/// Splits `dom` as `l + r` (or `l * r`), returning the two halves.
pub(crate) fn split(
    dom: &TyTerm,
    product: bool,
    u: &mut Unifier,
    path: &Path,
) -> Result<(TyTerm, TyTerm), TypeError> {
    let l = u.fresh();
    let r = u.fresh();
    let shape = if product {
        TyTerm::prod(l.clone(), r.clone())
    } else {
        TyTerm::sum(l.clone(), r.clone())
    };
    let before = u.zonk(dom);
    if !u.unify(dom, &shape) {
        return Err(mismatch(u, path, &shape, &before));
    }
    Ok((l, r))
}

/// Infers the codomain of `c` at the (possibly partial) domain `dom`.
pub(crate) fn infer_term(
    c: &Comb,
    dom: &TyTerm,
    u: &mut Unifier,
    path: &Path,
) -> Result<TyTerm, TypeError> {
    match c {
        Comb::Prim(p) => apply_prim(*p, dom, u, path),
        Comb::Seq(a, b) => {
            let mid = infer_term(a, dom, u, &path.child(PathStep::SeqLeft))?;
            infer_term(b, &mid, u, &path.child(PathStep::SeqRight))
        }
        Comb::Plus(a, b) => {
            let (l, r) = split(dom, false, u, path)?;
            let l2 = infer_term(a, &l, u, &path.child(PathStep::PlusLeft))?;
            let r2 = infer_term(b, &r, u, &path.child(PathStep::PlusRight))?;
            Ok(TyTerm::sum(l2, r2))
        }
        Comb::Times(a, b) => {
            let (l, r) = split(dom, true, u, path)?;
            let l2 = infer_term(a, &l, u, &path.child(PathStep::TimesLeft))?;
            let r2 = infer_term(b, &r, u, &path.child(PathStep::TimesRight))?;
            Ok(TyTerm::prod(l2, r2))
        }
    }
}

/// Every node's (input, output) types in preorder, with types that no
/// constraint determines grounded to `0`. Such leftovers only ever sit
/// beside a `0` factor, so the choice does not change any size.
pub(crate) fn annotate(c: &Comb, dom: &Ty) -> Result<Vec<(Ty, Ty)>, TypeError> {
    fn go(
        c: &Comb,
        dom: &TyTerm,
        u: &mut Unifier,
        path: &Path,
        out: &mut Vec<(TyTerm, TyTerm)>,
    ) -> Result<TyTerm, TypeError> {
        let slot = out.len();
        out.push((dom.clone(), TyTerm::Zero));
        let cod = match c {
            Comb::Prim(p) => apply_prim(*p, dom, u, path)?,
            Comb::Seq(a, b) => {
                let mid = go(a, dom, u, &path.child(PathStep::SeqLeft), out)?;
                go(b, &mid, u, &path.child(PathStep::SeqRight), out)?
            }
            Comb::Plus(a, b) => {
                let (l, r) = split(dom, false, u, path)?;
                let l2 = go(a, &l, u, &path.child(PathStep::PlusLeft), out)?;
                let r2 = go(b, &r, u, &path.child(PathStep::PlusRight), out)?;
                TyTerm::sum(l2, r2)
            }
            Comb::Times(a, b) => {
                let (l, r) = split(dom, true, u, path)?;
                let l2 = go(a, &l, u, &path.child(PathStep::TimesLeft), out)?;
                let r2 = go(b, &r, u, &path.child(PathStep::TimesRight), out)?;
                TyTerm::prod(l2, r2)
            }
        };
        out[slot].1 = cod.clone();
        Ok(cod)
    }
    let mut u = Unifier::new();
    let mut raw = Vec::new();
    go(c, &dom.into(), &mut u, &Path::root(), &mut raw)?;
    Ok(raw
        .iter()
        .map(|(i, o)| (u.ground(i, &Ty::Zero), u.ground(o, &Ty::Zero)))
        .collect())
}

/// The unique output type of `c` at input `input`.
pub fn infer(c: &Comb, input: &Ty) -> Result<Ty, TypeError> {
    let mut u = Unifier::new();
    let out = infer_term(c, &input.into(), &mut u, &Path::root())?;
    u.try_ground(&out).ok_or_else(|| TypeError::Ambiguous {
        found: render_terms(&[&u.zonk(&out)]).remove(0),
    })
}

/// Checks `c : input <-> output`.
pub fn check(c: &Comb, input: &Ty, output: &Ty) -> Result<(), TypeError> {
    let mut u = Unifier::new();
    let out = infer_term(c, &input.into(), &mut u, &Path::root())?;
    let shown = u.zonk(&out);
    if u.unify(&out, &output.into()) {
        Ok(())
    } else {
        Err(TypeError::Codomain {
            expected: output.to_string(),
            found: render_terms(&[&shown]).remove(0),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{adjoint, parse_comb, parse_type};

    fn ty(s: &str) -> Ty {
        parse_type(s).unwrap()
    }

    fn comb(s: &str) -> Comb {
        parse_comb(s).unwrap()
    }

    #[test]
    fn infer_examples() {
        assert_eq!(infer(&comb("swap+"), &ty("1 + 0")).unwrap(), ty("0 + 1"));
        assert_eq!(
            infer(&comb("dist"), &ty("(1 + 1) * 1")).unwrap(),
            ty("(1 * 1) + (1 * 1)")
        );
    }

    #[test]
    fn unite_rejects_wrong_shape() {
        let err = infer(&comb("unite+l"), &ty("1 * 1")).unwrap_err();
        match err {
            TypeError::Mismatch { path, expected, found } => {
                assert_eq!(path, Path::root());
                assert_eq!(expected, "0 + a");
                assert_eq!(found, "1 * 1");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn factor_needs_a_shared_factor() {
        let err = infer(&comb("factor"), &ty("(1 * 1) + (0 * (1 + 1))")).unwrap_err();
        assert!(matches!(err, TypeError::Mismatch { .. }), "{err}");
    }

    #[test]
    fn seq_mismatch_points_at_the_second_component() {
        let err = infer(&comb("swap+ ; unite*l"), &ty("1 + 1")).unwrap_err();
        match err {
            TypeError::Mismatch { path, .. } => {
                assert_eq!(path, Path(vec![PathStep::SeqRight]));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn factorzl_codomain_is_ambiguous_until_checked() {
        let c = comb("factorzl");
        assert!(matches!(infer(&c, &Ty::Zero), Err(TypeError::Ambiguous { .. })));
        check(&c, &Ty::Zero, &ty("0 * (1 + 1)")).unwrap();
        assert!(check(&c, &Ty::Zero, &ty("(1 + 1) * 0")).is_err());
        // Context fixes the otherwise free factor.
        let pinned = comb("factorzl ; (id * swap+)");
        check(&pinned, &Ty::Zero, &ty("0 * (1 + 0)")).unwrap();
    }

    #[test]
    fn adjoint_typing() {
        let c = comb("swap* ; (swap* * id) ; assocr*");
        let word = Ty::word(3);
        let out = infer(&c, &word).unwrap();
        assert_eq!(infer(&adjoint(&c), &out).unwrap(), word);
    }

    #[test]
    fn annotate_grounds_free_factors() {
        let c = comb("factorzl ; swap*");
        let ann = annotate(&c, &Ty::Zero).unwrap();
        assert_eq!(ann.len(), 3);
        assert_eq!(ann[0], (Ty::Zero, ty("0 * 0")));
    }
}
