//! Random well-typed terms, for property tests and the rule-soundness sweep.
//!
//! Everything takes an explicit `Rng`, so a seeded generator reproduces the
//! same terms.

use std::collections::{BTreeMap, HashMap};

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::normalize::{canonical_type, isomorphism, size};
use crate::rewrite::{schema, Rule, Rw};
use crate::syntax::typing::TyTerm;
use crate::syntax::{adjoint, check, infer, Comb, Prim, Ty, TypeError};

/// A random type with at most `max_size` values and depth at most 6. Empty
/// types show up, but rarely.
pub fn random_type<R: Rng + ?Sized>(rng: &mut R, max_size: u64) -> Ty {
    fn go<R: Rng + ?Sized>(rng: &mut R, budget: u32) -> Ty {
        let leaf = budget == 0 || rng.random_bool(0.35);
        if leaf {
            return if rng.random_bool(0.08) { Ty::Zero } else { Ty::One };
        }
        let (a, b) = (go(rng, budget - 1), go(rng, budget - 1));
        if rng.random_bool(0.5) {
            Ty::sum(a, b)
        } else {
            Ty::prod(a, b)
        }
    }
    loop {
        let t = go(rng, 5);
        if size(&t) <= max_size {
            return t;
        }
    }
}

fn type_depth(t: &Ty) -> usize {
    match t {
        Ty::Zero | Ty::One => 1,
        Ty::Sum(a, b) | Ty::Prod(a, b) => 1 + type_depth(a).max(type_depth(b)),
    }
}

/// Constants applicable at `dom`, paired with their output type.
fn applicable<R: Rng + ?Sized>(rng: &mut R, dom: &Ty) -> Vec<(Prim, Ty)> {
    // Units and factorz only ever grow the type tree; stop offering them
    // once it is deep.
    let grow = type_depth(dom) < 6;
    let mut out = Vec::new();
    for p in Prim::ALL {
        let introduces = matches!(
            p,
            Prim::UnitiSumL
                | Prim::UnitiSumR
                | Prim::UnitiProdL
                | Prim::UnitiProdR
                | Prim::FactorZL
                | Prim::FactorZR
        );
        if introduces && !grow {
            continue;
        }
        match infer(&p.into(), dom) {
            Ok(t) => out.push((p, t)),
            Err(TypeError::Ambiguous { .. }) => {
                let t = random_type(rng, 3);
                let out_ty = if p == Prim::FactorZL {
                    Ty::prod(Ty::Zero, t)
                } else {
                    Ty::prod(t, Ty::Zero)
                };
                out.push((p, out_ty));
            }
            Err(_) => {}
        }
    }
    out
}

/// A random combinator with domain `dom` and term depth at most `depth`
/// (at least 1), together with its codomain.
pub fn random_comb<R: Rng + ?Sized>(rng: &mut R, dom: &Ty, depth: usize) -> (Comb, Ty) {
    let roll: f64 = rng.random();
    if depth > 1 {
        match dom {
            Ty::Sum(a, b) if roll < 0.2 => {
                let (c1, t1) = random_comb(rng, a, depth - 1);
                let (c2, t2) = random_comb(rng, b, depth - 1);
                return (Comb::plus(c1, c2), Ty::sum(t1, t2));
            }
            Ty::Prod(a, b) if roll < 0.2 => {
                let (c1, t1) = random_comb(rng, a, depth - 1);
                let (c2, t2) = random_comb(rng, b, depth - 1);
                return (Comb::times(c1, c2), Ty::prod(t1, t2));
            }
            _ => {}
        }
        if roll < 0.55 {
            let (c1, mid) = random_comb(rng, dom, depth - 1);
            let (c2, out) = random_comb(rng, &mid, depth - 1);
            return (Comb::seq(c1, c2), out);
        }
    }
    let choices = applicable(rng, dom);
    // `id` always applies; keep it from dominating.
    let pick = choices
        .iter()
        .filter(|(p, _)| *p != Prim::Id)
        .collect::<Vec<_>>()
        .choose(rng)
        .map(|c| (*c).clone())
        .unwrap_or((Prim::Id, dom.clone()));
    (pick.0.into(), pick.1)
}

/// Swaps positions `k` and `k + 1` of the canonical type of size `n`.
fn adjacent_swap(k: u64, n: u64) -> Comb {
    debug_assert!(k + 1 < n);
    let mut c = Comb::seq_all(vec![
        Prim::AssoclSum.into(),
        Comb::plus(Prim::SwapSum.into(), Comb::id()),
        Prim::AssocrSum.into(),
    ]);
    for _ in 0..k {
        c = Comb::plus(Comb::id(), c);
    }
    c
}

/// A combinator on `canonical_type(n)` realizing a random permutation.
pub fn random_perm_on_canonical<R: Rng + ?Sized>(rng: &mut R, n: u64) -> Comb {
    if n < 2 {
        return Comb::id();
    }
    let swaps = rng.random_range(0..=n);
    Comb::seq_all((0..swaps).map(|_| adjacent_swap(rng.random_range(0..n - 1), n)).collect::<Vec<_>>())
}

/// A random isomorphism `from <-> to`, or `None` when the sizes differ.
pub fn random_iso<R: Rng + ?Sized>(rng: &mut R, from: &Ty, to: &Ty) -> Option<Comb> {
    let n = size(from);
    if n != size(to) {
        return None;
    }
    let (c, mid) = random_comb(rng, from, 3);
    let canon = canonical_type(n);
    Some(Comb::seq_all(vec![
        c,
        isomorphism(&mid, &canon)?,
        random_perm_on_canonical(rng, n),
        isomorphism(&canon, to)?,
    ]))
}

/// A rule with every metavariable bound to a concrete combinator.
#[derive(Clone, Debug)]
pub struct RuleInstance {
    pub rule: &'static Rule,
    /// The rule with all bindings explicit.
    pub rw: Rw,
    pub lhs: Comb,
    pub rhs: Comb,
    pub domain: Ty,
    pub codomain: Ty,
}

fn ground(t: &TyTerm, env: &HashMap<u32, Ty>) -> Ty {
    match t {
        TyTerm::Var(v) => env.get(v).cloned().unwrap_or(Ty::Zero),
        TyTerm::Zero => Ty::Zero,
        TyTerm::One => Ty::One,
        TyTerm::Sum(a, b) => Ty::sum(ground(a, env), ground(b, env)),
        TyTerm::Prod(a, b) => Ty::prod(ground(a, env), ground(b, env)),
    }
}

/// Instantiates `rule` at random: its type variables get small random
/// types (domain size at most `max_size`), and its metavariables random
/// isomorphisms of the matching types. Gives up with `None` after a fixed
/// number of attempts.
pub fn instantiate_rule<R: Rng + ?Sized>(
    rng: &mut R,
    rule: &'static Rule,
    max_size: u64,
) -> Option<RuleInstance> {
    let s = schema(rule).ok()?;
    let mut vars = s.domain.vars();
    for (i, o) in s.metas.values() {
        vars.extend(i.vars());
        vars.extend(o.vars());
    }
    for _ in 0..2000 {
        let env: HashMap<u32, Ty> = vars.iter().map(|&v| (v, random_type(rng, 3))).collect();
        let domain = ground(&s.domain, &env);
        if size(&domain) > max_size {
            continue;
        }
        let sigs: Vec<(&String, Ty, Ty)> = s
            .metas
            .iter()
            .map(|(m, (i, o))| (m, ground(i, &env), ground(o, &env)))
            .collect();
        if sigs.iter().any(|(_, i, o)| size(i) != size(o)) {
            continue;
        }
        let mut bindings = BTreeMap::new();
        for (m, i, o) in &sigs {
            bindings.insert((*m).clone(), random_iso(rng, i, o)?);
        }
        let lhs = rule.lhs.instantiate(&bindings)?;
        let rhs = rule.rhs.instantiate(&bindings)?;
        let codomain = ground(&s.codomain, &env);
        if check(&lhs, &domain, &codomain).is_err() || check(&rhs, &domain, &codomain).is_err() {
            continue;
        }
        return Some(RuleInstance {
            rule,
            rw: Rw::Prim { rule, bindings },
            lhs,
            rhs,
            domain,
            codomain,
        });
    }
    None
}

/// A rewrite applied somewhere inside a larger term.
#[derive(Clone, Debug)]
pub struct Contextual {
    pub rw: Rw,
    pub comb: Comb,
    pub domain: Ty,
}

/// Wraps an instance in up to `layers` random `;`, `+` and `*` contexts,
/// steering the rewrite there with the matching congruences.
pub fn random_context<R: Rng + ?Sized>(rng: &mut R, inst: &RuleInstance, layers: usize) -> Contextual {
    let mut rw = inst.rw.clone();
    let mut comb = inst.lhs.clone();
    let mut domain = inst.domain.clone();
    let mut codomain = inst.codomain.clone();
    for _ in 0..rng.random_range(0..=layers) {
        match rng.random_range(0..6) {
            0 => {
                let (d, out) = random_comb(rng, &codomain, 3);
                comb = Comb::seq(comb, d);
                rw = Rw::resp_seq(rw, Rw::Id2);
                codomain = out;
            }
            1 => {
                let (d, t) = random_comb(rng, &domain, 3);
                comb = Comb::seq(adjoint(&d), comb);
                rw = Rw::resp_seq(Rw::Id2, rw);
                domain = t;
            }
            k => {
                let other = random_type(rng, 2);
                let (d, out) = random_comb(rng, &other, 2);
                let sum = k < 4;
                let combine = |a, b| if sum { Comb::plus(a, b) } else { Comb::times(a, b) };
                let ty = |a, b| if sum { Ty::sum(a, b) } else { Ty::prod(a, b) };
                let resp = if sum { Rw::resp_plus } else { Rw::resp_times };
                if k % 2 == 0 {
                    comb = combine(comb, d);
                    rw = resp(rw, Rw::Id2);
                    domain = ty(domain, other);
                    codomain = ty(codomain, out);
                } else {
                    comb = combine(d, comb);
                    rw = resp(Rw::Id2, rw);
                    domain = ty(other, domain);
                    codomain = ty(out, codomain);
                }
            }
        }
    }
    Contextual { rw, comb, domain }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::rule_registry;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn random_combs_are_well_typed() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..300 {
            let dom = random_type(&mut rng, 12);
            let (c, out) = random_comb(&mut rng, &dom, 7);
            assert!(c.depth() <= 7);
            check(&c, &dom, &out).unwrap_or_else(|e| panic!("{c} at {dom}: {e}"));
            assert_eq!(size(&dom), size(&out));
        }
    }

    #[test]
    fn random_isos_have_the_requested_type() {
        let mut rng = StdRng::seed_from_u64(8);
        for _ in 0..100 {
            let a = random_type(&mut rng, 6);
            let (_, b) = random_comb(&mut rng, &a, 4);
            let c = random_iso(&mut rng, &a, &b).unwrap();
            check(&c, &a, &b).unwrap();
        }
        assert!(random_iso(&mut rng, &Ty::One, &Ty::bool()).is_none());
    }

    #[test]
    fn every_rule_can_be_instantiated() {
        let mut rng = StdRng::seed_from_u64(9);
        for r in rule_registry() {
            let inst = instantiate_rule(&mut rng, r, 8)
                .unwrap_or_else(|| panic!("no instance of {}", r.name));
            assert!(size(&inst.domain) <= 8);
        }
    }
}
