use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use super::Pattern;
use crate::syntax::typing::{apply_prim, mismatch, render_terms, split, TyTerm, Unifier};
use crate::syntax::{Path, PathStep, Ty, TypeError};

/// Families of laws, each about one part of the structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Group {
    /// `+` and `*` distribute over `;`.
    Functor,
    Associativity,
    Distributivity,
    /// Identities, inverses, and `id + id`, `id * id`.
    Identity,
    Unit,
    Commutativity,
    UnitAssociativity,
    Zero,
    AssociativityDistributivity,
    CommutativityDistributivity,
}

impl Group {
    pub fn name(self) -> &'static str {
        match self {
            Group::Functor => "functor",
            Group::Associativity => "associativity",
            Group::Distributivity => "distributivity",
            Group::Identity => "identity",
            Group::Unit => "unit",
            Group::Commutativity => "commutativity",
            Group::UnitAssociativity => "unit-associativity",
            Group::Zero => "zero",
            Group::AssociativityDistributivity => "associativity-distributivity",
            Group::CommutativityDistributivity => "commutativity-distributivity",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Direction {
    #[serde(rename = "l2r")]
    LeftToRight,
    #[serde(rename = "r2l")]
    RightToLeft,
}

/// What a metavariable may be bound to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Role {
    Any,
    /// Only combinators of exactly this type.
    Fixed { input: Ty, output: Ty },
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Any => f.write_str("any"),
            Role::Fixed { input, output } => write!(f, "{input} <-> {output}"),
        }
    }
}

/// One direction of a law.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub name: String,
    /// The same law read the other way.
    pub partner_name: String,
    pub group: Group,
    /// 1-based position of the law within its group.
    pub law: usize,
    pub direction: Direction,
    pub lhs: Pattern,
    pub rhs: Pattern,
    pub roles: Vec<(String, Role)>,
}

impl Rule {
    /// Metavariables of both sides, left side first.
    pub fn metas(&self) -> Vec<String> {
        let mut out = self.lhs.metas();
        for m in self.rhs.metas() {
            if !out.contains(&m) {
                out.push(m);
            }
        }
        out
    }

    /// Metavariables that only the right side mentions.
    pub fn target_only_metas(&self) -> Vec<String> {
        let lhs = self.lhs.metas();
        self.rhs.metas().into_iter().filter(|m| !lhs.contains(m)).collect()
    }

    pub fn role(&self, meta: &str) -> Option<&Role> {
        self.roles.iter().find(|(m, _)| m == meta).map(|(_, r)| r)
    }

    pub fn partner(&self) -> &'static Rule {
        rule(&self.partner_name).expect("every rule has a registered partner")
    }

    pub fn record(&self) -> RuleRecord {
        RuleRecord {
            name: self.name.clone(),
            partner: self.partner_name.clone(),
            group: self.group,
            law: self.law,
            direction: self.direction,
            lhs: self.lhs.to_string(),
            rhs: self.rhs.to_string(),
            roles: self
                .roles
                .iter()
                .map(|(m, r)| (m.clone(), r.to_string()))
                .collect(),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} => {}", self.name, self.lhs, self.rhs)
    }
}

/// Serializable summary of a [`Rule`].
#[derive(Clone, Debug, Serialize)]
pub struct RuleRecord {
    pub name: String,
    pub partner: String,
    pub group: Group,
    pub law: usize,
    pub direction: Direction,
    pub lhs: String,
    pub rhs: String,
    pub roles: BTreeMap<String, String>,
}

struct Law {
    group: Group,
    forward: &'static str,
    backward: &'static str,
    lhs: &'static str,
    rhs: &'static str,
}

const fn law(
    group: Group,
    forward: &'static str,
    backward: &'static str,
    lhs: &'static str,
    rhs: &'static str,
) -> Law {
    Law {
        group,
        forward,
        backward,
        lhs,
        rhs,
    }
}

use Group::*;

#[rustfmt::skip]
const LAWS: &[Law] = &[
    law(Functor, "hom_plus_seq_l", "hom_plus_seq_r",
        "($a1 ; $a3) + ($a2 ; $a4)", "($a1 + $a2) ; ($a3 + $a4)"),
    law(Functor, "hom_times_seq_l", "hom_times_seq_r",
        "($a1 ; $a3) * ($a2 ; $a4)", "($a1 * $a2) ; ($a3 * $a4)"),

    law(Associativity, "assoc_seq_l", "assoc_seq_r",
        "$c1 ; ($c2 ; $c3)", "($c1 ; $c2) ; $c3"),
    law(Associativity, "assocl_plus_nat_l", "assocl_plus_nat_r",
        "($c1 + ($c2 + $c3)) ; assocl+", "assocl+ ; (($c1 + $c2) + $c3)"),
    law(Associativity, "assocl_times_nat_l", "assocl_times_nat_r",
        "($c1 * ($c2 * $c3)) ; assocl*", "assocl* ; (($c1 * $c2) * $c3)"),
    law(Associativity, "assocr_plus_nat_l", "assocr_plus_nat_r",
        "(($c1 + $c2) + $c3) ; assocr+", "assocr+ ; ($c1 + ($c2 + $c3))"),
    law(Associativity, "assocr_times_nat_l", "assocr_times_nat_r",
        "(($c1 * $c2) * $c3) ; assocr*", "assocr* ; ($c1 * ($c2 * $c3))"),
    law(Associativity, "pentagon_plus_l", "pentagon_plus_r",
        "assocr+ ; assocr+", "((assocr+ + id) ; assocr+) ; (id + assocr+)"),
    law(Associativity, "pentagon_times_l", "pentagon_times_r",
        "assocr* ; assocr*", "((assocr* * id) ; assocr*) ; (id * assocr*)"),

    law(Distributivity, "dist_nat_l", "dist_nat_r",
        "(($c1 + $c2) * $c3) ; dist", "dist ; (($c1 * $c3) + ($c2 * $c3))"),
    law(Distributivity, "distl_nat_l", "distl_nat_r",
        "($c1 * ($c2 + $c3)) ; distl", "distl ; (($c1 * $c2) + ($c1 * $c3))"),
    law(Distributivity, "factor_nat_l", "factor_nat_r",
        "(($c1 * $c3) + ($c2 * $c3)) ; factor", "factor ; (($c1 + $c2) * $c3)"),
    law(Distributivity, "factorl_nat_l", "factorl_nat_r",
        "(($c1 * $c2) + ($c1 * $c3)) ; factorl", "factorl ; ($c1 * ($c2 + $c3))"),

    law(Identity, "idl_seq_l", "idl_seq_r", "id ; $c0", "$c0"),
    law(Identity, "idr_seq_l", "idr_seq_r", "$c0 ; id", "$c0"),
    law(Identity, "linv_seq_l", "linv_seq_r", "$c0 ; !$c0", "id"),
    law(Identity, "rinv_seq_l", "rinv_seq_r", "!$c0 ; $c0", "id"),
    law(Identity, "id_plus_id_l", "id_plus_id_r", "id + id", "id"),
    law(Identity, "id_times_id_l", "id_times_id_r", "id * id", "id"),

    law(Unit, "unite_plus_l_nat_l", "unite_plus_l_nat_r",
        "unite+l ; $c3", "($c0 + $c3) ; unite+l"),
    law(Unit, "uniti_plus_l_nat_l", "uniti_plus_l_nat_r",
        "uniti+l ; ($c0 + $c3)", "$c3 ; uniti+l"),
    law(Unit, "unite_plus_r_nat_l", "unite_plus_r_nat_r",
        "unite+r ; $c3", "($c3 + $c0) ; unite+r"),
    law(Unit, "uniti_plus_r_nat_l", "uniti_plus_r_nat_r",
        "uniti+r ; ($c3 + $c0)", "$c3 ; uniti+r"),
    law(Unit, "unite_times_l_nat_l", "unite_times_l_nat_r",
        "unite*l ; $c3", "($c1 * $c3) ; unite*l"),
    law(Unit, "uniti_times_l_nat_l", "uniti_times_l_nat_r",
        "uniti*l ; ($c1 * $c3)", "$c3 ; uniti*l"),
    law(Unit, "unite_times_r_nat_l", "unite_times_r_nat_r",
        "unite*r ; $c3", "($c3 * $c1) ; unite*r"),
    law(Unit, "uniti_times_r_nat_l", "uniti_times_r_nat_r",
        "uniti*r ; ($c3 * $c1)", "$c3 ; uniti*r"),
    law(Unit, "unite_times_l_distl_l", "unite_times_l_distl_r",
        "unite*l", "distl ; (unite*l + unite*l)"),
    law(Unit, "unite_plus_l_swap_l", "unite_plus_l_swap_r",
        "unite+l", "swap+ ; unite+r"),
    law(Unit, "unite_times_l_swap_l", "unite_times_l_swap_r",
        "unite*l", "swap* ; unite*r"),

    law(Commutativity, "swapl_plus_nat", "swapr_plus_nat",
        "swap+ ; ($c1 + $c2)", "($c2 + $c1) ; swap+"),
    law(Commutativity, "swapl_times_nat", "swapr_times_nat",
        "swap* ; ($c1 * $c2)", "($c2 * $c1) ; swap*"),
    law(Commutativity, "hexagonr_plus_l", "hexagonr_plus_r",
        "(assocr+ ; swap+) ; assocr+", "((swap+ + id) ; assocr+) ; (id + swap+)"),
    law(Commutativity, "hexagonl_plus_l", "hexagonl_plus_r",
        "(assocl+ ; swap+) ; assocl+", "((id + swap+) ; assocl+) ; (swap+ + id)"),
    law(Commutativity, "hexagonr_times_l", "hexagonr_times_r",
        "(assocr* ; swap*) ; assocr*", "((swap* * id) ; assocr*) ; (id * swap*)"),
    law(Commutativity, "hexagonl_times_l", "hexagonl_times_r",
        "(assocl* ; swap*) ; assocl*", "((id * swap*) ; assocl*) ; (swap* * id)"),

    law(UnitAssociativity, "triangle_plus_l", "triangle_plus_r",
        "unite+r + id", "assocr+ ; (id + unite+l)"),
    law(UnitAssociativity, "triangle_times_l", "triangle_times_r",
        "unite*r * id", "assocr* ; (id * unite*l)"),

    law(Zero, "absorbl_nat_l", "absorbl_nat_r",
        "($c * id) ; absorbl", "absorbl ; id"),
    law(Zero, "absorbr_nat_l", "absorbr_nat_r",
        "(id * $c) ; absorbr", "absorbr ; id"),
    law(Zero, "factorzl_nat_l", "factorzl_nat_r",
        "id ; factorzl", "factorzl ; (id * $c)"),
    law(Zero, "factorzr_nat_l", "factorzr_nat_r",
        "id ; factorzr", "factorzr ; ($c * id)"),
    law(Zero, "absorbr_is_absorbl", "absorbl_is_absorbr",
        "absorbr", "absorbl"),
    law(Zero, "absorbr_distl_l", "absorbr_distl_r",
        "absorbr", "(distl ; (absorbr + absorbr)) ; unite+l"),
    law(Zero, "unite_times_r_absorbr_l", "unite_times_r_absorbr_r",
        "unite*r", "absorbr"),
    law(Zero, "absorbl_swap_l", "absorbl_swap_r",
        "absorbl", "swap* ; absorbr"),
    law(Zero, "absorbr_assocl_l", "absorbr_assocl_r",
        "absorbr", "(assocl* ; (absorbr * id)) ; absorbr"),
    law(Zero, "absorb_assocl_l", "absorb_assocl_r",
        "(id * absorbr) ; absorbl", "(assocl* ; (absorbl * id)) ; absorbr"),
    law(Zero, "distl_absorbl_l", "distl_absorbl_r",
        "id * unite+l", "(distl ; (absorbl + id)) ; unite+l"),

    law(AssociativityDistributivity, "assocl_plus_dist_l", "assocl_plus_dist_r",
        "((assocl+ * id) ; dist) ; (dist + id)", "(dist ; (id + dist)) ; assocl+"),
    law(AssociativityDistributivity, "assocl_times_distl_l", "assocl_times_distl_r",
        "assocl* ; distl", "((id * distl) ; distl) ; (assocl* + assocl*)"),
    law(AssociativityDistributivity, "dist_distl_l", "dist_distl_r",
        "(distl ; (dist + dist)) ; assocl+",
        "dist ; ((distl + distl) ; (assocl+ ; ((assocr+ + id) ; (((id + swap+) + id) ; (assocl+ + id)))))"),

    law(CommutativityDistributivity, "distl_swap_plus_l", "distl_swap_plus_r",
        "(id * swap+) ; distl", "distl ; swap+"),
    law(CommutativityDistributivity, "dist_swap_times_l", "dist_swap_times_r",
        "dist ; (swap* + swap*)", "swap* ; distl"),
];

fn roles_for(group: Group, metas: &[String]) -> Vec<(String, Role)> {
    metas
        .iter()
        .map(|m| {
            let role = match (group, m.as_str()) {
                (Unit, "c0") => Role::Fixed {
                    input: Ty::Zero,
                    output: Ty::Zero,
                },
                (Unit, "c1") => Role::Fixed {
                    input: Ty::One,
                    output: Ty::One,
                },
                _ => Role::Any,
            };
            (m.clone(), role)
        })
        .collect()
}

fn build() -> Vec<Rule> {
    let mut out = Vec::with_capacity(2 * LAWS.len());
    let mut position: BTreeMap<Group, usize> = BTreeMap::new();
    for l in LAWS {
        let n = position.entry(l.group).or_default();
        *n += 1;
        let lhs = Pattern::parse(l.lhs).expect("catalog patterns parse");
        let rhs = Pattern::parse(l.rhs).expect("catalog patterns parse");
        let mut metas = lhs.metas();
        for m in rhs.metas() {
            if !metas.contains(&m) {
                metas.push(m);
            }
        }
        let roles = roles_for(l.group, &metas);
        out.push(Rule {
            name: l.forward.to_string(),
            partner_name: l.backward.to_string(),
            group: l.group,
            law: *n,
            direction: Direction::LeftToRight,
            lhs: lhs.clone(),
            rhs: rhs.clone(),
            roles: roles.clone(),
        });
        out.push(Rule {
            name: l.backward.to_string(),
            partner_name: l.forward.to_string(),
            group: l.group,
            law: *n,
            direction: Direction::RightToLeft,
            lhs: rhs,
            rhs: lhs,
            roles,
        });
    }
    out
}

/// Every rule, both directions of each law, in catalog order.
pub fn rule_registry() -> &'static [Rule] {
    static RULES: OnceLock<Vec<Rule>> = OnceLock::new();
    RULES.get_or_init(build)
}

pub fn rule(name: &str) -> Option<&'static Rule> {
    rule_registry().iter().find(|r| r.name == name)
}

/// The most general typing of a rule: a domain, a codomain, and the type
/// of each metavariable, such that both sides are well-typed there.
#[derive(Clone, Debug)]
pub(crate) struct Schema {
    pub domain: TyTerm,
    pub codomain: TyTerm,
    pub metas: BTreeMap<String, (TyTerm, TyTerm)>,
}

fn pattern_term(
    p: &Pattern,
    dom: &TyTerm,
    u: &mut Unifier,
    metas: &mut BTreeMap<String, (TyTerm, TyTerm)>,
    path: &Path,
) -> Result<TyTerm, TypeError> {
    let mut meta_sig = |m: &String, u: &mut Unifier| {
        metas
            .entry(m.clone())
            .or_insert_with(|| (u.fresh(), u.fresh()))
            .clone()
    };
    match p {
        Pattern::Prim(q) => apply_prim(*q, dom, u, path),
        Pattern::Meta(m) | Pattern::AdjMeta(m) => {
            let (i, o) = meta_sig(m, u);
            let (i, o) = if matches!(p, Pattern::Meta(_)) { (i, o) } else { (o, i) };
            let before = u.zonk(dom);
            if !u.unify(dom, &i) {
                let want = u.zonk(&i);
                return Err(mismatch(u, path, &want, &before));
            }
            Ok(o)
        }
        Pattern::Seq(a, b) => {
            let mid = pattern_term(a, dom, u, metas, &path.child(PathStep::SeqLeft))?;
            pattern_term(b, &mid, u, metas, &path.child(PathStep::SeqRight))
        }
        Pattern::Plus(a, b) => {
            let (l, r) = split(dom, false, u, path)?;
            let l2 = pattern_term(a, &l, u, metas, &path.child(PathStep::PlusLeft))?;
            let r2 = pattern_term(b, &r, u, metas, &path.child(PathStep::PlusRight))?;
            Ok(TyTerm::sum(l2, r2))
        }
        Pattern::Times(a, b) => {
            let (l, r) = split(dom, true, u, path)?;
            let l2 = pattern_term(a, &l, u, metas, &path.child(PathStep::TimesLeft))?;
            let r2 = pattern_term(b, &r, u, metas, &path.child(PathStep::TimesRight))?;
            Ok(TyTerm::prod(l2, r2))
        }
    }
}

pub(crate) fn schema(rule: &Rule) -> Result<Schema, TypeError> {
    let mut u = Unifier::new();
    let mut metas = BTreeMap::new();
    for (m, role) in &rule.roles {
        if let Role::Fixed { input, output } = role {
            metas.insert(m.clone(), (input.into(), output.into()));
        }
    }
    let dom = u.fresh();
    let c1 = pattern_term(&rule.lhs, &dom, &mut u, &mut metas, &Path::root())?;
    let c2 = pattern_term(&rule.rhs, &dom, &mut u, &mut metas, &Path::root())?;
    let shown = [u.zonk(&c1), u.zonk(&c2)];
    if !u.unify(&c1, &c2) {
        let names = render_terms(&[&shown[0], &shown[1]]);
        return Err(TypeError::Codomain {
            expected: names[0].clone(),
            found: names[1].clone(),
        });
    }
    Ok(Schema {
        domain: u.zonk(&dom),
        codomain: u.zonk(&c1),
        metas: metas
            .into_iter()
            .map(|(m, (i, o))| (m, (u.zonk(&i), u.zonk(&o))))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_per_group() {
        let count = |g| rule_registry().iter().filter(|r| r.group == g).count();
        assert_eq!(count(Functor), 4);
        assert_eq!(count(Associativity), 14);
        assert_eq!(count(Distributivity), 8);
        assert_eq!(count(Identity), 12);
        assert_eq!(count(Unit), 22);
        assert_eq!(count(Commutativity), 12);
        assert_eq!(count(UnitAssociativity), 4);
        assert_eq!(count(Zero), 22);
        assert_eq!(count(AssociativityDistributivity), 6);
        assert_eq!(count(CommutativityDistributivity), 4);
        assert_eq!(rule_registry().len(), 108);
    }

    #[test]
    fn names_are_unique_and_partners_close() {
        let reg = rule_registry();
        for (i, r) in reg.iter().enumerate() {
            assert!(reg[i + 1..].iter().all(|s| s.name != r.name), "{}", r.name);
            let p = r.partner();
            assert_eq!(p.partner_name, r.name);
            assert_eq!(p.lhs, r.rhs);
            assert_eq!(p.rhs, r.lhs);
            assert_ne!(p.direction, r.direction);
        }
    }

    #[test]
    fn named_examples() {
        let r = rule("idl_seq_l").unwrap();
        assert_eq!(r.lhs.to_string(), "id ; $c0");
        assert_eq!(r.rhs.to_string(), "$c0");
        let r = rule("absorbr_is_absorbl").unwrap();
        assert_eq!((r.lhs.to_string(), r.rhs.to_string()), ("absorbr".into(), "absorbl".into()));
    }

    #[test]
    fn every_rule_has_a_principal_typing() {
        for r in rule_registry() {
            schema(r).unwrap_or_else(|e| panic!("{}: {e}", r.name));
        }
    }

    #[test]
    fn side_conditions_show_up_in_the_typing() {
        let s = schema(rule("absorbr_is_absorbl").unwrap()).unwrap();
        assert_eq!(s.domain, TyTerm::prod(TyTerm::Zero, TyTerm::Zero));
        let s = schema(rule("unite_times_r_absorbr_l").unwrap()).unwrap();
        assert_eq!(s.domain, TyTerm::prod(TyTerm::Zero, TyTerm::One));
    }
}
