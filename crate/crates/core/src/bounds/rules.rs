//! The rule catalog and its instantiation on a fact base.
//!
//! Every rule is a set of monotone constraints between keys. Equalities are
//! two inequalities. The catalog is static; instances depend only on the
//! declared entities and relations, never on current intervals.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::facts::{BaseMode, Domination, EntityId, FactBase, Relation};
use super::{Interval, Invariant, Key};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RuleId {
    Takens,
    Domination,
    Pushout,
    CofibreFloor,
    JoinPullback,
    CofibreCeiling,
    ConeStep,
    CofibreDifference,
    GaneaStages,
    BaseChange,
    Factorization,
    Schwarz,
    ComplexitySandwich,
    ComplexityTakens,
    StrongFloor,
    Suspension,
    Equivalence,
    /// Identities that hold by definition, such as `compl(X) = secat(Δ)`.
    Definition,
}

impl RuleId {
    pub const NUMBERED: [RuleId; 17] = [
        RuleId::Takens,
        RuleId::Domination,
        RuleId::Pushout,
        RuleId::CofibreFloor,
        RuleId::JoinPullback,
        RuleId::CofibreCeiling,
        RuleId::ConeStep,
        RuleId::CofibreDifference,
        RuleId::GaneaStages,
        RuleId::BaseChange,
        RuleId::Factorization,
        RuleId::Schwarz,
        RuleId::ComplexitySandwich,
        RuleId::ComplexityTakens,
        RuleId::StrongFloor,
        RuleId::Suspension,
        RuleId::Equivalence,
    ];

    pub fn code(self) -> String {
        match RuleId::NUMBERED.iter().position(|&r| r == self) {
            Some(i) => format!("R{}", i + 1),
            None => "DEF".to_string(),
        }
    }

    /// Accepts `R8`, `r8` or `DEF`.
    pub fn parse(s: &str) -> Option<RuleId> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("def") {
            return Some(RuleId::Definition);
        }
        let n: usize = s.strip_prefix(['R', 'r'])?.parse().ok()?;
        RuleId::NUMBERED.get(n.checked_sub(1)?).copied()
    }

    pub fn info(self) -> &'static RuleInfo {
        CATALOG.iter().find(|r| r.id == self).expect("every rule is catalogued")
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code())
    }
}

#[derive(Debug)]
pub struct RuleInfo {
    pub id: RuleId,
    pub name: &'static str,
    pub statement: &'static str,
    /// The result the rule encodes and a phrase locating it.
    pub source: &'static str,
    pub anchor: &'static str,
}

static CATALOG: [RuleInfo; 18] = [
    RuleInfo {
        id: RuleId::Takens,
        name: "Takens chain",
        statement: "secat ≤ relcat ≤ Pushcat ≤ Relcat ≤ secat+1; pointed: cat ≤ Cat ≤ cat+1",
        source: "Thm. takens",
        anchor: "an enhancement of a classical result of F.~Takens",
    },
    RuleInfo {
        id: RuleId::Domination,
        name: "domination",
        statement: "simply dominated: secat ≤; relatively dominated: relcat ≤ (and secat ≤)",
        source: "Cor. catdominated",
        anchor: "simply (respectively:  relatively) dominated",
    },
    RuleInfo {
        id: RuleId::Pushout,
        name: "pushout",
        statement: "relcat(κ_S) ≤ relcat(ι_X), Relcat(κ_S) ≤ Relcat(ι_X)",
        source: "Lemma cylsomme",
        anchor: "consider the homotopy pushout",
    },
    RuleInfo {
        id: RuleId::CofibreFloor,
        name: "cofibre floor",
        statement: "A → X → C a cofibration: cat(C) ≤ relcat(X,A), Cat(C) ≤ Relcat(X,A)",
        source: "Cor. minorecatcofibre",
        anchor: "let $A\\to X\\to C$ be a homotopy cofibration",
    },
    RuleInfo {
        id: RuleId::JoinPullback,
        name: "join/pullback",
        statement: "a pulled-back map has relcat and Relcat ≤; fibre f: F → E of E → B: relcat(f) ≤ cat(B), Relcat(f) ≤ Cat(B)",
        source: "Lemma jointmagique",
        anchor: "consider the following join construction",
    },
    RuleInfo {
        id: RuleId::CofibreCeiling,
        name: "cofibre ceiling",
        statement: "Y → A → X a cofibration: Relcat(ι_X) ≤ 1",
        source: "Prop. cylcofibre",
        anchor: "Given a homotopy cofibration sequence",
    },
    RuleInfo {
        id: RuleId::ConeStep,
        name: "cone step",
        statement: "relcat(ι_C) ≤ relcat(ι_X)+1, Pushcat(ι_C) ≤ Pushcat(ι_X)+1; with a section: Relcat(ι_C) ≤ Relcat(ι_X)+1",
        source: "Prop. relcatcone, Lemmas pushcone and cylcone",
        anchor: "${\\rm relcat}\\,(\\iota_C)\\leq {\\rm relcat}\\,(\\iota_X)+1$",
    },
    RuleInfo {
        id: RuleId::CofibreDifference,
        name: "cofibre difference",
        statement: "cat(X) < cat(C) ⇒ secat(ι) = cat(X), relcat(ι) = cat(C) = cat(X)+1",
        source: "Cor. cofdiff",
        anchor: "with homotopy cofibre $C$",
    },
    RuleInfo {
        id: RuleId::GaneaStages,
        name: "Ganea stages",
        statement: "relcat(α_i) = min(i, relcat ι); secat(β_i) = min(i, secat ι); relcat(β_i) = min(i+1, relcat ι); \
                    min(i, secat ι) ≤ secat(α_i); relcat(α_{i+1}) ≤ relcat(β_i); pointed: cat(g_i) = min(i, cat X)",
        source: "Prop. cornea, Thm. secatganea, Cors. lastbutnotleast, relcatganea, secatfibreganea",
        anchor: "We are now ready to enhance",
    },
    RuleInfo {
        id: RuleId::BaseChange,
        name: "base change",
        statement: "section on the base map ⇒ secat(ι_X) ≤ secat(κ_Y); pullback ⇒ secat(κ_Y) ≤ secat(ι_X); equivalences ⇒ equal",
        source: "Prop. inegalitespaires",
        anchor: "If $f$ has a homotopy section",
    },
    RuleInfo {
        id: RuleId::Factorization,
        name: "factorization",
        statement: "κ factors through ι ⇒ secat(ι) ≤ secat(κ); secat(X,A) ≤ cat(X)",
        source: "Prop. secatbut",
        anchor: "factors through $\\iota_X\\colon A \\to X$ up to homotopy",
    },
    RuleInfo {
        id: RuleId::Schwarz,
        name: "category of a map",
        statement: "cat(f) = secat(Y,F) for the homotopy fibre F → Y of f",
        source: "Prop. svarc",
        anchor: "factors through $g_n\\colon G_n(X) \\to X$",
    },
    RuleInfo {
        id: RuleId::ComplexitySandwich,
        name: "complexity sandwich",
        statement: "cat(X) ≤ compl(ι) ≤ compl(X) ≤ cat(X×X); cat(X^i) ≤ secat(δ_i) ≤ secat(ε_i) ≤ secat(Δ_{i+1}) ≤ cat(X^{i+1})",
        source: "Prop. catsecat, Cor. ineqcompl",
        anchor: "cat(X^i) \\leq secat(\\delta_i(\\iota_X))",
    },
    RuleInfo {
        id: RuleId::ComplexityTakens,
        name: "complexity Takens chain",
        statement: "compl ≤ relcompl ≤ Pushcompl ≤ Compl ≤ compl+1",
        source: "Prop. takenscompl",
        anchor: "all the variants of complexity can only differ by 1",
    },
    RuleInfo {
        id: RuleId::StrongFloor,
        name: "strong floor",
        statement: "Cat(X^i) ≤ Relcat(δ_i) ≤ Relcat(ε_i) ≤ Relcat(Δ_{i+1}); Cat(X) ≤ Compl(X)",
        source: "Prop. CatRelcat",
        anchor: "other lower bound of the strong complexity",
    },
    RuleInfo {
        id: RuleId::Suspension,
        name: "suspension",
        statement: "Compl(ΣX) ≤ 2; Relcat(pinch) ≤ 1",
        source: "Thm. complsusp, Lemma complpinch",
        anchor: "${\\rm Compl}\\,(\\Sigma X) \\leq 2$",
    },
    RuleInfo {
        id: RuleId::Equivalence,
        name: "equivalence",
        statement: "equivalence ⇒ secat = relcat = Pushcat = Relcat = 0; section ⇒ secat = 0; zero object ⇒ all object invariants 0",
        source: "remarks on Defs. LSganea and strongsecat",
        anchor: "iff $\\iota_X$ is a homotopy equivalence",
    },
    RuleInfo {
        id: RuleId::Definition,
        name: "definitions",
        statement: "compl family of X = invariants of Δ: X → X×X; compl(ι) = secat(δ_1 ι); \
                    for ∗ → X: secat = relcat = cat(X), Pushcat = Relcat = Cat(X)",
        source: "Defs. compl and LSganea",
        anchor: "sectional category of the diagonal map",
    },
];

/// The seventeen numbered rule groups followed by the definitional links.
pub fn rule_catalog() -> &'static [RuleInfo] {
    &CATALOG
}

/// A single interval update proposed by a constraint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Bound {
    Lo(Key, i64),
    Hi(Key, i64),
}

impl Bound {
    pub fn key(&self) -> Key {
        match *self {
            Bound::Lo(k, _) | Bound::Hi(k, _) => k,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Constraint {
    /// `lhs ≤ rhs + offset`.
    Le { lhs: Key, rhs: Key, offset: i64 },
    AtMost { key: Key, value: u32 },
    /// `key = min(cap, other + plus)`.
    MinEq { key: Key, cap: u32, other: Key, plus: u32 },
    /// `min(cap, other + plus) ≤ key`.
    MinLe { key: Key, cap: u32, other: Key, plus: u32 },
    /// Applies `then` once `below < above` is certain.
    Guarded { below: Key, above: Key, then: Vec<Constraint> },
}

fn hi_of(iv: Interval) -> Option<i64> {
    iv.hi.map(i64::from)
}

impl Constraint {
    pub fn le(lhs: Key, rhs: Key) -> Constraint {
        Constraint::Le { lhs, rhs, offset: 0 }
    }

    /// Every key the constraint reads or writes.
    pub fn keys(&self) -> Vec<Key> {
        let mut out = match self {
            Constraint::Le { lhs, rhs, .. } => vec![*lhs, *rhs],
            Constraint::AtMost { key, .. } => vec![*key],
            Constraint::MinEq { key, other, .. } | Constraint::MinLe { key, other, .. } => vec![*key, *other],
            Constraint::Guarded { below, above, then } => {
                let mut v = vec![*below, *above];
                v.extend(then.iter().flat_map(|c| c.keys()));
                v
            }
        };
        out.sort_unstable();
        out.dedup();
        out
    }

    /// The bounds implied by the constraint in the state `at`.
    pub fn consequences(&self, at: &dyn Fn(Key) -> Interval) -> Vec<Bound> {
        let mut out = Vec::new();
        self.collect(at, &mut out);
        out
    }

    fn collect(&self, at: &dyn Fn(Key) -> Interval, out: &mut Vec<Bound>) {
        match self {
            &Constraint::Le { lhs, rhs, offset } => {
                if let Some(h) = hi_of(at(rhs)) {
                    out.push(Bound::Hi(lhs, h + offset));
                }
                out.push(Bound::Lo(rhs, i64::from(at(lhs).lo) - offset));
            }
            &Constraint::AtMost { key, value } => out.push(Bound::Hi(key, i64::from(value))),
            &Constraint::MinEq { key, cap, other, plus } | &Constraint::MinLe { key, cap, other, plus } => {
                let (cap, plus) = (i64::from(cap), i64::from(plus));
                let (k, o) = (at(key), at(other));
                out.push(Bound::Lo(key, cap.min(i64::from(o.lo) + plus)));
                // below the cap the minimum is attained by the second argument
                if let Some(h) = hi_of(k) {
                    if h < cap {
                        out.push(Bound::Hi(other, h - plus));
                    }
                }
                if matches!(self, Constraint::MinEq { .. }) {
                    let h = hi_of(o).map_or(cap, |h| cap.min(h + plus));
                    out.push(Bound::Hi(key, h));
                    if i64::from(k.lo) <= cap {
                        out.push(Bound::Lo(other, i64::from(k.lo) - plus));
                    } else {
                        // key above its own cap: no value of `other` works
                        out.push(Bound::Hi(key, cap));
                    }
                }
            }
            Constraint::Guarded { below, above, then } => {
                if let Some(h) = at(*below).hi {
                    if h < at(*above).lo {
                        for c in then {
                            c.collect(at, out);
                        }
                    }
                }
            }
        }
    }

    pub fn describe(&self, facts: &FactBase) -> String {
        let k = |key: Key| facts.key_label(key);
        match self {
            &Constraint::Le { lhs, rhs, offset } => match offset {
                0 => format!("{} ≤ {}", k(lhs), k(rhs)),
                o if o > 0 => format!("{} ≤ {} + {o}", k(lhs), k(rhs)),
                o => format!("{} ≤ {} - {}", k(lhs), k(rhs), -o),
            },
            &Constraint::AtMost { key, value } => format!("{} ≤ {value}", k(key)),
            &Constraint::MinEq { key, cap, other, plus } => format!("{} = {}", k(key), min_text(cap, &k(other), plus)),
            &Constraint::MinLe { key, cap, other, plus } => format!("{} ≤ {}", min_text(cap, &k(other), plus), k(key)),
            Constraint::Guarded { below, above, then } => {
                let parts: Vec<String> = then.iter().map(|c| c.describe(facts)).collect();
                format!("{} < {} ⇒ {}", k(*below), k(*above), parts.join(", "))
            }
        }
    }
}

fn min_text(cap: u32, other: &str, plus: u32) -> String {
    if plus == 0 {
        format!("min({cap}, {other})")
    } else {
        format!("min({cap}, {other} + {plus})")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleInstance {
    pub rule: RuleId,
    pub constraint: Constraint,
}

struct Out {
    items: Vec<RuleInstance>,
}

impl Out {
    fn push(&mut self, rule: RuleId, constraint: Constraint) {
        let inst = RuleInstance { rule, constraint };
        if !self.items.contains(&inst) {
            self.items.push(inst);
        }
    }

    fn le(&mut self, rule: RuleId, lhs: Key, rhs: Key) {
        self.push(rule, Constraint::le(lhs, rhs));
    }

    fn eq(&mut self, rule: RuleId, a: Key, b: Key) {
        self.le(rule, a, b);
        self.le(rule, b, a);
    }

    fn at_most(&mut self, rule: RuleId, key: Key, value: u32) {
        self.push(rule, Constraint::AtMost { key, value });
    }
}

/// All rule instances for the fact base. Relation-driven instances come
/// first, in relation order, then the per-entity ones.
pub fn instantiate(facts: &FactBase) -> Vec<RuleInstance> {
    use Invariant::*;
    let key = |inv: Invariant, e: EntityId| Key::new(inv, e);
    let mut out = Out { items: Vec::new() };
    let rels = facts.relations();

    for r in rels {
        match *r {
            Relation::Zero { object } => {
                for inv in [Cat, StrongCat, Compl, Relcompl, Pushcompl, StrongCompl] {
                    out.at_most(RuleId::Equivalence, key(inv, object), 0);
                }
            }
            Relation::Equivalence { map } => {
                for inv in [Secat, Relcat, Pushcat, StrongRelcat] {
                    out.at_most(RuleId::Equivalence, key(inv, map), 0);
                }
            }
            Relation::Section { map } => out.at_most(RuleId::Equivalence, key(Secat, map), 0),
            Relation::CofibreOf { cofibre, map, inclusion } => {
                out.le(RuleId::CofibreFloor, key(Cat, cofibre), key(Relcat, map));
                out.le(RuleId::CofibreFloor, key(StrongCat, cofibre), key(StrongRelcat, map));
                let x = facts.tgt(map);
                let (cat_x, cat_c) = (key(Cat, x), key(Cat, cofibre));
                out.push(
                    RuleId::CofibreDifference,
                    Constraint::Guarded {
                        below: cat_x,
                        above: cat_c,
                        then: vec![
                            Constraint::le(key(Secat, map), cat_x),
                            Constraint::le(cat_x, key(Secat, map)),
                            Constraint::le(key(Relcat, map), cat_c),
                            Constraint::le(cat_c, key(Relcat, map)),
                            Constraint::Le { lhs: cat_c, rhs: cat_x, offset: 1 },
                            Constraint::Le { lhs: cat_x, rhs: cat_c, offset: -1 },
                        ],
                    },
                );
                if let Some(q) = inclusion {
                    out.at_most(RuleId::CofibreCeiling, key(StrongRelcat, q), 1);
                }
            }
            Relation::FibreOf { inclusion, map } => {
                out.eq(RuleId::Schwarz, key(CatMap, map), key(Secat, inclusion));
                let base = facts.tgt(map);
                out.le(RuleId::JoinPullback, key(Relcat, inclusion), key(Cat, base));
                out.le(RuleId::JoinPullback, key(StrongRelcat, inclusion), key(StrongCat, base));
            }
            Relation::DiagonalOf { diagonal, object, arity } => {
                if arity == 2 {
                    out.eq(RuleId::Definition, key(Compl, object), key(Secat, diagonal));
                    out.eq(RuleId::Definition, key(Relcompl, object), key(Relcat, diagonal));
                    out.eq(RuleId::Definition, key(Pushcompl, object), key(Pushcat, diagonal));
                    out.eq(RuleId::Definition, key(StrongCompl, object), key(StrongRelcat, diagonal));
                }
                for p in facts.powers(object, arity) {
                    out.le(RuleId::ComplexitySandwich, key(Secat, diagonal), key(Cat, p));
                }
            }
            Relation::PowerOf { power, object, exponent: 2 } => {
                out.le(RuleId::ComplexitySandwich, key(Compl, object), key(Cat, power));
            }
            Relation::PowerOf { .. } => {}
            Relation::ProductOf { product, left, right } => {
                if left == right {
                    out.le(RuleId::ComplexitySandwich, key(Compl, left), key(Cat, product));
                }
            }
            Relation::SuspensionOf { suspension, .. } => {
                out.at_most(RuleId::Suspension, key(StrongCompl, suspension), 2);
            }
            Relation::PinchOf { pinch, .. } => out.at_most(RuleId::Suspension, key(StrongRelcat, pinch), 1),
            Relation::GaneaAlpha { alpha, iota, stage } => {
                out.push(
                    RuleId::GaneaStages,
                    Constraint::MinEq {
                        key: key(Relcat, alpha),
                        cap: stage,
                        other: key(Relcat, iota),
                        plus: 0,
                    },
                );
                out.push(
                    RuleId::GaneaStages,
                    Constraint::MinLe {
                        key: key(Secat, alpha),
                        cap: stage,
                        other: key(Secat, iota),
                        plus: 0,
                    },
                );
                for s in rels {
                    if let Relation::GaneaBeta { beta, iota: i2, stage: j } = *s {
                        if i2 == iota && j + 1 == stage {
                            out.le(RuleId::GaneaStages, key(Relcat, alpha), key(Relcat, beta));
                        }
                    }
                }
            }
            Relation::GaneaBeta { beta, iota, stage } => {
                out.push(
                    RuleId::GaneaStages,
                    Constraint::MinEq {
                        key: key(Secat, beta),
                        cap: stage,
                        other: key(Secat, iota),
                        plus: 0,
                    },
                );
                out.push(
                    RuleId::GaneaStages,
                    Constraint::MinEq {
                        key: key(Relcat, beta),
                        cap: stage + 1,
                        other: key(Relcat, iota),
                        plus: 0,
                    },
                );
                out.le(RuleId::GaneaStages, key(Relcat, beta), key(Relcat, iota));
            }
            Relation::GaneaG { g, iota, stage } => {
                if facts.is_zero(facts.src(iota)) {
                    out.push(
                        RuleId::GaneaStages,
                        Constraint::MinEq {
                            key: key(CatMap, g),
                            cap: stage,
                            other: key(Cat, facts.tgt(iota)),
                            plus: 0,
                        },
                    );
                }
            }
            Relation::DeltaOf { delta, iota, stage } => {
                let x = facts.tgt(iota);
                for p in facts.powers(x, stage) {
                    out.le(RuleId::ComplexitySandwich, key(Cat, p), key(Secat, delta));
                    out.le(RuleId::StrongFloor, key(StrongCat, p), key(StrongRelcat, delta));
                }
                if stage == 1 {
                    out.eq(RuleId::Definition, key(ComplMap, iota), key(Secat, delta));
                }
                let epsilons: Vec<EntityId> = rels
                    .iter()
                    .filter_map(|s| match *s {
                        Relation::EpsilonOf { epsilon, iota: i2, stage: j } if i2 == iota && j == stage => Some(epsilon),
                        _ => None,
                    })
                    .collect();
                for &e in &epsilons {
                    out.le(RuleId::ComplexitySandwich, key(Secat, delta), key(Secat, e));
                    out.le(RuleId::StrongFloor, key(StrongRelcat, delta), key(StrongRelcat, e));
                }
                for d in diagonals(facts, x, stage + 1) {
                    out.le(RuleId::ComplexitySandwich, key(Secat, delta), key(Secat, d));
                    out.le(RuleId::StrongFloor, key(StrongRelcat, delta), key(StrongRelcat, d));
                }
            }
            Relation::EpsilonOf { epsilon, iota, stage } => {
                for d in diagonals(facts, facts.tgt(iota), stage + 1) {
                    out.le(RuleId::ComplexitySandwich, key(Secat, epsilon), key(Secat, d));
                    out.le(RuleId::StrongFloor, key(StrongRelcat, epsilon), key(StrongRelcat, d));
                }
            }
            Relation::DominatedBy { dominated, dominant, mode } => {
                out.le(RuleId::Domination, key(Secat, dominated), key(Secat, dominant));
                if mode == Domination::Relative {
                    out.le(RuleId::Domination, key(Relcat, dominated), key(Relcat, dominant));
                }
            }
            Relation::PushoutOf { pushout, map } => {
                out.le(RuleId::Pushout, key(Relcat, pushout), key(Relcat, map));
                out.le(RuleId::Pushout, key(StrongRelcat, pushout), key(StrongRelcat, map));
            }
            Relation::FactorsThrough { map, through } => {
                out.le(RuleId::Factorization, key(Secat, through), key(Secat, map));
            }
            Relation::PullbackSquare { pulled, map } => {
                out.le(RuleId::BaseChange, key(Secat, pulled), key(Secat, map));
                out.le(RuleId::JoinPullback, key(Relcat, pulled), key(Relcat, map));
                out.le(RuleId::JoinPullback, key(StrongRelcat, pulled), key(StrongRelcat, map));
            }
            Relation::ChangeOfBase { top, bottom, mode } => {
                out.le(RuleId::BaseChange, key(Secat, bottom), key(Secat, top));
                if mode == BaseMode::Equivalence {
                    out.le(RuleId::BaseChange, key(Secat, top), key(Secat, bottom));
                }
            }
            Relation::ConeStep { cone, base, sectioned } => {
                let plus_one = |inv| Constraint::Le {
                    lhs: key(inv, cone),
                    rhs: key(inv, base),
                    offset: 1,
                };
                out.push(RuleId::ConeStep, plus_one(Relcat));
                out.push(RuleId::ConeStep, plus_one(Pushcat));
                if sectioned {
                    out.push(RuleId::ConeStep, plus_one(StrongRelcat));
                }
            }
        }
    }

    for (id, e) in facts.entities().iter().enumerate() {
        if e.is_map() {
            let x = facts.tgt(id);
            out.le(RuleId::Takens, key(Secat, id), key(Relcat, id));
            out.le(RuleId::Takens, key(Relcat, id), key(Pushcat, id));
            out.le(RuleId::Takens, key(Pushcat, id), key(StrongRelcat, id));
            out.push(
                RuleId::Takens,
                Constraint::Le {
                    lhs: key(StrongRelcat, id),
                    rhs: key(Secat, id),
                    offset: 1,
                },
            );
            out.le(RuleId::Factorization, key(Secat, id), key(Cat, x));
            out.le(RuleId::ComplexitySandwich, key(Cat, x), key(ComplMap, id));
            out.le(RuleId::ComplexitySandwich, key(ComplMap, id), key(Compl, x));
            if facts.is_zero(facts.src(id)) {
                out.eq(RuleId::Definition, key(Secat, id), key(Cat, x));
                out.eq(RuleId::Definition, key(Relcat, id), key(Cat, x));
                out.eq(RuleId::Definition, key(Pushcat, id), key(StrongCat, x));
                out.eq(RuleId::Definition, key(StrongRelcat, id), key(StrongCat, x));
            }
        } else {
            out.le(RuleId::Takens, key(Cat, id), key(StrongCat, id));
            out.push(
                RuleId::Takens,
                Constraint::Le {
                    lhs: key(StrongCat, id),
                    rhs: key(Cat, id),
                    offset: 1,
                },
            );
            out.le(RuleId::ComplexityTakens, key(Compl, id), key(Relcompl, id));
            out.le(RuleId::ComplexityTakens, key(Relcompl, id), key(Pushcompl, id));
            out.le(RuleId::ComplexityTakens, key(Pushcompl, id), key(StrongCompl, id));
            out.push(
                RuleId::ComplexityTakens,
                Constraint::Le {
                    lhs: key(StrongCompl, id),
                    rhs: key(Compl, id),
                    offset: 1,
                },
            );
            out.le(RuleId::StrongFloor, key(StrongCat, id), key(StrongCompl, id));
        }
    }
    out.items
}

fn diagonals(facts: &FactBase, object: EntityId, arity: u32) -> Vec<EntityId> {
    facts
        .relations()
        .iter()
        .filter_map(|r| match *r {
            Relation::DiagonalOf { diagonal, object: o, arity: a } if o == object && a == arity => Some(diagonal),
            _ => None,
        })
        .collect()
}
