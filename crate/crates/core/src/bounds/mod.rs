//! Interval propagation of the known inequalities between invariants.
//!
//! Objects and maps are declared with structural relations; every relation
//! instantiates rules as monotone interval constraints; propagation narrows
//! each `[lo, hi]` until nothing changes. Every narrowing is a
//! [`Derivation`] that can be replayed from its recorded premises.

mod engine;
mod facts;
mod rules;
mod text;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use engine::{BoundsEngine, Derivation, Fixpoint, Origin, Premise};
pub use facts::{Assertion, BaseMode, Domination, Entity, EntityId, EntityKind, FactBase, Relation};
pub use rules::{rule_catalog, Bound, Constraint, RuleId, RuleInfo, RuleInstance};
pub use text::{parse_facts, FACTS_HEADER};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum BoundsError {
    /// A key whose interval became empty, with the derivations of both ends.
    #[error("INCONSISTENT: {key} has lo {lo} > hi {hi}\n-- lower bound --\n{lo_trace}-- upper bound --\n{hi_trace}")]
    Inconsistent {
        key: String,
        lo: u32,
        hi: String,
        lo_trace: String,
        hi_trace: String,
    },
    #[error("UNKNOWN_KEY: {0}")]
    UnknownKey(String),
    #[error("INVALID_FACTS: {0}")]
    InvalidFacts(String),
    #[error("PARSE_ERROR line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type BoundsResult<T> = Result<T, BoundsError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Invariant {
    Secat,
    Relcat,
    Pushcat,
    StrongRelcat,
    Cat,
    StrongCat,
    Compl,
    Relcompl,
    Pushcompl,
    StrongCompl,
    ComplMap,
    CatMap,
}

impl Invariant {
    pub const ALL: [Invariant; 12] = [
        Invariant::Secat,
        Invariant::Relcat,
        Invariant::Pushcat,
        Invariant::StrongRelcat,
        Invariant::Cat,
        Invariant::StrongCat,
        Invariant::Compl,
        Invariant::Relcompl,
        Invariant::Pushcompl,
        Invariant::StrongCompl,
        Invariant::ComplMap,
        Invariant::CatMap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Invariant::Secat => "secat",
            Invariant::Relcat => "relcat",
            Invariant::Pushcat => "Pushcat",
            Invariant::StrongRelcat => "Relcat",
            Invariant::Cat => "cat",
            Invariant::StrongCat => "Cat",
            Invariant::Compl => "compl",
            Invariant::Relcompl => "relcompl",
            Invariant::Pushcompl => "Pushcompl",
            Invariant::StrongCompl => "Compl",
            Invariant::ComplMap => "compl_map",
            Invariant::CatMap => "cat_map",
        }
    }

    pub fn parse(s: &str) -> Option<Invariant> {
        Invariant::ALL.into_iter().find(|i| i.name() == s)
    }

    /// Object invariants; the rest take a map.
    pub fn on_objects(self) -> bool {
        matches!(
            self,
            Invariant::Cat
                | Invariant::StrongCat
                | Invariant::Compl
                | Invariant::Relcompl
                | Invariant::Pushcompl
                | Invariant::StrongCompl
        )
    }
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Key {
    pub invariant: Invariant,
    pub entity: EntityId,
}

impl Key {
    pub fn new(invariant: Invariant, entity: EntityId) -> Key {
        Key { invariant, entity }
    }
}

/// `[lo, hi]` over ℕ; `hi = None` is ∞.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub lo: u32,
    pub hi: Option<u32>,
}

impl Interval {
    pub const FULL: Interval = Interval { lo: 0, hi: None };

    pub fn new(lo: u32, hi: Option<u32>) -> Interval {
        Interval { lo, hi }
    }

    pub fn point(v: u32) -> Interval {
        Interval { lo: v, hi: Some(v) }
    }

    pub fn at_least(v: u32) -> Interval {
        Interval { lo: v, hi: None }
    }

    pub fn at_most(v: u32) -> Interval {
        Interval { lo: 0, hi: Some(v) }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self.hi, Some(h) if h < self.lo)
    }

    pub fn is_point(&self) -> bool {
        self.hi == Some(self.lo)
    }

    pub fn contains(&self, v: u32) -> bool {
        v >= self.lo && self.hi.is_none_or(|h| v <= h)
    }

    pub fn meet(&self, other: &Interval) -> Interval {
        let hi = match (self.hi, other.hi) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, None) => a,
            (None, b) => b,
        };
        Interval {
            lo: self.lo.max(other.lo),
            hi,
        }
    }

    /// Is `self` at least as tight as `other` on both ends?
    pub fn within(&self, other: &Interval) -> bool {
        self.lo >= other.lo
            && match (self.hi, other.hi) {
                (_, None) => true,
                (Some(a), Some(b)) => a <= b,
                (None, Some(_)) => false,
            }
    }

    pub fn hi_text(&self) -> String {
        self.hi.map_or_else(|| "inf".to_string(), |h| h.to_string())
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.hi {
            Some(h) => write!(f, "[{},{}]", self.lo, h),
            None => write!(f, "[{},inf]", self.lo),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariant_names_round_trip() {
        for inv in Invariant::ALL {
            assert_eq!(Invariant::parse(inv.name()), Some(inv));
        }
        assert_eq!(Invariant::ALL.iter().filter(|i| i.on_objects()).count(), 6);
    }

    #[test]
    fn interval_meet_and_order() {
        let a = Interval::new(1, Some(3));
        let b = Interval::at_least(2);
        assert_eq!(a.meet(&b), Interval::new(2, Some(3)));
        assert!(a.meet(&b).within(&a));
        assert!(!Interval::FULL.within(&a));
        assert!(Interval::new(3, Some(2)).is_empty());
        assert_eq!(Interval::FULL.to_string(), "[0,inf]");
        assert_eq!(Interval::point(2).to_string(), "[2,2]");
    }
}
