//! Fixpoint propagation with recorded, replayable derivations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::facts::{Assertion, EntityId, FactBase, Relation};
use super::rules::{instantiate, Bound, Constraint, RuleId, RuleInstance};
use super::{BoundsError, BoundsResult, Interval, Invariant, Key};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Origin {
    Asserted { source: String },
    Rule { rule: RuleId },
}

/// A premise key, its interval when the rule fired, and the derivations
/// that had established that interval.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Premise {
    pub key: Key,
    pub interval: Interval,
    pub support: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derivation {
    pub id: usize,
    pub origin: Origin,
    pub statement: String,
    /// `None` for assertions.
    pub constraint: Option<Constraint>,
    pub premises: Vec<Premise>,
    pub conclusion: Bound,
}

impl Derivation {
    /// Re-evaluates the constraint on the recorded premises alone.
    pub fn replays(&self) -> bool {
        let Some(c) = &self.constraint else {
            return true;
        };
        let at = |k: Key| {
            self.premises
                .iter()
                .find(|p| p.key == k)
                .map_or(Interval::FULL, |p| p.interval)
        };
        c.consequences(&at).iter().any(|b| match (*b, self.conclusion) {
            (Bound::Lo(k, v), Bound::Lo(k2, v2)) => k == k2 && v >= v2,
            (Bound::Hi(k, v), Bound::Hi(k2, v2)) => k == k2 && v <= v2,
            _ => false,
        })
    }
}

#[derive(Clone, Copy, Debug)]
struct Slot {
    interval: Interval,
    lo_by: Option<usize>,
    hi_by: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixpoint {
    /// Full sweeps over the instances, including the final quiet one.
    pub passes: usize,
    pub instances: usize,
    pub derivations: usize,
}

#[derive(Clone, Debug)]
pub struct BoundsEngine {
    facts: FactBase,
    slots: BTreeMap<Key, Slot>,
    derivations: Vec<Derivation>,
    disabled: BTreeSet<RuleId>,
}

impl BoundsEngine {
    pub fn new() -> Self {
        BoundsEngine {
            facts: FactBase::new(),
            slots: BTreeMap::new(),
            derivations: Vec::new(),
            disabled: BTreeSet::new(),
        }
    }

    /// Loads a fact base, applying its assertions in order.
    pub fn from_facts(facts: FactBase) -> BoundsResult<Self> {
        let assertions = facts.assertions().to_vec();
        let mut bare = facts;
        bare.clear_assertions();
        let mut engine = BoundsEngine {
            facts: bare,
            ..BoundsEngine::new()
        };
        engine.sync_slots();
        for a in assertions {
            engine.assert_fact(a.key, a.interval, &a.source)?;
        }
        Ok(engine)
    }

    pub fn facts(&self) -> &FactBase {
        &self.facts
    }

    pub fn derivations(&self) -> &[Derivation] {
        &self.derivations
    }

    fn sync_slots(&mut self) {
        for k in self.facts.keys() {
            self.slots.entry(k).or_insert(Slot {
                interval: Interval::FULL,
                lo_by: None,
                hi_by: None,
            });
        }
    }

    pub fn declare_object(&mut self, name: &str) -> BoundsResult<EntityId> {
        let id = self.facts.declare_object(name)?;
        self.sync_slots();
        Ok(id)
    }

    pub fn declare_map(&mut self, name: &str, src: EntityId, tgt: EntityId) -> BoundsResult<EntityId> {
        let id = self.facts.declare_map(name, src, tgt)?;
        self.sync_slots();
        Ok(id)
    }

    pub fn relate(&mut self, r: Relation) -> BoundsResult<()> {
        self.facts.relate(r)
    }

    pub fn disable_rule(&mut self, rule: RuleId) {
        self.disabled.insert(rule);
    }

    pub fn disabled_rules(&self) -> impl Iterator<Item = RuleId> + '_ {
        self.disabled.iter().copied()
    }

    pub fn key(&self, invariant: Invariant, name: &str) -> BoundsResult<Key> {
        self.facts.key_by_name(invariant, name)
    }

    pub fn interval(&self, key: Key) -> BoundsResult<Interval> {
        self.slots
            .get(&key)
            .map(|s| s.interval)
            .ok_or_else(|| BoundsError::UnknownKey(format!("{}(#{})", key.invariant, key.entity)))
    }

    /// Meets `key` with `interval`. Conflicts are reported immediately.
    pub fn assert_fact(&mut self, key: Key, interval: Interval, source: &str) -> BoundsResult<()> {
        if !self.slots.contains_key(&key) {
            return Err(BoundsError::UnknownKey(self.facts.key_label(key)));
        }
        self.facts.push_assertion(Assertion {
            key,
            interval,
            source: source.to_string(),
        });
        let label = self.facts.key_label(key);
        let mut bounds = vec![Bound::Lo(key, i64::from(interval.lo))];
        if let Some(h) = interval.hi {
            bounds.push(Bound::Hi(key, i64::from(h)));
        }
        for b in bounds {
            let statement = format!("{label} ∈ {interval}");
            // a bound no tighter than the current one cannot clash with it
            if self.improves(b) {
                let origin = Origin::Asserted {
                    source: source.to_string(),
                };
                let id = self.record(origin, statement, None, b);
                self.commit(b, id)?;
            }
        }
        Ok(())
    }

    pub fn instances(&self) -> Vec<RuleInstance> {
        instantiate(&self.facts)
            .into_iter()
            .filter(|i| !self.disabled.contains(&i.rule))
            .collect()
    }

    pub fn propagate(&mut self) -> BoundsResult<Fixpoint> {
        let instances = self.instances();
        let order: Vec<usize> = (0..instances.len()).collect();
        self.run(&instances, &order)
    }

    /// Propagation with the instances visited in a seeded random order.
    pub fn propagate_shuffled(&mut self, seed: u64) -> BoundsResult<Fixpoint> {
        let instances = self.instances();
        let mut order: Vec<usize> = (0..instances.len()).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        self.run(&instances, &order)
    }

    fn ceiling(&self, instances: &[RuleInstance]) -> i64 {
        let mut top: i64 = 0;
        for a in self.facts.assertions() {
            top = top.max(i64::from(a.interval.lo)).max(a.interval.hi.map_or(0, i64::from));
        }
        for i in instances {
            let c = match &i.constraint {
                Constraint::AtMost { value, .. } => i64::from(*value),
                Constraint::MinEq { cap, plus, .. } | Constraint::MinLe { cap, plus, .. } => i64::from(cap + plus),
                _ => 0,
            };
            top = top.max(c);
        }
        // without a strictly increasing cycle no lower bound climbs past this
        top + 2 * self.slots.len() as i64 + 2
    }

    fn run(&mut self, instances: &[RuleInstance], order: &[usize]) -> BoundsResult<Fixpoint> {
        let ceiling = self.ceiling(instances);
        let mut passes = 0;
        loop {
            passes += 1;
            let mut changed = false;
            for &i in order {
                let inst = &instances[i];
                let bounds = {
                    let at = |k: Key| self.slots.get(&k).map_or(Interval::FULL, |s| s.interval);
                    inst.constraint.consequences(&at)
                };
                for b in bounds {
                    if !self.improves(b) {
                        continue;
                    }
                    let statement = inst.constraint.describe(&self.facts);
                    let id = self.record(Origin::Rule { rule: inst.rule }, statement, Some(inst.constraint.clone()), b);
                    self.commit(b, id)?;
                    changed = true;
                    if let Bound::Lo(k, v) = b {
                        if v > ceiling {
                            return Err(BoundsError::Inconsistent {
                                key: self.facts.key_label(k),
                                lo: v as u32,
                                hi: "inf".into(),
                                lo_trace: self.render(Some(id)),
                                hi_trace: "no finite value: the lower bound climbs along a strict cycle\n".into(),
                            });
                        }
                    }
                }
            }
            if !changed {
                return Ok(Fixpoint {
                    passes,
                    instances: instances.len(),
                    derivations: self.derivations.len(),
                });
            }
        }
    }

    fn improves(&self, b: Bound) -> bool {
        let Some(slot) = self.slots.get(&b.key()) else {
            return false;
        };
        match b {
            Bound::Lo(_, v) => v > i64::from(slot.interval.lo),
            Bound::Hi(_, v) => slot.interval.hi.is_none_or(|h| v < i64::from(h)),
        }
    }

    fn record(&mut self, origin: Origin, statement: String, constraint: Option<Constraint>, conclusion: Bound) -> usize {
        let premises = constraint
            .as_ref()
            .map(|c| {
                c.keys()
                    .into_iter()
                    .map(|k| {
                        let s = self.slots[&k];
                        Premise {
                            key: k,
                            interval: s.interval,
                            support: s.lo_by.into_iter().chain(s.hi_by).collect(),
                        }
                    })
                    .collect()
            })
            .unwrap_or_default();
        let id = self.derivations.len();
        self.derivations.push(Derivation {
            id,
            origin,
            statement,
            constraint,
            premises,
            conclusion,
        });
        id
    }

    fn commit(&mut self, b: Bound, id: usize) -> BoundsResult<()> {
        let key = b.key();
        let slot = self.slots.get_mut(&key).expect("bound on a declared key");
        match b {
            Bound::Lo(_, v) => {
                slot.interval.lo = v as u32;
                slot.lo_by = Some(id);
            }
            Bound::Hi(_, v) if v < 0 => {
                let s = *slot;
                return Err(BoundsError::Inconsistent {
                    key: self.facts.key_label(key),
                    lo: s.interval.lo,
                    hi: v.to_string(),
                    lo_trace: self.render(s.lo_by),
                    hi_trace: self.render(Some(id)),
                });
            }
            Bound::Hi(_, v) => {
                slot.interval.hi = Some(v as u32);
                slot.hi_by = Some(id);
            }
        }
        let s = *slot;
        if s.interval.is_empty() {
            return Err(BoundsError::Inconsistent {
                key: self.facts.key_label(key),
                lo: s.interval.lo,
                hi: s.interval.hi_text(),
                lo_trace: self.render(s.lo_by),
                hi_trace: self.render(s.hi_by),
            });
        }
        Ok(())
    }

    /// The current interval and its derivation tree.
    pub fn query(&self, invariant: Invariant, name: &str) -> BoundsResult<(Interval, String)> {
        let key = self.key(invariant, name)?;
        Ok((self.interval(key)?, self.explain(key)))
    }

    pub fn explain(&self, key: Key) -> String {
        let Some(slot) = self.slots.get(&key) else {
            return String::new();
        };
        let mut out = format!("{} = {}\n", self.facts.key_label(key), slot.interval);
        let mut seen = BTreeSet::new();
        for id in slot.lo_by.into_iter().chain(slot.hi_by) {
            self.render_into(id, 1, &mut seen, &mut out);
        }
        if slot.lo_by.is_none() && slot.hi_by.is_none() {
            out.push_str("  no applicable facts\n");
        }
        out
    }

    fn render(&self, id: Option<usize>) -> String {
        let mut out = String::new();
        match id {
            Some(id) => self.render_into(id, 0, &mut BTreeSet::new(), &mut out),
            None => out.push_str("default bound\n"),
        }
        out
    }

    fn render_into(&self, id: usize, depth: usize, seen: &mut BTreeSet<usize>, out: &mut String) {
        let d = &self.derivations[id];
        let pad = "  ".repeat(depth);
        let what = match d.conclusion {
            Bound::Lo(_, v) => format!("lo {v}"),
            Bound::Hi(_, v) => format!("hi {v}"),
        };
        let by = match &d.origin {
            Origin::Asserted { source } => format!("asserted ({source})"),
            Origin::Rule { rule } => format!("{rule} {}", rule.info().name),
        };
        if !seen.insert(id) {
            let _ = writeln!(out, "{pad}{what} by {by} [#{id}, see above]");
            return;
        }
        let _ = writeln!(out, "{pad}{what} by {by}: {} [#{id}]", d.statement);
        for p in &d.premises {
            if p.key == d.conclusion.key() && p.support.is_empty() {
                continue;
            }
            let _ = writeln!(out, "{pad}  {} was {}", self.facts.key_label(p.key), p.interval);
            for &s in &p.support {
                self.render_into(s, depth + 2, seen, out);
            }
        }
    }

    /// Every interval is nonempty and every derivation replays.
    pub fn check_consistency(&self) -> BoundsResult<usize> {
        for (k, s) in &self.slots {
            if s.interval.is_empty() {
                return Err(BoundsError::Inconsistent {
                    key: self.facts.key_label(*k),
                    lo: s.interval.lo,
                    hi: s.interval.hi_text(),
                    lo_trace: self.render(s.lo_by),
                    hi_trace: self.render(s.hi_by),
                });
            }
        }
        for d in &self.derivations {
            if !d.replays() {
                let k = d.conclusion.key();
                return Err(BoundsError::Inconsistent {
                    key: self.facts.key_label(k),
                    lo: self.slots[&k].interval.lo,
                    hi: self.slots[&k].interval.hi_text(),
                    lo_trace: format!("derivation #{} does not replay\n", d.id),
                    hi_trace: self.render(Some(d.id)),
                });
            }
        }
        Ok(self.derivations.len())
    }

    /// All keys and intervals, in key order.
    pub fn intervals(&self) -> Vec<(Key, Interval)> {
        self.slots.iter().map(|(k, s)| (*k, s.interval)).collect()
    }

    /// Keys whose interval is narrower than `[0, ∞]`.
    pub fn informative(&self) -> Vec<(Key, Interval)> {
        self.intervals().into_iter().filter(|(_, iv)| *iv != Interval::FULL).collect()
    }

    /// Rules with at least one recorded derivation.
    pub fn fired_rules(&self) -> BTreeSet<RuleId> {
        self.derivations
            .iter()
            .filter_map(|d| match d.origin {
                Origin::Rule { rule } => Some(rule),
                Origin::Asserted { .. } => None,
            })
            .collect()
    }

    /// Rules used anywhere in the derivation tree of `key`.
    pub fn rules_behind(&self, key: Key) -> BTreeSet<RuleId> {
        let mut out = BTreeSet::new();
        let mut stack: Vec<usize> = self
            .slots
            .get(&key)
            .map(|s| s.lo_by.into_iter().chain(s.hi_by).collect())
            .unwrap_or_default();
        let mut seen = BTreeSet::new();
        while let Some(id) = stack.pop() {
            if !seen.insert(id) {
                continue;
            }
            let d = &self.derivations[id];
            if let Origin::Rule { rule } = d.origin {
                out.insert(rule);
            }
            stack.extend(d.premises.iter().flat_map(|p| p.support.iter().copied()));
        }
        out
    }

    /// The rule that last tightened each end of `key`.
    pub fn last_rules(&self, key: Key) -> (Option<&Origin>, Option<&Origin>) {
        let s = self.slots.get(&key);
        let get = |id: Option<usize>| id.map(|i| &self.derivations[i].origin);
        (get(s.and_then(|s| s.lo_by)), get(s.and_then(|s| s.hi_by)))
    }
}

impl Default for BoundsEngine {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_objects() -> (BoundsEngine, EntityId) {
        let mut e = BoundsEngine::new();
        let a = e.declare_object("A").unwrap();
        let x = e.declare_object("X").unwrap();
        let f = e.declare_map("f", a, x).unwrap();
        (e, f)
    }

    #[test]
    fn fresh_database_is_consistent() {
        let (mut e, _) = two_objects();
        assert_eq!(e.check_consistency().unwrap(), 0);
        e.propagate().unwrap();
        assert!(e.informative().is_empty());
        let (iv, tree) = e.query(Invariant::Secat, "f").unwrap();
        assert_eq!(iv, Interval::FULL);
        assert!(tree.contains("no applicable facts"));
    }

    #[test]
    fn empty_assertion_is_inconsistent() {
        let (mut e, _) = two_objects();
        let k = e.key(Invariant::Cat, "X").unwrap();
        let err = e.assert_fact(k, Interval::new(3, Some(2)), "test").unwrap_err();
        assert!(matches!(err, BoundsError::Inconsistent { lo: 3, .. }), "{err}");
        assert!(err.to_string().starts_with("INCONSISTENT"));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let (e, _) = two_objects();
        assert!(matches!(e.key(Invariant::Cat, "Y"), Err(BoundsError::UnknownKey(_))));
        assert!(matches!(e.key(Invariant::Secat, "X"), Err(BoundsError::UnknownKey(_))));
        assert!(matches!(e.query(Invariant::Cat, "f"), Err(BoundsError::UnknownKey(_))));
    }

    #[test]
    fn weaker_assertions_record_nothing() {
        let (mut e, _) = two_objects();
        let k = e.key(Invariant::Cat, "X").unwrap();
        e.assert_fact(k, Interval::point(1), "a").unwrap();
        let n = e.derivations().len();
        e.assert_fact(k, Interval::new(0, Some(3)), "b").unwrap();
        assert_eq!(e.derivations().len(), n);
        assert_eq!(e.interval(k).unwrap(), Interval::point(1));
    }

    #[test]
    fn derivations_replay_and_trace_premises() {
        let (mut e, f) = two_objects();
        let cat_x = e.key(Invariant::Cat, "X").unwrap();
        e.assert_fact(cat_x, Interval::point(1), "test").unwrap();
        let fix = e.propagate().unwrap();
        assert!(fix.passes >= 2);
        assert!(e.check_consistency().unwrap() > 0);
        // secat(f) ≤ cat(X), then the Takens chain caps Relcat(f) at 2
        let secat = Key::new(Invariant::Secat, f);
        assert_eq!(e.interval(secat).unwrap(), Interval::at_most(1));
        let strong = Key::new(Invariant::StrongRelcat, f);
        assert_eq!(e.interval(strong).unwrap(), Interval::at_most(2));
        let behind = e.rules_behind(strong);
        assert!(behind.contains(&RuleId::Takens) && behind.contains(&RuleId::Factorization));
        let tree = e.explain(strong);
        assert!(tree.contains("cat(X) was [1,1]"), "{tree}");
        assert!(tree.contains("asserted (test)"), "{tree}");
    }

    #[test]
    fn propagation_is_idempotent() {
        let (mut e, _) = two_objects();
        let k = e.key(Invariant::Cat, "X").unwrap();
        e.assert_fact(k, Interval::point(2), "test").unwrap();
        e.propagate().unwrap();
        let n = e.derivations().len();
        let again = e.propagate().unwrap();
        assert_eq!(again.passes, 1);
        assert_eq!(e.derivations().len(), n);
    }

    #[test]
    fn self_referential_cone_is_harmless() {
        let mut e = BoundsEngine::new();
        let x = e.declare_object("X").unwrap();
        let c = e.declare_object("C").unwrap();
        let f = e.declare_map("f", x, c).unwrap();
        // relcat(f) ≤ relcat(f) + 1 narrows nothing
        e.relate(Relation::ConeStep { cone: f, base: f, sectioned: false }).unwrap();
        e.propagate().unwrap();
        assert_eq!(e.interval(Key::new(Invariant::Relcat, f)).unwrap(), Interval::FULL);
    }

    #[test]
    fn tampered_derivation_fails_replay() {
        let (mut e, f) = two_objects();
        let k = e.key(Invariant::Cat, "X").unwrap();
        e.assert_fact(k, Interval::point(1), "test").unwrap();
        e.propagate().unwrap();
        let secat = Key::new(Invariant::Secat, f);
        let id = e.slots[&secat].hi_by.unwrap();
        e.derivations[id].conclusion = Bound::Hi(secat, 0);
        assert!(matches!(e.check_consistency(), Err(BoundsError::Inconsistent { .. })));
    }
}
