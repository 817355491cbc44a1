//! Entities, structural relations and asserted intervals.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{BoundsError, BoundsResult, Interval, Invariant, Key};

pub type EntityId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EntityKind {
    Object,
    Map { src: EntityId, tgt: EntityId },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entity {
    pub name: String,
    pub kind: EntityKind,
}

impl Entity {
    pub fn is_map(&self) -> bool {
        matches!(self.kind, EntityKind::Map { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Domination {
    Simple,
    Relative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BaseMode {
    /// The comparison map of the bases has a homotopy section.
    Section,
    /// Both comparison maps are homotopy equivalences.
    Equivalence,
}

/// Structural facts. Map arguments come first where a relation is about a
/// map; field names give the role of each endpoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    /// The object is a zero object.
    Zero { object: EntityId },
    Equivalence { map: EntityId },
    Section { map: EntityId },
    /// `cofibre` is the homotopy cofibre of `map`, with `inclusion` the
    /// cofibre map `tgt(map) → cofibre` when declared.
    CofibreOf { cofibre: EntityId, map: EntityId, inclusion: Option<EntityId> },
    /// `inclusion: F → E` is the homotopy fibre of `map: E → B`.
    FibreOf { inclusion: EntityId, map: EntityId },
    /// `diagonal: X → X^arity`.
    DiagonalOf { diagonal: EntityId, object: EntityId, arity: u32 },
    PowerOf { power: EntityId, object: EntityId, exponent: u32 },
    ProductOf { product: EntityId, left: EntityId, right: EntityId },
    SuspensionOf { suspension: EntityId, object: EntityId },
    /// The pinch map `ΣX → ΣX ∨ ΣX`.
    PinchOf { pinch: EntityId, suspension: EntityId },
    GaneaAlpha { alpha: EntityId, iota: EntityId, stage: u32 },
    GaneaBeta { beta: EntityId, iota: EntityId, stage: u32 },
    GaneaG { g: EntityId, iota: EntityId, stage: u32 },
    DeltaOf { delta: EntityId, iota: EntityId, stage: u32 },
    EpsilonOf { epsilon: EntityId, iota: EntityId, stage: u32 },
    DominatedBy { dominated: EntityId, dominant: EntityId, mode: Domination },
    /// `pushout` is the base change of `map` along a homotopy pushout.
    PushoutOf { pushout: EntityId, map: EntityId },
    /// `map` factors through `through` up to homotopy (same target).
    FactorsThrough { map: EntityId, through: EntityId },
    /// `pulled` is the homotopy pullback of `map` along some base map.
    PullbackSquare { pulled: EntityId, map: EntityId },
    /// A homotopy commutative square from `top` to `bottom`.
    ChangeOfBase { top: EntityId, bottom: EntityId, mode: BaseMode },
    /// `cone` is obtained from `base` by one cone step; `sectioned` when
    /// the step's retraction has a section.
    ConeStep { cone: EntityId, base: EntityId, sectioned: bool },
}

impl Relation {
    pub fn name(&self) -> &'static str {
        match self {
            Relation::Zero { .. } => "zero",
            Relation::Equivalence { .. } => "equivalence",
            Relation::Section { .. } => "section",
            Relation::CofibreOf { .. } => "cofibre_of",
            Relation::FibreOf { .. } => "fibre_of",
            Relation::DiagonalOf { .. } => "diagonal_of",
            Relation::PowerOf { .. } => "power_of",
            Relation::ProductOf { .. } => "product_of",
            Relation::SuspensionOf { .. } => "suspension_of",
            Relation::PinchOf { .. } => "pinch_of",
            Relation::GaneaAlpha { .. } => "ganea_alpha",
            Relation::GaneaBeta { .. } => "ganea_beta",
            Relation::GaneaG { .. } => "ganea_g",
            Relation::DeltaOf { .. } => "delta_of",
            Relation::EpsilonOf { .. } => "epsilon_of",
            Relation::DominatedBy { .. } => "dominated_by",
            Relation::PushoutOf { .. } => "pushout_of",
            Relation::FactorsThrough { .. } => "factors_through",
            Relation::PullbackSquare { .. } => "pullback_square",
            Relation::ChangeOfBase { .. } => "change_of_base",
            Relation::ConeStep { .. } => "cone_step",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assertion {
    pub key: Key,
    pub interval: Interval,
    pub source: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactBase {
    entities: Vec<Entity>,
    #[serde(skip)]
    by_name: BTreeMap<String, EntityId>,
    relations: Vec<Relation>,
    assertions: Vec<Assertion>,
}

fn invalid(msg: impl Into<String>) -> BoundsError {
    BoundsError::InvalidFacts(msg.into())
}

impl FactBase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entities(&self) -> &[Entity] {
        &self.entities
    }

    pub fn entity(&self, id: EntityId) -> &Entity {
        &self.entities[id]
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn assertions(&self) -> &[Assertion] {
        &self.assertions
    }

    pub fn lookup(&self, name: &str) -> Option<EntityId> {
        self.by_name.get(name).copied()
    }

    pub fn name(&self, id: EntityId) -> &str {
        &self.entities[id].name
    }

    pub fn src(&self, map: EntityId) -> EntityId {
        match self.entities[map].kind {
            EntityKind::Map { src, .. } => src,
            EntityKind::Object => panic!("{} is not a map", self.entities[map].name),
        }
    }

    pub fn tgt(&self, map: EntityId) -> EntityId {
        match self.entities[map].kind {
            EntityKind::Map { tgt, .. } => tgt,
            EntityKind::Object => panic!("{} is not a map", self.entities[map].name),
        }
    }

    pub fn is_map(&self, id: EntityId) -> bool {
        self.entities[id].is_map()
    }

    fn add(&mut self, name: &str, kind: EntityKind) -> BoundsResult<EntityId> {
        if name.is_empty() || name.contains(char::is_whitespace) {
            return Err(invalid(format!("bad entity name `{name}`")));
        }
        if self.by_name.contains_key(name) {
            return Err(invalid(format!("{name} declared twice")));
        }
        let id = self.entities.len();
        self.entities.push(Entity {
            name: name.to_string(),
            kind,
        });
        self.by_name.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn declare_object(&mut self, name: &str) -> BoundsResult<EntityId> {
        self.add(name, EntityKind::Object)
    }

    pub fn declare_map(&mut self, name: &str, src: EntityId, tgt: EntityId) -> BoundsResult<EntityId> {
        for e in [src, tgt] {
            if e >= self.entities.len() || self.is_map(e) {
                return Err(invalid(format!("map {name}: endpoints must be declared objects")));
            }
        }
        self.add(name, EntityKind::Map { src, tgt })
    }

    /// The key for `invariant` on `entity`, if the arity matches.
    pub fn key(&self, invariant: Invariant, entity: EntityId) -> BoundsResult<Key> {
        if entity >= self.entities.len() {
            return Err(BoundsError::UnknownKey(format!("{invariant}(#{entity})")));
        }
        if invariant.on_objects() == self.is_map(entity) {
            return Err(BoundsError::UnknownKey(format!(
                "{invariant}({}): wrong kind of entity",
                self.name(entity)
            )));
        }
        Ok(Key::new(invariant, entity))
    }

    pub fn key_by_name(&self, invariant: Invariant, name: &str) -> BoundsResult<Key> {
        let id = self
            .lookup(name)
            .ok_or_else(|| BoundsError::UnknownKey(format!("{invariant}({name})")))?;
        self.key(invariant, id)
    }

    pub fn key_label(&self, key: Key) -> String {
        format!("{}({})", key.invariant, self.name(key.entity))
    }

    /// Every arity-correct key, in entity then invariant order.
    pub fn keys(&self) -> Vec<Key> {
        let mut out = Vec::new();
        for (id, e) in self.entities.iter().enumerate() {
            for inv in Invariant::ALL {
                if inv.on_objects() != e.is_map() {
                    out.push(Key::new(inv, id));
                }
            }
        }
        out
    }

    pub(crate) fn push_assertion(&mut self, a: Assertion) {
        self.assertions.push(a);
    }

    pub(crate) fn clear_assertions(&mut self) {
        self.assertions.clear();
    }

    pub fn relate(&mut self, r: Relation) -> BoundsResult<()> {
        self.check_relation(&r)?;
        if self.relations.contains(&r) {
            return Ok(());
        }
        self.relations.push(r);
        if let Err(e) = self.check_acyclic() {
            self.relations.pop();
            return Err(e);
        }
        Ok(())
    }

    fn need_object(&self, id: EntityId, rel: &str) -> BoundsResult<()> {
        if id >= self.entities.len() || self.is_map(id) {
            return Err(invalid(format!("{rel}: expected an object")));
        }
        Ok(())
    }

    fn need_map(&self, id: EntityId, rel: &str) -> BoundsResult<()> {
        if id >= self.entities.len() || !self.is_map(id) {
            return Err(invalid(format!("{rel}: expected a map")));
        }
        Ok(())
    }

    fn need(&self, ok: bool, rel: &str, what: &str) -> BoundsResult<()> {
        if ok {
            Ok(())
        } else {
            Err(invalid(format!("{rel}: {what}")))
        }
    }

    fn check_relation(&self, r: &Relation) -> BoundsResult<()> {
        let n = r.name();
        match *r {
            Relation::Zero { object } => self.need_object(object, n),
            Relation::Equivalence { map } | Relation::Section { map } => self.need_map(map, n),
            Relation::CofibreOf { cofibre, map, inclusion } => {
                self.need_object(cofibre, n)?;
                self.need_map(map, n)?;
                if let Some(q) = inclusion {
                    self.need_map(q, n)?;
                    self.need(
                        self.src(q) == self.tgt(map) && self.tgt(q) == cofibre,
                        n,
                        "the cofibre map must run from the target to the cofibre",
                    )?;
                }
                Ok(())
            }
            Relation::FibreOf { inclusion, map } => {
                self.need_map(inclusion, n)?;
                self.need_map(map, n)?;
                self.need(self.tgt(inclusion) == self.src(map), n, "the fibre must map into the source")
            }
            Relation::DiagonalOf { diagonal, object, arity } => {
                self.need_map(diagonal, n)?;
                self.need_object(object, n)?;
                self.need(arity >= 2, n, "arity must be at least 2")?;
                self.need(self.src(diagonal) == object, n, "the diagonal starts at the object")
            }
            Relation::PowerOf { power, object, exponent } => {
                self.need_object(power, n)?;
                self.need_object(object, n)?;
                self.need(exponent >= 1, n, "exponent must be positive")
            }
            Relation::ProductOf { product, left, right } => {
                self.need_object(product, n)?;
                self.need_object(left, n)?;
                self.need_object(right, n)
            }
            Relation::SuspensionOf { suspension, object } => {
                self.need_object(suspension, n)?;
                self.need_object(object, n)
            }
            Relation::PinchOf { pinch, suspension } => {
                self.need_map(pinch, n)?;
                self.need_object(suspension, n)?;
                self.need(self.src(pinch) == suspension, n, "the pinch starts at the suspension")
            }
            Relation::GaneaAlpha { alpha, iota, .. } => {
                self.need_map(alpha, n)?;
                self.need_map(iota, n)?;
                self.need(self.src(alpha) == self.src(iota), n, "alpha and iota share a source")
            }
            Relation::GaneaBeta { beta, iota, .. } => {
                self.need_map(beta, n)?;
                self.need_map(iota, n)
            }
            Relation::GaneaG { g, iota, .. } => {
                self.need_map(g, n)?;
                self.need_map(iota, n)?;
                self.need(self.tgt(g) == self.tgt(iota), n, "g and iota share a target")
            }
            Relation::DeltaOf { delta, iota, .. } => {
                self.need_map(delta, n)?;
                self.need_map(iota, n)?;
                self.need(self.src(delta) == self.src(iota), n, "delta and iota share a source")
            }
            Relation::EpsilonOf { epsilon, iota, .. } => {
                self.need_map(epsilon, n)?;
                self.need_map(iota, n)
            }
            Relation::DominatedBy { dominated, dominant, .. } => {
                self.need_map(dominated, n)?;
                self.need_map(dominant, n)?;
                self.need(self.src(dominated) == self.src(dominant), n, "both maps share a source")
            }
            Relation::PushoutOf { pushout, map } => {
                self.need_map(pushout, n)?;
                self.need_map(map, n)
            }
            Relation::FactorsThrough { map, through } => {
                self.need_map(map, n)?;
                self.need_map(through, n)?;
                self.need(self.tgt(map) == self.tgt(through), n, "both maps share a target")
            }
            Relation::PullbackSquare { pulled, map } => {
                self.need_map(pulled, n)?;
                self.need_map(map, n)
            }
            Relation::ChangeOfBase { top, bottom, .. } => {
                self.need_map(top, n)?;
                self.need_map(bottom, n)
            }
            Relation::ConeStep { cone, base, .. } => {
                self.need_map(cone, n)?;
                self.need_map(base, n)?;
                self.need(self.src(cone) == self.src(base), n, "both maps share a source")
            }
        }
    }

    /// Objects defined from other objects must not define themselves.
    fn check_acyclic(&self) -> BoundsResult<()> {
        let mut edges: Vec<(EntityId, EntityId)> = Vec::new();
        for r in &self.relations {
            match *r {
                Relation::CofibreOf { cofibre, map, .. } => {
                    edges.push((cofibre, self.src(map)));
                    edges.push((cofibre, self.tgt(map)));
                }
                Relation::PowerOf { power, object, exponent } if exponent >= 2 => edges.push((power, object)),
                Relation::ProductOf { product, left, right } => {
                    edges.push((product, left));
                    edges.push((product, right));
                }
                Relation::SuspensionOf { suspension, object } => edges.push((suspension, object)),
                _ => {}
            }
        }
        // 0 unvisited, 1 on stack, 2 done
        let mut state = vec![0u8; self.entities.len()];
        fn visit(v: EntityId, edges: &[(EntityId, EntityId)], state: &mut [u8]) -> Option<EntityId> {
            state[v] = 1;
            for &(a, b) in edges {
                if a != v {
                    continue;
                }
                if state[b] == 1 {
                    return Some(b);
                }
                if state[b] == 0 {
                    if let Some(c) = visit(b, edges, state) {
                        return Some(c);
                    }
                }
            }
            state[v] = 2;
            None
        }
        for v in 0..self.entities.len() {
            if state[v] == 0 {
                if let Some(c) = visit(v, &edges, &mut state) {
                    return Err(invalid(format!("{} is defined in terms of itself", self.name(c))));
                }
            }
        }
        Ok(())
    }

    /// Objects known to be the `exponent`-th power of `object`.
    pub fn powers(&self, object: EntityId, exponent: u32) -> Vec<EntityId> {
        let mut out = Vec::new();
        if exponent == 1 {
            out.push(object);
        }
        for r in &self.relations {
            match *r {
                Relation::PowerOf { power, object: o, exponent: e } if o == object && e == exponent => out.push(power),
                Relation::ProductOf { product, left, right } if exponent == 2 && left == object && right == object => {
                    out.push(product)
                }
                _ => {}
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn is_zero(&self, object: EntityId) -> bool {
        self.relations.contains(&Relation::Zero { object })
    }

    /// Rebuilds the name index after deserialization.
    pub fn reindex(&mut self) {
        self.by_name = self.entities.iter().enumerate().map(|(i, e)| (e.name.clone(), i)).collect();
    }
}
