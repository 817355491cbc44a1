//! The `secat-facts v1` text format.
//!
//! ```text
//! secat-facts v1
//! object S2
//! object S3
//! object CP2
//! map h : S3 -> S2
//! cofibre_of CP2 h
//! assert cat S2 = 1 source hopf-example
//! assert cat CP2 = 2 source hopf-example
//! ```
//!
//! Assertions take `= n`, `>= n`, `<= n` or `in LO HI` (with `HI` possibly
//! `inf`), and an optional `source TAG`. `#` starts a comment.

use super::facts::{BaseMode, Domination, FactBase, Relation};
use super::{BoundsError, BoundsResult, Interval, Invariant};

pub const FACTS_HEADER: &str = "secat-facts v1";

fn err(line: usize, msg: impl Into<String>) -> BoundsError {
    BoundsError::Parse { line, msg: msg.into() }
}

struct Args<'a> {
    words: Vec<&'a str>,
    line: usize,
    facts: &'a FactBase,
}

impl Args<'_> {
    fn len(&self) -> usize {
        self.words.len()
    }

    fn entity(&self, i: usize) -> BoundsResult<usize> {
        let w = self.words.get(i).ok_or_else(|| err(self.line, "missing argument"))?;
        self.facts
            .lookup(w)
            .ok_or_else(|| err(self.line, format!("unknown entity {w}")))
    }

    fn number(&self, i: usize) -> BoundsResult<u32> {
        let w = self.words.get(i).ok_or_else(|| err(self.line, "missing number"))?;
        w.parse().map_err(|_| err(self.line, format!("expected a number, got {w}")))
    }

    fn word(&self, i: usize) -> BoundsResult<&str> {
        self.words.get(i).copied().ok_or_else(|| err(self.line, "missing argument"))
    }

    fn arity(&self, min: usize, max: usize) -> BoundsResult<()> {
        if self.len() < min || self.len() > max {
            return Err(err(self.line, format!("expected {min}..{max} arguments, got {}", self.len())));
        }
        Ok(())
    }
}

fn parse_relation(head: &str, a: &Args) -> BoundsResult<Option<Relation>> {
    let fixed = |n: usize| a.arity(n, n);
    let r = match head {
        "zero" => {
            fixed(1)?;
            Relation::Zero { object: a.entity(0)? }
        }
        "equivalence" => {
            fixed(1)?;
            Relation::Equivalence { map: a.entity(0)? }
        }
        "section" => {
            fixed(1)?;
            Relation::Section { map: a.entity(0)? }
        }
        "cofibre_of" => {
            a.arity(2, 3)?;
            Relation::CofibreOf {
                cofibre: a.entity(0)?,
                map: a.entity(1)?,
                inclusion: if a.len() == 3 { Some(a.entity(2)?) } else { None },
            }
        }
        "fibre_of" => {
            fixed(2)?;
            Relation::FibreOf {
                inclusion: a.entity(0)?,
                map: a.entity(1)?,
            }
        }
        "diagonal_of" => {
            fixed(3)?;
            Relation::DiagonalOf {
                diagonal: a.entity(0)?,
                object: a.entity(1)?,
                arity: a.number(2)?,
            }
        }
        "power_of" => {
            fixed(3)?;
            Relation::PowerOf {
                power: a.entity(0)?,
                object: a.entity(1)?,
                exponent: a.number(2)?,
            }
        }
        "product_of" => {
            fixed(3)?;
            Relation::ProductOf {
                product: a.entity(0)?,
                left: a.entity(1)?,
                right: a.entity(2)?,
            }
        }
        "suspension_of" => {
            fixed(2)?;
            Relation::SuspensionOf {
                suspension: a.entity(0)?,
                object: a.entity(1)?,
            }
        }
        "pinch_of" => {
            fixed(2)?;
            Relation::PinchOf {
                pinch: a.entity(0)?,
                suspension: a.entity(1)?,
            }
        }
        "ganea_alpha" | "ganea_beta" | "ganea_g" | "delta_of" | "epsilon_of" => {
            fixed(3)?;
            let (m, iota, stage) = (a.entity(0)?, a.entity(1)?, a.number(2)?);
            match head {
                "ganea_alpha" => Relation::GaneaAlpha { alpha: m, iota, stage },
                "ganea_beta" => Relation::GaneaBeta { beta: m, iota, stage },
                "ganea_g" => Relation::GaneaG { g: m, iota, stage },
                "delta_of" => Relation::DeltaOf { delta: m, iota, stage },
                _ => Relation::EpsilonOf { epsilon: m, iota, stage },
            }
        }
        "dominated_by" => {
            fixed(3)?;
            let mode = match a.word(2)? {
                "simple" => Domination::Simple,
                "relative" => Domination::Relative,
                w => return Err(err(a.line, format!("domination mode must be simple or relative, got {w}"))),
            };
            Relation::DominatedBy {
                dominated: a.entity(0)?,
                dominant: a.entity(1)?,
                mode,
            }
        }
        "pushout_of" => {
            fixed(2)?;
            Relation::PushoutOf {
                pushout: a.entity(0)?,
                map: a.entity(1)?,
            }
        }
        "factors_through" => {
            fixed(2)?;
            Relation::FactorsThrough {
                map: a.entity(0)?,
                through: a.entity(1)?,
            }
        }
        "pullback_square" => {
            fixed(2)?;
            Relation::PullbackSquare {
                pulled: a.entity(0)?,
                map: a.entity(1)?,
            }
        }
        "change_of_base" => {
            fixed(3)?;
            let mode = match a.word(2)? {
                "section" => BaseMode::Section,
                "equivalence" => BaseMode::Equivalence,
                w => return Err(err(a.line, format!("base mode must be section or equivalence, got {w}"))),
            };
            Relation::ChangeOfBase {
                top: a.entity(0)?,
                bottom: a.entity(1)?,
                mode,
            }
        }
        "cone_step" => {
            a.arity(2, 3)?;
            let sectioned = match a.words.get(2) {
                None => false,
                Some(&"sectioned") => true,
                Some(w) => return Err(err(a.line, format!("expected `sectioned`, got {w}"))),
            };
            Relation::ConeStep {
                cone: a.entity(0)?,
                base: a.entity(1)?,
                sectioned,
            }
        }
        _ => return Ok(None),
    };
    Ok(Some(r))
}

fn parse_interval(words: &[&str], line: usize) -> BoundsResult<(Interval, usize)> {
    let num = |i: usize| -> BoundsResult<u32> {
        let w = words.get(i).ok_or_else(|| err(line, "missing value"))?;
        w.parse().map_err(|_| err(line, format!("expected a number, got {w}")))
    };
    let op = words.first().ok_or_else(|| err(line, "missing comparison"))?;
    Ok(match *op {
        "=" => (Interval::point(num(1)?), 2),
        ">=" => (Interval::at_least(num(1)?), 2),
        "<=" => (Interval::at_most(num(1)?), 2),
        "in" => {
            let lo = num(1)?;
            let hi = match words.get(2) {
                Some(&"inf") => None,
                _ => Some(num(2)?),
            };
            (Interval::new(lo, hi), 3)
        }
        w => return Err(err(line, format!("expected =, >=, <= or in, got {w}"))),
    })
}

/// Parses a facts file into a fact base; assertions are kept in order and
/// applied when the engine loads the base.
pub fn parse_facts(text: &str) -> BoundsResult<FactBase> {
    let mut facts = FactBase::new();
    let mut saw_header = false;
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if !saw_header {
            if body != FACTS_HEADER {
                return Err(err(line, format!("expected header `{FACTS_HEADER}`")));
            }
            saw_header = true;
            continue;
        }
        let words: Vec<&str> = body.split_whitespace().collect();
        let at = |e: BoundsError| match e {
            BoundsError::InvalidFacts(m) => err(line, m),
            other => other,
        };
        match words[0] {
            "object" => {
                if words.len() != 2 {
                    return Err(err(line, "expected `object NAME`"));
                }
                facts.declare_object(words[1]).map_err(at)?;
            }
            "map" => {
                let [_, name, ":", src, "->", tgt] = words[..] else {
                    return Err(err(line, "expected `map NAME : SRC -> TGT`"));
                };
                let s = facts.lookup(src).ok_or_else(|| err(line, format!("unknown entity {src}")))?;
                let t = facts.lookup(tgt).ok_or_else(|| err(line, format!("unknown entity {tgt}")))?;
                facts.declare_map(name, s, t).map_err(at)?;
            }
            "assert" => {
                if words.len() < 4 {
                    return Err(err(line, "expected `assert INVARIANT ENTITY OP VALUE`"));
                }
                let inv = Invariant::parse(words[1]).ok_or_else(|| err(line, format!("unknown invariant {}", words[1])))?;
                let key = facts.key_by_name(inv, words[2]).map_err(|e| err(line, e.to_string()))?;
                let (interval, used) = parse_interval(&words[3..], line)?;
                let rest = &words[3 + used..];
                let source = match rest {
                    [] => "asserted".to_string(),
                    ["source", tag] => tag.to_string(),
                    _ => return Err(err(line, "trailing words; expected `source TAG`")),
                };
                facts.push_assertion(super::facts::Assertion { key, interval, source });
            }
            head => {
                let args = Args {
                    words: words[1..].to_vec(),
                    line,
                    facts: &facts,
                };
                let rel = parse_relation(head, &args)?.ok_or_else(|| err(line, format!("unknown directive {head}")))?;
                facts.relate(rel).map_err(at)?;
            }
        }
    }
    if !saw_header {
        return Err(err(1, format!("expected header `{FACTS_HEADER}`")));
    }
    Ok(facts)
}

impl FactBase {
    /// The relation as a facts-file line.
    pub fn relation_text(&self, r: &Relation) -> String {
        let n = |e: usize| self.name(e).to_string();
        let args: Vec<String> = match *r {
            Relation::Zero { object } => vec![n(object)],
            Relation::Equivalence { map } | Relation::Section { map } => vec![n(map)],
            Relation::CofibreOf { cofibre, map, inclusion } => {
                let mut v = vec![n(cofibre), n(map)];
                v.extend(inclusion.map(n));
                v
            }
            Relation::FibreOf { inclusion, map } => vec![n(inclusion), n(map)],
            Relation::DiagonalOf { diagonal, object, arity } => vec![n(diagonal), n(object), arity.to_string()],
            Relation::PowerOf { power, object, exponent } => vec![n(power), n(object), exponent.to_string()],
            Relation::ProductOf { product, left, right } => vec![n(product), n(left), n(right)],
            Relation::SuspensionOf { suspension, object } => vec![n(suspension), n(object)],
            Relation::PinchOf { pinch, suspension } => vec![n(pinch), n(suspension)],
            Relation::GaneaAlpha { alpha: m, iota, stage }
            | Relation::GaneaBeta { beta: m, iota, stage }
            | Relation::GaneaG { g: m, iota, stage }
            | Relation::DeltaOf { delta: m, iota, stage }
            | Relation::EpsilonOf { epsilon: m, iota, stage } => vec![n(m), n(iota), stage.to_string()],
            Relation::DominatedBy { dominated, dominant, mode } => {
                let m = if mode == Domination::Simple { "simple" } else { "relative" };
                vec![n(dominated), n(dominant), m.to_string()]
            }
            Relation::PushoutOf { pushout, map } => vec![n(pushout), n(map)],
            Relation::FactorsThrough { map, through } => vec![n(map), n(through)],
            Relation::PullbackSquare { pulled, map } => vec![n(pulled), n(map)],
            Relation::ChangeOfBase { top, bottom, mode } => {
                let m = if mode == BaseMode::Section { "section" } else { "equivalence" };
                vec![n(top), n(bottom), m.to_string()]
            }
            Relation::ConeStep { cone, base, sectioned } => {
                let mut v = vec![n(cone), n(base)];
                if sectioned {
                    v.push("sectioned".into());
                }
                v
            }
        };
        format!("{} {}", r.name(), args.join(" "))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{FACTS_HEADER}\n");
        for e in self.entities() {
            match e.kind {
                super::EntityKind::Object => out.push_str(&format!("object {}\n", e.name)),
                super::EntityKind::Map { src, tgt } => {
                    out.push_str(&format!("map {} : {} -> {}\n", e.name, self.name(src), self.name(tgt)))
                }
            }
        }
        for r in self.relations() {
            out.push_str(&self.relation_text(r));
            out.push('\n');
        }
        for a in self.assertions() {
            let iv = a.interval;
            let cmp = match iv.hi {
                Some(h) if h == iv.lo => format!("= {h}"),
                Some(h) if iv.lo == 0 => format!("<= {h}"),
                None => format!(">= {}", iv.lo),
                Some(h) => format!("in {} {h}", iv.lo),
            };
            out.push_str(&format!(
                "assert {} {} {cmp} source {}\n",
                a.key.invariant,
                self.name(a.key.entity),
                a.source
            ));
        }
        out
    }
}
