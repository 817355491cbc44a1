//! secat, relcat, cat and the complexity invariants, computed by walking
//! the Ganea tower up to a cap.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::tower::{fibre, GaneaTower};
use crate::hcat::{HcatResult, HomotopyCategory, MapRef, ObjRef};

pub const DEFAULT_CAP: usize = 4;

/// A computed value, or the cap below which no stage succeeded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InvariantValue {
    Finite(usize),
    OverCap(usize),
}

impl InvariantValue {
    pub fn finite(self) -> Option<usize> {
        match self {
            InvariantValue::Finite(n) => Some(n),
            InvariantValue::OverCap(_) => None,
        }
    }
}

impl fmt::Display for InvariantValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvariantValue::Finite(n) => write!(f, "{n}"),
            InvariantValue::OverCap(c) => write!(f, "OVER_CAP({c})"),
        }
    }
}

/// A finite value always carries the section that realizes it.
#[derive(Clone, Debug)]
pub struct InvariantResult {
    pub value: InvariantValue,
    pub cap: usize,
    pub witness: Option<MapRef>,
    pub trace: Vec<String>,
}

impl InvariantResult {
    pub fn finite(&self) -> Option<usize> {
        self.value.finite()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Sectional,
    Relative,
}

fn walk<H: HomotopyCategory + ?Sized>(
    h: &mut H,
    tower: &mut GaneaTower,
    cap: usize,
    kind: Kind,
) -> HcatResult<InvariantResult> {
    let mut trace = Vec::new();
    for n in 0..=cap {
        tower.extend_to(h, n)?;
        let stage = *tower.stage(n);
        let found = match kind {
            Kind::Sectional => h.has_section(stage.g)?,
            Kind::Relative => h.has_rel_section(stage.g, tower.iota, stage.alpha)?,
        };
        let what = if kind == Kind::Sectional { "section" } else { "relative section" };
        let verdict = if found.is_some() { "found" } else { "absent" };
        trace.push(format!("stage {n}: {} -> {}: {what} {verdict}", h.label(stage.object), h.label(tower.iota.tgt)));
        if let Some(sigma) = found {
            return Ok(InvariantResult {
                value: InvariantValue::Finite(n),
                cap,
                witness: Some(sigma),
                trace,
            });
        }
    }
    Ok(InvariantResult {
        value: InvariantValue::OverCap(cap),
        cap,
        witness: None,
        trace,
    })
}

/// Least `n ≤ cap` such that `g_n` has a homotopy section.
pub fn secat<H: HomotopyCategory + ?Sized>(h: &mut H, iota: MapRef, cap: usize) -> HcatResult<InvariantResult> {
    let mut tower = GaneaTower::new(h, iota)?;
    walk(h, &mut tower, cap, Kind::Sectional)
}

/// Least `n ≤ cap` such that `g_n` has a section `σ` with `σ ∘ ι ≃ α_n`.
pub fn relcat<H: HomotopyCategory + ?Sized>(h: &mut H, iota: MapRef, cap: usize) -> HcatResult<InvariantResult> {
    let mut tower = GaneaTower::new(h, iota)?;
    walk(h, &mut tower, cap, Kind::Relative)
}

/// Both invariants over an already built (and possibly extended) tower.
pub fn secat_on<H: HomotopyCategory + ?Sized>(
    h: &mut H,
    tower: &mut GaneaTower,
    cap: usize,
) -> HcatResult<InvariantResult> {
    walk(h, tower, cap, Kind::Sectional)
}

pub fn relcat_on<H: HomotopyCategory + ?Sized>(
    h: &mut H,
    tower: &mut GaneaTower,
    cap: usize,
) -> HcatResult<InvariantResult> {
    walk(h, tower, cap, Kind::Relative)
}

/// `cat(X) = secat(∗ → X)`.
pub fn cat<H: HomotopyCategory + ?Sized>(h: &mut H, x: ObjRef, cap: usize) -> HcatResult<InvariantResult> {
    let z = h.zero();
    let point = h.zero_map(z, x)?;
    secat(h, point, cap)
}

/// `cat(f)` for `f: Y → X`: the sectional category of the homotopy fibre
/// inclusion `F → Y`.
pub fn cat_map<H: HomotopyCategory + ?Sized>(h: &mut H, f: MapRef, cap: usize) -> HcatResult<InvariantResult> {
    let fib = fibre(h, f)?;
    secat(h, fib.pr_a, cap)
}

/// The diagonal `X → X × X`.
pub fn diagonal<H: HomotopyCategory + ?Sized>(h: &mut H, x: ObjRef) -> HcatResult<MapRef> {
    let prod = h.product(x, x)?;
    let id = h.identity(x)?;
    h.pair(&prod, id, id)
}

/// `δ₁(ι) = (ι, id): A → X × A`.
pub fn first_delta<H: HomotopyCategory + ?Sized>(h: &mut H, iota: MapRef) -> HcatResult<MapRef> {
    let prod = h.product(iota.tgt, iota.src)?;
    let id = h.identity(iota.src)?;
    h.pair(&prod, iota, id)
}

/// `compl(X) = secat(Δ)`.
pub fn compl_obj<H: HomotopyCategory + ?Sized>(h: &mut H, x: ObjRef, cap: usize) -> HcatResult<InvariantResult> {
    let delta = diagonal(h, x)?;
    secat(h, delta, cap)
}

/// `compl(ι) = secat(δ₁(ι))`.
pub fn compl_map<H: HomotopyCategory + ?Sized>(h: &mut H, iota: MapRef, cap: usize) -> HcatResult<InvariantResult> {
    let delta = first_delta(h, iota)?;
    secat(h, delta, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{ChainComplex, ChainWorkspace};

    fn fin(r: HcatResult<InvariantResult>) -> usize {
        r.unwrap().finite().expect("finite")
    }

    #[test]
    fn identity_and_point() {
        let mut ws = ChainWorkspace::new();
        let x = ws.add_complex(ChainComplex::sphere(2), "S2");
        let id = ws.identity(x).unwrap();
        assert_eq!(fin(secat(&mut ws, id, 4)), 0);
        assert_eq!(fin(relcat(&mut ws, id, 4)), 0);
        assert_eq!(fin(cat(&mut ws, x, 4)), 1);
        let z = ws.zero();
        assert_eq!(fin(cat(&mut ws, z, 4)), 0);
        // cat(id_X) = cat(X); a null map factors through g_0
        assert_eq!(fin(cat_map(&mut ws, id, 4)), 1);
        let null = ws.zero_map(x, x).unwrap();
        assert_eq!(fin(cat_map(&mut ws, null, 4)), 0);
        assert_eq!(fin(compl_obj(&mut ws, z, 4)), 0);
    }

    #[test]
    fn collapse_of_a_sphere() {
        // a relative section of S² → 0 would make S² contractible
        let mut ws = ChainWorkspace::new();
        let x = ws.add_complex(ChainComplex::sphere(2), "S2");
        let z = ws.zero();
        let collapse = ws.zero_map(x, z).unwrap();
        assert_eq!(fin(secat(&mut ws, collapse, 4)), 0);
        assert_eq!(fin(relcat(&mut ws, collapse, 4)), 1);
    }

    #[test]
    fn cap_zero_reports_over_cap() {
        let mut ws = ChainWorkspace::new();
        let x = ws.add_complex(ChainComplex::sphere(2), "S2");
        let r = cat(&mut ws, x, 0).unwrap();
        assert_eq!(r.value, InvariantValue::OverCap(0));
        assert!(r.witness.is_none());
        assert_eq!(r.value.to_string(), "OVER_CAP(0)");
    }

    #[test]
    fn complexity_of_a_sphere_model() {
        let mut ws = ChainWorkspace::new();
        let x = ws.add_complex(ChainComplex::sphere(3), "S3");
        assert_eq!(fin(compl_obj(&mut ws, x, 4)), 1);
        let id = ws.identity(x).unwrap();
        assert_eq!(fin(compl_map(&mut ws, id, 4)), 1);
        let z = ws.zero();
        let point = ws.zero_map(z, x).unwrap();
        assert_eq!(fin(compl_map(&mut ws, point, 4)), fin(cat(&mut ws, x, 4)));
    }

    #[test]
    fn witness_is_a_section() {
        let mut ws = ChainWorkspace::new();
        let x = ws.add_complex(ChainComplex::sphere(1), "S1");
        let r = cat(&mut ws, x, 4).unwrap();
        let sigma = r.witness.unwrap();
        assert_eq!(sigma.src, x);
        assert_eq!(r.trace.len(), 2);
    }
}
