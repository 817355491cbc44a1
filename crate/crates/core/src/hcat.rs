//! The backend contract: a pointed homotopy category with homotopy pushouts
//! and pullbacks, whisker maps and witnessed homotopies.
//!
//! Every square carries the homotopy that makes it commute; operations that
//! consume squares verify the witness first. Equality of maps is backend
//! equality, homotopy is the coarser relation decided by `is_homotopic`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HcatError {
    #[error("MISMATCH: {0}")]
    Mismatch(String),
    #[error("BAD_WITNESS: {0}")]
    BadWitness(String),
    #[error("INCOHERENT: {0}")]
    Incoherent(String),
    #[error("INVALID_COMPLEX: {0}")]
    InvalidComplex(String),
    #[error("INVALID_MAP: {0}")]
    InvalidMap(String),
    #[error("UNKNOWN_HANDLE: {0}")]
    UnknownHandle(String),
}

pub type HcatResult<T> = Result<T, HcatError>;

/// Handle to an object of a workspace. The display label lives in the
/// workspace (see [`HomotopyCategory::label`]).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ObjRef {
    pub id: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MapRef {
    pub id: usize,
    pub src: ObjRef,
    pub tgt: ObjRef,
}

/// A verified homotopy `lhs ≃ rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HomotopyWitness {
    pub id: usize,
    pub lhs: MapRef,
    pub rhs: MapRef,
}

/// ```text
///   Z --top--> A
///   |          |
///  left      right
///   v          v
///   B -bottom> P
/// ```
/// `witness` relates `right ∘ top` (lhs) and `bottom ∘ left` (rhs).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HSquare {
    pub top: MapRef,
    pub left: MapRef,
    pub right: MapRef,
    pub bottom: MapRef,
    pub witness: HomotopyWitness,
}

impl HSquare {
    pub fn corner(&self) -> ObjRef {
        self.right.tgt
    }
}

/// Homotopy pushout of the span `A <-u- Z -v-> B`.
/// `witness` relates `in_a ∘ u` and `in_b ∘ v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HPushout {
    pub apex: ObjRef,
    pub u: MapRef,
    pub v: MapRef,
    pub in_a: MapRef,
    pub in_b: MapRef,
    pub witness: HomotopyWitness,
}

impl HPushout {
    pub fn square(&self) -> HSquare {
        HSquare {
            top: self.u,
            left: self.v,
            right: self.in_a,
            bottom: self.in_b,
            witness: self.witness,
        }
    }
}

/// Homotopy pullback of the cospan `A -f-> X <-g- B`.
/// `witness` relates `f ∘ pr_a` and `g ∘ pr_b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HPullback {
    pub apex: ObjRef,
    pub f: MapRef,
    pub g: MapRef,
    pub pr_a: MapRef,
    pub pr_b: MapRef,
    pub witness: HomotopyWitness,
}

impl HPullback {
    pub fn square(&self) -> HSquare {
        HSquare {
            top: self.pr_a,
            left: self.pr_b,
            right: self.f,
            bottom: self.g,
            witness: self.witness,
        }
    }
}

/// A whisker map with its leg coherences.
///
/// Out of a pushout: `on_a: map ∘ in_a ≃ f`, `on_b: map ∘ in_b ≃ g`.
/// Into a pullback: `on_a: pr_a ∘ map ≃ p`, `on_b: pr_b ∘ map ≃ q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Whisker {
    pub map: MapRef,
    pub on_a: HomotopyWitness,
    pub on_b: HomotopyWitness,
}

/// Product as the homotopy pullback over the zero object.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Product {
    pub apex: ObjRef,
    pub pr1: MapRef,
    pub pr2: MapRef,
    pub pullback: HPullback,
}

/// Coproduct as the homotopy pushout over the zero object.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coproduct {
    pub apex: ObjRef,
    pub in1: MapRef,
    pub in2: MapRef,
    pub pushout: HPushout,
}

/// A smaller equivalent object: `retr ∘ incl ≃ id_small` and
/// `htpy: incl ∘ retr ≃ id_big`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Simplification {
    pub small: ObjRef,
    pub incl: MapRef,
    pub retr: MapRef,
    pub htpy: HomotopyWitness,
}

pub trait HomotopyCategory {
    fn zero(&mut self) -> ObjRef;
    fn label(&self, x: ObjRef) -> String;
    fn set_label(&mut self, x: ObjRef, label: &str);

    fn identity(&mut self, x: ObjRef) -> HcatResult<MapRef>;
    fn zero_map(&mut self, src: ObjRef, tgt: ObjRef) -> HcatResult<MapRef>;
    /// `g ∘ f`.
    fn compose(&mut self, f: MapRef, g: MapRef) -> HcatResult<MapRef>;
    fn maps_equal(&self, f: MapRef, g: MapRef) -> HcatResult<bool>;

    /// Complete decision: `None` only if no homotopy exists.
    fn is_homotopic(&mut self, f: MapRef, g: MapRef) -> HcatResult<Option<HomotopyWitness>>;
    fn verify_witness(&self, w: HomotopyWitness) -> HcatResult<bool>;

    fn refl(&mut self, f: MapRef) -> HcatResult<HomotopyWitness>;
    fn reverse(&mut self, w: HomotopyWitness) -> HcatResult<HomotopyWitness>;
    /// `w1: f ≃ g`, `w2: g ≃ h` gives `f ≃ h`; the middle maps must be equal.
    fn concat(&mut self, w1: HomotopyWitness, w2: HomotopyWitness) -> HcatResult<HomotopyWitness>;
    /// `h ∘ lhs ≃ h ∘ rhs`.
    fn post(&mut self, h: MapRef, w: HomotopyWitness) -> HcatResult<HomotopyWitness>;
    /// `lhs ∘ k ≃ rhs ∘ k`.
    fn pre(&mut self, w: HomotopyWitness, k: MapRef) -> HcatResult<HomotopyWitness>;

    fn h_pushout(&mut self, u: MapRef, v: MapRef) -> HcatResult<HPushout>;
    fn h_pullback(&mut self, f: MapRef, g: MapRef) -> HcatResult<HPullback>;
    /// `k` must relate `f ∘ u` and `g ∘ v`.
    fn whisker_out(&mut self, po: &HPushout, f: MapRef, g: MapRef, k: HomotopyWitness) -> HcatResult<Whisker>;
    /// `s` must relate `f ∘ p` and `g ∘ q` (either orientation).
    fn whisker_in(&mut self, pb: &HPullback, p: MapRef, q: MapRef, s: HomotopyWitness) -> HcatResult<Whisker>;

    /// Witness `pair(w1.lhs, w2.lhs) ≃ pair(w1.rhs, w2.rhs)` into a product.
    fn pair_witness(&mut self, prod: &Product, w1: HomotopyWitness, w2: HomotopyWitness) -> HcatResult<HomotopyWitness>;
    /// Witness `copair(w1.lhs, w2.lhs) ≃ copair(w1.rhs, w2.rhs)` out of a coproduct.
    fn copair_witness(
        &mut self,
        coprod: &Coproduct,
        w1: HomotopyWitness,
        w2: HomotopyWitness,
    ) -> HcatResult<HomotopyWitness>;

    /// Homotopy inverse when `f` is an equivalence.
    fn is_equivalence(&mut self, f: MapRef) -> HcatResult<Option<MapRef>>;
    fn has_section(&mut self, g: MapRef) -> HcatResult<Option<MapRef>>;
    /// Requires `g ∘ alpha ≃ iota`, else `Incoherent`.
    fn has_rel_section(&mut self, g: MapRef, iota: MapRef, alpha: MapRef) -> HcatResult<Option<MapRef>>;

    /// Optional size reduction used before expensive decisions.
    fn simplify(&mut self, _x: ObjRef) -> HcatResult<Option<Simplification>> {
        Ok(None)
    }

    fn product(&mut self, x: ObjRef, y: ObjRef) -> HcatResult<Product> {
        let z = self.zero();
        let f = self.zero_map(x, z)?;
        let g = self.zero_map(y, z)?;
        let pullback = self.h_pullback(f, g)?;
        Ok(Product {
            apex: pullback.apex,
            pr1: pullback.pr_a,
            pr2: pullback.pr_b,
            pullback,
        })
    }

    fn coproduct(&mut self, x: ObjRef, y: ObjRef) -> HcatResult<Coproduct> {
        let z = self.zero();
        let u = self.zero_map(z, x)?;
        let v = self.zero_map(z, y)?;
        let pushout = self.h_pushout(u, v)?;
        Ok(Coproduct {
            apex: pushout.apex,
            in1: pushout.in_a,
            in2: pushout.in_b,
            pushout,
        })
    }

    /// `(f, g): W → X × Y`.
    fn pair(&mut self, prod: &Product, f: MapRef, g: MapRef) -> HcatResult<MapRef> {
        let fz = self.compose(f, prod.pullback.f)?;
        let s = self.refl(fz)?;
        let gz = self.compose(g, prod.pullback.g)?;
        let s = rebase(self, s, fz, gz)?;
        Ok(self.whisker_in(&prod.pullback, f, g, s)?.map)
    }

    /// `(f, g): X ∨ Y → T`.
    fn copair(&mut self, coprod: &Coproduct, f: MapRef, g: MapRef) -> HcatResult<MapRef> {
        let fu = self.compose(coprod.pushout.u, f)?;
        let gv = self.compose(coprod.pushout.v, g)?;
        let k = self.refl(fu)?;
        let k = rebase(self, k, fu, gv)?;
        Ok(self.whisker_out(&coprod.pushout, f, g, k)?.map)
    }

    /// Shape and witness check shared by the square decisions.
    fn check_square(&mut self, sq: &HSquare) -> HcatResult<()> {
        let ok = sq.top.src == sq.left.src
            && sq.right.src == sq.top.tgt
            && sq.bottom.src == sq.left.tgt
            && sq.right.tgt == sq.bottom.tgt;
        if !ok {
            return Err(HcatError::Mismatch("square maps do not compose".into()));
        }
        let rt = self.compose(sq.top, sq.right)?;
        let bl = self.compose(sq.left, sq.bottom)?;
        if !self.maps_equal(sq.witness.lhs, rt)? || !self.maps_equal(sq.witness.rhs, bl)? {
            return Err(HcatError::BadWitness("square witness does not relate its composites".into()));
        }
        if !self.verify_witness(sq.witness)? {
            return Err(HcatError::BadWitness("square witness fails verification".into()));
        }
        Ok(())
    }

    /// True iff the whisker map from the genuine homotopy pushout of the
    /// span into the corner is an equivalence.
    fn is_h_pushout_square(&mut self, sq: &HSquare) -> HcatResult<bool> {
        self.check_square(sq)?;
        let small = shrink_span(self, sq)?;
        let po = self.h_pushout(small.top, small.left)?;
        let j = self.whisker_out(&po, small.right, small.bottom, small.witness)?;
        Ok(self.is_equivalence(j.map)?.is_some())
    }

    /// True iff the whisker map from the apex into the genuine homotopy
    /// pullback of the cospan is an equivalence.
    fn is_h_pullback_square(&mut self, sq: &HSquare) -> HcatResult<bool> {
        self.check_square(sq)?;
        let small = shrink_cospan(self, sq)?;
        let pb = self.h_pullback(small.right, small.bottom)?;
        let w = self.whisker_in(&pb, small.top, small.left, small.witness)?;
        Ok(self.is_equivalence(w.map)?.is_some())
    }
}

/// Relabels a witness with backend-equal endpoints.
pub fn rebase<H: HomotopyCategory + ?Sized>(
    h: &mut H,
    w: HomotopyWitness,
    lhs: MapRef,
    rhs: MapRef,
) -> HcatResult<HomotopyWitness> {
    if !h.maps_equal(w.lhs, lhs)? || !h.maps_equal(w.rhs, rhs)? {
        return Err(HcatError::Mismatch("rebase: endpoints are not equal maps".into()));
    }
    let start = h.refl(lhs)?;
    let mid = h.concat(start, w)?;
    let end = h.refl(rhs)?;
    h.concat(mid, end)
}

/// Concatenates a nonempty chain of witnesses.
pub fn concat_all<H: HomotopyCategory + ?Sized>(h: &mut H, ws: &[HomotopyWitness]) -> HcatResult<HomotopyWitness> {
    let mut acc = ws[0];
    for w in &ws[1..] {
        acc = h.concat(acc, *w)?;
    }
    Ok(acc)
}

/// Simplification data, defaulting to the identity.
pub fn simplification<H: HomotopyCategory + ?Sized>(h: &mut H, x: ObjRef) -> HcatResult<Simplification> {
    if let Some(s) = h.simplify(x)? {
        return Ok(s);
    }
    let id = h.identity(x)?;
    let htpy = h.refl(id)?;
    Ok(Simplification {
        small: x,
        incl: id,
        retr: id,
        htpy,
    })
}

/// Replaces the span of a square by simplified objects, keeping the corner.
/// The result is a homotopy pushout iff the input is.
fn shrink_span<H: HomotopyCategory + ?Sized>(h: &mut H, sq: &HSquare) -> HcatResult<HSquare> {
    let sz = simplification(h, sq.top.src)?;
    let sa = simplification(h, sq.top.tgt)?;
    let sb = simplification(h, sq.left.tgt)?;
    let top_iz = h.compose(sz.incl, sq.top)?;
    let top = h.compose(top_iz, sa.retr)?;
    let left_iz = h.compose(sz.incl, sq.left)?;
    let left = h.compose(left_iz, sb.retr)?;
    let right = h.compose(sa.incl, sq.right)?;
    let bottom = h.compose(sb.incl, sq.bottom)?;
    // right iA rA top iZ ≃ right top iZ ≃ bottom left iZ ≃ bottom iB rB left iZ
    let w1 = h.pre(sa.htpy, top_iz)?;
    let w1 = h.post(sq.right, w1)?;
    let w2 = h.pre(sq.witness, sz.incl)?;
    let w3 = h.pre(sb.htpy, left_iz)?;
    let w3 = h.post(sq.bottom, w3)?;
    let w3 = h.reverse(w3)?;
    let witness = concat_all(h, &[w1, w2, w3])?;
    let lhs = h.compose(top, right)?;
    let rhs = h.compose(left, bottom)?;
    let witness = rebase(h, witness, lhs, rhs)?;
    Ok(HSquare {
        top,
        left,
        right,
        bottom,
        witness,
    })
}

/// Replaces the cospan and the apex of a square by simplified objects.
/// The result is a homotopy pullback iff the input is.
fn shrink_cospan<H: HomotopyCategory + ?Sized>(h: &mut H, sq: &HSquare) -> HcatResult<HSquare> {
    let sz = simplification(h, sq.top.src)?;
    let sa = simplification(h, sq.top.tgt)?;
    let sb = simplification(h, sq.left.tgt)?;
    let sp = simplification(h, sq.right.tgt)?;
    let top_iz = h.compose(sz.incl, sq.top)?;
    let top = h.compose(top_iz, sa.retr)?;
    let left_iz = h.compose(sz.incl, sq.left)?;
    let left = h.compose(left_iz, sb.retr)?;
    let right_ia = h.compose(sa.incl, sq.right)?;
    let right = h.compose(right_ia, sp.retr)?;
    let bottom_ib = h.compose(sb.incl, sq.bottom)?;
    let bottom = h.compose(bottom_ib, sp.retr)?;
    // rP right iA rA top iZ ≃ rP right top iZ ≃ rP bottom left iZ ≃ rP bottom iB rB left iZ
    let w1 = h.pre(sa.htpy, top_iz)?;
    let w1 = h.post(sq.right, w1)?;
    let w2 = h.pre(sq.witness, sz.incl)?;
    let w3 = h.pre(sb.htpy, left_iz)?;
    let w3 = h.post(sq.bottom, w3)?;
    let w3 = h.reverse(w3)?;
    let witness = concat_all(h, &[w1, w2, w3])?;
    let witness = h.post(sp.retr, witness)?;
    let lhs = h.compose(top, right)?;
    let rhs = h.compose(left, bottom)?;
    let witness = rebase(h, witness, lhs, rhs)?;
    Ok(HSquare {
        top,
        left,
        right,
        bottom,
        witness,
    })
}
