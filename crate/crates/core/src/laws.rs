//! Randomized checks of the homotopy-theoretic laws the constructions rely
//! on: the cube axiom, both halves of the prism lemma, uniqueness of whisker
//! maps, the join theorem and the double-cofibre pushout.
//!
//! Each check builds one seeded instance in a fresh [`ChainWorkspace`] and
//! returns what it observed, or a description of the violated law.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chain::ChainWorkspace;
use crate::ganea::{cofibre_certificate, join, join_map};
use crate::hcat::{HSquare, HcatError, HcatResult, HomotopyCategory, MapRef, ObjRef};
use crate::random::{random_chain_map, random_complex, random_homotopic, Limits};

/// The laws, in suite order.
pub const LAWS: [Law; 6] = [
    Law::Cube,
    Law::PrismPushout,
    Law::PrismPullback,
    Law::WhiskerUniqueness,
    Law::JoinPullbacks,
    Law::DoubleCofibre,
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Law {
    Cube,
    PrismPushout,
    PrismPullback,
    WhiskerUniqueness,
    JoinPullbacks,
    DoubleCofibre,
}

/// What one instance showed. `truth` is the common value of the two sides of
/// an equivalence, for the prism checks; other laws report `true`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Observation {
    pub truth: bool,
}

impl Law {
    pub fn id(self) -> &'static str {
        match self {
            Law::Cube => "cube-axiom",
            Law::PrismPushout => "prism-pushout",
            Law::PrismPullback => "prism-pullback",
            Law::WhiskerUniqueness => "whisker-uniqueness",
            Law::JoinPullbacks => "join-pullbacks",
            Law::DoubleCofibre => "double-cofibre",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            Law::Cube => "bottom pushout and vertical pullbacks give a top pushout",
            Law::PrismPushout => "over a pushout, front is a pushout iff the pasted square is",
            Law::PrismPullback => "under a pullback, left is a pullback iff the pasted square is",
            Law::WhiskerUniqueness => "whisker maps are unique up to homotopy once the homotopy is fixed",
            Law::JoinPullbacks => "the squares of a map of joins are pullbacks when the input squares are",
            Law::DoubleCofibre => "(id, f) and pr1 out of A v Y form a pushout over g",
        }
    }

    /// Runs instance `seed`; `Err` describes a violation or a failed step.
    pub fn check(self, seed: u64) -> Result<Observation, String> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (self as u64) << 32);
        let mut ws = ChainWorkspace::new();
        let r = match self {
            Law::Cube => cube(&mut ws, &mut rng),
            Law::PrismPushout => prism_pushout(&mut ws, &mut rng),
            Law::PrismPullback => prism_pullback(&mut ws, &mut rng),
            Law::WhiskerUniqueness => whisker_uniqueness(&mut ws, &mut rng),
            Law::JoinPullbacks => join_pullbacks(&mut ws, &mut rng),
            Law::DoubleCofibre => double_cofibre(&mut ws, &mut rng),
        };
        r.map_err(|e| format!("{} seed {seed}: {e}", self.id()))
    }
}

type Rand = ChaCha8Rng;

fn violated(msg: &str) -> HcatError {
    HcatError::Incoherent(msg.to_string())
}

fn object(ws: &mut ChainWorkspace, rng: &mut Rand, label: &str) -> ObjRef {
    ws.add_complex(random_complex(rng, Limits::default()), label)
}

fn arrow(ws: &mut ChainWorkspace, rng: &mut Rand, src: ObjRef, tgt: ObjRef) -> HcatResult<MapRef> {
    let f = random_chain_map(rng, ws.complex(src), ws.complex(tgt));
    ws.add_map(src, tgt, f)
}

fn perturbed(ws: &mut ChainWorkspace, rng: &mut Rand, f: MapRef) -> HcatResult<MapRef> {
    let g = random_homotopic(rng, ws.complex(f.src), ws.complex(f.tgt), ws.map_data(f));
    ws.add_map(f.src, f.tgt, g)
}

/// A map out of `x` that is an equivalence about half of the time.
fn corner_change(ws: &mut ChainWorkspace, rng: &mut Rand, x: ObjRef) -> HcatResult<MapRef> {
    match rng.gen_range(0..4) {
        0 | 1 => {
            let id = ws.identity(x)?;
            perturbed(ws, rng, id)
        }
        2 => arrow(ws, rng, x, x),
        _ => {
            let y = object(ws, rng, "Q");
            arrow(ws, rng, x, y)
        }
    }
}

fn pullback(ws: &mut ChainWorkspace, sq: &HSquare, what: &str) -> HcatResult<()> {
    if ws.is_h_pullback_square(sq)? {
        Ok(())
    } else {
        Err(violated(&format!("{what} is not a homotopy pullback")))
    }
}

fn cube(ws: &mut ChainWorkspace, rng: &mut Rand) -> HcatResult<Observation> {
    let b0 = object(ws, rng, "B0");
    let b1 = object(ws, rng, "B1");
    let b2 = object(ws, rng, "B2");
    let (u, v) = (arrow(ws, rng, b0, b1)?, arrow(ws, rng, b0, b2)?);
    let po = ws.h_pushout(u, v)?;
    let e = object(ws, rng, "E");
    let phi = arrow(ws, rng, e, po.apex)?;
    let e1 = ws.h_pullback(po.in_a, phi)?;
    let e2 = ws.h_pullback(po.in_b, phi)?;
    let diag = ws.compose(u, po.in_a)?;
    let e0 = ws.h_pullback(diag, phi)?;
    let to_b1 = ws.compose(e0.pr_a, u)?;
    let a = ws.whisker_in(&e1, to_b1, e0.pr_b, e0.witness)?;
    // in_b v pr ≃ in_a u pr ≃ φ pr_E
    let back = ws.pre(po.witness, e0.pr_a)?;
    let back = ws.reverse(back)?;
    let s = ws.concat(back, e0.witness)?;
    let to_b2 = ws.compose(e0.pr_a, v)?;
    let b = ws.whisker_in(&e2, to_b2, e0.pr_b, s)?;
    let unb = ws.reverse(b.on_b)?;
    let top = HSquare {
        top: a.map,
        left: b.map,
        right: e1.pr_b,
        bottom: e2.pr_b,
        witness: ws.concat(a.on_b, unb)?,
    };
    let left_face = HSquare {
        top: a.map,
        left: e0.pr_a,
        right: e1.pr_a,
        bottom: u,
        witness: a.on_a,
    };
    let back_face = HSquare {
        top: b.map,
        left: e0.pr_a,
        right: e2.pr_a,
        bottom: v,
        witness: b.on_a,
    };
    if !ws.is_h_pushout_square(&po.square())? {
        return Err(violated("bottom face is not a homotopy pushout"));
    }
    pullback(ws, &e1.square(), "front face")?;
    pullback(ws, &e2.square(), "right face")?;
    pullback(ws, &left_face, "left face")?;
    pullback(ws, &back_face, "back face")?;
    if !ws.is_h_pushout_square(&top)? {
        return Err(violated("top face is not a homotopy pushout"));
    }
    Ok(Observation { truth: true })
}

/// Pastes `front` to the right of `left` along `left.right = front.left`.
fn paste(ws: &mut ChainWorkspace, left: &HSquare, front: &HSquare) -> HcatResult<HSquare> {
    // front.right ∘ front.top ∘ left.top ≃ front.bottom ∘ left.right ∘ left.top ≃ front.bottom ∘ left.bottom ∘ left.left
    let w1 = ws.pre(front.witness, left.top)?;
    let w2 = ws.post(front.bottom, left.witness)?;
    Ok(HSquare {
        top: ws.compose(left.top, front.top)?,
        left: left.left,
        right: front.right,
        bottom: ws.compose(left.bottom, front.bottom)?,
        witness: ws.concat(w1, w2)?,
    })
}

fn prism_pushout(ws: &mut ChainWorkspace, rng: &mut Rand) -> HcatResult<Observation> {
    let t = object(ws, rng, "T");
    let l = object(ws, rng, "L");
    let t2 = object(ws, rng, "T'");
    let r = object(ws, rng, "R");
    let (f, g) = (arrow(ws, rng, t, l)?, arrow(ws, rng, t, t2)?);
    let left_po = ws.h_pushout(f, g)?;
    let h = arrow(ws, rng, l, r)?;
    let front_po = ws.h_pushout(h, left_po.in_a)?;
    let k = corner_change(ws, rng, front_po.apex)?;
    let front = HSquare {
        top: h,
        left: left_po.in_a,
        right: ws.compose(front_po.in_a, k)?,
        bottom: ws.compose(front_po.in_b, k)?,
        witness: ws.post(k, front_po.witness)?,
    };
    let left = left_po.square();
    if !ws.is_h_pushout_square(&left)? {
        return Err(violated("left square is not a homotopy pushout"));
    }
    let pasted = paste(ws, &left, &front)?;
    let front_is = ws.is_h_pushout_square(&front)?;
    let pasted_is = ws.is_h_pushout_square(&pasted)?;
    if front_is != pasted_is {
        return Err(violated(&format!("front pushout {front_is}, pasted pushout {pasted_is}")));
    }
    Ok(Observation { truth: front_is })
}

fn prism_pullback(ws: &mut ChainWorkspace, rng: &mut Rand) -> HcatResult<Observation> {
    let r = object(ws, rng, "R");
    let r2 = object(ws, rng, "R'");
    let l2 = object(ws, rng, "L'");
    let t2 = object(ws, rng, "T'");
    let (right, bottom) = (arrow(ws, rng, r, r2)?, arrow(ws, rng, l2, r2)?);
    // front square (L, R, L', R') is the pullback of R → R' ← L'
    let front_pb = ws.h_pullback(right, bottom)?;
    let front = front_pb.square();
    let c = arrow(ws, rng, t2, l2)?;
    let left_pb = ws.h_pullback(front_pb.pr_b, c)?;
    let k = {
        // a map into the pullback apex, an equivalence about half of the time
        let m = corner_change(ws, rng, left_pb.apex)?;
        match ws.is_equivalence(m)? {
            Some(inv) if rng.gen_bool(0.5) => inv,
            _ => {
                let src = object(ws, rng, "T");
                arrow(ws, rng, src, left_pb.apex)?
            }
        }
    };
    let left = HSquare {
        top: ws.compose(k, left_pb.pr_a)?,
        left: ws.compose(k, left_pb.pr_b)?,
        right: front_pb.pr_b,
        bottom: c,
        witness: ws.pre(left_pb.witness, k)?,
    };
    if !ws.is_h_pullback_square(&front)? {
        return Err(violated("front square is not a homotopy pullback"));
    }
    // the left square's right edge is the front square's left edge
    let pasted = paste(ws, &left, &front)?;
    let left_is = ws.is_h_pullback_square(&left)?;
    let pasted_is = ws.is_h_pullback_square(&pasted)?;
    if left_is != pasted_is {
        return Err(violated(&format!("left pullback {left_is}, pasted pullback {pasted_is}")));
    }
    Ok(Observation { truth: left_is })
}

fn whisker_uniqueness(ws: &mut ChainWorkspace, rng: &mut Rand) -> HcatResult<Observation> {
    let p = object(ws, rng, "P");
    let a = object(ws, rng, "A");
    let c = object(ws, rng, "C");
    let b = object(ws, rng, "B");
    let (u, v) = (arrow(ws, rng, p, a)?, arrow(ws, rng, p, c)?);
    let po = ws.h_pushout(u, v)?;
    let j0 = arrow(ws, rng, po.apex, b)?;
    // the cocone of j0, with f moved inside its homotopy class
    let f0 = ws.compose(po.in_a, j0)?;
    let f = perturbed(ws, rng, f0)?;
    let g = ws.compose(po.in_b, j0)?;
    let m = ws
        .is_homotopic(f, f0)?
        .ok_or_else(|| violated("a perturbed map is not homotopic to the original"))?;
    let mu = ws.pre(m, u)?;
    let k0 = ws.post(j0, po.witness)?;
    let k = ws.concat(mu, k0)?;
    let j1 = ws.whisker_out(&po, f, g, k)?;
    let j2 = ws.whisker_out(&po, f, g, k)?;
    for (what, x, y) in [("repeated whisker", j1.map, j2.map), ("whisker and its source map", j1.map, j0)] {
        if ws.is_homotopic(x, y)?.is_none() {
            return Err(violated(&format!("{what} are not homotopic")));
        }
    }
    // dual: a map into a pullback against the whisker of its legs
    let y = object(ws, rng, "Y");
    let (x1, x2) = (object(ws, rng, "X1"), object(ws, rng, "X2"));
    let (f1, f2) = (arrow(ws, rng, x1, y)?, arrow(ws, rng, x2, y)?);
    let pb = ws.h_pullback(f1, f2)?;
    let w = object(ws, rng, "W");
    let i0 = arrow(ws, rng, w, pb.apex)?;
    let p1 = ws.compose(i0, pb.pr_a)?;
    let p2 = ws.compose(i0, pb.pr_b)?;
    let s = ws.pre(pb.witness, i0)?;
    let i1 = ws.whisker_in(&pb, p1, p2, s)?;
    if ws.is_homotopic(i1.map, i0)?.is_none() {
        return Err(violated("whisker into a pullback and its source map are not homotopic"));
    }
    Ok(Observation { truth: true })
}

fn join_pullbacks(ws: &mut ChainWorkspace, rng: &mut Rand) -> HcatResult<Observation> {
    let a2 = object(ws, rng, "A'");
    let b2 = object(ws, rng, "B'");
    let c2 = object(ws, rng, "C'");
    let b = object(ws, rng, "B");
    let (f2, g2) = (arrow(ws, rng, a2, b2)?, arrow(ws, rng, c2, b2)?);
    let vb = arrow(ws, rng, b, b2)?;
    // A = A' ×_B' B and C = C' ×_B' B, so both input squares are pullbacks
    let pa = ws.h_pullback(f2, vb)?;
    let pc = ws.h_pullback(g2, vb)?;
    let wa = ws.reverse(pa.witness)?;
    let wc = ws.reverse(pc.witness)?;
    for (sq, what) in [(pa.square(), "left input square"), (pc.square(), "right input square")] {
        pullback(ws, &sq, what)?;
    }
    let src = join(ws, pa.pr_b, pc.pr_b)?;
    let tgt = join(ws, f2, g2)?;
    let jm = join_map(ws, &src, &tgt, pa.pr_a, vb, pc.pr_a, wa, wc)?;
    pullback(ws, &jm.left, "left join square")?;
    pullback(ws, &jm.right, "right join square")?;
    Ok(Observation { truth: true })
}

fn double_cofibre(ws: &mut ChainWorkspace, rng: &mut Rand) -> HcatResult<Observation> {
    let y = object(ws, rng, "Y");
    let a = object(ws, rng, "A");
    let f = arrow(ws, rng, y, a)?;
    let cert = cofibre_certificate(ws, f)?;
    if !ws.is_h_pushout_square(&cert.base.stages[0])? {
        return Err(violated("the double-cofibre square is not a homotopy pushout"));
    }
    Ok(Observation { truth: true })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::ChainComplex;

    #[test]
    fn every_law_holds_on_a_few_seeds() {
        for law in LAWS {
            for seed in 0..8 {
                law.check(seed).unwrap();
            }
        }
    }

    #[test]
    fn prism_checks_see_both_truth_values() {
        for law in [Law::PrismPushout, Law::PrismPullback] {
            let seen: Vec<bool> = (0..40).map(|s| law.check(s).unwrap().truth).collect();
            assert!(seen.contains(&true) && seen.contains(&false), "{}", law.id());
        }
    }

    #[test]
    fn pushout_check_can_fail() {
        // a zero corner under a nonacyclic suspension is not a pushout
        let mut ws = ChainWorkspace::new();
        let x = ws.add_complex(ChainComplex::sphere(1), "X");
        let z = ws.zero();
        let xz = ws.zero_map(x, z).unwrap();
        let po = ws.h_pushout(xz, xz).unwrap();
        let to_zero = ws.zero_map(po.apex, z).unwrap();
        let sq = HSquare {
            top: xz,
            left: xz,
            right: ws.compose(po.in_a, to_zero).unwrap(),
            bottom: ws.compose(po.in_b, to_zero).unwrap(),
            witness: ws.post(to_zero, po.witness).unwrap(),
        };
        assert!(!ws.is_h_pushout_square(&sq).unwrap());
    }
}
