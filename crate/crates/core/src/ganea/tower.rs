//! Joins, fibres, cofibres and the Ganea tower.

use crate::hcat::{
    concat_all, rebase, simplification, HPullback, HPushout, HSquare, HcatResult, HomotopyCategory, HomotopyWitness, MapRef, ObjRef,
    Simplification, Whisker,
};

/// `A ⋈_B C`: the homotopy pushout of the two legs of the homotopy pullback
/// of `A -f-> B <-g- C`, with its whisker map to `B`.
#[derive(Clone, Copy, Debug)]
pub struct JoinData {
    pub pullback: HPullback,
    pub pushout: HPushout,
    pub whisker: Whisker,
}

impl JoinData {
    pub fn apex(&self) -> ObjRef {
        self.pushout.apex
    }

    pub fn map(&self) -> MapRef {
        self.whisker.map
    }
}

pub fn join<H: HomotopyCategory + ?Sized>(h: &mut H, f: MapRef, g: MapRef) -> HcatResult<JoinData> {
    let pullback = h.h_pullback(f, g)?;
    let pushout = h.h_pushout(pullback.pr_a, pullback.pr_b)?;
    let whisker = h.whisker_out(&pushout, f, g, pullback.witness)?;
    Ok(JoinData {
        pullback,
        pushout,
        whisker,
    })
}

/// Homotopy fibre `F → src` of `f`.
pub fn fibre<H: HomotopyCategory + ?Sized>(h: &mut H, f: MapRef) -> HcatResult<HPullback> {
    let z = h.zero();
    let point = h.zero_map(z, f.tgt)?;
    h.h_pullback(f, point)
}

/// Homotopy cofibre `tgt → C` of `f`.
pub fn cofibre<H: HomotopyCategory + ?Sized>(h: &mut H, f: MapRef) -> HcatResult<HPushout> {
    let z = h.zero();
    let collapse = h.zero_map(f.src, z)?;
    h.h_pushout(f, collapse)
}

/// One Ganea stage: `g_i: G_i → X` with the lift `α_i` of `ι`.
#[derive(Clone, Copy, Debug)]
pub struct GaneaStage {
    pub object: ObjRef,
    pub g: MapRef,
    pub alpha: MapRef,
    /// `g_i ∘ α_i ≃ ι`.
    pub lift: HomotopyWitness,
}

/// The passage from stage `i` to stage `i + 1`.
#[derive(Clone, Copy, Debug)]
pub struct GaneaStep {
    /// `join(ι, g_i)`; its pullback is `F_i` with `η_i = pr_a`, `β_i = pr_b`.
    pub join: JoinData,
    /// Replaces the raw pushout apex by the stage object `G_{i+1}`.
    pub simplification: Simplification,
    pub gamma: MapRef,
    pub theta: MapRef,
    /// `(η_i, β_i, α_{i+1}, γ_i)`, a homotopy pushout.
    pub pushout_square: HSquare,
}

impl GaneaStep {
    pub fn fibre(&self) -> ObjRef {
        self.join.pullback.apex
    }

    pub fn eta(&self) -> MapRef {
        self.join.pullback.pr_a
    }

    pub fn beta(&self) -> MapRef {
        self.join.pullback.pr_b
    }

    /// `(η_i, β_i, ι, g_i)`, a homotopy pullback.
    pub fn pullback_square(&self) -> HSquare {
        self.join.pullback.square()
    }
}

#[derive(Clone, Debug)]
pub struct GaneaTower {
    pub iota: MapRef,
    pub stages: Vec<GaneaStage>,
    pub steps: Vec<GaneaStep>,
}

impl GaneaTower {
    /// Stage 0: `G_0 = A`, `g_0 = ι`, `α_0 = id`.
    pub fn new<H: HomotopyCategory + ?Sized>(h: &mut H, iota: MapRef) -> HcatResult<Self> {
        let alpha = h.identity(iota.src)?;
        let g_alpha = h.compose(alpha, iota)?;
        let lift = h.refl(g_alpha)?;
        let lift = rebase(h, lift, g_alpha, iota)?;
        Ok(GaneaTower {
            iota,
            stages: vec![GaneaStage {
                object: iota.src,
                g: iota,
                alpha,
                lift,
            }],
            steps: Vec::new(),
        })
    }

    /// Builds the tower up to stage `n`.
    pub fn build<H: HomotopyCategory + ?Sized>(h: &mut H, iota: MapRef, n: usize) -> HcatResult<Self> {
        let mut t = Self::new(h, iota)?;
        t.extend_to(h, n)?;
        Ok(t)
    }

    pub fn top(&self) -> usize {
        self.stages.len() - 1
    }

    pub fn stage(&self, i: usize) -> &GaneaStage {
        &self.stages[i]
    }

    pub fn extend_to<H: HomotopyCategory + ?Sized>(&mut self, h: &mut H, n: usize) -> HcatResult<()> {
        while self.top() < n {
            self.extend(h)?;
        }
        Ok(())
    }

    pub fn extend<H: HomotopyCategory + ?Sized>(&mut self, h: &mut H) -> HcatResult<()> {
        let i = self.top();
        let iota = self.iota;
        let cur = self.stages[i];
        let join = join(h, iota, cur.g)?;
        h.set_label(join.pullback.apex, &format!("F{i}"));
        h.set_label(join.pushout.apex, &format!("G{}~", i + 1));
        let simp = simplification(h, join.pushout.apex)?;
        h.set_label(simp.small, &format!("G{}", i + 1));
        let graw = join.whisker.map;
        let g = h.compose(simp.incl, graw)?;
        let alpha = h.compose(join.pushout.in_a, simp.retr)?;
        let gamma = h.compose(join.pushout.in_b, simp.retr)?;
        // g α = graw incl retr in_a ≃ graw in_a ≃ ι
        let w1 = h.pre(simp.htpy, join.pushout.in_a)?;
        let w1 = h.post(graw, w1)?;
        let lift = concat_all(h, &[w1, join.whisker.on_a])?;
        let g_alpha = h.compose(alpha, g)?;
        let lift = rebase(h, lift, g_alpha, iota)?;
        // θ is the whisker map of id_A and α_i into F_i
        let id_a = h.identity(iota.src)?;
        let back = h.reverse(cur.lift)?;
        let theta = h.whisker_in(&join.pullback, id_a, cur.alpha, back)?.map;
        let sq_w = h.post(simp.retr, join.pushout.witness)?;
        let eta = join.pullback.pr_a;
        let beta = join.pullback.pr_b;
        let lhs = h.compose(eta, alpha)?;
        let rhs = h.compose(beta, gamma)?;
        let sq_w = rebase(h, sq_w, lhs, rhs)?;
        let pushout_square = HSquare {
            top: eta,
            left: beta,
            right: alpha,
            bottom: gamma,
            witness: sq_w,
        };
        self.steps.push(GaneaStep {
            join,
            simplification: simp,
            gamma,
            theta,
            pushout_square,
        });
        self.stages.push(GaneaStage {
            object: simp.small,
            g,
            alpha,
            lift,
        });
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{ChainComplex, ChainWorkspace};

    fn sphere_pair(ws: &mut ChainWorkspace) -> (ObjRef, ObjRef) {
        let a = ws.add_complex(ChainComplex::sphere(1), "A");
        let x = ws.add_complex(ChainComplex::sphere(2), "X");
        (a, x)
    }

    #[test]
    fn identity_tower_has_equivalences() {
        let mut ws = ChainWorkspace::new();
        let (a, _) = sphere_pair(&mut ws);
        let id = ws.identity(a).unwrap();
        let t = GaneaTower::build(&mut ws, id, 3).unwrap();
        for s in &t.stages {
            assert!(ws.is_equivalence(s.g).unwrap().is_some());
        }
    }

    #[test]
    fn point_inclusion_first_stage_is_equivalence() {
        let mut ws = ChainWorkspace::new();
        let (_, x) = sphere_pair(&mut ws);
        let z = ws.zero();
        let iota = ws.zero_map(z, x).unwrap();
        let t = GaneaTower::build(&mut ws, iota, 2).unwrap();
        assert!(ws.is_equivalence(t.stages[0].g).unwrap().is_none());
        assert!(ws.is_equivalence(t.stages[1].g).unwrap().is_some());
    }

    #[test]
    fn tower_invariants_hold() {
        let mut ws = ChainWorkspace::new();
        let (a, x) = sphere_pair(&mut ws);
        let iota = ws.zero_map(a, x).unwrap();
        let t = GaneaTower::build(&mut ws, iota, 3).unwrap();
        for (i, step) in t.steps.iter().enumerate() {
            assert!(ws.is_h_pullback_square(&step.pullback_square()).unwrap());
            assert!(ws.is_h_pushout_square(&step.pushout_square).unwrap());
            let ga = ws.compose(t.stages[i].alpha, step.gamma).unwrap();
            assert!(ws.is_homotopic(ga, t.stages[i + 1].alpha).unwrap().is_some());
            let bt = ws.compose(step.theta, step.beta()).unwrap();
            assert!(ws.is_homotopic(bt, t.stages[i].alpha).unwrap().is_some());
            assert!(ws.verify_witness(t.stages[i + 1].lift).unwrap());
        }
    }

    #[test]
    fn join_over_zero_is_acyclic() {
        let mut ws = ChainWorkspace::new();
        let (a, x) = sphere_pair(&mut ws);
        let z = ws.zero();
        let f = ws.zero_map(a, z).unwrap();
        let g = ws.zero_map(x, z).unwrap();
        let j = join(&mut ws, f, g).unwrap();
        assert!(ws.is_acyclic(j.apex()));
    }

    #[test]
    fn cofibre_of_point_inclusion_is_target() {
        let mut ws = ChainWorkspace::new();
        let (_, x) = sphere_pair(&mut ws);
        let z = ws.zero();
        let f = ws.zero_map(z, x).unwrap();
        let c = cofibre(&mut ws, f).unwrap();
        assert!(ws.is_equivalence(c.in_a).unwrap().is_some());
        let id = ws.identity(x).unwrap();
        let fib = fibre(&mut ws, id).unwrap();
        assert!(ws.is_acyclic(fib.apex));
    }
}
