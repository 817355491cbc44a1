//! Fat wedges `T_i → X^{i+1}`, the map of joins induced by a map of
//! cospans, and the comparison with the Ganea tower.

use super::tower::{join, GaneaTower, JoinData};
use crate::hcat::{
    concat_all, rebase, simplification, HSquare, HcatError, HcatResult, HomotopyCategory, HomotopyWitness, MapRef,
    ObjRef, Product, Whisker,
};

/// Some homotopy `f ≃ g`, or `Incoherent` when the maps are not homotopic.
pub(crate) fn homotopy<H: HomotopyCategory + ?Sized>(h: &mut H, f: MapRef, g: MapRef) -> HcatResult<HomotopyWitness> {
    h.is_homotopic(f, g)?
        .ok_or_else(|| HcatError::Incoherent(format!("{} and {} are not homotopic", h.label(f.src), h.label(f.tgt))))
}

/// The maps induced between two joins by vertical maps `a, b, c` of cospans.
#[derive(Clone, Copy, Debug)]
pub struct JoinMap {
    /// Between the homotopy pullbacks.
    pub pullback_map: Whisker,
    /// Between the joins.
    pub map: Whisker,
    /// `(in_A, a, k, in'_A)`.
    pub left: HSquare,
    /// `(j, k, b, j')`.
    pub right: HSquare,
}

/// Given `wa: b ∘ f ≃ f' ∘ a` and `wc: b ∘ g ≃ g' ∘ c` for the cospans of
/// `src` and `tgt`, builds `k: A ⋈_B C → A' ⋈_B' C'` and its two squares.
/// Both squares are homotopy pullbacks when the two input squares are.
pub fn join_map<H: HomotopyCategory + ?Sized>(
    h: &mut H,
    src: &JoinData,
    tgt: &JoinData,
    a: MapRef,
    b: MapRef,
    c: MapRef,
    wa: HomotopyWitness,
    wc: HomotopyWitness,
) -> HcatResult<JoinMap> {
    let (p, q) = (&src.pullback, &tgt.pullback);
    let bf = h.compose(p.f, b)?;
    let fa = h.compose(a, q.f)?;
    let wa = rebase(h, wa, bf, fa)?;
    let bg = h.compose(p.g, b)?;
    let gc = h.compose(c, q.g)?;
    let wc = rebase(h, wc, bg, gc)?;
    let a_pr = h.compose(p.pr_a, a)?;
    let c_pr = h.compose(p.pr_b, c)?;
    // f' a pr_A ≃ b f pr_A ≃ b g pr_C ≃ g' c pr_C
    let s1 = h.pre(wa, p.pr_a)?;
    let s1 = h.reverse(s1)?;
    let s2 = h.post(b, p.witness)?;
    let s3 = h.pre(wc, p.pr_b)?;
    let s = concat_all(h, &[s1, s2, s3])?;
    let pullback_map = h.whisker_in(q, a_pr, c_pr, s)?;
    let (po, po2) = (&src.pushout, &tgt.pushout);
    let fk = h.compose(a, po2.in_a)?;
    let gk = h.compose(c, po2.in_b)?;
    // in'_A a pr_A ≃ in'_A pr'_A w ≃ in'_C pr'_C w ≃ in'_C c pr_C
    let k1 = h.post(po2.in_a, pullback_map.on_a)?;
    let k1 = h.reverse(k1)?;
    let k2 = h.pre(po2.witness, pullback_map.map)?;
    let k3 = h.post(po2.in_b, pullback_map.on_b)?;
    let kw = concat_all(h, &[k1, k2, k3])?;
    let lhs = h.compose(po.u, fk)?;
    let rhs = h.compose(po.v, gk)?;
    let kw = rebase(h, kw, lhs, rhs)?;
    let map = h.whisker_out(po, fk, gk, kw)?;
    let left_rhs = h.compose(a, po2.in_a)?;
    let left_w = rebase(h, map.on_a, map.on_a.lhs, left_rhs)?;
    let left = HSquare {
        top: po.in_a,
        left: a,
        right: map.map,
        bottom: po2.in_a,
        witness: left_w,
    };
    let bj = h.compose(src.map(), b)?;
    let jk = h.compose(map.map, tgt.map())?;
    let right = HSquare {
        top: src.map(),
        left: map.map,
        right: b,
        bottom: tgt.map(),
        witness: homotopy(h, bj, jk)?,
    };
    Ok(JoinMap {
        pullback_map,
        map,
        left,
        right,
    })
}

/// `X^i` with its diagonal; for `i ≥ 2` it is the product `X^{i−1} × X`.
#[derive(Clone, Copy, Debug)]
pub struct Power {
    pub object: ObjRef,
    pub diagonal: MapRef,
    pub product: Option<Product>,
}

/// Stage `i`: `t_i: T_i → X^{i+1}` with the comparison maps from `G_i`.
#[derive(Clone, Copy, Debug)]
pub struct WhiteheadStage {
    pub object: ObjRef,
    pub t: MapRef,
    /// `υ_i: X^i × A → T_i`.
    pub upsilon: MapRef,
    /// `δ_i = (Δ_i ι, id): A → X^i × A`.
    pub delta: MapRef,
    /// `ε_i: G_i → T_i`.
    pub epsilon: MapRef,
    pub tau: MapRef,
    /// `X^i × A`.
    pub source_product: Product,
    /// `(α_i, δ_i, ε_i, υ_i)`.
    pub left: HSquare,
    /// `(g_i, ε_i, Δ_{i+1}, t_i)`.
    pub right: HSquare,
    /// `t_i ε_i ≃ Δ_{i+1} g_i`.
    pub right_witness: HomotopyWitness,
}

#[derive(Clone, Debug)]
pub struct WhiteheadTower {
    pub iota: MapRef,
    pub ganea: GaneaTower,
    /// `powers[i] = X^i`, with `X^0 = ∗`.
    pub powers: Vec<Power>,
    pub stages: Vec<WhiteheadStage>,
}

impl WhiteheadTower {
    pub fn build<H: HomotopyCategory + ?Sized>(h: &mut H, iota: MapRef, n: usize) -> HcatResult<Self> {
        let ganea = GaneaTower::build(h, iota, n)?;
        let x = iota.tgt;
        let z = h.zero();
        let to_zero = h.zero_map(x, z)?;
        let id_x = h.identity(x)?;
        let mut tower = WhiteheadTower {
            iota,
            ganea,
            powers: vec![
                Power {
                    object: z,
                    diagonal: to_zero,
                    product: None,
                },
                Power {
                    object: x,
                    diagonal: id_x,
                    product: None,
                },
            ],
            stages: Vec::new(),
        };
        tower.push_base(h)?;
        for i in 1..=n {
            tower.push_stage(h, i)?;
        }
        Ok(tower)
    }

    pub fn top(&self) -> usize {
        self.stages.len() - 1
    }

    /// Appends `X^{i+1} = X^i × X` when missing.
    fn ensure_power<H: HomotopyCategory + ?Sized>(&mut self, h: &mut H, k: usize) -> HcatResult<()> {
        while self.powers.len() <= k {
            let last = self.powers.len() - 1;
            let prev = self.powers[last];
            let x = self.iota.tgt;
            let prod = h.product(prev.object, x)?;
            h.set_label(prod.apex, &format!("X^{}", last + 1));
            let id_x = h.identity(x)?;
            let diagonal = h.pair(&prod, prev.diagonal, id_x)?;
            self.powers.push(Power {
                object: prod.apex,
                diagonal,
                product: Some(prod),
            });
        }
        Ok(())
    }

    /// `δ_i` into a fresh product `X^i × A`.
    fn delta<H: HomotopyCategory + ?Sized>(&mut self, h: &mut H, i: usize) -> HcatResult<(Product, MapRef)> {
        let a = self.iota.src;
        let prod = h.product(self.powers[i].object, a)?;
        h.set_label(prod.apex, &format!("X^{i}xA"));
        let di = h.compose(self.iota, self.powers[i].diagonal)?;
        let id_a = h.identity(a)?;
        let delta = h.pair(&prod, di, id_a)?;
        Ok((prod, delta))
    }

    /// `T_0 = A`, `t_0 = ι`, `ε_0 = id`.
    fn push_base<H: HomotopyCategory + ?Sized>(&mut self, h: &mut H) -> HcatResult<()> {
        let iota = self.iota;
        let g0 = *self.ganea.stage(0);
        let (prod, delta) = self.delta(h, 0)?;
        let upsilon = prod.pr2;
        let epsilon = h.identity(iota.src)?;
        let tau = h.compose(delta, upsilon)?;
        let ea = h.compose(g0.alpha, epsilon)?;
        let left = HSquare {
            top: g0.alpha,
            left: delta,
            right: epsilon,
            bottom: upsilon,
            witness: homotopy(h, ea, tau)?,
        };
        let right = self.right_square(h, g0.g, epsilon, iota, 1)?;
        self.stages.push(WhiteheadStage {
            object: iota.src,
            t: iota,
            upsilon,
            delta,
            epsilon,
            tau,
            source_product: prod,
            left,
            right,
            right_witness: h.reverse(right.witness)?,
        });
        Ok(())
    }

    fn right_square<H: HomotopyCategory + ?Sized>(
        &mut self,
        h: &mut H,
        g: MapRef,
        epsilon: MapRef,
        t: MapRef,
        k: usize,
    ) -> HcatResult<HSquare> {
        let diag = self.powers[k].diagonal;
        let dg = h.compose(g, diag)?;
        let te = h.compose(epsilon, t)?;
        let w = homotopy(h, dg, te)?;
        Ok(HSquare {
            top: g,
            left: epsilon,
            right: diag,
            bottom: t,
            witness: w,
        })
    }

    /// Stage `i ≥ 1`: `T_i` is the join of `id × ι: X^i × A → X^{i+1}` and
    /// `t_{i−1} × id: T_{i−1} × X → X^{i+1}`; `ε_i` is the map of joins
    /// from `G_i = A ⋈_X G_{i−1}`.
    fn push_stage<H: HomotopyCategory + ?Sized>(&mut self, h: &mut H, i: usize) -> HcatResult<()> {
        self.ensure_power(h, i + 1)?;
        let iota = self.iota;
        let x = iota.tgt;
        let prev = self.stages[i - 1];
        let gprev = *self.ganea.stage(i - 1);
        let step = self.ganea.steps[i - 1];
        let big = self.powers[i + 1].product.expect("X^{i+1} is a product for i ≥ 1");
        let (prod_a, delta) = self.delta(h, i)?;
        // id × ι
        let ip = h.compose(prod_a.pr2, iota)?;
        let f_t = h.pair(&big, prod_a.pr1, ip)?;
        // t_{i−1} × id
        let prod_t = h.product(prev.object, x)?;
        h.set_label(prod_t.apex, &format!("T{}xX", i - 1));
        let tp = h.compose(prod_t.pr1, prev.t)?;
        let g_t = h.pair(&big, tp, prod_t.pr2)?;
        let target = join(h, f_t, g_t)?;
        h.set_label(target.pullback.apex, &format!("P{i}"));
        h.set_label(target.apex(), &format!("T{i}~"));
        let simp = simplification(h, target.apex())?;
        h.set_label(simp.small, &format!("T{i}"));
        let t = h.compose(simp.incl, target.map())?;
        let upsilon = h.compose(target.pushout.in_a, simp.retr)?;
        // vertical maps
        let b = self.powers[i + 1].diagonal;
        let c = h.pair(&prod_t, prev.epsilon, gprev.g)?;
        let bi = h.compose(iota, b)?;
        let fa = h.compose(delta, f_t)?;
        let wa = homotopy(h, bi, fa)?;
        // Δ_{i+1} g = (Δ_i g, g) ≃ (t ε, g) = (t × id)(ε, g)
        let back = h.reverse(prev.right_witness)?;
        let rg = h.refl(gprev.g)?;
        let wc = h.pair_witness(&big, back, rg)?;
        let bg = h.compose(gprev.g, b)?;
        let gc = h.compose(c, g_t)?;
        let wc = rebase(h, wc, bg, gc)?;
        let jm = join_map(h, &step.join, &target, delta, b, c, wa, wc)?;
        let s = step.simplification;
        let k_in = h.compose(s.incl, jm.map.map)?;
        let epsilon = h.compose(k_in, simp.retr)?;
        let tau = h.compose(delta, upsilon)?;
        // ε α = rT k iG rG in_A ≃ rT k in_A ≃ rT in'_A δ = υ δ
        let alpha = self.ganea.stage(i).alpha;
        let w1 = h.pre(s.htpy, step.join.pushout.in_a)?;
        let rk = h.compose(jm.map.map, simp.retr)?;
        let w1 = h.post(rk, w1)?;
        let w2 = h.post(simp.retr, jm.left.witness)?;
        let lw = concat_all(h, &[w1, w2])?;
        let ea = h.compose(alpha, epsilon)?;
        let lw = rebase(h, lw, ea, tau)?;
        let left = HSquare {
            top: alpha,
            left: delta,
            right: epsilon,
            bottom: upsilon,
            witness: lw,
        };
        let g = self.ganea.stage(i).g;
        let right = self.right_square(h, g, epsilon, t, i + 1)?;
        self.stages.push(WhiteheadStage {
            object: simp.small,
            t,
            upsilon,
            delta,
            epsilon,
            tau,
            source_product: prod_a,
            left,
            right,
            right_witness: h.reverse(right.witness)?,
        });
        Ok(())
    }
}

/// `(Δ_{i+1}, δ_i, ε_i, τ_i)` of `ι`.
#[derive(Clone, Copy, Debug)]
pub struct DiagonalFamily {
    pub diagonal: MapRef,
    pub delta: MapRef,
    pub epsilon: MapRef,
    pub tau: MapRef,
    /// `(∗ → A, ∗ → X^i, δ_i, in_1)`, with `in_1 = (id, 0): X^i → X^i × A`.
    pub base_square: HSquare,
}

/// Reads the family off a tower built to stage `i`; every square of the
/// chain `∗ → A → G_i → X` over `X^i → X^i × A → T_i → X^{i+1}` is checked.
pub fn diagonal_family<H: HomotopyCategory + ?Sized>(
    h: &mut H,
    tower: &WhiteheadTower,
    i: usize,
) -> HcatResult<DiagonalFamily> {
    let st = tower.stages[i];
    let a = tower.iota.src;
    let xi = tower.powers[i].object;
    let z = h.zero();
    let za = h.zero_map(z, a)?;
    let zx = h.zero_map(z, xi)?;
    let id = h.identity(xi)?;
    let to_a = h.zero_map(xi, a)?;
    let in1 = h.pair(&st.source_product, id, to_a)?;
    let lhs = h.compose(za, st.delta)?;
    let rhs = h.compose(zx, in1)?;
    let w = h.refl(lhs)?;
    let w = rebase(h, w, lhs, rhs)?;
    let base_square = HSquare {
        top: za,
        left: zx,
        right: st.delta,
        bottom: in1,
        witness: w,
    };
    for sq in [&base_square, &st.left, &st.right] {
        if !h.is_h_pullback_square(sq)? {
            return Err(HcatError::Incoherent(format!("diagonal family square at stage {i} is not a pullback")));
        }
    }
    Ok(DiagonalFamily {
        diagonal: tower.powers[i + 1].diagonal,
        delta: st.delta,
        epsilon: st.epsilon,
        tau: st.tau,
        base_square,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{ChainComplex, ChainWorkspace, GradedMap};
    use crate::ganea::secat;
    use crate::linalg::Matrix;

    fn setup(ws: &mut ChainWorkspace) -> MapRef {
        let a = ws.add_complex(ChainComplex::sphere(1), "A");
        let sum = crate::chain::direct_sum(&[&ChainComplex::sphere(1), &ChainComplex::sphere(2)]).complex;
        let x = ws.add_complex(sum, "X");
        let (ga, gx) = (ws.complex(a).grading().clone(), ws.complex(x).grading().clone());
        let g = GradedMap::from_fn(&ga, &gx, 0, |n| {
            if n == 1 {
                Matrix::from_i64(1, 1, &[1])
            } else {
                Matrix::zeros(gx.dim(n), ga.dim(n))
            }
        });
        ws.add_map(a, x, g).unwrap()
    }

    #[test]
    fn comparison_squares_are_pullbacks() {
        let mut ws = ChainWorkspace::new();
        let iota = setup(&mut ws);
        let t = WhiteheadTower::build(&mut ws, iota, 2).unwrap();
        for st in &t.stages {
            assert!(ws.is_h_pullback_square(&st.left).unwrap());
            assert!(ws.is_h_pullback_square(&st.right).unwrap());
            let ea = ws.compose(t.ganea.stage(0).alpha, t.stages[0].epsilon).unwrap();
            assert!(ws.is_homotopic(ea, t.stages[0].tau).unwrap().is_some());
        }
        for i in 0..=2 {
            diagonal_family(&mut ws, &t, i).unwrap();
        }
    }

    #[test]
    fn first_fat_wedge_of_a_point_is_the_wedge() {
        let mut ws = ChainWorkspace::new();
        let x = ws.add_complex(ChainComplex::sphere(2), "X");
        let z = ws.zero();
        let iota = ws.zero_map(z, x).unwrap();
        let t = WhiteheadTower::build(&mut ws, iota, 1).unwrap();
        assert!(ws.is_equivalence(t.stages[1].t).unwrap().is_some());
        let betti = ws.complex(t.stages[1].object).betti();
        assert_eq!(betti.dim(2), 2);
    }

    #[test]
    fn whitehead_and_ganea_sections_agree() {
        let mut ws = ChainWorkspace::new();
        let iota = setup(&mut ws);
        let t = WhiteheadTower::build(&mut ws, iota, 2).unwrap();
        let s = secat(&mut ws, iota, 2).unwrap().finite().unwrap();
        // secat ≤ n iff Δ_{n+1} lifts through t_n
        for n in 0..=2 {
            let st = t.stages[n];
            let lifts = lifts_through(&mut ws, t.powers[n + 1].diagonal, st.t);
            assert_eq!(lifts, n >= s);
        }
    }

    fn lifts_through(ws: &mut ChainWorkspace, f: MapRef, t: MapRef) -> bool {
        let hf = ws.homology_of(f);
        let ht = ws.homology_of(t);
        hf.src().degrees().all(|n| {
            let m = ht.comp(n);
            m.hstack(&hf.comp(n)).rank() == m.rank()
        })
    }

    #[test]
    fn first_delta_of_identity_is_the_diagonal() {
        let mut ws = ChainWorkspace::new();
        let x = ws.add_complex(ChainComplex::sphere(2), "X");
        let id = ws.identity(x).unwrap();
        let t = WhiteheadTower::build(&mut ws, id, 1).unwrap();
        let fam = diagonal_family(&mut ws, &t, 1).unwrap();
        let d = ws.map_data(fam.delta).clone();
        let diag = ws.map_data(fam.diagonal).clone();
        assert_eq!(d, diag);
    }
}
