//! The chain backend as a [`HomotopyCategory`].

use std::collections::HashMap;
use std::sync::Arc;

use crate::hcat::{
    Coproduct, HPullback, HPushout, HcatError, HcatResult, HomotopyCategory, HomotopyWitness, MapRef, ObjRef,
    Product, Simplification, Whisker,
};

use super::complex::{ChainComplex, GradedMap};
use super::constructions::{h_pullback_complex, h_pushout_complex, whisker_in_map, whisker_out_map};
use super::solve::{
    is_quasi_isomorphism, minimize, quasi_inverse, solve_homotopy, solve_rel_section, solve_section,
    MinimalModel, RelSectionError,
};

#[derive(Clone)]
struct ObjEntry {
    complex: ChainComplex,
    label: String,
    model: Option<Arc<MinimalModel>>,
}

#[derive(Clone)]
struct MapEntry {
    src: ObjRef,
    tgt: ObjRef,
    f: GradedMap,
}

#[derive(Clone)]
struct WitnessEntry {
    lhs: MapRef,
    rhs: MapRef,
    s: GradedMap,
}

/// Arena of complexes, chain maps and homotopies. Handles stay valid for
/// the workspace's lifetime; nothing is ever removed or mutated in place.
#[derive(Clone)]
pub struct ChainWorkspace {
    objects: Vec<ObjEntry>,
    maps: Vec<MapEntry>,
    witnesses: Vec<WitnessEntry>,
    pushouts: HashMap<ObjRef, (MapRef, MapRef)>,
    pullbacks: HashMap<ObjRef, (MapRef, MapRef)>,
    zero: ObjRef,
}

impl Default for ChainWorkspace {
    fn default() -> Self {
        Self::new()
    }
}

impl ChainWorkspace {
    pub fn new() -> Self {
        let mut ws = ChainWorkspace {
            objects: Vec::new(),
            maps: Vec::new(),
            witnesses: Vec::new(),
            pushouts: HashMap::new(),
            pullbacks: HashMap::new(),
            zero: ObjRef { id: 0 },
        };
        ws.zero = ws.add_complex(ChainComplex::zero(), "0");
        ws
    }

    pub fn add_complex(&mut self, complex: ChainComplex, label: &str) -> ObjRef {
        self.objects.push(ObjEntry {
            complex,
            label: label.to_string(),
            model: None,
        });
        ObjRef {
            id: self.objects.len() - 1,
        }
    }

    /// Registers a chain map after checking shapes and the chain-map identity.
    pub fn add_map(&mut self, src: ObjRef, tgt: ObjRef, f: GradedMap) -> HcatResult<MapRef> {
        let (x, y) = (self.obj(src)?, self.obj(tgt)?);
        if f.src() != x.complex.grading() || f.tgt() != y.complex.grading() || f.degree() != 0 {
            return Err(HcatError::InvalidMap("map shape does not match its endpoints".into()));
        }
        if !ChainComplex::is_chain_map(&x.complex, &y.complex, &f) {
            return Err(HcatError::InvalidMap("not a chain map: d f ≠ f d".into()));
        }
        Ok(self.push_map(src, tgt, f))
    }

    fn push_map(&mut self, src: ObjRef, tgt: ObjRef, f: GradedMap) -> MapRef {
        debug_assert!(ChainComplex::is_chain_map(
            &self.objects[src.id].complex,
            &self.objects[tgt.id].complex,
            &f
        ));
        self.maps.push(MapEntry { src, tgt, f });
        MapRef {
            id: self.maps.len() - 1,
            src,
            tgt,
        }
    }

    /// Registers a homotopy `s` with `d s + s d = lhs − rhs`, checking it.
    pub fn add_homotopy(&mut self, lhs: MapRef, rhs: MapRef, s: GradedMap) -> HcatResult<HomotopyWitness> {
        self.map(lhs)?;
        self.map(rhs)?;
        if lhs.src != rhs.src || lhs.tgt != rhs.tgt {
            return Err(HcatError::Mismatch("homotopy endpoints are not parallel".into()));
        }
        let (x, y) = (&self.objects[lhs.src.id].complex, &self.objects[lhs.tgt.id].complex);
        if s.src() != x.grading() || s.tgt() != y.grading() || s.degree() != 1 {
            return Err(HcatError::BadWitness("homotopy shape does not match its endpoints".into()));
        }
        if !ChainComplex::is_homotopy(x, y, &s, &self.maps[lhs.id].f, &self.maps[rhs.id].f) {
            return Err(HcatError::BadWitness("d s + s d ≠ lhs − rhs".into()));
        }
        Ok(self.push_witness(lhs, rhs, s))
    }

    fn push_witness(&mut self, lhs: MapRef, rhs: MapRef, s: GradedMap) -> HomotopyWitness {
        debug_assert!(ChainComplex::is_homotopy(
            &self.objects[lhs.src.id].complex,
            &self.objects[lhs.tgt.id].complex,
            &s,
            &self.maps[lhs.id].f,
            &self.maps[rhs.id].f
        ));
        self.witnesses.push(WitnessEntry { lhs, rhs, s });
        HomotopyWitness {
            id: self.witnesses.len() - 1,
            lhs,
            rhs,
        }
    }

    fn obj(&self, x: ObjRef) -> HcatResult<&ObjEntry> {
        self.objects
            .get(x.id)
            .ok_or_else(|| HcatError::UnknownHandle(format!("object {}", x.id)))
    }

    fn map(&self, f: MapRef) -> HcatResult<&MapEntry> {
        let e = self
            .maps
            .get(f.id)
            .ok_or_else(|| HcatError::UnknownHandle(format!("map {}", f.id)))?;
        if e.src != f.src || e.tgt != f.tgt {
            return Err(HcatError::UnknownHandle(format!("map {} has stale endpoints", f.id)));
        }
        Ok(e)
    }

    fn witness(&self, w: HomotopyWitness) -> HcatResult<&WitnessEntry> {
        let e = self
            .witnesses
            .get(w.id)
            .ok_or_else(|| HcatError::UnknownHandle(format!("witness {}", w.id)))?;
        if e.lhs != w.lhs || e.rhs != w.rhs {
            return Err(HcatError::UnknownHandle(format!("witness {} has stale endpoints", w.id)));
        }
        Ok(e)
    }

    /// The zero object, without needing `&mut`.
    pub fn zero_object(&self) -> ObjRef {
        self.zero
    }

    pub fn complex(&self, x: ObjRef) -> &ChainComplex {
        &self.objects[x.id].complex
    }

    pub fn map_data(&self, f: MapRef) -> &GradedMap {
        &self.maps[f.id].f
    }

    pub fn witness_data(&self, w: HomotopyWitness) -> &GradedMap {
        &self.witnesses[w.id].s
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    /// All object handles, in creation order.
    pub fn objects(&self) -> Vec<ObjRef> {
        (0..self.objects.len()).map(|id| ObjRef { id }).collect()
    }

    /// Minimal model, computed once per object.
    pub fn model(&mut self, x: ObjRef) -> Arc<MinimalModel> {
        if let Some(m) = &self.objects[x.id].model {
            return m.clone();
        }
        let m = Arc::new(minimize(&self.objects[x.id].complex));
        self.objects[x.id].model = Some(m.clone());
        m
    }

    pub fn is_acyclic(&mut self, x: ObjRef) -> bool {
        self.model(x).min.is_zero_object()
    }

    /// Homology matrix of a map on the chosen homology bases.
    pub fn homology_of(&mut self, f: MapRef) -> GradedMap {
        let (ms, mt) = (self.model(f.src), self.model(f.tgt));
        super::solve::homology_map(&ms, &mt, &self.maps[f.id].f)
    }

    fn add_graded(&mut self, src: ObjRef, tgt: ObjRef, f: GradedMap) -> MapRef {
        self.push_map(src, tgt, f)
    }

    /// Adds two parallel maps (the chain backend is additive).
    pub fn add_maps(&mut self, f: MapRef, g: MapRef) -> HcatResult<MapRef> {
        if f.src != g.src || f.tgt != g.tgt {
            return Err(HcatError::Mismatch("sum of non-parallel maps".into()));
        }
        let s = self.maps[f.id].f.add(&self.maps[g.id].f);
        Ok(self.push_map(f.src, f.tgt, s))
    }

    pub fn neg_map(&mut self, f: MapRef) -> HcatResult<MapRef> {
        self.map(f)?;
        let n = self.maps[f.id].f.neg();
        Ok(self.push_map(f.src, f.tgt, n))
    }
}

impl HomotopyCategory for ChainWorkspace {
    fn zero(&mut self) -> ObjRef {
        self.zero
    }

    fn label(&self, x: ObjRef) -> String {
        self.objects.get(x.id).map(|o| o.label.clone()).unwrap_or_default()
    }

    fn set_label(&mut self, x: ObjRef, label: &str) {
        if let Some(o) = self.objects.get_mut(x.id) {
            o.label = label.to_string();
        }
    }

    fn identity(&mut self, x: ObjRef) -> HcatResult<MapRef> {
        let g = self.obj(x)?.complex.grading().clone();
        Ok(self.add_graded(x, x, GradedMap::identity(&g)))
    }

    fn zero_map(&mut self, src: ObjRef, tgt: ObjRef) -> HcatResult<MapRef> {
        let s = self.obj(src)?.complex.grading().clone();
        let t = self.obj(tgt)?.complex.grading().clone();
        Ok(self.add_graded(src, tgt, GradedMap::zero(&s, &t, 0)))
    }

    fn compose(&mut self, f: MapRef, g: MapRef) -> HcatResult<MapRef> {
        self.map(f)?;
        self.map(g)?;
        if f.tgt != g.src {
            return Err(HcatError::Mismatch(format!(
                "compose: target of map {} is not the source of map {}",
                f.id, g.id
            )));
        }
        let c = self.maps[f.id].f.then(&self.maps[g.id].f);
        Ok(self.add_graded(f.src, g.tgt, c))
    }

    fn maps_equal(&self, f: MapRef, g: MapRef) -> HcatResult<bool> {
        let (a, b) = (self.map(f)?, self.map(g)?);
        Ok(a.src == b.src && a.tgt == b.tgt && a.f == b.f)
    }

    fn is_homotopic(&mut self, f: MapRef, g: MapRef) -> HcatResult<Option<HomotopyWitness>> {
        self.map(f)?;
        self.map(g)?;
        if f.src != g.src || f.tgt != g.tgt {
            return Err(HcatError::Mismatch("is_homotopic: maps are not parallel".into()));
        }
        let (ms, mt) = (self.model(f.src), self.model(f.tgt));
        let s = solve_homotopy(&ms, &mt, &self.maps[f.id].f, &self.maps[g.id].f);
        Ok(s.map(|s| self.push_witness(f, g, s)))
    }

    fn verify_witness(&self, w: HomotopyWitness) -> HcatResult<bool> {
        let e = self.witness(w)?;
        let x = &self.objects[e.lhs.src.id].complex;
        let y = &self.objects[e.lhs.tgt.id].complex;
        Ok(ChainComplex::is_homotopy(x, y, &e.s, &self.maps[e.lhs.id].f, &self.maps[e.rhs.id].f))
    }

    fn refl(&mut self, f: MapRef) -> HcatResult<HomotopyWitness> {
        self.map(f)?;
        let (s, t) = (
            self.objects[f.src.id].complex.grading().clone(),
            self.objects[f.tgt.id].complex.grading().clone(),
        );
        Ok(self.push_witness(f, f, GradedMap::zero(&s, &t, 1)))
    }

    fn reverse(&mut self, w: HomotopyWitness) -> HcatResult<HomotopyWitness> {
        let s = self.witness(w)?.s.neg();
        Ok(self.push_witness(w.rhs, w.lhs, s))
    }

    fn concat(&mut self, w1: HomotopyWitness, w2: HomotopyWitness) -> HcatResult<HomotopyWitness> {
        self.witness(w1)?;
        self.witness(w2)?;
        if !self.maps_equal(w1.rhs, w2.lhs)? {
            return Err(HcatError::Mismatch("concat: middle maps differ".into()));
        }
        let s = self.witnesses[w1.id].s.add(&self.witnesses[w2.id].s);
        Ok(self.push_witness(w1.lhs, w2.rhs, s))
    }

    fn post(&mut self, h: MapRef, w: HomotopyWitness) -> HcatResult<HomotopyWitness> {
        self.witness(w)?;
        let lhs = self.compose(w.lhs, h)?;
        let rhs = self.compose(w.rhs, h)?;
        let s = self.witnesses[w.id].s.then(&self.maps[h.id].f);
        Ok(self.push_witness(lhs, rhs, s))
    }

    fn pre(&mut self, w: HomotopyWitness, k: MapRef) -> HcatResult<HomotopyWitness> {
        self.witness(w)?;
        let lhs = self.compose(k, w.lhs)?;
        let rhs = self.compose(k, w.rhs)?;
        let s = self.maps[k.id].f.then(&self.witnesses[w.id].s);
        Ok(self.push_witness(lhs, rhs, s))
    }

    fn h_pushout(&mut self, u: MapRef, v: MapRef) -> HcatResult<HPushout> {
        self.map(u)?;
        self.map(v)?;
        if u.src != v.src {
            return Err(HcatError::Mismatch("h_pushout: span legs have different sources".into()));
        }
        let data = h_pushout_complex(
            self.complex(u.src),
            self.complex(u.tgt),
            self.complex(v.tgt),
            &self.maps[u.id].f,
            &self.maps[v.id].f,
        );
        let label = format!("({} ∨_{} {})", self.label(u.tgt), self.label(u.src), self.label(v.tgt));
        let apex = self.add_complex(data.apex, &label);
        let in_a = self.push_map(u.tgt, apex, data.in_a);
        let in_b = self.push_map(v.tgt, apex, data.in_b);
        let lhs = self.compose(u, in_a)?;
        let rhs = self.compose(v, in_b)?;
        let witness = self.push_witness(lhs, rhs, data.witness);
        self.pushouts.insert(apex, (u, v));
        Ok(HPushout {
            apex,
            u,
            v,
            in_a,
            in_b,
            witness,
        })
    }

    fn h_pullback(&mut self, f: MapRef, g: MapRef) -> HcatResult<HPullback> {
        self.map(f)?;
        self.map(g)?;
        if f.tgt != g.tgt {
            return Err(HcatError::Mismatch("h_pullback: cospan legs have different targets".into()));
        }
        let data = h_pullback_complex(
            self.complex(f.src),
            self.complex(g.src),
            self.complex(f.tgt),
            &self.maps[f.id].f,
            &self.maps[g.id].f,
        );
        let label = format!("({} ×_{} {})", self.label(f.src), self.label(f.tgt), self.label(g.src));
        let apex = self.add_complex(data.apex, &label);
        let pr_a = self.push_map(apex, f.src, data.pr_a);
        let pr_b = self.push_map(apex, g.src, data.pr_b);
        let lhs = self.compose(pr_a, f)?;
        let rhs = self.compose(pr_b, g)?;
        let witness = self.push_witness(lhs, rhs, data.witness);
        self.pullbacks.insert(apex, (f, g));
        Ok(HPullback {
            apex,
            f,
            g,
            pr_a,
            pr_b,
            witness,
        })
    }

    fn whisker_out(&mut self, po: &HPushout, f: MapRef, g: MapRef, k: HomotopyWitness) -> HcatResult<Whisker> {
        if self.pushouts.get(&po.apex) != Some(&(po.u, po.v)) {
            return Err(HcatError::Mismatch("whisker_out: not a pushout of this workspace".into()));
        }
        self.map(f)?;
        self.map(g)?;
        if f.src != po.u.tgt || g.src != po.v.tgt || f.tgt != g.tgt {
            return Err(HcatError::Mismatch("whisker_out: cocone legs do not match the span".into()));
        }
        let fu = self.compose(po.u, f)?;
        let gv = self.compose(po.v, g)?;
        self.witness(k)?;
        if !self.maps_equal(k.lhs, fu)? || !self.maps_equal(k.rhs, gv)? {
            return Err(HcatError::BadWitness("whisker_out: K does not relate f∘u and g∘v".into()));
        }
        if !self.verify_witness(k)? {
            return Err(HcatError::BadWitness("whisker_out: K fails verification".into()));
        }
        let j = whisker_out_map(
            self.complex(po.u.src),
            self.complex(po.u.tgt),
            self.complex(po.v.tgt),
            self.complex(f.tgt),
            &self.maps[f.id].f,
            &self.maps[g.id].f,
            &self.witnesses[k.id].s,
        );
        let map = self.push_map(po.apex, f.tgt, j);
        let ja = self.compose(po.in_a, map)?;
        let jb = self.compose(po.in_b, map)?;
        let on_a = self.refl(ja)?;
        let on_a = crate::hcat::rebase(self, on_a, ja, f)?;
        let on_b = self.refl(jb)?;
        let on_b = crate::hcat::rebase(self, on_b, jb, g)?;
        Ok(Whisker { map, on_a, on_b })
    }

    fn whisker_in(&mut self, pb: &HPullback, p: MapRef, q: MapRef, s: HomotopyWitness) -> HcatResult<Whisker> {
        if self.pullbacks.get(&pb.apex) != Some(&(pb.f, pb.g)) {
            return Err(HcatError::Mismatch("whisker_in: not a pullback of this workspace".into()));
        }
        self.map(p)?;
        self.map(q)?;
        if p.tgt != pb.f.src || q.tgt != pb.g.src || p.src != q.src {
            return Err(HcatError::Mismatch("whisker_in: cone legs do not match the cospan".into()));
        }
        let fp = self.compose(p, pb.f)?;
        let gq = self.compose(q, pb.g)?;
        self.witness(s)?;
        let oriented = if self.maps_equal(s.lhs, fp)? && self.maps_equal(s.rhs, gq)? {
            self.witnesses[s.id].s.clone()
        } else if self.maps_equal(s.lhs, gq)? && self.maps_equal(s.rhs, fp)? {
            self.witnesses[s.id].s.neg()
        } else {
            return Err(HcatError::BadWitness("whisker_in: S does not relate f∘p and g∘q".into()));
        };
        if !self.verify_witness(s)? {
            return Err(HcatError::BadWitness("whisker_in: S fails verification".into()));
        }
        let w = whisker_in_map(
            self.complex(p.src),
            self.complex(pb.f.src),
            self.complex(pb.g.src),
            self.complex(pb.f.tgt),
            &self.maps[p.id].f,
            &self.maps[q.id].f,
            &oriented,
        );
        let map = self.push_map(p.src, pb.apex, w);
        let pa = self.compose(map, pb.pr_a)?;
        let pbm = self.compose(map, pb.pr_b)?;
        let on_a = self.refl(pa)?;
        let on_a = crate::hcat::rebase(self, on_a, pa, p)?;
        let on_b = self.refl(pbm)?;
        let on_b = crate::hcat::rebase(self, on_b, pbm, q)?;
        Ok(Whisker { map, on_a, on_b })
    }

    fn pair_witness(&mut self, prod: &Product, w1: HomotopyWitness, w2: HomotopyWitness) -> HcatResult<HomotopyWitness> {
        self.witness(w1)?;
        self.witness(w2)?;
        if w1.lhs.src != w2.lhs.src || w1.lhs.tgt != prod.pr1.tgt || w2.lhs.tgt != prod.pr2.tgt {
            return Err(HcatError::Mismatch("pair_witness: witnesses do not match the product".into()));
        }
        let lhs = self.pair(prod, w1.lhs, w2.lhs)?;
        let rhs = self.pair(prod, w1.rhs, w2.rhs)?;
        let apex = self.complex(prod.apex).grading().clone();
        let src = self.complex(w1.lhs.src).grading().clone();
        let (s1, s2) = (&self.witnesses[w1.id].s, &self.witnesses[w2.id].s);
        // the product apex is X ⊕ Y (the zero object contributes nothing)
        let s = GradedMap::from_fn(&src, &apex, 1, |n| s1.comp(n).vstack(&s2.comp(n)));
        Ok(self.push_witness(lhs, rhs, s))
    }

    fn copair_witness(
        &mut self,
        coprod: &Coproduct,
        w1: HomotopyWitness,
        w2: HomotopyWitness,
    ) -> HcatResult<HomotopyWitness> {
        self.witness(w1)?;
        self.witness(w2)?;
        if w1.lhs.tgt != w2.lhs.tgt || w1.lhs.src != coprod.in1.src || w2.lhs.src != coprod.in2.src {
            return Err(HcatError::Mismatch("copair_witness: witnesses do not match the coproduct".into()));
        }
        let lhs = self.copair(coprod, w1.lhs, w2.lhs)?;
        let rhs = self.copair(coprod, w1.rhs, w2.rhs)?;
        let apex = self.complex(coprod.apex).grading().clone();
        let tgt = self.complex(w1.lhs.tgt).grading().clone();
        let (s1, s2) = (&self.witnesses[w1.id].s, &self.witnesses[w2.id].s);
        let s = GradedMap::from_fn(&apex, &tgt, 1, |n| s1.comp(n).hstack(&s2.comp(n)));
        Ok(self.push_witness(lhs, rhs, s))
    }

    fn is_equivalence(&mut self, f: MapRef) -> HcatResult<Option<MapRef>> {
        self.map(f)?;
        let (ms, mt) = (self.model(f.src), self.model(f.tgt));
        if !is_quasi_isomorphism(&ms, &mt, &self.maps[f.id].f) {
            return Ok(None);
        }
        let inv = quasi_inverse(&ms, &mt, &self.maps[f.id].f).expect("quasi-isomorphism has an inverse");
        Ok(Some(self.push_map(f.tgt, f.src, inv)))
    }

    fn has_section(&mut self, g: MapRef) -> HcatResult<Option<MapRef>> {
        self.map(g)?;
        let (mg, mx) = (self.model(g.src), self.model(g.tgt));
        let sigma = solve_section(&mg, &mx, &self.maps[g.id].f);
        Ok(sigma.map(|s| self.push_map(g.tgt, g.src, s)))
    }

    fn has_rel_section(&mut self, g: MapRef, iota: MapRef, alpha: MapRef) -> HcatResult<Option<MapRef>> {
        self.map(g)?;
        self.map(iota)?;
        self.map(alpha)?;
        if iota.tgt != g.tgt || alpha.src != iota.src || alpha.tgt != g.src {
            return Err(HcatError::Mismatch("has_rel_section: maps do not form a triangle".into()));
        }
        let (mg, mx, ma) = (self.model(g.src), self.model(g.tgt), self.model(iota.src));
        let r = solve_rel_section(
            &mg,
            &mx,
            &ma,
            &self.maps[g.id].f,
            &self.maps[iota.id].f,
            &self.maps[alpha.id].f,
        );
        match r {
            Err(RelSectionError::Incoherent) => Err(HcatError::Incoherent("g ∘ α is not homotopic to ι".into())),
            Ok(None) => Ok(None),
            Ok(Some(s)) => Ok(Some(self.push_map(g.tgt, g.src, s))),
        }
    }

    fn simplify(&mut self, x: ObjRef) -> HcatResult<Option<Simplification>> {
        self.obj(x)?;
        if self.complex(x).differential().is_zero() {
            return Ok(None);
        }
        let m = self.model(x);
        let label = format!("min {}", self.label(x));
        let small = self.add_complex(m.min.clone(), &label);
        let incl = self.push_map(small, x, m.incl.clone());
        let retr = self.push_map(x, small, m.retr.clone());
        let ir = self.compose(retr, incl)?;
        let id = self.identity(x)?;
        // d h + h d = id − incl∘retr, so −h witnesses incl∘retr ≃ id
        let htpy = self.push_witness(ir, id, m.htpy.neg());
        Ok(Some(Simplification {
            small,
            incl,
            retr,
            htpy,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::complex::Grading;
    use crate::linalg::Matrix;

    fn sample(ws: &mut ChainWorkspace) -> ObjRef {
        let g = Grading::new(0, vec![1, 2, 1]);
        let c = ChainComplex::new(g, |n| match n {
            1 => Some(Matrix::from_i64(1, 2, &[1, 1])),
            _ => None,
        })
        .unwrap();
        assert!(!c.is_acyclic());
        ws.add_complex(c, "X")
    }

    #[test]
    fn identity_laws() {
        let mut ws = ChainWorkspace::new();
        let x = sample(&mut ws);
        let id = ws.identity(x).unwrap();
        let z = ws.zero();
        let f = ws.zero_map(x, z).unwrap();
        let c = ws.compose(id, f).unwrap();
        assert!(ws.maps_equal(c, f).unwrap());
        let idz = ws.identity(z).unwrap();
        let c = ws.compose(f, idz).unwrap();
        assert!(ws.maps_equal(c, f).unwrap());
        assert!(matches!(ws.compose(f, f), Err(HcatError::Mismatch(_))));
    }

    #[test]
    fn pushout_of_identities_is_equivalent() {
        let mut ws = ChainWorkspace::new();
        let x = sample(&mut ws);
        let id = ws.identity(x).unwrap();
        let po = ws.h_pushout(id, id).unwrap();
        assert!(ws.is_equivalence(po.in_a).unwrap().is_some());
        assert!(ws.is_h_pushout_square(&po.square()).unwrap());
        assert!(ws.is_h_pullback_square(&po.square()).unwrap());
    }

    #[test]
    fn canonical_whisker_is_identity() {
        let mut ws = ChainWorkspace::new();
        let x = sample(&mut ws);
        let s = ws.add_complex(ChainComplex::sphere(1), "S1");
        let z = ws.zero();
        let u = ws.zero_map(s, x).unwrap();
        let v = ws.zero_map(s, z).unwrap();
        let po = ws.h_pushout(u, v).unwrap();
        let j = ws.whisker_out(&po, po.in_a, po.in_b, po.witness).unwrap();
        let id = ws.identity(po.apex).unwrap();
        assert!(ws.maps_equal(j.map, id).unwrap());
    }

    #[test]
    fn canonical_whisker_in_is_identity() {
        let mut ws = ChainWorkspace::new();
        let x = sample(&mut ws);
        let id = ws.identity(x).unwrap();
        let pb = ws.h_pullback(id, id).unwrap();
        let w = ws.whisker_in(&pb, pb.pr_a, pb.pr_b, pb.witness).unwrap();
        let idp = ws.identity(pb.apex).unwrap();
        assert!(ws.maps_equal(w.map, idp).unwrap());
    }

    #[test]
    fn corner_replaced_by_zero_is_not_a_pushout() {
        let mut ws = ChainWorkspace::new();
        let x = sample(&mut ws);
        let id = ws.identity(x).unwrap();
        let z = ws.zero();
        let zx = ws.zero_map(x, z).unwrap();
        let zl = ws.compose(id, zx).unwrap();
        let w = ws.refl(zl).unwrap();
        let sq = crate::hcat::HSquare {
            top: id,
            left: id,
            right: zx,
            bottom: zx,
            witness: w,
        };
        assert!(!ws.is_h_pushout_square(&sq).unwrap());
    }

    #[test]
    fn tampered_witness_is_rejected() {
        let mut ws = ChainWorkspace::new();
        let x = sample(&mut ws);
        let id = ws.identity(x).unwrap();
        let g = ws.complex(x).grading().clone();
        let s = GradedMap::from_fn(&g, &g, 1, |n| {
            let mut m = Matrix::zeros(g.dim(n + 1), g.dim(n));
            if n == 0 {
                m[(0, 0)] = crate::linalg::q(1);
            }
            m
        });
        assert!(matches!(ws.add_homotopy(id, id, s), Err(HcatError::BadWitness(_))));
    }

    #[test]
    fn product_with_zero_is_equivalent() {
        let mut ws = ChainWorkspace::new();
        let x = sample(&mut ws);
        let z = ws.zero();
        let p = ws.product(x, z).unwrap();
        assert!(ws.is_equivalence(p.pr1).unwrap().is_some());
        let id = ws.identity(x).unwrap();
        let prod = ws.product(x, x).unwrap();
        let diag = ws.pair(&prod, id, id).unwrap();
        let back = ws.compose(diag, prod.pr1).unwrap();
        assert!(ws.maps_equal(back, id).unwrap());
    }
}
