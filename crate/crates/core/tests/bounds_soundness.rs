//! Propagation against exact values computed in the chain backend: the
//! structural facts of a random map never exclude a computed value, and
//! asserting every computed value at once never contradicts a rule.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use secat_core::bounds::{BoundsEngine, FactBase, Interval, Invariant, Key, Relation};
use secat_core::chain::ChainWorkspace;
use secat_core::ganea::{
    cat, cat_map, cofibre, compl_map, compl_obj, diagonal, fibre, first_delta, relcat, secat, GaneaTower, InvariantResult,
    InvariantValue,
};
use secat_core::hcat::{HcatResult, HomotopyCategory, MapRef, ObjRef};
use secat_core::random::{random_chain_map, random_complex, Limits};

const CAP: usize = 3;
const INSTANCES: u64 = 100;

/// What a computed result says about the true value.
fn known(r: &InvariantResult) -> Interval {
    match r.value {
        InvariantValue::Finite(n) => Interval::point(n as u32),
        InvariantValue::OverCap(c) => Interval::at_least(c as u32 + 1),
    }
}

struct Instance {
    facts: FactBase,
    values: Vec<(Key, Interval)>,
}

struct Builder<'a> {
    ws: &'a mut ChainWorkspace,
    facts: FactBase,
    values: Vec<(Key, Interval)>,
}

impl Builder<'_> {
    fn object(&mut self, x: ObjRef, name: &str) -> HcatResult<usize> {
        let id = self.facts.declare_object(name).unwrap();
        let c = cat(self.ws, x, CAP)?;
        self.values.push((Key::new(Invariant::Cat, id), known(&c)));
        if self.ws.is_acyclic(x) {
            self.facts.relate(Relation::Zero { object: id }).unwrap();
        }
        Ok(id)
    }

    fn map(&mut self, f: MapRef, name: &str, src: usize, tgt: usize) -> HcatResult<usize> {
        let id = self.facts.declare_map(name, src, tgt).unwrap();
        let s = secat(self.ws, f, CAP)?;
        let r = relcat(self.ws, f, CAP)?;
        self.values.push((Key::new(Invariant::Secat, id), known(&s)));
        self.values.push((Key::new(Invariant::Relcat, id), known(&r)));
        if self.ws.is_equivalence(f)?.is_some() {
            self.facts.relate(Relation::Equivalence { map: id }).unwrap();
        } else if self.ws.has_section(f)?.is_some() {
            self.facts.relate(Relation::Section { map: id }).unwrap();
        }
        Ok(id)
    }
}

fn instance(seed: u64) -> HcatResult<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let limits = Limits {
        max_dim: 3,
        max_span: 3,
        min_degree: 0,
    };
    let (a, x) = (random_complex(&mut rng, limits), random_complex(&mut rng, limits));
    let f = random_chain_map(&mut rng, &a, &x);
    let mut ws = ChainWorkspace::new();
    let (oa, ox) = (ws.add_complex(a, "A"), ws.add_complex(x, "X"));
    let iota = ws.add_map(oa, ox, f)?;
    let tower = GaneaTower::build(&mut ws, iota, 2)?;
    let cof = cofibre(&mut ws, iota)?;
    let fib = fibre(&mut ws, iota)?;
    let d1 = first_delta(&mut ws, iota)?;
    let diag = diagonal(&mut ws, ox)?;

    let mut b = Builder {
        ws: &mut ws,
        facts: FactBase::new(),
        values: Vec::new(),
    };
    let ea = b.object(oa, "A")?;
    let ex = b.object(ox, "X")?;
    let ei = b.map(iota, "iota", ea, ex)?;
    for i in 1..=2 {
        let st = tower.stage(i);
        let g = b.object(st.object, &format!("G{i}"))?;
        let alpha = b.map(st.alpha, &format!("alpha{i}"), ea, g)?;
        b.facts.relate(Relation::GaneaAlpha { alpha, iota: ei, stage: i as u32 }).unwrap();
    }
    for i in 0..=1 {
        let step = &tower.steps[i];
        let fi = b.object(step.fibre(), &format!("F{i}"))?;
        let gi = b.facts.lookup(&format!("G{i}")).unwrap_or(ea);
        let beta = b.map(step.beta(), &format!("beta{i}"), fi, gi)?;
        b.facts.relate(Relation::GaneaBeta { beta, iota: ei, stage: i as u32 }).unwrap();
    }
    let ec = b.object(cof.apex, "C")?;
    let eq = b.map(cof.in_a, "q", ex, ec)?;
    b.facts.relate(Relation::CofibreOf { cofibre: ec, map: ei, inclusion: Some(eq) }).unwrap();
    let ef = b.object(fib.apex, "F")?;
    let ek = b.map(fib.pr_a, "k", ef, ea)?;
    b.facts.relate(Relation::FibreOf { inclusion: ek, map: ei }).unwrap();
    let cm = cat_map(b.ws, iota, CAP)?;
    b.values.push((Key::new(Invariant::CatMap, ei), known(&cm)));

    let xa = b.ws.product(ox, oa)?;
    let exa = b.object(xa.apex, "XxA")?;
    let ed = b.map(d1, "d1", ea, exa)?;
    b.facts.relate(Relation::DeltaOf { delta: ed, iota: ei, stage: 1 }).unwrap();
    let cmap = compl_map(b.ws, iota, CAP)?;
    b.values.push((Key::new(Invariant::ComplMap, ei), known(&cmap)));

    let xx = b.ws.product(ox, ox)?;
    let exx = b.object(xx.apex, "XxX")?;
    b.facts.relate(Relation::ProductOf { product: exx, left: ex, right: ex }).unwrap();
    let ediag = b.map(diag, "diag", ex, exx)?;
    b.facts.relate(Relation::DiagonalOf { diagonal: ediag, object: ex, arity: 2 }).unwrap();
    let co = compl_obj(b.ws, ox, CAP)?;
    b.values.push((Key::new(Invariant::Compl, ex), known(&co)));

    Ok(Instance {
        facts: b.facts,
        values: b.values,
    })
}

fn overlaps(a: Interval, b: Interval) -> bool {
    !a.meet(&b).is_empty()
}

#[test]
fn structural_facts_never_exclude_computed_values() {
    for seed in 0..INSTANCES {
        let inst = instance(seed).unwrap();
        let mut e = BoundsEngine::from_facts(inst.facts.clone()).unwrap();
        e.propagate().unwrap_or_else(|err| panic!("seed {seed}: {err}"));
        e.check_consistency().unwrap();
        for (k, v) in &inst.values {
            let iv = e.interval(*k).unwrap();
            assert!(
                overlaps(iv, *v),
                "seed {seed}: {} derived {iv}, computed {v}\n{}",
                e.facts().key_label(*k),
                e.explain(*k)
            );
        }
    }
}

#[test]
fn computed_values_satisfy_every_rule() {
    for seed in 0..INSTANCES {
        let inst = instance(seed).unwrap();
        let mut e = BoundsEngine::from_facts(inst.facts).unwrap();
        for (k, v) in &inst.values {
            e.assert_fact(*k, *v, "chain backend").unwrap_or_else(|err| panic!("seed {seed}: {err}"));
        }
        e.propagate().unwrap_or_else(|err| panic!("seed {seed}: {err}"));
        e.check_consistency().unwrap();
    }
}

