//! The reproduction suite: the three worked examples derived by propagation,
//! the randomized law and formula suites in the chain backend, the
//! certificate suite and the two counterexample witnesses.
//!
//! Items are deterministic: the same options give the same reports.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{parse_facts, BoundsEngine, BoundsError, Interval, Invariant, RuleId};
use crate::chain::{ChainDocument, ChainWorkspace, GradedMap};
use crate::cohom::{builtin_ring, compl_lower, parse_ring_file, secat_lower};
use crate::ganea::{
    cofibre_certificate, pinch, pinch_certificate, relcat, secat, suspension_compl_certificate,
    validate_pushcat_certificate, validate_relcat_certificate, GaneaTower, InvariantValue, Verdict, DEFAULT_CAP,
};
use crate::hcat::{HcatResult, HomotopyCategory, MapRef};
use crate::laws::{Law, LAWS};
use crate::random::{random_chain_map, random_complex, random_homotopic, Limits};

pub const HOPF_FACTS: &str = include_str!("../data/hopf.facts");
pub const CP3S4_FACTS: &str = include_str!("../data/cp3s4.facts");
pub const CP3S4_RING: &str = include_str!("../data/cp3s4.ring");
pub const EVEN_SPHERE_FACTS: &str = include_str!("../data/evensphere.facts");
pub const PUSHOUT_INCREASE_CHAIN: &str = include_str!("../data/suspension-increase.chain");
pub const JOIN_ALPHA_CHAIN: &str = include_str!("../data/join-alpha.chain");

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub disabled_rules: Vec<RuleId>,
    pub law_instances: u64,
    pub formula_instances: u64,
    pub certificate_instances: u64,
    pub cap: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            disabled_rules: Vec::new(),
            law_instances: 200,
            formula_instances: 100,
            certificate_instances: 10,
            cap: DEFAULT_CAP,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Item {
    Hopf,
    ComplexityCp3S4,
    EvenSpheres,
    Law(Law),
    MinFormulas,
    Certificates,
    PushoutIncrease,
    StrictAlpha,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ItemReport {
    pub id: String,
    pub title: String,
    pub passed: bool,
    pub instances: u64,
    pub details: Vec<String>,
}

/// Every item, in report order.
pub fn items() -> Vec<Item> {
    let mut v = vec![Item::Hopf, Item::ComplexityCp3S4, Item::EvenSpheres];
    v.extend(LAWS.iter().map(|&l| Item::Law(l)));
    v.extend([Item::MinFormulas, Item::Certificates, Item::PushoutIncrease, Item::StrictAlpha]);
    v
}

impl Item {
    pub fn id(self) -> &'static str {
        match self {
            Item::Hopf => "hopf",
            Item::ComplexityCp3S4 => "cp3-s4",
            Item::EvenSpheres => "even-spheres",
            Item::Law(l) => l.id(),
            Item::MinFormulas => "min-formulas",
            Item::Certificates => "certificates",
            Item::PushoutIncrease => "pushout-increase",
            Item::StrictAlpha => "strict-alpha",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Item::Hopf => "Hopf map: secat(h) = 1 and relcat(h) = 2",
            Item::ComplexityCp3S4 => "CP3 -> S4: compl_map = 2 from the zero-divisor bound",
            Item::EvenSpheres => "strong complexity of S2, S4, S6 is 2",
            Item::Law(l) => l.statement(),
            Item::MinFormulas => "relcat(alpha_i), secat(beta_i), relcat(beta_i) as minima; secat <= relcat <= secat + 1",
            Item::Certificates => "pinch at length 1, suspension diagonal at length 2, lengths bound relcat",
            Item::PushoutIncrease => "secat strictly increases under a pushout",
            Item::StrictAlpha => "secat(alpha_1) > min(1, secat) for a collapse A -> 0",
        }
    }

    pub fn run(self, opts: &SuiteOptions) -> ItemReport {
        let mut report = ItemReport {
            id: self.id().to_string(),
            title: self.title().to_string(),
            passed: false,
            instances: 1,
            details: Vec::new(),
        };
        let outcome = match self {
            Item::Hopf => hopf(opts, &mut report),
            Item::ComplexityCp3S4 => cp3_s4(opts, &mut report),
            Item::EvenSpheres => even_spheres(opts, &mut report),
            Item::Law(l) => law_suite(l, opts, &mut report),
            Item::MinFormulas => min_formula_suite(opts, &mut report),
            Item::Certificates => certificate_suite(opts, &mut report),
            Item::PushoutIncrease => pushout_increase(opts, &mut report),
            Item::StrictAlpha => strict_alpha(opts, &mut report),
        };
        match outcome {
            Ok(passed) => report.passed = passed,
            Err(e) => report.details.push(format!("error: {e}")),
        }
        report
    }
}

pub fn run_all(opts: &SuiteOptions) -> Vec<ItemReport> {
    items().into_iter().map(|i| i.run(opts)).collect()
}

/// Parses `text` without its estimator-sourced assertions; callers assert
/// what the estimator actually computes.
fn engine_without_estimates(text: &str, opts: &SuiteOptions) -> Result<BoundsEngine, BoundsError> {
    let kept: Vec<&str> = text.lines().filter(|l| !l.contains("source estimator")).collect();
    let mut e = BoundsEngine::from_facts(parse_facts(&kept.join("\n"))?)?;
    for &r in &opts.disabled_rules {
        e.disable_rule(r);
    }
    Ok(e)
}

fn expect_point(e: &BoundsEngine, inv: Invariant, name: &str, want: u32, report: &mut ItemReport) -> Result<bool, String> {
    let key = e.key(inv, name).map_err(|x| x.to_string())?;
    let got = e.interval(key).map_err(|x| x.to_string())?;
    report.details.push(format!("{}({name}) = {got}", inv.name()));
    Ok(got == Interval::point(want))
}

fn hopf(opts: &SuiteOptions, report: &mut ItemReport) -> Result<bool, String> {
    let mut e = engine_without_estimates(HOPF_FACTS, opts).map_err(|x| x.to_string())?;
    e.propagate().map_err(|x| x.to_string())?;
    let s = expect_point(&e, Invariant::Secat, "h", 1, report)?;
    let r = expect_point(&e, Invariant::Relcat, "h", 2, report)?;
    Ok(s && r)
}

fn cp3_s4(opts: &SuiteOptions, report: &mut ItemReport) -> Result<bool, String> {
    let rings = parse_ring_file(CP3S4_RING).map_err(|x| x.to_string())?;
    let delta = rings.hom("delta").ok_or("ring data has no hom delta")?;
    let cup = secat_lower(delta, opts.cap);
    report.details.push(format!(
        "kernel cup-length of delta = {}: {}",
        cup.length,
        cup.describe(delta.src())
    ));
    let mut e = engine_without_estimates(CP3S4_FACTS, opts).map_err(|x| x.to_string())?;
    let key = e.key(Invariant::Secat, "d1").map_err(|x| x.to_string())?;
    e.assert_fact(key, Interval::at_least(cup.length as u32), "estimator:cp3s4.ring")
        .map_err(|x| x.to_string())?;
    e.propagate().map_err(|x| x.to_string())?;
    let ok = expect_point(&e, Invariant::ComplMap, "iota", 2, report)?;
    Ok(cup.length >= 2 && ok)
}

fn even_spheres(opts: &SuiteOptions, report: &mut ItemReport) -> Result<bool, String> {
    let mut e = engine_without_estimates(EVEN_SPHERE_FACTS, opts).map_err(|x| x.to_string())?;
    let mut ok = true;
    for n in [2, 4, 6] {
        let ring = builtin_ring(&format!("sphere({n})")).map_err(|x| x.to_string())?;
        let cup = compl_lower(&ring, opts.cap).map_err(|x| x.to_string())?;
        report.details.push(format!("zero-divisor cup-length of S{n} = {}", cup.length));
        ok &= cup.length == 2;
        let key = e.key(Invariant::Compl, &format!("S{n}")).map_err(|x| x.to_string())?;
        e.assert_fact(key, Interval::at_least(cup.length as u32), &format!("estimator:sphere({n})"))
            .map_err(|x| x.to_string())?;
    }
    e.propagate().map_err(|x| x.to_string())?;
    for n in [2, 4, 6] {
        ok &= expect_point(&e, Invariant::StrongCompl, &format!("S{n}"), 2, report)?;
    }
    Ok(ok)
}

fn law_suite(law: Law, opts: &SuiteOptions, report: &mut ItemReport) -> Result<bool, String> {
    report.instances = opts.law_instances;
    let mut held = [0u64; 2];
    let mut failures = Vec::new();
    for seed in 0..opts.law_instances {
        match law.check(seed) {
            Ok(o) => held[o.truth as usize] += 1,
            Err(e) => failures.push(e),
        }
    }
    if matches!(law, Law::PrismPushout | Law::PrismPullback) {
        report.details.push(format!("both sides true {}, both sides false {}", held[1], held[0]));
    }
    report.details.push(format!("{} failures", failures.len()));
    report.details.extend(failures.iter().take(3).cloned());
    Ok(failures.is_empty())
}

/// `min(bound, value)` when it is determined by what the backend computed.
fn min_with(bound: usize, value: InvariantValue) -> Option<usize> {
    match value {
        InvariantValue::Finite(v) => Some(bound.min(v)),
        InvariantValue::OverCap(c) if bound <= c => Some(bound),
        InvariantValue::OverCap(_) => None,
    }
}

fn show(v: InvariantValue) -> String {
    match v {
        InvariantValue::Finite(n) => n.to_string(),
        InvariantValue::OverCap(c) => format!("OVER_CAP({c})"),
    }
}

/// A random map; every fourth is null and every fourth an equivalence, so
/// the corpus covers all reachable pairs (secat, relcat).
/// The map behind seed `seed` of the min-formula suite: a zero map, a
/// perturbed identity or a random chain map, by `seed % 4`.
pub fn random_map(seed: u64, ws: &mut ChainWorkspace) -> HcatResult<MapRef> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_complex(&mut rng, Limits::default());
    let x = if seed % 4 == 1 { a.clone() } else { random_complex(&mut rng, Limits::default()) };
    let f = match seed % 4 {
        0 => GradedMap::zero(a.grading(), x.grading(), 0),
        1 => random_homotopic(&mut rng, &a, &x, &GradedMap::identity(a.grading())),
        _ => random_chain_map(&mut rng, &a, &x),
    };
    let (oa, ox) = (ws.add_complex(a, "A"), ws.add_complex(x, "X"));
    ws.add_map(oa, ox, f)
}

/// Stages whose Ganea maps are compared with the minima.
const FORMULA_STAGES: usize = 3;

/// The violated identities of one random map.
pub fn min_formula_violations(seed: u64, cap: usize) -> HcatResult<(Vec<String>, (InvariantValue, InvariantValue))> {
    let mut ws = ChainWorkspace::new();
    let iota = random_map(seed, &mut ws)?;
    let s = secat(&mut ws, iota, cap)?.value;
    let r = relcat(&mut ws, iota, cap)?.value;
    let mut bad = Vec::new();
    if let (InvariantValue::Finite(s), InvariantValue::Finite(r)) = (s, r) {
        if !(s <= r && r <= s + 1) {
            bad.push(format!("seed {seed}: secat {s}, relcat {r}"));
        }
    }
    let mut check = |what: String, got: InvariantValue, want: Option<usize>| {
        if want.is_some() && got.finite() != want {
            bad.push(format!("seed {seed}: {what} = {}, expected {}", show(got), want.unwrap_or_default()));
        }
    };
    let tower = GaneaTower::build(&mut ws, iota, FORMULA_STAGES)?;
    for i in 0..=FORMULA_STAGES {
        let alpha = tower.stage(i).alpha;
        let got = relcat(&mut ws, alpha, cap)?.value;
        check(format!("relcat(alpha_{i})"), got, min_with(i, r));
    }
    for i in 0..FORMULA_STAGES {
        let beta = tower.steps[i].beta();
        let got = secat(&mut ws, beta, cap)?.value;
        check(format!("secat(beta_{i})"), got, min_with(i, s));
        let got = relcat(&mut ws, beta, cap)?.value;
        check(format!("relcat(beta_{i})"), got, min_with(i + 1, r));
    }
    Ok((bad, (s, r)))
}

fn min_formula_suite(opts: &SuiteOptions, report: &mut ItemReport) -> Result<bool, String> {
    report.instances = opts.formula_instances;
    let mut failures = Vec::new();
    let mut seen = std::collections::BTreeMap::new();
    for seed in 0..opts.formula_instances {
        let (bad, (s, r)) = min_formula_violations(seed, opts.cap).map_err(|e| format!("seed {seed}: {e}"))?;
        *seen.entry(format!("({}, {})", show(s), show(r))).or_insert(0u64) += 1;
        failures.extend(bad);
    }
    let spread: Vec<String> = seen.iter().map(|(k, n)| format!("{k} x{n}")).collect();
    report.details.push(format!("(secat, relcat) seen: {}", spread.join(", ")));
    report.details.push(format!("{} failures", failures.len()));
    report.details.extend(failures.iter().take(3).cloned());
    Ok(failures.is_empty())
}

fn accepted(
    ws: &mut ChainWorkspace,
    bad: &mut Vec<String>,
    seed: u64,
    cap: usize,
    what: &str,
    verdict: Verdict,
    want: usize,
    map: MapRef,
) -> HcatResult<()> {
    match verdict {
        Ok(n) if n == want => {
            if let InvariantValue::Finite(r) = relcat(ws, map, cap)?.value {
                if r > n {
                    bad.push(format!("seed {seed}: {what} accepted at {n} below relcat {r}"));
                }
            }
        }
        Ok(n) => bad.push(format!("seed {seed}: {what} accepted at {n}, expected {want}")),
        Err(e) => bad.push(format!("seed {seed}: {what}: {e}")),
    }
    Ok(())
}

/// Certificate checks on one random object; returns the violations.
pub fn certificate_violations(seed: u64, cap: usize) -> HcatResult<Vec<String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xce27);
    let mut ws = ChainWorkspace::new();
    let x = ws.add_complex(random_complex(&mut rng, Limits::default()), "X");
    let mut bad = Vec::new();
    let p = pinch(&mut ws, x)?;
    let pc = pinch_certificate(&mut ws, &p)?;
    let v = validate_relcat_certificate(&mut ws, &pc);
    accepted(&mut ws, &mut bad, seed, cap, "pinch certificate", v, 1, p.map)?;
    let v = validate_pushcat_certificate(&mut ws, &pc.base);
    accepted(&mut ws, &mut bad, seed, cap, "pinch certificate as pushcat", v, 1, p.map)?;
    let sc = suspension_compl_certificate(&mut ws, x)?;
    let v = validate_relcat_certificate(&mut ws, &sc.certificate);
    accepted(&mut ws, &mut bad, seed, cap, "suspension certificate", v, 2, sc.certificate.base.target)?;
    // the fibre inclusion realizes the join of X with itself
    let (fib, joined) = (ws.complex(sc.fibre_inclusion.src).betti(), ws.complex(sc.join).betti());
    if fib != joined {
        bad.push(format!("seed {seed}: fibre of the wedge-to-product map differs from the join in homology"));
    }
    let y = ws.add_complex(random_complex(&mut rng, Limits::default()), "Y");
    let f = random_chain_map(&mut rng, ws.complex(y), ws.complex(x));
    let f = ws.add_map(y, x, f)?;
    let cc = cofibre_certificate(&mut ws, f)?;
    let v = validate_relcat_certificate(&mut ws, &cc);
    accepted(&mut ws, &mut bad, seed, cap, "cofibre certificate", v, 1, cc.base.target)?;
    Ok(bad)
}

fn certificate_suite(opts: &SuiteOptions, report: &mut ItemReport) -> Result<bool, String> {
    report.instances = opts.certificate_instances;
    let mut failures = Vec::new();
    for seed in 0..opts.certificate_instances {
        failures.extend(certificate_violations(seed, opts.cap).map_err(|e| format!("seed {seed}: {e}"))?);
    }
    report.details.push(format!("{} failures", failures.len()));
    report.details.extend(failures.iter().take(3).cloned());
    Ok(failures.is_empty())
}

fn load(text: &str) -> Result<ChainDocument, String> {
    ChainDocument::parse(text).map_err(|e| e.to_string())
}

fn pushout_increase(opts: &SuiteOptions, report: &mut ItemReport) -> Result<bool, String> {
    let mut doc = load(PUSHOUT_INCREASE_CHAIN)?;
    let (iota, collapse) = (doc.map("iota").ok_or("no map iota")?, doc.map("collapse").ok_or("no map collapse")?);
    let ws = &mut doc.ws;
    let run = |ws: &mut ChainWorkspace| -> HcatResult<(InvariantValue, InvariantValue)> {
        let po = ws.h_pushout(iota, collapse)?;
        let kappa = po.in_b;
        Ok((secat(ws, iota, opts.cap)?.value, secat(ws, kappa, opts.cap)?.value))
    };
    let (before, after) = run(ws).map_err(|e| e.to_string())?;
    report.details.push(format!("secat(iota) = {}, secat(kappa) = {}", show(before), show(after)));
    Ok(matches!((before, after), (InvariantValue::Finite(b), InvariantValue::Finite(a)) if a > b))
}

fn strict_alpha(opts: &SuiteOptions, report: &mut ItemReport) -> Result<bool, String> {
    let mut doc = load(JOIN_ALPHA_CHAIN)?;
    let iota = doc.map("iota").ok_or("no map iota")?;
    let ws = &mut doc.ws;
    let run = |ws: &mut ChainWorkspace| -> HcatResult<(InvariantValue, InvariantValue, bool)> {
        let s = secat(ws, iota, opts.cap)?.value;
        let tower = GaneaTower::build(ws, iota, 1)?;
        let alpha = tower.stage(1).alpha;
        let joined_acyclic = ws.is_acyclic(alpha.tgt);
        Ok((s, secat(ws, alpha, opts.cap)?.value, joined_acyclic))
    };
    let (s, a, acyclic) = run(ws).map_err(|e| e.to_string())?;
    let floor = min_with(1, s);
    report.details.push(format!(
        "secat(iota) = {}, min(1, secat(iota)) = {}, secat(alpha_1) = {}",
        show(s),
        floor.map_or("?".into(), |v| v.to_string()),
        show(a)
    ));
    if acyclic {
        report.details.push("the join of A with itself over 0 is acyclic in this backend".into());
    }
    Ok(matches!((a, floor), (InvariantValue::Finite(a), Some(m)) if a > m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> SuiteOptions {
        SuiteOptions {
            law_instances: 3,
            formula_instances: 3,
            certificate_instances: 2,
            ..SuiteOptions::default()
        }
    }

    #[test]
    fn item_ids_are_unique() {
        let ids: std::collections::BTreeSet<_> = items().iter().map(|i| i.id()).collect();
        assert_eq!(ids.len(), items().len());
    }

    #[test]
    fn reproductions_pass() {
        for item in [Item::Hopf, Item::ComplexityCp3S4, Item::EvenSpheres, Item::PushoutIncrease] {
            let r = item.run(&quick());
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let a: Vec<_> = [Item::MinFormulas, Item::Certificates].iter().map(|i| i.run(&quick())).collect();
        let b: Vec<_> = [Item::MinFormulas, Item::Certificates].iter().map(|i| i.run(&quick())).collect();
        assert_eq!(a, b);
        assert!(a.iter().all(|r| r.passed), "{a:?}");
    }

    #[test]
    fn removing_the_factorization_rule_loses_the_hopf_upper_bound() {
        let opts = SuiteOptions {
            disabled_rules: vec![RuleId::parse("R11").unwrap(), RuleId::parse("R8").unwrap()],
            ..quick()
        };
        let r = Item::Hopf.run(&opts);
        assert!(!r.passed, "{r:?}");
    }
}
