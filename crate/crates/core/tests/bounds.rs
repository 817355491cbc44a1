use std::collections::BTreeSet;

use proptest::prelude::*;
use secat_core::bounds::{
    parse_facts, rule_catalog, BoundsEngine, BoundsError, Constraint, Interval, Invariant, Key, Relation, RuleId,
};

const HOPF: &str = include_str!("../data/hopf.facts");
const CP3S4: &str = include_str!("../data/cp3s4.facts");
const EVEN: &str = include_str!("../data/evensphere.facts");

fn engine(text: &str) -> BoundsEngine {
    BoundsEngine::from_facts(parse_facts(text).unwrap()).unwrap()
}

fn run(text: &str) -> BoundsEngine {
    let mut e = engine(text);
    e.propagate().unwrap();
    e.check_consistency().unwrap();
    e
}

fn at(e: &BoundsEngine, inv: &str, name: &str) -> Interval {
    let inv = Invariant::parse(inv).unwrap();
    e.query(inv, name).unwrap().0
}

fn key(e: &BoundsEngine, inv: &str, name: &str) -> Key {
    e.key(Invariant::parse(inv).unwrap(), name).unwrap()
}

#[test]
fn hopf_map() {
    let e = run(HOPF);
    assert_eq!(at(&e, "secat", "h"), Interval::point(1));
    assert_eq!(at(&e, "relcat", "h"), Interval::point(2));
    let k = key(&e, "relcat", "h");
    assert!(e.rules_behind(k).contains(&RuleId::CofibreDifference));
    let (_, tree) = e.query(Invariant::Relcat, "h").unwrap();
    assert!(tree.starts_with("relcat(h) = [2,2]"), "{tree}");
    assert!(tree.contains("R8"), "{tree}");
}

#[test]
fn hopf_map_relcat_contradiction_traces_the_cofibre_floor() {
    let mut e = run(HOPF);
    let k = key(&e, "relcat", "h");
    let err = e.assert_fact(k, Interval::point(0), "injected").unwrap_err();
    let BoundsError::Inconsistent { lo_trace, hi_trace, .. } = &err else {
        panic!("{err}");
    };
    assert!(lo_trace.contains("R4") || lo_trace.contains("R8"), "{lo_trace}");
    assert!(hi_trace.contains("injected"), "{hi_trace}");
    // without the guarded rule the lower bound comes from the cofibre floor alone
    let mut e = engine(HOPF);
    e.disable_rule(RuleId::CofibreDifference);
    e.propagate().unwrap();
    let err = e.assert_fact(k, Interval::point(0), "injected").unwrap_err();
    let BoundsError::Inconsistent { lo_trace, .. } = &err else {
        panic!("{err}");
    };
    assert!(lo_trace.contains("R4 cofibre floor"), "{lo_trace}");
}

#[test]
fn hopf_ablation() {
    // the cofibre floor and the factorization corollary pin relcat without R8
    let mut e = engine(HOPF);
    e.disable_rule(RuleId::CofibreDifference);
    e.propagate().unwrap();
    assert_eq!(at(&e, "secat", "h"), Interval::point(1));
    assert_eq!(at(&e, "relcat", "h"), Interval::point(2));
    assert!(!e.fired_rules().contains(&RuleId::CofibreDifference));

    let mut e = engine(HOPF);
    e.disable_rule(RuleId::CofibreDifference);
    e.disable_rule(RuleId::CofibreFloor);
    e.propagate().unwrap();
    assert_eq!(at(&e, "secat", "h"), Interval::at_most(1));
    assert_eq!(at(&e, "relcat", "h"), Interval::at_most(2));
}

#[test]
fn cp3_to_s4_complexity() {
    let e = run(CP3S4);
    assert_eq!(at(&e, "compl_map", "iota"), Interval::point(2));
    assert_eq!(at(&e, "compl", "S4"), Interval::point(2));
    let behind = e.rules_behind(key(&e, "compl_map", "iota"));
    assert!(behind.contains(&RuleId::ComplexitySandwich) && behind.contains(&RuleId::Definition));
}

#[test]
fn even_sphere_strong_complexity() {
    let e = run(EVEN);
    for s in ["S2", "S4", "S6"] {
        assert_eq!(at(&e, "Compl", s), Interval::point(2), "{s}");
        let behind = e.rules_behind(key(&e, "Compl", s));
        assert!(behind.contains(&RuleId::Suspension) && behind.contains(&RuleId::ComplexityTakens));
    }
    assert_eq!(at(&e, "Compl", "S1"), Interval::FULL);
}

#[test]
fn assertion_without_header_or_with_empty_interval() {
    assert!(matches!(parse_facts("object X\n"), Err(BoundsError::Parse { line: 1, .. })));
    let mut e = engine("secat-facts v1\nobject X\n");
    let k = key(&e, "cat", "X");
    assert!(matches!(
        e.assert_fact(k, Interval::new(3, Some(2)), "test"),
        Err(BoundsError::Inconsistent { .. })
    ));
}

#[test]
fn catalog_lists_seventeen_groups() {
    let numbered: Vec<_> = rule_catalog().iter().filter(|r| r.id != RuleId::Definition).collect();
    assert_eq!(numbered.len(), 17);
    for (i, r) in numbered.iter().enumerate() {
        assert_eq!(r.id.code(), format!("R{}", i + 1));
        assert!(!r.anchor.is_empty() && !r.statement.is_empty());
    }
}

/// Each rule group on a minimal example of its own: facts, the key to
/// inspect and the interval expected there.
const FIRING: &[(RuleId, &str, &str, &str, Interval)] = &[
    (
        RuleId::Takens,
        "object A\nobject X\nmap f : A -> X\nassert secat f = 2",
        "Relcat",
        "f",
        Interval { lo: 2, hi: Some(3) },
    ),
    (
        RuleId::Domination,
        "object A\nobject X\nobject Y\nmap f : A -> X\nmap g : A -> Y\ndominated_by g f relative\nassert relcat f = 1",
        "relcat",
        "g",
        Interval { lo: 0, hi: Some(1) },
    ),
    (
        RuleId::Pushout,
        "object A\nobject X\nobject S\nobject P\nmap f : A -> X\nmap k : S -> P\npushout_of k f\nassert Relcat f = 1",
        "Relcat",
        "k",
        Interval { lo: 0, hi: Some(1) },
    ),
    (
        RuleId::CofibreFloor,
        "object A\nobject X\nobject C\nmap f : A -> X\ncofibre_of C f\nassert cat C = 3",
        "relcat",
        "f",
        Interval { lo: 3, hi: None },
    ),
    (
        RuleId::JoinPullback,
        "object F\nobject E\nobject B\nmap i : F -> E\nmap p : E -> B\nfibre_of i p\nassert cat B = 2",
        "relcat",
        "i",
        Interval { lo: 0, hi: Some(2) },
    ),
    (
        RuleId::CofibreCeiling,
        "object A\nobject X\nobject C\nmap f : A -> X\nmap q : X -> C\ncofibre_of C f q",
        "Relcat",
        "q",
        Interval { lo: 0, hi: Some(1) },
    ),
    (
        RuleId::ConeStep,
        "object A\nobject X\nobject C\nmap f : A -> X\nmap k : A -> C\ncone_step k f\nassert relcat f = 1",
        "relcat",
        "k",
        Interval { lo: 0, hi: Some(2) },
    ),
    (
        RuleId::CofibreDifference,
        "object A\nobject X\nobject C\nmap f : A -> X\ncofibre_of C f\nassert cat X = 0\nassert cat C >= 1",
        "relcat",
        "f",
        Interval { lo: 1, hi: Some(1) },
    ),
    (
        RuleId::GaneaStages,
        "object A\nobject X\nobject G\nmap iota : A -> X\nmap a : A -> G\nganea_alpha a iota 2\nassert relcat iota = 3",
        "relcat",
        "a",
        Interval { lo: 2, hi: Some(2) },
    ),
    (
        RuleId::BaseChange,
        "object A\nobject X\nobject B\nobject Y\nmap f : A -> X\nmap k : B -> Y\npullback_square k f\nassert secat f = 1",
        "secat",
        "k",
        Interval { lo: 0, hi: Some(1) },
    ),
    (
        RuleId::Factorization,
        "object A\nobject X\nobject B\nmap i : A -> X\nmap k : B -> X\nfactors_through k i\nassert secat i = 2",
        "secat",
        "k",
        Interval { lo: 2, hi: None },
    ),
    (
        RuleId::Schwarz,
        "object F\nobject E\nobject B\nmap i : F -> E\nmap p : E -> B\nfibre_of i p\nassert secat i = 2",
        "cat_map",
        "p",
        Interval { lo: 2, hi: Some(2) },
    ),
    (
        RuleId::ComplexitySandwich,
        "object X\nobject XX\nproduct_of XX X X\nassert cat XX = 2",
        "compl",
        "X",
        Interval { lo: 0, hi: Some(2) },
    ),
    (
        RuleId::ComplexityTakens,
        "object X\nassert compl X = 1",
        "Compl",
        "X",
        Interval { lo: 1, hi: Some(2) },
    ),
    (
        RuleId::StrongFloor,
        "object X\nassert Cat X = 2",
        "Compl",
        "X",
        Interval { lo: 2, hi: None },
    ),
    (
        RuleId::Suspension,
        "object X\nobject S\nmap p : S -> S\nsuspension_of S X\npinch_of p S",
        "Relcat",
        "p",
        Interval { lo: 0, hi: Some(1) },
    ),
    (
        RuleId::Equivalence,
        "object A\nobject X\nmap e : A -> X\nequivalence e",
        "Relcat",
        "e",
        Interval { lo: 0, hi: Some(0) },
    ),
    (
        RuleId::Definition,
        "object X\nobject XX\nmap d : X -> XX\ndiagonal_of d X 2\nassert compl X = 2",
        "secat",
        "d",
        Interval { lo: 2, hi: Some(2) },
    ),
];

#[test]
fn every_rule_fires_on_its_own_example() {
    let mut covered = BTreeSet::new();
    for (rule, body, inv, name, want) in FIRING {
        let e = run(&format!("secat-facts v1\n{body}\n"));
        assert_eq!(at(&e, inv, name), *want, "{rule}: {inv}({name})");
        assert!(e.rules_behind(key(&e, inv, name)).contains(rule), "{rule} not behind {inv}({name})");
        covered.insert(*rule);
    }
    assert_eq!(covered.len(), rule_catalog().len());
}

#[test]
fn ganea_beta_and_pointed_stage() {
    let e = run("secat-facts v1
object Z
object X
object F
object G
object G2
zero Z
map iota : Z -> X
map b : F -> G
map g : G2 -> X
ganea_beta b iota 1
ganea_g g iota 2
assert cat X = 3
");
    assert_eq!(at(&e, "secat", "iota"), Interval::point(3));
    assert_eq!(at(&e, "secat", "b"), Interval::point(1));
    assert_eq!(at(&e, "relcat", "b"), Interval::point(2));
    assert_eq!(at(&e, "cat_map", "g"), Interval::point(2));
}

#[test]
fn change_of_base_with_equivalence_is_two_sided() {
    let e = run("secat-facts v1
object A
object X
object B
object Y
map top : A -> X
map bottom : B -> Y
change_of_base top bottom equivalence
assert secat bottom >= 2
assert secat top <= 2
");
    assert_eq!(at(&e, "secat", "top"), Interval::point(2));
    assert_eq!(at(&e, "secat", "bottom"), Interval::point(2));
}

#[test]
fn higher_diagonal_chain() {
    let e = run("secat-facts v1
object X
object XX
object XXX
object A
object XA
object G
object T
map iota : A -> X
map d2 : A -> XA
map e2 : G -> T
map diag : X -> XXX
power_of XX X 2
power_of XXX X 3
delta_of d2 iota 2
epsilon_of e2 iota 2
diagonal_of diag X 3
assert cat XX = 2
assert cat XXX = 2
");
    for m in ["d2", "e2", "diag"] {
        assert_eq!(at(&e, "secat", m), Interval::point(2), "{m}");
    }
}

#[test]
fn relcat_is_not_bounded_by_the_target_category() {
    // a map into a contractible object may still have relcat 1
    let text = "secat-facts v1
object A
object P
zero P
map i : A -> P
assert relcat i = 1
";
    let e = run(text);
    assert_eq!(at(&e, "cat", "P"), Interval::point(0));
    assert_eq!(at(&e, "relcat", "i"), Interval::point(1));
    let f = e.facts().lookup("i").unwrap();
    let p = e.facts().lookup("P").unwrap();
    let forbidden = Constraint::le(Key::new(Invariant::Relcat, f), Key::new(Invariant::Cat, p));
    assert!(e.instances().iter().all(|i| i.constraint != forbidden));
}

#[test]
fn query_of_undeclared_key() {
    let e = run(HOPF);
    assert!(matches!(e.query(Invariant::Cat, "CP3"), Err(BoundsError::UnknownKey(_))));
    assert!(matches!(e.query(Invariant::Secat, "S2"), Err(BoundsError::UnknownKey(_))));
    assert_eq!(at(&e, "Cat", "S3"), Interval::FULL);
}

#[test]
fn relations_added_after_propagation_take_effect() {
    let mut e = run(HOPF);
    let s2 = e.facts().lookup("S2").unwrap();
    let s3 = e.facts().lookup("S3").unwrap();
    let k = e.declare_map("k", s3, s2).unwrap();
    let h = e.facts().lookup("h").unwrap();
    e.relate(Relation::FactorsThrough { map: k, through: h }).unwrap();
    e.propagate().unwrap();
    assert_eq!(e.interval(Key::new(Invariant::Secat, k)).unwrap(), Interval::point(1));
}

fn intervals(e: &BoundsEngine) -> Vec<(Key, Interval)> {
    e.intervals()
}

/// A random fact base over a handful of objects and maps, with assertions
/// drawn from a consistent valuation so propagation never fails.
fn random_facts(seed: u64) -> String {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut t = String::from("secat-facts v1\n");
    for o in 0..5 {
        t += &format!("object O{o}\n");
    }
    for m in 0..5 {
        // a common source keeps every relation below well formed
        t += &format!("map m{m} : O0 -> O{}\n", rng.gen_range(0..5));
    }
    let pick = |rng: &mut rand_chacha::ChaCha8Rng| rng.gen_range(0..5);
    for _ in 0..4 {
        let (a, b) = (pick(&mut rng), pick(&mut rng));
        if a == b {
            continue;
        }
        t += &match rng.gen_range(0..6) {
            0 => format!("dominated_by m{a} m{b} relative\n"),
            1 => format!("pushout_of m{a} m{b}\n"),
            2 => format!("pullback_square m{a} m{b}\n"),
            3 => format!("cone_step m{a} m{b}\n"),
            4 => format!("ganea_alpha m{a} m{b} {}\n", rng.gen_range(1..4)),
            _ => format!("ganea_beta m{a} m{b} {}\n", rng.gen_range(1..4)),
        };
    }
    for _ in 0..3 {
        let inv = ["secat", "relcat", "Relcat"][rng.gen_range(0..3)];
        let lo: u32 = rng.gen_range(0..3);
        t += &format!("assert {inv} m{} in {lo} inf\n", pick(&mut rng));
    }
    for _ in 0..2 {
        t += &format!("assert cat O{} <= {}\n", pick(&mut rng), rng.gen_range(2..6));
    }
    t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fixpoint_is_independent_of_firing_order(seed in any::<u64>(), order in any::<u64>()) {
        let text = random_facts(seed);
        let base = parse_facts(&text).unwrap();
        let mut a = BoundsEngine::from_facts(base.clone()).unwrap();
        let mut b = BoundsEngine::from_facts(base).unwrap();
        let ra = a.propagate();
        let rb = b.propagate_shuffled(order);
        prop_assert_eq!(ra.is_ok(), rb.is_ok(), "{}", text);
        if ra.is_ok() {
            prop_assert_eq!(intervals(&a), intervals(&b), "{}", text);
            prop_assert!(b.check_consistency().is_ok());
        }
    }

    #[test]
    fn propagation_only_narrows(seed in any::<u64>()) {
        let text = random_facts(seed);
        let mut e = BoundsEngine::from_facts(parse_facts(&text).unwrap()).unwrap();
        let before = e.intervals();
        if e.propagate().is_ok() {
            for ((k1, old), (k2, new)) in before.iter().zip(e.intervals()) {
                prop_assert_eq!(*k1, k2);
                prop_assert!(new.within(old));
            }
        }
    }

    #[test]
    fn facts_text_round_trips(seed in any::<u64>()) {
        let f = parse_facts(&random_facts(seed)).unwrap();
        let g = parse_facts(&f.to_text()).unwrap();
        prop_assert_eq!(f.to_text(), g.to_text());
    }
}

#[test]
fn shuffled_runs_agree_on_the_examples() {
    for text in [HOPF, CP3S4, EVEN] {
        let want = run(text).intervals();
        for seed in 0..20 {
            let mut e = engine(text);
            e.propagate_shuffled(seed).unwrap();
            assert_eq!(e.intervals(), want);
        }
    }
}
