//! The subcommands. Each fills a [`Report`]; an `Err` is an input error
//! (exit 2), while mathematical outcomes are recorded in the report status.

use std::path::Path;

use secat_core::bounds::{parse_facts, BoundsEngine, BoundsError, RuleId, FACTS_HEADER};
use secat_core::chain::{ChainDocument, ChainWorkspace};
use secat_core::cohom::{builtin_ring, cat_lower, parse_ring_file, secat_lower, tensor_square, Cuplength, GradedRing};
use secat_core::ganea::{
    cat, cat_map, compl_map, compl_obj, parse_certificate, relcat, secat, suspension_compl_certificate,
    write_certificate, Certificate, InvariantResult,
};
use secat_core::golden::{items, Item, SuiteOptions};
use secat_core::hcat::{HcatError, MapRef, ObjRef};

use crate::report::{Entry, Report, Status};

pub type Input<T> = Result<T, String>;

/// Settings shared by every subcommand.
pub struct Context {
    pub cap: usize,
    pub trace: bool,
    pub disabled_rules: Vec<RuleId>,
}

fn read(path: &Path) -> Input<String> {
    std::fs::read_to_string(path).map_err(|e| format!("IO_ERROR: {}: {e}", path.display()))
}

fn backend(e: HcatError) -> String {
    e.to_string()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ChainSubject {
    Secat,
    Relcat,
    Cat,
    Compl,
}

/// The named item, or the only one of its kind in the file.
fn pick<T>(kind: &str, flag: &str, wanted: Option<&str>, names: &[&str], find: impl Fn(&str) -> Option<T>) -> Input<(String, T)> {
    let name = match (wanted, names) {
        (Some(n), _) => n.to_string(),
        (None, [only]) => only.to_string(),
        (None, []) => return Err(format!("INPUT_ERROR: the file declares no {kind}")),
        (None, many) => {
            return Err(format!(
                "INPUT_ERROR: the file declares several {kind}s ({}); choose one with {flag}",
                many.join(", ")
            ))
        }
    };
    let found = find(&name).ok_or_else(|| format!("INPUT_ERROR: no {kind} named {name}"))?;
    Ok((name, found))
}

fn pick_map(doc: &ChainDocument, wanted: Option<&str>) -> Input<(String, MapRef)> {
    pick("map", "--map", wanted, &doc.map_names(), |n| doc.map(n))
}

fn pick_object(doc: &ChainDocument, wanted: Option<&str>) -> Input<(String, ObjRef)> {
    pick("object", "--object", wanted, &doc.object_names(), |n| doc.object(n))
}

pub fn chain(
    ctx: &Context,
    report: &mut Report,
    subject: ChainSubject,
    file: &Path,
    map: Option<&str>,
    object: Option<&str>,
) -> Input<()> {
    let mut doc = ChainDocument::parse(&read(file)?).map_err(|e| e.to_string())?;
    if map.is_some() && object.is_some() {
        return Err("INPUT_ERROR: give at most one of --map and --object".into());
    }
    let on_map = map.is_some() || matches!(subject, ChainSubject::Secat | ChainSubject::Relcat);
    let cap = ctx.cap;
    let (label, result): (String, InvariantResult) = if on_map {
        if object.is_some() {
            return Err("INPUT_ERROR: secat and relcat take a map, not an object".into());
        }
        let (name, f) = pick_map(&doc, map)?;
        let ws = &mut doc.ws;
        let (what, r) = match subject {
            ChainSubject::Secat => ("secat", secat(ws, f, cap)),
            ChainSubject::Relcat => ("relcat", relcat(ws, f, cap)),
            ChainSubject::Cat => ("cat_map", cat_map(ws, f, cap)),
            ChainSubject::Compl => ("compl_map", compl_map(ws, f, cap)),
        };
        (format!("{what}({name})"), r.map_err(backend)?)
    } else {
        let (name, x) = pick_object(&doc, object)?;
        let ws = &mut doc.ws;
        let (what, r) = match subject {
            ChainSubject::Cat => ("cat", cat(ws, x, cap)),
            _ => ("compl", compl_obj(ws, x, cap)),
        };
        (format!("{what}({name})"), r.map_err(backend)?)
    };
    report.results.push(Entry::new(label, result.value));
    report.trace = result.trace;
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum CertifyKind {
    Relcat,
    Pushcat,
    Suspension,
}

pub fn certify(
    report: &mut Report,
    kind: CertifyKind,
    file: &Path,
    object: Option<&str>,
    output: Option<&Path>,
) -> Input<()> {
    let text = read(file)?;
    let (mut ws, certificate, subject): (ChainWorkspace, Certificate, String) = match kind {
        CertifyKind::Suspension => {
            let mut doc = ChainDocument::parse(&text).map_err(|e| e.to_string())?;
            let (name, x) = pick_object(&doc, object)?;
            let sc = suspension_compl_certificate(&mut doc.ws, x).map_err(backend)?;
            let c = Certificate::Relcat(sc.certificate);
            if let Some(out) = output {
                std::fs::write(out, write_certificate(&doc.ws, &c))
                    .map_err(|e| format!("IO_ERROR: {}: {e}", out.display()))?;
            }
            (doc.ws, c, format!("diagonal of the suspension of {name}"))
        }
        _ => {
            if object.is_some() || output.is_some() {
                return Err("INPUT_ERROR: --object and --output apply to suspension only".into());
            }
            let parsed = parse_certificate(&text).map_err(|e| e.to_string())?;
            let c = match (kind, parsed.certificate) {
                (CertifyKind::Pushcat, Certificate::Relcat(r)) => Certificate::Pushcat(r.base),
                (CertifyKind::Relcat, Certificate::Pushcat(_)) => {
                    return Err("INPUT_ERROR: a pushcat certificate has no sigmas to check as relcat".into())
                }
                (_, c) => c,
            };
            let subject = format!("{} certificate", c.kind());
            (parsed.doc.ws, c, subject)
        }
    };
    let stages = certificate.base().stages.len();
    report.trace.push(format!("{} stages after the initial section", stages));
    match certificate.validate(&mut ws) {
        Ok(n) => report.results.push(Entry::new(subject, format!("accepted, length {n}"))),
        Err(rejection) => {
            report.results.push(Entry::new(subject, "rejected"));
            report.fail(Status::Reject, rejection);
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum EstimateTarget {
    Cat,
    Compl,
    SecatOfHom,
}

/// A name usable as a facts entity: letters, digits and underscores.
fn entity_name(ring: &str) -> String {
    let mut s = String::new();
    for c in ring.chars() {
        if c.is_ascii_alphanumeric() {
            s.push(c);
        } else if !s.is_empty() && !s.ends_with('_') {
            s.push('_');
        }
    }
    s.trim_end_matches('_').to_string()
}

fn cup_entry(subject: String, cup: &Cuplength, ring: &GradedRing) -> Entry {
    let mut notes = vec![cup.describe(ring)];
    if cup.length == cup.cap {
        notes.push(format!("search stopped at the cap {}", cup.cap));
    }
    Entry::new(format!("lower bound for {subject}"), cup.length).with_notes(notes)
}

pub fn estimate(
    ctx: &Context,
    report: &mut Report,
    target: EstimateTarget,
    source: &str,
    ring_name: Option<&str>,
    hom_name: Option<&str>,
) -> Input<()> {
    let file = Path::new(source);
    let from_file = file.is_file();
    let shown = file.file_name().filter(|_| from_file).map_or(source.into(), |n| n.to_string_lossy());
    let tag = format!("estimator:{}", shown.replace(char::is_whitespace, "_"));
    let mut facts = format!("{FACTS_HEADER}\n");
    if target == EstimateTarget::SecatOfHom {
        if !from_file {
            return Err(format!("INPUT_ERROR: secat-of-hom needs a ring file, got {source}"));
        }
        let rings = parse_ring_file(&read(file)?).map_err(|e| e.to_string())?;
        let hom = match hom_name {
            Some(n) => rings.hom(n).ok_or_else(|| format!("INPUT_ERROR: no hom named {n}"))?,
            None => rings.homs.last().ok_or("INPUT_ERROR: the file declares no hom")?,
        };
        let cup = secat_lower(hom, ctx.cap);
        // H(Y) -> H(X) is induced by a map X -> Y
        let (x, y) = (entity_name(hom.tgt().name()), entity_name(hom.src().name()));
        let map = entity_name(hom.name());
        report
            .results
            .push(cup_entry(format!("secat({map})"), &cup, hom.src()));
        facts.push_str(&format!("object {x}\n"));
        if y != x {
            facts.push_str(&format!("object {y}\n"));
        }
        facts.push_str(&format!("map {map} : {x} -> {y}\n"));
        facts.push_str(&format!("assert secat {map} >= {} source {tag}\n", cup.length));
    } else {
        if hom_name.is_some() {
            return Err("INPUT_ERROR: --hom applies to secat-of-hom only".into());
        }
        let ring = if from_file {
            let rings = parse_ring_file(&read(file)?).map_err(|e| e.to_string())?;
            let names: Vec<&str> = rings.rings.iter().map(|r| r.name()).collect();
            pick("ring", "--ring", ring_name, &names, |n| rings.ring(n).cloned())?.1
        } else {
            if ring_name.is_some() {
                return Err("INPUT_ERROR: --ring applies to ring files only".into());
            }
            builtin_ring(source).map_err(|e| e.to_string())?
        };
        // products are described in the ring holding the ideal
        let (what, cup, holder) = match target {
            EstimateTarget::Cat => ("cat", cat_lower(&ring, ctx.cap).map_err(|e| e.to_string())?, ring.clone()),
            _ => {
                let sq = tensor_square(&ring).map_err(|e| e.to_string())?;
                ("compl", secat_lower(&sq.mult, ctx.cap), sq.ring)
            }
        };
        let name = entity_name(ring.name());
        report.results.push(cup_entry(format!("{what}({name})"), &cup, &holder));
        facts.push_str(&format!("object {name}\n"));
        facts.push_str(&format!("assert {what} {name} >= {} source {tag}\n", cup.length));
    }
    report.facts = Some(facts);
    Ok(())
}

pub fn bounds(ctx: &Context, report: &mut Report, file: &Path) -> Input<()> {
    let facts = parse_facts(&read(file)?).map_err(|e| e.to_string())?;
    let mut engine = match BoundsEngine::from_facts(facts) {
        Ok(e) => e,
        Err(e @ BoundsError::Inconsistent { .. }) => {
            report.fail(Status::Inconsistent, e);
            return Ok(());
        }
        Err(e) => return Err(e.to_string()),
    };
    for &r in &ctx.disabled_rules {
        engine.disable_rule(r);
    }
    let outcome = engine.propagate().and_then(|fp| engine.check_consistency().map(|_| fp));
    match outcome {
        Ok(fp) => {
            report.trace.push(format!(
                "fixpoint after {} passes over {} rule instances, {} derivations",
                fp.passes, fp.instances, fp.derivations
            ));
            for (key, interval) in engine.informative() {
                let label = engine.facts().key_label(key);
                let mut entry = Entry::new(label, interval);
                if ctx.trace {
                    entry.notes = engine.explain(key).lines().skip(1).map(str::to_string).collect();
                }
                report.results.push(entry);
            }
        }
        Err(e @ BoundsError::Inconsistent { .. }) => report.fail(Status::Inconsistent, e),
        Err(e) => return Err(e.to_string()),
    }
    Ok(())
}

pub fn examples(ctx: &Context, report: &mut Report, list: bool, only: &[String]) -> Input<()> {
    let all = items();
    for id in only {
        if !all.iter().any(|i| i.id() == id) {
            return Err(format!("INPUT_ERROR: no example item {id}"));
        }
    }
    let chosen: Vec<Item> = all
        .into_iter()
        .filter(|i| only.is_empty() || only.iter().any(|id| id == i.id()))
        .collect();
    if list {
        for i in chosen {
            report.results.push(Entry::new(i.id(), i.title()));
        }
        return Ok(());
    }
    let opts = SuiteOptions {
        disabled_rules: ctx.disabled_rules.clone(),
        cap: ctx.cap,
        ..SuiteOptions::default()
    };
    let mut failed = 0;
    for i in chosen {
        let r = i.run(&opts);
        if !r.passed {
            failed += 1;
        }
        let verdict = if r.passed { "pass" } else { "fail" };
        let mut notes = vec![r.title.clone(), format!("instances: {}", r.instances)];
        notes.extend(r.details);
        report.results.push(Entry::new(r.id, verdict).with_notes(notes));
    }
    if failed > 0 {
        report.fail(Status::Failed, format!("{failed} example items failed"));
    }
    Ok(())
}
