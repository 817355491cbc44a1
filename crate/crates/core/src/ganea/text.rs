//! The `secat-certificate v1` text format: a chain document followed by the
//! certificate's references into it.
//!
//! ```text
//! secat-certificate v1
//! kind relcat
//! ... complexes, maps and homotopies as in `secat-chain v1` ...
//! target T
//! iota0 I
//! lambda L
//! stage TOP LEFT RIGHT BOTTOM WITNESS
//! sigma S
//! ```
//!
//! Stages and sigmas are listed in order; `WITNESS` must be a homotopy
//! `RIGHT∘TOP ~ BOTTOM∘LEFT`. A `pushcat` certificate has no sigma lines.

use std::fmt::Write as _;

use super::certificate::{
    validate_pushcat_certificate, validate_relcat_certificate, PushcatCertificate, RelcatCertificate, Verdict,
};
use crate::chain::{ChainDocument, ChainTextError, ChainTextResult, ChainWorkspace, ChainWriter};
use crate::hcat::{HSquare, MapRef};

pub const CERTIFICATE_HEADER: &str = "secat-certificate v1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Pushcat(PushcatCertificate),
    Relcat(RelcatCertificate),
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Pushcat(_) => "pushcat",
            Certificate::Relcat(_) => "relcat",
        }
    }

    pub fn base(&self) -> &PushcatCertificate {
        match self {
            Certificate::Pushcat(c) => c,
            Certificate::Relcat(c) => &c.base,
        }
    }

    pub fn validate(&self, ws: &mut ChainWorkspace) -> Verdict {
        match self {
            Certificate::Pushcat(c) => validate_pushcat_certificate(ws, c),
            Certificate::Relcat(c) => validate_relcat_certificate(ws, c),
        }
    }
}

/// A parsed certificate with the workspace holding its data.
#[derive(Clone)]
pub struct CertificateDocument {
    pub doc: ChainDocument,
    pub certificate: Certificate,
}

fn perr(line: usize, msg: impl Into<String>) -> ChainTextError {
    ChainTextError::Parse { line, msg: msg.into() }
}

#[derive(Default)]
struct Refs {
    kind: Option<(String, usize)>,
    target: Option<MapRef>,
    iota0: Option<MapRef>,
    lambda: Option<MapRef>,
    stages: Vec<HSquare>,
    sigmas: Vec<MapRef>,
    last_line: usize,
}

fn single(slot: &mut Option<MapRef>, value: MapRef, word: &str, line: usize) -> ChainTextResult<()> {
    if slot.replace(value).is_some() {
        return Err(perr(line, format!("`{word}` given twice")));
    }
    Ok(())
}

pub fn parse_certificate(text: &str) -> ChainTextResult<CertificateDocument> {
    let mut refs = Refs::default();
    let doc = ChainDocument::parse_with(text, CERTIFICATE_HEADER, |doc, line, words| {
        refs.last_line = line;
        let map = |name: &str| doc.map(name).ok_or_else(|| perr(line, format!("unknown map {name}")));
        match *words {
            ["kind", k] => {
                if refs.kind.is_some() {
                    return Err(perr(line, "`kind` given twice"));
                }
                if k != "relcat" && k != "pushcat" {
                    return Err(perr(line, format!("kind must be relcat or pushcat, got {k}")));
                }
                refs.kind = Some((k.to_string(), line));
            }
            ["target", f] => single(&mut refs.target, map(f)?, "target", line)?,
            ["iota0", f] => single(&mut refs.iota0, map(f)?, "iota0", line)?,
            ["lambda", f] => single(&mut refs.lambda, map(f)?, "lambda", line)?,
            ["stage", top, left, right, bottom, w] => {
                let witness = doc.homotopy(w).ok_or_else(|| perr(line, format!("unknown homotopy {w}")))?;
                refs.stages.push(HSquare {
                    top: map(top)?,
                    left: map(left)?,
                    right: map(right)?,
                    bottom: map(bottom)?,
                    witness,
                });
            }
            ["sigma", s] => refs.sigmas.push(map(s)?),
            _ => return Ok(false),
        }
        Ok(true)
    })?;
    let end = refs.last_line.max(1);
    let missing = |what: &str| perr(end, format!("missing `{what}`"));
    let (kind, kind_line) = refs.kind.ok_or_else(|| missing("kind"))?;
    let base = PushcatCertificate {
        target: refs.target.ok_or_else(|| missing("target"))?,
        iota0: refs.iota0.ok_or_else(|| missing("iota0"))?,
        lambda: refs.lambda.ok_or_else(|| missing("lambda"))?,
        stages: refs.stages,
    };
    let certificate = if kind == "pushcat" {
        if !refs.sigmas.is_empty() {
            return Err(perr(kind_line, "a pushcat certificate has no sigma lines"));
        }
        Certificate::Pushcat(base)
    } else {
        Certificate::Relcat(RelcatCertificate {
            base,
            sigmas: refs.sigmas,
        })
    };
    Ok(CertificateDocument { doc, certificate })
}

/// Serializes `c` with the data it references; parsing the output gives an
/// equal certificate up to handle renumbering.
pub fn write_certificate(ws: &ChainWorkspace, c: &Certificate) -> String {
    let mut w = ChainWriter::new(CERTIFICATE_HEADER);
    w.line(&format!("kind {}", c.kind()));
    let base = c.base();
    let target = w.map_as(ws, base.target, "target");
    let iota0 = w.map_as(ws, base.iota0, "iota0");
    let lambda = w.map_as(ws, base.lambda, "lambda");
    let mut tail = format!("target {target}\niota0 {iota0}\nlambda {lambda}\n");
    for (i, sq) in base.stages.iter().enumerate() {
        let n = i + 1;
        let top = w.map_as(ws, sq.top, &format!("rho{n}"));
        let left = w.map_as(ws, sq.left, &format!("tau{n}"));
        let right = w.map_as(ws, sq.right, &format!("iota{n}"));
        let bottom = w.map_as(ws, sq.bottom, &format!("chi{n}"));
        w.map_as(ws, sq.witness.lhs, &format!("square{n}_lhs"));
        w.map_as(ws, sq.witness.rhs, &format!("square{n}_rhs"));
        let h = w.homotopy_as(ws, sq.witness, &format!("square{n}"));
        let _ = writeln!(tail, "stage {top} {left} {right} {bottom} {h}");
    }
    if let Certificate::Relcat(r) = c {
        for (i, s) in r.sigmas.iter().enumerate() {
            let name = w.map_as(ws, *s, &format!("sigma{}", i + 1));
            let _ = writeln!(tail, "sigma {name}");
        }
    }
    let mut out = w.finish();
    out.push_str(&tail);
    out
}
