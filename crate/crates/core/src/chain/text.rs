//! The `secat-chain v1` text format: named complexes, chain maps and
//! homotopies, loaded into a [`ChainWorkspace`].
//!
//! ```text
//! secat-chain v1
//! complex X
//! degrees 0 2
//! dims 1 2 1
//! d 1 = 1 1
//! d 2 = 1 ; -1
//! map f : X -> X
//! at 0 = 1
//! at 1 = 1 0 ; 0 1
//! at 2 = 1
//! homotopy s : f ~ g
//! at 0 = 1/2 ; -1/2
//! compose h = f g
//! identity id : X
//! zero z : X -> 0
//! ```
//!
//! `d N` is the matrix of `X_N → X_{N−1}`, `at N` the component on degree
//! `N` (for homotopies, `X_N → Y_{N+1}`). Matrices are row-major, rows
//! separated by `;`, entries `p` or `p/q`; omitted components are zero.
//! `compose h = f g` is `g ∘ f`. The zero object is predeclared as `0`.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use super::complex::{ChainComplex, GradedMap, Grading};
use super::workspace::ChainWorkspace;
use crate::hcat::{HcatError, HomotopyCategory, HomotopyWitness, MapRef, ObjRef};
use crate::linalg::{fmt_q, parse_q, Matrix};

pub const CHAIN_HEADER: &str = "secat-chain v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainTextError {
    #[error("PARSE_ERROR line {line}: {msg}")]
    Parse { line: usize, msg: String },
    /// The data parsed but the backend refused it (`INVALID_COMPLEX`, ...).
    #[error("{source} (line {line})")]
    Backend { line: usize, source: HcatError },
}

pub type ChainTextResult<T> = Result<T, ChainTextError>;

fn perr(line: usize, msg: impl Into<String>) -> ChainTextError {
    ChainTextError::Parse { line, msg: msg.into() }
}

/// Parses `a b ; c d` as a `rows × cols` matrix.
pub fn parse_matrix(text: &str, rows: usize, cols: usize, line: usize) -> ChainTextResult<Matrix> {
    let parsed: Vec<Vec<&str>> = text.split(';').map(|r| r.split_whitespace().collect()).collect();
    if parsed.len() != rows || parsed.iter().any(|r| r.len() != cols) {
        return Err(perr(line, format!("expected a {rows} x {cols} matrix")));
    }
    let mut m = Matrix::zeros(rows, cols);
    for (r, row) in parsed.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            m[(r, c)] = parse_q(v).ok_or_else(|| perr(line, format!("bad rational {v}")))?;
        }
    }
    Ok(m)
}

pub fn format_matrix(m: &Matrix) -> String {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| fmt_q(&m[(r, c)])).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join(" ; ")
}

enum Pending {
    Complex {
        name: String,
        line: usize,
        lo: Option<(i32, i32)>,
        dims: Option<Vec<usize>>,
        diffs: Vec<(i32, String, usize)>,
    },
    Map {
        name: String,
        line: usize,
        src: ObjRef,
        tgt: ObjRef,
        comps: Vec<(i32, String, usize)>,
    },
    Homotopy {
        name: String,
        line: usize,
        lhs: MapRef,
        rhs: MapRef,
        comps: Vec<(i32, String, usize)>,
    },
}

/// A workspace with the names given to its handles by a file.
#[derive(Clone)]
pub struct ChainDocument {
    pub ws: ChainWorkspace,
    objects: Vec<(String, ObjRef)>,
    maps: Vec<(String, MapRef)>,
    homotopies: Vec<(String, HomotopyWitness)>,
}

impl Default for ChainDocument {
    fn default() -> Self {
        Self::new()
    }
}

fn components(
    src: &Grading,
    tgt: &Grading,
    degree: i32,
    given: &[(i32, String, usize)],
) -> ChainTextResult<GradedMap> {
    let mut parsed: HashMap<i32, Matrix> = HashMap::new();
    for (n, text, line) in given {
        let (rows, cols) = (tgt.dim(n + degree), src.dim(*n));
        if rows * cols == 0 {
            return Err(perr(*line, format!("degree {n} has an empty component")));
        }
        if parsed.insert(*n, parse_matrix(text, rows, cols, *line)?).is_some() {
            return Err(perr(*line, format!("degree {n} given twice")));
        }
    }
    Ok(GradedMap::from_fn(src, tgt, degree, |n| {
        parsed
            .remove(&n)
            .unwrap_or_else(|| Matrix::zeros(tgt.dim(n + degree), src.dim(n)))
    }))
}

fn degree_of(word: &str, line: usize) -> ChainTextResult<i32> {
    word.parse().map_err(|_| perr(line, format!("expected a degree, got {word}")))
}

/// Splits `at N = ...` / `d N = ...` into the degree and the matrix text.
fn indexed(body: &str, line: usize) -> ChainTextResult<(i32, String)> {
    let (head, matrix) = body.split_once('=').ok_or_else(|| perr(line, "expected `= matrix`"))?;
    let words: Vec<&str> = head.split_whitespace().collect();
    let [_, n] = words[..] else {
        return Err(perr(line, "expected a single degree"));
    };
    Ok((degree_of(n, line)?, matrix.trim().to_string()))
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && !name.contains([':', '~', '=', ';', '#']) && name != "->"
}

impl ChainDocument {
    pub fn new() -> Self {
        let ws = ChainWorkspace::new();
        let zero = ws.zero_object();
        ChainDocument {
            ws,
            objects: vec![("0".into(), zero)],
            maps: Vec::new(),
            homotopies: Vec::new(),
        }
    }

    pub fn object(&self, name: &str) -> Option<ObjRef> {
        self.objects.iter().find(|(n, _)| n == name).map(|p| p.1)
    }

    pub fn map(&self, name: &str) -> Option<MapRef> {
        self.maps.iter().find(|(n, _)| n == name).map(|p| p.1)
    }

    pub fn homotopy(&self, name: &str) -> Option<HomotopyWitness> {
        self.homotopies.iter().find(|(n, _)| n == name).map(|p| p.1)
    }

    /// Declared objects in file order, without the predeclared zero.
    pub fn object_names(&self) -> Vec<&str> {
        self.objects.iter().skip(1).map(|(n, _)| n.as_str()).collect()
    }

    pub fn map_names(&self) -> Vec<&str> {
        self.maps.iter().map(|(n, _)| n.as_str()).collect()
    }

    fn fresh(&self, name: &str, line: usize) -> ChainTextResult<String> {
        if !valid_name(name) {
            return Err(perr(line, format!("invalid name {name:?}")));
        }
        let taken = self.object(name).is_some() || self.map(name).is_some() || self.homotopy(name).is_some();
        if taken {
            return Err(perr(line, format!("{name} is already defined")));
        }
        Ok(name.to_string())
    }

    fn need_object(&self, name: &str, line: usize) -> ChainTextResult<ObjRef> {
        self.object(name).ok_or_else(|| perr(line, format!("unknown complex {name}")))
    }

    fn need_map(&self, name: &str, line: usize) -> ChainTextResult<MapRef> {
        self.map(name).ok_or_else(|| perr(line, format!("unknown map {name}")))
    }

    fn finish(&mut self, pending: Option<Pending>) -> ChainTextResult<()> {
        let backend = |line: usize| move |source: HcatError| ChainTextError::Backend { line, source };
        match pending {
            None => {}
            Some(Pending::Complex { name, line, lo, dims, diffs }) => {
                let grading = match (lo, dims) {
                    (None, None) => Grading::zero(),
                    (Some((lo, hi)), Some(dims)) => {
                        if dims.len() as i32 != hi - lo + 1 {
                            return Err(perr(line, format!("{name}: dims must list {} entries", hi - lo + 1)));
                        }
                        Grading::new(lo, dims)
                    }
                    _ => return Err(perr(line, format!("{name}: `degrees` and `dims` go together"))),
                };
                let d = components(&grading, &grading, -1, &diffs)?;
                let complex = ChainComplex::new(grading, |n| Some(d.comp(n)))
                    .map_err(|e| backend(line)(HcatError::InvalidComplex(format!("{name}: {e}"))))?;
                let x = self.ws.add_complex(complex, &name);
                self.objects.push((name, x));
            }
            Some(Pending::Map { name, line, src, tgt, comps }) => {
                let (gs, gt) = (self.ws.complex(src).grading().clone(), self.ws.complex(tgt).grading().clone());
                let f = components(&gs, &gt, 0, &comps)?;
                let m = self.ws.add_map(src, tgt, f).map_err(|e| match e {
                    HcatError::InvalidMap(msg) => backend(line)(HcatError::InvalidMap(format!("{name}: {msg}"))),
                    other => backend(line)(other),
                })?;
                self.maps.push((name, m));
            }
            Some(Pending::Homotopy { name, line, lhs, rhs, comps }) => {
                let (gs, gt) = (
                    self.ws.complex(lhs.src).grading().clone(),
                    self.ws.complex(lhs.tgt).grading().clone(),
                );
                let s = components(&gs, &gt, 1, &comps)?;
                let w = self.ws.add_homotopy(lhs, rhs, s).map_err(backend(line))?;
                self.homotopies.push((name, w));
            }
        }
        Ok(())
    }

    /// Parses a document whose first line is `header`. Directives the chain
    /// grammar does not know are handed to `extra` with the document built
    /// so far; it returns `false` for directives it does not know either.
    pub fn parse_with(
        text: &str,
        header: &str,
        mut extra: impl FnMut(&mut ChainDocument, usize, &[&str]) -> ChainTextResult<bool>,
    ) -> ChainTextResult<ChainDocument> {
        let mut doc = ChainDocument::new();
        let mut pending: Option<Pending> = None;
        let mut saw_header = false;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            if !saw_header {
                if body != header {
                    return Err(perr(line, format!("expected header `{header}`")));
                }
                saw_header = true;
                continue;
            }
            let words: Vec<&str> = body.split_whitespace().collect();
            // lines that extend the open block
            match (words[0], &mut pending) {
                ("degrees", Some(Pending::Complex { lo, .. })) => {
                    let [_, a, b] = words[..] else {
                        return Err(perr(line, "expected `degrees LO HI`"));
                    };
                    *lo = Some((degree_of(a, line)?, degree_of(b, line)?));
                    continue;
                }
                ("dims", Some(Pending::Complex { dims, .. })) => {
                    let parsed: Result<Vec<usize>, _> = words[1..].iter().map(|w| w.parse()).collect();
                    *dims = Some(parsed.map_err(|_| perr(line, "dims must be natural numbers"))?);
                    continue;
                }
                ("d", Some(Pending::Complex { diffs, .. })) => {
                    let (n, m) = indexed(body, line)?;
                    diffs.push((n, m, line));
                    continue;
                }
                ("at", Some(Pending::Map { comps, .. } | Pending::Homotopy { comps, .. })) => {
                    let (n, m) = indexed(body, line)?;
                    comps.push((n, m, line));
                    continue;
                }
                ("degrees" | "dims" | "d" | "at", _) => {
                    return Err(perr(line, format!("`{}` outside its block", words[0])));
                }
                _ => {}
            }
            doc.finish(pending.take())?;
            match words[..] {
                ["complex", name] => {
                    pending = Some(Pending::Complex {
                        name: doc.fresh(name, line)?,
                        line,
                        lo: None,
                        dims: None,
                        diffs: Vec::new(),
                    });
                }
                ["map", name, ":", src, "->", tgt] => {
                    pending = Some(Pending::Map {
                        name: doc.fresh(name, line)?,
                        line,
                        src: doc.need_object(src, line)?,
                        tgt: doc.need_object(tgt, line)?,
                        comps: Vec::new(),
                    });
                }
                ["homotopy", name, ":", lhs, "~", rhs] => {
                    pending = Some(Pending::Homotopy {
                        name: doc.fresh(name, line)?,
                        line,
                        lhs: doc.need_map(lhs, line)?,
                        rhs: doc.need_map(rhs, line)?,
                        comps: Vec::new(),
                    });
                }
                ["compose", name, "=", first, second] => {
                    let name = doc.fresh(name, line)?;
                    let (f, g) = (doc.need_map(first, line)?, doc.need_map(second, line)?);
                    let m = doc.ws.compose(f, g).map_err(|source| ChainTextError::Backend { line, source })?;
                    doc.maps.push((name, m));
                }
                ["identity", name, ":", obj] => {
                    let name = doc.fresh(name, line)?;
                    let x = doc.need_object(obj, line)?;
                    let m = doc.ws.identity(x).map_err(|source| ChainTextError::Backend { line, source })?;
                    doc.maps.push((name, m));
                }
                ["zero", name, ":", src, "->", tgt] => {
                    let name = doc.fresh(name, line)?;
                    let (x, y) = (doc.need_object(src, line)?, doc.need_object(tgt, line)?);
                    let m = doc.ws.zero_map(x, y).map_err(|source| ChainTextError::Backend { line, source })?;
                    doc.maps.push((name, m));
                }
                _ => {
                    if !extra(&mut doc, line, &words)? {
                        return Err(perr(line, format!("unknown directive `{}`", words[0])));
                    }
                }
            }
        }
        doc.finish(pending)?;
        if !saw_header {
            return Err(perr(1, format!("expected header `{header}`")));
        }
        Ok(doc)
    }

    pub fn parse(text: &str) -> ChainTextResult<ChainDocument> {
        Self::parse_with(text, CHAIN_HEADER, |_, _, _| Ok(false))
    }
}

/// Writes workspace handles as a document, emitting each dependency once.
pub struct ChainWriter {
    out: String,
    objects: HashMap<usize, String>,
    maps: HashMap<usize, String>,
    homotopies: HashMap<usize, String>,
    used: HashMap<String, usize>,
}

fn sanitize(label: &str) -> String {
    let s: String = label
        .chars()
        .map(|c| if c.is_alphanumeric() || "_.+-".contains(c) { c } else { '_' })
        .collect();
    if s.is_empty() || s == "0" {
        "obj".into()
    } else {
        s
    }
}

impl ChainWriter {
    pub fn new(header: &str) -> Self {
        ChainWriter {
            out: format!("{header}\n"),
            objects: HashMap::new(),
            maps: HashMap::new(),
            homotopies: HashMap::new(),
            used: HashMap::from([("0".to_string(), 1)]),
        }
    }

    fn claim(&mut self, wanted: &str) -> String {
        let n = self.used.entry(wanted.to_string()).or_insert(0);
        *n += 1;
        let name = if *n == 1 { wanted.to_string() } else { format!("{wanted}_{n}") };
        if name != wanted && self.used.contains_key(&name) {
            return self.claim(&name);
        }
        self.used.entry(name.clone()).or_insert(1);
        name
    }

    pub fn line(&mut self, text: &str) {
        self.out.push_str(text);
        self.out.push('\n');
    }

    pub fn object(&mut self, ws: &ChainWorkspace, x: ObjRef) -> String {
        if x == ws.zero_object() {
            return "0".into();
        }
        if let Some(n) = self.objects.get(&x.id) {
            return n.clone();
        }
        let name = self.claim(&sanitize(&ws.label(x)));
        let c = ws.complex(x);
        let _ = writeln!(self.out, "complex {name}");
        if !c.grading().is_zero() {
            let dims: Vec<String> = (c.lo()..=c.hi()).map(|n| c.dim(n).to_string()).collect();
            let _ = writeln!(self.out, "degrees {} {}\ndims {}", c.lo(), c.hi(), dims.join(" "));
            for n in c.lo()..=c.hi() {
                let d = c.d(n);
                if d.rows() * d.cols() > 0 && !d.is_zero() {
                    let _ = writeln!(self.out, "d {n} = {}", format_matrix(&d));
                }
            }
        }
        self.objects.insert(x.id, name.clone());
        name
    }

    fn components(&mut self, f: &GradedMap) {
        for n in f.src().degrees() {
            let m = f.comp(n);
            if m.rows() * m.cols() > 0 && !m.is_zero() {
                let _ = writeln!(self.out, "at {n} = {}", format_matrix(&m));
            }
        }
    }

    /// Writes `f` under `wanted` unless it was written before.
    pub fn map_as(&mut self, ws: &ChainWorkspace, f: MapRef, wanted: &str) -> String {
        if let Some(n) = self.maps.get(&f.id) {
            return n.clone();
        }
        let (s, t) = (self.object(ws, f.src), self.object(ws, f.tgt));
        let name = self.claim(wanted);
        let _ = writeln!(self.out, "map {name} : {s} -> {t}");
        self.components(ws.map_data(f));
        self.maps.insert(f.id, name.clone());
        name
    }

    pub fn map(&mut self, ws: &ChainWorkspace, f: MapRef) -> String {
        self.map_as(ws, f, &format!("m{}", f.id))
    }

    pub fn homotopy_as(&mut self, ws: &ChainWorkspace, w: HomotopyWitness, wanted: &str) -> String {
        if let Some(n) = self.homotopies.get(&w.id) {
            return n.clone();
        }
        let (l, r) = (self.map(ws, w.lhs), self.map(ws, w.rhs));
        let name = self.claim(wanted);
        let _ = writeln!(self.out, "homotopy {name} : {l} ~ {r}");
        self.components(ws.witness_data(w));
        self.homotopies.insert(w.id, name.clone());
        name
    }

    pub fn finish(self) -> String {
        self.out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    const SAMPLE: &str = "secat-chain v1
# two homotopic maps between circles padded with contractible pairs
complex X
degrees 0 2
dims 1 2 1
d 1 = 0 0
d 2 = 1 ; -1
complex H
degrees 0 2
dims 1 1 1
d 2 = 1
map p : X -> H
at 0 = 1
at 1 = 1 1
map p2 : X -> H
at 0 = 1
at 1 = 0 1
at 2 = -1
homotopy s : p ~ p2
at 1 = 1 0
identity id : H
compose pp = p id
zero z : X -> 0
";

    #[test]
    fn parses_complexes_maps_and_homotopies() {
        let doc = ChainDocument::parse(SAMPLE).unwrap();
        let x = doc.object("X").unwrap();
        assert_eq!(doc.ws.complex(x).dim(1), 2);
        assert_eq!(doc.object_names(), vec!["X", "H"]);
        let p = doc.map("p").unwrap();
        assert_eq!(doc.ws.map_data(p).comp(1)[(0, 1)], q(1));
        assert!(doc.homotopy("s").is_some());
        assert_eq!(doc.map("z").unwrap().tgt, doc.ws.zero_object());
    }

    #[test]
    fn writer_round_trips() {
        let doc = ChainDocument::parse(SAMPLE).unwrap();
        let mut w = ChainWriter::new(CHAIN_HEADER);
        let s = doc.homotopy("s").unwrap();
        w.homotopy_as(&doc.ws, s, "s");
        let text = w.finish();
        let again = ChainDocument::parse(&text).unwrap();
        let s2 = again.homotopy("s").unwrap();
        assert_eq!(again.ws.witness_data(s2), doc.ws.witness_data(s));
        assert_eq!(again.ws.map_data(s2.lhs), doc.ws.map_data(s.lhs));
        let mut w2 = ChainWriter::new(CHAIN_HEADER);
        w2.homotopy_as(&again.ws, s2, "s");
        assert_eq!(w2.finish(), text);
    }

    #[test]
    fn rejects_bad_input_with_distinct_errors() {
        let not_square_zero = "secat-chain v1\ncomplex X\ndegrees 0 2\ndims 1 1 1\nd 1 = 1\nd 2 = 1\n";
        let err = ChainDocument::parse(not_square_zero).err().unwrap();
        assert!(matches!(err, ChainTextError::Backend { source: HcatError::InvalidComplex(_), .. }), "{err}");
        let not_chain_map = "secat-chain v1\ncomplex X\ndegrees 0 1\ndims 1 1\nd 1 = 1\nmap f : X -> X\nat 0 = 1\n";
        let err = ChainDocument::parse(not_chain_map).err().unwrap();
        assert!(matches!(err, ChainTextError::Backend { source: HcatError::InvalidMap(_), line: 6 }), "{err}");
        let cases = [
            ("complex X\n", 1),
            ("secat-chain v1\ncomplex X\ndegrees 0 0\ndims 2\nd 0 = 1\n", 5),
            ("secat-chain v1\ncomplex X\ndegrees 0 0\ndims 1 1\n", 2),
            ("secat-chain v1\nmap f : X -> Y\n", 2),
            ("secat-chain v1\ncomplex X\ndegrees 0 0\ndims 1\ncomplex X\n", 5),
            ("secat-chain v1\nat 0 = 1\n", 2),
            ("secat-chain v1\ncomplex X\ndegrees 0 1\ndims 1 1\nd 1 = 1 2\n", 5),
            ("secat-chain v1\ncomplex X\ndegrees 0 1\ndims 1 1\nd 1 = x\n", 5),
            ("secat-chain v1\nfrobnicate\n", 2),
        ];
        for (text, line) in cases {
            match ChainDocument::parse(text) {
                Err(ChainTextError::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {:?}", other.err()),
            }
        }
    }

    #[test]
    fn matrices_print_rationals() {
        let m = Matrix::from_fn(2, 2, |r, c| q(r as i64 - c as i64) / q(2));
        assert_eq!(format_matrix(&m), "0 -1/2 ; 1/2 0");
        assert_eq!(parse_matrix("0 -1/2 ; 1/2 0", 2, 2, 1).unwrap(), m);
    }
}
