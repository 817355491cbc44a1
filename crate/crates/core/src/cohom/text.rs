//! The `secat-ring v1` text format.
//!
//! ```text
//! secat-ring v1
//! ring S4 = sphere(4)
//! ring CP3
//! basis 1 0
//! basis v 2
//! basis v2 4
//! basis v3 6
//! unit 1
//! product v v = v2
//! product v v2 = v3
//! hom iota : S4 -> CP3
//! image x4 = v2
//! hom delta = first_delta iota
//! ```
//!
//! Products involving the unit and transposes implied by graded
//! commutativity may be omitted; images of the unit are implied.

use num_traits::{One, Zero};

use super::{builtin_ring, first_delta_hom, CohomError, CohomResult, Element, GradedRing, RingBuilder, RingHom};
use crate::linalg::{parse_q, Matrix, Q};

pub const RING_HEADER: &str = "secat-ring v1";

#[derive(Clone, Debug, Default)]
pub struct RingFile {
    pub rings: Vec<GradedRing>,
    pub homs: Vec<RingHom>,
}

impl RingFile {
    pub fn ring(&self, name: &str) -> Option<&GradedRing> {
        self.rings.iter().find(|r| r.name() == name)
    }

    pub fn hom(&self, name: &str) -> Option<&RingHom> {
        self.homs.iter().find(|h| h.name() == name)
    }

    /// Explicit tables for every ring and hom; parses back to equal values.
    pub fn to_text(&self) -> String {
        let mut out = format!("{RING_HEADER}\n");
        let mut written: Vec<&str> = Vec::new();
        let rings = self.rings.iter().chain(self.homs.iter().flat_map(|h| [h.src(), h.tgt()]));
        for r in rings {
            if written.contains(&r.name()) {
                continue;
            }
            written.push(r.name());
            out.push_str(&format!("ring {}\n", r.name()));
            for i in 0..r.rank() {
                out.push_str(&format!("basis {} {}\n", r.label(i), r.degree(i)));
            }
            out.push_str(&format!("unit {}\n", r.label(r.unit_index())));
            for i in 0..r.rank() {
                for j in i..r.rank() {
                    if i == r.unit_index() || j == r.unit_index() {
                        continue;
                    }
                    let p = r.basis_product(i, j);
                    if p.iter().any(|c| !c.is_zero()) {
                        out.push_str(&format!("product {} {} = {}\n", r.label(i), r.label(j), r.format_element(p)));
                    }
                }
            }
        }
        for h in &self.homs {
            out.push_str(&format!("hom {} : {} -> {}\n", h.name(), h.src().name(), h.tgt().name()));
            let s = h.src();
            for i in 0..s.rank() {
                if i == s.unit_index() {
                    continue;
                }
                let img = h.matrix().column(i);
                if img.iter().any(|c| !c.is_zero()) {
                    out.push_str(&format!("image {} = {}\n", s.label(i), h.tgt().format_element(&img)));
                }
            }
        }
        out
    }
}

fn err(line: usize, msg: impl Into<String>) -> CohomError {
    CohomError::Parse { line, msg: msg.into() }
}

/// Parses `[-] [c] label { ± [c] label }` or `0` against a basis.
pub fn parse_combination(labels: &[String], text: &str) -> Result<Element, String> {
    let mut out = vec![Q::zero(); labels.len()];
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens == ["0"] {
        return Ok(out);
    }
    if tokens.is_empty() {
        return Err("empty combination".into());
    }
    let mut i = 0;
    let mut first = true;
    while i < tokens.len() {
        let mut sign = Q::one();
        match tokens[i] {
            "+" if !first => i += 1,
            "-" => {
                sign = -sign;
                i += 1;
            }
            _ if !first => return Err(format!("expected + or - before {}", tokens[i])),
            _ => {}
        }
        first = false;
        let mut coef = Q::one();
        // a number is a coefficient only when a label follows it
        if i + 1 < tokens.len() && !matches!(tokens[i + 1], "+" | "-") {
            if let Some(c) = parse_q(tokens[i]) {
                coef = c;
                i += 1;
            }
        }
        let label = tokens.get(i).ok_or("dangling sign")?;
        let k = labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| format!("unknown basis label {label}"))?;
        out[k] += sign * coef;
        i += 1;
    }
    Ok(out)
}

enum Open {
    None,
    Ring(RingBuilder),
    Hom {
        name: String,
        src: GradedRing,
        tgt: GradedRing,
        matrix: Matrix,
        line: usize,
    },
}

pub fn parse_ring_file(text: &str) -> CohomResult<RingFile> {
    let mut file = RingFile::default();
    let mut open = Open::None;
    let mut saw_header = false;
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if !saw_header {
            if line != RING_HEADER {
                return Err(err(line_no, format!("expected header `{RING_HEADER}`")));
            }
            saw_header = true;
            continue;
        }
        let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match head {
            "ring" | "hom" => {
                close(&mut file, std::mem::replace(&mut open, Open::None), line_no)?;
                if head == "ring" {
                    open = open_ring(&mut file, rest, line_no)?;
                } else {
                    open = open_hom(&mut file, rest, line_no)?;
                }
            }
            "basis" => {
                let Open::Ring(b) = &mut open else {
                    return Err(err(line_no, "basis outside an explicit ring"));
                };
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let [label, deg] = parts[..] else {
                    return Err(err(line_no, "expected `basis LABEL DEGREE`"));
                };
                let deg: u32 = deg.parse().map_err(|_| err(line_no, format!("bad degree {deg}")))?;
                b.basis(label, deg).map_err(|e| err(line_no, e.to_string()))?;
            }
            "unit" => {
                let Open::Ring(b) = &mut open else {
                    return Err(err(line_no, "unit outside an explicit ring"));
                };
                let i = b.index(rest).ok_or_else(|| err(line_no, format!("unknown basis label {rest}")))?;
                b.unit(i);
            }
            "product" => {
                let Open::Ring(b) = &mut open else {
                    return Err(err(line_no, "product outside an explicit ring"));
                };
                let (lhs, rhs) = rest.split_once('=').ok_or_else(|| err(line_no, "expected `product A B = ...`"))?;
                let parts: Vec<&str> = lhs.split_whitespace().collect();
                let [a, c] = parts[..] else {
                    return Err(err(line_no, "expected two factors"));
                };
                let i = b.index(a).ok_or_else(|| err(line_no, format!("unknown basis label {a}")))?;
                let j = b.index(c).ok_or_else(|| err(line_no, format!("unknown basis label {c}")))?;
                let v = parse_combination(b.labels(), rhs).map_err(|m| err(line_no, m))?;
                b.product(i, j, v).map_err(|e| err(line_no, e.to_string()))?;
            }
            "image" => {
                let Open::Hom { src, tgt, matrix, .. } = &mut open else {
                    return Err(err(line_no, "image outside a hom"));
                };
                let (lhs, rhs) = rest.split_once('=').ok_or_else(|| err(line_no, "expected `image A = ...`"))?;
                let lhs = lhs.trim();
                let i = src.index(lhs).ok_or_else(|| err(line_no, format!("unknown basis label {lhs}")))?;
                let v = parse_combination(tgt.labels(), rhs).map_err(|m| err(line_no, m))?;
                for (k, c) in v.into_iter().enumerate() {
                    matrix[(k, i)] = c;
                }
            }
            _ => return Err(err(line_no, format!("unknown directive {head}"))),
        }
    }
    if !saw_header {
        return Err(err(1, format!("expected header `{RING_HEADER}`")));
    }
    close(&mut file, open, text.lines().count())?;
    Ok(file)
}

fn check_fresh(file: &RingFile, name: &str, line: usize) -> CohomResult<()> {
    if name.is_empty() || name.contains(char::is_whitespace) {
        return Err(err(line, format!("bad name `{name}`")));
    }
    if file.ring(name).is_some() || file.hom(name).is_some() {
        return Err(err(line, format!("duplicate name {name}")));
    }
    Ok(())
}

fn open_ring(file: &mut RingFile, rest: &str, line: usize) -> CohomResult<Open> {
    match rest.split_once('=') {
        Some((name, expr)) => {
            let name = name.trim();
            check_fresh(file, name, line)?;
            let mut r = builtin_ring(expr.trim())?;
            r.set_name(name);
            file.rings.push(r);
            Ok(Open::None)
        }
        None => {
            check_fresh(file, rest, line)?;
            Ok(Open::Ring(RingBuilder::new(rest)))
        }
    }
}

fn open_hom(file: &mut RingFile, rest: &str, line: usize) -> CohomResult<Open> {
    if let Some((name, expr)) = rest.split_once('=') {
        let name = name.trim();
        check_fresh(file, name, line)?;
        let parts: Vec<&str> = expr.split_whitespace().collect();
        let ["first_delta", base] = parts[..] else {
            return Err(err(line, "expected `hom NAME = first_delta HOM`"));
        };
        let base = file.hom(base).ok_or_else(|| err(line, format!("unknown hom {base}")))?;
        let mut derived = first_delta_hom(base)?;
        derived.name = name.to_string();
        file.homs.push(derived);
        return Ok(Open::None);
    }
    let (name, sig) = rest.split_once(':').ok_or_else(|| err(line, "expected `hom NAME : SRC -> TGT`"))?;
    let name = name.trim();
    check_fresh(file, name, line)?;
    let (src, tgt) = sig.split_once("->").ok_or_else(|| err(line, "expected `SRC -> TGT`"))?;
    let src = file.ring(src.trim()).ok_or_else(|| err(line, format!("unknown ring {}", src.trim())))?.clone();
    let tgt = file.ring(tgt.trim()).ok_or_else(|| err(line, format!("unknown ring {}", tgt.trim())))?.clone();
    let mut matrix = Matrix::zeros(tgt.rank(), src.rank());
    matrix[(tgt.unit_index(), src.unit_index())] = Q::one();
    Ok(Open::Hom {
        name: name.to_string(),
        src,
        tgt,
        matrix,
        line,
    })
}

fn close(file: &mut RingFile, open: Open, _line: usize) -> CohomResult<()> {
    match open {
        Open::None => {}
        Open::Ring(b) => file.rings.push(b.build()?),
        Open::Hom {
            name,
            src,
            tgt,
            matrix,
            line,
        } => {
            let hom = RingHom::new(&name, src, tgt, matrix).map_err(|e| match e {
                CohomError::InvalidRing(m) => CohomError::InvalidRing(format!("{m} (hom declared on line {line})")),
                other => other,
            })?;
            file.homs.push(hom);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohom::secat_lower;
    use crate::linalg::q;

    const CP3S4: &str = "secat-ring v1
# cohomology of the inclusion of CP3 in S4
ring S4 = sphere(4)
ring CP3
basis 1 0
basis v 2
basis v2 4
basis v3 6
unit 1
product v v = v2
product v v2 = v3
hom iota : S4 -> CP3
image x4 = v2
hom delta = first_delta iota
";

    #[test]
    fn parses_the_cp3_s4_data() {
        let f = parse_ring_file(CP3S4).unwrap();
        assert_eq!(f.rings.len(), 2);
        let delta = f.hom("delta").unwrap();
        assert_eq!(delta.src().rank(), 8);
        assert_eq!(secat_lower(delta, 4).length, 2);
    }

    #[test]
    fn round_trips_through_text() {
        let f = parse_ring_file(CP3S4).unwrap();
        let g = parse_ring_file(&f.to_text()).unwrap();
        // derived homs make their source rings explicit
        for r in &f.rings {
            assert_eq!(Some(r), g.ring(r.name()));
        }
        assert_eq!(f.homs, g.homs);
    }

    #[test]
    fn combinations_parse_with_rational_coefficients() {
        let labels: Vec<String> = ["1", "a", "b"].iter().map(|s| s.to_string()).collect();
        assert_eq!(parse_combination(&labels, "-2 b + 1/2 a").unwrap(), vec![q(0), crate::linalg::q_frac(1, 2), q(-2)]);
        assert_eq!(parse_combination(&labels, "0").unwrap(), vec![q(0); 3]);
        assert!(parse_combination(&labels, "a b").is_err());
        assert!(parse_combination(&labels, "c").is_err());
        assert_eq!(parse_combination(&labels, "1 - 3 1").unwrap(), vec![q(-2), q(0), q(0)]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let bad = "secat-ring v1\nring R\nbasis 1 0\nunit 1\nproduct 1 q = 1\n";
        assert!(matches!(parse_ring_file(bad), Err(CohomError::Parse { line: 5, .. })));
        assert!(matches!(parse_ring_file("ring R\n"), Err(CohomError::Parse { line: 1, .. })));
        let nonmult = "secat-ring v1\nring C = cp(2)\nhom f : C -> C\nimage v = v\n";
        assert!(matches!(parse_ring_file(nonmult), Err(CohomError::InvalidRing(_))));
    }
}
