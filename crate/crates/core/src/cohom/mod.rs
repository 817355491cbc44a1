//! Cohomological lower bounds from finite graded-commutative rings.
//!
//! A class in the kernel of `φ*` is a zero-divisor for the map `φ`; a
//! nonzero product of `k` such classes forces `secat(φ) ≥ k`. The same
//! pattern gives `cat` (augmentation ideal) and `compl` (kernel of the cup
//! product on the tensor square). Nothing here touches the chain backend.

mod builtin;
mod text;

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::{fmt_q, Matrix, Q};

pub use builtin::builtin_ring;
pub use text::{parse_ring_file, RingFile};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CohomError {
    #[error("INVALID_RING: {0}")]
    InvalidRing(String),
    #[error("UNKNOWN_NAME: {0}")]
    UnknownName(String),
    #[error("PARSE_ERROR line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type CohomResult<T> = Result<T, CohomError>;

fn invalid(msg: impl Into<String>) -> CohomError {
    CohomError::InvalidRing(msg.into())
}

/// An element, as coefficients on the basis.
pub type Element = Vec<Q>;

/// Sign `(−1)^{ab}`.
fn koszul(a: u32, b: u32) -> Q {
    if a % 2 == 1 && b % 2 == 1 {
        -Q::one()
    } else {
        Q::one()
    }
}

/// A finite graded-commutative algebra over ℚ with a homogeneous basis.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedRing {
    name: String,
    labels: Vec<String>,
    degrees: Vec<u32>,
    unit: usize,
    /// `table[i * rank + j]` is the product of basis elements `i` and `j`.
    table: Vec<Element>,
}

impl fmt::Debug for GradedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedRing({}, rank {})", self.name, self.rank())
    }
}

/// Collects a multiplication table; missing products involving the unit
/// are filled by the unit law and missing transposes by graded
/// commutativity before validation.
#[derive(Clone, Debug)]
pub struct RingBuilder {
    name: String,
    labels: Vec<String>,
    degrees: Vec<u32>,
    unit: Option<usize>,
    table: Vec<Option<Element>>,
}

impl RingBuilder {
    pub fn new(name: &str) -> Self {
        RingBuilder {
            name: name.to_string(),
            labels: Vec::new(),
            degrees: Vec::new(),
            unit: None,
            table: Vec::new(),
        }
    }

    pub fn basis(&mut self, label: &str, degree: u32) -> CohomResult<usize> {
        if self.labels.iter().any(|l| l == label) {
            return Err(invalid(format!("{}: duplicate basis label {label}", self.name)));
        }
        if !self.table.is_empty() {
            return Err(invalid(format!("{}: basis declared after a product", self.name)));
        }
        self.labels.push(label.to_string());
        self.degrees.push(degree);
        Ok(self.labels.len() - 1)
    }

    pub fn index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn unit(&mut self, i: usize) -> &mut Self {
        self.unit = Some(i);
        self
    }

    pub fn product(&mut self, i: usize, j: usize, value: Element) -> CohomResult<&mut Self> {
        let n = self.rank();
        if self.table.is_empty() {
            self.table = vec![None; n * n];
        }
        if value.len() != n {
            return Err(invalid(format!("{}: product has {} coefficients, expected {n}", self.name, value.len())));
        }
        if let Some(old) = &self.table[i * n + j] {
            if *old != value {
                return Err(invalid(format!(
                    "{}: conflicting products for {}·{}",
                    self.name, self.labels[i], self.labels[j]
                )));
            }
        }
        self.table[i * n + j] = Some(value);
        Ok(self)
    }

    pub fn build(mut self) -> CohomResult<GradedRing> {
        let n = self.rank();
        if n == 0 {
            return Err(invalid(format!("{}: empty basis", self.name)));
        }
        let unit = self.unit.ok_or_else(|| invalid(format!("{}: no unit designated", self.name)))?;
        if self.table.is_empty() {
            self.table = vec![None; n * n];
        }
        let basis = |k: usize| -> Element {
            let mut v = vec![Q::zero(); n];
            v[k] = Q::one();
            v
        };
        for k in 0..n {
            if self.table[unit * n + k].is_none() {
                self.table[unit * n + k] = Some(basis(k));
            }
            if self.table[k * n + unit].is_none() {
                self.table[k * n + unit] = Some(basis(k));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if self.table[i * n + j].is_none() {
                    if let Some(t) = self.table[j * n + i].clone() {
                        let s = koszul(self.degrees[i], self.degrees[j]);
                        self.table[i * n + j] = Some(t.iter().map(|c| c * &s).collect());
                    }
                }
            }
        }
        let table = self.table.into_iter().map(|e| e.unwrap_or_else(|| vec![Q::zero(); n])).collect();
        let ring = GradedRing {
            name: self.name,
            labels: self.labels,
            degrees: self.degrees,
            unit,
            table,
        };
        ring.validate()?;
        Ok(ring)
    }
}

impl GradedRing {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: &str) {
        self.name = name.to_string();
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn top_degree(&self) -> u32 {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn unit_index(&self) -> usize {
        self.unit
    }

    pub fn basis_element(&self, i: usize) -> Element {
        let mut v = self.zero_element();
        v[i] = Q::one();
        v
    }

    pub fn zero_element(&self) -> Element {
        vec![Q::zero(); self.rank()]
    }

    pub fn unit_element(&self) -> Element {
        self.basis_element(self.unit)
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &Element {
        &self.table[i * self.rank() + j]
    }

    pub fn mul(&self, x: &[Q], y: &[Q]) -> Element {
        let n = self.rank();
        let mut out = self.zero_element();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (k, t) in self.table[i * n + j].iter().enumerate() {
                    if !t.is_zero() {
                        out[k] += &c * t;
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, x: &[Q], k: usize) -> Element {
        let mut acc = self.unit_element();
        for _ in 0..k {
            acc = self.mul(&acc, x);
        }
        acc
    }

    /// The degree of a nonzero homogeneous element.
    pub fn homogeneous_degree(&self, x: &[Q]) -> Option<u32> {
        let mut deg = None;
        for (i, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match deg {
                None => deg = Some(self.degrees[i]),
                Some(d) if d != self.degrees[i] => return None,
                _ => {}
            }
        }
        deg
    }

    /// Is the degree-0 part spanned by the unit?
    pub fn is_connected(&self) -> bool {
        (0..self.rank()).all(|i| i == self.unit || self.degrees[i] > 0)
    }

    pub fn format_element(&self, x: &[Q]) -> String {
        format_combination(&self.labels, x)
    }

    /// Homogeneity, unit law, graded commutativity and associativity.
    pub fn validate(&self) -> CohomResult<()> {
        let n = self.rank();
        let name = &self.name;
        if self.degrees[self.unit] != 0 {
            return Err(invalid(format!("{name}: unit {} has nonzero degree", self.labels[self.unit])));
        }
        for i in 0..n {
            for j in 0..n {
                let p = self.basis_product(i, j);
                let d = self.degrees[i] + self.degrees[j];
                if let Some(k) = (0..n).find(|&k| !p[k].is_zero() && self.degrees[k] != d) {
                    return Err(invalid(format!(
                        "{name}: {}·{} has a term {} outside degree {d}",
                        self.labels[i], self.labels[j], self.labels[k]
                    )));
                }
            }
        }
        for i in 0..n {
            let e = self.basis_element(i);
            if self.basis_product(self.unit, i) != &e || self.basis_product(i, self.unit) != &e {
                return Err(invalid(format!("{name}: unit law fails on {}", self.labels[i])));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let s = koszul(self.degrees[i], self.degrees[j]);
                let swapped: Element = self.basis_product(j, i).iter().map(|c| c * &s).collect();
                if self.basis_product(i, j) != &swapped {
                    return Err(invalid(format!(
                        "{name}: {}·{} is not graded-commutative",
                        self.labels[i], self.labels[j]
                    )));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ij = self.basis_product(i, j).clone();
                for k in 0..n {
                    let left = self.mul(&ij, &self.basis_element(k));
                    let right = self.mul(&self.basis_element(i), self.basis_product(j, k));
                    if left != right {
                        return Err(invalid(format!(
                            "{name}: ({0}·{1})·{2} ≠ {0}·({1}·{2})",
                            self.labels[i], self.labels[j], self.labels[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The ring of the point: ℚ in degree 0.
    pub fn point() -> GradedRing {
        let mut b = RingBuilder::new("point");
        let one = b.basis("1", 0).expect("fresh builder");
        b.unit(one);
        b.build().expect("point ring is valid")
    }
}

/// `R ⊗ S` with `(a⊗b)(c⊗d) = (−1)^{|b||c|} ac⊗bd`; basis `i * rank(S) + j`.
pub fn tensor(r: &GradedRing, s: &GradedRing) -> CohomResult<GradedRing> {
    let (n, m) = (r.rank(), s.rank());
    let mut b = RingBuilder::new(&format!("{}⊗{}", r.name, s.name));
    for i in 0..n {
        for j in 0..m {
            b.basis(&format!("{}⊗{}", r.labels[i], s.labels[j]), r.degrees[i] + s.degrees[j])?;
        }
    }
    b.unit(r.unit * m + s.unit);
    for i in 0..n {
        for j in 0..m {
            for k in 0..n {
                for l in 0..m {
                    let sign = koszul(s.degrees[j], r.degrees[k]);
                    let (rp, sp) = (r.basis_product(i, k), s.basis_product(j, l));
                    let mut v = vec![Q::zero(); n * m];
                    for (p, a) in rp.iter().enumerate() {
                        if a.is_zero() {
                            continue;
                        }
                        for (q, c) in sp.iter().enumerate() {
                            if !c.is_zero() {
                                v[p * m + q] = a * c * &sign;
                            }
                        }
                    }
                    b.product(i * m + j, k * m + l, v)?;
                }
            }
        }
    }
    b.build()
}

/// A degree-preserving, multiplicative, unital linear map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingHom {
    name: String,
    src: GradedRing,
    tgt: GradedRing,
    /// `tgt.rank() × src.rank()`; column `i` is the image of basis element `i`.
    matrix: Matrix,
}

impl RingHom {
    pub fn new(name: &str, src: GradedRing, tgt: GradedRing, matrix: Matrix) -> CohomResult<RingHom> {
        let hom = RingHom {
            name: name.to_string(),
            src,
            tgt,
            matrix,
        };
        hom.validate()?;
        Ok(hom)
    }

    pub fn identity(r: &GradedRing) -> RingHom {
        RingHom::new("id", r.clone(), r.clone(), Matrix::identity(r.rank())).expect("identity is a ring map")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn src(&self) -> &GradedRing {
        &self.src
    }

    pub fn tgt(&self) -> &GradedRing {
        &self.tgt
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[Q]) -> Element {
        self.matrix.mul_vec(x)
    }

    pub fn validate(&self) -> CohomResult<()> {
        let (s, t) = (&self.src, &self.tgt);
        let name = &self.name;
        if self.matrix.shape() != (t.rank(), s.rank()) {
            return Err(invalid(format!("{name}: matrix shape does not match the rings")));
        }
        for i in 0..s.rank() {
            for k in 0..t.rank() {
                if !self.matrix[(k, i)].is_zero() && t.degree(k) != s.degree(i) {
                    return Err(invalid(format!("{name}: image of {} leaves degree {}", s.label(i), s.degree(i))));
                }
            }
        }
        if self.apply(&s.unit_element()) != t.unit_element() {
            return Err(invalid(format!("{name}: not unital")));
        }
        for i in 0..s.rank() {
            for j in 0..s.rank() {
                let lhs = self.apply(s.basis_product(i, j));
                let rhs = t.mul(&self.matrix.column(i), &self.matrix.column(j));
                if lhs != rhs {
                    return Err(invalid(format!(
                        "{name}: not multiplicative on {}·{}",
                        s.label(i),
                        s.label(j)
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `R ⊗ R` with `x ↦ x⊗1`, `x ↦ 1⊗x` and the cup product `μ: R⊗R → R`.
#[derive(Clone, Debug)]
pub struct TensorSquare {
    pub ring: GradedRing,
    pub left: RingHom,
    pub right: RingHom,
    pub mult: RingHom,
}

pub fn tensor_square(r: &GradedRing) -> CohomResult<TensorSquare> {
    r.validate()?;
    let sq = tensor(r, r)?;
    let n = r.rank();
    let u = r.unit_index();
    let left = Matrix::from_fn(n * n, n, |row, i| if row == i * n + u { Q::one() } else { Q::zero() });
    let right = Matrix::from_fn(n * n, n, |row, i| if row == u * n + i { Q::one() } else { Q::zero() });
    let mut mult = Matrix::zeros(n, n * n);
    for i in 0..n {
        for j in 0..n {
            for (k, c) in r.basis_product(i, j).iter().enumerate() {
                mult[(k, i * n + j)] = c.clone();
            }
        }
    }
    Ok(TensorSquare {
        left: RingHom::new("left", r.clone(), sq.clone(), left)?,
        right: RingHom::new("right", r.clone(), sq.clone(), right)?,
        mult: RingHom::new("mult", sq.clone(), r.clone(), mult)?,
        ring: sq,
    })
}

/// For `φ: H(X) → H(A)`, the map `H(X) ⊗ H(A) → H(A)`, `x⊗a ↦ φ(x)·a`,
/// induced by `(ι, id): A → X × A`.
pub fn first_delta_hom(phi: &RingHom) -> CohomResult<RingHom> {
    let (x, a) = (&phi.src, &phi.tgt);
    let prod = tensor(x, a)?;
    let m = a.rank();
    let mut matrix = Matrix::zeros(m, prod.rank());
    for i in 0..x.rank() {
        let image = phi.matrix.column(i);
        for j in 0..m {
            let v = a.mul(&image, &a.basis_element(j));
            for (k, c) in v.into_iter().enumerate() {
                matrix[(k, i * m + j)] = c;
            }
        }
    }
    RingHom::new(&format!("delta1({})", phi.name), prod, a.clone(), matrix)
}

/// The augmentation `R → ℚ`; a ring map exactly when `R` is connected.
pub fn augmentation(r: &GradedRing) -> CohomResult<RingHom> {
    if !r.is_connected() {
        return Err(invalid(format!("{}: degree 0 is not spanned by the unit", r.name)));
    }
    let point = GradedRing::point();
    let matrix = Matrix::from_fn(1, r.rank(), |_, i| if i == r.unit_index() { Q::one() } else { Q::zero() });
    RingHom::new("augmentation", r.clone(), point, matrix)
}

/// An ideal given by homogeneous generators.
#[derive(Clone, Debug)]
pub struct Ideal {
    pub ring: GradedRing,
    pub generators: Vec<Element>,
}

impl Ideal {
    pub fn new(ring: &GradedRing, generators: Vec<Element>) -> CohomResult<Ideal> {
        for g in &generators {
            if g.len() != ring.rank() {
                return Err(invalid("generator has the wrong length"));
            }
            if g.iter().any(|c| !c.is_zero()) && ring.homogeneous_degree(g).is_none() {
                return Err(invalid(format!("generator {} is not homogeneous", ring.format_element(g))));
            }
        }
        let generators = generators.into_iter().filter(|g| g.iter().any(|c| !c.is_zero())).collect();
        Ok(Ideal {
            ring: ring.clone(),
            generators,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// A vector-space basis: generators closed under multiplication by the
    /// ring basis, reduced to pivot columns.
    pub fn span_basis(&self) -> Vec<Element> {
        let r = &self.ring;
        let mut basis: Vec<Element> = Vec::new();
        let mut frontier = self.generators.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for v in frontier {
                if extends_span(&basis, &v) {
                    for k in 0..r.rank() {
                        next.push(r.mul(&v, &r.basis_element(k)));
                    }
                    basis.push(v);
                }
            }
            frontier = next;
        }
        basis
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        !extends_span(&self.span_basis(), x)
    }
}

fn extends_span(basis: &[Element], v: &[Q]) -> bool {
    if v.iter().all(|c| c.is_zero()) {
        return false;
    }
    let n = v.len();
    let mut cols = basis.to_vec();
    let before = Matrix::from_columns(n, &cols).rank();
    cols.push(v.to_vec());
    Matrix::from_columns(n, &cols).rank() > before
}

/// Degreewise kernel basis, each vector homogeneous.
pub fn kernel(phi: &RingHom) -> Ideal {
    let s = &phi.src;
    let mut degrees: Vec<u32> = s.degrees().to_vec();
    degrees.sort_unstable();
    degrees.dedup();
    let mut generators = Vec::new();
    for d in degrees {
        let cols: Vec<usize> = (0..s.rank()).filter(|&i| s.degree(i) == d).collect();
        let block = phi.matrix.select_columns(&cols);
        let null = block.nullspace();
        for c in 0..null.cols() {
            let mut v = s.zero_element();
            for (k, &i) in cols.iter().enumerate() {
                v[i] = null[(k, c)].clone();
            }
            generators.push(v);
        }
    }
    Ideal::new(s, generators).expect("kernel vectors are homogeneous")
}

/// The cup-length of an ideal, with a product that realizes it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cuplength {
    pub length: usize,
    pub cap: usize,
    /// Indices into `factors` whose product is the nonzero `product`.
    pub witness: Vec<usize>,
    pub factors: Vec<Element>,
    pub product: Option<Element>,
}

impl Cuplength {
    pub fn describe(&self, ring: &GradedRing) -> String {
        match &self.product {
            None => "ideal is zero".to_string(),
            Some(p) => {
                let names: Vec<String> = self
                    .witness
                    .iter()
                    .map(|&i| format!("({})", ring.format_element(&self.factors[i])))
                    .collect();
                format!("{} = {}", names.join("·"), ring.format_element(p))
            }
        }
    }
}

/// Largest `k ≤ cap` such that some product of `k` elements of `ideal` is
/// nonzero. The span of `k`-fold products is grown one factor at a time
/// from homogeneous basis elements of the ideal, in degree-increasing order.
pub fn ideal_cuplength(ideal: &Ideal, cap: usize) -> Cuplength {
    let r = &ideal.ring;
    let mut factors = ideal.span_basis();
    factors.sort_by_key(|v| r.homogeneous_degree(v).unwrap_or(0));
    let mut result = Cuplength {
        length: 0,
        cap,
        witness: Vec::new(),
        factors: factors.clone(),
        product: None,
    };
    if factors.is_empty() || cap == 0 {
        return result;
    }
    // each entry: a nonzero product together with its factor indices
    let mut layer: Vec<(Element, Vec<usize>)> = factors.iter().enumerate().map(|(i, v)| (v.clone(), vec![i])).collect();
    let mut k = 1;
    loop {
        let (p, w) = &layer[0];
        result.length = k;
        result.witness = w.clone();
        result.product = Some(p.clone());
        if k == cap {
            return result;
        }
        let mut next: Vec<(Element, Vec<usize>)> = Vec::new();
        let mut span: Vec<Element> = Vec::new();
        for (p, w) in &layer {
            for (i, f) in factors.iter().enumerate() {
                let prod = r.mul(p, f);
                if extends_span(&span, &prod) {
                    span.push(prod.clone());
                    let mut w = w.clone();
                    w.push(i);
                    next.push((prod, w));
                }
            }
        }
        if next.is_empty() {
            return result;
        }
        layer = next;
        k += 1;
    }
}

/// Zero-divisor cup-length of `φ`: a lower bound for the sectional
/// category of any map inducing `φ`.
pub fn secat_lower(phi: &RingHom, cap: usize) -> Cuplength {
    ideal_cuplength(&kernel(phi), cap)
}

/// Cup-length of the augmentation ideal: a lower bound for `cat`.
pub fn cat_lower(r: &GradedRing, cap: usize) -> CohomResult<Cuplength> {
    Ok(secat_lower(&augmentation(r)?, cap))
}

/// Zero-divisor cup-length of the tensor square: a lower bound for `compl`.
pub fn compl_lower(r: &GradedRing, cap: usize) -> CohomResult<Cuplength> {
    Ok(secat_lower(&tensor_square(r)?.mult, cap))
}

pub(crate) fn format_combination(labels: &[String], x: &[Q]) -> String {
    let mut out = String::new();
    for (i, c) in x.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = c < &Q::zero();
        let mag = if neg { -c.clone() } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !mag.is_one() {
            out.push_str(&fmt_q(&mag));
            out.push(' ');
        }
        out.push_str(&labels[i]);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
