use std::fmt;

use thiserror::Error;

use crate::linalg::{Matrix, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("mismatch: {0}")]
    Mismatch(String),
}

/// Per-degree dimensions of a bounded graded vector space.
///
/// Always trimmed: the first and last stored degrees have nonzero
/// dimension, and the zero space is `lo = 0, dims = []`. Two gradings are
/// therefore equal iff they describe the same space.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Grading {
    lo: i32,
    dims: Vec<usize>,
}

impl fmt::Debug for Grading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Grading{{")?;
        let parts: Vec<String> = self.degrees().map(|n| format!("{n}:{}", self.dim(n))).collect();
        write!(f, "{}}}", parts.join(","))
    }
}

impl Grading {
    pub fn new(lo: i32, dims: Vec<usize>) -> Self {
        let first = dims.iter().position(|&d| d > 0);
        let Some(first) = first else {
            return Grading::default();
        };
        let last = dims.iter().rposition(|&d| d > 0).unwrap();
        Grading {
            lo: lo + first as i32,
            dims: dims[first..=last].to_vec(),
        }
    }

    /// Builds a grading from `(degree, dim)` pairs; repeated degrees add up.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (i32, usize)>) -> Self {
        let pairs: Vec<(i32, usize)> = pairs.into_iter().filter(|p| p.1 > 0).collect();
        if pairs.is_empty() {
            return Grading::default();
        }
        let lo = pairs.iter().map(|p| p.0).min().unwrap();
        let hi = pairs.iter().map(|p| p.0).max().unwrap();
        let mut dims = vec![0; (hi - lo + 1) as usize];
        for (n, d) in pairs {
            dims[(n - lo) as usize] += d;
        }
        Grading::new(lo, dims)
    }

    pub fn zero() -> Self {
        Grading::default()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    /// Top degree; `lo − 1` for the zero space.
    pub fn hi(&self) -> i32 {
        self.lo + self.dims.len() as i32 - 1
    }

    pub fn dim(&self, n: i32) -> usize {
        if n < self.lo || n > self.hi() {
            0
        } else {
            self.dims[(n - self.lo) as usize]
        }
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> {
        self.lo..=self.hi()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn shifted(&self, k: i32) -> Grading {
        if self.is_zero() {
            return Grading::default();
        }
        Grading {
            lo: self.lo + k,
            dims: self.dims.clone(),
        }
    }

    /// Degree-range hull of several gradings, inclusive; `None` when all are zero.
    pub fn hull(gradings: &[&Grading]) -> Option<(i32, i32)> {
        let nonzero: Vec<&&Grading> = gradings.iter().filter(|g| !g.is_zero()).collect();
        if nonzero.is_empty() {
            return None;
        }
        let lo = nonzero.iter().map(|g| g.lo).min().unwrap();
        let hi = nonzero.iter().map(|g| g.hi()).max().unwrap();
        Some((lo, hi))
    }

    /// Pairs `(degree, dim)` for every stored degree.
    pub fn pairs(&self) -> Vec<(i32, usize)> {
        self.degrees().map(|n| (n, self.dim(n))).collect()
    }
}

/// A family of matrices `X_n → Y_{n+degree}`, stored for every degree of
/// the source grading. Components outside the source range are zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GradedMap {
    src: Grading,
    tgt: Grading,
    degree: i32,
    comps: Vec<Matrix>,
}

impl fmt::Debug for GradedMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedMap(deg {}) {{", self.degree)?;
        for n in self.src.degrees() {
            write!(f, " {n}: {:?}", self.comp(n))?;
        }
        write!(f, " }}")
    }
}

impl GradedMap {
    pub fn zero(src: &Grading, tgt: &Grading, degree: i32) -> Self {
        Self::from_fn(src, tgt, degree, |n| Matrix::zeros(tgt.dim(n + degree), src.dim(n)))
    }

    pub fn identity(g: &Grading) -> Self {
        Self::from_fn(g, g, 0, |n| Matrix::identity(g.dim(n)))
    }

    /// Builds a map from a component function. Panics on a wrongly shaped
    /// component, which is always a construction bug rather than bad input.
    pub fn from_fn(src: &Grading, tgt: &Grading, degree: i32, mut f: impl FnMut(i32) -> Matrix) -> Self {
        let comps = src
            .degrees()
            .map(|n| {
                let m = f(n);
                assert_eq!(
                    m.shape(),
                    (tgt.dim(n + degree), src.dim(n)),
                    "component {n} of graded map has wrong shape"
                );
                m
            })
            .collect();
        GradedMap {
            src: src.clone(),
            tgt: tgt.clone(),
            degree,
            comps,
        }
    }

    /// Checked variant of [`GradedMap::from_fn`] for untrusted components.
    pub fn try_from_components(
        src: &Grading,
        tgt: &Grading,
        degree: i32,
        mut comps: impl FnMut(i32) -> Option<Matrix>,
    ) -> Result<Self, ChainError> {
        let mut out = Vec::new();
        for n in src.degrees() {
            let shape = (tgt.dim(n + degree), src.dim(n));
            let m = comps(n).unwrap_or_else(|| Matrix::zeros(shape.0, shape.1));
            if m.shape() != shape {
                return Err(ChainError::InvalidMap(format!(
                    "component in degree {n} has shape {:?}, expected {:?}",
                    m.shape(),
                    shape
                )));
            }
            out.push(m);
        }
        Ok(GradedMap {
            src: src.clone(),
            tgt: tgt.clone(),
            degree,
            comps: out,
        })
    }

    pub fn src(&self) -> &Grading {
        &self.src
    }

    pub fn tgt(&self) -> &Grading {
        &self.tgt
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn comp(&self, n: i32) -> Matrix {
        match self.comp_ref(n) {
            Some(m) => m.clone(),
            None => Matrix::zeros(self.tgt.dim(n + self.degree), self.src.dim(n)),
        }
    }

    pub fn comp_ref(&self, n: i32) -> Option<&Matrix> {
        if self.src.is_zero() || n < self.src.lo() || n > self.src.hi() {
            None
        } else {
            Some(&self.comps[(n - self.src.lo()) as usize])
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Matrix::is_zero)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GradedMap) -> GradedMap {
        assert_eq!(self.tgt, other.src, "graded composition: endpoints disagree");
        let degree = self.degree + other.degree;
        GradedMap::from_fn(&self.src, &other.tgt, degree, |n| {
            other.comp(n + self.degree).mul(&self.comp(n))
        })
    }

    fn zip(&self, other: &GradedMap, op: impl Fn(&Matrix, &Matrix) -> Matrix) -> GradedMap {
        assert!(
            self.src == other.src && self.tgt == other.tgt && self.degree == other.degree,
            "graded maps are not parallel"
        );
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| op(a, b)).collect();
        GradedMap {
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            degree: self.degree,
            comps,
        }
    }

    pub fn add(&self, other: &GradedMap) -> GradedMap {
        self.zip(other, Matrix::add)
    }

    pub fn sub(&self, other: &GradedMap) -> GradedMap {
        self.zip(other, Matrix::sub)
    }

    pub fn neg(&self) -> GradedMap {
        self.scale(&Q::from_integer((-1).into()))
    }

    pub fn scale(&self, s: &Q) -> GradedMap {
        GradedMap {
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            degree: self.degree,
            comps: self.comps.iter().map(|m| m.scale(s)).collect(),
        }
    }

    pub fn is_parallel(&self, other: &GradedMap) -> bool {
        self.src == other.src && self.tgt == other.tgt && self.degree == other.degree
    }
}

/// A bounded chain complex: a grading plus a degree −1 differential.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ChainComplex {
    d: GradedMap,
}

impl fmt::Debug for ChainComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChainComplex {:?} d={:?}", self.d.src, self.d)
    }
}

/// Homology of a complex with the bases used to compute it.
#[derive(Clone, Debug)]
pub struct Homology {
    pub betti: Grading,
    /// Columns span `ker d_n`, indexed by degree from `lo` of the complex.
    pub cycles: Vec<(i32, Matrix)>,
    /// Columns span `im d_{n+1}`.
    pub boundaries: Vec<(i32, Matrix)>,
}

impl ChainComplex {
    /// Validates shapes and `d ∘ d = 0`.
    pub fn new(grading: Grading, diffs: impl FnMut(i32) -> Option<Matrix>) -> Result<Self, ChainError> {
        let d = GradedMap::try_from_components(&grading, &grading, -1, diffs)
            .map_err(|e| ChainError::InvalidComplex(e.to_string()))?;
        let c = ChainComplex { d };
        c.check_square_zero()?;
        Ok(c)
    }

    /// Trusted constructor for internally built differentials; still
    /// checks `d² = 0` in debug builds.
    pub(crate) fn from_differential(d: GradedMap) -> Self {
        assert_eq!(d.src, d.tgt);
        assert_eq!(d.degree, -1);
        let c = ChainComplex { d };
        debug_assert!(c.check_square_zero().is_ok(), "constructed differential does not square to zero");
        c
    }

    pub fn zero() -> Self {
        ChainComplex {
            d: GradedMap::zero(&Grading::zero(), &Grading::zero(), -1),
        }
    }

    /// Zero-differential complex with the given dimensions.
    pub fn with_zero_differential(grading: Grading) -> Self {
        ChainComplex {
            d: GradedMap::zero(&grading, &grading, -1),
        }
    }

    /// Reduced model of the k-sphere: one copy of ℚ in degree k.
    pub fn sphere(k: i32) -> Self {
        Self::with_zero_differential(Grading::new(k, vec![1]))
    }

    pub fn grading(&self) -> &Grading {
        &self.d.src
    }

    pub fn dim(&self, n: i32) -> usize {
        self.d.src.dim(n)
    }

    pub fn lo(&self) -> i32 {
        self.d.src.lo()
    }

    pub fn hi(&self) -> i32 {
        self.d.src.hi()
    }

    pub fn is_zero_object(&self) -> bool {
        self.d.src.is_zero()
    }

    pub fn differential(&self) -> &GradedMap {
        &self.d
    }

    /// `d_n : X_n → X_{n−1}`.
    pub fn d(&self, n: i32) -> Matrix {
        self.d.comp(n)
    }

    pub fn check_square_zero(&self) -> Result<(), ChainError> {
        for n in self.grading().degrees() {
            let dd = self.d(n - 1).mul(&self.d(n));
            if !dd.is_zero() {
                return Err(ChainError::InvalidComplex(format!("d_{} ∘ d_{} is not zero", n - 1, n)));
            }
        }
        Ok(())
    }

    /// Computes homology from independent rank data:
    /// `dim H_n = dim ker d_n − rank d_{n+1}`.
    pub fn homology(&self) -> Homology {
        let mut pairs = Vec::new();
        let mut cycles = Vec::new();
        let mut boundaries = Vec::new();
        for n in self.grading().degrees() {
            let z = self.d(n).nullspace();
            let b = self.d(n + 1).column_space();
            pairs.push((n, z.cols() - b.cols()));
            cycles.push((n, z));
            boundaries.push((n, b));
        }
        Homology {
            betti: Grading::from_pairs(pairs),
            cycles,
            boundaries,
        }
    }

    pub fn betti(&self) -> Grading {
        let pairs = self
            .grading()
            .degrees()
            .map(|n| (n, self.dim(n) - self.d(n).rank() - self.d(n + 1).rank()));
        Grading::from_pairs(pairs)
    }

    pub fn is_acyclic(&self) -> bool {
        self.betti().is_zero()
    }

    /// `d_Y ∘ f = f ∘ d_X` with `f` of degree zero.
    pub fn is_chain_map(src: &ChainComplex, tgt: &ChainComplex, f: &GradedMap) -> bool {
        f.degree == 0
            && f.src == *src.grading()
            && f.tgt == *tgt.grading()
            && src.grading().degrees().all(|n| tgt.d(n).mul(&f.comp(n)) == f.comp(n - 1).mul(&src.d(n)))
    }

    /// Graded commutator `d_Y s − (−1)^{|s|} s d_X`; for degree-one `s` this
    /// is `d s + s d`.
    pub fn commutator(src: &ChainComplex, tgt: &ChainComplex, s: &GradedMap) -> GradedMap {
        let k = s.degree;
        let sign = if k % 2 == 0 { Q::from_integer((-1).into()) } else { Q::from_integer(1.into()) };
        GradedMap::from_fn(src.grading(), tgt.grading(), k - 1, |n| {
            let left = tgt.d(n + k).mul(&s.comp(n));
            let right = s.comp(n - 1).mul(&src.d(n));
            left.add(&right.scale(&sign))
        })
    }

    /// Checks `d s + s d = f − g`.
    pub fn is_homotopy(src: &ChainComplex, tgt: &ChainComplex, s: &GradedMap, f: &GradedMap, g: &GradedMap) -> bool {
        s.degree == 1
            && s.src == *src.grading()
            && s.tgt == *tgt.grading()
            && f.is_parallel(g)
            && f.degree == 0
            && Self::commutator(src, tgt, s) == f.sub(g)
    }
}
