//! Homotopy-theoretic decisions, all reduced to homology.
//!
//! Over a field every bounded complex is homotopy equivalent to its homology,
//! and homotopy classes of maps are exactly graded maps on homology. The
//! minimal model makes both facts constructive.

use crate::linalg::Matrix;

use super::complex::{ChainComplex, GradedMap, Grading};

/// A strong deformation retraction of a complex onto its homology.
///
/// `retr ∘ incl = id`, and `htpy` witnesses `id ≃ incl ∘ retr`, i.e.
/// `d h + h d = id − incl ∘ retr`.
#[derive(Clone, Debug)]
pub struct MinimalModel {
    pub min: ChainComplex,
    pub incl: GradedMap,
    pub retr: GradedMap,
    pub htpy: GradedMap,
}

/// Per-degree splitting `X_n = B_n ⊕ H_n ⊕ C_n` into boundaries, a
/// homology complement and a complement of the cycles.
struct Splitting {
    boundary: Matrix,
    harmonic: Matrix,
    coboundary: Matrix,
    /// Inverse of `[B | H | C]`.
    inverse: Matrix,
}

fn split(x: &ChainComplex, n: i32) -> Splitting {
    let dim = x.dim(n);
    let boundary = x.d(n + 1).column_space();
    let cycles = x.d(n).nullspace();
    let harmonic = Matrix::extend_basis(&boundary, &cycles);
    let bh = boundary.hstack(&harmonic);
    let coboundary = Matrix::extend_basis(&bh, &Matrix::identity(dim));
    let basis = bh.hstack(&coboundary);
    let inverse = basis.inverse().expect("splitting basis is invertible");
    Splitting {
        boundary,
        harmonic,
        coboundary,
        inverse,
    }
}

pub fn minimize(x: &ChainComplex) -> MinimalModel {
    let degrees: Vec<i32> = x.grading().degrees().collect();
    let splits: Vec<Splitting> = degrees.iter().map(|&n| split(x, n)).collect();
    let at = |n: i32| -> Option<&Splitting> {
        if x.grading().is_zero() || n < x.lo() || n > x.hi() {
            None
        } else {
            Some(&splits[(n - x.lo()) as usize])
        }
    };
    let betti = Grading::from_pairs(degrees.iter().zip(&splits).map(|(&n, s)| (n, s.harmonic.cols())));
    let min = ChainComplex::with_zero_differential(betti.clone());
    let incl = GradedMap::from_fn(&betti, x.grading(), 0, |n| match at(n) {
        Some(s) => s.harmonic.clone(),
        None => Matrix::zeros(x.dim(n), 0),
    });
    let retr = GradedMap::from_fn(x.grading(), &betti, 0, |n| {
        let s = at(n).unwrap();
        let b = s.boundary.cols();
        s.inverse.block(b, 0, s.harmonic.cols(), x.dim(n))
    });
    // h_n = C_{n+1} · D⁻¹ · (B-coordinates), D = B-coordinates of d restricted to C_{n+1}
    let htpy = GradedMap::from_fn(x.grading(), x.grading(), 1, |n| {
        let s = at(n).unwrap();
        let b = s.boundary.cols();
        if b == 0 {
            return Matrix::zeros(x.dim(n + 1), x.dim(n));
        }
        let up = at(n + 1).expect("boundaries come from the next degree");
        let b_coords = s.inverse.block(0, 0, b, x.dim(n));
        let dc = b_coords.mul(&x.d(n + 1)).mul(&up.coboundary);
        let dinv = dc.inverse().expect("d is injective on the cycle complement");
        up.coboundary.mul(&dinv).mul(&b_coords)
    });
    MinimalModel { min, incl, retr, htpy }
}

/// Matrix of `f` on the homology bases of the two minimal models.
pub fn homology_map(src: &MinimalModel, tgt: &MinimalModel, f: &GradedMap) -> GradedMap {
    src.incl.then(f).then(&tgt.retr)
}

/// Homotopy `s` with `d s + s d = f − g`, or `None` when the induced maps on
/// homology differ.
///
/// Closed form: with `φ = f − g` and `H(φ) = 0`,
/// `s = φ h_X + h_Y φ incl_X retr_X`.
pub fn solve_homotopy(
    src_min: &MinimalModel,
    tgt_min: &MinimalModel,
    f: &GradedMap,
    g: &GradedMap,
) -> Option<GradedMap> {
    let phi = f.sub(g);
    if !homology_map(src_min, tgt_min, &phi).is_zero() {
        return None;
    }
    let first = src_min.htpy.then(&phi);
    let second = src_min.retr.then(&src_min.incl).then(&phi).then(&tgt_min.htpy);
    Some(first.add(&second))
}

/// Chain map `σ: X → G` with `g ∘ σ ≃ id`, present iff `H(g)` is surjective.
/// Uses the lexicographically first right inverse on homology.
pub fn solve_section(g_min: &MinimalModel, x_min: &MinimalModel, g: &GradedMap) -> Option<GradedMap> {
    let hg = homology_map(g_min, x_min, g);
    let mut parts = Vec::new();
    for n in x_min.min.grading().degrees() {
        let m = hg.comp(n);
        parts.push((n, m.right_inverse()?));
    }
    let right = GradedMap::from_fn(x_min.min.grading(), g_min.min.grading(), 0, |n| {
        parts
            .iter()
            .find(|p| p.0 == n)
            .map(|p| p.1.clone())
            .unwrap_or_else(|| Matrix::zeros(g_min.min.dim(n), x_min.min.dim(n)))
    });
    Some(x_min.retr.then(&right).then(&g_min.incl))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelSectionError {
    /// `g ∘ α` and `ι` induce different maps on homology.
    Incoherent,
}

/// Chain map `σ: X → G` with `g σ ≃ id` and `σ ι ≃ α`, by solving
/// `H(g) Σ = I`, `Σ H(ι) = H(α)` degreewise.
pub fn solve_rel_section(
    g_min: &MinimalModel,
    x_min: &MinimalModel,
    a_min: &MinimalModel,
    g: &GradedMap,
    iota: &GradedMap,
    alpha: &GradedMap,
) -> Result<Option<GradedMap>, RelSectionError> {
    let hg = homology_map(g_min, x_min, g);
    let hi = homology_map(a_min, x_min, iota);
    let ha = homology_map(a_min, g_min, alpha);
    if ha.then(&hg) != hi {
        return Err(RelSectionError::Incoherent);
    }
    let mut blocks = Vec::new();
    // degrees where only A and G carry homology still constrain Σ H(ι) = H(α)
    let gradings = [x_min.min.grading(), g_min.min.grading(), a_min.min.grading()];
    let (first, last) = Grading::hull(&gradings).unwrap_or((0, -1));
    for n in first..=last {
        let (gd, xd) = (g_min.min.dim(n), x_min.min.dim(n));
        // vec(H(g) Σ) = (I ⊗ H(g)) vec Σ and vec(Σ H(ι)) = (H(ι)ᵀ ⊗ I) vec Σ
        let top = Matrix::identity(xd).kron(&hg.comp(n));
        let bottom = hi.comp(n).transpose().kron(&Matrix::identity(gd));
        let system = top.vstack(&bottom);
        let mut rhs = Matrix::identity(xd).vec();
        rhs.extend(ha.comp(n).vec());
        let Some(sol) = system.solve_vec(&rhs) else {
            return Ok(None);
        };
        blocks.push((n, Matrix::unvec(gd, xd, &sol)));
    }
    let sigma = GradedMap::from_fn(x_min.min.grading(), g_min.min.grading(), 0, |n| {
        blocks
            .iter()
            .find(|b| b.0 == n)
            .map(|b| b.1.clone())
            .unwrap_or_else(|| Matrix::zeros(g_min.min.dim(n), x_min.min.dim(n)))
    });
    Ok(Some(x_min.retr.then(&sigma).then(&g_min.incl)))
}

pub fn is_quasi_isomorphism(src_min: &MinimalModel, tgt_min: &MinimalModel, f: &GradedMap) -> bool {
    if src_min.min.grading() != tgt_min.min.grading() {
        return false;
    }
    let h = homology_map(src_min, tgt_min, f);
    src_min
        .min
        .grading()
        .degrees()
        .all(|n| h.comp(n).rank() == src_min.min.dim(n))
}

/// Homotopy inverse of a quasi-isomorphism, realized through the models.
pub fn quasi_inverse(src_min: &MinimalModel, tgt_min: &MinimalModel, f: &GradedMap) -> Option<GradedMap> {
    if !is_quasi_isomorphism(src_min, tgt_min, f) {
        return None;
    }
    let h = homology_map(src_min, tgt_min, f);
    let inv = GradedMap::from_fn(tgt_min.min.grading(), src_min.min.grading(), 0, |n| {
        h.comp(n).inverse().expect("square full-rank component")
    });
    Some(tgt_min.retr.then(&inv).then(&src_min.incl))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::constructions::{cylinder, h_pushout_complex};
    use crate::linalg::{q, Matrix};

    fn sample() -> ChainComplex {
        // degrees 0..3 with one homology class in degrees 0 and 3
        let g = Grading::new(0, vec![2, 2, 1, 1]);
        ChainComplex::new(g, |n| match n {
            1 => Some(Matrix::from_i64(2, 2, &[1, 1, 0, 0])),
            2 => Some(Matrix::from_i64(2, 1, &[1, -1])),
            _ => None,
        })
        .unwrap()
    }

    fn check_model(x: &ChainComplex) {
        let m = minimize(x);
        assert_eq!(m.min.grading(), &x.homology().betti);
        assert!(ChainComplex::is_chain_map(&m.min, x, &m.incl));
        assert!(ChainComplex::is_chain_map(x, &m.min, &m.retr));
        assert_eq!(m.incl.then(&m.retr), GradedMap::identity(m.min.grading()));
        let id = GradedMap::identity(x.grading());
        let proj = m.retr.then(&m.incl);
        assert!(ChainComplex::is_homotopy(x, x, &m.htpy, &id, &proj));
    }

    #[test]
    fn minimal_model_laws() {
        check_model(&sample());
        check_model(&ChainComplex::zero());
        check_model(&ChainComplex::sphere(2));
    }

    #[test]
    fn cone_of_identity_minimizes_to_zero() {
        let x = sample();
        let id = GradedMap::identity(x.grading());
        let zero = ChainComplex::zero();
        let cone = h_pushout_complex(&x, &x, &zero, &id, &GradedMap::zero(x.grading(), zero.grading(), 0));
        assert!(cone.apex.is_acyclic());
        assert!(minimize(&cone.apex).min.is_zero_object());
        check_model(&cone.apex);
    }

    #[test]
    fn homotopy_between_cylinder_ends() {
        let x = sample();
        let cyl = cylinder(&x);
        let mx = minimize(&x);
        let mc = minimize(&cyl.complex);
        let s = solve_homotopy(&mx, &mc, &cyl.i0, &cyl.i1).unwrap();
        assert!(ChainComplex::is_homotopy(&x, &cyl.complex, &s, &cyl.i0, &cyl.i1));
    }

    #[test]
    fn distinct_homology_maps_are_not_homotopic() {
        let x = sample();
        let mx = minimize(&x);
        let id = GradedMap::identity(x.grading());
        let twice = id.scale(&q(2));
        assert!(solve_homotopy(&mx, &mx, &id, &twice).is_none());
        let zero = GradedMap::zero(x.grading(), x.grading(), 0);
        let s = solve_homotopy(&mx, &mx, &zero, &zero).unwrap();
        assert!(s.is_zero());
    }

    #[test]
    fn section_of_zero_into_nonacyclic_is_absent() {
        let x = sample();
        let zero = ChainComplex::zero();
        let g = GradedMap::zero(zero.grading(), x.grading(), 0);
        assert!(solve_section(&minimize(&zero), &minimize(&x), &g).is_none());
    }

    #[test]
    fn identity_is_its_own_quasi_inverse_up_to_homotopy() {
        let x = sample();
        let mx = minimize(&x);
        let id = GradedMap::identity(x.grading());
        let inv = quasi_inverse(&mx, &mx, &id).unwrap();
        assert!(solve_homotopy(&mx, &mx, &inv, &id).is_some());
    }
}
