//! Seeded generators of random chain complexes and chain maps.
//!
//! Complexes are built from Betti numbers and contractible pairs, then
//! conjugated by unimodular basis changes, so every instance has integer
//! differentials and a known homology.

use rand::Rng;

use crate::chain::{minimize, ChainComplex, GradedMap, Grading};
use crate::linalg::{q, Matrix};

/// Size limits for generated complexes.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    /// Maximum dimension in any degree.
    pub max_dim: usize,
    /// Maximum number of degrees.
    pub max_span: usize,
    /// Lowest degree that may be used.
    pub min_degree: i32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_dim: 4,
            max_span: 5,
            min_degree: 0,
        }
    }
}

/// Unimodular `n × n` matrix `L U` with entries of `L`, `U` in {−1, 0, 1}.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> Matrix {
    let mut l = Matrix::identity(n);
    let mut u = Matrix::identity(n);
    for r in 0..n {
        for c in 0..n {
            let v = q(rng.gen_range(-1..=1));
            if r > c {
                l[(r, c)] = v;
            } else if r < c {
                u[(r, c)] = v;
            }
        }
    }
    l.mul(&u)
}

pub fn random_complex<R: Rng>(rng: &mut R, limits: Limits) -> ChainComplex {
    let span = rng.gen_range(1..=limits.max_span);
    let lo = limits.min_degree + rng.gen_range(0..=1);
    // pairs[k] = number of contractible pairs between degree lo+k and lo+k−1
    let mut betti = vec![0usize; span];
    let mut pairs = vec![0usize; span + 1];
    let mut dims = vec![0usize; span];
    for k in 0..span {
        let room = limits.max_dim - dims[k];
        betti[k] = rng.gen_range(0..=room.min(2));
        dims[k] += betti[k];
        if k + 1 < span {
            let room_here = limits.max_dim - dims[k];
            let room_up = limits.max_dim;
            let p = rng.gen_range(0..=room_here.min(room_up).min(2));
            pairs[k + 1] = p;
            dims[k] += p;
            dims[k + 1] += p;
        }
    }
    let grading = Grading::new(lo, dims.clone());
    // standard differential: the first `pairs` basis vectors of degree n hit the
    // last `pairs` basis vectors of degree n−1
    let standard = |n: i32| -> Matrix {
        let k = (n - lo) as usize;
        let rows = if k == 0 { 0 } else { dims[k - 1] };
        let mut m = Matrix::zeros(rows, dims[k]);
        let p = pairs[k];
        for i in 0..p {
            m[(rows - p + i, i)] = q(1);
        }
        m
    };
    let bases: Vec<Matrix> = dims.iter().map(|&d| random_unimodular(rng, d)).collect();
    let base_at = |n: i32| -> &Matrix { &bases[(n - lo) as usize] };
    ChainComplex::new(grading.clone(), |n| {
        if n < lo || n >= lo + span as i32 || grading.dim(n) == 0 {
            return None;
        }
        let d = standard(n);
        if n == lo {
            return Some(d);
        }
        let inv = base_at(n).inverse().expect("unimodular");
        Some(base_at(n - 1).mul(&d).mul(&inv))
    })
    .expect("generated complex is valid")
}

/// A random chain map: a random graded map on homology, realized through
/// the minimal models, plus a random null-homotopic term `d s + s d`.
pub fn random_chain_map<R: Rng>(rng: &mut R, x: &ChainComplex, y: &ChainComplex) -> GradedMap {
    let (mx, my) = (minimize(x), minimize(y));
    let density = rng.gen_range(0..=3);
    let phi = GradedMap::from_fn(mx.min.grading(), my.min.grading(), 0, |n| {
        Matrix::from_fn(my.min.dim(n), mx.min.dim(n), |_, _| {
            if rng.gen_range(0..4) < density {
                q(rng.gen_range(-2..=2))
            } else {
                q(0)
            }
        })
    });
    let core = mx.retr.then(&phi).then(&my.incl);
    let s = GradedMap::from_fn(x.grading(), y.grading(), 1, |n| {
        Matrix::from_fn(y.dim(n + 1), x.dim(n), |_, _| q(rng.gen_range(-1..=1)))
    });
    let null = ChainComplex::commutator(x, y, &s);
    core.add(&null)
}

/// `f + d s + s d` for a random degree-one `s`: homotopic to `f`, rarely equal.
pub fn random_homotopic<R: Rng>(rng: &mut R, x: &ChainComplex, y: &ChainComplex, f: &GradedMap) -> GradedMap {
    let s = GradedMap::from_fn(x.grading(), y.grading(), 1, |n| {
        Matrix::from_fn(y.dim(n + 1), x.dim(n), |_, _| q(rng.gen_range(-1..=1)))
    });
    f.add(&ChainComplex::commutator(x, y, &s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_complexes_respect_limits() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let x = random_complex(&mut rng, Limits::default());
            assert!(x.grading().degrees().all(|n| x.dim(n) <= 4));
            assert!(x.is_zero_object() || x.hi() - x.lo() < 5);
            x.check_square_zero().unwrap();
        }
    }

    #[test]
    fn generated_maps_are_chain_maps() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let x = random_complex(&mut rng, Limits::default());
            let y = random_complex(&mut rng, Limits::default());
            let f = random_chain_map(&mut rng, &x, &y);
            assert!(ChainComplex::is_chain_map(&x, &y, &f));
        }
    }

    #[test]
    fn unimodular_has_integer_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_unimodular(&mut rng, 4);
        let inv = m.inverse().unwrap();
        assert!(inv.entries().iter().all(|x| x.is_integer()));
    }
}
