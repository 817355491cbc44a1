//! Explicit chain-level models of the homotopy-theoretic constructions.

use crate::linalg::{q, Matrix};

use super::complex::{ChainComplex, GradedMap, Grading};

/// Direct sum of gradings, in order.
fn sum_grading(parts: &[&Grading]) -> Grading {
    let pairs = parts.iter().flat_map(|g| g.pairs());
    Grading::from_pairs(pairs)
}

/// Offset of part `i` inside degree `n` of the sum.
fn offset(parts: &[&Grading], i: usize, n: i32) -> usize {
    parts[..i].iter().map(|g| g.dim(n)).sum()
}

/// Builds a map between direct sums from its blocks.
/// `block(row, col, n)` is the component from source part `col` in degree
/// `n` to target part `row` in degree `n + degree`; `None` means zero.
fn assemble(
    src_parts: &[&Grading],
    tgt_parts: &[&Grading],
    degree: i32,
    block: impl Fn(usize, usize, i32) -> Option<Matrix>,
) -> GradedMap {
    let src = sum_grading(src_parts);
    let tgt = sum_grading(tgt_parts);
    GradedMap::from_fn(&src, &tgt, degree, |n| {
        let mut m = Matrix::zeros(tgt.dim(n + degree), src.dim(n));
        for row in 0..tgt_parts.len() {
            for col in 0..src_parts.len() {
                if let Some(b) = block(row, col, n) {
                    m.set_block(offset(tgt_parts, row, n + degree), offset(src_parts, col, n), &b);
                }
            }
        }
        m
    })
}

/// `X[k]`: degree `n` holds `X_{n−k}`, differential `(−1)^k d`.
pub fn shift(x: &ChainComplex, k: i32) -> ChainComplex {
    let g = x.grading().shifted(k);
    let sign = if k.rem_euclid(2) == 0 { q(1) } else { q(-1) };
    let d = GradedMap::from_fn(&g, &g, -1, |n| x.d(n - k).scale(&sign));
    ChainComplex::from_differential(d)
}

/// A direct sum with its structure maps. It is both product and coproduct.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub complex: ChainComplex,
    pub inclusions: Vec<GradedMap>,
    pub projections: Vec<GradedMap>,
}

pub fn direct_sum(parts: &[&ChainComplex]) -> DirectSum {
    let gs: Vec<&Grading> = parts.iter().map(|c| c.grading()).collect();
    let d = assemble(&gs, &gs, -1, |r, c, n| (r == c).then(|| parts[r].d(n)));
    let complex = ChainComplex::from_differential(d);
    let mut inclusions = Vec::new();
    let mut projections = Vec::new();
    for (i, part) in gs.iter().enumerate() {
        inclusions.push(assemble(&[part], &gs, 0, |r, _, n| (r == i).then(|| Matrix::identity(part.dim(n)))));
        projections.push(assemble(&gs, &[part], 0, |_, c, n| (c == i).then(|| Matrix::identity(part.dim(n)))));
    }
    DirectSum {
        complex,
        inclusions,
        projections,
    }
}

/// Double mapping cylinder of a span `A ← Z → B`.
#[derive(Clone, Debug)]
pub struct PushoutData {
    pub apex: ChainComplex,
    pub in_a: GradedMap,
    pub in_b: GradedMap,
    /// `z ↦ (0, 0, −z)`, witnessing `in_a ∘ u ≃ in_b ∘ v`.
    pub witness: GradedMap,
}

pub fn h_pushout_complex(
    z: &ChainComplex,
    a: &ChainComplex,
    b: &ChainComplex,
    u: &GradedMap,
    v: &GradedMap,
) -> PushoutData {
    let zs = z.grading().shifted(1);
    let parts = [a.grading(), b.grading(), &zs];
    let d = assemble(&parts, &parts, -1, |r, c, n| match (r, c) {
        (0, 0) => Some(a.d(n)),
        (1, 1) => Some(b.d(n)),
        (0, 2) => Some(u.comp(n - 1).neg()),
        (1, 2) => Some(v.comp(n - 1)),
        (2, 2) => Some(z.d(n - 1).neg()),
        _ => None,
    });
    let apex = ChainComplex::from_differential(d);
    let in_a = assemble(&[a.grading()], &parts, 0, |r, _, n| (r == 0).then(|| Matrix::identity(a.dim(n))));
    let in_b = assemble(&[b.grading()], &parts, 0, |r, _, n| (r == 1).then(|| Matrix::identity(b.dim(n))));
    let witness = assemble(&[z.grading()], &parts, 1, |r, _, n| {
        (r == 2).then(|| Matrix::identity(z.dim(n)).neg())
    });
    PushoutData {
        apex,
        in_a,
        in_b,
        witness,
    }
}

/// Path-object model of the homotopy pullback of `A → X ← B`.
#[derive(Clone, Debug)]
pub struct PullbackData {
    pub apex: ChainComplex,
    pub pr_a: GradedMap,
    pub pr_b: GradedMap,
    /// `(a, b, t) ↦ −t`, witnessing `f ∘ pr_a ≃ g ∘ pr_b`.
    pub witness: GradedMap,
}

pub fn h_pullback_complex(
    a: &ChainComplex,
    b: &ChainComplex,
    x: &ChainComplex,
    f: &GradedMap,
    g: &GradedMap,
) -> PullbackData {
    let xs = x.grading().shifted(-1);
    let parts = [a.grading(), b.grading(), &xs];
    let d = assemble(&parts, &parts, -1, |r, c, n| match (r, c) {
        (0, 0) => Some(a.d(n)),
        (1, 1) => Some(b.d(n)),
        (2, 0) => Some(f.comp(n).neg()),
        (2, 1) => Some(g.comp(n)),
        (2, 2) => Some(x.d(n + 1).neg()),
        _ => None,
    });
    let apex = ChainComplex::from_differential(d);
    let pr_a = assemble(&parts, &[a.grading()], 0, |_, c, n| (c == 0).then(|| Matrix::identity(a.dim(n))));
    let pr_b = assemble(&parts, &[b.grading()], 0, |_, c, n| (c == 1).then(|| Matrix::identity(b.dim(n))));
    let witness = assemble(&parts, &[x.grading()], 1, |_, c, n| {
        (c == 2).then(|| Matrix::identity(x.dim(n + 1)).neg())
    });
    PullbackData {
        apex,
        pr_a,
        pr_b,
        witness,
    }
}

/// `j(a, b, z) = f a + g b − K z` on a double mapping cylinder over `(a, b, z)`.
pub fn whisker_out_map(
    z: &ChainComplex,
    a: &ChainComplex,
    b: &ChainComplex,
    t: &ChainComplex,
    f: &GradedMap,
    g: &GradedMap,
    k: &GradedMap,
) -> GradedMap {
    let zs = z.grading().shifted(1);
    let parts = [a.grading(), b.grading(), &zs];
    assemble(&parts, &[t.grading()], 0, |_, c, n| match c {
        0 => Some(f.comp(n)),
        1 => Some(g.comp(n)),
        _ => Some(k.comp(n - 1).neg()),
    })
}

/// `w(x) = (p x, q x, −S x)` into a path-object pullback, where `S`
/// witnesses `f ∘ p ≃ g ∘ q`.
pub fn whisker_in_map(
    w: &ChainComplex,
    a: &ChainComplex,
    b: &ChainComplex,
    x: &ChainComplex,
    p: &GradedMap,
    q: &GradedMap,
    s: &GradedMap,
) -> GradedMap {
    let xs = x.grading().shifted(-1);
    let parts = [a.grading(), b.grading(), &xs];
    assemble(&[w.grading()], &parts, 0, |r, _, n| match r {
        0 => Some(p.comp(n)),
        1 => Some(q.comp(n)),
        _ => Some(s.comp(n).neg()),
    })
}

/// `Cyl(A) = A ⊕ A ⊕ A[1]` with its end inclusions, fold and the homotopy
/// `h(a) = (0, 0, a)` satisfying `d h + h d = i₁ − i₀`.
#[derive(Clone, Debug)]
pub struct Cylinder {
    pub complex: ChainComplex,
    pub i0: GradedMap,
    pub i1: GradedMap,
    pub fold: GradedMap,
    pub h: GradedMap,
}

pub fn cylinder(a: &ChainComplex) -> Cylinder {
    let id = GradedMap::identity(a.grading());
    let po = h_pushout_complex(a, a, a, &id, &id);
    let as_ = a.grading().shifted(1);
    let parts = [a.grading(), a.grading(), &as_];
    let fold = assemble(&parts, &[a.grading()], 0, |_, c, n| (c < 2).then(|| Matrix::identity(a.dim(n))));
    Cylinder {
        complex: po.apex,
        i0: po.in_a,
        i1: po.in_b,
        fold,
        h: po.witness.neg(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ChainComplex {
        let g = Grading::new(0, vec![1, 2, 1]);
        ChainComplex::new(g, |n| match n {
            1 => Some(Matrix::from_i64(1, 2, &[1, 1])),
            2 => Some(Matrix::from_i64(2, 1, &[1, -1])),
            _ => None,
        })
        .unwrap()
    }

    #[test]
    fn cylinder_laws() {
        let a = sample();
        let cyl = cylinder(&a);
        let c = &cyl.complex;
        assert!(ChainComplex::is_chain_map(&a, c, &cyl.i0));
        assert!(ChainComplex::is_chain_map(&a, c, &cyl.i1));
        assert!(ChainComplex::is_chain_map(c, &a, &cyl.fold));
        assert!(ChainComplex::is_homotopy(&a, c, &cyl.h, &cyl.i1, &cyl.i0));
        assert_eq!(cyl.i0.then(&cyl.fold), GradedMap::identity(a.grading()));
    }

    #[test]
    fn pushout_witness_orientation() {
        let a = sample();
        let z = ChainComplex::sphere(1);
        let u = GradedMap::from_fn(z.grading(), a.grading(), 0, |n| {
            if n == 1 {
                Matrix::from_i64(2, 1, &[1, -1])
            } else {
                Matrix::zeros(a.dim(n), z.dim(n))
            }
        });
        assert!(ChainComplex::is_chain_map(&z, &a, &u));
        let v = GradedMap::zero(z.grading(), a.grading(), 0);
        let po = h_pushout_complex(&z, &a, &a, &u, &v);
        let lhs = u.then(&po.in_a);
        let rhs = v.then(&po.in_b);
        assert!(ChainComplex::is_homotopy(&z, &po.apex, &po.witness, &lhs, &rhs));
    }

    #[test]
    fn pullback_witness_orientation() {
        let x = sample();
        let a = ChainComplex::sphere(1);
        let f = GradedMap::from_fn(a.grading(), x.grading(), 0, |n| {
            if n == 1 {
                Matrix::from_i64(2, 1, &[1, -1])
            } else {
                Matrix::zeros(x.dim(n), a.dim(n))
            }
        });
        let g = GradedMap::identity(x.grading());
        let pb = h_pullback_complex(&a, &x, &x, &f, &g);
        let lhs = pb.pr_a.then(&f);
        let rhs = pb.pr_b.then(&g);
        assert!(ChainComplex::is_homotopy(&pb.apex, &x, &pb.witness, &lhs, &rhs));
    }

    #[test]
    fn shift_signs() {
        let x = sample();
        let s = shift(&x, 1);
        assert_eq!(s.d(2), x.d(1).neg());
        assert_eq!(shift(&s, -1), x);
        assert_eq!(s.betti(), x.betti().shifted(1));
    }

    #[test]
    fn direct_sum_with_zero_is_identity() {
        let x = sample();
        let ds = direct_sum(&[&x, &ChainComplex::zero()]);
        assert_eq!(ds.complex, x);
        assert_eq!(ds.inclusions[0], GradedMap::identity(x.grading()));
    }
}
