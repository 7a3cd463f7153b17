//! Seeded pseudo-random generation of valid mixed Hodge structures, valid
//! morphisms between them, and subspace inputs for the involution builders.
//!
//! Every generator is driven by an explicit seed, so randomized suites are
//! exactly reproducible. Objects are assembled from pure pieces in standard
//! coordinates (where validity is evident), optionally twisted by a
//! filtration-mixing unipotent that is the identity on every weight graded
//! piece, and finally transported along a random rational basis change —
//! operations that preserve validity by construction. The suites still
//! re-check every sample with the module validators.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::hodge::{HodgeFiltration, MHSMorphism, MHSObject, WeightFiltration};
use crate::linalg::{GaussRat, Matrix, Rat, Subspace};

/// One pure building block of a split mixed Hodge structure.
#[derive(Clone, Debug)]
struct Piece {
    /// Weight index relative to the base weight.
    index: i64,
    /// Dimension; even-weight pieces are Tate-like of any dimension,
    /// odd-weight pieces come in 2-dimensional conjugate pairs.
    dim: usize,
}

/// Deterministic sampler over all generators in this module.
pub struct Sampler {
    rng: StdRng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: StdRng::seed_from_u64(seed) }
    }

    /// A small rational with numerator in [-3, 3] and denominator 1 or 2.
    pub fn rat(&mut self) -> Rat {
        let num: i64 = self.rng.gen_range(-3..=3);
        let den: i64 = self.rng.gen_range(1..=2);
        Rat::new(num.into(), den.into())
    }

    fn nonzero_rat(&mut self) -> Rat {
        loop {
            let r = self.rat();
            if !r.is_zero() {
                return r;
            }
        }
    }

    fn gauss(&mut self) -> GaussRat {
        GaussRat::new(self.rat(), self.rat())
    }

    /// Random invertible rational matrix, built as (unit lower)·(diag)·(unit
    /// upper) so invertibility holds by construction.
    pub fn invertible(&mut self, n: usize) -> Matrix<Rat> {
        let mut l = Matrix::identity(n);
        let mut u = Matrix::identity(n);
        let mut d = Matrix::zero(n, n);
        for i in 0..n {
            d.set(i, i, self.nonzero_rat());
            for j in 0..i {
                if self.rng.gen_bool(0.5) {
                    l.set(i, j, self.rat());
                }
                if self.rng.gen_bool(0.5) {
                    u.set(j, i, self.rat());
                }
            }
        }
        l.mul(&d).expect("square").mul(&u).expect("square")
    }

    /// Random subspace of ℚ^ambient (any dimension, including 0 and full).
    pub fn subspace(&mut self, ambient: usize) -> Subspace<Rat> {
        let rows = self.rng.gen_range(0..=ambient);
        let data = (0..rows)
            .map(|_| (0..ambient).map(|_| self.rat()).collect())
            .collect();
        Subspace::from_rows(ambient, data)
    }

    /// Random subspace contained in `outer`: random combinations of its basis.
    pub fn subspace_inside(&mut self, outer: &Subspace<Rat>) -> Subspace<Rat> {
        let basis = outer.basis_rows();
        let rows = if basis.is_empty() { 0 } else { self.rng.gen_range(0..=basis.len()) };
        let mut data = Vec::new();
        for _ in 0..rows {
            let mut v = vec![Rat::zero(); outer.ambient_dim()];
            for b in &basis {
                let c = self.rat();
                for (slot, bj) in v.iter_mut().zip(b) {
                    *slot = slot.clone() + c.clone() * bj.clone();
                }
            }
            data.push(v);
        }
        Subspace::from_rows(outer.ambient_dim(), data)
    }

    fn pieces(&mut self, base_weight: i64, force_negative: bool) -> Vec<Piece> {
        let n_steps = self.rng.gen_range(1..=3);
        let mut indices: Vec<i64> = Vec::new();
        while indices.len() < n_steps {
            let hi = if force_negative { -base_weight - 1 } else { 2 };
            let r = self.rng.gen_range(-2..=hi);
            if !indices.contains(&r) {
                indices.push(r);
            }
        }
        indices.sort_unstable();
        let mut pieces = Vec::new();
        let mut total = 0usize;
        for index in indices {
            let w = base_weight + index;
            let dim = if w.rem_euclid(2) == 1 { 2 } else { self.rng.gen_range(1..=2) };
            if total + dim > 6 {
                continue;
            }
            total += dim;
            pieces.push(Piece { index, dim });
        }
        if pieces.is_empty() {
            pieces.push(Piece { index: 0, dim: if base_weight.rem_euclid(2) == 1 { 2 } else { 1 } });
        }
        pieces
    }

    /// Random valid MHS object: dim ≤ 6, at most 3 weight steps, optionally
    /// with a non-split Hodge filtration and a random coordinate change.
    pub fn mhs_object(&mut self) -> MHSObject {
        let base_weight = self.rng.gen_range(-1..=1);
        let pieces = self.pieces(base_weight, false);
        let mut obj = split_object(base_weight, &pieces);
        if self.rng.gen_bool(0.5) {
            let twist = self.filtration_twist(&pieces);
            obj = twist_hodge(&obj, &twist).expect("twist preserves validity");
        }
        if self.rng.gen_bool(0.5) {
            let b = self.invertible(obj.dim);
            obj = transport_mhs(&obj, &b).expect("transport preserves validity");
        }
        obj
    }

    /// Random valid MHS object all of whose weights are negative (the
    /// precondition of the Ext¹ dimension formula).
    pub fn negative_weight_mhs(&mut self) -> MHSObject {
        let base_weight = self.rng.gen_range(-4..=-3);
        let pieces = self.pieces(base_weight, true);
        let mut obj = split_object(base_weight, &pieces);
        if self.rng.gen_bool(0.5) {
            let twist = self.filtration_twist(&pieces);
            obj = twist_hodge(&obj, &twist).expect("twist preserves validity");
        }
        if self.rng.gen_bool(0.5) {
            let b = self.invertible(obj.dim);
            obj = transport_mhs(&obj, &b).expect("transport preserves validity");
        }
        obj
    }

    /// Unipotent Gaussian matrix mixing each piece only into strictly lower
    /// weight layers; it preserves every W step and acts as the identity on
    /// each graded piece, so twisting F by it preserves validity.
    fn filtration_twist(&mut self, pieces: &[Piece]) -> Matrix<GaussRat> {
        let dim: usize = pieces.iter().map(|p| p.dim).sum();
        let mut layer = Vec::with_capacity(dim);
        for p in pieces {
            for _ in 0..p.dim {
                layer.push(p.index);
            }
        }
        let mut u = Matrix::identity(dim);
        for i in 0..dim {
            for j in 0..dim {
                if layer[j] < layer[i] && self.rng.gen_bool(0.5) {
                    u.set(i, j, self.gauss());
                }
            }
        }
        u
    }

    /// Random valid morphism: both sides are built over a shared weight
    /// skeleton with per-weight block maps that respect the pure Hodge
    /// structure on each piece, then each side is transported independently.
    pub fn mhs_morphism(&mut self) -> MHSMorphism {
        let base_weight = self.rng.gen_range(-1..=1);
        loop {
            let n_steps = self.rng.gen_range(1..=3);
            let mut indices: Vec<i64> = Vec::new();
            while indices.len() < n_steps {
                let r = self.rng.gen_range(-2..=2);
                if !indices.contains(&r) {
                    indices.push(r);
                }
            }
            indices.sort_unstable();
            let mut src_pieces = Vec::new();
            let mut tgt_pieces = Vec::new();
            let mut blocks: Vec<(usize, usize, Matrix<Rat>)> = Vec::new();
            let mut src_total = 0usize;
            let mut tgt_total = 0usize;
            for &index in &indices {
                let w = base_weight + index;
                let odd = w.rem_euclid(2) == 1;
                let (ds, dt) = if odd {
                    (2 * self.rng.gen_range(0..=1) as usize, 2 * self.rng.gen_range(0..=1) as usize)
                } else {
                    (self.rng.gen_range(0..=2), self.rng.gen_range(0..=2))
                };
                let ds = if src_total + ds > 6 { 0 } else { ds };
                let dt = if tgt_total + dt > 6 { 0 } else { dt };
                let block = if ds == 0 || dt == 0 {
                    Matrix::zero(ds, dt)
                } else if odd {
                    // Maps of the 2-dim conjugate-pair piece commuting with
                    // the Hodge line (1, i): [[a, b], [−b, a]].
                    let a = self.rat();
                    let b = self.rat();
                    Matrix::from_rows(vec![
                        vec![a.clone(), b.clone()],
                        vec![-b, a],
                    ])
                    .expect("2×2")
                } else {
                    let mut m = Matrix::zero(ds, dt);
                    for i in 0..ds {
                        for j in 0..dt {
                            m.set(i, j, self.rat());
                        }
                    }
                    m
                };
                if ds > 0 {
                    src_pieces.push(Piece { index, dim: ds });
                }
                if dt > 0 {
                    tgt_pieces.push(Piece { index, dim: dt });
                }
                blocks.push((ds, dt, block));
                src_total += ds;
                tgt_total += dt;
            }
            if src_pieces.is_empty() || tgt_pieces.is_empty() {
                continue;
            }
            let src0 = split_object(base_weight, &src_pieces);
            let tgt0 = split_object(base_weight, &tgt_pieces);
            let mut m0 = Matrix::zero(src0.dim, tgt0.dim);
            let mut row_off = 0usize;
            let mut col_off = 0usize;
            for (ds, dt, block) in blocks {
                for i in 0..ds {
                    for j in 0..dt {
                        m0.set(row_off + i, col_off + j, block.get(i, j).clone());
                    }
                }
                row_off += ds;
                col_off += dt;
            }
            let b_src = self.invertible(src0.dim);
            let b_tgt = self.invertible(tgt0.dim);
            let src = transport_mhs(&src0, &b_src).expect("transport preserves validity");
            let tgt = transport_mhs(&tgt0, &b_tgt).expect("transport preserves validity");
            let b_src_inv = b_src.inverse().expect("invertible by construction");
            let matrix = b_src_inv.mul(&m0).expect("shapes").mul(&b_tgt).expect("shapes");
            return MHSMorphism::new(src, tgt, matrix).expect("dims match");
        }
    }
}

/// Assembles the split MHS with the given pure pieces in standard
/// coordinates: W steps are coordinate subspaces, F is the direct sum of the
/// piece filtrations (Tate-like for even weights, the conjugate pair
/// span{(1, i)} for odd weights).
fn split_object(base_weight: i64, pieces: &[Piece]) -> MHSObject {
    let dim: usize = pieces.iter().map(|p| p.dim).sum();
    let mut w_steps: BTreeMap<i64, Subspace<Rat>> = BTreeMap::new();
    let mut offset = 0usize;
    for p in pieces {
        offset += p.dim;
        let rows: Vec<Vec<Rat>> = (0..offset)
            .map(|i| {
                let mut v = vec![Rat::zero(); dim];
                v[i] = Rat::one();
                v
            })
            .collect();
        w_steps.insert(p.index, Subspace::from_rows(dim, rows));
    }

    // Per coordinate block, record the F-levels it occupies.
    // Even weight 2s: full block at every p ≤ s. Odd weight 2s+1: full block
    // at p ≤ s, the line (1, i) at p = s+1.
    let mut bottom = i64::MAX;
    let mut top = i64::MIN;
    let mut spans: Vec<(usize, usize, i64, bool)> = Vec::new(); // (start, dim, s, odd)
    let mut start = 0usize;
    for p in pieces {
        let w = base_weight + p.index;
        let odd = w.rem_euclid(2) == 1;
        let s = if odd { (w - 1) / 2 } else { w / 2 };
        bottom = bottom.min(s);
        top = top.max(if odd { s + 1 } else { s });
        spans.push((start, p.dim, s, odd));
        start += p.dim;
    }
    let mut f_steps: BTreeMap<i64, Subspace<GaussRat>> = BTreeMap::new();
    for p in bottom..=top {
        let mut rows: Vec<Vec<GaussRat>> = Vec::new();
        for &(st, d, s, odd) in &spans {
            if p <= s {
                for i in 0..d {
                    let mut v = vec![GaussRat::zero(); dim];
                    v[st + i] = GaussRat::one();
                    rows.push(v);
                }
            } else if odd && p == s + 1 {
                let mut v = vec![GaussRat::zero(); dim];
                v[st] = GaussRat::one();
                v[st + 1] = GaussRat::new(Rat::zero(), Rat::one());
                rows.push(v);
            }
        }
        f_steps.insert(p, Subspace::from_rows(dim, rows));
    }

    MHSObject::new(
        dim,
        base_weight,
        WeightFiltration::new(dim, w_steps).expect("increasing coordinate flags"),
        HodgeFiltration::new(dim, f_steps).expect("decreasing piece filtration"),
    )
    .expect("split object is a valid MHS")
}

/// Transports an MHS along an invertible rational matrix (the isomorphic
/// copy in new coordinates v ↦ v·b).
pub fn transport_mhs(obj: &MHSObject, b: &Matrix<Rat>) -> Result<MHSObject> {
    if b.rows() != obj.dim || b.cols() != obj.dim {
        return Err(Error::input("transport matrix shape does not match object"));
    }
    if b.inverse().is_none() {
        return Err(Error::input("transport matrix is not invertible"));
    }
    let b_g = b.to_gauss();
    let mut w_steps = BTreeMap::new();
    for r in obj.w.indices() {
        w_steps.insert(r, obj.w.at(r).apply(b)?);
    }
    let mut f_steps = BTreeMap::new();
    for p in obj.f.indices() {
        f_steps.insert(p, obj.f.at(p).apply(&b_g)?);
    }
    MHSObject::new(
        obj.dim,
        obj.base_weight,
        WeightFiltration::new(obj.dim, w_steps)?,
        HodgeFiltration::new(obj.dim, f_steps)?,
    )
}

/// Twists only the Hodge filtration by a W-preserving unipotent; the result
/// is an authentic (generally non-split) MHS with the same weight data.
fn twist_hodge(obj: &MHSObject, u: &Matrix<GaussRat>) -> Result<MHSObject> {
    let mut f_steps = BTreeMap::new();
    for p in obj.f.indices() {
        f_steps.insert(p, obj.f.at(p).apply(u)?);
    }
    MHSObject::new(
        obj.dim,
        obj.base_weight,
        obj.w.clone(),
        HodgeFiltration::new(obj.dim, f_steps)?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext::ext1_dimension;
    use crate::hodge::{check_mhs, cokernel_mhs, is_strict, kernel_mhs};

    #[test]
    fn sampled_objects_are_valid_and_bounded() {
        let mut s = Sampler::new(7);
        for i in 0..60 {
            let obj = s.mhs_object();
            assert!(obj.dim <= 6);
            assert!(obj.w.indices().len() <= 3);
            let rep = check_mhs(&obj);
            assert!(rep.passed(), "sample {i}: {}", rep.first_failure_text());
        }
    }

    #[test]
    fn sampled_morphisms_are_valid_with_good_kernels() {
        let mut s = Sampler::new(11);
        for i in 0..40 {
            let m = s.mhs_morphism();
            let rep = m.validate();
            assert!(rep.passed(), "sample {i}: {}", rep.first_failure_text());
            assert!(is_strict(&m), "sample {i} not strict");
            let (ker, _) = kernel_mhs(&m).unwrap();
            let (cok, _) = cokernel_mhs(&m).unwrap();
            assert!(check_mhs(&ker).passed(), "sample {i} kernel invalid");
            assert!(check_mhs(&cok).passed(), "sample {i} cokernel invalid");
        }
    }

    #[test]
    fn sampler_is_deterministic() {
        let mut a = Sampler::new(42);
        let mut b = Sampler::new(42);
        for _ in 0..10 {
            let ma = a.mhs_morphism();
            let mb = b.mhs_morphism();
            assert_eq!(ma.matrix, mb.matrix);
            assert_eq!(ma.source, mb.source);
            assert_eq!(ma.target, mb.target);
        }
    }

    #[test]
    fn negative_weight_samples_feed_ext1() {
        let mut s = Sampler::new(5);
        for _ in 0..20 {
            let obj = s.negative_weight_mhs();
            for r in obj.w.indices() {
                assert!(obj.base_weight + r < 0);
            }
            ext1_dimension(&obj).expect("precondition holds by construction");
        }
    }

    #[test]
    fn ext1_dimension_is_a_basis_invariant() {
        let mut s = Sampler::new(17);
        let obj = s.negative_weight_mhs();
        let (d0, _) = ext1_dimension(&obj).unwrap();
        for _ in 0..5 {
            let b = s.invertible(obj.dim);
            let moved = transport_mhs(&obj, &b).unwrap();
            let (d, _) = ext1_dimension(&moved).unwrap();
            assert_eq!(d, d0);
        }
    }

    #[test]
    fn subspace_inside_is_contained() {
        let mut s = Sampler::new(3);
        for _ in 0..20 {
            let outer = s.subspace(5);
            let inner = s.subspace_inside(&outer);
            assert!(outer.contains(&inner));
        }
    }
}
