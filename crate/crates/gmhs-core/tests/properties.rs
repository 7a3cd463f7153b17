//! Property tests for the exact linear algebra layer: canonical forms,
//! membership solvers, Galois conjugation, and the subspace lattice. These
//! are the invariants everything upstream (filtrations, strictness, the
//! spectral sequence, the Ext machinery) silently relies on.

use std::collections::BTreeMap;

use gmhs_core::hodge::WeightFiltration;
use gmhs_core::linalg::{conj_matrix, quotient_basis, quotient_coords, rat, rref};
use gmhs_core::{GaussRat, Matrix, Rat, Subspace};
use num_traits::{One, Zero};
use proptest::collection::vec as pvec;
use proptest::prelude::*;

// ---------------------------------------------------------------------------
// Strategies
// ---------------------------------------------------------------------------

fn small_rat() -> impl Strategy<Value = Rat> {
    (-6..=6i64, 1..=4i64).prop_map(|(n, d)| rat(n, d))
}

fn small_gauss() -> impl Strategy<Value = GaussRat> {
    (small_rat(), small_rat()).prop_map(|(re, im)| GaussRat::new(re, im))
}

fn rat_matrix() -> impl Strategy<Value = Matrix<Rat>> {
    (1..=4usize, 1..=4usize).prop_flat_map(|(r, c)| {
        pvec(small_rat(), r * c).prop_map(move |e| Matrix::new(r, c, e).unwrap())
    })
}

fn square_rat_matrix() -> impl Strategy<Value = Matrix<Rat>> {
    (1..=4usize).prop_flat_map(|n| {
        pvec(small_rat(), n * n).prop_map(move |e| Matrix::new(n, n, e).unwrap())
    })
}

fn gauss_matrix() -> impl Strategy<Value = Matrix<GaussRat>> {
    (1..=3usize, 1..=3usize).prop_flat_map(|(r, c)| {
        pvec(small_gauss(), r * c).prop_map(move |e| Matrix::new(r, c, e).unwrap())
    })
}

/// Two Gauss matrices with composable shapes (a.cols == b.rows).
fn composable_gauss_pair() -> impl Strategy<Value = (Matrix<GaussRat>, Matrix<GaussRat>)> {
    (1..=3usize, 1..=3usize, 1..=3usize).prop_flat_map(|(r, k, c)| {
        (pvec(small_gauss(), r * k), pvec(small_gauss(), k * c)).prop_map(move |(ea, eb)| {
            (Matrix::new(r, k, ea).unwrap(), Matrix::new(k, c, eb).unwrap())
        })
    })
}

fn subspace_in(ambient: usize) -> impl Strategy<Value = Subspace<Rat>> {
    pvec(pvec(small_rat(), ambient), 0..=3)
        .prop_map(move |rows| Subspace::from_rows(ambient, rows))
}

/// Two subspaces of a shared ambient space.
fn subspace_pair() -> impl Strategy<Value = (Subspace<Rat>, Subspace<Rat>)> {
    (1..=4usize).prop_flat_map(|ambient| (subspace_in(ambient), subspace_in(ambient)))
}

fn gauss_subspace() -> impl Strategy<Value = Subspace<GaussRat>> {
    (1..=4usize).prop_flat_map(|ambient| {
        pvec(pvec(small_gauss(), ambient), 0..=3)
            .prop_map(move |rows| Subspace::from_rows(ambient, rows))
    })
}

/// A matrix together with a row vector on each side (lengths rows / cols).
fn matrix_with_probes() -> impl Strategy<Value = (Matrix<Rat>, Vec<Rat>, Vec<Rat>)> {
    (1..=4usize, 1..=4usize).prop_flat_map(|(r, c)| {
        (pvec(small_rat(), r * c), pvec(small_rat(), r), pvec(small_rat(), c))
            .prop_map(move |(e, x, probe)| (Matrix::new(r, c, e).unwrap(), x, probe))
    })
}

// ---------------------------------------------------------------------------
// Canonical forms
// ---------------------------------------------------------------------------

proptest! {
    #[test]
    fn rref_is_idempotent(m in rat_matrix()) {
        let once = rref(&m);
        prop_assert_eq!(rref(&once), once.clone());
    }

    #[test]
    fn rref_preserves_the_row_space(m in rat_matrix()) {
        let reduced = rref(&m);
        prop_assert_eq!(reduced.row_space(), m.row_space());
        prop_assert_eq!(reduced.rank(), m.rank());
    }

    #[test]
    fn rank_is_bounded_and_transpose_invariant(m in rat_matrix()) {
        let r = m.rank();
        prop_assert!(r <= m.rows().min(m.cols()));
        prop_assert_eq!(m.transpose().rank(), r);
    }

    #[test]
    fn subspace_basis_is_canonical(pair in subspace_pair(), k in small_rat()) {
        // Reordering the generators, rescaling one, and appending a vector
        // already in the span leaves the canonical basis unchanged.
        let (s, t) = pair;
        let mut rows = s.basis_rows();
        rows.reverse();
        if let Some(first) = rows.first().cloned() {
            let scaled: Vec<Rat> =
                first.iter().map(|e| e.clone() * (k.clone() + Rat::one())).collect();
            rows.push(scaled);
        }
        // A generator of t that happens to lie in s must also be absorbed.
        for cand in t.basis_rows() {
            if s.contains_vec(&cand) {
                rows.push(cand);
            }
        }
        prop_assert_eq!(Subspace::from_rows(s.ambient_dim(), rows), s);
    }
}

// ---------------------------------------------------------------------------
// Kernels and solvers
// ---------------------------------------------------------------------------

proptest! {
    #[test]
    fn left_kernel_annihilates_and_has_complementary_dim(m in rat_matrix()) {
        let k = m.left_kernel();
        prop_assert_eq!(k.dim() + m.rank(), m.rows());
        let zero = vec![Rat::zero(); m.cols()];
        for row in k.basis_rows() {
            prop_assert_eq!(m.apply_row(&row).unwrap(), zero.clone());
        }
    }

    #[test]
    fn kernel_annihilates_through_the_transpose(m in rat_matrix()) {
        let k = m.kernel();
        prop_assert_eq!(k.dim() + m.rank(), m.cols());
        let t = m.transpose();
        let zero = vec![Rat::zero(); m.rows()];
        for row in k.basis_rows() {
            prop_assert_eq!(t.apply_row(&row).unwrap(), zero.clone());
        }
    }

    #[test]
    fn solve_left_decides_row_space_membership(
        (m, x, probe) in matrix_with_probes()
    ) {
        // A vector manufactured as x·M is always solvable, and the solution
        // reproduces it exactly.
        let v = m.apply_row(&x).unwrap();
        let y = m.solve_left(&v).expect("x·M must be solvable");
        prop_assert_eq!(m.apply_row(&y).unwrap(), v);

        // An arbitrary probe is solvable exactly when it lies in the row
        // space.
        prop_assert_eq!(m.solve_left(&probe).is_some(), m.row_space().contains_vec(&probe));
    }

    #[test]
    fn inverse_exists_exactly_at_full_rank(m in square_rat_matrix()) {
        match m.inverse() {
            Some(inv) => {
                prop_assert_eq!(m.rank(), m.rows());
                prop_assert!(m.mul(&inv).unwrap().is_identity());
                prop_assert!(inv.mul(&m).unwrap().is_identity());
            }
            None => prop_assert!(m.rank() < m.rows()),
        }
    }
}

// ---------------------------------------------------------------------------
// Galois conjugation over ℚ(i)
// ---------------------------------------------------------------------------

proptest! {
    #[test]
    fn conjugation_is_an_involution(m in gauss_matrix()) {
        prop_assert_eq!(conj_matrix(&conj_matrix(&m)), m);
    }

    #[test]
    fn conjugation_is_multiplicative((a, b) in composable_gauss_pair()) {
        let lhs = conj_matrix(&a.mul(&b).unwrap());
        let rhs = conj_matrix(&a).mul(&conj_matrix(&b)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn subspace_conjugation_is_an_involution(s in gauss_subspace()) {
        prop_assert_eq!(s.conj().conj(), s);
    }

    #[test]
    fn rational_subspaces_are_conjugation_fixed(pair in subspace_pair()) {
        let (s, _) = pair;
        let g = s.to_gauss();
        prop_assert_eq!(g.conj(), g);
    }
}

// ---------------------------------------------------------------------------
// The subspace lattice
// ---------------------------------------------------------------------------

proptest! {
    #[test]
    fn sum_and_intersection_satisfy_the_dimension_formula(
        (a, b) in subspace_pair()
    ) {
        let sum = a.sum(&b).unwrap();
        let inter = a.intersect(&b).unwrap();
        prop_assert_eq!(sum.dim() + inter.dim(), a.dim() + b.dim());
        prop_assert!(sum.contains(&a) && sum.contains(&b));
        prop_assert!(a.contains(&inter) && b.contains(&inter));
        // Commutativity comes for free from canonicality.
        prop_assert_eq!(b.sum(&a).unwrap(), sum);
        prop_assert_eq!(b.intersect(&a).unwrap(), inter);
    }

    #[test]
    fn quotient_basis_gives_coordinates((a, b) in subspace_pair()) {
        let outer = a.sum(&b).unwrap();
        let inner = a;
        let reps = quotient_basis(&outer, &inner).unwrap();
        prop_assert_eq!(reps.len(), outer.dim() - inner.dim());
        for (i, rep) in reps.iter().enumerate() {
            prop_assert!(outer.contains_vec(rep));
            prop_assert!(!inner.contains_vec(rep));
            let coords = quotient_coords(&reps, &inner, rep).expect("rep has coordinates");
            let expected: Vec<Rat> = (0..reps.len())
                .map(|j| if j == i { Rat::one() } else { Rat::zero() })
                .collect();
            prop_assert_eq!(coords, expected);
        }
        // Every vector of the outer space has quotient coordinates.
        for v in outer.basis_rows() {
            prop_assert!(quotient_coords(&reps, &inner, &v).is_some());
        }
    }

    #[test]
    fn weight_filtration_lookup_is_monotone((a, b) in subspace_pair()) {
        // Steps −1 ⊆ 0 ⊆ 1 built as cumulative sums; the lookup fills every
        // other index from below and caps at zero / full space.
        let ambient = a.ambient_dim();
        let low = a.clone();
        let midd = a.sum(&b).unwrap();
        let steps: BTreeMap<i64, Subspace<Rat>> = [
            (-1, low.clone()),
            (0, midd.clone()),
            (1, Subspace::full(ambient)),
        ]
        .into_iter()
        .collect();
        let w = WeightFiltration::new(ambient, steps).unwrap();
        prop_assert_eq!(w.at(-2), Subspace::zero(ambient));
        prop_assert_eq!(w.at(-1), low);
        prop_assert_eq!(w.at(0), midd);
        prop_assert_eq!(w.at(1), Subspace::full(ambient));
        prop_assert_eq!(w.at(100), Subspace::full(ambient));
        for r in -3..=2i64 {
            prop_assert!(w.at(r + 1).contains(&w.at(r)));
        }
    }
}
