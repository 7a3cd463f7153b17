//! Pure and mixed Hodge structures as validated data.
//!
//! A mixed Hodge structure here is a finite-dimensional ℚ-space carrying an
//! increasing weight filtration `W` and a decreasing Hodge filtration `F` on
//! the ℚ(i)-extension, such that `F` induces a pure structure of weight
//! `base_weight + r` on every graded piece `Gr^W_r`. The base-weight offset is
//! stored explicitly rather than normalized away.
//!
//! Filtrations are sparse step maps with nearest-step extension:
//! `W_r` is the stored step at the largest index ≤ r (zero below the range),
//! `F^p` is the stored step at the smallest index ≥ p (zero above the range),
//! so `W` is exhaustive at its top step and `F` is full at its bottom step.
//!
//! Morphisms are ℚ-matrices acting on row vectors (`v ↦ v·M`, so a morphism
//! matrix is `dim(source) × dim(target)`), compatible with both filtrations.
//! Kernels use intersection-induced filtrations, cokernels image-induced
//! ones; those are the unique choices under which both stay mixed Hodge
//! structures, by strictness.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::error::{Error, Result, ValidationReport};
use crate::linalg::{quotient_basis, quotient_coords, GaussRat, Matrix, Rat, Subspace};

// ---------------------------------------------------------------------------
// Filtrations
// ---------------------------------------------------------------------------

/// Increasing filtration `W_·` on ℚ^ambient_dim, stored sparsely.
#[derive(Clone, PartialEq, Debug)]
pub struct WeightFiltration {
    ambient_dim: usize,
    steps: BTreeMap<i64, Subspace<Rat>>,
}

impl WeightFiltration {
    /// Builds the filtration, pruning steps that equal their nearest-step
    /// extension value (leading zero steps, repeats of the previous step).
    /// Stored steps are then exactly the jump points, so representation
    /// equality coincides with equality of the filtrations as functions.
    pub fn new(ambient_dim: usize, steps: BTreeMap<i64, Subspace<Rat>>) -> Result<Self> {
        for (r, s) in &steps {
            if s.ambient_dim() != ambient_dim {
                return Err(Error::input(format!(
                    "weight step W_{} has ambient dimension {}, expected {}",
                    r,
                    s.ambient_dim(),
                    ambient_dim
                )));
            }
        }
        let mut canon = BTreeMap::new();
        let mut prev: Option<Subspace<Rat>> = None;
        for (r, s) in steps {
            let redundant = match &prev {
                None => s.is_zero(),
                Some(p) => s == *p,
            };
            if !redundant {
                canon.insert(r, s.clone());
                prev = Some(s);
            }
        }
        Ok(WeightFiltration { ambient_dim, steps: canon })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// `W_r`: the stored step at the largest index ≤ r, zero below the range.
    pub fn at(&self, r: i64) -> Subspace<Rat> {
        self.steps
            .range(..=r)
            .next_back()
            .map(|(_, s)| s.clone())
            .unwrap_or_else(|| Subspace::zero(self.ambient_dim))
    }

    pub fn indices(&self) -> Vec<i64> {
        self.steps.keys().copied().collect()
    }

    pub fn steps(&self) -> &BTreeMap<i64, Subspace<Rat>> {
        &self.steps
    }

    /// Increasing, and exhaustive (top stored step is the full space).
    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::new("weight filtration");
        let mut prev: Option<(i64, &Subspace<Rat>)> = None;
        for (r, s) in &self.steps {
            if let Some((pr, ps)) = prev {
                rep.record(
                    format!("increasing at W_{pr} ⊆ W_{r}"),
                    s.contains(ps),
                    format!("dim W_{pr} = {}, dim W_{r} = {}", ps.dim(), s.dim()),
                );
            }
            prev = Some((*r, s));
        }
        match prev {
            Some((r, s)) => rep.record(
                "exhaustive",
                s.is_full(),
                format!("top step W_{} has dim {} of {}", r, s.dim(), self.ambient_dim),
            ),
            None => rep.record(
                "exhaustive",
                self.ambient_dim == 0,
                "no steps stored; only valid for the zero space",
            ),
        }
        rep
    }
}

/// Decreasing filtration `F^·` on ℚ(i)^ambient_dim, stored sparsely.
#[derive(Clone, PartialEq, Debug)]
pub struct HodgeFiltration {
    ambient_dim: usize,
    steps: BTreeMap<i64, Subspace<GaussRat>>,
}

impl HodgeFiltration {
    /// Builds the filtration, pruning steps that equal their nearest-step
    /// extension value (trailing zero steps, repeats of the following step),
    /// so representation equality is equality of the filtrations as functions.
    pub fn new(ambient_dim: usize, steps: BTreeMap<i64, Subspace<GaussRat>>) -> Result<Self> {
        for (p, s) in &steps {
            if s.ambient_dim() != ambient_dim {
                return Err(Error::input(format!(
                    "Hodge step F^{} has ambient dimension {}, expected {}",
                    p,
                    s.ambient_dim(),
                    ambient_dim
                )));
            }
        }
        let mut canon = BTreeMap::new();
        let mut next: Option<Subspace<GaussRat>> = None;
        for (p, s) in steps.into_iter().rev() {
            let redundant = match &next {
                None => s.is_zero(),
                Some(n) => s == *n,
            };
            if !redundant {
                canon.insert(p, s.clone());
                next = Some(s);
            }
        }
        Ok(HodgeFiltration { ambient_dim, steps: canon })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// `F^p`: the stored step at the smallest index ≥ p, zero above the range.
    pub fn at(&self, p: i64) -> Subspace<GaussRat> {
        self.steps
            .range(p..)
            .next()
            .map(|(_, s)| s.clone())
            .unwrap_or_else(|| Subspace::zero(self.ambient_dim))
    }

    pub fn indices(&self) -> Vec<i64> {
        self.steps.keys().copied().collect()
    }

    pub fn steps(&self) -> &BTreeMap<i64, Subspace<GaussRat>> {
        &self.steps
    }

    /// Decreasing, and full at the bottom stored step.
    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::new("Hodge filtration");
        let mut prev: Option<(i64, &Subspace<GaussRat>)> = None;
        for (p, s) in &self.steps {
            if let Some((pp, ps)) = prev {
                rep.record(
                    format!("decreasing at F^{p} ⊆ F^{pp}"),
                    ps.contains(s),
                    format!("dim F^{pp} = {}, dim F^{p} = {}", ps.dim(), s.dim()),
                );
            }
            prev = Some((*p, s));
        }
        match self.steps.iter().next() {
            Some((p, s)) => rep.record(
                "full at bottom",
                s.is_full(),
                format!("bottom step F^{} has dim {} of {}", p, s.dim(), self.ambient_dim),
            ),
            None => rep.record(
                "full at bottom",
                self.ambient_dim == 0,
                "no steps stored; only valid for the zero space",
            ),
        }
        rep
    }
}

/// Sorted union of two stored index sets — the only places where piecewise
/// constant filtration data can change.
fn merged_indices(a: &[i64], b: &[i64]) -> Vec<i64> {
    let set: BTreeSet<i64> = a.iter().chain(b.iter()).copied().collect();
    set.into_iter().collect()
}

// ---------------------------------------------------------------------------
// Pure Hodge structures
// ---------------------------------------------------------------------------

/// Pure Hodge structure of a single weight: `F^p ⊕ conj(F^{k−p+1})` must be
/// the whole space for every p.
#[derive(Clone, PartialEq, Debug)]
pub struct PureHS {
    pub dim: usize,
    pub weight: i64,
    pub f: HodgeFiltration,
}

impl PureHS {
    pub fn new(dim: usize, weight: i64, f: HodgeFiltration) -> Result<Self> {
        if f.ambient_dim() != dim {
            return Err(Error::input("PureHS: filtration ambient dimension mismatch"));
        }
        Ok(PureHS { dim, weight, f })
    }
}

/// Checks `F^p ∩ conj(F^{k−p+1}) = 0` and `F^p + conj(F^{k−p+1}) = full` for
/// every p in the window where either side can vary; outside it the condition
/// is `full ⊕ 0` and holds automatically once the filtration itself validates.
pub fn check_pure(h: &PureHS) -> ValidationReport {
    let mut rep = ValidationReport::new(format!("pure weight {}", h.weight));
    rep.merge(h.f.validate());
    let idx = h.f.indices();
    let (lo_stored, hi_stored) = match (idx.first(), idx.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => {
            rep.record("purity", h.dim == 0, "no Hodge steps stored");
            return rep;
        }
    };
    let k = h.weight;
    // p ranges where F^p or F^{k−p+1} can differ from its extreme value.
    let lo = lo_stored.min(k - hi_stored);
    let hi = (hi_stored + 1).max(k + 1 - lo_stored);
    for p in lo..=hi {
        let a = h.f.at(p);
        let b = h.f.at(k - p + 1).conj();
        let (inter, total) = match (a.intersect(&b), a.sum(&b)) {
            (Ok(i), Ok(s)) => (i, s),
            _ => {
                rep.record(format!("purity at p={p}"), false, "ambient dimension mismatch");
                continue;
            }
        };
        let ok = inter.is_zero() && total.is_full();
        rep.record(
            format!("purity at p={p}"),
            ok,
            format!(
                "dim F^{p} = {}, dim conj F^{} = {}, dim ∩ = {}, dim + = {} (ambient {})",
                a.dim(),
                k - p + 1,
                b.dim(),
                inter.dim(),
                total.dim(),
                h.dim
            ),
        );
    }
    rep
}

/// `H^{p,q} = F^p ∩ conj(F^{k−p})` with q = k − p.
pub fn hodge_piece(h: &PureHS, p: i64) -> Result<Subspace<GaussRat>> {
    let rep = check_pure(h);
    if !rep.passed() {
        return Err(Error::precondition(format!(
            "hodge_piece requires a valid pure structure: {}",
            rep.first_failure_text()
        )));
    }
    h.f.at(p).intersect(&h.f.at(h.weight - p).conj())
}

// ---------------------------------------------------------------------------
// Mixed Hodge structures
// ---------------------------------------------------------------------------

/// Mixed Hodge structure on ℚ^dim, with explicit base-weight offset: the
/// graded piece `Gr^W_r` must be pure of weight `base_weight + r`.
#[derive(Clone, PartialEq, Debug)]
pub struct MHSObject {
    pub dim: usize,
    pub base_weight: i64,
    pub w: WeightFiltration,
    pub f: HodgeFiltration,
}

impl MHSObject {
    pub fn new(
        dim: usize,
        base_weight: i64,
        w: WeightFiltration,
        f: HodgeFiltration,
    ) -> Result<Self> {
        if w.ambient_dim() != dim {
            return Err(Error::input("MHSObject: weight filtration dimension mismatch"));
        }
        if f.ambient_dim() != dim {
            return Err(Error::input("MHSObject: Hodge filtration dimension mismatch"));
        }
        Ok(MHSObject { dim, base_weight, w, f })
    }

    /// The 1-dimensional trivial structure ℚ(0): weight 0, F⁰ = full, F¹ = 0.
    pub fn trivial_one_dim() -> Self {
        let mut wsteps = BTreeMap::new();
        wsteps.insert(0, Subspace::full(1));
        let mut fsteps = BTreeMap::new();
        fsteps.insert(0, Subspace::full(1));
        MHSObject {
            dim: 1,
            base_weight: 0,
            w: WeightFiltration::new(1, wsteps).expect("dims agree"),
            f: HodgeFiltration::new(1, fsteps).expect("dims agree"),
        }
    }
}

/// The graded piece `W_r/W_{r−1}` with the filtration induced by F (image of
/// `F^p ∩ (W_r ⊗ ℚ(i))` in the quotient), as a pure structure of weight
/// `base_weight + r`. Coordinates on the quotient come from the canonical
/// coset representatives of `quotient_basis`.
pub fn gr_weight(m: &MHSObject, r: i64) -> Result<PureHS> {
    let wr = m.w.at(r);
    let wr1 = m.w.at(r - 1);
    let reps = quotient_basis(&wr, &wr1)?;
    let g = reps.len();
    let reps_gauss: Vec<Vec<GaussRat>> = reps
        .iter()
        .map(|row| row.iter().map(|x| GaussRat::new(x.clone(), Rat::zero())).collect())
        .collect();
    let wr_gauss = wr.to_gauss();
    let wr1_gauss = wr1.to_gauss();
    let mut steps = BTreeMap::new();
    let idx = m.f.indices();
    if let (Some(&lo), Some(&hi)) = (idx.first(), idx.last()) {
        for p in lo..=hi + 1 {
            let x = m.f.at(p).intersect(&wr_gauss)?;
            let mut rows = Vec::new();
            for v in x.basis_rows() {
                let coords = quotient_coords(&reps_gauss, &wr1_gauss, &v).ok_or_else(|| {
                    Error::validation("graded-piece projection failed: W not nested")
                })?;
                rows.push(coords);
            }
            steps.insert(p, Subspace::from_rows(g, rows));
        }
    }
    PureHS::new(g, m.base_weight + r, HodgeFiltration::new(g, steps)?)
}

/// Validates both filtrations and purity of every graded piece. `Gr^W_r` can
/// only be nonzero at stored weight indices, so those are the pieces checked.
pub fn check_mhs(m: &MHSObject) -> ValidationReport {
    let mut rep = ValidationReport::new("mhs");
    rep.merge(m.w.validate());
    rep.merge(m.f.validate());
    if !rep.passed() {
        return rep;
    }
    for r in m.w.indices() {
        match gr_weight(m, r) {
            Ok(piece) => {
                let mut sub = ValidationReport::new(format!("Gr_{r}"));
                sub.merge(check_pure(&piece));
                rep.merge(sub);
            }
            Err(e) => rep.record(format!("Gr_{r}"), false, e.to_string()),
        }
    }
    rep
}

// ---------------------------------------------------------------------------
// Morphisms
// ---------------------------------------------------------------------------

/// Filtration-compatible ℚ-linear map. The matrix acts on row vectors, so it
/// has shape `source.dim × target.dim`.
#[derive(Clone, PartialEq, Debug)]
pub struct MHSMorphism {
    pub source: MHSObject,
    pub target: MHSObject,
    pub matrix: Matrix<Rat>,
}

impl MHSMorphism {
    pub fn new(source: MHSObject, target: MHSObject, matrix: Matrix<Rat>) -> Result<Self> {
        if matrix.rows() != source.dim || matrix.cols() != target.dim {
            return Err(Error::input(format!(
                "morphism matrix is {}×{}, expected {}×{}",
                matrix.rows(),
                matrix.cols(),
                source.dim,
                target.dim
            )));
        }
        Ok(MHSMorphism { source, target, matrix })
    }

    pub fn identity(obj: &MHSObject) -> Self {
        MHSMorphism {
            source: obj.clone(),
            target: obj.clone(),
            matrix: Matrix::identity(obj.dim),
        }
    }

    pub fn zero(source: &MHSObject, target: &MHSObject) -> Self {
        MHSMorphism {
            source: source.clone(),
            target: target.clone(),
            matrix: Matrix::zero(source.dim, target.dim),
        }
    }

    /// Compatibility with both filtrations, checked at every index where
    /// either side's stored data changes.
    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::new("mhs morphism");
        let mg = self.matrix.to_gauss();
        for r in merged_indices(&self.source.w.indices(), &self.target.w.indices()) {
            let img = self
                .source
                .w
                .at(r)
                .apply(&self.matrix)
                .expect("morphism shape checked at construction");
            rep.record(
                format!("W-compatible at r={r}"),
                self.target.w.at(r).contains(&img),
                format!("f(W_{r}) has dim {}", img.dim()),
            );
        }
        for p in merged_indices(&self.source.f.indices(), &self.target.f.indices()) {
            let img = self
                .source
                .f
                .at(p)
                .apply(&mg)
                .expect("morphism shape checked at construction");
            rep.record(
                format!("F-compatible at p={p}"),
                self.target.f.at(p).contains(&img),
                format!("f(F^{p}) has dim {}", img.dim()),
            );
        }
        rep
    }

    pub fn is_valid(&self) -> bool {
        self.validate().passed()
    }

    /// Composition: self then g (matrix product in row convention).
    pub fn compose(&self, g: &MHSMorphism) -> Result<MHSMorphism> {
        if self.target.dim != g.source.dim {
            return Err(Error::input("composition: inner dimensions differ"));
        }
        MHSMorphism::new(self.source.clone(), g.target.clone(), self.matrix.mul(&g.matrix)?)
    }
}

/// Strictness: `image(f) ∩ W_r(target) = f(W_r(source))` for all r, and the
/// same for F on the ℚ(i)-extensions. For morphisms of equal base weight this
/// always holds (the property underlying abelianness of the category).
pub fn is_strict(f: &MHSMorphism) -> bool {
    let im = f.matrix.row_space();
    for r in merged_indices(&f.source.w.indices(), &f.target.w.indices()) {
        let lhs = match im.intersect(&f.target.w.at(r)) {
            Ok(x) => x,
            Err(_) => return false,
        };
        let rhs = f.source.w.at(r).apply(&f.matrix).expect("shape checked");
        if lhs != rhs {
            return false;
        }
    }
    let mg = f.matrix.to_gauss();
    let im_g = mg.row_space();
    for p in merged_indices(&f.source.f.indices(), &f.target.f.indices()) {
        let lhs = match im_g.intersect(&f.target.f.at(p)) {
            Ok(x) => x,
            Err(_) => return false,
        };
        let rhs = f.source.f.at(p).apply(&mg).expect("shape checked");
        if lhs != rhs {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Kernels, cokernels, image, coimage
// ---------------------------------------------------------------------------

/// Sub-object on a subspace of a parent object: intersection-induced
/// filtrations, coordinates taken in the canonical basis of the subspace.
/// Returns the object and the inclusion matrix (its canonical basis).
pub fn sub_mhs(parent: &MHSObject, sub: &Subspace<Rat>) -> Result<(MHSObject, Matrix<Rat>)> {
    if sub.ambient_dim() != parent.dim {
        return Err(Error::input("sub_mhs: ambient dimension mismatch"));
    }
    let k = sub.dim();
    let sub_gauss = sub.to_gauss();
    let mut wsteps = BTreeMap::new();
    for r in parent.w.indices() {
        let x = parent.w.at(r).intersect(sub)?;
        let rows: Option<Vec<Vec<Rat>>> = x.basis_rows().iter().map(|v| sub.coords(v)).collect();
        let rows = rows.ok_or_else(|| Error::validation("sub_mhs: intersection escaped subspace"))?;
        wsteps.insert(r, Subspace::from_rows(k, rows));
    }
    let mut fsteps = BTreeMap::new();
    for p in parent.f.indices() {
        let x = parent.f.at(p).intersect(&sub_gauss)?;
        let rows: Option<Vec<Vec<GaussRat>>> =
            x.basis_rows().iter().map(|v| sub_gauss.coords(v)).collect();
        let rows = rows.ok_or_else(|| Error::validation("sub_mhs: intersection escaped subspace"))?;
        fsteps.insert(p, Subspace::from_rows(k, rows));
    }
    let obj = MHSObject::new(
        k,
        parent.base_weight,
        WeightFiltration::new(k, wsteps)?,
        HodgeFiltration::new(k, fsteps)?,
    )?;
    Ok((obj, sub.basis().clone()))
}

/// Quotient object by a subspace of a parent object: image-induced
/// filtrations. Returns the object and the projection matrix
/// (`parent.dim × quotient.dim`), built from the canonical coset
/// representatives.
pub fn quot_mhs(parent: &MHSObject, sub: &Subspace<Rat>) -> Result<(MHSObject, Matrix<Rat>)> {
    if sub.ambient_dim() != parent.dim {
        return Err(Error::input("quot_mhs: ambient dimension mismatch"));
    }
    let full = Subspace::full(parent.dim);
    let reps = quotient_basis(&full, sub)?;
    let g = reps.len();
    let mut proj = Matrix::zero(parent.dim, g);
    for i in 0..parent.dim {
        let mut e = vec![Rat::zero(); parent.dim];
        e[i] = num_traits::One::one();
        let coords = quotient_coords(&reps, sub, &e)
            .ok_or_else(|| Error::validation("quot_mhs: representatives do not span"))?;
        for (j, cj) in coords.into_iter().enumerate() {
            proj.set(i, j, cj);
        }
    }
    let proj_gauss = proj.to_gauss();
    let mut wsteps = BTreeMap::new();
    for r in parent.w.indices() {
        wsteps.insert(r, parent.w.at(r).apply(&proj)?);
    }
    let mut fsteps = BTreeMap::new();
    for p in parent.f.indices() {
        fsteps.insert(p, parent.f.at(p).apply(&proj_gauss)?);
    }
    let obj = MHSObject::new(
        g,
        parent.base_weight,
        WeightFiltration::new(g, wsteps)?,
        HodgeFiltration::new(g, fsteps)?,
    )?;
    Ok((obj, proj))
}

fn require_parallel(f: &MHSMorphism, what: &str) -> Result<()> {
    if f.source.base_weight != f.target.base_weight {
        return Err(Error::precondition(format!(
            "{what} requires equal base weights (source {}, target {})",
            f.source.base_weight, f.target.base_weight
        )));
    }
    let rep = f.validate();
    if !rep.passed() {
        return Err(Error::precondition(format!(
            "{what} requires a valid morphism: {}",
            rep.first_failure_text()
        )));
    }
    Ok(())
}

/// Kernel with intersection-induced filtrations, plus the inclusion morphism.
pub fn kernel_mhs(f: &MHSMorphism) -> Result<(MHSObject, MHSMorphism)> {
    require_parallel(f, "kernel_mhs")?;
    let ker = f.matrix.left_kernel();
    let (obj, incl) = sub_mhs(&f.source, &ker)?;
    let m = MHSMorphism::new(obj.clone(), f.source.clone(), incl)?;
    Ok((obj, m))
}

/// Cokernel with image-induced filtrations, plus the projection morphism.
pub fn cokernel_mhs(f: &MHSMorphism) -> Result<(MHSObject, MHSMorphism)> {
    require_parallel(f, "cokernel_mhs")?;
    let im = f.matrix.row_space();
    let (obj, proj) = quot_mhs(&f.target, &im)?;
    let m = MHSMorphism::new(f.target.clone(), obj.clone(), proj)?;
    Ok((obj, m))
}

/// Image as a sub-object of the target, plus the inclusion morphism.
pub fn image_mhs(f: &MHSMorphism) -> Result<(MHSObject, MHSMorphism)> {
    require_parallel(f, "image_mhs")?;
    let im = f.matrix.row_space();
    let (obj, incl) = sub_mhs(&f.target, &im)?;
    let m = MHSMorphism::new(obj.clone(), f.target.clone(), incl)?;
    Ok((obj, m))
}

/// Coimage (source / kernel) as a quotient object, plus the projection.
pub fn coimage_mhs(f: &MHSMorphism) -> Result<(MHSObject, MHSMorphism)> {
    require_parallel(f, "coimage_mhs")?;
    let ker = f.matrix.left_kernel();
    let (obj, proj) = quot_mhs(&f.source, &ker)?;
    let m = MHSMorphism::new(f.source.clone(), obj.clone(), proj)?;
    Ok((obj, m))
}

/// The induced map coimage → image (a morphism of MHS objects); for strict
/// morphisms of equal base weight it is an isomorphism in both directions.
pub fn coimage_to_image(f: &MHSMorphism) -> Result<MHSMorphism> {
    let (coim, _) = coimage_mhs(f)?;
    let (im, incl) = image_mhs(f)?;
    let ker = f.matrix.left_kernel();
    let full = Subspace::full(f.source.dim);
    let reps = quotient_basis(&full, &ker)?;
    // Each representative maps through f; its image lies in im, with
    // coordinates read off in im's canonical basis (the inclusion's rows).
    let im_space = f.matrix.row_space();
    let mut rows = Vec::new();
    for rep in &reps {
        let v = f.matrix.apply_row(rep)?;
        let coords = im_space
            .coords(&v)
            .ok_or_else(|| Error::validation("coimage_to_image: image escaped row space"))?;
        rows.push(coords);
    }
    let matrix = if rows.is_empty() {
        Matrix::zero(0, incl.matrix.rows())
    } else {
        Matrix::from_rows(rows)?
    };
    MHSMorphism::new(coim, im, matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{gauss_i, rat_i};

    fn span_q(ambient: usize, rows: Vec<Vec<i64>>) -> Subspace<Rat> {
        Subspace::from_rows(
            ambient,
            rows.into_iter().map(|r| r.into_iter().map(rat_i).collect()).collect(),
        )
    }

    fn span_g(ambient: usize, rows: Vec<Vec<(i64, i64)>>) -> Subspace<GaussRat> {
        Subspace::from_rows(
            ambient,
            rows.into_iter()
                .map(|r| r.into_iter().map(|(a, b)| gauss_i(a, b)).collect())
                .collect(),
        )
    }

    fn weight_filt(dim: usize, steps: Vec<(i64, Subspace<Rat>)>) -> WeightFiltration {
        WeightFiltration::new(dim, steps.into_iter().collect()).unwrap()
    }

    fn hodge_filt(dim: usize, steps: Vec<(i64, Subspace<GaussRat>)>) -> HodgeFiltration {
        HodgeFiltration::new(dim, steps.into_iter().collect()).unwrap()
    }

    /// The standard 2-dimensional weight −1 structure with F⁰ = span{(1, i)}.
    fn weight_minus_one() -> PureHS {
        PureHS::new(
            2,
            -1,
            hodge_filt(
                2,
                vec![
                    (-1, Subspace::full(2)),
                    (0, span_g(2, vec![vec![(1, 0), (0, 1)]])),
                ],
            ),
        )
        .unwrap()
    }

    #[test]
    fn trivial_structure_is_pure() {
        let h = PureHS::new(1, 0, hodge_filt(1, vec![(0, Subspace::full(1))])).unwrap();
        assert!(check_pure(&h).passed());
        assert!(hodge_piece(&h, 0).unwrap().is_full());
        assert!(hodge_piece(&h, 1).unwrap().is_zero());
        assert!(hodge_piece(&h, -1).unwrap().is_zero());
    }

    #[test]
    fn weight_one_pure_and_pieces() {
        // dim 2, weight 1, F¹ = span{(1, i)}: H^{1,0} = span{(1,i)}, H^{0,1} = span{(1,−i)}.
        let h = PureHS::new(
            2,
            1,
            hodge_filt(
                2,
                vec![(0, Subspace::full(2)), (1, span_g(2, vec![vec![(1, 0), (0, 1)]]))],
            ),
        )
        .unwrap();
        assert!(check_pure(&h).passed());
        let h10 = hodge_piece(&h, 1).unwrap();
        assert_eq!(h10, span_g(2, vec![vec![(1, 0), (0, 1)]]));
        let h01 = hodge_piece(&h, 0).unwrap();
        assert_eq!(h01, span_g(2, vec![vec![(1, 0), (0, -1)]]));
        // ⊕_p hodge_piece = full, and H^{p,q} = conj H^{q,p}.
        assert!(h10.sum(&h01).unwrap().is_full());
        assert_eq!(h01, h10.conj());
    }

    #[test]
    fn real_line_fails_purity() {
        // dim 2, weight 1, F¹ = span{(1, 0)}: conj F¹ = F¹, so the sum at p=1 is 1-dim.
        let h = PureHS::new(
            2,
            1,
            hodge_filt(
                2,
                vec![(0, Subspace::full(2)), (1, span_g(2, vec![vec![(1, 0), (0, 0)]]))],
            ),
        )
        .unwrap();
        let rep = check_pure(&h);
        assert!(!rep.passed());
        assert!(rep.failures().any(|c| c.name.contains("p=1")));
    }

    #[test]
    fn weight_minus_one_fixture_is_pure() {
        assert!(check_pure(&weight_minus_one()).passed());
    }

    /// The 3-dimensional object with Gr₀ of weight −1 (dim 2) and Gr₁ of
    /// weight 0 (dim 1), in basis {e, s₁, s₂} with W₀ = span{s₁, s₂}.
    fn three_dim_mixed() -> MHSObject {
        MHSObject::new(
            3,
            -1,
            weight_filt(
                3,
                vec![
                    (0, span_q(3, vec![vec![0, 1, 0], vec![0, 0, 1]])),
                    (1, Subspace::full(3)),
                ],
            ),
            hodge_filt(
                3,
                vec![
                    (-1, Subspace::full(3)),
                    (
                        0,
                        span_g(3, vec![vec![(1, 0), (0, 0), (0, 0)], vec![(0, 0), (1, 0), (0, 1)]]),
                    ),
                ],
            ),
        )
        .unwrap()
    }

    /// The 2-dimensional pure weight −1 object (as an MHS with base −1).
    fn two_dim_pure() -> MHSObject {
        MHSObject::new(
            2,
            -1,
            weight_filt(2, vec![(0, Subspace::full(2))]),
            hodge_filt(
                2,
                vec![(-1, Subspace::full(2)), (0, span_g(2, vec![vec![(1, 0), (0, 1)]]))],
            ),
        )
        .unwrap()
    }

    #[test]
    fn graded_pieces_of_mixed_object() {
        let t = three_dim_mixed();
        assert!(check_mhs(&t).passed());
        let g0 = gr_weight(&t, 0).unwrap();
        assert_eq!(g0.dim, 2);
        assert_eq!(g0.weight, -1);
        let g1 = gr_weight(&t, 1).unwrap();
        assert_eq!(g1.dim, 1);
        assert_eq!(g1.weight, 0);
        assert_eq!(gr_weight(&t, -1).unwrap().dim, 0);
        assert_eq!(gr_weight(&t, 2).unwrap().dim, 0);
    }

    #[test]
    fn pure_object_as_mhs_has_single_graded_piece() {
        let s = two_dim_pure();
        assert!(check_mhs(&s).passed());
        let g0 = gr_weight(&s, 0).unwrap();
        assert_eq!((g0.dim, g0.weight), (2, -1));
        assert!(check_pure(&g0).passed());
        assert_eq!(gr_weight(&s, 1).unwrap().dim, 0);
    }

    #[test]
    fn perturbed_hodge_filtration_fails_mhs() {
        // Replace F⁰ with a real plane: Gr₀ purity fails.
        let mut t = three_dim_mixed();
        t.f = hodge_filt(
            3,
            vec![
                (-1, Subspace::full(3)),
                (0, span_g(3, vec![vec![(1, 0), (0, 0), (0, 0)], vec![(0, 0), (1, 0), (0, 0)]])),
            ],
        );
        let rep = check_mhs(&t);
        assert!(!rep.passed());
        assert!(rep.failures().any(|c| c.name.contains("Gr_0")));
    }

    #[test]
    fn inclusion_is_valid_and_strict() {
        // i: S → T sending the basis of S to {s₁, s₂}.
        let s = two_dim_pure();
        let t = three_dim_mixed();
        let m = Matrix::from_rows(vec![
            vec![rat_i(0), rat_i(1), rat_i(0)],
            vec![rat_i(0), rat_i(0), rat_i(1)],
        ])
        .unwrap();
        let f = MHSMorphism::new(s, t, m).unwrap();
        assert!(f.is_valid());
        assert!(is_strict(&f));
    }

    #[test]
    fn kernel_of_identity_and_zero() {
        let t = three_dim_mixed();
        let (kid, _) = kernel_mhs(&MHSMorphism::identity(&t)).unwrap();
        assert_eq!(kid.dim, 0);
        assert!(check_mhs(&kid).passed());
        let s = two_dim_pure();
        let (kzero, incl) = kernel_mhs(&MHSMorphism::zero(&s, &t)).unwrap();
        assert_eq!(kzero, s);
        assert!(incl.matrix.is_identity());
    }

    #[test]
    fn cokernel_of_identity_and_zero() {
        let t = three_dim_mixed();
        let (cid, _) = cokernel_mhs(&MHSMorphism::identity(&t)).unwrap();
        assert_eq!(cid.dim, 0);
        let s = two_dim_pure();
        let (czero, proj) = cokernel_mhs(&MHSMorphism::zero(&s, &t)).unwrap();
        assert_eq!(czero, t);
        assert!(proj.matrix.is_identity());
    }

    #[test]
    fn cokernel_of_inclusion_is_pure_weight_zero() {
        let s = two_dim_pure();
        let t = three_dim_mixed();
        let m = Matrix::from_rows(vec![
            vec![rat_i(0), rat_i(1), rat_i(0)],
            vec![rat_i(0), rat_i(0), rat_i(1)],
        ])
        .unwrap();
        let f = MHSMorphism::new(s, t, m).unwrap();
        let (coker, proj) = cokernel_mhs(&f).unwrap();
        assert_eq!(coker.dim, 1);
        assert!(check_mhs(&coker).passed());
        assert!(proj.is_valid());
        // Single graded piece of weight 0 = base(−1) + 1.
        assert_eq!(gr_weight(&coker, 1).unwrap().dim, 1);
        assert_eq!(gr_weight(&coker, 1).unwrap().weight, 0);
        assert_eq!(gr_weight(&coker, 0).unwrap().dim, 0);
    }

    #[test]
    fn kernel_of_projection_is_pure_weight_minus_one() {
        // Projection T → T/i(S), i.e. onto the e-coordinate.
        let t = three_dim_mixed();
        let im = span_q(3, vec![vec![0, 1, 0], vec![0, 0, 1]]);
        let (q, proj) = quot_mhs(&t, &im).unwrap();
        let f = MHSMorphism::new(t, q, proj).unwrap();
        assert!(f.is_valid());
        let (ker, incl) = kernel_mhs(&f).unwrap();
        assert_eq!(ker.dim, 2);
        assert!(check_mhs(&ker).passed());
        assert!(incl.is_valid());
        // Pure of weight −1: entire object in Gr₀.
        assert_eq!(gr_weight(&ker, 0).unwrap().dim, 2);
        assert_eq!(gr_weight(&ker, 0).unwrap().weight, -1);
        // And the kernel object coincides with the S fixture.
        assert_eq!(ker, two_dim_pure());
    }

    #[test]
    fn coimage_matches_image_for_strict_morphism() {
        let s = two_dim_pure();
        let t = three_dim_mixed();
        let m = Matrix::from_rows(vec![
            vec![rat_i(0), rat_i(1), rat_i(0)],
            vec![rat_i(0), rat_i(0), rat_i(1)],
        ])
        .unwrap();
        let f = MHSMorphism::new(s, t, m).unwrap();
        let iso = coimage_to_image(&f).unwrap();
        assert!(iso.matrix.inverse().is_some());
        assert!(iso.is_valid());
        // Inverse direction is also filtration-compatible: an MHS isomorphism.
        let inv = MHSMorphism::new(
            iso.target.clone(),
            iso.source.clone(),
            iso.matrix.inverse().unwrap(),
        )
        .unwrap();
        assert!(inv.is_valid());
    }

    #[test]
    fn base_weight_mismatch_rejected() {
        let s = two_dim_pure();
        let mut t = three_dim_mixed();
        t.base_weight = 0;
        let f = MHSMorphism::new(s, t, Matrix::zero(2, 3)).unwrap();
        assert!(kernel_mhs(&f).is_err());
        assert!(cokernel_mhs(&f).is_err());
    }
}
