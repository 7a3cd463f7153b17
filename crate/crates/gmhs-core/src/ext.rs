//! Extension groups: Hom (Ext⁰) as a linear system, Ext¹ via the quotient
//! model, pull-back extensions, Yoneda n-extension data with exactness
//! checking, roof certificates for class equality, and splicing.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result, ValidationReport};
use crate::gmhs::{
    direct_sum, kernel_gmhs, GMHSMorphism, GMHSObject, LabelCorrespondence, LabelKind, Pairing,
    SiteDescriptor,
};
use crate::hodge::MHSObject;
use crate::linalg::{quotient_basis, rat, GaussRat, Matrix, Rat, Scalar, Subspace};

// ---------------------------------------------------------------------------
// Hom groups
// ---------------------------------------------------------------------------

/// Appends, for each basis vector `v` of `domain_step` and each annihilator
/// vector `c` of `target_step`, the ℚ-linear equation `(v·M)·c = 0` in the
/// entries of the unknown rational matrix M (na×nb, unknown (s,t) at column
/// s·nb + t). Complex equations contribute their real and imaginary parts.
fn membership_rows(
    rows: &mut Vec<Vec<Rat>>,
    nb: usize,
    domain_step: &Subspace<GaussRat>,
    target_step: &Subspace<GaussRat>,
) {
    let na_cols = domain_step.ambient_dim();
    let annihilator = target_step.basis().kernel();
    for v in domain_step.basis_rows() {
        for c in annihilator.basis_rows() {
            let mut re_row = vec![Rat::zero(); na_cols * nb];
            let mut im_row = vec![Rat::zero(); na_cols * nb];
            let mut im_nonzero = false;
            for s in 0..na_cols {
                for t in 0..nb {
                    let coeff = v[s].clone() * c[t].clone();
                    if !coeff.im.is_zero() {
                        im_nonzero = true;
                    }
                    re_row[s * nb + t] = coeff.re;
                    im_row[s * nb + t] = coeff.im;
                }
            }
            rows.push(re_row);
            if im_nonzero {
                rows.push(im_row);
            }
        }
    }
}

/// ℚ-basis of the space of matrices that are filtration-compatible and
/// intertwine every pairing of `corr`; this is Hom in the category (Ext⁰).
/// An empty basis is the zero group.
pub fn hom_group(
    a: &GMHSObject,
    b: &GMHSObject,
    corr: &LabelCorrespondence,
) -> Result<Vec<Matrix<Rat>>> {
    let na = a.dim();
    let nb = b.dim();
    let unknowns = na * nb;
    let mut rows: Vec<Vec<Rat>> = Vec::new();

    // Weight compatibility at every jump of the source filtration.
    for r in a.mhs.w.indices() {
        membership_rows(
            &mut rows,
            nb,
            &a.mhs.w.at(r).to_gauss(),
            &b.mhs.w.at(r).to_gauss(),
        );
    }
    // Hodge compatibility at every jump of the source filtration.
    for p in a.mhs.f.indices() {
        membership_rows(&mut rows, nb, &a.mhs.f.at(p), &b.mhs.f.at(p));
    }
    // Intertwining X·M = M·Y for each declared pairing.
    for pairing in &corr.pairings {
        let x = a.op(pairing.x_kind, &pairing.x_label)?;
        let y = b.op(pairing.y_kind, &pairing.y_label)?;
        for s in 0..na {
            for t in 0..nb {
                let mut re_row = vec![Rat::zero(); unknowns];
                let mut im_row = vec![Rat::zero(); unknowns];
                let mut im_nonzero = false;
                let add = |col: usize, g: GaussRat, re_row: &mut Vec<Rat>, im_row: &mut Vec<Rat>| {
                    re_row[col] += g.re;
                    im_row[col] += g.im;
                };
                for u in 0..na {
                    let g = x.get(s, u).clone();
                    if !g.im.is_zero() {
                        im_nonzero = true;
                    }
                    add(u * nb + t, g, &mut re_row, &mut im_row);
                }
                for v in 0..nb {
                    let g = -y.get(v, t).clone();
                    if !g.im.is_zero() {
                        im_nonzero = true;
                    }
                    add(s * nb + v, g, &mut re_row, &mut im_row);
                }
                rows.push(re_row);
                if im_nonzero {
                    rows.push(im_row);
                }
            }
        }
    }

    let constraints = if rows.is_empty() {
        Matrix::zero(0, unknowns)
    } else {
        Matrix::from_rows(rows)?
    };
    let solutions = constraints.kernel();
    let mut basis = Vec::new();
    for sol in solutions.basis_rows() {
        basis.push(Matrix::new(na, nb, sol)?);
    }
    Ok(basis)
}

// ---------------------------------------------------------------------------
// Eigen decomposition of Hom classes under the z-family
// ---------------------------------------------------------------------------

/// A choice of sign (+1 or −1) for every u-label.
pub type SignPattern = BTreeMap<String, i8>;

/// Decomposes a weight-zero class into simultaneous (±1)-eigencomponents of
/// the z-family; only nonzero components are returned. The pattern with
/// value −1 exactly on a label set M is the component seen by Hom(ℚ_M, h).
pub fn eigen_decompose(
    h: &GMHSObject,
    cls: &[Rat],
) -> Result<BTreeMap<SignPattern, Vec<GaussRat>>> {
    let n = h.dim();
    if cls.len() != n {
        return Err(Error::input(format!(
            "eigen_decompose: class has length {}, expected {n}",
            cls.len()
        )));
    }
    let labels: Vec<String> = h.site.u_labels.iter().cloned().collect();
    let mut ops = Vec::new();
    for l in &labels {
        let z = h.z_op(l)?;
        let sq = z.mul(&z)?;
        if !sq.is_identity() {
            return Err(Error::precondition(format!(
                "eigen_decompose: z-operator '{l}' is not an involution"
            )));
        }
        ops.push(z);
    }
    for i in 0..ops.len() {
        for j in i + 1..ops.len() {
            if ops[i].mul(&ops[j])? != ops[j].mul(&ops[i])? {
                return Err(Error::precondition(format!(
                    "eigen_decompose: z-operators '{}' and '{}' do not commute",
                    labels[i], labels[j]
                )));
            }
        }
    }
    let cls_g: Vec<GaussRat> = cls.iter().map(GaussRat::from_rat).collect();
    if !h.mhs.w.at(0).contains_vec(cls) || !h.mhs.f.at(0).contains_vec(&cls_g) {
        return Err(Error::precondition(
            "eigen_decompose: class is not a weight-zero Hom class (must lie in W₀ and F⁰)",
        ));
    }
    let half = GaussRat::from_rat(&rat(1, 2));
    let mut out = BTreeMap::new();
    for mask in 0..(1usize << labels.len()) {
        let mut projector = Matrix::<GaussRat>::identity(n);
        let mut pattern = SignPattern::new();
        for (idx, l) in labels.iter().enumerate() {
            let minus = mask & (1 << idx) != 0;
            pattern.insert(l.clone(), if minus { -1 } else { 1 });
            let signed = if minus {
                Matrix::identity(n).sub(&ops[idx])?
            } else {
                Matrix::identity(n).add(&ops[idx])?
            };
            projector = projector.mul(&signed.scale(&half))?;
        }
        let component = projector.apply_row(&cls_g)?;
        if component.iter().any(|c| !c.is_zero()) {
            out.insert(pattern, component);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Ext¹ via the quotient model
// ---------------------------------------------------------------------------

/// ℚ-dimension of `H_ℚ(i) / (F⁰ + H_ℚ)` together with coset representatives,
/// in the 2n-dimensional ℚ-model of `H ⊗ ℚ(i)` where a vector `v` is stored
/// as `(re v, im v)`. This is Ext¹ from the unit object when all weights of
/// `h` are negative; the weight precondition is enforced.
pub fn ext1_dimension(h: &MHSObject) -> Result<(usize, Vec<Vec<Rat>>)> {
    for r in h.w.indices() {
        if h.base_weight + r >= 0 {
            return Err(Error::precondition(format!(
                "ext1_dimension: weight {} occurs; all weights must be negative",
                h.base_weight + r
            )));
        }
    }
    let n = h.dim;
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for v in h.f.at(0).basis_rows() {
        let mut direct = Vec::with_capacity(2 * n);
        let mut times_i = Vec::with_capacity(2 * n);
        for e in &v {
            direct.push(e.re.clone());
            times_i.push(-e.im.clone());
        }
        for e in &v {
            direct.push(e.im.clone());
            times_i.push(e.re.clone());
        }
        rows.push(direct);
        rows.push(times_i);
    }
    for s in 0..n {
        let mut row = vec![Rat::zero(); 2 * n];
        row[s] = Rat::one();
        rows.push(row);
    }
    let denominator = Subspace::from_rows(2 * n, rows);
    let dim = 2 * n - denominator.dim();
    let reps = quotient_basis(&Subspace::full(2 * n), &denominator)?;
    Ok((dim, reps))
}

// ---------------------------------------------------------------------------
// Yoneda extensions
// ---------------------------------------------------------------------------

/// A chain `0 → N → R_n → ⋯ → R₁ → M → 0`: `objects` runs from N to M and
/// `maps[i]` connects `objects[i]` to `objects[i+1]`. Exactness is a separate
/// check ([`check_exact`]), so partially built data can be inspected.
#[derive(Clone, PartialEq, Debug)]
pub struct YonedaExt {
    pub objects: Vec<GMHSObject>,
    pub maps: Vec<GMHSMorphism>,
}

impl YonedaExt {
    pub fn new(objects: Vec<GMHSObject>, maps: Vec<GMHSMorphism>) -> Result<Self> {
        if objects.len() < 3 {
            return Err(Error::input("yoneda extension needs at least three objects"));
        }
        if maps.len() + 1 != objects.len() {
            return Err(Error::input(format!(
                "yoneda extension with {} objects needs {} maps, got {}",
                objects.len(),
                objects.len() - 1,
                maps.len()
            )));
        }
        for (i, f) in maps.iter().enumerate() {
            if f.source != objects[i] || f.target != objects[i + 1] {
                return Err(Error::input(format!(
                    "map {i} does not connect object {i} to object {}",
                    i + 1
                )));
            }
        }
        Ok(YonedaExt { objects, maps })
    }

    /// The n of Extⁿ: two less than the number of objects.
    pub fn length(&self) -> usize {
        self.objects.len() - 2
    }

    pub fn head(&self) -> &GMHSObject {
        self.objects.first().expect("nonempty")
    }

    pub fn tail(&self) -> &GMHSObject {
        self.objects.last().expect("nonempty")
    }
}

/// Exactness: every map valid, injective at the head, image = kernel at each
/// interior node, surjective onto the tail.
pub fn check_exact(e: &YonedaExt) -> ValidationReport {
    let mut rep = ValidationReport::new("yoneda extension");
    for (i, f) in e.maps.iter().enumerate() {
        let v = f.validate();
        rep.record(
            format!("map {i} is a valid morphism"),
            v.passed(),
            if v.passed() { "ok".to_string() } else { v.first_failure_text() },
        );
    }
    let first = &e.maps[0];
    rep.record(
        "injective at the head",
        first.matrix.rank() == first.source.dim(),
        format!("rank {} of {}", first.matrix.rank(), first.source.dim()),
    );
    for i in 1..e.objects.len() - 1 {
        let image = e.maps[i - 1].matrix.row_space();
        let kernel = e.maps[i].matrix.left_kernel();
        rep.record(
            format!("exact at position {i}"),
            image == kernel,
            format!("dim image = {}, dim kernel = {}", image.dim(), kernel.dim()),
        );
    }
    let last = e.maps.last().expect("nonempty");
    rep.record(
        "surjective onto the tail",
        last.matrix.rank() == last.target.dim(),
        format!("rank {} of {}", last.matrix.rank(), last.target.dim()),
    );
    rep
}

/// Labels carried by both sites (same kind), each paired with itself. The
/// natural correspondence for maps that do not relabel anything, e.g. zero
/// maps between objects over different sites.
pub fn common_label_corr(a: &SiteDescriptor, b: &SiteDescriptor) -> LabelCorrespondence {
    let mut pairings = std::collections::BTreeSet::new();
    for l in a.u_labels.intersection(&b.u_labels) {
        pairings.insert(Pairing::new(LabelKind::Z, l, LabelKind::Z, l));
    }
    for l in a.d_labels.intersection(&b.d_labels) {
        pairings.insert(Pairing::new(LabelKind::W, l, LabelKind::W, l));
    }
    LabelCorrespondence::new(pairings)
}

/// The split 2-extension `0 → N → N → M → M → 0` (identity, zero, identity);
/// it represents the trivial class in Ext².
pub fn split_2ext(n: &GMHSObject, m: &GMHSObject) -> Result<YonedaExt> {
    let id_n = GMHSMorphism::identity(n);
    let id_m = GMHSMorphism::identity(m);
    let zero = GMHSMorphism::new(
        n.clone(),
        m.clone(),
        Matrix::zero(n.dim(), m.dim()),
        common_label_corr(&n.site, &m.site),
    )?;
    YonedaExt::new(
        vec![n.clone(), n.clone(), m.clone(), m.clone()],
        vec![id_n, zero, id_m],
    )
}

// ---------------------------------------------------------------------------
// Roofs: certificates of class equality
// ---------------------------------------------------------------------------

/// A middle extension E″ with ladders down to two extensions E and E′ such
/// that, when everything commutes, C(E) = C(E′). `up_maps[i]` goes from the
/// i-th middle object to the i-th object of E; `down_maps` likewise to E′.
#[derive(Clone, PartialEq, Debug)]
pub struct Roof {
    pub middle: YonedaExt,
    pub up_maps: Vec<GMHSMorphism>,
    pub down_maps: Vec<GMHSMorphism>,
}

/// The reflexive roof: middle = e, both ladders identity.
pub fn identity_roof(e: &YonedaExt) -> Roof {
    let ids: Vec<GMHSMorphism> = e.objects.iter().map(GMHSMorphism::identity).collect();
    Roof { middle: e.clone(), up_maps: ids.clone(), down_maps: ids }
}

fn ladder_report(
    rep: &mut ValidationReport,
    side: &str,
    middle: &YonedaExt,
    outer: &YonedaExt,
    ladder: &[GMHSMorphism],
) {
    let n_obj = middle.objects.len();
    for (i, f) in ladder.iter().enumerate() {
        let lined_up = f.source == middle.objects[i] && f.target == outer.objects[i];
        rep.record(
            format!("{side} map {i} connects the ladders"),
            lined_up,
            "source must be the middle object, target the outer object",
        );
        if !lined_up {
            continue;
        }
        let v = f.validate();
        rep.record(
            format!("{side} map {i} is a valid morphism"),
            v.passed(),
            if v.passed() { "ok".to_string() } else { v.first_failure_text() },
        );
        if i == 0 || i == n_obj - 1 {
            rep.record(
                format!("{side} map {i} is the identity at the endpoint"),
                f.matrix.is_identity() && f.source == f.target,
                "endpoints of a roof must be fixed",
            );
        }
    }
    for i in 0..middle.maps.len() {
        if i + 1 >= ladder.len() {
            break;
        }
        let via_middle = middle.maps[i].matrix.mul(&ladder[i + 1].matrix);
        let via_outer = ladder[i].matrix.mul(&outer.maps[i].matrix);
        let ok = matches!((via_middle, via_outer), (Ok(a), Ok(b)) if a == b);
        rep.record(
            format!("{side} square {i} commutes"),
            ok,
            "middle map then ladder must equal ladder then outer map",
        );
    }
}

/// Full diagnostic version of [`check_roof`].
pub fn roof_report(e: &YonedaExt, e_prime: &YonedaExt, roof: &Roof) -> Result<ValidationReport> {
    if e.length() != e_prime.length() {
        return Err(Error::input("check_roof: the two extensions have different lengths"));
    }
    if e.head() != e_prime.head() || e.tail() != e_prime.tail() {
        return Err(Error::input("check_roof: the two extensions have different endpoints"));
    }
    if roof.middle.length() != e.length() {
        return Err(Error::input("check_roof: middle extension has the wrong length"));
    }
    let n_obj = e.objects.len();
    if roof.up_maps.len() != n_obj || roof.down_maps.len() != n_obj {
        return Err(Error::input(format!(
            "check_roof: ladders must have {n_obj} maps"
        )));
    }
    let mut rep = ValidationReport::new("roof");
    rep.merge(check_exact(&roof.middle));
    rep.record(
        "middle endpoints match",
        roof.middle.head() == e.head() && roof.middle.tail() == e.tail(),
        "middle sequence must share N and M",
    );
    ladder_report(&mut rep, "up", &roof.middle, e, &roof.up_maps);
    ladder_report(&mut rep, "down", &roof.middle, e_prime, &roof.down_maps);
    Ok(rep)
}

/// True iff the roof certifies C(e) = C(e_prime): exact middle, valid
/// commuting ladders, identity endpoints. Shape mismatches are errors.
pub fn check_roof(e: &YonedaExt, e_prime: &YonedaExt, roof: &Roof) -> Result<bool> {
    Ok(roof_report(e, e_prime, roof)?.passed())
}

// ---------------------------------------------------------------------------
// Splice and pull-back
// ---------------------------------------------------------------------------

/// Yoneda composition: joins `e1` (ending at X) with `e2` (starting at X)
/// through the composite connecting map, giving a class of length a+b.
pub fn splice(e1: &YonedaExt, e2: &YonedaExt) -> Result<YonedaExt> {
    if e1.tail() != e2.head() {
        return Err(Error::input(
            "splice: tail object of the first extension must equal head of the second",
        ));
    }
    let mut objects = e1.objects[..e1.objects.len() - 1].to_vec();
    objects.extend_from_slice(&e2.objects[1..]);
    let connecting = e1.maps.last().expect("nonempty").compose(&e2.maps[0])?;
    let mut maps = e1.maps[..e1.maps.len() - 1].to_vec();
    maps.push(connecting);
    maps.extend_from_slice(&e2.maps[1..]);
    let out = YonedaExt::new(objects, maps)?;
    let rep = check_exact(&out);
    if !rep.passed() {
        return Err(Error::validation(format!(
            "splice result is not exact: {}",
            rep.first_failure_text()
        )));
    }
    Ok(out)
}

/// Pull-back of a surjection along a class map into its target:
/// `0 → ker(surj) → B ×_A Q → Q → 0` with the fiber product realized as the
/// kernel of `(surj, −h_v): B ⊕ Q → A`. The connecting maps pair every label
/// with itself; the fiber product's intertwining data is inherited from the
/// pairings common to both input morphisms.
pub fn pullback_extension(surj: &GMHSMorphism, h_v: &GMHSMorphism) -> Result<YonedaExt> {
    if surj.target != h_v.target {
        return Err(Error::input("pullback_extension: the two maps must share a target"));
    }
    let vs = surj.validate();
    if !vs.passed() {
        return Err(Error::precondition(format!(
            "pullback_extension: surjection is not a valid morphism: {}",
            vs.first_failure_text()
        )));
    }
    let vh = h_v.validate();
    if !vh.passed() {
        return Err(Error::precondition(format!(
            "pullback_extension: class map is not a valid morphism: {}",
            vh.first_failure_text()
        )));
    }
    if surj.matrix.rank() != surj.target.dim() {
        return Err(Error::precondition("pullback_extension: map is not surjective"));
    }
    let b = &surj.source;
    let q = &h_v.source;
    let sum = direct_sum(b, q)?;
    let minus_one = -Rat::one();
    let combined_matrix = surj.matrix.vstack(&h_v.matrix.scale(&minus_one))?;
    let common: std::collections::BTreeSet<Pairing> = surj
        .corr
        .pairings
        .intersection(&h_v.corr.pairings)
        .cloned()
        .collect();
    let combined = GMHSMorphism::new(
        sum,
        surj.target.clone(),
        combined_matrix,
        LabelCorrespondence::new(common),
    )?;
    let (fiber, fiber_incl) = kernel_gmhs(&combined)?;
    let (ker, ker_incl) = kernel_gmhs(surj)?;

    // ι: ker(surj) → fiber product, k ↦ (k, 0) expressed in the fiber basis.
    let embedded = ker_incl
        .matrix
        .hstack(&Matrix::zero(ker.dim(), q.dim()))?;
    let iota_matrix = fiber_incl.matrix.factor_rows(&embedded).ok_or_else(|| {
        Error::validation("pullback_extension: kernel does not land in the fiber product")
    })?;
    let site_corr = LabelCorrespondence::identity(&b.site);
    let iota = GMHSMorphism::new(ker.clone(), fiber.clone(), iota_matrix, site_corr.clone())?;

    // π: fiber product → Q, the second block of the inclusion coordinates.
    let mut proj = Matrix::zero(fiber.dim(), q.dim());
    for i in 0..fiber.dim() {
        for j in 0..q.dim() {
            proj.set(i, j, fiber_incl.matrix.get(i, b.dim() + j).clone());
        }
    }
    let pi = GMHSMorphism::new(fiber.clone(), q.clone(), proj, site_corr)?;

    let e = YonedaExt::new(vec![ker, fiber, q.clone()], vec![iota, pi])?;
    let rep = check_exact(&e);
    if !rep.passed() {
        return Err(Error::validation(format!(
            "pullback_extension result is not exact: {}",
            rep.first_failure_text()
        )));
    }
    Ok(e)
}
