//! Canonical shipped data, all built from code so the JSON files in
//! `fixtures/` are reproducible bit for bit.
//!
//! Three scenarios ship: the four-object two-extension with its split
//! reference and canonical parameters, two strata tables for the weight
//! spectral sequence, and the pair of pure weight −1 objects whose Ext¹
//! dimensions are 0 and 1. An integration test keeps the files in sync with
//! these generators (`REGEN_FIXTURES=1` rewrites them).

use std::collections::BTreeMap;

use crate::builders::StrataData;
use crate::example33::{self, Example33Params};
use crate::gmhs::{GMHSObject, LabelCorrespondence, SiteDescriptor};
use crate::hodge::{HodgeFiltration, MHSObject, WeightFiltration};
use crate::linalg::{gauss_i, rat, rat_i, GaussRat, Matrix, Rat, Subspace};
use crate::scenario::ScenarioFile;

fn m_q(rows: Vec<Vec<i64>>) -> Matrix<Rat> {
    Matrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(rat_i).collect()).collect())
        .expect("rectangular literal")
}

/// The projective line minus two points: X with H⁰ = H² = ℚ, two point
/// strata with H⁰ = ℚ, Gysin H⁰(point) → H²(X) the identity.
pub fn p1_minus_two_points() -> StrataData {
    let mut s = StrataData::from_labels(&["1", "2"]);
    s.set_dim(&[], 0, 1);
    s.set_dim(&[], 2, 1);
    s.set_dim(&["1"], 0, 1);
    s.set_dim(&["2"], 0, 1);
    s.set_gysin(&["1"], &[], 0, m_q(vec![vec![1]]));
    s.set_gysin(&["2"], &[], 0, m_q(vec![vec![1]]));
    s
}

/// A surface with two curves meeting in a point; Gysin data chosen so the
/// two routes from the deepest stratum cancel under the alternating signs.
pub fn surface_two_curves() -> StrataData {
    let mut s = StrataData::from_labels(&["1", "2"]);
    s.set_dim(&[], 0, 1);
    s.set_dim(&[], 2, 2);
    s.set_dim(&[], 4, 1);
    s.set_dim(&["1"], 0, 1);
    s.set_dim(&["1"], 2, 1);
    s.set_dim(&["2"], 0, 1);
    s.set_dim(&["2"], 2, 1);
    s.set_dim(&["1", "2"], 0, 1);
    s.set_gysin(&["1", "2"], &["1"], 0, m_q(vec![vec![1]]));
    s.set_gysin(&["1", "2"], &["2"], 0, m_q(vec![vec![1]]));
    s.set_gysin(&["1"], &[], 0, m_q(vec![vec![1, 0]]));
    s.set_gysin(&["2"], &[], 0, m_q(vec![vec![0, 1]]));
    s.set_gysin(&["1"], &[], 2, m_q(vec![vec![1]]));
    s.set_gysin(&["2"], &[], 2, m_q(vec![vec![1]]));
    s
}

fn weight_minus_one_pair(f0_rows: Vec<Vec<GaussRat>>) -> MHSObject {
    let mut w = BTreeMap::new();
    w.insert(-1, Subspace::full(2));
    let mut f = BTreeMap::new();
    f.insert(-1, Subspace::<GaussRat>::full(2));
    f.insert(0, Subspace::from_rows(2, f0_rows));
    MHSObject::new(
        2,
        0,
        WeightFiltration::new(2, w).expect("dims agree"),
        HodgeFiltration::new(2, f).expect("dims agree"),
    )
    .expect("dims agree")
}

fn bare_gmhs(mhs: MHSObject) -> GMHSObject {
    let site = SiteDescriptor::new(Default::default(), Default::default()).expect("empty site");
    GMHSObject::new(mhs, site, BTreeMap::new(), BTreeMap::new()).expect("no operators")
}

/// Dim 2, weight −1, F⁰ = span{(1, i)}: the quotient model is zero, Ext¹ = 0.
pub fn ext1_rigid() -> MHSObject {
    weight_minus_one_pair(vec![vec![gauss_i(1, 0), gauss_i(0, 1)]])
}

/// Dim 2, weight −1, F⁰ = span{(1, 0)}: the quotient model is a line,
/// Ext¹ = 1. The degenerate F makes this bifiltered object fail purity on
/// purpose — it exists to exercise the model computation, so it stays a
/// code-level fixture and is never shipped inside a scenario file (the
/// validating loader would reject it).
pub fn ext1_mobile() -> MHSObject {
    weight_minus_one_pair(vec![vec![gauss_i(1, 0), gauss_i(0, 0)]])
}

/// The Tate object ℚ(1): dim 1, weight −2, F⁻¹ full, F⁰ zero. A valid pure
/// structure with Ext¹ = 1, shipped so the CLI has a nonzero example.
pub fn tate_one() -> MHSObject {
    let mut w = BTreeMap::new();
    w.insert(-2, Subspace::full(1));
    let mut f = BTreeMap::new();
    f.insert(-1, Subspace::<GaussRat>::full(1));
    MHSObject::new(
        1,
        0,
        WeightFiltration::new(1, w).expect("dims agree"),
        HodgeFiltration::new(1, f).expect("dims agree"),
    )
    .expect("dims agree")
}

/// The two-extension at the canonical parameters c₁ = 1, c₂ = 2, its split
/// reference, and the identity correspondence used to compute End(ℚ_M).
pub fn example33_scenario() -> ScenarioFile {
    let params = Example33Params::new(rat(1, 1), rat(2, 1));
    let e = example33::build_example33(&params).expect("canonical parameters build");
    let e_split = example33::split_reference().expect("split reference builds");
    let mut s = ScenarioFile::new();
    s.objects.insert("S".into(), e.objects[0].clone());
    s.objects.insert("T".into(), e.objects[1].clone());
    s.objects.insert("V".into(), e.objects[2].clone());
    s.objects.insert("QM".into(), e.objects[3].clone());
    s.morphisms.insert("i".into(), e.maps[0].clone());
    s.morphisms.insert("j".into(), e.maps[1].clone());
    s.morphisms.insert("k".into(), e.maps[2].clone());
    s.insert_extension("E", &e);
    s.insert_extension("Esplit", &e_split);
    s.correspondences
        .insert("qm_identity".into(), LabelCorrespondence::identity(&e.objects[3].site));
    s.params.insert(
        "example33".into(),
        [("c1".into(), rat(1, 1)), ("c2".into(), rat(2, 1))].into_iter().collect(),
    );
    s
}

/// Both strata tables under one roof.
pub fn strata_scenario() -> ScenarioFile {
    let mut s = ScenarioFile::new();
    s.strata.insert("p1_minus_two_points".into(), p1_minus_two_points());
    s.strata.insert("surface_two_curves".into(), surface_two_curves());
    s
}

/// The valid Ext¹ demonstration objects (the degenerate model fixture
/// [`ext1_mobile`] is deliberately absent — it fails purity by design).
pub fn ext1_scenario() -> ScenarioFile {
    let mut s = ScenarioFile::new();
    s.objects.insert("h_rigid".into(), bare_gmhs(ext1_rigid()));
    s.objects.insert("q_tate".into(), bare_gmhs(tate_one()));
    s
}

/// Every shipped fixture, file name first.
pub fn shipped() -> Vec<(&'static str, ScenarioFile)> {
    vec![
        ("example33.json", example33_scenario()),
        ("strata.json", strata_scenario()),
        ("ext1_weight_minus_one.json", ext1_scenario()),
    ]
}
