//! Bit-exact serialization of every domain type and a validating loader.
//!
//! Scenarios are JSON files holding named objects, morphisms, strata tables,
//! extensions, roofs, correspondences, certificates, and scalar parameter
//! maps. Rationals are strings (`"3/4"`, `"-2"`), Gaussian rationals are
//! `{re, im}` pairs of such strings, matrices are row-major with explicit
//! dimensions, and subspaces are basis matrices. Cross-references between
//! sections are by name and must resolve.
//!
//! [`load`] parses, resolves, and validates: every object must pass
//! [`check_gmhs`], every morphism its own [`GMHSMorphism::validate`], every
//! extension [`check_exact`], every strata table [`validate_complex`] in all
//! populated degrees. Errors name the failing element and invariant.
//!
//! [`save`] is deterministic: object keys sorted, rationals reduced,
//! byte-identical output for equal scenarios. The schema is documented in
//! `docs/scenario-format.md`.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::builders::{validate_complex, StrataData};
use crate::error::{Error, Result, ValidationReport};
use crate::example33::{CertificateEquation, ObstructionCertificate};
use crate::ext::{check_exact, Roof, YonedaExt};
use crate::gmhs::{
    check_gmhs, GMHSMorphism, GMHSObject, LabelCorrespondence, LabelKind, Pairing, SiteDescriptor,
};
use crate::hodge::{HodgeFiltration, MHSObject, WeightFiltration};
use crate::linalg::{GaussRat, Matrix, Rat, Subspace};

/// The one schema version this crate reads and writes.
pub const SCENARIO_VERSION: u32 = 1;

// ---------------------------------------------------------------------------
// In-memory scenario
// ---------------------------------------------------------------------------

/// A fully resolved, validated scenario: the in-memory form of a file.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct ScenarioFile {
    pub objects: BTreeMap<String, GMHSObject>,
    pub morphisms: BTreeMap<String, GMHSMorphism>,
    pub strata: BTreeMap<String, StrataData>,
    pub extensions: BTreeMap<String, YonedaExt>,
    pub roofs: BTreeMap<String, Roof>,
    pub correspondences: BTreeMap<String, LabelCorrespondence>,
    pub certificates: BTreeMap<String, ObstructionCertificate>,
    pub params: BTreeMap<String, BTreeMap<String, Rat>>,
}

impl ScenarioFile {
    pub fn new() -> Self {
        ScenarioFile::default()
    }

    pub fn object(&self, name: &str) -> Result<&GMHSObject> {
        self.objects.get(name).ok_or_else(|| Error::input(format!("unknown object '{name}'")))
    }

    pub fn morphism(&self, name: &str) -> Result<&GMHSMorphism> {
        self.morphisms.get(name).ok_or_else(|| Error::input(format!("unknown morphism '{name}'")))
    }

    pub fn strata_table(&self, name: &str) -> Result<&StrataData> {
        self.strata.get(name).ok_or_else(|| Error::input(format!("unknown strata table '{name}'")))
    }

    pub fn extension(&self, name: &str) -> Result<&YonedaExt> {
        self.extensions
            .get(name)
            .ok_or_else(|| Error::input(format!("unknown extension '{name}'")))
    }

    pub fn roof(&self, name: &str) -> Result<&Roof> {
        self.roofs.get(name).ok_or_else(|| Error::input(format!("unknown roof '{name}'")))
    }

    pub fn correspondence(&self, name: &str) -> Result<&LabelCorrespondence> {
        self.correspondences
            .get(name)
            .ok_or_else(|| Error::input(format!("unknown correspondence '{name}'")))
    }

    /// Registers an extension along with its objects and maps under derived
    /// names (`{name}.obj{i}`, `{name}.map{i}`). Entries already present by
    /// value are reused instead of duplicated; the save path resolves
    /// references by value, so any name holding an equal entry serves.
    pub fn insert_extension(&mut self, name: &str, e: &YonedaExt) {
        for (i, o) in e.objects.iter().enumerate() {
            if !self.objects.values().any(|v| v == o) {
                self.objects.insert(format!("{name}.obj{i}"), o.clone());
            }
        }
        for (i, f) in e.maps.iter().enumerate() {
            if !self.morphisms.values().any(|v| v == f) {
                self.morphisms.insert(format!("{name}.map{i}"), f.clone());
            }
        }
        self.extensions.insert(name.to_string(), e.clone());
    }

    /// Registers a roof: its middle extension under `{name}.middle` and the
    /// ladder maps under `{name}.up{i}` / `{name}.down{i}`. Ladder targets
    /// that are not already objects of the file are registered too.
    pub fn insert_roof(&mut self, name: &str, r: &Roof) {
        self.insert_extension(&format!("{name}.middle"), &r.middle);
        for (i, f) in r.up_maps.iter().enumerate() {
            self.register_outer_object(&f.target);
            if !self.morphisms.values().any(|v| v == f) {
                self.morphisms.insert(format!("{name}.up{i}"), f.clone());
            }
        }
        for (i, f) in r.down_maps.iter().enumerate() {
            self.register_outer_object(&f.target);
            if !self.morphisms.values().any(|v| v == f) {
                self.morphisms.insert(format!("{name}.down{i}"), f.clone());
            }
        }
        self.roofs.insert(name.to_string(), r.clone());
    }

    fn register_outer_object(&mut self, o: &GMHSObject) {
        if self.objects.values().any(|v| v == o) {
            return;
        }
        let mut i = self.objects.len();
        while self.objects.contains_key(&format!("outer{i}")) {
            i += 1;
        }
        self.objects.insert(format!("outer{i}"), o.clone());
    }

    /// Runs every module validator over the scenario, one named check per
    /// element, without stopping at the first failure.
    pub fn validation_report(&self) -> ValidationReport {
        let mut rep = ValidationReport::new("scenario");
        for (name, o) in &self.objects {
            let r = check_gmhs(o);
            rep.record(
                format!("object '{name}'"),
                r.passed(),
                if r.passed() { "ok".to_string() } else { r.first_failure_text() },
            );
        }
        for (name, f) in &self.morphisms {
            let r = f.validate();
            rep.record(
                format!("morphism '{name}'"),
                r.passed(),
                if r.passed() { "ok".to_string() } else { r.first_failure_text() },
            );
        }
        for (name, e) in &self.extensions {
            let r = check_exact(e);
            rep.record(
                format!("extension '{name}'"),
                r.passed(),
                if r.passed() { "ok".to_string() } else { r.first_failure_text() },
            );
        }
        for (name, s) in &self.strata {
            let mut degrees: BTreeSet<i64> =
                s.cohomology_dims.keys().map(|(_, n)| *n).collect();
            degrees.extend(s.gysin.keys().map(|(_, _, n)| *n));
            let mut ok = true;
            let mut detail = "ok".to_string();
            for k in degrees {
                let r = validate_complex(s, k);
                if !r.passed() {
                    ok = false;
                    detail = r.first_failure_text();
                    break;
                }
            }
            rep.record(format!("strata '{name}'"), ok, detail);
        }
        for (name, r) in &self.roofs {
            let n = r.middle.objects.len();
            let lengths_ok = r.up_maps.len() == n && r.down_maps.len() == n;
            let wired = lengths_ok
                && r.up_maps.iter().zip(&r.middle.objects).all(|(f, o)| &f.source == o)
                && r.down_maps.iter().zip(&r.middle.objects).all(|(f, o)| &f.source == o);
            rep.record(
                format!("roof '{name}'"),
                wired,
                "ladder maps must start at the middle objects, one per object",
            );
        }
        rep
    }
}

// ---------------------------------------------------------------------------
// Scalar and matrix wire forms
// ---------------------------------------------------------------------------

/// Canonical string form of a rational: reduced, `a/b` with `b` omitted
/// when it is 1.
pub fn rat_to_string(r: &Rat) -> String {
    r.to_string()
}

/// Parses `a` or `a/b`; the result is reduced. Rejects zero denominators.
pub fn rat_from_string(s: &str) -> Result<Rat> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n
        .trim()
        .parse()
        .map_err(|_| Error::input(format!("invalid rational numerator in '{s}'")))?;
    let d: BigInt = d
        .trim()
        .parse()
        .map_err(|_| Error::input(format!("invalid rational denominator in '{s}'")))?;
    if d.is_zero() {
        return Err(Error::input(format!("zero denominator in rational '{s}'")));
    }
    Ok(Rat::new(n, d))
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
pub struct GaussDto {
    pub re: String,
    pub im: String,
}

fn gauss_to_dto(g: &GaussRat) -> GaussDto {
    GaussDto { re: rat_to_string(&g.re), im: rat_to_string(&g.im) }
}

fn gauss_from_dto(d: &GaussDto) -> Result<GaussRat> {
    Ok(GaussRat::new(rat_from_string(&d.re)?, rat_from_string(&d.im)?))
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
pub struct RatMatrixDto {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<String>,
}

fn rat_matrix_to_dto(m: &Matrix<Rat>) -> RatMatrixDto {
    RatMatrixDto {
        rows: m.rows(),
        cols: m.cols(),
        entries: m.entries().iter().map(rat_to_string).collect(),
    }
}

fn rat_matrix_from_dto(d: &RatMatrixDto) -> Result<Matrix<Rat>> {
    let entries: Result<Vec<Rat>> = d.entries.iter().map(|s| rat_from_string(s)).collect();
    Matrix::new(d.rows, d.cols, entries?)
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
pub struct GaussMatrixDto {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<GaussDto>,
}

fn gauss_matrix_to_dto(m: &Matrix<GaussRat>) -> GaussMatrixDto {
    GaussMatrixDto {
        rows: m.rows(),
        cols: m.cols(),
        entries: m.entries().iter().map(gauss_to_dto).collect(),
    }
}

fn gauss_matrix_from_dto(d: &GaussMatrixDto) -> Result<Matrix<GaussRat>> {
    let entries: Result<Vec<GaussRat>> = d.entries.iter().map(gauss_from_dto).collect();
    Matrix::new(d.rows, d.cols, entries?)
}

// ---------------------------------------------------------------------------
// Objects
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
struct RatStepDto {
    index: i64,
    basis: RatMatrixDto,
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
struct GaussStepDto {
    index: i64,
    basis: GaussMatrixDto,
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
struct SiteDto {
    u_labels: Vec<String>,
    d_labels: Vec<String>,
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
struct ObjectDto {
    dim: usize,
    base_weight: i64,
    /// Increasing weight filtration: stored steps, ordered by index.
    weight_steps: Vec<RatStepDto>,
    /// Decreasing Hodge filtration: stored steps, ordered by index.
    hodge_steps: Vec<GaussStepDto>,
    site: SiteDto,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    z_ops: BTreeMap<String, GaussMatrixDto>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    w_ops: BTreeMap<String, GaussMatrixDto>,
}

fn object_to_dto(o: &GMHSObject) -> ObjectDto {
    ObjectDto {
        dim: o.mhs.dim,
        base_weight: o.mhs.base_weight,
        weight_steps: o
            .mhs
            .w
            .steps()
            .iter()
            .map(|(r, s)| RatStepDto { index: *r, basis: rat_matrix_to_dto(s.basis()) })
            .collect(),
        hodge_steps: o
            .mhs
            .f
            .steps()
            .iter()
            .map(|(p, s)| GaussStepDto { index: *p, basis: gauss_matrix_to_dto(s.basis()) })
            .collect(),
        site: SiteDto {
            u_labels: o.site.u_labels.iter().cloned().collect(),
            d_labels: o.site.d_labels.iter().cloned().collect(),
        },
        z_ops: o
            .stored_z_ops()
            .iter()
            .map(|(l, m)| (l.clone(), gauss_matrix_to_dto(m)))
            .collect(),
        w_ops: o
            .stored_w_ops()
            .iter()
            .map(|(l, m)| (l.clone(), gauss_matrix_to_dto(m)))
            .collect(),
    }
}

fn object_from_dto(name: &str, d: &ObjectDto) -> Result<GMHSObject> {
    let named = |e: Error| Error::input(format!("object '{name}': {e}"));
    let mut wsteps = BTreeMap::new();
    for step in &d.weight_steps {
        let m = rat_matrix_from_dto(&step.basis).map_err(named)?;
        if m.cols() != d.dim {
            return Err(Error::input(format!(
                "object '{name}': weight step {} basis has {} columns, expected {}",
                step.index,
                m.cols(),
                d.dim
            )));
        }
        wsteps.insert(step.index, Subspace::from_matrix_rows(d.dim, &m));
    }
    let mut fsteps = BTreeMap::new();
    for step in &d.hodge_steps {
        let m = gauss_matrix_from_dto(&step.basis).map_err(named)?;
        if m.cols() != d.dim {
            return Err(Error::input(format!(
                "object '{name}': hodge step {} basis has {} columns, expected {}",
                step.index,
                m.cols(),
                d.dim
            )));
        }
        fsteps.insert(step.index, Subspace::from_matrix_rows(d.dim, &m));
    }
    let w = WeightFiltration::new(d.dim, wsteps).map_err(named)?;
    let f = HodgeFiltration::new(d.dim, fsteps).map_err(named)?;
    let mhs = MHSObject::new(d.dim, d.base_weight, w, f).map_err(named)?;
    let site = SiteDescriptor::new(
        d.site.u_labels.iter().cloned().collect(),
        d.site.d_labels.iter().cloned().collect(),
    )
    .map_err(named)?;
    let mut z_ops = BTreeMap::new();
    for (l, m) in &d.z_ops {
        z_ops.insert(l.clone(), gauss_matrix_from_dto(m).map_err(named)?);
    }
    let mut w_ops = BTreeMap::new();
    for (l, m) in &d.w_ops {
        w_ops.insert(l.clone(), gauss_matrix_from_dto(m).map_err(named)?);
    }
    GMHSObject::new(mhs, site, z_ops, w_ops).map_err(named)
}

// ---------------------------------------------------------------------------
// Morphisms, correspondences
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
struct PairingDto {
    x_kind: String,
    x_label: String,
    y_kind: String,
    y_label: String,
}

fn kind_to_str(k: LabelKind) -> String {
    k.as_str().to_string()
}

fn kind_from_str(s: &str) -> Result<LabelKind> {
    match s {
        "z" => Ok(LabelKind::Z),
        "w" => Ok(LabelKind::W),
        other => Err(Error::input(format!("unknown label kind '{other}' (expected 'z' or 'w')"))),
    }
}

fn corr_to_dto(c: &LabelCorrespondence) -> Vec<PairingDto> {
    c.pairings
        .iter()
        .map(|p| PairingDto {
            x_kind: kind_to_str(p.x_kind),
            x_label: p.x_label.clone(),
            y_kind: kind_to_str(p.y_kind),
            y_label: p.y_label.clone(),
        })
        .collect()
}

fn corr_from_dto(d: &[PairingDto]) -> Result<LabelCorrespondence> {
    let mut pairings = BTreeSet::new();
    for p in d {
        pairings.insert(Pairing {
            x_kind: kind_from_str(&p.x_kind)?,
            x_label: p.x_label.clone(),
            y_kind: kind_from_str(&p.y_kind)?,
            y_label: p.y_label.clone(),
        });
    }
    Ok(LabelCorrespondence { pairings })
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
struct MorphismDto {
    source: String,
    target: String,
    matrix: RatMatrixDto,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    corr: Vec<PairingDto>,
}

// ---------------------------------------------------------------------------
// Strata, extensions, roofs, certificates
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
struct CohomologyDto {
    stratum: Vec<String>,
    degree: i64,
    dim: usize,
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
struct GysinDto {
    source: Vec<String>,
    target: Vec<String>,
    degree: i64,
    matrix: RatMatrixDto,
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
struct StrataDto {
    index_set: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    cohomology: Vec<CohomologyDto>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    gysin: Vec<GysinDto>,
}

fn strata_to_dto(s: &StrataData) -> StrataDto {
    StrataDto {
        index_set: s.index_set.iter().cloned().collect(),
        cohomology: s
            .cohomology_dims
            .iter()
            .map(|((k, n), d)| CohomologyDto { stratum: k.clone(), degree: *n, dim: *d })
            .collect(),
        gysin: s
            .gysin
            .iter()
            .map(|((k, l, n), m)| GysinDto {
                source: k.clone(),
                target: l.clone(),
                degree: *n,
                matrix: rat_matrix_to_dto(m),
            })
            .collect(),
    }
}

fn strata_from_dto(name: &str, d: &StrataDto) -> Result<StrataData> {
    let mut s = StrataData::new(d.index_set.iter().cloned().collect());
    for c in &d.cohomology {
        let stratum: Vec<String> = {
            let set: BTreeSet<String> = c.stratum.iter().cloned().collect();
            set.into_iter().collect()
        };
        for l in &stratum {
            if !s.index_set.contains(l) {
                return Err(Error::input(format!(
                    "strata '{name}': stratum label '{l}' not in the index set"
                )));
            }
        }
        s.cohomology_dims.insert((stratum, c.degree), c.dim);
    }
    for g in &d.gysin {
        let src: Vec<String> = {
            let set: BTreeSet<String> = g.source.iter().cloned().collect();
            set.into_iter().collect()
        };
        let tgt: Vec<String> = {
            let set: BTreeSet<String> = g.target.iter().cloned().collect();
            set.into_iter().collect()
        };
        for l in src.iter().chain(tgt.iter()) {
            if !s.index_set.contains(l) {
                return Err(Error::input(format!(
                    "strata '{name}': gysin label '{l}' not in the index set"
                )));
            }
        }
        s.gysin.insert((src, tgt, g.degree), rat_matrix_from_dto(&g.matrix)?);
    }
    Ok(s)
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
struct ExtensionDto {
    /// Names of the objects, head to tail.
    objects: Vec<String>,
    /// Names of the connecting morphisms, one fewer than objects.
    maps: Vec<String>,
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
struct RoofDto {
    /// Name of the middle extension.
    middle: String,
    /// Names of the ladder maps up to E, one per middle object.
    up_maps: Vec<String>,
    /// Names of the ladder maps down to E′, one per middle object.
    down_maps: Vec<String>,
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
struct EquationDto {
    name: String,
    statement: String,
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(deny_unknown_fields)]
struct CertificateDto {
    c1: String,
    c2: String,
    equations: Vec<EquationDto>,
}

// ---------------------------------------------------------------------------
// Top-level wire form
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize, Clone, PartialEq, Debug, Default)]
#[serde(deny_unknown_fields)]
struct ScenarioDto {
    version: u32,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    objects: BTreeMap<String, ObjectDto>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    morphisms: BTreeMap<String, MorphismDto>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    strata: BTreeMap<String, StrataDto>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    extensions: BTreeMap<String, ExtensionDto>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    roofs: BTreeMap<String, RoofDto>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    correspondences: BTreeMap<String, Vec<PairingDto>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    certificates: BTreeMap<String, CertificateDto>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    params: BTreeMap<String, BTreeMap<String, String>>,
}

fn scenario_to_dto(s: &ScenarioFile) -> ScenarioDto {
    ScenarioDto {
        version: SCENARIO_VERSION,
        objects: s.objects.iter().map(|(n, o)| (n.clone(), object_to_dto(o))).collect(),
        morphisms: s
            .morphisms
            .iter()
            .map(|(n, f)| {
                let source = s
                    .objects
                    .iter()
                    .find(|(_, o)| **o == f.source)
                    .map(|(n, _)| n.clone())
                    .unwrap_or_default();
                let target = s
                    .objects
                    .iter()
                    .find(|(_, o)| **o == f.target)
                    .map(|(n, _)| n.clone())
                    .unwrap_or_default();
                (
                    n.clone(),
                    MorphismDto {
                        source,
                        target,
                        matrix: rat_matrix_to_dto(&f.matrix),
                        corr: corr_to_dto(&f.corr),
                    },
                )
            })
            .collect(),
        strata: s.strata.iter().map(|(n, t)| (n.clone(), strata_to_dto(t))).collect(),
        extensions: s
            .extensions
            .iter()
            .map(|(n, e)| {
                let objects = e
                    .objects
                    .iter()
                    .map(|o| {
                        s.objects
                            .iter()
                            .find(|(_, v)| *v == o)
                            .map(|(n, _)| n.clone())
                            .unwrap_or_default()
                    })
                    .collect();
                let maps = e
                    .maps
                    .iter()
                    .map(|f| {
                        s.morphisms
                            .iter()
                            .find(|(_, v)| *v == f)
                            .map(|(n, _)| n.clone())
                            .unwrap_or_default()
                    })
                    .collect();
                (n.clone(), ExtensionDto { objects, maps })
            })
            .collect(),
        roofs: s
            .roofs
            .iter()
            .map(|(n, r)| {
                let middle = s
                    .extensions
                    .iter()
                    .find(|(_, e)| **e == r.middle)
                    .map(|(n, _)| n.clone())
                    .unwrap_or_default();
                let find_map = |f: &GMHSMorphism| {
                    s.morphisms
                        .iter()
                        .find(|(_, v)| *v == f)
                        .map(|(n, _)| n.clone())
                        .unwrap_or_default()
                };
                (
                    n.clone(),
                    RoofDto {
                        middle,
                        up_maps: r.up_maps.iter().map(find_map).collect(),
                        down_maps: r.down_maps.iter().map(find_map).collect(),
                    },
                )
            })
            .collect(),
        correspondences: s
            .correspondences
            .iter()
            .map(|(n, c)| (n.clone(), corr_to_dto(c)))
            .collect(),
        certificates: s
            .certificates
            .iter()
            .map(|(n, c)| {
                (
                    n.clone(),
                    CertificateDto {
                        c1: rat_to_string(&c.c1),
                        c2: rat_to_string(&c.c2),
                        equations: c
                            .equations
                            .iter()
                            .map(|e| EquationDto {
                                name: e.name.clone(),
                                statement: e.statement.clone(),
                            })
                            .collect(),
                    },
                )
            })
            .collect(),
        params: s
            .params
            .iter()
            .map(|(n, m)| {
                (n.clone(), m.iter().map(|(k, v)| (k.clone(), rat_to_string(v))).collect())
            })
            .collect(),
    }
}

fn scenario_from_dto(dto: &ScenarioDto) -> Result<ScenarioFile> {
    if dto.version != SCENARIO_VERSION {
        return Err(Error::input(format!(
            "unsupported scenario version {} (this build reads version {SCENARIO_VERSION})",
            dto.version
        )));
    }
    let mut s = ScenarioFile::new();
    for (name, od) in &dto.objects {
        s.objects.insert(name.clone(), object_from_dto(name, od)?);
    }
    for (name, md) in &dto.morphisms {
        let source = s
            .objects
            .get(&md.source)
            .ok_or_else(|| {
                Error::input(format!("morphism '{name}': unknown source object '{}'", md.source))
            })?
            .clone();
        let target = s
            .objects
            .get(&md.target)
            .ok_or_else(|| {
                Error::input(format!("morphism '{name}': unknown target object '{}'", md.target))
            })?
            .clone();
        let matrix = rat_matrix_from_dto(&md.matrix)
            .map_err(|e| Error::input(format!("morphism '{name}': {e}")))?;
        let corr = corr_from_dto(&md.corr)
            .map_err(|e| Error::input(format!("morphism '{name}': {e}")))?;
        let f = GMHSMorphism::new(source, target, matrix, corr)
            .map_err(|e| Error::input(format!("morphism '{name}': {e}")))?;
        s.morphisms.insert(name.clone(), f);
    }
    for (name, td) in &dto.strata {
        s.strata.insert(name.clone(), strata_from_dto(name, td)?);
    }
    for (name, ed) in &dto.extensions {
        let objects: Result<Vec<GMHSObject>> = ed
            .objects
            .iter()
            .map(|n| {
                s.objects.get(n).cloned().ok_or_else(|| {
                    Error::input(format!("extension '{name}': unknown object '{n}'"))
                })
            })
            .collect();
        let maps: Result<Vec<GMHSMorphism>> = ed
            .maps
            .iter()
            .map(|n| {
                s.morphisms.get(n).cloned().ok_or_else(|| {
                    Error::input(format!("extension '{name}': unknown morphism '{n}'"))
                })
            })
            .collect();
        let e = YonedaExt::new(objects?, maps?)
            .map_err(|e| Error::input(format!("extension '{name}': {e}")))?;
        s.extensions.insert(name.clone(), e);
    }
    for (name, rd) in &dto.roofs {
        let middle = s
            .extensions
            .get(&rd.middle)
            .cloned()
            .ok_or_else(|| {
                Error::input(format!("roof '{name}': unknown middle extension '{}'", rd.middle))
            })?;
        let resolve = |names: &[String], side: &str| -> Result<Vec<GMHSMorphism>> {
            names
                .iter()
                .map(|n| {
                    s.morphisms.get(n).cloned().ok_or_else(|| {
                        Error::input(format!("roof '{name}': unknown {side} morphism '{n}'"))
                    })
                })
                .collect()
        };
        let up_maps = resolve(&rd.up_maps, "up")?;
        let down_maps = resolve(&rd.down_maps, "down")?;
        s.roofs.insert(name.clone(), Roof { middle, up_maps, down_maps });
    }
    for (name, cd) in &dto.correspondences {
        let c = corr_from_dto(cd)
            .map_err(|e| Error::input(format!("correspondence '{name}': {e}")))?;
        s.correspondences.insert(name.clone(), c);
    }
    for (name, cd) in &dto.certificates {
        let named = |e: Error| Error::input(format!("certificate '{name}': {e}"));
        s.certificates.insert(
            name.clone(),
            ObstructionCertificate {
                c1: rat_from_string(&cd.c1).map_err(named)?,
                c2: rat_from_string(&cd.c2).map_err(named)?,
                equations: cd
                    .equations
                    .iter()
                    .map(|e| CertificateEquation {
                        name: e.name.clone(),
                        statement: e.statement.clone(),
                    })
                    .collect(),
            },
        );
    }
    for (name, pd) in &dto.params {
        let mut m = BTreeMap::new();
        for (k, v) in pd {
            let r = rat_from_string(v)
                .map_err(|e| Error::input(format!("params '{name}.{k}': {e}")))?;
            m.insert(k.clone(), r);
        }
        s.params.insert(name.clone(), m);
    }
    Ok(s)
}

// ---------------------------------------------------------------------------
// load / save
// ---------------------------------------------------------------------------

/// Parses and resolves a scenario without running the semantic validators.
/// Structural invariants (shapes, name resolution, label membership) are
/// still enforced. Used by the validate command to report all failures.
pub fn load_unchecked(path: &Path) -> Result<ScenarioFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::input(format!("cannot read '{}': {e}", path.display())))?;
    from_json(&text)
}

/// Loads and fully validates a scenario; errors name the failing element
/// and invariant.
pub fn load(path: &Path) -> Result<ScenarioFile> {
    let s = load_unchecked(path)?;
    let rep = s.validation_report();
    if let Some(check) = rep.first_failure() {
        return Err(Error::validation(format!("{}: {}", check.name, check.detail)));
    }
    Ok(s)
}

/// Serializes deterministically: sorted keys, reduced rationals, trailing
/// newline; byte-identical output for equal scenarios.
pub fn save(s: &ScenarioFile, path: &Path) -> Result<()> {
    std::fs::write(path, to_json(s))
        .map_err(|e| Error::input(format!("cannot write '{}': {e}", path.display())))
}

/// The canonical JSON text of a scenario (what [`save`] writes).
pub fn to_json(s: &ScenarioFile) -> String {
    let dto = scenario_to_dto(s);
    let value = serde_json::to_value(&dto).expect("scenario DTOs serialize infallibly");
    let mut text = serde_json::to_string_pretty(&value).expect("values render infallibly");
    text.push('\n');
    text
}

/// Parses scenario JSON (structural checks only, as [`load_unchecked`]).
pub fn from_json(text: &str) -> Result<ScenarioFile> {
    let dto: ScenarioDto = serde_json::from_str(text)
        .map_err(|e| Error::input(format!("scenario parse error: {e}")))?;
    scenario_from_dto(&dto)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::example33::{self, Example33Params};
    use crate::ext::split_2ext;
    use crate::linalg::rat;

    fn example_scenario() -> ScenarioFile {
        let params = Example33Params::new(rat(1, 1), rat(2, 1));
        let e = example33::build_example33(&params).expect("builds");
        let mut s = ScenarioFile::new();
        s.objects.insert("S".into(), e.objects[0].clone());
        s.objects.insert("T".into(), e.objects[1].clone());
        s.objects.insert("V".into(), e.objects[2].clone());
        s.objects.insert("QM".into(), e.objects[3].clone());
        s.morphisms.insert("i".into(), e.maps[0].clone());
        s.morphisms.insert("j".into(), e.maps[1].clone());
        s.morphisms.insert("k".into(), e.maps[2].clone());
        s.extensions.insert("E".into(), e);
        s.params.insert(
            "example33".into(),
            [("c1".into(), rat(1, 1)), ("c2".into(), rat(2, 1))].into_iter().collect(),
        );
        s
    }

    #[test]
    fn empty_scenario_round_trips() {
        let s = ScenarioFile::new();
        let text = to_json(&s);
        assert_eq!(text, "{\n  \"version\": 1\n}\n");
        let back = from_json(&text).expect("parses");
        assert_eq!(back, s);
        assert!(back.validation_report().passed());
    }

    #[test]
    fn rationals_serialize_reduced_and_parse_back() {
        assert_eq!(rat_to_string(&rat(2, 4)), "1/2");
        assert_eq!(rat_to_string(&rat(-6, 3)), "-2");
        assert_eq!(rat_from_string("2/4").expect("parses"), rat(1, 2));
        assert_eq!(rat_from_string(" -7 ").expect("parses"), rat(-7, 1));
        assert!(rat_from_string("1/0").is_err());
        assert!(rat_from_string("a/b").is_err());
        let text = to_json(&example_scenario());
        assert!(!text.contains("2/4"));
    }

    #[test]
    fn example_scenario_round_trips_exactly() {
        let s = example_scenario();
        let text = to_json(&s);
        let back = from_json(&text).expect("parses");
        assert_eq!(back, s);
        assert_eq!(to_json(&back), text, "save∘load∘save must be byte-identical");
        assert!(s.validation_report().passed(), "shipped example data validates");
    }

    #[test]
    fn roofs_and_certificates_round_trip() {
        let params = Example33Params::new(rat(3, 1), rat(3, 1));
        let roof = example33::witness_primary(&params).expect("witness builds");
        let mut s = ScenarioFile::new();
        s.insert_roof("witness", &roof);
        let cert = match example33::classify_example33(&Example33Params::new(rat(1, 1), rat(2, 1)))
            .expect("classifies")
        {
            example33::Classification::NonTrivial(c) => c,
            other => panic!("expected NonTrivial, got {other:?}"),
        };
        s.certificates.insert("obstruction".into(), cert);
        let text = to_json(&s);
        let back = from_json(&text).expect("parses");
        assert_eq!(back, s);
        assert_eq!(to_json(&back), text);
    }

    #[test]
    fn loader_rejects_noninvolutive_z_naming_the_label() {
        use crate::linalg::gauss_i;
        // A z-operator [[1,0],[1,1]] squares to a non-identity unipotent.
        let v = example33::v_object(&rat(1, 1), &rat(2, 1));
        let mut z_ops = v.stored_z_ops().clone();
        z_ops.insert(
            "D1".into(),
            Matrix::from_rows(vec![
                vec![gauss_i(1, 0), gauss_i(0, 0)],
                vec![gauss_i(1, 0), gauss_i(1, 0)],
            ])
            .expect("2×2 literal"),
        );
        let bad = GMHSObject::new(v.mhs.clone(), v.site.clone(), z_ops, v.stored_w_ops().clone())
            .expect("shapes are fine; involutivity is the validator's job");
        let mut s = ScenarioFile::new();
        s.objects.insert("V".into(), bad);
        let text = to_json(&s);
        let parsed = from_json(&text).expect("still parses structurally");
        let rep = parsed.validation_report();
        assert!(!rep.passed());
        let failure = rep.first_failure().expect("has failure");
        assert!(failure.name.contains("'V'"), "failure names the object: {}", failure.name);
        assert!(failure.detail.contains("z[D1]"), "failure names the label: {}", failure.detail);

        let dir = tempfile::tempdir().expect("tempdir");
        let path = dir.path().join("bad.json");
        save(&s, &path).expect("saves");
        let err = load(&path).expect_err("full load rejects the file");
        assert!(err.to_string().contains("z[D1]"), "load error names the label: {err}");
    }

    #[test]
    fn load_save_round_trip_on_disk() {
        let dir = tempfile::tempdir().expect("tempdir");
        let path = dir.path().join("scenario.json");
        let mut s = example_scenario();
        let split = split_2ext(&example33::s_object(), &example33::qm_object()).expect("splits");
        s.insert_extension("Esplit", &split);
        save(&s, &path).expect("saves");
        let first = std::fs::read(&path).expect("reads");
        let loaded = load(&path).expect("loads and validates");
        assert_eq!(loaded, s);
        save(&loaded, &path).expect("saves again");
        let second = std::fs::read(&path).expect("reads");
        assert_eq!(first, second, "byte-deterministic save");
    }

    #[test]
    fn unknown_names_and_versions_are_input_errors() {
        let missing = r#"{ "version": 1, "extensions": { "E": { "objects": ["A","B","C"], "maps": ["f","g"] } } }"#;
        let err = from_json(missing).expect_err("unknown object name");
        assert!(err.to_string().contains("unknown object 'A'"), "got: {err}");
        let future = r#"{ "version": 2 }"#;
        let err = from_json(future).expect_err("future version");
        assert!(err.to_string().contains("unsupported scenario version"), "got: {err}");
        let garbage = "{ not json";
        let err = from_json(garbage).expect_err("parse error");
        assert!(err.to_string().contains("parse error"), "got: {err}");
        let unknown_field = r#"{ "version": 1, "bogus": {} }"#;
        assert!(from_json(unknown_field).is_err(), "unknown top-level fields rejected");
    }
}
