//! The JSON report assembled from pipeline stages.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use tilehull_core::intlin::{characteristic_polynomial, integer_roots};
use tilehull_core::limit::TorsionSplit;

use crate::dto::{bigs, Big, GroupDto, LimitGroupDto, MatrixDto};
use crate::pipeline::{Pipeline, Stage};
use crate::svg;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub system: String,
    pub power: u32,
    pub seed_level: u32,
    pub paper_generators: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollaredEntry {
    pub label: String,
    pub base: String,
    pub corona_size: usize,
    pub symmetric: bool,
    pub children: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub total: usize,
    pub by_base: BTreeMap<String, usize>,
    pub tiles: Vec<CollaredEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceEntry {
    pub label: String,
    pub weight: usize,
    /// Edges around the face with orientation signs.
    pub boundary: Vec<(usize, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexReport {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler_characteristic: i64,
    pub coboundaries_compose_to_zero: bool,
    pub folds: usize,
    pub face_list: Vec<FaceEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub h0: GroupDto,
    pub h1: GroupDto,
    pub h2: GroupDto,
    /// Tile pairs `(a, b)` with `t_a − 2·t_b` a torsion class.
    pub torsion_representatives: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InducedReport {
    /// `computed` or `embedded`.
    pub basis: String,
    pub a0: MatrixDto,
    pub a1: MatrixDto,
    pub a2: MatrixDto,
    pub a0_identity: bool,
    pub a1_identity: bool,
    /// Coefficients of `det(x·I − A2)`, constant term first.
    pub a2_characteristic_polynomial: Vec<Big>,
    pub a2_integer_roots: Vec<(Big, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenspaceDto {
    pub value: Big,
    pub basis: Vec<Vec<Big>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitsReport {
    pub h0: LimitGroupDto,
    pub h1: LimitGroupDto,
    pub h2: LimitGroupDto,
    pub stabilization_steps: u32,
    pub stabilized: GroupDto,
    pub stabilized_matrix: MatrixDto,
    pub split_free: Vec<usize>,
    pub core: MatrixDto,
    pub eigenvalues: Vec<(Big, usize)>,
    pub eigenspaces: Vec<EigenspaceDto>,
    pub saturation_index: Big,
    pub torsion_split: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CenterReport {
    pub kind: String,
    pub labels: Vec<String>,
    pub orbit: Vec<usize>,
    pub period: Option<usize>,
    pub svg: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HullReport {
    /// `computed`, or `embedded` when degree two of the quotient came from
    /// the embedded reference matrix.
    pub degree_two_source: String,
    pub singularity_count: usize,
    pub h0: LimitGroupDto,
    pub h1: LimitGroupDto,
    pub h2: LimitGroupDto,
    pub h3: LimitGroupDto,
    pub e11: LimitGroupDto,
    pub e20: LimitGroupDto,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub config: ConfigEcho,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub census: Option<CensusReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex: Option<ComplexReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cohomology: Option<CohomologyReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub induced: Option<InducedReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limits: Option<LimitsReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub singularities: Option<Vec<CenterReport>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hull: Option<HullReport>,
    /// Seconds per stage.
    #[serde(default)]
    pub timing: Vec<(String, f64)>,
}

impl PipelineReport {
    pub fn new(p: &Pipeline) -> PipelineReport {
        PipelineReport {
            config: ConfigEcho {
                system: p.config.system_name.clone(),
                power: p.config.power,
                seed_level: p.config.seed_level,
                paper_generators: p.config.paper_generators,
            },
            census: None,
            complex: None,
            cohomology: None,
            induced: None,
            limits: None,
            singularities: None,
            hull: None,
            timing: Vec::new(),
        }
    }

    pub fn finish(mut self, p: &Pipeline) -> PipelineReport {
        self.timing = p.timing();
        self
    }

    /// Copy without timings, for determinism checks.
    pub fn without_timing(&self) -> PipelineReport {
        PipelineReport {
            timing: Vec::new(),
            ..self.clone()
        }
    }
}

pub fn census_report(p: &Pipeline) -> Stage<CensusReport> {
    let cs = p.census()?;
    let base = cs.base();
    let mut by_base = BTreeMap::new();
    for (proto, n) in base.prototiles().iter().zip(cs.family_counts()) {
        by_base.insert(proto.label.clone(), n);
    }
    let tiles = cs
        .tiles()
        .iter()
        .enumerate()
        .map(|(k, t)| CollaredEntry {
            label: t.label.clone(),
            base: base.prototile(t.base).label.clone(),
            corona_size: t.corona.len(),
            symmetric: cs.is_symmetric(k),
            children: cs.system().rule(k).iter().map(|c| cs.label(c.proto).to_string()).collect(),
        })
        .collect();
    Ok(CensusReport {
        total: cs.len(),
        by_base,
        tiles,
    })
}

pub fn complex_report(p: &Pipeline) -> Stage<ComplexReport> {
    let cs = p.census()?;
    let cw = p.complex()?;
    let zero = cw
        .delta1()
        .mul(cw.delta0())
        .map(|m| m.is_zero())
        .unwrap_or(false);
    Ok(ComplexReport {
        vertices: cw.num_vertices(),
        edges: cw.num_edges(),
        faces: cw.num_faces(),
        euler_characteristic: cw.euler_characteristic(),
        coboundaries_compose_to_zero: zero,
        folds: cw.folds().len(),
        face_list: (0..cw.num_faces())
            .map(|k| FaceEntry {
                label: cs.label(k).into(),
                weight: cw.face_weight(k),
                boundary: cw.face_word(k).to_vec(),
            })
            .collect(),
    })
}

pub fn cohomology_report(p: &Pipeline) -> Stage<CohomologyReport> {
    let cs = p.census()?;
    let coh = p.cohomology()?;
    let reps = tilehull_core::apx::torsion_representatives(p.complex()?, coh)
        .map_err(|e| crate::pipeline::PipelineError::Computation(e.to_string()))?;
    Ok(CohomologyReport {
        h0: (&coh.h0).into(),
        h1: (&coh.h1).into(),
        h2: (&coh.h2).into(),
        torsion_representatives: reps
            .into_iter()
            .map(|(a, b)| (cs.label(a).to_string(), cs.label(b).to_string()))
            .collect(),
    })
}

pub fn induced_report(p: &Pipeline) -> Stage<InducedReport> {
    let maps = p.maps()?;
    let a2 = p.a2_endo()?;
    let cp = characteristic_polynomial(&a2.matrix)
        .map_err(|e| crate::pipeline::PipelineError::Computation(e.to_string()))?;
    let bound = a2.matrix.max_abs_row_sum().max(1.into());
    Ok(InducedReport {
        basis: if p.config.paper_generators { "embedded" } else { "computed" }.into(),
        a0: maps.a0.matrix().into(),
        a1: maps.a1.matrix().into(),
        a2: (&a2.matrix).into(),
        a0_identity: maps.a0.is_identity(),
        a1_identity: maps.a1.is_identity(),
        a2_characteristic_polynomial: bigs(&cp),
        a2_integer_roots: integer_roots(&cp, &bound).iter().map(|(r, m)| (Big::from(r), *m)).collect(),
    })
}

fn split_name(t: &TorsionSplit) -> &'static str {
    match t {
        TorsionSplit::Direct => "direct",
        TorsionSplit::InvariantComplement => "invariant-complement",
        TorsionSplit::Coprime => "coprime",
    }
}

pub fn limits_report(p: &Pipeline) -> Stage<LimitsReport> {
    let l = p.limits()?;
    let a = &l.analysis;
    Ok(LimitsReport {
        h0: (&l.h0).into(),
        h1: (&l.h1).into(),
        h2: (&l.h2).into(),
        stabilization_steps: l.stabilized.steps,
        stabilized: (&l.stabilized.endo.group()).into(),
        stabilized_matrix: (&l.stabilized.endo.matrix).into(),
        split_free: a.split_free.clone(),
        core: (&a.core).into(),
        eigenvalues: a.eigenvalues.iter().map(|(v, m)| (Big::from(v), *m)).collect(),
        eigenspaces: a
            .eigenspaces
            .iter()
            .map(|(v, b)| EigenspaceDto {
                value: v.into(),
                basis: b.columns().iter().map(|c| bigs(c)).collect(),
            })
            .collect(),
        saturation_index: (&a.saturation_index).into(),
        torsion_split: a.torsion_split.as_ref().map(|t| split_name(t).into()),
    })
}

pub fn singularities_report(p: &Pipeline) -> Stage<Vec<CenterReport>> {
    let cs = p.census()?;
    Ok(p.centers()?
        .iter()
        .map(|c| CenterReport {
            kind: c.kind.name().into(),
            labels: c.labels(cs),
            orbit: c.orbit.clone(),
            period: c.period,
            svg: svg::render_collared(&c.patch, cs),
        })
        .collect())
}

/// `embedded` substitutes the reference matrix's limit in degree two.
pub fn hull_report(p: &Pipeline, embedded: bool) -> Stage<HullReport> {
    let (h, source) = if embedded {
        (p.hull_with_fixture_h2()?.0, "embedded")
    } else {
        (p.hull()?, "computed")
    };
    Ok(HullReport {
        degree_two_source: source.into(),
        singularity_count: p.singularity_count()?,
        h0: (&h.h0).into(),
        h1: (&h.h1).into(),
        h2: (&h.h2).into(),
        h3: (&h.h3).into(),
        e11: (&h.e11).into(),
        e20: (&h.e20).into(),
    })
}

