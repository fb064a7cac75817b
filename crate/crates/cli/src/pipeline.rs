//! Stage-by-stage computation with memoized results and per-stage timing.

use std::cell::{OnceCell, RefCell};
use std::time::Instant;

use num_bigint::BigInt;
use tilehull_core::abgrp::matrix_in_generators;
use tilehull_core::apx::{self, CWComplex2, CohomologyResult, InducedMaps};
use tilehull_core::collar::{census_with, CensusOptions, CollaredSystem};
use tilehull_core::cone::{assemble_hull, find_symmetric_centers, HullCohomology, SymmetricCenter};
use tilehull_core::intlin::IntVector;
use tilehull_core::limit::{
    analyze_limit, limit_of, stabilize_kernel, LimitAnalysis, LimitGroup, PresentedEndo, Stabilized,
};
use tilehull_core::tiling::SubstitutionSystem;

use crate::fixtures::load_fixtures;

#[derive(Clone, Debug)]
pub struct Config {
    /// Name shown in reports: a built-in name or a file path.
    pub system_name: String,
    pub system: SubstitutionSystem,
    pub power: u32,
    pub seed_level: u32,
    /// Express the degree-two map in the embedded tile-value generators.
    pub paper_generators: bool,
}

impl Config {
    pub fn builtin(name: &str) -> Result<Config, crate::system_file::SystemError> {
        Ok(Config {
            system_name: name.into(),
            system: crate::system_file::builtin(name)?,
            power: 1,
            seed_level: CensusOptions::default().seed_level,
            paper_generators: false,
        })
    }
}

#[derive(Debug)]
pub enum PipelineError {
    /// Bad flags or inputs.
    Input(String),
    /// A computation failed or left the supported regime.
    Computation(String),
}

impl std::fmt::Display for PipelineError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PipelineError::Input(m) => write!(f, "input error: {m}"),
            PipelineError::Computation(m) => write!(f, "computation error: {m}"),
        }
    }
}

impl std::error::Error for PipelineError {}

fn comp(stage: &str) -> impl Fn(tilehull_core::Error) -> PipelineError + '_ {
    move |e| PipelineError::Computation(format!("{stage}: {e}"))
}

pub type Stage<T> = Result<T, PipelineError>;

#[derive(Clone, Debug)]
pub struct Limits {
    pub h0: LimitGroup,
    pub h1: LimitGroup,
    pub h2: LimitGroup,
    pub stabilized: Stabilized,
    pub analysis: LimitAnalysis,
}

pub struct Pipeline {
    pub config: Config,
    system: OnceCell<SubstitutionSystem>,
    census: OnceCell<CollaredSystem>,
    complex: OnceCell<CWComplex2>,
    cohomology: OnceCell<CohomologyResult>,
    maps: OnceCell<InducedMaps>,
    a2_endo: OnceCell<PresentedEndo>,
    limits: OnceCell<Limits>,
    centers: OnceCell<Vec<SymmetricCenter>>,
    timing: RefCell<Vec<(String, f64)>>,
}

fn cached<'a, T>(
    cell: &'a OnceCell<T>,
    timing: &RefCell<Vec<(String, f64)>>,
    name: &str,
    f: impl FnOnce() -> Stage<T>,
) -> Stage<&'a T> {
    if let Some(v) = cell.get() {
        return Ok(v);
    }
    let t = Instant::now();
    let v = f()?;
    timing.borrow_mut().push((name.into(), t.elapsed().as_secs_f64()));
    Ok(cell.get_or_init(|| v))
}

/// Label of the `i`-th tile value of the embedded generators: kites, then
/// left rectangles, then right rectangles, each numbered from 1.
pub fn generator_label(i: usize, by_base: &[(String, usize)]) -> Option<String> {
    let mut offset = 0;
    for (name, n) in by_base {
        if i < offset + n {
            return Some(format!("{name}{}", i - offset + 1));
        }
        offset += n;
    }
    None
}

impl Pipeline {
    pub fn new(config: Config) -> Pipeline {
        Pipeline {
            config,
            system: OnceCell::new(),
            census: OnceCell::new(),
            complex: OnceCell::new(),
            cohomology: OnceCell::new(),
            maps: OnceCell::new(),
            a2_endo: OnceCell::new(),
            limits: OnceCell::new(),
            centers: OnceCell::new(),
            timing: RefCell::new(Vec::new()),
        }
    }

    pub fn timing(&self) -> Vec<(String, f64)> {
        self.timing.borrow().clone()
    }

    /// The base system raised to the configured power.
    pub fn system(&self) -> Stage<&SubstitutionSystem> {
        cached(&self.system, &self.timing, "power", || {
            if self.config.power == 1 {
                Ok(self.config.system.clone())
            } else {
                self.config
                    .system
                    .power(self.config.power)
                    .map_err(|e| PipelineError::Input(format!("--power: {e}")))
            }
        })
    }

    pub fn census(&self) -> Stage<&CollaredSystem> {
        let s = self.system()?;
        cached(&self.census, &self.timing, "census", || {
            let opts = CensusOptions {
                seed_level: self.config.seed_level,
                ..CensusOptions::default()
            };
            census_with(s, &opts).map_err(comp("census"))
        })
    }

    pub fn complex(&self) -> Stage<&CWComplex2> {
        let cs = self.census()?;
        cached(&self.complex, &self.timing, "complex", || {
            apx::build_complex(cs).map_err(comp("complex"))
        })
    }

    pub fn cohomology(&self) -> Stage<&CohomologyResult> {
        let cw = self.complex()?;
        cached(&self.cohomology, &self.timing, "cohomology", || {
            apx::cohomology(cw).map_err(comp("cohomology"))
        })
    }

    pub fn maps(&self) -> Stage<&InducedMaps> {
        let (cs, cw, coh) = (self.census()?, self.complex()?, self.cohomology()?);
        cached(&self.maps, &self.timing, "induced", || {
            apx::induced_maps(cs, cw, coh).map_err(comp("induced maps"))
        })
    }

    /// The degree-two map as a presented endomorphism, in the computed
    /// generators or, with `paper_generators`, in the embedded ones.
    pub fn a2_endo(&self) -> Stage<&PresentedEndo> {
        let maps = self.maps()?;
        cached(&self.a2_endo, &self.timing, "a2-basis", || {
            if !self.config.paper_generators {
                return PresentedEndo::from_hom(&maps.a2).map_err(comp("degree-two map"));
            }
            let (cs, cw) = (self.census()?, self.complex()?);
            let fx = load_fixtures().map_err(|e| PipelineError::Computation(e.to_string()))?;
            let names = cs.base().prototiles().iter().map(|p| p.label.clone());
            let by_base: Vec<(String, usize)> = names.zip(cs.family_counts()).collect();
            let mut basis: Vec<IntVector> = Vec::new();
            for (g, v) in fx.generators.iter().enumerate() {
                if v.len() != cs.len() {
                    return Err(PipelineError::Input(format!(
                        "--paper-generators: vectors have {} entries but the census has {} tiles",
                        v.len(),
                        cs.len()
                    )));
                }
                let mut values = vec![BigInt::from(0); cs.len()];
                for (i, x) in v.iter().enumerate() {
                    let label = generator_label(i, &by_base)
                        .ok_or_else(|| PipelineError::Input("--paper-generators: census shape differs".into()))?;
                    let k = cs.index_of(&label).ok_or_else(|| {
                        PipelineError::Input(format!("--paper-generators: no collared tile {label}"))
                    })?;
                    values[k] = x.clone();
                }
                let c = apx::cochain_from_tile_values(cw, &values).ok_or_else(|| {
                    PipelineError::Computation(format!("generator {}: values not divisible by face weights", g + 1))
                })?;
                basis.push(c);
            }
            let h2 = &self.cohomology()?.h2;
            let orders: Vec<BigInt> = (0..basis.len())
                .map(|i| if i + 1 == basis.len() { BigInt::from(2) } else { BigInt::from(0) })
                .collect();
            let free = orders.iter().filter(|d| **d == BigInt::from(0)).count();
            if h2.free_rank() != free || h2.torsion() != [BigInt::from(2)] {
                return Err(PipelineError::Computation(
                    "--paper-generators: H2 of this complex is not Z^18 + Z_2".into(),
                ));
            }
            let m = matrix_in_generators(&maps.a2, &basis, &orders).map_err(|e| {
                PipelineError::Computation(format!(
                    "--paper-generators: the embedded vectors, read with this census's tile labels, \
                     are not a basis of H2 ({e})"
                ))
            })?;
            PresentedEndo::new(free, vec![BigInt::from(2)], m).map_err(comp("degree-two map"))
        })
    }

    pub fn limits(&self) -> Stage<&Limits> {
        let maps = self.maps()?;
        let e = self.a2_endo()?;
        cached(&self.limits, &self.timing, "limits", || {
            let stabilized = stabilize_kernel(e).map_err(comp("kernel stabilization"))?;
            let analysis = analyze_limit(&stabilized.endo).map_err(comp("limit"))?;
            Ok(Limits {
                h0: limit_of(&maps.a0).map_err(comp("degree-zero limit"))?,
                h1: limit_of(&maps.a1).map_err(comp("degree-one limit"))?,
                h2: analysis.limit.clone(),
                stabilized,
                analysis,
            })
        })
    }

    pub fn centers(&self) -> Stage<&Vec<SymmetricCenter>> {
        let cs = self.census()?;
        cached(&self.centers, &self.timing, "singularities", || {
            find_symmetric_centers(cs).map_err(comp("singularities"))
        })
    }

    pub fn singularity_count(&self) -> Stage<usize> {
        Ok(self.centers()?.iter().filter(|c| c.is_periodic()).count())
    }

    /// Hull cohomology from the computed quotient limits.
    pub fn hull(&self) -> Stage<HullCohomology> {
        let l = self.limits()?;
        let c = self.singularity_count()?;
        assemble_hull(&[l.h0.clone(), l.h1.clone(), l.h2.clone()], c).map_err(comp("hull"))
    }

    /// Hull cohomology with degree two of the quotient taken from the limit of
    /// the embedded reference matrix instead of the computed one.
    pub fn hull_with_fixture_h2(&self) -> Stage<(HullCohomology, LimitGroup)> {
        let l = self.limits()?;
        let c = self.singularity_count()?;
        let h2 = fixture_h2_limit()?;
        let hull = assemble_hull(&[l.h0.clone(), l.h1.clone(), h2.clone()], c).map_err(comp("hull"))?;
        Ok((hull, h2))
    }
}

/// Limit of the embedded degree-two matrix, classified by this crate.
pub fn fixture_h2_limit() -> Stage<LimitGroup> {
    let fx = load_fixtures().map_err(|e| PipelineError::Computation(e.to_string()))?;
    let e = PresentedEndo::new(18, vec![BigInt::from(2)], fx.a2_star).map_err(comp("fixture"))?;
    let st = stabilize_kernel(&e).map_err(comp("fixture"))?;
    Ok(analyze_limit(&st.endo).map_err(comp("fixture"))?.limit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_of_generator_entries() {
        let by_base = vec![("K".to_string(), 31), ("L".to_string(), 26), ("R".to_string(), 26)];
        assert_eq!(generator_label(0, &by_base).unwrap(), "K1");
        assert_eq!(generator_label(30, &by_base).unwrap(), "K31");
        assert_eq!(generator_label(31, &by_base).unwrap(), "L1");
        assert_eq!(generator_label(82, &by_base).unwrap(), "R26");
        assert!(generator_label(83, &by_base).is_none());
    }

    #[test]
    fn toy_pipeline() {
        let p = Pipeline::new(Config::builtin("toy").unwrap());
        assert_eq!(p.census().unwrap().len(), 1);
        let l = p.limits().unwrap();
        assert_eq!(l.h0, LimitGroup::exact(&[], 1, &[]));
        assert_eq!(l.h1, LimitGroup::exact(&[(2, 2)], 0, &[]));
        assert_eq!(l.h2, LimitGroup::exact(&[(4, 1)], 0, &[]));
        assert!(p.centers().unwrap().is_empty());
        assert!(p.hull().is_err());
        assert!(p.timing().iter().any(|(s, _)| s == "census"));
    }
}
