//! Collared prototiles: one class per corona occurring in the tiling.
//!
//! The census starts from the coronas of interior tiles of a few supertiles
//! and closes the set under substitution. A corona determines the coronas of
//! all children of its central tile, because every tile meeting such a child
//! is a child of a tile meeting the centre. One round of substitution is
//! therefore enough both to close the census and to read off the collared
//! substitution rule.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exact::{Motion, Polygon};
use crate::intlin::IntMatrix;
use crate::tiling::{
    corona_with_frames, substitute, Patch, PatchGeometry, Prototile, SubstitutionSystem, Tile,
};

/// A collared prototile: a base prototile together with its corona.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollaredTile {
    pub base: usize,
    pub label: String,
    /// Canonical corona; the distinguished tile is the centre.
    pub corona: Patch,
}

#[derive(Clone, Debug)]
pub struct CollaredSystem {
    base: SubstitutionSystem,
    tiles: Vec<CollaredTile>,
    system: SubstitutionSystem,
    power: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusOptions {
    /// Substitution level of the seed supertiles.
    pub seed_level: u32,
    /// Maximum number of closure rounds.
    pub budget: usize,
    /// Largest power checked for primitivity.
    pub primitivity_bound: u32,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            seed_level: 2,
            budget: 50,
            primitivity_bound: 4,
        }
    }
}

struct Registry {
    index: BTreeMap<Vec<Tile>, usize>,
    classes: Vec<(Patch, Vec<Motion>)>,
}

impl Registry {
    /// Class of a corona; `frames` are the canonical frames of its centre.
    fn insert(&mut self, corona: Patch, frames: Vec<Motion>) -> usize {
        if let Some(&k) = self.index.get(&corona.tiles) {
            return k;
        }
        let k = self.classes.len();
        self.index.insert(corona.tiles.clone(), k);
        self.classes.push((corona, frames));
        k
    }
}

/// Census with default options.
pub fn census(s: &SubstitutionSystem) -> Result<CollaredSystem> {
    census_with(s, &CensusOptions::default())
}

pub fn census_with(s: &SubstitutionSystem, opts: &CensusOptions) -> Result<CollaredSystem> {
    if s.primitivity_power(opts.primitivity_bound).is_none() {
        return Err(Error::NotPrimitive(opts.primitivity_bound as usize));
    }
    let mut reg = Registry {
        index: BTreeMap::new(),
        classes: Vec::new(),
    };
    // small seeds may have no interior tiles; go deeper until some appear
    let mut level = opts.seed_level;
    while reg.classes.is_empty() && level <= opts.seed_level + 3 {
        for p in 0..s.len() {
            let patch = substitute(&Patch::single(Tile::new(p, Motion::identity())), s, level);
            let g = PatchGeometry::new(&patch, s);
            for i in 0..patch.len() {
                if g.is_surrounded(i) {
                    let (c, f) = corona_with_frames(&patch, &g, i, s);
                    reg.insert(c, f);
                }
            }
        }
        level += 1;
    }
    if reg.classes.is_empty() {
        return Err(Error::CensusBudget {
            budget: opts.budget,
            found: 0,
        });
    }
    let mut rules: Vec<Vec<Tile>> = Vec::new();
    let mut rounds = 0;
    while rules.len() < reg.classes.len() {
        rounds += 1;
        if rounds > opts.budget {
            return Err(Error::CensusBudget {
                budget: opts.budget,
                found: reg.classes.len(),
            });
        }
        let pending = reg.classes.len();
        for k in rules.len()..pending {
            let corona = reg.classes[k].0.clone();
            let rule = expand(&corona, s, &mut reg)?;
            rules.push(rule);
        }
    }
    build(s, reg, rules)
}

/// Collared children of the centre of `corona`, registering new classes.
fn expand(corona: &Patch, s: &SubstitutionSystem, reg: &mut Registry) -> Result<Vec<Tile>> {
    let d = corona.distinguished.expect("corona has a centre");
    let sub = substitute(corona, s, 1);
    let g = PatchGeometry::new(&sub, s);
    let mut out = Vec::new();
    for child in s.children(&corona.tiles[d]) {
        let i = sub.tiles.iter().position(|t| *t == child).expect("child present");
        if !g.is_surrounded(i) {
            return Err(Error::NotInterior(i));
        }
        let (c, frames) = corona_with_frames(&sub, &g, i, s);
        let k = reg.insert(c, frames.clone());
        out.push(Tile::new(k, frames[0].clone()));
    }
    Ok(out)
}

fn build(s: &SubstitutionSystem, reg: Registry, rules: Vec<Vec<Tile>>) -> Result<CollaredSystem> {
    let mut counters = vec![0usize; s.len()];
    let mut tiles = Vec::new();
    let mut protos = Vec::new();
    for (corona, frames) in reg.classes {
        let d = corona.distinguished.expect("corona has a centre");
        let base = corona.tiles[d].proto;
        counters[base] += 1;
        let bp = s.prototile(base);
        let label = format!("{}{}", bp.label, counters[base]);
        let f0 = frames[0].inverse();
        let sym: Vec<Motion> = frames.iter().map(|f| f0.compose(f)).collect();
        let mut proto = Prototile::new(&label, bp.kind, bp.shape.clone()).with_symmetry_hint(sym.clone());
        proto.marks = bp.marks.clone();
        protos.push(proto);
        tiles.push(CollaredTile { base, label, corona });
    }
    let system = SubstitutionSystem::new(protos, s.inflation().clone(), rules)?;
    for (k, t) in tiles.iter().enumerate() {
        let hinted = system.prototile(k).symmetry_hint.as_ref().map_or(1, Vec::len);
        if system.symmetry(k).len() != hinted {
            return Err(Error::SymmetryLost(t.label.clone()));
        }
    }
    Ok(CollaredSystem {
        base: s.clone(),
        tiles,
        system,
        power: 1,
    })
}

impl CollaredSystem {
    pub fn base(&self) -> &SubstitutionSystem {
        &self.base
    }

    /// The collared tiles as a substitution system in their own right.
    pub fn system(&self) -> &SubstitutionSystem {
        &self.system
    }

    pub fn tiles(&self) -> &[CollaredTile] {
        &self.tiles
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    /// Power of the base rule inducing the collared rule.
    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn label(&self, k: usize) -> &str {
        &self.tiles[k].label
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.tiles.iter().position(|t| t.label == label)
    }

    /// Number of collared classes over each base prototile.
    pub fn family_counts(&self) -> Vec<usize> {
        let mut v = vec![0; self.base.len()];
        for t in &self.tiles {
            v[t.base] += 1;
        }
        v
    }

    /// Whether the corona of class `k` is invariant under a half turn.
    pub fn is_symmetric(&self, k: usize) -> bool {
        self.system.symmetry(k).len() > 1
    }

    /// The class of the tile at `i` in a patch of base tiles.
    pub fn classify(&self, p: &Patch, g: &PatchGeometry, i: usize) -> Result<Tile> {
        if !g.is_surrounded(i) {
            return Err(Error::NotInterior(i));
        }
        let (c, frames) = corona_with_frames(p, g, i, &self.base);
        let k = self
            .tiles
            .iter()
            .position(|t| t.corona.tiles == c.tiles)
            .ok_or_else(|| Error::Containment(format!("corona of tile {i} is not in the census")))?;
        Ok(self.system.canonical_tile(&Tile::new(k, frames[0].clone())))
    }

    /// Forgets collars.
    pub fn project(&self, t: &Tile) -> Tile {
        self.base.canonical_tile(&Tile::new(self.tiles[t.proto].base, t.motion.clone()))
    }
}

/// Entry `(i, j)` counts the children of class `j` that belong to class `i`.
pub fn collared_substitution_matrix(cs: &CollaredSystem) -> IntMatrix {
    let n = cs.len();
    let mut m = IntMatrix::zeros(n, n);
    for j in 0..n {
        for c in cs.system().rule(j) {
            *m.entry_mut(c.proto, j) += BigInt::from(1);
        }
    }
    m
}

/// Tiles outside `λⁿ·centre` that meet it, obtained by substituting the
/// rest of the corona and discarding tiles that cannot reach the centre.
fn outer_ring(corona: &Patch, s: &SubstitutionSystem, n: u32) -> Vec<Tile> {
    let d = corona.distinguished.expect("corona has a centre");
    let centre = &corona.tiles[d];
    let mut tiles: Vec<Tile> = corona.tiles.iter().enumerate().filter(|&(k, _)| k != d).map(|(_, t)| t.clone()).collect();
    let mut region: Polygon = s.polygon(centre);
    for _ in 0..n {
        region = region.scaled(s.inflation());
        let next: Vec<Tile> = tiles.iter().flat_map(|t| s.children(t)).collect();
        tiles = next.into_iter().filter(|t| s.polygon(t).meets(&region)).collect();
    }
    let mut scale = s.inflation().clone();
    for _ in 1..n {
        scale = &scale * s.inflation();
    }
    // canonical over the symmetric frames of the inflated centre
    s.symmetry(centre.proto)
        .iter()
        .map(|g| {
            let frame = centre.motion.compose(g).scaled(&scale).inverse();
            let mut v: Vec<Tile> = tiles.iter().map(|t| s.canonical_tile(&t.moved(&frame))).collect();
            v.sort();
            v
        })
        .min()
        .expect("nonempty symmetry group")
}

/// Least `n ≤ max_power` such that every corona in `contexts` with the same
/// central prototile yields the same tiles around the `n`-th substitute of
/// its centre.
pub fn border_forcing_power(s: &SubstitutionSystem, contexts: &[Patch], max_power: u32) -> Option<u32> {
    (1..=max_power).find(|&n| {
        let mut seen: BTreeMap<usize, Vec<Tile>> = BTreeMap::new();
        contexts.iter().all(|c| {
            let d = c.distinguished.expect("corona has a centre");
            let ring = outer_ring(c, s, n);
            match seen.get(&c.tiles[d].proto) {
                Some(r) => *r == ring,
                None => {
                    seen.insert(c.tiles[d].proto, ring);
                    true
                }
            }
        })
    })
}

/// Border forcing of the collared substitution, judged on collared
/// neighbours: the contexts are the coronas of collared tiles.
pub fn forces_border(cs: &CollaredSystem, max_power: u32) -> Result<(bool, u32)> {
    let opts = CensusOptions {
        seed_level: 1,
        ..CensusOptions::default()
    };
    let second = census_with(cs.system(), &opts)?;
    let contexts: Vec<Patch> = second.tiles().iter().map(|t| t.corona.clone()).collect();
    Ok(match border_forcing_power(cs.system(), &contexts, max_power) {
        Some(n) => (true, n),
        None => (false, max_power),
    })
}

/// Border forcing of a system without collars, judged on its own coronas.
pub fn forces_border_uncollared(s: &SubstitutionSystem, max_power: u32) -> Result<(bool, u32)> {
    let cs = census(s)?;
    let contexts: Vec<Patch> = cs.tiles().iter().map(|t| t.corona.clone()).collect();
    Ok(match border_forcing_power(s, &contexts, max_power) {
        Some(n) => (true, n),
        None => (false, max_power),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiling::toy_square_system;

    #[test]
    fn toy_census() {
        let s = toy_square_system();
        let cs = census(&s).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs.tiles()[0].corona.len(), 9);
        assert_eq!(collared_substitution_matrix(&cs), IntMatrix::diagonal(&[BigInt::from(4)]));
        assert_eq!(forces_border(&cs, 2).unwrap(), (true, 1));
        assert_eq!(forces_border_uncollared(&s, 2).unwrap(), (true, 1));
        let again = census(cs.base()).unwrap();
        assert_eq!(again.len(), cs.len());
    }
}
