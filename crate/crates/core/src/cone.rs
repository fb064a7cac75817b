//! Half-turn symmetric configurations and the cohomology of the full hull.
//!
//! A tiling with a centre of half-turn symmetry is a fixed point of the
//! substitution acting on the star of that centre (all collared tiles
//! containing it). Stars are small, so the symmetric ones can be listed
//! exhaustively: every point of a tile `A` has its star inside the collared
//! corona of `A`, and the collared coronas are the census of the collared
//! system. A centre `x` in `A` is the fixed point of a half turn carrying `A`
//! onto some tile `B` of the same class in that corona, which leaves finitely
//! many candidates.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::collar::{census_with, CensusOptions, CollaredSystem};
use crate::error::{Error, Result};
use crate::exact::{Containment, ExactScalar, Motion, Point};
use crate::limit::{LimitGroup, LimitStatus};
use crate::tiling::{canonical_about_all, substitute, Patch, SubstitutionSystem, Tile};

/// Where the centre sits relative to the tiles of its star.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CenterKind {
    /// A corner of at least one tile.
    Vertex,
    /// Inside an edge shared by two tiles.
    EdgeInterior,
    /// Inside a single tile.
    TileInterior,
}

impl CenterKind {
    pub fn name(self) -> &'static str {
        match self {
            CenterKind::Vertex => "vertex",
            CenterKind::EdgeInterior => "edge",
            CenterKind::TileInterior => "tile",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricCenter {
    pub kind: CenterKind,
    /// Collared tiles containing the centre, in canonical position with the
    /// centre at the origin.
    pub patch: Patch,
    /// Indices of the successive images under substitution, starting with
    /// the image of this centre, up to the first repeated class.
    pub orbit: Vec<usize>,
    /// `Some(p)` when the centre returns to itself after `p` substitutions.
    pub period: Option<usize>,
}

impl SymmetricCenter {
    pub fn is_periodic(&self) -> bool {
        self.period.is_some()
    }

    /// Collared labels of the star, sorted.
    pub fn labels(&self, cs: &CollaredSystem) -> Vec<String> {
        let mut v: Vec<String> = self.patch.tiles.iter().map(|t| cs.label(t.proto).into()).collect();
        v.sort();
        v
    }
}

/// Canonical key of a star about the origin: least tile list over all
/// anchors and symmetric frames.
fn star_key(tiles: &[Tile], s: &SubstitutionSystem) -> Vec<Tile> {
    let mut best: Option<Vec<Tile>> = None;
    for a in 0..tiles.len() {
        let (list, normalizers) = canonical_about_all(tiles, a, s);
        for n in normalizers {
            // the list is already least; the centre breaks remaining ties
            let centre = n.apply(&Point::origin());
            let back = Motion::translation(-&centre);
            let mut moved: Vec<Tile> = list.iter().map(|t| s.canonical_tile(&t.moved(&back))).collect();
            moved.sort();
            if best.as_ref().is_none_or(|b| moved < *b) {
                best = Some(moved);
            }
        }
    }
    best.expect("nonempty star")
}

fn contains_closed(s: &SubstitutionSystem, t: &Tile, p: &Point) -> bool {
    s.polygon(t).contains(p) != Containment::Outside
}

fn is_half_turn(m: &Motion) -> bool {
    *m.cos() == ExactScalar::from_int(-1) && m.sin().is_zero()
}

fn half_turn_invariant(tiles: &[Tile], s: &SubstitutionSystem) -> bool {
    let h = Motion::half_turn_about(&Point::origin());
    let mut a: Vec<Tile> = tiles.iter().map(|t| s.canonical_tile(t)).collect();
    let mut b: Vec<Tile> = tiles.iter().map(|t| s.canonical_tile(&t.moved(&h))).collect();
    a.sort();
    b.sort();
    a == b
}

/// Whether rotating the patch by π about `center` reproduces it exactly.
pub fn is_half_turn_symmetric(patch: &Patch, center: &Point, s: &SubstitutionSystem) -> bool {
    let shift = Motion::translation(-center);
    let moved: Vec<Tile> = patch.tiles.iter().map(|t| t.moved(&shift)).collect();
    half_turn_invariant(&moved, s)
}

fn kind_of(tiles: &[Tile], s: &SubstitutionSystem) -> CenterKind {
    let o = Point::origin();
    if tiles.iter().any(|t| s.polygon(t).vertices().contains(&o)) {
        CenterKind::Vertex
    } else if tiles.len() == 1 {
        CenterKind::TileInterior
    } else {
        CenterKind::EdgeInterior
    }
}

/// Star of the origin after one substitution.
fn image_star(tiles: &[Tile], s: &SubstitutionSystem) -> Vec<Tile> {
    let o = Point::origin();
    substitute(&Patch::new(tiles.to_vec()), s, 1)
        .tiles
        .into_iter()
        .filter(|t| contains_closed(s, t, &o))
        .collect()
}

/// Every class of half-turn symmetric star, with its substitution orbit.
pub fn find_symmetric_centers(cs: &CollaredSystem) -> Result<Vec<SymmetricCenter>> {
    let s = cs.system();
    let coronas = census_with(
        s,
        &CensusOptions {
            seed_level: 1,
            ..CensusOptions::default()
        },
    )?;
    let mut found: BTreeMap<Vec<Tile>, ()> = BTreeMap::new();
    for ct in coronas.tiles() {
        let patch = &ct.corona;
        let a = &patch.tiles[patch.distinguished.expect("corona has a centre")];
        let a_inv = a.motion.inverse();
        let poly_a = s.polygon(a);
        for b in patch.tiles.iter().filter(|b| b.proto == a.proto) {
            for g in s.symmetry(a.proto) {
                let h = b.motion.compose(g).compose(&a_inv);
                if !is_half_turn(&h) {
                    continue;
                }
                let x = h.translation_part().scale(&ExactScalar::from_ratio(1, 2));
                if poly_a.contains(&x) == Containment::Outside {
                    continue;
                }
                let shift = Motion::translation(-&x);
                let star: Vec<Tile> = patch
                    .tiles
                    .iter()
                    .filter(|t| contains_closed(s, t, &x))
                    .map(|t| s.canonical_tile(&t.moved(&shift)))
                    .collect();
                if half_turn_invariant(&star, s) {
                    found.insert(star_key(&star, s), ());
                }
            }
        }
    }
    let keys: Vec<Vec<Tile>> = found.into_keys().collect();
    let index: BTreeMap<&Vec<Tile>, usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut image = Vec::with_capacity(keys.len());
    for k in &keys {
        let next = image_star(k, s);
        if !half_turn_invariant(&next, s) {
            return Err(Error::SymmetryLost(format!("star of {} tiles", k.len())));
        }
        let nk = star_key(&next, s);
        let j = *index
            .get(&nk)
            .ok_or_else(|| Error::SymmetryLost("image star missing from the enumeration".into()))?;
        image.push(j);
    }
    let mut out = Vec::with_capacity(keys.len());
    for (i, k) in keys.iter().enumerate() {
        let mut orbit = Vec::new();
        let mut seen = alloc::vec![false; keys.len()];
        let mut cur = i;
        seen[i] = true;
        let period = loop {
            cur = image[cur];
            orbit.push(cur);
            if cur == i {
                break Some(orbit.len());
            }
            if seen[cur] {
                break None;
            }
            seen[cur] = true;
        };
        out.push(SymmetricCenter {
            kind: kind_of(k, s),
            patch: Patch::new(k.clone()),
            orbit,
            period,
        });
    }
    Ok(out)
}

/// Follows a centre under substitution until a class repeats. Periodic means
/// the centre itself lies on the cycle.
pub fn orbit_periodicity(c: &SymmetricCenter, cs: &CollaredSystem) -> Result<(bool, usize)> {
    let s = cs.system();
    let start = star_key(&c.patch.tiles, s);
    if !half_turn_invariant(&start, s) {
        return Err(Error::SymmetryLost("centre is not symmetric".into()));
    }
    let mut seen: BTreeMap<Vec<Tile>, usize> = BTreeMap::new();
    seen.insert(start.clone(), 0);
    let mut cur = start.clone();
    // stars of one point are bounded by collared vertex stars, a finite set
    let bound = 64 * cs.len() * cs.len();
    for step in 1..=bound {
        let next = image_star(&cur, s);
        if !half_turn_invariant(&next, s) {
            return Err(Error::SymmetryLost(format!("after {step} substitutions")));
        }
        cur = star_key(&next, s);
        if cur == start {
            return Ok((true, step));
        }
        if let Some(&first) = seen.get(&cur) {
            return Ok((false, step - first));
        }
        seen.insert(cur.clone(), step);
    }
    Err(Error::SymmetryLost("orbit did not close".into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullCohomology {
    pub h0: LimitGroup,
    pub h1: LimitGroup,
    pub h2: LimitGroup,
    pub h3: LimitGroup,
    pub e11: LimitGroup,
    pub e20: LimitGroup,
}

/// Cohomology of the hull from that of its rotation quotient and the number
/// of cone singularities. Only the regime of one half-turn torsion class in
/// degree two is supported; anything else needs the full spectral sequence.
pub fn assemble_hull(coh0: &[LimitGroup; 3], c: usize) -> Result<HullCohomology> {
    if c == 0 {
        return Err(Error::UnsupportedRegime(
            "no cone singularities; the hull is then a circle bundle, use the Gysin sequence".into(),
        ));
    }
    for (d, g) in coh0.iter().enumerate() {
        if let LimitStatus::Symbolic { reason, .. } = &g.status {
            return Err(Error::UnsupportedRegime(format!(
                "degree {d} of the quotient is unclassified ({reason}); its torsion is not known"
            )));
        }
    }
    let [h0, h1, h2] = coh0;
    if h2.torsion.len() != 1 || h2.torsion[0] != 2.into() {
        return Err(Error::UnsupportedRegime(format!(
            "degree 2 torsion of the quotient is {:?}, only a single Z_2 is handled; \
             the spectral sequence of the rotation action must be analysed directly",
            h2.torsion.iter().map(|d| d.to_string()).collect::<Vec<_>>()
        )));
    }
    if !h0.torsion.is_empty() || !h1.torsion.is_empty() {
        return Err(Error::UnsupportedRegime("torsion in degree 0 or 1 of the quotient".into()));
    }
    let extra = LimitGroup::exact(&[], 0, &alloc::vec![2; c - 1]);
    let e11 = h1.direct_sum(&extra);
    let e20 = h2.torsion_free_part();
    Ok(HullCohomology {
        h0: h0.clone(),
        h1: h0.direct_sum(h1),
        h2: e11.direct_sum(&e20),
        h3: h2.clone(),
        e11,
        e20,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collar::census;
    use crate::tiling::{derive_kr_system, toy_square_system};

    #[test]
    fn hull_formula() {
        let coh0 = [
            LimitGroup::exact(&[], 1, &[]),
            LimitGroup::exact(&[], 1, &[]),
            LimitGroup::exact(&[(25, 1), (3, 2)], 5, &[2]),
        ];
        let h = assemble_hull(&coh0, 6).unwrap();
        assert_eq!(h.h0, LimitGroup::exact(&[], 1, &[]));
        assert_eq!(h.h1, LimitGroup::exact(&[], 2, &[]));
        assert_eq!(h.e11, LimitGroup::exact(&[], 1, &[2, 2, 2, 2, 2]));
        assert_eq!(h.e20, LimitGroup::exact(&[(25, 1), (3, 2)], 5, &[]));
        assert_eq!(h.h2, LimitGroup::exact(&[(25, 1), (3, 2)], 6, &[2, 2, 2, 2, 2]));
        assert_eq!(h.h3, coh0[2]);
        assert_eq!(h.h2.to_string(), "Z[1/25] + Z[1/3]^2 + Z^6 + Z_2^5");
    }

    #[test]
    fn hull_formula_guards() {
        let z = LimitGroup::exact(&[], 1, &[]);
        let ok = LimitGroup::exact(&[(4, 1)], 0, &[2]);
        assert!(assemble_hull(&[z.clone(), z.clone(), ok.clone()], 0).is_err());
        let z4 = LimitGroup::exact(&[(4, 1)], 0, &[4]);
        assert!(assemble_hull(&[z.clone(), z.clone(), z4], 3).is_err());
        let two = LimitGroup::exact(&[(4, 1)], 0, &[2, 2]);
        assert!(assemble_hull(&[z.clone(), z.clone(), two], 3).is_err());
        let none = LimitGroup::exact(&[(4, 1)], 0, &[]);
        assert!(assemble_hull(&[z.clone(), z.clone(), none], 3).is_err());
        assert!(assemble_hull(&[z.clone(), z, ok], 1).is_ok());
    }

    #[test]
    fn single_tiles() {
        let kr = derive_kr_system().unwrap();
        for label in ["L", "R"] {
            let t = Tile::new(kr.index_of(label).unwrap(), Motion::identity());
            let c = kr.polygon(&t).centroid();
            assert!(is_half_turn_symmetric(&Patch::single(t.clone()), &c, &kr), "{label}");
            let corner = kr.polygon(&t).vertices()[0].clone();
            assert!(!is_half_turn_symmetric(&Patch::single(t), &corner, &kr));
        }
        let k = Tile::new(kr.index_of("K").unwrap(), Motion::identity());
        let c = kr.polygon(&k).centroid();
        assert!(!is_half_turn_symmetric(&Patch::single(k), &c, &kr));
    }

    #[test]
    fn oriented_squares_have_no_symmetric_centre() {
        // the mark on the square breaks every half turn
        let cs = census(&toy_square_system()).unwrap();
        assert!(find_symmetric_centers(&cs).unwrap().is_empty());
    }
}
