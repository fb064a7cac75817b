//! The Anderson–Putnam complex of a collared system, its cohomology and the
//! maps induced by substitution.
//!
//! Every collared class contributes one face. Its boundary is cut at every
//! point where a tile of its corona touches it, so each face carries a cyclic
//! list of boundary points and the pieces between them. Pieces and points are
//! then glued whenever two tiles share a segment somewhere in the tiling, and
//! a face whose class is symmetric under a half turn has its boundary glued
//! to its own rotated copy. Identification of pieces tracks orientation, so
//! a piece glued to itself reversed is reported rather than absorbed.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::abgrp::{induced_hom, FgAbGroup, GroupHom};
use crate::collar::{collared_substitution_matrix, CollaredSystem};
use crate::error::{Error, Result};
use crate::exact::{on_segment, orient, Motion, Point, Polygon};
use crate::intlin::{kernel_basis, IntMatrix};
use crate::tiling::{SubstitutionSystem, Tile};

/// Whether two interior-disjoint polygons share a boundary segment of
/// positive length.
pub fn shares_segment(p: &Polygon, q: &Polygon) -> bool {
    let (pb, qb) = (p.bbox_f64(), q.bbox_f64());
    const SLACK: f64 = 1e-7;
    if pb.2 + SLACK < qb.0 || qb.2 + SLACK < pb.0 || pb.3 + SLACK < qb.1 || qb.3 + SLACK < pb.1 {
        return false;
    }
    for i in 0..p.len() {
        let (a, b) = p.edge(i);
        let u = b - a;
        let len2 = u.norm2();
        for j in 0..q.len() {
            let (c, d) = q.edge(j);
            if orient(a, b, c) != Ordering::Equal || orient(a, b, d) != Ordering::Equal {
                continue;
            }
            let tc = (c - a).dot(&u);
            let td = (d - a).dot(&u);
            let (lo, hi) = if tc < td { (tc, td) } else { (td, tc) };
            let lo = if lo.is_negative() { crate::exact::ExactScalar::zero() } else { lo };
            let hi = if hi > len2 { len2.clone() } else { hi };
            if lo < hi {
                return true;
            }
        }
    }
    false
}

/// Canonical key of an ordered pair of placed tiles: the first tile is moved
/// to its standard position, trying each of its symmetric frames.
/// An adjacent pair up to moving the first tile to standard position.
pub fn pair_key(s: &SubstitutionSystem, a: &Tile, b: &Tile) -> (usize, Tile) {
    let mut best: Option<Tile> = None;
    for g in s.symmetry(a.proto) {
        let n = a.motion.compose(g).inverse();
        let cand = s.canonical_tile(&b.moved(&n));
        if best.as_ref().map_or(true, |x| cand < *x) {
            best = Some(cand);
        }
    }
    (a.proto, best.expect("nonempty symmetry group"))
}

/// Every ordered pair of edge-adjacent tiles occurring in the tiling, with
/// the first tile in standard position.
///
/// Adjacent tiles either share a parent or have edge-adjacent parents, so
/// the set is the closure of the sibling pairs under taking children.
pub fn adjacent_pairs(s: &SubstitutionSystem) -> Vec<(usize, Tile)> {
    let mut seen: BTreeSet<(usize, Tile)> = BTreeSet::new();
    let mut queue: Vec<(usize, Tile)> = Vec::new();
    let record = |a: &Tile, b: &Tile, seen: &mut BTreeSet<(usize, Tile)>, queue: &mut Vec<(usize, Tile)>| {
        for (x, y) in [(a, b), (b, a)] {
            let k = pair_key(s, x, y);
            if seen.insert(k.clone()) {
                queue.push(k);
            }
        }
    };
    for c in 0..s.len() {
        let kids = s.children(&Tile::new(c, Motion::identity()));
        let polys: Vec<Polygon> = kids.iter().map(|t| s.polygon(t)).collect();
        for i in 0..kids.len() {
            for j in i + 1..kids.len() {
                if shares_segment(&polys[i], &polys[j]) {
                    record(&kids[i], &kids[j], &mut seen, &mut queue);
                }
            }
        }
    }
    while let Some((c, t)) = queue.pop() {
        let ka = s.children(&Tile::new(c, Motion::identity()));
        let kb = s.children(&t);
        let pa: Vec<Polygon> = ka.iter().map(|t| s.polygon(t)).collect();
        let pb: Vec<Polygon> = kb.iter().map(|t| s.polygon(t)).collect();
        for i in 0..ka.len() {
            for j in 0..kb.len() {
                if shares_segment(&pa[i], &pb[j]) {
                    record(&ka[i], &kb[j], &mut seen, &mut queue);
                }
            }
        }
    }
    seen.into_iter().collect()
}

/// Boundary points of a polygon, in counterclockwise order starting at its
/// first vertex: the vertices plus every extra point lying on an edge.
pub fn subdivide_boundary(poly: &Polygon, extra: &[Point]) -> Vec<Point> {
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let (a, b) = poly.edge(i);
        out.push(a.clone());
        let u = b - a;
        let mut inner: Vec<(crate::exact::ExactScalar, Point)> = extra
            .iter()
            .filter(|p| *p != a && *p != b && on_segment(p, a, b))
            .map(|p| ((p - a).dot(&u), p.clone()))
            .collect();
        inner.sort();
        inner.dedup();
        out.extend(inner.into_iter().map(|(_, p)| p));
    }
    out
}

/// Union-find with a parity bit per element relative to its root.
struct ParityUnionFind {
    parent: Vec<usize>,
    parity: Vec<u8>,
}

impl ParityUnionFind {
    fn new(n: usize) -> Self {
        ParityUnionFind {
            parent: (0..n).collect(),
            parity: vec![0; n],
        }
    }

    fn find(&mut self, x: usize) -> (usize, u8) {
        let p = self.parent[x];
        if p == x {
            return (x, 0);
        }
        let (r, pp) = self.find(p);
        self.parent[x] = r;
        self.parity[x] ^= pp;
        (r, self.parity[x])
    }

    /// Joins `x` and `y` with relative parity `rel`; false on a contradiction.
    fn union(&mut self, x: usize, y: usize, rel: u8) -> bool {
        let (rx, px) = self.find(x);
        let (ry, py) = self.find(y);
        if rx == ry {
            return px ^ py == rel;
        }
        let (lo, hi) = if rx < ry { (rx, ry) } else { (ry, rx) };
        self.parent[hi] = lo;
        self.parity[hi] = px ^ py ^ rel;
        true
    }
}

/// A 2-dimensional CW complex with one face per collared class.
#[derive(Clone, Debug)]
pub struct CWComplex2 {
    /// Boundary points of each face in its standard position.
    points: Vec<Vec<Point>>,
    /// Vertex cell of each boundary point.
    point_vertex: Vec<Vec<usize>>,
    /// Edge cell and sign of each boundary piece (piece `i` runs from point
    /// `i` to point `i + 1`).
    piece_edge: Vec<Vec<(usize, i64)>>,
    /// Tail and head vertex of each edge in its canonical direction.
    edge_ends: Vec<(usize, usize)>,
    /// First piece `(face, index)` carrying each edge.
    edge_origin: Vec<(usize, usize)>,
    /// First point `(face, index)` carrying each vertex.
    vertex_origin: Vec<(usize, usize)>,
    delta0: IntMatrix,
    delta1: IntMatrix,
    /// Midpoints added where a piece was glued to itself reversed.
    folds: Vec<(usize, Point)>,
    /// How many times the boundary word of each face wraps its cell.
    weight: Vec<usize>,
}

/// How the complex treats a piece that the tiling glues to itself reversed,
/// which happens when two tiles of one class are swapped by a half turn
/// about a point of their common edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexOptions {
    /// Cut such pieces at their midpoint (the centre of the half turn) and
    /// glue the two halves to each other; otherwise report an error.
    pub split_folded_pieces: bool,
    pub subdivision: Subdivision,
    pub symmetric_faces: SymmetricFaces,
}

/// Where the boundary of each face is cut.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subdivision {
    /// At the points where the tiles of its own corona touch it.
    Local,
    /// At every point where some class over the same base prototile is cut,
    /// so all faces of one shape carry the same boundary points.
    Uniform,
}

/// Cell structure of a face whose class has a nontrivial symmetry group `G`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymmetricFaces {
    /// The face is the tile modulo `G`, a cone whose boundary loop runs once
    /// around each orbit of pieces.
    Cone,
    /// The face is the whole tile attached along its full boundary word, so
    /// each orbit of pieces appears `|G|` times.
    Doubled,
}

impl Default for ComplexOptions {
    fn default() -> Self {
        ComplexOptions {
            split_folded_pieces: true,
            subdivision: Subdivision::Uniform,
            symmetric_faces: SymmetricFaces::Cone,
        }
    }
}

/// Builds the complex from the collared classes and their adjacencies.
pub fn build_complex(cs: &CollaredSystem) -> Result<CWComplex2> {
    build_complex_with(cs, &ComplexOptions::default())
}

pub fn build_complex_with(cs: &CollaredSystem, opts: &ComplexOptions) -> Result<CWComplex2> {
    let points = initial_points(cs, opts);
    let pairs = adjacent_pairs(cs.system());
    glue_refining(cs.system(), points, &pairs, opts)
}

/// Boundary points of every face before they are made consistent across
/// adjacent faces.
pub fn initial_points(cs: &CollaredSystem, opts: &ComplexOptions) -> Vec<Vec<Point>> {
    let s = cs.system();
    let base = cs.base();
    let nf = cs.len();
    let mut local = Vec::with_capacity(nf);
    for (k, t) in cs.tiles().iter().enumerate() {
        let shape = &s.prototile(k).shape;
        let d = t.corona.distinguished.expect("corona has a centre");
        let extra: Vec<Point> = t
            .corona
            .tiles
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != d)
            .flat_map(|(_, n)| base.polygon(n).vertices().to_vec())
            .filter(|p| shape.on_boundary(p))
            .collect();
        local.push(extra);
    }
    if opts.subdivision == Subdivision::Uniform {
        let mut per_base: Vec<BTreeSet<Point>> = vec![BTreeSet::new(); base.len()];
        for (k, t) in cs.tiles().iter().enumerate() {
            for g in base.symmetry(t.base) {
                per_base[t.base].extend(local[k].iter().map(|p| g.apply(p)));
            }
        }
        for (k, t) in cs.tiles().iter().enumerate() {
            local[k] = per_base[t.base].iter().cloned().collect();
        }
    }
    (0..nf)
        .map(|k| subdivide_boundary(&s.prototile(k).shape, &local[k]))
        .collect()
}

/// Builds the complex of a plain substitution system whose tiles meet along
/// the given boundary points. Used for systems without collars.
pub fn build_complex_with_points(
    s: &SubstitutionSystem,
    points: Vec<Vec<Point>>,
    opts: &ComplexOptions,
) -> Result<CWComplex2> {
    let pairs = adjacent_pairs(s);
    glue_refining(s, points, &pairs, opts)
}

/// Builds the complex from an explicit list of adjacent pairs, as returned
/// by [`adjacent_pairs`].
pub fn build_complex_from_pairs(
    s: &SubstitutionSystem,
    points: Vec<Vec<Point>>,
    pairs: &[(usize, Tile)],
    opts: &ComplexOptions,
) -> Result<CWComplex2> {
    glue_refining(s, points, pairs, opts)
}

/// Makes the boundary points of adjacent faces agree along shared segments
/// and invariant under each face's symmetries.
fn propagate_points(s: &SubstitutionSystem, points: &mut [Vec<Point>], pairs: &[(usize, Tile)]) {
    loop {
        let mut changed = false;
        for (a, tb) in pairs {
            let b = tb.proto;
            let poly_b = s.polygon(tb);
            let inv = tb.motion.inverse();
            let new: Vec<Point> = points[*a]
                .iter()
                .filter(|x| poly_b.on_boundary(x))
                .map(|x| inv.apply(x))
                .filter(|y| !points[b].contains(y))
                .collect();
            if !new.is_empty() {
                let mut all = points[b].clone();
                all.extend(new);
                points[b] = subdivide_boundary(&s.prototile(b).shape, &all);
                changed = true;
            }
        }
        for k in 0..points.len() {
            let new: Vec<Point> = s
                .symmetry(k)
                .iter()
                .flat_map(|g| points[k].iter().map(move |x| g.apply(x)))
                .filter(|y| !points[k].contains(y))
                .collect();
            if !new.is_empty() {
                let mut all = points[k].clone();
                all.extend(new);
                points[k] = subdivide_boundary(&s.prototile(k).shape, &all);
                changed = true;
            }
        }
        if !changed {
            return;
        }
    }
}

fn glue_refining(
    s: &SubstitutionSystem,
    mut points: Vec<Vec<Point>>,
    pairs: &[(usize, Tile)],
    opts: &ComplexOptions,
) -> Result<CWComplex2> {
    let mut folds: Vec<(usize, Point)> = Vec::new();
    loop {
        propagate_points(s, &mut points, pairs);
        match assemble(s, points.clone(), pairs, opts.symmetric_faces) {
            Ok(mut cw) => {
                cw.folds = folds;
                return Ok(cw);
            }
            Err(Glue::Fold(k, i)) => {
                let n = points[k].len();
                let mid = points[k][i].midpoint(&points[k][(i + 1) % n]);
                if !opts.split_folded_pieces || folds.iter().any(|f| f == &(k, mid.clone())) {
                    return Err(Error::OrientationConflict(format!(
                        "piece {} of {} is glued to itself reversed",
                        i,
                        s.prototile(k).label
                    )));
                }
                let mut all = points[k].clone();
                all.push(mid.clone());
                points[k] = subdivide_boundary(&s.prototile(k).shape, &all);
                folds.push((k, mid));
            }
            Err(Glue::Failed(e)) => return Err(e),
        }
    }
}

enum Glue {
    /// Piece `i` of face `k` is glued to itself reversed.
    Fold(usize, usize),
    Failed(Error),
}

impl From<Error> for Glue {
    fn from(e: Error) -> Self {
        Glue::Failed(e)
    }
}

fn assemble(
    s: &SubstitutionSystem,
    points: Vec<Vec<Point>>,
    pairs: &[(usize, Tile)],
    faces: SymmetricFaces,
) -> core::result::Result<CWComplex2, Glue> {
    let nf = points.len();
    let mut offset = Vec::with_capacity(nf + 1);
    offset.push(0usize);
    for p in &points {
        offset.push(offset.last().unwrap() + p.len());
    }
    let total = *offset.last().unwrap();
    let index: Vec<BTreeMap<Point, usize>> = points
        .iter()
        .map(|ps| ps.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect())
        .collect();
    let mut vuf = ParityUnionFind::new(total);
    let mut euf = ParityUnionFind::new(total);

    // rotated copies of symmetric faces
    for k in 0..nf {
        let n = points[k].len();
        for g in s.symmetry(k) {
            if g.is_identity() {
                continue;
            }
            for i in 0..n {
                let img = g.apply(&points[k][i]);
                let j = *index[k].get(&img).ok_or_else(|| {
                    Error::NonCellular(format!("boundary of {} is not symmetric", s.prototile(k).label))
                })?;
                vuf.union(offset[k] + i, offset[k] + j, 0);
                if !euf.union(offset[k] + i, offset[k] + j, 0) {
                    return Err(Glue::Fold(k, i));
                }
            }
        }
    }

    // shared segments between adjacent tiles
    for (a, tb) in pairs {
        let b = tb.proto;
        let inv = tb.motion.inverse();
        let nb = points[b].len();
        let shape_b = s.polygon(tb);
        let na = points[*a].len();
        for i in 0..na {
            let p = &points[*a][i];
            let q = &points[*a][(i + 1) % na];
            if !(shape_b.on_boundary(p) && shape_b.on_boundary(q) && shape_b.on_boundary(&p.midpoint(q))) {
                continue;
            }
            let (pb, qb) = (inv.apply(p), inv.apply(q));
            let (Some(&jq), Some(&jp)) = (index[b].get(&qb), index[b].get(&pb)) else {
                return Err(Glue::Failed(Error::NonCellular(format!(
                    "piece {} of {} does not match a piece of {}",
                    i,
                    s.prototile(*a).label,
                    s.prototile(b).label
                ))));
            };
            if (jq + 1) % nb != jp {
                return Err(Glue::Failed(Error::NonCellular(format!(
                    "piece {} of {} is cut differently in {}",
                    i,
                    s.prototile(*a).label,
                    s.prototile(b).label
                ))));
            }
            vuf.union(offset[*a] + i, offset[b] + jp, 0);
            vuf.union(offset[*a] + (i + 1) % na, offset[b] + jq, 0);
            if !euf.union(offset[*a] + i, offset[b] + jq, 1) {
                return Err(Glue::Fold(*a, i));
            }
        }
    }

    // number cells by first occurrence
    let mut vertex_id: BTreeMap<usize, usize> = BTreeMap::new();
    let mut vertex_origin = Vec::new();
    let mut point_vertex = Vec::with_capacity(nf);
    for k in 0..nf {
        let mut row = Vec::with_capacity(points[k].len());
        for i in 0..points[k].len() {
            let (r, _) = vuf.find(offset[k] + i);
            let next = vertex_id.len();
            let v = *vertex_id.entry(r).or_insert_with(|| {
                vertex_origin.push((k, i));
                next
            });
            row.push(v);
        }
        point_vertex.push(row);
    }
    let mut edge_id: BTreeMap<usize, (usize, u8, i64)> = BTreeMap::new();
    let mut edge_origin = Vec::new();
    let mut edge_ends = Vec::new();
    let mut piece_edge = Vec::with_capacity(nf);
    for k in 0..nf {
        let n = points[k].len();
        let mut row = Vec::with_capacity(n);
        for i in 0..n {
            let (r, par) = euf.find(offset[k] + i);
            let (p, q) = (&points[k][i], &points[k][(i + 1) % n]);
            let next = edge_id.len();
            let entry = *edge_id.entry(r).or_insert_with(|| {
                // canonical direction: from the lexicographically smaller end
                let sign = if p < q { 1 } else { -1 };
                let (tail, head) = (point_vertex[k][i], point_vertex[k][(i + 1) % n]);
                edge_ends.push(if sign == 1 { (tail, head) } else { (head, tail) });
                edge_origin.push((k, i));
                (next, par, sign)
            });
            let (e, par0, sign0) = entry;
            let sign = if par == par0 { sign0 } else { -sign0 };
            row.push((e, sign));
        }
        piece_edge.push(row);
    }

    let nv = vertex_id.len();
    let ne = edge_id.len();
    let mut d1 = IntMatrix::zeros(nv, ne);
    for (e, &(t, h)) in edge_ends.iter().enumerate() {
        *d1.entry_mut(h, e) += BigInt::one();
        *d1.entry_mut(t, e) -= BigInt::one();
    }
    let weight: Vec<usize> = (0..nf)
        .map(|k| match faces {
            SymmetricFaces::Cone => s.symmetry(k).len(),
            SymmetricFaces::Doubled => 1,
        })
        .collect();
    let mut d2 = IntMatrix::zeros(ne, nf);
    for (k, row) in piece_edge.iter().enumerate() {
        let mut col = vec![0i64; ne];
        for &(e, sign) in row {
            col[e] += sign;
        }
        for (e, x) in col.into_iter().enumerate() {
            if x % weight[k] as i64 != 0 {
                return Err(Glue::Failed(Error::NonCellular(format!(
                    "boundary of {} does not wrap evenly around its cone",
                    s.prototile(k).label
                ))));
            }
            d2.set(e, k, BigInt::from(x / weight[k] as i64));
        }
    }
    let cw = CWComplex2 {
        points,
        point_vertex,
        piece_edge,
        edge_ends,
        edge_origin,
        vertex_origin,
        delta0: d1.transpose(),
        delta1: d2.transpose(),
        folds: Vec::new(),
        weight,
    };
    if !cw.delta1.mul(&cw.delta0)?.is_zero() {
        return Err(Glue::Failed(Error::NonCellular("coboundaries do not compose to zero".into())));
    }
    Ok(cw)
}

impl CWComplex2 {
    pub fn num_vertices(&self) -> usize {
        self.vertex_origin.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edge_ends.len()
    }

    pub fn num_faces(&self) -> usize {
        self.points.len()
    }

    /// Face and point of each midpoint added to cut a piece glued to itself
    /// reversed.
    pub fn folds(&self) -> &[(usize, Point)] {
        &self.folds
    }

    /// Number of times the boundary word of face `k` runs around its cell;
    /// larger than one only for symmetric faces built as cones.
    pub fn face_weight(&self, k: usize) -> usize {
        self.weight[k]
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_faces() as i64
    }

    /// Coboundary `C⁰ → C¹`, of shape edges × vertices.
    pub fn delta0(&self) -> &IntMatrix {
        &self.delta0
    }

    /// Coboundary `C¹ → C²`, of shape faces × edges.
    pub fn delta1(&self) -> &IntMatrix {
        &self.delta1
    }

    /// Tail and head of each edge.
    pub fn edge_ends(&self) -> &[(usize, usize)] {
        &self.edge_ends
    }

    /// Boundary points of face `k` in its standard position.
    pub fn boundary_points(&self, k: usize) -> &[Point] {
        &self.points[k]
    }

    /// Vertex cells met along the boundary of face `k`.
    pub fn face_vertices(&self, k: usize) -> &[usize] {
        &self.point_vertex[k]
    }

    /// Signed edge cells along the boundary of face `k`.
    pub fn face_word(&self, k: usize) -> &[(usize, i64)] {
        &self.piece_edge[k]
    }

    /// Face and point index where each vertex cell first occurs.
    pub fn vertex_origin(&self, v: usize) -> (usize, usize) {
        self.vertex_origin[v]
    }

    /// Face and piece index where each edge cell first occurs.
    pub fn edge_origin(&self, e: usize) -> (usize, usize) {
        self.edge_origin[e]
    }

    /// Vertex cell at a boundary point of face `k`, if it is one.
    pub fn vertex_at(&self, k: usize, p: &Point) -> Option<usize> {
        self.points[k].iter().position(|q| q == p).map(|i| self.point_vertex[k][i])
    }
}

/// Cohomology groups with generators as cochain vectors.
#[derive(Clone, Debug)]
pub struct CohomologyResult {
    pub h0: FgAbGroup,
    pub h1: FgAbGroup,
    pub h2: FgAbGroup,
}

pub fn cohomology(cw: &CWComplex2) -> Result<CohomologyResult> {
    let (nv, ne, nf) = (cw.num_vertices(), cw.num_edges(), cw.num_faces());
    let h0 = FgAbGroup::subquotient(nv, &kernel_basis(&cw.delta0), &IntMatrix::zeros(nv, 0))?;
    let h1 = FgAbGroup::subquotient(ne, &kernel_basis(&cw.delta1), &cw.delta0)?;
    let h2 = FgAbGroup::subquotient(nf, &IntMatrix::identity(nf), &cw.delta1)?;
    Ok(CohomologyResult { h0, h1, h2 })
}

/// The 2-cochain taking the given values on whole tiles. A cone face covers
/// its tile `w` times, so its coefficient is the tile value divided by `w`;
/// `None` when that division is not exact.
pub fn cochain_from_tile_values(cw: &CWComplex2, values: &[BigInt]) -> Option<Vec<BigInt>> {
    values
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let w = BigInt::from(cw.face_weight(k));
            if (v % &w).is_zero() {
                Some(v / w)
            } else {
                None
            }
        })
        .collect()
}

/// Pairs of faces `(a, b)` such that the function with value 1 on tile `a`
/// and −2 on tile `b` represents a nonzero torsion class of `H²`.
pub fn torsion_representatives(cw: &CWComplex2, coh: &CohomologyResult) -> Result<Vec<(usize, usize)>> {
    let g = &coh.h2;
    let n = g.ambient_rank();
    let free = g.free_rank();
    let mut out = Vec::new();
    if g.torsion().is_empty() {
        return Ok(out);
    }
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let mut t = vec![BigInt::zero(); n];
            t[a] = BigInt::one();
            t[b] = BigInt::from(-2);
            let Some(v) = cochain_from_tile_values(cw, &t) else { continue };
            let c = g.coordinates(&v)?;
            if c[..free].iter().all(Zero::is_zero) && c[free..].iter().any(|x| !x.is_zero()) {
                out.push((a, b));
            }
        }
    }
    Ok(out)
}

/// The cellular map of the complex into itself induced by substitution, as
/// chain maps, and the maps it induces on cohomology.
#[derive(Clone, Debug)]
pub struct InducedMaps {
    /// Chain maps on vertices, edges and faces (column = image of a cell).
    pub sigma0: IntMatrix,
    pub sigma1: IntMatrix,
    pub sigma2: IntMatrix,
    pub a0: GroupHom,
    pub a1: GroupHom,
    pub a2: GroupHom,
}

/// Cellular image of each edge and vertex under substitution.
pub fn chain_maps(cs: &CollaredSystem, cw: &CWComplex2) -> Result<(IntMatrix, IntMatrix, IntMatrix)> {
    let s = cs.system();
    let lam = s.inflation();
    let (nv, ne, nf) = (cw.num_vertices(), cw.num_edges(), cw.num_faces());
    let mut sigma1 = IntMatrix::zeros(ne, ne);
    let mut sigma0 = IntMatrix::zeros(nv, nv);
    let mut have_e = vec![false; ne];
    let mut have_v = vec![false; nv];
    for k in 0..nf {
        let kids = s.children(&Tile::new(k, Motion::identity()));
        // every child piece and point, in the parent frame
        let mut kid_pieces: Vec<(Point, Point, usize, i64)> = Vec::new();
        let mut kid_points: BTreeMap<Point, usize> = BTreeMap::new();
        for c in &kids {
            let pts = &cw.points[c.proto];
            let n = pts.len();
            for i in 0..n {
                let p = c.motion.apply(&pts[i]);
                let q = c.motion.apply(&pts[(i + 1) % n]);
                let (e, sg) = cw.piece_edge[c.proto][i];
                kid_pieces.push((p.clone(), q, e, sg));
                kid_points.entry(p).or_insert(cw.point_vertex[c.proto][i]);
            }
        }
        let pts = &cw.points[k];
        let n = pts.len();
        for i in 0..n {
            let a = pts[i].scale(lam);
            let b = pts[(i + 1) % n].scale(lam);
            let u = &b - &a;
            let len2 = u.norm2();
            let mut col = vec![BigInt::zero(); ne];
            let mut covered = crate::exact::ExactScalar::zero();
            for (p, q, e, sg) in &kid_pieces {
                if !(on_segment(p, &a, &b) && on_segment(q, &a, &b)) {
                    continue;
                }
                let dir = (q - p).dot(&u);
                if !dir.is_positive() {
                    return Err(Error::NonCellular(format!(
                        "child piece runs against the boundary of {}",
                        s.prototile(k).label
                    )));
                }
                covered = &covered + &dir;
                col[*e] += BigInt::from(*sg);
            }
            if covered != len2 {
                return Err(Error::NonCellular(format!(
                    "image of piece {} of {} is not a union of pieces",
                    i,
                    s.prototile(k).label
                )));
            }
            let (e, sg) = cw.piece_edge[k][i];
            let col: Vec<BigInt> = col.into_iter().map(|x| x * BigInt::from(sg)).collect();
            if have_e[e] {
                if sigma1.column(e) != col {
                    return Err(Error::NonCellular(format!("edge {} has two different images", e)));
                }
            } else {
                for (r, x) in col.into_iter().enumerate() {
                    sigma1.set(r, e, x);
                }
                have_e[e] = true;
            }
            let v = cw.point_vertex[k][i];
            let img = *kid_points.get(&a).ok_or_else(|| {
                Error::NonCellular(format!("corner {} of {} has no image vertex", i, s.prototile(k).label))
            })?;
            if have_v[v] {
                if sigma0.get(img, v).is_zero() {
                    return Err(Error::NonCellular(format!("vertex {} has two different images", v)));
                }
            } else {
                sigma0.set(img, v, BigInt::one());
                have_v[v] = true;
            }
        }
    }
    // a cone face covers 1/w of its tile, so children are counted in tile
    // units and rescaled
    let counts = collared_substitution_matrix(cs);
    let mut sigma2 = IntMatrix::zeros(nf, nf);
    for j in 0..nf {
        for i in 0..nf {
            let x = counts.get(i, j) * BigInt::from(cw.weight[i]);
            let w = BigInt::from(cw.weight[j]);
            if !(&x % &w).is_zero() {
                return Err(Error::NonCellular(format!(
                    "children of {} do not fill its cone evenly",
                    s.prototile(j).label
                )));
            }
            sigma2.set(i, j, x / w);
        }
    }
    let d1 = cw.delta0.transpose();
    let d2 = cw.delta1.transpose();
    if d1.mul(&sigma1)? != sigma0.mul(&d1)? || d2.mul(&sigma2)? != sigma1.mul(&d2)? {
        return Err(Error::NonCellular("substitution does not commute with the boundary".into()));
    }
    Ok((sigma0, sigma1, sigma2))
}

pub fn induced_maps(cs: &CollaredSystem, cw: &CWComplex2, coh: &CohomologyResult) -> Result<InducedMaps> {
    let (sigma0, sigma1, sigma2) = chain_maps(cs, cw)?;
    let a0 = induced_hom(&sigma0.transpose(), &coh.h0, &coh.h0)?;
    let a1 = induced_hom(&sigma1.transpose(), &coh.h1, &coh.h1)?;
    let a2 = induced_hom(&sigma2.transpose(), &coh.h2, &coh.h2)?;
    Ok(InducedMaps {
        sigma0,
        sigma1,
        sigma2,
        a0,
        a1,
        a2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collar::census;
    use crate::tiling::toy_square_system;

    #[test]
    fn toy_torus() {
        let cs = census(&toy_square_system()).unwrap();
        let cw = build_complex(&cs).unwrap();
        assert_eq!((cw.num_vertices(), cw.num_edges(), cw.num_faces()), (1, 2, 1));
        let coh = cohomology(&cw).unwrap();
        assert_eq!((coh.h0.free_rank(), coh.h1.free_rank(), coh.h2.free_rank()), (1, 2, 1));
        assert!(coh.h2.torsion().is_empty());
        let maps = induced_maps(&cs, &cw, &coh).unwrap();
        assert!(maps.a0.is_identity());
        // substitution doubles lengths and quadruples areas
        assert_eq!(maps.a1.matrix(), &IntMatrix::identity(2).scale(&BigInt::from(2)));
        assert_eq!(maps.a2.matrix(), &IntMatrix::identity(1).scale(&BigInt::from(4)));
    }

    #[test]
    fn overlapping_segments() {
        let sq = |x: i64, y: i64, w: i64| {
            Polygon::new(vec![
                Point::from_ints(x, y),
                Point::from_ints(x + w, y),
                Point::from_ints(x + w, y + w),
                Point::from_ints(x, y + w),
            ])
            .unwrap()
        };
        assert!(shares_segment(&sq(0, 0, 2), &sq(2, 1, 1)));
        assert!(!shares_segment(&sq(0, 0, 1), &sq(1, 1, 1)));
        assert!(!shares_segment(&sq(0, 0, 1), &sq(3, 0, 1)));
    }
}
