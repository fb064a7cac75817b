//! Substitution systems and finite patches.
//!
//! A tile is a prototile index together with the proper motion placing the
//! prototile's shape in the plane. A substitution rule lists, for every
//! prototile, the children that tile the inflated shape. Prototiles whose
//! shape and rule are invariant under a rotation carry that rotation in their
//! symmetry group, and tile motions are canonicalized modulo it so that equal
//! tiles have equal keys.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exact::{Containment, ExactScalar, Motion, Point, Polygon, PolygonRelation};

/// Shape family of a prototile; drives merging and rendering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TileKind {
    TriangleLeft,
    TriangleRight,
    Kite,
    RectLeft,
    RectRight,
    Other,
}

impl TileKind {
    pub fn name(self) -> &'static str {
        match self {
            TileKind::TriangleLeft => "triangle-left",
            TileKind::TriangleRight => "triangle-right",
            TileKind::Kite => "kite",
            TileKind::RectLeft => "rect-left",
            TileKind::RectRight => "rect-right",
            TileKind::Other => "other",
        }
    }

    pub fn from_name(s: &str) -> Option<TileKind> {
        Some(match s {
            "triangle-left" => TileKind::TriangleLeft,
            "triangle-right" => TileKind::TriangleRight,
            "kite" => TileKind::Kite,
            "rect-left" => TileKind::RectLeft,
            "rect-right" => TileKind::RectRight,
            "other" => TileKind::Other,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prototile {
    pub label: String,
    pub kind: TileKind,
    pub shape: Polygon,
    /// Decorative segments (rectangle diagonals), used for drawing only.
    pub marks: Vec<(Point, Point)>,
    /// When set, the only rotations considered as symmetries; the rule must
    /// still be invariant under them. An asymmetric decoration is modelled as
    /// a hint holding just the identity.
    pub symmetry_hint: Option<Vec<Motion>>,
}

impl Prototile {
    pub fn new(label: &str, kind: TileKind, shape: Polygon) -> Self {
        Prototile {
            label: label.into(),
            kind,
            shape,
            marks: Vec::new(),
            symmetry_hint: None,
        }
    }

    pub fn with_mark(mut self, a: Point, b: Point) -> Self {
        self.marks.push((a, b));
        self
    }

    /// Marks the prototile as carrying an orientation decoration.
    pub fn oriented(self) -> Self {
        self.with_symmetry_hint(vec![Motion::identity()])
    }

    pub fn with_symmetry_hint(mut self, sym: Vec<Motion>) -> Self {
        self.symmetry_hint = Some(sym);
        self
    }
}

/// A prototile placed by a motion.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tile {
    pub proto: usize,
    pub motion: Motion,
}

impl Tile {
    pub fn new(proto: usize, motion: Motion) -> Self {
        Tile { proto, motion }
    }

    /// The same tile seen through a motion of the plane.
    pub fn moved(&self, g: &Motion) -> Tile {
        Tile {
            proto: self.proto,
            motion: g.compose(&self.motion),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstitutionSystem {
    prototiles: Vec<Prototile>,
    inflation: ExactScalar,
    rules: Vec<Vec<Tile>>,
    symmetry: Vec<Vec<Motion>>,
}

impl SubstitutionSystem {
    /// Builds a system and checks that every rule tiles the inflated shape:
    /// children lie inside it, have pairwise disjoint interiors, and their
    /// areas add up to the inflated area.
    pub fn new(prototiles: Vec<Prototile>, inflation: ExactScalar, rules: Vec<Vec<Tile>>) -> Result<Self> {
        if rules.len() != prototiles.len() {
            return Err(Error::InvalidSystem(format!(
                "{} prototiles but {} rules",
                prototiles.len(),
                rules.len()
            )));
        }
        if inflation <= ExactScalar::one() {
            return Err(Error::InvalidSystem("inflation must exceed 1".into()));
        }
        let mut sys = SubstitutionSystem {
            symmetry: prototiles.iter().map(|_| vec![Motion::identity()]).collect(),
            prototiles,
            inflation,
            rules,
        };
        sys.check_rules()?;
        sys.symmetry = sys.compute_symmetry();
        Ok(sys)
    }

    fn check_rules(&self) -> Result<()> {
        let lam2 = self.inflation.square();
        for (p, rule) in self.rules.iter().enumerate() {
            let proto = &self.prototiles[p];
            let big = proto.shape.scaled(&self.inflation);
            let mut area = ExactScalar::zero();
            let polys: Vec<Polygon> = rule
                .iter()
                .map(|t| {
                    if t.proto >= self.prototiles.len() {
                        Err(Error::InvalidSystem(format!(
                            "rule of {} names unknown prototile {}",
                            proto.label, t.proto
                        )))
                    } else {
                        Ok(self.polygon(t))
                    }
                })
                .collect::<Result<_>>()?;
            for (k, poly) in polys.iter().enumerate() {
                area = area + poly.area();
                if poly.vertices().iter().any(|v| big.contains(v) == Containment::Outside) {
                    return Err(Error::InvalidSystem(format!(
                        "child {k} of {} leaves the inflated tile",
                        proto.label
                    )));
                }
            }
            if area != &lam2 * &proto.shape.area() {
                return Err(Error::InvalidSystem(format!(
                    "children of {} do not cover the inflated tile",
                    proto.label
                )));
            }
            for i in 0..polys.len() {
                for j in i + 1..polys.len() {
                    if polys[i].relation(&polys[j]) == PolygonRelation::Overlap {
                        return Err(Error::InvalidSystem(format!(
                            "children {i} and {j} of {} overlap",
                            proto.label
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Largest set of rotations, per prototile, that preserve the shape and
    /// map the rule to itself modulo the children's own symmetries.
    fn compute_symmetry(&self) -> Vec<Vec<Motion>> {
        let mut sym: Vec<Vec<Motion>> = self
            .prototiles
            .iter()
            .map(|p| match &p.symmetry_hint {
                Some(h) => {
                    let own = self_congruences(&p.shape);
                    h.iter().filter(|g| own.contains(g)).cloned().collect()
                }
                None => self_congruences(&p.shape),
            })
            .collect();
        loop {
            let mut changed = false;
            for p in 0..self.prototiles.len() {
                let base = canonical_rule(&self.rules[p], &sym);
                let keep: Vec<Motion> = sym[p]
                    .iter()
                    .filter(|g| {
                        let lg = g.scaled(&self.inflation);
                        let moved: Vec<Tile> = self.rules[p].iter().map(|t| t.moved(&lg)).collect();
                        canonical_rule(&moved, &sym) == base
                    })
                    .cloned()
                    .collect();
                if keep.len() != sym[p].len() {
                    sym[p] = keep;
                    changed = true;
                }
            }
            if !changed {
                return sym;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.prototiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prototiles.is_empty()
    }

    pub fn prototiles(&self) -> &[Prototile] {
        &self.prototiles
    }

    pub fn prototile(&self, i: usize) -> &Prototile {
        &self.prototiles[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.prototiles.iter().position(|p| p.label == label)
    }

    pub fn inflation(&self) -> &ExactScalar {
        &self.inflation
    }

    pub fn rule(&self, i: usize) -> &[Tile] {
        &self.rules[i]
    }

    pub fn rules(&self) -> &[Vec<Tile>] {
        &self.rules
    }

    /// Rotations (as motions fixing the shape setwise) under which prototile
    /// `i` and its rule are invariant; the identity comes first.
    pub fn symmetry(&self, i: usize) -> &[Motion] {
        &self.symmetry[i]
    }

    pub fn polygon(&self, t: &Tile) -> Polygon {
        self.prototiles[t.proto].shape.transformed(&t.motion)
    }

    /// The least motion describing the same placed tile.
    pub fn canonical_motion(&self, proto: usize, m: &Motion) -> Motion {
        canonical_motion_with(&self.symmetry[proto], m)
    }

    pub fn canonical_tile(&self, t: &Tile) -> Tile {
        Tile::new(t.proto, self.canonical_motion(t.proto, &t.motion))
    }

    /// Children of a placed tile, in canonical form.
    pub fn children(&self, t: &Tile) -> Vec<Tile> {
        let lm = t.motion.scaled(&self.inflation);
        self.rules[t.proto]
            .iter()
            .map(|c| self.canonical_tile(&c.moved(&lm)))
            .collect()
    }

    /// The rule applied `n` times, as a system of its own.
    pub fn power(&self, n: u32) -> Result<SubstitutionSystem> {
        if n == 0 {
            return Err(Error::InvalidSystem("substitution power must be at least 1".into()));
        }
        let mut inflation = ExactScalar::one();
        for _ in 0..n {
            inflation = &inflation * &self.inflation;
        }
        let rules = (0..self.len())
            .map(|p| substitute(&Patch::single(Tile::new(p, Motion::identity())), self, n).tiles)
            .collect();
        SubstitutionSystem::new(self.prototiles.clone(), inflation, rules)
    }

    /// Motions placing prototile `proto` exactly onto `target`, if any.
    pub fn placements_onto(&self, proto: usize, target: &Polygon) -> Vec<Motion> {
        congruences(&self.prototiles[proto].shape, target)
    }

    /// Child-count matrix: entry `(i, j)` counts children of type `i` in the
    /// rule of `j`.
    pub fn substitution_counts(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut m = vec![vec![0usize; n]; n];
        for (j, rule) in self.rules.iter().enumerate() {
            for c in rule {
                m[c.proto][j] += 1;
            }
        }
        m
    }

    /// Smallest power `k ≤ max_power` at which every prototile's `k`-th
    /// substitute contains every prototile.
    pub fn primitivity_power(&self, max_power: u32) -> Option<u32> {
        let n = self.len();
        let counts = self.substitution_counts();
        let mut reach: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| counts[i][j] > 0).collect()).collect();
        for k in 1..=max_power {
            if reach.iter().all(|r| r.iter().all(|&b| b)) {
                return Some(k);
            }
            let mut next = vec![vec![false; n]; n];
            for i in 0..n {
                for j in 0..n {
                    next[i][j] = (0..n).any(|l| counts[i][l] > 0 && reach[l][j]);
                }
            }
            reach = next;
        }
        None
    }
}

fn canonical_motion_with(sym: &[Motion], m: &Motion) -> Motion {
    sym.iter()
        .map(|s| m.compose(s))
        .min()
        .expect("symmetry group contains the identity")
}

fn canonical_rule(rule: &[Tile], sym: &[Vec<Motion>]) -> Vec<Tile> {
    let mut v: Vec<Tile> = rule
        .iter()
        .map(|t| Tile::new(t.proto, canonical_motion_with(&sym[t.proto], &t.motion)))
        .collect();
    v.sort();
    v
}

/// All proper motions mapping polygon `a` onto polygon `b` as vertex cycles.
pub fn congruences(a: &Polygon, b: &Polygon) -> Vec<Motion> {
    let n = a.len();
    if n != b.len() {
        return Vec::new();
    }
    let av = a.vertices();
    let bv = b.vertices();
    let mut out = Vec::new();
    for k in 0..n {
        let Ok(m) = Motion::from_segment_pair(&av[0], &av[1], &bv[k], &bv[(k + 1) % n]) else {
            continue;
        };
        if (0..n).all(|i| m.apply(&av[i]) == bv[(k + i) % n]) {
            out.push(m);
        }
    }
    out
}

/// Rotational self-congruences of a polygon, identity first.
pub fn self_congruences(p: &Polygon) -> Vec<Motion> {
    let mut v = congruences(p, p);
    v.sort_by_key(|m| !m.is_identity());
    v
}

/// Builds a counterclockwise polygon from points given in either orientation.
pub fn ccw_polygon(mut pts: Vec<Point>) -> Result<Polygon> {
    let n = pts.len();
    let mut area2 = ExactScalar::zero();
    for i in 0..n {
        area2 = area2 + pts[i].cross(&pts[(i + 1) % n]);
    }
    if area2.is_negative() {
        pts.reverse();
    }
    Polygon::new(pts)
}

fn int_polygon(pts: &[(i64, i64)]) -> Polygon {
    ccw_polygon(pts.iter().map(|&(x, y)| Point::from_ints(x, y)).collect()).expect("valid literal polygon")
}

/// A finite configuration of tiles, optionally with one distinguished tile.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Patch {
    pub tiles: Vec<Tile>,
    pub distinguished: Option<usize>,
}

impl Patch {
    pub fn new(tiles: Vec<Tile>) -> Self {
        Patch {
            tiles,
            distinguished: None,
        }
    }

    pub fn single(t: Tile) -> Self {
        Patch::new(vec![t])
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn area(&self, s: &SubstitutionSystem) -> ExactScalar {
        self.tiles
            .iter()
            .fold(ExactScalar::zero(), |acc, t| acc + s.prototile(t.proto).shape.area())
    }

    pub fn moved(&self, g: &Motion) -> Patch {
        Patch {
            tiles: self.tiles.iter().map(|t| t.moved(g)).collect(),
            distinguished: self.distinguished,
        }
    }
}

/// Replaces every tile by its children, `n` times.
pub fn substitute(p: &Patch, s: &SubstitutionSystem, n: u32) -> Patch {
    if n == 0 {
        return p.clone();
    }
    let mut tiles = p.tiles.clone();
    for _ in 0..n {
        tiles = tiles.iter().flat_map(|t| s.children(t)).collect();
    }
    Patch::new(tiles)
}

/// Polygons of a patch with float bounding boxes and a uniform grid, for
/// repeated neighbourhood queries.
pub struct PatchGeometry {
    pub polygons: Vec<Polygon>,
    pub boxes: Vec<(f64, f64, f64, f64)>,
    grid: Grid,
}

struct Grid {
    origin: (f64, f64),
    cell: f64,
    dims: (usize, usize),
    cells: Vec<Vec<usize>>,
}

impl Grid {
    fn new(boxes: &[(f64, f64, f64, f64)]) -> Grid {
        if boxes.is_empty() {
            return Grid {
                origin: (0.0, 0.0),
                cell: 1.0,
                dims: (1, 1),
                cells: vec![Vec::new()],
            };
        }
        let mut lo = (f64::INFINITY, f64::INFINITY);
        let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        let mut cell: f64 = 0.0;
        for b in boxes {
            lo = (lo.0.min(b.0), lo.1.min(b.1));
            hi = (hi.0.max(b.2), hi.1.max(b.3));
            cell = cell.max(b.2 - b.0).max(b.3 - b.1);
        }
        let cell = cell.max(1e-3) + 2.0 * BOX_SLACK;
        let dims = (
            ((hi.0 - lo.0) / cell) as usize + 1,
            ((hi.1 - lo.1) / cell) as usize + 1,
        );
        let mut g = Grid {
            origin: lo,
            cell,
            dims,
            cells: vec![Vec::new(); dims.0 * dims.1],
        };
        for (i, b) in boxes.iter().enumerate() {
            for c in g.cells_for(b) {
                g.cells[c].push(i);
            }
        }
        g
    }

    fn index(&self, v: f64, axis: usize) -> usize {
        let o = if axis == 0 { self.origin.0 } else { self.origin.1 };
        let d = if axis == 0 { self.dims.0 } else { self.dims.1 };
        let k = ((v - o) / self.cell).floor();
        if k < 0.0 {
            0
        } else {
            (k as usize).min(d - 1)
        }
    }

    fn cells_for(&self, b: &(f64, f64, f64, f64)) -> Vec<usize> {
        let (x0, x1) = (self.index(b.0 - BOX_SLACK, 0), self.index(b.2 + BOX_SLACK, 0));
        let (y0, y1) = (self.index(b.1 - BOX_SLACK, 1), self.index(b.3 + BOX_SLACK, 1));
        let mut out = Vec::new();
        for y in y0..=y1 {
            for x in x0..=x1 {
                out.push(y * self.dims.0 + x);
            }
        }
        out
    }

    fn candidates(&self, b: &(f64, f64, f64, f64)) -> Vec<usize> {
        let mut v: Vec<usize> = self.cells_for(b).into_iter().flat_map(|c| self.cells[c].iter().copied()).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

const BOX_SLACK: f64 = 1e-7;

fn boxes_meet(a: &(f64, f64, f64, f64), b: &(f64, f64, f64, f64)) -> bool {
    !(a.2 + BOX_SLACK < b.0 || b.2 + BOX_SLACK < a.0 || a.3 + BOX_SLACK < b.1 || b.3 + BOX_SLACK < a.1)
}

fn point_in_box(p: (f64, f64), b: &(f64, f64, f64, f64)) -> bool {
    p.0 >= b.0 - BOX_SLACK && p.0 <= b.2 + BOX_SLACK && p.1 >= b.1 - BOX_SLACK && p.1 <= b.3 + BOX_SLACK
}

impl PatchGeometry {
    pub fn new(p: &Patch, s: &SubstitutionSystem) -> Self {
        let polygons: Vec<Polygon> = p.tiles.iter().map(|t| s.polygon(t)).collect();
        let boxes: Vec<_> = polygons.iter().map(|q| q.bbox_f64()).collect();
        let grid = Grid::new(&boxes);
        PatchGeometry { polygons, boxes, grid }
    }

    /// Indices of tiles whose closed polygon meets `q`.
    pub fn meeting(&self, q: &Polygon) -> Vec<usize> {
        let b = q.bbox_f64();
        self.grid
            .candidates(&b)
            .into_iter()
            .filter(|&j| boxes_meet(&b, &self.boxes[j]) && q.meets(&self.polygons[j]))
            .collect()
    }

    /// Indices of tiles whose closed polygon meets tile `i` (including `i`).
    pub fn neighbours(&self, i: usize) -> Vec<usize> {
        self.grid
            .candidates(&self.boxes[i])
            .into_iter()
            .filter(|&j| {
                j == i
                    || (boxes_meet(&self.boxes[i], &self.boxes[j])
                        && !matches!(self.polygons[i].relation(&self.polygons[j]), PolygonRelation::Disjoint))
            })
            .collect()
    }

    /// Indices of tiles whose closed polygon contains `p`.
    pub fn containing(&self, p: &Point) -> Vec<usize> {
        let pf = p.to_f64();
        let b = (pf.0, pf.1, pf.0, pf.1);
        self.grid
            .candidates(&b)
            .into_iter()
            .filter(|&j| point_in_box(pf, &self.boxes[j]) && self.polygons[j].contains(p) != Containment::Outside)
            .collect()
    }

    /// True when a full neighbourhood of tile `i` is covered by the patch.
    pub fn is_surrounded(&self, i: usize) -> bool {
        let near = self.neighbours(i);
        let poly = &self.polygons[i];
        let mut points: Vec<Point> = poly.vertices().to_vec();
        for &j in &near {
            for v in self.polygons[j].vertices() {
                if poly.on_boundary(v) && !points.contains(v) {
                    points.push(v.clone());
                }
            }
        }
        points.iter().all(|w| {
            let around: Vec<&Polygon> = near
                .iter()
                .map(|&j| &self.polygons[j])
                .filter(|q| q.contains(w) != Containment::Outside)
                .collect();
            covers_neighbourhood(w, &around)
        })
    }
}

/// Interior wedge of a polygon at a boundary point `w`, as the pair of ray
/// directions bounding it counterclockwise.
fn wedge_at(poly: &Polygon, w: &Point) -> Option<(Point, Point)> {
    let vs = poly.vertices();
    let n = vs.len();
    for k in 0..n {
        if &vs[k] == w {
            let next = &vs[(k + 1) % n] - w;
            let prev = &vs[(k + n - 1) % n] - w;
            return Some((next, prev));
        }
    }
    for k in 0..n {
        let (a, b) = poly.edge(k);
        if crate::exact::strictly_inside_segment(w, a, b) {
            return Some((b - w, a - w));
        }
    }
    None
}

fn same_direction(a: &Point, b: &Point) -> bool {
    a.cross(b).is_zero() && a.dot(b).is_positive()
}

fn covers_neighbourhood(w: &Point, around: &[&Polygon]) -> bool {
    let wedges: Vec<(Point, Point)> = around.iter().filter_map(|q| wedge_at(q, w)).collect();
    if wedges.is_empty() {
        return false;
    }
    wedges
        .iter()
        .all(|(_, end)| wedges.iter().filter(|(start, _)| same_direction(start, end)).count() == 1)
}

/// Checks pairwise interior-disjointness of a patch exactly.
pub fn validate_patch(p: &Patch, s: &SubstitutionSystem) -> Result<()> {
    let g = PatchGeometry::new(p, s);
    for i in 0..p.len() {
        for j in g.grid.candidates(&g.boxes[i]) {
            if j > i
                && boxes_meet(&g.boxes[i], &g.boxes[j])
                && g.polygons[i].relation(&g.polygons[j]) == PolygonRelation::Overlap
            {
                return Err(Error::InvalidSystem(format!("tiles {i} and {j} overlap")));
            }
        }
    }
    Ok(())
}

/// Canonical form of a set of tiles relative to one anchor tile: every
/// symmetric frame of the anchor is tried and the lexicographically least
/// sorted tile list wins. Returns the list and the normalizing motion.
pub fn canonical_about(tiles: &[Tile], anchor: usize, s: &SubstitutionSystem) -> (Vec<Tile>, Motion) {
    let (list, mut ns) = canonical_about_all(tiles, anchor, s);
    (list, ns.swap_remove(0))
}

/// As [`canonical_about`], returning every normalizing motion that attains
/// the least form; more than one means the configuration is symmetric.
pub fn canonical_about_all(tiles: &[Tile], anchor: usize, s: &SubstitutionSystem) -> (Vec<Tile>, Vec<Motion>) {
    let a = &tiles[anchor];
    let mut best: Option<(Vec<Tile>, Vec<Motion>)> = None;
    for g in s.symmetry(a.proto) {
        let n = a.motion.compose(g).inverse();
        let mut list: Vec<Tile> = tiles.iter().map(|t| s.canonical_tile(&t.moved(&n))).collect();
        list.sort();
        match &mut best {
            Some(b) if list == b.0 => b.1.push(n),
            Some(b) if list > b.0 => {}
            _ => best = Some((list, vec![n])),
        }
    }
    best.expect("nonempty symmetry group")
}

/// The corona of tile `i` (all tiles meeting it, itself included), moved so
/// that tile `i` sits in its standard position and canonically ordered.
pub fn corona(p: &Patch, i: usize, s: &SubstitutionSystem) -> Result<Patch> {
    let g = PatchGeometry::new(p, s);
    corona_in(p, &g, i, s)
}

/// As [`corona`], reusing precomputed geometry.
pub fn corona_in(p: &Patch, g: &PatchGeometry, i: usize, s: &SubstitutionSystem) -> Result<Patch> {
    if !g.is_surrounded(i) {
        return Err(Error::NotInterior(i));
    }
    Ok(corona_unchecked(p, g, i, s))
}

pub(crate) fn corona_unchecked(p: &Patch, g: &PatchGeometry, i: usize, s: &SubstitutionSystem) -> Patch {
    corona_with_frames(p, g, i, s).0
}

/// Corona of tile `i` together with every frame of the tile in which the
/// corona takes its canonical form. A frame is the motion carrying the
/// standard position onto the tile; several frames mean a symmetric corona.
/// The caller guarantees that tile `i` is surrounded.
pub fn corona_with_frames(p: &Patch, g: &PatchGeometry, i: usize, s: &SubstitutionSystem) -> (Patch, Vec<Motion>) {
    let near: Vec<Tile> = g.neighbours(i).into_iter().map(|j| p.tiles[j].clone()).collect();
    let anchor = near.iter().position(|t| *t == p.tiles[i]).expect("tile meets itself");
    let (tiles, normalizers) = canonical_about_all(&near, anchor, s);
    let centre = s.canonical_tile(&Tile::new(p.tiles[i].proto, Motion::identity()));
    let d = tiles.iter().position(|t| *t == centre);
    let mut frames: Vec<Motion> = normalizers.iter().map(Motion::inverse).collect();
    frames.sort();
    (
        Patch {
            tiles,
            distinguished: d,
        },
        frames,
    )
}

/// Result of merging hypotenuse pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeOutcome {
    pub patch: Patch,
    /// Triangles whose hypotenuse partner is missing from the input.
    pub dropped: usize,
}

fn hypotenuse(poly: &Polygon) -> usize {
    (0..poly.len())
        .max_by(|&i, &j| {
            let (a, b) = poly.edge(i);
            let (c, d) = poly.edge(j);
            (b - a).norm2().cmp(&(d - c).norm2())
        })
        .expect("triangle has edges")
}

/// Merges triangles sharing a hypotenuse into kite-rectangle tiles of `kr`.
///
/// A pair related by a half turn becomes a rectangle whose chirality is that
/// of its triangles; a mirror pair becomes a kite.
pub fn merge_hypotenuses(p: &Patch, tri: &SubstitutionSystem, kr: &SubstitutionSystem) -> Result<MergeOutcome> {
    let mut groups: BTreeMap<(Point, Point), Vec<usize>> = BTreeMap::new();
    let polys: Vec<Polygon> = p.tiles.iter().map(|t| tri.polygon(t)).collect();
    for (i, poly) in polys.iter().enumerate() {
        let kind = tri.prototile(p.tiles[i].proto).kind;
        if !matches!(kind, TileKind::TriangleLeft | TileKind::TriangleRight) || poly.len() != 3 {
            return Err(Error::BadHypotenusePair(format!("tile {i} is not a triangle")));
        }
        let h = hypotenuse(poly);
        let (a, b) = poly.edge(h);
        let key = if a < b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
        groups.entry(key).or_default().push(i);
    }
    let find = |kind: TileKind| {
        kr.prototiles()
            .iter()
            .position(|q| q.kind == kind)
            .ok_or_else(|| Error::BadHypotenusePair(format!("no {} prototile", kind.name())))
    };
    let mut tiles = Vec::new();
    let mut dropped = 0;
    for ((ha, hb), members) in groups {
        match members.as_slice() {
            [_] => dropped += 1,
            &[i, j] => {
                let ki = tri.prototile(p.tiles[i].proto).kind;
                let kj = tri.prototile(p.tiles[j].proto).kind;
                let target_kind = match (ki, kj) {
                    (TileKind::TriangleLeft, TileKind::TriangleLeft) => TileKind::RectLeft,
                    (TileKind::TriangleRight, TileKind::TriangleRight) => TileKind::RectRight,
                    _ => TileKind::Kite,
                };
                let merged = merge_pair(&polys[i], &polys[j])?;
                let proto = find(target_kind)?;
                let shape = &kr.prototile(proto).shape;
                let diag_ok = |m: &Motion| {
                    kr.prototile(proto).marks.iter().all(|(u, v)| {
                        let (x, y) = (m.apply(u), m.apply(v));
                        (x == ha && y == hb) || (x == hb && y == ha)
                    })
                };
                let m = congruences(shape, &merged)
                    .into_iter()
                    .find(diag_ok)
                    .ok_or_else(|| {
                        Error::BadHypotenusePair(format!(
                            "triangles {i} and {j} form no {} tile",
                            target_kind.name()
                        ))
                    })?;
                tiles.push(kr.canonical_tile(&Tile::new(proto, m)));
            }
            _ => {
                return Err(Error::BadHypotenusePair(format!(
                    "{} triangles share one hypotenuse",
                    members.len()
                )))
            }
        }
    }
    tiles.sort();
    Ok(MergeOutcome {
        patch: Patch::new(tiles),
        dropped,
    })
}

/// Quadrilateral formed by two triangles glued along the first one's
/// hypotenuse.
fn merge_pair(t1: &Polygon, t2: &Polygon) -> Result<Polygon> {
    let h = hypotenuse(t1);
    let v = t1.vertices();
    let (a, b) = t1.edge(h);
    let apex = t2
        .vertices()
        .iter()
        .find(|w| *w != a && *w != b)
        .ok_or_else(|| Error::BadHypotenusePair("triangles do not share a hypotenuse".into()))?;
    let c = &v[(h + 2) % 3];
    Polygon::new(vec![a.clone(), apex.clone(), b.clone(), c.clone()])
        .map_err(|_| Error::BadHypotenusePair("glued triangles are not a simple quadrilateral".into()))
}

/// Left and right 1-2-√5 triangles with inflation √5 and five children each.
pub fn pinwheel_triangle_system() -> SubstitutionSystem {
    let left = int_polygon(&[(0, 0), (2, 0), (2, 1)]);
    let right = int_polygon(&[(0, 0), (2, -1), (2, 0)]);
    // Dissection of the inflated left triangle in an integer frame where the
    // hypotenuse runs from (0,0) to (5,0) and the right angle sits at (1,2).
    let frame_children: [[(i64, i64); 3]; 5] = [
        [(5, 0), (3, 0), (3, 1)],
        [(3, 0), (1, 0), (3, 1)],
        [(3, 1), (1, 0), (1, 1)],
        [(3, 1), (1, 1), (1, 2)],
        [(1, 0), (0, 0), (1, 2)],
    ];
    let c = ExactScalar::from_parts(0, 1, -2, 5);
    let sn = ExactScalar::from_parts(0, 1, -1, 5);
    let to_std = Motion::new(c, sn, Point::new(ExactScalar::from_parts(0, 1, 2, 1), ExactScalar::sqrt5()))
        .expect("rotation entries satisfy c² + s² = 1");
    let left_children: Vec<Polygon> = frame_children
        .iter()
        .map(|tri| {
            ccw_polygon(tri.iter().map(|&(x, y)| to_std.apply(&Point::from_ints(x, y))).collect())
                .expect("child triangle")
        })
        .collect();
    let mirror = |p: &Point| Point::new(p.x.clone(), -&p.y);
    let right_children: Vec<Polygon> = left_children
        .iter()
        .map(|q| ccw_polygon(q.vertices().iter().map(mirror).collect()).expect("mirrored triangle"))
        .collect();
    let protos = vec![
        Prototile::new("TL", TileKind::TriangleLeft, left),
        Prototile::new("TR", TileKind::TriangleRight, right),
    ];
    let identify = |q: &Polygon| -> Tile {
        for (i, p) in protos.iter().enumerate() {
            if let Some(m) = congruences(&p.shape, q).into_iter().next() {
                return Tile::new(i, m);
            }
        }
        panic!("triangle child matches no prototile");
    };
    let rules = vec![
        left_children.iter().map(identify).collect(),
        right_children.iter().map(identify).collect(),
    ];
    SubstitutionSystem::new(protos, ExactScalar::sqrt5(), rules).expect("triangle rule tiles the inflated triangle")
}

/// The kite-rectangle prototiles, with empty rules.
fn kr_prototiles() -> Vec<Prototile> {
    let rect = int_polygon(&[(0, 0), (2, 0), (2, 1), (0, 1)]);
    let kite = ccw_polygon(vec![
        Point::from_ints(0, 0),
        Point::from_ints(2, 0),
        Point::from_ints(2, 1),
        Point::from_ratios((6, 5), (8, 5)),
    ])
    .expect("kite");
    vec![
        Prototile::new("K", TileKind::Kite, kite).with_mark(Point::from_ints(0, 0), Point::from_ints(2, 1)),
        Prototile::new("L", TileKind::RectLeft, rect.clone()).with_mark(Point::from_ints(0, 0), Point::from_ints(2, 1)),
        Prototile::new("R", TileKind::RectRight, rect).with_mark(Point::from_ints(2, 0), Point::from_ints(0, 1)),
    ]
}

/// The two triangles of each kite-rectangle prototile, in triangle-system
/// tiles, indexed like the kite-rectangle prototiles.
pub fn kr_halves(tri: &SubstitutionSystem) -> Vec<[Tile; 2]> {
    let halves: [[&[(i64, i64, i64, i64)]; 2]; 3] = [
        [&[(0, 1, 0, 1), (2, 1, 0, 1), (2, 1, 1, 1)], &[(0, 1, 0, 1), (2, 1, 1, 1), (6, 5, 8, 5)]],
        [&[(0, 1, 0, 1), (2, 1, 0, 1), (2, 1, 1, 1)], &[(0, 1, 0, 1), (2, 1, 1, 1), (0, 1, 1, 1)]],
        [&[(0, 1, 0, 1), (2, 1, 0, 1), (0, 1, 1, 1)], &[(2, 1, 0, 1), (2, 1, 1, 1), (0, 1, 1, 1)]],
    ];
    halves
        .iter()
        .map(|pair| {
            let place = |pts: &[(i64, i64, i64, i64)]| -> Tile {
                let q = ccw_polygon(pts.iter().map(|&(a, b, c, d)| Point::from_ratios((a, b), (c, d))).collect())
                    .expect("half triangle");
                (0..tri.len())
                    .find_map(|i| tri.placements_onto(i, &q).into_iter().next().map(|m| Tile::new(i, m)))
                    .expect("half is a pinwheel triangle")
            };
            [place(pair[0]), place(pair[1])]
        })
        .collect()
}

/// Splits every kite-rectangle tile into its two triangles.
pub fn split_kr_patch(p: &Patch, tri: &SubstitutionSystem) -> Patch {
    let halves = kr_halves(tri);
    let mut tiles: Vec<Tile> = p
        .tiles
        .iter()
        .flat_map(|t| halves[t.proto].iter().map(|h| h.moved(&t.motion)).collect::<Vec<_>>())
        .collect();
    tiles.sort();
    Patch::new(tiles)
}

/// Kite-rectangle system obtained from two rounds of the triangle rule
/// followed by hypotenuse merging. Inflation 5, 25 children per prototile.
pub fn derive_kr_system() -> Result<SubstitutionSystem> {
    let tri = pinwheel_triangle_system();
    let protos = kr_prototiles();
    let placeholder = SubstitutionSystem {
        symmetry: protos.iter().map(|_| vec![Motion::identity()]).collect(),
        rules: protos.iter().map(|_| Vec::new()).collect(),
        prototiles: protos.clone(),
        inflation: ExactScalar::from_int(5),
    };
    let halves = kr_halves(&tri);
    let mut rules = Vec::new();
    for (p, pair) in halves.iter().enumerate() {
        let twice = substitute(&Patch::new(pair.to_vec()), &tri, 2);
        let merged = merge_hypotenuses(&twice, &tri, &placeholder)?;
        if merged.dropped != 0 {
            return Err(Error::BadHypotenusePair(format!(
                "{} triangles of the twice-substituted {} keep an unpaired hypotenuse",
                merged.dropped, protos[p].label
            )));
        }
        rules.push(merged.patch.tiles);
    }
    SubstitutionSystem::new(protos, ExactScalar::from_int(5), rules)
}

/// One square prototile with an orientation mark, inflation 2, four children.
pub fn toy_square_system() -> SubstitutionSystem {
    let sq = int_polygon(&[(0, 0), (1, 0), (1, 1), (0, 1)]);
    let proto = Prototile::new("S", TileKind::Other, sq).oriented();
    let rule = [(0, 0), (1, 0), (0, 1), (1, 1)]
        .iter()
        .map(|&(x, y)| Tile::new(0, Motion::translation(Point::from_ints(x, y))))
        .collect();
    SubstitutionSystem::new(vec![proto], ExactScalar::from_int(2), vec![rule]).expect("square rule")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squared_triangle_rule() {
        let s = pinwheel_triangle_system();
        let s2 = s.power(2).unwrap();
        assert_eq!(s2.inflation(), &ExactScalar::from_int(5));
        assert_eq!(s2.rule(0).len(), 25);
        assert!(s.power(0).is_err());
    }

    #[test]
    fn triangle_rule_shape() {
        let s = pinwheel_triangle_system();
        for p in 0..2 {
            assert_eq!(s.rule(p).len(), 5);
            let same = s.rule(p).iter().filter(|t| t.proto == p).count();
            assert_eq!(same, 2);
            assert_eq!(s.symmetry(p).len(), 1);
        }
        let parent = Patch::single(Tile::new(0, Motion::identity()));
        let kids = substitute(&parent, &s, 1);
        assert_eq!(kids.area(&s), ExactScalar::from_int(5) * parent.area(&s));
    }

    fn quarter_turns() -> Vec<Motion> {
        let (z, o) = (ExactScalar::zero(), ExactScalar::one());
        vec![
            Motion::rotation(o.clone(), z.clone()).unwrap(),
            Motion::rotation(z.clone(), o.clone()).unwrap(),
            Motion::rotation(-&o, z.clone()).unwrap(),
            Motion::rotation(z, -&o).unwrap(),
        ]
    }

    fn rotated_by(rel: &Motion, r: &Motion) -> bool {
        quarter_turns()
            .iter()
            .any(|q| q.compose(r).same_rotation(rel) || q.compose(&r.inverse()).same_rotation(rel))
    }

    #[test]
    fn substitution_rotates_by_pinwheel_angle() {
        let s = pinwheel_triangle_system();
        let theta = Motion::pinwheel_rotation();
        let parent = Tile::new(0, Motion::identity());
        for c in s.children(&parent) {
            assert!(rotated_by(&c.motion, &theta));
        }
        let p = substitute(&Patch::single(parent), &s, 2);
        assert_eq!(p.len(), 25);
        let two_theta = theta.compose(&theta);
        let same_hand: Vec<&Tile> = p.tiles.iter().filter(|t| t.proto == 0).collect();
        let found = same_hand.iter().any(|a| {
            same_hand
                .iter()
                .any(|b| rotated_by(&a.motion.inverse().compose(&b.motion), &two_theta))
        });
        assert!(found);
        validate_patch(&p, &s).unwrap();
    }

    #[test]
    fn kr_rule() {
        let kr = derive_kr_system().unwrap();
        assert_eq!(kr.inflation(), &ExactScalar::from_int(5));
        for p in 0..3 {
            assert_eq!(kr.rule(p).len(), 25);
        }
        let kite_children: Vec<usize> = kr.rule(0).iter().map(|t| t.proto).collect();
        for q in 0..3 {
            assert!(kite_children.contains(&q));
        }
        assert_eq!(kr.symmetry(0).len(), 1);
        assert_eq!(kr.symmetry(1).len(), 2);
        assert_eq!(kr.symmetry(2).len(), 2);
        assert_eq!(kr.primitivity_power(4), Some(1));
    }

    #[test]
    fn merge_examples() {
        let tri = pinwheel_triangle_system();
        let kr = derive_kr_system().unwrap();
        let halves = kr_halves(&tri);
        for (p, pair) in halves.iter().enumerate() {
            let out = merge_hypotenuses(&Patch::new(pair.to_vec()), &tri, &kr).unwrap();
            assert_eq!(out.dropped, 0);
            assert_eq!(out.patch.tiles, vec![kr.canonical_tile(&Tile::new(p, Motion::identity()))]);
        }
        let out = merge_hypotenuses(&Patch::single(halves[0][0].clone()), &tri, &kr).unwrap();
        assert_eq!(out.dropped, 1);
        assert!(out.patch.is_empty());
    }

    #[test]
    fn merge_commutes_with_substitution() {
        let tri = pinwheel_triangle_system();
        let kr = derive_kr_system().unwrap();
        let start = Patch::single(Tile::new(0, Motion::identity()));
        let kr2 = substitute(&start, &kr, 1);
        let mut lhs = kr2.tiles.clone();
        lhs.sort();
        let tri2 = substitute(&split_kr_patch(&start, &tri), &tri, 2);
        let rhs = merge_hypotenuses(&tri2, &tri, &kr).unwrap();
        assert_eq!(lhs, rhs.patch.tiles);
        let mut back = split_kr_patch(&rhs.patch, &tri).tiles;
        back.sort();
        let mut orig = tri2.tiles;
        orig.sort();
        assert_eq!(back, orig);
    }

    #[test]
    fn toy_square() {
        let s = toy_square_system();
        assert_eq!(s.symmetry(0).len(), 1);
        let p = substitute(&Patch::single(Tile::new(0, Motion::identity())), &s, 2);
        assert_eq!(p.len(), 16);
        let g = PatchGeometry::new(&p, &s);
        let interior: Vec<usize> = (0..p.len()).filter(|&i| g.is_surrounded(i)).collect();
        assert_eq!(interior.len(), 4);
        let c = corona(&p, interior[0], &s).unwrap();
        assert_eq!(c.len(), 9);
        assert!(corona(&p, 0, &s).is_err());
    }

    #[test]
    fn corona_is_motion_invariant() {
        let kr = derive_kr_system().unwrap();
        let p = substitute(&Patch::single(Tile::new(0, Motion::identity())), &kr, 1);
        let g = PatchGeometry::new(&p, &kr);
        let i = (0..p.len()).find(|&i| g.is_surrounded(i)).expect("an interior tile");
        let c1 = corona(&p, i, &kr).unwrap();
        let moved = p.moved(&Motion::pinwheel_rotation().compose(&Motion::translation(Point::from_ints(3, -7))));
        let moved = Patch::new(moved.tiles.iter().map(|t| kr.canonical_tile(t)).collect());
        let c2 = corona(&moved, i, &kr).unwrap();
        assert_eq!(c1, c2);
    }
}
