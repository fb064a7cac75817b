//! Exact arithmetic in Q(√5) and exact planar geometry.
//!
//! Every coordinate that appears in a pinwheel-family tiling is of the form
//! `a + b·√5` with rational `a`, `b`, so incidence and orientation tests are
//! decided exactly. Nothing in this module uses a tolerance.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rat::Rat;

const SQRT5_F64: f64 = 2.236_067_977_499_79;

/// A number `a + b·√5` with `a, b` rational.
///
/// Fractions are always reduced, so structural equality and hashing agree
/// with numeric equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct ExactScalar {
    a: Rat,
    b: Rat,
}

/// Field operations accepted by [`scalar_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Applies one field operation; division by zero is an error.
pub fn scalar_arith(x: &ExactScalar, y: &ExactScalar, op: ArithOp) -> Result<ExactScalar> {
    Ok(match op {
        ArithOp::Add => x + y,
        ArithOp::Sub => x - y,
        ArithOp::Mul => x * y,
        ArithOp::Div => x.checked_div(y)?,
    })
}

impl ExactScalar {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        ExactScalar {
            a: Rat::from_big(a),
            b: Rat::from_big(b),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn sqrt5() -> Self {
        ExactScalar {
            a: Rat::zero(),
            b: Rat::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        ExactScalar {
            a: Rat::int(n),
            b: Rat::zero(),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        ExactScalar {
            a: Rat::new(num, den),
            b: Rat::zero(),
        }
    }

    /// `(a_num/a_den) + (b_num/b_den)·√5`.
    pub fn from_parts(a_num: i64, a_den: i64, b_num: i64, b_den: i64) -> Self {
        ExactScalar {
            a: Rat::new(a_num, a_den),
            b: Rat::new(b_num, b_den),
        }
    }

    pub fn rational_part(&self) -> BigRational {
        self.a.to_big()
    }

    pub fn sqrt5_part(&self) -> BigRational {
        self.b.to_big()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Returns the value as an integer when it is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        if self.b.is_zero() && self.a.is_integer() {
            Some(self.a.numer())
        } else {
            None
        }
    }

    /// Conjugate `a − b·√5`.
    pub fn conjugate(&self) -> Self {
        ExactScalar {
            a: self.a.clone(),
            b: -&self.b,
        }
    }

    /// Field norm `a² − 5b²`.
    pub fn norm(&self) -> BigRational {
        self.norm_rat().to_big()
    }

    fn norm_rat(&self) -> Rat {
        &(&self.a * &self.a) - &(&(&self.b * &self.b) * &Rat::int(5))
    }

    /// Exact sign, decided by comparing `a²` with `5b²`.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.signum();
        let sb = self.b.signum();
        match (sa, sb) {
            (s, Ordering::Equal) => s,
            (Ordering::Equal, s) => s,
            (x, y) if x == y => x,
            _ => {
                let a2 = &self.a * &self.a;
                let b2 = &(&self.b * &self.b) * &Rat::int(5);
                // a² = 5b² has no nonzero rational solution
                if a2 > b2 {
                    sa
                } else {
                    sb
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Result<Self> {
        let n = self.norm_rat();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(ExactScalar {
            a: &self.a / &n,
            b: -&(&self.b / &n),
        })
    }

    pub fn checked_div(&self, rhs: &ExactScalar) -> Result<Self> {
        Ok(self * &rhs.recip()?)
    }

    /// Division by a nonzero rational.
    pub fn div_rational(&self, d: &BigRational) -> Result<Self> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let d = Rat::from_big(d.clone());
        Ok(ExactScalar {
            a: &self.a / &d,
            b: &self.b / &d,
        })
    }

    pub fn scale_int(&self, k: i64) -> Self {
        let k = Rat::int(k);
        ExactScalar {
            a: &self.a * &k,
            b: &self.b * &k,
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// Floating-point approximation, for rendering and cross-checks only.
    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64();
        let b = self.b.to_f64();
        a + b * SQRT5_F64
    }
}

impl PartialOrd for ExactScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        (self - other).signum()
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl<'a, 'b> $trait<&'b ExactScalar> for &'a ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &'b ExactScalar) -> ExactScalar {
                let f: fn(&ExactScalar, &ExactScalar) -> ExactScalar = $body;
                f(self, rhs)
            }
        }
        impl $trait<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$method(&rhs)
            }
        }
        impl<'b> $trait<&'b ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &'b ExactScalar) -> ExactScalar {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<ExactScalar> for &'a ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |x, y| ExactScalar {
    a: &x.a + &y.a,
    b: &x.b + &y.b,
});
forward_binop!(Sub, sub, |x, y| ExactScalar {
    a: &x.a - &y.a,
    b: &x.b - &y.b,
});
forward_binop!(Mul, mul, |x, y| {
    if x.b.is_zero() && y.b.is_zero() {
        return ExactScalar {
            a: &x.a * &y.a,
            b: Rat::zero(),
        };
    }
    let bb = &x.b * &y.b;
    ExactScalar {
        a: &(&x.a * &y.a) + &(&bb * &Rat::int(5)),
        b: &(&x.a * &y.b) + &(&x.b * &y.a),
    }
});

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar {
            a: -&self.a,
            b: -&self.b,
        }
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar {
            a: -&self.a,
            b: -&self.b,
        }
    }
}

fn fmt_ratio(r: &Rat) -> String {
    alloc::format!("{}/{}", r.numer(), r.denom())
}

/// Serialized as `a_num/a_den+b_num/b_den*sqrt5`.
impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}*sqrt5", fmt_ratio(&self.a), fmt_ratio(&self.b))
    }
}

fn parse_ratio(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

impl FromStr for ExactScalar {
    type Err = Error;

    /// Accepts the canonical form as well as the abbreviations `p/q`,
    /// `p/q*sqrt5` and `sqrt5`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(alloc::format!("malformed scalar {s:?}"));
        let t = s.trim();
        let (a_str, b_str) = match t.strip_suffix("sqrt5") {
            Some(head) => {
                let head = head.strip_suffix('*').unwrap_or(head);
                // the sqrt5 coefficient starts after the last '+' that is not a sign
                match head.rfind('+').filter(|&i| i > 0) {
                    Some(i) => (&head[..i], &head[i + 1..]),
                    None => ("0", head),
                }
            }
            None => (t, "0"),
        };
        let a = parse_ratio(a_str).ok_or_else(bad)?;
        let b = match b_str.trim() {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            other => parse_ratio(other).ok_or_else(bad)?,
        };
        Ok(ExactScalar::new(a, b))
    }
}

/// A point of the plane with exact coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct Point {
    pub x: ExactScalar,
    pub y: ExactScalar,
}

impl Point {
    pub fn new(x: ExactScalar, y: ExactScalar) -> Self {
        Point { x, y }
    }

    pub fn origin() -> Self {
        Self::default()
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point::new(ExactScalar::from_int(x), ExactScalar::from_int(y))
    }

    pub fn from_ratios(x: (i64, i64), y: (i64, i64)) -> Self {
        Point::new(
            ExactScalar::from_ratio(x.0, x.1),
            ExactScalar::from_ratio(y.0, y.1),
        )
    }

    pub fn dot(&self, o: &Point) -> ExactScalar {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn cross(&self, o: &Point) -> ExactScalar {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn norm2(&self) -> ExactScalar {
        self.dot(self)
    }

    pub fn scale(&self, k: &ExactScalar) -> Point {
        Point::new(&self.x * k, &self.y * k)
    }

    pub fn midpoint(&self, o: &Point) -> Point {
        let half = ExactScalar::from_ratio(1, 2);
        Point::new((&self.x + &o.x) * &half, (&self.y + &o.y) * &half)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

impl Add for &Point {
    type Output = Point;
    fn add(self, o: &Point) -> Point {
        Point::new(&self.x + &o.x, &self.y + &o.y)
    }
}

impl Sub for &Point {
    type Output = Point;
    fn sub(self, o: &Point) -> Point {
        Point::new(&self.x - &o.x, &self.y - &o.y)
    }
}

impl Neg for &Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-&self.x, -&self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Orientation of the triple `(a, b, c)`: `Greater` for counterclockwise.
pub fn orient(a: &Point, b: &Point, c: &Point) -> Ordering {
    (b - a).cross(&(c - a)).signum()
}

/// True when `p` lies on the closed segment `[a, b]`.
pub fn on_segment(p: &Point, a: &Point, b: &Point) -> bool {
    if orient(a, b, p) != Ordering::Equal {
        return false;
    }
    let ap = p - a;
    let ab = b - a;
    let t = ap.dot(&ab);
    !t.is_negative() && t <= ab.norm2()
}

/// True when `p` lies on the open segment `(a, b)`.
pub fn strictly_inside_segment(p: &Point, a: &Point, b: &Point) -> bool {
    p != a && p != b && on_segment(p, a, b)
}

/// A proper rotation `[[c, −s], [s, c]]` followed by a translation.
///
/// Reflections are not motions: mirrored tiles are separate prototiles.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Motion {
    cos: ExactScalar,
    sin: ExactScalar,
    translation: Point,
}

impl Default for Motion {
    fn default() -> Self {
        Motion::identity()
    }
}

impl Motion {
    pub fn identity() -> Self {
        Motion {
            cos: ExactScalar::one(),
            sin: ExactScalar::zero(),
            translation: Point::origin(),
        }
    }

    /// Builds a motion from its rotation part; fails unless `c² + s² = 1`.
    pub fn new(cos: ExactScalar, sin: ExactScalar, translation: Point) -> Result<Self> {
        if cos.square() + sin.square() != ExactScalar::one() {
            return Err(Error::NotARotation);
        }
        Ok(Motion {
            cos,
            sin,
            translation,
        })
    }

    pub fn translation(t: Point) -> Self {
        Motion {
            translation: t,
            ..Motion::identity()
        }
    }

    /// Rotation about the origin.
    pub fn rotation(cos: ExactScalar, sin: ExactScalar) -> Result<Self> {
        Motion::new(cos, sin, Point::origin())
    }

    /// Rotation by π about `center`.
    pub fn half_turn_about(center: &Point) -> Self {
        Motion {
            cos: ExactScalar::from_int(-1),
            sin: ExactScalar::zero(),
            translation: center.scale(&ExactScalar::from_int(2)),
        }
    }

    /// Rotation by `arctan(1/2)`: cos = (2/5)√5, sin = (1/5)√5.
    pub fn pinwheel_rotation() -> Self {
        Motion {
            cos: ExactScalar::from_parts(0, 1, 2, 5),
            sin: ExactScalar::from_parts(0, 1, 1, 5),
            translation: Point::origin(),
        }
    }

    /// The rotation about the origin taking direction `from` to direction
    /// `to`; both vectors must have equal nonzero length.
    pub fn rotation_between(from: &Point, to: &Point) -> Result<Self> {
        let n = from.norm2();
        if n.is_zero() || n != to.norm2() {
            return Err(Error::NotARotation);
        }
        let cos = from.dot(to).checked_div(&n)?;
        let sin = from.cross(to).checked_div(&n)?;
        Ok(Motion {
            cos,
            sin,
            translation: Point::origin(),
        })
    }

    /// The unique motion with `m(a0) = b0` and `m(a1) = b1`, if the
    /// segments have equal length.
    pub fn from_segment_pair(a0: &Point, a1: &Point, b0: &Point, b1: &Point) -> Result<Self> {
        let r = Motion::rotation_between(&(a1 - a0), &(b1 - b0))?;
        let t = b0 - &r.apply_linear(a0);
        Ok(Motion {
            translation: t,
            ..r
        })
    }

    pub fn cos(&self) -> &ExactScalar {
        &self.cos
    }

    pub fn sin(&self) -> &ExactScalar {
        &self.sin
    }

    pub fn translation_part(&self) -> &Point {
        &self.translation
    }

    /// Linear part as a row-major 2×2 matrix.
    pub fn linear(&self) -> [[ExactScalar; 2]; 2] {
        [
            [self.cos.clone(), -&self.sin],
            [self.sin.clone(), self.cos.clone()],
        ]
    }

    pub fn apply_linear(&self, p: &Point) -> Point {
        Point::new(
            &self.cos * &p.x - &self.sin * &p.y,
            &self.sin * &p.x + &self.cos * &p.y,
        )
    }

    pub fn apply(&self, p: &Point) -> Point {
        &self.apply_linear(p) + &self.translation
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Motion) -> Motion {
        Motion {
            cos: &self.cos * &other.cos - &self.sin * &other.sin,
            sin: &self.sin * &other.cos + &self.cos * &other.sin,
            translation: self.apply(&other.translation),
        }
    }

    pub fn inverse(&self) -> Motion {
        let inv = Motion {
            cos: self.cos.clone(),
            sin: -&self.sin,
            translation: Point::origin(),
        };
        let t = -&inv.apply_linear(&self.translation);
        Motion {
            translation: t,
            ..inv
        }
    }

    /// Conjugates by the homothety `x ↦ k·x`: the result `m'` satisfies
    /// `m'(k·x) = k·m(x)`.
    pub fn scaled(&self, k: &ExactScalar) -> Motion {
        Motion {
            cos: self.cos.clone(),
            sin: self.sin.clone(),
            translation: self.translation.scale(k),
        }
    }

    pub fn same_rotation(&self, other: &Motion) -> bool {
        self.cos == other.cos && self.sin == other.sin
    }

    pub fn is_identity(&self) -> bool {
        *self == Motion::identity()
    }

    /// Rotation angle in radians, for rendering only.
    pub fn angle_f64(&self) -> f64 {
        libm_atan2(self.sin.to_f64(), self.cos.to_f64())
    }
}

// core has no atan2; a series-free fallback good to ~1e-9 is plenty for SVG output
fn libm_atan2(y: f64, x: f64) -> f64 {
    const PI: f64 = core::f64::consts::PI;
    if x == 0.0 && y == 0.0 {
        return 0.0;
    }
    let (ax, ay) = (if x < 0.0 { -x } else { x }, if y < 0.0 { -y } else { y });
    let (num, den, swap) = if ay > ax { (ax, ay, true) } else { (ay, ax, false) };
    let t = num / den;
    // atan on [0, 1] by argument halving and a short series
    let mut z = t;
    let mut halvings = 0;
    while z > 0.1 {
        z = z / (1.0 + sqrt_f64(1.0 + z * z));
        halvings += 1;
    }
    let z2 = z * z;
    let mut atan = z * (1.0 - z2 / 3.0 + z2 * z2 / 5.0 - z2 * z2 * z2 / 7.0 + z2 * z2 * z2 * z2 / 9.0);
    for _ in 0..halvings {
        atan *= 2.0;
    }
    if swap {
        atan = PI / 2.0 - atan;
    }
    match (x < 0.0, y < 0.0) {
        (false, false) => atan,
        (true, false) => PI - atan,
        (true, true) => -PI + atan,
        (false, true) => -atan,
    }
}

fn sqrt_f64(v: f64) -> f64 {
    if v <= 0.0 {
        return 0.0;
    }
    let mut g = if v > 1.0 { v } else { 1.0 };
    for _ in 0..60 {
        let n = 0.5 * (g + v / g);
        if n == g {
            break;
        }
        g = n;
    }
    g
}

impl fmt::Display for Motion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rot[{}, {}] + {}", self.cos, self.sin, self.translation)
    }
}

/// How two closed polygons meet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolygonRelation {
    /// The closed polygons are disjoint.
    Disjoint,
    /// Interiors are disjoint and at least one full edge is shared; pairs are
    /// `(edge of p, edge of q)`.
    SharedEdges(Vec<(usize, usize)>),
    /// Interiors are disjoint, boundaries meet, but no full edge is shared.
    Touching,
    /// Interiors intersect.
    Overlap,
}

/// A simple counterclockwise polygon.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Polygon {
    vertices: Vec<Point>,
}

/// Position of a point relative to a polygon.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Containment {
    Inside,
    Boundary,
    Outside,
}

impl Polygon {
    /// Validates and builds a polygon: at least three distinct vertices,
    /// positive signed area, no self-intersection.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::DegeneratePolygon("fewer than three vertices".into()));
        }
        for i in 0..vertices.len() {
            for j in i + 1..vertices.len() {
                if vertices[i] == vertices[j] {
                    return Err(Error::DegeneratePolygon("repeated vertex".into()));
                }
            }
        }
        let poly = Polygon { vertices };
        let area = poly.signed_area2();
        if area.is_zero() {
            return Err(Error::DegeneratePolygon("zero area".into()));
        }
        if area.is_negative() {
            return Err(Error::DegeneratePolygon("clockwise orientation".into()));
        }
        let n = poly.len();
        for i in 0..n {
            let a = &poly.vertices[(i + n - 1) % n];
            let b = &poly.vertices[i];
            let c = &poly.vertices[(i + 1) % n];
            if orient(a, b, c) == Ordering::Equal && (b - a).dot(&(c - b)).is_negative() {
                return Err(Error::DegeneratePolygon("folded edge".into()));
            }
        }
        for i in 0..n {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (a, b) = poly.edge(i);
                let (c, d) = poly.edge(j);
                if segments_intersect(a, b, c, d) {
                    return Err(Error::DegeneratePolygon("self-intersection".into()));
                }
            }
        }
        Ok(poly)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edge `i` runs from vertex `i` to vertex `i + 1`.
    pub fn edge(&self, i: usize) -> (&Point, &Point) {
        let n = self.vertices.len();
        (&self.vertices[i % n], &self.vertices[(i + 1) % n])
    }

    pub fn signed_area2(&self) -> ExactScalar {
        let n = self.vertices.len();
        let mut acc = ExactScalar::zero();
        for i in 0..n {
            acc = acc + self.vertices[i].cross(&self.vertices[(i + 1) % n]);
        }
        acc
    }

    pub fn area(&self) -> ExactScalar {
        self.signed_area2() * ExactScalar::from_ratio(1, 2)
    }

    /// Vertex average; the center of symmetry for centrally symmetric shapes.
    pub fn centroid(&self) -> Point {
        let n = self.vertices.len() as i64;
        let mut x = ExactScalar::zero();
        let mut y = ExactScalar::zero();
        for v in &self.vertices {
            x = x + &v.x;
            y = y + &v.y;
        }
        let k = ExactScalar::from_ratio(1, n);
        Point::new(x * &k, y * &k)
    }

    /// Image under a motion; orientation and simplicity are preserved.
    pub fn transformed(&self, m: &Motion) -> Polygon {
        Polygon {
            vertices: self.vertices.iter().map(|p| m.apply(p)).collect(),
        }
    }

    pub fn scaled(&self, k: &ExactScalar) -> Polygon {
        Polygon {
            vertices: self.vertices.iter().map(|p| p.scale(k)).collect(),
        }
    }

    pub fn contains(&self, p: &Point) -> Containment {
        let n = self.vertices.len();
        for i in 0..n {
            let (a, b) = self.edge(i);
            if on_segment(p, a, b) {
                return Containment::Boundary;
            }
        }
        // crossing number with a horizontal ray, exact
        let mut inside = false;
        for i in 0..n {
            let (a, b) = self.edge(i);
            let a_above = a.y > p.y;
            let b_above = b.y > p.y;
            if a_above != b_above {
                // x-coordinate of the crossing compared with p.x, sign-corrected
                let o = orient(a, b, p);
                let upward = b.y > a.y;
                if (o == Ordering::Greater) == upward {
                    inside = !inside;
                }
            }
        }
        if inside {
            Containment::Inside
        } else {
            Containment::Outside
        }
    }

    pub fn on_boundary(&self, p: &Point) -> bool {
        (0..self.len()).any(|i| {
            let (a, b) = self.edge(i);
            on_segment(p, a, b)
        })
    }

    /// Floating-point bounding box `(xmin, ymin, xmax, ymax)`.
    pub fn bbox_f64(&self) -> (f64, f64, f64, f64) {
        let mut b = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in &self.vertices {
            let (x, y) = v.to_f64();
            b.0 = b.0.min(x);
            b.1 = b.1.min(y);
            b.2 = b.2.max(x);
            b.3 = b.3.max(y);
        }
        b
    }

    /// Exact relation between two polygons.
    pub fn relation(&self, q: &Polygon) -> PolygonRelation {
        if !bboxes_meet(&self.bbox_f64(), &q.bbox_f64()) {
            return PolygonRelation::Disjoint;
        }
        if interiors_overlap(self, q) {
            return PolygonRelation::Overlap;
        }
        let mut shared = Vec::new();
        for i in 0..self.len() {
            let (a, b) = self.edge(i);
            for j in 0..q.len() {
                let (c, d) = q.edge(j);
                if (a == c && b == d) || (a == d && b == c) {
                    shared.push((i, j));
                }
            }
        }
        if !shared.is_empty() {
            return PolygonRelation::SharedEdges(shared);
        }
        let touching = self.vertices.iter().any(|v| q.on_boundary(v))
            || q.vertices.iter().any(|v| self.on_boundary(v));
        if touching {
            PolygonRelation::Touching
        } else {
            PolygonRelation::Disjoint
        }
    }

    /// True when the closed polygons have a common point.
    pub fn meets(&self, q: &Polygon) -> bool {
        !matches!(self.relation(q), PolygonRelation::Disjoint)
    }
}

/// Float boxes widened by a margin far above the rounding error of the
/// coordinates in use, so a negative answer is always exact.
fn bboxes_meet(a: &(f64, f64, f64, f64), b: &(f64, f64, f64, f64)) -> bool {
    const SLACK: f64 = 1e-7;
    !(a.2 + SLACK < b.0 || b.2 + SLACK < a.0 || a.3 + SLACK < b.1 || b.3 + SLACK < a.1)
}

fn segments_intersect(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 != o2 && o3 != o4 && o1 != Ordering::Equal && o2 != Ordering::Equal
        && o3 != Ordering::Equal && o4 != Ordering::Equal
    {
        return true;
    }
    on_segment(c, a, b) || on_segment(d, a, b) || on_segment(a, c, d) || on_segment(b, c, d)
}

fn proper_crossing(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    o1 != Ordering::Equal
        && o2 != Ordering::Equal
        && o3 != Ordering::Equal
        && o4 != Ordering::Equal
        && o1 != o2
        && o3 != o4
}

fn interiors_overlap(p: &Polygon, q: &Polygon) -> bool {
    for i in 0..p.len() {
        let (a, b) = p.edge(i);
        for j in 0..q.len() {
            let (c, d) = q.edge(j);
            if proper_crossing(a, b, c, d) {
                return true;
            }
        }
    }
    if p.vertices.iter().any(|v| q.contains(v) == Containment::Inside)
        || q.vertices.iter().any(|v| p.contains(v) == Containment::Inside)
    {
        return true;
    }
    edge_pieces_enter(p, q) || edge_pieces_enter(q, p)
}

/// Splits each edge of `p` at the vertices of `q` and tests every piece's
/// midpoint against `q`. A midpoint on an edge of `q` running in the same
/// direction means the interiors lie on the same side.
fn edge_pieces_enter(p: &Polygon, q: &Polygon) -> bool {
    for i in 0..p.len() {
        let (a, b) = p.edge(i);
        let mut cuts: Vec<Point> = q
            .vertices
            .iter()
            .filter(|v| strictly_inside_segment(v, a, b))
            .cloned()
            .collect();
        let dir = b - a;
        cuts.sort_by(|u, v| (u - a).dot(&dir).cmp(&(v - a).dot(&dir)));
        let mut pts = Vec::with_capacity(cuts.len() + 2);
        pts.push(a.clone());
        pts.extend(cuts);
        pts.push(b.clone());
        for w in pts.windows(2) {
            let m = w[0].midpoint(&w[1]);
            match q.contains(&m) {
                Containment::Inside => return true,
                Containment::Boundary => {
                    for j in 0..q.len() {
                        let (c, d) = q.edge(j);
                        if on_segment(&m, c, d)
                            && orient(c, d, a) == Ordering::Equal
                            && orient(c, d, b) == Ordering::Equal
                            && (d - c).dot(&dir).is_positive()
                        {
                            return true;
                        }
                    }
                }
                Containment::Outside => {}
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn s(a: (i64, i64), b: (i64, i64)) -> ExactScalar {
        ExactScalar::from_parts(a.0, a.1, b.0, b.1)
    }

    #[test]
    fn sqrt5_squared_is_five() {
        let r = ExactScalar::sqrt5() * ExactScalar::sqrt5();
        assert_eq!(r, ExactScalar::from_int(5));
    }

    #[test]
    fn pinwheel_angle_is_on_unit_circle() {
        let c = s((0, 1), (2, 5));
        let sn = s((0, 1), (1, 5));
        assert_eq!(c.square() + sn.square(), ExactScalar::one());
    }

    #[test]
    fn golden_ratio_minimal_polynomial() {
        let phi = s((1, 2), (1, 2));
        let residual = phi.square() - &phi - ExactScalar::one();
        assert!(residual.is_zero());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let r = scalar_arith(&ExactScalar::one(), &ExactScalar::zero(), ArithOp::Div);
        assert_eq!(r, Err(Error::DivisionByZero));
        let q = scalar_arith(&ExactScalar::one(), &ExactScalar::sqrt5(), ArithOp::Div).unwrap();
        assert_eq!(q, s((0, 1), (1, 5)));
    }

    #[test]
    fn sign_of_mixed_terms() {
        // 9/4 − √5 > 0 since 81/16 > 5
        assert!(s((9, 4), (-1, 1)).is_positive());
        // 2 − √5 < 0
        assert!(s((2, 1), (-1, 1)).is_negative());
        assert!(s((-3, 1), (3, 2)).is_positive());
    }

    #[test]
    fn display_and_parse() {
        let x = s((-3, 4), (5, 6));
        assert_eq!(x.to_string(), "-3/4+5/6*sqrt5");
        assert_eq!(x.to_string().parse::<ExactScalar>().unwrap(), x);
        let y = s((1, 2), (-1, 3));
        assert_eq!(y.to_string(), "1/2+-1/3*sqrt5");
        assert_eq!(y.to_string().parse::<ExactScalar>().unwrap(), y);
        assert_eq!("sqrt5".parse::<ExactScalar>().unwrap(), ExactScalar::sqrt5());
        assert_eq!("-2/5*sqrt5".parse::<ExactScalar>().unwrap(), s((0, 1), (-2, 5)));
        assert_eq!("7".parse::<ExactScalar>().unwrap(), ExactScalar::from_int(7));
        assert!("1/0".parse::<ExactScalar>().is_err());
        assert!("abc".parse::<ExactScalar>().is_err());
    }

    #[test]
    fn compose_with_identity() {
        let m = Motion::new(s((3, 5), (0, 1)), s((4, 5), (0, 1)), Point::from_ints(2, -1)).unwrap();
        assert_eq!(Motion::identity().compose(&m), m);
        assert_eq!(m.compose(&Motion::identity()), m);
        assert!(m.compose(&m.inverse()).is_identity());
    }

    #[test]
    fn pinwheel_rotation_group_inverse() {
        let r = Motion::pinwheel_rotation();
        let r2 = r.compose(&r);
        let back = Motion::rotation(r2.cos().clone(), -r2.sin()).unwrap();
        assert!(r2.compose(&back).is_identity());
        let lin = r.linear();
        assert_eq!(lin[0][0], s((0, 1), (2, 5)));
        assert_eq!(lin[0][1], s((0, 1), (-1, 5)));
        assert_eq!(lin[1][0], s((0, 1), (1, 5)));
        assert_eq!(lin[1][1], s((0, 1), (2, 5)));
    }

    #[test]
    fn reflections_rejected() {
        assert_eq!(
            Motion::new(ExactScalar::from_int(2), ExactScalar::zero(), Point::origin()),
            Err(Error::NotARotation)
        );
    }

    fn unit_square(dx: i64, dy: i64) -> Polygon {
        Polygon::new(alloc::vec![
            Point::from_ints(dx, dy),
            Point::from_ints(dx + 1, dy),
            Point::from_ints(dx + 1, dy + 1),
            Point::from_ints(dx, dy + 1),
        ])
        .unwrap()
    }

    #[test]
    fn square_relations() {
        let a = unit_square(0, 0);
        assert_eq!(a.relation(&unit_square(1, 0)), PolygonRelation::SharedEdges(alloc::vec![(1, 3)]));
        assert_eq!(a.relation(&unit_square(2, 0)), PolygonRelation::Disjoint);
        assert_eq!(a.relation(&a), PolygonRelation::Overlap);
        assert_eq!(a.relation(&unit_square(1, 1)), PolygonRelation::Touching);
    }

    #[test]
    fn inscribed_polygon_overlaps() {
        let big = Polygon::new(alloc::vec![
            Point::from_ints(0, 0),
            Point::from_ints(2, 0),
            Point::from_ints(2, 2),
            Point::from_ints(0, 2),
        ])
        .unwrap();
        let diamond = Polygon::new(alloc::vec![
            Point::from_ints(1, 0),
            Point::from_ints(2, 1),
            Point::from_ints(1, 2),
            Point::from_ints(0, 1),
        ])
        .unwrap();
        assert_eq!(big.relation(&diamond), PolygonRelation::Overlap);
        assert_eq!(diamond.relation(&big), PolygonRelation::Overlap);
    }

    #[test]
    fn degenerate_polygons_rejected() {
        let line = Polygon::new(alloc::vec![
            Point::from_ints(0, 0),
            Point::from_ints(1, 0),
            Point::from_ints(2, 0),
        ]);
        assert!(matches!(line, Err(Error::DegeneratePolygon(_))));
        let cw = Polygon::new(alloc::vec![
            Point::from_ints(0, 0),
            Point::from_ints(0, 1),
            Point::from_ints(1, 0),
        ]);
        assert!(matches!(cw, Err(Error::DegeneratePolygon(_))));
        let bowtie = Polygon::new(alloc::vec![
            Point::from_ints(0, 0),
            Point::from_ints(2, 2),
            Point::from_ints(2, 0),
            Point::from_ints(0, 2),
        ]);
        assert!(bowtie.is_err());
    }

    #[test]
    fn containment() {
        let a = unit_square(0, 0);
        assert_eq!(a.contains(&Point::from_ratios((1, 2), (1, 2))), Containment::Inside);
        assert_eq!(a.contains(&Point::from_ratios((1, 1), (1, 2))), Containment::Boundary);
        assert_eq!(a.contains(&Point::from_ints(3, 0)), Containment::Outside);
    }

    #[test]
    fn atan2_fallback_is_accurate() {
        let r = Motion::pinwheel_rotation();
        assert!((r.angle_f64() - 0.463_647_609_000_806_1).abs() < 1e-9);
        let m = Motion::rotation(ExactScalar::from_int(-1), ExactScalar::zero()).unwrap();
        assert!((m.angle_f64() - core::f64::consts::PI).abs() < 1e-9);
    }
}
