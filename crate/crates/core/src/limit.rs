//! Direct limits `lim(G, h)` of a finitely generated abelian group under a
//! self-map.
//!
//! The limit is first reduced to an injective map by dividing out the
//! eventual kernel. The injective map is then split into torsion, free
//! coordinates on which it is the identity, and a core block. When the core
//! is diagonalizable over `Q` with integer eigenvalues, its non-unit
//! eigenvectors span a saturated sublattice `E`, and the map is the identity
//! on the free quotient by `E`, the limit is
//! `⊕ Z[1/|λ|] ⊕ Zᵏ ⊕ torsion`. Anything else is reported symbolically.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::abgrp::{FgAbGroup, GroupHom};
use crate::error::{Error, Result};
use crate::intlin::{
    characteristic_polynomial, column_space_basis, integer_roots, kernel_basis, lattice_reduce, normalize_sign,
    smith, solve_in_lattice, IntMatrix, IntVector,
};

/// An endomorphism of `Z^free ⊕ Z/d₁ ⊕ … ⊕ Z/d_t` given by its matrix on the
/// standard generators, free generators first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedEndo {
    pub free: usize,
    pub torsion: Vec<BigInt>,
    pub matrix: IntMatrix,
}

impl PresentedEndo {
    pub fn new(free: usize, torsion: Vec<BigInt>, matrix: IntMatrix) -> Result<PresentedEndo> {
        let n = free + torsion.len();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::Dimension(format!(
                "{}x{} matrix on a group with {} generators",
                matrix.rows(),
                matrix.cols(),
                n
            )));
        }
        if torsion.iter().any(|d| d <= &BigInt::one()) {
            return Err(Error::Dimension("torsion orders must exceed one".into()));
        }
        let e = PresentedEndo { free, torsion, matrix };
        let rel = e.relations();
        for j in 0..n {
            let col = e.matrix.column(j);
            let order = if j < free { BigInt::zero() } else { e.torsion[j - free].clone() };
            for i in 0..free {
                if !col[i].is_zero() && j >= free {
                    return Err(Error::IllDefinedHom(format!("torsion generator {} maps to a free coordinate", j)));
                }
            }
            if j >= free {
                let scaled: IntVector = col.iter().map(|x| x * &order).collect();
                if !in_lattice(&rel, &scaled)? {
                    return Err(Error::IllDefinedHom(format!("image of generator {} has the wrong order", j)));
                }
            }
        }
        Ok(e)
    }

    /// The endomorphism on the abstract generators of `h`'s group.
    pub fn from_hom(h: &GroupHom) -> Result<PresentedEndo> {
        if !h.is_endomorphism() {
            return Err(Error::Dimension("direct limits need a self-map".into()));
        }
        let g = h.source();
        PresentedEndo::new(g.free_rank(), g.torsion(), h.matrix().clone())
    }

    pub fn identity(free: usize, torsion: Vec<BigInt>) -> PresentedEndo {
        let n = free + torsion.len();
        PresentedEndo {
            free,
            torsion,
            matrix: IntMatrix::identity(n),
        }
    }

    pub fn num_generators(&self) -> usize {
        self.free + self.torsion.len()
    }

    pub fn group(&self) -> FgAbGroup {
        FgAbGroup::from_invariants(self.free, &self.torsion)
    }

    /// Relation lattice of the group, one column per torsion generator.
    pub fn relations(&self) -> IntMatrix {
        let n = self.num_generators();
        let cols: Vec<IntVector> = self
            .torsion
            .iter()
            .enumerate()
            .map(|(k, d)| {
                let mut v = vec![BigInt::zero(); n];
                v[self.free + k] = d.clone();
                v
            })
            .collect();
        IntMatrix::from_columns(n, &cols).expect("shape")
    }

    fn reduce(&self, v: &mut [BigInt]) {
        for (k, d) in self.torsion.iter().enumerate() {
            let x = &mut v[self.free + k];
            *x = x.mod_floor(d);
        }
    }

    pub fn pow(&self, k: u32) -> Result<PresentedEndo> {
        let mut m = self.matrix.pow(k)?;
        let n = self.num_generators();
        for j in 0..n {
            let mut col = m.column(j);
            self.reduce(&mut col);
            for (i, x) in col.into_iter().enumerate() {
                m.set(i, j, x);
            }
        }
        Ok(PresentedEndo {
            free: self.free,
            torsion: self.torsion.clone(),
            matrix: m,
        })
    }

    /// Conjugate `U·A·U⁻¹` by a unimodular change of free coordinates.
    pub fn conjugate_free(&self, u: &IntMatrix, u_inv: &IntMatrix) -> Result<PresentedEndo> {
        if !self.torsion.is_empty() {
            return Err(Error::Dimension("free conjugation on a group with torsion".into()));
        }
        let m = u.mul(&self.matrix)?.mul(u_inv)?;
        PresentedEndo::new(self.free, Vec::new(), m)
    }
}

fn in_lattice(basis: &IntMatrix, v: &[BigInt]) -> Result<bool> {
    if v.iter().all(Zero::is_zero) {
        return Ok(true);
    }
    if basis.cols() == 0 {
        return Ok(false);
    }
    Ok(solve_in_lattice(basis, v)?.is_some())
}

fn same_lattice(a: &IntMatrix, b: &IntMatrix) -> Result<bool> {
    for col in a.columns() {
        if !in_lattice(b, &col)? {
            return Ok(false);
        }
    }
    for col in b.columns() {
        if !in_lattice(a, &col)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `{x : Aᴺ·x = 0}` as a lattice containing the relations.
fn kernel_of_power(e: &PresentedEndo, n: u32) -> Result<IntMatrix> {
    let r = e.num_generators();
    let rel = e.relations();
    let a = e.matrix.pow(n)?;
    let stacked = a.hstack(&rel.scale(&BigInt::from(-1)))?;
    let k = kernel_basis(&stacked);
    let rows: Vec<usize> = (0..r).collect();
    let lat = k.select_rows(&rows).hstack(&rel)?;
    Ok(column_space_basis(&lat))
}

/// The result of dividing out the eventual kernel.
#[derive(Clone, Debug)]
pub struct Stabilized {
    /// The injective map induced on the quotient.
    pub endo: PresentedEndo,
    /// Smallest `N` with `ker hᴺ = ker hᴺ⁺¹`.
    pub steps: u32,
    /// `ker hᴺ` in the source generators, including the relations.
    pub kernel: IntMatrix,
    /// Source generator images of the quotient generators.
    pub lifts: Vec<IntVector>,
}

/// Divides out `⋃ ker hᴺ` and returns the injective map it induces, which
/// has the same direct limit.
pub fn stabilize_kernel(e: &PresentedEndo) -> Result<Stabilized> {
    let r = e.num_generators();
    let mut prev = column_space_basis(&e.relations());
    let mut steps = 0u32;
    let bound = (r + e.torsion.len() + 1) as u32;
    loop {
        let next = kernel_of_power(e, steps + 1)?;
        if same_lattice(&prev, &next)? {
            break;
        }
        prev = next;
        steps += 1;
        if steps > bound {
            return Err(Error::UnsupportedRegime(
                "kernel chain failed to stabilise within its length bound".into(),
            ));
        }
    }
    let q = FgAbGroup::presented(r, &prev)?;
    let lifts: Vec<IntVector> = q.generators().to_vec();
    let mut cols = Vec::with_capacity(lifts.len());
    for g in &lifts {
        cols.push(q.coordinates(&e.matrix.mul_vec(g)?)?);
    }
    let matrix = IntMatrix::from_columns(q.num_generators(), &cols)?;
    let endo = PresentedEndo::new(q.free_rank(), q.torsion(), matrix)?;
    Ok(Stabilized {
        endo,
        steps,
        kernel: prev,
        lifts,
    })
}

/// Matrix of `e` restricted to the subgroup spanned by `gens`, written in
/// those generators. `orders[j]` is the order of `gens[j]` (zero when
/// infinite); the generators must form a basis of the subgroup they span and
/// the subgroup must be invariant.
pub fn restrict_to_subgroup(e: &PresentedEndo, gens: &[IntVector], orders: &[BigInt]) -> Result<IntMatrix> {
    let n = e.num_generators();
    let m = gens.len();
    if orders.len() != m {
        return Err(Error::Dimension("one order per generator".into()));
    }
    let v = IntMatrix::from_columns(n, gens)?;
    let sys = v.hstack(&e.relations())?;
    // the relations among the generators must be exactly the stated orders
    let k = kernel_basis(&sys);
    let rows: Vec<usize> = (0..m).collect();
    let among = k.select_rows(&rows);
    let mut expected_cols = Vec::new();
    for (j, d) in orders.iter().enumerate() {
        if !d.is_zero() {
            let mut c = vec![BigInt::zero(); m];
            c[j] = d.clone();
            expected_cols.push(c);
        }
    }
    let expected = IntMatrix::from_columns(m, &expected_cols)?;
    if !same_lattice(&among, &expected)? {
        return Err(Error::InvalidSystem("generators do not form a basis with the stated orders".into()));
    }
    let mut cols = Vec::with_capacity(m);
    for (j, g) in gens.iter().enumerate() {
        let img = e.matrix.mul_vec(g)?;
        let x = solve_in_lattice(&sys, &img)?
            .ok_or_else(|| Error::IllDefinedHom(format!("image of generator {} leaves the subgroup", j)))?;
        cols.push(
            x[..m]
                .iter()
                .zip(orders)
                .map(|(c, d)| if d.is_zero() { c.clone() } else { c.mod_floor(d) })
                .collect(),
        );
    }
    IntMatrix::from_columns(m, &cols)
}

/// Classification state of a direct limit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LimitStatus {
    Exact,
    /// The structure was outside the classified regime; the injective map is
    /// kept for further analysis.
    Symbolic { reduced: PresentedEndo, reason: String },
}

/// `⊕ Z[1/nᵢ]^{mᵢ} ⊕ Z^free ⊕ ⊕ Z/dⱼ`.
#[derive(Clone, Debug, Eq)]
pub struct LimitGroup {
    /// Bases `n ≥ 2` with multiplicities, largest base first.
    pub localized: Vec<(BigInt, usize)>,
    pub free_rank: usize,
    /// Invariant factors.
    pub torsion: Vec<BigInt>,
    pub status: LimitStatus,
}

fn radical(n: &BigInt) -> BigInt {
    let mut n = n.abs();
    let mut r = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        if n.is_multiple_of(&p) {
            r *= &p;
            while n.is_multiple_of(&p) {
                n /= &p;
            }
        }
        p += 1;
    }
    if n > BigInt::one() {
        r *= n;
    }
    r
}

fn invariant_factors(orders: &[BigInt]) -> Vec<BigInt> {
    let g = FgAbGroup::from_invariants(0, orders);
    g.torsion()
}

impl LimitGroup {
    pub fn exact(localized: &[(u64, usize)], free_rank: usize, torsion: &[u64]) -> LimitGroup {
        let mut l = LimitGroup {
            localized: localized.iter().map(|&(b, m)| (BigInt::from(b), m)).collect(),
            free_rank,
            torsion: torsion.iter().map(|&d| BigInt::from(d)).collect(),
            status: LimitStatus::Exact,
        };
        l.tidy();
        l
    }

    /// The limit of the identity on a finitely generated group.
    pub fn of_group(g: &FgAbGroup) -> LimitGroup {
        LimitGroup {
            localized: Vec::new(),
            free_rank: g.free_rank(),
            torsion: g.torsion(),
            status: LimitStatus::Exact,
        }
    }

    fn tidy(&mut self) {
        let mut merged: BTreeMap<BigInt, usize> = BTreeMap::new();
        for (b, m) in self.localized.drain(..) {
            if m > 0 {
                *merged.entry(b).or_insert(0) += m;
            }
        }
        self.localized = merged.into_iter().rev().collect();
        self.torsion = invariant_factors(&self.torsion);
    }

    pub fn is_exact(&self) -> bool {
        self.status == LimitStatus::Exact
    }

    /// Torsion-free rank.
    pub fn rank(&self) -> usize {
        self.free_rank + self.localized.iter().map(|(_, m)| m).sum::<usize>()
    }

    /// Localized summands keyed by the radical of their base.
    fn by_radical(&self) -> BTreeMap<BigInt, usize> {
        let mut out = BTreeMap::new();
        for (b, m) in &self.localized {
            *out.entry(radical(b)).or_insert(0) += m;
        }
        out
    }

    /// Isomorphism test, decidable when both are exact.
    pub fn is_isomorphic(&self, other: &LimitGroup) -> Option<bool> {
        if !self.is_exact() || !other.is_exact() {
            return None;
        }
        Some(
            self.free_rank == other.free_rank
                && self.torsion == other.torsion
                && self.by_radical() == other.by_radical(),
        )
    }

    /// The summands of the torsion-free part, without torsion.
    pub fn torsion_free_part(&self) -> LimitGroup {
        LimitGroup {
            localized: self.localized.clone(),
            free_rank: self.free_rank,
            torsion: Vec::new(),
            status: self.status.clone(),
        }
    }

    /// Direct sum; symbolic if either side is.
    pub fn direct_sum(&self, other: &LimitGroup) -> LimitGroup {
        let status = match (&self.status, &other.status) {
            (LimitStatus::Exact, LimitStatus::Exact) => LimitStatus::Exact,
            (s @ LimitStatus::Symbolic { .. }, _) | (_, s @ LimitStatus::Symbolic { .. }) => s.clone(),
        };
        let mut l = LimitGroup {
            localized: self.localized.iter().chain(&other.localized).cloned().collect(),
            free_rank: self.free_rank + other.free_rank,
            torsion: self.torsion.iter().chain(&other.torsion).cloned().collect(),
            status,
        };
        l.tidy();
        l
    }
}

impl PartialEq for LimitGroup {
    fn eq(&self, other: &Self) -> bool {
        match self.is_isomorphic(other) {
            Some(b) => b,
            None => {
                self.status == other.status
                    && self.localized == other.localized
                    && self.free_rank == other.free_rank
                    && self.torsion == other.torsion
            }
        }
    }
}

impl fmt::Display for LimitGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let LimitStatus::Symbolic { reduced, .. } = &self.status {
            let mut g = format!("Z^{}", reduced.free);
            for d in &reduced.torsion {
                g.push_str(&format!(" + Z_{d}"));
            }
            return write!(f, "lim({g}, B) [unclassified]");
        }
        let mut parts: Vec<String> = Vec::new();
        for (b, m) in &self.localized {
            parts.push(if *m == 1 { format!("Z[1/{}]", b) } else { format!("Z[1/{}]^{}", b, m) });
        }
        if self.free_rank == 1 {
            parts.push("Z".into());
        } else if self.free_rank > 1 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        let mut counts: BTreeMap<&BigInt, usize> = BTreeMap::new();
        for d in &self.torsion {
            *counts.entry(d).or_insert(0) += 1;
        }
        for (d, m) in counts {
            parts.push(if m == 1 { format!("Z_{}", d) } else { format!("Z_{}^{}", d, m) });
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&parts.join(" + "))
    }
}

/// The decomposition behind a classification.
#[derive(Clone, Debug)]
pub struct LimitAnalysis {
    /// The injective map after moving the free generators to a complement
    /// invariant under the map (unchanged when already block diagonal).
    pub adjusted: PresentedEndo,
    /// Free coordinates that are direct summands on which the map is the
    /// identity.
    pub split_free: Vec<usize>,
    /// Remaining free coordinates and the block of the map on them.
    pub core_coordinates: Vec<usize>,
    pub core: IntMatrix,
    /// Integer eigenvalues of the core with multiplicities.
    pub eigenvalues: Vec<(BigInt, usize)>,
    /// Reduced eigenlattice bases (as columns) for each eigenvalue other
    /// than one.
    pub eigenspaces: Vec<(BigInt, IntMatrix)>,
    /// Rank of the core's quotient by those eigenlattices.
    pub quotient_rank: usize,
    /// Index of the lattice spanned by those eigenlattices in its
    /// saturation; the limit splits into localized summands only when it is
    /// one.
    pub saturation_index: BigInt,
    /// How the torsion subgroup splits off in the limit.
    pub torsion_split: Option<TorsionSplit>,
    pub limit: LimitGroup,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TorsionSplit {
    /// The map already preserves the span of the free generators.
    Direct,
    /// After changing the free generators by torsion.
    InvariantComplement,
    /// No invariant complement exists at the finite stage, but every
    /// localization base is prime to every torsion order.
    Coprime,
}

fn symbolic(e: &PresentedEndo, reason: &str) -> LimitGroup {
    LimitGroup {
        localized: Vec::new(),
        free_rank: 0,
        torsion: e.torsion.clone(),
        status: LimitStatus::Symbolic {
            reduced: e.clone(),
            reason: reason.into(),
        },
    }
}

/// Changes the free generators `fⱼ` to `fⱼ + φ(fⱼ)` with `φ` chosen so that
/// the free span is invariant. `None` when no such complement exists.
fn invariant_complement(e: &PresentedEndo) -> Result<Option<PresentedEndo>> {
    let f = e.free;
    let t = e.torsion.len();
    if t == 0 || f == 0 {
        return Ok(Some(e.clone()));
    }
    let b = &e.matrix;
    let mixed = (0..t).any(|i| (0..f).any(|j| !b.get(f + i, j).mod_floor(&e.torsion[i]).is_zero()));
    if !mixed {
        return Ok(Some(e.clone()));
    }
    // unknowns: φ (t×f, row major) then y (t×f); equations
    // Σₖ φᵢₖ B_ff[k][j] − Σₗ B_tt[i][l] φₗⱼ − dᵢ yᵢⱼ = B_tf[i][j]
    let nv = 2 * t * f;
    let mut rows = Vec::with_capacity(t * f);
    let mut rhs = Vec::with_capacity(t * f);
    for i in 0..t {
        for j in 0..f {
            let mut row = vec![BigInt::zero(); nv];
            for k in 0..f {
                row[i * f + k] += b.get(k, j);
            }
            for l in 0..t {
                row[l * f + j] -= b.get(f + i, f + l);
            }
            row[t * f + i * f + j] = -e.torsion[i].clone();
            rows.push(row);
            rhs.push(b.get(f + i, j).clone());
        }
    }
    let sys = IntMatrix::from_rows(&rows)?;
    let Some(sol) = solve_in_lattice(&sys, &rhs)? else {
        return Ok(None);
    };
    // change of basis P: columns fⱼ + φ(fⱼ), torsion generators unchanged
    let n = e.num_generators();
    let mut p = IntMatrix::identity(n);
    let mut p_inv = IntMatrix::identity(n);
    for i in 0..t {
        for j in 0..f {
            p.set(f + i, j, sol[i * f + j].clone());
            p_inv.set(f + i, j, -sol[i * f + j].clone());
        }
    }
    let m = p_inv.mul(&e.matrix)?.mul(&p)?;
    let mut out = PresentedEndo {
        free: f,
        torsion: e.torsion.clone(),
        matrix: m,
    };
    for j in 0..n {
        let mut col = out.matrix.column(j);
        out.reduce(&mut col);
        for (i, x) in col.into_iter().enumerate() {
            out.matrix.set(i, j, x);
        }
    }
    Ok(Some(out))
}

/// Classifies the direct limit of an injective endomorphism, recording the
/// decomposition used.
pub fn analyze_limit(e: &PresentedEndo) -> Result<LimitAnalysis> {
    let f = e.free;
    let mut analysis = LimitAnalysis {
        adjusted: e.clone(),
        split_free: Vec::new(),
        core_coordinates: Vec::new(),
        core: IntMatrix::zeros(0, 0),
        eigenvalues: Vec::new(),
        eigenspaces: Vec::new(),
        quotient_rank: 0,
        saturation_index: BigInt::one(),
        torsion_split: None,
        limit: symbolic(e, ""),
    };
    // the free quotient carries the top-left block whatever complement is used
    let adj = match invariant_complement(e)? {
        Some(adj) => {
            analysis.torsion_split = Some(if &adj == e {
                TorsionSplit::Direct
            } else {
                TorsionSplit::InvariantComplement
            });
            adj
        }
        None => e.clone(),
    };
    analysis.adjusted = adj.clone();
    let b = &adj.matrix;
    let unit_coordinate = |i: usize| {
        (0..f).all(|k| {
            let expect = if k == i { BigInt::one() } else { BigInt::zero() };
            b.get(i, k) == &expect && b.get(k, i) == &expect
        })
    };
    for i in 0..f {
        if unit_coordinate(i) {
            analysis.split_free.push(i);
        } else {
            analysis.core_coordinates.push(i);
        }
    }
    let core = b.select_rows(&analysis.core_coordinates).select_columns(&analysis.core_coordinates);
    analysis.core = core.clone();
    let c = core.rows();
    let cp = characteristic_polynomial(&core)?;
    let bound = core.max_abs_row_sum().max(BigInt::one());
    let roots = integer_roots(&cp, &bound);
    analysis.eigenvalues = roots.clone();
    let total: usize = roots.iter().map(|(_, m)| m).sum();
    if total != c {
        analysis.limit = symbolic(&adj, "core has non-integer eigenvalues");
        return Ok(analysis);
    }
    if roots.iter().any(|(l, _)| l.is_zero()) {
        analysis.limit = symbolic(&adj, "map is not injective");
        return Ok(analysis);
    }
    let mut nonunit_cols: Vec<IntVector> = Vec::new();
    let mut localized = Vec::new();
    let mut free_rank = analysis.split_free.len();
    for (lambda, mult) in &roots {
        let mut shifted = core.clone();
        for i in 0..c {
            *shifted.entry_mut(i, i) -= lambda;
        }
        let k = kernel_basis(&shifted);
        if k.cols() != *mult {
            analysis.limit = symbolic(&adj, "core is not diagonalizable");
            return Ok(analysis);
        }
        if lambda.is_one() {
            continue;
        }
        let mut basis = lattice_reduce(k.columns());
        for v in basis.iter_mut() {
            normalize_sign(v);
        }
        nonunit_cols.extend(basis.iter().cloned());
        analysis.eigenspaces.push((lambda.clone(), IntMatrix::from_columns(c, &basis)?));
        if lambda.abs().is_one() {
            free_rank += mult;
        } else {
            localized.push((lambda.abs(), *mult));
        }
    }
    let span = IntMatrix::from_columns(c, &nonunit_cols)?;
    if !nonunit_cols.is_empty() {
        let index: BigInt = smith(&span).diagonal().iter().product();
        analysis.saturation_index = index.clone();
        if !index.is_one() {
            analysis.limit = symbolic(
                &adj,
                &format!("eigenvectors span a sublattice of index {} in its saturation", index),
            );
            return Ok(analysis);
        }
    }
    // the map must be the identity on the quotient by the eigenlattices
    let mut shifted = core.clone();
    for i in 0..c {
        *shifted.entry_mut(i, i) -= BigInt::one();
    }
    for col in shifted.columns() {
        if !in_lattice(&span, &col)? {
            analysis.limit = symbolic(&adj, "map is not the identity on the quotient");
            return Ok(analysis);
        }
    }
    analysis.quotient_rank = c - nonunit_cols.len();
    free_rank += analysis.quotient_rank;
    if analysis.torsion_split.is_none() {
        // Ext(Z[1/n], Z/d) vanishes when n is invertible mod d, so the
        // extension of the free limit by the torsion splits
        let coprime = localized
            .iter()
            .all(|(n, _): &(BigInt, usize)| adj.torsion.iter().all(|d| n.gcd(d).is_one()));
        if !coprime {
            analysis.limit = symbolic(&adj, "torsion extension may not split");
            return Ok(analysis);
        }
        analysis.torsion_split = Some(TorsionSplit::Coprime);
    }
    let mut limit = LimitGroup {
        localized,
        free_rank,
        torsion: adj.torsion.clone(),
        status: LimitStatus::Exact,
    };
    limit.tidy();
    analysis.limit = limit;
    Ok(analysis)
}

/// Classifies the direct limit of an injective endomorphism.
pub fn classify_limit(e: &PresentedEndo) -> Result<LimitGroup> {
    Ok(analyze_limit(e)?.limit)
}

/// `lim(G, h)`: stabilisation of the kernel followed by classification.
pub fn limit_of(h: &GroupHom) -> Result<LimitGroup> {
    limit_of_endo(&PresentedEndo::from_hom(h)?)
}

pub fn limit_of_endo(e: &PresentedEndo) -> Result<LimitGroup> {
    if e.matrix == IntMatrix::identity(e.num_generators()) {
        let mut l = LimitGroup {
            localized: Vec::new(),
            free_rank: e.free,
            torsion: e.torsion.clone(),
            status: LimitStatus::Exact,
        };
        l.tidy();
        return Ok(l);
    }
    classify_limit(&stabilize_kernel(e)?.endo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlin::ints;
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        let v: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        IntMatrix::from_rows(&v).unwrap()
    }

    fn free_endo(rows: &[&[i64]]) -> PresentedEndo {
        PresentedEndo::new(rows.len(), Vec::new(), mat(rows)).unwrap()
    }

    #[test]
    fn multiplication_by_25() {
        let l = limit_of_endo(&free_endo(&[&[25]])).unwrap();
        assert_eq!(l, LimitGroup::exact(&[(25, 1)], 0, &[]));
        assert_eq!(l, LimitGroup::exact(&[(5, 1)], 0, &[]));
        assert_ne!(l, LimitGroup::exact(&[(3, 1)], 0, &[]));
        assert_eq!(format!("{}", l), "Z[1/25]");
    }

    #[test]
    fn nilpotent_kills_everything() {
        let s = stabilize_kernel(&free_endo(&[&[0, 1], &[0, 0]])).unwrap();
        assert_eq!(s.endo.num_generators(), 0);
        assert_eq!(s.steps, 2);
        let l = limit_of_endo(&free_endo(&[&[0, 1], &[0, 0]])).unwrap();
        assert_eq!(l, LimitGroup::exact(&[], 0, &[]));
    }

    #[test]
    fn identity_on_z3_is_stable() {
        let s = stabilize_kernel(&PresentedEndo::identity(3, Vec::new())).unwrap();
        assert_eq!(s.endo.matrix, IntMatrix::identity(3));
        assert_eq!(s.steps, 0);
    }

    #[test]
    fn torsion_identity() {
        let e = PresentedEndo::identity(0, ints(&[2]));
        assert_eq!(limit_of_endo(&e).unwrap(), LimitGroup::exact(&[], 0, &[2]));
        assert_eq!(classify_limit(&e).unwrap(), LimitGroup::exact(&[], 0, &[2]));
    }

    #[test]
    fn lower_triangular_block() {
        let m = free_endo(&[
            &[25, 0, 0, 0, 0],
            &[0, 3, 0, 0, 0],
            &[0, 0, 3, 0, 0],
            &[15300, 75, -450, 1, 0],
            &[5400, 75, -450, 0, 1],
        ]);
        let a = analyze_limit(&m).unwrap();
        assert_eq!(a.limit, LimitGroup::exact(&[(25, 1), (3, 2)], 2, &[]));
        assert_eq!(a.quotient_rank, 2);
        assert_eq!(format!("{}", a.limit), "Z[1/25] + Z[1/3]^2 + Z^2");
    }

    #[test]
    fn non_diagonalizable_is_symbolic() {
        let l = classify_limit(&free_endo(&[&[2, 1], &[0, 2]])).unwrap();
        assert!(!l.is_exact());
        let l = classify_limit(&free_endo(&[&[1, 1], &[1, 0]])).unwrap();
        assert!(!l.is_exact());
    }

    #[test]
    fn non_saturated_eigenvectors_are_symbolic() {
        // eigenvectors (1,1) and (1,-1) span an index-two sublattice
        let a = analyze_limit(&free_endo(&[&[4, 1], &[1, 4]])).unwrap();
        assert!(!a.limit.is_exact());
        assert_eq!(a.saturation_index, BigInt::from(2));
    }

    #[test]
    fn torsion_mixing_is_untangled() {
        // Z ⊕ Z/2 with f ↦ 2f + t; f + t spans an invariant complement
        let e = PresentedEndo::new(1, ints(&[2]), mat(&[&[2, 0], &[1, 1]])).unwrap();
        let a = analyze_limit(&e).unwrap();
        assert_eq!(a.limit, LimitGroup::exact(&[(2, 1)], 0, &[2]));
        assert_eq!(*a.adjusted.matrix.get(1, 0), BigInt::zero());
        assert_eq!(a.torsion_split, Some(TorsionSplit::InvariantComplement));
        // f ↦ 3f + t has no invariant complement, but 3 is prime to 2
        let e = PresentedEndo::new(1, ints(&[2]), mat(&[&[3, 0], &[1, 1]])).unwrap();
        let a = analyze_limit(&e).unwrap();
        assert_eq!(a.limit, LimitGroup::exact(&[(3, 1)], 0, &[2]));
        assert_eq!(a.torsion_split, Some(TorsionSplit::Coprime));
        // g ↦ g + t beside a doubled generator: neither
        let e = PresentedEndo::new(2, ints(&[2]), mat(&[&[2, 0, 0], &[0, 1, 0], &[0, 1, 1]])).unwrap();
        assert!(!classify_limit(&e).unwrap().is_exact());
    }

    #[test]
    fn restriction_to_image() {
        let e = free_endo(&[&[2, 0], &[0, 0]]);
        let m = restrict_to_subgroup(&e, &[ints(&[2, 0])], &ints(&[0])).unwrap();
        assert_eq!(m, mat(&[&[2]]));
        assert!(restrict_to_subgroup(&e, &[ints(&[1, 1])], &ints(&[0])).is_err());
    }

    #[test]
    fn negative_eigenvalues() {
        let l = limit_of_endo(&free_endo(&[&[-3, 0], &[0, -1]])).unwrap();
        assert_eq!(l, LimitGroup::exact(&[(3, 1)], 1, &[]));
    }

    fn unimodular(seed: &[i64]) -> (IntMatrix, IntMatrix) {
        // product of elementary matrices and its inverse
        let n = 3;
        let mut u = IntMatrix::identity(n);
        let mut ui = IntMatrix::identity(n);
        for (k, &c) in seed.iter().enumerate() {
            let i = k % n;
            let j = (k + 1 + (k / n) % (n - 1)) % n;
            let mut e = IntMatrix::identity(n);
            e.set(i, j, BigInt::from(c));
            let mut ei = IntMatrix::identity(n);
            ei.set(i, j, BigInt::from(-c));
            u = e.mul(&u).unwrap();
            ui = ui.mul(&ei).unwrap();
        }
        (u, ui)
    }

    fn triangular(d: &[i64], off: &[i64]) -> PresentedEndo {
        let rows = vec![
            vec![d[0], 0, 0],
            vec![off[0], d[1], 0],
            vec![off[1], off[2], d[2]],
        ];
        PresentedEndo::new(3, Vec::new(), IntMatrix::from_rows(&rows).unwrap()).unwrap()
    }

    proptest! {
        #[test]
        fn identity_limit_is_the_group(free in 0usize..4, tors in proptest::collection::vec(2i64..8, 0..3)) {
            let t = ints(&tors);
            let e = PresentedEndo::identity(free, t.clone());
            let l = limit_of_endo(&e).unwrap();
            let g = FgAbGroup::from_invariants(free, &t);
            prop_assert_eq!(l, LimitGroup::of_group(&g));
        }

        #[test]
        fn conjugation_invariance(
            d in proptest::collection::vec(prop_oneof![Just(1i64), Just(-1), Just(2), Just(3), Just(0), Just(4)], 3),
            off in proptest::collection::vec(-3i64..4, 3),
            seed in proptest::collection::vec(-2i64..3, 1..6),
        ) {
            let a = triangular(&d, &off);
            let (u, ui) = unimodular(&seed);
            let b = a.conjugate_free(&u, &ui).unwrap();
            let la = limit_of_endo(&a).unwrap();
            let lb = limit_of_endo(&b).unwrap();
            prop_assert_eq!(la.is_exact(), lb.is_exact());
            if la.is_exact() {
                prop_assert_eq!(la, lb);
            }
        }

        #[test]
        fn powers_have_the_same_limit(
            d in proptest::collection::vec(prop_oneof![Just(1i64), Just(2), Just(3), Just(0), Just(5)], 3),
            off in proptest::collection::vec(-2i64..3, 3),
            k in 2u32..4,
        ) {
            let a = triangular(&d, &off);
            let la = limit_of_endo(&a).unwrap();
            let lk = limit_of_endo(&a.pow(k).unwrap()).unwrap();
            if la.is_exact() && lk.is_exact() {
                prop_assert_eq!(la, lk);
            }
        }
    }
}
