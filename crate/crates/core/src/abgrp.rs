//! Finitely generated abelian groups as subquotients of a free ambient
//! lattice, and homomorphisms between them.
//!
//! A group is stored as `Z / B` where `Z ⊆ Zⁿ` is a cycle lattice and
//! `B ⊆ Z` a boundary lattice. Writing `B = Z·R` in cycle coordinates, the
//! Smith form `U·R·V = D` gives normal-form coordinates `U·c`; those with a
//! unit invariant factor are dropped, the rest become the abstract
//! generators. Free generators come first, torsion generators after them in
//! increasing order of invariant factor.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::intlin::{column_space_basis, smith, solve_with_smith, IntMatrix, IntVector, SmithDecomposition};

#[derive(Clone, Debug)]
pub struct FgAbGroup {
    ambient: usize,
    cycles: IntMatrix,
    boundaries: IntMatrix,
    cycles_snf: SmithDecomposition,
    rel_snf: SmithDecomposition,
    /// Normal-form coordinate index and modulus (zero for free) per generator.
    kept: Vec<(usize, BigInt)>,
    generators: Vec<IntVector>,
}

impl PartialEq for FgAbGroup {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.cycles == other.cycles && self.boundaries == other.boundaries
    }
}

impl Eq for FgAbGroup {}

impl FgAbGroup {
    /// The quotient of the lattice spanned by the columns of `cycles` by the
    /// lattice spanned by the columns of `boundaries`.
    pub fn subquotient(ambient: usize, cycles: &IntMatrix, boundaries: &IntMatrix) -> Result<FgAbGroup> {
        if cycles.rows() != ambient || boundaries.rows() != ambient {
            return Err(Error::Dimension(format!(
                "subquotient of Z^{} given lattices in Z^{} and Z^{}",
                ambient,
                cycles.rows(),
                boundaries.rows()
            )));
        }
        let z = column_space_basis(cycles);
        let b = column_space_basis(boundaries);
        let cycles_snf = smith(&z);
        let k = z.cols();
        let mut rel_cols = Vec::with_capacity(b.cols());
        for (j, col) in b.columns().iter().enumerate() {
            match solve_with_smith(&cycles_snf, col) {
                Some(c) => rel_cols.push(c),
                None => {
                    return Err(Error::Containment(format!(
                        "boundary generator {} is not in the cycle lattice",
                        j
                    )))
                }
            }
        }
        let rel = IntMatrix::from_columns(k, &rel_cols)?;
        let rel_snf = smith(&rel);
        let diag = rel_snf.diagonal();
        let mut free = Vec::new();
        let mut torsion = Vec::new();
        for i in 0..k {
            let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
            if d.is_zero() {
                free.push((i, d));
            } else if !d.is_one() {
                torsion.push((i, d));
            }
        }
        torsion.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
        let kept: Vec<(usize, BigInt)> = free.into_iter().chain(torsion).collect();
        let generators = kept
            .iter()
            .map(|(i, _)| z.mul_vec(&rel_snf.u_inv.column(*i)).expect("shape"))
            .collect();
        Ok(FgAbGroup {
            ambient,
            cycles: z,
            boundaries: b,
            cycles_snf,
            rel_snf,
            kept,
            generators,
        })
    }

    /// `Zⁿ` modulo the lattice spanned by the columns of `relations`.
    pub fn presented(n: usize, relations: &IntMatrix) -> Result<FgAbGroup> {
        FgAbGroup::subquotient(n, &IntMatrix::identity(n), relations)
    }

    /// `Zⁿ`.
    pub fn free(n: usize) -> FgAbGroup {
        FgAbGroup::presented(n, &IntMatrix::zeros(n, 0)).expect("free group")
    }

    /// `Z^free ⊕ ⊕ Z/dᵢ`, presented on one ambient coordinate per summand.
    pub fn from_invariants(free: usize, torsion: &[BigInt]) -> FgAbGroup {
        let n = free + torsion.len();
        let cols: Vec<IntVector> = torsion
            .iter()
            .enumerate()
            .map(|(k, d)| {
                let mut v = vec![BigInt::zero(); n];
                v[free + k] = d.clone();
                v
            })
            .collect();
        let rel = IntMatrix::from_columns(n, &cols).expect("shape");
        FgAbGroup::presented(n, &rel).expect("diagonal presentation")
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient
    }

    /// Basis of the cycle lattice, as columns.
    pub fn cycles(&self) -> &IntMatrix {
        &self.cycles
    }

    /// Basis of the boundary lattice, as columns.
    pub fn boundaries(&self) -> &IntMatrix {
        &self.boundaries
    }

    pub fn free_rank(&self) -> usize {
        self.kept.iter().filter(|(_, d)| d.is_zero()).count()
    }

    /// Invariant factors greater than one, in divisibility order.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.kept.iter().filter(|(_, d)| !d.is_zero()).map(|(_, d)| d.clone()).collect()
    }

    /// Number of abstract generators.
    pub fn num_generators(&self) -> usize {
        self.kept.len()
    }

    /// Order of each abstract generator; zero marks infinite order.
    pub fn orders(&self) -> Vec<BigInt> {
        self.kept.iter().map(|(_, d)| d.clone()).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.kept.is_empty()
    }

    /// Order of a finite group, `None` when the group is infinite.
    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank() > 0 {
            return None;
        }
        Some(self.torsion().iter().fold(BigInt::one(), |a, d| a * d))
    }

    /// Ambient representatives of the abstract generators.
    pub fn generators(&self) -> &[IntVector] {
        &self.generators
    }

    /// Whether `x` lies in the cycle lattice.
    pub fn contains(&self, x: &[BigInt]) -> bool {
        x.len() == self.ambient && solve_with_smith(&self.cycles_snf, x).is_some()
    }

    /// Whether `x` lies in the boundary lattice, i.e. represents zero.
    pub fn represents_zero(&self, x: &[BigInt]) -> Result<bool> {
        Ok(self.coordinates(x)?.iter().all(Zero::is_zero))
    }

    /// Canonical coordinates of the class of a cycle `x`: integers on free
    /// generators, residues in `[0, d)` on torsion generators.
    pub fn coordinates(&self, x: &[BigInt]) -> Result<IntVector> {
        if x.len() != self.ambient {
            return Err(Error::Dimension(format!(
                "vector of length {} in a group over Z^{}",
                x.len(),
                self.ambient
            )));
        }
        let c = solve_with_smith(&self.cycles_snf, x)
            .ok_or_else(|| Error::Containment("vector is not a cycle".into()))?;
        let y = self.rel_snf.u.mul_vec(&c)?;
        Ok(self.kept.iter().map(|(i, d)| reduce(&y[*i], d)).collect())
    }

    /// Ambient representative of the element with the given coordinates.
    pub fn element(&self, coords: &[BigInt]) -> Result<IntVector> {
        if coords.len() != self.kept.len() {
            return Err(Error::Dimension("coordinate vector length".into()));
        }
        let mut out = vec![BigInt::zero(); self.ambient];
        for (g, c) in self.generators.iter().zip(coords) {
            for (o, x) in out.iter_mut().zip(g) {
                *o += x * c;
            }
        }
        Ok(out)
    }

    /// Reduces a coordinate vector into canonical form.
    pub fn normalize(&self, coords: &[BigInt]) -> IntVector {
        coords.iter().zip(&self.kept).map(|(c, (_, d))| reduce(c, d)).collect()
    }

    /// Same invariant factors.
    pub fn is_isomorphic(&self, other: &FgAbGroup) -> bool {
        self.free_rank() == other.free_rank() && self.torsion() == other.torsion()
    }
}

fn reduce(c: &BigInt, d: &BigInt) -> BigInt {
    if d.is_zero() {
        c.clone()
    } else {
        c.mod_floor(d)
    }
}

/// A homomorphism given by an ambient matrix that respects both lattices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    source: FgAbGroup,
    target: FgAbGroup,
    ambient: IntMatrix,
    matrix: IntMatrix,
}

/// The homomorphism induced by the ambient map `f` (target ambient rank ×
/// source ambient rank).
pub fn induced_hom(f: &IntMatrix, source: &FgAbGroup, target: &FgAbGroup) -> Result<GroupHom> {
    if f.cols() != source.ambient || f.rows() != target.ambient {
        return Err(Error::Dimension(format!(
            "{}x{} map between Z^{} and Z^{}",
            f.rows(),
            f.cols(),
            source.ambient,
            target.ambient
        )));
    }
    for (j, z) in source.cycles.columns().iter().enumerate() {
        if !target.contains(&f.mul_vec(z)?) {
            return Err(Error::IllDefinedHom(format!("cycle {} maps outside the target cycles", j)));
        }
    }
    for (j, b) in source.boundaries.columns().iter().enumerate() {
        if !target.represents_zero(&f.mul_vec(b)?)? {
            return Err(Error::IllDefinedHom(format!(
                "boundary {} maps outside the target boundaries",
                j
            )));
        }
    }
    let mut cols = Vec::with_capacity(source.num_generators());
    for g in &source.generators {
        cols.push(target.coordinates(&f.mul_vec(g)?)?);
    }
    let matrix = IntMatrix::from_columns(target.num_generators(), &cols)?;
    Ok(GroupHom {
        source: source.clone(),
        target: target.clone(),
        ambient: f.clone(),
        matrix,
    })
}

impl GroupHom {
    pub fn identity(g: &FgAbGroup) -> GroupHom {
        induced_hom(&IntMatrix::identity(g.ambient), g, g).expect("identity is well defined")
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    /// The ambient matrix the map was induced from.
    pub fn ambient_matrix(&self) -> &IntMatrix {
        &self.ambient
    }

    /// Matrix on abstract generators; torsion rows are reduced.
    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn is_endomorphism(&self) -> bool {
        self.source == self.target
    }

    /// Image of an element given in source coordinates.
    pub fn apply(&self, coords: &[BigInt]) -> Result<IntVector> {
        let y = self.matrix.mul_vec(coords)?;
        Ok(self.target.normalize(&y))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GroupHom) -> Result<GroupHom> {
        if other.target != self.source {
            return Err(Error::Dimension("composition of non-matching homomorphisms".into()));
        }
        induced_hom(&self.ambient.mul(&other.ambient)?, &other.source, &self.target)
    }

    /// Whether the map is the identity on abstract generators.
    pub fn is_identity(&self) -> bool {
        self.is_endomorphism() && self.matrix == IntMatrix::identity(self.source.num_generators())
    }
}

/// Square matrix of an endomorphism on the group's abstract generators.
pub fn hom_matrix_in_basis(h: &GroupHom) -> Result<IntMatrix> {
    if !h.is_endomorphism() {
        return Err(Error::Dimension("matrix in a basis needs an endomorphism".into()));
    }
    Ok(h.matrix.clone())
}

/// Matrix of an endomorphism in a user-chosen generating set.
///
/// `basis` holds ambient cycles `v₁…v_r` and `orders` their orders (zero for
/// infinite). The classes must form a basis of the group: `Z^r` modulo the
/// diagonal relations `orders` maps isomorphically onto it. Column `j` is the
/// image of `vⱼ` written in that basis, torsion coordinates in `[0, d)`.
pub fn matrix_in_generators(h: &GroupHom, basis: &[IntVector], orders: &[BigInt]) -> Result<IntMatrix> {
    if !h.is_endomorphism() {
        return Err(Error::Dimension("matrix in a basis needs an endomorphism".into()));
    }
    if basis.len() != orders.len() {
        return Err(Error::Dimension("one order per basis vector".into()));
    }
    let g = &h.source;
    let r = basis.len();
    let n = g.num_generators();
    let mut p_cols = Vec::with_capacity(r);
    for v in basis {
        p_cols.push(g.coordinates(v)?);
    }
    let p = IntMatrix::from_columns(n, &p_cols)?;
    // relations of the abstract group, then the claimed relations of the basis
    let mut rel_cols = Vec::new();
    for (k, d) in g.orders().iter().enumerate() {
        if !d.is_zero() {
            let mut e = vec![BigInt::zero(); n];
            e[k] = d.clone();
            rel_cols.push(e);
        }
    }
    let rel = IntMatrix::from_columns(n, &rel_cols)?;
    for (j, d) in orders.iter().enumerate() {
        let img: IntVector = p.column(j).iter().map(|x| x * d).collect();
        if !g.normalize(&img).iter().all(Zero::is_zero) {
            return Err(Error::InvalidSystem(format!("basis vector {} does not have order {}", j, d)));
        }
    }
    let sys = p.hstack(&rel)?;
    let sys_snf = smith(&sys);
    let solve = |target: &[BigInt]| -> Result<IntVector> {
        let x = solve_with_smith(&sys_snf, target)
            .ok_or_else(|| Error::InvalidSystem("basis does not generate the group".into()))?;
        Ok(x[..r].iter().zip(orders).map(|(c, d)| reduce(c, d)).collect())
    };
    // a generating set with the right orders and the right group order is a basis
    let mut presented_rel = Vec::new();
    for (k, d) in orders.iter().enumerate() {
        if !d.is_zero() {
            let mut e = vec![BigInt::zero(); r];
            e[k] = d.clone();
            presented_rel.push(e);
        }
    }
    let presented = FgAbGroup::presented(r, &IntMatrix::from_columns(r, &presented_rel)?)?;
    if !presented.is_isomorphic(g) {
        return Err(Error::InvalidSystem("basis presents a different group".into()));
    }
    for k in 0..n {
        let mut e = vec![BigInt::zero(); n];
        e[k] = BigInt::one();
        solve(&e)?;
    }
    let mut cols = Vec::with_capacity(r);
    for j in 0..r {
        let img = h.matrix.mul_vec(&p.column(j))?;
        cols.push(solve(&img)?);
    }
    IntMatrix::from_columns(r, &cols)
}

/// Kernel of `h` in abstract source coordinates, as a lattice in `Zʳ` that
/// contains the source relations.
pub fn kernel_lattice(h: &GroupHom) -> Result<IntMatrix> {
    let g = h.source();
    let n = g.num_generators();
    let t = h.target();
    let m = t.num_generators();
    let mut rel_cols = Vec::new();
    for (k, d) in t.orders().iter().enumerate() {
        if !d.is_zero() {
            let mut e = vec![BigInt::zero(); m];
            e[k] = d.clone();
            rel_cols.push(e);
        }
    }
    let rel = IntMatrix::from_columns(m, &rel_cols)?;
    // x with A·x ∈ rel  ⇔  (x, y) in the kernel of [A | −rel]
    let stacked = h.matrix.hstack(&rel.scale(&BigInt::from(-1)))?;
    let k = crate::intlin::kernel_basis(&stacked);
    let rows: Vec<usize> = (0..n).collect();
    let mut lat = k.select_rows(&rows);
    for (j, d) in g.orders().iter().enumerate() {
        if !d.is_zero() {
            let mut e = vec![BigInt::zero(); n];
            e[j] = d.clone();
            lat = lat.hstack(&IntMatrix::from_columns(n, &[e])?)?;
        }
    }
    Ok(column_space_basis(&lat))
}

/// Presentation of `g` on its abstract generators: `Z^r` modulo the orders.
pub fn abstract_presentation(g: &FgAbGroup) -> FgAbGroup {
    let free = g.free_rank();
    FgAbGroup::from_invariants(free, &g.torsion())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlin::ints;
    use alloc::collections::BTreeSet;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        let v: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        IntMatrix::from_rows(&v).unwrap()
    }

    #[test]
    fn trivial_examples() {
        let g = FgAbGroup::subquotient(2, &IntMatrix::identity(2), &mat(&[&[2], &[0]])).unwrap();
        assert_eq!(g.free_rank(), 1);
        assert_eq!(g.torsion(), ints(&[2]));
        let h = FgAbGroup::subquotient(2, &mat(&[&[1], &[1]]), &IntMatrix::zeros(2, 0)).unwrap();
        assert_eq!(h.free_rank(), 1);
        assert!(h.torsion().is_empty());
        assert_eq!(h.generators()[0].iter().map(|x| x.abs()).collect::<Vec<_>>(), ints(&[1, 1]));
        let l = mat(&[&[1, 2], &[3, 4]]);
        assert!(FgAbGroup::subquotient(2, &l, &l).unwrap().is_trivial());
        assert_eq!(FgAbGroup::free(3).free_rank(), 3);
    }

    #[test]
    fn containment_violation() {
        let e = FgAbGroup::subquotient(2, &mat(&[&[1], &[1]]), &mat(&[&[1], &[0]]));
        assert!(matches!(e, Err(Error::Containment(_))));
    }

    #[test]
    fn coordinates_round_trip() {
        let g = FgAbGroup::presented(3, &mat(&[&[2, 0], &[0, 6], &[0, 0]])).unwrap();
        assert_eq!(g.free_rank(), 1);
        assert_eq!(g.torsion(), ints(&[2, 6]));
        let x = ints(&[5, -7, 3]);
        let c = g.coordinates(&x).unwrap();
        let back = g.element(&c).unwrap();
        let diff: Vec<BigInt> = x.iter().zip(&back).map(|(a, b)| a - b).collect();
        assert!(g.represents_zero(&diff).unwrap());
        for (c, d) in c.iter().zip(g.orders()) {
            if !d.is_zero() {
                assert!(!c.is_negative() && c < &d);
            }
        }
    }

    #[test]
    fn identity_hom() {
        let g = FgAbGroup::from_invariants(18, &ints(&[2]));
        let id = GroupHom::identity(&g);
        assert!(id.is_identity());
        assert_eq!(hom_matrix_in_basis(&id).unwrap(), IntMatrix::identity(19));
    }

    #[test]
    fn ill_defined_map_is_rejected() {
        let z2 = FgAbGroup::presented(1, &mat(&[&[2]])).unwrap();
        let z3 = FgAbGroup::presented(1, &mat(&[&[3]])).unwrap();
        assert!(matches!(
            induced_hom(&IntMatrix::identity(1), &z2, &z3),
            Err(Error::IllDefinedHom(_))
        ));
    }

    #[test]
    fn user_basis() {
        // Z ⊕ Z/2 with the map (a, t) ↦ (3a, a + t)
        let g = FgAbGroup::from_invariants(1, &ints(&[2]));
        let f = mat(&[&[3, 0], &[1, 1]]);
        let h = induced_hom(&f, &g, &g).unwrap();
        assert_eq!(h.matrix(), &f);
        // basis (1, 1), (0, 1)
        let m = matrix_in_generators(&h, &[ints(&[1, 1]), ints(&[0, 1])], &ints(&[0, 2])).unwrap();
        // (1,1) ↦ (3, 2) = 3·(1,1) + 1·(0,1) mod 2
        assert_eq!(m, mat(&[&[3, 0], &[1, 1]]));
        assert!(matrix_in_generators(&h, &[ints(&[2, 0]), ints(&[0, 1])], &ints(&[0, 2])).is_err());
    }

    #[test]
    fn kernel_of_nilpotent() {
        let g = FgAbGroup::free(2);
        let h = induced_hom(&mat(&[&[0, 1], &[0, 0]]), &g, &g).unwrap();
        let k = kernel_lattice(&h).unwrap();
        assert_eq!(k.cols(), 1);
    }

    /// Canonical representative of `x` modulo a full-rank lattice given by a
    /// lower-triangular basis (columns).
    fn reduce_mod(x: &[i64], basis: &[[i64; 3]; 3], n: usize) -> Vec<i64> {
        let mut x = x.to_vec();
        for k in 0..n {
            let p = basis[k][k];
            let q = x[k].div_euclid(p);
            for i in 0..n {
                x[i] -= q * basis[k][i];
            }
        }
        x
    }

    /// Lower-triangular basis (columns) for the lattice spanned by `cols`,
    /// computed by a naive column gcd elimination independent of `intlin`.
    fn triangular(cols: &[Vec<i64>], n: usize) -> Option<[[i64; 3]; 3]> {
        let mut cols: Vec<Vec<i64>> = cols.to_vec();
        let mut out = [[0i64; 3]; 3];
        for k in 0..n {
            loop {
                let nz: Vec<usize> = (0..cols.len()).filter(|&j| cols[j][k] != 0).collect();
                if nz.len() <= 1 {
                    break;
                }
                let p = *nz.iter().min_by_key(|&&j| cols[j][k].abs()).unwrap();
                for &j in &nz {
                    if j != p {
                        let q = cols[j][k] / cols[p][k];
                        for i in 0..n {
                            cols[j][i] -= q * cols[p][i];
                        }
                    }
                }
            }
            let p = (0..cols.len()).find(|&j| cols[j][k] != 0)?;
            let mut c = cols.remove(p);
            if c[k] < 0 {
                c.iter_mut().for_each(|x| *x = -*x);
            }
            for i in 0..n {
                out[k][i] = c[i];
            }
        }
        Some(out)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn finite_quotients_match_enumeration(
            n in 1usize..=3,
            entries in proptest::collection::vec(-6i64..=6, 9),
        ) {
            let cols: Vec<Vec<i64>> = (0..n).map(|j| (0..n).map(|i| entries[j * 3 + i]).collect()).collect();
            let tri = triangular(&cols, n);
            prop_assume!(tri.is_some());
            let tri = tri.unwrap();
            let order: i64 = (0..n).map(|k| tri[k][k]).product();
            prop_assume!(order <= 400);
            // enumerate the group by closing {0} under adding unit vectors
            let mut seen = BTreeSet::new();
            let mut stack = vec![vec![0i64; n]];
            seen.insert(vec![0i64; n]);
            while let Some(x) = stack.pop() {
                for k in 0..n {
                    let mut y = x.clone();
                    y[k] += 1;
                    let y = reduce_mod(&y, &tri, n);
                    if seen.insert(y.clone()) {
                        stack.push(y);
                    }
                }
            }
            let rel = IntMatrix::from_columns(n, &cols.iter().map(|c| ints(c)).collect::<Vec<_>>()).unwrap();
            let g = FgAbGroup::presented(n, &rel).unwrap();
            prop_assert_eq!(g.free_rank(), 0);
            prop_assert_eq!(g.order().unwrap(), BigInt::from(seen.len()));
            // the number of solutions of k·x = 0 pins down the invariant factors
            for k in 1..=order {
                let killed = seen.iter().filter(|x| {
                    let kx: Vec<i64> = x.iter().map(|v| v * k).collect();
                    reduce_mod(&kx, &tri, n).iter().all(|&v| v == 0)
                }).count();
                let predicted: BigInt = g.torsion().iter().map(|d| d.gcd(&BigInt::from(k))).product();
                prop_assert_eq!(BigInt::from(killed), predicted);
            }
        }

        #[test]
        fn induced_respects_composition(
            a in proptest::collection::vec(-3i64..=3, 9),
            b in proptest::collection::vec(-3i64..=3, 9),
            d in 1i64..=4,
        ) {
            // group Z² ⊕ Z/d ⊕ ... on ambient Z³ with relation d·e₃
            let g = FgAbGroup::presented(3, &mat(&[&[0], &[0], &[d]])).unwrap();
            let mk = |v: &[i64]| {
                let mut m = IntMatrix::from_rows(&[v[0..3].to_vec(), v[3..6].to_vec(), v[6..9].to_vec()]).unwrap();
                // keep the torsion summand mapping into itself
                m.set(0, 2, BigInt::zero());
                m.set(1, 2, BigInt::zero());
                m
            };
            let fa = induced_hom(&mk(&a), &g, &g).unwrap();
            let fb = induced_hom(&mk(&b), &g, &g).unwrap();
            let ab = fa.compose(&fb).unwrap();
            let prod = fa.matrix().mul(fb.matrix()).unwrap();
            let reduced = IntMatrix::from_columns(
                g.num_generators(),
                &prod.columns().iter().map(|c| g.normalize(c)).collect::<Vec<_>>(),
            ).unwrap();
            prop_assert_eq!(ab.matrix(), &reduced);
        }

        #[test]
        fn free_and_zero_quotients(n in 1usize..=5, entries in proptest::collection::vec(-5i64..=5, 25)) {
            let m = IntMatrix::from_vec(n, n, entries[..n * n].iter().map(|&x| BigInt::from(x)).collect()).unwrap();
            let g = FgAbGroup::subquotient(n, &IntMatrix::identity(n), &IntMatrix::zeros(n, 0)).unwrap();
            prop_assert_eq!(g.free_rank(), n);
            let z = FgAbGroup::subquotient(n, &m, &m).unwrap();
            prop_assert!(z.is_trivial());
        }
    }
}
