//! Finite-dimensional associative algebras given by structure constants
//! `e_i · e_j = Σ_k c[i][j][k] e_k`, together with commutators, the center,
//! and the Engel sets `Z(A)_k = {a : [a, x]_k = 0 for all x}`.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linmap::LinMap;
use crate::ring::{RingSpec, Scalar};
use crate::solve::{span_cardinality, LinearSystem, Solution};

/// Largest submodule whose elements are listed eagerly.
pub const ELEMENT_LIST_LIMIT: u128 = 100_000;

/// Rows accumulated per parallel batch in the enumerative scans.
const SCAN_BATCH: usize = 512;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    pub coords: Vec<Scalar>,
}

impl Element {
    pub fn new(coords: Vec<Scalar>) -> Self {
        Element { coords }
    }

    pub fn zero(ring: &RingSpec, dim: usize) -> Self {
        Element::new(vec![ring.zero(); dim])
    }

    pub fn basis(ring: &RingSpec, dim: usize, i: usize) -> Self {
        let mut e = Element::zero(ring, dim);
        e.coords[i] = ring.one();
        e
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self, ring: &RingSpec) -> bool {
        self.coords.iter().all(|x| ring.is_zero(x))
    }

    pub fn add(&self, ring: &RingSpec, other: &Element) -> Element {
        Element::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| ring.add(a, b))
                .collect(),
        )
    }

    pub fn sub(&self, ring: &RingSpec, other: &Element) -> Element {
        Element::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| ring.sub(a, b))
                .collect(),
        )
    }

    pub fn neg(&self, ring: &RingSpec) -> Element {
        Element::new(self.coords.iter().map(|a| ring.neg(a)).collect())
    }

    pub fn scale(&self, ring: &RingSpec, c: &Scalar) -> Element {
        Element::new(self.coords.iter().map(|a| ring.mul(c, a)).collect())
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    ring: RingSpec,
    dim: usize,
    labels: Vec<String>,
    /// Flat `c[i][j][k]` at `(i * dim + j) * dim + k`.
    consts: Vec<Scalar>,
    /// Nonzero `(k, c[i][j][k])` per product `e_i e_j`.
    sparse: Vec<Vec<(usize, Scalar)>>,
    unit: Option<Element>,
}

impl Algebra {
    /// Builds and validates an algebra: canonical scalars, associativity on
    /// all basis triples, and (when given) a two-sided unit.
    pub fn new(
        ring: RingSpec,
        labels: Vec<String>,
        consts: Vec<Scalar>,
        unit: Option<Element>,
    ) -> Result<Self> {
        let alg = Self::new_unchecked(ring, labels, consts, unit)?;
        if let Some((i, j, k)) = alg.associativity_failures().into_iter().next() {
            return Err(Error::InvalidAlgebra(format!(
                "not associative on ({}, {}, {})",
                alg.labels[i], alg.labels[j], alg.labels[k]
            )));
        }
        if alg.unit.is_some() {
            if let Some(i) = alg.unit_failures().into_iter().next() {
                return Err(Error::InvalidAlgebra(format!(
                    "unit does not act as identity on {}",
                    alg.labels[i]
                )));
            }
        }
        Ok(alg)
    }

    /// Shape and ring checks only.
    pub fn new_unchecked(
        ring: RingSpec,
        labels: Vec<String>,
        consts: Vec<Scalar>,
        unit: Option<Element>,
    ) -> Result<Self> {
        let dim = labels.len();
        if dim == 0 {
            return Err(Error::InvalidAlgebra("dimension must be positive".into()));
        }
        if consts.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim * dim,
                found: consts.len(),
            });
        }
        if let Some(bad) = consts.iter().find(|x| !ring.contains(x)) {
            return Err(Error::InvalidScalar {
                value: format!("{bad:?}"),
                ring: ring.to_string(),
            });
        }
        if let Some(u) = &unit {
            if u.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: u.len(),
                });
            }
        }
        let sparse = (0..dim * dim)
            .map(|ij| {
                (0..dim)
                    .filter_map(|k| {
                        let c = &consts[ij * dim + k];
                        (!ring.is_zero(c)).then(|| (k, c.clone()))
                    })
                    .collect()
            })
            .collect();
        Ok(Algebra {
            ring,
            dim,
            labels,
            consts,
            sparse,
            unit,
        })
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn structure_constants(&self) -> &[Scalar] {
        &self.consts
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.consts[(i * self.dim + j) * self.dim + k]
    }

    pub fn unit(&self) -> Result<&Element> {
        self.unit.as_ref().ok_or(Error::NotUnital)
    }

    pub fn has_unit(&self) -> bool {
        self.unit.is_some()
    }

    pub fn basis(&self, i: usize) -> Element {
        Element::basis(&self.ring, self.dim, i)
    }

    pub fn zero(&self) -> Element {
        Element::zero(&self.ring, self.dim)
    }

    /// `c · 1`.
    pub fn scalar(&self, c: &Scalar) -> Result<Element> {
        Ok(self.unit()?.scale(&self.ring, c))
    }

    pub fn check_dim(&self, x: &Element) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        Ok(())
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(self.mul_unchecked(x, y))
    }

    pub(crate) fn mul_unchecked(&self, x: &Element, y: &Element) -> Element {
        let ring = &self.ring;
        let mut out = vec![ring.zero(); self.dim];
        for (i, xi) in x.coords.iter().enumerate() {
            if ring.is_zero(xi) {
                continue;
            }
            for (j, yj) in y.coords.iter().enumerate() {
                if ring.is_zero(yj) {
                    continue;
                }
                let terms = &self.sparse[i * self.dim + j];
                if terms.is_empty() {
                    continue;
                }
                let xy = ring.mul(xi, yj);
                for (k, c) in terms {
                    out[*k] = ring.mul_add(&out[*k], &xy, c);
                }
            }
        }
        Element::new(out)
    }

    /// `[x, y] = xy - yx`.
    pub fn bracket(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    fn bracket_unchecked(&self, x: &Element, y: &Element) -> Element {
        self.mul_unchecked(x, y)
            .sub(&self.ring, &self.mul_unchecked(y, x))
    }

    /// `[x, y]_0 = x`, `[x, y]_k = [[x, y]_{k-1}, y]`.
    pub fn iterated_bracket(&self, x: &Element, y: &Element, k: usize) -> Result<Element> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(self.iterated_bracket_unchecked(x, y, k))
    }

    pub(crate) fn iterated_bracket_unchecked(&self, x: &Element, y: &Element, k: usize) -> Element {
        let mut acc = x.clone();
        for _ in 0..k {
            acc = self.bracket_unchecked(&acc, y);
        }
        acc
    }

    /// The operator `a ↦ ay - ya`, i.e. `R_y - L_y`.
    pub fn ad_right(&self, y: &Element) -> Result<LinMap> {
        self.check_dim(y)?;
        let cols: Vec<Element> = (0..self.dim)
            .map(|j| self.bracket_unchecked(&self.basis(j), y))
            .collect();
        LinMap::from_columns(&self.ring, &cols)
    }

    pub fn left_mul_map(&self, c: &Element) -> Result<LinMap> {
        self.check_dim(c)?;
        let cols: Vec<Element> = (0..self.dim)
            .map(|j| self.mul_unchecked(c, &self.basis(j)))
            .collect();
        LinMap::from_columns(&self.ring, &cols)
    }

    pub fn right_mul_map(&self, c: &Element) -> Result<LinMap> {
        self.check_dim(c)?;
        let cols: Vec<Element> = (0..self.dim)
            .map(|j| self.mul_unchecked(&self.basis(j), c))
            .collect();
        LinMap::from_columns(&self.ring, &cols)
    }

    /// The inner derivation `x ↦ cx - xc`.
    pub fn inner_derivation(&self, c: &Element) -> Result<LinMap> {
        Ok(self.left_mul_map(c)?.sub(&self.ring, &self.right_mul_map(c)?))
    }

    /// `(R_y - L_y)^k x`, the operator form of the iterated bracket.
    pub fn iterated_bracket_operator(&self, x: &Element, y: &Element, k: usize) -> Result<Element> {
        self.check_dim(x)?;
        self.ad_right(y)?.pow(&self.ring, k).apply(&self.ring, x)
    }

    pub fn associativity_failures(&self) -> Vec<(usize, usize, usize)> {
        let mut bad = Vec::new();
        for i in 0..self.dim {
            let ei = self.basis(i);
            for j in 0..self.dim {
                let ej = self.basis(j);
                let eij = self.mul_unchecked(&ei, &ej);
                for k in 0..self.dim {
                    let ek = self.basis(k);
                    let lhs = self.mul_unchecked(&eij, &ek);
                    let rhs = self.mul_unchecked(&ei, &self.mul_unchecked(&ej, &ek));
                    if lhs != rhs {
                        bad.push((i, j, k));
                    }
                }
            }
        }
        bad
    }

    fn unit_failures(&self) -> Vec<usize> {
        let Some(u) = &self.unit else {
            return Vec::new();
        };
        (0..self.dim)
            .filter(|&i| {
                let e = self.basis(i);
                self.mul_unchecked(u, &e) != e || self.mul_unchecked(&e, u) != e
            })
            .collect()
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| {
            (0..self.dim).all(|j| {
                (0..self.dim)
                    .all(|k| self.structure_constant(i, j, k) == self.structure_constant(j, i, k))
            })
        })
    }

    /// Same module with product `x ∘ y = y x`.
    pub fn opposite(&self) -> Algebra {
        let d = self.dim;
        let mut consts = self.consts.clone();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    consts[(i * d + j) * d + k] = self.structure_constant(j, i, k).clone();
                }
            }
        }
        Algebra::new_unchecked(self.ring, self.labels.clone(), consts, self.unit.clone())
            .expect("opposite keeps the shape")
    }

    /// `|ring|^dim`, when the ring is finite (saturating).
    pub fn cardinality(&self) -> Option<u128> {
        let n = self.ring.cardinality()? as u128;
        let mut acc: u128 = 1;
        for _ in 0..self.dim {
            acc = acc.saturating_mul(n);
        }
        Some(acc)
    }

    /// Every element, in lexicographic coordinate order (first coordinate most
    /// significant).
    pub fn elements(&self) -> Result<ElementIter> {
        ElementIter::new(&self.ring, self.dim)
    }

    /// Renders `x` in terms of the basis labels, e.g. `2·E11 + E12`.
    pub fn format_element(&self, x: &Element) -> String {
        format_coords(&self.ring, &self.labels, x)
    }

    pub fn center(&self) -> Submodule {
        // [a, e_i] = 0 for each basis e_i; linear in a, so the basis suffices.
        let mut sys = LinearSystem::new(self.ring, self.dim);
        for i in 0..self.dim {
            let op = self.commutator_with_basis_rows(i);
            for row in op {
                sys.push_homogeneous(&row).expect("width");
            }
        }
        Submodule::from_kernel(self.ring, self.dim, sys.kernel())
    }

    /// Rows of the operator `a ↦ [a, e_i]`.
    fn commutator_with_basis_rows(&self, i: usize) -> Vec<Vec<Scalar>> {
        let d = self.dim;
        (0..d)
            .map(|k| {
                (0..d)
                    .map(|j| {
                        self.ring.sub(
                            self.structure_constant(j, i, k),
                            self.structure_constant(i, j, k),
                        )
                    })
                    .collect()
            })
            .collect()
    }

    /// `Z(A)_k`, by intersecting `ker (R_x - L_x)^k` over every `x`.
    pub fn zk_set(&self, k: usize) -> Result<Submodule> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        if k == 1 {
            return Ok(self.center());
        }
        let mut sys = LinearSystem::new(self.ring, self.dim);
        self.scan_elements(&mut sys, |x| {
            // Column j of (ad x)^k is [e_j, x]_k; emit it row by row.
            let cols: Vec<Element> = (0..self.dim)
                .map(|j| self.iterated_bracket_unchecked(&self.basis(j), x, k))
                .collect();
            (0..self.dim)
                .map(|r| cols.iter().map(|c| c.coords[r].clone()).collect())
                .collect()
        })?;
        Ok(Submodule::from_kernel(self.ring, self.dim, sys.kernel()))
    }

    /// First element, in enumeration order, satisfying `pred`.
    pub(crate) fn find_first_element<F>(&self, pred: F) -> Result<Option<Element>>
    where
        F: Fn(&Element) -> bool + Sync,
    {
        let mut iter = self.elements()?;
        loop {
            let batch: Vec<Element> = iter.by_ref().take(SCAN_BATCH * 8).collect();
            if batch.is_empty() {
                return Ok(None);
            }
            if let Some(x) = batch.par_iter().find_first(|x| pred(x)) {
                return Ok(Some(x.clone()));
            }
        }
    }

    /// Feeds the rows produced for each element into `sys`, in enumeration
    /// order, computing batches in parallel.
    pub(crate) fn scan_elements<F>(&self, sys: &mut LinearSystem, rows_for: F) -> Result<()>
    where
        F: Fn(&Element) -> Vec<Vec<Scalar>> + Sync,
    {
        let mut iter = self.elements()?;
        loop {
            let batch: Vec<Element> = iter.by_ref().take(SCAN_BATCH).collect();
            if batch.is_empty() {
                return Ok(());
            }
            let rows: Vec<Vec<Vec<Scalar>>> = batch.par_iter().map(&rows_for).collect();
            for row in rows.iter().flatten() {
                sys.push_homogeneous(row)?;
            }
        }
    }
}

/// Renders coordinates against basis labels, e.g. `2·E11 + E12`.
pub fn format_coords(ring: &RingSpec, labels: &[String], x: &Element) -> String {
    let terms: Vec<String> = x
        .coords
        .iter()
        .enumerate()
        .filter(|(_, c)| !ring.is_zero(c))
        .map(|(i, c)| {
            let label = labels.get(i).map_or("?", |s| s.as_str());
            if *c == ring.one() {
                label.to_string()
            } else {
                format!("{c}·{label}")
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Lexicographic odometer over `(Z/n)^dim`.
#[derive(Clone, Debug)]
pub struct ElementIter {
    n: u64,
    next: Option<Vec<u64>>,
}

impl ElementIter {
    /// All of `R^dim` for a finite `R`, lexicographically.
    pub fn new(ring: &RingSpec, dim: usize) -> Result<Self> {
        let n = ring.modulus().ok_or(Error::NotEnumerable)?;
        Ok(ElementIter {
            n,
            next: Some(vec![0; dim]),
        })
    }
}

impl Iterator for ElementIter {
    type Item = Element;

    fn next(&mut self) -> Option<Element> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut pos = succ.len();
        let mut carry = true;
        while carry && pos > 0 {
            pos -= 1;
            succ[pos] += 1;
            if succ[pos] == self.n {
                succ[pos] = 0;
            } else {
                carry = false;
            }
        }
        if !carry {
            self.next = Some(succ);
        }
        Some(Element::new(current.into_iter().map(Scalar::Residue).collect()))
    }
}

/// A submodule of `R^dim` given by generators. Over a finite ring, small
/// submodules also carry their full element list (sorted).
#[derive(Clone, Debug)]
pub struct Submodule {
    ring: RingSpec,
    ambient_dim: usize,
    generators: Vec<Element>,
    elements: Option<Vec<Element>>,
}

impl Submodule {
    pub fn span(ring: RingSpec, ambient_dim: usize, generators: Vec<Element>) -> Self {
        let generators: Vec<Element> = generators
            .into_iter()
            .filter(|g| !g.is_zero(&ring))
            .collect();
        let mut sm = Submodule {
            ring,
            ambient_dim,
            generators,
            elements: None,
        };
        if let Some(card) = sm.cardinality() {
            if card <= ELEMENT_LIST_LIMIT {
                sm.elements = Some(sm.enumerate_span());
            }
        }
        sm
    }

    fn from_kernel(ring: RingSpec, dim: usize, kernel: Vec<Vec<Scalar>>) -> Self {
        Self::span(ring, dim, kernel.into_iter().map(Element::new).collect())
    }

    pub fn zero(ring: RingSpec, dim: usize) -> Self {
        Self::span(ring, dim, Vec::new())
    }

    pub fn whole(ring: RingSpec, dim: usize) -> Self {
        Self::span(
            ring,
            dim,
            (0..dim).map(|i| Element::basis(&ring, dim, i)).collect(),
        )
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn elements(&self) -> Option<&[Element]> {
        self.elements.as_deref()
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// Number of elements, for finite rings.
    pub fn cardinality(&self) -> Option<u128> {
        let n = self.ring.modulus()?;
        let rows: Vec<Vec<u64>> = self
            .generators
            .iter()
            .map(|g| g.coords.iter().map(|x| self.ring.residue(x).unwrap()).collect())
            .collect();
        Some(span_cardinality(n, &rows, self.ambient_dim))
    }

    fn enumerate_span(&self) -> Vec<Element> {
        let scalars = self.ring.enumerate_scalars().expect("finite ring");
        let mut set = BTreeSet::new();
        set.insert(Element::zero(&self.ring, self.ambient_dim));
        for g in &self.generators {
            let current: Vec<Element> = set.iter().cloned().collect();
            for v in current {
                for c in &scalars {
                    set.insert(v.add(&self.ring, &g.scale(&self.ring, c)));
                }
            }
        }
        set.into_iter().collect()
    }

    /// Coefficients `y` with `Σ y_i g_i = x`, if `x` lies in the span.
    pub fn coordinates_of(&self, x: &Element) -> Option<Vec<Scalar>> {
        if x.len() != self.ambient_dim {
            return None;
        }
        if let Some(elems) = &self.elements {
            if elems.binary_search(x).is_err() {
                return None;
            }
        }
        let mut sys = LinearSystem::new(self.ring, self.generators.len());
        for r in 0..self.ambient_dim {
            let row: Vec<Scalar> = self.generators.iter().map(|g| g.coords[r].clone()).collect();
            sys.push(&row, &x.coords[r]).expect("width");
        }
        match sys.solve() {
            Solution::Solved(s) => Some(s.particular),
            Solution::Inconsistent => None,
        }
    }

    pub fn contains(&self, x: &Element) -> bool {
        if x.len() != self.ambient_dim {
            return false;
        }
        if let Some(elems) = &self.elements {
            return elems.binary_search(x).is_ok();
        }
        self.coordinates_of(x).is_some()
    }

    pub fn is_subset_of(&self, other: &Submodule) -> bool {
        self.ambient_dim == other.ambient_dim && self.generators.iter().all(|g| other.contains(g))
    }

    /// Equality of submodules, decided by mutual containment.
    pub fn same_as(&self, other: &Submodule) -> bool {
        self.is_subset_of(other) && other.is_subset_of(self)
    }

    /// Image under a coordinate map.
    pub fn map(&self, dim: usize, f: impl Fn(&Element) -> Element) -> Submodule {
        Submodule::span(self.ring, dim, self.generators.iter().map(f).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use proptest::prelude::*;

    fn z3() -> RingSpec {
        RingSpec::zmod(3).unwrap()
    }

    /// M_2(Z/3) with basis E11, E12, E21, E22.
    fn m2() -> Algebra {
        families::matrix_algebra(z3(), 2).unwrap()
    }

    fn e(alg: &Algebra, label: &str) -> Element {
        let i = alg.labels().iter().position(|l| l == label).unwrap();
        alg.basis(i)
    }

    #[test]
    fn matrix_unit_products() {
        let a = m2();
        assert_eq!(a.mul(&e(&a, "E12"), &e(&a, "E21")).unwrap(), e(&a, "E11"));
        assert_eq!(a.mul(&e(&a, "E12"), &e(&a, "E12")).unwrap(), a.zero());
        let x = e(&a, "E12").add(a.ring(), &e(&a, "E21").scale(a.ring(), &Scalar::Residue(2)));
        assert_eq!(a.mul(a.unit().unwrap(), &x).unwrap(), x);
    }

    #[test]
    fn iterated_bracket_of_matrix_units() {
        let a = m2();
        let x = e(&a, "E12");
        let y = e(&a, "E11");
        assert_eq!(a.iterated_bracket(&x, &y, 2).unwrap(), x);
        assert_eq!(a.iterated_bracket(&x, &y, 0).unwrap(), x);
        assert_eq!(a.iterated_bracket(&x, &x, 3).unwrap(), a.zero());
        assert_eq!(a.iterated_bracket(&x, a.unit().unwrap(), 2).unwrap(), a.zero());
    }

    #[test]
    fn dimension_mismatch() {
        let a = m2();
        let short = Element::zero(a.ring(), 3);
        assert!(matches!(
            a.mul(&short, &a.zero()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rejects_non_associative_constants() {
        // e0 e0 = e1, e0 e1 = 0 but e1 e0 = e0: (e0 e0) e0 = e0 while e0 (e0 e0) = 0.
        let r = z3();
        let mut c = vec![r.zero(); 8];
        c[1] = r.one();
        c[(2) * 2] = r.one();
        let res = Algebra::new(r, vec!["a".into(), "b".into()], c, None);
        assert!(matches!(res, Err(Error::InvalidAlgebra(_))));
    }

    #[test]
    fn centers() {
        let a = m2();
        let z = a.center();
        assert_eq!(z.cardinality(), Some(3));
        assert!(z.contains(a.unit().unwrap()));
        let t2 = families::triangular_gma(z3(), 2, 1).unwrap();
        let zt = t2.algebra().center();
        assert_eq!(zt.elements().unwrap().len(), 3);
        assert!(zt.contains(t2.algebra().unit().unwrap()));
        let comm = families::diagonal_algebra(z3(), 2).unwrap();
        assert!(comm.center().same_as(&Submodule::whole(z3(), 2)));
    }

    #[test]
    fn engel_sets() {
        let t2 = families::triangular_gma(z3(), 2, 1).unwrap();
        let alg = t2.algebra();
        let scalars = Submodule::span(z3(), alg.dim(), vec![alg.unit().unwrap().clone()]);
        for k in 1..=3 {
            assert!(alg.zk_set(k).unwrap().same_as(&scalars), "k = {k}");
        }
        let comm = families::diagonal_algebra(z3(), 2).unwrap();
        assert!(comm.zk_set(2).unwrap().same_as(&Submodule::whole(z3(), 2)));
        assert!(matches!(alg.zk_set(0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn engel_sets_refuse_rationals() {
        let a = families::matrix_algebra(RingSpec::Rationals, 2).unwrap();
        assert!(matches!(a.zk_set(2), Err(Error::NotEnumerable)));
        assert_eq!(a.zk_set(1).unwrap().generators().len(), 1);
    }

    #[test]
    fn enumeration_order_is_lexicographic() {
        let a = families::diagonal_algebra(RingSpec::zmod(2).unwrap(), 3).unwrap();
        let all: Vec<Element> = a.elements().unwrap().collect();
        assert_eq!(all.len(), 8);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
    }

    #[test]
    fn opposite_reverses_products() {
        let a = m2();
        let op = a.opposite();
        let (x, y) = (e(&a, "E12"), e(&a, "E21"));
        assert_eq!(op.mul(&x, &y).unwrap(), a.mul(&y, &x).unwrap());
    }

    fn m2_element() -> impl Strategy<Value = Element> {
        prop::collection::vec(0u64..3, 4)
            .prop_map(|v| Element::new(v.into_iter().map(Scalar::Residue).collect()))
    }

    proptest! {
        #[test]
        fn bracket_recursion_matches_operator_power(x in m2_element(), y in m2_element(), k in 0usize..5) {
            let a = m2();
            prop_assert_eq!(
                a.iterated_bracket(&x, &y, k).unwrap(),
                a.iterated_bracket_operator(&x, &y, k).unwrap()
            );
        }

        #[test]
        fn engel_chain_and_closure(k in 1usize..4) {
            let t = families::triangular_gma(z3(), 3, 1).unwrap();
            let alg = t.algebra();
            let zk = alg.zk_set(k).unwrap();
            let zk1 = alg.zk_set(k + 1).unwrap();
            prop_assert!(alg.center().is_subset_of(&zk));
            prop_assert!(zk.is_subset_of(&zk1));
            let elems = zk.elements().unwrap();
            for x in elems {
                for y in elems {
                    prop_assert!(zk.contains(&x.add(alg.ring(), y)));
                }
                prop_assert!(zk.contains(&x.scale(alg.ring(), &Scalar::Residue(2))));
            }
        }
    }
}
