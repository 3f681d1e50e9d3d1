//! Brute-force reference implementations over `Z/n`, computed straight from
//! the definitions by scanning every element. Nothing here reuses the
//! solver, the submodule machinery or the algebra's multiplication; the
//! arithmetic is plain `u64` modular arithmetic on a copied table of
//! structure constants.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::algebra::{Algebra, Element};
use crate::error::{Error, Result};
use crate::linmap::LinMap;
use crate::ring::{RingSpec, Scalar};

pub const DEFAULT_BUDGET: u128 = 1_000_000;

type Vector = Vec<u64>;

/// An algebra over `Z/n` reduced to residues.
pub struct Oracle {
    n: u64,
    dim: usize,
    /// `c[(i*dim + j)*dim + k]`.
    table: Vec<u64>,
    budget: u128,
    size: u128,
}

fn residue(x: &Scalar) -> Result<u64> {
    match x {
        Scalar::Residue(r) => Ok(*r),
        Scalar::Rational(_) => Err(Error::NotEnumerable),
    }
}

fn element_count(n: u64, dim: usize) -> u128 {
    (n as u128).checked_pow(dim as u32).unwrap_or(u128::MAX)
}

impl Oracle {
    pub fn new(alg: &Algebra) -> Result<Self> {
        Self::with_budget(alg, DEFAULT_BUDGET)
    }

    pub fn with_budget(alg: &Algebra, budget: u128) -> Result<Self> {
        let n = alg.ring().modulus().ok_or(Error::NotEnumerable)?;
        let dim = alg.dim();
        let size = element_count(n, dim);
        if size > budget {
            return Err(Error::BudgetExceeded { size, budget });
        }
        let table = alg.structure_constants().iter().map(residue).collect::<Result<_>>()?;
        Ok(Oracle {
            n,
            dim,
            table,
            budget,
            size,
        })
    }

    pub fn size(&self) -> u128 {
        self.size
    }

    pub fn budget(&self) -> u128 {
        self.budget
    }

    /// The `idx`-th element in lexicographic order, last coordinate fastest.
    fn decode(&self, mut idx: u128) -> Vector {
        let mut v = vec![0; self.dim];
        for c in v.iter_mut().rev() {
            *c = (idx % self.n as u128) as u64;
            idx /= self.n as u128;
        }
        v
    }

    fn mul(&self, x: &[u64], y: &[u64]) -> Vector {
        let (n, d) = (self.n as u128, self.dim);
        let mut acc = vec![0u128; d];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let w = xi as u128 * yj as u128 % n;
                let base = (i * d + j) * d;
                for (k, a) in acc.iter_mut().enumerate() {
                    *a = (*a + w * self.table[base + k] as u128) % n;
                }
            }
        }
        acc.into_iter().map(|a| a as u64).collect()
    }

    fn sub(&self, x: &[u64], y: &[u64]) -> Vector {
        x.iter().zip(y).map(|(&a, &b)| (a + self.n - b) % self.n).collect()
    }

    fn bracket(&self, x: &[u64], y: &[u64]) -> Vector {
        self.sub(&self.mul(x, y), &self.mul(y, x))
    }

    /// `[x, y]_k` by its recursive definition.
    fn iterated(&self, x: &[u64], y: &[u64], k: usize) -> Vector {
        let mut cur = x.to_vec();
        for _ in 0..k {
            cur = self.bracket(&cur, y);
        }
        cur
    }

    fn apply(&self, theta: &[Vec<u64>], x: &[u64]) -> Vector {
        let n = self.n as u128;
        theta
            .iter()
            .map(|row| (row.iter().zip(x).map(|(&a, &b)| a as u128 * b as u128).sum::<u128>() % n) as u64)
            .collect()
    }

    fn to_element(v: &[u64]) -> Element {
        Element::new(v.iter().map(|&r| Scalar::Residue(r)).collect())
    }

    fn matrix(&self, theta: &LinMap) -> Result<Vec<Vec<u64>>> {
        if theta.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: theta.dim(),
            });
        }
        theta.rows().iter().map(|r| r.iter().map(residue).collect()).collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.size).map(|i| Self::to_element(&self.decode(i)))
    }

    /// All `a` with `[a, x]_k = 0` for every `x`, in lexicographic order.
    fn engel(&self, k: usize) -> Vec<Element> {
        let hits: Vec<u128> = (0..self.size)
            .into_par_iter()
            .filter(|&i| {
                let a = self.decode(i);
                (0..self.size).all(|j| self.iterated(&a, &self.decode(j), k).iter().all(|&c| c == 0))
            })
            .collect();
        hits.into_iter().map(|i| Self::to_element(&self.decode(i))).collect()
    }

    pub fn center(&self) -> Vec<Element> {
        self.engel(1)
    }

    pub fn zk(&self, k: usize) -> Vec<Element> {
        self.engel(k)
    }

    /// First `x` with `[Θ(x), x]_k ≠ 0`.
    pub fn k_commuting(&self, theta: &LinMap, k: usize) -> Result<Option<Element>> {
        let t = self.matrix(theta)?;
        let hit = (0..self.size).into_par_iter().find_first(|&i| {
            let x = self.decode(i);
            self.iterated(&self.apply(&t, &x), &x, k).iter().any(|&c| c != 0)
        });
        Ok(hit.map(|i| Self::to_element(&self.decode(i))))
    }

    /// First central `λ` (lexicographic) with `Θ(x) - xλ` central for every
    /// `x`, and the resulting `ζ`.
    pub fn properness(&self, theta: &LinMap) -> Result<Option<(Element, LinMap)>> {
        let t = self.matrix(theta)?;
        let center: Vec<Vector> = self.center().iter().map(|e| e.coords.iter().map(|c| residue(c).unwrap()).collect()).collect();
        let set: HashSet<&Vector> = center.iter().collect();
        let found = center.iter().find(|lambda| {
            (0..self.size).into_par_iter().all(|i| {
                let x = self.decode(i);
                set.contains(&self.sub(&self.apply(&t, &x), &self.mul(&x, lambda)))
            })
        });
        let Some(lambda) = found else {
            return Ok(None);
        };
        let ring = RingSpec::Zmod { n: self.n };
        let cols: Vec<Element> = (0..self.dim)
            .map(|j| {
                let mut e = vec![0; self.dim];
                e[j] = 1;
                Self::to_element(&self.sub(&self.apply(&t, &e), &self.mul(&e, lambda)))
            })
            .collect();
        Ok(Some((Self::to_element(lambda), LinMap::from_columns(&ring, &cols)?)))
    }
}

/// Every element of `R^dim`, lexicographically, within `budget`.
pub fn enumerate_elements(ring: &RingSpec, dim: usize, budget: u128) -> Result<impl Iterator<Item = Element>> {
    let n = ring.modulus().ok_or(Error::NotEnumerable)?;
    let size = element_count(n, dim);
    if size > budget {
        return Err(Error::BudgetExceeded { size, budget });
    }
    Ok((0..size).map(move |mut idx| {
        let mut v = vec![Scalar::Residue(0); dim];
        for c in v.iter_mut().rev() {
            *c = Scalar::Residue((idx % n as u128) as u64);
            idx /= n as u128;
        }
        Element::new(v)
    }))
}

pub fn brute_center(alg: &Algebra) -> Result<Vec<Element>> {
    Ok(Oracle::new(alg)?.center())
}

pub fn brute_zk(alg: &Algebra, k: usize) -> Result<Vec<Element>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    Ok(Oracle::new(alg)?.zk(k))
}

pub fn brute_k_commuting(alg: &Algebra, theta: &LinMap, k: usize) -> Result<Option<Element>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    Oracle::new(alg)?.k_commuting(theta, k)
}

pub fn brute_properness(alg: &Algebra, theta: &LinMap) -> Result<Option<(Element, LinMap)>> {
    Oracle::new(alg)?.properness(theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    fn z(n: u64) -> RingSpec {
        RingSpec::zmod(n).unwrap()
    }

    #[test]
    fn enumeration_counts_and_budget() {
        assert_eq!(enumerate_elements(&z(2), 3, DEFAULT_BUDGET).unwrap().count(), 8);
        assert_eq!(enumerate_elements(&z(3), 4, DEFAULT_BUDGET).unwrap().count(), 81);
        assert!(matches!(
            enumerate_elements(&z(5), 10, DEFAULT_BUDGET),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(matches!(
            enumerate_elements(&RingSpec::Rationals, 1, DEFAULT_BUDGET),
            Err(Error::NotEnumerable)
        ));
        let first: Vec<Element> = enumerate_elements(&z(2), 2, 10).unwrap().collect();
        let r = |v: &[u64]| Element::new(v.iter().map(|&x| Scalar::Residue(x)).collect());
        assert_eq!(first, vec![r(&[0, 0]), r(&[0, 1]), r(&[1, 0]), r(&[1, 1])]);
    }

    #[test]
    fn center_of_m2_is_scalars() {
        let a = families::matrix_algebra(z(3), 2).unwrap();
        let c = brute_center(&a).unwrap();
        assert_eq!(c.len(), 3);
        for (i, e) in c.iter().enumerate() {
            assert_eq!(e, &a.unit().unwrap().scale(a.ring(), &Scalar::Residue(i as u64)));
        }
    }

    #[test]
    fn engel_set_of_t2() {
        let t = families::triangular_gma(z(3), 2, 1).unwrap();
        let one = t.algebra().unit().unwrap().clone();
        let z2 = brute_zk(t.algebra(), 2).unwrap();
        assert_eq!(z2.len(), 3);
        assert!(z2.contains(&one));
    }

    #[test]
    fn identity_is_proper() {
        let a = families::matrix_algebra(z(3), 2).unwrap();
        let id = LinMap::identity(a.ring(), 4);
        assert_eq!(brute_k_commuting(&a, &id, 3).unwrap(), None);
        let (lambda, zeta) = brute_properness(&a, &id).unwrap().unwrap();
        assert_eq!(&lambda, a.unit().unwrap());
        assert!(zeta.is_zero(a.ring()));
    }

    #[test]
    fn left_multiplication_is_not_proper() {
        let a = families::matrix_algebra(z(3), 2).unwrap();
        let l = a.left_mul_map(&a.basis(0)).unwrap();
        assert!(brute_k_commuting(&a, &l, 1).unwrap().is_some());
        assert!(brute_properness(&a, &l).unwrap().is_none());
    }
}
