use crate::algebra::Element;
use crate::error::{Error, Result};
use crate::ring::{RingSpec, Scalar};

/// A linear self-map in coordinates. Entry `(r, c)` is the coefficient of
/// `e_r` in the image of `e_c`, so column `c` is the image of `e_c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinMap {
    dim: usize,
    entries: Vec<Scalar>,
}

impl LinMap {
    pub fn zero(ring: &RingSpec, dim: usize) -> Self {
        LinMap {
            dim,
            entries: vec![ring.zero(); dim * dim],
        }
    }

    pub fn identity(ring: &RingSpec, dim: usize) -> Self {
        let mut m = Self::zero(ring, dim);
        for i in 0..dim {
            m.entries[i * dim + i] = ring.one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(LinMap { dim, entries })
    }

    pub fn from_columns(ring: &RingSpec, columns: &[Element]) -> Result<Self> {
        let dim = columns.len();
        let mut m = Self::zero(ring, dim);
        for (c, col) in columns.iter().enumerate() {
            if col.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: col.len(),
                });
            }
            for (r, v) in col.coords.iter().enumerate() {
                m.entries[r * dim + c] = v.clone();
            }
        }
        Ok(m)
    }

    /// Row-major flattening, the coordinate vector used by map spaces.
    pub fn from_vector(dim: usize, v: &[Scalar]) -> Result<Self> {
        if v.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: v.len(),
            });
        }
        Ok(LinMap {
            dim,
            entries: v.to_vec(),
        })
    }

    pub fn to_vector(&self) -> Element {
        Element::new(self.entries.clone())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.entries[r * self.dim + c] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        self.entries.chunks(self.dim.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Element {
        Element::new((0..self.dim).map(|r| self.get(r, c).clone()).collect())
    }

    pub fn apply(&self, ring: &RingSpec, x: &Element) -> Result<Element> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        let mut out = vec![ring.zero(); self.dim];
        for (c, xc) in x.coords.iter().enumerate() {
            if ring.is_zero(xc) {
                continue;
            }
            for (r, o) in out.iter_mut().enumerate() {
                let e = &self.entries[r * self.dim + c];
                if !ring.is_zero(e) {
                    *o = ring.mul_add(o, e, xc);
                }
            }
        }
        Ok(Element::new(out))
    }

    /// `self ∘ other`.
    pub fn compose(&self, ring: &RingSpec, other: &LinMap) -> Result<LinMap> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let cols: Result<Vec<Element>> = (0..self.dim)
            .map(|c| self.apply(ring, &other.column(c)))
            .collect();
        LinMap::from_columns(ring, &cols?)
    }

    pub fn pow(&self, ring: &RingSpec, k: usize) -> LinMap {
        let mut acc = LinMap::identity(ring, self.dim);
        for _ in 0..k {
            acc = self.compose(ring, &acc).expect("same dimension");
        }
        acc
    }

    pub fn add(&self, ring: &RingSpec, other: &LinMap) -> LinMap {
        LinMap {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| ring.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, ring: &RingSpec, other: &LinMap) -> LinMap {
        LinMap {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| ring.sub(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, ring: &RingSpec, c: &Scalar) -> LinMap {
        LinMap {
            dim: self.dim,
            entries: self.entries.iter().map(|a| ring.mul(c, a)).collect(),
        }
    }

    pub fn is_zero(&self, ring: &RingSpec) -> bool {
        self.entries.iter().all(|x| ring.is_zero(x))
    }
}
