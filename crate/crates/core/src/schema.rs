//! Versioned JSON documents for algebras, Morita contexts and linear maps.
//!
//! Scalars are JSON integers over `Z/n` and either integers or `"p/q"`
//! strings over `Q`; both spellings are accepted on input. Tensors are
//! nested arrays in the same index order as the flat layouts of
//! [`Algebra`] and [`MoritaContext`].

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::{Algebra, Element};
use crate::error::{Error, Result};
use crate::linmap::LinMap;
use crate::morita::{Bimodule, MoritaContext};
use crate::ring::{RingSpec, Scalar};

pub const ALGEBRA_SCHEMA: &str = "gma.algebra/v1";
pub const CONTEXT_SCHEMA: &str = "gma.context/v1";
pub const MAP_SCHEMA: &str = "gma.map/v1";

type Tensor = Vec<Vec<Vec<Value>>>;

#[derive(Serialize, Deserialize)]
struct AlgebraBody {
    dim: usize,
    labels: Vec<String>,
    mul: Tensor,
    #[serde(default)]
    unit: Option<Vec<Value>>,
}

#[derive(Serialize, Deserialize)]
struct AlgebraDoc {
    #[serde(default)]
    schema: Option<String>,
    ring: RingSpec,
    #[serde(flatten)]
    body: AlgebraBody,
}

#[derive(Serialize, Deserialize)]
struct BimoduleBody {
    dim: usize,
    labels: Vec<String>,
    /// `left[i][j][k]`: coefficient of `v_k` in `l_i · v_j`.
    left: Tensor,
    /// `right[j][i][k]`: coefficient of `v_k` in `v_j · r_i`.
    right: Tensor,
}

#[derive(Serialize, Deserialize)]
struct ContextDoc {
    #[serde(default)]
    schema: Option<String>,
    ring: RingSpec,
    a: AlgebraBody,
    b: AlgebraBody,
    m: BimoduleBody,
    n: BimoduleBody,
    /// `phi[i][j][k]`: coefficient of `a_k` in `Φ(m_i, n_j)`.
    phi: Tensor,
    /// `psi[i][j][k]`: coefficient of `b_k` in `Ψ(n_i, m_j)`.
    psi: Tensor,
}

#[derive(Serialize, Deserialize)]
struct MapDoc {
    #[serde(default)]
    schema: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ring: Option<RingSpec>,
    /// `matrix[r][c]`; column `c` is the image of `e_c`.
    matrix: Vec<Vec<Value>>,
}

fn check_schema(found: &Option<String>, want: &str) -> Result<()> {
    match found {
        Some(s) if s != want => Err(Error::Schema(format!("expected schema {want:?}, found {s:?}"))),
        _ => Ok(()),
    }
}

fn scalar_from_json(ring: &RingSpec, v: &Value) -> Result<Scalar> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(ring.from_i64(i)),
            None => ring.parse_scalar(&n.to_string()),
        },
        Value::String(s) => ring.parse_scalar(s),
        other => Err(Error::InvalidScalar {
            value: other.to_string(),
            ring: ring.to_string(),
        }),
    }
}

fn scalar_to_json(x: &Scalar) -> Value {
    match x {
        Scalar::Residue(r) => Value::from(*r),
        Scalar::Rational(_) => Value::String(x.to_string()),
    }
}

fn vector_from_json(ring: &RingSpec, v: &[Value], len: usize, what: &str) -> Result<Vec<Scalar>> {
    if v.len() != len {
        return Err(Error::Schema(format!("{what}: expected {len} entries, found {}", v.len())));
    }
    v.iter().map(|x| scalar_from_json(ring, x)).collect()
}

fn flatten(ring: &RingSpec, t: &Tensor, shape: [usize; 3], what: &str) -> Result<Vec<Scalar>> {
    if t.len() != shape[0] {
        return Err(Error::Schema(format!("{what}: expected {} slices, found {}", shape[0], t.len())));
    }
    let mut out = Vec::with_capacity(shape.iter().product());
    for (i, slice) in t.iter().enumerate() {
        if slice.len() != shape[1] {
            return Err(Error::Schema(format!(
                "{what}[{i}]: expected {} rows, found {}",
                shape[1],
                slice.len()
            )));
        }
        for (j, row) in slice.iter().enumerate() {
            out.extend(vector_from_json(ring, row, shape[2], &format!("{what}[{i}][{j}]"))?);
        }
    }
    Ok(out)
}

fn nest(flat: &[Scalar], shape: [usize; 3]) -> Tensor {
    (0..shape[0])
        .map(|i| {
            (0..shape[1])
                .map(|j| {
                    let base = (i * shape[1] + j) * shape[2];
                    flat[base..base + shape[2]].iter().map(scalar_to_json).collect()
                })
                .collect()
        })
        .collect()
}

fn algebra_from_body(ring: RingSpec, body: &AlgebraBody, what: &str) -> Result<Algebra> {
    let d = body.dim;
    if body.labels.len() != d {
        return Err(Error::Schema(format!("{what}: {} labels for dimension {d}", body.labels.len())));
    }
    let consts = flatten(&ring, &body.mul, [d, d, d], &format!("{what}.mul"))?;
    let unit = match &body.unit {
        Some(u) => Some(Element::new(vector_from_json(&ring, u, d, &format!("{what}.unit"))?)),
        None => None,
    };
    Algebra::new(ring, body.labels.clone(), consts, unit)
}

fn algebra_body(alg: &Algebra) -> AlgebraBody {
    let d = alg.dim();
    AlgebraBody {
        dim: d,
        labels: alg.labels().to_vec(),
        mul: nest(alg.structure_constants(), [d, d, d]),
        unit: alg.unit().ok().map(|u| u.coords.iter().map(scalar_to_json).collect()),
    }
}

fn bimodule_from_body(ring: &RingSpec, body: &BimoduleBody, dl: usize, dr: usize, what: &str) -> Result<Bimodule> {
    let d = body.dim;
    if body.labels.len() != d {
        return Err(Error::Schema(format!("{what}: {} labels for dimension {d}", body.labels.len())));
    }
    Ok(Bimodule {
        dim: d,
        labels: body.labels.clone(),
        left: flatten(ring, &body.left, [dl, d, d], &format!("{what}.left"))?,
        right: flatten(ring, &body.right, [d, dr, d], &format!("{what}.right"))?,
    })
}

fn bimodule_body(m: &Bimodule, dl: usize, dr: usize) -> BimoduleBody {
    BimoduleBody {
        dim: m.dim,
        labels: m.labels.clone(),
        left: nest(&m.left, [dl, m.dim, m.dim]),
        right: nest(&m.right, [m.dim, dr, m.dim]),
    }
}

fn to_pretty<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

pub fn algebra_from_json(text: &str) -> Result<Algebra> {
    let doc: AlgebraDoc = serde_json::from_str(text)?;
    check_schema(&doc.schema, ALGEBRA_SCHEMA)?;
    algebra_from_body(doc.ring.validated()?, &doc.body, "algebra")
}

pub fn algebra_to_json(alg: &Algebra) -> String {
    to_pretty(&AlgebraDoc {
        schema: Some(ALGEBRA_SCHEMA.into()),
        ring: *alg.ring(),
        body: algebra_body(alg),
    })
}

/// Parses a context. Shapes are checked here; the axioms are checked by
/// [`crate::morita::validate_context`] when the GMA is built.
pub fn context_from_json(text: &str) -> Result<MoritaContext> {
    let doc: ContextDoc = serde_json::from_str(text)?;
    check_schema(&doc.schema, CONTEXT_SCHEMA)?;
    let ring = doc.ring.validated()?;
    let a = algebra_from_body(ring, &doc.a, "a")?;
    let b = algebra_from_body(ring, &doc.b, "b")?;
    let (da, db) = (a.dim(), b.dim());
    let m = bimodule_from_body(&ring, &doc.m, da, db, "m")?;
    let n = bimodule_from_body(&ring, &doc.n, db, da, "n")?;
    let phi = flatten(&ring, &doc.phi, [m.dim, n.dim, da], "phi")?;
    let psi = flatten(&ring, &doc.psi, [n.dim, m.dim, db], "psi")?;
    Ok(MoritaContext { a, b, m, n, phi, psi })
}

pub fn context_to_json(ctx: &MoritaContext) -> String {
    let [da, dm, dn, db] = ctx.dims();
    to_pretty(&ContextDoc {
        schema: Some(CONTEXT_SCHEMA.into()),
        ring: *ctx.ring(),
        a: algebra_body(&ctx.a),
        b: algebra_body(&ctx.b),
        m: bimodule_body(&ctx.m, da, db),
        n: bimodule_body(&ctx.n, db, da),
        phi: nest(&ctx.phi, [dm, dn, da]),
        psi: nest(&ctx.psi, [dn, dm, db]),
    })
}

/// Parses a `dim × dim` map over `ring`. A `ring` field in the document,
/// when present, must agree.
pub fn map_from_json(text: &str, ring: &RingSpec, dim: usize) -> Result<LinMap> {
    let doc: MapDoc = serde_json::from_str(text)?;
    check_schema(&doc.schema, MAP_SCHEMA)?;
    if let Some(r) = doc.ring {
        if &r != ring {
            return Err(Error::Schema(format!("map is over {r}, algebra over {ring}")));
        }
    }
    if doc.matrix.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: doc.matrix.len(),
        });
    }
    let rows = doc
        .matrix
        .iter()
        .enumerate()
        .map(|(r, row)| vector_from_json(ring, row, dim, &format!("matrix[{r}]")))
        .collect::<Result<Vec<_>>>()?;
    LinMap::from_rows(rows)
}

pub fn map_to_json(ring: &RingSpec, map: &LinMap) -> String {
    to_pretty(&MapDoc {
        schema: Some(MAP_SCHEMA.into()),
        ring: Some(*ring),
        matrix: map.rows().iter().map(|r| r.iter().map(scalar_to_json).collect()).collect(),
    })
}

/// Matrix entries as JSON scalars, for embedding in reports.
pub fn map_matrix_value(map: &LinMap) -> Value {
    Value::Array(
        map.rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(scalar_to_json).collect()))
            .collect(),
    )
}

pub fn element_value(x: &Element) -> Value {
    Value::Array(x.coords.iter().map(scalar_to_json).collect())
}
