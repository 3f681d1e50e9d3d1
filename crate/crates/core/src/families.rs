//! Standard algebras and contexts: full, triangular and block triangular
//! matrix algebras (as pattern algebras spanned by matrix units), and
//! inflated algebras `M_n(A)` with the twisted product `X ∘ Y = XΓY`.

use crate::algebra::{Algebra, Element};
use crate::error::{Error, Result};
use crate::linmap::LinMap;
use crate::morita::{build_gma, Bimodule, GMAlgebra, MoritaContext};
use crate::ring::{RingSpec, Scalar};
use crate::solve::{LinearSystem, Solution};

type Unit = (usize, usize);

fn unit_label((p, q): Unit) -> String {
    format!("E{}{}", p + 1, q + 1)
}

/// Structure tensor of matrix-unit products `E_pq E_rs = δ_qr E_ps` between
/// three lists of units.
fn unit_tensor(ring: &RingSpec, l1: &[Unit], l2: &[Unit], l3: &[Unit]) -> Vec<Scalar> {
    let mut t = vec![ring.zero(); l1.len() * l2.len() * l3.len()];
    for (i, &(p, q)) in l1.iter().enumerate() {
        for (j, &(r, s)) in l2.iter().enumerate() {
            if q != r {
                continue;
            }
            if let Some(k) = l3.iter().position(|&u| u == (p, s)) {
                t[(i * l2.len() + j) * l3.len() + k] = ring.one();
            }
        }
    }
    t
}

fn unit_algebra(ring: RingSpec, units: &[Unit]) -> Result<Algebra> {
    let labels = units.iter().map(|&u| unit_label(u)).collect();
    let consts = unit_tensor(&ring, units, units, units);
    let unit = Element::new(
        units
            .iter()
            .map(|&(p, q)| if p == q { ring.one() } else { ring.zero() })
            .collect(),
    );
    Algebra::new(ring, labels, consts, Some(unit))
}

fn unit_bimodule(ring: &RingSpec, left: &[Unit], units: &[Unit], right: &[Unit]) -> Bimodule {
    Bimodule {
        dim: units.len(),
        labels: units.iter().map(|&u| unit_label(u)).collect(),
        left: unit_tensor(ring, left, units, units),
        right: unit_tensor(ring, units, right, units),
    }
}

/// The pattern algebra `{E_pq : allowed(p, q)}` of `M_n(R)`; `allowed` must be
/// a reflexive, transitive relation.
pub fn pattern_algebra(ring: RingSpec, n: usize, allowed: impl Fn(usize, usize) -> bool) -> Result<Algebra> {
    let units: Vec<Unit> = (0..n)
        .flat_map(|p| (0..n).map(move |q| (p, q)))
        .filter(|&(p, q)| allowed(p, q))
        .collect();
    unit_algebra(ring, &units)
}

/// `M_n(R)` with basis `E11, E12, …, Enn`.
pub fn matrix_algebra(ring: RingSpec, n: usize) -> Result<Algebra> {
    if n == 0 {
        return Err(Error::BadShape("n must be positive".into()));
    }
    pattern_algebra(ring, n, |_, _| true)
}

/// `R^n` with componentwise product.
pub fn diagonal_algebra(ring: RingSpec, n: usize) -> Result<Algebra> {
    if n == 0 {
        return Err(Error::BadShape("n must be positive".into()));
    }
    let mut alg = pattern_algebra(ring, n, |p, q| p == q)?;
    let labels = (1..=n).map(|i| format!("e{i}")).collect();
    alg = Algebra::new(ring, labels, alg.structure_constants().to_vec(), Some(alg.unit()?.clone()))?;
    Ok(alg)
}

/// `R` as a one-dimensional algebra.
pub fn scalar_algebra(ring: RingSpec) -> Result<Algebra> {
    Algebra::new(ring, vec!["1".into()], vec![ring.one()], Some(Element::new(vec![ring.one()])))
}

/// The context of a pattern algebra split after index `j`: `A` and `B` are
/// the diagonal corners, `M` and `N` the off-diagonal ones, all actions and
/// pairings matrix-unit products. Returns the context and the units in
/// global `A, M, N, B` order.
fn pattern_context(
    ring: RingSpec,
    n: usize,
    j: usize,
    allowed: impl Fn(usize, usize) -> bool,
) -> Result<(MoritaContext, Vec<Unit>)> {
    let pick = |rows: std::ops::Range<usize>, cols: std::ops::Range<usize>| -> Vec<Unit> {
        rows.flat_map(|p| cols.clone().map(move |q| (p, q)))
            .filter(|&(p, q)| allowed(p, q))
            .collect()
    };
    let ua = pick(0..j, 0..j);
    let um = pick(0..j, j..n);
    let un = pick(j..n, 0..j);
    let ub = pick(j..n, j..n);
    let ctx = MoritaContext {
        a: unit_algebra(ring, &ua)?,
        b: unit_algebra(ring, &ub)?,
        m: unit_bimodule(&ring, &ua, &um, &ub),
        n: unit_bimodule(&ring, &ub, &un, &ua),
        phi: unit_tensor(&ring, &um, &un, &ua),
        psi: unit_tensor(&ring, &un, &um, &ub),
    };
    let units = [ua, um, un, ub].concat();
    Ok((ctx, units))
}

fn check_split(n: usize, j: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::BadShape(format!("need n >= 2, got {n}")));
    }
    if j == 0 || j >= n {
        return Err(Error::BadSplit(format!("split {j} must satisfy 1 <= split < {n}")));
    }
    Ok(())
}

pub fn full_matrix_context(ring: RingSpec, n: usize, j: usize) -> Result<MoritaContext> {
    check_split(n, j)?;
    Ok(pattern_context(ring, n, j, |_, _| true)?.0)
}

/// `M_n(R)` as `[M_j M_{j×(n−j)}; M_{(n−j)×j} M_{n−j}]`.
pub fn full_matrix_gma(ring: RingSpec, n: usize, j: usize) -> Result<GMAlgebra> {
    build_gma(&full_matrix_context(ring, n, j)?)
}

/// Matrix units of the global basis of [`full_matrix_gma`], in `A, M, N, B`
/// order.
pub fn full_matrix_units(n: usize, j: usize) -> Result<Vec<(usize, usize)>> {
    check_split(n, j)?;
    Ok(pattern_context(RingSpec::Zmod { n: 2 }, n, j, |_, _| true)?.1)
}

/// Whether `units` (one per basis element of `alg`) carries the product of
/// `alg` onto matrix-unit multiplication in `M_n(R)`, on all basis pairs.
pub fn is_matrix_unit_embedding(alg: &Algebra, n: usize, units: &[(usize, usize)]) -> bool {
    let ring = alg.ring();
    let full = match matrix_algebra(*ring, n) {
        Ok(f) => f,
        Err(_) => return false,
    };
    if units.len() != alg.dim() || units.iter().any(|&(p, q)| p >= n || q >= n) {
        return false;
    }
    let to_full = |x: &Element| {
        let mut out = full.zero();
        for (i, c) in x.coords.iter().enumerate() {
            let (p, q) = units[i];
            out.coords[p * n + q] = ring.add(&out.coords[p * n + q], c);
        }
        out
    };
    let mut seen = units.to_vec();
    seen.sort();
    seen.dedup();
    if seen.len() != units.len() {
        return false;
    }
    (0..alg.dim()).all(|i| {
        (0..alg.dim()).all(|j| {
            let (ei, ej) = (alg.basis(i), alg.basis(j));
            to_full(&alg.mul_unchecked(&ei, &ej)) == full.mul_unchecked(&to_full(&ei), &to_full(&ej))
        })
    })
}

pub fn triangular_context(ring: RingSpec, n: usize, k: usize) -> Result<MoritaContext> {
    triangular_context_with(ring, n, k, false)
}

/// Lower triangular counterpart of [`triangular_context`]; `M = 0`.
pub fn lower_triangular_context(ring: RingSpec, n: usize, k: usize) -> Result<MoritaContext> {
    triangular_context_with(ring, n, k, true)
}

fn triangular_context_with(ring: RingSpec, n: usize, k: usize, lower: bool) -> Result<MoritaContext> {
    check_split(n, k)?;
    let ctx = if lower {
        pattern_context(ring, n, k, |p, q| p >= q)?.0
    } else {
        pattern_context(ring, n, k, |p, q| p <= q)?.0
    };
    Ok(ctx)
}

/// Upper triangular `T_n(R)` split after row `k`; `N = 0`.
pub fn triangular_gma(ring: RingSpec, n: usize, k: usize) -> Result<GMAlgebra> {
    build_gma(&triangular_context(ring, n, k)?)
}

/// Lower triangular `n × n` matrices split after row `k`; here `M = 0`, and
/// the algebra is the opposite of [`triangular_gma`]'s.
pub fn lower_triangular_gma(ring: RingSpec, n: usize, k: usize) -> Result<GMAlgebra> {
    build_gma(&lower_triangular_context(ring, n, k)?)
}

fn block_of(d: &[usize]) -> Result<Vec<usize>> {
    if d.is_empty() || d.contains(&0) {
        return Err(Error::BadShape(format!("block sizes {d:?} must be positive")));
    }
    Ok(d.iter().enumerate().flat_map(|(b, &s)| std::iter::repeat_n(b, s)).collect())
}

pub fn block_triangular_context(ring: RingSpec, d: &[usize], j: usize, lower: bool) -> Result<MoritaContext> {
    let blk = block_of(d)?;
    if j == 0 || j >= d.len() {
        return Err(Error::BadSplit(format!(
            "block split {j} must satisfy 1 <= split < {}",
            d.len()
        )));
    }
    let rows: usize = d[..j].iter().sum();
    let ctx = if lower {
        pattern_context(ring, blk.len(), rows, |p, q| blk[p] >= blk[q])?.0
    } else {
        pattern_context(ring, blk.len(), rows, |p, q| blk[p] <= blk[q])?.0
    };
    Ok(ctx)
}

/// Block upper triangular matrices with diagonal block sizes `d`, split after
/// the first `j` blocks.
pub fn block_triangular_gma(ring: RingSpec, d: &[usize], j: usize) -> Result<GMAlgebra> {
    build_gma(&block_triangular_context(ring, d, j, false)?)
}

pub fn lower_block_triangular_gma(ring: RingSpec, d: &[usize], j: usize) -> Result<GMAlgebra> {
    build_gma(&block_triangular_context(ring, d, j, true)?)
}

/// `A = R × R` acting on `M = R` through the first factor, `B = R`, `N = 0`.
/// `M` is not faithful as a left module.
pub fn projection_context(ring: RingSpec) -> Result<MoritaContext> {
    let a = diagonal_algebra(ring, 2)?;
    let b = scalar_algebra(ring)?;
    let (o, z) = (ring.one(), ring.zero());
    Ok(MoritaContext {
        a,
        b,
        m: Bimodule {
            dim: 1,
            labels: vec!["m".into()],
            left: vec![o.clone(), z],
            right: vec![o],
        },
        n: Bimodule::zero(),
        phi: Vec::new(),
        psi: Vec::new(),
    })
}

/// `M_n(A)` with product `X ∘ Y = XΓY`.
#[derive(Clone, Debug)]
pub struct InflatedSpec {
    pub base: Algebra,
    pub n: usize,
    /// Row-major `n × n` entries, each an element of `base`.
    pub gamma: Vec<Element>,
}

#[derive(Clone, Debug)]
pub struct Inflated {
    /// The twisted algebra; unital exactly when `Γ` is invertible.
    pub algebra: Algebra,
    /// `M_n(A)` with the ordinary product, on the same coordinates.
    pub ordinary: Algebra,
    pub gamma_inverse: Option<Element>,
    /// `σ(X) = XΓ⁻¹`, an isomorphism from `ordinary` onto `algebra`.
    pub sigma: Option<LinMap>,
    pub sigma_inverse: Option<LinMap>,
}

impl Inflated {
    pub fn has_identity(&self) -> bool {
        self.algebra.has_unit()
    }
}

/// Coordinates `(i * n + j) * dim A + l` for `a_l` at position `(i, j)`.
fn twisted_constants(base: &Algebra, n: usize, gamma: &[Element]) -> Vec<Scalar> {
    let ring = base.ring();
    let da = base.dim();
    let d = n * n * da;
    let mut consts = vec![ring.zero(); d * d * d];
    for i in 0..n {
        for j in 0..n {
            for l in 0..da {
                let x = (i * n + j) * da + l;
                let al = base.basis(l);
                for p in 0..n {
                    let left = base.mul_unchecked(&al, &gamma[j * n + p]);
                    for q in 0..n {
                        for r in 0..da {
                            let y = (p * n + q) * da + r;
                            let prod = base.mul_unchecked(&left, &base.basis(r));
                            for (t, c) in prod.coords.iter().enumerate() {
                                consts[(x * d + y) * d + (i * n + q) * da + t] = c.clone();
                            }
                        }
                    }
                }
            }
        }
    }
    consts
}

fn inflated_labels(base: &Algebra, n: usize) -> Vec<String> {
    let mut labels = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for l in base.labels() {
                labels.push(format!("{l}@{}{}", i + 1, j + 1));
            }
        }
    }
    labels
}

fn identity_matrix(base: &Algebra, n: usize) -> Result<Vec<Element>> {
    let one = base.unit()?;
    Ok((0..n * n)
        .map(|ij| if ij / n == ij % n { one.clone() } else { base.zero() })
        .collect())
}

fn flatten(m: &[Element]) -> Element {
    Element::new(m.iter().flat_map(|e| e.coords.iter().cloned()).collect())
}

pub fn inflated_algebra(spec: &InflatedSpec) -> Result<Inflated> {
    let base = &spec.base;
    let n = spec.n;
    if n == 0 {
        return Err(Error::BadShape("n must be positive".into()));
    }
    if spec.gamma.len() != n * n {
        return Err(Error::DimensionMismatch {
            expected: n * n,
            found: spec.gamma.len(),
        });
    }
    for g in &spec.gamma {
        base.check_dim(g)?;
    }
    let ring = *base.ring();
    let da = base.dim();
    let d = n * n * da;
    let labels = inflated_labels(base, n);
    let ident = identity_matrix(base, n)?;
    let ordinary = Algebra::new(
        ring,
        labels.clone(),
        twisted_constants(base, n, &ident),
        Some(flatten(&ident)),
    )?;
    let consts = twisted_constants(base, n, &spec.gamma);
    let gamma = flatten(&spec.gamma);
    let inverse = two_sided_inverse(&ordinary, &gamma, &flatten(&ident));
    let Some(ginv) = inverse else {
        let algebra = Algebra::new(ring, labels, consts, None)?;
        return Ok(Inflated {
            algebra,
            ordinary,
            gamma_inverse: None,
            sigma: None,
            sigma_inverse: None,
        });
    };
    let algebra = Algebra::new(ring, labels, consts, Some(ginv.clone()))?;
    let sigma = ordinary.right_mul_map(&ginv)?;
    let sigma_inverse = ordinary.right_mul_map(&gamma)?;
    for i in 0..d {
        let si = sigma.apply(&ring, &ordinary.basis(i))?;
        for j in 0..d {
            let sj = sigma.apply(&ring, &ordinary.basis(j))?;
            let lhs = algebra.mul_unchecked(&si, &sj);
            let rhs = sigma.apply(&ring, &ordinary.mul_unchecked(&ordinary.basis(i), &ordinary.basis(j)))?;
            if lhs != rhs {
                return Err(Error::TheoremViolation(format!(
                    "σ is not multiplicative on ({}, {})",
                    ordinary.labels()[i],
                    ordinary.labels()[j]
                )));
            }
        }
    }
    Ok(Inflated {
        algebra,
        ordinary,
        gamma_inverse: Some(ginv),
        sigma: Some(sigma),
        sigma_inverse: Some(sigma_inverse),
    })
}

/// Solves `ΓX = I` and `XΓ = I` jointly in the ordinary matrix algebra.
fn two_sided_inverse(ordinary: &Algebra, gamma: &Element, ident: &Element) -> Option<Element> {
    let ring = *ordinary.ring();
    let d = ordinary.dim();
    let left = ordinary.left_mul_map(gamma).ok()?;
    let right = ordinary.right_mul_map(gamma).ok()?;
    let mut sys = LinearSystem::new(ring, d);
    for op in [&left, &right] {
        for (r, row) in op.rows().into_iter().enumerate() {
            sys.push(&row, &ident.coords[r]).ok()?;
        }
    }
    match sys.solve() {
        Solution::Solved(s) => Some(Element::new(s.particular)),
        Solution::Inconsistent => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morita::validate_context;

    fn z3() -> RingSpec {
        RingSpec::zmod(3).unwrap()
    }

    fn diag_gamma(base: &Algebra, entries: [u64; 2]) -> Vec<Element> {
        let ring = base.ring();
        let one = base.unit().unwrap();
        vec![
            one.scale(ring, &Scalar::Residue(entries[0])),
            base.zero(),
            base.zero(),
            one.scale(ring, &Scalar::Residue(entries[1])),
        ]
    }

    #[test]
    fn full_matrix_shapes() {
        let g = full_matrix_gma(z3(), 2, 1).unwrap();
        assert_eq!(g.layout().dims, [1, 1, 1, 1]);
        let g3 = full_matrix_gma(z3(), 3, 1).unwrap();
        assert_eq!(g3.layout().dims, [1, 2, 2, 4]);
        assert!(is_matrix_unit_embedding(g3.algebra(), 3, &full_matrix_units(3, 1).unwrap()));
        assert!(matches!(full_matrix_gma(z3(), 2, 2), Err(Error::BadSplit(_))));
        assert!(matches!(full_matrix_gma(z3(), 2, 0), Err(Error::BadSplit(_))));
    }

    #[test]
    fn embedding_detects_a_wrong_assignment() {
        let g = full_matrix_gma(z3(), 2, 1).unwrap();
        let mut units = full_matrix_units(2, 1).unwrap();
        units.swap(1, 2);
        assert!(!is_matrix_unit_embedding(g.algebra(), 2, &units));
    }

    #[test]
    fn triangular_shapes() {
        let t = triangular_gma(z3(), 2, 1).unwrap();
        assert_eq!(t.dim(), 3);
        let b = block_triangular_gma(z3(), &[2, 1], 1).unwrap();
        assert_eq!(b.layout().dims, [4, 2, 0, 1]);
        assert!(matches!(block_triangular_gma(z3(), &[2, 0], 1), Err(Error::BadShape(_))));
        assert!(matches!(block_triangular_gma(z3(), &[3], 1), Err(Error::BadSplit(_))));
        assert!(matches!(triangular_gma(z3(), 1, 1), Err(Error::BadShape(_))));
    }

    /// Lower variant equals the opposite of the upper one, after relabelling
    /// each unit `E_pq` as `E_qp`.
    fn assert_transpose_opposite(up: &GMAlgebra, low: &GMAlgebra) {
        let op = up.algebra().opposite();
        let low = low.algebra();
        let key = |l: &str| {
            let u = l.split(':').nth(1).unwrap().to_string();
            let b = u.as_bytes();
            (b[1], b[2])
        };
        let perm: Vec<usize> = low
            .labels()
            .iter()
            .map(|l| {
                let (p, q) = key(l);
                op.labels().iter().position(|m| key(m) == (q, p)).unwrap()
            })
            .collect();
        let d = low.dim();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    assert_eq!(
                        low.structure_constant(i, j, k),
                        op.structure_constant(perm[i], perm[j], perm[k])
                    );
                }
            }
        }
    }

    #[test]
    fn lower_variants_are_opposites() {
        let up = triangular_gma(z3(), 2, 1).unwrap();
        let low = lower_triangular_gma(z3(), 2, 1).unwrap();
        assert_eq!(
            low.algebra().structure_constants(),
            up.algebra().opposite().structure_constants()
        );
        assert_transpose_opposite(&up, &low);
        let up = block_triangular_gma(z3(), &[1, 2], 1).unwrap();
        let low = lower_block_triangular_gma(z3(), &[1, 2], 1).unwrap();
        assert_transpose_opposite(&up, &low);
    }

    #[test]
    fn family_contexts_validate() {
        let r = z3();
        let ctxs = [
            full_matrix_context(r, 3, 2).unwrap(),
            triangular_context(r, 3, 2).unwrap(),
            block_triangular_context(r, &[1, 1, 2], 2, false).unwrap(),
            block_triangular_context(r, &[1, 1, 2], 1, true).unwrap(),
            projection_context(r).unwrap(),
        ];
        for c in &ctxs {
            assert!(validate_context(c).unwrap().is_clean());
        }
    }

    #[test]
    fn inflated_with_identity_gamma_is_ordinary() {
        let base = scalar_algebra(z3()).unwrap();
        let inf = inflated_algebra(&InflatedSpec {
            gamma: diag_gamma(&base, [1, 1]),
            base,
            n: 2,
        })
        .unwrap();
        assert!(inf.has_identity());
        assert_eq!(inf.algebra.structure_constants(), inf.ordinary.structure_constants());
        let sigma = inf.sigma.unwrap();
        assert_eq!(sigma, LinMap::identity(&z3(), 4));
    }

    #[test]
    fn inflated_diag_one_two() {
        let base = scalar_algebra(z3()).unwrap();
        let inf = inflated_algebra(&InflatedSpec {
            gamma: diag_gamma(&base, [1, 2]),
            base,
            n: 2,
        })
        .unwrap();
        assert!(inf.has_identity());
        // diag(1, 2)⁻¹ = diag(1, 2) over Z/3.
        let want = Element::new([1, 0, 0, 2].map(Scalar::Residue).to_vec());
        assert_eq!(inf.gamma_inverse.as_ref().unwrap(), &want);
        assert_eq!(inf.algebra.unit().unwrap(), &want);
        let r = z3();
        let s = inf.sigma.unwrap();
        let si = inf.sigma_inverse.unwrap();
        assert_eq!(s.compose(&r, &si).unwrap(), LinMap::identity(&r, 4));
    }

    #[test]
    fn singular_gamma_has_no_identity() {
        let base = scalar_algebra(z3()).unwrap();
        let inf = inflated_algebra(&InflatedSpec {
            gamma: diag_gamma(&base, [1, 0]),
            base,
            n: 2,
        })
        .unwrap();
        assert!(!inf.has_identity());
        assert!(inf.sigma.is_none());
        assert!(matches!(inf.algebra.unit(), Err(Error::NotUnital)));
    }

    #[test]
    fn inflated_over_noncommutative_base() {
        // Base T_2(Z/3), Γ the identity twisted by a unit upper triangular entry.
        let base = triangular_gma(z3(), 2, 1).unwrap().algebra().clone();
        let one = base.unit().unwrap().clone();
        let e12 = base.basis(1);
        let g = vec![one.add(base.ring(), &e12), base.zero(), base.zero(), one];
        let inf = inflated_algebra(&InflatedSpec { base, n: 2, gamma: g }).unwrap();
        assert!(inf.has_identity());
        assert_eq!(inf.algebra.dim(), 12);
    }
}
