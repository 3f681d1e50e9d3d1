//! Morita contexts `(A, B, M, N, Φ, Ψ)`, their axioms, and the order-2
//! generalized matrix algebra `[A M; N B]` they generate.

use std::fmt;

use serde::Serialize;

use crate::algebra::{Algebra, Element, Submodule};
use crate::error::{Error, Result};
use crate::ring::{RingSpec, Scalar};
use crate::solve::{LinearSystem, Solution};

/// The four blocks, in global basis order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Block {
    A,
    M,
    N,
    B,
}

impl Block {
    pub const ALL: [Block; 4] = [Block::A, Block::M, Block::N, Block::B];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Block::A => "A",
            Block::M => "M",
            Block::N => "N",
            Block::B => "B",
        };
        f.write_str(s)
    }
}

/// `Σ_i Σ_j x_i y_j t[(i * d2 + j) * d3 + k] e_k`.
pub(crate) fn contract(
    ring: &RingSpec,
    t: &[Scalar],
    (d2, d3): (usize, usize),
    x: &[Scalar],
    y: &[Scalar],
) -> Element {
    let mut out = vec![ring.zero(); d3];
    for (i, xi) in x.iter().enumerate() {
        if ring.is_zero(xi) {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if ring.is_zero(yj) {
                continue;
            }
            let xy = ring.mul(xi, yj);
            let base = (i * d2 + j) * d3;
            for (k, o) in out.iter_mut().enumerate() {
                let c = &t[base + k];
                if !ring.is_zero(c) {
                    *o = ring.mul_add(o, &xy, c);
                }
            }
        }
    }
    Element::new(out)
}

/// A bimodule over a left algebra `L` and right algebra `R`, as action
/// tensors: `l_i · v_j = Σ_k left[(i * dim + j) * dim + k] v_k` and
/// `v_j · r_i = Σ_k right[(j * dim_R + i) * dim + k] v_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimodule {
    pub dim: usize,
    pub labels: Vec<String>,
    pub left: Vec<Scalar>,
    pub right: Vec<Scalar>,
}

impl Bimodule {
    pub fn zero() -> Self {
        Bimodule {
            dim: 0,
            labels: Vec::new(),
            left: Vec::new(),
            right: Vec::new(),
        }
    }

    fn check_shape(&self, name: &str, left_dim: usize, right_dim: usize) -> Result<()> {
        if self.labels.len() != self.dim {
            return Err(Error::InvalidContext(format!(
                "{name}: {} labels for dimension {}",
                self.labels.len(),
                self.dim
            )));
        }
        let want_l = left_dim * self.dim * self.dim;
        if self.left.len() != want_l {
            return Err(Error::DimensionMismatch {
                expected: want_l,
                found: self.left.len(),
            });
        }
        let want_r = self.dim * right_dim * self.dim;
        if self.right.len() != want_r {
            return Err(Error::DimensionMismatch {
                expected: want_r,
                found: self.right.len(),
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoritaContext {
    pub a: Algebra,
    pub b: Algebra,
    /// `A`–`B` bimodule.
    pub m: Bimodule,
    /// `B`–`A` bimodule.
    pub n: Bimodule,
    /// `Φ(m_i, n_j) = Σ_k phi[(i * dim N + j) * dim A + k] a_k`.
    pub phi: Vec<Scalar>,
    /// `Ψ(n_i, m_j) = Σ_k psi[(i * dim M + j) * dim B + k] b_k`.
    pub psi: Vec<Scalar>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: String,
    pub witness: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Informational remarks that do not affect validity.
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    fn fail(&mut self, axiom: &str, witness: String) {
        self.violations.push(Violation {
            axiom: axiom.into(),
            witness,
        });
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Faithfulness {
    pub left_faithful: bool,
    pub right_faithful: bool,
}

impl Faithfulness {
    pub fn both(&self) -> bool {
        self.left_faithful && self.right_faithful
    }
}

impl MoritaContext {
    pub fn ring(&self) -> &RingSpec {
        self.a.ring()
    }

    pub fn dims(&self) -> [usize; 4] {
        [self.a.dim(), self.m.dim, self.n.dim, self.b.dim()]
    }

    /// Tensor shapes and ring agreement; the axioms are checked separately.
    pub fn check_shapes(&self) -> Result<()> {
        if self.a.ring() != self.b.ring() {
            return Err(Error::InvalidContext(format!(
                "A is over {} but B is over {}",
                self.a.ring(),
                self.b.ring()
            )));
        }
        let [da, dm, dn, db] = self.dims();
        self.m.check_shape("M", da, db)?;
        self.n.check_shape("N", db, da)?;
        if self.phi.len() != dm * dn * da {
            return Err(Error::DimensionMismatch {
                expected: dm * dn * da,
                found: self.phi.len(),
            });
        }
        if self.psi.len() != dn * dm * db {
            return Err(Error::DimensionMismatch {
                expected: dn * dm * db,
                found: self.psi.len(),
            });
        }
        let ring = self.ring();
        let tensors = [&self.m.left, &self.m.right, &self.n.left, &self.n.right, &self.phi, &self.psi];
        for t in tensors {
            if let Some(bad) = t.iter().find(|x| !ring.contains(x)) {
                return Err(Error::InvalidScalar {
                    value: format!("{bad:?}"),
                    ring: ring.to_string(),
                });
            }
        }
        Ok(())
    }

    /// `a · m`.
    pub fn a_m(&self, a: &Element, m: &Element) -> Element {
        contract(self.ring(), &self.m.left, (self.m.dim, self.m.dim), &a.coords, &m.coords)
    }

    /// `m · b`.
    pub fn m_b(&self, m: &Element, b: &Element) -> Element {
        contract(self.ring(), &self.m.right, (self.b.dim(), self.m.dim), &m.coords, &b.coords)
    }

    /// `b · n`.
    pub fn b_n(&self, b: &Element, n: &Element) -> Element {
        contract(self.ring(), &self.n.left, (self.n.dim, self.n.dim), &b.coords, &n.coords)
    }

    /// `n · a`.
    pub fn n_a(&self, n: &Element, a: &Element) -> Element {
        contract(self.ring(), &self.n.right, (self.a.dim(), self.n.dim), &n.coords, &a.coords)
    }

    /// `Φ(m, n)`, written `mn` in the block product.
    pub fn phi(&self, m: &Element, n: &Element) -> Element {
        contract(self.ring(), &self.phi, (self.n.dim, self.a.dim()), &m.coords, &n.coords)
    }

    /// `Ψ(n, m)`, written `nm` in the block product.
    pub fn psi(&self, n: &Element, m: &Element) -> Element {
        contract(self.ring(), &self.psi, (self.m.dim, self.b.dim()), &n.coords, &m.coords)
    }

    fn basis_m(&self, i: usize) -> Element {
        Element::basis(self.ring(), self.m.dim, i)
    }

    fn basis_n(&self, i: usize) -> Element {
        Element::basis(self.ring(), self.n.dim, i)
    }

    /// The context with the roles of `(A, M, Φ)` and `(B, N, Ψ)` exchanged.
    pub fn swapped(&self) -> MoritaContext {
        MoritaContext {
            a: self.b.clone(),
            b: self.a.clone(),
            m: self.n.clone(),
            n: self.m.clone(),
            phi: self.psi.clone(),
            psi: self.phi.clone(),
        }
    }
}

/// Checks every context axiom on basis tuples and reports the first failing
/// tuple per axiom.
pub fn validate_context(ctx: &MoritaContext) -> Result<ValidationReport> {
    ctx.check_shapes()?;
    let mut rep = ValidationReport::default();
    let [da, dm, dn, db] = ctx.dims();
    if dm == 0 && dn == 0 {
        rep.fail("M ≠ 0 or N ≠ 0", "dim M = dim N = 0".into());
    }
    let (Ok(one_a), Ok(one_b)) = (ctx.a.unit(), ctx.b.unit()) else {
        rep.fail("A and B unital", "missing identity".into());
        return Ok(rep);
    };
    let ea: Vec<Element> = (0..da).map(|i| ctx.a.basis(i)).collect();
    let eb: Vec<Element> = (0..db).map(|i| ctx.b.basis(i)).collect();
    let em: Vec<Element> = (0..dm).map(|i| ctx.basis_m(i)).collect();
    let en: Vec<Element> = (0..dn).map(|i| ctx.basis_n(i)).collect();
    let (la, lb) = (ctx.a.labels(), ctx.b.labels());
    let (lm, ln) = (&ctx.m.labels, &ctx.n.labels);

    let first = |rep: &mut ValidationReport, axiom: &str, hit: Option<String>| {
        if let Some(w) = hit {
            rep.fail(axiom, w);
        }
    };

    // Unitality.
    first(&mut rep, "1·m = m", (0..dm).find(|&i| ctx.a_m(one_a, &em[i]) != em[i]).map(|i| lm[i].clone()));
    first(&mut rep, "m·1 = m", (0..dm).find(|&i| ctx.m_b(&em[i], one_b) != em[i]).map(|i| lm[i].clone()));
    first(&mut rep, "1·n = n", (0..dn).find(|&i| ctx.b_n(one_b, &en[i]) != en[i]).map(|i| ln[i].clone()));
    first(&mut rep, "n·1 = n", (0..dn).find(|&i| ctx.n_a(&en[i], one_a) != en[i]).map(|i| ln[i].clone()));

    // Module associativity.
    first(&mut rep, "(aa′)m = a(a′m)", find3(da, da, dm, |i, j, k| {
        ctx.a_m(&ctx.a.mul_unchecked(&ea[i], &ea[j]), &em[k]) != ctx.a_m(&ea[i], &ctx.a_m(&ea[j], &em[k]))
    }).map(|(i, j, k)| format!("a={}, a′={}, m={}", la[i], la[j], lm[k])));
    first(&mut rep, "(am)b = a(mb)", find3(da, dm, db, |i, j, k| {
        ctx.m_b(&ctx.a_m(&ea[i], &em[j]), &eb[k]) != ctx.a_m(&ea[i], &ctx.m_b(&em[j], &eb[k]))
    }).map(|(i, j, k)| format!("a={}, m={}, b={}", la[i], lm[j], lb[k])));
    first(&mut rep, "m(bb′) = (mb)b′", find3(dm, db, db, |i, j, k| {
        ctx.m_b(&em[i], &ctx.b.mul_unchecked(&eb[j], &eb[k])) != ctx.m_b(&ctx.m_b(&em[i], &eb[j]), &eb[k])
    }).map(|(i, j, k)| format!("m={}, b={}, b′={}", lm[i], lb[j], lb[k])));
    first(&mut rep, "(bb′)n = b(b′n)", find3(db, db, dn, |i, j, k| {
        ctx.b_n(&ctx.b.mul_unchecked(&eb[i], &eb[j]), &en[k]) != ctx.b_n(&eb[i], &ctx.b_n(&eb[j], &en[k]))
    }).map(|(i, j, k)| format!("b={}, b′={}, n={}", lb[i], lb[j], ln[k])));
    first(&mut rep, "(bn)a = b(na)", find3(db, dn, da, |i, j, k| {
        ctx.n_a(&ctx.b_n(&eb[i], &en[j]), &ea[k]) != ctx.b_n(&eb[i], &ctx.n_a(&en[j], &ea[k]))
    }).map(|(i, j, k)| format!("b={}, n={}, a={}", lb[i], ln[j], la[k])));
    first(&mut rep, "n(aa′) = (na)a′", find3(dn, da, da, |i, j, k| {
        ctx.n_a(&en[i], &ctx.a.mul_unchecked(&ea[j], &ea[k])) != ctx.n_a(&ctx.n_a(&en[i], &ea[j]), &ea[k])
    }).map(|(i, j, k)| format!("n={}, a={}, a′={}", ln[i], la[j], la[k])));

    // Pairings: bimodule homomorphisms, balanced.
    first(&mut rep, "Φ(am, n) = aΦ(m, n)", find3(da, dm, dn, |i, j, k| {
        ctx.phi(&ctx.a_m(&ea[i], &em[j]), &en[k]) != ctx.a.mul_unchecked(&ea[i], &ctx.phi(&em[j], &en[k]))
    }).map(|(i, j, k)| format!("a={}, m={}, n={}", la[i], lm[j], ln[k])));
    first(&mut rep, "Φ(m, na) = Φ(m, n)a", find3(dm, dn, da, |i, j, k| {
        ctx.phi(&em[i], &ctx.n_a(&en[j], &ea[k])) != ctx.a.mul_unchecked(&ctx.phi(&em[i], &en[j]), &ea[k])
    }).map(|(i, j, k)| format!("m={}, n={}, a={}", lm[i], ln[j], la[k])));
    first(&mut rep, "Φ(mb, n) = Φ(m, bn)", find3(dm, db, dn, |i, j, k| {
        ctx.phi(&ctx.m_b(&em[i], &eb[j]), &en[k]) != ctx.phi(&em[i], &ctx.b_n(&eb[j], &en[k]))
    }).map(|(i, j, k)| format!("m={}, b={}, n={}", lm[i], lb[j], ln[k])));
    first(&mut rep, "Ψ(bn, m) = bΨ(n, m)", find3(db, dn, dm, |i, j, k| {
        ctx.psi(&ctx.b_n(&eb[i], &en[j]), &em[k]) != ctx.b.mul_unchecked(&eb[i], &ctx.psi(&en[j], &em[k]))
    }).map(|(i, j, k)| format!("b={}, n={}, m={}", lb[i], ln[j], lm[k])));
    first(&mut rep, "Ψ(n, mb) = Ψ(n, m)b", find3(dn, dm, db, |i, j, k| {
        ctx.psi(&en[i], &ctx.m_b(&em[j], &eb[k])) != ctx.b.mul_unchecked(&ctx.psi(&en[i], &em[j]), &eb[k])
    }).map(|(i, j, k)| format!("n={}, m={}, b={}", ln[i], lm[j], lb[k])));
    first(&mut rep, "Ψ(na, m) = Ψ(n, am)", find3(dn, da, dm, |i, j, k| {
        ctx.psi(&ctx.n_a(&en[i], &ea[j]), &em[k]) != ctx.psi(&en[i], &ctx.a_m(&ea[j], &em[k]))
    }).map(|(i, j, k)| format!("n={}, a={}, m={}", ln[i], la[j], lm[k])));

    // The two diagram conditions.
    first(&mut rep, "Φ(m, n)·m′ = m·Ψ(n, m′)", find3(dm, dn, dm, |i, j, k| {
        ctx.a_m(&ctx.phi(&em[i], &en[j]), &em[k]) != ctx.m_b(&em[i], &ctx.psi(&en[j], &em[k]))
    }).map(|(i, j, k)| format!("m={}, n={}, m′={}", lm[i], ln[j], lm[k])));
    first(&mut rep, "Ψ(n, m)·n′ = n·Φ(m, n′)", find3(dn, dm, dn, |i, j, k| {
        ctx.b_n(&ctx.psi(&en[i], &em[j]), &en[k]) != ctx.n_a(&en[i], &ctx.phi(&em[j], &en[k]))
    }).map(|(i, j, k)| format!("n={}, m={}, n′={}", ln[i], lm[j], ln[k])));

    if rep.is_clean() {
        let f = check_faithful(ctx);
        if !f.both() {
            rep.notes.push(format!(
                "M is not faithful (left: {}, right: {}); properness tooling will refuse this context",
                f.left_faithful, f.right_faithful
            ));
        }
        let fn_ = check_faithful(&ctx.swapped());
        if !fn_.both() {
            rep.notes.push(format!(
                "N is not faithful (left: {}, right: {}); informational only",
                fn_.left_faithful, fn_.right_faithful
            ));
        }
    }
    Ok(rep)
}

fn find3(
    d1: usize,
    d2: usize,
    d3: usize,
    bad: impl Fn(usize, usize, usize) -> bool,
) -> Option<(usize, usize, usize)> {
    for i in 0..d1 {
        for j in 0..d2 {
            for k in 0..d3 {
                if bad(i, j, k) {
                    return Some((i, j, k));
                }
            }
        }
    }
    None
}

/// Faithfulness of `M`, decided by the kernels of the action maps
/// `A → End(M)` and `B → End(M)`.
pub fn check_faithful(ctx: &MoritaContext) -> Faithfulness {
    let ring = *ctx.ring();
    let [da, dm, _, db] = ctx.dims();
    if dm == 0 {
        return Faithfulness {
            left_faithful: false,
            right_faithful: false,
        };
    }
    let action_kernel_zero = |dim: usize, act: &dyn Fn(usize, usize) -> Element| {
        // Unknown x in the acting algebra; equation per (basis m, coordinate).
        let mut sys = LinearSystem::new(ring, dim);
        for j in 0..dm {
            let images: Vec<Element> = (0..dim).map(|i| act(i, j)).collect();
            for r in 0..dm {
                let row: Vec<Scalar> = images.iter().map(|e| e.coords[r].clone()).collect();
                sys.push_homogeneous(&row).expect("width");
            }
        }
        Submodule::span(ring, dim, sys.kernel().into_iter().map(Element::new).collect()).is_zero()
    };
    let left = action_kernel_zero(da, &|i, j| ctx.a_m(&ctx.a.basis(i), &ctx.basis_m(j)));
    let right = action_kernel_zero(db, &|i, j| ctx.m_b(&ctx.basis_m(j), &ctx.b.basis(i)));
    Faithfulness {
        left_faithful: left,
        right_faithful: right,
    }
}

/// Global basis bookkeeping for `[A M; N B]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BlockLayout {
    pub dims: [usize; 4],
}

impl BlockLayout {
    pub fn total(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn offset(&self, b: Block) -> usize {
        self.dims[..b.index()].iter().sum()
    }

    pub fn dim(&self, b: Block) -> usize {
        self.dims[b.index()]
    }

    pub fn range(&self, b: Block) -> std::ops::Range<usize> {
        let o = self.offset(b);
        o..o + self.dim(b)
    }

    /// Block and local index of a global basis index.
    pub fn locate(&self, global: usize) -> (Block, usize) {
        let mut rest = global;
        for b in Block::ALL {
            if rest < self.dim(b) {
                return (b, rest);
            }
            rest -= self.dim(b);
        }
        panic!("basis index {global} out of range")
    }
}

#[derive(Clone, Debug)]
pub struct GMAlgebra {
    algebra: Algebra,
    context: MoritaContext,
    layout: BlockLayout,
}

/// A GMA element split into its four blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Blocks {
    pub a: Element,
    pub m: Element,
    pub n: Element,
    pub b: Element,
}

pub fn build_gma(ctx: &MoritaContext) -> Result<GMAlgebra> {
    let rep = validate_context(ctx)?;
    if let Some(v) = rep.violations.first() {
        return Err(Error::InvalidContext(format!("{} fails at {}", v.axiom, v.witness)));
    }
    let layout = BlockLayout { dims: ctx.dims() };
    let d = layout.total();
    let ring = *ctx.ring();
    let mut labels = Vec::with_capacity(d);
    labels.extend(ctx.a.labels().iter().map(|l| format!("A:{l}")));
    labels.extend(ctx.m.labels.iter().map(|l| format!("M:{l}")));
    labels.extend(ctx.n.labels.iter().map(|l| format!("N:{l}")));
    labels.extend(ctx.b.labels().iter().map(|l| format!("B:{l}")));
    let proto = GMAlgebra {
        algebra: ctx.a.clone(),
        context: ctx.clone(),
        layout,
    };
    let mut consts = Vec::with_capacity(d * d * d);
    for i in 0..d {
        let x = proto.split(&Element::basis(&ring, d, i));
        for j in 0..d {
            let y = proto.split(&Element::basis(&ring, d, j));
            consts.extend(proto.join(&proto.block_product(&x, &y)).coords);
        }
    }
    let unit = proto.join(&Blocks {
        a: ctx.a.unit()?.clone(),
        m: Element::zero(&ring, layout.dims[1]),
        n: Element::zero(&ring, layout.dims[2]),
        b: ctx.b.unit()?.clone(),
    });
    let algebra = Algebra::new(ring, labels, consts, Some(unit))?;
    Ok(GMAlgebra {
        algebra,
        context: ctx.clone(),
        layout,
    })
}

impl GMAlgebra {
    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn context(&self) -> &MoritaContext {
        &self.context
    }

    pub fn layout(&self) -> &BlockLayout {
        &self.layout
    }

    pub fn ring(&self) -> &RingSpec {
        self.algebra.ring()
    }

    pub fn dim(&self) -> usize {
        self.layout.total()
    }

    pub fn split(&self, x: &Element) -> Blocks {
        let part = |b: Block| Element::new(x.coords[self.layout.range(b)].to_vec());
        Blocks {
            a: part(Block::A),
            m: part(Block::M),
            n: part(Block::N),
            b: part(Block::B),
        }
    }

    pub fn join(&self, x: &Blocks) -> Element {
        let mut c = Vec::with_capacity(self.dim());
        c.extend_from_slice(&x.a.coords);
        c.extend_from_slice(&x.m.coords);
        c.extend_from_slice(&x.n.coords);
        c.extend_from_slice(&x.b.coords);
        Element::new(c)
    }

    /// The element with `x` in block `b` and zeros elsewhere.
    pub fn embed(&self, b: Block, x: &Element) -> Element {
        let mut out = Element::zero(self.ring(), self.dim());
        let o = self.layout.offset(b);
        out.coords[o..o + x.len()].clone_from_slice(&x.coords);
        out
    }

    pub fn project(&self, b: Block, x: &Element) -> Element {
        Element::new(x.coords[self.layout.range(b)].to_vec())
    }

    /// `diag(a, b)`.
    pub fn diag(&self, a: &Element, b: &Element) -> Element {
        self.embed(Block::A, a).add(self.ring(), &self.embed(Block::B, b))
    }

    pub fn zero_in(&self, b: Block) -> Element {
        Element::zero(self.ring(), self.layout.dim(b))
    }

    pub fn basis_in(&self, b: Block, i: usize) -> Element {
        Element::basis(self.ring(), self.layout.dim(b), i)
    }

    /// `[a m; n b][a′ m′; n′ b′]` by the block law.
    pub fn block_product(&self, x: &Blocks, y: &Blocks) -> Blocks {
        let c = &self.context;
        let r = c.ring();
        Blocks {
            a: c.a.mul_unchecked(&x.a, &y.a).add(r, &c.phi(&x.m, &y.n)),
            m: c.a_m(&x.a, &y.m).add(r, &c.m_b(&x.m, &y.b)),
            n: c.n_a(&x.n, &y.a).add(r, &c.b_n(&x.b, &y.n)),
            b: c.psi(&x.n, &y.m).add(r, &c.b.mul_unchecked(&x.b, &y.b)),
        }
    }
}

/// `{diag(a, b) : am = mb, na = bn for all m, n}`, solved over basis `m`, `n`.
pub fn gma_center(g: &GMAlgebra) -> Submodule {
    diagonal_center(g, false)
}

/// [`gma_center`] with `a ∈ Z(A)` and `b ∈ Z(B)` imposed as well; this is
/// `Z(G)` for every context.
pub fn gma_center_full(g: &GMAlgebra) -> Submodule {
    diagonal_center(g, true)
}

fn diagonal_center(g: &GMAlgebra, with_centers: bool) -> Submodule {
    let ctx = g.context();
    let ring = *g.ring();
    let [da, dm, dn, db] = g.layout().dims;
    // Unknowns: a (da coordinates) then b (db coordinates).
    let mut sys = LinearSystem::new(ring, da + db);
    let mut push_pair = |left: Vec<Element>, right: Vec<Element>, rows: usize| {
        for r in 0..rows {
            let row: Vec<Scalar> = left
                .iter()
                .map(|e| e.coords[r].clone())
                .chain(right.iter().map(|e| ring.neg(&e.coords[r])))
                .collect();
            sys.push_homogeneous(&row).expect("width");
        }
    };
    for j in 0..dm {
        let m = g.basis_in(Block::M, j);
        let am = (0..da).map(|i| ctx.a_m(&ctx.a.basis(i), &m)).collect();
        let mb = (0..db).map(|i| ctx.m_b(&m, &ctx.b.basis(i))).collect();
        push_pair(am, mb, dm);
    }
    for j in 0..dn {
        let n = g.basis_in(Block::N, j);
        let na = (0..da).map(|i| ctx.n_a(&n, &ctx.a.basis(i))).collect();
        let bn = (0..db).map(|i| ctx.b_n(&ctx.b.basis(i), &n)).collect();
        push_pair(na, bn, dn);
    }
    if with_centers {
        let zero_b = vec![Element::zero(&ring, da); db];
        let zero_a = vec![Element::zero(&ring, db); da];
        for j in 0..da {
            let e = ctx.a.basis(j);
            let cols = (0..da).map(|i| ctx.a.bracket(&ctx.a.basis(i), &e).unwrap()).collect();
            push_pair(cols, zero_b.clone(), da);
        }
        for j in 0..db {
            let e = ctx.b.basis(j);
            let cols: Vec<Element> = (0..db).map(|i| ctx.b.bracket(&ctx.b.basis(i), &e).unwrap()).collect();
            let cols = cols.into_iter().map(|c| c.neg(&ring)).collect();
            push_pair(zero_a.clone(), cols, db);
        }
    }
    let gens = sys
        .kernel()
        .into_iter()
        .map(|v| {
            let a = Element::new(v[..da].to_vec());
            let b = Element::new(v[da..].to_vec());
            g.diag(&a, &b)
        })
        .collect();
    Submodule::span(ring, g.dim(), gens)
}

#[derive(Clone, Debug)]
pub struct Projections {
    /// `π_A(Z(G))` inside `A`.
    pub pi_a: Submodule,
    /// `π_B(Z(G))` inside `B`.
    pub pi_b: Submodule,
}

pub fn pi_projections(g: &GMAlgebra) -> Projections {
    let z = g.algebra().center();
    let [da, _, _, db] = g.layout().dims;
    Projections {
        pi_a: z.map(da, |x| g.project(Block::A, x)),
        pi_b: z.map(db, |x| g.project(Block::B, x)),
    }
}

/// `φ : π_A(Z(G)) → π_B(Z(G))`, `am = mφ(a)`, `na = φ(a)n`.
#[derive(Clone, Debug)]
pub struct CenterIso {
    pub domain: Submodule,
    pub codomain: Submodule,
    /// `(a, φ(a))` for every element of the domain when it is listed,
    /// otherwise for its generators.
    pub table: Vec<(Element, Element)>,
    g: GMAlgebra,
}

pub fn center_iso_phi(g: &GMAlgebra) -> Result<CenterIso> {
    let f = check_faithful(g.context());
    if !f.both() {
        return Err(Error::NotFaithful {
            left: f.left_faithful,
            right: f.right_faithful,
        });
    }
    let p = pi_projections(g);
    let mut iso = CenterIso {
        domain: p.pi_a.clone(),
        codomain: p.pi_b,
        table: Vec::new(),
        g: g.clone(),
    };
    let points: Vec<Element> = match p.pi_a.elements() {
        Some(all) => all.to_vec(),
        None => p.pi_a.generators().to_vec(),
    };
    for a in points {
        let b = iso.apply(&a)?;
        iso.table.push((a, b));
    }
    Ok(iso)
}

impl CenterIso {
    /// The unique `b` with `am = mb` and `na = bn`.
    pub fn apply(&self, a: &Element) -> Result<Element> {
        let ctx = self.g.context();
        let [da, dm, dn, db] = self.g.layout().dims;
        if a.len() != da {
            return Err(Error::DimensionMismatch {
                expected: da,
                found: a.len(),
            });
        }
        let ring = *ctx.ring();
        let mut sys = LinearSystem::new(ring, db);
        for j in 0..dm {
            let m = self.g.basis_in(Block::M, j);
            let am = ctx.a_m(a, &m);
            let cols: Vec<Element> = (0..db).map(|i| ctx.m_b(&m, &ctx.b.basis(i))).collect();
            for r in 0..dm {
                let row: Vec<Scalar> = cols.iter().map(|c| c.coords[r].clone()).collect();
                sys.push(&row, &am.coords[r])?;
            }
        }
        for j in 0..dn {
            let n = self.g.basis_in(Block::N, j);
            let na = ctx.n_a(&n, a);
            let cols: Vec<Element> = (0..db).map(|i| ctx.b_n(&ctx.b.basis(i), &n)).collect();
            for r in 0..dn {
                let row: Vec<Scalar> = cols.iter().map(|c| c.coords[r].clone()).collect();
                sys.push(&row, &na.coords[r])?;
            }
        }
        match sys.solve() {
            Solution::Solved(s) => {
                let b = Element::new(s.particular);
                if !self.g.algebra().center().contains(&self.g.diag(a, &b)) {
                    return Err(Error::NoSolution(format!(
                        "{} has no partner in the center",
                        ctx.a.format_element(a)
                    )));
                }
                Ok(b)
            }
            Solution::Inconsistent => Err(Error::NoSolution(format!(
                "no b with am = mb and na = bn for a = {}",
                ctx.a.format_element(a)
            ))),
        }
    }

    /// `φ⁻¹`, which solves the same relations in the swapped context. Its
    /// table is left empty.
    pub fn inverse_map(&self) -> Result<CenterIso> {
        Ok(CenterIso {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            table: Vec::new(),
            g: build_gma(&self.g.context().swapped())?,
        })
    }

    /// `φ⁻¹(b)`. Rebuilds the swapped GMA; use [`CenterIso::inverse_map`]
    /// for repeated calls.
    pub fn inverse(&self, b: &Element) -> Result<Element> {
        self.inverse_map()?.apply(b)
    }

    /// Checks multiplicativity and bijectivity on the table; requires the
    /// domain to be listed to decide bijectivity.
    pub fn verify(&self) -> Result<()> {
        let ctx = self.g.context();
        for (a1, b1) in &self.table {
            for (a2, b2) in &self.table {
                let lhs = self.apply(&ctx.a.mul_unchecked(a1, a2))?;
                if lhs != ctx.b.mul_unchecked(b1, b2) {
                    return Err(Error::TheoremViolation(format!(
                        "φ not multiplicative at ({}, {})",
                        ctx.a.format_element(a1),
                        ctx.a.format_element(a2)
                    )));
                }
            }
        }
        if let (Some(dom), Some(cod)) = (self.domain.elements(), self.codomain.elements()) {
            let mut images: Vec<&Element> = self.table.iter().map(|(_, b)| b).collect();
            images.sort();
            images.dedup();
            let onto = images.len() == cod.len() && images.iter().all(|b| self.codomain.contains(b));
            if images.len() != dom.len() || !onto {
                return Err(Error::TheoremViolation("φ is not a bijection".into()));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    fn z3() -> RingSpec {
        RingSpec::zmod(3).unwrap()
    }

    #[test]
    fn family_contexts_are_clean() {
        for ctx in [
            families::full_matrix_context(z3(), 2, 1).unwrap(),
            families::triangular_context(z3(), 2, 1).unwrap(),
            families::full_matrix_context(z3(), 3, 1).unwrap(),
        ] {
            let rep = validate_context(&ctx).unwrap();
            assert!(rep.is_clean(), "{rep:?}");
        }
    }

    #[test]
    fn negated_pairing_breaks_the_diagrams() {
        let mut ctx = families::full_matrix_context(z3(), 2, 1).unwrap();
        let r = z3();
        ctx.psi = ctx.psi.iter().map(|x| r.neg(x)).collect();
        let rep = validate_context(&ctx).unwrap();
        let axioms: Vec<&str> = rep.violations.iter().map(|v| v.axiom.as_str()).collect();
        assert!(axioms.contains(&"Ψ(n, m)·n′ = n·Φ(m, n′)"), "{axioms:?}");
        assert!(matches!(build_gma(&ctx), Err(Error::InvalidContext(_))));
    }

    #[test]
    fn zero_bimodules_rejected() {
        let mut ctx = families::triangular_context(z3(), 2, 1).unwrap();
        ctx.m = Bimodule::zero();
        ctx.phi.clear();
        ctx.psi.clear();
        assert!(matches!(build_gma(&ctx), Err(Error::InvalidContext(_))));
    }

    #[test]
    fn malformed_tensor() {
        let mut ctx = families::triangular_context(z3(), 2, 1).unwrap();
        ctx.m.left.pop();
        assert!(matches!(validate_context(&ctx), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn triangular_gma_matches_family() {
        let ctx = families::triangular_context(z3(), 2, 1).unwrap();
        let g = build_gma(&ctx).unwrap();
        assert_eq!(g.dim(), 3);
        assert_eq!(g.layout().dims, [1, 1, 0, 1]);
        let t = families::triangular_gma(z3(), 2, 1).unwrap();
        assert_eq!(g.algebra().structure_constants(), t.algebra().structure_constants());
    }

    #[test]
    fn full_matrix_unit_product() {
        let g = families::full_matrix_gma(z3(), 2, 1).unwrap();
        let alg = g.algebra();
        // Global order A, M, N, B is E11, E12, E21, E22.
        assert_eq!(alg.mul(&alg.basis(1), &alg.basis(2)).unwrap(), alg.basis(0));
    }

    #[test]
    fn faithfulness() {
        let g = families::full_matrix_gma(z3(), 2, 1).unwrap();
        assert!(check_faithful(g.context()).both());
        let ctx = families::triangular_context(z3(), 2, 1).unwrap();
        // M = 0 with N ≠ 0: the swapped triangular context.
        let f = check_faithful(&ctx.swapped().swapped());
        assert!(f.both());
        let sw = ctx.swapped();
        assert!(!check_faithful(&sw).left_faithful);
        // A = Z/3 × Z/3 acting on M = Z/3 through the first factor.
        let ctx = families::projection_context(z3()).unwrap();
        let f = check_faithful(&ctx);
        assert!(!f.left_faithful);
        assert!(f.right_faithful);
    }

    #[test]
    fn centers_agree_with_algebra_center() {
        for g in [
            families::triangular_gma(z3(), 2, 1).unwrap(),
            families::full_matrix_gma(z3(), 2, 1).unwrap(),
            families::triangular_gma(z3(), 3, 1).unwrap(),
            families::block_triangular_gma(z3(), &[2, 1], 1).unwrap(),
        ] {
            let z = gma_center(&g);
            assert_eq!(z.cardinality(), Some(3));
            assert!(z.same_as(&g.algebra().center()));
            assert!(gma_center_full(&g).same_as(&z));
        }
    }

    #[test]
    fn phi_is_identity_on_scalars() {
        for g in [
            families::triangular_gma(z3(), 2, 1).unwrap(),
            families::full_matrix_gma(z3(), 2, 1).unwrap(),
        ] {
            let iso = center_iso_phi(&g).unwrap();
            iso.verify().unwrap();
            assert_eq!(iso.table.len(), 3);
            for (a, b) in &iso.table {
                assert_eq!(a, b);
            }
            let one_a = g.context().a.unit().unwrap();
            assert_eq!(&iso.apply(one_a).unwrap(), g.context().b.unit().unwrap());
            assert_eq!(&iso.inverse(g.context().b.unit().unwrap()).unwrap(), one_a);
        }
    }

    #[test]
    fn phi_needs_faithfulness() {
        let ctx = families::projection_context(z3()).unwrap();
        let g = build_gma(&ctx).unwrap();
        assert!(matches!(center_iso_phi(&g), Err(Error::NotFaithful { .. })));
    }

    #[test]
    fn projections_sit_in_centers() {
        let g = families::block_triangular_gma(z3(), &[2, 1], 1).unwrap();
        let p = pi_projections(&g);
        assert!(p.pi_a.is_subset_of(&g.context().a.center()));
        assert!(p.pi_b.is_subset_of(&g.context().b.center()));
    }
}
