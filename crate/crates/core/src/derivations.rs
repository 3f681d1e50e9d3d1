//! Derivations of a GMA: the Leibniz test, the space of all derivations,
//! their normal form in terms of `m0`, `n0`, `δ1`, `τ2`, `ν3`, `μ4`, and the
//! vanishing of k-commuting derivations.

use rayon::prelude::*;

use crate::algebra::{Algebra, Element, Submodule};
use crate::error::{Error, Result};
use crate::linmap::LinMap;
use crate::maps::{decompose, properness_guards, space_maps};
use crate::morita::{Block, GMAlgebra};
use crate::report::Report;
use crate::ring::Scalar;
use crate::solve::LinearSystem;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeibnizCheck {
    pub holds: bool,
    /// First basis pair `(i, j)` with `Θ(e_i e_j) ≠ Θ(e_i)e_j + e_iΘ(e_j)`.
    pub witness: Option<(usize, usize)>,
}

/// Leibniz rule on basis pairs, which suffices by bilinearity.
pub fn is_derivation(alg: &Algebra, theta: &LinMap) -> Result<LeibnizCheck> {
    if theta.dim() != alg.dim() {
        return Err(Error::DimensionMismatch {
            expected: alg.dim(),
            found: theta.dim(),
        });
    }
    let ring = *alg.ring();
    let d = alg.dim();
    let images: Vec<Element> = (0..d).map(|i| theta.column(i)).collect();
    let witness = (0..d * d).into_par_iter().find_first(|&p| {
        let (i, j) = (p / d, p % d);
        let (ei, ej) = (alg.basis(i), alg.basis(j));
        let lhs = theta.apply(&ring, &alg.mul_unchecked(&ei, &ej)).expect("dimension checked");
        let rhs = alg.mul_unchecked(&images[i], &ej).add(&ring, &alg.mul_unchecked(&ei, &images[j]));
        lhs != rhs
    });
    Ok(LeibnizCheck {
        holds: witness.is_none(),
        witness: witness.map(|p| (p / d, p % d)),
    })
}

/// Pushes the Leibniz constraints for the unknown map `θ[r][c]` (index
/// `r*d + c`) into `sys`.
fn leibniz_rows(alg: &Algebra, sys: &mut LinearSystem) -> Result<()> {
    let ring = *alg.ring();
    let d = alg.dim();
    for i in 0..d {
        for j in 0..d {
            for s in 0..d {
                let mut row = vec![ring.zero(); d * d];
                for k in 0..d {
                    let c = alg.structure_constant(i, j, k);
                    row[s * d + k] = ring.add(&row[s * d + k], c);
                }
                for r in 0..d {
                    let c = alg.structure_constant(r, j, s);
                    row[r * d + i] = ring.sub(&row[r * d + i], c);
                    let c = alg.structure_constant(i, r, s);
                    row[r * d + j] = ring.sub(&row[r * d + j], c);
                }
                sys.push_homogeneous(&row)?;
            }
        }
    }
    Ok(())
}

/// All derivations, as a submodule of `R^(d²)` in [`LinMap::to_vector`]
/// coordinates.
pub fn derivation_space(alg: &Algebra) -> Result<Submodule> {
    let ring = *alg.ring();
    let d = alg.dim();
    let mut sys = LinearSystem::new(ring, d * d);
    leibniz_rows(alg, &mut sys)?;
    Ok(Submodule::span(
        ring,
        d * d,
        sys.kernel().into_iter().map(Element::new).collect(),
    ))
}

/// A derivation written as
/// `[a m; n b] ↦ [δ1(a) - mn0 - m0n, am0 - m0b + τ2(m); n0a - bn0 + ν3(n), n0m + nm0 + μ4(b)]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationForm {
    pub m0: Element,
    pub n0: Element,
    pub delta1: LinMap,
    pub tau2: LinMap,
    pub nu3: LinMap,
    pub mu4: LinMap,
}

impl DerivationForm {
    pub fn apply(&self, g: &GMAlgebra, x: &Element) -> Element {
        let ctx = g.context();
        let ring = *g.ring();
        let s = g.split(x);
        let (m0, n0) = (&self.m0, &self.n0);
        let a = self
            .delta1
            .apply(&ring, &s.a)
            .expect("block dimension")
            .sub(&ring, &ctx.phi(&s.m, n0))
            .sub(&ring, &ctx.phi(m0, &s.n));
        let m = ctx
            .a_m(&s.a, m0)
            .sub(&ring, &ctx.m_b(m0, &s.b))
            .add(&ring, &self.tau2.apply(&ring, &s.m).expect("block dimension"));
        let n = ctx
            .n_a(n0, &s.a)
            .sub(&ring, &ctx.b_n(&s.b, n0))
            .add(&ring, &self.nu3.apply(&ring, &s.n).expect("block dimension"));
        let b = ctx
            .psi(n0, &s.m)
            .add(&ring, &ctx.psi(&s.n, m0))
            .add(&ring, &self.mu4.apply(&ring, &s.b).expect("block dimension"));
        g.join(&crate::morita::Blocks { a, m, n, b })
    }

    pub fn reassemble(&self, g: &GMAlgebra) -> Result<LinMap> {
        let cols: Vec<Element> = (0..g.dim()).map(|j| self.apply(g, &g.algebra().basis(j))).collect();
        LinMap::from_columns(g.ring(), &cols)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormReport {
    pub form: DerivationForm,
    pub report: Report,
}

/// Reads `m0`, `n0` off `Θ(diag(1, 0))` and the four component maps off
/// the diagonal blocks, then checks the reassembly and the compatibility
/// conditions tying the components together.
pub fn verify_derivation_form(g: &GMAlgebra, theta: &LinMap) -> Result<FormReport> {
    let alg = g.algebra();
    let lb = is_derivation(alg, theta)?;
    if let Some((i, j)) = lb.witness {
        return Err(Error::NotDerivation {
            witness: format!("({}, {})", alg.labels()[i], alg.labels()[j]),
        });
    }
    let ctx = g.context();
    let ring = *g.ring();
    let one_a = ctx.a.unit()?;
    let one_b = ctx.b.unit()?;
    let e = theta.apply(&ring, &g.diag(one_a, &g.zero_in(Block::B)))?;
    let m0 = g.project(Block::M, &e);
    let n0 = g.project(Block::N, &e);
    let dec = decompose(g, theta)?;
    let form = DerivationForm {
        m0: m0.clone(),
        n0: n0.clone(),
        delta1: dec.delta(1).to_linmap()?,
        tau2: dec.tau(2).to_linmap()?,
        nu3: dec.nu(3).to_linmap()?,
        mu4: dec.mu(4).to_linmap()?,
    };
    let mut rep = Report::new("derivation form");
    let fmt = |b: Block, x: &Element| {
        let labels = &alg.labels()[g.layout().range(b)];
        crate::algebra::format_coords(&ring, labels, x)
    };

    let re = form.reassemble(g)?;
    let w = (0..g.dim()).find(|&j| re.column(j) != theta.column(j)).map(|j| alg.labels()[j].clone());
    rep.check("reassembly", "Θ = form(m0, n0, δ1, τ2, ν3, μ4)", w);

    let f = theta.apply(&ring, &g.diag(&ctx.a.zero(), one_b))?;
    let w = (g.project(Block::M, &f) != m0.neg(&ring) || g.project(Block::N, &f) != n0.neg(&ring))
        .then(|| alg.format_element(&f));
    rep.check("cross-consistency", "Θ(diag(0, 1)) = [0 -m0; -n0 μ4(1)]", w);

    let ap = |x: &LinMap, v: &Element| x.apply(&ring, v).expect("block dimension");
    let (d1, t2, v3, u4) = (&form.delta1, &form.tau2, &form.nu3, &form.mu4);
    let basis = |b: Block| -> Vec<Element> { (0..g.layout().dim(b)).map(|i| g.basis_in(b, i)).collect() };
    let (av, mv, nv, bv) = (basis(Block::A), basis(Block::M), basis(Block::N), basis(Block::B));
    let leib = is_derivation(&ctx.a, d1)?;
    rep.check(
        "delta1-derivation",
        "δ1(aa') = δ1(a)a' + aδ1(a')",
        leib.witness.map(|(i, j)| format!("({}, {})", ctx.a.labels()[i], ctx.a.labels()[j])),
    );
    let w = pairs(&mv, &nv).find(|(m, n)| {
        ap(d1, &ctx.phi(m, n)) != ctx.phi(&ap(t2, m), n).add(&ring, &ctx.phi(m, &ap(v3, n)))
    });
    rep.check(
        "delta1-on-mn",
        "δ1(mn) = τ2(m)n + mν3(n)",
        w.map(|(m, n)| format!("m = {}, n = {}", fmt(Block::M, &m), fmt(Block::N, &n))),
    );

    let leib = is_derivation(&ctx.b, u4)?;
    rep.check(
        "mu4-derivation",
        "μ4(bb') = μ4(b)b' + bμ4(b')",
        leib.witness.map(|(i, j)| format!("({}, {})", ctx.b.labels()[i], ctx.b.labels()[j])),
    );
    let w = pairs(&nv, &mv).find(|(n, m)| {
        ap(u4, &ctx.psi(n, m)) != ctx.psi(n, &ap(t2, m)).add(&ring, &ctx.psi(&ap(v3, n), m))
    });
    rep.check(
        "mu4-on-nm",
        "μ4(nm) = nτ2(m) + ν3(n)m",
        w.map(|(n, m)| format!("n = {}, m = {}", fmt(Block::N, &n), fmt(Block::M, &m))),
    );

    let w = pairs(&av, &mv).find(|(a, m)| {
        ap(t2, &ctx.a_m(a, m)) != ctx.a_m(a, &ap(t2, m)).add(&ring, &ctx.a_m(&ap(d1, a), m))
    });
    rep.check(
        "tau2-left",
        "τ2(am) = aτ2(m) + δ1(a)m",
        w.map(|(a, m)| format!("a = {}, m = {}", fmt(Block::A, &a), fmt(Block::M, &m))),
    );
    let w = pairs(&mv, &bv).find(|(m, b)| {
        ap(t2, &ctx.m_b(m, b)) != ctx.m_b(&ap(t2, m), b).add(&ring, &ctx.m_b(m, &ap(u4, b)))
    });
    rep.check(
        "tau2-right",
        "τ2(mb) = τ2(m)b + mμ4(b)",
        w.map(|(m, b)| format!("m = {}, b = {}", fmt(Block::M, &m), fmt(Block::B, &b))),
    );
    let w = pairs(&nv, &av).find(|(n, a)| {
        ap(v3, &ctx.n_a(n, a)) != ctx.n_a(&ap(v3, n), a).add(&ring, &ctx.n_a(n, &ap(d1, a)))
    });
    rep.check(
        "nu3-right",
        "ν3(na) = ν3(n)a + nδ1(a)",
        w.map(|(n, a)| format!("n = {}, a = {}", fmt(Block::N, &n), fmt(Block::A, &a))),
    );
    let w = pairs(&bv, &nv).find(|(b, n)| {
        ap(v3, &ctx.b_n(b, n)) != ctx.b_n(b, &ap(v3, n)).add(&ring, &ctx.b_n(&ap(u4, b), n))
    });
    rep.check(
        "nu3-left",
        "ν3(bn) = bν3(n) + μ4(b)n",
        w.map(|(b, n)| format!("b = {}, n = {}", fmt(Block::B, &b), fmt(Block::N, &n))),
    );
    Ok(FormReport { form, report: rep })
}

fn pairs<'a>(xs: &'a [Element], ys: &'a [Element]) -> impl Iterator<Item = (Element, Element)> + 'a {
    xs.iter().flat_map(move |x| ys.iter().map(move |y| (x.clone(), y.clone())))
}

/// Derivations that are also k-commuting. The candidates are combinations
/// `Σ c_t D_t` of derivation-space generators, constrained by
/// `Σ c_t [D_t(x), x]_k = 0` for every `x`.
pub fn commuting_derivations(g: &GMAlgebra, k: usize) -> Result<Submodule> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let alg = g.algebra();
    let ring = *alg.ring();
    if !ring.is_enumerable() {
        return Err(Error::NotEnumerable);
    }
    let d = alg.dim();
    let space = derivation_space(alg)?;
    let gens = space_maps(&space, d)?;
    let mut sys = LinearSystem::new(ring, gens.len());
    alg.scan_elements(&mut sys, |x| {
        let cols: Vec<Element> = gens
            .iter()
            .map(|dt| alg.iterated_bracket_unchecked(&dt.apply(&ring, x).expect("dimension"), x, k))
            .collect();
        (0..d)
            .map(|s| cols.iter().map(|c| c.coords[s].clone()).collect::<Vec<Scalar>>())
            .collect()
    })?;
    let combos = sys.kernel().into_iter().map(|c| {
        let mut v = Element::zero(&ring, d * d);
        for (ct, gt) in c.iter().zip(space.generators()) {
            v = v.add(&ring, &gt.scale(&ring, ct));
        }
        v
    });
    Ok(Submodule::span(ring, d * d, combos.collect()))
}

/// Every k-commuting derivation of a 2-torsion free GMA with faithful `M`
/// is zero. Returns `Ok(true)` when that holds, and a
/// [`Error::TheoremViolation`] carrying a nonzero such derivation otherwise.
pub fn verify_commuting_derivations_vanish(g: &GMAlgebra, k: usize) -> Result<bool> {
    properness_guards(g)?;
    let inter = commuting_derivations(g, k)?;
    match inter.generators().first() {
        None => Ok(true),
        Some(v) => {
            let m = LinMap::from_vector(g.dim(), &v.coords)?;
            Err(Error::TheoremViolation(format!(
                "nonzero {k}-commuting derivation with matrix {:?}",
                m.rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>()
            )))
        }
    }
}
