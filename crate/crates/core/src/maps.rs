//! Linear self-maps of algebras and GMAs: k-commuting tests, the space of
//! k-commuting maps, the sixteen-block decomposition, the structural checks
//! it must satisfy, and the construction of a proper form
//! `Θ(x) = xλ + ζ(x)` with `λ` central and `ζ` central-valued.

use rayon::prelude::*;
use crate::algebra::{format_coords, Algebra, Element, ElementIter, Submodule};
use crate::error::{Error, Result};
use crate::linmap::LinMap;
use crate::morita::{center_iso_phi, check_faithful, pi_projections, Block, BlockLayout, CenterIso, GMAlgebra};
use crate::report::Report;
use crate::ring::{RingSpec, Scalar};
use crate::solve::{LinearSystem, Solution};

/// Quadratic identities are checked on every element of `M` (or `N`) up to
/// this many elements, and on probe points beyond it.
pub const QUADRATIC_SCAN_LIMIT: u128 = 100_000;

/// Upper bound on `(m0, n0)` candidates tried by the witness search.
pub const WITNESS_SEARCH_LIMIT: u128 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KCommuting {
    pub holds: bool,
    /// First failing `x` in enumeration order.
    pub witness: Option<Element>,
}

fn check_map(alg: &Algebra, theta: &LinMap) -> Result<()> {
    if theta.dim() != alg.dim() {
        return Err(Error::DimensionMismatch {
            expected: alg.dim(),
            found: theta.dim(),
        });
    }
    Ok(())
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    Ok(())
}

/// `[Θ(x), x]_k = 0` for every `x`. Over a finite ring every element is
/// scanned; over `Q` only `k = 1` is decided, by the polarized identity
/// `[Θ(x), y] + [Θ(y), x] = 0` on basis pairs.
pub fn is_k_commuting(alg: &Algebra, theta: &LinMap, k: usize) -> Result<KCommuting> {
    check_k(k)?;
    check_map(alg, theta)?;
    let ring = *alg.ring();
    if !ring.is_enumerable() {
        if k != 1 {
            return Err(Error::NotEnumerable);
        }
        let d = alg.dim();
        let images: Vec<Element> = (0..d).map(|i| theta.column(i)).collect();
        for i in 0..d {
            for j in i..d {
                let (ei, ej) = (alg.basis(i), alg.basis(j));
                let b = alg.bracket(&images[i], &ej)?.add(&ring, &alg.bracket(&images[j], &ei)?);
                if !b.is_zero(&ring) {
                    let x = if i == j { ei } else { ei.add(&ring, &ej) };
                    return Ok(KCommuting {
                        holds: false,
                        witness: Some(x),
                    });
                }
            }
        }
        return Ok(KCommuting {
            holds: true,
            witness: None,
        });
    }
    let witness = alg.find_first_element(|x| {
        let tx = theta.apply(&ring, x).expect("dimension checked");
        !alg.iterated_bracket_unchecked(&tx, x, k).is_zero(&ring)
    })?;
    Ok(KCommuting {
        holds: witness.is_none(),
        witness,
    })
}

/// All k-commuting maps, as a submodule of `R^(d²)` in [`LinMap::to_vector`]
/// coordinates. The constraint `[Θ(x), x]_k = 0` is linear in `Θ`; the
/// unknown `(r, c)` carries the coefficient `x_c · [e_r, x]_k`.
pub fn commuting_space(alg: &Algebra, k: usize) -> Result<Submodule> {
    check_k(k)?;
    let d = alg.dim();
    let ring = *alg.ring();
    let mut sys = LinearSystem::new(ring, d * d);
    if !ring.is_enumerable() {
        if k != 1 {
            return Err(Error::NotEnumerable);
        }
        for i in 0..d {
            for j in i..d {
                let (ei, ej) = (alg.basis(i), alg.basis(j));
                let bj: Vec<Element> = (0..d).map(|r| alg.bracket(&alg.basis(r), &ej).unwrap()).collect();
                let bi: Vec<Element> = (0..d).map(|r| alg.bracket(&alg.basis(r), &ei).unwrap()).collect();
                for s in 0..d {
                    let mut row = vec![ring.zero(); d * d];
                    for r in 0..d {
                        row[r * d + i] = ring.add(&row[r * d + i], &bj[r].coords[s]);
                        row[r * d + j] = ring.add(&row[r * d + j], &bi[r].coords[s]);
                    }
                    sys.push_homogeneous(&row)?;
                }
            }
        }
    } else {
        alg.scan_elements(&mut sys, |x| {
            let br: Vec<Element> = (0..d)
                .map(|r| alg.iterated_bracket_unchecked(&alg.basis(r), x, k))
                .collect();
            (0..d)
                .map(|s| {
                    let mut row = vec![ring.zero(); d * d];
                    for (r, b) in br.iter().enumerate() {
                        if ring.is_zero(&b.coords[s]) {
                            continue;
                        }
                        for (c, xc) in x.coords.iter().enumerate() {
                            row[r * d + c] = ring.mul(xc, &b.coords[s]);
                        }
                    }
                    row
                })
                .collect()
        })?;
    }
    Ok(Submodule::span(
        ring,
        d * d,
        sys.kernel().into_iter().map(Element::new).collect(),
    ))
}

/// Generators of a map space as maps.
pub fn space_maps(space: &Submodule, dim: usize) -> Result<Vec<LinMap>> {
    space
        .generators()
        .iter()
        .map(|g| LinMap::from_vector(dim, &g.coords))
        .collect()
}

/// `λ` and `ζ` with `Θ(x) = xλ + ζ(x)`, `λ ∈ Z`, `ζ(G) ⊆ Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropernessCertificate {
    pub lambda: Element,
    pub zeta: LinMap,
    /// Generators of the homogeneous part of the solution set for `λ`;
    /// `0` means `λ` is unique.
    pub free_generators: usize,
}

impl PropernessCertificate {
    /// `x ↦ xλ + ζ(x)`.
    pub fn reassemble(&self, alg: &Algebra) -> Result<LinMap> {
        Ok(alg.right_mul_map(&self.lambda)?.add(alg.ring(), &self.zeta))
    }

    /// `λ` central and every `ζ(e_j)` central.
    pub fn is_valid(&self, alg: &Algebra) -> bool {
        let z = alg.center();
        z.contains(&self.lambda) && (0..alg.dim()).all(|j| z.contains(&self.zeta.column(j)))
    }
}

/// Decides whether `Θ` is proper by solving, for `λ = Σ c_t z_t` over
/// generators `z_t` of the center, `[Θ(e_j) - e_j λ, e_i] = 0` for all `i, j`.
/// The solution with free parameters zeroed is returned.
pub fn properness_certificate(alg: &Algebra, theta: &LinMap) -> Result<Option<PropernessCertificate>> {
    check_map(alg, theta)?;
    properness_certificate_in(alg, &alg.center(), theta)
}

fn properness_certificate_in(alg: &Algebra, center: &Submodule, theta: &LinMap) -> Result<Option<PropernessCertificate>> {
    let ring = *alg.ring();
    let d = alg.dim();
    let z = center.generators();
    let mut sys = LinearSystem::new(ring, z.len());
    for j in 0..d {
        let ej = alg.basis(j);
        let tj = theta.column(j);
        let ejz: Vec<Element> = z.iter().map(|zt| alg.mul_unchecked(&ej, zt)).collect();
        for i in 0..d {
            let ei = alg.basis(i);
            let rhs = alg.bracket(&tj, &ei)?;
            let cols: Vec<Element> = ejz.iter().map(|p| alg.bracket(p, &ei).unwrap()).collect();
            for s in 0..d {
                let row: Vec<Scalar> = cols.iter().map(|c| c.coords[s].clone()).collect();
                sys.push(&row, &rhs.coords[s])?;
            }
        }
    }
    let Solution::Solved(sol) = sys.solve() else {
        return Ok(None);
    };
    let mut lambda = alg.zero();
    for (c, zt) in sol.particular.iter().zip(z) {
        lambda = lambda.add(&ring, &zt.scale(&ring, c));
    }
    let zeta = theta.sub(&ring, &alg.right_mul_map(&lambda)?);
    Ok(Some(PropernessCertificate {
        lambda,
        zeta,
        free_generators: sol.kernel.len(),
    }))
}

/// A block of a map `[A M; N B] → [A M; N B]`, from one block to another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockMap {
    pub rows: usize,
    pub cols: usize,
    /// Row-major; column `c` is the image of the `c`-th source basis element.
    pub entries: Vec<Scalar>,
}

impl BlockMap {
    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Element {
        Element::new((0..self.rows).map(|r| self.get(r, c).clone()).collect())
    }

    pub fn apply(&self, ring: &RingSpec, x: &Element) -> Element {
        let mut out = vec![ring.zero(); self.rows];
        for (c, xc) in x.coords.iter().enumerate() {
            if ring.is_zero(xc) {
                continue;
            }
            for (r, o) in out.iter_mut().enumerate() {
                *o = ring.mul_add(o, self.get(r, c), xc);
            }
        }
        Element::new(out)
    }

    pub fn is_zero(&self, ring: &RingSpec) -> bool {
        self.entries.iter().all(|x| ring.is_zero(x))
    }

    /// The block as a self-map, when square.
    pub fn to_linmap(&self) -> Result<LinMap> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        LinMap::from_vector(self.rows, &self.entries)
    }
}

/// The sixteen components, indexed `blocks[target][source]` over `A, M, N, B`:
/// `δ_i` targets `A`, `τ_i` targets `M`, `ν_i` targets `N`, `μ_i` targets `B`,
/// with `i = 1..4` running over the sources `A, M, N, B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub layout: BlockLayout,
    pub blocks: [[BlockMap; 4]; 4],
}

impl BlockDecomposition {
    pub fn get(&self, target: Block, source: Block) -> &BlockMap {
        &self.blocks[target.index()][source.index()]
    }

    pub fn get_mut(&mut self, target: Block, source: Block) -> &mut BlockMap {
        &mut self.blocks[target.index()][source.index()]
    }

    fn nth(&self, target: Block, i: usize) -> &BlockMap {
        &self.blocks[target.index()][i - 1]
    }

    pub fn delta(&self, i: usize) -> &BlockMap {
        self.nth(Block::A, i)
    }

    pub fn tau(&self, i: usize) -> &BlockMap {
        self.nth(Block::M, i)
    }

    pub fn nu(&self, i: usize) -> &BlockMap {
        self.nth(Block::N, i)
    }

    pub fn mu(&self, i: usize) -> &BlockMap {
        self.nth(Block::B, i)
    }

    pub fn reassemble(&self) -> LinMap {
        let l = &self.layout;
        let d = l.total();
        let mut rows = vec![Vec::with_capacity(d); d];
        for t in Block::ALL {
            for (r, row) in rows[l.range(t)].iter_mut().enumerate() {
                for s in Block::ALL {
                    let bm = self.get(t, s);
                    row.extend((0..bm.cols).map(|c| bm.get(r, c).clone()));
                }
            }
        }
        LinMap::from_rows(rows).expect("square")
    }
}

pub fn decompose(g: &GMAlgebra, theta: &LinMap) -> Result<BlockDecomposition> {
    check_map(g.algebra(), theta)?;
    let l = *g.layout();
    let blocks = std::array::from_fn(|t| {
        std::array::from_fn(|s| {
            let (tb, sb) = (Block::ALL[t], Block::ALL[s]);
            let (rr, cr) = (l.range(tb), l.range(sb));
            let entries = rr
                .clone()
                .flat_map(|r| cr.clone().map(move |c| (r, c)))
                .map(|(r, c)| theta.get(r, c).clone())
                .collect();
            BlockMap {
                rows: rr.len(),
                cols: cr.len(),
                entries,
            }
        })
    });
    Ok(BlockDecomposition { layout: l, blocks })
}

/// Every vector of `R^dim` when there are at most [`QUADRATIC_SCAN_LIMIT`],
/// otherwise `0`, `±e_i` and `e_i + e_j`. The probes decide a quadratic
/// identity exactly when 2 is invertible.
fn quadratic_points(ring: &RingSpec, dim: usize) -> Vec<Element> {
    if let Some(n) = ring.cardinality() {
        let total = (n as u128).checked_pow(dim as u32);
        if total.is_some_and(|t| t <= QUADRATIC_SCAN_LIMIT) {
            return ElementIter::new(ring, dim).expect("finite").collect();
        }
    }
    let mut pts = vec![Element::zero(ring, dim)];
    for i in 0..dim {
        let ei = Element::basis(ring, dim, i);
        pts.push(ei.neg(ring));
        for j in i + 1..dim {
            pts.push(ei.add(ring, &Element::basis(ring, dim, j)));
        }
        pts.push(ei);
    }
    pts
}

fn basis_vectors(ring: &RingSpec, dim: usize) -> Vec<Element> {
    (0..dim).map(|i| Element::basis(ring, dim, i)).collect()
}

/// Shorthand for the block operations of one GMA.
struct Ops<'g> {
    g: &'g GMAlgebra,
    ring: RingSpec,
}

impl<'g> Ops<'g> {
    fn new(g: &'g GMAlgebra) -> Self {
        Ops { g, ring: *g.ring() }
    }

    fn am(&self, a: &Element, m: &Element) -> Element {
        self.g.context().a_m(a, m)
    }

    fn mb(&self, m: &Element, b: &Element) -> Element {
        self.g.context().m_b(m, b)
    }

    fn bn(&self, b: &Element, n: &Element) -> Element {
        self.g.context().b_n(b, n)
    }

    fn na(&self, n: &Element, a: &Element) -> Element {
        self.g.context().n_a(n, a)
    }

    fn add(&self, x: &Element, y: &Element) -> Element {
        x.add(&self.ring, y)
    }

    fn sub(&self, x: &Element, y: &Element) -> Element {
        x.sub(&self.ring, y)
    }

    fn twice(&self, x: &Element) -> Element {
        x.add(&self.ring, x)
    }

    fn fmt(&self, b: Block, x: &Element) -> String {
        let l = self.g.layout();
        let labels = &self.g.algebra().labels()[l.range(b)];
        format_coords(&self.ring, labels, x)
    }

    fn label(&self, b: Block, i: usize) -> String {
        self.g.algebra().labels()[self.g.layout().offset(b) + i].clone()
    }

    fn vectors(&self, b: Block) -> Vec<Element> {
        basis_vectors(&self.ring, self.g.layout().dim(b))
    }

    fn in_center(&self, center: &Submodule, a: &Element, b: &Element) -> bool {
        center.contains(&self.g.diag(a, b))
    }
}

/// First `x` (rendered) among `points` where `bad` holds.
fn first_bad<T>(points: &[T], bad: impl Fn(&T) -> bool + Sync, show: impl Fn(&T) -> String) -> Option<String>
where
    T: Sync,
{
    points.par_iter().find_first(|p| bad(p)).map(show)
}

/// Caches the Engel sets of `A` and `B` for repeated structure checks.
pub struct StructureChecker<'g> {
    g: &'g GMAlgebra,
    k: usize,
    zk_a: Submodule,
    zk_b: Submodule,
}

impl<'g> StructureChecker<'g> {
    pub fn new(g: &'g GMAlgebra, k: usize) -> Result<Self> {
        check_k(k)?;
        let ctx = g.context();
        Ok(StructureChecker {
            g,
            k,
            zk_a: ctx.a.zk_set(k)?,
            zk_b: ctx.b.zk_set(k)?,
        })
    }

    /// The decomposition of a k-commuting map: vanishing blocks, ranges in the
    /// Engel sets, the diagonal corners k-commuting, and the relations tying
    /// the corners to `M` and `N`.
    pub fn check(&self, theta: &LinMap) -> Result<Report> {
        let g = self.g;
        let k = self.k;
        let kc = is_k_commuting(g.algebra(), theta, k)?;
        if let Some(w) = kc.witness {
            return Err(Error::NotKCommuting {
                k,
                witness: g.algebra().format_element(&w),
            });
        }
        let dec = decompose(g, theta)?;
        let ctx = g.context();
        let o = Ops::new(g);
        let ring = o.ring;
        let mut rep = Report::new(format!("block structure (k = {k})"));

        let vanishing = [
            ("tau1-zero", "τ1 = 0", Block::M, Block::A),
            ("nu1-zero", "ν1 = 0", Block::N, Block::A),
            ("tau4-zero", "τ4 = 0", Block::M, Block::B),
            ("nu4-zero", "ν4 = 0", Block::N, Block::B),
            ("tau3-zero", "τ3 = 0", Block::M, Block::N),
            ("nu2-zero", "ν2 = 0", Block::N, Block::M),
        ];
        for (id, anchor, t, s) in vanishing {
            let bm = dec.get(t, s);
            let w = (0..bm.cols)
                .find(|&c| !bm.column(c).is_zero(&ring))
                .map(|c| format!("{} ↦ {}", o.label(s, c), o.fmt(t, &bm.column(c))));
            rep.check(id, anchor, w);
        }

        let ranges = [
            ("delta2-range", "δ2(M) ⊆ Z(A)_k", Block::A, Block::M),
            ("delta3-range", "δ3(N) ⊆ Z(A)_k", Block::A, Block::N),
            ("delta4-range", "δ4(B) ⊆ Z(A)_k", Block::A, Block::B),
            ("mu1-range", "μ1(A) ⊆ Z(B)_k", Block::B, Block::A),
            ("mu2-range", "μ2(M) ⊆ Z(B)_k", Block::B, Block::M),
            ("mu3-range", "μ3(N) ⊆ Z(B)_k", Block::B, Block::N),
        ];
        for (id, anchor, t, s) in ranges {
            let target = if t == Block::A { &self.zk_a } else { &self.zk_b };
            let bm = dec.get(t, s);
            let w = (0..bm.cols)
                .find(|&c| !target.contains(&bm.column(c)))
                .map(|c| format!("{} ↦ {}", o.label(s, c), o.fmt(t, &bm.column(c))));
            rep.check(id, anchor, w);
        }

        let one_a = ctx.a.unit()?.clone();
        let one_b = ctx.b.unit()?.clone();
        let d1 = dec.delta(1).apply(&ring, &one_a);
        let d4 = dec.delta(4).apply(&ring, &one_b);
        let u1 = dec.mu(1).apply(&ring, &one_a);
        let u4 = dec.mu(4).apply(&ring, &one_b);

        let delta1 = dec.delta(1).to_linmap()?;
        let w = is_k_commuting(&ctx.a, &delta1, k)?.witness.map(|x| ctx.a.format_element(&x));
        rep.check("delta1-commuting", "[δ1(a), a]_k = 0", w);
        let w = (!self.zk_a.contains(&d1)).then(|| ctx.a.format_element(&d1));
        rep.check("delta1-unit", "δ1(1) ∈ Z(A)_k", w);
        let mu4 = dec.mu(4).to_linmap()?;
        let w = is_k_commuting(&ctx.b, &mu4, k)?.witness.map(|x| ctx.b.format_element(&x));
        rep.check("mu4-commuting", "[μ4(b), b]_k = 0", w);
        let w = (!self.zk_b.contains(&u4)).then(|| ctx.b.format_element(&u4));
        rep.check("mu4-unit", "μ4(1) ∈ Z(B)_k", w);

        let sa = o.add(&d1, &d4);
        let sb = o.add(&u1, &u4);
        let delta2 = dec.delta(2);
        let mu2 = dec.mu(2);
        let ms = quadratic_points(&ring, g.layout().dim(Block::M));
        let w = first_bad(
            &ms,
            |m| {
                let lhs = o.am(&o.add(&sa, &o.twice(&delta2.apply(&ring, m))), m);
                let rhs = o.mb(m, &o.add(&sb, &o.twice(&mu2.apply(&ring, m))));
                lhs != rhs
            },
            |m| format!("m = {}", o.fmt(Block::M, m)),
        );
        rep.check("m-quadratic", "(δ1(1) + δ4(1) + 2δ2(m))m = m(μ1(1) + μ4(1) + 2μ2(m))", w);

        let delta3 = dec.delta(3);
        let mu3 = dec.mu(3);
        let ns = quadratic_points(&ring, g.layout().dim(Block::N));
        let w = first_bad(
            &ns,
            |n| {
                let lhs = o.na(n, &o.add(&sa, &o.twice(&delta3.apply(&ring, n))));
                let rhs = o.bn(&o.add(&sb, &o.twice(&mu3.apply(&ring, n))), n);
                lhs != rhs
            },
            |n| format!("n = {}", o.fmt(Block::N, n)),
        );
        rep.check("n-quadratic", "n(δ1(1) + δ4(1) + 2δ3(n)) = (μ1(1) + μ4(1) + 2μ3(n))n", w);

        let da = o.sub(&d1, &d4);
        let ua = o.sub(&u1, &u4);
        let tau2 = dec.tau(2);
        let w = first_bad(
            &o.vectors(Block::M),
            |m| o.twice(&tau2.apply(&ring, m)) != o.sub(&o.am(&da, m), &o.mb(m, &ua)),
            |m| format!("m = {}", o.fmt(Block::M, m)),
        );
        rep.check("tau2-form", "2τ2(m) = (δ1(1) - δ4(1))m - m(μ1(1) - μ4(1))", w);
        let nu3 = dec.nu(3);
        let w = first_bad(
            &o.vectors(Block::N),
            |n| o.twice(&nu3.apply(&ring, n)) != o.sub(&o.na(n, &da), &o.bn(&ua, n)),
            |n| format!("n = {}", o.fmt(Block::N, n)),
        );
        rep.check("nu3-form", "2ν3(n) = n(δ1(1) - δ4(1)) - (μ1(1) - μ4(1))n", w);
        Ok(rep)
    }
}

pub fn verify_block_structure(g: &GMAlgebra, theta: &LinMap, k: usize) -> Result<Report> {
    StructureChecker::new(g, k)?.check(theta)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisWitness {
    /// `Z(A)_k = π_A(Z(G))`.
    pub cond1: bool,
    /// `Z(B)_k = π_B(Z(G))`.
    pub cond2: bool,
    /// Some `(m0, n0)` cuts out `Z(G)` among diagonal central pairs.
    pub cond3: bool,
    pub m0: Option<Vec<Scalar>>,
    pub n0: Option<Vec<Scalar>>,
}

impl HypothesisWitness {
    pub fn all(&self) -> bool {
        self.cond1 && self.cond2 && self.cond3
    }
}

/// Guards shared by the properness pipeline: finite ring, no 2-torsion,
/// `M` faithful on both sides.
pub fn properness_guards(g: &GMAlgebra) -> Result<()> {
    let ring = g.ring();
    if !ring.is_enumerable() {
        return Err(Error::NotEnumerable);
    }
    if !ring.is_two_torsion_free() {
        return Err(Error::TwoTorsion);
    }
    let f = check_faithful(g.context());
    if !f.both() {
        return Err(Error::NotFaithful {
            left: f.left_faithful,
            right: f.right_faithful,
        });
    }
    Ok(())
}

/// Residues `1, 2, …, n-1, 0` per coordinate, odometer order, most
/// significant coordinate first.
struct RotatedVectors {
    n: u64,
    digits: Option<Vec<u64>>,
}

impl Iterator for RotatedVectors {
    type Item = Vec<Scalar>;

    fn next(&mut self) -> Option<Vec<Scalar>> {
        let cur = self.digits.take()?;
        let mut succ = cur.clone();
        let mut carry = true;
        for d in succ.iter_mut().rev() {
            *d += 1;
            if *d == self.n {
                *d = 0;
            } else {
                carry = false;
                break;
            }
        }
        if !carry {
            self.digits = Some(succ);
        }
        Some(cur.iter().map(|&d| Scalar::Residue((d + 1) % self.n)).collect())
    }
}

/// `{diag(a, b) : a ∈ Z(A), b ∈ Z(B), am0 = m0b, n0a = bn0}`.
fn witness_set(g: &GMAlgebra, m0: &Element, n0: &Element) -> Submodule {
    let ctx = g.context();
    let ring = *g.ring();
    let [da, dm, dn, db] = g.layout().dims;
    let mut sys = LinearSystem::new(ring, da + db);
    let mut push = |cols: Vec<Element>, rows: usize| {
        for s in 0..rows {
            let row: Vec<Scalar> = cols.iter().map(|c| c.coords[s].clone()).collect();
            sys.push_homogeneous(&row).expect("width");
        }
    };
    for j in 0..da {
        let e = ctx.a.basis(j);
        let mut cols: Vec<Element> = (0..da).map(|i| ctx.a.bracket(&ctx.a.basis(i), &e).unwrap()).collect();
        cols.extend((0..db).map(|_| Element::zero(&ring, da)));
        push(cols, da);
    }
    for j in 0..db {
        let e = ctx.b.basis(j);
        let mut cols: Vec<Element> = (0..da).map(|_| Element::zero(&ring, db)).collect();
        cols.extend((0..db).map(|i| ctx.b.bracket(&ctx.b.basis(i), &e).unwrap()));
        push(cols, db);
    }
    if dm > 0 {
        let mut cols: Vec<Element> = (0..da).map(|i| ctx.a_m(&ctx.a.basis(i), m0)).collect();
        cols.extend((0..db).map(|i| ctx.m_b(m0, &ctx.b.basis(i)).neg(&ring)));
        push(cols, dm);
    }
    if dn > 0 {
        let mut cols: Vec<Element> = (0..da).map(|i| ctx.n_a(n0, &ctx.a.basis(i))).collect();
        cols.extend((0..db).map(|i| ctx.b_n(&ctx.b.basis(i), n0).neg(&ring)));
        push(cols, dn);
    }
    let gens = sys
        .kernel()
        .into_iter()
        .map(|v| g.diag(&Element::new(v[..da].to_vec()), &Element::new(v[da..].to_vec())))
        .collect();
    Submodule::span(ring, g.dim(), gens)
}

/// Checks the three conditions under which every k-commuting map is proper.
/// The `(m0, n0)` search runs through each coordinate in the order
/// `1, 2, …, n-1, 0`, `m0` before `n0`, and stops at the first hit.
pub fn check_properness_hypotheses(g: &GMAlgebra, k: usize) -> Result<HypothesisWitness> {
    check_k(k)?;
    properness_guards(g)?;
    let ctx = g.context();
    let p = pi_projections(g);
    let cond1 = ctx.a.zk_set(k)?.same_as(&p.pi_a);
    let cond2 = ctx.b.zk_set(k)?.same_as(&p.pi_b);
    let center = g.algebra().center();
    let ring = *g.ring();
    let [_, dm, dn, _] = g.layout().dims;
    let n = ring.modulus().expect("enumerable");
    let total = (n as u128).saturating_pow((dm + dn) as u32);
    if total > WITNESS_SEARCH_LIMIT {
        return Err(Error::BudgetExceeded {
            size: total,
            budget: WITNESS_SEARCH_LIMIT,
        });
    }
    let candidates = RotatedVectors {
        n,
        digits: Some(vec![0; dm + dn]),
    };
    let mut found = None;
    for v in candidates {
        let m0 = Element::new(v[..dm].to_vec());
        let n0 = Element::new(v[dm..].to_vec());
        if witness_set(g, &m0, &n0).same_as(&center) {
            found = Some((m0, n0));
            break;
        }
    }
    Ok(HypothesisWitness {
        cond1,
        cond2,
        cond3: found.is_some(),
        m0: found.as_ref().map(|(m, _)| m.coords.clone()),
        n0: found.map(|(_, n)| n.coords),
    })
}

/// `C` central and `Ω(X) = Θ(X) - XC` with central values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProperFormResult {
    pub c: Element,
    pub omega: LinMap,
}

impl ProperFormResult {
    pub fn certificate(&self) -> PropernessCertificate {
        PropernessCertificate {
            lambda: self.c.clone(),
            zeta: self.omega.clone(),
            free_generators: 0,
        }
    }
}

/// Everything the proper-form construction needs that does not depend on
/// the map, computed once per `(G, k)`.
pub struct ProperFormPipeline<'g> {
    g: &'g GMAlgebra,
    k: usize,
    pub hypotheses: HypothesisWitness,
    center: Submodule,
    iso: CenterIso,
    /// k-commuting maps; membership is the k-commuting test.
    space: Submodule,
    /// `φ⁻¹`, as the center isomorphism of the swapped context.
    iso_inverse: CenterIso,
}

impl<'g> ProperFormPipeline<'g> {
    pub fn new(g: &'g GMAlgebra, k: usize) -> Result<Self> {
        let hypotheses = check_properness_hypotheses(g, k)?;
        if !hypotheses.all() {
            return Err(Error::HypothesesNotMet(format!(
                "cond1 = {}, cond2 = {}, cond3 = {}",
                hypotheses.cond1, hypotheses.cond2, hypotheses.cond3
            )));
        }
        let iso = center_iso_phi(g)?;
        Ok(ProperFormPipeline {
            g,
            k,
            hypotheses,
            center: g.algebra().center(),
            iso_inverse: iso.inverse_map()?,
            iso,
            space: commuting_space(g.algebra(), k)?,
        })
    }

    fn require_commuting(&self, theta: &LinMap) -> Result<()> {
        check_map(self.g.algebra(), theta)?;
        if self.space.contains(&theta.to_vector()) {
            return Ok(());
        }
        let kc = is_k_commuting(self.g.algebra(), theta, self.k)?;
        match kc.witness {
            Some(w) => Err(Error::NotKCommuting {
                k: self.k,
                witness: self.g.algebra().format_element(&w),
            }),
            None => Ok(()),
        }
    }

    /// `C = diag(δ1(1) - φ⁻¹(μ1(1)), φ(δ1(1)) - μ1(1))` and `Ω = Θ - R_C`.
    pub fn construct(&self, theta: &LinMap) -> Result<ProperFormResult> {
        self.require_commuting(theta)?;
        let g = self.g;
        let ring = *g.ring();
        let alg = g.algebra();
        let dec = decompose(g, theta)?;
        let one_a = g.context().a.unit()?;
        let d1 = dec.delta(1).apply(&ring, one_a);
        let u1 = dec.mu(1).apply(&ring, one_a);
        let violation = |e: Error| match e {
            Error::NoSolution(s) => Error::TheoremViolation(s),
            other => other,
        };
        let ca = d1.sub(&ring, &self.iso_inverse.apply(&u1).map_err(violation)?);
        let cb = self.iso.apply(&d1).map_err(violation)?.sub(&ring, &u1);
        let c = g.diag(&ca, &cb);
        if !self.center.contains(&c) {
            return Err(Error::TheoremViolation(format!("C = {} is not central", alg.format_element(&c))));
        }
        let omega = theta.sub(&ring, &alg.right_mul_map(&c)?);
        if let Some(j) = (0..g.dim()).find(|&j| !self.center.contains(&omega.column(j))) {
            return Err(Error::TheoremViolation(format!(
                "Ω({}) = {} is not central",
                alg.labels()[j],
                alg.format_element(&omega.column(j))
            )));
        }
        Ok(ProperFormResult { c, omega })
    }

    pub fn steps(&self, theta: &LinMap) -> Result<Report> {
        self.require_commuting(theta)?;
        Ok(check_step_invariants_with(self.g, &decompose(self.g, theta)?, &self.center))
    }
}

pub fn construct_proper_form(g: &GMAlgebra, theta: &LinMap, k: usize) -> Result<ProperFormResult> {
    ProperFormPipeline::new(g, k)?.construct(theta)
}

pub fn verify_step_invariants(g: &GMAlgebra, theta: &LinMap, k: usize) -> Result<Report> {
    ProperFormPipeline::new(g, k)?.steps(theta)
}

/// The intermediate identities of the proper-form construction, evaluated on
/// an arbitrary decomposition (so a corrupted one can be fed in).
pub fn check_step_invariants(g: &GMAlgebra, dec: &BlockDecomposition) -> Report {
    check_step_invariants_with(g, dec, &g.algebra().center())
}

fn check_step_invariants_with(g: &GMAlgebra, dec: &BlockDecomposition, center: &Submodule) -> Report {
    let ctx = g.context();
    let o = Ops::new(g);
    let ring = o.ring;
    let mut rep = Report::new("proper-form invariants");
    let one_a = ctx.a.unit().expect("unital").clone();
    let one_b = ctx.b.unit().expect("unital").clone();
    let d1 = dec.delta(1).apply(&ring, &one_a);
    let d4 = dec.delta(4).apply(&ring, &one_b);
    let u1 = dec.mu(1).apply(&ring, &one_a);
    let u4 = dec.mu(4).apply(&ring, &one_b);
    let (delta2, delta3, mu2, mu3) = (dec.delta(2), dec.delta(3), dec.mu(2), dec.mu(3));
    let m_basis = o.vectors(Block::M);
    let n_basis = o.vectors(Block::N);
    let a_basis = o.vectors(Block::A);
    let b_basis = o.vectors(Block::B);
    let fm = |m: &Element| format!("m = {}", o.fmt(Block::M, m));
    let fnn = |n: &Element| format!("n = {}", o.fmt(Block::N, n));

    let ms = quadratic_points(&ring, g.layout().dim(Block::M));
    let w = first_bad(&ms, |m| o.am(&delta2.apply(&ring, m), m) != o.mb(m, &mu2.apply(&ring, m)), fm);
    rep.check("m-quadratic", "δ2(m)m = mμ2(m)", w);
    let ns = quadratic_points(&ring, g.layout().dim(Block::N));
    let w = first_bad(&ns, |n| o.na(n, &delta3.apply(&ring, n)) != o.bn(&mu3.apply(&ring, n), n), fnn);
    rep.check("n-quadratic", "nδ3(n) = μ3(n)n", w);

    let w = (!o.in_center(center, &o.add(&d1, &d4), &o.add(&u1, &u4))).then(|| {
        format!("δ1(1) + δ4(1) = {}", o.fmt(Block::A, &o.add(&d1, &d4)))
    });
    rep.check("unit-sum-central", "diag(δ1(1) + δ4(1), μ1(1) + μ4(1)) ∈ Z(G)", w);

    let tau2 = dec.tau(2);
    let w = first_bad(
        &m_basis,
        |m| {
            let t = tau2.apply(&ring, m);
            t != o.sub(&o.am(&d1, m), &o.mb(m, &u1)) || t != o.sub(&o.mb(m, &u4), &o.am(&d4, m))
        },
        fm,
    );
    rep.check("tau2-explicit", "τ2(m) = δ1(1)m - mμ1(1) = mμ4(1) - δ4(1)m", w);
    let nu3 = dec.nu(3);
    let w = first_bad(
        &n_basis,
        |n| {
            let v = nu3.apply(&ring, n);
            v != o.sub(&o.na(n, &d1), &o.bn(&u1, n)) || v != o.sub(&o.bn(&u4, n), &o.na(n, &d4))
        },
        fnn,
    );
    rep.check("nu3-explicit", "ν3(n) = nδ1(1) - μ1(1)n = μ4(1)n - nδ4(1)", w);

    let mn: Vec<(Element, Element)> = m_basis
        .iter()
        .flat_map(|m| n_basis.iter().map(move |n| (m.clone(), n.clone())))
        .collect();
    let fmn = |(m, n): &(Element, Element)| format!("m = {}, n = {}", o.fmt(Block::M, m), o.fmt(Block::N, n));
    let w = first_bad(&mn, |(m, n)| o.am(&delta3.apply(&ring, n), m) != o.mb(m, &mu3.apply(&ring, n)), fmn);
    rep.check("delta3-mu3-on-m", "δ3(n)m = mμ3(n)", w);
    let w = first_bad(&mn, |(m, n)| o.bn(&mu2.apply(&ring, m), n) != o.na(n, &delta2.apply(&ring, m)), fmn);
    rep.check("mu2-delta2-on-n", "μ2(m)n = nδ2(m)", w);

    let w = first_bad(
        &m_basis,
        |m| !o.in_center(center, &delta2.apply(&ring, m), &mu2.apply(&ring, m)),
        fm,
    );
    rep.check("m-diagonal-central", "diag(δ2(m), μ2(m)) ∈ Z(G)", w);
    let w = first_bad(
        &n_basis,
        |n| !o.in_center(center, &delta3.apply(&ring, n), &mu3.apply(&ring, n)),
        fnn,
    );
    rep.check("n-diagonal-central", "diag(δ3(n), μ3(n)) ∈ Z(G)", w);

    let (delta1, mu1, delta4, mu4) = (dec.delta(1), dec.mu(1), dec.delta(4), dec.mu(4));
    let am_pairs: Vec<(Element, Element)> = a_basis
        .iter()
        .flat_map(|a| m_basis.iter().map(move |m| (a.clone(), m.clone())))
        .collect();
    let w = first_bad(
        &am_pairs,
        |(a, m)| {
            let lhs = o.sub(&o.am(&delta1.apply(&ring, a), m), &o.mb(m, &mu1.apply(&ring, a)));
            let rhs = o.am(a, &o.sub(&o.am(&d1, m), &o.mb(m, &u1)));
            lhs != rhs
        },
        |(a, m)| format!("a = {}, m = {}", o.fmt(Block::A, a), o.fmt(Block::M, m)),
    );
    rep.check("delta1-mu1-on-m", "δ1(a)m - mμ1(a) = a(δ1(1)m - mμ1(1))", w);
    let an_pairs: Vec<(Element, Element)> = a_basis
        .iter()
        .flat_map(|a| n_basis.iter().map(move |n| (a.clone(), n.clone())))
        .collect();
    let w = first_bad(
        &an_pairs,
        |(a, n)| {
            let lhs = o.na(&o.sub(&o.na(n, &d1), &o.bn(&u1, n)), a);
            let rhs = o.sub(&o.na(n, &delta1.apply(&ring, a)), &o.bn(&mu1.apply(&ring, a), n));
            lhs != rhs || rhs != o.na(&o.sub(&o.bn(&u4, n), &o.na(n, &d4)), a)
        },
        |(a, n)| format!("a = {}, n = {}", o.fmt(Block::A, a), o.fmt(Block::N, n)),
    );
    rep.check("delta1-mu1-on-n", "(nδ1(1) - μ1(1)n)a = (μ4(1)n - nδ4(1))a = nδ1(a) - μ1(a)n", w);

    let bm_pairs: Vec<(Element, Element)> = b_basis
        .iter()
        .flat_map(|b| m_basis.iter().map(move |m| (b.clone(), m.clone())))
        .collect();
    let w = first_bad(
        &bm_pairs,
        |(b, m)| {
            let lhs = o.sub(&o.am(&delta4.apply(&ring, b), m), &o.mb(m, &mu4.apply(&ring, b)));
            let rhs = o.mb(&o.sub(&o.mb(m, &u1), &o.am(&d1, m)), b);
            lhs != rhs || lhs != o.mb(&o.sub(&o.am(&d4, m), &o.mb(m, &u4)), b)
        },
        |(b, m)| format!("b = {}, m = {}", o.fmt(Block::B, b), o.fmt(Block::M, m)),
    );
    rep.check("delta4-mu4-on-m", "δ4(b)m - mμ4(b) = (mμ1(1) - δ1(1)m)b = (δ4(1)m - mμ4(1))b", w);
    let bn_pairs: Vec<(Element, Element)> = b_basis
        .iter()
        .flat_map(|b| n_basis.iter().map(move |n| (b.clone(), n.clone())))
        .collect();
    let w = first_bad(
        &bn_pairs,
        |(b, n)| {
            let lhs = o.sub(&o.na(n, &delta4.apply(&ring, b)), &o.bn(&mu4.apply(&ring, b), n));
            let rhs = o.bn(b, &o.sub(&o.bn(&u1, n), &o.na(n, &d1)));
            lhs != rhs || lhs != o.bn(b, &o.sub(&o.na(n, &d4), &o.bn(&u4, n)))
        },
        |(b, n)| format!("b = {}, n = {}", o.fmt(Block::B, b), o.fmt(Block::N, n)),
    );
    rep.check("delta4-mu4-on-n", "nδ4(b) - μ4(b)n = b(μ1(1)n - nδ1(1)) = b(nδ4(1) - μ4(1)n)", w);
    rep
}

/// Whether `Z(A)_k = R·1` and `Z(B)_k = R·1`, in which case every k-commuting
/// map of `G` is proper.
pub fn engel_sets_trivial(g: &GMAlgebra, k: usize) -> Result<bool> {
    check_k(k)?;
    let ctx = g.context();
    let ring = *g.ring();
    let scalars = |alg: &Algebra| -> Result<Submodule> {
        Ok(Submodule::span(ring, alg.dim(), vec![alg.unit()?.clone()]))
    };
    Ok(ctx.a.zk_set(k)?.same_as(&scalars(&ctx.a)?) && ctx.b.zk_set(k)?.same_as(&scalars(&ctx.b)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    fn z3() -> RingSpec {
        RingSpec::zmod(3).unwrap()
    }

    fn m2() -> GMAlgebra {
        families::full_matrix_gma(z3(), 2, 1).unwrap()
    }

    fn ident(g: &GMAlgebra) -> LinMap {
        LinMap::identity(g.ring(), g.dim())
    }

    #[test]
    fn identity_commutes() {
        let g = m2();
        for k in 1..=3 {
            assert!(is_k_commuting(g.algebra(), &ident(&g), k).unwrap().holds);
        }
        assert!(matches!(
            is_k_commuting(g.algebra(), &ident(&g), 0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn left_multiplication_by_e11_fails() {
        let g = m2();
        let alg = g.algebra();
        let theta = alg.left_mul_map(&alg.basis(0)).unwrap();
        let r = is_k_commuting(alg, &theta, 1).unwrap();
        assert!(!r.holds);
        // Lexicographic order, first coordinate most significant: the first
        // failing x is E12 + E22, i.e. (0, 0, 0, 1) precedes it and commutes.
        let w = r.witness.unwrap();
        assert_eq!(alg.format_element(&w), "M:E12 + B:E22");
        assert!(properness_certificate(alg, &theta).unwrap().is_none());
    }

    #[test]
    fn commuting_space_of_m2() {
        let g = m2();
        let space = commuting_space(g.algebra(), 1).unwrap();
        assert_eq!(space.cardinality(), Some(243));
        for th in space_maps(&space, 4).unwrap() {
            assert!(is_k_commuting(g.algebra(), &th, 1).unwrap().holds);
        }
        let s2 = commuting_space(g.algebra(), 2).unwrap();
        assert!(space.is_subset_of(&s2));
    }

    #[test]
    fn commutative_algebra_space_is_everything() {
        let a = families::diagonal_algebra(z3(), 2).unwrap();
        let s = commuting_space(&a, 2).unwrap();
        assert_eq!(s.cardinality(), Some(81));
    }

    #[test]
    fn rationals_commuting_by_polarization() {
        let g = families::full_matrix_gma(RingSpec::Rationals, 2, 1).unwrap();
        let alg = g.algebra();
        assert!(is_k_commuting(alg, &ident(&g), 1).unwrap().holds);
        let theta = alg.left_mul_map(&alg.basis(0)).unwrap();
        assert!(!is_k_commuting(alg, &theta, 1).unwrap().holds);
        assert!(matches!(is_k_commuting(alg, &theta, 2), Err(Error::NotEnumerable)));
        let space = commuting_space(alg, 1).unwrap();
        assert_eq!(space.generators().len(), 5);
    }

    #[test]
    fn certificates() {
        let g = m2();
        let alg = g.algebra();
        let two = ident(&g).scale(alg.ring(), &Scalar::Residue(2));
        let cert = properness_certificate(alg, &two).unwrap().unwrap();
        assert_eq!(cert.lambda, alg.unit().unwrap().scale(alg.ring(), &Scalar::Residue(2)));
        assert!(cert.zeta.is_zero(alg.ring()));
        assert_eq!(cert.reassemble(alg).unwrap(), two);
        assert!(cert.is_valid(alg));
    }

    #[test]
    fn decomposition_of_identity_and_zero() {
        let g = m2();
        let dec = decompose(&g, &ident(&g)).unwrap();
        for t in Block::ALL {
            for s in Block::ALL {
                let bm = dec.get(t, s);
                if t == s {
                    assert_eq!(bm.to_linmap().unwrap(), LinMap::identity(g.ring(), bm.rows));
                } else {
                    assert!(bm.is_zero(g.ring()));
                }
            }
        }
        assert_eq!(dec.reassemble(), ident(&g));
        let zero = LinMap::zero(g.ring(), 4);
        let dz = decompose(&g, &zero).unwrap();
        assert!(dz.blocks.iter().flatten().all(|b| b.is_zero(g.ring())));
    }

    #[test]
    fn decomposition_of_right_multiplication() {
        let t = families::triangular_gma(z3(), 2, 1).unwrap();
        let alg = t.algebra();
        let e = t.diag(&t.context().a.unit().unwrap().clone(), &t.zero_in(Block::B));
        let theta = alg.right_mul_map(&e).unwrap();
        let dec = decompose(&t, &theta).unwrap();
        let r = t.ring();
        assert_eq!(dec.delta(1).to_linmap().unwrap(), LinMap::identity(r, 1));
        assert!(dec.tau(2).is_zero(r));
        assert!(dec.mu(4).is_zero(r));
        let nonzero = dec.blocks.iter().flatten().filter(|b| !b.is_zero(r)).count();
        assert_eq!(nonzero, 1);
    }

    #[test]
    fn structure_of_identity() {
        let g = m2();
        let rep = verify_block_structure(&g, &ident(&g), 2).unwrap();
        assert!(rep.all_passed(), "{rep:?}");
        assert_eq!(rep.lines.len(), 20);
        let alg = g.algebra();
        let bad = alg.left_mul_map(&alg.basis(0)).unwrap();
        assert!(matches!(
            verify_block_structure(&g, &bad, 1),
            Err(Error::NotKCommuting { .. })
        ));
    }

    #[test]
    fn hypotheses_on_full_and_triangular() {
        let one = Some(vec![Scalar::Residue(1)]);
        let h = check_properness_hypotheses(&m2(), 2).unwrap();
        assert!(h.all());
        assert_eq!(h.m0, one);
        assert_eq!(h.n0, one);
        let t = families::triangular_gma(z3(), 2, 1).unwrap();
        let h = check_properness_hypotheses(&t, 1).unwrap();
        assert!(h.all());
        assert_eq!(h.m0, one);
        assert_eq!(h.n0, Some(vec![]));
    }

    #[test]
    fn hypothesis_guards() {
        let g = families::full_matrix_gma(RingSpec::zmod(4).unwrap(), 2, 1).unwrap();
        assert!(matches!(check_properness_hypotheses(&g, 1), Err(Error::TwoTorsion)));
        let g = families::full_matrix_gma(RingSpec::Rationals, 2, 1).unwrap();
        assert!(matches!(check_properness_hypotheses(&g, 1), Err(Error::NotEnumerable)));
        let g = crate::morita::build_gma(&families::projection_context(z3()).unwrap()).unwrap();
        assert!(matches!(check_properness_hypotheses(&g, 1), Err(Error::NotFaithful { .. })));
    }

    #[test]
    fn proper_form_of_identity() {
        let g = m2();
        let r = construct_proper_form(&g, &ident(&g), 1).unwrap();
        assert_eq!(&r.c, g.algebra().unit().unwrap());
        assert!(r.omega.is_zero(g.ring()));
        assert!(verify_step_invariants(&g, &ident(&g), 1).unwrap().all_passed());
    }

    #[test]
    fn proper_form_of_central_valued_map() {
        // ζ(x) = (coefficient of E12 in x)·1.
        let g = m2();
        let mut zeta = LinMap::zero(g.ring(), 4);
        zeta.set(0, 1, Scalar::Residue(1));
        zeta.set(3, 1, Scalar::Residue(1));
        let r = construct_proper_form(&g, &zeta, 2).unwrap();
        assert!(r.c.is_zero(g.ring()));
        assert_eq!(r.omega, zeta);
    }

    #[test]
    fn corrupted_delta2_fails_the_quadratic_line() {
        let g = m2();
        let mut dec = decompose(&g, &ident(&g)).unwrap();
        dec.get_mut(Block::A, Block::M).set(0, 0, Scalar::Residue(1));
        let rep = check_step_invariants(&g, &dec);
        let line = rep.line("m-quadratic").unwrap();
        assert!(!line.passed);
        assert_eq!(line.witness.as_deref(), Some("m = M:E12"));
        assert!(check_step_invariants(&g, &decompose(&g, &ident(&g)).unwrap()).all_passed());
    }

    #[test]
    fn engel_trivial() {
        assert!(engel_sets_trivial(&m2(), 2).unwrap());
        let b = families::block_triangular_gma(z3(), &[2, 1], 1).unwrap();
        assert!(engel_sets_trivial(&b, 3).unwrap());
        let sw = families::triangular_gma(z3(), 3, 2).unwrap();
        assert!(engel_sets_trivial(&sw, 2).unwrap());
    }

    #[test]
    fn engel_nontrivial_for_commutative_corner() {
        let ctx = families::projection_context(z3()).unwrap();
        let g = crate::morita::build_gma(&ctx).unwrap();
        assert!(!engel_sets_trivial(&g, 1).unwrap());
    }
}
