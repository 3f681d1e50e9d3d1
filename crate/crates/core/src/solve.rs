//! Exact linear systems over the coefficient rings.
//!
//! Fields (`Q` and prime `Z/p`) use incremental Gaussian elimination. Composite
//! `Z/n` keeps the row module in Hermite-like echelon form while rows stream in,
//! then solves through a Smith normal form `U·A·V = D` with explicit
//! unimodular transforms. Kernel generators come out in pivot order, so the
//! output is reproducible.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::ring::{RingSpec, Scalar};

/// Dense row-major matrix of canonical scalars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(ring: &RingSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![ring.zero(); rows * cols],
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let nrows = rows.len();
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: nrows,
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
}

/// All solutions of `A x = b`: `particular + span(kernel)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionSet {
    pub particular: Vec<Scalar>,
    pub kernel: Vec<Vec<Scalar>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Inconsistent,
    Solved(SolutionSet),
}

impl Solution {
    pub fn solved(self) -> Option<SolutionSet> {
        match self {
            Solution::Solved(s) => Some(s),
            Solution::Inconsistent => None,
        }
    }

    pub fn is_consistent(&self) -> bool {
        matches!(self, Solution::Solved(_))
    }
}

pub fn solve_linear(ring: &RingSpec, a: &Matrix, b: &[Scalar]) -> Result<Solution> {
    if b.len() != a.rows {
        return Err(Error::DimensionMismatch {
            expected: a.rows,
            found: b.len(),
        });
    }
    let mut sys = LinearSystem::new(*ring, a.cols);
    for (r, rhs) in b.iter().enumerate() {
        sys.push(a.row(r), rhs)?;
    }
    Ok(sys.solve())
}

/// Generators of `{x : A x = 0}`.
pub fn kernel(ring: &RingSpec, a: &Matrix) -> Vec<Vec<Scalar>> {
    let mut sys = LinearSystem::new(*ring, a.cols);
    for r in 0..a.rows {
        sys.push_homogeneous(a.row(r))
            .expect("matrix rows have matching width");
    }
    sys.kernel()
}

/// A linear system that accepts equations one at a time and keeps its row
/// space compressed, so enumerative sweeps can feed thousands of rows.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    ring: RingSpec,
    unknowns: usize,
    state: State,
}

#[derive(Clone, Debug)]
enum State {
    /// Echelon rows (augmented), sorted by pivot column, pivot entry 1.
    Field(Vec<(usize, Vec<Scalar>)>),
    /// Augmented residue rows over composite `Z/n`.
    Module { n: u64, rows: Vec<Vec<u64>> },
}

impl LinearSystem {
    pub fn new(ring: RingSpec, unknowns: usize) -> Self {
        let state = match ring {
            RingSpec::Zmod { n } if !ring.is_field() => State::Module {
                n,
                rows: Vec::new(),
            },
            _ => State::Field(Vec::new()),
        };
        LinearSystem {
            ring,
            unknowns,
            state,
        }
    }

    pub fn unknowns(&self) -> usize {
        self.unknowns
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn push_homogeneous(&mut self, coeffs: &[Scalar]) -> Result<()> {
        let zero = self.ring.zero();
        self.push(coeffs, &zero)
    }

    pub fn push(&mut self, coeffs: &[Scalar], rhs: &Scalar) -> Result<()> {
        if coeffs.len() != self.unknowns {
            return Err(Error::DimensionMismatch {
                expected: self.unknowns,
                found: coeffs.len(),
            });
        }
        let ring = self.ring;
        let width = self.unknowns + 1;
        match &mut self.state {
            State::Field(pivots) => {
                let mut row: Vec<Scalar> = coeffs.to_vec();
                row.push(rhs.clone());
                reduce_against(&ring, pivots, &mut row);
                if let Some(lead) = row.iter().position(|x| !ring.is_zero(x)) {
                    let inv = ring.inv(&row[lead]).expect("field element is a unit");
                    for x in row.iter_mut().skip(lead) {
                        *x = ring.mul(x, &inv);
                    }
                    let at = pivots.partition_point(|(p, _)| *p < lead);
                    pivots.insert(at, (lead, row));
                }
            }
            State::Module { n, rows } => {
                let mut row: Vec<u64> = coeffs
                    .iter()
                    .map(|x| ring.residue(x).expect("residue"))
                    .collect();
                row.push(ring.residue(rhs).expect("residue"));
                if row.iter().any(|&x| x != 0) {
                    rows.push(row);
                }
                if rows.len() > 2 * width + 16 {
                    let compact = hermite_rows(*n, std::mem::take(rows), width);
                    *rows = compact;
                }
            }
        }
        Ok(())
    }

    /// Number of independent equations currently held (echelon rows).
    pub fn rank_hint(&self) -> usize {
        match &self.state {
            State::Field(p) => p.len(),
            State::Module { n, rows } => hermite_rows(*n, rows.clone(), self.unknowns + 1).len(),
        }
    }

    pub fn solve(&self) -> Solution {
        match &self.state {
            State::Field(pivots) => solve_field(&self.ring, self.unknowns, pivots),
            State::Module { n, rows } => solve_module(*n, self.unknowns, rows),
        }
    }

    /// Generators of the homogeneous solution module.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        match self.solve() {
            Solution::Solved(s) => s.kernel,
            // Only reachable with a nonzero right-hand side; the homogeneous
            // part is still well defined.
            Solution::Inconsistent => self.homogeneous().kernel(),
        }
    }

    fn homogeneous(&self) -> LinearSystem {
        let mut copy = self.clone();
        match &mut copy.state {
            State::Field(pivots) => {
                let rows: Vec<Vec<Scalar>> = pivots.drain(..).map(|(_, r)| r).collect();
                for mut r in rows {
                    r.pop();
                    copy.push_homogeneous(&r).expect("width");
                }
            }
            State::Module { rows, .. } => {
                for r in rows.iter_mut() {
                    *r.last_mut().expect("augmented") = 0;
                }
            }
        }
        copy
    }
}

fn reduce_against(ring: &RingSpec, pivots: &[(usize, Vec<Scalar>)], row: &mut [Scalar]) {
    for (p, prow) in pivots {
        if ring.is_zero(&row[*p]) {
            continue;
        }
        let f = row[*p].clone();
        for c in *p..row.len() {
            if !ring.is_zero(&prow[c]) {
                row[c] = ring.sub(&row[c], &ring.mul(&f, &prow[c]));
            }
        }
    }
}

fn solve_field(ring: &RingSpec, unknowns: usize, pivots: &[(usize, Vec<Scalar>)]) -> Solution {
    if pivots.iter().any(|(p, _)| *p == unknowns) {
        return Solution::Inconsistent;
    }
    // Back-substitute to reduced row echelon form.
    let mut rows: Vec<(usize, Vec<Scalar>)> = pivots.to_vec();
    for i in (0..rows.len()).rev() {
        let (p, prow) = rows[i].clone();
        for (_, other) in rows.iter_mut().take(i) {
            if ring.is_zero(&other[p]) {
                continue;
            }
            let f = other[p].clone();
            for c in p..other.len() {
                if !ring.is_zero(&prow[c]) {
                    other[c] = ring.sub(&other[c], &ring.mul(&f, &prow[c]));
                }
            }
        }
    }
    let mut particular = vec![ring.zero(); unknowns];
    let mut is_pivot = vec![false; unknowns];
    for (p, row) in &rows {
        is_pivot[*p] = true;
        particular[*p] = row[unknowns].clone();
    }
    let kernel = (0..unknowns)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![ring.zero(); unknowns];
            v[f] = ring.one();
            for (p, row) in &rows {
                v[*p] = ring.neg(&row[f]);
            }
            v
        })
        .collect();
    Solution::Solved(SolutionSet { particular, kernel })
}

fn solve_module(n: u64, unknowns: usize, rows: &[Vec<u64>]) -> Solution {
    let rows = hermite_rows(n, rows.to_vec(), unknowns + 1);
    let a: Vec<Vec<u64>> = rows.iter().map(|r| r[..unknowns].to_vec()).collect();
    let b: Vec<u64> = rows.iter().map(|r| r[unknowns]).collect();
    let snf = SmithForm::compute(n, &a, unknowns);
    let ub = snf.apply_u(&b);
    let t = snf.diagonal.len();
    if ub.iter().skip(t).any(|&x| x != 0) {
        return Solution::Inconsistent;
    }
    let mut y = vec![0u64; unknowns];
    let mut kernel_y: Vec<Vec<u64>> = Vec::new();
    for (i, &d) in snf.diagonal.iter().enumerate() {
        let g = d.gcd(&n);
        if !ub[i].is_multiple_of(g) {
            return Solution::Inconsistent;
        }
        let step = n / g;
        if step > 1 {
            let inv = mod_inverse((d / g) % step, step).expect("coprime after dividing by gcd");
            y[i] = mul_mod(ub[i] / g, inv, step);
        }
        if g > 1 {
            let mut e = vec![0u64; unknowns];
            e[i] = step % n;
            kernel_y.push(e);
        }
    }
    for i in t..unknowns {
        let mut e = vec![0u64; unknowns];
        e[i] = 1;
        kernel_y.push(e);
    }
    let to_scalars = |v: Vec<u64>| v.into_iter().map(Scalar::Residue).collect::<Vec<_>>();
    let particular = to_scalars(snf.apply_v(&y));
    let kernel = kernel_y
        .into_iter()
        .map(|e| snf.apply_v(&e))
        .filter(|v| v.iter().any(|&x| x != 0))
        .map(to_scalars)
        .collect();
    Solution::Solved(SolutionSet { particular, kernel })
}

fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

fn add_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 + b as u128) % n as u128) as u64
}

fn sub_mod(a: u64, b: u64, n: u64) -> u64 {
    add_mod(a, n - b % n, n)
}

fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(0);
    }
    let e = (a as i128).extended_gcd(&(n as i128));
    (e.gcd == 1).then(|| e.x.rem_euclid(n as i128) as u64)
}

/// `q` with `q·a ≡ b (mod n)`, when `b` lies in the ideal generated by `a`.
fn ideal_quotient(a: u64, b: u64, n: u64) -> Option<u64> {
    let g = a.gcd(&n);
    if !b.is_multiple_of(g) {
        return None;
    }
    let step = n / g;
    let inv = mod_inverse((a / g) % step, step)?;
    Some(mul_mod(b / g, inv, step))
}

/// Bezout coefficients `(g, s, u)` with `s·a + u·b = g` over the integers.
fn bezout(a: u64, b: u64) -> (u64, i128, i128) {
    let e = (a as i128).extended_gcd(&(b as i128));
    (e.gcd as u64, e.x, e.y)
}

fn reduce_i128(x: i128, n: u64) -> u64 {
    x.rem_euclid(n as i128) as u64
}

/// Replaces vectors `(x, y)` by `(s·x + u·y, -(b/g)·x + (a/g)·y)`; the
/// transform has determinant one over the integers.
fn bezout_pair(n: u64, x: &mut [u64], y: &mut [u64], a: u64, b: u64) {
    let (g, s, u) = bezout(a, b);
    let (s, u) = (reduce_i128(s, n), reduce_i128(u, n));
    let p = reduce_i128(-((b / g) as i128), n);
    let q = (a / g) % n;
    for (xi, yi) in x.iter_mut().zip(y.iter_mut()) {
        let nx = add_mod(mul_mod(s, *xi, n), mul_mod(u, *yi, n), n);
        let ny = add_mod(mul_mod(p, *xi, n), mul_mod(q, *yi, n), n);
        *xi = nx;
        *yi = ny;
    }
}

fn two_rows(m: &mut [Vec<u64>], i: usize, j: usize) -> (&mut Vec<u64>, &mut Vec<u64>) {
    assert!(i < j);
    let (lo, hi) = m.split_at_mut(j);
    (&mut lo[i], &mut hi[0])
}

/// Row-echelon form over `Z/n` using unimodular row operations only; the row
/// module (and hence the solution set of the augmented system) is preserved.
fn hermite_rows(n: u64, mut rows: Vec<Vec<u64>>, width: usize) -> Vec<Vec<u64>> {
    let mut t = 0;
    for col in 0..width {
        if t >= rows.len() {
            break;
        }
        let Some(best) = (t..rows.len())
            .filter(|&r| rows[r][col] != 0)
            .min_by_key(|&r| (rows[r][col].gcd(&n), rows[r][col]))
        else {
            continue;
        };
        rows.swap(t, best);
        for i in t + 1..rows.len() {
            let b = rows[i][col];
            if b == 0 {
                continue;
            }
            let a = rows[t][col];
            let (top, other) = two_rows(&mut rows, t, i);
            match ideal_quotient(a, b, n) {
                Some(q) => {
                    for c in col..width {
                        other[c] = sub_mod(other[c], mul_mod(q, top[c], n), n);
                    }
                }
                None => bezout_pair(n, top, other, a, b),
            }
        }
        t += 1;
    }
    rows.retain(|r| r.iter().any(|&x| x != 0));
    rows
}

/// Smith normal form `U·A·V = D` over `Z/n`: `D` is diagonal with entries
/// dividing `n` and each dividing the next.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub n: u64,
    pub u: Vec<Vec<u64>>,
    pub v: Vec<Vec<u64>>,
    /// Nonzero diagonal entries, in order; the remaining diagonal is zero.
    pub diagonal: Vec<u64>,
    rows: usize,
    cols: usize,
}

impl SmithForm {
    pub fn compute(n: u64, a: &[Vec<u64>], cols: usize) -> Self {
        let rows = a.len();
        let mut m: Vec<Vec<u64>> = a.iter().map(|r| r.iter().map(|x| x % n).collect()).collect();
        let mut u = identity(rows);
        let mut v = identity(cols);
        let mut t = 0;
        while t < rows.min(cols) {
            let mut best: Option<(usize, usize)> = None;
            for r in t..rows {
                for c in t..cols {
                    if m[r][c] == 0 {
                        continue;
                    }
                    let key = (m[r][c].gcd(&n), m[r][c]);
                    if best.is_none_or(|(br, bc)| key < (m[br][bc].gcd(&n), m[br][bc])) {
                        best = Some((r, c));
                    }
                }
            }
            let Some((pr, pc)) = best else { break };
            m.swap(t, pr);
            u.swap(t, pr);
            swap_cols(&mut m, t, pc);
            swap_cols(&mut v, t, pc);
            clear_pivot(n, &mut m, &mut u, &mut v, t);
            t += 1;
        }
        // Normalise each pivot to the divisor of n generating its ideal.
        for i in 0..t {
            let d = m[i][i];
            let g = d.gcd(&n);
            if d != g {
                let unit = unit_ratio(g, d, n);
                scale_row(n, &mut m[i], unit);
                scale_row(n, &mut u[i], unit);
            }
        }
        // Enforce the divisibility chain with gcd/lcm exchanges.
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..t {
                for j in i + 1..t {
                    if !m[j][j].is_multiple_of(m[i][i]) {
                        add_col(n, &mut m, i, j);
                        add_col(n, &mut v, i, j);
                        clear_pivot(n, &mut m, &mut u, &mut v, i);
                        for k in [i, j] {
                            let d = m[k][k];
                            let g = d.gcd(&n);
                            if d != g && d != 0 {
                                let unit = unit_ratio(g, d, n);
                                scale_row(n, &mut m[k], unit);
                                scale_row(n, &mut u[k], unit);
                            }
                        }
                        changed = true;
                    }
                }
            }
        }
        let mut diagonal: Vec<u64> = (0..t).map(|i| m[i][i]).collect();
        while diagonal.last() == Some(&0) {
            diagonal.pop();
        }
        SmithForm {
            n,
            u,
            v,
            diagonal,
            rows,
            cols,
        }
    }

    pub fn apply_u(&self, b: &[u64]) -> Vec<u64> {
        mat_vec(self.n, &self.u, b)
    }

    pub fn apply_v(&self, y: &[u64]) -> Vec<u64> {
        mat_vec(self.n, &self.v, y)
    }

    /// The diagonal matrix `D` in full.
    pub fn d(&self) -> Vec<Vec<u64>> {
        let mut d = vec![vec![0u64; self.cols]; self.rows];
        for (i, &x) in self.diagonal.iter().enumerate() {
            d[i][i] = x;
        }
        d
    }
}

/// The unit `w` with `w·d ≡ g (mod n)` where `g = gcd(d, n)`.
fn unit_ratio(g: u64, d: u64, n: u64) -> u64 {
    // Any solution q of q·d ≡ g works up to multiples of n/g; pick one that
    // is a unit modulo n.
    let q = ideal_quotient(d, g, n).expect("g lies in the ideal of d");
    let step = n / g;
    let mut w = q;
    while w.gcd(&n) != 1 {
        w = add_mod(w, step, n);
    }
    w
}

fn identity(k: usize) -> Vec<Vec<u64>> {
    (0..k)
        .map(|i| (0..k).map(|j| u64::from(i == j)).collect())
        .collect()
}

fn swap_cols(m: &mut [Vec<u64>], a: usize, b: usize) {
    if a != b {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    }
}

fn add_col(n: u64, m: &mut [Vec<u64>], dst: usize, src: usize) {
    for row in m.iter_mut() {
        row[dst] = add_mod(row[dst], row[src], n);
    }
}

fn scale_row(n: u64, row: &mut [u64], f: u64) {
    for x in row.iter_mut() {
        *x = mul_mod(*x, f, n);
    }
}

fn mat_vec(n: u64, m: &[Vec<u64>], x: &[u64]) -> Vec<u64> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .fold(0u64, |acc, (a, b)| add_mod(acc, mul_mod(*a, *b, n), n))
        })
        .collect()
}

/// Clears the column below and the row right of pivot `(t, t)`.
fn clear_pivot(n: u64, m: &mut [Vec<u64>], u: &mut [Vec<u64>], v: &mut [Vec<u64>], t: usize) {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    loop {
        for i in t + 1..rows {
            let b = m[i][t];
            if b == 0 {
                continue;
            }
            let a = m[t][t];
            match ideal_quotient(a, b, n) {
                Some(q) => {
                    let (top, other) = two_rows(m, t, i);
                    for c in 0..cols {
                        other[c] = sub_mod(other[c], mul_mod(q, top[c], n), n);
                    }
                    let (top, other) = two_rows(u, t, i);
                    for c in 0..top.len() {
                        other[c] = sub_mod(other[c], mul_mod(q, top[c], n), n);
                    }
                }
                None => {
                    let (top, other) = two_rows(m, t, i);
                    bezout_pair(n, top, other, a, b);
                    let (top, other) = two_rows(u, t, i);
                    bezout_pair(n, top, other, a, b);
                }
            }
        }
        for j in t + 1..cols {
            let b = m[t][j];
            if b == 0 {
                continue;
            }
            let a = m[t][t];
            match ideal_quotient(a, b, n) {
                Some(q) => {
                    for row in m.iter_mut().chain(v.iter_mut()) {
                        row[j] = sub_mod(row[j], mul_mod(q, row[t], n), n);
                    }
                }
                None => {
                    for row in m.iter_mut().chain(v.iter_mut()) {
                        let mut x = [row[t]];
                        let mut y = [row[j]];
                        bezout_pair(n, &mut x, &mut y, a, b);
                        row[t] = x[0];
                        row[j] = y[0];
                    }
                }
            }
        }
        if (t + 1..rows).all(|i| m[i][t] == 0) {
            break;
        }
    }
}

/// Number of elements in the `Z/n`-span of the given vectors.
pub fn span_cardinality(n: u64, generators: &[Vec<u64>], dim: usize) -> u128 {
    let snf = SmithForm::compute(n, generators, dim);
    snf.diagonal
        .iter()
        .map(|&d| (n / d.gcd(&n)) as u128)
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(n: u64) -> RingSpec {
        RingSpec::zmod(n).unwrap()
    }

    fn res(v: &[u64]) -> Vec<Scalar> {
        v.iter().copied().map(Scalar::Residue).collect()
    }

    /// Every `x` in `(Z/n)^k`, by odometer.
    fn all_vectors(n: u64, k: usize) -> Vec<Vec<u64>> {
        let mut out = vec![vec![]];
        for _ in 0..k {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..n).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out
    }

    fn span_elements(n: u64, gens: &[Vec<Scalar>], k: usize) -> std::collections::BTreeSet<Vec<u64>> {
        let mut set = std::collections::BTreeSet::new();
        set.insert(vec![0u64; k]);
        for g in gens {
            let g: Vec<u64> = g.iter().map(|x| z(n).residue(x).unwrap()).collect();
            let current: Vec<Vec<u64>> = set.iter().cloned().collect();
            for v in current {
                for c in 0..n {
                    let w: Vec<u64> = v.iter().zip(&g).map(|(a, b)| (a + c * b) % n).collect();
                    set.insert(w);
                }
            }
        }
        set
    }

    fn brute_solutions(n: u64, a: &[Vec<u64>], b: &[u64]) -> std::collections::BTreeSet<Vec<u64>> {
        let k = a.first().map_or(0, |r| r.len());
        all_vectors(n, k)
            .into_iter()
            .filter(|x| {
                a.iter().zip(b).all(|(row, rhs)| {
                    row.iter().zip(x).map(|(p, q)| p * q).sum::<u64>() % n == *rhs
                })
            })
            .collect()
    }

    fn solution_elements(n: u64, s: &SolutionSet) -> std::collections::BTreeSet<Vec<u64>> {
        let k = s.particular.len();
        let p: Vec<u64> = s.particular.iter().map(|x| z(n).residue(x).unwrap()).collect();
        span_elements(n, &s.kernel, k)
            .into_iter()
            .map(|v| v.iter().zip(&p).map(|(a, b)| (a + b) % n).collect())
            .collect()
    }

    #[test]
    fn two_x_equals_two_mod_four() {
        let a = Matrix::from_rows(1, vec![res(&[2])]).unwrap();
        let sol = solve_linear(&z(4), &a, &res(&[2])).unwrap().solved().unwrap();
        let all = solution_elements(4, &sol);
        assert_eq!(all, [vec![1], vec![3]].into_iter().collect());
    }

    #[test]
    fn rational_unique_solution() {
        let q = RingSpec::Rationals;
        let one = q.one();
        let a = Matrix::from_rows(2, vec![vec![one.clone(), one.clone()], vec![one.clone(), q.neg(&one)]])
            .unwrap();
        let sol = solve_linear(&q, &a, &[one.clone(), one.clone()])
            .unwrap()
            .solved()
            .unwrap();
        assert_eq!(sol.particular, vec![one, q.zero()]);
        assert!(sol.kernel.is_empty());
    }

    #[test]
    fn inconsistent_system() {
        let a = Matrix::from_rows(1, vec![res(&[0])]).unwrap();
        assert_eq!(
            solve_linear(&z(3), &a, &res(&[1])).unwrap(),
            Solution::Inconsistent
        );
    }

    #[test]
    fn dimension_mismatch() {
        let a = Matrix::from_rows(1, vec![res(&[1])]).unwrap();
        assert!(solve_linear(&z(3), &a, &res(&[1, 2])).is_err());
        assert!(Matrix::from_rows(2, vec![res(&[1])]).is_err());
    }

    #[test]
    fn smith_form_reconstructs() {
        let n = 12;
        let a = vec![vec![4, 6, 2], vec![3, 9, 0], vec![8, 0, 6]];
        let snf = SmithForm::compute(n, &a, 3);
        let mul = |x: &[Vec<u64>], y: &[Vec<u64>]| -> Vec<Vec<u64>> {
            x.iter()
                .map(|row| {
                    (0..y[0].len())
                        .map(|j| row.iter().zip(y).map(|(p, r)| p * r[j]).sum::<u64>() % n)
                        .collect()
                })
                .collect()
        };
        assert_eq!(mul(&mul(&snf.u, &a), &snf.v), snf.d());
        for w in snf.diagonal.windows(2) {
            assert_eq!(w[1] % w[0], 0);
        }
        for d in &snf.diagonal {
            assert_eq!(n % d, 0);
        }
    }

    #[test]
    fn streaming_compression_keeps_solutions() {
        // Many redundant rows force the composite path to compress repeatedly.
        let n = 6;
        let mut sys = LinearSystem::new(z(n), 3);
        let mut rows = Vec::new();
        for i in 0..60u64 {
            let row = vec![(2 * i) % n, (3 * i + 1) % n, i % 2];
            let rhs = (row[0] + 2 * row[1] + 5 * row[2]) % n;
            sys.push(&res(&row), &Scalar::Residue(rhs)).unwrap();
            rows.push((row, rhs));
        }
        let a: Vec<Vec<u64>> = rows.iter().map(|r| r.0.clone()).collect();
        let b: Vec<u64> = rows.iter().map(|r| r.1).collect();
        let sol = sys.solve().solved().unwrap();
        assert_eq!(solution_elements(n, &sol), brute_solutions(n, &a, &b));
    }

    fn small_system() -> impl Strategy<Value = (u64, Vec<Vec<u64>>, Vec<u64>)> {
        (prop::sample::select(vec![2u64, 3, 4, 5, 6, 8, 9, 12]), 1usize..4, 1usize..4).prop_flat_map(
            |(n, r, c)| {
                (
                    Just(n),
                    prop::collection::vec(prop::collection::vec(0..n, c), r),
                    prop::collection::vec(0..n, r),
                )
            },
        )
    }

    proptest! {
        #[test]
        fn solutions_match_exhaustive_search((n, a, b) in small_system()) {
            let cols = a[0].len();
            let m = Matrix::from_rows(cols, a.iter().map(|r| res(r)).collect()).unwrap();
            let expected = brute_solutions(n, &a, &b);
            match solve_linear(&z(n), &m, &res(&b)).unwrap() {
                Solution::Inconsistent => prop_assert!(expected.is_empty()),
                Solution::Solved(s) => prop_assert_eq!(solution_elements(n, &s), expected),
            }
        }

        #[test]
        fn span_cardinality_matches_closure((n, a, _b) in small_system()) {
            let cols = a[0].len();
            let gens: Vec<Vec<Scalar>> = a.iter().map(|r| res(r)).collect();
            prop_assert_eq!(
                span_cardinality(n, &a, cols),
                span_elements(n, &gens, cols).len() as u128
            );
        }
    }
}
