//! Chevalley-basis model of `g` and `g + g`: the brute-force oracle.
//!
//! Basis order: `h_1..h_r` (simple coroots), then `e_k` for every root index
//! `k` (positive roots first, then negatives, so `e_{k+N} = f_k`).

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bd::{enumerate_triples, s_of, sigma_strata, BdError, Triple};
use crate::field::{q, qi, Field};
use crate::lagrlin::{canonical_vs, LagrangianSubspace, Provenance};
use crate::linalg::{is_zero_vec, unit, vec_add, Matrix, Subspace, Vector};
use crate::rootdata::{chi, z_space, NodeSet, RootDataError, RootSystem};
use crate::weyl::{WeylElement, WeylError, WeylGroup};
use crate::{QMatrix, QSubspace, Rational};

pub const DEFAULT_ORACLE_CAP: usize = 4;

#[derive(Debug, Error)]
pub enum ChevalleyError {
    #[error("rank {rank} is not below the oracle cap {cap}")]
    OracleCap { rank: usize, cap: usize },
    #[error("structure constant N({0}, {1}) is not an integer")]
    NonInteger(usize, usize),
    #[error("model check failed: {0}")]
    ModelCheck(String),
    #[error("gamma_d extension fails the bracket check: {0}")]
    GammaBracket(String),
    #[error("V is not a Lagrangian of z_S + z_T for {0}")]
    BadV(String),
    #[error("{what} mismatch for {label}")]
    Mismatch { what: &'static str, label: String },
    #[error("hypothesis {0} of the graded-kernel lemma fails")]
    Inapplicable(u8),
    #[error(transparent)]
    Bd(#[from] BdError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    RootData(#[from] RootDataError),
}

type Result<T> = std::result::Result<T, ChevalleyError>;

#[derive(Clone, Debug)]
pub struct LieAlgebraModel {
    rs: RootSystem,
    r: usize,
    np: usize,
    n: usize,
    /// `N_{a,b}` over all root indices, 0 when `a + b` is not a root.
    nconst: Vec<Vec<i64>>,
    table: Vec<Vec<Vec<(usize, i64)>>>,
    killing: QMatrix,
}

impl LieAlgebraModel {
    pub fn new(rs: &RootSystem) -> Result<Self> {
        Self::with_cap(rs, DEFAULT_ORACLE_CAP)
    }

    /// Fails unless `rank < cap`.
    pub fn with_cap(rs: &RootSystem, cap: usize) -> Result<Self> {
        if rs.rank() >= cap {
            return Err(ChevalleyError::OracleCap { rank: rs.rank(), cap });
        }
        let r = rs.rank();
        let np = rs.num_positive();
        let n = r + 2 * np;
        let nconst = structure_constants(rs)?;
        let coroots = (0..2 * np).map(|k| coroot_coords(rs, k)).collect::<Vec<_>>();
        let mut table = vec![vec![Vec::new(); n]; n];
        for i in 0..r {
            for k in 0..2 * np {
                let c = rs.coroot_pairing(&rs.root(k), i);
                if c != 0 {
                    table[i][r + k] = vec![(r + k, c)];
                    table[r + k][i] = vec![(r + k, -c)];
                }
            }
        }
        for a in 0..2 * np {
            for b in 0..2 * np {
                if b == rs.neg(a) {
                    table[r + a][r + b] = coroots[a].iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i, c)).collect();
                } else if nconst[a][b] != 0 {
                    let sum: Vec<i64> = rs.root(a).iter().zip(rs.root(b)).map(|(x, y)| x + y).collect();
                    let c = rs.index_of(&sum).expect("nonzero constant means a root");
                    table[r + a][r + b] = vec![(r + c, nconst[a][b])];
                }
            }
        }
        let mut m = LieAlgebraModel { rs: rs.clone(), r, np, n, nconst, table, killing: Matrix::zeros(0, 0) };
        m.killing = m.compute_killing();
        Ok(m)
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    /// Basis index of `e_k` for a root index `k`.
    pub fn e(&self, k: usize) -> usize {
        self.r + k
    }

    /// Basis index of `f_k = e_{-k}` for a positive root index `k`.
    pub fn f(&self, k: usize) -> usize {
        self.r + self.np + k
    }

    /// Root index of a basis element, `None` for the Cartan part.
    pub fn root_of(&self, a: usize) -> Option<usize> {
        (a >= self.r).then(|| a - self.r)
    }

    pub fn basis_name(&self, a: usize) -> String {
        match self.root_of(a) {
            None => format!("h{}", a + 1),
            Some(k) if k < self.np => format!("e{:?}", self.rs.root(k)),
            Some(k) => format!("f{:?}", self.rs.root(k - self.np)),
        }
    }

    pub fn structure_constant(&self, a: usize, b: usize) -> i64 {
        self.nconst[a][b]
    }

    pub fn basis_bracket(&self, a: usize, b: usize) -> &[(usize, i64)] {
        &self.table[a][b]
    }

    pub fn bracket<F: Field>(&self, x: &[F], y: &[F]) -> Vector<F> {
        let mut out = vec![F::zero(); self.n];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let c = xa.clone() * yb.clone();
                for &(k, v) in &self.table[a][b] {
                    out[k] = out[k].clone() + c.clone() * F::from_i64(v);
                }
            }
        }
        out
    }

    /// Bracket in `g + g`, componentwise.
    pub fn double_bracket<F: Field>(&self, x: &[F], y: &[F]) -> Vector<F> {
        let n = self.n;
        let mut out = self.bracket(&x[..n], &y[..n]);
        out.extend(self.bracket(&x[n..], &y[n..]));
        out
    }

    /// `ad x` as a matrix acting on columns.
    pub fn ad<F: Field>(&self, x: &[F]) -> Matrix<F> {
        let n = self.n;
        let mut m = Matrix::zeros(n, n);
        for b in 0..n {
            let col = self.bracket(x, &unit(n, b));
            for (i, c) in col.into_iter().enumerate() {
                m[(i, b)] = c;
            }
        }
        m
    }

    fn compute_killing(&self) -> QMatrix {
        let n = self.n;
        let mut k = vec![vec![0i64; n]; n];
        for a in 0..n {
            for b in a..n {
                let mut tr = 0i64;
                for c in 0..n {
                    for &(d, x) in &self.table[b][c] {
                        for &(e, y) in &self.table[a][d] {
                            if e == c {
                                tr += x * y;
                            }
                        }
                    }
                }
                k[a][b] = tr;
                k[b][a] = tr;
            }
        }
        Matrix::from_fn(n, n, |i, j| qi(k[i][j]))
    }

    /// Killing form of `g` on the Chevalley basis.
    pub fn killing(&self) -> &QMatrix {
        &self.killing
    }

    pub fn form(&self, x: &[Rational], y: &[Rational]) -> Rational {
        self.killing.form(x, y)
    }

    /// Gram matrix of `<(x1,x2),(y1,y2)> = k(x1,y1) - k(x2,y2)`.
    pub fn double_form(&self) -> QMatrix {
        self.killing.block_diag(&self.killing.scale(&-Rational::one()))
    }

    /// Checks Jacobi on all basis triples; returns the number checked.
    pub fn check_jacobi(&self) -> Result<usize> {
        let n = self.n;
        let mut count = 0;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let mut acc = vec![0i64; n];
                    for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                        for &(d, u) in &self.table[y][z] {
                            for &(e, v) in &self.table[x][d] {
                                acc[e] += u * v;
                            }
                        }
                    }
                    if acc.iter().any(|&v| v != 0) {
                        return Err(ChevalleyError::ModelCheck(format!(
                            "Jacobi fails on {}, {}, {}",
                            self.basis_name(a),
                            self.basis_name(b),
                            self.basis_name(c)
                        )));
                    }
                    count += 1;
                }
            }
        }
        Ok(count)
    }

    /// Checks `k([x,y],z) + k(y,[x,z]) = 0` on all basis triples.
    pub fn check_invariance(&self) -> Result<usize> {
        let n = self.n;
        let kf = |a: usize, v: &[(usize, i64)]| -> Rational {
            v.iter().fold(Rational::zero(), |s, &(d, c)| s + qi(c) * self.killing[(d, a)].clone())
        };
        let mut count = 0;
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let lhs = kf(z, &self.table[x][y]) + kf(y, &self.table[x][z]);
                    if !lhs.is_zero() {
                        return Err(ChevalleyError::ModelCheck(format!(
                            "invariance fails on {}, {}, {}",
                            self.basis_name(x),
                            self.basis_name(y),
                            self.basis_name(z)
                        )));
                    }
                    count += 1;
                }
            }
        }
        Ok(count)
    }

    /// `(E_alpha, E_{-alpha})` with `k(E_alpha, E_{-alpha}) = 1`, for a positive root index.
    pub fn normalized_pair(&self, k: usize) -> (Vector<Rational>, Vector<Rational>) {
        let e = unit(self.n, self.e(k));
        let f = unit::<Rational>(self.n, self.f(k));
        let c = self.form(&e, &f);
        let f = f.into_iter().map(|x| x / c.clone()).collect();
        (e, f)
    }

    /// `H_{alpha_i} = (K_ii / 2) h_i`: vector in the `H` basis to model coordinates.
    pub fn cartan_to_model(&self, x: &[Rational]) -> Vector<Rational> {
        let mut v = vec![Rational::zero(); self.n];
        for i in 0..self.r {
            v[i] = x[i].clone() * self.rs.coroot_scale(i);
        }
        v
    }

    pub fn model_to_cartan(&self, x: &[Rational]) -> Vector<Rational> {
        (0..self.r).map(|i| x[i].clone() / self.rs.coroot_scale(i)).collect()
    }

    /// A Cartan-level map given in the `H` basis, as an operator on `g` (zero on root spaces).
    pub fn cartan_operator(&self, m: &QMatrix) -> QMatrix {
        let r = self.r;
        let s = |i: usize| self.rs.coroot_scale(i);
        Matrix::from_fn(self.n, self.n, |i, j| if i < r && j < r { s(i) * m[(i, j)].clone() / s(j) } else { Rational::zero() })
    }

    pub fn subspace_from_cartan(&self, sp: &QSubspace) -> QSubspace {
        let rows: Vec<Vector<Rational>> = sp.vectors().iter().map(|v| self.cartan_to_model(v)).collect();
        Subspace::span(self.n, &rows)
    }

    pub fn root_span(&self, roots: impl IntoIterator<Item = usize>) -> QSubspace {
        Subspace::coordinate(self.n, roots.into_iter().map(|k| self.r + k))
    }

    /// `g_S = h_S + sum of root spaces of [S]`.
    pub fn levi(&self, s: NodeSet) -> QSubspace {
        let rs = &self.rs;
        let roots = rs.positive_in(s).into_iter().flat_map(|k| [k, rs.neg(k)]);
        Subspace::coordinate(self.n, s.iter().chain(roots.map(|k| self.r + k)))
    }

    pub fn z_model(&self, s: NodeSet) -> QSubspace {
        self.subspace_from_cartan(&z_space(&self.rs, s))
    }

    /// `n_S`: root spaces of positive roots outside `[S]`.
    pub fn n_plus(&self, s: NodeSet) -> QSubspace {
        self.root_span((0..self.np).filter(|&k| !self.rs.in_span(k, s)))
    }

    pub fn n_minus(&self, s: NodeSet) -> QSubspace {
        self.root_span((0..self.np).filter(|&k| !self.rs.in_span(k, s)).map(|k| k + self.np))
    }

    pub fn borel(&self) -> QSubspace {
        Subspace::coordinate(self.n, (0..self.r).chain((0..self.np).map(|k| self.r + k)))
    }

    pub fn borel_minus(&self) -> QSubspace {
        Subspace::coordinate(self.n, (0..self.r).chain((0..self.np).map(|k| self.f(k))))
    }

    /// Projection of `g` onto `g_S` along `n_S^- + z_S + n_S`.
    pub fn chi_g(&self, s: NodeSet) -> QMatrix {
        let mut m = self.cartan_operator(&chi(&self.rs, s));
        for k in 0..2 * self.np {
            if self.rs.in_span(k, s) {
                m[(self.r + k, self.r + k)] = Rational::one();
            }
        }
        m
    }

    /// `gamma_d: g_S -> g_T` as an operator on `g`, zero outside `g_S`.
    pub fn gamma_d_map(&self, tr: &Triple) -> Result<QMatrix> {
        let rs = &self.rs;
        let n = self.n;
        let mut img: Vec<Option<Vector<Rational>>> = vec![None; n];
        for &(a, b) in tr.d.pairs() {
            img[a] = Some(unit(n, b));
            img[self.e(a)] = Some(unit(n, self.e(b)));
            img[self.f(a)] = Some(unit(n, self.f(b)));
        }
        let in_s = rs.positive_in(tr.s);
        for &k in &in_s {
            if img[self.e(k)].is_some() {
                continue;
            }
            let root = rs.root(k);
            let (i, j) = tr
                .s
                .iter()
                .find_map(|i| {
                    let mut rest = root.clone();
                    rest[i] -= 1;
                    rs.index_of(&rest).filter(|&j| rs.is_positive(j)).map(|j| (i, j))
                })
                .expect("non-simple root of [S] splits off a simple root of S");
            for (a, b, sum) in [(i, j, k), (rs.neg(i), rs.neg(j), rs.neg(k))] {
                let x = img[self.r + a].clone().expect("lower height done");
                let y = img[self.r + b].clone().expect("lower height done");
                let c = qi(self.nconst[a][b]);
                img[self.r + sum] = Some(self.bracket(&x, &y).into_iter().map(|v| v / c.clone()).collect());
            }
        }
        let mut m = Matrix::zeros(n, n);
        for (j, col) in img.iter().enumerate() {
            if let Some(col) = col {
                for (i, v) in col.iter().enumerate() {
                    m[(i, j)] = v.clone();
                }
            }
        }
        let basis: Vec<usize> = tr.s.iter().chain(in_s.iter().flat_map(|&k| [self.e(k), self.f(k)])).collect();
        for &a in &basis {
            for &b in &basis {
                let (ua, ub) = (unit::<Rational>(n, a), unit::<Rational>(n, b));
                let lhs = m.mul_vec(&self.bracket(&ua, &ub));
                let rhs = self.bracket(&m.mul_vec(&ua), &m.mul_vec(&ub));
                if lhs != rhs {
                    return Err(ChevalleyError::GammaBracket(format!("{}, {}", self.basis_name(a), self.basis_name(b))));
                }
                if self.form(&m.mul_vec(&ua), &m.mul_vec(&ub)) != self.killing[(a, b)] {
                    return Err(ChevalleyError::GammaBracket(format!("form on {}, {}", self.basis_name(a), self.basis_name(b))));
                }
            }
        }
        Ok(m)
    }

    /// `exp(ad e_i) exp(-ad f_i) exp(ad e_i)`.
    pub fn simple_lift<F: Field>(&self, i: usize) -> Matrix<F> {
        let ae = self.ad::<F>(&unit(self.n, self.e(i)));
        let af = self.ad::<F>(&unit(self.n, self.f(i))).scale(&-F::one());
        let x = exp_nilpotent(&ae);
        x.mul(&exp_nilpotent(&af)).mul(&x)
    }

    /// `Ad` of the lift of `w` along its reduced word.
    pub fn weyl_lift<F: Field>(&self, w: &WeylElement) -> Matrix<F> {
        w.reduced_word().iter().fold(Matrix::identity(self.n), |acc, &i| acc.mul(&self.simple_lift(i)))
    }

    /// `Ad_t` for the torus element with values `t_i` on the simple roots.
    pub fn torus_matrix<F: Field>(&self, t: &[F]) -> Matrix<F> {
        let mut m = Matrix::identity(self.n);
        for k in 0..2 * self.np {
            let mut c = F::one();
            for (i, &e) in self.rs.root(k).iter().enumerate() {
                let base = if e < 0 { t[i].inv() } else { t[i].clone() };
                for _ in 0..e.abs() {
                    c = c * base.clone();
                }
            }
            m[(self.r + k, self.r + k)] = c;
        }
        m
    }

    /// `{(x, x)}` in `g + g`.
    pub fn diagonal(&self) -> QSubspace {
        let n = self.n;
        let rows: Vec<Vector<Rational>> = (0..n)
            .map(|i| {
                let mut v = vec![Rational::zero(); 2 * n];
                v[i] = Rational::one();
                v[n + i] = Rational::one();
                v
            })
            .collect();
        Subspace::span(2 * n, &rows)
    }

    /// Dimension n, isotropic for the double form, and closed under the bracket.
    pub fn is_lagrangian_subalgebra(&self, l: &QSubspace) -> bool {
        if l.ambient() != 2 * self.n || l.dim() != self.n {
            return false;
        }
        let b = l.basis();
        if !b.mul(&self.double_form()).mul(&b.transpose()).is_zero() {
            return false;
        }
        let vs = l.vectors();
        let ann = l.annihilator();
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                if !ann.mul_vec(&self.double_bracket(&vs[i], &vs[j])).iter().all(|x| x.is_zero()) {
                    return false;
                }
            }
        }
        true
    }

    /// `{u in within : [u, l] in l}` by a direct linear solve.
    pub fn stabilizer_within(&self, l: &QSubspace, within: &QSubspace) -> QSubspace {
        let ann = l.annihilator();
        let us = within.vectors();
        let mut rows: Vec<Vector<Rational>> = Vec::new();
        for a in l.vectors() {
            let cols: Vec<Vector<Rational>> = us.iter().map(|u| ann.mul_vec(&self.double_bracket(u, &a))).collect();
            for i in 0..ann.rows() {
                rows.push(cols.iter().map(|c| c[i].clone()).collect());
            }
        }
        let sys = Matrix::from_rows(us.len(), &rows);
        let coeffs = sys.kernel();
        Subspace::row_space(&coeffs.mul(within.basis()))
    }

    /// Normalizer of `l` in `g_Delta`, as a subspace of `g`.
    pub fn normalizer_in_diagonal(&self, l: &QSubspace) -> QSubspace {
        self.first_component(&self.stabilizer_within(l, &self.diagonal()))
    }

    /// `g_Delta ∩ l`, as a subspace of `g`.
    pub fn intersect_with_diagonal(&self, l: &QSubspace) -> QSubspace {
        self.first_component(&l.intersect(&self.diagonal()))
    }

    fn first_component(&self, sp: &QSubspace) -> QSubspace {
        let rows: Vec<Vector<Rational>> = sp.vectors().into_iter().map(|v| v[..self.n].to_vec()).collect();
        Subspace::span(self.n, &rows)
    }
}

/// `sum m^k / k!` for nilpotent `m`.
pub fn exp_nilpotent<F: Field>(m: &Matrix<F>) -> Matrix<F> {
    let n = m.rows();
    let mut acc = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    for k in 1..=n {
        term = term.mul(m).scale(&F::from_i64(k as i64).inv());
        if term.is_zero() {
            break;
        }
        acc = acc.add(&term);
    }
    acc
}

fn coroot_coords(rs: &RootSystem, k: usize) -> Vec<i64> {
    let root = rs.root(k);
    let nb = rs.root_form(&root, &root);
    root.iter()
        .enumerate()
        .map(|(i, &c)| {
            let ai = rs.root_form(&unit_i(rs.rank(), i), &unit_i(rs.rank(), i));
            let v = qi(c) * ai / nb.clone();
            assert!(v.is_integer(), "coroot coordinates are integral");
            v.to_integer().try_into().expect("small")
        })
        .collect()
}

fn unit_i(r: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; r];
    v[i] = 1;
    v
}

/// Structure constants from extraspecial pairs (all signs `+`).
fn structure_constants(rs: &RootSystem) -> Result<Vec<Vec<i64>>> {
    let np = rs.num_positive();
    let nr = 2 * np;
    let norm = |k: usize| {
        let x = rs.root(k);
        rs.root_form(&x, &x)
    };
    let sum_idx = |a: usize, b: usize| -> Option<usize> {
        let s: Vec<i64> = rs.root(a).iter().zip(rs.root(b)).map(|(x, y)| x + y).collect();
        rs.index_of(&s)
    };
    let string_p = |a: usize, b: usize| -> i64 {
        let (ra, rb) = (rs.root(a), rs.root(b));
        let mut p = 0;
        loop {
            let cand: Vec<i64> = rb.iter().zip(&ra).map(|(y, x)| y - (p + 1) * x).collect();
            if rs.index_of(&cand).is_none() {
                return p;
            }
            p += 1;
        }
    };
    let mut pos: HashMap<(usize, usize), Rational> = HashMap::new();

    // N for arbitrary roots, using only positive pairs already in `pos`.
    fn any(
        pos: &HashMap<(usize, usize), Rational>,
        rs: &RootSystem,
        norm: &dyn Fn(usize) -> Rational,
        sum_idx: &dyn Fn(usize, usize) -> Option<usize>,
        a: usize,
        b: usize,
    ) -> Rational {
        let Some(s) = sum_idx(a, b) else { return Rational::zero() };
        let c = rs.neg(s);
        let (pa, pb, pc) = (rs.is_positive(a), rs.is_positive(b), rs.is_positive(c));
        let same = |x: usize, y: usize| -> Rational {
            if rs.is_positive(x) {
                pos[&(x, y)].clone()
            } else {
                -pos[&(rs.neg(x), rs.neg(y))].clone()
            }
        };
        if pa == pb {
            same(a, b)
        } else if pb == pc {
            norm(c) / norm(a) * same(b, c)
        } else {
            debug_assert_eq!(pc, pa);
            norm(c) / norm(b) * same(c, a)
        }
    }

    for xi in 0..np {
        let pairs: Vec<(usize, usize)> = (0..np)
            .filter_map(|a| {
                let rest: Vec<i64> = rs.root(xi).iter().zip(rs.root(a)).map(|(x, y)| x - y).collect();
                rs.index_of(&rest).filter(|&b| rs.is_positive(b)).map(|b| (a, b))
            })
            .collect();
        let Some(&(zeta, eta)) = pairs.iter().filter(|(a, b)| a < b).min() else { continue };
        let p1 = qi(string_p(zeta, eta) + 1);
        pos.insert((zeta, eta), p1.clone());
        pos.insert((eta, zeta), -p1.clone());
        for &(a, b) in &pairs {
            if pos.contains_key(&(a, b)) {
                continue;
            }
            let nz = rs.neg(zeta);
            let ne = rs.neg(eta);
            let mut acc = Rational::zero();
            if let Some(s) = sum_idx(b, nz) {
                acc += any(&pos, rs, &norm, &sum_idx, b, nz) * any(&pos, rs, &norm, &sum_idx, a, ne) / norm(s);
            }
            if let Some(s) = sum_idx(a, nz) {
                acc += any(&pos, rs, &norm, &sum_idx, nz, a) * any(&pos, rs, &norm, &sum_idx, b, ne) / norm(s);
            }
            let v = norm(xi) / p1.clone() * acc;
            pos.insert((a, b), v);
        }
    }
    let mut out = vec![vec![0i64; nr]; nr];
    for a in 0..nr {
        for b in 0..nr {
            let v = any(&pos, rs, &norm, &sum_idx, a, b);
            if !v.is_integer() {
                return Err(ChevalleyError::NonInteger(a, b));
            }
            out[a][b] = v.to_integer().try_into().map_err(|_| ChevalleyError::NonInteger(a, b))?;
        }
    }
    Ok(out)
}

/// Torus element with nonzero rational values on the simple roots.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusElement {
    values: Vec<Rational>,
}

impl TorusElement {
    pub fn identity(r: usize) -> Self {
        TorusElement { values: vec![Rational::one(); r] }
    }

    pub fn new(values: Vec<Rational>) -> Option<Self> {
        values.iter().all(|v| !v.is_zero()).then_some(TorusElement { values })
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn is_identity(&self) -> bool {
        self.values.iter().all(|v| v.is_one())
    }

    pub fn inverse(&self) -> Self {
        TorusElement { values: self.values.iter().map(|v| v.inv()).collect() }
    }

    /// `prod t_i^{c_i}` for `beta = sum c_i alpha_i`.
    pub fn character(&self, coords: &[i64]) -> Rational {
        let mut c = Rational::one();
        for (t, &e) in self.values.iter().zip(coords) {
            let base = if e < 0 { t.inv() } else { t.clone() };
            for _ in 0..e.abs() {
                c *= base.clone();
            }
        }
        c
    }

    /// Seeded sample of non-identity elements with small numerators and denominators.
    pub fn sample(r: usize, count: usize, seed: u64) -> Vec<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out: Vec<Self> = Vec::new();
        while out.len() < count {
            let values: Vec<Rational> = (0..r)
                .map(|_| {
                    let num: i64 = rng.gen_range(1..=5) * if rng.gen_bool(0.5) { -1 } else { 1 };
                    q(num, rng.gen_range(1..=3))
                })
                .collect();
            let t = TorusElement { values };
            if !t.is_identity() && !out.contains(&t) {
                out.push(t);
            }
        }
        out
    }
}

impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Data of `l_{S,T,d,V,v,m} = Ad_{(m, v)} l_{S,T,d,V}`.
#[derive(Clone, Debug)]
pub struct Label {
    pub triple: Triple,
    pub v_space: LagrangianSubspace<Rational>,
    /// Weyl element id, a minimal representative of `v W_T`.
    pub v: usize,
    pub m: TorusElement,
}

impl Label {
    pub fn name(&self, wg: &WeylGroup) -> String {
        format!("({}; V={:?}; v={}; m={})", self.triple, self.v_space.space().vectors(), wg.get(self.v).name(), self.m)
    }
}

/// The three pieces of the normalizer formula.
#[derive(Clone, Debug)]
pub struct NormalizerParts {
    pub s_vd: NodeSet,
    pub z_prime: QSubspace,
    pub g_phi: QSubspace,
    pub psi_nv: QSubspace,
    pub total: QSubspace,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotencyReport {
    /// Least `k` with `phi^k = 0` on `n_{S(v,d)}`; `None` if not nilpotent.
    pub k: Option<usize>,
    pub strata: usize,
    pub preserves_pieces: bool,
    pub lowers_blocks: bool,
}

impl NilpotencyReport {
    pub fn ok(&self) -> bool {
        self.preserves_pieces && self.lowers_blocks && self.k.is_some_and(|k| k <= self.strata)
    }
}

/// A model together with its Weyl group and cached Weyl lifts.
#[derive(Debug)]
pub struct Oracle {
    model: LieAlgebraModel,
    wg: WeylGroup,
    lifts: Vec<OnceLock<QMatrix>>,
}

impl Oracle {
    pub fn new(rs: &RootSystem, cap: usize) -> Result<Self> {
        let model = LieAlgebraModel::with_cap(rs, cap)?;
        let wg = WeylGroup::new(rs)?;
        let lifts = (0..wg.order()).map(|_| OnceLock::new()).collect();
        Ok(Oracle { model, wg, lifts })
    }

    pub fn model(&self) -> &LieAlgebraModel {
        &self.model
    }

    pub fn weyl(&self) -> &WeylGroup {
        &self.wg
    }

    pub fn lift(&self, id: usize) -> &QMatrix {
        self.lifts[id].get_or_init(|| self.model.weyl_lift(self.wg.get(id)))
    }

    /// `l_{S,T,d,V}` inside `g + g`.
    pub fn base_lagrangian(&self, tr: &Triple, v_space: &LagrangianSubspace<Rational>) -> Result<QSubspace> {
        let m = &self.model;
        let n = m.n;
        let ok_prov = matches!(v_space.ambient().provenance(), Provenance::ZZ { s, t } if *s == tr.s && *t == tr.t);
        if !ok_prov {
            return Err(ChevalleyError::BadV(tr.to_string()));
        }
        let r = m.r;
        let mut rows: Vec<Vector<Rational>> = Vec::new();
        for x in v_space.embedded().vectors() {
            let mut row = m.cartan_to_model(&x[..r]);
            row.extend(m.cartan_to_model(&x[r..]));
            rows.push(row);
        }
        let zero = vec![Rational::zero(); n];
        for k in 0..m.np {
            if !m.rs.in_span(k, tr.s) {
                let mut row = unit(n, m.e(k));
                row.extend(zero.iter().cloned());
                rows.push(row);
            }
            if !m.rs.in_span(k, tr.t) {
                let mut row = zero.clone();
                row.extend(unit::<Rational>(n, m.f(k)));
                rows.push(row);
            }
        }
        let gamma = m.gamma_d_map(tr)?;
        for x in m.levi(tr.s).vectors() {
            let mut row = x.clone();
            row.extend(gamma.mul_vec(&x));
            rows.push(row);
        }
        let l = Subspace::span(2 * n, &rows);
        if l.dim() != n {
            return Err(ChevalleyError::BadV(tr.to_string()));
        }
        Ok(l)
    }

    /// `Ad_{(m, v)} l_{S,T,d,V}`.
    pub fn build_lagrangian(&self, label: &Label) -> Result<QSubspace> {
        let base = self.base_lagrangian(&label.triple, &label.v_space)?;
        let g = self.model.torus_matrix(label.m.values()).block_diag(self.lift(label.v));
        Ok(base.image(&g))
    }

    /// `phi = Ad_v gamma_d chi_S Ad_m^{-1}` on `g`.
    pub fn phi_matrix(&self, label: &Label) -> Result<QMatrix> {
        let m = &self.model;
        let gamma = m.gamma_d_map(&label.triple)?;
        let minv = m.torus_matrix(label.m.inverse().values());
        Ok(self.lift(label.v).mul(&gamma).mul(&m.chi_g(label.triple.s)).mul(&minv))
    }

    fn s_vd(&self, label: &Label) -> Result<NodeSet> {
        Ok(s_of(&self.wg, &label.triple, self.wg.get(label.v))?)
    }

    /// Positive roots `beta` with `v^{-1} beta < 0`.
    pub fn n_v_roots(&self, v: &WeylElement) -> Vec<usize> {
        let inv = self.wg.inverse(v);
        (0..self.model.np).filter(|&k| !self.model.rs.is_positive(inv.apply_root(k))).collect()
    }

    /// Right-hand side of the normalizer formula; also checks that the two
    /// descriptions of `z'` agree.
    pub fn normalizer_formula(&self, label: &Label) -> Result<NormalizerParts> {
        let m = &self.model;
        let rs = &m.rs;
        let tr = &label.triple;
        let n = m.n;
        let v = self.wg.get(label.v);
        let s_vd = self.s_vd(label)?;
        let phi = self.phi_matrix(label)?;
        let id = Matrix::identity(n);

        let z_svd = m.z_model(s_vd);
        let target = m.z_model(tr.t).image(self.lift(label.v));
        let z1 = z_svd.preimage_within(&id.sub(&phi), &target);
        let cd = rs.cartan_subspaces(tr.s, tr.t, &tr.d)?;
        let vinv = self.wg.inverse(v).h_matrix();
        let cond = cd.gamma_chi.sub(&cd.chi_t.mul(&vinv));
        let z2h = z_space(rs, s_vd).preimage_within(&cond, &Subspace::zero(rs.rank()));
        let z2 = m.subspace_from_cartan(&z2h);
        if z1 != z2 {
            return Err(ChevalleyError::Mismatch { what: "z' descriptions", label: label.name(&self.wg) });
        }

        let g_phi = m.levi(s_vd).preimage_within(&phi.sub(&id), &Subspace::zero(n));
        let mut psi_rows = Vec::new();
        for k in self.n_v_roots(v) {
            let mut x = unit::<Rational>(n, m.e(k));
            let mut acc = x.clone();
            for _ in 0..=n {
                x = phi.mul_vec(&x);
                if is_zero_vec(&x) {
                    break;
                }
                acc = vec_add(&acc, &x);
            }
            psi_rows.push(acc);
        }
        let psi_nv = Subspace::span(n, &psi_rows);
        let total = z1.sum(&g_phi).sum(&psi_nv);
        Ok(NormalizerParts { s_vd, z_prime: z1, g_phi, psi_nv, total })
    }

    /// Direct normalizer solve compared with the formula as subspaces.
    pub fn check_normalizer(&self, label: &Label) -> Result<NormalizerParts> {
        let l = self.build_lagrangian(label)?;
        let direct = self.model.normalizer_in_diagonal(&l);
        let parts = self.normalizer_formula(label)?;
        if direct != parts.total {
            return Err(ChevalleyError::Mismatch { what: "normalizer", label: label.name(&self.wg) });
        }
        Ok(parts)
    }

    /// `V' = {(z, v^{-1} z) : z in z'} ∩ (V + V_S)`, in `h + h` with the `H` basis.
    pub fn v_prime(&self, label: &Label, z_prime: &QSubspace) -> Result<QSubspace> {
        let m = &self.model;
        let rs = &m.rs;
        let r = rs.rank();
        let tr = &label.triple;
        let vinv = self.wg.inverse(self.wg.get(label.v)).h_matrix();
        let rows: Vec<Vector<Rational>> = z_prime
            .vectors()
            .iter()
            .map(|z| {
                let zh = m.model_to_cartan(z);
                let mut row = zh.clone();
                row.extend(vinv.mul_vec(&zh));
                row
            })
            .collect();
        let a = Subspace::span(2 * r, &rows);
        let cd = rs.cartan_subspaces(tr.s, tr.t, &tr.d)?;
        let vs_rows: Vec<Vector<Rational>> = cd
            .h_s
            .vectors()
            .iter()
            .map(|x| {
                let mut row = x.clone();
                row.extend(cd.gamma_chi.mul_vec(x));
                row
            })
            .collect();
        let b = label.v_space.embedded().sum(&Subspace::span(2 * r, &vs_rows));
        Ok(a.intersect(&b))
    }

    /// Right-hand side of the intersection formula, as a subspace of `g`.
    pub fn intersection_formula(&self, label: &Label, parts: &NormalizerParts) -> Result<QSubspace> {
        let m = &self.model;
        let vp = self.v_prime(label, &parts.z_prime)?;
        let r = m.r;
        let rows: Vec<Vector<Rational>> = vp.vectors().iter().map(|x| m.cartan_to_model(&x[..r])).collect();
        Ok(Subspace::span(m.n, &rows).sum(&parts.g_phi).sum(&parts.psi_nv))
    }

    pub fn check_intersection(&self, label: &Label) -> Result<QSubspace> {
        let l = self.build_lagrangian(label)?;
        let direct = self.model.intersect_with_diagonal(&l);
        let parts = self.normalizer_formula(label)?;
        let formula = self.intersection_formula(label, &parts)?;
        if direct != formula {
            return Err(ChevalleyError::Mismatch { what: "intersection", label: label.name(&self.wg) });
        }
        Ok(direct)
    }

    /// Invariance of the three pieces, block lowering on the strata, and the nilpotency index.
    pub fn phi_nilpotency(&self, label: &Label) -> Result<NilpotencyReport> {
        let m = &self.model;
        let n = m.n;
        let s_vd = self.s_vd(label)?;
        let phi = self.phi_matrix(label)?;
        let strata = sigma_strata(&self.wg, &label.triple, self.wg.get(label.v))?;
        let n_svd = m.n_plus(s_vd);
        let preserves = [m.z_model(s_vd), m.levi(s_vd), n_svd.clone()].iter().all(|p| p.contains_space(&p.image(&phi)));
        let blocks: Vec<QSubspace> = strata.iter().map(|st| m.root_span(st.iter().copied())).collect();
        let lowers = blocks.iter().enumerate().all(|(j, b)| {
            let img = b.image(&phi);
            if j == 0 {
                img.is_zero()
            } else {
                blocks[j - 1].contains_space(&img)
            }
        });
        let mut cur = n_svd;
        let mut k = None;
        for step in 0..=n {
            if cur.is_zero() {
                k = Some(step);
                break;
            }
            cur = cur.image(&phi);
        }
        Ok(NilpotencyReport { k, strata: strata.len(), preserves_pieces: preserves, lowers_blocks: lowers })
    }

    /// The graded-kernel lemma instance from the normalizer argument:
    /// grading `n^-_j`, `U = sum_{j>0} n^-_j`, `Y = Ad_v n_T^- ∩ n^-_{S(v,d)}`.
    pub fn lemma_instance(&self, label: &Label) -> Result<(Vec<QSubspace>, QSubspace, QSubspace, QMatrix)> {
        let m = &self.model;
        let s_vd = self.s_vd(label)?;
        let phi = self.phi_matrix(label)?;
        let strata = sigma_strata(&self.wg, &label.triple, self.wg.get(label.v))?;
        let grading: Vec<QSubspace> = strata.iter().map(|st| m.root_span(st.iter().map(|&k| k + m.np))).collect();
        let u = grading.iter().skip(1).fold(Subspace::zero(m.n), |a, b| a.sum(b));
        let y = m.n_minus(label.triple.t).image(self.lift(label.v)).intersect(&m.n_minus(s_vd));
        Ok((grading, u, y, phi))
    }

    /// Parity of `n - dim(l ∩ g_Delta)`.
    pub fn eps_of(&self, l: &QSubspace) -> u8 {
        ((self.model.n - self.model.intersect_with_diagonal(l).dim()) % 2) as u8
    }

    /// Triples x canonical V x `W^T` x (`e` and `torus` seeded torus elements).
    pub fn sweep_labels(&self, seed: u64, torus: usize) -> Vec<Label> {
        let rs = &self.model.rs;
        let mut ms = vec![TorusElement::identity(rs.rank())];
        ms.extend(TorusElement::sample(rs.rank(), torus, seed));
        let mut out = Vec::new();
        for tr in enumerate_triples(&self.wg, false) {
            for nv in canonical_vs(rs, &tr, seed) {
                for v in self.wg.min_coset_reps(tr.t) {
                    for m in &ms {
                        out.push(Label { triple: tr.clone(), v_space: nv.v.clone(), v: v.id, m: m.clone() });
                    }
                }
            }
        }
        out
    }

    /// Every oracle check on every sweep label. Runs in parallel over labels.
    pub fn verify_sweep(&self, seed: u64, torus: usize) -> Result<VerifyReport> {
        let jacobi = self.model.check_jacobi()?;
        let invariance = self.model.check_invariance()?;
        let labels = self.sweep_labels(seed, torus);
        let results: Vec<Vec<String>> = labels.par_iter().map(|l| self.verify_label(l)).collect();
        let failures: Vec<String> = results.into_iter().flatten().collect();
        Ok(VerifyReport { type_spec: self.model.rs.type_spec().to_string(), jacobi, invariance, labels: labels.len(), failures })
    }

    fn verify_label(&self, l: &Label) -> Vec<String> {
        let name = l.name(&self.wg);
        let mut bad = Vec::new();
        match self.build_lagrangian(l) {
            Ok(built) if self.model.is_lagrangian_subalgebra(&built) => {}
            Ok(_) => bad.push(format!("lagrangian: {name}")),
            Err(e) => bad.push(format!("lagrangian: {name}: {e}")),
        }
        if let Err(e) = self.check_normalizer(l) {
            bad.push(format!("normalizer: {e}"));
        }
        if let Err(e) = self.check_intersection(l) {
            bad.push(format!("intersection: {e}"));
        }
        match self.phi_nilpotency(l) {
            Ok(rep) if rep.ok() => {}
            Ok(rep) => bad.push(format!("nilpotency: {name}: {rep:?}")),
            Err(e) => bad.push(format!("nilpotency: {name}: {e}")),
        }
        match self.lemma_instance(l).and_then(|(g, u, y, phi)| linalg_fact_check(&g, &u, &y, &phi)) {
            Ok(true) => {}
            Ok(false) => bad.push(format!("lemma: {name}")),
            Err(e) => bad.push(format!("lemma: {name}: {e}")),
        }
        bad
    }
}

/// Check counts of an oracle sweep.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    #[serde(rename = "type")]
    pub type_spec: String,
    /// Basis triples checked for Jacobi.
    pub jacobi: usize,
    pub invariance: usize,
    pub labels: usize,
    pub failures: Vec<String>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `{u in U : u - phi(u) in Y} = 0` for a degree-lowering `phi`; errors
/// name the failing hypothesis.
pub fn linalg_fact_check(grading: &[QSubspace], u: &QSubspace, y: &QSubspace, phi: &QMatrix) -> Result<bool> {
    let amb = u.ambient();
    for (i, g) in grading.iter().enumerate() {
        let img = g.image(phi);
        let ok = if i == 0 { img.is_zero() } else { grading[i - 1].contains_space(&img) };
        if !ok {
            return Err(ChevalleyError::Inapplicable(1));
        }
    }
    let whole = grading.iter().fold(Subspace::zero(amb), |a, b| a.sum(b));
    if !whole.image(phi).intersect(y).is_zero() {
        return Err(ChevalleyError::Inapplicable(2));
    }
    if !u.preimage_within(phi, &Subspace::zero(amb)).is_zero() {
        return Err(ChevalleyError::Inapplicable(3));
    }
    let id = Matrix::identity(amb);
    Ok(u.preimage_within(&id.sub(phi), y).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bd::enumerate_triples;
    use crate::lagrlin::{canonical_vs, is_lagrangian, zz_space};
    use crate::rootdata::Isometry;

    fn model(spec: &str) -> LieAlgebraModel {
        LieAlgebraModel::new(&RootSystem::new(spec).unwrap()).unwrap()
    }

    #[test]
    fn sl2_relations() {
        let m = model("A1");
        assert_eq!(m.dim(), 3);
        assert_eq!(m.basis_bracket(m.e(0), m.f(0)), &[(0, 1)]);
        assert_eq!(m.basis_bracket(0, m.e(0)), &[(m.e(0), 2)]);
        assert_eq!(m.basis_bracket(0, m.f(0)), &[(m.f(0), -2)]);
    }

    #[test]
    fn structure_constant_sizes() {
        let a2 = model("A2");
        assert_eq!(a2.dim(), 8);
        assert_eq!(a2.structure_constant(0, 1).abs(), 1);
        let b2 = model("B2");
        assert_eq!(b2.dim(), 10);
        let max = (0..8).flat_map(|a| (0..8).map(move |b| (a, b))).map(|(a, b)| b2.structure_constant(a, b).abs()).max();
        assert_eq!(max, Some(2));
        let g2 = model("G2");
        let max = (0..12).flat_map(|a| (0..12).map(move |b| (a, b))).map(|(a, b)| g2.structure_constant(a, b).abs()).max();
        assert_eq!(max, Some(3));
    }

    #[test]
    fn jacobi_and_invariance() {
        for spec in ["A1", "A2", "B2", "G2", "A3", "B3", "C3", "A1xA2"] {
            let m = model(spec);
            m.check_jacobi().unwrap();
            m.check_invariance().unwrap();
        }
    }

    #[test]
    fn killing_matches_cartan_gram() {
        for spec in ["A1", "A2", "B2", "G2", "A1xA1", "B3"] {
            let m = model(spec);
            let rs = m.root_system();
            let r = rs.rank();
            for i in 0..r {
                for j in 0..r {
                    let hi = m.cartan_to_model(&unit(r, i));
                    let hj = m.cartan_to_model(&unit(r, j));
                    assert_eq!(m.form(&hi, &hj), rs.killing()[(i, j)], "{spec}");
                }
            }
            for k in 0..rs.num_positive() {
                let (e, f) = m.normalized_pair(k);
                assert!(m.form(&e, &f).is_one());
            }
        }
        let a1 = RootSystem::new("A1").unwrap();
        assert_eq!(a1.killing()[(0, 0)], q(1, 2));
    }

    #[test]
    fn oracle_cap() {
        let g2 = RootSystem::new("G2").unwrap();
        assert!(matches!(LieAlgebraModel::with_cap(&g2, 2), Err(ChevalleyError::OracleCap { .. })));
        assert!(LieAlgebraModel::with_cap(&g2, 3).is_ok());
    }

    #[test]
    fn gamma_examples() {
        let rs = RootSystem::new("A2").unwrap();
        let m = LieAlgebraModel::new(&rs).unwrap();
        let full = NodeSet::full(2);
        let id = m.gamma_d_map(&Triple::new(&rs, Isometry::identity(full)).unwrap()).unwrap();
        assert_eq!(id, Matrix::identity(8));
        let swap = m.gamma_d_map(&Triple::new(&rs, Isometry::new(vec![(0, 1), (1, 0)])).unwrap()).unwrap();
        assert_eq!(swap.col(m.e(0)), unit(8, m.e(1)));
        let top = swap.col(m.e(2));
        assert!(top == unit(8, m.e(2)) || top == unit::<Rational>(8, m.e(2)).iter().map(|x| -x.clone()).collect::<Vec<_>>());
        let d = m.gamma_d_map(&Triple::new(&rs, Isometry::new(vec![(0, 1)])).unwrap()).unwrap();
        assert_eq!(d.col(m.f(0)), unit(8, m.f(1)));
        assert_eq!(d.col(0), unit(8, 1));
    }

    #[test]
    fn weyl_lifts_permute_root_spaces() {
        for spec in ["A2", "B2", "G2"] {
            let rs = RootSystem::new(spec).unwrap();
            let m = LieAlgebraModel::new(&rs).unwrap();
            let wg = WeylGroup::new(&rs).unwrap();
            for w in wg.elements() {
                let a: QMatrix = m.weyl_lift(w);
                for k in 0..rs.num_roots() {
                    let img = a.mul_vec(&unit(m.dim(), m.e(k)));
                    let target = m.e(w.apply_root(k));
                    assert!(img.iter().enumerate().all(|(i, x)| x.is_zero() == (i != target)), "{spec} {}", w.name());
                    assert!(img[target] == qi(1) || img[target] == qi(-1));
                }
                let hpart = m.cartan_operator(&w.h_matrix());
                for i in 0..rs.rank() {
                    let x = unit::<Rational>(m.dim(), i);
                    assert_eq!(a.mul_vec(&x), hpart.mul_vec(&x));
                }
            }
        }
    }

    fn labels(spec: &str, seed: u64, torus: usize) -> (Oracle, Vec<Label>) {
        let rs = RootSystem::new(spec).unwrap();
        let o = Oracle::new(&rs, DEFAULT_ORACLE_CAP).unwrap();
        let mut out = Vec::new();
        let mut ms = vec![TorusElement::identity(rs.rank())];
        ms.extend(TorusElement::sample(rs.rank(), torus, seed));
        for tr in enumerate_triples(o.weyl(), false) {
            for nv in canonical_vs(&rs, &tr, seed) {
                for v in o.weyl().min_coset_reps(tr.t) {
                    for mm in &ms {
                        out.push(Label { triple: tr.clone(), v_space: nv.v.clone(), v: v.id, m: mm.clone() });
                    }
                }
            }
        }
        (o, out)
    }

    #[test]
    fn gdelta_is_lagrangian_subalgebra() {
        let rs = RootSystem::new("A1").unwrap();
        let o = Oracle::new(&rs, 4).unwrap();
        let full = NodeSet::full(1);
        let tr = Triple::new(&rs, Isometry::identity(full)).unwrap();
        let cd = rs.cartan_subspaces(tr.s, tr.t, &tr.d).unwrap();
        let v = LagrangianSubspace::new(zz_space(&rs, &cd), &Matrix::zeros(0, 0)).unwrap();
        let l = o.base_lagrangian(&tr, &v).unwrap();
        assert_eq!(l, o.model().diagonal());
        assert!(o.model().is_lagrangian_subalgebra(&l));
        assert_eq!(o.model().normalizer_in_diagonal(&l).dim(), 3);
        assert_eq!(o.model().intersect_with_diagonal(&l).dim(), 3);
    }

    #[test]
    fn non_isotropic_is_rejected() {
        let rs = RootSystem::new("A2").unwrap();
        let m = LieAlgebraModel::new(&rs).unwrap();
        let n = m.dim();
        let mut rows: Vec<Vector<Rational>> = Vec::new();
        for x in [m.cartan_to_model(&unit(2, 0)), m.cartan_to_model(&unit(2, 1))] {
            let mut row = x;
            row.extend(vec![Rational::zero(); n]);
            rows.push(row);
        }
        for k in 0..3 {
            let mut row = unit(2 * n, m.e(k));
            rows.push(row.clone());
            row = unit(2 * n, n + m.f(k));
            rows.push(row);
        }
        let l = Subspace::span(2 * n, &rows);
        assert_eq!(l.dim(), n);
        assert!(!m.is_lagrangian_subalgebra(&l));
    }

    #[test]
    fn a2_sweep_formulas() {
        let (o, ls) = labels("A2", 0xBD, 2);
        for l in &ls {
            let built = o.build_lagrangian(l).unwrap();
            assert!(o.model().is_lagrangian_subalgebra(&built), "{}", l.name(o.weyl()));
            let parts = o.check_normalizer(l).unwrap();
            assert_eq!(parts.psi_nv.dim(), o.weyl().get(l.v).length());
            o.check_intersection(l).unwrap();
            let rep = o.phi_nilpotency(l).unwrap();
            assert!(rep.ok(), "{} {:?}", l.name(o.weyl()), rep);
            let (g, u, y, phi) = o.lemma_instance(l).unwrap();
            assert!(linalg_fact_check(&g, &u, &y, &phi).unwrap());
        }
    }

    #[test]
    fn nilpotency_examples() {
        let rs = RootSystem::new("A2").unwrap();
        let o = Oracle::new(&rs, 4).unwrap();
        let tr = Triple::new(&rs, Isometry::new(vec![(0, 1)])).unwrap();
        let v = canonical_vs(&rs, &tr, 1).remove(0).v;
        let label = Label { triple: tr, v_space: v, v: 0, m: TorusElement::identity(2) };
        let rep = o.phi_nilpotency(&label).unwrap();
        assert_eq!((rep.k, rep.strata), (Some(2), 2));
        let tr = Triple::trivial();
        let v = canonical_vs(&rs, &tr, 1).remove(0).v;
        for w in o.weyl().elements() {
            let label = Label { triple: tr.clone(), v_space: v.clone(), v: w.id, m: TorusElement::identity(2) };
            assert_eq!(o.phi_nilpotency(&label).unwrap().k, Some(1));
        }
    }

    #[test]
    fn intersection_examples() {
        let rs = RootSystem::new("A2").unwrap();
        let o = Oracle::new(&rs, 4).unwrap();
        let s: NodeSet = [0].into_iter().collect();
        let tr = Triple::new(&rs, Isometry::identity(s)).unwrap();
        let vs = canonical_vs(&rs, &tr, 1);
        let diag = vs.iter().find(|x| x.name == "diag").unwrap();
        let anti = vs.iter().find(|x| x.name == "antidiag").unwrap();
        let lab = |v: &LagrangianSubspace<Rational>, w: usize| Label { triple: tr.clone(), v_space: v.clone(), v: w, m: TorusElement::identity(2) };
        let l = o.build_lagrangian(&lab(&diag.v, 0)).unwrap();
        assert_eq!(o.model().intersect_with_diagonal(&l).dim(), 4);
        assert_eq!(o.eps_of(&l), 0);
        let l = o.build_lagrangian(&lab(&anti.v, 0)).unwrap();
        assert_eq!(o.model().intersect_with_diagonal(&l).dim(), 3);
        assert_eq!(o.eps_of(&l), 1);
        assert!(is_lagrangian(diag.v.space().basis(), diag.v.ambient()).unwrap());
        let s1s2 = o.weyl().parse("s1s2").unwrap().id;
        let parts = o.check_normalizer(&lab(&anti.v, s1s2)).unwrap();
        assert_eq!(parts.total.dim(), parts.z_prime.dim() + parts.g_phi.dim() + 2);
    }

    #[test]
    fn lemma_hypotheses() {
        let z = Subspace::<Rational>::zero(2);
        assert!(linalg_fact_check(&[], &z, &z, &Matrix::zeros(2, 2)).unwrap());
        // phi = identity on a one-step grading breaks hypothesis 1
        let g = vec![Subspace::full(2)];
        assert!(matches!(linalg_fact_check(&g, &z, &z, &Matrix::identity(2)), Err(ChevalleyError::Inapplicable(1))));
        // Y meets the image of phi
        let g = vec![Subspace::coordinate(2, [0]), Subspace::coordinate(2, [1])];
        let phi = Matrix::from_i64(2, 2, &[0, 1, 0, 0]);
        let y = Subspace::coordinate(2, [0]);
        assert!(matches!(linalg_fact_check(&g, &z, &y, &phi), Err(ChevalleyError::Inapplicable(2))));
    }
}
