//! Rank of the Poisson structure `Pi_0` on orbit intersections, with the
//! closed forms for conjugacy classes and shifted double Bruhat cells.

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::bd::{s_of, BdError, Triple};
use crate::chevalley::{ChevalleyError, Label, LieAlgebraModel, Oracle, TorusElement};
use crate::lagrlin::{canonical_vs, hh_space, h_diagonal, is_lagrangian};
use crate::linalg::{Matrix, Subspace, Vector};
use crate::rootdata::z_space;
use crate::strata::v_s;
use crate::weyl::{WeylElement, WeylError, WeylGroup};
use crate::field::Field;
use crate::{QMatrix, QSubspace, Rational, F10007};

pub const DEFAULT_SAMPLES: usize = 256;
pub const PRIME: u64 = 10007;
const SPARSITY: [f64; 5] = [1.0, 0.75, 0.5, 0.25, 0.0];

#[derive(Debug, Error)]
pub enum PoissonError {
    #[error(transparent)]
    Bd(#[from] BdError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Oracle(#[from] ChevalleyError),
    #[error(transparent)]
    RootData(#[from] crate::rootdata::RootDataError),
    #[error("X_{{S,T,d,v}} is not Lagrangian for {0}")]
    NotLagrangian(String),
    #[error("rank profiles do not separate the Weyl group")]
    ProfilesCollide,
}

type Result<T> = std::result::Result<T, PoissonError>;

/// `X_{S,T,d,v}` in `h + h` (basis `H_alpha` in each factor).
#[derive(Clone, Debug)]
pub struct XSpace {
    pub triple: Triple,
    pub v: usize,
    pub space: QSubspace,
}

/// `{(z, v^{-1} z) : z in z_{S(v,d)}, gamma_d chi_S z = chi_T v^{-1} z} + V_S`.
pub fn x_space(wg: &WeylGroup, tr: &Triple, v: &WeylElement) -> Result<XSpace> {
    if !wg.is_min_coset(v, tr.t) {
        return Err(WeylError::NotMinimal { v: v.name(), t: tr.t }.into());
    }
    let rs = wg.root_system();
    let r = rs.rank();
    let s_vd = s_of(wg, tr, v)?;
    let cd = rs.cartan_subspaces(tr.s, tr.t, &tr.d)?;
    let vinv = wg.inverse(v).h_matrix();
    let cond = cd.gamma_chi.sub(&cd.chi_t.mul(&vinv));
    let zs = z_space(rs, s_vd).preimage_within(&cond, &Subspace::zero(r));
    let rows: Vec<Vector<Rational>> = zs
        .vectors()
        .iter()
        .map(|z| {
            let mut row = z.clone();
            row.extend(vinv.mul_vec(z));
            row
        })
        .collect();
    let space = Subspace::span(2 * r, &rows).sum(&v_s(&cd, r));
    let hh = hh_space(rs);
    if space.dim() != r || !is_lagrangian(space.basis(), &hh).unwrap_or(false) {
        return Err(PoissonError::NotLagrangian(format!("{tr}, v={}", v.name())));
    }
    Ok(XSpace { triple: tr.clone(), v: v.id, space })
}

/// `dim(h_{-Delta} ∩ (w, v1) X)`.
pub fn rank_correction(wg: &WeylGroup, w: &WeylElement, v1: &WeylElement, x: &XSpace) -> usize {
    let rs = wg.root_system();
    let g = w.h_matrix().block_diag(&v1.h_matrix());
    x.space.image(&g).intersect(&h_diagonal(rs, -1)).dim()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjRank {
    pub w: String,
    pub rank: i64,
    pub open_dense_leaf: bool,
    pub cell_empty: bool,
}

/// `dim C - l(w) - dim h^{-w}`; negative values mean the cell is empty for this class.
pub fn conjugacy_rank(wg: &WeylGroup, dim_c: usize, w: &WeylElement) -> ConjRank {
    let rank = dim_c as i64 - w.length() as i64 - wg.h_minus_w_dim(w) as i64;
    ConjRank { w: w.name(), rank, open_dense_leaf: w.is_identity(), cell_empty: rank < 0 }
}

/// `(rank, dim)` with `dim = l(u) + l(v) - l(w)` and `rank = dim - dim h^{-u^{-1} v w^{-1}}`.
pub fn double_bruhat_rank(wg: &WeylGroup, u: &WeylElement, v: &WeylElement, w: &WeylElement) -> (i64, i64) {
    let dim = u.length() as i64 + v.length() as i64 - w.length() as i64;
    let x = wg.mul(wg.mul(wg.inverse(u), v), wg.inverse(w));
    (dim - wg.h_minus_w_dim(x) as i64, dim)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pi0Rank {
    pub dim_o: usize,
    pub dim_o_prime: usize,
    pub intersection_dim: i64,
    pub correction: usize,
    pub rank: i64,
}

/// `dim O = n - dim n(l)` for `O = G_Delta . l`.
pub fn gdelta_orbit_dim(oracle: &Oracle, label: &Label) -> Result<usize> {
    let l = oracle.build_lagrangian(label)?;
    Ok(oracle.model().dim() - oracle.model().normalizer_in_diagonal(&l).dim())
}

/// `dim O' = 2 dim b - dim(stabilizer of Ad_{(w, v1)} l_{S,T,d,V} in b + b^-)`.
pub fn bb_orbit_dim(oracle: &Oracle, label: &Label, w: usize, v1: usize) -> Result<usize> {
    let m = oracle.model();
    let base = oracle.base_lagrangian(&label.triple, &label.v_space)?;
    let l = base.image(&oracle.lift(w).block_diag(oracle.lift(v1)));
    let bb = double_sum(&m.borel(), &m.borel_minus());
    Ok(bb.dim() - m.stabilizer_within(&l, &bb).dim())
}

fn double_sum(a: &QSubspace, b: &QSubspace) -> QSubspace {
    let n = a.ambient();
    let mut rows: Vec<Vector<Rational>> = Vec::new();
    for x in a.vectors() {
        let mut row = x.clone();
        row.extend(std::iter::repeat_n(Rational::from_integer(0.into()), n));
        rows.push(row);
    }
    for y in b.vectors() {
        let mut row = vec![Rational::from_integer(0.into()); n];
        row.extend(y);
        rows.push(row);
    }
    Subspace::span(2 * n, &rows)
}

/// Rank of `Pi_0` on `O ∩ O'` with `O = G_Delta . Ad_{(m,v)} l` and
/// `O' = (B x B^-) . Ad_{(w, v1)} l`, by transversal dimension count.
pub fn pi0_rank(oracle: &Oracle, label: &Label, w: usize, v1: usize) -> Result<Pi0Rank> {
    let wg = oracle.weyl();
    let rs = wg.root_system();
    if !wg.is_min_coset(wg.get(v1), label.triple.t) {
        return Err(WeylError::NotMinimal { v: wg.get(v1).name(), t: label.triple.t }.into());
    }
    let dim_o = gdelta_orbit_dim(oracle, label)?;
    let dim_o_prime = bb_orbit_dim(oracle, label, w, v1)?;
    let z = rs.rank() - label.triple.s.len();
    let intersection_dim = dim_o as i64 + dim_o_prime as i64 - (rs.dim_g() - z) as i64;
    let x = x_space(wg, &label.triple, wg.get(label.v))?;
    let correction = rank_correction(wg, wg.get(w), wg.get(v1), &x);
    Ok(Pi0Rank { dim_o, dim_o_prime, intersection_dim, correction, rank: intersection_dim - correction as i64 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Nonempty {
    CertifiedNonempty,
    Unknown,
}

impl Nonempty {
    pub fn as_str(self) -> &'static str {
        match self {
            Nonempty::CertifiedNonempty => "certified-nonempty",
            Nonempty::Unknown => "unknown",
        }
    }
}

/// Random sampler of Bruhat cells of the adjoint group over `GF(10007)`.
pub struct BruhatSampler<'a> {
    model: &'a LieAlgebraModel,
    wg: &'a WeylGroup,
    /// `(ad e_beta)^k / k!` for positive beta, k = 0, 1, ...
    exp_terms: Vec<Vec<Matrix<F10007>>>,
    lifts: Vec<Matrix<F10007>>,
    order: Vec<usize>,
    profiles: HashMap<Vec<u16>, usize>,
}

impl<'a> BruhatSampler<'a> {
    pub fn new(model: &'a LieAlgebraModel, wg: &'a WeylGroup) -> Result<Self> {
        let n = model.dim();
        let rs = model.root_system();
        let np = rs.num_positive();
        let mut exp_terms = Vec::new();
        for k in 0..np {
            let ad = model.ad::<F10007>(&crate::linalg::unit(n, model.e(k)));
            let mut terms = vec![Matrix::identity(n)];
            let mut t = Matrix::identity(n);
            for j in 1..=n {
                t = t.mul(&ad).scale(&F10007::from_i64(j as i64).inv());
                if t.is_zero() {
                    break;
                }
                terms.push(t.clone());
            }
            exp_terms.push(terms);
        }
        let lifts: Vec<Matrix<F10007>> = wg.elements().iter().map(|w| model.weyl_lift(w)).collect();
        // basis by increasing height, so Ad(B^-) is upper triangular
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&a| match model.root_of(a) {
            None => (0, a),
            Some(k) => (rs.height(k), a),
        });
        let mut s = BruhatSampler { model, wg, exp_terms, lifts, order, profiles: HashMap::new() };
        for w in wg.elements() {
            let p = s.profile(&s.lifts[w.id]);
            if s.profiles.insert(p, w.id).is_some() {
                return Err(PoissonError::ProfilesCollide);
            }
        }
        Ok(s)
    }

    /// Ranks of all lower-left blocks in the height order.
    fn profile(&self, x: &Matrix<F10007>) -> Vec<u16> {
        let n = x.rows();
        let y: Vec<Vec<u64>> = self.order.iter().map(|&i| self.order.iter().map(|&j| x[(i, j)].value()).collect()).collect();
        let mut out = Vec::with_capacity(n * n);
        for top in (0..n).rev() {
            let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
            let mut rank = 0u16;
            for j in 0..n {
                let mut col: Vec<u64> = (top..n).map(|i| y[i][j]).collect();
                for (piv, b) in &basis {
                    let c = col[*piv];
                    if c != 0 {
                        for (ci, bi) in col.iter_mut().zip(b) {
                            *ci = (*ci + PRIME - c * bi % PRIME) % PRIME;
                        }
                    }
                }
                if let Some(piv) = col.iter().position(|&c| c != 0) {
                    let inv = modinv(col[piv]);
                    for c in col.iter_mut() {
                        *c = *c * inv % PRIME;
                    }
                    basis.push((piv, col));
                    rank += 1;
                }
                out.push(rank);
            }
        }
        out
    }

    /// `b = t prod exp(c_beta ad e_beta)`, each `c_beta` zero with probability `zero_prob`.
    fn random_borel(&self, rng: &mut ChaCha8Rng, zero_prob: f64) -> Matrix<F10007> {
        let r = self.model.rank();
        let t: Vec<F10007> = (0..r).map(|_| F10007::new(rng.gen_range(1..PRIME))).collect();
        let mut b = self.model.torus_matrix(&t);
        for terms in &self.exp_terms {
            if rng.gen_bool(zero_prob) {
                continue;
            }
            let c = F10007::new(rng.gen_range(1..PRIME));
            let mut e = terms[0].clone();
            let mut cp = c;
            for t in &terms[1..] {
                e = e.add(&t.scale(&cp));
                cp = cp * c;
            }
            b = b.mul(&e);
        }
        b
    }

    /// For every `(v, w)`, whether some sample `g` of `BuB` has `g w` in `B^- v B^-`.
    pub fn certify_for_u(&self, u: &WeylElement, samples: usize, seed: u64) -> HashSet<(usize, usize)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (u.id as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let mut hits = HashSet::new();
        for i in 0..samples {
            // cycle the sparsity so small cells are reached too
            let p = SPARSITY[i % SPARSITY.len()];
            let g = self.random_borel(&mut rng, p).mul(&self.lifts[u.id]).mul(&self.random_borel(&mut rng, p));
            for w in self.wg.elements() {
                let p = self.profile(&g.mul(&self.lifts[w.id]));
                if let Some(&v) = self.profiles.get(&p) {
                    hits.insert((v, w.id));
                }
            }
        }
        hits
    }
}

fn modinv(a: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % PRIME;
    let mut e = PRIME - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % PRIME;
        }
        b = b * b % PRIME;
        e >>= 1;
    }
    r
}

/// One-sided certificate that `BuB ∩ B^- v B^- w^{-1}` is nonempty.
pub fn nonempty_check(oracle: &Oracle, u: &WeylElement, v: &WeylElement, w: &WeylElement, samples: usize, seed: u64) -> Result<Nonempty> {
    let s = BruhatSampler::new(oracle.model(), oracle.weyl())?;
    let hits = s.certify_for_u(u, samples, seed);
    Ok(if hits.contains(&(v.id, w.id)) { Nonempty::CertifiedNonempty } else { Nonempty::Unknown })
}

/// One row of the flag-case table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlagRow {
    pub u: String,
    pub v: String,
    pub w: String,
    pub dim: i64,
    pub rank: i64,
    pub correction: usize,
    pub nonempty: Nonempty,
    /// Closed form `(rank, dim)` of the double Bruhat example.
    #[serde(skip)]
    pub closed_form: (i64, i64),
}

/// All `(u, v, w)` in `W^3` for the closed orbit `V + (n + n^-)`, computed with
/// the general machinery (`O` through `v = w`, `O'` through `(u, v)`).
pub fn flag_table(oracle: &Oracle, samples: usize, seed: u64) -> Result<Vec<FlagRow>> {
    let wg = oracle.weyl();
    let rs = wg.root_system();
    let tr = Triple::trivial();
    let v_space = canonical_vs(rs, &tr, seed).remove(0).v;
    let id = TorusElement::identity(rs.rank());
    let label_for = |w: usize| Label { triple: tr.clone(), v_space: v_space.clone(), v: w, m: id.clone() };
    let sampler = BruhatSampler::new(oracle.model(), wg)?;
    let mut dim_o = Vec::new();
    let mut xs = Vec::new();
    for w in wg.elements() {
        dim_o.push(gdelta_orbit_dim(oracle, &label_for(w.id))?);
        xs.push(x_space(wg, &tr, w)?);
    }
    let n = rs.dim_g() as i64;
    let z = rs.rank() as i64;
    let mut rows = Vec::new();
    for u in wg.elements() {
        let hits = sampler.certify_for_u(u, samples, seed);
        for v in wg.elements() {
            let dim_op = bb_orbit_dim(oracle, &label_for(0), u.id, v.id)?;
            for w in wg.elements() {
                let dim = dim_o[w.id] as i64 + dim_op as i64 - (n - z);
                let correction = rank_correction(wg, u, v, &xs[w.id]);
                let nonempty = if hits.contains(&(v.id, w.id)) { Nonempty::CertifiedNonempty } else { Nonempty::Unknown };
                rows.push(FlagRow {
                    u: u.name(),
                    v: v.name(),
                    w: w.name(),
                    dim,
                    rank: dim - correction as i64,
                    correction,
                    nonempty,
                    closed_form: double_bruhat_rank(wg, u, v, w),
                });
            }
        }
    }
    Ok(rows)
}

/// `Ad_{(m, v)} l_{S,T,d,V}` with `v` lifted through `s_i^{-1}` instead of `s_i`.
pub fn alternative_lift(model: &LieAlgebraModel, w: &WeylElement) -> QMatrix {
    w.reduced_word().iter().fold(Matrix::identity(model.dim()), |acc, &i| {
        acc.mul(&model.simple_lift::<Rational>(i).inverse().expect("lifts are invertible"))
    })
}
