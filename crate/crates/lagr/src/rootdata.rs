//! Root systems from type strings, and the Killing form on the Cartan
//! subalgebra in the basis `H_{alpha_i}`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::field::{qi, Field};
use crate::linalg::{Matrix, Subspace};
use crate::Rational;

pub const DEFAULT_RANK_CAP: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootDataError {
    #[error("malformed type spec at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unsupported simple type {name} at position {pos}")]
    Unsupported { pos: usize, name: String },
    #[error("total rank {rank} exceeds the cap {cap}")]
    RankCap { rank: usize, cap: usize },
    #[error("map {0} is not an isometry between the given subsets")]
    NotIsometry(String),
}

/// One simple factor, e.g. `B3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SimpleType {
    pub family: char,
    pub rank: usize,
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

impl SimpleType {
    fn supported(&self) -> bool {
        let n = self.rank;
        match self.family {
            'A' => n >= 1,
            'B' | 'C' => n >= 2,
            'D' => n >= 4,
            'E' => (6..=8).contains(&n),
            'F' => n == 4,
            'G' => n == 2,
            _ => false,
        }
    }

    /// Symmetric Gram matrix of the simple roots, short roots of norm 2.
    fn gram(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut b = vec![vec![0i64; n]; n];
        let link = |b: &mut Vec<Vec<i64>>, i: usize, j: usize, v: i64| {
            b[i][j] = v;
            b[j][i] = v;
        };
        match self.family {
            'A' => {
                for i in 0..n {
                    b[i][i] = 2;
                }
                for i in 0..n.saturating_sub(1) {
                    link(&mut b, i, i + 1, -1);
                }
            }
            'B' => {
                for i in 0..n - 1 {
                    b[i][i] = 4;
                }
                b[n - 1][n - 1] = 2;
                for i in 0..n - 1 {
                    link(&mut b, i, i + 1, -2);
                }
            }
            'C' => {
                for i in 0..n - 1 {
                    b[i][i] = 2;
                }
                b[n - 1][n - 1] = 4;
                for i in 0..n - 2 {
                    link(&mut b, i, i + 1, -1);
                }
                link(&mut b, n - 2, n - 1, -2);
            }
            'D' => {
                for i in 0..n {
                    b[i][i] = 2;
                }
                for i in 0..n - 2 {
                    link(&mut b, i, i + 1, -1);
                }
                link(&mut b, n - 3, n - 1, -1);
            }
            'E' => {
                for i in 0..n {
                    b[i][i] = 2;
                }
                // 1-3-4-5-6-7-8 with 2 attached to 4 (1-based)
                link(&mut b, 0, 2, -1);
                link(&mut b, 1, 3, -1);
                for i in 2..n - 1 {
                    link(&mut b, i, i + 1, -1);
                }
            }
            'F' => {
                b[0][0] = 4;
                b[1][1] = 4;
                b[2][2] = 2;
                b[3][3] = 2;
                link(&mut b, 0, 1, -2);
                link(&mut b, 1, 2, -2);
                link(&mut b, 2, 3, -1);
            }
            'G' => {
                b[0][0] = 2;
                b[1][1] = 6;
                link(&mut b, 0, 1, -3);
            }
            _ => unreachable!("unsupported family"),
        }
        b
    }

    fn weyl_order(&self) -> u128 {
        let n = self.rank as u128;
        let fact = |k: u128| (1..=k).product::<u128>();
        match self.family {
            'A' => fact(n + 1),
            'B' | 'C' => (1u128 << n) * fact(n),
            'D' => (1u128 << (n - 1)) * fact(n),
            'E' => match n {
                6 => 51_840,
                7 => 2_903_040,
                _ => 696_729_600,
            },
            'F' => 1152,
            _ => 12,
        }
    }

    fn positive_root_count(&self) -> usize {
        let n = self.rank;
        match self.family {
            'A' => n * (n + 1) / 2,
            'B' | 'C' => n * n,
            'D' => n * (n - 1),
            'E' => match n {
                6 => 36,
                7 => 63,
                _ => 120,
            },
            'F' => 24,
            _ => 6,
        }
    }
}

/// Parses `SIMPLE ('x' SIMPLE)*` with `SIMPLE := [A-G][1-9][0-9]*`.
pub fn parse_type_spec(spec: &str) -> Result<Vec<SimpleType>, RootDataError> {
    let bytes = spec.as_bytes();
    let mut pos = 0;
    let mut out = Vec::new();
    loop {
        let start = pos;
        let Some(&c) = bytes.get(pos) else {
            return Err(RootDataError::Parse { pos, msg: "expected a simple type letter A-G".into() });
        };
        if !(b'A'..=b'G').contains(&c) {
            return Err(RootDataError::Parse {
                pos,
                msg: format!("expected a simple type letter A-G, found '{}'", c as char),
            });
        }
        pos += 1;
        match bytes.get(pos) {
            Some(b'1'..=b'9') => {}
            _ => return Err(RootDataError::Parse { pos, msg: "expected a rank starting with 1-9".into() }),
        }
        let digits_start = pos;
        while matches!(bytes.get(pos), Some(b'0'..=b'9')) {
            pos += 1;
        }
        let rank: usize = spec[digits_start..pos]
            .parse()
            .map_err(|_| RootDataError::Parse { pos: digits_start, msg: "rank out of range".into() })?;
        let st = SimpleType { family: c as char, rank };
        if !st.supported() {
            return Err(RootDataError::Unsupported { pos: start, name: st.to_string() });
        }
        out.push(st);
        match bytes.get(pos) {
            None => return Ok(out),
            Some(b'x') => pos += 1,
            Some(&o) => {
                return Err(RootDataError::Parse { pos, msg: format!("expected 'x' or end, found '{}'", o as char) })
            }
        }
    }
}

/// A subset of the simple roots, as a bitmask. Ordered lexicographically
/// by the sorted index list.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct NodeSet(u32);

impl NodeSet {
    pub fn empty() -> Self {
        NodeSet(0)
    }

    pub fn full(r: usize) -> Self {
        NodeSet(if r >= 32 { u32::MAX } else { (1u32 << r) - 1 })
    }

    pub fn from_bits(bits: u32) -> Self {
        NodeSet(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 32 && self.0 & (1 << i) != 0
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.0 & (1 << i) != 0)
    }

    pub fn is_subset(self, o: NodeSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn intersect(self, o: NodeSet) -> Self {
        NodeSet(self.0 & o.0)
    }

    pub fn union(self, o: NodeSet) -> Self {
        NodeSet(self.0 | o.0)
    }

    pub fn minus(self, o: NodeSet) -> Self {
        NodeSet(self.0 & !o.0)
    }

    /// All subsets of `self`, in increasing bitmask order.
    pub fn subsets(self) -> Vec<NodeSet> {
        let mut out = Vec::new();
        let mut s = 0u32;
        loop {
            out.push(NodeSet(s));
            if s == self.0 {
                break;
            }
            s = (s.wrapping_sub(self.0)) & self.0;
        }
        out
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for NodeSet {
    fn from_iter<I: IntoIterator<Item = usize>>(it: I) -> Self {
        let mut s = NodeSet::empty();
        for i in it {
            s.insert(i);
        }
        s
    }
}

impl Ord for NodeSet {
    fn cmp(&self, o: &Self) -> Ordering {
        self.iter().cmp(o.iter())
    }
}

impl PartialOrd for NodeSet {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.iter().map(|i| format!("a{}", i + 1)).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A bijection between two subsets of simple roots.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Isometry {
    pairs: Vec<(usize, usize)>,
}

impl Isometry {
    /// From (source, target) pairs; panics if the pairs do not form a bijection.
    pub fn new(mut pairs: Vec<(usize, usize)>) -> Self {
        pairs.sort_unstable();
        for w in pairs.windows(2) {
            assert!(w[0].0 != w[1].0, "repeated source node");
        }
        let mut targets: Vec<usize> = pairs.iter().map(|p| p.1).collect();
        targets.sort_unstable();
        targets.dedup();
        assert_eq!(targets.len(), pairs.len(), "repeated target node");
        Isometry { pairs }
    }

    pub fn identity(s: NodeSet) -> Self {
        Isometry { pairs: s.iter().map(|i| (i, i)).collect() }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn domain(&self) -> NodeSet {
        self.pairs.iter().map(|p| p.0).collect()
    }

    pub fn image(&self) -> NodeSet {
        self.pairs.iter().map(|p| p.1).collect()
    }

    pub fn apply(&self, i: usize) -> Option<usize> {
        self.pairs.iter().find(|p| p.0 == i).map(|p| p.1)
    }

    pub fn inverse(&self) -> Self {
        Isometry::new(self.pairs.iter().map(|&(a, b)| (b, a)).collect())
    }

    pub fn restrict(&self, s: NodeSet) -> Self {
        Isometry { pairs: self.pairs.iter().copied().filter(|p| s.contains(p.0)).collect() }
    }

    pub fn image_of(&self, s: NodeSet) -> NodeSet {
        s.iter().filter_map(|i| self.apply(i)).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.pairs.iter().all(|p| p.0 == p.1)
    }

    /// Linear extension to root coordinates supported on the domain.
    pub fn apply_root(&self, coords: &[i64]) -> Option<Vec<i64>> {
        let mut out = vec![0; coords.len()];
        for (i, &c) in coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            out[self.apply(i)?] += c;
        }
        Some(out)
    }

    /// Gram preservation check against the Killing Gram matrix.
    pub fn is_isometry(&self, rs: &RootSystem) -> bool {
        let k = rs.killing();
        self.pairs
            .iter()
            .all(|&(a, b)| self.pairs.iter().all(|&(c, d)| k[(a, c)] == k[(b, d)]))
    }
}

impl fmt::Display for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "id");
        }
        let parts: Vec<String> = self.pairs.iter().map(|(a, b)| format!("a{}->a{}", a + 1, b + 1)).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Cartan data, positive roots and the exact Killing Gram matrix.
#[derive(Clone, Debug)]
pub struct RootSystem {
    type_spec: String,
    factors: Vec<SimpleType>,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    sym: Vec<Vec<i64>>,
    positive: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    killing: Matrix<Rational>,
    factor_of: Vec<usize>,
}

impl RootSystem {
    pub fn new(spec: &str) -> Result<Self, RootDataError> {
        Self::with_cap(spec, DEFAULT_RANK_CAP)
    }

    pub fn with_cap(spec: &str, cap: usize) -> Result<Self, RootDataError> {
        let factors = parse_type_spec(spec)?;
        let rank: usize = factors.iter().map(|f| f.rank).sum();
        if rank > cap || rank > 31 {
            return Err(RootDataError::RankCap { rank, cap: cap.min(31) });
        }
        let mut sym = vec![vec![0i64; rank]; rank];
        let mut factor_of = Vec::with_capacity(rank);
        let mut off = 0;
        for (fi, f) in factors.iter().enumerate() {
            let g = f.gram();
            for i in 0..f.rank {
                for j in 0..f.rank {
                    sym[off + i][off + j] = g[i][j];
                }
                factor_of.push(fi);
            }
            off += f.rank;
        }
        let cartan: Vec<Vec<i64>> =
            (0..rank).map(|i| (0..rank).map(|j| 2 * sym[i][j] / sym[i][i]).collect()).collect();
        let positive = generate_positive_roots(&cartan);
        let mut index = HashMap::new();
        let np = positive.len();
        for (k, r) in positive.iter().enumerate() {
            index.insert(r.clone(), k);
            index.insert(r.iter().map(|c| -c).collect(), k + np);
        }
        let mut rs = RootSystem {
            type_spec: spec.to_string(),
            factors,
            rank,
            cartan,
            sym,
            positive,
            index,
            killing: Matrix::zeros(0, 0),
            factor_of,
        };
        rs.killing = rs.compute_killing_gram();
        Ok(rs)
    }

    fn compute_killing_gram(&self) -> Matrix<Rational> {
        let r = self.rank;
        // kappa(h_i, h_j) = sum over all roots of beta(h_i) beta(h_j)
        let mut c = Matrix::<Rational>::zeros(r, r);
        for beta in &self.positive {
            let vals: Vec<i64> = (0..r).map(|i| self.coroot_pairing(beta, i)).collect();
            for i in 0..r {
                for j in 0..r {
                    c[(i, j)] = c[(i, j)].clone() + qi(2 * vals[i] * vals[j]);
                }
            }
        }
        // column j of A holds alpha_j(h_k)
        let a = Matrix::<Rational>::from_fn(r, r, |k, j| qi(self.cartan[k][j]));
        let cinv = c.inverse().expect("Killing form is nondegenerate");
        a.transpose().mul(&cinv).mul(&a)
    }

    pub fn type_spec(&self) -> &str {
        &self.type_spec
    }

    pub fn factors(&self) -> &[SimpleType] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Simple factor containing simple root `i`.
    pub fn factor_of(&self, i: usize) -> usize {
        self.factor_of[i]
    }

    pub fn gamma(&self) -> NodeSet {
        NodeSet::full(self.rank)
    }

    /// `cartan()[i][j] = alpha_j(h_i) = 2(alpha_i, alpha_j)/(alpha_i, alpha_i)`.
    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// Integral symmetric form on the root lattice, short roots of norm 2 in each factor.
    pub fn sym_form(&self) -> &[Vec<i64>] {
        &self.sym
    }

    pub fn killing(&self) -> &Matrix<Rational> {
        &self.killing
    }

    pub fn num_positive(&self) -> usize {
        self.positive.len()
    }

    pub fn num_roots(&self) -> usize {
        2 * self.positive.len()
    }

    pub fn dim_g(&self) -> usize {
        self.rank + 2 * self.positive.len()
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive
    }

    /// Coordinates of root `k`; indices `>= num_positive()` are negatives.
    pub fn root(&self, k: usize) -> Vec<i64> {
        let np = self.positive.len();
        if k < np {
            self.positive[k].clone()
        } else {
            self.positive[k - np].iter().map(|c| -c).collect()
        }
    }

    pub fn index_of(&self, coords: &[i64]) -> Option<usize> {
        self.index.get(coords).copied()
    }

    pub fn is_positive(&self, k: usize) -> bool {
        k < self.positive.len()
    }

    pub fn neg(&self, k: usize) -> usize {
        let np = self.positive.len();
        if k < np {
            k + np
        } else {
            k - np
        }
    }

    /// Root index of the simple root `alpha_i`.
    pub fn simple(&self, i: usize) -> usize {
        i
    }

    /// Simple-root number of root `k`, if it is simple.
    pub fn simple_number(&self, k: usize) -> Option<usize> {
        (k < self.rank).then_some(k)
    }

    pub fn height(&self, k: usize) -> i64 {
        self.root(k).iter().sum()
    }

    /// `<beta, alpha_i^vee>`.
    pub fn coroot_pairing(&self, beta: &[i64], i: usize) -> i64 {
        beta.iter().zip(&self.cartan[i]).map(|(c, a)| c * a).sum()
    }

    /// Positive roots lying in the span of `s`.
    pub fn positive_in(&self, s: NodeSet) -> Vec<usize> {
        (0..self.positive.len()).filter(|&k| self.in_span(k, s)).collect()
    }

    pub fn in_span(&self, k: usize, s: NodeSet) -> bool {
        self.root(k).iter().enumerate().all(|(i, &c)| c == 0 || s.contains(i))
    }

    /// Killing form on roots: `<<beta, gamma>>`.
    pub fn root_form(&self, beta: &[i64], gamma: &[i64]) -> Rational {
        let b: Vec<Rational> = beta.iter().map(|&c| qi(c)).collect();
        let g: Vec<Rational> = gamma.iter().map(|&c| qi(c)).collect();
        self.killing.form(&b, &g)
    }

    /// Row vector of the functional `beta` on h in the `H_{alpha}` basis.
    pub fn root_functional(&self, beta: &[i64]) -> Vec<Rational> {
        let b: Vec<Rational> = beta.iter().map(|&c| qi(c)).collect();
        self.killing.mul_vec(&b)
    }

    /// `H_{alpha_i} = scale * h_i` where `h_i` is the coroot.
    pub fn coroot_scale(&self, i: usize) -> Rational {
        self.killing[(i, i)].clone() / qi(2)
    }

    pub fn weyl_order(&self) -> u128 {
        self.factors.iter().map(|f| f.weyl_order()).product()
    }

    pub fn expected_positive_count(&self) -> usize {
        self.factors.iter().map(|f| f.positive_root_count()).sum()
    }

    pub fn cartan_subspaces(&self, s: NodeSet, t: NodeSet, d: &Isometry) -> Result<CartanSubspaceData, RootDataError> {
        CartanSubspaceData::new(self, s, t, d)
    }
}

fn generate_positive_roots(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let r = cartan.len();
    let mut roots: Vec<Vec<i64>> = (0..r)
        .map(|i| {
            let mut v = vec![0; r];
            v[i] = 1;
            v
        })
        .collect();
    let mut seen: std::collections::HashSet<Vec<i64>> = roots.iter().cloned().collect();
    let mut layer = roots.clone();
    while !layer.is_empty() {
        let mut next = Vec::new();
        for beta in &layer {
            for i in 0..r {
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if seen.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let pairing: i64 = beta.iter().zip(&cartan[i]).map(|(c, a)| c * a).sum();
                let q = p - pairing;
                if q > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if seen.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        roots.extend(next.iter().cloned());
        layer = next;
    }
    roots.sort_by(|a, b| {
        let ha: i64 = a.iter().sum();
        let hb: i64 = b.iter().sum();
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });
    roots
}

/// `h_S`, `z_S`, the projections `chi_S`, `chi_T` and `gamma_d` for a triple.
#[derive(Clone, Debug)]
pub struct CartanSubspaceData {
    pub s: NodeSet,
    pub t: NodeSet,
    pub h_s: Subspace<Rational>,
    pub z_s: Subspace<Rational>,
    pub h_t: Subspace<Rational>,
    pub z_t: Subspace<Rational>,
    /// Projection of h onto h_S along z_S.
    pub chi_s: Matrix<Rational>,
    pub chi_t: Matrix<Rational>,
    /// `gamma_d` on h_S, extended by zero on z_S (that is, `gamma_d chi_S`).
    pub gamma_chi: Matrix<Rational>,
}

/// `z_S`: common kernel of the functionals in `s`.
pub fn z_space(rs: &RootSystem, s: NodeSet) -> Subspace<Rational> {
    let r = rs.rank();
    let rows: Vec<Vec<Rational>> = s.iter().map(|i| rs.killing().row(i).to_vec()).collect();
    Subspace::kernel_of(&Matrix::from_rows(r, &rows))
}

pub fn h_space(rs: &RootSystem, s: NodeSet) -> Subspace<Rational> {
    Subspace::coordinate(rs.rank(), s.iter())
}

/// Projection onto `h_S` along `z_S`.
pub fn chi(rs: &RootSystem, s: NodeSet) -> Matrix<Rational> {
    let r = rs.rank();
    let hs = h_space(rs, s);
    let zs = z_space(rs, s);
    let p = hs.basis().vstack(zs.basis()).transpose();
    let pinv = p.inverse().expect("h = h_S + z_S");
    let k = hs.dim();
    let diag = Matrix::from_fn(r, r, |i, j| if i == j && i < k { Rational::one() } else { Rational::zero() });
    p.mul(&diag).mul(&pinv)
}

impl CartanSubspaceData {
    pub fn new(rs: &RootSystem, s: NodeSet, t: NodeSet, d: &Isometry) -> Result<Self, RootDataError> {
        if d.domain() != s || d.image() != t || !d.is_isometry(rs) {
            return Err(RootDataError::NotIsometry(d.to_string()));
        }
        let r = rs.rank();
        let chi_s = chi(rs, s);
        let chi_t = chi(rs, t);
        let mut perm = Matrix::<Rational>::zeros(r, r);
        for &(a, b) in d.pairs() {
            perm[(b, a)] = Rational::one();
        }
        Ok(CartanSubspaceData {
            s,
            t,
            h_s: h_space(rs, s),
            z_s: z_space(rs, s),
            h_t: h_space(rs, t),
            z_t: z_space(rs, t),
            gamma_chi: perm.mul(&chi_s),
            chi_s,
            chi_t,
        })
    }
}

/// Helper used by several modules: integer vector to rationals.
pub fn to_rational(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&c| Rational::from_i64(c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::q;

    #[test]
    fn small_types() {
        let a2 = RootSystem::new("A2").unwrap();
        assert_eq!((a2.rank(), a2.num_positive(), a2.dim_g()), (2, 3, 8));
        let a1 = RootSystem::new("A1").unwrap();
        assert_eq!((a1.rank(), a1.num_positive(), a1.dim_g()), (1, 1, 3));
        let aa = RootSystem::new("A1xA1").unwrap();
        assert_eq!(aa.num_positive(), 2);
        assert_eq!(aa.cartan()[0][1], 0);
    }

    #[test]
    fn root_counts_match_classification() {
        for spec in ["A1", "A3", "B2", "B3", "C3", "D4", "G2", "F4", "E6", "A2xG2", "B4", "C4"] {
            let rs = RootSystem::new(spec).unwrap();
            assert_eq!(rs.num_positive(), rs.expected_positive_count(), "{spec}");
        }
    }

    #[test]
    fn killing_gram_examples() {
        let a1 = RootSystem::new("A1").unwrap();
        assert_eq!(a1.killing()[(0, 0)], q(1, 2));
        let aa = RootSystem::new("A1xA1").unwrap();
        assert!(aa.killing()[(0, 1)].is_zero());
        let a2 = RootSystem::new("A2").unwrap();
        // proportional to the symmetrized Cartan matrix [[2,-1],[-1,2]] with factor 1/6
        assert_eq!(a2.killing()[(0, 0)], q(1, 3));
        assert_eq!(a2.killing()[(0, 1)], q(-1, 6));
    }

    #[test]
    fn cartan_integers_from_gram() {
        for spec in ["B3", "G2", "C3", "F4", "A2xB2"] {
            let rs = RootSystem::new(spec).unwrap();
            let n = rs.num_roots();
            for a in 0..n {
                for b in 0..n {
                    let ra = rs.root(a);
                    let rb = rs.root(b);
                    let c = qi(2) * rs.root_form(&ra, &rb) / rs.root_form(&rb, &rb);
                    // root string integer: p - q for the b-string through a
                    let mut p = 0;
                    let mut x = ra.clone();
                    loop {
                        for (xi, bi) in x.iter_mut().zip(&rb) {
                            *xi -= bi;
                        }
                        if rs.index_of(&x).is_some() {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    let mut qn = 0;
                    let mut y = ra.clone();
                    loop {
                        for (yi, bi) in y.iter_mut().zip(&rb) {
                            *yi += bi;
                        }
                        if rs.index_of(&y).is_some() {
                            qn += 1;
                        } else {
                            break;
                        }
                    }
                    if a != b && a != rs.neg(b) {
                        assert_eq!(c, qi(p - qn), "{spec} {ra:?} {rb:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn parse_errors_report_position() {
        assert_eq!(
            parse_type_spec("A2xQ3"),
            Err(RootDataError::Parse { pos: 3, msg: "expected a simple type letter A-G, found 'Q'".into() })
        );
        assert!(matches!(parse_type_spec("B1"), Err(RootDataError::Unsupported { pos: 0, .. })));
        assert!(matches!(parse_type_spec("A1xE9"), Err(RootDataError::Unsupported { pos: 3, .. })));
        assert!(matches!(parse_type_spec("A0"), Err(RootDataError::Parse { pos: 1, .. })));
        assert!(matches!(parse_type_spec("A2x"), Err(RootDataError::Parse { pos: 3, .. })));
        assert!(matches!(parse_type_spec(""), Err(RootDataError::Parse { pos: 0, .. })));
        assert!(matches!(RootSystem::new("A9"), Err(RootDataError::RankCap { rank: 9, cap: 8 })));
        assert!(RootSystem::with_cap("A9", 9).is_ok());
    }

    #[test]
    fn cartan_subspace_examples() {
        let a2 = RootSystem::new("A2").unwrap();
        let g = a2.gamma();
        let full = a2.cartan_subspaces(g, g, &Isometry::identity(g)).unwrap();
        assert_eq!(full.z_s.dim(), 0);
        assert_eq!(full.chi_s, Matrix::identity(2));
        let e = NodeSet::empty();
        let none = a2.cartan_subspaces(e, e, &Isometry::identity(e)).unwrap();
        assert_eq!(none.h_s.dim(), 0);
        assert!(none.chi_s.is_zero());
        assert_eq!(none.z_s, Subspace::full(2));
        let s1: NodeSet = [0].into_iter().collect();
        let s2: NodeSet = [1].into_iter().collect();
        let d = Isometry::new(vec![(0, 1)]);
        let c = a2.cartan_subspaces(s1, s2, &d).unwrap();
        assert_eq!(c.gamma_chi.mul_vec(&[qi(1), qi(0)]), vec![qi(0), qi(1)]);
        assert!(matches!(
            RootSystem::new("B2").unwrap().cartan_subspaces(s1, s2, &d),
            Err(RootDataError::NotIsometry(_))
        ));
    }

    #[test]
    fn cartan_subspace_invariants() {
        for spec in ["A3", "B3", "G2", "A1xA2"] {
            let rs = RootSystem::new(spec).unwrap();
            for s in rs.gamma().subsets() {
                let c = rs.cartan_subspaces(s, s, &Isometry::identity(s)).unwrap();
                assert_eq!(c.h_s.dim() + c.z_s.dim(), rs.rank());
                assert_eq!(c.h_s.sum(&c.z_s).dim(), rs.rank());
                assert_eq!(c.chi_s.mul(&c.chi_s), c.chi_s);
                assert_eq!(Subspace::full(rs.rank()).image(&c.chi_s), c.h_s);
                assert_eq!(Subspace::kernel_of(&c.chi_s), c.z_s);
                for i in s.iter() {
                    let h = crate::linalg::unit(rs.rank(), i);
                    assert_eq!(c.chi_s.mul_vec(&h), h);
                }
            }
        }
    }

    #[test]
    fn nodeset_order_and_subsets() {
        let a: NodeSet = [0, 2].into_iter().collect();
        let b: NodeSet = [1].into_iter().collect();
        assert!(a < b);
        assert_eq!(NodeSet::full(3).subsets().len(), 8);
        assert_eq!(a.to_string(), "{a1,a3}");
    }
}
