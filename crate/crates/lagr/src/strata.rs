//! Strata `L^eps(S,T,d)`, orbit and stratum dimensions, closures,
//! irreducible components and orbit representatives.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use crate::bd::{enumerate_triples, s_of, BdError, Triple};
use crate::chevalley::TorusElement;
use crate::lagrlin::{canonical_vs, lagrangian_grassmannian_dim, parity, witness_vs, zz_space, LagrError, LagrangianSubspace, NamedV};
use crate::linalg::{Matrix, Subspace, Vector};
use crate::rootdata::{CartanSubspaceData, Isometry, RootDataError, RootSystem};
use crate::weyl::WeylGroup;
use crate::{QSubspace, Rational};

#[derive(Debug, Error)]
pub enum StrataError {
    #[error(transparent)]
    Bd(#[from] BdError),
    #[error(transparent)]
    Lagr(#[from] LagrError),
    #[error(transparent)]
    RootData(#[from] RootDataError),
    #[error("GDelta labels only support torus elements m")]
    NonTorus,
}

type Result<T> = std::result::Result<T, StrataError>;

/// `n - z`: dimension of the `(G x G)`-orbit through `l_{S,T,d,V}`.
pub fn orbit_dim(rs: &RootSystem, tr: &Triple) -> usize {
    rs.dim_g() - (rs.rank() - tr.s.len())
}

/// `n + z(z-3)/2`.
pub fn stratum_dim(rs: &RootSystem, tr: &Triple) -> usize {
    let n = rs.dim_g() as i64;
    let z = (rs.rank() - tr.s.len()) as i64;
    let v = n + z * (z - 3) / 2;
    debug_assert_eq!(v as usize, stratum_dim_bundle(rs, tr));
    v as usize
}

/// `dim(G/P_S x G/P_T^-) + dim G_S + z(z-1)/2`.
pub fn stratum_dim_bundle(rs: &RootSystem, tr: &Triple) -> usize {
    let np = rs.num_positive();
    let ps = rs.positive_in(tr.s).len();
    let pt = rs.positive_in(tr.t).len();
    let z = rs.rank() - tr.s.len();
    (np - ps) + (np - pt) + (tr.s.len() + 2 * ps) + z * z.saturating_sub(1) / 2
}

/// `{(x, gamma_d x) : x in h_S}` in `h + h`, `H` basis.
pub fn v_s(cd: &CartanSubspaceData, r: usize) -> QSubspace {
    let rows: Vec<Vector<Rational>> = cd
        .h_s
        .vectors()
        .iter()
        .map(|x| {
            let mut row = x.clone();
            row.extend(cd.gamma_chi.mul_vec(x));
            row
        })
        .collect();
    Subspace::span(2 * r, &rows)
}

/// `eps` of `l_{S,T,d,V}` from Cartan data alone:
/// `r - dim h_{S(1,d)}^{gamma_d} - dim V'` modulo 2.
pub fn eps_cartan(wg: &WeylGroup, tr: &Triple, v: &LagrangianSubspace<Rational>) -> Result<u8> {
    let rs = wg.root_system();
    let r = rs.rank();
    let s1 = s_of(wg, tr, wg.identity())?;
    let cd = rs.cartan_subspaces(tr.s, tr.t, &tr.d)?;
    let id = Matrix::identity(r);
    let zero = Subspace::zero(r);
    let z_prime = crate::rootdata::z_space(rs, s1).preimage_within(&cd.gamma_chi.sub(&cd.chi_t), &zero);
    let rows: Vec<Vector<Rational>> = z_prime
        .vectors()
        .iter()
        .map(|z| {
            let mut row = z.clone();
            row.extend(z.iter().cloned());
            row
        })
        .collect();
    let v_prime = Subspace::span(2 * r, &rows).intersect(&v.embedded().sum(&v_s(&cd, r)));
    let fixed = crate::rootdata::h_space(rs, s1).preimage_within(&cd.gamma_chi.sub(&id), &zero);
    Ok(((r + 2 * r - fixed.dim() - v_prime.dim()) % 2) as u8)
}

/// `eps` of the orbit of `l_{gamma_{d1}}` for `d1 in I(Gamma, Gamma)`.
pub fn eps_full(rs: &RootSystem, d1: &Isometry) -> u8 {
    let r = rs.rank();
    let cd = rs.cartan_subspaces(rs.gamma(), rs.gamma(), d1).expect("d1 is an isometry of Gamma");
    let fixed = Subspace::<Rational>::kernel_of(&cd.gamma_chi.sub(&Matrix::identity(r))).dim();
    ((r - fixed) % 2) as u8
}

/// Subspace of `h + h` (H basis) lying in `z_S + z_T`, as a Lagrangian there.
fn to_zz(rs: &RootSystem, cd: &CartanSubspaceData, sub: &QSubspace) -> Result<LagrangianSubspace<Rational>> {
    let r = rs.rank();
    let space = zz_space(rs, cd);
    let zs = cd.z_s.dim();
    let rows: Vec<Vector<Rational>> = sub
        .vectors()
        .iter()
        .map(|x| {
            let mut row = cd.z_s.coordinates(&x[..r]).expect("first component in z_S");
            row.extend(cd.z_t.coordinates(&x[r..]).expect("second component in z_T"));
            row
        })
        .collect();
    Ok(LagrangianSubspace::new(space, &Matrix::from_rows(2 * zs, &rows))?)
}

/// Boundary of the `(G x G)`-orbit through `l_{S,T,d,V}`: for every `S1 ⊆ S`,
/// `(S1, d(S1), d|S1, V + {(x, gamma_d x) : x in h_S ∩ z_S1})`. Includes `S1 = S`.
pub fn orbit_closure(rs: &RootSystem, tr: &Triple, v: &LagrangianSubspace<Rational>) -> Result<Vec<(Triple, LagrangianSubspace<Rational>)>> {
    let r = rs.rank();
    let cd = rs.cartan_subspaces(tr.s, tr.t, &tr.d)?;
    let mut out = Vec::new();
    for s1 in tr.s.subsets() {
        let d1 = tr.d.restrict(s1);
        let tr1 = Triple { s: s1, t: d1.image(), d: d1 };
        let cd1 = rs.cartan_subspaces(tr1.s, tr1.t, &tr1.d)?;
        let extra = cd.h_s.intersect(&cd1.z_s);
        let rows: Vec<Vector<Rational>> = extra
            .vectors()
            .iter()
            .map(|x| {
                let mut row = x.clone();
                row.extend(cd.gamma_chi.mul_vec(x));
                row
            })
            .collect();
        let v1 = v.embedded().sum(&Subspace::span(2 * r, &rows));
        out.push((tr1, to_zz(rs, &cd1, &v1)?));
    }
    Ok(out)
}

/// `(S, T, d, eps)` key of a stratum.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StratumKey {
    pub triple: Triple,
    pub eps: u8,
}

impl fmt::Display for StratumKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L^{}({})", self.eps, self.triple)
    }
}

#[derive(Clone, Debug)]
pub struct Stratum {
    pub key: StratumKey,
    pub z: usize,
    pub orbit_dim: usize,
    pub stratum_dim: usize,
    /// Name of the V realizing this parity.
    pub witness: String,
    pub is_component: bool,
    /// Strata in the closure, other than this one.
    pub boundary: Vec<StratumKey>,
}

#[derive(Clone, Debug)]
pub struct Census {
    pub type_spec: String,
    pub strata: Vec<Stratum>,
    /// `(S, T, d, eps)` with no witness V.
    pub unrealized: Vec<StratumKey>,
    pub note: Option<String>,
}

impl Census {
    pub fn components(&self) -> impl Iterator<Item = &Stratum> {
        self.strata.iter().filter(|s| s.is_component)
    }

    pub fn component_count(&self) -> usize {
        self.components().count()
    }
}

/// Matches the exception `|Gamma - S| = 1, T = d1(S), d = d1|S,
/// eps = (dim h - dim h^{gamma_d1}) mod 2` for some `d1 in I(Gamma, Gamma)`.
pub fn is_exception(rs: &RootSystem, key: &StratumKey, full_isos: &[Isometry]) -> bool {
    let tr = &key.triple;
    if rs.gamma().minus(tr.s).len() != 1 {
        return false;
    }
    full_isos.iter().any(|d1| d1.image_of(tr.s) == tr.t && d1.restrict(tr.s) == tr.d && eps_full(rs, d1) == key.eps)
}

/// Witness V per realized parity for a triple.
pub fn realized_parities(wg: &WeylGroup, tr: &Triple, seed: u64) -> Result<Vec<(u8, NamedV)>> {
    let mut out: Vec<(u8, NamedV)> = Vec::new();
    for nv in witness_vs(wg.root_system(), tr, seed)? {
        let e = eps_cartan(wg, tr, &nv.v)?;
        if !out.iter().any(|(x, _)| *x == e) {
            out.push((e, nv));
        }
    }
    if out.is_empty() {
        let v = crate::lagrlin::zero_v(wg.root_system(), tr)?;
        let e = eps_cartan(wg, tr, &v)?;
        out.push((e, NamedV { name: "zero".into(), v }));
    }
    out.sort_by_key(|(e, _)| *e);
    Ok(out)
}

/// Component census by the `|Gamma - S| = 1` exception rule.
pub fn irreducible_components(wg: &WeylGroup, seed: u64) -> Result<Census> {
    let rs = wg.root_system();
    let triples = enumerate_triples(wg, false);
    let full_isos: Vec<Isometry> = triples.iter().filter(|t| t.s == rs.gamma()).map(|t| t.d.clone()).collect();
    let mut strata = Vec::new();
    let mut unrealized = Vec::new();
    for tr in &triples {
        let real = realized_parities(wg, tr, seed)?;
        for eps in 0..2u8 {
            let key = StratumKey { triple: tr.clone(), eps };
            let Some((_, nv)) = real.iter().find(|(e, _)| *e == eps) else {
                unrealized.push(key);
                continue;
            };
            let boundary = tr
                .s
                .subsets()
                .into_iter()
                .filter(|&s1| s1 != tr.s)
                .map(|s1| {
                    let d1 = tr.d.restrict(s1);
                    StratumKey { triple: Triple { s: s1, t: d1.image(), d: d1 }, eps }
                })
                .collect();
            let is_component = !is_exception(rs, &key, &full_isos);
            strata.push(Stratum {
                z: rs.rank() - tr.s.len(),
                orbit_dim: orbit_dim(rs, tr),
                stratum_dim: stratum_dim(rs, tr),
                witness: nv.name.clone(),
                is_component,
                boundary,
                key,
            });
        }
    }
    strata.sort_by(|a, b| b.stratum_dim.cmp(&a.stratum_dim).then_with(|| a.key.cmp(&b.key)));
    let note = discrepancy_note(rs, &strata);
    Ok(Census { type_spec: rs.type_spec().to_string(), strata, unrealized, note })
}

fn discrepancy_note(rs: &RootSystem, strata: &[Stratum]) -> Option<String> {
    if rs.type_spec() != "A2" {
        return None;
    }
    let count = strata.iter().filter(|s| s.is_component).count();
    if count == 4 {
        return None;
    }
    let extra: Vec<String> = strata.iter().filter(|s| s.is_component && s.key.triple.s.len() == 1).map(|s| s.key.to_string()).collect();
    Some(format!(
        "discrepancy: the exception rule gives {count} components for sl3, against the classical count of 4 \
         (Z_id, Z_swap, L^0 and L^1 over (∅,∅,1)); the extra components {} lie in no closure of those four",
        extra.join(", ")
    ))
}

/// Every non-component stratum lies in the boundary set of some component.
pub fn check_maximality(census: &Census) -> bool {
    census.strata.iter().filter(|s| !s.is_component).all(|s| census.components().any(|c| c.boundary.contains(&s.key)))
}

/// `W x W^T` as `(w, v)` id pairs.
pub fn bb_orbit_reps(wg: &WeylGroup, tr: &Triple) -> Vec<(usize, usize)> {
    let reps = wg.min_coset_reps(tr.t);
    wg.elements().iter().flat_map(|w| reps.iter().map(move |v| (w.id, v.id))).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TorusRelation {
    /// Same `G_Delta`-orbit.
    Same,
    /// Not identified by the torus part of `R_v`; non-torus elements may still identify them.
    NotIdentifiedByTorus,
}

/// Integer basis of the saturated lattice `{c in Z^k : A c = 0}`.
pub fn integer_kernel(a: &Matrix<Rational>) -> Vec<Vec<i64>> {
    let m = a.rows();
    let k = a.cols();
    let mut rows: Vec<Vec<i128>> = (0..m)
        .map(|i| {
            let den = a.row(i).iter().fold(num_bigint::BigInt::one(), |acc, x| acc.lcm(x.denom()));
            a.row(i).iter().map(|x| (x.numer() * (&den / x.denom())).to_i128().expect("small entries")).collect()
        })
        .collect();
    let mut u: Vec<Vec<i128>> = (0..k).map(|i| (0..k).map(|j| i128::from(i == j)).collect()).collect();
    let col_op = |rows: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, dst: usize, src: usize, q: i128| {
        for row in rows.iter_mut().chain(u.iter_mut()) {
            row[dst] -= q * row[src];
        }
    };
    let swap = |rows: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, a: usize, b: usize| {
        for row in rows.iter_mut().chain(u.iter_mut()) {
            row.swap(a, b);
        }
    };
    let mut p = 0;
    for i in 0..m {
        if p == k {
            break;
        }
        loop {
            let best = (p..k).filter(|&j| rows[i][j] != 0).min_by_key(|&j| rows[i][j].abs());
            let Some(b) = best else { break };
            swap(&mut rows, &mut u, p, b);
            let mut done = true;
            for j in p + 1..k {
                if rows[i][j] != 0 {
                    let q = rows[i][j].div_euclid(rows[i][p]);
                    col_op(&mut rows, &mut u, j, p, q);
                    if rows[i][j] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                p += 1;
                break;
            }
        }
    }
    (p..k).map(|j| (0..k).map(|i| u[i][j] as i64).collect()).collect()
}

/// Whether `l_{S,T,d,V,v,m1}` and `l_{S,T,d,V,v,m2}` are identified by the
/// torus part of `R_v`, acting by `m -> m h1 h2^{-1}`.
pub fn torus_relation(wg: &WeylGroup, tr: &Triple, v: usize, m1: &TorusElement, m2: &TorusElement) -> Result<TorusRelation> {
    let rs = wg.root_system();
    let r = rs.rank();
    let cd = rs.cartan_subspaces(tr.s, tr.t, &tr.d)?;
    let vinv = wg.inverse(wg.get(v)).h_matrix();
    let cond = cd.gamma_chi.hstack(&cd.chi_t.mul(&vinv).scale(&-Rational::one()));
    let pairs = Subspace::<Rational>::kernel_of(&cond);
    let diff_rows: Vec<Vector<Rational>> = pairs.vectors().iter().map(|x| (0..r).map(|i| x[i].clone() - x[r + i].clone()).collect()).collect();
    let h_prime = Subspace::span(r, &diff_rows);
    // characters c (root lattice) with c . K x = 0 for x in h'
    let k = rs.killing();
    let a = if h_prime.dim() == 0 { Matrix::zeros(0, r) } else { h_prime.basis().mul(k) };
    let ratio: Vec<Rational> = m2.values().iter().zip(m1.values()).map(|(b, a)| b.clone() / a.clone()).collect();
    let ratio = TorusElement::new(ratio).ok_or(StrataError::NonTorus)?;
    let same = integer_kernel(&a).iter().all(|c| ratio.character(c).is_one());
    Ok(if same { TorusRelation::Same } else { TorusRelation::NotIdentifiedByTorus })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LabelKind {
    GG,
    BB,
    GDelta,
    Stratum,
    Component,
}

#[derive(Clone, Debug)]
pub struct OrbitLabel {
    pub kind: LabelKind,
    pub triple: Triple,
    pub v_space: Option<LagrangianSubspace<Rational>>,
    pub eps: u8,
    /// `(w, v)` for BB labels.
    pub bb: Option<(usize, usize)>,
    /// `(v, m)` for GDelta labels.
    pub gdelta: Option<(usize, TorusElement)>,
}

impl OrbitLabel {
    pub fn gg(wg: &WeylGroup, tr: &Triple, v: &LagrangianSubspace<Rational>) -> Result<Self> {
        Ok(OrbitLabel { kind: LabelKind::GG, triple: tr.clone(), v_space: Some(v.clone()), eps: eps_cartan(wg, tr, v)?, bb: None, gdelta: None })
    }
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[eps={}; {}", self.kind, self.eps, self.triple)?;
        if let Some(v) = &self.v_space {
            write!(f, "; dimV={}", v.dim())?;
        }
        if let Some((w, v)) = self.bb {
            write!(f, "; w#{w}; v#{v}")?;
        }
        if let Some((v, m)) = &self.gdelta {
            write!(f, "; v#{v}; m={m}")?;
        }
        write!(f, "]")
    }
}

/// `G_Delta`-orbit labels `(S,T,d,V,v,m)` for `v in W^T` and `m in {e} ∪ sample`,
/// keeping one label per class of the torus relation.
pub fn gdelta_orbit_reps(wg: &WeylGroup, tr: &Triple, v: &LagrangianSubspace<Rational>, sample: &[TorusElement]) -> Result<Vec<OrbitLabel>> {
    let rs = wg.root_system();
    let eps = eps_cartan(wg, tr, v)?;
    let mut ms = vec![TorusElement::identity(rs.rank())];
    ms.extend(sample.iter().cloned());
    let mut out = Vec::new();
    for vw in wg.min_coset_reps(tr.t) {
        let mut kept: Vec<TorusElement> = Vec::new();
        for m in &ms {
            let mut dup = false;
            for k in &kept {
                if torus_relation(wg, tr, vw.id, k, m)? == TorusRelation::Same {
                    dup = true;
                    break;
                }
            }
            if !dup {
                kept.push(m.clone());
            }
        }
        for m in kept {
            out.push(OrbitLabel { kind: LabelKind::GDelta, triple: tr.clone(), v_space: Some(v.clone()), eps, bb: None, gdelta: Some((vw.id, m)) });
        }
    }
    Ok(out)
}

/// Lagrangian subalgebras of `g + h`, a trivial bundle over `G/B` with fibre
/// the Lagrangian Grassmannian of `h + h`: `(dimension, components)`.
pub fn lagr_gh_census(rs: &RootSystem) -> (usize, usize) {
    let vs = canonical_vs(rs, &Triple::trivial(), 0);
    let parities: BTreeSet<u8> = vs.iter().map(|nv| parity(&vs[0].v, &nv.v).expect("same ambient")).collect();
    (rs.num_positive() + lagrangian_grassmannian_dim(2 * rs.rank()), parities.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::{Label, Oracle};
    use crate::field::qi;
    use crate::lagrlin::{canonical_vs, is_lagrangian};

    fn wg(spec: &str) -> WeylGroup {
        WeylGroup::new(&RootSystem::new(spec).unwrap()).unwrap()
    }

    fn tr(rs: &RootSystem, pairs: Vec<(usize, usize)>) -> Triple {
        Triple::new(rs, Isometry::new(pairs)).unwrap()
    }

    #[test]
    fn dims() {
        let a1 = RootSystem::new("A1").unwrap();
        let a2 = RootSystem::new("A2").unwrap();
        assert_eq!(orbit_dim(&a1, &tr(&a1, vec![(0, 0)])), 3);
        assert_eq!(orbit_dim(&a2, &Triple::trivial()), 6);
        assert_eq!(orbit_dim(&a2, &tr(&a2, vec![(0, 1)])), 7);
        assert_eq!(stratum_dim(&a1, &Triple::trivial()), 2);
        assert_eq!(stratum_dim(&a2, &Triple::trivial()), 7);
        assert_eq!(stratum_dim(&a2, &tr(&a2, vec![(0, 0), (1, 1)])), 8);
        for spec in ["A1", "A2", "A3", "B2", "G2", "B3", "A1xA2"] {
            let w = wg(spec);
            for t in enumerate_triples(&w, false) {
                assert_eq!(stratum_dim(w.root_system(), &t), stratum_dim_bundle(w.root_system(), &t));
            }
        }
    }

    #[test]
    fn closure_examples() {
        let w = wg("A1");
        let rs = w.root_system();
        let full = tr(rs, vec![(0, 0)]);
        let v0 = crate::lagrlin::zero_v(rs, &full).unwrap();
        let cl = orbit_closure(rs, &full, &v0).unwrap();
        assert_eq!(cl.len(), 2);
        let (t1, v1) = cl.iter().find(|(t, _)| t.s.is_empty()).unwrap();
        assert_eq!(*t1, Triple::trivial());
        assert_eq!(v1.space().vectors(), vec![vec![qi(1), qi(1)]]);

        let w = wg("A2");
        let rs = w.root_system();
        let swap = tr(rs, vec![(0, 1), (1, 0)]);
        let v0 = crate::lagrlin::zero_v(rs, &swap).unwrap();
        let cl = orbit_closure(rs, &swap, &v0).unwrap();
        assert_eq!(cl.len(), 4);
        for (t, v) in &cl {
            assert_eq!(t.t, swap.d.image_of(t.s));
            assert!(is_lagrangian(v.space().basis(), v.ambient()).unwrap());
            assert_eq!(eps_cartan(&w, t, v).unwrap(), eps_cartan(&w, &swap, &v0).unwrap());
        }
        let triv = Triple::trivial();
        for nv in canonical_vs(rs, &triv, 3) {
            assert_eq!(orbit_closure(rs, &triv, &nv.v).unwrap().len(), 1);
        }
    }

    #[test]
    fn closure_preserves_eps_everywhere() {
        for spec in ["A2", "B2", "A3"] {
            let w = wg(spec);
            let rs = w.root_system();
            for t in enumerate_triples(&w, false) {
                for nv in canonical_vs(rs, &t, 5) {
                    let e = eps_cartan(&w, &t, &nv.v).unwrap();
                    for (t1, v1) in orbit_closure(rs, &t, &nv.v).unwrap() {
                        assert!(t1.s.is_subset(t.s));
                        assert_eq!(eps_cartan(&w, &t1, &v1).unwrap(), e, "{spec} {t} -> {t1}");
                        if t1.s != t.s {
                            assert!(orbit_dim(rs, &t1) < orbit_dim(rs, &t));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn eps_cartan_matches_oracle() {
        for spec in ["A1", "A2", "B2", "A1xA1", "G2"] {
            let rs = RootSystem::new(spec).unwrap();
            let o = Oracle::new(&rs, 4).unwrap();
            for t in enumerate_triples(o.weyl(), false) {
                for nv in canonical_vs(&rs, &t, 9) {
                    let lab = Label { triple: t.clone(), v_space: nv.v.clone(), v: 0, m: TorusElement::identity(rs.rank()) };
                    let l = o.build_lagrangian(&lab).unwrap();
                    assert_eq!(o.eps_of(&l), eps_cartan(o.weyl(), &t, &nv.v).unwrap(), "{spec} {t} {}", nv.name);
                }
            }
        }
    }

    #[test]
    fn a1_census() {
        let c = irreducible_components(&wg("A1"), 0xBD).unwrap();
        let mut dims: Vec<usize> = c.components().map(|s| s.stratum_dim).collect();
        dims.sort();
        assert_eq!(dims, vec![2, 3]);
        assert!(c.note.is_none());
        assert!(check_maximality(&c));
        assert!(c.unrealized.iter().all(|k| k.triple.s.len() == 1));
    }

    #[test]
    fn a2_census() {
        let c = irreducible_components(&wg("A2"), 0xBD).unwrap();
        let comps: Vec<String> = c.components().map(|s| format!("{} {}", s.key, s.stratum_dim)).collect();
        assert_eq!(c.component_count(), 8, "{comps:?}");
        assert_eq!(c.components().filter(|s| s.stratum_dim == 8).count(), 2);
        assert_eq!(c.components().filter(|s| s.key.triple.s.is_empty()).count(), 2);
        assert!(c.note.as_deref().unwrap().contains("discrepancy"));
        assert!(check_maximality(&c));
        let dims: Vec<usize> = c.strata.iter().map(|s| s.stratum_dim).collect();
        assert_eq!(&dims[..4], &[8, 8, 7, 7]);
    }

    #[test]
    fn bb_counts() {
        let w = wg("A1");
        assert_eq!(bb_orbit_reps(&w, &tr(w.root_system(), vec![(0, 0)])).len(), 2);
        let w = wg("A2");
        assert_eq!(bb_orbit_reps(&w, &Triple::trivial()).len(), 36);
        assert_eq!(bb_orbit_reps(&w, &tr(w.root_system(), vec![(0, 0)])).len(), 18);
    }

    #[test]
    fn integer_kernels() {
        let a = Matrix::from_rows(3, &[vec![qi(1), qi(1), qi(0)]]);
        let k = integer_kernel(&a);
        assert_eq!(k.len(), 2);
        for c in &k {
            assert_eq!(c[0] + c[1], 0);
        }
        let a = Matrix::from_rows(2, &[vec![qi(2), qi(4)]]);
        let k = integer_kernel(&a);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0][0].abs(), 2);
        assert_eq!(k[0][1].abs(), 1);
        assert_eq!(integer_kernel(&Matrix::zeros(0, 2)).len(), 2);
    }

    #[test]
    fn gdelta_examples() {
        let w = wg("A2");
        let rs = w.root_system();
        let sample = TorusElement::sample(2, 5, 0xBD);
        let full = tr(rs, vec![(0, 0), (1, 1)]);
        let v0 = crate::lagrlin::zero_v(rs, &full).unwrap();
        let labels = gdelta_orbit_reps(&w, &full, &v0, &sample).unwrap();
        assert!(labels.iter().all(|l| l.gdelta.as_ref().unwrap().0 == 0));
        let triv = Triple::trivial();
        let v = canonical_vs(rs, &triv, 1).remove(0).v;
        let labels = gdelta_orbit_reps(&w, &triv, &v, &sample).unwrap();
        assert_eq!(labels.len(), 6);

        let w = wg("A1");
        let rs = w.root_system();
        let full = tr(rs, vec![(0, 0)]);
        let t = TorusElement::new(vec![qi(2)]).unwrap();
        let e = TorusElement::identity(1);
        assert_eq!(torus_relation(&w, &full, 0, &e, &t).unwrap(), TorusRelation::NotIdentifiedByTorus);
        assert_eq!(torus_relation(&w, &full, 0, &t, &t).unwrap(), TorusRelation::Same);
        assert_eq!(torus_relation(&w, &Triple::trivial(), 0, &e, &t).unwrap(), TorusRelation::Same);
    }

    #[test]
    fn gh_census() {
        for (spec, dim) in [("A1", 1), ("A2", 4), ("A3", 9)] {
            assert_eq!(lagr_gh_census(&RootSystem::new(spec).unwrap()), (dim, 2));
        }
    }
}
