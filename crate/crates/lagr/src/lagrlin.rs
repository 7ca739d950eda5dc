//! Isotropic and Lagrangian subspaces of split quadratic spaces, mainly
//! `h + h` and `z_S + z_T` with the form `<<x1,y1>> - <<x2,y2>>`.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bd::Triple;
use crate::field::{qi, rational_sqrt, squarefree_part, Field, QuadExt};
use crate::linalg::{dot, is_zero_vec, unit, Matrix, Subspace, Vector};
use crate::rootdata::{CartanSubspaceData, NodeSet, RootSystem};
use crate::{QMatrix, QSubspace, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LagrError {
    #[error("basis rows are linearly dependent")]
    DependentBasis,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("Gram matrix is degenerate or not symmetric")]
    Degenerate,
    #[error("plane is anisotropic over Q; isotropic lines need Q(sqrt {0})")]
    Anisotropic(i64),
    #[error("subspace is not Lagrangian")]
    NotLagrangian,
    #[error("isotropic lines live in Q(sqrt {needed}), not Q(sqrt {got})")]
    WrongExtension { needed: i64, got: i64 },
    #[error(transparent)]
    RootData(#[from] crate::rootdata::RootDataError),
}

/// Where a quadratic space comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// `h + h`.
    HH,
    /// `z_S + z_T`, embedded in `h + h`.
    ZZ { s: NodeSet, t: NodeSet },
    /// A subspace of `g + g`.
    GG,
    Other,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticSpace<F> {
    gram: Matrix<F>,
    provenance: Provenance,
    /// Rows are the basis vectors in the coordinates of the parent space.
    embedding: Option<Matrix<F>>,
}

impl<F: Field> QuadraticSpace<F> {
    pub fn new(gram: Matrix<F>, provenance: Provenance) -> Result<Self, LagrError> {
        if gram.rows() != gram.cols() || gram != gram.transpose() || gram.rank() != gram.rows() {
            return Err(LagrError::Degenerate);
        }
        Ok(QuadraticSpace { gram, provenance, embedding: None })
    }

    pub fn with_embedding(mut self, emb: Matrix<F>) -> Self {
        assert_eq!(emb.rows(), self.dim());
        self.embedding = Some(emb);
        self
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix<F> {
        &self.gram
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn embedding(&self) -> Option<&Matrix<F>> {
        self.embedding.as_ref()
    }

    pub fn form(&self, x: &[F], y: &[F]) -> F {
        self.gram.form(x, y)
    }

    pub fn is_isotropic(&self, basis: &Matrix<F>) -> bool {
        basis.mul(&self.gram).mul(&basis.transpose()).is_zero()
    }
}

/// A Lagrangian subspace, basis rows in the ambient coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct LagrangianSubspace<F> {
    ambient: QuadraticSpace<F>,
    space: Subspace<F>,
}

impl<F: Field> LagrangianSubspace<F> {
    pub fn new(ambient: QuadraticSpace<F>, basis: &Matrix<F>) -> Result<Self, LagrError> {
        if !is_lagrangian(basis, &ambient)? {
            return Err(LagrError::NotLagrangian);
        }
        let space = Subspace::row_space(basis);
        Ok(LagrangianSubspace { ambient, space })
    }

    pub fn ambient(&self) -> &QuadraticSpace<F> {
        &self.ambient
    }

    pub fn space(&self) -> &Subspace<F> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// The subspace pushed into the parent coordinates via the embedding.
    pub fn embedded(&self) -> Subspace<F> {
        match &self.ambient.embedding {
            Some(e) => Subspace::row_space(&self.space.basis().mul(e)),
            None => self.space.clone(),
        }
    }
}

/// Isotropic and half-dimensional.
pub fn is_lagrangian<F: Field>(basis: &Matrix<F>, space: &QuadraticSpace<F>) -> Result<bool, LagrError> {
    if basis.cols() != space.dim() {
        return Err(LagrError::DimensionMismatch(basis.cols(), space.dim()));
    }
    if basis.rank() != basis.rows() {
        return Err(LagrError::DependentBasis);
    }
    Ok(2 * basis.rows() == space.dim() && space.is_isotropic(basis))
}

/// `dim V1 - dim(V1 ∩ V2)` modulo 2.
pub fn parity<F: Field>(v1: &LagrangianSubspace<F>, v2: &LagrangianSubspace<F>) -> Result<u8, LagrError> {
    if v1.ambient.gram != v2.ambient.gram {
        return Err(LagrError::DimensionMismatch(v1.ambient.dim(), v2.ambient.dim()));
    }
    let meet = v1.space.intersect(&v2.space).dim();
    Ok(((v1.dim() - meet) % 2) as u8)
}

/// Same connected component of the Lagrangian Grassmannian.
pub fn same_component<F: Field>(v1: &LagrangianSubspace<F>, v2: &LagrangianSubspace<F>) -> Result<bool, LagrError> {
    Ok(parity(v1, v2)? == 0)
}

/// Dimension of the Lagrangian Grassmannian of a split space of dimension `m`.
pub fn lagrangian_grassmannian_dim(m: usize) -> usize {
    let n = m / 2;
    if m.is_multiple_of(2) {
        n * n.saturating_sub(1) / 2
    } else {
        n * (n + 1) / 2
    }
}

/// The two isotropic lines of a nondegenerate rational plane, if it splits over Q.
pub fn isotropic_lines(space: &QuadraticSpace<Rational>) -> Result<[Vector<Rational>; 2], LagrError> {
    let (a, b, c, disc) = plane_coeffs(space)?;
    let Some(s) = rational_sqrt(&disc) else {
        return Err(LagrError::Anisotropic(squarefree_part(&disc)));
    };
    Ok(plane_lines::<Rational>(&a, &b, &c, s))
}

/// Isotropic lines over `Q(sqrt D)`; fails if the plane needs a different extension.
pub fn isotropic_lines_over<const D: i64>(space: &QuadraticSpace<Rational>) -> Result<[Vector<QuadExt<D>>; 2], LagrError> {
    let (a, b, c, disc) = plane_coeffs(space)?;
    let root: QuadExt<D> = match rational_sqrt(&disc) {
        Some(s) => s.into(),
        None => {
            let needed = squarefree_part(&disc);
            if needed != D {
                return Err(LagrError::WrongExtension { needed, got: D });
            }
            let s = rational_sqrt(&(disc / qi(D))).expect("disc / D is a square");
            QuadExt::new(Rational::zero(), s)
        }
    };
    Ok(plane_lines::<QuadExt<D>>(&a.into(), &b.into(), &c.into(), root))
}

type PlaneCoeffs = (Rational, Rational, Rational, Rational);

fn plane_coeffs(space: &QuadraticSpace<Rational>) -> Result<PlaneCoeffs, LagrError> {
    if space.dim() != 2 {
        return Err(LagrError::DimensionMismatch(space.dim(), 2));
    }
    let g = space.gram();
    let (a, b, c) = (g[(0, 0)].clone(), g[(0, 1)].clone(), g[(1, 1)].clone());
    let disc = &b * &b - &a * &c;
    if disc.is_zero() {
        return Err(LagrError::Degenerate);
    }
    Ok((a, b, c, disc))
}

/// Lines of `a x^2 + 2 b x y + c y^2 = 0` given `root = sqrt(b^2 - a c)`.
fn plane_lines<F: Field>(a: &F, b: &F, c: &F, root: F) -> [Vector<F>; 2] {
    if a.is_zero() {
        return [vec![F::one(), F::zero()], vec![c.clone(), -(F::from_i64(2) * b.clone())]];
    }
    let x1 = (-b.clone() + root.clone()) / a.clone();
    let x2 = (-b.clone() - root) / a.clone();
    [vec![x1, F::one()], vec![x2, F::one()]]
}

/// `h + h` with Gram `diag(K, -K)`.
pub fn hh_space(rs: &RootSystem) -> QuadraticSpace<Rational> {
    let k = rs.killing();
    let neg = k.scale(&-Rational::one());
    QuadraticSpace::new(k.block_diag(&neg), Provenance::HH).expect("Killing form is nondegenerate")
}

/// `z_S + z_T` with its embedding into `h + h`.
pub fn zz_space(rs: &RootSystem, cd: &CartanSubspaceData) -> QuadraticSpace<Rational> {
    let r = rs.rank();
    let k = rs.killing();
    let bs = cd.z_s.basis().clone();
    let bt = cd.z_t.basis().clone();
    let gs = bs.mul(k).mul(&bs.transpose());
    let gt = bt.mul(k).mul(&bt.transpose()).scale(&-Rational::one());
    let emb = bs.hstack(&Matrix::zeros(bs.rows(), r)).vstack(&Matrix::zeros(bt.rows(), r).hstack(&bt));
    QuadraticSpace::new(gs.block_diag(&gt), Provenance::ZZ { s: cd.s, t: cd.t })
        .expect("z_S is nondegenerate")
        .with_embedding(emb)
}

/// Gram-Schmidt orthogonal basis of a subspace for a definite form.
pub fn orthogonal_basis(space: &QSubspace, gram: &QMatrix) -> Vec<Vector<Rational>> {
    let mut out: Vec<Vector<Rational>> = Vec::new();
    for v in space.vectors() {
        let mut w = v.clone();
        for u in &out {
            let c = gram.form(&w, u) / gram.form(u, u);
            w = w.iter().zip(u).map(|(a, b)| a.clone() - c.clone() * b.clone()).collect();
        }
        out.push(w);
    }
    out
}

/// Reflection `x -> x - 2 <x,a>/<a,a> a` for the form `gram`.
pub fn reflection(a: &[Rational], gram: &QMatrix) -> QMatrix {
    let n = a.len();
    let ka = gram.mul_vec(a);
    let c = qi(2) / dot(a, &ka);
    Matrix::from_fn(n, n, |i, j| {
        let id = if i == j { Rational::one() } else { Rational::zero() };
        id - c.clone() * a[i].clone() * ka[j].clone()
    })
}

/// A rational isometry of `(h, K)` restricting to `gamma_d` on `h_S`.
/// Built from reflections; K is positive definite, so every difference
/// vector is anisotropic.
pub fn isometry_extension(rs: &RootSystem, cd: &CartanSubspaceData) -> QMatrix {
    let k = rs.killing();
    let r = rs.rank();
    let mut g = Matrix::identity(r);
    let us = orthogonal_basis(&cd.h_s, k);
    for u in &us {
        let x = g.mul_vec(u);
        let y = cd.gamma_chi.mul_vec(u);
        let diff: Vector<Rational> = x.iter().zip(&y).map(|(a, b)| a.clone() - b.clone()).collect();
        if !is_zero_vec(&diff) {
            g = reflection(&diff, k).mul(&g);
        }
    }
    debug_assert!(us.iter().all(|u| g.mul_vec(u) == cd.gamma_chi.mul_vec(u)));
    debug_assert_eq!(g.transpose().mul(k).mul(&g), *k);
    g
}

/// A named Lagrangian `V` of `z_S + z_T`.
#[derive(Clone, Debug, PartialEq)]
pub struct NamedV {
    pub name: String,
    pub v: LagrangianSubspace<Rational>,
}

/// Graph `{(x, iota rho x) : x in z_S}` as a Lagrangian of `z_S + z_T`,
/// with `iota` the restriction of [`isometry_extension`].
pub fn graph_lagrangian(rs: &RootSystem, cd: &CartanSubspaceData, rho: &QMatrix) -> LagrangianSubspace<Rational> {
    let space = zz_space(rs, cd);
    let g = isometry_extension(rs, cd);
    let z = cd.z_s.dim();
    let rows: Vec<Vector<Rational>> = cd
        .z_s
        .vectors()
        .iter()
        .map(|b| {
            let img = g.mul_vec(&rho.mul_vec(b));
            let coords = cd.z_t.coordinates(&img).expect("isometry maps z_S onto z_T");
            let mut row = vec![Rational::zero(); 2 * z];
            for (i, c) in coords.into_iter().enumerate() {
                row[z + i] = c;
            }
            let own = cd.z_s.coordinates(b).expect("basis vector");
            for (i, c) in own.into_iter().enumerate() {
                row[i] = c;
            }
            row
        })
        .collect();
    LagrangianSubspace::new(space, &Matrix::from_rows(2 * z, &rows)).expect("isometry graphs are Lagrangian")
}

/// Canonical samples of V: graphs of `iota rho` for every sign pattern `rho`
/// on a K-orthogonal basis of z_S (`diag` is all `+`, `antidiag` all `-`,
/// `flip` negates only the first vector), plus `random`, twisted by a seeded
/// product of two reflections. Duplicates are dropped.
pub fn canonical_vs(rs: &RootSystem, tr: &Triple, seed: u64) -> Vec<NamedV> {
    let cd = rs.cartan_subspaces(tr.s, tr.t, &tr.d).expect("valid triple");
    let r = rs.rank();
    let k = rs.killing();
    let ob = orthogonal_basis(&cd.z_s, k);
    let z = ob.len();
    let mut rhos: Vec<(String, QMatrix)> = Vec::new();
    for mask in 0..1usize << z {
        let name = match mask {
            0 => "diag".to_string(),
            m if m + 1 == 1 << z => "antidiag".to_string(),
            1 => "flip".to_string(),
            m => format!("signs:{}", (0..z).map(|i| if m & (1 << i) != 0 { '-' } else { '+' }).collect::<String>()),
        };
        let rho = (0..z).filter(|i| mask & (1 << i) != 0).fold(Matrix::identity(r), |acc, i| reflection(&ob[i], k).mul(&acc));
        rhos.push((name, rho));
    }
    if z > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let zb = cd.z_s.vectors();
        let mut rho = Matrix::identity(r);
        for _ in 0..2 {
            let a = random_vector_in(&zb, &mut rng, r);
            rho = reflection(&a, k).mul(&rho);
        }
        rhos.push(("random".into(), rho));
    }
    let mut out: Vec<NamedV> = Vec::new();
    for (name, rho) in rhos {
        let v = graph_lagrangian(rs, &cd, &rho);
        if !out.iter().any(|o| o.v.space() == v.space()) {
            out.push(NamedV { name, v });
        }
    }
    out
}

/// The two Lagrangians of a one-dimensional `z_S + z_T`, or all of the
/// canonical samples otherwise. Used for nonemptiness witnesses.
pub fn witness_vs(rs: &RootSystem, tr: &Triple, seed: u64) -> Result<Vec<NamedV>, LagrError> {
    let cd = rs.cartan_subspaces(tr.s, tr.t, &tr.d)?;
    if cd.z_s.dim() == 1 {
        let space = zz_space(rs, &cd);
        let lines = isotropic_lines(&space)?;
        return lines
            .iter()
            .enumerate()
            .map(|(i, l)| {
                let v = LagrangianSubspace::new(space.clone(), &Matrix::from_rows(2, std::slice::from_ref(l)))?;
                Ok(NamedV { name: format!("line{}", i + 1), v })
            })
            .collect();
    }
    Ok(canonical_vs(rs, tr, seed))
}

fn random_vector_in(basis: &[Vector<Rational>], rng: &mut ChaCha8Rng, r: usize) -> Vector<Rational> {
    loop {
        let mut v = vec![Rational::zero(); r];
        for b in basis {
            let c: i64 = rng.gen_range(-3..=3);
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi = vi.clone() + qi(c) * bi.clone();
            }
        }
        if !is_zero_vec(&v) {
            return v;
        }
    }
}

/// The zero Lagrangian of a zero-dimensional `z_S + z_T` (when `S` is everything).
pub fn zero_v(rs: &RootSystem, tr: &Triple) -> Result<LagrangianSubspace<Rational>, LagrError> {
    let cd = rs.cartan_subspaces(tr.s, tr.t, &tr.d)?;
    let space = zz_space(rs, &cd);
    LagrangianSubspace::new(space, &Matrix::zeros(0, 2 * cd.z_s.dim()))
}

/// Hyperbolic space of dimension `2n` with basis `e_1..e_n, f_1..f_n`.
pub fn hyperbolic_space(n: usize) -> QuadraticSpace<Rational> {
    let g = Matrix::from_fn(2 * n, 2 * n, |i, j| if i + n == j || j + n == i { Rational::one() } else { Rational::zero() });
    QuadraticSpace::new(g, Provenance::Other).expect("hyperbolic form is nondegenerate")
}

/// The `2^n` coordinate Lagrangians of [`hyperbolic_space`]; bit `i` of the
/// index picks `f_i` instead of `e_i`.
pub fn coordinate_lagrangians(n: usize) -> Vec<LagrangianSubspace<Rational>> {
    let space = hyperbolic_space(n);
    (0..1usize << n)
        .map(|mask| {
            let rows: Vec<Vector<Rational>> =
                (0..n).map(|i| unit(2 * n, if mask & (1 << i) != 0 { n + i } else { i })).collect();
            LagrangianSubspace::new(space.clone(), &Matrix::from_rows(2 * n, &rows)).expect("coordinate Lagrangian")
        })
        .collect()
}

/// `h_Delta` or `h_{-Delta}` in `h + h`, depending on `sign`.
pub fn h_diagonal(rs: &RootSystem, sign: i64) -> QSubspace {
    let r = rs.rank();
    let rows: Vec<Vector<Rational>> = (0..r)
        .map(|i| {
            let mut v = vec![Rational::zero(); 2 * r];
            v[i] = Rational::one();
            v[r + i] = qi(sign);
            v
        })
        .collect();
    Subspace::span(2 * r, &rows)
}
