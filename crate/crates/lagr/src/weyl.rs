//! The Weyl group as signed permutations of the roots, with lengths,
//! reduced words, coset representatives and the action on h.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::linalg::{Matrix, Subspace};
use crate::rootdata::{NodeSet, RootSystem};
use crate::{QMatrix, Rational};

pub const DEFAULT_WEYL_CAP: u128 = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeylError {
    #[error("Weyl group of order {order} exceeds the cap {cap}")]
    Cap { order: u128, cap: u128 },
    #[error("{v} is not a minimal coset representative for {t}")]
    NotMinimal { v: String, t: NodeSet },
    #[error("cannot parse Weyl word '{0}'")]
    BadWord(String),
}

/// One group element. `perm[k]` is the index of `w(root_k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    pub id: usize,
    perm: Vec<u16>,
    word: Vec<usize>,
    length: usize,
    h_int: Vec<i64>,
    rank: usize,
}

impl WeylElement {
    /// Lexicographically first reduced word, 0-based letters.
    pub fn reduced_word(&self) -> &[usize] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn root_permutation(&self) -> &[u16] {
        &self.perm
    }

    pub fn apply_root(&self, k: usize) -> usize {
        self.perm[k] as usize
    }

    /// Action on h in the basis `H_{alpha_i}`; equal to the action on
    /// simple-root coordinates.
    pub fn h_matrix(&self) -> QMatrix {
        let r = self.rank;
        Matrix::from_i64(r, r, &self.h_int)
    }

    pub fn h_matrix_int(&self) -> &[i64] {
        &self.h_int
    }

    /// Word like `s1s2`, or `e` for the identity.
    pub fn name(&self) -> String {
        if self.word.is_empty() {
            "e".to_string()
        } else {
            self.word.iter().map(|i| format!("s{}", i + 1)).collect()
        }
    }

    pub fn is_identity(&self) -> bool {
        self.length == 0
    }
}

#[derive(Clone, Debug)]
pub struct WeylGroup {
    rs: RootSystem,
    elements: Vec<WeylElement>,
    lookup: HashMap<Vec<u16>, usize>,
    simple_perm: Vec<Vec<u16>>,
    w0: usize,
}

impl WeylGroup {
    pub fn new(rs: &RootSystem) -> Result<Self, WeylError> {
        Self::with_cap(rs, DEFAULT_WEYL_CAP)
    }

    pub fn with_cap(rs: &RootSystem, cap: u128) -> Result<Self, WeylError> {
        let order = rs.weyl_order();
        if order > cap {
            return Err(WeylError::Cap { order, cap });
        }
        let r = rs.rank();
        let nr = rs.num_roots();
        let simple_perm: Vec<Vec<u16>> = (0..r)
            .map(|i| {
                (0..nr)
                    .map(|k| {
                        let mut c = rs.root(k);
                        let p = rs.coroot_pairing(&c, i);
                        c[i] -= p;
                        rs.index_of(&c).expect("reflection permutes roots") as u16
                    })
                    .collect()
            })
            .collect();
        let id: Vec<u16> = (0..nr as u16).collect();
        let mut seen: HashMap<Vec<u16>, ()> = HashMap::new();
        seen.insert(id.clone(), ());
        let mut perms = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for s in &simple_perm {
                let y: Vec<u16> = s.iter().map(|&k| x[k as usize]).collect();
                if seen.insert(y.clone(), ()).is_none() {
                    perms.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
        let np = rs.num_positive();
        let mut elements: Vec<WeylElement> = perms
            .into_iter()
            .map(|perm| {
                let length = perm[..np].iter().filter(|&&k| k as usize >= np).count();
                let word = lex_first_word(&perm, &simple_perm, np, r);
                let mut h_int = vec![0i64; r * r];
                for j in 0..r {
                    let img = rs.root(perm[j] as usize);
                    for i in 0..r {
                        h_int[i * r + j] = img[i];
                    }
                }
                WeylElement { id: 0, perm, word, length, h_int, rank: r }
            })
            .collect();
        elements.sort_by(|a, b| a.length.cmp(&b.length).then_with(|| a.word.cmp(&b.word)));
        let mut lookup = HashMap::new();
        for (i, e) in elements.iter_mut().enumerate() {
            e.id = i;
            lookup.insert(e.perm.clone(), i);
        }
        let w0 = elements.len() - 1;
        Ok(WeylGroup { rs: rs.clone(), elements, lookup, simple_perm, w0 })
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn get(&self, id: usize) -> &WeylElement {
        &self.elements[id]
    }

    pub fn identity(&self) -> &WeylElement {
        &self.elements[0]
    }

    pub fn longest(&self) -> &WeylElement {
        &self.elements[self.w0]
    }

    pub fn simple_reflection(&self, i: usize) -> &WeylElement {
        &self.elements[self.lookup[&self.simple_perm[i]]]
    }

    pub fn mul(&self, a: &WeylElement, b: &WeylElement) -> &WeylElement {
        let c: Vec<u16> = b.perm.iter().map(|&k| a.perm[k as usize]).collect();
        &self.elements[self.lookup[&c]]
    }

    pub fn inverse(&self, a: &WeylElement) -> &WeylElement {
        let mut inv = vec![0u16; a.perm.len()];
        for (k, &img) in a.perm.iter().enumerate() {
            inv[img as usize] = k as u16;
        }
        &self.elements[self.lookup[&inv]]
    }

    pub fn from_word(&self, word: &[usize]) -> &WeylElement {
        let mut acc = self.identity();
        for &i in word {
            acc = self.mul(acc, self.simple_reflection(i));
        }
        acc
    }

    /// Parses `e`, `w0`, or a product such as `s1s2` (1-based letters).
    pub fn parse(&self, s: &str) -> Result<&WeylElement, WeylError> {
        let s = s.trim();
        if s == "e" || s == "1" {
            return Ok(self.identity());
        }
        if s == "w0" {
            return Ok(self.longest());
        }
        let mut word = Vec::new();
        for part in s.split('s').skip(1) {
            let i: usize = part.parse().map_err(|_| WeylError::BadWord(s.into()))?;
            if i == 0 || i > self.rs.rank() {
                return Err(WeylError::BadWord(s.into()));
            }
            word.push(i - 1);
        }
        if word.is_empty() || !s.starts_with('s') {
            return Err(WeylError::BadWord(s.into()));
        }
        Ok(self.from_word(&word))
    }

    /// `w(alpha) > 0` for all `alpha` in `t`.
    pub fn is_min_coset(&self, w: &WeylElement, t: NodeSet) -> bool {
        let np = self.rs.num_positive();
        t.iter().all(|i| (w.perm[self.rs.simple(i)] as usize) < np)
    }

    /// `w^{-1}(alpha) > 0` for all `alpha` in `s`.
    pub fn is_min_left_coset(&self, w: &WeylElement, s: NodeSet) -> bool {
        self.is_min_coset(self.inverse(w), s)
    }

    /// `W^T`, ordered by (length, word).
    pub fn min_coset_reps(&self, t: NodeSet) -> Vec<&WeylElement> {
        self.elements.iter().filter(|w| self.is_min_coset(w, t)).collect()
    }

    /// `^S W^T`.
    pub fn min_double_coset_reps(&self, s: NodeSet, t: NodeSet) -> Vec<&WeylElement> {
        self.elements
            .iter()
            .filter(|w| self.is_min_coset(w, t) && self.is_min_left_coset(w, s))
            .collect()
    }

    /// Support of the reduced word.
    pub fn support(&self, w: &WeylElement) -> NodeSet {
        w.word.iter().copied().collect()
    }

    /// The parabolic subgroup `W_F`.
    pub fn parabolic(&self, f: NodeSet) -> Vec<&WeylElement> {
        self.elements.iter().filter(|w| self.support(w).is_subset(f)).collect()
    }

    /// `^{E1}(W_F)^{E2}`.
    pub fn double_reps_in(&self, e1: NodeSet, f: NodeSet, e2: NodeSet) -> Vec<&WeylElement> {
        self.parabolic(f)
            .into_iter()
            .filter(|w| self.is_min_coset(w, e2) && self.is_min_left_coset(w, e1))
            .collect()
    }

    /// Splits `v in W^T` as `v = u w` with `w in ^S W^T` and
    /// `u in (W_S)^{S ∩ w(T)}`.
    pub fn uw_decompose(
        &self,
        v: &WeylElement,
        s: NodeSet,
        t: NodeSet,
    ) -> Result<(&WeylElement, &WeylElement), WeylError> {
        if !self.is_min_coset(v, t) {
            return Err(WeylError::NotMinimal { v: v.name(), t });
        }
        let mut w = self.get(v.id);
        'outer: loop {
            for i in s.iter() {
                let cand = self.mul(self.simple_reflection(i), w);
                if cand.length < w.length {
                    w = cand;
                    continue 'outer;
                }
            }
            break;
        }
        let u = self.mul(v, self.inverse(w));
        Ok((u, w))
    }

    /// `S ∩ w(T)` as a set of simple roots.
    pub fn meet_image(&self, s: NodeSet, w: &WeylElement, t: NodeSet) -> NodeSet {
        t.iter()
            .filter_map(|i| self.rs.simple_number(w.apply_root(self.rs.simple(i))))
            .filter(|&j| s.contains(j))
            .collect()
    }

    /// `dim h^{-w}`, the (-1)-eigenspace of w on h.
    pub fn h_minus_w_dim(&self, w: &WeylElement) -> usize {
        let m = w.h_matrix().add(&Matrix::identity(self.rs.rank()));
        Subspace::<Rational>::kernel_of(&m).dim()
    }

    /// Fixed space dimension of w on h.
    pub fn h_fixed_dim(&self, w: &WeylElement) -> usize {
        let m = w.h_matrix().sub(&Matrix::identity(self.rs.rank()));
        Subspace::<Rational>::kernel_of(&m).dim()
    }
}

fn lex_first_word(perm: &[u16], simple_perm: &[Vec<u16>], np: usize, r: usize) -> Vec<usize> {
    // greedy smallest left descent: i with w^{-1}(alpha_i) < 0
    let mut cur = perm.to_vec();
    let mut word = Vec::new();
    loop {
        let mut inv = vec![0u16; cur.len()];
        for (k, &img) in cur.iter().enumerate() {
            inv[img as usize] = k as u16;
        }
        let Some(i) = (0..r).find(|&i| inv[i] as usize >= np) else {
            break;
        };
        word.push(i);
        cur = cur.iter().map(|&k| simple_perm[i][k as usize]).collect();
    }
    word
}
