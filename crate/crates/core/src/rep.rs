//! Fundamental representations with exact Chevalley generator matrices and
//! the contravariant (Shapovalov) form.
//!
//! The module is built weight by weight, going down from the highest weight.
//! Every weight space `V_gamma` is spanned by the vectors `F_j u` with `u` a
//! basis vector of `V_{gamma + alpha_j}`. Form values between such spanning
//! vectors follow from `{F_j u, w} = {u, E_j w}` and
//! `E_k F_j u = F_j E_k u + delta_jk (gamma + alpha_j)(h_j) u`, which only
//! involve weight spaces that are already built. A maximal subset with
//! nonsingular Gram matrix (earliest candidates first) becomes the basis of
//! `V_gamma`; coordinates of every other vector are read off by solving
//! against that Gram block. The form is never orthonormalized, so everything
//! stays rational.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{CartanData, Coweight, LieType, Weight};
use crate::linalg::{dot, Matrix};
use crate::scalar::{parse_rational, Scalar};

pub const DEFAULT_DIM_CAP: usize = 64;
pub const CACHE_SCHEMA_VERSION: u32 = 1;

type Q = BigRational;

/// One weight space of the representation.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightBlock {
    /// `beta` in the fundamental-weight basis.
    pub omega_coords: Vec<i64>,
    /// `m` with `omega_i - beta = sum m_j alpha_j`.
    pub depth: Vec<i64>,
    pub offset: usize,
    pub dim: usize,
    /// Gram matrix of the contravariant form on this block's basis.
    pub gram: Matrix<Q>,
}

impl WeightBlock {
    pub fn level(&self) -> i64 {
        self.depth.iter().sum()
    }

    pub fn range(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.dim
    }
}

/// The `i`-th fundamental representation (0-based `index`).
#[derive(Clone, Debug)]
pub struct FundamentalRep {
    lie_type: LieType,
    index: usize,
    cartan: Matrix<i64>,
    blocks: Vec<WeightBlock>,
    labels: Vec<Vec<usize>>,
    e: Vec<Matrix<Q>>,
    f: Vec<Matrix<Q>>,
    h: Vec<Matrix<Q>>,
}

struct BlockBuild {
    omega: Vec<i64>,
    depth: Vec<i64>,
    labels: Vec<Vec<usize>>,
    gram: Matrix<Q>,
    /// `e_to[k]`: matrix of `E_k` from this block into block `beta + alpha_k`.
    e_to: Vec<Option<Matrix<Q>>>,
    /// `f_from[j]`: matrix of `F_j` from block `beta + alpha_j` into this block.
    f_from: Vec<Option<Matrix<Q>>>,
}

fn add_vec(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub_vec(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn unit_vec(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = Q::one();
    v
}

/// Weyl dimension formula `prod_{alpha>0} (lambda+rho, alpha)/(rho, alpha)`,
/// evaluated with the symmetrized form `(omega_k, alpha_j) = d_j delta_kj`.
pub fn weyl_dim(cartan: &CartanData, highest_weight: &[i64]) -> Result<u64> {
    if highest_weight.len() != cartan.rank() {
        return Err(Error::RankMismatch {
            expected: cartan.rank(),
            got: highest_weight.len(),
        });
    }
    if highest_weight.iter().any(|&b| b < 0) {
        return Err(Error::NotDominant(highest_weight.to_vec()));
    }
    let d = cartan.symmetrizer();
    let mut value = Q::one();
    for root in cartan.positive_roots() {
        let weighted = |shift: i64| {
            root.iter()
                .enumerate()
                .map(|(j, &m)| {
                    Q::from_integer((m * (highest_weight[j] * shift + 1)).into()) * d[j].clone()
                })
                .fold(Q::zero(), |a, b| a + b)
        };
        value = value * weighted(1) / weighted(0);
    }
    if !value.is_integer() {
        return Err(Error::Internal(format!(
            "Weyl dimension {value} is not an integer"
        )));
    }
    u64::try_from(value.to_integer()).map_err(|_| Error::Internal("Weyl dimension overflow".into()))
}

/// Builds the `i`-th fundamental representation (0-based), refusing
/// representations whose dimension exceeds `dim_cap`.
pub fn build_fundamental(cartan: &CartanData, i: usize, dim_cap: usize) -> Result<FundamentalRep> {
    let n = cartan.rank();
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, rank: n });
    }
    let mut highest = vec![0i64; n];
    highest[i] = 1;
    let predicted = weyl_dim(cartan, &highest)?;
    if predicted > dim_cap as u64 {
        return Err(Error::DimensionCap {
            dim: predicted,
            cap: dim_cap,
        });
    }
    let a = cartan.cartan();
    let alpha: Vec<Vec<i64>> = (0..n).map(|j| a.row(j).to_vec()).collect();

    let mut blocks: Vec<BlockBuild> = vec![BlockBuild {
        omega: highest.clone(),
        depth: vec![0; n],
        labels: vec![Vec::new()],
        gram: Matrix::identity(1),
        e_to: vec![None; n],
        f_from: vec![None; n],
    }];
    let mut lookup: HashMap<Vec<i64>, usize> = HashMap::from([(highest.clone(), 0)]);
    let mut level: Vec<usize> = vec![0];
    let mut total = 1usize;

    while !level.is_empty() {
        let mut targets: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
        for &b in &level {
            for j in 0..n {
                let gamma = sub_vec(&blocks[b].omega, &alpha[j]);
                if !lookup.contains_key(&gamma) && !targets.iter().any(|(g, _)| *g == gamma) {
                    let mut depth = blocks[b].depth.clone();
                    depth[j] += 1;
                    targets.push((gamma, depth));
                }
            }
        }
        let mut next_level = Vec::new();
        for (gamma, depth) in targets {
            if let Some(block) = build_block(&blocks, &lookup, &alpha, gamma, depth)? {
                total += block.labels.len();
                if total > dim_cap {
                    return Err(Error::DimensionCap {
                        dim: total as u64,
                        cap: dim_cap,
                    });
                }
                lookup.insert(block.omega.clone(), blocks.len());
                next_level.push(blocks.len());
                blocks.push(block);
            }
        }
        level = next_level;
    }

    if total as u64 != predicted {
        return Err(Error::Internal(format!(
            "built dimension {total} differs from the Weyl dimension {predicted}"
        )));
    }
    Ok(assemble(cartan, i, blocks, &lookup, &alpha))
}

fn build_block(
    blocks: &[BlockBuild],
    lookup: &HashMap<Vec<i64>, usize>,
    alpha: &[Vec<i64>],
    gamma: Vec<i64>,
    depth: Vec<i64>,
) -> Result<Option<BlockBuild>> {
    let n = alpha.len();
    let block_at = |w: &[i64]| lookup.get(w).copied();

    // Candidates F_j u, u running over the basis of V_{gamma + alpha_j}.
    struct Candidate {
        j: usize,
        u: usize,
        label: Vec<usize>,
        /// E_k applied to the candidate, in the basis of V_{gamma + alpha_k}.
        e_images: Vec<Option<Vec<Q>>>,
    }
    let mut candidates = Vec::new();
    for j in 0..n {
        let Some(parent) = block_at(&add_vec(&gamma, &alpha[j])) else {
            continue;
        };
        let parent_dim = blocks[parent].labels.len();
        for u in 0..parent_dim {
            let mut e_images = vec![None; n];
            for (k, image) in e_images.iter_mut().enumerate() {
                let Some(target) = block_at(&add_vec(&gamma, &alpha[k])) else {
                    continue;
                };
                let target_dim = blocks[target].labels.len();
                // F_j E_k u
                let mut v = match (&blocks[parent].e_to[k], &blocks[target].f_from[j]) {
                    (Some(ek), Some(fj)) => fj.mul_vec(&ek.column(u)),
                    _ => vec![Q::zero(); target_dim],
                };
                if j == k {
                    // (gamma + alpha_j)(h_j) u
                    let scalar = Q::from_integer(blocks[parent].omega[j].into());
                    v[u] = v[u].clone() + scalar;
                }
                *image = Some(v);
            }
            let mut label = blocks[parent].labels[u].clone();
            label.push(j);
            candidates.push(Candidate {
                j,
                u,
                label,
                e_images,
            });
        }
    }

    // {F_j u, F_k u'} = {u, E_j (F_k u')} computed in V_{gamma + alpha_j}.
    let m = candidates.len();
    let gram_all = Matrix::from_fn(m, m, |x, y| {
        let cx = &candidates[x];
        let parent = block_at(&add_vec(&gamma, &alpha[cx.j])).expect("parent exists");
        let ey = candidates[y].e_images[cx.j]
            .as_ref()
            .expect("E_j image lands in an existing block");
        blocks[parent]
            .gram
            .bilinear(&unit_vec(blocks[parent].labels.len(), cx.u), ey)
    });
    if !gram_all.is_symmetric() {
        return Err(Error::Internal(format!(
            "candidate Gram matrix at weight {gamma:?} is not symmetric"
        )));
    }

    let mut selected: Vec<usize> = Vec::new();
    for c in 0..m {
        let mut trial = selected.clone();
        trial.push(c);
        if !gram_all.submatrix(&trial, &trial).determinant().is_zero() {
            selected = trial;
        }
    }
    if selected.is_empty() {
        return Ok(None);
    }
    let gram = gram_all.submatrix(&selected, &selected);
    if !gram.is_positive_definite() {
        return Err(Error::Internal(format!(
            "Gram block at weight {gamma:?} is not positive definite"
        )));
    }
    let gram_inv = gram
        .inverse()
        .ok_or_else(|| Error::Internal("selected Gram block is singular".into()))?;
    let d = selected.len();

    let mut e_to = vec![None; n];
    for (k, slot) in e_to.iter_mut().enumerate() {
        if let Some(target) = block_at(&add_vec(&gamma, &alpha[k])) {
            let rows = blocks[target].labels.len();
            *slot = Some(Matrix::from_fn(rows, d, |r, c| {
                candidates[selected[c]].e_images[k]
                    .as_ref()
                    .expect("target exists")[r]
                    .clone()
            }));
        }
    }

    let mut f_from = vec![None; n];
    for (j, slot) in f_from.iter_mut().enumerate() {
        let Some(parent) = block_at(&add_vec(&gamma, &alpha[j])) else {
            continue;
        };
        let cols = blocks[parent].labels.len();
        let mut fj = Matrix::zeros(d, cols);
        for (c, cand) in candidates.iter().enumerate().filter(|(_, c)| c.j == j) {
            let rhs: Vec<Q> = selected.iter().map(|&s| gram_all[(s, c)].clone()).collect();
            let coords = gram_inv.mul_vec(&rhs);
            for (r, value) in coords.into_iter().enumerate() {
                fj[(r, cand.u)] = value;
            }
        }
        *slot = Some(fj);
    }

    Ok(Some(BlockBuild {
        omega: gamma,
        depth,
        labels: selected
            .iter()
            .map(|&s| candidates[s].label.clone())
            .collect(),
        gram,
        e_to,
        f_from,
    }))
}

fn assemble(
    cartan: &CartanData,
    index: usize,
    builds: Vec<BlockBuild>,
    lookup: &HashMap<Vec<i64>, usize>,
    alpha: &[Vec<i64>],
) -> FundamentalRep {
    let n = cartan.rank();
    let mut blocks = Vec::with_capacity(builds.len());
    let mut offset = 0;
    for b in &builds {
        let dim = b.labels.len();
        blocks.push(WeightBlock {
            omega_coords: b.omega.clone(),
            depth: b.depth.clone(),
            offset,
            dim,
            gram: b.gram.clone(),
        });
        offset += dim;
    }
    let total = offset;
    let mut e = vec![Matrix::<Q>::zeros(total, total); n];
    let mut f = vec![Matrix::<Q>::zeros(total, total); n];
    for (bi, b) in builds.iter().enumerate() {
        for k in 0..n {
            if let Some(ek) = &b.e_to[k] {
                let target = lookup[&add_vec(&b.omega, &alpha[k])];
                place(&mut e[k], ek, blocks[target].offset, blocks[bi].offset);
            }
            if let Some(fk) = &b.f_from[k] {
                let parent = lookup[&add_vec(&b.omega, &alpha[k])];
                place(&mut f[k], fk, blocks[bi].offset, blocks[parent].offset);
            }
        }
    }
    let h = (0..n)
        .map(|j| {
            let mut m = Matrix::<Q>::zeros(total, total);
            for b in &blocks {
                for r in b.range() {
                    m[(r, r)] = Q::from_integer(b.omega_coords[j].into());
                }
            }
            m
        })
        .collect();
    FundamentalRep {
        lie_type: cartan.lie_type(),
        index,
        cartan: cartan.cartan().clone(),
        blocks,
        labels: builds.into_iter().flat_map(|b| b.labels).collect(),
        e,
        f,
        h,
    }
}

fn place(dst: &mut Matrix<Q>, src: &Matrix<Q>, row0: usize, col0: usize) {
    for r in 0..src.rows() {
        for c in 0..src.cols() {
            dst[(row0 + r, col0 + c)] = src[(r, c)].clone();
        }
    }
}

impl FundamentalRep {
    pub fn lie_type(&self) -> LieType {
        self.lie_type
    }

    /// 0-based index `i` of `omega_i`.
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn rank(&self) -> usize {
        self.cartan.rows()
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn cartan(&self) -> &Matrix<i64> {
        &self.cartan
    }

    pub fn blocks(&self) -> &[WeightBlock] {
        &self.blocks
    }

    /// Lowering words: basis vector `v` equals `F_{w_k} .. F_{w_1} |i>` for
    /// `labels()[v] = [w_1, .., w_k]`.
    pub fn labels(&self) -> &[Vec<usize>] {
        &self.labels
    }

    /// Matrix of `e_{alpha_j}`.
    pub fn e(&self, j: usize) -> &Matrix<Q> {
        &self.e[j]
    }

    /// Matrix of `e_{-alpha_j}`.
    pub fn f(&self, j: usize) -> &Matrix<Q> {
        &self.f[j]
    }

    /// Matrix of `h_{alpha_j}`.
    pub fn h(&self, j: usize) -> &Matrix<Q> {
        &self.h[j]
    }

    /// The highest weight vector `|i>` (basis vector 0).
    pub fn highest(&self) -> Vec<Q> {
        unit_vec(self.dim(), 0)
    }

    pub fn block_of_weight(&self, omega_coords: &[i64]) -> Option<&WeightBlock> {
        self.blocks.iter().find(|b| b.omega_coords == omega_coords)
    }

    pub fn block_index_of_weight(&self, omega_coords: &[i64]) -> Option<usize> {
        self.blocks
            .iter()
            .position(|b| b.omega_coords == omega_coords)
    }

    /// Block containing basis vector `v`.
    pub fn block_of_basis(&self, v: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.range().contains(&v))
            .expect("basis index in range")
    }

    /// Weights with multiplicities, in basis order.
    pub fn weights(&self) -> Vec<(Vec<i64>, usize)> {
        self.blocks
            .iter()
            .map(|b| (b.omega_coords.clone(), b.dim))
            .collect()
    }

    /// The Gram matrix of the whole space (block diagonal).
    pub fn gram(&self) -> Matrix<Q> {
        let mut g = Matrix::zeros(self.dim(), self.dim());
        for b in &self.blocks {
            place(&mut g, &b.gram, b.offset, b.offset);
        }
        g
    }

    /// Contravariant form `{u, v}` on coordinate vectors over `T`.
    pub fn form<T: Scalar>(&self, u: &[T], v: &[T]) -> T {
        T::sum_all(self.blocks.iter().map(|b| {
            let g = b.gram.map(T::from_rational);
            g.bilinear(&u[b.range()], &v[b.range()])
        }))
    }

    /// `<beta, H>` for every block, in block order.
    pub fn block_pairings<T: Scalar>(&self, h: &Coweight<T>) -> Result<Vec<T>> {
        if h.rank() != self.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                got: h.rank(),
            });
        }
        Ok(self
            .blocks
            .iter()
            .map(|b| {
                dot(
                    &Weight::<T>::from_ints(&b.omega_coords).coords().to_vec(),
                    h.coords(),
                )
            })
            .collect())
    }

    /// The block-scalar matrix of `H`: `<beta, H>` on each weight space.
    pub fn coweight_matrix<T: Scalar>(&self, h: &Coweight<T>) -> Result<Matrix<T>> {
        let pairings = self.block_pairings(h)?;
        let mut m = Matrix::zeros(self.dim(), self.dim());
        for (b, p) in self.blocks.iter().zip(pairings) {
            for r in b.range() {
                m[(r, r)] = p.clone();
            }
        }
        Ok(m)
    }

    /// Serializable snapshot for the on-disk cache.
    pub fn to_cache(&self) -> RepCache {
        let render = |m: &Matrix<Q>| {
            m.to_rows()
                .iter()
                .map(|r| r.iter().map(Scalar::render).collect())
                .collect()
        };
        RepCache {
            schema_version: CACHE_SCHEMA_VERSION,
            lie_type: self.lie_type.to_string(),
            index: self.index + 1,
            dim: self.dim(),
            weights: self
                .blocks
                .iter()
                .map(|b| CachedWeight {
                    beta_omega_coords: b.omega_coords.clone(),
                    depth: b.depth.clone(),
                    mult: b.dim,
                })
                .collect(),
            labels: self
                .labels
                .iter()
                .map(|l| l.iter().map(|j| j + 1).collect())
                .collect(),
            e: self.e.iter().map(render).collect(),
            f: self.f.iter().map(render).collect(),
            h: self.h.iter().map(render).collect(),
            gram: self
                .blocks
                .iter()
                .map(|b| (weight_key(&b.omega_coords), render(&b.gram)))
                .collect(),
        }
    }

    /// Restores a representation from the cache, validating schema version,
    /// type, index and internal consistency.
    pub fn from_cache(cartan: &CartanData, cache: &RepCache) -> Result<Self> {
        if cache.schema_version != CACHE_SCHEMA_VERSION {
            return Err(Error::Invalid(format!(
                "cache schema {} != {}",
                cache.schema_version, CACHE_SCHEMA_VERSION
            )));
        }
        if cache.lie_type != cartan.lie_type().to_string()
            || cache.index == 0
            || cache.index > cartan.rank()
        {
            return Err(Error::Invalid(
                "cache entry does not match the requested type/index".into(),
            ));
        }
        let parse_matrix = |rows: &Vec<Vec<String>>| -> Result<Matrix<Q>> {
            let parsed = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|s| {
                            parse_rational(s)
                                .ok_or_else(|| Error::Invalid(format!("bad rational `{s}`")))
                        })
                        .collect()
                })
                .collect::<Result<Vec<Vec<Q>>>>()?;
            Ok(Matrix::from_rows(parsed))
        };
        let mut blocks = Vec::new();
        let mut offset = 0;
        for w in &cache.weights {
            let key = weight_key(&w.beta_omega_coords);
            let gram = parse_matrix(
                cache
                    .gram
                    .get(&key)
                    .ok_or_else(|| Error::Invalid(format!("missing Gram block {key}")))?,
            )?;
            if gram.rows() != w.mult || gram.cols() != w.mult {
                return Err(Error::Invalid(format!(
                    "Gram block {key} has the wrong size"
                )));
            }
            blocks.push(WeightBlock {
                omega_coords: w.beta_omega_coords.clone(),
                depth: w.depth.clone(),
                offset,
                dim: w.mult,
                gram,
            });
            offset += w.mult;
        }
        let n = cartan.rank();
        let load = |ms: &Vec<Vec<Vec<String>>>| -> Result<Vec<Matrix<Q>>> {
            if ms.len() != n {
                return Err(Error::Invalid("wrong number of generator matrices".into()));
            }
            let out = ms.iter().map(parse_matrix).collect::<Result<Vec<_>>>()?;
            if out.iter().any(|m| m.rows() != offset || m.cols() != offset) {
                return Err(Error::Invalid("generator matrix has the wrong size".into()));
            }
            Ok(out)
        };
        let rep = FundamentalRep {
            lie_type: cartan.lie_type(),
            index: cache.index - 1,
            cartan: cartan.cartan().clone(),
            blocks,
            labels: cache
                .labels
                .iter()
                .map(|l| l.iter().map(|j| j - 1).collect())
                .collect(),
            e: load(&cache.e)?,
            f: load(&cache.f)?,
            h: load(&cache.h)?,
        };
        if rep.dim() != cache.dim || rep.labels.len() != offset {
            return Err(Error::Invalid("cache dimension mismatch".into()));
        }
        rep.check_relations()?;
        Ok(rep)
    }

    /// Verifies the Chevalley relations, weight gradings, adjointness and
    /// positivity of the form. Used after loading from cache and by tests.
    pub fn check_relations(&self) -> Result<()> {
        let n = self.rank();
        let fail = |what: String| {
            Err(Error::Internal(format!(
                "{} omega_{}: {what}",
                self.lie_type,
                self.index + 1
            )))
        };
        let gram = self.gram();
        for j in 0..n {
            for k in 0..n {
                let bracket = self.e[j].commutator(&self.f[k]);
                let expected = if j == k {
                    self.h[j].clone()
                } else {
                    Matrix::zeros(self.dim(), self.dim())
                };
                if bracket != expected {
                    return fail(format!("[E_{}, F_{}] wrong", j + 1, k + 1));
                }
                // [h_j, e_k] = alpha_k(h_j) e_k = a_kj e_k
                let a_kj = Q::from_integer(self.cartan[(k, j)].into());
                if self.h[j].commutator(&self.e[k]) != self.e[k].scale(&a_kj) {
                    return fail(format!("[H_{}, E_{}] wrong", j + 1, k + 1));
                }
                if self.h[j].commutator(&self.f[k]) != self.f[k].scale(&-a_kj) {
                    return fail(format!("[H_{}, F_{}] wrong", j + 1, k + 1));
                }
            }
            // {F_j u, v} = {u, E_j v} for all basis u, v  <=>  F_j^T G = G E_j
            if self.f[j].transpose().mul(&gram) != gram.mul(&self.e[j]) {
                return fail(format!("F_{} and E_{} are not adjoint", j + 1, j + 1));
            }
            if !self.e[j].mul_vec(&self.highest()).iter().all(Zero::is_zero) {
                return fail(format!(
                    "E_{} does not kill the highest weight vector",
                    j + 1
                ));
            }
        }
        for b in &self.blocks {
            if !b.gram.is_positive_definite() {
                return fail(format!(
                    "Gram block {:?} not positive definite",
                    b.omega_coords
                ));
            }
        }
        Ok(())
    }

    /// Gram determinants per weight, in block order.
    pub fn gram_determinants(&self) -> Vec<Q> {
        self.blocks.iter().map(|b| b.gram.determinant()).collect()
    }
}

/// Cache key for a weight: comma-joined fundamental-weight coordinates.
pub fn weight_key(omega_coords: &[i64]) -> String {
    omega_coords
        .iter()
        .map(i64::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CachedWeight {
    pub beta_omega_coords: Vec<i64>,
    pub depth: Vec<i64>,
    pub mult: usize,
}

/// On-disk form of a [`FundamentalRep`]; rationals as `p/q` strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepCache {
    pub schema_version: u32,
    #[serde(rename = "type")]
    pub lie_type: String,
    /// 1-based.
    pub index: usize,
    pub dim: usize,
    pub weights: Vec<CachedWeight>,
    pub labels: Vec<Vec<usize>>,
    #[serde(rename = "E")]
    pub e: Vec<Vec<Vec<String>>>,
    #[serde(rename = "F")]
    pub f: Vec<Vec<Vec<String>>>,
    #[serde(rename = "H")]
    pub h: Vec<Vec<Vec<String>>>,
    pub gram: BTreeMap<String, Vec<Vec<String>>>,
}
