//! Cartan data: Cartan matrices, root systems, weights, coweights and the
//! pairing between them.
//!
//! Conventions. Simple roots follow the Bourbaki numbering and the Cartan
//! matrix is `a_ij = alpha_i(h_j)` where `h_j` is the simple coroot. Weights
//! are stored in the fundamental-weight basis (`beta = sum b_k omega_k`, so
//! `b_k = beta(h_k)`) and coweights in the coroot basis `{h_1, .., h_n}`, which
//! makes the pairing a plain dot product. Row `i` of the Cartan matrix is the
//! fundamental-weight expansion of `alpha_i`.
//!
//! | type | non-simply-laced entries            |
//! |------|-------------------------------------|
//! | B_n  | `a_{n-1,n} = -2` (alpha_n short)    |
//! | C_n  | `a_{n,n-1} = -2` (alpha_n long)     |
//! | F_4  | `a_{23} = -2` (alpha_3, alpha_4 short) |
//! | G_2  | `a_{21} = -3` (alpha_1 short)       |

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};
use crate::scalar::{parse_rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    fn from_letter(c: char) -> Option<Family> {
        Some(match c.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return None,
        })
    }
}

/// A simple Lie algebra type such as `A2` or `G2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LieType {
    family: Family,
    rank: usize,
}

impl LieType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let bad = |reason| {
            Err(Error::InadmissibleType {
                family: family.letter().to_string(),
                rank,
                reason,
            })
        };
        match family {
            Family::A if rank >= 1 => {}
            Family::B | Family::C if rank >= 2 => {}
            Family::D if rank >= 4 => {}
            Family::E if (6..=8).contains(&rank) => {}
            Family::F if rank == 4 => {}
            Family::G if rank == 2 => {}
            Family::A => return bad("A requires rank >= 1"),
            Family::B | Family::C => return bad("B and C require rank >= 2"),
            Family::D => return bad("D requires rank >= 4"),
            Family::E => return bad("E requires rank 6, 7 or 8"),
            Family::F => return bad("F requires rank 4"),
            Family::G => return bad("G requires rank 2"),
        }
        Ok(LieType { family, rank })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of positive roots from the classification.
    pub fn positive_root_count(&self) -> usize {
        let n = self.rank;
        match self.family {
            Family::A => n * (n + 1) / 2,
            Family::B | Family::C => n * n,
            Family::D => n * (n - 1),
            Family::E => match n {
                6 => 36,
                7 => 63,
                _ => 120,
            },
            Family::F => 24,
            Family::G => 6,
        }
    }

    /// Dimension of the Lie algebra.
    pub fn algebra_dimension(&self) -> usize {
        self.rank + 2 * self.positive_root_count()
    }

    /// Order of the Weyl group from the classification.
    pub fn weyl_group_order(&self) -> u64 {
        let n = self.rank as u64;
        let fact = |k: u64| (1..=k).product::<u64>();
        match self.family {
            Family::A => fact(n + 1),
            Family::B | Family::C => (1u64 << n) * fact(n),
            Family::D => (1u64 << (n - 1)) * fact(n),
            Family::E => match n {
                6 => 51_840,
                7 => 2_903_040,
                _ => 696_729_600,
            },
            Family::F => 1152,
            Family::G => 12,
        }
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl FromStr for LieType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = chars
            .next()
            .and_then(Family::from_letter)
            .ok_or_else(|| Error::BadTypeString(s.to_string()))?;
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::BadTypeString(s.to_string()))?;
        LieType::new(family, rank)
    }
}

/// The Cartan matrix `a_ij = alpha_i(h_j)` for an admissible type.
pub fn cartan_matrix(lie_type: LieType) -> Matrix<i64> {
    let n = lie_type.rank();
    let mut a = Matrix::<i64>::zeros(n, n);
    for i in 0..n {
        a[(i, i)] = 2;
    }
    let mut link = |i: usize, j: usize| {
        a[(i, j)] = -1;
        a[(j, i)] = -1;
    };
    match lie_type.family() {
        Family::A | Family::B | Family::C | Family::F | Family::G => {
            for i in 0..n - 1 {
                link(i, i + 1);
            }
        }
        Family::D => {
            for i in 0..n - 2 {
                link(i, i + 1);
            }
            link(n - 3, n - 1);
        }
        Family::E => {
            // Bourbaki: 1-3-4-5-6-7-8 with 2 attached to 4.
            for (i, j) in [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)] {
                if i <= n && j <= n {
                    link(i - 1, j - 1);
                }
            }
        }
    }
    match lie_type.family() {
        Family::B => a[(n - 2, n - 1)] = -2,
        Family::C => a[(n - 1, n - 2)] = -2,
        Family::F => a[(1, 2)] = -2,
        Family::G => a[(1, 0)] = -3,
        _ => {}
    }
    a
}

/// Positive roots in simple-root coordinates, sorted by height and then
/// reverse-lexicographically (so `alpha_1, .., alpha_n` come first).
///
/// Computed as the orbit of the simple roots under the simple reflections
/// `beta -> beta - beta(h_i) alpha_i`.
pub fn positive_roots(cartan: &Matrix<i64>) -> Result<Vec<Vec<i64>>> {
    const CLOSURE_CAP: usize = 10_000;
    let n = cartan.rows();
    let simple: Vec<Vec<i64>> = (0..n).map(|i| unit(n, i)).collect();
    let mut seen: BTreeSet<Vec<i64>> = simple.iter().cloned().collect();
    let mut queue: VecDeque<Vec<i64>> = simple.into_iter().collect();
    while let Some(root) = queue.pop_front() {
        for i in 0..n {
            let coroot_pairing: i64 = (0..n).map(|j| root[j] * cartan[(j, i)]).sum();
            if coroot_pairing == 0 {
                continue;
            }
            let mut image = root.clone();
            image[i] -= coroot_pairing;
            if seen.insert(image.clone()) {
                if seen.len() > CLOSURE_CAP {
                    return Err(Error::Internal("root closure did not terminate".into()));
                }
                queue.push_back(image);
            }
        }
    }
    let mut positive: Vec<Vec<i64>> = seen
        .into_iter()
        .filter(|r| r.iter().all(|&m| m >= 0))
        .collect();
    positive.sort_by(|x, y| {
        let hx: i64 = x.iter().sum();
        let hy: i64 = y.iter().sum();
        hx.cmp(&hy).then_with(|| y.cmp(x))
    });
    Ok(positive)
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// A weight in the fundamental-weight basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weight<T> {
    coords: Vec<T>,
}

impl<T: Scalar> Weight<T> {
    pub fn new(coords: Vec<T>) -> Self {
        Weight { coords }
    }

    pub fn zero(rank: usize) -> Self {
        Weight {
            coords: vec![T::zero(); rank],
        }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Weight {
            coords: coords.iter().map(|&c| T::from_i64(c)).collect(),
        }
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn add(&self, other: &Self) -> Self {
        Weight {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Weight {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        Weight {
            coords: self.coords.iter().map(|a| a.clone() * s.clone()).collect(),
        }
    }
}

/// An element of the real Cartan subalgebra in the coroot basis `{h_j}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coweight<T> {
    coords: Vec<T>,
}

impl<T: Scalar> Coweight<T> {
    pub fn new(coords: Vec<T>) -> Self {
        Coweight { coords }
    }

    pub fn zero(rank: usize) -> Self {
        Coweight {
            coords: vec![T::zero(); rank],
        }
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn add(&self, other: &Self) -> Self {
        Coweight {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        Coweight {
            coords: self.coords.iter().map(|a| a.clone() * s.clone()).collect(),
        }
    }

    pub fn to_f64(&self) -> Coweight<f64> {
        Coweight {
            coords: self.coords.iter().map(Scalar::to_f64).collect(),
        }
    }
}

/// `<beta, H>`: the weight evaluated on the coweight.
pub fn pair<T: Scalar>(beta: &Weight<T>, h: &Coweight<T>) -> Result<T> {
    if beta.rank() != h.rank() {
        return Err(Error::RankMismatch {
            expected: beta.rank(),
            got: h.rank(),
        });
    }
    Ok(dot(&beta.coords, &h.coords))
}

/// The singularity strengths `gamma_1, .., gamma_n`, each `> -1`.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaVector<T> {
    gammas: Vec<T>,
}

impl<T: Scalar> GammaVector<T> {
    pub fn new(gammas: Vec<T>) -> Result<Self> {
        let minus_one = -T::one();
        for (index, g) in gammas.iter().enumerate() {
            if *g <= minus_one || g.to_f64().is_nan() {
                return Err(Error::GammaOutOfRange {
                    index: index + 1,
                    value: g.render(),
                });
            }
        }
        Ok(GammaVector { gammas })
    }

    pub fn zeros(rank: usize) -> Self {
        GammaVector {
            gammas: vec![T::zero(); rank],
        }
    }

    pub fn gammas(&self) -> &[T] {
        &self.gammas
    }

    pub fn len(&self) -> usize {
        self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }

    /// `mu_i = gamma_i + 1`.
    pub fn mu(&self) -> Vec<T> {
        self.gammas.iter().map(|g| g.clone() + T::one()).collect()
    }

    pub fn to_f64(&self) -> GammaVector<f64> {
        GammaVector {
            gammas: self.gammas.iter().map(Scalar::to_f64).collect(),
        }
    }

    /// Parses a comma-separated list of exact values (`0`, `1/2`, `-0.25`).
    pub fn parse_exact(text: &str) -> Result<GammaVector<BigRational>> {
        let gammas = text
            .split(',')
            .map(|p| {
                parse_rational(p)
                    .ok_or_else(|| Error::Invalid(format!("cannot parse gamma `{}`", p.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        GammaVector::new(gammas)
    }
}

/// Cartan matrix, its exact inverse and the positive roots of one simple type.
#[derive(Clone, Debug)]
pub struct CartanData {
    lie_type: LieType,
    cartan: Matrix<i64>,
    inverse: Matrix<BigRational>,
    positive_roots: Vec<Vec<i64>>,
}

impl CartanData {
    pub fn new(lie_type: LieType) -> Result<Self> {
        let cartan = cartan_matrix(lie_type);
        let inverse = cartan
            .to_scalar::<BigRational>()
            .inverse()
            .ok_or_else(|| Error::Internal(format!("Cartan matrix of {lie_type} is singular")))?;
        let positive_roots = positive_roots(&cartan)?;
        if positive_roots.len() != lie_type.positive_root_count() {
            return Err(Error::Internal(format!(
                "{lie_type}: closure produced {} positive roots, expected {}",
                positive_roots.len(),
                lie_type.positive_root_count()
            )));
        }
        Ok(CartanData {
            lie_type,
            cartan,
            inverse,
            positive_roots,
        })
    }

    pub fn lie_type(&self) -> LieType {
        self.lie_type
    }

    pub fn rank(&self) -> usize {
        self.lie_type.rank()
    }

    pub fn cartan(&self) -> &Matrix<i64> {
        &self.cartan
    }

    pub fn inverse(&self) -> &Matrix<BigRational> {
        &self.inverse
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.rank() {
            return Err(Error::IndexOutOfRange {
                index: i,
                rank: self.rank(),
            });
        }
        Ok(())
    }

    fn check_rank(&self, got: usize) -> Result<()> {
        if got != self.rank() {
            return Err(Error::RankMismatch {
                expected: self.rank(),
                got,
            });
        }
        Ok(())
    }

    /// Fundamental-weight coordinates of `alpha_i` (row `i` of the Cartan matrix).
    pub fn simple_root_coords(&self, i: usize) -> &[i64] {
        self.cartan.row(i)
    }

    pub fn simple_root<T: Scalar>(&self, i: usize) -> Result<Weight<T>> {
        self.check_index(i)?;
        Ok(Weight::from_ints(self.cartan.row(i)))
    }

    pub fn fundamental_weight<T: Scalar>(&self, i: usize) -> Result<Weight<T>> {
        self.check_index(i)?;
        Ok(Weight::from_ints(&unit(self.rank(), i)))
    }

    /// Fundamental-weight coordinates of the root `sum m_j alpha_j`.
    pub fn root_to_weight_coords(&self, m: &[i64]) -> Vec<i64> {
        let n = self.rank();
        (0..n)
            .map(|k| (0..n).map(|j| m[j] * self.cartan[(j, k)]).sum())
            .collect()
    }

    /// Simple-root coordinates `m = (A^{-1})^T b` of a weight.
    pub fn weight_to_root_coords<T: Scalar>(&self, beta: &Weight<T>) -> Result<Vec<T>> {
        self.check_rank(beta.rank())?;
        let n = self.rank();
        Ok((0..n)
            .map(|j| {
                T::sum_all(
                    (0..n)
                        .map(|k| T::from_rational(&self.inverse[(k, j)]) * beta.coords[k].clone()),
                )
            })
            .collect())
    }

    /// Inverse of [`Self::weight_to_root_coords`]: `b = A^T m`.
    pub fn root_coords_to_weight<T: Scalar>(&self, m: &[T]) -> Result<Weight<T>> {
        self.check_rank(m.len())?;
        let n = self.rank();
        Ok(Weight::new(
            (0..n)
                .map(|k| {
                    T::sum_all((0..n).map(|j| m[j].clone() * T::from_i64(self.cartan[(j, k)])))
                })
                .collect(),
        ))
    }

    /// `E_j = sum_k a^{kj} h_k`, the coweight dual to the simple roots.
    pub fn e_basis<T: Scalar>(&self, j: usize) -> Result<Coweight<T>> {
        self.check_index(j)?;
        Ok(Coweight::new(
            (0..self.rank())
                .map(|k| T::from_rational(&self.inverse[(k, j)]))
                .collect(),
        ))
    }

    /// `sum_j c_j E_j` in the coroot basis.
    pub fn coweight_from_e_coords<T: Scalar>(&self, c: &[T]) -> Result<Coweight<T>> {
        self.check_rank(c.len())?;
        let n = self.rank();
        Ok(Coweight::new(
            (0..n)
                .map(|k| {
                    T::sum_all(
                        (0..n).map(|j| T::from_rational(&self.inverse[(k, j)]) * c[j].clone()),
                    )
                })
                .collect(),
        ))
    }

    /// Coordinates of `H` in the `{E_j}` basis, i.e. `c_j = <alpha_j, H>`.
    pub fn coweight_to_e_coords<T: Scalar>(&self, h: &Coweight<T>) -> Result<Vec<T>> {
        self.check_rank(h.rank())?;
        (0..self.rank())
            .map(|j| pair(&self.simple_root::<T>(j)?, h))
            .collect()
    }

    /// The coweight `w0` with `<alpha_i, w0> = mu_i`.
    pub fn w0_from_gammas<T: Scalar>(&self, gamma: &GammaVector<T>) -> Result<Coweight<T>> {
        self.check_rank(gamma.len())?;
        self.coweight_from_e_coords(&gamma.mu())
    }

    /// `gamma^i = sum_j a^{ij} gamma_j`.
    pub fn gamma_upper<T: Scalar>(&self, gamma: &GammaVector<T>) -> Result<Vec<T>> {
        self.check_rank(gamma.len())?;
        let n = self.rank();
        Ok((0..n)
            .map(|i| {
                T::sum_all(
                    (0..n)
                        .map(|j| T::from_rational(&self.inverse[(i, j)]) * gamma.gammas[j].clone()),
                )
            })
            .collect())
    }

    /// Rejects coweights on a wall: some root pairs to zero.
    pub fn check_regular<T: Scalar>(&self, h: &Coweight<T>) -> Result<()> {
        self.check_rank(h.rank())?;
        for root in &self.positive_roots {
            let beta = Weight::<T>::from_ints(&self.root_to_weight_coords(root));
            if pair(&beta, h)?.is_zero() {
                return Err(Error::NotRegular { root: root.clone() });
            }
        }
        Ok(())
    }

    /// Weyl vector `rho = sum omega_k`, coordinates all one.
    pub fn rho<T: Scalar>(&self) -> Weight<T> {
        Weight::new(vec![T::one(); self.rank()])
    }

    /// Symmetrizer `d_j` (half the squared length of `alpha_j`, short roots
    /// normalized to 1) so that `a_ij d_j` is symmetric.
    pub fn symmetrizer(&self) -> Vec<BigRational> {
        let n = self.rank();
        let mut d: Vec<Option<BigRational>> = vec![None; n];
        d[0] = Some(BigRational::one());
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for j in 0..n {
                if j != i && self.cartan[(i, j)] != 0 && d[j].is_none() {
                    // a_ij d_j = a_ji d_i
                    let di = d[i].clone().unwrap();
                    d[j] = Some(
                        di * BigRational::from_integer(self.cartan[(j, i)].into())
                            / BigRational::from_integer(self.cartan[(i, j)].into()),
                    );
                    queue.push_back(j);
                }
            }
        }
        let d: Vec<BigRational> = d
            .into_iter()
            .map(|x| x.expect("Dynkin diagram is connected"))
            .collect();
        let min = d.iter().min().cloned().unwrap_or_else(BigRational::one);
        d.into_iter().map(|x| x / min.clone()).collect()
    }

    pub fn to_json(&self) -> CartanJson {
        CartanJson {
            family: self.lie_type.family.letter().to_string(),
            rank: self.rank(),
            cartan: self.cartan.to_rows(),
            inverse_cartan: self
                .inverse
                .to_rows()
                .iter()
                .map(|r| r.iter().map(Scalar::render).collect())
                .collect(),
            positive_roots: self.positive_roots.clone(),
        }
    }
}

/// Serialized form of [`CartanData`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CartanJson {
    pub family: String,
    pub rank: usize,
    pub cartan: Vec<Vec<i64>>,
    pub inverse_cartan: Vec<Vec<String>>,
    pub positive_roots: Vec<Vec<i64>>,
}

impl CartanJson {
    /// Rebuilds and cross-checks the Cartan data.
    pub fn into_cartan_data(self) -> Result<CartanData> {
        let lie_type: LieType = format!("{}{}", self.family, self.rank).parse()?;
        let data = CartanData::new(lie_type)?;
        if data.to_json() != self {
            return Err(Error::Invalid(format!(
                "stored Cartan data for {lie_type} does not match the classification"
            )));
        }
        Ok(data)
    }
}
