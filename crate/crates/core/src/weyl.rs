//! Weyl group enumeration, its dual action on coweights, chamber points and
//! the exact mass vectors `sigma_i = <omega_i - tau omega_i, w0>`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lie::{pair, CartanData, Coweight, Weight};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Default cap on the number of enumerated group elements.
pub const DEFAULT_GROUP_CAP: usize = 1_000_000;

/// A Weyl group element: a word in the simple reflections plus its integer
/// action on fundamental-weight coordinates.
///
/// The word `[i1, i2, .., ik]` (0-based) stands for `s_{i1} s_{i2} .. s_{ik}`,
/// so `s_{ik}` acts first. Two elements are the same iff their action
/// matrices agree; the word is bookkeeping.
#[derive(Clone, Debug)]
pub struct WeylElement {
    word: Vec<usize>,
    action: Matrix<i64>,
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.action == other.action
    }
}

impl Eq for WeylElement {}

fn reflection_matrix(cartan: &CartanData, i: usize) -> Matrix<i64> {
    let n = cartan.rank();
    let a = cartan.cartan();
    // b'_k = b_k - b_i a_{ik}
    Matrix::from_fn(n, n, |k, l| {
        i64::from(k == l) - if l == i { a[(i, k)] } else { 0 }
    })
}

/// The simple reflection `s_i` (0-based index).
pub fn simple_reflection(cartan: &CartanData, i: usize) -> Result<WeylElement> {
    if i >= cartan.rank() {
        return Err(Error::IndexOutOfRange {
            index: i,
            rank: cartan.rank(),
        });
    }
    Ok(WeylElement {
        word: vec![i],
        action: reflection_matrix(cartan, i),
    })
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        WeylElement {
            word: Vec::new(),
            action: Matrix::identity(rank),
        }
    }

    pub fn from_word(cartan: &CartanData, word: &[usize]) -> Result<Self> {
        let mut action = Matrix::identity(cartan.rank());
        for &i in word {
            action = action.mul(&simple_reflection(cartan, i)?.action);
        }
        Ok(WeylElement {
            word: word.to_vec(),
            action,
        })
    }

    /// Parses `s1 s2 s1` (1-based, spaces or commas). `id`, `e` and the empty
    /// string give the identity.
    pub fn parse(cartan: &CartanData, text: &str) -> Result<Self> {
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed == "id" || trimmed == "e" {
            return Ok(Self::identity(cartan.rank()));
        }
        let mut word = Vec::new();
        for token in trimmed
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
        {
            let digits = token.strip_prefix('s').unwrap_or(token);
            let idx: usize = digits
                .parse()
                .map_err(|_| Error::BadWord(text.to_string()))?;
            if idx == 0 || idx > cartan.rank() {
                return Err(Error::BadWord(text.to_string()));
            }
            word.push(idx - 1);
        }
        Self::from_word(cartan, &word)
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    /// The word as 1-based indices, as written in reports.
    pub fn word_one_based(&self) -> Vec<usize> {
        self.word.iter().map(|i| i + 1).collect()
    }

    pub fn action(&self) -> &Matrix<i64> {
        &self.action
    }

    pub fn rank(&self) -> usize {
        self.action.rows()
    }

    pub fn word_len(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.action == Matrix::identity(self.rank())
    }

    /// `self * other`: `other` acts first.
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        WeylElement {
            word,
            action: self.action.mul(&other.action),
        }
    }

    pub fn inverse(&self, cartan: &CartanData) -> WeylElement {
        let word: Vec<usize> = self.word.iter().rev().copied().collect();
        WeylElement::from_word(cartan, &word).expect("word indices already validated")
    }

    pub fn apply<T: Scalar>(&self, beta: &Weight<T>) -> Weight<T> {
        Weight::new(self.action.to_scalar::<T>().mul_vec(beta.coords()))
    }

    /// Image of the root `sum m_j alpha_j`, again in simple-root coordinates.
    pub fn apply_root(&self, cartan: &CartanData, m: &[i64]) -> Vec<i64> {
        let b = Weight::<BigRational>::from_ints(&cartan.root_to_weight_coords(m));
        let image = self.apply(&b);
        cartan
            .weight_to_root_coords(&image)
            .expect("rank checked")
            .into_iter()
            .map(|x| {
                assert!(x.is_integer(), "Weyl image of a root must be integral");
                i64::try_from(x.to_integer()).expect("root coordinate fits in i64")
            })
            .collect()
    }

    /// Number of positive roots sent to negative roots.
    pub fn inversion_count(&self, cartan: &CartanData) -> usize {
        cartan
            .positive_roots()
            .iter()
            .filter(|r| self.apply_root(cartan, r).iter().sum::<i64>() < 0)
            .count()
    }

    pub fn word_string(&self) -> String {
        word_string(&self.word)
    }
}

/// Formats a 0-based word as `s1 s2 ..`, or `id` when empty.
pub fn word_string(word: &[usize]) -> String {
    if word.is_empty() {
        "id".to_string()
    } else {
        word.iter()
            .map(|i| format!("s{}", i + 1))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.word_string())
    }
}

/// All elements of a Weyl group, in breadth-first discovery order.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    elements: Vec<WeylElement>,
    longest: usize,
}

impl WeylGroup {
    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The longest element `kappa`.
    pub fn longest(&self) -> &WeylElement {
        &self.elements[self.longest]
    }

    pub fn longest_index(&self) -> usize {
        self.longest
    }

    pub fn find(&self, element: &WeylElement) -> Option<usize> {
        self.elements.iter().position(|e| e == element)
    }

    /// Elements ordered by (length, lexicographic word).
    pub fn sorted(&self) -> Vec<&WeylElement> {
        let mut out: Vec<&WeylElement> = self.elements.iter().collect();
        out.sort_by(|a, b| {
            a.word
                .len()
                .cmp(&b.word.len())
                .then_with(|| a.word.cmp(&b.word))
        });
        out
    }
}

/// Breadth-first closure over right multiplication by simple reflections.
/// Each element keeps the first (hence shortest) word that reached it.
pub fn enumerate(cartan: &CartanData, cap: usize) -> Result<WeylGroup> {
    let n = cartan.rank();
    let generators: Vec<Matrix<i64>> = (0..n).map(|i| reflection_matrix(cartan, i)).collect();
    let identity = WeylElement::identity(n);
    let mut index: HashMap<Matrix<i64>, usize> = HashMap::from([(identity.action.clone(), 0)]);
    let mut elements = vec![identity];
    let mut queue = VecDeque::from([0usize]);
    while let Some(current) = queue.pop_front() {
        for (i, g) in generators.iter().enumerate() {
            let action = elements[current].action.mul(g);
            if index.contains_key(&action) {
                continue;
            }
            if elements.len() >= cap {
                return Err(Error::GroupTooLarge { cap });
            }
            let mut word = elements[current].word.clone();
            word.push(i);
            index.insert(action.clone(), elements.len());
            queue.push_back(elements.len());
            elements.push(WeylElement { word, action });
        }
    }
    let max_len = elements
        .iter()
        .map(WeylElement::word_len)
        .max()
        .unwrap_or(0);
    let longest: Vec<usize> = (0..elements.len())
        .filter(|&k| elements[k].word_len() == max_len)
        .collect();
    if longest.len() != 1 {
        return Err(Error::Internal(format!(
            "{} elements of maximal length",
            longest.len()
        )));
    }
    Ok(WeylGroup {
        elements,
        longest: longest[0],
    })
}

/// The dual action on coweights: `<tau beta, tau H> = <beta, H>`.
/// In the stored bases this is the inverse transpose of the weight action.
pub fn dual_action<T: Scalar>(
    cartan: &CartanData,
    tau: &WeylElement,
    h: &Coweight<T>,
) -> Result<Coweight<T>> {
    if h.rank() != tau.rank() {
        return Err(Error::RankMismatch {
            expected: tau.rank(),
            got: h.rank(),
        });
    }
    let inv = tau.inverse(cartan).action.transpose().to_scalar::<T>();
    Ok(Coweight::new(inv.mul_vec(h.coords())))
}

/// `tau(sum c_i E_i)`, a regular point of the chamber `tau C0`.
pub fn chamber_point<T: Scalar>(
    cartan: &CartanData,
    tau: &WeylElement,
    c: &[T],
) -> Result<Coweight<T>> {
    for (index, ci) in c.iter().enumerate() {
        if *ci <= T::zero() || ci.to_f64().is_nan() {
            return Err(Error::NonPositiveChamber {
                index: index + 1,
                value: ci.render(),
            });
        }
    }
    let h0 = cartan.coweight_from_e_coords(c)?;
    let h = dual_action(cartan, tau, &h0)?;
    cartan.check_regular(&h)?;
    Ok(h)
}

/// `sigma_i = <omega_i - tau omega_i, w0>` for every `i`.
pub fn mass_vector<T: Scalar>(
    cartan: &CartanData,
    tau: &WeylElement,
    w0: &Coweight<T>,
) -> Result<Vec<T>> {
    (0..cartan.rank())
        .map(|i| {
            let omega = cartan.fundamental_weight::<T>(i)?;
            pair(&omega.sub(&tau.apply(&omega)), w0)
        })
        .collect()
}

/// Row `i` holds the simple-root coordinates `m_ij` of `omega_i - tau omega_i`,
/// so that `sigma_i = sum_j m_ij mu_j`. Errors if any coordinate is not a
/// nonnegative integer.
pub fn mass_root_coords(cartan: &CartanData, tau: &WeylElement) -> Result<Matrix<i64>> {
    let n = cartan.rank();
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        let omega = cartan.fundamental_weight::<BigRational>(i)?;
        let diff = omega.sub(&tau.apply(&omega));
        for (j, m) in cartan.weight_to_root_coords(&diff)?.into_iter().enumerate() {
            if !m.is_integer() || m < BigRational::zero() {
                return Err(Error::Internal(format!(
                    "m_{}{} = {m} is not a nonnegative integer",
                    i + 1,
                    j + 1
                )));
            }
            out[(i, j)] = i64::try_from(m.to_integer())
                .map_err(|_| Error::Internal("m_ij overflow".into()))?;
        }
    }
    Ok(out)
}

/// Same values as [`mass_vector`], computed through `sum_j m_ij mu_j`.
pub fn mass_vector_from_root_coords<T: Scalar>(
    cartan: &CartanData,
    tau: &WeylElement,
    mu: &[T],
) -> Result<Vec<T>> {
    let m = mass_root_coords(cartan, tau)?;
    Ok((0..cartan.rank())
        .map(|i| T::sum_all((0..cartan.rank()).map(|j| T::from_i64(m[(i, j)]) * mu[j].clone())))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{GammaVector, LieType};

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    fn data(name: &str) -> CartanData {
        CartanData::new(name.parse::<LieType>().unwrap()).unwrap()
    }

    #[test]
    fn simple_reflection_examples() {
        let a2 = data("A2");
        let s1 = simple_reflection(&a2, 0).unwrap();
        let omega1 = a2.fundamental_weight::<BigRational>(0).unwrap();
        let alpha1 = a2.simple_root::<BigRational>(0).unwrap();
        let alpha2 = a2.simple_root::<BigRational>(1).unwrap();
        assert_eq!(s1.apply(&omega1), omega1.sub(&alpha1));
        assert_eq!(s1.apply(&alpha1), alpha1.scale(&q(-1, 1)));
        assert_eq!(s1.apply(&alpha2), alpha1.add(&alpha2));
        assert_eq!(s1.action().mul(s1.action()), Matrix::identity(2));
        assert!(simple_reflection(&a2, 2).is_err());
    }

    #[test]
    fn group_orders_and_longest_words() {
        let a1 = enumerate(&data("A1"), DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(a1.len(), 2);
        let a2 = enumerate(&data("A2"), DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(a2.len(), 6);
        assert_eq!(a2.longest().word(), &[0, 1, 0]);
        let g2 = enumerate(&data("G2"), DEFAULT_GROUP_CAP).unwrap();
        assert_eq!(g2.len(), 12);
        assert_eq!(g2.longest().word_len(), 6);
    }

    #[test]
    fn word_length_equals_inversions() {
        for name in ["A3", "B2", "C3", "G2"] {
            let cartan = data(name);
            let group = enumerate(&cartan, DEFAULT_GROUP_CAP).unwrap();
            assert_eq!(group.len() as u64, cartan.lie_type().weyl_group_order());
            for w in group.elements() {
                assert_eq!(w.word_len(), w.inversion_count(&cartan), "{name} {w}");
            }
            let kappa = group.longest();
            assert_eq!(
                kappa.inversion_count(&cartan),
                cartan.positive_roots().len()
            );
            assert!(kappa.compose(kappa).is_identity());
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            enumerate(&data("A3"), 10),
            Err(Error::GroupTooLarge { cap: 10 })
        ));
    }

    #[test]
    fn parse_words() {
        let a2 = data("A2");
        let w = WeylElement::parse(&a2, "s1 s2 s1").unwrap();
        assert_eq!(w, WeylElement::parse(&a2, "2,1,2").unwrap());
        assert!(WeylElement::parse(&a2, "id").unwrap().is_identity());
        assert!(WeylElement::parse(&a2, "s3").is_err());
        assert!(WeylElement::parse(&a2, "s0").is_err());
        assert!(WeylElement::parse(&a2, "sx").is_err());
        assert_eq!(w.word_string(), "s1 s2 s1");
    }

    #[test]
    fn dual_action_reproduces_diag_example() {
        // H0 = diag(2,1,-3) = 2 h_1 + 3 h_2, s1 H0 = diag(1,2,-3) = h_1 + 3 h_2.
        let a2 = data("A2");
        let s1 = simple_reflection(&a2, 0).unwrap();
        let h0 = Coweight::new(vec![q(2, 1), q(3, 1)]);
        assert_eq!(
            dual_action(&a2, &s1, &h0).unwrap(),
            Coweight::new(vec![q(1, 1), q(3, 1)])
        );
        assert_eq!(
            dual_action(&a2, &WeylElement::identity(2), &h0).unwrap(),
            h0
        );
        let from_chamber = chamber_point(&a2, &s1, &[q(1, 1), q(4, 1)]).unwrap();
        assert_eq!(from_chamber, Coweight::new(vec![q(1, 1), q(3, 1)]));
    }

    #[test]
    fn chamber_point_validation() {
        let a2 = data("A2");
        let id = WeylElement::identity(2);
        assert!(matches!(
            chamber_point(&a2, &id, &[q(1, 1), q(0, 1)]),
            Err(Error::NonPositiveChamber { index: 2, .. })
        ));
        let h = chamber_point(&a2, &id, &[q(1, 1), q(1, 1)]).unwrap();
        for i in 0..2 {
            assert_eq!(pair(&a2.simple_root(i).unwrap(), &h).unwrap(), q(1, 1));
        }
    }

    #[test]
    fn a2_mass_vectors() {
        let a2 = data("A2");
        let w0 = a2
            .w0_from_gammas(&GammaVector::new(vec![q(0, 1), q(0, 1)]).unwrap())
            .unwrap();
        let expect = [
            ("id", [0, 0]),
            ("s1", [1, 0]),
            ("s2", [0, 1]),
            ("s1 s2", [1, 2]),
            ("s2 s1", [2, 1]),
            ("s1 s2 s1", [2, 2]),
        ];
        for (word, masses) in expect {
            let tau = WeylElement::parse(&a2, word).unwrap();
            let sigma = mass_vector(&a2, &tau, &w0).unwrap();
            assert_eq!(
                sigma,
                masses.iter().map(|&m| q(m, 1)).collect::<Vec<_>>(),
                "{word}"
            );
            assert_eq!(
                mass_vector_from_root_coords(&a2, &tau, &[q(1, 1), q(1, 1)]).unwrap(),
                sigma
            );
        }
    }
}
