//! The Kostant series `Phi(z)` solving `Phi^{-1} Phi_z = zeta`, `Phi(0) = Id`,
//! and its expansion on the highest weight vector.
//!
//! On a representation, `Phi(z) = sum_s z^{p_1(s)} e_{-s} / p(s, w0)` where
//! `p(s, w0) = (mu_{i_1} + .. + mu_{i_k}) (mu_{i_2} + .. + mu_{i_k}) .. mu_{i_k}`.
//! Grouping sequences by their root content `m` gives operators `Y_m` with
//! `Y_0 = Id` and `Y_m = (m . mu)^{-1} sum_j Y_{m - e_j} F_j`, so that
//! `Phi(z) = sum_m z^{m . mu} Y_m`. The column `Phi(z)|i>` is also computed
//! directly from the sequences, which is what the coefficients `q_beta` are
//! defined by.

use std::collections::HashMap;

use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::{CartanData, Coweight, GammaVector};
use crate::linalg::Matrix;
use crate::rep::FundamentalRep;
use crate::scalar::Scalar;
use crate::weyl::WeylElement;

/// `p(s, w0)` for a 0-based index sequence `s`, in application order.
pub fn p_of<T: Scalar>(s: &[usize], mu: &[T]) -> T {
    let mut p = T::one();
    for start in 0..s.len() {
        p = p * T::sum_all(s[start..].iter().map(|&j| mu[j].clone()));
    }
    p
}

/// One nonzero term `e_{-s}|i>` of the series.
#[derive(Clone, Debug)]
pub struct SequenceTerm<T> {
    pub seq: Vec<usize>,
    /// Root coordinates of `phi(s) = sum alpha_{i_j}`.
    pub phi: Vec<i64>,
    pub p: T,
    /// Coordinates of `F_{i_k} .. F_{i_1} |i>` in the representation basis.
    pub vector: Vec<crate::Rational>,
}

/// Depth-first enumeration of all sequences `s` with `e_{-s}|i> != 0`,
/// increasing generator index first. `visit` sees every term, the empty
/// sequence included.
pub fn for_each_sequence<T: Scalar>(
    rep: &FundamentalRep,
    mu: &[T],
    mut visit: impl FnMut(&SequenceTerm<T>),
) {
    let n = rep.rank();
    let mut term = SequenceTerm {
        seq: Vec::new(),
        phi: vec![0; n],
        p: T::one(),
        vector: rep.highest(),
    };
    fn walk<T: Scalar>(
        rep: &FundamentalRep,
        mu: &[T],
        term: &mut SequenceTerm<T>,
        visit: &mut dyn FnMut(&SequenceTerm<T>),
    ) {
        visit(term);
        for j in 0..rep.rank() {
            let next = rep.f(j).mul_vec(&term.vector);
            if next.iter().all(Zero::is_zero) {
                continue;
            }
            let saved = std::mem::replace(&mut term.vector, next);
            term.seq.push(j);
            term.phi[j] += 1;
            let saved_p = std::mem::replace(&mut term.p, p_of(&term.seq, mu));
            walk(rep, mu, term, visit);
            term.p = saved_p;
            term.phi[j] -= 1;
            term.seq.pop();
            term.vector = saved;
        }
    }
    walk(rep, mu, &mut term, &mut visit);
}

/// All nonzero sequence terms, in enumeration order.
pub fn sequences<T: Scalar>(rep: &FundamentalRep, mu: &[T]) -> Vec<SequenceTerm<T>> {
    let mut out = Vec::new();
    for_each_sequence(rep, mu, |t| out.push(t.clone()));
    out
}

/// Coefficient data of `Phi|i>` on one weight space.
#[derive(Clone, Debug)]
pub struct WeightTerm<T> {
    pub block: usize,
    pub omega_coords: Vec<i64>,
    /// `m` with `omega_i - beta = sum m_j alpha_j`.
    pub depth: Vec<i64>,
    /// `w_beta = sum_{phi(s) = omega_i - beta} e_{-s}|i> / p(s, w0)`, block coordinates.
    pub w: Vec<T>,
    /// `b_beta = <omega_i - beta, w0>`.
    pub exponent: T,
    /// `q_beta = {w_beta, w_beta}`.
    pub q: T,
}

#[derive(Clone, Debug)]
pub struct PhiExpansion<T> {
    /// 0-based.
    pub index: usize,
    pub terms: Vec<WeightTerm<T>>,
    pub sequence_count: usize,
}

/// Expands `Phi(z)|i> = sum_beta z^{b_beta} w_beta`.
pub fn phi_expand<T: Scalar>(
    rep: &FundamentalRep,
    gamma: &GammaVector<T>,
) -> Result<PhiExpansion<T>> {
    if gamma.len() != rep.rank() {
        return Err(Error::RankMismatch {
            expected: rep.rank(),
            got: gamma.len(),
        });
    }
    let mu = gamma.mu();
    let mut parts: Vec<Vec<Vec<T>>> = rep
        .blocks()
        .iter()
        .map(|b| vec![Vec::new(); b.dim])
        .collect();
    let mut count = 0usize;
    let block_of: HashMap<Vec<i64>, usize> = rep
        .blocks()
        .iter()
        .enumerate()
        .map(|(k, b)| (b.depth.clone(), k))
        .collect();
    for_each_sequence(rep, &mu, |t| {
        count += 1;
        let k = block_of[&t.phi];
        let b = &rep.blocks()[k];
        for (slot, x) in parts[k].iter_mut().zip(&t.vector[b.range()]) {
            if !x.is_zero() {
                slot.push(T::from_rational(x) / t.p.clone());
            }
        }
    });
    let terms = rep
        .blocks()
        .iter()
        .zip(parts)
        .enumerate()
        .map(|(k, (b, coords))| {
            let w: Vec<T> = coords.into_iter().map(T::sum_all).collect();
            let gram = b.gram.map(T::from_rational);
            let q = gram.bilinear(&w, &w);
            let exponent = T::sum_all(
                b.depth
                    .iter()
                    .zip(&mu)
                    .map(|(&m, mu)| T::from_i64(m) * mu.clone()),
            );
            WeightTerm {
                block: k,
                omega_coords: b.omega_coords.clone(),
                depth: b.depth.clone(),
                w,
                exponent,
                q,
            }
        })
        .collect();
    Ok(PhiExpansion {
        index: rep.index(),
        terms,
        sequence_count: count,
    })
}

impl<T: Scalar> PhiExpansion<T> {
    pub fn term_for_weight(&self, omega_coords: &[i64]) -> Option<&WeightTerm<T>> {
        self.terms.iter().find(|t| t.omega_coords == omega_coords)
    }

    /// `q_{tau omega_i}`.
    pub fn extremal_q(&self, cartan: &CartanData, tau: &WeylElement) -> Result<T> {
        let mut omega = vec![0i64; cartan.rank()];
        omega[self.index] = 1;
        let image: Vec<i64> = tau.action().mul_vec(&omega);
        self.term_for_weight(&image)
            .map(|t| t.q.clone())
            .ok_or_else(|| Error::Internal(format!("weight {image:?} missing from the expansion")))
    }

    /// `sum_beta q_beta exp(2 lambda a_beta) rho^{2 b_beta}` evaluated directly.
    pub fn norm_sum(&self, pairings: &[f64], lambda: f64, rho: f64) -> f64 {
        f64::sum_all(self.terms.iter().zip(pairings).map(|(t, a)| {
            t.q.to_f64() * (2.0 * lambda * a).exp() * rho.powf(2.0 * t.exponent.to_f64())
        }))
    }

    pub fn to_dump(&self) -> ExpansionDump {
        ExpansionDump {
            i: self.index + 1,
            terms: self
                .terms
                .iter()
                .map(|t| DumpTerm {
                    beta_omega_coords: t.omega_coords.clone(),
                    exponent_m_coords: t.depth.clone(),
                    q: t.q.render(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DumpTerm {
    pub beta_omega_coords: Vec<i64>,
    pub exponent_m_coords: Vec<i64>,
    pub q: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpansionDump {
    /// 1-based.
    pub i: usize,
    pub terms: Vec<DumpTerm>,
}

/// The operator series `Phi(z) = sum_m z^{m . mu} Y_m` on a representation.
#[derive(Clone, Debug)]
pub struct PhiSeries {
    dim: usize,
    mu: Vec<f64>,
    f: Vec<Matrix<Complex64>>,
    grades: Vec<(f64, Matrix<Complex64>)>,
}

impl PhiSeries {
    pub fn new<T: Scalar>(rep: &FundamentalRep, gamma: &GammaVector<T>) -> Result<Self> {
        let n = rep.rank();
        if gamma.len() != n {
            return Err(Error::RankMismatch {
                expected: n,
                got: gamma.len(),
            });
        }
        let mu = gamma.mu();
        let f_exact: Vec<Matrix<T>> = (0..n).map(|j| rep.f(j).map(T::from_rational)).collect();
        let max_depth: Vec<i64> = (0..n)
            .map(|j| rep.blocks().iter().map(|b| b.depth[j]).max().unwrap_or(0))
            .collect();
        let mut grades: HashMap<Vec<i64>, Matrix<T>> = HashMap::new();
        grades.insert(vec![0; n], Matrix::identity(rep.dim()));
        let mut frontier = vec![vec![0i64; n]];
        let mut order = vec![vec![0i64; n]];
        while !frontier.is_empty() {
            let mut next: Vec<Vec<i64>> = Vec::new();
            for m in &frontier {
                for j in 0..n {
                    let mut up = m.clone();
                    up[j] += 1;
                    if up[j] > max_depth[j] || grades.contains_key(&up) || next.contains(&up) {
                        continue;
                    }
                    let mut acc: Option<Matrix<T>> = None;
                    for (k, fk) in f_exact.iter().enumerate() {
                        if up[k] == 0 {
                            continue;
                        }
                        let mut down = up.clone();
                        down[k] -= 1;
                        if let Some(y) = grades.get(&down) {
                            let term = y.mul(fk);
                            acc = Some(match acc {
                                Some(a) => a.add(&term),
                                None => term,
                            });
                        }
                    }
                    let Some(sum) = acc.filter(|a| !a.is_zero()) else {
                        continue;
                    };
                    let weight =
                        T::sum_all(up.iter().zip(&mu).map(|(&c, m)| T::from_i64(c) * m.clone()));
                    grades.insert(up.clone(), sum.scale(&(T::one() / weight)));
                    next.push(up);
                }
            }
            order.extend(next.iter().cloned());
            frontier = next;
        }
        let mu_f: Vec<f64> = mu.iter().map(Scalar::to_f64).collect();
        let grades = order
            .into_iter()
            .map(|m| {
                let power = m.iter().zip(&mu_f).map(|(&c, x)| c as f64 * x).sum();
                (power, grades[&m].map(|x| Complex64::new(x.to_f64(), 0.0)))
            })
            .collect();
        let f = f_exact
            .iter()
            .map(|m| m.map(|x| Complex64::new(x.to_f64(), 0.0)))
            .collect();
        Ok(PhiSeries {
            dim: rep.dim(),
            mu: mu_f,
            f,
            grades,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `Phi(z)`; `z` must lie off the closed negative real axis.
    pub fn evaluate(&self, z: Complex64) -> Result<Matrix<Complex64>> {
        check_off_cut(z)?;
        let mut out = Matrix::zeros(self.dim, self.dim);
        for (power, y) in &self.grades {
            out = out.add(&y.scale(&z.powf(*power)));
        }
        Ok(out)
    }

    /// `zeta(z) = sum_j z^{gamma_j} F_j`.
    pub fn zeta(&self, z: Complex64) -> Result<Matrix<Complex64>> {
        self.current(z, -1.0)
    }

    /// `xi(z) = sum_j z^{mu_j} F_j`.
    pub fn xi(&self, z: Complex64) -> Result<Matrix<Complex64>> {
        self.current(z, 0.0)
    }

    fn current(&self, z: Complex64, shift: f64) -> Result<Matrix<Complex64>> {
        check_off_cut(z)?;
        let mut out = Matrix::zeros(self.dim, self.dim);
        for (fj, mu) in self.f.iter().zip(&self.mu) {
            out = out.add(&fj.scale(&z.powf(mu + shift)));
        }
        Ok(out)
    }
}

fn check_off_cut(z: Complex64) -> Result<()> {
    if !z.re.is_finite() || !z.im.is_finite() || (z.im == 0.0 && z.re <= 0.0) {
        return Err(Error::OnBranchCut(format!("{z}")));
    }
    Ok(())
}

/// `Phi(z)` on the whole representation.
pub fn phi_matrix<T: Scalar>(
    rep: &FundamentalRep,
    gamma: &GammaVector<T>,
    z: Complex64,
) -> Result<Matrix<Complex64>> {
    PhiSeries::new(rep, gamma)?.evaluate(z)
}

/// Inverse of a unipotent lower-triangular matrix by forward substitution.
pub fn unipotent_inverse(l: &Matrix<Complex64>) -> Matrix<Complex64> {
    let n = l.rows();
    let mut inv = Matrix::identity(n);
    for c in 0..n {
        for r in c + 1..n {
            let mut acc = Complex64::zero();
            for k in c..r {
                acc += l[(r, k)] * inv[(k, c)];
            }
            inv[(r, c)] = -acc;
        }
    }
    inv
}

pub fn frobenius_norm(m: &Matrix<Complex64>) -> f64 {
    m.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// `|| Phi^{-1} M(w0) Phi - (M(w0) - xi) ||_F` with `M(w0)` the coweight
/// matrix of `w0`.
pub fn ad_characterization_residual<T: Scalar>(
    rep: &FundamentalRep,
    cartan: &CartanData,
    gamma: &GammaVector<T>,
    z: Complex64,
) -> Result<f64> {
    let series = PhiSeries::new(rep, gamma)?;
    let w0: Coweight<T> = cartan.w0_from_gammas(gamma)?;
    ad_residual_with(&series, rep, &w0.to_f64(), z)
}

/// Residual of the characterization for a prebuilt series.
pub fn ad_residual_with(
    series: &PhiSeries,
    rep: &FundamentalRep,
    w0: &Coweight<f64>,
    z: Complex64,
) -> Result<f64> {
    let phi = series.evaluate(z)?;
    let m = rep.coweight_matrix(w0)?.map(|x| Complex64::new(*x, 0.0));
    let lhs = unipotent_inverse(&phi).mul(&m).mul(&phi);
    let rhs = m.sub(&series.xi(z)?);
    Ok(frobenius_norm(&lhs.sub(&rhs)))
}

/// `{x, x}` for a complex vector: `x^* G x`.
pub fn hermitian_norm(rep: &FundamentalRep, x: &[Complex64]) -> f64 {
    f64::sum_all(rep.blocks().iter().map(|b| {
        let g = b.gram.map(Scalar::to_f64);
        let mut s = 0.0;
        for r in 0..b.dim {
            for c in 0..b.dim {
                s += g[(r, c)] * (x[b.offset + r].conj() * x[b.offset + c]).re;
            }
        }
        s
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::LieType;
    use crate::rep::{build_fundamental, DEFAULT_DIM_CAP};
    use crate::Rational;

    fn setup(name: &str, i: usize) -> (CartanData, FundamentalRep) {
        let cartan = CartanData::new(name.parse::<LieType>().unwrap()).unwrap();
        let rep = build_fundamental(&cartan, i, DEFAULT_DIM_CAP).unwrap();
        (cartan, rep)
    }

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p.into(), q.into())
    }

    #[test]
    fn p_of_examples() {
        let mu = [r(1, 1), r(1, 1)];
        assert_eq!(p_of::<Rational>(&[], &mu), r(1, 1));
        assert_eq!(p_of(&[0], &mu), r(1, 1));
        assert_eq!(p_of(&[0, 1], &mu), r(2, 1));
        let mu = [r(3, 2), r(1, 3)];
        // (3/2 + 1/3 + 1/3)(1/3 + 1/3)(1/3)
        assert_eq!(p_of(&[0, 1, 1], &mu), r(13, 6) * r(2, 3) * r(1, 3));
    }

    #[test]
    fn a2_first_column() {
        let (_, rep) = setup("A2", 0);
        let exp = phi_expand(&rep, &GammaVector::<Rational>::zeros(2)).unwrap();
        let w: Vec<Vec<Rational>> = exp.terms.iter().map(|t| t.w.clone()).collect();
        assert_eq!(w, vec![vec![r(1, 1)], vec![r(1, 1)], vec![r(1, 2)]]);
        let q: Vec<Rational> = exp.terms.iter().map(|t| t.q.clone()).collect();
        assert_eq!(q, vec![r(1, 1), r(1, 1), r(1, 4)]);
        let b: Vec<Rational> = exp.terms.iter().map(|t| t.exponent.clone()).collect();
        assert_eq!(b, vec![r(0, 1), r(1, 1), r(2, 1)]);
    }

    #[test]
    fn a1_column_has_z_mu_over_mu() {
        let (_, rep) = setup("A1", 0);
        let gamma = GammaVector::new(vec![r(1, 2)]).unwrap();
        let exp = phi_expand(&rep, &gamma).unwrap();
        assert_eq!(exp.terms[1].w, vec![r(2, 3)]);
        assert_eq!(exp.terms[1].exponent, r(3, 2));
    }

    #[test]
    fn phi_matrix_a2_at_one() {
        let (_, rep) = setup("A2", 0);
        let phi = phi_matrix(
            &rep,
            &GammaVector::<Rational>::zeros(2),
            Complex64::new(1.0, 0.0),
        )
        .unwrap();
        let expected = [[1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.5, 1.0, 1.0]];
        for (rr, row) in expected.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                assert!((phi[(rr, c)] - Complex64::new(*v, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn branch_cut_rejected() {
        let (_, rep) = setup("A1", 0);
        let g = GammaVector::<f64>::zeros(1);
        assert!(matches!(
            phi_matrix(&rep, &g, Complex64::new(-1.0, 0.0)),
            Err(Error::OnBranchCut(_))
        ));
        assert!(matches!(
            phi_matrix(&rep, &g, Complex64::new(0.0, 0.0)),
            Err(Error::OnBranchCut(_))
        ));
        assert!(phi_matrix(&rep, &g, Complex64::new(-1.0, 1e-9)).is_ok());
    }

    #[test]
    fn series_column_matches_expansion() {
        let (_, rep) = setup("G2", 0);
        let gamma = GammaVector::new(vec![0.2, -0.1]).unwrap();
        let exp = phi_expand(&rep, &gamma).unwrap();
        let z = Complex64::new(0.6, 0.35);
        let phi = phi_matrix(&rep, &gamma, z).unwrap();
        for t in &exp.terms {
            let b = &rep.blocks()[t.block];
            for (k, w) in t.w.iter().enumerate() {
                let expected = z.powf(t.exponent) * w;
                assert!((phi[(b.offset + k, 0)] - expected).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn dump_uses_rational_strings() {
        let (_, rep) = setup("A2", 0);
        let dump = phi_expand(&rep, &GammaVector::<Rational>::zeros(2))
            .unwrap()
            .to_dump();
        assert_eq!(dump.i, 1);
        assert_eq!(dump.terms[2].q, "1/4");
        assert_eq!(dump.terms[2].exponent_m_coords, vec![1, 1]);
    }
}
