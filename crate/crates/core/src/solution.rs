//! Closed-form evaluation of the solution family
//! `U_i = 2 gamma^i log rho - log sum_beta q_beta e^{2 lambda a_beta} rho^{2 b_beta}`,
//! `u_i = sum_j a_ij U_j`, with `a_beta = <beta, H>` and
//! `b_beta = <omega_i - beta, w0>`.
//!
//! Sums are evaluated in the joint exponent `log q + 2 lambda a + 2 b log rho`
//! after subtracting its maximum, so large `lambda` and extreme radii never
//! overflow. Terms more than 745 natural-log units below the maximum
//! underflow to zero.

use std::fmt::Write as _;

use astro_float::BigFloat;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kostant::{phi_expand, PhiExpansion};
use crate::lie::{CartanData, Coweight, GammaVector, LieType};
use crate::linalg::Matrix;
use crate::precise::{self, Ctx};
use crate::rep::FundamentalRep;
use crate::scalar::{format_real, rational_to_f64, Scalar};
use crate::weyl::{word_string, WeylElement};

const UNDERFLOW: f64 = -745.0;
/// Below this magnitude of `4 e^{u_i}` and `4 Var/rho^2` the double-precision
/// residual is accurate to about `1e-10`; above it the residual is recomputed
/// in extended precision.
const PRECISE_RESIDUAL_ABOVE: f64 = 1e3;
/// Extended-precision sums skip terms this far below the maximum exponent.
const PRECISE_CUTOFF: f64 = -200.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Term {
    pub omega_coords: Vec<i64>,
    pub q: f64,
    /// `<beta, H>`
    pub a: f64,
    /// `<omega_i - beta, w0>`
    pub b: f64,
}

#[derive(Clone, Debug)]
pub struct SolutionFamily {
    lie_type: LieType,
    cartan: Matrix<i64>,
    gamma: Vec<f64>,
    gamma_upper: Vec<f64>,
    h: Vec<f64>,
    alpha_h: Vec<f64>,
    tau: Option<Vec<usize>>,
    regular: bool,
    terms: Vec<Vec<Term>>,
    /// Terms attaining `max_beta (a_beta + b_beta <alpha_1, H>)`, decided exactly.
    peak_group: Vec<Vec<bool>>,
    precise: Vec<Vec<PreciseTerm>>,
    gamma_precise: Vec<BigFloat>,
}

/// `log q`, `a`, `b` of a term to extended precision.
#[derive(Clone, Debug)]
struct PreciseTerm {
    ln_q: BigFloat,
    a: BigFloat,
    b: BigFloat,
}

/// Exact data of one term, used while assembling a family.
struct ExactTerm {
    omega_coords: Vec<i64>,
    q: BigRational,
    a: BigRational,
    b: BigRational,
}

/// Log-sum-exp of one component together with the softmax mean and variance
/// of `b`.
#[derive(Clone, Copy, Debug)]
struct Moments {
    lse: f64,
    /// Index of the dominant term and `log` of the sum scaled by it.
    top: usize,
    log_total: f64,
    mean: f64,
    var: f64,
}

fn moments(terms: &[Term], lambda: f64, t: f64) -> Moments {
    let exps: Vec<f64> = terms
        .iter()
        .map(|x| x.q.ln() + 2.0 * lambda * x.a + 2.0 * x.b * t)
        .collect();
    let (top, max) =
        exps.iter()
            .copied()
            .enumerate()
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, (k, e)| if e > acc.1 { (k, e) } else { acc },
            );
    let weights: Vec<f64> = exps
        .iter()
        .map(|e| {
            if e - max < UNDERFLOW {
                0.0
            } else {
                (e - max).exp()
            }
        })
        .collect();
    let total: f64 = f64::sum_all(weights.iter().copied());
    let mean = f64::sum_all(weights.iter().zip(terms).map(|(w, x)| w * x.b)) / total;
    let mut pairs = Vec::new();
    for k in 0..terms.len() {
        for l in k + 1..terms.len() {
            let d = terms[k].b - terms[l].b;
            pairs.push(weights[k] * weights[l] * d * d);
        }
    }
    let var = f64::sum_all(pairs) / (total * total);
    Moments {
        lse: max + total.ln(),
        top,
        log_total: total.ln(),
        mean,
        var,
    }
}

/// Values of the whole family at one `(lambda, rho)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointValues {
    pub big_u: Vec<f64>,
    pub u: Vec<f64>,
    pub du: Vec<f64>,
    pub d2u: Vec<f64>,
    pub residual: Vec<f64>,
}

impl SolutionFamily {
    /// Assembles the family from the fundamental representations (0-based
    /// order) for the coweight `h`. `tau` is recorded for reporting only.
    pub fn build<T: Scalar>(
        cartan: &CartanData,
        reps: &[FundamentalRep],
        gamma: &GammaVector<T>,
        h: &Coweight<T>,
        tau: Option<&WeylElement>,
    ) -> Result<Self> {
        if reps.len() != cartan.rank() || reps.iter().enumerate().any(|(i, r)| r.index() != i) {
            return Err(Error::Invalid(
                "need all fundamental representations in index order".into(),
            ));
        }
        let expansions = reps
            .iter()
            .map(|r| phi_expand(r, gamma))
            .collect::<Result<Vec<_>>>()?;
        Self::from_expansions(cartan, reps, &expansions, gamma, h, tau)
    }

    /// Same as [`SolutionFamily::build`] with precomputed expansions, which
    /// depend on `gamma` only and can be shared between coweights.
    pub fn from_expansions<T: Scalar>(
        cartan: &CartanData,
        reps: &[FundamentalRep],
        expansions: &[PhiExpansion<T>],
        gamma: &GammaVector<T>,
        h: &Coweight<T>,
        tau: Option<&WeylElement>,
    ) -> Result<Self> {
        let n = cartan.rank();
        if expansions.len() != n || reps.len() != n {
            return Err(Error::RankMismatch {
                expected: n,
                got: expansions.len().min(reps.len()),
            });
        }
        let exact = |x: &T| {
            x.to_rational()
                .ok_or_else(|| Error::Invalid(format!("non-finite value {x}")))
        };
        let mut terms = Vec::with_capacity(n);
        for (rep, exp) in reps.iter().zip(expansions) {
            let pairings = rep.block_pairings(h)?;
            let mut comp = Vec::new();
            for t in exp.terms.iter().filter(|t| t.q > T::zero()) {
                comp.push(ExactTerm {
                    omega_coords: t.omega_coords.clone(),
                    q: exact(&t.q)?,
                    a: exact(&pairings[t.block])?,
                    b: exact(&t.exponent)?,
                });
            }
            terms.push(comp);
        }
        let gamma_exact = gamma
            .gammas()
            .iter()
            .map(exact)
            .collect::<Result<Vec<_>>>()?;
        let h_exact = h.coords().iter().map(exact).collect::<Result<Vec<_>>>()?;
        Self::assemble(
            cartan,
            gamma_exact,
            h_exact,
            tau.map(|t| t.word().to_vec()),
            terms,
        )
    }

    /// Builds a family from explicit term lists. Every component needs
    /// positive `q` and a single term with `b = 0`.
    pub fn from_terms(
        cartan: &CartanData,
        gamma: Vec<f64>,
        h: Vec<f64>,
        tau: Option<Vec<usize>>,
        terms: Vec<Vec<Term>>,
    ) -> Result<Self> {
        let exact = |x: f64| {
            BigRational::from_float(x)
                .ok_or_else(|| Error::Invalid(format!("non-finite value {x}")))
        };
        let terms = terms
            .into_iter()
            .map(|comp| {
                comp.into_iter()
                    .map(|t| {
                        Ok(ExactTerm {
                            omega_coords: t.omega_coords,
                            q: exact(t.q)?,
                            a: exact(t.a)?,
                            b: exact(t.b)?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let gamma = gamma.into_iter().map(exact).collect::<Result<Vec<_>>>()?;
        let h = h.into_iter().map(exact).collect::<Result<Vec<_>>>()?;
        Self::assemble(cartan, gamma, h, tau, terms)
    }

    fn assemble(
        cartan: &CartanData,
        gamma: Vec<BigRational>,
        h: Vec<BigRational>,
        tau: Option<Vec<usize>>,
        terms: Vec<Vec<ExactTerm>>,
    ) -> Result<Self> {
        let n = cartan.rank();
        if gamma.len() != n || h.len() != n || terms.len() != n {
            return Err(Error::RankMismatch {
                expected: n,
                got: gamma.len(),
            });
        }
        let gamma_vec = GammaVector::new(gamma.clone())?;
        for (i, comp) in terms.iter().enumerate() {
            if comp
                .iter()
                .any(|t| t.q <= BigRational::from_integer(0.into()))
            {
                return Err(Error::Invalid(format!(
                    "component {} has a nonpositive q",
                    i + 1
                )));
            }
            if comp
                .iter()
                .filter(|t| t.b == BigRational::from_integer(0.into()))
                .count()
                != 1
            {
                return Err(Error::Invalid(format!(
                    "component {} needs exactly one term with b = 0",
                    i + 1
                )));
            }
        }
        let hw = Coweight::new(h.clone());
        let regular = cartan.check_regular(&hw).is_ok();
        let alpha_h_exact = cartan.coweight_to_e_coords(&hw)?;
        let alpha_h = alpha_h_exact.iter().map(rational_to_f64).collect();
        let peak_group = terms
            .iter()
            .map(|comp| {
                let kappa: Vec<BigRational> = comp
                    .iter()
                    .map(|t| &t.a + &t.b * &alpha_h_exact[0])
                    .collect();
                let peak = kappa.iter().max().cloned();
                kappa.iter().map(|k| Some(k) == peak.as_ref()).collect()
            })
            .collect();
        let (precise, gamma_precise) = precise::with_ctx(|c| {
            let precise = terms
                .iter()
                .map(|comp| {
                    comp.iter()
                        .map(|t| {
                            let q = c.rational(&t.q);
                            PreciseTerm {
                                ln_q: c.ln(&q),
                                a: c.rational(&t.a),
                                b: c.rational(&t.b),
                            }
                        })
                        .collect()
                })
                .collect();
            (precise, gamma.iter().map(|g| c.rational(g)).collect())
        });
        let terms = terms
            .into_iter()
            .map(|comp| {
                comp.into_iter()
                    .map(|t| Term {
                        omega_coords: t.omega_coords,
                        q: rational_to_f64(&t.q),
                        a: rational_to_f64(&t.a),
                        b: rational_to_f64(&t.b),
                    })
                    .collect()
            })
            .collect();
        Ok(SolutionFamily {
            lie_type: cartan.lie_type(),
            cartan: cartan.cartan().clone(),
            gamma_upper: cartan
                .gamma_upper(&gamma_vec)?
                .iter()
                .map(rational_to_f64)
                .collect(),
            gamma: gamma.iter().map(rational_to_f64).collect(),
            h: h.iter().map(rational_to_f64).collect(),
            alpha_h,
            tau,
            regular,
            terms,
            peak_group,
            precise,
            gamma_precise,
        })
    }

    pub fn lie_type(&self) -> LieType {
        self.lie_type
    }

    pub fn rank(&self) -> usize {
        self.gamma.len()
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn gamma_upper(&self) -> &[f64] {
        &self.gamma_upper
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn tau_word(&self) -> Option<&[usize]> {
        self.tau.as_deref()
    }

    /// False when `H` lies on a chamber wall; the local mass formula then
    /// need not hold and reports carry a tag.
    pub fn is_regular(&self) -> bool {
        self.regular
    }

    pub fn terms(&self, i: usize) -> &[Term] {
        &self.terms[i]
    }

    /// Copy with every `q_beta` of positive exponent multiplied by `factor`.
    pub fn with_scaled_q(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for comp in &mut out.terms {
            for t in comp.iter_mut().filter(|t| t.b > 0.0) {
                t.q *= factor;
            }
        }
        precise::with_ctx(|c| {
            let shift = c.ln(&c.f64(factor));
            for (comp, exact) in out.precise.iter_mut().zip(&out.terms) {
                for (p, t) in comp.iter_mut().zip(exact) {
                    if t.b > 0.0 {
                        p.ln_q = c.add(&p.ln_q, &shift);
                    }
                }
            }
        });
        out
    }

    fn check(&self, i: usize, rho: f64) -> Result<()> {
        if i >= self.rank() {
            return Err(Error::IndexOutOfRange {
                index: i,
                rank: self.rank(),
            });
        }
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::NonPositiveRadius(rho));
        }
        Ok(())
    }

    fn all_moments(&self, lambda: f64, t: f64) -> Vec<Moments> {
        self.terms.iter().map(|c| moments(c, lambda, t)).collect()
    }

    /// `U_i(rho)` at parameter `lambda`.
    pub fn big_u(&self, i: usize, lambda: f64, rho: f64) -> Result<f64> {
        self.check(i, rho)?;
        let t = rho.ln();
        Ok(2.0 * self.gamma_upper[i] * t - moments(&self.terms[i], lambda, t).lse)
    }

    /// `u_i(rho) = sum_j a_ij U_j(rho)`, written as
    /// `2 gamma_i log rho - sum_j a_ij log(...)` to avoid cancelling the
    /// logarithmic parts.
    pub fn small_u(&self, i: usize, lambda: f64, rho: f64) -> Result<f64> {
        self.check(i, rho)?;
        let t = rho.ln();
        Ok(self.u_from(i, lambda, &self.all_moments(lambda, t), t))
    }

    /// The dominant terms contribute `log q + 2 lambda a + 2 b t` to each
    /// log-sum; their `lambda` and `t` coefficients are combined before
    /// multiplying, so large cancelling exponents are never formed.
    fn u_from(&self, i: usize, lambda: f64, m: &[Moments], t: f64) -> f64 {
        let coupled: Vec<(f64, usize)> = (0..self.rank())
            .filter(|&j| self.cartan[(i, j)] != 0)
            .map(|j| (self.cartan[(i, j)] as f64, j))
            .collect();
        let top = |j: usize| &self.terms[j][m[j].top];
        let lambda_coef = f64::sum_all(coupled.iter().map(|&(a, j)| a * top(j).a));
        let t_coef = f64::sum_all(coupled.iter().map(|&(a, j)| a * top(j).b));
        let constant = f64::sum_all(
            coupled
                .iter()
                .map(|&(a, j)| a * (top(j).q.ln() + m[j].log_total)),
        );
        let slope = 2.0 * self.gamma[i] - 2.0 * t_coef;
        let radial = if slope == 0.0 { 0.0 } else { slope * t };
        radial - 2.0 * lambda * lambda_coef - constant
    }

    /// `(U_i', U_i'')` in `rho`, differentiated analytically.
    pub fn radial_derivatives(&self, i: usize, lambda: f64, rho: f64) -> Result<(f64, f64)> {
        self.check(i, rho)?;
        let m = moments(&self.terms[i], lambda, rho.ln());
        let slope = 2.0 * self.gamma_upper[i] - 2.0 * m.mean;
        Ok((slope / rho, (-slope - 4.0 * m.var) / (rho * rho)))
    }

    /// `U_i'' + U_i'/rho + 4 e^{u_i}`. The radial Laplacian is used in the
    /// simplified form `-4 Var(b) / rho^2`.
    pub fn pde_residual(&self, i: usize, lambda: f64, rho: f64) -> Result<f64> {
        self.check(i, rho)?;
        let t = rho.ln();
        let m = self.all_moments(lambda, t);
        Ok(self.residual_from(i, lambda, rho, &m))
    }

    fn residual_from(&self, i: usize, lambda: f64, rho: f64, m: &[Moments]) -> f64 {
        let source = 4.0 * self.u_from(i, lambda, m, rho.ln()).exp();
        let laplacian = 4.0 * m[i].var / (rho * rho);
        if source.max(laplacian) <= PRECISE_RESIDUAL_ABOVE {
            source - laplacian
        } else {
            precise::with_ctx(|c| self.precise_residual(c, i, lambda, rho))
        }
    }

    fn precise_residual(&self, c: &mut Ctx<'_>, i: usize, lambda: f64, rho: f64) -> f64 {
        let rho_p = c.f64(rho);
        let t = c.ln(&rho_p);
        let two_lambda = c.f64(2.0 * lambda);
        let two = c.f64(2.0);
        let mut u = c.mul(&c.mul(&two, &self.gamma_precise[i]), &t);
        let mut var = c.f64(0.0);
        for j in 0..self.rank() {
            let a_ij = self.cartan[(i, j)];
            if a_ij == 0 && j != i {
                continue;
            }
            let exps: Vec<BigFloat> = self.precise[j]
                .iter()
                .map(|p| {
                    c.add(
                        &c.add(&p.ln_q, &c.mul(&two_lambda, &p.a)),
                        &c.mul(&c.mul(&two, &p.b), &t),
                    )
                })
                .collect();
            let f64_exps: Vec<f64> = exps.iter().map(|e| c.to_f64(e)).collect();
            let top = f64_exps
                .iter()
                .copied()
                .enumerate()
                .fold(
                    (0, f64::NEG_INFINITY),
                    |acc, (k, e)| if e > acc.1 { (k, e) } else { acc },
                )
                .0;
            let max = exps[top].clone();
            let weights: Vec<Option<BigFloat>> = exps
                .iter()
                .zip(&f64_exps)
                .map(|(e, ef)| {
                    (ef - f64_exps[top] >= PRECISE_CUTOFF).then(|| c.exp(&c.sub(e, &max)))
                })
                .collect();
            let mut total = c.f64(0.0);
            for w in weights.iter().flatten() {
                total = c.add(&total, w);
            }
            let log_total = c.ln(&total);
            let lse = c.add(&max, &log_total);
            u = c.sub(&u, &c.mul(&c.f64(a_ij as f64), &lse));
            if j == i {
                let terms = &self.precise[j];
                for k in 0..terms.len() {
                    for l in k + 1..terms.len() {
                        if let (Some(wk), Some(wl)) = (&weights[k], &weights[l]) {
                            let d = c.sub(&terms[k].b, &terms[l].b);
                            var = c.add(&var, &c.mul(&c.mul(wk, wl), &c.mul(&d, &d)));
                        }
                    }
                }
                var = c.div(&var, &c.mul(&total, &total));
            }
        }
        let four = c.f64(4.0);
        let exp_u = c.exp(&u);
        let source = c.mul(&four, &exp_u);
        let laplacian = c.div(&c.mul(&four, &var), &c.mul(&rho_p, &rho_p));
        let residual = c.sub(&source, &laplacian);
        c.to_f64(&residual)
    }

    /// All components at one point.
    pub fn evaluate(&self, lambda: f64, rho: f64) -> Result<PointValues> {
        self.check(0, rho)?;
        let t = rho.ln();
        let m = self.all_moments(lambda, t);
        let n = self.rank();
        let mut out = PointValues {
            big_u: vec![],
            u: vec![],
            du: vec![],
            d2u: vec![],
            residual: vec![],
        };
        for i in 0..n {
            let slope = 2.0 * self.gamma_upper[i] - 2.0 * m[i].mean;
            let u = self.u_from(i, lambda, &m, t);
            out.big_u.push(2.0 * self.gamma_upper[i] * t - m[i].lse);
            out.u.push(u);
            out.du.push(slope / rho);
            out.d2u.push((-slope - 4.0 * m[i].var) / (rho * rho));
            out.residual.push(self.residual_from(i, lambda, rho, &m));
        }
        Ok(out)
    }

    /// `gamma^i - (r/2) U_i'(r)`, i.e. `(1/pi) int_{B_r} e^{u_i}`; equals the
    /// softmax mean of `b` at `r`.
    pub fn green_mass(&self, i: usize, lambda: f64, r: f64) -> Result<f64> {
        self.check(i, r)?;
        Ok(moments(&self.terms[i], lambda, r.ln()).mean)
    }

    /// Same as [`SolutionFamily::green_mass`] with the radius given as `log r`.
    pub fn green_mass_log(&self, i: usize, lambda: f64, log_r: f64) -> Result<f64> {
        if i >= self.rank() {
            return Err(Error::IndexOutOfRange {
                index: i,
                rank: self.rank(),
            });
        }
        Ok(moments(&self.terms[i], lambda, log_r).mean)
    }

    /// `u_i` at `rho = e^t`, for quadrature in `t`.
    pub fn small_u_log(&self, i: usize, lambda: f64, t: f64) -> f64 {
        self.u_from(i, lambda, &self.all_moments(lambda, t), t)
    }

    /// Whether the term dominating component `i` at radius `r` is one with
    /// maximal `a_beta`, i.e. the sum is already in its large-`lambda`
    /// regime at `r`. Below that regime the Green estimate can sit on a
    /// plateau that does not move with `lambda`.
    pub fn lambda_regime_reached(&self, i: usize, lambda: f64, r: f64) -> Result<bool> {
        self.check(i, r)?;
        let comp = &self.terms[i];
        let t = r.ln();
        let exps: Vec<f64> = comp
            .iter()
            .map(|x| x.q.ln() + 2.0 * lambda * x.a + 2.0 * x.b * t)
            .collect();
        let top = exps
            .iter()
            .copied()
            .enumerate()
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, (k, e)| if e > acc.1 { (k, e) } else { acc },
            )
            .0;
        let max_a = comp.iter().map(|x| x.a).fold(f64::NEG_INFINITY, f64::max);
        Ok(comp[top].a >= max_a - 1e-12 * max_a.abs().max(1.0))
    }

    /// Values of `t = log rho` where two terms of some component exchange
    /// dominance.
    pub fn crossovers(&self, lambda: f64) -> Vec<f64> {
        let mut out = Vec::new();
        for comp in &self.terms {
            for (k, x) in comp.iter().enumerate() {
                for y in &comp[k + 1..] {
                    if x.b != y.b {
                        let lhs = x.q.ln() + 2.0 * lambda * x.a;
                        let rhs = y.q.ln() + 2.0 * lambda * y.a;
                        out.push((lhs - rhs) / (2.0 * (y.b - x.b)));
                    }
                }
            }
        }
        out.retain(|t| t.is_finite());
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    /// `u_i(0)`; finite only when `gamma_i = 0`, where it equals
    /// `-2 lambda <alpha_i, H>`.
    pub fn center_value(&self, i: usize, lambda: f64) -> Option<f64> {
        (i < self.rank() && self.gamma[i] == 0.0).then(|| -2.0 * lambda * self.alpha_h[i])
    }

    /// Per component, the `lambda` slope of the rescaled profile:
    /// `gamma_i h + h - sum_j a_ij M_j` with `h = <alpha_1, H>` and
    /// `M_j = max_beta (a_beta + b_beta h)`. A negative slope means the
    /// rescaled component tends to minus infinity.
    pub fn blowup_slopes(&self) -> Vec<f64> {
        let h1 = self.alpha_h[0];
        let peaks = self.blowup_peaks();
        (0..self.rank())
            .map(|i| {
                let coupling: f64 = (0..self.rank())
                    .map(|j| self.cartan[(i, j)] as f64 * peaks[j])
                    .sum();
                self.gamma[i] * h1 + h1 - coupling
            })
            .collect()
    }

    fn blowup_peaks(&self) -> Vec<f64> {
        let h1 = self.alpha_h[0];
        self.terms
            .iter()
            .map(|c| {
                c.iter()
                    .map(|t| t.a + t.b * h1)
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect()
    }

    /// Rescaled profiles `u_i(e^{-u_1(0)/2} |z|) - u_1(0)` for every
    /// component on the given radii (`|z| = 0` allowed). Requires
    /// `gamma_1 = 0` so that `u_1(0)` is finite.
    pub fn blowup_profile(&self, lambda: f64, radii: &[f64]) -> Result<Vec<Vec<f64>>> {
        let parts = self.blowup_parts(lambda, radii)?;
        Ok(parts
            .base
            .iter()
            .zip(&parts.deviation)
            .zip(&parts.slopes)
            .map(|((base, dev), slope)| {
                base.iter()
                    .zip(dev)
                    .map(|(b, d)| b + 2.0 * lambda * slope + d)
                    .collect()
            })
            .collect())
    }

    /// The rescaled profile split as `base_i + 2 lambda slope_i + deviation_i`.
    /// `base` is independent of `lambda`; the deviation collects the terms
    /// outside the peak group and tends to zero as `lambda` grows. It is
    /// evaluated through `ln(1 + x)`, so it keeps full relative accuracy
    /// long after it drops below the resolution of the profile itself.
    pub fn blowup_parts(&self, lambda: f64, radii: &[f64]) -> Result<BlowupParts> {
        if self.gamma[0] != 0.0 {
            return Err(Error::Invalid(
                "rescaling center u_1(0) is infinite unless gamma_1 = 0".into(),
            ));
        }
        if let Some(bad) = radii.iter().find(|r| !(**r >= 0.0) || !r.is_finite()) {
            return Err(Error::NonPositiveRadius(*bad));
        }
        let h1 = self.alpha_h[0];
        let peaks = self.blowup_peaks();
        let n = self.rank();
        let mut base = vec![Vec::with_capacity(radii.len()); n];
        let mut deviation = vec![Vec::with_capacity(radii.len()); n];
        for &radius in radii {
            let log_z = radius.ln();
            let mut log_peak = Vec::with_capacity(n);
            let mut log_ratio = Vec::with_capacity(n);
            for ((comp, group), peak) in self.terms.iter().zip(&self.peak_group).zip(&peaks) {
                let mut inside = Vec::new();
                let mut outside = Vec::new();
                for (t, &in_peak) in comp.iter().zip(group) {
                    let radial = if t.b == 0.0 { 0.0 } else { 2.0 * t.b * log_z };
                    if in_peak {
                        inside.push(t.q.ln() + radial);
                    } else {
                        outside.push(t.q.ln() + 2.0 * lambda * (t.a + t.b * h1 - peak) + radial);
                    }
                }
                let p = log_sum_exp(&inside);
                log_peak.push(p);
                log_ratio.push(log_sum_exp(&outside) - p);
            }
            for i in 0..n {
                let radial = if self.gamma[i] == 0.0 {
                    0.0
                } else {
                    2.0 * self.gamma[i] * log_z
                };
                let coupled = (0..n).filter(|&j| self.cartan[(i, j)] != 0);
                base[i].push(
                    radial
                        - f64::sum_all(
                            coupled
                                .clone()
                                .map(|j| self.cartan[(i, j)] as f64 * log_peak[j]),
                        ),
                );
                deviation[i].push(-f64::sum_all(
                    coupled.map(|j| self.cartan[(i, j)] as f64 * softplus(log_ratio[j])),
                ));
            }
        }
        Ok(BlowupParts {
            slopes: self.blowup_slopes(),
            base,
            deviation,
        })
    }

    /// CSV dump of `U`, `u` and residuals on a radial grid for each lambda.
    pub fn profile_csv(&self, lambdas: &[f64], radii: &[f64]) -> Result<String> {
        let n = self.rank();
        let mut s = String::new();
        let join = |v: &[f64]| {
            v.iter()
                .map(|x| format_real(*x))
                .collect::<Vec<_>>()
                .join(" ")
        };
        writeln!(s, "# type={}", self.lie_type).unwrap();
        writeln!(s, "# gamma={}", join(&self.gamma)).unwrap();
        if let Some(w) = &self.tau {
            writeln!(s, "# tau={}", word_string(w)).unwrap();
        }
        writeln!(s, "# H={}", join(&self.h)).unwrap();
        if !self.regular {
            writeln!(s, "# non-regular: H lies on a chamber wall").unwrap();
        }
        let mut header = vec!["lambda".to_string(), "rho".to_string()];
        for prefix in ["U", "u", "residual"] {
            header.extend((1..=n).map(|i| format!("{prefix}_{i}")));
        }
        writeln!(s, "{}", header.join(",")).unwrap();
        for &lambda in lambdas {
            for &rho in radii {
                let p = self.evaluate(lambda, rho)?;
                let mut row = vec![format_real(lambda), format_real(rho)];
                for v in [&p.big_u, &p.u, &p.residual] {
                    row.extend(v.iter().map(|x| format_real(*x)));
                }
                writeln!(s, "{}", row.join(",")).unwrap();
            }
        }
        Ok(s)
    }
}

/// Pieces of a rescaled blowup profile; see [`SolutionFamily::blowup_parts`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlowupParts {
    pub slopes: Vec<f64>,
    /// `base[i][r]`
    pub base: Vec<Vec<f64>>,
    pub deviation: Vec<Vec<f64>>,
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + f64::sum_all(xs.iter().map(|x| (x - max).exp())).ln()
}

/// `ln(1 + e^x)`.
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// `n` radii spaced evenly in `log rho` between `lo` and `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp())
        .collect()
}
