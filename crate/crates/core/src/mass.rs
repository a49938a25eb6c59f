//! Numerical local and global masses, compared against the exact
//! `sigma_i = <omega_i - tau omega_i, w0>`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kostant::PhiExpansion;
use crate::lie::{CartanData, GammaVector};
use crate::quadrature::{integrate_with_breaks, QuadResult};
use crate::rep::FundamentalRep;
use crate::scalar::Scalar;
use crate::solution::{log_grid, SolutionFamily};
use crate::weyl::{chamber_point, mass_vector, WeylElement};

pub const DEFAULT_RADIUS: f64 = 0.1;
pub const MASS_TOL: f64 = 1e-6;
pub const QUAD_TOL: f64 = 1e-9;
pub const GLOBAL_TOL: f64 = 1e-7;
pub const RESIDUAL_TOL: f64 = 1e-8;
pub const CONSISTENCY_TOL: f64 = 1e-7;
const QUAD_MAX_INTERVALS: usize = 20_000;
const GLOBAL_MAX_DOUBLINGS: usize = 20_000;

/// `lambda_j = 2^j`, `j = 0..=24`.
pub fn default_schedule() -> Vec<f64> {
    (0..=24).map(|j| 2f64.powi(j)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadMass {
    pub value: f64,
    /// Quadrature error estimate plus the size of the analytic tail.
    pub error: f64,
    /// `int_0^{rho_min}` contribution, added to `value`.
    pub tail: f64,
    pub intervals: usize,
    pub converged: bool,
}

/// `(1/pi) int_{B_r} e^{u_i} = 2 int_{-inf}^{log r} e^{u_i(e^t) + 2t} dt`.
///
/// The integral starts below every dominance crossover of the family, where
/// `e^{u_i} rho^2` is a pure power `rho^{2 gamma_i + 2}`; the part below that
/// is added in closed form.
pub fn local_mass_quad(fam: &SolutionFamily, i: usize, lambda: f64, r: f64) -> Result<QuadMass> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::NonPositiveRadius(r));
    }
    if i >= fam.rank() {
        return Err(Error::IndexOutOfRange {
            index: i,
            rank: fam.rank(),
        });
    }
    let t_max = r.ln();
    let crossovers = fam.crossovers(lambda);
    let first = crossovers.first().copied().unwrap_or(t_max);
    let t_min = (t_max + (1e-12f64).ln()).min(first - 40.0);
    let mut points = vec![t_min];
    points.extend(
        crossovers
            .iter()
            .copied()
            .filter(|&t| t > t_min && t < t_max),
    );
    points.push(t_max);
    let integrand = |t: f64| 2.0 * (fam.small_u_log(i, lambda, t) + 2.0 * t).exp();
    let QuadResult {
        value,
        error,
        intervals,
        converged,
    } = integrate_with_breaks(
        integrand,
        &points,
        QUAD_TOL,
        QUAD_MAX_INTERVALS + points.len(),
    );
    let tail = integrand(t_min) / (2.0 * fam.gamma()[i] + 2.0);
    Ok(QuadMass {
        value: value + tail,
        error: error + tail.abs(),
        tail,
        intervals,
        converged,
    })
}

/// `gamma^i - (r/2) U_i'(r)`.
pub fn local_mass_green(fam: &SolutionFamily, i: usize, lambda: f64, r: f64) -> Result<f64> {
    fam.green_mass(i, lambda, r)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitMass {
    pub estimate: f64,
    pub converged: bool,
    /// The `lambda` at which the estimate was taken.
    pub lambda: f64,
    /// Green estimate at `r/2` and the same `lambda`.
    pub half_radius_estimate: f64,
    /// The dominant term at `r` and `r/2` has maximal `<beta, H>`.
    pub regime_reached: bool,
    pub steps: usize,
}

/// Sweeps `lambda` along `schedule` at fixed `r` until successive Green
/// estimates differ by less than `tol`, then confirms at `r/2` and checks
/// that the sum is in its large-`lambda` regime at both radii. A failed
/// confirmation continues the sweep.
pub fn limit_mass(
    fam: &SolutionFamily,
    i: usize,
    r: f64,
    schedule: &[f64],
    tol: f64,
) -> Result<LimitMass> {
    if schedule.is_empty() {
        return Err(Error::Invalid("empty lambda schedule".into()));
    }
    let mut prev: Option<f64> = None;
    let mut last = LimitMass {
        estimate: f64::NAN,
        converged: false,
        lambda: f64::NAN,
        half_radius_estimate: f64::NAN,
        regime_reached: false,
        steps: 0,
    };
    for (step, &lambda) in schedule.iter().enumerate() {
        let g = local_mass_green(fam, i, lambda, r)?;
        let regime = fam.lambda_regime_reached(i, lambda, r)?
            && fam.lambda_regime_reached(i, lambda, r / 2.0)?;
        last = LimitMass {
            estimate: g,
            converged: false,
            lambda,
            half_radius_estimate: f64::NAN,
            regime_reached: regime,
            steps: step + 1,
        };
        if let Some(p) = prev {
            if (g - p).abs() < tol && regime {
                let half = local_mass_green(fam, i, lambda, r / 2.0)?;
                last.half_radius_estimate = half;
                if (half - g).abs() < tol {
                    last.converged = true;
                    return Ok(last);
                }
            }
        }
        prev = Some(g);
    }
    Ok(last)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GlobalMass {
    pub value: f64,
    pub converged: bool,
    pub log_radius: f64,
}

/// Green estimate at a radius doubled until successive values differ by
/// less than `tol`. Radii are handled through `log R`, starting beyond the
/// last dominance crossover.
pub fn global_mass(fam: &SolutionFamily, i: usize, lambda: f64, tol: f64) -> Result<GlobalMass> {
    let start = fam
        .crossovers(lambda)
        .last()
        .copied()
        .unwrap_or(0.0)
        .max(0.0);
    let mut t = start;
    let mut g = fam.green_mass_log(i, lambda, t)?;
    for _ in 0..GLOBAL_MAX_DOUBLINGS {
        t += std::f64::consts::LN_2;
        let next = fam.green_mass_log(i, lambda, t)?;
        if (next - g).abs() < tol {
            return Ok(GlobalMass {
                value: next,
                converged: true,
                log_radius: t,
            });
        }
        g = next;
    }
    Ok(GlobalMass {
        value: g,
        converged: false,
        log_radius: t,
    })
}

/// Knobs of a verification run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifySettings {
    pub schedule: Vec<f64>,
    pub radius: f64,
    pub tol: f64,
    pub residual_tol: f64,
    pub residual_lambdas: Vec<f64>,
    pub residual_points: usize,
    pub global_lambdas: Vec<f64>,
    /// Negative control: multiply the non-leading `q` by this factor.
    pub corrupt_q: Option<f64>,
}

impl Default for VerifySettings {
    fn default() -> Self {
        VerifySettings {
            schedule: default_schedule(),
            radius: DEFAULT_RADIUS,
            tol: MASS_TOL,
            residual_tol: RESIDUAL_TOL,
            residual_lambdas: vec![0.0, 1.0, 5.0],
            residual_points: 25,
            global_lambdas: vec![0.5, 1.0, 5.0],
            corrupt_q: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentMass {
    /// 1-based.
    pub i: usize,
    pub exact: String,
    pub exact_value: f64,
    pub green: f64,
    pub green_abs_error: f64,
    pub quadrature: f64,
    pub quadrature_error_estimate: f64,
    pub quadrature_abs_error: f64,
    pub converged: bool,
    pub lambda: f64,
    pub radius: f64,
    pub matched: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GlobalCheck {
    /// 1-based.
    pub i: usize,
    pub exact: String,
    pub values: Vec<f64>,
    pub spread: f64,
    pub converged: bool,
    pub matched: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ElementReport {
    pub word: Vec<usize>,
    pub word_string: String,
    pub length: usize,
    pub h: Vec<f64>,
    pub regular: bool,
    pub components: Vec<ComponentMass>,
    pub max_residual: f64,
    pub residual_ok: bool,
    pub global: Vec<GlobalCheck>,
    pub matched: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MassReport {
    #[serde(rename = "type")]
    pub lie_type: String,
    pub gamma: Vec<String>,
    pub chamber: Vec<String>,
    pub settings: VerifySettings,
    /// Convention note: the rescaling center and the chamber representative.
    pub conventions: Vec<String>,
    pub elements: Vec<ElementReport>,
    pub all_matched: bool,
}

impl MassReport {
    pub fn new<T: Scalar>(
        cartan: &CartanData,
        gamma: &GammaVector<T>,
        chamber: &[T],
        settings: VerifySettings,
        mut elements: Vec<ElementReport>,
    ) -> Self {
        elements.sort_by(|a, b| (a.length, &a.word).cmp(&(b.length, &b.word)));
        let all_matched = elements.iter().all(|e| e.matched);
        MassReport {
            lie_type: cartan.lie_type().to_string(),
            gamma: gamma.gammas().iter().map(Scalar::render).collect(),
            chamber: chamber.iter().map(Scalar::render).collect(),
            settings,
            conventions: vec![
                "H = tau(sum_i c_i E_i) with the given chamber coefficients c".into(),
                "limit masses: lambda swept first at fixed r, confirmed at r/2".into(),
            ],
            elements,
            all_matched,
        }
    }
}

/// Runs the full check for one Weyl element: limit masses for every
/// component, quadrature cross-check, PDE residuals and, for the longest
/// element, global masses.
#[allow(clippy::too_many_arguments)]
pub fn verify_element<T: Scalar>(
    cartan: &CartanData,
    reps: &[FundamentalRep],
    expansions: &[PhiExpansion<T>],
    gamma: &GammaVector<T>,
    tau: &WeylElement,
    chamber: &[T],
    is_longest: bool,
    settings: &VerifySettings,
) -> Result<ElementReport> {
    let h = chamber_point(cartan, tau, chamber)?;
    let mut fam = SolutionFamily::from_expansions(cartan, reps, expansions, gamma, &h, Some(tau))?;
    if let Some(factor) = settings.corrupt_q {
        fam = fam.with_scaled_q(factor);
    }
    let w0 = cartan.w0_from_gammas(gamma)?;
    let exact = mass_vector(cartan, tau, &w0)?;
    let n = cartan.rank();
    let mut components = Vec::with_capacity(n);
    for (i, sigma) in exact.iter().enumerate() {
        let limit = limit_mass(&fam, i, settings.radius, &settings.schedule, settings.tol)?;
        let quad = local_mass_quad(&fam, i, limit.lambda, settings.radius)?;
        let exact_value = sigma.to_f64();
        let green_abs_error = (limit.estimate - exact_value).abs();
        let quadrature_abs_error = (quad.value - limit.estimate).abs();
        components.push(ComponentMass {
            i: i + 1,
            exact: sigma.render(),
            exact_value,
            green: limit.estimate,
            green_abs_error,
            quadrature: quad.value,
            quadrature_error_estimate: quad.error,
            quadrature_abs_error,
            converged: limit.converged,
            lambda: limit.lambda,
            radius: settings.radius,
            matched: limit.converged
                && green_abs_error <= settings.tol
                && quadrature_abs_error <= CONSISTENCY_TOL,
        });
    }
    let mut max_residual: f64 = 0.0;
    for &lambda in &settings.residual_lambdas {
        for rho in log_grid(1e-3, 1e3, settings.residual_points) {
            let p = fam.evaluate(lambda, rho)?;
            max_residual = p.residual.iter().fold(max_residual, |m, r| {
                if r.is_nan() {
                    f64::INFINITY
                } else {
                    m.max(r.abs())
                }
            });
        }
    }
    let residual_ok = max_residual <= settings.residual_tol;
    let mut global = Vec::new();
    if is_longest {
        for (i, sigma) in exact.iter().enumerate() {
            let runs = settings
                .global_lambdas
                .iter()
                .map(|&l| global_mass(&fam, i, l, GLOBAL_TOL))
                .collect::<Result<Vec<_>>>()?;
            let values: Vec<f64> = runs.iter().map(|g| g.value).collect();
            let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
            let converged = runs.iter().all(|g| g.converged);
            let matched = converged
                && values
                    .iter()
                    .all(|v| (v - sigma.to_f64()).abs() <= settings.tol);
            global.push(GlobalCheck {
                i: i + 1,
                exact: sigma.render(),
                values,
                spread: hi - lo,
                converged,
                matched,
            });
        }
    }
    let matched =
        components.iter().all(|c| c.matched) && residual_ok && global.iter().all(|g| g.matched);
    Ok(ElementReport {
        word: tau.word_one_based(),
        word_string: tau.word_string(),
        length: tau.word_len(),
        h: h.coords().iter().map(Scalar::to_f64).collect(),
        regular: fam.is_regular(),
        components,
        max_residual,
        residual_ok,
        global,
        matched,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kostant::phi_expand;
    use crate::rep::{build_fundamental, DEFAULT_DIM_CAP};
    use crate::Rational;

    fn int(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    fn a2_family(word: &str) -> SolutionFamily {
        let cartan = CartanData::new("A2".parse().unwrap()).unwrap();
        let reps: Vec<_> = (0..2)
            .map(|i| build_fundamental(&cartan, i, DEFAULT_DIM_CAP).unwrap())
            .collect();
        let tau = WeylElement::parse(&cartan, word).unwrap();
        let h = chamber_point(&cartan, &tau, &[int(1), int(4)]).unwrap();
        SolutionFamily::build(
            &cartan,
            &reps,
            &GammaVector::<Rational>::zeros(2),
            &h,
            Some(&tau),
        )
        .unwrap()
    }

    /// `2 [F(r) - F(0)]` with the closed-form antiderivative of `e^u r`.
    fn section4_mass(k: f64, r: f64) -> f64 {
        let f = |r: f64| {
            2.0 * k.powi(4) * (-k * r * r - 2.0)
                / (4.0 * k.powi(5) * r * r + 4.0 * k.powi(4) + r.powi(4))
        };
        2.0 * (f(r) - f(0.0))
    }

    #[test]
    fn quadrature_matches_closed_form() {
        let fam = a2_family("s1");
        for &(k, r) in &[(1.0f64, 0.1f64), (100.0, 0.1), (1e4, 0.5), (10.0, 3.0)] {
            let lambda = k.ln() / 2.0;
            let q = local_mass_quad(&fam, 0, lambda, r).unwrap();
            assert!(q.converged);
            assert!((q.value - section4_mass(k, r)).abs() < 1e-9, "k={k} r={r}");
            assert!(
                (local_mass_green(&fam, 0, lambda, r).unwrap() - section4_mass(k, r)).abs() < 1e-10
            );
        }
    }

    #[test]
    fn section4_limits() {
        let fam = a2_family("s1");
        let l1 = limit_mass(&fam, 0, DEFAULT_RADIUS, &default_schedule(), MASS_TOL).unwrap();
        let l2 = limit_mass(&fam, 1, DEFAULT_RADIUS, &default_schedule(), MASS_TOL).unwrap();
        assert!(l1.converged && l2.converged);
        assert!((l1.estimate - 1.0).abs() < 1e-6);
        assert!(l2.estimate.abs() < 1e-6);
    }

    #[test]
    fn global_mass_is_kappa_value() {
        let fam = a2_family("s1");
        for lambda in [0.5, 1.0, 5.0] {
            for i in 0..2 {
                let g = global_mass(&fam, i, lambda, GLOBAL_TOL).unwrap();
                assert!(g.converged);
                assert!((g.value - 2.0).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn unconverged_schedule_is_flagged() {
        let fam = a2_family("s1");
        let l = limit_mass(&fam, 0, DEFAULT_RADIUS, &[1.0], MASS_TOL).unwrap();
        assert!(!l.converged);
        assert!(limit_mass(&fam, 0, DEFAULT_RADIUS, &[], MASS_TOL).is_err());
    }

    #[test]
    fn verify_element_reports_match_and_corruption() {
        let cartan = CartanData::new("A2".parse().unwrap()).unwrap();
        let reps: Vec<_> = (0..2)
            .map(|i| build_fundamental(&cartan, i, DEFAULT_DIM_CAP).unwrap())
            .collect();
        let gamma = GammaVector::<Rational>::zeros(2);
        let exps: Vec<_> = reps
            .iter()
            .map(|r| phi_expand(r, &gamma).unwrap())
            .collect();
        let tau = WeylElement::parse(&cartan, "s1").unwrap();
        let chamber = [int(1), int(4)];
        let settings = VerifySettings::default();
        let ok = verify_element(
            &cartan, &reps, &exps, &gamma, &tau, &chamber, false, &settings,
        )
        .unwrap();
        assert!(ok.matched, "{ok:?}");
        assert_eq!(ok.components[0].exact, "1");
        assert_eq!(ok.components[1].exact, "0");
        let bad = VerifySettings {
            corrupt_q: Some(1.5),
            ..settings
        };
        let report =
            verify_element(&cartan, &reps, &exps, &gamma, &tau, &chamber, false, &bad).unwrap();
        assert!(!report.matched);
        assert!(!report.residual_ok);
    }
}
