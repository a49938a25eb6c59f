//! The four subcommands. Each builds a serializable payload and renders it
//! as JSON or CSV; `run` handles output and the verification verdict.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use toda_core::kostant::{phi_expand, ExpansionDump, PhiExpansion};
use toda_core::mass::{default_schedule, verify_element, MassReport, VerifySettings};
use toda_core::rep::weight_key;
use toda_core::scalar::format_real;
use toda_core::solution::{log_grid, PointValues, SolutionFamily};
use toda_core::weyl::{chamber_point, enumerate, mass_root_coords, mass_vector, DEFAULT_GROUP_CAP};
use toda_core::{weyl_dim, CartanData, ExactGamma, FundamentalRep, Rational, Scalar, WeylElement};

use crate::config::{Format, RunConfig, TauSelector};
use crate::error::{CliError, CliResult};
use crate::output::{emit, json_document, load_rep, Header};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Atlas,
    Verify,
    Profile,
    RepInfo,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Atlas => "atlas",
            Command::Verify => "verify",
            Command::Profile => "profile",
            Command::RepInfo => "rep-info",
        }
    }
}

/// Everything derived from the type and gamma that every command shares.
pub struct Setup {
    pub cartan: CartanData,
    pub gamma: ExactGamma,
    pub reps: Vec<FundamentalRep>,
    pub expansions: Vec<PhiExpansion<Rational>>,
}

impl Setup {
    pub fn new(cfg: &RunConfig) -> CliResult<Self> {
        let cartan = cfg.cartan()?;
        let gamma = cfg.gamma()?;
        let reps = (0..cartan.rank())
            .into_par_iter()
            .map(|i| load_rep(&cartan, i, cfg.cache_dir.as_deref()))
            .collect::<CliResult<Vec<_>>>()?;
        let expansions = reps
            .par_iter()
            .map(|r| phi_expand(r, &gamma))
            .collect::<toda_core::Result<Vec<_>>>()?;
        Ok(Setup {
            cartan,
            gamma,
            reps,
            expansions,
        })
    }

    fn selected(&self, tau: &TauSelector) -> CliResult<(Vec<WeylElement>, Option<usize>)> {
        let group = enumerate(&self.cartan, DEFAULT_GROUP_CAP)?;
        match tau {
            TauSelector::All => Ok((group.elements().to_vec(), Some(group.longest_index()))),
            TauSelector::Word(w) => {
                let element = WeylElement::parse(&self.cartan, w)?;
                let longest = (&element == group.longest()).then_some(0);
                Ok((vec![element], longest))
            }
        }
    }
}

fn render<T: Scalar>(v: &[T]) -> Vec<String> {
    v.iter().map(Scalar::render).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LieHeader {
    #[serde(rename = "type")]
    pub lie_type: String,
    pub rank: usize,
    pub cartan: Vec<Vec<i64>>,
    pub inverse_cartan: Vec<Vec<String>>,
    pub positive_roots: Vec<Vec<i64>>,
    pub weyl_order: usize,
    pub gamma: Vec<String>,
    pub mu: Vec<String>,
    pub gamma_upper: Vec<String>,
    /// `w0` in coroot coordinates.
    pub w0: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AtlasEntry {
    pub word: Vec<usize>,
    pub word_string: String,
    pub length: usize,
    pub longest: bool,
    /// Action on fundamental-weight coordinates.
    pub action: Vec<Vec<i64>>,
    pub mass_vector: Vec<String>,
    /// Row `i`: simple-root coordinates of `omega_i - tau omega_i`.
    pub mass_root_coords: Vec<Vec<i64>>,
    pub q_tau_omega: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Atlas {
    pub lie: LieHeader,
    pub elements: Vec<AtlasEntry>,
}

pub fn atlas(cfg: &RunConfig) -> CliResult<Atlas> {
    let setup = Setup::new(cfg)?;
    let cartan = &setup.cartan;
    let group = enumerate(cartan, DEFAULT_GROUP_CAP)?;
    let w0 = cartan.w0_from_gammas(&setup.gamma)?;
    let json = cartan.to_json();
    let lie = LieHeader {
        lie_type: cartan.lie_type().to_string(),
        rank: cartan.rank(),
        cartan: json.cartan,
        inverse_cartan: json.inverse_cartan,
        positive_roots: json.positive_roots,
        weyl_order: group.len(),
        gamma: render(setup.gamma.gammas()),
        mu: render(&setup.gamma.mu()),
        gamma_upper: render(&cartan.gamma_upper(&setup.gamma)?),
        w0: render(w0.coords()),
    };
    let longest = group.longest();
    let mut elements = group
        .elements()
        .par_iter()
        .map(|tau| -> CliResult<AtlasEntry> {
            let q = setup
                .expansions
                .iter()
                .map(|e| e.extremal_q(cartan, tau))
                .collect::<toda_core::Result<Vec<_>>>()?;
            Ok(AtlasEntry {
                word: tau.word_one_based(),
                word_string: tau.word_string(),
                length: tau.word_len(),
                longest: tau == longest,
                action: tau.action().to_rows(),
                mass_vector: render(&mass_vector(cartan, tau, &w0)?),
                mass_root_coords: mass_root_coords(cartan, tau)?.to_rows(),
                q_tau_omega: render(&q),
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    elements.sort_by(|a, b| (a.length, &a.word).cmp(&(b.length, &b.word)));
    Ok(Atlas { lie, elements })
}

fn atlas_csv(a: &Atlas) -> String {
    let n = a.lie.rank;
    let mut cols = vec!["word".to_string(), "length".to_string()];
    cols.extend((1..=n).map(|i| format!("mass_{i}")));
    cols.extend((1..=n).map(|i| format!("q_{i}")));
    let mut s = cols.join(",") + "\n";
    for e in &a.elements {
        let mut row = vec![e.word_string.clone(), e.length.to_string()];
        row.extend(e.mass_vector.iter().cloned());
        row.extend(e.q_tau_omega.iter().cloned());
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

pub fn verify_settings(cfg: &RunConfig) -> VerifySettings {
    VerifySettings {
        schedule: cfg.lambdas(&default_schedule()),
        radius: cfg.radius,
        tol: cfg.tol,
        corrupt_q: cfg.corrupt_q,
        ..VerifySettings::default()
    }
}

pub fn verify(cfg: &RunConfig) -> CliResult<MassReport> {
    let setup = Setup::new(cfg)?;
    let (elements, longest) = setup.selected(&cfg.tau)?;
    let settings = verify_settings(cfg);
    let reports = elements
        .par_iter()
        .enumerate()
        .map(|(k, tau)| {
            verify_element(
                &setup.cartan,
                &setup.reps,
                &setup.expansions,
                &setup.gamma,
                tau,
                &cfg.chamber,
                longest == Some(k),
                &settings,
            )
        })
        .collect::<toda_core::Result<Vec<_>>>()?;
    Ok(MassReport::new(
        &setup.cartan,
        &setup.gamma,
        &cfg.chamber,
        settings,
        reports,
    ))
}

fn verify_csv(r: &MassReport) -> String {
    let mut s = String::from(
        "word,length,i,exact,green,green_abs_error,quadrature,quadrature_abs_error,lambda,k,converged,matched\n",
    );
    for e in &r.elements {
        for c in &e.components {
            writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                e.word_string,
                e.length,
                c.i,
                c.exact,
                format_real(c.green),
                format_real(c.green_abs_error),
                format_real(c.quadrature),
                format_real(c.quadrature_abs_error),
                format_real(c.lambda),
                format_real((2.0 * c.lambda).exp()),
                c.converged,
                c.matched
            )
            .unwrap();
        }
    }
    s
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProfileRow {
    pub lambda: f64,
    pub k: f64,
    pub rho: f64,
    #[serde(flatten)]
    pub values: PointValues,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlowupBlock {
    pub lambda: f64,
    pub k: f64,
    pub radii: Vec<f64>,
    /// `profiles[i][r]`: rescaled component `i + 1` at `radii[r]`.
    pub profiles: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Profile {
    #[serde(rename = "type")]
    pub lie_type: String,
    pub gamma: Vec<String>,
    pub tau: String,
    pub h: Vec<f64>,
    pub regular: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<ProfileRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub blowup: Vec<BlowupBlock>,
    /// Slopes in `lambda` of the rescaled components; negative means `-inf`.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub blowup_slopes: Vec<f64>,
}

fn profile_family(cfg: &RunConfig, setup: &Setup) -> CliResult<(SolutionFamily, WeylElement)> {
    let TauSelector::Word(word) = &cfg.tau else {
        return Err(CliError::Invalid(
            "profile needs a single --tau word (use `id` for the identity)".into(),
        ));
    };
    let tau = WeylElement::parse(&setup.cartan, word)?;
    let h = chamber_point(&setup.cartan, &tau, &cfg.chamber)?;
    let mut fam = SolutionFamily::from_expansions(
        &setup.cartan,
        &setup.reps,
        &setup.expansions,
        &setup.gamma,
        &h,
        Some(&tau),
    )?;
    if let Some(f) = cfg.corrupt_q {
        fam = fam.with_scaled_q(f);
    }
    Ok((fam, tau))
}

fn default_blowup_radii() -> Vec<f64> {
    (0..9).map(|j| j as f64 * 0.25).collect()
}

pub fn profile(cfg: &RunConfig) -> CliResult<Profile> {
    let setup = Setup::new(cfg)?;
    let (fam, tau) = profile_family(cfg, &setup)?;
    let lambdas = cfg.lambdas(&[0.0, 1.0, 5.0]);
    let mut out = Profile {
        lie_type: setup.cartan.lie_type().to_string(),
        gamma: render(setup.gamma.gammas()),
        tau: tau.word_string(),
        h: fam.h().to_vec(),
        regular: fam.is_regular(),
        rows: Vec::new(),
        blowup: Vec::new(),
        blowup_slopes: Vec::new(),
    };
    if cfg.blowup {
        let radii = cfg.radii.clone().unwrap_or_else(default_blowup_radii);
        out.blowup = lambdas
            .iter()
            .map(|&lambda| {
                Ok(BlowupBlock {
                    lambda,
                    k: (2.0 * lambda).exp(),
                    radii: radii.clone(),
                    profiles: fam.blowup_profile(lambda, &radii)?,
                })
            })
            .collect::<toda_core::Result<Vec<_>>>()?;
        out.blowup_slopes = fam.blowup_slopes();
    } else {
        let radii = cfg
            .radii
            .clone()
            .unwrap_or_else(|| log_grid(cfg.rho_min, cfg.rho_max, cfg.points));
        let grid: Vec<(f64, f64)> = lambdas
            .iter()
            .flat_map(|&l| radii.iter().map(move |&r| (l, r)))
            .collect();
        out.rows = grid
            .par_iter()
            .map(|&(lambda, rho)| {
                Ok(ProfileRow {
                    lambda,
                    k: (2.0 * lambda).exp(),
                    rho,
                    values: fam.evaluate(lambda, rho)?,
                })
            })
            .collect::<toda_core::Result<Vec<_>>>()?;
    }
    Ok(out)
}

fn profile_csv(p: &Profile, n: usize) -> String {
    let mut s = format!(
        "# type={}\n# gamma={}\n# tau={}\n",
        p.lie_type,
        p.gamma.join(" "),
        p.tau
    );
    writeln!(
        s,
        "# H={}",
        p.h.iter()
            .map(|x| format_real(*x))
            .collect::<Vec<_>>()
            .join(" ")
    )
    .unwrap();
    if !p.regular {
        s.push_str("# non-regular: H lies on a chamber wall\n");
    }
    if !p.blowup.is_empty() {
        s.push_str("# rescaled by u_1(0)\n");
        let mut cols = vec!["lambda".to_string(), "k".to_string(), "z".to_string()];
        cols.extend((1..=n).map(|i| format!("rescaled_{i}")));
        s.push_str(&(cols.join(",") + "\n"));
        for b in &p.blowup {
            for (r, z) in b.radii.iter().enumerate() {
                let mut row = vec![format_real(b.lambda), format_real(b.k), format_real(*z)];
                row.extend(b.profiles.iter().map(|c| format_real(c[r])));
                s.push_str(&(row.join(",") + "\n"));
            }
        }
        return s;
    }
    let mut cols = vec!["lambda".to_string(), "k".to_string(), "rho".to_string()];
    for prefix in ["U", "u", "residual"] {
        cols.extend((1..=n).map(|i| format!("{prefix}_{i}")));
    }
    s.push_str(&(cols.join(",") + "\n"));
    for r in &p.rows {
        let mut row = vec![format_real(r.lambda), format_real(r.k), format_real(r.rho)];
        for v in [&r.values.big_u, &r.values.u, &r.values.residual] {
            row.extend(v.iter().map(|x| format_real(*x)));
        }
        s.push_str(&(row.join(",") + "\n"));
    }
    s
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightInfo {
    pub beta_omega_coords: Vec<i64>,
    /// Simple-root coordinates of `omega_i - beta`.
    pub depth: Vec<i64>,
    pub multiplicity: usize,
    pub gram_determinant: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RepSummary {
    pub i: usize,
    pub dim: usize,
    pub weyl_dim: u64,
    pub relations_ok: bool,
    pub weights: Vec<WeightInfo>,
    pub phi: ExpansionDump,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RepInfo {
    #[serde(rename = "type")]
    pub lie_type: String,
    pub gamma: Vec<String>,
    pub representations: Vec<RepSummary>,
}

pub fn rep_info(cfg: &RunConfig) -> CliResult<RepInfo> {
    let setup = Setup::new(cfg)?;
    let n = setup.cartan.rank();
    let representations = setup
        .reps
        .iter()
        .zip(&setup.expansions)
        .map(|(rep, exp)| -> CliResult<RepSummary> {
            let mut highest = vec![0i64; n];
            highest[rep.index()] = 1;
            let dets = rep.gram_determinants();
            Ok(RepSummary {
                i: rep.index() + 1,
                dim: rep.dim(),
                weyl_dim: weyl_dim(&setup.cartan, &highest)?,
                relations_ok: rep.check_relations().is_ok(),
                weights: rep
                    .blocks()
                    .iter()
                    .zip(dets)
                    .map(|(b, d)| WeightInfo {
                        beta_omega_coords: b.omega_coords.clone(),
                        depth: b.depth.clone(),
                        multiplicity: b.dim,
                        gram_determinant: d.render(),
                    })
                    .collect(),
                phi: exp.to_dump(),
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(RepInfo {
        lie_type: setup.cartan.lie_type().to_string(),
        gamma: render(setup.gamma.gammas()),
        representations,
    })
}

fn rep_info_csv(r: &RepInfo) -> String {
    let mut s = String::from("i,dim,weyl_dim,weight,depth,multiplicity,gram_determinant\n");
    for rep in &r.representations {
        for w in &rep.weights {
            writeln!(
                s,
                "{},{},{},{},{},{},{}",
                rep.i,
                rep.dim,
                rep.weyl_dim,
                weight_key(&w.beta_omega_coords).replace(',', " "),
                weight_key(&w.depth).replace(',', " "),
                w.multiplicity,
                w.gram_determinant
            )
            .unwrap();
        }
    }
    s
}

fn document<P: Serialize>(
    cfg: &RunConfig,
    command: Command,
    payload: &P,
    csv: impl FnOnce(&P) -> String,
) -> CliResult<String> {
    let header = Header::new(command.name(), cfg.reproducible);
    match cfg.format {
        Format::Json => json_document(&header, payload),
        Format::Csv => Ok(header.csv_lines() + &csv(payload)),
    }
}

/// Runs a command and writes its output. Verification failures come back
/// as [`CliError::Verification`] after the report has been written.
pub fn run(command: Command, cfg: &RunConfig) -> CliResult<()> {
    let out = cfg.out.as_deref();
    match command {
        Command::Atlas => emit(out, &document(cfg, command, &atlas(cfg)?, atlas_csv)?),
        Command::Verify => {
            let report = verify(cfg)?;
            emit(out, &document(cfg, command, &report, verify_csv)?)?;
            if report.all_matched {
                Ok(())
            } else {
                let failed: Vec<&str> = report
                    .elements
                    .iter()
                    .filter(|e| !e.matched)
                    .map(|e| e.word_string.as_str())
                    .collect();
                Err(CliError::Verification(format!(
                    "{} element(s) did not match: {}",
                    failed.len(),
                    failed.join("; ")
                )))
            }
        }
        Command::Profile => {
            let p = profile(cfg)?;
            let n = cfg.lie_type.rank();
            emit(out, &document(cfg, command, &p, |p| profile_csv(p, n))?)
        }
        Command::RepInfo => emit(out, &document(cfg, command, &rep_info(cfg)?, rep_info_csv)?),
    }
}
