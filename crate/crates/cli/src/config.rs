//! Run configuration: flat `key=value` files merged with command-line flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use toda_core::scalar::parse_rational;
use toda_core::{CartanData, ExactGamma, GammaVector, LieType, Rational, WeylElement};

use crate::error::{CliError, CliResult};

/// Every key a config file or flag may set, in the order `save-config` writes them.
pub const KEYS: &[&str] = &[
    "type",
    "gammas",
    "tau",
    "chamber",
    "lambda-schedule",
    "k-values",
    "radius",
    "tol",
    "rho-min",
    "rho-max",
    "points",
    "radii",
    "blowup",
    "format",
    "out",
    "cache-dir",
    "reproducible",
    "corrupt-q",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TauSelector {
    All,
    Word(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Schedule {
    /// Command default: `2^0..2^24` for verify, `0, 1, 5` for profiles.
    Default,
    Lambdas(Vec<f64>),
    KValues(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub lie_type: LieType,
    pub gammas: Vec<Rational>,
    pub tau: TauSelector,
    pub chamber: Vec<Rational>,
    pub schedule: Schedule,
    pub radius: f64,
    pub tol: f64,
    pub rho_min: f64,
    pub rho_max: f64,
    pub points: usize,
    pub radii: Option<Vec<f64>>,
    pub blowup: bool,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    pub reproducible: bool,
    pub corrupt_q: Option<f64>,
}

/// Parses a config file: one `key=value` per line, `#` starts a comment.
pub fn parse_config_text(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Invalid(format!("config line {}: expected key=value", n + 1))
        })?;
        let key = key.trim();
        if !KEYS.contains(&key) {
            return Err(CliError::Invalid(format!(
                "config line {}: unknown key `{key}`",
                n + 1
            )));
        }
        map.insert(key.to_string(), value.trim().to_string());
    }
    Ok(map)
}

pub fn read_config_file(path: &Path) -> CliResult<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_text(&text)
}

fn list<T>(key: &str, value: &str, parse: impl Fn(&str) -> Option<T>) -> CliResult<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse(s).ok_or_else(|| CliError::Invalid(format!("{key}: cannot parse `{s}`"))))
        .collect()
}

fn real(key: &str, value: &str) -> CliResult<f64> {
    value
        .trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| CliError::Invalid(format!("{key}: expected a finite number, got `{value}`")))
}

fn positive(key: &str, v: f64) -> CliResult<f64> {
    if v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::Invalid(format!(
            "{key} must be positive, got {v}"
        )))
    }
}

fn flag(key: &str, value: &str) -> CliResult<bool> {
    match value.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(CliError::Invalid(format!(
            "{key}: expected true/false, got `{other}`"
        ))),
    }
}

fn render_reals(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

fn render_rationals(v: &[Rational]) -> String {
    v.iter()
        .map(toda_core::Scalar::render)
        .collect::<Vec<_>>()
        .join(",")
}

impl RunConfig {
    /// Validates a merged key/value map. Missing keys take their defaults.
    pub fn from_map(map: &BTreeMap<String, String>) -> CliResult<Self> {
        if let Some(key) = map.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(CliError::Invalid(format!("unknown setting `{key}`")));
        }
        let get = |k: &str| {
            map.get(k)
                .map(String::as_str)
                .filter(|v| !v.trim().is_empty())
        };
        let lie_type: LieType = get("type")
            .ok_or_else(|| CliError::Invalid("missing --type".into()))?
            .parse()
            .map_err(CliError::from)?;
        let cartan = CartanData::new(lie_type)?;
        let n = lie_type.rank();

        let gammas = match get("gammas") {
            Some(v) => list("gammas", v, parse_rational)?,
            None => vec![Rational::from_integer(0.into()); n],
        };
        if gammas.len() != n {
            return Err(CliError::Invalid(format!(
                "gammas: expected {n} values for {lie_type}, got {}",
                gammas.len()
            )));
        }
        GammaVector::new(gammas.clone())?;

        let chamber = match get("chamber") {
            Some(v) => list("chamber", v, parse_rational)?,
            None => vec![Rational::from_integer(1.into()); n],
        };
        if chamber.len() != n {
            return Err(CliError::Invalid(format!(
                "chamber: expected {n} values for {lie_type}, got {}",
                chamber.len()
            )));
        }
        if let Some(c) = chamber
            .iter()
            .find(|c| **c <= Rational::from_integer(0.into()))
        {
            return Err(CliError::Invalid(format!(
                "chamber coefficients must be positive, got {c}"
            )));
        }

        let tau = match get("tau").map(str::trim) {
            None | Some("all") => TauSelector::All,
            Some(word) => {
                WeylElement::parse(&cartan, word)?;
                TauSelector::Word(word.to_string())
            }
        };

        let lambdas = get("lambda-schedule")
            .map(str::trim)
            .filter(|v| *v != "default");
        let schedule = match (lambdas, get("k-values")) {
            (Some(_), Some(_)) => {
                return Err(CliError::Invalid(
                    "give either lambda-schedule or k-values, not both".into(),
                ))
            }
            (Some(v), None) => {
                let l = list("lambda-schedule", v, |s| {
                    s.parse::<f64>().ok().filter(|x| x.is_finite() && *x >= 0.0)
                })?;
                if l.is_empty() {
                    return Err(CliError::Invalid("lambda-schedule is empty".into()));
                }
                Schedule::Lambdas(l)
            }
            (None, Some(v)) => {
                let k = list("k-values", v, |s| {
                    s.parse::<f64>().ok().filter(|x| x.is_finite() && *x > 0.0)
                })?;
                if k.is_empty() {
                    return Err(CliError::Invalid("k-values is empty".into()));
                }
                Schedule::KValues(k)
            }
            (None, None) => Schedule::Default,
        };

        let radius = positive(
            "radius",
            get("radius").map_or(Ok(toda_core::mass::DEFAULT_RADIUS), |v| real("radius", v))?,
        )?;
        let tol = positive(
            "tol",
            get("tol").map_or(Ok(toda_core::mass::MASS_TOL), |v| real("tol", v))?,
        )?;
        let rho_min = positive(
            "rho-min",
            get("rho-min").map_or(Ok(1e-3), |v| real("rho-min", v))?,
        )?;
        let rho_max = positive(
            "rho-max",
            get("rho-max").map_or(Ok(1e3), |v| real("rho-max", v))?,
        )?;
        if rho_max < rho_min {
            return Err(CliError::Invalid(
                "rho-max must not be below rho-min".into(),
            ));
        }
        let points = match get("points") {
            Some(v) => v
                .trim()
                .parse::<usize>()
                .ok()
                .filter(|p| *p >= 1)
                .ok_or_else(|| {
                    CliError::Invalid(format!("points: expected a positive integer, got `{v}`"))
                })?,
            None => 25,
        };
        let radii = match get("radii") {
            Some(v) => {
                let r = list("radii", v, |s| {
                    s.parse::<f64>().ok().filter(|x| x.is_finite() && *x >= 0.0)
                })?;
                if r.is_empty() {
                    return Err(CliError::Invalid("radii is empty".into()));
                }
                Some(r)
            }
            None => None,
        };
        let blowup = get("blowup").map_or(Ok(false), |v| flag("blowup", v))?;
        let format = match get("format").map(str::trim) {
            None | Some("json") => Format::Json,
            Some("csv") => Format::Csv,
            Some(other) => {
                return Err(CliError::Invalid(format!(
                    "format must be json or csv, got `{other}`"
                )))
            }
        };
        let reproducible = get("reproducible").map_or(Ok(false), |v| flag("reproducible", v))?;
        let corrupt_q = match get("corrupt-q") {
            Some(v) => Some(positive("corrupt-q", real("corrupt-q", v)?)?),
            None => None,
        };
        Ok(RunConfig {
            lie_type,
            gammas,
            tau,
            chamber,
            schedule,
            radius,
            tol,
            rho_min,
            rho_max,
            points,
            radii,
            blowup,
            format,
            out: get("out").map(PathBuf::from),
            cache_dir: get("cache-dir").map(PathBuf::from),
            reproducible,
            corrupt_q,
        })
    }

    /// The effective settings as `key=value` lines; feeding them back through
    /// [`parse_config_text`] and [`RunConfig::from_map`] gives the same config.
    pub fn to_config_text(&self) -> String {
        let mut lines = vec![
            format!("type={}", self.lie_type),
            format!("gammas={}", render_rationals(&self.gammas)),
            format!(
                "tau={}",
                match &self.tau {
                    TauSelector::All => "all".to_string(),
                    TauSelector::Word(w) => w.clone(),
                }
            ),
            format!("chamber={}", render_rationals(&self.chamber)),
        ];
        match &self.schedule {
            Schedule::Default => lines.push("lambda-schedule=default".into()),
            Schedule::Lambdas(l) => lines.push(format!("lambda-schedule={}", render_reals(l))),
            Schedule::KValues(k) => lines.push(format!("k-values={}", render_reals(k))),
        }
        lines.push(format!("radius={}", self.radius));
        lines.push(format!("tol={}", self.tol));
        lines.push(format!("rho-min={}", self.rho_min));
        lines.push(format!("rho-max={}", self.rho_max));
        lines.push(format!("points={}", self.points));
        if let Some(r) = &self.radii {
            lines.push(format!("radii={}", render_reals(r)));
        }
        lines.push(format!("blowup={}", self.blowup));
        lines.push(format!(
            "format={}",
            match self.format {
                Format::Json => "json",
                Format::Csv => "csv",
            }
        ));
        if let Some(p) = &self.out {
            lines.push(format!("out={}", p.display()));
        }
        if let Some(p) = &self.cache_dir {
            lines.push(format!("cache-dir={}", p.display()));
        }
        lines.push(format!("reproducible={}", self.reproducible));
        if let Some(c) = self.corrupt_q {
            lines.push(format!("corrupt-q={c}"));
        }
        lines.join("\n") + "\n"
    }

    pub fn cartan(&self) -> CliResult<CartanData> {
        Ok(CartanData::new(self.lie_type)?)
    }

    pub fn gamma(&self) -> CliResult<ExactGamma> {
        Ok(GammaVector::new(self.gammas.clone())?)
    }

    /// The `lambda` values selected by the schedule, with `default` replaced
    /// by `fallback`.
    pub fn lambdas(&self, fallback: &[f64]) -> Vec<f64> {
        match &self.schedule {
            Schedule::Default => fallback.to_vec(),
            Schedule::Lambdas(l) => l.clone(),
            Schedule::KValues(k) => k.iter().map(|k| k.ln() / 2.0).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }

    #[test]
    fn defaults_fill_in() {
        let c = RunConfig::from_map(&map(&[("type", "A2")])).unwrap();
        assert_eq!(c.gammas.len(), 2);
        assert_eq!(c.tau, TauSelector::All);
        assert_eq!(c.schedule, Schedule::Default);
        assert_eq!(c.format, Format::Json);
    }

    #[test]
    fn config_text_round_trips() {
        let c = RunConfig::from_map(&map(&[
            ("type", "G2"),
            ("gammas", "1/5,-1/10"),
            ("tau", "s1 s2"),
            ("chamber", "1,4"),
            ("k-values", "100,10000"),
            ("radius", "0.05"),
            ("corrupt-q", "1.5"),
        ]))
        .unwrap();
        let again = RunConfig::from_map(&parse_config_text(&c.to_config_text()).unwrap()).unwrap();
        assert_eq!(c, again);
    }

    #[test]
    fn rejects_bad_input() {
        for bad in [
            map(&[]),
            map(&[("type", "A0")]),
            map(&[("type", "A2"), ("gammas", "0")]),
            map(&[("type", "A2"), ("gammas", "-1,0")]),
            map(&[("type", "A2"), ("chamber", "0,1")]),
            map(&[("type", "A2"), ("tau", "s3")]),
            map(&[("type", "A2"), ("radius", "-1")]),
            map(&[("type", "A2"), ("format", "xml")]),
            map(&[("type", "A2"), ("lambda-schedule", "1"), ("k-values", "2")]),
            map(&[("type", "A2"), ("colour", "red")]),
        ] {
            assert!(
                matches!(RunConfig::from_map(&bad), Err(CliError::Invalid(_))),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let m = parse_config_text("# run\n\ntype = B2 # rank two\nradius=0.2\n").unwrap();
        assert_eq!(m["type"], "B2");
        assert_eq!(m["radius"], "0.2");
        assert!(parse_config_text("type").is_err());
        assert!(parse_config_text("nope=1").is_err());
    }
}
