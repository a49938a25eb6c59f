//! Atomic file output, document envelopes and the representation cache.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use toda_core::rep::{RepCache, DEFAULT_DIM_CAP};
use toda_core::{build_fundamental, CartanData, FundamentalRep};

use crate::error::{CliError, CliResult};

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Writes through a sibling temp file and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let name = path
        .file_name()
        .ok_or_else(|| CliError::Invalid(format!("not a file path: {}", path.display())))?;
    let tmp = dir.join(format!(
        ".{}.{}.tmp",
        name.to_string_lossy(),
        std::process::id()
    ));
    let mut file = std::fs::File::create(&tmp).map_err(io_err(&tmp))?;
    file.write_all(bytes).map_err(io_err(&tmp))?;
    file.sync_all().map_err(io_err(&tmp))?;
    drop(file);
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        io_err(path)(e)
    })
}

/// Sends a document to `out`, or to stdout when no path is given.
pub fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(io_err(Path::new("<stdout>")))?;
            stdout.flush().map_err(io_err(Path::new("<stdout>")))
        }
    }
}

#[derive(Serialize)]
pub struct Header {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    /// Absent in reproducible mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_unix: Option<u64>,
}

impl Header {
    pub fn new(command: &'static str, reproducible: bool) -> Self {
        let now = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .ok();
        Header {
            tool: "toda",
            version: env!("CARGO_PKG_VERSION"),
            command,
            generated_unix: if reproducible { None } else { now },
        }
    }

    pub fn csv_lines(&self) -> String {
        let mut s = format!(
            "# tool={} {}\n# command={}\n",
            self.tool, self.version, self.command
        );
        if let Some(t) = self.generated_unix {
            s.push_str(&format!("# generated_unix={t}\n"));
        }
        s
    }
}

#[derive(Serialize)]
struct Envelope<'a, P: Serialize> {
    header: &'a Header,
    payload: &'a P,
}

pub fn json_document<P: Serialize>(header: &Header, payload: &P) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(&Envelope { header, payload })?;
    s.push('\n');
    Ok(s)
}

fn cache_path(dir: &Path, cartan: &CartanData, i: usize) -> PathBuf {
    dir.join(format!("{}-omega{}.json", cartan.lie_type(), i + 1))
}

/// Loads a fundamental representation from the cache directory, rebuilding
/// and rewriting it when the entry is missing or fails validation.
pub fn load_rep(
    cartan: &CartanData,
    i: usize,
    cache_dir: Option<&Path>,
) -> CliResult<FundamentalRep> {
    let Some(dir) = cache_dir else {
        return Ok(build_fundamental(cartan, i, DEFAULT_DIM_CAP)?);
    };
    let path = cache_path(dir, cartan, i);
    if let Ok(text) = std::fs::read_to_string(&path) {
        match serde_json::from_str::<RepCache>(&text)
            .map_err(CliError::from)
            .and_then(|c| Ok(FundamentalRep::from_cache(cartan, &c)?))
        {
            Ok(rep) => return Ok(rep),
            Err(e) => eprintln!("warning: discarding cache entry {}: {e}", path.display()),
        }
    }
    let rep = build_fundamental(cartan, i, DEFAULT_DIM_CAP)?;
    let text = serde_json::to_string(&rep.to_cache())?;
    write_atomic(&path, text.as_bytes())?;
    Ok(rep)
}
