use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use wentzell::modes::{build_table, ModeEntry, ModeTable, RESIDUAL_TOL};
use wentzell::space::PhysicalParams;

use crate::CliError;

/// Writes to a sibling temporary file, then renames over `path`.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp{}", std::process::id()));
    fs::write(&tmp, bytes).map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        CliError::io(path, e)
    })
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// CSV with `# key = value` header lines carrying the parameters.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[(&str, String)], columns: &[&str]) -> Self {
        let mut text = String::new();
        for (k, v) in header {
            let _ = writeln!(text, "# {k} = {v}");
        }
        text.push_str(&columns.join(","));
        text.push('\n');
        Self { text }
    }

    pub fn row(&mut self, values: &[f64]) {
        let cells: Vec<String> = values.iter().map(|v| format!("{v:.16e}")).collect();
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

/// Sends `text` to `out`, or to stdout when no path is given.
pub fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => atomic_write(p, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    #[serde(rename = "S")]
    s: f64,
    c: f64,
    mu: f64,
    residual_tol: f64,
    entries: Vec<ModeEntry>,
}

pub struct CachedTable {
    pub table: ModeTable,
    pub path: PathBuf,
    pub sha256: String,
    pub hit: bool,
}

pub fn cache_path(dir: &Path, params: &PhysicalParams, m_max: usize) -> Result<PathBuf, CliError> {
    let key = format!(
        "S={:e};c={:e};mu={:e};max={m_max}",
        params.half_width()?,
        params.c(),
        params.mu()
    );
    Ok(dir.join(format!("modes-{}.json", &sha256_hex(key.as_bytes())[..16])))
}

/// Loads the table from the cache directory, building and storing it on a miss.
pub fn cached_table(dir: &Path, params: &PhysicalParams, m_max: usize) -> Result<CachedTable, CliError> {
    let path = cache_path(dir, params, m_max)?;
    if let Ok(bytes) = fs::read(&path) {
        let file: CacheFile = serde_json::from_slice(&bytes)
            .map_err(|e| CliError::Runtime(format!("corrupt cache {}: {e}", path.display())))?;
        if file.entries.len() != m_max + 1 {
            return Err(CliError::Runtime(format!("cache {} has {} entries", path.display(), file.entries.len())));
        }
        let table = ModeTable::from_entries(params, file.residual_tol, file.entries)?;
        return Ok(CachedTable { table, path, sha256: sha256_hex(&bytes), hit: true });
    }
    let table = build_table(m_max, params)?;
    let file = CacheFile {
        s: table.half_width(),
        c: table.c(),
        mu: table.mu(),
        residual_tol: RESIDUAL_TOL,
        entries: table.entries().to_vec(),
    };
    let text = to_json(&file);
    atomic_write(&path, text.as_bytes())?;
    Ok(CachedTable { table, path, sha256: sha256_hex(text.as_bytes()), hit: false })
}
