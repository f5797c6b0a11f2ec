//! On-disk cache of point records, keyed by a SHA-256 of the canonical
//! (configuration, policy, reports, code version) tuple.

use crate::args::Report;
use crate::error::CliError;
use crate::point::{evaluate, ConfigEcho, PointRecord, PointRequest};
use crate::resolve::PolicyEcho;
use casimir_core::dispersion::DispersionModel;
use casimir_core::thermal::SummationPolicy;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

#[derive(Serialize)]
struct Key<'a> {
    version: &'a str,
    config: Option<ConfigEcho>,
    si: Option<(DispersionModel, f64)>,
    policy: PolicyEcho,
    reports: &'a [Report],
}

pub fn key(req: &PointRequest, policy: &SummationPolicy, version: &str) -> String {
    let k = Key {
        version,
        config: req.config.as_ref().map(|(c, d)| ConfigEcho::new(c, *d)),
        si: req.si,
        policy: PolicyEcho::from(policy),
        reports: &req.reports,
    };
    let bytes = serde_json::to_vec(&k).expect("plain data serialises");
    Sha256::digest(&bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lookup {
    Hit,
    Miss,
    /// Entry present but unreadable; recomputed and overwritten.
    Repaired,
}

/// Evaluate through the cache when a directory is configured.
pub fn cached_evaluate(
    dir: Option<&Path>,
    req: &PointRequest,
    policy: &SummationPolicy,
    version: &str,
) -> Result<(PointRecord, Lookup), CliError> {
    let Some(dir) = dir else {
        return Ok((evaluate(req, policy, version)?, Lookup::Miss));
    };
    let path = entry_path(dir, &key(req, policy, version));
    let mut lookup = Lookup::Miss;
    if let Ok(bytes) = std::fs::read(&path) {
        match serde_json::from_slice::<PointRecord>(&bytes) {
            Ok(rec) => return Ok((rec, Lookup::Hit)),
            Err(e) => {
                eprintln!(
                    "warning: corrupt cache entry {} ({e}); recomputing",
                    path.display()
                );
                lookup = Lookup::Repaired;
            }
        }
    }
    let rec = evaluate(req, policy, version)?;
    store(dir, &path, &rec)?;
    Ok((rec, lookup))
}

fn entry_path(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("{key}.json"))
}

fn store(dir: &Path, path: &Path, rec: &PointRecord) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    std::fs::write(&tmp, serde_json::to_vec_pretty(rec)?)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}
