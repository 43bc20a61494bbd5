//! Synthetic corpora on disk: one trace CSV and one ground-truth JSON per
//! gait profile, indexed by a manifest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use stride_core::synth::RNG_ALGORITHM;
use stride_core::{generate_trace, GaitProfile, GroundTruth, Trace};

use crate::csv::{load_trace, save_trace};
use crate::error::{Error, Result};
use crate::json::{read_json, write_json};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    /// Relative to the manifest's directory.
    pub trace_path: String,
    pub truth_path: String,
    pub seed: u64,
    pub profile: GaitProfile,
    /// SHA-256 of the profile's compact JSON, hex encoded.
    pub profile_digest: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub rng_algorithm: String,
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn profiles(&self) -> Vec<GaitProfile> {
        self.entries.iter().map(|e| e.profile).collect()
    }
}

pub fn profile_digest(profile: &GaitProfile) -> String {
    let json = serde_json::to_vec(profile).expect("profiles always serialize");
    hex::encode(Sha256::digest(&json))
}

/// The standard evaluation sweep: 50 walks of 10 to 100 steps with
/// stride cv 0.2, one seed each, otherwise default profiles.
pub fn default_sweep() -> Vec<GaitProfile> {
    (0..50)
        .map(|i| GaitProfile {
            step_count: 10 + i * 90 / 49,
            stride_length_cv: 0.2,
            seed: 1000 + i as u64,
            ..GaitProfile::default()
        })
        .collect()
}

/// Writes `trace_NNN.csv`, `truth_NNN.json` and `manifest.json` into
/// `out_dir`, creating it if needed. Returns the manifest and its path.
pub fn generate_corpus(profiles: &[GaitProfile], out_dir: &Path) -> Result<(Manifest, PathBuf)> {
    for profile in profiles {
        profile.validate()?;
    }
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut entries = Vec::with_capacity(profiles.len());
    for (i, profile) in profiles.iter().enumerate() {
        let (trace, truth) = generate_trace(profile)?;
        let trace_path = format!("trace_{i:03}.csv");
        let truth_path = format!("truth_{i:03}.json");
        save_trace(&trace, out_dir.join(&trace_path))?;
        write_json(&out_dir.join(&truth_path), &truth)?;
        entries.push(ManifestEntry {
            trace_path,
            truth_path,
            seed: profile.seed,
            profile: *profile,
            profile_digest: profile_digest(profile),
        });
    }
    let manifest = Manifest { rng_algorithm: RNG_ALGORITHM.to_string(), entries };
    let path = out_dir.join(MANIFEST_FILE);
    write_json(&path, &manifest)?;
    Ok((manifest, path))
}

/// Reads a manifest and checks that every entry's seed and digest agree
/// with its profile.
pub fn load_manifest(path: &Path) -> Result<Manifest> {
    let manifest: Manifest = read_json(path)?;
    for entry in &manifest.entries {
        let problem = if entry.seed != entry.profile.seed {
            Some(format!(
                "{}: seed {} does not match profile seed {}",
                entry.trace_path, entry.seed, entry.profile.seed
            ))
        } else if entry.profile_digest != profile_digest(&entry.profile) {
            Some(format!("{}: profile digest mismatch", entry.trace_path))
        } else {
            None
        };
        if let Some(message) = problem {
            return Err(Error::Manifest { path: path.to_path_buf(), message });
        }
    }
    Ok(manifest)
}

/// Loads the trace and ground truth of one entry of the manifest at
/// `manifest_path`.
pub fn load_entry(manifest_path: &Path, entry: &ManifestEntry) -> Result<(Trace, GroundTruth)> {
    let dir = manifest_path.parent().unwrap_or(Path::new("."));
    let trace = load_trace(dir.join(&entry.trace_path))?;
    let truth = read_json(&dir.join(&entry.truth_path))?;
    Ok((trace, truth))
}
