use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::{derive_seed, ScenarioConfig};
use crate::cross_section::CrossSection;
use crate::engine::{run_single, InitialDatum, Scheme};
use crate::error::{Error, Result};
use crate::metrics::EmpiricalMeasure;

/// Everything that determines a reference sample. Its hash names the
/// sample in a [`ReferenceCache`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceSpec {
    pub nu: f64,
    pub eps_ref: f64,
    pub times: Vec<f64>,
    pub f0: InitialDatum,
    pub n_ref: usize,
    pub ref_replicas: usize,
    pub seed: u64,
    pub exclude_self_collision: bool,
}

impl ReferenceSpec {
    pub fn from_config(cfg: &ScenarioConfig, times: &[f64]) -> Result<Self> {
        let nu = cfg.nu.ok_or_else(|| Error::Config {
            key: "nu".into(),
            line: None,
            message: "required for the reference sample".into(),
        })?;
        Ok(ReferenceSpec {
            nu,
            eps_ref: cfg.eps_ref,
            times: times.to_vec(),
            f0: cfg.f0.clone(),
            n_ref: cfg.n_ref,
            ref_replicas: cfg.ref_replicas,
            seed: derive_seed(cfg.base_seed, "reference", 0),
            exclude_self_collision: cfg.exclude_self_collision,
        })
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("reference spec serializes");
        Sha256::digest(&json).iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Runs the diffusion scheme in `ref_replicas` chunks and pools them.
    pub fn build(&self) -> Result<Reference> {
        let cs = CrossSection::power_law(self.nu)?;
        let k = self.ref_replicas;
        let sizes: Vec<usize> = (0..k).map(|c| self.n_ref / k + usize::from(c < self.n_ref % k)).collect();
        let runs: Vec<_> = sizes
            .par_iter()
            .enumerate()
            .map(|(c, &size)| {
                run_single(
                    &self.f0,
                    size,
                    Scheme::Diffusion,
                    cs,
                    self.eps_ref,
                    self.seed ^ c as u64,
                    &self.times,
                    self.exclude_self_collision,
                    true,
                )
            })
            .collect();
        let mut pooled: Vec<Vec<f64>> = vec![Vec::with_capacity(self.n_ref); self.times.len()];
        for run in runs {
            for (slot, snap) in pooled.iter_mut().zip(run?) {
                slot.extend(snap.velocities.expect("velocities kept"));
            }
        }
        let snapshots = self
            .times
            .iter()
            .zip(pooled)
            .map(|(&t, v)| Ok((t, EmpiricalMeasure::new(v)?)))
            .collect::<Result<_>>()?;
        Ok(Reference {
            hash: self.hash(),
            snapshots,
        })
    }
}

/// Pooled reference sample at each observation time.
#[derive(Debug, Clone, PartialEq)]
pub struct Reference {
    pub hash: String,
    pub snapshots: Vec<(f64, EmpiricalMeasure)>,
}

impl Reference {
    pub fn at(&self, t: f64) -> Option<&EmpiricalMeasure> {
        self.snapshots.iter().find(|(s, _)| *s == t).map(|(_, m)| m)
    }

    fn write(&self, path: &Path) -> Result<()> {
        let mut bytes = Vec::new();
        bytes.extend((self.snapshots.len() as u64).to_le_bytes());
        for (t, m) in &self.snapshots {
            bytes.extend(t.to_le_bytes());
            bytes.extend((m.len() as u64).to_le_bytes());
            for v in m.sorted_values() {
                bytes.extend(v.to_le_bytes());
            }
        }
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, &bytes).map_err(|source| Error::Io {
            path: tmp.clone(),
            source,
        })?;
        fs::rename(&tmp, path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    fn read(path: &Path, hash: &str) -> Result<Self> {
        let bytes = fs::read(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let corrupt = || Error::Io {
            path: path.to_path_buf(),
            source: std::io::Error::new(std::io::ErrorKind::InvalidData, "truncated reference file"),
        };
        let mut words = bytes.chunks_exact(8).map(|c| <[u8; 8]>::try_from(c).unwrap());
        let mut next = || words.next().ok_or_else(corrupt);
        let count = u64::from_le_bytes(next()?);
        let mut snapshots = Vec::new();
        for _ in 0..count {
            let t = f64::from_le_bytes(next()?);
            let len = u64::from_le_bytes(next()?) as usize;
            let values = (0..len).map(|_| next().map(f64::from_le_bytes)).collect::<Result<Vec<_>>>()?;
            snapshots.push((t, EmpiricalMeasure::new(values)?));
        }
        Ok(Reference {
            hash: hash.to_string(),
            snapshots,
        })
    }
}

/// Content-addressed store of reference samples, in memory and optionally
/// mirrored to a directory as `reference-<hash>.bin`.
#[derive(Debug, Default)]
pub struct ReferenceCache {
    dir: Option<PathBuf>,
    memory: Mutex<HashMap<String, Arc<Reference>>>,
}

impl ReferenceCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    pub fn on_disk(dir: impl Into<PathBuf>) -> Self {
        ReferenceCache {
            dir: Some(dir.into()),
            memory: Mutex::default(),
        }
    }

    pub fn get_or_build(&self, spec: &ReferenceSpec) -> Result<Arc<Reference>> {
        let hash = spec.hash();
        if let Some(r) = self.memory.lock().expect("cache lock").get(&hash) {
            return Ok(r.clone());
        }
        let path = self.dir.as_ref().map(|d| d.join(format!("reference-{hash}.bin")));
        let reference = match &path {
            Some(p) if p.exists() => Reference::read(p, &hash)?,
            _ => {
                let r = spec.build()?;
                if let Some(p) = &path {
                    let dir = p.parent().expect("cache file has a parent");
                    fs::create_dir_all(dir).map_err(|source| Error::Io {
                        path: dir.to_path_buf(),
                        source,
                    })?;
                    r.write(p)?;
                }
                r
            }
        };
        let reference = Arc::new(reference);
        self.memory
            .lock()
            .expect("cache lock")
            .insert(hash, reference.clone());
        Ok(reference)
    }
}
