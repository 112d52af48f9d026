//! Optional ground-state memoization keyed by (L, N_up, delta, sign).
//!
//! Pointing `VERTEX_ODDITY_CACHE` at a directory makes repeated scans reuse
//! earlier solves. Cached records carry the derived scan quantities, not the
//! amplitude vectors, and are invalidated by artifact version.

use std::fs;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use vertex_oddity::ed::{ScanRow, Sign};
use vertex_oddity::{Sector, SpinConfig};

use crate::output::ARTIFACT_VERSION;

pub const CACHE_ENV: &str = "VERTEX_ODDITY_CACHE";

#[derive(Serialize, Deserialize)]
struct Record {
    version: String,
    l: usize,
    n_up: usize,
    delta: f64,
    sign: String,
    energy: f64,
    s_inf: f64,
    p_max: f64,
    argmax: String,
    degenerate: bool,
}

pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    /// Reads `VERTEX_ODDITY_CACHE`; an unset variable disables caching.
    pub fn from_env() -> Self {
        let dir = std::env::var_os(CACHE_ENV).map(PathBuf::from);
        if let Some(d) = &dir {
            let _ = fs::create_dir_all(d);
        }
        Cache { dir }
    }

    fn key_path(&self, sector: Sector, delta: f64, sign: Sign) -> Option<PathBuf> {
        let dir = self.dir.as_ref()?;
        let sign = match sign {
            Sign::Plus => "p",
            Sign::Minus => "m",
        };
        Some(dir.join(format!(
            "gs-L{}-N{}-{}-{:016x}.json",
            sector.length(),
            sector.n_up(),
            sign,
            delta.to_bits()
        )))
    }

    pub fn lookup(&self, sector: Sector, delta: f64, sign: Sign) -> Option<ScanRow> {
        let path = self.key_path(sector, delta, sign)?;
        let text = fs::read_to_string(path).ok()?;
        let rec: Record = serde_json::from_str(&text).ok()?;
        if rec.version != ARTIFACT_VERSION || rec.delta.to_bits() != delta.to_bits() {
            return None;
        }
        let argmax = SpinConfig::from_string01(&rec.argmax).ok()?;
        Some(ScanRow {
            sector,
            delta: rec.delta,
            energy: rec.energy,
            s_inf: rec.s_inf,
            p_max: rec.p_max,
            argmax,
            degenerate: rec.degenerate,
        })
    }

    pub fn store(&self, row: &ScanRow, sign: Sign) {
        let Some(path) = self.key_path(row.sector, row.delta, sign) else {
            return;
        };
        let rec = Record {
            version: ARTIFACT_VERSION.into(),
            l: row.sector.length(),
            n_up: row.sector.n_up(),
            delta: row.delta,
            sign: match sign {
                Sign::Plus => "p".into(),
                Sign::Minus => "m".into(),
            },
            energy: row.energy,
            s_inf: row.s_inf,
            p_max: row.p_max,
            argmax: row.argmax.to_string01(),
            degenerate: row.degenerate,
        };
        if let Ok(json) = serde_json::to_string_pretty(&rec) {
            let _ = fs::write(path, json);
        }
    }
}
