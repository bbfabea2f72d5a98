//! On-disk cache of continued-fraction expansions.
//!
//! File format (plain text, one file per target):
//!
//! ```text
//! alpha=sqrt(19)*tan(10pi/7)
//! precision=65536
//! 19
//! 10
//! 4
//! ...
//! ```
//!
//! The header names the target canonically and records the working
//! precision that certified the stored quotients. Before a file is
//! extended, the last five cached quotients are recomputed and compared;
//! a mismatch aborts rather than propagating a corrupt prefix.

use super::alpha::AlphaTarget;
use super::cf::{cf_expand, CFExpansion};
use crate::error::Error;
use crate::exact::Integer;
use crate::Result;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

const VERIFY_TAIL: usize = 5;

/// Cache file path for a target inside `dir`.
pub fn cache_path(dir: &Path, target: &AlphaTarget) -> PathBuf {
    let canonical = target.canonical();
    let mut name: String = canonical
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    // Cheap stable fingerprint to keep distinct targets from colliding
    // after sanitisation.
    let mut h: u64 = 0xcbf29ce484222325;
    for b in canonical.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    name.push_str(&format!("_{:016x}.cf", h));
    dir.join(name)
}

/// Parsed cache file contents.
pub struct CacheFile {
    pub alpha: String,
    pub precision: u32,
    pub quotients: Vec<Integer>,
}

pub fn read_cache(path: &Path) -> Result<CacheFile> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let alpha_line = lines
        .next()
        .ok_or_else(|| Error::Cache("empty cache file".into()))?;
    let alpha = alpha_line
        .strip_prefix("alpha=")
        .ok_or_else(|| Error::Cache("missing alpha= header".into()))?
        .to_string();
    let prec_line = lines
        .next()
        .ok_or_else(|| Error::Cache("missing precision= header".into()))?;
    let precision: u32 = prec_line
        .strip_prefix("precision=")
        .ok_or_else(|| Error::Cache("missing precision= header".into()))?
        .parse()
        .map_err(|e| Error::Cache(format!("bad precision: {}", e)))?;
    let mut quotients = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let q = Integer::from_str_radix(line, 10)
            .map_err(|e| Error::Cache(format!("bad quotient on line {}: {}", i + 3, e)))?;
        quotients.push(q);
    }
    Ok(CacheFile {
        alpha,
        precision,
        quotients,
    })
}

fn write_cache(path: &Path, alpha: &str, precision: u32, quotients: &[Integer]) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let tmp = path.with_extension("cf.tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        writeln!(f, "alpha={}", alpha)?;
        writeln!(f, "precision={}", precision)?;
        for q in quotients {
            writeln!(f, "{}", q)?;
        }
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Expand `target` to `count` quotients, reusing and extending the cache in
/// `dir`.
pub fn cached_expand(
    dir: &Path,
    target: &AlphaTarget,
    count: usize,
    precision_floor: u32,
) -> Result<CFExpansion> {
    let path = cache_path(dir, target);
    let canonical = target.canonical();
    let cached = if path.exists() {
        let cf = read_cache(&path)?;
        if cf.alpha != canonical {
            return Err(Error::Cache(format!(
                "cache file {} names target {:?}, expected {:?}",
                path.display(),
                cf.alpha,
                canonical
            )));
        }
        Some(cf)
    } else {
        None
    };

    if let Some(cf) = &cached {
        if cf.quotients.len() >= count {
            return Ok(CFExpansion::from_quotients(
                canonical,
                cf.precision,
                cf.quotients[..count].to_vec(),
            ));
        }
    }

    // Need to (re)compute. Certify the full prefix from scratch, then check
    // the cached tail before replacing the file.
    let fresh = cf_expand(target, count, precision_floor)?;
    if let Some(cf) = &cached {
        let n = cf.quotients.len();
        let tail = n.saturating_sub(VERIFY_TAIL);
        if fresh.quotients[tail..n] != cf.quotients[tail..] {
            return Err(Error::Cache(format!(
                "cached quotients {}..{} of {} disagree with recomputation",
                tail,
                n,
                path.display()
            )));
        }
    }
    write_cache(&path, &canonical, fresh.precision_bits, &fresh.quotients)?;
    Ok(fresh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    fn sqrt2() -> AlphaTarget {
        AlphaTarget::Surd {
            a: Rational::new(),
            b: Rational::from(1),
            d: Integer::from(2),
        }
    }

    #[test]
    fn roundtrip_and_extend() {
        let dir = tempfile::tempdir().unwrap();
        let e1 = cached_expand(dir.path(), &sqrt2(), 10, 64).unwrap();
        assert_eq!(e1.len(), 10);
        // Cached read back, truncated.
        let e2 = cached_expand(dir.path(), &sqrt2(), 6, 64).unwrap();
        assert_eq!(e2.quotients, e1.quotients[..6]);
        // Extension verifies the old tail and grows the file.
        let e3 = cached_expand(dir.path(), &sqrt2(), 20, 64).unwrap();
        assert_eq!(e3.quotients[..10], e1.quotients[..]);
        let cf = read_cache(&cache_path(dir.path(), &sqrt2())).unwrap();
        assert_eq!(cf.quotients.len(), 20);
    }

    #[test]
    fn corrupt_tail_detected() {
        let dir = tempfile::tempdir().unwrap();
        cached_expand(dir.path(), &sqrt2(), 10, 64).unwrap();
        let path = cache_path(dir.path(), &sqrt2());
        let mut cf = read_cache(&path).unwrap();
        // Corrupt the last quotient (2 -> 3).
        let n = cf.quotients.len();
        cf.quotients[n - 1] = Integer::from(3);
        super::write_cache(&path, &cf.alpha, cf.precision, &cf.quotients).unwrap();
        let err = cached_expand(dir.path(), &sqrt2(), 15, 64);
        assert!(matches!(err, Err(Error::Cache(_))));
    }

    #[test]
    fn alpha_mismatch_detected() {
        let dir = tempfile::tempdir().unwrap();
        let path = cache_path(dir.path(), &sqrt2());
        super::write_cache(&path, "something-else", 64, &[Integer::from(1)]).unwrap();
        let err = cached_expand(dir.path(), &sqrt2(), 5, 64);
        assert!(matches!(err, Err(Error::Cache(_))));
    }
}
