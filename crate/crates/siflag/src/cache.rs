//! Optional on-disk persistence for the partition-function memo.
//!
//! The cache lives in the directory named by `SIFLAG_CACHE_DIR`, one
//! file per root datum keyed by its fingerprint. The format is versioned
//! and checksummed; a missing, truncated, or corrupt file is silently
//! ignored — the cache is an accelerator, never a source of truth.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! magic   b"SIFP"
//! version u32
//! fp      u128          datum fingerprint
//! count   u64           number of entries
//! entry*  i: u32, t_len: u32, t: i64 × t_len, n: u32, (exp: u32, coeff: i64) × n
//! digest  32 bytes      SHA-256 of everything above
//! ```

use std::env;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::kostant::{partition_memo_load, partition_memo_snapshot};
use crate::rootdatum::RootDatum;
use crate::Result;

const MAGIC: &[u8; 4] = b"SIFP";
const VERSION: u32 = 1;

/// The cache directory configured in the environment, if any.
pub fn cache_dir_from_env() -> Option<PathBuf> {
    env::var_os("SIFLAG_CACHE_DIR").map(PathBuf::from)
}

/// File path for one datum's partition table inside `dir`.
pub fn cache_path(dir: &Path, fingerprint: u128) -> PathBuf {
    dir.join(format!("partitions-{fingerprint:032x}.bin"))
}

/// Load cached partition polynomials for `datum`, returning how many
/// entries were accepted. Every failure mode — absent directory, absent
/// file, bad magic, version skew, fingerprint mismatch, bad checksum,
/// truncation — loads nothing and returns 0.
pub fn load_partition_cache(dir: &Path, datum: &RootDatum) -> usize {
    let bytes = match fs::read(cache_path(dir, datum.fingerprint())) {
        Ok(b) => b,
        Err(_) => return 0,
    };
    match parse(&bytes, datum.fingerprint()) {
        Some(entries) => {
            let n = entries.len();
            partition_memo_load(datum.fingerprint(), entries);
            n
        }
        None => 0,
    }
}

/// Persist the current in-memory partition table for `datum`, returning
/// the number of entries written. Creates the directory if needed.
pub fn save_partition_cache(dir: &Path, datum: &RootDatum) -> Result<usize> {
    let mut entries = partition_memo_snapshot(datum.fingerprint());
    entries.sort();
    let mut body = Vec::new();
    body.extend_from_slice(MAGIC);
    body.extend_from_slice(&VERSION.to_le_bytes());
    body.extend_from_slice(&datum.fingerprint().to_le_bytes());
    body.extend_from_slice(&(entries.len() as u64).to_le_bytes());
    for ((i, t), coeffs) in &entries {
        body.extend_from_slice(&i.to_le_bytes());
        body.extend_from_slice(&(t.len() as u32).to_le_bytes());
        for &c in t {
            body.extend_from_slice(&c.to_le_bytes());
        }
        body.extend_from_slice(&(coeffs.len() as u32).to_le_bytes());
        for &(e, c) in coeffs {
            body.extend_from_slice(&e.to_le_bytes());
            body.extend_from_slice(&c.to_le_bytes());
        }
    }
    let digest = Sha256::digest(&body);
    body.extend_from_slice(&digest);
    fs::create_dir_all(dir)?;
    fs::write(cache_path(dir, datum.fingerprint()), body)?;
    Ok(entries.len())
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Option<&'a [u8]> {
        let end = self.pos.checked_add(n)?;
        if end > self.bytes.len() {
            return None;
        }
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Some(out)
    }

    fn u32(&mut self) -> Option<u32> {
        Some(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Option<u64> {
        Some(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn u128(&mut self) -> Option<u128> {
        Some(u128::from_le_bytes(self.take(16)?.try_into().unwrap()))
    }

    fn i64(&mut self) -> Option<i64> {
        Some(i64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

#[allow(clippy::type_complexity)]
fn parse(bytes: &[u8], expected_fp: u128) -> Option<Vec<((u32, Vec<i64>), Vec<(u32, i64)>)>> {
    if bytes.len() < 32 {
        return None;
    }
    let (body, digest) = bytes.split_at(bytes.len() - 32);
    if Sha256::digest(body).as_slice() != digest {
        return None;
    }
    let mut r = Reader { bytes: body, pos: 0 };
    if r.take(4)? != MAGIC || r.u32()? != VERSION || r.u128()? != expected_fp {
        return None;
    }
    let count = r.u64()?;
    // An absurd count means corruption the checksum happened to bless.
    if count > 10_000_000 {
        return None;
    }
    let mut entries = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let i = r.u32()?;
        let t_len = r.u32()?;
        if t_len > 64 {
            return None;
        }
        let mut t = Vec::with_capacity(t_len as usize);
        for _ in 0..t_len {
            t.push(r.i64()?);
        }
        let n = r.u32()?;
        let mut coeffs = Vec::with_capacity(n as usize);
        for _ in 0..n {
            let e = r.u32()?;
            let c = r.i64()?;
            coeffs.push((e, c));
        }
        entries.push(((i, t), coeffs));
    }
    if r.pos != body.len() {
        return None;
    }
    Some(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kostant::kostant_partition;

    #[track_caller]
    fn datum(alias: &str) -> RootDatum {
        RootDatum::from_alias(alias).unwrap()
    }

    #[test]
    fn save_and_load_round_trip() {
        let d = datum("b2");
        let poly = kostant_partition(&d, &[2, 2]);
        let dir = tempfile::tempdir().unwrap();
        let written = save_partition_cache(dir.path(), &d).unwrap();
        assert!(written > 0);
        assert!(cache_path(dir.path(), d.fingerprint()).exists());
        let loaded = load_partition_cache(dir.path(), &d);
        assert_eq!(loaded, written);
        // The memo still answers identically after a reload.
        assert_eq!(kostant_partition(&d, &[2, 2]), poly);
    }

    #[test]
    fn saves_are_byte_stable() {
        let d = datum("a2-adj");
        let _ = kostant_partition(&d, &[3, 3]);
        let dir = tempfile::tempdir().unwrap();
        save_partition_cache(dir.path(), &d).unwrap();
        let first = fs::read(cache_path(dir.path(), d.fingerprint())).unwrap();
        save_partition_cache(dir.path(), &d).unwrap();
        let second = fs::read(cache_path(dir.path(), d.fingerprint())).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn corrupt_or_missing_files_load_nothing() {
        let d = datum("g2");
        let _ = kostant_partition(&d, d.two_rho_check());
        let dir = tempfile::tempdir().unwrap();
        // Missing file.
        assert_eq!(load_partition_cache(dir.path(), &d), 0);
        save_partition_cache(dir.path(), &d).unwrap();
        let path = cache_path(dir.path(), d.fingerprint());
        // Flipped byte in the body breaks the checksum.
        let mut bytes = fs::read(&path).unwrap();
        bytes[7] ^= 0xff;
        fs::write(&path, &bytes).unwrap();
        assert_eq!(load_partition_cache(dir.path(), &d), 0);
        // Truncation.
        let good = {
            bytes[7] ^= 0xff;
            bytes
        };
        fs::write(&path, &good[..good.len() / 2]).unwrap();
        assert_eq!(load_partition_cache(dir.path(), &d), 0);
        // Wrong magic, checksum re-blessed: still rejected.
        let mut evil = good.clone();
        evil[0] = b'X';
        let body_len = evil.len() - 32;
        let digest = Sha256::digest(&evil[..body_len]);
        evil[body_len..].copy_from_slice(&digest);
        fs::write(&path, &evil).unwrap();
        assert_eq!(load_partition_cache(dir.path(), &d), 0);
        // Restore the good bytes: loads again.
        fs::write(&path, &good).unwrap();
        assert!(load_partition_cache(dir.path(), &d) > 0);
    }

    #[test]
    fn fingerprint_mismatch_is_ignored() {
        let d = datum("a1-adj");
        let other = datum("a1-sc");
        let _ = kostant_partition(&d, &[4]);
        let dir = tempfile::tempdir().unwrap();
        save_partition_cache(dir.path(), &d).unwrap();
        // Masquerade the file under the other datum's name.
        let from = cache_path(dir.path(), d.fingerprint());
        let to = cache_path(dir.path(), other.fingerprint());
        fs::copy(from, to).unwrap();
        assert_eq!(load_partition_cache(dir.path(), &other), 0);
    }
}
