//! On-disk cache of filtration cells.
//!
//! One binary file per cell `F_k^ℓ`, named `n{n}_k{k}_l{ℓ}_{field}.cell`,
//! plus a JSON sidecar with the same stem. All integers are little-endian.
//!
//! ```text
//! magic      8 bytes  "NCLCSCEL"
//! version    u32      1
//! n, k, len  u32 x 3
//! field      u8       0 = prime, 1 = rational
//! prime      u32      0 for rational
//! shards     u32
//! rows       u64      total row count
//! per shard:
//!   multidegree  u32 x n
//!   ambient      u64  number of words of that multidegree
//!   rank         u32
//!   per row: nnz u32, then nnz x (index u64, coefficient)
//! ```
//!
//! Prime coefficients are a `u32` residue; rational coefficients are a
//! length-prefixed signed numerator followed by a length-prefixed denominator.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{FiltrationCell, Shard};
use crate::error::{Error, Result};
use crate::exactrank::SparseVector;
use crate::ncpoly::{ambient_dim, Multidegree, Word};
use crate::scalar::{Field, FieldKind};

const MAGIC: &[u8; 8] = b"NCLCSCEL";
const VERSION: u32 = 1;

pub(crate) fn cell_path(dir: &Path, n: usize, k: usize, len: usize, field: FieldKind) -> PathBuf {
    dir.join(format!("n{n}_k{k}_l{len}_{}.cell", field.tag()))
}

#[derive(Serialize)]
struct Sidecar<'a> {
    version: u32,
    n: usize,
    k: usize,
    len: usize,
    #[serde(flatten)]
    field: FieldKind,
    dim: usize,
    ambient: usize,
    multidegree_dims: Vec<MultidegreeDim<'a>>,
}

#[derive(Serialize)]
struct MultidegreeDim<'a> {
    multidegree: &'a Multidegree,
    dim: usize,
}

pub(crate) fn write_cell<F: Field>(dir: &Path, cell: &FiltrationCell<F>) -> Result<()> {
    fs::create_dir_all(dir)?;
    let field = F::kind();
    let mut buf = Vec::new();
    buf.extend_from_slice(MAGIC);
    for v in [VERSION, cell.n as u32, cell.k as u32, cell.len as u32] {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    match field {
        FieldKind::Prime { p } => {
            buf.push(0);
            buf.extend_from_slice(&p.to_le_bytes());
        }
        FieldKind::Rational => {
            buf.push(1);
            buf.extend_from_slice(&0u32.to_le_bytes());
        }
    }
    buf.extend_from_slice(&(cell.shards.len() as u32).to_le_bytes());
    buf.extend_from_slice(&(cell.dim() as u64).to_le_bytes());
    for shard in &cell.shards {
        for e in &shard.multidegree.0 {
            buf.extend_from_slice(&e.to_le_bytes());
        }
        buf.extend_from_slice(&(shard.ambient as u64).to_le_bytes());
        buf.extend_from_slice(&(shard.rows.len() as u32).to_le_bytes());
        for row in &shard.rows {
            buf.extend_from_slice(&(row.nnz() as u32).to_le_bytes());
            for (i, c) in row.entries() {
                buf.extend_from_slice(&(*i as u64).to_le_bytes());
                c.encode_le(&mut buf);
            }
        }
    }
    let path = cell_path(dir, cell.n, cell.k, cell.len, field);
    // write-then-rename so a concurrent reader never sees a partial file
    let tmp = path.with_extension("cell.tmp");
    fs::File::create(&tmp)?.write_all(&buf)?;
    fs::rename(&tmp, &path)?;

    let sidecar = Sidecar {
        version: VERSION,
        n: cell.n,
        k: cell.k,
        len: cell.len,
        field,
        dim: cell.dim(),
        ambient: cell.ambient_dim(),
        multidegree_dims: cell
            .shards
            .iter()
            .map(|s| MultidegreeDim { multidegree: &s.multidegree, dim: s.rank() })
            .collect(),
    };
    fs::write(path.with_extension("json"), serde_json::to_string_pretty(&sidecar)? + "\n")?;
    Ok(())
}

struct Reader<'a> {
    buf: &'a [u8],
}

impl<'a> Reader<'a> {
    fn bytes(&mut self, len: usize) -> Option<&'a [u8]> {
        if self.buf.len() < len {
            return None;
        }
        let (head, tail) = self.buf.split_at(len);
        self.buf = tail;
        Some(head)
    }
    fn u8(&mut self) -> Option<u8> {
        Some(self.bytes(1)?[0])
    }
    fn u32(&mut self) -> Option<u32> {
        Some(u32::from_le_bytes(self.bytes(4)?.try_into().ok()?))
    }
    fn u64(&mut self) -> Option<u64> {
        Some(u64::from_le_bytes(self.bytes(8)?.try_into().ok()?))
    }
}

/// Loads the shards of `F_k^ℓ`, or `None` if no cache file exists.
pub(crate) fn read_cell<F: Field>(dir: &Path, n: usize, k: usize, len: usize) -> Result<Option<Vec<Shard<F>>>> {
    let path = cell_path(dir, n, k, len, F::kind());
    let data = match fs::read(&path) {
        Ok(d) => d,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let corrupt = |reason: &str| Error::CacheCorrupt { path: path.clone(), reason: reason.to_string() };
    parse_cell::<F>(&data, n, k, len).map(Some).map_err(|r| corrupt(&r))
}

fn parse_cell<F: Field>(data: &[u8], n: usize, k: usize, len: usize) -> std::result::Result<Vec<Shard<F>>, String> {
    let truncated = || "truncated file".to_string();
    let mut r = Reader { buf: data };
    if r.bytes(8) != Some(MAGIC.as_slice()) {
        return Err("bad magic".into());
    }
    if r.u32().ok_or_else(truncated)? != VERSION {
        return Err("unsupported version".into());
    }
    let header = (r.u32(), r.u32(), r.u32());
    if header != (Some(n as u32), Some(k as u32), Some(len as u32)) {
        return Err("header does not match the requested cell".into());
    }
    let field = match (r.u8(), r.u32()) {
        (Some(0), Some(p)) => FieldKind::Prime { p },
        (Some(1), Some(0)) => FieldKind::Rational,
        _ => return Err("bad field tag".into()),
    };
    if field != F::kind() {
        return Err("field does not match".into());
    }
    let shard_count = r.u32().ok_or_else(truncated)? as usize;
    let total_rows = r.u64().ok_or_else(truncated)? as usize;
    let global_dim = ambient_dim(n, len).ok_or("ambient dimension overflows")?;
    let expected_shards = Multidegree::all_of_total(n, len);
    if shard_count != expected_shards.len() {
        return Err("wrong number of multidegree shards".into());
    }
    let mut shards = Vec::with_capacity(shard_count);
    let mut seen_rows = 0;
    for expected in expected_shards {
        let alpha = Multidegree((0..n).map(|_| r.u32().ok_or_else(truncated)).collect::<Result<_, _>>()?);
        if alpha != expected {
            return Err("shards out of order".into());
        }
        let ambient = r.u64().ok_or_else(truncated)? as usize;
        let rank = r.u32().ok_or_else(truncated)? as usize;
        if rank > ambient {
            return Err("rank exceeds ambient dimension".into());
        }
        let mut rows = Vec::with_capacity(rank);
        let mut pivots = Vec::with_capacity(rank);
        for _ in 0..rank {
            let nnz = r.u32().ok_or_else(truncated)? as usize;
            let mut entries = Vec::with_capacity(nnz);
            for _ in 0..nnz {
                let i = r.u64().ok_or_else(truncated)? as usize;
                let c = F::decode_le(&mut r.buf).ok_or("bad coefficient")?;
                if i >= global_dim || c.is_zero() {
                    return Err("entry out of range or zero".into());
                }
                if Word::from_index(n, len, i as u64).multidegree() != alpha {
                    return Err("entry outside its multidegree".into());
                }
                entries.push((i, c));
            }
            if !entries.windows(2).all(|w| w[0].0 < w[1].0) {
                return Err("row entries not sorted".into());
            }
            match entries.first() {
                Some((p, c)) if *c == F::one() => pivots.push(*p),
                _ => return Err("row is not normalized".into()),
            }
            rows.push(SparseVector::from_sorted(global_dim, entries));
        }
        if !pivots.windows(2).all(|w| w[0] < w[1]) {
            return Err("pivots not strictly increasing".into());
        }
        for row in &rows {
            // reduced form: no row has an entry in another row's pivot column
            let hits = row.entries().iter().filter(|(i, _)| pivots.binary_search(i).is_ok()).count();
            if hits != 1 {
                return Err("rows are not in reduced echelon form".into());
            }
        }
        seen_rows += rows.len();
        shards.push(Shard { multidegree: alpha, ambient, rows });
    }
    if seen_rows != total_rows || !r.buf.is_empty() {
        return Err("row count mismatch".into());
    }
    Ok(shards)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lcs::{LcsConfig, LcsEngine};
    use crate::scalar::{Fp31, Rational};

    fn cached_engine<F: Field>(dir: &Path, n: usize) -> LcsEngine<F> {
        let config = LcsConfig { cache_dir: Some(dir.to_path_buf()), ..LcsConfig::default() };
        LcsEngine::new(n, config).unwrap()
    }

    #[test]
    fn cache_roundtrip_reproduces_dimensions() {
        let dir = tempfile::tempdir().unwrap();
        let first = cached_engine::<Fp31>(dir.path(), 2);
        let dims: Vec<usize> = (1..=5).map(|k| first.quotient_dim(k, 5).unwrap()).collect();
        let path = cell_path(dir.path(), 2, 3, 5, Fp31::kind());
        assert!(path.exists());
        assert!(path.with_extension("json").exists());
        let bytes = fs::read(&path).unwrap();

        let second = cached_engine::<Fp31>(dir.path(), 2);
        let again: Vec<usize> = (1..=5).map(|k| second.quotient_dim(k, 5).unwrap()).collect();
        assert_eq!(dims, again);
        // a reloaded cell re-serializes to identical bytes
        let cell = second.cell(3, 5).unwrap();
        write_cell(dir.path(), &cell).unwrap();
        assert_eq!(fs::read(&path).unwrap(), bytes);
    }

    #[test]
    fn rational_cells_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let e = cached_engine::<Rational>(dir.path(), 3);
        let d = e.quotient_dim(3, 4).unwrap();
        let reread = cached_engine::<Rational>(dir.path(), 3);
        assert_eq!(reread.quotient_dim(3, 4).unwrap(), d);
    }

    #[test]
    fn corruption_is_reported_with_path() {
        let dir = tempfile::tempdir().unwrap();
        cached_engine::<Fp31>(dir.path(), 2).cell(2, 4).unwrap();
        let path = cell_path(dir.path(), 2, 2, 4, Fp31::kind());
        let mut bytes = fs::read(&path).unwrap();
        bytes.truncate(bytes.len() - 3);
        fs::write(&path, &bytes).unwrap();
        match cached_engine::<Fp31>(dir.path(), 2).cell(2, 4) {
            Err(Error::CacheCorrupt { path: p, .. }) => assert_eq!(p, path),
            other => panic!("expected corruption error, got {other:?}"),
        }
    }
}
