//! `EVCK` checkpoint: little-endian header then real-space velocity samples.
//!
//! ```text
//! offset  size        field
//! 0       4           magic "EVCK"
//! 4       4           version (u32), currently 1
//! 8       4           n (u32)
//! 12      8           alpha (f64)
//! 20      8           t (f64)
//! 28      24·n³       u_x, u_y, u_z samples (f64), component-major, x fastest
//! ```

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::{RealField, RealVectorField};
use crate::grid::Grid;

pub const MAGIC: &[u8; 4] = b"EVCK";
pub const VERSION: u32 = 1;
const HEADER_LEN: usize = 28;

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub n: usize,
    pub alpha: f64,
    pub t: f64,
    pub velocity: RealVectorField,
}

pub fn encode(ck: &Checkpoint) -> Vec<u8> {
    let n3 = ck.n * ck.n * ck.n;
    let mut out = Vec::with_capacity(HEADER_LEN + 24 * n3);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(ck.n as u32).to_le_bytes());
    out.extend_from_slice(&ck.alpha.to_le_bytes());
    out.extend_from_slice(&ck.t.to_le_bytes());
    for c in &ck.velocity.components {
        for v in c.as_slice() {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

/// Decodes a checkpoint, optionally insisting on a grid size.
pub fn decode(bytes: &[u8], expected_n: Option<usize>, path: &Path) -> Result<Checkpoint> {
    let fail = |reason: String| Error::Checkpoint {
        path: path.to_path_buf(),
        reason,
    };
    if bytes.len() < HEADER_LEN {
        return Err(fail(format!("truncated header ({} bytes)", bytes.len())));
    }
    if &bytes[0..4] != MAGIC {
        return Err(fail(format!("bad magic {:?}", &bytes[0..4])));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().expect("4 bytes"));
    let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().expect("8 bytes"));
    let version = u32_at(4);
    if version != VERSION {
        return Err(fail(format!("unsupported version {version}, expected {VERSION}")));
    }
    let n = u32_at(8) as usize;
    if let Some(want) = expected_n {
        if n != want {
            return Err(fail(format!("grid size {n} does not match expected {want}")));
        }
    }
    let grid = Grid::new(n).map_err(|e| fail(e.to_string()))?;
    let n3 = grid.len();
    let expect_len = HEADER_LEN + 24 * n3;
    if bytes.len() != expect_len {
        return Err(fail(format!(
            "payload is {} bytes, expected {expect_len} for n = {n}",
            bytes.len()
        )));
    }
    let alpha = f64_at(12);
    let t = f64_at(20);
    let comp = |d: usize| -> Result<RealField> {
        let base = HEADER_LEN + 8 * n3 * d;
        let data = (0..n3).map(|i| f64_at(base + 8 * i)).collect();
        RealField::from_vec(&grid, data)
    };
    Ok(Checkpoint {
        n,
        alpha,
        t,
        velocity: RealVectorField {
            components: [comp(0)?, comp(1)?, comp(2)?],
        },
    })
}

pub fn write_checkpoint(path: &Path, ck: &Checkpoint) -> Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(&encode(ck))?;
    f.sync_all()?;
    Ok(())
}

pub fn read_checkpoint(path: &Path, expected_n: Option<usize>) -> Result<Checkpoint> {
    let bytes = fs::read(path)?;
    decode(&bytes, expected_n, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::ic::{generate_ic, InitialConditionSpec};
    use crate::spectral::inverse_vector;

    fn sample(n: usize) -> Checkpoint {
        let g = Grid::new(n).unwrap();
        let u = generate_ic(&InitialConditionSpec::TaylorGreen, &g).unwrap();
        Checkpoint {
            n,
            alpha: 0.1,
            t: 0.25,
            velocity: inverse_vector(&u, &g).unwrap(),
        }
    }

    #[test]
    fn round_trip_is_bitwise() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("tg.evck");
        let ck = sample(16);
        write_checkpoint(&path, &ck).unwrap();
        let back = read_checkpoint(&path, Some(16)).unwrap();
        assert_eq!(back.alpha.to_bits(), ck.alpha.to_bits());
        for (a, b) in back.velocity.components.iter().zip(&ck.velocity.components) {
            assert!(a.as_slice().iter().zip(b.as_slice()).all(|(x, y)| x.to_bits() == y.to_bits()));
        }
        let bytes = std::fs::read(&path).unwrap();
        assert_eq!(&bytes[0..4], b"EVCK");
        assert_eq!(bytes.len(), 28 + 24 * 16 * 16 * 16);
    }

    #[test]
    fn truncated_and_mismatched_files_are_rejected() {
        let p = Path::new("mem");
        let bytes = encode(&sample(8));
        assert!(decode(&bytes[..bytes.len() - 1], None, p).is_err());
        assert!(decode(&bytes[..10], None, p).is_err());
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(decode(&bad, None, p).is_err());
        let mut v2 = bytes.clone();
        v2[4] = 2;
        assert!(decode(&v2, None, p).is_err());
        let err = decode(&encode(&sample(16)), Some(32), p).unwrap_err();
        assert!(err.to_string().contains("does not match"));
    }
}
