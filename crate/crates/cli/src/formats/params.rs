//! Network parameter container.
//!
//! Layout: magic `FNNP`, u32 version, u32 header length, a JSON header
//! (network configuration, config hash, seed), u32 tensor count, then per
//! tensor a u32-prefixed UTF-8 name, u32 rank, u64 per dimension and the
//! values as row-major little-endian f64.

use fakenews_core::linalg::Matrix;
use fakenews_core::neural::{NetworkConfig, NetworkParams};
use serde::{Deserialize, Serialize};

use super::ArtifactMeta;

pub const MAGIC: &[u8; 4] = b"FNNP";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsHeader {
    #[serde(flatten)]
    pub meta: ArtifactMeta,
    pub network: NetworkConfig,
}

pub fn encode(header: &ParamsHeader, params: &NetworkParams) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    let json = serde_json::to_vec(header).expect("header serializes");
    out.extend_from_slice(&(json.len() as u32).to_le_bytes());
    out.extend_from_slice(&json);
    let tensors = params.tensors();
    out.extend_from_slice(&(tensors.len() as u32).to_le_bytes());
    for (name, m) in tensors {
        out.extend_from_slice(&(name.len() as u32).to_le_bytes());
        out.extend_from_slice(name.as_bytes());
        out.extend_from_slice(&2u32.to_le_bytes());
        out.extend_from_slice(&(m.rows() as u64).to_le_bytes());
        out.extend_from_slice(&(m.cols() as u64).to_le_bytes());
        for v in m.as_slice() {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], String> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len()).ok_or("truncated file")?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32, String> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn len(&mut self) -> Result<usize, String> {
        let v = u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes"));
        usize::try_from(v).map_err(|_| "dimension too large".into())
    }
}

pub fn decode(bytes: &[u8]) -> Result<(ParamsHeader, NetworkParams), String> {
    let mut c = Cursor { bytes, pos: 0 };
    if c.take(4)? != MAGIC {
        return Err("not a parameter file".into());
    }
    let version = c.u32()?;
    if version != VERSION {
        return Err(format!("unsupported version {version}"));
    }
    let hlen = c.u32()? as usize;
    let header: ParamsHeader = serde_json::from_slice(c.take(hlen)?).map_err(|e| format!("header: {e}"))?;
    let count = c.u32()?;
    let mut tensors = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let nlen = c.u32()? as usize;
        let name = std::str::from_utf8(c.take(nlen)?).map_err(|_| "tensor name is not UTF-8")?.to_string();
        let rank = c.u32()?;
        if rank != 2 {
            return Err(format!("tensor `{name}` has rank {rank}, expected 2"));
        }
        let (rows, cols) = (c.len()?, c.len()?);
        let n = rows.checked_mul(cols).and_then(|n| n.checked_mul(8)).ok_or("tensor too large")?;
        let data: Vec<f64> = c.take(n)?.chunks_exact(8).map(|b| f64::from_le_bytes(b.try_into().expect("8 bytes"))).collect();
        tensors.push((name, Matrix::from_vec(rows, cols, data).expect("rows·cols values")));
    }
    if c.pos != bytes.len() {
        return Err("trailing bytes after tensors".into());
    }
    let params = NetworkParams::from_tensors(&header.network, &tensors).map_err(|e| e.to_string())?;
    Ok((header, params))
}
