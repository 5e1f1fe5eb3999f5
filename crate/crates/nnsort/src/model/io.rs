//! Model file round-trip.
//!
//! Layout: magic `NNS1`, layer-dimension list, then per layer the row-major
//! weights followed by biases, then the normalization bounds. All integers
//! and doubles little-endian; doubles round-trip bit-exactly.

use super::mlp::{MlpModel, PARAM_COUNT};
use std::fs;
use std::path::Path;
use thiserror::Error;

const MAGIC: &[u8; 4] = b"NNS1";

#[derive(Debug, Error)]
pub enum ModelIoError {
    #[error("model io: {0}")]
    Io(#[from] std::io::Error),
    #[error("not a model file (bad magic header)")]
    WrongMagic,
    #[error("unsupported layer dimensions {0:?}")]
    UnsupportedDims(Vec<u32>),
    #[error("model file truncated")]
    Truncated,
    #[error("model file has trailing bytes")]
    TrailingData,
    #[error("model file holds a non-finite parameter")]
    NonFiniteParam,
    #[error("model file holds invalid normalization bounds lo={lo}, hi={hi}")]
    BadBounds { lo: f64, hi: f64 },
}

pub fn save_model(model: &MlpModel, path: &Path) -> Result<(), ModelIoError> {
    let mut bytes = Vec::with_capacity(4 + 4 + 5 * 4 + (PARAM_COUNT + 2) * 8);
    bytes.extend_from_slice(MAGIC);
    let dims = MlpModel::layer_dims();
    bytes.extend_from_slice(&(dims.len() as u32).to_le_bytes());
    for d in dims {
        bytes.extend_from_slice(&(d as u32).to_le_bytes());
    }
    for p in model.params() {
        bytes.extend_from_slice(&p.to_le_bytes());
    }
    let (lo, hi) = model.norm_bounds();
    bytes.extend_from_slice(&lo.to_le_bytes());
    bytes.extend_from_slice(&hi.to_le_bytes());
    fs::write(path, bytes)?;
    Ok(())
}

pub fn load_model(path: &Path) -> Result<MlpModel, ModelIoError> {
    let bytes = fs::read(path)?;
    let mut cursor = Reader { bytes: &bytes, pos: 0 };

    if cursor.take(4)? != MAGIC {
        return Err(ModelIoError::WrongMagic);
    }
    let ndims = cursor.read_u32()? as usize;
    if ndims > 16 {
        return Err(ModelIoError::UnsupportedDims(vec![ndims as u32]));
    }
    let mut dims = Vec::with_capacity(ndims);
    for _ in 0..ndims {
        dims.push(cursor.read_u32()?);
    }
    let expected: Vec<u32> = MlpModel::layer_dims().iter().map(|&d| d as u32).collect();
    if dims != expected {
        return Err(ModelIoError::UnsupportedDims(dims));
    }

    let mut params = Vec::with_capacity(PARAM_COUNT);
    for _ in 0..PARAM_COUNT {
        params.push(cursor.read_f64()?);
    }
    let lo = cursor.read_f64()?;
    let hi = cursor.read_f64()?;
    if cursor.pos != bytes.len() {
        return Err(ModelIoError::TrailingData);
    }
    if params.iter().any(|p| !p.is_finite()) {
        return Err(ModelIoError::NonFiniteParam);
    }
    MlpModel::from_params(params, lo, hi).map_err(|_| ModelIoError::BadBounds { lo, hi })
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], ModelIoError> {
        if self.pos + n > self.bytes.len() {
            return Err(ModelIoError::Truncated);
        }
        let out = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    fn read_u32(&mut self) -> Result<u32, ModelIoError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn read_f64(&mut self) -> Result<f64, ModelIoError> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}
