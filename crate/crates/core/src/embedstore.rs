//! Binary container for frozen per-layer representations.
//!
//! Layout (all integers and floats little-endian):
//!
//! ```text
//! offset  size        field
//! 0       4           magic "INSP"
//! 4       4   u32     format version (1)
//! 8       4   u32     model id byte length M
//! 12      M           model id, UTF-8
//! ..      4   u32     task id byte length T
//! ..      T           task id, UTF-8
//! ..      4   u32     first stored layer (1 = first block output)
//! ..      4   u32     layer count L
//! ..      4   u32     hidden size D
//! ..      8   u64     sample count N
//! then N records of 8 + 4*L*D bytes:
//!         8   u64     example id
//!         4*L*D f32   layer 0 vector, layer 1 vector, ... (layer-major)
//! ```
//!
//! Records have a fixed size, so one layer can be read with a seek per
//! record without touching the others.

use alloc::string::String;
use alloc::vec::Vec;

pub const MAGIC: [u8; 4] = *b"INSP";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EmbedError {
    #[error("not an embedding file (bad magic)")]
    BadMagic,
    #[error("unsupported format version {0}")]
    VersionMismatch(u32),
    #[error("file is truncated")]
    TruncatedFile,
    #[error("id string is not UTF-8")]
    InvalidUtf8,
    #[error("sample {sample} layer {layer} holds a non-finite value")]
    NonFinite { sample: u64, layer: usize },
    #[error("duplicate sample id {0}")]
    DuplicateId(u64),
    #[error("shape mismatch: {0}")]
    Shape(&'static str),
    #[error("layer {layer} out of range 0..{layers}")]
    LayerOutOfRange { layer: usize, layers: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Header {
    pub model_id: String,
    pub task_id: String,
    pub first_layer: u32,
    pub layers: u32,
    pub dim: u32,
    pub count: u64,
}

impl Header {
    pub fn encoded_len(&self) -> usize {
        4 + 4 + 4 + self.model_id.len() + 4 + self.task_id.len() + 4 + 4 + 4 + 8
    }

    pub fn record_len(&self) -> usize {
        8 + 4 * self.layers as usize * self.dim as usize
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.encoded_len());
        out.extend_from_slice(&MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        for s in [&self.model_id, &self.task_id] {
            out.extend_from_slice(&(s.len() as u32).to_le_bytes());
            out.extend_from_slice(s.as_bytes());
        }
        out.extend_from_slice(&self.first_layer.to_le_bytes());
        out.extend_from_slice(&self.layers.to_le_bytes());
        out.extend_from_slice(&self.dim.to_le_bytes());
        out.extend_from_slice(&self.count.to_le_bytes());
        out
    }

    /// Decodes a header from the start of `bytes`; returns it with its
    /// encoded length.
    pub fn decode(bytes: &[u8]) -> Result<(Header, usize), EmbedError> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4)? != MAGIC {
            return Err(EmbedError::BadMagic);
        }
        let version = r.u32()?;
        if version != VERSION {
            return Err(EmbedError::VersionMismatch(version));
        }
        let model_id = r.string()?;
        let task_id = r.string()?;
        let header = Header {
            model_id,
            task_id,
            first_layer: r.u32()?,
            layers: r.u32()?,
            dim: r.u32()?,
            count: r.u64()?,
        };
        if header.layers == 0 || header.dim == 0 {
            return Err(EmbedError::Shape("layer count and hidden size must be positive"));
        }
        Ok((header, r.pos))
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], EmbedError> {
        let end = self.pos.checked_add(n).ok_or(EmbedError::TruncatedFile)?;
        let out = self.bytes.get(self.pos..end).ok_or(EmbedError::TruncatedFile)?;
        self.pos = end;
        Ok(out)
    }

    fn u32(&mut self) -> Result<u32, EmbedError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn u64(&mut self) -> Result<u64, EmbedError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn string(&mut self) -> Result<String, EmbedError> {
        let len = self.u32()? as usize;
        let raw = self.take(len)?;
        core::str::from_utf8(raw).map(String::from).map_err(|_| EmbedError::InvalidUtf8)
    }
}

/// Row-major `rows x cols` matrix of `f32`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f32>,
}

impl Matrix {
    pub fn row(&self, i: usize) -> &[f32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
}

/// All layers of all samples for one (model, task) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingSet {
    pub model_id: String,
    pub task_id: String,
    pub first_layer: u32,
    pub layers: usize,
    pub dim: usize,
    pub ids: Vec<u64>,
    /// `ids.len() * layers * dim` values, sample-major then layer-major.
    pub values: Vec<f32>,
}

impl EmbeddingSet {
    pub fn new(model_id: &str, task_id: &str, layers: usize, dim: usize) -> Self {
        EmbeddingSet {
            model_id: model_id.into(),
            task_id: task_id.into(),
            first_layer: 1,
            layers,
            dim,
            ids: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Appends one sample; `vectors` holds `layers * dim` values.
    pub fn push(&mut self, id: u64, vectors: &[f32]) -> Result<(), EmbedError> {
        if vectors.len() != self.layers * self.dim {
            return Err(EmbedError::Shape("sample vector length != layers * dim"));
        }
        self.ids.push(id);
        self.values.extend_from_slice(vectors);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn header(&self) -> Header {
        Header {
            model_id: self.model_id.clone(),
            task_id: self.task_id.clone(),
            first_layer: self.first_layer,
            layers: self.layers as u32,
            dim: self.dim as u32,
            count: self.ids.len() as u64,
        }
    }

    /// Vector of sample `i` at layer index `layer` (0-based).
    pub fn vector(&self, i: usize, layer: usize) -> &[f32] {
        let start = (i * self.layers + layer) * self.dim;
        &self.values[start..start + self.dim]
    }

    /// The `n x dim` matrix of one layer, rows in sample order.
    pub fn layer(&self, layer: usize) -> Result<Matrix, EmbedError> {
        if layer >= self.layers {
            return Err(EmbedError::LayerOutOfRange { layer, layers: self.layers });
        }
        let mut data = Vec::with_capacity(self.len() * self.dim);
        for i in 0..self.len() {
            data.extend_from_slice(self.vector(i, layer));
        }
        Ok(Matrix { rows: self.len(), cols: self.dim, data })
    }

    /// Checks shape, finiteness and id uniqueness.
    pub fn validate(&self) -> Result<(), EmbedError> {
        if self.layers == 0 || self.dim == 0 {
            return Err(EmbedError::Shape("layer count and hidden size must be positive"));
        }
        if self.values.len() != self.ids.len() * self.layers * self.dim {
            return Err(EmbedError::Shape("value count != samples * layers * dim"));
        }
        let mut sorted = self.ids.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(EmbedError::DuplicateId(w[0]));
        }
        for i in 0..self.len() {
            for layer in 0..self.layers {
                if self.vector(i, layer).iter().any(|v| !v.is_finite()) {
                    return Err(EmbedError::NonFinite { sample: self.ids[i], layer });
                }
            }
        }
        Ok(())
    }

    /// Encodes one record (id plus all layers of sample `i`).
    pub fn encode_record(&self, i: usize, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.ids[i].to_le_bytes());
        let start = i * self.layers * self.dim;
        for v in &self.values[start..start + self.layers * self.dim] {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }

    /// Full byte encoding. Fails on invalid contents.
    pub fn encode(&self) -> Result<Vec<u8>, EmbedError> {
        self.validate()?;
        let header = self.header();
        let mut out = header.encode();
        out.reserve(header.record_len() * self.len());
        for i in 0..self.len() {
            self.encode_record(i, &mut out);
        }
        Ok(out)
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, EmbedError> {
        let (header, offset) = Header::decode(bytes)?;
        let record = header.record_len();
        let count = usize::try_from(header.count).map_err(|_| EmbedError::TruncatedFile)?;
        let needed = count.checked_mul(record).and_then(|b| b.checked_add(offset)).ok_or(EmbedError::TruncatedFile)?;
        if bytes.len() < needed {
            return Err(EmbedError::TruncatedFile);
        }
        let mut set = EmbeddingSet {
            model_id: header.model_id,
            task_id: header.task_id,
            first_layer: header.first_layer,
            layers: header.layers as usize,
            dim: header.dim as usize,
            ids: Vec::with_capacity(count),
            values: Vec::with_capacity(count * (record - 8) / 4),
        };
        for rec in bytes[offset..needed].chunks_exact(record) {
            set.ids.push(u64::from_le_bytes(rec[..8].try_into().expect("8 bytes")));
            set.values.extend(decode_f32s(&rec[8..]));
        }
        Ok(set)
    }
}

/// Little-endian `f32` values from a byte slice whose length is a multiple
/// of four.
pub fn decode_f32s(bytes: &[u8]) -> impl Iterator<Item = f32> + '_ {
    bytes.chunks_exact(4).map(|c| f32::from_le_bytes(c.try_into().expect("4 bytes")))
}
