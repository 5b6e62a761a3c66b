//! Embedding files on disk. See `docs/embedstore-format.md` for the byte
//! layout.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Read, Seek, SeekFrom, Write};
use std::path::Path;

use inspect_core::embedstore::{decode_f32s, EmbedError, EmbeddingSet, Header, Matrix, MAGIC};

use crate::{Error, Result};

fn embed_err(path: &Path) -> impl FnOnce(EmbedError) -> Error + '_ {
    move |source| Error::Embed { path: path.to_path_buf(), source }
}

fn read_err(path: &Path, e: std::io::Error) -> Error {
    if e.kind() == std::io::ErrorKind::UnexpectedEof {
        Error::Embed { path: path.to_path_buf(), source: EmbedError::TruncatedFile }
    } else {
        Error::Io { path: path.to_path_buf(), source: e }
    }
}

/// Writes through a temporary sibling file and renames it into place.
pub fn write_embeddings(path: &Path, set: &EmbeddingSet) -> Result<()> {
    set.validate().map_err(embed_err(path))?;
    let tmp = path.with_extension("tmp");
    let file = File::create(&tmp).map_err(Error::io(&tmp))?;
    let mut w = BufWriter::new(file);
    let header = set.header();
    w.write_all(&header.encode()).map_err(Error::io(&tmp))?;
    let mut record = Vec::with_capacity(header.record_len());
    for i in 0..set.len() {
        record.clear();
        set.encode_record(i, &mut record);
        w.write_all(&record).map_err(Error::io(&tmp))?;
    }
    w.flush().map_err(Error::io(&tmp))?;
    drop(w);
    fs::rename(&tmp, path).map_err(Error::io(path))
}

fn read_header_from(r: &mut impl Read, path: &Path) -> Result<(Header, usize)> {
    // Fixed part up to and including the model id length.
    let mut buf = vec![0u8; 12];
    r.read_exact(&mut buf).map_err(|e| read_err(path, e))?;
    if buf[..4] != MAGIC {
        return Err(embed_err(path)(EmbedError::BadMagic));
    }
    let model_len = u32::from_le_bytes(buf[8..12].try_into().expect("4 bytes")) as usize;
    let start = buf.len();
    buf.resize(start + model_len + 4, 0);
    r.read_exact(&mut buf[start..]).map_err(|e| read_err(path, e))?;
    let task_len = u32::from_le_bytes(buf[buf.len() - 4..].try_into().expect("4 bytes")) as usize;
    let start = buf.len();
    buf.resize(start + task_len + 20, 0);
    r.read_exact(&mut buf[start..]).map_err(|e| read_err(path, e))?;
    Header::decode(&buf).map_err(embed_err(path))
}

pub fn read_header(path: &Path) -> Result<Header> {
    let mut r = BufReader::new(File::open(path).map_err(Error::io(path))?);
    Ok(read_header_from(&mut r, path)?.0)
}

pub fn read_embeddings(path: &Path) -> Result<EmbeddingSet> {
    let bytes = fs::read(path).map_err(Error::io(path))?;
    EmbeddingSet::decode(&bytes).map_err(embed_err(path))
}

/// Reads the ids and one layer (0-based index) without loading the rest of
/// the file.
pub fn read_layer(path: &Path, layer: usize) -> Result<(Header, Vec<u64>, Matrix)> {
    let mut r = BufReader::new(File::open(path).map_err(Error::io(path))?);
    let (header, offset) = read_header_from(&mut r, path)?;
    let (layers, dim) = (header.layers as usize, header.dim as usize);
    if layer >= layers {
        return Err(embed_err(path)(EmbedError::LayerOutOfRange { layer, layers }));
    }
    let n = usize::try_from(header.count).map_err(|_| embed_err(path)(EmbedError::TruncatedFile))?;
    let record = header.record_len() as u64;
    let mut ids = Vec::with_capacity(n);
    let mut data = Vec::with_capacity(n * dim);
    let mut id = [0u8; 8];
    let mut vec = vec![0u8; 4 * dim];
    for i in 0..n as u64 {
        let base = offset as u64 + i * record;
        r.seek(SeekFrom::Start(base)).map_err(Error::io(path))?;
        r.read_exact(&mut id).map_err(|e| read_err(path, e))?;
        r.seek_relative((4 * layer * dim) as i64).map_err(Error::io(path))?;
        r.read_exact(&mut vec).map_err(|e| read_err(path, e))?;
        ids.push(u64::from_le_bytes(id));
        data.extend(decode_f32s(&vec));
    }
    if let Some((pos, _)) = data.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(embed_err(path)(EmbedError::NonFinite { sample: ids[pos / dim], layer }));
    }
    Ok((header, ids, Matrix { rows: n, cols: dim, data }))
}
