//! Binary graph cache.
//!
//! Layout (little-endian): magic "GPMC", u32 version, u64 vertex_count,
//! u64 edge_count, u64 triangle_count, offsets (u64 x vertex_count+1),
//! neighbors (u32 x 2*edge_count).

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const MAGIC: &[u8; 4] = b"GPMC";
pub const VERSION: u32 = 1;

pub fn save_cache(graph: &Graph, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(graph.vertex_count() as u64).to_le_bytes())?;
    w.write_all(&graph.edge_count().to_le_bytes())?;
    w.write_all(&graph.triangle_count().to_le_bytes())?;
    for &off in graph.offsets() {
        w.write_all(&(off as u64).to_le_bytes())?;
    }
    for &v in graph.neighbor_array() {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn load_cache(path: &Path) -> Result<Graph> {
    let mut r = BufReader::new(File::open(path)?);

    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Format(format!(
            "bad magic {:?}, expected {:?}",
            magic, MAGIC
        )));
    }
    let version = read_u32(&mut r)?;
    if version != VERSION {
        return Err(Error::Format(format!(
            "unsupported version {version}, expected {VERSION}"
        )));
    }

    let vertex_count = read_u64(&mut r)? as usize;
    let edge_count = read_u64(&mut r)?;
    let triangle_count = read_u64(&mut r)?;

    let mut offsets = Vec::with_capacity(vertex_count + 1);
    for _ in 0..=vertex_count {
        offsets.push(read_u64(&mut r)? as usize);
    }
    if offsets.first() != Some(&0) || offsets[vertex_count] as u64 != 2 * edge_count {
        return Err(Error::Format("inconsistent offset array".into()));
    }

    let mut neighbors = Vec::with_capacity(2 * edge_count as usize);
    for _ in 0..2 * edge_count {
        neighbors.push(read_u32(&mut r)?);
    }

    Ok(Graph::from_csr_parts(
        vertex_count,
        edge_count,
        triangle_count,
        offsets,
        neighbors,
    ))
}

/// True when the file begins with the cache magic; used to auto-detect
/// cache files versus edge-list text.
pub fn is_cache_file(path: &Path) -> bool {
    let mut magic = [0u8; 4];
    match File::open(path) {
        Ok(mut f) => f.read_exact(&mut magic).is_ok() && &magic == MAGIC,
        Err(_) => false,
    }
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf)?;
    Ok(u32::from_le_bytes(buf))
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    Ok(u64::from_le_bytes(buf))
}
