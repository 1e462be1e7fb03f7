//! `TGDS` dataset files, little-endian:
//!
//! ```text
//! "TGDS" | u32 version | u64 graph count | u32 num_classes | u32 feature width
//! per graph: u64 nodes | f64 features (row-major) | u64 edges | (u64, u64)* | u64 label
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Cursor, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};

use super::{GraphDataset, GraphError, Result, TrajectoryGraph};
use crate::chaincode::Profile;
use crate::numerics::Matrix;
use crate::Scalar;

pub const DATASET_MAGIC: [u8; 4] = *b"TGDS";
pub const DATASET_VERSION: u32 = 1;

pub fn write_dataset<T: Scalar, W: Write>(ds: &GraphDataset<T>, mut w: W) -> Result<()> {
    w.write_all(&DATASET_MAGIC)?;
    w.write_u32::<LittleEndian>(DATASET_VERSION)?;
    w.write_u64::<LittleEndian>(ds.len() as u64)?;
    w.write_u32::<LittleEndian>(ds.num_classes() as u32)?;
    w.write_u32::<LittleEndian>(ds.feature_width().unwrap_or(0) as u32)?;
    for g in ds.graphs() {
        w.write_u64::<LittleEndian>(g.num_nodes() as u64)?;
        for &v in g.node_features().as_slice() {
            w.write_f64::<LittleEndian>(v.to_f64_lossy())?;
        }
        w.write_u64::<LittleEndian>(g.edges().len() as u64)?;
        for &(a, b) in g.edges() {
            w.write_u64::<LittleEndian>(a as u64)?;
            w.write_u64::<LittleEndian>(b as u64)?;
        }
        w.write_u64::<LittleEndian>(g.label() as u64)?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_dataset<T: Scalar>(ds: &GraphDataset<T>, path: impl AsRef<Path>) -> Result<()> {
    write_dataset(ds, BufWriter::new(File::create(path)?))
}

fn eof_is_corrupt(e: std::io::Error) -> GraphError {
    if e.kind() == std::io::ErrorKind::UnexpectedEof {
        GraphError::CorruptRecord("unexpected end of file".into())
    } else {
        GraphError::Io(e)
    }
}

fn read_count(cur: &mut Cursor<&[u8]>, item_bytes: u64, what: &str) -> Result<usize> {
    let n = cur.read_u64::<LittleEndian>().map_err(eof_is_corrupt)?;
    let remaining = cur.get_ref().len() as u64 - cur.position();
    if n.checked_mul(item_bytes)
        .is_none_or(|need| need > remaining)
    {
        return Err(GraphError::CorruptRecord(format!(
            "{what} count {n} exceeds remaining {remaining} bytes"
        )));
    }
    Ok(n as usize)
}

/// Parses a complete dataset file image. The profile is inferred from the
/// node count when every graph has the size one profile produces.
pub fn read_dataset<T: Scalar>(bytes: &[u8]) -> Result<GraphDataset<T>> {
    let mut cur = Cursor::new(bytes);
    let mut magic = [0u8; 4];
    cur.read_exact(&mut magic).map_err(eof_is_corrupt)?;
    if magic != DATASET_MAGIC {
        return Err(GraphError::BadMagic(magic));
    }
    let version = cur.read_u32::<LittleEndian>().map_err(eof_is_corrupt)?;
    if version != DATASET_VERSION {
        return Err(GraphError::FormatVersionMismatch {
            found: version,
            expected: DATASET_VERSION,
        });
    }
    let count = cur.read_u64::<LittleEndian>().map_err(eof_is_corrupt)?;
    let num_classes = cur.read_u32::<LittleEndian>().map_err(eof_is_corrupt)? as usize;
    let width = cur.read_u32::<LittleEndian>().map_err(eof_is_corrupt)? as usize;

    let mut graphs = Vec::new();
    for _ in 0..count {
        let nodes = read_count(&mut cur, (width as u64).max(1) * 8, "node")?;
        let mut data = Vec::with_capacity(nodes * width);
        for _ in 0..nodes * width {
            data.push(T::lit(
                cur.read_f64::<LittleEndian>().map_err(eof_is_corrupt)?,
            ));
        }
        let n_edges = read_count(&mut cur, 16, "edge")?;
        let mut edges = Vec::with_capacity(n_edges);
        for _ in 0..n_edges {
            let a = cur.read_u64::<LittleEndian>().map_err(eof_is_corrupt)? as usize;
            let b = cur.read_u64::<LittleEndian>().map_err(eof_is_corrupt)? as usize;
            edges.push((a, b));
        }
        let label = cur.read_u64::<LittleEndian>().map_err(eof_is_corrupt)? as usize;
        let features = Matrix::from_vec(nodes, width, data).expect("sized above");
        let graph = TrajectoryGraph::new(features, edges, label)
            .map_err(|e| GraphError::CorruptRecord(e.to_string()))?;
        graphs.push(graph);
    }
    if cur.position() != bytes.len() as u64 {
        return Err(GraphError::CorruptRecord(
            "trailing bytes after last graph".into(),
        ));
    }

    let mut sizes = graphs.iter().map(TrajectoryGraph::num_nodes);
    let profile = sizes.next().and_then(|first| {
        sizes
            .all(|n| n == first)
            .then(|| Profile::from_node_count(first))
            .flatten()
    });
    GraphDataset::new(graphs, num_classes, profile)
        .map_err(|e| GraphError::CorruptRecord(e.to_string()))
}

pub fn load_dataset<T: Scalar>(path: impl AsRef<Path>) -> Result<GraphDataset<T>> {
    let mut bytes = Vec::new();
    BufReader::new(File::open(path)?).read_to_end(&mut bytes)?;
    read_dataset(&bytes)
}
