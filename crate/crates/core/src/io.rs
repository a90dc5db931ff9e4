//! On-disk format for MMSets.
//!
//! ```text
//! magic    8 bytes  "MMGEOSET"
//! hlen     u32 LE   length of the JSON header
//! header   hlen bytes of JSON (see `Header`)
//! points   points * coord_len bytes, one coordinate per byte
//! symps    per symp: u16 LE rank r, r * coord_len bytes of RREF basis rows,
//!          r * r bytes of the upper-triangular Gram matrix in those coordinates
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gfq::{Field, FieldSpec};
use crate::linproj::{ProjPoint, Subspace};
use crate::mmset::{MMSet, Symp};
use crate::quadform::QuadraticForm;

pub const MAGIC: &[u8; 8] = b"MMGEOSET";
pub const FILE_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub schema_version: u32,
    pub family: String,
    pub field: FieldSpec,
    pub d: usize,
    /// Projective dimension of the ambient space.
    pub n: usize,
    pub coord_len: usize,
    pub points: usize,
    pub symps: usize,
}

pub fn write_set<W: Write>(set: &MMSet, w: W) -> Result<()> {
    let mut w = BufWriter::new(w);
    let header = Header {
        schema_version: FILE_SCHEMA_VERSION,
        family: set.family().to_string(),
        field: set.field().spec(),
        d: set.d(),
        n: set.ambient_dim(),
        coord_len: set.n(),
        points: set.len(),
        symps: set.symps().len(),
    };
    let json = serde_json::to_vec(&header)?;
    w.write_all(MAGIC)?;
    w.write_all(&(json.len() as u32).to_le_bytes())?;
    w.write_all(&json)?;
    for p in set.points() {
        w.write_all(p.coords())?;
    }
    for s in set.symps() {
        let r = s.span().rank();
        w.write_all(&(r as u16).to_le_bytes())?;
        w.write_all(s.span().raw_rows())?;
        w.write_all(s.form().gram())?;
    }
    w.flush()?;
    Ok(())
}

fn read_exact<R: Read>(r: &mut R, len: usize, what: &str) -> Result<Vec<u8>> {
    let mut buf = vec![0; len];
    r.read_exact(&mut buf).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => Error::Format(format!("file ends inside {what}")),
        _ => Error::Io(e),
    })?;
    Ok(buf)
}

pub fn read_header<R: Read>(r: &mut R) -> Result<Header> {
    if read_exact(r, MAGIC.len(), "magic")? != MAGIC {
        return Err(Error::Format("not an MMSet file".into()));
    }
    let hlen = u32::from_le_bytes(read_exact(r, 4, "header length")?.try_into().unwrap()) as usize;
    let header: Header = serde_json::from_slice(&read_exact(r, hlen, "header")?)?;
    if header.schema_version != FILE_SCHEMA_VERSION {
        return Err(Error::Format(format!("unsupported schema version {}", header.schema_version)));
    }
    Ok(header)
}

pub fn read_set<R: Read>(r: R) -> Result<MMSet> {
    let mut r = BufReader::new(r);
    let h = read_header(&mut r)?;
    let field = Field::from_spec(&h.field)?;
    let n = h.coord_len;
    if n == 0 || h.n + 1 != n {
        return Err(Error::Format(format!("ambient dimension {} does not match {} coordinates", h.n, n)));
    }
    let body = read_exact(&mut r, h.points * n, "point list")?;
    let points = body.chunks(n).map(|c| ProjPoint::from_normalized(c.to_vec())).collect();
    let mut symps = Vec::with_capacity(h.symps);
    for _ in 0..h.symps {
        let rank = u16::from_le_bytes(read_exact(&mut r, 2, "symp rank")?.try_into().unwrap()) as usize;
        let rows = read_exact(&mut r, rank * n, "symp basis")?;
        let gram = read_exact(&mut r, rank * rank, "symp form")?;
        if rows.iter().chain(&gram).any(|&c| c as usize >= field.q()) {
            return Err(Error::Format("symp entry outside the field".into()));
        }
        let span = Subspace::from_rref_rows(&field, n, rows)?;
        symps.push(Symp::new(span, QuadraticForm::new(field, rank, gram)?)?);
    }
    let mut rest = Vec::new();
    r.read_to_end(&mut rest)?;
    if !rest.is_empty() {
        return Err(Error::Format(format!("{} trailing bytes", rest.len())));
    }
    MMSet::new(h.family, field, n, h.d, points, symps)
}

pub fn save(set: &MMSet, path: &Path) -> Result<()> {
    write_set(set, File::create(path)?)
}

pub fn load(path: &Path) -> Result<MMSet> {
    read_set(File::open(path)?)
}
