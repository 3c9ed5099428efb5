//! Binary and CSV persistence. All integers and floats are little-endian.
//!
//! `PSF1` (complex 1-D field):
//!
//! ```text
//! b"PSF1"  u32 version=1  f64 start  f64 step  u64 count  u32 components=2
//! then count pairs of f64 (re, im)
//! ```
//!
//! `PSF2` (real phase-space field):
//!
//! ```text
//! b"PSF2"  u32 version=1
//! f64 x_start  f64 x_step  u64 x_count
//! f64 k_start  f64 k_step  u64 k_count
//! u32 kind (0 wigner, 1 smoothed, 2 spectrogram)
//! then x_count * k_count f64 values, x-major (all k for the first x, ...)
//! ```
//!
//! Every writer goes through [`atomic_write`]: data lands in a temporary file
//! next to the target and is renamed over it.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Axis, ComplexField1D};
use crate::phasespace::{FieldKind, PhaseSpaceField, PhaseSpaceGrid};

const VERSION: u32 = 1;

/// Writes `bytes` to `path` via a temporary sibling and a rename.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir)?;
    let name = path
        .file_name()
        .ok_or_else(|| Error::InvalidArgument(format!("not a file path: {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

fn put_axis(buf: &mut Vec<u8>, a: &Axis) {
    buf.extend_from_slice(&a.start().to_le_bytes());
    buf.extend_from_slice(&a.step().to_le_bytes());
    buf.extend_from_slice(&(a.count() as u64).to_le_bytes());
}

struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.pos + n > self.data.len() {
            return Err(Error::Format("unexpected end of file".into()));
        }
        let s = &self.data[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn axis(&mut self) -> Result<Axis> {
        let start = self.f64()?;
        let step = self.f64()?;
        let count = self.u64()?;
        let count = usize::try_from(count).map_err(|_| Error::Format("axis count too large".into()))?;
        Axis::new(start, step, count).map_err(|e| Error::Format(format!("bad axis: {e}")))
    }

    fn header(&mut self, magic: &[u8; 4]) -> Result<()> {
        if self.take(4)? != magic {
            return Err(Error::Format(format!("missing {} magic", String::from_utf8_lossy(magic))));
        }
        let v = self.u32()?;
        if v != VERSION {
            return Err(Error::Format(format!("unsupported version {v}")));
        }
        Ok(())
    }

    fn finish(&self) -> Result<()> {
        if self.pos != self.data.len() {
            return Err(Error::Format("trailing bytes".into()));
        }
        Ok(())
    }
}

pub fn encode_field(f: &ComplexField1D) -> Vec<u8> {
    let mut buf = Vec::with_capacity(36 + 16 * f.values().len());
    buf.extend_from_slice(b"PSF1");
    buf.extend_from_slice(&VERSION.to_le_bytes());
    put_axis(&mut buf, f.axis());
    buf.extend_from_slice(&2u32.to_le_bytes());
    for v in f.values() {
        buf.extend_from_slice(&v.re.to_le_bytes());
        buf.extend_from_slice(&v.im.to_le_bytes());
    }
    buf
}

pub fn decode_field(data: &[u8]) -> Result<ComplexField1D> {
    let mut r = Reader { data, pos: 0 };
    r.header(b"PSF1")?;
    let axis = r.axis()?;
    let comps = r.u32()?;
    if comps != 2 {
        return Err(Error::Format(format!("expected 2 components, found {comps}")));
    }
    let mut values = Vec::with_capacity(axis.count());
    for _ in 0..axis.count() {
        let re = r.f64()?;
        let im = r.f64()?;
        values.push(Complex64::new(re, im));
    }
    r.finish()?;
    ComplexField1D::new(axis, values).map_err(|e| Error::Format(e.to_string()))
}

pub fn write_field(path: &Path, f: &ComplexField1D) -> Result<()> {
    atomic_write(path, &encode_field(f))
}

pub fn read_field(path: &Path) -> Result<ComplexField1D> {
    decode_field(&fs::read(path)?)
}

pub fn encode_phase_space(w: &PhaseSpaceField) -> Vec<u8> {
    let (nx, nk) = w.grid().shape();
    let mut buf = Vec::with_capacity(60 + 8 * nx * nk);
    buf.extend_from_slice(b"PSF2");
    buf.extend_from_slice(&VERSION.to_le_bytes());
    put_axis(&mut buf, w.grid().x_axis());
    put_axis(&mut buf, w.grid().k_axis());
    buf.extend_from_slice(&w.kind().tag().to_le_bytes());
    for v in w.values().iter() {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    buf
}

pub fn decode_phase_space(data: &[u8]) -> Result<PhaseSpaceField> {
    let mut r = Reader { data, pos: 0 };
    r.header(b"PSF2")?;
    let xa = r.axis()?;
    let ka = r.axis()?;
    let tag = r.u32()?;
    let kind = FieldKind::from_tag(tag).ok_or_else(|| Error::Format(format!("unknown kind tag {tag}")))?;
    let n = xa.count() * ka.count();
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        values.push(r.f64()?);
    }
    r.finish()?;
    let arr = Array2::from_shape_vec((xa.count(), ka.count()), values).expect("shape matches count");
    PhaseSpaceField::new(PhaseSpaceGrid::new(xa, ka), arr, kind).map_err(|e| Error::Format(e.to_string()))
}

pub fn write_phase_space(path: &Path, w: &PhaseSpaceField) -> Result<()> {
    atomic_write(path, &encode_phase_space(w))
}

pub fn read_phase_space(path: &Path) -> Result<PhaseSpaceField> {
    decode_phase_space(&fs::read(path)?)
}

/// CSV with a header row; `rows` are written with full round-trip precision.
pub fn write_csv(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<()> {
    let mut s = header.join(",");
    s.push('\n');
    for row in rows {
        let mut first = true;
        for v in row {
            if !first {
                s.push(',');
            }
            first = false;
            write!(s, "{v:?}").unwrap();
        }
        s.push('\n');
    }
    atomic_write(path, s.as_bytes())
}

/// Columns `x, re, im`.
pub fn write_field_csv(path: &Path, f: &ComplexField1D) -> Result<()> {
    write_csv(
        path,
        &["x", "re", "im"],
        f.axis().samples().zip(f.values()).map(|(x, v)| vec![x, v.re, v.im]),
    )
}

/// Columns `<coord>, value` where `coord` is `x` or `k`.
pub fn write_profile_csv(path: &Path, coord: &str, axis: &Axis, values: &[f64]) -> Result<()> {
    write_csv(path, &[coord, "value"], axis.samples().zip(values).map(|(c, &v)| vec![c, v]))
}

/// Parses a CSV written by [`write_csv`]: returns the header and numeric rows.
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Format("empty CSV".into()))?
        .split(',')
        .map(|s| s.trim().to_string())
        .collect::<Vec<_>>();
    let mut rows = Vec::new();
    for (n, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Format(format!("line {}: {e}", n + 2)))?;
        if row.len() != header.len() {
            return Err(Error::Format(format!("line {}: expected {} columns", n + 2, header.len())));
        }
        rows.push(row);
    }
    Ok((header, rows))
}
