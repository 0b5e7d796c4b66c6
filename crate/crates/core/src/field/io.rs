//! Flat little-endian binary layout: `n, m_z, m_t` as `u64`, then
//! `extent_z, extent_t` as `f64`, then interleaved `re, im` pairs in index order.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use super::{GridSpec, SampledField};
use crate::error::{Error, Result};

pub fn encode(field: &SampledField, out: &mut impl Write) -> std::io::Result<()> {
    let s = field.spec();
    for v in [s.n as u64, s.m_z as u64, s.m_t as u64] {
        out.write_all(&v.to_le_bytes())?;
    }
    for v in [s.extent_z, s.extent_t] {
        out.write_all(&v.to_le_bytes())?;
    }
    for v in field.values() {
        out.write_all(&v.re.to_le_bytes())?;
        out.write_all(&v.im.to_le_bytes())?;
    }
    Ok(())
}

pub fn decode(input: &mut impl Read) -> Result<SampledField> {
    let mut word = [0u8; 8];
    let mut next = |input: &mut dyn Read| -> Result<[u8; 8]> {
        input
            .read_exact(&mut word)
            .map_err(|e| Error::Format(format!("truncated field data: {e}")))?;
        Ok(word)
    };
    let mut ints = [0usize; 3];
    for v in &mut ints {
        let raw = u64::from_le_bytes(next(input)?);
        *v = usize::try_from(raw).map_err(|_| Error::Format(format!("header value {raw} too large")))?;
    }
    let ez = f64::from_le_bytes(next(input)?);
    let et = f64::from_le_bytes(next(input)?);
    let spec = GridSpec::new(ints[0], ez, et, ints[1], ints[2])
        .map_err(|e| Error::Format(format!("bad header: {e}")))?;
    let len = spec.len();
    let mut values = Vec::with_capacity(len);
    for _ in 0..len {
        let re = f64::from_le_bytes(next(input)?);
        let im = f64::from_le_bytes(next(input)?);
        values.push(Complex64::new(re, im));
    }
    let mut extra = [0u8; 1];
    if input.read(&mut extra).map_err(|e| Error::Format(e.to_string()))? != 0 {
        return Err(Error::Format("trailing bytes after field data".into()));
    }
    SampledField::from_values(spec, values)
}

pub fn write_field(field: &SampledField, path: &Path) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut w = BufWriter::new(File::create(path).map_err(io)?);
    encode(field, &mut w).map_err(io)?;
    w.flush().map_err(io)
}

pub fn read_field(path: &Path) -> Result<SampledField> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    decode(&mut BufReader::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_bytes() {
        let spec = GridSpec::new(1, 2.0, 3.0, 4, 6).unwrap();
        let f = SampledField::from_fn(spec, |x| Complex64::new(x[0] + x[2], x[1]));
        let mut buf = Vec::new();
        encode(&f, &mut buf).unwrap();
        assert_eq!(buf.len(), 40 + 16 * spec.len());
        assert_eq!(&buf[..8], &1u64.to_le_bytes());
        assert_eq!(decode(&mut buf.as_slice()).unwrap(), f);
        assert!(decode(&mut &buf[..buf.len() - 1]).is_err());
        let mut longer = buf.clone();
        longer.push(0);
        assert!(decode(&mut longer.as_slice()).is_err());
    }
}
