//! Grid-state serialisation: long-format CSV and a compact binary dump.
//!
//! The binary layout is little-endian f64 throughout: the number of
//! dimensions, the dimensions, the number of parameters, the parameters,
//! then the row-major payload.

use std::io::{self, Read, Write};

/// Format with 15 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.14e}")
}

/// `x,component,value` rows for 1-D fields.
pub fn write_csv_1d<W: Write>(out: &mut W, x: &[f64], fields: &[(&str, &[f64])]) -> io::Result<()> {
    writeln!(out, "x,component,value")?;
    for (name, values) in fields {
        for (xi, v) in x.iter().zip(values.iter()) {
            writeln!(out, "{},{name},{}", fmt_f64(*xi), fmt_f64(*v))?;
        }
    }
    Ok(())
}

/// `x,z,component,value` rows for 2-D fields stored row-major over (z, x).
pub fn write_csv_2d<W: Write>(
    out: &mut W,
    x: &[f64],
    z: &[f64],
    fields: &[(&str, &[f64])],
) -> io::Result<()> {
    writeln!(out, "x,z,component,value")?;
    for (name, values) in fields {
        for (j, zj) in z.iter().enumerate() {
            for (i, xi) in x.iter().enumerate() {
                let v = values[j * x.len() + i];
                writeln!(out, "{},{},{name},{}", fmt_f64(*xi), fmt_f64(*zj), fmt_f64(v))?;
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct BinaryDump {
    pub dims: Vec<usize>,
    pub params: Vec<f64>,
    pub payload: Vec<f64>,
}

#[derive(Debug, thiserror::Error)]
pub enum DumpError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("payload has {got} values, dimensions require {expected}")]
    PayloadSize { expected: usize, got: usize },
    #[error("corrupt header: {0}")]
    Header(&'static str),
}

impl BinaryDump {
    pub fn new(dims: Vec<usize>, params: Vec<f64>, payload: Vec<f64>) -> Result<Self, DumpError> {
        let expected: usize = dims.iter().product();
        if expected != payload.len() {
            return Err(DumpError::PayloadSize { expected, got: payload.len() });
        }
        Ok(Self { dims, params, payload })
    }

    pub fn write<W: Write>(&self, out: &mut W) -> Result<(), DumpError> {
        let header = std::iter::once(self.dims.len() as f64)
            .chain(self.dims.iter().map(|&d| d as f64))
            .chain(std::iter::once(self.params.len() as f64))
            .chain(self.params.iter().copied());
        for v in header.chain(self.payload.iter().copied()) {
            out.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read<R: Read>(input: &mut R) -> Result<Self, DumpError> {
        let mut next = || -> Result<f64, DumpError> {
            let mut buf = [0u8; 8];
            input.read_exact(&mut buf)?;
            Ok(f64::from_le_bytes(buf))
        };
        let count = |v: f64| -> Result<usize, DumpError> {
            if v >= 0.0 && v.fract() == 0.0 && v < 1e15 {
                Ok(v as usize)
            } else {
                Err(DumpError::Header("counts must be non-negative integers"))
            }
        };
        let nd = count(next()?)?;
        let dims = (0..nd).map(|_| count(next()?)).collect::<Result<Vec<_>, _>>()?;
        let np = count(next()?)?;
        let params = (0..np).map(|_| next()).collect::<Result<Vec<_>, _>>()?;
        let len: usize = dims.iter().product();
        let payload = (0..len).map(|_| next()).collect::<Result<Vec<_>, _>>()?;
        Ok(Self { dims, params, payload })
    }
}
