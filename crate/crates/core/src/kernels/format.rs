//! Plain-text kernel files.
//!
//! ```text
//! VDCK1 c=<int> family=<tag>
//! m n re im        (c*c lines, row-major, 17 significant digits)
//! ```

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex;

use super::{Family, Kernel};
use crate::error::{Error, Result};
use crate::residue::Modulus;
use crate::scalar::Real;

const MAGIC: &str = "VDCK1";

pub fn write_kernel<T: Real, W: Write>(kernel: &Kernel<T>, mut out: W) -> Result<()> {
    let c = kernel.c();
    writeln!(out, "{MAGIC} c={c} family={}", kernel.family())?;
    for m in 0..c {
        for (n, z) in kernel.row(m).iter().enumerate() {
            writeln!(out, "{m} {n} {:.16e} {:.16e}", z.re.as_f64(), z.im.as_f64())?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn save_kernel<T: Real>(kernel: &Kernel<T>, path: impl AsRef<Path>) -> Result<()> {
    write_kernel(kernel, BufWriter::new(File::create(path)?))
}

fn field<'a>(token: Option<&'a str>, key: &str) -> Result<&'a str> {
    token
        .and_then(|t| t.strip_prefix(key))
        .ok_or_else(|| Error::Format(format!("header is missing `{key}`")))
}

pub fn read_kernel<T: Real, R: Read>(input: R) -> Result<Kernel<T>> {
    let mut lines = BufReader::new(input).lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Format("empty file".into()))??;
    let mut tokens = header.split_whitespace();
    if tokens.next() != Some(MAGIC) {
        return Err(Error::Format(format!("expected `{MAGIC}` header")));
    }
    let c: u64 = field(tokens.next(), "c=")?
        .parse()
        .map_err(|_| Error::Format("bad modulus in header".into()))?;
    let family: Family = field(tokens.next(), "family=")?.parse()?;
    if tokens.next().is_some() {
        return Err(Error::Format("trailing tokens in header".into()));
    }
    let modulus = Modulus::new(c).map_err(|e| Error::Format(e.to_string()))?;
    let expected = (c * c) as usize;
    let mut table = Vec::with_capacity(expected);
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        if table.len() == expected {
            return Err(Error::Format(format!("more than {expected} entries")));
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 4 {
            return Err(Error::Format(format!(
                "line {}: expected `m n re im`",
                i + 2
            )));
        }
        let idx = table.len() as u64;
        let (m, n) = (idx / c, idx % c);
        let bad = |what: &str| Error::Format(format!("line {}: bad {what}", i + 2));
        if parts[0].parse::<u64>().map_err(|_| bad("row"))? != m
            || parts[1].parse::<u64>().map_err(|_| bad("column"))? != n
        {
            return Err(Error::Format(format!(
                "line {}: entries must be row-major, expected ({m}, {n})",
                i + 2
            )));
        }
        let re: f64 = parts[2].parse().map_err(|_| bad("real part"))?;
        let im: f64 = parts[3].parse().map_err(|_| bad("imaginary part"))?;
        table.push(Complex::new(T::lit(re), T::lit(im)));
    }
    if table.len() != expected {
        return Err(Error::Format(format!(
            "expected {expected} entries, found {}",
            table.len()
        )));
    }
    Kernel::from_table(modulus, family, table)
}

pub fn load_kernel<T: Real>(path: impl AsRef<Path>) -> Result<Kernel<T>> {
    read_kernel(File::open(path)?)
}
