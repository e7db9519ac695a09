//! Binary stream of raw `A_n` samples.
//!
//! Layout: the 8-byte magic `GMAC-AN1`, `n` and the trial count as
//! little-endian `u32`, then one little-endian `f64` pair per trial.

use std::io::{Read, Write};

use super::engine::AnSamples;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 8] = b"GMAC-AN1";
pub const HEADER_LEN: usize = 16;

fn io_err(e: std::io::Error) -> Error {
    Error::Stream(e.to_string())
}

fn to_u32(v: usize, what: &str) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::Stream(format!("{what} = {v} does not fit in u32")))
}

/// Writes the normalised samples `A_n` of `samples`.
pub fn write_an_stream<W: Write>(samples: &AnSamples, mut out: W) -> Result<()> {
    let mut header = [0u8; HEADER_LEN];
    header[..8].copy_from_slice(MAGIC);
    header[8..12].copy_from_slice(&to_u32(samples.n, "n")?.to_le_bytes());
    header[12..16].copy_from_slice(&to_u32(samples.trials(), "trials")?.to_le_bytes());
    out.write_all(&header).map_err(io_err)?;
    let mut buf = Vec::with_capacity(16 * samples.trials());
    for a in samples.an() {
        buf.extend_from_slice(&a[0].to_le_bytes());
        buf.extend_from_slice(&a[1].to_le_bytes());
    }
    out.write_all(&buf).map_err(io_err)?;
    out.flush().map_err(io_err)
}

/// Parsed stream: blocklength and `A_n` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct AnStream {
    pub n: u32,
    pub samples: Vec<[f64; 2]>,
}

pub fn read_an_stream<R: Read>(mut input: R) -> Result<AnStream> {
    let mut header = [0u8; HEADER_LEN];
    input.read_exact(&mut header).map_err(io_err)?;
    if &header[..8] != MAGIC {
        return Err(Error::Stream("bad magic".into()));
    }
    let n = u32::from_le_bytes(header[8..12].try_into().expect("4 bytes"));
    let trials = u32::from_le_bytes(header[12..16].try_into().expect("4 bytes")) as usize;
    let mut body = Vec::new();
    input.read_to_end(&mut body).map_err(io_err)?;
    if body.len() != 16 * trials {
        return Err(Error::Stream(format!(
            "expected {} payload bytes for {trials} trials, found {}",
            16 * trials,
            body.len()
        )));
    }
    let samples = body
        .chunks_exact(16)
        .map(|c| {
            [
                f64::from_le_bytes(c[..8].try_into().expect("8 bytes")),
                f64::from_le_bytes(c[8..].try_into().expect("8 bytes")),
            ]
        })
        .collect();
    Ok(AnStream { n, samples })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_layout() {
        let s = AnSamples {
            n: 4,
            seed: 0,
            sums: vec![[2.0, -4.0], [0.5, 1.0]],
        };
        let mut buf = Vec::new();
        write_an_stream(&s, &mut buf).unwrap();
        assert_eq!(buf.len(), 16 + 32);
        assert_eq!(&buf[..8], b"GMAC-AN1");
        assert_eq!(&buf[8..16], &[4, 0, 0, 0, 2, 0, 0, 0]);
        assert_eq!(&buf[16..24], &1.0f64.to_le_bytes());
        let back = read_an_stream(&buf[..]).unwrap();
        assert_eq!(back.n, 4);
        assert_eq!(back.samples, vec![[1.0, -2.0], [0.25, 0.5]]);
        assert!(read_an_stream(&buf[..40]).is_err());
        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(read_an_stream(&bad[..]).is_err());
    }
}
