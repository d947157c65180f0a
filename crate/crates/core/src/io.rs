//! Plain-text state files: the first line holds `N`, followed by `N` lines
//! `re im`. Values are written in shortest round-trip form.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::StateVector;
use crate::scalar::cx;

pub fn format_state(state: &StateVector<f64>) -> String {
    let mut out = format!("{}\n", state.dim());
    for z in state.amplitudes() {
        writeln!(out, "{:?} {:?}", z.re, z.im).expect("writing to a String");
    }
    out
}

pub fn parse_state(text: &str) -> Result<StateVector<f64>> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty file".into()))?;
    let n: usize = header
        .parse()
        .map_err(|_| Error::Parse(format!("first line must be the site count, got {header:?}")))?;
    let mut amps = Vec::with_capacity(n);
    for (k, line) in lines.enumerate() {
        let mut parts = line.split_whitespace();
        let mut num = |what: &str| -> Result<f64> {
            let tok = parts
                .next()
                .ok_or_else(|| Error::Parse(format!("line {}: missing {what} part", k + 2)))?;
            tok.parse()
                .map_err(|_| Error::Parse(format!("line {}: {tok:?} is not a number", k + 2)))
        };
        let (re, im) = (num("real")?, num("imaginary")?);
        if parts.next().is_some() {
            return Err(Error::Parse(format!("line {}: expected two numbers", k + 2)));
        }
        amps.push(cx(re, im));
    }
    if amps.len() != n {
        return Err(Error::Parse(format!("header says {n} amplitudes, found {}", amps.len())));
    }
    StateVector::new(amps)
}

pub fn read_state_file(path: impl AsRef<Path>) -> Result<StateVector<f64>> {
    parse_state(&std::fs::read_to_string(path)?)
}

pub fn write_state_file(path: impl AsRef<Path>, state: &StateVector<f64>) -> Result<()> {
    Ok(std::fs::write(path, format_state(state))?)
}
