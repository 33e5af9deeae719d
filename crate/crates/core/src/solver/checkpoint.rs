//! Plain-text checkpoint of a radial state.
//!
//! ```text
//! catenoid-flow-checkpoint 1
//! t <t>
//! grid <r_min> <r_max> <n>
//! <eps_0> <eps_t_0>
//! ...
//! <eps_{n-1}> <eps_t_{n-1}>
//! ```
//!
//! Floats use the shortest representation that parses back to the same bits.

use std::io::{BufRead, Write};
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::solver::{RadialGrid, RadialState};

pub const MAGIC: &str = "catenoid-flow-checkpoint";
pub const VERSION: u32 = 1;

pub fn write_checkpoint<W: Write>(state: &RadialState, mut w: W) -> Result<()> {
    let g = &state.grid;
    writeln!(w, "{MAGIC} {VERSION}")?;
    writeln!(w, "t {:?}", state.t)?;
    writeln!(w, "grid {:?} {:?} {}", g.r_min(), g.r_max(), g.len())?;
    for (e, et) in state.eps.iter().zip(&state.eps_t) {
        writeln!(w, "{e:?} {et:?}")?;
    }
    Ok(())
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Checkpoint(msg.into())
}

fn parse<T: std::str::FromStr>(s: Option<&str>, what: &str) -> Result<T> {
    s.ok_or_else(|| bad(format!("missing {what}")))?
        .parse()
        .map_err(|_| bad(format!("cannot parse {what}")))
}

pub fn read_checkpoint<R: BufRead>(r: R) -> Result<RadialState> {
    let mut lines = r.lines();
    let mut next = |what: &str| -> Result<String> { lines.next().ok_or_else(|| bad(format!("missing {what}")))?.map_err(Error::from) };

    let head = next("header")?;
    let mut it = head.split_whitespace();
    if it.next() != Some(MAGIC) {
        return Err(bad("not a checkpoint file"));
    }
    let version: u32 = parse(it.next(), "version")?;
    if version != VERSION {
        return Err(bad(format!("unsupported version {version}")));
    }

    let tl = next("time")?;
    let mut it = tl.split_whitespace();
    if it.next() != Some("t") {
        return Err(bad("expected time line"));
    }
    let t: f64 = parse(it.next(), "t")?;

    let gl = next("grid")?;
    let mut it = gl.split_whitespace();
    if it.next() != Some("grid") {
        return Err(bad("expected grid line"));
    }
    let r_min: f64 = parse(it.next(), "r_min")?;
    let r_max: f64 = parse(it.next(), "r_max")?;
    let n: usize = parse(it.next(), "n")?;
    let grid = Arc::new(RadialGrid::new(r_min, r_max, n)?);

    let mut eps = Vec::with_capacity(n);
    let mut eps_t = Vec::with_capacity(n);
    for i in 0..n {
        let l = next(&format!("row {i}"))?;
        let mut it = l.split_whitespace();
        eps.push(parse(it.next(), "eps")?);
        eps_t.push(parse(it.next(), "eps_t")?);
    }
    RadialState::new(t, eps, eps_t, grid)
}

pub fn save(state: &RadialState, path: impl AsRef<Path>) -> Result<()> {
    let f = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(f);
    write_checkpoint(state, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn load(path: impl AsRef<Path>) -> Result<RadialState> {
    let f = std::fs::File::open(path)?;
    read_checkpoint(std::io::BufReader::new(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let g = Arc::new(RadialGrid::new(1.25, 7.3, 97).unwrap());
        let s = RadialState::from_fn(g, 0.1 + 0.2, |r| (r * 1.7).sin() * 1e-300, |r| 1.0 / r).unwrap();
        let mut buf = Vec::new();
        write_checkpoint(&s, &mut buf).unwrap();
        let back = read_checkpoint(&buf[..]).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn wrong_magic_is_rejected() {
        let text = "something-else 1\n";
        assert!(matches!(read_checkpoint(text.as_bytes()), Err(Error::Checkpoint(_))));
    }

    #[test]
    fn truncated_file_is_rejected() {
        let text = format!("{MAGIC} 1\nt 0.0\ngrid 1.0 2.0 5\n0.0 0.0\n");
        assert!(read_checkpoint(text.as_bytes()).is_err());
    }
}
