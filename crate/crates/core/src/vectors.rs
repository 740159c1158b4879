//! Text vector files: a `<count> <dim>` header, then `word v1 ... vd` per line.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, IoContext, Result};
use crate::eval::VectorSet;

const SIGNIFICANT: usize = 6;

/// Shortest of fixed or exponent notation with six significant digits,
/// trailing zeros removed (C's `%g`).
pub fn format_sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", SIGNIFICANT - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= SIGNIFICANT as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    let decimals = (SIGNIFICANT as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn save_vectors(vs: &VectorSet, path: &Path) -> Result<()> {
    let file = File::create(path).at(path)?;
    let mut out = BufWriter::with_capacity(1 << 20, file);
    writeln!(out, "{} {}", vs.len(), vs.dim()).at(path)?;
    for id in 0..vs.len() as u32 {
        let mut line = String::from(vs.word(id));
        for &v in vs.vector(id) {
            line.push(' ');
            line += &format_sig(v);
        }
        line.push('\n');
        out.write_all(line.as_bytes()).at(path)?;
    }
    out.flush().at(path)
}

pub fn load_vectors(path: &Path) -> Result<VectorSet> {
    let file = File::open(path).at(path)?;
    let mut lines = BufReader::new(file).lines();
    let header = lines.next().transpose().at(path)?.ok_or_else(|| Error::parse(path, 1, "missing `<count> <dim>` header"))?;
    let (n, dim) = header
        .split_once(' ')
        .and_then(|(n, d)| Some((n.trim().parse::<usize>().ok()?, d.trim().parse::<usize>().ok()?)))
        .ok_or_else(|| Error::parse(path, 1, format!("expected `<count> <dim>`, got {header:?}")))?;
    let mut words = Vec::with_capacity(n);
    let mut data = Vec::with_capacity(n.saturating_mul(dim).min(1 << 28));
    for (i, line) in lines.enumerate() {
        let line = line.at(path)?;
        let lineno = i + 2;
        if line.trim().is_empty() {
            continue;
        }
        if words.len() == n {
            return Err(Error::parse(path, lineno, format!("more rows than the {n} in the header")));
        }
        let mut fields = line.split_whitespace();
        let word = fields.next().expect("non-empty line");
        let before = data.len();
        for f in fields {
            let v: f64 = f.parse().map_err(|e| Error::parse(path, lineno, format!("bad value {f:?}: {e}")))?;
            data.push(v);
        }
        if data.len() - before != dim {
            return Err(Error::parse(path, lineno, format!("{} values, header says {dim}", data.len() - before)));
        }
        words.push(word.to_string());
    }
    if words.len() != n {
        return Err(Error::parse(path, words.len() + 2, format!("{} rows, header says {n}", words.len())));
    }
    VectorSet::new(words, dim, data)
}
