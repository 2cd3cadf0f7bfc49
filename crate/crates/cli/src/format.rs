//! Text interchange formats: complexes, admissible pairs, truth tables.
//!
//! Complex format: first line `n=<int>`, every following non-blank line a
//! facet as comma-separated ascending 1-based vertex labels. `#` starts a
//! comment line. Admissible pairs add a `t=<int>` line and `[A]` / `[B]`
//! section headers.

use uniplex::generators::AdmissiblePair;
use uniplex::{down_closure, SimplicialComplex, VertexSet};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Core(#[from] uniplex::Error),
}

type Result<T> = std::result::Result<T, FormatError>;

fn parse_header(line: &str, key: &str) -> Result<usize> {
    let rest = line
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| FormatError::Parse(format!("expected `{key}=<int>`, got `{line}`")))?;
    rest.trim()
        .parse()
        .map_err(|_| FormatError::Parse(format!("bad integer in `{line}`")))
}

fn parse_face(line: &str) -> Result<VertexSet> {
    let mut prev = 0u32;
    let mut s = VertexSet::empty();
    for tok in line.split(',') {
        let v: u32 = tok
            .trim()
            .parse()
            .map_err(|_| FormatError::Parse(format!("bad vertex `{tok}` in `{line}`")))?;
        if v == 0 || v <= prev {
            return Err(FormatError::Parse(format!(
                "vertices must be ascending 1-based in `{line}`"
            )));
        }
        prev = v;
        s.insert(v);
    }
    Ok(s)
}

fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

pub fn parse_complex(text: &str) -> Result<SimplicialComplex> {
    let mut lines = content_lines(text);
    let n = parse_header(
        lines.next().ok_or_else(|| FormatError::Parse("empty input".into()))?,
        "n",
    )?;
    let faces: Vec<VertexSet> = lines.map(parse_face).collect::<Result<_>>()?;
    if faces.is_empty() {
        return Ok(SimplicialComplex::empty(n));
    }
    Ok(down_closure(&faces, n)?)
}

pub fn write_complex(complex: &SimplicialComplex) -> String {
    let mut out = format!("n={}\n", complex.n());
    for f in complex.facets() {
        let labels: Vec<String> = f.iter().map(|v| v.to_string()).collect();
        out.push_str(&labels.join(","));
        out.push('\n');
    }
    out
}

pub fn parse_admissible_pair(text: &str) -> Result<AdmissiblePair> {
    let mut lines = content_lines(text);
    let n = parse_header(
        lines.next().ok_or_else(|| FormatError::Parse("empty input".into()))?,
        "n",
    )?;
    let t = parse_header(
        lines.next().ok_or_else(|| FormatError::Parse("missing `t=` line".into()))?,
        "t",
    )?;
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut section: Option<char> = None;
    for line in lines {
        match line {
            "[A]" => section = Some('A'),
            "[B]" => section = Some('B'),
            _ => match section {
                Some('A') => a.push(parse_face(line)?),
                Some('B') => b.push(parse_face(line)?),
                _ => {
                    return Err(FormatError::Parse(format!(
                        "face line `{line}` before any [A]/[B] section"
                    )))
                }
            },
        }
    }
    Ok(AdmissiblePair::new(n, t, a, b)?)
}

pub fn write_admissible_pair(pair: &AdmissiblePair) -> String {
    let mut out = format!("n={}\nt={}\n[A]\n", pair.n, pair.t);
    let face_line = |f: &VertexSet| {
        let labels: Vec<String> = f.iter().map(|v| v.to_string()).collect();
        labels.join(",")
    };
    for f in &pair.a {
        out.push_str(&face_line(f));
        out.push('\n');
    }
    out.push_str("[B]\n");
    for f in &pair.b {
        out.push_str(&face_line(f));
        out.push('\n');
    }
    out
}

/// Parses a truth table given as hex digits covering 2^n bits, input index
/// = binary encoding of (x_1..x_n) with x_1 least significant.
pub fn parse_truth_table_hex(text: &str, n: usize) -> Result<uniplex::boolean::MonotoneBooleanFunction> {
    let hex: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bits_needed = 1usize << n;
    let digits_needed = bits_needed.div_ceil(4);
    if hex.len() != digits_needed {
        return Err(FormatError::Parse(format!(
            "arity {n} needs {digits_needed} hex digits, got {}",
            hex.len()
        )));
    }
    let words = bits_needed.div_ceil(64);
    let mut bits = vec![0u64; words];
    // most significant hex digit first
    for (pos, c) in hex.chars().rev().enumerate() {
        let d = c
            .to_digit(16)
            .ok_or_else(|| FormatError::Parse(format!("bad hex digit `{c}`")))? as u64;
        bits[pos / 16] |= d << (4 * (pos % 16));
    }
    Ok(uniplex::boolean::MonotoneBooleanFunction::from_bits(n, bits)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use uniplex::vset;

    #[test]
    fn complex_round_trip() {
        let text = "# sample\nn=5\n1,2,3\n\n4,5\n";
        let c = parse_complex(text).unwrap();
        assert_eq!(c.facets(), &[vset![1, 2, 3], vset![4, 5]]);
        let again = parse_complex(&write_complex(&c)).unwrap();
        assert_eq!(again.facets(), c.facets());
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_complex("1,2,3\n").is_err());
        assert!(parse_complex("n=4\n3,2\n").is_err());
        assert!(parse_complex("n=4\n0,1\n").is_err());
    }

    #[test]
    fn admissible_round_trip() {
        let text = "n=8\nt=4\n[A]\n1,2,3\n[B]\n2,3,4,5,6\n";
        let pair = parse_admissible_pair(text).unwrap();
        assert_eq!((pair.n, pair.t), (8, 4));
        assert_eq!(pair.a, vec![vset![1, 2, 3]]);
        let again = parse_admissible_pair(&write_admissible_pair(&pair)).unwrap();
        assert_eq!((again.a, again.b), (pair.a, pair.b));
    }

    #[test]
    fn truth_table_hex() {
        // AND on 2 variables: bit 3 only -> 0x8
        let f = parse_truth_table_hex("8", 2).unwrap();
        assert!(f.value(3) && !f.value(1));
        // XOR is not monotone
        assert!(parse_truth_table_hex("6", 2).is_err());
    }
}
