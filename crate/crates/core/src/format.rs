//! Line-based text format for manifold data (`.m6`) and plain Gram files.
//!
//! ```text
//! # comment
//! [manifold]
//! genus 1
//! betti 1 2 2 2 2 2 1
//! torsion none
//! cover_rank 1
//!
//! [cup 1 1]
//! 1 2 : 0 1
//! 2 1 : 0 -1
//!
//! [fundamental]
//! 1
//!
//! [u1]
//! 1 0
//! 0 1
//!
//! [f]
//! 0 1
//!
//! [w2]
//! 1 0
//!
//! [p1]
//! 0 3
//!
//! [action]
//! 1
//!
//! 1
//! ```
//!
//! Cup lines are `i j : c_1 .. c_b` with 1-based basis indices; pairs not
//! listed are zero. Only `[cup K L]` with `K ≤ L` is needed: a missing
//! `[cup L K]` is filled in by graded commutativity, and a missing `[cup 0 L]`
//! is the unit. Torsion is `torsion none` or one `torsion K : d_1 ..` line per
//! degree. Action blocks are separated by blank lines.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::Zero;
use thiserror::Error;

use crate::cohomology::{CupTensor, GradedRing, ManifoldData, TOP_DEGREE};
use crate::linalg::{Int, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid data: {0}")]
    Invalid(String),
}

fn perr<T>(line: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError::Parse { line, message: message.into() })
}

struct Section {
    header_line: usize,
    /// (line number, content without comment); blank lines kept as "".
    lines: Vec<(usize, String)>,
}

impl Section {
    fn content(&self) -> impl Iterator<Item = &(usize, String)> {
        self.lines.iter().filter(|(_, l)| !l.is_empty())
    }
}

fn split_sections(text: &str) -> Result<(BTreeMap<String, Section>, usize), FormatError> {
    let mut sections: BTreeMap<String, Section> = BTreeMap::new();
    let mut current: Option<String> = None;
    let mut last = 0;
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        last = line_no;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.starts_with('[') {
            let Some(inner) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) else {
                return perr(line_no, format!("malformed section header `{line}`"));
            };
            let name = inner.split_whitespace().collect::<Vec<_>>().join(" ");
            if sections.contains_key(&name) {
                return perr(line_no, format!("duplicate section [{name}]"));
            }
            sections.insert(name.clone(), Section { header_line: line_no, lines: Vec::new() });
            current = Some(name);
            continue;
        }
        match &current {
            Some(name) => sections.get_mut(name).expect("inserted").lines.push((line_no, line.to_string())),
            None if line.is_empty() => {}
            None => return perr(line_no, "content before the first section header"),
        }
    }
    Ok((sections, last))
}

fn ints(line_no: usize, s: &str) -> Result<Vec<Int>, FormatError> {
    s.split_whitespace()
        .map(|t| t.parse::<Int>().or_else(|_| perr(line_no, format!("`{t}` is not an integer"))))
        .collect()
}

fn usize_of(line_no: usize, s: &str) -> Result<usize, FormatError> {
    s.parse::<usize>().or_else(|_| perr(line_no, format!("`{s}` is not a nonnegative integer")))
}

struct Header {
    genus: usize,
    betti: [usize; 7],
    torsion: [Vec<Int>; 7],
    cover_rank: Option<usize>,
}

fn parse_header(sec: &Section) -> Result<Header, FormatError> {
    let mut genus = None;
    let mut betti = None;
    let mut torsion: [Vec<Int>; 7] = Default::default();
    let mut cover_rank = None;
    for (n, line) in sec.content() {
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line.as_str(), ""));
        let rest = rest.trim();
        match key {
            "genus" => genus = Some(usize_of(*n, rest)?),
            "betti" => {
                let v: Vec<usize> = rest.split_whitespace().map(|t| usize_of(*n, t)).collect::<Result<_, _>>()?;
                let arr: [usize; 7] = v.try_into().or_else(|_| perr(*n, "betti needs exactly 7 numbers"))?;
                betti = Some(arr);
            }
            "torsion" if rest == "none" => {}
            "torsion" => {
                let Some((deg, factors)) = rest.split_once(':') else {
                    return perr(*n, "expected `torsion none` or `torsion K : d1 d2 ..`");
                };
                let k = usize_of(*n, deg.trim())?;
                if k > TOP_DEGREE {
                    return perr(*n, format!("torsion degree {k} exceeds 6"));
                }
                torsion[k] = ints(*n, factors)?;
            }
            "cover_rank" => cover_rank = Some(usize_of(*n, rest)?),
            _ => return perr(*n, format!("unknown key `{key}` in [manifold]")),
        }
    }
    let genus = genus.map_or_else(|| perr(sec.header_line, "[manifold] lacks `genus`"), Ok)?;
    let betti = betti.map_or_else(|| perr(sec.header_line, "[manifold] lacks `betti`"), Ok)?;
    Ok(Header { genus, betti, torsion, cover_rank })
}

fn parse_cup(sec: &Section, k: usize, l: usize, betti: &[usize; 7]) -> Result<CupTensor, FormatError> {
    let (bk, bl, bo) = (betti[k], betti[l], betti[k + l]);
    let mut t = CupTensor::zeros(bk, bl, bo);
    let mut seen = std::collections::HashSet::new();
    for (n, line) in sec.content() {
        let Some((idx, coeffs)) = line.split_once(':') else {
            return perr(*n, "expected `i j : c1 c2 ..`");
        };
        let idx: Vec<&str> = idx.split_whitespace().collect();
        if idx.len() != 2 {
            return perr(*n, "expected two basis indices before `:`");
        }
        let (i, j) = (usize_of(*n, idx[0])?, usize_of(*n, idx[1])?);
        if i == 0 || i > bk || j == 0 || j > bl {
            return perr(*n, format!("basis pair ({i}, {j}) out of range for cup({k},{l}) with ranks {bk} and {bl}"));
        }
        if !seen.insert((i, j)) {
            return perr(*n, format!("pair ({i}, {j}) listed twice"));
        }
        let c = ints(*n, coeffs)?;
        if c.len() != bo {
            return perr(*n, format!("expected {bo} coefficients, found {}", c.len()));
        }
        t.set(i - 1, j - 1, &c);
    }
    Ok(t)
}

fn parse_vector(sec: Option<&Section>, name: &str, len: usize, eof: usize) -> Result<Vec<Int>, FormatError> {
    let Some(sec) = sec else {
        return if len == 0 { Ok(Vec::new()) } else { perr(eof, format!("missing section [{name}]")) };
    };
    let mut v = Vec::new();
    for (n, line) in sec.content() {
        v.extend(ints(*n, line)?);
    }
    if v.len() != len {
        return perr(sec.header_line, format!("[{name}] has {} entries, expected {len}", v.len()));
    }
    Ok(v)
}

fn parse_rows(
    lines: &[&(usize, String)],
    rows: usize,
    cols: usize,
    what: &str,
    at: usize,
) -> Result<IntMatrix, FormatError> {
    if rows == 0 || cols == 0 {
        if let Some((n, _)) = lines.first() {
            return perr(*n, format!("{what} should be empty"));
        }
        return Ok(IntMatrix::zeros(rows, cols));
    }
    if lines.len() != rows {
        return perr(at, format!("{what} has {} rows, expected {rows}", lines.len()));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for (n, line) in lines {
        let row = ints(*n, line)?;
        if row.len() != cols {
            return perr(*n, format!("{what} row has {} entries, expected {cols}", row.len()));
        }
        data.extend(row);
    }
    Ok(IntMatrix::from_vec(rows, cols, data).expect("sizes checked"))
}

fn parse_action(sec: Option<&Section>, count: usize, r: usize, eof: usize) -> Result<Vec<IntMatrix>, FormatError> {
    let Some(sec) = sec else {
        if count == 0 || r == 0 {
            return Ok(vec![IntMatrix::zeros(r, r); count]);
        }
        return perr(eof, "missing section [action]");
    };
    let mut blocks: Vec<Vec<&(usize, String)>> = Vec::new();
    let mut current: Vec<&(usize, String)> = Vec::new();
    for entry in &sec.lines {
        if entry.1.is_empty() {
            if !current.is_empty() {
                blocks.push(std::mem::take(&mut current));
            }
        } else {
            current.push(entry);
        }
    }
    if !current.is_empty() {
        blocks.push(current);
    }
    if r == 0 {
        return parse_rows(&blocks.concat(), 0, 0, "action matrix", sec.header_line).map(|m| vec![m; count]);
    }
    if blocks.len() != count {
        return perr(sec.header_line, format!("[action] has {} blocks, expected {count}", blocks.len()));
    }
    blocks.iter().enumerate().map(|(n, b)| parse_rows(b, r, r, &format!("action matrix {}", n + 1), b[0].0)).collect()
}

/// Parses a `.m6` file and checks that all dimensions agree.
pub fn parse_manifold(text: &str) -> Result<ManifoldData, FormatError> {
    let (sections, eof) = split_sections(text)?;
    let header =
        sections.get("manifold").map_or_else(|| perr(eof.max(1), "missing section [manifold]"), parse_header)?;
    let betti = header.betti;
    let mut cups = BTreeMap::new();
    for (name, sec) in &sections {
        let parts: Vec<&str> = name.split(' ').collect();
        match parts.as_slice() {
            ["manifold"] | ["fundamental"] | ["u1"] | ["f"] | ["w2"] | ["p1"] | ["action"] => {}
            ["cup", k, l] => {
                let (k, l) = (usize_of(sec.header_line, k)?, usize_of(sec.header_line, l)?);
                if k + l > TOP_DEGREE {
                    return perr(sec.header_line, format!("cup({k},{l}) lands above degree 6"));
                }
                cups.insert((k, l), parse_cup(sec, k, l, &betti)?);
            }
            _ => return perr(sec.header_line, format!("unknown section [{name}]")),
        }
    }
    let explicit: Vec<(usize, usize)> = cups.keys().copied().collect();
    for (k, l) in explicit {
        if k != l && !cups.contains_key(&(l, k)) {
            let sign = if (k * l) % 2 == 0 { 1 } else { -1 };
            let t = cups[&(k, l)].swapped(sign);
            cups.insert((l, k), t);
        }
    }
    let eval = parse_vector(sections.get("fundamental"), "fundamental", betti[TOP_DEGREE], eof)?;
    let ring = GradedRing::new(betti, header.torsion, cups, eval).map_err(|e| FormatError::Invalid(e.to_string()))?;

    let g = header.genus;
    let b2 = betti[2];
    let u1 = match sections.get("u1") {
        Some(sec) => parse_rows(&sec.content().collect::<Vec<_>>(), betti[1], 2 * g, "u1", sec.header_line)?,
        None if betti[1] == 0 || g == 0 => IntMatrix::zeros(betti[1], 2 * g),
        None => return perr(eof, "missing section [u1]"),
    };
    let f = parse_vector(sections.get("f"), "f", b2, eof)?;
    let w2_raw = parse_vector(sections.get("w2"), "w2", b2, eof)?;
    let mut w2 = Vec::with_capacity(b2);
    for x in &w2_raw {
        match x.to_string().as_str() {
            "0" => w2.push(0),
            "1" => w2.push(1),
            _ => return perr(sections["w2"].header_line, format!("w2 entry {x} is not 0 or 1")),
        }
    }
    let p1 = parse_vector(sections.get("p1"), "p1", b2, eof)?;
    let cover_rank = header.cover_rank.unwrap_or(b2.saturating_sub(1));
    let action = parse_action(sections.get("action"), 2 * g, cover_rank, eof)?;
    let data = ManifoldData { ring, genus: g, u1, f, w2, p1, action, cover_rank };
    data.check_shapes().map_err(|e| FormatError::Invalid(e.to_string()))?;
    Ok(data)
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

fn write_matrix(out: &mut String, m: &IntMatrix) {
    for i in 0..m.rows() {
        if m.cols() > 0 {
            out.push_str(&join(m.row(i)));
            out.push('\n');
        }
    }
}

/// Tensor the loader would produce for `(k, l)` if the section were absent.
fn default_cup(ring: &GradedRing, k: usize, l: usize) -> CupTensor {
    let b = ring.betti_numbers();
    if k > l {
        let sign = if (k * l).is_multiple_of(2) { 1 } else { -1 };
        ring.cup(l, k).swapped(sign)
    } else if k == 0 && b[0] == 1 {
        CupTensor::unit(b[l], true)
    } else {
        CupTensor::zeros(b[k], b[l], b[k + l])
    }
}

/// Canonical text: single spaces, LF endings, sections in a fixed order and
/// only the cup sections the loader cannot reconstruct.
pub fn write_manifold(d: &ManifoldData) -> String {
    let ring = &d.ring;
    let b = ring.betti_numbers();
    let mut out = String::new();
    out.push_str("[manifold]\n");
    let _ = writeln!(out, "genus {}", d.genus);
    let _ = writeln!(out, "betti {}", join(&b));
    let torsion: Vec<usize> = (0..=TOP_DEGREE).filter(|&k| !ring.torsion(k).is_empty()).collect();
    if torsion.is_empty() {
        out.push_str("torsion none\n");
    }
    for k in torsion {
        let _ = writeln!(out, "torsion {k} : {}", join(ring.torsion(k)));
    }
    let _ = writeln!(out, "cover_rank {}", d.cover_rank);

    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for k in 0..=TOP_DEGREE {
        for l in k..=TOP_DEGREE - k {
            pairs.push((k, l));
        }
    }
    let mut reversed: Vec<(usize, usize)> = pairs.iter().filter(|(k, l)| k != l).map(|&(k, l)| (l, k)).collect();
    reversed.sort();
    pairs.extend(reversed);
    for (k, l) in pairs {
        let t = ring.cup(k, l);
        if *t == default_cup(ring, k, l) {
            continue;
        }
        let _ = write!(out, "\n[cup {k} {l}]\n");
        for i in 0..b[k] {
            for j in 0..b[l] {
                let v = t.get(i, j);
                if v.iter().any(|x| !x.is_zero()) {
                    let _ = writeln!(out, "{} {} : {}", i + 1, j + 1, join(v));
                }
            }
        }
    }
    let vector = |out: &mut String, name: &str, v: &[Int]| {
        let _ = write!(out, "\n[{name}]\n");
        if !v.is_empty() {
            out.push_str(&join(v));
            out.push('\n');
        }
    };
    vector(&mut out, "fundamental", ring.eval());
    out.push_str("\n[u1]\n");
    write_matrix(&mut out, &d.u1);
    vector(&mut out, "f", &d.f);
    let w2: Vec<Int> = d.w2.iter().map(|&x| Int::from(x)).collect();
    vector(&mut out, "w2", &w2);
    vector(&mut out, "p1", &d.p1);
    out.push_str("\n[action]\n");
    for (n, a) in d.action.iter().enumerate() {
        if n > 0 && a.rows() > 0 {
            out.push('\n');
        }
        write_matrix(&mut out, a);
    }
    out
}

/// Whitespace-separated rows of a square symmetric integer matrix; `#`
/// comments and blank lines are ignored.
pub fn parse_gram(text: &str) -> Result<IntMatrix, FormatError> {
    let mut rows: Vec<(usize, Vec<Int>)> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if !line.is_empty() {
            rows.push((n + 1, ints(n + 1, line)?));
        }
    }
    let size = rows.len();
    for (n, row) in &rows {
        if row.len() != size {
            return perr(*n, format!("row has {} entries but the matrix has {size} rows", row.len()));
        }
    }
    let data = rows.into_iter().flat_map(|(_, r)| r).collect();
    Ok(IntMatrix::from_vec(size, size, data).expect("square"))
}
