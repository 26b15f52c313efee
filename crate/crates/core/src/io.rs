//! Text and binary file formats for squares, array families, complementary
//! families, pair certificates and verification reports.
//!
//! Every format starts with a header line `MAGIC VERSION key=value ...`. The
//! key set is fixed per format; unknown, missing or repeated keys are
//! errors, and the payload must match the header dimensions exactly.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use thiserror::Error;

use crate::construct::{CmsFamily, ConstructError};
use crate::linalg::MatrixPairCertificate;
use crate::oa::{ArrayFamily, OaError, OrthArray};
use crate::verify::{CmsReport, MagicSquare, VerifyError, VerifyReport};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("missing header line")]
    MissingHeader,
    #[error("expected format {expected}, found {found:?}")]
    Magic { expected: &'static str, found: String },
    #[error("unsupported format version {0:?}")]
    Version(String),
    #[error("malformed header field {0:?}")]
    HeaderField(String),
    #[error("unknown header key {0:?}")]
    UnknownKey(String),
    #[error("header key {0:?} given twice")]
    DuplicateKey(String),
    #[error("missing header key {0:?}")]
    MissingKey(&'static str),
    #[error("line {line}: {token:?} is not a valid entry")]
    Token { line: usize, token: String },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("line {line}: entry {value} is below the declared base {base}")]
    BelowBase { line: usize, value: i128, base: i64 },
    #[error(transparent)]
    Square(#[from] VerifyError),
    #[error(transparent)]
    Array(#[from] OaError),
    #[error(transparent)]
    Family(#[from] ConstructError),
}

/// A parsed header: magic token, version and the values of the format's keys
/// in declaration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormatHeader {
    pub magic: String,
    pub version: u32,
    pub params: Vec<(&'static str, i64)>,
}

impl FormatHeader {
    fn new(magic: &str, params: Vec<(&'static str, i64)>) -> Self {
        FormatHeader { magic: magic.to_string(), version: FORMAT_VERSION, params }
    }

    fn get(&self, key: &str) -> i64 {
        self.params.iter().find(|(k, _)| *k == key).map_or(0, |&(_, v)| v)
    }

    fn size(&self, key: &'static str) -> Result<usize, IoError> {
        usize::try_from(self.get(key)).map_err(|_| IoError::HeaderField(format!("{key}={}", self.get(key))))
    }

    fn parse(line: &str, magic: &'static str, keys: &[&'static str]) -> Result<Self, IoError> {
        let mut fields = line.split_whitespace();
        let found = fields.next().ok_or(IoError::MissingHeader)?;
        if found != magic {
            return Err(IoError::Magic { expected: magic, found: found.to_string() });
        }
        let version = fields.next().unwrap_or("");
        if version.parse::<u32>() != Ok(FORMAT_VERSION) {
            return Err(IoError::Version(version.to_string()));
        }
        let mut values: Vec<Option<i64>> = vec![None; keys.len()];
        for field in fields {
            let (key, value) = field.split_once('=').ok_or_else(|| IoError::HeaderField(field.into()))?;
            let slot = keys
                .iter()
                .position(|&k| k == key)
                .ok_or_else(|| IoError::UnknownKey(key.into()))?;
            if values[slot].is_some() {
                return Err(IoError::DuplicateKey(key.into()));
            }
            values[slot] = Some(value.parse().map_err(|_| IoError::HeaderField(field.into()))?);
        }
        let params = keys
            .iter()
            .zip(values)
            .map(|(&k, v)| v.map(|v| (k, v)).ok_or(IoError::MissingKey(k)))
            .collect::<Result<_, _>>()?;
        Ok(FormatHeader { magic: magic.to_string(), version: FORMAT_VERSION, params })
    }
}

impl std::fmt::Display for FormatHeader {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} {}", self.magic, self.version)?;
        for (k, v) in &self.params {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

const MS_MAGIC: &str = "MMS";
const MS_BINARY_MAGIC: &str = "MMSB";
const MS_KEYS: [&str; 3] = ["n", "t", "base"];
const OAF_MAGIC: &str = "OAF";
const OAF_KEYS: [&str; 5] = ["count", "k", "cols", "v", "t"];
const CMS_MAGIC: &str = "CMS";
const CMS_KEYS: [&str; 3] = ["m", "n", "t"];

/// Numbered non-header lines, with blank lines kept as block separators.
struct Body {
    lines: Vec<(usize, String)>,
}

impl Body {
    fn read<R: BufRead>(reader: R) -> Result<(String, Body), IoError> {
        let mut lines = reader.lines();
        let header = match lines.next() {
            Some(line) => line?,
            None => return Err(IoError::MissingHeader),
        };
        if header.trim().is_empty() {
            return Err(IoError::MissingHeader);
        }
        let lines = lines
            .enumerate()
            .map(|(i, l)| l.map(|l| (i + 2, l.trim().to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((header, Body { lines }))
    }

    /// Splits into runs of non-blank lines.
    fn blocks(&self) -> Vec<&[(usize, String)]> {
        self.lines.split(|(_, l)| l.is_empty()).filter(|b| !b.is_empty()).collect()
    }
}

fn parse_row<T: std::str::FromStr>(line: usize, text: &str, width: usize) -> Result<Vec<T>, IoError> {
    let row = text
        .split_whitespace()
        .map(|tok| tok.parse().map_err(|_| IoError::Token { line, token: tok.to_string() }))
        .collect::<Result<Vec<T>, _>>()?;
    if row.len() != width {
        return Err(IoError::Dimension(format!("line {line} has {} entries, expected {width}", row.len())));
    }
    Ok(row)
}

fn parse_square_block(block: &[(usize, String)], n: usize, t: u32, base: i64) -> Result<MagicSquare, IoError> {
    if block.len() != n {
        return Err(IoError::Dimension(format!("square has {} rows, expected {n}", block.len())));
    }
    let mut entries = Vec::with_capacity(n * n);
    for (line, text) in block {
        for value in parse_row::<i128>(*line, text, n)? {
            let rel = value - base as i128;
            let rel = u64::try_from(rel).map_err(|_| IoError::BelowBase { line: *line, value, base })?;
            entries.push(rel);
        }
    }
    Ok(MagicSquare::with_base(n, t, base, entries)?)
}

fn write_square_rows<W: Write>(w: &mut W, sq: &MagicSquare) -> io::Result<()> {
    let base = sq.base() as i128;
    let mut line = String::new();
    for i in 0..sq.order() {
        line.clear();
        for (j, &e) in sq.row(i).iter().enumerate() {
            if j > 0 {
                line.push(' ');
            }
            line.push_str(&(e as i128 + base).to_string());
        }
        line.push('\n');
        w.write_all(line.as_bytes())?;
    }
    Ok(())
}

fn ms_header(magic: &str, sq: &MagicSquare) -> FormatHeader {
    FormatHeader::new(
        magic,
        vec![("n", sq.order() as i64), ("t", sq.degree() as i64), ("base", sq.base())],
    )
}

/// Text square: header `MMS 1 n= t= base=`, then `n` rows of decimal entries.
pub fn write_ms<W: Write>(w: &mut W, sq: &MagicSquare) -> io::Result<()> {
    writeln!(w, "{}", ms_header(MS_MAGIC, sq))?;
    write_square_rows(w, sq)
}

pub fn read_ms<R: BufRead>(reader: R) -> Result<MagicSquare, IoError> {
    let (header, body) = Body::read(reader)?;
    let h = FormatHeader::parse(&header, MS_MAGIC, &MS_KEYS)?;
    let (n, t, base) = (h.size("n")?, h.size("t")? as u32, h.get("base"));
    let blocks = body.blocks();
    if blocks.len() != 1 {
        return Err(IoError::Dimension(format!("expected one block of {n} rows, found {}", blocks.len())));
    }
    parse_square_block(blocks[0], n, t, base)
}

/// Binary square: the text header line with magic `MMSB`, then `n^2`
/// little-endian `u64` entries relative to `base`, row-major.
pub fn write_ms_binary<W: Write>(w: &mut W, sq: &MagicSquare) -> io::Result<()> {
    writeln!(w, "{}", ms_header(MS_BINARY_MAGIC, sq))?;
    for &e in sq.entries() {
        w.write_all(&e.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_ms_binary<R: BufRead>(mut reader: R) -> Result<MagicSquare, IoError> {
    let mut header = String::new();
    if reader.read_line(&mut header)? == 0 || header.trim().is_empty() {
        return Err(IoError::MissingHeader);
    }
    let h = FormatHeader::parse(&header, MS_BINARY_MAGIC, &MS_KEYS)?;
    let (n, t, base) = (h.size("n")?, h.size("t")? as u32, h.get("base"));
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    if bytes.len() != n * n * 8 {
        return Err(IoError::Dimension(format!("payload has {} bytes, expected {}", bytes.len(), n * n * 8)));
    }
    let entries = bytes.chunks_exact(8).map(|c| u64::from_le_bytes(c.try_into().unwrap())).collect();
    Ok(MagicSquare::with_base(n, t, base, entries)?)
}

/// Reads a text or binary square, chosen by the magic token.
pub fn load_ms(path: &Path) -> Result<MagicSquare, IoError> {
    let mut reader = BufReader::new(File::open(path)?);
    let binary = reader.fill_buf()?.starts_with(b"MMSB ");
    if binary {
        read_ms_binary(reader)
    } else {
        read_ms(reader)
    }
}

/// Writes a square, in binary when `binary` is set.
pub fn save_ms(path: &Path, sq: &MagicSquare, binary: bool) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    if binary {
        write_ms_binary(&mut w, sq)?;
    } else {
        write_ms(&mut w, sq)?;
    }
    w.flush()
}

/// Array family: header `OAF 1 count= k= cols= v= t=`, then one block of
/// `k` rows per member, blocks separated by a blank line.
pub fn write_oa_family<W: Write>(w: &mut W, fam: &ArrayFamily) -> io::Result<()> {
    let t = fam.members().first().map_or(0, |a| a.t());
    let h = FormatHeader::new(
        OAF_MAGIC,
        vec![
            ("count", fam.len() as i64),
            ("k", fam.k() as i64),
            ("cols", fam.n_cols() as i64),
            ("v", fam.v() as i64),
            ("t", t as i64),
        ],
    );
    writeln!(w, "{h}")?;
    for (i, arr) in fam.members().iter().enumerate() {
        if i > 0 {
            writeln!(w)?;
        }
        for row in arr.rows() {
            let text: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(w, "{}", text.join(" "))?;
        }
    }
    Ok(())
}

pub fn read_oa_family<R: BufRead>(reader: R) -> Result<ArrayFamily, IoError> {
    let (header, body) = Body::read(reader)?;
    let h = FormatHeader::parse(&header, OAF_MAGIC, &OAF_KEYS)?;
    let (count, k, cols, v, t) = (h.size("count")?, h.size("k")?, h.size("cols")?, h.size("v")?, h.size("t")?);
    if count == 0 {
        return Err(IoError::Array(OaError::EmptyFamily));
    }
    let blocks = body.blocks();
    if blocks.len() != count {
        return Err(IoError::Dimension(format!("found {} arrays, header declares {count}", blocks.len())));
    }
    let members = blocks
        .iter()
        .map(|block| {
            if block.len() != k {
                return Err(IoError::Dimension(format!("array has {} rows, expected {k}", block.len())));
            }
            let rows = block
                .iter()
                .map(|(line, text)| parse_row::<u16>(*line, text, cols))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(OrthArray::from_rows(v, t, &rows)?)
        })
        .collect::<Result<Vec<_>, IoError>>()?;
    Ok(ArrayFamily::new(members)?)
}

/// Complementary family: header `CMS 1 m= n= t=`, then `m` squares of `n`
/// rows, separated by blank lines. Entries are absolute, base 0.
pub fn write_cms_bundle<W: Write>(w: &mut W, fam: &CmsFamily) -> io::Result<()> {
    let h = FormatHeader::new(
        CMS_MAGIC,
        vec![("m", fam.count() as i64), ("n", fam.order() as i64), ("t", fam.degree() as i64)],
    );
    writeln!(w, "{h}")?;
    for (i, sq) in fam.members().iter().enumerate() {
        if i > 0 {
            writeln!(w)?;
        }
        write_square_rows(w, sq)?;
    }
    Ok(())
}

pub fn read_cms_bundle<R: BufRead>(reader: R) -> Result<CmsFamily, IoError> {
    let (header, body) = Body::read(reader)?;
    let h = FormatHeader::parse(&header, CMS_MAGIC, &CMS_KEYS)?;
    let (m, n, t) = (h.size("m")?, h.size("n")?, h.size("t")? as u32);
    let blocks = body.blocks();
    if m == 0 || blocks.len() != m {
        return Err(IoError::Dimension(format!("found {} squares, header declares {m}", blocks.len())));
    }
    let members = blocks
        .iter()
        .map(|b| parse_square_block(b, n, t, 0))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CmsFamily::new(t, members)?)
}

fn open(path: &Path) -> Result<BufReader<File>, IoError> {
    Ok(BufReader::new(File::open(path)?))
}

pub fn load_oa_family(path: &Path) -> Result<ArrayFamily, IoError> {
    read_oa_family(open(path)?)
}

pub fn load_cms_bundle(path: &Path) -> Result<CmsFamily, IoError> {
    read_cms_bundle(open(path)?)
}

pub fn save_cms_bundle(path: &Path, fam: &CmsFamily) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_cms_bundle(&mut w, fam)?;
    w.flush()
}

/// Key-value text for a matrix pair: field, matrices, `d`, then every
/// recorded check in evaluation order and the overall verdict.
pub fn write_pair_certificate<W: Write>(w: &mut W, cert: &MatrixPairCertificate) -> io::Result<()> {
    let field = cert.field();
    writeln!(w, "kind=matrix_pair")?;
    writeln!(w, "q={}", field.order())?;
    writeln!(w, "modulus={}", field.spec())?;
    writeln!(w, "t={}", cert.t())?;
    writeln!(w, "e1={}", cert.e1)?;
    writeln!(w, "e2={}", cert.e2)?;
    match cert.d {
        Some(d) => writeln!(w, "d={}", d.index())?,
        None => writeln!(w, "d=none")?,
    }
    for (check, ok) in &cert.checks {
        writeln!(w, "check.{}={ok}", check.name())?;
    }
    writeln!(w, "verdict={}", cert.all_passed())
}

/// Key-value text for a square verification.
pub fn write_ms_report<W: Write>(w: &mut W, r: &VerifyReport) -> io::Result<()> {
    writeln!(w, "kind=ms_report")?;
    writeln!(w, "n={}", r.order)?;
    writeln!(w, "t={}", r.degree)?;
    writeln!(w, "consecutive={}", r.consecutive)?;
    for tally in &r.tallies {
        let e = tally.degree;
        let s = tally.magic_sum.as_ref().map_or("none".to_string(), |s| s.to_string());
        writeln!(w, "degree.{e}.magic_sum={s}")?;
        writeln!(w, "degree.{e}.rows_ok={}", tally.rows_ok)?;
        writeln!(w, "degree.{e}.columns_ok={}", tally.columns_ok)?;
        writeln!(w, "degree.{e}.main_diagonal={}", tally.main_ok)?;
        writeln!(w, "degree.{e}.back_diagonal={}", tally.back_ok)?;
    }
    writeln!(w, "failures={}", r.failures.len())?;
    writeln!(w, "verdict={}", r.verdict)
}

/// Key-value text for a complementary-family verification.
pub fn write_cms_report<W: Write>(w: &mut W, r: &CmsReport) -> io::Result<()> {
    writeln!(w, "kind=cms_report")?;
    writeln!(w, "m={}", r.count)?;
    writeln!(w, "n={}", r.order)?;
    writeln!(w, "t={}", r.degree)?;
    let target = r.target.as_ref().map_or("none".to_string(), |s| s.to_string());
    writeln!(w, "target={target}")?;
    writeln!(w, "members_ok={}", r.members.iter().filter(|m| m.verdict).count())?;
    for (cond, name) in [
        (crate::verify::CmsCondition::R1, "r1_rows"),
        (crate::verify::CmsCondition::R2, "r2_columns"),
        (crate::verify::CmsCondition::R3Main, "r3_main_diagonal"),
        (crate::verify::CmsCondition::R3Back, "r3_back_diagonal"),
    ] {
        writeln!(w, "{name}={}", !r.failures.iter().any(|(c, _)| *c == cond))?;
    }
    writeln!(w, "verdict={}", r.verdict)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lo_shu() -> MagicSquare {
        MagicSquare::from_rows(1, &[vec![1, 6, 5], vec![8, 4, 0], vec![3, 2, 7]]).unwrap()
    }

    fn round_trip(sq: &MagicSquare) -> MagicSquare {
        let mut buf = Vec::new();
        write_ms(&mut buf, sq).unwrap();
        read_ms(buf.as_slice()).unwrap()
    }

    #[test]
    fn square_text_format() {
        let mut buf = Vec::new();
        write_ms(&mut buf, &lo_shu()).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "MMS 1 n=3 t=1 base=0\n1 6 5\n8 4 0\n3 2 7\n");
        assert_eq!(round_trip(&lo_shu()), lo_shu());
    }

    #[test]
    fn base_is_applied() {
        let text = "MMS 1 n=3 t=1 base=1\n2 7 6\n9 5 1\n4 3 8\n";
        let sq = read_ms(text.as_bytes()).unwrap();
        assert_eq!(sq.entries(), lo_shu().entries());
        assert_eq!(round_trip(&sq), sq);
        let low = "MMS 1 n=1 t=1 base=5\n4\n";
        assert!(matches!(read_ms(low.as_bytes()), Err(IoError::BelowBase { .. })));
    }

    #[test]
    fn malformed_headers() {
        assert!(matches!(read_ms("".as_bytes()), Err(IoError::MissingHeader)));
        assert!(matches!(read_ms("MMX 1 n=1 t=1 base=0\n0\n".as_bytes()), Err(IoError::Magic { .. })));
        assert!(matches!(read_ms("MMS 2 n=1 t=1 base=0\n0\n".as_bytes()), Err(IoError::Version(_))));
        assert!(matches!(read_ms("MMS 1 n=1 t=1\n0\n".as_bytes()), Err(IoError::MissingKey("base"))));
        assert!(matches!(
            read_ms("MMS 1 n=1 t=1 base=0 q=3\n0\n".as_bytes()),
            Err(IoError::UnknownKey(_))
        ));
        assert!(matches!(
            read_ms("MMS 1 n=1 n=1 t=1 base=0\n0\n".as_bytes()),
            Err(IoError::DuplicateKey(_))
        ));
    }

    #[test]
    fn dimension_mismatches() {
        assert!(matches!(read_ms("MMS 1 n=2 t=1 base=0\n0 1\n2\n".as_bytes()), Err(IoError::Dimension(_))));
        assert!(matches!(read_ms("MMS 1 n=2 t=1 base=0\n0 1\n".as_bytes()), Err(IoError::Dimension(_))));
        assert!(matches!(read_ms("MMS 1 n=1 t=1 base=0\nx\n".as_bytes()), Err(IoError::Token { .. })));
    }

    #[test]
    fn binary_round_trip() {
        let mut buf = Vec::new();
        write_ms_binary(&mut buf, &lo_shu()).unwrap();
        assert_eq!(read_ms_binary(buf.as_slice()).unwrap(), lo_shu());
        buf.pop();
        assert!(read_ms_binary(buf.as_slice()).is_err());
    }

    #[test]
    fn empty_family_rejected() {
        let text = "OAF 1 count=0 k=2 cols=4 v=2 t=1\n";
        assert!(read_oa_family(text.as_bytes()).is_err());
    }

    #[test]
    fn oa_family_round_trip() {
        let a = OrthArray::from_rows(2, 1, &[[0u16, 1], [1, 0]]).unwrap();
        let b = OrthArray::from_rows(2, 1, &[[0u16, 1], [0, 1]]).unwrap();
        let fam = ArrayFamily::new(vec![a, b]).unwrap();
        let mut buf = Vec::new();
        write_oa_family(&mut buf, &fam).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "OAF 1 count=2 k=2 cols=2 v=2 t=1\n0 1\n1 0\n\n0 1\n0 1\n"
        );
        assert_eq!(read_oa_family(buf.as_slice()).unwrap(), fam);
    }
}
