//! Text formats for generator files and kernel/image system files.
//!
//! Generator file: the degree n on the first line, then one generator per
//! line as n space-separated 1-based images. System file: a header line
//! `n <n> r <r>`, an `images:` section with one set per line and a
//! `partitions:` section with blocks separated by `|`. Both formats allow
//! `#` comments and blank lines.

use thiserror::Error;

use crate::construct::{ImageSystem, SetPartition};
use crate::transformation::Transformation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> FormatError {
    FormatError { line, column, message: message.into() }
}

/// Non-blank lines with comments stripped: (1-based line number, text).
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let body = l.split('#').next().unwrap_or("");
        (!body.trim().is_empty()).then_some((i + 1, body))
    })
}

/// Tokens with their 1-based columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    line.char_indices()
        .filter(|&(i, c)| !c.is_whitespace() && (i == 0 || line[..i].ends_with(char::is_whitespace)))
        .map(move |(i, _)| {
            let rest = &line[i..];
            let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
            (line[..i].chars().count() + 1, &rest[..end])
        })
}

fn number(line: usize, column: usize, tok: &str) -> Result<usize, FormatError> {
    tok.parse().map_err(|_| err(line, column, format!("expected a positive integer, found {tok:?}")))
}

fn points(line_no: usize, line: &str, offset: usize, n: usize) -> Result<Vec<usize>, FormatError> {
    tokens(line)
        .map(|(c, t)| {
            let p = number(line_no, c + offset, t)?;
            if p == 0 || p > n {
                return Err(err(line_no, c + offset, format!("point {p} outside 1..={n}")));
            }
            Ok(p)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorFile {
    pub n: usize,
    pub generators: Vec<Transformation>,
}

pub fn parse_generator_file(text: &str) -> Result<GeneratorFile, FormatError> {
    let mut lines = content_lines(text);
    let (first_no, first) = lines.next().ok_or_else(|| err(1, 1, "empty file"))?;
    let mut head = tokens(first);
    let (c, t) = head.next().expect("non-blank line has a token");
    let n = number(first_no, c, t)?;
    if n == 0 {
        return Err(err(first_no, c, "degree must be at least 1"));
    }
    if let Some((c, t)) = head.next() {
        return Err(err(first_no, c, format!("unexpected token {t:?} after the degree")));
    }
    let mut generators = Vec::new();
    for (no, line) in lines {
        let imgs = points(no, line, 0, n)?;
        if imgs.len() != n {
            return Err(err(no, 1, format!("generator has {} images, expected {n}", imgs.len())));
        }
        generators.push(Transformation::new(imgs).expect("images checked"));
    }
    Ok(GeneratorFile { n, generators })
}

pub fn render_generator_file(n: usize, generators: &[Transformation]) -> String {
    let mut out = format!("{n}\n");
    for g in generators {
        let imgs: Vec<String> = g.images().iter().map(usize::to_string).collect();
        out.push_str(&imgs.join(" "));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemFile {
    pub partitions: Vec<SetPartition>,
    pub images: ImageSystem,
}

pub fn parse_system_file(text: &str) -> Result<SystemFile, FormatError> {
    let mut lines = content_lines(text).peekable();
    let (hno, header) = lines.next().ok_or_else(|| err(1, 1, "empty file"))?;
    let toks: Vec<(usize, &str)> = tokens(header).collect();
    if toks.len() != 4 || toks[0].1 != "n" || toks[2].1 != "r" {
        return Err(err(hno, 1, "expected a header of the form \"n <n> r <r>\""));
    }
    let n = number(hno, toks[1].0, toks[1].1)?;
    let r = number(hno, toks[3].0, toks[3].1)?;
    if n == 0 || r == 0 || r > n {
        return Err(err(hno, 1, format!("need 1 ≤ r ≤ n, found n = {n}, r = {r}")));
    }

    #[derive(PartialEq)]
    enum Section {
        None,
        Images,
        Partitions,
    }
    let mut section = Section::None;
    let mut sets = Vec::new();
    let mut parts = Vec::new();
    for (no, line) in lines {
        match line.trim() {
            "images:" => {
                section = Section::Images;
                continue;
            }
            "partitions:" => {
                section = Section::Partitions;
                continue;
            }
            _ => {}
        }
        match section {
            Section::None => return Err(err(no, 1, "expected \"images:\" or \"partitions:\"")),
            Section::Images => {
                let set = points(no, line, 0, n)?;
                if set.len() != r {
                    return Err(err(no, 1, format!("image set has {} points, expected {r}", set.len())));
                }
                let mut sorted = set.clone();
                sorted.sort_unstable();
                if sorted.windows(2).any(|w| w[0] == w[1]) {
                    return Err(err(no, 1, "image set repeats a point"));
                }
                sets.push(set);
            }
            Section::Partitions => {
                let mut blocks = Vec::new();
                let mut offset = 0;
                for piece in line.split('|') {
                    let block = points(no, piece, offset, n)?;
                    if block.is_empty() {
                        return Err(err(no, offset + 1, "empty block"));
                    }
                    blocks.push(block);
                    offset += piece.chars().count() + 1;
                }
                let p = SetPartition::new(n, blocks).map_err(|e| err(no, 1, e.to_string()))?;
                parts.push(p);
            }
        }
    }
    let images = ImageSystem::new(n, r, sets).map_err(|e| err(hno, 1, e.to_string()))?;
    Ok(SystemFile { partitions: parts, images })
}

pub fn render_system_file(partitions: &[SetPartition], images: &ImageSystem) -> String {
    let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
    let mut out = format!("n {} r {}\nimages:\n", images.degree(), images.rank());
    for s in images.sets() {
        out.push_str(&join(s));
        out.push('\n');
    }
    out.push_str("partitions:\n");
    for p in partitions {
        let blocks: Vec<String> = p.blocks().iter().map(|b| join(b)).collect();
        out.push_str(&blocks.join(" | "));
        out.push('\n');
    }
    out
}

/// Either kind of input file, told apart by the header line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputFile {
    Generators(GeneratorFile),
    System(SystemFile),
}

pub fn parse_input(text: &str) -> Result<InputFile, FormatError> {
    let is_system = content_lines(text).next().is_some_and(|(_, l)| l.trim_start().starts_with('n'));
    if is_system {
        parse_system_file(text).map(InputFile::System)
    } else {
        parse_generator_file(text).map(InputFile::Generators)
    }
}
