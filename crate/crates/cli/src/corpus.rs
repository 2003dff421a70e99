//! Corpus text format: one record per line,
//! `name ; degree ; gen1, gen2, ...` with generators in disjoint-cycle
//! notation. Whitespace-insensitive; `#` begins a comment line.

use weightlab_core::group::{parse_cycles, Perm};
use weightlab_core::{Error, Result};

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub degree: usize,
    pub generators: Vec<Perm>,
    pub line: usize,
}

pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.splitn(3, ';').collect();
        if parts.len() != 3 {
            return Err(Error::Input(format!(
                "line {}: expected `name ; degree ; generators`",
                lineno + 1
            )));
        }
        let name = parts[0].trim().to_string();
        let degree: usize = parts[1].trim().parse().map_err(|_| {
            Error::Input(format!("line {}: bad degree `{}`", lineno + 1, parts[1].trim()))
        })?;
        // generators separated by commas at cycle boundaries: split on `,`
        // only outside parentheses (cycles never contain commas, but be
        // permissive)
        let mut gens = Vec::new();
        let mut depth = 0usize;
        let mut cur = String::new();
        for ch in parts[2].chars() {
            match ch {
                '(' => {
                    depth += 1;
                    cur.push(ch);
                }
                ')' => {
                    depth = depth.saturating_sub(1);
                    cur.push(ch);
                }
                ',' if depth == 0 => {
                    if !cur.trim().is_empty() {
                        gens.push(cur.trim().to_string());
                    }
                    cur.clear();
                }
                _ => cur.push(ch),
            }
        }
        if !cur.trim().is_empty() {
            gens.push(cur.trim().to_string());
        }
        let generators = gens
            .iter()
            .map(|g| {
                parse_cycles(g, degree).map_err(|e| {
                    Error::Input(format!("line {}: {}", lineno + 1, e))
                })
            })
            .collect::<Result<Vec<Perm>>>()?;
        out.push(CorpusEntry { name, degree, generators, line: lineno + 1 });
    }
    Ok(out)
}

pub const BUILTIN_CORPUS: &str = include_str!("../data/corpus.txt");

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_builtin() {
        let entries = parse_corpus(BUILTIN_CORPUS).unwrap();
        assert!(entries.len() >= 17);
        assert_eq!(entries[0].name, "C2");
    }

    #[test]
    fn parse_errors() {
        assert!(parse_corpus("S3 ; x ; (1 2)").is_err());
        assert!(parse_corpus("S3 ; 3").is_err());
        assert!(parse_corpus("# only a comment\n").unwrap().is_empty());
    }
}
