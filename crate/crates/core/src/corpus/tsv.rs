use std::io::{BufRead, BufReader, Read, Write};

use super::{Lang, Tokenizer, TranslationMemory};
use crate::error::{Error, Result};

/// Reads `source<TAB>target` lines. Blank lines are skipped and do not
/// consume an id.
pub fn parse_bitext_tsv<R: Read>(stream: R, src_lang: &Lang, tgt_lang: &Lang) -> Result<TranslationMemory> {
    parse_bitext_tsv_with(stream, src_lang, tgt_lang, &Tokenizer::default())
}

pub fn parse_bitext_tsv_with<R: Read>(
    stream: R,
    src_lang: &Lang,
    tgt_lang: &Lang,
    tokenizer: &Tokenizer,
) -> Result<TranslationMemory> {
    let mut pairs = Vec::new();
    let mut reader = BufReader::new(stream);
    let mut raw = Vec::new();
    let mut line_no = 0;
    loop {
        raw.clear();
        if reader.read_until(b'\n', &mut raw)? == 0 {
            break;
        }
        line_no += 1;
        let line = std::str::from_utf8(&raw).map_err(|e| Error::Tsv {
            line: line_no,
            message: format!("invalid UTF-8: {e}"),
        })?;
        let line = line.strip_suffix('\n').unwrap_or(line);
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split('\t');
        match (fields.next(), fields.next(), fields.next()) {
            (Some(s), Some(t), None) => pairs.push((s.to_string(), t.to_string())),
            _ => {
                let tabs = line.matches('\t').count();
                return Err(Error::Tsv {
                    line: line_no,
                    message: format!("expected exactly one tab, found {tabs}"),
                });
            }
        }
    }
    if pairs.is_empty() {
        return Err(Error::EmptyMemory);
    }
    TranslationMemory::from_pairs(pairs, src_lang.clone(), tgt_lang.clone(), tokenizer)
}

/// Writes the canonical TSV form of `tm`.
pub fn write_bitext_tsv<W: Write>(tm: &TranslationMemory, mut out: W) -> Result<()> {
    for u in tm.units() {
        for (what, text) in [("source", &u.source.raw), ("target", &u.target.raw)] {
            if text.contains(['\t', '\n', '\r']) {
                return Err(Error::Tsv {
                    line: u.id as usize + 1,
                    message: format!("{what} text contains a tab or line break"),
                });
            }
        }
        writeln!(out, "{}\t{}", u.source.raw, u.target.raw)?;
    }
    out.flush()?;
    Ok(())
}
