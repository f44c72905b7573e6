use std::io::Read;

use log::warn;
use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use super::{Lang, Tokenizer, TranslationMemory};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseReport {
    /// Units read and kept.
    pub units: usize,
    /// Units dropped because a requested language variant was missing.
    pub skipped: usize,
}

/// Reads the `tu`/`tuv`/`seg` subset of TMX with the default tokenizer.
pub fn parse_tmx<R: Read>(stream: R, src_lang: &Lang, tgt_lang: &Lang) -> Result<TranslationMemory> {
    parse_tmx_with(stream, src_lang, tgt_lang, &Tokenizer::default()).map(|(tm, _)| tm)
}

pub fn parse_tmx_with<R: Read>(
    mut stream: R,
    src_lang: &Lang,
    tgt_lang: &Lang,
    tokenizer: &Tokenizer,
) -> Result<(TranslationMemory, ParseReport)> {
    let mut bytes = Vec::new();
    stream.read_to_end(&mut bytes)?;

    let mut reader = Reader::from_reader(bytes.as_slice());
    reader.check_end_names(true);

    let xml_err = |pos: usize, message: String| Error::Xml {
        line: line_at(&bytes, pos),
        message,
    };

    let mut pairs: Vec<(String, String)> = Vec::new();
    let mut report = ParseReport::default();

    // Per-tu state.
    let mut in_tu = false;
    let mut src_seg: Option<String> = None;
    let mut tgt_seg: Option<String> = None;
    // Per-tuv state.
    let mut tuv_lang: Option<String> = None;
    let mut seg_text: Option<String> = None;
    let mut depth = 0usize;

    let mut buf = Vec::new();
    loop {
        let pos = reader.buffer_position();
        let event = reader
            .read_event_into(&mut buf)
            .map_err(|e| xml_err(reader.buffer_position(), e.to_string()))?;
        match event {
            Event::Start(e) => {
                depth += 1;
                match e.local_name().as_ref() {
                    b"tu" => {
                        in_tu = true;
                        src_seg = None;
                        tgt_seg = None;
                    }
                    b"tuv" if in_tu => tuv_lang = lang_attr(&e).map_err(|m| xml_err(pos, m))?,
                    b"seg" if tuv_lang.is_some() => seg_text = Some(String::new()),
                    _ => {}
                }
            }
            Event::Empty(e) => {
                if e.local_name().as_ref() == b"tu" {
                    report.skipped += 1;
                }
            }
            Event::Text(t) => {
                if let Some(seg) = seg_text.as_mut() {
                    let text = t.unescape().map_err(|e| xml_err(pos, e.to_string()))?;
                    seg.push_str(&text);
                }
            }
            Event::CData(t) => {
                if let Some(seg) = seg_text.as_mut() {
                    seg.push_str(&String::from_utf8_lossy(&t));
                }
            }
            Event::End(e) => {
                depth = depth.saturating_sub(1);
                match e.local_name().as_ref() {
                    b"seg" => {
                        if let (Some(lang), Some(text)) = (tuv_lang.as_deref(), seg_text.take()) {
                            let text = text.trim().to_string();
                            if src_lang.matches(lang) && src_seg.is_none() {
                                src_seg = Some(text);
                            } else if tgt_lang.matches(lang) && tgt_seg.is_none() {
                                tgt_seg = Some(text);
                            }
                        }
                    }
                    b"tuv" => tuv_lang = None,
                    b"tu" => {
                        in_tu = false;
                        match (src_seg.take(), tgt_seg.take()) {
                            (Some(s), Some(t)) => pairs.push((s, t)),
                            _ => report.skipped += 1,
                        }
                    }
                    _ => {}
                }
            }
            Event::Eof => break,
            _ => {}
        }
        buf.clear();
    }
    if depth != 0 {
        return Err(xml_err(bytes.len(), "unexpected end of input inside an element".into()));
    }
    if report.skipped > 0 {
        warn!(
            "skipped {} translation unit(s) lacking both `{}` and `{}` variants",
            report.skipped, src_lang, tgt_lang
        );
    }
    if pairs.is_empty() {
        return Err(Error::EmptyMemory);
    }
    report.units = pairs.len();
    let tm = TranslationMemory::from_pairs(pairs, src_lang.clone(), tgt_lang.clone(), tokenizer)?;
    Ok((tm, report))
}

fn lang_attr(e: &BytesStart<'_>) -> std::result::Result<Option<String>, String> {
    for attr in e.attributes() {
        let attr = attr.map_err(|e| e.to_string())?;
        let key = attr.key.as_ref();
        if key == b"xml:lang" || key == b"lang" {
            let v = attr.unescape_value().map_err(|e| e.to_string())?;
            return Ok(Some(v.into_owned()));
        }
    }
    Ok(None)
}

fn line_at(bytes: &[u8], pos: usize) -> usize {
    let end = pos.min(bytes.len());
    1 + bytes[..end].iter().filter(|&&b| b == b'\n').count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn en() -> Lang {
        Lang::new("en")
    }
    fn fr() -> Lang {
        Lang::new("fr")
    }

    fn tmx(body: &str) -> String {
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<tmx version=\"1.4\">\n<header srclang=\"fr\"/>\n<body>\n{body}</body>\n</tmx>\n"
        )
    }

    #[test]
    fn one_unit() {
        let doc = tmx(
            "<tu><tuv xml:lang=\"FR-FR\"><seg>le chien rouge</seg></tuv>\
             <tuv xml:lang=\"EN-GB\"><seg>the red dog</seg></tuv></tu>\n",
        );
        let (tm, rep) = parse_tmx_with(doc.as_bytes(), &fr(), &en(), &Tokenizer::default()).unwrap();
        assert_eq!(tm.len(), 1);
        assert_eq!(rep.skipped, 0);
        let u = &tm.units()[0];
        assert_eq!(u.source.raw, "le chien rouge");
        assert_eq!(u.target.raw, "the red dog");
        assert_eq!(u.source.lang, fr());
        assert_eq!(u.target.lang, en());
    }

    #[test]
    fn missing_target_variant_is_skipped() {
        let doc = tmx(
            "<tu><tuv xml:lang=\"fr\"><seg>un</seg></tuv></tu>\n\
             <tu><tuv xml:lang=\"fr\"><seg>deux</seg></tuv><tuv xml:lang=\"en\"><seg>two</seg></tuv></tu>\n",
        );
        let (tm, rep) = parse_tmx_with(doc.as_bytes(), &fr(), &en(), &Tokenizer::default()).unwrap();
        assert_eq!(tm.len(), 1);
        assert_eq!(rep.skipped, 1);
        assert_eq!(tm.units()[0].id, 0);
    }

    #[test]
    fn entities_are_unescaped() {
        let doc = tmx(
            "<tu><tuv lang=\"fr\"><seg>A &amp; B</seg></tuv><tuv lang=\"en\"><seg>&lt;x&gt;</seg></tuv></tu>\n",
        );
        let tm = parse_tmx(doc.as_bytes(), &fr(), &en()).unwrap();
        assert_eq!(tm.units()[0].source.raw, "A & B");
        assert_eq!(tm.units()[0].target.raw, "<x>");
    }

    #[test]
    fn malformed_xml_reports_line() {
        let doc = "<tmx>\n<body>\n<tu><tuv xml:lang=\"fr\"><seg>x</tuv>\n</body></tmx>";
        match parse_tmx(doc.as_bytes(), &fr(), &en()) {
            Err(Error::Xml { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected xml error, got {other:?}"),
        }
    }

    #[test]
    fn truncated_document() {
        let doc = "<tmx>\n<body>\n<tu>";
        assert!(matches!(
            parse_tmx(doc.as_bytes(), &fr(), &en()),
            Err(Error::Xml { .. })
        ));
    }

    #[test]
    fn no_units_is_empty_memory() {
        let doc = tmx("");
        assert!(matches!(
            parse_tmx(doc.as_bytes(), &fr(), &en()),
            Err(Error::EmptyMemory)
        ));
    }
}
