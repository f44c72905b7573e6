//! A test backend that answers every request with its own left anchor.
//!
//! It can drop chosen ids and answer in shuffled order, which exercises
//! the client's id matching. Served over stdin/stdout or over HTTP.

use std::collections::HashSet;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::net::{TcpListener, TcpStream};

use super::external::{WireRequest, WireResponse};
use super::PredictionCandidate;
use crate::corpus::SplitRng;

#[derive(Debug, Clone, Default)]
pub struct EchoOptions {
    pub drop_ids: HashSet<u64>,
    /// Answer after reading all input, in an order shuffled by this seed.
    pub shuffle_seed: Option<u64>,
}

fn answer(line: &str, opts: &EchoOptions) -> Option<String> {
    let line = line.trim();
    if line.is_empty() {
        return None;
    }
    let resp = match serde_json::from_str::<WireRequest>(line) {
        Ok(req) if opts.drop_ids.contains(&req.id) => return None,
        Ok(req) => WireResponse::Candidates {
            id: req.id,
            candidates: vec![PredictionCandidate {
                token: req.left,
                score: 1.0,
            }],
        },
        Err(e) => {
            let id = serde_json::from_str::<serde_json::Value>(line)
                .ok()?
                .get("id")?
                .as_u64()?;
            WireResponse::Error {
                id,
                error: format!("bad request: {e}"),
            }
        }
    };
    serde_json::to_string(&resp).ok()
}

/// Answers every request line of `input`.
pub fn answer_all(input: &str, opts: &EchoOptions) -> String {
    let mut lines: Vec<String> = input.lines().filter_map(|l| answer(l, opts)).collect();
    if let Some(seed) = opts.shuffle_seed {
        SplitRng::new(seed).shuffle(&mut lines);
    }
    let mut out = lines.join("\n");
    if !out.is_empty() {
        out.push('\n');
    }
    out
}

/// Line-oriented loop for the subprocess transport.
pub fn run_stdio<R: BufRead, W: Write>(input: R, mut output: W, opts: &EchoOptions) -> io::Result<()> {
    if opts.shuffle_seed.is_some() {
        let mut all = String::new();
        for line in input.lines() {
            all.push_str(&line?);
            all.push('\n');
        }
        output.write_all(answer_all(&all, opts).as_bytes())?;
        return output.flush();
    }
    for line in input.lines() {
        if let Some(resp) = answer(&line?, opts) {
            writeln!(output, "{resp}")?;
            output.flush()?;
        }
    }
    Ok(())
}

fn handle_http(stream: TcpStream, opts: &EchoOptions) -> io::Result<()> {
    let mut reader = BufReader::new(stream.try_clone()?);
    let mut request_line = String::new();
    reader.read_line(&mut request_line)?;
    let mut content_length = 0usize;
    loop {
        let mut header = String::new();
        if reader.read_line(&mut header)? == 0 || header == "\r\n" || header == "\n" {
            break;
        }
        if let Some((name, value)) = header.split_once(':') {
            if name.trim().eq_ignore_ascii_case("content-length") {
                content_length = value.trim().parse().unwrap_or(0);
            }
        }
    }
    let mut body = vec![0u8; content_length];
    reader.read_exact(&mut body)?;
    let mut parts = request_line.split_whitespace();
    let (method, path) = (parts.next().unwrap_or(""), parts.next().unwrap_or(""));
    let (status, payload) = if method == "POST" && path == "/predict" {
        ("200 OK", answer_all(&String::from_utf8_lossy(&body), opts))
    } else {
        ("404 Not Found", String::new())
    };
    let mut stream = stream;
    write!(
        stream,
        "HTTP/1.1 {status}\r\nContent-Type: application/x-ndjson\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{payload}",
        payload.len()
    )?;
    stream.flush()
}

/// Serves `POST /predict` until `max_requests` connections were handled
/// (forever when `None`).
pub fn serve_http(listener: TcpListener, opts: &EchoOptions, max_requests: Option<usize>) -> io::Result<()> {
    let mut handled = 0;
    for stream in listener.incoming() {
        if let Err(e) = handle_http(stream?, opts) {
            log::warn!("echo backend: {e}");
        }
        handled += 1;
        if max_requests.is_some_and(|m| handled >= m) {
            break;
        }
    }
    Ok(())
}
