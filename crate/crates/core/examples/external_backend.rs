// Talks to an out-of-process predictor over the NDJSON protocol. The
// backend here is the built-in echo server on a local HTTP port; it drops
// one request and shuffles the rest, and the client still pairs every
// answer with its query.
//
// Any program that reads requests on stdin and writes answers on stdout
// works with the subprocess transport, e.g.
// `anchorfill predict --backend-cmd "python3 examples/chat_backend.py" ...`.
//
//     cargo run --example external_backend

use std::net::TcpListener;

use anchorfill::alignment::{FuzzyBand, HOLE_MARKER};
use anchorfill::predictors::echo::{serve_http, EchoOptions};
use anchorfill::predictors::{ExternalConfig, ExternalPredictor, HoleQuery, Prediction, Predictor};

pub fn run() -> anchorfill::Result<Vec<anchorfill::Result<Prediction>>> {
    let listener = TcpListener::bind("127.0.0.1:0")?;
    let url = format!("http://{}", listener.local_addr()?);
    let opts = EchoOptions {
        drop_ids: [3].into_iter().collect(),
        shuffle_seed: Some(11),
    };
    let server = std::thread::spawn(move || serve_http(listener, &opts, Some(1)));

    let queries: Vec<HoleQuery> = (0..6u64)
        .map(|id| {
            let left = format!("left{id}");
            HoleQuery {
                id,
                left: left.clone(),
                right: "right".into(),
                masked_segment: vec![left, HOLE_MARKER.into(), "right".into()],
                hole_index: 1,
                tu_source: "texte source".into(),
                band: FuzzyBand::B80,
            }
        })
        .collect();
    let mut config = ExternalConfig::http(url);
    config.timeout_secs = 10.0;
    let backend = ExternalPredictor::new(config)?;
    let answers = backend.predict_batch(&queries, 1);
    server.join().expect("server thread")?;

    for (q, a) in queries.iter().zip(&answers) {
        match a {
            Ok(p) => println!("query {}: {}", q.id, p.top().map(|c| c.token.as_str()).unwrap_or("-")),
            Err(e) => println!("query {}: {e}", q.id),
        }
    }
    Ok(answers)
}

#[allow(dead_code)]
fn main() -> anchorfill::Result<()> {
    run().map(|_| ())
}
