use std::io::{BufRead, BufReader, Write};
use std::net::TcpListener;
use std::path::Path;
use std::thread;
use std::time::Duration;

use ramification::lmfdb::{
    fetch_record, ingest_batch, normalized_from_record, parse_record, read_fixture_dir,
    FetchConfig, DEFAULT_FIXTURE_DIR,
};
use ramification::newton::depth_multiset_from_polynomial;
use ramification::rat::{int, rat};
use ramification::{DepthMultiset, EisensteinPoly, Error, FetchError, TranslationTable};

fn fixture(id: &str) -> Vec<u8> {
    fetch_record(id, &FetchConfig::default()).unwrap()
}

#[test]
fn quaternion_record_gives_integral_upper_jumps() {
    let rec = parse_record(&fixture("q2-quaternion"), &TranslationTable::default()).unwrap();
    let (d, report) = normalized_from_record(&rec).unwrap();
    assert_eq!(d.jumps(), vec![rat(1, 8), rat(3, 8), rat(7, 8)]);
    assert_eq!(d.upper_jumps(), vec![int(1), int(2), int(3)]);
    assert!(report.all_passed(), "{report}");
}

#[test]
fn lmfdb_schema_matches_native_schema() {
    let dir = Path::new(DEFAULT_FIXTURE_DIR).join("lmfdb");
    let bytes = std::fs::read(dir.join("2.8.24.q8.json")).unwrap();
    let mapped = parse_record(&bytes, &TranslationTable::lmfdb()).unwrap();
    let native = parse_record(&fixture("q2-quaternion"), &TranslationTable::default()).unwrap();
    assert_eq!(mapped.jumps, native.jumps);
    assert_eq!(
        normalized_from_record(&mapped).unwrap().0,
        normalized_from_record(&native).unwrap().0
    );
}

#[test]
fn polynomial_and_jump_sources_agree() {
    let table = TranslationTable::default();
    let mut both = 0;
    for bytes in read_fixture_dir(Path::new(DEFAULT_FIXTURE_DIR)).unwrap() {
        let rec = parse_record(&bytes, &table).unwrap();
        if let (Some(poly), Some(jumps)) = (&rec.poly, &rec.jumps) {
            let f = EisensteinPoly::new(poly.clone(), rec.p).unwrap();
            let per_root = depth_multiset_from_polynomial(&f, false).unwrap().per_root();
            let from_poly = DepthMultiset::new(per_root, rec.e, rec.p).unwrap();
            let from_jumps = ramification::lmfdb::multiset_from_jumps(jumps, rec.e, rec.p).unwrap();
            assert_eq!(from_poly, from_jumps, "{}", rec.id);
            both += 1;
        }
    }
    assert!(both >= 4);
}

#[test]
fn discriminant_checks() {
    let table = TranslationTable::default();
    for (id, consistent) in [
        ("q2-root2", true),
        ("q2-root-minus1", true),
        ("q3-zeta9", true),
        ("q2-zeta8", true),
        ("q2-zeta8-poly", true),
        ("q2-root2-baddisc", false),
    ] {
        let rec = parse_record(&fixture(id), &table).unwrap();
        let (_, report) = normalized_from_record(&rec).unwrap();
        assert_eq!(report.get("discriminant exponent").unwrap().passed, consistent, "{id}");
    }
    let poly_only = parse_record(&fixture("q2-zeta8-poly"), &table).unwrap();
    assert!(poly_only.derive_via_newton());
    let (d, _) = normalized_from_record(&poly_only).unwrap();
    assert_eq!(d, ramification::presets::cyclotomic_multiset(2, 3).unwrap());
}

#[test]
fn batch_is_sorted_and_order_independent() {
    let table = TranslationTable::default();
    let mut inputs = read_fixture_dir(Path::new(DEFAULT_FIXTURE_DIR)).unwrap();
    let (first, errs) = ingest_batch(&inputs, &table);
    assert!(errs.is_empty());
    inputs.reverse();
    inputs.extend(inputs.clone());
    inputs.push(b"not json".to_vec());
    let (second, errs) = ingest_batch(&inputs, &table);
    assert_eq!(errs.len(), 1);
    let ids = |v: &[ramification::lmfdb::Ingested]| v.iter().map(|i| i.id.clone()).collect::<Vec<_>>();
    assert_eq!(ids(&first), ids(&second));
    let mut sorted = ids(&first);
    sorted.sort();
    assert_eq!(ids(&first), sorted);
    for (a, b) in first.iter().zip(&second) {
        assert_eq!(a.result.as_ref().unwrap().0, b.result.as_ref().unwrap().0);
    }
}

#[test]
fn fetch_policies() {
    let offline = FetchConfig::default();
    assert!(matches!(
        fetch_record("2.4.11.missing", &offline),
        Err(FetchError::Policy(_))
    ));
    let fixtures_only = FetchConfig {
        offline: false,
        ..FetchConfig::default()
    };
    assert!(matches!(
        fetch_record("2.4.11.missing", &fixtures_only),
        Err(FetchError::NotFound(_))
    ));
    assert!(matches!(
        fetch_record("../Cargo", &fixtures_only),
        Err(FetchError::NotFound(_))
    ));
    let err: Error = FetchError::NotFound("x".into()).into();
    assert!(matches!(err, Error::Fetch(_)));
}

/// Serves one canned response per connection: 200 for `/known`, 404 otherwise.
fn serve(requests: usize) -> String {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    thread::spawn(move || {
        for stream in listener.incoming().take(requests) {
            let mut stream = stream.unwrap();
            let mut line = String::new();
            BufReader::new(&stream).read_line(&mut line).unwrap();
            let body = r#"{"id":"known","p":2,"n":2,"e":2,"f":1,"poly":[-2,0,1],"disc_exp":3}"#;
            let response = if line.contains("/known ") {
                format!("HTTP/1.1 200 OK\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}", body.len())
            } else {
                "HTTP/1.1 404 Not Found\r\nContent-Length: 0\r\nConnection: close\r\n\r\n".to_string()
            };
            stream.write_all(response.as_bytes()).unwrap();
        }
    });
    format!("http://{addr}")
}

#[test]
fn fetch_over_http() {
    let cfg = FetchConfig {
        fixture_dir: None,
        endpoint: Some(serve(2)),
        offline: false,
        timeout: Duration::from_secs(5),
    };
    let bytes = fetch_record("known", &cfg).unwrap();
    let rec = parse_record(&bytes, &TranslationTable::default()).unwrap();
    assert!(normalized_from_record(&rec).unwrap().1.all_passed());
    assert!(matches!(fetch_record("unknown", &cfg), Err(FetchError::NotFound(_))));
    let closed = FetchConfig {
        endpoint: Some("http://127.0.0.1:1".into()),
        ..cfg
    };
    assert!(matches!(fetch_record("known", &closed), Err(FetchError::Transport(_))));
}
