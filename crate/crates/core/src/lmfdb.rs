//! Local-field records: parsing, conversion to normalized depth multisets with
//! discriminant and polynomial cross-checks, fixture-first fetching and batch
//! ingestion.

use std::path::{Path, PathBuf};
use std::time::Duration;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, FetchError, Result};
use crate::newton::{depth_multiset_from_polynomial, EisensteinPoly, PolynomialDepths};
use crate::poly::IntPoly;
use crate::rat::{fmt_rat, from_u64, is_prime, parse_rat, valuation_u64, Depth, Rat};
use crate::ramgroup::{DepthMultiset, ValidationReport};

/// Fixtures shipped with the crate.
pub const DEFAULT_FIXTURE_DIR: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");

/// Source field names and the convention of the jump field. Jump values are
/// converted by `depth = (raw − shift) / e` when `divide_by_e` is set and
/// `depth = raw − shift` otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct TranslationTable {
    pub id: String,
    pub p: String,
    pub n: String,
    pub e: String,
    pub f: String,
    pub poly: String,
    pub jumps: String,
    pub disc_exp: String,
    pub gal: String,
    pub divide_by_e: bool,
    pub shift: String,
}

impl Default for TranslationTable {
    /// The native schema, with jumps already normalized.
    fn default() -> Self {
        TranslationTable {
            id: "id".into(),
            p: "p".into(),
            n: "n".into(),
            e: "e".into(),
            f: "f".into(),
            poly: "poly".into(),
            jumps: "lower_jumps_normalized".into(),
            disc_exp: "disc_exp".into(),
            gal: "gal".into(),
            divide_by_e: false,
            shift: "0".into(),
        }
    }
}

impl TranslationTable {
    /// Field names of the LMFDB local-field export, with lower jumps in the
    /// classical (valuation of `L`) indexing.
    pub fn lmfdb() -> Self {
        TranslationTable {
            id: "label".into(),
            poly: "coeffs".into(),
            jumps: "jump_set".into(),
            disc_exp: "c".into(),
            divide_by_e: true,
            ..Self::default()
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("translation table: {e}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalFieldRecord {
    pub id: String,
    pub p: u64,
    pub n: u64,
    pub e: u64,
    pub f: u64,
    pub poly: Option<IntPoly>,
    /// Normalized lower jumps, one per index-`p` step of the wild inertia.
    pub jumps: Option<Vec<Rat>>,
    pub disc_exp: Option<u64>,
    pub gal: Option<String>,
}

impl LocalFieldRecord {
    /// Only a polynomial is available, so depths must come from its roots.
    pub fn derive_via_newton(&self) -> bool {
        self.jumps.is_none() && self.poly.is_some()
    }
}

fn field<'a>(obj: &'a serde_json::Map<String, Value>, name: &str) -> Option<&'a Value> {
    obj.get(name).filter(|v| !v.is_null())
}

fn required_u64(obj: &serde_json::Map<String, Value>, name: &str) -> Result<u64> {
    field(obj, name)
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Record(format!("missing or non-integer `{name}`")))
}

fn value_rat(v: &Value) -> Result<Rat> {
    match v {
        Value::String(s) => parse_rat(s),
        Value::Number(n) => n
            .as_i64()
            .map(|i| Rat::from_integer(i.into()))
            .ok_or_else(|| Error::Record(format!("jump `{n}` is not exact"))),
        _ => Err(Error::Record(format!("jump `{v}` is not a number"))),
    }
}

fn value_bigint(v: &Value) -> Result<BigInt> {
    let s = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        _ => return Err(Error::Record(format!("coefficient `{v}` is not an integer"))),
    };
    s.parse()
        .map_err(|_| Error::Record(format!("coefficient `{s}` is not an integer")))
}

/// Parses one JSON record through a translation table.
pub fn parse_record(bytes: &[u8], table: &TranslationTable) -> Result<LocalFieldRecord> {
    let text = std::str::from_utf8(bytes).map_err(|_| Error::Record("record is not UTF-8".into()))?;
    let value: Value =
        serde_json::from_str(text).map_err(|e| Error::Record(format!("malformed JSON: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Record("record must be a JSON object".into()))?;
    let id = match field(obj, &table.id) {
        Some(Value::String(s)) => s.clone(),
        Some(v) => v.to_string(),
        None => return Err(Error::Record(format!("missing `{}`", table.id))),
    };
    let (p, n, e, f) = (
        required_u64(obj, &table.p)?,
        required_u64(obj, &table.n)?,
        required_u64(obj, &table.e)?,
        required_u64(obj, &table.f)?,
    );
    if !is_prime(p) {
        return Err(Error::Record(format!("{p} is not prime")));
    }
    if e == 0 || e * f != n {
        return Err(Error::Record(format!("e·f = {e}·{f} differs from n = {n}")));
    }
    let poly = match field(obj, &table.poly) {
        None => None,
        Some(Value::Array(cs)) => Some(IntPoly::new(
            cs.iter().map(value_bigint).collect::<Result<_>>()?,
        )),
        Some(_) => return Err(Error::Record("polynomial must be a coefficient array".into())),
    };
    let shift = parse_rat(&table.shift)?;
    let jumps = match field(obj, &table.jumps) {
        None => None,
        Some(Value::Array(js)) => {
            let mut out = Vec::with_capacity(js.len());
            for j in js {
                let raw = value_rat(j)? - &shift;
                out.push(if table.divide_by_e { raw / from_u64(e) } else { raw });
            }
            out.sort();
            Some(out)
        }
        Some(_) => return Err(Error::Record("jumps must be an array".into())),
    };
    let disc_exp = match field(obj, &table.disc_exp) {
        None => None,
        Some(v) => Some(
            v.as_u64()
                .ok_or_else(|| Error::Record("discriminant exponent must be a nonnegative integer".into()))?,
        ),
    };
    if let Some(d) = disc_exp {
        if d + 1 < e {
            return Err(Error::Record(format!("discriminant exponent {d} is below e − 1 = {}", e - 1)));
        }
    }
    let gal = field(obj, &table.gal).map(|v| match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    });
    Ok(LocalFieldRecord {
        id,
        p,
        n,
        e,
        f,
        poly,
        jumps,
        disc_exp,
        gal,
    })
}

/// The inertia multiset from lower jumps listed with repetition: the group of
/// order `e` has wild part `p^k` with `k` the number of jumps, `|I_t|` is `p`
/// to the number of jumps `≥ t`, and the remaining `e − p^k` elements have
/// depth 0.
pub fn multiset_from_jumps(jumps: &[Rat], e: u64, p: u64) -> Result<DepthMultiset> {
    let k = jumps.len() as u32;
    if valuation_u64(e, p) != k {
        return Err(Error::Record(format!(
            "{k} jumps listed but the wild part of e = {e} has p-exponent {}",
            valuation_u64(e, p)
        )));
    }
    if jumps.iter().any(|j| *j <= Rat::zero()) {
        return Err(Error::Record("wild jumps must be positive".into()));
    }
    let mut sorted = jumps.to_vec();
    sorted.sort();
    let mut entries = Vec::new();
    let wild = p.pow(k);
    if e > wild {
        entries.push((Depth::zero(), e - wild));
    }
    let mut i = 0;
    while i < sorted.len() {
        let t = &sorted[i];
        let at_least = sorted.len() - i;
        let mut j = i;
        while j < sorted.len() && sorted[j] == *t {
            j += 1;
        }
        let above = sorted.len() - j;
        entries.push((Depth::Finite(t.clone()), p.pow(at_least as u32) - p.pow(above as u32)));
        i = j;
    }
    entries.push((Depth::Infinite, 1));
    DepthMultiset::new(entries, e, p)
}

/// Converts a record and cross-checks its sources. A disagreement between
/// the jump data and the polynomial is an error; a discriminant mismatch is
/// reported as a failed check.
pub fn normalized_from_record(rec: &LocalFieldRecord) -> Result<(DepthMultiset, ValidationReport)> {
    let mut report = ValidationReport::default();
    let from_jumps = rec
        .jumps
        .as_ref()
        .map(|j| multiset_from_jumps(j, rec.e, rec.p))
        .transpose()?;
    let from_poly = match &rec.poly {
        Some(poly) if rec.f == 1 => {
            let f = EisensteinPoly::new(poly.clone(), rec.p)?;
            Some(depth_multiset_from_polynomial(&f, false)?)
        }
        Some(_) => {
            report.push("polynomial route", true, "skipped: not totally ramified");
            None
        }
        None => None,
    };
    let multiset = match (&from_jumps, &from_poly) {
        (Some(j), Some(poly)) => {
            let per_root = DepthMultiset::new(poly.per_root(), rec.e, rec.p)?;
            if per_root != *j {
                return Err(Error::Inconsistent(format!(
                    "record {}: jumps and polynomial give different depths",
                    rec.id
                )));
            }
            report.push("jumps agree with polynomial", true, "");
            j.clone()
        }
        (Some(j), None) => j.clone(),
        (None, Some(_)) => {
            let f = EisensteinPoly::new(rec.poly.clone().unwrap(), rec.p)?;
            match depth_multiset_from_polynomial(&f, true)? {
                PolynomialDepths::Galois(d) => d,
                PolynomialDepths::Aggregate { .. } => unreachable!("requested as Galois"),
            }
        }
        (None, None) => {
            return Err(Error::Record(format!(
                "record {} has neither jumps nor a totally ramified polynomial",
                rec.id
            )))
        }
    };
    if let Some(disc) = rec.disc_exp {
        let expected = from_u64(rec.n) * multiset.differental_exponent(1)?;
        report.push(
            "discriminant exponent",
            expected == from_u64(disc),
            format!("n·d = {}, record says {disc}", fmt_rat(&expected)),
        );
    }
    Ok((multiset, report))
}

/// Where records may come from.
#[derive(Clone, Debug)]
pub struct FetchConfig {
    pub fixture_dir: Option<PathBuf>,
    pub endpoint: Option<String>,
    pub offline: bool,
    pub timeout: Duration,
}

impl Default for FetchConfig {
    fn default() -> Self {
        FetchConfig {
            fixture_dir: Some(PathBuf::from(DEFAULT_FIXTURE_DIR)),
            endpoint: None,
            offline: true,
            timeout: Duration::from_secs(10),
        }
    }
}

fn fixture_path(dir: &Path, id: &str) -> Option<PathBuf> {
    if id.is_empty() || id.contains(['/', '\\']) || id.starts_with('.') {
        return None;
    }
    let path = dir.join(format!("{id}.json"));
    path.is_file().then_some(path)
}

/// Raw record bytes: from the fixture directory when present, otherwise from
/// `GET {endpoint}/{id}` if network access is allowed.
pub fn fetch_record(id: &str, cfg: &FetchConfig) -> Result<Vec<u8>, FetchError> {
    if let Some(path) = cfg.fixture_dir.as_deref().and_then(|d| fixture_path(d, id)) {
        return std::fs::read(&path).map_err(|e| FetchError::Transport(e.to_string()));
    }
    if cfg.offline {
        return Err(FetchError::Policy(id.to_string()));
    }
    let Some(endpoint) = &cfg.endpoint else {
        return Err(FetchError::NotFound(id.to_string()));
    };
    let url = format!("{}/{}", endpoint.trim_end_matches('/'), id);
    let agent = ureq::AgentBuilder::new().timeout(cfg.timeout).build();
    match agent.get(&url).call() {
        Ok(resp) => {
            let mut buf = Vec::new();
            std::io::Read::read_to_end(&mut resp.into_reader(), &mut buf)
                .map_err(|e| FetchError::Transport(e.to_string()))?;
            Ok(buf)
        }
        Err(ureq::Error::Status(404, _)) => Err(FetchError::NotFound(id.to_string())),
        Err(ureq::Error::Status(code, _)) => Err(FetchError::Transport(format!("HTTP {code}"))),
        Err(e) => Err(FetchError::Transport(e.to_string())),
    }
}

/// The outcome of ingesting one record.
#[derive(Clone, Debug)]
pub struct Ingested {
    pub id: String,
    pub record: LocalFieldRecord,
    pub result: Result<(DepthMultiset, ValidationReport)>,
}

/// Parses and converts records concurrently. Results are sorted by
/// identifier and exact duplicates collapse, so the output does not depend
/// on input order or repetition. Unparseable inputs are returned separately
/// with their index in the input.
pub fn ingest_batch(
    inputs: &[Vec<u8>],
    table: &TranslationTable,
) -> (Vec<Ingested>, Vec<(usize, Error)>) {
    let parsed: Vec<(usize, Result<LocalFieldRecord>)> = inputs
        .par_iter()
        .enumerate()
        .map(|(i, bytes)| (i, parse_record(bytes, table)))
        .collect();
    let mut records = Vec::new();
    let mut errors = Vec::new();
    for (i, r) in parsed {
        match r {
            Ok(rec) => records.push(rec),
            Err(e) => errors.push((i, e)),
        }
    }
    records.sort_by(|a, b| a.id.cmp(&b.id).then_with(|| format!("{a:?}").cmp(&format!("{b:?}"))));
    records.dedup();
    let done = records
        .into_par_iter()
        .map(|record| Ingested {
            id: record.id.clone(),
            result: normalized_from_record(&record),
            record,
        })
        .collect();
    (done, errors)
}

/// Every `*.json` file in a directory, in file-name order.
pub fn read_fixture_dir(dir: &Path) -> Result<Vec<Vec<u8>>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| Error::Record(format!("{}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().map_or(false, |x| x == "json"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| std::fs::read(p).map_err(|e| Error::Record(format!("{}: {e}", p.display()))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    fn native(text: &str) -> Result<LocalFieldRecord> {
        parse_record(text.as_bytes(), &TranslationTable::default())
    }

    #[test]
    fn quaternion_jumps_only() {
        let rec = native(
            r#"{"id":"q8","p":2,"n":8,"e":8,"f":1,"lower_jumps_normalized":["1/8","3/8","7/8"],"disc_exp":24,"gal":"8T5"}"#,
        )
        .unwrap();
        assert_eq!(rec.jumps, Some(vec![rat(1, 8), rat(3, 8), rat(7, 8)]));
        let (d, report) = normalized_from_record(&rec).unwrap();
        assert_eq!(d.upper_jumps(), vec![int(1), int(2), int(3)]);
        assert!(report.all_passed(), "{report}");
    }

    #[test]
    fn record_invariants() {
        assert!(native(r#"{"id":"x","p":2,"n":4,"e":2,"f":1}"#).is_err());
        assert!(native(r#"{"id":"x","p":4,"n":2,"e":2,"f":1}"#).is_err());
        assert!(native(r#"{"id":"x","p":2,"n":4,"e":4,"f":1,"disc_exp":2}"#).is_err());
        assert!(native(r#"[1,2]"#).is_err());
        let poly_only = native(r#"{"id":"x","p":2,"n":2,"e":2,"f":1,"poly":[-2,0,1]}"#).unwrap();
        assert!(poly_only.derive_via_newton());
        let nothing = native(r#"{"id":"x","p":2,"n":2,"e":2,"f":1}"#).unwrap();
        assert!(normalized_from_record(&nothing).is_err());
    }

    #[test]
    fn jumps_with_tame_part() {
        let d = multiset_from_jumps(&[rat(1, 3)], 6, 3).unwrap();
        assert_eq!(d, crate::presets::cyclotomic_multiset(3, 2).unwrap());
        let v4 = multiset_from_jumps(&[rat(1, 2), rat(1, 2)], 4, 2).unwrap();
        assert_eq!(v4.entries(), &[(Depth::Finite(rat(1, 2)), 3), (Depth::Infinite, 1)]);
        assert!(multiset_from_jumps(&[rat(1, 2)], 4, 2).is_err());
    }

    #[test]
    fn sources_cross_checked() {
        let ok = native(
            r#"{"id":"r2","p":2,"n":2,"e":2,"f":1,"poly":[-2,0,1],"lower_jumps_normalized":["1"],"disc_exp":3}"#,
        )
        .unwrap();
        let (_, report) = normalized_from_record(&ok).unwrap();
        assert!(report.all_passed());
        let off = native(
            r#"{"id":"r2","p":2,"n":2,"e":2,"f":1,"poly":[-2,0,1],"disc_exp":4}"#,
        )
        .unwrap();
        let (_, report) = normalized_from_record(&off).unwrap();
        assert!(!report.get("discriminant exponent").unwrap().passed);
        let clash = native(
            r#"{"id":"r2","p":2,"n":2,"e":2,"f":1,"poly":[-2,0,1],"lower_jumps_normalized":["1/2"]}"#,
        )
        .unwrap();
        assert!(matches!(normalized_from_record(&clash), Err(Error::Inconsistent(_))));
    }

    #[test]
    fn lmfdb_mapping() {
        let rec = parse_record(
            br#"{"label":"2.8.24.q","p":2,"n":8,"e":8,"f":1,"jump_set":[1,3,7],"c":24}"#,
            &TranslationTable::lmfdb(),
        )
        .unwrap();
        assert_eq!(rec.jumps, Some(vec![rat(1, 8), rat(3, 8), rat(7, 8)]));
        let shifted = TranslationTable {
            shift: "1".into(),
            ..TranslationTable::lmfdb()
        };
        let rec = parse_record(br#"{"label":"a","p":2,"n":2,"e":2,"f":1,"jump_set":[3]}"#, &shifted).unwrap();
        assert_eq!(rec.jumps, Some(vec![int(1)]));
        let table = TranslationTable::from_json(r#"{"jumps":"j","divide_by_e":true}"#).unwrap();
        assert_eq!(table.id, "id");
        assert_eq!(table.jumps, "j");
    }
}
