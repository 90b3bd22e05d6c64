//! Plain-text formats for multisets, depth functions, towers and polynomials.
//!
//! Multiset files hold `depth x multiplicity` lines (`inf x 1` for the
//! identity) and optional `p N` / `e N` header lines. Depth function and tower
//! files are keyword blocks:
//!
//! ```text
//! p 2
//! e 8
//! table
//! 0 1 2 3
//! 1 0 3 2
//! 2 3 0 1
//! 3 2 1 0
//! depths inf 1/4 1/4 1/4
//! kernel 0 1
//! projection 0 0 1 1
//! ```
//!
//! `kernel` and `projection` only appear in tower files; `projection` is
//! optional. Lines starting with `#` are comments.

use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::group::{ElementSet, FiniteGroup};
use crate::newton::EisensteinPoly;
use crate::poly::IntPoly;
use crate::rat::{fmt_rat, Depth};
use crate::ramgroup::{DepthFunction, DepthMultiset};
use crate::tower::TowerDatum;

fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

fn parse_u64(s: &str, what: &str) -> Result<u64> {
    s.parse()
        .map_err(|_| Error::Parse(format!("bad {what} `{s}`")))
}

/// Parses a multiset file. `p` and `e` come from the file when present,
/// otherwise from the fallbacks; a missing `e` defaults to the least multiple
/// of the order on whose grid every depth lies.
pub fn parse_multiset(text: &str, p: Option<u64>, e_lf: Option<u64>) -> Result<DepthMultiset> {
    let (mut p, mut e_lf) = (p, e_lf);
    let mut entries = Vec::new();
    for line in content_lines(text) {
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            ["p", v] => p = Some(parse_u64(v, "prime")?),
            ["e", v] => e_lf = Some(parse_u64(v, "ramification index")?),
            [d, "x", m] => entries.push((d.parse::<Depth>()?, parse_u64(m, "multiplicity")?)),
            _ => return Err(Error::Parse(format!("unrecognised multiset line `{line}`"))),
        }
    }
    let p = p.ok_or_else(|| Error::Parse("no residue characteristic given".into()))?;
    let e_lf = match e_lf {
        Some(e) => e,
        None => {
            let order: u64 = entries.iter().map(|(_, m)| m).sum();
            entries.iter().fold(order.max(1), |acc, (d, _)| match d {
                Depth::Finite(r) => {
                    acc.lcm(&u64::try_from(r.denom()).unwrap_or(1))
                }
                Depth::Infinite => acc,
            })
        }
    };
    DepthMultiset::new(entries, e_lf, p)
}

pub fn multiset_text(d: &DepthMultiset) -> String {
    let mut out = format!("p {}\ne {}\n", d.p(), d.e_lf());
    for (depth, m) in d.entries() {
        out.push_str(&format!("{depth} x {m}\n"));
    }
    out
}

struct KeywordBlock {
    p: Option<u64>,
    e: Option<u64>,
    table: Vec<Vec<usize>>,
    depths: Option<Vec<Depth>>,
    kernel: Option<Vec<usize>>,
    projection: Option<Vec<usize>>,
}

fn index_list(fields: &[&str]) -> Result<Vec<usize>> {
    fields
        .iter()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad element index `{t}`")))
        })
        .collect()
}

fn parse_block(text: &str) -> Result<KeywordBlock> {
    let mut block = KeywordBlock {
        p: None,
        e: None,
        table: Vec::new(),
        depths: None,
        kernel: None,
        projection: None,
    };
    let mut in_table = false;
    for line in content_lines(text) {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let (key, rest) = (fields[0], &fields[1..]);
        if in_table && key.parse::<usize>().is_ok() {
            block.table.push(index_list(&fields)?);
            continue;
        }
        in_table = false;
        match (key, rest) {
            ("p", [v]) => block.p = Some(parse_u64(v, "prime")?),
            ("e", [v]) => block.e = Some(parse_u64(v, "ramification index")?),
            ("table", []) => in_table = true,
            ("depths", ds) => {
                block.depths = Some(ds.iter().map(|d| d.parse()).collect::<Result<_>>()?)
            }
            ("kernel", ks) => block.kernel = Some(index_list(ks)?),
            ("projection", ps) => block.projection = Some(index_list(ps)?),
            _ => return Err(Error::Parse(format!("unrecognised line `{line}`"))),
        }
    }
    Ok(block)
}

fn block_function(block: &KeywordBlock) -> Result<DepthFunction> {
    let p = block.p.ok_or_else(|| Error::Parse("missing `p`".into()))?;
    let e = block.e.ok_or_else(|| Error::Parse("missing `e`".into()))?;
    if block.table.is_empty() {
        return Err(Error::Parse("missing `table`".into()));
    }
    let group = FiniteGroup::from_table(block.table.clone())?;
    let depths = block
        .depths
        .clone()
        .ok_or_else(|| Error::Parse("missing `depths`".into()))?;
    DepthFunction::new(group, depths, e, p)
}

pub fn parse_depth_function(text: &str) -> Result<DepthFunction> {
    block_function(&parse_block(text)?)
}

pub fn depth_function_text(g: &DepthFunction) -> String {
    let depths: Vec<String> = g.depths().iter().map(|d| d.to_string()).collect();
    format!(
        "p {}\ne {}\ntable\n{}depths {}\n",
        g.p(),
        g.e_lf(),
        g.group().table_text(),
        depths.join(" ")
    )
}

/// The quotient group induced by a projection onto `0..k` with `0 ↦ 0`.
fn induced_quotient(g: &FiniteGroup, projection: &[usize]) -> Result<FiniteGroup> {
    if projection.len() != g.order() || projection.first() != Some(&0) {
        return Err(Error::InvalidGroup("projection must list one image per element, starting at 0".into()));
    }
    let k = projection.iter().max().unwrap() + 1;
    let mut reps = vec![None; k];
    for (x, &q) in projection.iter().enumerate() {
        reps[q].get_or_insert(x);
    }
    let reps: Vec<usize> = reps
        .into_iter()
        .collect::<Option<_>>()
        .ok_or_else(|| Error::InvalidGroup("projection is not onto 0..k".into()))?;
    let table = reps
        .iter()
        .map(|&a| reps.iter().map(|&b| projection[g.mul(a, b)]).collect())
        .collect();
    FiniteGroup::from_table(table)
}

pub fn parse_tower(text: &str) -> Result<TowerDatum> {
    let block = parse_block(text)?;
    let big = block_function(&block)?;
    let kernel = ElementSet::from_indices(
        block
            .kernel
            .clone()
            .ok_or_else(|| Error::Parse("missing `kernel`".into()))?,
    );
    if kernel.iter().any(|i| i >= big.order()) {
        return Err(Error::Parse("kernel index out of range".into()));
    }
    match &block.projection {
        None => TowerDatum::new(big, kernel),
        Some(proj) => {
            let quotient = induced_quotient(big.group(), proj)?;
            TowerDatum::from_parts(big, kernel, quotient, proj.clone())
        }
    }
}

pub fn tower_text(t: &TowerDatum) -> String {
    let list = |v: &[usize]| v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
    format!(
        "{}kernel {}\nprojection {}\n",
        depth_function_text(t.big()),
        list(&t.kernel().to_vec()),
        list(t.projection())
    )
}

/// Parses `p; c0 c1 ... cn` into an Eisenstein polynomial.
pub fn parse_polynomial(text: &str) -> Result<EisensteinPoly> {
    let (p, coeffs) = text
        .trim()
        .split_once(';')
        .ok_or_else(|| Error::Parse("expected `p; c0 c1 ... cn`".into()))?;
    let p = parse_u64(p.trim(), "prime")?;
    EisensteinPoly::new(parse_coefficients(coeffs)?, p)
}

/// Whitespace-separated integer coefficients, constant term first.
pub fn parse_coefficients(text: &str) -> Result<IntPoly> {
    let coeffs = text
        .split_whitespace()
        .map(|c| {
            c.parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("bad coefficient `{c}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IntPoly::new(coeffs))
}

pub fn polynomial_text(f: &EisensteinPoly) -> String {
    let coeffs: Vec<String> = f.poly().coeffs().iter().map(|c| c.to_string()).collect();
    format!("{}; {}", f.p(), coeffs.join(" "))
}

/// Fractions as `a/b`, separated by single spaces.
pub fn rat_list(rs: &[crate::rat::Rat]) -> String {
    rs.iter().map(fmt_rat).collect::<Vec<_>>().join(" ")
}
