use std::fmt::Write;
use std::path::PathBuf;
use std::time::Duration;

use ramification::arith::{
    additive_char_depth, char_to_param_depth, norm_depth_image, norm_one_profile,
    param_to_char_depth, product_torus_depths, profile_csv, res_scalars_param_depth,
    trace_depth_image, ExtensionSummary,
};
use ramification::classical::{
    lower_index_from_classical, lower_index_to_classical, phi_from_classical, phi_to_classical,
    psi_from_classical, psi_to_classical, upper_index_from_classical, upper_index_to_classical,
};
use ramification::formats::{parse_tower, polynomial_text, rat_list};
use ramification::lmfdb::{fetch_record, ingest_batch, read_fixture_dir, FetchConfig, DEFAULT_FIXTURE_DIR};
use ramification::newton::{depth_multiset_from_polynomial, discriminant_valuation, PolynomialDepths};
use ramification::presets::preset;
use ramification::ramgroup::differental_exponent;
use ramification::rat::{fmt_rat, from_u64, int, rat};
use ramification::tower::tfae_check;
use ramification::verify::{run_suite, summary, SuiteConfig};
use ramification::{
    ClassicalContext, DepthMultiset, ElementSet, Error, PlFunc, Rat, TowerDatum,
    TranslationTable,
};

use crate::input::{index_list, polynomial, rat_arg, read_bytes, read_text, usage, CliError, CliResult};
use crate::svg::{self, Palette};
use crate::{
    Cli, Command, ConvertArgs, DepthmapArgs, Direction, Format, IngestArgs, JumpsArgs,
    NewtonArgs, PhiArgs, TowerArgs, VerifyArgs,
};

/// What a subcommand produced.
#[derive(Debug, Default)]
pub struct Output {
    pub body: String,
    pub failed: bool,
    pub diagnostics: Vec<String>,
}

impl Output {
    fn ok(body: String) -> Self {
        Output {
            body,
            ..Output::default()
        }
    }
}

pub fn run(cli: &Cli) -> CliResult<Output> {
    let palette = Palette {
        line: cli.line_color.clone(),
        dot: cli.dot_color.clone(),
    };
    let fmt = cli.format;
    match &cli.command {
        Command::Phi(a) => phi(a, fmt, &palette),
        Command::Jumps(a) => jumps(a, fmt, &palette),
        Command::Tower(a) => no_svg(fmt).and_then(|_| tower(a, fmt)),
        Command::Newton(a) => no_svg(fmt).and_then(|_| newton(a, fmt)),
        Command::Convert(a) => convert(a, fmt, &palette),
        Command::Depthmap(a) => depthmap(a, fmt, &palette),
        Command::Ingest(a) => no_svg(fmt).and_then(|_| ingest(a, fmt)),
        Command::Verify(a) => no_svg(fmt).and_then(|_| verify(a, fmt)),
    }
}

fn no_svg(fmt: Format) -> CliResult<()> {
    if fmt == Format::Svg {
        return usage("this subcommand has no SVG output");
    }
    Ok(())
}

/// `0 x 3, 1/3 x 2, inf x 1`
fn entries_line(d: &DepthMultiset) -> String {
    d.entries()
        .iter()
        .map(|(r, m)| format!("{r} x {m}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Default plotting range: past the last kink, at least 1.
fn default_x_max(f: &PlFunc) -> Rat {
    let last = f.kinks().last().map(|(x, _)| x.clone()).unwrap_or_else(|| int(0));
    let x = last * rat(3, 2);
    if x < int(1) {
        int(1)
    } else {
        x.ceil()
    }
}

fn key_values(rows: &[(&str, String)], fmt: Format) -> String {
    let mut out = String::new();
    if fmt == Format::Csv {
        out.push_str("key,value\n");
    }
    for (k, v) in rows {
        match fmt {
            Format::Csv => {
                let _ = writeln!(out, "{k},{v}");
            }
            _ => {
                let _ = writeln!(out, "{k} {v}");
            }
        }
    }
    out
}

fn phi(a: &PhiArgs, fmt: Format, palette: &Palette) -> CliResult<Output> {
    let src = a.source.resolve()?;
    let (name, f) = if a.inverse {
        ("psi", src.multiset.psi())
    } else {
        ("phi", src.multiset.phi())
    };
    if !a.eval.is_empty() {
        if fmt == Format::Svg {
            return usage("--eval has no SVG output");
        }
        let mut out = String::new();
        if fmt == Format::Csv {
            out.push_str("x,value\n");
        }
        for x in &a.eval {
            let x = rat_arg(x)?;
            let y = fmt_rat(&f.eval(&x)?);
            match fmt {
                Format::Csv => {
                    let _ = writeln!(out, "{},{y}", fmt_rat(&x));
                }
                _ => {
                    let _ = writeln!(out, "{y}");
                }
            }
        }
        return Ok(Output::ok(out));
    }
    let body = match fmt {
        Format::Text => {
            let mut out = format!("{name} {f}\n");
            for ((x, y), s) in f.breakpoints().iter().zip(f.slopes()) {
                let _ = writeln!(out, "{} {} slope {}", fmt_rat(x), fmt_rat(y), fmt_rat(&s));
            }
            out
        }
        Format::Csv => f.to_csv(),
        Format::Svg => {
            let x_max = match &a.x_max {
                Some(x) => rat_arg(x)?,
                None => default_x_max(&f),
            };
            svg::plot(&f, &x_max, &format!("{name} for {}", src.label), palette)
        }
    };
    Ok(Output::ok(body))
}

fn jumps(a: &JumpsArgs, fmt: Format, palette: &Palette) -> CliResult<Output> {
    let src = a.source.resolve()?;
    let d = &src.multiset;
    if fmt == Format::Svg {
        let f = d.phi();
        let x_max = default_x_max(&f);
        return Ok(Output::ok(svg::plot(&f, &x_max, &format!("phi for {}", src.label), palette)));
    }
    let (ell, u) = d.ell_and_u();
    let c = d.compressed_different();
    let rows = [
        ("lower", rat_list(&d.jumps())),
        ("upper", rat_list(&d.upper_jumps())),
        ("ell", fmt_rat(&ell)),
        ("u", fmt_rat(&u)),
        ("c", fmt_rat(&c)),
        ("d", fmt_rat(&d.differental_exponent(a.e_ef)?)),
    ];
    let mut out = key_values(&rows, fmt);
    if fmt == Format::Text {
        out.push_str("\nr phi(r) |I_r|\n");
        let phi = d.phi();
        for r in d.jumps() {
            let size = d.filtration_count(&r, false)?;
            let _ = writeln!(out, "{} {} {size}", fmt_rat(&r), fmt_rat(&phi.eval(&r)?));
        }
    }
    Ok(Output::ok(out))
}

struct Checks {
    rows: Vec<(String, bool, String)>,
}

impl Checks {
    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.rows.push((name.into(), passed, detail.into()));
    }

    fn failed(&self) -> bool {
        self.rows.iter().any(|(_, p, _)| !p)
    }

    fn render(&self, fmt: Format) -> String {
        let mut out = String::new();
        if fmt == Format::Csv {
            out.push_str("check,passed,detail\n");
        }
        for (name, passed, detail) in &self.rows {
            match fmt {
                Format::Csv => {
                    let _ = writeln!(out, "{name},{passed},{}", detail.replace(',', ";"));
                }
                _ => {
                    let tag = if *passed { "pass" } else { "FAIL" };
                    if detail.is_empty() {
                        let _ = writeln!(out, "{tag}  {name}");
                    } else {
                        let _ = writeln!(out, "{tag}  {name}: {detail}");
                    }
                }
            }
        }
        out
    }
}

fn tower(a: &TowerArgs, fmt: Format) -> CliResult<Output> {
    let t = match (&a.file, &a.preset) {
        (Some(path), None) => parse_tower(&read_text(path)?)?,
        (None, Some(name)) => {
            let g = preset(name)?
                .function
                .ok_or_else(|| CliError::Usage(format!("preset `{name}` has no group table")))?;
            let kernel = index_list(a.kernel.as_deref().unwrap_or_default())?;
            if kernel.iter().any(|&i| i >= g.order()) {
                return usage("kernel index out of range");
            }
            TowerDatum::new(g, ElementSet::from_indices(kernel))?
        }
        _ => return usage("give --file or --preset with --kernel"),
    };
    let mut checks = Checks { rows: Vec::new() };
    let mut out = String::new();

    let le = t.big().multiset();
    let lk = t.kernel_function().multiset();
    let quotient = t.quotient_depth_function();
    if fmt == Format::Text {
        let _ = writeln!(
            out,
            "orders: L/E {}, L/K {}, K/E {}",
            le.order(),
            lk.order(),
            t.quotient_group().order()
        );
        let _ = writeln!(out, "L/E  {}", entries_line(&le));
        let _ = writeln!(out, "L/K  {}", entries_line(&lk));
        if let Ok(ke) = &quotient {
            let _ = writeln!(out, "K/E  {}", entries_line(&ke.multiset()));
        }
        out.push('\n');
    }

    let disagree = (0..t.big().order())
        .filter(|&s| t.quotient_depth_sum(s) != t.quotient_depth_max(s))
        .count();
    checks.push(
        "two-formula quotient depth",
        disagree == 0 && quotient.is_ok(),
        match &quotient {
            Err(e) => e.to_string(),
            Ok(_) => format!("{disagree} elements disagree"),
        },
    );
    checks.push("Herbrand composition", t.herbrand_tower_check()?, "");
    checks.push("different additivity", t.different_additivity_check()?, "");
    match t.lower_upper_restriction_checks() {
        Ok(report) => {
            for c in report.checks {
                checks.push(c.name, c.passed, c.detail);
            }
        }
        Err(Error::Precondition(m)) => checks.push("restriction identities", true, format!("skipped: {m}")),
        Err(e) => checks.push("restriction identities", false, e.to_string()),
    }

    let mut points = t.sample_points()?;
    for s in &a.at {
        points.push(rat_arg(s)?);
    }
    points.sort();
    points.dedup();
    for s in &points {
        let report = t.exact_sequence_check(s)?;
        let bad: Vec<String> = report
            .sequences
            .iter()
            .enumerate()
            .filter(|(_, &(x, y, z))| !(x && y && z))
            .map(|(i, _)| (i + 1).to_string())
            .collect();
        let detail = if bad.is_empty() {
            String::new()
        } else {
            format!("sequences {} fail", bad.join(" "))
        };
        let second = t.exact2_check(s)?;
        checks.push(
            format!("exact sequences at s = {}", fmt_rat(s)),
            report.holds() && second,
            detail,
        );
    }
    for s in &points {
        let name = format!("TFAE at s = {}", fmt_rat(s));
        match tfae_check(&le, s) {
            Ok((value, w)) => checks.push(name, true, format!("all {value}, psi(s) = {}", fmt_rat(&w.psi_s))),
            Err(e) => checks.push(name, false, e.to_string()),
        }
    }
    out.push_str(&checks.render(fmt));
    Ok(Output {
        body: out,
        failed: checks.failed(),
        diagnostics: Vec::new(),
    })
}

fn newton(a: &NewtonArgs, fmt: Format) -> CliResult<Output> {
    let f = polynomial(a.p, a.poly.as_deref(), a.file.as_deref())?;
    let n = f.degree();
    if n > a.degree_cap {
        return usage(format!("degree {n} exceeds --degree-cap {}", a.degree_cap));
    }
    let depths = depth_multiset_from_polynomial(&f, a.galois)?;
    let disc = discriminant_valuation(&f)?;
    let c = depths.compressed_different();
    let d = differental_exponent(&c, 1, n as u64)?;
    let consistent = from_u64(n as u64) * &d == from_u64(disc);

    let mut rows: Vec<(&str, String)> = vec![
        ("polynomial", polynomial_text(&f)),
        ("degree", n.to_string()),
        (
            "kind",
            match depths {
                PolynomialDepths::Galois(_) => "galois".into(),
                PolynomialDepths::Aggregate { .. } => "aggregate".into(),
            },
        ),
    ];
    let per_root = depths.per_root();
    let finite: Vec<String> = per_root
        .iter()
        .filter_map(|(r, _)| r.as_finite().map(fmt_rat))
        .collect();
    rows.push(("depths", finite.join(" ")));
    for (r, m) in &per_root {
        rows.push(("depth", format!("{r} x {m}")));
    }
    if let PolynomialDepths::Galois(g) = &depths {
        rows.push(("lower", rat_list(&g.jumps())));
        rows.push(("upper", rat_list(&g.upper_jumps())));
    }
    rows.push(("c", fmt_rat(&c)));
    rows.push(("d", fmt_rat(&d)));
    rows.push(("disc-val", disc.to_string()));
    rows.push(("n*d = disc-val", if consistent { "pass" } else { "FAIL" }.into()));
    let mut out = Output::ok(key_values(&rows, fmt));
    if !depths.balls_consistent() {
        out.diagnostics.push("ball sizes around a root are inconsistent".into());
        out.failed = true;
    }
    out.failed |= !consistent;
    Ok(out)
}

fn convert(a: &ConvertArgs, fmt: Format, palette: &Palette) -> CliResult<Output> {
    let ctx = ClassicalContext::new(a.e_ef, a.e_lf)?;
    let to = a.direction == Direction::ToClassical;
    let given = [&a.phi, &a.psi, &a.lower, &a.upper]
        .iter()
        .filter(|o| o.is_some())
        .count();
    if given != 1 {
        return usage("give exactly one of --phi, --psi, --lower, --upper");
    }
    let func = |text: &str, is_phi: bool| -> CliResult<(&'static str, PlFunc)> {
        let f: PlFunc = text.parse()?;
        Ok(match (is_phi, to) {
            (true, true) => ("phi", phi_to_classical(&f, &ctx)),
            (true, false) => ("phi", phi_from_classical(&f, &ctx)),
            (false, true) => ("psi", psi_to_classical(&f, &ctx)),
            (false, false) => ("psi", psi_from_classical(&f, &ctx)),
        })
    };
    let converted = match (&a.phi, &a.psi) {
        (Some(t), _) => Some(func(t, true)?),
        (_, Some(t)) => Some(func(t, false)?),
        _ => None,
    };
    if let Some((name, f)) = converted {
        let body = match fmt {
            Format::Text => format!("{name} {f}\n"),
            Format::Csv => f.to_csv(),
            Format::Svg => svg::plot(&f, &default_x_max(&f), name, palette),
        };
        return Ok(Output::ok(body));
    }
    no_svg(fmt)?;
    let (key, value) = if let Some(r) = &a.lower {
        let r = rat_arg(r)?;
        let v = if to {
            lower_index_to_classical(&r, a.e_lf)?
        } else {
            lower_index_from_classical(&r, a.e_lf)?
        };
        ("lower", v)
    } else {
        let t = rat_arg(a.upper.as_deref().unwrap_or_default())?;
        let v = if to {
            upper_index_to_classical(&t, a.e_ef)?
        } else {
            upper_index_from_classical(&t, a.e_ef)?
        };
        ("upper", v)
    };
    Ok(Output::ok(key_values(&[(key, fmt_rat(&value))], fmt)))
}

fn depthmap(a: &DepthmapArgs, fmt: Format, palette: &Palette) -> CliResult<Output> {
    if let Some(c) = &a.profile {
        if a.source.is_given() {
            return usage("--profile takes no depth source");
        }
        let c = rat_arg(c)?;
        let r_max = match &a.r_max {
            Some(r) => rat_arg(r)?,
            None => &c + int(4),
        };
        let rows = norm_one_profile(&c, &r_max)?;
        let body = match fmt {
            Format::Csv => profile_csv(&rows),
            Format::Svg => svg::profile(&rows, &format!("norm-one profile, c = {}", fmt_rat(&c)), palette),
            Format::Text => {
                let mut out = String::from("r torus gm_l gm_f inertia norm_target\n");
                for row in &rows {
                    let _ = writeln!(
                        out,
                        "{} {} {} {} {} {}",
                        fmt_rat(&row.r),
                        row.torus,
                        row.gm_l,
                        row.gm_f,
                        row.inertia,
                        fmt_rat(&row.norm_target)
                    );
                }
                out
            }
        };
        return Ok(Output::ok(body));
    }
    no_svg(fmt)?;
    let src = a.source.resolve()?;
    let ext = ExtensionSummary::from_multiset(&src.multiset, a.e_ef)?;
    let mut rows: Vec<(&str, String)> = vec![
        ("ell", fmt_rat(&ext.ell)),
        ("u", fmt_rat(&ext.u)),
        ("c", fmt_rat(&ext.c)),
    ];
    let arrow = |x: &Rat, y: &Rat| format!("{} -> {}", fmt_rat(x), fmt_rat(y));
    if let Some(s) = &a.trace {
        let s = rat_arg(s)?;
        rows.push(("trace", arrow(&s, &trace_depth_image(&s, &ext))));
    }
    if let Some(s) = &a.norm {
        let s = rat_arg(s)?;
        let (depth, onto) = norm_depth_image(&s, &ext)?;
        let tag = if onto { "onto" } else { "not onto" };
        rows.push(("norm", format!("{} ({tag})", arrow(&s, &depth))));
    }
    if let Some(r) = &a.additive_char {
        let r = rat_arg(r)?;
        rows.push(("additive-char", arrow(&r, &additive_char_depth(&r, &ext))));
    }
    if let Some(r) = &a.char_to_param {
        let r = rat_arg(r)?;
        rows.push(("char-to-param", arrow(&r, &char_to_param_depth(&r, &ext)?)));
    }
    if let Some(d) = &a.param_to_char {
        let d = rat_arg(d)?;
        rows.push(("param-to-char", arrow(&d, &param_to_char_depth(&d, &ext)?)));
    }
    if let Some(d) = &a.res_scalars {
        let d = rat_arg(d)?;
        rows.push(("res-scalars", arrow(&d, &res_scalars_param_depth(&d, &ext)?)));
    }
    if let Some(pair) = &a.torus {
        let (r, s) = pair
            .split_once(',')
            .ok_or_else(|| CliError::Usage("--torus expects `r,s`".into()))?;
        let (r, s) = (rat_arg(r)?, rat_arg(s)?);
        let (x, y) = product_torus_depths(&r, &s, &ext)?;
        rows.push((
            "torus",
            format!("({}, {}) -> ({}, {})", fmt_rat(&r), fmt_rat(&s), fmt_rat(&x), fmt_rat(&y)),
        ));
    }
    Ok(Output::ok(key_values(&rows, fmt)))
}

fn translation_table(mapping: &str) -> CliResult<TranslationTable> {
    match mapping {
        "native" => Ok(TranslationTable::default()),
        "lmfdb" => Ok(TranslationTable::lmfdb()),
        path => Ok(TranslationTable::from_json(&read_text(path)?)?),
    }
}

fn ingest(a: &IngestArgs, fmt: Format) -> CliResult<Output> {
    let table = translation_table(&a.mapping)?;
    let fixture_dir = a
        .fixture_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from(DEFAULT_FIXTURE_DIR));
    let cfg = FetchConfig {
        fixture_dir: Some(fixture_dir.clone()),
        endpoint: a.endpoint.clone(),
        offline: a.offline || a.endpoint.is_none(),
        timeout: Duration::from_secs(a.timeout),
    };
    let mut inputs = Vec::new();
    let mut labels = Vec::new();
    if a.inputs.is_empty() {
        inputs = read_fixture_dir(&fixture_dir)?;
        labels = (0..inputs.len()).map(|i| format!("fixture #{i}")).collect();
    }
    for item in &a.inputs {
        let bytes = if item == "-" || std::path::Path::new(item).is_file() {
            read_bytes(item)?
        } else {
            fetch_record(item, &cfg).map_err(|e| CliError::Lib(e.into()))?
        };
        inputs.push(bytes);
        labels.push(item.clone());
    }

    let (done, errors) = ingest_batch(&inputs, &table);
    let mut out = Output::default();
    for (i, e) in &errors {
        out.diagnostics.push(format!("{}: {e}", labels[*i]));
        out.failed = true;
    }
    if fmt == Format::Csv {
        out.body.push_str("id,p,n,e,f,lower,upper,consistent\n");
    }
    for item in &done {
        let r = &item.record;
        match &item.result {
            Ok((d, report)) => {
                let ok = report.all_passed();
                out.failed |= !ok;
                if fmt == Format::Csv {
                    let _ = writeln!(
                        out.body,
                        "{},{},{},{},{},{},{},{ok}",
                        item.id,
                        r.p,
                        r.n,
                        r.e,
                        r.f,
                        rat_list(&d.jumps()),
                        rat_list(&d.upper_jumps())
                    );
                } else {
                    let _ = writeln!(out.body, "record {}", item.id);
                    let _ = writeln!(out.body, "  p {} n {} e {} f {}", r.p, r.n, r.e, r.f);
                    let _ = writeln!(out.body, "  depths {}", entries_line(d));
                    let _ = writeln!(out.body, "  lower {}", rat_list(&d.jumps()));
                    let _ = writeln!(out.body, "  upper {}", rat_list(&d.upper_jumps()));
                    for line in report.to_string().lines() {
                        let _ = writeln!(out.body, "  {line}");
                    }
                }
            }
            Err(e) => {
                out.failed = true;
                out.diagnostics.push(format!("{}: {e}", item.id));
                if fmt == Format::Csv {
                    let _ = writeln!(out.body, "{},{},{},{},{},,,false", item.id, r.p, r.n, r.e, r.f);
                } else {
                    let _ = writeln!(out.body, "record {}\n  FAIL  {e}", item.id);
                }
            }
        }
    }
    Ok(out)
}

fn verify(a: &VerifyArgs, fmt: Format) -> CliResult<Output> {
    let mut cfg = SuiteConfig::default();
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    if let Some(n) = a.towers {
        cfg.towers = n;
    }
    let outcomes = run_suite(&cfg);
    let (passed, text) = summary(&outcomes);
    let body = match fmt {
        Format::Csv => {
            let mut out = String::from("id,name,passed,detail\n");
            for o in &outcomes {
                let _ = writeln!(out, "{},{},{},{}", o.id, o.name, o.passed, o.detail.replace(',', ";"));
            }
            out
        }
        _ => format!("{text}\n"),
    };
    Ok(Output {
        body,
        failed: !passed,
        diagnostics: Vec::new(),
    })
}
