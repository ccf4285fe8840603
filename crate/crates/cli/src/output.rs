//! Text and CSV renderings. Floats are written with the shortest decimal that
//! round-trips, switching to exponent form for very small or large magnitudes.

use std::fmt::Write as _;

use riem_alpha::alpha::{AlphaCertificate, BasinReport, LemmaReport, TheoryConstants};

use crate::commands::{dist_column, RunRecord};

fn csv_string(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn num(x: f64) -> String {
    format!("{x:?}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// `x` with 15 significant digits.
fn sig15(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let decimals = (14 - x.abs().log10().floor() as i32).max(0) as usize;
    format!("{x:.decimals$}")
}

fn constants_rows(c: &TheoryConstants) -> Vec<(&'static str, f64, f64, &'static str)> {
    let r = c.residuals();
    vec![
        ("alpha0", c.alpha0, r.alpha0, "2u - psi(u)^2"),
        ("sigma", c.sigma, r.sigma, "sum (1/2)^(2^k - 1)"),
        ("s0", c.s0, r.s0, "closed form"),
        ("nu0", c.nu0, r.nu0, "nu/psi(nu)^2 - alpha0"),
        ("t0", c.t0, r.t0, "closed form"),
    ]
}

pub fn constants_text(c: &TheoryConstants) -> String {
    let mut out = format!("{:<8} {:<20} {:<24} identity\n", "name", "value", "residual");
    for (name, v, r, what) in constants_rows(c) {
        let _ = writeln!(out, "{name:<8} {:<20} {:<24} {what}", sig15(v), format!("{r:e}"));
    }
    out
}

pub fn constants_csv(c: &TheoryConstants) -> String {
    csv_string(
        &["name", "value", "residual"],
        constants_rows(c)
            .into_iter()
            .map(|(n, v, r, _)| vec![n.to_string(), num(v), num(r)])
            .collect(),
    )
}

fn point_label(p: &riem_alpha::Point) -> String {
    let parts: Vec<String> = p.to_vec().iter().map(|x| num(*x)).collect();
    format!("[{}]", parts.join(" "))
}

pub fn certificates_csv(certs: &[AlphaCertificate]) -> String {
    csv_string(
        &[
            "start",
            "point",
            "verdict",
            "beta",
            "gamma_lower",
            "gamma_upper",
            "alpha_lower",
            "alpha_upper",
            "root_distance_bound",
        ],
        certs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                vec![
                    i.to_string(),
                    point_label(&c.point),
                    format!("{:?}", c.verdict),
                    num(c.beta),
                    num(c.gamma.lower),
                    num(c.gamma.upper),
                    num(c.alpha_lower),
                    num(c.alpha_upper),
                    opt(c.root_distance_bound),
                ]
            })
            .collect(),
    )
}

pub fn certificates_text(problem: &str, certs: &[AlphaCertificate]) -> String {
    let mut out = format!("problem {problem}\n");
    for (i, c) in certs.iter().enumerate() {
        let _ = write!(
            out,
            "#{i} {:?} beta={} gamma=[{}, {}] alpha=[{}, {}]",
            c.verdict,
            num(c.beta),
            num(c.gamma.lower),
            num(c.gamma.upper),
            num(c.alpha_lower),
            num(c.alpha_upper)
        );
        if let Some(b) = c.root_distance_bound {
            let _ = write!(out, " root within {}", num(b));
        }
        out.push('\n');
    }
    out
}

pub fn traces_csv(records: &[RunRecord]) -> String {
    let mut rows = Vec::new();
    for r in records {
        let t = &r.trace;
        let cumulative = t.cumulative_distances();
        for k in 0..t.points.len() {
            rows.push(vec![
                r.start.to_string(),
                k.to_string(),
                t.betas.get(k).map(|b| num(*b)).unwrap_or_default(),
                opt(dist_column(t, k)),
                num(cumulative[k]),
                format!("{:?}", t.termination),
            ]);
        }
    }
    csv_string(
        &["start", "k", "beta_k", "dist_to_root", "cumulative_distance", "termination"],
        rows,
    )
}

pub fn traces_text(problem: &str, records: &[RunRecord]) -> String {
    let mut out = format!("problem {problem}\n");
    for r in records {
        let t = &r.trace;
        let _ = writeln!(
            out,
            "start {}: {:?} after {} steps, final beta {}, final point {}",
            r.start,
            t.termination,
            t.steps(),
            t.betas.last().map(|b| num(*b)).unwrap_or_default(),
            point_label(t.last())
        );
    }
    out
}

pub fn basin_csv(report: &BasinReport) -> String {
    csv_string(
        &["distance", "samples", "passed", "fraction", "within_theoretical_radius"],
        report
            .shells
            .iter()
            .map(|s| {
                vec![
                    num(s.distance),
                    s.samples.to_string(),
                    s.passed.to_string(),
                    num(s.fraction),
                    s.within_theoretical_radius.to_string(),
                ]
            })
            .collect(),
    )
}

pub fn basin_text(problem: &str, report: &BasinReport) -> String {
    let mut out = format!("problem {problem}, zero {}\n", point_label(&report.root));
    let _ = writeln!(
        out,
        "gamma in [{}, {}]",
        num(report.radii.gamma.lower),
        num(report.radii.gamma.upper)
    );
    match &report.radii.classic {
        Some(c) => {
            let _ = writeln!(out, "classic radius {} ({:?})", num(c.value), c.binding_term);
        }
        None => out.push_str("classic radius n/a (unbounded spreading)\n"),
    }
    let _ = writeln!(
        out,
        "alternative radius {} ({:?})",
        num(report.radii.alt.value),
        report.radii.alt.binding_term
    );
    out.push_str("distance  passed/samples\n");
    for s in &report.shells {
        let _ = writeln!(
            out,
            "{:<9} {}/{}{}",
            format!("{:.4e}", s.distance),
            s.passed,
            s.samples,
            if s.within_theoretical_radius { "  (inside R)" } else { "" }
        );
    }
    let _ = writeln!(
        out,
        "empirical edge {} vs theoretical {}: contract {}",
        num(report.empirical_edge),
        num(report.theoretical_radius),
        if report.contract_holds { "holds" } else { "violated" }
    );
    out
}

pub fn lemmas_csv(report: &LemmaReport) -> String {
    let mut rows: Vec<Vec<String>> = report
        .lemmas
        .iter()
        .map(|l| {
            vec![
                l.name.clone(),
                l.samples.to_string(),
                l.passed.to_string(),
                num(l.worst_margin),
            ]
        })
        .collect();
    rows.extend(report.scalar_checks.iter().map(|c| {
        vec![
            c.name.clone(),
            c.cases.to_string(),
            if c.holds { c.cases } else { 0 }.to_string(),
            num(c.worst_margin),
        ]
    }));
    csv_string(&["check", "samples", "passed", "worst_margin"], rows)
}

pub fn lemmas_text(problem: &str, report: &LemmaReport) -> String {
    let mut out = format!(
        "problem {problem}, center {}{}\n",
        point_label(&report.center),
        if report.center_is_zero { " (zero)" } else { "" }
    );
    if let Some(w) = &report.warning {
        let _ = writeln!(out, "warning: {w}");
    }
    for l in &report.lemmas {
        let _ = writeln!(
            out,
            "{:<22} {}/{} worst margin {}",
            l.name,
            l.passed,
            l.samples,
            num(l.worst_margin)
        );
    }
    for c in &report.scalar_checks {
        let _ = writeln!(
            out,
            "{:<22} {} over {} cases, worst margin {}",
            c.name,
            if c.holds { "holds" } else { "FAILS" },
            c.cases,
            num(c.worst_margin)
        );
    }
    let _ = writeln!(out, "all hold: {}", report.all_hold);
    out
}
