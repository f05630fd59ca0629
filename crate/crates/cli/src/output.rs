//! Rendering of reports as JSON, CSV and plain text.

use std::fmt::Write as _;

use dessins_core::census::CensusReport;
use dessins_core::tsystems::TSystemReport;
use dessins_core::ucover::{CoverScope, UCoverRecord};
use serde::Serialize;

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

pub fn csv_rows<I, R>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

pub fn census_csv(report: &CensusReport, orbit_of: &[usize]) -> String {
    csv_rows(
        &[
            "class_id",
            "l",
            "m",
            "n",
            "genus",
            "commutator_order",
            "orbit_id",
        ],
        report.classes.iter().map(|c| {
            let [l, m, n] = c.dessin_type;
            vec![
                c.class_id.to_string(),
                l.to_string(),
                m.to_string(),
                n.to_string(),
                c.genus.to_string(),
                c.commutator_order.to_string(),
                orbit_of[c.class_id].to_string(),
            ]
        }),
    )
}

pub fn census_text(report: &CensusReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{}: |G| = {}, |Aut G| = {}, |Out G| = {}, subgroups = {}",
        report.group, report.order, report.aut_order, report.out_order, report.subgroup_count
    );
    let _ = writeln!(
        s,
        "r = {} (Möbius count {}), phi2 = {}",
        report.r, report.moebius_r, report.phi2
    );
    let _ = writeln!(
        s,
        "{:>5}  {:<14} {:>8} {:>5}  reflexible  x ; y",
        "class", "type", "genus", "[x,y]"
    );
    for c in &report.classes {
        let [l, m, n] = c.dessin_type;
        let _ = writeln!(
            s,
            "{:>5}  {:<14} {:>8} {:>5}  {:<10}  {} ; {}",
            c.class_id,
            format!("({l},{m},{n})"),
            c.genus,
            c.commutator_order,
            c.reflexible,
            c.x,
            c.y
        );
    }
    let _ = writeln!(s, "by type and genus:");
    for b in &report.by_type_genus {
        let [l, m, n] = b.sorted_type;
        let _ = writeln!(s, "  ({l},{m},{n}) genus {}: {}", b.genus, b.count);
    }
    s
}

pub fn tsystems_csv(report: &TSystemReport) -> String {
    csv_rows(
        &["orbit_id", "length", "commutator_order", "classes"],
        report.orbits.iter().map(|o| {
            vec![
                o.orbit_id.to_string(),
                o.length.to_string(),
                o.commutator_order.to_string(),
                o.classes
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(" "),
            ]
        }),
    )
}

pub fn tsystems_text(group: &str, report: &TSystemReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{group}: nu = {}", report.nu);
    if let Some(order) = &report.omega_action_order {
        let _ = writeln!(s, "order of the induced action: {order}");
    }
    for o in &report.orbits {
        let _ = writeln!(
            s,
            "orbit {}: length {}, commutator order {}, classes {:?}",
            o.orbit_id, o.length, o.commutator_order, o.classes
        );
    }
    s
}

fn scope_label(scope: CoverScope) -> String {
    match scope {
        CoverScope::WholeCensus => "census".to_string(),
        CoverScope::Orbit(i) => format!("orbit {i}"),
    }
}

pub fn ucover_csv(records: &[&UCoverRecord]) -> String {
    csv_rows(
        &["scope", "r", "degree", "order", "l", "m", "n", "genus"],
        records.iter().map(|r| {
            let [l, m, n] = r.cover_type;
            vec![
                scope_label(r.scope),
                r.r.to_string(),
                r.degree.to_string(),
                r.order.to_string(),
                l.to_string(),
                m.to_string(),
                n.to_string(),
                r.genus.to_string(),
            ]
        }),
    )
}

pub fn ucover_text(records: &[&UCoverRecord]) -> String {
    let mut s = String::new();
    for r in records {
        let [l, m, n] = r.cover_type;
        let _ = writeln!(
            s,
            "{} ({}): blocks {}, degree {}, order {}, type ({l},{m},{n}), genus {}",
            r.group,
            scope_label(r.scope),
            r.r,
            r.degree,
            r.order,
            r.genus
        );
    }
    s
}
