use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;

use dessins_core::census::Census;
use dessins_core::error::DessinError;
use dessins_core::formulas::{
    closed_form_r, generating_pair_coverage, published_r, r_cyclic, r_l2_even, r_l2_prime,
    r_suzuki, simple_bound_window, ClosedFormTarget,
};
use dessins_core::lattice::{check_delta_identity, maximal_classes, MaximalClass};
use dessins_core::report::{Document, GroupSummary, SCHEMA_VERSION};
use dessins_core::tsystems::{
    higman_lower_bound_check, omega_action_order, omega_orbits, omega_orbits_with, NielsenMove,
    OMEGA_ACTION_CAP,
};
use dessins_core::ucover::{closed_form_ucover, ucover_record, BlockLayout, UCoverRecord};
use dessins_core::zoo::{construct_group, parse_descriptor, GroupDescriptor};
use num_bigint::BigUint;
use serde::Serialize;

use crate::cache::load_or_compute;
use crate::output;
use crate::{Cli, Command, Format, FormulaName, Layout};

/// Whole covers with more decimal digits in `|G|^r` than this need `--attempt-l27`.
const LARGE_COVER_DIGITS: usize = 60;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Computation(DessinError),
    /// Carries the rendered verification report.
    Verification(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Computation(e) => write!(f, "{e}"),
            CliError::Verification(_) => write!(f, "verification failed"),
        }
    }
}

impl From<DessinError> for CliError {
    fn from(e: DessinError) -> Self {
        CliError::Computation(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Computation(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Verification(_) => 3,
        }
    }

    pub fn to_json(&self) -> String {
        let kind = match self {
            CliError::Usage(_) => "usage",
            CliError::Computation(_) => "computation",
            CliError::Verification(_) => "verification",
        };
        serde_json::json!({ "error": { "kind": kind, "message": self.to_string() } }).to_string()
    }
}

type Outcome = Result<String, CliError>;

struct Session {
    format: Format,
    cache_dir: Option<PathBuf>,
}

struct Loaded {
    desc: GroupDescriptor,
    summary: GroupSummary,
    census: Census,
}

impl Session {
    fn warn(&self, message: String) {
        match self.format {
            Format::Json => eprintln!("{}", serde_json::json!({ "warning": message })),
            _ => eprintln!("warning: {message}"),
        }
    }

    fn load(&self, text: &str) -> Result<Loaded, CliError> {
        let desc = parse_descriptor(text).map_err(|e| CliError::Usage(e.to_string()))?;
        let label = desc.to_string();
        let group = Arc::new(construct_group(&desc)?);
        let summary = GroupSummary {
            descriptor: label.clone(),
            degree: group.degree(),
            order: group.order().clone(),
        };
        let census = load_or_compute(group, &label, self.cache_dir.as_deref(), &mut |m| {
            self.warn(m)
        })?;
        Ok(Loaded {
            desc,
            summary,
            census,
        })
    }
}

pub fn run(cli: Cli) -> Outcome {
    let session = Session {
        format: cli.format,
        cache_dir: std::env::var_os("DESSIN_CACHE_DIR")
            .map(PathBuf::from)
            .or(cli.cache_dir),
    };
    if cli.threads == 0 {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    pool.install(|| match cli.command {
        Command::Census { group } => census(&session, &group),
        Command::Mobius { group } => mobius(&session, &group),
        Command::Tsystems { group } => tsystems(&session, &group),
        Command::Ucover {
            group,
            orbit,
            orbits,
            layout,
            attempt_l27,
        } => ucover(&session, &group, orbit, orbits, layout, attempt_l27),
        Command::Formula { name, n } => formula(&session, name, n),
        Command::Verify { group } => verify(&session, &group),
    })
}

fn census(s: &Session, text: &str) -> Outcome {
    let g = s.load(text)?;
    let report = g.census.report();
    Ok(match s.format {
        Format::Json => {
            let mut doc = Document::new(g.summary);
            doc.census = Some(report.clone());
            output::json(&doc)
        }
        Format::Csv => output::census_csv(report, &omega_orbits(&g.census).orbit_of_class()),
        Format::Text => output::census_text(report),
    })
}

#[derive(Serialize)]
struct SubgroupRow {
    index: usize,
    order: usize,
    class_id: usize,
    is_maximal: bool,
    mu: i64,
}

#[derive(Serialize)]
struct LatticeSummary {
    subgroup_count: usize,
    conjugacy_classes: usize,
    #[serde(serialize_with = "decimal")]
    phi2_moebius: BigUint,
    delta_identity: bool,
    maximal_classes: Vec<MaximalClass>,
    subgroups: Vec<SubgroupRow>,
}

#[derive(Serialize)]
struct MobiusDocument {
    schema_version: u32,
    group: GroupSummary,
    lattice: LatticeSummary,
}

fn decimal<S: serde::Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn mobius(s: &Session, text: &str) -> Outcome {
    let g = s.load(text)?;
    let lattice = g.census.lattice();
    let mu = g.census.moebius();
    let rows: Vec<SubgroupRow> = lattice
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, n)| SubgroupRow {
            index: i,
            order: n.order,
            class_id: n.class_id,
            is_maximal: n.is_maximal,
            mu: mu.get(i),
        })
        .collect();
    let summary = LatticeSummary {
        subgroup_count: lattice.len(),
        conjugacy_classes: lattice.class_count(),
        phi2_moebius: g.census.report().phi2_moebius.clone(),
        delta_identity: check_delta_identity(lattice, mu),
        maximal_classes: maximal_classes(lattice),
        subgroups: rows,
    };
    Ok(match s.format {
        Format::Json => output::json(&MobiusDocument {
            schema_version: SCHEMA_VERSION,
            group: g.summary,
            lattice: summary,
        }),
        Format::Csv => output::csv_rows(
            &["index", "order", "class_id", "is_maximal", "mu"],
            summary.subgroups.iter().map(|r| {
                vec![
                    r.index.to_string(),
                    r.order.to_string(),
                    r.class_id.to_string(),
                    r.is_maximal.to_string(),
                    r.mu.to_string(),
                ]
            }),
        ),
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "{}: {} subgroups in {} conjugacy classes, phi2 = {}",
                g.summary.descriptor,
                summary.subgroup_count,
                summary.conjugacy_classes,
                summary.phi2_moebius
            );
            for c in &summary.maximal_classes {
                let _ = writeln!(
                    out,
                    "maximal class: index {}, {} conjugates",
                    c.index, c.class_size
                );
            }
            for r in summary.subgroups.iter().filter(|r| r.mu != 0) {
                let _ = writeln!(
                    out,
                    "subgroup {} (order {}): mu = {}",
                    r.index, r.order, r.mu
                );
            }
            out
        }
    })
}

fn tsystems(s: &Session, text: &str) -> Outcome {
    let g = s.load(text)?;
    let mut report = omega_orbits(&g.census);
    if g.census.r() <= OMEGA_ACTION_CAP {
        report.omega_action_order = Some(omega_action_order(&g.census)?);
    }
    Ok(match s.format {
        Format::Json => {
            let mut doc = Document::new(g.summary);
            doc.t_systems = Some(report);
            output::json(&doc)
        }
        Format::Csv => output::tsystems_csv(&report),
        Format::Text => output::tsystems_text(&g.summary.descriptor, &report),
    })
}

fn ucover(
    s: &Session,
    text: &str,
    orbit: Option<usize>,
    all_orbits: bool,
    layout: Layout,
    attempt_large: bool,
) -> Outcome {
    let g = s.load(text)?;
    let layout = match layout {
        Layout::Natural => BlockLayout::Natural,
        Layout::Regular => BlockLayout::Regular,
    };
    let report = omega_orbits(&g.census);
    let whole = if orbit.is_none() {
        let digits = (g.census.table().len() as f64).log10() * g.census.r() as f64;
        if digits > LARGE_COVER_DIGITS as f64 && !attempt_large {
            return Err(CliError::Usage(format!(
                "the whole cover of {} has order up to 10^{:.0}; pass --attempt-l27 to try it",
                g.summary.descriptor, digits
            )));
        }
        Some(ucover_record(&g.census, None, layout)?)
    } else {
        None
    };
    let orbit_ids: Vec<usize> = match orbit {
        Some(i) => vec![i],
        None if all_orbits => (0..report.nu).collect(),
        None => Vec::new(),
    };
    let orbit_records = orbit_ids
        .into_iter()
        .map(|i| ucover_record(&g.census, Some((&report, i)), layout))
        .collect::<Result<Vec<UCoverRecord>, _>>()?;
    let all: Vec<&UCoverRecord> = whole.iter().chain(orbit_records.iter()).collect();
    Ok(match s.format {
        Format::Json => {
            let mut doc = Document::new(g.summary);
            doc.universal_cover = whole.clone();
            doc.universal_cover_orbits =
                (!orbit_records.is_empty()).then_some(orbit_records.clone());
            output::json(&doc)
        }
        Format::Csv => output::ucover_csv(&all),
        Format::Text => output::ucover_text(&all),
    })
}

#[derive(Serialize)]
struct FormulaDocument {
    schema_version: u32,
    formula: String,
    parameter: u32,
    #[serde(serialize_with = "decimal")]
    value: BigUint,
}

fn formula(s: &Session, name: FormulaName, n: u32) -> Outcome {
    let usage = |e: DessinError| CliError::Usage(e.to_string());
    let (label, value) = match name {
        FormulaName::RC => {
            if n == 0 {
                return Err(CliError::Usage("rC needs n ≥ 1".into()));
            }
            ("rC", r_cyclic(n as u64))
        }
        FormulaName::RD => {
            let desc = GroupDescriptor::Dihedral(n).validate().map_err(usage)?;
            (
                "rD",
                closed_form_r(ClosedFormTarget::Group(desc)).map_err(usage)?,
            )
        }
        FormulaName::RL2p => ("rL2p", r_l2_prime(n as u64).map_err(usage)?),
        FormulaName::RL22e => ("rL2_2e", r_l2_even(n).map_err(usage)?),
        FormulaName::RSz => ("rSz", r_suzuki(n).map_err(usage)?),
    };
    Ok(match s.format {
        Format::Json => output::json(&FormulaDocument {
            schema_version: SCHEMA_VERSION,
            formula: label.to_string(),
            parameter: n,
            value,
        }),
        Format::Csv => output::csv_rows(
            &["formula", "parameter", "value"],
            [vec![label.to_string(), n.to_string(), value.to_string()]],
        ),
        Format::Text => format!("{value}\n"),
    })
}

#[derive(Serialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    status: Status,
    detail: String,
}

#[derive(Serialize)]
struct VerifyDocument {
    schema_version: u32,
    group: GroupSummary,
    passed: bool,
    checks: Vec<Check>,
}

fn check(name: &'static str, ok: bool, detail: String) -> Check {
    Check {
        name,
        status: if ok { Status::Pass } else { Status::Fail },
        detail,
    }
}

fn skip(name: &'static str, detail: String) -> Check {
    Check {
        name,
        status: Status::Skip,
        detail,
    }
}

fn verify(s: &Session, text: &str) -> Outcome {
    let g = s.load(text)?;
    let c = &g.census;
    let rep = c.report();
    let mut checks = Vec::new();

    checks.push(check(
        "moebius_delta_identity",
        check_delta_identity(c.lattice(), c.moebius()),
        format!("{} subgroups", c.lattice().len()),
    ));
    checks.push(check(
        "phi2_direct_vs_moebius",
        rep.phi2 == rep.phi2_moebius,
        format!("direct {} / Möbius {}", rep.phi2, rep.phi2_moebius),
    ));
    checks.push(check(
        "orbit_count_vs_moebius",
        rep.r == rep.moebius_r,
        format!("orbits {} / Möbius {}", rep.r, rep.moebius_r),
    ));
    checks.push(check(
        "phi2_equals_r_times_aut",
        rep.phi2 == BigUint::from(rep.r as u64 * rep.aut_order),
        format!("{} = {} x {}", rep.phi2, rep.r, rep.aut_order),
    ));
    match closed_form_r(ClosedFormTarget::Group(g.desc)) {
        Ok(v) => checks.push(check(
            "closed_form_r",
            v == BigUint::from(rep.r),
            format!("formula {v} / census {}", rep.r),
        )),
        Err(e) => checks.push(skip("closed_form_r", e.to_string())),
    }
    match published_r(&g.desc) {
        Some(v) => checks.push(check(
            "published_r",
            v == rep.r as u64,
            format!("published {v} / census {}", rep.r),
        )),
        None => checks.push(skip("published_r", "no published value".into())),
    }
    let planar_ok = rep.classes.iter().all(|d| {
        let [l, m, n] = d.dessin_type;
        let spherical = m * n + l * n + l * m > l * m * n;
        d.genus != BigUint::from(0u32) || spherical
    });
    checks.push(check(
        "genus_zero_types_are_spherical",
        planar_ok,
        "1/l + 1/m + 1/n > 1 on every genus-0 class".into(),
    ));
    let rotation_ok = rep.classes.iter().all(|d| {
        let [l, m, n] = d.dessin_type;
        rep.classes
            .iter()
            .any(|e| e.dessin_type == [n, l, m] && e.genus == d.genus)
    });
    checks.push(check(
        "type_rotation_closure",
        rotation_ok,
        "every rotated type occurs with the same genus".into(),
    ));
    let full = omega_orbits(c);
    let small = omega_orbits_with(c, &NielsenMove::SMALL);
    checks.push(check(
        "nielsen_partition_small_generators",
        full.partition() == small.partition(),
        format!("nu = {}", full.nu),
    ));
    match higman_lower_bound_check(&g.desc, c, &full) {
        Ok(b) => checks.push(check(
            "higman_lower_bound",
            true,
            format!("nu {} >= labels {} >= {}", b.nu, b.distinct_labels, b.bound),
        )),
        Err(DessinError::NotApplicable(m)) => checks.push(skip("higman_lower_bound", m)),
        Err(e) => checks.push(check("higman_lower_bound", false, e.to_string())),
    }
    match simple_bound_window(c) {
        Ok(w) => {
            checks.push(check(
                "simple_bound_window",
                w.contains(&BigUint::from(rep.r)),
                format!("{} <= {} <= {}", w.lower, rep.r, w.upper),
            ));
            checks.push(check(
                "generating_pair_coverage",
                generating_pair_coverage(c),
                "every non-identity element lies in a generating pair".into(),
            ));
        }
        Err(e) => checks.push(skip("simple_bound_window", e.to_string())),
    }
    match closed_form_ucover(&g.desc) {
        Ok(expected) => {
            let digits = (c.table().len() as f64).log10() * c.r() as f64;
            if digits > LARGE_COVER_DIGITS as f64 {
                checks.push(skip("ucover_vs_closed_form", "cover too large".into()));
            } else {
                let got = ucover_record(c, None, BlockLayout::Natural)?;
                checks.push(check(
                    "ucover_vs_closed_form",
                    got.order == expected.order
                        && got.cover_type == expected.cover_type
                        && got.genus == expected.genus,
                    format!(
                        "order {} / {}, genus {} / {}",
                        got.order, expected.order, got.genus, expected.genus
                    ),
                ));
            }
        }
        Err(e) => checks.push(skip("ucover_vs_closed_form", e.to_string())),
    }

    let passed = checks.iter().all(|c| c.status != Status::Fail);
    let out = match s.format {
        Format::Json => output::json(&VerifyDocument {
            schema_version: SCHEMA_VERSION,
            group: g.summary,
            passed,
            checks,
        }),
        Format::Csv => output::csv_rows(
            &["check", "status", "detail"],
            checks.iter().map(|c| {
                let status = match c.status {
                    Status::Pass => "pass",
                    Status::Fail => "fail",
                    Status::Skip => "skip",
                };
                vec![c.name.to_string(), status.to_string(), c.detail.clone()]
            }),
        ),
        Format::Text => {
            let mut out = String::new();
            for c in &checks {
                let status = match c.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::Skip => "SKIP",
                };
                let _ = writeln!(out, "{status} {}: {}", c.name, c.detail);
            }
            out
        }
    };
    if passed {
        Ok(out)
    } else {
        Err(CliError::Verification(out))
    }
}
