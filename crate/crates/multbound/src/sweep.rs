//! The verification sweep: materialise each corpus entry, run the
//! oracle, every bound and every property checker, and assemble a
//! deterministic machine-readable report.

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{self, BoundKind, Verdict};
use crate::cohomology::{multiplier_type, DEFAULT_ORACLE_CAP};
use crate::corpus::{self, CorpusEntry, CorpusError};
use crate::ew;
use crate::group::{self, GroupProfile, TableGroup};
use crate::pc::DEFAULT_TABLE_CAP;

/// Names of every property checker the sweep can emit; the registry
/// completeness test asserts each one appears in a full run.
pub const PROPERTY_NAMES: &[&str] = &[
    "master_inequality",
    "psi_lower",
    "psi2_lower",
    "v_subgroup",
    "karpilovsky",
    "dominance",
];

#[derive(Debug, Clone)]
pub struct SweepOptions {
    pub families: Option<Vec<String>>,
    pub inputs: Vec<std::path::PathBuf>,
    pub max_order: u64,
    pub oracle_cap: u64,
    pub jobs: Option<usize>,
    pub reproducible: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            families: None,
            inputs: Vec::new(),
            max_order: 128,
            oracle_cap: DEFAULT_ORACLE_CAP,
            jobs: None,
            reproducible: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub families: Option<Vec<String>>,
    pub inputs: Vec<String>,
    pub max_order: u64,
    pub oracle_cap: u64,
    pub jobs: Option<usize>,
    pub reproducible: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MultiplierJson {
    /// invariant factor exponents of `M(G)`, descending
    pub r#type: Vec<u32>,
    pub type_display: String,
    pub order_log: u64,
    /// `(level j, log_p |H²(G, ℤ/pʲ)|)`
    pub levels: Vec<(u32, u64)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundRow {
    pub name: String,
    pub kind: String,
    pub exponent_num: i64,
    pub exponent_den: i64,
    pub applicable: bool,
    pub reason: Option<String>,
    pub verdict: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertyRow {
    pub name: String,
    pub verdict: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupRecord {
    pub id: String,
    pub order: Option<u64>,
    pub profile: Option<GroupProfile>,
    pub multiplier: Option<MultiplierJson>,
    pub bounds: Vec<BoundRow>,
    pub properties: Vec<PropertyRow>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Summary {
    pub groups: usize,
    pub pass: usize,
    pub fail: usize,
    pub vacuous: usize,
    pub skipped: usize,
    pub errors: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub schema: u32,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub config: ConfigEcho,
    pub groups: Vec<GroupRecord>,
    pub summary: Summary,
}

fn verdict_row(name: &str, verdict: Verdict, lhs: impl ToString, rhs: impl ToString) -> PropertyRow {
    PropertyRow {
        name: name.to_string(),
        verdict: verdict.as_str().to_string(),
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    }
}

fn pass_fail(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

/// Run every property checker on one materialised group.
fn property_rows(
    g: &TableGroup,
    profile: &GroupProfile,
    oracle_log: Option<u64>,
    oracle_cap: u64,
    dominance: Option<&bounds::Dominance>,
) -> Result<Vec<PropertyRow>, String> {
    let mut rows = Vec::new();
    let p = profile.p;

    if profile.is_abelian {
        for name in ["master_inequality", "psi_lower", "psi2_lower"] {
            rows.push(verdict_row(name, Verdict::Vacuous, "-", "-"));
        }
    } else {
        let ctx = ew::PsiContext::new(g).map_err(|e| e.to_string())?;
        let delta = ctx.ab().rank() as u32;

        match oracle_log {
            Some(m) => {
                let ineq = ew::ew_inequality(g, m).map_err(|e| e.to_string())?;
                rows.push(verdict_row(
                    "master_inequality",
                    pass_fail(ineq.holds()),
                    format!("p^{}", ineq.lhs_log),
                    format!("p^{} <= p^{}", ineq.rhs_log, ineq.rhs_relaxed_log),
                ));
            }
            None => rows.push(verdict_row("master_inequality", Verdict::Skipped, "-", "-")),
        }

        // |Im Ψᵢ| ≥ p^(δ-i) for 2 ≤ i ≤ min(δ, c)
        let hi = delta.min(profile.c);
        if hi < 2 {
            rows.push(verdict_row("psi_lower", Verdict::Vacuous, "-", "-"));
        } else {
            let mut ok = true;
            let mut lhs = Vec::new();
            let mut rhs = Vec::new();
            for i in 2..=hi {
                let im = ctx.psi_image_log(i).map_err(|e| e.to_string())?;
                ok &= im >= (delta - i) as u64;
                lhs.push(format!("p^{im}"));
                rhs.push(format!("p^{}", delta - i));
            }
            rows.push(verdict_row("psi_lower", pass_fail(ok), lhs.join(","), rhs.join(",")));
        }

        // |Im Ψ₂| ≥ p^(Σ_{i=2}^{min(δ,γ+1)} (δ-i))
        let im2 = ctx.psi_image_log(2).map_err(|e| e.to_string())?;
        let bound: i64 = (2..=profile.nu().min(delta) as i64)
            .map(|i| delta as i64 - i)
            .sum();
        let bound = bound.max(0) as u64;
        rows.push(verdict_row(
            "psi2_lower",
            pass_fail(im2 >= bound),
            format!("p^{im2}"),
            format!("p^{bound}"),
        ));
    }

    // |V| = p^(t(2d-t+1)/2) for p odd, class 2, Gᵖ ≤ γ₂
    if p != 2 && profile.c == 2 && profile.has_gp_in_gamma2 {
        let v = ew::v_subgroup_log(g).map_err(|e| e.to_string())?;
        let formula = (profile.t * (2 * profile.d - profile.t + 1) / 2) as u64;
        rows.push(verdict_row(
            "v_subgroup",
            pass_fail(v == formula),
            format!("p^{v}"),
            format!("p^{formula}"),
        ));
    } else {
        rows.push(verdict_row("v_subgroup", Verdict::Vacuous, "-", "-"));
    }

    // |M(G)| |Gᵖ| = |M(G/Gᵖ)| for class 2, p odd, Gᵖ ≅ ℤ_p
    if p != 2 && profile.c == 2 && profile.has_gp_cyclic_p {
        match oracle_log {
            Some(m) => {
                let (_, agemo) = group::frattini_agemo(g);
                let (q, _) = group::quotient(g, &agemo).map_err(|e| e.to_string())?;
                let mq = multiplier_type(&q, oracle_cap).map_err(|e| e.to_string())?;
                rows.push(verdict_row(
                    "karpilovsky",
                    pass_fail(m + 1 == mq.order_log),
                    format!("p^{}", m + 1),
                    format!("p^{}", mq.order_log),
                ));
            }
            None => rows.push(verdict_row("karpilovsky", Verdict::Skipped, "-", "-")),
        }
    } else {
        rows.push(verdict_row("karpilovsky", Verdict::Vacuous, "-", "-"));
    }

    match dominance {
        Some(d) => rows.push(verdict_row(
            "dominance",
            pass_fail(d.holds()),
            format!("{d:?}"),
            "orderings hold",
        )),
        None => rows.push(verdict_row("dominance", Verdict::Vacuous, "-", "-")),
    }

    Ok(rows)
}

fn bound_rows(report: &bounds::BoundReport) -> Vec<BoundRow> {
    report
        .bounds
        .iter()
        .map(|cb| BoundRow {
            name: cb.value.name.to_string(),
            kind: match cb.value.kind {
                BoundKind::Upper => "upper".to_string(),
                BoundKind::Lower => "lower".to_string(),
            },
            exponent_num: *cb.value.exponent.numer(),
            exponent_den: *cb.value.exponent.denom(),
            applicable: cb.value.applicable,
            reason: cb.value.reason.map(str::to_string),
            verdict: cb.verdict.as_str().to_string(),
        })
        .collect()
}

/// Process one corpus entry; never panics on bad input, the error is
/// recorded on the record instead.
pub fn process_entry(entry: &CorpusEntry, oracle_cap: u64) -> GroupRecord {
    let mut record = GroupRecord {
        id: entry.id.clone(),
        order: None,
        profile: None,
        multiplier: None,
        bounds: Vec::new(),
        properties: Vec::new(),
        error: None,
    };
    let g = match entry.presentation.materialize_table(DEFAULT_TABLE_CAP) {
        Ok(g) => g,
        Err(e) => {
            record.error = Some(format!("rejected: {e}"));
            return record;
        }
    };
    record.order = Some(g.order() as u64);
    let profile = group::group_profile(&g);
    record.profile = Some(profile.clone());

    let oracle = if (g.order() as u64) <= oracle_cap {
        match multiplier_type(&g, oracle_cap) {
            Ok(m) => Some(m),
            Err(e) => {
                record.error = Some(format!("oracle: {e}"));
                return record;
            }
        }
    } else {
        None
    };
    let oracle_log = oracle.as_ref().map(|m| m.order_log);
    if let Some(m) = &oracle {
        record.multiplier = Some(MultiplierJson {
            r#type: m.ty.exps().to_vec(),
            type_display: m.ty.to_string(),
            order_log: m.order_log,
            levels: m.levels.clone(),
        });
    }

    let bound_report = bounds::check_report(&profile, oracle_log);
    record.bounds = bound_rows(&bound_report);
    match property_rows(&g, &profile, oracle_log, oracle_cap, bound_report.dominance.as_ref()) {
        Ok(rows) => record.properties = rows,
        Err(e) => record.error = Some(format!("property checker: {e}")),
    }
    record
}

fn summarise(groups: &[GroupRecord]) -> Summary {
    let mut s = Summary { groups: groups.len(), ..Summary::default() };
    for g in groups {
        if g.error.is_some() {
            s.errors += 1;
        }
        let verdicts = g
            .bounds
            .iter()
            .map(|b| b.verdict.as_str())
            .chain(g.properties.iter().map(|p| p.verdict.as_str()));
        for v in verdicts {
            match v {
                "pass" => s.pass += 1,
                "fail" => s.fail += 1,
                "vacuous" => s.vacuous += 1,
                "skipped" => s.skipped += 1,
                _ => unreachable!(),
            }
        }
    }
    s
}

/// Assemble the corpus for a set of options.
pub fn assemble_corpus(options: &SweepOptions) -> Result<Vec<CorpusEntry>, CorpusError> {
    let mut entries = corpus::builtin_corpus(options.families.as_deref(), options.max_order)?;
    for path in &options.inputs {
        entries.push(corpus::entry_from_file(path)?);
    }
    entries.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(entries)
}

/// Run the sweep: fan out per-entry work, then merge by id.
pub fn run_sweep(options: &SweepOptions) -> Result<SweepReport, CorpusError> {
    let entries = assemble_corpus(options)?;
    let oracle_cap = options.oracle_cap;

    let work = || -> Vec<GroupRecord> {
        entries
            .par_iter()
            .map(|e| process_entry(e, oracle_cap))
            .collect()
    };
    let mut groups = match options.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool")
            .install(work),
        None => work(),
    };
    groups.sort_by(|a, b| a.id.cmp(&b.id));

    let summary = summarise(&groups);
    let timestamp = if options.reproducible {
        None
    } else {
        use std::time::{SystemTime, UNIX_EPOCH};
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Some(secs.to_string())
    };
    Ok(SweepReport {
        schema: 1,
        version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp,
        config: ConfigEcho {
            families: options.families.clone(),
            inputs: options.inputs.iter().map(|p| p.display().to_string()).collect(),
            max_order: options.max_order,
            oracle_cap,
            jobs: options.jobs,
            reproducible: options.reproducible,
        },
        groups,
        summary,
    })
}

pub fn render_json(report: &SweepReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serialises");
    s.push('\n');
    s
}

/// Flat projection: one row per group x bound.
pub fn render_csv(report: &SweepReport) -> String {
    let mut out = String::from(
        "id,p,n,k,d,c,delta,gamma,t,multiplier_log,bound,kind,exponent_num,exponent_den,applicable,verdict\n",
    );
    for g in &report.groups {
        let profile = match &g.profile {
            Some(p) => p,
            None => continue,
        };
        let m = g
            .multiplier
            .as_ref()
            .map(|m| m.order_log.to_string())
            .unwrap_or_default();
        for b in &g.bounds {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                g.id,
                profile.p,
                profile.n,
                profile.k,
                profile.d,
                profile.c,
                profile.delta,
                profile.gamma,
                profile.t,
                m,
                b.name,
                b.kind,
                b.exponent_num,
                b.exponent_den,
                b.applicable,
                b.verdict,
            ));
        }
    }
    out
}

/// 0 all pass; 2 a bound or property violation; 3 an entry was rejected.
pub fn exit_code(report: &SweepReport) -> i32 {
    if report.summary.fail > 0 {
        2
    } else if report.summary.errors > 0 {
        3
    } else {
        0
    }
}
