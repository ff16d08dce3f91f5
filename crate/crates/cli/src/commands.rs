use apsieve_core::classifier::{
    assemble_theorem_1_2, classify_type, proposition_lists, reference, ClassifyOptions, TypeReport,
};
use apsieve_core::finiteness::{estimate, monomial_count, rank_bound};
use apsieve_core::psimod::{condition_report, enumerate_classes, gcd_oracle, main_lemma_val, theorem_1_1_test};
use apsieve_core::steenrod::{
    format_adem, format_sum, normalize, verify_adem_instance, verify_relation_42, verify_relation_43, PowerWord,
};
use apsieve_core::{PrimeContext, SpaceType, Window};
use rayon::prelude::*;
use serde_json::json;

use crate::config::RunConfig;
use crate::report::{ReportDocument, TypeEntry};
use crate::CliError;

pub enum Output {
    Text(String),
    Report(Box<ReportDocument>),
}

pub struct CommandResult {
    pub output: Output,
    pub exit_code: i32,
}

impl CommandResult {
    fn text(s: impl Into<String>) -> Self {
        CommandResult { output: Output::Text(s.into()), exit_code: 0 }
    }

    fn report(doc: ReportDocument) -> Self {
        let exit_code = if doc.discrepancies.is_empty() { 0 } else { 1 };
        CommandResult { output: Output::Report(Box::new(doc)), exit_code }
    }

    pub fn render(&self) -> String {
        match &self.output {
            Output::Text(s) => format!("{s}\n"),
            Output::Report(doc) => doc.render(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scalar {
    Val,
    Nu,
    DigitSum,
    ValFact,
}

pub fn cmd_scalar(cfg: &RunConfig, which: Scalar, n: i64) -> Result<CommandResult, CliError> {
    let ctx = cfg.validate()?;
    let nonneg = || u64::try_from(n).map_err(|_| CliError::Usage(format!("{n} must be non-negative")));
    let out = match which {
        Scalar::Val => ctx.val(n).to_string(),
        Scalar::Nu => ctx.nu(n).to_string(),
        Scalar::DigitSum => ctx.digit_sum(nonneg()?).to_string(),
        Scalar::ValFact => ctx.val_factorial(nonneg()?).to_string(),
    };
    Ok(CommandResult::text(out))
}

pub fn cmd_valuations(cfg: &RunConfig, n: u64) -> Result<CommandResult, CliError> {
    let ctx = cfg.validate()?;
    let signed = i64::try_from(n).map_err(|_| CliError::Usage(format!("{n} is too large")))?;
    let mut doc = ReportDocument::new(format!("valuations {n}"), cfg);
    doc.data = json!({
        "n": n,
        "e": ctx.val(signed),
        "nu": ctx.nu(signed),
        "digit_sum": ctx.digit_sum(n),
        "e_factorial": ctx.val_factorial(n),
    });
    Ok(CommandResult::report(doc))
}

fn oracle_check(cfg: &RunConfig, r: &TypeReport, discrepancies: &mut Vec<String>) -> Result<(), CliError> {
    if !cfg.oracle {
        return Ok(());
    }
    let Some(cert) = r.psi_certificate() else { return Ok(()) };
    for (idx, class) in cert.report.classes.iter().enumerate() {
        let oracle = gcd_oracle(&cert.report.module, idx, cfg.k_max)?;
        if oracle.finite() != Some(class.valuation_sum) {
            discrepancies.push(format!(
                "{}: class {} has valuation {} but the big-integer oracle gives {}",
                r.space, class.degree, class.valuation_sum, oracle
            ));
        }
    }
    Ok(())
}

fn options(cfg: &RunConfig) -> ClassifyOptions {
    ClassifyOptions { policy: cfg.policy() }
}

pub fn cmd_check_type(cfg: &RunConfig, degrees: &str) -> Result<CommandResult, CliError> {
    let ctx = cfg.validate()?;
    let space = SpaceType::parse(ctx, degrees).map_err(|e| CliError::Usage(e.to_string()))?;
    let report = classify_type(&space, options(cfg))?;
    let mut doc = ReportDocument::new(format!("check-type {space}"), cfg);
    oracle_check(cfg, &report, &mut doc.discrepancies)?;
    doc.types.push(TypeEntry::from_report(&report));
    Ok(CommandResult::report(doc))
}

pub fn cmd_adem(cfg: &RunConfig, a: u32, b: u32) -> Result<CommandResult, CliError> {
    let ctx = cfg.validate()?;
    let line = format_adem(a, b, ctx.p() as u32).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(CommandResult::text(line))
}

pub fn cmd_bound(cfg: &RunConfig) -> Result<CommandResult, CliError> {
    let ctx = cfg.validate()?;
    let (p, r) = (ctx.p(), cfg.rank as u64);
    let bound = rank_bound(p, r)?;
    let mut doc = ReportDocument::new("bound", cfg);
    let scan_limit = 10_000u64.max(bound.horizon + 1);
    let last_fail = (1..scan_limit).filter(|&m| estimate(p, bound.n, m) >= m).max().unwrap_or(0);
    if last_fail + 1 != bound.m0 {
        doc.discrepancies.push(format!(
            "brute scan to {scan_limit} puts the last failure at {last_fail}, bound says {}",
            bound.m0
        ));
    }
    let mut largest_candidate = None;
    if p == 3 && r == 3 {
        let top = reference::CASE1
            .iter()
            .chain(&reference::CASE2)
            .chain(&reference::CASE3)
            .chain(&reference::CASE4)
            .map(|t| t[2])
            .max()
            .unwrap_or(0);
        if top as u64 >= bound.m0 {
            doc.discrepancies.push(format!("candidate with top half-degree {top} is not below {}", bound.m0));
        }
        largest_candidate = Some(top);
    }
    doc.data = json!({
        "bound": bound,
        "monomial_count": monomial_count(p, r)?,
        "brute_scan_limit": scan_limit,
        "largest_candidate_top": largest_candidate,
    });
    Ok(CommandResult::report(doc))
}

/// Non-decreasing half-degree sequences of length `1..=max_rank`.
fn multisets(ctx: PrimeContext, max_rank: usize, cap: u32) -> Vec<SpaceType> {
    fn rec(ctx: PrimeContext, len: usize, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<SpaceType>) {
        if cur.len() == len {
            out.push(SpaceType::new(ctx, cur.clone()).expect("valid type"));
            return;
        }
        let start = cur.last().copied().unwrap_or(2);
        for h in start..=cap {
            cur.push(h);
            rec(ctx, len, cap, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for len in 1..=max_rank {
        rec(ctx, len, cap, &mut Vec::new(), &mut out);
    }
    out
}

pub fn thm11_demo(cfg: &RunConfig) -> Result<CommandResult, CliError> {
    let ctx = cfg.validate()?;
    let p = ctx.p() as u32;
    let candidates = multisets(ctx, cfg.rank, cfg.max_half_degree);
    let failing: Vec<SpaceType> = candidates.into_iter().filter(|t| !theorem_1_1_test(t).passed()).collect();
    let results: Vec<(SpaceType, bool)> = failing
        .par_iter()
        .map(|t| {
            let w = Window::new(t.bottom(), p * t.bottom()).expect("valid window");
            let ok = condition_report(&enumerate_classes(t, w)).map(|r| r.certifies()).unwrap_or(false);
            (t.clone(), ok)
        })
        .collect();
    let mut doc = ReportDocument::new("reproduce thm1.1-demo", cfg);
    for (t, ok) in &results {
        if !ok {
            doc.discrepancies.push(format!("{t} fails the gcd test but is not certified on [m_1, p m_1]"));
        }
    }
    let example = SpaceType::new(ctx, vec![4, 8, 12]).ok().filter(|_| p == 3).map(|t| {
        let w = Window::new(4, 12).expect("valid window");
        condition_report(&enumerate_classes(&t, w)).ok()
    });
    doc.data = json!({
        "failing_gcd_test": results.len(),
        "certified": results.iter().filter(|(_, ok)| *ok).count(),
        "example": example.flatten(),
    });
    Ok(CommandResult::report(doc))
}

fn require_rank3_p3(cfg: &RunConfig) -> Result<(), CliError> {
    if cfg.p != 3 || cfg.rank != 3 {
        return Err(CliError::Usage("this target is defined for --p 3 --rank 3".into()));
    }
    Ok(())
}

pub fn reproduce_prop(cfg: &RunConfig, case: u8) -> Result<CommandResult, CliError> {
    cfg.validate()?;
    require_rank3_p3(cfg)?;
    let lists = proposition_lists(cfg.max_half_degree)?;
    let computed: Vec<SpaceType> = lists.case(case).to_vec();
    let expected: Vec<Vec<u32>> = reference::case_list(case).iter().map(|t| t.to_vec()).collect();
    let mut doc = ReportDocument::new(format!("reproduce prop{case}"), cfg);
    let got: Vec<Vec<u32>> = computed.iter().map(|t| t.halves().to_vec()).collect();
    if got != expected {
        doc.discrepancies.push(format!("case {case}: computed {got:?}, expected {expected:?}"));
    }
    let eliminated: Vec<_> = lists
        .entries
        .iter()
        .filter(|e| e.case.number() == case)
        .filter_map(|e| e.step.as_ref().map(|s| json!({ "type": e.space, "step": s })))
        .collect();
    doc.data = json!({
        "case": case,
        "computed": computed,
        "expected": expected,
        "eliminated": eliminated,
    });
    Ok(CommandResult::report(doc))
}

pub fn reproduce_thm12(cfg: &RunConfig) -> Result<CommandResult, CliError> {
    cfg.validate()?;
    require_rank3_p3(cfg)?;
    let opts = options(cfg);
    let lists = proposition_lists(cfg.max_half_degree)?;
    let reports: Vec<TypeReport> = lists
        .all()
        .par_iter()
        .map(|t| classify_type(t, opts))
        .collect::<Result<_, _>>()?;
    let thm = assemble_theorem_1_2(&lists, opts, reports);
    let mut doc = ReportDocument::new("reproduce thm1.2", cfg);
    for r in &thm.types {
        oracle_check(cfg, r, &mut doc.discrepancies)?;
        let replays = std::iter::once(r.verdict.elimination())
            .flatten()
            .chain(&r.corroborating)
            .all(|e| e.replay(&r.space));
        if !replays {
            doc.discrepancies.push(format!("{}: certificate does not replay", r.space));
        }
        doc.types.push(TypeEntry::from_report(r));
    }
    doc.discrepancies.extend(thm.discrepancies.iter().cloned());
    doc.psi_uncertified = thm.psi_uncertified.clone();
    doc.data = json!({
        "candidates": thm.candidates,
        "survivors": thm.survivors,
        "quasi_regular": thm.quasi_regular,
        "steenrod_eliminated": thm.steenrod_eliminated,
        "psi_eliminated": thm.psi_eliminated,
        "other_eliminated": thm.other_eliminated,
        "psi_claimed": thm.psi_claimed,
        "expected_survivors": reference::SURVIVORS,
    });
    doc.sort_types();
    Ok(CommandResult::report(doc))
}

pub fn reproduce_lemma34(cfg: &RunConfig) -> Result<CommandResult, CliError> {
    cfg.validate()?;
    let mut doc = ReportDocument::new("reproduce lemma3.4", cfg);
    let mut checked = 0u64;
    for p in [3u64, 5] {
        let ctx = PrimeContext::new(p)?;
        for m in (1..=30u64).filter(|m| (p - 1) % m != 0) {
            for t in 1..=4u64 {
                for i in t..=t * p {
                    let v = main_lemma_val(&ctx, m, t, i)?;
                    checked += 1;
                    if v as u64 >= m * t {
                        doc.discrepancies.push(format!("p = {p}, m = {m}, t = {t}, i = {i}: valuation {v} >= {}", m * t));
                    }
                }
            }
        }
    }
    doc.data = json!({ "primes": [3, 5], "max_m": 30, "max_t": 4, "checked": checked });
    Ok(CommandResult::report(doc))
}

/// Expected signed term list of an Adem expansion.
type TermList = &'static [(&'static [u32], i64)];

pub fn reproduce_adem(cfg: &RunConfig) -> Result<CommandResult, CliError> {
    cfg.validate()?;
    let mut doc = ReportDocument::new("reproduce adem", cfg);
    let mut lines = Vec::new();
    let instances: [(u32, u32, TermList); 2] =
        [(3, 7, &[(&[10], -1), (&[9, 1], 1)]), (3, 9, &[(&[12], 1), (&[11, 1], 1)])];
    for (a, b, expected) in instances {
        match verify_adem_instance(a, b, 3, expected) {
            Ok(_) => lines.push(format_adem(a, b, 3)?),
            Err(e) => doc.discrepancies.push(e.to_string()),
        }
    }
    let square = normalize(&PowerWord::single(&[1, 1]), 3);
    if square != vec![PowerWord::new([2], 2)] {
        doc.discrepancies.push(format!("P^1 P^1 normalizes to {}", format_sum(&square, 3)));
    }
    lines.push(format!("P^1 P^1 = {}", format_sum(&square, 3)));
    let mut r42 = Vec::new();
    for k in 1..=50 {
        match verify_relation_42(k) {
            Ok(r) => r42.push(json!({ "k": k, "epsilon": r.epsilon, "coeff_second": r.coeff_second })),
            Err(e) => doc.discrepancies.push(e.to_string()),
        }
    }
    let mut r43 = Vec::new();
    for l in 2..=50 {
        match verify_relation_43(l) {
            Ok(r) => r43.push(json!({ "l": l, "eps1": r.eps1, "eps2": r.eps2, "eps3": r.eps3, "trailing": r.trailing })),
            Err(e) => doc.discrepancies.push(e.to_string()),
        }
    }
    doc.data = json!({ "instances": lines, "p1p3_family": r42, "p9_family": r43 });
    Ok(CommandResult::report(doc))
}

pub fn reproduce(cfg: &RunConfig, target: &str) -> Result<CommandResult, CliError> {
    match target {
        "thm1.1-demo" => thm11_demo(cfg),
        "prop1" => reproduce_prop(cfg, 1),
        "prop2" => reproduce_prop(cfg, 2),
        "prop3" => reproduce_prop(cfg, 3),
        "prop4" => reproduce_prop(cfg, 4),
        "thm1.2" => reproduce_thm12(cfg),
        "lemma3.4" => reproduce_lemma34(cfg),
        "adem" => reproduce_adem(cfg),
        "bound" => cmd_bound(cfg),
        other => Err(CliError::Usage(format!(
            "unknown target {other:?}; expected one of thm1.1-demo, prop1..prop4, thm1.2, lemma3.4, adem, bound"
        ))),
    }
}
