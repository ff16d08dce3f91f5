use serde::Serialize;

use crate::error::{Error, Result};
use crate::padic::{PrimeContext, Valuation};
use crate::psimod::SpaceType;

fn require_p3(space: &SpaceType) -> Result<()> {
    if space.p() != 3 {
        return Err(Error::RulePremise(format!("rule is stated for p = 3, got p = {}", space.p())));
    }
    Ok(())
}

fn require_rank3(space: &SpaceType) -> Result<(u32, u32, u32)> {
    require_p3(space)?;
    match *space.halves() {
        [r, n, m] if r < n && n < m => Ok((r, n, m)),
        _ => Err(Error::RulePremise(format!("{space} is not a rank-3 type with distinct half-degrees"))),
    }
}

fn e(ctx: &PrimeContext, n: u32) -> u32 {
    ctx.val_u(n as u64).unwrap_finite()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FilterResult {
    pub passed: bool,
    pub detail: String,
}

/// First Wilkerson filter: the top half-degree is reached from a lower one
/// by `s (p - 1)` with `1 <= s <= e(m_r) + 1`.
pub fn wilkerson_filter_1(space: &SpaceType) -> FilterResult {
    let p = space.p();
    let mr = space.top();
    if mr <= p {
        return FilterResult { passed: true, detail: format!("vacuous: m_r = {mr} <= p") };
    }
    let smax = e(space.ctx(), mr) + 1;
    let halves = space.halves();
    let hit = halves[..halves.len() - 1].iter().copied().find(|&mk| {
        let d = mr - mk;
        d > 0 && d.is_multiple_of(p - 1) && (1..=smax).contains(&(d / (p - 1)))
    });
    match hit {
        Some(mk) => FilterResult { passed: true, detail: format!("m_r - {mk} = {} (p - 1)", (mr - mk) / (p - 1)) },
        None => {
            let wanted: Vec<String> = (1..=smax)
                .filter_map(|s| mr.checked_sub(s * (p - 1)))
                .map(|v| v.to_string())
                .collect();
            FilterResult {
                passed: false,
                detail: format!("needs some m_k in {{{}}}", wanted.join(", ")),
            }
        }
    }
}

/// Second Wilkerson filter: every `m_i` prime to `p` has a partner
/// `m_j = lambda m_i - p + 1` with `1 <= lambda <= p`.
pub fn wilkerson_filter_2(space: &SpaceType) -> FilterResult {
    let p = space.p();
    for &mi in space.halves() {
        if mi % p == 0 {
            continue;
        }
        let options: Vec<u32> = (1..=p).filter_map(|l| (l * mi).checked_sub(p - 1)).collect();
        if !options.iter().any(|&x| space.has_generator(x)) {
            let shown: Vec<String> = options.iter().map(|x| x.to_string()).collect();
            return FilterResult {
                passed: false,
                detail: format!("lambda {mi} - {} in {{{}}}, none present", p - 1, shown.join(", ")),
            };
        }
    }
    FilterResult { passed: true, detail: "every m_i prime to p has a partner".into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "case")]
pub enum CaseTag {
    /// `3 | m`, `3 | n`, `m - n = 2s`.
    Case1 { s: u32 },
    /// `3 | m`, `3 ∤ n`, `m - n = 2s`.
    Case2 { s: u32 },
    /// `3 ∤ m`, `m - n = 2s`.
    Case3 { s: u32 },
    /// `m - r = 2t` and no `s` works for `m - n`.
    Case4 { t: u32 },
}

impl CaseTag {
    pub fn number(&self) -> u8 {
        match self {
            CaseTag::Case1 { .. } => 1,
            CaseTag::Case2 { .. } => 2,
            CaseTag::Case3 { .. } => 3,
            CaseTag::Case4 { .. } => 4,
        }
    }
}

pub fn case_split(space: &SpaceType) -> Result<Option<CaseTag>> {
    let (r, n, m) = require_rank3(space)?;
    let smax = e(space.ctx(), m) + 1;
    let witness = |d: u32| (d.is_multiple_of(2) && (1..=smax).contains(&(d / 2))).then_some(d / 2);
    if let Some(s) = witness(m - n) {
        return Ok(Some(match (m % 3 == 0, n % 3 == 0) {
            (true, true) => CaseTag::Case1 { s },
            (true, false) => CaseTag::Case2 { s },
            (false, _) => CaseTag::Case3 { s },
        }));
    }
    Ok(witness(m - r).map(|t| CaseTag::Case4 { t }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma43 {
    pub subcase: u8,
    pub applicable: bool,
    pub inequality_holds: bool,
    pub detail: String,
}

fn flog3(x: u32) -> u32 {
    crate::finiteness::floor_log(3, x as u64)
}

/// The four inequalities for Case 1 types; `e(0)` is infinite and makes the
/// corresponding branch hold trivially.
pub fn lemma_4_3(subcase: u8, r: u32, n: u32, m: u32) -> Result<Lemma43> {
    let ctx = PrimeContext::new(3)?;
    let en = e(&ctx, n);
    let em = e(&ctx, m);
    let mixed = || -> Valuation {
        let a = ctx.val(3 * n as i64 - m as i64);
        let b = ctx.val(3 * n as i64 - 2 * m as i64);
        a.max(b)
    };
    let out = |applicable: bool, holds: bool, detail: String| Lemma43 {
        subcase,
        applicable,
        inequality_holds: holds,
        detail,
    };
    Ok(match subcase {
        1 => {
            let app = r == 2 && m > n && n > 6 && em >= en + 2;
            let lhs = 8 * en + 23;
            out(app, lhs >= n, format!("8 e(n) + 23 = {lhs} vs n = {n}"))
        }
        2 => {
            let app = r == 2 && m > n && n > 6 && em == en + 1;
            match mixed() {
                Valuation::Infinite => out(app, true, "max(e(3n - m), e(3n - 2m)) is infinite".into()),
                Valuation::Finite(x) => {
                    let lhs = 8 * x + 15;
                    out(app, lhs >= n, format!("8 max(e(3n - m), e(3n - 2m)) + 15 = {lhs} vs n = {n}"))
                }
            }
        }
        3 => {
            let app = m <= 3 * r && em >= en + 2;
            let l = flog3(m - r);
            let a = 7 * en + l + 24;
            let b = 8 * l + 24;
            out(
                app,
                a >= m || b >= 3 * r,
                format!("7 e(n) + log = {a} vs m = {m}; 8 log + 24 = {b} vs 3r = {}", 3 * r),
            )
        }
        4 => {
            let app = m <= 3 * r && em == en + 1;
            let l = flog3(m - r);
            let b = 8 * l + 24;
            match mixed() {
                Valuation::Infinite => out(app, true, "max(e(3n - m), e(3n - 2m)) is infinite".into()),
                Valuation::Finite(x) => {
                    let a = 7 * x + l + 17;
                    out(
                        app,
                        a >= m || b >= 3 * r,
                        format!("7 max(...) + log + 17 = {a} vs m = {m}; 8 log + 24 = {b} vs 3r = {}", 3 * r),
                    )
                }
            }
        }
        _ => return Err(Error::OutOfRange(format!("subcase {subcase} not in 1..=4"))),
    })
}

/// Outcome of the forced-operation predicate for `P^{3^a}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HemmiFact {
    pub a: u32,
    pub n: u32,
    pub applicable: bool,
    pub op: u32,
    pub source_half: u32,
    pub target_half: u32,
    /// Both ends are generator half-degrees with one-dimensional
    /// indecomposables, so `P^{3^a}(x_source) = c x_target` with `c != 0`.
    pub forced: bool,
}

pub fn hemmi_forced(space: &SpaceType, a: u32, n: u32) -> Result<HemmiFact> {
    require_p3(space)?;
    let scale = 3u32.pow(a);
    let source_half = scale * n.saturating_sub(2);
    let target_half = scale * n;
    let precondition = !n.is_multiple_of(3) && n > 3;
    let blocked = space
        .halves()
        .iter()
        .any(|&g| g % (2 * scale) == 0 && g / (2 * scale) >= n.saturating_sub(1));
    let applicable = precondition && !blocked;
    let forced = applicable
        && space.generator_count(source_half) == 1
        && space.generator_count(target_half) == 1;
    Ok(HemmiFact { a, n, applicable, op: scale, source_half, target_half, forced })
}

/// A single reduced power that may carry a lower generator onto the top one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TopOperation {
    pub source_half: u32,
    pub op: u32,
}

/// All `(m_k, i)` with `m_k + i (p - 1) = m_r` and `1 <= i < m_k`; one of
/// them must hit `x_{m_r}`, so an empty list eliminates the type.
pub fn top_operation_lemma(space: &SpaceType) -> Result<Vec<TopOperation>> {
    let p = space.p();
    let mr = space.top();
    if mr <= p {
        return Err(Error::RulePremise(format!("top half-degree {mr} is not above p = {p}")));
    }
    let mut out: Vec<TopOperation> = space
        .halves()
        .iter()
        .copied()
        .filter(|&mk| mk < mr && (mr - mk).is_multiple_of(p - 1))
        .map(|mk| TopOperation { source_half: mk, op: (mr - mk) / (p - 1) })
        .filter(|t| t.op >= 1 && t.op < t.source_half)
        .collect();
    out.dedup();
    Ok(out)
}

/// Types with `m_r - m_1 < 2(p - 1)` split as products.
pub fn quasi_regular(space: &SpaceType) -> bool {
    space.top() - space.bottom() < 2 * (space.p() - 1)
}
