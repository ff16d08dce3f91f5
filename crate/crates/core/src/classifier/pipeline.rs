use serde::Serialize;

use super::endgame::{endgame_rules, RuleTrace};
use super::filters::{case_split, quasi_regular, wilkerson_filter_1, wilkerson_filter_2, CaseTag};
use super::propositions::{enumerate_types, proposition_lists, proposition_step, ArithmeticStep, PropositionLists};
use super::reference;
use crate::error::Result;
use crate::padic::PrimeContext;
use crate::psimod::{eliminate_by_psi_with, theorem_1_1_test, GcdTest, PsiCertificate, SpaceType, Window, WindowPolicy};

/// Stages in precedence order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Stage {
    GcdTest,
    WilkersonFilter,
    PropositionArithmetic,
    SteenrodRule,
    PsiCondition,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "stage")]
pub enum Elimination {
    GcdTest { m: u32 },
    WilkersonFilter { which: u8, detail: String },
    PropositionArithmetic(ArithmeticStep),
    SteenrodRule(RuleTrace),
    PsiCondition(PsiCertificate),
}

impl Elimination {
    pub fn stage(&self) -> Stage {
        match self {
            Elimination::GcdTest { .. } => Stage::GcdTest,
            Elimination::WilkersonFilter { .. } => Stage::WilkersonFilter,
            Elimination::PropositionArithmetic(_) => Stage::PropositionArithmetic,
            Elimination::SteenrodRule(_) => Stage::SteenrodRule,
            Elimination::PsiCondition(_) => Stage::PsiCondition,
        }
    }

    /// Re-checks the elimination from its certificate alone.
    pub fn replay(&self, space: &SpaceType) -> bool {
        match self {
            Elimination::GcdTest { m } => theorem_1_1_test(space) == GcdTest::Fail { m: *m },
            Elimination::WilkersonFilter { which: 1, .. } => !wilkerson_filter_1(space).passed,
            Elimination::WilkersonFilter { .. } => !wilkerson_filter_2(space).passed,
            Elimination::PropositionArithmetic(step) => step.replay(space),
            Elimination::SteenrodRule(trace) => trace.space == *space && trace.replay(),
            Elimination::PsiCondition(cert) => cert.replay(space),
        }
    }

    pub fn summary(&self) -> String {
        match self {
            Elimination::GcdTest { m } => format!("gcd test: gcd {m} does not divide p - 1"),
            Elimination::WilkersonFilter { which, detail } => format!("Wilkerson filter {which}: {detail}"),
            Elimination::PropositionArithmetic(s) => format!("case {} step {}: {}", s.case, s.id, s.detail),
            Elimination::SteenrodRule(t) => format!("Steenrod rule {}", t.rule),
            Elimination::PsiCondition(c) => format!("psi condition on window {}", c.window),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    Survives,
    QuasiRegular,
    Eliminated(Elimination),
}

impl Verdict {
    pub fn label(&self) -> String {
        match self {
            Verdict::Survives => "survives".into(),
            Verdict::QuasiRegular => "quasi-regular".into(),
            Verdict::Eliminated(e) => format!("eliminated ({:?})", e.stage()),
        }
    }

    pub fn elimination(&self) -> Option<&Elimination> {
        match self {
            Verdict::Eliminated(e) => Some(e),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassifyOptions {
    pub policy: WindowPolicy,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { policy: WindowPolicy::Standard }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypeReport {
    #[serde(rename = "type")]
    pub space: SpaceType,
    pub verdict: Verdict,
    pub case: Option<CaseTag>,
    /// Further stages that would also eliminate the type.
    pub corroborating: Vec<Elimination>,
}

impl TypeReport {
    pub fn psi_certificate(&self) -> Option<&PsiCertificate> {
        std::iter::once(self.verdict.elimination())
            .flatten()
            .chain(self.corroborating.iter())
            .find_map(|e| match e {
                Elimination::PsiCondition(c) => Some(c),
                _ => None,
            })
    }
}

/// Runs every stage on one type. Rank-3 stages apply only at `p = 3`.
pub fn all_eliminations(space: &SpaceType, opts: ClassifyOptions) -> Result<Vec<Elimination>> {
    let mut out = Vec::new();
    if let GcdTest::Fail { m } = theorem_1_1_test(space) {
        out.push(Elimination::GcdTest { m });
    }
    for (which, f) in [(1u8, wilkerson_filter_1(space)), (2, wilkerson_filter_2(space))] {
        if !f.passed {
            out.push(Elimination::WilkersonFilter { which, detail: f.detail });
        }
    }
    let rank3_p3 = space.p() == 3 && space.rank() == 3 && space.halves().windows(2).all(|w| w[0] < w[1]);
    if rank3_p3 && out.is_empty() {
        if let Some(step) = proposition_step(space)? {
            out.push(Elimination::PropositionArithmetic(step));
        }
    }
    if let Some(trace) = endgame_rules(space)? {
        out.push(Elimination::SteenrodRule(trace));
    }
    if let Some(cert) = eliminate_by_psi_with(space, opts.policy) {
        out.push(Elimination::PsiCondition(cert));
    }
    Ok(out)
}

pub fn classify_type(space: &SpaceType, opts: ClassifyOptions) -> Result<TypeReport> {
    let mut elims = all_eliminations(space, opts)?;
    let case = if space.p() == 3 && space.rank() == 3 { case_split(space).ok().flatten() } else { None };
    let verdict = if quasi_regular(space) {
        Verdict::QuasiRegular
    } else if elims.is_empty() {
        Verdict::Survives
    } else {
        Verdict::Eliminated(elims.remove(0))
    };
    Ok(TypeReport { space: space.clone(), verdict, case, corroborating: elims })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PsiClaim {
    #[serde(rename = "type")]
    pub space: SpaceType,
    pub certified: bool,
    pub window: Option<Window>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Theorem12Report {
    pub cap: u32,
    pub policy: WindowPolicy,
    pub candidates: usize,
    pub types: Vec<TypeReport>,
    pub survivors: Vec<SpaceType>,
    pub quasi_regular: Vec<SpaceType>,
    pub steenrod_eliminated: Vec<SpaceType>,
    pub psi_eliminated: Vec<SpaceType>,
    pub other_eliminated: Vec<SpaceType>,
    pub psi_claimed: Vec<PsiClaim>,
    /// Claimed ψ-eliminations with no certifying window; kept apart from
    /// `discrepancies`.
    pub psi_uncertified: Vec<SpaceType>,
    pub discrepancies: Vec<String>,
    pub matches_reference: bool,
}

fn reference_types<const N: usize>(ctx: PrimeContext, list: &[[u32; N]]) -> Vec<SpaceType> {
    list.iter().map(|h| SpaceType::new(ctx, h.to_vec()).expect("valid reference type")).collect()
}

fn sorted(mut v: Vec<SpaceType>) -> Vec<SpaceType> {
    v.sort_by(|a, b| a.halves().cmp(b.halves()));
    v
}

fn show(v: &[SpaceType]) -> String {
    v.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ")
}

/// Builds the partition from per-type reports (in any order).
pub fn assemble_theorem_1_2(lists: &PropositionLists, opts: ClassifyOptions, mut types: Vec<TypeReport>) -> Theorem12Report {
    let ctx = PrimeContext::new(3).expect("3 is prime");
    types.sort_by(|a, b| a.space.halves().cmp(b.space.halves()));
    let mut discrepancies = Vec::new();

    for case in 1..=4u8 {
        let got = lists.case(case);
        let want = reference_types(ctx, reference::case_list(case));
        if got != want.as_slice() {
            discrepancies.push(format!(
                "case {case} list differs from reference: computed [{}], expected [{}]",
                show(got),
                show(&want)
            ));
        }
    }

    let claimed = reference_types(ctx, &reference::PSI_CLAIMED);
    let pick = |f: &dyn Fn(&TypeReport) -> bool| -> Vec<SpaceType> {
        types.iter().filter(|r| f(r)).map(|r| r.space.clone()).collect()
    };
    let stage_is = |r: &TypeReport, s: Stage| r.verdict.elimination().map(|e| e.stage()) == Some(s);

    let psi_uncertified = pick(&|r| r.verdict == Verdict::Survives && claimed.contains(&r.space));
    let survivors = pick(&|r| r.verdict == Verdict::Survives && !claimed.contains(&r.space));
    let quasi = pick(&|r| r.verdict == Verdict::QuasiRegular);
    let steenrod = pick(&|r| stage_is(r, Stage::SteenrodRule));
    let psi = pick(&|r| stage_is(r, Stage::PsiCondition));
    let other = pick(&|r| {
        matches!(r.verdict.elimination().map(|e| e.stage()), Some(s) if s < Stage::SteenrodRule)
    });

    let psi_claimed: Vec<PsiClaim> = claimed
        .iter()
        .map(|t| {
            let cert = types.iter().find(|r| r.space == *t).and_then(|r| r.psi_certificate());
            PsiClaim { space: t.clone(), certified: cert.is_some(), window: cert.map(|c| c.window) }
        })
        .collect();

    let compare = |name: &str, got: &[SpaceType], list: &[[u32; 3]], discrepancies: &mut Vec<String>| {
        let want = sorted(reference_types(ctx, list));
        if got != want.as_slice() {
            let extra: Vec<SpaceType> = got.iter().filter(|t| !want.contains(t)).cloned().collect();
            let missing: Vec<SpaceType> = want.iter().filter(|t| !got.contains(t)).cloned().collect();
            discrepancies.push(format!(
                "{name}: computed {} types, expected {}; extra [{}], missing [{}]",
                got.len(),
                want.len(),
                show(&extra),
                show(&missing)
            ));
        }
    };
    compare("survivors", &survivors, &reference::SURVIVORS, &mut discrepancies);
    compare("quasi-regular", &quasi, &reference::QUASI_REGULAR, &mut discrepancies);
    compare("Steenrod-eliminated", &steenrod, &reference::STEENROD_ELIMINATED, &mut discrepancies);
    let mut psi_side = psi.clone();
    psi_side.extend(psi_uncertified.iter().cloned());
    compare("psi-claimed", &sorted(psi_side), &reference::PSI_CLAIMED, &mut discrepancies);
    for r in &types {
        let named = reference::SURVIVORS.iter().any(|h| r.space.halves() == h);
        if named {
            if let Some(e) = r.verdict.elimination() {
                discrepancies.push(format!("{}: listed survivor eliminated by {}", r.space, e.summary()));
            }
        }
    }
    if !other.is_empty() {
        discrepancies.push(format!("eliminated by early stages after the case split: [{}]", show(&other)));
    }

    Theorem12Report {
        cap: lists.cap,
        policy: opts.policy,
        candidates: types.len(),
        matches_reference: discrepancies.is_empty(),
        types,
        survivors,
        quasi_regular: quasi,
        steenrod_eliminated: steenrod,
        psi_eliminated: psi,
        other_eliminated: other,
        psi_claimed,
        psi_uncertified,
        discrepancies,
    }
}

pub fn classify_theorem_1_2(cap: u32, opts: ClassifyOptions) -> Result<Theorem12Report> {
    let lists = proposition_lists(cap)?;
    let types = lists.all().iter().map(|t| classify_type(t, opts)).collect::<Result<Vec<_>>>()?;
    Ok(assemble_theorem_1_2(&lists, opts, types))
}

/// Rank-2 enumeration under the arithmetic filters only.
pub fn rank2_candidates(cap: u32) -> Result<Vec<SpaceType>> {
    let ctx = PrimeContext::new(3)?;
    Ok(enumerate_types(ctx, 2, cap)
        .into_iter()
        .filter(super::propositions::passes_generic_filters)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank2_regression() {
        let kept = rank2_candidates(40).unwrap();
        for h in reference::RANK2 {
            assert!(kept.iter().any(|t| t.halves() == h), "{h:?}");
        }
    }

    #[test]
    fn gcd_failure_is_replayable() {
        let t = SpaceType::new(PrimeContext::new(3).unwrap(), vec![4, 8, 12]).unwrap();
        let r = classify_type(&t, ClassifyOptions::default()).unwrap();
        let e = r.verdict.elimination().unwrap();
        assert_eq!(e.stage(), Stage::GcdTest);
        assert!(e.replay(&t));
        assert!(r.corroborating.iter().all(|c| c.replay(&t)));
    }
}
