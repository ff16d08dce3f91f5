use serde::Serialize;

use super::filters::{case_split, hemmi_forced, lemma_4_3, wilkerson_filter_1, wilkerson_filter_2, CaseTag};
use crate::error::{Error, Result};
use crate::padic::PrimeContext;
use crate::psimod::{theorem_1_1_test, SpaceType};
use crate::steenrod::{degree_realizable, verify_relation_42, verify_relation_43};

/// An elimination by the case-specific degree arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArithmeticStep {
    pub id: String,
    pub case: u8,
    pub detail: String,
}

impl ArithmeticStep {
    pub fn replay(&self, space: &SpaceType) -> bool {
        matches!(proposition_step(space), Ok(Some(s)) if s == *self)
    }
}

fn step(id: &str, case: u8, detail: String) -> Option<ArithmeticStep> {
    Some(ArithmeticStep { id: id.into(), case, detail })
}

fn forced(space: &SpaceType, a: u32, n: u32, source: u32) -> Result<()> {
    let h = hemmi_forced(space, a, n)?;
    if !h.forced || h.source_half != source {
        return Err(Error::RulePremise(format!(
            "forced operation P^{} from {source} expected on {space} (a = {a}, n = {n}) but not available",
            h.op
        )));
    }
    Ok(())
}

fn case1(r: u32, n: u32, m: u32) -> Result<Option<ArithmeticStep>> {
    for sub in 1..=4 {
        let l = lemma_4_3(sub, r, n, m)?;
        if l.applicable && !l.inequality_holds {
            return Ok(step(&format!("case1-inequality-{sub}"), 1, l.detail));
        }
    }
    Ok(None)
}

fn case2(space: &SpaceType, r: u32, n: u32, m: u32) -> Result<Option<ArithmeticStep>> {
    if r + 2 == n && m < 2 * n - 2 && n % 3 == 2 {
        let k = (n - 2) / 3;
        forced(space, 0, n, r)?;
        verify_relation_42(k)?;
        let d = 3 * n - 8;
        if !degree_realizable(space, d) {
            return Ok(step(
                "case2-relation-p1p3",
                2,
                format!("P^1(x{r}) != 0 and P^1 P^3 P^{} force P^{}(x{r}) != 0, but half-degree {d} carries no monomial", 3 * k - 1, 3 * k - 1),
            ));
        }
    }
    Ok(None)
}

fn case3(space: &SpaceType, r: u32, n: u32, m: u32) -> Result<Option<ArithmeticStep>> {
    forced(space, 0, m, n)?;
    match m % 3 {
        1 => {
            if r + 2 == n && hemmi_forced(space, 0, n)?.forced {
                let k = r / 3;
                verify_relation_42(k)?;
                let d = 3 * r - 2;
                if !degree_realizable(space, d) {
                    return Ok(step(
                        "case3-relation-p1p3-bottom",
                        3,
                        format!("P^{}(x{r}) != 0 needs a monomial in half-degree {d}", r - 1),
                    ));
                }
            }
        }
        2 => {
            let k = n / 3;
            verify_relation_42(k)?;
            let d = 3 * n - 2;
            if !degree_realizable(space, d) {
                return Ok(step(
                    "case3-relation-p1p3-middle",
                    3,
                    format!("P^{}(x{n}) != 0 needs a monomial in half-degree {d}", n - 1),
                ));
            }
            if r.is_multiple_of(3) && n == r + 6 && m == r + 8 {
                let l = r / 3;
                if l % 3 != 1 {
                    forced(space, 1, l + 2, r)?;
                    verify_relation_43(l)?;
                    let d = 3 * r - 2;
                    if !degree_realizable(space, d) {
                        return Ok(step(
                            "case3-relation-p9",
                            3,
                            format!("P^3(x{r}) != 0 and P^9 P^{} force P^{}(x{r}) != 0, but half-degree {d} carries no monomial", 3 * l - 1, 3 * l - 1),
                        ));
                    }
                } else if m > 44 {
                    return Ok(step("case3-bound-44", 3, format!("m = {m} exceeds 44")));
                }
            }
        }
        _ => unreachable!("case 3 has 3 not dividing m"),
    }
    Ok(None)
}

/// The case-specific step that rules a rank-3 type out, if any. Types in
/// no case yield `None`.
pub fn proposition_step(space: &SpaceType) -> Result<Option<ArithmeticStep>> {
    let Some(tag) = case_split(space)? else {
        return Ok(None);
    };
    let [r, n, m] = [space.halves()[0], space.halves()[1], space.halves()[2]];
    match tag {
        CaseTag::Case1 { .. } => case1(r, n, m),
        CaseTag::Case2 { .. } => case2(space, r, n, m),
        CaseTag::Case3 { .. } => case3(space, r, n, m),
        CaseTag::Case4 { .. } => Ok(None),
    }
}

/// Passes the gcd test and both Wilkerson filters.
pub fn passes_generic_filters(space: &SpaceType) -> bool {
    theorem_1_1_test(space).passed() && wilkerson_filter_1(space).passed && wilkerson_filter_2(space).passed
}

/// Every strictly increasing type `(m_1 < ... < m_rank)` with `2 <= m_1` and
/// `m_rank <= cap`.
pub fn enumerate_types(ctx: PrimeContext, rank: usize, cap: u32) -> Vec<SpaceType> {
    fn rec(ctx: PrimeContext, rank: usize, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<SpaceType>) {
        if cur.len() == rank {
            out.push(SpaceType::new(ctx, cur.clone()).expect("valid type"));
            return;
        }
        let start = cur.last().map_or(2, |&x| x + 1);
        for h in start..=cap {
            cur.push(h);
            rec(ctx, rank, cap, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if rank > 0 {
        rec(ctx, rank, cap, &mut Vec::new(), &mut out);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseEntry {
    #[serde(rename = "type")]
    pub space: SpaceType,
    pub case: CaseTag,
    pub step: Option<ArithmeticStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropositionLists {
    pub cap: u32,
    /// Candidates surviving each case, index 0 for case 1.
    pub lists: [Vec<SpaceType>; 4],
    /// Every type that reached the case split, with its fate.
    pub entries: Vec<CaseEntry>,
}

impl PropositionLists {
    pub fn case(&self, case: u8) -> &[SpaceType] {
        &self.lists[(case - 1) as usize]
    }

    pub fn all(&self) -> Vec<SpaceType> {
        let mut out: Vec<SpaceType> = self.lists.iter().flatten().cloned().collect();
        out.sort_by(|a, b| a.halves().cmp(b.halves()));
        out
    }
}

pub fn proposition_lists(cap: u32) -> Result<PropositionLists> {
    let ctx = PrimeContext::new(3)?;
    let mut lists: [Vec<SpaceType>; 4] = Default::default();
    let mut entries = Vec::new();
    for space in enumerate_types(ctx, 3, cap) {
        if !passes_generic_filters(&space) {
            continue;
        }
        let Some(case) = case_split(&space)? else { continue };
        let step = proposition_step(&space)?;
        if step.is_none() {
            lists[(case.number() - 1) as usize].push(space.clone());
        }
        entries.push(CaseEntry { space, case, step });
    }
    Ok(PropositionLists { cap, lists, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::reference;

    #[test]
    fn lists_match_reference() {
        let lists = proposition_lists(60).unwrap();
        for case in 1..=4u8 {
            let got: Vec<Vec<u32>> = lists.case(case).iter().map(|t| t.halves().to_vec()).collect();
            let want: Vec<Vec<u32>> = reference::case_list(case).iter().map(|t| t.to_vec()).collect();
            assert_eq!(got, want, "case {case}");
        }
        assert_eq!(lists.all().len(), 27);
    }

    #[test]
    fn enumeration_counts() {
        let ctx = PrimeContext::new(3).unwrap();
        assert_eq!(enumerate_types(ctx, 3, 6).len(), 10);
        assert_eq!(enumerate_types(ctx, 2, 5).len(), 6);
    }
}
