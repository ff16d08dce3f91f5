use std::fmt;

use serde::Serialize;

use super::filters::{hemmi_forced, top_operation_lemma};
use crate::error::{Error, Result};
use crate::psimod::SpaceType;
use crate::steenrod::{format_sum, format_word, normalize, Derivation, Monomial, PowerWord, SolveOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum RuleId {
    E1,
    E2,
    E3,
    E4,
    E5,
    E6,
    E7,
    E8,
}

impl RuleId {
    pub const ALL: [RuleId; 8] =
        [RuleId::E1, RuleId::E2, RuleId::E3, RuleId::E4, RuleId::E5, RuleId::E6, RuleId::E7, RuleId::E8];

    pub fn target(self) -> [u32; 3] {
        match self {
            RuleId::E1 => [4, 6, 8],
            RuleId::E2 => [3, 5, 9],
            RuleId::E3 => [8, 12, 14],
            RuleId::E4 => [10, 12, 18],
            RuleId::E5 => [12, 18, 20],
            RuleId::E6 => [2, 12, 18],
            RuleId::E7 => [7, 12, 18],
            RuleId::E8 => [2, 3, 6],
        }
    }

    pub fn for_type(space: &SpaceType) -> Option<RuleId> {
        if space.p() != 3 {
            return None;
        }
        RuleId::ALL.into_iter().find(|r| space.halves() == r.target())
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Replayable record of one endgame argument.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleTrace {
    pub rule: RuleId,
    #[serde(rename = "type")]
    pub space: SpaceType,
    pub steps: Vec<String>,
    /// The Adem rewritings used, as `word = admissible sum`.
    pub adem_certificates: Vec<String>,
    pub unknowns: usize,
    pub constraints: usize,
    pub unsatisfiable: bool,
}

impl RuleTrace {
    /// Re-derives the argument from scratch and compares.
    pub fn replay(&self) -> bool {
        matches!(endgame_rules(&self.space), Ok(Some(t)) if t == *self)
    }
}

struct Script {
    d: Derivation,
    certificates: Vec<String>,
}

impl Script {
    fn new(space: &SpaceType) -> Self {
        Script { d: Derivation::new(space), certificates: Vec::new() }
    }

    fn gen(&self, half: u32) -> Result<usize> {
        self.d
            .generator_index(half)
            .ok_or_else(|| Error::RulePremise(format!("no generator of half-degree {half}")))
    }

    /// `P^{3^a}(x_source)` has a nonzero `x_target` coefficient.
    fn hemmi(&mut self, a: u32, n: u32) -> Result<()> {
        let fact = hemmi_forced(self.d.space(), a, n)?;
        if !fact.forced {
            return Err(Error::RulePremise(format!(
                "forced-operation predicate does not apply for a = {a}, n = {n} on {}",
                self.d.space()
            )));
        }
        let src = self.gen(fact.source_half)?;
        let dst = self.gen(fact.target_half)?;
        let origin = format!("forced operation (a = {a}, n = {n})");
        self.d.require_coefficient_nonzero(src, fact.op, &Monomial::generator(dst), &origin);
        Ok(())
    }

    fn relation(&mut self, word: &[u32], half: u32) -> Result<()> {
        let g = self.gen(half)?;
        let p = self.d.p();
        let cert = format!("{} = {}", format_word(word), format_sum(&normalize(&PowerWord::single(word), p), p));
        if !self.certificates.contains(&cert) {
            self.certificates.push(cert);
        }
        self.d.impose_relation(word, g);
        Ok(())
    }

    fn finish(self, rule: RuleId) -> Result<RuleTrace> {
        let outcome = self.d.solve();
        let unsatisfiable = outcome.is_unsatisfiable();
        let mut steps = self.d.trace().to_vec();
        match &outcome {
            SolveOutcome::Unsatisfiable => steps.push("no assignment over F_3 satisfies the constraints".into()),
            SolveOutcome::Satisfiable(w) => {
                let shown: Vec<String> = w.iter().map(|(n, v)| format!("{n} = {v}")).collect();
                steps.push(format!("satisfiable: {}", shown.join(", ")));
            }
        }
        let trace = RuleTrace {
            rule,
            space: self.d.space().clone(),
            steps,
            adem_certificates: self.certificates,
            unknowns: self.d.unknowns().len(),
            constraints: self.d.constraints().len(),
            unsatisfiable,
        };
        if !unsatisfiable {
            return Err(Error::RulePremise(format!(
                "rule {rule} on {} left a satisfiable system",
                trace.space
            )));
        }
        Ok(trace)
    }
}

/// Runs the scripted argument for a rule target. `Ok(None)` for any other
/// type; an error if the argument does not close.
pub fn endgame_rules(space: &SpaceType) -> Result<Option<RuleTrace>> {
    let Some(rule) = RuleId::for_type(space) else {
        return Ok(None);
    };
    let mut s = Script::new(space);
    match rule {
        RuleId::E1 => {
            // P^1(x6) hits x8; P^1 P^3 = P^4 on x4 against the top power.
            s.hemmi(0, 8)?;
            s.relation(&[1, 3], 4)?;
        }
        RuleId::E2 => {
            s.hemmi(0, 5)?;
            s.relation(&[1, 3, 2], 3)?;
        }
        RuleId::E3 => {
            s.hemmi(0, 14)?;
            s.relation(&[1, 1, 6], 8)?;
            s.relation(&[1, 3, 11], 12)?;
            s.relation(&[1, 10], 12)?;
            s.relation(&[1, 9], 12)?;
        }
        RuleId::E4 => {
            s.relation(&[1, 9], 10)?;
            s.relation(&[3, 7], 10)?;
        }
        RuleId::E5 => {
            s.hemmi(0, 20)?;
            s.relation(&[1, 3, 17], 18)?;
            s.relation(&[3, 9], 12)?;
        }
        RuleId::E6 | RuleId::E7 => {
            let ops = top_operation_lemma(space)?;
            let [only] = ops.as_slice() else {
                return Err(Error::RulePremise(format!("expected one top operation on {space}, found {ops:?}")));
            };
            let src = s.gen(only.source_half)?;
            let dst = s.gen(space.top())?;
            s.d.require_coefficient_nonzero(src, only.op, &Monomial::generator(dst), "top operation");
            s.relation(&[3, 9], only.source_half)?;
        }
        RuleId::E8 => {
            let ops = top_operation_lemma(space)?;
            if !ops.is_empty() {
                return Err(Error::RulePremise(format!("{space} has top operations {ops:?}")));
            }
            s.d.note(format!(
                "no (m_k, i) with m_k + 2i = {} and 1 <= i < m_k: nothing can hit the top generator",
                space.top()
            ));
            s.d.require_nonzero(crate::steenrod::Poly::zero(), "top operation");
        }
    }
    s.finish(rule).map(Some)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::PrimeContext;

    fn t(halves: &[u32]) -> SpaceType {
        SpaceType::new(PrimeContext::new(3).unwrap(), halves.to_vec()).unwrap()
    }

    #[test]
    fn every_rule_closes() {
        for rule in RuleId::ALL {
            let trace = endgame_rules(&t(&rule.target())).unwrap().unwrap();
            assert!(trace.unsatisfiable, "{rule}");
            assert!(trace.replay());
        }
    }

    #[test]
    fn non_targets_are_untouched() {
        assert!(endgame_rules(&t(&[2, 4, 6])).unwrap().is_none());
        assert!(endgame_rules(&t(&[6, 8, 12])).unwrap().is_none());
    }

    #[test]
    fn realizable_type_stays_consistent() {
        // (2,4,6) is the type of Sp(3); no relation may contradict it.
        let space = t(&[2, 4, 6]);
        let mut d = Derivation::new(&space);
        for half in [2, 4, 6] {
            let g = d.generator_index(half).unwrap();
            for a in 1..=4u32 {
                for b in 1..=4u32 {
                    if a < 3 * b && a + b <= 6 {
                        d.impose_relation(&[a, b], g);
                    }
                }
            }
        }
        assert!(d.constraints().len() > 10);
        assert!(!d.solve().is_unsatisfiable());
    }
}
