use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::binom_mod_p;
use crate::error::{Error, Result};

/// A coefficient times a word `P^{i_1} ... P^{i_s}` in reduced powers.
/// `P^0` is the identity and never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PowerWord {
    pub exponents: Vec<u32>,
    pub coeff: u32,
}

impl PowerWord {
    pub fn new(exponents: impl IntoIterator<Item = u32>, coeff: u32) -> Self {
        PowerWord { exponents: exponents.into_iter().filter(|&e| e != 0).collect(), coeff }
    }

    pub fn single(exponents: &[u32]) -> Self {
        PowerWord::new(exponents.iter().copied(), 1)
    }

    pub fn is_admissible(&self, p: u32) -> bool {
        self.exponents.windows(2).all(|w| w[0] >= p * w[1])
    }

    /// Sum of exponents; `P^i` raises half-degree by `i (p - 1)`.
    pub fn weight(&self) -> u32 {
        self.exponents.iter().sum()
    }
}

/// Display order: shorter words first, then larger leading exponents.
pub fn sort_words(words: &mut [PowerWord]) {
    words.sort_by_key(|w| (w.exponents.len(), Reverse(w.exponents.clone())));
}

/// Adem relation for `P^a P^b` with `a < p b`:
/// `sum_t (-1)^{a+t} C((p-1)(b-t) - 1, a - p t) P^{a+b-t} P^t`.
pub fn adem_expand(a: u32, b: u32, p: u32) -> Result<Vec<PowerWord>> {
    if a == 0 || b == 0 || a >= p * b {
        return Err(Error::AlreadyAdmissible { a, b, p });
    }
    let mut out = Vec::new();
    for t in 0..=a / p {
        let top = (p - 1) * (b - t) - 1;
        let c = binom_mod_p(top as u64, (a - p * t) as u64, p as u64) as u32;
        let c = if (a + t) % 2 == 1 { (p - c) % p } else { c };
        if c != 0 {
            out.push(PowerWord::new([a + b - t, t], c));
        }
    }
    sort_words(&mut out);
    Ok(out)
}

fn first_inadmissible(exps: &[u32], p: u32) -> Option<usize> {
    exps.windows(2).position(|w| w[0] < p * w[1])
}

/// Rewrites a word into the admissible basis by repeated Adem rewriting.
pub fn normalize(word: &PowerWord, p: u32) -> Vec<PowerWord> {
    normalize_sum(std::slice::from_ref(word), p)
}

pub fn normalize_sum(words: &[PowerWord], p: u32) -> Vec<PowerWord> {
    let mut acc: BTreeMap<Vec<u32>, u32> = BTreeMap::new();
    let mut stack: Vec<(Vec<u32>, u32)> = words
        .iter()
        .filter(|w| w.coeff % p != 0)
        .map(|w| (w.exponents.clone(), w.coeff % p))
        .collect();
    while let Some((exps, c)) = stack.pop() {
        match first_inadmissible(&exps, p) {
            None => {
                let slot = acc.entry(exps).or_insert(0);
                *slot = (*slot + c) % p;
            }
            Some(j) => {
                let terms = adem_expand(exps[j], exps[j + 1], p)
                    .expect("first_inadmissible returned an admissible pair");
                for term in terms {
                    let mut next = exps[..j].to_vec();
                    next.extend_from_slice(&term.exponents);
                    next.extend_from_slice(&exps[j + 2..]);
                    stack.push((next, c * term.coeff % p));
                }
            }
        }
    }
    let mut out: Vec<PowerWord> = acc
        .into_iter()
        .filter(|&(_, c)| c != 0)
        .map(|(exponents, coeff)| PowerWord { exponents, coeff })
        .collect();
    sort_words(&mut out);
    out
}

fn coefficient_of(words: &[PowerWord], exponents: &[u32]) -> u32 {
    words.iter().find(|w| w.exponents == exponents).map_or(0, |w| w.coeff)
}

/// `P^1 P^3 P^{3k-1} = eps P^1 P^{3k+2} + 2 P^{3k+2} P^1` at `p = 3`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relation42 {
    pub k: u32,
    pub epsilon: u32,
    pub coeff_second: u32,
    pub normalized: Vec<PowerWord>,
}

pub fn verify_relation_42(k: u32) -> Result<Relation42> {
    const P: u32 = 3;
    if k == 0 {
        return Err(Error::OutOfRange("relation (P^1 P^3 P^{3k-1}) needs k >= 1".into()));
    }
    let inner = adem_expand(3, 3 * k - 1, P)?;
    let allowed = [vec![3 * k + 2], vec![3 * k + 1, 1]];
    if let Some(w) = inner.iter().find(|w| !allowed.contains(&w.exponents)) {
        return Err(Error::ShapeMismatch(format!("P^3 P^{} produced {:?}", 3 * k - 1, w.exponents)));
    }
    let epsilon = coefficient_of(&inner, &[3 * k + 2]);

    // Displayed route: only P^1 P^{3k+1} is rewritten, P^1 P^{3k+2} is kept.
    let tail = coefficient_of(&inner, &[3 * k + 1, 1]);
    let lead = adem_expand(1, 3 * k + 1, P)?;
    if lead.iter().any(|w| w.exponents != [3 * k + 2]) {
        return Err(Error::ShapeMismatch(format!("P^1 P^{} is not a multiple of P^{}", 3 * k + 1, 3 * k + 2)));
    }
    let displayed = tail * coefficient_of(&lead, &[3 * k + 2]) % P;

    // Full route: normalize both sides and compare.
    let normalized = normalize(&PowerWord::single(&[1, 3, 3 * k - 1]), P);
    let coeff_second = coefficient_of(&normalized, &[3 * k + 2, 1]);
    let rhs = normalize_sum(
        &[PowerWord::new([1, 3 * k + 2], epsilon), PowerWord::new([3 * k + 2, 1], displayed)],
        P,
    );
    if rhs != normalized {
        return Err(Error::ShapeMismatch(format!(
            "k = {k}: normalized left side {normalized:?} differs from right side {rhs:?}"
        )));
    }
    if coeff_second != 2 || displayed != 2 {
        return Err(Error::ShapeMismatch(format!(
            "k = {k}: coefficient of P^{} P^1 is {coeff_second} (displayed route {displayed}), expected 2",
            3 * k + 2
        )));
    }
    Ok(Relation42 { k, epsilon, coeff_second, normalized })
}

/// `P^9 P^{3l-1} = e1 P^{3l+8} + e2 P^{3l+7} P^1 + e3 P^{3l+6} P^2 + P^{3l+5} P^3`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relation43 {
    pub l: u32,
    pub eps1: u32,
    pub eps2: u32,
    pub eps3: u32,
    pub trailing: u32,
}

pub fn verify_relation_43(l: u32) -> Result<Relation43> {
    const P: u32 = 3;
    if l < 2 {
        return Err(Error::OutOfRange("relation (P^9 P^{3l-1}) needs l >= 2".into()));
    }
    let terms = adem_expand(9, 3 * l - 1, P)?;
    let shape = [
        vec![3 * l + 8],
        vec![3 * l + 7, 1],
        vec![3 * l + 6, 2],
        vec![3 * l + 5, 3],
    ];
    if let Some(w) = terms.iter().find(|w| !shape.contains(&w.exponents)) {
        return Err(Error::ShapeMismatch(format!("P^9 P^{} produced {:?}", 3 * l - 1, w.exponents)));
    }
    if terms.iter().any(|w| !w.is_admissible(P)) {
        return Err(Error::ShapeMismatch("expansion is not admissible".into()));
    }
    let trailing = coefficient_of(&terms, &shape[3]);
    if trailing != 1 {
        return Err(Error::ShapeMismatch(format!(
            "l = {l}: coefficient of P^{} P^3 is {trailing}, expected 1",
            3 * l + 5
        )));
    }
    Ok(Relation43 {
        l,
        eps1: coefficient_of(&terms, &shape[0]),
        eps2: coefficient_of(&terms, &shape[1]),
        eps3: coefficient_of(&terms, &shape[2]),
        trailing,
    })
}

/// Checks an Adem expansion against an exact expected term list, given as
/// `(exponents, signed coefficient)` pairs.
pub fn verify_adem_instance(a: u32, b: u32, p: u32, expected: &[(&[u32], i64)]) -> Result<Vec<PowerWord>> {
    let got = adem_expand(a, b, p)?;
    let mut want: Vec<PowerWord> = expected
        .iter()
        .map(|(e, c)| PowerWord::new(e.iter().copied(), c.rem_euclid(p as i64) as u32))
        .filter(|w| w.coeff != 0)
        .collect();
    sort_words(&mut want);
    if got != want {
        return Err(Error::ShapeMismatch(format!(
            "P^{a} P^{b}: expected {}, computed {}",
            format_sum(&want, p),
            format_sum(&got, p)
        )));
    }
    Ok(got)
}

pub fn format_word(exponents: &[u32]) -> String {
    if exponents.is_empty() {
        return "1".into();
    }
    exponents.iter().map(|e| format!("P^{e}")).collect::<Vec<_>>().join(" ")
}

/// Renders a sum like `- P^10 + P^9 P^1`; the residue `p - 1` prints as a
/// minus sign.
pub fn format_sum(words: &[PowerWord], p: u32) -> String {
    if words.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, w) in words.iter().enumerate() {
        let negative = w.coeff == p - 1;
        match (i, negative) {
            (0, true) => out.push_str("- "),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        if !negative && w.coeff != 1 {
            let _ = write!(out, "{} ", w.coeff);
        }
        out.push_str(&format_word(&w.exponents));
    }
    out
}

/// `P^a P^b = ...` as printed by the CLI.
pub fn format_adem(a: u32, b: u32, p: u32) -> Result<String> {
    let terms = adem_expand(a, b, p)?;
    Ok(format!("{} = {}", format_word(&[a, b]), format_sum(&terms, p)))
}
