use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::Serialize;

use super::adem::{format_sum, format_word, normalize, PowerWord};
use super::poly::Poly;
use crate::error::{Error, Result};
use crate::psimod::SpaceType;

/// Monomial of the truncated algebra, stored as sorted generator indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<usize>);

impl Monomial {
    pub fn generator(g: usize) -> Self {
        Monomial(vec![g])
    }

    pub fn from_indices(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        Monomial(indices)
    }

    pub fn factors(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn half_degree(&self, space: &SpaceType) -> u32 {
        self.0.iter().map(|&g| space.halves()[g]).sum()
    }

    fn times(&self, other: &Monomial) -> Monomial {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Monomial::from_indices(v)
    }
}

/// Formal sum of monomials with polynomial coefficients in the unknowns of a
/// [`Derivation`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SymbolicElement {
    terms: BTreeMap<Monomial, Poly>,
}

impl SymbolicElement {
    pub fn zero() -> Self {
        SymbolicElement::default()
    }

    pub fn monomial(m: Monomial, coeff: Poly) -> Self {
        let mut out = SymbolicElement::zero();
        if !coeff.is_zero() {
            out.terms.insert(m, coeff);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Poly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Poly {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Common half-degree of the monomials, `None` for zero.
    pub fn half_degree(&self, space: &SpaceType) -> Option<u32> {
        let degrees: BTreeSet<u32> = self.terms.keys().map(|m| m.half_degree(space)).collect();
        assert!(degrees.len() <= 1, "element mixes half-degrees {degrees:?}");
        degrees.into_iter().next()
    }

    fn add_term(&mut self, m: Monomial, c: &Poly, p: u32) {
        let sum = self.coefficient(&m).add(c, p);
        if sum.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, sum);
        }
    }

    pub fn add(&self, other: &SymbolicElement, p: u32) -> SymbolicElement {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c, p);
        }
        out
    }

    pub fn scale(&self, c: &Poly, p: u32) -> SymbolicElement {
        let mut out = SymbolicElement::zero();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), &v.mul(c, p), p);
        }
        out
    }

    pub fn sub(&self, other: &SymbolicElement, p: u32) -> SymbolicElement {
        self.add(&other.scale(&Poly::constant(p - 1, p), p), p)
    }

    /// Product in the algebra truncated above word length `p`.
    pub fn mul(&self, other: &SymbolicElement, p: u32) -> SymbolicElement {
        let mut out = SymbolicElement::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if ma.len() + mb.len() > p as usize {
                    continue;
                }
                out.add_term(ma.times(mb), &ca.mul(cb, p), p);
            }
        }
        out
    }
}

/// An unknown coefficient: the coefficient of `monomial` in `P^op(x_generator)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Unknown {
    pub name: String,
    pub generator: usize,
    pub op: u32,
    #[serde(skip)]
    pub monomial: Monomial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConstraintKind {
    Zero,
    NonZero,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub kind: ConstraintKind,
    pub poly: Poly,
    pub origin: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SolveOutcome {
    /// A witness assignment of every unknown that occurs in a constraint.
    Satisfiable(Vec<(String, u32)>),
    Unsatisfiable,
}

impl SolveOutcome {
    pub fn is_unsatisfiable(&self) -> bool {
        matches!(self, SolveOutcome::Unsatisfiable)
    }
}

/// Registry of unknowns and constraints for one argument about the action of
/// reduced powers on `F_p[x_1, ..., x_r] / (height p + 1)`.
#[derive(Debug, Clone)]
pub struct Derivation {
    space: SpaceType,
    p: u32,
    unknowns: Vec<Unknown>,
    powers: HashMap<(usize, u32), SymbolicElement>,
    constraints: Vec<Constraint>,
    trace: Vec<String>,
}

impl Derivation {
    pub fn new(space: &SpaceType) -> Self {
        Derivation {
            space: space.clone(),
            p: space.p(),
            unknowns: Vec::new(),
            powers: HashMap::new(),
            constraints: Vec::new(),
            trace: Vec::new(),
        }
    }

    pub fn space(&self) -> &SpaceType {
        &self.space
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn unknowns(&self) -> &[Unknown] {
        &self.unknowns
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn trace(&self) -> &[String] {
        &self.trace
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.trace.push(line.into());
    }

    /// First generator with the given half-degree.
    pub fn generator_index(&self, half: u32) -> Option<usize> {
        self.space.halves().iter().position(|&h| h == half)
    }

    pub fn generator_name(&self, g: usize) -> String {
        let halves = self.space.halves();
        let h = halves[g];
        let first = self.generator_index(h).expect("generator exists");
        if self.space.generator_count(h) == 1 {
            format!("x{h}")
        } else {
            format!("x{h}_{}", g - first + 1)
        }
    }

    pub fn monomial_name(&self, m: &Monomial) -> String {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for &g in m.factors() {
            *counts.entry(g).or_default() += 1;
        }
        let parts: Vec<String> = counts
            .into_iter()
            .map(|(g, e)| if e == 1 { self.generator_name(g) } else { format!("{}^{e}", self.generator_name(g)) })
            .collect();
        parts.join(" ")
    }

    pub fn render(&self, e: &SymbolicElement) -> String {
        if e.is_zero() {
            return "0".into();
        }
        let names: Vec<String> = self.unknowns.iter().map(|u| u.name.clone()).collect();
        let parts: Vec<String> = e
            .terms()
            .map(|(m, c)| {
                let mono = self.monomial_name(m);
                match c.as_constant() {
                    Some(1) => mono,
                    Some(v) => format!("{v} {mono}"),
                    None => format!("({}) {mono}", c.render(&names, self.p)),
                }
            })
            .collect();
        parts.join(" + ")
    }

    /// Monomials of word length `1..=p` with the given half-degree.
    pub fn basis(&self, half: u32) -> Vec<Monomial> {
        fn rec(halves: &[u32], start: usize, left: u32, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<Monomial>) {
            if left == 0 {
                if !cur.is_empty() {
                    out.push(Monomial(cur.clone()));
                }
                return;
            }
            if slots == 0 {
                return;
            }
            for g in start..halves.len() {
                if halves[g] <= left {
                    cur.push(g);
                    rec(halves, g, left - halves[g], slots - 1, cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        rec(self.space.halves(), 0, half, self.p as usize, &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    pub fn generator(&self, g: usize) -> SymbolicElement {
        SymbolicElement::monomial(Monomial::generator(g), Poly::constant(1, self.p))
    }

    /// Fixes `P^i(x_g)` before it is first used.
    pub fn fix_power(&mut self, g: usize, i: u32, value: SymbolicElement) -> Result<()> {
        if self.powers.contains_key(&(g, i)) {
            return Err(Error::RulePremise(format!("P^{i}({}) is already determined", self.generator_name(g))));
        }
        let line = format!("given P^{i}({}) = {}", self.generator_name(g), self.render(&value));
        self.trace.push(line);
        self.powers.insert((g, i), value);
        Ok(())
    }

    /// `P^i(x_g)` under the unstable axioms, with fresh unknowns where the
    /// axioms leave it undetermined.
    pub fn power_on_generator(&mut self, g: usize, i: u32) -> SymbolicElement {
        if let Some(e) = self.powers.get(&(g, i)) {
            return e.clone();
        }
        let half = self.space.halves()[g];
        let value = if i == 0 {
            self.generator(g)
        } else if i == half {
            SymbolicElement::monomial(Monomial(vec![g; self.p as usize]), Poly::constant(1, self.p))
        } else if i > half {
            SymbolicElement::zero()
        } else {
            let target = half + i * (self.p - 1);
            let mut out = SymbolicElement::zero();
            for m in self.basis(target) {
                let id = self.unknowns.len();
                let name = format!("c[P^{i} {} : {}]", self.generator_name(g), self.monomial_name(&m));
                self.unknowns.push(Unknown { name, generator: g, op: i, monomial: m.clone() });
                out.terms.insert(m, Poly::var(id));
            }
            out
        };
        self.powers.insert((g, i), value.clone());
        value
    }

    fn power_on_monomial(&mut self, m: &Monomial, i: u32) -> SymbolicElement {
        if i == 0 {
            return SymbolicElement::monomial(m.clone(), Poly::constant(1, self.p));
        }
        let (first, rest) = m.factors().split_first().expect("nonempty monomial");
        if rest.is_empty() {
            return self.power_on_generator(*first, i);
        }
        let rest = Monomial(rest.to_vec());
        let mut out = SymbolicElement::zero();
        for j in 0..=i {
            let a = self.power_on_generator(*first, j);
            if a.is_zero() {
                continue;
            }
            let b = self.power_on_monomial(&rest, i - j);
            out = out.add(&a.mul(&b, self.p), self.p);
        }
        out
    }

    /// Applies `P^i` using the Cartan formula on products.
    pub fn cartan_apply(&mut self, i: u32, element: &SymbolicElement) -> SymbolicElement {
        let mut out = SymbolicElement::zero();
        for (m, c) in element.terms.clone() {
            let image = self.power_on_monomial(&m, i);
            out = out.add(&image.scale(&c, self.p), self.p);
        }
        out
    }

    /// Applies `P^{i_1} ... P^{i_s}`, rightmost operation first.
    pub fn apply_word(&mut self, exponents: &[u32], element: &SymbolicElement) -> SymbolicElement {
        let mut cur = element.clone();
        for &i in exponents.iter().rev() {
            cur = self.cartan_apply(i, &cur);
        }
        cur
    }

    pub fn require_zero(&mut self, poly: Poly, origin: impl Into<String>) {
        self.constraints.push(Constraint { kind: ConstraintKind::Zero, poly, origin: origin.into() });
    }

    pub fn require_nonzero(&mut self, poly: Poly, origin: impl Into<String>) {
        self.constraints.push(Constraint { kind: ConstraintKind::NonZero, poly, origin: origin.into() });
    }

    /// Records that the coefficient of `target` in `P^i(x_g)` is nonzero.
    pub fn require_coefficient_nonzero(&mut self, g: usize, i: u32, target: &Monomial, origin: &str) {
        let image = self.power_on_generator(g, i);
        let c = image.coefficient(target);
        let line = format!(
            "{origin}: coefficient of {} in P^{i}({}) is nonzero",
            self.monomial_name(target),
            self.generator_name(g)
        );
        self.trace.push(line);
        self.require_nonzero(c, origin);
    }

    /// Evaluates both sides of the Adem rewriting of `word` on `x_g` and
    /// requires them to agree coefficientwise. Returns the number of
    /// equations added.
    pub fn impose_relation(&mut self, word: &[u32], g: usize) -> usize {
        let p = self.p;
        let rhs_words = normalize(&PowerWord::single(word), p);
        let x = self.generator(g);
        let lhs = self.apply_word(word, &x);
        let mut rhs = SymbolicElement::zero();
        for w in &rhs_words {
            let image = self.apply_word(&w.exponents, &x);
            rhs = rhs.add(&image.scale(&Poly::constant(w.coeff, p), p), p);
        }
        let diff = lhs.sub(&rhs, p);
        let origin = format!("{} = {} on {}", format_word(word), format_sum(&rhs_words, p), self.generator_name(g));
        let mut line = format!("relation {origin}: left side {}", self.render(&lhs));
        let _ = write!(line, "; right side {}", self.render(&rhs));
        self.trace.push(line);
        let mut added = 0;
        for (m, c) in diff.terms.clone() {
            let line = format!("  coefficient of {}: {} = 0", self.monomial_name(&m), self.render_poly(&c));
            self.trace.push(line);
            self.require_zero(c, origin.clone());
            added += 1;
        }
        added
    }

    pub fn render_poly(&self, c: &Poly) -> String {
        let names: Vec<String> = self.unknowns.iter().map(|u| u.name.clone()).collect();
        c.render(&names, self.p)
    }

    /// Exhaustive search over `F_p` for the unknowns that occur in the
    /// constraints, with each constraint checked as soon as its unknowns are
    /// assigned.
    pub fn solve(&self) -> SolveOutcome {
        let p = self.p;
        let mut order: Vec<&Constraint> = self.constraints.iter().collect();
        order.sort_by_key(|c| c.poly.vars().len());
        let mut vars: Vec<usize> = Vec::new();
        let mut seen = BTreeSet::new();
        for c in &order {
            for v in c.poly.vars() {
                if seen.insert(v) {
                    vars.push(v);
                }
            }
        }
        let position: HashMap<usize, usize> = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        // Constraints without unknowns are decided up front.
        let mut buckets: Vec<Vec<&Constraint>> = vec![Vec::new(); vars.len()];
        let values = vec![0u32; self.unknowns.len()];
        for c in order {
            match c.poly.vars().iter().map(|v| position[v]).max() {
                Some(k) => buckets[k].push(c),
                None => {
                    if !holds(c, &values, p) {
                        return SolveOutcome::Unsatisfiable;
                    }
                }
            }
        }
        let mut values = values;
        if search(0, &vars, &buckets, &mut values, p) {
            let witness = vars.iter().map(|&v| (self.unknowns[v].name.clone(), values[v])).collect();
            SolveOutcome::Satisfiable(witness)
        } else {
            SolveOutcome::Unsatisfiable
        }
    }
}

fn holds(c: &Constraint, values: &[u32], p: u32) -> bool {
    let v = c.poly.eval(values, p);
    match c.kind {
        ConstraintKind::Zero => v == 0,
        ConstraintKind::NonZero => v != 0,
    }
}

fn search(depth: usize, vars: &[usize], buckets: &[Vec<&Constraint>], values: &mut [u32], p: u32) -> bool {
    if depth == vars.len() {
        return true;
    }
    for a in 0..p {
        values[vars[depth]] = a;
        if buckets[depth].iter().all(|c| holds(c, values, p)) && search(depth + 1, vars, buckets, values, p) {
            return true;
        }
    }
    values[vars[depth]] = 0;
    false
}
