//! Truncated polynomial psi-modules and the psi-divisibility condition.
//!
//! A candidate type `(m_1, ..., m_r)` determines the degree data of the
//! truncated algebra `F_p[y_1, ..., y_r] / (height p + 1)`, with `y_i` in
//! half-degree `m_i`. Restricting to a window of half-degrees `[lo, hi]`
//! gives a module whose psi-eigenvalues on a class of half-degree `t` are
//! `k^t`. If for every class `t_i` the gcd `d_i` of the products
//! `prod_{j != i} (k_j^{t_i} - k_j^{t_j})` has `e(d_i) < t_i`, every `p`-th
//! power in the window vanishes, which contradicts a witness generator whose
//! `p`-th power lies in the window.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::padic::{PrimeContext, Valuation};

/// A candidate type: sorted half-degrees of the exterior generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpaceType {
    ctx: PrimeContext,
    halves: Vec<u32>,
}

impl SpaceType {
    pub fn new(ctx: PrimeContext, halves: Vec<u32>) -> Result<Self> {
        if halves.is_empty() {
            return Err(Error::InvalidType("a type needs at least one generator".into()));
        }
        if halves.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidType(format!("half-degrees {halves:?} are not sorted")));
        }
        if halves[0] < 2 {
            return Err(Error::InvalidType(format!(
                "half-degree {} is below 2 (space must be simply connected)",
                halves[0]
            )));
        }
        Ok(SpaceType { ctx, halves })
    }

    /// Parses a comma-separated list such as `4,8,12`.
    pub fn parse(ctx: PrimeContext, s: &str) -> Result<Self> {
        let halves = s
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidType(format!("'{part}' is not a half-degree")))
            })
            .collect::<Result<Vec<_>>>()?;
        SpaceType::new(ctx, halves)
    }

    pub fn ctx(&self) -> &PrimeContext {
        &self.ctx
    }

    pub fn p(&self) -> u32 {
        self.ctx.p() as u32
    }

    pub fn halves(&self) -> &[u32] {
        &self.halves
    }

    pub fn rank(&self) -> usize {
        self.halves.len()
    }

    pub fn bottom(&self) -> u32 {
        self.halves[0]
    }

    pub fn top(&self) -> u32 {
        *self.halves.last().unwrap()
    }

    /// Cohomology degrees `2m - 1` of the exterior generators.
    pub fn cohomology_degrees(&self) -> Vec<u32> {
        self.halves.iter().map(|m| 2 * m - 1).collect()
    }

    /// Number of generators sitting in half-degree `m`.
    pub fn generator_count(&self, m: u32) -> usize {
        self.halves.iter().filter(|&&h| h == m).count()
    }

    pub fn has_generator(&self, m: u32) -> bool {
        self.halves.contains(&m)
    }

    /// Half-degrees of all monomials of word-length `1..=p`, with the number
    /// of monomials in each.
    pub fn monomial_degrees(&self) -> BTreeMap<u32, u64> {
        monomial_degree_counts(&self.halves, self.p() as usize)
    }
}

impl fmt::Display for SpaceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, m) in self.halves.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str(")")
    }
}

impl Serialize for SpaceType {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.halves.serialize(serializer)
    }
}

/// Counts monomials of word-length `1..=max_len` by half-degree.
pub fn monomial_degree_counts(halves: &[u32], max_len: usize) -> BTreeMap<u32, u64> {
    // layers[len] maps degree -> number of monomials of that word-length
    let mut layers: Vec<BTreeMap<u32, u64>> = vec![BTreeMap::new(); max_len + 1];
    layers[0].insert(0, 1);
    for &h in halves {
        let mut next = layers.clone();
        for len in 0..max_len {
            for (&deg, &count) in &layers[len] {
                for e in 1..=(max_len - len) {
                    *next[len + e].entry(deg + e as u32 * h).or_insert(0) += count;
                }
            }
        }
        layers = next;
    }
    let mut out = BTreeMap::new();
    for layer in layers.into_iter().skip(1) {
        for (deg, count) in layer {
            *out.entry(deg).or_insert(0) += count;
        }
    }
    out
}

/// An inclusive range of half-degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Window {
    pub lo: u32,
    pub hi: u32,
}

impl Window {
    pub fn new(lo: u32, hi: u32) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidWindow { lo, hi });
        }
        Ok(Window { lo, hi })
    }

    pub fn contains(&self, t: u32) -> bool {
        self.lo <= t && t <= self.hi
    }

    pub fn contains_window(&self, other: &Window) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DegreeClass {
    pub degree: u32,
    pub multiplicity: u64,
}

/// Degree data of the windowed truncated algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PsiModule {
    #[serde(rename = "type")]
    pub space: SpaceType,
    pub height: u32,
    pub window: Window,
    pub classes: Vec<DegreeClass>,
    /// Generator half-degrees `m` with `m` and `p * m` both in the window.
    pub witnesses: Vec<u32>,
}

impl PsiModule {
    /// Builds a module from explicit class degrees. Used to exercise the
    /// condition on hand-made data; duplicate degrees are kept as given.
    pub fn from_degrees(space: SpaceType, window: Window, degrees: &[u32]) -> Self {
        let classes = degrees
            .iter()
            .map(|&degree| DegreeClass { degree, multiplicity: 1 })
            .collect();
        let witnesses = witnesses_for(&space, window);
        PsiModule { height: space.p(), space, window, classes, witnesses }
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.classes.iter().map(|c| c.degree).collect()
    }

    pub fn monomial_count(&self) -> u64 {
        self.classes.iter().map(|c| c.multiplicity).sum()
    }

    fn check_distinct(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for c in &self.classes {
            if !seen.insert(c.degree) {
                return Err(Error::DuplicateClass(c.degree));
            }
        }
        Ok(())
    }
}

fn witnesses_for(space: &SpaceType, window: Window) -> Vec<u32> {
    let p = space.p();
    let mut w: Vec<u32> = space
        .halves()
        .iter()
        .copied()
        .filter(|&m| window.lo <= m && p * m <= window.hi)
        .collect();
    w.dedup();
    w
}

/// All distinct sums of `1..=p` generator half-degrees inside `window`.
pub fn enumerate_classes(space: &SpaceType, window: Window) -> PsiModule {
    let classes = space
        .monomial_degrees()
        .into_iter()
        .filter(|(deg, _)| window.contains(*deg))
        .map(|(degree, multiplicity)| DegreeClass { degree, multiplicity })
        .collect();
    PsiModule {
        height: space.p(),
        witnesses: witnesses_for(space, window),
        space: space.clone(),
        window,
        classes,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassCondition {
    pub degree: u32,
    /// Exact `e(d_i)`: sum over the other classes of the per-pair minimum.
    pub valuation_sum: u32,
    /// Primitive-root estimate: sum of `nu(|t_i - t_j|)`.
    pub nu_bound: u32,
    pub passes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub module: PsiModule,
    pub classes: Vec<ClassCondition>,
    pub holds_everywhere: bool,
    pub witness_used: Option<u32>,
}

impl ConditionReport {
    pub fn class(&self, degree: u32) -> Option<&ClassCondition> {
        self.classes.iter().find(|c| c.degree == degree)
    }

    /// True when the condition holds and a witness is present, i.e. the
    /// report certifies that the type admits no `A_p`-structure.
    pub fn certifies(&self) -> bool {
        self.holds_everywhere && self.witness_used.is_some()
    }
}

/// Evaluates the divisibility condition on every class of `module`.
pub fn condition_report(module: &PsiModule) -> Result<ConditionReport> {
    module.check_distinct()?;
    if module.classes.len() < 2 {
        return Err(Error::TooFewClasses(module.classes.len()));
    }
    let ctx = module.space.ctx();
    let degrees = module.degrees();
    let classes: Vec<ClassCondition> = degrees
        .iter()
        .map(|&ti| {
            let mut valuation_sum = 0;
            let mut nu_bound = 0;
            for &tj in degrees.iter().filter(|&&tj| tj != ti) {
                valuation_sum += ctx.pair_min_val(ti as u64, tj as u64).unwrap_finite();
                nu_bound += ctx.nu(ti as i64 - tj as i64).unwrap_finite();
            }
            ClassCondition { degree: ti, valuation_sum, nu_bound, passes: valuation_sum < ti }
        })
        .collect();
    let holds_everywhere = classes.iter().all(|c| c.passes);
    Ok(ConditionReport {
        witness_used: module.witnesses.first().copied(),
        module: module.clone(),
        classes,
        holds_everywhere,
    })
}

/// Which windows the elimination search walks through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowPolicy {
    /// Lower end at any class degree, upper end at some `p * m_j`.
    #[default]
    Standard,
    /// Lower and upper ends at any class degrees.
    Exhaustive,
}

/// A window on which the condition holds and a witness is present.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PsiCertificate {
    pub window: Window,
    pub report: ConditionReport,
}

impl PsiCertificate {
    /// Re-evaluates the certificate from its window alone.
    pub fn replay(&self, space: &SpaceType) -> bool {
        let module = enumerate_classes(space, self.window);
        condition_report(&module).map(|r| r.certifies()).unwrap_or(false)
    }
}

/// Candidate windows in search order: `lo` ascending, then `hi` ascending.
pub fn candidate_windows(space: &SpaceType, policy: WindowPolicy) -> Vec<Window> {
    let degrees: Vec<u32> = space.monomial_degrees().keys().copied().collect();
    let mut tops: Vec<u32> = match policy {
        WindowPolicy::Standard => space.halves().iter().map(|m| space.p() * m).collect(),
        WindowPolicy::Exhaustive => degrees.clone(),
    };
    tops.sort_unstable();
    tops.dedup();
    let mut out = Vec::new();
    for &lo in &degrees {
        for &hi in tops.iter().filter(|&&hi| hi >= lo) {
            out.push(Window { lo, hi });
        }
    }
    out
}

/// Searches the window family for a certified elimination. `None` means
/// inconclusive, not that the type survives.
pub fn eliminate_by_psi(space: &SpaceType) -> Option<PsiCertificate> {
    eliminate_by_psi_with(space, WindowPolicy::Standard)
}

pub fn eliminate_by_psi_with(space: &SpaceType, policy: WindowPolicy) -> Option<PsiCertificate> {
    candidate_windows(space, policy).into_iter().find_map(|window| {
        let module = enumerate_classes(space, window);
        if module.witnesses.is_empty() {
            return None;
        }
        let report = condition_report(&module).ok()?;
        report.holds_everywhere.then_some(PsiCertificate { window, report })
    })
}

/// Big-integer oracle for `e(d_i)`: each factor is minimised independently
/// over bases `2..=k_max`.
pub fn gcd_oracle(module: &PsiModule, class_index: usize, k_max: u64) -> Result<Valuation> {
    let ctx = module.space.ctx();
    let needed = ctx.p().max(ctx.k0());
    if k_max < needed {
        return Err(Error::OracleRangeTooSmall { k_max, needed });
    }
    module.check_distinct()?;
    let degrees = module.degrees();
    let ti = *degrees
        .get(class_index)
        .ok_or(Error::ClassIndex { index: class_index, len: degrees.len() })?;
    let mut total = Valuation::Finite(0);
    for &tj in degrees.iter().filter(|&&tj| tj != ti) {
        let factor_min = (2..=k_max)
            .map(|k| {
                let k = BigUint::from(k);
                let (hi, lo) = if ti > tj { (ti, tj) } else { (tj, ti) };
                ctx.val_big(&(k.pow(hi) - k.pow(lo)))
            })
            .min()
            .unwrap_or(Valuation::Infinite);
        total = total + factor_min;
    }
    Ok(total)
}

/// Valuation of `prod_{j in [t, tp], j != i} (k0^{m i} - k0^{m j})`:
/// the sum of `nu(m |i - j|)`.
pub fn main_lemma_val(ctx: &PrimeContext, m: u64, t: u64, i: u64) -> Result<u32> {
    let top = t * ctx.p();
    if i < t || i > top {
        return Err(Error::OutOfRange(format!("i = {i} outside [{t}, {top}]")));
    }
    Ok((t..=top)
        .filter(|&j| j != i)
        .map(|j| ctx.nu((m * i.abs_diff(j)) as i64).unwrap_finite())
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "lowercase")]
pub enum GcdTest {
    Pass { m: u32 },
    Fail { m: u32 },
}

impl GcdTest {
    pub fn passed(&self) -> bool {
        matches!(self, GcdTest::Pass { .. })
    }
}

/// The gcd `m` of all half-degrees `<= p * m_1` must divide `p - 1`.
pub fn theorem_1_1_test(space: &SpaceType) -> GcdTest {
    let bound = space.p() * space.bottom();
    let m = space
        .halves()
        .iter()
        .filter(|&&h| h <= bound)
        .fold(0u32, |acc, &h| acc.gcd(&h));
    if (space.p() - 1).is_multiple_of(m) {
        GcdTest::Pass { m }
    } else {
        GcdTest::Fail { m }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ty(p: u64, halves: &[u32]) -> SpaceType {
        SpaceType::new(PrimeContext::new(p).unwrap(), halves.to_vec()).unwrap()
    }

    fn win(lo: u32, hi: u32) -> Window {
        Window::new(lo, hi).unwrap()
    }

    #[test]
    fn type_validation() {
        let ctx = PrimeContext::new(3).unwrap();
        assert!(SpaceType::new(ctx, vec![]).is_err());
        assert!(SpaceType::new(ctx, vec![4, 2]).is_err());
        assert!(SpaceType::new(ctx, vec![1, 2]).is_err());
        assert!(SpaceType::parse(ctx, "2,x").is_err());
        assert_eq!(SpaceType::parse(ctx, "2, 4,6").unwrap().halves(), &[2, 4, 6]);
        assert_eq!(ty(3, &[2, 4, 6]).cohomology_degrees(), vec![3, 7, 11]);
        assert!(Window::new(5, 4).is_err());
    }

    #[test]
    fn enumerate_examples() {
        let m = enumerate_classes(&ty(3, &[2, 3, 9]), win(1, 27));
        assert_eq!(
            m.degrees(),
            vec![2, 3, 4, 5, 6, 7, 8, 9, 11, 12, 13, 14, 15, 18, 20, 21, 27]
        );
        assert_eq!(m.monomial_count(), 19);

        let m = enumerate_classes(&ty(3, &[4, 8, 12]), win(4, 12));
        assert_eq!(m.degrees(), vec![4, 8, 12]);
        assert_eq!(m.classes[2].multiplicity, 3);
        assert_eq!(m.witnesses, vec![4]);

        let m = enumerate_classes(&ty(3, &[2]), win(1, 6));
        assert_eq!(m.degrees(), vec![2, 4, 6]);
    }

    #[test]
    fn empty_window_is_allowed() {
        let m = enumerate_classes(&ty(3, &[4, 8]), win(5, 7));
        assert!(m.classes.is_empty());
        assert!(m.witnesses.is_empty());
    }

    #[test]
    fn condition_examples() {
        let r = condition_report(&enumerate_classes(&ty(3, &[4, 8, 12]), win(4, 12))).unwrap();
        assert_eq!(r.classes.iter().map(|c| c.valuation_sum).collect::<Vec<_>>(), vec![2, 2, 2]);
        assert!(r.holds_everywhere);

        let r = condition_report(&enumerate_classes(&ty(3, &[2, 4, 6]), win(2, 6))).unwrap();
        assert_eq!(r.class(2).unwrap().valuation_sum, 2);
        assert!(!r.class(2).unwrap().passes);
        assert!(!r.holds_everywhere);

        let r = condition_report(&enumerate_classes(&ty(3, &[2, 21, 27]), win(21, 81))).unwrap();
        assert!(r.holds_everywhere);
        assert_eq!(r.class(21).unwrap().valuation_sum, 16);
        assert_eq!(r.class(27).unwrap().valuation_sum, 17);
    }

    #[test]
    fn condition_rejects_duplicates_and_tiny_modules() {
        let t = ty(3, &[4, 8, 12]);
        let dup = PsiModule::from_degrees(t.clone(), win(4, 12), &[4, 8, 8]);
        assert_eq!(condition_report(&dup), Err(Error::DuplicateClass(8)));
        assert_eq!(gcd_oracle(&dup, 0, 50), Err(Error::DuplicateClass(8)));
        let single = PsiModule::from_degrees(t, win(4, 4), &[4]);
        assert_eq!(condition_report(&single), Err(Error::TooFewClasses(1)));
    }

    #[test]
    fn eliminate_examples() {
        let cert = eliminate_by_psi(&ty(3, &[4, 8, 12])).unwrap();
        assert_eq!(cert.window, win(4, 12));
        assert!(cert.replay(&ty(3, &[4, 8, 12])));
        assert!(eliminate_by_psi(&ty(3, &[2, 4, 6])).is_none());
        let t = ty(3, &[18, 24, 26]);
        assert!(eliminate_by_psi(&t).is_some());
        let r = condition_report(&enumerate_classes(&t, win(26, 78))).unwrap();
        assert!(r.certifies());
        assert_eq!(r.witness_used, Some(26));
        assert_eq!(r.class(26).unwrap().valuation_sum, 23);
    }

    #[test]
    fn search_order_is_lexicographic() {
        let windows = candidate_windows(&ty(3, &[2, 4, 6]), WindowPolicy::Standard);
        let mut sorted = windows.clone();
        sorted.sort();
        assert_eq!(windows, sorted);
        assert_eq!(windows[0], win(2, 6));
    }

    #[test]
    fn gcd_oracle_examples() {
        let m = enumerate_classes(&ty(3, &[4, 8, 12]), win(4, 12));
        assert_eq!(gcd_oracle(&m, 0, 50).unwrap(), Valuation::Finite(2));
        let m = enumerate_classes(&ty(3, &[2, 4, 6]), win(2, 6));
        assert_eq!(gcd_oracle(&m, 0, 50).unwrap(), Valuation::Finite(2));
        assert!(matches!(gcd_oracle(&m, 0, 2), Err(Error::OracleRangeTooSmall { .. })));
        assert!(matches!(gcd_oracle(&m, 9, 50), Err(Error::ClassIndex { .. })));
    }

    #[test]
    fn main_lemma_examples() {
        let c = PrimeContext::new(3).unwrap();
        assert_eq!(main_lemma_val(&c, 4, 1, 1).unwrap(), 2);
        assert_eq!(main_lemma_val(&c, 1, 2, 2).unwrap(), 2);
        assert_eq!(main_lemma_val(&c, 5, 1, 3).unwrap(), 1);
        assert!(main_lemma_val(&c, 5, 2, 1).is_err());
    }

    #[test]
    fn gcd_test_examples() {
        assert_eq!(theorem_1_1_test(&ty(3, &[4, 8, 12])), GcdTest::Fail { m: 4 });
        assert_eq!(theorem_1_1_test(&ty(3, &[2, 3, 9])), GcdTest::Pass { m: 1 });
        assert_eq!(theorem_1_1_test(&ty(3, &[6, 8, 10])), GcdTest::Pass { m: 2 });
    }

    #[test]
    fn repeated_generators_are_distinct_variables() {
        // x, y both in half-degree 2: x^2, xy, y^2 all land in degree 4.
        let counts = ty(3, &[2, 2]).monomial_degrees();
        assert_eq!(counts[&2], 2);
        assert_eq!(counts[&4], 3);
        assert_eq!(counts[&6], 4);
    }
}
