//! Acceptance gate: one pass/fail line per criterion, nonzero exit if any fail.

use std::process::Command;
use std::time::{Duration, Instant};

use apsieve_core::classifier::reference;
use apsieve_core::classifier::{all_eliminations, classify_theorem_1_2, proposition_lists, ClassifyOptions, Elimination};
use apsieve_core::finiteness::{estimate, monomial_count, rank_bound};
use apsieve_core::psimod::{
    condition_report, eliminate_by_psi, enumerate_classes, gcd_oracle, main_lemma_val, theorem_1_1_test,
};
use apsieve_core::steenrod::{verify_adem_instance, verify_relation_42, verify_relation_43};
use apsieve_core::{PrimeContext, SpaceType, Valuation, Window};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

fn ctx(p: u64) -> PrimeContext {
    PrimeContext::new(p).unwrap()
}

fn ty(halves: &[u32]) -> SpaceType {
    SpaceType::new(ctx(3), halves.to_vec()).unwrap()
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, format!("took {t:?}, limit {limit:?}"))
}

fn big_val(p: u64, n: &BigUint) -> Valuation {
    let zero = BigUint::from(0u32);
    if *n == zero {
        return Valuation::Infinite;
    }
    let p = BigUint::from(p);
    let mut n = n.clone();
    let mut c = 0;
    while &n % &p == zero {
        n /= &p;
        c += 1;
    }
    Valuation::Finite(c)
}

fn err<T>(r: apsieve_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn c1_legendre() -> Outcome {
    let start = Instant::now();
    for p in [3, 5, 7, 11] {
        let c = ctx(p);
        for n in 0..=100_000 {
            ensure(c.legendre_sum(n) == c.legendre_digit_form(n), format!("p = {p}, n = {n}"))?;
        }
    }
    within(start, Duration::from_secs(5))?;
    Ok(format!("400004 checks in {:?}", start.elapsed()))
}

fn c2_nu_oracle() -> Outcome {
    let start = Instant::now();
    for p in [3u64, 5] {
        let c = ctx(p);
        let k0 = BigUint::from(c.k0());
        let mut power = BigUint::from(1u32);
        for d in 1..=2000u32 {
            power *= &k0;
            let oracle = big_val(p, &(&power - 1u32));
            ensure(c.nu(d as i64) == oracle, format!("p = {p}, d = {d}"))?;
        }
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!("4000 checks in {:?}", start.elapsed()))
}

fn c3_pair_min() -> Outcome {
    let c = ctx(3);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..500 {
        let t1: u32 = rng.gen_range(1..=100);
        let t2: u32 = rng.gen_range(1..=100);
        let (hi, lo) = (t1.max(t2), t1.min(t2));
        let brute = (2..=50u64)
            .map(|k| {
                let k = BigUint::from(k);
                big_val(3, &(k.pow(hi) - k.pow(lo)))
            })
            .min()
            .unwrap();
        ensure(c.pair_min_val(t1 as u64, t2 as u64) == brute, format!("pair ({t1}, {t2})"))?;
    }
    Ok("500 random pairs".into())
}

fn c4_main_lemma() -> Outcome {
    let mut checked = 0;
    for p in [3u64, 5] {
        let c = ctx(p);
        for m in (1..=30u64).filter(|m| (p - 1) % m != 0) {
            for t in 1..=4u64 {
                for i in t..=t * p {
                    let v = main_lemma_val(&c, m, t, i).map_err(|e| e.to_string())?;
                    ensure((v as u64) < m * t, format!("p = {p}, m = {m}, t = {t}, i = {i}: {v} >= {}", m * t))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} cases, zero violations"))
}

fn c5_adem() -> Outcome {
    err(verify_adem_instance(3, 7, 3, &[(&[10], -1), (&[9, 1], 1)]))?;
    err(verify_adem_instance(3, 9, 3, &[(&[12], 1), (&[11, 1], 1)]))?;
    err(verify_adem_instance(1, 1, 3, &[(&[2], 2)]))?;
    for k in 1..=50 {
        let r = err(verify_relation_42(k))?;
        ensure(r.coeff_second == 2, format!("k = {k}"))?;
    }
    for l in 2..=50 {
        let r = err(verify_relation_43(l))?;
        ensure(r.trailing == 1, format!("l = {l}"))?;
    }
    Ok("two instances, P^1 P^1 = 2 P^2, k <= 50, 2 <= l <= 50".into())
}

fn c6_gcd_mechanism() -> Outcome {
    let start = Instant::now();
    let c = ctx(3);
    let mut failures = 0;
    for a in 2..=40u32 {
        let mut types = vec![vec![a]];
        for b in a..=40 {
            types.push(vec![a, b]);
            types.extend((b..=40).map(|c| vec![a, b, c]));
        }
        for halves in types {
            let space = SpaceType::new(c, halves).unwrap();
            if theorem_1_1_test(&space).passed() {
                continue;
            }
            failures += 1;
            let w = Window::new(a, 3 * a).unwrap();
            let report = condition_report(&enumerate_classes(&space, w)).map_err(|e| e.to_string())?;
            ensure(report.certifies(), format!("{space} not certified on {w}"))?;
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{failures} gcd failures, all certified"))
}

fn c7_survivor_safety() -> Outcome {
    let opts = ClassifyOptions::default();
    let mut bad = Vec::new();
    let listed = reference::RANK2.iter().map(|h| h.to_vec()).chain(reference::SURVIVORS.iter().map(|h| h.to_vec()));
    for h in listed {
        let space = ty(&h);
        let elims = all_eliminations(&space, opts).map_err(|e| e.to_string())?;
        if let Some(e) = elims.first() {
            bad.push(format!("{space} by {}", e.summary()));
        }
    }
    ensure(bad.is_empty(), format!("eliminated: {}", bad.join("; ")))?;
    Ok("10 types untouched".into())
}

fn c8_psi_windows() -> Outcome {
    let check = |h: &[u32], lo: u32, hi: u32, hand: &[(u32, u32)]| -> Result<(), String> {
        let space = ty(h);
        let module = enumerate_classes(&space, Window::new(lo, hi).unwrap());
        let report = condition_report(&module).map_err(|e| e.to_string())?;
        ensure(report.certifies(), format!("{space} not certified on [{lo},{hi}]"))?;
        for (idx, class) in report.classes.iter().enumerate() {
            let oracle = gcd_oracle(&module, idx, 50).map_err(|e| e.to_string())?;
            ensure(oracle == Valuation::Finite(class.valuation_sum), format!("{space}: class {}", class.degree))?;
        }
        for &(d, v) in hand {
            let got = report.class(d).map(|c| c.valuation_sum);
            ensure(got == Some(v), format!("{space}: v({d}) = {got:?}, expected {v}"))?;
        }
        ensure(eliminate_by_psi(&space).is_some(), format!("{space}: no certificate found"))
    };
    check(&[2, 21, 27], 21, 81, &[(21, 16), (27, 17)])?;
    check(&[18, 24, 26], 26, 78, &[])?;
    Ok("both windows certify; sums match the gcd oracle".into())
}

fn c9_propositions() -> Outcome {
    let lists = proposition_lists(60).map_err(|e| e.to_string())?;
    for case in 1..=4 {
        let got: Vec<Vec<u32>> = lists.case(case).iter().map(|t| t.halves().to_vec()).collect();
        let want: Vec<Vec<u32>> = reference::case_list(case).iter().map(|h| h.to_vec()).collect();
        ensure(got == want, format!("case {case}: {got:?}"))?;
    }
    Ok("9/4/12/2".into())
}

fn c10_partition() -> Outcome {
    let start = Instant::now();
    let r = classify_theorem_1_2(60, ClassifyOptions::default()).map_err(|e| e.to_string())?;
    for t in &r.types {
        if let Some(Elimination::SteenrodRule(trace)) = t.verdict.elimination() {
            ensure(trace.replay(), format!("{}: trace does not replay", t.space))?;
        }
    }
    within(start, Duration::from_secs(120))?;
    let counts = (r.survivors.len(), r.quasi_regular.len(), r.steenrod_eliminated.len(), r.psi_eliminated.len() + r.psi_uncertified.len());
    let uncertified: Vec<String> = r.psi_uncertified.iter().map(|t| t.to_string()).collect();
    ensure(
        r.matches_reference,
        format!("partition {counts:?}, psi_uncertified [{}]; {}", uncertified.join(", "), r.discrepancies.join("; ")),
    )?;
    Ok(format!("partition {counts:?}, psi_uncertified [{}]", uncertified.join(", ")))
}

fn c11_finiteness() -> Outcome {
    let n = monomial_count(3, 3).map_err(|e| e.to_string())?;
    ensure(n == 19, format!("monomial_count(3,3) = {n}"))?;
    let b = rank_bound(3, 3).map_err(|e| e.to_string())?;
    ensure(b.m0 == 115, format!("rank_bound(3,3) = {}", b.m0))?;
    let last_fail = (1..=10_000u64).filter(|&m| estimate(3, n, m) >= m).max().unwrap_or(0);
    ensure(last_fail + 1 == b.m0, format!("brute scan gives {}", last_fail + 1))?;
    let top = (1..=4).flat_map(reference::case_list).map(|h| h[2]).max().unwrap();
    ensure(top <= 45 && (top as u64) < b.m0, format!("largest candidate top {top}"))?;
    Ok(format!("N = 19, M0 = 115, largest candidate top {top}"))
}

fn c12_determinism() -> Outcome {
    let run = || Command::new(env!("CARGO_BIN_EXE_apsieve")).args(["reproduce", "thm1.2"]).output();
    let a = run().map_err(|e| e.to_string())?;
    let b = run().map_err(|e| e.to_string())?;
    ensure(!a.stdout.is_empty() && a.stdout == b.stdout, "reports differ")?;
    Ok(format!("{} identical bytes", a.stdout.len()))
}

fn main() {
    let criteria: [(u8, fn() -> Outcome); 12] = [
        (1, c1_legendre),
        (2, c2_nu_oracle),
        (3, c3_pair_min),
        (4, c4_main_lemma),
        (5, c5_adem),
        (6, c6_gcd_mechanism),
        (7, c7_survivor_safety),
        (8, c8_psi_windows),
        (9, c9_propositions),
        (10, c10_partition),
        (11, c11_finiteness),
        (12, c12_determinism),
    ];
    let mut failed = 0;
    for (n, f) in criteria {
        match f() {
            Ok(msg) => println!("criterion {n}: pass ({msg})"),
            Err(msg) => {
                failed += 1;
                println!("criterion {n}: fail ({msg})");
            }
        }
    }
    println!("{} of 12 criteria pass", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
