//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use knotgroup::coset::{surgered_presentation, todd_coxeter, Outcome};
use knotgroup::criterion::{criterion_report, match_it_shape, minimal_integer_bound, LongitudeChoice, Slope, Verdict};
use knotgroup::twisted::{closed_form, derive_from_diagram, verify_proof, TwistParams};
use knotgroup::wirtinger::{builtin_link_l, eliminate_auxiliary_arcs, reduced_link_relators, wirtinger_presentation};
use knotgroup::{Generator, LaurentPolynomial, Presentation, TwistConvention, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome_ = Result<String, String>;

struct Criterion {
    id: u8,
    name: &'static str,
    budget: Option<Duration>,
    run: fn() -> Outcome_,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn sweep() -> Vec<TwistParams> {
    (-3..=3).flat_map(|u| (0..=4).map(move |v| TwistParams::new(u, v).unwrap())).collect()
}

fn p(text: &str) -> Word {
    Word::parse(text).unwrap()
}

/// The twelve crossing relators of the built-in link, as hand-read from its
/// diagram.
const CROSSING_RELATORS: [&str; 12] = [
    "xi alpha delta1^-1 alpha^-1",
    "delta1 beta delta2^-1 beta^-1",
    "delta2 gamma xi^-1 gamma^-1",
    "xi^-1 alpha xi gamma^-1",
    "xi^-1 beta xi delta3^-1",
    "xi^-1 gamma xi delta4^-1",
    "delta5^-1 gamma delta3 gamma^-1",
    "delta6^-1 gamma delta4 gamma^-1",
    "psi delta5 delta7^-1 delta5^-1",
    "delta7 delta6 psi^-1 delta6^-1",
    "psi^-1 delta5 psi alpha^-1",
    "psi^-1 delta6 psi beta^-1",
];

fn fixture_exactness() -> Outcome_ {
    let d = builtin_link_l();
    let w = wirtinger_presentation(&d).map_err(|e| e.to_string())?;
    ensure(w.relators().len() == 12, || format!("{} relators", w.relators().len()))?;
    for (i, (got, want)) in w.relators().iter().zip(CROSSING_RELATORS).enumerate() {
        ensure(*got == p(want), || format!("P{}: {got} != {want}", i + 1))?;
    }
    let e = eliminate_auxiliary_arcs(&d).map_err(|e| e.to_string())?;
    let rels = e.presentation.relators();
    let fixture = reduced_link_relators();
    ensure(rels.len() == fixture.len(), || format!("{} relators after elimination", rels.len()))?;
    for f in &fixture {
        ensure(rels.iter().any(|r| r.is_conjugate_up_to_inverse(f)), || format!("missing {f}"))?;
    }
    Ok("P1..P12 verbatim; 5 reduced relators matched".into())
}

fn pipeline_equivalence() -> Outcome_ {
    for prm in sweep() {
        let c = closed_form(prm).map_err(|e| e.to_string())?;
        let d = derive_from_diagram(prm, TwistConvention::SlopeConsistent).map_err(|e| e.to_string())?;
        ensure(d.relator().is_conjugate_up_to_inverse(c.relator()), || format!("{prm:?}: relators differ"))?;
        ensure(d.longitude_paper == c.longitude_paper, || {
            format!("{prm:?}: {} != {}", d.longitude_paper, c.longitude_paper)
        })?;
    }
    Ok("35 pairs agree".into())
}

fn proof_steps() -> Outcome_ {
    for prm in sweep() {
        let r = verify_proof(prm).map_err(|e| e.to_string())?;
        if let Some(bad) = r.checks[..8].iter().find(|c| !c.passed) {
            return Err(format!("{prm:?}: {} failed ({})", bad.name, bad.detail));
        }
        let class = r.checks[8].measured;
        ensure(class == Some(2 * prm.u), || format!("{prm:?}: longitude class {class:?}"))?;
    }
    Ok("checks 1-8 pass on 35 pairs; longitude class = 2u".into())
}

fn homology() -> Outcome_ {
    let mut fillings = 0;
    for prm in sweep() {
        let m = closed_form(prm).map_err(|e| e.to_string())?;
        let h = m.presentation.homology().map_err(|e| e.to_string())?;
        ensure(h.is_z(), || format!("{prm:?}: H1 = {h:?}"))?;
        for pn in (-7..=7).filter(|&x| x != 0) {
            let slope = Slope::new(pn, 1).unwrap();
            let s = surgered_presentation(&m, slope, LongitudeChoice::Corrected).map_err(|e| e.to_string())?;
            let order = s.homology().map_err(|e| e.to_string())?.order();
            ensure(order == Some(pn.unsigned_abs() as u128), || format!("{prm:?} p={pn}: |H1| = {order:?}"))?;
            fillings += 1;
        }
    }
    Ok(format!("H1 = Z on 35 members; |H1| = |p| on {fillings} fillings"))
}

fn bound_reproduction() -> Outcome_ {
    for v in 0..=10 {
        for u in -1..=3 {
            let m = closed_form(TwistParams::new(u, v).unwrap()).map_err(|e| e.to_string())?;
            let paper = minimal_integer_bound(&m, LongitudeChoice::Paper).map_err(|e| e.to_string())?;
            let corrected = minimal_integer_bound(&m, LongitudeChoice::Corrected).map_err(|e| e.to_string())?;
            let expected = 3 * (3 * v + 2) + 2 * u;
            ensure(paper == expected, || format!("({u},{v}): paper bound {paper}, expected {expected}"))?;
            ensure(paper - corrected == -2 * u, || format!("({u},{v}): corrected bound {corrected}"))?;
        }
    }
    Ok("u=-1 gives 3(3v+2)-2 and u=s>=0 gives 3(3v+2)+2s for v=0..10".into())
}

fn positivity_gate() -> Outcome_ {
    let slopes = [(1, 1), (100, 1), (-3, 2), (41, 2)];
    let mut wrong = Vec::new();
    for prm in sweep() {
        let m = closed_form(prm).map_err(|e| e.to_string())?;
        for (pn, q) in slopes {
            let r = criterion_report(&m, Slope::new(pn, q).unwrap(), LongitudeChoice::Paper).map_err(|e| e.to_string())?;
            let ok = if prm.u <= -2 {
                r.verdict == Verdict::NotApplicable("w is not a positive word".into())
            } else {
                r.form_paper.w_positive
            };
            if !ok {
                wrong.push(format!("({},{}) w = {}", prm.u, prm.v, r.form_paper.w));
                break;
            }
        }
    }
    if wrong.is_empty() {
        Ok("NotApplicable for u<=-2, positive for u>=-1".into())
    } else {
        Err(format!("positivity disagrees at {}", wrong.join("; ")))
    }
}

fn oracle_finiteness() -> Outcome_ {
    const LIMIT: usize = 1_000_000;
    let m = closed_form(TwistParams::new(0, 0).unwrap()).map_err(|e| e.to_string())?;
    let run = |pn: i64| -> Result<Outcome, String> {
        let s = surgered_presentation(&m, Slope::new(pn, 1).unwrap(), LongitudeChoice::Paper).map_err(|e| e.to_string())?;
        Ok(todd_coxeter(&s, LIMIT).map_err(|e| e.to_string())?.outcome)
    };
    let (plus, minus) = (run(5)?, run(-5)?);
    let lens = Outcome::Finished { order: 5 };
    let sign = match (plus == lens, minus == lens) {
        (true, false) => 1,
        (false, true) => -1,
        _ => return Err(format!("+5 -> {plus:?}, -5 -> {minus:?}")),
    };
    let same = run(sign)?;
    ensure(same == Outcome::Finished { order: 120 }, || format!("{sign:+} -> {same:?}"))?;
    let opposite = run(-5 * sign)?;
    ensure(opposite == Outcome::Exceeded { limit: LIMIT as u64 }, || format!("{:+} -> {opposite:?}", -5 * sign))?;
    let hand = if sign > 0 { "positive (right-handed)" } else { "negative (left-handed)" };
    Ok(format!("{:+} -> 5, {sign:+} -> 120, {:+} exceeded; (0,0) member is the {hand} trefoil", 5 * sign, -5 * sign))
}

/// Dense integer polynomial product, lowest degree first.
fn mul(x: &[i64], y: &[i64]) -> Vec<i64> {
    let mut out = vec![0; x.len() + y.len() - 1];
    for (i, a) in x.iter().enumerate() {
        for (j, b) in y.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

/// `t^k − 1`.
fn binomial(k: usize) -> Vec<i64> {
    let mut v = vec![0; k + 1];
    v[0] = -1;
    v[k] = 1;
    v
}

/// `(t^{3q} − 1)(t − 1) / ((t³ − 1)(t^q − 1))` by long division.
fn torus_alexander(q: usize) -> Vec<i64> {
    let mut rem = mul(&binomial(3 * q), &binomial(1));
    let den = mul(&binomial(3), &binomial(q));
    let mut quot = vec![0; rem.len() - den.len() + 1];
    for k in (0..quot.len()).rev() {
        let c = rem[k + den.len() - 1] / den[den.len() - 1];
        quot[k] = c;
        for (j, d) in den.iter().enumerate() {
            rem[k + j] -= c * d;
        }
    }
    assert!(rem.iter().all(|&r| r == 0));
    quot
}

fn alexander_consistency() -> Outcome_ {
    for v in 0..=3 {
        let m = closed_form(TwistParams::new(0, v).unwrap()).map_err(|e| e.to_string())?;
        let got = m.presentation.alexander_polynomial().map_err(|e| e.to_string())?;
        let want = LaurentPolynomial::from_coeffs(0, &torus_alexander(3 * v as usize + 2)).normalized();
        ensure(got == want, || format!("v={v}: {got} != {want}"))?;
        if v == 0 {
            ensure(got.to_string() == "t^2 - t + 1", || format!("v=0: {got}"))?;
        }
    }
    Ok("matches T(3, 3v+2) for v=0..3".into())
}

const SEED: u64 = 0x6b6e_6f74;

fn random_word(rng: &mut ChaCha8Rng, gens: &[Generator], max_len: usize) -> Word {
    let n = rng.gen_range(0..=max_len);
    let letters: Vec<(Generator, i8)> = (0..n)
        .map(|_| (gens[rng.gen_range(0..gens.len())].clone(), if rng.gen_bool(0.5) { 1 } else { -1 }))
        .collect();
    Word::from_letters(&letters)
}

fn free_group_axioms(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let gens: Vec<Generator> = ["a", "b", "c"].map(Generator::from).to_vec();
    for i in 0..10_000 {
        let (x, y, z) = (random_word(rng, &gens, 20), random_word(rng, &gens, 20), random_word(rng, &gens, 20));
        let ok = &(&x * &y) * &z == &x * &(&y * &z)
            && (&x * &x.inverse()).is_identity()
            && &x * &Word::identity() == x
            && (&x * &y).inverse() == &y.inverse() * &x.inverse()
            && Word::from_letters(&x.letters()) == x
            && x.is_conjugate(&x.conjugate(&y));
        ensure(ok, || format!("word sample {i}: x={x} y={y} z={z}"))?;
    }
    Ok(())
}

fn tietze_invariance(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let gens: Vec<Generator> = ["a", "b", "c"].map(Generator::from).to_vec();
    for i in 0..1_000 {
        let rels = (0..2).map(|_| random_word(rng, &gens, 12)).collect();
        let base = Presentation::new(gens.clone(), rels).map_err(|e| e.to_string())?;
        let h = base.homology().map_err(|e| e.to_string())?;
        let mut p = base.clone();
        for step in 0..6 {
            let n = p.relators().len();
            let k = rng.gen_range(0..n);
            let w = random_word(rng, p.generators(), 8);
            p = match rng.gen_range(0..5) {
                0 => p.conjugate_relator(k, &w),
                1 => p.invert_relator(k),
                2 => p.cyclically_reduce_relator(k),
                3 => p.add_consequence(&[(k, rng.gen_bool(0.5), w), (rng.gen_range(0..n), false, Word::identity())]),
                _ => p.add_generator(Generator::from(format!("t{step}").as_str()), &w),
            }
            .map_err(|e| e.to_string())?;
        }
        let after = p.homology().map_err(|e| e.to_string())?;
        ensure(after == h, || format!("sequence {i}: {h:?} became {after:?}"))?;
    }
    Ok(())
}

fn shape_invariance() -> Result<(), String> {
    for prm in sweep() {
        let m = closed_form(prm).map_err(|e| e.to_string())?;
        let base = match_it_shape(&m.presentation).map_err(|e| e.to_string())?;
        ensure(!base.is_empty(), || format!("{prm:?}: no shape"))?;
        let letters = m.relator().letters();
        for k in 0..letters.len() {
            let mut rotated = letters.clone();
            rotated.rotate_left(k);
            let w = Word::from_letters(&rotated);
            for r in [w.clone(), w.inverse()] {
                let p = Presentation::from_names(&["a", "b"], vec![r]).map_err(|e| e.to_string())?;
                let got = match_it_shape(&p).map_err(|e| e.to_string())?;
                ensure(got == base, || format!("{prm:?}: rotation {k} changes the shape list"))?;
            }
        }
    }
    Ok(())
}

fn property_suites() -> Outcome_ {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    free_group_axioms(&mut rng)?;
    tietze_invariance(&mut rng)?;
    shape_invariance()?;
    Ok(format!("seed {SEED:#x}: 10000 words, 1000 move sequences, 35 relators"))
}

const CRITERIA: [Criterion; 9] = [
    Criterion { id: 1, name: "fixture exactness", budget: Some(Duration::from_secs(1)), run: fixture_exactness },
    Criterion { id: 2, name: "pipeline equivalence", budget: Some(Duration::from_secs(10)), run: pipeline_equivalence },
    Criterion { id: 3, name: "proof-step verification", budget: None, run: proof_steps },
    Criterion { id: 4, name: "homology", budget: None, run: homology },
    Criterion { id: 5, name: "bound reproduction", budget: None, run: bound_reproduction },
    Criterion { id: 6, name: "positivity gate", budget: None, run: positivity_gate },
    Criterion { id: 7, name: "oracle finiteness", budget: Some(Duration::from_secs(60)), run: oracle_finiteness },
    Criterion { id: 8, name: "alexander consistency", budget: None, run: alexander_consistency },
    Criterion { id: 9, name: "property suites", budget: Some(Duration::from_secs(30)), run: property_suites },
];

fn main() -> ExitCode {
    let mut failed = 0;
    for c in &CRITERIA {
        let start = Instant::now();
        let mut result = (c.run)();
        let elapsed = start.elapsed();
        if let (Ok(_), Some(budget)) = (&result, c.budget) {
            if elapsed > budget {
                result = Err(format!("took {elapsed:.2?}, budget {budget:?}"));
            }
        }
        let (tag, detail) = match &result {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        failed += usize::from(result.is_err());
        println!("{tag} [{}] {} ({:.3} s): {detail}", c.id, c.name, elapsed.as_secs_f64());
    }
    println!("acceptance: {} passed, {failed} failed", CRITERIA.len() - failed);
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
