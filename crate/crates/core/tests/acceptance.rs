//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use unlattice::constructive::{kp_disjointify, riesz_decompose, uo_extract};
use unlattice::convergence::{
    in_measure_tail, order_witness_atomic, pointwise_tail, un_tail, un_tail_qip, weak_tail,
    ToleranceSpec, Verdict,
};
use unlattice::diagnostic::evaluate;
use unlattice::gallery::{self, typewriter_cell};
use unlattice::lattice::{
    Element, LatticeVector, MeasureModel, SpaceTag, StepFunction, DEFAULT_HORIZON,
};
use unlattice::sequence::VectorSequence;
use unlattice::topology::{axiom_suite, random_element, random_nonzero, Neighborhood};

type Outcome = Result<String, String>;

fn all_tags() -> Vec<SpaceTag> {
    let skewed = MeasureModel::new(vec![0.5, 0.25, 0.125, 0.125]).unwrap();
    vec![
        SpaceTag::C0,
        SpaceTag::LInftySeq,
        SpaceTag::Lp(1.0),
        SpaceTag::Lp(2.0),
        SpaceTag::Lp(3.5),
        SpaceTag::lp_lebesgue(1.0).unwrap(),
        SpaceTag::lp_lebesgue(2.0).unwrap(),
        SpaceTag::lp_step(1.5, skewed).unwrap(),
        SpaceTag::DirectSumL1Linf,
    ]
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("took {elapsed:?}, limit {limit:?}")
    })
}

fn kp_residuals() -> Outcome {
    let start = Instant::now();
    let seq = gallery::overlap_seq(&SpaceTag::Lp(2.0), 4096).map_err(|e| e.to_string())?;
    let ts = ToleranceSpec::default_for(seq.len());
    let r = kp_disjointify(&seq, 8, &ts).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let scale = r
        .disjoint_parts
        .iter()
        .map(Element::norm)
        .fold(0.0, f64::max);
    for i in 0..r.disjoint_parts.len() {
        for j in (i + 1)..r.disjoint_parts.len() {
            let m = r.disjoint_parts[i].meet_norm(&r.disjoint_parts[j]).unwrap();
            ensure(m <= 1e-12 * scale, || {
                format!("d_{} ^ d_{} has norm {m:e}", i + 1, j + 1)
            })?;
        }
    }
    for (k, res) in r.residual_norms.iter().enumerate() {
        let bound = (0.5f64).powi(k as i32 + 1);
        ensure(*res < bound, || {
            format!("residual {} = {res:e} >= {bound:e}", k + 1)
        })?;
    }
    within(elapsed, Duration::from_secs(5))?;
    Ok(format!(
        "indices {:?}, max residual {:.3e}, {:?}",
        r.selected_indices,
        r.residual_norms.iter().cloned().fold(0.0, f64::max),
        elapsed
    ))
}

fn riesz_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let tags = all_tags();
    let trials = 10_000;
    let mut worst = 0.0f64;
    for t in 0..trials {
        let tag = &tags[t % tags.len()];
        let x = random_element(tag, &mut rng);
        let u = match rng.gen_range(0..3) {
            0 => x.abs().meet(&random_element(tag, &mut rng).abs()).unwrap(),
            1 => x.abs().scale(rng.gen_range(0.0..=1.0)),
            _ => x
                .abs()
                .meet(&x.abs().scale(rng.gen_range(0.0..=1.0)))
                .unwrap(),
        };
        let v = x.abs().sub(&u).unwrap();
        let w = riesz_decompose(&x, &u, &v).map_err(|e| format!("trial {t} ({tag}): {e}"))?;
        let failed = w.failed_identities(&x, &u, &v, 1e-12).unwrap();
        ensure(failed.is_empty(), || {
            format!("trial {t} ({tag}): {failed:?}")
        })?;
        let scale = x.norm().max(u.norm()).max(v.norm());
        if scale > 0.0 {
            let d = w.identity_defects(&x, &u, &v).unwrap();
            worst = d.iter().fold(worst, |m, v| m.max(v / scale));
        }
    }
    Ok(format!(
        "{trials} triples over {} tags, worst relative defect {worst:.1e}",
        tags.len()
    ))
}

fn typewriter_dichotomy() -> Outcome {
    let start = Instant::now();
    let seq = gallery::typewriter(10, 1.0).map_err(|e| e.to_string())?;
    let ts = ToleranceSpec::new(1e-2, 256).unwrap();
    let m = in_measure_tail(&seq, 0.5, &ts).map_err(|e| e.to_string())?;
    for (i, v) in m.values.iter().enumerate() {
        let (k, _) = typewriter_cell(i + 1);
        ensure(*v == (0.5f64).powi(k as i32), || {
            format!("in-measure value {} is {v}", i + 1)
        })?;
    }
    ensure(m.verdict == Verdict::Null, || {
        "in-measure verdict NOT_NULL".into()
    })?;
    let sweep = ToleranceSpec::new(1e-2, 1024).unwrap();
    let p = pointwise_tail(&seq, &sweep).map_err(|e| e.to_string())?;
    let cells = p.cells.as_ref().unwrap();
    ensure(p.cell_level == Some(10) && cells.len() == 1024, || {
        "expected 1024 level-10 cells".into()
    })?;
    ensure(
        cells.iter().all(|c| c.limsup == 1.0 && c.liminf == 0.0),
        || "some cell has limsup != 1 or liminf != 0".into(),
    )?;
    ensure(p.verdict == Verdict::NotNull, || {
        "pointwise verdict NULL".into()
    })?;
    let zero = Element::zero(seq.tag());
    let u = un_tail_qip(&seq, &zero, &ts, DEFAULT_HORIZON, None).map_err(|e| e.to_string())?;
    ensure(u.verdict == Verdict::Null, || "un verdict NOT_NULL".into())?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(10))?;
    Ok(format!("{} terms, {:?}", seq.len(), elapsed))
}

fn gallery_table() -> Outcome {
    let mut checks = 0;
    for entry in gallery::entries() {
        for check in &entry.checks {
            let outcome = evaluate(
                &entry.sequence,
                &check.diagnostic,
                &entry.tolerance,
                DEFAULT_HORIZON,
            )
            .map_err(|e| format!("{} {}: {e}", entry.name, check.diagnostic.kind()))?;
            let status = outcome.status();
            ensure(status == check.expected.to_string(), || {
                format!(
                    "{} {}: {status}, pinned {}",
                    entry.name,
                    check.diagnostic.kind(),
                    check.expected
                )
            })?;
            checks += 1;
        }
    }
    // direct sum: constant value 1 against 0 ⊕ 1
    let seq = gallery::direct_sum_seq(gallery::UNIT_HORIZON);
    let ts = ToleranceSpec::default_for(seq.len());
    let zero = Element::zero(seq.tag());
    let r = un_tail(
        &seq,
        &zero,
        &[gallery::direct_sum_witness(gallery::UNIT_HORIZON)],
        &ts,
    )
    .unwrap();
    ensure(r.values.iter().all(|v| *v == 1.0), || {
        "direct sum values differ from 1".into()
    })?;
    // modulated Rademacher: exact zeros past the functional level, constant ‖x‖
    let base = gallery::rademacher_base();
    let seq = gallery::rademacher_modulated(&base, gallery::RADEMACHER_HORIZON).unwrap();
    let ts = ToleranceSpec::default_for(seq.len());
    let w = weak_tail(&seq, &gallery::rademacher_functionals(), false, &ts).unwrap();
    let cutoff = (gallery::RADEMACHER_FUNCTIONAL_LEVEL + base.level()) as usize;
    ensure(w.values[cutoff..].iter().all(|v| *v == 0.0), || {
        "nonzero pairing past the cutoff".into()
    })?;
    ensure(w.verdict == Verdict::Null, || {
        "weak verdict NOT_NULL".into()
    })?;
    let x: Element = base.into();
    let zero = Element::zero(seq.tag());
    let u = un_tail(&seq, &zero, &[x.clone()], &ts).unwrap();
    ensure(u.values.iter().all(|v| *v == x.norm()), || {
        "un values differ from ‖x‖".into()
    })?;
    ensure(u.verdict == Verdict::NotNull, || "un verdict NULL".into())?;
    Ok(format!(
        "{checks} pinned checks over {} entries",
        gallery::NAMES.len()
    ))
}

fn topology_axioms() -> Outcome {
    let tags = all_tags();
    let samples = 10_000;
    for (i, tag) in tags.iter().enumerate() {
        for r in axiom_suite(tag, samples, 100 + i as u64).map_err(|e| e.to_string())? {
            ensure(r.failures == 0, || {
                format!("{tag} {}: {} failures", r.axiom, r.failures)
            })?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for t in 0..1000 {
        let tag = &tags[t % tags.len()];
        let x = random_nonzero(tag, &mut rng);
        let v = Neighborhood::new(x.abs(), x.norm()).unwrap();
        ensure(!v.contains(&x).unwrap(), || {
            format!("{tag}: x inside V_(|x|,‖x‖)")
        })?;
    }
    Ok(format!(
        "{samples} samples x 5 axioms x {} tags, 1000 separation draws",
        tags.len()
    ))
}

/// Documented linkage: un at tolerance `t` is compared with convergence in
/// measure at threshold `δ = √t` and measure tolerance `√t`.
fn linked(ts: &ToleranceSpec) -> (f64, ToleranceSpec) {
    let root = ts.tol.sqrt();
    (root, ToleranceSpec::new(root, ts.window).unwrap())
}

fn random_step(tag: &SpaceTag, level: u32, rng: &mut ChaCha8Rng) -> StepFunction {
    StepFunction::new(
        tag.clone(),
        (0..1usize << level)
            .map(|_| rng.gen_range(-1.0..=1.0))
            .collect(),
    )
    .unwrap()
}

fn random_step_sequences() -> Vec<VectorSequence> {
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    let l1 = SpaceTag::lp_lebesgue(1.0).unwrap();
    let l2 = SpaceTag::lp_lebesgue(2.0).unwrap();
    let len = 64;
    let mut out = Vec::new();
    for i in 0..100 {
        let tag = if i % 2 == 0 { l1.clone() } else { l2.clone() };
        let terms: Vec<Element> = match i % 3 {
            // geometric decay
            0 => (1..=len)
                .map(|n| {
                    let level = rng.gen_range(0..=4);
                    let f = random_step(&tag, level, &mut rng);
                    let decay = (0.5f64).powi(n as i32);
                    let values = f.values().iter().map(|v| v * decay).collect();
                    StepFunction::new(tag.clone(), values).unwrap().into()
                })
                .collect(),
            // no decay: one cell of size at least 1/16 keeps modulus >= 1/2
            1 => (1..=len)
                .map(|_| {
                    let level = rng.gen_range(0..=4);
                    let f = random_step(&tag, level, &mut rng);
                    let cell = rng.gen_range(0..1usize << level);
                    let mut values = f.values().to_vec();
                    values[cell] = if rng.gen_bool(0.5) { 1.0 } else { -0.5 };
                    StepFunction::new(tag.clone(), values).unwrap().into()
                })
                .collect(),
            // shrinking bumps at random positions (L1 only: the L2 norm of
            // an indicator is the square root of its measure)
            _ => (1..=len)
                .map(|n| {
                    let level = ((n / 3) as u32).min(17);
                    let cell = rng.gen_range(0..1usize << level);
                    StepFunction::indicator(l1.clone(), level, cell)
                        .unwrap()
                        .into()
                })
                .collect(),
        };
        out.push(VectorSequence::from_elements(format!("random_step_{i}"), terms).unwrap());
    }
    out
}

fn un_vs_measure() -> Outcome {
    let mut cases: Vec<(VectorSequence, ToleranceSpec)> = gallery::entries()
        .into_iter()
        .filter(|e| e.sequence.tag().is_step())
        .map(|e| (e.sequence, e.tolerance))
        .collect();
    let gallery_cases = cases.len();
    for seq in random_step_sequences() {
        let ts = ToleranceSpec::new(1e-4, 16).unwrap();
        cases.push((seq, ts));
    }
    let (mut null, mut not_null) = (0, 0);
    for (seq, ts) in &cases {
        let zero = Element::zero(seq.tag());
        let un = un_tail_qip(seq, &zero, ts, DEFAULT_HORIZON, None).map_err(|e| e.to_string())?;
        let (delta, mts) = linked(ts);
        let m = in_measure_tail(seq, delta, &mts).map_err(|e| e.to_string())?;
        ensure(un.verdict == m.verdict, || {
            format!(
                "{}: un {} vs in-measure {}",
                seq.name(),
                un.verdict,
                m.verdict
            )
        })?;
        if un.is_null() {
            null += 1;
        } else {
            not_null += 1;
        }
    }
    Ok(format!(
        "{} sequences ({gallery_cases} gallery), {null} NULL / {not_null} NOT_NULL, 0 disagreements",
        cases.len()
    ))
}

fn lp_seq(terms: Vec<Vec<(usize, f64)>>, name: String) -> VectorSequence {
    let tag = SpaceTag::Lp(2.0);
    let elements = terms
        .into_iter()
        .map(|c| LatticeVector::new(tag.clone(), c).unwrap().into())
        .collect();
    VectorSequence::from_elements(name, elements).unwrap()
}

fn atomic_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5353);
    let len = 1024;
    let ts = ToleranceSpec::default_for(len);
    let zero = Element::zero(&SpaceTag::Lp(2.0));
    let mut un_null = 0;
    let mut not_null = 0;
    for i in 0..120 {
        // un-null: a bump escaping to infinity plus a geometrically decaying
        // part on a fixed support; the extra 20 stay on a few coordinates
        let shift = rng.gen_range(0..100);
        let height = rng.gen_range(0.1..10.0);
        let fixed: Vec<(usize, f64)> = (0..rng.gen_range(1..6))
            .map(|_| (rng.gen_range(1..=50), rng.gen_range(-1.0..=1.0)))
            .collect();
        let period = rng.gen_range(1..=4);
        let terms = (1..=len)
            .map(|n| {
                let decay = (0.5f64).powi(n as i32);
                let mut c: Vec<(usize, f64)> = fixed.iter().map(|&(j, a)| (j, a * decay)).collect();
                if i < 100 {
                    c.push((n + shift, height));
                } else {
                    c.push((1 + n % period, height));
                }
                let mut merged = std::collections::BTreeMap::new();
                for (j, a) in c {
                    *merged.entry(j).or_insert(0.0) += a;
                }
                merged.into_iter().collect()
            })
            .collect();
        let seq = lp_seq(terms, format!("atomic_{i}"));
        let un = un_tail_qip(&seq, &zero, &ts, DEFAULT_HORIZON, None).map_err(|e| e.to_string())?;
        let pw = pointwise_tail(&seq, &ts).map_err(|e| e.to_string())?;
        ensure(un.verdict == pw.verdict, || {
            format!(
                "{}: un {} vs pointwise {}",
                seq.name(),
                un.verdict,
                pw.verdict
            )
        })?;
        if i < 100 {
            ensure(un.is_null(), || format!("{} should be un-null", seq.name()))?;
            un_null += 1;
        } else {
            not_null += 1;
        }
    }
    // order witness on order-bounded norm-null sequences
    let mut witnessed = 0;
    for i in 0..100 {
        let tag = [
            SpaceTag::Lp(1.0),
            SpaceTag::Lp(2.0),
            SpaceTag::C0,
            SpaceTag::LInftySeq,
        ][i % 4]
            .clone();
        let support: Vec<usize> = (0..rng.gen_range(1..10))
            .map(|_| rng.gen_range(1..=64))
            .collect();
        let bound = LatticeVector::new(
            tag.clone(),
            support.iter().map(|&j| (j, rng.gen_range(0.1..=1.0))),
        )
        .unwrap();
        let b = bound.clone();
        let terms: Vec<Element> = (1..=256)
            .map(|n| {
                LatticeVector::new(
                    tag.clone(),
                    b.iter()
                        .map(|(j, u)| (j, u * rng.gen_range(-1.0..=1.0) / n as f64)),
                )
                .unwrap()
                .into()
            })
            .collect();
        let seq = VectorSequence::from_elements(format!("bounded_{i}"), terms).unwrap();
        let w = order_witness_atomic(&seq, &bound.into(), 16)
            .map_err(|e| format!("bounded_{i}: {e}"))?;
        ensure(w.schedule.len() == 16, || {
            format!("bounded_{i}: short schedule")
        })?;
        witnessed += 1;
    }
    Ok(format!(
        "{un_null} un-null + {not_null} non-null l2 sequences agree; {witnessed} order witnesses"
    ))
}

fn uo_subsequence() -> Outcome {
    let seq = gallery::typewriter(10, 1.0).map_err(|e| e.to_string())?;
    let ts = ToleranceSpec::new(1e-2, 256).unwrap();
    let r = uo_extract(&seq, &ts, 8).map_err(|e| e.to_string())?;
    ensure(r.report.verdict == Verdict::Null, || {
        "subsequence not pointwise null".into()
    })?;
    for (k, m) in r.meet_norms.iter().enumerate() {
        let bound = (0.5f64).powi(k as i32 + 1);
        ensure(*m <= bound, || {
            format!("meet {} = {m:e} > {bound:e}", k + 1)
        })?;
    }
    ensure(r.subindices.windows(2).all(|w| w[0] < w[1]), || {
        "indices not increasing".into()
    })?;
    Ok(format!("subsequence {:?}", r.subindices))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("KP residual bound", kp_residuals),
        ("Riesz decomposition", riesz_identities),
        ("typewriter dichotomy", typewriter_dichotomy),
        ("gallery verdict table", gallery_table),
        ("topology axiom suite", topology_axioms),
        ("un vs in-measure cross-check", un_vs_measure),
        ("atomic agreement", atomic_agreement),
        ("uo subsequence extraction", uo_subsequence),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
