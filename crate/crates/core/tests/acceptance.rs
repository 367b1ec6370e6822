//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nlcseq::bounds::{random_baseline, verify_sweep, BoundSpec, SweepOptions, SweepReport};
use nlcseq::complexity::{
    exists_generator, exponent_vectors, joint_nonlinear_complexity, max_order_complexity_fast, ComplexityError,
    ComplexityOptions, GeneratingPolynomial, Status, DEFAULT_BUDGET,
};
use nlcseq::gf::{make_field, prime_power, FieldCtx, FieldElem};
use nlcseq::hermitian::{
    canonical_theta, enumerate_points, generate_hermitian, phi_orbits, plan_hermitian, sigma_orbits, HermitianCurve,
    HermitianMode, HermitianPlan, PoleFunction,
};
use nlcseq::multiseq::{Multisequence, Provenance};
use nlcseq::rational::{generate_rational, plan_rational};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn field(q: u64) -> Arc<FieldCtx> {
    let (p, k) = prime_power(q).expect("prime power");
    Arc::new(make_field(p, k).unwrap())
}

fn hermitian_curve(q: u64) -> Arc<HermitianCurve> {
    let (p, k) = prime_power(q).expect("prime power");
    let ctx = Arc::new(make_field(p, 2 * k).unwrap());
    Arc::new(enumerate_points(ctx, q).unwrap())
}

/// Per-construction summary of a sweep; cells must be exact and satisfied.
struct SweepRun {
    label: String,
    seq: Multisequence,
    report: SweepReport,
}

fn run_sweep(label: String, seq: Multisequence, n_list: &[usize], r_list: &[u32]) -> Result<SweepRun, String> {
    let spec = BoundSpec::for_provenance(seq.provenance()).map_err(|e| format!("{label}: {e}"))?;
    let report =
        verify_sweep(&seq, &spec, n_list, r_list, SweepOptions::default()).map_err(|e| format!("{label}: {e}"))?;
    Ok(SweepRun { label, seq, report })
}

fn judge(runs: &[SweepRun], elapsed: Duration, limit: Duration) -> Check {
    let mut cells = 0;
    for run in runs {
        cells += run.report.rows.len();
        if let Some(row) = run.report.rows.iter().find(|r| r.status != Status::Exact) {
            return Err(format!(
                "{}: n={} r={} not exact (lower bound {})",
                run.label, row.n, row.r, row.value
            ));
        }
        if let Some(row) = run.report.violations().next() {
            return Err(format!(
                "{}: n={} r={} value {} < ceil({}) = {}",
                run.label,
                row.n,
                row.r,
                row.value,
                row.bound.value(),
                row.bound.ceil()
            ));
        }
    }
    ensure(elapsed < limit, || format!("took {elapsed:.1?}, limit {limit:?}"))?;
    Ok(format!("{} configurations, {cells} cells, 0 violations", runs.len()))
}

fn criterion_1(out: &mut Vec<SweepRun>) -> Check {
    let start = Instant::now();
    let mut runs = Vec::new();
    for (q, d, dims) in [(13, 3, [(3, 1), (1, 3)]), (61, 10, [(5, 1), (1, 5)])] {
        for (n_dim, m_blocks) in dims {
            let plan = plan_rational(field(q), d, n_dim, m_blocks).map_err(|e| e.to_string())?;
            let seq = generate_rational(&plan);
            let n_list: Vec<usize> = (2..=d as usize * m_blocks).collect();
            runs.push(run_sweep(
                format!("rational q={q} d={d} N={n_dim} M={m_blocks}"),
                seq,
                &n_list,
                &[1, 2, 3],
            )?);
        }
    }
    let res = judge(&runs, start.elapsed(), Duration::from_secs(60));
    out.extend(runs);
    res
}

fn hermitian_plans(q: u64, mode: HermitianMode, dims: &[(usize, usize)]) -> Result<Vec<HermitianPlan>, String> {
    let curve = hermitian_curve(q);
    dims.iter()
        .map(|&(n, m)| plan_hermitian(curve.clone(), mode, n, m).map_err(|e| e.to_string()))
        .collect()
}

fn criterion_2(out: &mut Vec<SweepRun>) -> Check {
    let start = Instant::now();
    let mut runs = Vec::new();
    for plan in hermitian_plans(5, HermitianMode::Sigma, &[(4, 1), (2, 2), (1, 4)])? {
        let (n_dim, m_blocks) = plan.dims();
        let n_list: Vec<usize> = (2..=(24 * m_blocks).min(30)).collect();
        let seq = generate_hermitian(&plan);
        runs.push(run_sweep(
            format!("sigma q=5 N={n_dim} M={m_blocks}"),
            seq,
            &n_list,
            &[1, 2],
        )?);
    }
    let res = judge(&runs, start.elapsed(), Duration::from_secs(600));
    out.extend(runs);
    res
}

fn criterion_3(out: &mut Vec<SweepRun>) -> Check {
    let start = Instant::now();
    let mut runs = Vec::new();
    for plan in hermitian_plans(3, HermitianMode::Phi, &[(8, 1), (4, 2), (2, 4), (1, 8)])? {
        let (n_dim, m_blocks) = plan.dims();
        let n_list: Vec<usize> = (2..=3 * m_blocks).collect();
        let seq = generate_hermitian(&plan);
        runs.push(run_sweep(
            format!("phi q=3 N={n_dim} M={m_blocks}"),
            seq,
            &n_list,
            &[1, 2],
        )?);
    }
    let res = judge(&runs, start.elapsed(), Duration::from_secs(60));
    out.extend(runs);
    res
}

fn census(orbits: &[Vec<usize>]) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for o in orbits {
        *out.entry(o.len()).or_insert(0) += 1;
    }
    out
}

fn criterion_4() -> Check {
    // x -> alpha x on the q + 1 rational places; place q stands for infinity.
    for (q, d) in [(13u64, 3u64), (13, 2), (13, 4), (61, 10), (61, 6)] {
        let ctx = field(q);
        let alpha = ctx.exp((q - 1) / d);
        ensure(ctx.element_order(alpha).unwrap() == d, || {
            format!("alpha of order {d} in F_{q}")
        })?;
        let act = |i: usize| {
            if i == q as usize {
                i
            } else {
                ctx.mul(alpha, ctx.elem(i as u32)).index() as usize
            }
        };
        let orbits = orbits_of(q as usize + 1, act);
        let expect = BTreeMap::from([(1, 2), (d as usize, ((q - 1) / d) as usize)]);
        ensure(
            orbits.len() as u64 == 2 + (q - 1) / d && census(&orbits) == expect,
            || format!("rational q={q} d={d}: census {:?}", census(&orbits)),
        )?;
    }
    for q in [3u64, 5] {
        let curve = hermitian_curve(q);
        ensure(curve.place_count() as u64 == q * q * q + 1, || {
            format!("q={q}: {} places", curve.place_count())
        })?;
        let sigma = sigma_orbits(&curve, curve.field().primitive()).map_err(|e| e.to_string())?;
        let sizes = census(&sigma.iter().map(|o| vec![0; o.len()]).collect::<Vec<_>>());
        let expect = BTreeMap::from([(1, 1), ((q - 1) as usize, 1), ((q * q - 1) as usize, q as usize)]);
        ensure(sigma.len() as u64 == q + 2 && sizes == expect, || {
            format!("sigma q={q}: census {sizes:?}")
        })?;
    }
    for (q, p) in [(3u64, 3u64), (9, 3)] {
        let curve = hermitian_curve(q);
        let phi = phi_orbits(&curve, canonical_theta(&curve)).map_err(|e| e.to_string())?;
        let sizes = census(&phi.iter().map(|o| vec![0; o.len()]).collect::<Vec<_>>());
        ensure(
            sizes == BTreeMap::from([(p as usize, (q * q * q / p) as usize)]),
            || format!("phi q={q}: census {sizes:?}"),
        )?;
    }
    Ok("rational q in {13, 61}, sigma q in {3, 5}, phi (q,p) in {(3,3), (9,3)}".into())
}

fn orbits_of(size: usize, act: impl Fn(usize) -> usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; size];
    let mut out = Vec::new();
    for start in 0..size {
        if seen[start] {
            continue;
        }
        let mut orbit = vec![start];
        seen[start] = true;
        let mut cur = act(start);
        while cur != start {
            seen[cur] = true;
            orbit.push(cur);
            cur = act(cur);
        }
        out.push(orbit);
    }
    out
}

fn external(ctx: &Arc<FieldCtx>, rows: Vec<Vec<FieldElem>>) -> Multisequence {
    Multisequence::new(ctx.clone(), rows, Provenance::External { label: "oracle".into() }).unwrap()
}

fn random_rows(rng: &mut ChaCha8Rng, ctx: &FieldCtx, m: usize, n: usize) -> Vec<Vec<FieldElem>> {
    (0..m)
        .map(|_| (0..n).map(|_| ctx.elem(rng.gen_range(0..ctx.size()))).collect())
        .collect()
}

fn random_poly(rng: &mut ChaCha8Rng, ctx: &FieldCtx, u: usize, r: u32) -> GeneratingPolynomial {
    let coeffs = exponent_vectors(u, r)
        .map(|e| (e, ctx.elem(rng.gen_range(0..ctx.size()))))
        .collect();
    GeneratingPolynomial::new(u, r, coeffs)
}

/// Rows obeying a random recurrence, or uniform rows, with equal odds.
fn instance(rng: &mut ChaCha8Rng, ctx: &Arc<FieldCtx>, m: usize, n: usize, u: usize, r: u32) -> Multisequence {
    if rng.gen_bool(0.5) {
        let f = random_poly(rng, ctx, u, r);
        let rows = random_rows(rng, ctx, m, u)
            .into_iter()
            .map(|mut row| {
                while row.len() < n {
                    let next = f.eval(ctx, &row[row.len() - u..]);
                    row.push(next);
                }
                row.truncate(n);
                row
            })
            .collect();
        external(ctx, rows)
    } else {
        external(ctx, random_rows(rng, ctx, m, n))
    }
}

fn generates(ctx: &FieldCtx, s: &Multisequence, n: usize, f: &GeneratingPolynomial) -> bool {
    let u = f.arity();
    s.rows()
        .iter()
        .all(|row| (0..n - u).all(|j| f.eval(ctx, &row[j..j + u]) == row[j + u]))
}

/// Every coefficient vector in `F_q^{(r+1)^u}`.
fn exhaustive_exists(ctx: &FieldCtx, s: &Multisequence, n: usize, u: usize, r: u32) -> bool {
    let monos: Vec<Vec<u32>> = exponent_vectors(u, r).collect();
    let q = ctx.size() as u64;
    let total = q.pow(monos.len() as u32);
    (0..total).any(|mut code| {
        let coeffs = monos
            .iter()
            .map(|e| {
                let c = ctx.elem((code % q) as u32);
                code /= q;
                (e.clone(), c)
            })
            .collect();
        generates(ctx, s, n, &GeneratingPolynomial::new(u, r, coeffs))
    })
}

fn criterion_5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut found = 0;
    for i in 0..600 {
        let ctx = field(rng.gen_range(2..=3));
        let u = rng.gen_range(1..=2);
        let m = rng.gen_range(1..=3);
        let n = rng.gen_range(u + 1..=u + 6);
        let s = instance(&mut rng, &ctx, m, n, u, 1);
        let fast = exists_generator(&s, n, u, 1, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        let slow = exhaustive_exists(&ctx, &s, n, u, 1);
        ensure(fast.is_some() == slow, || {
            format!("instance {i}: engine {} vs exhaustive {slow}", fast.is_some())
        })?;
        if let Some(f) = fast {
            ensure(generates(&ctx, &s, n, &f), || {
                format!("instance {i}: returned polynomial does not generate")
            })?;
            found += 1;
        }
    }

    let mut compared = 0;
    let mut attempts = 0;
    while compared < 250 {
        attempts += 1;
        let q = rng.gen_range(2..=3u64);
        let ctx = field(q);
        let m = rng.gen_range(1..=3);
        let n = rng.gen_range(2..=20);
        let u = rng.gen_range(1..=3.min(n - 1));
        let s = instance(&mut rng, &ctx, m, n, u, q as u32 - 1);
        let fast = max_order_complexity_fast(&s, n).map_err(|e| e.to_string())?;
        let linear = if s.prefix_is_zero(n) {
            Some(0)
        } else {
            let mut value = Some(n);
            for u in 1..n {
                match exists_generator(&s, n, u, q as u32 - 1, DEFAULT_BUDGET) {
                    Ok(Some(_)) => {
                        value = Some(u);
                        break;
                    }
                    Ok(None) => {}
                    Err(ComplexityError::BudgetExceeded(_)) => {
                        value = None;
                        break;
                    }
                    Err(e) => return Err(e.to_string()),
                }
            }
            value
        };
        let Some(linear) = linear else { continue };
        let jnc = joint_nonlinear_complexity(&s, n, q as u32 - 1, ComplexityOptions::default())
            .map_err(|e| e.to_string())?
            .value;
        ensure(fast == linear && jnc == linear, || {
            format!("attempt {attempts}: fast {fast}, linear scan {linear}, joint {jnc}")
        })?;
        compared += 1;
        ensure(attempts < 2000, || "too many budget skips".into())?;
    }
    Ok(format!(
        "600 generator instances ({found} with a generator), {compared} max-order comparisons"
    ))
}

fn value(s: &Multisequence, n: usize, r: u32) -> Result<usize, String> {
    joint_nonlinear_complexity(s, n, r, ComplexityOptions::default())
        .map(|c| c.value)
        .map_err(|e| e.to_string())
}

fn criterion_6() -> Check {
    let f2 = field(2);
    let (z, o) = (f2.zero(), f2.one());
    let zeros = external(&f2, vec![vec![z; 5], vec![z; 5]]);
    for r in 1..=3 {
        ensure(value(&zeros, 5, r)? == 0, || "all-zero prefix".into())?;
    }
    let pair = external(&f2, vec![vec![z, o], vec![z, z]]);
    for r in 1..=3 {
        ensure(value(&pair, 2, r)? == 2, || format!("{{(0,1),(0,0)}} at r={r}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let q = rng.gen_range(2..=3u64);
        let ctx = field(q);
        let n = rng.gen_range(2..=12);
        let m = rng.gen_range(1..=2);
        let s = external(&ctx, random_rows(&mut rng, &ctx, m, n));
        let top = value(&s, n, q as u32 - 1)?;
        for r in q as u32..=q as u32 + 3 {
            ensure(value(&s, n, r)? == top, || format!("clamping q={q} r={r}"))?;
        }
    }
    Ok("zero prefix -> 0, {(0,1),(0,0)} -> 2, clamping on 100 instances".into())
}

fn criterion_7() -> Check {
    let f2 = field(2);
    let mut notes = Vec::new();
    for m in [1, 2, 4] {
        for n in [64, 256] {
            let st = random_baseline(&f2, m, n, 1, 100, 42, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
            ensure(st.mean >= 1.0 && st.mean <= n as f64 / 4.0, || {
                format!("m={m} n={n}: mean {}", st.mean)
            })?;
            ensure(st.truncated == 0, || format!("m={m} n={n}: truncated trials"))?;
            notes.push(format!("m={m} n={n} mean={:.2} ln(mn)={:.2}", st.mean, st.ln_mn));
        }
    }
    Ok(notes.join("; "))
}

fn criterion_8(runs: &[SweepRun]) -> Check {
    let mut checked = 0;
    for run in runs {
        for row in &run.report.rows {
            if row.status == Status::Exact && row.value >= 1 && row.value < row.n {
                ensure(row.witness_ok == Some(true), || {
                    format!("{}: n={} r={} witness {:?}", run.label, row.n, row.r, row.witness_ok)
                })?;
                checked += 1;
            }
        }
    }
    // independent replay of a fresh witness per sequence
    for run in runs {
        let n = run.seq.len();
        let res =
            joint_nonlinear_complexity(&run.seq, n, 1, ComplexityOptions::default()).map_err(|e| e.to_string())?;
        if let Some(f) = res.witness {
            let ctx = run.seq.field().clone();
            ensure(generates(&ctx, &run.seq, n, &f), || {
                format!("{}: full-length witness", run.label)
            })?;
        }
    }
    ensure(checked > 0 && !runs.is_empty(), || "no cells from criteria 1-3".into())?;
    Ok(format!("{checked} witnesses replayed"))
}

fn criterion_9() -> Check {
    for q in [2, 3] {
        let curve = hermitian_curve(q);
        for &pole in curve.affine_points() {
            let z = PoleFunction::new(&curve, pole).map_err(|e| e.to_string())?;
            let zeros = curve
                .affine_points()
                .iter()
                .filter(|&&p| z.denominator(p).is_zero())
                .count();
            ensure(zeros == 1, || {
                format!("q={q}: denominator for {pole} vanishes at {zeros} points")
            })?;
        }
    }
    let mut evaluated = 0;
    let plans = hermitian_plans(5, HermitianMode::Sigma, &[(4, 1), (2, 2), (1, 4)])?
        .into_iter()
        .chain(hermitian_plans(
            3,
            HermitianMode::Phi,
            &[(8, 1), (4, 2), (2, 4), (1, 8)],
        )?);
    for plan in plans {
        let curve = plan.curve();
        let z = PoleFunction::new(curve, plan.pole_point()).map_err(|e| e.to_string())?;
        let aut = plan.automorphism();
        for &start in plan.q_grid().iter().flatten() {
            let mut p = start;
            for _ in 0..plan.orbit_len() {
                z.eval(p).map_err(|e| format!("z at {p}: {e}"))?;
                p = curve.apply(&aut, p).map_err(|e| e.to_string())?;
                evaluated += 1;
            }
        }
    }
    Ok(format!(
        "denominators vanish once for q in {{2, 3}}; {evaluated} sequence evaluations defined"
    ))
}

fn main() -> ExitCode {
    let mut runs = Vec::new();
    let mut failed = 0;
    let mut record = |id: u32, title: &str, f: &mut dyn FnMut() -> Check| {
        let start = Instant::now();
        let res = f();
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("PASS criterion {id} {title}: {detail} [{secs:.2}s]"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {id} {title}: {why} [{secs:.2}s]");
            }
        }
    };
    record(1, "rational bounds", &mut || criterion_1(&mut runs));
    record(2, "hermitian sigma bounds", &mut || criterion_2(&mut runs));
    record(3, "hermitian phi bounds", &mut || criterion_3(&mut runs));
    record(4, "orbit censuses", &mut criterion_4);
    record(5, "oracle equivalence", &mut criterion_5);
    record(6, "definition edge cases", &mut criterion_6);
    record(7, "random baseline", &mut criterion_7);
    record(8, "witness integrity", &mut || criterion_8(&runs));
    record(9, "pole function", &mut criterion_9);
    if failed == 0 {
        println!("acceptance: all 9 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
