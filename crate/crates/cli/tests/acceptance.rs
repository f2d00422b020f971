//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::io::Write;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde_json::json;

use qroot::canonical::{
    canonicalize_pair, materialize_pair, segre_characteristic_default, CanonicalBlock, CanonicalSpec, Sign, Tolerances,
};
use qroot::json;
use qroot::linalg::{self, CMat};
use qroot::omega::{omega_embed, omega_to_quat, OmegaMatrix};
use qroot::roots::{mth_root, root_exists, CertificateKind, MTuple, RootOptions, RootOutcome};
use qroot::verify::{power_segre_oracle, random_instance, verify_root, EigenClass, Force, Profile};
use qroot::{QuatMatrix, Quaternion};

const LAW_TOL: f64 = 1e-12;
const RESIDUAL_TOL: f64 = 1e-8;
/// "Zero at double precision": a few units in the last place.
const EXACT_TOL: f64 = 4.0 * f64::EPSILON;
/// Eigenvalues come back from a numerical Schur form; sizes and signs are compared exactly.
const LAMBDA_TOL: f64 = 1e-6;

type Check = fn() -> Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn gaussian_quat(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> QuatMatrix {
    QuatMatrix::from_fn(rows, cols, |_, _| {
        Quaternion::new(
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        )
    })
}

fn rel(x: &CMat, y: &CMat) -> f64 {
    linalg::frobenius(&(x - y)) / linalg::frobenius(y).max(f64::MIN_POSITIVE)
}

fn embed(a: &QuatMatrix) -> Result<CMat, String> {
    omega_embed(a).map(OmegaMatrix::into_matrix).map_err(err)
}

fn omega_laws() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut worst = [0.0f64; 4];
    for case in 0..200 {
        let n = 1 + case % 6;
        let a = gaussian_quat(&mut rng, n, n);
        let b = gaussian_quat(&mut rng, n, n);
        let (wa, wb) = (embed(&a)?, embed(&b)?);

        let prod = rel(&embed(&a.try_mul(&b).map_err(err)?)?, &(&wa * &wb));
        let sum = rel(&embed(&(&a + &b))?, &(&wa + &wb));
        let adj = rel(&embed(&a.adjoint())?, &wa.adjoint());
        let inv = rel(&embed(&a.inverse().map_err(err)?)?, &linalg::inverse(&wa).map_err(err)?);
        worst[0] = worst[0].max(prod.max(sum));
        worst[1] = worst[1].max(adj);
        worst[2] = worst[2].max(inv);

        // Hermitian in quaternion form exactly when the image is Hermitian.
        let s = &a + &a.adjoint();
        let ws = embed(&s)?;
        let herm = rel(&ws.adjoint(), &ws);
        worst[3] = worst[3].max(herm);
        ensure(a.hermitian_residual() > LAW_TOL, || format!("case {case}: random A looks Hermitian"))?;
        ensure(rel(&wa.adjoint(), &wa) > LAW_TOL, || format!("case {case}: image of non-Hermitian A is Hermitian"))?;
    }
    ensure(worst.iter().all(|&w| w <= LAW_TOL), || format!("worst errors {worst:?} exceed {LAW_TOL:e}"))?;
    Ok(format!(
        "200 pairs, max rel err: mul/add {:.1e}, adjoint {:.1e}, inverse {:.1e}, hermitian {:.1e}",
        worst[0], worst[1], worst[2], worst[3]
    ))
}

fn power_oracle() -> Result<String, String> {
    let mut cases = 0;
    for k in 1..=12usize {
        for m in 1..=6usize {
            let got = power_segre_oracle(k, m).map_err(err)?;
            // J_k(0)^m has its j-th power of rank max(0, k − jm); the parts ≥ j number rank_{j−1} − rank_j.
            let rank = |j: usize| k.saturating_sub(j * m);
            let mut expect = Vec::new();
            for j in 1..=k {
                let at_least = rank(j - 1) - rank(j);
                let at_least_next = rank(j) - rank(j + 1);
                expect.extend(std::iter::repeat_n(j, at_least - at_least_next));
            }
            expect.sort_unstable_by(|a, b| b.cmp(a));
            ensure(got.parts == expect, || format!("k = {k}, m = {m}: {:?} vs {expect:?}", got.parts))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} cases agree exactly"))
}

fn all_classes() -> Vec<EigenClass> {
    vec![EigenClass::Positive, EigenClass::Nonreal, EigenClass::Negative, EigenClass::Zero]
}

fn canonical_round_trip() -> Result<String, String> {
    let profile = Profile { classes: all_classes(), max_size: 12, m: 2, force: Force::Any };
    let tol = Tolerances::default();
    let mut worst: f64 = 0.0;
    for seed in 0..100u64 {
        let inst = random_instance(seed, &profile).map_err(err)?;
        ensure(inst.spec.half_dim() <= 12, || format!("seed {seed}: spec too large"))?;
        let out = canonicalize_pair(&omega_embed(&inst.b).map_err(err)?, &omega_embed(&inst.h).map_err(err)?, &tol)
            .map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(out.spec.matches(&inst.spec, LAMBDA_TOL), || {
            format!("seed {seed}: got {:?}, drew {:?}", out.spec.sorted(), inst.spec.sorted())
        })?;
        ensure(out.spec.is_sorted(), || format!("seed {seed}: output not in canonical order"))?;
        worst = worst.max(out.residual_similarity).max(out.residual_congruence);
        ensure(worst <= RESIDUAL_TOL, || format!("seed {seed}: residual {worst:.2e}"))?;
    }
    Ok(format!("100 specs recovered, max similarity residual {worst:.1e}"))
}

fn unconditional_existence() -> Result<String, String> {
    let classes = [EigenClass::Positive, EigenClass::Nonreal, EigenClass::Negative];
    let mut worst: f64 = 0.0;
    for i in 0..100u64 {
        let class = classes[(i % 3) as usize];
        let m = match class {
            EigenClass::Negative => [3, 5, 7][(i / 3 % 3) as usize],
            _ => 2 + (i / 3 % 5) as usize,
        };
        let profile = Profile { classes: vec![class], max_size: 12, m, force: Force::Any };
        let inst = random_instance(1000 + i, &profile).map_err(err)?;
        let r =
            match mth_root(&inst.b, &inst.h, m, &RootOptions::default()).map_err(|e| format!("instance {i}: {e}"))? {
                RootOutcome::Root(r) => r,
                RootOutcome::NoRoot(d) => return Err(format!("instance {i} ({class:?}, m = {m}) refused: {d:?}")),
            };
        let rep = verify_root(&r.root_quaternion(), &inst.b, &inst.h, m, RESIDUAL_TOL).map_err(err)?;
        ensure(rep.passed, || format!("instance {i}: {rep:?}"))?;
        worst = worst.max(rep.residual_power).max(rep.residual_selfadjoint);
    }
    Ok(format!("100 instances rooted and verified, max residual {worst:.1e}"))
}

fn qroot(args: &[&str], input: &str) -> Result<(i32, String), String> {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qroot"))
        .args(args)
        .env_remove("QROOT_TOL")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(err)?;
    child.stdin.take().expect("piped").write_all(input.as_bytes()).map_err(err)?;
    let out = child.wait_with_output().map_err(err)?;
    Ok((out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).map_err(err)?))
}

fn quat_diag(d: &[f64]) -> QuatMatrix {
    QuatMatrix::diag(&d.iter().map(|&x| Quaternion::real(x)).collect::<Vec<_>>())
}

fn pair_json(b: &QuatMatrix, h: &QuatMatrix) -> String {
    json::to_string(&json::instance_value(b, h, Default::default()))
}

fn negative_even_gate() -> Result<String, String> {
    let minus = quat_diag(&[-1.0, -1.0]);
    let (code, out) = qroot(&["check", "--m", "2"], &pair_json(&minus, &quat_diag(&[1.0, 1.0])))?;
    let v = json::parse(&out).map_err(err)?;
    ensure(code == 2 && v["certificate"]["kind"] == "NegativeSignPairing", || format!("check gave {code}: {out}"))?;
    let (code, _) = qroot(&["root", "--m", "2"], &pair_json(&minus, &quat_diag(&[1.0, 1.0])))?;
    ensure(code == 2, || format!("root on H = I exited {code}"))?;

    let h = quat_diag(&[1.0, -1.0]);
    let (code, out) = qroot(&["root", "--m", "2"], &pair_json(&minus, &h))?;
    ensure(code == 0, || format!("root exited {code}: {out}"))?;
    let v = json::parse(&out).map_err(err)?;
    let (rp, rs) =
        (v["residual_power"].as_f64().unwrap_or(f64::NAN), v["residual_selfadjoint"].as_f64().unwrap_or(f64::NAN));
    ensure(rp <= EXACT_TOL && rs <= EXACT_TOL, || format!("residuals {rp:e} / {rs:e}"))?;
    let (code, rep) = qroot(&["verify"], &out)?;
    ensure(code == 0, || format!("verify of returned root exited {code}: {rep}"))?;

    let i = Quaternion::I;
    let reference = QuatMatrix::from_row_major(2, 2, vec![Quaternion::ZERO, i, i, Quaternion::ZERO]).map_err(err)?;
    let rep = verify_root(&reference, &minus, &h, 2, RESIDUAL_TOL).map_err(err)?;
    ensure(rep.passed && rep.residual_power == 0.0 && rep.residual_selfadjoint == 0.0, || format!("{rep:?}"))?;
    let mut doc = json::parse(&pair_json(&minus, &h)).map_err(err)?;
    doc["root"] = json::quat_matrix_value(&reference);
    doc["m"] = json!(2);
    let (code, _) = qroot(&["verify"], &json::to_string(&doc))?;
    ensure(code == 0, || format!("CLI verify of the reference root exited {code}"))?;
    Ok(format!("H = I refused; H = diag(1,-1) rooted with residuals {rp:.1e} / {rs:.1e}; reference root verifies"))
}

/// `(Y⁻¹ B Y, Y* H Y)` for a fixed well-conditioned quaternion `Y`.
fn scramble(spec: &CanonicalSpec, seed: u64) -> Result<(QuatMatrix, QuatMatrix), String> {
    let (bc, hc) = materialize_pair(spec).map_err(err)?;
    let (bc, hc) = (omega_to_quat(&bc), omega_to_quat(&hc));
    let n = bc.n_rows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = gaussian_quat(&mut rng, n, n).scale(0.3 / (n as f64).sqrt());
    let y = &QuatMatrix::identity(n) + &g;
    let sv = linalg::singular_values(&embed(&y)?);
    let cond = sv[0] / sv[sv.len() - 1];
    ensure(cond <= 100.0, || format!("scrambler condition {cond:.1e}"))?;
    let yi = y.inverse().map_err(err)?;
    let b = yi.try_mul(&bc).and_then(|t| t.try_mul(&y)).map_err(err)?;
    let h = y.adjoint().try_mul(&hc).and_then(|t| t.try_mul(&y)).map_err(err)?;
    let h = (&h + &h.adjoint()).scale(0.5);
    Ok((b, h))
}

fn root_of(b: &QuatMatrix, h: &QuatMatrix, m: usize) -> Result<QuatMatrix, String> {
    match mth_root(b, h, m, &RootOptions::default()).map_err(err)? {
        RootOutcome::Root(r) => Ok(r.root_quaternion()),
        RootOutcome::NoRoot(d) => Err(format!("refused: {d:?}")),
    }
}

fn nilpotent_example() -> Result<String, String> {
    let m = 4;
    let tuple = MTuple::with_rule(2, 2, Sign::Plus, m);
    let blocks: Vec<CanonicalBlock> =
        tuple.blocks().into_iter().map(|(k, s)| CanonicalBlock::real(0.0, k, s)).collect();
    let spec = CanonicalSpec::new(blocks);
    let mut sizes: Vec<usize> = spec.blocks.iter().map(|b| b.size).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    ensure(sizes == [3, 3, 2, 2], || format!("unexpected spec {sizes:?}"))?;
    ensure(root_exists(&spec, m).map_err(err)?.exists, || "gate refuses the admissible signs".into())?;

    let (b, h) = scramble(&spec, 0x5eed_0006)?;
    let a = root_of(&b, &h, m)?;
    let segre = segre_characteristic_default(&embed(&a)?, Complex64::new(0.0, 0.0)).map_err(err)?;
    ensure(segre.parts == [10, 10], || format!("root Segre {:?}", segre.parts))?;
    let rep = verify_root(&a, &b, &h, m, RESIDUAL_TOL).map_err(err)?;
    ensure(rep.passed, || format!("{rep:?}"))?;
    Ok(format!("root Segre {:?} at the complex level, residual {:.1e}", segre.parts, rep.residual_power))
}

fn sign_rule_gate() -> Result<String, String> {
    let m = 2;
    let bad =
        CanonicalSpec::new(vec![CanonicalBlock::real(0.0, 2, Sign::Plus), CanonicalBlock::real(0.0, 1, Sign::Minus)]);
    let d = root_exists(&bad, m).map_err(err)?;
    let kind = d.certificate.as_ref().map(|c| c.kind);
    ensure(!d.exists && kind == Some(CertificateKind::SignPatternViolation), || format!("{d:?}"))?;

    let good =
        CanonicalSpec::new(vec![CanonicalBlock::real(0.0, 2, Sign::Plus), CanonicalBlock::real(0.0, 1, Sign::Plus)]);
    ensure(root_exists(&good, m).map_err(err)?.exists, || "flipped spec refused".into())?;
    let (b, h) = scramble(&good, 0x5eed_0007)?;
    let a = root_of(&b, &h, m)?;
    let rep = verify_root(&a, &b, &h, m, RESIDUAL_TOL).map_err(err)?;
    ensure(rep.passed, || format!("{rep:?}"))?;
    Ok(format!(
        "(2,+),(1,-) refused with SignPatternViolation; (2,+),(1,+) rooted, residual {:.1e}",
        rep.residual_power
    ))
}

fn determinism() -> Result<String, String> {
    let twice = |args: &[&str], input: &str| -> Result<(i32, String), String> {
        let first = qroot(args, input)?;
        let second = qroot(args, input)?;
        ensure(first == second, || format!("{args:?} differs between runs"))?;
        Ok(first)
    };
    let (_, gen) = twice(&["gen", "--m", "2", "--seed", "7"], "")?;
    twice(&["gen", "--m", "3", "--seed", "8", "--format", "omega"], "")?;
    let (_, embedded) = twice(&["embed"], &gen)?;
    twice(&["extract"], &embedded)?;
    twice(&["canon"], &gen)?;
    twice(&["check", "--m", "2"], &gen)?;
    let spec = json::to_string(&json::parse(&gen).map_err(err)?["spec"]);
    twice(&["check", "--m", "2", "--format", "spec"], &spec)?;
    let (code, root) = twice(&["root", "--m", "2"], &gen)?;
    ensure(code == 0, || format!("root of an admissible instance exited {code}"))?;
    twice(&["root", "--m", "2", "--format", "omega"], &embedded)?;
    let (code, _) = twice(&["verify"], &root)?;
    ensure(code == 0, || format!("verify exited {code}"))?;
    twice(&["root", "--m", "2"], "not json")?;
    Ok("gen, embed, extract, canon, check, root, verify: byte-identical reruns".into())
}

fn main() {
    let criteria: [(&str, Check, Option<Duration>); 8] = [
        ("omega isomorphism laws", omega_laws, Some(Duration::from_secs(5))),
        ("power Segre oracle", power_oracle, Some(Duration::from_secs(5))),
        ("canonical round trip", canonical_round_trip, Some(Duration::from_secs(60))),
        ("unconditional existence", unconditional_existence, Some(Duration::from_secs(60))),
        ("negative-even gate", negative_even_gate, None),
        ("nilpotent example", nilpotent_example, None),
        ("sign-rule gate", sign_rule_gate, None),
        ("determinism", determinism, None),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let result = match (result, limit) {
            (Ok(_), Some(l)) if elapsed > *l => Err(format!("took {elapsed:.2?}, limit {l:?}")),
            (r, _) => r,
        };
        match result {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail} [{elapsed:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why} [{elapsed:.2?}]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
