//! The twelve acceptance criteria, one PASS/FAIL line each. Runs with its
//! own `main` so the lines are always printed.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toric_core::classify::{classify_surface, find_recurrence, ClassifyOptions, Verdict};
use toric_core::degrees::{degree_sequence, degree_sequence_geometric, dynamical_degrees, zeta_residual, MonomialMap};
use toric_core::fourier::{
    bdj_transform, build_surface_plf, build_surface_plf_checked, fourier_closed_form, fourier_quadrature_oracle,
    master_identity_defect, radial_limit_probe, reconstruct_degrees, DEFAULT_RHOS,
};
use toric_core::linalg::{absolute_irreducibility_2x2, IntegerMatrix};
use toric_core::modp::{
    p_kernel_probe, reduce_terms, surface_degrees_mod_p, weak_periodicity_probe, weak_periodicity_search, ProbeVerdict,
};
use toric_core::polytope::{minkowski_sum, mixed_area_sam, mixed_volume_vector, volume, LatticePolytope, ToricDivisor};
use toric_core::semiconj::{find_semiconjugacy, verify_semiconjugacy};
use toric_core::series;

type Check = Result<String, String>;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn standard() -> MonomialMap {
    MonomialMap::from_i64(&[[2, -1], [1, 2]]).unwrap()
}

fn random_invertible(rng: &mut ChaCha8Rng, d: usize, r: i64) -> IntegerMatrix {
    loop {
        let rows: Vec<Vec<i64>> = (0..d).map(|_| (0..d).map(|_| rng.gen_range(-r..=r)).collect()).collect();
        let m = IntegerMatrix::from_i64(&rows);
        if !m.det().is_zero() {
            return m;
        }
    }
}

fn c1_topological_degree() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut cases = Vec::new();
    for _ in 0..50 {
        cases.push(random_invertible(&mut rng, 2, 5));
    }
    for _ in 0..20 {
        cases.push(random_invertible(&mut rng, 3, 5));
    }
    for a in &cases {
        let d = a.dim();
        let seq = degree_sequence_geometric(&MonomialMap::new(a.clone()).unwrap(), &ToricDivisor::o1_projective(d), d, 8)
            .map_err(err)?;
        let det = a.det().abs();
        let mut want = BigInt::one();
        for (n, t) in seq.terms.iter().enumerate() {
            ensure(*t == BigRational::from_integer(want.clone()), format!("A = {a}, n = {n}: {t} != |det|^n"))?;
            want *= &det;
        }
    }
    Ok("50 2x2 and 20 3x3 matrices, n <= 8".into())
}

fn c2_mixed_area() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let polygon = |rng: &mut ChaCha8Rng| loop {
        let k = rng.gen_range(3..=8);
        let pts: Vec<Vec<i64>> = (0..k).map(|_| vec![rng.gen_range(-8..=8), rng.gen_range(-8..=8)]).collect();
        if let Ok(p) = LatticePolytope::from_integer_points(&pts) {
            if p.is_full_dimensional() {
                return p;
            }
        }
    };
    let polys: Vec<LatticePolytope> = (0..100).map(|_| polygon(&mut rng)).collect();
    for i in 0..100 {
        let (p, r) = (&polys[i], &polys[(i + 1) % 100]);
        let interp = mixed_volume_vector(p, r).map_err(err)?.get(1).clone();
        let sam = mixed_area_sam(p, r).map_err(err)?;
        let sum = volume(&minkowski_sum(p, r).map_err(err)?);
        let direct = (sum - volume(p) - volume(r)) / q(2);
        ensure(interp == sam && sam == direct, format!("pair {i}: {interp} / {sam} / {direct}"))?;
    }
    Ok("100 random polygon pairs agree exactly".into())
}

fn c3_rational() -> Check {
    let opts = ClassifyOptions { n_max: 39, max_order: 12, precision: 128, fourier_modes: None };
    let div = ToricDivisor::o1_projective(2);
    let diag = MonomialMap::from_i64(&[[2, 0], [0, 3]]).unwrap();
    let r = classify_surface(&diag, &div, &opts).map_err(err)?;
    ensure(r.verdict == Verdict::Rational, format!("diag(2,3): {:?}", r.verdict))?;
    let f = r.closed_form.ok_or("diag(2,3): no closed form")?;
    let exact = f.numerator.coeffs() == [BigInt::from(1)] && f.denominator.coeffs() == [BigInt::from(1), BigInt::from(-3)];
    ensure(exact, format!("diag(2,3): closed form {f}"))?;
    let seq = degree_sequence(&diag, &div, 1, 39).map_err(err)?;
    ensure(seq.len() == 40 && f.matches(&seq.terms), "diag(2,3): closed form fails on 40 terms")?;
    let rot = MonomialMap::from_i64(&[[1, -1], [1, 1]]).unwrap();
    let r = classify_surface(&rot, &div, &opts).map_err(err)?;
    ensure(r.verdict == Verdict::Rational, format!("[[1,-1],[1,1]]: {:?}", r.verdict))?;
    let u = r.certificate.as_ref().and_then(|c| c.witness_u);
    ensure(u == Some(4), format!("[[1,-1],[1,1]]: witness {u:?}"))?;
    let rec = r.recurrence.ok_or("[[1,-1],[1,1]]: no recurrence")?;
    let seq = degree_sequence(&rot, &div, 1, 39).map_err(err)?;
    ensure(rec.order <= 8 && rec.holds_on(&seq.terms), format!("recurrence of order {}", rec.order))?;
    let g = r.closed_form.ok_or("[[1,-1],[1,1]]: no closed form")?;
    ensure(g.matches(&seq.terms), "[[1,-1],[1,1]]: closed form fails")?;
    Ok(format!("{f}; u = 4, order {} recurrence, closed form {g}", rec.order))
}

fn c4_natural_boundary() -> Check {
    let opts = ClassifyOptions { n_max: 39, max_order: 12, precision: 128, fourier_modes: None };
    let div = ToricDivisor::o1_projective(2);
    let r = classify_surface(&standard(), &div, &opts).map_err(err)?;
    ensure(r.verdict == Verdict::NaturalBoundary, format!("verdict {:?}", r.verdict))?;
    let cert = r.certificate.ok_or("no certificate")?;
    ensure(cert.witness_u.is_none() && cert.table.len() == 5, "a root-of-unity witness was reported")?;
    let dd = dynamical_degrees(&standard(), 128).map_err(err)?;
    let l1 = &dd.lambda[1];
    let gap = (l1.midpoint() - 5f64.sqrt()).abs();
    ensure(gap <= 1e-12 && l1.width() <= 1e-12, format!("λ₁ off by {gap:e}"))?;
    let seq = degree_sequence(&standard(), &div, 1, 39).map_err(err)?;
    let rec = find_recurrence(&seq.terms, 12).map_err(err)?;
    ensure(rec.is_none(), "a recurrence of order <= 12 was found")?;
    Ok(format!("all five u fail, |λ₁ - √5| = {gap:.1e}, no recurrence on 40 terms"))
}

fn c5_master_identity() -> Check {
    let div = ToricDivisor::o1_projective(2);
    let (plane, g) = build_surface_plf_checked(&standard(), &div, 128, 30).map_err(err)?;
    let seq = degree_sequence(&standard(), &div, 1, 30).map_err(err)?;
    let worst = master_identity_defect(&plane, &g, &seq.terms);
    ensure(worst <= 1e-9, format!("defect {worst:e}"))?;
    Ok(format!("max relative defect {worst:.2e} for n <= 30"))
}

fn c6_fourier() -> Check {
    let div = ToricDivisor::o1_projective(2);
    let (plane, g) = build_surface_plf(&standard(), &div).map_err(err)?;
    let mut ev = fourier_closed_form(&g, 50);
    ev.theta = plane.theta;
    ev.lambda1 = plane.lambda1;
    let mut worst = 0f64;
    for m in -50..=50 {
        let quad = fourier_quadrature_oracle(&g, m).map_err(err)?;
        worst = worst.max((quad - ev.coefficient(m).unwrap()).norm());
    }
    ensure(worst <= 1e-8, format!("closed vs quadrature {worst:e}"))?;
    ensure(ev.reality_defect <= 1e-10, format!("reality defect {:e}", ev.reality_defect))?;
    let seq = degree_sequence(&standard(), &div, 1, 30).map_err(err)?;
    let r10 = reconstruct_degrees(&ev, &seq.terms, 10).max_residual;
    let r50 = reconstruct_degrees(&ev, &seq.terms, 50).max_residual;
    ensure(r50 < r10, format!("residual at M = 50 ({r50:e}) not below M = 10 ({r10:e})"))?;
    Ok(format!("quadrature {worst:.1e}, reality {:.1e}, residual {r10:.2e} -> {r50:.2e}", ev.reality_defect))
}

fn c7_radial() -> Check {
    let (plane, g) = build_surface_plf(&standard(), &ToricDivisor::o1_projective(2)).map_err(err)?;
    let mut ev = fourier_closed_form(&g, 0);
    ev.theta = plane.theta;
    ev.lambda1 = plane.lambda1;
    let report = radial_limit_probe(&g, &ev, 0, &DEFAULT_RHOS, 100_000).map_err(err)?;
    let a0 = ev.coefficient(0).unwrap().norm();
    let last = report.estimates.last().ok_or("no estimates")?;
    let rel = last.error / a0;
    ensure(rel <= 0.10, format!("relative error {rel:.3} at ρ = {}", last.rho))?;
    ensure(report.monotone, format!("errors not decreasing: {:?}", report.estimates.iter().map(|e| e.error).collect::<Vec<_>>()))?;
    let errs: Vec<String> = report.estimates.iter().map(|e| format!("{:.1e}", e.error / a0)).collect();
    Ok(format!("relative errors {}", errs.join(" > ")))
}

fn c8_bdj() -> Check {
    let seq = degree_sequence(&standard(), &ToricDivisor::o1_projective(2), 1, 40).map_err(err)?;
    let r = bdj_transform(&seq.terms).map_err(err)?;
    let mut lhs = r.coefficients.clone();
    lhs[0] += BigRational::one();
    let mut rhs: Vec<BigRational> = seq.terms.iter().map(|x| -x.clone()).collect();
    rhs[0] += q(2);
    let prod = series::mul(&lhs, &rhs, seq.len());
    let holds = prod.iter().enumerate().all(|(n, x)| if n == 0 { *x == q(2) } else { x.is_zero() });
    ensure(holds, "(1 + Δ_f)(2 - Δ_φ) != 2")?;
    let est = r.pole.estimate.ok_or("no pole estimate")?;
    let margin = est - 5f64.sqrt();
    ensure(margin > 0.0, format!("estimate {est} does not exceed √5"))?;
    Ok(format!("identity exact to order 40, λ₁(f) ≈ {est:.6}, margin {margin:.4}"))
}

fn c9_zeta() -> Check {
    let seq = degree_sequence(&standard(), &ToricDivisor::o1_projective(2), 1, 30).map_err(err)?;
    let res = zeta_residual(&seq).map_err(err)?;
    ensure(res.len() == 31 && res.iter().all(|x| x.is_zero()), "nonzero residual")?;
    Ok("z ζ'/ζ = Δ - (D^d) exactly to order 30".into())
}

fn c10_modp() -> Check {
    let threes: Vec<BigRational> = (0..400u32).map(|n| BigRational::from_integer(BigInt::from(3).pow(n))).collect();
    let s = reduce_terms(&threes, 7, "3^n".into()).map_err(err)?;
    let w = weak_periodicity_search(&s, 1, 0, 8).map_err(err)?;
    ensure(matches!(w.verdict, ProbeVerdict::Witness { .. }), format!("3^n mod 7: {:?}", w.verdict))?;
    let div = ToricDivisor::o1_projective(2);
    let need = 101 * 101 * 50;
    let s = surface_degrees_mod_p(&standard(), &div, 101, need.max(4002)).map_err(err)?;
    for (a, b) in [(1, 0), (2, 1)] {
        let probe = weak_periodicity_probe(&s, 2000, a, b, 10).map_err(err)?;
        ensure(probe.verdict == ProbeVerdict::Exhausted, format!("(a, b) = ({a}, {b}): {:?}", probe.verdict))?;
    }
    let k = p_kernel_probe(&s, 2, 50).map_err(err)?;
    ensure(k.counts[2] > k.counts[1], format!("kernel counts {:?}", k.counts))?;
    Ok(format!("witness {:?}; exhausted at N = 2000; kernel counts {:?}", w.verdict, k.counts))
}

fn c11_semiconj() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut done = 0;
    while done < 20 {
        let a = random_invertible(&mut rng, 2, 5);
        if !absolute_irreducibility_2x2(&a) {
            continue;
        }
        let mut p = IntegerMatrix::identity(2);
        for _ in 0..rng.gen_range(1..=5) {
            let k = rng.gen_range(-3..=3i64);
            let e = match rng.gen_range(0..3) {
                0 => IntegerMatrix::from_i64(&[[1, k], [0, 1]]),
                1 => IntegerMatrix::from_i64(&[[1, 0], [k, 1]]),
                _ => IntegerMatrix::from_i64(&[[0, 1], [1, 0]]),
            };
            p = &p * &e;
        }
        let ap = &(&p * &a) * &p.inverse_unimodular().map_err(err)?;
        let r = find_semiconjugacy(&a, &ap).map_err(err)?;
        let s = r.result.ok_or(format!("A = {a}, A' = {ap}: nothing found"))?;
        ensure(s.u == 1, format!("A = {a}: u = {}", s.u))?;
        ensure(verify_semiconjugacy(&a, &ap, &s) && &s.x * &a == &ap * &s.x && !s.x.det().is_zero(), format!("A = {a}: X fails"))?;
        done += 1;
    }
    Ok("20 conjugations, u = 1 with X A = A' X".into())
}

fn binary() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_toric-degrees"))
}

fn run(args: &[&str], out: &Path, threads: &str) -> Result<(), String> {
    let status = Command::new(binary())
        .args(args)
        .arg("--out")
        .arg(out)
        .env("TORIC_DEGREES_THREADS", threads)
        .output()
        .map_err(err)?;
    ensure(status.status.success(), format!("{args:?}: {}", String::from_utf8_lossy(&status.stderr)))
}

fn artifacts(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap() != "meta.json")
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

fn c12_determinism() -> Check {
    let base = std::env::temp_dir().join(format!("toric-acceptance-{}", std::process::id()));
    let m = ["--matrix", "[[2,-1],[1,2]]", "--variety", "P2"];
    let runs: Vec<Vec<&str>> = vec![
        [&["degrees"][..], &m, &["--N", "30"]].concat(),
        [&["dyndeg"][..], &m].concat(),
        [&["classify"][..], &m, &["--modes", "20"]].concat(),
        [&["fourier"][..], &m, &["--modes", "20"]].concat(),
        [&["radial"][..], &m, &["--terms", "20000", "--rho", "0.99,0.995"]].concat(),
        [&["bdj"][..], &m, &["--N", "40"]].concat(),
        [&["modp"][..], &m, &["--primes", "7,101", "--N", "200", "--depth", "1", "--window", "20"]].concat(),
        [&["semiconj"][..], &m, &["--Aprime", "[[3,-2],[1,1]]", "--N", "10"]].concat(),
        [&["zeta"][..], &m, &["--N", "30"]].concat(),
    ];
    let mut count = 0;
    for (i, args) in runs.iter().enumerate() {
        let dirs: Vec<PathBuf> = (0..3).map(|j| base.join(format!("{i}-{j}"))).collect();
        for (j, dir) in dirs.iter().enumerate() {
            run(args, dir, ["1", "4", "2"][j])?;
        }
        let first = artifacts(&dirs[0]);
        ensure(first.iter().any(|(n, _)| n == "results.json"), format!("{}: no results.json", args[0]))?;
        for dir in &dirs[1..] {
            ensure(artifacts(dir) == first, format!("{} differs between runs", args[0]))?;
        }
        ensure(dirs[0].join("meta.json").exists(), "no meta.json")?;
        count += first.len();
    }
    let _ = std::fs::remove_dir_all(&base);
    Ok(format!("9 subcommands x 3 runs, {count} artifacts byte-identical"))
}

fn main() {
    let criteria: [(&str, fn() -> Check, Option<u64>); 12] = [
        ("topological-degree identity", c1_topological_degree, Some(60)),
        ("mixed-area triple agreement", c2_mixed_area, Some(30)),
        ("rational cases", c3_rational, Some(60)),
        ("natural-boundary case", c4_natural_boundary, None),
        ("surface master identity", c5_master_identity, Some(120)),
        ("Fourier oracle agreement", c6_fourier, None),
        ("radial-limit probe", c7_radial, Some(60)),
        ("BDJ identity and pole", c8_bdj, None),
        ("zeta consistency", c9_zeta, None),
        ("mod-p probes", c10_modp, None),
        ("semiconjugacy", c11_semiconj, None),
        ("CLI determinism", c12_determinism, None),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, f, limit)) in criteria.iter().enumerate() {
        let id = i + 1;
        if !filter.is_empty() && !filter.iter().any(|x| x == &id.to_string()) {
            continue;
        }
        let t = Instant::now();
        let outcome = f();
        let elapsed = t.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(s)) if elapsed > Duration::from_secs(*s) => Err(format!("took {elapsed:.1?}, limit {s} s")),
            (o, _) => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} criterion {id:>2} {name}: {detail} [{:.2} s]", elapsed.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
