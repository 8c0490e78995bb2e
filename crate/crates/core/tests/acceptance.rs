//! Acceptance suite: one PASS/FAIL line per criterion, tolerances fixed here.
//! Run with `cargo test -p sphole --test acceptance`.

#[path = "common/mod.rs"]
mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sphole::bounds::{BoundEvaluator, BoundResult, CaseLabel};
use sphole::experiment::{run_sweep, write_csv, SweepSpec};
use sphole::geometry::SphericalPoint;
use sphole::{
    build_cech2, build_rips2, check_inclusion, classify, estimate, rips_threshold, sample_cap_poisson, Cap,
    HoleEstimates, NetworkConfig,
};

const SEED: u64 = 0x5EED_2024;
const RS: f64 = 10.0;
const ORDER: usize = 64;

// criterion 1
const CASE1_CONFIGS: usize = 10;
const CASE1_TRIALS: u64 = 100_000;
// criteria 2-5, 7
const GRID_TRIALS: u64 = 1_000_000;
const SANDWICH_SIGMAS: f64 = 2.0;
const SANDWICH_SLACK: f64 = 0.005;
const MAX_MC_MINUS_LOWER: f64 = 0.008;
const MAX_UPPER_MINUS_MC: f64 = 0.035;
const ANCHOR_RANGE: (f64, f64) = (0.04, 0.06);
const GAMMA2_MAX_UPPER: f64 = 0.001;
// criterion 6
const MAX_LOWER_RADIUS_DELTA: f64 = 0.0007;
const MAX_UPPER_RADIUS_DELTA: f64 = 0.0013;
// criterion 7
const SECOND_CASE_MAX: f64 = 0.002;
// criterion 8
const LEMMA_SETS: u64 = 1000;
const LEMMA_PAIRS: [(f64, f64); 5] = [(10.0, 100.0), (10.0, 50.0), (5.0, 500.0), (20.0, 200.0), (3.0, 1000.0)];
const CECH_BAND: f64 = 1e-3;
// criterion 9
const MAX_QUAD_ERROR: f64 = 1e-4;

const SANDWICH_GAMMAS: [f64; 3] = [2.0, 2.4, 3.0];
const SANDWICH_LAMBDAS: [f64; 5] = [0.002, 0.006, 0.010, 0.014, 0.018];

type Key = (u64, u64, u64);

fn key(gamma: f64, factor: f64, lambda: f64) -> Key {
    (gamma.to_bits(), factor.to_bits(), lambda.to_bits())
}

fn cfg(gamma: f64, factor: f64, lambda: f64) -> NetworkConfig {
    NetworkConfig::new(factor * RS, RS, gamma * RS, lambda).unwrap()
}

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, id: u32, pass: bool, what: &str, detail: String) {
        println!("[{}] criterion {id}: {what} -- {detail}", if pass { "PASS" } else { "FAIL" });
        self.failures += usize::from(!pass);
    }
}

/// First-case bounds (no second-case term) for every default-grid point and
/// every extra intensity requested, one geometry at a time.
fn bound_table(spec: &SweepSpec, extra: &[f64]) -> BTreeMap<Key, BoundResult> {
    let mut out = BTreeMap::new();
    let mut lambdas = spec.lambdas.clone();
    lambdas.extend_from_slice(extra);
    for &f in &spec.radius_factors {
        for &g in &spec.gammas {
            let eval = BoundEvaluator::new(&cfg(g, f, 0.0), ORDER).unwrap();
            for &l in &lambdas {
                out.insert(key(g, f, l), eval.evaluate(l, 0.0).unwrap());
            }
        }
    }
    out
}

fn with_second(b: &BoundResult, second: f64) -> f64 {
    if b.case == CaseLabel::Case1 {
        0.0
    } else {
        (b.upper + second).min(1.0)
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut report = Report { failures: 0 };
    let spec = SweepSpec::default();

    // 1. Case 1 exactness
    {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let mut worst = (0.0f64, 0u64);
        let mut ok = true;
        for i in 0..CASE1_CONFIGS {
            let rs = rng.random_range(5.0..15.0);
            let radius = rs * rng.random_range(5.0..100.0);
            let thr = rips_threshold(rs, radius).unwrap();
            let rc = thr * rng.random_range(0.3..=1.0);
            let lambda = rng.random_range(0.001..0.03) * (10.0 / rs).powi(2);
            let c = NetworkConfig::new(radius, rs, rc, lambda).unwrap();
            let b = BoundEvaluator::new(&c, 8).unwrap().evaluate(lambda, 0.0016).unwrap();
            let mc = estimate(&c, CASE1_TRIALS, SEED + i as u64).unwrap();
            ok &= classify(&c).unwrap() == CaseLabel::Case1 && b.lower == 0.0 && b.upper == 0.0;
            ok &= mc.hole.hits == 0 && mc.second_case.hits == 0;
            worst.0 = worst.0.max(b.upper);
            worst.1 = worst.1.max(mc.hole.hits);
        }
        report.line(
            1,
            ok,
            "Case 1 bounds and hits are zero",
            format!("{CASE1_CONFIGS} configs x {CASE1_TRIALS} trials, max upper {}, max hits {}", worst.0, worst.1),
        );
    }

    // grid bounds and Monte Carlo at R = 10 R_s
    let t = Instant::now();
    let bounds = bound_table(&spec, &[0.009]);
    eprintln!("bound tables: {:.0?}", t.elapsed());
    let t = Instant::now();
    let mut mc: BTreeMap<Key, HoleEstimates> = BTreeMap::new();
    let mut mc_lambdas: Vec<f64> = spec.lambdas.clone();
    mc_lambdas.extend(SANDWICH_LAMBDAS);
    mc_lambdas.push(0.009);
    mc_lambdas.sort_by(f64::total_cmp);
    mc_lambdas.dedup();
    for &g in &spec.gammas {
        for &l in &mc_lambdas {
            let e = estimate(&cfg(g, 10.0, l), GRID_TRIALS, SEED).unwrap();
            mc.insert(key(g, 10.0, l), e);
        }
    }
    eprintln!("monte carlo: {:.0?}", t.elapsed());

    // 2-4. sandwich and tightness
    {
        let mut violations = Vec::new();
        let (mut gap_lo, mut gap_up) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for &g in &SANDWICH_GAMMAS {
            for &l in &SANDWICH_LAMBDAS {
                let b = &bounds[&key(g, 10.0, l)];
                let e = &mc[&key(g, 10.0, l)];
                let p = e.hole.p_hat;
                let upper = with_second(b, e.second_case.p_hat);
                let s = SANDWICH_SIGMAS * e.hole.stderr;
                if !(b.lower - s <= p && p <= upper + s + SANDWICH_SLACK) {
                    violations.push(format!("(g={g}, l={l}: {:.5} <= {p:.5} <= {upper:.5})", b.lower));
                }
                gap_lo = gap_lo.max(p - b.lower);
                gap_up = gap_up.max(upper - p);
            }
        }
        report.line(
            2,
            violations.is_empty(),
            "lower - 2se <= p_hat <= upper + 2se + 0.005",
            format!("15 points x {GRID_TRIALS} trials, violations {violations:?}"),
        );
        report.line(
            3,
            gap_lo <= MAX_MC_MINUS_LOWER,
            "max(p_hat - lower) <= 0.008",
            format!("max {gap_lo:.5}"),
        );
        report.line(
            4,
            gap_up <= MAX_UPPER_MINUS_MC,
            "max(upper - p_hat) <= 0.035",
            format!("max {gap_up:.5}"),
        );
    }

    // 5. planning anchors, upper bound with the simulated second-case term
    {
        let b = &bounds[&key(3.0, 10.0, 0.009)];
        let u3 = with_second(b, mc[&key(3.0, 10.0, 0.009)].second_case.p_hat);
        let u2 = spec
            .lambdas
            .iter()
            .map(|&l| with_second(&bounds[&key(2.0, 10.0, l)], mc[&key(2.0, 10.0, l)].second_case.p_hat))
            .fold(0.0, f64::max);
        report.line(
            5,
            (ANCHOR_RANGE.0..=ANCHOR_RANGE.1).contains(&u3) && u2 <= GAMMA2_MAX_UPPER,
            "upper(g=3, l=0.009) in [0.04, 0.06]; max upper(g=2) <= 0.001",
            format!("upper(g=3, l=0.009) = {u3:.5}, max upper(g=2) = {u2:.5}"),
        );
    }

    // 6. radius invariance of the quadrature bounds
    {
        let (mut dl, mut du) = (0.0f64, 0.0f64);
        for &g in &spec.gammas {
            for &l in &spec.lambdas {
                let a = &bounds[&key(g, 5.0, l)];
                let b = &bounds[&key(g, 100.0, l)];
                dl = dl.max((a.lower - b.lower).abs());
                du = du.max((a.upper - b.upper).abs());
            }
        }
        report.line(
            6,
            dl <= MAX_LOWER_RADIUS_DELTA && du <= MAX_UPPER_RADIUS_DELTA,
            "|bound(R=5Rs) - bound(R=100Rs)| <= 0.0007 / 0.0013",
            format!("max lower delta {dl:.6}, max upper delta {du:.6}"),
        );
    }

    // 7. second-case ceiling
    {
        let (worst, at) = spec
            .gammas
            .iter()
            .flat_map(|&g| spec.lambdas.iter().map(move |&l| (g, l)))
            .map(|(g, l)| (mc[&key(g, 10.0, l)].second_case.p_hat, (g, l)))
            .fold((0.0, (0.0, 0.0)), |a, b| if b.0 > a.0 { b } else { a });
        report.line(
            7,
            worst <= SECOND_CASE_MAX,
            "second-case probability <= 0.002 for R_c <= 3 R_s",
            format!("max {worst:.5} at (gamma, lambda) = {at:?}, {GRID_TRIALS} trials each"),
        );
    }

    // 8. inclusion chain and Čech triangles against the common-point oracle
    {
        let t = Instant::now();
        let (mut inclusion_fail, mut cech_fail, mut triangles, mut banded) = (0, 0, 0u64, 0u64);
        for (p, &(rs, radius)) in LEMMA_PAIRS.iter().enumerate() {
            let thr = rips_threshold(rs, radius).unwrap();
            let cap = Cap::new(SphericalPoint::POLE, 4.0 * rs / radius).unwrap();
            // about 15 nodes per set
            let lambda = 15.0 / cap.area(radius);
            for s in 0..LEMMA_SETS {
                let nodes = sample_cap_poisson(lambda, &cap, radius, SEED + 10_000 * p as u64 + s);
                let cech = build_cech2(&nodes, rs, radius).unwrap();
                let low = build_rips2(&nodes, 0.99 * thr, radius);
                let high = build_rips2(&nodes, 2.0 * rs, radius);
                if !(check_inclusion(&low, &cech).unwrap() && check_inclusion(&cech, &high).unwrap()) {
                    inclusion_fail += 1;
                }
                let u = nodes.units();
                for &(i, j, k) in &high.triangles {
                    triangles += 1;
                    let r = common::min_common_radius(&[u[i], u[j], u[k]]) * radius;
                    if (r - rs).abs() <= CECH_BAND * rs {
                        banded += 1;
                        continue;
                    }
                    if cech.triangles.contains(&(i, j, k)) != (r <= rs) {
                        cech_fail += 1;
                    }
                }
            }
        }
        report.line(
            8,
            inclusion_fail == 0 && cech_fail == 0,
            "Rips(0.99 thr) <= Cech(Rs) <= Rips(2Rs); Cech triangles match oracle",
            format!(
                "{} sets, inclusion violations {inclusion_fail}, triangle mismatches {cech_fail} of {triangles} ({banded} in band) [{:.0?}]",
                LEMMA_SETS * LEMMA_PAIRS.len() as u64,
                t.elapsed()
            ),
        );
    }

    // 9. quadrature stability on the default grid
    {
        let (worst, at) = bounds
            .iter()
            .map(|(k, b)| (b.quad_error, *k))
            .fold((0.0, key(0.0, 0.0, 0.0)), |a, b| if b.0 > a.0 { b } else { a });
        report.line(
            9,
            worst < MAX_QUAD_ERROR,
            "bounds change < 1e-4 from 64 to 128 nodes per level",
            format!(
                "max change {worst:.2e} at (gamma, factor, lambda) = ({}, {}, {})",
                f64::from_bits(at.0),
                f64::from_bits(at.1),
                f64::from_bits(at.2)
            ),
        );
    }

    // 10. sweep CSV determinism across runs and worker counts
    {
        let small = SweepSpec {
            gammas: vec![2.0, 3.0],
            lambdas: vec![0.004, 0.01],
            radius_factors: vec![10.0],
            trials: 50_000,
            quad_order: 16,
            ..SweepSpec::default()
        };
        let csv = |workers: usize| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().unwrap();
            let rows = pool.install(|| run_sweep(&small)).unwrap();
            let mut buf = Vec::new();
            write_csv(&rows, &mut buf).unwrap();
            buf
        };
        let runs = [csv(1), csv(1), csv(4), csv(4)];
        let same = runs.windows(2).all(|w| w[0] == w[1]);
        report.line(
            10,
            same,
            "sweep CSV byte-identical across runs and workers {1, 4}",
            format!("{} bytes per run", runs[0].len()),
        );
    }

    println!("acceptance: {} failure(s) in {:.0?}", report.failures, start.elapsed());
    if report.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
