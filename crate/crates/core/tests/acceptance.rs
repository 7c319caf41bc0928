//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use orfkit_core::caratheodory::{caratheodory_from_measure, weight_from_caratheodory};
use orfkit_core::grid::{circle_points, uniform_angles};
use orfkit_core::measure::{gram_matrix, identity_deviation};
use orfkit_core::orf::{
    extract_parameters, gram_schmidt_orf, gram_schmidt_orf_with, interpolation_residuals, para_pair, para_zeros,
    recurrence_step, second_kind_integral, EngineOptions,
};
use orfkit_core::random::disk_sample;
use orfkit_core::transforms::{
    apply_transform, arf_caratheodory, arf_explicit_with, arf_quad, arf_recurrence, check_quad, relation_residuals,
    transform_determinant_residual,
};
use orfkit_core::{CircleMeasure, Complex64, OrfLevel, OrfSystem, PoleSequence, RandomConfig, RatFun, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Worst observed value against a bound, with a readable label.
struct Tally {
    parts: Vec<String>,
    pass: bool,
}

impl Tally {
    fn new() -> Self {
        Self {
            parts: Vec::new(),
            pass: true,
        }
    }

    fn below(&mut self, label: &str, value: f64, bound: f64) {
        let ok = value < bound;
        self.pass &= ok;
        self.parts.push(format!("{label} = {value:.2e} (< {bound:.0e})"));
    }

    fn above(&mut self, label: &str, value: f64, bound: f64) {
        let ok = value > bound;
        self.pass &= ok;
        self.parts.push(format!("{label} = {value:.2e} (> {bound:.0e})"));
    }

    fn flag(&mut self, label: &str, ok: bool) {
        self.pass &= ok;
        self.parts
            .push(format!("{label}: {}", if ok { "ok" } else { "violated" }));
    }
}

fn lebesgue_example(n_max: usize) -> Result<OrfSystem> {
    let mut beta = vec![c(0.0, 0.0), c(0.5, 0.0)];
    beta.resize(n_max + 1, c(0.0, 0.0));
    gram_schmidt_orf(&CircleMeasure::lebesgue(), &PoleSequence::new(beta)?, n_max)
}

fn random_systems(n_max: usize) -> Result<Vec<OrfSystem>> {
    (1..=5)
        .map(|seed| RandomConfig::generate(seed, n_max, 0.7, 0.6).synthesize())
        .collect()
}

/// Random synthesized systems plus Gram-Schmidt systems for smooth measures.
fn test_systems(n_max: usize) -> Result<Vec<(String, OrfSystem)>> {
    let mut out: Vec<(String, OrfSystem)> = random_systems(n_max)?
        .into_iter()
        .enumerate()
        .map(|(i, s)| (format!("seed {}", i + 1), s))
        .collect();
    for (seed, alpha) in [(11, c(0.3, -0.2)), (12, c(-0.4, 0.45))] {
        let poles = RandomConfig::generate(seed, n_max, 0.7, 0.6).poles;
        out.push((
            format!("poisson {alpha}"),
            gram_schmidt_orf(&CircleMeasure::poisson(alpha)?, &poles, n_max)?,
        ));
    }
    Ok(out)
}

fn sup_distance(f: &RatFun, g: &RatFun, points: &[Complex64]) -> Result<f64> {
    f.grid_distance(g, points)
}

fn criterion_1() -> Result<Tally> {
    let mut t = Tally::new();
    let start = Instant::now();
    let sys = lebesgue_example(2)?;
    let h = 0.75f64.sqrt();
    let mut pts = circle_points(1.0, 256, 0.0);
    pts.extend(circle_points(0.6, 64, 0.1));
    let mut worst: f64 = 0.0;
    for &z in &pts {
        let expect = h * z / (1.0 - 0.5 * z);
        worst = worst.max((sys.level(1)?.phi.eval(z)? - expect).norm());
    }
    t.below("phi_1 error", worst, 1e-10);
    let lam = sys.lambdas().iter().map(|l| l.norm()).fold(0.0, f64::max);
    t.below("max |lambda|", lam, 1e-10);
    let f = sys.caratheodory()?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut f_err: f64 = 0.0;
    for z in disk_sample(&mut rng, 50, 0.95) {
        f_err = f_err.max((f.eval(z)? - 1.0).norm());
    }
    t.below("|F - 1|", f_err, 1e-10);
    t.below("runtime [s]", start.elapsed().as_secs_f64(), 1.0);
    Ok(t)
}

fn criterion_2() -> Result<Tally> {
    let mut t = Tally::new();
    let opts = EngineOptions {
        grid: Some(2048),
        ..EngineOptions::default()
    };
    let mut worst: f64 = 0.0;
    let measures = [
        CircleMeasure::lebesgue(),
        CircleMeasure::poisson(c(0.4, 0.3))?,
        CircleMeasure::poisson(c(-0.6, 0.1))?,
        RandomConfig::generate(21, 4, 0.7, 0.6).synthesize()?.measure()?,
    ];
    for (seed, mu) in (30..).zip(&measures) {
        let poles = RandomConfig::generate(seed, 10, 0.8, 0.6).poles;
        let sys = gram_schmidt_orf_with(mu, &poles, 10, &opts)?;
        // check on a finer rule than the one used for construction
        let rule = mu.quad_rule(4096)?;
        let fs: Vec<RatFun> = sys.levels().iter().map(|l| l.phi.clone()).collect();
        worst = worst.max(identity_deviation(&gram_matrix(&rule, &fs)?));
    }
    t.below("Gram deviation", worst, 1e-9);
    Ok(t)
}

fn criterion_3() -> Result<Tally> {
    let mut t = Tally::new();
    let pts = circle_points(1.0, 512, 0.0);
    let mut worst: f64 = 0.0;
    for sys in random_systems(8)? {
        let poles = sys.poles();
        for n in 0..=8 {
            let l = sys.level(n)?;
            let (mut r, mut s) = (0.0f64, 0.0f64);
            for &z in &pts {
                let lhs = l.phi_star.eval(z)? * l.psi.eval(z)? + l.phi.eval(z)? * l.psi_star.eval(z)?;
                r = r.max((lhs - 2.0 * poles.poisson_blaschke(n, z)?).norm());
                s = s.max(lhs.norm());
            }
            worst = worst.max(r / s);
        }
    }
    t.below("determinant residual", worst, 1e-10);
    Ok(t)
}

fn criterion_4() -> Result<Tally> {
    let mut t = Tally::new();
    let (mut dev, mut sep) = (0.0f64, f64::INFINITY);
    let mut systems = random_systems(8)?;
    systems.push(lebesgue_example(8)?);
    for sys in &systems {
        for n in 1..=8 {
            for tau in [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)] {
                let zeros = para_zeros(&para_pair(sys, n, tau)?)?;
                for (i, a) in zeros.iter().enumerate() {
                    dev = dev.max((a.norm() - 1.0).abs());
                    for b in &zeros[i + 1..] {
                        sep = sep.min((a - b).norm());
                    }
                }
            }
        }
    }
    t.below("||z| - 1|", dev, 1e-9);
    t.above("min separation", sep, 1e-8);
    Ok(t)
}

fn criterion_5() -> Result<Tally> {
    let mut t = Tally::new();
    let pts = circle_points(1.0, 256, 0.01);
    let mut worst: f64 = 0.0;
    for sys in random_systems(8)?.into_iter().take(3) {
        let mu = sys.measure()?;
        for n in 0..=8 {
            let psi = second_kind_integral(&mu, &sys, n, 2048)?;
            worst = worst.max(sup_distance(&psi, &sys.level(n)?.psi, &pts)?);
        }
    }
    // Gram-Schmidt system: second kind by integral vs by the recurrence driven
    // with the fitted parameters
    let mu = CircleMeasure::poisson(c(0.25, -0.35))?;
    let sys = gram_schmidt_orf(&mu, &RandomConfig::generate(40, 8, 0.7, 0.6).poles, 8)?;
    let mut level = OrfLevel::initial(sys.poles().clone(), sys.level(0)?.phi.numer()[0]);
    for n in 1..=8 {
        let b = sys.level(n)?;
        level = recurrence_step(&level, b.lambda.unwrap(), b.rho, sys.poles(), n)?;
        let psi = second_kind_integral(&mu, &sys, n, 2048)?;
        worst = worst.max(sup_distance(&psi, &level.psi, &pts)?);
    }
    t.below("sup |psi_int - psi_rec|", worst, 1e-8);
    Ok(t)
}

fn criterion_6() -> Result<Tally> {
    let mut t = Tally::new();
    let (mut vanish, mut g_min) = (0.0f64, f64::INFINITY);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for (_, sys) in test_systems(8)? {
        let f = sys.caratheodory()?;
        let pts = disk_sample(&mut rng, 100, 0.95);
        for n in 0..=8 {
            let r = interpolation_residuals(&sys, &f, n, &pts)?;
            vanish = vanish.max(r.max_vanishing());
            g_min = g_min.min(r.g_min);
        }
    }
    t.below("interpolation residual", vanish, 1e-8);
    t.above("min |g_n| / scale", g_min, 1e-8);
    Ok(t)
}

fn criterion_7() -> Result<Tally> {
    let mut t = Tally::new();
    let pts = circle_points(1.0, 256, 0.01);
    let mut worst: f64 = 0.0;
    let mut systems: Vec<OrfSystem> = test_systems(8)?.into_iter().map(|(_, s)| s).collect();
    systems.truncate(3);
    systems.push(lebesgue_example(8)?);
    for sys in &systems {
        let f = sys.caratheodory()?;
        for k in 0..=3 {
            let arf = arf_recurrence(sys, k, 8)?;
            for n in k..=8 {
                let pair = arf_explicit_with(sys, &f, k, n)?;
                let rec = arf.level(n)?;
                worst = worst.max(sup_distance(&pair.phi, &rec.phi, &pts)?);
                worst = worst.max(sup_distance(&pair.psi, &rec.psi, &pts)?);
            }
        }
    }
    t.below("explicit vs recurrence", worst, 1e-9);

    let sys = lebesgue_example(2)?;
    let pair = arf_explicit_with(&sys, &sys.caratheodory()?, 1, 2)?;
    let s = 3f64.sqrt();
    let mut closed: f64 = 0.0;
    for &z in &pts {
        closed = closed.max((pair.phi.eval(z)? - 2.0 / s * (z - 0.5)).norm());
    }
    t.below("order-1 closed form", closed, 1e-10);
    Ok(t)
}

fn criterion_8() -> Result<Tally> {
    let mut t = Tally::new();
    let sys = lebesgue_example(5)?;
    let arf = arf_recurrence(&sys, 1, 5)?;
    let rule = arf.measure().quad_rule(2048)?;
    let fs: Vec<RatFun> = arf.as_system().levels().iter().map(|l| l.phi.clone()).collect();
    t.below("Gram deviation", identity_deviation(&gram_matrix(&rule, &fs)?), 1e-8);
    let mut worst: f64 = 0.0;
    for theta in uniform_angles(256) {
        let z = Complex64::from_polar(1.0, theta);
        let expect = 0.75 / (z - 0.5).norm_sqr();
        worst = worst.max((arf.measure().weight(theta) - expect).abs());
    }
    t.below("weight error", worst, 1e-8);
    Ok(t)
}

fn criterion_9() -> Result<Tally> {
    let mut t = Tally::new();
    let mut systems: Vec<OrfSystem> = test_systems(3)?.into_iter().map(|(_, s)| s).collect();
    systems.push(lebesgue_example(3)?);
    let mut worst: f64 = 0.0;
    for sys in &systems {
        for (j, k, n) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
            worst = worst.max(relation_residuals(sys, j, k, n)?.max());
        }
    }
    t.below("relation residual (phi and psi)", worst, 1e-10);
    Ok(t)
}

fn criterion_10() -> Result<Tally> {
    let mut t = Tally::new();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut min_re, mut anchor) = (f64::INFINITY, 0.0f64);
    let mut systems: Vec<OrfSystem> = test_systems(6)?.into_iter().map(|(_, s)| s).collect();
    systems.push(lebesgue_example(6)?);
    for sys in &systems {
        let f = sys.caratheodory()?;
        for k in 0..=3 {
            let fk = arf_caratheodory(sys, &f, k)?;
            anchor = anchor.max((fk.eval(sys.poles().beta(k))? - 1.0).norm());
            for z in disk_sample(&mut rng, 200, 0.99) {
                min_re = min_re.min(fk.eval(z)?.re);
            }
        }
    }
    t.above("min Re F^(k)", min_re, 0.0);
    t.below("|F^(k)(beta_k) - 1|", anchor, 1e-9);
    Ok(t)
}

fn criterion_11() -> Result<Tally> {
    let mut t = Tally::new();
    let pts = circle_points(1.0, 256, 0.0);
    let (mut worst, mut d_err, mut conditions) = (0.0f64, 0.0f64, true);
    let mut systems: Vec<OrfSystem> = test_systems(6)?.into_iter().map(|(_, s)| s).collect();
    systems.push(lebesgue_example(6)?);
    for sys in &systems {
        let f = sys.caratheodory()?;
        for k in 0..=3 {
            let quad = arf_quad(sys, k)?;
            let report = check_quad(&quad, &f, &[])?;
            conditions &= report.orthogonality_ok();
            for n in 1..=6 - k {
                let cn = (sys.level(k)?.d * sys.level(k + n)?.d).sqrt();
                let out = apply_transform(sys, &quad, Some(&report), n, cn)?;
                let r = transform_determinant_residual(&out, &pts)?;
                worst = worst.max(r.residual);
                d_err = d_err.max((r.d - 2.0).abs());
            }
        }
    }
    t.flag("ARF quad conditions", conditions);
    t.below("transform determinant residual", worst, 1e-10);
    t.below("|d~ - 2|", d_err, 1e-10);
    Ok(t)
}

fn criterion_12() -> Result<Tally> {
    let mut t = Tally::new();
    let mut lam_err: f64 = 0.0;
    for seed in 1..=5 {
        let cfg = RandomConfig::generate(seed, 8, 0.7, 0.6);
        let sys = cfg.synthesize()?;
        for n in 1..=8 {
            let fit = extract_parameters(sys.poles(), sys.level(n - 1)?, &sys.level(n)?.phi)?;
            lam_err = lam_err.max((fit.lambda - cfg.lambdas[n - 1]).norm());
        }
    }
    t.below("lambda recovery", lam_err, 1e-10);

    let smooth: Vec<(CircleMeasure, Complex64)> = vec![
        (CircleMeasure::poisson(c(0.3, 0.4))?, c(0.0, 0.0)),
        (CircleMeasure::poisson(c(-0.5, 0.2))?, c(0.2, -0.3)),
        (
            RandomConfig::generate(50, 3, 0.6, 0.5).synthesize()?.measure()?,
            c(-0.1, 0.4),
        ),
        (
            {
                let theta = uniform_angles(64);
                let w: Vec<f64> = theta
                    .iter()
                    .map(|t| 1.0 + 0.5 * (2.0 * t).cos() + 0.2 * t.sin())
                    .collect();
                CircleMeasure::samples(&theta, &w)?
            },
            c(0.3, 0.0),
        ),
    ];
    let mut w_err: f64 = 0.0;
    for (mu, beta0) in &smooth {
        let f = caratheodory_from_measure(mu, *beta0)?;
        for theta in uniform_angles(97) {
            w_err = w_err.max((weight_from_caratheodory(&f, *beta0, theta)? - mu.weight(theta)).abs());
        }
    }
    t.below("weight recovery", w_err, 1e-6);

    let mut exact = true;
    for (_, sys) in test_systems(5)? {
        let json = serde_json::to_string(&sys).map_err(|e| orfkit_core::Error::Domain(e.to_string()))?;
        let back: OrfSystem = serde_json::from_str(&json).map_err(|e| orfkit_core::Error::Domain(e.to_string()))?;
        exact &= back.levels() == sys.levels() && back.poles() == sys.poles();
        exact &= serde_json::to_string(&back).map(|s| s == json).unwrap_or(false);
    }
    t.flag("JSON bit-exact round trip", exact);
    Ok(t)
}

type Criterion = (&'static str, fn() -> Result<Tally>);

fn main() {
    let criteria: [Criterion; 12] = [
        ("1  rational Lebesgue example", criterion_1),
        ("2  orthonormality", criterion_2),
        ("3  determinant formula", criterion_3),
        ("4  para-orthogonal zeros", criterion_4),
        ("5  second kind: integral vs recurrence", criterion_5),
        ("6  interpolation", criterion_6),
        ("7  ARFs: explicit vs recurrence", criterion_7),
        ("8  ARF measure of order 1", criterion_8),
        ("9  relations between ARF orders", criterion_9),
        ("10 Caratheodory positivity", criterion_10),
        ("11 transformed determinant identity", criterion_11),
        ("12 round trips", criterion_12),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run));
        let secs = start.elapsed().as_secs_f64();
        let (pass, detail) = match outcome {
            Ok(Ok(t)) => (t.pass, t.parts.join("; ")),
            Ok(Err(e)) => (false, format!("error: {e}")),
            Err(_) => (false, "panicked".to_string()),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "{} criterion {name} [{secs:.2}s]: {detail}",
            if pass { "PASS" } else { "FAIL" }
        );
    }
    println!("acceptance: {} of 12 criteria passed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
