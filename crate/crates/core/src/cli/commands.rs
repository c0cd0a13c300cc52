use std::path::PathBuf;

use rand::Rng as _;

use super::config::{self, pick, resolve_alpha, resolve_sequence, sequence_stats, AlphaConfig, ExperimentConfig};
use super::report::{emit_report, Check, Report, Table};
use super::verify::{verify_all, VerifyPreset};
use super::{Command, Common, MapArgs, SeqArgs};
use crate::basis::{
    basis_constant, domination_constant, equivalence_constants, wide_s_constant, BasicSequenceSpec, SimplexPoint,
};
use crate::constructions::{
    alpha_validate, convex_basis, hj_monotonicity_check, key_lemma_check, map_build,
    separation_lower_bound_with, small_perturbation_sum, AffineMapSpec, AlphaSchedule, KeyLemmaConfig, MapKind, MapParams,
};
use crate::error::{Error, Result};
use crate::harness::{
    fixed_point_solve, lipschitz_estimate, min_displacement_seeded, picard_orbit, uniform_lipschitz_probe, Direction,
    Growth, LipschitzMethod, LipschitzOptions,
};
use crate::optim::rng;
use crate::spaces::SpaceOracle;
use crate::tolerance::Tolerances;
use crate::vector::CoeffVector;

pub struct Outcome {
    pub lines: Vec<String>,
    pub passed: bool,
    pub failed: Vec<String>,
}

pub(super) struct Ctx {
    pub cfg: ExperimentConfig,
    pub seed: Option<u64>,
    pub out: PathBuf,
    pub tol: Tolerances,
}

impl Ctx {
    fn new(common: Common) -> Result<Self> {
        let cfg = match &common.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        let tol = cfg.tolerances.unwrap_or_default();
        if !(tol.certified >= 0.0 && tol.algebraic >= 0.0) {
            return Err(Error::InvalidParameter("tolerances must be nonnegative".into()));
        }
        Ok(Ctx {
            seed: common.seed.or(cfg.seed),
            out: config::output_dir(common.out, &cfg),
            tol,
            cfg,
        })
    }

    pub fn seed(&self, what: &str) -> Result<u64> {
        self.seed
            .ok_or_else(|| Error::InvalidParameter(format!("--seed is required for {what}")))
    }

    fn space(&self, flag: Option<&str>) -> Result<Option<SpaceOracle>> {
        match flag {
            Some(s) => Ok(Some(s.parse()?)),
            None => self.cfg.space(),
        }
    }

    fn n(&self, flag: Option<usize>) -> Result<usize> {
        let n = pick(flag, self.cfg.n, "N")?;
        if n == 0 {
            return Err(Error::InvalidParameter("N must be >= 1".into()));
        }
        Ok(n)
    }

    fn sequence(&self, args: &SeqArgs) -> Result<(BasicSequenceSpec, usize)> {
        let n = self.n(args.n)?;
        let ambient = self.space(args.space.as_deref())?;
        Ok((resolve_sequence(args.seq.as_deref(), &self.cfg, ambient, n)?, n))
    }

    fn alpha(&self, flag: &[f64], seq: &BasicSequenceSpec, n: usize) -> Result<AlphaSchedule> {
        if !flag.is_empty() {
            return AlphaSchedule::explicit(flag.to_vec());
        }
        resolve_alpha(self.cfg.alpha.as_ref(), seq, n)
    }

    /// Builds the map on a domain of `n`; the main map's schedule is
    /// generated for the coefficient space unless given.
    fn map(&self, args: &MapArgs, n: usize) -> Result<(AffineMapSpec, SpaceOracle)> {
        let kind: MapKind = pick(args.map.clone(), self.cfg.map.clone(), "map")?.parse()?;
        let space = self
            .space(args.space.as_deref())?
            .ok_or_else(|| Error::InvalidParameter("missing --space".into()))?;
        let mut params = MapParams::new(n);
        params.terms = args.terms.or(self.cfg.terms);
        if kind == MapKind::FMain {
            let seq = BasicSequenceSpec::canonical(space.clone(), n);
            params.alpha = Some(self.alpha(&args.alphas, &seq, n)?);
        }
        Ok((map_build(kind, &params)?, space))
    }

    fn finish(&self, report: Report, tables: Vec<Table>, mut lines: Vec<String>) -> Result<Outcome> {
        let written = emit_report(&self.out, &report, &tables)?;
        lines.push(format!(
            "wrote {}",
            written.iter().map(|p| p.display().to_string()).collect::<Vec<_>>().join(", ")
        ));
        Ok(Outcome {
            lines,
            passed: report.passed,
            failed: report.checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()).collect(),
        })
    }
}

fn fmt_est(e: &crate::basis::ConstantEstimate) -> String {
    format!(
        "[{}, {}] {:?}{}",
        e.lower,
        e.upper,
        e.method,
        if e.certified { " certified" } else { "" }
    )
}

pub fn execute(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Norm { space, vec, common } => {
            let ctx = Ctx::new(common)?;
            let space = ctx
                .space(space.as_deref())?
                .ok_or_else(|| Error::InvalidParameter("missing --space".into()))?;
            let v = CoeffVector::new(vec)?;
            let value = space.norm(&v)?;
            let mut r = Report::new("norm", ctx.seed, ctx.tol, Some(v.len()));
            r.data("space", &space);
            r.data("vector", &v);
            r.data("norm", &value);
            ctx.finish(r, vec![], vec![format!("{value:.6}")])
        }
        Command::BasisConstant { seq, common } => {
            let ctx = Ctx::new(common)?;
            let (s, n) = ctx.sequence(&seq)?;
            let e = basis_constant(&s, n)?;
            let line = format!("K {}", fmt_est(&e));
            let mut r = Report::new("basis-constant", ctx.seed, ctx.tol, Some(n));
            r.data("sequence", &s);
            r.estimate("basis_constant", e);
            ctx.finish(r, vec![], vec![line])
        }
        Command::Dominate { space, from, to, n, common } => {
            let ctx = Ctx::new(common)?;
            let n = ctx.n(n)?;
            let amb = ctx.space(space.as_deref())?;
            let x = config::parse_sequence(&from, amb.clone(), n)?;
            let y = config::parse_sequence(&to, amb, n)?;
            let e = domination_constant(&x, &y, n)?;
            let line = format!("D {}", fmt_est(&e));
            let mut r = Report::new("dominate", ctx.seed, ctx.tol, Some(n));
            r.data("from", &x);
            r.data("to", &y);
            r.estimate("domination", e);
            ctx.finish(r, vec![], vec![line])
        }
        Command::Equiv { space, x, y, n, common } => {
            let ctx = Ctx::new(common)?;
            let n = ctx.n(n)?;
            let amb = ctx.space(space.as_deref())?;
            let xs = config::parse_sequence(&x, amb.clone(), n)?;
            let ys = config::parse_sequence(&y, amb, n)?;
            let eq = equivalence_constants(&xs, &ys, n)?;
            let lines = vec![
                format!("x -> y {}", fmt_est(&eq.forward)),
                format!("y -> x {}", fmt_est(&eq.backward)),
                format!("L = {}", eq.constant()),
            ];
            let mut r = Report::new("equiv", ctx.seed, ctx.tol, Some(n));
            r.data("constant", &eq.constant());
            r.estimate("forward", eq.forward);
            r.estimate("backward", eq.backward);
            ctx.finish(r, vec![], lines)
        }
        Command::WideS { seq, common } => {
            let ctx = Ctx::new(common)?;
            let (s, n) = ctx.sequence(&seq)?;
            let e = wide_s_constant(&s, n)?;
            let mut line = format!("L {}", fmt_est(&e));
            if let Some(f) = &e.flag {
                line.push_str(&format!(" ({f})"));
            }
            let mut r = Report::new("wide-s", ctx.seed, ctx.tol, Some(n));
            r.estimate("wide_s", e);
            ctx.finish(r, vec![], vec![line])
        }
        Command::Alpha { seq, alphas, k, inf, sup, common } => {
            let ctx = Ctx::new(common)?;
            let (s, n) = ctx.sequence(&seq)?;
            let (k, inf, sup) = match (k, inf, sup) {
                (Some(k), Some(i), Some(u)) => (k, i, u),
                (k, i, u) => {
                    let (k0, i0, u0) = sequence_stats(&s, n)?;
                    (k.unwrap_or(k0), i.unwrap_or(i0), u.unwrap_or(u0))
                }
            };
            let sched = if alphas.is_empty() {
                let gen = AlphaConfig::Generate {
                    k: Some(k),
                    inf: Some(inf),
                    sup: Some(sup),
                };
                resolve_alpha(Some(ctx.cfg.alpha.as_ref().unwrap_or(&gen)), &s, n)?
            } else {
                AlphaSchedule::explicit(alphas)?
            };
            let rep = alpha_validate(&sched, k, inf, sup);
            let mut r = Report::new("alpha", ctx.seed, ctx.tol, Some(n));
            let mut lines = vec![format!("sum = {} bound = {}", rep.sum, rep.bound)];
            for c in &rep.conditions {
                lines.push(format!("{} {} margin {}", c.name, if c.pass { "pass" } else { "FAIL" }, c.margin));
                r.check(Check {
                    name: c.name.clone(),
                    pass: c.pass,
                    margin: c.margin,
                    detail: c.detail.clone(),
                });
            }
            r.data("schedule", &sched);
            r.data("k", &k);
            r.data("inf", &inf);
            r.data("sup", &sup);
            ctx.finish(r, vec![], lines)
        }
        Command::KeyLemma { seq, alphas, draws, mode, trials, common } => {
            let ctx = Ctx::new(common)?;
            let (s, n) = ctx.sequence(&seq)?;
            let mut cfg = match mode.as_str() {
                "enum" => KeyLemmaConfig::enumerate(),
                "sample" => KeyLemmaConfig::sample(
                    pick(trials, ctx.cfg.trials, "trials").unwrap_or(1000),
                    ctx.seed("sample mode")?,
                ),
                other => return Err(Error::InvalidParameter(format!("unknown mode `{other}`"))),
            };
            cfg.basis_constant = Some(basis_constant(&s, n)?.upper);
            let scalings: Vec<Vec<f64>> = if alphas.is_empty() {
                let seed = ctx.seed("random scalings")?;
                (0..draws)
                    .map(|d| rng::nondecreasing_unit(&mut rng::substream(seed, 1 << 32 | d as u64), n))
                    .collect()
            } else {
                vec![alphas]
            };
            let mut r = Report::new("key-lemma", ctx.seed, ctx.tol, Some(n));
            let mut bad = 0;
            let mut worst = f64::INFINITY;
            let mut reports = Vec::new();
            for a in &scalings {
                let rep = key_lemma_check(&s, a, &cfg)?;
                let m = (rep.l - rep.forward.lower).min(rep.l - rep.backward.lower);
                worst = worst.min(m);
                if !rep.holds() {
                    bad += 1;
                }
                reports.push(rep);
            }
            r.check(Check {
                name: "key_lemma".into(),
                pass: bad == 0,
                margin: worst,
                detail: format!("{bad} of {} scalings violate (1/L)||x|| <= ||x'|| <= L||x||", scalings.len()),
            });
            r.data("reports", &reports);
            let line = format!("{} scalings, {bad} violations, min margin {worst}", scalings.len());
            ctx.finish(r, vec![], vec![line])
        }
        Command::HjCheck { seq, alphas, trials, common } => {
            let ctx = Ctx::new(common)?;
            let (s, n) = ctx.sequence(&seq)?;
            let seed = ctx.seed("hj-check")?;
            let trials = pick(trials, ctx.cfg.trials, "trials").unwrap_or(10_000);
            let fixed = (!alphas.is_empty()).then_some(alphas.as_slice());
            let rep = hj_monotonicity_check(&s, fixed, trials, seed)?;
            let mut r = Report::new("hj-check", Some(seed), ctx.tol, Some(n));
            r.check(Check::at_most(
                "monotonicity",
                rep.max_violation,
                0.0,
                ctx.tol.certified,
                format!("{} violations in {trials} trials", rep.violations),
            ));
            let line = format!("max violation {} over {trials} trials", rep.max_violation);
            r.data("report", &rep);
            ctx.finish(r, vec![], vec![line])
        }
        Command::Perturbation { seq, alphas, common } => {
            let ctx = Ctx::new(common)?;
            let (s, n) = ctx.sequence(&seq)?;
            let a = ctx.alpha(&alphas, &s, n)?;
            let rep = small_perturbation_sum(&s, &a, None)?;
            let mut r = Report::new("perturbation", ctx.seed, ctx.tol, Some(n));
            r.check(Check {
                name: "small_perturbation".into(),
                pass: rep.pass,
                margin: rep.bound - rep.sum,
                detail: format!("sum {} < 1/(2K) = {}", rep.sum, rep.bound),
            });
            let line = format!("sum {} bound {}", rep.sum, rep.bound);
            r.data("report", &rep);
            r.data("schedule", &a);
            ctx.finish(r, vec![], vec![line])
        }
        Command::Separation { seq, convex, kappa, ell, pairs, common } => {
            let ctx = Ctx::new(common)?;
            let (x, n) = ctx.sequence(&seq)?;
            let z = if convex {
                convex_basis(&x, &ctx.alpha(&[], &x, n)?)?
            } else {
                x.clone()
            };
            let pairs: Vec<(Vec<usize>, Vec<usize>)> = if !kappa.is_empty() || !ell.is_empty() {
                vec![(kappa, ell)]
            } else {
                let seed = ctx.seed("random index pairs")?;
                random_pairs(seed, pairs, n)
            };
            let mut r = Report::new("separation", ctx.seed, ctx.tol, Some(n));
            let mut reps = Vec::new();
            let mut worst = f64::INFINITY;
            let mut floor = f64::NAN;
            let kz = basis_constant(&z.with_truncation(n), n)?.upper;
            for (k, l) in &pairs {
                let rep = separation_lower_bound_with(&x, &z, k, l, n, Some(kz))?;
                worst = worst.min(rep.direct - rep.floor);
                floor = rep.floor;
                reps.push(rep);
            }
            r.check(Check::at_least(
                "separation",
                worst,
                0.0,
                ctx.tol.certified,
                format!("min direct - floor over {} pairs", pairs.len()),
            ));
            r.data("pairs", &reps);
            let line = format!("floor {floor}, min slack {worst} over {} pairs", pairs.len());
            ctx.finish(r, vec![], vec![line])
        }
        Command::MapBuild { map, n, common } => {
            let ctx = Ctx::new(common)?;
            let n = ctx.n(n)?;
            let (m, _) = ctx.map(&map, n)?;
            let mut r = Report::new("map-build", ctx.seed, ctx.tol, Some(n));
            let err = m.column_sum_error();
            r.check(Check::at_most("column_sums", err, 0.0, ctx.tol.algebraic, "stored plus dropped mass is 1"));
            let mut lines = Vec::new();
            for (j, c) in m.columns.iter().enumerate() {
                let cells: Vec<String> = c.iter().map(|(i, w)| format!("{i}:{w}")).collect();
                lines.push(format!("col {}: {}", j + 1, cells.join(" ")));
            }
            let fp = fixed_point_solve(&m, n)?;
            if matches!(m.kind, MapKind::FMain | MapKind::F0Shift) {
                r.check(Check::flag("fixed_point_free", !fp.has_simplex_fixed_point(), fp.conclusion.clone()));
            }
            lines.push(fp.conclusion.clone());
            r.data("map", &m);
            r.data("fixed_points", &fp);
            ctx.finish(r, vec![], lines)
        }
        Command::Orbit { map, start, steps, n, common } => {
            let ctx = Ctx::new(common)?;
            let t0 = parse_start(&start, n.or(ctx.cfg.n))?;
            let n = n.or(ctx.cfg.n).unwrap_or(t0.len()).max(t0.len());
            let steps = pick(steps, ctx.cfg.steps, "steps")?;
            let (m, space) = ctx.map(&map, n)?;
            let rec = picard_orbit(&m, &t0, steps, &space, Growth::default())?;
            let width = rec.coordinate_traces.len().min(8);
            let mut header = vec!["step".to_string(), "displacement".to_string()];
            header.extend((1..=width).map(|i| format!("t{i}")));
            let mut table = Table {
                name: "orbit.csv",
                header,
                rows: Vec::new(),
            };
            for p in 0..=steps {
                let mut row = vec![
                    p.to_string(),
                    if p == 0 { String::new() } else { rec.step_displacements[p - 1].to_string() },
                ];
                row.extend((0..width).map(|i| rec.coordinate_traces[i][p].to_string()));
                table.row(row);
            }
            let mut r = Report::new("orbit", ctx.seed, ctx.tol, Some(n));
            let line = rec.step_displacements.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",");
            r.data("map", &m.kind);
            r.data("space", &space);
            r.data("orbit", &rec);
            ctx.finish(r, vec![table], vec![line])
        }
        Command::Displacement { map, n, common } => {
            let ctx = Ctx::new(common)?;
            let ns = if n.is_empty() { vec![ctx.n(None)?] } else { n };
            let top = *ns.iter().max().unwrap();
            let (m, space) = ctx.map(&map, top)?;
            let seed = if space.polyhedral() { ctx.seed.unwrap_or(0) } else { ctx.seed("non-polyhedral displacement")? };
            let mut table = Table::new("displacement.csv", &["N", "min_displacement", "exact"]);
            let mut r = Report::new("displacement", ctx.seed, ctx.tol, Some(top));
            let mut lines = Vec::new();
            let mut results = Vec::new();
            for &k in &ns {
                let rep = min_displacement_seeded(&m, &space, k, seed)?;
                table.row(vec![k.to_string(), rep.best_value.to_string(), space.polyhedral().to_string()]);
                lines.push(format!("N={k}: {}", rep.best_value));
                if matches!(m.kind, MapKind::FMain | MapKind::F0Shift) {
                    r.check(Check {
                        name: format!("positive_displacement_N{k}"),
                        pass: rep.best_value > 0.0,
                        margin: rep.best_value,
                        detail: "fixed-point-free map has positive minimum displacement".into(),
                    });
                }
                results.push((k, rep));
            }
            r.data("map", &m.kind);
            r.data("space", &space);
            r.data("results", &results);
            ctx.finish(r, vec![table], lines)
        }
        Command::Lipschitz { map, n, method, direction, trials, common } => {
            let ctx = Ctx::new(common)?;
            let n = ctx.n(n)?;
            let method = match method.as_str() {
                "exact" => LipschitzMethod::Exact,
                "sample" => LipschitzMethod::Sample,
                o => return Err(Error::InvalidParameter(format!("unknown method `{o}`"))),
            };
            let direction = match direction.as_str() {
                "forward" => Direction::Forward,
                "inverse" => Direction::Inverse,
                o => return Err(Error::InvalidParameter(format!("unknown direction `{o}`"))),
            };
            let seed = match method {
                LipschitzMethod::Sample => ctx.seed("sampled Lipschitz estimates")?,
                LipschitzMethod::Exact => ctx.seed.unwrap_or(0),
            };
            let (m, space) = ctx.map(&map, n)?;
            let opts = LipschitzOptions {
                trials: trials.or(ctx.cfg.trials).unwrap_or(200),
                seed,
                growth: Growth::default(),
            };
            let rep = lipschitz_estimate(&m, &space, n, method, direction, &opts)?;
            let mut r = Report::new("lipschitz", ctx.seed, ctx.tol, Some(n));
            r.check(Check::flag("consistent", rep.consistent(), "estimate, cross-check and analytic bound agree in order"));
            let lines = vec![
                format!("{:?} {}", direction, fmt_est(&rep.estimate)),
                format!("cross-check {}", fmt_est(&rep.cross_check)),
                format!("analytic {:?} ({})", rep.analytic, rep.analytic_source),
            ];
            r.estimate("estimate", rep.estimate.clone());
            r.estimate("cross_check", rep.cross_check.clone());
            r.data("report", &rep);
            ctx.finish(r, vec![], lines)
        }
        Command::UniformProbe { map, n, p_max, common } => {
            let ctx = Ctx::new(common)?;
            let n = ctx.n(n)?;
            let p_max = pick(p_max, ctx.cfg.p_max, "p-max")?;
            let (m, space) = ctx.map(&map, n)?;
            let opts = LipschitzOptions::default();
            let rep = uniform_lipschitz_probe(&m, &space, n, p_max, &opts)?;
            let mut table = Table::new("lipschitz_vs_p.csv", &["p", "lower", "upper", "certified"]);
            for (p, e) in &rep.per_p {
                table.row(vec![p.to_string(), e.lower.to_string(), e.upper.to_string(), e.certified.to_string()]);
            }
            let mut r = Report::new("uniform-probe", ctx.seed, ctx.tol, Some(n));
            if m.kind == MapKind::F0Shift && space.polyhedral() {
                r.check(Check::at_most(
                    "uniformly_lipschitz",
                    (rep.sup - 1.0).abs(),
                    0.0,
                    ctx.tol.certified,
                    "Lip(A^p) = 1 for every probed p",
                ));
            }
            let line = format!("sup over p <= {p_max}: {} (flat: {})", rep.sup, rep.flat);
            r.data("probe", &rep);
            ctx.finish(r, vec![table], vec![line])
        }
        Command::VerifyAll { preset, n, common } => {
            let ctx = Ctx::new(common)?;
            let preset: VerifyPreset = preset.parse()?;
            let n = ctx.n(n)?;
            let seed = ctx.seed("verify-all")?;
            let r = verify_all(preset, n, seed, ctx.tol)?;
            let lines = r
                .checks
                .iter()
                .map(|c| format!("{:<28} {} margin {:e}", c.name, if c.pass { "pass" } else { "FAIL" }, c.margin))
                .collect();
            ctx.finish(r, vec![], lines)
        }
    }
}

/// `e<k>`, `uniform` (needs a length) or explicit coordinates.
fn parse_start(s: &str, n: Option<usize>) -> Result<SimplexPoint> {
    let bad = || Error::InvalidParameter(format!("bad start point `{s}`"));
    if let Some(k) = s.strip_prefix('e') {
        let k: usize = k.parse().map_err(|_| bad())?;
        if k == 0 {
            return Err(bad());
        }
        return Ok(SimplexPoint::vertex(k, n.unwrap_or(k).max(k)));
    }
    if s == "uniform" {
        let n = n.ok_or_else(|| Error::InvalidParameter("uniform start needs --N".into()))?;
        return Ok(SimplexPoint::uniform(n));
    }
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    SimplexPoint::new(CoeffVector::new(v)?)
}

/// Random increasing index sequences of length `n` from `1..=3n` that differ
/// somewhere.
pub(super) fn random_pairs(seed: u64, count: usize, n: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let draw = |r: &mut rng::Rng| {
        let mut pool: Vec<usize> = (1..=3 * n).collect();
        for i in 0..n {
            let j = r.gen_range(i..pool.len());
            pool.swap(i, j);
        }
        let mut v = pool[..n].to_vec();
        v.sort_unstable();
        v
    };
    (0..count)
        .map(|c| {
            let mut r = rng::substream(seed, c as u64);
            loop {
                let (a, b) = (draw(&mut r), draw(&mut r));
                if a != b {
                    return (a, b);
                }
            }
        })
        .collect()
}
