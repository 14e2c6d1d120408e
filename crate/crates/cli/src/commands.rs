use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};

use tspgap::compose::{compose_instances, max_block_cost, preservation_search, BlockSource};
use tspgap::exact::{
    cycle_count, max_coincident_edges, monotonicity_check, parse_tour, solve_exact_with, tour_cost,
    SolveOptions, SolveOutcome, Tour,
};
use tspgap::instances::{
    gen_random_gap, gen_random_points, gen_unique_gap, parse_instance, serialize_instance,
    BoundingBox, Payload,
};
use tspgap::reduction::{
    delaunay_containment_batch, delaunay_triangulate, parse_triangulation, reduce_instance,
    restrict_to_edges, triangle_audit, triangulate_around_tour, Method, Triangulation,
};
use tspgap::render::render_svg;
use tspgap::scm::{build_scm, compute_frontier, near_optimal_set, render_scm, scm_csv};
use tspgap::stochastic::{bounds_report, estimate_hit_rate, sample_cycles};
use tspgap::{derive_seed, CostMatrix, EdgeMask, InstanceFile, ParseError, PointSet};

use crate::report::RunReport;
use crate::{Command, Experiment, Kind, MethodArg, ReportOut};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("file not found: {}", .0.display())]
    NotFound(PathBuf),
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: io::Error },
    #[error("parse error in {}: {source}", path.display())]
    Parse { path: PathBuf, source: ParseError },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(tspgap::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::NotFound(_) => 3,
            CliError::Parse { .. } | CliError::Core(tspgap::Error::Parse(_)) => 4,
            CliError::Core(tspgap::Error::GuardExceeded { .. }) => 5,
            CliError::Read { .. }
            | CliError::Write { .. }
            | CliError::Core(tspgap::Error::Io(_)) => 6,
            CliError::Core(_) => 1,
        }
    }
}

impl From<tspgap::Error> for CliError {
    fn from(e: tspgap::Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = Result<T, CliError>;

/// A finished report and where it goes; `None` when the command already
/// wrote its only output to stdout.
type Done = Option<(RunReport, ReportOut)>;

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => CliError::NotFound(path.to_path_buf()),
        _ => CliError::Read {
            path: path.to_path_buf(),
            source: e,
        },
    })
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::Write {
        path: path.to_path_buf(),
        source: e,
    })
}

fn load_instance(path: &Path) -> CliResult<InstanceFile> {
    parse_instance(&read(path)?).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn load_tour(path: &Path) -> CliResult<Tour> {
    parse_tour(&read(path)?).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn load_triangulation(path: &Path) -> CliResult<Triangulation> {
    parse_triangulation(&read(path)?).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn load_mask(cm: &CostMatrix, path: &Path) -> CliResult<EdgeMask> {
    Ok(restrict_to_edges(cm, &load_triangulation(path)?)?)
}

fn require_points<'a>(inst: &'a InstanceFile, path: &Path) -> CliResult<&'a PointSet> {
    inst.points().ok_or_else(|| {
        CliError::Usage(format!(
            "{} is not a Euclidean (e2d) instance",
            path.display()
        ))
    })
}

fn method(m: MethodArg) -> Method {
    match m {
        MethodArg::Delaunay => Method::Delaunay,
        MethodArg::Constrained => Method::Constrained,
    }
}

fn opts(force: bool) -> SolveOptions {
    SolveOptions {
        force,
        parallel: true,
    }
}

fn kind_line(inst: &InstanceFile) -> String {
    let kind = match inst.payload {
        Payload::Gap(ref cm) if cm.is_exact() => "gap (integer)",
        Payload::Gap(_) => "gap (float)",
        Payload::E2d(_) => "e2d",
    };
    format!("kind: {kind}\n")
}

fn header(inst: &InstanceFile) -> String {
    format!("{}n: {}\n", kind_line(inst), inst.n())
}

fn base_report(inst: Option<&InstanceFile>, seeds: Vec<u64>, body: String) -> RunReport {
    RunReport {
        seeds,
        provenance: inst.and_then(|i| i.provenance.clone()),
        body,
        ..Default::default()
    }
}

pub fn run(cmd: &Command) -> CliResult<Done> {
    match cmd {
        Command::Gen {
            kind,
            n,
            seed,
            lo,
            hi,
            out,
        } => gen(*kind, *n, *seed, *lo, *hi, out.as_deref()),
        Command::Solve {
            file,
            mask,
            force,
            svg,
            report,
        } => solve(file, mask.as_deref(), *force, svg.as_deref(), report),
        Command::Reduce {
            file,
            method: m,
            tour,
            tri,
            svg,
            force,
            report,
        } => reduce(
            file,
            method(*m),
            tour.as_deref(),
            tri.as_deref(),
            svg.as_deref(),
            *force,
            report,
        ),
        Command::Scm {
            file,
            method: m,
            mask,
            eps,
            ppm,
            force,
            report,
        } => scm(
            file,
            m.map(method),
            mask.as_deref(),
            *eps,
            ppm.as_deref(),
            *force,
            report,
        ),
        Command::Sample {
            file,
            k,
            seed,
            force,
            report,
        } => sample(file, *k, *seed, *force, report),
        Command::Compose {
            a,
            b,
            n,
            m,
            seed,
            lo,
            hi,
            out,
        } => compose(
            a.as_deref(),
            b.as_deref(),
            *n,
            *m,
            *seed,
            *lo,
            *hi,
            out.as_deref(),
        ),
        Command::Audit { file, tol, report } => audit(file, *tol, report),
        Command::Sweep {
            experiment,
            n,
            m,
            seed,
            count,
            k,
            lo,
            hi,
            kind,
            a,
            b,
            archive,
            force,
            report,
        } => {
            let count = count.unwrap_or(match experiment {
                Experiment::Preservation => 1000,
                Experiment::Monotonicity => 100,
                _ => 200,
            });
            let seeds: Vec<u64> = (*seed..seed.saturating_add(count)).collect();
            match experiment {
                Experiment::Containment => sweep_containment(n.unwrap_or(8), seeds, *force, report),
                Experiment::Preservation => sweep_preservation(
                    a.as_deref(),
                    b.as_deref(),
                    n.unwrap_or(4),
                    *m,
                    *seed,
                    seeds,
                    *lo,
                    *hi,
                    archive.as_deref(),
                    *force,
                    report,
                ),
                Experiment::Monotonicity => {
                    sweep_monotonicity(*kind, n.unwrap_or(6), seeds, *k, report)
                }
                Experiment::Bounds => sweep_bounds(n.unwrap_or(10), report),
                Experiment::Coincidence => sweep_coincidence(n.unwrap_or(7), *force, report),
            }
        }
    }
}

fn generate(kind: Kind, n: usize, seed: u64, lo: f64, hi: f64) -> CliResult<InstanceFile> {
    Ok(match kind {
        Kind::Unique => InstanceFile::gap(gen_unique_gap(n)?, format!("unique n={n}")),
        Kind::RandomGap => InstanceFile::gap(
            gen_random_gap(n, seed, lo, hi)?,
            format!("random-gap n={n} seed={seed} lo={lo:?} hi={hi:?}"),
        ),
        Kind::RandomE2d => InstanceFile::e2d(
            gen_random_points(n, seed, BoundingBox::default())?,
            format!("random-e2d n={n} seed={seed} box=unit"),
        ),
    })
}

fn gen(kind: Kind, n: usize, seed: u64, lo: f64, hi: f64, out: Option<&Path>) -> CliResult<Done> {
    let inst = generate(kind, n, seed, lo, hi)?;
    let text = serialize_instance(&inst);
    let Some(out) = out else {
        print!("{text}");
        return Ok(None);
    };
    write(out, &text)?;
    let seeds = if kind == Kind::Unique {
        vec![]
    } else {
        vec![seed]
    };
    let body = format!("{}out: {}\n", header(&inst), out.display());
    Ok(Some((
        base_report(Some(&inst), seeds, body),
        ReportOut::default(),
    )))
}

fn solve(
    file: &Path,
    mask: Option<&Path>,
    force: bool,
    svg: Option<&Path>,
    report: &ReportOut,
) -> CliResult<Done> {
    let inst = load_instance(file)?;
    let cm = inst.cost_matrix();
    let mask = mask.map(|p| load_mask(&cm, p)).transpose()?;
    let outcome = solve_exact_with(&cm, mask.as_ref(), opts(force))?;
    let mut body = header(&inst);
    if let Some(m) = &mask {
        writeln!(body, "mask_directed_edges: {}", m.len()).unwrap();
    }
    body.push_str(&outcome.report());
    let mut csv = String::from("tour,cost\n");
    if let SolveOutcome::Optimal(sol) = &outcome {
        for t in &sol.opt_tours {
            writeln!(csv, "{},{}", t.to_text(), sol.opt_cost).unwrap();
        }
        if let Some(path) = svg {
            let ps = require_points(&inst, file)?;
            write(path, &render_svg(ps, None, sol.opt_tours.first()))?;
        }
    }
    let mut rr = base_report(Some(&inst), vec![], body);
    rr.csv = Some(csv);
    Ok(Some((rr, report.clone())))
}

#[allow(clippy::too_many_arguments)]
fn reduce(
    file: &Path,
    method: Method,
    tour: Option<&Path>,
    tri: Option<&Path>,
    svg: Option<&Path>,
    force: bool,
    report: &ReportOut,
) -> CliResult<Done> {
    let inst = load_instance(file)?;
    let ps = require_points(&inst, file)?;
    let tour = tour.map(load_tour).transpose()?;
    let r = reduce_instance(ps, method, tour.as_ref(), opts(force))?;
    if let Some(p) = tri {
        write(p, &r.triangulation.to_text())?;
    }
    if let Some(p) = svg {
        write(
            p,
            &render_svg(ps, Some(&r.triangulation), Some(&r.reference_tour)),
        )?;
    }
    let mut csv = String::from("i,j,on_reference_tour\n");
    for (i, j) in r.triangulation.edges() {
        let on = r
            .reference_tour
            .edges()
            .any(|(a, b)| (a, b) == (i, j) || (a, b) == (j, i));
        writeln!(csv, "{},{},{}", i + 1, j + 1, on).unwrap();
    }
    let mut rr = base_report(Some(&inst), vec![], header(&inst) + &r.report());
    rr.csv = Some(csv);
    Ok(Some((rr, report.clone())))
}

#[allow(clippy::too_many_arguments)]
fn scm(
    file: &Path,
    method: Option<Method>,
    mask_path: Option<&Path>,
    eps: f64,
    ppm: Option<&Path>,
    force: bool,
    report: &ReportOut,
) -> CliResult<Done> {
    let inst = load_instance(file)?;
    let cm = inst.cost_matrix();
    let full = solve_exact_with(&cm, None, opts(force))?
        .optimal()
        .expect("complete graph always has a cycle");
    let mask = match (method, mask_path) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage("--method and --mask are exclusive".into()))
        }
        (Some(m), None) => {
            let ps = require_points(&inst, file)?;
            let tr = match m {
                Method::Delaunay => delaunay_triangulate(ps)?,
                Method::Constrained => triangulate_around_tour(ps, &full.opt_tours[0])?,
            };
            Some(restrict_to_edges(&cm, &tr)?)
        }
        (None, Some(p)) => Some(load_mask(&cm, p)?),
        (None, None) => None,
    };
    let scm = build_scm(&cm, mask.as_ref())?;
    let sol = match &mask {
        Some(m) => solve_exact_with(&cm, Some(m), opts(force))?.optimal(),
        None => Some(full.clone()),
    };
    let mut body = header(&inst);
    writeln!(
        body,
        "mask_directed_edges: {}",
        mask.as_ref().map_or(cm.n() * (cm.n() - 1), |m| m.len())
    )
    .unwrap();
    let (frontier, near) = match &sol {
        Some(sol) => {
            let fr = compute_frontier(&scm, &sol.opt_tours[0])?;
            let near: Vec<Tour> = near_optimal_set(&cm, sol, eps, force)?
                .into_iter()
                .map(|(t, _)| t)
                .filter(|t| {
                    mask.as_ref()
                        .is_none_or(|m| t.edges().all(|(a, b)| m.contains(a, b)))
                })
                .collect();
            (Some(fr), near)
        }
        None => (None, vec![]),
    };
    match (&sol, &frontier) {
        (Some(sol), Some(fr)) => {
            writeln!(body, "opt_cost: {}", sol.opt_cost).unwrap();
            writeln!(body, "full_opt_cost: {}", full.opt_cost).unwrap();
            writeln!(body, "solution: {}", sol.opt_tours[0].to_text()).unwrap();
            let ranks: Vec<String> = fr.ranks.iter().map(usize::to_string).collect();
            writeln!(body, "frontier_ranks: {}", ranks.join(" ")).unwrap();
            writeln!(body, "elongation: {:?}", fr.elongation).unwrap();
            writeln!(body, "mean_rank: {:?}", fr.mean_rank).unwrap();
        }
        _ => writeln!(body, "opt_cost: infeasible").unwrap(),
    }
    writeln!(body, "eps: {eps:?}").unwrap();
    writeln!(body, "near_optimal_tours: {}", near.len()).unwrap();
    let pm = render_scm(&scm, frontier.as_ref(), &near);
    writeln!(body, "pixmap: {}x{}", pm.width(), pm.height()).unwrap();
    writeln!(
        body,
        "non_background_columns: {}",
        pm.non_background_columns()
    )
    .unwrap();
    if let Some(p) = ppm {
        write(p, &pm.to_p3())?;
    }
    let mut rr = base_report(Some(&inst), vec![], body);
    rr.csv = Some(scm_csv(&scm, frontier.as_ref(), &near));
    Ok(Some((rr, report.clone())))
}

fn sample(file: &Path, k: u64, seed: u64, force: bool, report: &ReportOut) -> CliResult<Done> {
    let inst = load_instance(file)?;
    let cm = inst.cost_matrix();
    let est = estimate_hit_rate(&cm, k, seed, opts(force))?;
    let mut rr = base_report(Some(&inst), vec![seed], kind_line(&inst) + &est.report());
    if report.csv.is_some() {
        let mut counts: BTreeMap<Tour, u64> = BTreeMap::new();
        for t in sample_cycles(cm.n(), k, seed)? {
            *counts.entry(t).or_default() += 1;
        }
        let mut csv = String::from("tour,cost,count\n");
        for (t, c) in &counts {
            writeln!(csv, "{},{},{}", t.to_text(), tour_cost(&cm, t)?, c).unwrap();
        }
        rr.csv = Some(csv);
    }
    Ok(Some((rr, report.clone())))
}

/// Blocks from files, or generated from sub-seeds of `seed`.
fn blocks(
    a: Option<&Path>,
    b: Option<&Path>,
    n: usize,
    m: usize,
    seed: u64,
) -> CliResult<(BlockSource, CostMatrix, String)> {
    let (block_a, prov_a) = match a {
        Some(p) => {
            let inst = load_instance(p)?;
            let prov = inst
                .provenance
                .clone()
                .unwrap_or_else(|| p.display().to_string());
            let src = match inst.payload {
                Payload::E2d(ps) => BlockSource::E2d(ps),
                Payload::Gap(cm) => BlockSource::Gap(cm),
            };
            (src, prov)
        }
        None => {
            let s = derive_seed(seed, 1);
            let ps = gen_random_points(n, s, BoundingBox::default())?;
            (
                BlockSource::E2d(ps),
                format!("random-e2d n={n} seed={s} box=unit"),
            )
        }
    };
    let (block_b, prov_b) = match b {
        Some(p) => {
            let inst = load_instance(p)?;
            let prov = inst
                .provenance
                .clone()
                .unwrap_or_else(|| p.display().to_string());
            (inst.cost_matrix(), prov)
        }
        None => {
            let s = derive_seed(seed, 2);
            (
                gen_random_gap(m, s, 0.0, 1.0)?,
                format!("random-gap n={m} seed={s} lo=0.0 hi=1.0"),
            )
        }
    };
    Ok((block_a, block_b, format!("A: {prov_a}; B: {prov_b}")))
}

#[allow(clippy::too_many_arguments)]
fn compose(
    a: Option<&Path>,
    b: Option<&Path>,
    n: usize,
    m: usize,
    seed: u64,
    lo: f64,
    hi: Option<f64>,
    out: Option<&Path>,
) -> CliResult<Done> {
    let (block_a, block_b, prov) = blocks(a, b, n, m, seed)?;
    let hi = match hi {
        Some(h) => h,
        None => max_block_cost(&block_a, &block_b)?,
    };
    let comp = compose_instances(&block_a, &block_b, seed, lo, hi)?;
    let provenance = format!("compose {prov}; fill seed={seed} lo={lo:?} hi={hi:?}");
    let inst = InstanceFile::gap(comp.cm.clone(), provenance);
    let text = serialize_instance(&inst);
    let Some(out) = out else {
        print!("{text}");
        return Ok(None);
    };
    write(out, &text)?;
    let audit = triangle_audit(&comp.cm, tspgap::reduction::DEFAULT_AUDIT_TOL);
    let total = comp.cm.n();
    let inherited = comp.block_a.len() * (comp.block_a.len() - 1)
        + comp.block_b.len() * (comp.block_b.len() - 1);
    let mut body = header(&inst);
    writeln!(
        body,
        "block_a: {}..={}",
        comp.block_a.start + 1,
        comp.block_a.end
    )
    .unwrap();
    writeln!(
        body,
        "block_b: {}..={}",
        comp.block_b.start + 1,
        comp.block_b.end
    )
    .unwrap();
    writeln!(body, "fill_seed: {seed}").unwrap();
    writeln!(body, "fill_range: {lo:?} {hi:?}").unwrap();
    writeln!(body, "edges: {}", total * (total - 1)).unwrap();
    writeln!(body, "inherited_edges: {inherited}").unwrap();
    writeln!(body, "random_edges: {}", total * (total - 1) - inherited).unwrap();
    body.push_str(&audit.report());
    writeln!(body, "out: {}", out.display()).unwrap();
    Ok(Some((
        base_report(Some(&inst), vec![seed], body),
        ReportOut::default(),
    )))
}

fn audit(file: &Path, tol: f64, report: &ReportOut) -> CliResult<Done> {
    let inst = load_instance(file)?;
    let a = triangle_audit(&inst.cost_matrix(), tol);
    let mut csv = String::from("i,k,j\n");
    for w in &a.witnesses {
        let (i, k, j) = w.labels();
        writeln!(csv, "{i},{k},{j}").unwrap();
    }
    let mut body = header(&inst);
    writeln!(body, "tolerance: {tol:?}").unwrap();
    body.push_str(&a.report());
    let mut rr = base_report(Some(&inst), vec![], body);
    rr.csv = Some(csv);
    Ok(Some((rr, report.clone())))
}

fn sweep_containment(
    n: usize,
    seeds: Vec<u64>,
    force: bool,
    report: &ReportOut,
) -> CliResult<Done> {
    let stats = delaunay_containment_batch(n, &seeds, opts(force))?;
    let body = format!("experiment: containment\nn: {n}\n{}", stats.report());
    let mut rr = base_report(None, seeds, body);
    rr.provenance = Some(format!("random-e2d n={n} box=unit, one instance per seed"));
    rr.csv = Some(stats.csv());
    Ok(Some((rr, report.clone())))
}

#[allow(clippy::too_many_arguments)]
fn sweep_preservation(
    a: Option<&Path>,
    b: Option<&Path>,
    n: usize,
    m: usize,
    seed: u64,
    seeds: Vec<u64>,
    lo: f64,
    hi: Option<f64>,
    archive: Option<&Path>,
    force: bool,
    report: &ReportOut,
) -> CliResult<Done> {
    let (block_a, block_b, prov) = blocks(a, b, n, m, seed)?;
    let hi = match hi {
        Some(h) => h,
        None => max_block_cost(&block_a, &block_b)?,
    };
    let summary = preservation_search(&block_a, &block_b, &seeds, lo, hi, opts(force))?;
    let mut body = String::from("experiment: preservation\n");
    writeln!(body, "n: {}\nm: {}", block_a.n(), block_b.n()).unwrap();
    writeln!(body, "fill_range: {lo:?} {hi:?}").unwrap();
    body.push_str(&summary.report());
    for t in &summary.block_opt.opt_tours {
        writeln!(body, "block_a_opt_tour: {}", t.to_text()).unwrap();
    }
    if let Some(s) = summary.first_non_preserved {
        let r = summary
            .reports
            .iter()
            .find(|r| r.seed == s)
            .expect("listed seed");
        writeln!(body, "witness_seed: {s}").unwrap();
        writeln!(
            body,
            "witness_triangle_violations: {}",
            r.triangle_violations
        )
        .unwrap();
        for line in r.composed_opt.report().lines() {
            writeln!(body, "witness_{line}").unwrap();
        }
        if let Some(p) = archive {
            let comp = compose_instances(&block_a, &block_b, s, lo, hi)?;
            let provenance = format!("compose {prov}; fill seed={s} lo={lo:?} hi={hi:?}");
            write(
                p,
                &serialize_instance(&InstanceFile::gap(comp.cm, provenance)),
            )?;
            writeln!(body, "archived: {}", p.display()).unwrap();
        }
    }
    let mut rr = base_report(None, seeds, body);
    rr.provenance = Some(prov);
    rr.csv = Some(summary.csv());
    Ok(Some((rr, report.clone())))
}

fn sweep_monotonicity(
    kind: Kind,
    n: usize,
    seeds: Vec<u64>,
    k: u64,
    report: &ReportOut,
) -> CliResult<Done> {
    let seeds = if kind == Kind::Unique {
        vec![seeds[0]]
    } else {
        seeds
    };
    let rows = seeds
        .iter()
        .map(|&s| {
            let inst = generate(kind, n, s, 0.0, 1.0)?;
            Ok((
                s,
                monotonicity_check(&inst.cost_matrix(), k, derive_seed(s, 3)),
            ))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let mut csv =
        String::from("seed,exhaustive,pairs_checked,violations,short,long,short_cost,long_cost\n");
    let mut body = String::from("experiment: monotonicity\n");
    let label = match kind {
        Kind::Unique => "unique",
        Kind::RandomGap => "random-gap",
        Kind::RandomE2d => "random-e2d",
    };
    writeln!(body, "kind: {label}\nn: {n}\ninstances: {}", rows.len()).unwrap();
    let total: u64 = rows.iter().map(|(_, r)| r.violations).sum();
    let violating = rows.iter().filter(|(_, r)| r.violations > 0).count();
    writeln!(
        body,
        "pairs_checked: {}",
        rows.iter().map(|(_, r)| r.pairs_checked).sum::<u64>()
    )
    .unwrap();
    writeln!(body, "violations: {total}").unwrap();
    writeln!(body, "violating_instances: {violating}").unwrap();
    let join = |v: Vec<usize>| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
    for (s, r) in &rows {
        let (short, long, sc, lc) = match &r.first_violation {
            Some(c) => (
                join(c.short.labels()),
                join(c.long.labels()),
                c.short_cost.to_string(),
                c.long_cost.to_string(),
            ),
            None => Default::default(),
        };
        if !short.is_empty() && !body.contains("first_witness") {
            writeln!(
                body,
                "first_witness: seed {s}: ({short}) costs {sc} > ({long}) costs {lc}"
            )
            .unwrap();
        }
        writeln!(
            csv,
            "{s},{},{},{},{short},{long},{sc},{lc}",
            r.exhaustive, r.pairs_checked, r.violations
        )
        .unwrap();
    }
    let mut rr = base_report(
        None,
        if kind == Kind::Unique { vec![] } else { seeds },
        body,
    );
    rr.provenance = Some(match kind {
        Kind::Unique => format!("unique n={n}"),
        _ => format!("{label} n={n}, one instance per seed"),
    });
    rr.csv = Some(csv);
    Ok(Some((rr, report.clone())))
}

fn sweep_bounds(n_max: usize, report: &ReportOut) -> CliResult<Done> {
    let mut body = String::from("experiment: bounds\n");
    let mut csv = String::from(
        "n,p_j,a_star,lower,complement,p_j_exceeds_one,a_star_in_range,lower_bound_holds,upper_claim_holds\n",
    );
    for n in 4..=n_max {
        let b = bounds_report(n)?;
        writeln!(body, "[n={n}]").unwrap();
        body.push_str(&b.report());
        writeln!(
            csv,
            "{n},{},{},{},{},{},{},{},{}",
            b.p_j,
            b.a_star,
            b.lower,
            b.complement,
            b.p_j_exceeds_one,
            b.a_star_in_range,
            b.lower_bound_holds,
            b.upper_claim_holds
        )
        .unwrap();
    }
    let mut rr = base_report(None, vec![], body);
    rr.csv = Some(csv);
    Ok(Some((rr, report.clone())))
}

fn sweep_coincidence(n_max: usize, force: bool, report: &ReportOut) -> CliResult<Done> {
    let mut body = String::from("experiment: coincidence\n");
    let mut csv = String::from("n,tours,max_coincident_edges,n_minus_3\n");
    for n in 4..=n_max {
        let best = max_coincident_edges(n, force)?;
        writeln!(
            body,
            "n={n}: tours {} max_coincident_edges {best} (n-3 = {})",
            cycle_count(n),
            n - 3
        )
        .unwrap();
        writeln!(csv, "{n},{},{best},{}", cycle_count(n), n - 3).unwrap();
    }
    let mut rr = base_report(None, vec![], body);
    rr.csv = Some(csv);
    Ok(Some((rr, report.clone())))
}
