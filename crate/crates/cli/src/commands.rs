//! Subcommand implementations. Each returns a table plus any failed checks.

use std::fs;
use std::path::Path;

use entloc::cluster::{census, fib_f, g_count, gf_series};
use entloc::graphs::{parse_graph6, Bipartition, BipartitionMode, EnsembleKind, EnsembleSpec, Family};
use entloc::graphtest::{ea_graph_witness, exact_expectations, oracle_sweep, ps_approx, ps_bounds, ps_montecarlo};
use entloc::localization::{haar_scan, OptimizerConfig};
use entloc::quantum::{build_graph_state, n_tangle, StateVector, C64};

use crate::args::{EnsembleArg, NumList};
use crate::output::{Cell, Table};
use crate::{CliError, Command, HaarScanArgs, IsoMode, PsArgs};

pub struct Report {
    pub table: Table,
    pub failures: Vec<String>,
}

impl Report {
    fn ok(table: Table) -> Self {
        Self {
            table,
            failures: Vec::new(),
        }
    }
}

pub fn dispatch(cmd: &Command) -> Result<Report, CliError> {
    match cmd {
        Command::Tangle { state } => tangle(state),
        Command::TestGraph { graph6, a_mask } => test_graph(graph6, *a_mask),
        Command::Ps(a) => ps(a),
        Command::HaarScan(a) => scan(a),
        Command::Cluster { n_range } => cluster(n_range),
        Command::Verify {
            exact_expectations,
            oracle,
            max_n,
        } => verify(!*exact_expectations, !*oracle, *max_n),
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn tangle(spec: &str) -> Result<Report, CliError> {
    let (kind, arg) = spec
        .split_once(':')
        .ok_or_else(|| usage(format!("state '{spec}' is not of the form kind:value")))?;
    let count = || {
        arg.parse::<usize>()
            .map_err(|_| usage(format!("'{arg}' is not a qubit count")))
    };
    let psi = match kind {
        "ghz" => StateVector::ghz(count()?)?,
        "w" => StateVector::w(count()?)?,
        "graph6" => build_graph_state(&parse_graph6(arg)?)?,
        "file" => read_state_file(Path::new(arg))?,
        _ => return Err(usage(format!("unknown state kind '{kind}' (ghz, w, graph6, file)"))),
    };
    let mut t = Table::new(&["state", "n_qubits", "tangle"]);
    t.push(vec![spec.into(), psi.n_qubits().into(), n_tangle(&psi).into()]);
    Ok(Report::ok(t))
}

fn read_state_file(path: &Path) -> Result<StateVector, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let bad = |what: String| usage(format!("{}: {what}", path.display()));
    let n: usize = lines
        .next()
        .ok_or_else(|| bad("empty state file".into()))?
        .parse()
        .map_err(|_| bad("first line must be the qubit count".into()))?;
    if n > entloc::quantum::STATE_MAX_QUBITS {
        return Err(bad(format!("{n} qubits exceeds {}", entloc::quantum::STATE_MAX_QUBITS)));
    }
    let mut amp = Vec::with_capacity(1 << n);
    for (i, line) in lines.enumerate() {
        let mut parts = line.split_whitespace().map(str::parse::<f64>);
        match (parts.next(), parts.next(), parts.next()) {
            (Some(Ok(re)), Some(Ok(im)), None) => amp.push(C64::new(re, im)),
            _ => return Err(bad(format!("amplitude line {} is not 're im'", i + 1))),
        }
    }
    if amp.len() != 1 << n {
        return Err(bad(format!("expected {} amplitudes, found {}", 1usize << n, amp.len())));
    }
    Ok(StateVector::new(n, amp)?)
}

fn test_graph(graph6: &str, a_mask: u64) -> Result<Report, CliError> {
    let g = parse_graph6(graph6)?;
    let bp = Bipartition::new(g.n(), a_mask)?;
    if bp.n_b() % 2 != 0 {
        return Err(usage(format!(
            "|B| = {} is odd; the n-tangle and the matrix test are defined for an even number of target qubits",
            bp.n_b()
        )));
    }
    let witness = ea_graph_witness(&g, &bp)?;
    let mut t = Table::new(&["graph6", "n", "a_mask", "n_a", "n_b", "solvable", "witness"]);
    let bits = witness.as_ref().map_or(Cell::Empty, |x| {
        Cell::Text(x.to_bits().iter().map(|&b| if b { '1' } else { '0' }).collect())
    });
    t.push(vec![
        graph6.into(),
        g.n().into(),
        a_mask.into(),
        bp.n_a().into(),
        bp.n_b().into(),
        u64::from(witness.is_some()).into(),
        bits,
    ]);
    Ok(Report::ok(t))
}

fn ps(a: &PsArgs) -> Result<Report, CliError> {
    if !(a.r > 0.0 && a.r < 1.0) {
        return Err(usage(format!("--r must lie in (0, 1), got {}", a.r)));
    }
    let iso_mode = match (&a.ensemble, a.mode) {
        (EnsembleArg::Iso, m) => Some(match m.unwrap_or(IsoMode::Fixed) {
            IsoMode::Fixed => BipartitionMode::FixedSize,
            IsoMode::Any => BipartitionMode::AnyEvenTarget,
        }),
        (_, Some(_)) => return Err(usage("--mode applies to --ensemble iso only")),
        (_, None) => None,
    };
    let any = iso_mode == Some(BipartitionMode::AnyEvenTarget);
    let kind = match &a.ensemble {
        EnsembleArg::Uniform => EnsembleKind::Uniform,
        EnsembleArg::Family(name) => EnsembleKind::Family {
            family: name.parse::<Family>()?,
        },
        EnsembleArg::Iso => EnsembleKind::IsomorphismClass {
            source: a
                .graph6_file
                .clone()
                .ok_or_else(|| usage("--ensemble iso needs --graph6-file"))?,
            mode: iso_mode.expect("iso mode"),
            connected_only: a.connected_only,
        },
    };
    if a.graph6_file.is_some() && !matches!(a.ensemble, EnsembleArg::Iso) {
        return Err(usage("--graph6-file applies to --ensemble iso only"));
    }

    let mut points = Vec::new();
    for &n in &a.n.values {
        if any {
            points.push((n, 0));
            continue;
        }
        let na = a.na.as_ref().ok_or_else(|| usage("--na is required"))?;
        for &n_a in &na.values {
            if n_a == 0 {
                return Err(usage("--na 0 leaves A empty; measure at least one qubit"));
            }
            if n_a >= n || (n - n_a) % 2 != 0 {
                if na.ranged {
                    continue;
                }
                return Err(usage(format!(
                    "n = {n}, n_a = {n_a}: need n_a < n and an even number of target qubits"
                )));
            }
            points.push((n, n_a));
        }
    }
    if points.is_empty() {
        return Err(usage("no valid (n, n_a) combination"));
    }

    let mut t = Table::new(&[
        "ensemble",
        "n",
        "n_a",
        "trials",
        "successes",
        "p_hat",
        "stderr",
        "approx",
        "lower",
        "upper",
    ]);
    for (n, n_a) in points {
        let spec = EnsembleSpec {
            kind: kind.clone(),
            n,
            n_a,
        };
        let est = ps_montecarlo(&spec, a.trials, a.seed)?;
        let (n_a_cell, approx, lower, upper) = if any {
            (Cell::Text("any".into()), Cell::Empty, Cell::Empty, Cell::Empty)
        } else {
            let d_a = 2f64.powi(n_a as i32);
            let d_b = 2f64.powi((n - n_a) as i32);
            let (lo, hi) = ps_bounds(d_a, d_b, a.r)?;
            (n_a.into(), ps_approx(d_a, d_b).into(), lo.into(), hi.into())
        };
        t.push(vec![
            a.ensemble.to_string().into(),
            n.into(),
            n_a_cell,
            est.trials.into(),
            est.successes.into(),
            est.estimate.into(),
            est.std_error.into(),
            approx,
            lower,
            upper,
        ]);
    }
    Ok(Report::ok(t))
}

fn scan(a: &HaarScanArgs) -> Result<Report, CliError> {
    let cfg = OptimizerConfig {
        restarts: a.restarts,
        max_evals: a.max_evals,
        tolerance: a.tol,
        seed: a.seed,
    };
    let mut t = Table::new(&[
        "n_a",
        "n_b",
        "samples",
        "mean_ea",
        "std_ea",
        "mean_le",
        "std_le",
        "k",
        "ea_typical",
    ]);
    for &n_a in &a.na_range.values {
        let row = haar_scan(n_a, a.nb, a.samples, a.seed, a.with_le.then_some(&cfg))?;
        t.push(vec![
            row.n_a.into(),
            row.n_b.into(),
            row.samples.into(),
            row.mean_ea.into(),
            row.std_ea.into(),
            row.mean_le.into(),
            row.std_le.into(),
            row.k.into(),
            row.ea_typical.into(),
        ]);
    }
    Ok(Report::ok(t))
}

fn cluster(range: &NumList) -> Result<Report, CliError> {
    let max = range.values.iter().copied().max().unwrap_or(0);
    let series = gf_series(max + 1);
    let mut failures = Vec::new();
    let mut t = Table::new(&[
        "n",
        "configurations",
        "s_count",
        "t_count",
        "ratio",
        "f_n",
        "g_n",
        "g_series",
        "inclusion",
    ]);
    for &n in &range.values {
        let c = census(n)?;
        let g = g_count(n)?;
        let series_ok = series[n].to_biguint().as_ref() == Some(&g);
        let inclusion_ok = c.inclusion_violations == 0;
        if !series_ok {
            failures.push(format!(
                "n = {n}: g(n) = {g} differs from the series coefficient {}",
                series[n]
            ));
        }
        if !inclusion_ok {
            failures.push(format!(
                "n = {n}: {} configurations in T but not in S",
                c.inclusion_violations
            ));
        }
        t.push(vec![
            n.into(),
            c.configurations.into(),
            c.s_count.into(),
            c.t_count.into(),
            c.ratio.into(),
            fib_f(n).to_string().into(),
            g.to_string().into(),
            if series_ok { "ok" } else { "mismatch" }.into(),
            if inclusion_ok { "ok" } else { "violated" }.into(),
        ]);
    }
    Ok(Report { table: t, failures })
}

const EXPECTATION_POINTS: [(usize, usize); 4] = [(3, 1), (4, 2), (5, 1), (5, 3)];
const EXPECTATION_TOL: f64 = 1e-12;

fn verify(oracle: bool, expectations: bool, max_n: usize) -> Result<Report, CliError> {
    let mut failures = Vec::new();
    let mut t = Table::new(&["suite", "n", "n_a", "cases", "failures", "max_deviation", "status"]);
    if oracle {
        for n in 2..=max_n {
            let r = oracle_sweep(n)?;
            let pass = r.mismatches == 0;
            if !pass {
                failures.push(format!(
                    "oracle n = {n}: {} of {} cases disagree",
                    r.mismatches, r.cases
                ));
            }
            t.push(vec![
                "oracle".into(),
                n.into(),
                Cell::Empty,
                r.cases.into(),
                r.mismatches.into(),
                r.max_distance_from_binary.into(),
                if pass { "pass" } else { "fail" }.into(),
            ]);
        }
    }
    if expectations {
        for (n, n_a) in EXPECTATION_POINTS {
            let e = exact_expectations(n, n_a)?;
            let dev = e.max_deviation();
            let pass = dev <= EXPECTATION_TOL;
            if !pass {
                failures.push(format!("expectations (n, n_a) = ({n}, {n_a}): deviation {dev:e}"));
            }
            t.push(vec![
                "expectations".into(),
                n.into(),
                n_a.into(),
                (1u64 << (n * (n - 1) / 2)).into(),
                u64::from(!pass).into(),
                dev.into(),
                if pass { "pass" } else { "fail" }.into(),
            ]);
        }
    }
    Ok(Report { table: t, failures })
}
