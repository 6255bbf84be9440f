//! Command-line front end: builds the family, runs inductions, computes
//! measures, executes the lemma suite and dimension series, and emits
//! bit-exact JSON/CSV reports.
//!
//! Exit codes: 0 pass, 1 verified-property failure, 2 usage error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use ietlab::dimension::{
    argmin_interval, check_series_invariants, compute_series, default_window, liminf_estimate,
    measure_index_set,
};
use ietlab::lemmas::{minimal_passing_p, run_all, LemmaCheck};
use ietlab::report::{
    dimension_csv, envelope, f64_15, measures_csv, rational_str, write_output, TOOL_VERSION,
};
use ietlab::{
    base_permutation, cycle_word, realize_word, validate_family, Error, MeasureLab,
    ParameterSchedule, RauzyState, RunWord, StopReason,
};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

fn parse_biguint(s: &str) -> Result<BigUint, String> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("expected a decimal integer, got {s:?}"));
    }
    BigUint::parse_bytes(s.as_bytes(), 10).ok_or_else(|| format!("bad integer {s:?}"))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Parser)]
#[command(
    name = "ietlab",
    version,
    about = "Exact laboratory for a non-uniquely ergodic family of interval exchange transformations"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct ScheduleArgs {
    /// Number of intervals (>= 4)
    #[arg(long)]
    n: usize,
    /// Schedule base p >= n+1 (decimal string, arbitrary precision)
    #[arg(long, value_parser = parse_biguint)]
    p: BigUint,
    /// Schedule origin c_1 > p; defaults to p^2
    #[arg(long, value_parser = parse_biguint)]
    c1: Option<BigUint>,
    /// Number of cycles in the truncation
    #[arg(long)]
    m: usize,
}

impl ScheduleArgs {
    fn build(&self) -> Result<ParameterSchedule, Error> {
        match &self.c1 {
            Some(c1) => ParameterSchedule::new(self.n, &self.p, c1, self.m),
            None => ParameterSchedule::with_default_origin(self.n, &self.p, self.m),
        }
    }

    fn config_json(&self, extra: Value) -> Value {
        let mut cfg = json!({
            "n": self.n,
            "p": self.p.to_string(),
            "c1": self.c1.as_ref().map(|c| c.to_string()),
            "m": self.m,
        });
        if let (Value::Object(cfg_map), Value::Object(extra_map)) = (&mut cfg, extra) {
            cfg_map.extend(extra_map);
        }
        cfg
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the base permutation, cycle word, closed-form matrix, and the
    /// verdict of the word-product oracle for one (n, a, c)
    Family {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_biguint)]
        a: BigUint,
        #[arg(long, value_parser = parse_biguint)]
        c: BigUint,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Realize the induction word of the truncation lengths and compare it
    /// with the concatenated cycle words
    Induce {
        #[command(flatten)]
        sched: ScheduleArgs,
        /// Cap on the number of canonical runs realized
        #[arg(long, default_value_t = 100_000)]
        max_runs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Normalized limits, pairwise distances, measure tables, return times
    Measures {
        #[command(flatten)]
        sched: ScheduleArgs,
        /// Deepest level K of the tables (default m-2)
        #[arg(long)]
        levels: Option<usize>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the exact lemma suite L1-L12
    Lemmas {
        #[command(flatten)]
        sched: ScheduleArgs,
        /// Deepest level K checked
        #[arg(long)]
        levels: usize,
        /// Also sweep p through {n+1, 2n, 4n, 8n, 16n} with c1 = p^2 and
        /// report the minimal passing p per lemma
        #[arg(long)]
        sweep: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dimension-estimate series for a pair of measures
    Dimension {
        #[command(flatten)]
        sched: ScheduleArgs,
        /// Deepest level K of the series (requires K <= m-2)
        #[arg(long)]
        levels: usize,
        /// Seed of the measured side
        #[arg(long)]
        i: usize,
        /// Seed of the metric side
        #[arg(long)]
        j: usize,
        /// Tail window of the liminf surrogate (default ceil(K/3))
        #[arg(long)]
        window: Option<usize>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed form vs word product over a grid, or apply an explicit run
    /// word to the base permutation
    Oracle {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_parser = parse_biguint)]
        a: Option<BigUint>,
        #[arg(long, value_parser = parse_biguint)]
        c: Option<BigUint>,
        /// Run word in text form, e.g. "0 1^3 0^12 1 0^2"
        #[arg(long)]
        word: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::OracleMismatch { .. }
        | Error::NotClosed
        | Error::LevelMismatch { .. }
        | Error::RauzyTie { .. }
        | Error::LogUndecided { .. } => 1,
        _ => 2,
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: exit_code_for(&e),
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: 2,
            message: format!("io error: {e}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.cmd {
        Cmd::Family { n, a, c, format, out } => cmd_family(n, &a, &c, format, out.as_deref()),
        Cmd::Induce { sched, max_runs, out } => cmd_induce(&sched, max_runs, out.as_deref()),
        Cmd::Measures {
            sched,
            levels,
            format,
            out,
        } => cmd_measures(&sched, levels, format, out.as_deref()),
        Cmd::Lemmas {
            sched,
            levels,
            sweep,
            format,
            out,
        } => cmd_lemmas(&sched, levels, sweep, format, out.as_deref()),
        Cmd::Dimension {
            sched,
            levels,
            i,
            j,
            window,
            format,
            out,
        } => cmd_dimension(&sched, levels, i, j, window, format, out.as_deref()),
        Cmd::Oracle { n, a, c, word, out } => cmd_oracle(n, a, c, word, out.as_deref()),
    }
}

fn theta_strings(m: &ietlab::TransitionMatrix) -> Vec<Vec<String>> {
    (0..m.n())
        .map(|r| (0..m.n()).map(|c| m.entry(r, c).to_string()).collect())
        .collect()
}

fn cmd_family(
    n: usize,
    a: &BigUint,
    c: &BigUint,
    format: Format,
    out: Option<&std::path::Path>,
) -> Result<bool, Failure> {
    let report = validate_family(n, a, c)?;
    let perm = base_permutation(n)?;
    let word = cycle_word(a, c, n)?;
    let theta = ietlab::theta_closed_form(a, c, n)?;
    let ok = report.is_ok();
    let results = json!({
        "permutation": perm.images(),
        "odd_variant": n % 2 == 1,
        "cycle_word": word.to_string(),
        "cycle_word_letters": word.letter_count().to_string(),
        "theta": theta_strings(&theta),
        "closed_loop": report.closed_loop,
        "oracle": if ok { "equal" } else { "mismatch" },
        "first_mismatch": report.first_mismatch.as_ref().map(|(r, c, cl, pa)| json!({
            "row": r, "col": c, "closed": cl, "path": pa,
        })),
    });
    let doc = envelope(
        json!({"command": "family", "n": n, "a": a.to_string(), "c": c.to_string()}),
        results,
        ok,
    );
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&doc).expect("serializable"),
        Format::Csv => {
            let mut s = String::from("row,entries\n");
            for (r, row) in theta_strings(&theta).iter().enumerate() {
                s.push_str(&format!("{},{}\n", r + 1, row.join(" ")));
            }
            s
        }
    };
    write_output(out, &text)?;
    Ok(ok)
}

fn expected_prefix(sched: &ParameterSchedule) -> Result<RunWord, Error> {
    let mut expected = RunWord::empty();
    for i in 1..=sched.m() {
        expected.concat(&cycle_word(sched.a(i), sched.c(i), sched.n())?);
    }
    Ok(expected)
}

fn cmd_induce(
    args: &ScheduleArgs,
    max_runs: usize,
    out: Option<&std::path::Path>,
) -> Result<bool, Failure> {
    let sched = args.build()?;
    let lab = MeasureLab::new(sched.clone())?;
    let iet = lab.truncation_iet()?;
    let expected = expected_prefix(&sched)?;
    let (realized, stop) = realize_word(&iet, max_runs.max(expected.run_count() + 1))?;
    let full_match = expected.is_prefix_of(&realized);
    // count how many whole cycle words match as a prefix
    let mut matched_cycles = 0usize;
    let mut acc = RunWord::empty();
    for i in 1..=sched.m() {
        acc.concat(&cycle_word(sched.a(i), sched.c(i), sched.n())?);
        if acc.is_prefix_of(&realized) {
            matched_cycles = i;
        } else {
            break;
        }
    }
    let divergence = if full_match {
        None
    } else {
        let idx = realized
            .runs()
            .iter()
            .zip(expected.runs())
            .position(|(a, b)| a != b)
            .unwrap_or_else(|| realized.run_count().min(expected.run_count()));
        Some(json!({
            "run_index": idx,
            "realized": realized.runs().get(idx).map(|(t, q)| format!("{}^{}", t.as_char(), q)),
            "expected": expected.runs().get(idx).map(|(t, q)| format!("{}^{}", t.as_char(), q)),
        }))
    };
    let stop_str = match stop {
        StopReason::MaxRuns => "max-runs".to_string(),
        StopReason::Tie { step } => format!("tie at letter {step}"),
    };
    let results = json!({
        "expected_word": expected.to_string(),
        "realized_word": realized.to_string(),
        "prefix_match_cycles": matched_cycles,
        "full_match": full_match,
        "stop": stop_str,
        "divergence": divergence,
    });
    let doc = envelope(
        args.config_json(json!({"command": "induce"})),
        results,
        full_match,
    );
    write_output(out, &serde_json::to_string_pretty(&doc).expect("serializable"))?;
    Ok(full_match)
}

fn cmd_measures(
    args: &ScheduleArgs,
    levels: Option<usize>,
    format: Format,
    out: Option<&std::path::Path>,
) -> Result<bool, Failure> {
    let sched = args.build()?;
    let levels = levels.unwrap_or(sched.m().saturating_sub(2));
    if levels > sched.m() {
        return Err(Failure {
            code: 2,
            message: format!("levels {levels} exceeds m = {}", sched.m()),
        });
    }
    let lab = MeasureLab::new(sched)?;
    let n = lab.n();
    let telescoping = lab.check_telescoping();
    let mut partition = true;
    for j in 1..=n {
        for k in 0..=levels {
            partition &= lab.partition_of_unity(j, k);
        }
    }
    let ok = telescoping && partition;
    if format == Format::Csv {
        write_output(out, &measures_csv(&lab, levels))?;
        return Ok(ok);
    }
    let limits: Vec<Value> = (1..=n)
        .map(|j| {
            json!({
                "j": j,
                "vector": lab.normalized_limit(j).iter().map(rational_str).collect::<Vec<_>>(),
                "convergence_l1_last_step": lab.limit_convergence(j).map(|d| rational_str(&d)),
            })
        })
        .collect();
    let mut pairwise = Vec::new();
    for j1 in 1..=n {
        for j2 in j1..=n {
            let d = lab.pairwise_l1(j1, j2);
            pairwise.push(json!({
                "j1": j1,
                "j2": j2,
                "distance": rational_str(&d),
                "distance_f64": f64_15(d.to_f64().unwrap_or(f64::NAN)),
            }));
        }
    }
    let return_times: Vec<Value> = (0..=levels)
        .map(|k| {
            json!({
                "k": k,
                "b": (1..=n).map(|i| lab.return_time(k, i).to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    let tables: Vec<Value> = (1..=n)
        .flat_map(|j| {
            (0..=levels).flat_map(move |k| {
                (1..=n).map(move |i| (j, k, i))
            })
        })
        .map(|(j, k, i)| {
            let v = lab.measure_of_interval(j, k, i);
            json!({"j": j, "k": k, "i": i, "numerator": v.numer().to_string(), "denominator": v.denom().to_string()})
        })
        .collect();
    let results = json!({
        "limits": limits,
        "pairwise_l1": pairwise,
        "return_times": return_times,
        "table": tables,
        "telescoping": telescoping,
        "partition_of_unity": partition,
    });
    let doc = envelope(
        args.config_json(json!({"command": "measures", "levels": levels})),
        results,
        ok,
    );
    write_output(out, &serde_json::to_string_pretty(&doc).expect("serializable"))?;
    Ok(ok)
}

fn lemma_json(check: &LemmaCheck, params: &Value) -> Value {
    json!({
        "lemma_id": check.lemma.to_string(),
        "description": check.lemma.description(),
        "params": params,
        "instances_checked": check.instances_checked,
        "failures": check.failures.iter().map(|f| json!({
            "j": f.j, "k": f.k, "i": f.i, "lhs": f.lhs, "rhs": f.rhs,
        })).collect::<Vec<_>>(),
        "notes": check.notes,
    })
}

fn cmd_lemmas(
    args: &ScheduleArgs,
    levels: usize,
    sweep: bool,
    format: Format,
    out: Option<&std::path::Path>,
) -> Result<bool, Failure> {
    let sched = args.build()?;
    let lab = MeasureLab::new(sched)?;
    let report = run_all(&lab, levels)?;
    let all_pass = report.all_passed();
    let params = args.config_json(json!({"levels": levels}));
    let mut results = json!({
        "lemmas": report.checks.iter().map(|c| lemma_json(c, &params)).collect::<Vec<_>>(),
        "all_pass": all_pass,
    });
    if sweep {
        let minima = minimal_passing_p(args.n, args.m, levels)?;
        results["minimal_passing_p"] = json!(minima
            .iter()
            .map(|(id, p)| json!({
                "lemma_id": id.to_string(),
                "p": p.as_ref().map(|v| v.to_string()),
            }))
            .collect::<Vec<_>>());
    }
    let doc = envelope(
        args.config_json(json!({"command": "lemmas", "levels": levels})),
        results,
        all_pass,
    );
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&doc).expect("serializable"),
        Format::Csv => {
            let mut s = String::from("lemma_id,instances_checked,failures\n");
            for c in &report.checks {
                s.push_str(&format!(
                    "{},{},{}\n",
                    c.lemma,
                    c.instances_checked,
                    c.failures.len()
                ));
            }
            s
        }
    };
    write_output(out, &text)?;
    Ok(all_pass)
}

fn cmd_dimension(
    args: &ScheduleArgs,
    levels: usize,
    i: usize,
    j: usize,
    window: Option<usize>,
    format: Format,
    out: Option<&std::path::Path>,
) -> Result<bool, Failure> {
    let sched = args.build()?;
    let index_set = measure_index_set(args.n);
    if !index_set.contains(&i) || !index_set.contains(&j) || i == j {
        return Err(Failure {
            code: 2,
            message: format!("(i, j) must be distinct members of {index_set:?}"),
        });
    }
    let lab = MeasureLab::new(sched)?;
    let series = compute_series(&lab, i, j, levels)?;
    let window = window.unwrap_or_else(|| default_window(levels));
    let invariants = check_series_invariants(&lab, i, j, levels)?;
    let mut argmins = Vec::new();
    let mut argmin_ok = true;
    for k in 2..=levels.min(4) {
        let t = argmin_interval(&lab, i, j, k)?;
        argmin_ok &= t == i;
        argmins.push(json!({"k": k, "t": t}));
    }
    let ok = invariants.all_hold() && argmin_ok;
    if format == Format::Csv {
        write_output(out, &dimension_csv(&series))?;
        return Ok(ok);
    }
    let lower = series.lower();
    let upper = series.upper();
    let results = json!({
        "i": i,
        "j": j,
        "window": window,
        "rows": series.rows.iter().map(|r| json!({
            "k": r.k,
            "lower": f64_15(r.lower),
            "upper": f64_15(r.upper),
            "gap_bound": f64_15(r.gap),
            "lambda_i": rational_str(&r.lambda_i),
            "lambda_j": rational_str(&r.lambda_j),
            "b": r.return_time.to_string(),
        })).collect::<Vec<_>>(),
        "liminf_lower": f64_15(liminf_estimate(&lower, window)?),
        "liminf_upper": f64_15(liminf_estimate(&upper, window)?),
        "convergence_deficit": f64_15(1.0 - liminf_estimate(&upper, window)?),
        "argmin": argmins,
        "invariants": json!({
            "upper_le_one": invariants.upper_le_one,
            "upper_le_lower": invariants.upper_le_lower,
            "lower_le_upper_plus_gap": invariants.lower_le_upper_plus_gap,
            "gap_strictly_decreasing": invariants.gap_strictly_decreasing,
            "argmin_at_seed": argmin_ok,
        }),
    });
    let doc = envelope(
        args.config_json(json!({"command": "dimension", "levels": levels, "i": i, "j": j, "window": window})),
        results,
        ok,
    );
    write_output(out, &serde_json::to_string_pretty(&doc).expect("serializable"))?;
    Ok(ok)
}

fn cmd_oracle(
    n: Option<usize>,
    a: Option<BigUint>,
    c: Option<BigUint>,
    word: Option<String>,
    out: Option<&std::path::Path>,
) -> Result<bool, Failure> {
    if let Some(text) = word {
        let n = n.ok_or(Failure {
            code: 2,
            message: "--word requires --n".into(),
        })?;
        let parsed = RunWord::from_str(&text)?;
        let perm = base_permutation(n)?;
        let start = RauzyState::from_permutation(&perm)?;
        let (end, theta) = ietlab::word_transition(&start, &parsed);
        let closed = end == start;
        let results = json!({
            "word_canonical": parsed.to_string(),
            "letters": parsed.letter_count().to_string(),
            "final_top": end.top(),
            "final_bottom": end.bottom(),
            "closed_at_base": closed,
            "theta": theta_strings(&theta),
        });
        let doc = envelope(json!({"command": "oracle", "n": n, "word": text}), results, true);
        write_output(out, &serde_json::to_string_pretty(&doc).expect("serializable"))?;
        return Ok(true);
    }
    let (ns, avals, cvals): (Vec<usize>, Vec<BigUint>, Vec<BigUint>) = match (n, &a, &c) {
        (Some(n), Some(a), Some(c)) => (vec![n], vec![a.clone()], vec![c.clone()]),
        (Some(n), None, None) => (
            vec![n],
            [1u32, 2, 3, 7].map(BigUint::from).to_vec(),
            [1u32, 2, 3, 7].map(BigUint::from).to_vec(),
        ),
        (None, None, None) => (
            (4..=9).collect(),
            [1u32, 2, 3, 7].map(BigUint::from).to_vec(),
            [1u32, 2, 3, 7].map(BigUint::from).to_vec(),
        ),
        _ => {
            return Err(Failure {
                code: 2,
                message: "oracle takes --n [--a --c] or nothing".into(),
            })
        }
    };
    let mut all_ok = true;
    let mut grid = Vec::new();
    for &n in &ns {
        for av in &avals {
            for cv in &cvals {
                let rep = validate_family(n, av, cv)?;
                all_ok &= rep.is_ok();
                grid.push(json!({
                    "n": n,
                    "a": av.to_string(),
                    "c": cv.to_string(),
                    "closed_loop": rep.closed_loop,
                    "equal": rep.matrices_equal,
                }));
            }
        }
    }
    let doc = envelope(
        json!({"command": "oracle", "grid": true}),
        json!({"cases": grid}),
        all_ok,
    );
    write_output(out, &serde_json::to_string_pretty(&doc).expect("serializable"))?;
    let _ = TOOL_VERSION;
    Ok(all_ok)
}
