use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use gridmono::export::export_graph;
use gridmono::kasteleyn::{build_k_kronecker, dimer_matrix};
use gridmono::oracle::visit_loop_vertex_configs;
use gridmono::verify::run_suite;
use gridmono::weights::format_rational;
use gridmono::{build_grid, build_k_from_graph, GridSpec, WeightSpec};
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::json;

use crate::error::CliError;
use crate::eval::{evaluate, formula_for, Evaluation};
use crate::request::{
    Builder, ComputeRequest, ConfigsRequest, ExportRequest, MatrixRequest, MethodSel, OutputFormat,
    RunRequest, SweepRequest, VerifyRequest,
};

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn stdout_err(source: std::io::Error) -> CliError {
    CliError::Io {
        path: "<stdout>".into(),
        source,
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(io_err(path))
}

/// Runs a request. `Ok(true)` iff every check it performs passes.
pub fn execute(
    req: &RunRequest,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<bool, CliError> {
    match req {
        RunRequest::Compute(r) => compute(r, out),
        RunRequest::Verify(r) => verify(r, out, err),
        RunRequest::Sweep(r) => sweep(r, out),
        RunRequest::Export(r) => export(r, out),
        RunRequest::Matrix(r) => matrix(r, out),
        RunRequest::Configs(r) => configs(r, out),
    }
}

fn weights_json(w: &WeightSpec) -> serde_json::Value {
    json!({
        "x": format_rational(&w.x),
        "a": w.a.iter().map(format_rational).collect::<Vec<_>>(),
        "arithmetic": w.arithmetic.to_string(),
    })
}

fn spec_json(s: &GridSpec) -> serde_json::Value {
    json!({ "mode": s.mode_arg(), "dims": s.dims() })
}

fn passed(e: &Evaluation) -> bool {
    e.agree != Some(false) && !e.has_failure()
}

pub fn csv_header(d: usize) -> Vec<String> {
    let mut h: Vec<String> = ["mode", "dims", "x"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    h.extend((1..=d).map(|i| format!("a{i}")));
    h.extend(
        ["Z_det", "Z_formula", "Z_enum", "rel_dev", "agree"]
            .iter()
            .map(|s| s.to_string()),
    );
    h
}

fn fmt_dev(d: Option<f64>) -> String {
    d.map(|v| format!("{v:.3e}")).unwrap_or_default()
}

fn csv_row(spec: &GridSpec, w: &WeightSpec, e: &Evaluation) -> Vec<String> {
    let mut row = vec![spec.mode_arg(), spec.dims_label(), format_rational(&w.x)];
    row.extend(w.a.iter().map(format_rational));
    row.extend(e.cells().iter().map(|(_, c)| c.text()));
    row.push(fmt_dev(e.rel_dev));
    row.push(e.agree.map(|a| a.to_string()).unwrap_or_default());
    row
}

fn compute(r: &ComputeRequest, out: &mut dyn Write) -> Result<bool, CliError> {
    if r.method == MethodSel::Formula {
        formula_for(&r.spec)?;
    }
    let e = evaluate(&r.spec, &r.weights, r.method, r.tolerance);
    match r.format {
        OutputFormat::Text => {
            writeln!(out, "grid: {} (N = {})", r.spec, r.spec.num_vertices())
                .map_err(stdout_err)?;
            writeln!(out, "weights: {}", r.weights).map_err(stdout_err)?;
            for (m, c) in e.cells() {
                if !matches!(c, crate::eval::Cell::NotRequested) {
                    writeln!(out, "{m}: {}", c.text()).map_err(stdout_err)?;
                }
            }
            if let Some(d) = e.rel_dev {
                writeln!(out, "rel_dev: {}", fmt_dev(Some(d))).map_err(stdout_err)?;
            }
            if let Some(a) = e.agree {
                writeln!(out, "agree: {a}").map_err(stdout_err)?;
            }
        }
        OutputFormat::Json => {
            let mut results = serde_json::Map::new();
            for (m, c) in e.cells() {
                if !matches!(c, crate::eval::Cell::NotRequested) {
                    results.insert(m.to_string(), c.to_json());
                }
            }
            let report = json!({
                "schema": SCHEMA_VERSION,
                "command": "compute",
                "spec": spec_json(&r.spec),
                "vertices": r.spec.num_vertices(),
                "weights": weights_json(&r.weights),
                "method": r.method.to_string(),
                "results": results,
                "rel_dev": e.rel_dev,
                "agree": e.agree,
                "tolerance": r.tolerance,
            });
            writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&report).expect("plain data")
            )
            .map_err(stdout_err)?;
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(csv_header(r.spec.dim()))?;
            w.write_record(csv_row(&r.spec, &r.weights, &e))?;
            w.flush().map_err(stdout_err)?;
        }
    }
    Ok(passed(&e))
}

fn verify(r: &VerifyRequest, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool, CliError> {
    let mut log: Box<dyn Write + '_> = match &r.log {
        Some(p) => Box::new(create(p)?),
        None => Box::new(&mut *out),
    };
    let mut summary = Vec::new();
    let mut all = true;
    for &suite in &r.suites {
        let report = run_suite(suite, r.seed);
        for case in &report.cases {
            writeln!(log, "{}", case.to_json_line()).map_err(stdout_err)?;
        }
        let ok = report.passed();
        all &= ok;
        summary.push(format!(
            "{suite}: {}/{} passed{}",
            report.count_passed(),
            report.cases.len(),
            if ok { "" } else { " FAIL" }
        ));
    }
    log.flush().map_err(stdout_err)?;
    drop(log);
    let sink: &mut dyn Write = if r.log.is_some() { out } else { err };
    for line in summary {
        writeln!(sink, "{line}").map_err(stdout_err)?;
    }
    Ok(all)
}

fn sweep(r: &SweepRequest, out: &mut dyn Write) -> Result<bool, CliError> {
    let mut file;
    let sink: &mut dyn Write = match &r.output {
        Some(p) => {
            file = create(p)?;
            &mut file
        }
        None => out,
    };
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(csv_header(r.spec.dim()))?;
    let mut ok = true;
    for weights in r.points() {
        let e = evaluate(&r.spec, &weights, MethodSel::All, r.tolerance);
        ok &= passed(&e);
        w.write_record(csv_row(&r.spec, &weights, &e))?;
    }
    w.flush().map_err(stdout_err)?;
    Ok(ok)
}

fn export(r: &ExportRequest, out: &mut dyn Write) -> Result<bool, CliError> {
    let text = export_graph(&build_grid(&r.spec)?, &r.format.to_string())?;
    match &r.output {
        Some(p) => {
            let mut f = create(p)?;
            f.write_all(text.as_bytes()).map_err(io_err(p))?;
            f.flush().map_err(io_err(p))?;
        }
        None => out.write_all(text.as_bytes()).map_err(stdout_err)?,
    }
    Ok(true)
}

fn matrix(r: &MatrixRequest, out: &mut dyn Write) -> Result<bool, CliError> {
    let k = match (r.builder, r.dimer) {
        (Builder::Graph, false) => build_k_from_graph(&build_grid(&r.spec)?, &r.weights)?,
        (Builder::Graph, true) => dimer_matrix(&build_grid(&r.spec)?, &r.weights)?,
        (Builder::Kronecker, dimer) => {
            let w = if dimer {
                r.weights.clone().with_x(BigRational::zero())
            } else {
                r.weights.clone()
            };
            build_k_kronecker(&r.spec, &w)?
        }
    };
    out.write_all(k.dump().as_bytes()).map_err(stdout_err)?;
    Ok(true)
}

fn configs(r: &ConfigsRequest, out: &mut dyn Write) -> Result<bool, CliError> {
    let grid = build_grid(&r.spec)?;
    let mut total = BigRational::zero();
    let mut shown = 0;
    let mut io = Ok(());
    let count = visit_loop_vertex_configs(&grid, &r.weights, |c| {
        total += &c.weight;
        if shown < r.limit && io.is_ok() {
            io = writeln!(out, "{}", c.dump_line());
            shown += 1;
        }
    })?;
    io.map_err(stdout_err)?;
    writeln!(out, "configurations: {count}").map_err(stdout_err)?;
    writeln!(out, "total: {total}").map_err(stdout_err)?;
    Ok(true)
}
