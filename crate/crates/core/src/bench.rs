//! Batch alignment of many fragments with several methods, with per-instance
//! CSV output and cost cross-checking.

use std::io::Write;

use rayon::prelude::*;

use crate::alignment::{align, AlignConfig, AlignmentKind, Model};
use crate::auxiliary::Method;
use crate::error::{Error, Result};
use crate::trace::Trace;

pub const CSV_COLUMNS: [&str; 9] = [
    "instance",
    "fragment",
    "method",
    "cost",
    "relevant_markings",
    "expanded",
    "queued",
    "total_ms",
    "marking_ms",
];

const TIMING_COLUMNS: usize = 2;

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub methods: Vec<Method>,
    pub kind: AlignmentKind,
    /// Worker threads; 0 lets the pool decide.
    pub jobs: usize,
    pub align: AlignConfig,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub instance: usize,
    pub fragment: String,
    pub method: Method,
    pub cost: u32,
    pub relevant_markings: Option<usize>,
    pub expanded: usize,
    pub queued: usize,
    pub total_ms: f64,
    pub marking_ms: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MethodSummary {
    pub method: Method,
    pub instances: usize,
    pub mean_relevant_markings: f64,
    pub mean_expanded: f64,
    pub mean_queued: f64,
    pub mean_total_ms: f64,
    pub mean_marking_ms: f64,
}

#[derive(Clone, Debug, Default)]
pub struct BenchReport {
    /// Ordered by instance, then by the configured method order.
    pub records: Vec<BenchRecord>,
    /// Instances on which the methods disagree about the optimal cost.
    pub mismatches: Vec<usize>,
}

pub fn run_bench(model: Model<'_>, fragments: &[Trace], config: &BenchConfig) -> Result<BenchReport> {
    if config.methods.is_empty() {
        return Err(Error::InvalidArgument("no methods selected".to_string()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let per_instance: Vec<Result<Vec<BenchRecord>>> = pool.install(|| {
        fragments
            .par_iter()
            .enumerate()
            .map(|(instance, trace)| {
                config
                    .methods
                    .iter()
                    .map(|&method| {
                        let a = align(model, trace, config.kind, method, &config.align)?;
                        Ok(BenchRecord {
                            instance,
                            fragment: fragment_text(trace),
                            method,
                            cost: a.cost,
                            relevant_markings: a.stats.relevant_markings,
                            expanded: a.stats.expanded,
                            queued: a.stats.queued,
                            total_ms: a.stats.ms,
                            marking_ms: a.stats.marking_ms,
                        })
                    })
                    .collect()
            })
            .collect()
    });
    let mut report = BenchReport::default();
    for (instance, records) in per_instance.into_iter().enumerate() {
        let records = records?;
        if records.iter().any(|r| r.cost != records[0].cost) {
            report.mismatches.push(instance);
        }
        report.records.extend(records);
    }
    Ok(report)
}

fn fragment_text(trace: &Trace) -> String {
    trace
        .activities
        .iter()
        .map(|a| a.as_str())
        .collect::<Vec<_>>()
        .join(",")
}

impl BenchReport {
    pub fn summary(&self) -> Vec<MethodSummary> {
        let mut methods: Vec<Method> = Vec::new();
        for r in &self.records {
            if !methods.contains(&r.method) {
                methods.push(r.method);
            }
        }
        methods
            .into_iter()
            .map(|method| {
                let rs: Vec<&BenchRecord> = self.records.iter().filter(|r| r.method == method).collect();
                let n = rs.len().max(1) as f64;
                let mean = |f: &dyn Fn(&BenchRecord) -> f64| rs.iter().map(|r| f(r)).sum::<f64>() / n;
                MethodSummary {
                    method,
                    instances: rs.len(),
                    mean_relevant_markings: mean(&|r| r.relevant_markings.unwrap_or(0) as f64),
                    mean_expanded: mean(&|r| r.expanded as f64),
                    mean_queued: mean(&|r| r.queued as f64),
                    mean_total_ms: mean(&|r| r.total_ms),
                    mean_marking_ms: mean(&|r| r.marking_ms),
                }
            })
            .collect()
    }

    /// Writes one row per record. Without `timing` the two wall-time columns
    /// are left out, which makes the output reproducible byte for byte.
    pub fn write_csv(&self, out: impl Write, timing: bool) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let width = if timing {
            CSV_COLUMNS.len()
        } else {
            CSV_COLUMNS.len() - TIMING_COLUMNS
        };
        w.write_record(&CSV_COLUMNS[..width])?;
        for r in &self.records {
            let mut row = vec![
                r.instance.to_string(),
                r.fragment.clone(),
                r.method.to_string(),
                r.cost.to_string(),
                r.relevant_markings.map_or(String::new(), |n| n.to_string()),
                r.expanded.to_string(),
                r.queued.to_string(),
            ];
            if timing {
                row.push(format!("{:.3}", r.total_ms));
                row.push(format!("{:.3}", r.marking_ms));
            }
            w.write_record(&row)?;
        }
        w.flush().map_err(|e| Error::io("<csv output>", e))?;
        Ok(())
    }

    /// Plain-text table of the per-method means.
    pub fn render_summary(&self) -> String {
        let mut out = format!(
            "{:<10} {:>9} {:>10} {:>12} {:>12} {:>10} {:>11}\n",
            "method", "instances", "markings", "expanded", "queued", "total_ms", "marking_ms"
        );
        for s in self.summary() {
            out.push_str(&format!(
                "{:<10} {:>9} {:>10.2} {:>12.2} {:>12.2} {:>10.3} {:>11.3}\n",
                s.method.as_str(),
                s.instances,
                s.mean_relevant_markings,
                s.mean_expanded,
                s.mean_queued,
                s.mean_total_ms,
                s.mean_marking_ms
            ));
        }
        out.push_str(&format!("cost mismatches: {}\n", self.mismatches.len()));
        out
    }
}
