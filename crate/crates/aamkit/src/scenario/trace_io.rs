use std::fmt::Write as _;
use std::path::Path;

use crate::divergence::{Alphabet, BoundedMeasure};
use crate::engine::{AamTrace, Termination, TraceRecord};
use crate::error::{Error, Result};
use crate::hilbert::ProductPoint;

pub const TRACE_SCHEMA: &str = "aamkit-trace/v1";

/// Flat, lossless view of a run: header metadata plus one row per trace
/// record, points carried as encoded strings.
///
/// Reals serialize as shortest round-trip decimals, so write followed by
/// read is the identity on every field, and identical runs byte-reproduce
/// their files.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceFile {
    pub scenario_hash: String,
    pub seed: u64,
    pub kind: String,
    /// Shape tag for the point columns, e.g. `measure;alphabet=a,b` or
    /// `product;block_dim=2;blocks=3`.
    pub point_schema: String,
    pub termination: Termination,
    pub rows: Vec<TraceRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub n: usize,
    pub cost: Option<f64>,
    pub cost_p_prev_q: Option<f64>,
    pub eps: Option<f64>,
    pub gamma: Option<f64>,
    pub drift_ok: Option<bool>,
    pub a_n: Option<f64>,
    pub b_n: Option<f64>,
    pub p: Option<String>,
    pub q: String,
}

/// Point encodings for the two built-in instantiations.
pub trait TracePoint: Sized {
    fn schema_of(&self) -> String;
    fn encode(&self) -> String;
    fn decode(schema: &str, text: &str) -> Result<Self>;
}

impl TracePoint for BoundedMeasure {
    fn schema_of(&self) -> String {
        format!("measure;alphabet={}", self.alphabet().symbols().join(","))
    }

    fn encode(&self) -> String {
        self.mass()
            .iter()
            .map(|v| format!("{v}"))
            .collect::<Vec<_>>()
            .join(",")
    }

    fn decode(schema: &str, text: &str) -> Result<Self> {
        let alphabet = schema
            .strip_prefix("measure;alphabet=")
            .ok_or_else(|| Error::Domain(format!("not a measure point schema: `{schema}`")))?;
        let alphabet = Alphabet::new(alphabet.split(',').map(str::to_string).collect())?;
        let mass: Vec<f64> = text
            .split(',')
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| Error::Domain(format!("bad mass entry `{t}`")))
            })
            .collect::<Result<_>>()?;
        let cap = mass.iter().sum::<f64>() + 1.0;
        BoundedMeasure::new(alphabet, mass, 0.0, cap)
    }
}

impl TracePoint for ProductPoint {
    fn schema_of(&self) -> String {
        let dim = self.blocks.first().map(Vec::len).unwrap_or(0);
        format!("product;block_dim={dim};blocks={}", self.blocks.len())
    }

    fn encode(&self) -> String {
        self.blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|v| format!("{v}"))
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect::<Vec<_>>()
            .join(";")
    }

    fn decode(schema: &str, text: &str) -> Result<Self> {
        if !schema.starts_with("product;") {
            return Err(Error::Domain(format!(
                "not a product point schema: `{schema}`"
            )));
        }
        let blocks: Vec<Vec<f64>> = text
            .split(';')
            .map(|b| {
                b.split(',')
                    .map(|t| {
                        t.parse::<f64>()
                            .map_err(|_| Error::Domain(format!("bad coordinate `{t}`")))
                    })
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<_>>()?;
        Ok(ProductPoint::new(blocks))
    }
}

impl TraceFile {
    /// Flatten a trace into rows, encoding points.
    pub fn from_trace<P: TracePoint + Clone>(
        trace: &AamTrace<P>,
        scenario_hash: String,
        seed: u64,
        kind: String,
    ) -> Result<Self> {
        let probe = trace
            .records
            .first()
            .map(|r| r.q.schema_of())
            .ok_or_else(|| Error::Internal("trace has no records".into()))?;
        let rows = trace
            .records
            .iter()
            .map(|r| TraceRow {
                n: r.n,
                cost: r.cost,
                cost_p_prev_q: r.cost_p_prev_q,
                eps: r.eps,
                gamma: r.gamma,
                drift_ok: r.drift_ok,
                a_n: r.a_n,
                b_n: r.b_n,
                p: r.p.as_ref().map(TracePoint::encode),
                q: r.q.encode(),
            })
            .collect();
        Ok(TraceFile {
            scenario_hash,
            seed,
            kind,
            point_schema: probe,
            termination: trace.termination,
            rows,
        })
    }

    /// Reconstruct the typed trace; the caller picks the point type
    /// matching the recorded schema.
    pub fn to_trace<P: TracePoint + Clone>(&self) -> Result<AamTrace<P>> {
        let records = self
            .rows
            .iter()
            .map(|r| {
                Ok(TraceRecord {
                    n: r.n,
                    p: r
                        .p
                        .as_ref()
                        .map(|t| P::decode(&self.point_schema, t))
                        .transpose()?,
                    q: P::decode(&self.point_schema, &r.q)?,
                    cost: r.cost,
                    cost_p_prev_q: r.cost_p_prev_q,
                    eps: r.eps,
                    gamma: r.gamma,
                    drift_ok: r.drift_ok,
                    a_n: r.a_n,
                    b_n: r.b_n,
                })
            })
            .collect::<Result<_>>()?;
        Ok(AamTrace {
            records,
            termination: self.termination,
        })
    }

    pub fn to_string_lossless(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {TRACE_SCHEMA}");
        let _ = writeln!(out, "# scenario: {}", self.scenario_hash);
        let _ = writeln!(out, "# seed: {}", self.seed);
        let _ = writeln!(out, "# kind: {}", self.kind);
        let _ = writeln!(out, "# points: {}", self.point_schema);
        let term = match self.termination {
            Termination::Converged => "converged",
            Termination::Exhausted => "exhausted",
            Termination::ScheduleTruncated => "schedule-truncated",
        };
        let _ = writeln!(out, "# termination: {term}");
        let _ = writeln!(out, "# rows: {}", self.rows.len());
        let _ = writeln!(out, "n\tcost\tcost_prev_q\teps\tgamma\tdrift_ok\ta_n\tb_n\tp\tq");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                r.n,
                fmt_opt(r.cost),
                fmt_opt(r.cost_p_prev_q),
                fmt_opt(r.eps),
                fmt_opt(r.gamma),
                r.drift_ok.map(|b| if b { "1" } else { "0" }).unwrap_or("-"),
                fmt_opt(r.a_n),
                fmt_opt(r.b_n),
                r.p.as_deref().unwrap_or("-"),
                r.q,
            );
        }
        out
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x}"),
        None => "-".into(),
    }
}

fn parse_opt(path: &str, row: usize, t: &str) -> Result<Option<f64>> {
    if t == "-" {
        return Ok(None);
    }
    t.parse::<f64>().map(Some).map_err(|_| Error::CorruptFile {
        path: path.into(),
        row,
        reason: format!("bad real `{t}`"),
    })
}

/// Write a trace file; the bytes are a pure function of the content.
pub fn write_trace(trace: &TraceFile, path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| Error::io(path.display().to_string(), e))?;
        }
    }
    std::fs::write(path, trace.to_string_lossless())
        .map_err(|e| Error::io(path.display().to_string(), e))
}

/// Read a trace file back, verifying the schema tag and the recorded row
/// count; a short file reports the row where it was detected.
pub fn read_trace(path: &Path) -> Result<TraceFile> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let p = path.display().to_string();
    let corrupt = |row: usize, reason: String| Error::CorruptFile {
        path: p.clone(),
        row,
        reason,
    };

    let mut lines = text.lines().enumerate();
    let mut header = std::collections::BTreeMap::<String, String>::new();
    let mut schema_seen = false;
    let mut column_line = None;
    for (idx, line) in lines.by_ref() {
        if let Some(rest) = line.strip_prefix("# ") {
            if !schema_seen {
                if rest != TRACE_SCHEMA {
                    return Err(corrupt(idx, format!("unknown trace schema `{rest}`")));
                }
                schema_seen = true;
            } else if let Some((k, v)) = rest.split_once(": ") {
                header.insert(k.to_string(), v.to_string());
            }
        } else {
            column_line = Some((idx, line));
            break;
        }
    }
    if !schema_seen {
        return Err(corrupt(0, "missing schema line".into()));
    }
    let Some((_, cols)) = column_line else {
        return Err(corrupt(0, "missing column header".into()));
    };
    if !cols.starts_with("n\tcost") {
        return Err(corrupt(0, "unexpected column header".into()));
    }

    let get = |k: &str| -> Result<String> {
        header
            .get(k)
            .cloned()
            .ok_or_else(|| corrupt(0, format!("missing header field `{k}`")))
    };
    let expected_rows: usize = get("rows")?
        .parse()
        .map_err(|_| corrupt(0, "bad row count".into()))?;
    let termination = match get("termination")?.as_str() {
        "converged" => Termination::Converged,
        "exhausted" => Termination::Exhausted,
        "schedule-truncated" => Termination::ScheduleTruncated,
        other => return Err(corrupt(0, format!("unknown termination `{other}`"))),
    };

    let mut rows = Vec::with_capacity(expected_rows);
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 10 {
            return Err(corrupt(idx, format!("{} columns, expected 10", fields.len())));
        }
        let n: usize = fields[0]
            .parse()
            .map_err(|_| corrupt(idx, format!("bad index `{}`", fields[0])))?;
        rows.push(TraceRow {
            n,
            cost: parse_opt(&p, idx, fields[1])?,
            cost_p_prev_q: parse_opt(&p, idx, fields[2])?,
            eps: parse_opt(&p, idx, fields[3])?,
            gamma: parse_opt(&p, idx, fields[4])?,
            drift_ok: match fields[5] {
                "-" => None,
                "1" => Some(true),
                "0" => Some(false),
                other => return Err(corrupt(idx, format!("bad flag `{other}`"))),
            },
            a_n: parse_opt(&p, idx, fields[6])?,
            b_n: parse_opt(&p, idx, fields[7])?,
            p: match fields[8] {
                "-" => None,
                text => Some(text.to_string()),
            },
            q: fields[9].to_string(),
        });
    }
    if rows.len() != expected_rows {
        return Err(corrupt(
            rows.len(),
            format!("file holds {} rows, header says {expected_rows}", rows.len()),
        ));
    }

    Ok(TraceFile {
        scenario_hash: get("scenario")?,
        seed: get("seed")?
            .parse()
            .map_err(|_| corrupt(0, "bad seed".into()))?,
        kind: get("kind")?,
        point_schema: get("points")?,
        termination,
        rows,
    })
}

/// 64-bit FNV-1a over the canonical scenario text; stable across platforms
/// and releases so trace provenance stays comparable.
pub fn scenario_hash(canonical: &str) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in canonical.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}
