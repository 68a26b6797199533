//! CSV outputs: training history, feature matrices and result reports.

use fakenews_core::eval::ReportRow;
use fakenews_core::features::{FeatureSchema, GroupSet, TASK_EMBEDDING_DIM};
use fakenews_core::neural::TrainingHistory;

use super::ArtifactMeta;

fn meta_line(meta: &ArtifactMeta) -> String {
    format!("# config_hash={} seed={}\n", meta.config_hash, meta.seed)
}

fn field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// `epoch,train_loss,dev_acc` with one row per epoch.
pub fn history_csv(meta: &ArtifactMeta, h: &TrainingHistory) -> String {
    let mut out = meta_line(meta);
    out.push_str(&format!("# best_epoch={}\n", h.best_epoch));
    out.push_str("epoch,train_loss,dev_acc\n");
    for e in &h.epochs {
        out.push_str(&format!("{},{},{}\n", e.epoch, e.train_loss, e.dev_accuracy));
    }
    out
}

/// Header row of schema names followed by `label` (+1 fake, −1 real).
pub fn features_csv(meta: &ArtifactMeta, schema: &FeatureSchema, rows: &[Vec<f64>], labels: &[i8]) -> String {
    let mut out = meta_line(meta);
    out.push_str(&schema.names().iter().map(|n| field(n)).collect::<Vec<_>>().join(","));
    out.push_str(",label\n");
    for (row, y) in rows.iter().zip(labels) {
        for v in row {
            out.push_str(&v.to_string());
            out.push(',');
        }
        out.push_str(&y.to_string());
        out.push('\n');
    }
    out
}

/// `row_label,P,R,F1,Acc` at two decimals, preceded by `#` notes.
pub fn report_csv(meta: &ArtifactMeta, rows: &[ReportRow]) -> String {
    let handcrafted = FeatureSchema::new(GroupSet::handcrafted()).len();
    let full = FeatureSchema::new(GroupSet::all()).len();
    let mut out = meta_line(meta);
    out.push_str(
        "# P, R and F1 are macro averages over the fake and non-fake classes; the majority baseline \
         (P = Acc/2, F1 = p/(1+p) for fake prior p) pins this down\n",
    );
    out.push_str("# undefined per-class precision or F1 (zero denominator) is counted as 0\n");
    out.push_str(&format!(
        "# full feature vector: {full} columns = {handcrafted} hand-crafted + {TASK_EMBEDDING_DIM} task embedding \
         (the often quoted total of 1892 is {} short)\n",
        full - 1892
    ));
    for r in rows {
        if let Some(g) = &r.grid {
            out.push_str(&format!(
                "# {}: C={} gamma={} cv_accuracy={:.4}\n",
                r.label, g.best.c, g.best.gamma, g.best.accuracy
            ));
        }
        if r.metrics.undefined {
            out.push_str(&format!("# {}: some per-class scores were undefined and set to 0\n", r.label));
        }
    }
    out.push_str("row_label,P,R,F1,Acc\n");
    for r in rows {
        let m = &r.metrics;
        out.push_str(&format!(
            "{},{:.2},{:.2},{:.2},{:.2}\n",
            field(&r.label),
            m.precision,
            m.recall,
            m.f1,
            m.accuracy
        ));
    }
    out
}

/// Parses the data rows of a report back into `(label, [P, R, F1, Acc])`.
pub fn parse_report(text: &str) -> Result<Vec<(String, [f64; 4])>, String> {
    let mut rows = Vec::new();
    let mut seen_header = false;
    for (idx, line) in text.lines().enumerate() {
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        if !seen_header {
            if line != "row_label,P,R,F1,Acc" {
                return Err(format!("line {}: unexpected header `{line}`", idx + 1));
            }
            seen_header = true;
            continue;
        }
        let (label, rest) = if let Some(stripped) = line.strip_prefix('"') {
            let end = stripped.find("\",").ok_or_else(|| format!("line {}: unterminated quote", idx + 1))?;
            (stripped[..end].replace("\"\"", "\""), &stripped[end + 2..])
        } else {
            let (l, r) = line.split_once(',').ok_or_else(|| format!("line {}: too few fields", idx + 1))?;
            (l.to_string(), r)
        };
        let vals: Vec<f64> = rest
            .split(',')
            .map(|v| v.parse().map_err(|_| format!("line {}: bad number `{v}`", idx + 1)))
            .collect::<Result<_, _>>()?;
        let vals: [f64; 4] = vals.try_into().map_err(|_| format!("line {}: expected 4 numbers", idx + 1))?;
        rows.push((label, vals));
    }
    Ok(rows)
}
