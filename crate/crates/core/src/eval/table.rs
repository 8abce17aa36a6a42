use std::fmt::Display;

use num_traits::Float;

use super::{Average, DimensionReport, Report};

const LABEL: usize = 10;
const COL: usize = 18;

type Getter<F> = fn(&DimensionReport<F>, Average) -> F;

/// Plain-text table: one column pair (expression level, sentence type) per
/// condition, rows accuracy / precision / recall / F1, four decimals.
pub fn render_table<F: Float + Display>(conditions: &[(&str, &Report<F>)], average: Average) -> String {
    let mut lines = Vec::new();
    let mut head = " ".repeat(LABEL);
    let mut sub = " ".repeat(LABEL);
    for (name, _) in conditions {
        head.push_str(&format!("{:<w$}", name, w = 2 * COL));
        sub.push_str(&format!("{:<COL$}{:<COL$}", "Expression Level", "Sentence Type"));
    }
    lines.push(head);
    lines.push(sub);
    let rows: [(&str, Getter<F>); 4] = [
        ("Accuracy", |d, _| d.accuracy),
        ("Precision", |d, a| d.averaged(a).precision),
        ("Recall", |d, a| d.averaged(a).recall),
        ("F1 score", |d, a| d.averaged(a).f1),
    ];
    for (name, get) in rows {
        let mut line = format!("{name:<LABEL$}");
        for (_, r) in conditions {
            line.push_str(&format!("{:<COL$.4}{:<COL$.4}", get(&r.level, average), get(&r.sentence_type, average)));
        }
        lines.push(line);
    }
    let coverage: Vec<String> = conditions
        .iter()
        .map(|(name, r)| format!("{name}: {} of {} truth rows matched", r.matched, r.truth_rows))
        .collect();
    lines.push(format!("({average} averages; {})", coverage.join("; ")));
    let mut out: String = lines.iter().map(|l| format!("{}\n", l.trim_end())).collect();
    if out.is_empty() {
        out.push('\n');
    }
    out
}
