use std::fmt::Write as _;
use std::io;
use std::path::Path;

/// Keys whose values depend on the machine rather than the inputs.
#[cfg(test)]
pub const RUNTIME_KEYS: [&str; 2] = ["threads", "elapsed_ms"];

#[derive(Debug, Clone, Default)]
pub struct RunReport {
    /// Argument list as typed, minus `--threads`.
    pub command: String,
    pub seeds: Vec<u64>,
    pub provenance: Option<String>,
    pub threads: usize,
    pub elapsed_ms: u128,
    pub body: String,
    pub csv: Option<String>,
}

impl RunReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "command: {}", self.command).unwrap();
        writeln!(out, "seeds: {}", format_seeds(&self.seeds)).unwrap();
        writeln!(
            out,
            "provenance: {}",
            self.provenance.as_deref().unwrap_or("none")
        )
        .unwrap();
        out.push_str(&self.body);
        if !self.body.is_empty() && !self.body.ends_with('\n') {
            out.push('\n');
        }
        writeln!(out, "threads: {}", self.threads).unwrap();
        writeln!(out, "elapsed_ms: {}", self.elapsed_ms).unwrap();
        out
    }
}

fn format_seeds(seeds: &[u64]) -> String {
    match seeds {
        [] => "none".into(),
        [first, .., last] if seeds.len() > 3 && seeds.windows(2).all(|w| w[1] == w[0] + 1) => {
            format!("{first}..={last} ({} seeds)", seeds.len())
        }
        _ => seeds
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(" "),
    }
}

/// Writes the text report to `out` (or stdout) and the CSV twin to `csv`.
pub fn write_report(rr: &RunReport, out: Option<&Path>, csv: Option<&Path>) -> io::Result<()> {
    let text = rr.to_text();
    match out {
        Some(p) => std::fs::write(p, &text)?,
        None => print!("{text}"),
    }
    if let (Some(p), Some(body)) = (csv, &rr.csv) {
        std::fs::write(p, body)?;
    }
    Ok(())
}

/// Report text without the runtime lines, for determinism comparisons.
#[cfg(test)]
pub fn strip_runtime(text: &str) -> String {
    text.lines()
        .filter(|l| !RUNTIME_KEYS.iter().any(|k| l.starts_with(&format!("{k}:"))))
        .map(|l| format!("{l}\n"))
        .collect()
}
