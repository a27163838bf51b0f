//! Run reports rendered for people or for line-oriented tooling.

use std::fmt::Write as _;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Human,
    Machine,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub id: String,
    pub passed: bool,
    pub summary: String,
    pub details: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub id: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunReport {
    pub command: String,
    pub meta: Vec<(String, String)>,
    pub notes: Vec<String>,
    pub tables: Vec<Table>,
    pub checks: Vec<Check>,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        Self { command: command.into(), ..Self::default() }
    }

    pub fn meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn check(&mut self, id: impl Into<String>, passed: bool, summary: impl Into<String>, details: Vec<String>) {
        self.checks.push(Check { id: id.into(), passed, summary: summary.into(), details });
    }

    pub fn table(&mut self, id: &str, header: &[&str], rows: Vec<Vec<String>>) {
        let header = header.iter().map(|h| h.to_string()).collect();
        self.tables.push(Table { id: id.to_string(), header, rows });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// 0 when every check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Human => self.render_human(),
            OutputFormat::Machine => self.render_machine(),
        }
    }

    fn render_human(&self) -> String {
        let mut s = format!("loday {}\n", self.command);
        for (k, v) in &self.meta {
            let _ = writeln!(s, "  {k}: {v}");
        }
        for n in &self.notes {
            let _ = writeln!(s, "  note: {n}");
        }
        for t in &self.tables {
            let _ = writeln!(s, "\n{}", t.id);
            let widths: Vec<usize> = (0..t.header.len())
                .map(|c| t.rows.iter().map(|r| r[c].len()).chain([t.header[c].len()]).max().unwrap_or(0))
                .collect();
            let line = |cells: &[String]| {
                let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
                format!("  {}\n", padded.join("  "))
            };
            s.push_str(&line(&t.header));
            for r in &t.rows {
                s.push_str(&line(r));
            }
        }
        if !self.checks.is_empty() {
            s.push('\n');
        }
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "[{tag}] {}: {}", c.id, c.summary);
            for d in &c.details {
                let _ = writeln!(s, "       {d}");
            }
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        let _ = writeln!(s, "\n{} checks, {} failed", self.checks.len(), failed);
        s
    }

    fn render_machine(&self) -> String {
        let mut s = format!("# command = {}\n", self.command);
        for (k, v) in &self.meta {
            let _ = writeln!(s, "# {k} = {v}");
        }
        for n in &self.notes {
            let _ = writeln!(s, "# note = {n}");
        }
        for t in &self.tables {
            let _ = writeln!(s, "# table.{}.columns = {}", t.id, t.header.join(" "));
            for r in &t.rows {
                let _ = writeln!(s, "# table.{}.row = {}", t.id, r.join(" "));
            }
        }
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "CHECK {} {tag}", c.id);
            let _ = writeln!(s, "# {}.summary = {}", c.id, c.summary);
            for d in &c.details {
                let _ = writeln!(s, "# {}.detail = {d}", c.id);
            }
        }
        let _ = writeln!(s, "# result = {}", if self.passed() { "PASS" } else { "FAIL" });
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RunReport {
        let mut r = RunReport::new("cohomology x.alg --max-degree 2");
        r.meta("type", "trias");
        r.table("dims", &["n", "dim"], vec![vec!["1".into(), "1".into()], vec!["2".into(), "10".into()]]);
        r.check("d-squared", true, "ok", vec![]);
        r.check("axiom-7", false, "1 violation", vec!["(e1, e1, e1)".into()]);
        r
    }

    #[test]
    fn machine_lines() {
        let text = sample().render(OutputFormat::Machine);
        assert!(text.contains("CHECK d-squared PASS\n"));
        assert!(text.contains("CHECK axiom-7 FAIL\n"));
        assert!(text.contains("# table.dims.row = 2 10\n"));
        for line in text.lines() {
            assert!(line.starts_with("# ") || line.starts_with("CHECK "), "{line}");
        }
        assert_eq!(sample().exit_code(), 1);
    }

    #[test]
    fn human_alignment() {
        let text = sample().render(OutputFormat::Human);
        assert!(text.contains("  n  dim\n  1    1\n  2   10\n"), "{text}");
        assert!(text.contains("[FAIL] axiom-7: 1 violation\n"));
    }
}
