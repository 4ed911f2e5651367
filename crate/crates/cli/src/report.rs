use std::fmt::Write as _;

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Field {
    pub name: String,
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Table {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Everything a subcommand prints. The table and JSON renderings carry the
/// same fields in the same order.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub statement: String,
    pub inputs: Vec<Field>,
    pub results: Vec<Field>,
    pub tables: Vec<Table>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &str, statement: &str) -> Self {
        Report {
            command: command.into(),
            statement: statement.into(),
            inputs: Vec::new(),
            results: Vec::new(),
            tables: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn input(&mut self, name: &str, value: impl ToString) -> &mut Self {
        self.inputs.push(Field { name: name.into(), value: value.to_string() });
        self
    }

    pub fn result(&mut self, name: &str, value: impl ToString) -> &mut Self {
        self.results.push(Field { name: name.into(), value: value.to_string() });
        self
    }

    pub fn table(&mut self, title: &str, columns: &[&str], rows: Vec<Vec<String>>) -> &mut Self {
        self.tables.push(Table { title: title.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows });
        self
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl ToString) -> &mut Self {
        self.checks.push(Check { name: name.into(), passed, detail: detail.to_string() });
        self
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn render_table(&self) -> String {
        let mut out = String::new();
        writeln!(out, "command: {}", self.command).unwrap();
        writeln!(out, "statement: {}", self.statement).unwrap();
        write_fields(&mut out, "inputs", &self.inputs);
        write_fields(&mut out, "results", &self.results);
        for t in &self.tables {
            writeln!(out, "\n{}", t.title).unwrap();
            write_grid(&mut out, &t.columns, &t.rows);
        }
        if !self.checks.is_empty() {
            writeln!(out, "\nchecks").unwrap();
            let rows: Vec<Vec<String>> = self
                .checks
                .iter()
                .map(|c| vec![if c.passed { "ok" } else { "FAILED" }.to_string(), c.name.clone(), c.detail.clone()])
                .collect();
            write_grid(&mut out, &["status".into(), "check".into(), "detail".into()], &rows);
        }
        out
    }
}

fn write_fields(out: &mut String, title: &str, fields: &[Field]) {
    if fields.is_empty() {
        return;
    }
    writeln!(out, "\n{title}").unwrap();
    let width = fields.iter().map(|f| f.name.chars().count()).max().unwrap_or(0);
    for f in fields {
        writeln!(out, "  {:width$}  {}", f.name, f.value).unwrap();
    }
}

fn write_grid(out: &mut String, columns: &[String], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = columns.iter().map(|c| c.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        format!("  {}", padded.join("  ").trim_end())
    };
    writeln!(out, "{}", line(columns)).unwrap();
    let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    writeln!(out, "{}", line(&rule)).unwrap();
    for row in rows {
        writeln!(out, "{}", line(row)).unwrap();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_columns_align() {
        let mut r = Report::new("demo", "nothing");
        r.table("t", &["a", "long name"], vec![vec!["xyz".into(), "1".into()]]);
        r.check("c", false, "why");
        let text = r.render_table();
        assert!(text.contains("  a    long name\n  ---  ---------\n  xyz  1\n"));
        assert!(text.contains("FAILED  c      why"));
        assert!(!r.all_passed());
    }
}
