//! Report type shared by the acceptance target.

/// Outcome of one acceptance criterion with its detail lines.
pub struct Report {
    pub id: u8,
    pub title: &'static str,
    pub pass: bool,
    pub lines: Vec<String>,
}

impl Report {
    pub fn new(id: u8, title: &'static str) -> Self {
        Report {
            id,
            title,
            pass: true,
            lines: Vec::new(),
        }
    }

    /// Records a pass/fail detail; any failure fails the criterion.
    pub fn check(&mut self, ok: bool, line: String) {
        self.pass &= ok;
        self.lines.push(format!("[{}] {line}", if ok { "ok" } else { "FAIL" }));
    }

    pub fn info(&mut self, line: String) {
        self.lines.push(format!("[info] {line}"));
    }

    pub fn headline(&self) -> String {
        format!("{} criterion {:>2}: {}", if self.pass { "PASS" } else { "FAIL" }, self.id, self.title)
    }
}
