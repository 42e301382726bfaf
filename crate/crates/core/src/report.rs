//! Check reports: one entry per identity with its worst residual.

use std::fmt;

/// How an entry decides pass/fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Residual must be exactly zero.
    Exact,
    /// Residual must not exceed the tolerance.
    Tolerance(OrderedTol),
    /// Informational only, never fails.
    Exploratory,
}

/// `f64` wrapper so [`Mode`] can be `Eq`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderedTol(pub f64);
impl Eq for OrderedTol {}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub id: String,
    /// The identity being checked, written out as a formula.
    pub anchor: String,
    pub residual: f64,
    pub pass: bool,
    pub mode: Mode,
    pub witness: Option<String>,
}

impl Entry {
    pub fn exact(id: impl Into<String>, anchor: impl Into<String>, residual: f64) -> Entry {
        Entry {
            id: id.into(),
            anchor: anchor.into(),
            residual,
            pass: residual == 0.0,
            mode: Mode::Exact,
            witness: None,
        }
    }

    pub fn within(
        id: impl Into<String>,
        anchor: impl Into<String>,
        residual: f64,
        tol: f64,
    ) -> Entry {
        Entry {
            id: id.into(),
            anchor: anchor.into(),
            residual,
            pass: residual.is_finite() && residual <= tol,
            mode: Mode::Tolerance(OrderedTol(tol)),
            witness: None,
        }
    }

    /// A boolean condition (rank, dimension, definiteness); residual 0 or 1.
    pub fn condition(id: impl Into<String>, anchor: impl Into<String>, holds: bool) -> Entry {
        Entry::exact(id, anchor, if holds { 0.0 } else { 1.0 })
    }

    pub fn info(id: impl Into<String>, anchor: impl Into<String>, value: f64) -> Entry {
        Entry {
            id: id.into(),
            anchor: anchor.into(),
            residual: value,
            pass: true,
            mode: Mode::Exploratory,
            witness: None,
        }
    }

    pub fn with_witness(mut self, w: Option<String>) -> Entry {
        if !self.pass || matches!(self.mode, Mode::Exploratory) {
            self.witness = w;
        }
        self
    }
}

/// Running maximum of a residual together with the input that produced it.
#[derive(Debug, Clone, Default)]
pub struct Worst {
    pub residual: f64,
    pub witness: Option<String>,
}

impl Worst {
    pub fn new() -> Self {
        Worst::default()
    }

    pub fn record(&mut self, residual: f64, witness: impl FnOnce() -> String) {
        let r = if residual.is_nan() {
            f64::INFINITY
        } else {
            residual
        };
        if r > self.residual || (self.witness.is_none() && r > 0.0) {
            self.residual = r;
            self.witness = Some(witness());
        }
    }

    pub fn merge(mut self, o: Worst) -> Worst {
        if o.residual > self.residual {
            self = o;
        }
        self
    }

    pub fn exact(self, id: &str, anchor: &str) -> Entry {
        Entry::exact(id, anchor, self.residual).with_witness(self.witness)
    }

    pub fn within(self, id: &str, anchor: &str, tol: f64) -> Entry {
        Entry::within(id, anchor, self.residual, tol).with_witness(self.witness)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub suite: String,
    pub entries: Vec<Entry>,
    /// Free-form facts worth echoing (resolved conventions, derived constants).
    pub notes: Vec<(String, String)>,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Self {
        Report {
            suite: suite.into(),
            ..Default::default()
        }
    }

    pub fn push(&mut self, e: Entry) {
        self.entries.push(e);
    }

    pub fn note(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.notes.push((key.into(), value.into()));
    }

    pub fn extend(&mut self, other: Report) {
        self.entries.extend(other.entries);
        self.notes.extend(other.notes);
    }

    /// Appends `other` with `prefix_` in front of every id and note key.
    pub fn extend_prefixed(&mut self, prefix: &str, other: Report) {
        for mut e in other.entries {
            e.id = format!("{prefix}_{}", e.id);
            self.entries.push(e);
        }
        for (k, v) in other.notes {
            self.notes.push((format!("{prefix}_{k}"), v));
        }
    }

    pub fn pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn get(&self, id: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn max_residual(&self) -> f64 {
        self.entries
            .iter()
            .filter(|e| !matches!(e.mode, Mode::Exploratory))
            .map(|e| e.residual)
            .fold(0.0, f64::max)
    }

    pub fn failures(&self) -> Vec<&Entry> {
        self.entries.iter().filter(|e| !e.pass).collect()
    }

    /// Canonical order: by id, stable.
    pub fn sorted(mut self) -> Report {
        self.entries.sort_by(|a, b| a.id.cmp(&b.id));
        self
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {}", self.suite)?;
        for (k, v) in &self.notes {
            writeln!(f, "  note {k}: {v}")?;
        }
        for e in &self.entries {
            let tag = match (e.pass, e.mode) {
                (_, Mode::Exploratory) => "INFO",
                (true, _) => "PASS",
                (false, _) => "FAIL",
            };
            write!(
                f,
                "  [{tag}] {:<40} residual {:.3e}  ({})",
                e.id, e.residual, e.anchor
            )?;
            if let Some(w) = &e.witness {
                write!(f, "  witness: {w}")?;
            }
            writeln!(f)?;
        }
        writeln!(f, "{}", if self.pass() { "PASS" } else { "FAIL" })
    }
}

/// Runs `f` over `items` in parallel and keeps the worst residual. The merge
/// is a left-biased max, so the witness does not depend on scheduling.
pub fn par_worst<T: Sync, E: Send>(
    items: &[T],
    f: impl Fn(&T, &mut Worst) -> Result<(), E> + Sync + Send,
) -> Result<Worst, E> {
    use rayon::prelude::*;
    items
        .par_iter()
        .map(|it| {
            let mut w = Worst::new();
            f(it, &mut w)?;
            Ok(w)
        })
        .try_reduce(Worst::new, |a, b| Ok(a.merge(b)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_entries_need_zero() {
        assert!(Entry::exact("a", "x = x", 0.0).pass);
        assert!(!Entry::exact("a", "x = x", 1e-300).pass);
    }

    #[test]
    fn tolerance_entries() {
        assert!(Entry::within("a", "x", 1e-10, 1e-9).pass);
        assert!(!Entry::within("a", "x", 2e-9, 1e-9).pass);
        assert!(!Entry::within("a", "x", f64::NAN, 1e-9).pass);
    }

    #[test]
    fn worst_tracks_max_and_witness() {
        let mut w = Worst::new();
        w.record(0.0, || "zero".into());
        w.record(0.5, || "half".into());
        w.record(0.25, || "quarter".into());
        assert_eq!(w.residual, 0.5);
        let e = w.exact("id", "anchor");
        assert!(!e.pass);
        assert_eq!(e.witness.as_deref(), Some("half"));
    }

    #[test]
    fn report_pass_flag() {
        let mut r = Report::new("s");
        r.push(Entry::info("info", "exploratory", -3.0));
        assert!(r.pass());
        r.push(Entry::condition("c", "rank = 4", false));
        assert!(!r.pass());
        assert_eq!(r.failures().len(), 1);
    }
}
