//! Line-diff scope report for the "no other changes" instruction.

use serde::{Deserialize, Serialize};

use crate::corpus::{GroundTruth, LineSpan};

pub const DEFAULT_WINDOW: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScopeReport {
    /// Changed regions in original-line coordinates. A pure insertion is
    /// reported at the line it follows.
    pub changed_line_spans: Vec<LineSpan>,
    pub out_of_scope: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Hunk {
    /// 0-based index of the first deleted original line (or the insertion
    /// point for pure insertions).
    orig_start: usize,
    deleted: usize,
    inserted: usize,
}

fn hunks(a: &[&str], b: &[&str]) -> Vec<Hunk> {
    let (n, m) = (a.len(), b.len());
    // lcs[i][j] = LCS length of a[i..], b[j..]
    let mut lcs = vec![vec![0u32; m + 1]; n + 1];
    for i in (0..n).rev() {
        for j in (0..m).rev() {
            lcs[i][j] = if a[i] == b[j] { lcs[i + 1][j + 1] + 1 } else { lcs[i + 1][j].max(lcs[i][j + 1]) };
        }
    }
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    let mut cur: Option<Hunk> = None;
    while i < n || j < m {
        if i < n && j < m && a[i] == b[j] {
            out.extend(cur.take());
            i += 1;
            j += 1;
            continue;
        }
        let h = cur.get_or_insert(Hunk { orig_start: i, deleted: 0, inserted: 0 });
        if j < m && (i == n || lcs[i][j + 1] >= lcs[i + 1][j]) {
            h.inserted += 1;
            j += 1;
        } else {
            h.deleted += 1;
            i += 1;
        }
    }
    out.extend(cur);
    out
}

pub fn check_scope(original: &str, repaired: &str, truth: &GroundTruth, window: usize) -> ScopeReport {
    let a: Vec<&str> = original.lines().map(str::trim_end).collect();
    let b: Vec<&str> = repaired.lines().map(str::trim_end).collect();
    let lo = truth.vulnerable_lines.start.saturating_sub(window).max(1);
    let hi = truth.vulnerable_lines.end + window;
    let mut spans = Vec::new();
    let mut out_of_scope = false;
    for h in hunks(&a, &b) {
        let span = if h.deleted > 0 {
            LineSpan::new(h.orig_start + 1, h.orig_start + h.deleted)
        } else {
            let at = h.orig_start.max(1);
            LineSpan::new(at, at)
        };
        if h.deleted > 0 && (span.start < lo || span.end > hi) {
            out_of_scope = true;
        }
        spans.push(span);
    }
    ScopeReport { changed_line_spans: spans, out_of_scope }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn truth(start: usize, end: usize) -> GroundTruth {
        GroundTruth {
            vulnerable_symbol: "buf".into(),
            vulnerable_lines: LineSpan::new(start, end),
            correct_bound: None,
            required_check: String::new(),
            placement_hint: String::new(),
            exploit_input: None,
            functional_cases: vec![],
        }
    }

    fn program(lines: usize) -> Vec<String> {
        (1..=lines).map(|i| format!("line_{i}();")).collect()
    }

    #[test]
    fn identical_is_in_scope() {
        let src = program(10).join("\n");
        let r = check_scope(&src, &src, &truth(4, 4), DEFAULT_WINDOW);
        assert!(!r.out_of_scope);
        assert!(r.changed_line_spans.is_empty());
    }

    #[test]
    fn edit_on_annotated_line() {
        let a = program(10);
        let mut b = a.clone();
        b[3] = "fixed();".into();
        let r = check_scope(&a.join("\n"), &b.join("\n"), &truth(4, 4), DEFAULT_WINDOW);
        assert!(!r.out_of_scope);
        assert_eq!(r.changed_line_spans, vec![LineSpan::new(4, 4)]);
    }

    #[test]
    fn distant_rename_is_out_of_scope() {
        let a = program(60);
        let mut b = a.clone();
        b[49] = "renamed();".into();
        let r = check_scope(&a.join("\n"), &b.join("\n"), &truth(8, 9), DEFAULT_WINDOW);
        assert!(r.out_of_scope);
        // 50 is outside 5..=12
        assert_eq!(r.changed_line_spans, vec![LineSpan::new(50, 50)]);
    }

    #[test]
    fn distant_pure_insertion_is_allowed() {
        let a = program(30);
        let mut b = a.clone();
        b.insert(25, "if (n > cap) return;".into());
        let r = check_scope(&a.join("\n"), &b.join("\n"), &truth(3, 3), DEFAULT_WINDOW);
        assert!(!r.out_of_scope);
        assert_eq!(r.changed_line_spans, vec![LineSpan::new(25, 25)]);
    }
}
