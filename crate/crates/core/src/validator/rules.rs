//! Syntactic, intra-procedural rule sets.
//!
//! Every rule works on the [`Program`] model: a sink is safe when the facts
//! holding at its position (guards, assignments, string-length effects)
//! prove the access stays inside every known capacity of its buffer.

use crate::corpus::GroundTruth;
use crate::taxonomy::{CweClass, RuleSet};

use super::bounds::{Caps, Lin, Prover, capacities, lin, literal_len, split_args};
use super::lexer::{TokenKind, tokenize};
use super::program::{Expr, Program, Rel, display, is_identifier, norm, split_offset};
use super::{Finding, Mode, ValidationResult, ValidationStatus};

/// Violations split by whether they touch the annotated target.
#[derive(Debug, Default)]
struct Findings {
    target: Vec<Finding>,
    other: Vec<Finding>,
    notes: Vec<Finding>,
}

pub fn static_check(source: &str, cwe: &CweClass, truth: Option<&GroundTruth>) -> ValidationResult {
    let prog = match Program::parse(source) {
        Ok(p) => p,
        Err(e) => {
            return ValidationResult::new(
                ValidationStatus::Inconclusive,
                Mode::Static,
                vec![Finding::new("parse.untokenizable", None, e.to_string())],
            );
        }
    };
    let mut f = Findings::default();
    let inconclusive = |msg: &str| {
        ValidationResult::new(ValidationStatus::Inconclusive, Mode::Static, vec![Finding::new("rules.unavailable", None, msg)])
    };
    let mut positive_evidence = true;
    match cwe.rule_set {
        RuleSet::BufferOverflow | RuleSet::OffByOne => {
            let Some(truth) = truth else {
                return inconclusive("buffer rules need ground truth");
            };
            if !mentions(&prog, &truth.vulnerable_symbol) {
                return inconclusive(&format!("`{}` does not occur in the candidate", truth.vulnerable_symbol));
            }
            buffer_rules(&prog, Some(truth), &mut f);
        }
        RuleSet::SqlInjection => {
            let Some(truth) = truth else {
                return inconclusive("injection rules need ground truth");
            };
            positive_evidence = sql_rules(&prog, &truth.vulnerable_symbol, &mut f);
            buffer_rules(&prog, None, &mut f);
        }
        RuleSet::NullDereference => {
            let Some(truth) = truth else {
                return inconclusive("null-dereference rules need ground truth");
            };
            null_rules(&prog, &truth.vulnerable_symbol, &mut f);
            buffer_rules(&prog, None, &mut f);
        }
        RuleSet::DivideByZero => {
            let Some(truth) = truth else {
                return inconclusive("divisor rules need ground truth");
            };
            divisor_rules(&prog, &truth.vulnerable_symbol, &mut f);
            buffer_rules(&prog, None, &mut f);
        }
        RuleSet::WeakCrypto => {
            positive_evidence = banned_api_rules(&prog, WEAK_CRYPTO, STRONG_CRYPTO, "crypto.weak-algorithm", &mut f);
            buffer_rules(&prog, None, &mut f);
        }
        RuleSet::WeakPrng => {
            positive_evidence = banned_api_rules(&prog, WEAK_PRNG, STRONG_PRNG, "prng.weak-generator", &mut f);
            buffer_rules(&prog, None, &mut f);
        }
        RuleSet::Generic => return inconclusive("no static rules for this weakness class"),
    }
    let status = if !f.target.is_empty() {
        ValidationStatus::StillVulnerable
    } else if !f.other.is_empty() {
        ValidationStatus::NewVulnerability
    } else if !positive_evidence {
        ValidationStatus::Inconclusive
    } else {
        ValidationStatus::Repaired
    };
    let mut evidence = f.target;
    evidence.extend(f.other);
    evidence.extend(f.notes);
    ValidationResult::new(status, Mode::Static, evidence)
}

fn mentions(prog: &Program, name: &str) -> bool {
    prog.tokens.iter().any(|t| t.is_ident() && t.text == name)
}

fn is_member(prog: &Program, k: usize) -> bool {
    k > 0 && (prog.is_at(k - 1, ".") || prog.is_at(k - 1, "->") || prog.is_at(k - 1, "::"))
}

fn inside_sizeof(prog: &Program, k: usize) -> bool {
    // walk outwards through enclosing parentheses
    let mut j = k;
    let mut depth = 0;
    while j > 0 {
        j -= 1;
        let t = &prog.tokens[j];
        if t.is(")") {
            depth += 1;
        } else if t.is("(") {
            if depth == 0 {
                if j > 0 && prog.is_at(j - 1, "sizeof") {
                    return true;
                }
            } else {
                depth -= 1;
            }
        } else if depth == 0 && (t.is(";") || t.is("{") || t.is("}")) {
            return false;
        }
    }
    false
}

/// The call at token `k` (`name ( ... )`), normalized, with its arguments.
fn call_at(prog: &Program, k: usize) -> Option<(String, Vec<Expr>, usize)> {
    let t = prog.tok(k)?;
    if !t.is_ident() || !prog.is_at(k + 1, "(") || is_member(prog, k) {
        return None;
    }
    let close = prog.pair(k + 1)?;
    let call = norm(&prog.tokens[k..=close]);
    Some((t.text.clone(), split_args(&call), close))
}

/// `buf`, `buf + off`, `&buf[off]` → (name, offset).
fn buffer_operand(prog: &Program, e: &[String], pos: usize) -> Option<(String, Lin)> {
    match e {
        [name] if is_identifier(name) => Some((name.clone(), Lin::constant(0))),
        [name, op, rest @ ..] if is_identifier(name) && (op == "+" || op == "-") && !rest.is_empty() => {
            let off = lin(prog, rest, pos);
            Some((name.clone(), if op == "+" { off } else { off.scaled(-1) }))
        }
        [amp, name, open, inner @ .., close] if amp == "&" && is_identifier(name) && open == "[" && close == "]" => {
            Some((name.clone(), lin(prog, inner, pos)))
        }
        _ => None,
    }
}

fn strlen_of(e: &[String]) -> Expr {
    let mut s = vec!["strlen".to_string(), "(".to_string()];
    s.extend(e.iter().cloned());
    s.push(")".to_string());
    s
}

/// A buffer touched by a sink and how many bytes (past `offset`) it needs.
struct Access {
    name: String,
    offset: Lin,
    /// `None` means the amount is unbounded.
    need: Option<Lin>,
    /// Size operands that must not be negative.
    sizes: Vec<Lin>,
    what: String,
}

fn access(prog: &Program, arg: &[String], pos: usize, need: Option<Lin>, sizes: Vec<Lin>, what: String) -> Option<Access> {
    let (name, offset) = buffer_operand(prog, arg, pos)?;
    Some(Access { name, offset, need, sizes, what })
}

const SINK_CALLS: &[&str] = &[
    "strcpy", "stpcpy", "strcat", "strncat", "strncpy", "memcpy", "memmove", "memset", "fgets", "snprintf", "vsnprintf",
    "sprintf", "vsprintf", "gets", "read", "recv", "fread", "scanf", "fscanf", "sscanf", "memcmp", "write", "send",
    "fwrite",
];

/// Accesses performed by the call at `k`.
fn call_accesses(prog: &Program, name: &str, args: &[Expr], k: usize) -> Vec<Access> {
    let l = |e: &[String]| lin(prog, e, k);
    let a = |i: usize| args.get(i).map(Vec::as_slice).unwrap_or(&[]);
    let mut out = Vec::new();
    let mut push = |arg: &[String], need: Option<Lin>, sizes: Vec<Lin>, what: &str| {
        if let Some(acc) = access(prog, arg, k, need, sizes, format!("{name}: {what}")) {
            out.push(acc);
        }
    };
    match name {
        "strcpy" | "stpcpy" if args.len() == 2 => push(a(0), Some(l(&strlen_of(a(1))).offset(1)), vec![], "copy of strlen + 1 bytes"),
        "strcat" if args.len() == 2 => push(
            a(0),
            Some(l(&strlen_of(a(0))).plus(&l(&strlen_of(a(1))), 1).offset(1)),
            vec![],
            "append without a size",
        ),
        "strncat" if args.len() == 3 => push(
            a(0),
            Some(l(&strlen_of(a(0))).plus(&l(a(2)), 1).offset(1)),
            vec![l(a(2))],
            "bounded append",
        ),
        "strncpy" | "memcpy" | "memmove" if args.len() == 3 => {
            push(a(0), Some(l(a(2))), vec![l(a(2))], "sized write");
            if name != "strncpy" {
                push(a(1), Some(l(a(2))), vec![l(a(2))], "sized read");
            }
        }
        "memset" if args.len() == 3 => push(a(0), Some(l(a(2))), vec![l(a(2))], "sized fill"),
        "memcmp" if args.len() == 3 => {
            push(a(0), Some(l(a(2))), vec![l(a(2))], "sized read");
            push(a(1), Some(l(a(2))), vec![l(a(2))], "sized read");
        }
        "fgets" if args.len() == 3 => push(a(0), Some(l(a(1))), vec![l(a(1))], "line read"),
        "snprintf" | "vsnprintf" if args.len() >= 2 => push(a(0), Some(l(a(1))), vec![l(a(1))], "bounded format"),
        "read" | "recv" if args.len() >= 3 => push(a(1), Some(l(a(2))), vec![l(a(2))], "sized input"),
        "write" | "send" if args.len() >= 3 => push(a(1), Some(l(a(2))), vec![l(a(2))], "sized output"),
        "fread" | "fwrite" if args.len() == 4 => {
            let need = prog.eval(a(1), k).map(|sz| l(a(2)).scaled(sz));
            push(a(0), need, vec![l(a(2))], "record transfer");
        }
        "gets" if args.len() == 1 => push(a(0), None, vec![], "unbounded line read"),
        "vsprintf" if !args.is_empty() => push(a(0), None, vec![], "unbounded format"),
        "sprintf" if args.len() >= 2 => {
            let need = format_string(a(1)).and_then(|fmt| printf_length(prog, &fmt, &args[2..], k)).map(|n| n.offset(1));
            push(a(0), need, vec![], "format of bounded length");
        }
        "scanf" | "fscanf" | "sscanf" => {
            let fmt_index = if name == "scanf" { 0 } else { 1 };
            if let Some(fmt) = args.get(fmt_index).and_then(|f| format_string(f)) {
                let mut next = fmt_index + 1;
                for conv in parse_format(&fmt) {
                    if conv.suppressed || conv.conv == '%' {
                        continue;
                    }
                    let Some(arg) = args.get(next) else { break };
                    next += 1;
                    match conv.conv {
                        's' | '[' => push(
                            arg,
                            conv.width.map(|w| Lin::constant(w + 1)),
                            vec![],
                            "string conversion",
                        ),
                        'c' => push(arg, Some(Lin::constant(conv.width.unwrap_or(1))), vec![], "character conversion"),
                        _ => {}
                    }
                }
            }
        }
        _ => {}
    }
    out
}

enum Verdict {
    Safe,
    Unsafe(String),
    Unknown,
}

fn annotated_cap(prog: &Program, truth: &GroundTruth, pos: usize) -> Option<Lin> {
    let bound = truth.correct_bound.as_deref()?;
    let tokens = tokenize(bound).ok()?.tokens;
    let (base, off) = split_offset(&norm(&tokens));
    // `cap - k` bounds a count; the capacity itself is the base
    let cap = if off < 0 { base } else { norm(&tokens) };
    (!cap.is_empty()).then(|| lin(prog, &cap, pos))
}

fn check_access(prog: &Program, acc: &Access, pos: usize, extra_cap: Option<Lin>, elems: bool) -> Verdict {
    let mut caps = capacities(prog, &acc.name, pos);
    if caps.is_empty()
        && let Some(c) = extra_cap {
            caps = Caps { elems: vec![c.clone()], bytes: vec![c] };
        }
    let caps = if elems { caps.elems } else { caps.bytes };
    if caps.is_empty() {
        return Verdict::Unknown;
    }
    let Some(need) = &acc.need else {
        return Verdict::Unsafe(format!("{} into `{}` has no bound", acc.what, acc.name));
    };
    let mut prover = Prover::at(prog, pos);
    for s in acc.sizes.iter().chain(std::iter::once(&acc.offset)) {
        if !prover.nonneg(s) {
            return Verdict::Unsafe(format!("{} on `{}`: operand may be negative", acc.what, acc.name));
        }
    }
    let total = acc.offset.plus(need, 1);
    for cap in &caps {
        if prover.upper(&total.minus(cap)).is_some_and(|m| m <= 0) {
            return Verdict::Safe;
        }
    }
    Verdict::Unsafe(format!("{} on `{}`: no guard keeps it within the buffer", acc.what, acc.name))
}

fn buffer_rules(prog: &Program, truth: Option<&GroundTruth>, f: &mut Findings) {
    let target = truth.map(|t| t.vulnerable_symbol.as_str());
    for func in &prog.functions {
        for k in func.open + 1..func.close {
            let line = Some(prog.line(k));
            if let Some((name, args, _)) = call_at(prog, k).filter(|(n, _, _)| SINK_CALLS.contains(&n.as_str())) {
                for acc in call_accesses(prog, &name, &args, k) {
                    let is_target = target == Some(acc.name.as_str());
                    let extra = if is_target { truth.and_then(|t| annotated_cap(prog, t, k)) } else { None };
                    match check_access(prog, &acc, k, extra, false) {
                        Verdict::Safe => {}
                        Verdict::Unsafe(msg) if is_target => f.target.push(Finding::new("buffer.unchecked-access", line, msg)),
                        Verdict::Unsafe(msg) => f.other.push(Finding::new("buffer.new-unchecked-access", line, msg)),
                        Verdict::Unknown if is_target => f.target.push(Finding::new(
                            "buffer.unknown-capacity",
                            line,
                            format!("capacity of `{}` cannot be established", acc.name),
                        )),
                        Verdict::Unknown => {}
                    }
                }
                continue;
            }
            // element accesses on the target
            let t = &prog.tokens[k];
            if target != Some(t.text.as_str()) || !t.is_ident() || !prog.is_at(k + 1, "[") || is_member(prog, k) {
                continue;
            }
            if prog.decls.iter().any(|d| d.pos == k) || inside_sizeof(prog, k) {
                continue;
            }
            let close = prog.pair(k + 1).unwrap_or(k + 1);
            let idx = norm(&prog.tokens[k + 2..close]);
            let acc = Access {
                name: t.text.clone(),
                offset: lin(prog, &idx, k),
                need: Some(Lin::constant(1)),
                sizes: vec![],
                what: format!("index `{}`", display(&idx)),
            };
            let extra = truth.and_then(|t| annotated_cap(prog, t, k));
            match check_access(prog, &acc, k, extra, true) {
                Verdict::Safe => {}
                Verdict::Unsafe(msg) => f.target.push(Finding::new("buffer.unchecked-index", line, msg)),
                Verdict::Unknown => f.target.push(Finding::new(
                    "buffer.unknown-capacity",
                    line,
                    format!("capacity of `{}` cannot be established", t.text),
                )),
            }
        }
    }
}

/// Concatenated string literal, if `e` consists only of literals.
fn format_string(e: &[String]) -> Option<String> {
    if e.is_empty() || !e.iter().all(|w| w.starts_with('"')) {
        return None;
    }
    Some(e.iter().map(|w| &w[1..w.len() - 1]).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conversion {
    pub suppressed: bool,
    pub width: Option<i64>,
    pub star_width: bool,
    pub precision: Option<i64>,
    pub star_precision: bool,
    pub length: String,
    pub conv: char,
}

/// Conversions of a printf/scanf-style format (body without quotes).
pub fn parse_format(fmt: &str) -> Vec<Conversion> {
    let chars: Vec<char> = fmt.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if chars[i] != '%' {
            i += 1;
            continue;
        }
        i += 1;
        let mut c = Conversion {
            suppressed: false,
            width: None,
            star_width: false,
            precision: None,
            star_precision: false,
            length: String::new(),
            conv: '%',
        };
        while i < chars.len() && "-+ #0*".contains(chars[i]) {
            if chars[i] == '*' {
                // scanf suppression or printf star width
                c.suppressed = true;
                c.star_width = true;
            }
            i += 1;
        }
        let mut digits = String::new();
        while i < chars.len() && chars[i].is_ascii_digit() {
            digits.push(chars[i]);
            i += 1;
        }
        c.width = digits.parse().ok();
        if i < chars.len() && chars[i] == '.' {
            i += 1;
            if i < chars.len() && chars[i] == '*' {
                c.star_precision = true;
                i += 1;
            }
            let mut p = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                p.push(chars[i]);
                i += 1;
            }
            c.precision = Some(p.parse().unwrap_or(0));
        }
        while i < chars.len() && "hlLqjzt".contains(chars[i]) {
            c.length.push(chars[i]);
            i += 1;
        }
        if i < chars.len() {
            c.conv = chars[i];
            if c.conv == '[' {
                i += 1;
                if i < chars.len() && chars[i] == '^' {
                    i += 1;
                }
                if i < chars.len() && chars[i] == ']' {
                    i += 1;
                }
                while i < chars.len() && chars[i] != ']' {
                    i += 1;
                }
            }
            i += 1;
        }
        out.push(c);
    }
    out
}

/// Upper bound on the characters printed (excluding the terminator).
fn printf_length(prog: &Program, fmt: &str, args: &[Expr], pos: usize) -> Option<Lin> {
    let literal: String = {
        // strip conversions to count literal characters
        let mut s = String::new();
        let chars: Vec<char> = fmt.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            if chars[i] == '%' {
                i += 1;
                while i < chars.len() && !"diouxXeEfFgGaAcspn%".contains(chars[i]) {
                    i += 1;
                }
                i += 1;
                continue;
            }
            s.push(chars[i]);
            i += 1;
        }
        s
    };
    let mut total = Lin::constant(literal_len(&format!("\"{literal}\""))?);
    let mut next = 0;
    for c in parse_format(fmt) {
        if c.star_width || c.star_precision {
            return None;
        }
        let wide = c.length.contains('l') || c.length == "j" || c.length == "z" || c.length == "t";
        let fixed = match c.conv {
            '%' => {
                total = total.offset(1);
                continue;
            }
            'd' | 'i' => Some(if wide { 20 } else if c.length == "hh" { 4 } else if c.length == "h" { 6 } else { 11 }),
            'u' => Some(if wide { 20 } else if c.length == "hh" { 3 } else if c.length == "h" { 5 } else { 10 }),
            'x' | 'X' => Some(if wide { 16 } else { 8 }),
            'o' => Some(if wide { 22 } else { 11 }),
            'c' => Some(1),
            'p' => Some(18),
            'e' | 'E' | 'g' | 'G' | 'a' | 'A' => Some(24),
            'f' | 'F' => Some(317),
            'n' => Some(0),
            's' => None,
            _ => return None,
        };
        let arg = args.get(next)?;
        next += 1;
        let piece = match fixed {
            Some(n) => Lin::constant(n.max(c.width.unwrap_or(0))),
            None => {
                let len = match c.precision {
                    Some(p) => Lin::constant(p),
                    None => lin(prog, &strlen_of(arg), pos),
                };
                match (len.as_const(), c.width) {
                    (Some(n), Some(w)) => Lin::constant(n.max(w)),
                    (_, Some(w)) => len.offset(w),
                    _ => len,
                }
            }
        };
        total = total.plus(&piece, 1);
    }
    Some(total)
}

const QUERY_BUILDERS: &[&str] =
    &["sprintf", "snprintf", "vsprintf", "vsnprintf", "asprintf", "strcat", "strncat", "sqlite3_mprintf", "sqlite3_snprintf"];
const BINDERS: &[&str] = &[
    "sqlite3_bind_text",
    "sqlite3_bind_text16",
    "sqlite3_bind_int",
    "sqlite3_bind_int64",
    "sqlite3_bind_double",
    "sqlite3_bind_blob",
    "mysql_stmt_bind_param",
    "mysql_real_escape_string",
    "mysql_escape_string",
    "PQescapeLiteral",
    "PQescapeStringConn",
    "PQexecParams",
    "PQexecPrepared",
    "PQsendQueryParams",
];
const SQL_KEYWORDS: &[&str] = &["select ", "insert ", "update ", "delete ", " where ", " values", " from "];

/// Returns whether positive parameterization evidence was found.
fn sql_rules(prog: &Program, symbol: &str, f: &mut Findings) -> bool {
    let mut evidence = false;
    for k in 0..prog.tokens.len() {
        let Some((name, args, close)) = call_at(prog, k) else {
            continue;
        };
        let uses = |a: &Expr| a.len() == 1 && a[0] == symbol;
        if BINDERS.contains(&name.as_str()) && args.iter().any(uses) {
            evidence = true;
        }
        if matches!(name.as_str(), "PQexecParams" | "PQexecPrepared" | "PQsendQueryParams") {
            // parameters passed through an initializer elsewhere
            evidence |= prog.tokens.iter().enumerate().any(|(j, t)| {
                t.text == symbol && j > 0 && (prog.is_at(j - 1, "{") || prog.is_at(j - 1, ",")) && in_initializer(prog, j)
            });
        }
        if !QUERY_BUILDERS.contains(&name.as_str()) {
            continue;
        }
        let line = Some(prog.line(k));
        match name.as_str() {
            "strcat" | "strncat" => {
                if args.get(1).is_some_and(uses) {
                    f.target.push(Finding::new("sql.concatenation", line, format!("`{symbol}` appended into query text")));
                }
            }
            _ => {
                let fmt_index = match name.as_str() {
                    "sqlite3_mprintf" => 0,
                    "sprintf" | "vsprintf" | "asprintf" => 1,
                    _ => 2,
                };
                let (fmt_index, first_arg) = if name == "sqlite3_snprintf" { (2, 3) } else { (fmt_index, fmt_index + 1) };
                let Some(fmt) = args.get(fmt_index).and_then(|a| format_string(a)) else {
                    continue;
                };
                let mut next = first_arg;
                for c in parse_format(&fmt) {
                    if c.conv == '%' {
                        continue;
                    }
                    let arg = args.get(next);
                    next += 1;
                    if !arg.is_some_and(uses) {
                        continue;
                    }
                    match c.conv {
                        'q' | 'Q' | 'w' if name.starts_with("sqlite3_") => evidence = true,
                        's' => f.target.push(Finding::new(
                            "sql.format-interpolation",
                            line,
                            format!("`{symbol}` formatted directly into query text"),
                        )),
                        _ => {}
                    }
                }
            }
        }
        let _ = close;
    }
    // `"... WHERE x = '" + symbol` in C++
    for (k, t) in prog.tokens.iter().enumerate() {
        if t.text != symbol || !t.is_ident() {
            continue;
        }
        let adjacent_plus = (k > 0 && prog.is_at(k - 1, "+")) || prog.is_at(k + 1, "+");
        if !adjacent_plus {
            continue;
        }
        let start = (0..k).rev().find(|&j| prog.is_at(j, ";") || prog.is_at(j, "{") || prog.is_at(j, "}")).map_or(0, |j| j + 1);
        let end = prog.statement_end(k);
        let has_sql = (start..=end).any(|j| {
            prog.tokens[j].kind == TokenKind::Str && SQL_KEYWORDS.iter().any(|kw| prog.tokens[j].text.to_lowercase().contains(kw))
        });
        if has_sql {
            f.target.push(Finding::new("sql.concatenation", Some(t.line), format!("`{symbol}` concatenated into query text")));
        }
    }
    if !evidence && f.target.is_empty() {
        f.notes.push(Finding::new("sql.no-parameterization", None, format!("no bind or escape call uses `{symbol}`")));
    }
    evidence
}

fn in_initializer(prog: &Program, j: usize) -> bool {
    let mut depth = 0;
    let mut k = j;
    while k > 0 {
        k -= 1;
        let t = &prog.tokens[k];
        if t.is("}") {
            depth += 1;
        } else if t.is("{") {
            if depth == 0 {
                return k > 0 && prog.is_at(k - 1, "=");
            }
            depth -= 1;
        } else if t.is(";") {
            return false;
        }
    }
    false
}

const DEREF_CALLS: &[&str] = &[
    "strlen", "strcmp", "strncmp", "strcpy", "strncpy", "strcat", "strncat", "strdup", "strchr", "strrchr", "strstr",
    "atoi", "atol", "atof", "strtol", "strtoul", "strtod", "puts", "fputs", "memcpy", "memmove", "memset", "memcmp",
    "sscanf", "fgets", "fclose", "fread", "fwrite",
];

fn is_unary_position(prog: &Program, k: usize) -> bool {
    if k == 0 {
        return true;
    }
    let p = &prog.tokens[k - 1];
    match p.kind {
        TokenKind::Ident => matches!(p.text.as_str(), "return" | "case" | "else" | "do"),
        TokenKind::Number | TokenKind::Str | TokenKind::Char => false,
        TokenKind::Punct => !(p.is(")") || p.is("]")),
    }
}

fn known_non_null(prog: &Program, symbol: &str, pos: usize) -> bool {
    if prog.facts_at(pos).iter().any(|f| {
        f.lhs.len() == 1 && f.lhs[0] == symbol && f.rhs == ["0"] && matches!(f.rel, Rel::Ne | Rel::Gt)
    }) {
        return true;
    }
    if prog.decl_of(symbol, pos).is_some_and(|d| d.extent.is_some()) {
        return true;
    }
    // latest dominating assignment of an address or literal
    let Some(f) = prog.function_at(pos) else {
        return false;
    };
    let func = &prog.functions[f];
    let last = (func.open..pos).rev().find(|&k| prog.is_assignment_to(k, symbol));
    match last {
        Some(k) if prog.is_at(k + 1, "=") && super::bounds::dominates(prog, k, pos) => {
            prog.tok(k + 2).is_some_and(|v| v.kind == TokenKind::Str || v.is("&"))
        }
        _ => false,
    }
}

fn null_rules(prog: &Program, symbol: &str, f: &mut Findings) {
    for func in &prog.functions {
        for k in func.open + 1..func.close {
            let t = &prog.tokens[k];
            let site = if t.is_ident() && t.text == symbol && !is_member(prog, k) && !inside_sizeof(prog, k) {
                if prog.is_at(k + 1, "->") || prog.is_at(k + 1, "[") && !prog.decls.iter().any(|d| d.pos == k) {
                    Some("dereference")
                } else if k > 0 && prog.is_at(k - 1, "*") && is_unary_position(prog, k - 1) {
                    Some("dereference")
                } else if k >= 2 && (prog.is_at(k - 1, "(") || prog.is_at(k - 1, ",")) && (prog.is_at(k + 1, ")") || prog.is_at(k + 1, ",")) {
                    enclosing_call(prog, k).filter(|c| DEREF_CALLS.contains(&c.as_str())).map(|_| "argument dereference")
                } else {
                    None
                }
            } else {
                None
            };
            if let Some(kind) = site
                && !known_non_null(prog, symbol, k) {
                    f.target.push(Finding::new(
                        "null.unchecked-dereference",
                        Some(t.line),
                        format!("{kind} of `{symbol}` without a dominating null check"),
                    ));
                }
        }
    }
}

fn enclosing_call(prog: &Program, k: usize) -> Option<String> {
    let mut depth = 0;
    let mut j = k;
    while j > 0 {
        j -= 1;
        let t = &prog.tokens[j];
        if t.is(")") {
            depth += 1;
        } else if t.is("(") {
            if depth == 0 {
                return (j > 0 && prog.tokens[j - 1].is_ident()).then(|| prog.tokens[j - 1].text.clone());
            }
            depth -= 1;
        } else if t.is(";") || t.is("{") {
            return None;
        }
    }
    None
}

fn divisor_rules(prog: &Program, symbol: &str, f: &mut Findings) {
    for func in &prog.functions {
        for k in func.open + 1..func.close {
            let t = &prog.tokens[k];
            if !(t.is("/") || t.is("%") || t.is("/=") || t.is("%=")) {
                continue;
            }
            // divisor: `sym` or `( sym )` (casts allowed)
            let mut j = k + 1;
            while prog.is_at(j, "(") {
                let close = prog.pair(j).unwrap_or(j);
                if close == j + 2 {
                    j += 1;
                    break;
                }
                j = close + 1;
            }
            let Some(d) = prog.tok(j) else { continue };
            if d.text != symbol || !d.is_ident() || prog.is_at(j + 1, "(") || prog.is_at(j + 1, "[") || prog.is_at(j + 1, "->") || prog.is_at(j + 1, ".") {
                continue;
            }
            if !known_non_zero(prog, symbol, k) {
                f.target.push(Finding::new(
                    "divide.unchecked-divisor",
                    Some(t.line),
                    format!("division by `{symbol}` without a dominating non-zero check"),
                ));
            }
        }
    }
}

fn known_non_zero(prog: &Program, symbol: &str, pos: usize) -> bool {
    let facts = prog.facts_at(pos);
    let direct = facts.iter().any(|f| {
        f.lhs.len() == 1
            && f.lhs[0] == symbol
            && match (f.rel, prog.eval(&f.rhs, pos)) {
                (Rel::Ne, Some(0)) | (Rel::Gt, Some(0..)) | (Rel::Ge, Some(1..)) => true,
                (Rel::Lt, Some(v)) | (Rel::Le, Some(v)) if v <= 0 => v < 0 || f.rel == Rel::Lt,
                (Rel::Eq, Some(v)) => v != 0,
                _ => false,
            }
    });
    if direct {
        return true;
    }
    let Some(fi) = prog.function_at(pos) else {
        return false;
    };
    let func = &prog.functions[fi];
    match (func.open..pos).rev().find(|&k| prog.is_assignment_to(k, symbol)) {
        Some(k) if prog.is_at(k + 1, "=") && super::bounds::dominates(prog, k, pos) => {
            let end = prog.skip_expression(k + 2);
            prog.eval(&norm(&prog.tokens[k + 2..end]), pos).is_some_and(|v| v != 0)
        }
        _ => false,
    }
}

const WEAK_CRYPTO: &[&str] = &[
    "MD4", "MD5", "MD5_Init", "MD5_Update", "MD5_Final", "SHA1", "SHA1_Init", "SHA1_Update", "SHA1_Final", "EVP_md5",
    "EVP_md4", "EVP_sha1", "EVP_des_ecb", "EVP_des_cbc", "EVP_des_ede", "EVP_des_ede3_cbc", "EVP_rc4", "EVP_rc2_cbc",
    "EVP_bf_cbc", "EVP_aes_128_ecb", "EVP_aes_256_ecb", "DES_ecb_encrypt", "DES_set_key", "DES_ncbc_encrypt", "RC4",
    "RC4_set_key", "crypt",
];
const STRONG_CRYPTO: &[&str] = &[
    "SHA256", "SHA384", "SHA512", "SHA256_Init", "SHA512_Init", "EVP_sha256", "EVP_sha384", "EVP_sha512", "EVP_sha3_256",
    "EVP_aes_128_gcm", "EVP_aes_256_gcm", "EVP_aes_128_cbc", "EVP_aes_256_cbc", "EVP_chacha20_poly1305",
    "crypto_generichash", "crypto_hash_sha256", "crypto_secretbox_easy", "crypto_aead_xchacha20poly1305_ietf_encrypt",
    "crypto_pwhash_str", "PKCS5_PBKDF2_HMAC", "EVP_PKEY_derive",
];
const WEAK_PRNG: &[&str] = &["rand", "srand", "random", "srandom", "rand_r", "drand48", "erand48", "lrand48", "mrand48", "srand48"];
const STRONG_PRNG: &[&str] =
    &["getrandom", "getentropy", "arc4random", "arc4random_buf", "arc4random_uniform", "RAND_bytes", "randombytes_buf", "randombytes_uniform", "BCryptGenRandom"];

/// Returns whether a strong replacement is present.
fn banned_api_rules(prog: &Program, banned: &[&str], strong: &[&str], rule: &str, f: &mut Findings) -> bool {
    let mut found_strong = false;
    for k in 0..prog.tokens.len() {
        let t = &prog.tokens[k];
        if !t.is_ident() || !prog.is_at(k + 1, "(") || is_member(prog, k) {
            continue;
        }
        if banned.contains(&t.text.as_str()) {
            f.target.push(Finding::new(rule, Some(t.line), format!("call to `{}`", t.text)));
        } else if strong.contains(&t.text.as_str()) {
            found_strong = true;
        }
    }
    // reading the kernel entropy device counts as a strong source
    found_strong |= prog.tokens.iter().any(|t| t.kind == TokenKind::Str && t.text.contains("/dev/urandom"));
    if !found_strong && f.target.is_empty() {
        f.notes.push(Finding::new(rule, None, "no recognised replacement API"));
    }
    found_strong
}
