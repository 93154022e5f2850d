//! Linear upper bounds over C expressions.
//!
//! Expressions are flattened into integer-linear forms over opaque atoms
//! (`n`, `strlen ( src )`, ...). Facts available at a program point become
//! inequalities `L <= k`; the prover searches small combinations of them
//! whose sum cancels every atom of the query.

use std::collections::{BTreeMap, BTreeSet};

use super::program::{Decl, Expr, Program, Rel, is_identifier, norm, type_size};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Lin {
    pub terms: BTreeMap<String, i64>,
    pub c: i64,
}

impl Lin {
    pub fn constant(c: i64) -> Lin {
        Lin { terms: BTreeMap::new(), c }
    }

    pub fn atom(key: String) -> Lin {
        Lin { terms: BTreeMap::from([(key, 1)]), c: 0 }
    }

    /// `self + scale * other`
    pub fn plus(&self, other: &Lin, scale: i64) -> Lin {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            let e = out.terms.entry(k.clone()).or_insert(0);
            *e += v * scale;
            if *e == 0 {
                out.terms.remove(k);
            }
        }
        out.c += other.c * scale;
        out
    }

    pub fn minus(&self, other: &Lin) -> Lin {
        self.plus(other, -1)
    }

    pub fn scaled(&self, k: i64) -> Lin {
        Lin::default().plus(self, k)
    }

    pub fn offset(&self, k: i64) -> Lin {
        Lin { terms: self.terms.clone(), c: self.c + k }
    }

    pub fn as_const(&self) -> Option<i64> {
        self.terms.is_empty().then_some(self.c)
    }

    /// Exact division of every coefficient, if possible.
    pub fn divided(&self, k: i64) -> Option<Lin> {
        if k == 0 || self.c % k != 0 || self.terms.values().any(|v| v % k != 0) {
            return None;
        }
        Some(Lin { terms: self.terms.iter().map(|(a, v)| (a.clone(), v / k)).collect(), c: self.c / k })
    }
}

fn is_operand_end(w: &str) -> bool {
    w == ")" || w == "]" || w.starts_with('"') || w.starts_with('\'') || w.chars().next().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
}

const NON_LINEAR_OPS: &[&str] = &["<", "<=", ">", ">=", "==", "!=", "&&", "||", "?", ":", "=", ","];

/// Top-level additive terms with their signs.
fn split_terms(e: &[String]) -> Option<Vec<(i64, &[String])>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut sign = 1;
    let mut i = 0;
    while i < e.len() {
        let w = e[i].as_str();
        match w {
            "(" | "[" => depth += 1,
            ")" | "]" => depth -= 1,
            _ if depth == 0 && NON_LINEAR_OPS.contains(&w) => return None,
            "+" | "-" if depth == 0 => {
                let binary = i > start && is_operand_end(&e[i - 1]);
                if binary {
                    out.push((sign, &e[start..i]));
                    sign = if w == "+" { 1 } else { -1 };
                    start = i + 1;
                } else if i == start {
                    if w == "-" {
                        sign = -sign;
                    }
                    start = i + 1;
                }
            }
            _ => {}
        }
        i += 1;
    }
    if start >= e.len() {
        return None;
    }
    out.push((sign, &e[start..]));
    Some(out)
}

pub fn literal_len(lit: &str) -> Option<i64> {
    let inner = lit.strip_prefix('"')?.strip_suffix('"')?;
    let mut n = 0;
    let mut chars = inner.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            match chars.next()? {
                'x' => {
                    let rest: String = chars.clone().take_while(char::is_ascii_hexdigit).collect();
                    for _ in 0..rest.len() {
                        chars.next();
                    }
                }
                '0'..='7' => {
                    for _ in 0..2 {
                        if chars.clone().next().is_some_and(|d| ('0'..='7').contains(&d)) {
                            chars.next();
                        }
                    }
                }
                _ => {}
            }
        }
        n += 1;
    }
    Some(n)
}

pub fn atom_key(e: &[String]) -> String {
    e.join(" ")
}

/// Flattens an expression into a linear form.
pub fn lin(prog: &Program, e: &[String], pos: usize) -> Lin {
    if e.is_empty() {
        return Lin::constant(0);
    }
    if let Some(v) = prog.eval(e, pos) {
        return Lin::constant(v);
    }
    if e.len() == 4 && e[0] == "strlen" && e[1] == "(" && e[3] == ")"
        && let Some(n) = literal_len(&e[2]) {
            return Lin::constant(n);
        }
    let Some(terms) = split_terms(e) else {
        return Lin::atom(atom_key(e));
    };
    if terms.len() > 1 || terms[0].0 < 0 {
        return terms.iter().fold(Lin::default(), |acc, (s, t)| acc.plus(&lin(prog, t, pos), *s));
    }
    let t = terms[0].1;
    if t.len() >= 2 && t[0] == "(" && matching_paren(t, 0) == Some(t.len() - 1) {
        return lin(prog, &t[1..t.len() - 1], pos);
    }
    // k * x or x * k
    let mut depth = 0;
    for (i, w) in t.iter().enumerate() {
        match w.as_str() {
            "(" | "[" => depth += 1,
            ")" | "]" => depth -= 1,
            "*" if depth == 0 && i > 0 && is_operand_end(&t[i - 1]) => {
                let (a, b) = (&t[..i], &t[i + 1..]);
                if let Some(k) = prog.eval(a, pos) {
                    return lin(prog, b, pos).scaled(k);
                }
                if let Some(k) = prog.eval(b, pos) {
                    return lin(prog, a, pos).scaled(k);
                }
                break;
            }
            _ => {}
        }
    }
    Lin::atom(atom_key(t))
}

fn matching_paren(t: &[String], open: usize) -> Option<usize> {
    let mut depth = 0;
    for (i, w) in t.iter().enumerate().skip(open) {
        match w.as_str() {
            "(" => depth += 1,
            ")" => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

/// `lhs <= k`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ineq {
    pub lhs: Lin,
    pub k: i64,
}

impl Ineq {
    /// `a - b <= k`, with constants moved to the right.
    pub fn le(a: &Lin, b: &Lin, k: i64) -> Ineq {
        let d = a.minus(b);
        Ineq { k: k - d.c, lhs: Lin { terms: d.terms, c: 0 } }
    }
}

pub fn is_unsigned_integer(d: &Decl) -> bool {
    if d.pointer || d.extent.is_some() {
        return false;
    }
    d.base_type.iter().any(|w| {
        w == "unsigned" || w == "size_t" || (w.starts_with("uint") && w.ends_with("_t")) || w == "bool" || w == "_Bool"
    })
}

fn decl_size(d: &Decl) -> i64 {
    if d.pointer {
        8
    } else {
        type_size(&d.base_type).unwrap_or(8)
    }
}

/// Whether a comparison against this expression happens in an unsigned
/// type at least as wide as `width` bytes.
fn is_unsigned_expr(prog: &Program, e: &[String], pos: usize, width: i64) -> bool {
    if e.iter().any(|w| w == "sizeof" || w == "strlen") {
        return true;
    }
    if e.len() == 1 {
        if let Some(d) = prog.decl_of(&e[0], pos) {
            return is_unsigned_integer(d) && decl_size(d) >= width;
        }
        return e[0].ends_with(['u', 'U']) && e[0].chars().next().is_some_and(|c| c.is_ascii_digit());
    }
    false
}

/// Known capacities of a buffer at a program point.
#[derive(Debug, Clone, Default)]
pub struct Caps {
    pub elems: Vec<Lin>,
    pub bytes: Vec<Lin>,
}

impl Caps {
    pub fn is_empty(&self) -> bool {
        self.elems.is_empty() && self.bytes.is_empty()
    }
}

const ALLOCATORS: &[&str] = &["malloc", "calloc", "realloc", "alloca", "strdup", "strndup"];

pub fn capacities(prog: &Program, name: &str, pos: usize) -> Caps {
    let mut caps = Caps::default();
    let Some(decl) = prog.decl_of(name, pos) else {
        return caps;
    };
    let esize = decl.element_size();
    if let Some(extent) = &decl.extent {
        let n = lin(prog, extent, pos);
        if let Some(es) = esize {
            caps.bytes.push(n.scaled(es));
        }
        caps.elems.push(n);
        return caps;
    }
    if !decl.pointer {
        return caps;
    }
    // latest assignment to the pointer before `pos`
    let Some(f) = prog.function_at(pos) else {
        return caps;
    };
    let func = &prog.functions[f];
    let Some(k) = (func.params_open..pos).rev().find(|&k| prog.tokens[k].text == name && prog.is_at(k + 1, "=") && prog.is_assignment_to(k, name)) else {
        return caps;
    };
    let end = prog.skip_expression(k + 2);
    let rhs = norm(&prog.tokens[k + 2..end]);
    let Some(call) = rhs.first() else {
        return caps;
    };
    let args = split_args(&rhs);
    let es = esize.unwrap_or(1);
    let push_bytes = |bytes: Lin, caps: &mut Caps| {
        if let Some(el) = bytes.divided(es) {
            caps.elems.push(el);
        }
        caps.bytes.push(bytes);
    };
    match call.as_str() {
        "malloc" | "alloca" if args.len() == 1 => push_bytes(lin(prog, &args[0], pos), &mut caps),
        "realloc" if args.len() == 2 => push_bytes(lin(prog, &args[1], pos), &mut caps),
        "calloc" if args.len() == 2 => {
            let n = lin(prog, &args[0], pos);
            if let Some(sz) = prog.eval(&args[1], pos) {
                caps.bytes.push(n.scaled(sz));
                if sz == es {
                    caps.elems.push(n);
                }
            }
        }
        "strdup" if args.len() == 1 => {
            let mut s = vec!["strlen".to_string(), "(".to_string()];
            s.extend(args[0].iter().cloned());
            s.push(")".to_string());
            push_bytes(lin(prog, &s, pos).offset(1), &mut caps);
        }
        "new" if rhs.len() > 3 => {
            if let Some(open) = rhs.iter().position(|w| w == "[") {
                let close = rhs.len() - 1;
                if rhs[close] == "]" {
                    let n = lin(prog, &rhs[open + 1..close], pos);
                    caps.bytes.push(n.scaled(es));
                    caps.elems.push(n);
                }
            }
        }
        _ => {}
    }
    let _ = ALLOCATORS;
    caps
}

/// Arguments of `name ( a , b , ... )` as normalized expressions.
pub fn split_args(call: &[String]) -> Vec<Expr> {
    if call.len() < 3 || call[1] != "(" || call.last().map(String::as_str) != Some(")") {
        return Vec::new();
    }
    split_top_level(&call[2..call.len() - 1], ",")
}

pub fn split_top_level(e: &[String], sep: &str) -> Vec<Expr> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut cur = Vec::new();
    for w in e {
        match w.as_str() {
            "(" | "[" | "{" => depth += 1,
            ")" | "]" | "}" => depth -= 1,
            _ => {}
        }
        if depth == 0 && w == sep {
            out.push(std::mem::take(&mut cur));
        } else {
            cur.push(w.clone());
        }
    }
    if !cur.is_empty() || !out.is_empty() {
        out.push(cur);
    }
    out
}

pub struct Prover<'a> {
    prog: &'a Program,
    pos: usize,
    ineqs: Vec<Ineq>,
    atoms_seen: BTreeSet<String>,
}

const MAX_DEPTH: usize = 4;

impl<'a> Prover<'a> {
    pub fn at(prog: &'a Program, pos: usize) -> Prover<'a> {
        let mut p = Prover { prog, pos, ineqs: Vec::new(), atoms_seen: BTreeSet::new() };
        p.add_guard_facts();
        p.add_assignment_facts();
        p.add_string_facts();
        let atoms: Vec<String> = p.ineqs.iter().flat_map(|i| i.lhs.terms.keys().cloned()).collect();
        for a in atoms {
            p.add_atom_facts(&a);
        }
        p
    }

    pub fn lin(&self, e: &[String]) -> Lin {
        lin(self.prog, e, self.pos)
    }

    pub fn push(&mut self, ineq: Ineq) {
        if !self.ineqs.contains(&ineq) {
            let atoms: Vec<String> = ineq.lhs.terms.keys().cloned().collect();
            self.ineqs.push(ineq);
            for a in atoms {
                self.add_atom_facts(&a);
            }
        }
    }

    fn add_guard_facts(&mut self) {
        for fact in self.prog.facts_at(self.pos) {
            let a = lin(self.prog, &fact.lhs, self.pos);
            let b = lin(self.prog, &fact.rhs, self.pos);
            match fact.rel {
                Rel::Lt => self.ineqs.push(Ineq::le(&a, &b, -1)),
                Rel::Le => self.ineqs.push(Ineq::le(&a, &b, 0)),
                Rel::Eq => {
                    self.ineqs.push(Ineq::le(&a, &b, 0));
                    self.ineqs.push(Ineq::le(&b, &a, 0));
                }
                Rel::Gt | Rel::Ge | Rel::Ne => {}
            }
            // signed < unsigned compares in the unsigned type: a negative
            // left side fails the test.
            if matches!(fact.rel, Rel::Lt | Rel::Le) && fact.unsigned && is_identifier(&fact.lhs[0]) && fact.lhs.len() == 1 {
                self.ineqs.push(Ineq::le(&Lin::constant(0), &a, 0));
            } else if matches!(fact.rel, Rel::Lt | Rel::Le) && fact.lhs.len() == 1
                && let Some(d) = self.prog.decl_of(&fact.lhs[0], self.pos)
                    && !is_unsigned_integer(d) && !d.pointer && is_unsigned_expr(self.prog, &fact.rhs, self.pos, decl_size(d)) {
                        self.ineqs.push(Ineq::le(&Lin::constant(0), &a, 0));
                    }
        }
    }

    /// `v = E` with no later write to `v` or to anything in `E`.
    fn add_assignment_facts(&mut self) {
        let prog = self.prog;
        let Some(f) = prog.function_at(self.pos) else {
            return;
        };
        let func = &prog.functions[f];
        for k in func.params_open..self.pos.min(func.close) {
            let t = &prog.tokens[k];
            if !t.is_ident() || !prog.is_at(k + 1, "=") || !prog.is_assignment_to(k, &t.text) {
                continue;
            }
            if !dominates(prog, k, self.pos) {
                continue;
            }
            let end = prog.skip_expression(k + 2);
            if end > self.pos && k + 2 <= self.pos {
                continue;
            }
            let value = norm(&prog.tokens[k + 2..end]);
            if value.is_empty() || value.contains(&t.text) || prog.assigned_between(&t.text, k + 1, self.pos) {
                continue;
            }
            if value.iter().any(|w| w.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_') && prog.assigned_between(w, end, self.pos)) {
                continue;
            }
            let arithmetic = value.iter().any(|w| matches!(w.as_str(), "+" | "-" | "*" | "<<"));
            if arithmetic {
                // narrow destinations may wrap
                let wide = prog.decl_of(&t.text, k).is_none_or(|d| decl_size(d) >= 8);
                if !wide {
                    continue;
                }
            }
            let v = Lin::atom(t.text.clone());
            let e = lin(prog, &value, k);
            self.ineqs.push(Ineq::le(&v, &e, 0));
            self.ineqs.push(Ineq::le(&e, &v, 0));
        }
    }

    /// Length facts left behind by string calls and explicit terminators.
    fn add_string_facts(&mut self) {
        let prog = self.prog;
        let Some(f) = prog.function_at(self.pos) else {
            return;
        };
        let func = &prog.functions[f];
        let strlen_of = |d: &[String]| {
            let mut s = vec!["strlen".to_string(), "(".to_string()];
            s.extend(d.iter().cloned());
            s.push(")".to_string());
            s
        };
        for k in func.open + 1..self.pos.min(func.close) {
            let t = &prog.tokens[k];
            if !t.is_ident() || !dominates(prog, k, self.pos) {
                continue;
            }
            if prog.is_at(k + 1, "(") && matches!(t.text.as_str(), "strcpy" | "fgets" | "snprintf") {
                let close = prog.pair(k + 1).unwrap_or(k + 1);
                let call = norm(&prog.tokens[k..=close]);
                let args = split_args(&call);
                if args.len() < 2 || args[0].len() != 1 || written_between(prog, &args[0][0], close + 1, self.pos) {
                    continue;
                }
                let d = lin(prog, &strlen_of(&args[0]), k);
                match t.text.as_str() {
                    "strcpy" => {
                        let s = lin(prog, &strlen_of(&args[1]), k);
                        self.ineqs.push(Ineq::le(&d, &s, 0));
                        self.ineqs.push(Ineq::le(&s, &d, 0));
                    }
                    "fgets" => self.ineqs.push(Ineq::le(&d, &lin(prog, &args[1], k), -1)),
                    _ => self.ineqs.push(Ineq::le(&d, &lin(prog, &args[1], k), -1)),
                }
            } else if prog.is_at(k + 1, "[") && (k == 0 || !prog.is_at(k - 1, ".") && !prog.is_at(k - 1, "->")) {
                // D [ E ] = 0 ;
                let close = prog.pair(k + 1).unwrap_or(k + 1);
                let is_terminator = prog.is_at(close + 1, "=")
                    && prog.tok(close + 2).is_some_and(|v| v.text == "0" || v.text == "'\\0'")
                    && prog.is_at(close + 3, ";");
                if is_terminator && !written_between(prog, &t.text, close + 3, self.pos) {
                    let idx = norm(&prog.tokens[k + 2..close]);
                    let d = lin(prog, &strlen_of(std::slice::from_ref(&t.text)), k);
                    self.ineqs.push(Ineq::le(&d, &lin(prog, &idx, k), 0));
                }
            }
        }
    }

    fn add_atom_facts(&mut self, atom: &str) {
        if !self.atoms_seen.insert(atom.to_string()) {
            return;
        }
        let a = Lin::atom(atom.to_string());
        let words: Vec<&str> = atom.split(' ').collect();
        let nonneg = match words.as_slice() {
            ["strlen", ..] | ["sizeof", ..] => true,
            [name] => self.prog.decl_of(name, self.pos).is_some_and(is_unsigned_integer),
            _ => false,
        };
        if nonneg {
            self.ineqs.push(Ineq::le(&Lin::constant(0), &a, 0));
        }
        // strlen(x) < capacity(x)
        if let ["strlen", "(", name, ")"] = words.as_slice() {
            let caps = capacities(self.prog, name, self.pos);
            for cap in caps.bytes.clone() {
                self.ineqs.push(Ineq::le(&a, &cap, -1));
                for t in cap.terms.keys() {
                    self.add_atom_facts(t);
                }
            }
        }
    }

    /// Smallest `k` such that `d <= k` follows from at most four facts.
    pub fn upper(&mut self, d: &Lin) -> Option<i64> {
        for a in d.terms.keys().cloned().collect::<Vec<_>>() {
            self.add_atom_facts(&a);
        }
        let mut best: Option<i64> = None;
        let mut used = vec![false; self.ineqs.len()];
        self.search(d, 0, 0, &mut used, &mut best);
        best
    }

    fn search(&self, residual: &Lin, acc: i64, depth: usize, used: &mut Vec<bool>, best: &mut Option<i64>) {
        if residual.terms.is_empty() {
            let k = residual.c + acc;
            if best.is_none_or(|b| k < b) {
                *best = Some(k);
            }
            return;
        }
        if depth == MAX_DEPTH {
            return;
        }
        for i in 0..self.ineqs.len() {
            if used[i] {
                continue;
            }
            let ineq = &self.ineqs[i];
            // only facts that cancel something in the residual
            let useful = ineq
                .lhs
                .terms
                .iter()
                .any(|(a, v)| residual.terms.get(a).is_some_and(|r| r.signum() == v.signum()));
            if !useful {
                continue;
            }
            used[i] = true;
            self.search(&residual.minus(&ineq.lhs), acc + ineq.k, depth + 1, used, best);
            used[i] = false;
        }
    }

    /// Proves `e >= 0`.
    pub fn nonneg(&mut self, e: &Lin) -> bool {
        self.upper(&e.scaled(-1)).is_some_and(|k| k <= 0)
    }
}

pub const WRITE_CALLS: &[&str] = &[
    "strcpy", "strncpy", "strcat", "strncat", "sprintf", "snprintf", "vsprintf", "vsnprintf", "memcpy", "memmove",
    "memset", "gets", "fgets", "read", "recv", "fread", "stpcpy", "scanf", "sscanf", "fscanf",
];

/// True if `name` is modified in `[from, to)` by assignment, element store
/// or as the destination of a writing call.
pub fn written_between(prog: &Program, name: &str, from: usize, to: usize) -> bool {
    (from..to.min(prog.tokens.len())).any(|k| {
        if prog.is_assignment_to(k, name) {
            return true;
        }
        let t = &prog.tokens[k];
        if t.text != name {
            return false;
        }
        if prog.is_at(k + 1, "[") {
            let close = prog.pair(k + 1).unwrap_or(k + 1);
            if prog.tok(close + 1).is_some_and(|n| n.text.ends_with('=') && n.text != "==") {
                return true;
            }
        }
        // first argument of a writing call
        k >= 2 && prog.is_at(k - 1, "(") && prog.tok(k - 2).is_some_and(|c| WRITE_CALLS.contains(&c.text.as_str()))
    })
}

/// Straight-line dominance: the statement at `k` is not the braceless body
/// of a conditional and its block encloses `pos`.
pub fn dominates(prog: &Program, k: usize, pos: usize) -> bool {
    if k >= pos {
        return false;
    }
    // innermost `{` enclosing k must also enclose pos
    let mut depth = 0;
    let mut j = k;
    let mut open = None;
    while j > 0 {
        j -= 1;
        let t = &prog.tokens[j];
        if t.is("}") {
            depth += 1;
        } else if t.is("{") {
            if depth == 0 {
                open = Some(j);
                break;
            }
            depth -= 1;
        }
    }
    if let Some(open) = open
        && prog.pair(open).is_none_or(|close| close < pos) {
            return false;
        }
        // a block that is the body of a loop or conditional does not
        // dominate code after it, which the close check already covers
    // braceless conditional body: walk back to the statement start
    let mut s = k;
    while s > 0 {
        let t = &prog.tokens[s - 1];
        if t.is(")") || t.is("]") {
            let open = prog.pair(s - 1).unwrap_or(0);
            if t.is(")") && open > 0 && prog.tok(open - 1).is_some_and(|c| c.is("if") || c.is("while") || c.is("for") || c.is("switch")) {
                return false;
            }
            s = open;
            continue;
        }
        if t.is("(") || t.is("[") {
            // inside a parenthesized header such as a for-init
            return true;
        }
        if t.is("else") || t.is("do") {
            return false;
        }
        if t.is(";") || t.is("{") || t.is("}") || t.is(":") {
            return true;
        }
        s -= 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::validator::lexer::tokenize;

    fn e(s: &str) -> Expr {
        norm(&tokenize(s).unwrap().tokens)
    }

    fn at(p: &Program, line: usize, text: &str) -> usize {
        p.tokens.iter().position(|t| t.line == line && t.text == text).unwrap()
    }

    #[test]
    fn linear_forms() {
        let p = Program::parse("#define N 4\nchar b[N * 4];\n").unwrap();
        let end = p.tokens.len();
        assert_eq!(lin(&p, &e("sizeof(b) - 1"), end).as_const(), Some(15));
        let l = lin(&p, &e("n + 2 * m - (n - 3)"), 0);
        assert_eq!(l.c, 3);
        assert_eq!(l.terms.get("m"), Some(&2));
        assert!(!l.terms.contains_key("n"));
        assert_eq!(lin(&p, &e("strlen(\"ab\\n\")"), 0).as_const(), Some(3));
    }

    #[test]
    fn guard_then_copy_is_bounded() {
        let src = "void f(const char *s) {\n char d[16];\n size_t n = strlen(s);\n if (n >= sizeof(d)) return;\n strcpy(d, s);\n}\n";
        let p = Program::parse(src).unwrap();
        let pos = at(&p, 5, "strcpy");
        let mut prover = Prover::at(&p, pos);
        let need = prover.lin(&e("strlen(s)")).minus(&Lin::constant(16));
        assert_eq!(prover.upper(&need), Some(-1));
    }

    #[test]
    fn narrow_sum_is_not_trusted() {
        let src = "void f(const char *a, const char *b) {\n unsigned char t = strlen(a) + 1;\n char *o = malloc(t);\n strcpy(o, a);\n}\n";
        let p = Program::parse(src).unwrap();
        let pos = at(&p, 4, "strcpy");
        let caps = capacities(&p, "o", pos);
        assert_eq!(caps.bytes, vec![Lin::atom("t".into())]);
        let mut prover = Prover::at(&p, pos);
        let need = prover.lin(&e("strlen(a)")).minus(&caps.bytes[0]);
        assert_eq!(prover.upper(&need), None);
    }

    #[test]
    fn signed_compared_with_sizeof_is_nonnegative() {
        let src = "void f(int n, char *s) {\n char d[8];\n if (n < sizeof(d)) { d[n] = 1; }\n}\n";
        let p = Program::parse(src).unwrap();
        let pos = at(&p, 3, "d") + 6;
        let mut prover = Prover::at(&p, pos);
        assert!(prover.nonneg(&Lin::atom("n".into())));
    }

    #[test]
    fn braceless_if_does_not_dominate() {
        let src = "void f(int c) {\n int n = 4;\n if (c) n = 99;\n g(n);\n}\n";
        let p = Program::parse(src).unwrap();
        let k = p.tokens.iter().position(|t| t.text == "99").unwrap() - 2;
        assert!(!dominates(&p, k, at(&p, 4, "g")));
        let k0 = at(&p, 2, "n");
        assert!(dominates(&p, k0, at(&p, 4, "g")));
    }
}
