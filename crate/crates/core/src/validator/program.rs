//! A shallow structural model of a C translation unit.
//!
//! Nothing here is a real parser. The model knows where functions start and
//! end, which identifiers are declared with which type and array extent, and
//! which relational facts hold in which token regions because an enclosing
//! condition (or an earlier early-exit `if`) established them. That is the
//! straight-line dominance approximation the repair rules are built on.

use std::collections::HashMap;
use std::ops::RangeInclusive;

use super::lexer::{LexError, Token, TokenKind, tokenize};

/// Normalized expression: token texts with casts, redundant parentheses and
/// `sizeof x` spelling differences removed.
pub type Expr = Vec<String>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error("line {line}: unbalanced `{delim}`")]
    Unbalanced { line: usize, delim: String },
}

#[derive(Debug, Clone)]
pub struct Function {
    pub name: String,
    /// Index of the opening `(` of the parameter list.
    pub params_open: usize,
    /// Indices of the body braces.
    pub open: usize,
    pub close: usize,
}

impl Function {
    pub fn contains(&self, pos: usize) -> bool {
        pos > self.open && pos < self.close
    }
}

#[derive(Debug, Clone)]
pub struct Decl {
    pub name: String,
    pub pos: usize,
    pub function: Option<usize>,
    pub base_type: Vec<String>,
    pub pointer: bool,
    /// Extent expression for arrays (`N` in `T name[N]`).
    pub extent: Option<Expr>,
}

impl Decl {
    pub fn is_signed(&self) -> bool {
        if self.pointer {
            return false;
        }
        let t = &self.base_type;
        let has = |w: &str| t.iter().any(|x| x == w);
        if has("unsigned") || t.iter().any(|x| x == "size_t" || x.starts_with("uint") || x == "bool" || x == "_Bool") {
            return false;
        }
        has("int")
            || has("long")
            || has("short")
            || has("signed")
            || t.iter().any(|x| matches!(x.as_str(), "ssize_t" | "ptrdiff_t" | "off_t" | "intptr_t") || x.starts_with("int"))
    }

    /// Size in bytes of one element (of the array, or pointed-to object).
    pub fn element_size(&self) -> Option<i64> {
        type_size(&self.base_type)
    }
}

pub fn type_size(words: &[String]) -> Option<i64> {
    let has = |w: &str| words.iter().any(|x| x == w);
    let last = words.iter().rev().find(|w| !matches!(w.as_str(), "const" | "static" | "volatile" | "register"))?;
    Some(match last.as_str() {
        "char" | "int8_t" | "uint8_t" | "bool" | "_Bool" => 1,
        "short" | "int16_t" | "uint16_t" => 2,
        "float" | "int32_t" | "uint32_t" => 4,
        "int" | "unsigned" | "signed" if has("long") => 8,
        "int" | "unsigned" | "signed" if has("short") => 2,
        "int" | "unsigned" | "signed" => 4,
        "long" | "double" | "size_t" | "ssize_t" | "int64_t" | "uint64_t" | "ptrdiff_t" | "intptr_t" | "uintptr_t"
        | "off_t" => 8,
        "wchar_t" => 4,
        _ => return None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl Rel {
    fn parse(text: &str) -> Option<Rel> {
        Some(match text {
            "<" => Rel::Lt,
            "<=" => Rel::Le,
            ">" => Rel::Gt,
            ">=" => Rel::Ge,
            "==" => Rel::Eq,
            "!=" => Rel::Ne,
            _ => return None,
        })
    }

    pub fn negate(self) -> Rel {
        match self {
            Rel::Lt => Rel::Ge,
            Rel::Le => Rel::Gt,
            Rel::Gt => Rel::Le,
            Rel::Ge => Rel::Lt,
            Rel::Eq => Rel::Ne,
            Rel::Ne => Rel::Eq,
        }
    }

    pub fn flip(self) -> Rel {
        match self {
            Rel::Lt => Rel::Gt,
            Rel::Le => Rel::Ge,
            Rel::Gt => Rel::Lt,
            Rel::Ge => Rel::Le,
            r => r,
        }
    }
}

/// `lhs rel rhs`, and whether the comparison is forced unsigned.
type Atom = (Expr, Rel, Expr, bool);

/// `lhs rel rhs` holds for every token in `region`, until one of `idents`
/// is reassigned.
#[derive(Debug, Clone)]
pub struct Fact {
    pub lhs: Expr,
    pub rel: Rel,
    pub rhs: Expr,
    pub region: RangeInclusive<usize>,
    pub idents: Vec<String>,
    /// Line of the guard that established the fact.
    pub line: usize,
    /// An explicit unsigned cast makes the comparison unsigned.
    pub unsigned: bool,
}

#[derive(Debug)]
pub struct Program {
    pub tokens: Vec<Token>,
    pair: Vec<Option<usize>>,
    block_end: Vec<usize>,
    pub macros: HashMap<String, Vec<Token>>,
    pub functions: Vec<Function>,
    pub decls: Vec<Decl>,
    facts: Vec<Vec<Fact>>,
}

const TYPE_WORDS: &[&str] = &[
    "char", "short", "int", "long", "unsigned", "signed", "float", "double", "void", "bool", "_Bool", "const",
    "static", "volatile", "struct", "union", "enum", "register", "extern", "FILE", "auto",
];

pub const EXIT_CALLS: &[&str] = &["exit", "abort", "_exit", "_Exit", "err", "errx", "quick_exit"];

fn is_type_word(t: &Token) -> bool {
    t.is_ident() && (TYPE_WORDS.contains(&t.text.as_str()) || t.text.ends_with("_t"))
}

fn is_keyword(text: &str) -> bool {
    matches!(
        text,
        "if" | "else" | "for" | "while" | "do" | "return" | "switch" | "case" | "default" | "break" | "continue"
            | "goto" | "sizeof" | "typedef"
    )
}

impl Program {
    pub fn parse(source: &str) -> Result<Program, ParseError> {
        let lexed = tokenize(source)?;
        let tokens = lexed.tokens;
        let mut pair = vec![None; tokens.len()];
        let mut block_end = vec![tokens.len(); tokens.len()];
        let mut stack: Vec<usize> = Vec::new();
        for (i, t) in tokens.iter().enumerate() {
            if t.kind != TokenKind::Punct {
                continue;
            }
            match t.text.as_str() {
                "(" | "[" | "{" => stack.push(i),
                ")" | "]" | "}" => {
                    let open = stack.pop().ok_or_else(|| ParseError::Unbalanced { line: t.line, delim: t.text.clone() })?;
                    let expected = match t.text.as_str() {
                        ")" => "(",
                        "]" => "[",
                        _ => "{",
                    };
                    if tokens[open].text != expected {
                        return Err(ParseError::Unbalanced { line: t.line, delim: t.text.clone() });
                    }
                    pair[open] = Some(i);
                    pair[i] = Some(open);
                }
                _ => {}
            }
        }
        if let Some(&open) = stack.last() {
            return Err(ParseError::Unbalanced { line: tokens[open].line, delim: tokens[open].text.clone() });
        }
        // innermost enclosing block for each token
        let mut blocks: Vec<usize> = Vec::new();
        for (i, t) in tokens.iter().enumerate() {
            if t.is("}") {
                blocks.pop();
            }
            if let Some(&open) = blocks.last() {
                block_end[i] = pair[open].unwrap_or(tokens.len());
            }
            if t.is("{") {
                blocks.push(i);
            }
        }

        let mut program = Program {
            tokens,
            pair,
            block_end,
            macros: lexed.macros,
            functions: Vec::new(),
            decls: Vec::new(),
            facts: Vec::new(),
        };
        program.functions = program.find_functions();
        program.decls = program.find_decls();
        program.facts = (0..program.functions.len()).map(|f| program.extract_facts(f)).collect();
        Ok(program)
    }

    pub fn tok(&self, i: usize) -> Option<&Token> {
        self.tokens.get(i)
    }

    pub fn is_at(&self, i: usize, text: &str) -> bool {
        self.tokens.get(i).is_some_and(|t| t.is(text))
    }

    pub fn pair(&self, i: usize) -> Option<usize> {
        self.pair.get(i).copied().flatten()
    }

    pub fn line(&self, i: usize) -> usize {
        self.tokens.get(i).or(self.tokens.last()).map_or(0, |t| t.line)
    }

    fn find_functions(&self) -> Vec<Function> {
        let mut out = Vec::new();
        let mut i = 0;
        let mut depth = 0usize;
        while i < self.tokens.len() {
            let t = &self.tokens[i];
            if t.is("{") {
                if depth == 0 {
                    // `name ( params ) [const] {`
                    let mut j = i;
                    while j > 0 && self.tokens[j - 1].is_ident() && self.tokens[j - 1].text == "const" {
                        j -= 1;
                    }
                    if j > 0 && self.tokens[j - 1].is(")") {
                        let params_open = self.pair(j - 1).unwrap_or(0);
                        if params_open > 0 && self.tokens[params_open - 1].is_ident() {
                            let close = self.pair(i).unwrap_or(self.tokens.len() - 1);
                            out.push(Function {
                                name: self.tokens[params_open - 1].text.clone(),
                                params_open,
                                open: i,
                                close,
                            });
                            i = close + 1;
                            continue;
                        }
                    }
                }
                depth += 1;
            } else if t.is("}") {
                depth = depth.saturating_sub(1);
            }
            i += 1;
        }
        out
    }

    pub fn function_at(&self, pos: usize) -> Option<usize> {
        self.functions.iter().position(|f| f.contains(pos) || (pos > f.params_open && pos <= f.open))
    }

    fn find_decls(&self) -> Vec<Decl> {
        let mut out = Vec::new();
        let n = self.tokens.len();
        for i in 0..n {
            let starts = i == 0
                || ["; ", "{", "}"].iter().any(|p| self.tokens[i - 1].is(p.trim()))
                || (self.tokens[i - 1].is("(") && i >= 2 && self.tokens[i - 2].is_ident())
                || self.tokens[i - 1].is(",") && self.in_param_list(i);
            if starts && is_type_word(&self.tokens[i]) || starts && self.looks_like_typedef_decl(i) {
                self.parse_declaration(i, &mut out);
            }
        }
        out
    }

    fn in_param_list(&self, i: usize) -> bool {
        self.functions.iter().any(|f| i > f.params_open && i < self.pair(f.params_open).unwrap_or(0))
    }

    /// `Name *x` or `Name x;` with an unknown typedef name.
    fn looks_like_typedef_decl(&self, i: usize) -> bool {
        let t = &self.tokens[i];
        if !t.is_ident() || is_keyword(&t.text) {
            return false;
        }
        match (self.tok(i + 1), self.tok(i + 2)) {
            (Some(a), Some(b)) if a.is_ident() && !is_keyword(&a.text) => {
                b.is(";") || b.is("=") || b.is("[") || b.is(",") || b.is(")")
            }
            (Some(a), Some(b)) if a.is("*") => b.is_ident() && self.tok(i + 3).is_some_and(|c| c.is("=") || c.is(";") || c.is(",") || c.is(")")),
            _ => false,
        }
    }

    fn parse_declaration(&self, start: usize, out: &mut Vec<Decl>) {
        let mut j = start;
        let mut base = Vec::new();
        let function = self.function_at(start);
        while let Some(t) = self.tok(j) {
            let next_is_declarator_end = self
                .tok(j + 1)
                .is_some_and(|n| n.is("[") || n.is("=") || n.is(";") || n.is(",") || n.is(")") || n.is("("));
            if is_type_word(t) && !(next_is_declarator_end && !base.is_empty() && !TYPE_WORDS.contains(&t.text.as_str())) {
                base.push(t.text.clone());
                j += 1;
            } else if t.is_ident() && base.last().is_some_and(|b| b == "struct" || b == "union" || b == "enum") {
                base.push(t.text.clone());
                j += 1;
            } else if t.is_ident() && base.is_empty() && !is_keyword(&t.text) {
                base.push(t.text.clone());
                j += 1;
            } else {
                break;
            }
        }
        if base.is_empty() {
            return;
        }
        loop {
            let mut pointer = false;
            while let Some(t) = self.tok(j) {
                if t.is("*") {
                    pointer = true;
                    j += 1;
                } else if t.is("const") {
                    j += 1;
                } else {
                    break;
                }
            }
            let Some(name_tok) = self.tok(j).filter(|t| t.is_ident() && !is_keyword(&t.text)) else {
                return;
            };
            let pos = j;
            j += 1;
            if self.is_at(j, "(") {
                return;
            }
            let mut extent = None;
            if self.is_at(j, "[") {
                let close = self.pair(j).unwrap_or(j);
                if close > j + 1 {
                    extent = Some(norm(&self.tokens[j + 1..close]));
                }
                pointer = pointer || close == j + 1;
                j = close + 1;
                while self.is_at(j, "[") {
                    j = self.pair(j).unwrap_or(j) + 1;
                }
            }
            out.push(Decl { name: name_tok.text.clone(), pos, function, base_type: base.clone(), pointer, extent });
            if self.is_at(j, "=") {
                j = self.skip_expression(j + 1);
            }
            if self.is_at(j, ",") && !self.in_param_list(j) {
                j += 1;
                continue;
            }
            return;
        }
    }

    /// Index of the first top-level `,`, `;` or closing delimiter at or after `i`.
    pub fn skip_expression(&self, mut i: usize) -> usize {
        while let Some(t) = self.tok(i) {
            if t.is(",") || t.is(";") || t.is(")") || t.is("]") || t.is("}") {
                return i;
            }
            if (t.is("(") || t.is("[") || t.is("{")) && self.pair(i).is_some() {
                i = self.pair(i).unwrap_or(i);
            }
            i += 1;
        }
        i
    }

    /// Declaration of `name` visible at `pos`.
    pub fn decl_of(&self, name: &str, pos: usize) -> Option<&Decl> {
        let func = self.function_at(pos);
        self.decls
            .iter()
            .filter(|d| d.name == name && d.pos <= pos && (d.function.is_none() || d.function == func))
            .max_by_key(|d| (d.function.is_some(), d.pos))
    }

    /// Index of the last token of the statement starting at `i`.
    pub fn statement_end(&self, i: usize) -> usize {
        let Some(t) = self.tok(i) else {
            return self.tokens.len().saturating_sub(1);
        };
        if t.is("{") {
            return self.pair(i).unwrap_or(i);
        }
        if t.is("if") || t.is("while") || t.is("for") || t.is("switch") {
            let close = self.pair(i + 1).unwrap_or(i + 1);
            let end = self.statement_end(close + 1);
            if t.is("if") && self.is_at(end + 1, "else") {
                return self.statement_end(end + 2);
            }
            return end;
        }
        if t.is("do") {
            let body_end = self.statement_end(i + 1);
            // while ( cond ) ;
            let close = self.pair(body_end + 2).unwrap_or(body_end + 2);
            return close + 1;
        }
        let mut j = i;
        while let Some(t) = self.tok(j) {
            if t.is(";") {
                return j;
            }
            if t.is("}") {
                return j.saturating_sub(1);
            }
            if (t.is("(") || t.is("[") || t.is("{")) && self.pair(j).is_some() {
                j = self.pair(j).unwrap_or(j);
            }
            j += 1;
        }
        self.tokens.len().saturating_sub(1)
    }

    /// True if the token range contains something that leaves the
    /// enclosing block: `return`, `break`, `continue`, `goto` or an exit call.
    pub fn range_exits(&self, range: RangeInclusive<usize>) -> bool {
        range.into_iter().any(|k| {
            let t = &self.tokens[k];
            t.is("return")
                || t.is("break")
                || t.is("continue")
                || t.is("goto")
                || (t.is_ident() && EXIT_CALLS.contains(&t.text.as_str()) && self.is_at(k + 1, "("))
        })
    }

    pub fn facts(&self, function: usize) -> &[Fact] {
        &self.facts[function]
    }

    fn extract_facts(&self, f: usize) -> Vec<Fact> {
        let func = &self.functions[f];
        let mut facts = Vec::new();
        let mut i = func.open + 1;
        while i < func.close {
            let t = &self.tokens[i];
            if (t.is("if") || t.is("while")) && self.is_at(i + 1, "(") {
                let close = self.pair(i + 1).unwrap_or(i + 1);
                let cond = i + 2..=close.saturating_sub(1);
                let body_start = close + 1;
                let body_end = self.statement_end(body_start);
                if body_start <= body_end {
                    self.add_conjuncts(&cond, body_start..=body_end, false, &mut facts);
                }
                if t.is("if") {
                    let exits = self.range_exits(body_start..=body_end);
                    let after = body_end + 1;
                    let block_end = self.block_end[i].min(func.close);
                    if exits && after < block_end {
                        self.add_conjuncts(&cond, after..=block_end - 1, true, &mut facts);
                    } else if self.is_at(after, "else") {
                        let else_end = self.statement_end(after + 1);
                        self.add_conjuncts(&cond, after + 1..=else_end, true, &mut facts);
                    }
                    if !exits && after < block_end {
                        self.add_default_assignment_facts(&cond, body_start..=body_end, after..=block_end - 1, &mut facts);
                        self.add_clamp_facts(&cond, body_start..=body_end, after..=block_end - 1, &mut facts);
                    }
                }
            } else if t.is("for") && self.is_at(i + 1, "(") {
                let close = self.pair(i + 1).unwrap_or(i + 1);
                let parts = self.split_top(i + 2, close, ";");
                let body_start = close + 1;
                let body_end = self.statement_end(body_start);
                if parts.len() == 3 {
                    let (cs, ce) = parts[1];
                    if cs < ce {
                        self.add_conjuncts(&(cs..=ce - 1), body_start..=body_end, false, &mut facts);
                    }
                    self.add_loop_init_fact(parts[0], parts[2], body_start..=body_end, &mut facts);
                }
            }
            if t.is("(") {
                if let Some(close) = self.pair(i) {
                    self.add_short_circuit(i + 1, close, &mut facts);
                }
            } else if t.is("return") || t.is("=") {
                let end = self.skip_expression(i + 1);
                if end > i + 1 {
                    self.add_short_circuit(i + 1, end, &mut facts);
                }
            }
            if t.is("?") {
                self.add_ternary(i, func, &mut facts);
            }
            i += 1;
        }
        facts
    }

    /// Splits `(start..end)` (exclusive end) at top-level `sep` tokens.
    pub fn split_top(&self, start: usize, end: usize, sep: &str) -> Vec<(usize, usize)> {
        let mut parts = Vec::new();
        let mut s = start;
        let mut j = start;
        while j < end {
            let t = &self.tokens[j];
            if t.is(sep) {
                parts.push((s, j));
                s = j + 1;
            } else if (t.is("(") || t.is("[") || t.is("{")) && self.pair(j).is_some_and(|p| p < end) {
                j = self.pair(j).unwrap_or(j);
            }
            j += 1;
        }
        parts.push((s, end));
        parts
    }

    fn add_conjuncts(
        &self,
        cond: &RangeInclusive<usize>,
        region: RangeInclusive<usize>,
        negated: bool,
        out: &mut Vec<Fact>,
    ) {
        if cond.is_empty() {
            return;
        }
        // true branch: every top-level conjunct holds;
        // negated: every top-level disjunct is false.
        let sep = if negated { "||" } else { "&&" };
        let other = if negated { "&&" } else { "||" };
        for (s, e) in self.split_top(*cond.start(), cond.end() + 1, sep) {
            if s >= e || self.split_top(s, e, other).len() > 1 {
                continue;
            }
            if let Some(atom) = self.atom(s, e) {
                self.push_fact(atom, negated, region.clone(), out);
            }
        }
    }

    fn push_fact(&self, (lhs, rel, rhs, unsigned): Atom, negated: bool, region: RangeInclusive<usize>, out: &mut Vec<Fact>) {
        let rel = if negated { rel.negate() } else { rel };
        let mut idents: Vec<String> = lhs
            .iter()
            .chain(rhs.iter())
            .filter(|w| is_identifier(w) && !is_keyword(w) && *w != "strlen" && *w != "sizeof")
            .cloned()
            .collect();
        idents.sort();
        idents.dedup();
        let line = self.line(*region.start());
        out.push(Fact { lhs: lhs.clone(), rel, rhs: rhs.clone(), region: region.clone(), idents: idents.clone(), line, unsigned });
        out.push(Fact { lhs: rhs, rel: rel.flip(), rhs: lhs, region, idents, line, unsigned });
    }

    /// True if `s..e` starts with a cast to an unsigned integer type.
    fn unsigned_cast(&self, s: usize, e: usize) -> bool {
        if !self.is_at(s, "(") {
            return false;
        }
        let Some(close) = self.pair(s).filter(|&c| c + 1 < e) else {
            return false;
        };
        let inner = &self.tokens[s + 1..close];
        is_cast_content(inner)
            && !inner.iter().any(|t| t.is("*"))
            && inner.iter().any(|t| t.is("unsigned") || t.is("size_t") || (t.text.starts_with("uint") && t.text.ends_with("_t")))
    }

    /// Parses `a OP b`, `!a` or `a` into a relation.
    fn atom(&self, mut s: usize, mut e: usize) -> Option<Atom> {
        let mut negations = 0;
        loop {
            while s < e && self.is_at(s, "(") && self.pair(s) == Some(e - 1) {
                s += 1;
                e -= 1;
            }
            if s < e && self.is_at(s, "!") {
                negations += 1;
                s += 1;
                continue;
            }
            break;
        }
        if s >= e {
            return None;
        }
        let mut j = s;
        let mut found = None;
        while j < e {
            let t = &self.tokens[j];
            if let Some(rel) = Rel::parse(&t.text).filter(|_| t.kind == TokenKind::Punct) {
                found = Some((j, rel));
                break;
            }
            if (t.is("(") || t.is("[")) && self.pair(j).is_some_and(|p| p < e) {
                j = self.pair(j).unwrap_or(j);
            }
            j += 1;
        }
        let (lhs, rel, rhs, unsigned) = match found {
            Some((k, rel)) => (
                norm(&self.tokens[s..k]),
                rel,
                norm(&self.tokens[k + 1..e]),
                self.unsigned_cast(s, k) || self.unsigned_cast(k + 1, e),
            ),
            None => (norm(&self.tokens[s..e]), Rel::Ne, vec!["0".to_string()], false),
        };
        if lhs.is_empty() || rhs.is_empty() {
            return None;
        }
        let rel = if negations % 2 == 1 { rel.negate() } else { rel };
        Some((lhs, rel, rhs, unsigned))
    }

    /// `if (n > cap) n = cap;` leaves `n <= cap` afterwards.
    fn add_clamp_facts(
        &self,
        cond: &RangeInclusive<usize>,
        body: RangeInclusive<usize>,
        after: RangeInclusive<usize>,
        out: &mut Vec<Fact>,
    ) {
        let Some((lhs, rel, rhs, _)) = self.atom(*cond.start(), cond.end() + 1) else {
            return;
        };
        let (var, limit) = match rel {
            Rel::Gt | Rel::Ge => (lhs, rhs),
            Rel::Lt | Rel::Le => (rhs, lhs),
            _ => return,
        };
        if var.len() != 1 || !is_identifier(&var[0]) {
            return;
        }
        let (mut s, mut e) = (*body.start(), *body.end());
        if self.is_at(s, "{") && self.pair(s) == Some(e) {
            s += 1;
            e -= 1;
        }
        // exactly `var = limit ;`
        if e < s + 3 || self.tokens[s].text != var[0] || !self.is_at(s + 1, "=") || !self.is_at(e, ";") {
            return;
        }
        if self.skip_expression(s + 2) != e || norm(&self.tokens[s + 2..e]) != limit {
            return;
        }
        self.push_fact((var, Rel::Le, limit, false), false, after, out);
    }

    /// `if (!p) p = "x";` leaves `p` non-null afterwards.
    fn add_default_assignment_facts(
        &self,
        cond: &RangeInclusive<usize>,
        body: RangeInclusive<usize>,
        after: RangeInclusive<usize>,
        out: &mut Vec<Fact>,
    ) {
        let Some((lhs, rel, rhs, _)) = self.atom(*cond.start(), cond.end() + 1) else {
            return;
        };
        if rel != Rel::Eq || rhs != ["0"] || lhs.len() != 1 {
            return;
        }
        let name = &lhs[0];
        let assigns_non_null = body.clone().any(|k| {
            self.tokens[k].text == *name
                && self.is_at(k + 1, "=")
                && self.tok(k + 2).is_some_and(|v| v.kind == TokenKind::Str || v.is("&"))
        });
        if assigns_non_null {
            self.push_fact((lhs, Rel::Ne, rhs, false), false, after, out);
        }
    }

    fn add_loop_init_fact(&self, init: (usize, usize), inc: (usize, usize), body: RangeInclusive<usize>, out: &mut Vec<Fact>) {
        let (s, e) = init;
        // [type] i = <const>
        let Some(eq) = (s..e).find(|&k| self.is_at(k, "=")) else {
            return;
        };
        if eq == s || !self.tokens[eq - 1].is_ident() {
            return;
        }
        let var = self.tokens[eq - 1].text.clone();
        let Some(value) = self.eval(&norm(&self.tokens[eq + 1..e]), eq) else {
            return;
        };
        let increments = (inc.0..inc.1).any(|k| {
            self.tokens[k].text == var
                && (self.is_at(k + 1, "++") || self.is_at(k + 1, "+=") || (k > 0 && self.is_at(k - 1, "++")))
        });
        if value >= 0 && increments {
            self.push_fact((vec![var], Rel::Ge, vec![value.to_string()], false), false, body, out);
        }
    }

    /// In `a && b`, `b` is evaluated only where `a` holds; in `a || b`, only
    /// where `a` is false.
    fn add_short_circuit(&self, start: usize, end: usize, out: &mut Vec<Fact>) {
        for (sep, negated) in [("&&", false), ("||", true)] {
            let parts = self.split_top(start, end, sep);
            if parts.len() < 2 {
                continue;
            }
            for w in 1..parts.len() {
                let region_start = parts[w].0;
                let region_end = parts[parts.len() - 1].1.saturating_sub(1);
                let (ps, pe) = parts[w - 1];
                if ps < pe && region_start <= region_end
                    && let Some(atom) = self.atom(ps, pe) {
                        self.push_fact(atom, negated, region_start..=region_end, out);
                    }
            }
        }
    }

    fn add_ternary(&self, q: usize, func: &Function, out: &mut Vec<Fact>) {
        // condition runs back to the nearest enclosing opener at this depth
        let mut s = q;
        while s > func.open + 1 {
            let t = &self.tokens[s - 1];
            if t.is(")") || t.is("]") {
                s = self.pair(s - 1).unwrap_or(s - 1);
                continue;
            }
            if ["(", ",", "=", "return", ";", "{", "}", "?", ":"].iter().any(|p| t.is(p)) {
                break;
            }
            s -= 1;
        }
        // matching ':' at the same depth
        let mut j = q + 1;
        let mut nested = 0;
        let colon = loop {
            let Some(t) = self.tok(j) else { return };
            if t.is("?") {
                nested += 1;
            } else if t.is(":") {
                if nested == 0 {
                    break j;
                }
                nested -= 1;
            } else if t.is(";") || t.is(")") || t.is(",") {
                return;
            } else if (t.is("(") || t.is("[")) && self.pair(j).is_some() {
                j = self.pair(j).unwrap_or(j);
            }
            j += 1;
        };
        if s < q && q + 1 < colon {
            self.add_conjuncts(&(s..=q - 1), q + 1..=colon - 1, false, out);
            let false_end = self.skip_expression(colon + 1);
            if colon + 1 < false_end {
                self.add_conjuncts(&(s..=q - 1), colon + 1..=false_end - 1, true, out);
            }
        }
    }

    /// Facts holding at `pos` that have not been invalidated by an
    /// assignment between the start of their region and `pos`.
    pub fn facts_at(&self, pos: usize) -> Vec<&Fact> {
        let Some(f) = self.function_at(pos) else {
            return Vec::new();
        };
        self.facts[f]
            .iter()
            .filter(|fact| fact.region.contains(&pos))
            .filter(|fact| !fact.idents.iter().any(|v| self.assigned_between(v, *fact.region.start(), pos)))
            .collect()
    }

    /// True if `name` is written anywhere in `[from, to)`.
    pub fn assigned_between(&self, name: &str, from: usize, to: usize) -> bool {
        (from..to.min(self.tokens.len())).any(|k| self.is_assignment_to(k, name))
    }

    pub fn is_assignment_to(&self, k: usize, name: &str) -> bool {
        let t = &self.tokens[k];
        if !t.is_ident() || t.text != name {
            return false;
        }
        // member access `x.name` / `x->name` is a different object
        if k > 0 && (self.is_at(k - 1, ".") || self.is_at(k - 1, "->")) {
            return false;
        }
        let next = self.tok(k + 1).map(|t| t.text.as_str()).unwrap_or("");
        let prev = if k > 0 { self.tokens[k - 1].text.as_str() } else { "" };
        matches!(next, "=" | "+=" | "-=" | "*=" | "/=" | "%=" | "<<=" | ">>=" | "&=" | "|=" | "^=" | "++" | "--")
            || matches!(prev, "++" | "--")
            || (prev == "&" && k >= 2 && matches!(self.tokens[k - 2].text.as_str(), "," | "("))
    }

    /// Expressions known to equal `expr` at `pos` through a single
    /// assignment (`n = strlen(s)` makes `n` and `strlen(s)` equivalent).
    pub fn equivalents(&self, expr: &Expr, pos: usize) -> Vec<Expr> {
        let mut out = vec![expr.clone()];
        let Some(f) = self.function_at(pos) else {
            return out;
        };
        let func = &self.functions[f];
        for k in func.params_open..pos.min(func.close) {
            let t = &self.tokens[k];
            if !t.is_ident() || !self.is_at(k + 1, "=") || (k > 0 && (self.is_at(k - 1, ".") || self.is_at(k - 1, "->"))) {
                continue;
            }
            let end = self.skip_expression(k + 2);
            let value = norm(&self.tokens[k + 2..end]);
            if self.assigned_between(&t.text, k + 1, pos) {
                continue;
            }
            if value == *expr && !out.contains(&vec![t.text.clone()]) {
                out.push(vec![t.text.clone()]);
            } else if expr.len() == 1 && t.text == expr[0] && !value.is_empty() && !out.contains(&value) {
                out.push(value);
            }
        }
        out
    }

    /// Evaluates an integer constant expression; macros and `sizeof` of
    /// declared objects or basic types are resolved.
    pub fn eval(&self, expr: &[String], pos: usize) -> Option<i64> {
        let mut p = ConstEval { prog: self, toks: expr, i: 0, pos, depth: 0 };
        let v = p.expr(0)?;
        (p.i == expr.len()).then_some(v)
    }

    pub fn sizeof_expr(&self, inner: &[String], pos: usize) -> Option<i64> {
        if inner.len() == 1
            && let Some(d) = self.decl_of(&inner[0], pos) {
                if d.pointer && d.extent.is_none() {
                    return Some(8);
                }
                let elem = d.element_size()?;
                return match &d.extent {
                    Some(ext) => self.eval(ext, pos).map(|n| n * elem),
                    None => Some(elem),
                };
            }
        // `name[0]` or `*name`
        if inner.len() == 4 && inner[1] == "[" && inner[3] == "]" || inner.len() == 2 && inner[0] == "*" {
            let name = if inner[0] == "*" { &inner[1] } else { &inner[0] };
            let d = self.decl_of(name, pos)?;
            return d.element_size();
        }
        if inner.iter().any(|w| w == "*") && inner.last().is_some_and(|w| w == "*") {
            return Some(8);
        }
        type_size(inner)
    }
}

struct ConstEval<'a> {
    prog: &'a Program,
    toks: &'a [String],
    i: usize,
    pos: usize,
    depth: usize,
}

impl ConstEval<'_> {
    fn peek(&self) -> Option<&str> {
        self.toks.get(self.i).map(String::as_str)
    }

    fn expr(&mut self, min_prec: u8) -> Option<i64> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.peek() {
            let prec = match op {
                "*" | "/" | "%" => 5,
                "+" | "-" => 4,
                "<<" | ">>" => 3,
                _ => break,
            };
            if prec < min_prec {
                break;
            }
            let op = op.to_string();
            self.i += 1;
            let rhs = self.expr(prec + 1)?;
            lhs = match op.as_str() {
                "*" => lhs.checked_mul(rhs)?,
                "/" => lhs.checked_div(rhs)?,
                "%" => lhs.checked_rem(rhs)?,
                "+" => lhs.checked_add(rhs)?,
                "-" => lhs.checked_sub(rhs)?,
                "<<" => lhs.checked_shl(u32::try_from(rhs).ok()?)?,
                _ => lhs.checked_shr(u32::try_from(rhs).ok()?)?,
            };
        }
        Some(lhs)
    }

    fn unary(&mut self) -> Option<i64> {
        let t = self.peek()?.to_string();
        self.i += 1;
        match t.as_str() {
            "-" => self.unary().map(|v| -v),
            "+" => self.unary(),
            "(" => {
                let v = self.expr(0)?;
                (self.peek() == Some(")")).then(|| self.i += 1)?;
                Some(v)
            }
            "sizeof" => {
                if self.peek() != Some("(") {
                    return None;
                }
                let start = self.i + 1;
                let mut depth = 0;
                let mut j = self.i;
                while j < self.toks.len() {
                    match self.toks[j].as_str() {
                        "(" => depth += 1,
                        ")" => {
                            depth -= 1;
                            if depth == 0 {
                                break;
                            }
                        }
                        _ => {}
                    }
                    j += 1;
                }
                self.i = j + 1;
                self.prog.sizeof_expr(&self.toks[start..j.min(self.toks.len())], self.pos)
            }
            _ => {
                if let Some(v) = parse_int(&t) {
                    return Some(v);
                }
                if t.starts_with('\'') {
                    return char_value(&t);
                }
                if self.depth < 8
                    && let Some(body) = self.prog.macros.get(&t) {
                        let expr = norm(body);
                        let mut inner = ConstEval { prog: self.prog, toks: &expr, i: 0, pos: self.pos, depth: self.depth + 1 };
                        let v = inner.expr(0)?;
                        return (inner.i == expr.len()).then_some(v);
                    }
                None
            }
        }
    }
}

fn char_value(lit: &str) -> Option<i64> {
    let inner = lit.strip_prefix('\'')?.strip_suffix('\'')?;
    match inner {
        "\\0" => Some(0),
        "\\n" => Some(10),
        "\\t" => Some(9),
        s if s.chars().count() == 1 => s.chars().next().map(|c| c as i64),
        _ => None,
    }
}

pub fn parse_int(text: &str) -> Option<i64> {
    let t = text.trim_end_matches(['u', 'U', 'l', 'L']);
    if let Some(hex) = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        return i64::from_str_radix(hex, 16).ok();
    }
    if t.len() > 1 && t.starts_with('0') && t.chars().all(|c| c.is_ascii_digit()) {
        return i64::from_str_radix(&t[1..], 8).ok();
    }
    t.parse().ok()
}

pub fn is_identifier(w: &str) -> bool {
    w.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && w.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn is_cast_content(tokens: &[Token]) -> bool {
    !tokens.is_empty()
        && (is_type_word(&tokens[0]) || (tokens.len() >= 2 && tokens[tokens.len() - 1].is("*") && tokens[0].is_ident()))
        && tokens.iter().all(|t| t.is("*") || t.is_ident())
}

/// Normalizes a token slice into an [`Expr`].
pub fn norm(tokens: &[Token]) -> Expr {
    let mut s = 0;
    let mut e = tokens.len();
    loop {
        // strip outer parentheses spanning the whole range
        if e > s + 1 && tokens[s].is("(") && matching(tokens, s) == Some(e - 1) {
            s += 1;
            e -= 1;
            continue;
        }
        // strip a leading cast
        if tokens.get(s).is_some_and(|t| t.is("("))
            && let Some(close) = matching(tokens, s)
                && close + 1 < e && is_cast_content(&tokens[s + 1..close]) {
                    s = close + 1;
                    continue;
                }
        break;
    }
    let mut out = Vec::with_capacity(e - s);
    let mut k = s;
    while k < e {
        let t = &tokens[k];
        match t.text.as_str() {
            "NULL" | "nullptr" | "'\\0'" => out.push("0".to_string()),
            "sizeof" if tokens.get(k + 1).is_some_and(|n| n.is_ident()) => {
                out.extend(["sizeof".to_string(), "(".to_string(), tokens[k + 1].text.clone(), ")".to_string()]);
                k += 1;
            }
            "(" if k + 1 < e => {
                // inner casts, e.g. `(size_t)n`
                if let Some(close) = matching(tokens, k)
                    && close + 1 < e && close < e && is_cast_content(&tokens[k + 1..close]) && k > s && !tokens[k - 1].is_ident() {
                        k = close + 1;
                        continue;
                    }
                out.push(t.text.clone());
            }
            _ => out.push(t.text.clone()),
        }
        k += 1;
    }
    out
}

fn matching(tokens: &[Token], open: usize) -> Option<usize> {
    let mut depth = 0i32;
    for (k, t) in tokens.iter().enumerate().skip(open) {
        if t.is("(") {
            depth += 1;
        } else if t.is(")") {
            depth -= 1;
            if depth == 0 {
                return Some(k);
            }
        }
    }
    None
}

/// Splits `base + k` / `base - k` (constant `k`) off an expression.
pub fn split_offset(expr: &[String]) -> (Expr, i64) {
    let mut base: Expr = expr.to_vec();
    let mut offset = 0i64;
    loop {
        let n = base.len();
        if n >= 3
            && let Some(k) = parse_int(&base[n - 1])
                && (base[n - 2] == "+" || base[n - 2] == "-") {
                    offset += if base[n - 2] == "+" { k } else { -k };
                    base.truncate(n - 2);
                    continue;
                }
        if n >= 3 && base[1] == "+"
            && let Some(k) = parse_int(&base[0]) {
                offset += k;
                base.drain(..2);
                continue;
            }
        break;
    }
    if base.len() == 1
        && let Some(k) = parse_int(&base[0]) {
            return (Vec::new(), offset + k);
        }
    (base, offset)
}

pub fn display(expr: &[String]) -> String {
    let mut out = String::new();
    for (i, w) in expr.iter().enumerate() {
        let glue = i == 0
            || matches!(w.as_str(), "(" | ")" | "[" | "]" | "," | "->" | ".")
            || matches!(expr[i - 1].as_str(), "(" | "[" | "->" | "." | "!" | "&" | "*" if i == 1 || expr[i - 1] != "*");
        if !glue {
            out.push(' ');
        }
        out.push_str(w);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prog(src: &str) -> Program {
        Program::parse(src).unwrap()
    }

    fn e(s: &str) -> Expr {
        norm(&tokenize(s).unwrap().tokens)
    }

    #[test]
    fn normalization() {
        assert_eq!(e("(sizeof buf)"), e("sizeof(buf)"));
        assert_eq!(e("(size_t)(n)"), e("n"));
        assert_eq!(e("NULL"), vec!["0"]);
        assert_eq!(split_offset(&e("sizeof(buf) - 1")), (e("sizeof(buf)"), -1));
        assert_eq!(split_offset(&e("len + 1")), (e("len"), 1));
        assert_eq!(split_offset(&e("16")), (vec![], 16));
    }

    #[test]
    fn functions_and_decls() {
        let p = prog("#define N 8\nstatic char g[32];\nint f(const char *src, int n) {\n char buf[N * 2];\n unsigned int i = 0, *q;\n return 0;\n}\n");
        assert_eq!(p.functions.len(), 1);
        assert_eq!(p.functions[0].name, "f");
        let pos = p.functions[0].close - 1;
        let buf = p.decl_of("buf", pos).unwrap();
        assert_eq!(p.eval(buf.extent.as_ref().unwrap(), pos), Some(16));
        assert!(p.decl_of("n", pos).unwrap().is_signed());
        assert!(!p.decl_of("i", pos).unwrap().is_signed());
        assert!(p.decl_of("q", pos).unwrap().pointer);
        assert!(p.decl_of("src", pos).unwrap().pointer);
        assert_eq!(p.eval(&e("sizeof(g)"), pos), Some(32));
        assert_eq!(p.eval(&e("sizeof(buf) - 1"), pos), Some(15));
    }

    #[test]
    fn early_exit_and_loop_facts() {
        let src = "void f(char *s, unsigned n) {\n char b[4];\n if (n >= sizeof(b)) return;\n b[n] = 0;\n for (unsigned i = 0; i < n; i++) { b[i] = s[i]; }\n n = 9;\n b[n] = 1;\n}\n";
        let p = prog(src);
        let idx = |line: usize, text: &str| {
            p.tokens.iter().position(|t| t.line == line && t.text == text).unwrap()
        };
        let at4 = p.facts_at(idx(4, "b"));
        assert!(at4.iter().any(|f| f.lhs == e("n") && f.rel == Rel::Lt && f.rhs == e("sizeof(b)")));
        let at5 = p.facts_at(idx(5, "s"));
        assert!(at5.iter().any(|f| f.lhs == e("i") && f.rel == Rel::Lt && f.rhs == e("n")));
        assert!(at5.iter().any(|f| f.lhs == e("i") && f.rel == Rel::Ge));
        // reassignment on line 6 kills the guard
        let at7 = p.facts_at(idx(7, "b"));
        assert!(!at7.iter().any(|f| f.lhs == e("n")));
    }

    #[test]
    fn short_circuit_and_ternary() {
        let p = prog("int f(int *p, int d) {\n if (p && *p > 0) return 1;\n return d != 0 ? 10 / d : 0;\n}\n");
        let deref = p.tokens.iter().position(|t| t.line == 2 && t.text == "*").unwrap();
        assert!(p.facts_at(deref).iter().any(|f| f.lhs == e("p") && f.rel == Rel::Ne));
        let div = p.tokens.iter().position(|t| t.text == "/").unwrap();
        assert!(p.facts_at(div).iter().any(|f| f.lhs == e("d") && f.rel == Rel::Ne && f.rhs == ["0"]));
    }

    #[test]
    fn equivalents_follow_single_assignment() {
        let p = prog("void f(const char *s) {\n size_t len = strlen(s);\n if (len > 3) return;\n}\n");
        let pos = p.functions[0].close - 1;
        let eq = p.equivalents(&e("strlen(s)"), pos);
        assert!(eq.contains(&e("len")));
    }

    #[test]
    fn unbalanced_is_an_error() {
        assert!(matches!(Program::parse("int f() { if (x) { }"), Err(ParseError::Unbalanced { .. })));
    }
}
