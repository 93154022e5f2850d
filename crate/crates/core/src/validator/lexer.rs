//! Tokenizer for C-family sources.
//!
//! Comments are dropped, object-like `#define`s are collected, and every
//! other preprocessor line is skipped.

use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Ident,
    Number,
    Str,
    Char,
    Punct,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub line: usize,
}

impl Token {
    pub fn is(&self, text: &str) -> bool {
        self.text == text && self.kind != TokenKind::Str && self.kind != TokenKind::Char
    }

    pub fn is_ident(&self) -> bool {
        self.kind == TokenKind::Ident
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct LexError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Default)]
pub struct Lexed {
    pub tokens: Vec<Token>,
    pub macros: HashMap<String, Vec<Token>>,
}

const PUNCT3: &[&str] = &["<<=", ">>=", "..."];
const PUNCT2: &[&str] = &[
    "->", "++", "--", "<=", ">=", "==", "!=", "&&", "||", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<",
    ">>", "::",
];
const PUNCT1: &str = "+-*/%<>=!&|^~?:;,.()[]{}";

pub fn tokenize(source: &str) -> Result<Lexed, LexError> {
    let bytes = source.as_bytes();
    let mut out = Lexed::default();
    let mut i = 0;
    let mut line = 1;
    let mut at_line_start = true;

    while i < bytes.len() {
        let c = bytes[i];
        if c == b'\n' {
            line += 1;
            i += 1;
            at_line_start = true;
            continue;
        }
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == b'#' && at_line_start {
            let start_line = line;
            let mut end = i;
            // honour backslash continuations
            while end < bytes.len() && bytes[end] != b'\n' {
                if bytes[end] == b'\\' && bytes.get(end + 1) == Some(&b'\n') {
                    end += 2;
                    line += 1;
                    continue;
                }
                end += 1;
            }
            let directive = source[i + 1..end].replace("\\\n", " ");
            record_define(&directive, start_line, &mut out.macros)?;
            i = end;
            continue;
        }
        at_line_start = false;
        if c == b'/' && bytes.get(i + 1) == Some(&b'/') {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        if c == b'/' && bytes.get(i + 1) == Some(&b'*') {
            let start_line = line;
            i += 2;
            loop {
                if i + 1 >= bytes.len() {
                    return Err(LexError { line: start_line, message: "unterminated block comment".into() });
                }
                if bytes[i] == b'*' && bytes[i + 1] == b'/' {
                    i += 2;
                    break;
                }
                if bytes[i] == b'\n' {
                    line += 1;
                }
                i += 1;
            }
            continue;
        }
        if c == b'"' || c == b'\'' {
            let start = i;
            let start_line = line;
            i += 1;
            loop {
                match bytes.get(i) {
                    None | Some(b'\n') => {
                        return Err(LexError {
                            line: start_line,
                            message: format!("unterminated {} literal", if c == b'"' { "string" } else { "character" }),
                        });
                    }
                    Some(b'\\') => i += 2,
                    Some(&b) if b == c => {
                        i += 1;
                        break;
                    }
                    Some(_) => i += 1,
                }
            }
            let kind = if c == b'"' { TokenKind::Str } else { TokenKind::Char };
            out.tokens.push(Token { kind, text: source[start..i].to_string(), line: start_line });
            continue;
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            // string prefixes: L"..", u8"..", u"..", U".."
            if matches!(&source[start..i], "L" | "u" | "U" | "u8") && matches!(bytes.get(i), Some(b'"') | Some(b'\'')) {
                continue;
            }
            out.tokens.push(Token { kind: TokenKind::Ident, text: source[start..i].to_string(), line });
            continue;
        }
        if c.is_ascii_digit() || (c == b'.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'.' || bytes[i] == b'_') {
                i += 1;
            }
            out.tokens.push(Token { kind: TokenKind::Number, text: source[start..i].to_string(), line });
            continue;
        }
        let rest = &source[i..];
        if let Some(p) = PUNCT3.iter().chain(PUNCT2).find(|p| rest.starts_with(**p)) {
            out.tokens.push(Token { kind: TokenKind::Punct, text: p.to_string(), line });
            i += p.len();
            continue;
        }
        if PUNCT1.as_bytes().contains(&c) {
            out.tokens.push(Token { kind: TokenKind::Punct, text: (c as char).to_string(), line });
            i += 1;
            continue;
        }
        let ch = source[i..].chars().next().unwrap_or('?');
        return Err(LexError { line, message: format!("unexpected character `{ch}`") });
    }
    Ok(out)
}

fn record_define(directive: &str, line: usize, macros: &mut HashMap<String, Vec<Token>>) -> Result<(), LexError> {
    let body = directive.trim_start();
    let Some(rest) = body.strip_prefix("define") else {
        return Ok(());
    };
    let rest = rest.trim_start();
    let name_end = rest
        .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
        .unwrap_or(rest.len());
    let name = &rest[..name_end];
    if name.is_empty() || rest[name_end..].starts_with('(') {
        // function-like macros are not expanded
        return Ok(());
    }
    let value = tokenize(&rest[name_end..]).map_err(|e| LexError { line, message: e.message })?;
    macros.insert(name.to_string(), value.tokens.into_iter().map(|t| Token { line, ..t }).collect());
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts(src: &str) -> Vec<String> {
        tokenize(src).unwrap().tokens.into_iter().map(|t| t.text).collect()
    }

    #[test]
    fn operators_and_literals() {
        assert_eq!(
            texts("if (n >= sizeof(buf)) p->x += 0x1F; s = \"a\\\"b\";"),
            [
                "if", "(", "n", ">=", "sizeof", "(", "buf", ")", ")", "p", "->", "x", "+=", "0x1F", ";", "s", "=",
                "\"a\\\"b\"", ";"
            ]
        );
    }

    #[test]
    fn comments_and_directives() {
        let lexed = tokenize("#include <stdio.h>\n#define SIZE 16 /* c */\n// x\nchar b[SIZE]; /* y\n z */ int q;").unwrap();
        let t: Vec<_> = lexed.tokens.iter().map(|t| (t.text.as_str(), t.line)).collect();
        assert_eq!(t, [("char", 4), ("b", 4), ("[", 4), ("SIZE", 4), ("]", 4), (";", 4), ("int", 5), ("q", 5), (";", 5)]);
        assert_eq!(lexed.macros["SIZE"][0].text, "16");
    }

    #[test]
    fn untokenizable_inputs() {
        assert!(tokenize("char *s = \"abc;\n").is_err());
        assert!(tokenize("int x; /* never closed").is_err());
        assert!(tokenize("int @x;").is_err());
    }
}
