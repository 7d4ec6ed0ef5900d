use super::diag::{Diagnostic, Entity, Rule, Span};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    Number(f64),
    /// Number with an `i` suffix, sign included.
    Imag(f64),
    Eq,
    LBracket,
    RBracket,
    Comma,
    Dot,
    Arrow,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number(x) => format!("number {x}"),
            Tok::Imag(x) => format!("imaginary {x}i"),
            Tok::Eq => "`=`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Arrow => "`->`".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: Span,
}

/// Tokenizes one line (without its terminator). Stops at `#`.
pub(crate) fn lex_line(line: &str, line_no: usize) -> Result<Vec<Token>, Diagnostic> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        let span = Span::new(line_no, i + 1);
        if ch == '#' {
            break;
        }
        if ch.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match ch {
            '=' => Some(Tok::Eq),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, span });
            i += 1;
            continue;
        }
        if ch == '-' && chars.get(i + 1) == Some(&'>') {
            out.push(Token {
                tok: Tok::Arrow,
                span,
            });
            i += 2;
            continue;
        }
        if ch.is_ascii_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                span,
            });
            continue;
        }
        let starts_number = ch.is_ascii_digit()
            || ((ch == '+' || ch == '-' || ch == '.')
                && chars
                    .get(i + 1)
                    .is_some_and(|c| c.is_ascii_digit() || *c == '.'));
        // A lone `.` between identifiers is a path separator.
        if ch == '.' && !chars.get(i + 1).is_some_and(|c| c.is_ascii_digit()) {
            out.push(Token {
                tok: Tok::Dot,
                span,
            });
            i += 1;
            continue;
        }
        if starts_number {
            let (tok, next) = lex_number(&chars, i, span)?;
            out.push(Token { tok, span });
            i = next;
            continue;
        }
        return Err(Diagnostic::new(
            Rule::Lexical,
            Entity::Text,
            format!("unexpected character `{ch}`"),
        )
        .at(span));
    }
    Ok(out)
}

fn lex_number(chars: &[char], start: usize, span: Span) -> Result<(Tok, usize), Diagnostic> {
    let mut i = start;
    if chars[i] == '+' || chars[i] == '-' {
        i += 1;
    }
    let digits = |i: &mut usize| {
        let s = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        *i - s
    };
    let mut mantissa = digits(&mut i);
    if i < chars.len() && chars[i] == '.' {
        i += 1;
        mantissa += digits(&mut i);
    }
    let bad = |msg: &str| Diagnostic::new(Rule::Lexical, Entity::Text, msg.to_string()).at(span);
    if mantissa == 0 {
        return Err(bad("malformed number"));
    }
    if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
        let mut j = i + 1;
        if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
            j += 1;
        }
        if digits(&mut j) == 0 {
            return Err(bad("malformed exponent"));
        }
        i = j;
    }
    let text: String = chars[start..i].iter().collect();
    let value: f64 = text.parse().map_err(|_| bad("malformed number"))?;
    if !value.is_finite() {
        return Err(bad("number out of range"));
    }
    if i < chars.len() && chars[i] == 'i' {
        let after = chars.get(i + 1);
        if !after.is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_') {
            return Ok((Tok::Imag(value), i + 1));
        }
    }
    if i < chars.len() && (chars[i].is_ascii_alphabetic() || chars[i] == '_' || chars[i] == '.') {
        return Err(bad("malformed number"));
    }
    Ok((Tok::Number(value), i))
}
