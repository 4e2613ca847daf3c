use crate::error::{Error, Result};

use super::{is_op_name, Equation, Flavor, Presentation, Signature, Term};

/// Character cursor tracking line and column for diagnostics.
pub(crate) struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    src: &'a str,
    line: usize,
    column: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str, line: usize, column: usize) -> Self {
        Cursor {
            chars: src.char_indices().peekable(),
            src,
            line,
            column,
        }
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> Error {
        Error::parse(self.line, self.column, message)
    }

    pub(crate) fn skip_ws(&mut self) {
        while let Some(&(_, c)) = self.chars.peek() {
            if !c.is_whitespace() {
                break;
            }
            self.bump();
        }
    }

    pub(crate) fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.peek().map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    pub(crate) fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected `{want}`, found `{c}`"))),
            None => Err(self.error(format!("expected `{want}`, found end of input"))),
        }
    }

    pub(crate) fn eat(&mut self, want: char) -> bool {
        if self.peek() == Some(want) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = match self.chars.peek() {
            Some(&(i, c)) if c.is_alphanumeric() || c == '_' => i,
            Some(&(_, c)) => return Err(self.error(format!("expected a name, found `{c}`"))),
            None => return Err(self.error("expected a name, found end of input")),
        };
        let mut end = start;
        while let Some(&(i, c)) = self.chars.peek() {
            if !(c.is_alphanumeric() || c == '_') {
                break;
            }
            end = i + c.len_utf8();
            self.bump();
        }
        Ok(self.src[start..end].to_string())
    }

    pub(crate) fn finish(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(self.error(format!("unexpected trailing `{c}`"))),
        }
    }
}

pub(crate) fn parse_term_at(cur: &mut Cursor<'_>) -> Result<Term> {
    let (line, column) = (cur.line, cur.column);
    let name = cur.ident()?;
    if let Some(digits) = name.strip_prefix('x') {
        if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
            return match digits.parse::<usize>() {
                Ok(i) if i >= 1 && !digits.starts_with('0') => Ok(Term::Var(i)),
                _ => Err(Error::parse(line, column, format!("bad variable `{name}`"))),
            };
        }
    }
    if !is_op_name(&name) {
        return Err(Error::parse(line, column, format!("bad operation name `{name}`")));
    }
    let mut args = Vec::new();
    if cur.eat('(') {
        loop {
            args.push(parse_term_at(cur)?);
            if cur.eat(')') {
                break;
            }
            cur.expect(',')?;
        }
    }
    Ok(Term::App(name, args))
}

/// Parses `x3`, `e`, `m(x1,m(x2,x3))`, …; no signature check.
pub fn parse_term(src: &str) -> Result<Term> {
    let mut cur = Cursor::new(src, 1, 1);
    let t = parse_term_at(&mut cur)?;
    cur.finish()?;
    Ok(t)
}

enum Section {
    Header,
    Ops,
    Eqs,
}

/// Reads the `theory / flavor / ops: / eqs:` presentation format.
pub fn parse_presentation(src: &str) -> Result<Presentation> {
    let mut name = None;
    let mut flavor = None;
    let mut signature = Signature::new();
    let mut equations = Vec::new();
    let mut section = Section::Header;

    for (idx, raw) in src.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let indent = raw.len() - raw.trim_start().len();
        let col = indent + 1;
        if let Some(rest) = trimmed.strip_prefix("theory ") {
            name = Some(rest.trim().to_string());
            section = Section::Header;
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("flavor ") {
            flavor = Some(
                rest.trim()
                    .parse::<Flavor>()
                    .map_err(|e| Error::parse(line_no, col, e.to_string()))?,
            );
            section = Section::Header;
            continue;
        }
        match trimmed {
            "ops:" => {
                section = Section::Ops;
                continue;
            }
            "eqs:" => {
                section = Section::Eqs;
                continue;
            }
            _ => {}
        }
        match section {
            Section::Header => {
                return Err(Error::parse(line_no, col, format!("unexpected line `{trimmed}`")));
            }
            Section::Ops => {
                let (op, arity) = trimmed
                    .split_once(':')
                    .ok_or_else(|| Error::parse(line_no, col, "expected `<name> : <arity>`"))?;
                let arity: usize = arity.trim().parse().map_err(|_| {
                    Error::parse(line_no, col, format!("bad arity `{}`", arity.trim()))
                })?;
                signature
                    .add(op.trim(), arity)
                    .map_err(|e| Error::parse(line_no, col, e.to_string()))?;
            }
            Section::Eqs => {
                equations.push(parse_equation_line(trimmed, line_no, col)?);
            }
        }
    }

    let name = name.ok_or_else(|| Error::parse(1, 1, "missing `theory <Name>` line"))?;
    let flavor = flavor.ok_or_else(|| Error::parse(1, 1, "missing `flavor` line"))?;
    Presentation::new(name, signature, equations, flavor)
}

fn parse_equation_line(text: &str, line: usize, col: usize) -> Result<Equation> {
    let (arity, body, body_col) = match text.strip_prefix('@') {
        Some(rest) => {
            let (n, body) = rest
                .split_once(':')
                .ok_or_else(|| Error::parse(line, col, "expected `@<n>:` prefix"))?;
            let n: usize = n
                .trim()
                .parse()
                .map_err(|_| Error::parse(line, col + 1, format!("bad arity `{}`", n.trim())))?;
            (Some(n), body, col + text.len() - body.len())
        }
        None => (None, text, col),
    };
    let mut cur = Cursor::new(body, line, body_col);
    let lhs = parse_term_at(&mut cur)?;
    cur.expect('=')?;
    let rhs = parse_term_at(&mut cur)?;
    cur.finish()?;
    match arity {
        Some(n) => Equation::new(n, lhs, rhs).map_err(|e| Error::parse(line, col, e.to_string())),
        None => Ok(Equation::inferred(lhs, rhs)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::Classification;

    #[test]
    fn parses_grammar() {
        let t = parse_term(" m( x1 , m(x2,e) ) ").unwrap();
        assert_eq!(t.to_string(), "m(x1,m(x2,e))");
        assert_eq!(parse_term("x12").unwrap(), Term::Var(12));
        assert!(parse_term("x0").is_err());
        assert!(parse_term("m(x1,").is_err());
        assert!(parse_term("m(x1) x2").is_err());
    }

    #[test]
    fn parse_errors_carry_positions() {
        match parse_term("m(x1,,x2)") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 6)),
            other => panic!("unexpected {other:?}"),
        }
        let src = "theory T\nflavor plain\nops:\n  m : two\n";
        match parse_presentation(src) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parses_presentation_file() {
        let src = "# monoids\ntheory Monoid\nflavor plain\nops:\n  m : 2\n  e : 0\neqs:\n  m(x1,m(x2,x3)) = m(m(x1,x2),x3)\n  @1: m(e,x1) = x1\n  m(x1,e) = x1\n";
        let p = parse_presentation(src).unwrap();
        assert_eq!(p.name, "Monoid");
        assert_eq!(p.equations.len(), 3);
        assert_eq!(p.equations[0].arity, 3);
        assert_eq!(p.classify().unwrap(), Classification::StronglyRegular);
    }

    #[test]
    fn display_round_trips() {
        for src in ["x1", "e", "m(x2,m(e,x1))", "f(g(x3),x1,h)"] {
            assert_eq!(parse_term(src).unwrap().to_string(), src);
        }
    }
}
