//! Regular expressions over edge labels.
//!
//! Grammar, loosest to tightest binding:
//!
//! ```text
//! alt     := concat ('|' concat)*
//! concat  := postfix ('.'? postfix)*
//! postfix := atom ('*' | '+' | '?')*
//! atom    := IDENT | '`' quoted '`' | '(' ')' | '(' alt ')'
//! ```
//!
//! `IDENT` is `[A-Za-z0-9_]+`. Inside back-quotes any character is allowed;
//! `` \` `` and `\\` escape a back-quote and a backslash. `()` is the empty
//! word.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RegexAst {
    Symbol(String),
    Epsilon,
    Concat(Box<RegexAst>, Box<RegexAst>),
    Union(Box<RegexAst>, Box<RegexAst>),
    Star(Box<RegexAst>),
    Plus(Box<RegexAst>),
    Optional(Box<RegexAst>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("regex syntax error at offset {position}: {message}")]
pub struct RegexError {
    pub position: usize,
    pub message: String,
}

impl RegexAst {
    pub fn sym(label: &str) -> Self {
        RegexAst::Symbol(label.to_owned())
    }

    pub fn concat(l: RegexAst, r: RegexAst) -> Self {
        RegexAst::Concat(Box::new(l), Box::new(r))
    }

    pub fn union(l: RegexAst, r: RegexAst) -> Self {
        RegexAst::Union(Box::new(l), Box::new(r))
    }

    pub fn star(c: RegexAst) -> Self {
        RegexAst::Star(Box::new(c))
    }

    pub fn plus(c: RegexAst) -> Self {
        RegexAst::Plus(Box::new(c))
    }

    pub fn optional(c: RegexAst) -> Self {
        RegexAst::Optional(Box::new(c))
    }

    /// Does the language contain the empty word?
    pub fn nullable(&self) -> bool {
        match self {
            RegexAst::Symbol(_) => false,
            RegexAst::Epsilon | RegexAst::Star(_) | RegexAst::Optional(_) => true,
            RegexAst::Concat(l, r) => l.nullable() && r.nullable(),
            RegexAst::Union(l, r) => l.nullable() || r.nullable(),
            RegexAst::Plus(c) => c.nullable(),
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            RegexAst::Symbol(_) | RegexAst::Epsilon => 1,
            RegexAst::Concat(l, r) | RegexAst::Union(l, r) => 1 + l.size() + r.size(),
            RegexAst::Star(c) | RegexAst::Plus(c) | RegexAst::Optional(c) => 1 + c.size(),
        }
    }

    /// Symbol occurrences in left-to-right order.
    pub fn symbols(&self) -> Vec<&str> {
        fn walk<'a>(ast: &'a RegexAst, out: &mut Vec<&'a str>) {
            match ast {
                RegexAst::Symbol(s) => out.push(s),
                RegexAst::Epsilon => {}
                RegexAst::Concat(l, r) | RegexAst::Union(l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
                RegexAst::Star(c) | RegexAst::Plus(c) | RegexAst::Optional(c) => walk(c, out),
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    fn precedence(&self) -> u8 {
        match self {
            RegexAst::Union(..) => 0,
            RegexAst::Concat(..) => 1,
            RegexAst::Star(_) | RegexAst::Plus(_) | RegexAst::Optional(_) => 2,
            RegexAst::Symbol(_) | RegexAst::Epsilon => 3,
        }
    }
}

pub fn nullable(ast: &RegexAst) -> bool {
    ast.nullable()
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn write_symbol(f: &mut fmt::Formatter<'_>, s: &str) -> fmt::Result {
    if !s.is_empty() && s.chars().all(is_ident_char) {
        return f.write_str(s);
    }
    f.write_str("`")?;
    for c in s.chars() {
        if c == '`' || c == '\\' {
            f.write_str("\\")?;
        }
        write!(f, "{c}")?;
    }
    f.write_str("`")
}

/// Canonical printer; parenthesises only where precedence or the
/// left-associativity of `|` and concatenation require it.
impl fmt::Display for RegexAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let child = |f: &mut fmt::Formatter<'_>, c: &RegexAst, min: u8| {
            if c.precedence() < min {
                write!(f, "({c})")
            } else {
                write!(f, "{c}")
            }
        };
        match self {
            RegexAst::Symbol(s) => write_symbol(f, s),
            RegexAst::Epsilon => f.write_str("()"),
            RegexAst::Union(l, r) => {
                child(f, l, 0)?;
                f.write_str(" | ")?;
                child(f, r, 1)
            }
            RegexAst::Concat(l, r) => {
                child(f, l, 1)?;
                f.write_str(" ")?;
                child(f, r, 2)
            }
            RegexAst::Star(c) | RegexAst::Plus(c) | RegexAst::Optional(c) => {
                child(f, c, 2)?;
                f.write_str(match self {
                    RegexAst::Star(_) => "*",
                    RegexAst::Plus(_) => "+",
                    _ => "?",
                })
            }
        }
    }
}

pub fn parse_regex(text: &str) -> Result<RegexAst, RegexError> {
    let mut p = Parser { src: text, pos: 0 };
    p.skip_ws();
    if p.at_end() {
        return Err(p.error("empty expression"));
    }
    let ast = p.alternation()?;
    p.skip_ws();
    match p.peek() {
        None => Ok(ast),
        Some(')') => Err(p.error("unbalanced `)`")),
        Some(c) => Err(p.error(format!("unexpected `{c}`"))),
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn error(&self, message: impl Into<String>) -> RegexError {
        RegexError { position: self.pos, message: message.into() }
    }

    fn alternation(&mut self) -> Result<RegexAst, RegexError> {
        let mut ast = self.concatenation()?;
        loop {
            self.skip_ws();
            if self.peek() != Some('|') {
                return Ok(ast);
            }
            self.bump();
            ast = RegexAst::union(ast, self.concatenation()?);
        }
    }

    fn concatenation(&mut self) -> Result<RegexAst, RegexError> {
        self.skip_ws();
        match self.peek() {
            None | Some('|') | Some(')') => return Err(self.error("empty alternation branch")),
            _ => {}
        }
        let mut ast = self.postfix()?;
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some('|') | Some(')') => return Ok(ast),
                Some('.') => {
                    self.bump();
                    self.skip_ws();
                    if matches!(self.peek(), None | Some('|') | Some(')')) {
                        return Err(self.error("missing operand after `.`"));
                    }
                }
                _ => {}
            }
            ast = RegexAst::concat(ast, self.postfix()?);
        }
    }

    fn postfix(&mut self) -> Result<RegexAst, RegexError> {
        let mut ast = self.atom()?;
        loop {
            self.skip_ws();
            ast = match self.peek() {
                Some('*') => RegexAst::star(ast),
                Some('+') => RegexAst::plus(ast),
                Some('?') => RegexAst::optional(ast),
                _ => return Ok(ast),
            };
            self.bump();
        }
    }

    fn atom(&mut self) -> Result<RegexAst, RegexError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some('(') => {
                self.bump();
                self.skip_ws();
                if self.peek() == Some(')') {
                    self.bump();
                    return Ok(RegexAst::Epsilon);
                }
                let inner = self.alternation()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(RegexError {
                        position: start,
                        message: "unbalanced `(`".into(),
                    });
                }
                self.bump();
                Ok(inner)
            }
            Some('`') => {
                self.bump();
                let mut label = String::new();
                loop {
                    match self.bump() {
                        None => {
                            return Err(RegexError {
                                position: start,
                                message: "unterminated quoted label".into(),
                            })
                        }
                        Some('`') => break,
                        Some('\\') => match self.bump() {
                            Some(c @ ('`' | '\\')) => label.push(c),
                            _ => return Err(self.error("invalid escape in quoted label")),
                        },
                        Some(c) => label.push(c),
                    }
                }
                if label.is_empty() {
                    return Err(RegexError { position: start, message: "empty label".into() });
                }
                Ok(RegexAst::Symbol(label))
            }
            Some(c) if is_ident_char(c) => {
                while self.peek().is_some_and(is_ident_char) {
                    self.bump();
                }
                Ok(RegexAst::Symbol(self.src[start..self.pos].to_owned()))
            }
            Some(c @ ('*' | '+' | '?')) => Err(self.error(format!("dangling postfix `{c}`"))),
            Some(')') => Err(self.error("unbalanced `)`")),
            Some(c) => Err(self.error(format!("unexpected `{c}`"))),
            None => Err(self.error("unexpected end of expression")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use RegexAst as R;

    fn p(s: &str) -> RegexAst {
        parse_regex(s).unwrap()
    }

    #[test]
    fn precedence() {
        assert_eq!(p("a b | c"), R::union(R::concat(R::sym("a"), R::sym("b")), R::sym("c")));
        assert_eq!(p("(a|b)*"), R::star(R::union(R::sym("a"), R::sym("b"))));
        assert_eq!(p("a**"), R::star(R::star(R::sym("a"))));
        assert_eq!(p("a.b"), p("a b"));
        assert_eq!(p("a b*"), R::concat(R::sym("a"), R::star(R::sym("b"))));
        assert_eq!(p("a|b|c"), R::union(R::union(R::sym("a"), R::sym("b")), R::sym("c")));
    }

    #[test]
    fn epsilon_and_quoted() {
        assert_eq!(p("()"), R::Epsilon);
        assert_eq!(p("()*"), R::star(R::Epsilon));
        assert_eq!(p("`rdf:type` `a\\`b`"), R::concat(R::sym("rdf:type"), R::sym("a`b")));
        assert_eq!(p("knows+ worksAt?"), R::concat(R::plus(R::sym("knows")), R::optional(R::sym("worksAt"))));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let cases = [
            ("(a|b", 0),
            ("a)", 1),
            ("*a", 0),
            ("a|", 2),
            ("|a", 0),
            ("a||b", 2),
            ("(|a)", 1),
            ("", 0),
            ("a . | b", 4),
            ("``", 0),
            ("a $", 2),
        ];
        for (text, pos) in cases {
            let err = parse_regex(text).unwrap_err();
            assert_eq!(err.position, pos, "{text:?}: {err}");
        }
    }

    #[test]
    fn nullable_cases() {
        assert!(p("(a b c)*").nullable());
        assert!(!p("a").nullable());
        assert!(p("a? b*").nullable());
        assert!(!p("a+").nullable());
        assert!(p("()").nullable());
        assert!(p("a | ()").nullable());
    }

    #[test]
    fn printer_round_trip_on_tricky_shapes() {
        let asts = [
            R::concat(R::sym("a"), R::concat(R::sym("b"), R::sym("c"))),
            R::union(R::sym("a"), R::union(R::sym("b"), R::sym("c"))),
            R::star(R::concat(R::sym("a"), R::sym("b"))),
            R::optional(R::Epsilon),
            R::concat(R::union(R::sym("x y"), R::Epsilon), R::plus(R::sym("a\\b"))),
        ];
        for ast in asts {
            let printed = ast.to_string();
            assert_eq!(parse_regex(&printed).unwrap(), ast, "{printed}");
        }
    }
}
