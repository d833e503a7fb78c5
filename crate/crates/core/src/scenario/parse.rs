//! Tokenizer and parser for scenario files.
//!
//! ```text
//! # comment
//! kind name { key = value; key: value ... }
//! ```
//!
//! Values are numbers, `(re, im)` complex literals, quoted strings,
//! identifiers, `true`/`false`, `[list, ...]` and `{ key: value ... }` maps.
//! Keys are identifiers or integers. Separators `;` and `,` between entries
//! are optional.

use super::ScenarioError;

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Number(f64),
    Complex(f64, f64),
    Str(String),
    Ident(String),
    Bool(bool),
    List(Vec<Value>),
    Map(Vec<Entry>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: Value,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Block {
    pub kind: String,
    pub name: Option<String>,
    pub entries: Vec<Entry>,
    pub line: usize,
}

impl Block {
    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(f64),
    Str(String),
    Punct(char),
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, ScenarioError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    let mut line = 1;
    while i < chars.len() {
        let ch = chars[i];
        match ch {
            '\n' => {
                line += 1;
                i += 1;
            }
            c if c.is_whitespace() => i += 1,
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '{' | '}' | '[' | ']' | '(' | ')' | ',' | ';' | '=' | ':' => {
                out.push((Tok::Punct(ch), line));
                i += 1;
            }
            '"' => {
                let start = i + 1;
                i += 1;
                while i < chars.len() && chars[i] != '"' {
                    if chars[i] == '\n' {
                        return Err(ScenarioError::Parse { line, message: "unterminated string".into() });
                    }
                    i += 1;
                }
                if i == chars.len() {
                    return Err(ScenarioError::Parse { line, message: "unterminated string".into() });
                }
                out.push((Tok::Str(chars[start..i].iter().collect()), line));
                i += 1;
            }
            c if c.is_ascii_digit() || c == '-' || c == '+' || c == '.' => {
                let start = i;
                i += 1;
                while i < chars.len()
                    && (chars[i].is_ascii_digit()
                        || chars[i] == '.'
                        || chars[i] == 'e'
                        || chars[i] == 'E'
                        || ((chars[i] == '-' || chars[i] == '+') && matches!(chars[i - 1], 'e' | 'E')))
                {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let v: f64 = text
                    .parse()
                    .map_err(|_| ScenarioError::Parse { line, message: format!("bad number `{text}`") })?;
                out.push((Tok::Number(v), line));
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '.') {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), line));
            }
            other => {
                return Err(ScenarioError::Parse { line, message: format!("unexpected character `{other}`") });
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn line(&self) -> usize {
        self.toks.get(self.pos).or(self.toks.last()).map_or(1, |t| t.1)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.0.clone());
        self.pos += 1;
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ScenarioError> {
        Err(ScenarioError::Parse { line: self.line(), message: message.into() })
    }

    fn expect(&mut self, c: char) -> Result<(), ScenarioError> {
        match self.next() {
            Some(Tok::Punct(p)) if p == c => Ok(()),
            Some(t) => {
                self.pos -= 1;
                self.err(format!("expected `{c}`, found {t:?}"))
            }
            None => self.err(format!("expected `{c}`, found end of file")),
        }
    }

    fn skip_separators(&mut self) {
        while matches!(self.peek(), Some(Tok::Punct(';')) | Some(Tok::Punct(','))) {
            self.pos += 1;
        }
    }

    fn key(&mut self) -> Result<String, ScenarioError> {
        match self.next() {
            Some(Tok::Ident(s)) | Some(Tok::Str(s)) => Ok(s),
            Some(Tok::Number(v)) if v.fract() == 0.0 => Ok(format!("{}", v as i64)),
            _ => {
                self.pos -= 1;
                self.err("expected a key")
            }
        }
    }

    /// Entries up to and including the closing `}`.
    fn entries(&mut self) -> Result<Vec<Entry>, ScenarioError> {
        let mut out = Vec::new();
        loop {
            self.skip_separators();
            if matches!(self.peek(), Some(Tok::Punct('}'))) {
                self.pos += 1;
                return Ok(out);
            }
            if self.peek().is_none() {
                return self.err("missing `}`");
            }
            let line = self.line();
            let key = self.key()?;
            match self.next() {
                Some(Tok::Punct('=')) | Some(Tok::Punct(':')) => {}
                _ => {
                    self.pos -= 1;
                    return self.err(format!("expected `=` or `:` after `{key}`"));
                }
            }
            let value = self.value()?;
            out.push(Entry { key, value, line });
        }
    }

    fn value(&mut self) -> Result<Value, ScenarioError> {
        match self.next() {
            Some(Tok::Number(v)) => Ok(Value::Number(v)),
            Some(Tok::Str(s)) => Ok(Value::Str(s)),
            Some(Tok::Ident(s)) => Ok(match s.as_str() {
                "true" => Value::Bool(true),
                "false" => Value::Bool(false),
                _ => Value::Ident(s),
            }),
            Some(Tok::Punct('[')) => {
                let mut items = Vec::new();
                loop {
                    self.skip_separators();
                    if matches!(self.peek(), Some(Tok::Punct(']'))) {
                        self.pos += 1;
                        return Ok(Value::List(items));
                    }
                    if self.peek().is_none() {
                        return self.err("missing `]`");
                    }
                    items.push(self.value()?);
                }
            }
            Some(Tok::Punct('{')) => Ok(Value::Map(self.entries()?)),
            Some(Tok::Punct('(')) => {
                let re = self.number()?;
                self.expect(',')?;
                let im = self.number()?;
                self.expect(')')?;
                Ok(Value::Complex(re, im))
            }
            Some(t) => {
                self.pos -= 1;
                self.err(format!("expected a value, found {t:?}"))
            }
            None => self.err("expected a value, found end of file"),
        }
    }

    fn number(&mut self) -> Result<f64, ScenarioError> {
        match self.next() {
            Some(Tok::Number(v)) => Ok(v),
            _ => {
                self.pos -= 1;
                self.err("expected a number")
            }
        }
    }
}

pub fn parse(src: &str) -> Result<Vec<Block>, ScenarioError> {
    let mut p = Parser { toks: tokenize(src)?, pos: 0 };
    let mut blocks = Vec::new();
    while p.peek().is_some() {
        let line = p.line();
        let kind = match p.next() {
            Some(Tok::Ident(k)) => k,
            _ => {
                p.pos -= 1;
                return p.err("expected a block kind");
            }
        };
        let name = match p.peek() {
            Some(Tok::Ident(_)) | Some(Tok::Str(_)) => Some(p.key()?),
            _ => None,
        };
        p.expect('{')?;
        let entries = p.entries()?;
        blocks.push(Block { kind, name, entries, line });
    }
    Ok(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_and_values() {
        let src = r#"
            # the shift
            config { tol = 1e-9; seed = 7 }
            family u {
              1: [[0, 0], [1, 0]]
              -1: [[(0, 0), (1, 0)], [0, 0]]
            }
            verify v { theorem = "6.2", flag = true, list = [a, b,] }
        "#;
        let b = parse(src).unwrap();
        assert_eq!(b.len(), 3);
        assert_eq!(b[0].name, None);
        assert_eq!(b[0].get("tol").unwrap().value, Value::Number(1e-9));
        assert_eq!(b[1].entries[1].key, "-1");
        assert_eq!(b[1].entries[1].line, 6);
        let Value::List(rows) = &b[1].entries[1].value else { panic!() };
        assert_eq!(rows[0], Value::List(vec![Value::Complex(0.0, 0.0), Value::Complex(1.0, 0.0)]));
        assert_eq!(b[2].get("flag").unwrap().value, Value::Bool(true));
        assert_eq!(
            b[2].get("list").unwrap().value,
            Value::List(vec![Value::Ident("a".into()), Value::Ident("b".into())])
        );
    }

    #[test]
    fn errors_carry_lines() {
        let e = parse("algebra A {\n blocks = [1, 2\n").unwrap_err();
        assert!(matches!(e, ScenarioError::Parse { line: 2, .. }), "{e:?}");
        let e = parse("algebra A { blocks }").unwrap_err();
        assert!(matches!(e, ScenarioError::Parse { line: 1, .. }));
        assert!(parse("x { s = \"open }").is_err());
        assert!(parse("x { a = 1.2.3 }").is_err());
    }
}
