// SPDX-License-Identifier: Apache-2.0

use crate::model::{Iri, Term, Tick, TimePoint};

use super::{ParseError, ParseErrorKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum TokenKind {
    Iri(Iri),
    Literal { lexical: String, datatype: Iri },
    Word(String),
    Dot,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Token {
    pub kind: TokenKind,
    pub column: usize,
}

impl Token {
    pub fn describe(&self) -> String {
        match &self.kind {
            TokenKind::Iri(iri) => iri.to_string(),
            TokenKind::Literal { .. } => "a literal".to_owned(),
            TokenKind::Word(w) => format!("'{w}'"),
            TokenKind::Dot => "'.'".to_owned(),
        }
    }
}

/// Splits `text` into `(line_number, line)` pairs, dropping CR before LF.
pub(crate) fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.split('\n')
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
}

/// Tokenizes one line. Comments run from an unquoted `#` to the end.
pub(crate) fn tokenize(line_no: usize, line: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    let err = |col: usize, kind, msg: String| ParseError::new(line_no, col + 1, kind, msg);
    while i < chars.len() {
        let c = chars[i];
        if c == ' ' || c == '\t' {
            i += 1;
            continue;
        }
        let start = i;
        match c {
            '#' => break,
            '<' => {
                let (iri, next) =
                    read_iri(&chars, i).map_err(|(col, kind, msg)| err(col, kind, msg))?;
                tokens.push(Token {
                    kind: TokenKind::Iri(iri),
                    column: start + 1,
                });
                i = next;
            }
            '"' => {
                let mut lexical = String::new();
                i += 1;
                loop {
                    match chars.get(i) {
                        None => {
                            return Err(err(
                                start,
                                ParseErrorKind::Syntax,
                                "unterminated literal".into(),
                            ))
                        }
                        Some('"') => {
                            i += 1;
                            break;
                        }
                        Some('\\') => {
                            let unescaped = match chars.get(i + 1) {
                                Some('"') => '"',
                                Some('\\') => '\\',
                                Some('n') => '\n',
                                Some('r') => '\r',
                                Some('t') => '\t',
                                _ => {
                                    return Err(err(
                                        i,
                                        ParseErrorKind::BadTerm,
                                        "invalid escape sequence".into(),
                                    ))
                                }
                            };
                            lexical.push(unescaped);
                            i += 2;
                        }
                        Some(&ch) => {
                            lexical.push(ch);
                            i += 1;
                        }
                    }
                }
                if chars.get(i) != Some(&'^')
                    || chars.get(i + 1) != Some(&'^')
                    || chars.get(i + 2) != Some(&'<')
                {
                    return Err(err(
                        i,
                        ParseErrorKind::BadTerm,
                        "literal needs a datatype: \"...\"^^<datatype>".into(),
                    ));
                }
                let (datatype, next) =
                    read_iri(&chars, i + 2).map_err(|(col, kind, msg)| err(col, kind, msg))?;
                tokens.push(Token {
                    kind: TokenKind::Literal { lexical, datatype },
                    column: start + 1,
                });
                i = next;
            }
            _ => {
                while i < chars.len() && !matches!(chars[i], ' ' | '\t') {
                    i += 1;
                }
                let mut word: String = chars[start..i].iter().collect();
                // `2020.` at the end of a line is a word followed by the terminator.
                let rest_blank = chars[i..]
                    .iter()
                    .position(|c| !matches!(c, ' ' | '\t'))
                    .is_none_or(|p| chars[i + p] == '#');
                if word.len() > 1 && word.ends_with('.') && rest_blank {
                    word.pop();
                    tokens.push(Token {
                        kind: TokenKind::Word(word),
                        column: start + 1,
                    });
                    tokens.push(Token {
                        kind: TokenKind::Dot,
                        column: i,
                    });
                } else if word == "." {
                    tokens.push(Token {
                        kind: TokenKind::Dot,
                        column: start + 1,
                    });
                } else {
                    tokens.push(Token {
                        kind: TokenKind::Word(word),
                        column: start + 1,
                    });
                }
            }
        }
    }
    Ok(tokens)
}

type LexFailure = (usize, ParseErrorKind, String);

/// Reads `<...>` starting at `chars[start] == '<'`.
fn read_iri(chars: &[char], start: usize) -> Result<(Iri, usize), LexFailure> {
    let mut i = start + 1;
    while i < chars.len() && chars[i] != '>' {
        i += 1;
    }
    if i == chars.len() {
        return Err((start, ParseErrorKind::Syntax, "unterminated '<'".into()));
    }
    let body: String = chars[start + 1..i].iter().collect();
    match Iri::new(body.clone()) {
        Ok(iri) => Ok((iri, i + 1)),
        Err(_) => Err((
            start,
            ParseErrorKind::BadTerm,
            format!("invalid identifier <{body}>"),
        )),
    }
}

/// Cursor over one line's tokens that turns grammar mismatches into errors.
pub(crate) struct Cursor<'a> {
    line: usize,
    line_len: usize,
    tokens: &'a [Token],
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(line: usize, text: &str, tokens: &'a [Token]) -> Self {
        Cursor {
            line,
            line_len: text.chars().count(),
            tokens,
            pos: 0,
        }
    }

    pub fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<&'a Token> {
        let t = self.tokens.get(self.pos);
        self.pos += 1;
        t
    }

    pub fn error(
        &self,
        token: Option<&Token>,
        kind: ParseErrorKind,
        message: String,
    ) -> ParseError {
        let column = token.map_or(self.line_len + 1, |t| t.column);
        ParseError::new(self.line, column, kind, message)
    }

    fn unexpected(&self, token: Option<&Token>, expected: &str) -> ParseError {
        let found = token.map_or("end of line".to_owned(), Token::describe);
        self.error(
            token,
            ParseErrorKind::Syntax,
            format!("expected {expected}, found {found}"),
        )
    }

    pub fn iri(&mut self, what: &str) -> Result<Iri, ParseError> {
        let t = self.next();
        match t.map(|t| &t.kind) {
            Some(TokenKind::Iri(iri)) => Ok(iri.clone()),
            Some(TokenKind::Literal { .. }) => Err(self.error(
                t,
                ParseErrorKind::BadTerm,
                format!("{what} cannot be a literal"),
            )),
            _ => Err(self.unexpected(t, what)),
        }
    }

    pub fn term(&mut self) -> Result<Term, ParseError> {
        let t = self.next();
        match t.map(|t| &t.kind) {
            Some(TokenKind::Iri(iri)) => Ok(Term::Entity(iri.clone())),
            Some(TokenKind::Literal { lexical, datatype }) => Ok(Term::Literal {
                lexical: lexical.clone(),
                datatype: datatype.clone(),
            }),
            _ => Err(self.unexpected(t, "tail term")),
        }
    }

    pub fn word(&mut self, what: &str) -> Result<(&'a str, &'a Token), ParseError> {
        let t = self.next();
        match t.map(|t| &t.kind) {
            Some(TokenKind::Word(w)) => Ok((w.as_str(), t.expect("matched"))),
            _ => Err(self.unexpected(t, what)),
        }
    }

    pub fn timepoint(&mut self, what: &str) -> Result<TimePoint, ParseError> {
        let t = self.next();
        match t.map(|t| &t.kind) {
            Some(TokenKind::Word(w)) => w.parse().map_err(|_| {
                self.error(
                    t,
                    ParseErrorKind::BadTimepoint,
                    format!("invalid {what} {w:?}"),
                )
            }),
            Some(TokenKind::Iri(_)) | Some(TokenKind::Literal { .. }) => Err(self.error(
                t,
                ParseErrorKind::BadTimepoint,
                format!("expected {what}, found {}", t.expect("matched").describe()),
            )),
            _ => Err(self.unexpected(t, what)),
        }
    }

    /// A finite tick: `inf` and `-inf` are refused.
    pub fn tick(&mut self, what: &str) -> Result<Tick, ParseError> {
        let t = self.peek();
        match self.timepoint(what)? {
            TimePoint::Finite(v) => Ok(v),
            other => Err(self.error(
                t,
                ParseErrorKind::BadTimepoint,
                format!("{what} must be finite, found {other}"),
            )),
        }
    }

    pub fn dot(&mut self) -> Result<(), ParseError> {
        let t = self.next();
        match t.map(|t| &t.kind) {
            Some(TokenKind::Dot) => Ok(()),
            _ => Err(self.unexpected(t, "'.'")),
        }
    }

    pub fn end(&mut self) -> Result<(), ParseError> {
        match self.next() {
            None => Ok(()),
            t => Err(self.unexpected(t, "end of line")),
        }
    }
}
