//! Recursive-descent parser for the ASCII sequent syntax.
//!
//! ```text
//! sequent  := formulas "|-" formulas
//! formulas := formula ("," formula)*
//! formula  := lolli
//! lolli    := tensor ("-o" lolli)?
//! tensor   := primary ("*" tensor)?
//! primary  := ATOM | "(" formula ")"
//! ATOM     := [A-Z][A-Za-z0-9]*
//! ```
//!
//! A trailing run of digits on an atom is its occurrence label (`A2` is atom
//! `A`, occurrence 2). Unlabelled atoms are numbered left to right per side,
//! skipping labels already taken explicitly.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::formula::{Atom, Formula, Sequent};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("empty {side} side")]
    EmptySide { side: &'static str },
    #[error("atom {name}{occ} appears twice on the {side} side (byte {offset})")]
    DuplicateOccurrence {
        name: String,
        occ: u32,
        side: &'static str,
        offset: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok<'a> {
    Atom(&'a str),
    LParen,
    RParen,
    Comma,
    Star,
    Lolli,
    Turnstile,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn next(&mut self) -> Result<(usize, Tok<'a>), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let tok = match rest.as_bytes().first() {
            None => return Ok((start, Tok::End)),
            Some(b'(') => Tok::LParen,
            Some(b')') => Tok::RParen,
            Some(b',') => Tok::Comma,
            Some(b'*') => Tok::Star,
            Some(b'-') if rest.starts_with("-o") => Tok::Lolli,
            Some(b'|') if rest.starts_with("|-") => Tok::Turnstile,
            Some(c) if c.is_ascii_uppercase() => {
                let len = rest
                    .bytes()
                    .take_while(|b| b.is_ascii_alphanumeric())
                    .count();
                self.pos += len;
                return Ok((start, Tok::Atom(&rest[..len])));
            }
            Some(_) => {
                let c = rest.chars().next().unwrap_or('?');
                return Err(ParseError::Syntax {
                    offset: start,
                    message: format!("unexpected character {c:?}"),
                });
            }
        };
        self.pos += match tok {
            Tok::Lolli | Tok::Turnstile => 2,
            _ => 1,
        };
        Ok((start, tok))
    }
}

struct RawAtom {
    name: String,
    label: Option<u32>,
    offset: usize,
}

struct Parser<'a> {
    lex: Lexer<'a>,
    peeked: Option<(usize, Tok<'a>)>,
    atoms: Vec<RawAtom>,
}

impl<'a> Parser<'a> {
    fn peek(&mut self) -> Result<(usize, Tok<'a>), ParseError> {
        if self.peeked.is_none() {
            self.peeked = Some(self.lex.next()?);
        }
        Ok(self.peeked.unwrap())
    }

    fn bump(&mut self) -> Result<(usize, Tok<'a>), ParseError> {
        let t = self.peek()?;
        self.peeked = None;
        Ok(t)
    }

    fn formulas(&mut self) -> Result<Vec<Formula>, ParseError> {
        let mut out = vec![self.lolli()?];
        while self.peek()?.1 == Tok::Comma {
            self.bump()?;
            out.push(self.lolli()?);
        }
        Ok(out)
    }

    fn lolli(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.tensor()?;
        if self.peek()?.1 == Tok::Lolli {
            self.bump()?;
            let rhs = self.lolli()?;
            return Ok(Formula::lolli(lhs, rhs));
        }
        Ok(lhs)
    }

    fn tensor(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.primary()?;
        if self.peek()?.1 == Tok::Star {
            self.bump()?;
            let rhs = self.tensor()?;
            return Ok(Formula::tensor(lhs, rhs));
        }
        Ok(lhs)
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.bump()? {
            (offset, Tok::Atom(text)) => {
                let digits = text.bytes().rev().take_while(u8::is_ascii_digit).count();
                let (name, label) = if digits > 0 && digits < text.len() {
                    let (n, d) = text.split_at(text.len() - digits);
                    let label = d.parse::<u32>().map_err(|_| ParseError::Syntax {
                        offset,
                        message: format!("occurrence label {d} out of range"),
                    })?;
                    (n, Some(label))
                } else {
                    (text, None)
                };
                self.atoms.push(RawAtom {
                    name: name.to_string(),
                    label,
                    offset,
                });
                Ok(Formula::atom(name, 0))
            }
            (_, Tok::LParen) => {
                let inner = self.lolli()?;
                match self.bump()? {
                    (_, Tok::RParen) => Ok(inner),
                    (offset, t) => Err(ParseError::Syntax {
                        offset,
                        message: format!("expected ')', found {}", describe(t)),
                    }),
                }
            }
            (offset, t) => Err(ParseError::Syntax {
                offset,
                message: format!("expected an atom or '(', found {}", describe(t)),
            }),
        }
    }
}

fn describe(t: Tok<'_>) -> String {
    match t {
        Tok::Atom(a) => format!("atom {a}"),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::Comma => "','".into(),
        Tok::Star => "'*'".into(),
        Tok::Lolli => "'-o'".into(),
        Tok::Turnstile => "'|-'".into(),
        Tok::End => "end of input".into(),
    }
}

fn number_side(
    side: Vec<Formula>,
    raw: &[RawAtom],
    side_name: &'static str,
) -> Result<Vec<Formula>, ParseError> {
    let mut taken: BTreeMap<&str, BTreeSet<u32>> = BTreeMap::new();
    for a in raw {
        if let Some(l) = a.label {
            if !taken.entry(a.name.as_str()).or_default().insert(l) {
                return Err(ParseError::DuplicateOccurrence {
                    name: a.name.clone(),
                    occ: l,
                    side: side_name,
                    offset: a.offset,
                });
            }
        }
    }
    let mut next: BTreeMap<&str, u32> = BTreeMap::new();
    let mut occs = Vec::with_capacity(raw.len());
    for a in raw {
        let occ = match a.label {
            Some(l) => l,
            None => {
                let used = taken.entry(a.name.as_str()).or_default();
                let n = next.entry(a.name.as_str()).or_insert(0);
                while used.contains(n) {
                    *n += 1;
                }
                used.insert(*n);
                *n
            }
        };
        occs.push(occ);
    }
    let mut it = occs.into_iter();
    Ok(side
        .iter()
        .map(|f| f.map_atoms(&mut |a| Atom::new(a.name.clone(), it.next().unwrap())))
        .collect())
}

/// Parse `left |- right`.
pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    let mut p = Parser {
        lex: Lexer { src: text, pos: 0 },
        peeked: None,
        atoms: Vec::new(),
    };
    if p.peek()?.1 == Tok::Turnstile {
        return Err(ParseError::EmptySide { side: "left" });
    }
    let left = p.formulas()?;
    let left_raw = std::mem::take(&mut p.atoms);
    match p.bump()? {
        (_, Tok::Turnstile) => {}
        (offset, t) => {
            return Err(ParseError::Syntax {
                offset,
                message: format!("expected ',' or '|-', found {}", describe(t)),
            })
        }
    }
    if p.peek()?.1 == Tok::End {
        return Err(ParseError::EmptySide { side: "right" });
    }
    let right = p.formulas()?;
    let right_raw = std::mem::take(&mut p.atoms);
    match p.bump()? {
        (_, Tok::End) => {}
        (offset, t) => {
            return Err(ParseError::Syntax {
                offset,
                message: format!("expected ',' or end of input, found {}", describe(t)),
            })
        }
    }
    Ok(Sequent::new(
        number_side(left, &left_raw, "left")?,
        number_side(right, &right_raw, "right")?,
    ))
}

/// Parse a single formula (occurrences numbered as if it were a whole side).
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        lex: Lexer { src: text, pos: 0 },
        peeked: None,
        atoms: Vec::new(),
    };
    let f = p.lolli()?;
    match p.bump()? {
        (_, Tok::End) => {}
        (offset, t) => {
            return Err(ParseError::Syntax {
                offset,
                message: format!("expected end of input, found {}", describe(t)),
            })
        }
    }
    let raw = std::mem::take(&mut p.atoms);
    Ok(number_side(vec![f], &raw, "formula")?.remove(0))
}
