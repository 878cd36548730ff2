//! Finite group presentations and the `.grp` text format.
//!
//! Format:
//! ```text
//! gens: s1 s2 s3
//! (s1 s2)^2
//! [s1, s2^2]
//! s1^12
//! s2^-1 s3 s2^-1
//! ```
//! One relator word per line. Supported word forms: concatenation of
//! generator names with optional `^k` / `^-k` powers, parenthesized words
//! with powers, and `[a, b]` commutator sugar (a⁻¹b⁻¹ab). Blank lines and
//! `#` comments are ignored.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("line {line}: missing `gens:` header")]
    MissingGensHeader { line: usize },
    #[error("line {line}: unknown generator `{name}`")]
    UnknownGenerator { line: usize, name: String },
    #[error("line {line}: parse error: {msg}")]
    Parse { line: usize, msg: String },
    #[error("EmptyPresentation: no generators declared")]
    EmptyPresentation,
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
}

/// A letter of a relator word: generator index, possibly inverted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenLetter {
    pub gen: usize,
    pub inverse: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub generator_names: Vec<String>,
    pub relators: Vec<Vec<GenLetter>>,
}

impl Presentation {
    pub fn new(
        generator_names: Vec<String>,
        relators: Vec<Vec<GenLetter>>,
    ) -> Result<Presentation, PresentationError> {
        if generator_names.is_empty() {
            return Err(PresentationError::EmptyPresentation);
        }
        for i in 0..generator_names.len() {
            if generator_names[i + 1..].contains(&generator_names[i]) {
                return Err(PresentationError::DuplicateGenerator(
                    generator_names[i].clone(),
                ));
            }
        }
        Ok(Presentation {
            generator_names,
            relators,
        })
    }

    /// Coxeter string group [p_1, ..., p_{n-1}] on generators r0..r_{n-1}:
    /// r_i² = 1, (r_i r_{i+1})^{p_i} = 1, (r_i r_j)² = 1 for |i−j| > 1.
    pub fn coxeter_string(orders: &[usize]) -> Presentation {
        let n = orders.len() + 1;
        let names: Vec<String> = (0..n).map(|i| format!("r{i}")).collect();
        let mut relators = Vec::new();
        let letter = |g: usize| GenLetter {
            gen: g,
            inverse: false,
        };
        for i in 0..n {
            relators.push(vec![letter(i); 2]);
        }
        for (i, &p) in orders.iter().enumerate() {
            let mut w = Vec::with_capacity(2 * p);
            for _ in 0..p {
                w.push(letter(i));
                w.push(letter(i + 1));
            }
            relators.push(w);
        }
        for i in 0..n {
            for j in i + 2..n {
                relators.push(vec![letter(i), letter(j), letter(i), letter(j)]);
            }
        }
        Presentation {
            generator_names: names,
            relators,
        }
    }

    pub fn parse(text: &str) -> Result<Presentation, PresentationError> {
        let mut names: Option<Vec<String>> = None;
        let mut relators = Vec::new();
        let mut header_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            match &names {
                None => {
                    let Some(rest) = line.strip_prefix("gens:") else {
                        return Err(PresentationError::MissingGensHeader { line: line_no });
                    };
                    let ns: Vec<String> = rest.split_whitespace().map(String::from).collect();
                    if ns.is_empty() {
                        return Err(PresentationError::EmptyPresentation);
                    }
                    names = Some(ns);
                    header_line = line_no;
                }
                Some(ns) => {
                    relators.push(parse_word(line, ns, line_no)?);
                }
            }
        }
        let names = names.ok_or(PresentationError::MissingGensHeader {
            line: header_line.max(1),
        })?;
        Presentation::new(names, relators)
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("gens: {}\n", self.generator_names.join(" "));
        for rel in &self.relators {
            let word = rel
                .iter()
                .map(|l| {
                    if l.inverse {
                        format!("{}^-1", self.generator_names[l.gen])
                    } else {
                        self.generator_names[l.gen].clone()
                    }
                })
                .collect::<Vec<_>>()
                .join(" ");
            out.push_str(&word);
            out.push('\n');
        }
        out
    }
}

/// Parses one word. Grammar:
/// word   := factor+
/// factor := atom ('^' int)?
/// atom   := name | '(' word ')' | '[' word ',' word ']'
pub fn parse_word(
    input: &str,
    names: &[String],
    line_no: usize,
) -> Result<Vec<GenLetter>, PresentationError> {
    let tokens = tokenize(input, line_no)?;
    let mut pos = 0usize;
    let word = parse_seq(&tokens, &mut pos, names, line_no, &[])?;
    if pos != tokens.len() {
        return Err(PresentationError::Parse {
            line: line_no,
            msg: format!("unexpected trailing token {:?}", tokens[pos]),
        });
    }
    Ok(word)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    Caret,
    Int(i64),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

fn tokenize(input: &str, line_no: usize) -> Result<Vec<Tok>, PresentationError> {
    let mut toks = Vec::new();
    let mut chars = input.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' => {
                chars.next();
            }
            '(' => {
                chars.next();
                toks.push(Tok::LParen);
            }
            ')' => {
                chars.next();
                toks.push(Tok::RParen);
            }
            '[' => {
                chars.next();
                toks.push(Tok::LBracket);
            }
            ']' => {
                chars.next();
                toks.push(Tok::RBracket);
            }
            ',' => {
                chars.next();
                toks.push(Tok::Comma);
            }
            '^' => {
                chars.next();
                toks.push(Tok::Caret);
            }
            '-' | '0'..='9' => {
                let mut s = String::new();
                if c == '-' {
                    s.push(c);
                    chars.next();
                }
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                let v = s.parse::<i64>().map_err(|_| PresentationError::Parse {
                    line: line_no,
                    msg: format!("bad integer `{s}`"),
                })?;
                toks.push(Tok::Int(v));
            }
            _ if c.is_alphanumeric() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_alphanumeric() || d == '_' {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                toks.push(Tok::Name(s));
            }
            _ => {
                return Err(PresentationError::Parse {
                    line: line_no,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(toks)
}

fn invert(word: &[GenLetter]) -> Vec<GenLetter> {
    word.iter()
        .rev()
        .map(|l| GenLetter {
            gen: l.gen,
            inverse: !l.inverse,
        })
        .collect()
}

fn repeat(word: Vec<GenLetter>, power: i64) -> Vec<GenLetter> {
    let (base, times) = if power < 0 {
        (invert(&word), (-power) as usize)
    } else {
        (word, power as usize)
    };
    let mut out = Vec::with_capacity(base.len() * times);
    for _ in 0..times {
        out.extend_from_slice(&base);
    }
    out
}

fn parse_seq(
    tokens: &[Tok],
    pos: &mut usize,
    names: &[String],
    line_no: usize,
    stop: &[Tok],
) -> Result<Vec<GenLetter>, PresentationError> {
    let mut word = Vec::new();
    while *pos < tokens.len() && !stop.contains(&tokens[*pos]) {
        let atom = match &tokens[*pos] {
            Tok::Name(name) => {
                let gen = names.iter().position(|n| n == name).ok_or_else(|| {
                    PresentationError::UnknownGenerator {
                        line: line_no,
                        name: name.clone(),
                    }
                })?;
                *pos += 1;
                vec![GenLetter {
                    gen,
                    inverse: false,
                }]
            }
            Tok::LParen => {
                *pos += 1;
                let inner = parse_seq(tokens, pos, names, line_no, &[Tok::RParen])?;
                expect(tokens, pos, Tok::RParen, line_no)?;
                inner
            }
            Tok::LBracket => {
                *pos += 1;
                let a = parse_seq(tokens, pos, names, line_no, &[Tok::Comma])?;
                expect(tokens, pos, Tok::Comma, line_no)?;
                let b = parse_seq(tokens, pos, names, line_no, &[Tok::RBracket])?;
                expect(tokens, pos, Tok::RBracket, line_no)?;
                // [a, b] = a⁻¹ b⁻¹ a b
                let mut w = invert(&a);
                w.extend(invert(&b));
                w.extend(a);
                w.extend(b);
                w
            }
            other => {
                return Err(PresentationError::Parse {
                    line: line_no,
                    msg: format!("unexpected token {other:?}"),
                })
            }
        };
        let atom = if *pos < tokens.len() && tokens[*pos] == Tok::Caret {
            *pos += 1;
            let Some(Tok::Int(k)) = tokens.get(*pos) else {
                return Err(PresentationError::Parse {
                    line: line_no,
                    msg: "expected integer after `^`".into(),
                });
            };
            *pos += 1;
            repeat(atom, *k)
        } else {
            atom
        };
        word.extend(atom);
    }
    Ok(word)
}

fn expect(
    tokens: &[Tok],
    pos: &mut usize,
    tok: Tok,
    line_no: usize,
) -> Result<(), PresentationError> {
    if tokens.get(*pos) == Some(&tok) {
        *pos += 1;
        Ok(())
    } else {
        Err(PresentationError::Parse {
            line: line_no,
            msg: format!("expected {tok:?}"),
        })
    }
}
