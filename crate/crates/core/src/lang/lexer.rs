use num_bigint::BigInt;

use super::LangError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Int(BigInt),
    Ident(String),
    Punct(char),
    End,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("integer {}", n),
            Tok::Ident(s) => format!("'{}'", s),
            Tok::Punct(c) => format!("'{}'", c),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

const PUNCT: &str = "()[]<>,;|+-*/^=.";

pub fn lex(src: &str) -> Result<Vec<Token>, LangError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_whitespace() {
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
            continue;
        }
        let start = (line, col);
        let tok = if c.is_ascii_digit() {
            let j = (i..chars.len()).find(|&k| !chars[k].is_ascii_digit()).unwrap_or(chars.len());
            let s: String = chars[i..j].iter().collect();
            col += j - i;
            i = j;
            Tok::Int(s.parse().unwrap())
        } else if c.is_alphabetic() || c == '_' {
            let j = (i..chars.len())
                .find(|&k| !(chars[k].is_alphanumeric() || chars[k] == '_'))
                .unwrap_or(chars.len());
            let s: String = chars[i..j].iter().collect();
            col += j - i;
            i = j;
            Tok::Ident(s)
        } else if PUNCT.contains(c) {
            i += 1;
            col += 1;
            Tok::Punct(c)
        } else {
            return Err(LangError::Syntax {
                line,
                col,
                expected: vec![],
                found: format!("character '{}'", c),
            });
        };
        out.push(Token {
            tok,
            line: start.0,
            col: start.1,
        });
    }
    out.push(Token {
        tok: Tok::End,
        line,
        col,
    });
    Ok(out)
}
