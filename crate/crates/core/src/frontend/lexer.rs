use num_bigint::BigInt;

use super::FrontendError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(BigInt),
    Semi,
    Comma,
    LParen,
    RParen,
    Assign,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    AndAnd,
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    Eof,
}

impl Tok {
    pub(crate) fn text(&self) -> String {
        let s = match self {
            Tok::Ident(s) => return s.clone(),
            Tok::Int(n) => return n.to_string(),
            Tok::Semi => ";",
            Tok::Comma => ",",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Assign => ":=",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Caret => "^",
            Tok::AndAnd => "&&",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Gt => ">",
            Tok::Ge => ">=",
            Tok::Eq => "==",
            Tok::Ne => "!=",
            Tok::Eof => "",
        };
        s.to_string()
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, FrontendError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let mut push = |tok: Tok, len: usize, i: &mut usize, col: &mut usize| {
            out.push(Token { tok, line: tl, col: tc });
            *i += len;
            *col += len;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                if i < chars.len() && chars[i] == '.' {
                    return Err(FrontendError::NonPolynomial {
                        line: tl,
                        col: tc,
                        msg: "decimal literals are not supported; write p/q".into(),
                    });
                }
                out.push(Token { tok: Tok::Int(text.parse().unwrap()), line: tl, col: tc });
                col += i - start;
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                col += i - start;
                out.push(Token { tok: Tok::Ident(text), line: tl, col: tc });
            }
            _ => {
                let next = chars.get(i + 1).copied();
                match (c, next) {
                    (':', Some('=')) => push(Tok::Assign, 2, &mut i, &mut col),
                    ('&', Some('&')) => push(Tok::AndAnd, 2, &mut i, &mut col),
                    ('<', Some('=')) => push(Tok::Le, 2, &mut i, &mut col),
                    ('>', Some('=')) => push(Tok::Ge, 2, &mut i, &mut col),
                    ('!', Some('=')) => push(Tok::Ne, 2, &mut i, &mut col),
                    ('=', Some('=')) => push(Tok::Eq, 2, &mut i, &mut col),
                    ('<', _) => push(Tok::Lt, 1, &mut i, &mut col),
                    ('>', _) => push(Tok::Gt, 1, &mut i, &mut col),
                    ('=', _) => push(Tok::Eq, 1, &mut i, &mut col),
                    (';', _) => push(Tok::Semi, 1, &mut i, &mut col),
                    (',', _) => push(Tok::Comma, 1, &mut i, &mut col),
                    ('(', _) => push(Tok::LParen, 1, &mut i, &mut col),
                    (')', _) => push(Tok::RParen, 1, &mut i, &mut col),
                    ('+', _) => push(Tok::Plus, 1, &mut i, &mut col),
                    ('-', _) => push(Tok::Minus, 1, &mut i, &mut col),
                    ('*', _) => push(Tok::Star, 1, &mut i, &mut col),
                    ('/', _) => push(Tok::Slash, 1, &mut i, &mut col),
                    ('^', _) => push(Tok::Caret, 1, &mut i, &mut col),
                    _ => {
                        return Err(FrontendError::Syntax {
                            line: tl,
                            col: tc,
                            msg: format!("unexpected character `{c}`"),
                        })
                    }
                }
            }
        }
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}
