//! Tokenizer for `.form` documents, with line and column tracking.

use num_bigint::BigInt;

use super::ParseError;

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    Int(BigInt),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Colon,
    Equals,
    Plus,
    Minus,
    Star,
    StarStar,
    Slash,
    Caret,
    Arrow,
    Eof,
}

impl Tok {
    /// How the token reads in an error message.
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::LParen => "`(`".to_string(),
            Tok::RParen => "`)`".to_string(),
            Tok::LBracket => "`[`".to_string(),
            Tok::RBracket => "`]`".to_string(),
            Tok::Comma => "`,`".to_string(),
            Tok::Semi => "`;`".to_string(),
            Tok::Colon => "`:`".to_string(),
            Tok::Equals => "`=`".to_string(),
            Tok::Plus => "`+`".to_string(),
            Tok::Minus => "`-`".to_string(),
            Tok::Star => "`*`".to_string(),
            Tok::StarStar => "`**`".to_string(),
            Tok::Slash => "`/`".to_string(),
            Tok::Caret => "`^`".to_string(),
            Tok::Arrow => "`->`".to_string(),
            Tok::Eof => "end of input".to_string(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: u32,
    pub col: u32,
}

/// Tokenizes the whole input. The result always ends with an `Eof` token
/// carrying the final position, so the parser can report errors there.
pub(crate) fn lex(input: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = input.chars().peekable();
    let mut line: u32 = 1;
    let mut col: u32 = 1;

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else if c.is_some() {
                col += 1;
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                bump!();
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump!();
                }
            }
            '(' => {
                bump!();
                tokens.push(Token { tok: Tok::LParen, line: tline, col: tcol });
            }
            ')' => {
                bump!();
                tokens.push(Token { tok: Tok::RParen, line: tline, col: tcol });
            }
            '[' => {
                bump!();
                tokens.push(Token { tok: Tok::LBracket, line: tline, col: tcol });
            }
            ']' => {
                bump!();
                tokens.push(Token { tok: Tok::RBracket, line: tline, col: tcol });
            }
            ',' => {
                bump!();
                tokens.push(Token { tok: Tok::Comma, line: tline, col: tcol });
            }
            ';' => {
                bump!();
                tokens.push(Token { tok: Tok::Semi, line: tline, col: tcol });
            }
            ':' => {
                bump!();
                tokens.push(Token { tok: Tok::Colon, line: tline, col: tcol });
            }
            '=' => {
                bump!();
                tokens.push(Token { tok: Tok::Equals, line: tline, col: tcol });
            }
            '+' => {
                bump!();
                tokens.push(Token { tok: Tok::Plus, line: tline, col: tcol });
            }
            '-' => {
                bump!();
                if chars.peek() == Some(&'>') {
                    bump!();
                    tokens.push(Token { tok: Tok::Arrow, line: tline, col: tcol });
                } else {
                    tokens.push(Token { tok: Tok::Minus, line: tline, col: tcol });
                }
            }
            '*' => {
                bump!();
                if chars.peek() == Some(&'*') {
                    bump!();
                    tokens.push(Token { tok: Tok::StarStar, line: tline, col: tcol });
                } else {
                    tokens.push(Token { tok: Tok::Star, line: tline, col: tcol });
                }
            }
            '/' => {
                bump!();
                tokens.push(Token { tok: Tok::Slash, line: tline, col: tcol });
            }
            '^' => {
                bump!();
                tokens.push(Token { tok: Tok::Caret, line: tline, col: tcol });
            }
            c if c.is_ascii_digit() => {
                let mut digits = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() {
                        digits.push(c);
                        bump!();
                    } else {
                        break;
                    }
                }
                if chars.peek() == Some(&'.') {
                    return Err(ParseError::syntax(
                        line,
                        col,
                        "floating-point literals are not allowed; use rationals like 3/2",
                    ));
                }
                let value: BigInt = digits.parse().expect("digits form an integer");
                tokens.push(Token { tok: Tok::Int(value), line: tline, col: tcol });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut ident = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        ident.push(c);
                        bump!();
                    } else {
                        break;
                    }
                }
                tokens.push(Token { tok: Tok::Ident(ident), line: tline, col: tcol });
            }
            other => {
                return Err(ParseError::syntax(
                    tline,
                    tcol,
                    format!("unexpected character `{other}`"),
                ));
            }
        }
    }
    tokens.push(Token { tok: Tok::Eof, line, col });
    Ok(tokens)
}
