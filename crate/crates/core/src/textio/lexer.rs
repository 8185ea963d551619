use super::{Category, ParseError, SourceSpan};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    /// Raw rational literal, validated later.
    Number(String),
    Dot,
    Comma,
    Colon,
    Equals,
    LeftArrow,
    RightArrow,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Number(s) => format!("number '{s}'"),
            Tok::Dot => "'.'".into(),
            Tok::Comma => "','".into(),
            Tok::Colon => "':'".into(),
            Tok::Equals => "'='".into(),
            Tok::LeftArrow => "'<-'".into(),
            Tok::RightArrow => "'->'".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

/// Splits `text` into tokens. `%` starts a comment running to the end of
/// the line. Lexical errors are collected and the offending character is
/// skipped.
pub(crate) fn tokenize(text: &str, file: &str) -> (Vec<Token>, Vec<ParseError>) {
    let mut tokens = Vec::new();
    let mut errors = Vec::new();
    for (line_no, line) in text.split('\n').enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        let span = |col: usize, len: usize| SourceSpan { file: file.to_string(), line: line_no + 1, column: col + 1, length: len };
        while i < chars.len() {
            let c = chars[i];
            let start = i;
            let tok = match c {
                '%' => break,
                c if c.is_whitespace() => {
                    i += 1;
                    continue;
                }
                c if c.is_ascii_alphabetic() => {
                    while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                        i += 1;
                    }
                    Tok::Ident(chars[start..i].iter().collect())
                }
                c if c.is_ascii_digit() || (c == '-' && chars.get(i + 1).is_some_and(char::is_ascii_digit)) => {
                    i += 1;
                    let digits = |i: &mut usize| {
                        while *i < chars.len() && chars[*i].is_ascii_digit() {
                            *i += 1;
                        }
                    };
                    digits(&mut i);
                    // A '.' only continues the literal when a digit follows;
                    // otherwise it terminates the statement.
                    if i + 1 < chars.len() && (chars[i] == '.' || chars[i] == '/') && chars[i + 1].is_ascii_digit() {
                        i += 1;
                        digits(&mut i);
                    }
                    Tok::Number(chars[start..i].iter().collect())
                }
                '<' if chars.get(i + 1) == Some(&'-') => {
                    i += 2;
                    Tok::LeftArrow
                }
                '-' if chars.get(i + 1) == Some(&'>') => {
                    i += 2;
                    Tok::RightArrow
                }
                '.' | ',' | ':' | '=' => {
                    i += 1;
                    match c {
                        '.' => Tok::Dot,
                        ',' => Tok::Comma,
                        ':' => Tok::Colon,
                        _ => Tok::Equals,
                    }
                }
                other => {
                    i += 1;
                    errors.push(ParseError {
                        span: span(start, 1),
                        message: format!("unexpected character '{other}'"),
                        category: Category::Lexical,
                    });
                    continue;
                }
            };
            tokens.push(Token { tok, span: span(start, i - start) });
        }
    }
    (tokens, errors)
}
