use super::ExprError;

#[derive(Debug, Clone, PartialEq)]
pub(super) enum Tok {
    Ident(String),
    Number(f64),
    Str(String),
    /// Contents of `<...>`, untrimmed.
    Path(String),
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
    End,
}

impl Tok {
    pub(super) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Number(n) => format!("number {n}"),
            Tok::Str(_) => "string literal".into(),
            Tok::Path(p) => format!("<{p}>"),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(super) struct Spanned {
    pub tok: Tok,
    pub pos: usize,
}

/// Which characters may continue an identifier.
#[derive(Clone, Copy)]
pub(super) enum Mode {
    /// Operation names: XML NCName characters.
    Operations,
    /// Data expressions: `-` and `.` are operators and decimal points.
    Data,
}

fn ident_char(c: char, mode: Mode) -> bool {
    c.is_alphanumeric() || c == '_' || (matches!(mode, Mode::Operations) && (c == '-' || c == '.'))
}

pub(super) fn lex(text: &str, mode: Mode) -> Result<Vec<Spanned>, ExprError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        let tok = match c {
            c if c.is_whitespace() => {
                chars.next();
                continue;
            }
            '(' => single(&mut chars, Tok::LParen),
            ')' => single(&mut chars, Tok::RParen),
            '+' if matches!(mode, Mode::Data) => single(&mut chars, Tok::Plus),
            '-' if matches!(mode, Mode::Data) => single(&mut chars, Tok::Minus),
            '*' if matches!(mode, Mode::Data) => single(&mut chars, Tok::Star),
            '/' if matches!(mode, Mode::Data) => single(&mut chars, Tok::Slash),
            '<' if matches!(mode, Mode::Data) => {
                chars.next();
                let mut body = String::new();
                loop {
                    match chars.next() {
                        Some((_, '>')) => break,
                        Some((_, ch)) => body.push(ch),
                        None => return Err(ExprError::syntax(pos, "unterminated path reference")),
                    }
                }
                Tok::Path(body)
            }
            '"' if matches!(mode, Mode::Data) => {
                chars.next();
                let mut body = String::new();
                loop {
                    match chars.next() {
                        Some((_, '"')) => break,
                        Some((_, '\\')) => match chars.next() {
                            Some((_, e @ ('"' | '\\'))) => body.push(e),
                            Some((_, 'n')) => body.push('\n'),
                            Some((at, other)) => {
                                return Err(ExprError::syntax(at, format!("unknown escape \\{other}")))
                            }
                            None => return Err(ExprError::syntax(pos, "unterminated string literal")),
                        },
                        Some((_, ch)) => body.push(ch),
                        None => return Err(ExprError::syntax(pos, "unterminated string literal")),
                    }
                }
                Tok::Str(body)
            }
            c if c.is_ascii_digit() && matches!(mode, Mode::Data) => {
                let mut end = pos;
                let mut seen_dot = false;
                while let Some(&(i, ch)) = chars.peek() {
                    if ch.is_ascii_digit() || (ch == '.' && !seen_dot) {
                        seen_dot |= ch == '.';
                        end = i + ch.len_utf8();
                        chars.next();
                    } else {
                        break;
                    }
                }
                let lit = &text[pos..end];
                let value = lit
                    .parse::<f64>()
                    .map_err(|_| ExprError::syntax(pos, format!("malformed number {lit}")))?;
                Tok::Number(value)
            }
            c if ident_char(c, mode) && !c.is_ascii_digit() => {
                let mut end = pos;
                while let Some(&(i, ch)) = chars.peek() {
                    if ident_char(ch, mode) {
                        end = i + ch.len_utf8();
                        chars.next();
                    } else {
                        break;
                    }
                }
                Tok::Ident(text[pos..end].to_string())
            }
            other => return Err(ExprError::syntax(pos, format!("unexpected character '{other}'"))),
        };
        out.push(Spanned { tok, pos });
    }
    out.push(Spanned {
        tok: Tok::End,
        pos: text.len(),
    });
    Ok(out)
}

fn single(chars: &mut std::iter::Peekable<std::str::CharIndices>, tok: Tok) -> Tok {
    chars.next();
    tok
}
