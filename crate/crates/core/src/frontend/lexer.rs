use super::FrontendError;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Atom(String),
    /// Quoted atoms never act as operators.
    QAtom(String),
    Var(String),
    Int(i64),
    /// `(` directly after a name, i.e. functional notation.
    OpenCall,
    Open,
    Close,
    OpenList,
    CloseList,
    OpenCurly,
    CloseCurly,
    Comma,
    Bar,
    End,
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
    /// Whitespace or a comment immediately precedes this token.
    pub layout_before: bool,
}

const SYMBOL_CHARS: &str = "+-*/\\^<>=~:.?@#&$";

pub(crate) fn is_symbol_char(c: char) -> bool {
    SYMBOL_CHARS.contains(c)
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, off: usize) -> Option<char> {
        self.chars.get(self.pos + off).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&self, msg: impl Into<String>) -> FrontendError {
        FrontendError::Syntax {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<Token>, FrontendError> {
    let mut cur = Cursor {
        chars: src.chars().collect(),
        pos: 0,
        line: 1,
        col: 1,
        _src: src,
    };
    let mut out = Vec::new();
    loop {
        let mut layout = false;
        // whitespace and comments
        loop {
            match cur.peek() {
                Some(c) if c.is_whitespace() => {
                    cur.bump();
                    layout = true;
                }
                Some('%') => {
                    while let Some(c) = cur.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                    layout = true;
                }
                Some('/') if cur.peek_at(1) == Some('*') => {
                    let (line, col) = (cur.line, cur.col);
                    cur.bump();
                    cur.bump();
                    loop {
                        match cur.bump() {
                            Some('*') if cur.peek() == Some('/') => {
                                cur.bump();
                                break;
                            }
                            Some(_) => {}
                            None => {
                                return Err(FrontendError::Syntax {
                                    line,
                                    col,
                                    msg: "unterminated block comment".into(),
                                })
                            }
                        }
                    }
                    layout = true;
                }
                _ => break,
            }
        }
        let (line, col) = (cur.line, cur.col);
        let Some(c) = cur.peek() else { break };
        let tok = if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(d) = cur.peek().filter(|d| d.is_ascii_digit()) {
                s.push(d);
                cur.bump();
            }
            Tok::Int(s.parse().map_err(|_| cur.error("integer literal out of range"))?)
        } else if c == '_' || c.is_uppercase() {
            let mut s = String::new();
            while let Some(d) = cur.peek().filter(|d| d.is_alphanumeric() || *d == '_') {
                s.push(d);
                cur.bump();
            }
            Tok::Var(s)
        } else if c.is_alphabetic() {
            let mut s = String::new();
            while let Some(d) = cur.peek().filter(|d| d.is_alphanumeric() || *d == '_') {
                s.push(d);
                cur.bump();
            }
            Tok::Atom(s)
        } else if c == '\'' {
            cur.bump();
            let mut s = String::new();
            loop {
                match cur.bump() {
                    Some('\'') if cur.peek() == Some('\'') => {
                        cur.bump();
                        s.push('\'');
                    }
                    Some('\'') => break,
                    Some('\\') => match cur.bump() {
                        Some('n') => s.push('\n'),
                        Some('t') => s.push('\t'),
                        Some('\\') => s.push('\\'),
                        Some('\'') => s.push('\''),
                        Some(other) => {
                            return Err(cur.error(format!("unknown escape `\\{other}`")))
                        }
                        None => return Err(cur.error("unterminated quoted atom")),
                    },
                    Some(other) => s.push(other),
                    None => {
                        return Err(FrontendError::Syntax {
                            line,
                            col,
                            msg: "unterminated quoted atom".into(),
                        })
                    }
                }
            }
            Tok::QAtom(s)
        } else if c == '"' {
            return Err(FrontendError::Unsupported {
                construct: "string literal".into(),
                line,
                col,
            });
        } else if c == '.'
            && cur
                .peek_at(1)
                .map_or(true, |n| n.is_whitespace() || n == '%')
        {
            cur.bump();
            Tok::End
        } else if is_symbol_char(c) {
            let mut s = String::new();
            while let Some(d) = cur.peek().filter(|d| is_symbol_char(*d)) {
                s.push(d);
                cur.bump();
            }
            Tok::Atom(s)
        } else {
            cur.bump();
            match c {
                '(' => {
                    let functional = !layout
                        && matches!(
                            out.last(),
                            Some(Token {
                                tok: Tok::Atom(_) | Tok::QAtom(_),
                                ..
                            })
                        );
                    if functional {
                        Tok::OpenCall
                    } else {
                        Tok::Open
                    }
                }
                ')' => Tok::Close,
                '[' => Tok::OpenList,
                ']' => Tok::CloseList,
                '{' => Tok::OpenCurly,
                '}' => Tok::CloseCurly,
                ',' => Tok::Comma,
                '|' => Tok::Bar,
                '!' => Tok::Atom("!".into()),
                ';' => Tok::Atom(";".into()),
                other => {
                    return Err(FrontendError::Syntax {
                        line,
                        col,
                        msg: format!("unexpected character `{other}`"),
                    })
                }
            }
        };
        out.push(Token {
            tok,
            line,
            col,
            layout_before: layout,
        });
    }
    Ok(out)
}
