use std::fmt;

/// Location-tagged error for the line-oriented text formats (QDIMACS, traces,
/// strategies, OBDD blocks, edge lists).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based line number, 0 when the error is not tied to a line.
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// Input ended before the declared content was read.
    UnexpectedEof,
    Syntax(String),
}

impl ParseError {
    pub fn syntax(line: usize, msg: impl Into<String>) -> Self {
        ParseError {
            line,
            kind: ParseErrorKind::Syntax(msg.into()),
        }
    }

    pub fn eof(line: usize) -> Self {
        ParseError {
            line,
            kind: ParseErrorKind::UnexpectedEof,
        }
    }

    pub fn is_eof(&self) -> bool {
        self.kind == ParseErrorKind::UnexpectedEof
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::UnexpectedEof => write!(f, "line {}: unexpected end of input", self.line),
            ParseErrorKind::Syntax(msg) => write!(f, "line {}: {}", self.line, msg),
        }
    }
}

impl std::error::Error for ParseError {}

/// Numbered, comment-free lines of a text input.
///
/// A final line without a terminating newline is reported as truncated.
pub(crate) struct Lines<'a> {
    inner: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
    truncated_tail: bool,
    total: usize,
    last: usize,
}

impl<'a> Lines<'a> {
    pub(crate) fn new(text: &'a str, strict_newline: bool) -> Self {
        let total = text.lines().count();
        Lines {
            inner: text.lines().enumerate().peekable(),
            truncated_tail: strict_newline && !text.is_empty() && !text.ends_with('\n'),
            total,
            last: 0,
        }
    }

    /// Next line as `(line_number, content)`, skipping blank lines.
    pub(crate) fn next_line(&mut self) -> Result<Option<(usize, &'a str)>, ParseError> {
        for (idx, line) in self.inner.by_ref() {
            let number = idx + 1;
            self.last = number;
            if self.truncated_tail && number == self.total {
                return Err(ParseError::eof(number));
            }
            if line.trim().is_empty() {
                continue;
            }
            return Ok(Some((number, line)));
        }
        Ok(None)
    }

    pub(crate) fn expect_line(&mut self) -> Result<(usize, &'a str), ParseError> {
        let last = self.last;
        self.next_line()?.ok_or_else(|| ParseError::eof(last + 1))
    }
}
