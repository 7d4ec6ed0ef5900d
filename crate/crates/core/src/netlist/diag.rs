use std::fmt;

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl Span {
    pub fn new(line: usize, col: usize) -> Self {
        Span { line, col }
    }
}

/// Validation rules, one per checked invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Lexical,
    Syntax,
    UnknownKind,
    DuplicateName,
    DanglingPort,
    PortDirection,
    DuplicatePort,
    NonpositiveCoupling,
    XiRange,
    EmptyCavity,
    NonFinite,
    CountMismatch,
    UnwiredPort,
}

impl Rule {
    pub const ALL: [Rule; 13] = [
        Rule::Lexical,
        Rule::Syntax,
        Rule::UnknownKind,
        Rule::DuplicateName,
        Rule::DanglingPort,
        Rule::PortDirection,
        Rule::DuplicatePort,
        Rule::NonpositiveCoupling,
        Rule::XiRange,
        Rule::EmptyCavity,
        Rule::NonFinite,
        Rule::CountMismatch,
        Rule::UnwiredPort,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Lexical => "lexical",
            Rule::Syntax => "syntax",
            Rule::UnknownKind => "unknown-kind",
            Rule::DuplicateName => "duplicate-name",
            Rule::DanglingPort => "dangling-port",
            Rule::PortDirection => "port-direction",
            Rule::DuplicatePort => "duplicate-port",
            Rule::NonpositiveCoupling => "nonpositive-coupling",
            Rule::XiRange => "xi-range",
            Rule::EmptyCavity => "empty-cavity",
            Rule::NonFinite => "non-finite",
            Rule::CountMismatch => "count-mismatch",
            Rule::UnwiredPort => "unwired-port",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// What a diagnostic is about, as an index into the spec.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Entity {
    Component(usize),
    Link(usize),
    Network,
    /// Text that never made it into the spec (lexical and syntax errors).
    Text,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub rule: Rule,
    pub entity: Entity,
    pub message: String,
    pub span: Option<Span>,
}

impl Diagnostic {
    pub fn new(rule: Rule, entity: Entity, message: impl Into<String>) -> Self {
        Diagnostic {
            rule,
            entity,
            message: message.into(),
            span: None,
        }
    }

    pub fn at(mut self, span: Span) -> Self {
        self.span = Some(span);
        self
    }

    /// `ERROR <file>:<line>:<col> <rule>: <message>`
    pub fn render(&self, file: &str) -> String {
        let span = self.span.unwrap_or(Span::new(1, 1));
        format!(
            "ERROR {}:{}:{} {}: {}",
            file, span.line, span.col, self.rule, self.message
        )
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.rule, self.message)
    }
}
