use num_complex::Complex64;

use super::diag::{Diagnostic, Entity, Rule, Span};
use super::lexer::{lex_line, Tok, Token};
use super::{
    validate, BeamsplitterParams, CavityParams, ComponentKind, ComponentSpec, LinkSpec,
    NetworkSpec, PortRef,
};

/// Where each component and link was declared.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SourceMap {
    pub components: Vec<Span>,
    pub links: Vec<Span>,
}

impl SourceMap {
    pub fn locate(&self, entity: Entity) -> Span {
        let fallback = || self.components.first().copied().unwrap_or(Span::new(1, 1));
        match entity {
            Entity::Component(i) => self.components.get(i).copied().unwrap_or_else(fallback),
            Entity::Link(i) => self.links.get(i).copied().unwrap_or_else(fallback),
            Entity::Network | Entity::Text => fallback(),
        }
    }
}

/// Parses and validates a netlist. On failure every diagnostic carries a span.
pub fn parse_netlist(text: &str) -> Result<NetworkSpec, Vec<Diagnostic>> {
    let (spec, map) = parse_unchecked(text)?;
    let mut diags = validate(&spec);
    if diags.is_empty() {
        return Ok(spec);
    }
    for d in &mut diags {
        if d.span.is_none() {
            d.span = Some(map.locate(d.entity));
        }
    }
    diags.sort_by_key(|d| d.span);
    Err(diags)
}

/// Parses the concrete syntax only; semantic rules are left to [`validate`].
pub fn parse_unchecked(text: &str) -> Result<(NetworkSpec, SourceMap), Vec<Diagnostic>> {
    let mut spec = NetworkSpec::default();
    let mut map = SourceMap::default();
    let mut diags = Vec::new();

    for (idx, raw) in text.split('\n').enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let tokens = match lex_line(line, idx + 1) {
            Ok(t) => t,
            Err(d) => {
                diags.push(d);
                continue;
            }
        };
        if tokens.is_empty() {
            continue;
        }
        let span = tokens[0].span;
        let mut p = LineParser {
            toks: &tokens,
            pos: 0,
            line: idx + 1,
            end_col: line.chars().count() + 1,
        };
        match p.declaration() {
            Ok(Decl::Component(c)) => {
                spec.components.push(c);
                map.components.push(span);
            }
            Ok(Decl::Link(l)) => {
                spec.links.push(l);
                map.links.push(span);
            }
            Err(d) => diags.push(d),
        }
    }

    if diags.is_empty() {
        Ok((spec, map))
    } else {
        Err(diags)
    }
}

enum Decl {
    Component(ComponentSpec),
    Link(LinkSpec),
}

struct LineParser<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    end_col: usize,
}

impl LineParser<'_> {
    fn span(&self) -> Span {
        self.toks
            .get(self.pos)
            .map(|t| t.span)
            .unwrap_or(Span::new(self.line, self.end_col))
    }

    fn error(&self, msg: impl Into<String>) -> Diagnostic {
        Diagnostic::new(Rule::Syntax, Entity::Text, msg).at(self.span())
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn next(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.pos).map(|t| &t.tok);
        self.pos += 1;
        t
    }

    fn found(&self) -> String {
        self.peek()
            .map(Tok::describe)
            .unwrap_or_else(|| "end of line".into())
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), Diagnostic> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}, found {}", self.found())))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, Diagnostic> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error(format!("expected {what}, found {}", self.found()))),
        }
    }

    fn number(&mut self, what: &str) -> Result<f64, Diagnostic> {
        match self.peek() {
            Some(Tok::Number(x)) => {
                let x = *x;
                self.pos += 1;
                Ok(x)
            }
            _ => Err(self.error(format!("expected {what}, found {}", self.found()))),
        }
    }

    fn end(&self) -> Result<(), Diagnostic> {
        if self.pos < self.toks.len() {
            Err(self.error(format!("unexpected {}", self.found())))
        } else {
            Ok(())
        }
    }

    fn declaration(&mut self) -> Result<Decl, Diagnostic> {
        let keyword_span = self.span();
        let keyword = self.ident("declaration keyword")?;
        match keyword.as_str() {
            "source" | "sink" => {
                let name = self.ident("component name")?;
                self.end()?;
                Ok(Decl::Component(if keyword == "source" {
                    ComponentSpec::source(name)
                } else {
                    ComponentSpec::sink(name)
                }))
            }
            "cavity" => self.cavity().map(Decl::Component),
            "beamsplitter" => self.beamsplitter().map(Decl::Component),
            "link" => self.link().map(Decl::Link),
            other => Err(Diagnostic::new(
                Rule::UnknownKind,
                Entity::Text,
                format!("unknown component kind `{other}`"),
            )
            .at(keyword_span)),
        }
    }

    /// `name=` prefix of an attribute; `None` at end of line.
    fn attribute(&mut self) -> Result<Option<(String, Span)>, Diagnostic> {
        if self.peek().is_none() {
            return Ok(None);
        }
        let span = self.span();
        let key = self.ident("attribute name")?;
        self.expect(Tok::Eq, "`=`")?;
        Ok(Some((key, span)))
    }

    fn number_list(&mut self) -> Result<Vec<f64>, Diagnostic> {
        self.expect(Tok::LBracket, "`[`")?;
        let mut out = Vec::new();
        if self.peek() == Some(&Tok::RBracket) {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(self.number("coupling value")?);
            match self.next() {
                Some(Tok::Comma) => continue,
                Some(Tok::RBracket) => return Ok(out),
                _ => {
                    self.pos -= 1;
                    return Err(self.error(format!("expected `,` or `]`, found {}", self.found())));
                }
            }
        }
    }

    fn complex(&mut self) -> Result<Complex64, Diagnostic> {
        match self.peek().cloned() {
            Some(Tok::Imag(im)) => {
                self.pos += 1;
                Ok(Complex64::new(0.0, im))
            }
            Some(Tok::Number(re)) => {
                self.pos += 1;
                if let Some(Tok::Imag(im)) = self.peek().cloned() {
                    self.pos += 1;
                    Ok(Complex64::new(re, im))
                } else {
                    Ok(Complex64::new(re, 0.0))
                }
            }
            _ => Err(self.error(format!("expected complex number, found {}", self.found()))),
        }
    }

    fn duplicate(key: &str, span: Span) -> Diagnostic {
        Diagnostic::new(
            Rule::Syntax,
            Entity::Text,
            format!("duplicate attribute `{key}`"),
        )
        .at(span)
    }

    fn cavity(&mut self) -> Result<ComponentSpec, Diagnostic> {
        let name = self.ident("component name")?;
        let mut kappas = None;
        let mut detuning = None;
        let mut chi = None;
        while let Some((key, span)) = self.attribute()? {
            match key.as_str() {
                "kappa" if kappas.is_none() => kappas = Some(self.number_list()?),
                "detuning" if detuning.is_none() => detuning = Some(self.number("detuning")?),
                "chi" if chi.is_none() => chi = Some(self.complex()?),
                "kappa" | "detuning" | "chi" => return Err(Self::duplicate(&key, span)),
                _ => {
                    return Err(Diagnostic::new(
                        Rule::Syntax,
                        Entity::Text,
                        format!("unknown cavity attribute `{key}`"),
                    )
                    .at(span))
                }
            }
        }
        let kappas = kappas.ok_or_else(|| self.error("cavity requires `kappa=[...]`"))?;
        Ok(ComponentSpec {
            name,
            kind: ComponentKind::Cavity(CavityParams {
                kappas,
                detuning: detuning.unwrap_or(0.0),
                chi: chi.unwrap_or(Complex64::new(0.0, 0.0)),
            }),
        })
    }

    fn beamsplitter(&mut self) -> Result<ComponentSpec, Diagnostic> {
        let name = self.ident("component name")?;
        let mut params = None;
        while let Some((key, span)) = self.attribute()? {
            if params.is_some() && (key == "xi" || key == "kappa") {
                return Err(Diagnostic::new(
                    Rule::Syntax,
                    Entity::Text,
                    "beamsplitter takes exactly one of `xi` or `kappa`",
                )
                .at(span));
            }
            match key.as_str() {
                "xi" => params = Some(BeamsplitterParams::Xi(self.number("xi")?)),
                "kappa" => {
                    let list = self.number_list()?;
                    if list.len() != 2 {
                        return Err(Diagnostic::new(
                            Rule::Syntax,
                            Entity::Text,
                            format!("beamsplitter kappa needs 2 values, got {}", list.len()),
                        )
                        .at(span));
                    }
                    params = Some(BeamsplitterParams::Couplings {
                        tilde: list[0],
                        bar: list[1],
                    });
                }
                _ => {
                    return Err(Diagnostic::new(
                        Rule::Syntax,
                        Entity::Text,
                        format!("unknown beamsplitter attribute `{key}`"),
                    )
                    .at(span))
                }
            }
        }
        let params =
            params.ok_or_else(|| self.error("beamsplitter requires `xi=` or `kappa=[k1, k2]`"))?;
        Ok(ComponentSpec::beamsplitter(name, params))
    }

    fn port(&mut self) -> Result<PortRef, Diagnostic> {
        let start = self.span();
        let mut parts = vec![self.ident("port reference")?];
        while self.peek() == Some(&Tok::Dot) {
            self.pos += 1;
            parts.push(self.ident("port path segment")?);
        }
        let text = parts.join(".");
        PortRef::parse(&text).ok_or_else(|| {
            Diagnostic::new(
                Rule::Syntax,
                Entity::Text,
                format!("malformed port `{text}`; expected `name.in|out` or `name.port.in|out`"),
            )
            .at(start)
        })
    }

    fn link(&mut self) -> Result<LinkSpec, Diagnostic> {
        let from = self.port()?;
        self.expect(Tok::Arrow, "`->`")?;
        let to = self.port()?;
        let mut phase = None;
        while let Some((key, span)) = self.attribute()? {
            match key.as_str() {
                "phase" if phase.is_none() => phase = Some(self.number("phase")?),
                "phase" => return Err(Self::duplicate(&key, span)),
                _ => {
                    return Err(Diagnostic::new(
                        Rule::Syntax,
                        Entity::Text,
                        format!("unknown link attribute `{key}`"),
                    )
                    .at(span))
                }
            }
        }
        Ok(LinkSpec {
            from,
            to,
            phase: phase.unwrap_or(0.0),
        })
    }
}
