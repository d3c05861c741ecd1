//! Concrete syntax for class declarations.
//!
//! ```text
//! unit      := classDecl*
//! classDecl := "class" IDENT ["extends" IDENT ("," IDENT)*] "{" member* "}"
//! member    := IDENT IDENT ("," IDENT)* ";"
//!            | IDENT IDENT "(" [IDENT IDENT ("," IDENT IDENT)*] ")" (";" | block)
//! ```
//!
//! Method blocks are skipped by brace matching. `//` and `/* */` comments are
//! trivia everywhere.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Write as _;

use crate::sig::{is_identifier, ClassName, ClassSignature, FieldSignature, Label, MethodSignature};

/// Byte range into the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ident {
    pub text: String,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Param {
    pub type_name: Ident,
    pub name: Ident,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MemberDecl {
    /// `T a, b, c;`
    Fields {
        type_name: Ident,
        names: Vec<Ident>,
        span: Span,
    },
    Method {
        return_type: Ident,
        name: Ident,
        params: Vec<Param>,
        span: Span,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDecl {
    pub name: Ident,
    pub supers: Vec<Ident>,
    pub members: Vec<MemberDecl>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SourceUnit {
    pub decls: Vec<ClassDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    Syntax {
        pos: usize,
        expected: String,
        found: String,
    },
    /// `pos` is the opening brace that is never closed.
    UnbalancedBrace { pos: usize },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { pos, .. } | ParseError::UnbalancedBrace { pos } => *pos,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax {
                expected, found, ..
            } => write!(f, "syntax error: expected {expected}, found {found}"),
            ParseError::UnbalancedBrace { .. } => f.write_str("unbalanced brace: `{` is never closed"),
        }
    }
}

/// 1-based line and column (in characters) of a byte offset.
pub fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let line_start = before.rfind('\n').map_or(0, |i| i + 1);
    let col = before[line_start..].chars().count() + 1;
    (line, col)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Semi,
    Other(char),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::LBrace => "`{`".to_string(),
            Tok::RBrace => "`}`".to_string(),
            Tok::LParen => "`(`".to_string(),
            Tok::RParen => "`)`".to_string(),
            Tok::Comma => "`,`".to_string(),
            Tok::Semi => "`;`".to_string(),
            Tok::Other(c) => format!("`{c}`"),
            Tok::Eof => "end of input".to_string(),
        }
    }
}

const KEYWORDS: [&str; 2] = ["class", "extends"];

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_trivia(&mut self) -> Result<(), ParseError> {
        loop {
            let rest = self.rest();
            if let Some(c) = rest.chars().next().filter(|c| c.is_whitespace()) {
                self.pos += c.len_utf8();
            } else if rest.starts_with("//") {
                self.pos += rest.find('\n').unwrap_or(rest.len());
            } else if rest.starts_with("/*") {
                match rest[2..].find("*/") {
                    Some(i) => self.pos += i + 4,
                    None => {
                        return Err(ParseError::Syntax {
                            pos: self.pos,
                            expected: "`*/` closing the comment".to_string(),
                            found: "end of input".to_string(),
                        })
                    }
                }
            } else {
                return Ok(());
            }
        }
    }

    /// Next token and its span, without consuming it.
    fn peek(&mut self) -> Result<(Tok, Span), ParseError> {
        self.skip_trivia()?;
        let start = self.pos;
        let Some(c) = self.peek_char() else {
            return Ok((Tok::Eof, Span { start, end: start }));
        };
        let (tok, len) = match c {
            '{' => (Tok::LBrace, 1),
            '}' => (Tok::RBrace, 1),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            ',' => (Tok::Comma, 1),
            ';' => (Tok::Semi, 1),
            c if c.is_ascii_alphabetic() || c == '_' => {
                let len = self
                    .rest()
                    .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
                    .unwrap_or(self.rest().len());
                (Tok::Ident(self.rest()[..len].to_string()), len)
            }
            other => (Tok::Other(other), other.len_utf8()),
        };
        Ok((tok, Span { start, end: start + len }))
    }

    fn bump(&mut self) -> Result<(Tok, Span), ParseError> {
        let (tok, span) = self.peek()?;
        self.pos = span.end;
        Ok((tok, span))
    }

    fn error<T>(&self, span: Span, tok: &Tok, expected: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: span.start,
            expected: expected.to_string(),
            found: tok.describe(),
        })
    }

    fn expect(&mut self, want: Tok, expected: &str) -> Result<Span, ParseError> {
        let (tok, span) = self.peek()?;
        if tok == want {
            self.pos = span.end;
            Ok(span)
        } else {
            self.error(span, &tok, expected)
        }
    }

    fn ident(&mut self) -> Result<Ident, ParseError> {
        let (tok, span) = self.peek()?;
        match tok {
            Tok::Ident(text) if !KEYWORDS.contains(&text.as_str()) => {
                self.pos = span.end;
                Ok(Ident { text, span })
            }
            other => self.error(span, &other, "identifier"),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<Option<Span>, ParseError> {
        let (tok, span) = self.peek()?;
        match tok {
            Tok::Ident(text) if text == kw => {
                self.pos = span.end;
                Ok(Some(span))
            }
            _ => Ok(None),
        }
    }

    fn unit(&mut self) -> Result<SourceUnit, ParseError> {
        let mut decls = Vec::new();
        loop {
            let (tok, span) = self.peek()?;
            match tok {
                Tok::Eof => return Ok(SourceUnit { decls }),
                Tok::Ident(ref t) if t == "class" => decls.push(self.class_decl()?),
                other => return self.error(span, &other, "`class`"),
            }
        }
    }

    fn class_decl(&mut self) -> Result<ClassDecl, ParseError> {
        let start = self.keyword("class")?.expect("caller saw `class`").start;
        let name = self.ident()?;
        let mut supers = Vec::new();
        if self.keyword("extends")?.is_some() {
            supers.push(self.ident()?);
            while self.peek()?.0 == Tok::Comma {
                self.bump()?;
                supers.push(self.ident()?);
            }
        }
        let open = self.expect(Tok::LBrace, "`{` or `extends`")?;
        let mut members = Vec::new();
        loop {
            let (tok, span) = self.peek()?;
            match tok {
                Tok::RBrace => {
                    self.pos = span.end;
                    return Ok(ClassDecl {
                        name,
                        supers,
                        members,
                        span: Span { start, end: span.end },
                    });
                }
                Tok::Eof => return Err(ParseError::UnbalancedBrace { pos: open.start }),
                _ => members.push(self.member()?),
            }
        }
    }

    fn member(&mut self) -> Result<MemberDecl, ParseError> {
        let type_name = self.ident()?;
        let name = self.ident()?;
        let (tok, span) = self.peek()?;
        match tok {
            Tok::LParen => {
                self.pos = span.end;
                let mut params = Vec::new();
                if self.peek()?.0 != Tok::RParen {
                    loop {
                        let type_name = self.ident()?;
                        let name = self.ident()?;
                        params.push(Param { type_name, name });
                        if self.peek()?.0 == Tok::Comma {
                            self.bump()?;
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RParen, "`,` or `)`")?;
                let (tok, span) = self.peek()?;
                let end = match tok {
                    Tok::Semi => {
                        self.pos = span.end;
                        span.end
                    }
                    Tok::LBrace => self.skip_block(span.start)?,
                    other => return self.error(span, &other, "`;` or a method body"),
                };
                let start = type_name.span.start;
                Ok(MemberDecl::Method {
                    return_type: type_name,
                    name,
                    params,
                    span: Span { start, end },
                })
            }
            Tok::Comma | Tok::Semi => {
                let mut names = alloc::vec![name];
                while self.peek()?.0 == Tok::Comma {
                    self.bump()?;
                    names.push(self.ident()?);
                }
                let end = self.expect(Tok::Semi, "`,` or `;`")?.end;
                let start = type_name.span.start;
                Ok(MemberDecl::Fields {
                    type_name,
                    names,
                    span: Span { start, end },
                })
            }
            other => self.error(span, &other, "`(`, `,` or `;`"),
        }
    }

    /// Skips a balanced `{ ... }` starting at `open`; returns the end offset.
    /// Comments and string/char literals inside are honoured.
    fn skip_block(&mut self, open: usize) -> Result<usize, ParseError> {
        self.pos = open + 1;
        let mut depth = 1usize;
        loop {
            let rest = self.rest();
            let Some(c) = rest.chars().next() else {
                return Err(ParseError::UnbalancedBrace { pos: open });
            };
            if rest.starts_with("//") || rest.starts_with("/*") {
                self.skip_trivia()?;
                continue;
            }
            match c {
                '{' => depth += 1,
                '}' => {
                    depth -= 1;
                    if depth == 0 {
                        self.pos += 1;
                        return Ok(self.pos);
                    }
                }
                '"' | '\'' => {
                    self.skip_literal(c);
                    continue;
                }
                _ => {}
            }
            self.pos += c.len_utf8();
        }
    }

    fn skip_literal(&mut self, quote: char) {
        self.pos += 1;
        let mut escaped = false;
        while let Some(c) = self.peek_char() {
            self.pos += c.len_utf8();
            if escaped {
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == quote || c == '\n' {
                return;
            }
        }
    }
}

/// Parses a compilation unit. Stops at the first error.
pub fn parse(text: &str) -> Result<SourceUnit, ParseError> {
    Parser { src: text, pos: 0 }.unit()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LowerError {
    DuplicateClass { name: ClassName, span: Span },
    DuplicateSuper { class: ClassName, name: ClassName, span: Span },
    DuplicateMember { class: ClassName, name: Label, span: Span },
}

impl LowerError {
    pub fn span(&self) -> Span {
        match self {
            LowerError::DuplicateClass { span, .. }
            | LowerError::DuplicateSuper { span, .. }
            | LowerError::DuplicateMember { span, .. } => *span,
        }
    }
}

impl fmt::Display for LowerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LowerError::DuplicateClass { name, .. } => write!(f, "class `{name}` is declared twice"),
            LowerError::DuplicateSuper { class, name, .. } => {
                write!(f, "class `{class}` extends `{name}` twice")
            }
            LowerError::DuplicateMember { class, name, .. } => {
                write!(f, "class `{class}` declares member `{name}` twice")
            }
        }
    }
}

fn class_name(id: &Ident) -> ClassName {
    ClassName::new(&id.text).expect("lexer only produces identifiers")
}

fn label(id: &Ident) -> Label {
    Label::new(&id.text).expect("lexer only produces identifiers")
}

/// Turns declarations into class signatures, one per declaration, keeping
/// member order. Method bodies and parameter names are dropped.
pub fn lower(unit: &SourceUnit) -> Result<Vec<ClassSignature>, Vec<LowerError>> {
    let mut errors = Vec::new();
    let mut sigs = Vec::new();
    let mut class_names = BTreeSet::new();
    for decl in &unit.decls {
        let name = class_name(&decl.name);
        if !class_names.insert(name.clone()) {
            errors.push(LowerError::DuplicateClass {
                name: name.clone(),
                span: decl.name.span,
            });
        }
        let mut supers = Vec::new();
        for s in &decl.supers {
            let sup = class_name(s);
            if supers.contains(&sup) {
                errors.push(LowerError::DuplicateSuper {
                    class: name.clone(),
                    name: sup,
                    span: s.span,
                });
            } else {
                supers.push(sup);
            }
        }
        let mut fields = Vec::new();
        let mut methods = Vec::new();
        let mut field_names = BTreeSet::new();
        let mut method_names = BTreeSet::new();
        for member in &decl.members {
            match member {
                MemberDecl::Fields {
                    type_name, names, ..
                } => {
                    for n in names {
                        let l = label(n);
                        if !field_names.insert(l.clone()) {
                            errors.push(LowerError::DuplicateMember {
                                class: name.clone(),
                                name: l,
                                span: n.span,
                            });
                            continue;
                        }
                        fields.push(FieldSignature::new(l, class_name(type_name)));
                    }
                }
                MemberDecl::Method {
                    return_type,
                    name: mname,
                    params,
                    ..
                } => {
                    let l = label(mname);
                    if !method_names.insert(l.clone()) {
                        errors.push(LowerError::DuplicateMember {
                            class: name.clone(),
                            name: l,
                            span: mname.span,
                        });
                        continue;
                    }
                    methods.push(MethodSignature::new(
                        l,
                        params.iter().map(|p| class_name(&p.type_name)).collect(),
                        class_name(return_type),
                    ));
                }
            }
        }
        sigs.push(ClassSignature::new(name, supers, fields, methods));
    }
    if errors.is_empty() {
        Ok(sigs)
    } else {
        Err(errors)
    }
}

fn param_name(type_name: &ClassName, index: usize, count: usize) -> String {
    let initial = type_name
        .as_str()
        .chars()
        .next()
        .map(|c| c.to_ascii_lowercase())
        .unwrap_or('p');
    let mut name = String::new();
    name.push(initial);
    if count > 1 {
        let _ = write!(name, "{}", index + 1);
    }
    // a one-letter name can never be a keyword, but keep the check honest
    debug_assert!(is_identifier(&name));
    name
}

/// Renders signatures as declarations, in the given order. Each field gets
/// its own line; parameters are named after their type's initial.
pub fn pretty_print(sigs: &[ClassSignature]) -> String {
    let mut out = String::new();
    for (i, sig) in sigs.iter().enumerate() {
        if i > 0 {
            out.push_str("\n\n");
        }
        let _ = write!(out, "class {}", sig.name());
        for (j, s) in sig.supers().iter().enumerate() {
            out.push_str(if j == 0 { " extends " } else { ", " });
            let _ = write!(out, "{s}");
        }
        out.push_str(" {\n");
        for f in sig.fields() {
            let _ = writeln!(out, "  {} {};", f.type_name, f.name);
        }
        for m in sig.methods() {
            let _ = write!(out, "  {} {}(", m.return_type, m.name);
            for (k, p) in m.param_types.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                let _ = write!(out, "{} {}", p, param_name(p, k, m.param_types.len()));
            }
            out.push_str(");\n");
        }
        out.push('}');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use alloc::vec;

    #[test]
    fn pair_listing_parses() {
        let unit = parse(fixtures::PAIR_SOURCE).unwrap();
        let names: Vec<&str> = unit.decls.iter().map(|d| d.name.text.as_str()).collect();
        assert_eq!(names, vec!["Object", "Boolean", "Pair"]);
        let pair = &unit.decls[2];
        assert_eq!(pair.supers[0].text, "Object");
        match &pair.members[0] {
            MemberDecl::Fields { type_name, names, .. } => {
                assert_eq!(type_name.text, "Object");
                assert_eq!(names.len(), 2);
                assert_eq!(names[1].text, "second");
            }
            other => panic!("unexpected member {other:?}"),
        }
        let sigs = lower(&unit).unwrap();
        assert_eq!(sigs, vec![fixtures::obj_sig(), fixtures::bool_sig(), fixtures::pair_sig()]);
    }

    #[test]
    fn empty_input() {
        assert_eq!(parse("").unwrap(), SourceUnit::default());
        assert_eq!(parse("  // nothing\n/* at all */").unwrap().decls.len(), 0);
    }

    #[test]
    fn missing_superclass_name() {
        let err = parse("class A extends {").unwrap_err();
        assert_eq!(
            err,
            ParseError::Syntax {
                pos: 16,
                expected: "identifier".into(),
                found: "`{`".into()
            }
        );
        assert_eq!(line_col("class A extends {", err.position()), (1, 17));
    }

    #[test]
    fn unclosed_class_and_body() {
        assert_eq!(parse("class A {\n  A x;\n"), Err(ParseError::UnbalancedBrace { pos: 8 }));
        assert_eq!(
            parse("class A { A m() { { } }"),
            Err(ParseError::UnbalancedBrace { pos: 8 })
        );
        assert_eq!(
            parse("class A { A m() { if (x) { y(); }"),
            Err(ParseError::UnbalancedBrace { pos: 16 })
        );
    }

    #[test]
    fn bodies_with_braces_in_literals_and_comments() {
        let src = "class A { A m() { s = \"}\"; c = '{'; // }\n /* } */ } }";
        let unit = parse(src).unwrap();
        assert_eq!(unit.decls[0].members.len(), 1);
    }

    #[test]
    fn keywords_are_not_identifiers() {
        assert!(parse("class class {}").is_err());
        assert!(parse("class A { extends x; }").is_err());
    }

    #[test]
    fn multiple_inheritance_and_params() {
        let unit = parse("class D extends B, C { R m(B b, C c); }").unwrap();
        let sigs = lower(&unit).unwrap();
        assert_eq!(sigs[0].supers().len(), 2);
        assert_eq!(sigs[0].methods()[0].param_types.len(), 2);
    }

    #[test]
    fn lowering_empty_class() {
        let sigs = lower(&parse("class C {}").unwrap()).unwrap();
        assert_eq!(
            sigs,
            vec![ClassSignature::new(ClassName::new("C").unwrap(), vec![], vec![], vec![])]
        );
    }

    #[test]
    fn lowering_reports_duplicates() {
        let errs = lower(&parse("class C { A x; A x; }").unwrap()).unwrap_err();
        assert_eq!(errs.len(), 1);
        assert!(matches!(
            &errs[0],
            LowerError::DuplicateMember { class, name, .. }
                if class.as_str() == "C" && name.as_str() == "x"
        ));
        let errs = lower(&parse("class C {} class C {}").unwrap()).unwrap_err();
        assert!(matches!(&errs[0], LowerError::DuplicateClass { .. }));
        let errs = lower(&parse("class C { A m(); B m(A a); }").unwrap()).unwrap_err();
        assert_eq!(errs.len(), 1);
        // fields and methods live in separate namespaces
        assert!(lower(&parse("class C { A m; A m(); }").unwrap()).is_ok());
    }

    #[test]
    fn pretty_print_object_sig() {
        assert_eq!(
            pretty_print(&[fixtures::obj_sig()]),
            "class Object {\n  Boolean equals(Object o);\n}"
        );
        assert_eq!(pretty_print(&[]), "");
    }

    #[test]
    fn pair_listing_round_trip() {
        let sigs = vec![fixtures::obj_sig(), fixtures::bool_sig(), fixtures::pair_sig()];
        let text = pretty_print(&sigs);
        assert_eq!(lower(&parse(&text).unwrap()).unwrap(), sigs);
    }

    #[test]
    fn line_col_counts_chars() {
        let text = "ab\n⊥x";
        assert_eq!(line_col(text, 0), (1, 1));
        assert_eq!(line_col(text, 3), (2, 1));
        assert_eq!(line_col(text, 3 + '⊥'.len_utf8()), (2, 2));
    }
}
