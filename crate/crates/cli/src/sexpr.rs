//! Canonical S-expression forms of signatures, environments and closures,
//! and the reader for object literals.

use std::fmt::{self, Write};

use noop_core::obj::{FiniteMethod, MethodError, RawObject, Step};
use noop_core::rec::Record;
use noop_core::{ClassName, ClassSignature, Label, SignatureClosure, SignatureEnvironment};

/// `(class Pair (extends Object) (fields (first Object)) (methods (swap () Pair)))`,
/// members in declaration order.
pub fn class_form(sig: &ClassSignature) -> String {
    let mut s = String::new();
    let _ = write!(s, "(class {} (extends", sig.name());
    for n in sig.supers() {
        let _ = write!(s, " {n}");
    }
    s.push_str(") (fields");
    for f in sig.fields() {
        let _ = write!(s, " ({} {})", f.name, f.type_name);
    }
    s.push_str(") (methods");
    for m in sig.methods() {
        let _ = write!(s, " ({} (", m.name);
        for (i, p) in m.param_types.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{p}");
        }
        let _ = write!(s, ") {})", m.return_type);
    }
    s.push_str("))");
    s
}

/// Name-sorted class forms, one per line.
pub fn env_form(env: &SignatureEnvironment) -> String {
    let mut s = String::from("(env");
    for sig in env.signatures() {
        s.push_str("\n  ");
        s.push_str(&class_form(sig));
    }
    s.push(')');
    s
}

pub fn closure_form(sc: &SignatureClosure) -> String {
    let env = env_form(sc.env()).replace("\n  ", "\n    ");
    format!("(closure {}\n  {})", sc.root_name(), env)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReadError {
    Unexpected { pos: usize, expected: &'static str, found: String },
    UnknownClass { pos: usize, name: String },
    BadLabel { pos: usize, text: String },
    Method { pos: usize, err: MethodError },
    Trailing { pos: usize },
}

impl ReadError {
    pub fn position(&self) -> usize {
        match self {
            ReadError::Unexpected { pos, .. }
            | ReadError::UnknownClass { pos, .. }
            | ReadError::BadLabel { pos, .. }
            | ReadError::Method { pos, .. }
            | ReadError::Trailing { pos } => *pos,
        }
    }
}

impl fmt::Display for ReadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReadError::Unexpected { expected, found, .. } => {
                write!(f, "expected {expected}, found {found}")
            }
            ReadError::UnknownClass { name, .. } => {
                write!(f, "class `{name}` is not bound in the environment")
            }
            ReadError::BadLabel { text, .. } => write!(f, "`{text}` is not a label"),
            ReadError::Method { err, .. } => write!(f, "bad step table: {err}"),
            ReadError::Trailing { .. } => f.write_str("unexpected text after the object"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok<'a> {
    Open,
    Close,
    Atom(&'a str),
    End,
}

struct Reader<'a> {
    src: &'a str,
    pos: usize,
    env: &'a SignatureEnvironment,
}

impl<'a> Reader<'a> {
    fn skip_space(&mut self) {
        loop {
            let rest = &self.src[self.pos..];
            let trimmed = rest.trim_start();
            self.pos += rest.len() - trimmed.len();
            if trimmed.starts_with(";") || trimmed.starts_with("//") {
                let line = trimmed.find('\n').map_or(trimmed.len(), |i| i + 1);
                self.pos += line;
            } else {
                return;
            }
        }
    }

    fn peek(&mut self) -> (usize, Tok<'a>) {
        self.skip_space();
        let rest = &self.src[self.pos..];
        let tok = match rest.chars().next() {
            None => Tok::End,
            Some('(') => Tok::Open,
            Some(')') => Tok::Close,
            Some(_) => {
                let end = rest
                    .find(|c: char| c.is_whitespace() || c == '(' || c == ')')
                    .unwrap_or(rest.len());
                Tok::Atom(&rest[..end])
            }
        };
        (self.pos, tok)
    }

    fn next(&mut self) -> (usize, Tok<'a>) {
        let (pos, tok) = self.peek();
        self.pos += match tok {
            Tok::Open | Tok::Close => 1,
            Tok::Atom(a) => a.len(),
            Tok::End => 0,
        };
        (pos, tok)
    }

    fn describe(tok: &Tok<'_>) -> String {
        match tok {
            Tok::Open => "`(`".into(),
            Tok::Close => "`)`".into(),
            Tok::Atom(a) => format!("`{a}`"),
            Tok::End => "end of input".into(),
        }
    }

    fn expect(&mut self, want: Tok<'static>, expected: &'static str) -> Result<(), ReadError> {
        let (pos, tok) = self.next();
        if tok == want {
            Ok(())
        } else {
            Err(ReadError::Unexpected {
                pos,
                expected,
                found: Self::describe(&tok),
            })
        }
    }

    fn keyword(&mut self, kw: &'static str) -> Result<(), ReadError> {
        self.expect(Tok::Open, "`(`")?;
        self.expect(Tok::Atom(kw), kw)
    }

    fn label(&mut self) -> Result<Label, ReadError> {
        match self.next() {
            (pos, Tok::Atom(a)) => Label::new(a).map_err(|_| ReadError::BadLabel {
                pos,
                text: a.to_string(),
            }),
            (pos, tok) => Err(ReadError::Unexpected {
                pos,
                expected: "a label",
                found: Self::describe(&tok),
            }),
        }
    }

    fn object(&mut self) -> Result<RawObject, ReadError> {
        match self.next() {
            (_, Tok::Atom("⊥" | "bot")) => Ok(RawObject::Bottom),
            (_, Tok::Open) => {
                self.expect(Tok::Atom("obj"), "`obj`")?;
                let (pos, tok) = self.next();
                let Tok::Atom(name) = tok else {
                    return Err(ReadError::Unexpected {
                        pos,
                        expected: "a class name",
                        found: Self::describe(&tok),
                    });
                };
                let closure = ClassName::new(name)
                    .ok()
                    .and_then(|n| self.env.closure_of(&n).ok())
                    .ok_or_else(|| ReadError::UnknownClass {
                        pos,
                        name: name.to_string(),
                    })?;
                self.keyword("fields")?;
                let mut fields = Vec::new();
                while self.peek().1 == Tok::Open {
                    self.next();
                    let l = self.label()?;
                    let v = self.object()?;
                    self.expect(Tok::Close, "`)`")?;
                    fields.push((l, v));
                }
                self.expect(Tok::Close, "`)`")?;
                self.keyword("methods")?;
                let mut methods = Vec::new();
                while self.peek().1 == Tok::Open {
                    self.next();
                    let l = self.label()?;
                    let m = self.method()?;
                    self.expect(Tok::Close, "`)`")?;
                    methods.push((l, m));
                }
                self.expect(Tok::Close, "`)`")?;
                self.expect(Tok::Close, "`)`")?;
                let fields: Record<RawObject> = fields.into_iter().collect();
                let methods: Record<FiniteMethod> = methods.into_iter().collect();
                Ok(RawObject::new(closure, fields, methods))
            }
            (pos, tok) => Err(ReadError::Unexpected {
                pos,
                expected: "an object",
                found: Self::describe(&tok),
            }),
        }
    }

    fn method(&mut self) -> Result<FiniteMethod, ReadError> {
        match self.next() {
            (_, Tok::Atom("⊥M" | "botM")) => Ok(FiniteMethod::bottom()),
            (pos, Tok::Open) => {
                self.expect(Tok::Atom("steps"), "`steps`")?;
                let mut steps = Vec::new();
                while self.peek().1 == Tok::Open {
                    self.keyword("step")?;
                    self.keyword("args")?;
                    let mut args = Vec::new();
                    while self.peek().1 != Tok::Close {
                        args.push(self.object()?);
                    }
                    self.next();
                    let result = self.object()?;
                    self.expect(Tok::Close, "`)`")?;
                    steps.push(Step::new(args, result));
                }
                self.expect(Tok::Close, "`)`")?;
                FiniteMethod::from_steps(steps).map_err(|err| ReadError::Method { pos, err })
            }
            (pos, tok) => Err(ReadError::Unexpected {
                pos,
                expected: "a method",
                found: Self::describe(&tok),
            }),
        }
    }
}

/// Reads one object literal. Class names are resolved to their closures in
/// `env`. Lines starting with `;` or `//` are comments.
pub fn read_object(src: &str, env: &SignatureEnvironment) -> Result<RawObject, ReadError> {
    let mut r = Reader { src, pos: 0, env };
    let o = r.object()?;
    match r.peek() {
        (_, Tok::End) => Ok(o),
        (pos, _) => Err(ReadError::Trailing { pos }),
    }
}
