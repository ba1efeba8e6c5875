//! Plain-text form of [`RelationSpec`].
//!
//! ```text
//! componentwise(min,max)            componentwise(all=min,offset=2)
//! cone(a=0.5)                       interval(axis=0,lo=1,hi=2)
//! equals(axis=1,value=3)            ineq(axis=0)
//! band(axis=1,lo=-1e-4,hi=1e-4)     and(<rel>,<rel>,...)
//! inverse(<rel>)                    lex(<constraints>,<objectives>)
//! cmop(ng=2,nh=1,hbounds=[[-1e-4,1e-4]])
//! ```
//!
//! A leading `relation =` is accepted so configuration lines can be passed
//! through unchanged. [`Display`](std::fmt::Display) writes the canonical form,
//! which parses back to an equal value.

use std::fmt;
use std::str::FromStr;

use super::{cmop_relation, Axes, Orientation, RelationSpec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Number(f64),
    Open,
    Close,
    OpenBracket,
    CloseBracket,
    Comma,
    Equals,
}

fn tokenize(input: &str) -> std::result::Result<Vec<Token>, String> {
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '(' => {
                out.push(Token::Open);
                i += 1
            }
            ')' => {
                out.push(Token::Close);
                i += 1
            }
            '[' => {
                out.push(Token::OpenBracket);
                i += 1
            }
            ']' => {
                out.push(Token::CloseBracket);
                i += 1
            }
            ',' => {
                out.push(Token::Comma);
                i += 1
            }
            '=' => {
                out.push(Token::Equals);
                i += 1
            }
            c if c.is_ascii_digit() || c == '-' || c == '+' || c == '.' => {
                let start = i;
                i += 1;
                while i < chars.len() {
                    let d = chars[i];
                    let exp_sign = (d == '-' || d == '+') && matches!(chars[i - 1], 'e' | 'E');
                    if d.is_ascii_digit() || d == '.' || d == 'e' || d == 'E' || exp_sign {
                        i += 1;
                    } else {
                        break;
                    }
                }
                let lit: String = chars[start..i].iter().collect();
                let v = lit
                    .parse::<f64>()
                    .map_err(|_| format!("bad number `{lit}`"))?;
                out.push(Token::Number(v));
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(format!("unexpected character `{other}`")),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
enum Value {
    Num(f64),
    Word(String),
    List(Vec<Value>),
}

#[derive(Debug)]
enum Arg {
    Rel(RelationSpec),
    Word(String),
    KeyVal(String, Value),
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

type PResult<T> = std::result::Result<T, String>;

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, offset: usize) -> Option<&Token> {
        self.tokens.get(self.pos + offset)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Token) -> PResult<()> {
        match self.next() {
            Some(t) if t == want => Ok(()),
            Some(t) => Err(format!("expected {want:?}, found {t:?}")),
            None => Err(format!("expected {want:?}, found end of input")),
        }
    }

    fn relation(&mut self) -> PResult<RelationSpec> {
        let name = match self.next() {
            Some(Token::Ident(s)) => s,
            other => return Err(format!("expected relation name, found {other:?}")),
        };
        self.expect(Token::Open)?;
        let mut args = Vec::new();
        if self.peek() != Some(&Token::Close) {
            loop {
                args.push(self.arg()?);
                match self.next() {
                    Some(Token::Comma) => continue,
                    Some(Token::Close) => break,
                    other => return Err(format!("expected `,` or `)`, found {other:?}")),
                }
            }
        } else {
            self.next();
        }
        build(&name, args)
    }

    fn arg(&mut self) -> PResult<Arg> {
        match (self.peek(), self.peek_at(1)) {
            (Some(Token::Ident(_)), Some(Token::Open)) => Ok(Arg::Rel(self.relation()?)),
            (Some(Token::Ident(_)), Some(Token::Equals)) => {
                let Some(Token::Ident(key)) = self.next() else {
                    unreachable!()
                };
                self.next();
                Ok(Arg::KeyVal(key, self.value()?))
            }
            (Some(Token::Ident(_)), _) => {
                let Some(Token::Ident(w)) = self.next() else {
                    unreachable!()
                };
                Ok(Arg::Word(w))
            }
            (None, _) => Err("unexpected end of input".into()),
            (Some(other), _) => Err(format!("unexpected argument {other:?}")),
        }
    }

    fn value(&mut self) -> PResult<Value> {
        match self.next() {
            Some(Token::Number(v)) => Ok(Value::Num(v)),
            Some(Token::Ident(w)) => Ok(Value::Word(w)),
            Some(Token::OpenBracket) => {
                let mut items = Vec::new();
                if self.peek() == Some(&Token::CloseBracket) {
                    self.next();
                    return Ok(Value::List(items));
                }
                loop {
                    items.push(self.value()?);
                    match self.next() {
                        Some(Token::Comma) => continue,
                        Some(Token::CloseBracket) => break,
                        other => return Err(format!("expected `,` or `]`, found {other:?}")),
                    }
                }
                Ok(Value::List(items))
            }
            other => Err(format!("expected value, found {other:?}")),
        }
    }
}

fn orientation(word: &str) -> PResult<Orientation> {
    match word {
        "min" => Ok(Orientation::Min),
        "max" => Ok(Orientation::Max),
        other => Err(format!("unknown orientation `{other}`")),
    }
}

struct Keys {
    pairs: Vec<(String, Value)>,
}

impl Keys {
    fn num(&self, key: &str) -> PResult<Option<f64>> {
        match self.pairs.iter().find(|(k, _)| k == key) {
            None => Ok(None),
            Some((_, Value::Num(v))) => Ok(Some(*v)),
            Some((_, v)) => Err(format!("`{key}` must be a number, got {v:?}")),
        }
    }

    fn req_num(&self, key: &str) -> PResult<f64> {
        self.num(key)?.ok_or_else(|| format!("missing `{key}`"))
    }

    fn index(&self, key: &str) -> PResult<Option<usize>> {
        match self.num(key)? {
            None => Ok(None),
            Some(v) if v >= 0.0 && v.fract() == 0.0 => Ok(Some(v as usize)),
            Some(v) => Err(format!("`{key}` must be a non-negative integer, got {v}")),
        }
    }

    fn req_index(&self, key: &str) -> PResult<usize> {
        self.index(key)?.ok_or_else(|| format!("missing `{key}`"))
    }

    fn word(&self, key: &str) -> PResult<Option<&str>> {
        match self.pairs.iter().find(|(k, _)| k == key) {
            None => Ok(None),
            Some((_, Value::Word(w))) => Ok(Some(w)),
            Some((_, v)) => Err(format!("`{key}` must be a word, got {v:?}")),
        }
    }

    fn list(&self, key: &str) -> Option<&Vec<Value>> {
        self.pairs.iter().find_map(|(k, v)| match v {
            Value::List(l) if k == key => Some(l),
            _ => None,
        })
    }
}

fn build(name: &str, args: Vec<Arg>) -> PResult<RelationSpec> {
    let mut rels = Vec::new();
    let mut words = Vec::new();
    let mut pairs = Vec::new();
    for a in args {
        match a {
            Arg::Rel(r) => rels.push(r),
            Arg::Word(w) => words.push(w),
            Arg::KeyVal(k, v) => pairs.push((k, v)),
        }
    }
    let keys = Keys { pairs };
    let no_rels = |rels: &[RelationSpec]| {
        if rels.is_empty() {
            Ok(())
        } else {
            Err(format!("`{name}` takes no nested relations"))
        }
    };
    let rel = match name {
        "componentwise" => {
            no_rels(&rels)?;
            let offset = keys.index("offset")?.unwrap_or(0);
            let axes = match keys.word("all")? {
                Some(w) => {
                    if !words.is_empty() {
                        return Err("`all=` cannot be combined with per-axis orientations".into());
                    }
                    Axes::All(orientation(w)?)
                }
                None => Axes::Each(
                    words
                        .iter()
                        .map(|w| orientation(w))
                        .collect::<PResult<Vec<_>>>()?,
                ),
            };
            RelationSpec::Componentwise { offset, axes }
        }
        "cone" => {
            no_rels(&rels)?;
            RelationSpec::Cone {
                a: keys.req_num("a")?,
            }
        }
        "interval" => RelationSpec::IntervalQuery {
            axis: keys.req_index("axis")?,
            lo: keys.req_num("lo")?,
            hi: keys.req_num("hi")?,
        },
        "equals" => RelationSpec::EqualityQuery {
            axis: keys.req_index("axis")?,
            value: keys.req_num("value")?,
        },
        "ineq" => RelationSpec::Inequality {
            axis: keys.req_index("axis")?,
        },
        "band" => RelationSpec::Band {
            axis: keys.req_index("axis")?,
            lo: keys.req_num("lo")?,
            hi: keys.req_num("hi")?,
        },
        "and" => RelationSpec::Conjunction(rels),
        "inverse" => {
            let mut rels = rels;
            if rels.len() != 1 {
                return Err("`inverse` takes exactly one relation".into());
            }
            RelationSpec::Inverse(Box::new(rels.remove(0)))
        }
        "lex" => {
            let mut rels = rels;
            if rels.len() != 2 {
                return Err("`lex` takes a constraint relation and an objective relation".into());
            }
            let objectives = rels.remove(1);
            let constraints = rels.remove(0);
            RelationSpec::Lexicographic {
                constraints: Box::new(constraints),
                objectives: Box::new(objectives),
            }
        }
        "cmop" => {
            let ng = keys.index("ng")?.unwrap_or(0);
            let nh = keys.index("nh")?.unwrap_or(0);
            let mut bounds = Vec::new();
            if let Some(list) = keys.list("hbounds") {
                for item in list {
                    match item {
                        Value::List(pair) => match pair.as_slice() {
                            [Value::Num(a), Value::Num(b)] => bounds.push([*a, *b]),
                            _ => return Err("each hbounds entry must be [lo,hi]".into()),
                        },
                        _ => return Err("each hbounds entry must be [lo,hi]".into()),
                    }
                }
            }
            cmop_relation(ng, nh, &bounds).map_err(|e| e.to_string())?
        }
        other => return Err(format!("unknown relation `{other}`")),
    };
    rel.validate().map_err(|e| e.to_string())?;
    Ok(rel)
}

impl RelationSpec {
    /// Parses the plain-text form.
    pub fn parse(input: &str) -> Result<Self> {
        let err = |reason: String| Error::Parse {
            input: input.to_string(),
            reason,
        };
        let mut body = input.trim();
        if let Some(rest) = body.strip_prefix("relation") {
            if let Some(rest) = rest.trim_start().strip_prefix('=') {
                body = rest;
            }
        }
        let tokens = tokenize(body).map_err(err)?;
        let mut p = Parser { tokens, pos: 0 };
        let rel = p.relation().map_err(err)?;
        if p.pos != p.tokens.len() {
            return Err(err("trailing input".into()));
        }
        Ok(rel)
    }
}

impl FromStr for RelationSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RelationSpec::parse(s)
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Min => "min",
            Orientation::Max => "max",
        })
    }
}

impl fmt::Display for RelationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelationSpec::Componentwise { offset, axes } => {
                f.write_str("componentwise(")?;
                match axes {
                    Axes::Each(os) => {
                        let parts: Vec<String> = os.iter().map(|o| o.to_string()).collect();
                        f.write_str(&parts.join(","))?;
                    }
                    Axes::All(o) => write!(f, "all={o}")?,
                }
                if *offset > 0 {
                    write!(f, ",offset={offset}")?;
                }
                f.write_str(")")
            }
            RelationSpec::Cone { a } => write!(f, "cone(a={a:?})"),
            RelationSpec::IntervalQuery { axis, lo, hi } => {
                write!(f, "interval(axis={axis},lo={lo:?},hi={hi:?})")
            }
            RelationSpec::EqualityQuery { axis, value } => {
                write!(f, "equals(axis={axis},value={value:?})")
            }
            RelationSpec::Inequality { axis } => write!(f, "ineq(axis={axis})"),
            RelationSpec::Band { axis, lo, hi } => write!(f, "band(axis={axis},lo={lo:?},hi={hi:?})"),
            RelationSpec::Conjunction(parts) => {
                f.write_str("and(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
            RelationSpec::Inverse(inner) => write!(f, "inverse({inner})"),
            RelationSpec::Lexicographic {
                constraints,
                objectives,
            } => write!(f, "lex({constraints},{objectives})"),
        }
    }
}
