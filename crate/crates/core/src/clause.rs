//! Clauses, the flat tuples a DRS is written as.
//!
//! A clause line has the shape `<box> <operator> <arg1> [<arg2>]`, optionally
//! followed by a `%` comment. When the comment consists of `token [start...end]`
//! groups it is kept as a token alignment; any other comment is dropped.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised while reading a single clause line.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ClauseError {
    #[error("malformed clause: {0}")]
    MalformedClause(String),
    #[error("operator `{operator}` cannot take {arity} argument(s)")]
    UnknownArity { operator: String, arity: usize },
    #[error("unknown operator `{0}`")]
    UnknownOperator(String),
}

/// A variable: either a box label or a discourse referent, depending on where
/// it occurs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Variable(String);

impl Variable {
    pub fn new(name: impl Into<String>) -> Result<Self, ClauseError> {
        let name = name.into();
        if name.is_empty() {
            return Err(ClauseError::MalformedClause("empty variable name".into()));
        }
        if name.chars().any(|c| c.is_whitespace() || c == '"') {
            return Err(ClauseError::MalformedClause(format!(
                "invalid variable name `{name}`"
            )));
        }
        Ok(Variable(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Variable {
    type Err = ClauseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Variable::new(s)
    }
}

/// A clause argument.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Term {
    Variable(Variable),
    /// Text between the double quotes, stored verbatim (`nick~leeson`).
    Constant(String),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Variable(Variable::new(name).expect("valid variable name"))
    }

    pub fn constant(text: impl Into<String>) -> Term {
        Term::Constant(text.into())
    }

    pub fn as_variable(&self) -> Option<&Variable> {
        match self {
            Term::Variable(v) => Some(v),
            Term::Constant(_) => None,
        }
    }

    fn parse(token: &str) -> Result<Term, ClauseError> {
        match token.strip_prefix('"') {
            Some(rest) => match rest.strip_suffix('"') {
                Some(inner) if !inner.contains('"') => Ok(Term::Constant(inner.to_string())),
                _ => Err(ClauseError::MalformedClause(format!(
                    "badly quoted argument `{token}`"
                ))),
            },
            None => Variable::new(token).map(Term::Variable),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Variable(v) => write!(f, "{v}"),
            Term::Constant(c) => write!(f, "\"{c}\""),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PartOfSpeech {
    Noun,
    Verb,
    Adjective,
    Adverb,
}

impl PartOfSpeech {
    pub const ALL: [PartOfSpeech; 4] = [
        PartOfSpeech::Noun,
        PartOfSpeech::Verb,
        PartOfSpeech::Adjective,
        PartOfSpeech::Adverb,
    ];

    pub fn letter(self) -> char {
        match self {
            PartOfSpeech::Noun => 'n',
            PartOfSpeech::Verb => 'v',
            PartOfSpeech::Adjective => 'a',
            PartOfSpeech::Adverb => 'r',
        }
    }

    pub fn from_letter(c: char) -> Option<PartOfSpeech> {
        match c {
            'n' => Some(PartOfSpeech::Noun),
            'v' => Some(PartOfSpeech::Verb),
            'a' => Some(PartOfSpeech::Adjective),
            'r' => Some(PartOfSpeech::Adverb),
            _ => None,
        }
    }
}

/// A WordNet-style sense identifier `lemma.pos.sense`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Synset {
    pub lemma: String,
    pub pos: PartOfSpeech,
    /// Two-digit sense number.
    pub sense: u8,
}

impl Synset {
    pub fn new(lemma: impl Into<String>, pos: PartOfSpeech, sense: u8) -> Synset {
        Synset {
            lemma: lemma.into(),
            pos,
            sense,
        }
    }

    /// The quoted part of a concept clause, e.g. `n.02`.
    pub fn pos_sense(&self) -> String {
        format!("{}.{:02}", self.pos.letter(), self.sense)
    }

    /// Parses the `pos.sense` part, e.g. `n.02`.
    pub fn parse_pos_sense(text: &str) -> Option<(PartOfSpeech, u8)> {
        let (pos, sense) = text.split_once('.')?;
        let mut pos_chars = pos.chars();
        let pos = PartOfSpeech::from_letter(pos_chars.next()?)?;
        if pos_chars.next().is_some() || sense.len() != 2 || !sense.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        Some((pos, sense.parse().ok()?))
    }
}

impl fmt::Display for Synset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.lemma, self.pos_sense())
    }
}

impl FromStr for Synset {
    type Err = ClauseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ClauseError::MalformedClause(format!("invalid synset `{s}`"));
        let (rest, sense) = s.rsplit_once('.').ok_or_else(bad)?;
        let (lemma, pos) = rest.rsplit_once('.').ok_or_else(bad)?;
        if lemma.is_empty() {
            return Err(bad());
        }
        let (pos, sense) = Synset::parse_pos_sense(&format!("{pos}.{sense}")).ok_or_else(bad)?;
        Ok(Synset::new(lemma, pos, sense))
    }
}

/// The operator of a clause.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OperatorTag {
    Ref,
    Concept(Synset),
    /// Thematic role such as `Agent` or `PartOf`.
    Role(String),
    /// Comparison operator from the configured inventory (`EQU`, `TPR`, ...).
    Comparison(String),
    Not,
    /// Possibility.
    Pos,
    /// Necessity.
    Nec,
    Imp,
    Prp,
    /// `DRS`: membership of a box in a segmented box.
    DrsMember,
    DiscourseRelation(String),
}

impl OperatorTag {
    /// Number of arguments after the box label, as written in the file.
    pub fn arity(&self) -> usize {
        match self {
            OperatorTag::Ref
            | OperatorTag::Not
            | OperatorTag::Pos
            | OperatorTag::Nec
            | OperatorTag::DrsMember => 1,
            _ => 2,
        }
    }

    /// The operator token as it appears in clause files.
    pub fn keyword(&self) -> &str {
        match self {
            OperatorTag::Ref => "REF",
            OperatorTag::Concept(s) => &s.lemma,
            OperatorTag::Role(n) | OperatorTag::Comparison(n) | OperatorTag::DiscourseRelation(n) => n,
            OperatorTag::Not => "NOT",
            OperatorTag::Pos => "POS",
            OperatorTag::Nec => "NEC",
            OperatorTag::Imp => "IMP",
            OperatorTag::Prp => "PRP",
            OperatorTag::DrsMember => "DRS",
        }
    }

    /// Operators whose arguments are all box labels.
    pub fn takes_boxes(&self) -> bool {
        matches!(
            self,
            OperatorTag::Not
                | OperatorTag::Pos
                | OperatorTag::Nec
                | OperatorTag::Imp
                | OperatorTag::DrsMember
                | OperatorTag::DiscourseRelation(_)
        )
    }
}

/// The set of all-caps tokens read as comparison operators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorInventory {
    comparisons: BTreeSet<String>,
}

impl OperatorInventory {
    pub const DEFAULT_COMPARISONS: [&'static str; 7] = ["EQU", "NEQ", "APX", "LES", "LEQ", "TPR", "TAB"];

    pub fn new<I, S>(comparisons: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        OperatorInventory {
            comparisons: comparisons.into_iter().map(Into::into).collect(),
        }
    }

    pub fn is_comparison(&self, token: &str) -> bool {
        self.comparisons.contains(token)
    }

    pub fn comparisons(&self) -> impl Iterator<Item = &str> {
        self.comparisons.iter().map(String::as_str)
    }
}

impl Default for OperatorInventory {
    fn default() -> Self {
        OperatorInventory::new(Self::DEFAULT_COMPARISONS)
    }
}

/// A token alignment carried in a clause comment: `token [start...end]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alignment {
    pub token: String,
    pub start: usize,
    pub end: usize,
}

/// One line of clausal form.
///
/// For concept clauses `args` holds the quoted `pos.sense` constant followed
/// by the referent, mirroring the file layout.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Clause {
    pub box_label: Variable,
    pub tag: OperatorTag,
    pub args: Vec<Term>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alignment: Vec<Alignment>,
}

impl Clause {
    /// Builds a clause, checking its shape.
    pub fn new(box_label: Variable, tag: OperatorTag, args: Vec<Term>) -> Result<Clause, ClauseError> {
        let clause = Clause {
            box_label,
            tag,
            args,
            alignment: Vec::new(),
        };
        clause.check_shape()?;
        Ok(clause)
    }

    pub fn concept(box_label: Variable, synset: Synset, referent: Variable) -> Clause {
        let sense = Term::Constant(synset.pos_sense());
        Clause {
            box_label,
            tag: OperatorTag::Concept(synset),
            args: vec![sense, Term::Variable(referent)],
            alignment: Vec::new(),
        }
    }

    pub fn with_alignment(mut self, alignment: Vec<Alignment>) -> Clause {
        self.alignment = alignment;
        self
    }

    /// Checks arity and argument kinds against the operator.
    pub fn check_shape(&self) -> Result<(), ClauseError> {
        let bad = |why: &str| Err(ClauseError::MalformedClause(format!("`{self}`: {why}")));
        if self.args.len() != self.tag.arity() {
            return Err(ClauseError::UnknownArity {
                operator: self.tag.keyword().to_string(),
                arity: self.args.len(),
            });
        }
        match &self.tag {
            OperatorTag::Ref if self.args[0].as_variable().is_none() => bad("REF needs a referent"),
            OperatorTag::Concept(synset) => {
                if self.args[0] != Term::Constant(synset.pos_sense()) {
                    bad("sense argument disagrees with the concept")
                } else if self.args[1].as_variable().is_none() {
                    bad("concept needs a referent")
                } else {
                    Ok(())
                }
            }
            tag if tag.takes_boxes() && self.args.iter().any(|a| a.as_variable().is_none()) => {
                bad("box operator with a constant argument")
            }
            OperatorTag::Prp if self.args.iter().any(|a| a.as_variable().is_none()) => {
                bad("PRP needs a referent and a box")
            }
            _ => Ok(()),
        }
    }

    /// Every variable of the clause, box label first, in argument order.
    pub fn variables(&self) -> impl Iterator<Item = &Variable> {
        std::iter::once(&self.box_label).chain(self.args.iter().filter_map(Term::as_variable))
    }

    /// The same clause without its alignment, used for structural comparison.
    pub fn without_alignment(&self) -> Clause {
        Clause {
            alignment: Vec::new(),
            ..self.clone()
        }
    }

    pub fn synset(&self) -> Option<&Synset> {
        match &self.tag {
            OperatorTag::Concept(s) => Some(s),
            _ => None,
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.box_label, self.tag.keyword())?;
        for arg in &self.args {
            write!(f, " {arg}")?;
        }
        if !self.alignment.is_empty() {
            f.write_str(" %")?;
            for a in &self.alignment {
                write!(f, " {} [{}...{}]", a.token, a.start, a.end)?;
            }
        }
        Ok(())
    }
}

impl FromStr for Clause {
    type Err = ClauseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_clause(s)
    }
}

/// Parses one clause line with the default operator inventory.
pub fn parse_clause(line: &str) -> Result<Clause, ClauseError> {
    parse_clause_with(line, &OperatorInventory::default())
}

pub fn parse_clause_with(line: &str, inventory: &OperatorInventory) -> Result<Clause, ClauseError> {
    let (body, comment) = split_comment(line);
    let tokens = tokenize(body)?;
    if tokens.len() < 3 || tokens.len() > 4 {
        return Err(ClauseError::MalformedClause(format!(
            "expected 3 or 4 tokens, found {} in `{}`",
            tokens.len(),
            line.trim()
        )));
    }
    let box_label = Variable::new(tokens[0])?;
    let raw_args = &tokens[2..];
    let tag = classify_operator_with(tokens[1], raw_args.len(), raw_args, inventory)?;
    let args = raw_args.iter().map(|t| Term::parse(t)).collect::<Result<Vec<_>, _>>()?;
    let clause = Clause {
        box_label,
        tag,
        args,
        alignment: comment.and_then(parse_alignment).unwrap_or_default(),
    };
    clause.check_shape()?;
    Ok(clause)
}

/// Classifies an operator token with the default inventory.
pub fn classify_operator(token: &str, arity: usize, args: &[&str]) -> Result<OperatorTag, ClauseError> {
    classify_operator_with(token, arity, args, &OperatorInventory::default())
}

/// Classifies an operator token observed with `arity` arguments.
///
/// Precedence: fixed keywords, then comparisons from the inventory, then other
/// all-caps tokens of length three or more as discourse relations, then
/// capitalised role names, then lowercase concepts followed by a quoted
/// `pos.sense` argument.
pub fn classify_operator_with(
    token: &str,
    arity: usize,
    args: &[&str],
    inventory: &OperatorInventory,
) -> Result<OperatorTag, ClauseError> {
    let expect = |tag: OperatorTag| {
        if tag.arity() == arity {
            Ok(tag)
        } else {
            Err(ClauseError::UnknownArity {
                operator: token.to_string(),
                arity,
            })
        }
    };
    let fixed = match token {
        "REF" => Some(OperatorTag::Ref),
        "NOT" => Some(OperatorTag::Not),
        "POS" => Some(OperatorTag::Pos),
        "NEC" => Some(OperatorTag::Nec),
        "IMP" => Some(OperatorTag::Imp),
        "PRP" => Some(OperatorTag::Prp),
        "DRS" => Some(OperatorTag::DrsMember),
        _ => None,
    };
    if let Some(tag) = fixed {
        return expect(tag);
    }
    if is_all_caps(token) {
        if inventory.is_comparison(token) {
            return expect(OperatorTag::Comparison(token.to_string()));
        }
        if token.chars().count() >= 3 {
            return expect(OperatorTag::DiscourseRelation(token.to_string()));
        }
        return Err(ClauseError::UnknownOperator(token.to_string()));
    }
    if is_role_name(token) {
        return expect(OperatorTag::Role(token.to_string()));
    }
    if is_lowercase_token(token) {
        if let Some(first) = args.first() {
            if let Some(inner) = first.strip_prefix('"').and_then(|r| r.strip_suffix('"')) {
                let (pos, sense) = Synset::parse_pos_sense(inner).ok_or_else(|| {
                    ClauseError::MalformedClause(format!("invalid sense string {first}"))
                })?;
                return expect(OperatorTag::Concept(Synset::new(token, pos, sense)));
            }
            if Synset::parse_pos_sense(first).is_some() {
                return Err(ClauseError::MalformedClause(format!(
                    "unquoted sense string `{first}`"
                )));
            }
        }
    }
    Err(ClauseError::UnknownOperator(token.to_string()))
}

fn is_all_caps(token: &str) -> bool {
    token.chars().any(char::is_alphabetic)
        && token
            .chars()
            .all(|c| c.is_uppercase() || c.is_ascii_digit() || c == '_' || c == '-')
}

fn is_role_name(token: &str) -> bool {
    let mut chars = token.chars();
    matches!(chars.next(), Some(c) if c.is_uppercase()) && matches!(chars.next(), Some(c) if c.is_lowercase())
}

fn is_lowercase_token(token: &str) -> bool {
    !token.is_empty() && !token.starts_with('"') && !token.chars().any(char::is_uppercase)
}

/// Splits off a trailing `%` comment that is not inside a quoted argument.
fn split_comment(line: &str) -> (&str, Option<&str>) {
    let mut quoted = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => quoted = !quoted,
            '%' if !quoted => return (&line[..i], Some(&line[i + 1..])),
            _ => {}
        }
    }
    (line, None)
}

fn tokenize(body: &str) -> Result<Vec<&str>, ClauseError> {
    let mut tokens = Vec::new();
    let bytes = body.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if bytes[i] == b'"' {
            let close = body[i + 1..]
                .find('"')
                .ok_or_else(|| ClauseError::MalformedClause(format!("unterminated quote in `{}`", body.trim())))?;
            i += close + 2;
            if i < bytes.len() && !bytes[i].is_ascii_whitespace() {
                return Err(ClauseError::MalformedClause(format!(
                    "text after closing quote in `{}`",
                    body.trim()
                )));
            }
        } else {
            while i < bytes.len() && !bytes[i].is_ascii_whitespace() {
                i += 1;
            }
        }
        tokens.push(&body[start..i]);
    }
    Ok(tokens)
}

/// Reads `token [start...end]` groups; `None` if the comment is anything else.
fn parse_alignment(comment: &str) -> Option<Vec<Alignment>> {
    let mut out = Vec::new();
    let mut words: Vec<&str> = Vec::new();
    for piece in comment.split_whitespace() {
        match parse_span(piece) {
            Some((start, end)) => {
                if words.is_empty() {
                    return None;
                }
                out.push(Alignment {
                    token: words.join(" "),
                    start,
                    end,
                });
                words.clear();
            }
            None => words.push(piece),
        }
    }
    if !words.is_empty() || out.is_empty() {
        return None;
    }
    Some(out)
}

fn parse_span(piece: &str) -> Option<(usize, usize)> {
    let inner = piece.strip_prefix('[')?.strip_suffix(']')?;
    let (start, end) = inner.split_once("...")?;
    Some((start.parse().ok()?, end.parse().ok()?))
}
