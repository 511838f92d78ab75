use super::{Ep, HandleConstraint, Mrs, MrsError, Properties, Sort, Variable};

#[derive(Debug, Clone, PartialEq)]
enum Tok<'a> {
    Open,
    Close,
    LAngle,
    RAngle,
    Str(String),
    Word(&'a str),
}

impl Tok<'_> {
    fn describe(&self) -> String {
        match self {
            Tok::Open => "`[`".into(),
            Tok::Close => "`]`".into(),
            Tok::LAngle => "`<`".into(),
            Tok::RAngle => "`>`".into(),
            Tok::Str(s) => format!("string {s:?}"),
            Tok::Word(w) => format!("`{w}`"),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    /// Returns the next token and its starting byte offset.
    fn next(&mut self) -> Result<Option<(usize, Tok<'a>)>, MrsError> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let Some(c) = rest.chars().next() else {
            return Ok(None);
        };
        let single = match c {
            '[' => Some(Tok::Open),
            ']' => Some(Tok::Close),
            '<' => Some(Tok::LAngle),
            '>' => Some(Tok::RAngle),
            _ => None,
        };
        if let Some(tok) = single {
            self.pos += 1;
            return Ok(Some((start, tok)));
        }
        if c == '"' {
            let mut value = String::new();
            let mut chars = rest.char_indices().skip(1);
            while let Some((i, ch)) = chars.next() {
                match ch {
                    '"' => {
                        self.pos = start + i + 1;
                        return Ok(Some((start, Tok::Str(value))));
                    }
                    '\\' => match chars.next() {
                        Some((_, esc)) => value.push(esc),
                        None => break,
                    },
                    _ => value.push(ch),
                }
            }
            return Err(MrsError::Syntax {
                offset: self.src.len(),
                expected: "closing `\"`".into(),
                found: "end of input".into(),
            });
        }
        let len = rest
            .find(|ch: char| ch.is_whitespace() || "[]<>\"".contains(ch))
            .unwrap_or(rest.len());
        self.pos += len;
        Ok(Some((start, Tok::Word(&rest[..len]))))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    peeked: Option<Option<(usize, Tok<'a>)>>,
    mrs: Mrs,
}

fn is_feature_name(s: &str) -> bool {
    let mut bytes = s.bytes();
    matches!(bytes.next(), Some(b'A'..=b'Z'))
        && bytes.all(|b| b.is_ascii_uppercase() || b.is_ascii_digit() || b == b'-')
}

impl<'a> Parser<'a> {
    fn peek(&mut self) -> Result<Option<&(usize, Tok<'a>)>, MrsError> {
        if self.peeked.is_none() {
            self.peeked = Some(self.lexer.next()?);
        }
        Ok(self.peeked.as_ref().and_then(|p| p.as_ref()))
    }

    fn bump(&mut self) -> Result<Option<(usize, Tok<'a>)>, MrsError> {
        match self.peeked.take() {
            Some(tok) => Ok(tok),
            None => self.lexer.next(),
        }
    }

    fn error(&self, at: Option<&(usize, Tok<'a>)>, expected: &str) -> MrsError {
        match at {
            Some((offset, tok)) => MrsError::Syntax {
                offset: *offset,
                expected: expected.to_string(),
                found: tok.describe(),
            },
            None => MrsError::Syntax {
                offset: self.lexer.src.len(),
                expected: expected.to_string(),
                found: "end of input".into(),
            },
        }
    }

    fn expect(&mut self, want: Tok<'static>) -> Result<(), MrsError> {
        let got = self.bump()?;
        match &got {
            Some((_, tok)) if *tok == want => Ok(()),
            _ => Err(self.error(got.as_ref(), &want.describe())),
        }
    }

    fn expect_keyword(&mut self, keyword: &str) -> Result<(), MrsError> {
        let got = self.bump()?;
        match &got {
            Some((_, Tok::Word(w))) if *w == keyword => Ok(()),
            _ => Err(self.error(got.as_ref(), &format!("`{keyword}`"))),
        }
    }

    fn at(&mut self, want: &Tok<'static>) -> Result<bool, MrsError> {
        Ok(matches!(self.peek()?, Some((_, tok)) if tok == want))
    }

    fn variable(&mut self) -> Result<Variable, MrsError> {
        let got = self.bump()?;
        match &got {
            Some((offset, Tok::Word(w))) if w.starts_with(|c: char| c.is_ascii_alphanumeric()) => {
                w.parse().map_err(|_| MrsError::Sort {
                    offset: *offset,
                    token: w.to_string(),
                })
            }
            _ => Err(self.error(got.as_ref(), "variable")),
        }
    }

    fn record_properties(&mut self, var: Variable, props: Properties, offset: usize) -> Result<(), MrsError> {
        if props.is_empty() {
            return Ok(());
        }
        match self.mrs.properties.get(&var) {
            Some(existing) if !existing.same_mapping(&props) => Err(MrsError::Syntax {
                offset,
                expected: format!("properties identical to the earlier ones on {var}"),
                found: "conflicting properties".into(),
            }),
            Some(_) => Ok(()),
            None => {
                self.mrs.properties.insert(var, props);
                Ok(())
            }
        }
    }

    /// `var [ sortletter FEAT: value ... ]`, the bracket part optional.
    fn variable_with_properties(&mut self) -> Result<Variable, MrsError> {
        let var = self.variable()?;
        if !self.at(&Tok::Open)? {
            return Ok(var);
        }
        let (offset, _) = self.bump()?.expect("peeked");
        let got = self.bump()?;
        match &got {
            Some((at, Tok::Word(letter))) => match Sort::from_letter(letter) {
                Some(sort) if sort == var.sort => {}
                _ => {
                    return Err(MrsError::Sort {
                        offset: *at,
                        token: format!("{letter} (properties of {var})"),
                    })
                }
            },
            _ => return Err(self.error(got.as_ref(), "sort letter")),
        }
        let mut props = Properties::new();
        loop {
            let got = self.bump()?;
            match &got {
                Some((_, Tok::Close)) => break,
                Some((at, Tok::Word(w))) if w.ends_with(':') && is_feature_name(&w[..w.len() - 1]) => {
                    let name = &w[..w.len() - 1];
                    if props.get(name).is_some() {
                        return Err(MrsError::Syntax {
                            offset: *at,
                            expected: "feature name not yet used on this variable".into(),
                            found: format!("`{w}`"),
                        });
                    }
                    let value = self.bump()?;
                    match &value {
                        Some((_, Tok::Word(v))) => props.set(name, *v),
                        _ => return Err(self.error(value.as_ref(), "feature value")),
                    }
                }
                _ => return Err(self.error(got.as_ref(), "feature name or `]`")),
            }
        }
        self.record_properties(var, props, offset)?;
        Ok(var)
    }

    fn ep(&mut self) -> Result<Ep, MrsError> {
        self.expect(Tok::Open)?;
        let got = self.bump()?;
        let predicate = match &got {
            Some((_, Tok::Word(w))) if !w.ends_with(':') => w.to_string(),
            Some((_, Tok::Str(s))) => s.clone(),
            _ => return Err(self.error(got.as_ref(), "predicate")),
        };
        self.expect_keyword("LBL:")?;
        let label = self.variable()?;
        let mut ep = Ep::new(predicate, label);
        loop {
            let got = self.bump()?;
            match &got {
                Some((_, Tok::Close)) => return Ok(ep),
                Some((_, Tok::Word("CARG:"))) => {
                    let value = self.bump()?;
                    match value {
                        Some((_, Tok::Str(s))) => ep.carg = Some(s),
                        other => return Err(self.error(other.as_ref(), "quoted CARG value")),
                    }
                }
                Some((_, Tok::Word(w))) if w.ends_with(':') && is_feature_name(&w[..w.len() - 1]) => {
                    let role = w[..w.len() - 1].to_string();
                    let var = self.variable_with_properties()?;
                    // Duplicate roles are kept so validation can report them.
                    ep.args.push((role, var));
                }
                _ => return Err(self.error(got.as_ref(), "role name or `]`")),
            }
        }
    }

    fn parse(mut self) -> Result<Mrs, MrsError> {
        self.expect(Tok::Open)?;
        self.expect_keyword("TOP:")?;
        self.mrs.top = self.variable()?;
        self.expect_keyword("INDEX:")?;
        self.mrs.index = self.variable_with_properties()?;
        self.expect_keyword("RELS:")?;
        self.expect(Tok::LAngle)?;
        while self.at(&Tok::Open)? {
            let ep = self.ep()?;
            self.mrs.rels.push(ep);
        }
        self.expect(Tok::RAngle)?;
        self.expect_keyword("HCONS:")?;
        self.expect(Tok::LAngle)?;
        while !self.at(&Tok::RAngle)? {
            let hi = self.variable()?;
            self.expect_keyword("qeq")?;
            let lo = self.variable()?;
            self.mrs.hcons.push(HandleConstraint::qeq(hi, lo));
        }
        self.expect(Tok::RAngle)?;
        self.expect(Tok::Close)?;
        if let Some(extra) = self.bump()? {
            return Err(self.error(Some(&extra), "end of input"));
        }
        Ok(self.mrs)
    }
}

/// Parses one bracketed simple-MRS expression. The result is not validated;
/// call [`Mrs::validate`] for the structural invariants.
pub fn parse_simple_mrs(text: &str) -> Result<Mrs, MrsError> {
    let placeholder = Variable::handle(0);
    Parser {
        lexer: Lexer { src: text, pos: 0 },
        peeked: None,
        mrs: Mrs::new(placeholder, placeholder),
    }
    .parse()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mrs::tests::SAW;

    #[test]
    fn active_example() {
        let m = parse_simple_mrs(SAW).unwrap();
        assert_eq!(m.rels.len(), 5);
        assert_eq!(m.top, Variable::handle(0));
        assert_eq!(m.index, Variable::event(2));
        assert_eq!(m.feature(m.index, "TENSE"), Some("past"));
        assert_eq!(m.rels[1].carg.as_deref(), Some("Alice"));
        assert_eq!(m.hcons.len(), 3);
        m.validate().unwrap();
        let order: Vec<_> = m.properties_of(m.index).unwrap().iter().map(|(k, _)| k).collect();
        assert_eq!(order, ["SF", "TENSE", "MOOD", "PROG", "PERF"]);
    }

    #[test]
    fn empty_bag_parses_but_fails_validation() {
        let m = parse_simple_mrs("[ TOP: h0 INDEX: e2 RELS: < > HCONS: < > ]").unwrap();
        assert!(m.rels.is_empty());
        assert!(m.validate().is_err());
    }

    #[test]
    fn truncation_reports_end_offset() {
        let text = "[ TOP: h0 INDEX:";
        match parse_simple_mrs(text) {
            Err(MrsError::Syntax { offset, expected, .. }) => {
                assert_eq!(offset, text.len());
                assert_eq!(expected, "variable");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn elision_is_rejected() {
        let text = "[ TOP: h0 INDEX: e2 [ e SF: prop ... ] RELS: < > HCONS: < > ]";
        assert!(matches!(parse_simple_mrs(text), Err(MrsError::Syntax { .. })));
    }

    #[test]
    fn bad_variable_names() {
        let err = parse_simple_mrs("[ TOP: H0 INDEX: e2 RELS: < > HCONS: < > ]").unwrap_err();
        assert_eq!(
            err,
            MrsError::Sort {
                offset: 7,
                token: "H0".into()
            }
        );
        let err = parse_simple_mrs("[ TOP: h0 INDEX: q2 RELS: < > HCONS: < > ]").unwrap_err();
        assert!(matches!(err, MrsError::Sort { offset: 17, .. }));
    }

    #[test]
    fn property_sort_must_match() {
        let err = parse_simple_mrs("[ TOP: h0 INDEX: e2 [ x NUM: sg ] RELS: < > HCONS: < > ]").unwrap_err();
        assert!(matches!(err, MrsError::Sort { .. }));
    }

    #[test]
    fn conflicting_properties_rejected() {
        let text = "[ TOP: h0 INDEX: e2 [ e TENSE: past ] RELS: < [ _go_v_1 LBL: h1 ARG0: e2 [ e TENSE: pres ] ] > HCONS: < h0 qeq h1 > ]";
        assert!(matches!(parse_simple_mrs(text), Err(MrsError::Syntax { .. })));
        let same = "[ TOP: h0 INDEX: e2 [ e TENSE: past ] RELS: < [ _go_v_1 LBL: h1 ARG0: e2 [ e TENSE: past ] ] > HCONS: < h0 qeq h1 > ]";
        assert!(parse_simple_mrs(same).is_ok());
    }

    #[test]
    fn trailing_garbage() {
        let text = "[ TOP: h0 INDEX: e2 RELS: < > HCONS: < h0 qeq h1 > ] ]";
        assert!(matches!(
            parse_simple_mrs(text),
            Err(MrsError::Syntax { offset, .. }) if offset == text.len() - 1
        ));
    }

    #[test]
    fn duplicate_role_survives_parsing() {
        let text =
            "[ TOP: h0 INDEX: e2 RELS: < [ _go_v_1 LBL: h1 ARG0: e2 ARG1: x3 ARG1: x4 ] > HCONS: < h0 qeq h1 > ]";
        let m = parse_simple_mrs(text).unwrap();
        assert_eq!(m.rels[0].args.len(), 3);
        assert!(m.validate().is_err());
    }
}
