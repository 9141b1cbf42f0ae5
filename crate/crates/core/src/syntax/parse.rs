//! Concrete ASCII syntax for formulas and sequents.
//!
//! ```text
//! formula := 'e' NAT | IDENT ('^[' NAT (',' NAT)* ']')? | 'q(' formula (',' formula){n} ')'
//! sequent := ctx? '|-' NAT ctx?        ctx := formula (',' formula)*
//! ```

use super::{Context, Dimension, Formula, Permutation, Sequent, SyntaxError};

/// Either kind of top-level input accepted by [`parse`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parsed {
    Formula(Formula),
    Sequent(Sequent),
}

pub fn parse(text: &str, n: Dimension) -> Result<Parsed, SyntaxError> {
    if text.contains("|-") {
        parse_sequent(text, n).map(Parsed::Sequent)
    } else {
        parse_formula(text, n).map(Parsed::Formula)
    }
}

pub fn parse_formula(text: &str, n: Dimension) -> Result<Formula, SyntaxError> {
    let mut p = Parser::new(text, n);
    let f = p.formula()?;
    p.end()?;
    Ok(f)
}

pub fn parse_sequent(text: &str, n: Dimension) -> Result<Sequent, SyntaxError> {
    let mut p = Parser::new(text, n);
    let left = if p.peek_turnstile() {
        Context::new()
    } else {
        p.context()?
    };
    p.expect("|-")?;
    p.skip_ws();
    let at = p.pos;
    let turnstile = p.nat()?;
    if turnstile == 0 || turnstile > n.get() {
        return Err(p.error_at(
            at,
            format!("turnstile index {turnstile} outside 1..={}", n.get()),
        ));
    }
    let right = if p.at_end() {
        Context::new()
    } else {
        p.context()?
    };
    p.end()?;
    Ok(Sequent::new(left, turnstile, right))
}

pub fn parse_context(text: &str, n: Dimension) -> Result<Context, SyntaxError> {
    let mut p = Parser::new(text, n);
    if p.at_end() {
        return Ok(Context::new());
    }
    let c = p.context()?;
    p.end()?;
    Ok(c)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    n: Dimension,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, n: Dimension) -> Self {
        Parser { src, pos: 0, n }
    }

    fn error_at(&self, pos: usize, message: impl Into<String>) -> SyntaxError {
        SyntaxError::Parse {
            pos,
            message: message.into(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }

    fn end(&mut self) -> Result<(), SyntaxError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error_at(self.pos, format!("unexpected input `{}`", self.rest())))
        }
    }

    fn peek_turnstile(&mut self) -> bool {
        self.skip_ws();
        self.rest().starts_with("|-")
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), SyntaxError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error_at(self.pos, format!("expected `{token}`")))
        }
    }

    fn nat(&mut self) -> Result<usize, SyntaxError> {
        self.skip_ws();
        let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return Err(self.error_at(self.pos, "expected a number"));
        }
        let at = self.pos;
        self.pos += digits;
        self.src[at..self.pos]
            .parse()
            .map_err(|_| self.error_at(at, "number too large"))
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = self.rest();
        let mut chars = rest.char_indices();
        match chars.next() {
            Some((_, c)) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return None,
        }
        let len = chars
            .find(|&(_, c)| !(c.is_ascii_alphanumeric() || c == '_' || c == '\''))
            .map(|(p, _)| p)
            .unwrap_or(rest.len());
        self.pos += len;
        Some(&rest[..len])
    }

    fn context(&mut self) -> Result<Context, SyntaxError> {
        let mut items = vec![self.formula()?];
        while self.eat(",") {
            items.push(self.formula()?);
        }
        Ok(Context::from_formulas(items))
    }

    fn formula(&mut self) -> Result<Formula, SyntaxError> {
        self.skip_ws();
        let start = self.pos;
        let Some(word) = self.ident() else {
            return Err(self.error_at(start, "expected a formula"));
        };
        let nn = self.n.get();

        if let Some(digits) = word.strip_prefix('e') {
            if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
                let k: usize = digits
                    .parse()
                    .map_err(|_| self.error_at(start, "constant index too large"))?;
                if k == 0 || k > nn {
                    return Err(SyntaxError::ConstantOutOfRange { index: k, n: nn });
                }
                return Ok(Formula::Const(k));
            }
        }

        if word == "q" && self.eat("(") {
            let test = self.formula()?;
            let mut branches = Vec::with_capacity(nn);
            while self.eat(",") {
                branches.push(self.formula()?);
            }
            self.expect(")")?;
            if branches.len() != nn {
                return Err(SyntaxError::Arity {
                    expected: nn + 1,
                    found: branches.len() + 1,
                });
            }
            return Ok(Formula::q(test, branches));
        }

        let dec = if self.eat("^") {
            self.expect("[")?;
            let mut images = vec![self.nat()?];
            while self.eat(",") {
                images.push(self.nat()?);
            }
            self.expect("]")?;
            if images.len() != nn {
                return Err(SyntaxError::DimensionMismatch {
                    expected: nn,
                    found: images.len(),
                });
            }
            Permutation::from_images(&images)?
        } else {
            Permutation::identity(self.n)
        };
        Ok(Formula::var(word, dec))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(n: usize) -> Dimension {
        Dimension::new(n).unwrap()
    }

    fn swap12() -> Permutation {
        Permutation::from_images(&[2, 1]).unwrap()
    }

    #[test]
    fn parses_examples() {
        assert_eq!(parse_formula("e1", dim(2)).unwrap(), Formula::Const(1));
        assert_eq!(
            parse_formula("q(X, e2, e1)", dim(2)).unwrap(),
            Formula::q(
                Formula::plain("X", dim(2)),
                vec![Formula::Const(2), Formula::Const(1)]
            )
        );
        let x = Formula::var("X", swap12());
        assert_eq!(
            parse("X^[2,1] |-2 X^[2,1]", dim(2)).unwrap(),
            Parsed::Sequent(Sequent::new(
                Context::from_formulas([x.clone()]),
                2,
                Context::from_formulas([x])
            ))
        );
    }

    #[test]
    fn whitespace_is_insignificant() {
        let a = parse_sequent("X^[2,1],Y|-1e1", dim(2)).unwrap();
        let b = parse_sequent("  X ^ [ 2 , 1 ] , Y   |- 1   e1 ", dim(2)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_sides() {
        let s = parse_sequent("|-1", dim(2)).unwrap();
        assert!(s.left.is_empty() && s.right.is_empty());
        let s = parse_sequent("e1 |-2", dim(2)).unwrap();
        assert_eq!(s.left.len(), 1);
        assert!(s.right.is_empty());
    }

    #[test]
    fn reports_errors() {
        assert!(matches!(
            parse_formula("q(X, e1)", dim(2)),
            Err(SyntaxError::Arity {
                expected: 3,
                found: 2
            })
        ));
        assert!(matches!(
            parse_formula("X^[1,1]", dim(2)),
            Err(SyntaxError::NotAPermutation(_))
        ));
        assert!(matches!(
            parse_formula("e3", dim(2)),
            Err(SyntaxError::ConstantOutOfRange { index: 3, n: 2 })
        ));
        assert!(matches!(
            parse_formula("X^[2,1,3]", dim(2)),
            Err(SyntaxError::DimensionMismatch { .. })
        ));
        match parse_formula("q(X, e1, e2", dim(2)) {
            Err(SyntaxError::Parse { pos, .. }) => assert_eq!(pos, 11),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_sequent("X |-3 X", dim(2)).is_err());
        assert!(parse_sequent("X |- X", dim(2)).is_err());
        assert!(parse_formula("X Y", dim(2)).is_err());
    }

    #[test]
    fn identifiers_that_look_like_keywords() {
        // `e` alone and `q` without parentheses are ordinary variables
        assert_eq!(
            parse_formula("e", dim(2)).unwrap(),
            Formula::plain("e", dim(2))
        );
        assert_eq!(
            parse_formula("q", dim(2)).unwrap(),
            Formula::plain("q", dim(2))
        );
        assert_eq!(
            parse_formula("e1x", dim(2)).unwrap(),
            Formula::plain("e1x", dim(2))
        );
        assert_eq!(
            parse_formula("X'", dim(2)).unwrap(),
            Formula::plain("X'", dim(2))
        );
    }

    #[test]
    fn render_then_parse() {
        for text in ["e1", "X^[2,1]", "q(q(X, e1, Y^[2,1]), e2, q(Z, Z, Z))"] {
            let f = parse_formula(text, dim(2)).unwrap();
            assert_eq!(f.to_string(), text);
        }
        let s = parse_sequent("Y, X^[3,1,2] |-3 q(X, e1, e2, e3), e2", dim(3)).unwrap();
        assert_eq!(s.to_string(), "X^[3,1,2], Y |-3 e2, q(X, e1, e2, e3)");
        assert_eq!(parse_sequent(&s.to_string(), dim(3)).unwrap(), s);
    }
}
