//! Text syntax for monomials (`x1^3*x2^2*x3^2`) and linear forms (`y1 + 2*y2`), whitespace-insensitive.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::FieldParam;
use crate::monomial::{canonicalize, Monomial};
use crate::semiaffine::LinearForm;

struct Lexer<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    src: &'a str,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        let chars = src.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        Lexer { chars, pos: 0, src }
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map(|&(i, _)| i).unwrap_or(self.src.len())
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn fail<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Parse { position: self.offset(), expected: expected.to_string() })
    }

    fn number(&mut self, what: &str) -> Result<u64> {
        let start = self.offset();
        let mut v: u64 = 0;
        let mut any = false;
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            v = match v.checked_mul(10).and_then(|v| v.checked_add(c as u64 - '0' as u64)) {
                Some(v) => v,
                None => return Err(Error::Parse { position: start, expected: format!("{what} that fits in 64 bits") }),
            };
            any = true;
            self.pos += 1;
        }
        if !any {
            return self.fail(what);
        }
        Ok(v)
    }
}

/// Parses one monomial. Repeated variables multiply; `x1^0` contributes nothing.
pub fn parse_monomial(src: &str, fp: &FieldParam) -> Result<Monomial> {
    let mut lx = Lexer::new(src);
    let mut exps: BTreeMap<u64, u64> = BTreeMap::new();
    loop {
        if lx.peek() != Some('x') {
            return lx.fail("'x'");
        }
        lx.pos += 1;
        let at = lx.offset();
        let var = lx.number("variable index digits")?;
        if var == 0 {
            return Err(Error::Parse { position: at, expected: "variable index >= 1".into() });
        }
        let e = if lx.peek() == Some('^') {
            lx.pos += 1;
            lx.number("exponent digits")?
        } else {
            1
        };
        *exps.entry(var).or_default() += e;
        match lx.peek() {
            Some('*') => lx.pos += 1,
            None => break,
            Some(_) => return lx.fail("'*', '^' or end of input"),
        }
    }
    let v: Vec<u64> = exps.into_values().collect();
    canonicalize(&v, fp)
}

/// Parses a comma-separated list of monomials.
pub fn parse_monomial_list(src: &str, fp: &FieldParam) -> Result<Vec<Monomial>> {
    let mut out = Vec::new();
    let mut base = 0;
    for part in src.split(',') {
        let r = parse_monomial(part, fp).map_err(|e| match e {
            Error::Parse { position, expected } => Error::Parse { position: position + base, expected },
            other => other,
        });
        out.push(r?);
        base += part.len() + 1;
    }
    Ok(out)
}

/// Parses a linear form over Z_n such as `y1 + 2*y2` or `0`. Each variable may appear once.
pub fn parse_linear_form(src: &str, n: u32) -> Result<LinearForm> {
    let mut lx = Lexer::new(src);
    if lx.peek() == Some('0') && lx.chars.len() == 1 {
        return Ok(LinearForm::zero(n));
    }
    let mut coeffs: BTreeMap<u64, u64> = BTreeMap::new();
    loop {
        let c = if lx.peek().is_some_and(|c| c.is_ascii_digit()) {
            let c = lx.number("coefficient digits")?;
            if lx.peek() != Some('*') {
                return lx.fail("'*'");
            }
            lx.pos += 1;
            c
        } else {
            1
        };
        if lx.peek() != Some('y') {
            return lx.fail("'y' or a coefficient");
        }
        lx.pos += 1;
        let at = lx.offset();
        let var = lx.number("variable index digits")?;
        if var == 0 {
            return Err(Error::Parse { position: at, expected: "variable index >= 1".into() });
        }
        if coeffs.insert(var, c).is_some() {
            return Err(Error::Parse { position: at, expected: format!("a variable other than y{var}") });
        }
        match lx.peek() {
            Some('+') => lx.pos += 1,
            None => break,
            Some(_) => return lx.fail("'+' or end of input"),
        }
    }
    let v: Vec<u64> = coeffs.into_values().collect();
    Ok(LinearForm::from_coeffs(&v, n))
}

/// Parses a comma-separated list of linear forms.
pub fn parse_linear_forms(src: &str, n: u32) -> Result<Vec<LinearForm>> {
    let mut out = Vec::new();
    let mut base = 0;
    for part in src.split(',') {
        out.push(parse_linear_form(part, n).map_err(|e| match e {
            Error::Parse { position, expected } => Error::Parse { position: position + base, expected },
            other => other,
        })?);
        base += part.len() + 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_compact_notation() {
        let fp = FieldParam::new(5).unwrap();
        let a = parse_monomial("x1^3*x2^2*x3^2", &fp).unwrap();
        assert_eq!(a, Monomial::from_pairs(&[(3, 1), (2, 2)], &fp).unwrap());
        let b = parse_monomial("  x1 ^ 3 * x2^2*x3 ^2 ", &fp).unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_monomial("x1*x1", &fp).unwrap(), Monomial::power(2, &fp));
        assert_eq!(parse_monomial("x2^8", &fp).unwrap(), Monomial::power(4, &fp));
    }

    #[test]
    fn reports_position() {
        let fp = FieldParam::new(3).unwrap();
        match parse_monomial("x1*y2", &fp) {
            Err(Error::Parse { position, expected }) => {
                assert_eq!(position, 3);
                assert!(expected.contains("'x'"));
            }
            other => panic!("{other:?}"),
        }
        match parse_monomial("x1^", &fp) {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_monomial("x0", &fp), Err(Error::Parse { position: 1, .. })));
        assert!(matches!(parse_monomial("x1^0", &fp), Err(Error::InvalidMonomial(_))));
        match parse_monomial_list("x1, x2 x3", &fp) {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 7),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn linear_forms() {
        let f = parse_linear_form("y1 + 2*y2", 3).unwrap();
        assert_eq!(f, LinearForm::from_coeffs(&[1, 2], 3));
        assert_eq!(parse_linear_form("0", 3).unwrap(), LinearForm::zero(3));
        assert_eq!(parse_linear_form("3*y1", 3).unwrap(), LinearForm::zero(3));
        assert!(matches!(parse_linear_form("y1 + y1", 3), Err(Error::Parse { position: 6, .. })));
        assert!(matches!(parse_linear_form("y1 - y2", 3), Err(Error::Parse { position: 3, .. })));
        assert_eq!(parse_linear_forms("y1, 0", 2).unwrap().len(), 2);
    }
}
