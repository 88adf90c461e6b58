//! Line-oriented text format and an inline sum-of-products parser.
//!
//! ```text
//! vars: x y z
//! 3/2 * x^2 y
//! -1 * z
//! 4
//! ```
//!
//! One term per line, highest canonical term first. The header names the
//! variables; a bare coefficient is the constant term.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{Monomial, SparsePoly};
use super::PolyError;

impl SparsePoly {
    pub fn to_text(&self) -> String {
        let mut out = format!("vars: {}\n", self.vars().join(" "));
        for (m, c) in self.terms().rev() {
            let factors: Vec<String> = m
                .exponents()
                .iter()
                .zip(self.vars())
                .filter(|(e, _)| **e > 0)
                .map(|(e, v)| {
                    if *e == 1 {
                        v.clone()
                    } else {
                        format!("{v}^{e}")
                    }
                })
                .collect();
            if factors.is_empty() {
                out.push_str(&format!("{c}\n"));
            } else {
                out.push_str(&format!("{c} * {}\n", factors.join(" ")));
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<SparsePoly, PolyError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(PolyError::Parse {
            line: 1,
            msg: "missing `vars:` header".into(),
        })?;
        let names = header.strip_prefix("vars:").ok_or(PolyError::Parse {
            line: hline,
            msg: "expected `vars:` header".into(),
        })?;
        let vars: Vec<String> = names.split_whitespace().map(str::to_string).collect();
        let mut poly = SparsePoly::zero_owned(vars.clone());
        for (ln, line) in lines {
            let (coef, rest) = match line.split_once('*') {
                Some((c, r)) => (c.trim(), r.trim()),
                None => (line, ""),
            };
            let c = parse_rational(coef).ok_or_else(|| PolyError::Parse {
                line: ln,
                msg: format!("bad coefficient `{coef}`"),
            })?;
            let mut exps = vec![0u32; vars.len()];
            for factor in rest.split_whitespace() {
                let (name, e) = parse_factor(factor).ok_or_else(|| PolyError::Parse {
                    line: ln,
                    msg: format!("bad factor `{factor}`"),
                })?;
                let idx = vars.iter().position(|v| v == name).ok_or_else(|| PolyError::Parse {
                    line: ln,
                    msg: format!("unknown variable `{name}`"),
                })?;
                exps[idx] += e;
            }
            poly.add_term(Monomial::new(exps), c);
        }
        Ok(poly)
    }

    /// Parses an inline expression such as `5*a^2 - 2*a*b + 5*b^2 - 245`.
    ///
    /// Only sums of signed products of a rational coefficient and variable
    /// powers are accepted; no parentheses.
    pub fn parse_expr(vars: &[&str], expr: &str) -> Result<SparsePoly, PolyError> {
        let mut poly = SparsePoly::zero(vars);
        let cleaned: String = expr.split_whitespace().collect();
        let bytes = cleaned.as_bytes();
        let mut start = 0;
        let mut terms = Vec::new();
        for i in 1..=bytes.len() {
            if i == bytes.len() || ((bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^') {
                terms.push(&cleaned[start..i]);
                start = i;
            }
        }
        for term in terms {
            let (neg, body) = match term.as_bytes().first() {
                Some(b'-') => (true, &term[1..]),
                Some(b'+') => (false, &term[1..]),
                _ => (false, term),
            };
            let mut coef = BigRational::one();
            let mut exps = vec![0u32; vars.len()];
            for factor in body.split('*').filter(|f| !f.is_empty()) {
                if factor.as_bytes()[0].is_ascii_digit() {
                    coef *= parse_rational(factor).ok_or_else(|| PolyError::Parse {
                        line: 1,
                        msg: format!("bad number `{factor}`"),
                    })?;
                    continue;
                }
                let (name, e) = parse_factor(factor).ok_or_else(|| PolyError::Parse {
                    line: 1,
                    msg: format!("bad factor `{factor}`"),
                })?;
                let idx = vars
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
                exps[idx] += e;
            }
            if neg {
                coef = -coef;
            }
            poly.add_term(Monomial::new(exps), coef);
        }
        Ok(poly)
    }
}

fn parse_factor(f: &str) -> Option<(&str, u32)> {
    match f.split_once('^') {
        Some((n, e)) => Some((n, e.parse().ok()?)),
        None => Some((f, 1)),
    }
}

pub(crate) fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        Some(BigRational::from_integer(s.parse().ok()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_expr_matches_manual_construction() {
        let p = SparsePoly::parse_expr(&["a", "b"], "5*a^2 - 2*a*b + 5*b^2 - 245").unwrap();
        assert_eq!(p.num_terms(), 4);
        let q = |n: i64| BigRational::from_integer(n.into());
        assert_eq!(p.eval_exact(&[q(7), q(0)]).unwrap(), q(0));
        assert_eq!(p.eval_exact(&[q(1), q(1)]).unwrap(), q(-237));
    }

    #[test]
    fn parse_expr_rejects_unknown_variable() {
        assert!(matches!(
            SparsePoly::parse_expr(&["a"], "a + c"),
            Err(PolyError::UnknownVariable(_))
        ));
    }

    #[test]
    fn from_text_reports_line() {
        let err = SparsePoly::from_text("vars: x\n1 * x\n2 * y\n").unwrap_err();
        assert!(matches!(err, PolyError::Parse { line: 3, .. }));
        assert!(SparsePoly::from_text("x^2").is_err());
    }

    #[test]
    fn big_coefficients_survive() {
        let p = SparsePoly::parse_expr(&["x"], "-26265874556250000 + 3560485217625000*x^2").unwrap();
        let back = SparsePoly::from_text(&p.to_text()).unwrap();
        assert_eq!(p, back);
        assert!(p.to_text().contains("-26265874556250000"));
    }

    fn arb_poly() -> impl Strategy<Value = SparsePoly> {
        prop::collection::vec(((-50i64..50), (1i64..9), prop::array::uniform3(0u32..4)), 0..8)
            .prop_map(|terms| {
                SparsePoly::from_terms(
                    &["x", "y", "z"],
                    terms
                        .into_iter()
                        .map(|(n, d, e)| (BigRational::new(n.into(), d.into()), e.to_vec())),
                )
            })
    }

    proptest! {
        #[test]
        fn text_roundtrip_is_identity(p in arb_poly()) {
            let back = SparsePoly::from_text(&p.to_text()).unwrap();
            prop_assert_eq!(&p, &back);
            prop_assert_eq!(p.to_text(), back.to_text());
        }
    }
}
