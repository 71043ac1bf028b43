//! Exact multiplicative words in named generators.
//!
//! A [`Monomial`] is `exp(2πi·torsion) · ∏ g^{e_g}` with rational exponents.
//! Fractional exponents denote one fixed branch: `m.pow(1/k)` divides every
//! exponent *and* the torsion angle by `k`, and the remaining branches are
//! reached by multiplying with explicit roots of unity.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Div, Mul};
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rat = num_rational::Ratio<i64>;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(n)
}

/// Reduces an angle into `[0, 1)`.
pub(crate) fn frac(r: Rat) -> Rat {
    r - r.floor()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    torsion: Rat,
    exponents: BTreeMap<String, Rat>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn gen(name: &str) -> Self {
        Self::gen_pow(name, Rat::one())
    }

    pub fn gen_pow(name: &str, e: Rat) -> Self {
        Self::from_parts(Rat::zero(), [(name.to_string(), e)])
    }

    /// `exp(2πi·angle)`.
    pub fn root_of_unity(angle: Rat) -> Self {
        Self::from_parts(angle, [])
    }

    pub fn minus_one() -> Self {
        Self::root_of_unity(rat(1, 2))
    }

    pub fn from_parts<I>(torsion: Rat, exponents: I) -> Self
    where
        I: IntoIterator<Item = (String, Rat)>,
    {
        let mut map = BTreeMap::new();
        for (g, e) in exponents {
            *map.entry(g).or_insert_with(Rat::zero) += e;
        }
        map.retain(|_, e| !e.is_zero());
        Monomial {
            torsion: frac(torsion),
            exponents: map,
        }
    }

    pub fn torsion(&self) -> Rat {
        self.torsion
    }

    pub fn exponent(&self, g: &str) -> Rat {
        self.exponents.get(g).copied().unwrap_or_else(Rat::zero)
    }

    pub fn exponents(&self) -> &BTreeMap<String, Rat> {
        &self.exponents
    }

    pub fn is_one(&self) -> bool {
        self.torsion.is_zero() && self.exponents.is_empty()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_zero()
    }

    /// The same free part with the torsion dropped.
    pub fn free_part(&self) -> Monomial {
        Monomial {
            torsion: Rat::zero(),
            exponents: self.exponents.clone(),
        }
    }

    pub fn inv(&self) -> Monomial {
        self.pow(-Rat::one())
    }

    /// Raises to a rational power on the fixed branch (torsion scaled too).
    pub fn pow(&self, e: Rat) -> Monomial {
        Monomial::from_parts(
            self.torsion * e,
            self.exponents.iter().map(|(g, x)| (g.clone(), *x * e)),
        )
    }

    pub fn powi(&self, e: i64) -> Monomial {
        self.pow(int(e))
    }

    /// Common denominator of the torsion and all exponents.
    pub fn denominator_lcm(&self) -> i64 {
        self.exponents
            .values()
            .fold(*self.torsion.denom(), |acc, e| acc.lcm(e.denom()))
    }
}

/// Componentwise exponent sum with torsion added mod 1.
pub fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    Monomial::from_parts(
        a.torsion + b.torsion,
        a.exponents
            .iter()
            .chain(b.exponents.iter())
            .map(|(g, e)| (g.clone(), *e)),
    )
}

impl Mul for &Monomial {
    type Output = Monomial;
    fn mul(self, rhs: &Monomial) -> Monomial {
        mono_mul(self, rhs)
    }
}

impl Mul for Monomial {
    type Output = Monomial;
    fn mul(self, rhs: Monomial) -> Monomial {
        mono_mul(&self, &rhs)
    }
}

impl Div for &Monomial {
    type Output = Monomial;
    fn div(self, rhs: &Monomial) -> Monomial {
        mono_mul(self, &rhs.inv())
    }
}

impl Div for Monomial {
    type Output = Monomial;
    fn div(self, rhs: Monomial) -> Monomial {
        mono_mul(&self, &rhs.inv())
    }
}

impl std::iter::Product for Monomial {
    fn product<I: Iterator<Item = Monomial>>(iter: I) -> Monomial {
        iter.fold(Monomial::one(), |acc, m| mono_mul(&acc, &m))
    }
}

fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let t = self.torsion;
        if !t.is_zero() {
            parts.push(if t == rat(1, 2) {
                "-1".to_string()
            } else if t == rat(1, 4) {
                "i".to_string()
            } else if t == rat(3, 4) {
                "-i".to_string()
            } else {
                format!("zeta({})", fmt_rat(&t))
            });
        }
        for (g, e) in &self.exponents {
            if e.is_one() {
                parts.push(g.clone());
            } else if e.is_integer() {
                parts.push(format!("{}^{}", g, e.numer()));
            } else {
                parts.push(format!("{}^({})", g, fmt_rat(e)));
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(rat(n, d))
        }
        None => s.parse::<i64>().map(int).map_err(|_| bad()),
    }
}

/// Parses words such as `"-1*e1^(1/2)*q^-1"`, `"i*p"` or `"zeta(1/3)*t2"`.
/// Factors are separated by `*` or whitespace; `1` is the empty word.
impl FromStr for Monomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut acc = Monomial::one();
        for tok in s.split(|c: char| c == '*' || c.is_whitespace()) {
            let tok = tok.trim();
            if tok.is_empty() || tok == "1" {
                continue;
            }
            let m = match tok {
                "-1" => Monomial::minus_one(),
                "i" => Monomial::root_of_unity(rat(1, 4)),
                "-i" => Monomial::root_of_unity(rat(3, 4)),
                _ if tok.starts_with("zeta(") && tok.ends_with(')') => {
                    Monomial::root_of_unity(parse_rat(&tok[5..tok.len() - 1])?)
                }
                _ => {
                    let (name, e) = match tok.split_once('^') {
                        Some((n, e)) => (n, parse_rat(e)?),
                        None => (tok, Rat::one()),
                    };
                    if name.is_empty()
                        || !name.chars().all(|c| c.is_alphanumeric() || c == '_')
                        || name.chars().next().is_some_and(|c| c.is_ascii_digit())
                    {
                        return Err(Error::Parse(format!("bad generator {name:?}")));
                    }
                    Monomial::gen_pow(name, e)
                }
            };
            acc = &acc * &m;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> Monomial {
        s.parse().unwrap()
    }

    #[test]
    fn square_roots_multiply_back() {
        assert_eq!(&m("e1^1/2") * &m("e1^1/2"), m("e1"));
    }

    #[test]
    fn minus_one_squared_is_identity() {
        let r = &Monomial::minus_one() * &Monomial::minus_one();
        assert!(r.is_one());
    }

    #[test]
    fn cancellation() {
        assert_eq!(&m("q^1/4*p") * &m("q^3/4*p^-1"), m("q"));
    }

    #[test]
    fn torsion_stays_in_unit_interval() {
        let x = Monomial::root_of_unity(rat(7, 4));
        assert_eq!(x.torsion(), rat(3, 4));
        let y = Monomial::root_of_unity(rat(-1, 3));
        assert_eq!(y.torsion(), rat(2, 3));
    }

    #[test]
    fn pow_scales_torsion() {
        let x = m("-1*e1");
        assert_eq!(x.pow(rat(1, 2)), m("i*e1^1/2"));
    }

    #[test]
    fn display_round_trips() {
        for s in ["-1*e1^(1/2)*q^-1", "i*p", "zeta(1/3)*t2^(-3/2)", "1"] {
            let x = m(s);
            assert_eq!(x.to_string().parse::<Monomial>().unwrap(), x);
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("e1^x".parse::<Monomial>().is_err());
        assert!("3e".parse::<Monomial>().is_err());
        assert!("e1^1/0".parse::<Monomial>().is_err());
    }
}
