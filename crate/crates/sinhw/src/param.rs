//! The shape parameter `a` of f(w) = sinh(aw)·exp(w), 0 < a < 1.
//!
//! The branch structure of the inverse depends on arithmetic properties of
//! `a`, so a rational parameter must be supplied as an integer pair; a bare
//! float is always treated as irrational (category detection from a float is
//! ill-posed).

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Arithmetic trichotomy that governs the branch structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Category {
    /// (1+a)/(1−a) is a positive integer.
    IntegerRatio,
    /// a is rational but (1+a)/(1−a) is not an integer.
    RationalGeneric,
    /// a was supplied as a float with no exact rational form.
    Irrational,
}

/// The parameter a ∈ (0,1), optionally with an exact rational representation.
#[derive(Debug, Clone, Copy)]
pub struct Parameter {
    value: f64,
    exact: Option<(i64, i64)>,
    category: Category,
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.abs()
}

impl Parameter {
    /// Exact rational parameter a = p/q, reduced to lowest terms.
    pub fn rational(p: i64, q: i64) -> Result<Self> {
        if p <= 0 || q <= 0 || p >= q {
            return Err(Error::Domain(format!(
                "rational parameter must satisfy 0 < p < q, got {p}/{q}"
            )));
        }
        let g = gcd(p, q);
        let (p, q) = (p / g, q / g);
        // (1+a)/(1−a) = (q+p)/(q−p)
        let category = if (q + p) % (q - p) == 0 {
            Category::IntegerRatio
        } else {
            Category::RationalGeneric
        };
        Ok(Parameter {
            value: p as f64 / q as f64,
            exact: Some((p, q)),
            category,
        })
    }

    /// Float parameter, treated as irrational.
    pub fn irrational(a: f64) -> Result<Self> {
        if !a.is_finite() || a <= 0.0 || a >= 1.0 {
            return Err(Error::Domain(format!(
                "parameter must be a finite value in (0,1), got {a}"
            )));
        }
        Ok(Parameter {
            value: a,
            exact: None,
            category: Category::Irrational,
        })
    }

    /// Parses either `p/q` (exact rational) or a decimal literal (irrational).
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((ps, qs)) = s.split_once('/') {
            let p: i64 = ps
                .trim()
                .parse()
                .map_err(|_| Error::Domain(format!("bad rational parameter '{s}'")))?;
            let q: i64 = qs
                .trim()
                .parse()
                .map_err(|_| Error::Domain(format!("bad rational parameter '{s}'")))?;
            Parameter::rational(p, q)
        } else {
            let a: f64 = s
                .parse()
                .map_err(|_| Error::Domain(format!("bad parameter '{s}'")))?;
            Parameter::irrational(a)
        }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn exact(&self) -> Option<(i64, i64)> {
        self.exact
    }

    pub fn category(&self) -> Category {
        self.category
    }

    /// (1+a)/(1−a) when it is an integer.
    pub fn integer_ratio(&self) -> Option<i64> {
        match (self.category, self.exact) {
            (Category::IntegerRatio, Some((p, q))) => Some((q + p) / (q - p)),
            _ => None,
        }
    }

    /// Imaginary period of f for rational a = p/q: qπ if p+q is even, else 2qπ.
    /// None for irrational a (f is not periodic).
    pub fn period(&self) -> Option<f64> {
        self.exact.map(|(p, q)| {
            if (p + q) % 2 == 0 {
                q as f64 * PI
            } else {
                2.0 * q as f64 * PI
            }
        })
    }

    /// Number of distinct critical values of f per period (rational a only).
    pub fn critical_count(&self) -> Option<i64> {
        self.exact
            .map(|(p, q)| if (p + q) % 2 == 0 { p } else { 2 * p })
    }

    /// Vertical spacing π/a between consecutive Ω regions.
    pub fn spacing(&self) -> f64 {
        match self.exact {
            Some((p, q)) => q as f64 * PI / p as f64,
            None => PI / self.value,
        }
    }

    /// Half-width π/(1+a) of the Ω band.
    pub fn half_width(&self) -> f64 {
        match self.exact {
            Some((p, q)) => q as f64 * PI / (q + p) as f64,
            None => PI / (1.0 + self.value),
        }
    }

    /// Short display form: `p/q` or the decimal value.
    pub fn display(&self) -> String {
        match self.exact {
            Some((p, q)) => format!("{p}/{q}"),
            None => format!("{}", self.value),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn categorization() {
        assert_eq!(
            Parameter::rational(1, 2).unwrap().category(),
            Category::IntegerRatio
        );
        assert_eq!(
            Parameter::rational(1, 3).unwrap().category(),
            Category::IntegerRatio
        );
        assert_eq!(
            Parameter::rational(1, 4).unwrap().category(),
            Category::RationalGeneric
        );
        assert_eq!(
            Parameter::rational(3, 5).unwrap().category(),
            Category::IntegerRatio
        );
        assert_eq!(
            Parameter::irrational(0.618_033_988_749_894_8)
                .unwrap()
                .category(),
            Category::Irrational
        );
    }

    #[test]
    fn reduction() {
        // 2/4 reduces to 1/2 and is then integer-ratio with n = 3
        let a = Parameter::rational(2, 4).unwrap();
        assert_eq!(a.exact(), Some((1, 2)));
        assert_eq!(a.integer_ratio(), Some(3));
        assert_eq!(Parameter::rational(1, 3).unwrap().integer_ratio(), Some(2));
    }

    #[test]
    fn period_parity() {
        // p+q odd: 2qπ; p+q even: qπ
        let a = Parameter::rational(1, 2).unwrap();
        assert!((a.period().unwrap() - 4.0 * PI).abs() < 1e-15);
        let a = Parameter::rational(1, 3).unwrap();
        assert!((a.period().unwrap() - 3.0 * PI).abs() < 1e-15);
        let a = Parameter::rational(1, 4).unwrap();
        assert!((a.period().unwrap() - 8.0 * PI).abs() < 1e-15);
        assert!(Parameter::irrational(0.3).unwrap().period().is_none());
    }

    #[test]
    fn critical_counts() {
        assert_eq!(Parameter::rational(1, 2).unwrap().critical_count(), Some(2));
        assert_eq!(Parameter::rational(1, 3).unwrap().critical_count(), Some(1));
        assert_eq!(Parameter::rational(1, 4).unwrap().critical_count(), Some(2));
        assert_eq!(Parameter::rational(2, 3).unwrap().critical_count(), Some(4));
    }

    #[test]
    fn parse_forms() {
        assert_eq!(Parameter::parse("1/2").unwrap().category(), Category::IntegerRatio);
        assert_eq!(Parameter::parse("0.7314").unwrap().category(), Category::Irrational);
        assert!(Parameter::parse("5/3").is_err());
        assert!(Parameter::parse("1.5").is_err());
        assert!(Parameter::parse("x").is_err());
    }

    #[test]
    fn rejects_degenerate() {
        assert!(Parameter::rational(0, 2).is_err());
        assert!(Parameter::rational(2, 2).is_err());
        assert!(Parameter::irrational(0.0).is_err());
        assert!(Parameter::irrational(1.0).is_err());
        assert!(Parameter::irrational(f64::NAN).is_err());
    }
}
