use cosserat_core::convergence::Order;

use crate::output::num;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Number(f64),
    Order(Order),
    Flag(bool),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Criterion {
    AtMost(f64),
    AtLeast(f64),
    Within(f64, f64),
    True,
}

impl Criterion {
    pub fn text(&self) -> String {
        match self {
            Criterion::AtMost(t) => format!("<= {}", num(*t)),
            Criterion::AtLeast(t) => format!(">= {}", num(*t)),
            Criterion::Within(a, b) => format!("in [{} {}]", num(*a), num(*b)),
            Criterion::True => "true".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: Value,
    pub criterion: Criterion,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            value: Value::Number(value),
            criterion: Criterion::AtMost(tol),
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            value: Value::Number(value),
            criterion: Criterion::AtLeast(tol),
        }
    }

    pub fn within(name: impl Into<String>, value: f64, lo: f64, hi: f64) -> Self {
        Self {
            name: name.into(),
            value: Value::Number(value),
            criterion: Criterion::Within(lo, hi),
        }
    }

    pub fn order(name: impl Into<String>, order: Order) -> Self {
        Self {
            name: name.into(),
            value: Value::Order(order),
            criterion: Criterion::AtLeast(cosserat_core::convergence::MIN_ORDER),
        }
    }

    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Self {
            name: name.into(),
            value: Value::Flag(ok),
            criterion: Criterion::True,
        }
    }

    pub fn passed(&self) -> bool {
        match (self.value, self.criterion) {
            (Value::Order(o), _) => o.passes(),
            (Value::Flag(b), _) => b,
            (Value::Number(v), Criterion::AtMost(t)) => v <= t,
            (Value::Number(v), Criterion::AtLeast(t)) => v >= t,
            (Value::Number(v), Criterion::Within(a, b)) => a <= v && v <= b,
            (Value::Number(_), Criterion::True) => false,
        }
    }

    pub fn status(&self) -> &'static str {
        if self.passed() {
            "pass"
        } else {
            "fail"
        }
    }

    pub fn value_text(&self) -> String {
        match self.value {
            Value::Number(v) => num(v),
            Value::Order(o) => o.to_string(),
            Value::Flag(b) => b.to_string(),
        }
    }
}

/// Checks of one scenario run.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub scenario: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    /// One line per check, for the terminal.
    pub fn lines(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| {
                format!(
                    "[{}] {}/{}: {} ({})",
                    c.status(),
                    self.scenario,
                    c.name,
                    c.value_text(),
                    c.criterion.text()
                )
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn criteria() {
        assert!(Check::at_most("a", 1e-13, 1e-12).passed());
        assert!(!Check::at_most("a", f64::NAN, 1e-12).passed());
        assert!(!Check::at_least("a", f64::NAN, 1.0).passed());
        assert!(Check::within("a", 10.0, 8.0, 12.0).passed());
        assert!(Check::order("a", Order::Exact).passed());
        assert!(!Check::order("a", Order::NonMonotone).passed());
        assert_eq!(Check::order("a", Order::NonMonotone).value_text(), "NaN");
        assert_eq!(Criterion::AtMost(1e-12).text(), "<= 1.000000000000000e-12");
    }
}
