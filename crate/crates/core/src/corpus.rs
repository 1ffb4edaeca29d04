//! Built-in corpus of continuous test functions on [0, 1].
//!
//! All evaluators are closed-form; the harness never ingests functions from
//! files.

/// Regularity class of a test function, coarsest first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Smoothness {
    Linear,
    Smooth,
    Lipschitz,
    Holder,
}

impl Smoothness {
    pub fn as_str(&self) -> &'static str {
        match self {
            Smoothness::Linear => "linear",
            Smoothness::Smooth => "smooth",
            Smoothness::Lipschitz => "lipschitz",
            Smoothness::Holder => "holder",
        }
    }
}

/// A named continuous function on [0, 1].
#[derive(Debug, Clone, Copy)]
pub struct TestFunction {
    pub name: &'static str,
    pub smoothness: Smoothness,
    evaluator: fn(f64) -> f64,
}

impl TestFunction {
    pub fn eval(&self, x: f64) -> f64 {
        (self.evaluator)(x)
    }

    /// The evaluator as a plain function pointer, handy for generic callers.
    pub fn as_fn(&self) -> fn(f64) -> f64 {
        self.evaluator
    }
}

fn linear(x: f64) -> f64 {
    2.0 * x - 0.3
}

fn square(x: f64) -> f64 {
    x * x
}

fn sine(x: f64) -> f64 {
    (2.0 * std::f64::consts::PI * x).sin()
}

fn abs_half(x: f64) -> f64 {
    (x - 0.5).abs()
}

fn sqrt_abs_third(x: f64) -> f64 {
    (x - 1.0 / 3.0).abs().sqrt()
}

// Broken line through (0, 0), (0.3, 0.6), (0.7, 0.2), (1, 0.5).
fn broken_line(x: f64) -> f64 {
    if x < 0.3 {
        2.0 * x
    } else if x < 0.7 {
        0.6 - (x - 0.3)
    } else {
        0.2 + (x - 0.7)
    }
}

fn runge(x: f64) -> f64 {
    1.0 / (1.0 + 25.0 * (x - 0.5) * (x - 0.5))
}

/// The full built-in corpus, in a fixed order.
pub fn builtin_corpus() -> Vec<TestFunction> {
    vec![
        TestFunction {
            name: "linear",
            smoothness: Smoothness::Linear,
            evaluator: linear,
        },
        TestFunction {
            name: "square",
            smoothness: Smoothness::Smooth,
            evaluator: square,
        },
        TestFunction {
            name: "sine",
            smoothness: Smoothness::Smooth,
            evaluator: sine,
        },
        TestFunction {
            name: "abs_half",
            smoothness: Smoothness::Lipschitz,
            evaluator: abs_half,
        },
        TestFunction {
            name: "sqrt_abs_third",
            smoothness: Smoothness::Holder,
            evaluator: sqrt_abs_third,
        },
        TestFunction {
            name: "broken_line",
            smoothness: Smoothness::Lipschitz,
            evaluator: broken_line,
        },
        TestFunction {
            name: "runge",
            smoothness: Smoothness::Smooth,
            evaluator: runge,
        },
    ]
}

/// Looks a corpus member up by name.
pub fn find_function(name: &str) -> Option<TestFunction> {
    builtin_corpus().into_iter().find(|f| f.name == name)
}
