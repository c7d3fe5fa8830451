//! The twelve benchmark objectives.

use std::f64::consts::{E, PI};
use std::fmt;

use crate::error::{Error, Result};
use crate::genome::Op;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Minimize,
    Maximize,
}

impl Direction {
    /// Sort key where smaller is better; non-finite fitness ranks last.
    #[inline]
    pub fn key(self, fitness: f64) -> f64 {
        if !fitness.is_finite() {
            return f64::INFINITY;
        }
        match self {
            Direction::Minimize => fitness,
            Direction::Maximize => -fitness,
        }
    }

    /// Strictly better.
    pub fn better(self, a: f64, b: f64) -> bool {
        self.key(a) < self.key(b)
    }

    /// True when `value` is within `tol` of `target` or beyond it in the
    /// improving direction.
    pub fn reaches(self, value: f64, target: f64, tol: f64) -> bool {
        value.is_finite()
            && match self {
                Direction::Minimize => value <= target + tol,
                Direction::Maximize => value >= target - tol,
            }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Minimize => "minimize",
            Direction::Maximize => "maximize",
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Objective {
    /// f1: Σ x²
    Sphere,
    /// f2: 100(x1² − x2)² + (1 − x1)²
    Rosenbrock,
    /// f3: Schaffer's F6
    SchafferF6,
    /// f4: (x1² + x2²)^0.25 [sin²(50 (x1² + x2²)^0.1) + 1]
    SchafferF7,
    /// f5: exp(−0.001x) cos²(0.8x)
    DampedCosine,
    /// f6: −x sin(4x) − 1.1 y sin(2y)
    SineProduct,
    /// f7: x sin(10πx) + 1
    SineWave,
    /// f8: Goldstein–Price
    GoldsteinPrice,
    /// f9: Σ i·x_i²
    SumSquares,
    /// f10: Σ|x_i| + Π|x_i|
    Schwefel222,
    /// f11: Σ|x_i sin(x_i) + 0.1 x_i|
    Alpine,
    /// f12
    Ackley {
        a: f64,
        b: f64,
        c: f64,
    },
    Custom(fn(&[f64]) -> f64),
}

impl Objective {
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        match *self {
            Objective::Sphere => x.iter().map(|v| v * v).sum(),
            Objective::Rosenbrock => {
                let (x1, x2) = (x[0], x[1]);
                100.0 * (x1 * x1 - x2).powi(2) + (1.0 - x1).powi(2)
            }
            Objective::SchafferF6 => {
                let r2 = x[0] * x[0] + x[1] * x[1];
                0.5 + (r2.sqrt().sin().powi(2) - 0.5) / (1.0 + 0.001 * r2).powi(2)
            }
            Objective::SchafferF7 => {
                let r2 = x[0] * x[0] + x[1] * x[1];
                r2.powf(0.25) * ((50.0 * r2.powf(0.1)).sin().powi(2) + 1.0)
            }
            Objective::DampedCosine => (-0.001 * x[0]).exp() * (0.8 * x[0]).cos().powi(2),
            Objective::SineProduct => -x[0] * (4.0 * x[0]).sin() - 1.1 * x[1] * (2.0 * x[1]).sin(),
            Objective::SineWave => x[0] * (10.0 * PI * x[0]).sin() + 1.0,
            Objective::GoldsteinPrice => {
                let (x1, x2) = (x[0], x[1]);
                let a = 1.0
                    + (x1 + x2 + 1.0).powi(2)
                        * (19.0 - 14.0 * x1 + 3.0 * x1 * x1 - 14.0 * x2 + 6.0 * x1 * x2 + 3.0 * x2 * x2);
                let b = 30.0
                    + (2.0 * x1 - 3.0 * x2).powi(2)
                        * (18.0 - 32.0 * x1 + 12.0 * x1 * x1 + 48.0 * x2 - 36.0 * x1 * x2 + 27.0 * x2 * x2);
                a * b
            }
            Objective::SumSquares => x.iter().enumerate().map(|(i, v)| (i + 1) as f64 * v * v).sum(),
            Objective::Schwefel222 => {
                x.iter().map(|v| v.abs()).sum::<f64>() + x.iter().map(|v| v.abs()).product::<f64>()
            }
            Objective::Alpine => x.iter().map(|v| (v * v.sin() + 0.1 * v).abs()).sum(),
            Objective::Ackley { a, b, c } => {
                let n = x.len() as f64;
                let squares: f64 = x.iter().map(|v| v * v).sum();
                let cosines: f64 = x.iter().map(|v| (c * v).cos()).sum();
                -a * (-b * (squares / n).sqrt()).exp() - (cosines / n).exp() + a + E
            }
            Objective::Custom(f) => f(x),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Problem {
    pub name: String,
    pub objective: Objective,
    pub dim: usize,
    pub bounds: Vec<(f64, f64)>,
    pub direction: Direction,
    pub known_optimum: Option<f64>,
    /// Problem-specific operators added to `+ - * /`.
    pub extra_operators: Vec<Op>,
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 12] =
    ["f1", "f2", "f3", "f4", "f5", "f6", "f7", "f8", "f9", "f10", "f11", "f12"];

impl Problem {
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        self.objective.evaluate(x)
    }

    /// Smallest lower bound and largest upper bound over all variables.
    pub fn domain(&self) -> (f64, f64) {
        self.bounds
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(l, h)| (lo.min(l), hi.max(h)))
    }

    /// A point attaining the known optimum, where one is known in closed form.
    pub fn known_optimizer(&self) -> Option<Vec<f64>> {
        match self.objective {
            Objective::Sphere
            | Objective::SchafferF6
            | Objective::SchafferF7
            | Objective::SumSquares
            | Objective::Schwefel222
            | Objective::Alpine
            | Objective::Ackley { .. } => Some(vec![0.0; self.dim]),
            Objective::Rosenbrock => Some(vec![1.0, 1.0]),
            Objective::GoldsteinPrice => Some(vec![0.0, -1.0]),
            _ => None,
        }
    }

    pub fn custom(
        name: &str,
        f: fn(&[f64]) -> f64,
        dim: usize,
        bounds: (f64, f64),
        direction: Direction,
        known_optimum: Option<f64>,
    ) -> Result<Problem> {
        if dim == 0 || bounds.0.is_nan() || bounds.1.is_nan() || bounds.0 >= bounds.1 {
            return Err(Error::Config(format!("invalid custom problem {name}")));
        }
        Ok(Problem {
            name: name.to_string(),
            objective: Objective::Custom(f),
            dim,
            bounds: vec![bounds; dim],
            direction,
            known_optimum,
            extra_operators: Vec::new(),
        })
    }
}

/// Default dimension of each builtin benchmark.
pub fn default_dim(name: &str) -> Option<usize> {
    Some(match canonical(name)? {
        "f1" | "f2" | "f3" | "f4" | "f6" | "f8" => 2,
        "f5" | "f7" => 1,
        "f9" | "f10" => 30,
        "f11" | "f12" => 50,
        _ => unreachable!(),
    })
}

fn canonical(name: &str) -> Option<&'static str> {
    let lower = name.trim().to_ascii_lowercase().replace('_', "");
    BUILTIN_NAMES.into_iter().find(|n| *n == lower)
}

/// Looks up one of the twelve benchmarks. `dim` defaults per [`default_dim`];
/// only f1 and f9–f12 accept other dimensions.
pub fn builtin(name: &str, dim: Option<usize>) -> Result<Problem> {
    use Direction::*;
    use Op::*;
    let key = canonical(name).ok_or_else(|| Error::UnknownProblem(name.to_string()))?;
    let fixed = default_dim(key).expect("canonical name");
    let scalable = matches!(key, "f1" | "f9" | "f10" | "f11" | "f12");
    let dim = dim.unwrap_or(fixed);
    if dim == 0 || (!scalable && dim != fixed) {
        return Err(Error::InvalidDimension { name: key.to_string(), dim });
    }
    let (objective, bounds, direction, optimum, ops): (Objective, (f64, f64), Direction, f64, &[Op]) =
        match key {
            "f1" => (Objective::Sphere, (-5.12, 5.12), Minimize, 0.0, &[]),
            "f2" => (Objective::Rosenbrock, (-2.048, 2.048), Minimize, 0.0, &[]),
            "f3" => (Objective::SchafferF6, (-100.0, 100.0), Minimize, 0.0, &[Sin, Sqrt]),
            "f4" => (Objective::SchafferF7, (-100.0, 100.0), Minimize, 0.0, &[Sin, Sqrt]),
            "f5" => (Objective::DampedCosine, (0.0, 18.0), Minimize, 0.0, &[Cos, Exp]),
            "f6" => (Objective::SineProduct, (0.0, 10.0), Maximize, 18.5547210767, &[Sin]),
            "f7" => (Objective::SineWave, (-1.0, 2.0), Maximize, 2.8502737668, &[Sin, Cos]),
            "f8" => (Objective::GoldsteinPrice, (-2.0, 2.0), Minimize, 3.0, &[]),
            "f9" => (Objective::SumSquares, (-10.0, 10.0), Minimize, 0.0, &[]),
            "f10" => (Objective::Schwefel222, (-10.0, 10.0), Minimize, 0.0, &[]),
            "f11" => (Objective::Alpine, (-10.0, 10.0), Minimize, 0.0, &[Sin]),
            "f12" => (
                Objective::Ackley { a: 20.0, b: 0.2, c: 2.0 * PI },
                (-5.12, 5.12),
                Minimize,
                0.0,
                &[Sin, Cos, Sqrt, Exp],
            ),
            _ => unreachable!(),
        };
    Ok(Problem {
        name: key.to_string(),
        objective,
        dim,
        bounds: vec![bounds; dim],
        direction,
        known_optimum: Some(optimum),
        extra_operators: ops.to_vec(),
    })
}
