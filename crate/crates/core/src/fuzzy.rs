//! Mamdani fuzzy controllers for the crossover, mutation and constant-set
//! mutation rates.
//!
//! Every universe carries the same five-label family: a left shoulder `XL`,
//! triangles `ML`, `M`, `MH`, and a right shoulder `XH`, with evenly spaced
//! breakpoints. Each consequent set is clipped at its firing strength, the
//! clipped sets combine with `max`, and the crisp output is the centroid over
//! a 1001-point grid.
//!
//! Two-input rules fire with the product of their antecedent degrees, and
//! rules sharing a consequent add their strengths. Both input families sum to
//! one, so strengths stay in `[0, 1]` and the output is monotone in each input
//! whenever the rule grid is.

use std::fmt;

/// Samples used by [`centroid`] when defuzzifying.
pub const CENTROID_GRID: usize = 1001;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    XL,
    ML,
    M,
    MH,
    XH,
}

impl Label {
    pub const ALL: [Label; 5] = [Label::XL, Label::ML, Label::M, Label::MH, Label::XH];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Universe {
    pub lo: f64,
    pub hi: f64,
}

impl Universe {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Universe { lo, hi }
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// `n` evenly spaced points from `lo` to `hi` inclusive.
    pub fn grid(&self, n: usize) -> impl Iterator<Item = f64> + '_ {
        let step = (self.hi - self.lo) / (n - 1) as f64;
        (0..n).map(move |i| if i + 1 == n { self.hi } else { self.lo + i as f64 * step })
    }
}

pub const DIVERSITY: Universe = Universe::new(0.6, 1.0);
pub const CROSSOVER_RATE: Universe = Universe::new(0.1, 0.3);
pub const MUTATION_RATE: Universe = Universe::new(0.05, 0.25);
pub const CONSTANT_MUTATION_RATE: Universe = Universe::new(0.0, 0.5);

/// The iteration universe covers the second half of a run.
pub fn iteration_universe(max_gen: usize) -> Universe {
    Universe::new(max_gen as f64 / 2.0, max_gen as f64)
}

/// Five labels over a universe with breakpoints `lo + k·(hi−lo)/4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembershipFamily {
    pub universe: Universe,
}

impl MembershipFamily {
    pub const fn new(universe: Universe) -> Self {
        MembershipFamily { universe }
    }

    pub fn breakpoint(&self, k: usize) -> f64 {
        let u = self.universe;
        if k == 4 {
            u.hi
        } else {
            u.lo + k as f64 * (u.hi - u.lo) / 4.0
        }
    }

    pub fn membership(&self, label: Label, x: f64) -> f64 {
        let x = self.universe.clamp(x);
        let k = label.index();
        let p = |i: usize| self.breakpoint(i);
        match label {
            Label::XL => ((p(1) - x) / (p(1) - p(0))).clamp(0.0, 1.0),
            Label::XH => ((x - p(3)) / (p(4) - p(3))).clamp(0.0, 1.0),
            _ if x <= p(k) => ((x - p(k - 1)) / (p(k) - p(k - 1))).max(0.0),
            _ => ((p(k + 1) - x) / (p(k + 1) - p(k))).max(0.0),
        }
    }

    /// Degrees of all five labels, indexed by [`Label::index`].
    pub fn fuzzify(&self, x: f64) -> [f64; 5] {
        Label::ALL.map(|l| self.membership(l, x))
    }

    /// Samples `max_L min(strength[L], μ_L(x))` on the defuzzification grid.
    fn aggregate(&self, strength: &[f64; 5]) -> Vec<f64> {
        self.universe
            .grid(CENTROID_GRID)
            .map(|x| {
                Label::ALL
                    .iter()
                    .filter(|l| strength[l.index()] > 0.0)
                    .map(|&l| strength[l.index()].min(self.membership(l, x)))
                    .fold(0.0, f64::max)
            })
            .collect()
    }
}

/// Output label for each input label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleTable1D(pub [Label; 5]);

impl RuleTable1D {
    /// Crossover: high diversity reading (concentrated population) lowers the rate.
    pub const CROSSOVER: RuleTable1D = RuleTable1D([Label::XH, Label::MH, Label::M, Label::ML, Label::XL]);
    /// Mutation: identity map.
    pub const MUTATION: RuleTable1D = RuleTable1D([Label::XL, Label::ML, Label::M, Label::MH, Label::XH]);

    pub fn consequent(&self, input: Label) -> Label {
        self.0[input.index()]
    }
}

/// Output label indexed by `[first input label][second input label]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleTable2D(pub [[Label; 5]; 5]);

impl RuleTable2D {
    /// Constant-set mutation: rows are iteration labels, columns diversity labels.
    pub const CONSTANT_MUTATION: RuleTable2D = {
        use Label::*;
        RuleTable2D([
            [XL, XL, ML, ML, M],
            [XL, ML, ML, M, MH],
            [ML, ML, M, MH, MH],
            [ML, M, MH, MH, XH],
            [M, M, MH, XH, XH],
        ])
    };

    pub fn consequent(&self, a: Label, b: Label) -> Label {
        self.0[a.index()][b.index()]
    }
}

/// `Σ x·μ / Σ μ` over an evenly sampled universe; the midpoint when nothing fired.
pub fn centroid(universe: Universe, degrees: &[f64]) -> f64 {
    let (mut moment, mut mass) = (0.0, 0.0);
    for (x, &mu) in universe.grid(degrees.len()).zip(degrees) {
        moment += x * mu;
        mass += mu;
    }
    if mass > 0.0 {
        moment / mass
    } else {
        universe.midpoint()
    }
}

pub fn infer_1d(table: &RuleTable1D, input: &MembershipFamily, output: &MembershipFamily, x: f64) -> f64 {
    let mut strength = [0.0f64; 5];
    for (label, mu) in Label::ALL.into_iter().zip(input.fuzzify(x)) {
        let out = table.consequent(label).index();
        strength[out] = strength[out].max(mu);
    }
    centroid(output.universe, &output.aggregate(&strength))
}

pub fn infer_2d(
    table: &RuleTable2D,
    input_a: &MembershipFamily,
    input_b: &MembershipFamily,
    output: &MembershipFamily,
    a: f64,
    b: f64,
) -> f64 {
    let (mu_a, mu_b) = (input_a.fuzzify(a), input_b.fuzzify(b));
    let mut strength = [0.0f64; 5];
    for la in Label::ALL {
        for lb in Label::ALL {
            let out = table.consequent(la, lb).index();
            strength[out] += mu_a[la.index()] * mu_b[lb.index()];
        }
    }
    centroid(output.universe, &output.aggregate(&strength))
}

/// Single-input controller.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Controller1D {
    pub table: RuleTable1D,
    pub input: MembershipFamily,
    pub output: MembershipFamily,
}

impl Controller1D {
    pub fn infer(&self, x: f64) -> f64 {
        infer_1d(&self.table, &self.input, &self.output, x)
    }
}

/// Two-input controller.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Controller2D {
    pub table: RuleTable2D,
    pub input_a: MembershipFamily,
    pub input_b: MembershipFamily,
    pub output: MembershipFamily,
}

impl Controller2D {
    pub fn infer(&self, a: f64, b: f64) -> f64 {
        infer_2d(&self.table, &self.input_a, &self.input_b, &self.output, a, b)
    }
}

/// The three rate controllers of the engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateControllers {
    /// Diversity reading -> crossover rate.
    pub crossover: Controller1D,
    /// Diversity reading -> mutation rate.
    pub mutation: Controller1D,
    /// (generation, diversity reading) -> constant-set mutation rate.
    pub constants: Controller2D,
}

impl RateControllers {
    pub fn new(max_gen: usize) -> Self {
        let diversity = MembershipFamily::new(DIVERSITY);
        RateControllers {
            crossover: Controller1D {
                table: RuleTable1D::CROSSOVER,
                input: diversity,
                output: MembershipFamily::new(CROSSOVER_RATE),
            },
            mutation: Controller1D {
                table: RuleTable1D::MUTATION,
                input: diversity,
                output: MembershipFamily::new(MUTATION_RATE),
            },
            constants: Controller2D {
                table: RuleTable2D::CONSTANT_MUTATION,
                input_a: MembershipFamily::new(iteration_universe(max_gen)),
                input_b: diversity,
                output: MembershipFamily::new(CONSTANT_MUTATION_RATE),
            },
        }
    }
}
