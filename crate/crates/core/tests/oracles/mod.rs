//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

pub mod fuzzy {
    //! Brute-force Mamdani inference with its own membership code.

    pub const SAMPLES: usize = 100_000;

    /// Degrees of the five labels at `x` over `[lo, hi]`.
    pub fn degrees(lo: f64, hi: f64, x: f64) -> [f64; 5] {
        let x = x.max(lo).min(hi);
        let w = (hi - lo) / 4.0;
        let mut out = [0.0; 5];
        for (k, slot) in out.iter_mut().enumerate() {
            let peak = lo + w * k as f64;
            let tri = (1.0 - (x - peak).abs() / w).max(0.0);
            *slot = match k {
                0 if x <= peak => 1.0,
                4 if x >= peak => 1.0,
                _ => tri,
            };
        }
        out
    }

    /// Centroid of `max_k min(strength[k], μ_k(y))` by `SAMPLES` midpoint samples.
    pub fn defuzzify(lo: f64, hi: f64, strength: &[f64; 5]) -> f64 {
        let step = (hi - lo) / SAMPLES as f64;
        let (mut num, mut den) = (0.0, 0.0);
        for i in 0..SAMPLES {
            let y = lo + step * (i as f64 + 0.5);
            let mu = degrees(lo, hi, y);
            let agg = (0..5).map(|k| strength[k].min(mu[k])).fold(0.0, f64::max);
            num += y * agg;
            den += agg;
        }
        num / den
    }

    pub const DIVERSITY: (f64, f64) = (0.6, 1.0);
    pub const CROSSOVER: (f64, f64) = (0.1, 0.3);
    pub const MUTATION: (f64, f64) = (0.05, 0.25);
    pub const CONSTANTS: (f64, f64) = (0.0, 0.5);

    /// Row = iteration label, column = diversity label; labels as 0..5.
    pub const GRID: [[usize; 5]; 5] =
        [[0, 0, 1, 1, 2], [0, 1, 1, 2, 3], [1, 1, 2, 3, 3], [1, 2, 3, 3, 4], [2, 2, 3, 4, 4]];

    pub fn crossover(d: f64) -> f64 {
        let mu = degrees(DIVERSITY.0, DIVERSITY.1, d);
        let mut s = [0.0f64; 5];
        for k in 0..5 {
            s[4 - k] = s[4 - k].max(mu[k]);
        }
        defuzzify(CROSSOVER.0, CROSSOVER.1, &s)
    }

    pub fn mutation(d: f64) -> f64 {
        let mu = degrees(DIVERSITY.0, DIVERSITY.1, d);
        defuzzify(MUTATION.0, MUTATION.1, &mu)
    }

    pub fn constants(gen: f64, d: f64, max_gen: f64) -> f64 {
        let mg = degrees(max_gen / 2.0, max_gen, gen);
        let md = degrees(DIVERSITY.0, DIVERSITY.1, d);
        let mut s = [0.0f64; 5];
        for (i, row) in GRID.iter().enumerate() {
            for (j, &out) in row.iter().enumerate() {
                s[out] += mg[i] * md[j];
            }
        }
        defuzzify(CONSTANTS.0, CONSTANTS.1, &s)
    }
}

pub mod bench {
    //! Second implementation of the twelve benchmark objectives.

    use std::f64::consts::{E, PI};

    fn sq(t: f64) -> f64 {
        t * t
    }

    pub fn eval(name: &str, x: &[f64]) -> f64 {
        match name {
            "f1" => {
                let mut s = 0.0;
                for v in x {
                    s += v * v;
                }
                s
            }
            "f2" => 100.0 * sq(x[0] * x[0] - x[1]) + sq(1.0 - x[0]),
            "f3" => {
                let r2 = x[0] * x[0] + x[1] * x[1];
                let num = sq(r2.sqrt().sin()) - 0.5;
                0.5 + num / sq(1.0 + 0.001 * r2)
            }
            "f4" => {
                let r2 = x[0] * x[0] + x[1] * x[1];
                r2.powf(0.25) * (sq((50.0 * r2.powf(0.1)).sin()) + 1.0)
            }
            "f5" => (-0.001 * x[0]).exp() * sq((0.8 * x[0]).cos()),
            "f6" => -x[0] * (4.0 * x[0]).sin() - 1.1 * x[1] * (2.0 * x[1]).sin(),
            "f7" => x[0] * (10.0 * PI * x[0]).sin() + 1.0,
            "f8" => {
                let (a, b) = (x[0], x[1]);
                let p = 19.0 - 14.0 * a + 3.0 * a * a - 14.0 * b + 6.0 * a * b + 3.0 * b * b;
                let q = 18.0 - 32.0 * a + 12.0 * a * a + 48.0 * b - 36.0 * a * b + 27.0 * b * b;
                (1.0 + sq(a + b + 1.0) * p) * (30.0 + sq(2.0 * a - 3.0 * b) * q)
            }
            "f9" => {
                let mut s = 0.0;
                for (i, v) in x.iter().enumerate() {
                    s += (i + 1) as f64 * v * v;
                }
                s
            }
            "f10" => {
                let (mut s, mut p) = (0.0, 1.0);
                for v in x {
                    s += v.abs();
                }
                for v in x {
                    p *= v.abs();
                }
                s + p
            }
            "f11" => {
                let mut s = 0.0;
                for v in x {
                    s += (v * v.sin() + 0.1 * v).abs();
                }
                s
            }
            "f12" => {
                let n = x.len() as f64;
                let (mut sq_sum, mut cos_sum) = (0.0, 0.0);
                for v in x {
                    sq_sum += v * v;
                }
                for v in x {
                    cos_sum += (2.0 * PI * v).cos();
                }
                -20.0 * (-0.2 * (sq_sum / n).sqrt()).exp() - (cos_sum / n).exp() + 20.0 + E
            }
            _ => panic!("unknown benchmark {name}"),
        }
    }
}
