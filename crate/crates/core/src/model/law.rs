//! Grain radius distributions with exact tails, moments and conditional
//! sampling.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Law `μ` of the grain radius `ρ`.
///
/// Moments that diverge are reported as `f64::INFINITY`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RadiusLaw {
    Fixed { radius: f64 },
    Uniform { min: f64, max: f64 },
    Exponential { mean: f64 },
    /// `P[ρ > t] = (scale / t)^tail_exponent` for `t >= scale`.
    Pareto { tail_exponent: f64, scale: f64 },
    /// Mass `p0` at radius zero, otherwise drawn from `inner`.
    ZeroAtom { p0: f64, inner: Box<RadiusLaw> },
}

impl RadiusLaw {
    pub fn fixed(radius: f64) -> Self {
        RadiusLaw::Fixed { radius }
    }

    pub fn uniform(min: f64, max: f64) -> Self {
        RadiusLaw::Uniform { min, max }
    }

    pub fn exponential(mean: f64) -> Self {
        RadiusLaw::Exponential { mean }
    }

    pub fn pareto(tail_exponent: f64, scale: f64) -> Self {
        RadiusLaw::Pareto {
            tail_exponent,
            scale,
        }
    }

    pub fn zero_atom(p0: f64, inner: RadiusLaw) -> Self {
        RadiusLaw::ZeroAtom {
            p0,
            inner: Box::new(inner),
        }
    }

    /// Checks parameter ranges and the standing assumption `μ({0}) < 1`.
    pub fn validate(&self) -> Result<()> {
        let finite_pos = |name, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(invalid(name, format!("must be finite and > 0, got {v}")))
            }
        };
        match self {
            RadiusLaw::Fixed { radius } => finite_pos("radius", *radius),
            RadiusLaw::Uniform { min, max } => {
                if min.is_finite() && max.is_finite() && *min >= 0.0 && min < max {
                    Ok(())
                } else {
                    Err(invalid("uniform", format!("need 0 <= min < max, got [{min}, {max}]")))
                }
            }
            RadiusLaw::Exponential { mean } => finite_pos("mean", *mean),
            RadiusLaw::Pareto {
                tail_exponent,
                scale,
            } => {
                finite_pos("tail_exponent", *tail_exponent)?;
                finite_pos("scale", *scale)
            }
            RadiusLaw::ZeroAtom { p0, inner } => {
                if !(0.0..1.0).contains(p0) {
                    return Err(invalid("p0", format!("must lie in [0, 1), got {p0}")));
                }
                inner.validate()
            }
        }
    }

    /// `P[ρ = 0]`.
    pub fn atom_at_zero(&self) -> f64 {
        match self {
            RadiusLaw::ZeroAtom { p0, inner } => p0 + (1.0 - p0) * inner.atom_at_zero(),
            RadiusLaw::Uniform { .. }
            | RadiusLaw::Fixed { .. }
            | RadiusLaw::Exponential { .. }
            | RadiusLaw::Pareto { .. } => 0.0,
        }
    }

    /// `P[ρ > t]`.
    pub fn tail(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 1.0;
        }
        match self {
            RadiusLaw::Fixed { radius } => f64::from(t < *radius),
            RadiusLaw::Uniform { min, max } => uniform_tail(*min, *max, t),
            RadiusLaw::Exponential { mean } => (-t / mean).exp(),
            RadiusLaw::Pareto {
                tail_exponent,
                scale,
            } => pareto_tail(*tail_exponent, *scale, t),
            RadiusLaw::ZeroAtom { p0, inner } => (1.0 - p0) * inner.tail(t),
        }
    }

    /// `P[ρ >= t]`; differs from [`RadiusLaw::tail`] only at atoms.
    pub fn tail_ge(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 1.0;
        }
        match self {
            RadiusLaw::Fixed { radius } => f64::from(t <= *radius),
            RadiusLaw::Uniform { min, max } => uniform_tail(*min, *max, t),
            RadiusLaw::Exponential { mean } => (-t / mean).exp(),
            RadiusLaw::Pareto {
                tail_exponent,
                scale,
            } => pareto_tail(*tail_exponent, *scale, t),
            RadiusLaw::ZeroAtom { p0, inner } => (1.0 - p0) * inner.tail_ge(t),
        }
    }

    /// `P[lo <= ρ < hi]`; `hi` may be infinite.
    pub fn mass(&self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            return 0.0;
        }
        let upper = if hi.is_infinite() { 0.0 } else { self.tail_ge(hi) };
        (self.tail_ge(lo) - upper).max(0.0)
    }

    /// Exact `E[ρ^k]`, or `f64::INFINITY` when it diverges.
    pub fn moment(&self, k: u32) -> f64 {
        if k == 0 {
            return 1.0;
        }
        let kf = f64::from(k);
        match self {
            RadiusLaw::Fixed { radius } => radius.powi(k as i32),
            RadiusLaw::Uniform { min, max } => {
                (max.powi(k as i32 + 1) - min.powi(k as i32 + 1)) / ((kf + 1.0) * (max - min))
            }
            RadiusLaw::Exponential { mean } => {
                mean.powi(k as i32) * (1..=k).map(f64::from).product::<f64>()
            }
            RadiusLaw::Pareto {
                tail_exponent,
                scale,
            } => {
                if kf >= *tail_exponent {
                    f64::INFINITY
                } else {
                    tail_exponent * scale.powi(k as i32) / (tail_exponent - kf)
                }
            }
            RadiusLaw::ZeroAtom { p0, inner } => (1.0 - p0) * inner.moment(k),
        }
    }

    /// Supremum of the support, if finite.
    pub fn support_max(&self) -> Option<f64> {
        match self {
            RadiusLaw::Fixed { radius } => Some(*radius),
            RadiusLaw::Uniform { max, .. } => Some(*max),
            RadiusLaw::Exponential { .. } | RadiusLaw::Pareto { .. } => None,
            RadiusLaw::ZeroAtom { inner, .. } => inner.support_max(),
        }
    }

    /// Radii at which the tail function is not smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            RadiusLaw::Fixed { radius } => vec![*radius],
            RadiusLaw::Uniform { min, max } => vec![*min, *max],
            RadiusLaw::Exponential { .. } => Vec::new(),
            RadiusLaw::Pareto { scale, .. } => vec![*scale],
            RadiusLaw::ZeroAtom { inner, .. } => inner.breakpoints(),
        }
    }

    /// Smallest `t` with `P[ρ > t] <= p`, for `p` in `(0, 1)`.
    pub fn upper_quantile(&self, p: f64) -> f64 {
        match self {
            RadiusLaw::Fixed { radius } => *radius,
            RadiusLaw::Uniform { min, max } => max - p * (max - min),
            RadiusLaw::Exponential { mean } => -mean * p.ln(),
            RadiusLaw::Pareto {
                tail_exponent,
                scale,
            } => scale * p.powf(-1.0 / tail_exponent),
            RadiusLaw::ZeroAtom { p0, inner } => {
                if p >= 1.0 - p0 {
                    0.0
                } else {
                    inner.upper_quantile(p / (1.0 - p0))
                }
            }
        }
    }

    /// `Σ_{n >= n_from} s_n² P[ρ > s_n]` with `s_n = base · 10^n`.
    ///
    /// This is the series controlling the Markov bound of the long-range
    /// reach events along a decade ladder; it is finite iff `E[ρ²] < ∞`.
    pub fn decade_tail_series(&self, base: f64, n_from: i32) -> f64 {
        match self {
            RadiusLaw::Pareto {
                tail_exponent,
                scale,
            } => {
                let mut sum = 0.0;
                let mut n = n_from;
                loop {
                    let s = base * 10f64.powi(n);
                    if s >= *scale {
                        if *tail_exponent <= 2.0 {
                            return f64::INFINITY;
                        }
                        let first = s * s * pareto_tail(*tail_exponent, *scale, s);
                        let ratio = 10f64.powf(2.0 - tail_exponent);
                        return sum + first / (1.0 - ratio);
                    }
                    sum += s * s;
                    n += 1;
                }
            }
            RadiusLaw::ZeroAtom { p0, inner } => (1.0 - p0) * inner.decade_tail_series(base, n_from),
            _ => {
                let mut sum = 0.0;
                for n in n_from.. {
                    let s = base * 10f64.powi(n);
                    let t = self.tail(s);
                    if t == 0.0 || !s.is_finite() {
                        break;
                    }
                    sum += s * s * t;
                }
                sum
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.sample_in(0.0, f64::INFINITY, rng)
    }

    /// Draws `ρ` conditioned on `lo <= ρ < hi`. The interval must carry
    /// positive mass.
    pub fn sample_in<R: Rng + ?Sized>(&self, lo: f64, hi: f64, rng: &mut R) -> f64 {
        let v: f64 = rng.random();
        match self {
            RadiusLaw::Fixed { radius } => *radius,
            RadiusLaw::Uniform { min, max } => {
                let a = lo.max(*min);
                let b = hi.min(*max);
                a + v * (b - a)
            }
            RadiusLaw::Exponential { mean } => {
                let a = lo.max(0.0);
                if hi.is_infinite() {
                    a - mean * (-v).ln_1p()
                } else {
                    let w = (hi - a) / mean;
                    a - mean * (v * (-w).exp_m1()).ln_1p()
                }
            }
            RadiusLaw::Pareto {
                tail_exponent,
                scale,
            } => {
                let a = lo.max(*scale);
                let keep = if hi.is_infinite() {
                    1.0
                } else {
                    1.0 - (a / hi).powf(*tail_exponent)
                };
                let x = a * (1.0 - v * keep).powf(-1.0 / tail_exponent);
                if hi.is_finite() {
                    x.min(hi.next_down())
                } else {
                    x
                }
            }
            RadiusLaw::ZeroAtom { p0, inner } => {
                let zero_mass = if lo <= 0.0 && hi > 0.0 { *p0 } else { 0.0 };
                let inner_mass = (1.0 - p0) * inner.mass(lo, hi);
                if v * (zero_mass + inner_mass) < zero_mass {
                    0.0
                } else {
                    inner.sample_in(lo, hi, rng)
                }
            }
        }
    }

    /// Draws from the size-biased law `ρ μ(dρ) / E[ρ]`.
    pub fn sample_size_biased<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64> {
        let v: f64 = rng.random();
        match self {
            RadiusLaw::Fixed { radius } => Ok(*radius),
            RadiusLaw::Uniform { min, max } => Ok((min * min + v * (max * max - min * min)).sqrt()),
            RadiusLaw::Exponential { mean } => {
                let w: f64 = rng.random();
                Ok(-mean * ((-v).ln_1p() + (-w).ln_1p()))
            }
            RadiusLaw::Pareto {
                tail_exponent,
                scale,
            } => {
                if *tail_exponent <= 1.0 {
                    return Err(Error::Unsupported(
                        "size-biased Pareto law needs tail_exponent > 1".into(),
                    ));
                }
                Ok(scale * (1.0 - v).powf(-1.0 / (tail_exponent - 1.0)))
            }
            RadiusLaw::ZeroAtom { inner, .. } => inner.sample_size_biased(rng),
        }
    }
}

fn uniform_tail(min: f64, max: f64, t: f64) -> f64 {
    if t < min {
        1.0
    } else if t >= max {
        0.0
    } else {
        (max - t) / (max - min)
    }
}

fn pareto_tail(tail_exponent: f64, scale: f64, t: f64) -> f64 {
    if t <= scale {
        1.0
    } else {
        (scale / t).powf(tail_exponent)
    }
}

/// Compact textual form used on the command line:
/// `fixed:R`, `uniform:A,B`, `exponential:M`, `pareto:TAU,XMIN`,
/// `zero:P0/<inner>`.
impl fmt::Display for RadiusLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadiusLaw::Fixed { radius } => write!(f, "fixed:{radius}"),
            RadiusLaw::Uniform { min, max } => write!(f, "uniform:{min},{max}"),
            RadiusLaw::Exponential { mean } => write!(f, "exponential:{mean}"),
            RadiusLaw::Pareto {
                tail_exponent,
                scale,
            } => write!(f, "pareto:{tail_exponent},{scale}"),
            RadiusLaw::ZeroAtom { p0, inner } => write!(f, "zero:{p0}/{inner}"),
        }
    }
}

impl FromStr for RadiusLaw {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| invalid("law", format!("{why} in `{s}`"));
        let (kind, rest) = s.trim().split_once(':').ok_or_else(|| bad("missing `:`"))?;
        let nums = |text: &str, want: usize| -> Result<Vec<f64>> {
            let v = text
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| bad(&e.to_string()))?;
            if v.len() == want {
                Ok(v)
            } else {
                Err(bad(&format!("expected {want} parameter(s)")))
            }
        };
        let law = match kind.trim().to_ascii_lowercase().as_str() {
            "fixed" => RadiusLaw::fixed(nums(rest, 1)?[0]),
            "uniform" => {
                let v = nums(rest, 2)?;
                RadiusLaw::uniform(v[0], v[1])
            }
            "exponential" | "exp" => RadiusLaw::exponential(nums(rest, 1)?[0]),
            "pareto" => {
                let v = nums(rest, 2)?;
                RadiusLaw::pareto(v[0], v[1])
            }
            "zero" => {
                let (p0, inner) = rest.split_once('/').ok_or_else(|| bad("missing `/`"))?;
                RadiusLaw::zero_atom(nums(p0, 1)?[0], inner.parse()?)
            }
            other => return Err(bad(&format!("unknown law `{other}`"))),
        };
        law.validate()?;
        Ok(law)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn moments() {
        assert_eq!(RadiusLaw::fixed(1.0).moment(5), 1.0);
        assert_eq!(RadiusLaw::pareto(3.0, 1.0).moment(2), 3.0);
        assert_eq!(RadiusLaw::pareto(3.0, 1.0).moment(1), 1.5);
        assert_eq!(RadiusLaw::pareto(2.0, 1.0).moment(2), f64::INFINITY);
        assert_eq!(RadiusLaw::exponential(2.0).moment(3), 48.0);
        assert!((RadiusLaw::uniform(0.0, 3.0).moment(2) - 3.0).abs() < 1e-15);
        assert_eq!(RadiusLaw::zero_atom(0.25, RadiusLaw::fixed(2.0)).moment(2), 3.0);
    }

    #[test]
    fn tails() {
        assert_eq!(RadiusLaw::fixed(1.0).tail(2.0), 0.0);
        assert_eq!(RadiusLaw::fixed(1.0).tail(1.0), 0.0);
        assert_eq!(RadiusLaw::fixed(1.0).tail_ge(1.0), 1.0);
        assert_eq!(RadiusLaw::pareto(3.0, 1.0).tail(2.0), 0.125);
        let mix = RadiusLaw::zero_atom(0.3, RadiusLaw::exponential(1.0));
        assert!((mix.tail(0.0) - 0.7).abs() < 1e-15);
        assert_eq!(RadiusLaw::pareto(3.0, 1.0).tail(0.0), 1.0);
        assert_eq!(mix.atom_at_zero(), 0.3);
    }

    #[test]
    fn validation() {
        assert!(RadiusLaw::pareto(0.0, 1.0).validate().is_err());
        assert!(RadiusLaw::pareto(-1.0, 1.0).validate().is_err());
        assert!(RadiusLaw::fixed(0.0).validate().is_err());
        assert!(RadiusLaw::zero_atom(1.0, RadiusLaw::fixed(1.0)).validate().is_err());
        assert!(RadiusLaw::uniform(2.0, 1.0).validate().is_err());
        assert!(RadiusLaw::uniform(0.0, 1.0).validate().is_ok());
    }

    #[test]
    fn parse_and_display() {
        for text in ["fixed:1", "uniform:0.5,1.5", "exponential:2", "pareto:3,1", "zero:0.5/pareto:3,1"] {
            let law: RadiusLaw = text.parse().unwrap();
            assert_eq!(law.to_string().parse::<RadiusLaw>().unwrap(), law);
        }
        assert!("pareto:-1,1".parse::<RadiusLaw>().is_err());
        assert!("cauchy:1".parse::<RadiusLaw>().is_err());
        assert!("fixed".parse::<RadiusLaw>().is_err());
    }

    #[test]
    fn conditional_samples_stay_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let laws = [
            RadiusLaw::uniform(0.5, 3.0),
            RadiusLaw::exponential(1.0),
            RadiusLaw::pareto(2.5, 1.0),
            RadiusLaw::zero_atom(0.4, RadiusLaw::pareto(3.0, 0.5)),
        ];
        for law in &laws {
            for &(lo, hi) in &[(0.0, f64::INFINITY), (1.0, 2.0), (2.0, f64::INFINITY)] {
                if law.mass(lo, hi) == 0.0 {
                    continue;
                }
                for _ in 0..2000 {
                    let x = law.sample_in(lo, hi, &mut rng);
                    assert!(x >= lo && x < hi, "{law} gave {x} outside [{lo}, {hi})");
                }
            }
        }
    }

    #[test]
    fn decade_series_pareto_closed_form() {
        // Σ_{n>=0} (10^n)^2 (10^n)^-3 = Σ 10^-n = 10/9.
        let s = RadiusLaw::pareto(3.0, 1.0).decade_tail_series(1.0, 0);
        assert!((s - 10.0 / 9.0).abs() < 1e-14);
        let brute: f64 = (0..60).map(|n| {
            let s = 8.0 * 10f64.powi(n);
            s * s * RadiusLaw::pareto(3.0, 1.0).tail(s)
        })
        .sum();
        assert!((RadiusLaw::pareto(3.0, 1.0).decade_tail_series(8.0, 0) - brute).abs() < 1e-12);
        assert_eq!(RadiusLaw::pareto(2.0, 1.0).decade_tail_series(1.0, 0), f64::INFINITY);
        assert_eq!(RadiusLaw::fixed(1.0).decade_tail_series(8.0, 1), 0.0);
        assert!((RadiusLaw::fixed(1.0).decade_tail_series(0.05, 0) - (0.0025 + 0.25)).abs() < 1e-15);
    }
}
