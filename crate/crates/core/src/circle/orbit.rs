use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::angle::{Angle, Degree};
use crate::arith;

/// Minimal `(preperiod, period)` of a forward orbit:
/// `σ^(preperiod+period)(a) = σ^preperiod(a)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrbitShape {
    pub preperiod: u64,
    pub period: u64,
}

impl OrbitShape {
    /// Number of distinct points on the orbit.
    pub fn orbit_len(&self) -> u64 {
        self.preperiod + self.period
    }
}

/// Preperiod of `n/q` together with the denominator of its periodic part.
///
/// The reduced denominator of `σ(m/q)` is `q / gcd(q, d)`, so the orbit is
/// strictly preperiodic exactly while the denominator shares a factor with `d`.
fn preperiod_and_core(q: &BigInt, d: Degree) -> (u64, BigInt) {
    let d = BigInt::from(d.get());
    let mut q = q.clone();
    let mut steps = 0;
    loop {
        let g = q.gcd(&d);
        if g.is_one() {
            return (steps, q);
        }
        q /= g;
        steps += 1;
    }
}

fn small_modulus(q: &BigInt) -> Option<u64> {
    q.to_u64().filter(|q| *q <= arith::FACTOR_LIMIT)
}

/// Period of a purely periodic point by direct iteration.
fn iterate_period(x: &Angle, d: Degree) -> u64 {
    let mut y = x.sigma(d);
    let mut k = 1;
    while &y != x {
        y = y.sigma(d);
        k += 1;
    }
    k
}

/// Minimal preperiod and period of the `σ_d`-orbit of `a`.
pub fn orbit_shape(a: &Angle, d: Degree) -> OrbitShape {
    let (preperiod, core) = preperiod_and_core(a.denom(), d);
    let period = match small_modulus(&core) {
        Some(q) => arith::multiplicative_order(d.get() as u64 % q.max(1), q),
        None => iterate_period(&a.sigma_iter(d, preperiod), d),
    };
    OrbitShape { preperiod, period }
}

/// Smallest `n ≥ 0` with `σ_d^n(from) = to`, or `None` if `to` is not on the
/// forward orbit of `from`.
pub fn orbit_reaches(from: &Angle, to: &Angle, d: Degree) -> Option<u64> {
    let (preperiod, core) = preperiod_and_core(from.denom(), d);
    let mut x = from.clone();
    for n in 0..preperiod {
        if &x == to {
            return Some(n);
        }
        x = x.sigma(d);
    }
    // x is now purely periodic with denominator `core`.
    if to.denom() != &core {
        return None;
    }
    match small_modulus(&core) {
        Some(1) => (to == &x).then_some(preperiod),
        Some(q) => {
            let base = d.get() as u64 % q;
            let order = arith::multiplicative_order(base, q);
            let xn = x.numer().to_u64()?;
            let tn = to.numer().to_u64()?;
            let target = arith::mul_mod(tn, arith::inverse_mod(xn, q)?, q);
            arith::discrete_log(base, target, q, order).map(|j| preperiod + j)
        }
        None => {
            let start = x.clone();
            let mut n = preperiod;
            loop {
                if &x == to {
                    return Some(n);
                }
                x = x.sigma(d);
                n += 1;
                if x == start {
                    return None;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn deg(d: u32) -> Degree {
        Degree::new(d).unwrap()
    }

    /// Brute force: iterate until an angle repeats.
    fn naive_shape(a: &Angle, d: Degree) -> OrbitShape {
        let mut seen = HashMap::new();
        let mut x = a.clone();
        let mut n = 0u64;
        loop {
            if let Some(&first) = seen.get(&x) {
                return OrbitShape {
                    preperiod: first,
                    period: n - first,
                };
            }
            seen.insert(x.clone(), n);
            x = x.sigma(d);
            n += 1;
        }
    }

    #[test]
    fn shape_examples() {
        let d2 = deg(2);
        let d3 = deg(3);
        assert_eq!(
            orbit_shape(&Angle::frac(1, 2), d2),
            OrbitShape {
                preperiod: 1,
                period: 1
            }
        );
        assert_eq!(
            orbit_shape(&Angle::frac(1, 7), d2),
            OrbitShape {
                preperiod: 0,
                period: 3
            }
        );
        assert_eq!(
            orbit_shape(&Angle::frac(1, 6), d3),
            OrbitShape {
                preperiod: 1,
                period: 1
            }
        );
        assert_eq!(
            orbit_shape(&Angle::zero(), d3),
            OrbitShape {
                preperiod: 0,
                period: 1
            }
        );
    }

    #[test]
    fn shape_matches_brute_force_for_small_denominators() {
        for d in [2u32, 3, 4, 5, 6] {
            let d = deg(d);
            for q in 1..=300i64 {
                for n in [1i64, 7, q / 2 + 1, q - 1] {
                    let a = Angle::frac(n, q);
                    assert_eq!(orbit_shape(&a, d), naive_shape(&a, d), "{a} d={d}");
                }
            }
        }
    }

    #[test]
    fn period_divides_order_of_coprime_part() {
        for d in [2u32, 3] {
            for q in 1..=1000u64 {
                let mut core = q;
                loop {
                    let g = arith::gcd(core, d as u64);
                    if g == 1 {
                        break;
                    }
                    core /= g;
                }
                // brute-force multiplicative order
                let mut ord = 1u64;
                let mut x = d as u64 % core.max(1);
                while core > 1 && x != 1 {
                    x = x * d as u64 % core;
                    ord += 1;
                }
                let shape = orbit_shape(&Angle::frac(1, q as i64), deg(d));
                assert_eq!(ord % shape.period, 0, "q={q} d={d}");
            }
        }
    }

    #[test]
    fn reaches_matches_brute_force() {
        for d in [2u32, 3] {
            let d = deg(d);
            for q in [7i64, 12, 21, 63, 91, 242] {
                for n in 0..q {
                    let from = Angle::frac(n, q);
                    let shape = naive_shape(&from, d);
                    let orbit: Vec<Angle> = (0..shape.orbit_len())
                        .map(|k| from.sigma_iter(d, k))
                        .collect();
                    for m in 0..q {
                        let to = Angle::frac(m, q);
                        let expected = orbit.iter().position(|x| x == &to).map(|k| k as u64);
                        assert_eq!(orbit_reaches(&from, &to, d), expected, "{from} -> {to}");
                    }
                }
            }
        }
    }

    #[test]
    fn large_prime_denominator() {
        let p = (1i64 << 31) - 1;
        let d = deg(3);
        let a = Angle::frac(123_456_789, p);
        let shape = orbit_shape(&a, d);
        assert_eq!(shape.preperiod, 0);
        assert_eq!(a.sigma_iter(d, shape.period), a);
        let later = a.sigma_iter(d, 1_000_003);
        assert_eq!(orbit_reaches(&a, &later, d), Some(1_000_003 % shape.period));
    }
}
