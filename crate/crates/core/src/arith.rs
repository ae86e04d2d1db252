//! Word-size number theory used to keep orbit computations fast on large
//! denominators: multiplicative orders and discrete logarithms modulo `q`.

/// Largest modulus for which [`multiplicative_order`] is computed by
/// factoring instead of iterating. Trial division up to `sqrt(2^44)`.
pub const FACTOR_LIMIT: u64 = 1 << 44;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inverse_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Prime factorization by trial division, smallest prime first.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Euler's totient together with its prime factorization.
fn totient_factored(q: u64) -> (u64, Vec<(u64, u32)>) {
    let mut phi = 1u64;
    let mut primes: Vec<(u64, u32)> = Vec::new();
    fn add(p: u64, e: u32, primes: &mut Vec<(u64, u32)>) {
        if e == 0 {
            return;
        }
        match primes.iter_mut().find(|(r, _)| *r == p) {
            Some(slot) => slot.1 += e,
            None => primes.push((p, e)),
        }
    }
    for (p, e) in factorize(q) {
        phi *= (p - 1) * p.pow(e - 1);
        add(p, e - 1, &mut primes);
        for (r, f) in factorize(p - 1) {
            add(r, f, &mut primes);
        }
    }
    primes.sort_unstable();
    (phi, primes)
}

/// Multiplicative order of `base` modulo `q`. Requires `gcd(base, q) = 1`;
/// returns 1 for `q = 1`.
pub fn multiplicative_order(base: u64, q: u64) -> u64 {
    if q == 1 {
        return 1;
    }
    debug_assert_eq!(gcd(base % q, q), 1);
    if q > FACTOR_LIMIT {
        let b = base % q;
        let mut x = b;
        let mut k = 1u64;
        while x != 1 {
            x = mul_mod(x, b, q);
            k += 1;
        }
        return k;
    }
    let (phi, primes) = totient_factored(q);
    let mut order = phi;
    for (p, _) in primes {
        while order % p == 0 && pow_mod(base, order / p, q) == 1 {
            order /= p;
        }
    }
    order
}

/// Smallest `j` in `[0, order)` with `base^j = target (mod q)`, by
/// baby-step giant-step. `order` must be the multiplicative order of `base`.
pub fn discrete_log(base: u64, target: u64, q: u64, order: u64) -> Option<u64> {
    use std::collections::HashMap;
    if q == 1 {
        return Some(0);
    }
    let target = target % q;
    let m = (order as f64).sqrt().ceil() as u64 + 1;
    let mut baby: HashMap<u64, u64> = HashMap::with_capacity(m as usize);
    let mut x = 1 % q;
    for i in 0..m {
        baby.entry(x).or_insert(i);
        x = mul_mod(x, base, q);
    }
    // base^m, inverted
    let giant = inverse_mod(pow_mod(base, m, q), q)?;
    let mut gamma = target;
    for k in 0..=m {
        if let Some(&i) = baby.get(&gamma) {
            let j = k * m + i;
            if j < order {
                return Some(j);
            }
        }
        gamma = mul_mod(gamma, giant, q);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_order(b: u64, q: u64) -> u64 {
        let mut x = b % q;
        let mut k = 1;
        while x != 1 % q {
            x = mul_mod(x, b, q);
            k += 1;
        }
        k
    }

    #[test]
    fn order_matches_naive() {
        for q in 2..400u64 {
            for b in [2u64, 3, 5, 7] {
                if gcd(b, q) == 1 {
                    assert_eq!(multiplicative_order(b, q), naive_order(b, q), "b={b} q={q}");
                }
            }
        }
    }

    #[test]
    fn mersenne_prime_order() {
        // 2^31 - 1 is prime; 2 has order 31 there.
        assert_eq!(multiplicative_order(2, (1 << 31) - 1), 31);
        let ord3 = multiplicative_order(3, (1 << 31) - 1);
        assert_eq!(pow_mod(3, ord3, (1 << 31) - 1), 1);
        assert_eq!(((1u64 << 31) - 2) % ord3, 0);
    }

    #[test]
    fn discrete_log_recovers_exponent() {
        let q = 1009;
        let ord = multiplicative_order(3, q);
        for j in 0..ord {
            let t = pow_mod(3, j, q);
            assert_eq!(discrete_log(3, t, q, ord), Some(j));
        }
        // 3 generates a proper subgroup mod 13 (order 3), so 2 is unreachable
        assert_eq!(discrete_log(3, 2, 13, multiplicative_order(3, 13)), None);
    }

    #[test]
    fn inverse() {
        assert_eq!(inverse_mod(3, 7), Some(5));
        assert_eq!(inverse_mod(6, 9), None);
    }
}
