use std::collections::BTreeSet;

/// Incremental ε-density tracker for points `k/D` of the circle.
///
/// Keeps the points in order together with the number of circular gaps of
/// length at least `ε`; the point set is ε-dense when that count is zero,
/// i.e. when every open arc of length `ε` contains a point.
#[derive(Clone, Debug)]
pub struct EpsilonCover {
    denom: u64,
    eps: (u128, u128),
    points: BTreeSet<u64>,
    bad: usize,
}

impl EpsilonCover {
    /// `eps = (num, den)` stands for `num/den`.
    pub fn new(denom: u64, eps: (u128, u128)) -> Self {
        EpsilonCover {
            denom,
            eps,
            points: BTreeSet::new(),
            bad: 0,
        }
    }

    /// Gap `g/D ≥ ε`.
    fn is_bad(&self, gap: u64) -> bool {
        gap as u128 * self.eps.1 >= self.eps.0 * self.denom as u128
    }

    pub fn insert(&mut self, k: u64) {
        let k = k % self.denom;
        if self.points.contains(&k) {
            return;
        }
        if self.points.is_empty() {
            self.points.insert(k);
            self.bad = usize::from(self.is_bad(self.denom));
            return;
        }
        let d = self.denom;
        let pred = self
            .points
            .range(..k)
            .next_back()
            .or_else(|| self.points.iter().next_back())
            .copied()
            .expect("non-empty");
        let succ = self
            .points
            .range(k..)
            .next()
            .or_else(|| self.points.iter().next())
            .copied()
            .expect("non-empty");
        let span = |a: u64, b: u64| if b > a { b - a } else { b + d - a };
        // A single point: its gap wraps the whole circle.
        let old = if self.points.len() == 1 {
            d
        } else {
            span(pred, succ)
        };
        self.bad -= usize::from(self.is_bad(old));
        self.bad += usize::from(self.is_bad(span(pred, k)));
        self.bad += usize::from(self.is_bad(span(k, succ)));
        self.points.insert(k);
    }

    pub fn is_dense(&self) -> bool {
        !self.points.is_empty() && self.bad == 0
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// First `t ≤ horizon` such that `{x, σ(x), …, σ^t(x)}` is ε-dense, where
/// `x = start/denom` and `σ` multiplies numerators by `d`.
pub fn covering_time(
    start: u64,
    denom: u64,
    d: u64,
    eps: (u128, u128),
    horizon: u64,
) -> Option<u64> {
    let mut cover = EpsilonCover::new(denom, eps);
    let mut x = start % denom;
    for t in 0..=horizon {
        cover.insert(x);
        if cover.is_dense() {
            return Some(t);
        }
        x = ((x as u128 * d as u128) % denom as u128) as u64;
    }
    None
}

/// Largest circular gap between consecutive points `k/D`, in units of
/// `1/D`, by sorting. Used to re-verify density claims.
pub fn max_gap(points: &[u64], denom: u64) -> u64 {
    let mut v: Vec<u64> = points.iter().map(|k| k % denom).collect();
    v.sort_unstable();
    v.dedup();
    match v.len() {
        0 | 1 => denom,
        n => {
            let inner = v.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0);
            inner.max(v[0] + denom - v[n - 1])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn tenths_grid() {
        let mut c = EpsilonCover::new(10, (1, 5));
        for k in [0, 2, 4, 6] {
            c.insert(k);
            assert!(!c.is_dense());
        }
        c.insert(8);
        // Gaps of exactly 1/5 leave open arcs of length 1/5 empty.
        assert!(!c.is_dense());
        c.insert(1);
        c.insert(3);
        c.insert(5);
        c.insert(7);
        c.insert(9);
        assert!(c.is_dense());
    }

    proptest! {
        #[test]
        fn incremental_matches_rescan(
            start in 1u64..1000,
            den_num in 1u128..20,
        ) {
            let denom = 1009;
            let eps = (den_num, 100u128);
            let horizon = 400;
            let t = covering_time(start, denom, 3, eps, horizon);
            let orbit: Vec<u64> = (0..=horizon)
                .scan(start, |x, _| { let y = *x; *x = *x * 3 % denom; Some(y) })
                .collect();
            let dense_at = |t: usize| (max_gap(&orbit[..=t], denom) as u128) * eps.1 < eps.0 * denom as u128;
            let oracle = (0..=horizon as usize).find(|&t| dense_at(t)).map(|t| t as u64);
            prop_assert_eq!(t, oracle);
        }
    }
}
