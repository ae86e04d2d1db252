//! Eventually periodic words `prefix · cycle^∞` in canonical (minimal) form.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EventualWord<T> {
    prefix: Vec<T>,
    cycle: Vec<T>,
}

impl<T: Clone + Eq> EventualWord<T> {
    /// Canonical word from the first `preperiod + period` letters of a
    /// sequence known to satisfy `w[j + period] = w[j]` for `j ≥ preperiod`.
    pub fn from_prefix(letters: &[T], preperiod: usize, period: usize) -> Self {
        assert!(period >= 1 && letters.len() >= preperiod + period);
        let block = &letters[preperiod..preperiod + period];
        let minimal = (1..=period)
            .filter(|p| period.is_multiple_of(*p))
            .find(|&p| (p..period).all(|i| block[i] == block[i - p]))
            .unwrap_or(period);
        let mut word = EventualWord {
            prefix: letters[..preperiod].to_vec(),
            cycle: block[..minimal].to_vec(),
        };
        while word.prefix.last().is_some() && word.prefix.last() == word.cycle.last() {
            word.prefix.pop();
            word.cycle.rotate_right(1);
        }
        word
    }

    /// The word `s · self`, kept canonical.
    pub fn prepend(&self, s: T) -> Self {
        if self.prefix.is_empty() && self.cycle.last() == Some(&s) {
            let mut cycle = self.cycle.clone();
            cycle.rotate_right(1);
            return EventualWord {
                prefix: Vec::new(),
                cycle,
            };
        }
        let mut prefix = Vec::with_capacity(self.prefix.len() + 1);
        prefix.push(s);
        prefix.extend_from_slice(&self.prefix);
        EventualWord {
            prefix,
            cycle: self.cycle.clone(),
        }
    }

    /// Periodic from index 0.
    pub fn is_periodic(&self) -> bool {
        self.prefix.is_empty()
    }

    pub fn preperiod(&self) -> usize {
        self.prefix.len()
    }

    pub fn period(&self) -> usize {
        self.cycle.len()
    }

    pub fn prefix(&self) -> &[T] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[T] {
        &self.cycle
    }

    pub fn letter(&self, j: usize) -> &T {
        if j < self.prefix.len() {
            &self.prefix[j]
        } else {
            &self.cycle[(j - self.prefix.len()) % self.cycle.len()]
        }
    }

    pub fn take(&self, n: usize) -> Vec<T> {
        (0..n).map(|j| self.letter(j).clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_examples() {
        // L1 L1 L1 L2 L1 L2 ... : preperiod 2, period 2
        let w = EventualWord::from_prefix(&[1, 1, 1, 2], 2, 2);
        assert_eq!((w.preperiod(), w.period()), (2, 2));
        let w = EventualWord::from_prefix(&[3, 1, 2, 1, 2], 1, 4);
        assert_eq!((w.prefix(), w.cycle()), (&[3][..], &[1, 2][..]));
        let w = EventualWord::from_prefix(&[2, 1, 2], 1, 2);
        assert!(w.is_periodic());
        assert_eq!(w.cycle(), &[2, 1]);
    }

    proptest! {
        #[test]
        fn prepend_matches_recanonicalization(
            prefix in proptest::collection::vec(0u8..3, 0..5),
            cycle in proptest::collection::vec(0u8..3, 1..5),
            s in 0u8..3,
        ) {
            let mut letters = prefix.clone();
            letters.extend(&cycle);
            let w = EventualWord::from_prefix(&letters, prefix.len(), cycle.len());
            let mut longer = vec![s];
            longer.extend(&letters);
            let direct = EventualWord::from_prefix(&longer, prefix.len() + 1, cycle.len());
            prop_assert_eq!(w.prepend(s), direct.clone());
            // canonical forms agree on letters
            for j in 0..20 {
                let expect = if j < longer.len() { longer[j] } else { cycle[(j - 1 - prefix.len()) % cycle.len()] };
                prop_assert_eq!(*direct.letter(j), expect);
            }
        }
    }
}
