//! Budgeted enumeration of coordinate tuples in order of increasing size.

/// Outcome of a bounded search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Search<T> {
    Found(T),
    /// Every tuple was visited without success.
    Exhausted,
    /// The node budget ran out first.
    OutOfBudget,
}

impl<T> Search<T> {
    pub fn found(self) -> Option<T> {
        match self {
            Search::Found(t) => Some(t),
            _ => None,
        }
    }
}

/// Visits every tuple in `[0, len)^k`, shell by shell: all tuples with
/// maximum entry `s` come before those with maximum `s + 1`.
pub fn shells<T>(k: usize, len: usize, budget: u64, mut visit: impl FnMut(&[usize]) -> Option<T>) -> Search<T> {
    let mut spent = 0u64;
    if k == 0 {
        return match visit(&[]) {
            Some(t) => Search::Found(t),
            None => Search::Exhausted,
        };
    }
    let mut idx = vec![0usize; k];
    for s in 0..len {
        // j is the first position holding the shell value s
        for j in 0..k {
            if s == 0 && j > 0 {
                break;
            }
            // positions < j range over [0, s), position j is s, the rest over [0, s]
            for (i, x) in idx.iter_mut().enumerate() {
                *x = if i == j { s } else { 0 };
            }
            if j > 0 && s == 0 {
                continue;
            }
            loop {
                spent += 1;
                if spent > budget {
                    return Search::OutOfBudget;
                }
                if let Some(t) = visit(&idx) {
                    return Search::Found(t);
                }
                // odometer over the free positions
                let mut i = 0;
                loop {
                    if i == k {
                        break;
                    }
                    if i == j {
                        i += 1;
                        continue;
                    }
                    let limit = if i < j { s } else { s + 1 };
                    idx[i] += 1;
                    if idx[i] < limit {
                        break;
                    }
                    idx[i] = 0;
                    i += 1;
                }
                if i == k {
                    break;
                }
            }
        }
    }
    Search::Exhausted
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn shells_cover_each_tuple_once() {
        let mut seen = HashSet::new();
        let mut last_max = 0;
        let r: Search<()> = shells(3, 4, u64::MAX, |t| {
            let m = *t.iter().max().unwrap();
            assert!(m >= last_max);
            last_max = m;
            assert!(seen.insert(t.to_vec()));
            None
        });
        assert_eq!(r, Search::Exhausted);
        assert_eq!(seen.len(), 64);
        assert_eq!(shells(2, 10, 5, |_| None::<()>), Search::OutOfBudget);
    }
}
