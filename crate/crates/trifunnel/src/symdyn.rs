//! Cutting-word enumeration for the 3-letter subshift with no adjacent
//! repeats.
//!
//! Periodic points of the shift are cyclic sequences over {1,2,3} in which no
//! two cyclically adjacent symbols agree; there are exactly `4^{m/2} + 2` of
//! them for every even period `m`. They are produced grouped into rotation
//! orbits, each represented by its lexicographically minimal rotation.

use std::collections::BTreeMap;

use crate::{hyperbolic::check_admissible, Error, Result};

/// Hard ceiling on the period; `4^{m/2}` growth makes larger censuses
/// pointless at f64 working precision.
pub const MAX_PERIOD: usize = 16;

/// One rotation orbit of periodic cutting sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitClass {
    /// Lexicographically minimal rotation, length `m`.
    pub rep: Vec<u8>,
    /// Period as a fixed point of `sigma^m`.
    pub m: usize,
    /// Primitive period; divides `m`, and the orbit has `p` elements.
    pub p: usize,
    /// Sum of the window weights `c` over one period of length `m`: the
    /// number of cyclic positions `j` with `rep[j] != rep[j+2]`.
    pub cweight: u32,
}

/// All fixed points of `sigma^m`, grouped into rotation orbits.
///
/// The total number of sequences, i.e. the sum of orbit sizes `p`, is
/// exactly `4^{m/2} + 2`. Orbits are sorted by representative, so output
/// order is reproducible.
pub fn enumerate_fixed_points(m: usize) -> Result<Vec<OrbitClass>> {
    if m == 0 || m % 2 != 0 {
        return Err(Error::Domain(format!(
            "period must be even and positive, got {m}"
        )));
    }
    if m > MAX_PERIOD {
        return Err(Error::Resource(format!(
            "period {m} exceeds ceiling {MAX_PERIOD}"
        )));
    }
    let mut orbits = Vec::new();
    let mut word = vec![0u8; m];
    // Backtracking over admissible strings only: each position differs from
    // its predecessor, the first symbol is the minimum over the whole word,
    // and the closing symbol differs from the first. This visits
    // 3 * 2^{m-1} nodes instead of 3^m strings.
    fn rec(word: &mut Vec<u8>, pos: usize, m: usize, orbits: &mut Vec<OrbitClass>) {
        if pos == m {
            if word[m - 1] != word[0] && is_min_rotation(word) {
                orbits.push(classify(word));
            }
            return;
        }
        for s in 1..=3u8 {
            if pos == 0 {
                word[0] = s;
                rec(word, 1, m, orbits);
            } else if s != word[pos - 1] && s >= word[0] {
                word[pos] = s;
                rec(word, pos + 1, m, orbits);
            }
        }
    }
    rec(&mut word, 0, m, &mut orbits);
    orbits.sort_by(|a, b| a.rep.cmp(&b.rep));

    let total: usize = orbits.iter().map(|o| o.p).sum();
    let expected = 4usize.pow(m as u32 / 2) + 2;
    if total != expected {
        return Err(Error::Internal(format!(
            "orbit census at m = {m} counted {total} sequences, expected {expected}"
        )));
    }
    Ok(orbits)
}

fn is_min_rotation(w: &[u8]) -> bool {
    let m = w.len();
    'rot: for r in 1..m {
        for i in 0..m {
            match w[(i + r) % m].cmp(&w[i]) {
                std::cmp::Ordering::Less => return false,
                std::cmp::Ordering::Greater => continue 'rot,
                std::cmp::Ordering::Equal => {}
            }
        }
        // Equal rotation: w is non-primitive; still minimal.
    }
    true
}

fn classify(w: &[u8]) -> OrbitClass {
    let m = w.len();
    let mut p = m;
    for cand in 1..m {
        if m % cand == 0 && (0..m).all(|i| w[i] == w[(i + cand) % m]) {
            p = cand;
            break;
        }
    }
    let cweight = (0..m).filter(|&j| w[j] != w[(j + 2) % m]).count() as u32;
    OrbitClass {
        rep: w.to_vec(),
        m,
        p,
        cweight,
    }
}

/// Number of cyclic windows `(xi_j, xi_{j+1}, xi_{j+2})` with `xi_j != xi_{j+2}`.
pub fn c_weight(word: &[u8]) -> Result<u32> {
    check_admissible(word)?;
    let m = word.len();
    Ok((0..m).filter(|&j| word[j] != word[(j + 2) % m]).count() as u32)
}

/// Histogram of `c_weight` over all fixed points of `sigma^m`; counts sum to
/// `4^{m/2} + 2`.
pub fn cweight_histogram(m: usize) -> Result<BTreeMap<u32, u64>> {
    let orbits = enumerate_fixed_points(m)?;
    let mut hist = BTreeMap::new();
    for o in &orbits {
        *hist.entry(o.cweight).or_insert(0u64) += o.p as u64;
    }
    Ok(hist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn counts_match_formula() {
        for m in [2usize, 4, 6, 8, 10, 12] {
            let orbits = enumerate_fixed_points(m).unwrap();
            let total: usize = orbits.iter().map(|o| o.p).sum();
            assert_eq!(total, 4usize.pow(m as u32 / 2) + 2);
        }
        // m = 2: 6 sequences in 3 orbits of size 2
        let o2 = enumerate_fixed_points(2).unwrap();
        assert_eq!(o2.len(), 3);
        assert!(o2.iter().all(|o| o.p == 2));
    }

    #[test]
    fn count_recurrence() {
        // p_n = 3 * 4^{n-1} + p_{n-1}, p_1 = 6
        let mut prev = 6u64;
        for n in 2..=7usize {
            let total: u64 = enumerate_fixed_points(2 * n)
                .unwrap()
                .iter()
                .map(|o| o.p as u64)
                .sum();
            assert_eq!(total, 3 * 4u64.pow(n as u32 - 1) + prev);
            prev = total;
        }
    }

    #[test]
    fn rejects_bad_period() {
        assert!(matches!(enumerate_fixed_points(3), Err(Error::Domain(_))));
        assert!(matches!(enumerate_fixed_points(0), Err(Error::Domain(_))));
        assert!(matches!(
            enumerate_fixed_points(18),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn orbit_invariants() {
        for m in [4usize, 6, 10] {
            for o in enumerate_fixed_points(m).unwrap() {
                assert_eq!(o.rep.len(), m);
                assert_eq!(m % o.p, 0);
                assert!(is_min_rotation(&o.rep));
                assert!((0..m).all(|i| o.rep[i] == o.rep[(i + o.p) % m]));
                assert_eq!(o.cweight, c_weight(&o.rep).unwrap());
            }
        }
    }

    #[test]
    fn cweight_examples() {
        assert_eq!(c_weight(&[1, 2, 1, 2, 1, 2]).unwrap(), 0);
        assert_eq!(c_weight(&[1, 2, 3, 1, 2, 3]).unwrap(), 6);
        assert_eq!(c_weight(&[3, 2, 1, 2, 1, 2]).unwrap(), 2);
        assert!(c_weight(&[1, 1, 2]).is_err());
    }

    #[test]
    fn histograms() {
        let h2 = cweight_histogram(2).unwrap();
        assert_eq!(h2, BTreeMap::from([(0, 6)]));
        let h6 = cweight_histogram(6).unwrap();
        assert_eq!(h6, BTreeMap::from([(0, 6), (2, 36), (4, 18), (6, 6)]));
        let h8 = cweight_histogram(8).unwrap();
        assert_eq!(h8, BTreeMap::from([(0, 6), (2, 72), (4, 108), (6, 72)]));
    }

    fn arb_word(max_half: usize) -> impl Strategy<Value = Vec<u8>> {
        (1..=max_half)
            .prop_flat_map(|h| proptest::collection::vec(0u8..3, 2 * h))
            .prop_map(|steps| {
                // Random admissible cyclic word: a walk on K3 that closes up.
                let mut w = Vec::with_capacity(steps.len());
                let mut cur = 1u8;
                w.push(cur);
                for (i, &st) in steps.iter().enumerate().skip(1) {
                    let mut choices: Vec<u8> = (1..=3).filter(|&s| s != cur).collect();
                    if i == steps.len() - 1 {
                        choices.retain(|&s| s != w[0]);
                    }
                    cur = choices[st as usize % choices.len()];
                    w.push(cur);
                }
                w
            })
    }

    proptest! {
        #[test]
        fn cweight_rotation_invariant(w in arb_word(6), r in 0usize..12) {
            let base = c_weight(&w).unwrap();
            let r = r % w.len();
            let rot: Vec<u8> = (0..w.len()).map(|i| w[(i + r) % w.len()]).collect();
            prop_assert_eq!(base, c_weight(&rot).unwrap());
        }

        #[test]
        fn cweight_permutation_invariant(w in arb_word(6), perm in 0usize..6) {
            let perms: [[u8; 3]; 6] = [
                [1, 2, 3], [1, 3, 2], [2, 1, 3], [2, 3, 1], [3, 1, 2], [3, 2, 1],
            ];
            let p = perms[perm];
            let mapped: Vec<u8> = w.iter().map(|&s| p[s as usize - 1]).collect();
            prop_assert_eq!(c_weight(&w).unwrap(), c_weight(&mapped).unwrap());
        }
    }
}
