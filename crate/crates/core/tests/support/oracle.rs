// Brute-force reference implementation of the division rule, kept
// deliberately naive: sort, then try every prefix/suffix length in turn.
#![allow(dead_code)]

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    /// (dev names, train names, test names), each in sorted order.
    Split(Vec<String>, Vec<String>, Vec<String>),
    Infeasible,
    Empty,
}

/// `fraction` is (numerator, denominator).
pub fn reference_split(docs: &[(String, u64)], dev: (u64, u64), test: (u64, u64)) -> Outcome {
    let mut docs = docs.to_vec();
    docs.sort_by(|a, b| a.0.as_bytes().cmp(b.0.as_bytes()));
    let total: u128 = docs.iter().map(|d| d.1 as u128).sum();
    if total == 0 {
        return Outcome::Empty;
    }
    let n = docs.len();
    let over = |words: u128, (num, den): (u64, u64)| words * den as u128 > num as u128 * total;

    let mut k_dev = n;
    for k in 1..=n {
        let words: u128 = docs[..k].iter().map(|d| d.1 as u128).sum();
        if over(words, dev) {
            k_dev = k;
            break;
        }
    }
    let mut k_test = n;
    for k in 1..=n {
        let words: u128 = docs[n - k..].iter().map(|d| d.1 as u128).sum();
        if over(words, test) {
            k_test = k;
            break;
        }
    }
    if k_dev + k_test >= n {
        return Outcome::Infeasible;
    }
    let names = |s: &[(String, u64)]| s.iter().map(|d| d.0.clone()).collect::<Vec<_>>();
    Outcome::Split(names(&docs[..k_dev]), names(&docs[k_dev..n - k_test]), names(&docs[n - k_test..]))
}
