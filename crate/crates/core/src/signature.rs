//! Integer signatures `(α₁,…,αₙ)` of generalized IW-contractions.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Signature(pub Vec<i64>);

impl Signature {
    pub fn new(exponents: Vec<i64>) -> Self {
        Signature(exponents)
    }

    pub fn zero(n: usize) -> Self {
        Signature(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponents(&self) -> &[i64] {
        &self.0
    }

    pub fn scaled(&self, k: i64) -> Signature {
        Signature(self.0.iter().map(|a| a * k).collect())
    }

    /// Sorted non-increasingly and divided by the gcd of the nonzero entries.
    pub fn normalized(&self) -> Signature {
        let mut v = self.0.clone();
        v.sort_unstable_by(|a, b| b.cmp(a));
        let g = v.iter().fold(0i64, |g, &a| g.gcd(&a));
        if g > 1 {
            for a in &mut v {
                *a /= g;
            }
        }
        Signature(v)
    }

    pub fn is_normalized(&self) -> bool {
        *self == self.normalized()
    }

    /// Zeros and ones only, up to rescaling: a simple IW-contraction.
    pub fn is_simple(&self) -> bool {
        self.normalized().0.iter().all(|&a| a == 0 || a == 1)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&a| a >= 0)
    }

    /// All distinct orderings of the entries, in lexicographic order.
    pub fn permutations(&self) -> Vec<Signature> {
        let mut v = self.0.clone();
        v.sort_unstable();
        let mut out = vec![Signature(v.clone())];
        while next_permutation(&mut v) {
            out.push(Signature(v.clone()));
        }
        out
    }
}

fn next_permutation(v: &mut [i64]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Minimality order: compare the normalized forms lexicographically.
pub fn signature_cmp(a: &Signature, b: &Signature) -> Ordering {
    a.normalized().0.cmp(&b.normalized().0)
}

/// All normalized nonnegative `n`-tuples with entries at most `max_exp`,
/// ascending in the minimality order.
pub fn enumerate_signatures(n: usize, max_exp: i64) -> Vec<Signature> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(n: usize, cap: i64, cur: &mut Vec<i64>, out: &mut Vec<Signature>) {
        if cur.len() == n {
            let s = Signature(cur.clone());
            if s.is_normalized() {
                out.push(s);
            }
            return;
        }
        for a in 0..=cap {
            cur.push(a);
            rec(n, a, cur, out);
            cur.pop();
        }
    }
    if n > 0 && max_exp >= 0 {
        rec(n, max_exp, &mut cur, &mut out);
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for Signature {
    type Err = Error;

    /// Accepts `3,2,1,1`, `(3,2,1,1)` or `3 2 1 1`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let v = inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|p| !p.is_empty())
            .map(|p| p.parse::<i64>().map_err(|_| Error::Format(format!("bad signature entry {p:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        if v.is_empty() {
            return Err(Error::Format("empty signature".into()));
        }
        Ok(Signature(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(v: &[i64]) -> Signature {
        Signature(v.to_vec())
    }

    #[test]
    fn normalization() {
        assert_eq!(sig(&[2, 4, 2, 0]).normalized(), sig(&[2, 1, 1, 0]));
        assert_eq!(sig(&[0, 0]).normalized(), sig(&[0, 0]));
        assert!(sig(&[0, 1, 1, 1]).is_simple());
        assert!(!sig(&[1, 2, 2, 0]).is_simple());
    }

    #[test]
    fn order_examples() {
        assert_eq!(signature_cmp(&sig(&[3, 2, 1, 1]), &sig(&[2, 1, 1, 0])), Ordering::Greater);
    }

    #[test]
    fn binary_tuples() {
        let got = enumerate_signatures(4, 1);
        let want: Vec<Signature> =
            [[0, 0, 0, 0], [1, 0, 0, 0], [1, 1, 0, 0], [1, 1, 1, 0], [1, 1, 1, 1]].iter().map(|v| sig(v)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn three_two_one_one_after_all_small_tuples() {
        let all = enumerate_signatures(4, 3);
        let pos = all.iter().position(|s| *s == sig(&[3, 2, 1, 1])).unwrap();
        for (i, s) in all.iter().enumerate() {
            if s.0.iter().all(|&a| a <= 2) {
                assert!(i < pos, "{s}");
            }
        }
        assert!(all.windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn permutations_are_distinct() {
        let p = sig(&[2, 1, 1, 0]).permutations();
        assert_eq!(p.len(), 12);
        assert_eq!(p[0], sig(&[0, 1, 1, 2]));
    }

    #[test]
    fn parse_forms() {
        assert_eq!("3,2,1,1".parse::<Signature>().unwrap(), sig(&[3, 2, 1, 1]));
        assert_eq!("(1, 1, 2)".parse::<Signature>().unwrap(), sig(&[1, 1, 2]));
        assert!("1,x".parse::<Signature>().is_err());
    }
}
