//! Krawtchouk polynomials, the MacWilliams transform and orthogonal-array
//! strength.

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::word::{BinaryCode, DistanceDistribution};

pub type Rational = Ratio<i128>;

/// Binary Krawtchouk polynomial `P_j(i)` for length `n`.
pub fn krawtchouk(n: usize, j: usize, i: usize) -> Result<i128> {
    if j > n || i > n {
        return Err(Error::OutOfRange(format!("krawtchouk indices j={j}, i={i} for n={n}")));
    }
    Ok(krawtchouk_row(n, i)[j])
}

/// `P_0(i), ..., P_n(i)` by the three-term recurrence
/// `(j+1) P_{j+1} = (n-2i) P_j - (n-j+1) P_{j-1}`.
fn krawtchouk_row(n: usize, i: usize) -> Vec<i128> {
    let n_ = n as i128;
    let x = n_ - 2 * i as i128;
    let mut p = Vec::with_capacity(n + 1);
    p.push(1i128);
    if n >= 1 {
        p.push(x);
    }
    for j in 1..n {
        let j_ = j as i128;
        let next = (x * p[j] - (n_ - j_ + 1) * p[j - 1]) / (j_ + 1);
        p.push(next);
    }
    p
}

/// `A'_0 .. A'_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformVector {
    pub entries: Vec<Rational>,
}

impl TransformVector {
    pub fn sum(&self) -> Rational {
        self.entries.iter().fold(Rational::zero(), |a, b| a + b)
    }

    /// Largest `t` with `A'_1 = ... = A'_t = 0`.
    pub fn strength(&self) -> usize {
        self.entries
            .iter()
            .skip(1)
            .take_while(|a| a.is_zero())
            .count()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|a| *a >= Rational::zero())
    }

    /// Entries as integers when all are integral.
    pub fn to_integers(&self) -> Option<Vec<i128>> {
        self.entries
            .iter()
            .map(|a| a.is_integer().then(|| a.to_integer()))
            .collect()
    }
}

impl std::fmt::Display for TransformVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|a| a.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

fn transform(dist: &[Rational], scale: Rational) -> TransformVector {
    let n = dist.len() - 1;
    let mut out = vec![Rational::zero(); n + 1];
    for (i, a) in dist.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let row = krawtchouk_row(n, i);
        for (k, p) in row.iter().enumerate() {
            out[k] += *a * Rational::from_integer(*p);
        }
    }
    for e in &mut out {
        *e /= scale;
    }
    TransformVector { entries: out }
}

/// `A'_k = (1/|C|) * sum_i A_i P_k(i)` for a distribution summing to `code_size`.
pub fn macwilliams_transform(
    dist: &DistanceDistribution,
    code_size: u64,
) -> Result<TransformVector> {
    if code_size == 0 || dist.total() != code_size {
        return Err(Error::Inconsistent(format!(
            "distribution sums to {}, code size {code_size}",
            dist.total()
        )));
    }
    let a: Vec<Rational> = dist
        .counts
        .iter()
        .map(|&c| Rational::from_integer(c as i128))
        .collect();
    Ok(transform(&a, Rational::from_integer(code_size as i128)))
}

/// Inverse direction: recovers `A_i` from `A'`, given the code size.
pub fn inverse_macwilliams(t: &TransformVector, code_size: u64) -> TransformVector {
    let n = t.entries.len() - 1;
    let scaled: Vec<Rational> = t
        .entries
        .iter()
        .map(|a| *a * Rational::from_integer(code_size as i128))
        .collect();
    transform(&scaled, Rational::from_integer(1i128 << n))
}

/// Distance distribution averaged over all codewords: `A_i = #{(x,y): d=i}/|C|`.
pub fn average_distance_distribution(c: &BinaryCode) -> Result<Vec<Rational>> {
    if c.is_empty() {
        return Err(Error::EmptyCode);
    }
    let m = c.len() as i128;
    Ok(c
        .pair_distance_counts()
        .into_iter()
        .map(|k| Rational::new(k as i128, m))
        .collect())
}

/// MacWilliams transform of the averaged distance distribution of a code.
pub fn code_transform(c: &BinaryCode) -> Result<TransformVector> {
    let a = average_distance_distribution(c)?;
    Ok(transform(&a, Rational::from_integer(c.len() as i128)))
}

/// Orthogonal-array strength via the transform.
pub fn oa_strength(c: &BinaryCode) -> Result<usize> {
    Ok(code_transform(c)?.strength())
}

/// Orthogonal-array strength by counting patterns on every coordinate subset.
pub fn oa_strength_by_projection(c: &BinaryCode) -> Result<usize> {
    if c.is_empty() {
        return Err(Error::EmptyCode);
    }
    let n = c.n();
    let mut t = 0;
    while t < n && balanced(c, t + 1) {
        t += 1;
    }
    Ok(t)
}

fn balanced(c: &BinaryCode, t: usize) -> bool {
    let m = c.len();
    if !m.is_multiple_of(1 << t) {
        return false;
    }
    let lambda = m >> t;
    let n = c.n();
    let mut subset: Vec<usize> = (0..t).collect();
    let mut counts = vec![0usize; 1 << t];
    loop {
        counts.iter_mut().for_each(|x| *x = 0);
        for &w in c.words() {
            let mut key = 0usize;
            for &i in &subset {
                key = (key << 1) | ((w >> (n - 1 - i)) & 1) as usize;
            }
            counts[key] += 1;
        }
        if counts.iter().any(|&k| k != lambda) {
            return false;
        }
        // next t-subset in lexicographic order
        let mut k = t;
        while k > 0 && subset[k - 1] == n - t + k - 1 {
            k -= 1;
        }
        if k == 0 {
            return true;
        }
        subset[k - 1] += 1;
        for j in k..t {
            subset[j] = subset[j - 1] + 1;
        }
    }
}

/// Both sides of the orthogonal-array / perfect-code correspondence for one code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OaVerdict {
    pub n: usize,
    pub extended: bool,
    pub required_strength: usize,
    pub lambda: usize,
    pub strength: usize,
    pub transform: TransformVector,
    /// Strength reaches the required value.
    pub oa_side: bool,
    /// The code is 1-perfect (or extended 1-perfect).
    pub perfect_side: bool,
}

impl OaVerdict {
    pub fn agrees(&self) -> bool {
        self.oa_side == self.perfect_side
    }
}

/// Checks the correspondence for a code of length `2^m - 1` or `2^m` with
/// `2^(2^m - 1 - m)` words.
pub fn oa_perfect_correspondence(c: &BinaryCode) -> Result<OaVerdict> {
    let n = c.n();
    let (m, extended) = if (n + 1).is_power_of_two() && n >= 3 {
        ((n + 1).trailing_zeros() as usize, false)
    } else if n.is_power_of_two() && n >= 4 {
        (n.trailing_zeros() as usize, true)
    } else {
        return Err(Error::OutOfRange(format!("length {n} is neither 2^m-1 nor 2^m")));
    };
    let base = (1usize << m) - 1;
    let t = (base - 1) / 2;
    let lambda = 1usize << ((1usize << (m - 1)) - m);
    if c.len() != lambda << t {
        return Err(Error::OutOfRange(format!(
            "code size {} differs from {}",
            c.len(),
            lambda << t
        )));
    }
    let tv = code_transform(c)?;
    let strength = tv.strength();
    let perfect_side = if extended {
        c.is_extended_perfect()
    } else {
        c.is_perfect()
    };
    Ok(OaVerdict {
        n,
        extended,
        required_strength: t,
        lambda,
        strength,
        transform: tv,
        oa_side: strength >= t,
        perfect_side,
    })
}

/// `A'` expected for any 1-perfect code of length `n = 2^m - 1`:
/// `A'_0 = 1`, `A'_{(n+1)/2} = n`, zero elsewhere.
pub fn perfect_transform(n: usize) -> TransformVector {
    let mut e = vec![Rational::zero(); n + 1];
    e[0] = Rational::one();
    e[n.div_ceil(2)] = Rational::from_integer(n as i128);
    TransformVector { entries: e }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hamming_code;

    fn binom(n: i128, k: i128) -> i128 {
        if k < 0 || k > n {
            return 0;
        }
        (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
    }

    /// Closed form `P_j(i) = sum_s (-1)^s C(i,s) C(n-i, j-s)`.
    fn kraw_sum(n: usize, j: usize, i: usize) -> i128 {
        let (n, j, i) = (n as i128, j as i128, i as i128);
        (0..=j)
            .map(|s| {
                let sign = if s % 2 == 0 { 1 } else { -1 };
                sign * binom(i, s) * binom(n - i, j - s)
            })
            .sum()
    }

    #[test]
    fn krawtchouk_matches_closed_form() {
        for n in 0..=16 {
            for j in 0..=n {
                for i in 0..=n {
                    assert_eq!(krawtchouk(n, j, i).unwrap(), kraw_sum(n, j, i), "n={n} j={j} i={i}");
                }
            }
        }
    }

    #[test]
    fn krawtchouk_examples() {
        assert_eq!(krawtchouk(15, 1, 4).unwrap(), 7);
        assert_eq!(krawtchouk(15, 2, 1).unwrap(), 77);
        for i in 0..=15 {
            assert_eq!(krawtchouk(15, 0, i).unwrap(), 1);
        }
        assert!(krawtchouk(3, 4, 0).is_err());
    }

    #[test]
    fn singleton_transform() {
        let c = BinaryCode::from_strs(&["000"]).unwrap();
        let d = c.distance_distribution(crate::word::Word::zero(3).unwrap()).unwrap();
        let t = macwilliams_transform(&d, 1).unwrap();
        assert_eq!(t.to_integers().unwrap(), vec![1, 3, 3, 1]);
        assert!(macwilliams_transform(&d, 2).is_err());
    }

    #[test]
    fn hamming_transform_and_involution() {
        let h = hamming_code(4).unwrap();
        let t = code_transform(&h).unwrap();
        assert_eq!(t, perfect_transform(15));
        assert_eq!(t.sum(), Rational::from_integer(16));
        let back = inverse_macwilliams(&t, 2048);
        let a = average_distance_distribution(&h).unwrap();
        assert_eq!(back.entries, a);
    }

    #[test]
    fn extended_hamming_transform() {
        let e = hamming_code(4).unwrap().extend().unwrap();
        let t = code_transform(&e).unwrap().to_integers().unwrap();
        let mut want = vec![0i128; 17];
        want[0] = 1;
        want[8] = 30;
        want[16] = 1;
        assert_eq!(t, want);
    }

    #[test]
    fn strength_methods_agree_on_small_codes() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(1..=8);
            let size = rng.gen_range(1..=(1usize << n));
            let words: Vec<u32> = (0..size).map(|_| rng.gen_range(0..(1u32 << n))).collect();
            let c = BinaryCode::new(n, words).unwrap();
            assert_eq!(oa_strength(&c).unwrap(), oa_strength_by_projection(&c).unwrap());
            assert!(code_transform(&c).unwrap().is_nonnegative());
        }
        for m in 2..=3 {
            let h = hamming_code(m).unwrap();
            assert_eq!(oa_strength(&h).unwrap(), oa_strength_by_projection(&h).unwrap());
        }
    }
}
