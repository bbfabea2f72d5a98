//! Integer factorisation: a fixed trial-division sieve for small factors,
//! Miller–Rabin primality via GMP, and Brent's variant of Pollard's rho for
//! the occasional large semiprime (e.g. the big `t` values produced by the
//! convergent search).

use rug::ops::Pow;
use rug::{integer::IsPrime, rand::RandState, Integer};
use std::collections::BTreeMap;
use std::sync::OnceLock;

const SIEVE_LIMIT: u32 = 1_000_000;

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = SIEVE_LIMIT as usize;
        let mut is_comp = vec![false; n + 1];
        let mut primes = Vec::new();
        for p in 2..=n {
            if !is_comp[p] {
                primes.push(p as u32);
                let mut m = p * p;
                while m <= n {
                    is_comp[m] = true;
                    m += p;
                }
            }
        }
        primes
    })
}

/// Sign and prime-power decomposition of a nonzero integer.
///
/// Invariant: `value == sign * prod(p^e)` with the primes strictly
/// increasing and every exponent positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntFactorization {
    pub sign: i32,
    pub factors: BTreeMap<Integer, u32>,
}

impl IntFactorization {
    /// Reassemble the factored integer (sanity-check helper).
    pub fn value(&self) -> Integer {
        let mut v = Integer::from(self.sign);
        for (p, e) in &self.factors {
            v *= Integer::from(p.pow(*e));
        }
        v
    }

    /// Exponent of `p` in the factorisation.
    pub fn exponent(&self, p: &Integer) -> u32 {
        self.factors.get(p).copied().unwrap_or(0)
    }

    /// Squarefree kernel including the sign: the product of primes with odd
    /// exponent, times `sign`.
    pub fn core(&self) -> Integer {
        let mut c = Integer::from(self.sign);
        for (p, e) in &self.factors {
            if e % 2 == 1 {
                c *= p;
            }
        }
        c
    }

    /// Largest `s` with `s^2` dividing `|value|`; `|value| = |core| * s^2`.
    pub fn square_part(&self) -> Integer {
        let mut s = Integer::from(1);
        for (p, e) in &self.factors {
            if *e >= 2 {
                s *= Integer::from(p.pow(*e / 2));
            }
        }
        s
    }
}

fn is_prime(n: &Integer) -> bool {
    n.is_probably_prime(40) != IsPrime::No
}

/// Brent-cycle Pollard rho; returns a nontrivial factor of an odd composite.
fn pollard_brent(n: &Integer, rng: &mut RandState) -> Integer {
    loop {
        let c = Integer::from(n.random_below_ref(rng)) + 1u32;
        let mut y = Integer::from(n.random_below_ref(rng));
        let m = 128u32;
        let mut g = Integer::from(1);
        let mut r = 1u64;
        let mut q = Integer::from(1);
        let mut x = Integer::new();
        let mut ys = Integer::new();
        while g == 1 {
            x.assign_from(&y);
            for _ in 0..r {
                y.square_mut();
                y += &c;
                y %= n;
            }
            let mut k = 0u64;
            while k < r && g == 1 {
                ys.assign_from(&y);
                let steps = m.min((r - k) as u32);
                for _ in 0..steps {
                    y.square_mut();
                    y += &c;
                    y %= n;
                    let mut d = Integer::from(&x - &y);
                    d = d.abs();
                    q *= d;
                    q %= n;
                }
                g = Integer::from(q.gcd_ref(n));
                k += steps as u64;
            }
            r *= 2;
        }
        if &g == n {
            // Backtrack one step at a time.
            loop {
                ys.square_mut();
                ys += &c;
                ys %= n;
                let d = Integer::from(&x - &ys).abs();
                g = d.gcd(n);
                if g > 1 {
                    break;
                }
            }
        }
        if g > 1 && &g < n {
            return g;
        }
        // Unlucky parameters; retry with a fresh (y, c).
    }
}

trait AssignFrom {
    fn assign_from(&mut self, src: &Integer);
}
impl AssignFrom for Integer {
    fn assign_from(&mut self, src: &Integer) {
        use rug::Assign;
        self.assign(src);
    }
}

fn factor_rec(n: Integer, out: &mut BTreeMap<Integer, u32>, rng: &mut RandState) {
    if n == 1 {
        return;
    }
    if is_prime(&n) {
        *out.entry(n).or_insert(0) += 1;
        return;
    }
    let d = pollard_brent(&n, rng);
    let q = Integer::from(&n / &d);
    factor_rec(d, out, rng);
    factor_rec(q, out, rng);
}

/// Factor a nonzero integer completely.
///
/// Panics on zero (there is no sensible factorisation).
pub fn factorize(n: &Integer) -> IntFactorization {
    assert!(*n != 0, "factorize(0) is undefined");
    let sign = if *n < 0 { -1 } else { 1 };
    let mut rem = Integer::from(n.abs_ref());
    let mut factors = BTreeMap::new();
    for &p in small_primes() {
        if rem == 1 {
            break;
        }
        let pp = Integer::from(p);
        if Integer::from(&pp * &pp) > rem {
            break;
        }
        let mut e = 0u32;
        while rem.is_divisible(&pp) {
            rem /= &pp;
            e += 1;
        }
        if e > 0 {
            factors.insert(pp, e);
        }
    }
    if rem > 1 {
        if is_prime(&rem) {
            *factors.entry(rem).or_insert(0) += 1;
        } else {
            let mut rng = RandState::new();
            rng.seed(&Integer::from(0xC0FFEEu32));
            factor_rec(rem, &mut factors, &mut rng);
        }
    }
    IntFactorization { sign, factors }
}

/// Squarefree kernel of `n` with sign: the unique squarefree `d` with
/// `n = d * s^2`, `s > 0`.
pub fn core_part(n: &Integer) -> Integer {
    factorize(n).core()
}

/// Split `n = d * s^2` with `d` squarefree (carrying the sign of `n`) and
/// `s > 0`. Returns `(d, s)`.
pub fn squarefree_split(n: &Integer) -> (Integer, Integer) {
    let f = factorize(n);
    (f.core(), f.square_part())
}

/// p-adic valuation of a nonzero integer.
pub fn vp(n: &Integer, p: &Integer) -> u32 {
    assert!(*n != 0, "vp(0) is infinite");
    let mut e = 0u32;
    let mut m = Integer::from(n.abs_ref());
    while m.is_divisible(p) {
        m /= p;
        e += 1;
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_small() {
        let f = factorize(&Integer::from(-90));
        assert_eq!(f.sign, -1);
        assert_eq!(f.exponent(&Integer::from(2)), 1);
        assert_eq!(f.exponent(&Integer::from(3)), 2);
        assert_eq!(f.exponent(&Integer::from(5)), 1);
        assert_eq!(f.value(), Integer::from(-90));
        assert_eq!(f.core(), Integer::from(-10));
        assert_eq!(f.square_part(), Integer::from(3));
    }

    #[test]
    fn squarefree_split_examples() {
        let (d, s) = squarefree_split(&Integer::from(48));
        assert_eq!((d, s), (Integer::from(3), Integer::from(4)));
        let (d, s) = squarefree_split(&Integer::from(-4));
        assert_eq!((d, s), (Integer::from(-1), Integer::from(2)));
        let (d, s) = squarefree_split(&Integer::from(1));
        assert_eq!((d, s), (Integer::from(1), Integer::from(1)));
    }

    #[test]
    fn vp_examples() {
        assert_eq!(vp(&Integer::from(48), &Integer::from(2)), 4);
        assert_eq!(vp(&Integer::from(48), &Integer::from(3)), 1);
        assert_eq!(vp(&Integer::from(48), &Integer::from(5)), 0);
    }

    #[test]
    fn factor_large_semiprime() {
        // The convergent search produces t of this size; rho must handle it.
        let p = Integer::from_str_radix("1000000000000066600000000000001", 10).unwrap();
        let q = Integer::from(999999999989u64);
        let n = Integer::from(&p * &q);
        let f = factorize(&n);
        assert_eq!(f.value(), n);
        assert_eq!(f.exponent(&q), 1);
    }

    #[test]
    fn near_miss_t_is_squarefree() {
        // t from the quantised-convergent search near-miss: p1 * q with
        // p1 the squarefree convergent numerator.
        let t = Integer::from_str_radix("4992086833624447048438244097954", 10).unwrap();
        let (d, s) = squarefree_split(&t);
        assert_eq!(s, Integer::from(1));
        assert_eq!(d, t);
    }
}
