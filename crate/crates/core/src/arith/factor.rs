//! Integer factoring for square-class computations.
//!
//! Inputs here are desk-scale (heights of forged points and coloring values),
//! so trial division followed by Miller-Rabin and Brent's variant of Pollard
//! rho is plenty.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

const TRIAL_LIMIT: u64 = 1 << 12;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
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

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: u64) -> u64 {
    let mut c = n + 1;
    while !is_prime_u64(c) {
        c += 1;
    }
    c
}

/// All primes in `[lo, hi]`, ascending.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime_u64(n)).collect()
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn brent_u64(n: u64, c: u64) -> Option<u64> {
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let (mut y, m) = (2u64, 128u64);
    let (mut g, mut r, mut q) = (1u64, 1u64, 1u64);
    let (mut x, mut ys) = (0u64, 0u64);
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..m.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = gcd_u64(q, n);
            k += m;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd_u64(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn split_u64(n: u64) -> u64 {
    for c in 1.. {
        if let Some(d) = brent_u64(n, c) {
            return d;
        }
    }
    unreachable!()
}

fn factor_u64_into(n: u64, out: &mut BTreeMap<u64, u32>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        *out.entry(n).or_default() += 1;
        return;
    }
    let d = split_u64(n);
    factor_u64_into(d, out);
    factor_u64_into(n / d, out);
}

/// Prime factorization of a positive 64-bit integer.
pub fn factor_u64(mut n: u64) -> BTreeMap<u64, u32> {
    assert!(n > 0, "cannot factor zero");
    let mut out = BTreeMap::new();
    for p in std::iter::once(2).chain((3..TRIAL_LIMIT).step_by(2)) {
        if p * p > n {
            break;
        }
        while n % p == 0 {
            *out.entry(p).or_default() += 1;
            n /= p;
        }
    }
    factor_u64_into(n, &mut out);
    out
}

fn is_probable_prime_big(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let one = BigUint::one();
    let n1 = n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn brent_big(n: &BigUint, c: u64) -> Option<BigUint> {
    let c = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &c) % n;
    let mut y = BigUint::from(2u32);
    let m = 128u64;
    let (mut g, mut r, mut q) = (BigUint::one(), 1u64, BigUint::one());
    let (mut x, mut ys) = (BigUint::zero(), BigUint::zero());
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..m.min(r - k) {
                y = f(&y);
                let diff = if x > y { &x - &y } else { &y - &x };
                q = (q * diff) % n;
            }
            g = q.gcd(n);
            k += m;
        }
        r *= 2;
    }
    if &g == n {
        loop {
            ys = f(&ys);
            let diff = if x > ys { &x - &ys } else { &ys - &x };
            g = diff.gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (&g != n).then_some(g)
}

fn factor_big_into(n: BigUint, out: &mut BTreeMap<BigUint, u32>) {
    if n.is_one() {
        return;
    }
    if let Some(small) = n.to_u64() {
        for (p, e) in factor_u64(small) {
            *out.entry(BigUint::from(p)).or_default() += e;
        }
        return;
    }
    if is_probable_prime_big(&n) {
        *out.entry(n).or_default() += 1;
        return;
    }
    let root = n.sqrt();
    if &root * &root == n {
        let mut sub = BTreeMap::new();
        factor_big_into(root, &mut sub);
        for (p, e) in sub {
            *out.entry(p).or_default() += 2 * e;
        }
        return;
    }
    let d = (1..)
        .find_map(|c| brent_big(&n, c))
        .expect("rho eventually splits a composite");
    let rest = &n / &d;
    factor_big_into(d, out);
    factor_big_into(rest, out);
}

/// Prime factorization of a positive arbitrary-precision integer.
pub fn factor_biguint(n: &BigUint) -> BTreeMap<BigUint, u32> {
    assert!(!n.is_zero(), "cannot factor zero");
    let mut out = BTreeMap::new();
    let mut n = n.clone();
    for p in std::iter::once(2u64).chain((3..TRIAL_LIMIT).step_by(2)) {
        let bp = BigUint::from(p);
        while (&n % &bp).is_zero() {
            *out.entry(bp.clone()).or_default() += 1;
            n /= &bp;
        }
        if &bp * &bp > n {
            break;
        }
    }
    factor_big_into(n, &mut out);
    out
}

/// Writes `n = core * root^2` with `core` squarefree; returns `(core, root)`.
pub fn squarefree_decompose(n: &BigUint) -> (BigUint, BigUint) {
    let mut core = BigUint::one();
    let mut root = BigUint::one();
    for (p, e) in factor_biguint(n) {
        if e % 2 == 1 {
            core *= &p;
        }
        root *= num_traits::pow(p, (e / 2) as usize);
    }
    (core, root)
}

/// Odd-exponent prime support of `|n|`, ascending.
pub fn odd_support(n: &BigInt) -> Vec<BigUint> {
    factor_biguint(n.magnitude())
        .into_iter()
        .filter(|(_, e)| e % 2 == 1)
        .map(|(p, _)| p)
        .collect()
}

pub(crate) fn signed(sign_negative: bool, magnitude: BigUint) -> BigInt {
    BigInt::from_biguint(if sign_negative { Sign::Minus } else { Sign::Plus }, magnitude)
}
