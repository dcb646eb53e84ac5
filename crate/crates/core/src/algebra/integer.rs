//! Integer and rational number utilities: factoring, square classes, residue symbols.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

const SMALL_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Deterministic Miller-Rabin for n < 3.3e24, strong probable prime test beyond.
pub fn is_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &p in SMALL_PRIMES.iter() {
        let bp = BigUint::from(p);
        if *n == bp {
            return true;
        }
        if (n % &bp).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    let bases: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
    'outer: for &a in bases.iter() {
        let a = BigUint::from(a);
        let mut x = a.modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut d = one.clone();
        while d == one {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            d = diff.gcd(n);
        }
        if d != *n {
            return d;
        }
        c += 1u32;
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod64(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

// deterministic for all 64-bit inputs with these bases
fn is_prime64(n: u64) -> bool {
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
    'outer: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

fn rho64(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mulmod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn factor_u64(n: u64) -> Vec<(BigUint, u32)> {
    let mut ps: Vec<u64> = Vec::new();
    let mut m = n;
    let mut p = 2u64;
    while p < 1000 && p * p <= m {
        while m % p == 0 {
            m /= p;
            ps.push(p);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut stack = vec![m];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime64(m) {
            ps.push(m);
            continue;
        }
        let d = rho64(m);
        stack.push(d);
        stack.push(m / d);
    }
    ps.sort_unstable();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for p in ps {
        match out.last_mut() {
            Some((q, e)) if *q == BigUint::from(p) => *e += 1,
            _ => out.push((BigUint::from(p), 1)),
        }
    }
    out
}

/// Prime factorization of a positive integer, sorted by prime.
pub fn factor_biguint(n: &BigUint) -> Vec<(BigUint, u32)> {
    if let Some(small) = n.to_u64() {
        if small == 0 {
            return Vec::new();
        }
        return factor_u64(small);
    }
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    let mut m = n.clone();
    if m.is_zero() {
        return out;
    }
    let push = |p: BigUint, out: &mut Vec<(BigUint, u32)>| {
        if let Some(e) = out.iter_mut().find(|e| e.0 == p) {
            e.1 += 1;
        } else {
            out.push((p, 1));
        }
    };
    let mut p = 2u64;
    while p < 10_000 {
        let bp = BigUint::from(p);
        if &bp * &bp > m {
            break;
        }
        while (&m % &bp).is_zero() {
            m /= &bp;
            push(bp.clone(), &mut out);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut stack = vec![m];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            push(m, &mut out);
            continue;
        }
        let r = m.sqrt();
        if &r * &r == m {
            stack.push(r.clone());
            stack.push(r);
            continue;
        }
        let d = pollard_rho(&m);
        let e = &m / &d;
        stack.push(d);
        stack.push(e);
    }
    out.sort();
    out
}

pub fn factor_bigint(n: &BigInt) -> Vec<(BigUint, u32)> {
    factor_biguint(n.magnitude())
}

/// Exact integer square root, if `n` is a perfect square.
pub fn sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

pub fn rat_sqrt(q: &Rat) -> Option<Rat> {
    let n = sqrt_exact(q.numer())?;
    let d = sqrt_exact(q.denom())?;
    Some(Rat::new(n, d))
}

pub fn rat_is_square(q: &Rat) -> bool {
    !q.is_zero() && rat_sqrt(q).is_some()
}

/// Squarefree integer representative of the square class of a nonzero rational.
pub fn square_class(q: &Rat) -> BigInt {
    assert!(!q.is_zero(), "square class of zero");
    let n = q.numer() * q.denom();
    let mut r = BigInt::one();
    for (p, e) in factor_bigint(&n) {
        if e % 2 == 1 {
            r *= BigInt::from(p);
        }
    }
    if n.is_negative() {
        -r
    } else {
        r
    }
}

/// p-adic valuation of a nonzero integer.
pub fn valuation_int(n: &BigInt, p: &BigUint) -> u32 {
    let p = BigInt::from_biguint(Sign::Plus, p.clone());
    let mut m = n.clone();
    let mut v = 0;
    while !m.is_zero() && (&m % &p).is_zero() {
        m /= &p;
        v += 1;
    }
    v
}

/// p-adic valuation of a nonzero rational.
pub fn valuation(q: &Rat, p: &BigUint) -> i64 {
    valuation_int(q.numer(), p) as i64 - valuation_int(q.denom(), p) as i64
}

/// Reduction of a p-adic unit rational modulo p.
pub fn reduce_mod(q: &Rat, p: &BigUint) -> BigUint {
    let pi = BigInt::from_biguint(Sign::Plus, p.clone());
    let n = q.numer().mod_floor(&pi);
    let d = q.denom().mod_floor(&pi);
    let dinv = mod_inverse(&d, &pi).expect("denominator not a unit");
    ((n * dinv).mod_floor(&pi)).to_biguint().unwrap()
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Legendre symbol for an odd prime p and a unit a modulo p.
pub fn legendre(a: &BigUint, p: &BigUint) -> i8 {
    let e = (p - 1u32) >> 1;
    let r = a.modpow(&e, p);
    if r.is_one() {
        1
    } else {
        -1
    }
}

/// Lowest prime dividing numerators or denominators, used to enumerate bad places.
pub fn primes_of(q: &Rat) -> Vec<BigUint> {
    let mut v: Vec<BigUint> = factor_bigint(q.numer())
        .into_iter()
        .chain(factor_bigint(q.denom()))
        .map(|(p, _)| p)
        .collect();
    v.sort();
    v.dedup();
    v
}

pub fn to_i64(n: &BigInt) -> Option<i64> {
    n.to_i64()
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}
