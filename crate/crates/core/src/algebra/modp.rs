//! Dense polynomials over a small prime field, used by the factoring routines.

pub type Fp = Vec<u64>;

#[inline]
fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

pub fn inv(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

pub fn trim(v: &mut Fp) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub fn add(a: &[u64], b: &[u64], p: u64) -> Fp {
    let n = a.len().max(b.len());
    let mut v: Fp = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    trim(&mut v);
    v
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> Fp {
    let n = a.len().max(b.len());
    let mut v: Fp = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    trim(&mut v);
    v
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut v = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            v[i + j] = (v[i + j] + mulmod(x, y, p)) % p;
        }
    }
    trim(&mut v);
    v
}

pub fn scale(a: &[u64], c: u64, p: u64) -> Fp {
    let mut v: Fp = a.iter().map(|&x| mulmod(x, c, p)).collect();
    trim(&mut v);
    v
}

pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Fp, Fp) {
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return (vec![], r);
    }
    let db = b.len() - 1;
    let li = inv(*b.last().unwrap(), p);
    let mut q = vec![0u64; r.len() - db];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let c = mulmod(*r.last().unwrap(), li, p);
        for (j, &bj) in b.iter().enumerate() {
            r[k + j] = (r[k + j] + p - mulmod(c, bj, p)) % p;
        }
        q[k] = c;
        r.pop();
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub fn rem(a: &[u64], b: &[u64], p: u64) -> Fp {
    divrem(a, b, p).1
}

pub fn monic(a: &[u64], p: u64) -> Fp {
    match a.last() {
        None => vec![],
        Some(&l) => scale(a, inv(l, p), p),
    }
}

pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Fp {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(&x, p)
}

/// `(g, s, t)` with `s a + t b = g` monic.
pub fn xgcd(a: &[u64], b: &[u64], p: u64) -> (Fp, Fp, Fp) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    trim(&mut r0);
    trim(&mut r1);
    let (mut s0, mut s1): (Fp, Fp) = (vec![1], vec![]);
    let (mut t0, mut t1): (Fp, Fp) = (vec![], vec![1]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s2 = sub(&s0, &mul(&q, &s1, p), p);
        let t2 = sub(&t0, &mul(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    let li = inv(*r0.last().unwrap(), p);
    (scale(&r0, li, p), scale(&s0, li, p), scale(&t0, li, p))
}

pub fn derivative(a: &[u64], p: u64) -> Fp {
    let mut v: Fp = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| mulmod(c, i as u64 % p, p))
        .collect();
    trim(&mut v);
    v
}

/// `a^e mod m`.
pub fn powmod_poly(a: &[u64], mut e: u128, m: &[u64], p: u64) -> Fp {
    let mut base = rem(a, m, p);
    let mut acc: Fp = vec![1];
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(&mul(&acc, &base, p), m, p);
        }
        base = rem(&mul(&base, &base, p), m, p);
        e >>= 1;
    }
    acc
}

/// Deterministic generator for the random splitting polynomials.
struct SplitMix(u64);

impl SplitMix {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

/// Distinct-degree factorization of a monic squarefree polynomial: pairs `(product, d)`.
pub fn distinct_degree(f: &[u64], p: u64) -> Vec<(Fp, usize)> {
    let mut out = Vec::new();
    let mut g = f.to_vec();
    let x: Fp = vec![0, 1];
    let mut h = x.clone();
    let mut d = 0;
    while g.len() > 1 {
        d += 1;
        if 2 * d > g.len() - 1 {
            out.push((g.clone(), g.len() - 1));
            break;
        }
        h = powmod_poly(&h, p as u128, &g, p);
        let c = gcd(&g, &sub(&h, &x, p), p);
        if c.len() > 1 {
            g = divrem(&g, &c, p).0;
            h = rem(&h, &g, p);
            out.push((c, d));
        }
    }
    out
}

/// Cantor-Zassenhaus equal-degree splitting (odd p).
pub fn equal_degree(f: &[u64], d: usize, p: u64, seed: u64) -> Vec<Fp> {
    let n = f.len() - 1;
    if n == d {
        return vec![f.to_vec()];
    }
    let mut rng = SplitMix(seed ^ 0x5151_7e7e);
    let e: u128 = ((p as u128).pow(d as u32) - 1) / 2;
    loop {
        let mut a: Fp = (0..n).map(|_| rng.next() % p).collect();
        trim(&mut a);
        if a.len() < 2 {
            continue;
        }
        let b = powmod_poly(&a, e, f, p);
        let g = gcd(f, &sub(&b, &[1], p), p);
        if g.len() > 1 && g.len() < f.len() {
            let h = divrem(f, &g, p).0;
            let mut out = equal_degree(&g, d, p, rng.next());
            out.extend(equal_degree(&monic(&h, p), d, p, rng.next()));
            return out;
        }
    }
}

/// Monic irreducible factors of a monic squarefree polynomial over F_p (p odd).
pub fn factor_squarefree(f: &[u64], p: u64) -> Vec<Fp> {
    let mut out = Vec::new();
    for (g, d) in distinct_degree(f, p) {
        out.extend(equal_degree(&g, d, p, 17 + d as u64));
    }
    out.sort();
    out
}
