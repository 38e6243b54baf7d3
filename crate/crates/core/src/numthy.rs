//! Exact solution and counting of `x² ≡ 2 (mod n)`.
//!
//! The embedding count for `K_{n,n}` reduces to counting square roots of 2
//! modulo `n`: factor `n`, decide solvability mod each odd prime by Gauss'
//! lemma (solvable iff `p ≡ ±1 (mod 8)`), lift roots to prime powers by
//! Newton steps, and recombine with the Chinese remainder theorem. All
//! arithmetic is 64-bit with 128-bit intermediates; practical bound
//! `n ≤ 10¹²` (trial-division factoring).

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NumthyError {
    /// Input outside the documented domain (e.g. `p | a`, `n < 2`, `p` not an
    /// odd prime).
    Domain(&'static str),
}

impl fmt::Display for NumthyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumthyError::Domain(msg) => write!(f, "domain error: {msg}"),
        }
    }
}

impl core::error::Error for NumthyError {}

/// Prime decomposition `n = ∏ pᵢ^{aᵢ}` with primes ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
}

/// Complete factorization by trial division; practical bound `n ≤ 10¹²`.
pub fn factorize(n: u64) -> Factorization {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut factors = Vec::new();
    let mut m = n;
    let mut push = |p: u64, m: &mut u64| {
        let mut a = 0u32;
        while (*m).is_multiple_of(p) {
            *m /= p;
            a += 1;
        }
        if a > 0 {
            factors.push((p, a));
        }
    };
    push(2, &mut m);
    let mut p = 3u64;
    while p.saturating_mul(p) <= m {
        push(p, &mut m);
        p += 2;
    }
    if m > 1 {
        factors.push((m, 1));
    }
    Factorization { n, factors }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn reduce(a: i64, m: u64) -> u64 {
    a.rem_euclid(m as i64) as u64
}

fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Gauss' lemma: reduce `a, 2a, …, ((p−1)/2)a` to representatives in
/// `(−(p−1)/2, (p−1)/2]` and count negatives ν; `x² ≡ a (mod p)` is solvable
/// iff ν is even.
pub fn gauss_criterion(a: i64, p: u64) -> Result<bool, NumthyError> {
    if !is_odd_prime(p) {
        return Err(NumthyError::Domain("p must be an odd prime"));
    }
    let ar = reduce(a, p);
    if ar == 0 {
        return Err(NumthyError::Domain("p divides a"));
    }
    let half = (p - 1) / 2;
    let mut negatives = 0u64;
    for j in 1..=half {
        if mul_mod(ar, j, p) > half {
            negatives += 1;
        }
    }
    Ok(negatives.is_multiple_of(2))
}

/// All `x ∈ {0, …, p−1}` with `x² ≡ a (mod p)`, by exhaustive scan.
///
/// The scan doubles as its own oracle; intended for `p ≤ 10⁶`.
pub fn sqrt_mod_prime(a: i64, p: u64) -> Vec<u64> {
    assert!(is_odd_prime(p), "sqrt_mod_prime requires an odd prime");
    let ar = reduce(a, p);
    (0..p).filter(|&x| mul_mod(x, x, p) == ar).collect()
}

/// All `x` mod `p^m` with `x² ≡ a (mod p^m)`, by Newton-lifting each root
/// mod `p`. The count equals the count mod `p` (0 or 2) since `p ∤ a`.
pub fn hensel_lift(a: i64, p: u64, m: u32) -> Result<Vec<u64>, NumthyError> {
    if !is_odd_prime(p) {
        return Err(NumthyError::Domain("p must be an odd prime"));
    }
    if reduce(a, p) == 0 {
        return Err(NumthyError::Domain("p divides a"));
    }
    assert!(m >= 1, "hensel_lift requires m >= 1");
    let mut roots = sqrt_mod_prime(a, p);
    let mut modulus = p;
    for _ in 1..m {
        let next = modulus * p;
        let an = reduce(a, next);
        for x in roots.iter_mut() {
            // x' = x - (x² - a) · (2x)⁻¹, taken mod p^{k+1}
            let fx = (mul_mod(*x, *x, next) + next - an) % next;
            let inv = mod_inverse(2 * *x % next, next).expect("2x is a unit mod p^k");
            *x = (*x + next - mul_mod(fx, inv, next)) % next;
            debug_assert_eq!(mul_mod(*x, *x, next), an);
        }
        modulus = next;
    }
    roots.sort_unstable();
    Ok(roots)
}

/// Inverse of `a` mod `m` (extended Euclid), if `gcd(a, m) = 1`.
fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, a as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m as i128) as u64)
}

/// Sorted, duplicate-free solutions of `x² ≡ 2 (mod modulus)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceSolutions {
    pub modulus: u64,
    pub solutions: Vec<u64>,
}

/// Solves `x² ≡ 2 (mod n)` exactly for any `n ≥ 1`: per-prime-power roots
/// (Hensel for odd primes; the factor 2 contributes `x ≡ 0 (mod 2)` only at
/// exponent 1, nothing at exponent ≥ 2) recombined by CRT.
pub fn solve_x2_eq_2(n: u64) -> CongruenceSolutions {
    assert!(n >= 1, "solve_x2_eq_2 requires n >= 1");
    if n == 1 {
        return CongruenceSolutions {
            modulus: 1,
            solutions: vec![0],
        };
    }
    // roots per prime power, as (root set, prime power)
    let mut parts: Vec<(Vec<u64>, u64)> = Vec::new();
    for &(p, a) in &factorize(n).factors {
        let pk = p.pow(a);
        let roots = if p == 2 {
            // x² ≡ 2 (mod 2) ⇔ x even; mod 4 and higher there is no root
            // since squares are 0 or 1 mod 4.
            if a == 1 {
                vec![0]
            } else {
                vec![]
            }
        } else {
            hensel_lift(2, p, a).expect("odd prime, p does not divide 2")
        };
        if roots.is_empty() {
            return CongruenceSolutions {
                modulus: n,
                solutions: vec![],
            };
        }
        parts.push((roots, pk));
    }
    // CRT over the cartesian product of per-prime-power root sets
    let mut combined: Vec<(u64, u64)> = vec![(0, 1)];
    for (roots, pk) in parts {
        let mut next = Vec::with_capacity(combined.len() * roots.len());
        for &(r, m) in &combined {
            for &root in &roots {
                next.push((crt_pair(r, m, root, pk), m * pk));
            }
        }
        combined = next;
    }
    let mut solutions: Vec<u64> = combined.into_iter().map(|(r, _)| r).collect();
    solutions.sort_unstable();
    solutions.dedup();
    CongruenceSolutions {
        modulus: n,
        solutions,
    }
}

/// The unique `x` mod `m1·m2` with `x ≡ r1 (mod m1)`, `x ≡ r2 (mod m2)`;
/// moduli coprime.
fn crt_pair(r1: u64, m1: u64, r2: u64, m2: u64) -> u64 {
    let inv = mod_inverse(m1 % m2, m2).expect("moduli must be coprime");
    let diff = (r2 + m2 - r1 % m2) % m2;
    let k = mul_mod(diff, inv, m2);
    r1 + m1 * k
}

/// Closed-form count of nonorientable regular embeddings of `K_{n,n}` up to
/// isomorphism: 1 for n = 2; 0 unless `n ≡ 2 (mod 4)`; for `n/2 = ∏ pᵢ^{aᵢ}`
/// it is `2^k` when every `pᵢ ≡ ±1 (mod 8)` and 0 otherwise.
pub fn predicted_count(n: u64) -> Result<u64, NumthyError> {
    if n < 2 {
        return Err(NumthyError::Domain("n must be at least 2"));
    }
    if n == 2 {
        // the projective-plane embedding of the 4-cycle
        return Ok(1);
    }
    if n % 4 != 2 {
        return Ok(0);
    }
    let half = factorize(n / 2);
    let k = half.factors.len() as u32;
    let all_pm1 = half.factors.iter().all(|&(p, _)| p % 8 == 1 || p % 8 == 7);
    Ok(if all_pm1 { 1u64 << k } else { 0 })
}
