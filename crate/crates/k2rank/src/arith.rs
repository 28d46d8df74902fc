//! Exact integer primitives: prime sieving, Legendre symbols, integer and
//! modular square roots. Everything here is plain integer arithmetic; no
//! floating point enters any decision.

use crate::error::{Error, Result};

/// All primes up to a fixed limit, in increasing order.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.primes.binary_search(&n).is_ok()
    }
}

/// Sieve of Eratosthenes over the odd numbers, one bit per candidate.
pub fn sieve_primes(limit: u64) -> Result<PrimeTable> {
    if limit < 2 {
        return Err(Error::domain(format!(
            "sieve limit must be at least 2, got {limit}"
        )));
    }
    let n = usize::try_from(limit)
        .map_err(|_| Error::domain(format!("sieve limit {limit} does not fit in memory")))?;

    let mut primes = vec![2u64];
    if n >= 3 {
        // Index i represents the odd number 2i + 3.
        let m = (n - 3) / 2 + 1;
        let mut composite = vec![0u64; m.div_ceil(64)];
        let mut i = 0usize;
        while (2 * i + 3) * (2 * i + 3) <= n {
            if composite[i >> 6] >> (i & 63) & 1 == 0 {
                let p = 2 * i + 3;
                // p² = 2j + 3 at j = (p² − 3)/2; step p in index space is 2p in value space.
                let mut j = (p * p - 3) / 2;
                while j < m {
                    composite[j >> 6] |= 1 << (j & 63);
                    j += p;
                }
            }
            i += 1;
        }
        for i in 0..m {
            if composite[i >> 6] >> (i & 63) & 1 == 0 {
                primes.push((2 * i + 3) as u64);
            }
        }
    }
    Ok(PrimeTable { limit, primes })
}

/// b^e mod m with 128-bit intermediates.
pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    debug_assert!(m > 0);
    let mut acc: u64 = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = (u128::from(acc) * u128::from(b) % u128::from(m)) as u64;
        }
        b = (u128::from(b) * u128::from(b) % u128::from(m)) as u64;
        e >>= 1;
    }
    acc
}

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Legendre symbol (a/q) for an odd prime q, by Euler's criterion.
///
/// The criterion doubles as a cheap primality screen: if the power lands
/// outside {0, 1, q−1} the modulus was composite and we report it.
pub fn legendre(a: i64, q: u64) -> Result<i32> {
    if q < 3 || q % 2 == 0 {
        return Err(Error::domain(format!(
            "legendre: modulus must be an odd prime, got {q}"
        )));
    }
    let r = a.rem_euclid(q as i64) as u64;
    let e = pow_mod(r, (q - 1) / 2, q);
    if e == 0 {
        Ok(0)
    } else if e == 1 {
        Ok(1)
    } else if e == q - 1 {
        Ok(-1)
    } else {
        Err(Error::domain(format!(
            "legendre: modulus {q} is not prime (Euler criterion gave {e})"
        )))
    }
}

/// Floor of the square root, by Newton iteration from a power-of-two seed.
pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    // Seed 2^⌈bits/2⌉ ≥ √n, so the iteration decreases monotonically to the floor.
    let shift = (128 - n.leading_zeros()).div_ceil(2);
    let mut x = 1u128 << shift;
    loop {
        let y = (x + n / x) >> 1;
        if y >= x {
            return x;
        }
        x = y;
    }
}

fn isqrt_u64(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let shift = (64 - n.leading_zeros()).div_ceil(2);
    let mut x = 1u64 << shift;
    loop {
        let y = (x + n / x) >> 1;
        if y >= x {
            return x;
        }
        x = y;
    }
}

const fn square_mask_64(modulus: u64) -> u64 {
    let mut mask = 0u64;
    let mut x = 0u64;
    while x < modulus {
        mask |= 1 << (x * x % modulus);
        x += 1;
    }
    mask
}

const fn square_mask_128(modulus: u128) -> u128 {
    let mut mask = 0u128;
    let mut x = 0u128;
    while x < modulus {
        mask |= 1 << (x * x % modulus);
        x += 1;
    }
    mask
}

// Quadratic residue bitmasks used to reject non-squares before taking a root.
// Pass rates: 12/64, 16/63, 21/65 — about 1.5% of uniform inputs survive all three.
const SQ_MASK_64: u64 = square_mask_64(64);
const SQ_MASK_63: u64 = square_mask_64(63);
const SQ_MASK_65: u128 = square_mask_128(65);

/// Exact perfect-square test; returns the root as witness.
pub fn is_square(n: u128) -> Option<u128> {
    if u64::try_from(n).is_ok() {
        return is_square_u64(n as u64).map(u128::from);
    }
    if SQ_MASK_64 >> (n as u64 & 63) & 1 == 0 {
        return None;
    }
    if SQ_MASK_63 >> (n % 63) as u64 & 1 == 0 {
        return None;
    }
    if SQ_MASK_65 >> (n % 65) & 1 == 0 {
        return None;
    }
    let r = isqrt(n);
    (r * r == n).then_some(r)
}

/// u64 fast path of [`is_square`]; this is the inner loop of every
/// representation scan.
pub(crate) fn is_square_u64(n: u64) -> Option<u64> {
    if SQ_MASK_64 >> (n & 63) & 1 == 0 {
        return None;
    }
    if SQ_MASK_63 >> (n % 63) & 1 == 0 {
        return None;
    }
    if SQ_MASK_65 >> (n % 65) as u128 & 1 == 0 {
        return None;
    }
    let r = isqrt_u64(n);
    (r * r == n).then_some(r)
}

/// Square root of a modulo an odd prime q, when one exists.
///
/// Returns the smaller of the two roots (so r ≤ q/2), `None` when a is a
/// non-residue. Tonelli–Shanks, with the q ≡ 3 (mod 4) shortcut.
pub fn mod_sqrt(a: i64, q: u64) -> Result<Option<u64>> {
    if q < 3 || q % 2 == 0 || !is_prime(q) {
        return Err(Error::domain(format!(
            "mod_sqrt: modulus must be an odd prime, got {q}"
        )));
    }
    let a = a.rem_euclid(q as i64) as u64;
    if a == 0 {
        return Ok(Some(0));
    }
    if pow_mod(a, (q - 1) / 2, q) == q - 1 {
        return Ok(None);
    }
    let mulmod = |x: u64, y: u64| (u128::from(x) * u128::from(y) % u128::from(q)) as u64;

    let r = if q % 4 == 3 {
        pow_mod(a, (q + 1) / 4, q)
    } else {
        // Tonelli–Shanks: q − 1 = s·2^e with s odd.
        let mut s = q - 1;
        let mut e = 0u32;
        while s % 2 == 0 {
            s /= 2;
            e += 1;
        }
        let mut z = 2u64;
        while pow_mod(z, (q - 1) / 2, q) != q - 1 {
            z += 1;
        }
        let mut m = e;
        let mut c = pow_mod(z, s, q);
        let mut t = pow_mod(a, s, q);
        let mut r = pow_mod(a, (s + 1) / 2, q);
        while t != 1 {
            let mut i = 0u32;
            let mut t2 = t;
            while t2 != 1 {
                t2 = mulmod(t2, t2);
                i += 1;
            }
            let b = pow_mod(c, 1u64 << (m - i - 1), q);
            m = i;
            c = mulmod(b, b);
            t = mulmod(t, c);
            r = mulmod(r, b);
        }
        r
    };
    debug_assert_eq!(mulmod(r, r), a);
    Ok(Some(r.min(q - r)))
}
