//! Small numerical utilities: complete elliptic integrals and a stable hash.

use std::f64::consts::PI;

/// Complete elliptic integral of the first kind K(m), parameter `m = k^2`.
///
/// Evaluated with the arithmetic-geometric mean, which converges
/// quadratically and is accurate to machine precision for `0 <= m < 1`.
pub fn ellipk(m: f64) -> f64 {
    debug_assert!((0.0..1.0).contains(&m), "ellipk requires 0 <= m < 1, got {m}");
    let mut a = 1.0_f64;
    let mut b = (1.0 - m).sqrt();
    while (a - b).abs() > f64::EPSILON * a {
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
    }
    PI / (2.0 * a)
}

/// Complete elliptic integral of the second kind E(m), parameter `m = k^2`.
pub fn ellipe(m: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&m), "ellipe requires 0 <= m <= 1, got {m}");
    if m == 1.0 {
        return 1.0;
    }
    let mut a = 1.0_f64;
    let mut b = (1.0 - m).sqrt();
    let mut c2_sum = 0.5 * m; // 2^(n-1) * c_n^2 accumulated, starting at n = 0 with c_0 = sqrt(m)
    let mut pow2 = 0.5;
    while (a - b).abs() > f64::EPSILON * a {
        let c = 0.5 * (a - b);
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
        pow2 *= 2.0;
        c2_sum += pow2 * c * c;
    }
    PI / (2.0 * a) * (1.0 - c2_sum)
}

/// FNV-1a 64-bit hash; stable across platforms and toolchain versions.
///
/// Used to key kernel caches and snapshot headers on mesh geometry.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x1000_0000_01b3);
    }
    h
}

/// Feed a slice of f64 into an FNV-1a stream in a canonical byte order.
pub fn fnv1a64_f64(values: &[f64], seed: u64) -> u64 {
    let mut h = seed;
    for v in values {
        for &b in v.to_le_bytes().iter() {
            h ^= b as u64;
            h = h.wrapping_mul(0x1000_0000_01b3);
        }
    }
    h
}
