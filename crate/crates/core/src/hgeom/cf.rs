use num_integer::Integer;

/// Continued-fraction convergents `u_k / v_k` of `y`, starting with
/// `floor(y) / 1`.
///
/// Expansion stops after `depth` convergents, when the remainder vanishes
/// to within rounding, or when a denominator would exceed `2^40`.
pub fn convergents(y: f64, depth: usize) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    if !y.is_finite() {
        return out;
    }
    let (mut h_prev, mut h) = (0i64, 1i64);
    let (mut k_prev, mut k) = (1i64, 0i64);
    let mut x = y;
    for _ in 0..depth {
        let a = x.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i64;
        let (Some(hn), Some(kn)) = (
            a.checked_mul(h).and_then(|v| v.checked_add(h_prev)),
            a.checked_mul(k).and_then(|v| v.checked_add(k_prev)),
        ) else {
            break;
        };
        if kn > 1 << 40 {
            break;
        }
        (h_prev, h, k_prev, k) = (h, hn, k, kn);
        out.push((h, k));
        let frac = x - a as f64;
        if frac < 1e-12 || (y - h as f64 / k as f64).abs() < 1e-15 * y.abs().max(1.0) {
            break;
        }
        x = 1.0 / frac;
    }
    out
}

/// Integers `(m, n)` with `n u - v m = 1` and the least `n >= 1`, for
/// coprime `u` and `v >= 1`. Then `m / n < u / v`.
pub fn bezout_pair(u: i64, v: i64) -> Option<(i64, i64)> {
    if v < 1 {
        return None;
    }
    let e = u.extended_gcd(&v);
    let (m, n) = match e.gcd {
        1 => (-e.y, e.x),
        -1 => (e.y, -e.x),
        _ => return None,
    };
    // Shift along (m + k u, n + k v) to bring n into [1, v].
    let k = (n - 1).div_euclid(v);
    Some((m - k * u, n - k * v))
}

/// The rational with the smallest denominator in the closed interval
/// `[lo, hi]`, by descent in the Stern-Brocot tree.
pub fn simplest_rational_between(lo: f64, hi: f64) -> Option<(i64, i64)> {
    if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
        return None;
    }
    let base = lo.floor();
    if base.abs() > 1e15 {
        return None;
    }
    if base + 1.0 <= hi || lo == base {
        let v = if lo == base { base } else { base + 1.0 };
        return Some((v as i64, 1));
    }
    let (l, h) = (lo - base, hi - base);
    let (mut a, mut b, mut c, mut d) = (0i64, 1i64, 1i64, 1i64);
    for _ in 0..10_000 {
        let (num, den) = (a + c, b + d);
        let m = num as f64 / den as f64;
        if m < l {
            (a, b) = (num, den);
        } else if m > h {
            (c, d) = (num, den);
        } else {
            return Some((num + base as i64 * den, den));
        }
        if den > 1 << 40 {
            break;
        }
    }
    None
}
