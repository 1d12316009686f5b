//! Small numeric helpers shared across modules.

use std::sync::atomic::{AtomicBool, Ordering};

static PARALLEL: AtomicBool = AtomicBool::new(true);

/// Enables or disables the rayon pool at run time (only meaningful with the
/// `parallel` feature). Results do not depend on this switch.
pub fn set_parallel(on: bool) {
    PARALLEL.store(on, Ordering::Relaxed);
}

pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel") && PARALLEL.load(Ordering::Relaxed)
}

/// Sample mean and standard error of the mean.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Formats with 17 significant digits, which round-trips every f64.
///
/// Positional notation is used for magnitudes in [1e-5, 1e16), scientific
/// notation otherwise.
pub fn fmt_sig(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0.0000000000000000".into();
    }
    let a = x.abs();
    if (1e-5..1e16).contains(&a) {
        let mag = a.log10().floor() as i32;
        let decimals = (16 - mag).max(0) as usize;
        let s = format!("{x:.decimals$}");
        // log10 can be off by one right at powers of ten
        let digits = s.chars().filter(|c| c.is_ascii_digit()).collect::<String>();
        let sig = digits.trim_start_matches('0').len();
        if sig > 17 && decimals > 0 {
            let d = decimals - 1;
            return format!("{x:.d$}");
        }
        s
    } else {
        format!("{x:.16e}")
    }
}

/// Maps `f` over `0..count`, returning results in index order.
///
/// With the `parallel` feature the calls run on the rayon pool; the output is
/// identical to the serial evaluation because `f` only depends on the index.
pub fn map_indexed<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if parallel_enabled() {
            use rayon::prelude::*;
            return (0..count as u64).into_par_iter().map(f).collect();
        }
    }
    (0..count as u64).map(f).collect()
}

/// Evenly spaced grid with `n` points including both endpoints.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|i| if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmt_sig_round_trips() {
        for x in [0.125, 1.0, 10.0, 0.1, 2.0 / 3.0, 1e-7, 123456.789, -52.31, 1e20, 9.999999999999999e-1] {
            let s = fmt_sig(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(fmt_sig(0.125), "0.12500000000000000");
    }

    #[test]
    fn mean_and_stderr() {
        let (m, s) = mean_stderr(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
    }
}
