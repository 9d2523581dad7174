//! Quadrature and transform primitives shared by the rendering and analysis
//! paths: a composite Boole rule (exact through degree-5 panels, which makes
//! knot-aligned piecewise-polynomial inner products exact to roundoff), a
//! radix-2 FFT used to render frequency-side profiles, and a direct-quadrature
//! Fourier transform that serves as an independent oracle in tests.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Composite Boole integration of uniformly spaced samples with step `h`.
///
/// The sample count must be 4m+1 so the data splits into whole 4-interval
/// panels. Each panel integrates (2h/45)(7f0+32f1+12f2+32f3+7f4).
pub fn boole(h: f64, values: &[f64]) -> Result<f64> {
    check_boole_len(values.len())?;
    let mut acc = 0.0;
    for p in values[..values.len() - 1].chunks_exact(4) {
        acc += 7.0 * p[0] + 32.0 * p[1] + 12.0 * p[2] + 32.0 * p[3];
    }
    // chunks_exact skipped every 5th sample (panel right endpoints); add them:
    // each interior panel boundary is counted 7+7, the two ends once.
    let mut ends = 7.0 * values[values.len() - 1];
    for i in (4..values.len() - 1).step_by(4) {
        ends += 7.0 * values[i];
    }
    Ok((acc + ends) * 2.0 * h / 45.0)
}

/// Complex-valued composite Boole rule; same layout contract as [`boole`].
pub fn boole_complex(h: f64, values: &[Complex64]) -> Result<Complex64> {
    check_boole_len(values.len())?;
    let mut acc = Complex64::new(0.0, 0.0);
    for p in values[..values.len() - 1].chunks_exact(4) {
        acc += 7.0 * p[0] + 32.0 * p[1] + 12.0 * p[2] + 32.0 * p[3];
    }
    let mut ends = 7.0 * values[values.len() - 1];
    for i in (4..values.len() - 1).step_by(4) {
        ends += 7.0 * values[i];
    }
    Ok((acc + ends) * Complex64::new(2.0 * h / 45.0, 0.0))
}

fn check_boole_len(len: usize) -> Result<()> {
    if len < 5 || (len - 1) % 4 != 0 {
        return Err(Error::invalid(
            "values",
            format!("Boole rule needs 4m+1 samples, got {len}"),
        ));
    }
    Ok(())
}

/// In-place forward FFT, X_k = sum_n x_n e^{-2*pi*i*nk/N}; N must be a power of two.
pub fn fft_in_place(buf: &mut [Complex64]) {
    fft_radix2(buf, -1.0);
}

/// In-place inverse FFT including the 1/N factor.
pub fn ifft_in_place(buf: &mut [Complex64]) {
    fft_radix2(buf, 1.0);
    let scale = 1.0 / buf.len() as f64;
    for v in buf.iter_mut() {
        *v *= scale;
    }
}

fn fft_radix2(buf: &mut [Complex64], sign: f64) {
    let n = buf.len();
    assert!(n.is_power_of_two(), "FFT length must be a power of two");
    // bit-reversal permutation
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            buf.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let ang = sign * std::f64::consts::TAU / len as f64;
        let wlen = Complex64::new(ang.cos(), ang.sin());
        for chunk in buf.chunks_exact_mut(len) {
            let mut w = Complex64::new(1.0, 0.0);
            let (lo, hi) = chunk.split_at_mut(len / 2);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let t = *b * w;
                *b = *a - t;
                *a += t;
                w *= wlen;
            }
        }
        len <<= 1;
    }
}

/// Fourier transform by direct Boole quadrature over `[x_lo, x_hi]`:
/// integral of f(x) e^{-i*x*xi} dx with `4*panels` subintervals.
///
/// Slow but mechanism-independent of the closed forms and of the FFT render
/// path, which is exactly why the test suites use it as an oracle.
pub fn fourier_transform_quadrature(
    f: impl Fn(f64) -> f64,
    x_lo: f64,
    x_hi: f64,
    panels: usize,
    xi: f64,
) -> Result<Complex64> {
    if !(x_hi > x_lo) || panels == 0 {
        return Err(Error::invalid(
            "fourier_transform_quadrature",
            format!("need x_hi > x_lo and panels >= 1, got [{x_lo}, {x_hi}] with {panels}"),
        ));
    }
    let n = 4 * panels;
    let h = (x_hi - x_lo) / n as f64;
    let values: Vec<Complex64> = (0..=n)
        .map(|k| {
            let x = x_lo + k as f64 * h;
            let phase = Complex64::new(0.0, -x * xi).exp();
            phase * f(x)
        })
        .collect();
    boole_complex(h, &values)
}
