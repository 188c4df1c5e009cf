#![allow(dead_code)]

use std::path::PathBuf;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

pub fn crime_csv() -> PathBuf {
    data_dir().join("crime_synthetic.csv")
}

pub fn growth_csv() -> PathBuf {
    data_dir().join("growth_synthetic.csv")
}

pub fn fixture_config() -> sonify::Config {
    sonify::Config {
        crime_csv: Some(crime_csv()),
        growth_csv: Some(growth_csv()),
        ..sonify::Config::default()
    }
}

/// Hann-windowed magnitude spectrum; bin `i` is `i·sr/len` Hz.
pub fn magnitude_spectrum(x: &[f32]) -> Vec<f64> {
    let n = x.len();
    let mut buf: Vec<Complex<f64>> = x
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let w = 0.5 - 0.5 * (std::f64::consts::TAU * i as f64 / n as f64).cos();
            Complex::new(s as f64 * w, 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    buf[..n / 2].iter().map(|c| c.norm()).collect()
}

/// Frequency of the largest spectral peak over the middle half of `x`.
pub fn dominant_hz(x: &[f32], sample_rate: u32) -> f64 {
    let mid = &x[x.len() / 4..x.len() * 3 / 4];
    let mag = magnitude_spectrum(mid);
    let (bin, _) = mag
        .iter()
        .enumerate()
        .skip(1)
        .fold((0, 0.0), |best, (i, &m)| if m > best.1 { (i, m) } else { best });
    bin as f64 * sample_rate as f64 / mid.len() as f64
}

/// Magnitude-weighted mean frequency.
pub fn spectral_centroid(x: &[f32], sample_rate: u32) -> f64 {
    let mag = magnitude_spectrum(x);
    let hz = sample_rate as f64 / x.len() as f64;
    let num: f64 = mag.iter().enumerate().map(|(i, m)| i as f64 * hz * m).sum();
    num / mag.iter().sum::<f64>()
}

pub fn rms(x: &[f32]) -> f64 {
    (x.iter().map(|&s| (s as f64).powi(2)).sum::<f64>() / x.len().max(1) as f64).sqrt()
}

pub fn sine(hz: f64, sample_rate: u32, frames: usize, amp: f32) -> Vec<f32> {
    (0..frames)
        .map(|i| amp * (std::f64::consts::TAU * hz * i as f64 / sample_rate as f64).sin() as f32)
        .collect()
}
