//! Spectra of `αŜ₀ + χŜ₊Ŝ₋` (SU(2)) and `αK̂₀ + χK̂₊K̂₋` (SU(1,1)): exact,
//! random-phase (RPA) boson image, and shifted-harmonic (SHA) limit.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::half::HalfInt;
use crate::kernels::Group;

/// Default upper bound on the number of enumerated levels.
pub const DEFAULT_LEVEL_CAP: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CouplingParams {
    pub alpha: f64,
    pub chi: f64,
}

impl CouplingParams {
    pub fn new(alpha: f64, chi: f64) -> Result<Self> {
        if !alpha.is_finite() || !chi.is_finite() {
            return Err(Error::Domain { field: "alpha/chi", reason: format!("must be finite, got α={alpha}, χ={chi}") });
        }
        Ok(CouplingParams { alpha, chi })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumMethod {
    Exact,
    Rpa,
    ShaLimit,
}

impl fmt::Display for SpectrumMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpectrumMethod::Exact => "exact",
            SpectrumMethod::Rpa => "rpa",
            SpectrumMethod::ShaLimit => "sha_limit",
        })
    }
}

impl FromStr for SpectrumMethod {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "exact" => Ok(SpectrumMethod::Exact),
            "rpa" => Ok(SpectrumMethod::Rpa),
            "sha" | "sha_limit" | "sha-limit" => Ok(SpectrumMethod::ShaLimit),
            other => Err(format!("unknown spectrum method `{other}` (expected exact, rpa or sha_limit)")),
        }
    }
}

/// Quantum numbers attached to a level.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Labels {
    /// SU(2) coupled basis `|S, M⟩`.
    Coupled {
        #[serde(rename = "S")]
        total_s: HalfInt,
        #[serde(rename = "M")]
        total_m: HalfInt,
    },
    /// SU(2) RPA: `c` quanta `n = σ−S`, `b` quanta `m = M+S`.
    Boson { n: u64, m: u64 },
    /// SU(2) SHA limit: oscillator quanta `n = σ−S` and rotor label `M`.
    Rotor {
        n: u64,
        #[serde(rename = "M")]
        total_m: HalfInt,
    },
    /// SU(1,1) `(N, n)`, with `K = N − n + k1 + k2`.
    Su11 {
        #[serde(rename = "N")]
        big_n: u64,
        n: u64,
    },
}

impl fmt::Display for Labels {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Labels::Coupled { total_s, total_m } => write!(f, "S={total_s} M={total_m}"),
            Labels::Boson { n, m } => write!(f, "n={n} m={m}"),
            Labels::Rotor { n, total_m } => write!(f, "n={n} M={total_m}"),
            Labels::Su11 { big_n, n } => write!(f, "N={big_n} n={n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumLevel {
    pub group: Group,
    pub labels: Labels,
    pub energy: f64,
    pub method: SpectrumMethod,
    /// The violated validity inequality, when the approximation is evaluated outside its domain.
    pub outside_validity: Option<String>,
}

fn check_spins(s1: HalfInt, s2: HalfInt) -> Result<()> {
    if s1.twice() < 0 || s2.twice() < 0 {
        return Err(Error::Domain { field: "s", reason: format!("spins must be non-negative, got {s1}, {s2}") });
    }
    Ok(())
}

fn check_bargmann(k1: f64, k2: f64) -> Result<()> {
    let ok = |k: f64| k.is_finite() && k > 0.0;
    if !ok(k1) || !ok(k2) {
        return Err(Error::Domain { field: "k", reason: format!("Bargmann indices must be positive, got {k1}, {k2}") });
    }
    Ok(())
}

fn check_cap(count: u128, cap: u64) -> Result<()> {
    if count > cap as u128 {
        return Err(Error::EnumerationCap { count, cap });
    }
    Ok(())
}

/// `E = αM + χ[S(S+1) − M(M−1)]`.
pub fn su2_exact_energy(params: CouplingParams, total_s: HalfInt, total_m: HalfInt) -> f64 {
    let (s, m) = (total_s.to_f64(), total_m.to_f64());
    params.alpha * m + params.chi * (s * (s + 1.0) - m * (m - 1.0))
}

/// All `(S, M)` pairs of `s1 ⊗ s2`, in order of increasing S then M.
fn su2_levels(s1: HalfInt, s2: HalfInt, cap: u64) -> Result<Vec<(HalfInt, HalfInt)>> {
    check_spins(s1, s2)?;
    let count = (s1.twice() as u128 + 1) * (s2.twice() as u128 + 1);
    check_cap(count, cap)?;
    let mut out = Vec::with_capacity(count as usize);
    let mut s = (s1 - s2).abs();
    while s <= s1 + s2 {
        let mut m = -s;
        while m <= s {
            out.push((s, m));
            m = m + HalfInt::from_int(1);
        }
        s = s + HalfInt::from_int(1);
    }
    Ok(out)
}

/// Exact SU(2) spectrum over `S = |s1−s2|..s1+s2`, `M = −S..S`.
pub fn su2_exact_spectrum(s1: HalfInt, s2: HalfInt, params: CouplingParams, cap: u64) -> Result<Vec<SpectrumLevel>> {
    Ok(su2_levels(s1, s2, cap)?
        .into_iter()
        .map(|(s, m)| SpectrumLevel {
            group: Group::Su2,
            labels: Labels::Coupled { total_s: s, total_m: m },
            energy: su2_exact_energy(params, s, m),
            method: SpectrumMethod::Exact,
            outside_validity: None,
        })
        .collect())
}

fn su2_rpa_frequency(sigma: f64, params: CouplingParams) -> f64 {
    params.alpha + params.chi * (2.0 * sigma + 1.0)
}

/// RPA level `E = −ασ + αn + [α + χ(2σ+1)]m`; flagged when the m-mode frequency is not positive.
pub fn su2_rpa_level(s1: HalfInt, s2: HalfInt, params: CouplingParams, n: u64, m: u64) -> SpectrumLevel {
    let sigma = (s1 + s2).to_f64();
    let freq = su2_rpa_frequency(sigma, params);
    SpectrumLevel {
        group: Group::Su2,
        labels: Labels::Boson { n, m },
        energy: -params.alpha * sigma + params.alpha * n as f64 + freq * m as f64,
        method: SpectrumMethod::Rpa,
        outside_validity: (freq <= 0.0).then(|| format!("alpha+chi*(2*sigma+1) = {freq} <= 0")),
    }
}

/// SHA-limit level `E = χσ(σ+1) − χ(2σ+1)n + αM − χM(M−1)`; flagged where the RPA is valid.
pub fn su2_sha_limit_level(s1: HalfInt, s2: HalfInt, params: CouplingParams, n: u64, total_m: HalfInt) -> SpectrumLevel {
    let sigma = (s1 + s2).to_f64();
    let m = total_m.to_f64();
    let (alpha, chi) = (params.alpha, params.chi);
    let freq = su2_rpa_frequency(sigma, params);
    let flag = if chi >= 0.0 {
        Some(format!("chi = {chi} >= 0"))
    } else if freq > 0.0 {
        Some(format!("alpha+chi*(2*sigma+1) = {freq} > 0"))
    } else {
        None
    };
    SpectrumLevel {
        group: Group::Su2,
        labels: Labels::Rotor { n, total_m },
        energy: chi * sigma * (sigma + 1.0) - chi * (2.0 * sigma + 1.0) * n as f64 + alpha * m - chi * m * (m - 1.0),
        method: SpectrumMethod::ShaLimit,
        outside_validity: flag,
    }
}

/// RPA levels relabelled from every exact `(S, M)`: `n = σ−S`, `m = M+S`.
pub fn su2_rpa_spectrum(s1: HalfInt, s2: HalfInt, params: CouplingParams, cap: u64) -> Result<Vec<SpectrumLevel>> {
    let sigma = s1 + s2;
    Ok(su2_levels(s1, s2, cap)?
        .into_iter()
        .map(|(s, m)| {
            let n = (sigma - s).as_int().expect("σ−S is integral") as u64;
            let b = (m + s).as_int().expect("M+S is integral") as u64;
            su2_rpa_level(s1, s2, params, n, b)
        })
        .collect())
}

/// SHA-limit levels relabelled from every exact `(S, M)`: `n = σ−S`, same `M`.
pub fn su2_sha_limit_spectrum(s1: HalfInt, s2: HalfInt, params: CouplingParams, cap: u64) -> Result<Vec<SpectrumLevel>> {
    let sigma = s1 + s2;
    Ok(su2_levels(s1, s2, cap)?
        .into_iter()
        .map(|(s, m)| {
            let n = (sigma - s).as_int().expect("σ−S is integral") as u64;
            su2_sha_limit_level(s1, s2, params, n, m)
        })
        .collect())
}

/// `E = α(K+n) + χ(2K+n−1)n` with `K = N−n+k1+k2`.
pub fn su11_exact_energy(k1: f64, k2: f64, params: CouplingParams, big_n: u64, n: u64) -> f64 {
    let (big_n, n) = (big_n as f64, n as f64);
    let big_k = big_n - n + k1 + k2;
    params.alpha * (big_k + n) + params.chi * (2.0 * big_k + n - 1.0) * n
}

/// RPA level `E = α(k1+k2) + αN + χ(2k1+2k2−1)n`.
pub fn su11_rpa_level(k1: f64, k2: f64, params: CouplingParams, big_n: u64, n: u64) -> SpectrumLevel {
    SpectrumLevel {
        group: Group::Su11,
        labels: Labels::Su11 { big_n, n },
        energy: params.alpha * (k1 + k2 + big_n as f64) + params.chi * (2.0 * (k1 + k2) - 1.0) * n as f64,
        method: SpectrumMethod::Rpa,
        outside_validity: None,
    }
}

/// SHA-limit level `E = α(k1+k2+N) + 2χ(k1+k2+N)n`.
pub fn su11_sha_limit_level(k1: f64, k2: f64, params: CouplingParams, big_n: u64, n: u64) -> SpectrumLevel {
    let total = k1 + k2 + big_n as f64;
    SpectrumLevel {
        group: Group::Su11,
        labels: Labels::Su11 { big_n, n },
        energy: params.alpha * total + 2.0 * params.chi * total * n as f64,
        method: SpectrumMethod::ShaLimit,
        outside_validity: None,
    }
}

/// SU(1,1) levels for `N = 0..=n_max`, `n = 0..=N`, by the requested method.
pub fn su11_spectrum(
    k1: f64,
    k2: f64,
    n_max: u64,
    params: CouplingParams,
    method: SpectrumMethod,
    cap: u64,
) -> Result<Vec<SpectrumLevel>> {
    check_bargmann(k1, k2)?;
    let count = (n_max as u128 + 1) * (n_max as u128 + 2) / 2;
    check_cap(count, cap)?;
    let mut out = Vec::with_capacity(count as usize);
    for big_n in 0..=n_max {
        for n in 0..=big_n {
            out.push(match method {
                SpectrumMethod::Exact => SpectrumLevel {
                    group: Group::Su11,
                    labels: Labels::Su11 { big_n, n },
                    energy: su11_exact_energy(k1, k2, params, big_n, n),
                    method,
                    outside_validity: None,
                },
                SpectrumMethod::Rpa => su11_rpa_level(k1, k2, params, big_n, n),
                SpectrumMethod::ShaLimit => su11_sha_limit_level(k1, k2, params, big_n, n),
            });
        }
    }
    Ok(out)
}

/// SU(2) spectrum by the requested method.
pub fn su2_spectrum(
    s1: HalfInt,
    s2: HalfInt,
    params: CouplingParams,
    method: SpectrumMethod,
    cap: u64,
) -> Result<Vec<SpectrumLevel>> {
    match method {
        SpectrumMethod::Exact => su2_exact_spectrum(s1, s2, params, cap),
        SpectrumMethod::Rpa => su2_rpa_spectrum(s1, s2, params, cap),
        SpectrumMethod::ShaLimit => su2_sha_limit_spectrum(s1, s2, params, cap),
    }
}

/// First level of minimal energy, in enumeration order.
pub fn argmin(levels: &[SpectrumLevel]) -> Option<&SpectrumLevel> {
    levels.iter().reduce(|best, l| if l.energy < best.energy { l } else { best })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn int(n: i64) -> HalfInt {
        HalfInt::from_int(n)
    }

    fn p(alpha: f64, chi: f64) -> CouplingParams {
        CouplingParams::new(alpha, chi).unwrap()
    }

    fn coupled(level: &SpectrumLevel) -> (HalfInt, HalfInt) {
        match level.labels {
            Labels::Coupled { total_s, total_m } => (total_s, total_m),
            other => panic!("unexpected labels {other}"),
        }
    }

    #[test]
    fn su2_exact_argmin_examples() {
        let levels = su2_exact_spectrum(int(1), int(1), p(1.0, -0.1), DEFAULT_LEVEL_CAP).unwrap();
        assert_eq!(levels.len(), 9);
        let low = argmin(&levels).unwrap();
        assert_eq!(coupled(low), (int(2), int(-2)));
        assert_eq!(low.energy, -2.0);

        let levels = su2_exact_spectrum(int(1), int(1), p(1.0, -2.0), DEFAULT_LEVEL_CAP).unwrap();
        let low = argmin(&levels).unwrap();
        assert_eq!(coupled(low), (int(2), int(0)));
        assert_eq!(low.energy, -12.0);
    }

    #[test]
    fn su2_rpa_examples() {
        let level = su2_rpa_level(int(20), int(15), p(1.0, 0.0), 0, 0);
        assert_eq!(level.energy, -35.0);
        assert!(level.outside_validity.is_none());
        assert!(su2_rpa_level(int(20), int(15), p(1.0, -1.0), 0, 0).outside_validity.is_some());
    }

    #[test]
    fn su2_sha_limit_examples() {
        let level = su2_sha_limit_level(int(1), int(1), p(1.0, -2.0), 0, HalfInt::ZERO);
        assert_eq!(level.energy, -12.0);
        assert!(level.outside_validity.is_none());
        for alpha in [-3.0, 0.0, 0.5, 7.0] {
            assert_eq!(su2_sha_limit_level(int(3), int(2), p(alpha, -0.7), 1, HalfInt::ZERO).energy, su2_sha_limit_level(int(3), int(2), p(0.0, -0.7), 1, HalfInt::ZERO).energy);
        }
        assert!(su2_sha_limit_level(int(1), int(1), p(1.0, -0.1), 0, HalfInt::ZERO).outside_validity.is_some());
    }

    #[test]
    fn su11_examples() {
        let params = p(1.0, 1.0);
        assert_eq!(su11_exact_energy(0.5, 0.5, params, 0, 0), 1.0);
        assert_eq!(su11_rpa_level(0.5, 0.5, params, 0, 1).energy, 2.0);
        // k1 + k2 + N = 12.
        assert_eq!(su11_sha_limit_level(0.5, 0.5, params, 11, 2).energy, 60.0);
        assert_eq!(su11_spectrum(0.5, 1.5, 3, params, SpectrumMethod::Exact, DEFAULT_LEVEL_CAP).unwrap().len(), 10);
    }

    #[test]
    fn enumeration_cap() {
        let err = su2_exact_spectrum(int(1000), int(1000), p(1.0, 0.0), DEFAULT_LEVEL_CAP).unwrap_err();
        assert_eq!(err, Error::EnumerationCap { count: 2001 * 2001, cap: DEFAULT_LEVEL_CAP });
        assert!(su11_spectrum(1.0, 1.0, 2000, p(1.0, 0.0), SpectrumMethod::Exact, DEFAULT_LEVEL_CAP).is_err());
        assert_eq!(su2_exact_spectrum(int(1), int(1), p(1.0, 0.0), 9).unwrap().len(), 9);
    }

    #[test]
    fn relabelled_spectra_align_with_exact() {
        let (s1, s2) = (HalfInt::from_twice(5), int(2));
        let params = p(1.0, -0.05);
        let exact = su2_exact_spectrum(s1, s2, params, DEFAULT_LEVEL_CAP).unwrap();
        let rpa = su2_rpa_spectrum(s1, s2, params, DEFAULT_LEVEL_CAP).unwrap();
        assert_eq!(exact.len(), rpa.len());
        let (s, m) = coupled(&exact[exact.len() - 1]);
        assert_eq!((s, m), (s1 + s2, s1 + s2));
        assert_eq!(rpa[rpa.len() - 1].labels, Labels::Boson { n: 0, m: 9 });
        // At n = 0, m = 0 the RPA energy is exact.
        let top = exact.iter().find(|l| coupled(l) == (s1 + s2, -(s1 + s2))).unwrap();
        assert_eq!(top.energy, su2_rpa_level(s1, s2, params, 0, 0).energy);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(CouplingParams::new(f64::NAN, 1.0).is_err());
        assert!(su11_spectrum(0.0, 1.0, 3, p(1.0, 1.0), SpectrumMethod::Exact, DEFAULT_LEVEL_CAP).is_err());
        assert!(su11_spectrum(f64::INFINITY, 1.0, 3, p(1.0, 1.0), SpectrumMethod::Exact, DEFAULT_LEVEL_CAP).is_err());
        assert!(su2_exact_spectrum(HalfInt::from_twice(-1), int(1), p(1.0, 1.0), DEFAULT_LEVEL_CAP).is_err());
    }

    proptest! {
        /// The ground state is the M = −S stretched state exactly when α + 2χσ ≥ 0.
        #[test]
        fn ground_state_flip_threshold(t1 in 1i64..=8, t2 in 1i64..=8, chi in -3.0f64..0.5) {
            let (s1, s2) = (HalfInt::from_twice(t1), HalfInt::from_twice(t2));
            let sigma = (s1 + s2).to_f64();
            let params = p(1.0, chi);
            prop_assume!((1.0 + 2.0 * chi * sigma).abs() > 1e-9);
            let levels = su2_exact_spectrum(s1, s2, params, DEFAULT_LEVEL_CAP).unwrap();
            let (s, m) = coupled(argmin(&levels).unwrap());
            if 1.0 + 2.0 * chi * sigma > 0.0 {
                prop_assert_eq!((s, m), (s1 + s2, -(s1 + s2)));
            } else {
                prop_assert_eq!(s, s1 + s2);
                prop_assert!(m.twice() > -(s1 + s2).twice());
            }
        }

        #[test]
        fn su2_exact_energy_count(t1 in 0i64..=12, t2 in 0i64..=12) {
            let levels = su2_exact_spectrum(HalfInt::from_twice(t1), HalfInt::from_twice(t2), p(1.0, 0.3), DEFAULT_LEVEL_CAP).unwrap();
            prop_assert_eq!(levels.len() as i64, (t1 + 1) * (t2 + 1));
        }
    }
}
