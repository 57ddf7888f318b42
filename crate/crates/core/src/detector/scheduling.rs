use crate::error::{Error, Result};
use crate::pilot::is_prime;
use crate::probstat::BinomialLaw;

/// Bracketing stops here; beyond this the log-gamma PMF loses precision.
const MAX_GROUP: u64 = 1 << 40;

/// `P(J ≥ M)` with `J ~ B(K, P_A)`: more simultaneous users than a
/// zero-forcing receiver with `M` antennas can separate.
fn outage(users: u64, antennas: u64, arrival: f64) -> Result<f64> {
    Ok(BinomialLaw::new(users, arrival)?.tail(antennas))
}

/// Largest `K` with `P(J ≥ M) ≤ P_O`. Returns 0 (and logs a warning) when
/// even a single user violates the outage limit.
pub fn max_scheduling_size(antennas: usize, arrival: f64, outage_limit: f64) -> Result<usize> {
    if antennas == 0 {
        return Err(Error::invalid("antenna count must be at least 1"));
    }
    if !(arrival > 0.0 && arrival <= 1.0) {
        return Err(Error::invalid(format!(
            "arrival rate {arrival} outside (0, 1]"
        )));
    }
    if !(outage_limit > 0.0 && outage_limit < 1.0) {
        return Err(Error::invalid(format!(
            "outage probability {outage_limit} outside (0, 1)"
        )));
    }
    let m = antennas as u64;
    let ok = |k: u64| outage(k, m, arrival).map(|p| p <= outage_limit);

    if !ok(1)? {
        log::warn!(
            "no feasible scheduling size: M = {antennas}, P_A = {arrival}, P_O = {outage_limit}"
        );
        return Ok(0);
    }
    let (mut lo, mut hi) = (1u64, 2u64);
    while ok(hi)? {
        lo = hi;
        hi *= 2;
        if hi > MAX_GROUP {
            return Err(Error::invalid(format!(
                "scheduling size exceeds {MAX_GROUP} at P_A = {arrival}"
            )));
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo as usize)
}

/// Smallest prime `L` with `L² − L ≥ K_max`.
pub fn min_pilot_length(k_max: usize) -> usize {
    (2..)
        .find(|&l| is_prime(l) && l * (l - 1) >= k_max)
        .expect("primes are unbounded")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Linear scan over K; independent of the bracketing search.
    fn brute_force(m: usize, pa: f64, po: f64, limit: usize) -> usize {
        let mut best = 0;
        for k in 1..=limit {
            if outage(k as u64, m as u64, pa).unwrap() <= po {
                best = k;
            } else {
                break;
            }
        }
        best
    }

    #[test]
    fn saturated_arrivals() {
        assert_eq!(max_scheduling_size(2, 1.0, 0.5).unwrap(), 1);
        assert_eq!(max_scheduling_size(10, 1.0, 0.01).unwrap(), 9);
        assert_eq!(max_scheduling_size(1, 1.0, 0.5).unwrap(), 0);
    }

    #[test]
    fn single_antenna_half_arrival() {
        // P(B(1, 0.5) ≥ 1) = 0.5 already exceeds 0.25.
        assert_eq!(brute_force(1, 0.5, 0.25, 3), 0);
        assert_eq!(max_scheduling_size(1, 0.5, 0.25).unwrap(), 0);
        // with a looser limit one user fits, two do not (0.75)
        assert_eq!(max_scheduling_size(1, 0.5, 0.6).unwrap(), 1);
    }

    #[test]
    fn large_array_reference() {
        assert_eq!(max_scheduling_size(512, 0.1, 0.1).unwrap(), 4846);
    }

    #[test]
    fn matches_brute_force() {
        for (m, pa, po) in [
            (4, 0.3, 0.05),
            (16, 0.1, 0.1),
            (32, 0.5, 0.01),
            (8, 0.9, 0.2),
        ] {
            let got = max_scheduling_size(m, pa, po).unwrap();
            assert_eq!(
                got,
                brute_force(m, pa, po, 10_000),
                "M={m} P_A={pa} P_O={po}"
            );
        }
    }

    #[test]
    fn argument_checks() {
        assert!(max_scheduling_size(0, 0.1, 0.1).is_err());
        assert!(max_scheduling_size(4, 0.0, 0.1).is_err());
        assert!(max_scheduling_size(4, 0.1, 1.0).is_err());
        assert!(max_scheduling_size(4, 1e-15, 0.1).is_err());
    }

    #[test]
    fn pilot_lengths() {
        assert_eq!(min_pilot_length(2), 2);
        assert_eq!(min_pilot_length(4846), 71);
        assert_eq!(min_pilot_length(42), 7);
        assert_eq!(min_pilot_length(43), 11);
        assert_eq!(min_pilot_length(1), 2);
    }

    #[test]
    fn monotone_over_grid() {
        let ms = [16, 32, 64, 128, 256, 512];
        let pas = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
        for &pa in &pas {
            let ks: Vec<_> = ms
                .iter()
                .map(|&m| max_scheduling_size(m, pa, 0.1).unwrap())
                .collect();
            assert!(ks.windows(2).all(|w| w[0] <= w[1]), "P_A={pa}: {ks:?}");
        }
        for &m in &ms {
            let ks: Vec<_> = pas
                .iter()
                .map(|&pa| max_scheduling_size(m, pa, 0.1).unwrap())
                .collect();
            assert!(ks.windows(2).all(|w| w[0] >= w[1]), "M={m}: {ks:?}");
        }
    }
}
