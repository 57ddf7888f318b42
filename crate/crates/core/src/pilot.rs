//! Zadoff-Chu pilot generation and the root/shift assignment rule.
//!
//! A prime length `L` yields `L - 1` roots with `L` cyclic shifts each. Shifts
//! of one root are mutually orthogonal; pilots from different roots correlate
//! with constant magnitude `sqrt(L)`. Users are spread over the fewest roots
//! possible, `ceil(K / L)`, round-robin so group sizes differ by at most one.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Trial-division primality test. Pilot lengths stay in the low thousands.
pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Number of distinct pilots available at length `L`: `L² − L`.
pub fn pilot_capacity(length: usize) -> usize {
    length * length.saturating_sub(1)
}

/// Identifies one pilot: prime length, root in `[1, L−1]`, zero-based cyclic shift in `[0, L−1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PilotSpec {
    length: usize,
    root: usize,
    shift: usize,
}

impl PilotSpec {
    pub fn new(length: usize, root: usize, shift: usize) -> Result<Self> {
        if !is_prime(length) {
            return Err(Error::invalid(format!(
                "pilot length {length} must be prime"
            )));
        }
        if root == 0 || root >= length {
            return Err(Error::invalid(format!(
                "root {root} outside [1, {}]",
                length - 1
            )));
        }
        if shift >= length {
            return Err(Error::invalid(format!(
                "shift {shift} outside [0, {}]",
                length - 1
            )));
        }
        Ok(Self {
            length,
            root,
            shift,
        })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn shift(&self) -> usize {
        self.shift
    }

    /// Materializes the sequence. See [`generate_zc`].
    pub fn sequence(&self) -> Vec<Complex64> {
        generate_zc(self)
    }
}

/// Entry `l` of the unshifted sequence is `exp(−iπ·r·l(l+1)/L)`; the output is
/// that sequence cyclically advanced so `out[l] = base[(l + s) mod L]`.
///
/// For the one even prime, `L = 2`, the exponent is `r·l²` instead, the
/// even-length Zadoff-Chu form; `l(l+1)` would make the two shifts antipodal.
pub fn generate_zc(spec: &PilotSpec) -> Vec<Complex64> {
    let len = spec.length as u64;
    let root = spec.root as u64;
    let modulus = 2 * len;
    let offset = len % 2;
    (0..spec.length)
        .map(|l| {
            let idx = ((l + spec.shift) % spec.length) as u64;
            // The phase only matters modulo 2π, i.e. r·l(l+1) modulo 2L.
            let k = (root % modulus) * ((idx * (idx + offset)) % modulus) % modulus;
            Complex64::from_polar(1.0, -PI * k as f64 / len as f64)
        })
        .collect()
}

/// Inner product `aᴴb = Σ conj(a_l)·b_l`.
pub fn cross_correlation(a: &[Complex64], b: &[Complex64]) -> Result<Complex64> {
    if a.len() != b.len() {
        return Err(Error::invalid(format!(
            "correlation length mismatch: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    Ok(a.iter().zip(b).map(|(x, y)| x.conj() * y).sum())
}

/// Per-user pilots for one scheduling group, plus the size of each root group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PilotAssignment {
    length: usize,
    pilots: Vec<PilotSpec>,
    root_group_sizes: BTreeMap<usize, usize>,
}

impl PilotAssignment {
    pub fn user_count(&self) -> usize {
        self.pilots.len()
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// Pilots in user order; index 0 is user 1.
    pub fn pilots(&self) -> &[PilotSpec] {
        &self.pilots
    }

    pub fn root_group_sizes(&self) -> &BTreeMap<usize, usize> {
        &self.root_group_sizes
    }

    pub fn roots_used(&self) -> usize {
        self.root_group_sizes.len()
    }

    /// Pilot of the 1-based user `user`.
    pub fn pilot_of(&self, user: usize) -> Result<&PilotSpec> {
        user.checked_sub(1)
            .and_then(|i| self.pilots.get(i))
            .ok_or_else(|| {
                Error::invalid(format!(
                    "user index {user} outside [1, {}]",
                    self.pilots.len()
                ))
            })
    }

    /// `K_r` for the root used by the 1-based user `user`.
    pub fn group_size_of(&self, user: usize) -> Result<usize> {
        let root = self.pilot_of(user)?.root;
        Ok(self.root_group_sizes[&root])
    }

    /// 1-based index of a user in the smallest root group (most cross-root interferers).
    pub fn worst_case_user(&self) -> usize {
        // Roots are handed out round-robin, so the last root has the fewest users.
        self.roots_used()
    }

    /// 1-based index of a user in the largest root group.
    pub fn best_case_user(&self) -> usize {
        1
    }

    pub fn sequences(&self) -> Vec<Vec<Complex64>> {
        self.pilots.iter().map(generate_zc).collect()
    }
}

/// Number of roots needed for `K` users at length `L`: `ceil(K / L)`.
pub fn roots_needed(users: usize, length: usize) -> usize {
    users.div_ceil(length)
}

/// User `j` (1-based) gets root `1 + (j−1) mod R` and zero-based shift
/// `floor((j−1) / R)`, where `R = ceil(K / L)`.
pub fn assign_pilots(users: usize, length: usize) -> Result<PilotAssignment> {
    if users == 0 {
        return Err(Error::invalid("user count must be at least 1"));
    }
    if !is_prime(length) {
        return Err(Error::invalid(format!(
            "pilot length {length} must be prime"
        )));
    }
    let capacity = pilot_capacity(length);
    if users > capacity {
        return Err(Error::CapacityExceeded {
            users,
            length,
            capacity,
        });
    }
    let roots = roots_needed(users, length);
    let mut root_group_sizes = BTreeMap::new();
    let pilots = (0..users)
        .map(|j| {
            let root = 1 + j % roots;
            *root_group_sizes.entry(root).or_insert(0) += 1;
            PilotSpec {
                length,
                root,
                shift: j / roots,
            }
        })
        .collect();
    Ok(PilotAssignment {
        length,
        pilots,
        root_group_sizes,
    })
}

/// Writes `index,re,im` rows (with header) at 17 significant digits.
pub fn write_sequence_csv<W: std::io::Write>(seq: &[Complex64], out: W) -> std::io::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(["index", "re", "im"])?;
    for (i, z) in seq.iter().enumerate() {
        w.write_record([i.to_string(), crate::fmt_f64(z.re), crate::fmt_f64(z.im)])?;
    }
    w.flush()
}
