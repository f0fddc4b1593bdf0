//! Channel-use ledger of the antenna-scanning protocol.
//!
//! Measuring one antenna costs `q` channel uses and each switch costs `p`.
//! After `i` switches the receiver has spent `z_i = (i+1) q + i p`; telling
//! the transmitter to start costs `d` more, unless the feedback would not fit,
//! in which case it waits for the transmitter to start automatically at
//! `M (p+q)`, the instant an SC receiver would also be ready.

use crate::error::{Error, Result};

/// Latency budget and protocol overheads, all in channel uses (payload in bits).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProtocolBudget {
    pub u: u32,
    pub p: u32,
    pub q: u32,
    pub d: u32,
    pub antennas: u32,
    pub k: u32,
}

impl ProtocolBudget {
    pub fn new(u: u32, p: u32, q: u32, d: u32, antennas: u32, k: u32) -> Result<Self> {
        for (name, v) in [("u", u), ("p", p), ("q", q), ("d", d), ("k", k)] {
            if v == 0 {
                return Err(Error::Domain(format!("{name} must be a positive integer")));
            }
        }
        if antennas < 2 {
            return Err(Error::Domain(format!(
                "a diversity receiver needs at least 2 antennas, got {antennas}"
            )));
        }
        Ok(Self {
            u,
            p,
            q,
            d,
            antennas,
            k,
        })
    }

    /// Same budget with a different antenna count.
    pub fn with_antennas(&self, antennas: u32) -> Result<Self> {
        Self::new(self.u, self.p, self.q, self.d, antennas, self.k)
    }

    fn scan_overhead(&self) -> u64 {
        (self.p as u64 + self.q as u64) * self.antennas as u64
    }

    /// SC operation needs `u > (p+q) M`.
    pub fn feasible(&self) -> bool {
        self.u as u64 > self.scan_overhead()
    }

    fn require_feasible(&self) -> Result<()> {
        if self.feasible() {
            Ok(())
        } else {
            Err(Error::Infeasible(format!(
                "u > (p+q)M violated: u={} but (p+q)M=({}+{})*{}={}",
                self.u,
                self.p,
                self.q,
                self.antennas,
                self.scan_overhead()
            )))
        }
    }

    fn check_index(&self, i: u32, max: u32) -> Result<()> {
        if i <= max {
            Ok(())
        } else {
            Err(Error::Range {
                index: i as usize,
                max: max as usize,
            })
        }
    }

    /// Blocklength left to SC: `u - (p+q) M`.
    pub fn n_sc(&self) -> Result<u32> {
        self.require_feasible()?;
        Ok((self.u as u64 - self.scan_overhead()) as u32)
    }

    /// Channel uses consumed by `i` switches: `(i+1) q + i p`.
    pub fn z(&self, i: u32) -> Result<u32> {
        self.check_index(i, self.antennas - 1)?;
        Ok(self.z_unchecked(i) as u32)
    }

    fn z_unchecked(&self, i: u32) -> u64 {
        (i as u64 + 1) * self.q as u64 + i as u64 * self.p as u64
    }

    /// Feedback cost after `i` switches: `d` when it fits before the
    /// deadline (`d < u - z_i`), otherwise the wait `(M-i) p + (M-i-1) q`.
    pub fn actual_feedback_delay(&self, i: u32) -> Result<u32> {
        self.check_index(i, self.antennas - 1)?;
        Ok(self.feedback_unchecked(i) as u32)
    }

    fn feedback_unchecked(&self, i: u32) -> u64 {
        let z = self.z_unchecked(i) as i64;
        let d = self.d as i64;
        if d < self.u as i64 - z {
            self.d as u64
        } else {
            let rest = (self.antennas - i) as u64;
            rest * self.p as u64 + (rest - 1) * self.q as u64
        }
    }

    /// Blocklength available when transmission starts after `i` switches
    /// (`i < M`), or after the final switch to the best antenna (`i = M`).
    pub fn n_i(&self, i: u32) -> Result<u32> {
        self.check_index(i, self.antennas)?;
        if i == self.antennas {
            return self.n_sc();
        }
        let n = self.raw_blocklength(i);
        if n < 1 {
            return Err(Error::Infeasible(format!(
                "no channel uses left after {i} switches: u - (z_i + d_i) = {n}"
            )));
        }
        Ok(n as u32)
    }

    fn raw_blocklength(&self, i: u32) -> i64 {
        self.u as i64 - (self.z_unchecked(i) + self.feedback_unchecked(i)) as i64
    }

    /// `[n_0, ..., n_{M-1}, n_M]`. Entries for `i < M` may be `<= 0` when the
    /// budget is SC-feasible but a branch leaves no transmission time.
    pub fn blocklengths(&self) -> Result<Vec<i64>> {
        let n_sc = self.n_sc()?;
        let mut out: Vec<i64> = (0..self.antennas)
            .map(|i| self.raw_blocklength(i))
            .collect();
        out.push(n_sc as i64);
        Ok(out)
    }
}
