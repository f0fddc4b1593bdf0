#![allow(dead_code)]

use divcomb::{ChannelModel, ProtocolBudget};

pub const K: u32 = 256;

pub fn fig1_budget() -> ProtocolBudget {
    ProtocolBudget::new(200, 4, 16, 24, 6, K).unwrap()
}

pub fn fig1_channel(db: f64) -> ChannelModel {
    ChannelModel::from_db(2.0, db).unwrap()
}

pub fn fig1_grid() -> impl Iterator<Item = f64> {
    (4..=20).map(|db| db as f64)
}

/// One transmission opportunity in the scanning protocol, counted one
/// channel use at a time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimelineStop {
    /// Channel uses spent scanning before the decision.
    pub scanned: u32,
    /// Channel uses between the decision and the start of data.
    pub delay: u32,
    /// Channel uses left for data.
    pub blocklength: i64,
}

/// Walks the protocol for a receiver that stops after `switches` switches
/// (or, for `switches == M`, scans everything and switches back to the best).
pub fn timeline(b: &ProtocolBudget, switches: u32) -> TimelineStop {
    let mut clock: u32 = 0;
    let tick = |clock: &mut u32, uses: u32| {
        for _ in 0..uses {
            *clock += 1;
        }
    };
    // first antenna is measured without a switch
    tick(&mut clock, b.q);
    let measured = switches.min(b.antennas - 1);
    for _ in 0..measured {
        tick(&mut clock, b.p);
        tick(&mut clock, b.q);
    }
    if switches == b.antennas {
        let scanned = clock;
        tick(&mut clock, b.p);
        return TimelineStop {
            scanned,
            delay: clock - scanned,
            blocklength: b.u as i64 - clock as i64,
        };
    }
    let scanned = clock;
    let feedback_done = clock + b.d;
    let start = if feedback_done < b.u {
        feedback_done
    } else {
        // stay silent: the transmitter starts by itself once it believes the
        // remaining antennas were scanned and the final switch happened
        let mut auto = clock;
        for _ in switches + 1..b.antennas {
            tick(&mut auto, b.p);
            tick(&mut auto, b.q);
        }
        tick(&mut auto, b.p);
        auto
    };
    TimelineStop {
        scanned,
        delay: start - scanned,
        blocklength: b.u as i64 - start as i64,
    }
}
