//! Printed data rows used as fixtures: binary lottery pairs, quarter-law
//! sessions and conjunction pairs.

use crate::attraction::{quarter_law_check, QuarterLawReport};
use crate::Result;
use alloc::vec::Vec;

/// Rows `(optimal lottery index, f, p, p_exp, q_exp)` of the binary
/// near-equal-utility lottery pairs.
pub const KT_ROWS: [(usize, f64, f64, f64, f64); 18] = [
    (1, 0.50, 0.75, 0.82, 0.32),
    (0, 0.50, 0.75, 0.83, 0.33),
    (1, 0.48, 0.73, 0.80, 0.32),
    (0, 0.52, 0.77, 0.65, 0.13),
    (1, 0.50, 0.75, 0.86, 0.36),
    (0, 0.50, 0.75, 0.73, 0.23),
    (1, 0.50, 0.75, 0.82, 0.32),
    (0, 0.50, 0.75, 0.72, 0.22),
    (1, 0.50, 0.75, 0.84, 0.34),
    (1, 0.50, 0.75, 0.80, 0.30),
    (0, 0.48, 0.73, 0.92, 0.44),
    (1, 0.52, 0.77, 0.58, 0.06),
    (1, 0.50, 0.75, 0.92, 0.42),
    (0, 0.50, 0.75, 0.70, 0.20),
    (0, 0.50, 0.75, 0.69, 0.19),
    (0, 0.50, 0.75, 0.70, 0.20),
    (1, 0.50, 0.75, 0.83, 0.33),
    (0, 0.50, 0.75, 0.69, 0.19),
];

/// Printed averages `(f, p, p_exp, q_exp)` over [`KT_ROWS`].
pub const KT_AVERAGES: (f64, f64, f64, f64) = (0.50, 0.75, 0.77, 0.27);

/// Optimal lotteries with only gains. Rows `(f, p_1, p_2, q_1, q_2)` for two sessions.
pub const GAINS_ROWS: [[f64; 5]; 27] = [
    [0.55, 0.86, 0.89, 0.31, 0.34],
    [0.48, 0.66, 0.69, 0.18, 0.21],
    [0.51, 0.68, 0.62, 0.17, 0.11],
    [0.59, 0.80, 0.75, 0.22, 0.17],
    [0.63, 0.89, 0.90, 0.26, 0.27],
    [0.66, 0.96, 0.95, 0.30, 0.29],
    [0.51, 0.79, 0.81, 0.28, 0.30],
    [0.48, 0.60, 0.63, 0.12, 0.15],
    [0.63, 0.88, 0.92, 0.26, 0.30],
    [0.56, 0.89, 0.82, 0.33, 0.26],
    [0.63, 0.77, 0.73, 0.14, 0.10],
    [0.51, 0.72, 0.73, 0.21, 0.21],
    [0.61, 0.87, 0.85, 0.26, 0.24],
    [0.63, 0.93, 0.93, 0.30, 0.30],
    [0.64, 0.85, 0.87, 0.21, 0.23],
    [0.64, 0.80, 0.80, 0.16, 0.16],
    [0.64, 0.89, 0.89, 0.25, 0.25],
    [0.48, 0.65, 0.70, 0.17, 0.22],
    [0.65, 0.87, 0.93, 0.22, 0.28],
    [0.66, 0.86, 0.82, 0.20, 0.16],
    [0.58, 0.84, 0.80, 0.26, 0.22],
    [0.52, 0.75, 0.74, 0.23, 0.22],
    [0.48, 0.64, 0.65, 0.16, 0.17],
    [0.44, 0.60, 0.53, 0.16, 0.10],
    [0.62, 0.73, 0.79, 0.11, 0.17],
    [0.64, 0.81, 0.90, 0.17, 0.26],
    [0.66, 0.93, 0.96, 0.27, 0.30],
];

pub const GAINS_AVERAGES: [f64; 5] = [0.58, 0.80, 0.80, 0.22, 0.22];

/// Optimal lotteries with only losses. Rows `(f, p_1, p_2, q_1, q_2)` for two sessions.
pub const LOSSES_ROWS: [[f64; 5]; 19] = [
    [0.52, 0.77, 0.75, 0.25, 0.23],
    [0.60, 0.85, 0.83, 0.25, 0.23],
    [0.53, 0.72, 0.71, 0.19, 0.18],
    [0.64, 0.96, 0.92, 0.32, 0.28],
    [0.55, 0.70, 0.68, 0.15, 0.13],
    [0.54, 0.73, 0.72, 0.20, 0.19],
    [0.63, 0.79, 0.84, 0.16, 0.21],
    [0.54, 0.66, 0.63, 0.12, 0.09],
    [0.56, 0.80, 0.89, 0.24, 0.33],
    [0.58, 0.89, 0.92, 0.31, 0.34],
    [0.49, 0.66, 0.71, 0.17, 0.22],
    [0.62, 0.87, 0.93, 0.25, 0.31],
    [0.55, 0.79, 0.74, 0.24, 0.19],
    [0.54, 0.82, 0.77, 0.29, 0.24],
    [0.53, 0.65, 0.70, 0.12, 0.17],
    [0.51, 0.59, 0.62, 0.08, 0.11],
    [0.56, 0.79, 0.86, 0.23, 0.30],
    [0.58, 0.89, 0.90, 0.31, 0.32],
    [0.61, 0.76, 0.74, 0.15, 0.13],
];

pub const LOSSES_AVERAGES: [f64; 5] = [0.56, 0.77, 0.78, 0.21, 0.22];

/// Mixed lotteries in the positive quality class. Rows `(f, p_1, p_2, q_1, q_2)` for two sessions.
pub const MIXED_ROWS: [[f64; 5]; 21] = [
    [0.40, 0.69, 0.66, 0.29, 0.26],
    [0.62, 0.85, 0.85, 0.23, 0.23],
    [0.67, 0.87, 0.82, 0.20, 0.15],
    [0.44, 0.62, 0.61, 0.18, 0.17],
    [0.50, 0.64, 0.54, 0.15, 0.05],
    [0.59, 0.71, 0.65, 0.12, 0.06],
    [0.54, 0.69, 0.63, 0.16, 0.10],
    [0.49, 0.66, 0.60, 0.18, 0.16],
    [0.57, 0.87, 0.85, 0.30, 0.28],
    [0.65, 0.75, 0.77, 0.10, 0.12],
    [0.52, 0.77, 0.70, 0.26, 0.19],
    [0.49, 0.58, 0.63, 0.09, 0.14],
    [0.55, 0.87, 0.92, 0.32, 0.37],
    [0.52, 0.61, 0.67, 0.09, 0.15],
    [0.53, 0.80, 0.83, 0.27, 0.30],
    [0.56, 0.67, 0.63, 0.11, 0.07],
    [0.00, 0.27, 0.27, 0.27, 0.27],
    [0.00, 0.29, 0.36, 0.29, 0.36],
    [0.00, 0.30, 0.45, 0.30, 0.45],
    [0.00, 0.39, 0.38, 0.39, 0.38],
    [0.00, 0.37, 0.35, 0.37, 0.35],
];

pub const MIXED_AVERAGES: [f64; 5] = [0.41, 0.63, 0.63, 0.22, 0.22];
/// Conjunction pairs `(primary, secondary, p(A1B1), p(A1), error)`.
pub const CONJUNCTION_ROWS: [(&str, &str, f64, f64, f64); 14] = [
    ("bank teller", "feminist", 0.401, 0.241, 0.160),
    ("bird watcher", "truck driver", 0.274, 0.173, 0.101),
    ("bicycle racer", "nurse", 0.226, 0.160, 0.066),
    ("drum player", "professor", 0.367, 0.266, 0.101),
    ("boxer", "chef", 0.269, 0.202, 0.067),
    ("volleyboller", "engineer", 0.282, 0.194, 0.088),
    ("librarian", "aerobic trainer", 0.377, 0.152, 0.225),
    ("hair dresser", "writer", 0.252, 0.188, 0.064),
    ("floriculturist", "state worker", 0.471, 0.310, 0.161),
    ("bus driver", "painter", 0.314, 0.172, 0.142),
    ("knitter", "correspondent", 0.580, 0.315, 0.265),
    ("construction worker", "labor-union president", 0.249, 0.131, 0.118),
    ("flute player", "car mechanic", 0.339, 0.180, 0.159),
    ("student", "fashion-monger", 0.439, 0.392, 0.047),
];

/// Printed averages `(p(A1B1), p(A1), error)` over [`CONJUNCTION_ROWS`].
pub const CONJUNCTION_AVERAGES: (f64, f64, f64) = (0.346, 0.220, 0.126);

/// One two-session table of observed choice fractions.
#[derive(Debug, Clone, Copy)]
pub struct SessionTable {
    pub name: &'static str,
    pub rows: &'static [[f64; 5]],
    pub averages: [f64; 5],
}

impl SessionTable {
    /// Quarter-law report for session 1 or 2 from `(p_i, f)` records.
    pub fn session(&self, session: usize) -> Result<QuarterLawReport> {
        let col = match session {
            1 => 1,
            2 => 2,
            _ => return Err(crate::Error::Domain("session must be 1 or 2")),
        };
        let records: Vec<(f64, f64)> = self.rows.iter().map(|r| (r[col], r[0])).collect();
        quarter_law_check(&records)
    }

    /// Printed mean attraction factor for a session.
    pub fn printed_mean_q(&self, session: usize) -> f64 {
        self.averages[2 + session]
    }
}

pub const SESSION_TABLES: [SessionTable; 3] = [
    SessionTable {
        name: "gains",
        rows: &GAINS_ROWS,
        averages: GAINS_AVERAGES,
    },
    SessionTable {
        name: "losses",
        rows: &LOSSES_ROWS,
        averages: LOSSES_AVERAGES,
    },
    SessionTable {
        name: "mixed",
        rows: &MIXED_ROWS,
        averages: MIXED_AVERAGES,
    },
];
