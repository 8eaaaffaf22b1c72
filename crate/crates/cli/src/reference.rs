//! Published ground energies, compiled in so that verification never
//! compares the solver against its own earlier output.

use schupp_core::{Crossing, LatticeSpec};

/// Open-chain ground energies `(N, E_N)` at `J = 1`.
pub const CHAIN: [(usize, f64); 27] = [
    (2, -0.750000000000),
    (3, -1.000000000000),
    (4, -1.616025403784),
    (5, -1.927886253318),
    (6, -2.493577133888),
    (7, -2.836239680687),
    (8, -3.374932598688),
    (9, -3.736321706379),
    (10, -4.258035207283),
    (11, -4.632093302360),
    (12, -5.142090632841),
    (13, -5.525322097084),
    (14, -6.026724661862),
    (15, -6.416920491794),
    (16, -6.911737145575),
    (17, -7.307408708036),
    (18, -7.797011068537),
    (19, -8.197105741633),
    (20, -8.682473334399),
    (21, -9.086218400935),
    (22, -9.568075875984),
    (23, -9.974886805423),
    (24, -10.453785760410),
    (25, -10.863209352260),
    (26, -11.339579652755),
    (27, -11.751257222131),
    (28, -12.225440548603),
];

/// The four lattice variants tabulated for each quasi-two-dimensional size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Square,
    PyroA,
    PyroB,
    XLattice,
}

impl Variant {
    pub const ALL: [Variant; 4] = [
        Variant::Square,
        Variant::PyroA,
        Variant::PyroB,
        Variant::XLattice,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Variant::Square => "square",
            Variant::PyroA => "pyro-a",
            Variant::PyroB => "pyro-b",
            Variant::XLattice => "x",
        }
    }

    /// The lattice this variant denotes at width `ny` and length `nx`.
    /// Two-leg sizes map onto the ladder families, wider ones onto
    /// rectangles with the matching crossing pattern.
    pub fn spec(self, nx: usize, ny: usize) -> LatticeSpec {
        if ny == 2 {
            match self {
                Variant::Square => LatticeSpec::square_ladder(nx),
                Variant::PyroA => LatticeSpec::pyro_a(nx),
                Variant::PyroB => LatticeSpec::pyro_b(nx),
                Variant::XLattice => LatticeSpec::crossed_ladder(nx),
            }
        } else {
            let crossing = match self {
                Variant::Square => Crossing::None,
                Variant::PyroA => Crossing::CheckerA,
                Variant::PyroB => Crossing::CheckerB,
                Variant::XLattice => Crossing::All,
            };
            LatticeSpec::rectangle(nx, ny, crossing)
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Quasi2dRow {
    pub ny: usize,
    pub nx: usize,
    /// In [`Variant::ALL`] order.
    pub energies: [f64; 4],
}

/// Quasi-two-dimensional ground energies, `ny` rows by `nx` columns.
pub const QUASI_2D: [Quasi2dRow; 23] = [
    Quasi2dRow {
        ny: 2,
        nx: 2,
        energies: [
            -2.0000000000000,
            -1.5000000000000,
            -2.0000000000000,
            -1.7500000000000,
        ],
    },
    Quasi2dRow {
        ny: 2,
        nx: 3,
        energies: [
            -3.1293852415718,
            -2.7500000000000,
            -2.7500000000000,
            -2.6778862533180,
        ],
    },
    Quasi2dRow {
        ny: 2,
        nx: 4,
        energies: [
            -4.2930664566570,
            -3.5000000000000,
            -4.0277505942154,
            -3.6418298745657,
        ],
    },
    Quasi2dRow {
        ny: 2,
        nx: 5,
        energies: [
            -5.4467120643352,
            -4.7777505942154,
            -4.7777505942154,
            -4.5873084880937,
        ],
    },
    Quasi2dRow {
        ny: 2,
        nx: 6,
        energies: [
            -6.6034724753869,
            -5.5277505942154,
            -6.0607411404916,
            -5.5431961748705,
        ],
    },
    Quasi2dRow {
        ny: 2,
        nx: 7,
        energies: [
            -7.7593260611500,
            -6.8107411404916,
            -6.8107411404916,
            -6.4933181096298,
        ],
    },
    Quasi2dRow {
        ny: 2,
        nx: 8,
        energies: [
            -8.9154711235558,
            -7.5607411404916,
            -8.0949932311853,
            -7.4467788894730,
        ],
    },
    Quasi2dRow {
        ny: 2,
        nx: 9,
        energies: [
            -10.0715341613484,
            -8.8449932311853,
            -8.8449932311853,
            -8.3983424061390,
        ],
    },
    Quasi2dRow {
        ny: 2,
        nx: 10,
        energies: [
            -11.2276251173666,
            -9.5949932311853,
            -10.1295778777187,
            -9.3510128680377,
        ],
    },
    Quasi2dRow {
        ny: 2,
        nx: 11,
        energies: [
            -12.3837088687482,
            -10.8795778777187,
            -10.8795778777186,
            -10.3030475515486,
        ],
    },
    Quasi2dRow {
        ny: 2,
        nx: 12,
        energies: [
            -13.5397954074066,
            -11.6295778777187,
            -12.1642537019725,
            -11.2554538123736,
        ],
    },
    Quasi2dRow {
        ny: 2,
        nx: 13,
        energies: [
            -14.6958813681522,
            -12.9142537019725,
            -12.9142537019725,
            -12.2076455365328,
        ],
    },
    Quasi2dRow {
        ny: 2,
        nx: 14,
        energies: [
            -15.8519676317127,
            -13.6642537019726,
            -14.1989549790545,
            -13.1599626306679,
        ],
    },
    Quasi2dRow {
        ny: 3,
        nx: 3,
        energies: [
            -4.7493272585528,
            -4.0087848535303,
            -4.0087848535303,
            -3.9593399973975,
        ],
    },
    Quasi2dRow {
        ny: 3,
        nx: 4,
        energies: [
            -6.6916801935149,
            -5.6617068232824,
            -5.6617068232824,
            -5.5345034217058,
        ],
    },
    Quasi2dRow {
        ny: 3,
        nx: 5,
        energies: [
            -8.3876285183968,
            -6.9910226671666,
            -6.9910226671666,
            -6.8685484091210,
        ],
    },
    Quasi2dRow {
        ny: 3,
        nx: 6,
        energies: [
            -10.2835182238578,
            -8.5954218204916,
            -8.5954218204916,
            -8.4037660947387,
        ],
    },
    Quasi2dRow {
        ny: 3,
        nx: 7,
        energies: [
            -12.0072308867337,
            -9.9647656528603,
            -9.9647656528602,
            -9.7629674917248,
        ],
    },
    Quasi2dRow {
        ny: 3,
        nx: 8,
        energies: [
            -13.8813610992452,
            -11.5380986367773,
            -11.5380986367773,
            -11.2765046416748,
        ],
    },
    Quasi2dRow {
        ny: 4,
        nx: 4,
        energies: [
            -9.1892070651929,
            -7.3280745721674,
            -8.1022525727023,
            -7.5055569500810,
        ],
    },
    Quasi2dRow {
        ny: 4,
        nx: 5,
        energies: [
            -11.6515708351580,
            -9.7410214922860,
            -9.7410214922860,
            -9.4307787759889,
        ],
    },
    Quasi2dRow {
        ny: 4,
        nx: 6,
        energies: [
            -14.1291468644466,
            -11.3817745234209,
            -12.1857227796133,
            -11.3850974919405,
        ],
    },
    Quasi2dRow {
        ny: 5,
        nx: 5,
        energies: [
            -14.6961464371187,
            -12.0391686609399,
            -12.0391686609399,
            -11.7667640193786,
        ],
    },
];

#[derive(Debug, Clone)]
pub struct ReferenceEntry {
    pub label: String,
    pub spec: LatticeSpec,
    pub energy: f64,
}

pub fn chain_energy(n: usize) -> Option<f64> {
    CHAIN.iter().find(|(m, _)| *m == n).map(|(_, e)| *e)
}

pub fn quasi_2d_energy(nx: usize, ny: usize, variant: Variant) -> Option<f64> {
    let idx = Variant::ALL.iter().position(|v| *v == variant)?;
    QUASI_2D
        .iter()
        .find(|r| r.nx == nx && r.ny == ny)
        .map(|r| r.energies[idx])
}

/// Every tabulated entry, chains first, in table order.
pub fn entries() -> Vec<ReferenceEntry> {
    let mut out: Vec<ReferenceEntry> = CHAIN
        .iter()
        .map(|&(n, energy)| ReferenceEntry {
            label: format!("chain N={n}"),
            spec: LatticeSpec::chain(n),
            energy,
        })
        .collect();
    for row in &QUASI_2D {
        for (v, &energy) in Variant::ALL.iter().zip(&row.energies) {
            out.push(ReferenceEntry {
                label: format!("{} {}x{}", v.key(), row.ny, row.nx),
                spec: v.spec(row.nx, row.ny),
                energy,
            });
        }
    }
    out
}
