//! Lattice families, bond lists, and the cut/mirror-double construction.
//!
//! Sites sit on an `nx x ny` grid with open boundaries and are numbered
//! column-major, `index = x * ny + y`, so every column is a contiguous block
//! and a cut between columns `m - 1` and `m` splits the index range at
//! `m * ny`. Plaquette `(px, py)` is the unit square whose lower-left corner
//! is site `(px, py)`; a crossed plaquette carries both diagonals.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg;

const COUPLING_EPS: f64 = 1e-15;
const PSD_TOL: f64 = -1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Chain,
    SquareLadder,
    CrossedLadder,
    PyroLadderA,
    PyroLadderB,
    Rectangle,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::Chain,
        Family::SquareLadder,
        Family::CrossedLadder,
        Family::PyroLadderA,
        Family::PyroLadderB,
        Family::Rectangle,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Family::Chain => "chain",
            Family::SquareLadder => "ladder",
            Family::CrossedLadder => "x-ladder",
            Family::PyroLadderA => "pyro-a",
            Family::PyroLadderB => "pyro-b",
            Family::Rectangle => "rect",
        }
    }

    fn is_pyro(self) -> bool {
        matches!(self, Family::PyroLadderA | Family::PyroLadderB)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.key() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown family '{s}'")))
    }
}

/// Diagonal pattern of a rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Crossing {
    None,
    /// Plaquettes with `px + py` even are crossed.
    CheckerA,
    /// Plaquettes with `px + py` odd are crossed.
    CheckerB,
    All,
}

impl Crossing {
    pub const ALL: [Crossing; 4] = [
        Crossing::None,
        Crossing::CheckerA,
        Crossing::CheckerB,
        Crossing::All,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Crossing::None => "none",
            Crossing::CheckerA => "checker-a",
            Crossing::CheckerB => "checker-b",
            Crossing::All => "all",
        }
    }

    fn is_checker(self) -> bool {
        matches!(self, Crossing::CheckerA | Crossing::CheckerB)
    }

    fn flipped(self) -> Self {
        match self {
            Crossing::CheckerA => Crossing::CheckerB,
            Crossing::CheckerB => Crossing::CheckerA,
            other => other,
        }
    }
}

impl fmt::Display for Crossing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Crossing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Crossing::ALL
            .into_iter()
            .find(|c| c.key() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown crossing '{s}'")))
    }
}

/// One lattice instance. Construct through the family constructors, which
/// fill in the conventional couplings; [`LatticeSpec::validate`] checks the
/// family invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSpec {
    pub family: Family,
    pub nx: usize,
    pub ny: usize,
    pub crossing: Crossing,
    pub j: f64,
    /// Diagonal coupling. Zero for families without diagonals.
    pub jd: f64,
}

impl LatticeSpec {
    pub fn chain(n: usize) -> Self {
        Self::raw(Family::Chain, n, 1, Crossing::None, 0.0)
    }

    pub fn square_ladder(len: usize) -> Self {
        Self::raw(Family::SquareLadder, len, 2, Crossing::None, 0.0)
    }

    /// Ladder with both diagonals on every plaquette at `jd = 1/2`.
    pub fn crossed_ladder(len: usize) -> Self {
        Self::raw(Family::CrossedLadder, len, 2, Crossing::None, 0.5)
    }

    /// Pyrochlore ladder whose first plaquette is crossed.
    pub fn pyro_a(len: usize) -> Self {
        Self::raw(Family::PyroLadderA, len, 2, Crossing::None, 1.0)
    }

    /// Pyrochlore ladder whose first plaquette is plain.
    pub fn pyro_b(len: usize) -> Self {
        Self::raw(Family::PyroLadderB, len, 2, Crossing::None, 1.0)
    }

    pub fn rectangle(nx: usize, ny: usize, crossing: Crossing) -> Self {
        let jd = match crossing {
            Crossing::None => 0.0,
            Crossing::CheckerA | Crossing::CheckerB => 1.0,
            Crossing::All => 0.5,
        };
        Self::raw(Family::Rectangle, nx, ny, crossing, jd)
    }

    /// Default instance of `family`; `ny` and `crossing` only matter for
    /// rectangles.
    pub fn of_family(family: Family, nx: usize, ny: usize, crossing: Crossing) -> Self {
        match family {
            Family::Chain => Self::chain(nx),
            Family::SquareLadder => Self::square_ladder(nx),
            Family::CrossedLadder => Self::crossed_ladder(nx),
            Family::PyroLadderA => Self::pyro_a(nx),
            Family::PyroLadderB => Self::pyro_b(nx),
            Family::Rectangle => Self::rectangle(nx, ny, crossing),
        }
    }

    fn raw(family: Family, nx: usize, ny: usize, crossing: Crossing, jd: f64) -> Self {
        Self {
            family,
            nx,
            ny,
            crossing,
            j: 1.0,
            jd,
        }
    }

    /// Scales the couplings. Families whose diagonals equal the legs
    /// (pyrochlore, checkerboard) follow `j`.
    pub fn with_couplings(mut self, j: f64, jd: f64) -> Self {
        self.j = j;
        self.jd = if self.diagonals_follow_legs() { j } else { jd };
        self
    }

    pub fn with_nx(mut self, nx: usize) -> Self {
        self.nx = nx;
        self
    }

    pub fn n_sites(&self) -> usize {
        self.nx * self.ny
    }

    pub fn site(&self, x: usize, y: usize) -> usize {
        x * self.ny + y
    }

    /// `(x, y)` of a site index.
    pub fn coords(&self, site: usize) -> (usize, usize) {
        (site / self.ny, site % self.ny)
    }

    fn diagonals_follow_legs(&self) -> bool {
        self.family.is_pyro() || (self.family == Family::Rectangle && self.crossing.is_checker())
    }

    fn has_diagonals(&self) -> bool {
        match self.family {
            Family::Chain | Family::SquareLadder => false,
            Family::Rectangle => self.crossing != Crossing::None,
            _ => true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        if self.nx == 0 || self.ny == 0 {
            return bad(format!("empty lattice {}x{}", self.ny, self.nx));
        }
        if !(self.j.is_finite() && self.j > 0.0) {
            return bad(format!("coupling j = {} must be positive", self.j));
        }
        match self.family {
            Family::Chain => {
                if self.ny != 1 {
                    return bad(format!("chain needs ny = 1, got {}", self.ny));
                }
            }
            Family::Rectangle => {
                if self.ny < 2 {
                    return bad("rectangle needs ny >= 2".to_string());
                }
            }
            _ => {
                if self.ny != 2 {
                    return bad(format!("{} needs ny = 2, got {}", self.family, self.ny));
                }
            }
        }
        if self.family != Family::Rectangle && self.crossing != Crossing::None {
            return bad(format!(
                "crossing is only meaningful for rectangles, got {}",
                self.crossing
            ));
        }
        if self.has_diagonals() {
            if !(self.jd.is_finite() && self.jd > 0.0) {
                return bad(format!(
                    "diagonal coupling jd = {} must be positive",
                    self.jd
                ));
            }
            if self.diagonals_follow_legs() && (self.jd - self.j).abs() > COUPLING_EPS {
                return bad(format!("{} requires jd = j", self.family));
            }
        } else if self.jd != 0.0 {
            return bad(format!(
                "{} has no diagonals but jd = {}",
                self.family, self.jd
            ));
        }
        Ok(())
    }

    /// Diagonal weight on plaquette `(px, py)`, if crossed.
    pub fn plaquette(&self, px: usize, py: usize) -> Option<f64> {
        let crossed = match self.family {
            Family::Chain | Family::SquareLadder => false,
            Family::CrossedLadder => true,
            Family::PyroLadderA => px.is_multiple_of(2),
            Family::PyroLadderB => px % 2 == 1,
            Family::Rectangle => match self.crossing {
                Crossing::None => false,
                Crossing::CheckerA => (px + py).is_multiple_of(2),
                Crossing::CheckerB => (px + py) % 2 == 1,
                Crossing::All => true,
            },
        };
        crossed.then_some(self.jd)
    }

    /// Crossing weights of every plaquette, column by column.
    fn pattern(&self) -> Vec<Option<f64>> {
        let mut out = Vec::new();
        for px in 0..self.nx.saturating_sub(1) {
            for py in 0..self.ny.saturating_sub(1) {
                out.push(self.plaquette(px, py));
            }
        }
        out
    }

    /// Stable text encoding `family:nx:ny:crossing:j:jd`. Couplings use the
    /// shortest decimal that round-trips, so the key is injective.
    pub fn canonical_key(&self) -> String {
        format!(
            "{}:{}:{}:{}:{}:{}",
            self.family, self.nx, self.ny, self.crossing, self.j, self.jd
        )
    }

    /// Spec equality with couplings compared to `1e-15`.
    pub fn same_as(&self, other: &Self) -> bool {
        self.family == other.family
            && self.nx == other.nx
            && self.ny == other.ny
            && self.crossing == other.crossing
            && (self.j - other.j).abs() <= COUPLING_EPS
            && (self.jd - other.jd).abs() <= COUPLING_EPS
    }
}

impl fmt::Display for LatticeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_key())
    }
}

impl FromStr for LatticeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 6 {
            return Err(Error::InvalidSpec(format!("malformed key '{s}'")));
        }
        let num = |p: &str| -> Result<usize> {
            p.parse()
                .map_err(|_| Error::InvalidSpec(format!("bad integer '{p}' in '{s}'")))
        };
        let real = |p: &str| -> Result<f64> {
            p.parse()
                .map_err(|_| Error::InvalidSpec(format!("bad coupling '{p}' in '{s}'")))
        };
        let spec = LatticeSpec {
            family: parts[0].parse()?,
            nx: num(parts[1])?,
            ny: num(parts[2])?,
            crossing: parts[3].parse()?,
            j: real(parts[4])?,
            jd: real(parts[5])?,
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bond {
    pub i: usize,
    pub j: usize,
    pub w: f64,
}

impl Bond {
    pub fn new(a: usize, b: usize, w: f64) -> Self {
        Self {
            i: a.min(b),
            j: a.max(b),
            w,
        }
    }
}

/// Weighted edge set of `H = sum w S_i.S_j`, sorted by `(i, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BondList {
    n_sites: usize,
    bonds: Vec<Bond>,
}

impl BondList {
    pub fn new(n_sites: usize, mut bonds: Vec<Bond>) -> Result<Self> {
        bonds.sort_by_key(|b| (b.i, b.j));
        for b in &bonds {
            if b.i >= b.j || b.j >= n_sites {
                return Err(Error::InvalidSpec(format!(
                    "bond ({}, {}) invalid for {n_sites} sites",
                    b.i, b.j
                )));
            }
            if !(b.w > 0.0 && b.w.is_finite()) {
                return Err(Error::InvalidSpec(format!(
                    "bond ({}, {}) has non-positive weight {}",
                    b.i, b.j, b.w
                )));
            }
        }
        if bonds
            .windows(2)
            .any(|p| (p[0].i, p[0].j) == (p[1].i, p[1].j))
        {
            return Err(Error::InvalidSpec("duplicate bond".to_string()));
        }
        Ok(Self { n_sites, bonds })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn len(&self) -> usize {
        self.bonds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bonds.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.bonds.iter().map(|b| b.w).sum()
    }

    pub fn is_connected(&self) -> bool {
        if self.n_sites <= 1 {
            return true;
        }
        let mut parent: Vec<usize> = (0..self.n_sites).collect();
        fn root(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut components = self.n_sites;
        for b in &self.bonds {
            let (ri, rj) = (root(&mut parent, b.i), root(&mut parent, b.j));
            if ri != rj {
                parent[ri] = rj;
                components -= 1;
            }
        }
        components == 1
    }
}

/// Expands a spec into its bond list.
pub fn build(spec: &LatticeSpec) -> Result<BondList> {
    spec.validate()?;
    let (nx, ny) = (spec.nx, spec.ny);
    let mut bonds = Vec::new();
    for x in 0..nx {
        for y in 0..ny {
            if y + 1 < ny {
                bonds.push(Bond::new(spec.site(x, y), spec.site(x, y + 1), spec.j));
            }
            if x + 1 < nx {
                bonds.push(Bond::new(spec.site(x, y), spec.site(x + 1, y), spec.j));
            }
        }
    }
    for px in 0..nx.saturating_sub(1) {
        for py in 0..ny.saturating_sub(1) {
            if let Some(w) = spec.plaquette(px, py) {
                bonds.push(Bond::new(spec.site(px, py), spec.site(px + 1, py + 1), w));
                bonds.push(Bond::new(spec.site(px + 1, py), spec.site(px, py + 1), w));
            }
        }
    }
    BondList::new(spec.n_sites(), bonds)
}

/// A straight cut between column `m - 1` and column `m`: `m` columns go
/// left, `n` go right.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CutSpec {
    pub m: usize,
    pub n: usize,
}

impl CutSpec {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidCut(format!(
                "both parts need a column (m = {m}, n = {n})"
            )));
        }
        Ok(Self { m, n })
    }

    /// Cut of an `nx`-column system with `m - n = d2`.
    pub fn from_offset(nx: usize, d2: i64) -> Result<Self> {
        let total = nx as i64;
        if (total + d2) % 2 != 0 || d2.abs() >= total {
            return Err(Error::InvalidCut(format!(
                "offset 2d = {d2} is incompatible with {nx} columns"
            )));
        }
        Self::new(((total + d2) / 2) as usize, ((total - d2) / 2) as usize)
    }

    /// `2d = m - n`, twice the distance of the cut from the middle.
    pub fn d2(&self) -> i64 {
        self.m as i64 - self.n as i64
    }

    pub fn nx(&self) -> usize {
        self.m + self.n
    }
}

/// Bonds severed by a cut. `k[a][b]` couples `left_boundary[a]` to
/// `right_boundary[b]`; both boundaries use the parent's site indices.
#[derive(Debug, Clone, PartialEq)]
pub struct InterfaceMatrix {
    pub left_boundary: Vec<usize>,
    pub right_boundary: Vec<usize>,
    pub k: Vec<Vec<f64>>,
}

impl InterfaceMatrix {
    /// The severed bonds, in parent indices.
    pub fn bonds(&self) -> Vec<Bond> {
        let mut out = Vec::new();
        for (a, row) in self.k.iter().enumerate() {
            for (b, &w) in row.iter().enumerate() {
                if w != 0.0 {
                    out.push(Bond::new(self.left_boundary[a], self.right_boundary[b], w));
                }
            }
        }
        out
    }

    fn well_formed(&self) -> Result<()> {
        let rows = self.left_boundary.len();
        let cols = self.right_boundary.len();
        if self.k.len() != rows || self.k.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidSpec(format!(
                "interface matrix shape does not match {rows}x{cols} boundaries"
            )));
        }
        if self
            .k
            .iter()
            .flatten()
            .any(|&w| !(w >= 0.0 && w.is_finite()))
        {
            return Err(Error::InvalidSpec(
                "negative interface coupling".to_string(),
            ));
        }
        Ok(())
    }
}

/// Splits `spec` into its left and right parts plus the interface.
///
/// The parts are specs of the same family class; pyrochlore and
/// checkerboard parts are relabelled so that their own plaquette numbering
/// starts at the cut.
pub fn cut(
    spec: &LatticeSpec,
    cut: &CutSpec,
) -> Result<(LatticeSpec, LatticeSpec, InterfaceMatrix)> {
    spec.validate()?;
    if cut.nx() != spec.nx {
        return Err(Error::InvalidCut(format!(
            "m + n = {} but the lattice has {} columns",
            cut.nx(),
            spec.nx
        )));
    }
    CutSpec::new(cut.m, cut.n)?;

    let left = spec.with_nx(cut.m);
    let mut right = spec.with_nx(cut.n);
    if cut.m % 2 == 1 {
        match spec.family {
            Family::PyroLadderA => right.family = Family::PyroLadderB,
            Family::PyroLadderB => right.family = Family::PyroLadderA,
            Family::Rectangle => right.crossing = spec.crossing.flipped(),
            _ => {}
        }
    }

    let ny = spec.ny;
    let lx = cut.m - 1;
    let left_boundary: Vec<usize> = (0..ny).map(|y| spec.site(lx, y)).collect();
    let right_boundary: Vec<usize> = (0..ny).map(|y| spec.site(lx + 1, y)).collect();
    let mut k = vec![vec![0.0; ny]; ny];
    for (y, row) in k.iter_mut().enumerate() {
        row[y] = spec.j;
    }
    for py in 0..ny.saturating_sub(1) {
        if let Some(w) = spec.plaquette(lx, py) {
            k[py][py + 1] += w;
            k[py + 1][py] += w;
        }
    }
    Ok((
        left,
        right,
        InterfaceMatrix {
            left_boundary,
            right_boundary,
            k,
        },
    ))
}

/// Which side of a cut a part came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Mirror-doubles `part`: the part and its reflection, joined through the
/// interface. A left part is followed by its mirror image; a right part is
/// preceded by it. The result is the unique spec of the part's family class
/// whose bonds match that construction.
pub fn double(part: &LatticeSpec, iface: &InterfaceMatrix, side: Side) -> Result<LatticeSpec> {
    part.validate()?;
    iface.well_formed()?;
    let ny = part.ny;
    let mismatch = |why: &str| {
        Err(Error::InvalidSpec(format!(
            "interface does not fit part: {why}"
        )))
    };
    if iface.left_boundary.len() != ny || iface.right_boundary.len() != ny {
        return mismatch("boundary size differs from part height");
    }

    // the interface of a column cut: legs on the diagonal, plaquette
    // diagonals on the first off-diagonals, nothing else
    let mut joint = vec![None; ny.saturating_sub(1)];
    for a in 0..ny {
        for b in 0..ny {
            let w = iface.k[a][b];
            if a == b {
                if (w - part.j).abs() > COUPLING_EPS {
                    return mismatch("leg coupling differs from part");
                }
            } else if a.abs_diff(b) == 1 {
                if (w - iface.k[b][a]).abs() > COUPLING_EPS {
                    return mismatch("asymmetric crossing");
                }
                if w != 0.0 {
                    joint[a.min(b)] = Some(w);
                }
            } else if w != 0.0 {
                return mismatch("coupling between non-adjacent rows");
            }
        }
    }

    let pnx = part.nx;
    let nx = 2 * pnx;
    let mut want = vec![None; (nx - 1) * (ny - 1)];
    let join = pnx - 1;
    for px in 0..nx - 1 {
        for py in 0..ny - 1 {
            want[px * (ny - 1) + py] = match (side, px.cmp(&join)) {
                (_, core::cmp::Ordering::Equal) => joint[py],
                (Side::Left, core::cmp::Ordering::Less) => part.plaquette(px, py),
                (Side::Left, core::cmp::Ordering::Greater) => part.plaquette(2 * pnx - 2 - px, py),
                (Side::Right, core::cmp::Ordering::Less) => part.plaquette(pnx - 2 - px, py),
                (Side::Right, core::cmp::Ordering::Greater) => part.plaquette(px - pnx, py),
            };
        }
    }

    let candidates: Vec<LatticeSpec> = match part.family {
        Family::PyroLadderA | Family::PyroLadderB => vec![
            LatticeSpec {
                family: Family::PyroLadderA,
                ..*part
            },
            LatticeSpec {
                family: Family::PyroLadderB,
                ..*part
            },
        ],
        Family::Rectangle => {
            let jd = joint.iter().flatten().next().copied().unwrap_or(part.jd);
            Crossing::ALL
                .into_iter()
                .map(|c| {
                    let mut s = LatticeSpec::rectangle(pnx, ny, c);
                    s.j = part.j;
                    s.jd = match c {
                        Crossing::None => 0.0,
                        Crossing::CheckerA | Crossing::CheckerB => part.j,
                        Crossing::All => jd,
                    };
                    s
                })
                .collect()
        }
        _ => vec![*part],
    };

    candidates
        .into_iter()
        .map(|c| c.with_nx(nx))
        .find(|c| {
            c.validate().is_ok()
                && c.pattern()
                    .iter()
                    .zip(&want)
                    .all(|(got, exp)| match (got, exp) {
                        (None, None) => true,
                        (Some(a), Some(b)) => (a - b).abs() <= COUPLING_EPS,
                        _ => false,
                    })
        })
        .map_or_else(
            || mismatch("doubled pattern is not a member of the family"),
            Ok,
        )
}

/// Result of checking whether an interface is a sum of `S_A.S_A'` terms.
#[derive(Debug, Clone, PartialEq)]
pub struct Applicability {
    pub applicable: bool,
    pub symmetric: bool,
    /// Eigenvalues of the (symmetric part of the) interface matrix.
    pub eigenvalues: Vec<f64>,
}

/// The interface admits `k = sum_A J^A (J^A)^T` iff `k` is symmetric and
/// positive semidefinite.
pub fn check_applicability(iface: &InterfaceMatrix) -> Result<Applicability> {
    iface.well_formed()?;
    let n = iface.left_boundary.len();
    if n != iface.right_boundary.len() || n == 0 {
        return Ok(Applicability {
            applicable: false,
            symmetric: false,
            eigenvalues: Vec::new(),
        });
    }
    let mut symmetric = true;
    let mut a = vec![0.0; n * n];
    for r in 0..n {
        for c in 0..n {
            let (x, y) = (iface.k[r][c], iface.k[c][r]);
            if (x - y).abs() > COUPLING_EPS {
                symmetric = false;
            }
            a[r * n + c] = 0.5 * (x + y);
        }
    }
    let eigenvalues = linalg::symmetric_eigen(&a, n)?.values;
    let psd = eigenvalues.iter().all(|&e| e >= PSD_TOL);
    Ok(Applicability {
        applicable: symmetric && psd,
        symmetric,
        eigenvalues,
    })
}
