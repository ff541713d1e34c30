//! Concrete ballot profiles, the anonymity quotient, and brute-force oracles
//! for anonymity and strategy-proofness.
//!
//! A grid function compresses a rule down to tallies; this module keeps the
//! uncompressed view. Profiles are vectors of individual ballots, an
//! [`ScfOracle`] wraps an arbitrary rule on them, and the sweep oracles check
//! anonymity and hunt for profitable misreports profile by profile. They are
//! deliberately naive: their job is to certify the grid-level machinery, not
//! to be fast.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::{Alternative, Grid, GridFunction, GridPoint};
use crate::rng::SplitMix64;

/// A single voter's declaration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ballot {
    /// Prefers alternative `a`.
    A,
    /// Prefers alternative `b`.
    B,
    /// Indifferent between the two.
    Indifferent,
}

impl Ballot {
    pub fn as_char(self) -> char {
        match self {
            Ballot::A => 'a',
            Ballot::B => 'b',
            Ballot::Indifferent => '-',
        }
    }

    pub fn from_char(c: char) -> Result<Self> {
        match c {
            'a' => Ok(Ballot::A),
            'b' => Ok(Ballot::B),
            '-' => Ok(Ballot::Indifferent),
            other => Err(Error::Parse(format!(
                "invalid ballot {other:?}, expected 'a', 'b' or '-'"
            ))),
        }
    }
}

/// One ballot per voter.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Profile {
    ballots: Vec<Ballot>,
}

impl Profile {
    pub fn new(ballots: Vec<Ballot>) -> Self {
        Profile { ballots }
    }

    pub fn len(&self) -> usize {
        self.ballots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ballots.is_empty()
    }

    pub fn ballots(&self) -> &[Ballot] {
        &self.ballots
    }

    /// Count supporters of each alternative: `k` ballots for `a`, `m` for
    /// `b`. Always lands inside the grid of the profile's length.
    pub fn tally(&self) -> GridPoint {
        let k = self.ballots.iter().filter(|&&b| b == Ballot::A).count();
        let m = self.ballots.iter().filter(|&&b| b == Ballot::B).count();
        GridPoint::new(k, m)
    }

    /// A copy with `voter`'s ballot replaced.
    pub fn with_ballot(&self, voter: usize, ballot: Ballot) -> Profile {
        let mut ballots = self.ballots.clone();
        ballots[voter] = ballot;
        Profile { ballots }
    }

    fn swapped(&self, i: usize, j: usize) -> Profile {
        let mut ballots = self.ballots.clone();
        ballots.swap(i, j);
        Profile { ballots }
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let ballots = s.chars().map(Ballot::from_char).collect::<Result<_>>()?;
        Ok(Profile { ballots })
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.ballots {
            write!(f, "{}", b.as_char())?;
        }
        Ok(())
    }
}

/// The profile with a fixed tally in canonical voter order: indifferent
/// voters first, then the `k` supporters of `a`, then the `m` supporters of
/// `b`. Right inverse of [`Profile::tally`].
pub fn canonical_profile(pt: GridPoint, grid: Grid) -> Result<Profile> {
    if !grid.contains(pt) {
        return Err(Error::PointOutsideGrid {
            k: pt.k,
            m: pt.m,
            n: grid.n(),
        });
    }
    let indifferent = grid.n() - pt.k - pt.m;
    let mut ballots = Vec::with_capacity(grid.n());
    ballots.extend(std::iter::repeat_n(Ballot::Indifferent, indifferent));
    ballots.extend(std::iter::repeat_n(Ballot::A, pt.k));
    ballots.extend(std::iter::repeat_n(Ballot::B, pt.m));
    Ok(Profile { ballots })
}

/// Apply a grid function to a profile through its tally.
pub fn eval_scf(f: &GridFunction, p: &Profile) -> Result<Alternative> {
    if p.len() != f.n() {
        return Err(Error::ProfileLength {
            got: p.len(),
            want: f.n(),
        });
    }
    Ok(f.get(p.tally()))
}

/// An opaque rule under test: any total map from profiles of length `n` to
/// an alternative. Wrap a closure directly, or lift a grid function with
/// [`ScfOracle::from_grid_function`].
pub struct ScfOracle<'a> {
    n: usize,
    choose: Box<dyn Fn(&Profile) -> Alternative + 'a>,
}

impl<'a> ScfOracle<'a> {
    pub fn new(n: usize, choose: impl Fn(&Profile) -> Alternative + 'a) -> Self {
        ScfOracle {
            n,
            choose: Box::new(choose),
        }
    }

    pub fn from_grid_function(f: &'a GridFunction) -> Self {
        ScfOracle {
            n: f.n(),
            choose: Box::new(move |p| f.get(p.tally())),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn choose(&self, p: &Profile) -> Alternative {
        (self.choose)(p)
    }
}

impl fmt::Debug for ScfOracle<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScfOracle").field("n", &self.n).finish()
    }
}

/// How the profile sweeps cover the `3^n` profile space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    /// Exhaustive when the space fits the cap, randomized otherwise.
    Auto,
    /// Always exhaustive; resource error when the space exceeds the cap.
    Exhaustive,
    /// Always sampled.
    Randomized,
}

/// Sweep bounds shared by the profile-level oracles.
#[derive(Debug, Clone, Copy)]
pub struct SweepConfig {
    pub mode: SweepMode,
    /// Largest profile count still swept exhaustively. The default, `3^6`,
    /// keeps a full manipulation scan under ten thousand rule evaluations.
    pub exhaustive_cap: u64,
    /// Profiles drawn per sweep in randomized mode.
    pub samples: u64,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            mode: SweepMode::Auto,
            exhaustive_cap: 729,
            samples: 2000,
            seed: 0,
        }
    }
}

fn profile_space(n: usize) -> u128 {
    if n >= 80 {
        u128::MAX
    } else {
        3u128.pow(n as u32)
    }
}

fn profile_from_index(n: usize, mut idx: u64) -> Profile {
    let mut ballots = Vec::with_capacity(n);
    for _ in 0..n {
        ballots.push(match idx % 3 {
            0 => Ballot::A,
            1 => Ballot::B,
            _ => Ballot::Indifferent,
        });
        idx /= 3;
    }
    Profile { ballots }
}

fn random_profile(n: usize, rng: &mut SplitMix64) -> Profile {
    let ballots = (0..n)
        .map(|_| match rng.next_below(3) {
            0 => Ballot::A,
            1 => Ballot::B,
            _ => Ballot::Indifferent,
        })
        .collect();
    Profile { ballots }
}

/// Drive `visit` over the profile space until it yields a witness. Returns
/// the first witness in enumeration (or sampling) order, or `None` when the
/// sweep is exhausted.
fn sweep_profiles<T>(
    n: usize,
    cfg: &SweepConfig,
    mut visit: impl FnMut(&Profile) -> Option<T>,
) -> Result<Option<T>> {
    let space = profile_space(n);
    let exhaustive = match cfg.mode {
        SweepMode::Exhaustive => {
            if space > cfg.exhaustive_cap as u128 {
                return Err(Error::ResourceCap(format!(
                    "3^{n} profiles exceed the exhaustive cap of {}",
                    cfg.exhaustive_cap
                )));
            }
            true
        }
        SweepMode::Auto => space <= cfg.exhaustive_cap as u128,
        SweepMode::Randomized => false,
    };
    if exhaustive {
        for idx in 0..space as u64 {
            if let Some(found) = visit(&profile_from_index(n, idx)) {
                return Ok(Some(found));
            }
        }
    } else {
        let mut rng = SplitMix64::new(cfg.seed);
        for _ in 0..cfg.samples {
            if let Some(found) = visit(&random_profile(n, &mut rng)) {
                return Ok(Some(found));
            }
        }
    }
    Ok(None)
}

/// Whether the rule is invariant under voter permutations. Adjacent
/// transpositions generate the symmetric group, so checking the `n - 1`
/// swaps at every swept profile suffices.
pub fn is_anonymous(oracle: &ScfOracle<'_>, cfg: &SweepConfig) -> Result<bool> {
    let n = oracle.n();
    let violation = sweep_profiles(n, cfg, |p| {
        let base = oracle.choose(p);
        (0..n.saturating_sub(1)).find(|&i| oracle.choose(&p.swapped(i, i + 1)) != base)
    })?;
    Ok(violation.is_none())
}

/// A strategy-proofness violation: at `profile`, `voter` obtains their
/// truthfully preferred alternative by reporting `deviation` instead.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manipulation {
    pub profile: Profile,
    pub voter: usize,
    pub deviation: Ballot,
}

/// Search the swept profiles for a profitable unilateral misreport.
///
/// A deviation counts only when the voter's truthful ballot names a strict
/// favorite and the misreport flips the outcome to it; indifferent voters
/// can never strictly gain.
pub fn find_manipulation(
    oracle: &ScfOracle<'_>,
    cfg: &SweepConfig,
) -> Result<Option<Manipulation>> {
    let n = oracle.n();
    sweep_profiles(n, cfg, |p| {
        let truthful = oracle.choose(p);
        for voter in 0..n {
            let mine = p.ballots()[voter];
            let favorite = match mine {
                Ballot::A => Alternative::A,
                Ballot::B => Alternative::B,
                Ballot::Indifferent => continue,
            };
            if truthful == favorite {
                continue;
            }
            for deviation in [Ballot::A, Ballot::B, Ballot::Indifferent] {
                if deviation == mine {
                    continue;
                }
                if oracle.choose(&p.with_ballot(voter, deviation)) == favorite {
                    return Some(Manipulation {
                        profile: p.clone(),
                        voter,
                        deviation,
                    });
                }
            }
        }
        None
    })
}

/// Grid-level manipulation check: true when no voter type can profit from
/// any of the unilateral tally moves. For a rule that factors through the
/// tally this agrees with [`find_manipulation`] returning nothing, and with
/// dual monotonicity.
pub fn grid_manipulation_check(f: &GridFunction) -> bool {
    let grid = f.grid();
    grid.points().all(|pt| {
        let outcome = f.get(pt);
        // A supporter of `a` exists at pt iff k >= 1; dropping to
        // indifference or to `b` moves the tally left (and up).
        if pt.k >= 1 && outcome == Alternative::B {
            let to_indifferent = GridPoint::new(pt.k - 1, pt.m);
            let to_b = GridPoint::new(pt.k - 1, pt.m + 1);
            if f.get(to_indifferent) == Alternative::A || f.get(to_b) == Alternative::A {
                return false;
            }
        }
        if pt.m >= 1 && outcome == Alternative::A {
            let to_indifferent = GridPoint::new(pt.k, pt.m - 1);
            let to_a = GridPoint::new(pt.k + 1, pt.m - 1);
            if f.get(to_indifferent) == Alternative::B || f.get(to_a) == Alternative::B {
                return false;
            }
        }
        true
    })
}
