//! JSON file formats for games, states, profiles and query circuits.
//!
//! Real numbers may be written as JSON numbers or as strings holding an exact
//! fraction such as `"1/3"`, converted to `f64` on load.

use std::path::Path;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Game, JointDistribution, MixedProfile};
use crate::linalg::CMat;
use crate::query::{self, QueryAlgorithm};
use crate::state::DensityMatrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Float(f64),
    Text(String),
}

impl Number {
    pub fn value(&self) -> Result<f64> {
        match self {
            Number::Float(x) => Ok(*x),
            Number::Text(s) => parse_real(s),
        }
    }
}

impl From<f64> for Number {
    fn from(x: f64) -> Self {
        Number::Float(x)
    }
}

/// `"a/b"`, an integer, or a decimal literal.
pub fn parse_real(s: &str) -> Result<f64> {
    let t = s.trim();
    if t.contains('/') {
        let r: Ratio<i64> = t
            .parse()
            .map_err(|e| Error::Parse(format!("bad fraction {s:?}: {e}")))?;
        return r
            .to_f64()
            .ok_or_else(|| Error::Parse(format!("fraction {s:?} out of range")));
    }
    t.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::Parse(format!("bad number {s:?}")))
}

fn values(xs: &[Number]) -> Result<Vec<f64>> {
    xs.iter().map(Number::value).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    pub players: usize,
    pub strategy_counts: Vec<usize>,
    pub utilities: Vec<Vec<Number>>,
    #[serde(default)]
    pub positively_normalized: bool,
}

impl GameFile {
    pub fn into_game(self) -> Result<Game> {
        if self.players != self.strategy_counts.len() {
            return Err(Error::InvalidGame(format!(
                "players = {} but {} strategy counts given",
                self.players,
                self.strategy_counts.len()
            )));
        }
        let utilities = self
            .utilities
            .iter()
            .map(|u| values(u))
            .collect::<Result<Vec<_>>>()?;
        let game = Game::new(self.strategy_counts, utilities)?;
        if self.positively_normalized {
            game.with_positive_normalization()
        } else {
            Ok(game)
        }
    }

    pub fn from_game(game: &Game) -> Self {
        GameFile {
            players: game.num_players(),
            strategy_counts: game.strategy_counts().to_vec(),
            utilities: (0..game.num_players())
                .map(|i| {
                    game.utilities(i)
                        .iter()
                        .map(|&x| Number::Float(x))
                        .collect()
                })
                .collect(),
            positively_normalized: game.positively_normalized(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityFile {
    pub dims: Vec<usize>,
    /// Row-major `[re, im]` pairs.
    pub entries: Vec<[Number; 2]>,
}

fn complex(pair: &[Number; 2]) -> Result<Complex64> {
    Ok(Complex64::new(pair[0].value()?, pair[1].value()?))
}

fn matrix_from_pairs(rows: usize, cols: usize, entries: &[[Number; 2]]) -> Result<CMat> {
    if entries.len() != rows * cols {
        return Err(Error::DimensionMismatch(format!(
            "{} entries for a {rows}x{cols} matrix",
            entries.len()
        )));
    }
    let flat = entries.iter().map(complex).collect::<Result<Vec<_>>>()?;
    Ok(CMat::from_row_slice(rows, cols, &flat))
}

fn pairs_from_matrix(m: &CMat) -> Vec<[Number; 2]> {
    (0..m.nrows())
        .flat_map(|r| (0..m.ncols()).map(move |c| (r, c)))
        .map(|(r, c)| [Number::Float(m[(r, c)].re), Number::Float(m[(r, c)].im)])
        .collect()
}

impl DensityFile {
    pub fn into_state(self) -> Result<DensityMatrix> {
        let d: usize = self.dims.iter().product();
        DensityMatrix::new(self.dims, matrix_from_pairs(d, d, &self.entries)?)
    }

    pub fn from_state(rho: &DensityMatrix) -> Self {
        DensityFile {
            dims: rho.dims().to_vec(),
            entries: pairs_from_matrix(rho.matrix()),
        }
    }
}

/// Either a product profile (one distribution per player) or a joint distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProfileFile {
    Mixed { profile: Vec<Vec<Number>> },
    Joint { distribution: Vec<Number> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    Mixed(MixedProfile),
    Joint(JointDistribution),
}

impl Profile {
    /// Joint distribution, taking the product for mixed profiles.
    pub fn joint(&self) -> JointDistribution {
        match self {
            Profile::Mixed(p) => p.to_joint(),
            Profile::Joint(p) => p.clone(),
        }
    }
}

impl ProfileFile {
    pub fn into_profile(self) -> Result<Profile> {
        match self {
            ProfileFile::Mixed { profile } => Ok(Profile::Mixed(MixedProfile::new(
                profile
                    .iter()
                    .map(|p| values(p))
                    .collect::<Result<Vec<_>>>()?,
            )?)),
            ProfileFile::Joint { distribution } => Ok(Profile::Joint(JointDistribution::new(
                values(&distribution)?,
            )?)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CircuitItem {
    /// The literal `"query"`.
    Marker(String),
    /// Dense `2N x 2N` unitary as rows of `[re, im]` pairs.
    Matrix(Vec<Vec<[Number; 2]>>),
}

/// Dense blocks separated by `"query"` markers; adjacent matrices compose left to right
/// in time order and an empty segment is the identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitFile {
    pub n: usize,
    pub blocks: Vec<CircuitItem>,
}

impl CircuitFile {
    pub fn into_algorithm(self) -> Result<QueryAlgorithm> {
        let dim = 2 * self.n;
        if self.n < 2 || self.n > query::MAX_DOMAIN {
            return Err(Error::Unsupported(format!(
                "domain size {} outside [2, {}]",
                self.n,
                query::MAX_DOMAIN
            )));
        }
        let mut blocks = vec![CMat::identity(dim, dim)];
        for item in &self.blocks {
            match item {
                CircuitItem::Marker(s) if s == "query" => blocks.push(CMat::identity(dim, dim)),
                CircuitItem::Marker(s) => {
                    return Err(Error::Parse(format!("unknown circuit token {s:?}")))
                }
                CircuitItem::Matrix(rows) => {
                    if rows.len() != dim {
                        return Err(Error::DimensionMismatch(format!(
                            "block with {} rows, expected {dim}",
                            rows.len()
                        )));
                    }
                    let flat: Vec<[Number; 2]> = rows.iter().flatten().cloned().collect();
                    let u = matrix_from_pairs(dim, dim, &flat)?;
                    let last = blocks.last_mut().expect("non-empty");
                    *last = &u * &*last;
                }
            }
        }
        query::from_dense(self.n, blocks)
    }

    pub fn from_algorithm(alg: &QueryAlgorithm) -> Self {
        let mut items = Vec::new();
        for (t, u) in alg.dense_blocks().iter().enumerate() {
            if t > 0 {
                items.push(CircuitItem::Marker("query".into()));
            }
            let dim = u.nrows();
            items.push(CircuitItem::Matrix(
                (0..dim)
                    .map(|r| {
                        (0..dim)
                            .map(|c| [Number::Float(u[(r, c)].re), Number::Float(u[(r, c)].im)])
                            .collect()
                    })
                    .collect(),
            ));
        }
        CircuitFile {
            n: alg.n(),
            blocks: items,
        }
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

pub fn parse_game(text: &str) -> Result<Game> {
    parse::<GameFile>(text, "game file")?.into_game()
}

pub fn parse_state(text: &str) -> Result<DensityMatrix> {
    parse::<DensityFile>(text, "density file")?.into_state()
}

pub fn parse_profile(text: &str) -> Result<Profile> {
    parse::<ProfileFile>(text, "profile file")?.into_profile()
}

pub fn parse_circuit(text: &str) -> Result<QueryAlgorithm> {
    parse::<CircuitFile>(text, "circuit file")?.into_algorithm()
}

pub fn load_game(path: impl AsRef<Path>) -> Result<Game> {
    parse_game(&read(path.as_ref())?)
}

pub fn load_state(path: impl AsRef<Path>) -> Result<DensityMatrix> {
    parse_state(&read(path.as_ref())?)
}

pub fn load_profile(path: impl AsRef<Path>) -> Result<Profile> {
    parse_profile(&read(path.as_ref())?)
}

pub fn load_circuit(path: impl AsRef<Path>) -> Result<QueryAlgorithm> {
    parse_circuit(&read(path.as_ref())?)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}
