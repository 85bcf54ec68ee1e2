//! The inverted-pyramid guessing game and the two-party tasks built on a
//! single box.
//!
//! Alice holds `N = 2^n` bits and Bob an index `b`. With `2^n − 1` shared boxes
//! arranged as a complete binary tree, Alice sends one bit `x` and Bob guesses
//! `a_b`. Level 1 boxes sit next to the data; the root is level `n`.
//!
//! Alice's side is a bottom-up fold. A leaf carries `a_i`; an internal node
//! with child values `v_L`, `v_R` receives input `v_L ⊕ v_R`, yields `A`, and
//! carries `v_L ⊕ A`. The message is the root value.
//!
//! Bob walks root to leaf. At level `j` he queries the box above leaf `b`
//! with digit `b_{j−1}` (`b = Σ b_j 2^j`) and XORs every output into `x`. His
//! guess is right exactly when an even number of path boxes missed `A⊕B = a·b`.

use alloc::vec;
use alloc::vec::Vec;

use crate::boxmodel::{BoxBehavior, BoxInstance, BoxRecord, Correlation, Side};
use crate::error::{Error, Result};
use crate::rng::{trial_streams, KeyedStream};

pub const MAX_DEPTH: u32 = 16;

/// How Bob uses the boxes on levels he reads.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum BobQuery {
    /// Only the `n` boxes between the root and leaf `b`.
    #[default]
    Path,
    /// Digit `b_{j−1}` into every level-`j` box; off-path outputs are ignored.
    EveryBox,
}

/// Where a game's boxes come from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoxSource {
    Isotropic(Correlation),
    Behavior(BoxBehavior),
}

impl BoxSource {
    pub fn behavior(&self) -> BoxBehavior {
        match self {
            BoxSource::Isotropic(e) => BoxBehavior::isotropic(*e),
            BoxSource::Behavior(b) => *b,
        }
    }

    /// `E = K/4`. For isotropic boxes this is exactly the configured strength.
    pub fn correlation(&self) -> f64 {
        match self {
            BoxSource::Isotropic(e) => e.get(),
            BoxSource::Behavior(b) => b.chsh_value() / 4.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GameConfig {
    /// Pyramid depth `n`; Alice holds `2^n` bits.
    pub depth: u32,
    pub source: BoxSource,
    pub trials: u64,
    pub seed: u64,
    /// Message bits `m`, one pyramid each.
    pub messages: usize,
    pub bob_query: BobQuery,
}

impl GameConfig {
    pub fn isotropic(depth: u32, e: f64, trials: u64, seed: u64) -> Result<Self> {
        let cfg = Self {
            depth,
            source: BoxSource::Isotropic(Correlation::new(e)?),
            trials,
            seed,
            messages: 1,
            bob_query: BobQuery::Path,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_messages(mut self, messages: usize) -> Self {
        self.messages = messages;
        self
    }

    pub fn with_query(mut self, bob_query: BobQuery) -> Self {
        self.bob_query = bob_query;
        self
    }

    pub fn data_len(&self) -> usize {
        1 << self.depth
    }

    /// Boxes consumed per round across all pyramids.
    pub fn boxes_per_round(&self) -> usize {
        self.messages * (self.data_len() - 1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.depth > MAX_DEPTH {
            return Err(Error::DepthTooLarge(self.depth));
        }
        if self.trials == 0 {
            return Err(Error::NoTrials);
        }
        if self.messages == 0 {
            return Err(Error::NoMessages);
        }
        if self.messages > self.data_len() {
            return Err(Error::TooManyMessages { messages: self.messages, len: self.data_len() });
        }
        if let BoxSource::Behavior(b) = &self.source {
            if !b.is_no_signaling(crate::boxmodel::STRUCTURAL_TOL) {
                return Err(Error::Signaling);
            }
        }
        Ok(())
    }
}

/// One path box as Bob saw it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PathStep {
    pub level: u32,
    pub position: usize,
    #[cfg_attr(feature = "serde", serde(flatten))]
    pub record: BoxRecord,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RoundTranscript {
    pub data: Vec<bool>,
    pub b: usize,
    pub x: bool,
    /// Leaf-adjacent level first.
    pub path: Vec<PathStep>,
    pub guess: bool,
    pub correct: bool,
}

impl RoundTranscript {
    pub fn path_errors(&self) -> usize {
        self.path.iter().filter(|s| s.record.erred()).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Stage {
    Fresh,
    Encoded,
}

/// `2^n − 1` single-use boxes wired as an inverted pyramid.
#[derive(Clone, Debug)]
pub struct PyramidStrategy<'a> {
    depth: u32,
    boxes: Vec<BoxInstance<'a>>,
    stage: Stage,
    bob_done: bool,
}

impl<'a> PyramidStrategy<'a> {
    /// Boxes take slots `first_slot .. first_slot + 2^n − 1` on `stream`.
    pub fn keyed(behavior: &'a BoxBehavior, depth: u32, stream: &KeyedStream, first_slot: u64) -> Result<Self> {
        if depth > MAX_DEPTH {
            return Err(Error::DepthTooLarge(depth));
        }
        let count = (1usize << depth) - 1;
        let boxes = (0..count as u64)
            .map(|i| BoxInstance::keyed(behavior, stream, first_slot + i))
            .collect::<Result<Vec<_>>>()?;
        Self::from_boxes(depth, boxes)
    }

    /// Boxes in level order: all of level 1 left to right, then level 2, ...
    pub fn from_boxes(depth: u32, boxes: Vec<BoxInstance<'a>>) -> Result<Self> {
        if depth > MAX_DEPTH {
            return Err(Error::DepthTooLarge(depth));
        }
        let expected = (1usize << depth) - 1;
        if boxes.len() != expected {
            return Err(Error::DataLength { expected, got: boxes.len() });
        }
        if boxes.iter().any(|b| !b.is_fresh()) {
            return Err(Error::StrategyReused);
        }
        Ok(Self { depth, boxes, stage: Stage::Fresh, bob_done: false })
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn data_len(&self) -> usize {
        1 << self.depth
    }

    pub fn box_count(&self) -> usize {
        self.boxes.len()
    }

    pub fn level_len(&self, level: u32) -> usize {
        1 << (self.depth - level)
    }

    fn node(&self, level: u32, position: usize) -> usize {
        (1usize << self.depth) - (1usize << (self.depth - level + 1)) + position
    }

    pub fn box_at(&self, level: u32, position: usize) -> &BoxInstance<'a> {
        &self.boxes[self.node(level, position)]
    }

    /// Alice's message for `data`. Every box receives her input exactly once.
    pub fn alice_encode(&mut self, data: &[bool]) -> Result<bool> {
        if self.stage != Stage::Fresh || self.boxes.iter().any(|b| b.has_used(Side::Alice)) {
            return Err(Error::StrategyReused);
        }
        if data.len() != self.data_len() {
            return Err(Error::DataLength { expected: self.data_len(), got: data.len() });
        }
        let mut values = data.to_vec();
        for level in 1..=self.depth {
            let width = self.level_len(level);
            for pos in 0..width {
                let (left, right) = (values[2 * pos], values[2 * pos + 1]);
                let node = self.node(level, pos);
                let out = self.boxes[node].sample(Side::Alice, left ^ right)?;
                values[pos] = left ^ out;
            }
            values.truncate(width);
        }
        self.stage = Stage::Encoded;
        Ok(values[0])
    }

    /// Zero-pads `data` up to `2^n` bits before encoding.
    pub fn alice_encode_padded(&mut self, data: &[bool]) -> Result<bool> {
        if data.len() > self.data_len() {
            return Err(Error::DataLength { expected: self.data_len(), got: data.len() });
        }
        let mut padded = data.to_vec();
        padded.resize(self.data_len(), false);
        self.alice_encode(&padded)
    }

    /// Bob's guess for `a_b` from message `x`, querying path boxes only.
    pub fn bob_decode(&mut self, x: bool, b: usize) -> Result<bool> {
        self.bob_decode_with(x, b, BobQuery::Path)
    }

    pub fn bob_decode_with(&mut self, x: bool, b: usize, query: BobQuery) -> Result<bool> {
        if b >= self.data_len() {
            return Err(Error::IndexOutOfRange { index: b, len: self.data_len() });
        }
        if self.bob_done {
            return Err(Error::StrategyReused);
        }
        let mut guess = x;
        for level in (1..=self.depth).rev() {
            let digit = (b >> (level - 1)) & 1 == 1;
            let on_path = b >> level;
            let positions = match query {
                BobQuery::Path => on_path..on_path + 1,
                BobQuery::EveryBox => 0..self.level_len(level),
            };
            for pos in positions {
                let node = self.node(level, pos);
                let out = self.boxes[node].sample(Side::Bob, digit)?;
                if pos == on_path {
                    guess ^= out;
                }
            }
        }
        self.bob_done = true;
        Ok(guess)
    }

    /// Records of Bob's path boxes for index `b`, leaf-adjacent first. Boxes
    /// not yet used by both sides are skipped.
    pub fn path(&self, b: usize) -> Vec<PathStep> {
        (1..=self.depth)
            .filter_map(|level| {
                let position = b >> level;
                self.box_at(level, position).record().map(|record| PathStep { level, position, record })
            })
            .collect()
    }
}

/// Runs one round on a fresh pyramid: Alice encodes, Bob decodes.
pub fn play_round(
    strategy: &mut PyramidStrategy<'_>,
    data: &[bool],
    b: usize,
    query: BobQuery,
) -> Result<RoundTranscript> {
    let x = strategy.alice_encode(data)?;
    let guess = strategy.bob_decode_with(x, b, query)?;
    Ok(RoundTranscript { data: data.to_vec(), b, x, path: strategy.path(b), guess, correct: guess == data[b] })
}

/// A round with `m` pyramids over the same data.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MultiRoundTranscript {
    pub data: Vec<bool>,
    pub indices: Vec<usize>,
    pub messages: Vec<bool>,
    pub guesses: Vec<bool>,
    pub correct: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IndexTally {
    pub attempts: u64,
    pub successes: u64,
}

impl IndexTally {
    pub fn rate(&self) -> Option<f64> {
        (self.attempts > 0).then(|| self.successes as f64 / self.attempts as f64)
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GameReport {
    pub depth: u32,
    pub data_len: usize,
    pub messages: usize,
    pub trials: u64,
    pub seed: u64,
    pub correlation: f64,
    pub successes: u64,
    pub empirical_success: f64,
    /// `(½(1+Eⁿ))^m`.
    pub analytic_success: f64,
    /// Binomial standard error at the analytic success probability.
    pub standard_error: f64,
    pub per_index: Vec<IndexTally>,
}

/// Deterministic round generator for a validated configuration. Round `t`
/// depends only on `(seed, t)`, so rounds can be replayed or run in any order.
#[derive(Clone, Debug)]
pub struct Game {
    cfg: GameConfig,
    behavior: BoxBehavior,
}

impl Game {
    pub fn new(cfg: GameConfig) -> Result<Self> {
        cfg.validate()?;
        let behavior = cfg.source.behavior();
        Ok(Self { cfg, behavior })
    }

    pub fn config(&self) -> &GameConfig {
        &self.cfg
    }

    fn random_data(&self, rng: &mut impl rand_core::RngCore) -> Vec<bool> {
        let len = self.cfg.data_len();
        let mut data = Vec::with_capacity(len);
        while data.len() < len {
            let word = rng.next_u64();
            data.extend((0..64.min(len - data.len())).map(|i| (word >> i) & 1 == 1));
        }
        data
    }

    /// Single-message round with uniformly random data and index.
    pub fn round(&self, trial: u64) -> Result<RoundTranscript> {
        let (boxes, inputs) = trial_streams(self.cfg.seed, trial);
        let mut rng = inputs.at(0);
        let data = self.random_data(&mut rng);
        let b = (rand_core::RngCore::next_u64(&mut rng) as usize) & (self.cfg.data_len() - 1);
        let mut strategy = PyramidStrategy::keyed(&self.behavior, self.cfg.depth, &boxes, 0)?;
        play_round(&mut strategy, &data, b, self.cfg.bob_query)
    }

    /// `m`-message round. Bob's indices are `guess_set` when given, otherwise
    /// a uniformly random set of `m` distinct indices.
    pub fn multi_round(&self, trial: u64, guess_set: Option<&[usize]>) -> Result<MultiRoundTranscript> {
        let (boxes, inputs) = trial_streams(self.cfg.seed, trial);
        let mut rng = inputs.at(0);
        let data = self.random_data(&mut rng);
        let indices = match guess_set {
            Some(set) => {
                check_guess_set(set, self.cfg.messages, self.cfg.data_len())?;
                set.to_vec()
            }
            None => random_subset(&mut rng, self.cfg.data_len(), self.cfg.messages),
        };
        let per_pyramid = (self.cfg.data_len() - 1) as u64;
        let mut messages = Vec::with_capacity(indices.len());
        let mut guesses = Vec::with_capacity(indices.len());
        for (i, &k) in indices.iter().enumerate() {
            let mut strategy = PyramidStrategy::keyed(&self.behavior, self.cfg.depth, &boxes, i as u64 * per_pyramid)?;
            let x = strategy.alice_encode(&data)?;
            messages.push(x);
            guesses.push(strategy.bob_decode_with(x, k, self.cfg.bob_query)?);
        }
        let correct = indices.iter().zip(&guesses).all(|(&k, &g)| data[k] == g);
        Ok(MultiRoundTranscript { data, indices, messages, guesses, correct })
    }

    fn report(&self, successes: u64, per_index: Vec<IndexTally>) -> GameReport {
        let e = self.cfg.source.correlation();
        let per_pyramid = guess_probability_raw(e, self.cfg.depth);
        let analytic = libm::pow(per_pyramid, self.cfg.messages as f64);
        let trials = self.cfg.trials;
        GameReport {
            depth: self.cfg.depth,
            data_len: self.cfg.data_len(),
            messages: self.cfg.messages,
            trials,
            seed: self.cfg.seed,
            correlation: e,
            successes,
            empirical_success: successes as f64 / trials as f64,
            analytic_success: analytic,
            standard_error: libm::sqrt(analytic * (1.0 - analytic) / trials as f64),
            per_index,
        }
    }
}

fn guess_probability_raw(e: f64, depth: u32) -> f64 {
    0.5 * (1.0 + libm::pow(e, depth as f64))
}

fn check_guess_set(set: &[usize], messages: usize, len: usize) -> Result<()> {
    if set.len() > len {
        return Err(Error::TooManyMessages { messages: set.len(), len });
    }
    if set.len() != messages {
        return Err(Error::GuessSetSize { expected: messages, got: set.len() });
    }
    for (i, &k) in set.iter().enumerate() {
        if k >= len {
            return Err(Error::IndexOutOfRange { index: k, len });
        }
        if set[..i].contains(&k) {
            return Err(Error::DuplicateIndex(k));
        }
    }
    Ok(())
}

fn random_subset(rng: &mut impl rand_core::RngCore, len: usize, count: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..len).collect();
    for i in 0..count {
        let j = i + (rng.next_u64() % (len - i) as u64) as usize;
        pool.swap(i, j);
    }
    pool.truncate(count);
    pool
}

/// A finished round as handed to a [`run_game_with`] observer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RoundRecord {
    Single(RoundTranscript),
    Multi(MultiRoundTranscript),
}

impl RoundRecord {
    pub fn correct(&self) -> bool {
        match self {
            RoundRecord::Single(t) => t.correct,
            RoundRecord::Multi(t) => t.correct,
        }
    }
}

/// Runs `cfg.trials` independent rounds with fresh pyramids.
pub fn run_game(cfg: &GameConfig) -> Result<GameReport> {
    run_game_with(cfg, None, |_| {})
}

/// `m` pyramids with Bob's indices fixed to `guess_set`; a round succeeds when
/// every guess is right.
pub fn run_game_multibit(cfg: &GameConfig, guess_set: &[usize]) -> Result<GameReport> {
    run_game_with(cfg, Some(guess_set), |_| {})
}

/// Runs the game and passes every round to `observe` in trial order.
///
/// With one message and no `guess_set`, rounds are [`RoundRecord::Single`];
/// otherwise each round uses `m` pyramids, over `guess_set` when given and a
/// fresh random index set per round when not.
pub fn run_game_with(
    cfg: &GameConfig,
    guess_set: Option<&[usize]>,
    mut observe: impl FnMut(&RoundRecord),
) -> Result<GameReport> {
    let game = Game::new(cfg.clone())?;
    if let Some(set) = guess_set {
        check_guess_set(set, cfg.messages, cfg.data_len())?;
    }
    let mut per_index = vec![IndexTally::default(); cfg.data_len()];
    let mut successes = 0;
    for trial in 0..cfg.trials {
        let record = if cfg.messages == 1 && guess_set.is_none() {
            let t = game.round(trial)?;
            per_index[t.b].attempts += 1;
            per_index[t.b].successes += t.correct as u64;
            RoundRecord::Single(t)
        } else {
            let t = game.multi_round(trial, guess_set)?;
            tally_multi(&mut per_index, &t);
            RoundRecord::Multi(t)
        };
        successes += record.correct() as u64;
        observe(&record);
    }
    Ok(game.report(successes, per_index))
}

fn tally_multi(per_index: &mut [IndexTally], t: &MultiRoundTranscript) {
    for (&k, &g) in t.indices.iter().zip(&t.guesses) {
        per_index[k].attempts += 1;
        per_index[k].successes += (t.data[k] == g) as u64;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Transfer {
    pub guess: bool,
    pub message: bool,
}

/// One-out-of-two oblivious transfer: the depth-1 game on one box.
pub fn oblivious_transfer(a0: bool, a1: bool, choice: bool, instance: &mut BoxInstance<'_>) -> Result<Transfer> {
    if !instance.is_fresh() {
        return Err(Error::StrategyReused);
    }
    let alice_out = instance.sample(Side::Alice, a0 ^ a1)?;
    let message = a0 ^ alice_out;
    let bob_out = instance.sample(Side::Bob, choice)?;
    Ok(Transfer { guess: message ^ bob_out, message })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DatingOutcome {
    /// Outputs differ, so both inputs were 1.
    pub date: bool,
    pub alice_output: bool,
    pub bob_output: bool,
    /// False when the box is not a PR box: `date` is then only probably the AND.
    pub guaranteed: bool,
}

pub fn dating_game(alice_likes: bool, bob_likes: bool, instance: &mut BoxInstance<'_>) -> Result<DatingOutcome> {
    if !instance.is_fresh() {
        return Err(Error::StrategyReused);
    }
    let alice_output = instance.sample(Side::Alice, alice_likes)?;
    let bob_output = instance.sample(Side::Bob, bob_likes)?;
    Ok(DatingOutcome {
        date: alice_output != bob_output,
        alice_output,
        bob_output,
        guaranteed: instance.behavior().is_pr_box(),
    })
}
