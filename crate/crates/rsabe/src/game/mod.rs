//! Executable IND-CPA game: a challenger state machine with strict query
//! bookkeeping, pluggable adversaries, and Monte-Carlo advantage
//! estimation.
//!
//! The game has five phases. Setup hands the adversary the public info and
//! public key. In query phase I the adversary may request private keys
//! (𝔸_i, u_i) for fresh users and time-update keys (T_j, R_j) for fresh
//! times. At the challenge it commits to (M⁰, M¹, S*, T*), subject to: for
//! every prior key/update pair, S* ∉ 𝔸_i or u_i ∈ R_j or T* > T_j. Phase
//! II repeats the query phases under conditions that keep the challenge
//! undecryptable, and the guess ends the game.
//!
//! Restriction checking is one centralized routine evaluated on every
//! growing transcript prefix and re-run post hoc on the full transcript,
//! so a violation can never be served silently.
//!
//! The harness measures correctness-level sanity only. Nothing here says
//! anything about cryptographic hardness at these parameter sizes.

pub mod adversaries;
pub mod assumptions;

use crate::attrs::AttributeUniverse;
use crate::error::{Error, RestrictionRule, Result};
use crate::lsss::{self, AccessStructure, PolicyExpr};
use crate::pairing::{gen_descriptor, GroupDescriptor, TargetElement};
use crate::scheme::{
    rsabe_encrypt, rsabe_genkey, rsabe_setup_with_descriptor, rsabe_updatekey, PublicInfo,
    RsabeCiphertext, RsabePrivateKey, RsabePublicKey, TimeUpdateKey,
};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use std::collections::BTreeSet;
use std::fmt;

/// Fixed game parameters, known to both parties.
#[derive(Debug, Clone)]
pub struct GameConfig {
    pub lambda: u32,
    pub universe: AttributeUniverse,
    pub t_max: u64,
    pub n_max: u64,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    One,
    Two,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::One => "I",
            Phase::Two => "II",
        })
    }
}

/// What an adversary may ask for during a query phase.
#[derive(Debug, Clone)]
pub enum AdversaryQuery {
    PrivateKey { policy: PolicyExpr, user: u64 },
    Update { time: u64, revoked: BTreeSet<u64> },
}

/// One served query as the transcript records it.
#[derive(Debug, Clone)]
pub enum QueryRecord {
    PrivateKey {
        policy: PolicyExpr,
        structure: AccessStructure,
        user: u64,
    },
    Update {
        time: u64,
        revoked: BTreeSet<u64>,
    },
}

/// The adversary's challenge commitment.
#[derive(Debug, Clone)]
pub struct ChallengePick {
    pub m0: TargetElement,
    pub m1: TargetElement,
    pub attrs: Vec<String>,
    pub time: u64,
}

#[derive(Debug, Clone)]
pub struct ChallengeRecord {
    pub m0: TargetElement,
    pub m1: TargetElement,
    pub attrs: Vec<String>,
    pub attr_set: BTreeSet<u32>,
    pub time: u64,
}

/// Ordered record of everything that happened in one game.
#[derive(Debug, Clone, Default)]
pub struct GameTranscript {
    pub queries: Vec<(Phase, QueryRecord)>,
    pub challenge: Option<ChallengeRecord>,
    pub challenge_bit: Option<bool>,
    pub guess: Option<bool>,
}

impl GameTranscript {
    /// Line-oriented dump, one query per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, (phase, q)) in self.queries.iter().enumerate() {
            match q {
                QueryRecord::PrivateKey { policy, user, .. } => {
                    out.push_str(&format!(
                        "query {} phase {phase} private-key user={user} policy={policy}\n",
                        i + 1
                    ));
                }
                QueryRecord::Update { time, revoked } => {
                    let r: Vec<String> = revoked.iter().map(u64::to_string).collect();
                    out.push_str(&format!(
                        "query {} phase {phase} update time={time} revoked={{{}}}\n",
                        i + 1,
                        r.join(",")
                    ));
                }
            }
        }
        if let Some(ch) = &self.challenge {
            out.push_str(&format!(
                "challenge attrs={{{}}} time={}\n",
                ch.attrs.join(","),
                ch.time
            ));
        }
        if let (Some(b), Some(g)) = (self.challenge_bit, self.guess) {
            out.push_str(&format!(
                "guess b*={} b={} win={}\n",
                g as u8,
                b as u8,
                b == g
            ));
        }
        out
    }
}

/// Adversary callbacks, one per game phase. Implementations must draw all
/// their randomness from the rng they are handed.
pub trait Adversary {
    fn begin(&mut self, pi: &PublicInfo, pk: &RsabePublicKey, rng: &mut dyn RngCore);

    /// Next query for the phase, or `None` to move on.
    fn next_query(&mut self, phase: Phase, rng: &mut dyn RngCore) -> Option<AdversaryQuery>;

    fn on_private_key(&mut self, _key: &RsabePrivateKey) {}

    fn on_update_key(&mut self, _key: &TimeUpdateKey) {}

    fn choose_challenge(&mut self, rng: &mut dyn RngCore) -> ChallengePick;

    fn on_challenge(&mut self, _ct: &RsabeCiphertext) {}

    /// Calibration backdoor: the test rig leaks the challenge bit here.
    /// Real adversaries ignore it.
    fn observe_challenge_bit(&mut self, _b: bool) {}

    fn guess(&mut self, rng: &mut dyn RngCore) -> bool;
}

/// Final state of one game run.
#[derive(Debug, Clone)]
pub struct GameOutcome {
    pub challenge_bit: bool,
    pub guess: bool,
    pub win: bool,
    pub transcript: GameTranscript,
}

/// The centralized restriction checker. Evaluates every Definition-level
/// predicate over an ordered transcript prefix; the runner calls it after
/// each accepted event and once more post hoc over the whole transcript.
pub fn validate_transcript(
    queries: &[(Phase, QueryRecord)],
    challenge: Option<&ChallengeRecord>,
) -> Result<()> {
    let mut users = BTreeSet::new();
    let mut times = BTreeSet::new();
    let violation = |index: usize, rule: RestrictionRule| Error::RestrictionViolated { index, rule };

    for (idx, (phase, q)) in queries.iter().enumerate() {
        match q {
            QueryRecord::PrivateKey {
                structure, user, ..
            } => {
                if !users.insert(*user) {
                    return Err(violation(idx, RestrictionRule::DuplicateUser));
                }
                if *phase == Phase::Two {
                    let ch = challenge.expect("phase II only runs after the challenge");
                    let satisfied = lsss::satisfies(structure, &ch.attr_set)?;
                    if satisfied {
                        // every earlier update with T* ≤ T_k must revoke u
                        for (_, prior) in &queries[..idx] {
                            if let QueryRecord::Update { time, revoked } = prior {
                                if ch.time <= *time && !revoked.contains(user) {
                                    return Err(violation(
                                        idx,
                                        RestrictionRule::PhaseTwoKeyCondition,
                                    ));
                                }
                            }
                        }
                    }
                }
            }
            QueryRecord::Update { time, revoked } => {
                if !times.insert(*time) {
                    return Err(violation(idx, RestrictionRule::DuplicateTime));
                }
                if *phase == Phase::Two {
                    let ch = challenge.expect("phase II only runs after the challenge");
                    if ch.time <= *time {
                        // every earlier key whose policy S* satisfies must be revoked here
                        for (_, prior) in &queries[..idx] {
                            if let QueryRecord::PrivateKey {
                                structure, user, ..
                            } = prior
                            {
                                if lsss::satisfies(structure, &ch.attr_set)?
                                    && !revoked.contains(user)
                                {
                                    return Err(violation(
                                        idx,
                                        RestrictionRule::PhaseTwoUpdateCondition,
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    if let Some(ch) = challenge {
        if ch.m0 == ch.m1 {
            return Err(violation(queries.len(), RestrictionRule::EqualChallengeMessages));
        }
        // (S* ∉ A_i) or (u_i ∈ R_j) or (T* > T_j) for every phase-I pair
        for (ki, (kp, kq)) in queries.iter().enumerate() {
            let QueryRecord::PrivateKey {
                structure, user, ..
            } = kq
            else {
                continue;
            };
            if *kp != Phase::One || !lsss::satisfies(structure, &ch.attr_set)? {
                continue;
            }
            for (up, uq) in queries {
                let QueryRecord::Update { time, revoked } = uq else {
                    continue;
                };
                if *up == Phase::One && !revoked.contains(user) && ch.time <= *time {
                    return Err(violation(ki, RestrictionRule::ChallengeCondition));
                }
            }
        }
    }
    Ok(())
}

const QUERY_CAP: usize = 10_000;

/// Run one game with a pre-generated group descriptor.
pub fn run_game_with_descriptor<A: Adversary + ?Sized, R: RngCore + ?Sized>(
    config: &GameConfig,
    descriptor: GroupDescriptor,
    adversary: &mut A,
    rng: &mut R,
) -> Result<GameOutcome> {
    let setup = rsabe_setup_with_descriptor(
        descriptor,
        &config.universe,
        config.t_max,
        config.n_max,
        rng,
    )?;
    let pi = &setup.public_info;
    let pk = &setup.public_key;
    let mk = &setup.master_key;
    let mut transcript = GameTranscript::default();
    adversary.begin(pi, pk, rng);

    let mut serve_phase = |phase: Phase,
                           adversary: &mut A,
                           transcript: &mut GameTranscript,
                           challenge: Option<&ChallengeRecord>,
                           rng: &mut R|
     -> Result<()> {
        while let Some(query) = adversary.next_query(phase, rng) {
            if transcript.queries.len() >= QUERY_CAP {
                return Err(Error::InvalidParameter("query budget exhausted".into()));
            }
            let record = match query {
                AdversaryQuery::PrivateKey { policy, user } => {
                    let structure =
                        lsss::compile_policy(&policy, &config.universe, pi.modulus_n())?;
                    QueryRecord::PrivateKey {
                        policy,
                        structure,
                        user,
                    }
                }
                AdversaryQuery::Update { time, revoked } => QueryRecord::Update { time, revoked },
            };
            transcript.queries.push((phase, record));
            validate_transcript(&transcript.queries, challenge)?;
            // restrictions hold; serve the query
            match transcript.queries.last().unwrap() {
                (_, QueryRecord::PrivateKey { structure, user, .. }) => {
                    let key = rsabe_genkey(pi, pk, mk, structure, *user, rng)?;
                    adversary.on_private_key(&key);
                }
                (_, QueryRecord::Update { time, revoked }) => {
                    let key = rsabe_updatekey(pi, pk, mk, *time, revoked, rng)?;
                    adversary.on_update_key(&key);
                }
            }
        }
        Ok(())
    };

    serve_phase(Phase::One, adversary, &mut transcript, None, rng)?;

    let pick = adversary.choose_challenge(rng);
    let attr_set: BTreeSet<u32> = config
        .universe
        .resolve_set(&pick.attrs)?
        .into_iter()
        .collect();
    if pick.time > config.t_max {
        return Err(Error::TimeOutOfRange(pick.time));
    }
    let challenge = ChallengeRecord {
        m0: pick.m0,
        m1: pick.m1,
        attrs: pick.attrs.clone(),
        attr_set,
        time: pick.time,
    };
    transcript.challenge = Some(challenge.clone());
    validate_transcript(&transcript.queries, Some(&challenge))?;

    let b = rng.next_u64() & 1 == 1;
    transcript.challenge_bit = Some(b);
    let m = if b { &challenge.m1 } else { &challenge.m0 };
    let ct = rsabe_encrypt(pi, pk, m, &pick.attrs, pick.time, rng)?;
    adversary.on_challenge(&ct);
    adversary.observe_challenge_bit(b);

    serve_phase(Phase::Two, adversary, &mut transcript, Some(&challenge), rng)?;

    let guess = adversary.guess(rng);
    transcript.guess = Some(guess);

    // post-hoc re-validation of the complete transcript; inline checks
    // must never have let a violation through
    validate_transcript(&transcript.queries, transcript.challenge.as_ref())?;

    Ok(GameOutcome {
        challenge_bit: b,
        guess,
        win: b == guess,
        transcript,
    })
}

/// Run one game end to end, generating a fresh group from the config.
pub fn run_game<A: Adversary + ?Sized, R: RngCore + ?Sized>(
    config: &GameConfig,
    adversary: &mut A,
    rng: &mut R,
) -> Result<GameOutcome> {
    let descriptor = gen_descriptor(config.lambda, rng)?;
    run_game_with_descriptor(config, descriptor, adversary, rng)
}

/// Monte-Carlo advantage estimate |wins/trials − 1/2| with its binomial
/// standard error.
#[derive(Debug, Clone, Copy)]
pub struct AdvantageEstimate {
    pub trials: u64,
    pub wins: u64,
    pub estimate: f64,
    pub stderr: f64,
}

impl fmt::Display for AdvantageEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "trials={} wins={} estimate={:.6} stderr={:.6}",
            self.trials, self.wins, self.estimate, self.stderr
        )
    }
}

/// Play `config.trials` independent games against fresh adversaries from
/// the factory. The group descriptor is generated once from the config
/// seed and shared across trials; each trial still runs its own Setup.
pub fn estimate_advantage<A: Adversary, F: FnMut(u64) -> A>(
    config: &GameConfig,
    mut make_adversary: F,
) -> Result<AdvantageEstimate> {
    if config.trials < 100 {
        return Err(Error::InvalidParameter(
            "advantage estimation needs at least 100 trials".into(),
        ));
    }
    let mut seed_rng = ChaCha20Rng::seed_from_u64(config.seed);
    let descriptor = gen_descriptor(config.lambda, &mut seed_rng)?;
    let mut wins = 0u64;
    for trial in 0..config.trials {
        let mut rng = ChaCha20Rng::seed_from_u64(seed_rng.next_u64());
        let mut adversary = make_adversary(trial);
        let outcome =
            run_game_with_descriptor(config, descriptor.clone(), &mut adversary, &mut rng)?;
        if outcome.win {
            wins += 1;
        }
    }
    let p = wins as f64 / config.trials as f64;
    Ok(AdvantageEstimate {
        trials: config.trials,
        wins,
        estimate: (p - 0.5).abs(),
        stderr: (p * (1.0 - p) / config.trials as f64).sqrt().max(f64::EPSILON),
    })
}

#[cfg(test)]
mod tests;
