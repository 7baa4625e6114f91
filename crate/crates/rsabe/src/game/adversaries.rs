//! Stock adversaries for calibration, correctness probing, and fuzzing.

use super::{Adversary, AdversaryQuery, ChallengePick, Phase};
use crate::lsss::{self, PolicyExpr};
use crate::math;
use crate::pairing::TargetElement;
use crate::scheme::{
    rsabe_decrypt, PublicInfo, RsabeCiphertext, RsabePrivateKey, RsabePublicKey, TimeUpdateKey,
};
use rand::RngCore;
use std::collections::BTreeSet;

/// Two distinct random messages, sampled from public material only.
fn random_message_pair(
    pi: &PublicInfo,
    pk: &RsabePublicKey,
    rng: &mut dyn RngCore,
) -> (TargetElement, TargetElement) {
    let ctx = pi.ctx();
    let base = ctx.pair(pk.abe().g(), pk.abe().g());
    let m0 = ctx.gt_exp(&base, &ctx.random_zn(rng));
    loop {
        let m1 = ctx.gt_exp(&base, &ctx.random_zn(rng));
        if m1 != m0 {
            return (m0, m1);
        }
    }
}

/// Makes no queries and guesses a fair coin: advantage 0 by construction.
#[derive(Default)]
pub struct CoinFlipAdversary {
    messages: Option<(TargetElement, TargetElement)>,
    attr: String,
}

impl Adversary for CoinFlipAdversary {
    fn begin(&mut self, pi: &PublicInfo, pk: &RsabePublicKey, rng: &mut dyn RngCore) {
        self.messages = Some(random_message_pair(pi, pk, rng));
        self.attr = pk.universe().names()[0].clone();
    }

    fn next_query(&mut self, _phase: Phase, _rng: &mut dyn RngCore) -> Option<AdversaryQuery> {
        None
    }

    fn choose_challenge(&mut self, _rng: &mut dyn RngCore) -> ChallengePick {
        let (m0, m1) = self.messages.unwrap();
        ChallengePick {
            m0,
            m1,
            attrs: vec![self.attr.clone()],
            time: 0,
        }
    }

    fn guess(&mut self, rng: &mut dyn RngCore) -> bool {
        rng.next_u64() & 1 == 1
    }
}

/// Calibration rig: reads the challenge bit through the backdoor and
/// guesses it, pinning the advantage at 1/2.
#[derive(Default)]
pub struct BackdooredAdversary {
    inner: CoinFlipAdversary,
    leaked: Option<bool>,
}

impl Adversary for BackdooredAdversary {
    fn begin(&mut self, pi: &PublicInfo, pk: &RsabePublicKey, rng: &mut dyn RngCore) {
        self.inner.begin(pi, pk, rng);
    }

    fn next_query(&mut self, _phase: Phase, _rng: &mut dyn RngCore) -> Option<AdversaryQuery> {
        None
    }

    fn choose_challenge(&mut self, rng: &mut dyn RngCore) -> ChallengePick {
        self.inner.choose_challenge(rng)
    }

    fn observe_challenge_bit(&mut self, b: bool) {
        self.leaked = Some(b);
    }

    fn guess(&mut self, _rng: &mut dyn RngCore) -> bool {
        self.leaked.expect("backdoor must fire before the guess")
    }
}

/// Exercises every query type, gets itself revoked, then honestly tries to
/// decrypt the challenge with the keys it was given. All attempts fail by
/// construction, so its advantage is 0 — which is exactly what the harness
/// asserts.
pub struct RevokedUserAdversary {
    pi: Option<PublicInfo>,
    messages: Option<(TargetElement, TargetElement)>,
    names: Vec<String>,
    phase1_sent: usize,
    phase2_sent: usize,
    private_keys: Vec<RsabePrivateKey>,
    update_keys: Vec<TimeUpdateKey>,
    challenge_ct: Option<RsabeCiphertext>,
    t_max: u64,
}

impl RevokedUserAdversary {
    pub fn new() -> RevokedUserAdversary {
        RevokedUserAdversary {
            pi: None,
            messages: None,
            names: Vec::new(),
            phase1_sent: 0,
            phase2_sent: 0,
            private_keys: Vec::new(),
            update_keys: Vec::new(),
            challenge_ct: None,
            t_max: 0,
        }
    }
}

impl Default for RevokedUserAdversary {
    fn default() -> Self {
        Self::new()
    }
}

impl Adversary for RevokedUserAdversary {
    fn begin(&mut self, pi: &PublicInfo, pk: &RsabePublicKey, rng: &mut dyn RngCore) {
        self.pi = Some(pi.clone());
        self.messages = Some(random_message_pair(pi, pk, rng));
        self.names = pk.universe().names().to_vec();
        self.t_max = pk.t_max();
    }

    fn next_query(&mut self, phase: Phase, _rng: &mut dyn RngCore) -> Option<AdversaryQuery> {
        let first = PolicyExpr::Leaf(self.names[0].clone());
        match phase {
            Phase::One => {
                let q = match self.phase1_sent {
                    // a key that will satisfy the challenge set, for user 1
                    0 => Some(AdversaryQuery::PrivateKey {
                        policy: first,
                        user: 1,
                    }),
                    // an update key revoking that user at the challenge time
                    1 => Some(AdversaryQuery::Update {
                        time: 0,
                        revoked: BTreeSet::from([1]),
                    }),
                    _ => None,
                };
                self.phase1_sent += 1;
                q
            }
            Phase::Two => {
                let q = match self.phase2_sent {
                    // a later update key must keep user 1 revoked
                    0 => Some(AdversaryQuery::Update {
                        time: self.t_max.min(1),
                        revoked: BTreeSet::from([1]),
                    }),
                    // a second user whose policy the challenge cannot satisfy
                    1 => Some(AdversaryQuery::PrivateKey {
                        policy: PolicyExpr::And(vec![
                            PolicyExpr::Leaf(self.names[0].clone()),
                            PolicyExpr::Leaf(self.names[1].clone()),
                        ]),
                        user: 2,
                    }),
                    _ => None,
                };
                self.phase2_sent += 1;
                q
            }
        }
    }

    fn on_private_key(&mut self, key: &RsabePrivateKey) {
        self.private_keys.push(key.clone());
    }

    fn on_update_key(&mut self, key: &TimeUpdateKey) {
        self.update_keys.push(key.clone());
    }

    fn choose_challenge(&mut self, _rng: &mut dyn RngCore) -> ChallengePick {
        let (m0, m1) = self.messages.unwrap();
        ChallengePick {
            m0,
            m1,
            attrs: vec![self.names[0].clone()],
            time: 0,
        }
    }

    fn on_challenge(&mut self, ct: &RsabeCiphertext) {
        self.challenge_ct = Some(ct.clone());
    }

    fn guess(&mut self, rng: &mut dyn RngCore) -> bool {
        let pi = self.pi.as_ref().unwrap();
        let (m0, m1) = self.messages.unwrap();
        let ct = self.challenge_ct.as_ref().unwrap();
        for sk in &self.private_keys {
            for tk in &self.update_keys {
                if let Ok(m) = rsabe_decrypt(pi, ct, sk, tk) {
                    if m == m0 {
                        return false;
                    }
                    if m == m1 {
                        return true;
                    }
                }
            }
        }
        rng.next_u64() & 1 == 1
    }
}

/// Emits random (often rule-breaking) query streams. Used to fuzz the
/// challenger: every accepted transcript must re-validate, every rejection
/// must carry a typed rule.
pub struct FuzzAdversary {
    names: Vec<String>,
    n_max: u64,
    t_max: u64,
    messages: Option<(TargetElement, TargetElement)>,
    sent1: u64,
    sent2: u64,
    per_phase: u64,
}

impl FuzzAdversary {
    pub fn new(per_phase: u64) -> FuzzAdversary {
        FuzzAdversary {
            names: Vec::new(),
            n_max: 0,
            t_max: 0,
            messages: None,
            sent1: 0,
            sent2: 0,
            per_phase,
        }
    }
}

impl Adversary for FuzzAdversary {
    fn begin(&mut self, pi: &PublicInfo, pk: &RsabePublicKey, rng: &mut dyn RngCore) {
        self.names = pk.universe().names().to_vec();
        self.n_max = pk.tree().n_max();
        self.t_max = pk.t_max();
        self.messages = Some(random_message_pair(pi, pk, rng));
    }

    fn next_query(&mut self, phase: Phase, rng: &mut dyn RngCore) -> Option<AdversaryQuery> {
        let counter = match phase {
            Phase::One => &mut self.sent1,
            Phase::Two => &mut self.sent2,
        };
        if *counter >= self.per_phase {
            return None;
        }
        *counter += 1;
        let names: Vec<&str> = self.names.iter().map(String::as_str).collect();
        if rng.next_u64() & 1 == 1 {
            // deliberately reuses user ids sometimes
            Some(AdversaryQuery::PrivateKey {
                policy: lsss::random_policy(rng, &names, 2),
                user: 1 + math::random_below(rng, self.n_max as u128) as u64,
            })
        } else {
            let mut revoked = BTreeSet::new();
            for u in 1..=self.n_max {
                if rng.next_u64() & 1 == 1 {
                    revoked.insert(u);
                }
            }
            Some(AdversaryQuery::Update {
                time: math::random_below(rng, (self.t_max + 1) as u128) as u64,
                revoked,
            })
        }
    }

    fn choose_challenge(&mut self, rng: &mut dyn RngCore) -> ChallengePick {
        let (m0, m1) = self.messages.unwrap();
        let mut attrs = Vec::new();
        for n in &self.names {
            if rng.next_u64() & 1 == 1 {
                attrs.push(n.clone());
            }
        }
        if attrs.is_empty() {
            attrs.push(self.names[0].clone());
        }
        ChallengePick {
            m0,
            m1,
            attrs,
            time: math::random_below(rng, (self.t_max + 1) as u128) as u64,
        }
    }

    fn guess(&mut self, rng: &mut dyn RngCore) -> bool {
        rng.next_u64() & 1 == 1
    }
}

/// Replays a fixed script; unit tests use it to aim at specific rules.
pub struct ScriptedAdversary {
    pub phase1: Vec<AdversaryQuery>,
    pub phase2: Vec<AdversaryQuery>,
    pub challenge_attrs: Vec<String>,
    pub challenge_time: u64,
    messages: Option<(TargetElement, TargetElement)>,
    served1: usize,
    served2: usize,
}

impl ScriptedAdversary {
    pub fn new(
        phase1: Vec<AdversaryQuery>,
        phase2: Vec<AdversaryQuery>,
        challenge_attrs: Vec<String>,
        challenge_time: u64,
    ) -> ScriptedAdversary {
        ScriptedAdversary {
            phase1,
            phase2,
            challenge_attrs,
            challenge_time,
            messages: None,
            served1: 0,
            served2: 0,
        }
    }
}

impl Adversary for ScriptedAdversary {
    fn begin(&mut self, pi: &PublicInfo, pk: &RsabePublicKey, rng: &mut dyn RngCore) {
        self.messages = Some(random_message_pair(pi, pk, rng));
    }

    fn next_query(&mut self, phase: Phase, _rng: &mut dyn RngCore) -> Option<AdversaryQuery> {
        let (script, served) = match phase {
            Phase::One => (&self.phase1, &mut self.served1),
            Phase::Two => (&self.phase2, &mut self.served2),
        };
        let q = script.get(*served).cloned();
        *served += 1;
        q
    }

    fn choose_challenge(&mut self, _rng: &mut dyn RngCore) -> ChallengePick {
        let (m0, m1) = self.messages.unwrap();
        ChallengePick {
            m0,
            m1,
            attrs: self.challenge_attrs.clone(),
            time: self.challenge_time,
        }
    }

    fn guess(&mut self, rng: &mut dyn RngCore) -> bool {
        rng.next_u64() & 1 == 1
    }
}
