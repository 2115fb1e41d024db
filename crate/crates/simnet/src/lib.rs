//! In-process adversarial simulation for ZeroTwo.
//!
//! A [`world::World`] wires the reference server, a browser and one or more
//! authenticators through a [`net::SimNet`] that logs and can rewrite every
//! message. [`scenarios`] scripts honest and hostile runs on top of it;
//! [`dictionary`] plays the offline attacker holding a stolen verifier;
//! [`checks`] turns all of it into acceptance verdicts.
//!
//! ```
//! use zerotwo_sim::{run_scenario, ScenarioOptions, Tape};
//!
//! let transcript = run_scenario("tampered-b", Tape::new(1), &ScenarioOptions::default()).unwrap();
//! assert!(transcript.passed(), "{:?}", transcript.first_divergence());
//! ```

pub mod checks;
pub mod dictionary;
pub mod leak;
pub mod mont;
pub mod net;
pub mod scenarios;
pub mod tape;
pub mod transcript;
pub mod world;

pub use dictionary::{dictionary_attack, AttackReport};
pub use net::{Interceptor, SimNet};
pub use scenarios::{execute, run_scenario, ScenarioOptions, UnknownScenario, SCENARIOS};
pub use tape::Tape;
pub use transcript::{Channel, Direction, Message, StepOutcome, Transcript};
pub use world::{World, WorldOptions};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/simulation.md")]
    struct Simulation;
}
