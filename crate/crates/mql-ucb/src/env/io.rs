//! JSON serialization for MDP instances, schema `mdp/v1`.

use serde::{Deserialize, Serialize};

use super::{InitialStateSchedule, MdpError, MdpSpec};

pub const MDP_SCHEMA: &str = "mdp/v1";

#[derive(Serialize, Deserialize)]
struct MdpFile {
    schema: String,
    num_states: usize,
    num_actions: usize,
    horizon: usize,
    transition: Vec<Vec<Vec<Vec<f64>>>>,
    reward: Vec<Vec<Vec<f64>>>,
    initial: InitialStateSchedule,
}

impl MdpSpec {
    pub fn to_json(&self) -> String {
        let file = MdpFile {
            schema: MDP_SCHEMA.to_string(),
            num_states: self.num_states,
            num_actions: self.num_actions,
            horizon: self.horizon,
            transition: self.transition.clone(),
            reward: self.reward.clone(),
            initial: self.initial.clone(),
        };
        serde_json::to_string_pretty(&file).expect("MDP serialization cannot fail")
    }

    /// Parse and validate an `mdp/v1` document.
    pub fn from_json(text: &str) -> Result<Self, MdpError> {
        let file: MdpFile =
            serde_json::from_str(text).map_err(|e| MdpError::Parse(e.to_string()))?;
        if file.schema != MDP_SCHEMA {
            return Err(MdpError::BadSchema {
                expected: MDP_SCHEMA.to_string(),
                found: file.schema,
            });
        }
        MdpSpec::new(
            file.num_states,
            file.num_actions,
            file.horizon,
            file.transition,
            file.reward,
            file.initial,
        )
    }
}
