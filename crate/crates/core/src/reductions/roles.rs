use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::Literal;

/// What an agent of a reduced instance stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "kebab-case")]
pub enum AgentRole {
    /// One agent per clause.
    Clause {
        clause: usize,
    },
    /// Pareto reduction: the agent collecting the clauses that contain `literal`.
    LiteralSet {
        literal: Literal,
    },
    /// EEF reduction, existential variable assignment agent.
    ExistentialAssignment {
        literal: Literal,
    },
    /// EEF reduction, universal variable assignment agent.
    UniversalAssignment {
        literal: Literal,
    },
    /// EEF reduction, universal variable assignment helper agent.
    UniversalHelper {
        literal: Literal,
    },
    /// EEF reduction, envy protection for a universal literal occurrence.
    LiteralEnvyProtection {
        clause: usize,
        literal: Literal,
    },
    Unassigned,
    UnassignedEnvyProtection,
    Satisfied,
}

/// What a resource of a reduced instance stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "kebab-case")]
pub enum ResourceRole {
    /// Pareto reduction, one per variable.
    Variable {
        var: usize,
    },
    Clause {
        clause: usize,
    },
    ClauseCompensation {
        clause: usize,
    },
    /// Pareto reduction, one per literal occurrence.
    ClauseLiteral {
        clause: usize,
        literal: Literal,
    },
    UniversalLiteral {
        clause: usize,
        literal: Literal,
    },
    ExistentialLiteral {
        clause: usize,
        literal: Literal,
    },
    UniversalVariable {
        var: usize,
    },
    ExistentialVariable {
        var: usize,
    },
    UniversalCompensation {
        var: usize,
    },
    UniversalHelper {
        literal: Literal,
    },
    LiteralEnvyProtection {
        clause: usize,
        literal: Literal,
    },
    Satisfied,
    Envy1,
    Envy2,
}

impl fmt::Display for AgentRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AgentRole::Clause { clause } => write!(f, "a_c{}", clause + 1),
            AgentRole::LiteralSet { literal }
            | AgentRole::ExistentialAssignment { literal }
            | AgentRole::UniversalAssignment { literal } => write!(f, "a_set({literal})"),
            AgentRole::UniversalHelper { literal } => write!(f, "a_helper({literal})"),
            AgentRole::LiteralEnvyProtection { clause, literal } => {
                write!(f, "a_envyprot(c{},{literal})", clause + 1)
            }
            AgentRole::Unassigned => f.write_str("a_unassigned"),
            AgentRole::UnassignedEnvyProtection => f.write_str("a_unassigned_envyprot"),
            AgentRole::Satisfied => f.write_str("a_satisfied"),
        }
    }
}

impl fmt::Display for ResourceRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResourceRole::Variable { var }
            | ResourceRole::UniversalVariable { var }
            | ResourceRole::ExistentialVariable { var } => write!(f, "o_x{}", var + 1),
            ResourceRole::Clause { clause } => write!(f, "o_c{}", clause + 1),
            ResourceRole::ClauseCompensation { clause } => write!(f, "o_comp(c{})", clause + 1),
            ResourceRole::ClauseLiteral { clause, literal }
            | ResourceRole::UniversalLiteral { clause, literal }
            | ResourceRole::ExistentialLiteral { clause, literal } => {
                write!(f, "o(c{},{literal})", clause + 1)
            }
            ResourceRole::UniversalCompensation { var } => write!(f, "o_comp(x{})", var + 1),
            ResourceRole::UniversalHelper { literal } => write!(f, "o_helper({literal})"),
            ResourceRole::LiteralEnvyProtection { clause, literal } => {
                write!(f, "o_envyprot(c{},{literal})", clause + 1)
            }
            ResourceRole::Satisfied => f.write_str("o_satisfied"),
            ResourceRole::Envy1 => f.write_str("o_envy1"),
            ResourceRole::Envy2 => f.write_str("o_envy2"),
        }
    }
}

/// Role of every agent and resource of a reduced instance, in index order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawMap", into = "RawMap")]
pub struct ReductionMap {
    agents: Vec<AgentRole>,
    resources: Vec<ResourceRole>,
    agent_index: HashMap<AgentRole, usize>,
    resource_index: HashMap<ResourceRole, usize>,
}

#[derive(Serialize, Deserialize)]
struct RawMap {
    agents: Vec<AgentRole>,
    resources: Vec<ResourceRole>,
}

impl TryFrom<RawMap> for ReductionMap {
    type Error = Error;

    fn try_from(raw: RawMap) -> Result<Self> {
        ReductionMap::new(raw.agents, raw.resources)
    }
}

impl From<ReductionMap> for RawMap {
    fn from(map: ReductionMap) -> Self {
        RawMap {
            agents: map.agents,
            resources: map.resources,
        }
    }
}

impl ReductionMap {
    /// Errors if a role is listed twice.
    pub fn new(agents: Vec<AgentRole>, resources: Vec<ResourceRole>) -> Result<Self> {
        let mut agent_index = HashMap::with_capacity(agents.len());
        for (i, role) in agents.iter().enumerate() {
            if agent_index.insert(*role, i).is_some() {
                return Err(Error::Format(format!("agent role {role} appears twice")));
            }
        }
        let mut resource_index = HashMap::with_capacity(resources.len());
        for (j, role) in resources.iter().enumerate() {
            if resource_index.insert(*role, j).is_some() {
                return Err(Error::Format(format!("resource role {role} appears twice")));
            }
        }
        Ok(ReductionMap {
            agents,
            resources,
            agent_index,
            resource_index,
        })
    }

    pub fn agent_roles(&self) -> &[AgentRole] {
        &self.agents
    }

    pub fn resource_roles(&self) -> &[ResourceRole] {
        &self.resources
    }

    pub fn agent(&self, role: AgentRole) -> Option<usize> {
        self.agent_index.get(&role).copied()
    }

    pub fn resource(&self, role: ResourceRole) -> Option<usize> {
        self.resource_index.get(&role).copied()
    }

    /// Index of a role the construction is known to contain.
    pub(crate) fn a(&self, role: AgentRole) -> usize {
        self.agent(role)
            .unwrap_or_else(|| panic!("reduction has no agent {role}"))
    }

    pub(crate) fn r(&self, role: ResourceRole) -> usize {
        self.resource(role)
            .unwrap_or_else(|| panic!("reduction has no resource {role}"))
    }

    pub fn agent_ids(&self) -> Vec<String> {
        self.agents.iter().map(ToString::to_string).collect()
    }

    pub fn resource_ids(&self) -> Vec<String> {
        self.resources.iter().map(ToString::to_string).collect()
    }

    pub fn count_agents(&self, pred: impl Fn(&AgentRole) -> bool) -> usize {
        self.agents.iter().filter(|r| pred(r)).count()
    }

    pub fn count_resources(&self, pred: impl Fn(&ResourceRole) -> bool) -> usize {
        self.resources.iter().filter(|r| pred(r)).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_readable() {
        assert_eq!(
            AgentRole::LiteralSet {
                literal: Literal::neg(2)
            }
            .to_string(),
            "a_set(-x3)"
        );
        assert_eq!(
            ResourceRole::ClauseLiteral {
                clause: 0,
                literal: Literal::pos(0)
            }
            .to_string(),
            "o(c1,x1)"
        );
        assert_eq!(
            AgentRole::LiteralEnvyProtection {
                clause: 1,
                literal: Literal::pos(1)
            }
            .to_string(),
            "a_envyprot(c2,x2)"
        );
    }

    #[test]
    fn duplicate_roles_rejected() {
        let dup = ReductionMap::new(vec![AgentRole::Satisfied, AgentRole::Satisfied], vec![]);
        assert!(dup.is_err());
    }

    #[test]
    fn serde_round_trip() {
        let map = ReductionMap::new(
            vec![AgentRole::Unassigned, AgentRole::Clause { clause: 0 }],
            vec![ResourceRole::Envy1],
        )
        .unwrap();
        let text = serde_json::to_string(&map).unwrap();
        let back: ReductionMap = serde_json::from_str(&text).unwrap();
        assert_eq!(back, map);
        assert_eq!(back.agent(AgentRole::Clause { clause: 0 }), Some(1));
    }
}
