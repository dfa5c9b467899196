//! JSON instance documents:
//!
//! ```json
//! {
//!   "kind": "additive",
//!   "agents": ["a1", "a2"],
//!   "resources": ["o1"],
//!   "matrix": [[1], ["1/2"]],
//!   "allocation": {"o1": "a2"}
//! }
//! ```
//!
//! Numbers are exact: bare integers or `"p/q"` strings. `allocation` maps
//! resource ids to agent ids or `null`; resources it omits are unallocated.
//! An optional `roles` entry carries a [`ReductionMap`].

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::model::{Allocation, Instance, Rational, UtilityKind, UtilitySpec};
use crate::reductions::ReductionMap;

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceDocument {
    pub instance: Instance,
    pub allocation: Option<Allocation>,
    pub roles: Option<ReductionMap>,
}

impl InstanceDocument {
    pub fn new(instance: Instance) -> Self {
        InstanceDocument {
            instance,
            allocation: None,
            roles: None,
        }
    }

    pub fn with_allocation(mut self, allocation: Allocation) -> Self {
        self.allocation = Some(allocation);
        self
    }

    pub fn with_roles(mut self, roles: ReductionMap) -> Self {
        self.roles = Some(roles);
        self
    }

    pub fn to_value(&self) -> Value {
        let inst = &self.instance;
        let mut doc = Map::new();
        doc.insert("kind".into(), inst.kind().name().into());
        doc.insert("agents".into(), inst.agents().into());
        doc.insert("resources".into(), inst.resources().into());
        let matrix: Vec<Value> = inst
            .utility()
            .matrix()
            .iter()
            .map(|row| Value::Array(row.iter().map(rational_to_value).collect()))
            .collect();
        doc.insert("matrix".into(), Value::Array(matrix));
        if let Some(alloc) = &self.allocation {
            doc.insert("allocation".into(), allocation_to_value(inst, alloc));
        }
        if let Some(roles) = &self.roles {
            doc.insert(
                "roles".into(),
                serde_json::to_value(roles).expect("roles serialize"),
            );
        }
        Value::Object(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("document serializes")
    }
}

/// Resource id to agent id (or null), for every resource.
pub fn allocation_to_value(instance: &Instance, alloc: &Allocation) -> Value {
    let map: Map<String, Value> = instance
        .resources()
        .iter()
        .zip(alloc.owners())
        .map(|(r, o)| {
            let owner = o.map_or(Value::Null, |i| Value::String(instance.agents()[i].clone()));
            (r.clone(), owner)
        })
        .collect();
    Value::Object(map)
}

/// Integers that fit in `i64` are bare numbers, everything else `"p/q"` or `"p"`.
pub fn rational_to_value(r: &Rational) -> Value {
    if r.is_integer() {
        if let Some(v) = r.numer().to_i64() {
            return Value::from(v);
        }
        return Value::String(r.numer().to_string());
    }
    Value::String(format!("{}/{}", r.numer(), r.denom()))
}

pub fn parse_rational_str(text: &str) -> Option<Rational> {
    let (p, q) = match text.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text.trim(), "1"),
    };
    let digits = |s: &str| {
        let body = s.strip_prefix(['-', '+']).unwrap_or(s);
        !body.is_empty() && body.bytes().all(|b| b.is_ascii_digit())
    };
    if !digits(p) || !digits(q) {
        return None;
    }
    let numer: BigInt = p.parse().ok()?;
    let denom: BigInt = q.parse().ok()?;
    if denom.is_zero() {
        return None;
    }
    Some(Rational::new(numer, denom))
}

fn parse_rational(value: &Value, path: &str) -> Result<Rational> {
    let bad = || {
        Error::Format(format!(
            "{path}: expected an integer or a \"p/q\" string, found {value}"
        ))
    };
    match value {
        Value::Number(n) => {
            if let Some(v) = n.as_i64() {
                Ok(Rational::from_integer(v.into()))
            } else if let Some(v) = n.as_u64() {
                Ok(Rational::from_integer(v.into()))
            } else {
                Err(bad())
            }
        }
        Value::String(s) => parse_rational_str(s).ok_or_else(bad),
        _ => Err(bad()),
    }
}

fn string_list(doc: &Map<String, Value>, key: &str) -> Result<Vec<String>> {
    let items = doc
        .get(key)
        .ok_or_else(|| Error::Format(format!("$.{key}: missing")))?
        .as_array()
        .ok_or_else(|| Error::Format(format!("$.{key}: expected an array")))?;
    items
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.as_str()
                .map(str::to_owned)
                .ok_or_else(|| Error::Format(format!("$.{key}[{i}]: expected a string id")))
        })
        .collect()
}

pub fn parse_instance(text: &str) -> Result<InstanceDocument> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| Error::Format(format!("$: invalid JSON: {e}")))?;
    parse_instance_value(&value)
}

pub fn parse_instance_value(value: &Value) -> Result<InstanceDocument> {
    let doc = value
        .as_object()
        .ok_or_else(|| Error::Format("$: expected an object".into()))?;
    let kind = match doc.get("kind").and_then(Value::as_str) {
        Some("additive") => UtilityKind::Additive,
        Some("max-atomic") => UtilityKind::MaxAtomic,
        Some(other) => {
            return Err(Error::Format(format!(
                "$.kind: unknown kind {other:?}, expected \"additive\" or \"max-atomic\""
            )))
        }
        None => return Err(Error::Format("$.kind: missing or not a string".into())),
    };
    let agents = string_list(doc, "agents")?;
    let resources = string_list(doc, "resources")?;
    let rows = doc
        .get("matrix")
        .ok_or_else(|| Error::Format("$.matrix: missing".into()))?
        .as_array()
        .ok_or_else(|| Error::Format("$.matrix: expected an array of rows".into()))?;
    if rows.len() != agents.len() {
        return Err(Error::Format(format!(
            "$.matrix: {} rows for {} agents",
            rows.len(),
            agents.len()
        )));
    }
    let mut matrix = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Format(format!("$.matrix[{i}]: expected an array")))?;
        if row.len() != resources.len() {
            return Err(Error::Format(format!(
                "$.matrix[{i}]: {} entries for {} resources",
                row.len(),
                resources.len()
            )));
        }
        let parsed: Result<Vec<Rational>> = row
            .iter()
            .enumerate()
            .map(|(j, v)| parse_rational(v, &format!("$.matrix[{i}][{j}]")))
            .collect();
        matrix.push(parsed?);
    }
    let utility = match kind {
        UtilityKind::Additive => UtilitySpec::Additive(matrix),
        UtilityKind::MaxAtomic => UtilitySpec::MaxAtomic(matrix),
    };
    let instance = Instance::new(agents, resources, utility).map_err(|e| match e {
        Error::InvalidInstance(msg) => Error::Format(format!("$.matrix: {msg}")),
        other => other,
    })?;

    let allocation = match doc.get("allocation") {
        None | Some(Value::Null) => None,
        Some(v) => Some(parse_allocation(&instance, v)?),
    };
    let roles = match doc.get("roles") {
        None | Some(Value::Null) => None,
        Some(v) => {
            let roles: ReductionMap = serde_json::from_value(v.clone())
                .map_err(|e| Error::Format(format!("$.roles: {e}")))?;
            if roles.agent_ids() != instance.agents()
                || roles.resource_ids() != instance.resources()
            {
                return Err(Error::Format(
                    "$.roles: roles do not match the agent and resource ids".into(),
                ));
            }
            Some(roles)
        }
    };
    Ok(InstanceDocument {
        instance,
        allocation,
        roles,
    })
}

fn parse_allocation(instance: &Instance, value: &Value) -> Result<Allocation> {
    let map = value
        .as_object()
        .ok_or_else(|| Error::Format("$.allocation: expected an object".into()))?;
    let mut alloc = Allocation::unallocated(instance.num_resources());
    for (resource, owner) in map {
        let path = format!("$.allocation.{resource}");
        let j = instance
            .resource_index(resource)
            .ok_or_else(|| Error::Format(format!("{path}: unknown resource")))?;
        let owner = match owner {
            Value::Null => None,
            Value::String(agent) => Some(
                instance
                    .agent_index(agent)
                    .ok_or_else(|| Error::Format(format!("{path}: unknown agent {agent:?}")))?,
            ),
            _ => {
                return Err(Error::Format(format!(
                    "{path}: expected an agent id or null"
                )))
            }
        };
        alloc.set_owner(j, owner);
    }
    Ok(alloc)
}
