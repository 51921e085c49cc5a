use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::ModelError;

/// Event at one position of α(u).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Event {
    Extant,
    Spec,
    Dup,
    Transfer,
    /// Speciation loss (SL).
    SpecLoss,
    /// Transfer loss (TL).
    TransferLoss,
    /// ∅: the only principal arc out of the node is taken.
    NoEvent,
}

impl Event {
    pub const ALL: [Event; 7] =
        [Event::Extant, Event::Spec, Event::Dup, Event::Transfer, Event::SpecLoss, Event::TransferLoss, Event::NoEvent];

    pub fn name(self) -> &'static str {
        match self {
            Event::Extant => "extant",
            Event::Spec => "S",
            Event::Dup => "D",
            Event::Transfer => "T",
            Event::SpecLoss => "SL",
            Event::TransferLoss => "TL",
            Event::NoEvent => "none",
        }
    }

    /// Events allowed only at the last position of a path.
    pub fn is_terminal(self) -> bool {
        matches!(self, Event::Extant | Event::Spec | Event::Dup | Event::Transfer)
    }

    pub fn is_transfer(self) -> bool {
        matches!(self, Event::Transfer | Event::TransferLoss)
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Event {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Event::ALL.into_iter().find(|e| e.name() == s).ok_or_else(|| format!("unknown event '{s}'"))
    }
}

/// α: each DS-tree node id maps to a path of network node ids with one event per step.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Reconciliation {
    alpha: BTreeMap<String, Vec<String>>,
    events: BTreeMap<String, Vec<Event>>,
}

impl Reconciliation {
    /// Checks that both maps share keys and that every path is non-empty and
    /// matched by an event list of the same length.
    pub fn new(alpha: BTreeMap<String, Vec<String>>, events: BTreeMap<String, Vec<Event>>) -> Result<Self, ModelError> {
        for (u, path) in &alpha {
            match events.get(u) {
                None => return Err(ModelError::Shape(format!("node '{u}' has a path but no events"))),
                Some(ev) if ev.len() != path.len() => {
                    return Err(ModelError::Shape(format!(
                        "node '{u}' has {} path nodes but {} events",
                        path.len(),
                        ev.len()
                    )))
                }
                _ => {}
            }
            if path.is_empty() {
                return Err(ModelError::Shape(format!("node '{u}' has an empty path")));
            }
        }
        if let Some(u) = events.keys().find(|u| !alpha.contains_key(*u)) {
            return Err(ModelError::Shape(format!("node '{u}' has events but no path")));
        }
        Ok(Reconciliation { alpha, events })
    }

    pub fn alpha(&self) -> &BTreeMap<String, Vec<String>> {
        &self.alpha
    }

    pub fn events(&self) -> &BTreeMap<String, Vec<Event>> {
        &self.events
    }

    pub fn path(&self, u: &str) -> Option<&[String]> {
        self.alpha.get(u).map(Vec::as_slice)
    }

    pub fn events_of(&self, u: &str) -> Option<&[Event]> {
        self.events.get(u).map(Vec::as_slice)
    }

    /// Number of T and TL labels.
    pub fn transfer_count(&self) -> u64 {
        self.events.values().flatten().filter(|e| e.is_transfer()).count() as u64
    }

    /// Decomposes into the underlying maps, e.g. to mutate and rebuild.
    pub fn into_parts(self) -> (BTreeMap<String, Vec<String>>, BTreeMap<String, Vec<Event>>) {
        (self.alpha, self.events)
    }
}
