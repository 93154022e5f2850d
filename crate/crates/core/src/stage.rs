use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// One step of the waterfall. S1–S3 add security context, S4–S7 add code
/// context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stage {
    Bare = 1,
    VulnDisclosed = 2,
    CweDetail = 3,
    BufferIdentification = 4,
    BoundSelection = 5,
    RangePrecision = 6,
    SuitablePlacement = 7,
}

impl Stage {
    pub const ALL: [Stage; 7] = [
        Stage::Bare,
        Stage::VulnDisclosed,
        Stage::CweDetail,
        Stage::BufferIdentification,
        Stage::BoundSelection,
        Stage::RangePrecision,
        Stage::SuitablePlacement,
    ];

    pub const S1: Stage = Stage::Bare;
    pub const S2: Stage = Stage::VulnDisclosed;
    pub const S3: Stage = Stage::CweDetail;
    pub const S4: Stage = Stage::BufferIdentification;
    pub const S5: Stage = Stage::BoundSelection;
    pub const S6: Stage = Stage::RangePrecision;
    pub const S7: Stage = Stage::SuitablePlacement;

    pub const FIRST: Stage = Stage::Bare;
    pub const LAST: Stage = Stage::SuitablePlacement;

    pub fn ordinal(self) -> u8 {
        self as u8
    }

    pub fn from_ordinal(n: u8) -> Option<Stage> {
        Stage::ALL.get(usize::from(n).checked_sub(1)?).copied()
    }

    pub fn next(self) -> Option<Stage> {
        Stage::from_ordinal(self.ordinal() + 1)
    }

    pub fn is_code_context(self) -> bool {
        self >= Stage::BufferIdentification
    }

    /// Short label, `S1`..`S7`.
    pub fn label(self) -> String {
        format!("S{}", self.ordinal())
    }

    pub fn name(self) -> &'static str {
        match self {
            Stage::Bare => "bare",
            Stage::VulnDisclosed => "vuln-disclosed",
            Stage::CweDetail => "cwe-detail",
            Stage::BufferIdentification => "buffer-identification",
            Stage::BoundSelection => "bound-selection",
            Stage::RangePrecision => "range-precision",
            Stage::SuitablePlacement => "suitable-placement",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S{}", self.ordinal())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid stage `{0}` (expected S1..S7)")]
pub struct InvalidStage(pub String);

impl FromStr for Stage {
    type Err = InvalidStage;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let digits = t.strip_prefix('S').or_else(|| t.strip_prefix('s')).unwrap_or(t);
        if let Some(stage) = digits.parse::<u8>().ok().and_then(Stage::from_ordinal) {
            return Ok(stage);
        }
        Stage::ALL
            .into_iter()
            .find(|st| st.name() == t)
            .ok_or_else(|| InvalidStage(s.to_string()))
    }
}

impl Serialize for Stage {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.label())
    }
}

impl<'de> Deserialize<'de> for Stage {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u8),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(n) => Stage::from_ordinal(n)
                .ok_or_else(|| serde::de::Error::custom(InvalidStage(n.to_string()))),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_and_navigation() {
        assert!(Stage::Bare < Stage::SuitablePlacement);
        assert_eq!(Stage::CweDetail.next(), Some(Stage::BufferIdentification));
        assert_eq!(Stage::LAST.next(), None);
        assert!(!Stage::CweDetail.is_code_context());
        assert!(Stage::BufferIdentification.is_code_context());
    }

    #[test]
    fn parse_forms() {
        assert_eq!("S4".parse::<Stage>().unwrap(), Stage::BufferIdentification);
        assert_eq!("7".parse::<Stage>().unwrap(), Stage::SuitablePlacement);
        assert_eq!("bound-selection".parse::<Stage>().unwrap(), Stage::BoundSelection);
        assert!("S9".parse::<Stage>().is_err());
        assert!("S0".parse::<Stage>().is_err());
        assert_eq!(Stage::from_ordinal(9), None);
    }

    #[test]
    fn serde_accepts_numbers_and_labels() {
        let s: Stage = serde_json::from_str("3").unwrap();
        assert_eq!(s, Stage::CweDetail);
        let s: Stage = serde_json::from_str("\"S5\"").unwrap();
        assert_eq!(s, Stage::BoundSelection);
        assert_eq!(serde_json::to_string(&Stage::Bare).unwrap(), "\"S1\"");
    }
}
