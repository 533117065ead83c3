//! Versioned JSON scenario files.
//!
//! ```json
//! {
//!   "version": 1,
//!   "units": "metric",
//!   "separation_h": 1.5,
//!   "missions": [
//!     { "id": "a", "origin": [0, 10], "destination": [20, 10], "speed": 1.0 }
//!   ]
//! }
//! ```
//!
//! With `"units": "geodetic"` coordinates are `[lat, lon]` in degrees and
//! speeds are in mph. Geodetic scenarios are projected about the centroid of
//! all their vertiports.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geo::{mph_to_mps, project, GeoPoint};
use crate::kinematics::{Mission, Vec2};

pub const SCENARIO_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    Metric,
    Geodetic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MissionSpec {
    pub id: String,
    pub origin: [f64; 2],
    pub destination: [f64; 2],
    pub speed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub version: u32,
    pub units: Units,
    pub separation_h: f64,
    pub missions: Vec<MissionSpec>,
}

impl ScenarioFile {
    pub fn metric(separation_h: f64, missions: &[Mission]) -> Self {
        Self {
            version: SCENARIO_VERSION,
            units: Units::Metric,
            separation_h,
            missions: missions
                .iter()
                .map(|m| MissionSpec {
                    id: m.id().to_string(),
                    origin: [m.origin().x, m.origin().y],
                    destination: [m.destination().x, m.destination().y],
                    speed: m.speed(),
                })
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ScenarioFile = serde_json::from_str(text).map_err(|e| {
            Error::Scenario(format!("line {} column {}: {e}", e.line(), e.column()))
        })?;
        file.validate()?;
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Scenario(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Scenario(msg) => Error::Scenario(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Canonical form: pretty-printed with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("scenario serializes");
        s.push('\n');
        s
    }

    pub fn validate(&self) -> Result<()> {
        let field = |path: String, msg: &str| Err(Error::Scenario(format!("{path}: {msg}")));
        if self.version != SCENARIO_VERSION {
            return field("version".into(), &format!("unsupported version {}", self.version));
        }
        if !(self.separation_h.is_finite() && self.separation_h > 0.0) {
            return field("separation_h".into(), "must be positive");
        }
        if self.missions.is_empty() {
            return field("missions".into(), "must not be empty");
        }
        let mut seen = std::collections::HashSet::new();
        for (i, m) in self.missions.iter().enumerate() {
            if !seen.insert(m.id.as_str()) {
                return field(format!("missions[{i}].id"), &format!("duplicate id `{}`", m.id));
            }
            if !(m.speed.is_finite() && m.speed > 0.0) {
                return field(format!("missions[{i}].speed"), "must be positive");
            }
            if m.origin == m.destination {
                return field(format!("missions[{i}]"), "origin equals destination");
            }
            if self.units == Units::Geodetic {
                for (name, p) in [("origin", m.origin), ("destination", m.destination)] {
                    if let Err(e) = GeoPoint::new(p[0], p[1]) {
                        return field(format!("missions[{i}].{name}"), &e.to_string());
                    }
                }
            }
        }
        Ok(())
    }

    /// Reference point of a geodetic scenario's projection.
    pub fn projection_reference(&self) -> Option<GeoPoint> {
        if self.units != Units::Geodetic {
            return None;
        }
        let pts: Vec<GeoPoint> = self
            .missions
            .iter()
            .flat_map(|m| [m.origin, m.destination])
            .map(|p| GeoPoint { lat: p[0], lon: p[1] })
            .collect();
        GeoPoint::centroid(&pts)
    }

    /// Missions in meters and m/s.
    pub fn to_missions(&self) -> Result<Vec<Mission>> {
        self.validate()?;
        match self.units {
            Units::Metric => self
                .missions
                .iter()
                .map(|m| {
                    Mission::new(
                        m.id.clone(),
                        Vec2::new(m.origin[0], m.origin[1]),
                        Vec2::new(m.destination[0], m.destination[1]),
                        m.speed,
                    )
                })
                .collect(),
            Units::Geodetic => {
                let reference = self.projection_reference().expect("validated non-empty");
                self.missions
                    .iter()
                    .map(|m| {
                        let o = project(GeoPoint::new(m.origin[0], m.origin[1])?, reference)?;
                        let d = project(GeoPoint::new(m.destination[0], m.destination[1])?, reference)?;
                        Mission::new(m.id.clone(), o, d, mph_to_mps(m.speed))
                    })
                    .collect()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const CROSSING: &str = r#"{
        "version": 1,
        "units": "metric",
        "separation_h": 1.5,
        "missions": [
            { "id": "a", "origin": [0, 10], "destination": [20, 10], "speed": 1.0 },
            { "id": "b", "origin": [10, 0], "destination": [10, 20], "speed": 1.0 }
        ]
    }"#;

    #[test]
    fn parses_metric() {
        let s = ScenarioFile::from_json(CROSSING).unwrap();
        let ms = s.to_missions().unwrap();
        assert_eq!(ms.len(), 2);
        assert_eq!(ms[1].origin(), Vec2::new(10.0, 0.0));
    }

    #[test]
    fn rejects_unknown_fields() {
        let text = CROSSING.replace("\"units\"", "\"colour\": 1, \"units\"");
        let err = ScenarioFile::from_json(&text).unwrap_err();
        assert!(err.to_string().contains("unknown field"), "{err}");
        assert!(err.to_string().contains("line"), "{err}");
    }

    #[test]
    fn rejects_wrong_version_and_duplicates() {
        let v2 = CROSSING.replace("\"version\": 1", "\"version\": 2");
        assert!(ScenarioFile::from_json(&v2).unwrap_err().to_string().contains("version"));
        let dup = CROSSING.replace("\"id\": \"b\"", "\"id\": \"a\"");
        let err = ScenarioFile::from_json(&dup).unwrap_err().to_string();
        assert!(err.contains("missions[1].id"), "{err}");
        let slow = CROSSING.replace("\"speed\": 1.0 }\n", "\"speed\": 0 }\n");
        assert!(ScenarioFile::from_json(&slow).unwrap_err().to_string().contains("speed"));
    }

    #[test]
    fn geodetic_bundled_fixture() {
        let s = ScenarioFile::from_json(include_str!("../data/atlanta.json")).unwrap();
        let ms = s.to_missions().unwrap();
        assert_eq!(ms.len(), 4);
        // Speeds in mph become m/s.
        assert!((ms[2].speed() - 27.89530).abs() < 1e-4);
        // Every route is tens of kilometers long.
        assert!(ms.iter().all(|m| m.length() > 5_000.0 && m.length() < 60_000.0));
    }

    proptest! {
        #[test]
        fn write_read_identity(
            h in 0.01f64..100.0,
            raw in prop::collection::vec(((-1e4f64..1e4, -1e4f64..1e4), (-1e4f64..1e4, -1e4f64..1e4), 0.1f64..300.0), 1..6),
        ) {
            let missions: Vec<MissionSpec> = raw
                .iter()
                .enumerate()
                .filter(|(_, (o, d, _))| o != d)
                .map(|(i, (o, d, v))| MissionSpec {
                    id: format!("m{i}"),
                    origin: [o.0, o.1],
                    destination: [d.0, d.1],
                    speed: *v,
                })
                .collect();
            prop_assume!(!missions.is_empty());
            let file = ScenarioFile { version: 1, units: Units::Metric, separation_h: h, missions };
            let text = file.to_json();
            let back = ScenarioFile::from_json(&text).unwrap();
            prop_assert_eq!(&back, &file);
            prop_assert_eq!(back.to_json(), text);
        }
    }
}
