//! Fabric property database and material selection.
//!
//! The bundled database holds the measured properties of the candidate
//! TPU-coated nylon fabrics (density, heat-seal peel strength, burst
//! pressure). Elastic constants for the three structural materials used by
//! the simulators live alongside it.

use std::collections::BTreeMap;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// CSV bundled with the crate; users may load their own file with the same
/// schema (`name,density_kg_m3,seal_strength_n,burst_mean_mpa,burst_std_mpa`).
pub const BUNDLED_CSV: &str = include_str!("../data/materials.csv");

const EXPECTED_HEADER: [&str; 5] = [
    "name",
    "density_kg_m3",
    "seal_strength_n",
    "burst_mean_mpa",
    "burst_std_mpa",
];

/// One fabric's measured properties. Burst pressure is stored as mean ± std;
/// selection uses the mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaterialRecord {
    pub name: String,
    /// Mass density (kg/m³).
    pub density_kg_m3: f64,
    /// Seal peel strength (N).
    pub seal_strength_n: f64,
    /// Mean burst pressure (MPa).
    pub burst_mean_mpa: f64,
    /// Burst pressure standard deviation (MPa).
    pub burst_std_mpa: f64,
}

impl MaterialRecord {
    fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(Error::validation("material name is empty"));
        }
        if !(self.density_kg_m3 > 0.0) {
            return Err(Error::validation(format!(
                "{}: density must be positive",
                self.name
            )));
        }
        if !(self.seal_strength_n > 0.0) {
            return Err(Error::validation(format!(
                "{}: seal strength must be positive",
                self.name
            )));
        }
        if !(self.burst_mean_mpa > 0.0) {
            return Err(Error::validation(format!(
                "{}: burst mean must be positive",
                self.name
            )));
        }
        if !(self.burst_std_mpa >= 0.0) {
            return Err(Error::validation(format!(
                "{}: burst std must be non-negative",
                self.name
            )));
        }
        Ok(())
    }
}

/// Linear-elastic constants of a structural material.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElasticProperties {
    /// Young's modulus (MPa).
    pub youngs_modulus_mpa: f64,
    /// Poisson ratio (dimensionless, in [0, 0.5)).
    pub poisson_ratio: f64,
}

impl ElasticProperties {
    pub fn new(youngs_modulus_mpa: f64, poisson_ratio: f64) -> Result<Self> {
        if !(youngs_modulus_mpa > 0.0) {
            return Err(Error::validation("Young's modulus must be positive"));
        }
        if !(0.0..0.5).contains(&poisson_ratio) {
            return Err(Error::validation("Poisson ratio must be in [0, 0.5)"));
        }
        Ok(Self {
            youngs_modulus_mpa,
            poisson_ratio,
        })
    }
}

/// Name of the actuator fabric elastic entry.
pub const ACTUATOR_FABRIC: &str = "actuator_fabric";
/// Name of the strain-limiting layer elastic entry.
pub const STRAIN_LIMIT_LAYER: &str = "strain_limit_layer";
/// Name of the 3D-printed connector elastic entry.
pub const CONNECTOR: &str = "connector";

/// Density of the selected actuator fabric (kg/m³), paired with
/// [`ACTUATOR_FABRIC`] for stress-wave-speed estimates.
pub const ACTUATOR_FABRIC_DENSITY_KG_M3: f64 = 840.0;

fn builtin_elastic() -> BTreeMap<String, ElasticProperties> {
    let mut map = BTreeMap::new();
    map.insert(
        ACTUATOR_FABRIC.to_string(),
        ElasticProperties {
            youngs_modulus_mpa: 498.0,
            poisson_ratio: 0.35,
        },
    );
    map.insert(
        STRAIN_LIMIT_LAYER.to_string(),
        ElasticProperties {
            youngs_modulus_mpa: 305.0,
            poisson_ratio: 0.35,
        },
    );
    map.insert(
        CONNECTOR.to_string(),
        ElasticProperties {
            youngs_modulus_mpa: 3600.0,
            poisson_ratio: 0.30,
        },
    );
    map
}

/// Immutable fabric database: file-ordered records plus the named elastic
/// constants. Safe to share across threads once loaded.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialDB {
    records: Vec<MaterialRecord>,
    elastic: BTreeMap<String, ElasticProperties>,
}

/// Criterion used by [`select_material`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionCriterion {
    MaxBurst,
    MaxSeal,
    MinDensity,
}

impl std::str::FromStr for SelectionCriterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max_burst" => Ok(Self::MaxBurst),
            "max_seal" => Ok(Self::MaxSeal),
            "min_density" => Ok(Self::MinDensity),
            other => Err(Error::validation(format!(
                "unknown selection criterion '{other}' (expected max_burst, max_seal or min_density)"
            ))),
        }
    }
}

impl MaterialDB {
    /// Loads the database that ships with the crate.
    pub fn bundled() -> Result<Self> {
        load_material_db(BUNDLED_CSV.as_bytes())
    }

    pub fn records(&self) -> &[MaterialRecord] {
        &self.records
    }

    pub fn elastic(&self) -> &BTreeMap<String, ElasticProperties> {
        &self.elastic
    }

    pub fn find(&self, name: &str) -> Option<&MaterialRecord> {
        self.records.iter().find(|r| r.name == name)
    }

    /// Serializes the records back to the documented CSV schema. Floats are
    /// written in shortest-roundtrip form so a reload yields an identical DB.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,density_kg_m3,seal_strength_n,burst_mean_mpa,burst_std_mpa\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.name, r.density_kg_m3, r.seal_strength_n, r.burst_mean_mpa, r.burst_std_mpa
            ));
        }
        out
    }
}

/// Parses a material database from the documented CSV schema, preserving
/// file order. Malformed rows report their 1-based line number.
pub fn load_material_db(source: impl Read) -> Result<MaterialDB> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source);

    let header = reader
        .headers()
        .map_err(|e| csv_error(e, 1))?
        .clone();
    let got: Vec<&str> = header.iter().collect();
    if got != EXPECTED_HEADER {
        return Err(Error::Parse {
            line: 1,
            message: format!(
                "unexpected header '{}' (expected '{}')",
                got.join(","),
                EXPECTED_HEADER.join(",")
            ),
        });
    }

    let mut records = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| csv_error(e, 0))?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        if row.len() != 5 {
            return Err(Error::Parse {
                line,
                message: format!("expected 5 fields, found {}", row.len()),
            });
        }
        let parse_field = |idx: usize, what: &str| -> Result<f64> {
            row[idx].parse::<f64>().map_err(|_| Error::Parse {
                line,
                message: format!("{what} '{}' is not a number", &row[idx]),
            })
        };
        let record = MaterialRecord {
            name: row[0].to_string(),
            density_kg_m3: parse_field(1, "density_kg_m3")?,
            seal_strength_n: parse_field(2, "seal_strength_n")?,
            burst_mean_mpa: parse_field(3, "burst_mean_mpa")?,
            burst_std_mpa: parse_field(4, "burst_std_mpa")?,
        };
        record.validate()?;
        if records.iter().any(|r: &MaterialRecord| r.name == record.name) {
            return Err(Error::validation(format!(
                "duplicate material name '{}'",
                record.name
            )));
        }
        records.push(record);
    }

    if records.is_empty() {
        return Err(Error::validation("no records"));
    }

    Ok(MaterialDB {
        records,
        elastic: builtin_elastic(),
    })
}

fn csv_error(e: csv::Error, fallback_line: u64) -> Error {
    let line = e
        .position()
        .map(|p| p.line())
        .unwrap_or(fallback_line);
    Error::Parse {
        line,
        message: e.to_string(),
    }
}

/// Returns the record optimizing `criterion`; ties go to the earliest record
/// in file order.
pub fn select_material(db: &MaterialDB, criterion: SelectionCriterion) -> Result<&MaterialRecord> {
    let records = db.records();
    let first = records
        .first()
        .ok_or_else(|| Error::validation("no records"))?;
    let better = |cand: &MaterialRecord, best: &MaterialRecord| -> bool {
        match criterion {
            SelectionCriterion::MaxBurst => cand.burst_mean_mpa > best.burst_mean_mpa,
            SelectionCriterion::MaxSeal => cand.seal_strength_n > best.seal_strength_n,
            SelectionCriterion::MinDensity => cand.density_kg_m3 < best.density_kg_m3,
        }
    };
    let mut best = first;
    for cand in &records[1..] {
        if better(cand, best) {
            best = cand;
        }
    }
    Ok(best)
}

/// Longitudinal stress-wave speed √(E/ρ), with E given in MPa.
pub fn wave_speed(elastic: &ElasticProperties, density_kg_m3: f64) -> Result<f64> {
    if !(density_kg_m3 > 0.0) {
        return Err(Error::domain("wave speed requires a positive density"));
    }
    Ok((elastic.youngs_modulus_mpa * 1e6 / density_kg_m3).sqrt())
}

/// Wave speed of the actuator fabric pair (E = 498 MPa, ρ = 840 kg/m³),
/// the deforming material that governs quasi-static loading rates.
pub fn actuator_fabric_wave_speed() -> f64 {
    let elastic = ElasticProperties {
        youngs_modulus_mpa: 498.0,
        poisson_ratio: 0.35,
    };
    wave_speed(&elastic, ACTUATOR_FABRIC_DENSITY_KG_M3).expect("positive constants")
}
