use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::adapters::{adapt_polygon, Adapted, Polygon};
use crate::error::{Error, Result};
use crate::geom::{AltitudeMode, Coord, Instance, Point, Terrain};
use crate::sweep::{Solution, Trace};
use crate::witness::{certify_parts, Certificate, Witness, WitnessKind};

pub const ATGP_V1: &str = "atgp-v1";
pub const POLYGON_V1: &str = "polygon-v1";
pub const SOLUTION_V1: &str = "solution-v1";

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<String>,
}

impl Metadata {
    fn is_empty(&self) -> bool {
        self == &Metadata::default()
    }
}

/// On-disk instance. Coordinates are integers or exact decimal/rational strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub format: String,
    pub vertices: Vec<[Coord; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub altitude: Option<Coord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<AltitudeMode>,
    #[serde(default, skip_serializing_if = "Metadata::is_empty")]
    pub metadata: Metadata,
}

/// A parsed instance file.
#[derive(Debug, Clone)]
pub enum Loaded {
    Terrain(Instance),
    Polygon(Box<Adapted>),
}

impl Loaded {
    pub fn instance(&self) -> &Instance {
        match self {
            Loaded::Terrain(i) => i,
            Loaded::Polygon(a) => &a.instance,
        }
    }
}

fn pair(p: &Point) -> [Coord; 2] {
    [p.x.clone(), p.y.clone()]
}

fn points(vs: &[[Coord; 2]]) -> Vec<Point> {
    vs.iter().map(|[x, y]| Point { x: x.clone(), y: y.clone() }).collect()
}

impl InstanceFile {
    pub fn from_instance(inst: &Instance, metadata: Metadata) -> InstanceFile {
        InstanceFile {
            format: ATGP_V1.into(),
            vertices: inst.terrain.vertices().iter().map(pair).collect(),
            altitude: Some(inst.altitude.y.clone()),
            mode: (inst.mode == AltitudeMode::Touching).then_some(AltitudeMode::Touching),
            metadata,
        }
    }

    pub fn from_polygon(p: &Polygon, metadata: Metadata) -> InstanceFile {
        InstanceFile {
            format: POLYGON_V1.into(),
            vertices: p.ring().iter().map(pair).collect(),
            altitude: None,
            mode: None,
            metadata,
        }
    }

    pub fn from_json(s: &str) -> Result<InstanceFile> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    pub fn load(&self) -> Result<Loaded> {
        match self.format.as_str() {
            ATGP_V1 => {
                let y = self
                    .altitude
                    .clone()
                    .ok_or_else(|| Error::Parse("atgp-v1 instance needs an altitude".into()))?;
                let t = Terrain::new(points(&self.vertices))?;
                Ok(Loaded::Terrain(Instance::with_mode(t, y, self.mode.unwrap_or(AltitudeMode::Strict))?))
            }
            POLYGON_V1 => {
                if self.altitude.is_some() {
                    return Err(Error::Parse("polygon-v1 instance takes no altitude".into()));
                }
                let p = Polygon::new(points(&self.vertices))?;
                Ok(Loaded::Polygon(Box::new(adapt_polygon(&p)?)))
            }
            other => Err(Error::Parse(format!("unknown format tag {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub kind: WitnessKind,
    pub edge: usize,
    pub t: Coord,
    /// Realized point; for EpsLeft witnesses at the offset `eps`.
    pub point: [Coord; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<Coord>,
    /// Visibility interval of the realized point on the altitude line.
    pub interval: [Coord; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFlags {
    pub counts_match: bool,
    pub pairwise_disjoint: bool,
    pub coverage_ok: bool,
    pub strips_ok: bool,
    pub valid: bool,
}

impl From<&Certificate> for CertificateFlags {
    fn from(c: &Certificate) -> Self {
        CertificateFlags {
            counts_match: c.counts_match,
            pairwise_disjoint: c.pairwise_disjoint,
            coverage_ok: c.coverage_ok,
            strips_ok: c.strips_ok,
            valid: c.valid(),
        }
    }
}

/// On-disk solution. Guards and witnesses live in the terrain frame; `guard_points`
/// are in the frame of the input file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub format: String,
    pub guards: Vec<Coord>,
    pub guard_points: Vec<[Coord; 2]>,
    pub witnesses: Vec<WitnessRecord>,
    pub certificate: CertificateFlags,
    pub trace_digest: String,
}

pub fn trace_digest(trace: &Trace) -> String {
    let bytes = serde_json::to_vec(trace).expect("trace serializes");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl SolutionFile {
    pub fn new(loaded: &Loaded, solution: &Solution, cert: &Certificate) -> SolutionFile {
        let inst = loaded.instance();
        let guard_points = match loaded {
            Loaded::Terrain(i) => solution.guard_points(i).iter().map(pair).collect(),
            Loaded::Polygon(a) => a.guard_points(solution).iter().map(pair).collect(),
        };
        let witnesses = solution
            .witnesses
            .iter()
            .enumerate()
            .map(|(i, w)| WitnessRecord {
                kind: w.kind,
                edge: w.edge,
                t: w.t.clone(),
                point: cert.witness_points.get(i).map_or_else(|| pair(&w.realize(inst, &Coord::zero())), pair),
                eps: cert.eps.get(i).cloned().flatten(),
                interval: cert.intervals.get(i).map_or_else(
                    || [Coord::zero(), Coord::zero()],
                    |iv| [iv.l.clone(), iv.r.clone()],
                ),
            })
            .collect();
        SolutionFile {
            format: SOLUTION_V1.into(),
            guards: solution.guards.clone(),
            guard_points,
            witnesses,
            certificate: cert.into(),
            trace_digest: trace_digest(&solution.trace),
        }
    }

    pub fn from_json(s: &str) -> Result<SolutionFile> {
        let f: SolutionFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if f.format != SOLUTION_V1 {
            return Err(Error::Parse(format!("unknown format tag {:?}", f.format)));
        }
        Ok(f)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("solution serializes")
    }

    pub fn symbolic_witnesses(&self) -> Vec<Witness> {
        self.witnesses.iter().map(|w| Witness { kind: w.kind, edge: w.edge, t: w.t.clone() }).collect()
    }

    /// Re-certifies the stored guards and witnesses against `inst`.
    pub fn recheck(&self, inst: &Instance) -> Recheck {
        let cert = certify_parts(&self.guards, &self.symbolic_witnesses(), inst);
        let flags = CertificateFlags::from(&cert);
        let points_match = cert.witness_points.len() == self.witnesses.len()
            && cert.witness_points.iter().zip(&self.witnesses).all(|(p, w)| pair(p) == w.point);
        Recheck { flags_match: flags == self.certificate, points_match, flags, certificate: cert }
    }
}

#[derive(Debug, Clone)]
pub struct Recheck {
    pub flags: CertificateFlags,
    pub flags_match: bool,
    pub points_match: bool,
    pub certificate: Certificate,
}

impl Recheck {
    pub fn ok(&self) -> bool {
        self.flags.valid && self.flags_match && self.points_match
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::fixtures::t1;
    use crate::sweep::solve;
    use crate::witness::certify;
    use proptest::prelude::*;

    #[test]
    fn parses_decimal_and_rational_strings() {
        let f = InstanceFile::from_json(
            r#"{"format":"atgp-v1","vertices":[[0,0],["2","4"],["4.0","0"],["6","8/2"],[8,"0.00"]],"altitude":"5"}"#,
        )
        .unwrap();
        let Loaded::Terrain(inst) = f.load().unwrap() else { panic!("terrain expected") };
        assert_eq!(inst, t1());
        let f = InstanceFile::from_json(r#"{"format":"atgp-v1","vertices":[[0,"0.1"],[1,"1/3"]],"altitude":"0.5"}"#).unwrap();
        assert_eq!(f.vertices[0][1], Coord::ratio(1, 10));
    }

    #[test]
    fn rejects_bad_files() {
        for s in [
            r#"{"format":"atgp-v2","vertices":[[0,0],[1,0]],"altitude":1}"#,
            r#"{"format":"atgp-v1","vertices":[[0,0],[1,0]]}"#,
            r#"{"format":"atgp-v1","vertices":[[0,0],[0,1]],"altitude":3}"#,
            r#"{"format":"atgp-v1","vertices":[[0,0],[1,0]],"altitude":0}"#,
            r#"{"format":"atgp-v1","vertices":[[0,"x"],[1,0]],"altitude":2}"#,
        ] {
            let r = InstanceFile::from_json(s).and_then(|f| f.load().map(|_| ()));
            assert!(r.as_ref().is_err_and(Error::is_invalid_instance), "{s}: {r:?}");
        }
    }

    #[test]
    fn polygon_files_load() {
        let f = InstanceFile::from_json(
            r#"{"format":"polygon-v1","vertices":[[0,5],[0,0],[2,4],[4,0],[6,4],[8,0],[8,5]]}"#,
        )
        .unwrap();
        assert_eq!(f.load().unwrap().instance().terrain, t1().terrain);
    }

    #[test]
    fn solution_rechecks() {
        let inst = t1();
        let s = solve(&inst).unwrap();
        let cert = certify(&s, &inst);
        let loaded = Loaded::Terrain(inst.clone());
        let file = SolutionFile::new(&loaded, &s, &cert);
        let back = SolutionFile::from_json(&file.to_json()).unwrap();
        assert_eq!(back, file);
        assert!(back.recheck(&inst).ok());
        assert_eq!(file.trace_digest.len(), 64);

        let mut tampered = file.clone();
        tampered.guards[0] = Coord::from_int(8);
        assert!(!tampered.recheck(&inst).ok());
        let mut tampered = file;
        tampered.witnesses.pop();
        assert!(!tampered.recheck(&inst).ok());
    }

    proptest! {
        #[test]
        fn coordinates_round_trip(ns in prop::collection::vec((any::<i64>(), 1i64..i64::MAX), 2..6)) {
            let vs: Vec<[Coord; 2]> = ns.iter().enumerate()
                .map(|(i, &(n, d))| [Coord::from_int(i as i64), Coord::ratio(n, d)])
                .collect();
            let f = InstanceFile { format: ATGP_V1.into(), vertices: vs, altitude: Some(Coord::ratio(7, 3)), mode: None, metadata: Metadata::default() };
            let back = InstanceFile::from_json(&f.to_json()).unwrap();
            prop_assert_eq!(back, f);
        }
    }
}
