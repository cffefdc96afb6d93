//! Registered mapping families with closed-form fixed points and paths.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::metric::{DomainSet, MappingInstance, MetricError, Modulus, Point, Space};

/// Parameter values by name; scalars are one-element vectors.
pub type Params = BTreeMap<String, Vec<f64>>;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum GalleryError {
    #[error("unknown map `{0}` (see list-maps)")]
    UnknownMap(String),
    #[error("map `{map}` has no parameter `{param}`")]
    UnknownParam { map: String, param: String },
    #[error("{0}")]
    Argument(String),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: Vec<f64>,
    pub range: &'static str,
    pub description: &'static str,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MapSpec {
    pub name: &'static str,
    pub summary: &'static str,
    pub params: Vec<ParamSpec>,
}

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.name, self.summary)?;
        for p in &self.params {
            let default: Vec<String> = p.default.iter().map(|v| v.to_string()).collect();
            writeln!(
                f,
                "    {} = {}  [{}]  {}",
                p.name,
                default.join(","),
                p.range,
                p.description
            )?;
        }
        Ok(())
    }
}

fn spec(
    name: &'static str,
    default: &[f64],
    range: &'static str,
    description: &'static str,
) -> ParamSpec {
    ParamSpec {
        name,
        default: default.to_vec(),
        range,
        description,
    }
}

/// Every registered family with its parameter schema.
pub fn registry() -> Vec<MapSpec> {
    vec![
        MapSpec {
            name: "affine-halfline",
            summary: "T(x) = (x - 1)/2 on [lower, inf), modulus 1/2; fixed point -1, path -t/(2 - t)",
            params: vec![spec(
                "lower",
                &[-1.0],
                "finite or -inf",
                "left end of the domain; -inf gives the whole line, > -1 makes the map nonself",
            )],
        },
        MapSpec {
            name: "rakotch-decay",
            summary: "T(x) = x/(1 + x) coordinatewise on [0, inf)^dim with the max norm, modulus 1/(1 + t); fixed point 0",
            params: vec![spec("dim", &[1.0], "integer 1..=16", "dimension")],
        },
        MapSpec {
            name: "constant",
            summary: "T(x) = c on the Euclidean ball of the given radius, modulus 0; path t c",
            params: vec![
                spec("c", &[2.0], "any vector", "the constant value (its length sets the dimension)"),
                spec("radius", &[1.0], "> 0", "radius of the domain ball about the origin"),
            ],
        },
        MapSpec {
            name: "planar-rotation",
            summary: "T(x) = R(theta) x + b on a Euclidean disk, nonexpansive; path (I - tR)^-1 t b",
            params: vec![
                spec("theta", &[FRAC_PI_4], "(0, 2 pi)", "rotation angle"),
                spec("b", &[1.0, 0.0], "2-vector", "translation"),
                spec("radius", &[2.0], "> |b| / (2 sin(theta/2))", "disk radius"),
            ],
        },
        MapSpec {
            name: "rational-damped",
            summary: "T(x) = x/(2 + x^2) on [-halfwidth, halfwidth], modulus 1/2; fixed point 0",
            params: vec![spec("halfwidth", &[2.0], "> 0", "half-width of the domain interval")],
        },
    ]
}

pub type PathFn = Arc<dyn Fn(f64) -> Point + Send + Sync>;

/// A mapping with the ground truth known about it.
#[derive(Clone)]
pub struct GalleryEntry {
    pub name: String,
    pub map: MappingInstance,
    pub known_fixed_point: Option<Point>,
    /// `t -> x_t`, the fixed point of `tT`, on `[0, 1]`.
    pub known_path: Option<PathFn>,
    /// Half-width of the box (about the domain anchor) used for random sampling.
    pub sample_radius: f64,
    pub notes: &'static str,
}

impl fmt::Debug for GalleryEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GalleryEntry")
            .field("name", &self.name)
            .field("map", &self.map)
            .field("known_fixed_point", &self.known_fixed_point)
            .field("known_path", &self.known_path.is_some())
            .finish()
    }
}

impl GalleryEntry {
    /// `n` random pairs from the domain, reproducible from `seed`.
    pub fn sample_pairs(&self, n: usize, seed: u64) -> Vec<(Point, Point)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let anchor = self.map.domain().anchor(self.map.space());
        (0..n)
            .map(|_| {
                let x = self
                    .map
                    .sample_domain(&mut rng, &anchor, self.sample_radius);
                let y = self
                    .map
                    .sample_domain(&mut rng, &anchor, self.sample_radius);
                (x, y)
            })
            .collect()
    }

    /// Check the closed forms: `d(xbar, T xbar) <= 1e-12` and
    /// `|x_t - tT x_t| <= 1e-12` on a 100-point grid of `[0, 1)`.
    pub fn check_invariants(&self) -> Vec<String> {
        let mut failures = Vec::new();
        let space = self.map.space();
        if let Some(xbar) = &self.known_fixed_point {
            match self.map.apply(xbar) {
                Ok(tx) if space.distance(xbar, &tx) <= 1e-12 => {}
                Ok(tx) => failures.push(format!(
                    "{}: fixed point residual {:e}",
                    self.name,
                    space.distance(xbar, &tx)
                )),
                Err(e) => failures.push(format!("{}: fixed point not in domain: {e}", self.name)),
            }
        }
        if let Some(path) = &self.known_path {
            for i in 0..100 {
                let t = i as f64 / 100.0;
                let x = path(t);
                match self.map.apply(&x) {
                    Ok(tx) => {
                        let r = space.distance(&x, &(tx * t));
                        if r > 1e-12 {
                            failures.push(format!("{}: path residual {r:e} at t = {t}", self.name));
                        }
                    }
                    Err(e) => {
                        failures.push(format!("{}: path leaves domain at t = {t}: {e}", self.name))
                    }
                }
            }
        }
        failures
    }
}

struct ParamReader<'a> {
    map: &'static str,
    params: &'a Params,
    specs: Vec<ParamSpec>,
}

impl<'a> ParamReader<'a> {
    fn new(spec: &MapSpec, params: &'a Params) -> Result<ParamReader<'a>, GalleryError> {
        if let Some(k) = params
            .keys()
            .find(|k| !spec.params.iter().any(|p| p.name == k.as_str()))
        {
            return Err(GalleryError::UnknownParam {
                map: spec.name.to_string(),
                param: k.clone(),
            });
        }
        Ok(ParamReader {
            map: spec.name,
            params,
            specs: spec.params.clone(),
        })
    }

    fn vector(&self, name: &str) -> Vec<f64> {
        self.params.get(name).cloned().unwrap_or_else(|| {
            self.specs
                .iter()
                .find(|p| p.name == name)
                .expect("registered parameter")
                .default
                .clone()
        })
    }

    fn scalar(&self, name: &str) -> Result<f64, GalleryError> {
        match self.vector(name).as_slice() {
            [v] => Ok(*v),
            other => Err(GalleryError::Argument(format!(
                "{}: parameter `{name}` must be a single number, got {} values",
                self.map,
                other.len()
            ))),
        }
    }
}

fn range_error(map: &str, msg: impl fmt::Display) -> GalleryError {
    GalleryError::Argument(format!("{map}: {msg}"))
}

/// Instantiate a registered family.
pub fn make_map(name: &str, params: &Params) -> Result<GalleryEntry, GalleryError> {
    let registry = registry();
    let spec = registry
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| GalleryError::UnknownMap(name.to_string()))?;
    let reader = ParamReader::new(spec, params)?;
    match spec.name {
        "affine-halfline" => affine_halfline(&reader),
        "rakotch-decay" => rakotch_decay(&reader),
        "constant" => constant(&reader),
        "planar-rotation" => planar_rotation(&reader),
        "rational-damped" => rational_damped(&reader),
        _ => unreachable!("registry and constructors disagree"),
    }
}

/// Instantiate a family with default parameters.
pub fn make_default(name: &str) -> Result<GalleryEntry, GalleryError> {
    make_map(name, &Params::new())
}

fn affine_halfline(p: &ParamReader) -> Result<GalleryEntry, GalleryError> {
    let lower = p.scalar("lower")?;
    if lower.is_nan() || lower == f64::INFINITY {
        return Err(range_error(p.map, "lower must be finite or -inf"));
    }
    let domain = if lower == f64::NEG_INFINITY {
        DomainSet::whole(1)
    } else {
        DomainSet::half_line(lower)?
    };
    let map = MappingInstance::new(
        "affine-halfline",
        Space::euclidean(1),
        domain,
        Modulus::constant(0.5)?,
        |x| x.map(|v| (v - 1.0) / 2.0),
    )?;
    let contains_limit = lower <= -1.0;
    let path: PathFn = Arc::new(|t| Point::from_element(1, -t / (2.0 - t)));
    Ok(GalleryEntry {
        name: "affine-halfline".into(),
        map,
        known_fixed_point: contains_limit.then(|| Point::from_element(1, -1.0)),
        known_path: contains_limit.then_some(path),
        sample_radius: 10.0,
        notes: "x = t(x - 1)/2 solves to x = -t/(2 - t); the t -> 1 limit -1 sits on the boundary of [-1, inf)",
    })
}

fn rakotch_decay(p: &ParamReader) -> Result<GalleryEntry, GalleryError> {
    let dim = p.scalar("dim")?;
    if !(dim.fract() == 0.0 && (1.0..=16.0).contains(&dim)) {
        return Err(range_error(
            p.map,
            format!("dim must be an integer in 1..=16, got {dim}"),
        ));
    }
    let dim = dim as usize;
    let domain = if dim == 1 {
        DomainSet::half_line(0.0)?
    } else {
        DomainSet::boxed(vec![0.0; dim], vec![f64::INFINITY; dim])?
    };
    let map = MappingInstance::new(
        "rakotch-decay",
        Space::max_norm(dim),
        domain,
        Modulus::rational_decay(),
        |x| x.map(|v| v / (1.0 + v)),
    )?;
    Ok(GalleryEntry {
        name: "rakotch-decay".into(),
        map,
        known_fixed_point: Some(Point::zeros(dim)),
        known_path: None,
        sample_radius: 10.0,
        notes: "(1 + x)(1 + y) >= 1 + |x - y| gives |Tx - Ty| <= |x - y|/(1 + |x - y|) per coordinate; \
                the origin is a boundary point, so the continuation tools do not apply",
    })
}

fn constant(p: &ParamReader) -> Result<GalleryEntry, GalleryError> {
    let c = Point::from_vec(p.vector("c"));
    let radius = p.scalar("radius")?;
    if c.is_empty() || c.iter().any(|v| !v.is_finite()) {
        return Err(range_error(p.map, "c must be a nonempty finite vector"));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(range_error(
            p.map,
            format!("radius must be positive, got {radius}"),
        ));
    }
    let dim = c.len();
    let value = c.clone();
    let map = MappingInstance::new(
        "constant",
        Space::euclidean(dim),
        DomainSet::ball(Point::zeros(dim), radius)?,
        Modulus::constant(0.0)?,
        move |_| value.clone(),
    )?;
    let inside = c.norm() < radius;
    let path_c = c.clone();
    let path: PathFn = Arc::new(move |t| &path_c * t);
    Ok(GalleryEntry {
        name: "constant".into(),
        map,
        known_fixed_point: inside.then(|| c.clone()),
        known_path: inside.then_some(path),
        sample_radius: radius,
        notes: "x_t = t c; when |c| > radius the path meets the boundary at t = radius/|c| where T x = (|c|/radius) x",
    })
}

fn planar_rotation(p: &ParamReader) -> Result<GalleryEntry, GalleryError> {
    let theta = p.scalar("theta")?;
    let b = p.vector("b");
    let radius = p.scalar("radius")?;
    if !(theta > 0.0 && theta < 2.0 * std::f64::consts::PI) {
        return Err(range_error(
            p.map,
            format!("theta must lie in (0, 2 pi), got {theta}"),
        ));
    }
    let [b0, b1] = b.as_slice() else {
        return Err(range_error(p.map, "b must have two coordinates"));
    };
    let (b0, b1) = (*b0, *b1);
    let limit_norm = (b0 * b0 + b1 * b1).sqrt() / (2.0 * (theta / 2.0).sin());
    if !(radius > limit_norm) || !radius.is_finite() {
        return Err(range_error(
            p.map,
            format!("radius must exceed |b|/(2 sin(theta/2)) = {limit_norm}, got {radius}"),
        ));
    }
    let (s, c) = theta.sin_cos();
    let map = MappingInstance::new(
        "planar-rotation",
        Space::euclidean(2),
        DomainSet::ball(Point::zeros(2), radius)?,
        Modulus::nonexpansive(),
        move |x| Point::from_vec(vec![c * x[0] - s * x[1] + b0, s * x[0] + c * x[1] + b1]),
    )?;
    // (I - tR) x = t b with I - tR = [[1 - tc, ts], [-ts, 1 - tc]]
    let solve = move |t: f64| {
        let (a, off) = (1.0 - t * c, t * s);
        let det = a * a + off * off;
        Point::from_vec(vec![
            (a * t * b0 - off * t * b1) / det,
            (off * t * b0 + a * t * b1) / det,
        ])
    };
    Ok(GalleryEntry {
        name: "planar-rotation".into(),
        map,
        known_fixed_point: Some(solve(1.0)),
        known_path: Some(Arc::new(solve)),
        sample_radius: radius,
        notes:
            "an isometry plus a shift; x_t solves the 2x2 system (I - tR) x = t b and stays inside \
                the disk because |x_t| increases to |b|/(2 sin(theta/2))",
    })
}

fn rational_damped(p: &ParamReader) -> Result<GalleryEntry, GalleryError> {
    let halfwidth = p.scalar("halfwidth")?;
    if !(halfwidth > 0.0 && halfwidth.is_finite()) {
        return Err(range_error(
            p.map,
            format!("halfwidth must be positive, got {halfwidth}"),
        ));
    }
    let map = MappingInstance::new(
        "rational-damped",
        Space::euclidean(1),
        DomainSet::interval(-halfwidth, halfwidth)?,
        Modulus::constant(0.5)?,
        |x| x.map(|v| v / (2.0 + v * v)),
    )?;
    Ok(GalleryEntry {
        name: "rational-damped".into(),
        map,
        known_fixed_point: Some(Point::zeros(1)),
        known_path: Some(Arc::new(|_| Point::zeros(1))),
        sample_radius: halfwidth,
        notes: "|T'(x)| = |2 - x^2|/(2 + x^2)^2 <= 1/2; x = t x/(2 + x^2) forces x = 0 for t <= 1",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{verify_contractive, DEFAULT_SLACK};

    fn params(pairs: &[(&str, &[f64])]) -> Params {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_vec()))
            .collect()
    }

    #[test]
    fn affine_halfline_entry() {
        let e = make_default("affine-halfline").unwrap();
        assert_eq!(e.known_fixed_point, Some(Point::from_element(1, -1.0)));
        let path = e.known_path.as_ref().unwrap();
        assert!((path(0.5)[0] + 1.0 / 3.0).abs() < 1e-15);
        assert!(e.check_invariants().is_empty());
        assert_eq!(e.map.modulus(), &Modulus::constant(0.5).unwrap());
    }

    #[test]
    fn affine_nonself_variant() {
        let e = make_map("affine-halfline", &params(&[("lower", &[0.0])])).unwrap();
        assert!(e.known_fixed_point.is_none());
        let whole = make_map(
            "affine-halfline",
            &params(&[("lower", &[f64::NEG_INFINITY])]),
        )
        .unwrap();
        assert!(whole.map.contains(&Point::from_element(1, -1e6)));
    }

    #[test]
    fn constant_entry_violates_ls() {
        let e = make_map("constant", &params(&[("c", &[2.0]), ("radius", &[1.0])])).unwrap();
        assert!(e.known_fixed_point.is_none());
        let tx = e.map.apply(&Point::from_element(1, 1.0)).unwrap();
        assert_eq!(tx[0], 2.0);
    }

    #[test]
    fn planar_rotation_entry() {
        let e = make_default("planar-rotation").unwrap();
        assert!(!e.map.modulus().is_rakotch());
        assert!(e.check_invariants().is_empty());
        assert!(make_map("planar-rotation", &params(&[("radius", &[1.0])])).is_err());
    }

    #[test]
    fn lookup_errors() {
        assert!(matches!(
            make_default("nope"),
            Err(GalleryError::UnknownMap(_))
        ));
        assert!(matches!(
            make_map("constant", &params(&[("k", &[1.0])])),
            Err(GalleryError::UnknownParam { .. })
        ));
        assert!(make_map("rakotch-decay", &params(&[("dim", &[1.5])])).is_err());
        assert!(make_map("constant", &params(&[("radius", &[-1.0])])).is_err());
    }

    #[test]
    fn every_default_entry_is_sound() {
        for spec in registry() {
            let e = make_default(spec.name).unwrap();
            assert!(e.check_invariants().is_empty(), "{}", spec.name);
            let pairs = e.sample_pairs(1000, 5);
            let r = verify_contractive(&e.map, &pairs, DEFAULT_SLACK).unwrap();
            assert!(
                r.pass(),
                "{} worst excess {:e}",
                spec.name,
                r.worst_excess()
            );
        }
    }
}
