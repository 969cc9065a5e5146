//! Packings and coverings of Euclidean balls `B_d(R) ⊂ ℝ^d`.
//!
//! Volumetric estimates bracket the covering number of a ball,
//! `(R/ε)^d ≤ N(B_d(R), ε) ≤ (1 + 2R/ε)^d`, and a maximal `2ρ`-separated
//! subset of `B_d(R)` therefore has at least `(R/(2ρ))^d` points. Maximality
//! is approximated here by a consecutive-rejection budget.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::Rng;

use crate::error::{domain, Error, Result};
use crate::scalar::{from_usize, RandomScalar, Real};

pub const DEFAULT_REJECTION_BUDGET: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PackingSpec<T> {
    pub dim: usize,
    pub radius: T,
    pub separation: T,
    pub rejection_budget: usize,
}

impl<T: Real> PackingSpec<T> {
    pub fn new(dim: usize, radius: T, separation: T, rejection_budget: usize) -> Result<Self> {
        if dim == 0 {
            return Err(domain("dim", "a positive integer", 0));
        }
        if !(radius > T::zero()) || !radius.is_finite() {
            return Err(domain("radius", "finite and > 0", radius));
        }
        if !(separation > T::zero()) || !separation.is_finite() {
            return Err(domain("separation", "finite and > 0", separation));
        }
        if rejection_budget == 0 {
            return Err(domain("rejection_budget", "a positive integer", 0));
        }
        Ok(Self {
            dim,
            radius,
            separation,
            rejection_budget,
        })
    }
}

/// Points of a ball with a lower bound on pairwise distances.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet<T> {
    dim: usize,
    radius: T,
    separation: T,
    points: Vec<Vec<T>>,
    achieved_min_distance: T,
}

pub fn distance<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (x - y) * (x - y))
        .sum::<T>()
        .sqrt()
}

pub fn norm<T: Real>(a: &[T]) -> T {
    a.iter().map(|&x| x * x).sum::<T>().sqrt()
}

/// Exact minimum over all pairs; `+∞` for fewer than two points.
pub fn min_pairwise_distance<T: Real>(points: &[Vec<T>]) -> T {
    let mut best = T::infinity();
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.min(distance(a, b));
        }
    }
    best
}

impl<T: Real> PointSet<T> {
    /// Wrap `points`, checking every point lies in the ball and every pair is
    /// at least `separation` apart.
    pub fn from_points(dim: usize, radius: T, separation: T, points: Vec<Vec<T>>) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::LengthMismatch {
                    left: p.len(),
                    right: dim,
                });
            }
            if norm(p) > radius {
                return Err(Error::Precondition(format!(
                    "point {i} lies outside the ball"
                )));
            }
        }
        let achieved = min_pairwise_distance(&points);
        if achieved < separation {
            return Err(Error::Precondition(format!(
                "minimum pairwise distance {achieved} is below the separation {separation}"
            )));
        }
        Ok(Self {
            dim,
            radius,
            separation,
            points,
            achieved_min_distance: achieved,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    pub fn separation(&self) -> T {
        self.separation
    }

    pub fn points(&self) -> &[Vec<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn achieved_min_distance(&self) -> T {
        self.achieved_min_distance
    }

    pub fn into_points(self) -> Vec<Vec<T>> {
        self.points
    }

    /// Columnar text: a `# pointset` header, a column-name row, then one
    /// point per row with round-trip decimal coordinates.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write_body(&mut out);
        out
    }

    pub(crate) fn write_body(&self, out: &mut String) {
        let _ = writeln!(
            out,
            "# pointset dim={} radius={} separation={} count={}",
            self.dim,
            self.radius,
            self.separation,
            self.points.len()
        );
        let names: Vec<String> = (0..self.dim).map(|i| format!("x{i}")).collect();
        let _ = writeln!(out, "{}", names.join(","));
        for p in &self.points {
            let cells: Vec<String> = p.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let doc = TextDocument::parse(text)?;
        Self::from_document(&doc)
    }

    pub(crate) fn from_document(doc: &TextDocument<T>) -> Result<Self> {
        let h = doc.header("pointset")?;
        let dim: usize = h.field("dim")?;
        let radius: T = h.field("radius")?;
        let separation: T = h.field("separation")?;
        let count: usize = h.field("count")?;
        if doc.rows.len() != count {
            return Err(Error::Parse {
                line: h.line,
                message: format!("header declares {count} points, found {}", doc.rows.len()),
            });
        }
        Self::from_points(dim, radius, separation, doc.rows.clone())
    }
}

/// A header comment of the form `# tag key=value ...`.
#[derive(Debug, Clone)]
pub(crate) struct HeaderLine {
    pub line: usize,
    pub fields: BTreeMap<String, String>,
}

impl HeaderLine {
    pub fn field<V: std::str::FromStr>(&self, key: &str) -> Result<V> {
        let raw = self.fields.get(key).ok_or_else(|| Error::Parse {
            line: self.line,
            message: format!("missing field `{key}`"),
        })?;
        raw.parse().map_err(|_| Error::Parse {
            line: self.line,
            message: format!("field `{key}` has invalid value `{raw}`"),
        })
    }
}

#[derive(Debug, Clone)]
pub(crate) struct TextDocument<T> {
    pub headers: BTreeMap<String, HeaderLine>,
    pub rows: Vec<Vec<T>>,
}

impl<T: Real> TextDocument<T> {
    pub fn parse(text: &str) -> Result<Self> {
        let mut headers = BTreeMap::new();
        let mut rows = Vec::new();
        let mut seen_columns = false;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(rest) = trimmed.strip_prefix('#') {
                let mut parts = rest.split_whitespace();
                let Some(tag) = parts.next() else { continue };
                let mut fields = BTreeMap::new();
                for kv in parts {
                    let (k, v) = kv.split_once('=').ok_or_else(|| Error::Parse {
                        line,
                        message: format!("expected key=value, got `{kv}`"),
                    })?;
                    fields.insert(k.to_string(), v.to_string());
                }
                headers.insert(tag.to_string(), HeaderLine { line, fields });
                continue;
            }
            if !seen_columns {
                seen_columns = true;
                continue;
            }
            let row = trimmed
                .split(',')
                .map(|c| {
                    c.trim().parse::<T>().map_err(|_| Error::Parse {
                        line,
                        message: format!("invalid number `{c}`"),
                    })
                })
                .collect::<Result<Vec<T>>>()?;
            rows.push(row);
        }
        Ok(Self { headers, rows })
    }

    pub fn header(&self, tag: &str) -> Result<&HeaderLine> {
        self.headers.get(tag).ok_or_else(|| Error::Parse {
            line: 0,
            message: format!("missing `# {tag}` header"),
        })
    }
}

/// `d·ln(R/(2ρ))`, the log of the guaranteed packing size.
pub fn packing_lower_bound_log<T: Real>(dim: usize, radius: T, rho: T) -> T {
    from_usize::<T>(dim) * (radius / (rho + rho)).ln()
}

/// `d·ln(1 + 2R/ε)`, the log of the volumetric covering bound.
pub fn covering_upper_bound_log<T: Real>(dim: usize, radius: T, eps: T) -> T {
    from_usize::<T>(dim) * ((radius + radius) / eps).ln_1p()
}

/// Uniform point of `B_d(R)`: Gaussian direction, radius `R·u^{1/d}`.
pub fn sample_uniform_ball<T: RandomScalar, R: Rng + ?Sized>(
    dim: usize,
    radius: T,
    rng: &mut R,
) -> Vec<T> {
    loop {
        let g: Vec<T> = (0..dim).map(|_| T::standard_normal(rng)).collect();
        let len = norm(&g);
        if len > T::zero() {
            let r = radius * T::open_closed01(rng).powf(from_usize::<T>(dim).recip());
            return g.into_iter().map(|x| x / len * r).collect();
        }
    }
}

/// Random sequential packing: accept a uniform ball point when it is at
/// least `separation` from every accepted point; stop after
/// `rejection_budget` consecutive rejections.
pub fn greedy_packing<T: RandomScalar, R: Rng + ?Sized>(
    spec: &PackingSpec<T>,
    rng: &mut R,
) -> PointSet<T> {
    let mut points: Vec<Vec<T>> = Vec::new();
    let mut rejections = 0;
    while rejections < spec.rejection_budget {
        let candidate = sample_uniform_ball(spec.dim, spec.radius, rng);
        if norm(&candidate) > spec.radius {
            rejections += 1;
            continue;
        }
        if points
            .iter()
            .all(|p| distance(p, &candidate) >= spec.separation)
        {
            points.push(candidate);
            rejections = 0;
        } else {
            rejections += 1;
        }
    }
    let achieved = min_pairwise_distance(&points);
    PointSet {
        dim: spec.dim,
        radius: spec.radius,
        separation: spec.separation,
        points,
        achieved_min_distance: achieved,
    }
}

/// Deterministic fallback: the cubic lattice of spacing `separation`
/// intersected with the ball. Its size is exponential in `dim`; meant for
/// small instances. The recorded separation is the achieved one, which can
/// sit an ulp below the spacing.
pub fn grid_packing<T: Real>(spec: &PackingSpec<T>) -> PointSet<T> {
    let steps = (spec.radius / spec.separation)
        .floor()
        .to_i64()
        .unwrap_or(0);
    let r2 = spec.radius * spec.radius;
    let mut points = Vec::new();
    let mut current = vec![T::zero(); spec.dim];
    fn recurse<T: Real>(
        axis: usize,
        partial: T,
        steps: i64,
        spacing: T,
        r2: T,
        current: &mut Vec<T>,
        out: &mut Vec<Vec<T>>,
    ) {
        if axis == current.len() {
            out.push(current.clone());
            return;
        }
        for z in -steps..=steps {
            let c = spacing * T::from_i64(z).expect("lattice index");
            let p = partial + c * c;
            if p <= r2 {
                current[axis] = c;
                recurse(axis + 1, p, steps, spacing, r2, current, out);
            }
        }
    }
    recurse(
        0,
        T::zero(),
        steps,
        spec.separation,
        r2,
        &mut current,
        &mut points,
    );
    let achieved = min_pairwise_distance(&points);
    PointSet {
        dim: spec.dim,
        radius: spec.radius,
        separation: spec.separation.min(achieved),
        points,
        achieved_min_distance: achieved,
    }
}

/// Indices of a greedy `separation`-packing of a fixed sample, in order.
pub fn greedy_subset_packing<T: Real>(samples: &[Vec<T>], separation: T) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for (i, s) in samples.iter().enumerate() {
        if chosen
            .iter()
            .all(|&j| distance(&samples[j], s) >= separation)
        {
            chosen.push(i);
        }
    }
    chosen
}

/// Indices of greedy `eps`-ball centres covering every sample: a sample
/// becomes a centre when no existing centre is within `eps`.
pub fn greedy_cover<T: Real>(samples: &[Vec<T>], eps: T) -> Vec<usize> {
    let mut centres: Vec<usize> = Vec::new();
    for (i, s) in samples.iter().enumerate() {
        if !centres.iter().any(|&j| distance(&samples[j], s) <= eps) {
            centres.push(i);
        }
    }
    centres
}
