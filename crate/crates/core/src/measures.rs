//! Chronological prototype time series and the geometric style-trajectory
//! indices: opposition W, skewness s and counter-dialectics d.
//!
//! States are per-painter centroids in whatever 2-D (or d-D) space the
//! caller chose. For a move i -> i+1 the opposition direction is the
//! reflection of state i through the running average of states 1..=i; the
//! first move has no history, so W = 1 and s = 0 by convention.

use crate::error::{Error, Result};

/// A painter's centroid in the active space.
#[derive(Debug, Clone, PartialEq)]
pub struct Prototype {
    pub painter_id: String,
    pub chronological_rank: u32,
    pub coords: Vec<f64>,
}

/// Prototypes ordered by chronological rank.
#[derive(Debug, Clone)]
pub struct TimeSeries {
    states: Vec<Prototype>,
}

impl TimeSeries {
    pub fn new(mut states: Vec<Prototype>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::InvalidParameter("empty time series".into()));
        }
        states.sort_by_key(|p| p.chronological_rank);
        for w in states.windows(2) {
            if w[0].chronological_rank == w[1].chronological_rank {
                return Err(Error::InvalidParameter(format!(
                    "duplicate chronological rank {}",
                    w[0].chronological_rank
                )));
            }
        }
        let dim = states[0].coords.len();
        if states.iter().any(|p| p.coords.len() != dim) {
            return Err(Error::InvalidParameter("mixed state dimensions".into()));
        }
        Ok(Self { states })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[Prototype] {
        &self.states
    }

    /// 1-based state access, matching the index convention of the measures.
    pub fn state(&self, i: usize) -> &Prototype {
        &self.states[i - 1]
    }
}

/// Per-painter centroids over rows of the active space.
///
/// `coords` holds one point per painting, `labels` the painter index of
/// each row, `painters` the (id, rank) of each painter index.
pub fn build_prototypes(
    coords: &[Vec<f64>],
    labels: &[usize],
    painters: &[(String, u32)],
) -> Result<TimeSeries> {
    if coords.len() != labels.len() {
        return Err(Error::InvalidParameter(
            "coords and labels disagree on length".into(),
        ));
    }
    if coords.is_empty() {
        return Err(Error::InvalidParameter("no paintings".into()));
    }
    let dim = coords[0].len();
    let mut sums = vec![vec![0.0; dim]; painters.len()];
    let mut counts = vec![0usize; painters.len()];
    for (point, &label) in coords.iter().zip(labels.iter()) {
        if label >= painters.len() {
            return Err(Error::InvalidParameter(format!(
                "painter index {label} out of range"
            )));
        }
        for (s, &v) in sums[label].iter_mut().zip(point.iter()) {
            *s += v;
        }
        counts[label] += 1;
    }
    let mut states = Vec::with_capacity(painters.len());
    for (idx, (id, rank)) in painters.iter().enumerate() {
        if counts[idx] == 0 {
            return Err(Error::InvalidParameter(format!(
                "painter {id:?} has no paintings"
            )));
        }
        let coords = sums[idx].iter().map(|&s| s / counts[idx] as f64).collect();
        states.push(Prototype {
            painter_id: id.clone(),
            chronological_rank: *rank,
            coords,
        });
    }
    TimeSeries::new(states)
}

/// Mean of the first `i` states (1-based `i`).
pub fn average_state(series: &TimeSeries, i: usize) -> Result<Vec<f64>> {
    if i == 0 || i > series.len() {
        return Err(Error::InvalidParameter(format!(
            "average state index {i} out of 1..={}",
            series.len()
        )));
    }
    let dim = series.state(1).coords.len();
    let mut acc = vec![0.0; dim];
    for j in 1..=i {
        for (a, &v) in acc.iter_mut().zip(series.state(j).coords.iter()) {
            *a += v;
        }
    }
    acc.iter_mut().for_each(|a| *a /= i as f64);
    Ok(acc)
}

/// Full set of quantities describing one consecutive move i -> i+1.
#[derive(Debug, Clone)]
pub struct MoveMeasures {
    pub from: String,
    pub to: String,
    /// Running average of states 1..=i.
    pub average: Vec<f64>,
    /// Opposite state r_i = p_i + 2 (a_i - p_i).
    pub opposite: Vec<f64>,
    /// Opposition vector D_i = r_i - p_i.
    pub opposition_vector: Vec<f64>,
    /// Displacement M = p_j - p_i.
    pub displacement: Vec<f64>,
    /// Opposition index W.
    pub opposition: f64,
    /// Skewness index s.
    pub skewness: f64,
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b.iter()).map(|(x, y)| x - y).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

/// Opposition and skewness of the consecutive move i -> i+1 (1-based).
///
/// For i = 1 the average state equals the state itself and the opposition
/// direction degenerates; the conventional values W = 1, s = 0 are returned.
pub fn move_measures(series: &TimeSeries, i: usize) -> Result<MoveMeasures> {
    if i == 0 || i + 1 > series.len() {
        return Err(Error::InvalidParameter(format!(
            "move index {i} out of 1..={}",
            series.len() - 1
        )));
    }
    let p_i = &series.state(i).coords;
    let p_j = &series.state(i + 1).coords;
    let average = average_state(series, i)?;
    let toward_avg = sub(&average, p_i); // a_i - p_i
    let opposite: Vec<f64> = p_i
        .iter()
        .zip(toward_avg.iter())
        .map(|(&p, &t)| p + 2.0 * t)
        .collect();
    let opposition_vector = sub(&opposite, p_i);
    let displacement = sub(p_j, p_i);

    let (opposition, skewness) = if i == 1 {
        (1.0, 0.0)
    } else {
        let dd = norm_sq(&opposition_vector);
        if dd == 0.0 {
            return Err(Error::Numerical(format!(
                "degenerate opposition direction at move {i}"
            )));
        }
        let w = dot(&displacement, &opposition_vector) / dd;
        // s: component of the displacement orthogonal to (a_i - p_i)
        let uu = norm_sq(&toward_avg);
        let md = norm_sq(&displacement);
        let proj = dot(&displacement, &toward_avg);
        let s = ((md * uu - proj * proj).max(0.0) / uu).sqrt();
        (w, s)
    };

    Ok(MoveMeasures {
        from: series.state(i).painter_id.clone(),
        to: series.state(i + 1).painter_id.clone(),
        average,
        opposite,
        opposition_vector,
        displacement,
        opposition,
        skewness,
    })
}

/// Counter-dialectics of the consecutive triple (i, i+1, i+2).
#[derive(Debug, Clone)]
pub struct TripleMeasures {
    pub first: String,
    pub second: String,
    pub third: String,
    /// Distance from the third state to the perpendicular bisector
    /// hyperplane of the two preceding states.
    pub counter_dialectics: f64,
}

pub fn counter_dialectics(series: &TimeSeries, i: usize) -> Result<TripleMeasures> {
    if i == 0 || i + 2 > series.len() {
        return Err(Error::InvalidParameter(format!(
            "triple index {i} out of 1..={}",
            series.len().saturating_sub(2)
        )));
    }
    let p_i = &series.state(i).coords;
    let p_j = &series.state(i + 1).coords;
    let p_k = &series.state(i + 2).coords;
    let diff = sub(p_j, p_i);
    let len = norm_sq(&diff).sqrt();
    if len == 0.0 {
        return Err(Error::Numerical(format!(
            "undefined bisector: states {i} and {} coincide",
            i + 1
        )));
    }
    let sum: Vec<f64> = p_i.iter().zip(p_j.iter()).map(|(a, b)| a + b).collect();
    let neg_diff: Vec<f64> = diff.iter().map(|v| -v).collect();
    let d = (dot(&diff, p_k) + 0.5 * dot(&neg_diff, &sum)).abs() / len;
    Ok(TripleMeasures {
        first: series.state(i).painter_id.clone(),
        second: series.state(i + 1).painter_id.clone(),
        third: series.state(i + 2).painter_id.clone(),
        counter_dialectics: d,
    })
}

/// All consecutive moves of the series.
pub fn all_moves(series: &TimeSeries) -> Result<Vec<MoveMeasures>> {
    (1..series.len()).map(|i| move_measures(series, i)).collect()
}

/// All consecutive triples of the series.
pub fn all_triples(series: &TimeSeries) -> Result<Vec<TripleMeasures>> {
    (1..series.len().saturating_sub(1))
        .map(|i| counter_dialectics(series, i))
        .collect()
}
