//! Parameter sweep: filter an image with every combination of a Retinex
//! parameter grid, compute the entropy curve of each output and rank the
//! variants by entropy, with the unfiltered image as a reference.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::entropy::{
    entropy_curve, kappa_grid, EntropyCurve, DEFAULT_CURVE_STEPS, KAPPA_SMALL_MAX,
};
use crate::error::{Error, Result};
use crate::histogram::{image_distribution, ProbDist};
use crate::image::ImageRgb8;
use crate::par;
use crate::retinex::{
    msrcr, RetinexLevel, RetinexParams, DEFAULT_DYNAMIC, DEFAULT_SCALE, DEFAULT_SCALE_DIVISION,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub levels: Vec<RetinexLevel>,
    pub scales: Vec<u32>,
    pub scale_divisions: Vec<u32>,
    pub dynamics: Vec<f64>,
    pub kappa_max: f64,
    pub kappa_steps: usize,
}

impl Default for GridSpec {
    /// The three levels at the plug-in's default scale, division and slider.
    fn default() -> Self {
        Self {
            levels: RetinexLevel::ALL.to_vec(),
            scales: vec![DEFAULT_SCALE],
            scale_divisions: vec![DEFAULT_SCALE_DIVISION],
            dynamics: vec![DEFAULT_DYNAMIC],
            kappa_max: KAPPA_SMALL_MAX,
            kappa_steps: DEFAULT_CURVE_STEPS,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, empty) in [
            ("levels", self.levels.is_empty()),
            ("scales", self.scales.is_empty()),
            ("scale divisions", self.scale_divisions.is_empty()),
            ("dynamics", self.dynamics.is_empty()),
        ] {
            if empty {
                return Err(Error::InvalidInput(format!("grid has no {name}")));
            }
        }
        for &scale in &self.scales {
            for &n in &self.scale_divisions {
                for &d in &self.dynamics {
                    RetinexParams::new(RetinexLevel::Uniform, scale, n, d)?;
                }
            }
        }
        kappa_grid(self.kappa_max, self.kappa_steps).map(|_| ())
    }

    /// Number of parameter combinations.
    pub fn len(&self) -> usize {
        self.levels.len() * self.scales.len() * self.scale_divisions.len() * self.dynamics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Cartesian product of the grid lists, levels varying slowest and dynamics
/// fastest, each list in the order given.
pub fn enumerate_grid(g: &GridSpec) -> Result<Vec<RetinexParams>> {
    g.validate()?;
    let mut out = Vec::with_capacity(g.len());
    for &level in &g.levels {
        for &scale in &g.scales {
            for &n in &g.scale_divisions {
                for &dynamic in &g.dynamics {
                    out.push(RetinexParams::new(level, scale, n, dynamic)?);
                }
            }
        }
    }
    Ok(out)
}

/// Entropy curve of one image; `params` is `None` for the unfiltered original.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub params: Option<RetinexParams>,
    pub curve: EntropyCurve,
    pub shannon: f64,
}

impl SweepRecord {
    pub fn for_image(
        image: &ImageRgb8,
        params: Option<RetinexParams>,
        g: &GridSpec,
    ) -> Result<Self> {
        let mut record = Self::for_dist(&image_distribution(image)?, g)?;
        record.params = params;
        Ok(record)
    }

    /// Record of a bare distribution, without parameters.
    pub fn for_dist(p: &ProbDist, g: &GridSpec) -> Result<Self> {
        let curve = entropy_curve(p, g.kappa_max, g.kappa_steps)?;
        Ok(Self {
            params: None,
            shannon: curve.shannon(),
            curve,
        })
    }

    /// `original` or the parameter id, e.g. `low_s240_n3_d1.2`.
    pub fn id(&self) -> String {
        self.params
            .map(|p| p.id())
            .unwrap_or_else(|| "original".to_string())
    }
}

pub fn evaluate(image: &ImageRgb8, params: &RetinexParams, g: &GridSpec) -> Result<SweepRecord> {
    evaluate_with_output(image, params, g).map(|(record, _)| record)
}

/// Like [`evaluate`], also returning the filtered image.
pub fn evaluate_with_output(
    image: &ImageRgb8,
    params: &RetinexParams,
    g: &GridSpec,
) -> Result<(SweepRecord, ImageRgb8)> {
    let filtered = msrcr(image, params)?;
    let record = SweepRecord::for_image(&filtered, Some(*params), g)?;
    Ok((record, filtered))
}

/// A κ interval over which two record curves swap order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    /// Record indices, `first < second`.
    pub first: usize,
    pub second: usize,
    pub kappa_lo: f64,
    pub kappa_hi: f64,
    /// Linear estimate of the intersection inside the interval.
    pub kappa: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub grid: Option<GridSpec>,
    pub original: SweepRecord,
    pub records: Vec<SweepRecord>,
    /// Record indices, best first.
    pub ranking: Vec<usize>,
    pub crossings: Vec<Crossing>,
    /// Indices of records whose Shannon entropy is below the original's.
    pub below_original: Vec<usize>,
}

impl SweepReport {
    pub fn winner(&self) -> &SweepRecord {
        &self.records[self.ranking[0]]
    }

    pub fn is_below_original(&self, index: usize) -> bool {
        self.below_original.contains(&index)
    }
}

fn compare_records(records: &[SweepRecord], a: usize, b: usize) -> Ordering {
    let (ra, rb) = (&records[a], &records[b]);
    rb.shannon
        .total_cmp(&ra.shannon)
        .then_with(|| rb.curve.mean().total_cmp(&ra.curve.mean()))
        .then_with(|| a.cmp(&b))
}

/// Ranks records by descending Shannon entropy (ties: higher mean curve
/// value, then enumeration order), detects curve crossings and flags records
/// that lost entropy relative to the original.
pub fn rank(original: SweepRecord, records: Vec<SweepRecord>) -> Result<SweepReport> {
    if records.is_empty() {
        return Err(Error::InvalidInput("nothing to rank".into()));
    }
    let mut ranking: Vec<usize> = (0..records.len()).collect();
    ranking.sort_by(|&a, &b| compare_records(&records, a, b));

    let below_original = records
        .iter()
        .enumerate()
        .filter(|(_, r)| r.shannon < original.shannon)
        .map(|(i, _)| i)
        .collect();

    let mut crossings = Vec::new();
    for a in 0..records.len() {
        for b in a + 1..records.len() {
            crossings.extend(curve_crossings(a, &records[a].curve, b, &records[b].curve));
        }
    }

    Ok(SweepReport {
        grid: None,
        original,
        records,
        ranking,
        crossings,
        below_original,
    })
}

/// Intervals where the sign of `a − b` flips. Grid points where the curves
/// touch exactly are skipped, so a flip across a touch point is reported over
/// the whole span between the surrounding strict orderings.
fn curve_crossings(ia: usize, a: &EntropyCurve, ib: usize, b: &EntropyCurve) -> Vec<Crossing> {
    let kappas = a.kappas();
    let diffs: Vec<f64> = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| x - y)
        .collect();
    let mut out = Vec::new();
    let mut last: Option<usize> = None;
    for (i, &d) in diffs.iter().enumerate() {
        if d == 0.0 {
            continue;
        }
        if let Some(l) = last {
            if diffs[l].signum() != d.signum() {
                let (k0, k1) = (kappas[l], kappas[i]);
                let t = diffs[l] / (diffs[l] - d);
                out.push(Crossing {
                    first: ia,
                    second: ib,
                    kappa_lo: k0,
                    kappa_hi: k1,
                    kappa: k0 + t * (k1 - k0),
                });
            }
        }
        last = Some(i);
    }
    out
}

/// Filters `image` with every grid combination and ranks the outputs.
pub fn run_sweep(image: &ImageRgb8, g: &GridSpec) -> Result<SweepReport> {
    run_sweep_with_outputs(image, g).map(|(report, _)| report)
}

/// Like [`run_sweep`], also returning the filtered images in record order.
pub fn run_sweep_with_outputs(
    image: &ImageRgb8,
    g: &GridSpec,
) -> Result<(SweepReport, Vec<ImageRgb8>)> {
    let params = enumerate_grid(g)?;
    let original = SweepRecord::for_image(image, None, g)?;
    let evaluated = par::map(&params, |p| evaluate_with_output(image, p, g))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let (records, outputs): (Vec<_>, Vec<_>) = evaluated.into_iter().unzip();
    let mut report = rank(original, records)?;
    report.grid = Some(g.clone());
    Ok((report, outputs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(values: &[f64]) -> SweepRecord {
        let steps = values.len();
        let kappas = kappa_grid(0.1, steps).unwrap();
        let curve: EntropyCurve = serde_json::from_value(serde_json::json!({
            "kappas": kappas,
            "values": values,
        }))
        .unwrap();
        SweepRecord {
            params: None,
            shannon: values[0],
            curve,
        }
    }

    fn grid(levels: &[RetinexLevel], scales: &[u32], divs: &[u32], dynamics: &[f64]) -> GridSpec {
        GridSpec {
            levels: levels.to_vec(),
            scales: scales.to_vec(),
            scale_divisions: divs.to_vec(),
            dynamics: dynamics.to_vec(),
            ..GridSpec::default()
        }
    }

    #[test]
    fn enumerate_examples() {
        use RetinexLevel::*;
        let levels = enumerate_grid(&GridSpec::default()).unwrap();
        assert_eq!(levels.len(), 3);
        assert_eq!(
            levels.iter().map(|p| p.level).collect::<Vec<_>>(),
            vec![Uniform, Low, High]
        );

        let sliders = enumerate_grid(&grid(&[Low], &[240], &[3], &[0.6, 1.2, 2.4, 4.8])).unwrap();
        assert_eq!(sliders.len(), 4);
        assert_eq!(sliders[3].dynamic, 4.8);

        let small = enumerate_grid(&grid(&[Uniform, Low, High], &[16], &[3], &[1.2])).unwrap();
        assert!(small.iter().all(|p| p.scale == 16));

        let order = enumerate_grid(&grid(&[High, Low], &[16, 240], &[1, 3], &[1.2])).unwrap();
        let ids: Vec<String> = order.iter().map(|p| p.id()).collect();
        assert_eq!(
            ids,
            [
                "high_s16_n1_d1.2",
                "high_s16_n3_d1.2",
                "high_s240_n1_d1.2",
                "high_s240_n3_d1.2",
                "low_s16_n1_d1.2",
                "low_s16_n3_d1.2",
                "low_s240_n1_d1.2",
                "low_s240_n3_d1.2",
            ]
        );
    }

    #[test]
    fn enumerate_rejects_empty_and_invalid() {
        use RetinexLevel::*;
        assert!(matches!(
            enumerate_grid(&grid(&[], &[240], &[3], &[1.2])),
            Err(Error::InvalidInput(_))
        ));
        assert!(enumerate_grid(&grid(&[Low], &[], &[3], &[1.2])).is_err());
        assert!(enumerate_grid(&grid(&[Low], &[2], &[3], &[1.2])).is_err());
        assert!(enumerate_grid(&grid(&[Low], &[240], &[3], &[-1.0])).is_err());
        let g = GridSpec {
            kappa_steps: 1,
            ..GridSpec::default()
        };
        assert!(enumerate_grid(&g).is_err());
    }

    #[test]
    fn rank_examples() {
        let r = rank(record(&[4.0, 4.1]), vec![record(&[5.0, 5.1])]).unwrap();
        assert_eq!(r.ranking, vec![0]);

        let r = rank(
            record(&[5.0, 5.0]),
            vec![
                record(&[5.1, 5.2]),
                record(&[5.5, 5.6]),
                record(&[4.9, 5.0]),
            ],
        )
        .unwrap();
        assert_eq!(r.ranking, vec![1, 0, 2]);
        assert_eq!(r.below_original, vec![2]);
        assert!(r.crossings.is_empty());

        let r = rank(
            record(&[1.0, 1.0]),
            vec![record(&[3.0, 3.5]), record(&[3.0, 3.5])],
        )
        .unwrap();
        assert_eq!(r.ranking, vec![0, 1]);

        // same Shannon, higher curve mean wins
        let r = rank(
            record(&[1.0, 1.0]),
            vec![record(&[3.0, 3.1]), record(&[3.0, 3.4])],
        )
        .unwrap();
        assert_eq!(r.ranking, vec![1, 0]);

        assert!(rank(record(&[1.0, 1.0]), vec![]).is_err());
    }

    #[test]
    fn crossings_detected() {
        let r = rank(
            record(&[0.0, 0.0, 0.0]),
            vec![record(&[2.0, 2.5, 3.0]), record(&[2.2, 2.4, 2.6])],
        )
        .unwrap();
        assert_eq!(r.crossings.len(), 1);
        let c = &r.crossings[0];
        assert_eq!((c.first, c.second), (0, 1));
        assert_eq!((c.kappa_lo, c.kappa_hi), (0.0, 0.05));
        // a − b: −0.2 → +0.1, zero two thirds of the way
        assert!((c.kappa - 0.05 * 2.0 / 3.0).abs() < 1e-12);

        // touching without swapping is not a crossing
        let r = rank(
            record(&[0.0, 0.0, 0.0]),
            vec![record(&[2.0, 2.4, 3.0]), record(&[2.2, 2.4, 3.1])],
        )
        .unwrap();
        assert!(r.crossings.is_empty());
    }

    #[test]
    fn constant_image_gives_zero_curve() {
        let img = ImageRgb8::filled(10, 8, [40, 80, 120]).unwrap();
        let rec = evaluate(&img, &RetinexParams::default(), &GridSpec::default()).unwrap();
        assert!(rec.curve.values().iter().all(|&v| v == 0.0));
        assert_eq!(rec.shannon, 0.0);
    }

    #[test]
    fn single_point_grid() {
        let img = crate::fixture::foggy(32, 24, 3);
        let g = grid(&[RetinexLevel::Low], &[16], &[2], &[1.2]);
        let r = run_sweep(&img, &g).unwrap();
        assert_eq!(r.records.len(), 1);
        assert_eq!(r.ranking, vec![0]);
        assert_eq!(r.grid.as_ref(), Some(&g));
    }
}
