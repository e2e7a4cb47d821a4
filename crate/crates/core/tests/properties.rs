use proptest::prelude::*;
use stochastid_core::embedding::{build_data_matrix, estimate_tau, DataMatrix, EmbeddingParams};
use stochastid_core::ingest::{parse_lightcurve, resample};
use stochastid_core::pca_leg::{
    build_ratio_curve, eigen_ratio, features, train_linear, LeafInterval, RatioCurve, SvmConfig,
};
use stochastid_core::svd_leg::{rasterize_points, top2_right_singular};
use stochastid_core::{combine_labels, Label, Source, TimeSeries};

fn samples(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-100.0..100.0f64, len)
}

/// AR(1) series so the lag search has some structure to find.
fn ar1(noise: &[f64], phi: f64) -> Vec<f64> {
    let mut x = 0.0;
    noise
        .iter()
        .map(|e| {
            x = phi * x + e;
            x
        })
        .collect()
}

fn scale() -> impl Strategy<Value = f64> {
    prop_oneof![0.001..1000.0f64, -1000.0..-0.001f64]
}

proptest! {
    #[test]
    fn eigen_ratio_ignores_affine_maps(z in samples(4..400), a in scale(), b in -1e3..1e3f64) {
        let r = eigen_ratio(&z).unwrap();
        let moved: Vec<f64> = z.iter().map(|v| a * v + b).collect();
        let r2 = eigen_ratio(&moved).unwrap();
        prop_assert!(r >= 1.0);
        prop_assert!((r - r2).abs() <= 1e-9 * r, "{} vs {}", r, r2);
    }

    #[test]
    fn tau_ignores_affine_maps(noise in samples(256..1024), phi in 0.0..0.95f64, a in scale(), b in -1e3..1e3f64) {
        let z = ar1(&noise, phi);
        let moved: Vec<f64> = z.iter().map(|v| a * v + b).collect();
        let tau = estimate_tau(&z).unwrap();
        prop_assert!(tau >= 1);
        prop_assert_eq!(tau, estimate_tau(&moved).unwrap());
    }

    #[test]
    fn leaves_partition_the_even_prefix(z in samples(8..3000), th in 1.5..30.0f64, min_len in 4usize..150) {
        let curve = build_ratio_curve(&z, th, min_len).unwrap();
        prop_assert_eq!(curve.covered, z.len() - z.len() % 2);
        prop_assert_eq!(curve.leaves[0].start, 0);
        prop_assert_eq!(curve.leaves.last().unwrap().end, curve.covered);
        for w in curve.leaves.windows(2) {
            prop_assert_eq!(w[0].end, w[1].start);
        }
        for leaf in &curve.leaves {
            prop_assert!(leaf.ratio >= 1.0);
            prop_assert!(curve.leaves.len() == 1 || leaf.len() >= min_len);
        }
        prop_assert!(curve.check().is_ok());
        let fv = features(&curve).unwrap();
        prop_assert!(fv.ver >= 0.0 && fv.auer >= 1.0 - 1e-12);
    }

    #[test]
    fn auer_unchanged_by_refining_a_leaf(
        ratios in prop::collection::vec(1.0..1e4f64, 1..12),
        pick in any::<prop::sample::Index>(),
        cut in 1usize..99,
    ) {
        let leaves: Vec<LeafInterval> = ratios
            .iter()
            .enumerate()
            .map(|(i, r)| LeafInterval { start: i * 100, end: (i + 1) * 100, ratio: *r })
            .collect();
        let covered = leaves.len() * 100;
        let coarse = RatioCurve { leaves: leaves.clone(), threshold: 9.0, covered };
        let i = pick.index(leaves.len());
        let mut fine = leaves.clone();
        let leaf = fine.remove(i);
        let mid = leaf.start + cut;
        fine.insert(i, LeafInterval { start: mid, end: leaf.end, ratio: leaf.ratio });
        fine.insert(i, LeafInterval { start: leaf.start, end: mid, ratio: leaf.ratio });
        let refined = RatioCurve { leaves: fine, threshold: 9.0, covered };
        let (a, b) = (features(&coarse).unwrap().auer, features(&refined).unwrap().auer);
        prop_assert!((a - b).abs() <= 1e-12 * a, "{} vs {}", a, b);
    }

    #[test]
    fn data_matrix_only_copies_series_entries(
        z in samples(10..600),
        m in 1usize..8,
        tau in 1usize..20,
        k in 1usize..200,
    ) {
        let params = EmbeddingParams { m, tau, k };
        let series = TimeSeries::new(z.clone(), 1.0, "p", Source::File("p".into())).unwrap();
        match build_data_matrix(&series, params) {
            Ok(d) => {
                prop_assert!(params.span() <= z.len());
                prop_assert_eq!(d.row(0), &z[..k]);
                for r in 0..m {
                    for c in 0..k {
                        prop_assert_eq!(d.get(r, c), z[c + r * tau]);
                    }
                }
            }
            Err(_) => prop_assert!(params.span() > z.len()),
        }
    }

    #[test]
    fn singular_pair_is_orthonormal(m in 2usize..8, k in 8usize..200, seed in any::<u64>()) {
        let mut state = seed | 1;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let rows: Vec<Vec<f64>> = (0..m).map(|_| (0..k).map(|_| next()).collect()).collect();
        let refs: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
        let pair = top2_right_singular(&DataMatrix::from_rows(&refs).unwrap()).unwrap();
        prop_assert!(pair.check(1e-9).is_ok());
        prop_assert_eq!(pair.e1.len(), k);
    }

    #[test]
    fn raster_ignores_positive_affine_maps(
        pts in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 2..300),
        ax in 0.01..100.0f64, bx in -50.0..50.0f64,
        ay in 0.01..100.0f64, by in -50.0..50.0f64,
        dilation in 0usize..3,
    ) {
        let (xs, ys): (Vec<f64>, Vec<f64>) = pts.iter().copied().unzip();
        prop_assume!(xs.iter().any(|x| *x != xs[0]) && ys.iter().any(|y| *y != ys[0]));
        let xs2: Vec<f64> = xs.iter().map(|x| ax * x + bx).collect();
        let ys2: Vec<f64> = ys.iter().map(|y| ay * y + by).collect();
        let a = rasterize_points(&xs, &ys, 64, dilation).unwrap();
        let b = rasterize_points(&xs2, &ys2, 64, dilation).unwrap();
        let differing = a.bits().iter().zip(b.bits()).filter(|(p, q)| p != q).count();
        // a point sitting exactly on a bin edge may round either way
        prop_assert!(differing <= (2 * dilation + 1).pow(2), "{} pixels differ", differing);
    }

    #[test]
    fn pegasos_separates_well_separated_sets(
        angle in 0.0..std::f64::consts::TAU,
        offset in -2.0..2.0f64,
        raw in prop::collection::vec((-5.0..5.0f64, -5.0..5.0f64), 4..40),
    ) {
        let w = [angle.cos(), angle.sin()];
        let side = |p: &(f64, f64)| w[0] * p.0 + w[1] * p.1 + offset;
        let pts: Vec<[f64; 2]> = raw.iter().filter(|p| side(p).abs() >= 1.0).map(|p| [p.0, p.1]).collect();
        let labels: Vec<Label> = pts
            .iter()
            .map(|p| if side(&(p[0], p[1])) > 0.0 { Label::NonStochastic } else { Label::Stochastic })
            .collect();
        prop_assume!(labels.contains(&Label::Stochastic) && labels.contains(&Label::NonStochastic));
        let model = train_linear(&pts, &labels, &SvmConfig::default()).unwrap();
        for (p, l) in pts.iter().zip(&labels) {
            prop_assert_eq!(model.classify(p).0, *l);
        }
    }

    #[test]
    fn resampling_keeps_monotone_curves_monotone(
        steps in prop::collection::vec((0.05..0.5f64, 0.0..10.0f64), 3..200),
        dt in 0.1..0.4f64,
    ) {
        let (mut t, mut r) = (100.0, 1.0);
        let mut text = String::from("# time rate\n");
        for (dt_raw, dr) in &steps {
            text.push_str(&format!("{t} {r}\n"));
            t += dt_raw;
            r += dr;
        }
        let lc = parse_lightcurve(&text, "p.txt").unwrap();
        let (t0, t1) = (lc.rows[0].0, lc.rows.last().unwrap().0);
        prop_assume!(t1 - t0 >= dt);
        let z = resample(&lc, dt).unwrap();
        prop_assert_eq!(z.len(), ((t1 - t0) / dt + 1e-9).floor() as usize + 1);
        prop_assert!(z.samples().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn uniform_grid_resamples_to_itself(rates in prop::collection::vec(0.0..1e4f64, 2..500)) {
        let text: String = rates.iter().enumerate().map(|(i, r)| format!("{},{r}\n", 5.0 + i as f64 * 0.1)).collect();
        let z = resample(&parse_lightcurve(&text, "g.csv").unwrap(), 0.1).unwrap();
        prop_assert_eq!(z.samples(), rates.as_slice());
    }
}

#[test]
fn combiner_is_symmetric_and_idempotent() {
    let legs = [Label::Stochastic, Label::NonStochastic];
    for a in legs {
        assert_eq!(combine_labels(a, a).unwrap(), a);
        for b in legs {
            assert_eq!(combine_labels(a, b), combine_labels(b, a));
        }
    }
    assert_eq!(combine_labels(legs[0], legs[1]).unwrap(), Label::Uncertain);
    assert!(combine_labels(Label::Uncertain, Label::Stochastic).is_err());
}
