mod common;

use std::f64::consts::PI;

use cheegerlab::geometry::{Domain, Point};
use cheegerlab::oracle::{
    compare, min_cut_f, oracle_h1, oracle_i, rasterize, seeded_cuts, sweep_csv, GridProblem, StencilKind, QUANT,
};
use cheegerlab::profile::{IsoProfile, ProfileOptions};
use proptest::prelude::*;

#[test]
fn disk_perimeter_is_isotropic() {
    for (r_over_h, cx) in [(64.0, 0.0), (80.0, 0.3), (100.0, 0.17), (128.0, 0.5)] {
        let h = 1.0 / r_over_h;
        let d = Domain::disk(Point::new(cx * h, 0.37 * h), 1.0).unwrap();
        let g = rasterize(&d, h).unwrap();
        let per = g.perimeter_units(&g.mask) as f64 * h / QUANT;
        let e = (per - 2.0 * PI).abs() / (2.0 * PI);
        assert!(e < 0.015, "r/h {r_over_h}: relative error {e}");
    }
}

#[test]
fn selection_grows_with_kappa() {
    let g = rasterize(&common::l_shape(), 1.0 / 48.0).unwrap();
    for k in [1.5, 2.0, 2.6, 4.0, 9.0] {
        let a = min_cut_f(&g.clone().with_kappa(k)).unwrap();
        let b = min_cut_f(&g.clone().with_kappa(k + 1e-9)).unwrap();
        assert!(a.selected.iter().zip(&b.selected).all(|(x, y)| !x || *y), "kappa {k}");
    }
}

#[test]
fn sweep_volumes_are_monotone() {
    let kappas: Vec<f64> = (0..12).map(|k| 2.2 + 1.5 * k as f64).collect();
    for d in [common::square(), common::l_shape(), common::dumbbell()] {
        let pts = oracle_i(&d, 1.0 / 64.0, StencilKind::N16, &kappas).unwrap();
        for w in pts.windows(2) {
            assert!(w[1].volume >= w[0].volume);
        }
        let csv = sweep_csv(&pts, 1.0 / 64.0, StencilKind::N16);
        assert_eq!(csv.lines().count(), kappas.len() + 1);
        assert!(csv.starts_with("kappa,volume,perimeter,value,h,stencil\n"));
    }
}

#[test]
fn square_sweep_tracks_rolled_sets() {
    let d = common::square();
    let kappas = [2.2, 4.0, 8.0, 20.0];
    let pts = oracle_i(&d, 1.0 / 256.0, StencilKind::N16, &kappas).unwrap();
    for pt in pts {
        let (v, p) = d.rolled_measure(1.0 / pt.kappa).unwrap();
        assert!((pt.volume - v).abs() / v < 0.02, "kappa {}", pt.kappa);
        assert!((pt.perimeter - p).abs() / p < 0.02, "kappa {}", pt.kappa);
    }
}

#[test]
fn disk_and_rectangle_h1() {
    let h = 1.0 / 256.0;
    let (disk, _) = oracle_h1(&common::disk(), h, StencilKind::N16).unwrap();
    assert!((disk - 2.0).abs() / 2.0 < 0.02);
    let prof = IsoProfile::build(common::rectangle(), ProfileOptions::default()).unwrap();
    let (rect, _) = oracle_h1(&common::rectangle(), h, StencilKind::N16).unwrap();
    assert!(compare(prof.h1(), rect, h, StencilKind::N16).pass, "{rect} vs {}", prof.h1());
}

#[test]
fn disk_cut_at_kappa_one_and_a_half() {
    // below H(1) the free minimizer is empty; the inball constraint keeps the whole disk
    let g = rasterize(&common::disk(), 1.0 / 256.0).unwrap().with_kappa(1.5);
    assert_eq!(min_cut_f(&g).unwrap().volume, 0.0);
    let (grid, cuts) = seeded_cuts(&common::disk(), 1.0 / 256.0, StencilKind::N16, &[1.5]).unwrap();
    let exact = 2.0 * PI - 1.5 * PI;
    assert!((cuts[0].value - exact).abs() / exact < 0.02);
    assert_eq!(cuts[0].selected, grid.mask);
}

fn exhaustive(grid: &GridProblem) -> i64 {
    let pix: Vec<usize> = (0..grid.mask.len()).filter(|&k| grid.mask[k] && !grid.seeds[k]).collect();
    (0u32..1 << pix.len())
        .map(|bits| {
            let mut sel = grid.seeds.clone();
            for (b, &k) in pix.iter().enumerate() {
                sel[k] = bits >> b & 1 == 1;
            }
            grid.energy_units(&sel)
        })
        .min()
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cut_is_optimal(nx in 1usize..7, ny in 1usize..7, bits in any::<u64>(), kh in 0.0f64..4.0, st in 0usize..3) {
        let mask: Vec<bool> = (0..nx * ny).map(|k| bits >> (k % 64) & 1 == 1).collect();
        prop_assume!(mask.iter().filter(|m| **m).count() <= 12);
        let kind = [StencilKind::N4, StencilKind::N8, StencilKind::N16][st];
        let g = GridProblem::new(0.1, nx, ny, mask, kind, kh / 0.1).unwrap();
        let c = min_cut_f(&g).unwrap();
        prop_assert_eq!(c.energy_units, exhaustive(&g));
        prop_assert_eq!(c.energy_units, g.energy_units(&c.selected));
    }
}
