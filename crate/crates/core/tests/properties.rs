use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

use stbem::grid::{BoundaryDensity, BoundaryGrid, SigmaFunction, Space};
use stbem::hilbert::{ht_apply, ht_inverse, TimeReversal};
use stbem::operators::{assemble, HilbertBase, Operator, OperatorExpr, TestWeight, assemble_ht_weighted};
use stbem::poly::{PiecewisePoly, Poly};
use stbem::spectral::{analyze_piecewise, BasisKind, QuarterWaveSeries, TimeInterval};

fn grid(t: f64, m: usize) -> BoundaryGrid {
    BoundaryGrid::new(TimeInterval::new(t, 4 * m).unwrap(), m).unwrap()
}

fn piecewise(coeffs: &[(f64, f64, f64)], end: f64) -> PiecewisePoly {
    let n = coeffs.len();
    let breaks: Vec<f64> = (0..=n).map(|i| end * i as f64 / n as f64).collect();
    PiecewisePoly::new(breaks, coeffs.iter().map(|&(a, b, c)| Poly::new(vec![a, b, c])).collect())
}

fn coeff_triples() -> impl Strategy<Value = Vec<(f64, f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64), 1..6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ht_round_trips(coeffs in prop::collection::vec(-10.0..10.0f64, 1..64), t in 0.1..5.0f64) {
        let interval = TimeInterval::new(t, coeffs.len()).unwrap();
        let s = QuarterWaveSeries::new(interval, BasisKind::Sine, coeffs).unwrap();
        prop_assert_eq!(ht_inverse(&ht_apply(&s).unwrap()).unwrap(), s.clone());
        prop_assert!((ht_apply(&s).unwrap().l2_norm() - s.l2_norm()).abs() <= 1e-12 * (1.0 + s.l2_norm()));
    }

    #[test]
    fn operators_are_linear(a in coeff_triples(), b in coeff_triples(), x in -2.0..2.0f64) {
        let end = 2.7;
        let f = SigmaFunction::new([piecewise(&a, end), piecewise(&b, end)]);
        let g = SigmaFunction::new([piecewise(&b, end), PiecewisePoly::zero()]);
        for op in [Operator::SingleLayer, Operator::DoubleLayer, Operator::Hypersingular] {
            let lhs = op.apply(&f.add_scaled(&g, x), end);
            let rhs = op.apply(&f, end).add_scaled(&op.apply(&g, end), x);
            for p in 0..2 {
                for i in 0..17 {
                    let t = end * (i as f64 + 0.31) / 17.0;
                    prop_assert!((lhs.eval(p, t) - rhs.eval(p, t)).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn single_layer_is_causal(a in coeff_triples(), start in 0.2..1.5f64) {
        // density supported after `start` gives no response before `start`
        let end = 3.0;
        let dens = piecewise(&a, end).delayed(start, end);
        let f = SigmaFunction::new([dens.clone(), dens]);
        let out = OperatorExpr::new(vec![(1.0, Operator::SingleLayer), (0.3, Operator::DoubleLayer)]).apply(&f, end);
        for p in 0..2 {
            for i in 0..10 {
                let t = start * i as f64 / 10.0;
                prop_assert_eq!(out.eval(p, t), 0.0);
            }
        }
    }

    #[test]
    fn time_reversal_is_an_involution(coeffs in prop::collection::vec(-5.0..5.0f64, 12)) {
        let g = grid(1.9, 6);
        for space in [Space::Constant, Space::LinearStart, Space::LinearEnd] {
            let d = BoundaryDensity::new(g, space, coeffs.clone()).unwrap();
            let r = d.time_reversal(1.9);
            prop_assert_eq!(r.time_reversal(1.9), d.clone());
            for t in [0.13, 0.8, 1.77] {
                prop_assert!((r.eval(0, t) - d.eval(0, 1.9 - t)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn piecewise_inner_is_symmetric_and_exact(a in coeff_triples(), b in coeff_triples()) {
        let (p, q) = (piecewise(&a, 1.3), piecewise(&b, 1.3));
        let exact = p.inner(&q);
        prop_assert!((exact - q.inner(&p)).abs() < 1e-13);
        // 600 panels put every breakpoint (at most 5 pieces) on a panel edge
        let oracle: f64 = (0..600).map(|i| {
            let (lo, hi) = (1.3 * i as f64 / 600.0, 1.3 * (i + 1) as f64 / 600.0);
            let mid = 0.5 * (lo + hi);
            stbem::quad::gauss24().integrate(lo, hi, |t| {
                // evaluate the piece owning the panel so edges do not leak
                let s = mid + (t - mid) * (1.0 - 1e-12);
                p.eval(s) * q.eval(s)
            })
        }).sum();
        prop_assert!((exact - oracle).abs() < 1e-10 * (1.0 + exact.abs()));
    }

    #[test]
    fn energetic_quadratic_form_is_nonnegative(c in prop::collection::vec(-1.0..1.0f64, 24), t in 1.2..3.3f64) {
        let g = grid(t, 12);
        let a = assemble(&Operator::SingleLayer.into(), &g, Space::Constant, Space::Constant, TestWeight::TimeDerivative)
            .unwrap()
            .entries;
        let v = DVector::from_vec(c);
        prop_assert!((v.transpose() * &a * &v)[(0, 0)] >= -1e-10);
    }

    #[test]
    fn hilbert_weighted_v_is_nonnegative(c in prop::collection::vec(-1.0..1.0f64, 16), t in 1.2..3.3f64) {
        let g = grid(t, 8);
        let a: DMatrix<f64> = assemble_ht_weighted(&HilbertBase::SingleLayer, &g).unwrap().entries;
        let v = DVector::from_vec(c);
        prop_assert!((v.transpose() * &a * &v)[(0, 0)] >= -1e-8);
    }

    #[test]
    fn spectral_coefficients_are_linear(a in coeff_triples(), b in coeff_triples(), x in -3.0..3.0f64) {
        let interval = TimeInterval::new(2.0, 16).unwrap();
        let (p, q) = (piecewise(&a, 2.0), piecewise(&b, 2.0));
        let lhs = analyze_piecewise(&p.add_scaled(&q, x), interval, BasisKind::Cosine);
        let (sp, sq) = (analyze_piecewise(&p, interval, BasisKind::Cosine), analyze_piecewise(&q, interval, BasisKind::Cosine));
        for k in 0..16 {
            prop_assert!((lhs.coeffs()[k] - sp.coeffs()[k] - x * sq.coeffs()[k]).abs() < 1e-12);
        }
    }
}
