use std::collections::HashMap;

use swtomo::coupling::couple_sw;
use swtomo::dyck::{dyck_dominates, dyck_f, dyck_g, dyck_to_tableau, sample_syt_eq, tableau_to_dyck};
use swtomo::keyl::{tomography_estimate, DEFAULT_MAX_TRIES};
use swtomo::linalg::{density_from_spectrum, haar_unitary};
use swtomo::partition::{dominates, Partition, ProbVec, SortedSpectrum};
use swtomo::rng::stream;
use swtomo::schur_weyl::{sample_word, sw_pmf, sw_sample};
use swtomo::tableau::{rsk, rsk_inverse, sh_rsk};

#[test]
fn word_sampling_and_shape_sampling_agree() {
    let alpha = ProbVec::new(vec![0.5, 0.3, 0.2]).unwrap();
    let n = 5;
    let draws = 40_000;
    let mut rng = stream(21, 0);
    let mut by_word: HashMap<Partition, u64> = HashMap::new();
    let mut by_shape: HashMap<Partition, u64> = HashMap::new();
    for _ in 0..draws {
        let w = sample_word(n, alpha.entries(), &mut rng);
        let (p, q) = rsk(&w);
        assert_eq!(p.shape(), sh_rsk(&w));
        assert_eq!(rsk_inverse(&p, &q).unwrap(), w);
        *by_word.entry(p.shape()).or_insert(0) += 1;
        *by_shape.entry(sw_sample(n, &alpha, &mut rng)).or_insert(0) += 1;
    }
    let pmf = sw_pmf(n, &alpha).unwrap();
    assert!(pmf.tv_to_counts(&by_word) < 0.02);
    assert!(pmf.tv_to_counts(&by_shape) < 0.02);
}

#[test]
fn tomography_estimate_is_a_state_with_sampled_spectrum() {
    let mut rng = stream(22, 0);
    let spec = SortedSpectrum::new(vec![0.6, 0.3, 0.1]).unwrap();
    let rho = density_from_spectrum(&spec, &haar_unitary(3, &mut rng)).unwrap();
    for _ in 0..20 {
        let est = tomography_estimate(12, &rho, &mut rng, DEFAULT_MAX_TRIES).unwrap();
        assert_eq!(est.shape.size(), 12);
        assert!(est.rho_hat.hermitian_defect() < 1e-10);
        assert!((est.rho_hat.trace().re - 1.0).abs() < 1e-10);
        let eig = swtomo::linalg::DensityMatrix::new(est.rho_hat.clone()).unwrap().spectrum().unwrap();
        for (e, l) in eig.entries().iter().zip(est.shape.padded(3)) {
            assert!((e - l as f64 / 12.0).abs() < 1e-9);
        }
    }
}

#[test]
fn raising_map_on_sampled_two_row_tableaux() {
    let mut rng = stream(23, 0);
    for _ in 0..500 {
        let q = sample_syt_eq(14, 5, &mut rng).unwrap();
        let w = tableau_to_dyck(&q).unwrap();
        assert_eq!(dyck_to_tableau(&w), q);
        for (s1, _) in w.steps().iter().enumerate().filter(|(_, s)| **s == swtomo::dyck::Step::Down) {
            let (wp, sp) = dyck_f(&w, s1).unwrap();
            assert_eq!(dyck_g(&wp, sp, 5).unwrap(), (w.clone(), s1));
            assert!(wp.downsteps() < 5);
            assert!(dyck_dominates(&wp, &w).unwrap());
        }
    }
}

#[test]
fn shape_coupling_is_monotone_along_a_chain() {
    let specs = [vec![0.4, 0.35, 0.25], vec![0.5, 0.3, 0.2], vec![0.8, 0.15, 0.05]];
    let mut rng = stream(24, 0);
    for pair in specs.windows(2) {
        let a = SortedSpectrum::new(pair[0].clone()).unwrap();
        let b = SortedSpectrum::new(pair[1].clone()).unwrap();
        for _ in 0..2000 {
            let (l, m) = couple_sw(&a, &b, 8, &mut rng).unwrap();
            assert_eq!((l.size(), m.size()), (8, 8));
            assert!(dominates(&m, &l).unwrap());
        }
    }
}
