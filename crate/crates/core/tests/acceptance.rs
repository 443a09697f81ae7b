//! Acceptance suite: one test per release criterion, each printing a single
//! pass/fail line (run with `--nocapture` to see them). Tolerances are pinned
//! here, not configurable.

use freechaos::chaos::ChaosElement;
use freechaos::kernel::Symmetry;
use freechaos::matrixsim::{empirical_moments, empirical_operator_norm, SimConfig};
use freechaos::moments::{pairing_integral, semicircle_moment};
use freechaos::pairings::{
    catalan, compose, connected_components, contraction_words, decompose, enumerate_all_pairings,
    enumerate_nc2, enumerate_nc2_respecting, respects, ContractionWord, IntervalPartition,
    Pairing,
};
use freechaos::{
    distance_bound_order2, fourth_moment_gap, wiener_mixed_moment, wigner_mixed_moment,
    clark_ocone, clark_ocone_reconstruct, Complex64, GridSpec, Kernel,
};
use std::time::Instant;

macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !($cond) {
            return Err(format!($($arg)+));
        }
    };
}

fn criterion(id: u32, name: &str, budget_s: f64, body: impl FnOnce() -> Result<(), String>) {
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed().as_secs_f64();
    match outcome {
        Ok(()) => {
            println!("acceptance {id:02} PASS  [{elapsed:7.2}s]  {name}");
            assert!(
                elapsed < budget_s,
                "criterion {id} exceeded its {budget_s}s budget ({elapsed:.2}s)"
            );
        }
        Err(e) => {
            println!("acceptance {id:02} FAIL  [{elapsed:7.2}s]  {name}: {e}");
            panic!("criterion {id} failed: {e}");
        }
    }
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1.0_f64.max(a.abs()).max(b.abs())
}

/// All compositions (interval partitions) of the even totals up to `max`.
fn all_interval_partitions_up_to(max: usize) -> Vec<IntervalPartition> {
    let mut out = Vec::new();
    for total in (2..=max).step_by(2) {
        for mask in 0..(1usize << (total - 1)) {
            let mut sizes = Vec::new();
            let mut run = 1;
            for bit in 0..total - 1 {
                if mask & (1 << bit) != 0 {
                    sizes.push(run);
                    run = 1;
                } else {
                    run += 1;
                }
            }
            sizes.push(run);
            out.push(IntervalPartition::new(sizes).unwrap());
        }
    }
    out
}

fn mirror_suite() -> Vec<Kernel> {
    let g2 = GridSpec::new(16, 1.0).unwrap();
    let g3 = GridSpec::new(8, 1.0).unwrap();
    let mut suite = Vec::new();
    for seed in 0..20u64 {
        suite.push(Kernel::random(2, g2, 1000 + seed, Symmetry::Mirror).unwrap());
    }
    for seed in 0..20u64 {
        suite.push(Kernel::random(3, g3, 2000 + seed, Symmetry::Mirror).unwrap());
    }
    suite
}

#[test]
fn acceptance_01_catalan_enumeration() {
    criterion(1, "noncrossing pairings counted by Catalan numbers", 5.0, || {
        for m in 1..=6u32 {
            let count = enumerate_nc2(2 * m as usize)
                .map_err(|e| e.to_string())?
                .len() as u128;
            let expect = catalan(m).map_err(|e| e.to_string())?;
            ensure!(count == expect, "|NC2({})| = {count}, expected {expect}", 2 * m);
        }
        Ok(())
    });
}

#[test]
fn acceptance_02_respectful_enumeration() {
    criterion(2, "respectful enumeration vs brute-force filter", 30.0, || {
        let ip = IntervalPartition::new([4, 3, 1, 2, 2]).unwrap();
        let all = enumerate_nc2_respecting(&ip).map_err(|e| e.to_string())?;
        ensure!(all.len() == 5, "|NC2(4x3x1x2x2)| = {}, expected 5", all.len());
        let connected = all
            .iter()
            .filter(|p| connected_components(p, &ip).unwrap().len() == 1)
            .count();
        ensure!(connected == 4, "{connected} connected, expected 4");

        for n in 2..=6usize {
            let ip = IntervalPartition::new([n, n]).unwrap();
            let all = enumerate_nc2_respecting(&ip).map_err(|e| e.to_string())?;
            let nested = Pairing::new((1..=n).map(|k| (k, 2 * n + 1 - k))).unwrap();
            ensure!(
                all == vec![nested],
                "NC2({n}x{n}) is not the nested singleton"
            );
        }

        for ip in all_interval_partitions_up_to(10) {
            let via_words = enumerate_nc2_respecting(&ip).map_err(|e| e.to_string())?;
            let filtered: Vec<Pairing> = enumerate_nc2(ip.total())
                .map_err(|e| e.to_string())?
                .into_iter()
                .filter(|p| respects(p, &ip).unwrap())
                .collect();
            ensure!(
                via_words == filtered,
                "word construction disagrees with the filter on {ip}"
            );
        }
        Ok(())
    });
}

#[test]
fn acceptance_03_decomposition_round_trip() {
    criterion(3, "contraction-word decomposition round-trips", 30.0, || {
        // the two worked figures
        let ip = IntervalPartition::new([3, 2, 2, 3]).unwrap();
        let p = Pairing::new([(1, 10), (2, 5), (3, 4), (6, 9), (7, 8)]).unwrap();
        let w = decompose(&p, &ip).map_err(|e| e.to_string())?;
        ensure!(w.depths() == [2, 0, 3], "figure word {:?}", w.depths());
        ensure!(compose(&w, &ip).unwrap() == p, "figure does not round-trip");

        let ip = IntervalPartition::new([4, 3, 1, 2, 2]).unwrap();
        let w = ContractionWord::new([1, 1, 2, 2]);
        let p = compose(&w, &ip).map_err(|e| e.to_string())?;
        ensure!(
            decompose(&p, &ip).unwrap() == w,
            "four-step figure does not round-trip"
        );

        for ip in all_interval_partitions_up_to(10) {
            for w in contraction_words(&ip).map_err(|e| e.to_string())? {
                let p = compose(&w, &ip).map_err(|e| e.to_string())?;
                ensure!(
                    decompose(&p, &ip).unwrap() == w,
                    "decompose(compose(w)) != w on {ip}"
                );
            }
            for p in enumerate_nc2_respecting(&ip).map_err(|e| e.to_string())? {
                let w = decompose(&p, &ip).map_err(|e| e.to_string())?;
                ensure!(
                    compose(&w, &ip).unwrap() == p,
                    "compose(decompose(p)) != p on {ip}"
                );
            }
        }
        Ok(())
    });
}

#[test]
fn acceptance_04_fourth_moment_identity() {
    criterion(4, "fourth moment = 2 + contraction energies", 120.0, || {
        for (i, f) in mirror_suite().iter().enumerate() {
            let adj = f.adjoint();
            let moment = wigner_mixed_moment(&[f, &adj, f, &adj])
                .map_err(|e| e.to_string())?
                .value;
            ensure!(
                moment.im.abs() < 1e-10,
                "kernel {i}: imaginary residue {}",
                moment.im
            );
            let gap = fourth_moment_gap(f).map_err(|e| e.to_string())?;
            ensure!(
                rel_close(moment.re, 2.0 + gap, 1e-10),
                "kernel {i}: engine {} vs contraction route {}",
                moment.re,
                2.0 + gap
            );
        }
        Ok(())
    });
}

#[test]
fn acceptance_05_strict_positivity() {
    criterion(5, "fourth-moment gap strictly positive beyond first chaos", 60.0, || {
        for (i, f) in mirror_suite().iter().enumerate() {
            let gap = fourth_moment_gap(f).map_err(|e| e.to_string())?;
            ensure!(gap > 1e-12, "kernel {i}: gap {gap} not strictly positive");
        }
        Ok(())
    });
}

#[test]
fn acceptance_06_breuer_major_exact_values() {
    criterion(6, "Breuer-Major contraction norms, gaps, bounds", 30.0, || {
        for m in [1usize, 2, 4, 16, 64] {
            let grid = GridSpec::new(m, m as f64).unwrap();
            let f = Kernel::breuer_major(m, grid).map_err(|e| e.to_string())?;
            let norm = f.contract(&f, 1).map_err(|e| e.to_string())?.norm();
            let expect = 1.0 / (m as f64).sqrt();
            ensure!(
                (norm - expect).abs() <= 1e-12,
                "m={m}: contraction norm {norm} vs {expect}"
            );
            let gap = fourth_moment_gap(&f).map_err(|e| e.to_string())?;
            ensure!(
                (gap - 1.0 / m as f64).abs() <= 1e-12,
                "m={m}: gap {gap} vs {}",
                1.0 / m as f64
            );
            let report = distance_bound_order2(&f).map_err(|e| e.to_string())?;
            let bound = 0.5 * (3.0 / (2.0 * m as f64)).sqrt();
            ensure!(
                (report.bound - bound).abs() <= 1e-12,
                "m={m}: bound {} vs {bound}",
                report.bound
            );
        }
        Ok(())
    });
}

#[test]
fn acceptance_07_transfer_principle() {
    criterion(7, "Wiener/Wigner transfer at order 2 and Gaussian fourth moment", 60.0, || {
        let g = GridSpec::new(12, 1.0).unwrap();
        for seed in 0..10u64 {
            let f = Kernel::random(2, g, 3000 + seed, Symmetry::Full).unwrap();
            let wigner = wigner_mixed_moment(&[&f, &f]).map_err(|e| e.to_string())?.value;
            let wiener = wiener_mixed_moment(&[&f, &f]).map_err(|e| e.to_string())?.value;
            ensure!(
                wiener == wigner * 2.0,
                "seed {seed}: wiener {wiener} != 2 * wigner {wigner}"
            );
        }
        let f1 = Kernel::random(1, g, 3100, Symmetry::Full).unwrap();
        let fourth = wiener_mixed_moment(&[&f1, &f1, &f1, &f1])
            .map_err(|e| e.to_string())?
            .value;
        ensure!(fourth.im.abs() < 1e-12, "imaginary fourth moment");
        ensure!(
            rel_close(fourth.re, 3.0, 1e-10),
            "classical fourth moment {} != 3",
            fourth.re
        );
        Ok(())
    });
}

#[test]
fn acceptance_08_distance_bound_consistency() {
    criterion(8, "distance-bound components reproduce (3/2) gap", 120.0, || {
        // real mirror-symmetric kernels: the three component norms recover
        // the Malliavin deviation exactly as (3/2) * gap
        let g = GridSpec::new(16, 1.0).unwrap();
        for seed in 0..20u64 {
            let f = Kernel::random(2, g, 4000 + seed, Symmetry::Full).unwrap();
            let r = distance_bound_order2(&f).map_err(|e| e.to_string())?;
            ensure!(
                rel_close(r.deviation_sq, 1.5 * r.gap, 1e-10),
                "seed {seed}: deviation {} vs 1.5 * gap {}",
                r.deviation_sq,
                1.5 * r.gap
            );
            ensure!(
                rel_close(r.bound, 0.5 * (1.5 * r.gap).sqrt(), 1e-10),
                "seed {seed}: bound/gap identity broken"
            );
        }
        // complex mirror-symmetric kernels: the component route is bounded by
        // the real-case value
        for seed in 0..20u64 {
            let f = Kernel::random(2, g, 4100 + seed, Symmetry::Mirror).unwrap();
            let r = distance_bound_order2(&f).map_err(|e| e.to_string())?;
            ensure!(
                r.deviation_sq <= 1.5 * r.gap + 1e-10,
                "seed {seed}: component sum exceeds (3/2) gap"
            );
            let energy: f64 = r.component_norms.iter().map(|n| n * n).sum();
            ensure!(
                rel_close(4.0 * r.deviation_sq, energy, 1e-12),
                "seed {seed}: bi-chaos isometry broken"
            );
        }
        // the Breuer-Major family pins the bound column
        for m in [1usize, 4, 16] {
            let grid = GridSpec::new(2 * m, m as f64).unwrap();
            let f = Kernel::breuer_major(m, grid).unwrap();
            let r = distance_bound_order2(&f).map_err(|e| e.to_string())?;
            let expect = 0.5 * (3.0 / (2.0 * m as f64)).sqrt();
            ensure!(
                (r.bound - expect).abs() <= 1e-12,
                "m={m}: bound {} vs {expect}",
                r.bound
            );
        }
        Ok(())
    });
}

#[test]
fn acceptance_09_clark_ocone_reconstruction() {
    criterion(9, "Clark-Ocone reconstruction exact off-diagonal", 60.0, || {
        let g = GridSpec::new(12, 1.0).unwrap();
        for order in 1..=3usize {
            for seed in 0..5u64 {
                let f = Kernel::random(order, g, 5000 + 10 * order as u64 + seed, Symmetry::None)
                    .unwrap()
                    .off_diagonal_projection();
                let rec = clark_ocone_reconstruct(&f).map_err(|e| e.to_string())?;
                ensure!(rec == f, "order {order} seed {seed}: not cell-exact");
            }
        }
        // mean + double integral: F = phi(F) + delta(Gamma grad F)
        let f = Kernel::random(2, g, 5555, Symmetry::Mirror)
            .unwrap()
            .off_diagonal_projection();
        let mut e = ChaosElement::new(g);
        e.add_component(Kernel::scalar(g, Complex64::new(1.25, 0.0)))
            .unwrap();
        e.add_component(f).unwrap();
        let rec = clark_ocone(&e).map_err(|e| e.to_string())?;
        ensure!(rec == e, "mean term not restored");
        Ok(())
    });
}

#[test]
fn acceptance_10_matrix_sim_cross_oracle() {
    criterion(10, "matrix Monte Carlo agrees with the combinatorial engine", 600.0, || {
        // semicircle moments of S_1 up to order 6
        let g1 = GridSpec::new(8, 1.0).unwrap();
        let cfg1 = SimConfig::new(200, 200, 0x5EED, g1).unwrap();
        let unit = Kernel::indicator(g1, 0.0, 1.0, 1).unwrap();
        let est = empirical_moments(&unit, &cfg1, &[1, 2, 3, 4, 5, 6]).map_err(|e| e.to_string())?;
        for e in &est {
            let target = semicircle_moment(e.order as u32, 1.0).unwrap();
            let z = (e.mean - target) / e.std_error;
            ensure!(
                z.abs() <= 5.0,
                "semicircle k={}: mean {} vs {target} (z = {z:.2})",
                e.order,
                e.mean
            );
        }
        let (_, max1) = empirical_operator_norm(&unit, &cfg1).map_err(|e| e.to_string())?;
        ensure!(
            max1 <= 2.0 * unit.norm() + 0.5,
            "||I_1|| estimate {max1} breaches the Haagerup bound"
        );

        // fourth moment of the double integral of the Breuer-Major kernel,
        // m = 4, off-diagonal representative on a fine grid (64 cells per
        // unit keeps the dropped-diagonal discretization bias well inside
        // the Monte Carlo band)
        let g4 = GridSpec::new(256, 4.0).unwrap();
        let cfg4 = SimConfig::new(200, 200, 0x5EED, g4).unwrap();
        let f4 = Kernel::breuer_major(4, g4)
            .unwrap()
            .off_diagonal_projection()
            .normalized()
            .unwrap()
            .0;
        let summary = freechaos::empirical_summary(&f4, &cfg4, &[4]).map_err(|e| e.to_string())?;
        let est4 = &summary.moments[0];
        let z = (est4.mean - 2.25) / est4.std_error;
        ensure!(
            z.abs() <= 5.0,
            "I2(f_4) fourth moment {} vs 2.25 (z = {z:.2})",
            est4.mean
        );
        // like-for-like: the exact value for the very same kernel via the
        // contraction route (equals the pairing engine by criterion 4)
        let exact = 2.0 + fourth_moment_gap(&f4).map_err(|e| e.to_string())?;
        let z_exact = (est4.mean - exact) / est4.std_error;
        ensure!(
            z_exact.abs() <= 5.0,
            "I2(f_4) fourth moment {} vs exact {exact} (z = {z_exact:.2})",
            est4.mean
        );
        // Haagerup sanity: ||I_n(f)|| <= (n+1) ||f|| with slack for finite d
        ensure!(
            summary.operator_norm_max <= 3.0 * f4.norm() + 0.5,
            "||I_2(f_4)|| estimate {} breaches the Haagerup bound",
            summary.operator_norm_max
        );
        Ok(())
    });
}

#[test]
fn acceptance_11_oracle_equivalence() {
    criterion(11, "engine equals brute-force matching oracle", 300.0, || {
        let g = GridSpec::new(8, 1.0).unwrap();
        let f1 = Kernel::random(1, g, 6001, Symmetry::Mirror).unwrap();
        let f2 = Kernel::random(2, g, 6002, Symmetry::Mirror).unwrap();
        let f3 = Kernel::random(3, g, 6003, Symmetry::Mirror).unwrap();
        let f3b = f3.adjoint();
        let f1s = Kernel::random(1, g, 6004, Symmetry::Full).unwrap();
        let cases: Vec<Vec<&Kernel>> = vec![
            vec![&f2, &f2, &f2, &f2],
            vec![&f1, &f1, &f1, &f1, &f1, &f1],
            vec![&f1, &f2, &f2, &f1],
            vec![&f3, &f3b],
            vec![&f1s, &f3, &f3b, &f1s],
            vec![&f2, &f3, &f3b],
        ];
        for (i, factors) in cases.iter().enumerate() {
            let total: usize = factors.iter().map(|f| f.order()).sum();
            assert!(total <= 8);
            let engine = wigner_mixed_moment(factors).map_err(|e| e.to_string())?.value;
            let ip = IntervalPartition::new(factors.iter().map(|f| f.order())).unwrap();
            let mut oracle = Complex64::new(0.0, 0.0);
            for p in enumerate_all_pairings(total).map_err(|e| e.to_string())? {
                if p.is_noncrossing() && respects(&p, &ip).unwrap() {
                    oracle += pairing_integral(&p, factors).map_err(|e| e.to_string())?;
                }
            }
            ensure!(
                (engine - oracle).norm() <= 1e-10 * 1.0_f64.max(oracle.norm()),
                "case {i}: engine {engine} vs oracle {oracle}"
            );
        }
        Ok(())
    });
}
