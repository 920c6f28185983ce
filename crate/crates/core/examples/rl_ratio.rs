//! RL-ratio breakdown on random maps: `rl_ratio W H fill maps per`.
use spherical_anya::bench::{gen_random_map, run_benchmark, BenchOptions};

fn main() {
    let a: Vec<f64> = std::env::args().skip(1).map(|s| s.parse().unwrap()).collect();
    let (w, h, fill, nmaps, per) = (a[0] as usize, a[1] as usize, a[2], a[3] as u64, a[4] as usize);
    let maps: Vec<_> = (0..nmaps).map(|i| (format!("m{i}"), gen_random_map(w, h, fill, 600 + i))).collect();
    let rep = run_benchmark(&maps, &BenchOptions { count: per, seed: 6, ..Default::default() });
    for (k, s) in rep.summaries.iter().enumerate() {
        let (mut less, mut eq, mut more, mut more_legal) = (0, 0, 0, 0);
        for r in &rep.instances {
            let (Some(x), Some(y)) = (r.spherical, r.baseline[k].1) else { continue };
            let q = if y.length_km > 0.0 { x.length_km / y.length_km } else { 1.0 };
            if q < 1.0 - 1e-9 { less += 1 } else if q > 1.0 + 1e-9 { more += 1; more_legal += usize::from(y.legal) } else { eq += 1 }
        }
        println!("{}: less {less} equal {eq} more {more} (legal baseline among more: {more_legal}) illegal {}", s.recipe.name(), s.baseline_illegal);
    }
}
