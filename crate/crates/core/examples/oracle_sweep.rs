use spherical_anya::anya_core::legality_check;
use spherical_anya::bench::{gen_random_map, InstanceSet};
use spherical_anya::oracle::{oracle_with, FixedVisibility};
use spherical_anya::sanya::{search, SearchConfig};
fn main() {
    let a: Vec<f64> = std::env::args().skip(1).map(|x| x.parse().unwrap()).collect();
    let (n, h, fill, seeds, per) = (a[0] as usize, a[1] as usize, a[2], a[3] as u64, a[4] as usize);
    let cfg = SearchConfig::default();
    let (mut bad, mut tot, mut worst) = (0, 0, 0.0f64);
    let t0 = std::time::Instant::now();
    let mut ts = 0.0;
    for seed in 0..seeds {
        let m = gen_random_map(n, h, fill, seed);
        for (s, t) in InstanceSet::generate("x", &m, seed, per).pairs {
            tot += 1;
            let c = std::time::Instant::now();
            let r = search(&m, s, t, &cfg);
            ts += c.elapsed().as_secs_f64();
            let fx = FixedVisibility::new(&m, s, t, &cfg.sphere);
            let hi = oracle_with(&m, &fx, s, t, 1.0 / 16.0, &cfg.sphere);
            let lo = oracle_with(&m, &fx, s, t, 1.0 / 64.0, &cfg.sphere);
            let ok = match (&r, &hi, &lo) {
                (Ok(r), Ok(hi), Ok(lo)) => {
                    worst = worst.max(1.0 - r.length / lo);
                    r.length <= hi * (1.0 + 1e-9) && r.length >= lo * 0.995 && legality_check(r, &m).is_empty()
                }
                (Err(_), Err(_), Err(_)) => true,
                _ => false,
            };
            if !ok {
                bad += 1;
                if bad <= 3 {
                    println!("{n} {h} {fill} {seed} {} {} {} {}", s.row, s.x, t.row, t.x);
                    println!("  {:?} hi {:?} lo {:?} legal {:?}", r.as_ref().map(|r| r.length), hi, lo, r.as_ref().map(|r| legality_check(r, &m)));
                }
            }
        }
    }
    println!("bad {bad}/{tot} worst-below-lo {worst:.3e} search {ts:.2}s total {:.1}s", t0.elapsed().as_secs_f64());
}
