use qaffine::sl2mod::{build_module, WeightA1};
use std::time::Instant;

fn main() {
    for (m0, m1) in [(2, 0), (1, 1), (0, 2)] {
        for h in [13u32, 15, 16, 17] {
            let t = Instant::now();
            let m = build_module(WeightA1::new(m0, m1), h);
            println!(
                "lambda=({m0},{m1}) H={h}: dim={} in {:?}",
                m.total_dim(),
                t.elapsed()
            );
        }
    }
}
