use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinrecouple::engine::{dense_oracle_amplitude, evaluate_amplitude, Permutation};
use spinrecouple::numerics::TwiceSpin;
use spinrecouple::tree::{enumerate_labelings, enumerate_shapes};

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let n = 6;
    let leaves: Vec<u32> = (1..=n as u32).collect();
    let shapes = enumerate_shapes(&leaves);
    let spins = vec![TwiceSpin::HALF; n];
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let s = &shapes[rng.random_range(0..shapes.len())];
        let t = &shapes[rng.random_range(0..shapes.len())];
        let ls = enumerate_labelings(s, &spins, TwiceSpin(2));
        let lps = enumerate_labelings(t, &spins, TwiceSpin(2));
        let l = &ls[rng.random_range(0..ls.len())];
        let lp = &lps[rng.random_range(0..lps.len())];
        let mut images: Vec<u32> = leaves.clone();
        for i in (1..n).rev() {
            images.swap(i, rng.random_range(0..=i));
        }
        let p = Permutation::new(images).unwrap();
        let exact = evaluate_amplitude(l, &p, lp).unwrap();
        let dense = dense_oracle_amplitude(l, &p, lp).unwrap();
        worst = worst.max((exact.to_f64() - dense).abs());
        println!("{s} → {t}  p={p}  {:>+.12}  {:>+.12}", exact.to_f64(), dense);
    }
    println!("largest difference {worst:e}");
}
