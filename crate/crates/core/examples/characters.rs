use spinrecouple::engine::Permutation;
use spinrecouple::symrep::{character_estimate, character_exact, dimension_two_row, hoeffding_samples, TwoRowDiagram};

fn main() {
    let classes: [(&str, Vec<u32>); 4] = [
        ("e", vec![1, 2, 3, 4, 5, 6]),
        ("(12)", vec![2, 1, 3, 4, 5, 6]),
        ("(123)(45)", vec![2, 3, 1, 5, 4, 6]),
        ("(123456)", vec![2, 3, 4, 5, 6, 1]),
    ];
    print!("{:<8}", "");
    for (name, _) in &classes {
        print!("{name:>11}");
    }
    println!();
    for d in TwoRowDiagram::all(6) {
        print!("{:<8}", d.to_string());
        for (_, images) in &classes {
            let chi = character_exact(d, &Permutation::new(images.clone()).unwrap()).unwrap();
            print!("{:>11}", chi.to_string());
        }
        println!();
    }

    let d = TwoRowDiagram::new(4, 2).unwrap();
    let p = Permutation::new(vec![2, 3, 4, 5, 6, 1]).unwrap();
    let exact = character_exact(d, &p).unwrap().to_f64() / dimension_two_row(d).to_string().parse::<f64>().unwrap();
    let (eps, delta) = (0.05, 0.01);
    println!("\n{} samples for ε = {eps}, δ = {delta}", hoeffding_samples(eps, delta));
    for seed in 0..5 {
        let est = character_estimate(d, &p, eps, delta, seed).unwrap();
        println!("seed {seed}: {:+.4}  (exact {exact:+.4})", est.estimate);
    }
}
