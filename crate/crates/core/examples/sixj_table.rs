use spinrecouple::numerics::TwiceSpin;
use spinrecouple::recoupling::{coupled_range, recoupling_tensor, sixj, SixSpins};

fn main() {
    // {1/2 1/2 f; 1/2 1/2 d} for every admissible f, d
    println!("{{1/2 1/2 f; 1/2 1/2 d}}");
    for f in coupled_range(TwiceSpin(1), TwiceSpin(1)) {
        for d in coupled_range(TwiceSpin(1), TwiceSpin(1)) {
            let s = SixSpins::new([1, 1, f.0], [1, 1, d.0]);
            println!("  f={f:<3} d={d:<3} {:<12} {:>10.6}", sixj(s).to_string(), sixj(s).to_f64());
        }
    }

    // recoupling matrix for three spin-1 legs at total spin 1
    let (a, b, c, e) = (2, 2, 2, 2);
    println!("\n[1 1 f; 1 1 d], rows f, columns d");
    for f in coupled_range(TwiceSpin(a), TwiceSpin(b)) {
        let row: Vec<String> = coupled_range(TwiceSpin(b), TwiceSpin(c))
            .map(|d| format!("{:>9.5}", recoupling_tensor(SixSpins::new([a, b, f.0], [c, e, d.0])).to_f64()))
            .collect();
        println!("  f={f:<2} {}", row.join(" "));
    }

    let big = SixSpins::new([16, 14, 12], [10, 16, 8]);
    println!("\n{{8 7 6; 5 8 4}} = {}", sixj(big));
}
