use spinrecouple::engine::{dense_oracle_amplitude, evaluate_amplitude, plan_moves, Permutation};
use spinrecouple::numerics::TwiceSpin;
use spinrecouple::tree::{LabeledTree, TreeShape};

fn main() {
    // |λ⟩ = (1,(2,3)) with particles 2, 3 in a singlet, total spin 1/2
    let shape = TreeShape::right_comb(&[1, 2, 3]);
    let lambda = LabeledTree::new(shape.clone(), vec![TwiceSpin(1), TwiceSpin(0)]).unwrap();
    // ⟨λ′| has particles 2, 3 in a triplet
    let lambda_prime = LabeledTree::new(shape, vec![TwiceSpin(1), TwiceSpin(2)]).unwrap();
    let swap = Permutation::transposition(3, 1, 2);

    let plan = plan_moves(&lambda.shape, &swap, &lambda_prime.shape).unwrap();
    println!("moves: {}", plan.to_json());

    let amp = evaluate_amplitude(&lambda, &swap, &lambda_prime).unwrap();
    let dense = dense_oracle_amplitude(&lambda, &swap, &lambda_prime).unwrap();
    println!("<λ′|U|λ> = {amp}");
    println!("float    = {}", amp.to_f64());
    println!("dense    = {dense}");
}
