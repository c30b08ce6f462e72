use spinrecouple::engine::{apply_move, permuted_basis_state, plan_moves, Permutation};
use spinrecouple::numerics::TwiceSpin;
use spinrecouple::tree::{LabeledTree, TreeShape};

fn main() {
    // five spin-1/2 particles on a left comb, cyclically shifted
    let leaves = [1, 2, 3, 4, 5];
    let comb = TreeShape::caterpillar(&leaves);
    let labels = [2, 1, 2, 1].map(TwiceSpin).to_vec();
    let lambda = LabeledTree::new(comb.clone(), labels).unwrap();
    let p = Permutation::new(vec![2, 3, 4, 5, 1]).unwrap();

    let plan = plan_moves(&comb, &p, &comb).unwrap();
    let mut state = permuted_basis_state(&lambda, &p);
    println!("start on {}", state.shape);
    for m in &plan.moves {
        state = apply_move(&state, m).unwrap();
        println!("{:<40} support {:>2}  norm² {}", m.to_json().to_string(), state.support(), state.norm_squared());
    }
    for (labels, amp) in &state.amplitudes {
        let l: Vec<u32> = labels.iter().map(|x| x.0).collect();
        println!("  {l:?}  {amp}");
    }
}
