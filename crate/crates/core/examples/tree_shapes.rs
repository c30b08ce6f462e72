use spinrecouple::numerics::TwiceSpin;
use spinrecouple::tree::{count_tree_shapes, enumerate_labelings, enumerate_shapes, rotation_plan_to_caterpillar};

fn main() {
    for n in 1..=8 {
        println!("n={n}: {} shapes", count_tree_shapes(n));
    }

    let leaves = [1, 2, 3, 4];
    let half = [TwiceSpin::HALF; 4];
    for shape in enumerate_shapes(&leaves) {
        let plan = rotation_plan_to_caterpillar(&shape);
        let counts: Vec<usize> = [0, 2, 4]
            .iter()
            .map(|&j| enumerate_labelings(&shape, &half, TwiceSpin(j)).len())
            .collect();
        println!("{shape:<14} J=0,1,2 labelings {counts:?}  {} rotation(s) to the left comb", plan.len());
    }

    let shape = &enumerate_shapes(&leaves)[2];
    for t in enumerate_labelings(shape, &half, TwiceSpin(0)) {
        println!("{}", t.to_json());
    }
}
