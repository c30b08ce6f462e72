use spinrecouple::numerics::TwiceSpin;
use spinrecouple::ponzano_regge::{flip_cobordism_amplitude, flip_matrix, tet_matrix_element, FlipCobordism, TetLabels};
use spinrecouple::tree::{LabeledTree, TreeShape};

fn main() {
    // one tetrahedron: ((12)3) → (1(23)) on three spin-1/2 edges
    let start = LabeledTree::new(TreeShape::caterpillar(&[1, 2, 3]), vec![TwiceSpin(2), TwiceSpin(1)]).unwrap();
    let end = LabeledTree::new(TreeShape::right_comb(&[1, 2, 3]), vec![TwiceSpin(1), TwiceSpin(0)]).unwrap();
    let c = FlipCobordism { start_tree: start, flips: vec![0], end_tree: end };
    println!("{}", c.to_json());
    println!("amplitude   {}", flip_cobordism_amplitude(&c).unwrap());
    println!("tetrahedron {}", tet_matrix_element(TetLabels::new([1, 1, 2], [1, 1, 0])));

    // the pentagon: two flips and three flips between the same boundaries
    let comb = TreeShape::caterpillar(&[1, 2, 3, 4]);
    let spins = [TwiceSpin(2); 4];
    let two = flip_matrix(&comb, &spins, TwiceSpin(2), &[1, 0]).unwrap();
    let three = flip_matrix(&comb, &spins, TwiceSpin(2), &[0, 0, 1]).unwrap();
    println!("\nfour spin-1 edges, total 1: {} boundary labelings", two.start.len());
    for (r2, r3) in two.entries.iter().zip(&three.entries) {
        let a: Vec<String> = r2.iter().map(|x| format!("{:>8.4}", x.to_f64())).collect();
        let b: Vec<String> = r3.iter().map(|x| format!("{:>8.4}", x.to_f64())).collect();
        println!("  {}   |  {}", a.join(" "), b.join(" "));
    }
    println!("equal: {}", two.entries == three.entries);
}
