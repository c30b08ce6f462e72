use spinrecouple::engine::Permutation;
use spinrecouple::symrep::{enumerate_tableaux, yof_full_matrix, TwoRowDiagram};

fn show(d: TwoRowDiagram, p: &Permutation) {
    let tableaux = enumerate_tableaux(d);
    println!("{d}, p = {p}");
    for (t, row) in tableaux.iter().zip(yof_full_matrix(d, p).unwrap()) {
        let cells: Vec<String> = row.iter().map(|x| format!("{:>8.4}", x.to_f64())).collect();
        println!("  {t:<12} {}", cells.join(" "));
    }
}

fn main() {
    let d = TwoRowDiagram::new(2, 1).unwrap();
    show(d, &Permutation::transposition(3, 2, 3));

    let d = TwoRowDiagram::new(3, 2).unwrap();
    show(d, &Permutation::adjacent(5, 3));
    show(d, &Permutation::new(vec![3, 1, 5, 2, 4]).unwrap());

    let m = yof_full_matrix(TwoRowDiagram::new(2, 1).unwrap(), &Permutation::transposition(3, 2, 3)).unwrap();
    println!("exact off-diagonal: {}", m[0][1]);
}
