use spinrecouple::numerics::TwiceSpin;
use spinrecouple::ponzano_regge::{closed_amplitude_truncated, genus, seven_vertex_torus, surface_counts, ClosedTriangulation};

fn main() {
    // two tetrahedra glued along all four faces
    let m = ClosedTriangulation::two_tetrahedra();
    for cutoff in 0..=4 {
        let z = closed_amplitude_truncated(&m, TwiceSpin(cutoff)).unwrap();
        println!(
            "2j ≤ {cutoff}: {:>6} labelings  Z = {:<24} ({:+.6})  touched cutoff: {}",
            z.labelings,
            z.value.to_string(),
            z.value.to_f64(),
            z.touched_cutoff
        );
    }

    let (v, e, f) = surface_counts(&seven_vertex_torus());
    println!("\nseven-vertex torus: V={v} E={e} F={f}, genus {}", genus(v, e, f).unwrap());
    println!("tetrahedron boundary: genus {}", genus(4, 6, 4).unwrap());
}
