use num_bigint::BigInt;
use num_rational::BigRational;
use spinrecouple::numerics::{surd_normalize, SurdSum};

fn main() {
    let a = SurdSum::sqrt_u64(2) + SurdSum::sqrt_u64(3);
    let b = SurdSum::sqrt_u64(6).scale(&BigRational::new(BigInt::from(1), BigInt::from(2)));
    println!("a = {a}");
    println!("b = {b}");
    println!("a·a = {}", a.square());
    println!("a·b = {}", &a * &b);

    // √72 reduces to 6√2
    let c = surd_normalize(BigRational::from_integer(BigInt::from(1)), &BigInt::from(72)).unwrap();
    println!("√72 = {c}");

    let approx = a.to_float(128);
    println!("a ≈ {} (error ≤ {:e})", approx.to_f64(), approx.error_f64());
    println!("{}", serde_json::to_string(&b).unwrap());
}
