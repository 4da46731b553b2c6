use linconfig::matrix::IntMatrix;
use linconfig::system::analyze;
use linconfig::representation::*;
use linconfig::group::FiniteAbelianGroup;

fn main() {
    let m = analyze(&IntMatrix::from_i64(&[&[1, 1, 1]]));
    let rep = general_representation(&m).unwrap();
    let g = FiniteAbelianGroup::cyclic(3);
    let report = verify_representation(&Representation::Structured(rep.clone()), &m.matrix, &g).unwrap();
    println!("i: {:?}", report.cond_i);
    println!("ii: {:?}", report.cond_ii);
    println!("iii: {:?}", report.cond_iii);
    println!("iii' fails: {} / {} ({:?})", report.cond_iii_prime_failures, report.cond_iii_prime_samples, report.cond_iii_prime_witness);
    println!("divisors {:?} column_blocks(first 20) {:?}", rep.divisors, &rep.column_blocks[..rep.column_blocks.len().min(20)]);
}
