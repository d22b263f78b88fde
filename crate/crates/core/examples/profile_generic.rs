use germforge_core::reps::generic::generic_representation_certify;
use germforge_core::words::FreeWord;
use std::time::Instant;

fn main() {
    for order in [2usize, 3, 4, 5, 6, 8] {
        let w = FreeWord::generator(0).commutator(&FreeWord::generator(1));
        let t = Instant::now();
        let out = generic_representation_certify(&[w], 3 * order, order, 1, 1_000_000);
        match &out {
            Ok(o) => println!("order {order}: {:?} certs={}", t.elapsed(), o.certificates.len()),
            Err(e) => println!("order {order}: {:?} ERR {e}", t.elapsed()),
        }
    }
}
