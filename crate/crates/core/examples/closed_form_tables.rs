// Exact closed-form densities for cycles, paths, stars and hypercubes.

use crystal_qwalk::closed_forms::{closed_form_exact, closed_form_table, d_hypercube_exact, ClosedFormFamily};

fn main() {
    for family in [ClosedFormFamily::Cycle(6), ClosedFormFamily::Path(5), ClosedFormFamily::Star(4)] {
        let exact = closed_form_exact(family).unwrap();
        println!("{:?}, first row:", family);
        let row: Vec<String> = exact[0].iter().map(|r| r.to_string()).collect();
        println!("  {}", row.join("  "));
    }

    println!("\nhypercube weights d(0, u) by Hamming weight u:");
    for m in 1..=6u32 {
        let row: Vec<String> = (0..=m).map(|u| d_hypercube_exact(m, u).unwrap().to_string()).collect();
        println!("  m={m}: {}", row.join("  "));
    }

    println!("\ntesseract table (first 6 lines):");
    for line in closed_form_table(ClosedFormFamily::Hypercube(4)).unwrap().lines().take(6) {
        println!("  {line}");
    }
}
