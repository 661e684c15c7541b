//! Columns and first entries conditions, with certificate replay and
//! solutions inside a set.

use ramsey_chains::foundation::{GroundWindow, WindowSet};
use ramsey_chains::rado::{columns_condition, find_kernel_in_set, first_entries_condition, verify_certificate, RationalMatrix};

fn main() -> ramsey_chains::Result<()> {
    let matrices = [
        ("x + y = z", RationalMatrix::from_ints(&[&[1, 1, -1]])?),
        ("x + y + z = 0", RationalMatrix::from_ints(&[&[1, 1, 1]])?),
        ("x + 2y = 4z", RationalMatrix::from_ints(&[&[1, 2, -4]])?),
        ("x - 2y + z = 0", RationalMatrix::from_ints(&[&[1, -2, 1]])?),
    ];
    for (name, m) in &matrices {
        match columns_condition(m)? {
            Some(cert) => println!(
                "{name}: columns condition holds, certificate {} (replays: {})",
                serde_json::to_string(&cert).unwrap(),
                verify_certificate(m, &cert)
            ),
            None => println!("{name}: columns condition fails"),
        }
    }

    let image = RationalMatrix::from_ints(&[&[1, 0], &[1, 1], &[1, 2]])?;
    println!("first entries of the 3-AP image matrix: {:?}", first_entries_condition(&image)?);

    let threes = WindowSet::multiples(GroundWindow::new(200)?, 3)?;
    let x = find_kernel_in_set(&matrices[0].1, &threes, 200);
    println!("x + y = z inside multiples of 3: {x:?}");
    Ok(())
}
