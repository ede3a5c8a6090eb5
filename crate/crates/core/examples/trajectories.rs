//! The shortest vector along diagonal flows.

use ffdioph::flows::{bounded_scan, traj_delta, FlowVector, ScanVariant};
use ffdioph::parse::{parse_field, parse_vec};

pub fn run_example() -> ffdioph::Result<()> {
    let f3 = parse_field("3")?;
    for s in ["periodic:[X]", "1/X", "liouville:3"] {
        let x = parse_vec(&f3, s, 200)?;
        let row: Vec<String> = (0..8)
            .map(|t| traj_delta(&x, &FlowVector::one_param(1, t)).map(|d| d.to_string()))
            .collect::<ffdioph::Result<_>>()?;
        println!("{s:<14} {}", row.join(" "));
    }

    let x = parse_vec(&f3, "periodic:[X];periodic:[X+1]", 120)?;
    let r = bounded_scan(&x, 6, ScanVariant::Multi)?;
    println!("pair, t_sum <= 6: min delta {} at {}", r.min_delta, r.argmin_t);
    Ok(())
}

fn main() -> ffdioph::Result<()> {
    run_example()
}
