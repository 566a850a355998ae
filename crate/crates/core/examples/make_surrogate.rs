//! Regenerate `fixtures/ozone_surrogate.csv`.
//!
//! ```text
//! cargo run -p fbfsel --example make_surrogate > crates/core/fixtures/ozone_surrogate.csv
//! ```

use fbfsel::synth::ozone_surrogate;

fn main() {
    let d = ozone_surrogate(178, 35);
    let mut w = csv::Writer::from_writer(std::io::stdout());
    let mut header = vec!["y".to_string()];
    header.extend(d.names().iter().cloned());
    w.write_record(&header).unwrap();
    for i in 0..d.n() {
        let mut row = vec![d.y()[i].to_string()];
        row.extend((0..d.p()).map(|j| d.x()[(i, j)].to_string()));
        w.write_record(&row).unwrap();
    }
    w.flush().unwrap();
}
