//! Generate a synthetic instance and print its JSON document.
//!
//! ```text
//! cargo run --example generate_instance -- wien 60 7
//! ```

use ssbrp::generator::{generate_instance, Family, GeneratorConfig};
use ssbrp::io::write_instance;

fn main() -> ssbrp::Result<()> {
    let mut args = std::env::args().skip(1);
    let family: Family = args.next().as_deref().unwrap_or("palma").parse()?;
    let stations: Option<usize> = args.next().and_then(|s| s.parse().ok());
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);

    let mut config = GeneratorConfig::for_family(family, seed);
    if let Some(n) = stations {
        config.station_count = n;
    }
    let instance = generate_instance(&config)?;

    let surplus = instance.stations().iter().filter(|s| s.imbalance() > 0).count();
    eprintln!(
        "{} stations ({surplus} with surplus), {} damaged bikes, sum |d| = {}",
        instance.stations().len(),
        instance.total_damaged(),
        instance.total_imbalance()
    );
    print!("{}", write_instance(&instance));
    Ok(())
}
