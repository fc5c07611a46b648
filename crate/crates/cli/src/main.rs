//! `mss` — charts and tables for the motivic spectral-sequence calculator.

fn main() -> anyhow::Result<()> {
    // Subcommands land together with the io module; parsing arrives with them.
    eprintln!("mss: not yet wired");
    Ok(())
}
