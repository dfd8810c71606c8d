//! Writing seeded random instances to disk and reading them back, the
//! input format of `oa solve` and `oa bench`.
//!
//! cargo run --example generate_instances -- <dir>

use outer_approx::io::{generate_instance, parse_instance, write_instance, GenKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "instances".into());
    std::fs::create_dir_all(&dir)?;
    for seed in 0..5 {
        for (kind, tag, p, n) in [(GenKind::Map, "map", 3, 10), (GenKind::Mkp, "mkp", 3, 20)] {
            let inst = generate_instance(kind, p, n, seed)?;
            let path = format!("{dir}/{tag}_p{p}_n{n}_s{seed}.txt");
            std::fs::write(&path, write_instance(&inst))?;
            assert_eq!(parse_instance(&std::fs::read_to_string(&path)?)?, inst);
            println!("wrote {path}");
        }
    }
    println!("next: oa bench {dir} --time-limits 10,100");
    Ok(())
}
