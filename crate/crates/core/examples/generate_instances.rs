//! The seeded instance families and the text formats.

use edgewalk::instances::{generate, GeneratorSpec, Instance, Kind};
use edgewalk::io;

fn main() -> edgewalk::Result<()> {
    let specs = [
        GeneratorSpec::new(Kind::Bernoulli, 10, 4, 0.3, 1),
        GeneratorSpec::new(Kind::KUniform, 10, 4, 3.0, 1),
        GeneratorSpec::new(Kind::LowDegree, 10, 6, 2.0, 1),
        GeneratorSpec::new(Kind::Singleton, 4, 4, 0.0, 1),
        GeneratorSpec::from_json(r#"{"kind":"matrix-gaussian","n":4,"m":2,"seed":1}"#)?,
    ];
    for spec in &specs {
        println!("# {:?}", spec.kind);
        match generate(spec)? {
            Instance::Sets(sys) => {
                print!("{}", io::format_set_system(&sys));
                println!("max frequency {}", sys.max_frequency());
                assert_eq!(io::parse_set_system(&io::format_set_system(&sys))?, sys);
            }
            Instance::Matrix(rows) => print!("{}", io::format_matrix_csv(&rows)),
        }
    }
    Ok(())
}
