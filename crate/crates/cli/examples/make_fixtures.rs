//! Regenerates the JSON fixtures under `fixtures/`.
//!
//! cargo run -p eotheta-cli --example make_fixtures -- <fixtures dir>

use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use eotheta::dieudonne::standard_module;
use eotheta::json::{module_to_string, section_to_json};
use eotheta::theta::operator::function_section;
use eotheta::theta::{hasse_as_section, FormalModel};
use eotheta::Gf;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "fixtures".into()));
    std::fs::create_dir_all(&dir)?;

    let f2 = Gf::prime(2)?;
    let std32 = standard_module(3, 2, &f2)?;
    std::fs::write(dir.join("standard_3_2.json"), module_to_string(&std32) + "\n")?;

    let f4 = Gf::new(2, 2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let (conj, _) = standard_module(3, 2, &f4)?.random_conjugate(&mut rng);
    std::fs::write(dir.join("conjugate_3_2_f4.json"), module_to_string(&conj) + "\n")?;

    let igusa = FormalModel::igusa(3, 2, 4)?;
    let t1 = function_section(&igusa, igusa.ring().var(0), 0);
    let text = serde_json::to_string_pretty(&section_to_json(&igusa, &t1))?;
    std::fs::write(dir.join("section_igusa_t1.json"), text + "\n")?;

    let model = FormalModel::stratum(4, 2, 3, 3)?;
    let a = hasse_as_section(&model)?;
    let mut j = section_to_json(&model, &a);
    j.terms[0].coeff[0].c = 2;
    let text = serde_json::to_string_pretty(&j)?;
    std::fs::write(dir.join("section_hasse_4_2.json"), text + "\n")?;

    let req = serde_json::json!({
        "p": 3,
        "filtrations": [
            {"kind": "tensor", "factors": [[2, 1], [3, 1]]},
            {"kind": "dual", "sizes": [4, 2]},
            {"kind": "koszul", "dim": 4, "sub": 2, "j": 2},
            {"kind": "sym", "sizes": [2, 1], "j": 2}
        ]
    });
    std::fs::write(dir.join("filt_request.json"), serde_json::to_string_pretty(&req)? + "\n")?;
    Ok(())
}
