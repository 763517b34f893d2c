//! Intersection closure, the brute-force envelope, and the models a Horn
//! envelope must add to a non-Horn theory.

use horn_envelope::harness::render_rule;
use horn_envelope::logic::{
    closure, envelope_bruteforce, is_intersection_closed, make_horn, models_of, Model, ModelSet, VariableUniverse,
};
use horn_envelope::text::{parse_formula, parse_models};

fn fmt(u: &VariableUniverse, m: &Model) -> String {
    format!("{{{}}}", u.names_in(m).collect::<Vec<_>>().join(","))
}

fn show<'a>(label: &str, u: &VariableUniverse, set: impl IntoIterator<Item = &'a Model>) {
    let items: Vec<String> = set.into_iter().map(|m| fmt(u, m)).collect();
    println!("{label:<22} {}", items.join(" "));
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (u, phi) = parse_formula("vars: a b c d\na ->\n-> b c\n")?;
    let models = models_of(&phi)?;
    let env = envelope_bruteforce(&phi)?;
    show("models(phi)", &u, models.iter());
    show("closure", &u, env.iter());
    show("added by the envelope", &u, env.difference(&models));
    println!("models closed under intersection: {}", is_intersection_closed(&models));
    println!("envelope closed under intersection: {}", is_intersection_closed(&env));

    // Every added model is an intersection of models of phi, so the
    // strongest metaclause it falsifies has an empty consequent: no Horn
    // clause can exclude it. These are the non-Horn negatives.
    for x in env.difference(&models) {
        let m = make_horn(&models, x);
        println!(
            "make_horn({}) = {}, trivial: {}",
            fmt(&u, x),
            render_rule(&m, &u),
            m.is_trivial()
        );
    }

    let pts = ModelSet::from_models(4, parse_models("a b\na c\nb c\n", &u)?)?;
    let cl = closure(&pts);
    show("points", &u, pts.iter());
    show("their closure", &u, cl.iter());
    println!("closure is idempotent: {}", closure(&cl) == cl);
    Ok(())
}
