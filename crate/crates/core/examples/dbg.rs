fn main() {
    let d = freeenergy::determinize(&freeenergy::fixtures::branching_nfa()).unwrap();
    let r = freeenergy::free_energy(&d).unwrap();
    println!("{:#?}", r);
    let r = freeenergy::free_energy_with(
        &d,
        &freeenergy::EnergyOptions {
            form: freeenergy::MatrixForm::Bipartite,
            ..Default::default()
        },
    )
    .unwrap();
    println!("{:?}", r.energy);
}
