use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use nanoent::{
    evolve_schrodinger, negativity, partial_trace_atom, BasisState, DensityMatrix, HilbertSpace, MasterEquation,
    Picture, SpinMode, StateVector,
};
use nanoent_bench::{manifold_hamiltonian, symmetric_params};

fn schrodinger(c: &mut Criterion) {
    let mut group = c.benchmark_group("evolve_schrodinger");
    let times: Vec<f64> = (1..=100).map(|i| 0.1 * i as f64).collect();
    for n in [1, 3, 6] {
        let h = manifold_hamiltonian(n);
        let psi0 = StateVector::basis_state(h.space(), BasisState::new(0, n, 0)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| evolve_schrodinger(&h, black_box(&psi0), &times, 1e-10).unwrap())
        });
    }
    group.finish();
}

fn lindblad_rhs(c: &mut Criterion) {
    let mut group = c.benchmark_group("lindblad_rhs");
    let params = symmetric_params(100).with_decay(0.1);
    for max in [1, 3, 5] {
        let space = Arc::new(HilbertSpace::bounded(1, max));
        let eq = MasterEquation::new(&space, &params, Picture::Interaction, SpinMode::Exact, Default::default())
            .unwrap();
        let rho = DensityMatrix::from_pure(&StateVector::basis_state(&space, BasisState::new(0, max, 0)).unwrap());
        group.bench_with_input(BenchmarkId::from_parameter(space.dim()), &max, |b, _| {
            b.iter(|| eq.rhs(black_box(rho.entries())))
        });
    }
    group.finish();
}

fn negativity_bench(c: &mut Criterion) {
    let mut group = c.benchmark_group("negativity");
    for max in [2, 4, 6] {
        let space = Arc::new(HilbertSpace::bounded(1, max));
        let h = nanoent::hamiltonian(&symmetric_params(100), &space, Picture::Interaction, SpinMode::Exact).unwrap();
        let psi0 = StateVector::basis_state(&space, BasisState::new(0, max, 0)).unwrap();
        let psi = evolve_schrodinger(&h, &psi0, &[1.3], 1e-10).unwrap().states.remove(0);
        let rho = DensityMatrix::from_pure(&psi);
        group.bench_with_input(BenchmarkId::from_parameter(max), &max, |b, _| {
            b.iter(|| negativity(&partial_trace_atom(black_box(&rho))))
        });
    }
    group.finish();
}

criterion_group!(benches, schrodinger, lindblad_rhs, negativity_bench);
criterion_main!(benches);
