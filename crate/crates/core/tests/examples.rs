//! Every example must run to completion.

macro_rules! example {
    ($name:ident, $path:literal) => {
        #[path = $path]
        mod $name;

        #[test]
        fn $name() {
            $name::run_example().unwrap();
        }
    };
}

example!(indicial_engine, "../examples/indicial_engine.rs");
example!(poisson_family, "../examples/poisson_family.rs");
example!(gjms_spectrum, "../examples/gjms_spectrum.rs");
example!(scattering_laurent, "../examples/scattering_laurent.rs");
example!(curvature, "../examples/curvature.rs");
example!(transformation_laws, "../examples/transformation_laws.rs");
example!(renormalized_volume, "../examples/renormalized_volume.rs");
example!(defining_function, "../examples/defining_function.rs");
example!(model_identities, "../examples/model_identities.rs");
example!(acceptance_suite, "../examples/acceptance_suite.rs");
