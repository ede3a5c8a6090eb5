//! Every example runs to completion.

macro_rules! example {
    ($name:ident, $path:literal) => {
        #[allow(dead_code)]
        #[path = $path]
        mod $name;

        #[test]
        fn $name() {
            $name::run_example().unwrap();
        }
    };
}

example!(field_arith, "../examples/field_arith.rs");
example!(laurent_balls, "../examples/laurent_balls.rs");
example!(continued_fractions, "../examples/continued_fractions.rs");
example!(lattice_reduction, "../examples/lattice_reduction.rs");
example!(trajectories, "../examples/trajectories.rs");
example!(dani_link, "../examples/dani_link.rs");
example!(difference_quotients, "../examples/difference_quotients.rs");
example!(good_functions, "../examples/good_functions.rs");
example!(nondivergence, "../examples/nondivergence.rs");
example!(borel_cantelli, "../examples/borel_cantelli.rs");
