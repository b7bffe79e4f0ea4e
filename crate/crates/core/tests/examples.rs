//! Runs every example's `run` so the examples stay working.

macro_rules! example {
    ($name:ident, $path:literal) => {
        #[path = $path]
        mod $name;

        #[test]
        fn $name() {
            $name::run().expect(concat!($path, " should run"));
        }
    };
}

example!(pnml_load, "../examples/pnml_load.rs");
example!(dynamic_fireset, "../examples/dynamic_fireset.rs");
example!(packed_markings, "../examples/packed_markings.rs");
example!(invariant_bounds, "../examples/invariant_bounds.rs");
example!(ltl_rewrite, "../examples/ltl_rewrite.rs");
example!(buchi_heuristic, "../examples/buchi_heuristic.rs");
example!(model_check, "../examples/model_check.rs");
example!(toggle_bench, "../examples/toggle_bench.rs");
