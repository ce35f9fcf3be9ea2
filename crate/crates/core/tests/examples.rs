//! Every runnable example, run as a test.

macro_rules! example {
    ($name:ident, $file:literal) => {
        #[path = $file]
        mod $name;

        #[test]
        fn $name() {
            $name::main();
        }
    };
}

example!(classify, "../examples/classify.rs");
example!(reduce, "../examples/reduce.rs");
example!(translate, "../examples/translate.rs");
example!(query, "../examples/query.rs");
example!(paraconsistent, "../examples/paraconsistent.rs");
example!(fixpoint, "../examples/fixpoint.rs");
example!(unfounded, "../examples/unfounded.rs");
example!(strategies, "../examples/strategies.rs");
example!(model, "../examples/model.rs");
