//! Holds the `acceptance` test target; run it with
//! `cargo test -p striplab-verification --test acceptance`.
