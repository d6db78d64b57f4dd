//! Approximate minimum piercing sets for axis-aligned boxes.
//!
//! A piercing set of boxes is a point set that meets every box. Finding a
//! smallest one is NP-hard already in the plane; this crate implements
//! solvers that get within an `O(log log p)` factor of the optimum `p` in two
//! and three dimensions, plus the data structures they need.
//!
//! | module | contents |
//! |---|---|
//! | [`geom`] | boxes, points, coordinate normalization, verification, the exact solver |
//! | [`range_tree`] | orthogonal range counting and reporting |
//! | [`segtree`] | lazy segment tree with doubling weights |
//! | [`arrangement`] | vertex weights of a box arrangement, weighted vertex sampling |
//! | [`classic`] | greedy on intervals, divide and conquer, independent sets |
//! | [`eps_net`] | weak ε-nets for boxes |
//! | [`mwu`] | the multiplicative-weights solvers |
//! | [`multiround`] | round-limited sampling solvers |
//! | [`dynamic`] | piercing sets of rectangles or squares under updates |
//! | [`harness`] | file formats, generators, the solve/replay/bench drivers |
//!
//! Coordinates inside the solvers are `i64`. [`geom::normalize_instance`]
//! maps real-valued input to even integers that keep the order of all
//! facets, and solutions map back with
//! [`geom::ProblemInstance::denormalize_point`].
//!
//! ```
//! use boxpierce::geom::{normalize_int_boxes, verify_piercing, BoxD};
//! use boxpierce::mwu::{improved_mwu, ImprovedMwuConfig};
//!
//! let boxes = vec![
//!     BoxD::new(vec![0, 0], vec![4, 4]),
//!     BoxD::new(vec![2, 2], vec![6, 6]),
//!     BoxD::new(vec![10, 0], vec![12, 2]),
//! ];
//! let inst = normalize_int_boxes(&boxes).unwrap();
//! let sol = improved_mwu(&inst, &ImprovedMwuConfig::default()).unwrap();
//! assert!(verify_piercing(&inst, &sol.points).is_empty());
//! assert_eq!(sol.size(), 2);
//! ```

pub mod arrangement;
pub mod classic;
pub mod dynamic;
pub mod eps_net;
pub mod error;
pub mod geom;
pub mod harness;
pub mod multiround;
pub mod mwu;
pub mod range_tree;
pub mod rng;
pub mod segtree;
pub mod weight;
