//! Moments, inertia eigen-frames, eigen trees and similarity ranking.

mod eigen;
mod moments;
mod similarity;

pub use eigen::{eigen_frame, eigen_transform, eigen_tree, inertia, jacobi, normalized_moments, EigenFrame, SIGMA_REF};
pub use moments::{center_moments, moments, multi_indices, MomentList, MAX_ORDER};
pub use similarity::similarity_rank;
