#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace dcsp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// A support estimate: strictly increasing, duplicate-free 0-based column
// indices.  External file formats print indices 1-based; everything in
// memory is 0-based.
using SupportSet = std::vector<int>;

// Thrown when a column submatrix is numerically rank deficient and the
// projection it defines is not unique.
struct RankDeficientError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Column gather: A(:, cols) with cols strictly increasing.
Matrix columns(const Matrix& a, const SupportSet& cols);

SupportSet sorted_union(const SupportSet& a, const SupportSet& b);
bool is_valid_support(const SupportSet& s, int n);

// Least-squares coefficients argmin_c ||y - A_sub c||_2, solved by
// column-pivoted Householder QR (never by explicit normal equations).
// Throws RankDeficientError when the numerical rank of A_sub is below its
// column count; the rank tolerance is max(M, k) * eps * (largest column
// norm of A_sub).
Vector project_coefficients(const Vector& y, const Matrix& a_sub);

// Residual y - A_sub * project_coefficients(y, A_sub); orthogonal to the
// span of A_sub up to roundoff.
Vector residual(const Vector& y, const Matrix& a_sub);

// Indices of the K largest |v(i)|, ties broken toward the smallest index;
// the result is sorted ascending.
SupportSet top_k_indices(const Vector& v, int k);

// Majority-vote fusion: the K indices occurring most often in the pooled
// list, ties broken toward the smallest index; sorted ascending.  Throws
// std::invalid_argument when fewer than K distinct indices are present.
SupportSet top_k_by_occurrence(const std::vector<int>& pooled, int k);

// Occurrence tally of pooled indices over index range [0, n): the vote
// count vector.  top_k_by_occurrence(pooled, k) equals
// top_k_indices(counts-as-doubles, k); tests rely on this equivalence.
std::vector<int> occurrence_counts(const std::vector<int>& pooled, int n);

struct SpResult {
    SupportSet support;
    // Residual norm after initialization plus after every accepted
    // iteration; strictly decreasing by construction.
    std::vector<double> residual_norms;
    // Executed refinement iterations including the final rejected one.
    int iterations = 0;
};

// Single-node subspace pursuit for y = A x with |supp(x)| = K.
// Requires 1 <= K, 2K <= M, K <= N.  max_iters <= 0 selects the default
// cap of 3K.
SpResult subspace_pursuit(const Vector& y, const Matrix& a, int k, int max_iters = 0);

}  // namespace dcsp
