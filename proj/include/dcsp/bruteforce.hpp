#pragma once

#include "dcsp/problem.hpp"
#include "dcsp/pursuit.hpp"

namespace dcsp {

// Exhaustive reference searches used to validate the pursuit algorithms.
// They enumerate every K-subset of columns and deliberately solve the
// per-subset least squares through the normal equations (LDLT), a route
// disjoint from the QR path of the production code.

// Residual norm min_c ||y - A_sub c|| via the normal equations.
double reference_residual_norm(const Vector& y, const Matrix& a_sub);

// argmin over all C(N, K) supports of ||resid(y, A(S))||; ties keep the
// lexicographically smallest support.
SupportSet exhaustive_min_residual_support(const Vector& y, const Matrix& a, int k);

// Joint variant: argmin over supports of sum_q ||resid(y_q, A_q(S))||.
SupportSet exhaustive_min_total_residual_support(const JointSparseProblem& prob);

}  // namespace dcsp
