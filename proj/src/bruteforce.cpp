#include "dcsp/bruteforce.hpp"

#include <numeric>
#include <stdexcept>

namespace dcsp {

namespace {

// Advance comb to the next K-combination of {0..n-1} in lexicographic
// order; false once exhausted.
bool next_combination(std::vector<int>& comb, int n) {
    const int k = static_cast<int>(comb.size());
    for (int i = k - 1; i >= 0; --i) {
        if (comb[static_cast<std::size_t>(i)] < n - k + i) {
            ++comb[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < k; ++j)
                comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

double reference_residual_norm(const Vector& y, const Matrix& a_sub) {
    const Matrix gram = a_sub.transpose() * a_sub;
    const Vector coef = gram.ldlt().solve(a_sub.transpose() * y);
    return (y - a_sub * coef).norm();
}

SupportSet exhaustive_min_residual_support(const Vector& y, const Matrix& a, int k) {
    const int n = static_cast<int>(a.cols());
    if (k < 1 || k > n) throw std::invalid_argument("exhaustive search: K out of range");
    std::vector<int> comb(static_cast<std::size_t>(k));
    std::iota(comb.begin(), comb.end(), 0);
    SupportSet best = comb;
    double best_norm = std::numeric_limits<double>::infinity();
    do {
        const double norm = reference_residual_norm(y, columns(a, comb));
        if (norm < best_norm) {  // strict: ties keep the earlier combination
            best_norm = norm;
            best = comb;
        }
    } while (next_combination(comb, n));
    return best;
}

SupportSet exhaustive_min_total_residual_support(const JointSparseProblem& prob) {
    const int n = prob.n;
    const int k = prob.k;
    if (k < 1 || k > n) throw std::invalid_argument("exhaustive search: K out of range");
    std::vector<int> comb(static_cast<std::size_t>(k));
    std::iota(comb.begin(), comb.end(), 0);
    SupportSet best = comb;
    double best_total = std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (int q = 0; q < prob.q_count; ++q)
            total += reference_residual_norm(
                prob.measurements[static_cast<std::size_t>(q)],
                columns(prob.dictionaries[static_cast<std::size_t>(q)], comb));
        if (total < best_total) {
            best_total = total;
            best = comb;
        }
    } while (next_combination(comb, n));
    return best;
}

}  // namespace dcsp
