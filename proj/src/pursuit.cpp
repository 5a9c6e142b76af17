#include "dcsp/pursuit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace dcsp {

Matrix columns(const Matrix& a, const SupportSet& cols) {
    Matrix out(a.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j] < 0 || cols[j] >= a.cols())
            throw std::invalid_argument("columns: index out of range");
        out.col(static_cast<Eigen::Index>(j)) = a.col(cols[j]);
    }
    return out;
}

SupportSet sorted_union(const SupportSet& a, const SupportSet& b) {
    SupportSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool is_valid_support(const SupportSet& s, int n) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] < 0 || s[i] >= n) return false;
        if (i > 0 && s[i] <= s[i - 1]) return false;
    }
    return true;
}

Vector project_coefficients(const Vector& y, const Matrix& a_sub) {
    const Eigen::Index m = a_sub.rows();
    const Eigen::Index k = a_sub.cols();
    if (k < 1 || k > m || y.size() != m)
        throw std::invalid_argument("project_coefficients: need M x k with 1 <= k <= M");
    Eigen::ColPivHouseholderQR<Matrix> qr(a_sub);
    // qr.rank() compares |R_ii| against threshold * maxPivot and maxPivot is
    // the largest column norm, so this matches the documented tolerance
    // max(M, k) * eps * (largest column norm).
    qr.setThreshold(static_cast<double>(std::max(m, k)) *
                    std::numeric_limits<double>::epsilon());
    if (qr.rank() < k)
        throw RankDeficientError("project_coefficients: submatrix is numerically rank deficient");
    return qr.solve(y);
}

Vector residual(const Vector& y, const Matrix& a_sub) {
    return y - a_sub * project_coefficients(y, a_sub);
}

SupportSet top_k_indices(const Vector& v, int k) {
    const int n = static_cast<int>(v.size());
    if (k < 1 || k > n) throw std::invalid_argument("top_k_indices: K out of range");
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    // (|v| descending, index ascending) is a strict total order, so the
    // selection is unique and deterministic.
    std::partial_sort(order.begin(), order.begin() + k, order.end(), [&v](int i, int j) {
        const double ai = std::abs(v[i]);
        const double aj = std::abs(v[j]);
        if (ai != aj) return ai > aj;
        return i < j;
    });
    SupportSet out(order.begin(), order.begin() + k);
    std::sort(out.begin(), out.end());
    return out;
}

SupportSet top_k_by_occurrence(const std::vector<int>& pooled, int k) {
    if (k < 1) throw std::invalid_argument("top_k_by_occurrence: K out of range");
    std::map<int, int> counts;  // ordered by index -> stable smallest-index ties
    for (int idx : pooled) {
        if (idx < 0) throw std::invalid_argument("top_k_by_occurrence: negative index");
        ++counts[idx];
    }
    if (static_cast<int>(counts.size()) < k)
        throw std::invalid_argument("top_k_by_occurrence: fewer than K distinct indices");
    std::vector<std::pair<int, int>> items(counts.begin(), counts.end());
    std::stable_sort(items.begin(), items.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    SupportSet out;
    out.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) out.push_back(items[static_cast<std::size_t>(i)].first);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> occurrence_counts(const std::vector<int>& pooled, int n) {
    std::vector<int> counts(static_cast<std::size_t>(n), 0);
    for (int idx : pooled) {
        if (idx < 0 || idx >= n)
            throw std::invalid_argument("occurrence_counts: index out of range");
        ++counts[static_cast<std::size_t>(idx)];
    }
    return counts;
}

SpResult subspace_pursuit(const Vector& y, const Matrix& a, int k, int max_iters) {
    const int m = static_cast<int>(a.rows());
    const int n = static_cast<int>(a.cols());
    if (y.size() != m) throw std::invalid_argument("subspace_pursuit: y/A dimension mismatch");
    if (k < 1 || 2 * k > m || k > n)
        throw std::invalid_argument("subspace_pursuit: need 1 <= K, 2K <= M, K <= N");
    if (max_iters <= 0) max_iters = 3 * k;

    SpResult res;
    SupportSet t = top_k_indices(a.transpose() * y, k);
    Vector r = residual(y, columns(a, t));
    double norm = r.norm();
    res.support = t;
    res.residual_norms.push_back(norm);

    for (int l = 1; l <= max_iters; ++l) {
        res.iterations = l;
        const SupportSet cand = sorted_union(t, top_k_indices(a.transpose() * r, k));
        const Vector coef = project_coefficients(y, columns(a, cand));
        // rank coefficients in candidate-local positions, then map back to
        // global column indices (cand is sorted, so order is preserved)
        const SupportSet local = top_k_indices(coef, k);
        SupportSet omega(local.size());
        for (std::size_t i = 0; i < local.size(); ++i)
            omega[i] = cand[static_cast<std::size_t>(local[i])];
        Vector r_new = residual(y, columns(a, omega));
        const double norm_new = r_new.norm();
        if (norm_new >= norm) break;  // no improvement: keep previous state and stop
        t = std::move(omega);
        r = std::move(r_new);
        norm = norm_new;
        res.support = t;
        res.residual_norms.push_back(norm);
    }
    return res;
}

}  // namespace dcsp
