#include "dcsp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <vector>

#include "dcsp/rng.hpp"

namespace dcsp {

namespace {

constexpr double kNinetyNinePercentMargin = 9.21;  // 2 ln(100), rounded as published

void check_probs(double p1, double p2) {
    if (!(p1 >= 0.0 && p1 <= 1.0 && p2 >= 0.0 && p2 <= 1.0))
        throw std::invalid_argument("vote bound: probabilities must lie in [0, 1]");
}

double log_choose(int n, int i) {
    return std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0);
}

// log Binomial(g, p) pmf at i; -inf when the mass is zero
double log_pmf(int g, int i, double p) {
    constexpr double neg_inf = -std::numeric_limits<double>::infinity();
    if (p == 0.0) return i == 0 ? 0.0 : neg_inf;
    if (p == 1.0) return i == g ? 0.0 : neg_inf;
    return log_choose(g, i) + i * std::log(p) + (g - i) * std::log1p(-p);
}

void kahan_add(double& sum, double& comp, double term) {
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
}

}  // namespace

VoteProbs vote_probs(int k, int n, int k_tilde) {
    if (k < 1 || k >= n) throw std::invalid_argument("vote_probs: need 1 <= K < N");
    if (k_tilde < 1 || k_tilde > k) throw std::invalid_argument("vote_probs: need 1 <= Ktilde <= K");
    VoteProbs p;
    p.p1 = static_cast<double>(k_tilde) / static_cast<double>(k);
    p.p2 = static_cast<double>(k - k_tilde) / static_cast<double>(n - k);
    return p;
}

double hoeffding_lower_bound(int g, double p1, double p2) {
    if (g < 1) throw std::invalid_argument("hoeffding_lower_bound: need g >= 1");
    check_probs(p1, p2);
    if (p1 < p2) throw std::invalid_argument("hoeffding_lower_bound: need p1 >= p2");
    const double gap = p1 - p2;
    return 1.0 - std::exp(-static_cast<double>(g) * gap * gap / 2.0);
}

double sufficient_neighbors(int k, int n, int k_tilde) {
    const VoteProbs p = vote_probs(k, n, k_tilde);
    const double gap = p.p1 - p.p2;
    if (!(gap > 0.0))
        throw std::invalid_argument("sufficient_neighbors: vote margin is not positive");
    return kNinetyNinePercentMargin / (gap * gap);
}

double exact_vote_lower_bound(int g, double p1, double p2) {
    if (g < 1) throw std::invalid_argument("exact_vote_lower_bound: need g >= 1");
    check_probs(p1, p2);
    double total = 0.0, total_comp = 0.0;
    double cdf = 0.0, cdf_comp = 0.0;  // running P(wrong-tally <= i-1)
    for (int i = 1; i <= g; ++i) {
        kahan_add(cdf, cdf_comp, std::exp(log_pmf(g, i - 1, p2)));
        const double cdf_clipped = std::min(cdf, 1.0);
        kahan_add(total, total_comp, std::exp(log_pmf(g, i, p1)) * cdf_clipped);
    }
    if (total > 1.0 + 1e-12 || total < -1e-12)
        throw std::runtime_error("exact_vote_lower_bound: summation left [0, 1]");
    return std::clamp(total, 0.0, 1.0);
}

double initial_capture_bound(double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("initial_capture_bound: need 0 < delta < 1");
    return std::sqrt(8.0 * delta - 8.0 * delta * delta) / (1.0 + delta);
}

double contraction_factor(double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("contraction_factor: need 0 < delta < 1");
    const double one_minus = 1.0 - delta;
    return 2.0 * delta * (1.0 + delta) / (one_minus * one_minus * one_minus);
}

double alpha_decay(const SignalModel& model, int k) {
    if (k < 1) throw std::invalid_argument("alpha_decay: need K >= 1");
    if (model.kind == SignalKind::exponential_decay) {
        if (!(model.p > 0.0)) throw std::invalid_argument("alpha_decay: need p > 0");
        const double p = model.p;
        return std::exp(-p * (k - 1)) *
               std::sqrt((1.0 - std::exp(-2.0 * p)) / (1.0 - std::exp(-2.0 * p * k)));
    }
    if (model.kind == SignalKind::power_law_decay) {
        if (!(model.p > 1.0)) throw std::invalid_argument("alpha_decay: need p > 1");
        double denom = 0.0;
        for (int i = 1; i <= k; ++i)
            denom += std::pow(static_cast<double>(i), -2.0 * model.p);
        return std::pow(static_cast<double>(k), -model.p) / std::sqrt(denom);
    }
    throw std::invalid_argument("alpha_decay: defined for decay signal models only");
}

int iterations_bound(double delta, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("iterations_bound: need 0 < alpha <= 1");
    const double rho = contraction_factor(delta);
    if (!(rho < 1.0))
        throw std::invalid_argument("iterations_bound: contraction factor is not below 1");
    const double num = std::log(alpha * (1.0 + delta) /
                                std::sqrt(8.0 * delta - 8.0 * delta * delta));
    const double ratio = num / std::log(rho);
    if (!(ratio > 1.0)) return 1;
    return static_cast<int>(std::ceil(ratio));
}

std::uint64_t predicted_messages_dcsp(int k, int iterations, const Topology& topo) {
    if (k < 1 || iterations < 0) throw std::invalid_argument("predicted_messages_dcsp: bad args");
    const std::uint64_t links = topo.neighbor_link_count();
    const std::uint64_t uk = static_cast<std::uint64_t>(k);
    const std::uint64_t ul = static_cast<std::uint64_t>(iterations);
    return (uk + uk * ul + ul) * links;
}

std::uint64_t predicted_messages_gdcsp(int n, int k, int iterations, const Topology& topo) {
    if (n < 1 || k < 1 || iterations < 0)
        throw std::invalid_argument("predicted_messages_gdcsp: bad args");
    const std::uint64_t links = topo.neighbor_link_count();
    const std::uint64_t q = static_cast<std::uint64_t>(topo.q_count);
    const std::uint64_t global_pairs = q * (q - 1);
    const std::uint64_t un = static_cast<std::uint64_t>(n);
    const std::uint64_t uk = static_cast<std::uint64_t>(k);
    const std::uint64_t ul = static_cast<std::uint64_t>(iterations);
    return un * links + uk * global_pairs +
           ul * ((un + 2 * uk) * links + (uk + 1) * global_pairs);
}

VoteSimResult simulate_vote_model(int k, int n, int k_tilde, int g, int trials,
                                  std::uint64_t seed, RunMode mode) {
    if (g < 1 || trials < 1) throw std::invalid_argument("simulate_vote_model: bad g/trials");
    vote_probs(k, n, k_tilde);  // validates k, n, k_tilde

    // fixed tracked indices: correct index 0, wrong index k
    std::vector<int> support_pool(static_cast<std::size_t>(k));
    std::iota(support_pool.begin(), support_pool.end(), 0);
    std::vector<int> complement_pool(static_cast<std::size_t>(n - k));
    std::iota(complement_pool.begin(), complement_pool.end(), k);

    std::vector<std::uint8_t> win(static_cast<std::size_t>(trials));
    std::vector<int> bn_sum(static_cast<std::size_t>(trials));
    std::vector<int> bm_sum(static_cast<std::size_t>(trials));
    std::vector<int> bnbm_sum(static_cast<std::size_t>(trials));

    auto run_trial = [&](int t) {
        auto eng = rng::engine(
            rng::derive(seed, rng::Stream::vote_model, static_cast<std::uint64_t>(t)));
        std::vector<int> correct, wrong;
        int alpha_n = 0, alpha_m = 0, both = 0;
        for (int j = 0; j < g; ++j) {
            correct.clear();
            wrong.clear();
            std::sample(support_pool.begin(), support_pool.end(), std::back_inserter(correct),
                        k_tilde, eng);
            std::sample(complement_pool.begin(), complement_pool.end(), std::back_inserter(wrong),
                        k - k_tilde, eng);
            const int bn = std::find(correct.begin(), correct.end(), 0) != correct.end() ? 1 : 0;
            const int bm = std::find(wrong.begin(), wrong.end(), k) != wrong.end() ? 1 : 0;
            alpha_n += bn;
            alpha_m += bm;
            both += bn & bm;
        }
        win[static_cast<std::size_t>(t)] = alpha_n > alpha_m ? 1 : 0;
        bn_sum[static_cast<std::size_t>(t)] = alpha_n;
        bm_sum[static_cast<std::size_t>(t)] = alpha_m;
        bnbm_sum[static_cast<std::size_t>(t)] = both;
    };

    if (mode == RunMode::parallel) {
#pragma omp parallel for schedule(static)
        for (int t = 0; t < trials; ++t) run_trial(t);
    } else {
        for (int t = 0; t < trials; ++t) run_trial(t);
    }

    // aggregate in trial order: integer sums, so order independence is exact
    std::uint64_t wins = 0, bn = 0, bm = 0, bnbm = 0;
    for (int t = 0; t < trials; ++t) {
        wins += win[static_cast<std::size_t>(t)];
        bn += static_cast<std::uint64_t>(bn_sum[static_cast<std::size_t>(t)]);
        bm += static_cast<std::uint64_t>(bm_sum[static_cast<std::size_t>(t)]);
        bnbm += static_cast<std::uint64_t>(bnbm_sum[static_cast<std::size_t>(t)]);
    }
    const double samples = static_cast<double>(trials) * static_cast<double>(g);
    VoteSimResult out;
    out.detect_prob = static_cast<double>(wins) / static_cast<double>(trials);
    const double mean_bn = static_cast<double>(bn) / samples;
    const double mean_bm = static_cast<double>(bm) / samples;
    out.beta_covariance = static_cast<double>(bnbm) / samples - mean_bn * mean_bm;
    return out;
}

void write_analysis_curves(std::ostream& out) {
    char buf[64];
    out << "x,series,y\n";

    struct Regime {
        const char* label;
        double k_tilde_ratio;
        double n_over_k;
    };
    const Regime regimes[] = {
        {"vote_ktilde0.4_n20k", 0.4, 20.0},
        {"vote_ktilde0.4_n10k", 0.4, 10.0},
        {"vote_ktilde0.2_n20k", 0.2, 20.0},
        {"vote_ktilde0.2_n10k", 0.2, 10.0},
    };
    for (const Regime& r : regimes) {
        const double p1 = r.k_tilde_ratio;
        const double p2 = (1.0 - r.k_tilde_ratio) / (r.n_over_k - 1.0);
        for (int g = 1; g <= 50; ++g) {
            std::snprintf(buf, sizeof(buf), "%.6g", exact_vote_lower_bound(g, p1, p2));
            out << g << ',' << r.label << ',' << buf << '\n';
        }
    }

    struct DecaySeries {
        const char* label;
        SignalModel model;
    };
    const DecaySeries series[] = {
        {"iters_exp_p0.3", {SignalKind::exponential_decay, 1.0, 0.3}},
        {"iters_power_p1.5", {SignalKind::power_law_decay, 1.0, 1.5}},
    };
    const int k = 10;
    for (const DecaySeries& s : series) {
        const double alpha = alpha_decay(s.model, k);
        for (int i = 1; i <= 206; ++i) {
            const double delta = static_cast<double>(i) / 1000.0;
            std::snprintf(buf, sizeof(buf), "%.6g", delta);
            out << buf << ',' << s.label << ',' << iterations_bound(delta, alpha) << '\n';
        }
    }
}

}  // namespace dcsp
