#include "dcsp/problem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "dcsp/rng.hpp"

namespace dcsp {

SupportSet draw_support(int n, int k, std::uint64_t seed) {
    if (k < 1 || k > n) throw std::invalid_argument("draw_support: need 1 <= K <= N");
    auto eng = rng::engine(rng::derive(seed, rng::Stream::support));
    std::vector<int> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    SupportSet out;
    out.reserve(static_cast<std::size_t>(k));
    // std::sample preserves population order, so the result is sorted
    std::sample(pool.begin(), pool.end(), std::back_inserter(out), k, eng);
    return out;
}

std::vector<Matrix> generate_dictionaries(int q_count, int m, int n, std::uint64_t seed) {
    if (q_count < 1 || m < 1 || n < 1)
        throw std::invalid_argument("generate_dictionaries: bad dimensions");
    std::vector<Matrix> out;
    out.reserve(static_cast<std::size_t>(q_count));
    for (int q = 0; q < q_count; ++q) {
        auto eng = rng::engine(
            rng::derive(seed, rng::Stream::dictionary, static_cast<std::uint64_t>(q)));
        std::normal_distribution<double> normal(0.0, 1.0);
        Matrix a(m, n);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = normal(eng);
        out.push_back(std::move(a));
    }
    return out;
}

namespace {

std::vector<double> decay_magnitudes(const SignalModel& model, int k) {
    std::vector<double> mag(static_cast<std::size_t>(k));
    if (model.kind == SignalKind::exponential_decay) {
        if (!(model.c > 0.0) || !(model.p > 0.0))
            throw std::invalid_argument("generate_signals: exponential decay needs c > 0, p > 0");
        for (int i = 0; i < k; ++i) mag[static_cast<std::size_t>(i)] = model.c * std::exp(-model.p * i);
    } else {
        if (!(model.c > 0.0) || !(model.p > 1.0))
            throw std::invalid_argument("generate_signals: power-law decay needs c > 0, p > 1");
        for (int i = 0; i < k; ++i)
            mag[static_cast<std::size_t>(i)] = model.c * std::pow(static_cast<double>(i + 1), -model.p);
    }
    return mag;
}

}  // namespace

std::vector<Vector> generate_signals(const SignalModel& model, const SupportSet& support,
                                     int q_count, int n, std::uint64_t seed) {
    if (q_count < 1) throw std::invalid_argument("generate_signals: need Q >= 1");
    if (support.empty() || !is_valid_support(support, n))
        throw std::invalid_argument("generate_signals: invalid support");
    const int k = static_cast<int>(support.size());
    std::vector<Vector> out(static_cast<std::size_t>(q_count), Vector::Zero(n));

    switch (model.kind) {
        case SignalKind::independent_gaussian: {
            for (int q = 0; q < q_count; ++q) {
                auto eng = rng::engine(
                    rng::derive(seed, rng::Stream::signal, static_cast<std::uint64_t>(q)));
                std::normal_distribution<double> normal(0.0, 1.0);
                for (int t : support) out[static_cast<std::size_t>(q)][t] = normal(eng);
            }
            break;
        }
        case SignalKind::identical_gaussian: {
            auto eng = rng::engine(rng::derive(seed, rng::Stream::signal, 0));
            std::normal_distribution<double> normal(0.0, 1.0);
            Vector x = Vector::Zero(n);
            for (int t : support) x[t] = normal(eng);
            for (int q = 0; q < q_count; ++q) out[static_cast<std::size_t>(q)] = x;
            break;
        }
        case SignalKind::exponential_decay:
        case SignalKind::power_law_decay: {
            const std::vector<double> mag = decay_magnitudes(model, k);
            for (int q = 0; q < q_count; ++q) {
                auto eng = rng::engine(
                    rng::derive(seed, rng::Stream::signal, static_cast<std::uint64_t>(q)));
                std::vector<int> perm(static_cast<std::size_t>(k));
                std::iota(perm.begin(), perm.end(), 0);
                std::shuffle(perm.begin(), perm.end(), eng);
                std::uniform_int_distribution<int> coin(0, 1);
                for (int i = 0; i < k; ++i) {
                    const double sign = coin(eng) ? 1.0 : -1.0;
                    out[static_cast<std::size_t>(q)][support[static_cast<std::size_t>(i)]] =
                        sign * mag[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
                }
            }
            break;
        }
    }
    return out;
}

std::pair<std::vector<Vector>, double> apply_noise(const std::vector<Vector>& clean,
                                                   const std::vector<Vector>& signals,
                                                   std::optional<double> snr_db,
                                                   std::uint64_t seed) {
    if (clean.empty() || clean.size() != signals.size())
        throw std::invalid_argument("apply_noise: clean/signals size mismatch");
    if (!snr_db) return {clean, 0.0};

    const int q_count = static_cast<int>(clean.size());
    const int n = static_cast<int>(signals[0].size());
    double energy = 0.0;
    for (const Vector& x : signals) energy += x.squaredNorm();
    const double sigma2 = energy / (static_cast<double>(q_count) * static_cast<double>(n) *
                                    std::pow(10.0, *snr_db / 10.0));
    const double sigma = std::sqrt(sigma2);

    std::vector<Vector> noisy = clean;
    for (int q = 0; q < q_count; ++q) {
        auto eng =
            rng::engine(rng::derive(seed, rng::Stream::noise, static_cast<std::uint64_t>(q)));
        std::normal_distribution<double> normal(0.0, sigma);
        Vector& y = noisy[static_cast<std::size_t>(q)];
        for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += normal(eng);
    }
    return {std::move(noisy), sigma2};
}

JointSparseProblem make_problem(int q_count, int m, int n, int k, const SignalModel& model,
                                std::optional<double> snr_db, std::uint64_t seed) {
    JointSparseProblem prob;
    prob.q_count = q_count;
    prob.m = m;
    prob.n = n;
    prob.k = k;
    prob.true_support = draw_support(n, k, seed);
    prob.dictionaries = generate_dictionaries(q_count, m, n, seed);
    prob.signals = generate_signals(model, prob.true_support, q_count, n, seed);
    std::vector<Vector> clean;
    clean.reserve(static_cast<std::size_t>(q_count));
    for (int q = 0; q < q_count; ++q)
        clean.push_back(prob.dictionaries[static_cast<std::size_t>(q)] *
                        prob.signals[static_cast<std::size_t>(q)]);
    auto [noisy, sigma2] = apply_noise(clean, prob.signals, snr_db, seed);
    prob.measurements = std::move(noisy);
    prob.noise_variance = sigma2;
    return prob;
}

namespace {

void write_value(std::ostream& out, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
}

void write_row(std::ostream& out, const double* data, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
        if (i) out << ' ';
        write_value(out, data[i]);
    }
    out << '\n';
}

}  // namespace

void write_problem(const JointSparseProblem& prob, std::ostream& out) {
    out << prob.q_count << ' ' << prob.m << ' ' << prob.n << ' ' << prob.k << ' ';
    write_value(out, prob.noise_variance);
    out << '\n';
    for (std::size_t i = 0; i < prob.true_support.size(); ++i) {
        if (i) out << ' ';
        out << prob.true_support[i] + 1;  // file indices are 1-based
    }
    out << '\n';
    for (int q = 0; q < prob.q_count; ++q) {
        const Matrix& a = prob.dictionaries[static_cast<std::size_t>(q)];
        std::vector<double> row;
        row.reserve(static_cast<std::size_t>(prob.m * prob.n));
        for (int i = 0; i < prob.m; ++i)
            for (int j = 0; j < prob.n; ++j) row.push_back(a(i, j));
        write_row(out, row.data(), row.size());
        const Vector& x = prob.signals[static_cast<std::size_t>(q)];
        write_row(out, x.data(), static_cast<std::size_t>(x.size()));
        const Vector& y = prob.measurements[static_cast<std::size_t>(q)];
        write_row(out, y.data(), static_cast<std::size_t>(y.size()));
    }
}

JointSparseProblem read_problem(std::istream& in) {
    JointSparseProblem prob;
    if (!(in >> prob.q_count >> prob.m >> prob.n >> prob.k >> prob.noise_variance))
        throw std::runtime_error("read_problem: bad header");
    if (prob.q_count < 1 || prob.m < 1 || prob.n < 1 || prob.k < 1 || prob.k > prob.n)
        throw std::runtime_error("read_problem: inconsistent header");
    prob.true_support.resize(static_cast<std::size_t>(prob.k));
    for (int& idx : prob.true_support) {
        if (!(in >> idx)) throw std::runtime_error("read_problem: bad support row");
        --idx;  // back to 0-based
    }
    if (!is_valid_support(prob.true_support, prob.n))
        throw std::runtime_error("read_problem: invalid support row");
    for (int q = 0; q < prob.q_count; ++q) {
        Matrix a(prob.m, prob.n);
        for (int i = 0; i < prob.m; ++i)
            for (int j = 0; j < prob.n; ++j)
                if (!(in >> a(i, j))) throw std::runtime_error("read_problem: bad matrix row");
        prob.dictionaries.push_back(std::move(a));
        Vector x(prob.n);
        for (Eigen::Index i = 0; i < x.size(); ++i)
            if (!(in >> x[i])) throw std::runtime_error("read_problem: bad signal row");
        prob.signals.push_back(std::move(x));
        Vector y(prob.m);
        for (Eigen::Index i = 0; i < y.size(); ++i)
            if (!(in >> y[i])) throw std::runtime_error("read_problem: bad measurement row");
        prob.measurements.push_back(std::move(y));
    }
    return prob;
}

}  // namespace dcsp
