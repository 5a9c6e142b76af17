#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "dcsp/analysis.hpp"
#include "dcsp/problem.hpp"

using namespace dcsp;

TEST_SUITE("problem generation") {
    TEST_CASE("identical seeds give bit-identical problems") {
        const auto a = make_problem(4, 12, 30, 3, SignalModel{}, 18.0, 777);
        const auto b = make_problem(4, 12, 30, 3, SignalModel{}, 18.0, 777);
        CHECK(a.true_support == b.true_support);
        CHECK(a.noise_variance == b.noise_variance);
        for (int q = 0; q < 4; ++q) {
            CHECK(a.dictionaries[q] == b.dictionaries[q]);
            CHECK(a.signals[q] == b.signals[q]);
            CHECK(a.measurements[q] == b.measurements[q]);
        }
        const auto c = make_problem(4, 12, 30, 3, SignalModel{}, 18.0, 778);
        CHECK(a.true_support != c.true_support);  // overwhelmingly likely under a new seed
    }

    TEST_CASE("per-node substreams differ") {
        const auto dicts = generate_dictionaries(3, 6, 10, 5);
        CHECK(dicts[0] != dicts[1]);
        CHECK(dicts[1] != dicts[2]);
    }

    TEST_CASE("support is sorted, duplicate-free, in range, and uniform") {
        const int n = 20, k = 5;
        int first_index_hits = 0;
        const int draws = 100000;
        for (int t = 0; t < draws; ++t) {
            const SupportSet s = draw_support(n, k, static_cast<std::uint64_t>(t));
            REQUIRE(is_valid_support(s, n));
            REQUIRE(static_cast<int>(s.size()) == k);
            first_index_hits += std::find(s.begin(), s.end(), 0) != s.end() ? 1 : 0;
        }
        // inclusion probability of any fixed index is K/N = 0.25
        CHECK(std::abs(first_index_hits / static_cast<double>(draws) - 0.25) < 0.01);
    }

    TEST_CASE("dictionary entries look standard normal") {
        const auto dicts = generate_dictionaries(1, 1000, 1000, 31);
        const double mean = dicts[0].mean();
        const double var = (dicts[0].array() - mean).square().mean();
        CHECK(std::abs(mean) < 0.01);
        CHECK(std::abs(var - 1.0) < 0.01);
    }

    TEST_CASE("identical-gaussian model copies one draw to every node") {
        const SupportSet support{2, 5, 9};
        const auto xs = generate_signals({SignalKind::identical_gaussian, 0, 0}, support, 5, 12, 3);
        for (int q = 1; q < 5; ++q) CHECK(xs[q] == xs[0]);
        for (int i = 0; i < 12; ++i) {
            const bool on = std::find(support.begin(), support.end(), i) != support.end();
            CHECK((xs[0][i] != 0.0) == on);
        }
    }

    TEST_CASE("independent-gaussian nodes differ") {
        const SupportSet support{0, 3};
        const auto xs = generate_signals(SignalModel{}, support, 3, 8, 9);
        CHECK(xs[0] != xs[1]);
        CHECK(xs[1] != xs[2]);
    }

    TEST_CASE("exponential decay places the exact magnitude profile") {
        const SupportSet support{1, 4, 6, 7};
        const SignalModel model{SignalKind::exponential_decay, 2.0, 0.5};
        const auto xs = generate_signals(model, support, 2, 10, 21);
        for (int q = 0; q < 2; ++q) {
            std::multiset<double> got, want;
            for (int t : support) got.insert(std::abs(xs[q][t]));
            for (int i = 0; i < 4; ++i) want.insert(2.0 * std::exp(-0.5 * i));
            CHECK(got == want);
        }
    }

    TEST_CASE("power-law decay matches its closed-form magnitude ratio") {
        const SignalModel model{SignalKind::power_law_decay, 1.0, 1.5};
        const SupportSet support = draw_support(40, 10, 8);
        const auto xs = generate_signals(model, support, 1, 40, 8);
        double min_mag = std::numeric_limits<double>::infinity();
        for (int t : support) min_mag = std::min(min_mag, std::abs(xs[0][t]));
        const double ratio = min_mag / xs[0].norm();
        CHECK(std::abs(ratio - 0.028897) < 1e-5);
        CHECK(std::abs(ratio - alpha_decay(model, 10)) < 1e-12);
    }

    TEST_CASE("decay parameter validation") {
        const SupportSet support{0, 1};
        CHECK_THROWS_AS(
            (void)generate_signals({SignalKind::power_law_decay, 1.0, 0.9}, support, 1, 5, 1),
            std::invalid_argument);
        CHECK_THROWS_AS(
            (void)generate_signals({SignalKind::exponential_decay, -1.0, 0.5}, support, 1, 5, 1),
            std::invalid_argument);
    }

    TEST_CASE("noise level follows the SNR definition") {
        // Q=1, N=4, x = (0,3,4,0): sigma^2 = 25 / (1 * 4 * 10) = 0.625 at 10 dB
        Vector x(4);
        x << 0, 3, 4, 0;
        const auto [noisy, sigma2] =
            apply_noise({Vector::Zero(4)}, {x}, 10.0, 123);
        CHECK(sigma2 == doctest::Approx(0.625).epsilon(1e-12));
        CHECK(noisy[0] != Vector::Zero(4));
    }

    TEST_CASE("noise-free keeps measurements bit-identical") {
        Vector clean(3);
        clean << 1, 2, 3;
        Vector x(5);
        x << 0, 1, 0, 2, 0;
        const auto [noisy, sigma2] = apply_noise({clean}, {x}, std::nullopt, 5);
        CHECK(sigma2 == 0.0);
        CHECK(noisy[0] == clean);
    }

    TEST_CASE("empirical noise variance matches sigma2 within 3 percent") {
        double sum_sq = 0.0;
        std::uint64_t count = 0;
        double sigma2 = 0.0;
        for (int t = 0; t < 1000; ++t) {
            const auto prob =
                make_problem(2, 50, 60, 5, SignalModel{}, 12.0, static_cast<std::uint64_t>(t));
            sigma2 = prob.noise_variance;
            for (int q = 0; q < 2; ++q) {
                const Vector w = prob.measurements[q] - prob.dictionaries[q] * prob.signals[q];
                sum_sq += w.squaredNorm() / prob.noise_variance;  // normalized per instance
                count += static_cast<std::uint64_t>(w.size());
            }
        }
        CHECK(std::abs(sum_sq / static_cast<double>(count) - 1.0) < 0.03);
        CHECK(sigma2 > 0.0);
    }

    TEST_CASE("measurements reconstruct from stored parts") {
        const auto prob = make_problem(3, 10, 25, 4, SignalModel{}, std::nullopt, 99);
        for (int q = 0; q < 3; ++q)
            CHECK((prob.measurements[q] - prob.dictionaries[q] * prob.signals[q]).norm() == 0.0);
        for (int q = 0; q < 3; ++q)
            for (int i = 0; i < 25; ++i)
                if (prob.signals[q][i] != 0.0)
                    CHECK(std::find(prob.true_support.begin(), prob.true_support.end(), i) !=
                          prob.true_support.end());
    }

    TEST_CASE("problem dump round-trips bit-exactly") {
        const auto prob = make_problem(2, 8, 12, 3, SignalModel{}, 15.0, 2024);
        std::stringstream ss;
        write_problem(prob, ss);
        const auto back = read_problem(ss);
        CHECK(back.q_count == prob.q_count);
        CHECK(back.m == prob.m);
        CHECK(back.n == prob.n);
        CHECK(back.k == prob.k);
        CHECK(back.noise_variance == prob.noise_variance);
        CHECK(back.true_support == prob.true_support);
        for (int q = 0; q < 2; ++q) {
            CHECK(back.dictionaries[q] == prob.dictionaries[q]);
            CHECK(back.signals[q] == prob.signals[q]);
            CHECK(back.measurements[q] == prob.measurements[q]);
        }
    }

    TEST_CASE("dump header is the documented five-field line") {
        const auto prob = make_problem(1, 6, 8, 2, SignalModel{}, std::nullopt, 1);
        std::stringstream ss;
        write_problem(prob, ss);
        std::string header;
        std::getline(ss, header);
        CHECK(header == "1 6 8 2 0");
        std::string support_line;
        std::getline(ss, support_line);
        std::stringstream sup(support_line);
        int idx, count = 0;
        while (sup >> idx) {
            CHECK(idx >= 1);  // file indices are 1-based
            CHECK(idx <= 8);
            ++count;
        }
        CHECK(count == 2);
    }
}
