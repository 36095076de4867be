// Test-only oracles kept independent of the library's optimization path:
// central finite differences for gradients and a dense grid search for tiny
// conditional-logit instances.
#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "repair/model.hpp"

namespace repair::testing {

// Central finite differences of the penalized objective at (a, theta).
inline std::vector<double> fd_gradient(std::span<const PreparedExample> data,
                                       std::vector<double> a, std::vector<double> theta,
                                       double lambda_a, double lambda_theta, double eps = 1e-5) {
    const int K = static_cast<int>(a.size());
    const int d = static_cast<int>(theta.size());
    std::vector<double> g(static_cast<size_t>(K) + d, 0.0);
    auto value = [&]() {
        return objective(a, theta, data, lambda_a, lambda_theta).value;
    };
    for (int i = 0; i < K; ++i) {
        const double keep = a[i];
        a[i] = keep + eps;
        const double hi = value();
        a[i] = keep - eps;
        const double lo = value();
        a[i] = keep;
        g[i] = (hi - lo) / (2.0 * eps);
    }
    for (int t = 0; t < d; ++t) {
        const double keep = theta[t];
        theta[t] = keep + eps;
        const double hi = value();
        theta[t] = keep - eps;
        const double lo = value();
        theta[t] = keep;
        g[K + t] = (hi - lo) / (2.0 * eps);
    }
    return g;
}

inline double rel_error(std::span<const double> a, std::span<const double> b) {
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += b[i] * b[i];
    }
    return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

// Penalized objective of a single-pair instance (every shortlist holds the
// same two classes) as a function of the offset difference e = a_lo - a_hi
// at the minimum-norm gauge a = (e/2, -e/2), plus one shared pairwise weight.
inline double pair_instance_objective(std::span<const PreparedExample> data, double e,
                                      double theta, double lambda_a, double lambda_theta) {
    double v = lambda_a * e * e / 2.0 + lambda_theta * theta * theta;
    for (const auto& ex : data) {
        const int tp = ex.true_position;
        const int rp = 1 - tp;
        const double sign = ex.shortlist[tp] < ex.shortlist[rp] ? 1.0 : -1.0;
        double margin = ex.base_scores[tp] - ex.base_scores[rp] + sign * e;
        if (ex.d == 1) margin += theta * (ex.phi_row(tp)[0] - ex.phi_row(rp)[0]);
        // log(1 + exp(-margin)), stable on both sides
        v += margin > 0 ? std::log1p(std::exp(-margin)) : -margin + std::log1p(std::exp(margin));
    }
    return v;
}

struct GridResult {
    double e = 0.0;
    double theta = 0.0;
    double value = 0.0;
};

// Dense grid at the requested resolution. A coarse pass brackets the
// minimum; the objective is convex, so a full-resolution grid over the
// bracketing window contains the global grid optimum.
inline GridResult grid_search_pair_instance(std::span<const PreparedExample> data, double lambda_a,
                                            double lambda_theta, bool use_theta,
                                            double span = 3.0, double step = 1e-3) {
    auto scan = [&](double e_lo, double e_hi, double t_lo, double t_hi, double h) {
        GridResult best{0, 0, std::numeric_limits<double>::infinity()};
        const auto ne = static_cast<std::int64_t>(std::floor((e_hi - e_lo) / h)) + 1;
        const auto nt =
            use_theta ? static_cast<std::int64_t>(std::floor((t_hi - t_lo) / h)) + 1 : 1;
        for (std::int64_t i = 0; i < ne; ++i) {
            const double e = e_lo + i * h;
            for (std::int64_t j = 0; j < nt; ++j) {
                const double t = use_theta ? t_lo + j * h : 0.0;
                const double v = pair_instance_objective(data, e, t, lambda_a, lambda_theta);
                if (v < best.value) best = {e, t, v};
            }
        }
        return best;
    };
    const double coarse_step = 0.01;
    GridResult c = scan(-span, span, -span, span, coarse_step);
    const double w = 2.0 * coarse_step;
    return scan(c.e - w, c.e + w, c.theta - w, c.theta + w, step);
}

}  // namespace repair::testing
