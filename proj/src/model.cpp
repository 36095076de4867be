#include "repair/model.hpp"

#include <algorithm>
#include <cmath>

namespace repair {

PreparedExample prepare_example(const ShortlistContext& ctx, const ClassStats& stats,
                                const SimilarityMatrix* sim, const FeatureConfig& cfg,
                                const FeatureTransform& transform) {
    PreparedExample ex;
    ex.shortlist = ctx.shortlist;
    ex.base_scores = ctx.base_scores;
    ex.true_position = ctx.true_position();
    ex.d = cfg.use_similarity ? 5 : 4;
    if (transform.d() != ex.d) throw DimensionMismatch();
    ex.phi = rival_mean_features(ctx, stats, sim, cfg);
    for (int p = 0; p < ex.k(); ++p) {
        double* row = ex.phi.data() + static_cast<size_t>(p) * ex.d;
        for (int t = 0; t < ex.d; ++t) row[t] = transform.apply(t, row[t]);
    }
    return ex;
}

std::vector<PreparedExample> prepare_examples(std::span<const ShortlistContext> contexts,
                                              const ClassStats& stats, const SimilarityMatrix* sim,
                                              const FeatureConfig& cfg,
                                              const FeatureTransform& transform) {
    std::vector<PreparedExample> out;
    out.reserve(contexts.size());
    for (const auto& ctx : contexts) out.push_back(prepare_example(ctx, stats, sim, cfg, transform));
    return out;
}

double pairwise_correction(const PreparedExample& ex, int y_pos, std::span<const double> theta) {
    if (ex.k() < 2) throw SingletonShortlist();
    if (static_cast<int>(theta.size()) != ex.d) throw DimensionMismatch();
    const double* row = ex.phi_row(y_pos);
    double v = 0.0;
    for (int t = 0; t < ex.d; ++t) v += theta[t] * row[t];
    return v;
}

std::vector<double> rerank_scores(const PreparedExample& ex, const ModelParams& params) {
    if (params.d() != ex.d) throw DimensionMismatch();
    const int k = ex.k();
    std::vector<double> r(k);
    for (int p = 0; p < k; ++p) {
        const ClassId y = ex.shortlist[p];
        if (y < 0 || y >= params.K()) throw DimensionMismatch();
        r[p] = ex.base_scores[p] + params.a[y] + pairwise_correction(ex, p, params.theta);
    }
    return r;
}

std::vector<double> shortlist_softmax(std::span<const double> scores) {
    if (scores.empty()) throw EmptyInput();
    double mx = scores[0];
    for (double s : scores) {
        if (!std::isfinite(s)) throw NonFiniteScore();
        mx = std::max(mx, s);
    }
    std::vector<double> p(scores.size());
    double z = 0.0;
    for (size_t i = 0; i < scores.size(); ++i) {
        p[i] = std::exp(scores[i] - mx);
        z += p[i];
    }
    for (double& v : p) v /= z;
    return p;
}

int argmax_position(std::span<const double> scores, std::span<const ClassId> shortlist) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(scores.size()); ++i) {
        if (scores[i] > scores[best] ||
            (scores[i] == scores[best] && shortlist[i] < shortlist[best]))
            best = i;
    }
    return best;
}

ObjectiveValue objective(std::span<const double> a, std::span<const double> theta,
                         std::span<const PreparedExample> data, double lambda_a,
                         double lambda_theta, FitMode mode) {
    const int K = static_cast<int>(a.size());
    const int d = static_cast<int>(theta.size());
    const bool use_a = mode != FitMode::pw_only;
    const bool use_t = mode != FitMode::cw_only;

    ObjectiveValue out;
    out.grad.assign(static_cast<size_t>(K) + d, 0.0);
    double* ga = out.grad.data();
    double* gt = out.grad.data() + K;

    std::vector<double> r, q;
    for (const auto& ex : data) {
        if (ex.true_position < 0) throw UncoveredExample();
        const int k = ex.k();
        r.resize(k);
        for (int p = 0; p < k; ++p) {
            double v = ex.base_scores[p];
            if (use_a) v += a[ex.shortlist[p]];
            if (use_t) {
                const double* row = ex.phi_row(p);
                for (int t = 0; t < d; ++t) v += theta[t] * row[t];
            }
            r[p] = v;
        }
        double mx = r[0];
        for (double v : r) mx = std::max(mx, v);
        double z = 0.0;
        q.resize(k);
        for (int p = 0; p < k; ++p) {
            q[p] = std::exp(r[p] - mx);
            z += q[p];
        }
        out.value += mx + std::log(z) - r[ex.true_position];
        for (int p = 0; p < k; ++p) {
            const double resid = q[p] / z - (p == ex.true_position ? 1.0 : 0.0);
            if (use_a) ga[ex.shortlist[p]] += resid;
            if (use_t) {
                const double* row = ex.phi_row(p);
                for (int t = 0; t < d; ++t) gt[t] += resid * row[t];
            }
        }
    }
    if (use_a) {
        for (int y = 0; y < K; ++y) {
            out.value += lambda_a * a[y] * a[y];
            ga[y] += 2.0 * lambda_a * a[y];
        }
    }
    if (use_t) {
        for (int t = 0; t < d; ++t) {
            out.value += lambda_theta * theta[t] * theta[t];
            gt[t] += 2.0 * lambda_theta * theta[t];
        }
    }
    return out;
}

ObjectiveValue objective(const ModelParams& params, std::span<const PreparedExample> data) {
    return objective(params.a, params.theta, data, params.lambda_a, params.lambda_theta);
}

namespace {

// Exact Newton steps for the final stretch: full-batch line searches stall
// once the objective's summation noise exceeds the attainable decrease, but
// the gradient stays clean, and the conditional-logit Hessian is cheap to
// assemble at desk scale. Convex objective, so undamped steps with a
// gradient-norm guard suffice.
void newton_polish(std::span<const PreparedExample> data, double lambda_a, double lambda_theta,
                   FitMode mode, int K, int d, double tol, int max_steps,
                   std::vector<double>& a, std::vector<double>& theta, double& grad_norm,
                   int& iterations) {
    const bool use_a = mode != FitMode::pw_only;
    const bool use_t = mode != FitMode::cw_only;
    const int na = use_a ? K : 0;
    const int nt = use_t ? d : 0;
    const int n = na + nt;
    if (n == 0 || n > 2000) return;

    std::vector<double> H(static_cast<size_t>(n) * n), g(n), m(n), step(n), q, r;
    for (int it = 0; it < max_steps; ++it) {
        const ObjectiveValue o = objective(a, theta, data, lambda_a, lambda_theta, mode);
        double gn = 0.0;
        for (int i = 0; i < na; ++i) g[i] = o.grad[i];
        for (int t = 0; t < nt; ++t) g[na + t] = o.grad[K + t];
        for (double v : g) gn += v * v;
        gn = std::sqrt(gn);
        grad_norm = gn;
        if (gn <= tol) return;
        ++iterations;

        std::fill(H.begin(), H.end(), 0.0);
        for (const auto& ex : data) {
            const int k = ex.k();
            r.resize(k);
            for (int p = 0; p < k; ++p) {
                double v = ex.base_scores[p];
                if (use_a) v += a[ex.shortlist[p]];
                if (use_t) {
                    const double* row = ex.phi_row(p);
                    for (int t = 0; t < d; ++t) v += theta[t] * row[t];
                }
                r[p] = v;
            }
            q = shortlist_softmax(r);
            std::fill(m.begin(), m.end(), 0.0);
            for (int p = 0; p < k; ++p) {
                const double qp = q[p];
                const double* row = ex.phi_row(p);
                // sparse jacobian row: one-hot class block + feature block
                if (use_a) {
                    const int ia = ex.shortlist[p];
                    H[static_cast<size_t>(ia) * n + ia] += qp;
                    m[ia] += qp;
                    if (use_t)
                        for (int t = 0; t < d; ++t) {
                            H[static_cast<size_t>(ia) * n + na + t] += qp * row[t];
                            H[static_cast<size_t>(na + t) * n + ia] += qp * row[t];
                        }
                }
                if (use_t)
                    for (int t = 0; t < d; ++t) {
                        m[na + t] += qp * row[t];
                        for (int u = 0; u < d; ++u)
                            H[static_cast<size_t>(na + t) * n + na + u] += qp * row[t] * row[u];
                    }
            }
            for (int i = 0; i < n; ++i) {
                if (m[i] == 0.0) continue;
                const double mi = m[i];
                double* Hi = H.data() + static_cast<size_t>(i) * n;
                for (int j = 0; j < n; ++j) Hi[j] -= mi * m[j];
            }
        }
        for (int i = 0; i < na; ++i) H[static_cast<size_t>(i) * n + i] += 2.0 * lambda_a;
        for (int t = 0; t < nt; ++t)
            H[static_cast<size_t>(na + t) * n + na + t] += 2.0 * lambda_theta;
        for (int i = 0; i < n; ++i) H[static_cast<size_t>(i) * n + i] += 1e-12;

        // Cholesky solve H step = -g
        std::vector<double>& L = H;  // in-place lower factor
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) {
            for (int j = 0; j <= i; ++j) {
                double s = L[static_cast<size_t>(i) * n + j];
                for (int t = 0; t < j; ++t)
                    s -= L[static_cast<size_t>(i) * n + t] * L[static_cast<size_t>(j) * n + t];
                if (i == j) {
                    if (s <= 0.0) {
                        ok = false;
                        break;
                    }
                    L[static_cast<size_t>(i) * n + i] = std::sqrt(s);
                } else {
                    L[static_cast<size_t>(i) * n + j] = s / L[static_cast<size_t>(j) * n + j];
                }
            }
        }
        if (!ok) return;
        std::vector<double> y(n);
        for (int i = 0; i < n; ++i) {
            double s = -g[i];
            for (int t = 0; t < i; ++t) s -= L[static_cast<size_t>(i) * n + t] * y[t];
            y[i] = s / L[static_cast<size_t>(i) * n + i];
        }
        for (int i = n - 1; i >= 0; --i) {
            double s = y[i];
            for (int t = i + 1; t < n; ++t) s -= L[static_cast<size_t>(t) * n + i] * step[t];
            step[i] = s / L[static_cast<size_t>(i) * n + i];
        }

        // gradient-norm guard with halving
        double scale = 1.0;
        bool advanced = false;
        for (int tries = 0; tries < 20; ++tries) {
            std::vector<double> a2 = a, t2 = theta;
            for (int i = 0; i < na; ++i) a2[i] += scale * step[i];
            for (int t = 0; t < nt; ++t) t2[t] += scale * step[na + t];
            const ObjectiveValue o2 = objective(a2, t2, data, lambda_a, lambda_theta, mode);
            double gn2 = 0.0;
            for (int i = 0; i < na; ++i) gn2 += o2.grad[i] * o2.grad[i];
            for (int t = 0; t < nt; ++t) gn2 += o2.grad[K + t] * o2.grad[K + t];
            if (std::isfinite(o2.value) && std::sqrt(gn2) < gn) {
                a.swap(a2);
                theta.swap(t2);
                advanced = true;
                break;
            }
            scale *= 0.5;
        }
        if (!advanced) return;
    }
}

}  // namespace

FitResult fit(std::span<const PreparedExample> calib, int K, double lambda_a, double lambda_theta,
              const FitOptions& opt, FitMode mode, const std::optional<ModelParams>& init) {
    if (calib.empty()) throw EmptyCalibration();
    const int d = calib.front().d;
    const bool use_a = mode != FitMode::pw_only;
    const bool use_t = mode != FitMode::cw_only;
    const int na = use_a ? K : 0;
    const int nt = use_t ? d : 0;

    std::vector<double> x0(static_cast<size_t>(na) + nt, 0.0);
    if (init) {
        if (init->K() != K || init->d() != d) throw DimensionMismatch();
        if (use_a) std::copy(init->a.begin(), init->a.end(), x0.begin());
        if (use_t) std::copy(init->theta.begin(), init->theta.end(), x0.begin() + na);
    }

    std::vector<double> a(K, 0.0), theta(d, 0.0);
    ObjectiveFn fn = [&](const std::vector<double>& x, std::vector<double>& grad) {
        if (use_a) std::copy(x.begin(), x.begin() + na, a.begin());
        if (use_t) std::copy(x.begin() + na, x.end(), theta.begin());
        ObjectiveValue v = objective(a, theta, calib, lambda_a, lambda_theta, mode);
        if (use_a) std::copy(v.grad.begin(), v.grad.begin() + K, grad.begin());
        if (use_t) std::copy(v.grad.begin() + K, v.grad.end(), grad.begin() + na);
        return v.value;
    };

    LbfgsOptions lopt;
    lopt.max_iter = opt.max_iter;
    lopt.grad_tol = opt.tol;
    lopt.memory = opt.memory;
    LbfgsResult r = lbfgs_minimize(fn, std::move(x0), lopt);

    FitResult out;
    out.params.a.assign(K, 0.0);
    out.params.theta.assign(d, 0.0);
    if (use_a) std::copy(r.x.begin(), r.x.begin() + na, out.params.a.begin());
    if (use_t) std::copy(r.x.begin() + na, r.x.end(), out.params.theta.begin());
    out.params.lambda_a = lambda_a;
    out.params.lambda_theta = lambda_theta;
    out.grad_norm = r.grad_norm;
    out.iterations = r.iterations;
    if (r.grad_norm > opt.tol && r.iterations < opt.max_iter)
        newton_polish(calib, lambda_a, lambda_theta, mode, K, d, opt.tol,
                      opt.max_iter - r.iterations, out.params.a, out.params.theta, out.grad_norm,
                      out.iterations);
    out.nll = objective(out.params.a, out.params.theta, calib, lambda_a, lambda_theta, mode).value;
    out.converged = out.grad_norm <= opt.tol;
    return out;
}

}  // namespace repair
