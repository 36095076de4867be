#include "repair/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "repair/errors.hpp"

namespace repair {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

// Cubic/bisection minimizer of the interpolant on [lo, hi]; falls back to
// the midpoint when the interpolation is ill-conditioned.
double interpolate(double a, double fa, double ga, double b, double fb, double gb) {
    const double d1 = ga + gb - 3.0 * (fa - fb) / (a - b);
    const double disc = d1 * d1 - ga * gb;
    if (disc >= 0.0) {
        const double d2 = std::sqrt(disc) * (b > a ? 1.0 : -1.0);
        const double denom = gb - ga + 2.0 * d2;
        if (denom != 0.0) {
            double t = b - (b - a) * (gb + d2 - d1) / denom;
            const double lo = std::min(a, b), hi = std::max(a, b);
            const double margin = 0.1 * (hi - lo);
            if (std::isfinite(t) && t > lo + margin && t < hi - margin) return t;
        }
    }
    return 0.5 * (a + b);
}

struct Eval1D {
    double f;
    double g;  // directional derivative
};

}  // namespace

LbfgsResult lbfgs_minimize(const ObjectiveFn& f, std::vector<double> x0, const LbfgsOptions& opt) {
    const size_t n = x0.size();
    LbfgsResult res;
    res.x = std::move(x0);

    std::vector<double> grad(n, 0.0), x_new(n), grad_new(n), dir(n);
    double fx = f(res.x, grad);
    if (!std::isfinite(fx)) throw OptimizerDiverged();

    std::deque<std::vector<double>> s_hist, y_hist;
    std::deque<double> rho_hist;

    double f_at_xnew = fx;
    auto phi = [&](double alpha) -> Eval1D {
        for (size_t i = 0; i < n; ++i) x_new[i] = res.x[i] + alpha * dir[i];
        f_at_xnew = f(x_new, grad_new);
        return {f_at_xnew, dot(grad_new, dir)};
    };

    res.grad_norm = norm2(grad);
    for (res.iterations = 0; res.iterations < opt.max_iter; ++res.iterations) {
        if (res.grad_norm <= opt.grad_tol) {
            res.converged = true;
            break;
        }

        // two-loop recursion
        for (size_t i = 0; i < n; ++i) dir[i] = -grad[i];
        const size_t m = s_hist.size();
        std::vector<double> alpha_hist(m);
        for (size_t i = m; i-- > 0;) {
            alpha_hist[i] = rho_hist[i] * dot(s_hist[i], dir);
            for (size_t t = 0; t < n; ++t) dir[t] -= alpha_hist[i] * y_hist[i][t];
        }
        if (m > 0) {
            const double gamma = dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
            for (size_t t = 0; t < n; ++t) dir[t] *= gamma;
        }
        for (size_t i = 0; i < m; ++i) {
            const double beta = rho_hist[i] * dot(y_hist[i], dir);
            for (size_t t = 0; t < n; ++t) dir[t] += (alpha_hist[i] - beta) * s_hist[i][t];
        }

        double dg0 = dot(grad, dir);
        if (!(dg0 < 0.0)) {  // not a descent direction; restart from steepest
            for (size_t i = 0; i < n; ++i) dir[i] = -grad[i];
            dg0 = -dot(grad, grad);
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
        }

        // strong-Wolfe line search (bracket + zoom)
        const double wolfe_c1 = opt.c1 * dg0;
        const double wolfe_c2 = opt.c2 * std::abs(dg0);
        double alpha_prev = 0.0, f_prev = fx, g_prev = dg0;
        double alpha = 1.0;
        bool accepted = false;
        double lo = 0.0, f_lo = fx, g_lo = dg0, hi = -1.0, f_hi = 0.0, g_hi = 0.0;
        int evals = 0;
        for (; evals < opt.max_linesearch; ++evals) {
            Eval1D e = phi(alpha);
            if (!std::isfinite(e.f)) {  // step overshot into non-finite territory
                alpha = 0.5 * (alpha_prev + alpha);
                continue;
            }
            if (e.f > fx + alpha * wolfe_c1 || (evals > 0 && e.f >= f_prev)) {
                lo = alpha_prev; f_lo = f_prev; g_lo = g_prev;
                hi = alpha; f_hi = e.f; g_hi = e.g;
                break;
            }
            if (std::abs(e.g) <= wolfe_c2) {
                accepted = true;
                break;
            }
            if (e.g >= 0.0) {
                lo = alpha; f_lo = e.f; g_lo = e.g;
                hi = alpha_prev; f_hi = f_prev; g_hi = g_prev;
                break;
            }
            alpha_prev = alpha; f_prev = e.f; g_prev = e.g;
            alpha *= 2.0;
        }
        if (!accepted && hi >= 0.0) {
            for (; evals < opt.max_linesearch; ++evals) {  // zoom
                alpha = interpolate(lo, f_lo, g_lo, hi, f_hi, g_hi);
                if (std::abs(hi - lo) < 1e-16 * std::max(1.0, std::abs(lo))) break;
                Eval1D e = phi(alpha);
                if (!std::isfinite(e.f) || e.f > fx + alpha * wolfe_c1 || e.f >= f_lo) {
                    hi = alpha; f_hi = e.f; g_hi = e.g;
                    continue;
                }
                if (std::abs(e.g) <= wolfe_c2) {
                    accepted = true;
                    break;
                }
                if (e.g * (hi - lo) >= 0.0) {
                    hi = lo; f_hi = f_lo; g_hi = g_lo;
                }
                lo = alpha; f_lo = e.f; g_lo = e.g;
            }
        }
        if (!accepted) {
            // take the best sufficient-decrease point found, if any
            if (hi >= 0.0 && f_lo < fx && lo > 0.0) {
                alpha = lo;
                Eval1D e = phi(alpha);
                (void)e;
            } else {
                // The objective is flat at double precision (its rounding
                // noise exceeds the attainable decrease) but the gradient,
                // a direct sum, is far less noisy. Polish by minimizing
                // ||g|| along the quasi-Newton direction: in the quadratic
                // regime g(x + a d) = g + a H d, so one probe at a = 1
                // yields the exact minimizer of ||g||^2 in a.
                bool advanced = false;
                phi(1.0);
                if (std::isfinite(f_at_xnew)) {
                    std::vector<double> hd(n);
                    for (size_t i = 0; i < n; ++i) hd[i] = grad_new[i] - grad[i];
                    const double denom = dot(hd, hd);
                    if (denom > 0.0) {
                        const double astar = -dot(grad, hd) / denom;
                        if (std::isfinite(astar) && astar != 0.0) {
                            phi(astar);
                            if (std::isfinite(f_at_xnew) && norm2(grad_new) < res.grad_norm)
                                advanced = true;
                        }
                    }
                    if (!advanced) {  // fall back to plain halving on ||g||
                        double step = 1.0;
                        for (int tries = 0; tries < 40 && !advanced; ++tries) {
                            phi(step);
                            if (std::isfinite(f_at_xnew) && norm2(grad_new) < res.grad_norm)
                                advanced = true;
                            step *= 0.5;
                        }
                    }
                }
                if (!advanced) break;  // at the gradient noise floor
            }
        }

        // x_new / grad_new hold the accepted point
        std::vector<double> s(n), y(n);
        for (size_t i = 0; i < n; ++i) {
            s[i] = x_new[i] - res.x[i];
            y[i] = grad_new[i] - grad[i];
        }
        const double sy = dot(s, y);
        if (sy > 1e-12 * norm2(s) * norm2(y)) {
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(y));
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > opt.memory) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
        res.x.swap(x_new);
        grad.swap(grad_new);
        fx = f_at_xnew;  // phi's last evaluation is the accepted point
        if (!std::isfinite(fx)) throw OptimizerDiverged();
        res.grad_norm = norm2(grad);
    }
    if (res.grad_norm <= opt.grad_tol) res.converged = true;
    res.fx = fx;
    return res;
}

}  // namespace repair
