#pragma once

#include <functional>
#include <vector>

namespace repair {

// f(x, grad_out) -> value; grad_out has x.size() slots.
using ObjectiveFn = std::function<double(const std::vector<double>&, std::vector<double>&)>;

struct LbfgsOptions {
    int max_iter = 300;
    double grad_tol = 1e-8;  // 2-norm
    int memory = 10;
    int max_linesearch = 60;
    double c1 = 1e-4;  // sufficient decrease
    double c2 = 0.9;   // curvature
};

struct LbfgsResult {
    std::vector<double> x;
    double fx = 0.0;
    double grad_norm = 0.0;
    int iterations = 0;
    bool converged = false;  // grad_norm <= grad_tol
};

// Limited-memory BFGS with a strong-Wolfe bracketing line search.
// Throws OptimizerDiverged if the objective ever evaluates non-finite at
// the accepted iterate.
LbfgsResult lbfgs_minimize(const ObjectiveFn& f, std::vector<double> x0,
                           const LbfgsOptions& opt = {});

}  // namespace repair
