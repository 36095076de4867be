#pragma once

#include <span>
#include <vector>

#include "repair/model.hpp"
#include "repair/types.hpp"

namespace repair {

// g_y - tau * log pi_y per shortlisted class. Throws ZeroPrior when a
// shortlisted class has no training mass.
std::vector<double> logit_adjust(const ShortlistContext& ctx, const ClassStats& stats, double tau);

// g_y / ||w_y||^tau. Requires positive weight norms.
std::vector<double> tau_norm(const ShortlistContext& ctx, const ClassStats& stats, double tau);

enum class TauMethod { logit_adjust, tau_norm };

// Grid value maximizing covered Hit@1 on the calibration contexts; ties go
// to the smallest tau.
double tune_tau(std::span<const ShortlistContext> calib, const ClassStats& stats, TauMethod method,
                std::span<const double> grid);

// Component ablations: the frozen block is pinned to zero and excluded from
// both the optimization and the penalty.
FitResult ablation_fit(std::span<const PreparedExample> calib, int K, FitMode mode,
                       double lambda_a, double lambda_theta, const FitOptions& opt = {});

// Appendix-style default grid for tau tuning.
inline const std::vector<double>& default_tau_grid() {
    static const std::vector<double> g = {0.0, 0.25, 0.5, 0.75, 1.0};
    return g;
}

}  // namespace repair
