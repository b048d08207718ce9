#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cfmimo/rates.hpp"
#include "cfmimo/scenario.hpp"

namespace cfmimo {

/// Raised when a receiver-filter system matrix is not positive definite.
class SingularFilterError : public std::runtime_error {
public:
    SingularFilterError(int user, const std::string& what) : std::runtime_error(what), user_(user) {}
    int user() const noexcept { return user_; }

private:
    int user_;
};

/// B_k = N^2 sum_{k'!=k} q_k' g2_kk' Lambda Lambda^T + N sum_k' q_k' Upsilon_kk' + (N/rho) R_k.
Eigen::MatrixXd filter_denominator(int k, const PowerVector& q, const RateIngredients& ing, const PilotBook& pilots,
                                   int N, double rho);

/// Per-user maximizer of the generalized Rayleigh quotient. The numerator is
/// rank one, so u_k is proportional to B_k^{-1} Gamma_k on the support of
/// Gamma_k and zero elsewhere. Columns are unit norm with u_k^T Gamma_k >= 0.
ReceiverWeights receiver_filter(const PowerVector& q, const RateIngredients& ing, const PilotBook& pilots, int N,
                                double rho);

enum class Feasibility { feasible, infeasible, indeterminate };

struct FeasibilityResult {
    Feasibility status = Feasibility::indeterminate;
    PowerVector q;  ///< powers meeting every SINR target when feasible
    int iterations = 0;

    bool feasible() const noexcept { return status == Feasibility::feasible; }
};

struct FixedPointOptions {
    int max_iterations = 200000;
    double tolerance = 1e-13;  ///< relative to pmax
};

/// Decides whether 0 <= q <= pmax exists with SINR_k >= t for all k, by the
/// monotone interference-function iteration started at q = 0.
FeasibilityResult feasible_at_t(double t, const PowerCoupling& coupling, double pmax, FixedPointOptions options = {});

FeasibilityResult feasible_at_t(double t, const ReceiverWeights& u, const RateIngredients& ing,
                                const PilotBook& pilots, int N, double rho, double pmax);

struct PowerAllocation {
    PowerVector q;
    double t_star = 0.0;  ///< min_k SINR_k at q
    int bisections = 0;
};

/// Max-min power control for fixed weights by bisection on the common SINR
/// target. `tol` is relative to the target. A warm start that is already
/// feasible raises the lower bracket, so the result never falls below it.
PowerAllocation power_allocation(const PowerCoupling& coupling, double pmax, double tol,
                                 const std::optional<PowerVector>& warm_start = std::nullopt);

PowerAllocation power_allocation(const ReceiverWeights& u, const RateIngredients& ing, const PilotBook& pilots,
                                 int N, double rho, double pmax, double tol);

struct MaxMinResult {
    ReceiverWeights u;
    PowerVector q;
    Eigen::VectorXd sinr;
    double t_star = 0.0;
    int iterations = 0;
    bool converged = false;
    /// trace[0] is the min-SINR at (uniform u, full power); trace[i] follows round i.
    std::vector<double> trace;
};

struct SolverOptions {
    int N = 2;
    double rho = 1.0;
    double pmax = 1.0;
    double epsilon = 1e-4;  ///< absolute per-user SINR improvement
    int max_iters = 50;
    double bisection_tol = 1e-6;
};

SolverOptions solver_options(const SystemConfig& config);

/// Alternates receiver_filter and power_allocation from full power until no
/// user's SINR improves by more than epsilon, or max_iters rounds.
MaxMinResult maxmin_solve(const RateIngredients& ing, const PilotBook& pilots, const SolverOptions& options);

MaxMinResult maxmin_solve(const SystemConfig& config, const BetaMatrix& beta, const GammaMatrix& gamma,
                          const PilotBook& pilots, const Eigen::VectorXd& levels_per_ap);

/// Uniform 1/sqrt(M) weights with max-min power control only.
MaxMinResult baseline_solve(const RateIngredients& ing, const PilotBook& pilots, const SolverOptions& options);

}  // namespace cfmimo
