#include "cfmimo/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cfmimo {
namespace {

/// Diagonal of B_k: N sum_k' q_k' beta_mk' upsilon_mk + (N/rho) r_mk.
Eigen::VectorXd filter_diagonal(int k, const Eigen::VectorXd& load, const RateIngredients& ing, int N, double rho)
{
    const double n = static_cast<double>(N);
    return n * ing.upsilon.col(k).cwiseProduct(load) + (n / rho) * ing.r.col(k);
}

}  // namespace

Eigen::MatrixXd filter_denominator(int k, const PowerVector& q, const RateIngredients& ing, const PilotBook& pilots,
                                   int N, double rho)
{
    const double n = static_cast<double>(N);
    const Eigen::VectorXd load = ing.beta * q;
    Eigen::MatrixXd B = filter_diagonal(k, load, ing, N, rho).asDiagonal();
    for (int kp = 0; kp < ing.users(); ++kp) {
        if (kp == k || !(pilots.gram2(k, kp) > 0.0) || !(q(kp) > 0.0))
            continue;
        const Eigen::VectorXd lam = ing.lambda(k, kp);
        B.noalias() += (n * n * q(kp) * pilots.gram2(k, kp)) * lam * lam.transpose();
    }
    return B;
}

ReceiverWeights receiver_filter(const PowerVector& q, const RateIngredients& ing, const PilotBook& pilots, int N,
                                double rho)
{
    const int M = ing.aps();
    const int K = ing.users();
    if (q.size() != K || pilots.gram2.rows() != K)
        throw std::invalid_argument("receiver_filter: dimension mismatch");
    const double n = static_cast<double>(N);
    const Eigen::VectorXd load = ing.beta * q;

    ReceiverWeights u = ReceiverWeights::Zero(M, K);
    std::vector<int> support;
    support.reserve(static_cast<std::size_t>(M));
    for (int k = 0; k < K; ++k) {
        support.clear();
        for (int m = 0; m < M; ++m)
            if (ing.gamma(m, k) > 0.0)
                support.push_back(m);
        if (support.empty()) {
            u(0, k) = 1.0;
            continue;
        }

        const auto S = static_cast<Eigen::Index>(support.size());
        const Eigen::VectorXd diag = filter_diagonal(k, load, ing, N, rho);
        Eigen::MatrixXd B = Eigen::MatrixXd::Zero(S, S);
        Eigen::VectorXd target(S);
        for (Eigen::Index i = 0; i < S; ++i) {
            B(i, i) = diag(support[static_cast<std::size_t>(i)]);
            target(i) = ing.gamma(support[static_cast<std::size_t>(i)], k);
        }
        bool dense = false;
        Eigen::VectorXd lam(S);
        for (int kp = 0; kp < K; ++kp) {
            if (kp == k || !(pilots.gram2(k, kp) > 0.0) || !(q(kp) > 0.0))
                continue;
            for (Eigen::Index i = 0; i < S; ++i) {
                const int m = support[static_cast<std::size_t>(i)];
                lam(i) = ing.gamma(m, k) * ing.beta(m, kp) / ing.beta(m, k);
            }
            B.selfadjointView<Eigen::Lower>().rankUpdate(lam, n * n * q(kp) * pilots.gram2(k, kp));
            dense = true;
        }

        Eigen::VectorXd x;
        if (!dense) {
            if (!(B.diagonal().array() > 0.0).all())
                throw SingularFilterError(k, "receiver_filter: singular denominator matrix for user " + std::to_string(k));
            x = target.cwiseQuotient(B.diagonal());
        } else {
            Eigen::LLT<Eigen::MatrixXd, Eigen::Lower> llt(B);
            if (llt.info() != Eigen::Success)
                throw SingularFilterError(k, "receiver_filter: singular denominator matrix for user " + std::to_string(k));
            x = llt.solve(target);
        }
        const double norm = x.norm();
        if (!(norm > 0.0) || !std::isfinite(norm))
            throw SingularFilterError(k, "receiver_filter: degenerate filter for user " + std::to_string(k));
        x /= norm;
        if (x.dot(target) < 0.0)
            x = -x;
        for (Eigen::Index i = 0; i < S; ++i)
            u(support[static_cast<std::size_t>(i)], k) = x(i);
    }
    return u;
}

FeasibilityResult feasible_at_t(double t, const PowerCoupling& coupling, double pmax, FixedPointOptions options)
{
    if (!(t >= 0.0))
        throw std::invalid_argument("feasible_at_t: t must be nonnegative");
    const int K = coupling.users();
    FeasibilityResult result;
    result.q = PowerVector::Zero(K);
    if (t == 0.0) {
        result.status = Feasibility::feasible;
        return result;
    }

    // SINR_k >= t  <=>  q_k >= t (sum_{k'!=k} C_kk' q_k' + n_k) / (g_k - t C_kk).
    Eigen::VectorXd margin(K);
    for (int k = 0; k < K; ++k) {
        margin(k) = coupling.gain(k) - t * coupling.coupling(k, k);
        if (!(margin(k) > 0.0)) {
            result.status = Feasibility::infeasible;
            return result;
        }
    }
    Eigen::MatrixXd cross = coupling.coupling;
    cross.diagonal().setZero();
    const Eigen::VectorXd scale = t * margin.cwiseInverse();
    auto interference = [&](const PowerVector& q) -> Eigen::VectorXd {
        return scale.cwiseProduct(cross * q + coupling.noise);
    };

    constexpr double kCertificateSlack = 1e-12;
    PowerVector q = PowerVector::Zero(K);
    PowerVector step = PowerVector::Zero(K);
    for (int it = 1; it <= options.max_iterations; ++it) {
        const PowerVector next = interference(q);
        result.iterations = it;
        if ((next.array() > pmax * (1.0 + kCertificateSlack)).any()) {
            result.status = Feasibility::infeasible;
            return result;
        }
        const PowerVector new_step = next - q;
        q = next;
        if (new_step.maxCoeff() <= options.tolerance * pmax) {
            result.status = Feasibility::feasible;
            result.q = q.cwiseMin(pmax);
            return result;
        }
        // Geometric extrapolation, kept only as a supersolution I(x) <= x.
        if (it % 8 == 0) {
            double ratio = 0.0;
            for (int k = 0; k < K; ++k)
                if (step(k) > 0.0)
                    ratio = std::max(ratio, new_step(k) / step(k));
            if (ratio > 0.0 && ratio < 1.0) {
                const PowerVector x = q + new_step * (ratio / (1.0 - ratio)) * (1.0 + 1e-9);
                if ((x.array() <= pmax).all()) {
                    const PowerVector ix = interference(x);
                    if ((ix.array() <= x.array() * (1.0 + kCertificateSlack)).all()) {
                        result.status = Feasibility::feasible;
                        result.q = x;
                        return result;
                    }
                }
            }
        }
        step = new_step;
    }
    result.status = Feasibility::indeterminate;
    return result;
}

FeasibilityResult feasible_at_t(double t, const ReceiverWeights& u, const RateIngredients& ing,
                                const PilotBook& pilots, int N, double rho, double pmax)
{
    return feasible_at_t(t, power_coupling(u, ing, pilots, N, rho), pmax);
}

PowerAllocation power_allocation(const PowerCoupling& coupling, double pmax, double tol,
                                 const std::optional<PowerVector>& warm_start)
{
    if (!(tol > 0.0))
        throw std::invalid_argument("power_allocation: tol must be positive");
    const int K = coupling.users();

    PowerAllocation best;
    best.q = PowerVector::Constant(K, pmax);
    double lo = coupling.sinr(best.q).minCoeff();
    if (warm_start) {
        const double warm = coupling.sinr(*warm_start).minCoeff();
        if (warm > lo) {
            lo = warm;
            best.q = *warm_start;
        }
    }
    // Every SINR is bounded by its value with the user alone at full power.
    double hi = std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k)
        hi = std::min(hi, coupling.gain(k) * pmax / (coupling.coupling(k, k) * pmax + coupling.noise(k)));
    hi = std::max(hi, lo);

    double best_value = coupling.sinr(best.q).minCoeff();
    while (hi - lo > tol * std::max(lo, std::numeric_limits<double>::min()) && best.bisections < 200) {
        const double mid = 0.5 * (lo + hi);
        ++best.bisections;
        const auto check = feasible_at_t(mid, coupling, pmax);
        if (check.feasible()) {
            lo = mid;
            const double achieved = coupling.sinr(check.q).minCoeff();
            if (achieved > best_value) {
                best_value = achieved;
                best.q = check.q;
            }
        } else {
            hi = mid;
        }
    }
    best.t_star = coupling.sinr(best.q).minCoeff();
    return best;
}

PowerAllocation power_allocation(const ReceiverWeights& u, const RateIngredients& ing, const PilotBook& pilots,
                                 int N, double rho, double pmax, double tol)
{
    return power_allocation(power_coupling(u, ing, pilots, N, rho), pmax, tol);
}

SolverOptions solver_options(const SystemConfig& config)
{
    SolverOptions options;
    options.N = config.N;
    options.rho = config.rho();
    options.pmax = config.pmax;
    options.epsilon = config.epsilon;
    options.max_iters = config.max_iters;
    return options;
}

MaxMinResult maxmin_solve(const RateIngredients& ing, const PilotBook& pilots, const SolverOptions& options)
{
    const int M = ing.aps();
    const int K = ing.users();
    MaxMinResult result;
    result.q = PowerVector::Constant(K, options.pmax);
    result.u = uniform_weights(M, K);
    Eigen::VectorXd previous = sinr_with_weights(result.u, result.q, ing, pilots, options.N, options.rho);
    result.trace.push_back(previous.minCoeff());

    for (int round = 1; round <= options.max_iters; ++round) {
        ReceiverWeights u = receiver_filter(result.q, ing, pilots, options.N, options.rho);
        const Eigen::VectorXd before = sinr_with_weights(result.u, result.q, ing, pilots, options.N, options.rho);
        const Eigen::VectorXd after = sinr_with_weights(u, result.q, ing, pilots, options.N, options.rho);
        for (int k = 0; k < K; ++k)
            if (after(k) < before(k))
                u.col(k) = result.u.col(k);

        const PowerCoupling coupling = power_coupling(u, ing, pilots, options.N, options.rho);
        const PowerAllocation power = power_allocation(coupling, options.pmax, options.bisection_tol, result.q);
        result.u = std::move(u);
        result.q = power.q;
        result.iterations = round;

        const Eigen::VectorXd current = coupling.sinr(result.q);
        result.trace.push_back(current.minCoeff());
        const bool settled = ((current - previous).array() <= options.epsilon).all();
        previous = current;
        if (settled) {
            result.converged = true;
            break;
        }
    }
    result.sinr = previous;
    result.t_star = previous.minCoeff();
    return result;
}

MaxMinResult maxmin_solve(const SystemConfig& config, const BetaMatrix& beta, const GammaMatrix& gamma,
                          const PilotBook& pilots, const Eigen::VectorXd& levels_per_ap)
{
    const RateIngredients ing = rate_ingredients(beta, gamma, config.w_z, levels_per_ap);
    return maxmin_solve(ing, pilots, solver_options(config));
}

MaxMinResult baseline_solve(const RateIngredients& ing, const PilotBook& pilots, const SolverOptions& options)
{
    MaxMinResult result;
    result.u = uniform_weights(ing.aps(), ing.users());
    const PowerCoupling coupling = power_coupling(result.u, ing, pilots, options.N, options.rho);
    result.trace.push_back(coupling.sinr(PowerVector::Constant(ing.users(), options.pmax)).minCoeff());
    const PowerAllocation power = power_allocation(coupling, options.pmax, options.bisection_tol);
    result.q = power.q;
    result.sinr = coupling.sinr(result.q);
    result.t_star = result.sinr.minCoeff();
    result.trace.push_back(result.t_star);
    result.iterations = 1;
    result.converged = true;
    return result;
}

}  // namespace cfmimo
