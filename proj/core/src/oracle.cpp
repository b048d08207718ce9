#include "cfmimo/oracle.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "cfmimo/parallel.hpp"
#include "cfmimo/rng.hpp"

namespace cfmimo {
namespace {

using cd = std::complex<double>;

struct UserAccumulator {
    cd sum_x{};
    double sum_x2 = 0.0;
    std::vector<double> iui2;
    double tn2 = 0.0;
    double tqe2 = 0.0;
    std::vector<double> parts2;
    double r2 = 0.0;
    cd r_s{};
    Eigen::MatrixXcd gram;

    UserAccumulator(int K, int parts, int terms)
        : iui2(static_cast<std::size_t>(K), 0.0), parts2(static_cast<std::size_t>(parts), 0.0),
          gram(Eigen::MatrixXcd::Zero(terms, terms))
    {
    }

    void merge(const UserAccumulator& o)
    {
        sum_x += o.sum_x;
        sum_x2 += o.sum_x2;
        for (std::size_t i = 0; i < iui2.size(); ++i)
            iui2[i] += o.iui2[i];
        tn2 += o.tn2;
        tqe2 += o.tqe2;
        for (std::size_t i = 0; i < parts2.size(); ++i)
            parts2[i] += o.parts2[i];
        r2 += o.r2;
        r_s += o.r_s;
        gram += o.gram;
    }
};

std::vector<std::string> term_names(BackhaulCase case_id, int k, int K)
{
    std::vector<std::string> names{"DS", "BU"};
    for (int kp = 0; kp < K; ++kp)
        if (kp != k)
            names.push_back("IUI_" + std::to_string(kp));
    names.push_back("TN");
    if (case_id == BackhaulCase::case2) {
        names.push_back("TQE");
    } else {
        for (int kp = 0; kp < K; ++kp)
            names.push_back("TQE_" + std::to_string(kp));
        names.push_back("TQE_g");
        names.push_back("TQE_y");
        names.push_back("TQE_gy");
    }
    return names;
}

void validate(const OracleInstance& in)
{
    const auto M = in.beta.rows();
    const auto K = in.beta.cols();
    if (in.stats.gamma.rows() != M || in.stats.gamma.cols() != K || in.pilots.users() != K || in.q.size() != K ||
        in.u.rows() != M || in.u.cols() != K || in.levels.size() != M || in.N < 1)
        throw std::invalid_argument("oracle: inconsistent instance dimensions");
}

}  // namespace

double EmpiricalTerms::max_cross_correlation() const
{
    double worst = 0.0;
    for (Eigen::Index i = 0; i < correlation.rows(); ++i)
        for (Eigen::Index j = i + 1; j < correlation.cols(); ++j)
            worst = std::max(worst, correlation(i, j));
    return worst;
}

double analytic_sigma_z(const OracleInstance& in, int m, int k)
{
    const double load = in.beta.row(m).dot(in.q);
    const double beta = in.beta(m, k);
    const double gamma = in.stats.gamma(m, k);
    return std::sqrt(static_cast<double>(in.N) * ((2.0 * beta - gamma) * in.rho * load + gamma));
}

OracleInstance make_oracle_instance(const SystemConfig& config, BackhaulCase case_id, std::uint64_t seed)
{
    config.validate();
    OracleInstance in;
    in.N = config.N;
    in.tau = config.tau;
    in.p_p = config.p_p();
    in.rho = config.rho();
    const Topology topo = drop_topology(config, derive_seed(seed, 0, Stream::topology));
    in.beta = large_scale(topo, config.path_loss, derive_seed(seed, 0, Stream::shadowing));
    in.pilots = make_pilots(config.K, config.tau, config.pilot_mode, derive_seed(seed, 0, Stream::pilots));
    in.stats = estimation_stats(in.beta, in.pilots, in.p_p, in.tau);
    in.q = PowerVector::Constant(config.K, config.pmax);
    in.u = uniform_weights(config.M, config.K);
    const int alpha = case_id == BackhaulCase::case1 ? config.alpha1 : config.alpha2;
    in.levels = Eigen::VectorXd::Constant(config.M, levels_from_bits(alpha));
    in.w_y = config.w_y;
    in.w_g = config.w_g;
    in.w_z = config.w_z;
    return in;
}

OracleReport oracle_case(BackhaulCase case_id, const OracleInstance& in, int trials, std::uint64_t seed,
                         unsigned workers)
{
    if (trials < 1)
        throw std::invalid_argument("oracle_case: trials must be >= 1");
    validate(in);
    const int M = static_cast<int>(in.beta.rows());
    const int K = static_cast<int>(in.beta.cols());
    const int N = in.N;
    const bool case1 = case_id == BackhaulCase::case1;
    const int parts = case1 ? K + 3 : 0;
    const int terms = case1 ? 2 * K + 5 : K + 3;
    const double sqrt_rho = std::sqrt(in.rho);

    const Eigen::MatrixXd weights = case1 ? Eigen::MatrixXd::Ones(M, K) : Eigen::MatrixXd(in.u);
    const Eigen::VectorXd load = in.beta * in.q;
    Eigen::VectorXd ds_mean(K);
    for (int k = 0; k < K; ++k)
        ds_mean(k) = sqrt_rho * std::sqrt(in.q(k)) * N * weights.col(k).dot(in.stats.gamma.col(k));

    // Quantizer ranges from the analytic statistics.
    Eigen::MatrixXd sigma_g(M, K);
    Eigen::MatrixXd sigma_z(M, K);
    Eigen::VectorXd sigma_y(M);
    for (int m = 0; m < M; ++m) {
        sigma_y(m) = std::sqrt(in.rho * load(m) + 1.0);
        for (int k = 0; k < K; ++k) {
            sigma_g(m, k) = std::sqrt(in.stats.gamma(m, k));
            sigma_z(m, k) = analytic_sigma_z(in, m, k);
        }
    }

    const int chunks = std::min(trials, 64);
    std::vector<std::vector<UserAccumulator>> partial(static_cast<std::size_t>(chunks));

    parallel_for(static_cast<std::size_t>(chunks), workers, [&](std::size_t chunk) {
        auto& acc = partial[chunk];
        acc.assign(static_cast<std::size_t>(K), UserAccumulator(K, parts, terms));
        const int begin = static_cast<int>(static_cast<long long>(trials) * static_cast<long long>(chunk) / chunks);
        const int end = static_cast<int>(static_cast<long long>(trials) * static_cast<long long>(chunk + 1) / chunks);

        ChannelRealization channel;
        channel.antennas = N;
        ChannelEstimate estimate;
        Eigen::VectorXcd noise(static_cast<Eigen::Index>(M) * N);
        Eigen::VectorXcd received(static_cast<Eigen::Index>(M) * N);
        Eigen::MatrixXcd err_g(static_cast<Eigen::Index>(M) * N, K);
        Eigen::VectorXcd err_y(static_cast<Eigen::Index>(M) * N);
        Eigen::VectorXcd symbols(K);
        Eigen::VectorXcd term(terms);

        for (int trial = begin; trial < end; ++trial) {
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(trial), Stream::oracle));
            sample_channel(in.beta, rng, channel);
            mmse_estimate(channel, in.pilots, in.stats, in.p_p, in.tau, rng, estimate);
            for (int k = 0; k < K; ++k)
                symbols(k) = rng.qpsk();
            for (Eigen::Index i = 0; i < noise.size(); ++i)
                noise(i) = rng.complex_normal();
            Eigen::VectorXcd amplitude(K);
            for (int k = 0; k < K; ++k)
                amplitude(k) = sqrt_rho * std::sqrt(in.q(k)) * symbols(k);
            received = channel.g * amplitude + noise;

            if (case1) {
                for (int m = 0; m < M; ++m) {
                    const QuantizerSpec qy{in.levels(m), in.w_y, sigma_y(m)};
                    for (int n = 0; n < N; ++n) {
                        const auto row = static_cast<Eigen::Index>(m) * N + n;
                        err_y(row) = uniform_quantize(received(row), qy) - received(row);
                    }
                    for (int k = 0; k < K; ++k) {
                        const QuantizerSpec qg{in.levels(m), in.w_g, sigma_g(m, k)};
                        for (int n = 0; n < N; ++n) {
                            const auto row = static_cast<Eigen::Index>(m) * N + n;
                            err_g(row, k) = uniform_quantize(estimate.g(row, k), qg) - estimate.g(row, k);
                        }
                    }
                }
            }

            for (int k = 0; k < K; ++k) {
                auto& a = acc[static_cast<std::size_t>(k)];
                // Per-AP inner products of the estimate with every channel, the noise and the signal.
                cd x{};
                Eigen::VectorXcd cross = Eigen::VectorXcd::Zero(K);
                cd tn{};
                cd tqe{};
                Eigen::VectorXcd tqe_users = Eigen::VectorXcd::Zero(K);
                cd tqe_g{}, tqe_y{}, tqe_gy{};
                for (int m = 0; m < M; ++m) {
                    const double w = weights(m, k);
                    if (w == 0.0)
                        continue;
                    const auto ghat = estimate.block(m, k);
                    const Eigen::Index base = static_cast<Eigen::Index>(m) * N;
                    for (int kp = 0; kp < K; ++kp)
                        cross(kp) += w * ghat.dot(channel.block(m, kp));
                    tn += w * ghat.dot(noise.segment(base, N));
                    if (case1) {
                        const auto eg = err_g.col(k).segment(base, N);
                        for (int kp = 0; kp < K; ++kp)
                            tqe_users(kp) += w * eg.dot(channel.block(m, kp));
                        tqe_g += w * eg.dot(noise.segment(base, N));
                        tqe_y += w * ghat.dot(err_y.segment(base, N));
                        tqe_gy += w * eg.dot(err_y.segment(base, N));
                    } else {
                        const cd z = ghat.dot(received.segment(base, N));
                        const QuantizerSpec qz{in.levels(m), in.w_z, sigma_z(m, k)};
                        tqe += w * (uniform_quantize(z, qz) - z);
                    }
                }
                x = sqrt_rho * std::sqrt(in.q(k)) * cross(k);

                a.sum_x += x;
                a.sum_x2 += std::norm(x);
                cd residual = (x - ds_mean(k)) * symbols(k) + tn;
                int t = 0;
                term(t++) = symbols(k);
                term(t++) = (x - ds_mean(k)) * symbols(k);
                for (int kp = 0; kp < K; ++kp) {
                    if (kp == k)
                        continue;
                    const cd iui = sqrt_rho * std::sqrt(in.q(kp)) * cross(kp);
                    a.iui2[static_cast<std::size_t>(kp)] += std::norm(iui);
                    term(t++) = iui * symbols(kp);
                    residual += iui * symbols(kp);
                }
                a.tn2 += std::norm(tn);
                term(t++) = tn;
                if (case1) {
                    double total = 0.0;
                    for (int kp = 0; kp < K; ++kp) {
                        const cd part = sqrt_rho * std::sqrt(in.q(kp)) * tqe_users(kp);
                        a.parts2[static_cast<std::size_t>(kp)] += std::norm(part);
                        total += std::norm(part);
                        term(t++) = part * symbols(kp);
                        residual += part * symbols(kp);
                    }
                    a.parts2[static_cast<std::size_t>(K)] += std::norm(tqe_g);
                    a.parts2[static_cast<std::size_t>(K + 1)] += std::norm(tqe_y);
                    a.parts2[static_cast<std::size_t>(K + 2)] += std::norm(tqe_gy);
                    total += std::norm(tqe_g) + std::norm(tqe_y) + std::norm(tqe_gy);
                    a.tqe2 += total;
                    term(t++) = tqe_g;
                    term(t++) = tqe_y;
                    term(t++) = tqe_gy;
                    residual += tqe_g + tqe_y + tqe_gy;
                } else {
                    a.tqe2 += std::norm(tqe);
                    term(t++) = tqe;
                    residual += tqe;
                }
                // r_k = DS s_k + residual with DS the closed-form mean.
                const cd r = ds_mean(k) * symbols(k) + residual;
                a.r2 += std::norm(r);
                a.r_s += r * std::conj(symbols(k));
                a.gram.noalias() += term * term.adjoint();
            }
        }
    });

    UserAccumulator zero(K, parts, terms);
    std::vector<UserAccumulator> total(static_cast<std::size_t>(K), zero);
    for (const auto& chunk : partial)
        for (int k = 0; k < K; ++k)
            total[static_cast<std::size_t>(k)].merge(chunk[static_cast<std::size_t>(k)]);

    OracleReport report;
    report.case_id = case_id;
    report.trials = trials;
    const double n = static_cast<double>(trials);
    for (int k = 0; k < K; ++k) {
        const auto& a = total[static_cast<std::size_t>(k)];
        EmpiricalTerms e;
        const cd mean_x = a.sum_x / n;
        e.terms.ds2 = std::norm(mean_x);
        e.terms.bu = a.sum_x2 / n - std::norm(mean_x);
        e.terms.iui.resize(static_cast<std::size_t>(K));
        for (int kp = 0; kp < K; ++kp)
            e.terms.iui[static_cast<std::size_t>(kp)] = a.iui2[static_cast<std::size_t>(kp)] / n;
        e.terms.tn = a.tn2 / n;
        e.terms.tqe = a.tqe2 / n;
        for (double p : a.parts2)
            e.tqe_parts.push_back(p / n);
        // E|r - m s|^2 with m the sample mean of r s^*, |s| = 1.
        const cd m = a.r_s / n;
        e.residual = a.r2 / n - std::norm(m);
        e.term_names = term_names(case_id, k, K);
        e.correlation.resize(terms, terms);
        for (int i = 0; i < terms; ++i)
            for (int j = 0; j < terms; ++j)
                e.correlation(i, j) = std::abs(a.gram(i, j)) / std::sqrt(a.gram(i, i).real() * a.gram(j, j).real());
        report.users.push_back(std::move(e));
    }
    return report;
}

OracleReport oracle_case(BackhaulCase case_id, const SystemConfig& config, int trials, std::uint64_t seed,
                         unsigned workers)
{
    const OracleInstance instance = make_oracle_instance(config, case_id, seed);
    return oracle_case(case_id, instance, trials, seed, workers);
}

}  // namespace cfmimo
