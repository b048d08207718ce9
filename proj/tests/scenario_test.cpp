#include <cmath>

#include "doctest.h"
#include "helpers.hpp"

#include "cfmimo/rng.hpp"
#include "cfmimo/scenario.hpp"

using namespace cfmimo;

TEST_CASE("drop_topology bounds, cardinality and determinism")
{
    SystemConfig c;
    c.D = 1000.0;
    c.M = 2;
    c.K = 1;
    const Topology a = drop_topology(c, 7);
    REQUIRE(a.aps.size() == 2);
    REQUIRE(a.users.size() == 1);
    for (const auto* set : {&a.aps, &a.users})
        for (const Point& p : *set) {
            CHECK(p.x >= 0.0);
            CHECK(p.x <= 1000.0);
            CHECK(p.y >= 0.0);
            CHECK(p.y <= 1000.0);
        }
    const Topology b = drop_topology(c, 7);
    CHECK(a.aps[1].x == b.aps[1].x);
    CHECK(a.users[0].y == b.users[0].y);

    c.M = 100;
    c.K = 40;
    const Topology big = drop_topology(c, 1);
    CHECK(big.aps.size() == 100);
    CHECK(big.users.size() == 40);

    c.D = 0.0;
    CHECK_THROWS_AS(drop_topology(c, 1), std::invalid_argument);
}

TEST_CASE("path loss three slopes")
{
    const PathLossParams p;
    CHECK(path_loss_db(1000.0, p) == doctest::Approx(-140.7).epsilon(1e-14));
    CHECK(path_loss_db(p.d0_m / 2.0, p) == path_loss_db(p.d0_m, p));

    // Both sides of each breakpoint agree.
    const double inner = -p.loss_db - 15.0 * std::log10(p.d1_m / 1000.0) - 20.0 * std::log10(p.d1_m / 1000.0);
    const double outer = -p.loss_db - 35.0 * std::log10(p.d1_m / 1000.0);
    CHECK(inner == doctest::Approx(outer).epsilon(1e-14));
    CHECK(path_loss_db(std::nextafter(p.d1_m, 1e9), p) == doctest::Approx(path_loss_db(p.d1_m, p)).epsilon(1e-12));
    CHECK(path_loss_db(std::nextafter(p.d0_m, 1e9), p) == doctest::Approx(path_loss_db(p.d0_m, p)).epsilon(1e-12));

    CHECK_THROWS_AS(path_loss_db(0.0, p), std::invalid_argument);
    CHECK_THROWS_AS(path_loss_db(-3.0, p), std::invalid_argument);
}

TEST_CASE("large_scale without shadowing is the path loss")
{
    SystemConfig c;
    c.M = 5;
    c.K = 3;
    PathLossParams p;
    p.sigma_sh_db = 0.0;
    const Topology t = drop_topology(c, 3);
    const BetaMatrix beta = large_scale(t, p, 4);
    for (int m = 0; m < 5; ++m)
        for (int k = 0; k < 3; ++k) {
            const double d = std::hypot(t.aps[m].x - t.users[k].x, t.aps[m].y - t.users[k].y);
            CHECK(beta(m, k) == doctest::Approx(std::pow(10.0, path_loss_db(d, p) / 10.0)).epsilon(1e-14));
        }
}

TEST_CASE("large_scale positivity, determinism and shadowing spread")
{
    SystemConfig c;
    c.M = 100;
    c.K = 40;
    const PathLossParams p;
    const Topology t = drop_topology(c, 11);
    const BetaMatrix a = large_scale(t, p, 12);
    CHECK((a.array() > 0.0).all());
    CHECK(a == large_scale(t, p, 12));

    // One AP/user pair 400 m apart, 10^4 shadowing draws.
    Topology pair;
    pair.aps = {{0.0, 0.0}};
    pair.users = {{400.0, 0.0}};
    double sum = 0.0;
    double sum2 = 0.0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        const double db = 10.0 * std::log10(large_scale(pair, p, 1000 + i)(0, 0));
        sum += db;
        sum2 += db * db;
    }
    const double mean = sum / draws;
    const double var = sum2 / draws - mean * mean;
    CHECK(mean == doctest::Approx(path_loss_db(400.0, p)).epsilon(0.01));
    // Sample variance of a normal: relative standard error sqrt(2/n) ~ 1.4%.
    CHECK(var == doctest::Approx(64.0).epsilon(0.05));

    // No shadowing inside d1.
    pair.users = {{30.0, 0.0}};
    CHECK(large_scale(pair, p, 1)(0, 0) == doctest::Approx(std::pow(10.0, path_loss_db(30.0, p) / 10.0)));
}

TEST_CASE("orthogonal pilots")
{
    const PilotBook b = make_pilots(4, 4, PilotMode::orthogonal, 0);
    CHECK(b.gram2.isApprox(Eigen::MatrixXd::Identity(4, 4)));
    CHECK((b.phi.adjoint() * b.phi).isApprox(Eigen::MatrixXcd::Identity(4, 4)));
    const PilotBook wide = make_pilots(3, 7, PilotMode::orthogonal, 0);
    CHECK((wide.phi.adjoint() * wide.phi).isApprox(Eigen::MatrixXcd::Identity(3, 3)));
    CHECK_THROWS_AS(make_pilots(5, 4, PilotMode::orthogonal, 0), std::invalid_argument);
}

TEST_CASE("random pilots reuse a unitary basis")
{
    const PilotBook b = make_pilots(40, 20, PilotMode::random, 9);
    REQUIRE(b.phi.rows() == 20);
    REQUIRE(b.phi.cols() == 40);
    for (int k = 0; k < 40; ++k)
        CHECK(b.phi.col(k).norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(b.gram2 == b.gram2.transpose());
    const Eigen::MatrixXd measured = (b.phi.adjoint() * b.phi).cwiseAbs2();
    for (int i = 0; i < 40; ++i) {
        CHECK(b.gram2(i, i) == 1.0);
        for (int j = 0; j < 40; ++j) {
            CHECK((b.gram2(i, j) == 0.0 || b.gram2(i, j) == 1.0));
            CHECK(measured(i, j) == doctest::Approx(b.gram2(i, j)).epsilon(1e-12));
        }
    }
    // 40 users on 20 pilots must share.
    CHECK(b.gram2.sum() > 40.0);
    CHECK(make_pilots(40, 20, PilotMode::random, 9).gram2 == b.gram2);
}

TEST_CASE("sample_channel second moment and zero gain")
{
    BetaMatrix beta(2, 2);
    beta << 1.0, 0.25, 0.0, 3.0;
    const int N = 2;
    const int draws = 100000;
    Rng rng(5);
    ChannelRealization ch;
    ch.antennas = N;
    Eigen::MatrixXd power = Eigen::MatrixXd::Zero(2, 2);
    std::complex<double> cross = 0.0;
    for (int i = 0; i < draws; ++i) {
        sample_channel(beta, rng, ch);
        for (int m = 0; m < 2; ++m)
            for (int k = 0; k < 2; ++k)
                power(m, k) += ch.block(m, k).squaredNorm();
        cross += ch.block(0, 0).dot(ch.block(0, 1));
    }
    power /= draws;
    for (int m = 0; m < 2; ++m)
        for (int k = 0; k < 2; ++k) {
            if (beta(m, k) == 0.0) {
                CHECK(power(m, k) == 0.0);
                continue;
            }
            const double ratio = power(m, k) / (N * beta(m, k));
            CHECK(ratio > 0.97);
            CHECK(ratio < 1.03);
        }
    // Independent channels: |mean cross product| within 3 standard errors.
    const double se = std::sqrt(N * beta(0, 0) * beta(0, 1) / draws);
    CHECK(std::abs(cross / static_cast<double>(draws)) < 3.0 * se);

    const ChannelRealization a = sample_channel(beta, N, 77);
    CHECK(a.g == sample_channel(beta, N, 77).g);
    CHECK(a.g != sample_channel(beta, N, 78).g);
    CHECK_THROWS_AS(sample_channel(beta, 0, 1), std::invalid_argument);
}

TEST_CASE("config validation")
{
    SystemConfig c;
    CHECK_NOTHROW(c.validate());
    CHECK(c.tau_f() == 180);
    CHECK(c.p_n == doctest::Approx(6.36e-10).epsilon(0.01));
    CHECK(c.rho() == doctest::Approx(c.rhobar / c.p_n));
    c.tau = 200;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = SystemConfig{};
    c.pilot_mode = PilotMode::orthogonal;
    c.tau = 20;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = SystemConfig{};
    c.K = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("derived seeds separate trials and streams")
{
    CHECK(derive_seed(1, 0, Stream::topology) != derive_seed(1, 1, Stream::topology));
    CHECK(derive_seed(1, 0, Stream::topology) != derive_seed(1, 0, Stream::shadowing));
    CHECK(derive_seed(1, 0, Stream::topology) != derive_seed(2, 0, Stream::topology));
    CHECK(derive_seed(3, 4, Stream::oracle) == derive_seed(3, 4, Stream::oracle));
}
