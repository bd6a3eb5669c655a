#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "doctest.h"
#include "sqid/lattice.hpp"
#include "sqid/special.hpp"
#include "sqid/rng.hpp"
#include "sqid/theta.hpp"

using namespace sqid;

namespace {

Eigen::VectorXd random_point(int m, double span, Rng& rng) {
    Eigen::VectorXd y(m);
    for (int i = 0; i < m; ++i) y(i) = span * (rng.uniform() - 0.5);
    return y;
}

// Babai nearest-plane point
Eigen::VectorXi babai(const LatticeSpec& lat, const Eigen::VectorXd& y) {
    const int m = lat.dim;
    const Eigen::VectorXd t = lat.basis_inv * y;
    const Eigen::MatrixXd& R = lat.chol_r;
    Eigen::VectorXi b(m);
    for (int k = m - 1; k >= 0; --k) {
        double acc = 0.0;
        for (int j = k + 1; j < m; ++j) acc += R(k, j) * (b(j) - t(j));
        b(k) = static_cast<int>(std::lround(t(k) - acc / R(k, k)));
    }
    return b;
}

double dist_to(const LatticeSpec& lat, const Eigen::VectorXd& y, const Eigen::VectorXi& b) {
    return (y - lat.basis * b.cast<double>()).norm();
}

}  // namespace

TEST_CASE("leech constants") {
    const LatticeSpec L = LatticeSpec::leech();
    CHECK(std::fabs(L.basis.determinant()) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(L.d_min == 2.0);
    CHECK(L.r_cov == doctest::Approx(std::sqrt(2.0)));
    // no nonzero point below the minimum distance; kissing number at it
    CHECK(count_points_in_shell_enumerated(L, 0.0, 1.99) == BigCount{1});
    CHECK(count_points_in_shell_enumerated(L, 1.99, 2.01) == BigCount{196560});
}

TEST_CASE("leech theta series coefficients") {
    const auto c = leech_theta_coefficients(10);
    CHECK(c[0] == BigCount{1});
    CHECK(c[2] == BigCount{0});
    CHECK(c[4] == BigCount{196560});
    CHECK(c[6] == BigCount{16773120});
    CHECK(c[8] == BigCount{398034000});
    CHECK(c[10] == BigCount{4629381120ULL});
}

TEST_CASE("nearest_point basics") {
    const LatticeSpec z2 = LatticeSpec::zn(2);
    Eigen::VectorXd y(2);
    y << 0.4, -1.6;
    const Eigen::VectorXi b = nearest_point(z2, y);
    CHECK(b(0) == 0);
    CHECK(b(1) == -2);

    const LatticeSpec L = LatticeSpec::leech();
    Rng rng(5);
    for (int t = 0; t < 50; ++t) {
        Eigen::VectorXi want(24);
        for (int i = 0; i < 24; ++i) want(i) = static_cast<int>(rng.next_u64() % 5) - 2;
        const Eigen::VectorXd y2 = L.basis * want.cast<double>();
        CHECK(nearest_point(L, y2) == want);  // a lattice point is its own NN
    }
    Eigen::VectorXd bad(24);
    bad.setZero();
    bad(0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(nearest_point(L, bad), std::domain_error);
}

TEST_CASE("nearest_point dominates Babai and respects the covering radius") {
    const LatticeSpec L = LatticeSpec::leech();
    Rng rng(17);
    for (int t = 0; t < 1000; ++t) {
        const Eigen::VectorXd y = random_point(24, 6.0, rng);
        const double d_nn = dist_to(L, y, nearest_point(L, y));
        CHECK(d_nn <= dist_to(L, y, babai(L, y)) + 1e-12);
        CHECK(d_nn <= L.r_cov * (1.0 + 1e-12));
    }
}

TEST_CASE("nearest_point equals exhaustive search on random 4-dim lattices") {
    Rng rng(23);
    int trials = 0;
    while (trials < 100) {
        Eigen::MatrixXd basis(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) basis(i, j) = 2.0 * rng.uniform() - 1.0;
        if (std::fabs(basis.determinant()) < 0.15) continue;
        ++trials;
        // declared radii only gate the constructor here
        const LatticeSpec lat = LatticeSpec::custom(basis, 1e-3, 1e3);
        Eigen::VectorXi truth(4);
        for (int i = 0; i < 4; ++i) truth(i) = static_cast<int>(rng.next_u64() % 3) - 1;
        Eigen::VectorXd y = lat.basis * truth.cast<double>();
        for (int i = 0; i < 4; ++i) y(i) += 0.2 * (rng.uniform() - 0.5);

        const Eigen::VectorXi got = nearest_point(lat, y);
        double best = pos_inf;
        Eigen::VectorXi best_b(4);
        Eigen::VectorXi b(4);
        for (b(0) = -3; b(0) <= 3; ++b(0))
            for (b(1) = -3; b(1) <= 3; ++b(1))
                for (b(2) = -3; b(2) <= 3; ++b(2))
                    for (b(3) = -3; b(3) <= 3; ++b(3)) {
                        const double d = dist_to(lat, y, b);
                        if (d < best) {
                            best = d;
                            best_b = b;
                        }
                    }
        CHECK(dist_to(lat, y, got) <= best + 1e-12);
    }
}

TEST_CASE("shell counts on Z^2") {
    const LatticeSpec z2 = LatticeSpec::zn(2);
    CHECK(count_points_in_shell(z2, 0.0, 0.0) == BigCount{1});
    // four norm-1 and four norm-sqrt(2) points
    CHECK(count_points_in_shell(z2, 0.5, std::sqrt(2.0)) == BigCount{8});
    CHECK(count_points_in_shell_enumerated(z2, 0.5, std::sqrt(2.0)) == BigCount{8});
    // brute-force over the integer grid for a bigger shell
    const double lo = 1.2, hi = 3.7;
    int want = 0;
    for (int a = -5; a <= 5; ++a)
        for (int b = -5; b <= 5; ++b) {
            const double nrm = std::sqrt(double(a * a + b * b));
            if (nrm >= lo && nrm <= hi) ++want;
        }
    CHECK(count_points_in_shell(z2, lo, hi) == BigCount(want));
    CHECK(count_points_in_shell_enumerated(z2, lo, hi) == BigCount(want));
}

TEST_CASE("theta path agrees with enumeration") {
    const LatticeSpec L = LatticeSpec::leech();
    CHECK(count_points_in_shell(L, 0.0, 2.0) == BigCount{196561});
    CHECK(count_points_in_shell(L, 0.0, 2.0) ==
          count_points_in_shell_enumerated(L, 0.0, 2.0));
    const LatticeSpec z9 = LatticeSpec::zn(9);
    for (double hi : {1.0, 1.8, 2.4}) {
        CHECK(count_points_in_shell(z9, 0.4, hi) ==
              count_points_in_shell_enumerated(z9, 0.4, hi));
    }
}

TEST_CASE("rescale scales all metric quantities") {
    const LatticeSpec L = LatticeSpec::leech();
    const LatticeSpec half = rescale(L, 0.5);
    CHECK(half.d_min == doctest::Approx(1.0));
    CHECK(half.r_cov == doctest::Approx(std::sqrt(2.0) / 2.0));
    CHECK(half.scale == doctest::Approx(0.5));
    const LatticeSpec same = rescale(L, 1.0);
    CHECK(same.basis == L.basis);
    CHECK(same.d_min == L.d_min);
    CHECK_THROWS_AS(rescale(L, 0.0), std::domain_error);
    CHECK_THROWS_AS(rescale(L, -1.0), std::domain_error);

    // counting commutes with scaling
    const LatticeSpec z2 = LatticeSpec::zn(2);
    for (double s : {0.35, 2.0}) {
        const LatticeSpec zs = rescale(z2, s);
        CHECK(count_points_in_shell(zs, s * 0.5, s * 2.5) ==
              count_points_in_shell(z2, 0.5, 2.5));
        CHECK(count_points_in_shell_enumerated(zs, s * 0.5, s * 2.5) ==
              count_points_in_shell_enumerated(z2, 0.5, 2.5));
    }
}

TEST_CASE("shell counts invariant under permutation and sign flips") {
    Eigen::MatrixXd basis(3, 3);
    basis << 1.0, 0.2, 0.1,
             0.0, 0.9, 0.3,
             0.0, 0.0, 1.1;
    const LatticeSpec a = LatticeSpec::custom(basis, 0.5, 2.0);
    Eigen::MatrixXd permuted(3, 3);
    permuted.col(0) = -basis.col(2);
    permuted.col(1) = basis.col(0);
    permuted.col(2) = -basis.col(1);
    const LatticeSpec b = LatticeSpec::custom(permuted, 0.5, 2.0);
    for (double hi : {0.8, 1.5, 2.6}) {
        CHECK(count_points_in_shell(a, 0.2, hi) == count_points_in_shell(b, 0.2, hi));
    }
}

TEST_CASE("enumeration budget is enforced and reported") {
    const LatticeSpec L = LatticeSpec::leech();
    try {
        count_points_in_shell_enumerated(L, 0.0, 2.4, 1000);
        FAIL("expected ResourceError");
    } catch (const ResourceError& e) {
        CHECK(e.budget() == 1000);
    }
}

TEST_CASE("custom lattice file loader") {
    const char* path = "test_lattice_z2.txt";
    {
        std::ofstream out(path);
        out << "2\n1 0\n0 1\n1 0.7071067811865476\n";
    }
    const LatticeSpec lat = load_lattice_file(path);
    CHECK(lat.dim == 2);
    CHECK(lat.d_min == doctest::Approx(1.0));
    Eigen::VectorXd y(2);
    y << 0.4, -1.6;
    CHECK(nearest_point(lat, y)(1) == -2);
    {
        std::ofstream out(path);
        out << "2\n1 0\n0 1\n1 0.2\n";  // r_cov below d_min/2
    }
    CHECK_THROWS_AS(load_lattice_file(path), FormatError);
    std::remove(path);
}

// opt-in: full enumeration of the 16.7M points at squared norm 6
TEST_CASE("leech N6 by enumeration" * doctest::skip(std::getenv("SQID_LONG_TESTS") == nullptr)) {
    const LatticeSpec L = LatticeSpec::leech();
    CHECK(count_points_in_shell_enumerated(L, 2.4, 2.45, 2000000000ULL) ==
          BigCount{16773120});
}
