#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "skigp/errors.hpp"
#include "skigp/kernels.hpp"
#include "skigp/rng.hpp"
#include "testutil.hpp"

using skigp::Kernel;

TEST_CASE("rbf pointwise values") {
  const Kernel k = Kernel::rbf(1, 1.0);
  const double x0 = 0.0, x1 = 1.0;
  CHECK(k.eval1(x0, x0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(k.eval1(x0, x1) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));

  const Kernel scaled = Kernel::rbf(2, 2.0, 3.0);
  const double a[2] = {0.3, -0.7};
  CHECK(scaled.eval(std::span<const double>(a, 2), std::span<const double>(a, 2)) ==
        doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("spectral mixture reduces to a gaussian when mu=0") {
  // w=1, mu=0, v=1/(4 pi^2)  =>  k(tau) = exp(-tau^2 / 2)
  const double v = 1.0 / (4.0 * M_PI * M_PI);
  const Kernel sm = Kernel::spectral_mixture({1.0}, {0.0}, {v});
  for (double tau : {0.0, 0.25, 1.0, 2.5}) {
    CHECK(sm.eval1(tau, 0.0) == doctest::Approx(std::exp(-0.5 * tau * tau)).epsilon(1e-13));
  }
}

TEST_CASE("eval argument checks") {
  const Kernel k = Kernel::rbf(2, 1.0);
  const double a[1] = {0.0};
  CHECK_THROWS_AS(k.eval(std::span<const double>(a, 1), std::span<const double>(a, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(Kernel::rbf(1, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(Kernel::spectral_mixture({1.0}, {-0.5}, {1.0}), std::invalid_argument);
}

TEST_CASE("eval_matrix basics and PSD spot check") {
  const Kernel k = Kernel::rbf(1, 1.0);
  Eigen::MatrixXd one(1, 1);
  one << 0.0;
  CHECK(k.matrix(one, one)(0, 0) == doctest::Approx(1.0));

  Eigen::MatrixXd two(2, 1);
  two << 0.0, 1.0;
  const Eigen::MatrixXd k2 = k.matrix(two, two);
  CHECK(k2(0, 1) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
  CHECK(k2(1, 0) == k2(0, 1));

  const Eigen::MatrixXd x = testutil::random_points(50, 1, 3.0, 11);
  const Eigen::MatrixXd kx = k.matrix(x, x);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(kx);
  CHECK(es.eigenvalues().minCoeff() >= -1e-10);

  // Larger PSD check relative to the top eigenvalue.
  const Eigen::MatrixXd x2 = testutil::random_points(200, 2, 2.0, 12);
  const Eigen::MatrixXd kprod =
      Kernel::product({Kernel::rbf(1, 1.0), Kernel::rbf(1, 0.5)}).matrix(x2, x2);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2(kprod);
  CHECK(es2.eigenvalues().minCoeff() >= -1e-8 * es2.eigenvalues().maxCoeff());
}

TEST_CASE("symmetry is bitwise, stationarity and product consistency hold") {
  const Kernel sm = Kernel::spectral_mixture({0.5, 0.25}, {0.3, 1.2}, {0.04, 0.5});
  const Kernel prod = Kernel::product({sm, Kernel::rbf(1, 1.7, 2.0)});
  skigp::GaussianSampler rng(7);
  for (int i = 0; i < 1000; ++i) {
    const double x[2] = {3.0 * rng.normal(), 3.0 * rng.normal()};
    const double z[2] = {3.0 * rng.normal(), 3.0 * rng.normal()};
    const double xz = prod.eval(std::span<const double>(x, 2), std::span<const double>(z, 2));
    const double zx = prod.eval(std::span<const double>(z, 2), std::span<const double>(x, 2));
    CHECK(xz == zx);  // exactly, same code path on |tau|

    const double s = rng.normal();
    const double xs[2] = {x[0] + s, x[1] + s};
    const double zs[2] = {z[0] + s, z[1] + s};
    const double shifted =
        prod.eval(std::span<const double>(xs, 2), std::span<const double>(zs, 2));
    CHECK(shifted == doctest::Approx(xz).epsilon(1e-12));

    const double factor_product =
        sm.eval1(x[0], z[0]) * Kernel::rbf(1, 1.7, 2.0).eval1(x[1], z[1]);
    CHECK(std::abs(xz - factor_product) <= 1e-14 * std::max(1.0, std::abs(xz)));
  }
}

TEST_CASE("toeplitz column matches the dense matrix") {
  const Kernel k = Kernel::rbf(1, 1.0);
  const std::vector<double> axis = {0.0, 1.0, 2.0};
  const std::vector<double> col = k.toeplitz_column(axis);
  REQUIRE(col.size() == 3);
  CHECK(col[0] == doctest::Approx(1.0));
  CHECK(col[1] == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
  CHECK(col[2] == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));

  // Reconstructed Toeplitz equals eval_matrix on the grid.
  const int m = 17;
  std::vector<double> grid(m);
  Eigen::MatrixXd pts(m, 1);
  for (int i = 0; i < m; ++i) {
    grid[static_cast<std::size_t>(i)] = -3.0 + 0.37 * i;
    pts(i, 0) = grid[static_cast<std::size_t>(i)];
  }
  const std::vector<double> c = k.toeplitz_column(grid);
  const Eigen::MatrixXd dense = k.matrix(pts, pts);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      CHECK(std::abs(c[static_cast<std::size_t>(std::abs(i - j))] - dense(i, j)) <= 1e-12);
    }
  }

  // Degenerate single-point grid.
  const std::vector<double> single = {4.2};
  CHECK(k.toeplitz_column(single) == std::vector<double>{1.0});

  // Non-equispaced grids are a structure error.
  const std::vector<double> ragged = {0.0, 1.0, 2.5};
  CHECK_THROWS_AS(k.toeplitz_column(ragged), skigp::StructureError);
}

TEST_CASE("hyperparameters round-trip in log space") {
  Kernel k = Kernel::product({Kernel::spectral_mixture({1.0, 2.0}, {0.1, 0.9}, {0.3, 0.7}),
                              Kernel::rbf(1, 2.0, 4.0)});
  CHECK(k.num_hypers() == 8);
  const std::vector<double> raw = k.hypers_raw();
  CHECK(raw[6] == doctest::Approx(std::log(2.0)));

  std::vector<double> bumped = raw;
  for (double& v : bumped) v += 0.25;
  k.set_hypers_raw(bumped);
  CHECK(k.hypers_raw()[3] == doctest::Approx(raw[3] + 0.25));
  CHECK(k.hyper_names().size() == 8);

  std::vector<double> wrong(raw.size() - 1, 0.0);
  CHECK_THROWS_AS(k.set_hypers_raw(wrong), std::invalid_argument);
}

TEST_CASE("axis factors multiply back to the joint kernel") {
  const Kernel k = Kernel::rbf(3, 1.3, 2.5);
  const double x[3] = {0.1, -0.4, 0.8};
  const double z[3] = {-0.2, 0.5, 0.3};
  double prod = 1.0;
  for (int p = 0; p < 3; ++p) prod *= k.axis_factor(p).eval1(x[p], z[p]);
  CHECK(prod == doctest::Approx(k.eval(std::span<const double>(x, 3),
                                       std::span<const double>(z, 3)))
                    .epsilon(1e-13));
}
