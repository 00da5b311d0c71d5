#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace hwr;

namespace {

struct DenseOp {
  Eigen::MatrixXd M;
  std::size_t rows() const { return static_cast<std::size_t>(M.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(M.cols()); }
  void apply(std::span<const double> x, std::span<double> y) const {
    Eigen::Map<Eigen::VectorXd>(y.data(), M.rows()) = M * oracle::to_eigen(x);
  }
  void apply_transpose(std::span<const double> x, std::span<double> y) const {
    Eigen::Map<Eigen::VectorXd>(y.data(), M.cols()) = M.transpose() * oracle::to_eigen(x);
  }
};

struct Problem {
  std::shared_ptr<const HyperbolicIndexSet> idx;
  DesignMatrix A;
  Eigen::MatrixXd D;
};

Problem random_problem(int m, int d, int n, std::size_t M, oracle::Gen& g) {
  const WaveletBasis b(SplineOrder{m});
  auto idx = std::make_shared<const HyperbolicIndexSet>(build_hyperbolic(d, n));
  SampleSet X;
  X.d = d;
  for (std::size_t i = 0; i < M * static_cast<std::size_t>(d); ++i) X.nodes.push_back(g.torus());
  auto A = assemble(b, idx, X);
  auto D = oracle::to_dense(A);
  return {idx, std::move(A), std::move(D)};
}

// Minimum-norm least squares, which is what LSQR started at zero converges to when D is rank deficient.
Eigen::VectorXd dense_ls(const Eigen::MatrixXd& D, const Eigen::VectorXd& y) { return D.completeOrthogonalDecomposition().solve(y); }

}  // namespace

TEST(Lsqr, Identity) {
  oracle::Gen g(41);
  DenseOp I{Eigen::MatrixXd::Identity(17, 17)};
  std::vector<double> y(17);
  for (auto& v : y) v = g.uniform(-3, 3);
  SolveReport rep;
  const auto a = lsqr(I, y, SolveOptions{}, rep);
  EXPECT_LE(rep.iterations, 2);
  EXPECT_EQ(rep.stop, StopReason::Converged);
  for (std::size_t i = 0; i < y.size(); ++i) EXPECT_NEAR(a[i], y[i], 1e-12);
}

TEST(Lsqr, ZeroRightHandSide) {
  DenseOp I{Eigen::MatrixXd::Identity(4, 4)};
  std::vector<double> y(4, 0.0);
  SolveReport rep;
  const auto a = lsqr(I, y, SolveOptions{}, rep);
  EXPECT_EQ(rep.iterations, 0);
  for (double v : a) EXPECT_EQ(v, 0.0);
}

TEST(Lsqr, ConsistentSystemRecovered) {
  oracle::Gen g(42);
  auto P = random_problem(2, 2, 3, 400, g);
  std::vector<double> astar(P.idx->size());
  for (auto& v : astar) v = g.uniform(-1, 1);
  const auto y = matvec(P.A, astar);
  SolveOptions opts;
  opts.atol = opts.btol = 1e-12;
  opts.max_iter = 500;
  SolveReport rep;
  const auto a = lsqr(DesignOperator{&P.A, {}}, y, opts, rep);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], astar[i], 1e-8);
  EXPECT_LT(rep.residual_norm, 1e-8);
}

TEST(Lsqr, SmallHyperbolicMatchesDenseQr) {
  oracle::Gen g(43);
  auto P = random_problem(2, 2, 1, 40, g);
  ASSERT_EQ(P.D.rows(), 40);
  ASSERT_EQ(P.D.cols(), 12);
  Eigen::VectorXd y(40);
  for (auto& v : y) v = g.uniform(-1, 1);
  SolveReport rep;
  const auto a = lsqr(DesignOperator{&P.A, {}}, oracle::to_vec(y), SolveOptions{}, rep);
  EXPECT_LT((oracle::to_eigen(a) - dense_ls(P.D, y)).norm(), 1e-8);
}

TEST(Lsqr, SeededInstancesMatchDenseQr) {
  oracle::Gen g(44);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = g.integer(1, 4), d = g.integer(1, 3);
    int n = g.integer(0, 5);
    while (count_columns(d, n, SubsetFamily::power_set(d)) > 64) --n;
    const auto N = count_columns(d, n, SubsetFamily::power_set(d));
    auto P = random_problem(m, d, n, static_cast<std::size_t>(4 * N + 10), g);
    Eigen::VectorXd y(P.D.rows());
    for (auto& v : y) v = g.uniform(-1, 1) + std::sin(3.0 * v);
    SolveOptions opts;
    opts.atol = opts.btol = 1e-12;
    opts.max_iter = 1000;
    SolveReport rep;
    const auto a = lsqr(DesignOperator{&P.A, {}}, oracle::to_vec(y), opts, rep);
    const auto ref = dense_ls(P.D, y);
    EXPECT_LT((oracle::to_eigen(a) - ref).norm() / ref.norm(), 1e-7) << "trial " << trial << " m=" << m << " d=" << d << " n=" << n;
  }
}

TEST(Lsqr, ResidualNonincreasingEveryIteration) {
  oracle::Gen g(45);
  for (int trial = 0; trial < 5; ++trial) {
    auto P = random_problem(g.integer(1, 4), 2, 4, 600, g);
    std::vector<double> y(P.A.rows());
    for (auto& v : y) v = g.uniform(-1, 1);
    std::vector<double> true_res, Ax(P.A.rows());
    SolveOptions opts;
    opts.atol = opts.btol = 1e-14;
    SolveReport rep;
    lsqr(DesignOperator{&P.A, {}}, y, opts, rep, [&](int, std::span<const double> x) {
      P.A.apply(x, Ax);
      double s = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) s += (Ax[i] - y[i]) * (Ax[i] - y[i]);
      true_res.push_back(std::sqrt(s));
    });
    ASSERT_EQ(true_res.size(), static_cast<std::size_t>(rep.iterations));
    for (std::size_t t = 1; t < true_res.size(); ++t) EXPECT_LE(true_res[t], true_res[t - 1] * (1 + 1e-12) + 1e-14);
    for (std::size_t t = 1; t < rep.residual_history.size(); ++t)
      EXPECT_LE(rep.residual_history[t], rep.residual_history[t - 1] * (1 + 1e-12));
    EXPECT_GE(rep.residual_norm, 0.0);
    EXPECT_GE(rep.normal_residual_norm, 0.0);
  }
}

TEST(Lsqr, IterationBoundAtLogOversampling) {
  // r* <= 85 for m = 3, d = 2. Relative residual measured on the normal equations.
  oracle::Gen g(46);
  for (int m = 1; m <= 3; ++m)
    for (int d = 1; d <= 2; ++d) {
      const int n = d == 1 ? 8 : 5;
      const auto N = count_columns(d, n, SubsetFamily::power_set(d));
      auto P = random_problem(m, d, n, static_cast<std::size_t>(log_oversampling(N)), g);
      std::vector<double> y(P.A.rows());
      for (std::size_t i = 0; i < y.size(); ++i) y[i] = g.uniform(-1, 1);
      std::vector<double> Aty(N), Ax(P.A.rows()), r(N);
      P.A.apply_transpose(y, Aty);
      const double ref = detail::norm2(Aty);
      int hit = -1;
      SolveOptions opts;
      opts.atol = opts.btol = 1e-14;
      opts.max_iter = 400;
      SolveReport rep;
      lsqr(DesignOperator{&P.A, {}}, y, opts, rep, [&](int it, std::span<const double> x) {
        if (hit >= 0) return;
        P.A.apply(x, Ax);
        for (std::size_t i = 0; i < y.size(); ++i) Ax[i] -= y[i];
        P.A.apply_transpose(Ax, r);
        if (detail::norm2(r) <= 1e-4 * ref) hit = it;
      });
      ASSERT_GT(hit, 0) << "m=" << m << " d=" << d;
      EXPECT_LE(hit, 85) << "m=" << m << " d=" << d;
    }
}

TEST(Lsqr, MaxIterReportedNotThrown) {
  oracle::Gen g(47);
  auto P = random_problem(3, 2, 4, 500, g);
  std::vector<double> y(P.A.rows());
  for (auto& v : y) v = g.uniform(-1, 1);
  SolveOptions opts;
  opts.max_iter = 3;
  SolveReport rep;
  lsqr(DesignOperator{&P.A, {}}, y, opts, rep);
  EXPECT_EQ(rep.stop, StopReason::MaxIter);
  EXPECT_EQ(rep.iterations, 3);
  EXPECT_STREQ(to_string(rep.stop), "max_iter");
}

TEST(Lsqr, DampingShrinksSolution) {
  oracle::Gen g(48);
  auto P = random_problem(2, 1, 4, 60, g);
  Eigen::VectorXd y(P.D.rows());
  for (auto& v : y) v = g.uniform(-1, 1);
  SolveOptions opts;
  opts.damp = 0.7;
  opts.atol = opts.btol = 1e-12;
  opts.max_iter = 500;
  SolveReport rep;
  const auto a = lsqr(DesignOperator{&P.A, {}}, oracle::to_vec(y), opts, rep);
  const Eigen::MatrixXd K = P.D.transpose() * P.D + 0.49 * Eigen::MatrixXd::Identity(P.D.cols(), P.D.cols());
  const Eigen::VectorXd ref = K.ldlt().solve(P.D.transpose() * y);
  EXPECT_LT((oracle::to_eigen(a) - ref).norm(), 1e-8);
}

TEST(Lsqr, Errors) {
  DenseOp I{Eigen::MatrixXd::Identity(3, 3)};
  SolveReport rep;
  std::vector<double> y{1.0, std::nan(""), 0.0};
  try {
    lsqr(I, y, SolveOptions{}, rep);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NonFiniteInput);
  }
  std::vector<double> short_y{1.0};
  EXPECT_THROW(lsqr(I, short_y, SolveOptions{}, rep), Error);
  SolveOptions bad;
  bad.atol = 1.5;
  EXPECT_THROW(bad.validate(), Error);
  bad = SolveOptions{};
  bad.max_iter = 0;
  EXPECT_THROW(bad.validate(), Error);
}

TEST(Lsqr, ParallelOperatorSameSolution) {
  oracle::Gen g(49);
  auto P = random_problem(2, 3, 3, 800, g);
  std::vector<double> y(P.A.rows());
  for (auto& v : y) v = g.uniform(-1, 1);
  SolveOptions opts;
  opts.atol = opts.btol = 1e-13;
  opts.max_iter = 1000;
  SolveReport r1, r2, r3;
  const auto a = lsqr(DesignOperator{&P.A, ExecPolicy::serial()}, y, opts, r1);
  const auto b = lsqr(DesignOperator{&P.A, ExecPolicy::serial()}, y, opts, r2);
  const auto c = lsqr(DesignOperator{&P.A, ExecPolicy{4, false}}, y, opts, r3);
  EXPECT_EQ(a, b);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], c[i], 1e-9);
}
