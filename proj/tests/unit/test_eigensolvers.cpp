#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "vortnet/analysis.hpp"
#include "vortnet/eigensolvers.hpp"
#include "vortnet/error.hpp"

using namespace vortnet;

namespace {

constexpr std::uint64_t kCap = std::uint64_t{1} << 32;

SampleIndexSet full_sample(std::size_t n) {
  SampleIndexSet s;
  s.indices.resize(n);
  std::iota(s.indices.begin(), s.indices.end(), std::size_t{0});
  s.n = n;
  return s;
}

VorticityField scaled(const VorticityField& f, double c) {
  std::vector<double> w(f.omega().begin(), f.omega().end());
  for (double& x : w) x *= c;
  return VorticityField(f.grid(), std::move(w));
}

void check_contract(const EigenApproximation& e) {
  for (Eigen::Index c = 0; c < e.vectors.cols(); ++c) {
    CHECK(e.vectors.col(c).norm() == doctest::Approx(1.0).epsilon(1e-14));
    Eigen::Index arg = 0;
    e.vectors.col(c).cwiseAbs().maxCoeff(&arg);
    CHECK(e.vectors(arg, c) > 0.0);
  }
  for (Eigen::Index c = 1; c < e.values.size(); ++c) CHECK(e.values(c - 1) >= e.values(c));
}

}  // namespace

TEST_CASE("power: 2x2 analytic pair") {
  Eigen::MatrixXd a(2, 2);
  a << 0, 2.5, 2.5, 0;
  const auto e = power_dominant(DenseSymmetricOperator(a), {.k = 1});
  CHECK(e.values(0) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(e.vectors(0, 0) == doctest::Approx(M_SQRT1_2).epsilon(1e-10));
  CHECK(e.vectors(1, 0) == doctest::Approx(M_SQRT1_2).epsilon(1e-10));
  // Both pairs, including the negative one.
  const auto both = power_dominant(DenseSymmetricOperator(a), {.k = 2});
  CHECK(both.values(1) == doctest::Approx(-2.5).epsilon(1e-12));
  check_contract(both);
}

TEST_CASE("power: random nonnegative matrices against Jacobi") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto a = oracle::random_adjacency(20, 1000 + seed);
    const auto ref = oracle::jacobi_eigen(a);
    const auto e = power_dominant(DenseSymmetricOperator(a), {.k = 3, .tol = 1e-13, .max_iters = 200000, .seed = seed});
    check_contract(e);
    CHECK(e.method == Method::power);
    CHECK(e.iterations.size() == 3);
    for (Eigen::Index c = 0; c < 3; ++c) {
      CHECK(oracle::angle_rad(e.vectors.col(c), ref.vectors.col(c)) < 1e-8);
      CHECK(std::abs(e.values(c) - ref.values(c)) / ref.values(0) < 1e-10);
    }
  }
}

TEST_CASE("power: Perron vector on 8x8 fields") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto f = oracle::random_field(8, 8, seed);
    const auto ref = oracle::jacobi_eigen(oracle::adjacency_matrix(f));
    const auto e = power_dominant(AdjacencyOperator(f), {.k = 1, .seed = seed});
    CHECK(e.values(0) >= 0.0);
    CHECK(e.vectors.col(0).minCoeff() >= -1e-12);
    CHECK(oracle::angle_rad(e.vectors.col(0), ref.vectors.col(0)) < 1e-7);
    CHECK(e.values(0) == doctest::Approx(ref.values(0)).epsilon(1e-12));
  }
}

TEST_CASE("power: dense and matrix-free runs agree") {
  const auto f = oracle::random_field(9, 7, 3);
  const AdjacencyOperator op(f);
  const auto a = power_dominant(op, {.k = 2});
  const auto b = power_dominant(DenseSymmetricOperator(op.materialize(kCap)), {.k = 2});
  for (Eigen::Index c = 0; c < 2; ++c) {
    CHECK(oracle::angle_rad(a.vectors.col(c), b.vectors.col(c)) < 1e-8);
    CHECK(a.values(c) == doctest::Approx(b.values(c)).epsilon(1e-12));
  }
}

TEST_CASE("power: errors") {
  const auto a = oracle::random_adjacency(20, 5);
  const DenseSymmetricOperator op(a);
  try {
    power_dominant(op, {.k = 1, .tol = 1e-14, .max_iters = 2});
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.pair_index == 0);
    CHECK(e.iterations == 2);
    CHECK(e.last_residual > 1e-14);
  }
  CHECK_THROWS_AS(power_dominant(op, {.k = 0}), InvalidArgument);
  CHECK_THROWS_AS(power_dominant(op, {.k = 21}), InvalidArgument);
  CHECK_THROWS_AS(power_dominant(op, {.k = 1, .tol = 0.0}), InvalidArgument);
  CHECK_THROWS_AS(power_dominant(op, {.k = 1, .max_iters = 0}), InvalidArgument);
}

TEST_CASE("full-sample exactness of the randomized paths") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto f = oracle::random_field(10, 8, 70 + seed, 0.5, 0.5);
    const AdjacencyOperator op(f);
    const auto ref = oracle::jacobi_eigen(oracle::adjacency_matrix(f));
    const auto sample = full_sample(f.size());

    const auto ny = nystrom(op, sample, {.k = 3});
    check_contract(ny);
    const auto sk = sketch_svd(op, sample, {.k = 3});
    check_contract(sk);
    const auto skg = sketch_svd(op, sample, {.k = 3, .gram = true});
    for (Eigen::Index c = 0; c < 3; ++c) {
      CHECK(oracle::angle_rad(ny.vectors.col(c), ref.vectors.col(c)) < 1e-8);
      CHECK(ny.values(c) == doctest::Approx(ref.values(c)).epsilon(1e-10));
      CHECK(ny.raw_norms(c) == doctest::Approx(1.0).epsilon(1e-10));
      // Singular values are |lambda|; these fields have lambda_3 > |lambda_min|.
      CHECK(oracle::angle_rad(sk.vectors.col(c), ref.vectors.col(c)) < 1e-8);
      CHECK(sk.values(c) == doctest::Approx(std::abs(ref.values(c))).epsilon(1e-10));
      CHECK(oracle::angle_rad(skg.vectors.col(c), ref.vectors.col(c)) < 1e-6);
    }
  }
}

TEST_CASE("sketch: gram and direct routes agree") {
  const auto f = oracle::random_field(10, 10, 12);
  const AdjacencyOperator op(f);
  const auto sample = draw_sample(SamplerKind::uniform, f.grid(), 20, 4);
  const auto direct = sketch_svd(op, sample, {.k = 3});
  const auto gram = sketch_svd(op, sample, {.k = 3, .gram = true});
  for (Eigen::Index c = 0; c < 3; ++c) {
    CHECK(oracle::angle_rad(direct.vectors.col(c), gram.vectors.col(c)) < 1e-8);
    CHECK(gram.values(c) == doctest::Approx(direct.values(c)).epsilon(1e-10));
  }
}

TEST_CASE("sketch: eigenvalue scaling uses sqrt(n / l)") {
  const auto f = oracle::random_field(8, 8, 2);
  const AdjacencyOperator op(f);
  const auto sample = draw_sample(SamplerKind::halton, f.grid(), 16, 0);
  const Eigen::MatrixXd c = build_sketch(op, sample, 1);
  const auto ref = oracle::jacobi_eigen(c.transpose() * c);
  const auto e = sketch_svd(op, sample, {.k = 2});
  for (Eigen::Index i = 0; i < 2; ++i)
    CHECK(e.values(i) == doctest::Approx(std::sqrt(64.0 / 16.0) * std::sqrt(ref.values(i))).epsilon(1e-10));
}

TEST_CASE("nystrom: rank-one matrices are recovered exactly") {
  const Eigen::Index n = 30;
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = 0.5 + std::sin(static_cast<double>(i)) * 0.4 + 0.1 * i;
  const DenseSymmetricOperator op(z * z.transpose());
  for (std::size_t l : {1u, 2u, 7u, 30u}) {
    auto sample = sample_uniform(static_cast<std::size_t>(n), l, l);
    const auto e = nystrom(op, sample, {.k = 1});
    CHECK(oracle::angle_rad(e.vectors.col(0), z) < 1e-10);
    // The eigenvalue estimate is (n / l) |z_J|^2, exact only for l = n.
    double zj = 0.0;
    for (std::size_t j : sample.indices) zj += z(static_cast<Eigen::Index>(j)) * z(static_cast<Eigen::Index>(j));
    CHECK(e.values(0) == doctest::Approx(30.0 / static_cast<double>(l) * zj).epsilon(1e-12));
  }
}

TEST_CASE("nystrom: reconstruction formula on a partial sample") {
  const auto f = oracle::random_field(6, 6, 30);
  const AdjacencyOperator op(f);
  const auto sample = draw_sample(SamplerKind::uniform, f.grid(), 9, 2);
  const Eigen::MatrixXd c = build_sketch(op, sample, 1);
  Eigen::MatrixXd w(9, 9);
  for (Eigen::Index r = 0; r < 9; ++r) w.row(r) = c.row(static_cast<Eigen::Index>(sample.indices[static_cast<std::size_t>(r)]));
  const auto wd = oracle::jacobi_eigen(w);
  const auto e = nystrom(op, sample, {.k = 2});
  for (Eigen::Index k = 0; k < 2; ++k) {
    CHECK(e.values(k) == doctest::Approx(36.0 / 9.0 * wd.values(k)).epsilon(1e-10));
    const Eigen::VectorXd u = std::sqrt(9.0 / 36.0) * c * wd.vectors.col(k) / wd.values(k);
    CHECK(oracle::angle_rad(e.vectors.col(k), u) < 1e-8);
    CHECK(e.raw_norms(k) == doctest::Approx(u.norm()).epsilon(1e-8));
  }
}

TEST_CASE("randomized paths: errors and degenerate samples") {
  const auto f = oracle::random_field(5, 5, 1);
  const AdjacencyOperator op(f);
  const auto s = draw_sample(SamplerKind::uniform, f.grid(), 4, 0);
  CHECK_THROWS_AS(nystrom(op, s, {.k = 5}), InvalidArgument);
  CHECK_THROWS_AS(sketch_svd(op, s, {.k = 5}), InvalidArgument);
  auto wrong_n = s;
  wrong_n.n = 24;
  CHECK_THROWS_AS(nystrom(op, wrong_n, {.k = 1}), InvalidArgument);

  const AdjacencyOperator zero(VorticityField({4, 4, 1, 1}, std::vector<double>(16, 0.0)));
  const auto zs = draw_sample(SamplerKind::halton, zero.field().grid(), 4, 0);
  CHECK_THROWS_AS(nystrom(zero, zs, {.k = 1}), DegenerateSampleError);
  CHECK_THROWS_AS(sketch_svd(zero, zs, {.k = 1}), DegenerateSampleError);

  // A rank-one matrix cannot supply two pairs.
  Eigen::VectorXd z = Eigen::VectorXd::LinSpaced(12, 1.0, 2.0);
  const DenseSymmetricOperator rank_one(z * z.transpose());
  const auto e = nystrom(rank_one, sample_uniform(12, 5, 1), {.k = 2});
  CHECK(e.rank_deficient);
  CHECK(e.k() == 1);
  const auto g = sketch_svd(rank_one, sample_uniform(12, 5, 1), {.k = 2});
  CHECK(g.rank_deficient);
  CHECK(g.k() == 1);
}

TEST_CASE("scale equivariance for every method") {
  const auto f = oracle::random_field(9, 9, 55);
  const double c = 2.5;
  const AdjacencyOperator a(f), b(scaled(f, c));
  const auto sample = draw_sample(SamplerKind::halton, f.grid(), 20, 1);

  const auto pa = power_dominant(a, {.k = 2}), pb = power_dominant(b, {.k = 2});
  const auto na = nystrom(a, sample, {.k = 2}), nb = nystrom(b, sample, {.k = 2});
  const auto sa = sketch_svd(a, sample, {.k = 2}), sb = sketch_svd(b, sample, {.k = 2});
  for (Eigen::Index k = 0; k < 2; ++k) {
    CHECK(pb.values(k) == doctest::Approx(c * pa.values(k)).epsilon(1e-10));
    CHECK(nb.values(k) == doctest::Approx(c * na.values(k)).epsilon(1e-10));
    CHECK(sb.values(k) == doctest::Approx(c * sa.values(k)).epsilon(1e-10));
    CHECK(oracle::angle_rad(pa.vectors.col(k), pb.vectors.col(k)) < 1e-8);
    CHECK(oracle::angle_rad(na.vectors.col(k), nb.vectors.col(k)) < 1e-10);
    CHECK(oracle::angle_rad(sa.vectors.col(k), sb.vectors.col(k)) < 1e-10);
  }
}

TEST_CASE("determinism, including across worker counts") {
  const auto f = oracle::random_field(12, 10, 8);
  const AdjacencyOperator one(f, 1), four(f, 4);
  const auto sample = draw_sample(SamplerKind::uniform, f.grid(), 24, 6);
  CHECK(build_sketch(one, sample, 1) == build_sketch(four, sample, 4));
  const auto a = nystrom(one, sample, {.k = 3, .workers = 1});
  const auto b = nystrom(four, sample, {.k = 3, .workers = 4});
  CHECK(a.vectors == b.vectors);
  CHECK(a.values == b.values);
  CHECK(sketch_svd(one, sample, {.k = 2, .workers = 1}).vectors ==
        sketch_svd(four, sample, {.k = 2, .workers = 3}).vectors);
  CHECK(power_dominant(one, {.k = 2, .seed = 4}).vectors == power_dominant(one, {.k = 2, .seed = 4}).vectors);
}

TEST_CASE("fix_signs") {
  Eigen::MatrixXd v(4, 3);
  v << 0.1, -0.5, 0.5,
       -0.9, 0.2, -0.5,
       0.2, 0.5, 0.1,
       0.3, 0.1, 0.0;
  fix_signs(v);
  CHECK(v(1, 0) == 0.9);
  CHECK(v(0, 0) == -0.1);
  // Ties go to the lowest index.
  CHECK(v(0, 1) == 0.5);
  CHECK(v(2, 1) == -0.5);
  CHECK(v(0, 2) == 0.5);
}

TEST_CASE("method names") {
  CHECK(parse_method("sketch") == Method::sketch_svd);
  CHECK(parse_method("sketch_svd") == Method::sketch_svd);
  CHECK(parse_method("nystrom") == Method::nystrom);
  CHECK(parse_method("power") == Method::power);
  CHECK(to_string(Method::sketch_svd) == "sketch_svd");
  CHECK_THROWS_AS(parse_method("lanczos"), InvalidArgument);
}
