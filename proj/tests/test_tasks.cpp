#include <doctest.h>

#include <cmath>
#include <set>

#include "qrc/core.hpp"
#include "qrc/tasks.hpp"

using namespace qrc;

namespace {

// Brute force over every degree vector (d_0, ..., d_{w-1}) with entries in
// 0..d; counts those whose total lies in 1..d.
int count_assignments(int d, int w) {
  int total = 0;
  std::vector<int> digits(static_cast<std::size_t>(w), 0);
  while (true) {
    int sum = 0;
    for (int x : digits) sum += x;
    if (sum >= 1 && sum <= d) ++total;
    std::size_t i = 0;
    while (i < digits.size() && digits[i] == d) digits[i++] = 0;
    if (i == digits.size()) return total;
    ++digits[i];
  }
}

}  // namespace

TEST_CASE("timer sequence") {
  const TimerData data = timer_sequence(500, 5, 800);
  CHECK(data.inputs.size() == 800);
  CHECK(data.inputs.head(500).isZero(0.0));
  CHECK(data.inputs.tail(300).isOnes(0.0));
  CHECK(data.target.sum() == 1.0);
  CHECK(data.target[505] == 1.0);
  CHECK_THROWS_AS(timer_sequence(500, 400, 800), DomainError);
  CHECK_THROWS_AS(validate(TaskSpec{TimerTask{-1, 5, 800}}), DomainError);
}

TEST_CASE("squeezing dataset") {
  const auto classes = squeeze_class_values(5, 2.0);
  REQUIRE(classes.size() == 5);
  CHECK(classes.front() == 0.0);
  CHECK(classes.back() == 2.0);
  CHECK(classes[2] == doctest::Approx(1.0));
  CHECK_THROWS_AS(squeeze_class_values(1, 2.0), DomainError);

  SqueezeClassifyTask task;
  task.n_classes = 4;
  task.random_phase = true;
  Rng rng(3);
  const SqueezeDataset data = squeeze_dataset(task, rng);
  CHECK(data.train.size() == 500);
  CHECK(data.test.size() == 200);
  std::set<double> seen;
  for (const auto& s : data.train) {
    CHECK(s.label == s.r);
    CHECK(s.phi >= 0.0);
    CHECK(s.phi <= task.phi_max);
    seen.insert(s.r);
  }
  CHECK(seen.size() == 4);

  task.random_phase = false;
  Rng again(3);
  for (const auto& s : squeeze_dataset(task, again).test) CHECK(s.phi == 0.0);
}

TEST_CASE("benchmark targets") {
  InputSequence s(4);
  s << 1, 0, 1, 1;
  SUBCASE("parity") {
    const Vector y = benchmark_target(s, BenchmarkKind::parity, 1);
    REQUIRE(y.size() == 3);
    CHECK(y[0] == 1.0);
    CHECK(y[1] == 1.0);
    CHECK(y[2] == 0.0);
  }
  SUBCASE("short-term memory") {
    const Vector y = benchmark_target(s, BenchmarkKind::stm, 2);
    REQUIRE(y.size() == 2);
    CHECK(y[0] == 1.0);
    CHECK(y[1] == 0.0);
    CHECK(benchmark_target(s, BenchmarkKind::stm, 0) == s);
  }
  SUBCASE("parity rejects non-binary inputs") {
    InputSequence bad = s;
    bad[1] = 0.5;
    CHECK_THROWS_AS(benchmark_target(bad, BenchmarkKind::parity, 1), DomainError);
  }
  CHECK_THROWS_AS(benchmark_target(s, BenchmarkKind::stm, 4), DomainError);
}

TEST_CASE("Legendre polynomials") {
  CHECK(legendre(0, 0.3) == 1.0);
  CHECK(legendre(1, 0.3) == 0.3);
  CHECK(legendre(2, 0.5) == doctest::Approx(-0.125));
  CHECK(legendre(3, 0.5) == doctest::Approx(-0.4375));
  for (int d = 0; d <= 6; ++d) CHECK(legendre(d, 1.0) == doctest::Approx(1.0));
  CHECK(legendre(3, 0.5f) == doctest::Approx(-0.4375f));

  // Orthogonality under the uniform measure on [-1, 1]: E[P_m P_n] = delta / (2n+1).
  Rng rng(9);
  const int samples = 200000;
  double p12 = 0.0, p13 = 0.0, p22 = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double x = rng.uniform(-1.0, 1.0);
    p12 += legendre(1, x) * legendre(2, x);
    p13 += legendre(1, x) * legendre(3, x);
    p22 += legendre(2, x) * legendre(2, x);
  }
  CHECK(std::abs(p12 / samples) < 0.01);
  CHECK(std::abs(p13 / samples) < 0.01);
  CHECK(p22 / samples == doctest::Approx(0.2).epsilon(0.03));
}

TEST_CASE("degree assignment enumeration") {
  for (int d = 1; d <= 3; ++d)
    for (int w = 1; w <= 5; ++w) {
      CAPTURE(d);
      CAPTURE(w);
      const auto all = enumerate_assignments(d, w);
      CHECK(static_cast<int>(all.size()) == count_assignments(d, w));
      for (std::size_t i = 1; i < all.size(); ++i) {
        const auto key = [](const DegreeAssignment& a) { return std::pair(a.degree(), a.max_delay()); };
        CHECK(key(all[i - 1]) <= key(all[i]));
        CHECK_FALSE(all[i - 1] == all[i]);
      }
    }
  const auto first = enumerate_assignments(2, 3);
  CHECK(first.front().terms == std::vector<std::pair<int, int>>{{0, 1}});
  CHECK_THROWS_AS(enumerate_assignments(0, 3), DomainError);
}

TEST_CASE("ipc_target") {
  Vector raw(5);
  raw << 0.1, -0.2, 0.3, 0.4, -0.5;
  DegreeAssignment a;
  a.terms = {{0, 1}, {2, 2}};
  const Vector y = ipc_target(raw, a, 2);
  REQUIRE(y.size() == 3);
  CHECK(y[0] == doctest::Approx(raw[2] * legendre(2, raw[0])));
  CHECK(y[2] == doctest::Approx(raw[4] * legendre(2, raw[2])));
  CHECK_THROWS_AS(ipc_target(raw, a, 1), DomainError);
}

TEST_CASE("information processing capacity") {
  IpcOptions opts;
  opts.seed = 4;
  SUBCASE("memoryless linear substrate recovers the current input") {
    PassthroughReservoir r;
    const IpcResult result = total_ipc(r, 5000, 500, opts);
    REQUIRE_FALSE(result.retained.empty());
    CHECK(result.retained.front().first.terms == std::vector<std::pair<int, int>>{{0, 1}});
    CHECK(result.retained.front().second == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(result.per_degree[0] == doctest::Approx(1.0).epsilon(0.02));
    CHECK(result.rank == 1);
  }
  SUBCASE("duplicated feature columns change nothing") {
    const Vector raw = draw_ipc_inputs(3000, 7);
    FeatureMatrix x(2500, 3);
    x.col(0) = raw.tail(2500);
    x.col(1) = raw.segment(499, 2500).array().square();
    x.col(2) = x.col(0);
    const IpcResult dup = ipc_from_features(x, raw, 500, opts);
    const IpcResult plain = ipc_from_features(x.leftCols(2), raw, 500, opts);
    CHECK(dup.total == doctest::Approx(plain.total).epsilon(1e-10));
    CHECK(dup.rank == 2);
  }
  SUBCASE("same seed, same result") {
    PassthroughReservoir a, b;
    opts.d_max = 2;
    CHECK(total_ipc(a, 2000, 200, opts).total == total_ipc(b, 2000, 200, opts).total);
  }
  SUBCASE("row count must match the inputs") {
    CHECK_THROWS_AS(ipc_from_features(FeatureMatrix::Zero(10, 1), Vector::Zero(30), 5, opts),
                    DimensionError);
  }
}
