#include <doctest.h>

#include <random>

#include "test_support.hpp"
#include "wshift/evaluation.hpp"

using namespace wshift;
using testing::code_of;

TEST_CASE("contingency") {
  const auto t = contingency(std::vector<int>{0, 0, 1, 1}, std::vector<int>{1, 1, 0, 0});
  CHECK(t.counts == std::vector<std::vector<std::int64_t>>{{2, 0}, {0, 2}});
  CHECK(t.total == 4);

  const auto x = contingency(std::vector<int>{0, 1, 0, 1}, std::vector<int>{0, 0, 1, 1});
  CHECK(x.counts == std::vector<std::vector<std::int64_t>>{{1, 1}, {1, 1}});
  CHECK(x.row_sums == std::vector<std::int64_t>{2, 2});

  const std::vector<int> labels{3, -1, 3, 7, -1};
  const auto d = contingency(labels, labels);
  for (std::size_t u = 0; u < d.rows(); ++u)
    for (std::size_t v = 0; v < d.columns(); ++v)
      CHECK((d.counts[u][v] != 0) == (u == v));

  CHECK(code_of([] { contingency(std::vector<int>{0, 1}, std::vector<int>{0}); }) == Errc::LengthMismatch);
  CHECK(code_of([] { contingency(std::vector<int>{0}, std::vector<int>{0}); }) == Errc::TooFewPoints);
}

TEST_CASE("adjusted_rand_index") {
  CHECK(adjusted_rand_index(std::vector<int>{0, 0, 1, 1, 2}, std::vector<int>{5, 5, 9, 9, -1}).value == 1.0);
  CHECK(adjusted_rand_index(std::vector<int>{0, 0, 0}, std::vector<int>{0, 0, 0}).value == 0.0);

  SUBCASE("pair-counting oracle, symmetry and relabeling") {
    std::mt19937_64 rng(808);
    for (int trial = 0; trial < 500; ++trial) {
      const std::size_t n = 2 + trial % 11;
      std::uniform_int_distribution<int> lab(0, 1 + trial % 3);
      std::vector<int> a(n), b(n);
      for (auto& v : a) v = lab(rng);
      for (auto& v : b) v = lab(rng);
      const double ari = adjusted_rand_index(a, b).value;
      CHECK(std::abs(ari - oracle::pair_count_ari(a, b)) <= 1e-12);
      CHECK(ari == adjusted_rand_index(b, a).value);
      CHECK(ari <= 1.0);
      std::vector<int> relabeled(n);
      for (std::size_t i = 0; i < n; ++i)
        relabeled[i] = 10 - 3 * a[i];
      CHECK(adjusted_rand_index(relabeled, b).value == ari);
      if (ari == 1.0)
        CHECK(oracle::same_partition(a, b));
    }
  }

  SUBCASE("chance level for random predictions") {
    std::mt19937_64 rng(909);
    std::uniform_int_distribution<int> lab(0, 2);
    std::vector<int> truth(200);
    for (auto& v : truth) v = lab(rng);
    double mean = 0.0;
    for (int draw = 0; draw < 1000; ++draw) {
      std::vector<int> pred(200);
      for (auto& v : pred) v = lab(rng);
      mean += adjusted_rand_index(pred, truth).value;
    }
    mean /= 1000.0;
    CHECK(std::abs(mean) <= 0.02);
  }
}
