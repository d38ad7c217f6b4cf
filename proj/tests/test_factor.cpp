#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>

#include "dense_oracle.hpp"
#include "ldpcpgm/factor.hpp"

using namespace ldpcpgm;

TEST_CASE("parity factor matches the table definition") {
  const auto f = make_parity_factor({0, 1, 2, 4});
  CHECK(f.entry_count() == 8);
  CHECK(f.at(std::vector<int>{0, 0, 1, 1}) == 1.0);  // two ones
  CHECK(f.at(std::vector<int>{0, 0, 0, 1}) == 0.0);  // odd, absent
  CHECK(f.at(std::vector<int>{0, 0, 0, 0}) == 1.0);
  CHECK(f.at(std::vector<int>{1, 1, 1, 1}) == 1.0);

  for (const auto& e : f.entries()) CHECK(std::popcount(e.key) % 2 == 0);
}

TEST_CASE("parity factor over one bit stores only the zero state") {
  const auto f = make_parity_factor({3});
  CHECK(f.entry_count() == 1);
  CHECK(f.at_key(0) == 1.0);
  CHECK(f.at_key(1) == 0.0);
}

TEST_CASE("parity factor support counts") {
  std::mt19937_64 gen(7);
  for (int k = 1; k <= 6; ++k) {
    std::vector<VariableId> scope;
    for (int i = 0; i < k; ++i) scope.push_back(static_cast<VariableId>(gen() % 50 + i * 50));
    const auto f = make_parity_factor(scope);
    CHECK(f.entry_count() == (1u << (k - 1)));
    for (const auto& e : f.entries()) CHECK(std::popcount(e.key) % 2 == 0);
  }
  CHECK_THROWS(make_parity_factor({}));
  CHECK_THROWS(make_parity_factor({1, 1}));
}

TEST_CASE("product with uniform-ones is the identity") {
  std::mt19937_64 gen(11);
  for (int i = 0; i < 20; ++i) {
    const auto f = dense::random_factor(gen, {0, 1, 2, 3, 4});
    const auto u = DiscreteFactor::uniform_ones(f.scope());
    CHECK(f.product(u) == f);
  }
}

TEST_CASE("product of overlapping parity factors") {
  const auto f = make_parity_factor({0, 1}).product(make_parity_factor({1, 2}));
  CHECK(f.at(std::vector<int>{1, 1, 1}) == 1.0);  // both pairs even
  CHECK(f.at(std::vector<int>{1, 1, 0}) == 0.0);  // b1=1,b2=0 is odd for the second check
  CHECK(f.at(std::vector<int>{0, 0, 0}) == 1.0);
  // Brute force against the dense reference.
  const auto expect =
      dense::product(dense::to_dense(make_parity_factor({0, 1})),
                     dense::to_dense(make_parity_factor({1, 2})));
  CHECK(dense::close(dense::to_dense(f), expect, 0.0));
}

TEST_CASE("product charges one multiplication per dense result entry") {
  OpCounter ops;
  const auto parity = make_parity_factor({0, 1, 2, 4});
  const auto lik = DiscreteFactor({4}, {{0u, 0.3}, {1u, 0.7}});
  parity.product(lik, &ops);
  CHECK(ops.multiplications == 16);  // 2^4
  CHECK(ops.additions == 0);
}

TEST_CASE("product is commutative and associative") {
  std::mt19937_64 gen(23);
  for (int i = 0; i < 200; ++i) {
    const auto f = dense::random_factor(gen, {0, 1, 2, 3, 4});
    const auto g = dense::random_factor(gen, {0, 1, 2, 3, 4});
    const auto h = dense::random_factor(gen, {0, 1, 2, 3, 4});
    CHECK(dense::close(dense::to_dense(f.product(g)), dense::to_dense(g.product(f)), 1e-12));
    CHECK(dense::close(dense::to_dense(f.product(g).product(h)),
                       dense::to_dense(f.product(g.product(h))), 1e-9));
    // And against the dense reference.
    CHECK(dense::close(dense::to_dense(f.product(g)),
                       dense::product(dense::to_dense(f), dense::to_dense(g)), 1e-12));
  }
}

TEST_CASE("divide undoes product on the divisor's support") {
  std::mt19937_64 gen(31);
  for (int i = 0; i < 200; ++i) {
    const auto f = dense::random_factor(gen, {0, 1, 2, 3, 4});
    const auto g = dense::random_factor(gen, f.scope(), f.scope().size());
    const auto back = f.product(g).divide(g);
    // Wherever g is positive the round trip returns f exactly.
    for (const auto& e : f.entries()) {
      const auto sub = dense::project(f.scope(), [&] {
        std::vector<int> a(f.scope().size());
        for (std::size_t b = 0; b < a.size(); ++b) a[b] = (e.key >> b) & 1;
        return a;
      }(), g.scope());
      bool g_positive = dense::to_dense(g).map.at(sub) > 0.0;
      if (g_positive) CHECK(back.at_key(e.key) == doctest::Approx(e.value).epsilon(1e-12));
    }
  }
}

TEST_CASE("divide conventions") {
  const auto f = DiscreteFactor({0, 1}, {{0u, 2.0}, {3u, 4.0}});
  SUBCASE("f / f is uniform over the support") {
    const auto q = f.divide(f);
    CHECK(q.at_key(0) == 1.0);
    CHECK(q.at_key(3) == 1.0);
    CHECK(q.entry_count() == 2);
  }
  SUBCASE("f / uniform-ones is f") {
    CHECK(f.divide(DiscreteFactor::uniform_ones(f.scope())) == f);
  }
  SUBCASE("0/0 stays absent") {
    const auto ratio = f.divide(f);
    CHECK(ratio.at_key(1) == 0.0);
    CHECK(ratio.at_key(2) == 0.0);
  }
  SUBCASE("positive over zero throws") {
    const auto den = DiscreteFactor({0, 1}, {{0u, 1.0}});
    CHECK_THROWS(f.divide(den));
  }
  SUBCASE("denominator scope must nest") {
    CHECK_THROWS(f.divide(DiscreteFactor::uniform_ones({7})));
  }
}

TEST_CASE("divide charges the dense denominator size") {
  OpCounter ops;
  const auto f = make_parity_factor({0, 1, 2, 4});
  const auto den = DiscreteFactor::uniform_ones({0, 1});
  f.divide(den, &ops);
  CHECK(ops.multiplications == 4);  // 2^2
}

TEST_CASE("marginalizing a parity factor leaves uniform ones") {
  // Each prefix has exactly one even-parity completion of the last bit.
  const auto m = make_parity_factor({0, 1, 2, 4}).marginalize({0, 1, 2});
  CHECK(m == DiscreteFactor::uniform_ones({0, 1, 2}));
}

TEST_CASE("marginalization cost model") {
  const auto f = make_parity_factor({0, 1, 2, 4});
  SUBCASE("onto a strict subset: dense table minus dense result") {
    OpCounter ops;
    f.marginalize({0}, &ops);
    CHECK(ops.additions == 14);  // 2^4 - 2^1
  }
  SUBCASE("onto the full scope: identity, zero additions") {
    OpCounter ops;
    CHECK(f.marginalize({0, 1, 2, 4}, &ops) == f);
    CHECK(ops.additions == 0);
  }
  SUBCASE("variable outside the scope") {
    CHECK_THROWS(f.marginalize({9}));
  }
}

TEST_CASE("marginalization distributes over products with disjoint remainders") {
  std::mt19937_64 gen(47);
  for (int i = 0; i < 200; ++i) {
    const auto f = dense::random_factor(gen, {0, 1, 2});
    const auto g = dense::random_factor(gen, {2, 3, 4});
    std::vector<VariableId> shared;
    for (VariableId v : g.scope()) {
      if (std::find(f.scope().begin(), f.scope().end(), v) != f.scope().end()) {
        shared.push_back(v);
      }
    }
    const auto lhs = f.product(g).marginalize(f.scope());
    const auto rhs = f.product(g.marginalize(shared));
    CHECK(dense::close(dense::to_dense(lhs), dense::to_dense(rhs), 1e-9));
  }
}

TEST_CASE("marginalize agrees with the dense reference") {
  std::mt19937_64 gen(59);
  for (int i = 0; i < 200; ++i) {
    const auto f = dense::random_factor(gen, {0, 1, 2, 3, 4});
    std::vector<VariableId> keep;
    for (VariableId v : f.scope()) {
      if (gen() & 1) keep.push_back(v);
    }
    if (keep.empty()) keep.push_back(f.scope().front());
    CHECK(dense::close(dense::to_dense(f.marginalize(keep)),
                       dense::marginalize(dense::to_dense(f), keep), 1e-12));
  }
}

TEST_CASE("normalize") {
  SUBCASE("scales to unit mass") {
    const auto f = DiscreteFactor({0}, {{0u, 2.0}, {1u, 2.0}}).normalized();
    CHECK(f.at_key(0) == 0.5);
    CHECK(f.at_key(1) == 0.5);
  }
  SUBCASE("idempotent") {
    const auto f = DiscreteFactor({0}, {{0u, 0.25}, {1u, 0.75}});
    CHECK(f.normalized() == f);
  }
  SUBCASE("parity factor over four bits becomes eight eighths") {
    const auto f = make_parity_factor({0, 1, 2, 4}).normalized();
    CHECK(f.entry_count() == 8);
    for (const auto& e : f.entries()) CHECK(e.value == doctest::Approx(0.125));
  }
  SUBCASE("empty factor throws") {
    CHECK_THROWS(DiscreteFactor().normalized());
  }
  SUBCASE("mass within 1e-12 of one") {
    std::mt19937_64 gen(3);
    for (int i = 0; i < 50; ++i) {
      const auto f = dense::random_factor(gen, {0, 1, 2, 3, 4}).normalized();
      CHECK(std::abs(f.sum() - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("kl divergence") {
  const auto p_point = DiscreteFactor({0}, {{0u, 1.0}});
  const auto uniform = DiscreteFactor({0}, {{0u, 0.5}, {1u, 0.5}});
  CHECK(kl_divergence(uniform, uniform) == 0.0);
  CHECK(kl_divergence(p_point, uniform) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  const auto p = DiscreteFactor({0}, {{0u, 0.8}, {1u, 0.2}});
  const double expect = 0.8 * std::log(0.8 / 0.5) + 0.2 * std::log(0.2 / 0.5);
  CHECK(kl_divergence(p, uniform) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(expect == doctest::Approx(0.19274475702175742).epsilon(1e-12));

  SUBCASE("scope mismatch throws") {
    CHECK_THROWS(kl_divergence(p, DiscreteFactor({1}, {{0u, 0.5}, {1u, 0.5}})));
  }
  SUBCASE("q clamped at 1e-12 where p is positive") {
    const double d = kl_divergence(uniform, p_point);
    CHECK(d == doctest::Approx(0.5 * std::log(0.5 / 1.0) + 0.5 * std::log(0.5 / 1e-12)));
  }
}

TEST_CASE("equality ignores construction scope order") {
  const auto a = DiscreteFactor({0, 2}, {{1u, 3.0}, {2u, 5.0}});   // b0=1; b2=1
  const auto b = DiscreteFactor({2, 0}, {{2u, 3.0}, {1u, 5.0}});   // same table, swapped order
  CHECK(a == b);
}

TEST_CASE("constructor rejects malformed tables") {
  CHECK_THROWS(DiscreteFactor({0, 0}, {{0u, 1.0}}));
  CHECK_THROWS(DiscreteFactor({0}, {{0u, 0.0}}));
  CHECK_THROWS(DiscreteFactor({0}, {{0u, -1.0}}));
  CHECK_THROWS(DiscreteFactor({0}, {{0u, 1.0}, {0u, 2.0}}));
  CHECK_THROWS(DiscreteFactor({0}, {{4u, 1.0}}));
}
