#include "doctest.h"
#include "stagsrl/autodiff.hpp"
#include "stagsrl/error.hpp"

#include <cmath>

using namespace stagsrl;

namespace {

Tensor random_tensor(std::size_t r, std::size_t c, Rng& rng, double lo = -1, double hi = 1) {
  Tensor t(r, c);
  for (auto& x : t.values()) x = rng.uniform(lo, hi);
  return t;
}

// Reduces any output to a scalar with fixed random weights so every output
// element gets a distinct upstream gradient.
Var weighted_sum(Graph& g, Var v, std::uint64_t seed = 99) {
  Rng rng(seed);
  return sum(mul(v, g.constant(random_tensor(v.rows(), v.cols(), rng))));
}

struct Fixture {
  ParameterStore store;
  Rng rng{7};
  Parameter& p(const std::string& name, std::size_t r, std::size_t c) {
    return store.add(name, random_tensor(r, c, rng));
  }
};

void expect_pass(const std::function<Var(Graph&)>& f, const std::vector<Parameter*>& params,
                 double tol = 1e-6) {
  const auto report = grad_check(f, params, 1e-5, tol);
  CAPTURE(report.max_rel_error);
  CHECK(report.passed);
  CHECK(report.max_rel_error < tol);
}

}  // namespace

TEST_CASE("quadratic has near-zero gradient error") {
  Fixture fx;
  auto& a = fx.p("a", 2, 3);
  const auto r = grad_check([&](Graph& g) { auto v = g.param(a); return sum(mul(v, v)); }, {&a});
  CHECK(r.max_rel_error < 1e-8);
}

TEST_CASE("gradient checks for every operation") {
  Fixture fx;
  auto& a = fx.p("a", 3, 4);
  auto& b = fx.p("b", 3, 4);
  auto& row = fx.p("row", 1, 4);
  auto& w = fx.p("w", 4, 5);
  auto& table = fx.p("table", 6, 4);
  auto& seq = fx.p("seq", 5, 3);
  auto& filt = fx.p("filt", 9, 2);

  SUBCASE("add, broadcast add, sub, mul, scale") {
    expect_pass([&](Graph& g) { return weighted_sum(g, add(g.param(a), g.param(b))); }, {&a, &b});
    expect_pass([&](Graph& g) { return weighted_sum(g, add(g.param(a), g.param(row))); }, {&a, &row});
    expect_pass([&](Graph& g) { return weighted_sum(g, sub(g.param(a), g.param(b))); }, {&a, &b});
    expect_pass([&](Graph& g) { return weighted_sum(g, mul(g.param(a), g.param(b))); }, {&a, &b});
    expect_pass([&](Graph& g) { return weighted_sum(g, scale(g.param(a), -2.5)); }, {&a});
  }
  SUBCASE("matmul and transpose") {
    expect_pass([&](Graph& g) { return weighted_sum(g, matmul(g.param(a), g.param(w))); }, {&a, &w});
    expect_pass([&](Graph& g) { return weighted_sum(g, transpose(g.param(a))); }, {&a});
    expect_pass(
        [&](Graph& g) { return weighted_sum(g, matmul(g.param(a), transpose(g.param(b)))); }, {&a, &b});
  }
  SUBCASE("concat and slice") {
    expect_pass([&](Graph& g) { return weighted_sum(g, concat({g.param(a), g.param(b)}, 0)); }, {&a, &b});
    expect_pass([&](Graph& g) { return weighted_sum(g, concat({g.param(a), g.param(b), g.param(a)}, 1)); },
                {&a, &b});
    expect_pass([&](Graph& g) { return weighted_sum(g, slice(g.param(a), 0, 1, 3)); }, {&a});
    expect_pass([&](Graph& g) { return weighted_sum(g, slice(g.param(a), 1, 2, 4)); }, {&a});
  }
  SUBCASE("embedding lookup with repeated rows") {
    expect_pass([&](Graph& g) { return weighted_sum(g, embedding_lookup(g.param(table), {0, 3, 3, 5, 1})); },
                {&table});
  }
  SUBCASE("nonlinearities") {
    expect_pass([&](Graph& g) { return weighted_sum(g, sigmoid(g.param(a))); }, {&a});
    expect_pass([&](Graph& g) { return weighted_sum(g, tanh(g.param(a))); }, {&a});
    expect_pass([&](Graph& g) { return weighted_sum(g, relu(g.param(a))); }, {&a});
  }
  SUBCASE("softmax along both axes") {
    expect_pass([&](Graph& g) { return weighted_sum(g, softmax(g.param(a), 1)); }, {&a});
    expect_pass([&](Graph& g) { return weighted_sum(g, softmax(g.param(a), 0)); }, {&a});
  }
  SUBCASE("max over both axes") {
    expect_pass([&](Graph& g) { return weighted_sum(g, max_over_axis(g.param(a), 0)); }, {&a});
    expect_pass([&](Graph& g) { return weighted_sum(g, max_over_axis(g.param(a), 1)); }, {&a});
  }
  SUBCASE("dropout with a reseeded generator") {
    expect_pass(
        [&](Graph& g) {
          Rng r(5);
          return weighted_sum(g, dropout(g.param(a), 0.4, r));
        },
        {&a});
  }
  SUBCASE("conv1d") {
    expect_pass([&](Graph& g) { return weighted_sum(g, conv1d(g.param(seq), g.param(filt), 3)); }, {&seq, &filt});
  }
  SUBCASE("softmax cross-entropy layer") {
    expect_pass([&](Graph& g) { return cross_entropy(matmul(g.param(a), g.param(w)), {4, -1, 0}); }, {&a, &w});
    expect_pass([&](Graph& g) { return cross_entropy(slice(g.param(a), 0, 0, 1), 2); }, {&a});
  }
}

TEST_CASE("softmax rows are distributions") {
  Rng rng(3);
  Graph g;
  auto x = g.constant(random_tensor(5, 7, rng, -30, 30));
  for (int axis : {0, 1}) {
    const auto& p = softmax(x, axis).value();
    const std::size_t outer = axis == 1 ? p.rows() : p.cols();
    const std::size_t inner = axis == 1 ? p.cols() : p.rows();
    for (std::size_t o = 0; o < outer; ++o) {
      double s = 0;
      for (std::size_t i = 0; i < inner; ++i) {
        const double v = axis == 1 ? p(o, i) : p(i, o);
        CHECK(v > 0.0);
        CHECK(v < 1.0);
        s += v;
      }
      CHECK(std::abs(s - 1.0) < 1e-6);
    }
  }
  auto big = g.constant(Tensor::from_rows({{1000, 0, -1000}}));
  CHECK(std::isfinite(softmax(big).value()(0, 1)));
  CHECK(std::isfinite(cross_entropy(big, 2).value().item()));
}

TEST_CASE("cross-entropy is nonnegative and vanishes toward one-hot") {
  Rng rng(4);
  Graph g;
  for (int i = 0; i < 50; ++i) {
    auto x = g.constant(random_tensor(1, 6, rng, -5, 5));
    CHECK(cross_entropy(x, static_cast<int>(i % 6)).value().item() >= 0.0);
  }
  double prev = 1e9;
  for (double m : {1.0, 5.0, 20.0, 50.0}) {
    const double l = cross_entropy(g.constant(Tensor::from_rows({{0, m, 0}})), 1).value().item();
    CHECK(l < prev);
    prev = l;
  }
  CHECK(prev < 1e-20);
  CHECK(cross_entropy(g.constant(Tensor::from_rows({{1, 2}, {3, 4}})), std::vector<int>{-1, -1}).value().item() ==
        0.0);
}

TEST_CASE("fan-out gradients add up") {
  ParameterStore store;
  Rng rng(6);
  auto& a = store.add("a", random_tensor(2, 3, rng));
  auto first = [&](Graph& g) { return weighted_sum(g, tanh(g.param(a)), 1); };
  auto second = [&](Graph& g) { return weighted_sum(g, sigmoid(g.param(a)), 2); };
  auto grad_of = [&](const std::function<Var(Graph&)>& f) {
    store.zero_grad();
    Graph g;
    g.backward(f(g));
    return a.grad();
  };
  const Tensor g1 = grad_of(first), g2 = grad_of(second);
  const Tensor both = grad_of([&](Graph& g) {
    auto v = g.param(a);
    return add(weighted_sum(g, tanh(v), 1), weighted_sum(g, sigmoid(v), 2));
  });
  for (std::size_t i = 0; i < both.size(); ++i) CHECK(both[i] == doctest::Approx(g1[i] + g2[i]).epsilon(1e-14));
}

TEST_CASE("gradients accumulate until zeroed") {
  ParameterStore store;
  auto& a = store.add("a", Tensor::from_rows({{1, 2}}));
  for (int i = 0; i < 2; ++i) {
    Graph g;
    g.backward(sum(scale(g.param(a), 3)));
  }
  CHECK(a.grad() == Tensor::from_rows({{6, 6}}));
  store.zero_grad();
  CHECK(a.grad() == Tensor::from_rows({{0, 0}}));
}

TEST_CASE("forward evaluation is deterministic") {
  Rng rng(8);
  const Tensor x = random_tensor(4, 6, rng), w = random_tensor(6, 3, rng);
  auto run = [&] {
    Graph g;
    Rng r(12);
    return dropout(softmax(matmul(g.constant(x), g.constant(w))), 0.3, r).value();
  };
  CHECK(run() == run());
}

TEST_CASE("dropout semantics") {
  Rng rng(9);
  Graph g;
  auto x = g.constant(Tensor(200, 50, 1.0));
  auto d = dropout(x, 0.5, rng);
  std::size_t zeros = 0;
  for (double v : d.value().values()) {
    CHECK((v == 0.0 || v == 2.0));
    zeros += v == 0.0;
  }
  CHECK(zeros > 4500);
  CHECK(zeros < 5500);
  CHECK(dropout(x, 0.5, rng, false).id == x.id);
  CHECK(dropout(x, 0.0, rng).id == x.id);
  CHECK_THROWS_AS(dropout(x, 1.0, rng), ValidationError);
}

TEST_CASE("shape errors") {
  Graph g;
  auto a = g.constant(Tensor(2, 3));
  auto b = g.constant(Tensor(3, 2));
  CHECK_THROWS_AS(add(a, b), ShapeError);
  CHECK_THROWS_AS(add(a, g.constant(Tensor(2, 1))), ShapeError);
  CHECK_THROWS_AS(mul(a, b), ShapeError);
  CHECK_THROWS_AS(matmul(a, a), ShapeError);
  CHECK_THROWS_AS(concat({a, b}, 0), ShapeError);
  CHECK_THROWS_AS(slice(a, 0, 1, 3), ShapeError);
  CHECK_THROWS_AS(embedding_lookup(a, {2}), ShapeError);
  CHECK_THROWS_AS(cross_entropy(a, std::vector<int>{0}), ShapeError);
  CHECK_THROWS_AS(g.backward(a), ShapeError);
  try {
    matmul(a, a);
  } catch (const ShapeError& e) {
    CHECK(std::string(e.what()).find("2x3") != std::string::npos);
  }
}

TEST_CASE("parameter store") {
  ParameterStore s;
  auto& p = s.add("x", Tensor(1, 1));
  CHECK(&s.get("x") == &p);
  CHECK_THROWS(s.add("x", Tensor(1, 1)));
  CHECK_THROWS(s.get("y"));
  s.add("frozen", Tensor(1, 1), false);
  CHECK(s.trainable().size() == 1);
  CHECK(s.all().size() == 2);
  for (int i = 0; i < 100; ++i) s.add("p" + std::to_string(i), Tensor(1, 1));
  CHECK(&s.get("x") == &p);
}
