#include "doctest.h"
#include "stagsrl/error.hpp"
#include "stagsrl/nn_layers.hpp"

#include <cmath>

using namespace stagsrl;

namespace {

Tensor random_tensor(std::size_t r, std::size_t c, Rng& rng) {
  Tensor t(r, c);
  for (auto& x : t.values()) x = rng.uniform(-1, 1);
  return t;
}

Var weighted_sum(Graph& g, Var v) {
  Rng rng(99);
  return sum(mul(v, g.constant(random_tensor(v.rows(), v.cols(), rng))));
}

Vocabulary char_vocab() {
  return Vocabulary::build({{"a", 3}, {"b", 2}, {"c", 1}, {"d", 1}, {"\xc3\xb1", 1}});
}

void copy_layer(const LstmLayer& from, LstmLayer& to) {
  to.w_x->value() = from.w_x->value();
  to.w_h->value() = from.w_h->value();
  to.b->value() = from.b->value();
  if (from.highway) {
    to.w_tx->value() = from.w_tx->value();
    to.w_th->value() = from.w_th->value();
    to.b_t->value() = from.b_t->value();
    to.w_p->value() = from.w_p->value();
  }
}

// Makes the top and bottom halves of a (2H x n) input matrix equal.
void mirror_halves(Parameter* p) {
  if (!p) return;
  Tensor& w = p->value();
  const std::size_t h = w.rows() / 2;
  for (std::size_t r = 0; r < h; ++r)
    for (std::size_t c = 0; c < w.cols(); ++c) w(h + r, c) = w(r, c);
}

Tensor reverse_rows(const Tensor& t) {
  Tensor out(t.rows(), t.cols());
  for (std::size_t r = 0; r < t.rows(); ++r)
    for (std::size_t c = 0; c < t.cols(); ++c) out(r, c) = t(t.rows() - 1 - r, c);
  return out;
}

}  // namespace

TEST_CASE("vocabulary") {
  const auto v = Vocabulary::build({{"b", 2}, {"a", 5}, {"rare", 1}}, 2);
  CHECK(v.symbols() == std::vector<std::string>{"a", "b"});
  CHECK(v.size() == 4);
  CHECK(v.index("a") == 2);
  CHECK(v.index("b") == 3);
  CHECK(v.index("rare") == Vocabulary::kUnk);
  CHECK(v.count("a") == 5);
  CHECK(v.count("zzz") == 0);
  const auto back = Vocabulary::from_entries(v.entries());
  CHECK(back.entries() == v.entries());
  CHECK(back.index("b") == 3);
}

TEST_CASE("label set") {
  LabelSet l({"x", "y"});
  CHECK(l.index("y") == 1);
  CHECK(l.index("z") == -1);
  CHECK(l.label(0) == "x");
}

TEST_CASE("utf8 characters") {
  CHECK(utf8_chars("a\xc3\xb1" "b\xe2\x82\xac") == std::vector<std::string>{"a", "\xc3\xb1", "b", "\xe2\x82\xac"});
  CHECK(utf8_chars("").empty());
  CHECK(utf8_chars("\xff" "a").size() == 2);
}

TEST_CASE("initializers stay in bounds") {
  Rng rng(1);
  const auto g = glorot_uniform(30, 20, rng);
  const double bound = std::sqrt(6.0 / 50.0);
  for (double x : g.values()) CHECK(std::abs(x) <= bound);
  ParameterStore store;
  auto emb = EmbeddingBank::create(store, "e", Vocabulary::build({{"x", 1}}), 8, rng);
  for (double x : store.get("e.table").value().values()) CHECK(std::abs(x) <= 0.01);
  auto l = LstmLayer::create(store, "l", 3, 4, false, rng);
  for (std::size_t c = 0; c < 16; ++c) CHECK(l.b->value()(0, c) == (c >= 4 && c < 8 ? 1.0 : 0.0));
}

TEST_CASE("linear layer") {
  Rng rng(2);
  ParameterStore store;
  auto lin = Linear::create(store, "lin", 3, 2, rng);
  lin.bias->value() = Tensor::from_rows({{1, -1}});
  Graph g;
  auto x = g.constant(Tensor(4, 3, 0.0));
  const auto& y = lin.apply(g, x).value();
  CHECK(y.rows() == 4);
  CHECK(y(3, 0) == 1.0);
  CHECK(y(3, 1) == -1.0);
}

TEST_CASE("embeddings resolve unknowns and concatenate pretrained vectors") {
  Rng rng(3);
  ParameterStore store;
  const auto vocab = Vocabulary::build({{"cat", 2}, {"dog", 1}});
  const EmbeddingTable pre(2, {{"cat", {1.0, 2.0}}}, {0.5, 0.5});
  auto e = EmbeddingBank::create(store, "w", vocab, 4, rng, &pre);
  CHECK(e.dim() == 6);
  CHECK_FALSE(store.get("w.frozen").trainable());
  const auto ids = e.indices({"cat", "zebra"});
  CHECK(ids == std::vector<int>{2, Vocabulary::kUnk});
  Graph g;
  const auto& v = e.lookup(g, ids).value();
  CHECK(v.cols() == 6);
  CHECK(v(0, 4) == 1.0);
  CHECK(v(0, 5) == 2.0);
  CHECK(v(1, 4) == 0.5);
  auto again = EmbeddingBank::attach(store, "w", vocab);
  CHECK(again.dim() == 6);
}

TEST_CASE("char CNN") {
  Rng rng(4);
  ParameterStore store;
  auto cnn = CharCnn::create(store, "c", char_vocab(), 5, 30, 3, rng);
  CHECK(cnn.output_dim() == 30);
  Graph g;
  for (const std::string w : {"a", "ab", "abcd", "zz\xc3\xb1"}) {
    const auto& v = char_cnn_encode(cnn, g, w).value();
    CHECK(v.rows() == 1);
    CHECK(v.cols() == 30);
    for (double x : v.values()) CHECK(x >= 0.0);
  }
  CHECK(cnn.encode_words(g, {"a", "bb", "c"}).value().rows() == 3);
  CHECK_THROWS_AS(CharCnn::create(store, "even", char_vocab(), 5, 4, 2, rng), ValidationError);

  ParameterStore small;
  auto c2 = CharCnn::create(small, "c", char_vocab(), 3, 4, 3, rng);
  small.get("c.bias").value() = Tensor::from_rows({{0.3, 0.3, 0.3, 0.3}});
  const auto r = grad_check([&](Graph& gg) { return weighted_sum(gg, char_cnn_encode(c2, gg, "abda")); },
                            small.all(), 1e-5, 1e-4);
  CAPTURE(r.max_rel_error);
  CHECK(r.passed);
}

TEST_CASE("lstm step gradients, with and without highway") {
  for (bool highway : {false, true}) {
    CAPTURE(highway);
    Rng rng(5);
    ParameterStore store;
    auto layer = LstmLayer::create(store, "l", 3, 4, highway, rng);
    auto& x = store.add("x", random_tensor(2, 3, rng));
    auto& h0 = store.add("h0", random_tensor(2, 4, rng));
    auto& c0 = store.add("c0", random_tensor(2, 4, rng));
    Tensor mask(2, 4, 2.0);
    mask(0, 1) = 0.0;
    for (const Tensor* m : std::vector<const Tensor*>{nullptr, &mask}) {
      const auto r = grad_check(
          [&](Graph& g) {
            auto s = lstm_step(layer, g, g.param(x), g.param(h0), g.param(c0), m);
            return add(weighted_sum(g, s.out), weighted_sum(g, s.c));
          },
          store.all(), 1e-5, 1e-4);
      CAPTURE(r.max_rel_error);
      CHECK(r.passed);
    }
  }
}

TEST_CASE("closed highway gate passes the input projection through") {
  Rng rng(6);
  ParameterStore store;
  auto layer = LstmLayer::create(store, "l", 3, 4, true, rng);
  layer.b_t->value().fill(-1000.0);
  Graph g;
  auto x = g.constant(random_tensor(1, 3, rng));
  auto s = lstm_step(layer, g, x, g.constant(Tensor(1, 4)), g.constant(Tensor(1, 4)));
  const auto& proj = matmul(x, g.param(*layer.w_p)).value();
  for (std::size_t i = 0; i < 4; ++i) CHECK(s.out.value()(0, i) == doctest::Approx(proj(0, i)).epsilon(1e-12));
  CHECK(s.h.value() != s.out.value());
}

TEST_CASE("two-layer BiLSTM") {
  Rng rng(7);
  ParameterStore store;
  BiLstmConfig cfg{3, 4, 2, true, 0.3, 0.3};
  auto stack = BiLstmStack::create(store, "bi", cfg, rng);
  auto& input = store.add("input", random_tensor(5, 3, rng));

  SUBCASE("shapes and gradient check") {
    Graph g;
    Rng r(1);
    CHECK(bilstm_forward(stack, g, g.param(input), 5, 1, false, r).value().cols() == 8);
    const auto rep = grad_check(
        [&](Graph& gg) {
          Rng rr(11);
          return weighted_sum(gg, bilstm_forward(stack, gg, gg.param(input), 5, 1, true, rr));
        },
        store.all(), 1e-5, 1e-4);
    CAPTURE(rep.max_rel_error);
    CHECK(rep.passed);
  }
  SUBCASE("inference is deterministic and dropout-free") {
    auto run = [&](bool train, std::uint64_t seed, const BiLstmStack& s) {
      Graph g;
      Rng r(seed);
      return bilstm_forward(s, g, g.constant(input.value()), 5, 1, train, r).value();
    };
    CHECK(run(false, 1, stack) == run(false, 2, stack));
    CHECK(run(true, 1, stack) != run(false, 1, stack));
    CHECK(run(true, 3, stack) == run(true, 3, stack));
    BiLstmStack no_drop = stack;
    no_drop.config.recurrent_dropout = 0;
    no_drop.config.layer_dropout = 0;
    CHECK(run(true, 1, no_drop) == run(false, 1, stack));
  }
  SUBCASE("batch rows are independent") {
    Tensor other = random_tensor(5, 3, rng);
    Tensor both(10, 3);
    for (std::size_t t = 0; t < 5; ++t)
      for (std::size_t c = 0; c < 3; ++c) {
        both(2 * t, c) = input.value()(t, c);
        both(2 * t + 1, c) = other(t, c);
      }
    Graph g;
    Rng r(1);
    const Tensor alone = bilstm_forward(stack, g, g.constant(input.value()), 5, 1, false, r).value();
    const Tensor batched = bilstm_forward(stack, g, g.constant(both), 5, 2, false, r).value();
    for (std::size_t t = 0; t < 5; ++t)
      for (std::size_t c = 0; c < 8; ++c) CHECK(batched(2 * t, c) == alone(t, c));
  }
}

TEST_CASE("no dead parameters on random small configs") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Rng rng(seed);
    const std::size_t in = 2 + rng.below(4), hidden = 2 + rng.below(5), layers = 1 + rng.below(3);
    ParameterStore store;
    auto stack = BiLstmStack::create(store, "bi", {in, hidden, layers, rng.bernoulli(0.5), 0, 0}, rng);
    const std::size_t steps = 2 + rng.below(4);
    auto& input = store.add("input", random_tensor(steps, in, rng));
    Graph g;
    g.backward(weighted_sum(g, bilstm_forward(stack, g, g.param(input), steps, 1, true, rng)));
    for (const auto* p : store.all()) {
      CAPTURE(p->name());
      double norm = 0;
      for (double v : p->grad().values()) norm += v * v;
      CHECK(norm > 0.0);
    }
  }
}

TEST_CASE("palindromic stack is reversal symmetric") {
  for (std::size_t layers : {1u, 2u}) {
    CAPTURE(layers);
    Rng rng(8);
    ParameterStore store;
    BiLstmConfig cfg{3, 4, layers, true, 0.0, 0.0};
    auto stack = BiLstmStack::create(store, "bi", cfg, rng);
    for (std::size_t l = 0; l < layers; ++l) {
      if (l > 0) {
        for (auto* p : {stack.forward[l].w_x, stack.forward[l].w_tx, stack.forward[l].w_p}) mirror_halves(p);
      }
      copy_layer(stack.forward[l], stack.backward[l]);
    }
    const Tensor x = random_tensor(3, 3, rng);
    Graph g;
    Rng r(1);
    const Tensor y = bilstm_forward(stack, g, g.constant(x), 3, 1, false, r).value();
    const Tensor yr = bilstm_forward(stack, g, g.constant(reverse_rows(x)), 3, 1, false, r).value();
    for (std::size_t t = 0; t < 3; ++t) {
      for (std::size_t c = 0; c < 4; ++c) {
        CHECK(yr(2 - t, c) == doctest::Approx(y(t, 4 + c)).epsilon(1e-12));
        CHECK(yr(2 - t, 4 + c) == doctest::Approx(y(t, c)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("full-size stack produces 1024-wide encodings") {
  Rng rng(9);
  ParameterStore store;
  auto stack = BiLstmStack::create(store, "bi", {8, 512, 1, true, 0, 0}, rng);
  CHECK(stack.output_dim() == 1024);
  Graph g;
  CHECK(bilstm_forward(stack, g, g.constant(Tensor(2, 8, 0.1)), 2, 1, false, rng).value().cols() == 1024);
}
