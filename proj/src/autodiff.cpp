#include "stagsrl/autodiff.hpp"

#include <algorithm>
#include <cmath>

#include "stagsrl/error.hpp"
#include "stagsrl/kernels.hpp"

namespace stagsrl {

Parameter::Parameter(std::string name, Tensor value, bool trainable)
    : name_(std::move(name)),
      value_(std::move(value)),
      grad_(value_.rows(), value_.cols(), 0.0),
      trainable_(trainable) {}

Parameter& ParameterStore::add(const std::string& name, Tensor init, bool trainable) {
  if (contains(name)) throw ValidationError("duplicate parameter name '" + name + "'");
  return params_.emplace_back(name, std::move(init), trainable);
}

Parameter& ParameterStore::get(const std::string& name) {
  for (auto& p : params_) {
    if (p.name() == name) return p;
  }
  throw ValidationError("unknown parameter '" + name + "'");
}

const Parameter& ParameterStore::get(const std::string& name) const {
  for (const auto& p : params_) {
    if (p.name() == name) return p;
  }
  throw ValidationError("unknown parameter '" + name + "'");
}

bool ParameterStore::contains(const std::string& name) const {
  return std::any_of(params_.begin(), params_.end(),
                     [&](const Parameter& p) { return p.name() == name; });
}

std::vector<Parameter*> ParameterStore::all() {
  std::vector<Parameter*> out;
  for (auto& p : params_) out.push_back(&p);
  return out;
}

std::vector<const Parameter*> ParameterStore::all() const {
  std::vector<const Parameter*> out;
  for (const auto& p : params_) out.push_back(&p);
  return out;
}

std::vector<Parameter*> ParameterStore::trainable() {
  std::vector<Parameter*> out;
  for (auto& p : params_) {
    if (p.trainable()) out.push_back(&p);
  }
  return out;
}

void ParameterStore::zero_grad() {
  for (auto& p : params_) p.zero_grad();
}

const Tensor& Var::value() const { return graph->value(*this); }

// ---- graph -------------------------------------------------------------------

Var Graph::push(Node n) {
  nodes_.push_back(std::move(n));
  return Var{this, static_cast<int>(nodes_.size() - 1)};
}

Var Graph::constant(Tensor value) {
  Node n;
  n.op = OpKind::Constant;
  n.value = std::move(value);
  return push(std::move(n));
}

Var Graph::input(Tensor value) {
  Node n;
  n.op = OpKind::Input;
  n.value = std::move(value);
  n.requires_grad = true;
  return push(std::move(n));
}

Var Graph::param(Parameter& p) {
  Node n;
  n.op = OpKind::Param;
  n.param = &p;
  n.requires_grad = p.trainable();
  return push(std::move(n));
}

const Tensor& Graph::value(Var v) const { return node_value(node(v)); }

const Tensor& Graph::grad(Var v) const {
  const Node& n = node(v);
  return n.param ? n.param->grad() : n.grad;
}

Tensor& Graph::grad_slot(int id) {
  Node& n = nodes_[static_cast<std::size_t>(id)];
  if (n.param) return n.param->grad();
  if (n.grad.empty()) {
    const Tensor& v = node_value(n);
    n.grad = Tensor(v.rows(), v.cols(), 0.0);
  }
  return n.grad;
}

void Graph::backward(Var loss) {
  if (loss.graph != this) throw ShapeError("backward: loss belongs to another graph");
  const Tensor& lv = value(loss);
  if (lv.size() != 1) throw ShapeError("backward: loss must be scalar, got " + lv.shape_string());
  if (!node(loss).requires_grad) return;
  Tensor& g = grad_slot(loss.id);
  g[0] += 1.0;
  for (int id = loss.id; id >= 0; --id) {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    if (!n.requires_grad || n.inputs.empty()) continue;
    if (n.grad.empty()) continue;
    backward_node(id);
  }
}

namespace {

[[noreturn]] void shape_fail(const char* op, const Tensor& a, const Tensor& b) {
  throw ShapeError(std::string(op) + ": incompatible shapes " + a.shape_string() + " and " +
                   b.shape_string());
}

Graph& graph_of(Var a) {
  if (!a.graph) throw ShapeError("operation on an unbound Var");
  return *a.graph;
}

void check_same_graph(Var a, Var b) {
  if (a.graph != b.graph) throw ShapeError("operands belong to different graphs");
}

Graph::Node make_node(OpKind op, std::initializer_list<Var> in) {
  Graph::Node n;
  n.op = op;
  for (Var v : in) {
    n.inputs.push_back(v.id);
    n.requires_grad = n.requires_grad || v.graph->requires_grad(v);
  }
  return n;
}

template <typename F>
Var unary(Var a, OpKind op, F f) {
  Graph& g = graph_of(a);
  const Tensor& x = a.value();
  Graph::Node n = make_node(op, {a});
  n.value = Tensor(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.size(); ++i) n.value[i] = f(x[i]);
  return g.push(std::move(n));
}

double stable_sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

void Graph::backward_node(int id) {
  const auto& K = kernels::active();
  Node& n = nodes_[static_cast<std::size_t>(id)];
  const Tensor& g = n.grad;
  const Tensor& y = n.value;
  auto in = [&](std::size_t k) { return n.inputs[k]; };
  auto needs = [&](std::size_t k) { return nodes_[static_cast<std::size_t>(in(k))].requires_grad; };
  auto val = [&](std::size_t k) -> const Tensor& {
    return node_value(nodes_[static_cast<std::size_t>(in(k))]);
  };

  switch (n.op) {
    case OpKind::Constant:
    case OpKind::Input:
    case OpKind::Param:
      break;
    case OpKind::Add:
      if (needs(0)) K.axpy(g.size(), 1.0, g.data(), grad_slot(in(0)).data());
      if (needs(1)) K.axpy(g.size(), 1.0, g.data(), grad_slot(in(1)).data());
      break;
    case OpKind::AddRow:
      if (needs(0)) K.axpy(g.size(), 1.0, g.data(), grad_slot(in(0)).data());
      if (needs(1)) {
        Tensor& gb = grad_slot(in(1));
        for (std::size_t r = 0; r < g.rows(); ++r) K.axpy(g.cols(), 1.0, g.row_ptr(r), gb.data());
      }
      break;
    case OpKind::Sub:
      if (needs(0)) K.axpy(g.size(), 1.0, g.data(), grad_slot(in(0)).data());
      if (needs(1)) K.axpy(g.size(), -1.0, g.data(), grad_slot(in(1)).data());
      break;
    case OpKind::Mul:
      if (needs(0)) K.mul_acc(g.size(), g.data(), val(1).data(), grad_slot(in(0)).data());
      if (needs(1)) K.mul_acc(g.size(), g.data(), val(0).data(), grad_slot(in(1)).data());
      break;
    case OpKind::Scale:
      if (needs(0)) K.axpy(g.size(), n.scalar, g.data(), grad_slot(in(0)).data());
      break;
    case OpKind::Sum:
      if (needs(0)) {
        Tensor& ga = grad_slot(in(0));
        const double gv = g[0];
        for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += gv;
      }
      break;
    case OpKind::MatMul: {
      const Tensor& A = val(0);
      const Tensor& B = val(1);
      const std::size_t m = A.rows(), k = A.cols(), cols = B.cols();
      if (needs(0)) K.gemm_nt(m, k, cols, g.data(), B.data(), grad_slot(in(0)).data());
      if (needs(1)) K.gemm_tn(k, cols, m, A.data(), g.data(), grad_slot(in(1)).data());
      break;
    }
    case OpKind::Transpose:
      if (needs(0)) {
        Tensor& ga = grad_slot(in(0));
        for (std::size_t r = 0; r < g.rows(); ++r) {
          for (std::size_t c = 0; c < g.cols(); ++c) ga(c, r) += g(r, c);
        }
      }
      break;
    case OpKind::Concat: {
      std::size_t offset = 0;
      for (std::size_t k = 0; k < n.inputs.size(); ++k) {
        const Tensor& part = val(k);
        if (needs(k)) {
          Tensor& gp = grad_slot(in(k));
          if (n.a == 0) {
            K.axpy(part.size(), 1.0, g.row_ptr(offset), gp.data());
          } else {
            for (std::size_t r = 0; r < part.rows(); ++r) {
              K.axpy(part.cols(), 1.0, g.row_ptr(r) + offset, gp.row_ptr(r));
            }
          }
        }
        offset += n.a == 0 ? part.rows() : part.cols();
      }
      break;
    }
    case OpKind::Slice:
      if (needs(0)) {
        Tensor& ga = grad_slot(in(0));
        if (n.a == 0) {
          K.axpy(g.size(), 1.0, g.data(), ga.row_ptr(n.b));
        } else {
          for (std::size_t r = 0; r < g.rows(); ++r) {
            K.axpy(g.cols(), 1.0, g.row_ptr(r), ga.row_ptr(r) + n.b);
          }
        }
      }
      break;
    case OpKind::Gather:
      if (needs(0)) {
        Tensor& gt = grad_slot(in(0));
        for (std::size_t r = 0; r < n.ints.size(); ++r) {
          K.axpy(g.cols(), 1.0, g.row_ptr(r), gt.row_ptr(static_cast<std::size_t>(n.ints[r])));
        }
      }
      break;
    case OpKind::Sigmoid:
      if (needs(0)) {
        Tensor& ga = grad_slot(in(0));
        for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * y[i] * (1.0 - y[i]);
      }
      break;
    case OpKind::Tanh:
      if (needs(0)) {
        Tensor& ga = grad_slot(in(0));
        for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * (1.0 - y[i] * y[i]);
      }
      break;
    case OpKind::Relu:
      if (needs(0)) {
        Tensor& ga = grad_slot(in(0));
        for (std::size_t i = 0; i < g.size(); ++i) {
          if (y[i] > 0.0) ga[i] += g[i];
        }
      }
      break;
    case OpKind::Softmax:
      if (needs(0)) {
        Tensor& ga = grad_slot(in(0));
        if (n.a == 1) {
          for (std::size_t r = 0; r < y.rows(); ++r) {
            const double d = K.dot(y.cols(), g.row_ptr(r), y.row_ptr(r));
            for (std::size_t c = 0; c < y.cols(); ++c) ga(r, c) += y(r, c) * (g(r, c) - d);
          }
        } else {
          for (std::size_t c = 0; c < y.cols(); ++c) {
            double d = 0.0;
            for (std::size_t r = 0; r < y.rows(); ++r) d += g(r, c) * y(r, c);
            for (std::size_t r = 0; r < y.rows(); ++r) ga(r, c) += y(r, c) * (g(r, c) - d);
          }
        }
      }
      break;
    case OpKind::MaxOverAxis:
      if (needs(0)) {
        Tensor& ga = grad_slot(in(0));
        if (n.a == 0) {
          for (std::size_t c = 0; c < g.cols(); ++c) {
            ga(static_cast<std::size_t>(n.ints[c]), c) += g(0, c);
          }
        } else {
          for (std::size_t r = 0; r < g.rows(); ++r) {
            ga(r, static_cast<std::size_t>(n.ints[r])) += g(r, 0);
          }
        }
      }
      break;
    case OpKind::Dropout:
      if (needs(0)) K.mul_acc(g.size(), g.data(), n.aux.data(), grad_slot(in(0)).data());
      break;
    case OpKind::Conv1d: {
      const Tensor& X = val(0);
      const Tensor& W = val(1);
      const std::size_t C = X.cols(), F = W.cols(), span = n.a * C;
      for (std::size_t t = 0; t < g.rows(); ++t) {
        if (needs(1)) K.gemm_tn(span, F, 1, X.row_ptr(t), g.row_ptr(t), grad_slot(in(1)).data());
        if (needs(0)) K.gemm_nt(1, span, F, g.row_ptr(t), W.data(), grad_slot(in(0)).row_ptr(t));
      }
      break;
    }
    case OpKind::CrossEntropy:
      if (needs(0)) {
        Tensor& ga = grad_slot(in(0));
        const double gv = g[0];
        for (std::size_t r = 0; r < n.aux.rows(); ++r) {
          const int t = n.ints[r];
          if (t < 0) continue;
          for (std::size_t c = 0; c < n.aux.cols(); ++c) {
            ga(r, c) += gv * (n.aux(r, c) - (static_cast<int>(c) == t ? 1.0 : 0.0));
          }
        }
      }
      break;
  }
}

// ---- operations --------------------------------------------------------------

Var add(Var a, Var b) {
  check_same_graph(a, b);
  Graph& g = graph_of(a);
  const Tensor& x = a.value();
  const Tensor& z = b.value();
  if (x.same_shape(z)) {
    Graph::Node n = make_node(OpKind::Add, {a, b});
    n.value = x;
    kernels::active().axpy(z.size(), 1.0, z.data(), n.value.data());
    return g.push(std::move(n));
  }
  if (z.rows() == 1 && z.cols() == x.cols()) {
    Graph::Node n = make_node(OpKind::AddRow, {a, b});
    n.value = x;
    for (std::size_t r = 0; r < x.rows(); ++r) {
      kernels::active().axpy(z.cols(), 1.0, z.data(), n.value.row_ptr(r));
    }
    return g.push(std::move(n));
  }
  shape_fail("add", x, z);
}

Var sub(Var a, Var b) {
  check_same_graph(a, b);
  const Tensor& x = a.value();
  const Tensor& z = b.value();
  if (!x.same_shape(z)) shape_fail("sub", x, z);
  Graph::Node n = make_node(OpKind::Sub, {a, b});
  n.value = x;
  kernels::active().axpy(z.size(), -1.0, z.data(), n.value.data());
  return graph_of(a).push(std::move(n));
}

Var mul(Var a, Var b) {
  check_same_graph(a, b);
  const Tensor& x = a.value();
  const Tensor& z = b.value();
  if (!x.same_shape(z)) shape_fail("mul", x, z);
  Graph::Node n = make_node(OpKind::Mul, {a, b});
  n.value = Tensor(x.rows(), x.cols());
  kernels::active().mul(x.size(), x.data(), z.data(), n.value.data());
  return graph_of(a).push(std::move(n));
}

Var scale(Var a, double s) {
  Graph::Node n = make_node(OpKind::Scale, {a});
  n.value = a.value();
  for (std::size_t i = 0; i < n.value.size(); ++i) n.value[i] *= s;
  n.scalar = s;
  return graph_of(a).push(std::move(n));
}

Var sum(Var a) {
  Graph::Node n = make_node(OpKind::Sum, {a});
  double s = 0.0;
  for (double v : a.value().values()) s += v;
  n.value = Tensor::scalar(s);
  return graph_of(a).push(std::move(n));
}

Var matmul(Var a, Var b) {
  check_same_graph(a, b);
  const Tensor& x = a.value();
  const Tensor& z = b.value();
  if (x.cols() != z.rows()) shape_fail("matmul", x, z);
  Graph::Node n = make_node(OpKind::MatMul, {a, b});
  n.value = Tensor(x.rows(), z.cols());
  kernels::active().gemm_nn(x.rows(), z.cols(), x.cols(), x.data(), z.data(), n.value.data());
  return graph_of(a).push(std::move(n));
}

Var transpose(Var a) {
  const Tensor& x = a.value();
  Graph::Node n = make_node(OpKind::Transpose, {a});
  n.value = Tensor(x.cols(), x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < x.cols(); ++c) n.value(c, r) = x(r, c);
  }
  return graph_of(a).push(std::move(n));
}

Var concat(const std::vector<Var>& parts, int axis) {
  if (parts.empty()) throw ShapeError("concat: no operands");
  if (axis != 0 && axis != 1) throw ShapeError("concat: axis must be 0 or 1");
  Graph& g = graph_of(parts[0]);
  Graph::Node n;
  n.op = OpKind::Concat;
  n.a = static_cast<std::size_t>(axis);
  const Tensor& first = parts[0].value();
  std::size_t rows = 0, cols = 0;
  for (Var p : parts) {
    check_same_graph(parts[0], p);
    const Tensor& v = p.value();
    if (axis == 0) {
      if (v.cols() != first.cols()) shape_fail("concat(axis=0)", first, v);
      rows += v.rows();
      cols = v.cols();
    } else {
      if (v.rows() != first.rows()) shape_fail("concat(axis=1)", first, v);
      cols += v.cols();
      rows = v.rows();
    }
    n.inputs.push_back(p.id);
    n.requires_grad = n.requires_grad || g.requires_grad(p);
  }
  n.value = Tensor(rows, cols);
  std::size_t offset = 0;
  for (Var p : parts) {
    const Tensor& v = p.value();
    if (axis == 0) {
      std::copy(v.data(), v.data() + v.size(), n.value.row_ptr(offset));
      offset += v.rows();
    } else {
      for (std::size_t r = 0; r < v.rows(); ++r) {
        std::copy(v.row_ptr(r), v.row_ptr(r) + v.cols(), n.value.row_ptr(r) + offset);
      }
      offset += v.cols();
    }
  }
  return g.push(std::move(n));
}

Var slice(Var a, int axis, std::size_t begin, std::size_t end) {
  const Tensor& x = a.value();
  const std::size_t extent = axis == 0 ? x.rows() : x.cols();
  if ((axis != 0 && axis != 1) || begin >= end || end > extent) {
    throw ShapeError("slice: range [" + std::to_string(begin) + "," + std::to_string(end) +
                     ") on axis " + std::to_string(axis) + " invalid for " + x.shape_string());
  }
  Graph::Node n = make_node(OpKind::Slice, {a});
  n.a = static_cast<std::size_t>(axis);
  n.b = begin;
  if (axis == 0) {
    n.value = Tensor(end - begin, x.cols());
    std::copy(x.row_ptr(begin), x.row_ptr(end), n.value.data());
  } else {
    n.value = Tensor(x.rows(), end - begin);
    for (std::size_t r = 0; r < x.rows(); ++r) {
      std::copy(x.row_ptr(r) + begin, x.row_ptr(r) + end, n.value.row_ptr(r));
    }
  }
  return graph_of(a).push(std::move(n));
}

Var embedding_lookup(Var table, const std::vector<int>& indices) {
  const Tensor& t = table.value();
  if (indices.empty()) throw ShapeError("embedding_lookup: no indices");
  Graph::Node n = make_node(OpKind::Gather, {table});
  n.value = Tensor(indices.size(), t.cols());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const int idx = indices[r];
    if (idx < 0 || static_cast<std::size_t>(idx) >= t.rows()) {
      throw ShapeError("embedding_lookup: index " + std::to_string(idx) + " outside table " +
                       t.shape_string());
    }
    std::copy(t.row_ptr(static_cast<std::size_t>(idx)), t.row_ptr(static_cast<std::size_t>(idx)) + t.cols(),
              n.value.row_ptr(r));
  }
  n.ints = indices;
  return graph_of(table).push(std::move(n));
}

Var sigmoid(Var a) { return unary(a, OpKind::Sigmoid, stable_sigmoid); }

Var tanh(Var a) { return unary(a, OpKind::Tanh, [](double x) { return std::tanh(x); }); }

Var relu(Var a) { return unary(a, OpKind::Relu, [](double x) { return x > 0.0 ? x : 0.0; }); }

Var softmax(Var a, int axis) {
  if (axis != 0 && axis != 1) throw ShapeError("softmax: axis must be 0 or 1");
  const Tensor& x = a.value();
  Graph::Node n = make_node(OpKind::Softmax, {a});
  n.a = static_cast<std::size_t>(axis);
  n.value = Tensor(x.rows(), x.cols());
  const std::size_t outer = axis == 1 ? x.rows() : x.cols();
  const std::size_t inner = axis == 1 ? x.cols() : x.rows();
  auto at = [&](Tensor& t, std::size_t o, std::size_t i) -> double& {
    return axis == 1 ? t(o, i) : t(i, o);
  };
  for (std::size_t o = 0; o < outer; ++o) {
    double mx = -INFINITY;
    for (std::size_t i = 0; i < inner; ++i) mx = std::max(mx, axis == 1 ? x(o, i) : x(i, o));
    double z = 0.0;
    for (std::size_t i = 0; i < inner; ++i) {
      double e = std::exp((axis == 1 ? x(o, i) : x(i, o)) - mx);
      at(n.value, o, i) = e;
      z += e;
    }
    for (std::size_t i = 0; i < inner; ++i) at(n.value, o, i) /= z;
  }
  return graph_of(a).push(std::move(n));
}

Var max_over_axis(Var a, int axis) {
  if (axis != 0 && axis != 1) throw ShapeError("max_over_axis: axis must be 0 or 1");
  const Tensor& x = a.value();
  Graph::Node n = make_node(OpKind::MaxOverAxis, {a});
  n.a = static_cast<std::size_t>(axis);
  if (axis == 0) {
    n.value = Tensor(1, x.cols());
    n.ints.assign(x.cols(), 0);
    for (std::size_t c = 0; c < x.cols(); ++c) {
      std::size_t best = 0;
      for (std::size_t r = 1; r < x.rows(); ++r) {
        if (x(r, c) > x(best, c)) best = r;
      }
      n.ints[c] = static_cast<int>(best);
      n.value(0, c) = x(best, c);
    }
  } else {
    n.value = Tensor(x.rows(), 1);
    n.ints.assign(x.rows(), 0);
    for (std::size_t r = 0; r < x.rows(); ++r) {
      std::size_t best = 0;
      for (std::size_t c = 1; c < x.cols(); ++c) {
        if (x(r, c) > x(r, best)) best = c;
      }
      n.ints[r] = static_cast<int>(best);
      n.value(r, 0) = x(r, best);
    }
  }
  return graph_of(a).push(std::move(n));
}

Var dropout(Var a, double rate, Rng& rng, bool train) {
  if (!(rate >= 0.0 && rate < 1.0)) throw ValidationError("dropout: rate must lie in [0, 1)");
  if (!train || rate == 0.0) return a;
  const Tensor& x = a.value();
  Graph::Node n = make_node(OpKind::Dropout, {a});
  n.aux = Tensor(x.rows(), x.cols());
  const double keep_scale = 1.0 / (1.0 - rate);
  for (std::size_t i = 0; i < x.size(); ++i) n.aux[i] = rng.uniform() < rate ? 0.0 : keep_scale;
  n.value = Tensor(x.rows(), x.cols());
  kernels::active().mul(x.size(), x.data(), n.aux.data(), n.value.data());
  return graph_of(a).push(std::move(n));
}

Var conv1d(Var input, Var filters, std::size_t window) {
  check_same_graph(input, filters);
  const Tensor& x = input.value();
  const Tensor& w = filters.value();
  if (window == 0 || x.rows() < window || w.rows() != window * x.cols()) {
    throw ShapeError("conv1d: input " + x.shape_string() + " and filters " + w.shape_string() +
                     " incompatible with window " + std::to_string(window));
  }
  Graph::Node n = make_node(OpKind::Conv1d, {input, filters});
  n.a = window;
  const std::size_t out_rows = x.rows() - window + 1;
  n.value = Tensor(out_rows, w.cols());
  for (std::size_t t = 0; t < out_rows; ++t) {
    // Rows t..t+window-1 are contiguous, so the window is already flattened.
    kernels::active().gemm_nn(1, w.cols(), w.rows(), x.row_ptr(t), w.data(), n.value.row_ptr(t));
  }
  return graph_of(input).push(std::move(n));
}

Var cross_entropy(Var logits, const std::vector<int>& targets) {
  const Tensor& x = logits.value();
  if (targets.size() != x.rows()) {
    throw ShapeError("cross_entropy: " + std::to_string(targets.size()) + " targets for logits " +
                     x.shape_string());
  }
  Graph::Node n = make_node(OpKind::CrossEntropy, {logits});
  n.aux = Tensor(x.rows(), x.cols());
  double total = 0.0;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    double mx = -INFINITY;
    for (std::size_t c = 0; c < x.cols(); ++c) mx = std::max(mx, x(r, c));
    double z = 0.0;
    for (std::size_t c = 0; c < x.cols(); ++c) z += std::exp(x(r, c) - mx);
    const double lse = mx + std::log(z);
    for (std::size_t c = 0; c < x.cols(); ++c) n.aux(r, c) = std::exp(x(r, c) - lse);
    const int t = targets[r];
    if (t < 0) continue;
    if (static_cast<std::size_t>(t) >= x.cols()) {
      throw ShapeError("cross_entropy: target " + std::to_string(t) + " outside " +
                       std::to_string(x.cols()) + " classes");
    }
    total += lse - x(r, static_cast<std::size_t>(t));
  }
  n.ints = targets;
  n.value = Tensor::scalar(total);
  return graph_of(logits).push(std::move(n));
}

Var cross_entropy(Var logits, int target) { return cross_entropy(logits, std::vector<int>{target}); }

}  // namespace stagsrl
