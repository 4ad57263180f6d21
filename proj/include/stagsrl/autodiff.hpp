#pragma once

// Tape-based reverse-mode automatic differentiation over 2-D tensors.
//
// A Graph records nodes in creation order, which is a topological order, so
// backward() is a single reverse sweep. Parameters live outside graphs; their
// gradients accumulate across backward() calls until zero_grad().
//
// Broadcasting is limited to adding a 1 x n row to every row of an m x n
// matrix (bias add).
//
// A graph is confined to one thread. Parameters may be read concurrently by
// several inference graphs.

#include <deque>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "stagsrl/rng.hpp"
#include "stagsrl/tensor.hpp"

namespace stagsrl {

class Parameter {
 public:
  Parameter(std::string name, Tensor value, bool trainable = true);

  const std::string& name() const { return name_; }
  Tensor& value() { return value_; }
  const Tensor& value() const { return value_; }
  Tensor& grad() { return grad_; }
  const Tensor& grad() const { return grad_; }
  bool trainable() const { return trainable_; }
  void set_trainable(bool t) { trainable_ = t; }
  void zero_grad() { grad_.fill(0.0); }

 private:
  std::string name_;
  Tensor value_;
  Tensor grad_;
  bool trainable_;
};

// Owns parameters with stable addresses, in insertion order.
class ParameterStore {
 public:
  Parameter& add(const std::string& name, Tensor init, bool trainable = true);
  Parameter& get(const std::string& name);
  const Parameter& get(const std::string& name) const;
  bool contains(const std::string& name) const;
  std::vector<Parameter*> all();
  std::vector<const Parameter*> all() const;
  std::vector<Parameter*> trainable();
  void zero_grad();
  std::size_t size() const { return params_.size(); }

 private:
  std::deque<Parameter> params_;
};

class Graph;

struct Var {
  Graph* graph = nullptr;
  int id = -1;

  const Tensor& value() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
};

enum class OpKind {
  Constant,
  Input,
  Param,
  Add,
  AddRow,
  Sub,
  Mul,
  Scale,
  Sum,
  MatMul,
  Transpose,
  Concat,
  Slice,
  Gather,
  Sigmoid,
  Tanh,
  Relu,
  Softmax,
  MaxOverAxis,
  Dropout,
  Conv1d,
  CrossEntropy,
};

class Graph {
 public:
  Graph() { nodes_.reserve(256); }
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  Var constant(Tensor value);
  // Leaf that receives a gradient.
  Var input(Tensor value);
  Var param(Parameter& p);

  const Tensor& value(Var v) const;
  // Empty tensor when no gradient reached the node. For parameter nodes this
  // is the parameter's accumulated gradient.
  const Tensor& grad(Var v) const;
  bool requires_grad(Var v) const { return node(v).requires_grad; }
  OpKind op(Var v) const { return node(v).op; }
  std::size_t size() const { return nodes_.size(); }

  // loss must be 1 x 1. Throws ShapeError otherwise.
  void backward(Var loss);

  struct Node {
    OpKind op;
    Tensor value;
    Tensor grad;
    std::vector<int> inputs;
    bool requires_grad = false;
    Parameter* param = nullptr;
    Tensor aux;             // dropout mask, softmax probabilities
    std::vector<int> ints;  // gather indices, argmax, targets
    std::size_t a = 0, b = 0;  // axis / offsets / window
    double scalar = 0.0;
  };

  Var push(Node n);
  Node& node(Var v) { return nodes_[static_cast<std::size_t>(v.id)]; }
  const Node& node(Var v) const { return nodes_[static_cast<std::size_t>(v.id)]; }

 private:
  const Tensor& node_value(const Node& n) const { return n.param ? n.param->value() : n.value; }
  Tensor& grad_slot(int id);
  void backward_node(int id);

  std::vector<Node> nodes_;
};

// ---- forward operations ----------------------------------------------------
// Shape mismatches throw ShapeError naming the op and both shapes.

// Same shape, or b is a 1 x n row added to each row of a.
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);  // elementwise
Var scale(Var a, double s);
Var sum(Var a);  // 1 x 1
Var matmul(Var a, Var b);
Var transpose(Var a);
// axis 0 stacks rows, axis 1 joins columns.
Var concat(const std::vector<Var>& parts, int axis);
// Half-open range [begin, end) along axis.
Var slice(Var a, int axis, std::size_t begin, std::size_t end);
// Rows of `table` selected by index (embedding lookup / row gather).
Var embedding_lookup(Var table, const std::vector<int>& indices);
Var sigmoid(Var a);
Var tanh(Var a);
Var relu(Var a);
// Numerically stable; axis 1 normalizes each row, axis 0 each column.
Var softmax(Var a, int axis = 1);
// axis 0 -> 1 x cols (max of each column), axis 1 -> rows x 1.
Var max_over_axis(Var a, int axis);
// Inverted dropout: kept entries are scaled by 1/(1-rate). Returns `a`
// unchanged when rate == 0 or train is false. rate must be in [0, 1).
Var dropout(Var a, double rate, Rng& rng, bool train = true);
// input: T x C, filters: (window*C) x F, output: (T-window+1) x F with
// out[t] = concat(input[t..t+window-1]) * filters.
Var conv1d(Var input, Var filters, std::size_t window);
// Sum over rows of -log softmax(logits[r])[targets[r]]; rows whose target is
// negative are masked out. Uses log-sum-exp.
Var cross_entropy(Var logits, const std::vector<int>& targets);
Var cross_entropy(Var logits, int target);

// ---- gradient checking -----------------------------------------------------

struct GradCheckEntry {
  std::string name;
  std::size_t elements = 0;
  double max_rel_error = 0.0;
};

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;
  double max_rel_error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

// Compares backward() against central differences for every element of every
// parameter. Relative error = |analytic - numeric| / max(1, |numeric|).
// `loss_fn` must be deterministic (reseed any dropout RNG inside it).
GradCheckReport grad_check(const std::function<Var(Graph&)>& loss_fn,
                           const std::vector<Parameter*>& params, double step = 1e-5,
                           double tolerance = 1e-4);

}  // namespace stagsrl
