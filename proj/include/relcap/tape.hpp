#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "relcap/tensor.hpp"

namespace relcap {

class Tape;

// Handle to a value recorded on a tape. Cheap to copy; valid as long as the
// tape is alive.
struct Var {
  Tape* tape = nullptr;
  std::uint32_t id = 0;

  const Tensor& value() const;
  const Tensor& grad() const;
};

// Reverse-mode differentiation record. Every forward op appends one node;
// backward() walks the nodes in reverse and deposits gradients. A tape is
// confined to one logical thread.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // A differentiable leaf (parameter or input).
  Var leaf(Tensor value);

  // A leaf whose gradient is never consumed. Same mechanics; the name marks
  // intent at call sites.
  Var constant(Tensor value) { return leaf(std::move(value)); }

  const Tensor& value(Var v) const { return nodes_[v.id].value; }
  const Tensor& grad(Var v) const { return nodes_[v.id].grad; }

  // Seeds d(loss)/d(loss) = 1 and replays the tape in reverse. The loss must
  // be a scalar recorded on this tape. Gradients of earlier calls are cleared.
  void backward(Var loss);

  std::size_t size() const { return nodes_.size(); }

 private:
  using BackwardFn = std::function<void(Tape&, std::uint32_t)>;

  struct Node {
    Tensor value;
    Tensor grad;
    BackwardFn backward;  // empty for leaves
  };

  Var emit(Tensor value, BackwardFn fn);
  Node& node(std::uint32_t id) { return nodes_[id]; }

  std::vector<Node> nodes_;

  friend struct Var;

  friend Var matmul(Var a, Var b);
  friend Var matvec(Var m, Var x);
  friend Var add(Var a, Var b);
  friend Var mul(Var a, Var b);
  friend Var relu(Var x);
  friend Var sigmoid(Var x);
  friend Var tanh(Var x);
  friend Var softmax(Var x);
  friend Var concat(const std::vector<Var>& parts);
  friend Var sum_list(const std::vector<Var>& terms);
  friend Var mean_list(const std::vector<Var>& terms);
  friend Var scale(Var x, Var s);
  friend Var scale_const(Var x, double c);
  friend Var dot(Var a, Var b);
  friend Var stack(const std::vector<Var>& scalars);
  friend Var at(Var x, std::size_t i);
  friend Var row(Var m, std::size_t r);
  friend Var col(Var m, std::size_t c);
  friend Var weighted_sum(Var weights, const std::vector<Var>& rows);
  friend Var cross_entropy(Var logits, std::size_t target);
};

// --- forward ops -----------------------------------------------------------
//
// Shapes are validated on entry; a mismatch throws std::invalid_argument
// naming the op and both shapes. All ops are deterministic; reductions over
// neighbor/region collections (sum_list, mean_list, weighted_sum, the softmax
// normalizer) use value-sorted accumulation so results do not depend on the
// enumeration order of their inputs.

Var matmul(Var a, Var b);                       // (m,k)x(k,n) -> (m,n)
Var matvec(Var m, Var x);                       // (m,n)x(n) -> (m)
Var add(Var a, Var b);                          // elementwise, same shape
Var mul(Var a, Var b);                          // elementwise, same shape
Var relu(Var x);
Var sigmoid(Var x);
Var tanh(Var x);
Var softmax(Var x);                             // 1-d, max-subtracted
Var concat(const std::vector<Var>& parts);      // 1-d concat
Var sum_list(const std::vector<Var>& terms);    // same-shape sum
Var mean_list(const std::vector<Var>& terms);   // same-shape mean
Var scale(Var x, Var s);                        // x * scalar node
Var scale_const(Var x, double c);
Var dot(Var a, Var b);                          // 1-d ⋅ 1-d -> scalar
Var stack(const std::vector<Var>& scalars);     // scalars -> 1-d
Var at(Var x, std::size_t i);                   // 1-d element -> scalar
Var row(Var m, std::size_t r);                  // matrix row -> 1-d
Var col(Var m, std::size_t c);                  // matrix column -> 1-d
Var weighted_sum(Var weights, const std::vector<Var>& rows);  // Σ w_i rows_i
Var cross_entropy(Var logits, std::size_t target);  // logsumexp - logits[target]

// affine(W, x, b) = W x + b
Var affine(Var w, Var x, Var b);

}  // namespace relcap
