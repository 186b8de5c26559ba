#include "relcap/tape.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace relcap {

namespace {

[[noreturn]] void shape_error(const char* op, const Tensor& a, const Tensor& b) {
  throw std::invalid_argument(std::string(op) + ": shape mismatch " + shape_str(a.shape) +
                              " vs " + shape_str(b.shape));
}

void require(bool ok, const char* op, const std::string& what) {
  if (!ok) throw std::invalid_argument(std::string(op) + ": " + what);
}

void check_same_tape(const char* op, Var a, Var b) {
  require(a.tape != nullptr && a.tape == b.tape, op, "operands recorded on different tapes");
}

}  // namespace

const Tensor& Var::value() const { return tape->value(*this); }
const Tensor& Var::grad() const { return tape->grad(*this); }

Var Tape::leaf(Tensor value) { return emit(std::move(value), nullptr); }

Var Tape::emit(Tensor value, BackwardFn fn) {
  nodes_.push_back(Node{std::move(value), Tensor{}, std::move(fn)});
  return Var{this, static_cast<std::uint32_t>(nodes_.size() - 1)};
}

void Tape::backward(Var loss) {
  if (loss.tape != this) throw std::invalid_argument("backward: loss recorded on another tape");
  if (!nodes_[loss.id].value.is_scalar()) {
    throw std::invalid_argument("backward: loss must be scalar, got shape " +
                                shape_str(nodes_[loss.id].value.shape));
  }
  for (Node& n : nodes_) n.grad = Tensor::zeros(n.value.shape);
  nodes_[loss.id].grad.data[0] = 1.0;
  for (std::uint32_t id = loss.id + 1; id-- > 0;) {
    if (nodes_[id].backward) nodes_[id].backward(*this, id);
  }
}

// --- op implementations ------------------------------------------------

Var matmul(Var a, Var b) {
  check_same_tape("matmul", a, b);
  const Tensor& ta = a.value();
  const Tensor& tb = b.value();
  if (!ta.is_matrix() || !tb.is_matrix() || ta.cols() != tb.rows()) shape_error("matmul", ta, tb);
  std::size_t m = ta.rows(), k = ta.cols(), n = tb.cols();
  Tensor out = Tensor::zeros({m, n});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t p = 0; p < k; ++p) {
      double aip = ta.at(i, p);
      for (std::size_t j = 0; j < n; ++j) out.at(i, j) += aip * tb.at(p, j);
    }
  std::uint32_t ia = a.id, ib = b.id;
  return a.tape->emit(std::move(out), [ia, ib, m, k, n](Tape& t, std::uint32_t self) {
    const Tensor& g = t.node(self).grad;
    const Tensor& va = t.node(ia).value;
    const Tensor& vb = t.node(ib).value;
    Tensor& ga = t.node(ia).grad;
    Tensor& gb = t.node(ib).grad;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t p = 0; p < k; ++p) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += g.at(i, j) * vb.at(p, j);
        ga.at(i, p) += acc;
      }
    for (std::size_t p = 0; p < k; ++p)
      for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < m; ++i) acc += va.at(i, p) * g.at(i, j);
        gb.at(p, j) += acc;
      }
  });
}

Var matvec(Var m, Var x) {
  check_same_tape("matvec", m, x);
  const Tensor& tm = m.value();
  const Tensor& tx = x.value();
  if (!tm.is_matrix() || !tx.is_vector() || tm.cols() != tx.shape[0]) shape_error("matvec", tm, tx);
  std::size_t rows = tm.rows(), cols = tm.cols();
  Tensor out = Tensor::zeros({rows});
  for (std::size_t i = 0; i < rows; ++i) {
    double acc = 0.0;
    const double* mrow = tm.data.data() + i * cols;
    for (std::size_t j = 0; j < cols; ++j) acc += mrow[j] * tx.data[j];
    out.data[i] = acc;
  }
  std::uint32_t im = m.id, ix = x.id;
  return m.tape->emit(std::move(out), [im, ix, rows, cols](Tape& t, std::uint32_t self) {
    const Tensor& g = t.node(self).grad;
    const Tensor& vm = t.node(im).value;
    const Tensor& vx = t.node(ix).value;
    Tensor& gm = t.node(im).grad;
    Tensor& gx = t.node(ix).grad;
    for (std::size_t i = 0; i < rows; ++i) {
      double gi = g.data[i];
      double* gmrow = gm.data.data() + i * cols;
      const double* vmrow = vm.data.data() + i * cols;
      for (std::size_t j = 0; j < cols; ++j) {
        gmrow[j] += gi * vx.data[j];
        gx.data[j] += gi * vmrow[j];
      }
    }
  });
}

Var add(Var a, Var b) {
  check_same_tape("add", a, b);
  const Tensor& ta = a.value();
  const Tensor& tb = b.value();
  if (!ta.same_shape(tb)) shape_error("add", ta, tb);
  Tensor out = ta;
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += tb.data[i];
  std::uint32_t ia = a.id, ib = b.id;
  return a.tape->emit(std::move(out), [ia, ib](Tape& t, std::uint32_t self) {
    const Tensor& g = t.node(self).grad;
    Tensor& ga = t.node(ia).grad;
    Tensor& gb = t.node(ib).grad;
    for (std::size_t i = 0; i < g.data.size(); ++i) {
      ga.data[i] += g.data[i];
      gb.data[i] += g.data[i];
    }
  });
}

Var mul(Var a, Var b) {
  check_same_tape("mul", a, b);
  const Tensor& ta = a.value();
  const Tensor& tb = b.value();
  if (!ta.same_shape(tb)) shape_error("mul", ta, tb);
  Tensor out = ta;
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] *= tb.data[i];
  std::uint32_t ia = a.id, ib = b.id;
  return a.tape->emit(std::move(out), [ia, ib](Tape& t, std::uint32_t self) {
    const Tensor& g = t.node(self).grad;
    const Tensor& va = t.node(ia).value;
    const Tensor& vb = t.node(ib).value;
    Tensor& ga = t.node(ia).grad;
    Tensor& gb = t.node(ib).grad;
    for (std::size_t i = 0; i < g.data.size(); ++i) {
      ga.data[i] += g.data[i] * vb.data[i];
      gb.data[i] += g.data[i] * va.data[i];
    }
  });
}

Var relu(Var x) {
  Tensor out = x.value();
  for (double& v : out.data) v = v > 0.0 ? v : 0.0;
  std::uint32_t ix = x.id;
  return x.tape->emit(std::move(out), [ix](Tape& t, std::uint32_t self) {
    const Tensor& g = t.node(self).grad;
    const Tensor& vx = t.node(ix).value;
    Tensor& gx = t.node(ix).grad;
    for (std::size_t i = 0; i < g.data.size(); ++i)
      if (vx.data[i] > 0.0) gx.data[i] += g.data[i];
  });
}

Var sigmoid(Var x) {
  Tensor out = x.value();
  for (double& v : out.data) v = 1.0 / (1.0 + std::exp(-v));
  std::uint32_t ix = x.id;
  return x.tape->emit(std::move(out), [ix](Tape& t, std::uint32_t self) {
    const Tensor& g = t.node(self).grad;
    const Tensor& y = t.node(self).value;
    Tensor& gx = t.node(ix).grad;
    for (std::size_t i = 0; i < g.data.size(); ++i)
      gx.data[i] += g.data[i] * y.data[i] * (1.0 - y.data[i]);
  });
}

Var tanh(Var x) {
  Tensor out = x.value();
  for (double& v : out.data) v = std::tanh(v);
  std::uint32_t ix = x.id;
  return x.tape->emit(std::move(out), [ix](Tape& t, std::uint32_t self) {
    const Tensor& g = t.node(self).grad;
    const Tensor& y = t.node(self).value;
    Tensor& gx = t.node(ix).grad;
    for (std::size_t i = 0; i < g.data.size(); ++i)
      gx.data[i] += g.data[i] * (1.0 - y.data[i] * y.data[i]);
  });
}

Var softmax(Var x) {
  const Tensor& tx = x.value();
  require(tx.is_vector(), "softmax", "expects a 1-d tensor, got " + shape_str(tx.shape));
  Tensor out = tx;
  double mx = *std::max_element(out.data.begin(), out.data.end());
  std::vector<double> exps(out.data.size());
  for (std::size_t i = 0; i < out.data.size(); ++i) exps[i] = std::exp(out.data[i] - mx);
  std::vector<double> terms = exps;
  double denom = sorted_sum(terms);
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = exps[i] / denom;
  std::uint32_t ix = x.id;
  return x.tape->emit(std::move(out), [ix](Tape& t, std::uint32_t self) {
    const Tensor& g = t.node(self).grad;
    const Tensor& y = t.node(self).value;
    Tensor& gx = t.node(ix).grad;
    double gy = 0.0;
    for (std::size_t i = 0; i < g.data.size(); ++i) gy += g.data[i] * y.data[i];
    for (std::size_t i = 0; i < g.data.size(); ++i)
      gx.data[i] += y.data[i] * (g.data[i] - gy);
  });
}

Var concat(const std::vector<Var>& parts) {
  require(!parts.empty(), "concat", "no inputs");
  Tape* tape = parts[0].tape;
  std::size_t total = 0;
  for (Var p : parts) {
    require(p.tape == tape, "concat", "operands recorded on different tapes");
    require(p.value().is_vector(), "concat",
            "expects 1-d tensors, got " + shape_str(p.value().shape));
    total += p.value().shape[0];
  }
  Tensor out = Tensor::zeros({total});
  std::size_t off = 0;
  std::vector<std::uint32_t> ids;
  std::vector<std::size_t> lens;
  for (Var p : parts) {
    const Tensor& tp = p.value();
    std::copy(tp.data.begin(), tp.data.end(), out.data.begin() + off);
    off += tp.shape[0];
    ids.push_back(p.id);
    lens.push_back(tp.shape[0]);
  }
  return tape->emit(std::move(out), [ids, lens](Tape& t, std::uint32_t self) {
    const Tensor& g = t.node(self).grad;
    std::size_t off = 0;
    for (std::size_t k = 0; k < ids.size(); ++k) {
      Tensor& gp = t.node(ids[k]).grad;
      for (std::size_t i = 0; i < lens[k]; ++i) gp.data[i] += g.data[off + i];
      off += lens[k];
    }
  });
}

namespace {

Var sum_like(const char* op, const std::vector<Var>& terms, double factor) {
  require(!terms.empty(), op, "no inputs");
  Tape* tape = terms[0].tape;
  const Tensor& first = terms[0].value();
  std::vector<std::uint32_t> ids;
  for (Var v : terms) {
    require(v.tape == tape, op, "operands recorded on different tapes");
    if (!v.value().same_shape(first)) shape_error(op, first, v.value());
    ids.push_back(v.id);
  }
  Tensor out = Tensor::zeros(first.shape);
  std::vector<double> buf(terms.size());
  for (std::size_t c = 0; c < out.data.size(); ++c) {
    for (std::size_t k = 0; k < terms.size(); ++k) buf[k] = terms[k].value().data[c];
    out.data[c] = sorted_sum(buf) * factor;
  }
  return tape->emit(std::move(out), [ids, factor](Tape& t, std::uint32_t self) {
    const Tensor& g = t.node(self).grad;
    for (std::uint32_t id : ids) {
      Tensor& gp = t.node(id).grad;
      for (std::size_t i = 0; i < g.data.size(); ++i) gp.data[i] += g.data[i] * factor;
    }
  });
}

}  // namespace

Var sum_list(const std::vector<Var>& terms) { return sum_like("sum_list", terms, 1.0); }

Var mean_list(const std::vector<Var>& terms) {
  return sum_like("mean_list", terms, 1.0 / static_cast<double>(terms.size()));
}

Var scale(Var x, Var s) {
  check_same_tape("scale", x, s);
  require(s.value().is_scalar(), "scale",
          "scale factor must be scalar, got " + shape_str(s.value().shape));
  double sv = s.value().data[0];
  Tensor out = x.value();
  for (double& v : out.data) v *= sv;
  std::uint32_t ix = x.id, is = s.id;
  return x.tape->emit(std::move(out), [ix, is](Tape& t, std::uint32_t self) {
    const Tensor& g = t.node(self).grad;
    const Tensor& vx = t.node(ix).value;
    double sv = t.node(is).value.data[0];
    Tensor& gx = t.node(ix).grad;
    double acc = 0.0;
    for (std::size_t i = 0; i < g.data.size(); ++i) {
      gx.data[i] += g.data[i] * sv;
      acc += g.data[i] * vx.data[i];
    }
    t.node(is).grad.data[0] += acc;
  });
}

Var scale_const(Var x, double c) {
  Tensor out = x.value();
  for (double& v : out.data) v *= c;
  std::uint32_t ix = x.id;
  return x.tape->emit(std::move(out), [ix, c](Tape& t, std::uint32_t self) {
    const Tensor& g = t.node(self).grad;
    Tensor& gx = t.node(ix).grad;
    for (std::size_t i = 0; i < g.data.size(); ++i) gx.data[i] += g.data[i] * c;
  });
}

Var dot(Var a, Var b) {
  check_same_tape("dot", a, b);
  const Tensor& ta = a.value();
  const Tensor& tb = b.value();
  if (!ta.is_vector() || !tb.is_vector() || ta.shape != tb.shape) shape_error("dot", ta, tb);
  double acc = 0.0;
  for (std::size_t i = 0; i < ta.data.size(); ++i) acc += ta.data[i] * tb.data[i];
  std::uint32_t ia = a.id, ib = b.id;
  return a.tape->emit(Tensor::scalar(acc), [ia, ib](Tape& t, std::uint32_t self) {
    double g = t.node(self).grad.data[0];
    const Tensor& va = t.node(ia).value;
    const Tensor& vb = t.node(ib).value;
    Tensor& ga = t.node(ia).grad;
    Tensor& gb = t.node(ib).grad;
    for (std::size_t i = 0; i < va.data.size(); ++i) {
      ga.data[i] += g * vb.data[i];
      gb.data[i] += g * va.data[i];
    }
  });
}

Var stack(const std::vector<Var>& scalars) {
  require(!scalars.empty(), "stack", "no inputs");
  Tape* tape = scalars[0].tape;
  Tensor out = Tensor::zeros({scalars.size()});
  std::vector<std::uint32_t> ids;
  for (std::size_t i = 0; i < scalars.size(); ++i) {
    require(scalars[i].tape == tape, "stack", "operands recorded on different tapes");
    require(scalars[i].value().is_scalar(), "stack",
            "expects scalars, got " + shape_str(scalars[i].value().shape));
    out.data[i] = scalars[i].value().data[0];
    ids.push_back(scalars[i].id);
  }
  return tape->emit(std::move(out), [ids](Tape& t, std::uint32_t self) {
    const Tensor& g = t.node(self).grad;
    for (std::size_t i = 0; i < ids.size(); ++i) t.node(ids[i]).grad.data[0] += g.data[i];
  });
}

Var at(Var x, std::size_t i) {
  const Tensor& tx = x.value();
  require(tx.is_vector(), "at", "expects a 1-d tensor, got " + shape_str(tx.shape));
  require(i < tx.shape[0], "at", "index " + std::to_string(i) + " out of range for " +
                                       shape_str(tx.shape));
  std::uint32_t ix = x.id;
  return x.tape->emit(Tensor::scalar(tx.data[i]), [ix, i](Tape& t, std::uint32_t self) {
    t.node(ix).grad.data[i] += t.node(self).grad.data[0];
  });
}

Var row(Var m, std::size_t r) {
  const Tensor& tm = m.value();
  require(tm.is_matrix(), "row", "expects a matrix, got " + shape_str(tm.shape));
  require(r < tm.rows(), "row", "row " + std::to_string(r) + " out of range for " +
                                     shape_str(tm.shape));
  std::size_t cols = tm.cols();
  Tensor out = Tensor::zeros({cols});
  std::copy(tm.data.begin() + r * cols, tm.data.begin() + (r + 1) * cols, out.data.begin());
  std::uint32_t im = m.id;
  return m.tape->emit(std::move(out), [im, r, cols](Tape& t, std::uint32_t self) {
    const Tensor& g = t.node(self).grad;
    Tensor& gm = t.node(im).grad;
    for (std::size_t j = 0; j < cols; ++j) gm.data[r * cols + j] += g.data[j];
  });
}

Var col(Var m, std::size_t c) {
  const Tensor& tm = m.value();
  require(tm.is_matrix(), "col", "expects a matrix, got " + shape_str(tm.shape));
  require(c < tm.cols(), "col", "column " + std::to_string(c) + " out of range for " +
                                     shape_str(tm.shape));
  std::size_t rows = tm.rows(), cols = tm.cols();
  Tensor out = Tensor::zeros({rows});
  for (std::size_t i = 0; i < rows; ++i) out.data[i] = tm.data[i * cols + c];
  std::uint32_t im = m.id;
  return m.tape->emit(std::move(out), [im, c, rows, cols](Tape& t, std::uint32_t self) {
    const Tensor& g = t.node(self).grad;
    Tensor& gm = t.node(im).grad;
    for (std::size_t i = 0; i < rows; ++i) gm.data[i * cols + c] += g.data[i];
  });
}

Var weighted_sum(Var weights, const std::vector<Var>& rows) {
  const Tensor& tw = weights.value();
  require(tw.is_vector(), "weighted_sum",
          "weights must be 1-d, got " + shape_str(tw.shape));
  require(tw.shape[0] == rows.size(), "weighted_sum",
          "got " + std::to_string(rows.size()) + " rows for " + std::to_string(tw.shape[0]) +
              " weights");
  require(!rows.empty(), "weighted_sum", "no rows");
  Tape* tape = weights.tape;
  const Tensor& first = rows[0].value();
  std::vector<std::uint32_t> ids;
  for (Var r : rows) {
    require(r.tape == tape, "weighted_sum", "operands recorded on different tapes");
    if (!r.value().same_shape(first)) shape_error("weighted_sum", first, r.value());
    ids.push_back(r.id);
  }
  Tensor out = Tensor::zeros(first.shape);
  std::vector<double> buf(rows.size());
  for (std::size_t c = 0; c < out.data.size(); ++c) {
    for (std::size_t k = 0; k < rows.size(); ++k) buf[k] = tw.data[k] * rows[k].value().data[c];
    out.data[c] = sorted_sum(buf);
  }
  std::uint32_t iw = weights.id;
  return tape->emit(std::move(out), [iw, ids](Tape& t, std::uint32_t self) {
    const Tensor& g = t.node(self).grad;
    const Tensor& vw = t.node(iw).value;
    Tensor& gw = t.node(iw).grad;
    for (std::size_t k = 0; k < ids.size(); ++k) {
      const Tensor& vr = t.node(ids[k]).value;
      Tensor& gr = t.node(ids[k]).grad;
      double acc = 0.0;
      for (std::size_t i = 0; i < g.data.size(); ++i) {
        acc += g.data[i] * vr.data[i];
        gr.data[i] += g.data[i] * vw.data[k];
      }
      gw.data[k] += acc;
    }
  });
}

Var cross_entropy(Var logits, std::size_t target) {
  const Tensor& tx = logits.value();
  require(tx.is_vector(), "cross_entropy",
          "logits must be 1-d, got " + shape_str(tx.shape));
  require(target < tx.shape[0], "cross_entropy",
          "target " + std::to_string(target) + " out of range for " + shape_str(tx.shape));
  double mx = *std::max_element(tx.data.begin(), tx.data.end());
  double sum = 0.0;
  for (double v : tx.data) sum += std::exp(v - mx);
  double loss = mx + std::log(sum) - tx.data[target];
  std::uint32_t ix = logits.id;
  return logits.tape->emit(Tensor::scalar(loss), [ix, target, mx, sum](Tape& t,
                                                                       std::uint32_t self) {
    double g = t.node(self).grad.data[0];
    const Tensor& vx = t.node(ix).value;
    Tensor& gx = t.node(ix).grad;
    for (std::size_t i = 0; i < vx.data.size(); ++i) {
      double p = std::exp(vx.data[i] - mx) / sum;
      gx.data[i] += g * (p - (i == target ? 1.0 : 0.0));
    }
  });
}

Var affine(Var w, Var x, Var b) { return add(matvec(w, x), b); }

}  // namespace relcap
