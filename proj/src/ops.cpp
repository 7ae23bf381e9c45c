#include "decode/ops.hpp"

#include "decode/special_functions.hpp"

#include <cmath>
#include <utility>

namespace decode::ad {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatMap = Eigen::Map<RowMat>;
using ConstMatMap = Eigen::Map<const RowMat>;

ConstMatMap as_matrix(const detail::Node& n, Index rows, Index cols) {
  return ConstMatMap(n.values.data(), rows, cols);
}

MatMap grad_matrix(detail::Node& n, Index rows, Index cols) {
  return MatMap(n.grad.data(), rows, cols);
}

ConstMatMap grad_matrix_const(const detail::Node& n, Index rows, Index cols) {
  return ConstMatMap(n.grad.data(), rows, cols);
}

Tensor make_op(Shape shape, Array values, std::vector<Tensor> inputs,
               std::function<void(const detail::Node&, std::vector<detail::NodePtr>&)> pull) {
  bool any_grad = false;
  for (const auto& t : inputs) any_grad = any_grad || t.requires_grad();
  const bool record = any_grad && Tape::active() != nullptr;
  Tensor out = Tensor::from_values(std::move(shape), std::move(values), record);
  if (record) {
    std::vector<detail::NodePtr> parents;
    parents.reserve(inputs.size());
    for (const auto& t : inputs) parents.push_back(t.node_ptr());
    Tape::active()->record(out.node_ptr(), std::move(parents), std::move(pull));
  }
  return out;
}

void check_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  check(a.shape() == b.shape(), std::string(op) + ": shape mismatch " + shape_str(a.shape()) +
                                    " vs " + shape_str(b.shape()));
}

Tensor elementwise_binary(const char* name, const Tensor& a, const Tensor& b, Array values,
                          std::function<void(const Array&, const Array&, const Array&, Array&, Array&)> pull_ab) {
  check_same_shape(a, b, name);
  Array av = a.values(), bv = b.values();
  return make_op(a.shape(), std::move(values), {a, b},
                 [av = std::move(av), bv = std::move(bv), pull_ab = std::move(pull_ab)](
                     const detail::Node& out, std::vector<detail::NodePtr>& ps) {
                   pull_ab(out.grad, av, bv, ps[0]->grad, ps[1]->grad);
                 });
}

Tensor elementwise_unary(const Tensor& a, Array values, std::function<Array(const Array&)> local_grad) {
  // local_grad maps the upstream gradient to the input gradient contribution.
  return make_op(a.shape(), std::move(values), {a},
                 [local_grad = std::move(local_grad)](const detail::Node& out,
                                                      std::vector<detail::NodePtr>& ps) {
                   ps[0]->grad += local_grad(out.grad);
                 });
}

void check_positive(const Tensor& a, const char* op) {
  check(a.size() == 0 || a.values().minCoeff() > 0.0,
        std::string(op) + ": input must be strictly positive, min = " +
            std::to_string(a.size() ? a.values().minCoeff() : 0.0));
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
  return elementwise_binary("add", a, b, a.values() + b.values(),
                            [](const Array& g, const Array&, const Array&, Array& da, Array& db) {
                              da += g;
                              db += g;
                            });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  return elementwise_binary("sub", a, b, a.values() - b.values(),
                            [](const Array& g, const Array&, const Array&, Array& da, Array& db) {
                              da += g;
                              db -= g;
                            });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  return elementwise_binary("mul", a, b, a.values() * b.values(),
                            [](const Array& g, const Array& av, const Array& bv, Array& da, Array& db) {
                              da += g * bv;
                              db += g * av;
                            });
}

Tensor div(const Tensor& a, const Tensor& b) {
  check(b.size() == 0 || b.values().cwiseAbs().minCoeff() > 0.0, "div: divisor contains zero");
  return elementwise_binary("div", a, b, a.values() / b.values(),
                            [](const Array& g, const Array& av, const Array& bv, Array& da, Array& db) {
                              da += g / bv;
                              db -= g * av / (bv * bv);
                            });
}

Tensor add_scalar(const Tensor& a, double s) {
  return elementwise_unary(a, a.values() + s, [](const Array& g) { return g; });
}

Tensor mul_scalar(const Tensor& a, double s) {
  return elementwise_unary(a, a.values() * s, [s](const Array& g) -> Array { return g * s; });
}

Tensor neg(const Tensor& a) { return mul_scalar(a, -1.0); }

Tensor matmul(const Tensor& a, const Tensor& b) {
  check(a.rank() == 2 && b.rank() == 2, "matmul: rank-2 tensors required, got " +
                                            shape_str(a.shape()) + " and " + shape_str(b.shape()));
  const Index m = a.shape()[0], k = a.shape()[1], n = b.shape()[1];
  check(b.shape()[0] == k, "matmul: inner dimension mismatch " + shape_str(a.shape()) + " vs " +
                               shape_str(b.shape()));
  RowMat c = as_matrix(*a.node_ptr(), m, k) * as_matrix(*b.node_ptr(), k, n);
  Array values = Eigen::Map<const Array>(c.data(), c.size());
  return make_op({m, n}, std::move(values), {a, b},
                 [m, k, n](const detail::Node& out, std::vector<detail::NodePtr>& ps) {
                   ConstMatMap g = grad_matrix_const(out, m, n);
                   if (ps[0]->requires_grad)
                     grad_matrix(*ps[0], m, k) += g * as_matrix(*ps[1], k, n).transpose();
                   if (ps[1]->requires_grad)
                     grad_matrix(*ps[1], k, n) += as_matrix(*ps[0], m, k).transpose() * g;
                 });
}

Tensor transpose(const Tensor& a) {
  check(a.rank() == 2, "transpose: rank-2 tensor required, got " + shape_str(a.shape()));
  const Index r = a.shape()[0], c = a.shape()[1];
  RowMat t = as_matrix(*a.node_ptr(), r, c).transpose();
  Array values = Eigen::Map<const Array>(t.data(), t.size());
  return make_op({c, r}, std::move(values), {a},
                 [r, c](const detail::Node& out, std::vector<detail::NodePtr>& ps) {
                   grad_matrix(*ps[0], r, c) += grad_matrix_const(out, c, r).transpose();
                 });
}

Tensor scale_rows(const Tensor& m, const Tensor& v) {
  check(m.rank() == 2 && v.rank() == 1, "scale_rows: want matrix and vector, got " +
                                            shape_str(m.shape()) + " and " + shape_str(v.shape()));
  const Index r = m.shape()[0], c = m.shape()[1];
  check(v.size() == r, "scale_rows: row count " + shape_str(m.shape()) +
                           " does not match scale vector " + shape_str(v.shape()));
  RowMat out = as_matrix(*m.node_ptr(), r, c);
  out.array().colwise() *= v.values();
  Array values = Eigen::Map<const Array>(out.data(), out.size());
  return make_op({r, c}, std::move(values), {m, v},
                 [r, c](const detail::Node& out_node, std::vector<detail::NodePtr>& ps) {
                   ConstMatMap g = grad_matrix_const(out_node, r, c);
                   ConstMatMap mv = as_matrix(*ps[0], r, c);
                   if (ps[0]->requires_grad)
                     grad_matrix(*ps[0], r, c).array() += g.array().colwise() * ps[1]->values;
                   if (ps[1]->requires_grad)
                     ps[1]->grad += (g.array() * mv.array()).rowwise().sum();
                 });
}

Tensor concat(const std::vector<Tensor>& parts, int axis) {
  check(!parts.empty(), "concat: empty input list");
  const Index rank = parts[0].rank();
  check(rank == 1 || rank == 2, "concat: rank-1 or rank-2 required");
  check(axis >= 0 && axis < rank, "concat: bad axis for rank");
  for (const auto& p : parts)
    check(p.rank() == rank, "concat: mixed ranks " + shape_str(parts[0].shape()) + " vs " +
                                shape_str(p.shape()));

  if (rank == 1) {
    Index total = 0;
    for (const auto& p : parts) total += p.size();
    Array values(total);
    Index at = 0;
    for (const auto& p : parts) {
      values.segment(at, p.size()) = p.values();
      at += p.size();
    }
    std::vector<Index> sizes;
    for (const auto& p : parts) sizes.push_back(p.size());
    return make_op({total}, std::move(values), parts,
                   [sizes](const detail::Node& out, std::vector<detail::NodePtr>& ps) {
                     Index at = 0;
                     for (std::size_t i = 0; i < ps.size(); ++i) {
                       ps[i]->grad += out.grad.segment(at, sizes[i]);
                       at += sizes[i];
                     }
                   });
  }

  if (axis == 0) {
    const Index c = parts[0].shape()[1];
    Index rtot = 0;
    for (const auto& p : parts) {
      check(p.shape()[1] == c, "concat axis 0: column mismatch " + shape_str(parts[0].shape()) +
                                   " vs " + shape_str(p.shape()));
      rtot += p.shape()[0];
    }
    Array values(rtot * c);
    Index at = 0;
    for (const auto& p : parts) {
      values.segment(at, p.size()) = p.values();  // row-major: rows are contiguous
      at += p.size();
    }
    std::vector<Index> sizes;
    for (const auto& p : parts) sizes.push_back(p.size());
    return make_op({rtot, c}, std::move(values), parts,
                   [sizes](const detail::Node& out, std::vector<detail::NodePtr>& ps) {
                     Index at = 0;
                     for (std::size_t i = 0; i < ps.size(); ++i) {
                       ps[i]->grad += out.grad.segment(at, sizes[i]);
                       at += sizes[i];
                     }
                   });
  }

  // axis == 1
  const Index r = parts[0].shape()[0];
  Index ctot = 0;
  for (const auto& p : parts) {
    check(p.shape()[0] == r, "concat axis 1: row mismatch " + shape_str(parts[0].shape()) +
                                 " vs " + shape_str(p.shape()));
    ctot += p.shape()[1];
  }
  RowMat out(r, ctot);
  Index cat = 0;
  std::vector<Index> widths;
  for (const auto& p : parts) {
    const Index w = p.shape()[1];
    out.block(0, cat, r, w) = as_matrix(*p.node_ptr(), r, w);
    widths.push_back(w);
    cat += w;
  }
  Array values = Eigen::Map<const Array>(out.data(), out.size());
  return make_op({r, ctot}, std::move(values), parts,
                 [r, ctot, widths](const detail::Node& out_node, std::vector<detail::NodePtr>& ps) {
                   ConstMatMap g = grad_matrix_const(out_node, r, ctot);
                   Index cat2 = 0;
                   for (std::size_t i = 0; i < ps.size(); ++i) {
                     grad_matrix(*ps[i], r, widths[i]) += g.block(0, cat2, r, widths[i]);
                     cat2 += widths[i];
                   }
                 });
}

Tensor slice(const Tensor& t, int axis, Index start, Index len) {
  const Index rank = t.rank();
  check(rank == 1 || rank == 2, "slice: rank-1 or rank-2 required");
  check(axis >= 0 && axis < rank, "slice: bad axis");
  const Index extent = t.shape()[axis];
  check(start >= 0 && len >= 0 && start + len <= extent,
        "slice: range [" + std::to_string(start) + ", " + std::to_string(start + len) +
            ") out of bounds for extent " + std::to_string(extent));

  if (rank == 1 || axis == 0) {
    const Index width = rank == 1 ? 1 : t.shape()[1];
    Array values = t.values().segment(start * width, len * width);
    Shape shape = rank == 1 ? Shape{len} : Shape{len, t.shape()[1]};
    return make_op(std::move(shape), std::move(values), {t},
                   [start, width](const detail::Node& out, std::vector<detail::NodePtr>& ps) {
                     ps[0]->grad.segment(start * width, out.grad.size()) += out.grad;
                   });
  }

  const Index r = t.shape()[0], c = t.shape()[1];
  RowMat block = as_matrix(*t.node_ptr(), r, c).block(0, start, r, len);
  Array values = Eigen::Map<const Array>(block.data(), block.size());
  return make_op({r, len}, std::move(values), {t},
                 [r, c, start, len](const detail::Node& out, std::vector<detail::NodePtr>& ps) {
                   grad_matrix(*ps[0], r, c).block(0, start, r, len) +=
                       grad_matrix_const(out, r, len);
                 });
}

std::vector<Tensor> split(const Tensor& t, int axis, const std::vector<Index>& sizes) {
  Index total = 0;
  for (Index s : sizes) total += s;
  check(t.rank() >= 1 && axis < t.rank() && t.shape()[axis] == total,
        "split: sizes sum " + std::to_string(total) + " does not match extent of axis in " +
            shape_str(t.shape()));
  std::vector<Tensor> out;
  Index at = 0;
  for (Index s : sizes) {
    out.push_back(slice(t, axis, at, s));
    at += s;
  }
  return out;
}

Tensor reshape(const Tensor& t, Shape shape) {
  check(shape_size(shape) == t.size(), "reshape: cannot view " + shape_str(t.shape()) + " as " +
                                           shape_str(shape));
  return make_op(std::move(shape), t.values(), {t},
                 [](const detail::Node& out, std::vector<detail::NodePtr>& ps) {
                   ps[0]->grad += out.grad;
                 });
}

Tensor tanh(const Tensor& a) {
  Array y = a.values().tanh();
  return elementwise_unary(a, y, [y](const Array& g) -> Array { return g * (1.0 - y * y); });
}

Tensor relu(const Tensor& a) {
  Array y = a.values().max(0.0);
  Array mask = (a.values() > 0.0).cast<double>();
  return elementwise_unary(a, std::move(y), [mask = std::move(mask)](const Array& g) -> Array {
    return g * mask;
  });
}

Tensor exp(const Tensor& a) {
  Array y = a.values().exp();
  return elementwise_unary(a, y, [y](const Array& g) -> Array { return g * y; });
}

Tensor log(const Tensor& a) {
  check_positive(a, "log");
  Array av = a.values();
  return elementwise_unary(a, a.values().log(),
                           [av = std::move(av)](const Array& g) -> Array { return g / av; });
}

Tensor sqrt(const Tensor& a) {
  check(a.size() == 0 || a.values().minCoeff() >= 0.0, "sqrt: negative input");
  Array y = a.values().sqrt();
  return elementwise_unary(a, y, [y](const Array& g) -> Array { return g / (2.0 * y.max(1e-300)); });
}

Tensor square(const Tensor& a) {
  Array av = a.values();
  Array y = av * av;
  return elementwise_unary(a, std::move(y),
                           [av = std::move(av)](const Array& g) -> Array { return 2.0 * g * av; });
}

Tensor cos(const Tensor& a) {
  Array s = a.values().sin();
  return elementwise_unary(a, a.values().cos(),
                           [s = std::move(s)](const Array& g) -> Array { return -g * s; });
}

Tensor sin(const Tensor& a) {
  Array c = a.values().cos();
  return elementwise_unary(a, a.values().sin(),
                           [c = std::move(c)](const Array& g) -> Array { return g * c; });
}

Tensor clamp(const Tensor& a, double lo, double hi) {
  check(lo <= hi, "clamp: lo > hi");
  Array y = a.values().max(lo).min(hi);
  Array mask = ((a.values() >= lo) && (a.values() <= hi)).cast<double>();
  return elementwise_unary(a, std::move(y), [mask = std::move(mask)](const Array& g) -> Array {
    return g * mask;
  });
}

Tensor digamma(const Tensor& a) {
  check_positive(a, "digamma");
  const Array& av = a.values();
  Array y(av.size()), d(av.size());
  for (Index i = 0; i < av.size(); ++i) {
    y[i] = math::digamma(av[i]);
    d[i] = math::trigamma(av[i]);
  }
  return elementwise_unary(a, std::move(y), [d = std::move(d)](const Array& g) -> Array {
    return g * d;
  });
}

Tensor lgamma(const Tensor& a) {
  check_positive(a, "lgamma");
  const Array& av = a.values();
  Array y(av.size()), d(av.size());
  for (Index i = 0; i < av.size(); ++i) {
    y[i] = math::log_gamma(av[i]);
    d[i] = math::digamma(av[i]);
  }
  return elementwise_unary(a, std::move(y), [d = std::move(d)](const Array& g) -> Array {
    return g * d;
  });
}

Tensor sum(const Tensor& a) {
  return make_op({1}, Array::Constant(1, a.values().sum()), {a},
                 [](const detail::Node& out, std::vector<detail::NodePtr>& ps) {
                   ps[0]->grad += out.grad[0];
                 });
}

Tensor sum(const Tensor& a, int axis) {
  check(a.rank() == 2, "sum(axis): rank-2 tensor required, got " + shape_str(a.shape()));
  check(axis == 0 || axis == 1, "sum(axis): axis must be 0 or 1");
  const Index r = a.shape()[0], c = a.shape()[1];
  ConstMatMap m = as_matrix(*a.node_ptr(), r, c);
  if (axis == 1) {
    Array values = m.rowwise().sum();
    return make_op({r}, std::move(values), {a},
                   [r, c](const detail::Node& out, std::vector<detail::NodePtr>& ps) {
                     grad_matrix(*ps[0], r, c).array().colwise() += out.grad;
                   });
  }
  Array values = m.colwise().sum().transpose();
  return make_op({c}, std::move(values), {a},
                 [r, c](const detail::Node& out, std::vector<detail::NodePtr>& ps) {
                   grad_matrix(*ps[0], r, c).array().rowwise() += out.grad.transpose();
                 });
}

Tensor mean(const Tensor& a) {
  check(a.size() > 0, "mean: empty tensor");
  return mul_scalar(sum(a), 1.0 / static_cast<double>(a.size()));
}

Tensor mean(const Tensor& a, int axis) {
  check(a.rank() == 2, "mean(axis): rank-2 tensor required");
  const double n = static_cast<double>(a.shape()[axis == 0 ? 0 : 1]);
  check(n > 0, "mean(axis): empty axis");
  return mul_scalar(sum(a, axis), 1.0 / n);
}

namespace {

// Rows of the input treated independently; rank-1 input is a single row.
std::pair<Index, Index> row_view(const Tensor& a) {
  if (a.rank() == 1) return {1, a.size()};
  return {a.shape()[0], a.shape()[1]};
}

}  // namespace

Tensor softmax(const Tensor& a, int axis) {
  check(a.rank() == 1 || axis == 1, "softmax: only per-row (axis = 1) softmax is supported");
  auto [r, c] = row_view(a);
  check(c > 0, "softmax: empty rows");
  RowMat y(r, c);
  ConstMatMap x(a.values().data(), r, c);
  for (Index i = 0; i < r; ++i) {
    Eigen::ArrayXd row = x.row(i).array();
    row -= row.maxCoeff();
    row = row.exp();
    y.row(i) = row / row.sum();
  }
  Array values = Eigen::Map<const Array>(y.data(), y.size());
  Array yv = values;
  return make_op(a.shape(), std::move(values), {a},
                 [r, c, yv = std::move(yv)](const detail::Node& out, std::vector<detail::NodePtr>& ps) {
                   ConstMatMap g(out.grad.data(), r, c);
                   ConstMatMap ym(yv.data(), r, c);
                   MatMap dx(ps[0]->grad.data(), r, c);
                   for (Index i = 0; i < r; ++i) {
                     const double dot = (g.row(i).array() * ym.row(i).array()).sum();
                     dx.row(i).array() += ym.row(i).array() * (g.row(i).array() - dot);
                   }
                 });
}

Tensor softmax(const Tensor& a) { return softmax(a, a.rank() == 1 ? 0 : 1); }

Tensor log_sum_exp(const Tensor& a, int axis) {
  check(a.rank() == 1 || axis == 1, "log_sum_exp: only per-row (axis = 1) reduction is supported");
  auto [r, c] = row_view(a);
  check(c > 0, "log_sum_exp: empty rows");
  Array values(r);
  RowMat soft(r, c);
  ConstMatMap x(a.values().data(), r, c);
  for (Index i = 0; i < r; ++i) {
    Eigen::ArrayXd row = x.row(i).array();
    const double m = row.maxCoeff();
    Eigen::ArrayXd e = (row - m).exp();
    const double s = e.sum();
    values[i] = m + std::log(s);
    soft.row(i) = e / s;
  }
  Array softflat = Eigen::Map<const Array>(soft.data(), soft.size());
  Shape out_shape = a.rank() == 1 ? Shape{1} : Shape{r};
  return make_op(std::move(out_shape), std::move(values), {a},
                 [r, c, softflat = std::move(softflat)](const detail::Node& out,
                                                        std::vector<detail::NodePtr>& ps) {
                   ConstMatMap sm(softflat.data(), r, c);
                   MatMap dx(ps[0]->grad.data(), r, c);
                   for (Index i = 0; i < r; ++i) dx.row(i).array() += out.grad[i] * sm.row(i).array();
                 });
}

Tensor log_sum_exp(const Tensor& a) { return log_sum_exp(a, a.rank() == 1 ? 0 : 1); }

}  // namespace decode::ad
