#include "decode/tensor.hpp"

#include <sstream>
#include <stdexcept>
#include <utility>

namespace decode::ad {

namespace {
thread_local Tape* g_active_tape = nullptr;
}

Index shape_size(const Shape& s) {
  Index n = 1;
  for (Index d : s) n *= d;
  return n;
}

std::string shape_str(const Shape& s) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) os << ", ";
    os << s[i];
  }
  os << "]";
  return os.str();
}

void fail(const std::string& msg) { throw std::invalid_argument(msg); }

void check(bool cond, const std::string& msg) {
  if (!cond) fail(msg);
}

const detail::NodePtr& Tensor::node() const {
  if (!node_) throw std::logic_error("Tensor: use of undefined tensor");
  return node_;
}

Tensor Tensor::zeros(Shape shape, bool requires_grad) {
  const Index n = shape_size(shape);
  check(n >= 0, "Tensor::zeros: negative extent in shape " + shape_str(shape));
  auto node = std::make_shared<detail::Node>();
  node->shape = std::move(shape);
  node->values = Array::Zero(n);
  node->grad = Array::Zero(n);
  node->requires_grad = requires_grad;
  return Tensor(std::move(node));
}

Tensor Tensor::constant(Shape shape, double value) {
  Tensor t = zeros(std::move(shape), false);
  t.node_->values.setConstant(value);
  return t;
}

Tensor Tensor::scalar(double value) { return constant({1}, value); }

Tensor Tensor::from_values(Shape shape, Array values, bool requires_grad) {
  check(shape_size(shape) == values.size(),
        "Tensor::from_values: shape " + shape_str(shape) + " does not match " +
            std::to_string(values.size()) + " values");
  auto node = std::make_shared<detail::Node>();
  node->shape = std::move(shape);
  node->grad = Array::Zero(values.size());
  node->values = std::move(values);
  node->requires_grad = requires_grad;
  return Tensor(std::move(node));
}

Tensor Tensor::from_matrix(const Eigen::MatrixXd& m, bool requires_grad) {
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = m;
  Array flat = Eigen::Map<const Array>(rm.data(), rm.size());
  return from_values({m.rows(), m.cols()}, std::move(flat), requires_grad);
}

Tensor Tensor::from_vector(const Eigen::VectorXd& v, bool requires_grad) {
  return from_values({v.size()}, v.array(), requires_grad);
}

Index Tensor::rows() const {
  const Shape& s = shape();
  return s.size() == 2 ? s[0] : 1;
}

Index Tensor::cols() const {
  const Shape& s = shape();
  return s.size() == 2 ? s[1] : (s.empty() ? 1 : s[0]);
}

double Tensor::value() const {
  check(is_scalar(), "Tensor::value: tensor of shape " + shape_str(shape()) + " is not scalar");
  return node()->values[0];
}

double Tensor::grad_value() const {
  check(is_scalar(), "Tensor::grad_value: tensor of shape " + shape_str(shape()) + " is not scalar");
  return node()->grad[0];
}

Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
Tensor::matrix() const {
  return {node()->values.data(), rows(), cols()};
}

Tensor Tensor::detach() const {
  auto node = std::make_shared<detail::Node>();
  node->shape = shape();
  node->values = values();
  node->grad = Array::Zero(size());
  node->requires_grad = false;
  return Tensor(std::move(node));
}

Tape::Tape() {
  previous_ = g_active_tape;
  g_active_tape = this;
}

Tape::~Tape() { g_active_tape = previous_; }

Tape* Tape::active() { return g_active_tape; }

void Tape::record(detail::NodePtr out, std::vector<detail::NodePtr> parents,
                  std::function<void(const detail::Node&, std::vector<detail::NodePtr>&)> pull) {
  // Parents are created before their children, so append order is a valid
  // topological order by construction.
  if (out->id < 0) out->id = next_id_++;
  records_.push_back(Record{std::move(out), std::move(parents), std::move(pull)});
}

void Tape::backward(const Tensor& loss) {
  check(loss.is_scalar(), "Tape::backward: loss must be scalar, got shape " +
                              shape_str(loss.shape()));
  for (auto& r : records_) {
    r.out->grad.setZero();
    for (auto& p : r.parents) p->grad.setZero();
  }
  loss.node_ptr()->grad.setConstant(1.0);
  for (auto it = records_.rbegin(); it != records_.rend(); ++it) {
    if (it->out->grad.size() > 0 && it->out->grad.cwiseAbs().maxCoeff() == 0.0)
      continue;  // nothing to propagate through this record
    it->pull(*it->out, it->parents);
  }
}

}  // namespace decode::ad
