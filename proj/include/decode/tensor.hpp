#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace decode::ad {

using Index = Eigen::Index;
using Array = Eigen::ArrayXd;
using Shape = std::vector<Index>;

Index shape_size(const Shape& s);
std::string shape_str(const Shape& s);

[[noreturn]] void fail(const std::string& msg);
void check(bool cond, const std::string& msg);

namespace detail {

struct Node {
  Shape shape;
  Array values;  // flat, row-major for rank 2
  Array grad;    // same length as values; zero-initialized
  bool requires_grad = false;
  std::int64_t id = -1;  // assigned when first recorded on a tape
};

using NodePtr = std::shared_ptr<Node>;

}  // namespace detail

// Value-semantic handle to a node. Copies alias the same storage; this is
// what lets parameter tensors persist across training steps while ops build
// fresh result nodes.
class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor constant(Shape shape, double value);
  static Tensor scalar(double value);
  static Tensor from_values(Shape shape, Array values, bool requires_grad = false);
  static Tensor from_matrix(const Eigen::MatrixXd& m, bool requires_grad = false);
  static Tensor from_vector(const Eigen::VectorXd& v, bool requires_grad = false);

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const { return node()->shape; }
  Index rank() const { return static_cast<Index>(shape().size()); }
  Index size() const { return node()->values.size(); }
  Index rows() const;
  Index cols() const;
  bool is_scalar() const { return size() == 1; }

  const Array& values() const { return node()->values; }
  Array& values_mut() { return node()->values; }
  const Array& grad() const { return node()->grad; }
  double value() const;       // scalar only
  double grad_value() const;  // scalar only

  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
  matrix() const;
  Eigen::VectorXd vector() const { return node()->values.matrix(); }

  bool requires_grad() const { return node()->requires_grad; }
  void set_requires_grad(bool b) { node()->requires_grad = b; }
  void zero_grad() { node()->grad.setZero(); }

  // Same values, no gradient path.
  Tensor detach() const;

  detail::NodePtr node_ptr() const { return node_; }
  bool same_node(const Tensor& other) const { return node_ == other.node_; }

 private:
  friend class Tape;
  explicit Tensor(detail::NodePtr n) : node_(std::move(n)) {}
  const detail::NodePtr& node() const;

  detail::NodePtr node_;
};

// Define-by-run tape. Constructing a Tape makes it the active tape for the
// current thread (stack discipline; the previous one is restored on
// destruction). Ops record themselves on the active tape whenever any input
// requires gradients. Tapes are single-threaded; distinct tapes may live on
// distinct threads.
class Tape {
 public:
  Tape();
  ~Tape();
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Seeds d(loss)/d(loss) = 1 and pulls gradients back through every record
  // exactly once, in reverse recording order. Gradients of all participating
  // nodes are zeroed first, so each call yields fresh d(loss)/d(leaf).
  void backward(const Tensor& loss);

  std::size_t record_count() const { return records_.size(); }

  static Tape* active();

  struct Record {
    detail::NodePtr out;
    std::vector<detail::NodePtr> parents;
    // Reads out->grad, accumulates into parents' grads.
    std::function<void(const detail::Node&, std::vector<detail::NodePtr>&)> pull;
  };

  void record(detail::NodePtr out, std::vector<detail::NodePtr> parents,
              std::function<void(const detail::Node&, std::vector<detail::NodePtr>&)> pull);

 private:
  std::vector<Record> records_;
  Tape* previous_ = nullptr;
  std::int64_t next_id_ = 0;
};

}  // namespace decode::ad
