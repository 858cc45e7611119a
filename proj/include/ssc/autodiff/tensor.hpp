#pragma once

// Dense row-major tensors with reverse-mode differentiation.
//
// A Tensor is a cheap handle to a graph node. Operations on tensors that
// require gradients record their parents and a backward closure; calling
// backward() on a scalar result walks the reachable nodes in reverse
// topological order. All arithmetic is 64-bit.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace ssc::ad {

using Shape = std::vector<std::size_t>;

std::size_t shape_numel(const Shape& shape);
std::string shape_to_string(const Shape& shape);

namespace detail {

struct Node {
  Shape shape;
  std::vector<double> value;
  std::vector<double> grad;  // allocated lazily, same size as value
  bool requires_grad = false;
  std::string op;  // "leaf" for inputs and parameters
  std::vector<std::shared_ptr<Node>> parents;
  // Reads this node's grad and accumulates into the parents' grads.
  std::function<void(Node& self)> backward;

  Node();
  ~Node();
  Node(const Node&) = delete;
  Node& operator=(const Node&) = delete;

  std::vector<double>& ensure_grad();
};

// Number of live nodes; lets tests prove that shape planning allocates nothing.
std::size_t live_node_count();
// Nodes created since startup, including ones already destroyed.
std::size_t created_node_count();

// Per-thread digest of the branch decisions (rectifier side, pool winner,
// clamp range) taken by forward passes between begin and end. grad_check
// uses it to recognise perturbations that cross a kink.
void begin_branch_trace();
std::uint64_t end_branch_trace();
bool branch_trace_active();
void trace_branch(std::uint64_t decision);

}  // namespace detail

class Tensor {
 public:
  Tensor() = default;

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, double value, bool requires_grad = false);
  static Tensor from_values(Shape shape, std::vector<double> values, bool requires_grad = false);
  static Tensor scalar(double value, bool requires_grad = false);

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const;
  std::size_t rank() const { return shape().size(); }
  std::size_t numel() const;
  bool requires_grad() const;
  const std::string& op_name() const;

  std::span<const double> values() const;
  // Direct write access; intended for leaves (parameters, inputs).
  std::span<double> mutable_values();
  double item() const;
  double at(std::size_t flat_index) const { return values()[flat_index]; }

  // Gradient from the last backward pass; zeros if never reached.
  std::span<const double> grad() const;
  std::span<double> mutable_grad();
  void zero_grad();

  // Same values, no graph history.
  Tensor detach() const;

  const std::shared_ptr<detail::Node>& node() const { return node_; }

  // Builds a result node. Parents keep their positions in self.parents so the
  // backward closure can index them; closures must skip parents whose
  // requires_grad is false. If no parent requires gradients the result is a
  // constant and `backward` is discarded.
  static Tensor make_result(std::string op, Shape shape, std::vector<double> values,
                            std::vector<Tensor> parents,
                            std::function<void(detail::Node& self)> backward);

 private:
  explicit Tensor(std::shared_ptr<detail::Node> node) : node_(std::move(node)) {}
  std::shared_ptr<detail::Node> node_;
};

// Nodes reachable from `root` that require gradients, inputs before users.
std::vector<detail::Node*> topological_order(const Tensor& root);

// Populates gradients of every requires_grad node reachable from `loss`.
// Gradients of reached nodes are reset first, so repeated calls on the same
// graph yield the same result. Throws ShapeError for a non-scalar loss and
// NumericError for a non-finite one.
void backward(const Tensor& loss);

}  // namespace ssc::ad
