#include "ssc/autodiff/tensor.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "ssc/errors.hpp"

namespace ssc::ad {
namespace detail {
namespace {
std::atomic<std::size_t> g_live_nodes{0};
std::atomic<std::size_t> g_created_nodes{0};
}

Node::Node() {
  g_live_nodes.fetch_add(1, std::memory_order_relaxed);
  g_created_nodes.fetch_add(1, std::memory_order_relaxed);
}
Node::~Node() { g_live_nodes.fetch_sub(1, std::memory_order_relaxed); }

std::vector<double>& Node::ensure_grad() {
  if (grad.size() != value.size()) grad.assign(value.size(), 0.0);
  return grad;
}

std::size_t live_node_count() { return g_live_nodes.load(std::memory_order_relaxed); }
std::size_t created_node_count() { return g_created_nodes.load(std::memory_order_relaxed); }

namespace {
struct BranchTrace {
  bool active = false;
  std::uint64_t digest = 0;
};
thread_local BranchTrace t_trace;
}  // namespace

void begin_branch_trace() { t_trace = {true, 0xcbf29ce484222325ULL}; }

std::uint64_t end_branch_trace() {
  t_trace.active = false;
  return t_trace.digest;
}

bool branch_trace_active() { return t_trace.active; }

void trace_branch(std::uint64_t decision) {
  t_trace.digest = (t_trace.digest ^ decision) * 0x100000001b3ULL;
}

}  // namespace detail

std::size_t shape_numel(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t e : shape) n *= e;
  return n;
}

std::string shape_to_string(const Shape& shape) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out << 'x';
    out << shape[i];
  }
  out << ']';
  return out.str();
}

namespace {

void check_shape(const Shape& shape) {
  for (std::size_t e : shape) {
    if (e == 0) throw ShapeError("tensor extents must be positive, got " + shape_to_string(shape));
  }
}

}  // namespace

Tensor Tensor::zeros(Shape shape, bool requires_grad) { return full(std::move(shape), 0.0, requires_grad); }

Tensor Tensor::full(Shape shape, double value, bool requires_grad) {
  check_shape(shape);
  const std::size_t n = shape_numel(shape);
  return from_values(std::move(shape), std::vector<double>(n, value), requires_grad);
}

Tensor Tensor::from_values(Shape shape, std::vector<double> values, bool requires_grad) {
  check_shape(shape);
  if (shape_numel(shape) != values.size()) {
    throw ShapeError("value count " + std::to_string(values.size()) + " does not match shape " +
                     shape_to_string(shape));
  }
  auto node = std::make_shared<detail::Node>();
  node->shape = std::move(shape);
  node->value = std::move(values);
  node->requires_grad = requires_grad;
  node->op = "leaf";
  if (requires_grad) node->ensure_grad();
  return Tensor(std::move(node));
}

Tensor Tensor::scalar(double value, bool requires_grad) {
  return from_values(Shape{1}, {value}, requires_grad);
}

const Shape& Tensor::shape() const { return node_->shape; }
std::size_t Tensor::numel() const { return node_->value.size(); }
bool Tensor::requires_grad() const { return node_->requires_grad; }
const std::string& Tensor::op_name() const { return node_->op; }

std::span<const double> Tensor::values() const { return node_->value; }
std::span<double> Tensor::mutable_values() { return node_->value; }

double Tensor::item() const {
  if (numel() != 1) throw ShapeError("item() on tensor of shape " + shape_to_string(shape()));
  return node_->value[0];
}

std::span<const double> Tensor::grad() const { return node_->ensure_grad(); }
std::span<double> Tensor::mutable_grad() { return node_->ensure_grad(); }

void Tensor::zero_grad() {
  auto& g = node_->ensure_grad();
  std::fill(g.begin(), g.end(), 0.0);
}

Tensor Tensor::detach() const { return from_values(shape(), node_->value, false); }

Tensor Tensor::make_result(std::string op, Shape shape, std::vector<double> values,
                           std::vector<Tensor> parents,
                           std::function<void(detail::Node& self)> backward) {
  auto node = std::make_shared<detail::Node>();
  node->shape = std::move(shape);
  node->value = std::move(values);
  node->op = std::move(op);
  bool any = false;
  for (const Tensor& p : parents) any = any || p.requires_grad();
  if (any) {
    node->requires_grad = true;
    node->parents.reserve(parents.size());
    for (Tensor& p : parents) node->parents.push_back(std::move(p.node_));
    node->backward = std::move(backward);
  }
  return Tensor(std::move(node));
}

std::vector<detail::Node*> topological_order(const Tensor& root) {
  std::vector<detail::Node*> order;
  if (!root.defined() || !root.requires_grad()) return order;
  std::unordered_set<const detail::Node*> visited;
  // Iterative post-order DFS.
  std::vector<std::pair<detail::Node*, std::size_t>> stack;
  stack.emplace_back(root.node().get(), 0);
  visited.insert(root.node().get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      detail::Node* parent = node->parents[next++].get();
      if (parent->requires_grad && visited.insert(parent).second) stack.emplace_back(parent, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  return order;
}

void backward(const Tensor& loss) {
  if (!loss.defined() || loss.numel() != 1) {
    throw ShapeError("backward requires a scalar loss, got " +
                     (loss.defined() ? shape_to_string(loss.shape()) : std::string("undefined")));
  }
  if (!std::isfinite(loss.item())) throw NumericError("non-finite loss in backward");
  const auto order = topological_order(loss);
  for (detail::Node* node : order) {
    auto& g = node->ensure_grad();
    std::fill(g.begin(), g.end(), 0.0);
  }
  if (order.empty()) return;
  order.back()->grad[0] = 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    detail::Node* node = *it;
    if (node->backward) {
      for (const auto& p : node->parents) {
        if (p->requires_grad) p->ensure_grad();
      }
      node->backward(*node);
    }
  }
}

}  // namespace ssc::ad
