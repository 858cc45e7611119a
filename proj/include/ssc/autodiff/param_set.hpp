#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ssc/autodiff/tensor.hpp"
#include "ssc/rng.hpp"

namespace ssc::ad {

// Named, ordered parameters of one network plus their Adam moments.
class ParamSet {
 public:
  struct Entry {
    std::string name;
    Tensor value;
    std::vector<double> first_moment;
    std::vector<double> second_moment;
  };

  // Adds a zero-initialized trainable parameter and returns it.
  Tensor& add(const std::string& name, Shape shape);
  // Uniform fan-in/fan-out scaling: limit = sqrt(6 / (fan_in + fan_out)).
  Tensor& add_glorot(const std::string& name, Shape shape, std::size_t fan_in,
                     std::size_t fan_out, Rng& rng);

  const Tensor& get(const std::string& name) const;
  Tensor& get(const std::string& name);
  bool contains(const std::string& name) const;

  std::vector<Entry>& entries() { return entries_; }
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t parameter_count() const;

  void zero_grad();

  // Shared by every parameter of the set; advanced by adam_step.
  std::uint64_t adam_steps() const { return adam_steps_; }
  void set_adam_steps(std::uint64_t steps) { adam_steps_ = steps; }

  // Deep copy of values and optimizer state, detached from any graph.
  ParamSet clone() const;
  // Bitwise equality of parameter values.
  bool values_equal(const ParamSet& other) const;

 private:
  std::vector<Entry> entries_;
  std::uint64_t adam_steps_ = 0;
};

}  // namespace ssc::ad
