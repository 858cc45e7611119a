#include "ssc/autodiff/param_set.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace ssc::ad {

Tensor& ParamSet::add(const std::string& name, Shape shape) {
  if (contains(name)) throw std::invalid_argument("duplicate parameter name: " + name);
  Tensor t = Tensor::zeros(std::move(shape), true);
  const std::size_t n = t.numel();
  entries_.push_back(Entry{name, std::move(t), std::vector<double>(n, 0.0),
                           std::vector<double>(n, 0.0)});
  return entries_.back().value;
}

Tensor& ParamSet::add_glorot(const std::string& name, Shape shape, std::size_t fan_in,
                             std::size_t fan_out, Rng& rng) {
  Tensor& t = add(name, std::move(shape));
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (double& v : t.mutable_values()) v = rng.uniform(-limit, limit);
  return t;
}

const Tensor& ParamSet::get(const std::string& name) const {
  for (const Entry& e : entries_) {
    if (e.name == name) return e.value;
  }
  throw std::out_of_range("no parameter named " + name);
}

Tensor& ParamSet::get(const std::string& name) {
  return const_cast<Tensor&>(static_cast<const ParamSet&>(*this).get(name));
}

bool ParamSet::contains(const std::string& name) const {
  for (const Entry& e : entries_) {
    if (e.name == name) return true;
  }
  return false;
}

std::size_t ParamSet::parameter_count() const {
  std::size_t n = 0;
  for (const Entry& e : entries_) n += e.value.numel();
  return n;
}

void ParamSet::zero_grad() {
  for (Entry& e : entries_) e.value.zero_grad();
}

ParamSet ParamSet::clone() const {
  ParamSet copy;
  copy.adam_steps_ = adam_steps_;
  for (const Entry& e : entries_) {
    copy.entries_.push_back(Entry{e.name,
                                  Tensor::from_values(e.value.shape(),
                                                      {e.value.values().begin(), e.value.values().end()},
                                                      true),
                                  e.first_moment, e.second_moment});
  }
  return copy;
}

bool ParamSet::values_equal(const ParamSet& other) const {
  if (entries_.size() != other.entries_.size()) return false;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto a = entries_[i].value.values();
    const auto b = other.entries_[i].value.values();
    if (entries_[i].name != other.entries_[i].name || a.size() != b.size()) return false;
    if (std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) != 0) return false;
  }
  return true;
}

}  // namespace ssc::ad
