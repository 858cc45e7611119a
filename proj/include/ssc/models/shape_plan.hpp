#pragma once

#include <string>
#include <vector>

#include "ssc/autodiff/tensor.hpp"
#include "ssc/models/arch_config.hpp"

namespace ssc::models {

struct PlannedLayer {
  std::string network;  // E_dep, G, E_vox, D_vox, D_l
  std::string layer;    // e.g. "pair2.pool", "deconv1", "flatten"
  ad::Shape output;
};

// Symbolic trace of all five networks. Nothing is allocated beyond the
// shape vectors themselves.
struct ShapePlan {
  bool valid = false;
  // First inconsistency, naming the network, layer and axis.
  std::string error;
  std::vector<PlannedLayer> layers;

  // Output shape of a named layer; throws std::out_of_range if absent.
  const ad::Shape& shape_of(const std::string& network, const std::string& layer) const;
  std::string to_string() const;
};

ShapePlan validate_config(const ArchConfig& cfg);

}  // namespace ssc::models
