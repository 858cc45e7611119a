#include "ssc/models/checkpoint.hpp"

#include <cstring>
#include <limits>

#include "ssc/errors.hpp"
#include "ssc/scene/vsem.hpp"

namespace ssc::models {
namespace {

constexpr std::size_t kMaxRank = 8;
constexpr std::uint64_t kMaxValues = std::uint64_t{1} << 31;


std::string moment_name(const std::string& base, const char* suffix) { return base + suffix; }

}  // namespace

const CheckpointTensor* Checkpoint::find(const std::string& name) const {
  for (const CheckpointTensor& t : tensors) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

const CheckpointTensor& Checkpoint::require(const std::string& name, const ad::Shape& shape) const {
  const CheckpointTensor* t = find(name);
  if (t == nullptr) throw FormatError(FormatError::Kind::kBadHeader, "checkpoint lacks tensor " + name);
  if (t->shape != shape) {
    throw FormatError(FormatError::Kind::kBadHeader,
                      "checkpoint tensor " + name + " has shape " + ad::shape_to_string(t->shape) +
                          ", expected " + ad::shape_to_string(shape));
  }
  return *t;
}

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint& ckpt) {
  scene::ByteWriter out;
  scene::write_vsem_header(out, {scene::VsemKind::kCheckpoint, {}, scene::VsemDtype::kF64});
  out.str(ckpt.config_text);
  out.u32(static_cast<std::uint32_t>(ckpt.tensors.size()));
  for (const CheckpointTensor& t : ckpt.tensors) {
    if (t.shape.size() > kMaxRank) throw std::invalid_argument("checkpoint tensor rank too large: " + t.name);
    if (ad::shape_numel(t.shape) != t.values.size()) {
      throw std::invalid_argument("checkpoint tensor " + t.name + " has inconsistent size");
    }
    out.str(t.name);
    out.u8(static_cast<std::uint8_t>(t.shape.size()));
    for (std::size_t e : t.shape) {
      if (e > std::numeric_limits<std::uint32_t>::max()) {
        throw std::invalid_argument("checkpoint extent too large: " + t.name);
      }
      out.u32(static_cast<std::uint32_t>(e));
    }
    for (double v : t.values) out.f64(v);
  }
  return std::move(out.bytes());
}

Checkpoint decode_checkpoint(std::span<const std::uint8_t> bytes) {
  scene::ByteReader in(bytes);
  const scene::VsemHeader header = scene::read_vsem_header(in);
  if (header.kind != scene::VsemKind::kCheckpoint || !header.extents.empty() ||
      header.dtype != scene::VsemDtype::kF64) {
    throw FormatError(FormatError::Kind::kBadHeader, "not a checkpoint container");
  }
  Checkpoint ckpt;
  ckpt.config_text = in.str();
  const std::uint32_t count = in.u32();
  for (std::uint32_t i = 0; i < count; ++i) {
    CheckpointTensor t;
    t.name = in.str();
    const std::size_t rank = in.u8();
    if (rank > kMaxRank) throw FormatError(FormatError::Kind::kBadHeader, "tensor rank too large: " + t.name);
    std::uint64_t numel = 1;
    for (std::size_t a = 0; a < rank; ++a) {
      const std::uint32_t e = in.u32();
      numel *= e;
      if (numel > kMaxValues) {
        throw FormatError(FormatError::Kind::kExtentOverflow, "tensor too large: " + t.name);
      }
      t.shape.push_back(e);
    }
    if (numel * 8 > in.remaining()) {
      throw FormatError(FormatError::Kind::kTruncated, "checkpoint ends inside tensor " + t.name);
    }
    t.values.resize(numel);
    for (double& v : t.values) v = in.f64();
    ckpt.tensors.push_back(std::move(t));
  }
  if (in.remaining() != 0) {
    throw FormatError(FormatError::Kind::kTruncated,
                      "checkpoint has " + std::to_string(in.remaining()) + " trailing bytes");
  }
  return ckpt;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  scene::write_file(path, encode_checkpoint(ckpt));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return decode_checkpoint(scene::read_file(path));
}

void store_param_set(Checkpoint& ckpt, const std::string& prefix, const ad::ParamSet& params) {
  for (const ad::ParamSet::Entry& e : params.entries()) {
    const std::string base = prefix + "/" + e.name;
    const auto v = e.value.values();
    ckpt.tensors.push_back({base, e.value.shape(), {v.begin(), v.end()}});
    ckpt.tensors.push_back({moment_name(base, "#m"), e.value.shape(), e.first_moment});
    ckpt.tensors.push_back({moment_name(base, "#v"), e.value.shape(), e.second_moment});
  }
  ckpt.tensors.push_back({prefix + "/#adam_steps", {1}, {static_cast<double>(params.adam_steps())}});
}

void restore_param_set(const Checkpoint& ckpt, const std::string& prefix, ad::ParamSet& params) {
  for (ad::ParamSet::Entry& e : params.entries()) {
    const std::string base = prefix + "/" + e.name;
    const ad::Shape& shape = e.value.shape();
    const auto& value = ckpt.require(base, shape).values;
    std::memcpy(e.value.mutable_values().data(), value.data(), value.size() * sizeof(double));
    e.first_moment = ckpt.require(moment_name(base, "#m"), shape).values;
    e.second_moment = ckpt.require(moment_name(base, "#v"), shape).values;
  }
  params.set_adam_steps(static_cast<std::uint64_t>(ckpt.require(prefix + "/#adam_steps", {1}).values[0]));
}

void store_networks(Checkpoint& ckpt, const Networks& nets) {
  store_param_set(ckpt, "e_dep", nets.e_dep.params());
  store_param_set(ckpt, "e_vox", nets.e_vox.params());
  store_param_set(ckpt, "gen", nets.gen.params());
  store_param_set(ckpt, "d_vox", nets.d_vox.params());
  store_param_set(ckpt, "d_lat", nets.d_lat.params());
}

void restore_networks(const Checkpoint& ckpt, Networks& nets) {
  restore_param_set(ckpt, "e_dep", nets.e_dep.params());
  restore_param_set(ckpt, "e_vox", nets.e_vox.params());
  restore_param_set(ckpt, "gen", nets.gen.params());
  restore_param_set(ckpt, "d_vox", nets.d_vox.params());
  restore_param_set(ckpt, "d_lat", nets.d_lat.params());
}

}  // namespace ssc::models
