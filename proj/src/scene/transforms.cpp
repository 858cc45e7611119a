#include "ssc/scene/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ssc/errors.hpp"

namespace ssc::scene {
namespace {

struct Support {
  std::size_t lo, hi;
  double frac;  // weight of hi
};

// Half-pixel-center source coordinate for target index i, clamped to the image.
Support bilinear_support(std::size_t i, std::size_t source, std::size_t target) {
  const double scale = static_cast<double>(source) / static_cast<double>(target);
  double s = (static_cast<double>(i) + 0.5) * scale - 0.5;
  s = std::clamp(s, 0.0, static_cast<double>(source - 1));
  const auto lo = static_cast<std::size_t>(std::floor(s));
  const std::size_t hi = std::min(lo + 1, source - 1);
  return {lo, hi, s - static_cast<double>(lo)};
}

}  // namespace

DepthImage resize_depth(const DepthImage& image, std::size_t target_width, std::size_t target_height) {
  if (target_width == 0 || target_height == 0 || target_width > image.width() ||
      target_height > image.height()) {
    throw ShapeError("resize_depth: target " + std::to_string(target_width) + "x" +
                     std::to_string(target_height) + " must be positive and not exceed source " +
                     std::to_string(image.width()) + "x" + std::to_string(image.height()));
  }
  DepthImage out(target_width, target_height);
  for (std::size_t u = 0; u < target_width; ++u) {
    const Support su = bilinear_support(u, image.width(), target_width);
    for (std::size_t v = 0; v < target_height; ++v) {
      const Support sv = bilinear_support(v, image.height(), target_height);
      const std::size_t us[2] = {su.lo, su.hi};
      const std::size_t vs[2] = {sv.lo, sv.hi};
      const double wu[2] = {1.0 - su.frac, su.frac};
      const double wv[2] = {1.0 - sv.frac, sv.frac};
      double acc = 0.0;
      double weight = 0.0;
      bool any_valid = false;
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          if (!image.valid(us[a], vs[b])) continue;
          any_valid = true;
          const double w = wu[a] * wv[b];
          acc += w * static_cast<double>(image.at(us[a], vs[b]));
          weight += w;
        }
      }
      if (!any_valid) continue;
      if (weight > 0.0) {
        out.set(u, v, static_cast<float>(acc / weight));
      } else {
        // Only zero-weight supports are valid: fall back to their plain mean.
        double sum = 0.0;
        int n = 0;
        for (int a = 0; a < 2; ++a) {
          for (int b = 0; b < 2; ++b) {
            if (image.valid(us[a], vs[b])) {
              sum += image.at(us[a], vs[b]);
              ++n;
            }
          }
        }
        out.set(u, v, static_cast<float>(sum / n));
      }
    }
  }
  return out;
}

SemanticVolume downsample_volume(const SemanticVolume& volume, std::size_t k) {
  if (k == 0) throw std::invalid_argument("downsample factor must be >= 1");
  const Extents3& in = volume.extents();
  const Extents3 out{(in.d + k - 1) / k, (in.h + k - 1) / k, (in.w + k - 1) / k};
  const std::size_t nc = volume.num_categories();
  SemanticVolume result(out, std::vector<std::uint8_t>(out.count(), kEmpty), volume.category_names());
  std::vector<std::size_t> counts(nc);
  for (std::size_t d = 0; d < out.d; ++d) {
    for (std::size_t h = 0; h < out.h; ++h) {
      for (std::size_t w = 0; w < out.w; ++w) {
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t dd = d * k; dd < std::min(in.d, (d + 1) * k); ++dd) {
          for (std::size_t hh = h * k; hh < std::min(in.h, (h + 1) * k); ++hh) {
            for (std::size_t ww = w * k; ww < std::min(in.w, (w + 1) * k); ++ww) {
              ++counts[volume.at(dd, hh, ww)];
            }
          }
        }
        std::uint8_t best = kEmpty;
        for (std::size_t c = 1; c < nc; ++c) {
          if (counts[c] > 0 && (best == kEmpty || counts[c] > counts[best])) {
            best = static_cast<std::uint8_t>(c);
          }
        }
        result.set(d, h, w, best);
      }
    }
  }
  return result;
}

SemanticVolume remap_labels(const SemanticVolume& volume, const std::map<std::size_t, std::size_t>& mapping,
                            const std::vector<std::string>& target_names) {
  std::vector<std::uint8_t> table(volume.num_categories());
  for (std::size_t c = 0; c < volume.num_categories(); ++c) {
    const auto it = mapping.find(c);
    if (it == mapping.end()) {
      throw std::invalid_argument("label map does not cover source category " + std::to_string(c) +
                                  " (" + volume.category_names()[c] + ")");
    }
    if (it->second >= target_names.size()) {
      throw std::invalid_argument("label map target " + std::to_string(it->second) +
                                  " outside target table");
    }
    table[c] = static_cast<std::uint8_t>(it->second);
  }
  std::vector<std::uint8_t> labels(volume.labels().size());
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = table[volume.labels()[i]];
  return SemanticVolume(volume.extents(), std::move(labels), target_names);
}

}  // namespace ssc::scene
