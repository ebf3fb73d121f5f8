#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "symvmf/ginv.hpp"
#include "symvmf/orient.hpp"
#include "symvmf/symgrp.hpp"

namespace symvmf {

// Row-major grid of per-pixel orientations; label 0 means unindexed.
struct OrientationMap {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<UnitQuaternion> pixels;  // width * height, row-major
  std::vector<int> labels;             // empty until segmentation

  const UnitQuaternion& at(std::size_t x, std::size_t y) const {
    return pixels[y * width + x];
  }
};

struct GrainRecord {
  int id = 0;
  std::size_t pixel_count = 0;
  UnitQuaternion mean;  // FZ-canonicalized
  double kappa = 0.0;
  bool kappa_saturated = false;
  int iterations = 0;
  bool converged = false;
  double mean_disorientation = 0.0;  // radians, member pixels to mean
  bool fit_failed = false;
  std::string error;
};

// CSV with header x,y,phi1,Phi,phi2 (radians, row-major grid).
OrientationMap load_map(const std::string& path);
void save_map(const OrientationMap& map, const std::string& path);

// 4-connected flood fill; pixels join a grain when adjacent with
// disorientation <= threshold. Components below min_size get label 0;
// surviving labels are dense from 1 in scan order.
void segment_grains(OrientationMap& map, const SymmetryGroup& group,
                    double threshold, std::size_t min_size);

std::vector<GrainRecord> index_grains(const OrientationMap& map,
                                      const SymmetryGroup& group,
                                      const EmConfig& config = {},
                                      unsigned threads = 0);

void emit_outputs(const std::vector<GrainRecord>& records,
                  const OrientationMap& map, const std::string& out_dir);

struct SynthMap {
  OrientationMap map;
  std::vector<UnitQuaternion> true_means;  // one per grain, index = label - 1
  std::vector<int> true_labels;            // per pixel, 1-based
};

// Voronoi tessellation of the grid into grains. Grain means are at least
// 30 degrees of disorientation apart; each grain is filled with a smooth
// orientation field whose per-pixel dispersion about the grain mean matches
// the given concentration, then every pixel gets a random group translate.
SynthMap synth_map(std::size_t grains, std::size_t width, std::size_t height,
                   double kappa, const SymmetryGroup& group, std::uint64_t seed);

}  // namespace symvmf
