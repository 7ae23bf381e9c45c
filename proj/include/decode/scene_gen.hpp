#pragma once

#include "decode/rng.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace decode::scenes {

// A single prediction instance in the target-centric frame: the last past
// position is the origin and the agent heading at that instant is the +x
// axis. domain_tag is evaluation-only; nothing on the inference path reads it.
struct Scene {
  Eigen::MatrixX2d past;                     // t_past x 2, timestep dt
  Eigen::MatrixX2d future;                   // t_future x 2
  std::vector<Eigen::MatrixX2d> neighbors;   // n_neighbors entries, each t_past x 2
  std::vector<std::uint8_t> neighbor_mask;   // 1 = valid track, 0 = padding
  int domain_tag = 0;
  std::int64_t scene_id = 0;
};

enum class Family { kArc, kStraight, kTurn, kAggressiveArc };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

struct DomainSpec {
  std::string name;
  Family family = Family::kStraight;
  double speed_min = 0.0, speed_max = 0.0;          // m/s
  double curvature_min = 0.0, curvature_max = 0.0;  // 1/m
  double heading_noise_std = 0.0;  // per-step heading wobble, radians
  std::vector<double> mode_weights;

  void validate() const;  // throws std::invalid_argument naming the bad field
};

struct GeneratorConfig {
  int t_past = 10;
  int t_future = 60;
  int n_neighbors = 4;
  double dt = 0.1;
};

// The rigid transform taking a world-frame track into the target-centric
// frame defined by (origin, heading). Exposed for direct testing.
Eigen::MatrixX2d to_target_frame(const Eigen::MatrixX2d& points, const Eigen::Vector2d& origin,
                                 double heading);

// Deterministic given (spec, seed): per-scene generators are seeded from the
// scene index. Scenes satisfy the target-centric invariants exactly.
std::vector<Scene> generate_domain(const DomainSpec& spec, int n, std::uint64_t seed,
                                   const GeneratorConfig& cfg, int domain_tag = 0);

// Mixed corpus with exact largest-remainder domain counts and a seeded
// shuffle, so proportions match the weights to within one scene.
std::vector<Scene> generate_pretrain_mix(const std::vector<DomainSpec>& specs,
                                         const std::vector<double>& weights, int n,
                                         std::uint64_t seed, const GeneratorConfig& cfg);

// The four stock domains: arc (roundabout-like), straight (highway-like),
// turn (intersection-like), aggressive-arc (shifted-speed arc, held out of
// the stock expansion plan).
std::vector<DomainSpec> stock_domains();

}  // namespace decode::scenes
