#include "decode/scene_gen.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace decode::scenes {

namespace {

constexpr double kPi = 3.14159265358979323846;

int mode_count(Family f) {
  switch (f) {
    case Family::kArc:
    case Family::kAggressiveArc:
      return 2;  // continue on circle / exit on tangent
    case Family::kStraight:
      return 2;  // lane keep / lane drift
    case Family::kTurn:
      return 3;  // straight / left / right
  }
  return 0;
}

// World-frame kinematic path: position and heading at arc length s from
// (origin, heading0) along either a straight line or a constant-curvature arc.
Eigen::Vector2d advance(const Eigen::Vector2d& origin, double heading0, double kappa, double s,
                        double* heading_out = nullptr) {
  if (heading_out) *heading_out = heading0 + kappa * s;
  if (std::abs(kappa) < 1e-12) {
    return origin + s * Eigen::Vector2d(std::cos(heading0), std::sin(heading0));
  }
  const double h1 = heading0 + kappa * s;
  return origin + (1.0 / kappa) * Eigen::Vector2d(std::sin(h1) - std::sin(heading0),
                                                  std::cos(heading0) - std::cos(h1));
}

struct PathSample {
  Eigen::Vector2d pos;
};

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::kArc: return "arc";
    case Family::kStraight: return "straight";
    case Family::kTurn: return "turn";
    case Family::kAggressiveArc: return "aggressive-arc";
  }
  return "?";
}

Family family_from_name(const std::string& name) {
  if (name == "arc") return Family::kArc;
  if (name == "straight") return Family::kStraight;
  if (name == "turn") return Family::kTurn;
  if (name == "aggressive-arc") return Family::kAggressiveArc;
  throw std::invalid_argument("DomainSpec: unknown kinematic family '" + name + "'");
}

void DomainSpec::validate() const {
  if (!(speed_min > 0.0) || !(speed_max >= speed_min))
    throw std::invalid_argument("DomainSpec '" + name + "': speed range must be positive, got [" +
                                std::to_string(speed_min) + ", " + std::to_string(speed_max) + "]");
  if (!std::isfinite(curvature_min) || !std::isfinite(curvature_max) || curvature_min < 0.0 ||
      curvature_max < curvature_min)
    throw std::invalid_argument("DomainSpec '" + name + "': bad curvature range");
  const bool needs_curvature =
      family == Family::kArc || family == Family::kAggressiveArc || family == Family::kTurn;
  if (needs_curvature && curvature_max <= 0.0)
    throw std::invalid_argument("DomainSpec '" + name + "': family " + family_name(family) +
                                " requires a positive curvature range");
  if (heading_noise_std < 0.0)
    throw std::invalid_argument("DomainSpec '" + name + "': negative heading_noise_std");
  if (static_cast<int>(mode_weights.size()) != mode_count(family))
    throw std::invalid_argument("DomainSpec '" + name + "': family " + family_name(family) +
                                " needs " + std::to_string(mode_count(family)) +
                                " mode_weights, got " + std::to_string(mode_weights.size()));
  double sum = 0.0;
  for (double w : mode_weights) {
    if (w < 0.0) throw std::invalid_argument("DomainSpec '" + name + "': negative mode weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("DomainSpec '" + name + "': mode_weights sum to " +
                                std::to_string(sum) + ", expected 1");
}

Eigen::MatrixX2d to_target_frame(const Eigen::MatrixX2d& points, const Eigen::Vector2d& origin,
                                 double heading) {
  const double c = std::cos(heading), s = std::sin(heading);
  Eigen::MatrixX2d out(points.rows(), 2);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const double dx = points(i, 0) - origin.x();
    const double dy = points(i, 1) - origin.y();
    out(i, 0) = c * dx + s * dy;
    out(i, 1) = -s * dx + c * dy;
  }
  return out;
}

namespace {

Scene synthesize(const DomainSpec& spec, const GeneratorConfig& cfg, Rng& rng, int domain_tag,
                 std::int64_t scene_id) {
  const int tp = cfg.t_past, tf = cfg.t_future;
  const double dt = cfg.dt;

  // Anchor pose in world frame; normalization removes it exactly.
  const Eigen::Vector2d p0(rng.uniform(-100.0, 100.0), rng.uniform(-100.0, 100.0));
  const double psi = rng.uniform(0.0, 2.0 * kPi);

  const double v = rng.uniform(spec.speed_min, spec.speed_max);
  const double kappa_mag = rng.uniform(spec.curvature_min, spec.curvature_max);
  const double turn_dir = rng.uniform() < 0.5 ? 1.0 : -1.0;
  const double accel =
      spec.family == Family::kAggressiveArc ? rng.uniform(0.8, 2.0) : 0.0;

  // Mode draw per the mixture weights.
  int mode = 0;
  {
    double u = rng.uniform(), acc = 0.0;
    for (std::size_t i = 0; i < spec.mode_weights.size(); ++i) {
      acc += spec.mode_weights[i];
      if (u < acc) {
        mode = static_cast<int>(i);
        break;
      }
      mode = static_cast<int>(spec.mode_weights.size()) - 1;
    }
  }

  const auto arc_length = [&](double t) { return v * t + 0.5 * accel * t * t; };

  // Past curvature: the approach segment. Turn scenes approach straight.
  double kappa_past = 0.0;
  switch (spec.family) {
    case Family::kArc:
    case Family::kAggressiveArc:
      kappa_past = turn_dir * kappa_mag;
      break;
    case Family::kStraight:
    case Family::kTurn:
      kappa_past = 0.0;
      break;
  }

  const auto past_point = [&](double t) {  // t <= 0
    return advance(p0, psi, kappa_past, arc_length(t));
  };

  // Future per family and mode.
  const double t_turn = rng.uniform(0.5, 2.0);
  const double drift_side = rng.uniform() < 0.5 ? 1.0 : -1.0;
  const double drift_mag = rng.uniform(2.5, 4.0);
  const auto future_point = [&](double t) {  // t > 0
    const double s = arc_length(t);
    switch (spec.family) {
      case Family::kArc:
      case Family::kAggressiveArc:
        if (mode == 0) return advance(p0, psi, kappa_past, s);  // continue on circle
        return advance(p0, psi, 0.0, s);                        // exit on tangent
      case Family::kStraight: {
        Eigen::Vector2d p = advance(p0, psi, 0.0, s);
        if (mode == 1) {
          const double horizon = tf * dt;
          const double ramp = 0.5 * (1.0 - std::cos(kPi * std::min(t / horizon, 1.0)));
          p += drift_side * drift_mag * ramp * Eigen::Vector2d(-std::sin(psi), std::cos(psi));
        }
        return p;
      }
      case Family::kTurn: {
        if (mode == 0) return advance(p0, psi, 0.0, s);  // straight through
        const double kappa_turn = (mode == 1 ? 1.0 : -1.0) * kappa_mag;
        if (t <= t_turn) return advance(p0, psi, 0.0, s);
        const double s_turn = arc_length(t_turn);
        const Eigen::Vector2d pivot = advance(p0, psi, 0.0, s_turn);
        return advance(pivot, psi, kappa_turn, s - s_turn);
      }
    }
    return p0;
  };

  Scene scene;
  scene.domain_tag = domain_tag;
  scene.scene_id = scene_id;
  scene.past.resize(tp, 2);
  scene.future.resize(tf, 2);

  // Positional jitter proportional to step length; the anchor point stays
  // exact so normalization lands it on the origin.
  const double jitter = spec.heading_noise_std * v * dt;
  const auto noisy = [&](const Eigen::Vector2d& p) {
    return Eigen::Vector2d(p.x() + jitter * rng.normal(), p.y() + jitter * rng.normal());
  };

  Eigen::MatrixX2d past_world(tp, 2), future_world(tf, 2);
  for (int k = 0; k < tp; ++k) {
    const double t = (k - (tp - 1)) * dt;
    Eigen::Vector2d p = past_point(t);
    if (k != tp - 1) p = noisy(p);
    past_world.row(k) = p;
  }
  for (int k = 0; k < tf; ++k) future_world.row(k) = noisy(future_point((k + 1) * dt));

  scene.past = to_target_frame(past_world, p0, psi);
  scene.future = to_target_frame(future_world, p0, psi);
  scene.past.row(tp - 1).setZero();  // exact origin regardless of rounding

  // Constant-velocity neighbor tracks near the target.
  const int n_valid = rng.uniform_int(cfg.n_neighbors >= 2 ? 2 : cfg.n_neighbors, cfg.n_neighbors);
  scene.neighbors.assign(cfg.n_neighbors, Eigen::MatrixX2d::Zero(tp, 2));
  scene.neighbor_mask.assign(cfg.n_neighbors, 0);
  for (int j = 0; j < n_valid; ++j) {
    const double r = rng.uniform(5.0, 25.0);
    const double ang = rng.uniform(0.0, 2.0 * kPi);
    const Eigen::Vector2d np0 = p0 + r * Eigen::Vector2d(std::cos(ang), std::sin(ang));
    const double nv = rng.uniform(0.5 * v, 1.2 * v);
    const double npsi = psi + rng.normal(0.0, 0.3);
    Eigen::MatrixX2d track(tp, 2);
    for (int k = 0; k < tp; ++k) {
      const double t = (k - (tp - 1)) * dt;
      track.row(k) = np0 + nv * t * Eigen::Vector2d(std::cos(npsi), std::sin(npsi));
    }
    scene.neighbors[j] = to_target_frame(track, p0, psi);
    scene.neighbor_mask[j] = 1;
  }
  return scene;
}

}  // namespace

std::vector<Scene> generate_domain(const DomainSpec& spec, int n, std::uint64_t seed,
                                   const GeneratorConfig& cfg, int domain_tag) {
  spec.validate();
  if (n <= 0) throw std::invalid_argument("generate_domain: n must be positive, got " +
                                          std::to_string(n));
  std::vector<Scene> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(i)));
    out.push_back(synthesize(spec, cfg, rng, domain_tag, /*scene_id=*/i));
  }
  return out;
}

std::vector<Scene> generate_pretrain_mix(const std::vector<DomainSpec>& specs,
                                         const std::vector<double>& weights, int n,
                                         std::uint64_t seed, const GeneratorConfig& cfg) {
  if (specs.empty()) throw std::invalid_argument("generate_pretrain_mix: empty spec list");
  if (specs.size() != weights.size())
    throw std::invalid_argument("generate_pretrain_mix: " + std::to_string(specs.size()) +
                                " specs vs " + std::to_string(weights.size()) + " weights");
  if (n <= 0) throw std::invalid_argument("generate_pretrain_mix: n must be positive, got " +
                                          std::to_string(n));
  double wsum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("generate_pretrain_mix: negative weight");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-9)
    throw std::invalid_argument("generate_pretrain_mix: weights sum to " + std::to_string(wsum));
  for (const auto& s : specs) s.validate();

  // Largest-remainder apportionment: exact proportions up to one scene.
  const std::size_t k = specs.size();
  std::vector<int> counts(k, 0);
  std::vector<std::pair<double, std::size_t>> remainders;
  int assigned = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double exact = weights[i] * n;
    counts[i] = static_cast<int>(std::floor(exact));
    assigned += counts[i];
    remainders.push_back({exact - counts[i], i});
  }
  std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (int i = 0; i < n - assigned; ++i) counts[remainders[i % k].second]++;

  std::vector<int> domain_of;
  domain_of.reserve(n);
  for (std::size_t i = 0; i < k; ++i)
    domain_of.insert(domain_of.end(), counts[i], static_cast<int>(i));

  Rng shuffle_rng(Rng::derive(seed, 0xa11ce));
  for (int i = n - 1; i > 0; --i)
    std::swap(domain_of[i], domain_of[shuffle_rng.uniform_int(0, i)]);

  std::vector<Scene> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(i) + 0x517e));
    const int d = domain_of[i];
    Scene s = synthesize(specs[d], cfg, rng, d + 1, i);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<DomainSpec> stock_domains() {
  std::vector<DomainSpec> d(4);
  d[0] = {"arc", Family::kArc, 5.0, 12.0, 0.03, 0.08, 0.05, {0.6, 0.4}};
  d[1] = {"straight", Family::kStraight, 25.0, 40.0, 0.0, 0.0, 0.05, {0.7, 0.3}};
  d[2] = {"turn", Family::kTurn, 3.0, 10.0, 0.05, 0.12, 0.05, {0.4, 0.3, 0.3}};
  d[3] = {"aggressive-arc", Family::kAggressiveArc, 14.0, 22.0, 0.03, 0.08, 0.05, {0.6, 0.4}};
  return d;
}

}  // namespace decode::scenes
