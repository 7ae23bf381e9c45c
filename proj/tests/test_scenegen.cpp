#include "decode/dataset_io.hpp"
#include "decode/digest.hpp"
#include "decode/scene_gen.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

using namespace decode;
using namespace decode::scenes;

namespace {

GeneratorConfig small_cfg() {
  GeneratorConfig cfg;
  cfg.t_past = 10;
  cfg.t_future = 30;
  cfg.n_neighbors = 4;
  return cfg;
}

DomainSpec straight_spec(double noise = 0.0) {
  DomainSpec s{"straight", Family::kStraight, 25.0, 35.0, 0.0, 0.0, noise, {1.0, 0.0}};
  return s;
}

DomainSpec arc_spec(double noise = 0.0) {
  DomainSpec s{"arc", Family::kArc, 5.0, 12.0, 0.03, 0.08, noise, {1.0, 0.0}};
  return s;
}

bool scenes_equal(const Scene& a, const Scene& b) {
  if (a.scene_id != b.scene_id || a.domain_tag != b.domain_tag) return false;
  if (a.neighbor_mask != b.neighbor_mask) return false;
  if ((a.past - b.past).cwiseAbs().maxCoeff() != 0.0) return false;
  if ((a.future - b.future).cwiseAbs().maxCoeff() != 0.0) return false;
  for (std::size_t i = 0; i < a.neighbors.size(); ++i)
    if ((a.neighbors[i] - b.neighbors[i]).cwiseAbs().maxCoeff() != 0.0) return false;
  return true;
}

// Menger curvature of three consecutive points.
double curvature3(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
  const double area2 = std::abs((b.x() - a.x()) * (c.y() - a.y()) -
                                (b.y() - a.y()) * (c.x() - a.x()));
  const double d = (b - a).norm() * (c - b).norm() * (c - a).norm();
  return d > 0 ? 2.0 * area2 / d : 0.0;
}

}  // namespace

TEST_CASE("target frame transform is exact") {
  Eigen::MatrixX2d pts(3, 2);
  pts << 4.0, 5.0, 7.0, 5.0, 4.0, 8.0;
  const Eigen::Vector2d origin(4.0, 5.0);
  const double heading = 1.2345;
  Eigen::MatrixX2d out = to_target_frame(pts, origin, heading);
  CHECK(out(0, 0) == 0.0);
  CHECK(out(0, 1) == 0.0);
  // A point one heading-unit ahead lands on +x.
  Eigen::MatrixX2d ahead(1, 2);
  ahead << 4.0 + std::cos(heading), 5.0 + std::sin(heading);
  Eigen::MatrixX2d t = to_target_frame(ahead, origin, heading);
  CHECK(std::abs(t(0, 0) - 1.0) < 1e-12);
  CHECK(std::abs(t(0, 1)) < 1e-12);
}

TEST_CASE("straight domain: displacement matches the speed band") {
  const auto cfg = small_cfg();
  auto scenes = generate_domain(straight_spec(), 10, 7, cfg);
  REQUIRE(scenes.size() == 10);
  for (const auto& s : scenes) {
    const double dist = s.future.row(cfg.t_future - 1).norm();
    const double horizon = cfg.t_future * cfg.dt;  // 3 s at the test config
    CHECK(dist >= 25.0 * horizon - 1e-6);
    CHECK(dist <= 35.0 * horizon + 1e-6);
    // Zero-noise straight scenes stay on the +x axis: heading is normalized.
    CHECK(s.future.col(1).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(s.past.col(1).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("arc domain with zero noise lies on a circle") {
  const auto cfg = small_cfg();
  auto scenes = generate_domain(arc_spec(), 5, 21, cfg);
  for (const auto& s : scenes) {
    // The tangent at the origin is +x, so the circle center is (0, +-r).
    // Infer r from any three points and verify all points against it.
    const double kappa = curvature3(s.future.row(0), s.future.row(10), s.future.row(20));
    const double r = 1.0 / kappa;
    const double cy = s.future(0, 1) > 0 ? r : -r;
    for (int k = 0; k < cfg.t_future; ++k) {
      const double d = (s.future.row(k) - Eigen::RowVector2d(0.0, cy)).norm();
      CHECK(std::abs(d - r) < 1e-9);
    }
    for (int k = 0; k < cfg.t_past; ++k) {
      const double d = (s.past.row(k) - Eigen::RowVector2d(0.0, cy)).norm();
      CHECK(std::abs(d - r) < 1e-9);
    }
  }
}

TEST_CASE("same spec and seed give bit-identical scenes") {
  const auto cfg = small_cfg();
  auto a = generate_domain(arc_spec(0.05), 20, 99, cfg);
  auto b = generate_domain(arc_spec(0.05), 20, 99, cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(scenes_equal(a[i], b[i]));
}

TEST_CASE("normalization invariants hold for every emitted scene") {
  const auto cfg = small_cfg();
  auto stock = stock_domains();
  for (const auto& spec : stock) {
    auto scenes = generate_domain(spec, 25, 5, cfg);
    for (const auto& s : scenes) {
      CHECK(s.past(cfg.t_past - 1, 0) == 0.0);
      CHECK(s.past(cfg.t_past - 1, 1) == 0.0);
      // Continuity with the past at the generator's speed cap.
      CHECK(s.future.row(0).norm() <= 60.0 * cfg.dt);
      int mask_count = 0;
      for (auto m : s.neighbor_mask) mask_count += m;
      for (std::size_t j = 0; j < s.neighbors.size(); ++j)
        if (!s.neighbor_mask[j]) CHECK(s.neighbors[j].cwiseAbs().maxCoeff() == 0.0);
      CHECK(mask_count >= 1);
    }
  }
}

TEST_CASE("noiseless families have disjoint speed-curvature signatures") {
  auto cfg = small_cfg();
  auto stock = stock_domains();
  for (auto& s : stock) s.heading_noise_std = 0.0;

  // Hand-written two-feature rule over the approach segment: mean past speed
  // and past curvature. Arcs approach on the circle, turns approach straight.
  const auto classify = [&](const Scene& s) {
    double dist = 0.0;
    for (int k = 1; k < cfg.t_past; ++k)
      dist += (s.past.row(k) - s.past.row(k - 1)).norm();
    const double speed = dist / ((cfg.t_past - 1) * cfg.dt);
    const double kappa = curvature3(s.past.row(0), s.past.row(4), s.past.row(8));
    if (speed > 23.5) return 2;             // straight band
    if (speed > 13.0) return 4;             // aggressive arc band
    return kappa > 0.015 ? 1 : 3;           // arc approach vs straight approach
  };

  const int tags[4] = {1, 2, 3, 4};
  for (int d = 0; d < 4; ++d) {
    auto scenes = generate_domain(stock[d], 50, 31 + d, cfg, tags[d]);
    for (const auto& s : scenes) CHECK(classify(s) == tags[d]);
  }
}

TEST_CASE("pretrain mix proportions are exact") {
  auto cfg = small_cfg();
  auto stock = stock_domains();
  std::vector<DomainSpec> specs{stock[0], stock[1]};
  auto scenes = generate_pretrain_mix(specs, {0.5, 0.5}, 1000, 3, cfg);
  REQUIRE(scenes.size() == 1000);
  int c1 = 0;
  for (const auto& s : scenes) c1 += s.domain_tag == 1;
  CHECK(c1 >= 460);
  CHECK(c1 <= 540);
  CHECK(c1 == 500);  // largest-remainder apportionment is exact here
}

TEST_CASE("single-spec mix uses only that spec; n = 0 rejected") {
  auto cfg = small_cfg();
  auto scenes = generate_pretrain_mix({arc_spec(0.02)}, {1.0}, 50, 3, cfg);
  for (const auto& s : scenes) CHECK(s.domain_tag == 1);
  CHECK_THROWS_AS(generate_pretrain_mix({arc_spec()}, {1.0}, 0, 3, cfg), std::invalid_argument);
  CHECK_THROWS_AS(generate_domain(arc_spec(), 0, 3, cfg), std::invalid_argument);
  CHECK_THROWS_AS(generate_pretrain_mix({}, {}, 5, 3, cfg), std::invalid_argument);
}

TEST_CASE("invalid specs are rejected with the field named") {
  auto cfg = small_cfg();
  DomainSpec bad = arc_spec();
  bad.speed_min = -1.0;
  CHECK_THROWS_WITH_AS(generate_domain(bad, 5, 3, cfg), doctest::Contains("speed"),
                       std::invalid_argument);
  bad = arc_spec();
  bad.mode_weights = {0.7, 0.7};
  CHECK_THROWS_WITH_AS(generate_domain(bad, 5, 3, cfg), doctest::Contains("mode_weights"),
                       std::invalid_argument);
}

TEST_CASE("dataset round trip is field-exact") {
  const auto cfg = small_cfg();
  auto scenes = generate_pretrain_mix({arc_spec(0.05), straight_spec(0.05)}, {0.4, 0.6}, 100, 17,
                                      cfg);
  const std::string path = "roundtrip_test.dds";
  write_dataset(path, scenes, cfg, 80);
  auto loaded = read_dataset(path);
  CHECK(loaded.train_count == 80);
  CHECK(loaded.config.t_past == cfg.t_past);
  CHECK(loaded.config.t_future == cfg.t_future);
  REQUIRE(loaded.scenes.size() == scenes.size());
  for (std::size_t i = 0; i < scenes.size(); ++i) CHECK(scenes_equal(scenes[i], loaded.scenes[i]));
  std::remove(path.c_str());
}

TEST_CASE("truncated dataset names the failing record") {
  const auto cfg = small_cfg();
  auto scenes = generate_domain(arc_spec(0.05), 5, 3, cfg, 1);
  const std::string path = "truncate_test.dds";
  write_dataset(path, scenes, cfg);
  // Chop the file in the middle of record 3's payload.
  std::ifstream in(path, std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  in.close();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() * 7 / 10));
  out.close();
  CHECK_THROWS_WITH_AS(read_dataset(path), doctest::Contains("record 3"), std::runtime_error);
  std::remove(path.c_str());
}

TEST_CASE("empty dataset reads back as empty") {
  const auto cfg = small_cfg();
  const std::string path = "empty_test.dds";
  write_dataset(path, {}, cfg);
  auto loaded = read_dataset(path);
  CHECK(loaded.scenes.empty());
  std::remove(path.c_str());
}

TEST_CASE("dataset digest is a pure function of spec, n and seed") {
  const auto cfg = small_cfg();
  const std::string p1 = "digest_a.dds", p2 = "digest_b.dds";
  write_dataset(p1, generate_domain(arc_spec(0.05), 30, 11, cfg, 1), cfg);
  write_dataset(p2, generate_domain(arc_spec(0.05), 30, 11, cfg, 1), cfg);
  CHECK(Digest::file_hex(p1) == Digest::file_hex(p2));
  write_dataset(p2, generate_domain(arc_spec(0.05), 30, 12, cfg, 1), cfg);
  CHECK(Digest::file_hex(p1) != Digest::file_hex(p2));
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}
