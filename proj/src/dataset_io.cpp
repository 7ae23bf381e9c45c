#include "decode/dataset_io.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <stdexcept>

namespace decode::scenes {

using json = nlohmann::json;

namespace {

void write_block(std::ostream& os, const Eigen::MatrixX2d& m) {
  // Row-major (t, x/y) order; Eigen stores column-major, so emit explicitly.
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < 2; ++j) {
      const double v = m(i, j);
      os.write(reinterpret_cast<const char*>(&v), sizeof(double));
    }
}

void read_block(std::istream& is, Eigen::MatrixX2d& m, std::size_t record,
                const std::string& path) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < 2; ++j) {
      double v = 0.0;
      is.read(reinterpret_cast<char*>(&v), sizeof(double));
      if (!is)
        throw std::runtime_error("read_dataset: " + path + ": truncated payload in record " +
                                 std::to_string(record) + " near byte offset " +
                                 std::to_string(static_cast<long long>(is.tellg())));
      m(i, j) = v;
    }
}

}  // namespace

void write_dataset(const std::string& path, const std::vector<Scene>& scenes,
                   const GeneratorConfig& cfg, int train_count) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("write_dataset: cannot open " + path + " for writing");

  json header{{"magic", kDatasetMagic},
              {"version", kDatasetFormatVersion},
              {"t_past", cfg.t_past},
              {"t_future", cfg.t_future},
              {"n_neighbors", cfg.n_neighbors},
              {"dt", cfg.dt},
              {"scene_count", scenes.size()},
              {"train_count", train_count}};
  os << header.dump() << "\n";

  for (std::size_t r = 0; r < scenes.size(); ++r) {
    const Scene& s = scenes[r];
    if (s.past.rows() != cfg.t_past || s.future.rows() != cfg.t_future ||
        static_cast<int>(s.neighbors.size()) != cfg.n_neighbors)
      throw std::runtime_error("write_dataset: scene " + std::to_string(r) +
                               " does not match the dataset dimensions");
    json meta{{"id", s.scene_id}, {"tag", s.domain_tag}, {"mask", s.neighbor_mask}};
    os << meta.dump() << "\n";
    write_block(os, s.past);
    write_block(os, s.future);
    for (const auto& nb : s.neighbors) write_block(os, nb);
  }
  if (!os) throw std::runtime_error("write_dataset: write failure on " + path);
}

DatasetFile read_dataset(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_dataset: cannot open " + path);

  std::string header_line;
  if (!std::getline(is, header_line))
    throw std::runtime_error("read_dataset: " + path + ": missing header line");

  json header;
  try {
    header = json::parse(header_line);
  } catch (const json::exception& e) {
    throw std::runtime_error("read_dataset: " + path + ": bad header JSON: " + e.what());
  }
  if (header.value("magic", "") != kDatasetMagic)
    throw std::runtime_error("read_dataset: " + path + ": bad magic, not a dataset file");
  if (header.value("version", -1) != kDatasetFormatVersion)
    throw std::runtime_error("read_dataset: " + path + ": unsupported format version " +
                             std::to_string(header.value("version", -1)) + ", expected " +
                             std::to_string(kDatasetFormatVersion));

  DatasetFile out;
  out.config.t_past = header.at("t_past").get<int>();
  out.config.t_future = header.at("t_future").get<int>();
  out.config.n_neighbors = header.at("n_neighbors").get<int>();
  out.config.dt = header.at("dt").get<double>();
  out.train_count = header.value("train_count", 0);
  const std::size_t count = header.at("scene_count").get<std::size_t>();

  out.scenes.reserve(count);
  for (std::size_t r = 0; r < count; ++r) {
    std::string meta_line;
    if (!std::getline(is, meta_line))
      throw std::runtime_error("read_dataset: " + path + ": truncated file, missing record " +
                               std::to_string(r) + " of " + std::to_string(count));
    json meta;
    try {
      meta = json::parse(meta_line);
    } catch (const json::exception& e) {
      throw std::runtime_error("read_dataset: " + path + ": bad metadata JSON in record " +
                               std::to_string(r) + ": " + e.what());
    }
    Scene s;
    s.scene_id = meta.at("id").get<std::int64_t>();
    s.domain_tag = meta.at("tag").get<int>();
    s.neighbor_mask = meta.at("mask").get<std::vector<std::uint8_t>>();
    if (static_cast<int>(s.neighbor_mask.size()) != out.config.n_neighbors)
      throw std::runtime_error("read_dataset: " + path + ": record " + std::to_string(r) +
                               ": mask length " + std::to_string(s.neighbor_mask.size()) +
                               " does not match n_neighbors " +
                               std::to_string(out.config.n_neighbors));
    s.past.resize(out.config.t_past, 2);
    s.future.resize(out.config.t_future, 2);
    read_block(is, s.past, r, path);
    read_block(is, s.future, r, path);
    s.neighbors.assign(out.config.n_neighbors, Eigen::MatrixX2d::Zero(out.config.t_past, 2));
    for (auto& nb : s.neighbors) read_block(is, nb, r, path);
    out.scenes.push_back(std::move(s));
  }
  return out;
}

}  // namespace decode::scenes
