#include "deconv/scene_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace deconv {

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

std::string noise_model_name(NoiseModel model) {
  switch (model) {
    case NoiseModel::kUniformExperiment: return "uniform-experiment";
    case NoiseModel::kScaledGaussianClipped: return "scaled-gaussian-clipped";
  }
  throw std::logic_error("noise_model_name: unknown model");
}

NoiseModel noise_model_from_name(const std::string& name) {
  if (name == "uniform-experiment") return NoiseModel::kUniformExperiment;
  if (name == "scaled-gaussian-clipped") return NoiseModel::kScaledGaussianClipped;
  throw std::invalid_argument("unknown noise model: " + name);
}

nlohmann::json scene_to_json(const Scene& scene) {
  nlohmann::json sources = nlohmann::json::array();
  for (int j = 0; j < scene.measure.size(); ++j)
    sources.push_back({{"position", scene.measure.positions()[j]},
                       {"amplitude", scene.measure.amplitudes()[j]}});
  return {{"sources", sources},
          {"grid", {{"R", scene.grid.radius()}, {"h", scene.grid.spacing()}}},
          {"noise",
           {{"sigma", scene.noise.sigma},
            {"model", noise_model_name(scene.noise.model)},
            {"seed", scene.noise.seed}}}};
}

Scene scene_from_json(const nlohmann::json& j) {
  std::vector<double> positions, amplitudes;
  for (const auto& s : j.at("sources")) {
    positions.push_back(s.at("position").get<double>());
    amplitudes.push_back(s.at("amplitude").get<double>());
  }
  SamplingGrid grid(j.at("grid").at("R").get<double>(),
                    j.at("grid").at("h").get<double>());
  NoiseSpec noise;
  if (j.contains("noise")) {
    const auto& n = j.at("noise");
    noise.sigma = n.value("sigma", 0.0);
    noise.model = noise_model_from_name(n.value("model", "uniform-experiment"));
    noise.seed = n.value("seed", std::uint64_t{0});
  }
  return Scene{DiscreteMeasure(positions, amplitudes), grid, noise};
}

void save_scene(const Scene& scene, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << scene_to_json(scene).dump(2) << "\n";
}

Scene load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  nlohmann::json j;
  in >> j;
  return scene_from_json(j);
}

void write_measure_csv(const DiscreteMeasure& measure, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "position,amplitude\n";
  for (int j = 0; j < measure.size(); ++j)
    out << format_number(measure.positions()[j]) << ","
        << format_number(measure.amplitudes()[j]) << "\n";
}

namespace {

std::vector<std::pair<double, double>> read_two_column_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::vector<std::pair<double, double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first) {  // header
      first = false;
      continue;
    }
    std::istringstream ss(line);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ','))
      throw std::runtime_error("malformed CSV row in " + path + ": " + line);
    rows.emplace_back(std::stod(a), std::stod(b));
  }
  return rows;
}

} // namespace

DiscreteMeasure read_measure_csv(const std::string& path) {
  std::vector<double> positions, amplitudes;
  for (const auto& [p, a] : read_two_column_csv(path)) {
    positions.push_back(p);
    amplitudes.push_back(a);
  }
  return DiscreteMeasure(positions, amplitudes);
}

void write_image_csv(const SamplingGrid& grid, const Eigen::VectorXd& values,
                     const std::string& path) {
  if (values.size() != grid.sample_count())
    throw std::invalid_argument("write_image_csv: image/grid size mismatch");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "x,value\n";
  for (int t = 0; t < grid.sample_count(); ++t)
    out << format_number(grid.point(t)) << "," << format_number(values[t]) << "\n";
}

std::pair<std::vector<double>, Eigen::VectorXd> read_image_csv(const std::string& path) {
  const auto rows = read_two_column_csv(path);
  std::vector<double> xs(rows.size());
  Eigen::VectorXd values(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    xs[i] = rows[i].first;
    values[static_cast<Eigen::Index>(i)] = rows[i].second;
  }
  return {std::move(xs), std::move(values)};
}

SamplingGrid grid_from_points(const std::vector<double>& xs) {
  if (xs.size() < 2) throw std::invalid_argument("grid_from_points: need two samples");
  const double h = xs[1] - xs[0];
  const double r = -xs.front();
  SamplingGrid grid(r, h);
  if (grid.sample_count() != static_cast<int>(xs.size()))
    throw std::invalid_argument("grid_from_points: points are not a uniform grid");
  return grid;
}

} // namespace deconv
