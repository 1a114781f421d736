#ifndef DECONV_SCENE_IO_HPP
#define DECONV_SCENE_IO_HPP

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "deconv/model.hpp"

namespace deconv {

/// %.12g rendering used by every CSV column.
std::string format_number(double value);

std::string noise_model_name(NoiseModel model);
NoiseModel noise_model_from_name(const std::string& name);

// Scene JSON layout:
//   {"sources": [{"position": p, "amplitude": a}, ...],
//    "grid": {"R": r, "h": h},
//    "noise": {"sigma": s, "model": "uniform-experiment", "seed": 0}}
nlohmann::json scene_to_json(const Scene& scene);
Scene scene_from_json(const nlohmann::json& j);
void save_scene(const Scene& scene, const std::string& path);
Scene load_scene(const std::string& path);

// CSV layouts: measures as "position,amplitude" rows, images as "x,value"
// rows, one header line each.
void write_measure_csv(const DiscreteMeasure& measure, const std::string& path);
DiscreteMeasure read_measure_csv(const std::string& path);
void write_image_csv(const SamplingGrid& grid, const Eigen::VectorXd& values,
                     const std::string& path);
std::pair<std::vector<double>, Eigen::VectorXd> read_image_csv(const std::string& path);

/// Recovers (R, h) from the sample abscissae of an image CSV.
SamplingGrid grid_from_points(const std::vector<double>& xs);

} // namespace deconv

#endif
