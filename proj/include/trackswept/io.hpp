#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "trackswept/detect.hpp"
#include "trackswept/geometry.hpp"

namespace trackswept {

// Points CSV: header `frame,x,y`, one row per point; row order defines ids.
PointSet read_points_csv(const std::filesystem::path& path);
void write_points_csv(const std::filesystem::path& path, const PointSet& ps);

// Tracks JSON: { "tracks": [ { point_ids, line_xy, line_tx, residual_xy,
// residual_tx, axis_swapped } ], "params": { ... } }.
nlohmann::json tracks_to_json(const TrackSet& ts, const nlohmann::json& extra_params = {});
TrackSet tracks_from_json(const nlohmann::json& j, std::size_t n_points);
void write_tracks_json(const std::filesystem::path& path, const TrackSet& ts,
                       const nlohmann::json& extra_params = {});
TrackSet read_tracks_json(const std::filesystem::path& path, std::size_t n_points);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace trackswept
