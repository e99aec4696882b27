#pragma once

#include "mmsim/data/synthetic.hpp"
#include "mmsim/env/config.hpp"
#include "mmsim/teacher/qtable.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <initializer_list>
#include <string_view>

namespace mmsim {

using Json = nlohmann::ordered_json;

/// Throws InvalidConfig when `j` is not an object or has a key outside `allowed`.
void require_keys(const Json& j, std::initializer_list<std::string_view> allowed, std::string_view context);

// Reading merges present keys over the defaults already held by the target.
void to_json(Json& j, const LatencyModel& m);
void from_json(const Json& j, LatencyModel& m);
void to_json(Json& j, const ActionGrids& g);
void from_json(const Json& j, ActionGrids& g);
void to_json(Json& j, const EpisodeConfig& c);
void from_json(const Json& j, EpisodeConfig& c);
void to_json(Json& j, const DriftSegment& d);
void from_json(const Json& j, DriftSegment& d);
void to_json(Json& j, const SyntheticConfig& c);
void from_json(const Json& j, SyntheticConfig& c);
void to_json(Json& j, const TeacherConfig& c);
void from_json(const Json& j, TeacherConfig& c);

/// Parses a JSON file; throws IoError or ParseError.
Json load_json_file(const std::filesystem::path& path);
void write_json_file(const Json& j, const std::filesystem::path& path);

}  // namespace mmsim
