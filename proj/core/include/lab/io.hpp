#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "lab/measures.hpp"
#include "lab/oscillatory.hpp"

namespace lab {

// CSV format: header "# atomic-measure v1, alpha=<a>, provenance=<p>", then
// one "x,y,re_w,im_w" row per atom, >= 15 significant digits.
void write_measure_csv(const std::filesystem::path& path, const AtomicMeasure& m);
AtomicMeasure read_measure_csv(const std::filesystem::path& path);

// "xi1,xi2,re,im" rows; points and values must be aligned.
void write_batch_csv(const std::filesystem::path& path, const std::vector<Frequency>& points,
                     const std::vector<Complex>& values);

nlohmann::json to_json(const CantorSpec& spec);
CantorSpec cantor_spec_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SharpExampleSpec& spec);
SharpExampleSpec sharp_spec_from_json(const nlohmann::json& j);

// Dispatch on "type": "cantor" or "sharp_example"; used by the measure
// synthesis entry point.
AtomicMeasure build_measure_from_json(const nlohmann::json& j, std::size_t atom_budget);

std::string format_full(double v);   // shortest round-trip decimal

}  // namespace lab
