#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "hwr/anova.hpp"
#include "hwr/model.hpp"
#include "hwr/sample_set.hpp"

namespace hwr {

struct ModelMeta {
  std::uint64_t seed = 0;
  std::string stage = "fit";
};

struct LoadedModel {
  WaveletModel model;
  ModelMeta meta;
};

nlohmann::json model_to_json(const WaveletModel& model, const ModelMeta& meta);
LoadedModel model_from_json(const nlohmann::json& j);

nlohmann::json anova_report_to_json(const AnovaReport& report);

/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

void save_model(const std::filesystem::path& path, const WaveletModel& model, const ModelMeta& meta);
LoadedModel load_model(const std::filesystem::path& path);

struct CsvSamples {
  SampleSet samples;
  std::size_t wrapped = 0;  // coordinates moved into [-1/2, 1/2)
};

/// Header x1..xd[,y]; d is inferred from the header.
CsvSamples parse_samples_csv(std::string_view text, bool require_values);
CsvSamples read_samples_csv(const std::filesystem::path& path, bool require_values);
std::string samples_to_csv(const SampleSet& X);

}  // namespace hwr
