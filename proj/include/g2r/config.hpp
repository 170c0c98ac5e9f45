#pragma once

// Flat key-value config files with [scenario] and [train] sections. Unknown
// sections or keys are hard errors; a silently ignored typo would corrupt an
// experiment.

#include <filesystem>
#include <string>

#include "g2r/scenario.hpp"
#include "g2r/train.hpp"

namespace g2r::cli {

struct FileConfig {
  gen::ScenarioConfig scenario;
  train::TrainConfig train;
};

FileConfig parse_config_text(const std::string& text);
FileConfig load_config(const std::filesystem::path& path);
std::string config_to_text(const FileConfig& cfg);

}  // namespace g2r::cli
