#pragma once

#include <string>

#include "bridgerank/dataset.hpp"
#include "bridgerank/mf.hpp"

namespace bridgerank {

// Parameters keyed by external ids, as stored on disk.
struct StoredModel {
    std::vector<std::string> rater_ids;
    std::vector<std::string> note_ids;
    ModelParams params;
    TrainConfig config;
};

// Writes raters.tsv (rater_id, beta_r, theta_r), notes.tsv (note_id,
// beta_n, theta_n) and model.json (beta0 plus config echo) into dir.
void write_model(const std::string& dir, const RatingsDataset& dataset, const ModelParams& params,
                 const TrainConfig& config);
StoredModel read_model(const std::string& dir);

std::string config_to_json(const TrainConfig& config);
// Fields missing from the JSON keep the values already in `base`.
TrainConfig config_from_json(const std::string& json_text, TrainConfig base = {});

}  // namespace bridgerank
