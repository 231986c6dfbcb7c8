#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "rodeodb/dbap.hpp"
#include "rodeodb/experiments.hpp"
#include "rodeodb/types.hpp"

namespace rodeodb {

// headerless CSV, 17 significant digits, newline row terminator; values
// survive a write/read round trip bit for bit
Matrix read_csv_matrix(const std::string& path);
void write_csv_matrix(const std::string& path, const Matrix& M);

struct SplitFile {
    AnchorSplit split;
    int central_row = 0;
    std::uint64_t seed = 0;
};

void write_split_json(const std::string& path, const SplitFile& sf);
SplitFile read_split_json(const std::string& path);

// flat key-value run configuration; unknown keys are rejected
struct RunConfig {
    SolverConfig solver;
    PhaseGridParams grid;
    std::string out_dir;

    static RunConfig from_json(const nlohmann::json& j);
    static RunConfig from_json_file(const std::string& path);
    nlohmann::json to_json() const;
};

nlohmann::json trial_record_to_json(const TrialRecord& rec);
void write_results_jsonl(const std::string& path, const std::vector<TrialRecord>& records);
std::vector<nlohmann::json> read_jsonl(const std::string& path);

// recovery-rate heatmap over the (m, alpha) grid
void write_phase_svg(const std::string& path, const std::vector<int>& m_values,
                     const std::vector<double>& alpha_values, const std::vector<double>& rates);

}  // namespace rodeodb
