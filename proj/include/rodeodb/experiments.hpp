#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "rodeodb/dbap.hpp"
#include "rodeodb/diagnostics.hpp"
#include "rodeodb/types.hpp"

namespace rodeodb {

struct OutlierSpec {
    double alpha = 0.0;            // fraction of corruptible entries to perturb
    double magnitude_scale = 3.0;  // range is +/- scale * mean|F_clean|
    std::uint64_t seed = 0;
    int protect_row = 0;           // row left untouched (central anchor)
};

struct TrialRecord {
    std::string experiment;
    int T = 0;
    int d = 0;
    int m = 0;
    double alpha = 0.0;
    std::uint64_t seed = 0;
    int cell_index = 0;
    int trial_index = 0;
    double rmse_value = 0.0;
    bool recovered = false;
    int iterations = 0;
    bool converged = false;
    StopReason stop_reason = StopReason::max_iter;
    double wall_time_ms = 0.0;
    std::optional<InstanceDiagnostics> diagnostics;
    std::optional<std::string> error;
};

struct PhaseGridParams {
    std::string experiment = "sensors";
    int T = 500;
    double box_half_width = 100.0;
    double magnitude_scale = 3.0;
    std::vector<int> m_values;
    std::vector<double> alpha_values;
    int trials = 50;
    std::uint64_t master_seed = 0;
    int workers = 0;  // 0 resolves to the OpenMP default
    bool record_timings = false;
    bool compute_diagnostics = false;
    // when set, every trial reuses this cloud and only the anchor split and
    // corruption are redrawn (protein-style protocol)
    std::optional<PointConfiguration> fixed_points;
};

// T points uniform in [-w, w]^d, then centered
PointConfiguration gen_sensors(int T, int d, double box_half_width, std::uint64_t seed);

// planar spiral r = 2 theta, theta in [2 pi, 5 pi], with unit Gaussian
// jitter on the two spiral coordinates and 8 extra Gaussian coordinates;
// centered, d = 10
PointConfiguration gen_spiral(int T, std::uint64_t seed);

// draws floor(alpha (m-1) n) positions uniformly without replacement
// outside the protected row and adds uniform values in
// [-scale mean|F|, scale mean|F|); returns (F_corrupted, S_star) with
// F_corrupted = F_clean + S_star
std::pair<Matrix, Matrix> inject_outliers(const Matrix& F_clean, const OutlierSpec& spec);

// full factorial sweep over (m, alpha) cells; rows come back in
// deterministic cell-major order regardless of worker count
std::vector<TrialRecord> run_phase_grid(const PhaseGridParams& params, const SolverConfig& base);

// per-cell recovery fraction, cell-major order matching run_phase_grid
std::vector<double> recovery_rates(const std::vector<TrialRecord>& records,
                                   std::size_t n_cells, int trials);

// 3 x N coordinates from ATOM/HETATM records of a PDB file, centered
PointConfiguration load_protein(const std::string& path);

int resolve_workers(int requested);

std::uint64_t trial_seed(std::uint64_t master, int cell_index, int trial_index);

}  // namespace rodeodb
