#include "rodeodb/experiments.hpp"

#include <array>
#include <cctype>
#include <chrono>
#include <fstream>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rodeodb/geometry.hpp"
#include "rodeodb/pipeline.hpp"

namespace rodeodb {

std::uint64_t trial_seed(std::uint64_t master, int cell_index, int trial_index) {
    return derive_seed(master, static_cast<std::uint64_t>(cell_index),
                       static_cast<std::uint64_t>(trial_index));
}

int resolve_workers(int requested) {
#ifdef _OPENMP
    if (requested > 0) return requested;
    return omp_get_max_threads();
#else
    (void)requested;
    return 1;
#endif
}

PointConfiguration gen_sensors(int T, int d, double box_half_width, std::uint64_t seed) {
    if (T < 1 || d < 1) throw InvalidArgument("gen_sensors: T and d must be positive");
    if (!(box_half_width > 0.0)) throw InvalidArgument("gen_sensors: box size must be positive");
    Rng rng(seed);
    Matrix P(d, T);
    for (int j = 0; j < T; ++j)
        for (int i = 0; i < d; ++i) P(i, j) = rng.uniform(-box_half_width, box_half_width);
    const Vector centroid = P.rowwise().mean();
    P.colwise() -= centroid;
    return PointConfiguration(std::move(P));
}

PointConfiguration gen_spiral(int T, std::uint64_t seed) {
    if (T < 2) throw InvalidArgument("gen_spiral: need at least two points");
    constexpr int kAmbient = 10;
    constexpr double kPi = 3.141592653589793238462643383279502884;
    Rng rng(seed);
    Matrix P(kAmbient, T);
    for (int j = 0; j < T; ++j) {
        const double theta = 2.0 * kPi + 3.0 * kPi * static_cast<double>(j) / (T - 1);
        const double r = 2.0 * theta;
        P(0, j) = r * std::cos(theta) + rng.normal();
        P(1, j) = r * std::sin(theta) + rng.normal();
        for (int i = 2; i < kAmbient; ++i) P(i, j) = rng.normal();
    }
    const Vector centroid = P.rowwise().mean();
    P.colwise() -= centroid;
    return PointConfiguration(std::move(P));
}

std::pair<Matrix, Matrix> inject_outliers(const Matrix& F_clean, const OutlierSpec& spec) {
    const int m = static_cast<int>(F_clean.rows());
    const int n = static_cast<int>(F_clean.cols());
    if (m < 1 || n < 1) throw InvalidArgument("inject_outliers: empty F");
    if (spec.alpha < 0.0 || spec.alpha > 1.0)
        throw InvalidArgument("inject_outliers: alpha must be in [0, 1]");
    if (spec.protect_row < 0 || spec.protect_row >= m)
        throw InvalidArgument("inject_outliers: protected row out of range");
    if (!(spec.magnitude_scale > 0.0))
        throw InvalidArgument("inject_outliers: magnitude scale must be positive");

    const long corruptible = static_cast<long>(m - 1) * n;
    const long count = static_cast<long>(spec.alpha * static_cast<double>(corruptible));
    Matrix S = Matrix::Zero(m, n);
    if (count > 0) {
        Rng rng(spec.seed);
        const std::vector<int> picks =
            rng.sample_without_replacement(static_cast<int>(corruptible), static_cast<int>(count));
        const double bound = spec.magnitude_scale * F_clean.cwiseAbs().mean();
        for (int p : picks) {
            int i = p / n;
            const int j = p % n;
            if (i >= spec.protect_row) ++i;  // skip the protected row
            double v = rng.uniform(-bound, bound);
            while (v == 0.0) v = rng.uniform(-bound, bound);
            S(i, j) = v;
        }
    }
    Matrix F_corr = F_clean + S;
    return {std::move(F_corr), std::move(S)};
}

namespace {

InstanceDiagnostics compute_diag(const PointConfiguration& truth_split, int m, int d,
                                 const Matrix& F_clean, const Matrix& S_star) {
    InstanceDiagnostics out;
    const int T = truth_split.n_points();
    const int n = T - m;
    const Matrix D = pairwise_edm(truth_split);
    const CenteringVector cv = CenteringVector::anchor_uniform(T, m);
    const Matrix X = gram_from_edm(D, cv);
    Eigen::BDCSVD<Matrix> svd_d(D);
    Eigen::BDCSVD<Matrix> svd_x(X);
    const int rank_d_edm = std::min(d + 2, T);
    out.kappa_D = svd_d.singularValues()(0) / svd_d.singularValues()(rank_d_edm - 1);
    out.kappa_X = svd_x.singularValues()(0) / svd_x.singularValues()(d - 1);
    const Incoherence inc = incoherence(F_clean, std::min({d + 2, m, n}));
    out.mu1 = inc.mu1;
    out.mu2 = inc.mu2;
    const auto [ar, ac] = alpha_sparsity(S_star);
    out.alpha_row = ar;
    out.alpha_col = ac;
    out.J_norm = centering_norm(T, m);
    return out;
}

TrialRecord run_one_trial(const PhaseGridParams& params, const SolverConfig& base, int cell_index,
                          int trial_index, int m, double alpha) {
    TrialRecord rec;
    rec.experiment = params.experiment;
    rec.T = params.T;
    rec.d = base.rank_d;
    rec.m = m;
    rec.alpha = alpha;
    rec.cell_index = cell_index;
    rec.trial_index = trial_index;
    rec.seed = trial_seed(params.master_seed, cell_index, trial_index);
    try {
        PointConfiguration pts;
        if (params.fixed_points.has_value()) {
            pts = *params.fixed_points;
            rec.T = pts.n_points();
        } else if (params.experiment == "spiral") {
            pts = gen_spiral(params.T, derive_seed(rec.seed, 1, 0));
        } else {
            pts = gen_sensors(params.T, base.rank_d, params.box_half_width,
                              derive_seed(rec.seed, 1, 0));
        }
        Rng rng_split(derive_seed(rec.seed, 2, 0));
        const AnchorSplit split = AnchorSplit::sample(pts.n_points(), m, rng_split);
        auto [E, F_clean] = edm_blocks(pts, split);
        OutlierSpec ospec;
        ospec.alpha = alpha;
        ospec.magnitude_scale = params.magnitude_scale;
        ospec.seed = derive_seed(rec.seed, 3, 0);
        ospec.protect_row = base.central_row_k;
        auto [F_corr, S_star] = inject_outliers(F_clean, ospec);

        SolverConfig cfg = base;
        const auto t0 = std::chrono::steady_clock::now();
        const ReconstructionResult res = reconstruct(E, F_corr, cfg);
        const auto t1 = std::chrono::steady_clock::now();
        if (params.record_timings)
            rec.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

        const PointConfiguration truth_split = permute_to_split(pts, split);
        rec.rmse_value = rmse(res.points_hat, truth_split);
        rec.recovered = rec.rmse_value <= 1.0;
        rec.iterations = res.dbap.iterations;
        rec.converged = res.dbap.converged;
        rec.stop_reason = res.dbap.stop_reason;
        if (params.compute_diagnostics)
            rec.diagnostics = compute_diag(truth_split, m, base.rank_d, F_clean, S_star);
    } catch (const std::exception& e) {
        rec.error = e.what();
        rec.rmse_value = std::numeric_limits<double>::quiet_NaN();
        rec.recovered = false;
    }
    return rec;
}

}  // namespace

std::vector<TrialRecord> run_phase_grid(const PhaseGridParams& params, const SolverConfig& base) {
    base.validate();
    if (params.m_values.empty() || params.alpha_values.empty())
        throw InvalidArgument("run_phase_grid: m_values and alpha_values must be nonempty");
    if (params.trials < 1) throw InvalidArgument("run_phase_grid: trials must be positive");
    for (double a : params.alpha_values)
        if (a < 0.0 || a > 1.0) throw InvalidArgument("run_phase_grid: alpha out of [0, 1]");

    struct Job {
        int cell;
        int trial;
        int m;
        double alpha;
    };
    std::vector<Job> jobs;
    int cell = 0;
    for (int m : params.m_values) {
        for (double a : params.alpha_values) {
            for (int t = 0; t < params.trials; ++t) jobs.push_back({cell, t, m, a});
            ++cell;
        }
    }
    std::vector<TrialRecord> records(jobs.size());
    const int workers = resolve_workers(params.workers);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(workers)
#endif
    for (long idx = 0; idx < static_cast<long>(jobs.size()); ++idx) {
        const Job& jb = jobs[idx];
        records[idx] = run_one_trial(params, base, jb.cell, jb.trial, jb.m, jb.alpha);
    }
    (void)workers;
    return records;
}

std::vector<double> recovery_rates(const std::vector<TrialRecord>& records, std::size_t n_cells,
                                   int trials) {
    std::vector<double> rates(n_cells, 0.0);
    for (const TrialRecord& r : records) {
        if (r.recovered) rates[static_cast<std::size_t>(r.cell_index)] += 1.0;
    }
    for (double& v : rates) v /= trials;
    return rates;
}

PointConfiguration load_protein(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("load_protein: cannot open " + path);
    std::vector<std::array<double, 3>> atoms;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.rfind("ATOM", 0) != 0 && line.rfind("HETATM", 0) != 0) continue;
        // PDB fixed columns (1-indexed): x 31-38, y 39-46, z 47-54
        if (line.size() < 54) throw ParseError("load_protein: truncated atom record", line_no);
        std::array<double, 3> xyz{};
        for (int c = 0; c < 3; ++c) {
            const std::string field = line.substr(30 + 8 * c, 8);
            try {
                std::size_t pos = 0;
                xyz[c] = std::stod(field, &pos);
                while (pos < field.size() && std::isspace(static_cast<unsigned char>(field[pos])))
                    ++pos;
                if (pos != field.size()) throw std::invalid_argument("trailing junk");
            } catch (const std::exception&) {
                throw ParseError("load_protein: bad coordinate field '" + field + "'", line_no);
            }
        }
        atoms.push_back(xyz);
    }
    if (atoms.empty()) throw InvalidArgument("load_protein: no atom records in " + path);
    Matrix P(3, static_cast<int>(atoms.size()));
    for (int j = 0; j < static_cast<int>(atoms.size()); ++j)
        for (int i = 0; i < 3; ++i) P(i, j) = atoms[j][i];
    const Vector centroid = P.rowwise().mean();
    P.colwise() -= centroid;
    return PointConfiguration(std::move(P));
}

}  // namespace rodeodb
