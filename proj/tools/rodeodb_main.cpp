// Command line front end: generate synthetic instances, corrupt distance
// blocks, run the recovery pipeline, sweep phase grids, evaluate estimates.
#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "rodeodb/geometry.hpp"
#include "rodeodb/io.hpp"
#include "rodeodb/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rodeodb;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSolver = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

void emit_error(const std::string& kind, const std::string& what) {
    json j;
    j["error"] = {{"kind", kind}, {"message", what}};
    std::cout << j.dump() << '\n';
}

struct GenerateArgs {
    std::string kind;
    int T = 500;
    int d = 2;
    double box = 100.0;
    std::uint64_t seed = 0;
    int m = 0;
    int central_row = 0;
    std::string out_dir;
};

int cmd_generate(const GenerateArgs& a) {
    PointConfiguration pts = a.kind == "spiral" ? gen_spiral(a.T, a.seed)
                                                : gen_sensors(a.T, a.d, a.box, a.seed);
    ensure_dir(a.out_dir);
    write_csv_matrix(a.out_dir + "/points.csv", pts.coords);
    if (a.m > 0) {
        Rng rng(derive_seed(a.seed, 0xA5C0, 0));
        const AnchorSplit split = AnchorSplit::sample(pts.n_points(), a.m, rng);
        if (a.central_row < 0 || a.central_row >= a.m)
            throw InvalidArgument("generate: central row outside the anchor set");
        SplitFile sf{split, a.central_row, a.seed};
        write_split_json(a.out_dir + "/split.json", sf);
        auto [E, F] = edm_blocks(pts, split);
        write_csv_matrix(a.out_dir + "/E.csv", E);
        write_csv_matrix(a.out_dir + "/F.csv", F);
    }
    std::cerr << "generate: wrote " << pts.n_points() << " points (d=" << pts.dim() << ") to "
              << a.out_dir << '\n';
    return kExitOk;
}

struct CorruptArgs {
    std::string f_path;
    double alpha = 0.1;
    double magnitude = 3.0;
    std::uint64_t seed = 0;
    int protect_row = 0;
    std::string out_dir;
};

int cmd_corrupt(const CorruptArgs& a) {
    const Matrix F = read_csv_matrix(a.f_path);
    OutlierSpec spec;
    spec.alpha = a.alpha;
    spec.magnitude_scale = a.magnitude;
    spec.seed = a.seed;
    spec.protect_row = a.protect_row;
    auto [F_corr, S_star] = inject_outliers(F, spec);
    ensure_dir(a.out_dir);
    write_csv_matrix(a.out_dir + "/F_corrupted.csv", F_corr);
    write_csv_matrix(a.out_dir + "/S_star.csv", S_star);
    long nnz = 0;
    for (int i = 0; i < S_star.rows(); ++i)
        for (int j = 0; j < S_star.cols(); ++j)
            if (S_star(i, j) != 0.0) ++nnz;
    std::cerr << "corrupt: perturbed " << nnz << " of " << (F.rows() - 1) * F.cols()
              << " corruptible entries\n";
    return kExitOk;
}

struct SolveArgs {
    std::string e_path, f_path, config_path, split_path, truth_path, out_dir;
    int d = 0;
    int central_row = -1;
    bool dump_gram = false;
};

int cmd_solve(const SolveArgs& a) {
    RunConfig cfg;
    if (!a.config_path.empty()) cfg = RunConfig::from_json_file(a.config_path);
    if (a.d > 0) cfg.solver.rank_d = a.d;

    SplitFile sf;
    bool have_split = false;
    if (!a.split_path.empty()) {
        sf = read_split_json(a.split_path);
        have_split = true;
        cfg.solver.central_row_k = sf.central_row;
    }
    if (a.central_row >= 0) cfg.solver.central_row_k = a.central_row;

    const Matrix E = read_csv_matrix(a.e_path);
    const Matrix F = read_csv_matrix(a.f_path);

    const auto t0 = std::chrono::steady_clock::now();
    const ReconstructionResult res = reconstruct(E, F, cfg.solver);
    const auto t1 = std::chrono::steady_clock::now();

    ensure_dir(a.out_dir);
    write_csv_matrix(a.out_dir + "/points_hat.csv", res.points_hat.coords);
    if (a.dump_gram) {
        write_csv_matrix(a.out_dir + "/B_hat.csv", res.gram_hat.B);
        write_csv_matrix(a.out_dir + "/S_hat.csv", res.dbap.S_hat);
    }

    json rep;
    rep["v"] = 1;
    rep["d"] = cfg.solver.rank_d;
    rep["m"] = static_cast<int>(E.rows());
    rep["n"] = static_cast<int>(F.cols());
    rep["central_row"] = cfg.solver.central_row_k;
    rep["iterations"] = res.dbap.iterations;
    rep["converged"] = res.dbap.converged;
    rep["stop_reason"] = to_string(res.dbap.stop_reason);
    rep["final_rel_err"] = res.dbap.final_rel_err;
    rep["clipped_negatives"] = res.clipped_negatives;
    std::vector<double> eig(res.eigenvalues_topd.data(),
                            res.eigenvalues_topd.data() + res.eigenvalues_topd.size());
    rep["eigenvalues_topd"] = eig;
    rep["wall_time_ms"] = std::chrono::duration<double, std::milli>(t1 - t0).count();

    if (!a.truth_path.empty()) {
        const Matrix truth_raw = read_csv_matrix(a.truth_path);
        PointConfiguration truth(truth_raw);
        if (have_split) truth = permute_to_split(truth, sf.split);
        const double r = rmse(res.points_hat, truth);
        rep["rmse"] = r;
        rep["recovered"] = r <= 1.0;
    }

    std::ofstream out(a.out_dir + "/report.json");
    if (!out) throw IoError("solve: cannot write report.json in " + a.out_dir);
    out << rep.dump(2) << '\n';
    std::cerr << "solve: " << res.dbap.iterations << " iterations, stop_reason="
              << to_string(res.dbap.stop_reason) << ", final_rel_err=" << res.dbap.final_rel_err
              << '\n';
    return res.dbap.converged ? kExitOk : kExitSolver;
}

struct PhaseArgs {
    std::string config_path;
    std::string out_dir_override;
};

int cmd_phase(const PhaseArgs& a) {
    RunConfig cfg = RunConfig::from_json_file(a.config_path);
    if (!a.out_dir_override.empty()) cfg.out_dir = a.out_dir_override;
    if (cfg.out_dir.empty()) throw InvalidArgument("phase: out_dir is required");
    if (const char* env = std::getenv("RODEODB_WORKERS")) {
        char* end = nullptr;
        const long w = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || w < 1)
            throw InvalidArgument("phase: RODEODB_WORKERS must be a positive integer");
        cfg.grid.workers = static_cast<int>(w);
    }
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<TrialRecord> records = run_phase_grid(cfg.grid, cfg.solver);
    const auto t1 = std::chrono::steady_clock::now();
    ensure_dir(cfg.out_dir);
    write_results_jsonl(cfg.out_dir + "/results.jsonl", records);
    const std::size_t n_cells = cfg.grid.m_values.size() * cfg.grid.alpha_values.size();
    const std::vector<double> rates = recovery_rates(records, n_cells, cfg.grid.trials);
    write_phase_svg(cfg.out_dir + "/phase_plot.svg", cfg.grid.m_values, cfg.grid.alpha_values,
                    rates);
    std::cerr << "phase: " << records.size() << " trials in "
              << std::chrono::duration<double>(t1 - t0).count() << " s\n";
    std::size_t cell = 0;
    for (int m : cfg.grid.m_values)
        for (double alpha : cfg.grid.alpha_values) {
            std::cerr << "  m=" << m << " alpha=" << alpha << " recovery=" << rates[cell] << '\n';
            ++cell;
        }
    return kExitOk;
}

struct EvalArgs {
    std::string estimate_path, truth_path, split_path;
};

int cmd_eval(const EvalArgs& a) {
    const PointConfiguration estimate{read_csv_matrix(a.estimate_path)};
    PointConfiguration truth{read_csv_matrix(a.truth_path)};
    if (!a.split_path.empty()) {
        const SplitFile sf = read_split_json(a.split_path);
        truth = permute_to_split(truth, sf.split);
    }
    const double r = rmse(estimate, truth);
    json j;
    j["rmse"] = r;
    j["recovered"] = r <= 1.0;
    std::cout << j.dump() << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"robust Euclidean distance geometry via dual-basis alternating projections"};
    app.require_subcommand(1);

    GenerateArgs ga;
    CLI::App* gen = app.add_subcommand("generate", "generate a synthetic point cloud");
    gen->require_subcommand(1);
    CLI::App* gen_sensors_cmd = gen->add_subcommand("sensors", "uniform points in a box");
    CLI::App* gen_spiral_cmd = gen->add_subcommand("spiral", "noisy planar spiral in 10-d");
    for (CLI::App* g : {gen_sensors_cmd, gen_spiral_cmd}) {
        g->add_option("--t", ga.T, "number of points");
        g->add_option("--seed", ga.seed, "rng seed");
        g->add_option("--m", ga.m, "also sample m anchors and write split.json/E.csv/F.csv");
        g->add_option("--central-row", ga.central_row, "central anchor row for split.json");
        g->add_option("--out-dir", ga.out_dir, "output directory")->required();
    }
    gen_sensors_cmd->add_option("--d", ga.d, "dimension");
    gen_sensors_cmd->add_option("--box", ga.box, "half width of the sampling box");

    CorruptArgs ca;
    CLI::App* corrupt = app.add_subcommand("corrupt", "inject sparse outliers into an F block");
    corrupt->add_option("--f", ca.f_path, "clean F matrix csv")->required();
    corrupt->add_option("--alpha", ca.alpha, "corruption fraction");
    corrupt->add_option("--magnitude", ca.magnitude, "outlier range scale");
    corrupt->add_option("--seed", ca.seed, "rng seed");
    corrupt->add_option("--protect-row", ca.protect_row, "row kept exact");
    corrupt->add_option("--out-dir", ca.out_dir, "output directory")->required();

    SolveArgs sa;
    CLI::App* solve = app.add_subcommand("solve", "recover points from E and corrupted F");
    solve->add_option("--e", sa.e_path, "anchor distance matrix csv")->required();
    solve->add_option("--f", sa.f_path, "anchor/target distance matrix csv")->required();
    solve->add_option("--d", sa.d, "embedding dimension")->check(CLI::PositiveNumber);
    solve->add_option("--config", sa.config_path, "run config json");
    solve->add_option("--central-row", sa.central_row, "protected anchor row")
        ->check(CLI::NonNegativeNumber);
    solve->add_option("--split", sa.split_path, "split.json for truth permutation");
    solve->add_option("--truth", sa.truth_path, "ground truth points csv");
    solve->add_flag("--dump-gram", sa.dump_gram, "also write B_hat.csv and S_hat.csv");
    solve->add_option("--out-dir", sa.out_dir, "output directory")->required();

    PhaseArgs pa;
    CLI::App* phase = app.add_subcommand("phase", "run a (m, alpha) phase grid");
    phase->add_option("--config", pa.config_path, "run config json")->required();
    phase->add_option("--out-dir", pa.out_dir_override, "override out_dir from the config");

    EvalArgs ea;
    CLI::App* eval_cmd = app.add_subcommand("eval", "rmse of an estimate against ground truth");
    eval_cmd->add_option("--estimate", ea.estimate_path, "estimated points csv")->required();
    eval_cmd->add_option("--truth", ea.truth_path, "ground truth points csv")->required();
    eval_cmd->add_option("--split", ea.split_path, "split.json for truth permutation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (gen->parsed()) {
            ga.kind = gen_spiral_cmd->parsed() ? "spiral" : "sensors";
            return cmd_generate(ga);
        }
        if (corrupt->parsed()) return cmd_corrupt(ca);
        if (solve->parsed()) return cmd_solve(sa);
        if (phase->parsed()) return cmd_phase(pa);
        if (eval_cmd->parsed()) return cmd_eval(ea);
    } catch (const SolverDiverged& e) {
        emit_error("solver", e.what());
        return kExitSolver;
    } catch (const ParseError& e) {
        emit_error("parse", e.what());
        return kExitIo;
    } catch (const IoError& e) {
        emit_error("io", e.what());
        return kExitIo;
    } catch (const InvalidArgument& e) {
        emit_error("usage", e.what());
        return kExitUsage;
    } catch (const DegenerateAnchors& e) {
        emit_error("solver", e.what());
        return kExitSolver;
    } catch (const std::exception& e) {
        emit_error("internal", e.what());
        return kExitSolver;
    }
    return kExitUsage;
}
