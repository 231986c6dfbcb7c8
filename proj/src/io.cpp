#include "rodeodb/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace rodeodb {

using nlohmann::json;

Matrix read_csv_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("read_csv_matrix: cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && in.eof()) break;
        std::vector<double> row;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            const std::string cell = line.substr(
                start, comma == std::string::npos ? std::string::npos : comma - start);
            const char* begin = cell.c_str();
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin || *end != '\0')
                throw ParseError("read_csv_matrix: bad numeric cell '" + cell + "'", line_no);
            row.push_back(v);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw ParseError("read_csv_matrix: ragged row", line_no);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("read_csv_matrix: empty file " + path, line_no);
    Matrix M(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
    for (int i = 0; i < M.rows(); ++i)
        for (int j = 0; j < M.cols(); ++j) M(i, j) = rows[i][j];
    return M;
}

void write_csv_matrix(const std::string& path, const Matrix& M) {
    std::ofstream out(path);
    if (!out) throw IoError("write_csv_matrix: cannot open " + path + " for writing");
    char buf[64];
    for (int i = 0; i < M.rows(); ++i) {
        std::string line;
        for (int j = 0; j < M.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", M(i, j));
            if (j) line += ',';
            line += buf;
        }
        line += '\n';
        out << line;
    }
    if (!out) throw IoError("write_csv_matrix: write failed for " + path);
}

void write_split_json(const std::string& path, const SplitFile& sf) {
    json j;
    j["anchors"] = sf.split.anchors;
    j["targets"] = sf.split.targets;
    j["central_row"] = sf.central_row;
    j["seed"] = sf.seed;
    std::ofstream out(path);
    if (!out) throw IoError("write_split_json: cannot open " + path + " for writing");
    out << j.dump(2) << '\n';
}

SplitFile read_split_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("read_split_json: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw IoError("read_split_json: " + std::string(e.what()));
    }
    SplitFile sf;
    try {
        sf.split.anchors = j.at("anchors").get<std::vector<int>>();
        sf.split.targets = j.at("targets").get<std::vector<int>>();
        sf.central_row = j.value("central_row", 0);
        sf.seed = j.value("seed", std::uint64_t{0});
    } catch (const json::exception& e) {
        throw IoError("read_split_json: malformed split file: " + std::string(e.what()));
    }
    sf.split.validate(sf.split.total());
    if (sf.central_row < 0 || sf.central_row >= sf.split.m())
        throw InvalidArgument("read_split_json: central row outside the anchor set");
    return sf;
}

namespace {

template <typename T>
T get_checked(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw InvalidArgument(std::string("RunConfig: bad value for key '") + key + "'");
    }
}

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
    static const std::vector<std::string> known = {
        "d",           "xi0_scale",      "gamma",       "conv_tol",
        "mask_tol",    "patience",       "max_iter",    "central_row",
        "experiment",  "t",              "box_half_width", "magnitude_scale",
        "m_values",    "alpha_values",   "trials",      "master_seed",
        "workers",     "record_timings", "compute_diagnostics", "out_dir"};
    if (!j.is_object()) throw InvalidArgument("RunConfig: expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw InvalidArgument("RunConfig: unknown key '" + it.key() + "'");
    }
    RunConfig cfg;
    cfg.solver.rank_d = get_checked<int>(j, "d", cfg.solver.rank_d);
    cfg.solver.xi0_scale = get_checked<double>(j, "xi0_scale", cfg.solver.xi0_scale);
    cfg.solver.gamma = get_checked<double>(j, "gamma", cfg.solver.gamma);
    cfg.solver.conv_tol = get_checked<double>(j, "conv_tol", cfg.solver.conv_tol);
    cfg.solver.mask_tol = get_checked<double>(j, "mask_tol", cfg.solver.mask_tol);
    cfg.solver.patience = get_checked<int>(j, "patience", cfg.solver.patience);
    cfg.solver.max_iter = get_checked<int>(j, "max_iter", cfg.solver.max_iter);
    cfg.solver.central_row_k = get_checked<int>(j, "central_row", cfg.solver.central_row_k);
    cfg.grid.experiment = get_checked<std::string>(j, "experiment", cfg.grid.experiment);
    cfg.grid.T = get_checked<int>(j, "t", cfg.grid.T);
    cfg.grid.box_half_width = get_checked<double>(j, "box_half_width", cfg.grid.box_half_width);
    cfg.grid.magnitude_scale =
        get_checked<double>(j, "magnitude_scale", cfg.grid.magnitude_scale);
    cfg.grid.m_values = get_checked<std::vector<int>>(j, "m_values", cfg.grid.m_values);
    cfg.grid.alpha_values =
        get_checked<std::vector<double>>(j, "alpha_values", cfg.grid.alpha_values);
    cfg.grid.trials = get_checked<int>(j, "trials", cfg.grid.trials);
    cfg.grid.master_seed = get_checked<std::uint64_t>(j, "master_seed", cfg.grid.master_seed);
    cfg.grid.workers = get_checked<int>(j, "workers", cfg.grid.workers);
    cfg.grid.record_timings = get_checked<bool>(j, "record_timings", cfg.grid.record_timings);
    cfg.grid.compute_diagnostics =
        get_checked<bool>(j, "compute_diagnostics", cfg.grid.compute_diagnostics);
    cfg.out_dir = get_checked<std::string>(j, "out_dir", cfg.out_dir);
    if (cfg.grid.experiment != "sensors" && cfg.grid.experiment != "spiral")
        throw InvalidArgument("RunConfig: experiment must be 'sensors' or 'spiral'");
    cfg.solver.validate();
    return cfg;
}

RunConfig RunConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("RunConfig: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw IoError("RunConfig: " + std::string(e.what()));
    }
    return from_json(j);
}

json RunConfig::to_json() const {
    json j;
    j["d"] = solver.rank_d;
    j["xi0_scale"] = solver.xi0_scale;
    j["gamma"] = solver.gamma;
    j["conv_tol"] = solver.conv_tol;
    j["mask_tol"] = solver.mask_tol;
    j["patience"] = solver.patience;
    j["max_iter"] = solver.max_iter;
    j["central_row"] = solver.central_row_k;
    j["experiment"] = grid.experiment;
    j["t"] = grid.T;
    j["box_half_width"] = grid.box_half_width;
    j["magnitude_scale"] = grid.magnitude_scale;
    j["m_values"] = grid.m_values;
    j["alpha_values"] = grid.alpha_values;
    j["trials"] = grid.trials;
    j["master_seed"] = grid.master_seed;
    j["workers"] = grid.workers;
    j["record_timings"] = grid.record_timings;
    j["compute_diagnostics"] = grid.compute_diagnostics;
    j["out_dir"] = out_dir;
    return j;
}

json trial_record_to_json(const TrialRecord& rec) {
    json j;
    j["v"] = 1;
    j["experiment"] = rec.experiment;
    j["T"] = rec.T;
    j["d"] = rec.d;
    j["m"] = rec.m;
    j["alpha"] = rec.alpha;
    j["seed"] = rec.seed;
    j["cell"] = rec.cell_index;
    j["trial"] = rec.trial_index;
    if (std::isfinite(rec.rmse_value))
        j["rmse"] = rec.rmse_value;
    else
        j["rmse"] = nullptr;
    j["recovered"] = rec.recovered;
    j["iterations"] = rec.iterations;
    j["converged"] = rec.converged;
    j["stop_reason"] = to_string(rec.stop_reason);
    j["wall_time_ms"] = rec.wall_time_ms;
    if (rec.diagnostics.has_value()) {
        const InstanceDiagnostics& d = *rec.diagnostics;
        j["diagnostics"] = {{"mu1", d.mu1},         {"mu2", d.mu2},
                            {"alpha_row", d.alpha_row}, {"alpha_col", d.alpha_col},
                            {"kappa_D", d.kappa_D}, {"kappa_X", d.kappa_X},
                            {"J_norm", d.J_norm}};
    }
    if (rec.error.has_value()) j["error"] = *rec.error;
    return j;
}

void write_results_jsonl(const std::string& path, const std::vector<TrialRecord>& records) {
    std::ofstream out(path);
    if (!out) throw IoError("write_results_jsonl: cannot open " + path + " for writing");
    for (const TrialRecord& rec : records) out << trial_record_to_json(rec).dump() << '\n';
    if (!out) throw IoError("write_results_jsonl: write failed for " + path);
}

std::vector<json> read_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("read_jsonl: cannot open " + path);
    std::vector<json> out;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            out.push_back(json::parse(line));
        } catch (const json::parse_error& e) {
            throw ParseError("read_jsonl: " + std::string(e.what()), line_no);
        }
    }
    return out;
}

void write_phase_svg(const std::string& path, const std::vector<int>& m_values,
                     const std::vector<double>& alpha_values, const std::vector<double>& rates) {
    const std::size_t nm = m_values.size();
    const std::size_t na = alpha_values.size();
    if (rates.size() != nm * na)
        throw DimensionMismatch("write_phase_svg: rates size must equal grid size");
    const int cell = 56;
    const int left = 70, top = 50, bottom = 46, right = 20;
    const int width = left + cell * static_cast<int>(na) + right;
    const int height = top + cell * static_cast<int>(nm) + bottom;
    char buf[256];
    std::string svg;
    std::snprintf(buf, sizeof(buf),
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
                  "viewBox=\"0 0 %d %d\" font-family=\"sans-serif\">\n",
                  width, height, width, height);
    svg += buf;
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%d\" y=\"24\" font-size=\"15\" fill=\"black\">recovery rate over "
                  "(m, alpha)</text>\n",
                  left);
    svg += buf;
    // rows printed with the largest m at the top
    for (std::size_t r = 0; r < nm; ++r) {
        const std::size_t mi = nm - 1 - r;
        for (std::size_t a = 0; a < na; ++a) {
            const double rate = rates[mi * na + a];
            const int shade = static_cast<int>(std::lround(255.0 * rate));
            const int x = left + static_cast<int>(a) * cell;
            const int y = top + static_cast<int>(r) * cell;
            std::snprintf(buf, sizeof(buf),
                          "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" "
                          "fill=\"rgb(%d,%d,%d)\" stroke=\"gray\"/>\n",
                          x, y, cell, cell, shade, shade, shade);
            svg += buf;
            const char* text_fill = rate < 0.5 ? "white" : "black";
            std::snprintf(buf, sizeof(buf),
                          "<text x=\"%d\" y=\"%d\" font-size=\"12\" fill=\"%s\" "
                          "text-anchor=\"middle\">%.2f</text>\n",
                          x + cell / 2, y + cell / 2 + 4, text_fill, rate);
            svg += buf;
        }
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%d\" y=\"%d\" font-size=\"12\" fill=\"black\" "
                      "text-anchor=\"end\">m=%d</text>\n",
                      left - 8, top + static_cast<int>(r) * cell + cell / 2 + 4, m_values[mi]);
        svg += buf;
    }
    for (std::size_t a = 0; a < na; ++a) {
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%d\" y=\"%d\" font-size=\"12\" fill=\"black\" "
                      "text-anchor=\"middle\">%.3g</text>\n",
                      left + static_cast<int>(a) * cell + cell / 2,
                      top + cell * static_cast<int>(nm) + 18, alpha_values[a]);
        svg += buf;
    }
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%d\" y=\"%d\" font-size=\"13\" fill=\"black\" "
                  "text-anchor=\"middle\">alpha</text>\n",
                  left + cell * static_cast<int>(na) / 2, top + cell * static_cast<int>(nm) + 38);
    svg += buf;
    svg += "</svg>\n";
    std::ofstream out(path);
    if (!out) throw IoError("write_phase_svg: cannot open " + path + " for writing");
    out << svg;
    if (!out) throw IoError("write_phase_svg: write failed for " + path);
}

}  // namespace rodeodb
