// orthozeros: command-line front end.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "orthozeros/config.hpp"
#include "orthozeros/errors.hpp"
#include "orthozeros/greens.hpp"
#include "orthozeros/orthopoly.hpp"
#include "orthozeros/predictor.hpp"
#include "orthozeros/surface.hpp"

using nlohmann::json;
using namespace oz;

namespace {

enum Exit { kOk = 0, kConfig = 1, kValidation = 2, kConvergence = 3 };

json to_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

json to_json(const Eigen::MatrixXd& m) {
    json a = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(to_json(Eigen::VectorXd(m.row(i).transpose())));
    return a;
}

json nullable(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(std::isnan(x) ? json(nullptr) : json(x));
    return a;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + p.string() + "'");
    out << text;
}

int cmd_geometry(const RunConfig& cfg, const std::filesystem::path& out) {
    IntervalSystem sys = cfg.system();
    WeightSpec spec = cfg.weight_spec();
    ValidationReport v = validate(spec);
    json j;
    j["endpoints"] = sys.endpoints();
    j["l"] = sys.l();
    j["bands"] = json::array();
    for (int k = 1; k <= sys.l(); ++k) j["bands"].push_back({sys.band(k).first, sys.band(k).second});
    j["gaps"] = json::array();
    for (int k = 1; k < sys.l(); ++k) j["gaps"].push_back({sys.gap(k).first, sys.gap(k).second});
    j["R_roots"] = spec.R_roots();
    j["S_roots"] = spec.S_roots();
    j["validation"] = {{"ok", v.ok}, {"checked", v.checked}, {"band", v.band},
                       {"x", v.x},   {"value", v.value},     {"message", v.message}};
    write_file(out / "geometry.json", dump_json(j));
    std::cout << (v.ok ? "weight valid" : "weight invalid: " + v.message) << '\n';
    return v.ok ? kOk : kValidation;
}

int cmd_measures(const RunConfig& cfg, const std::filesystem::path& out) {
    IntervalSystem sys = cfg.system();
    RInfinity r = compute_r_inf(sys);
    std::vector<double> w = harmonic_measures(sys, r);
    double sum = 0.0;
    for (double x : w) sum += x;
    json j;
    j["omega"] = w;
    j["sum"] = sum;
    j["r_inf"] = r.coeffs;
    j["r_inf_gap_zeros"] = r.gap_zeros;
    j["r_inf_gap_residuals"] = r.gap_residuals;
    write_file(out / "measures.json", dump_json(j));
    std::cout << "omega = (";
    for (size_t i = 0; i < w.size(); ++i) std::cout << (i ? ", " : "") << fmt(w[i]);
    std::cout << ")\n";
    return kOk;
}

int cmd_periods(const RunConfig& cfg, const std::filesystem::path& out) {
    Surface s(cfg.system());
    const auto& p = s.periods;
    json j;
    j["D"] = to_json(s.basis.D);
    j["alpha_residual"] = s.basis.alpha_residual;
    j["condition"] = s.basis.condition;
    j["B"] = to_json(p.B);
    j["G"] = to_json(p.G);
    j["u_inf"] = to_json(p.u_inf);
    j["omega"] = p.omega;
    j["symmetry_residual"] = p.symmetry_residual;
    j["max_eigenvalue"] = p.max_eigenvalue;
    j["identity_residual"] = p.identity_residual;
    std::string report = period_report(p);
    write_file(out / "periods.json", dump_json(j));
    write_file(out / "periods.txt", report);
    std::cout << report;
    return kOk;
}

int cmd_ortho(const RunConfig& cfg, const std::filesystem::path& out) {
    WeightSpec spec = cfg.weight_spec();
    ZeroOracle oracle(spec, cfg.n_max);
    std::unique_ptr<PellSolver> pell;
    if (spec.is_bernstein_szego()) pell = std::make_unique<PellSolver>(spec, cfg.n_max);
    json rows = json::array();
    for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
        ZeroReport z = oracle.zeros(n);
        json r;
        r["n"] = n;
        r["zeros"] = z.zeros;
        r["band_counts"] = z.band_counts;
        r["gap_occupancy"] = z.gap_occupancy;
        r["gap_zero_locations"] = nullable(z.gap_zero_locations);
        r["outside"] = z.outside;
        if (pell && n >= 1) {
            PellData pd = pell->at(n);
            r["pell"] = {{"residual", pd.residual},         {"leading", pd.leading},
                         {"gap_root_counts", pd.gap_root_counts}, {"x", pd.x},
                         {"delta", pd.delta},               {"g_hat", pd.g_hat}};
        }
        rows.push_back(r);
    }
    json j;
    j["alpha"] = oracle.recurrence().alpha;
    j["beta"] = oracle.recurrence().beta;
    j["reports"] = rows;
    write_file(out / "ortho.json", dump_json(j));
    std::cout << "zero reports for n = " << cfg.n_min << ".." << cfg.n_max << '\n';
    return kOk;
}

int cmd_predict(const RunConfig& cfg, const std::filesystem::path& out) {
    WeightSpec spec = cfg.weight_spec();
    Surface s(cfg.system());
    Comparison c = compare(s, spec, cfg.n_min, cfg.n_max, cfg.epsilon, cfg.threshold);
    WeightTransform phi = weight_transform(s, spec);
    json preds = json::array();
    for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
        Prediction p = predict(s, spec, phi, n, cfg.epsilon);
        preds.push_back({{"n", n},
                         {"V", to_json(p.vec.V)},
                         {"counts", p.vec.counts},
                         {"interior", p.vec.interior},
                         {"x", p.gaps.x},
                         {"delta", p.gaps.delta},
                         {"inversion_residual", p.gaps.residual}});
    }
    const auto& sm = c.summary;
    json j;
    j["summary"] = {{"n_count", sm.n_count},
                    {"max_defect", sm.max_defect},
                    {"max_defect_thresholded", sm.max_defect_thresholded},
                    {"count_match_rate", sm.count_match_rate},
                    {"occupancy_match_rate", sm.occupancy_match_rate},
                    {"flagged", sm.flagged},
                    {"flagged_count_match_rate", sm.flagged_count_match_rate},
                    {"flagged_occupancy_match_rate", sm.flagged_occupancy_match_rate}};
    j["phi"] = to_json(phi.phi);
    j["predictions"] = preds;
    json rows = json::array();
    for (const auto& r : c.rows)
        rows.push_back({{"n", r.n},
                        {"j", r.j},
                        {"actual", r.actual},
                        {"predicted", r.predicted},
                        {"defect", r.defect},
                        {"occupancy_actual", r.occupancy_actual},
                        {"occupancy_predicted", r.occupancy_predicted},
                        {"interior_flag", r.interior},
                        {"threshold_ok", r.threshold_ok}});
    j["rows"] = rows;
    write_file(out / "predict.csv", comparison_csv(c));
    write_file(out / "predict.json", dump_json(j));
    std::cout << "max defect " << sm.max_defect_thresholded << " (thresholded), count match "
              << fmt(sm.count_match_rate) << ", occupancy match " << fmt(sm.occupancy_match_rate) << '\n';
    return sm.max_defect_thresholded <= 1 ? kOk : kValidation;
}

int cmd_verify(const RunConfig& cfg, const std::filesystem::path& out) {
    WeightSpec spec = cfg.weight_spec();
    if (!spec.is_bernstein_szego()) throw ConfigError("field 'weight.kind': verify needs a bernstein_szego weight");
    Surface s(cfg.system());
    WeightTransform phi = weight_transform(s, spec);
    PellSolver pell(spec, cfg.n_max);
    ZeroOracle oracle(spec, cfg.n_max);
    bool ok = true;
    json rows = json::array();
    for (int n = std::max(cfg.n_min, 1); n <= cfg.n_max; ++n) {
        PellData pd = pell.at(n);
        ZeroReport z = oracle.zeros(n);
        json r;
        r["n"] = n;
        r["pell_residual"] = pd.residual;
        r["gap_root_counts"] = pd.gap_root_counts;
        r["x"] = pd.x;
        r["delta"] = pd.delta;
        bool one_root = true;
        for (int c : pd.gap_root_counts) one_root = one_root && c == 1;
        bool row_ok = pd.residual <= cfg.tolerance && one_root;
        if (one_root && s.genus() > 0) {
            CongruenceReport lr = verify_congruence(s, spec, phi, pd, z.band_counts);
            r["congruence_defect"] = lr.defect;
            r["lambda"] = to_json(lr.lambda);
            r["control_gap"] = lr.control_gap;
            r["control_defect"] = lr.control_defect;
            row_ok = row_ok && lr.defect <= cfg.tolerance;
        }
        InterlacingReport il = interlacing_check(spec, pd);
        r["interlacing_ok"] = il.ok;
        r["interlacing_violations"] = il.violations;
        r["ok"] = row_ok;
        ok = ok && row_ok;
        rows.push_back(r);
    }
    json j;
    j["phi"] = to_json(phi.phi);
    j["identity_checked"] = phi.identity_checked;
    j["identity_residual"] = phi.identity_residual;
    j["tolerance"] = cfg.tolerance;
    j["ok"] = ok;
    j["reports"] = rows;
    write_file(out / "verify.json", dump_json(j));
    std::cout << (ok ? "verified" : "verification failed") << '\n';
    return ok ? kOk : kValidation;
}

int cmd_experiment(const RunConfig& cfg, const std::filesystem::path& out) {
    WeightSpec spec = cfg.weight_spec();
    Surface s(cfg.system());
    AccumulationReport rep = accumulation_experiment(s, spec, cfg.n_max, cfg.targets, cfg.bins, 1);
    json gaps = json::array();
    for (const auto& h : rep.gaps) {
        json series = json::array();
        for (size_t i = 0; i < h.bin_counts.size(); ++i)
            series.push_back({{"x", 0.5 * (h.bin_edges[i] + h.bin_edges[i + 1])}, {"count", h.bin_counts[i]}});
        gaps.push_back({{"gap", h.gap},
                        {"visited", h.visited},
                        {"actual", h.actual},
                        {"largest_unvisited", h.largest_unvisited},
                        {"distinct_points", h.distinct_points},
                        {"histogram", series},
                        {"target_distance", h.target_distance}});
    }
    json j;
    j["n_max"] = rep.n_max;
    j["gaps"] = gaps;
    int code = kOk;
    if (cfg.periodicity) {
        const auto& pc = *cfg.periodicity;
        PeriodicityReport pr = rational_periodicity(s, spec, pc.N, pc.k, cfg.n_min, cfg.n_max);
        bool bound_ok = true;
        for (const auto& h : rep.gaps) bound_ok = bound_ok && h.distinct_points <= pc.N + 2;
        j["periodicity"] = {{"N", pc.N},
                            {"k", pc.k},
                            {"counts_ok", pr.counts_ok},
                            {"forecast_invariant", pr.forecast_invariant},
                            {"max_forecast_shift", pr.max_forecast_shift},
                            {"accumulation_bound_ok", bound_ok},
                            {"failures", pr.failures}};
        if (!pr.counts_ok || !bound_ok) code = kValidation;
    }
    write_file(out / "experiment.json", dump_json(j));
    for (const auto& h : rep.gaps)
        std::cout << "gap " << h.gap << ": " << h.visited.size() << " visits, " << h.distinct_points
                  << " distinct, largest unvisited " << fmt(h.largest_unvisited) << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Zero counts of orthogonal polynomials on several intervals"};
    std::string config_path, command, out_dir = ".";
    std::optional<int> n_min, n_max;
    std::optional<double> epsilon, threshold, tolerance;
    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--command", command, "geometry, measures, periods, ortho, predict, verify, experiment")
        ->required()
        ->check(CLI::IsMember({"geometry", "measures", "periods", "ortho", "predict", "verify", "experiment"}));
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--n-min", n_min);
    app.add_option("--n-max", n_max);
    app.add_option("--epsilon", epsilon, "interior margin in cell coordinates");
    app.add_option("--threshold", threshold, "relative |P_n| threshold at zeros of S");
    app.add_option("--tolerance", tolerance, "verification tolerance");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        RunConfig cfg = load_config(config_path);
        if (n_min) cfg.n_min = *n_min;
        if (n_max) cfg.n_max = *n_max;
        if (epsilon) cfg.epsilon = *epsilon;
        if (threshold) cfg.threshold = *threshold;
        if (tolerance) cfg.tolerance = *tolerance;
        if (cfg.n_min < 0 || cfg.n_max < cfg.n_min) throw ConfigError("field 'n_min/n_max': bad range");
        if (!(cfg.epsilon >= 0.0 && cfg.epsilon < 0.5)) throw ConfigError("field 'epsilon': must lie in [0, 0.5)");
        if (!(cfg.tolerance > 0.0)) throw ConfigError("field 'tolerance': must be positive");

        std::filesystem::path out(out_dir);
        std::filesystem::create_directories(out);
        if (command == "geometry") return cmd_geometry(cfg, out);
        if (command == "measures") return cmd_measures(cfg, out);
        if (command == "periods") return cmd_periods(cfg, out);
        if (command == "ortho") return cmd_ortho(cfg, out);
        if (command == "predict") return cmd_predict(cfg, out);
        if (command == "verify") return cmd_verify(cfg, out);
        return cmd_experiment(cfg, out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const DomainError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kConfig;
    } catch (const WeightError& e) {
        std::cerr << "weight error: " << e.what() << '\n';
        return kValidation;
    } catch (const InvariantError& e) {
        std::cerr << "validation failure: " << e.what() << '\n';
        return kValidation;
    } catch (const ConvergenceError& e) {
        std::cerr << "no convergence: " << e.what() << '\n';
        return kConvergence;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    }
}
