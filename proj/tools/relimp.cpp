// relimp command-line front end: rank components of a system model, emit
// covariance curves and alpha sweeps as CSV, run the verification suite, and
// print the 2-out-of-3 ordering example.
//
// Exit codes: 0 ok, 1 verification/numerical failure, 2 input error,
// 3 unsupported measure.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "relimp/importance_binary.hpp"
#include "relimp/importance_continuous.hpp"
#include "relimp/model_io.hpp"
#include "relimp/oracle.hpp"
#include "relimp/verify.hpp"

namespace {

using namespace relimp;

constexpr int exit_ok = 0;
constexpr int exit_check_failed = 1;
constexpr int exit_input_error = 2;
constexpr int exit_unsupported = 3;

std::string sig(double v, int digits, bool keep_zeros = true) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), keep_zeros ? "%#.*g" : "%.*g", digits, v);
    return buf;
}

std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

// Joins cells padded to their column widths; the last cell is not padded, so
// rows carry no trailing whitespace.
std::string row(const std::vector<std::string>& cells, const std::vector<std::size_t>& widths) {
    std::string out;
    for (std::size_t k = 0; k < cells.size(); ++k)
        out += k + 1 == cells.size() ? cells[k] : pad(cells[k], widths[k]);
    out += '\n';
    return out;
}

unsigned env_threads() {
    if (const char* v = std::getenv("RELIMP_THREADS")) {
        const long n = std::strtol(v, nullptr, 10);
        if (n >= 1) return static_cast<unsigned>(n);
    }
    return 1;
}

std::vector<int> rank_positions(const std::vector<int>& ranking) {
    std::vector<int> pos(ranking.size());
    for (std::size_t k = 0; k < ranking.size(); ++k) pos[ranking[k] - 1] = static_cast<int>(k) + 1;
    return pos;
}

void print_warnings(const SystemModel& model) {
    for (const auto& w : model.warnings) std::cout << "warning: " << w << "\n";
    for (int id : irrelevant_components(model.sf))
        std::cout << "warning: component " << id << " is irrelevant; its importances are zero\n";
}

// ---------------------------------------------------------------------------
// rank
// ---------------------------------------------------------------------------

int cmd_rank(const std::string& path, const std::string& measure) {
    const SystemModel model = load_model(path);
    if (!model.binary_mode())
        throw ValidationError("rank requires a binary-mode model (per-component \"p\"); "
                              "use rank-lifetime for lifetime models");
    const auto& p = *model.probabilities;
    print_warnings(model);

    struct Entry {
        std::string token;
        ImportanceReport report;
    };
    auto compute = [&](const std::string& token) -> ImportanceReport {
        if (token == "birnbaum") return birnbaum(model.sf, p);
        if (token == "ra") return risk_achievement(model.sf, p);
        if (token == "rr") return risk_reduction(model.sf, p);
        if (token == "cov") return covariance_importance(model.sf, p);
        if (token == "cov-norm") return covariance_importance_normalized(model.sf, p);
        if (token == "info") return information_importance(model.sf, p);
        throw UnsupportedMeasureError("unknown measure '" + token +
                                      "' (expected birnbaum|ra|rr|cov|cov-norm|info|all)");
    };

    std::vector<Entry> entries;
    if (measure == "all") {
        for (const char* token : {"birnbaum", "ra", "rr", "cov", "cov-norm", "info"})
            entries.push_back({token, compute(token)});
    } else {
        entries.push_back({measure, compute(measure)});
    }

    if (entries.size() == 1) {
        const auto& rep = entries.front().report;
        const auto pos = rank_positions(rep.ranking);
        std::cout << "measure: " << measure_name(rep.measure) << "\n";
        std::cout << pad("component", 11) << pad("value", 17) << "rank\n";
        for (int i = 1; i <= model.sf.n(); ++i)
            std::cout << pad(std::to_string(i), 11) << pad(sig(rep.values[i - 1], 9), 17)
                      << pos[i - 1] << "\n";
        return exit_ok;
    }

    std::cout << "measure: all\n";
    std::vector<std::size_t> widths{11};
    std::vector<std::string> header{"component"};
    for (const auto& e : entries) {
        const std::string name = measure_name(e.report.measure);
        widths.push_back(std::max<std::size_t>(17, name.size() + 2));
        header.push_back(name);
    }
    std::cout << row(header, widths);
    for (int i = 1; i <= model.sf.n(); ++i) {
        std::vector<std::string> cells{std::to_string(i)};
        for (const auto& e : entries) cells.push_back(sig(e.report.values[i - 1], 9));
        std::cout << row(cells, widths);
    }
    for (const auto& e : entries) {
        std::cout << "ranking " << measure_name(e.report.measure) << ":";
        for (int id : e.report.ranking) std::cout << " " << id;
        std::cout << "\n";
    }
    return exit_ok;
}

// ---------------------------------------------------------------------------
// rank-lifetime
// ---------------------------------------------------------------------------

int cmd_rank_lifetime(const std::string& path, const std::string& measure,
                      const std::string& mc_check) {
    const SystemModel model = load_model(path);
    if (model.binary_mode())
        throw ValidationError("rank-lifetime requires a lifetime-mode model (per-component "
                              "\"dist\"); use rank for binary models");
    print_warnings(model);
    const LifetimeModel m(model.sf, *model.lifetimes);

    ImportanceReport rep;
    if (measure == "l1") {
        rep = l1_covariance_importance(m);
    } else if (measure == "linf") {
        rep = linf_covariance_importance(m);
    } else if (measure == "natvig") {
        rep = natvig_exponential(m);
    } else {
        throw UnsupportedMeasureError("unknown measure '" + measure +
                                      "' (expected l1|linf|natvig)");
    }

    std::optional<oracle::McLifetimeResult> mc;
    oracle::McConfig cfg;
    if (!mc_check.empty()) {
        const auto comma = mc_check.find(',');
        if (comma == std::string::npos)
            throw ValidationError("--mc-check expects SEED,SAMPLES");
        try {
            cfg.seed = std::stoull(mc_check.substr(0, comma));
            cfg.samples = std::stoull(mc_check.substr(comma + 1));
        } catch (const std::exception&) {
            throw ValidationError("--mc-check expects SEED,SAMPLES");
        }
        cfg.grid_points = measure == "linf" ? 64 : 0;
        cfg.threads = env_threads();
        mc = oracle::mc_lifetime_covariance(m, cfg);
    }

    const auto pos = rank_positions(rep.ranking);
    std::cout << "measure: " << measure_name(rep.measure) << "\n";
    std::vector<std::size_t> widths{11, 17};
    std::vector<std::string> header{"component", "value"};
    if (measure == "linf") {
        widths.push_back(17);
        header.push_back("t_star");
    }
    widths.push_back(6);
    header.push_back("rank");
    if (mc) {
        widths.insert(widths.end(), {17, 17});
        header.insert(header.end(), {"mc_estimate", "mc_se"});
    }
    std::cout << row(header, widths);
    for (int i = 1; i <= m.n(); ++i) {
        std::vector<std::string> cells{std::to_string(i), sig(rep.values[i - 1], 9)};
        if (measure == "linf") cells.push_back(sig(rep.maximizers[i - 1], 9));
        cells.push_back(std::to_string(pos[i - 1]));
        if (mc) {
            const auto& est = measure == "linf" ? mc->sup_diag_cov[i - 1]
                                                : mc->lifetime_cov[i - 1];
            double value = est.value, se = est.std_error;
            if (measure == "natvig") {
                value *= m.distribution(i).exponential_rate();
                se *= m.distribution(i).exponential_rate();
            }
            cells.push_back(sig(value, 9));
            cells.push_back(sig(se, 9));
        }
        std::cout << row(cells, widths);
    }
    const auto& sets = m.path_cut_sets();
    if (measure == "l1" && m.all_exponential() && sets.paths.size() == 1 &&
        sets.paths.front() == m.structure().state_count() - 1 && m.n() >= 2)
        std::cout << "note: L1 cannot distinguish series exponential components\n";
    return exit_ok;
}

// ---------------------------------------------------------------------------
// curve
// ---------------------------------------------------------------------------

int cmd_curve(const std::string& path, int component, int points, double t_max_opt,
              const std::string& alpha_sweep) {
    const SystemModel model = load_model(path);
    if (model.binary_mode())
        throw ValidationError("curve requires a lifetime-mode model");
    const LifetimeModel m(model.sf, *model.lifetimes);

    if (!alpha_sweep.empty()) {
        if (m.n() != 2 || !m.all_exponential())
            throw ValidationError("--alpha-sweep requires exactly two exponential components");
        double lo = 0.0, hi = 0.0;
        int steps = 0;
        {
            const auto c1 = alpha_sweep.find(':');
            const auto c2 = c1 == std::string::npos ? std::string::npos
                                                    : alpha_sweep.find(':', c1 + 1);
            if (c2 == std::string::npos)
                throw ValidationError("--alpha-sweep expects LO:HI:STEPS");
            try {
                lo = std::stod(alpha_sweep.substr(0, c1));
                hi = std::stod(alpha_sweep.substr(c1 + 1, c2 - c1 - 1));
                steps = std::stoi(alpha_sweep.substr(c2 + 1));
            } catch (const std::exception&) {
                throw ValidationError("--alpha-sweep expects LO:HI:STEPS");
            }
        }
        if (!(lo > 0.0) || hi < lo || steps < 1 || (steps == 1 && hi != lo))
            throw ValidationError("--alpha-sweep range is invalid: need 0 < LO <= HI and "
                                  "STEPS >= 1 (STEPS == 1 only when LO == HI)");
        const double lambda2 = m.distribution(2).exponential_rate();
        std::fputs("alpha,I1,I2\r\n", stdout);
        for (int k = 0; k < steps; ++k) {
            const double alpha =
                steps == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / (steps - 1);
            const double i1 = linf_exponential_two_series(alpha * lambda2, lambda2);
            const double i2 = linf_exponential_two_series(lambda2, alpha * lambda2);
            std::fputs((sig(alpha, 12, false) + "," + sig(i1, 12) + "," + sig(i2, 12) + "\r\n")
                           .c_str(),
                       stdout);
        }
        return exit_ok;
    }

    if (component < 1 || component > m.n())
        throw ValidationError("--component must name a component of the model");
    if (points < 2) throw ValidationError("--points must be at least 2");
    const double t_max = t_max_opt > 0.0 ? t_max_opt : m.horizon(1e-9);
    std::vector<double> grid;
    for (int k = 0; k < points; ++k)
        grid.push_back(t_max * static_cast<double>(k) / static_cast<double>(points - 1));
    std::fputs("t,cov\r\n", stdout);
    for (const auto& [t, cov] : covariance_curve(m, component, grid))
        std::fputs((sig(t, 12, false) + "," + sig(cov, 12) + "\r\n").c_str(), stdout);
    return exit_ok;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

int cmd_verify(const std::string& path, int random_trials, std::uint64_t seed) {
    std::vector<verify::CheckResult> results;
    if (!path.empty()) {
        const SystemModel model = load_model(path);
        if (model.binary_mode()) {
            results = verify::verify_binary(model.sf, *model.probabilities);
        } else {
            results = verify::verify_lifetime(LifetimeModel(model.sf, *model.lifetimes));
        }
    } else {
        results = verify::verify_random(static_cast<std::size_t>(random_trials), seed);
    }
    for (const auto& r : results) {
        const char* tag = r.status == verify::Status::pass   ? "PASS"
                          : r.status == verify::Status::fail ? "FAIL"
                                                             : "SKIP";
        std::cout << tag << " " << r.name << ": " << r.detail << "\n";
    }
    return verify::all_passed(results) ? exit_ok : exit_check_failed;
}

// ---------------------------------------------------------------------------
// table
// ---------------------------------------------------------------------------

int cmd_table() {
    const StructureFunction sf = StructureFunction::from_expression("koutofn(2;1,2,3)");
    const std::vector<std::vector<double>> rows = {
        {0.1, 0.2, 0.3}, {0.3, 0.4, 0.5}, {0.5, 0.6, 0.7}, {0.7, 0.8, 0.9}};
    std::cout << "2-out-of-3 system: orderings induced by Birnbaum and covariance importance\n";
    for (const auto& p : rows) {
        const auto birn = birnbaum(sf, p);
        const auto cov = covariance_importance(sf, p);
        auto seq = [](const std::vector<int>& ids) {
            std::string s;
            for (int id : ids) s += (s.empty() ? "" : " ") + std::to_string(id);
            return s;
        };
        auto vals = [&](const std::vector<double>& v) {
            std::string s;
            for (double x : v) s += (s.empty() ? "" : ", ") + sig(x, 9);
            return "(" + s + ")";
        };
        // Ascending importance; ties keep ascending ids in both conventions.
        auto asc_ranking = [&](const std::vector<double>& values) {
            std::vector<int> ids(values.size());
            std::iota(ids.begin(), ids.end(), 1);
            std::stable_sort(ids.begin(), ids.end(), [&](int a, int b) {
                if (values[a - 1] != values[b - 1]) return values[a - 1] < values[b - 1];
                return a < b;
            });
            return ids;
        };
        std::cout << "p = (" << sig(p[0], 9, false) << "," << sig(p[1], 9, false) << ","
                  << sig(p[2], 9, false) << ")\n";
        std::cout << "  I^B = " << vals(birn.values) << "  desc: " << seq(birn.ranking)
                  << "  asc: " << seq(asc_ranking(birn.values)) << "\n";
        std::cout << "  I^c = " << vals(cov.values) << "  desc: " << seq(cov.ranking)
                  << "  asc: " << seq(asc_ranking(cov.values)) << "\n";
    }
    std::cout << "note: a caption reading 'descending order of importance' matches these rows\n"
                 "only under the ascending convention; both sequences are printed above.\n";
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"component importance measures for binary coherent systems"};
    app.require_subcommand(1);

    std::string model_path, measure = "all", mc_check, alpha_sweep;
    int component = 0, points = 256, random_trials = 0;
    double t_max = 0.0;
    std::uint64_t seed = 0x5eedULL;

    auto* rank = app.add_subcommand("rank", "binary-mode importance table");
    rank->add_option("model", model_path, "system model JSON file")->required();
    rank->add_option("--measure", measure, "birnbaum|ra|rr|cov|cov-norm|info|all");

    auto* rankl = app.add_subcommand("rank-lifetime", "lifetime-mode importance table");
    rankl->add_option("model", model_path, "system model JSON file")->required();
    rankl->add_option("--measure", measure, "l1|linf|natvig")->required();
    rankl->add_option("--mc-check", mc_check, "SEED,SAMPLES Monte Carlo cross-check column");

    auto* curve = app.add_subcommand("curve", "diagonal covariance curve / alpha sweep (CSV)");
    curve->add_option("model", model_path, "system model JSON file")->required();
    curve->add_option("--component", component, "component id for the t,cov curve");
    curve->add_option("--points", points, "grid size for the t,cov curve");
    curve->add_option("--t-max", t_max, "grid horizon (default: model horizon)");
    curve->add_option("--alpha-sweep", alpha_sweep,
                      "LO:HI:STEPS sweep of lambda1 = alpha * lambda2 (two exponential "
                      "components)");

    auto* verify_cmd = app.add_subcommand("verify", "invariant suite; nonzero exit on failure");
    verify_cmd->add_option("model", model_path, "system model JSON file");
    verify_cmd->add_option("--random", random_trials, "run the randomized suite with N trials");
    verify_cmd->add_option("--seed", seed, "seed of the randomized suite");

    auto* table = app.add_subcommand("table", "2-out-of-3 ordering example, both conventions");
    (void)table;

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input_error;
    }

    try {
        if (rank->parsed()) return cmd_rank(model_path, measure);
        if (rankl->parsed()) return cmd_rank_lifetime(model_path, measure, mc_check);
        if (curve->parsed()) {
            if (!alpha_sweep.empty() && curve->count("--component") > 0)
                throw ValidationError("--alpha-sweep and --component are mutually exclusive");
            if (alpha_sweep.empty() && curve->count("--component") == 0)
                throw ValidationError("curve needs --component I or --alpha-sweep LO:HI:STEPS");
            return cmd_curve(model_path, component, points, t_max, alpha_sweep);
        }
        if (verify_cmd->parsed()) {
            const bool has_model = verify_cmd->count("model") > 0;
            const bool has_random = verify_cmd->count("--random") > 0;
            if (has_model == has_random)
                throw ValidationError("verify needs exactly one of a model file or --random N");
            if (has_random && random_trials < 1)
                throw ValidationError("--random needs a positive trial count");
            return cmd_verify(has_model ? model_path : "", random_trials, seed);
        }
        return cmd_table();
    } catch (const UnsupportedMeasureError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_unsupported;
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_check_failed;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input_error;
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_check_failed;
    }
}
