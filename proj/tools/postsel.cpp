// Command-line front end: scenario inspection, loss/pointer sweeps, pre/post
// state design, and batch verification suites.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "postsel/postsel.hpp"

namespace {

using namespace postsel;

Cx parse_complex(std::string s) {
    std::erase(s, ' ');
    if (s.empty()) throw CLI::ValidationError("empty complex number");
    auto to_double = [](const std::string& t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        size_t used = 0;
        double v = std::stod(t, &used);
        if (used != t.size()) throw CLI::ValidationError("bad number '" + t + "'");
        return v;
    };
    if (s.back() == 'i' || s.back() == 'I') {
        const std::string body = s.substr(0, s.size() - 1);
        // split at the last +/- that is not an exponent sign and not leading
        for (size_t k = body.size(); k-- > 1;) {
            if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E')
                return Cx(to_double(body.substr(0, k)), to_double(body.substr(k)));
        }
        return Cx(0.0, to_double(body));
    }
    size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw CLI::ValidationError("bad number '" + s + "'");
    return Cx(v, 0.0);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

/// "start:stop:step" (inclusive) or a comma list.
std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> grid;
    if (spec.find(':') != std::string::npos) {
        auto parts = split(spec, ':');
        if (parts.size() != 3) throw CLI::ValidationError("grid range is start:stop:step");
        const double start = std::stod(parts[0]), stop = std::stod(parts[1]),
                     step = std::stod(parts[2]);
        if (step <= 0) throw CLI::ValidationError("grid step must be positive");
        for (int k = 0;; ++k) {
            const double v = start + k * step;
            if (v > stop + 1e-12) break;
            grid.push_back(v);
        }
    } else {
        for (const auto& p : split(spec, ',')) grid.push_back(std::stod(p));
    }
    if (grid.empty()) throw CLI::ValidationError("empty grid");
    return grid;
}

std::vector<std::pair<std::string, std::string>> parse_overlaps(
    const std::vector<std::string>& raw) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& r : raw) {
        auto parts = split(r, ',');
        if (parts.size() != 2)
            throw CLI::ValidationError("overlap must be 'mode+,mode-' e.g. 'NO+,O-'");
        out.emplace_back(parts[0], parts[1]);
    }
    return out;
}

ScenarioSpec resolve_scenario(const std::string& ref,
                              const std::vector<std::string>& overlaps) {
    // Built-in names win over file paths.
    if (ref == "hardy") return hardy(parse_overlaps(overlaps));
    if (!overlaps.empty())
        fail(Errc::NotFound, "--overlap only applies to the hardy scenario");
    if (ref == "three-box-intro") return three_box(ThreeBoxVariant::Intro);
    if (ref == "three-box-experimental") return three_box(ThreeBoxVariant::Experimental);
    if (!std::filesystem::exists(ref))
        fail(Errc::NotFound, "no built-in scenario or file named '" + ref + "'");
    return load_scenario(ref);
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("POSTSEL_SEED")) return std::stoull(env);
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

void print_header(const std::string& command_echo) {
    std::cout << "postsel " << kVersion << "\n";
    std::cout << "command: " << command_echo << "\n";
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::NotFound, "cannot open '" + path + "' for writing");
    out << contents;
}

// --- subcommand drivers -----------------------------------------------------

int run_weak_values(const std::string& scenario_ref, const std::vector<std::string>& overlaps,
                    const std::string& paths_arg, bool joint, bool marginals) {
    ScenarioSpec s = resolve_scenario(scenario_ref, overlaps);
    std::string echo = "postsel weak-values --scenario " + scenario_ref;
    for (const auto& ov : overlaps) echo += " --overlap " + ov;
    if (!paths_arg.empty()) echo += " --paths " + paths_arg;
    if (joint) echo += " --joint";
    if (marginals) echo += " --marginals";
    print_header(echo);
    std::cout << "scenario: " << s.name << "\n";
    std::cout << "postselection_probability = " << fmt_g12(s.prepost.success_probability())
              << "\n";

    const Space& sel = s.prepost.space();
    if (joint && sel.factor_count() < 2)
        fail(Errc::UnsupportedShape, "--joint needs a composite selection space");
    std::vector<int> which;
    if (paths_arg.empty()) {
        for (int k = 0; k < sel.dim(); ++k) which.push_back(k);
    } else {
        for (const auto& label : split(paths_arg, ',')) which.push_back(sel.index_of_label(label));
    }
    const char* prefix = (joint || sel.factor_count() > 1) ? "joint w[" : "w[";
    auto w = path_weak_values(s.prepost);
    for (int k : which) std::cout << prefix << sel.label(k) << "] = " << fmt_cx(w[k]) << "\n";
    if (paths_arg.empty()) {
        std::vector<Operator> projectors;
        for (int k = 0; k < sel.dim(); ++k) projectors.push_back(basis_projector(sel, k));
        std::cout << "sum_rule_residual = " << fmt_g12(sum_rule_residual(projectors, s.prepost))
                  << "\n";
    }

    if (marginals) {
        if (sel.factor_count() < 2)
            fail(Errc::UnsupportedShape, "--marginals needs a composite selection space");
        for (int f = 0; f < sel.factor_count(); ++f) {
            for (const auto& mode : sel.factor(f)) {
                Cx total = 0.0;
                for (int k = 0; k < sel.dim(); ++k)
                    if (sel.label_parts(k)[f] == mode) total += w[k];
                std::cout << "marginal w[" << mode << "] = " << fmt_cx(total) << "\n";
            }
        }
    }
    return 0;
}

int run_sweep(const std::string& scenario_ref, const std::vector<std::string>& overlaps,
              const std::string& mode, const std::string& paths_arg, const std::string& grid_arg,
              long long trials, std::optional<std::uint64_t> seed_flag,
              std::optional<double> visibility, const std::string& out_path, bool loss_column) {
    ScenarioSpec s = resolve_scenario(scenario_ref, overlaps);
    if (visibility) s = apply_visibility(s, *visibility);
    // default grids: ten strengths 0.1..1.0, eleven transmissions 0..1
    const std::string grid_spec =
        !grid_arg.empty() ? grid_arg : (mode == "pointer" ? "0.1:1:0.1" : "0:1:0.1");
    const std::vector<double> grid = parse_grid(grid_spec);

    std::string echo = "postsel sweep --scenario " + scenario_ref;
    for (const auto& ov : overlaps) echo += " --overlap " + ov;
    echo += " --mode " + mode;

    if (mode == "pointer") {
        if (paths_arg.empty()) throw CLI::ValidationError("pointer mode needs --path");
        echo += " --path " + paths_arg + " --grid " + grid_spec;
        if (visibility) echo += " --visibility " + fmt_g12(*visibility);
        if (!out_path.empty()) echo += " --out " + out_path;
        print_header(echo);
        std::cout << "scenario: " << s.name << "\n";
        if (!s.circuit.elements.empty())
            fail(Errc::UnsupportedShape, "pointer sweeps need an element-free scenario");
        const int path = s.prepost.space().index_of_label(paths_arg);
        auto samples = sweep_strength(s.prepost, path, grid, s.visibility);
        for (const auto& p : samples)
            std::cout << "G=" << fmt_g12(p.G) << " P_plus=" << fmt_g12(p.P_plus)
                      << " R=" << fmt_g12(p.R) << "\n";
        auto est = extrapolate_weak_value(samples);
        std::cout << "intercept = " << fmt_g12(est.intercept) << "\n";
        std::cout << "slope = " << fmt_g12(est.slope) << "\n";
        std::cout << "fit_rms = " << fmt_g12(est.residual) << "\n";
        if (!out_path.empty()) {
            std::ostringstream csv;
            write_pointer_csv(csv, samples);
            write_file(out_path, csv.str());
            std::cout << "csv: " << out_path << "\n";
        }
        return 0;
    }

    if (mode != "loss") throw CLI::ValidationError("--mode must be loss or pointer");
    if (paths_arg.empty()) throw CLI::ValidationError("loss mode needs --paths");
    RunConfig cfg;
    cfg.trials = trials;
    cfg.seed = resolve_seed(seed_flag);
    echo += " --paths " + paths_arg + " --grid " + grid_spec + " --trials " +
            std::to_string(trials) + " --seed " + std::to_string(cfg.seed);
    if (visibility) echo += " --visibility " + fmt_g12(*visibility);
    if (!out_path.empty()) echo += " --out " + out_path;
    if (loss_column) echo += " --loss-column";
    print_header(echo);
    std::cout << "scenario: " << s.name << "\n";

    CountSeries series = sweep_loss(s, split(paths_arg, ','), grid, cfg);
    std::cout << "setting: " << series.setting << "\n";
    for (size_t i = 0; i < series.parameter.size(); ++i)
        std::cout << "T=" << fmt_g12(series.parameter[i])
                  << " analytic_p=" << fmt_g12(series.analytic_p[i])
                  << " counts=" << series.counts[i] << "\n";
    if (!out_path.empty()) {
        std::ostringstream csv;
        write_loss_csv(csv, series, loss_column);
        write_file(out_path, csv.str());
        std::cout << "csv: " << out_path << "\n";
    }
    return 0;
}

int run_design(const std::string& targets_arg, const std::string& name,
               const std::string& out_path) {
    std::vector<Cx> targets;
    for (const auto& t : split(targets_arg, ',')) targets.push_back(parse_complex(t));
    std::string echo = "postsel design --targets " + targets_arg;
    if (!name.empty()) echo += " --name " + name;
    if (!out_path.empty()) echo += " --out " + out_path;
    print_header(echo);

    PrePost pp = design_prepost(TargetWeakValues{targets});
    auto w = path_weak_values(pp);
    double worst = 0.0;
    for (size_t k = 0; k < w.size(); ++k) {
        std::cout << "w[" << k + 1 << "] = " << fmt_cx(w[k]) << "\n";
        worst = std::max(worst, std::abs(w[k] - targets[k]));
    }
    std::cout << "max_target_deviation = " << fmt_g12(worst) << "\n";
    std::cout << "postselection_probability = " << fmt_g12(pp.success_probability()) << "\n";
    if (!out_path.empty()) {
        ScenarioSpec s{name.empty() ? "designed" : name, pp,
                       Circuit{pp.space(), std::nullopt, {}},
                       "Synthesized from target weak values.", std::nullopt};
        write_file(out_path, scenario_to_string(s));
        std::cout << "scenario: " << out_path << "\n";
    }
    return worst <= kPostselEps ? 0 : 1;
}

struct CheckReport {
    bool all_pass = true;

    void item(const std::string& label, double deviation, double tol) {
        const bool pass = deviation <= tol;
        all_pass = all_pass && pass;
        std::cout << (pass ? "PASS " : "FAIL ") << label
                  << ": max deviation = " << fmt_g12(deviation) << " (tol " << fmt_g12(tol)
                  << ")\n";
    }
};

int run_check(const std::string& suite, double phi, std::optional<std::uint64_t> seed_flag) {
    const std::uint64_t seed = seed_flag.value_or(20240101u);
    std::string echo = "postsel check " + suite;
    if (suite == "appendix") echo += " --phi " + fmt_g12(phi);
    if (suite == "oracle") echo += " --seed " + std::to_string(seed);
    print_header(echo);
    CheckReport report;

    if (suite == "oracle") {
        report.item("shortcut vs full evolution, 100 random circuits",
                    oracle_equivalence_max_deviation(seed, 100), 1e-9);
    } else if (suite == "negation") {
        auto s = three_box(ThreeBoxVariant::Intro);
        const double base = s.prepost.success_probability();
        double d1 = 0, d12 = 0, d2 = 0;
        for (double t : {0.0, 0.25, 0.5, 1.0}) {
            d1 = std::max(d1, std::abs(scenario_loss_probability(s, {0}, t) - t * base));
            d12 = std::max(d12, std::abs(scenario_loss_probability(s, {0, 1}, t) - base));
            const double expect2 = (2.0 - std::sqrt(t)) * (2.0 - std::sqrt(t)) * base;
            d2 = std::max(d2, std::abs(scenario_loss_probability(s, {1}, t) - expect2));
        }
        report.item("loss on path 1 scales as T", d1, kExactTol);
        report.item("loss on paths 1+2 cancels", d12, kExactTol);
        report.item("loss on path 2 amplifies as (2-sqrt(T))^2", d2, kExactTol);
    } else if (suite == "sumrule") {
        for (auto variant : {ThreeBoxVariant::Intro, ThreeBoxVariant::Experimental}) {
            auto s = three_box(variant);
            std::vector<Operator> ps;
            for (int k = 0; k < 3; ++k) ps.push_back(basis_projector(s.prepost.space(), k));
            report.item("sum rule, " + s.name, sum_rule_residual(ps, s.prepost), kExactTol);
        }
        auto h = hardy();
        std::vector<Operator> ps;
        for (int k = 0; k < 4; ++k) ps.push_back(basis_projector(h.prepost.space(), k));
        report.item("joint sum rule, hardy", sum_rule_residual(ps, h.prepost), kExactTol);
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            CounterRng rng(seed, 1000 + static_cast<std::uint64_t>(trial));
            const int d = 2 + static_cast<int>(rng.next_u64() % 5);
            std::vector<std::string> labels;
            for (int i = 0; i < d; ++i) labels.push_back("b" + std::to_string(i));
            const Space space = Space::single(labels);
            Operator u = random_unitary(space, rng);
            std::vector<Operator> decomposition;
            for (int k = 0; k < d; ++k)
                decomposition.push_back(
                    projector_of(Ket(space, u.matrix().col(k), Normalize::Yes)));
            worst = std::max(worst,
                             sum_rule_residual(decomposition, random_prepost(space, rng)));
        }
        report.item("sum rule, 20 random orthogonal decompositions", worst, kExactTol);
    } else if (suite == "appendix") {
        const double gap = appendix_rotation_check(phi);
        const double closed = std::sqrt(2.0) * (2.0 - 2.0 * std::cos(phi));
        report.item("Frobenius gap matches closed form", std::abs(gap - closed), kExactTol);
        report.item("gap below 2*phi^2", gap, 2.0 * phi * phi);
    } else if (suite == "hardy") {
        auto p_of = [](const ScenarioSpec& s) {
            return evolve_full(s.circuit, s.prepost).success_probability;
        };
        report.item("coincidence probability, no overlaps", std::abs(p_of(hardy()) - 1.0 / 12.0),
                    kExactTol);
        report.item("blocked by the (NO+, O-) overlap",
                    std::abs(p_of(hardy({{"NO+", "O-"}}))), kExactTol);
        report.item("recovered by adding the (NO+, NO-) overlap",
                    std::abs(p_of(hardy({{"NO+", "O-"}, {"NO+", "NO-"}})) - 1.0 / 12.0),
                    kExactTol);
        auto h = hardy();
        const auto& sel = h.prepost.space();
        auto w = path_weak_values(h.prepost);
        auto expect = [&](const char* a, const char* b, double v) {
            report.item(std::string("joint weak value (") + a + ", " + b + ")",
                        std::abs(w[sel.index_of({a, b})] - Cx(v)), kExactTol);
        };
        expect("NO+", "O-", 1.0);
        expect("O+", "NO-", 1.0);
        expect("O+", "O-", 0.0);
        expect("NO+", "NO-", -1.0);
        Cx marginal_pos = w[sel.index_of({"O+", "NO-"})] + w[sel.index_of({"O+", "O-"})];
        Cx marginal_ele = w[sel.index_of({"NO+", "O-"})] + w[sel.index_of({"O+", "O-"})];
        report.item("positron marginal w[O+]", std::abs(marginal_pos - Cx(1.0)), kExactTol);
        report.item("electron marginal w[O-]", std::abs(marginal_ele - Cx(1.0)), kExactTol);
    } else {
        throw CLI::ValidationError("unknown suite '" + suite +
                                   "' (oracle|negation|sumrule|appendix|hardy)");
    }
    std::cout << (report.all_pass ? "all checks passed\n" : "some checks FAILED\n");
    return report.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pre/postselected quantum system simulator"};
    app.set_version_flag("--version", std::string("postsel ") + kVersion);
    app.require_subcommand(1);

    std::string scenario_ref, mode = "loss", paths_arg, grid_arg, targets_arg, name, out_path,
                suite;
    std::vector<std::string> overlaps;
    bool joint = false, marginals = false, loss_column = false;
    long long trials = 100000;
    double phi = 0.1;
    std::optional<std::uint64_t> seed;
    std::optional<double> visibility;

    auto* wv = app.add_subcommand("weak-values", "Weak values and sum rule of a scenario");
    wv->add_option("--scenario", scenario_ref, "Built-in name or scenario file")->required();
    wv->add_option("--overlap", overlaps, "hardy annihilation point, e.g. NO+,O-");
    wv->add_option("--paths", paths_arg, "Only these path labels");
    wv->add_flag("--joint", joint, "Insist on a composite (joint) selection space");
    wv->add_flag("--marginals", marginals, "Also print per-particle marginals");

    auto* sw = app.add_subcommand("sweep", "Loss or pointer-strength sweep");
    sw->add_option("--scenario", scenario_ref)->required();
    sw->add_option("--overlap", overlaps);
    sw->add_option("--mode", mode, "loss or pointer");
    sw->add_option("--paths", paths_arg, "Comma-separated lossy path labels");
    sw->add_option("--path", paths_arg, "Marked path label (pointer mode)");
    sw->add_option("--grid", grid_arg, "start:stop:step or comma list");
    sw->add_option("--trials", trials, "Photon pairs per grid point");
    sw->add_option("--seed", seed, "RNG seed (default: POSTSEL_SEED or random)");
    sw->add_option("--visibility", visibility, "Interferometer visibility in [0,1]");
    sw->add_option("--out", out_path, "Write CSV here");
    sw->add_flag("--loss-column", loss_column, "Append loss = 1-T column to the CSV");

    auto* de = app.add_subcommand("design", "Synthesize a pre/post pair from target weak values");
    de->add_option("--targets", targets_arg, "Comma-separated targets, e.g. 1,-1,1")->required();
    de->add_option("--name", name, "Scenario name for --out");
    de->add_option("--out", out_path, "Write the scenario file here");

    auto* ck = app.add_subcommand("check", "Batch verification suites");
    ck->add_option("suite", suite, "oracle|negation|sumrule|appendix|hardy")->required();
    ck->add_option("--phi", phi, "Rotation angle for the appendix suite");
    ck->add_option("--seed", seed, "Seed for randomized suites");

    CLI11_PARSE(app, argc, argv);

    try {
        if (wv->parsed())
            return run_weak_values(scenario_ref, overlaps, paths_arg, joint, marginals);
        if (sw->parsed())
            return run_sweep(scenario_ref, overlaps, mode, paths_arg, grid_arg, trials, seed,
                             visibility, out_path, loss_column);
        if (de->parsed()) return run_design(targets_arg, name, out_path);
        if (ck->parsed()) return run_check(suite, phi, seed);
    } catch (const postsel::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
