#include <sstream>

#include "support.hpp"

using namespace postsel;
using testsup::errc_of;

namespace {

std::vector<double> t_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 10; ++i) g.push_back(0.1 * i);
    return g;
}

}  // namespace

TEST_CASE("binomial sampling basics", "[counting]") {
    RunConfig cfg{1000, 77, std::nullopt};
    CHECK(simulate_counts(0.0, cfg) == 0);
    CHECK(simulate_counts(1.0, cfg) == 1000);

    RunConfig big{100000, 12345, std::nullopt};
    const double p = 1.0 / 9.0;
    const long long n = simulate_counts(p, big);
    const double sigma = std::sqrt(big.trials * p * (1.0 - p));
    CHECK(std::abs(n - big.trials * p) <= 3.0 * sigma);

    CHECK(errc_of([&] { simulate_counts(1.5, cfg); }) == Errc::InvalidProbability);
    CHECK(errc_of([&] { simulate_counts(-0.1, cfg); }) == Errc::InvalidProbability);
    CHECK(errc_of([] { simulate_counts(0.5, RunConfig{0, 1, std::nullopt}); }) ==
          Errc::InvalidProbability);
}

TEST_CASE("sampling is a pure function of seed and stream", "[counting]") {
    RunConfig cfg{50000, 99, std::nullopt};
    CHECK(simulate_counts(0.3, cfg, 5) == simulate_counts(0.3, cfg, 5));
    CHECK(simulate_counts(0.3, cfg, 5) != simulate_counts(0.3, cfg, 6));

    auto s = three_box(ThreeBoxVariant::Intro);
    auto grid = t_grid();
    CountSeries a = sweep_loss(s, {"1", "2"}, grid, cfg);
    CountSeries b = sweep_loss(s, {"1", "2"}, grid, cfg);
    CHECK(a.counts == b.counts);
    CHECK(a.analytic_p == b.analytic_p);
}

TEST_CASE("loss sweep against analytic probabilities", "[counting]") {
    auto s = three_box(ThreeBoxVariant::Intro);
    RunConfig cfg{100000, 2024, std::nullopt};
    auto grid = t_grid();
    const double base = s.prepost.success_probability();

    CountSeries on1 = sweep_loss(s, {"1"}, grid, cfg);
    CountSeries on2 = sweep_loss(s, {"2"}, grid, cfg);
    CountSeries on12 = sweep_loss(s, {"1", "2"}, grid, cfg);

    for (size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        CHECK(std::abs(on1.analytic_p[i] - t * base) < kExactTol);
        const double amp = 2.0 - std::sqrt(t);
        CHECK(std::abs(on2.analytic_p[i] - amp * amp * base) < kExactTol);
        CHECK(std::abs(on12.analytic_p[i] - base) < kExactTol);
    }

    // sampled frequencies stay within 5 sigma of the analytic values
    auto within_5sigma = [&](const CountSeries& series) {
        for (size_t i = 0; i < series.counts.size(); ++i) {
            const double p = series.analytic_p[i];
            const double sigma = std::sqrt(std::max(p * (1.0 - p) / cfg.trials, 1e-300));
            const double freq = static_cast<double>(series.counts[i]) / cfg.trials;
            if (std::abs(freq - p) > 5.0 * sigma) return false;
        }
        return true;
    };
    CHECK(within_5sigma(on1));
    CHECK(within_5sigma(on2));
    CHECK(within_5sigma(on12));

    // blocking the negative path really does raise the counts
    CHECK(on2.counts.front() > on2.counts.back());

    // negation at scale: regression slope of frequency vs T within 3 sigma of 0
    std::vector<double> freq;
    for (long long c : on12.counts) freq.push_back(static_cast<double>(c) / cfg.trials);
    LineFit fit = fit_line(grid, freq);
    double t_mean = 0.0;
    for (double t : grid) t_mean += t;
    t_mean /= grid.size();
    double sxx = 0.0;
    for (double t : grid) sxx += (t - t_mean) * (t - t_mean);
    const double sigma_slope = std::sqrt(base * (1.0 - base) / cfg.trials / sxx);
    CHECK(std::abs(fit.slope) <= 3.0 * sigma_slope);

    CHECK(errc_of([&] { sweep_loss(s, {"7"}, grid, cfg); }) == Errc::SpaceMismatch);
    const double bad_grid[] = {0.5, 1.5};
    CHECK(errc_of([&] { sweep_loss(s, {"1"}, bad_grid, cfg); }) == Errc::InvalidTransmission);
}

TEST_CASE("two-particle shutter sweep", "[counting]") {
    auto h = hardy();
    RunConfig cfg{20000, 31415, std::nullopt};
    const double grid[] = {0.0, 0.5, 1.0};
    CountSeries series = sweep_loss(h, {"NO+,O-"}, grid, cfg);
    // that composite path carries joint weak value 1: probability scales as T
    for (size_t i = 0; i < series.parameter.size(); ++i)
        CHECK(std::abs(series.analytic_p[i] - series.parameter[i] / 12.0) < kExactTol);
}

TEST_CASE("visibility damping", "[counting]") {
    auto s = three_box(ThreeBoxVariant::Intro);
    CHECK(errc_of([&] { apply_visibility(s, 1.5); }) == Errc::InvalidVisibility);

    // V = 1 reproduces the coherent probabilities exactly
    auto v1 = apply_visibility(s, 1.0);
    for (double t : {0.0, 0.5, 1.0})
        CHECK(scenario_loss_probability(v1, {0}, t) == scenario_loss_probability(s, {0}, t));

    // V = 0 kills interference: bare postselection becomes the classical sum
    auto v0 = apply_visibility(s, 0.0);
    CHECK(std::abs(scenario_loss_probability(v0, {}, 1.0) - 1.0 / 3.0) < kExactTol);

    // imperfect visibility degrades the negation: the both-lossy curve tilts
    auto v95 = apply_visibility(s, 0.95);
    const double at0 = scenario_loss_probability(v95, {0, 1}, 0.0);
    const double at1 = scenario_loss_probability(v95, {0, 1}, 1.0);
    CHECK(std::abs(at0 - 1.0 / 9.0) < kExactTol);
    CHECK(std::abs(at1 - 1.1 / 9.0) < kExactTol);
    CHECK(at0 < at1);
}

TEST_CASE("csv formats are stable", "[counting]") {
    auto s = three_box(ThreeBoxVariant::Intro);
    RunConfig cfg{1000, 7, std::nullopt};
    const double grid[] = {0.0, 0.5, 1.0};
    CountSeries series = sweep_loss(s, {"1", "2"}, grid, cfg);

    std::ostringstream loss;
    write_loss_csv(loss, series);
    const std::string expected_loss =
        "setting,T,analytic_p,counts,trials,seed\n"
        "loss on paths 1,2,0,0.111111111111," + std::to_string(series.counts[0]) + ",1000,7\n"
        "loss on paths 1,2,0.5,0.111111111111," + std::to_string(series.counts[1]) + ",1000,7\n"
        "loss on paths 1,2,1,0.111111111111," + std::to_string(series.counts[2]) + ",1000,7\n";
    CHECK(loss.str() == expected_loss);

    std::ostringstream loss2;
    write_loss_csv(loss2, series, true);
    CHECK(loss2.str().find("seed,loss\n") != std::string::npos);
    CHECK(loss2.str().find(",1000,7,0.5\n") != std::string::npos);

    std::ostringstream pointer;
    const PointerSample samples[] = {{0.5, 0.25, -0.75}, {1.0, 0.2, 0.2}};
    write_pointer_csv(pointer, samples);
    CHECK(pointer.str() ==
          "G,P_plus,R\n"
          "0.5,0.25,-0.75\n"
          "1,0.2,0.2\n");
}

TEST_CASE("sampled counts are frozen for the default seed", "[counting]") {
    // regression pin: RNG stream layout must not drift between releases
    RunConfig cfg{1000, 7, std::nullopt};
    const double grid[] = {0.0, 0.5, 1.0};
    auto s = three_box(ThreeBoxVariant::Intro);
    CountSeries series = sweep_loss(s, {"1"}, grid, cfg);
    CHECK(series.counts[0] == 0);  // p = 0 exactly
    // values below pinned from the first release of the generator
    CHECK(series.counts[1] == 59);   // p = 1/18
    CHECK(series.counts[2] == 106);  // p = 1/9
}
