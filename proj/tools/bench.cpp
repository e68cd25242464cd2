// Times each OpenMP kernel against its serial reference on synthetic data
// and checks that the two produce identical results.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#include "sailfit/analysis.hpp"
#include "sailfit/boosting.hpp"
#include "sailfit/evaluation.hpp"
#include "sailfit/ingest.hpp"

using namespace sailfit;
using Clock = std::chrono::steady_clock;

namespace {

struct BenchResult {
    double serial_ms = 0;
    double parallel_ms = 0;
    bool identical = false;
};

template <typename F>
double time_ms(F&& fn, int reps) {
    auto t0 = Clock::now();
    for (int r = 0; r < reps; ++r) fn();
    auto t1 = Clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void print_row(const std::string& name, const BenchResult& r) {
    std::printf("%-28s %10.2f ms %10.2f ms %8.2fx   %s\n", name.c_str(), r.serial_ms,
                r.parallel_ms, r.serial_ms / r.parallel_ms,
                r.identical ? "identical" : "MISMATCH");
}

} // namespace

int main(int argc, char** argv) {
    std::size_t n = 200000;
    if (argc > 1) n = static_cast<std::size_t>(std::stoul(argv[1]));

    SyntheticSpec spec;
    spec.n_rows = n;
    spec.true_coefficients = {{"length_ft", 3000}, {"beam_ft", 1500},    {"draft_ft", -2500},
                              {"displacement_lb", 2}, {"sail_area_sqft", 40}, {"hull", 60000},
                              {"year", 800},       {"waterline_ft", 900}};
    spec.true_intercept = 50000;
    spec.noise_std = 20000;
    spec.seed = 7;
    Records records = generate_synthetic(spec);
    DesignMatrix d = build_design_matrix(records, technical_feature_names(),
                                         RegionScheme::ThreeRegion, true, false);

    std::printf("%zu rows, %zu features\n", d.X.values.rows, d.X.values.cols);
    std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

    {
        BenchResult r;
        double serial_v = 0, parallel_v = 0;
        r.serial_ms = time_ms([&] { serial_v = mse(d.y, TargetVector(n, 0.0), ExecMode::Serial); }, 5);
        r.parallel_ms =
            time_ms([&] { parallel_v = mse(d.y, TargetVector(n, 0.0), ExecMode::Parallel); }, 5);
        r.identical = serial_v == parallel_v;
        print_row("mse reduction", r);
    }

    {
        BenchResult r;
        std::vector<double> beta(d.X.values.cols, 100.0), g1, g2;
        double b1 = 0, b2 = 0;
        r.serial_ms = time_ms(
            [&] { linear_gradient(d.X.values, d.y, beta, 0.0, 0.0, g1, b1, ExecMode::Serial); }, 5);
        r.parallel_ms = time_ms(
            [&] { linear_gradient(d.X.values, d.y, beta, 0.0, 0.0, g2, b2, ExecMode::Parallel); },
            5);
        r.identical = g1 == g2 && b1 == b2;
        print_row("linear gradient", r);
    }

    {
        BenchResult r;
        TreeConfig cfg;
        cfg.max_leaves = 16;
        cfg.max_depth = 6;
        RegressionTree t_serial, t_parallel;
        r.serial_ms =
            time_ms([&] { t_serial = fit_tree(d.X.values, d.y, cfg, ExecMode::Serial); }, 3);
        r.parallel_ms =
            time_ms([&] { t_parallel = fit_tree(d.X.values, d.y, cfg, ExecMode::Parallel); }, 3);
        r.identical = serialize_tree(t_serial) == serialize_tree(t_parallel);
        print_row("tree split search", r);
    }

    {
        BoostConfig bc;
        bc.n_iters = 20;
        auto [ens, trace] = fit_boosted(d.X, d.y, bc);
        (void)trace;
        BenchResult r;
        TargetVector p1, p2;
        r.serial_ms = time_ms([&] { p1 = predict_boosted(ens, d.X, ExecMode::Serial); }, 3);
        r.parallel_ms = time_ms([&] { p2 = predict_boosted(ens, d.X, ExecMode::Parallel); }, 3);
        r.identical = p1 == p2;
        print_row("boosted predict (20 trees)", r);
    }

    {
        BenchResult r;
        std::vector<CorrelationResult> c1, c2;
        r.serial_ms = time_ms([&] { c1 = correlate_features(records, ExecMode::Serial); }, 3);
        r.parallel_ms = time_ms([&] { c2 = correlate_features(records, ExecMode::Parallel); }, 3);
        r.identical = c1.size() == c2.size();
        for (std::size_t i = 0; i < c1.size() && r.identical; ++i)
            r.identical = c1[i].pearson_r == c2[i].pearson_r &&
                          c1[i].trend_slope == c2[i].trend_slope;
        print_row("feature correlations", r);
    }

    return 0;
}
