#include "sailfit/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <set>

#include "sailfit/analysis.hpp"
#include "sailfit/error.hpp"
#include "sailfit/evaluation.hpp"
#include "sailfit/svg.hpp"
#include "sailfit/textio.hpp"

namespace fs = std::filesystem;

namespace sailfit {

namespace {

const char* kUsage =
    "usage: sailfit <clean|synth|fit|compare|report> [flags]\n"
    "\n"
    "flags:\n"
    "  --input PATH        listing CSV\n"
    "  --output-dir PATH   where outputs are written\n"
    "  --seed N            top-level seed (default 42); split uses seed+1,\n"
    "                      synthesis seed+2, counterfactual sampling seed+3\n"
    "  --model NAME        ols|gd|adadelta|gbr (repeatable for compare)\n"
    "  --regions SCHEME    three|four; adds region dummies to the design\n"
    "  --standardize       z-score continuous features\n"
    "  --config FILE       flat key=value config; flags win over file values\n";

// Everything a command needs, merged from config file then flag overrides.
struct CliConfig {
    std::string command;
    std::string input;
    std::string output_dir;
    std::uint64_t seed = 42;
    std::vector<std::string> models;
    std::optional<RegionScheme> regions;
    bool standardize_flagged = false;
    std::size_t sample_size = 3000;
    KvMap kv;  // raw config values for hyperparameter lookup
};

[[noreturn]] void usage_error(const std::string& message) {
    throw Error(Err::Usage, message + "\n" + kUsage);
}

CliConfig parse_args(int argc, const char* const* argv) {
    if (argc < 2) usage_error("missing subcommand");
    CliConfig cfg;
    cfg.command = argv[1];
    static const std::set<std::string> commands = {"clean", "synth", "fit", "compare",
                                                   "report"};
    if (!commands.count(cfg.command)) usage_error("unknown subcommand '" + cfg.command + "'");

    // first pass: pull --config so flags can override it
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> flags;
    for (int i = 2; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--standardize") {
            flags.emplace_back("standardize", "1");
            continue;
        }
        if (arg.rfind("--", 0) != 0) usage_error("unexpected argument '" + arg + "'");
        if (i + 1 >= argc) usage_error("flag " + arg + " needs a value");
        flags.emplace_back(arg.substr(2), argv[++i]);
    }
    std::vector<std::string> flag_models;
    for (const auto& [key, value] : flags) {
        if (key == "config") config_path = value;
        if (key == "model") flag_models.push_back(value);
    }
    if (!config_path.empty()) cfg.kv = read_kv_file(config_path);
    for (const auto& [key, value] : flags) {
        if (key == "config" || key == "model") continue;
        cfg.kv[key == "output-dir" ? "output_dir" : key] = value;
    }

    if (cfg.kv.count("input")) cfg.input = cfg.kv["input"];
    if (cfg.kv.count("output_dir")) cfg.output_dir = cfg.kv["output_dir"];
    if (cfg.kv.count("seed")) {
        auto s = parse_u64(cfg.kv["seed"]);
        if (!s) usage_error("--seed must be an unsigned integer");
        cfg.seed = *s;
    }
    if (cfg.kv.count("sample_size")) {
        auto s = parse_u64(cfg.kv["sample_size"]);
        if (!s) usage_error("sample_size must be an unsigned integer");
        cfg.sample_size = static_cast<std::size_t>(*s);
    }
    if (!flag_models.empty()) {
        cfg.models = flag_models;  // flags win over any config list
    } else if (cfg.kv.count("model")) {
        std::string cur;
        for (char c : cfg.kv["model"] + ",") {
            if (c == ',') {
                if (!cur.empty()) cfg.models.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
    }
    if (cfg.kv.count("regions")) {
        const std::string& r = cfg.kv["regions"];
        if (r == "three")
            cfg.regions = RegionScheme::ThreeRegion;
        else if (r == "four")
            cfg.regions = RegionScheme::FourRegionHK;
        else
            usage_error("--regions must be 'three' or 'four'");
    }
    cfg.standardize_flagged = cfg.kv.count("standardize") && cfg.kv["standardize"] == "1";
    return cfg;
}

double kv_double(const KvMap& kv, const std::string& key, double fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    auto v = parse_double(it->second);
    if (!v) throw Error(Err::Usage, "config key " + key + " is not a number");
    return *v;
}

std::size_t kv_size(const KvMap& kv, const std::string& key, std::size_t fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    auto v = parse_u64(it->second);
    if (!v) throw Error(Err::Usage, "config key " + key + " is not an unsigned integer");
    return static_cast<std::size_t>(*v);
}

ModelSpec spec_from_config(const CliConfig& cfg, const std::string& family_name_str) {
    auto family = parse_family(family_name_str);
    if (!family) usage_error("unknown model family '" + family_name_str + "'");
    ModelSpec spec = default_spec(*family);
    if (cfg.regions) {
        spec.include_region = true;
        spec.region_scheme = *cfg.regions;
    }
    if (cfg.standardize_flagged) spec.standardize = true;
    spec.gd.learning_rate = kv_double(cfg.kv, "gd.learning_rate", spec.gd.learning_rate);
    spec.gd.l2_lambda = kv_double(cfg.kv, "gd.l2_lambda", spec.gd.l2_lambda);
    spec.gd.max_iters = kv_size(cfg.kv, "gd.max_iters", spec.gd.max_iters);
    spec.gd.tol = kv_double(cfg.kv, "gd.tol", spec.gd.tol);
    spec.adadelta.rho = kv_double(cfg.kv, "adadelta.rho", spec.adadelta.rho);
    spec.adadelta.epsilon = kv_double(cfg.kv, "adadelta.epsilon", spec.adadelta.epsilon);
    spec.adadelta.l2_lambda = kv_double(cfg.kv, "adadelta.l2_lambda", spec.adadelta.l2_lambda);
    spec.adadelta.max_iters = kv_size(cfg.kv, "adadelta.max_iters", spec.adadelta.max_iters);
    spec.adadelta.tol = kv_double(cfg.kv, "adadelta.tol", spec.adadelta.tol);
    spec.boost.n_iters = kv_size(cfg.kv, "gbr.n_iters", spec.boost.n_iters);
    spec.boost.learning_rate = kv_double(cfg.kv, "gbr.learning_rate", spec.boost.learning_rate);
    spec.boost.l2_lambda = kv_double(cfg.kv, "gbr.l2_lambda", spec.boost.l2_lambda);
    spec.boost.tol = kv_double(cfg.kv, "gbr.tol", spec.boost.tol);
    spec.boost.tree_config.max_leaves =
        kv_size(cfg.kv, "gbr.max_leaves", spec.boost.tree_config.max_leaves);
    spec.boost.tree_config.max_depth =
        kv_size(cfg.kv, "gbr.max_depth", spec.boost.tree_config.max_depth);
    spec.boost.tree_config.min_samples_leaf =
        kv_size(cfg.kv, "gbr.min_samples_leaf", spec.boost.tree_config.min_samples_leaf);
    return spec;
}

void ensure_output_dir(const CliConfig& cfg) {
    if (cfg.output_dir.empty()) usage_error("--output-dir is required");
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec) throw Error(Err::IoError, "cannot create " + cfg.output_dir);
}

std::string out_path(const CliConfig& cfg, const std::string& name) {
    return (fs::path(cfg.output_dir) / name).string();
}

Records load_input(const CliConfig& cfg, CleaningReport* report = nullptr) {
    if (cfg.input.empty()) usage_error("--input is required");
    auto [records, rep] = load_csv(cfg.input);
    if (report) *report = rep;
    return records;
}

std::string cleaning_report_text(const CleaningReport& rep) {
    std::string out;
    out += "rows_in=" + std::to_string(rep.rows_in) + "\n";
    out += "dropped_missing_region=" + std::to_string(rep.dropped_missing_region) + "\n";
    out += "dropped_missing_technical=" + std::to_string(rep.dropped_missing_technical) + "\n";
    out += "dropped_malformed=" + std::to_string(rep.dropped_malformed) + "\n";
    out += "rows_out=" + std::to_string(rep.rows_out) + "\n";
    return out;
}

int cmd_clean(const CliConfig& cfg) {
    ensure_output_dir(cfg);
    CleaningReport report;
    Records records = load_input(cfg, &report);
    write_records_csv(out_path(cfg, "cleaned.csv"), records);
    std::cout << cleaning_report_text(report);
    return 0;
}

int cmd_synth(const CliConfig& cfg) {
    ensure_output_dir(cfg);
    SyntheticSpec spec;
    spec.n_rows = kv_size(cfg.kv, "synth.n_rows", 1000);
    spec.true_intercept = kv_double(cfg.kv, "synth.intercept", 250000.0);
    spec.noise_std = kv_double(cfg.kv, "synth.noise_std", 0.0);
    spec.seed = cfg.seed + 2;
    spec.include_gdp = kv_size(cfg.kv, "synth.include_gdp", 0) == 1;
    for (const auto& [key, value] : cfg.kv) {
        if (key.rfind("synth.coef.", 0) == 0) {
            auto v = parse_double(value);
            if (!v) throw Error(Err::Usage, "config key " + key + " is not a number");
            spec.true_coefficients[key.substr(11)] = *v;
        } else if (key.rfind("synth.region_effect.", 0) == 0) {
            auto region = parse_region(key.substr(20));
            if (!region)
                throw Error(Err::Usage, "config key " + key + " names an unknown region");
            auto v = parse_double(value);
            if (!v) throw Error(Err::Usage, "config key " + key + " is not a number");
            spec.region_effects[*region] = *v;
        }
    }
    Records records = generate_synthetic(spec);
    write_records_csv(out_path(cfg, "synthetic.csv"), records);
    std::cout << "wrote " << records.size() << " rows\n";
    return 0;
}

FigureSpec residual_figure(const EvalReport& report, const TargetVector& predicted,
                           const std::string& path) {
    FigureSpec fig;
    fig.kind = FigureKind::Residual;
    fig.title = "Residuals: " + report.model_name + " (" + report.split_name + ")";
    fig.x_label = "predicted price (USD)";
    fig.y_label = "residual (USD)";
    Series s;
    s.name = report.model_name;
    for (std::size_t i = 0; i < predicted.size(); ++i)
        s.points.emplace_back(predicted[i], report.residuals[i]);
    fig.series.push_back(std::move(s));
    fig.output_path = path;
    return fig;
}

std::string trace_csv(const std::vector<double>& trace) {
    std::string out = "iteration,loss\n";
    for (std::size_t i = 0; i < trace.size(); ++i)
        out += std::to_string(i) + "," + fmt_double(trace[i]) + "\n";
    return out;
}

int cmd_fit(const CliConfig& cfg) {
    ensure_output_dir(cfg);
    if (cfg.models.size() != 1) usage_error("fit needs exactly one --model");
    Records records = load_input(cfg);
    ModelSpec spec = spec_from_config(cfg, cfg.models[0]);

    std::vector<std::string> ids;
    for (const auto& r : records) ids.push_back(r.id);
    SplitPlan plan = make_split(ids, cfg.seed + 1);

    Records train, test;
    {
        std::set<std::string> in_a(plan.half_a_ids.begin(), plan.half_a_ids.end());
        for (const auto& r : records) (in_a.count(r.id) ? train : test).push_back(r);
    }

    std::vector<double> trace;
    TrainedModel model = train_model(train, spec, ExecMode::Parallel, &trace);
    TargetVector yhat = predict_model(model, test);
    TargetVector y;
    for (const auto& r : test) y.push_back(r.listing_price);
    EvalReport report = make_eval_report(family_name(spec.family), "train_a_test_b", y, yhat);

    const std::string family = family_name(spec.family);
    std::string model_text = model.is_linear() ? save_linear_model(model.linear())
                                               : save_boosted(model.boosted());
    write_text_file(out_path(cfg, "model_" + family + ".txt"), model_text);
    write_text_file(out_path(cfg, "metrics.csv"), comparison_csv({report}));
    render_svg(residual_figure(report, yhat, out_path(cfg, "residuals_" + family + ".svg")));
    if (!trace.empty())
        write_text_file(out_path(cfg, "loss_" + family + ".csv"), trace_csv(trace));

    std::cout << comparison_csv({report});
    return 0;
}

int cmd_compare(const CliConfig& cfg) {
    ensure_output_dir(cfg);
    if (cfg.models.empty()) usage_error("compare needs at least one --model");
    Records records = load_input(cfg);

    std::vector<std::string> ids;
    for (const auto& r : records) ids.push_back(r.id);
    SplitPlan plan = make_split(ids, cfg.seed + 1);

    std::vector<EvalReport> rows;
    std::string swap_csv =
        "model,mse_forward,mse_backward,mae_forward,mae_backward,"
        "relative_mse_gap,relative_mae_gap,within_10pct\n";
    for (const auto& name : cfg.models) {
        ModelSpec spec = spec_from_config(cfg, name);
        SwapResult swap = run_swap(records, spec, plan);
        rows.push_back(swap.forward);
        rows.push_back(swap.backward);
        bool stable = swap.relative_mse_gap <= 0.10 && swap.relative_mae_gap <= 0.10;
        swap_csv += std::string(family_name(spec.family)) + "," +
                    fmt_double(swap.forward.mse) + "," + fmt_double(swap.backward.mse) + "," +
                    fmt_double(swap.forward.mae) + "," + fmt_double(swap.backward.mae) + "," +
                    fmt_double(swap.relative_mse_gap) + "," +
                    fmt_double(swap.relative_mae_gap) + "," + (stable ? "yes" : "no") + "\n";
        if (!stable)
            std::cout << "warning: " << family_name(spec.family)
                      << " swap gap exceeds 10%\n";
    }
    write_text_file(out_path(cfg, "comparison.csv"), comparison_csv(rows));
    write_text_file(out_path(cfg, "comparison.md"), comparison_markdown(rows));
    write_text_file(out_path(cfg, "swap_sensitivity.csv"), swap_csv);
    std::cout << comparison_markdown(rows);
    return 0;
}

FigureSpec correlation_figure(const Records& records, const CorrelationResult& corr,
                              const std::string& path) {
    FigureSpec fig;
    fig.title = "Price vs " + corr.feature;
    fig.x_label = corr.feature;
    fig.y_label = "listing price (USD)";
    fig.output_path = path;
    if (corr.feature == "hull") {
        fig.kind = FigureKind::Bar;
        double sum_mono = 0, sum_cat = 0;
        std::size_t n_mono = 0, n_cat = 0;
        for (const auto& r : records) {
            if (r.hull == Hull::Monohull) {
                sum_mono += r.listing_price;
                ++n_mono;
            } else {
                sum_cat += r.listing_price;
                ++n_cat;
            }
        }
        Series s;
        s.name = "mean price";
        if (n_mono) s.categories.emplace_back("monohull", sum_mono / n_mono);
        if (n_cat) s.categories.emplace_back("catamaran", sum_cat / n_cat);
        fig.series.push_back(std::move(s));
        return fig;
    }
    fig.kind = FigureKind::ScatterTrend;
    Series s;
    s.name = corr.feature;
    for (const auto& r : records) {
        double x;
        if (corr.feature == "length_ft") x = r.length_ft;
        else if (corr.feature == "year") x = r.year;
        else if (corr.feature == "waterline_ft") x = r.waterline_ft;
        else if (corr.feature == "beam_ft") x = r.beam_ft;
        else if (corr.feature == "draft_ft") x = r.draft_ft;
        else if (corr.feature == "displacement_lb") x = r.displacement_lb;
        else if (corr.feature == "sail_area_sqft") x = r.sail_area_sqft;
        else if (corr.feature == "gdp") x = r.gdp.value();
        else x = r.gdp_per_capita.value();
        s.points.emplace_back(x, r.listing_price);
    }
    fig.series.push_back(std::move(s));
    return fig;
}

FigureSpec counterfactual_figure(const std::vector<CounterfactualRow>& rows,
                                 const std::string& hull, const std::string& path) {
    FigureSpec fig;
    fig.kind = FigureKind::GroupedComparison;
    fig.title = "Hong Kong relabeling: " + hull + "s";
    fig.x_label = "sampled boat (sorted by original prediction)";
    fig.y_label = "predicted price (USD)";
    fig.output_path = path;

    std::vector<CounterfactualRow> sorted = rows;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        return a.pred_original < b.pred_original ||
               (a.pred_original == b.pred_original && a.id < b.id);
    });
    Series orig, hk;
    orig.name = "original region";
    hk.name = "relabeled to hong_kong";
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        orig.points.emplace_back(static_cast<double>(i), sorted[i].pred_original);
        hk.points.emplace_back(static_cast<double>(i), sorted[i].pred_hk);
    }
    fig.series.push_back(std::move(orig));
    fig.series.push_back(std::move(hk));
    return fig;
}

double mean_delta(const std::vector<CounterfactualRow>& rows) {
    if (rows.empty()) return 0;
    double s = 0;
    for (const auto& r : rows) s += r.delta;
    return s / static_cast<double>(rows.size());
}

int cmd_report(const CliConfig& cfg) {
    ensure_output_dir(cfg);
    Records records = load_input(cfg);
    RegionScheme scheme = cfg.regions.value_or(RegionScheme::ThreeRegion);

    if (scheme == RegionScheme::FourRegionHK) {
        bool any_hk = std::any_of(records.begin(), records.end(),
                                  [](const SailboatRecord& r) {
                                      return r.region == Region::HongKong;
                                  });
        if (!any_hk)
            throw Error(Err::SingleRegion,
                        "the 4-region report needs hong_kong rows but the input has none; "
                        "rerun with --regions three");
    }

    std::error_code ec;
    fs::create_directories(fs::path(cfg.output_dir) / "figures", ec);
    if (ec) throw Error(Err::IoError, "cannot create figures directory");

    // correlations + one figure per feature
    std::vector<CorrelationResult> corrs = correlate_features(records);
    write_text_file(out_path(cfg, "correlations.csv"), correlations_csv(corrs));
    for (const auto& c : corrs)
        render_svg(correlation_figure(records, c,
                                      out_path(cfg, "figures/corr_" + c.feature + ".svg")));

    // regional effects under an OLS fit
    RegionalEffects regional = fit_regional(records, ModelFamily::Ols, scheme);
    std::string effects_csv = "region,effect_usd\n";
    for (const auto& [region, effect] : regional.effects)
        effects_csv += std::string(region_name(region)) + "," + fmt_double(effect) + "\n";
    write_text_file(out_path(cfg, "regional_effects.csv"), effects_csv);

    // counterfactual under the 4-region scheme
    std::optional<CounterfactualResult> cf;
    if (scheme == RegionScheme::FourRegionHK) {
        cf = hk_counterfactual(regional.model, records, cfg.sample_size, cfg.seed + 3);
        write_text_file(out_path(cfg, "counterfactual.csv"), counterfactual_csv(*cf));
        render_svg(counterfactual_figure(cf->monohulls, "monohull",
                                         out_path(cfg, "figures/counterfactual_monohulls.svg")));
        render_svg(counterfactual_figure(cf->catamarans, "catamaran",
                                         out_path(cfg, "figures/counterfactual_catamarans.svg")));
    }

    // broker-style markdown
    std::string md = "# Sailboat listing price report\n\n";
    md += "Rows analyzed: " + std::to_string(records.size()) + "\n\n";
    md += "## Feature correlations\n\n";
    md += "| feature | pearson r | trend slope |\n|---|---|---|\n";
    for (const auto& c : corrs)
        md += "| " + c.feature + " | " + fmt_double(c.pearson_r) + " | " +
              fmt_double(c.trend_slope) + " |\n";
    md += "\n";
    for (const auto& c : corrs) {
        if (c.feature == "hull") {
            md += c.trend_slope >= 0
                      ? "Catamarans list higher than monohulls by about $" +
                            fmt_double(c.trend_slope) + " on average.\n"
                      : "Monohulls list higher than catamarans by about $" +
                            fmt_double(-c.trend_slope) + " on average.\n";
        } else if (c.feature == "draft_ft") {
            md += std::string("Draft is ") +
                  (c.pearson_r < 0 ? "negatively" : "positively") +
                  " correlated with listing price.\n";
        }
    }
    md += "\n";
    for (const auto& c : corrs)
        md += "![Price vs " + c.feature + "](figures/corr_" + c.feature + ".svg)\n";
    md += "\n## Regional effects (base: " +
          std::string(region_name(regional.base_region)) + ")\n\n";
    md += "| region | effect (USD) |\n|---|---|\n";
    for (const auto& [region, effect] : regional.effects)
        md += "| " + std::string(region_name(region)) + " | " + fmt_double(effect) + " |\n";
    if (cf) {
        md += "\n## Hong Kong relabeling counterfactual\n\n";
        md += "Sampled " + std::to_string(cf->monohulls.size() + cf->catamarans.size()) +
              " non-HK boats and relabeled each to hong_kong.\n\n";
        md += "| hull | boats | mean prediction shift (USD) |\n|---|---|---|\n";
        md += "| monohull | " + std::to_string(cf->monohulls.size()) + " | " +
              fmt_double(mean_delta(cf->monohulls)) + " |\n";
        md += "| catamaran | " + std::to_string(cf->catamarans.size()) + " | " +
              fmt_double(mean_delta(cf->catamarans)) + " |\n";
        md += "\n![monohulls](figures/counterfactual_monohulls.svg)\n";
        md += "![catamarans](figures/counterfactual_catamarans.svg)\n";
    }
    write_text_file(out_path(cfg, "report.md"), md);
    std::cout << "report written to " << out_path(cfg, "report.md") << "\n";
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    try {
        CliConfig cfg = parse_args(argc, argv);
        if (cfg.command == "clean") return cmd_clean(cfg);
        if (cfg.command == "synth") return cmd_synth(cfg);
        if (cfg.command == "fit") return cmd_fit(cfg);
        if (cfg.command == "compare") return cmd_compare(cfg);
        return cmd_report(cfg);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 70;
    }
}

} // namespace sailfit
