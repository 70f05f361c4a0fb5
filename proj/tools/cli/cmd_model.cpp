#include <filesystem>
#include <unordered_map>

#include "bridgerank/error.hpp"
#include "bridgerank/params_io.hpp"
#include "bridgerank/status.hpp"
#include "bridgerank/tsv_io.hpp"
#include "bridgerank/util/tsv.hpp"
#include "cli.hpp"

namespace bridgerank::cli {

namespace {

const json* train_section(const json& file) {
    if (file.is_null()) return nullptr;
    return file.contains("train") ? &file.at("train") : &file;
}

// ---------------------------------------------------------------- train

struct TrainOpts {
    std::string ratings, out;
    TrainFlags flags;
};

void run_train(const TrainOpts& o, Context& ctx) {
    RunManifest m("train");
    m.add_input("ratings", o.ratings);
    json file;
    if (!o.flags.config_path.empty()) {
        m.add_input("config", o.flags.config_path);
        file = read_json_file(o.flags.config_path);
    }
    const auto cfg = resolve_train_config(o.flags, train_section(file), ctx.threads);
    const auto ds = load_ratings_tsv(o.ratings);
    const auto params = train(ds, cfg);

    ensure_out_dir(o.out);
    write_model(o.out, ds, params, cfg);
    m.config() = train_config_json(cfg);
    m.set_seed(cfg.seed);
    m.set_threads(cfg.threads);
    m.write(o.out);
    ctx.out << "trained on " << ds.size() << " ratings; reconstruction error "
            << util::format_double(reconstruction_error(params, ds)) << '\n';
}

// ---------------------------------------------------------------- tune

struct TuneOpts {
    std::string ratings, out, grid = "1e-5,2.5e-5,1e-4,1e-3,1e-2,1e-1,1";
    TrainFlags flags;
};

void run_tune(const TuneOpts& o, Context& ctx) {
    RunManifest m("tune");
    m.add_input("ratings", o.ratings);
    json file;
    if (!o.flags.config_path.empty()) {
        m.add_input("config", o.flags.config_path);
        file = read_json_file(o.flags.config_path);
    }
    const auto cfg = resolve_train_config(o.flags, train_section(file), ctx.threads);
    const auto grid = parse_grid(o.grid);
    const auto ds = load_ratings_tsv(o.ratings);
    const auto sweep = tune_lambda(ds, grid, cfg);

    ensure_out_dir(o.out);
    {
        auto out = util::open_output(out_path(o.out, "lambda_sweep.csv"));
        out << "lambda,holdout_error,train_error\n";
        for (const auto& row : sweep.table)
            out << util::format_double(row.lambda) << ',' << util::format_double(row.holdout_error) << ','
                << util::format_double(row.train_error) << '\n';
    }
    util::open_output(out_path(o.out, "tune.json")) << json{{"best_lambda", sweep.best_lambda}}.dump(2) << '\n';
    auto echo = train_config_json(cfg);
    echo["grid"] = grid;
    m.config() = echo;
    m.set_seed(cfg.seed);
    m.set_threads(cfg.threads);
    m.write(o.out);
    ctx.out << "best lambda " << util::format_double(sweep.best_lambda) << '\n';
}

// ---------------------------------------------------------------- status

struct StatusOpts {
    std::string params, thresholds = "0.180:-0.159", derive_from, out;
    double coverage = 0.9;
};

StatusThresholds parse_thresholds(const std::string& text) {
    const auto parts = util::split(text, ':');
    if (parts.size() != 2) throw ValidationError("thresholds must look like HELPFUL_MIN:NOT_HELPFUL_MAX");
    StatusThresholds t{util::parse_double(parts[0]), util::parse_double(parts[1])};
    t.validate();
    return t;
}

// Accepts either `note_id  status` or a notes TSV (disclosed_status column).
DisclosedStatuses read_disclosed(const std::string& path, const std::vector<std::string>& note_ids) {
    const auto table = read_table(path);
    const auto id_col = table.column("note_id", path);
    std::size_t status_col = 0;
    bool found = false;
    for (const char* name : {"status", "disclosed_status"})
        for (std::size_t i = 0; i < table.header.size() && !found; ++i)
            if (table.header[i] == name) status_col = i, found = true;
    if (!found) throw ValidationError(path + ": needs a status or disclosed_status column");

    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t n = 0; n < note_ids.size(); ++n) index.emplace(note_ids[n], n);
    DisclosedStatuses out;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        if (row[status_col].empty()) continue;
        const auto it = index.find(row[id_col]);
        if (it == index.end()) continue;
        const auto status = status_from_token(row[status_col]);
        if (!status) throw ParseError(path, i + 2, "unknown status '" + row[status_col] + "'");
        out[it->second] = *status;
    }
    return out;
}

void run_status(const StatusOpts& o, Context& ctx) {
    RunManifest m("status");
    m.add_input("params", o.params);
    const auto model = read_model(o.params);
    const auto& p = model.params;

    StatusThresholds t;
    json echo;
    json summary = json::object();
    if (!o.derive_from.empty()) {
        m.add_input("disclosed", o.derive_from);
        const auto disclosed = read_disclosed(o.derive_from, model.note_ids);
        t = derive_thresholds(p, disclosed, o.coverage);
        const auto auc = status_auc(p, disclosed);
        echo = {{"derive_from", o.derive_from}, {"coverage", o.coverage}};
        summary["disclosed_notes"] = disclosed.size();
        summary["auc_helpful"] = auc.helpful;
        summary["auc_not_helpful"] = auc.not_helpful;
    } else {
        t = parse_thresholds(o.thresholds);
        echo = {{"thresholds", o.thresholds}};
    }
    summary["helpful_min_beta"] = t.helpful_min_beta;
    summary["not_helpful_max_beta"] = t.not_helpful_max_beta;

    ensure_out_dir(o.out);
    std::map<std::string, std::size_t> counts;
    {
        auto out = util::open_output(out_path(o.out, "status.tsv"));
        out << "note_id\tbeta_n\ttheta_n\tstatus\n";
        for (std::size_t n = 0; n < model.note_ids.size(); ++n) {
            const auto s = std::string(to_token(assign_status(p.beta_n[n], t)));
            ++counts[s];
            out << model.note_ids[n] << '\t' << util::format_double(p.beta_n[n]) << '\t'
                << util::format_double(p.theta_n[n]) << '\t' << s << '\n';
        }
    }
    summary["counts"] = counts;
    util::open_output(out_path(o.out, "thresholds.json")) << summary.dump(2) << '\n';
    m.config() = echo;
    m.write(o.out);
    for (const auto& [s, c] : counts) ctx.out << s << '\t' << c << '\n';
}

}  // namespace

void register_model(CLI::App& app, Registry& reg, Context& ctx) {
    {
        auto o = std::make_shared<TrainOpts>();
        auto* sub = app.add_subcommand("train", "Fit the matrix-factorization model");
        sub->add_option("--ratings", o->ratings, "Ratings TSV")->required();
        add_train_flags(sub, o->flags);
        sub->add_option("--out", o->out, "Output directory (raters.tsv, notes.tsv, model.json)")->required();
        reg.add(sub, [o, &ctx] { run_train(*o, ctx); });
    }
    {
        auto o = std::make_shared<TuneOpts>();
        auto* sub = app.add_subcommand("tune", "Sweep lambda and report holdout reconstruction error");
        sub->add_option("--ratings", o->ratings, "Ratings TSV")->required();
        sub->add_option("--grid", o->grid, "Comma-separated lambda values")->capture_default_str();
        add_train_flags(sub, o->flags);
        sub->add_option("--out", o->out, "Output directory")->required();
        reg.add(sub, [o, &ctx] { run_tune(*o, ctx); });
    }
    {
        auto o = std::make_shared<StatusOpts>();
        auto* sub = app.add_subcommand("status", "Resolve note statuses from trained parameters");
        sub->add_option("--params", o->params, "Model directory written by train")->required();
        auto* th = sub->add_option("--thresholds", o->thresholds, "HELPFUL_MIN:NOT_HELPFUL_MAX on beta_n")
                       ->capture_default_str();
        auto* dv = sub->add_option("--derive-from", o->derive_from, "Disclosed statuses to derive thresholds from");
        th->excludes(dv);
        sub->add_option("--coverage", o->coverage, "Share of disclosed notes each threshold must cover")
            ->capture_default_str();
        sub->add_option("--out", o->out, "Output directory")->required();
        reg.add(sub, [o, &ctx] { run_status(*o, ctx); });
    }
}

}  // namespace bridgerank::cli
