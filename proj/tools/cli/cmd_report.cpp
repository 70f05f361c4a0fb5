#include <filesystem>
#include <unordered_map>

#include "bridgerank/analysis.hpp"
#include "bridgerank/country.hpp"
#include "bridgerank/error.hpp"
#include "bridgerank/params_io.hpp"
#include "bridgerank/status.hpp"
#include "bridgerank/tsv_io.hpp"
#include "bridgerank/util/tsv.hpp"
#include "cli.hpp"

namespace bridgerank::cli {

namespace {

namespace fs = std::filesystem;

struct ReportOpts {
    std::string config, ratings, notes, truth, rules, thresholds, out;
    TrainFlags flags;
};

struct SummaryRow {
    std::string scope, metric;
    double value;
};

// Flag value if given, else the config value resolved against the config's directory.
std::string pick_path(const std::string& flag, const json& file, const char* key, const std::string& base) {
    if (!flag.empty()) return flag;
    if (!file.contains(key)) return {};
    const fs::path p = file.at(key).get<std::string>();
    return p.is_absolute() || base.empty() ? p.string() : (fs::path(base) / p).string();
}

void add_fractions(std::vector<SummaryRow>& rows, const std::string& scope, const std::vector<NoteStatus>& statuses) {
    const double n = static_cast<double>(statuses.size());
    auto share = [&](NoteStatus s) {
        return n > 0 ? static_cast<double>(std::count(statuses.begin(), statuses.end(), s)) / n : 0.0;
    };
    rows.push_back({scope, "notes", n});
    rows.push_back({scope, "helpful_fraction", share(NoteStatus::Helpful)});
    rows.push_back({scope, "not_helpful_fraction", share(NoteStatus::NotHelpful)});
    rows.push_back({scope, "needs_more_ratings_fraction", share(NoteStatus::NeedsMoreRatings)});
}

void add_truth_metrics(std::vector<SummaryRow>& rows, const std::string& path, const RatingsDataset& ds,
                       const ModelParams& p) {
    const auto t = read_table(path);
    const auto type = t.column("entity_type", path), id = t.column("id", path), label = t.column("label", path);
    std::vector<double> scores;
    std::vector<int> consensus;
    std::size_t agree = 0, raters = 0;
    for (const auto& row : t.rows) {
        if (row[type] == "note") {
            const auto n = ds.find_note(row[id]);
            if (n < 0) continue;
            scores.push_back(p.beta_n[static_cast<std::size_t>(n)]);
            consensus.push_back(row[label] == "CONSENSUS" ? 1 : 0);
        } else if (row[type] == "rater") {
            const auto r = ds.find_rater(row[id]);
            if (r < 0) continue;
            const int side = row[label] == "+1" ? 1 : -1;
            agree += (p.theta_r[static_cast<std::size_t>(r)] > 0 ? 1 : -1) == side;
            ++raters;
        }
    }
    if (std::count(consensus.begin(), consensus.end(), 1) > 0 && std::count(consensus.begin(), consensus.end(), 0) > 0)
        rows.push_back({"all", "auc_consensus_vs_polarized", auc_roc(scores, consensus)});
    if (raters > 0) {
        const double frac = static_cast<double>(agree) / static_cast<double>(raters);
        rows.push_back({"all", "theta_sign_agreement", std::max(frac, 1.0 - frac)});
    }
}

void run_report(const ReportOpts& o, Context& ctx) {
    RunManifest m("report");
    json file = json::object();
    std::string base;
    if (!o.config.empty()) {
        m.add_input("config", o.config);
        file = read_json_file(o.config);
        if (!file.is_object()) throw ValidationError(o.config + ": report config must be a JSON object");
        base = fs::path(o.config).parent_path().string();
    }
    const auto ratings_path = pick_path(o.ratings, file, "ratings", base);
    const auto notes_path = pick_path(o.notes, file, "notes", base);
    const auto truth_path = pick_path(o.truth, file, "truth", base);
    const auto rules_path = pick_path(o.rules, file, "rules", base);
    if (ratings_path.empty()) throw ValidationError("report needs ratings (--ratings or config \"ratings\")");
    m.add_input("ratings", ratings_path);
    for (const auto& [role, path] : {std::pair{"notes", notes_path}, {"truth", truth_path}, {"rules", rules_path}})
        if (!path.empty()) m.add_input(role, path);
    if (!rules_path.empty() && notes_path.empty()) throw ValidationError("country splits need notes as well as rules");

    const json* train_file = file.contains("train") ? &file.at("train") : nullptr;
    const auto cfg = resolve_train_config(o.flags, train_file, ctx.threads);
    StatusThresholds th;
    std::string th_text = o.thresholds;
    if (th_text.empty() && file.contains("thresholds")) th_text = file.at("thresholds").get<std::string>();
    if (!th_text.empty()) {
        const auto parts = util::split(th_text, ':');
        if (parts.size() != 2) throw ValidationError("thresholds must look like HELPFUL_MIN:NOT_HELPFUL_MAX");
        th = {util::parse_double(parts[0]), util::parse_double(parts[1])};
    }
    th.validate();

    const auto ds = load_ratings_tsv(ratings_path);
    const auto params = train(ds, cfg);
    ensure_out_dir(o.out);
    write_model(out_path(o.out, "model"), ds, params, cfg);

    std::vector<NoteStatus> statuses(ds.note_count());
    {
        auto out = util::open_output(out_path(o.out, "status.tsv"));
        out << "note_id\tbeta_n\ttheta_n\tstatus\n";
        for (std::size_t n = 0; n < ds.note_count(); ++n) {
            statuses[n] = assign_status(params.beta_n[n], th);
            out << ds.note_ids()[n] << '\t' << util::format_double(params.beta_n[n]) << '\t'
                << util::format_double(params.theta_n[n]) << '\t' << to_token(statuses[n]) << '\n';
        }
    }

    std::vector<SummaryRow> rows;
    rows.push_back({"all", "ratings", static_cast<double>(ds.size())});
    rows.push_back({"all", "raters", static_cast<double>(ds.rater_count())});
    add_fractions(rows, "all", statuses);

    std::vector<NoteMeta> notes;
    if (!notes_path.empty()) {
        notes = load_notes_tsv(notes_path);
        DisclosedStatuses disclosed;
        for (const auto& meta : notes) {
            const auto n = ds.find_note(meta.note_id);
            if (n >= 0 && meta.disclosed_status) disclosed[static_cast<std::size_t>(n)] = *meta.disclosed_status;
        }
        std::set<NoteStatus> kinds;
        for (const auto& [n, s] : disclosed) kinds.insert(s);
        if (kinds.size() > 1) {
            const auto auc = status_auc(params, disclosed);
            if (kinds.contains(NoteStatus::Helpful)) rows.push_back({"all", "auc_disclosed_helpful", auc.helpful});
            if (kinds.contains(NoteStatus::NotHelpful))
                rows.push_back({"all", "auc_disclosed_not_helpful", auc.not_helpful});
        }
    }
    if (!truth_path.empty()) add_truth_metrics(rows, truth_path, ds, params);

    json seg_echo = nullptr;
    if (!rules_path.empty()) {
        const std::size_t min_labeled = file.value("min_labeled", std::size_t{5});
        const std::size_t max_iters = file.value("max_iters", std::size_t{20});
        const auto a = segment_countries(ds, notes, CountryRules::load_json(rules_path), min_labeled, max_iters);
        write_assignment_tsv(out_path(o.out, "assignment.tsv"), a);
        std::map<std::string, std::vector<NoteStatus>> by_country;
        for (std::size_t n = 0; n < ds.note_count(); ++n) {
            const auto it = a.note_country.find(ds.note_ids()[n]);
            by_country[it == a.note_country.end() ? "unassigned" : it->second.country].push_back(statuses[n]);
        }
        for (const auto& [country, s] : by_country) add_fractions(rows, country, s);
        seg_echo = {{"min_labeled", min_labeled}, {"max_iters", max_iters}};
    }

    {
        auto out = util::open_output(out_path(o.out, "summary.tsv"));
        out << "scope\tmetric\tvalue\n";
        for (const auto& r : rows) {
            out << r.scope << '\t' << r.metric << '\t' << util::format_double(r.value) << '\n';
            ctx.out << r.scope << '\t' << r.metric << '\t' << util::format_double(r.value) << '\n';
        }
    }
    m.config() = {{"train", train_config_json(cfg)},
                  {"thresholds", {{"helpful_min_beta", th.helpful_min_beta}, {"not_helpful_max_beta", th.not_helpful_max_beta}}},
                  {"segment", seg_echo}};
    m.set_seed(cfg.seed);
    m.set_threads(cfg.threads);
    m.write(o.out);
}

}  // namespace

void register_report(CLI::App& app, Registry& reg, Context& ctx) {
    auto o = std::make_shared<ReportOpts>();
    auto* sub = app.add_subcommand("report", "Train, resolve statuses and summarize in one run");
    sub->add_option("--config", o->config, "Pipeline JSON (ratings, notes, truth, rules, train, thresholds)");
    sub->add_option("--ratings", o->ratings, "Ratings TSV");
    sub->add_option("--notes", o->notes, "Notes TSV (disclosed statuses, country splits)");
    sub->add_option("--truth", o->truth, "Planted truth TSV from simulate");
    sub->add_option("--rules", o->rules, "Country rules JSON for per-country splits");
    sub->add_option("--thresholds", o->thresholds, "HELPFUL_MIN:NOT_HELPFUL_MAX (default 0.180:-0.159)");
    add_train_flags(sub, o->flags, false);
    sub->add_option("--out", o->out, "Output directory")->required();
    reg.add(sub, [o, &ctx] { run_report(*o, ctx); });
}

}  // namespace bridgerank::cli
