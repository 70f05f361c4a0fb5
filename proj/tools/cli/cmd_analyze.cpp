#include <algorithm>
#include <set>

#include "bridgerank/analysis.hpp"
#include "bridgerank/error.hpp"
#include "bridgerank/tsv_io.hpp"
#include "bridgerank/util/quantile.hpp"
#include "bridgerank/util/tsv.hpp"
#include "cli.hpp"

namespace bridgerank::cli {

namespace {

std::vector<int> label_column(const Table& t, const std::string& name, const std::string& source) {
    std::vector<int> out;
    for (double v : t.numbers(name, source)) {
        if (v != 0.0 && v != 1.0) throw ValidationError(source + ": labels in column " + name + " must be 0 or 1");
        out.push_back(v == 1.0 ? 1 : 0);
    }
    return out;
}

struct SeedFlag {
    std::uint64_t value = 0;
    CLI::Option* opt = nullptr;
    std::uint64_t resolve() const { return opt->count() ? value : env_seed(); }
};

void add_seed(CLI::App* sub, SeedFlag& s) {
    s.opt = sub->add_option("--seed", s.value, "Random seed (default: BRIDGERANK_SEED or 0)");
}

void finish(RunManifest& m, const std::string& out, const std::string& file, const json& result, Context& ctx) {
    ensure_out_dir(out);
    util::open_output(out_path(out, file)) << result.dump(2) << '\n';
    m.write(out);
    ctx.out << result.dump() << '\n';
}

// ---------------------------------------------------------------- auc

struct AucOpts {
    std::string input, score = "score", label = "label", out;
};

void run_auc(const AucOpts& o, Context& ctx) {
    RunManifest m("analyze auc");
    m.add_input("input", o.input);
    const auto t = read_table(o.input);
    const auto scores = t.numbers(o.score, o.input);
    const auto labels = label_column(t, o.label, o.input);
    const auto pos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
    m.config() = {{"score", o.score}, {"label", o.label}};
    finish(m, o.out, "auc.json",
           {{"auc", auc_roc(scores, labels)}, {"positives", pos}, {"negatives", labels.size() - pos}}, ctx);
}

// ---------------------------------------------------------------- corr

struct CorrOpts {
    std::string input, x, y, out;
    double r = 0, level = 0.95;
    std::size_t n = 0;
    CLI::Option *o_r = nullptr, *o_input = nullptr;
};

void run_corr(const CorrOpts& o, Context& ctx) {
    RunManifest m("analyze corr");
    json result;
    if (o.o_r->count()) {
        const auto ci = fisher_ci(o.r, o.n, o.level);
        result = {{"r", o.r}, {"n", o.n}, {"level", o.level}, {"ci_lo", ci.lo}, {"ci_hi", ci.hi}};
        m.config() = {{"r", o.r}, {"n", o.n}, {"level", o.level}};
    } else {
        if (o.input.empty() || o.x.empty() || o.y.empty())
            throw ValidationError("corr needs --input with --x and --y, or --r with --n");
        m.add_input("input", o.input);
        const auto t = read_table(o.input);
        const auto x = t.numbers(o.x, o.input), y = t.numbers(o.y, o.input);
        const double r = pearson(x, y);
        result = {{"pearson", r}, {"spearman", spearman(x, y)}, {"n", x.size()}, {"level", o.level}};
        if (x.size() > 3) {
            const auto ci = fisher_ci(r, x.size(), o.level);
            result["ci_lo"] = ci.lo;
            result["ci_hi"] = ci.hi;
        }
        m.config() = {{"x", o.x}, {"y", o.y}, {"level", o.level}};
    }
    finish(m, o.out, "corr.json", result, ctx);
}

// ---------------------------------------------------------------- direction

struct DirectionOpts {
    std::string input, x1 = "left_right", x2 = "anti_elite", label = "label", out;
    std::size_t folds = 10;
    SeedFlag seed;
};

void run_direction(const DirectionOpts& o, Context& ctx) {
    RunManifest m("analyze direction");
    m.add_input("input", o.input);
    const auto t = read_table(o.input);
    const auto a = t.numbers(o.x1, o.input), b = t.numbers(o.x2, o.input);
    const auto labels = label_column(t, o.label, o.input);
    std::vector<std::pair<double, double>> points;
    for (std::size_t i = 0; i < a.size(); ++i) points.emplace_back(a[i], b[i]);
    const auto seed = o.seed.resolve();
    const auto fit = fit_direction_2d(points, labels, o.folds, seed);

    ensure_out_dir(o.out);
    {
        auto out = util::open_output(out_path(o.out, "fold_aucs.csv"));
        out << "fold,auc\n";
        for (std::size_t k = 0; k < fit.fold_aucs.size(); ++k)
            out << k + 1 << ',' << util::format_double(fit.fold_aucs[k]) << '\n';
    }
    m.set_seed(seed);
    m.config() = {{"x1", o.x1}, {"x2", o.x2}, {"label", o.label}, {"folds", o.folds}};
    finish(m, o.out, "direction.json",
           {{"w1", fit.w1},
            {"w2", fit.w2},
            {"intercept", fit.intercept},
            {"auc_mean", fit.auc_mean},
            {"auc_std", fit.auc_std},
            {"folds", fit.folds},
            {"stratified", fit.stratified}},
           ctx);
}

// ---------------------------------------------------------------- bootstrap

struct BootstrapOpts {
    std::string input, value, group, statistic = "mean", out;
    std::size_t replicates = 100;
    double level = 0.95;
    SeedFlag seed;
};

void run_bootstrap(const BootstrapOpts& o, Context& ctx) {
    RunManifest m("analyze bootstrap");
    m.add_input("input", o.input);
    const auto t = read_table(o.input);
    const auto values = t.numbers(o.value, o.input);
    std::vector<std::size_t> groups;
    if (!o.group.empty()) {
        const auto c = t.column(o.group, o.input);
        std::map<std::string, std::size_t> ids;
        for (const auto& row : t.rows) groups.push_back(ids.emplace(row[c], ids.size()).first->second);
    }
    const bool median = o.statistic == "median";
    const BootstrapStatistic stat = [&](std::span<const std::size_t> rows) {
        if (rows.empty()) throw ValidationError("empty resample");
        std::vector<double> v;
        v.reserve(rows.size());
        for (auto r : rows) v.push_back(values[r]);
        if (median) return util::quantile(v, 0.5);
        double s = 0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    };
    BootstrapOptions opt;
    opt.replicates = o.replicates;
    opt.level = o.level;
    opt.seed = o.seed.resolve();
    opt.threads = ctx.threads;
    const auto ci = groups.empty() ? bootstrap_ci(stat, values.size(), opt)
                                   : bootstrap_ci(stat, values.size(), opt, std::span<const std::size_t>(groups));

    ensure_out_dir(o.out);
    {
        auto out = util::open_output(out_path(o.out, "bootstrap_replicates.csv"));
        out << "replicate,value\n";
        for (std::size_t i = 0; i < ci.values.size(); ++i)
            out << i + 1 << ',' << util::format_double(ci.values[i]) << '\n';
    }
    m.set_seed(opt.seed);
    m.set_threads(opt.threads);
    m.config() = {{"value", o.value},
                  {"group", o.group},
                  {"statistic", o.statistic},
                  {"replicates", o.replicates},
                  {"level", o.level}};
    finish(m, o.out, "bootstrap.json",
           {{"point", ci.point},
            {"lo", ci.lo},
            {"hi", ci.hi},
            {"level", ci.level},
            {"replicates", ci.replicates},
            {"discarded", ci.discarded}},
           ctx);
}

// ---------------------------------------------------------------- deletion

struct DeletionOpts {
    double f = 0, dh = 0, dnh = 0;
    std::string out;
};

void run_deletion(const DeletionOpts& o, Context& ctx) {
    RunManifest m("analyze deletion");
    m.config() = {{"f_helpful", o.f}, {"d_helpful", o.dh}, {"d_not_helpful", o.dnh}};
    finish(m, o.out, "deletion.json", {{"observed_rate", deletion_adjusted_rate(o.f, o.dh, o.dnh)}}, ctx);
}

// ---------------------------------------------------------------- sources

struct SourcesOpts {
    std::string notes, categories, out;
};

void run_sources(const SourcesOpts& o, Context& ctx) {
    RunManifest m("analyze sources");
    m.add_input("notes", o.notes);
    m.add_input("categories", o.categories);
    const auto notes = load_notes_tsv(o.notes);
    const auto rows = source_stats(notes, SourceCategories::load_json(o.categories));
    ensure_out_dir(o.out);
    auto out = util::open_output(out_path(o.out, "sources.tsv"));
    out << "category\tnotes\tfraction\n";
    for (const auto& r : rows) {
        out << r.category << '\t' << r.notes << '\t' << util::format_double(r.fraction) << '\n';
        ctx.out << r.category << '\t' << r.notes << '\t' << util::format_double(r.fraction) << '\n';
    }
    m.write(o.out);
}

// ---------------------------------------------------------------- permutation

struct PermutationOpts {
    std::string input, value, group, group_a, out;
    std::size_t permutations = 10000;
    SeedFlag seed;
};

void run_permutation(const PermutationOpts& o, Context& ctx) {
    RunManifest m("analyze permutation");
    m.add_input("input", o.input);
    const auto t = read_table(o.input);
    const auto values = t.numbers(o.value, o.input);
    const auto c = t.column(o.group, o.input);
    std::set<std::string> names;
    for (const auto& row : t.rows) names.insert(row[c]);
    if (names.size() != 2) throw ValidationError(o.input + ": column " + o.group + " must hold exactly two groups");
    const std::string a_name = o.group_a.empty() ? *names.begin() : o.group_a;
    if (!names.contains(a_name)) throw ValidationError(o.input + ": no group named " + a_name);
    std::vector<double> a, b;
    for (std::size_t i = 0; i < t.rows.size(); ++i) (t.rows[i][c] == a_name ? a : b).push_back(values[i]);
    const auto seed = o.seed.resolve();
    const auto res = permutation_test(a, b, o.permutations, seed);
    m.set_seed(seed);
    m.config() = {{"value", o.value}, {"group", o.group}, {"group_a", a_name}, {"permutations", o.permutations}};
    finish(m, o.out, "permutation.json",
           {{"group_a", a_name},
            {"observed", res.observed},
            {"p_value", res.p_value},
            {"permutations", res.permutations}},
           ctx);
}

// ---------------------------------------------------------------- chisq

struct ChisqOpts {
    std::string a, b, out;
};

std::map<std::string, std::int64_t> read_counts(const std::string& path) {
    const auto t = read_table(path);
    const auto term = t.column("term", path), count = t.column("count", path);
    std::map<std::string, std::int64_t> out;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        std::int64_t v = 0;
        try {
            v = util::parse_int(t.rows[i][count]);
        } catch (const std::exception&) {
            throw ParseError(path, i + 2, "count is not an integer");
        }
        if (v < 0) throw ParseError(path, i + 2, "negative count");
        if (!out.emplace(t.rows[i][term], v).second) throw ParseError(path, i + 2, "duplicate term");
    }
    return out;
}

void run_chisq(const ChisqOpts& o, Context& ctx) {
    RunManifest m("analyze chisq");
    m.add_input("a", o.a);
    m.add_input("b", o.b);
    const auto rows = chi_square_terms(read_counts(o.a), read_counts(o.b));
    ensure_out_dir(o.out);
    auto out = util::open_output(out_path(o.out, "chisq.tsv"));
    out << "term\tcount_a\tcount_b\tchi2\tp_value\tover_represented_in_a\n";
    for (const auto& r : rows)
        out << r.term << '\t' << r.count_a << '\t' << r.count_b << '\t' << util::format_double(r.chi2) << '\t'
            << util::format_double(r.p_value) << '\t' << (r.over_represented_in_a ? "true" : "false") << '\n';
    m.write(o.out);
    ctx.out << rows.size() << " terms\n";
}

}  // namespace

void register_analyze(CLI::App& app, Registry& reg, Context& ctx) {
    auto* analyze = app.add_subcommand("analyze", "Evaluation statistics");
    analyze->require_subcommand(1);
    {
        auto o = std::make_shared<AucOpts>();
        auto* sub = analyze->add_subcommand("auc", "Tie-aware ROC AUC of a score column");
        sub->add_option("--input", o->input, "TSV with score and 0/1 label columns")->required();
        sub->add_option("--score", o->score, "Score column")->capture_default_str();
        sub->add_option("--label", o->label, "Label column")->capture_default_str();
        sub->add_option("--out", o->out, "Output directory")->required();
        reg.add(sub, [o, &ctx] { run_auc(*o, ctx); });
    }
    {
        auto o = std::make_shared<CorrOpts>();
        auto* sub = analyze->add_subcommand("corr", "Pearson/Spearman correlation, or a Fisher interval for r");
        o->o_input = sub->add_option("--input", o->input, "TSV with two numeric columns");
        sub->add_option("--x", o->x, "First column");
        sub->add_option("--y", o->y, "Second column");
        o->o_r = sub->add_option("--r", o->r, "Correlation for a Fisher interval");
        auto* on = sub->add_option("--n", o->n, "Sample size for --r");
        o->o_r->needs(on);
        o->o_r->excludes(o->o_input);
        sub->add_option("--level", o->level, "Confidence level")->capture_default_str();
        sub->add_option("--out", o->out, "Output directory")->required();
        reg.add(sub, [o, &ctx] { run_corr(*o, ctx); });
    }
    {
        auto o = std::make_shared<DirectionOpts>();
        auto* sub = analyze->add_subcommand("direction", "Cross-validated 2-D logistic direction fit");
        sub->add_option("--input", o->input, "TSV with two coordinates and a 0/1 label")->required();
        sub->add_option("--x1", o->x1, "First coordinate column")->capture_default_str();
        sub->add_option("--x2", o->x2, "Second coordinate column")->capture_default_str();
        sub->add_option("--label", o->label, "Label column")->capture_default_str();
        sub->add_option("--folds", o->folds, "Cross-validation folds")->capture_default_str();
        add_seed(sub, o->seed);
        sub->add_option("--out", o->out, "Output directory")->required();
        reg.add(sub, [o, &ctx] { run_direction(*o, ctx); });
    }
    {
        auto o = std::make_shared<BootstrapOpts>();
        auto* sub = analyze->add_subcommand("bootstrap", "Percentile bootstrap interval of a column statistic");
        sub->add_option("--input", o->input, "TSV input")->required();
        sub->add_option("--value", o->value, "Numeric column")->required();
        sub->add_option("--group", o->group, "Secondary resampling unit column");
        sub->add_option("--statistic", o->statistic, "mean or median")
            ->capture_default_str()
            ->check(CLI::IsMember({"mean", "median"}));
        sub->add_option("--replicates", o->replicates, "Bootstrap replicates")->capture_default_str();
        sub->add_option("--level", o->level, "Confidence level")->capture_default_str();
        add_seed(sub, o->seed);
        sub->add_option("--out", o->out, "Output directory")->required();
        reg.add(sub, [o, &ctx] { run_bootstrap(*o, ctx); });
    }
    {
        auto o = std::make_shared<DeletionOpts>();
        auto* sub = analyze->add_subcommand("deletion", "Observed Helpful share under status-dependent deletion");
        sub->add_option("--f", o->f, "True Helpful share")->required();
        sub->add_option("--d-helpful", o->dh, "Deletion probability of Helpful posts")->required();
        sub->add_option("--d-not-helpful", o->dnh, "Deletion probability of other posts")->required();
        sub->add_option("--out", o->out, "Output directory")->required();
        reg.add(sub, [o, &ctx] { run_deletion(*o, ctx); });
    }
    {
        auto o = std::make_shared<SourcesOpts>();
        auto* sub = analyze->add_subcommand("sources", "Share of notes citing each source category");
        sub->add_option("--notes", o->notes, "Notes TSV")->required();
        sub->add_option("--categories", o->categories, "Source categories JSON")->required();
        sub->add_option("--out", o->out, "Output directory")->required();
        reg.add(sub, [o, &ctx] { run_sources(*o, ctx); });
    }
    {
        auto o = std::make_shared<PermutationOpts>();
        auto* sub = analyze->add_subcommand("permutation", "Two-sided permutation test of a mean difference");
        sub->add_option("--input", o->input, "TSV input")->required();
        sub->add_option("--value", o->value, "Numeric column")->required();
        sub->add_option("--group", o->group, "Column with exactly two group names")->required();
        sub->add_option("--a", o->group_a, "Group counted as a (default: first name in sort order)");
        sub->add_option("--permutations", o->permutations, "Permutation count")->capture_default_str();
        add_seed(sub, o->seed);
        sub->add_option("--out", o->out, "Output directory")->required();
        reg.add(sub, [o, &ctx] { run_permutation(*o, ctx); });
    }
    {
        auto o = std::make_shared<ChisqOpts>();
        auto* sub = analyze->add_subcommand("chisq", "Per-term chi-square between two term-count corpora");
        sub->add_option("--a", o->a, "Term counts TSV (term, count)")->required();
        sub->add_option("--b", o->b, "Term counts TSV (term, count)")->required();
        sub->add_option("--out", o->out, "Output directory")->required();
        reg.add(sub, [o, &ctx] { run_chisq(*o, ctx); });
    }
}

}  // namespace bridgerank::cli
