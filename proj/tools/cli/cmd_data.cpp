#include <filesystem>
#include <fstream>

#include "bridgerank/country.hpp"
#include "bridgerank/dump_adapter.hpp"
#include "bridgerank/error.hpp"
#include "bridgerank/preprocess.hpp"
#include "bridgerank/synthetic.hpp"
#include "bridgerank/tsv_io.hpp"
#include "bridgerank/util/tsv.hpp"
#include "cli.hpp"

namespace bridgerank::cli {

namespace {

template <class T>
void take(const json& j, const char* key, T& field) {
    if (!j.contains(key)) return;
    try {
        field = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config key '") + key + "': " + e.what());
    }
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw ValidationError("unknown key '" + key + "' in " + where);
    }
}

SyntheticWorldConfig world_from_json(const json& j) {
    reject_unknown(j,
                   {"n_raters", "n_notes", "fraction_polarized", "rater_side_mean", "rater_side_sd", "global_bias",
                    "consensus_beta_n", "polarized_theta_n_magnitude", "ratings_per_note", "noise_flip_prob", "seed",
                    "rater_activity_exponent", "note_sides", "follow", "countries"},
                   "world config");
    SyntheticWorldConfig c;
    take(j, "n_raters", c.n_raters);
    take(j, "n_notes", c.n_notes);
    take(j, "fraction_polarized", c.fraction_polarized);
    take(j, "rater_side_mean", c.rater_side_mean);
    take(j, "rater_side_sd", c.rater_side_sd);
    take(j, "global_bias", c.global_bias);
    take(j, "consensus_beta_n", c.consensus_beta_n);
    take(j, "polarized_theta_n_magnitude", c.polarized_theta_n_magnitude);
    take(j, "ratings_per_note", c.ratings_per_note);
    take(j, "noise_flip_prob", c.noise_flip_prob);
    take(j, "rater_activity_exponent", c.rater_activity_exponent);
    take(j, "note_sides", c.note_sides);
    return c;
}

json world_to_json(const SyntheticWorldConfig& c) {
    return {{"n_raters", c.n_raters},
            {"n_notes", c.n_notes},
            {"fraction_polarized", c.fraction_polarized},
            {"rater_side_mean", c.rater_side_mean},
            {"rater_side_sd", c.rater_side_sd},
            {"global_bias", c.global_bias},
            {"consensus_beta_n", c.consensus_beta_n},
            {"polarized_theta_n_magnitude", c.polarized_theta_n_magnitude},
            {"ratings_per_note", c.ratings_per_note},
            {"noise_flip_prob", c.noise_flip_prob},
            {"rater_activity_exponent", c.rater_activity_exponent},
            {"seed", c.seed}};
}

PlantedFollowSpec follow_from_json(const json& j, std::uint64_t seed) {
    reject_unknown(j,
                   {"n_mps", "dims", "gamma", "activity_mean", "activity_sd", "popularity_mean", "popularity_sd",
                    "position_sd", "n_parties", "party_spread", "seed"},
                   "follow config");
    PlantedFollowSpec s;
    s.dims = 2;
    s.n_parties = 6;
    s.seed = seed;
    take(j, "n_mps", s.n_mps);
    take(j, "dims", s.dims);
    take(j, "gamma", s.gamma);
    take(j, "activity_mean", s.activity_mean);
    take(j, "activity_sd", s.activity_sd);
    take(j, "popularity_mean", s.popularity_mean);
    take(j, "popularity_sd", s.popularity_sd);
    take(j, "position_sd", s.position_sd);
    take(j, "n_parties", s.n_parties);
    take(j, "party_spread", s.party_spread);
    take(j, "seed", s.seed);
    return s;
}

json follow_to_json(const PlantedFollowSpec& s) {
    return {{"n_mps", s.n_mps},         {"dims", s.dims},
            {"gamma", s.gamma},         {"activity_mean", s.activity_mean},
            {"activity_sd", s.activity_sd}, {"popularity_mean", s.popularity_mean},
            {"popularity_sd", s.popularity_sd}, {"position_sd", s.position_sd},
            {"n_parties", s.n_parties}, {"party_spread", s.party_spread},
            {"seed", s.seed}};
}

CountryWorldSpec countries_from_json(const json& j, std::uint64_t seed) {
    reject_unknown(j,
                   {"countries", "raters_per_country", "notes_per_country", "ratings_per_note", "labelable_fraction",
                    "seed"},
                   "countries config");
    CountryWorldSpec s;
    s.seed = seed;
    take(j, "countries", s.countries);
    take(j, "raters_per_country", s.raters_per_country);
    take(j, "notes_per_country", s.notes_per_country);
    take(j, "ratings_per_note", s.ratings_per_note);
    take(j, "labelable_fraction", s.labelable_fraction);
    take(j, "seed", s.seed);
    return s;
}

json countries_to_json(const CountryWorldSpec& s) {
    return {{"countries", s.countries},
            {"raters_per_country", s.raters_per_country},
            {"notes_per_country", s.notes_per_country},
            {"ratings_per_note", s.ratings_per_note},
            {"labelable_fraction", s.labelable_fraction},
            {"seed", s.seed}};
}

std::string rules_to_json(const CountryRules& rules) {
    json j = json::object();
    for (const auto& [country, rule] : rules.countries)
        j[country] = {{"languages", rule.languages}, {"tlds", rule.tlds}, {"outlets", rule.outlets}};
    return j.dump(2);
}

void write_truth(const std::string& path, const SyntheticWorld& w) {
    const auto& ds = w.dataset;
    auto out = util::open_output(path);
    out << "entity_type\tid\tbeta\ttheta\tlabel\n";
    out << "global\tbeta0\t" << util::format_double(w.truth.beta0) << "\t0\t-\n";
    for (std::size_t r = 0; r < ds.rater_count(); ++r)
        out << "rater\t" << ds.rater_ids()[r] << '\t' << util::format_double(w.truth.beta_r[r]) << '\t'
            << util::format_double(w.truth.theta_r[r]) << '\t' << (w.rater_sides[r] > 0 ? "+1" : "-1") << '\n';
    for (std::size_t n = 0; n < ds.note_count(); ++n)
        out << "note\t" << ds.note_ids()[n] << '\t' << util::format_double(w.truth.beta_n[n]) << '\t'
            << util::format_double(w.truth.theta_n[n]) << '\t'
            << (w.labels[n] == NoteArchetype::Consensus ? "CONSENSUS" : "POLARIZED") << '\n';
}

std::vector<NoteMeta> plain_notes(const RatingsDataset& ds) {
    std::vector<NoteMeta> notes;
    for (const auto& id : ds.note_ids()) {
        NoteMeta m;
        m.note_id = id;
        m.classification = NoteClassification::MisinformedOrMisleading;
        notes.push_back(std::move(m));
    }
    return notes;
}

void print_counts(std::ostream& out, const std::string& what, const RatingsDataset& ds) {
    out << what << ": " << ds.size() << " ratings, " << ds.rater_count() << " raters, " << ds.note_count()
        << " notes\n";
}

// ---------------------------------------------------------------- ingest

struct IngestOpts {
    std::string ratings, notes, ratings_mapping, notes_mapping, aliases, out;
    std::size_t min_note = 5, min_rater = 10;
    bool iterate = false, raw = false;
};

void run_ingest(const IngestOpts& o, Context& ctx) {
    RunManifest m("ingest");
    m.add_input("ratings", o.ratings);
    DomainAliases aliases;
    if (!o.aliases.empty()) {
        m.add_input("aliases", o.aliases);
        aliases = DomainAliases::load_json(o.aliases);
    }
    AdapterStats rstats, nstats;
    RatingsDataset ds;
    if (!o.ratings_mapping.empty()) {
        m.add_input("ratings_mapping", o.ratings_mapping);
        ds = adapt_ratings_dump(o.ratings, DumpMapping::load_json(o.ratings_mapping), &rstats);
    } else {
        ds = load_ratings_tsv(o.ratings);
        rstats.rows_read = ds.size();
    }
    std::vector<NoteMeta> notes;
    if (!o.notes.empty()) {
        m.add_input("notes", o.notes);
        if (!o.notes_mapping.empty()) {
            m.add_input("notes_mapping", o.notes_mapping);
            notes = adapt_notes_dump(o.notes, DumpMapping::load_json(o.notes_mapping), aliases, &nstats);
        } else {
            notes = load_notes_tsv(o.notes);
            nstats.rows_read = notes.size();
        }
    }

    PreprocessOptions popt;
    popt.min_ratings_per_note = o.min_note;
    popt.min_notes_per_rater = o.min_rater;
    popt.iterate_to_fixpoint = o.iterate;
    for (const auto& n : notes)
        if (n.classification == NoteClassification::NoteNotNeeded) popt.note_filter.insert(n.note_id);
    const auto input_size = ds.size();
    if (!o.raw) ds = preprocess(ds, popt);

    m.config() = {{"preprocess", !o.raw},
                  {"min_ratings_per_note", o.min_note},
                  {"min_notes_per_rater", o.min_rater},
                  {"iterate_to_fixpoint", o.iterate},
                  {"excluded_not_needed_notes", popt.note_filter.size()}};
    ensure_out_dir(o.out);
    write_ratings_tsv(out_path(o.out, "ratings.tsv"), ds);
    if (!o.notes.empty()) write_notes_tsv(out_path(o.out, "notes.tsv"), notes);
    json summary = {{"ratings_rows_read", rstats.rows_read}, {"ratings_rows_skipped", rstats.rows_skipped},
                    {"notes_rows_read", nstats.rows_read},   {"notes_rows_skipped", nstats.rows_skipped},
                    {"ratings_in", input_size},             {"ratings_out", ds.size()},
                    {"raters_out", ds.rater_count()},        {"notes_out", ds.note_count()}};
    util::open_output(out_path(o.out, "ingest.json")) << summary.dump(2) << '\n';
    m.write(o.out);
    print_counts(ctx.out, "ingested", ds);
}

// ---------------------------------------------------------------- simulate

struct SimulateOpts {
    std::string config, out;
    std::uint64_t seed = 0;
    CLI::Option* o_seed = nullptr;
};

void run_simulate(const SimulateOpts& o, Context& ctx) {
    RunManifest m("simulate");
    json file = json::object();
    if (!o.config.empty()) {
        m.add_input("config", o.config);
        file = read_json_file(o.config);
        if (!file.is_object()) throw ValidationError(o.config + ": world config must be a JSON object");
    }
    auto cfg = world_from_json(file);
    cfg.seed = o.o_seed->count() ? o.seed : file.contains("seed") ? file.at("seed").get<std::uint64_t>() : env_seed();
    cfg.validate();
    m.set_seed(cfg.seed);
    json echo = world_to_json(cfg);
    ensure_out_dir(o.out);

    SyntheticWorld world;
    if (file.contains("follow")) {
        const auto spec = follow_from_json(file.at("follow"), cfg.seed + 1);
        echo["follow"] = follow_to_json(spec);
        auto coupled = generate_coupled_world(cfg, spec);
        const auto dir = out_path(o.out, "follow");
        write_follow_graph(dir, coupled.follow.graph);
        write_party_scores(out_path(dir, "party_scores.tsv"), coupled.party_scores);
        world = std::move(coupled.ratings);
    } else {
        world = generate_world(cfg);
    }
    write_ratings_tsv(out_path(o.out, "ratings.tsv"), world.dataset);
    write_notes_tsv(out_path(o.out, "notes.tsv"), plain_notes(world.dataset));
    write_truth(out_path(o.out, "truth.tsv"), world);

    if (file.contains("countries")) {
        const auto spec = countries_from_json(file.at("countries"), cfg.seed + 2);
        echo["countries"] = countries_to_json(spec);
        const auto cw = generate_country_world(spec);
        const auto dir = out_path(o.out, "countries");
        ensure_out_dir(dir);
        write_ratings_tsv(out_path(dir, "ratings.tsv"), cw.dataset);
        write_notes_tsv(out_path(dir, "notes.tsv"), cw.notes);
        util::open_output(out_path(dir, "rules.json")) << rules_to_json(cw.rules) << '\n';
        auto truth = util::open_output(out_path(dir, "truth.tsv"));
        truth << "entity_type\tid\tcountry\n";
        for (const auto& [id, c] : cw.note_truth) truth << "note\t" << id << '\t' << c << '\n';
        for (const auto& [id, c] : cw.rater_truth) truth << "rater\t" << id << '\t' << c << '\n';
    }
    m.config() = echo;
    m.write(o.out);
    print_counts(ctx.out, "simulated", world.dataset);
}

// ---------------------------------------------------------------- segment

struct SegmentOpts {
    std::string ratings, notes, rules, out;
    std::size_t min_labeled = 5, max_iters = 20;
};

void run_segment(const SegmentOpts& o, Context& ctx) {
    RunManifest m("segment");
    m.add_input("ratings", o.ratings);
    m.add_input("notes", o.notes);
    m.add_input("rules", o.rules);
    const auto ds = load_ratings_tsv(o.ratings);
    const auto notes = load_notes_tsv(o.notes);
    const auto rules = CountryRules::load_json(o.rules);
    const auto a = segment_countries(ds, notes, rules, o.min_labeled, o.max_iters);

    m.config() = {{"min_labeled_rated", o.min_labeled}, {"max_iters", o.max_iters}};
    ensure_out_dir(o.out);
    write_assignment_tsv(out_path(o.out, "assignment.tsv"), a);
    json by_stage = json::object();
    for (const auto* group : {&a.note_country, &a.rater_country}) {
        const char* kind = group == &a.note_country ? "notes" : "raters";
        for (const auto& [id, at] : *group) {
            auto& slot = by_stage[kind][at.country]["stage" + std::to_string(at.stage)];
            slot = slot.is_null() ? 1 : slot.get<int>() + 1;
        }
    }
    json summary = {{"iterations", a.iterations},
                    {"converged", a.converged},
                    {"notes_total", ds.note_count()},
                    {"notes_assigned", a.note_country.size()},
                    {"raters_total", ds.rater_count()},
                    {"raters_assigned", a.rater_country.size()},
                    {"by_stage", by_stage}};
    util::open_output(out_path(o.out, "segment.json")) << summary.dump(2) << '\n';
    m.write(o.out);
    ctx.out << "assigned " << a.note_country.size() << "/" << ds.note_count() << " notes and "
            << a.rater_country.size() << "/" << ds.rater_count() << " raters in " << a.iterations
            << " propagation rounds\n";
}

}  // namespace

void register_data(CLI::App& app, Registry& reg, Context& ctx) {
    {
        auto o = std::make_shared<IngestOpts>();
        auto* sub = app.add_subcommand("ingest", "Convert dumps or canonical TSVs into filtered canonical TSVs");
        sub->add_option("--ratings", o->ratings, "Ratings file (canonical TSV, or a dump with --ratings-mapping)")
            ->required();
        sub->add_option("--notes", o->notes, "Notes file (canonical TSV, or a dump with --notes-mapping)");
        sub->add_option("--ratings-mapping", o->ratings_mapping, "Column mapping JSON for a ratings dump");
        sub->add_option("--notes-mapping", o->notes_mapping, "Column mapping JSON for a notes dump");
        sub->add_option("--aliases", o->aliases, "Domain alias JSON");
        sub->add_option("--min-ratings-per-note", o->min_note, "Note filter threshold")->capture_default_str();
        sub->add_option("--min-notes-per-rater", o->min_rater, "Rater filter threshold")->capture_default_str();
        sub->add_flag("--iterate", o->iterate, "Repeat both filters until nothing changes");
        sub->add_flag("--no-preprocess", o->raw, "Convert only, keep every rating");
        sub->add_option("--out", o->out, "Output directory")->required();
        reg.add(sub, [o, &ctx] { run_ingest(*o, ctx); });
    }
    {
        auto o = std::make_shared<SimulateOpts>();
        auto* sub = app.add_subcommand("simulate", "Generate a planted synthetic world");
        sub->add_option("--config", o->config, "World config JSON");
        o->o_seed = sub->add_option("--seed", o->seed, "Random seed (flag > config > BRIDGERANK_SEED > 0)");
        sub->add_option("--out", o->out, "Output directory")->required();
        reg.add(sub, [o, &ctx] { run_simulate(*o, ctx); });
    }
    {
        auto o = std::make_shared<SegmentOpts>();
        auto* sub = app.add_subcommand("segment", "Attribute notes and raters to countries");
        sub->add_option("--ratings", o->ratings, "Ratings TSV")->required();
        sub->add_option("--notes", o->notes, "Notes TSV")->required();
        sub->add_option("--rules", o->rules, "Country rules JSON")->required();
        sub->add_option("--min-labeled", o->min_labeled, "Labeled ratings a rater needs in stage 2")
            ->capture_default_str();
        sub->add_option("--max-iters", o->max_iters, "Propagation round limit")->capture_default_str();
        sub->add_option("--out", o->out, "Output directory (assignment.tsv is written there)")->required();
        reg.add(sub, [o, &ctx] { run_segment(*o, ctx); });
    }
}

}  // namespace bridgerank::cli
