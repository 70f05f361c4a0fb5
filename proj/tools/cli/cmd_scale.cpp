#include <filesystem>

#include "bridgerank/error.hpp"
#include "bridgerank/ideology.hpp"
#include "bridgerank/util/tsv.hpp"
#include "cli.hpp"

namespace bridgerank::cli {

namespace {

namespace fs = std::filesystem;

struct ScaleOpts {
    std::string graph, mps, users, survey, coordinates = "standard", out;
    std::size_t dims = 2, min_mps = 3;
    std::int64_t min_followers = 25;
    bool no_filter = false;
};

json fit_json(const AffineFit& f) {
    std::vector<double> w(f.weights.data(), f.weights.data() + f.weights.size());
    return {{"intercept", f.intercept}, {"weights", w}, {"residuals", f.residuals}};
}

void write_coords(const std::string& path, const char* id_col, const std::vector<std::string>& ids,
                  const std::vector<std::string>* party, const Eigen::MatrixXd& coords) {
    auto out = util::open_output(path);
    out << id_col;
    if (party) out << "\tparty";
    for (Eigen::Index k = 0; k < coords.cols(); ++k) out << "\tdim" << k + 1;
    out << '\n';
    for (std::size_t i = 0; i < ids.size(); ++i) {
        out << ids[i];
        if (party) out << '\t' << (*party)[i];
        for (Eigen::Index k = 0; k < coords.cols(); ++k)
            out << '\t' << util::format_double(coords(static_cast<Eigen::Index>(i), k));
        out << '\n';
    }
}

void run_scale(const ScaleOpts& o, Context& ctx) {
    RunManifest m("scale");
    std::string edges = o.graph, mps = o.mps, users = o.users;
    if (fs::is_directory(o.graph)) {
        edges = out_path(o.graph, "edges.tsv");
        if (mps.empty()) mps = out_path(o.graph, "mps.tsv");
        if (users.empty() && fs::exists(out_path(o.graph, "users.tsv"))) users = out_path(o.graph, "users.tsv");
    }
    if (mps.empty()) throw ValidationError("scale needs --mps when --graph is an edge file");
    require_input(edges);
    require_input(mps);
    m.add_input("edges", edges);
    m.add_input("mps", mps);
    if (!users.empty()) m.add_input("users", users);

    const auto full = load_follow_graph(edges, mps, users);
    const bool filter = !o.no_filter;
    if (filter && users.empty()) throw ValidationError("user filtering needs users.tsv follower counts (or --no-filter)");
    const auto g = filter ? filter_graph(full, o.min_mps, o.min_followers) : full;
    const auto mode = o.coordinates == "principal" ? CaCoordinates::Principal : CaCoordinates::Standard;
    const auto emb = correspondence_analysis(g, o.dims, mode);
    const auto parties = party_of_embedded_mps(emb, g);

    ensure_out_dir(o.out);
    write_coords(out_path(o.out, "user_coords.tsv"), "user_id", emb.users, nullptr, emb.user_coords);
    write_coords(out_path(o.out, "mp_coords.tsv"), "mp_id", emb.mps, parties.empty() ? nullptr : &parties,
                 emb.mp_coords);
    {
        auto out = util::open_output(out_path(o.out, "singular_values.tsv"));
        out << "dim\tsingular_value\n";
        for (Eigen::Index k = 0; k < emb.singular_values.size(); ++k)
            out << k + 1 << '\t' << util::format_double(emb.singular_values(k)) << '\n';
    }
    json summary = {{"users_in", full.users.size()},      {"mps_in", full.mps.size()},
                    {"users_embedded", emb.users.size()}, {"mps_embedded", emb.mps.size()},
                    {"dropped_users", emb.dropped_users}, {"dropped_mps", emb.dropped_mps}};

    if (!o.survey.empty()) {
        m.add_input("survey", o.survey);
        const auto scores = load_party_scores(o.survey);
        const auto cal = calibrate(emb, parties, scores);
        const auto projected = project_users(cal, emb);
        auto out = util::open_output(out_path(o.out, "user_scores.tsv"));
        out << "user_id\tleft_right\tanti_elite\n";
        for (std::size_t i = 0; i < emb.users.size(); ++i)
            out << emb.users[i] << '\t' << util::format_double(projected[i].left_right) << '\t'
                << util::format_double(projected[i].anti_elite) << '\n';
        util::open_output(out_path(o.out, "calibration.json"))
            << json{{"left_right", fit_json(cal.left_right)}, {"anti_elite", fit_json(cal.anti_elite)}}.dump(2)
            << '\n';
    }
    util::open_output(out_path(o.out, "scale.json")) << summary.dump(2) << '\n';
    m.config() = {{"dims", o.dims},
                  {"coordinates", o.coordinates},
                  {"filter", filter},
                  {"min_mps_followed", o.min_mps},
                  {"min_followers", o.min_followers}};
    m.write(o.out);
    ctx.out << "embedded " << emb.users.size() << " users and " << emb.mps.size() << " MPs in " << emb.dims
            << " dimensions\n";
}

}  // namespace

void register_scale(CLI::App& app, Registry& reg, Context& ctx) {
    auto o = std::make_shared<ScaleOpts>();
    auto* sub = app.add_subcommand("scale", "Correspondence-analysis ideology scaling of a follow graph");
    sub->add_option("--graph", o->graph, "Graph directory (edges.tsv, mps.tsv, users.tsv) or an edge list")
        ->required();
    sub->add_option("--mps", o->mps, "MP table (mp_id, party)");
    sub->add_option("--users", o->users, "User table (user_id, follower_count)");
    sub->add_option("--dims", o->dims, "Embedding dimensions")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--survey", o->survey, "Party scores TSV for calibration");
    sub->add_option("--coordinates", o->coordinates, "standard or principal")
        ->capture_default_str()
        ->check(CLI::IsMember({"standard", "principal"}));
    sub->add_option("--min-mps", o->min_mps, "Minimum MPs a user must follow")->capture_default_str();
    sub->add_option("--min-followers", o->min_followers, "Minimum platform followers of a user")
        ->capture_default_str();
    sub->add_flag("--no-filter", o->no_filter, "Embed every user");
    sub->add_option("--out", o->out, "Output directory")->required();
    reg.add(sub, [o, &ctx] { run_scale(*o, ctx); });
}

}  // namespace bridgerank::cli
