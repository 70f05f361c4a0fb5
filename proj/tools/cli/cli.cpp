#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "bridgerank/error.hpp"
#include "bridgerank/params_io.hpp"
#include "bridgerank/util/tsv.hpp"

namespace bridgerank::cli {

namespace fs = std::filesystem;

int dispatch(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return dispatch(args, std::cout, std::cerr);
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bridging-based crowd-moderation pipeline", "bridgerank"};
    app.failure_message(CLI::FailureMessage::help);
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    // Subcommands inherit fallthrough, so --threads may appear after them.
    app.fallthrough();

    Context ctx{out, err};
    app.add_option("--threads", ctx.threads, "Worker threads; 1 is fully deterministic")
        ->check(CLI::PositiveNumber);
    Registry reg;
    register_data(app, reg, ctx);
    register_model(app, reg, ctx);
    register_scale(app, reg, ctx);
    register_analyze(app, reg, ctx);
    register_report(app, reg, ctx);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        for (const auto& [sub, action] : reg.actions)
            if (sub->parsed()) {
                action();
                return 0;
            }
        err << app.help();
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

void require_input(const std::string& path) {
    std::ifstream in(path);
    if (!in || fs::is_directory(path)) throw Error("cannot open input file: " + path);
}

json read_json_file(const std::string& path) {
    require_input(path);
    std::ifstream in(path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ValidationError(path + ": invalid JSON: " + e.what());
    }
}

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw Error("cannot create output directory: " + dir);
}

std::string out_path(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

std::uint64_t env_seed() {
    const char* v = std::getenv("BRIDGERANK_SEED");
    if (!v || !*v) return 0;
    try {
        const auto s = util::parse_int(v);
        if (s < 0) throw ValidationError("negative");
        return static_cast<std::uint64_t>(s);
    } catch (const std::exception&) {
        throw ValidationError(std::string("BRIDGERANK_SEED is not a nonnegative integer: ") + v);
    }
}

void add_train_flags(CLI::App* app, TrainFlags& f, bool with_config) {
    if (with_config) app->add_option("--config", f.config_path, "JSON train config (flags override it)");
    f.o_lambda = app->add_option("--lambda", f.lambda, "Regularization strength (default 2.5e-5)");
    f.o_lr = app->add_option("--lr", f.lr, "Learning rate (default 2.5e-3)");
    f.o_epochs = app->add_option("--epochs", f.epochs, "Training epochs (default 3)");
    f.o_seed = app->add_option("--seed", f.seed, "Random seed (default: BRIDGERANK_SEED or 0)");
    f.o_init = app->add_option("--init", f.init, "spectral or uniform (default spectral)")
                   ->check(CLI::IsMember({"spectral", "uniform"}));
    f.o_optimizer = app->add_option("--optimizer", f.optimizer, "sgd or adam (default sgd)")
                        ->check(CLI::IsMember({"adam", "sgd"}));
    f.o_batch = app->add_option("--batch-size", f.batch_size, "Adam mini-batch size (default 4)");
    f.o_holdout = app->add_option("--holdout-fraction", f.holdout, "Holdout share for tuning (default 0.1)");
}

TrainConfig resolve_train_config(const TrainFlags& f, const json* file, unsigned threads) {
    TrainConfig c;
    c.seed = env_seed();
    if (file) c = config_from_json(file->dump(), c);
    if (f.o_lambda->count()) c.lambda = f.lambda;
    if (f.o_lr->count()) c.learning_rate = f.lr;
    if (f.o_epochs->count()) c.epochs = f.epochs;
    if (f.o_seed->count()) c.seed = f.seed;
    if (f.o_optimizer->count()) c.optimizer = optimizer_from_token(f.optimizer);
    if (f.o_init->count()) c.init = init_from_token(f.init);
    if (f.o_batch->count()) c.batch_size = f.batch_size;
    if (f.o_holdout->count()) c.holdout_fraction = f.holdout;
    c.threads = threads;
    c.validate();
    return c;
}

json train_config_json(const TrainConfig& c) {
    auto j = json::parse(config_to_json(c));
    j["threads"] = c.threads;
    return j;
}

std::size_t Table::column(const std::string& name, const std::string& source) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw ValidationError(source + ": no column named '" + name + "'");
}

std::vector<double> Table::numbers(const std::string& name, const std::string& source) const {
    const auto c = column(name, source);
    std::vector<double> out;
    out.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        try {
            out.push_back(util::parse_double(rows[i][c]));
        } catch (const std::exception&) {
            throw ParseError(source, i + 2, "column " + name + " is not numeric: '" + rows[i][c] + "'");
        }
    }
    return out;
}

Table read_table(const std::string& path) {
    require_input(path);
    std::ifstream in(path, std::ios::binary);
    util::TsvReader reader(in, path);
    Table t;
    t.header = reader.read_header();
    std::vector<std::string_view> fields;
    while (reader.next(fields)) {
        if (fields.size() != t.header.size())
            reader.fail("expected " + std::to_string(t.header.size()) + " fields, got " + std::to_string(fields.size()));
        t.rows.emplace_back(fields.begin(), fields.end());
    }
    return t;
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    for (auto part : util::split(text, ',')) grid.push_back(util::parse_double(part));
    if (grid.empty()) throw ValidationError("empty grid");
    return grid;
}

}  // namespace bridgerank::cli
