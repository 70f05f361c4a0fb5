#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bridgerank/mf.hpp"

namespace bridgerank::cli {

using nlohmann::json;

inline constexpr std::string_view kVersion = "0.1.0";

// Exit codes: 0 success, 1 domain or validation error, 2 usage error.
int dispatch(int argc, char** argv);
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string sha256_file(const std::string& path);

// Provenance record written to <out>/manifest.json by every run.
class RunManifest {
public:
    explicit RunManifest(std::string subcommand);

    json& config() { return config_; }
    void set_seed(std::uint64_t seed) { seed_ = seed; }
    void set_threads(unsigned threads) { threads_ = threads; }
    // Records the SHA-256 of a file, or of every regular file in a directory.
    void add_input(const std::string& role, const std::string& path);
    void write(const std::string& out_dir) const;

private:
    std::string subcommand_;
    json config_ = json::object();
    json inputs_ = json::object();
    std::optional<std::uint64_t> seed_;
    unsigned threads_ = 1;
    std::chrono::steady_clock::time_point start_;
};

struct Context {
    std::ostream& out;
    std::ostream& err;
    // Global --threads; only train, tune, report and analyze bootstrap use
    // more than one.
    unsigned threads = 1;
};

// Leaf subcommands and the action to run when one of them was parsed.
struct Registry {
    std::vector<std::pair<CLI::App*, std::function<void()>>> actions;
    void add(CLI::App* app, std::function<void()> action) { actions.emplace_back(app, std::move(action)); }
};

void register_data(CLI::App& app, Registry& reg, Context& ctx);
void register_model(CLI::App& app, Registry& reg, Context& ctx);
void register_scale(CLI::App& app, Registry& reg, Context& ctx);
void register_analyze(CLI::App& app, Registry& reg, Context& ctx);
void register_report(CLI::App& app, Registry& reg, Context& ctx);

// ---------------------------------------------------------------- helpers

// Throws Error naming the path when it cannot be read.
void require_input(const std::string& path);
json read_json_file(const std::string& path);
void ensure_out_dir(const std::string& dir);
std::string out_path(const std::string& dir, const std::string& name);

// Seed precedence: flag > config file > BRIDGERANK_SEED > 0.
std::uint64_t env_seed();

// Flags shared by train, tune and report. Unset flags leave the file value.
struct TrainFlags {
    std::string config_path;
    double lambda = 0, lr = 0, holdout = 0;
    int epochs = 0;
    std::uint64_t seed = 0;
    std::string optimizer, init;
    std::size_t batch_size = 0;
    CLI::Option *o_lambda = nullptr, *o_lr = nullptr, *o_epochs = nullptr, *o_seed = nullptr,
                *o_optimizer = nullptr, *o_init = nullptr, *o_batch = nullptr, *o_holdout = nullptr;
};
void add_train_flags(CLI::App* app, TrainFlags& f, bool with_config = true);
// `file` is the train section of a config file, or null.
TrainConfig resolve_train_config(const TrainFlags& f, const json* file, unsigned threads);
json train_config_json(const TrainConfig& c);

// Header-first TSV with named columns, all cells kept as strings.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::size_t column(const std::string& name, const std::string& source) const;
    std::vector<double> numbers(const std::string& name, const std::string& source) const;
};
Table read_table(const std::string& path);

// Comma-separated list of doubles, e.g. "1e-5,1e-3,0.1".
std::vector<double> parse_grid(const std::string& text);

}  // namespace bridgerank::cli
