#include "bridgerank/params_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bridgerank/error.hpp"
#include "bridgerank/util/tsv.hpp"

namespace bridgerank {

using nlohmann::json;
using util::format_double;

namespace {

json config_json(const TrainConfig& c) {
    return json{{"lambda", c.lambda},
                {"bias_reg_multiplier", c.bias_reg_multiplier},
                {"learning_rate", c.learning_rate},
                {"epochs", c.epochs},
                {"seed", c.seed},
                {"holdout_fraction", c.holdout_fraction},
                {"init_scale", c.init_scale},
                {"init", std::string(to_token(c.init))},
                {"optimizer", std::string(to_token(c.optimizer))},
                {"batch_size", c.batch_size},
                {"adam_beta1", c.adam_beta1},
                {"adam_beta2", c.adam_beta2},
                {"adam_eps", c.adam_eps}};
}

TrainConfig config_from(const json& j, TrainConfig c) {
    c.lambda = j.value("lambda", c.lambda);
    c.bias_reg_multiplier = j.value("bias_reg_multiplier", c.bias_reg_multiplier);
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.epochs = j.value("epochs", c.epochs);
    c.seed = j.value("seed", c.seed);
    c.holdout_fraction = j.value("holdout_fraction", c.holdout_fraction);
    c.init_scale = j.value("init_scale", c.init_scale);
    if (j.contains("init")) c.init = init_from_token(j.at("init").get<std::string>());
    if (j.contains("optimizer")) c.optimizer = optimizer_from_token(j.at("optimizer").get<std::string>());
    c.batch_size = j.value("batch_size", c.batch_size);
    c.adam_beta1 = j.value("adam_beta1", c.adam_beta1);
    c.adam_beta2 = j.value("adam_beta2", c.adam_beta2);
    c.adam_eps = j.value("adam_eps", c.adam_eps);
    c.threads = j.value("threads", c.threads);
    return c;
}

void read_param_table(const std::string& path, const char* id_col, const char* beta_col, const char* theta_col,
                      std::vector<std::string>& ids, std::vector<double>& beta, std::vector<double>& theta) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open input file: " + path);
    util::TsvReader reader(in, path);
    reader.expect_header({id_col, beta_col, theta_col});
    std::vector<std::string_view> f;
    while (reader.next(f)) {
        if (f.size() != 3) reader.fail("expected 3 fields");
        try {
            ids.emplace_back(f[0]);
            beta.push_back(util::parse_double(f[1]));
            theta.push_back(util::parse_double(f[2]));
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            reader.fail(e.what());
        }
    }
}

}  // namespace

std::string config_to_json(const TrainConfig& config) { return config_json(config).dump(2); }

TrainConfig config_from_json(const std::string& text, TrainConfig base) {
    try {
        return config_from(json::parse(text), base);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("invalid train config JSON: ") + e.what());
    }
}

void write_model(const std::string& dir, const RatingsDataset& ds, const ModelParams& p, const TrainConfig& config) {
    p.check_dimensions(ds);
    std::filesystem::create_directories(dir);
    {
        auto out = util::open_output(dir + "/raters.tsv");
        out << "rater_id\tbeta_r\ttheta_r\n";
        for (std::size_t r = 0; r < ds.rater_count(); ++r)
            out << ds.rater_ids()[r] << '\t' << format_double(p.beta_r[r]) << '\t' << format_double(p.theta_r[r])
                << '\n';
    }
    {
        auto out = util::open_output(dir + "/notes.tsv");
        out << "note_id\tbeta_n\ttheta_n\n";
        for (std::size_t n = 0; n < ds.note_count(); ++n)
            out << ds.note_ids()[n] << '\t' << format_double(p.beta_n[n]) << '\t' << format_double(p.theta_n[n])
                << '\n';
    }
    auto out = util::open_output(dir + "/model.json");
    out << json{{"beta0", p.beta0}, {"config", config_json(config)}}.dump(2) << '\n';
}

StoredModel read_model(const std::string& dir) {
    StoredModel m;
    read_param_table(dir + "/raters.tsv", "rater_id", "beta_r", "theta_r", m.rater_ids, m.params.beta_r,
                     m.params.theta_r);
    read_param_table(dir + "/notes.tsv", "note_id", "beta_n", "theta_n", m.note_ids, m.params.beta_n,
                     m.params.theta_n);
    std::ifstream in(dir + "/model.json");
    if (!in) throw Error("cannot open input file: " + dir + "/model.json");
    try {
        const auto j = json::parse(in);
        m.params.beta0 = j.at("beta0").get<double>();
        if (j.contains("config")) m.config = config_from(j.at("config"), {});
    } catch (const json::exception& e) {
        throw Error(dir + "/model.json: " + e.what());
    }
    return m;
}

}  // namespace bridgerank
