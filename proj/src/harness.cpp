#include "nodallab/harness.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "nodallab/rng.hpp"

namespace nodallab {

bool StatReport::all_pass() const {
    for (const auto& [name, ok] : flags)
        if (!ok) return false;
    return true;
}

double StatReport::aggregate(const std::string& name) const {
    for (const auto& [k, v] : aggregates)
        if (k == name) return v;
    throw ConfigError("no such aggregate: " + name);
}

std::uint64_t trial_seed(const ExperimentConfig& cfg, long trial) {
    return CounterRng::derive(cfg.master_seed, static_cast<std::uint64_t>(trial));
}

void emit_csv(const StatReport& rep, std::ostream& os) {
    os << "trial,seed";
    for (const auto& m : rep.metric_names) os << "," << m;
    os << "\n";
    os.precision(17);
    for (const auto& row : rep.rows) {
        os << row.trial << "," << row.seed;
        for (double v : row.metrics) os << "," << v;
        os << "\n";
    }
}

void emit_long_csv(const StatReport& rep, std::ostream& os) {
    os << "experiment,trial,metric,value\n";
    os.precision(17);
    for (const auto& row : rep.rows)
        for (size_t i = 0; i < row.metrics.size(); ++i)
            os << rep.config.experiment << "," << row.trial << "," << rep.metric_names[i] << ","
               << row.metrics[i] << "\n";
}

namespace {

nlohmann::ordered_json config_json(const ExperimentConfig& cfg) {
    nlohmann::ordered_json j;
    j["experiment"] = cfg.experiment;
    j["n"] = cfg.n;
    j["p"] = cfg.p;
    j["trials"] = cfg.trials;
    j["master_seed"] = cfg.master_seed;
    j["kappa"] = cfg.kappa;
    j["edge_indices"] = cfg.edge_indices;
    j["thresholds"] = cfg.thresholds;
    j["params"] = cfg.params;
    j["workers"] = cfg.workers;
    return j;
}

}  // namespace

std::string report_json_string(const StatReport& rep) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["config"] = config_json(rep.config);
    j["metric_names"] = rep.metric_names;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : rep.rows) {
        nlohmann::ordered_json r;
        r["trial"] = row.trial;
        r["seed"] = row.seed;
        r["metrics"] = row.metrics;
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    nlohmann::ordered_json agg;
    for (const auto& [k, v] : rep.aggregates) agg[k] = v;
    j["aggregates"] = std::move(agg);
    nlohmann::ordered_json flg;
    for (const auto& [k, v] : rep.flags) flg[k] = v;
    j["flags"] = std::move(flg);
    j["wall_time_s"] = rep.wall_time_s;
    return j.dump(2);
}

void emit_json(const StatReport& rep, std::ostream& os) { os << report_json_string(rep) << "\n"; }

void emit_files(const StatReport& rep, const std::string& out_dir, const std::string& format) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    const std::string stem = out_dir + "/" + rep.config.experiment;
    try {
        if (format == "csv" || format == "both") {
            std::ofstream c(stem + ".csv");
            if (!c) throw DataError("cannot write " + stem + ".csv");
            emit_csv(rep, c);
            std::ofstream l(stem + "_long.csv");
            if (!l) throw DataError("cannot write " + stem + "_long.csv");
            emit_long_csv(rep, l);
        }
        if (format == "json" || format == "both") {
            std::ofstream f(stem + ".json");
            if (!f) throw DataError("cannot write " + stem + ".json");
            emit_json(rep, f);
        }
    } catch (const std::ios_base::failure& e) {
        throw DataError("I/O failure under " + out_dir + ": " + e.what());
    }
}

StatReport reingest_json(std::istream& is) {
    nlohmann::json j;
    is >> j;
    StatReport rep;
    const auto& c = j.at("config");
    rep.config.experiment = c.at("experiment").get<std::string>();
    rep.config.n = c.at("n").get<int>();
    rep.config.p = c.at("p").get<double>();
    rep.config.trials = c.at("trials").get<long>();
    rep.config.master_seed = c.at("master_seed").get<std::uint64_t>();
    rep.config.kappa = c.at("kappa").get<double>();
    rep.config.edge_indices = c.at("edge_indices").get<std::vector<int>>();
    rep.config.thresholds = c.at("thresholds").get<std::map<std::string, double>>();
    rep.config.params = c.at("params").get<std::map<std::string, double>>();
    rep.config.workers = c.at("workers").get<int>();
    rep.metric_names = j.at("metric_names").get<std::vector<std::string>>();
    for (const auto& r : j.at("rows")) {
        TrialRow row;
        row.trial = r.at("trial").get<long>();
        row.seed = r.at("seed").get<std::uint64_t>();
        row.metrics = r.at("metrics").get<std::vector<double>>();
        rep.rows.push_back(std::move(row));
    }
    for (const auto& [k, v] : j.at("aggregates").items())
        rep.aggregates.emplace_back(k, v.get<double>());
    for (const auto& [k, v] : j.at("flags").items()) rep.flags.emplace_back(k, v.get<bool>());
    rep.wall_time_s = j.at("wall_time_s").get<double>();
    return rep;
}

void apply_config_line(ExperimentConfig& cfg, const std::string& raw) {
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
        if (line.find_first_not_of(" \t\r") != std::string::npos)
            throw ConfigError("config line has no '=': " + raw);
        return;
    }
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line has empty key: " + raw);
    try {
        if (key == "experiment") cfg.experiment = val;
        else if (key == "n") cfg.n = std::stoi(val);
        else if (key == "p") cfg.p = std::stod(val);
        else if (key == "trials") cfg.trials = std::stol(val);
        else if (key == "seed" || key == "master_seed") cfg.master_seed = std::stoull(val);
        else if (key == "kappa") cfg.kappa = std::stod(val);
        else if (key == "workers") cfg.workers = std::stoi(val);
        else if (key == "edge_indices") {
            cfg.edge_indices.clear();
            std::istringstream ss(val);
            std::string tok;
            while (std::getline(ss, tok, ',')) cfg.edge_indices.push_back(std::stoi(tok));
        } else if (key.rfind("thr.", 0) == 0)
            cfg.thresholds[key.substr(4)] = std::stod(val);
        else if (key.rfind("param.", 0) == 0)
            cfg.params[key.substr(6)] = std::stod(val);
        else
            throw ConfigError("unknown config key: " + key);
    } catch (const std::invalid_argument&) {
        throw ConfigError("bad value for " + key + ": " + val);
    } catch (const std::out_of_range&) {
        throw ConfigError("value out of range for " + key + ": " + val);
    }
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    ExperimentConfig cfg;
    std::string line;
    while (std::getline(f, line)) apply_config_line(cfg, line);
    return cfg;
}

}  // namespace nodallab
