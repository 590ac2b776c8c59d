#include "forgecurve/config.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

namespace forgecurve {

namespace {

using nlohmann::json;

[[noreturn]] void type_error(const std::string& key, const char* expected) {
    throw ConfigError("config key '" + key + "' expects " + expected);
}

int as_int(const std::string& key, const json& v) {
    if (!v.is_number_integer()) type_error(key, "an integer");
    return v.get<int>();
}

long as_long(const std::string& key, const json& v) {
    if (!v.is_number_integer()) type_error(key, "an integer");
    return v.get<long>();
}

double as_double(const std::string& key, const json& v) {
    if (!v.is_number()) type_error(key, "a number");
    return v.get<double>();
}

bool as_bool(const std::string& key, const json& v) {
    if (!v.is_boolean()) type_error(key, "a boolean");
    return v.get<bool>();
}

std::string as_string(const std::string& key, const json& v) {
    if (!v.is_string()) type_error(key, "a string");
    return v.get<std::string>();
}

std::vector<int> as_int_list(const std::string& key, const json& v) {
    if (!v.is_array()) type_error(key, "an array of integers");
    std::vector<int> out;
    for (const auto& item : v) {
        if (!item.is_number_integer()) type_error(key, "an array of integers");
        out.push_back(item.get<int>());
    }
    return out;
}

std::vector<double> as_double_list(const std::string& key, const json& v) {
    if (!v.is_array()) type_error(key, "an array of numbers");
    std::vector<double> out;
    for (const auto& item : v) {
        if (!item.is_number()) type_error(key, "an array of numbers");
        out.push_back(item.get<double>());
    }
    return out;
}

std::vector<std::uint64_t> as_seed_list(const std::string& key, const json& v) {
    if (!v.is_array() || v.empty()) type_error(key, "a non-empty array of non-negative integers");
    std::vector<std::uint64_t> out;
    for (const auto& item : v) {
        if (!item.is_number_integer() ||
            (item.is_number_integer() && !item.is_number_unsigned() && item.get<long long>() < 0)) {
            type_error(key, "a non-empty array of non-negative integers");
        }
        out.push_back(item.get<std::uint64_t>());
    }
    return out;
}

Capacity as_capacity(const std::string& key, const json& v) {
    if (v.is_number_integer()) {
        const long n = v.get<long>();
        if (n < 1) type_error(key, "a positive integer count or a fraction in (0, 1]");
        return Capacity::count(n);
    }
    if (v.is_number_float()) {
        const double f = v.get<double>();
        if (!(f > 0.0) || !(f <= 1.0)) {
            type_error(key, "a positive integer count or a fraction in (0, 1]");
        }
        return Capacity::fraction(f);
    }
    type_error(key, "a positive integer count or a fraction in (0, 1]");
}

void apply_key(RunConfig& cfg, const std::string& key, const json& v) {
    auto& t = cfg.train;
    auto& s = t.stream;
    if (key == "num_tasks") s.num_tasks = as_int(key, v);
    else if (key == "samples_per_task") s.samples_per_task = as_int(key, v);
    else if (key == "num_classes") s.num_classes = as_int(key, v);
    else if (key == "input_dim") s.input_dim = as_int(key, v);
    else if (key == "generator") s.generator = task_generator_from_name(as_string(key, v));
    else if (key == "train_fraction") s.train_fraction = as_double(key, v);
    else if (key == "mean_scale") s.mean_scale = as_double(key, v);
    else if (key == "noise_sigma") s.noise_sigma = as_double(key, v);
    else if (key == "hidden_dims") t.hidden_dims = as_int_list(key, v);
    else if (key == "epochs_per_task") t.epochs_per_task = as_int(key, v);
    else if (key == "replay_epochs_per_event") t.replay_epochs_per_event = as_int(key, v);
    else if (key == "consolidation_epochs") t.consolidation_epochs = as_int(key, v);
    else if (key == "batch_size") t.batch_size = as_int(key, v);
    else if (key == "learning_rate") t.learning_rate = as_double(key, v);
    else if (key == "momentum") t.momentum = as_double(key, v);
    else if (key == "warmup_len") t.clock.warmup_len = as_long(key, v);
    else if (key == "ema_coeff") t.clock.ema_coeff = as_double(key, v);
    else if (key == "epsilon") t.clock.epsilon = as_double(key, v);
    else if (key == "include_warmup_in_tau") t.clock.include_warmup_in_tau = as_bool(key, v);
    else if (key == "beta_base") t.modulator.beta_base = as_double(key, v);
    else if (key == "gamma") t.modulator.gamma = as_double(key, v);
    else if (key == "g_min") t.modulator.g_min = as_double(key, v);
    else if (key == "g_max") t.modulator.g_max = as_double(key, v);
    else if (key == "mode") t.mode = run_mode_from_name(as_string(key, v));
    else if (key == "schedule_days") t.schedule_days = as_double_list(key, v);
    else if (key == "fixed_interval_period") t.fixed_interval_period = as_long(key, v);
    else if (key == "steps_per_day") t.steps_per_day = as_long(key, v);
    else if (key == "memory_capacity") t.memory_capacity = as_capacity(key, v);
    else if (key == "task_balanced_sampling") t.task_balanced_sampling = as_bool(key, v);
    else if (key == "seeds") cfg.seeds = as_seed_list(key, v);
    else if (key == "out") cfg.out_dir = as_string(key, v);
    else throw ConfigError("unknown config key '" + key + "'");
}

}  // namespace

std::vector<std::string> run_config_keys() {
    return {"num_tasks", "samples_per_task", "num_classes", "input_dim", "generator",
            "train_fraction", "mean_scale", "noise_sigma", "hidden_dims", "epochs_per_task",
            "replay_epochs_per_event", "consolidation_epochs", "batch_size", "learning_rate",
            "momentum", "warmup_len", "ema_coeff", "epsilon", "include_warmup_in_tau",
            "beta_base", "gamma", "g_min", "g_max", "mode", "schedule_days",
            "fixed_interval_period", "steps_per_day", "memory_capacity",
            "task_balanced_sampling", "seeds", "out"};
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
    if (!doc.is_object()) {
        throw ConfigError(path + ": config must be a single JSON object");
    }
    RunConfig cfg;
    for (const auto& [key, value] : doc.items()) {
        apply_key(cfg, key, value);
    }
    return cfg;
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
    const std::size_t eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("override '" + assignment + "' is not of the form key=value");
    }
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    json value = json::parse(raw, nullptr, /*allow_exceptions=*/false);
    if (value.is_discarded()) {
        value = raw;  // bare strings need no quotes on the command line
    }
    apply_key(cfg, key, value);
}

}  // namespace forgecurve
