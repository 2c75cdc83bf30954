#include "netalign/config.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "netalign/errors.h"

namespace netalign {
namespace {

const std::set<std::string>& KnownKeys() {
  static const std::set<std::string> keys = {
      "seed",     "threads",   "standardize", "signed",    "grid",
      "noise_levels", "walks", "walk_length", "p",         "q",
      "dim",      "window",    "negatives",   "sg_epochs", "sg_lr",
      "lambda",   "eta",       "epochs",      "batch",     "variant",
      "snapshot_every", "loss_mode", "hidden", "slope",    "lr",
      "g_lr",     "d_lr",      "beta1",       "beta2",     "adam_eps"};
  return keys;
}

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double ToDouble(const std::string& key, const std::string& value) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw std::invalid_argument(key + ": '" + value + "' is not a number");
  return v;
}

long long ToInt(const std::string& key, const std::string& value) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw std::invalid_argument(key + ": '" + value + "' is not an integer");
  return v;
}

const std::string* Find(const ConfigMap& config, const std::string& key) {
  auto it = config.find(key);
  return it == config.end() ? nullptr : &it->second;
}

int ToIntField(const ConfigMap& c, const std::string& key, int fallback) {
  return static_cast<int>(GetInt(c, key, fallback));
}

}  // namespace

ConfigMap ParseConfigText(std::istream& in) {
  ConfigMap config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string trimmed = Trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected key=value");
    const std::string key = Trim(trimmed.substr(0, eq));
    if (key.empty()) throw ParseError(line_no, "empty key");
    config[key] = Trim(trimmed.substr(eq + 1));
  }
  return config;
}

ConfigMap ReadConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config '" + path + "'");
  return ParseConfigText(in);
}

void ValidateKeys(const ConfigMap& config) {
  for (const auto& [key, value] : config)
    if (!KnownKeys().contains(key))
      throw std::invalid_argument("unknown configuration key '" + key + "'");
}

double GetDouble(const ConfigMap& config, const std::string& key, double fallback) {
  const std::string* v = Find(config, key);
  return v == nullptr ? fallback : ToDouble(key, *v);
}

long long GetInt(const ConfigMap& config, const std::string& key, long long fallback) {
  const std::string* v = Find(config, key);
  return v == nullptr ? fallback : ToInt(key, *v);
}

bool GetBool(const ConfigMap& config, const std::string& key, bool fallback) {
  const std::string* v = Find(config, key);
  if (v == nullptr) return fallback;
  if (*v == "1" || *v == "true" || *v == "yes" || *v == "on") return true;
  if (*v == "0" || *v == "false" || *v == "no" || *v == "off") return false;
  throw std::invalid_argument(key + ": '" + *v + "' is not a boolean");
}

std::vector<double> GetDoubleList(const ConfigMap& config, const std::string& key,
                                  std::vector<double> fallback) {
  const std::string* v = Find(config, key);
  if (v == nullptr) return fallback;
  std::vector<double> out;
  std::stringstream ss(*v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = Trim(item);
    if (!item.empty()) out.push_back(ToDouble(key, item));
  }
  return out;
}

void ApplyWalkConfig(const ConfigMap& c, WalkConfig& cfg) {
  cfg.walks_per_node = ToIntField(c, "walks", cfg.walks_per_node);
  cfg.walk_length = ToIntField(c, "walk_length", cfg.walk_length);
  cfg.return_param_p = GetDouble(c, "p", cfg.return_param_p);
  cfg.inout_param_q = GetDouble(c, "q", cfg.inout_param_q);
  cfg.seed = static_cast<std::uint64_t>(GetInt(c, "seed", static_cast<long long>(cfg.seed)));
}

void ApplySkipGramConfig(const ConfigMap& c, SkipGramConfig& cfg) {
  cfg.dim = ToIntField(c, "dim", cfg.dim);
  cfg.window = ToIntField(c, "window", cfg.window);
  cfg.negatives_per_positive = ToIntField(c, "negatives", cfg.negatives_per_positive);
  cfg.epochs = ToIntField(c, "sg_epochs", cfg.epochs);
  cfg.learning_rate = GetDouble(c, "sg_lr", cfg.learning_rate);
  cfg.seed = static_cast<std::uint64_t>(GetInt(c, "seed", static_cast<long long>(cfg.seed)));
}

void ApplyTrainConfig(const ConfigMap& c, TrainConfig& cfg) {
  cfg.lambda = GetDouble(c, "lambda", cfg.lambda);
  cfg.eta = ToIntField(c, "eta", cfg.eta);
  cfg.epochs = ToIntField(c, "epochs", cfg.epochs);
  cfg.batch_size = ToIntField(c, "batch", cfg.batch_size);
  cfg.seed = static_cast<std::uint64_t>(GetInt(c, "seed", static_cast<long long>(cfg.seed)));
  cfg.snapshot_every = ToIntField(c, "snapshot_every", cfg.snapshot_every);
  cfg.hidden_units = ToIntField(c, "hidden", cfg.hidden_units);
  cfg.leaky_slope = GetDouble(c, "slope", cfg.leaky_slope);
  if (const std::string* v = Find(c, "variant")) {
    if (*v == "linear") {
      cfg.mapper_variant = MapperVariant::kLinear;
    } else if (*v == "nonlinear") {
      cfg.mapper_variant = MapperVariant::kNonlinear;
    } else {
      throw std::invalid_argument("variant must be 'linear' or 'nonlinear'");
    }
  }
  if (const std::string* v = Find(c, "loss_mode")) {
    if (*v == "saturating") {
      cfg.generator_loss_mode = GeneratorLossMode::kSaturating;
    } else if (*v == "nonsaturating") {
      cfg.generator_loss_mode = GeneratorLossMode::kNonsaturating;
    } else {
      throw std::invalid_argument("loss_mode must be 'saturating' or 'nonsaturating'");
    }
  }
  const double lr = GetDouble(c, "lr", -1.0);
  if (lr > 0) cfg.generator_adam.learning_rate = cfg.critic_adam.learning_rate = lr;
  cfg.generator_adam.learning_rate = GetDouble(c, "g_lr", cfg.generator_adam.learning_rate);
  cfg.critic_adam.learning_rate = GetDouble(c, "d_lr", cfg.critic_adam.learning_rate);
  for (AdamConfig* a : {&cfg.generator_adam, &cfg.critic_adam}) {
    a->beta1 = GetDouble(c, "beta1", a->beta1);
    a->beta2 = GetDouble(c, "beta2", a->beta2);
    a->epsilon = GetDouble(c, "adam_eps", a->epsilon);
  }
}

ConfigMap TrainConfigToMap(const TrainConfig& cfg) {
  ConfigMap m;
  m["lambda"] = FormatDouble(cfg.lambda);
  m["eta"] = std::to_string(cfg.eta);
  m["epochs"] = std::to_string(cfg.epochs);
  m["batch"] = std::to_string(cfg.batch_size);
  m["seed"] = std::to_string(static_cast<long long>(cfg.seed));
  m["variant"] = cfg.mapper_variant == MapperVariant::kLinear ? "linear" : "nonlinear";
  m["snapshot_every"] = std::to_string(cfg.snapshot_every);
  m["loss_mode"] = cfg.generator_loss_mode == GeneratorLossMode::kSaturating
                       ? "saturating"
                       : "nonsaturating";
  m["hidden"] = std::to_string(cfg.hidden_units);
  m["slope"] = FormatDouble(cfg.leaky_slope);
  m["g_lr"] = FormatDouble(cfg.generator_adam.learning_rate);
  m["d_lr"] = FormatDouble(cfg.critic_adam.learning_rate);
  m["beta1"] = FormatDouble(cfg.generator_adam.beta1);
  m["beta2"] = FormatDouble(cfg.generator_adam.beta2);
  m["adam_eps"] = FormatDouble(cfg.generator_adam.epsilon);
  return m;
}

std::vector<TrainConfig> ParseGrid(std::istream& in, const TrainConfig& base) {
  std::vector<TrainConfig> grid;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string trimmed = Trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    if (trimmed == "default") {
      auto defaults = DefaultGrid(base);
      grid.insert(grid.end(), defaults.begin(), defaults.end());
      continue;
    }
    ConfigMap overrides;
    std::istringstream tokens(trimmed);
    std::string token;
    while (tokens >> token) {
      const auto eq = token.find('=');
      if (eq == std::string::npos || eq == 0)
        throw ParseError(line_no, "expected key=value, got '" + token + "'");
      overrides[token.substr(0, eq)] = token.substr(eq + 1);
    }
    ValidateKeys(overrides);
    TrainConfig cfg = base;
    ApplyTrainConfig(overrides, cfg);
    cfg.Validate();
    grid.push_back(cfg);
  }
  if (grid.empty()) throw DataError("grid file defines no configurations");
  return grid;
}

std::vector<TrainConfig> ReadGridFile(const std::string& path, const TrainConfig& base) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open grid '" + path + "'");
  return ParseGrid(in, base);
}

}  // namespace netalign
