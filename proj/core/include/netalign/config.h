#ifndef NETALIGN_CONFIG_H_
#define NETALIGN_CONFIG_H_

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "netalign/trainer.h"
#include "netalign/walk_embedding.h"

namespace netalign {

// Flat `key=value` settings. Keys are the long CLI flag names, so a config
// file and the command line share one vocabulary:
//
//   seed, threads, standardize, signed, grid, noise_levels
//   walks, walk_length, p, q
//   dim, window, negatives, sg_epochs, sg_lr
//   lambda, eta, epochs, batch, variant, snapshot_every, loss_mode, hidden,
//   slope, lr, g_lr, d_lr, beta1, beta2, adam_eps
using ConfigMap = std::map<std::string, std::string>;

// '#' starts a comment line; blank lines ignored; whitespace around keys and
// values trimmed. Throws ParseError on a line without '='.
ConfigMap ParseConfigText(std::istream& in);
ConfigMap ReadConfigFile(const std::string& path);

// Throws std::invalid_argument naming the first unrecognized key.
void ValidateKeys(const ConfigMap& config);

// Each applies the keys it understands and leaves the rest of the struct
// untouched. Throw std::invalid_argument on malformed values.
void ApplyWalkConfig(const ConfigMap& config, WalkConfig& cfg);
void ApplySkipGramConfig(const ConfigMap& config, SkipGramConfig& cfg);
void ApplyTrainConfig(const ConfigMap& config, TrainConfig& cfg);

// Inverse of ApplyTrainConfig (every key written, values round-trip exactly).
ConfigMap TrainConfigToMap(const TrainConfig& cfg);

// Typed accessors used by the pipeline and the CLI.
double GetDouble(const ConfigMap& config, const std::string& key, double fallback);
long long GetInt(const ConfigMap& config, const std::string& key, long long fallback);
bool GetBool(const ConfigMap& config, const std::string& key, bool fallback);
std::vector<double> GetDoubleList(const ConfigMap& config, const std::string& key,
                                  std::vector<double> fallback);

// One grid entry per non-comment line, each a whitespace-separated list of
// key=value overrides on top of `base`. A line reading `default` expands to
// DefaultGrid(base). Throws ParseError / std::invalid_argument.
std::vector<TrainConfig> ParseGrid(std::istream& in, const TrainConfig& base);
std::vector<TrainConfig> ReadGridFile(const std::string& path, const TrainConfig& base);

}  // namespace netalign

#endif  // NETALIGN_CONFIG_H_
