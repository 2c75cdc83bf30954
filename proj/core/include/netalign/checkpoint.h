#ifndef NETALIGN_CHECKPOINT_H_
#define NETALIGN_CHECKPOINT_H_

#include <iosfwd>
#include <string>

#include "netalign/losses.h"
#include "netalign/trainer.h"

namespace netalign {

struct Checkpoint {
  AlignerParams params;
  TrainConfig config;
};

// JSON with every network's shapes and values plus the training config.
// Doubles are written in round-trip form, so save/load is exact.
void SaveCheckpoint(const Checkpoint& ckpt, std::ostream& out);
void SaveCheckpointFile(const Checkpoint& ckpt, const std::string& path);

// Throws DataError on malformed JSON or inconsistent shapes.
Checkpoint LoadCheckpoint(std::istream& in);
Checkpoint LoadCheckpointFile(const std::string& path);

}  // namespace netalign

#endif  // NETALIGN_CHECKPOINT_H_
