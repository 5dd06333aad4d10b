#pragma once

#include <string>

#include "safecritic/params.hpp"

namespace sc {

// Checkpoint file: one text header line "safecritic-checkpoint v1 <count>",
// then <count> manifest lines "name dim[,dim...]", then the raw 64-bit
// little-endian values in manifest order.
void save_checkpoint(const std::string& path, const ParamStore& params);

// Loads into an already-constructed model; names and shapes must match the
// store exactly.
void load_checkpoint(const std::string& path, ParamStore& params);

}  // namespace sc
