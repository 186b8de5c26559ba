#pragma once

#include <string>

#include "relcap/params.hpp"

namespace relcap {

constexpr int kCheckpointFormatVersion = 1;

// Checkpoints are a single JSON document: parameter name -> {shape, data},
// keys sorted lexicographically, plus a "format_version" field. Doubles are
// written with round-trip precision, so save/load is bit-exact.
std::string checkpoint_to_json(const ParamStore& params);
ParamStore checkpoint_from_json(const std::string& text);

void save_checkpoint(const ParamStore& params, const std::string& path);
ParamStore load_checkpoint(const std::string& path);

}  // namespace relcap
