#include "relcap/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace relcap {

using nlohmann::json;

std::string checkpoint_to_json(const ParamStore& params) {
  json doc = json::object();
  doc["format_version"] = kCheckpointFormatVersion;
  for (const auto& [name, tensor] : params) {
    if (name == "format_version") {
      throw std::invalid_argument("checkpoint: parameter name \"format_version\" is reserved");
    }
    json entry = json::object();
    entry["shape"] = tensor.shape;
    entry["data"] = tensor.data;
    doc[name] = std::move(entry);
  }
  return doc.dump();
}

ParamStore checkpoint_from_json(const std::string& text) {
  json doc = json::parse(text);
  if (!doc.is_object()) throw std::runtime_error("checkpoint: expected a JSON object");
  if (!doc.contains("format_version")) {
    throw std::runtime_error("checkpoint: missing format_version");
  }
  int version = doc.at("format_version").get<int>();
  if (version != kCheckpointFormatVersion) {
    throw std::runtime_error("checkpoint: unsupported format_version " +
                             std::to_string(version));
  }
  ParamStore params;
  for (const auto& [key, entry] : doc.items()) {
    if (key == "format_version") continue;
    std::vector<std::size_t> shape = entry.at("shape").get<std::vector<std::size_t>>();
    std::vector<double> data = entry.at("data").get<std::vector<double>>();
    if (shape_numel(shape) != data.size()) {
      throw std::runtime_error("checkpoint: parameter \"" + key + "\" has " +
                               std::to_string(data.size()) + " values for shape " +
                               shape_str(shape));
    }
    params.add(key, Tensor(std::move(shape), std::move(data)));
  }
  return params;
}

void save_checkpoint(const ParamStore& params, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("checkpoint: cannot open \"" + path + "\" for writing");
  out << checkpoint_to_json(params) << "\n";
}

ParamStore load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open \"" + path + "\"");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return checkpoint_from_json(text);
}

}  // namespace relcap
