#include "manifest.hpp"

#include "infodiv/errors.hpp"
#include "infodiv/io.hpp"
#include "infodiv/random.hpp"
#include "json.hpp"

namespace infodiv::cli {

using nlohmann::json;

std::string RunManifest::to_json() const {
  json j;
  j["command"] = command;
  j["params"] = params;
  j["seed"] = seed;
  j["input_digests"] = input_digests;
  j["tool_version"] = tool_version;
  return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(const std::string& text) {
  RunManifest m;
  try {
    const json j = json::parse(text);
    m.command = j.at("command").get<std::string>();
    m.params = j.at("params").get<std::map<std::string, std::string>>();
    m.seed = j.value("seed", std::uint64_t{0});
    m.input_digests = j.value("input_digests", std::map<std::string, std::string>{});
    m.tool_version = j.value("tool_version", std::string{});
  } catch (const json::exception& e) {
    throw ValidationError(std::string("manifest: ") + e.what());
  }
  return m;
}

std::vector<std::string> RunManifest::to_args() const {
  std::vector<std::string> args{command};
  for (const auto& [flag, value] : params) {
    if (value == "true") {
      args.push_back("--" + flag);
    } else if (value != "false") {
      args.push_back("--" + flag);
      args.push_back(value);
    }
  }
  return args;
}

std::string tool_version() { return INFODIV_VERSION; }

std::string file_digest(const std::filesystem::path& path) {
  return io::to_hex(fnv1a64(io::read_file(path)));
}

std::filesystem::path manifest_path(const std::filesystem::path& output) {
  return output.string() + ".manifest.json";
}

}  // namespace infodiv::cli
