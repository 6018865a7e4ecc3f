#include "speqwl/manifest.hpp"

#include <fstream>

#include "json.hpp"
#include "speqwl/errors.hpp"

namespace speqwl {

void RunManifest::write(const std::filesystem::path& path) const {
    nlohmann::json j;
    j["subcommand"] = subcommand;
    j["flags"] = flags;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    j["seed"] = seed;
    j["timings_seconds"] = timings_seconds;
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

}  // namespace speqwl
