#ifndef SPEQWL_MANIFEST_HPP
#define SPEQWL_MANIFEST_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace speqwl {

// Reproducibility log written alongside every CLI output: re-running the
// subcommand with the recorded flags reproduces the outputs byte for byte.
struct RunManifest {
    std::string subcommand;
    std::map<std::string, std::string> flags;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::uint64_t seed = 0;
    std::map<std::string, double> timings_seconds;

    void write(const std::filesystem::path& path) const;
};

}  // namespace speqwl

#endif  // SPEQWL_MANIFEST_HPP
