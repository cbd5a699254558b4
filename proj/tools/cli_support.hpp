#pragma once

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "mxcomm/multiplex.hpp"
#include "mxcomm/walks.hpp"

namespace mxcli {

using json = nlohmann::ordered_json;

inline constexpr int kExitUsage = 2;
inline constexpr int kExitNotFound = 3;
inline constexpr int kExitParse = 4;
inline constexpr int kExitRange = 5;
inline constexpr int kExitNumerical = 6;

/// Parameter outside its admissible range.
class RangeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Output stream bound to a path, or stdout for "" / "-".
class Output {
public:
    explicit Output(const std::string& path) {
        if (path.empty() || path == "-") return;
        file_ = std::make_unique<std::ofstream>(path);
        if (!*file_) throw std::system_error(errno, std::generic_category(), "cannot open " + path);
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

/// Shortest representation that round-trips.
inline std::string fmt(double x) {
    char buf[32];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

/// CSV quoting for labels containing separators.
inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

/// First line of every CSV artifact.
inline void write_header(std::ostream& out, const std::string& schema, const json& config) {
    out << "# schema=" << schema << " config=" << config.dump() << '\n';
}

struct InputOptions {
    std::string path;
    std::string meta;
    bool directed = false;
    bool weighted = false;
};

struct LoadedNetwork {
    mxcomm::MultiplexNetwork net;
    std::vector<std::string> warnings;
};

inline LoadedNetwork load_input(const InputOptions& in) {
    mxcomm::LoadOptions options{in.directed, in.weighted};
    if (!in.meta.empty()) {
        if (!std::filesystem::exists(in.meta)) {
            throw std::system_error(std::make_error_code(std::errc::no_such_file_or_directory), in.meta);
        }
        auto meta = mxcomm::read_metadata(in.meta);
        if (meta.directed) options.directed = *meta.directed;
        if (meta.weighted) options.weighted = *meta.weighted;
    }
    LoadedNetwork result;
    result.net = mxcomm::load_multiplex(std::filesystem::path(in.path), options, &result.warnings);
    return result;
}

struct WalkOptions {
    std::string kind = "classical";
    double omega = 1.0;
    double relax_rate = 0.5;
    std::string switch_file;
    std::optional<double> teleport;
};

struct BuiltWalk {
    mxcomm::TransitionModel model;
    mxcomm::VolumeVector volumes;
    double teleport = 0.0;
};

mxcomm::LayerSwitchWeights read_switch_file(const mxcomm::MultiplexNetwork& net, const std::string& path);

BuiltWalk build_walk(const mxcomm::MultiplexNetwork& net, const WalkOptions& walk);

json walk_config(const WalkOptions& walk, const BuiltWalk& built);

/// Resolves "node@layer" or fails with RangeError.
mxcomm::StateId resolve_state(const mxcomm::MultiplexNetwork& net, const std::string& label);
mxcomm::NodeId resolve_node(const mxcomm::MultiplexNetwork& net, const std::string& label);

/// One state node per line ("node@layer" or "node layer"); '#' comments.
std::vector<mxcomm::StateId> read_state_list(const mxcomm::MultiplexNetwork& net, const std::string& path);

} // namespace mxcli
