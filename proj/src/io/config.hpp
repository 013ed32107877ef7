#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "big/context.hpp"
#include "json.hpp"

namespace ttlift::io {

/// Schema violation; `pointer` is the JSON pointer of the offending node.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& pointer, const std::string& msg)
        : std::runtime_error(pointer + ": " + msg), pointer_(pointer) {}
    const std::string& pointer() const { return pointer_; }

private:
    std::string pointer_;
};

// mono entries are [sector (0 hol, 1 antihol), level, flavor (1-based), exponent]
struct RawTerm {
    std::string re = "0";
    std::string im = "0";
    std::vector<std::array<int, 4>> mono;
};
using RawSeries = std::vector<RawTerm>;
using RawMatrix = std::vector<std::vector<RawSeries>>;
using RationalMatrix = std::vector<std::vector<std::string>>;

struct RawReal {
    std::string kind = "K";  // "K", "H" or "abs_a"
    RawMatrix matrix;
    RawSeries a;
};

struct RawCV {
    RawMatrix U, Q;
};

struct ModelConfig {
    std::string name;
    std::string note;
    int N = 1;
    RationalMatrix eta;
    int unit_index = 1;
    RawSeries prepotential;
    RationalMatrix euler_Q;
    std::vector<std::string> euler_r;
    std::string weight_d = "0";
    std::optional<RawReal> real_structure;
    std::optional<RawMatrix> potential_A;
    std::optional<RawCV> cv;
    big::Truncation truncation;
    ScalarMode scalar_mode = ScalarMode::rational;
    double tolerance = 1e-9;
    std::uint64_t seed = 1;
    std::optional<RationalMatrix> theta_constants;
    big::Normalization normalization = big::Normalization::liu;
};

ModelConfig parse_config(const nlohmann::ordered_json& j);
ModelConfig load_config(const std::string& path);
nlohmann::ordered_json to_json(const ModelConfig& c);
std::string serialize(const ModelConfig& c);

// Small-phase model; series live in the ring (N, 0, d_max + 4, mode).
small::FrobeniusModel to_model(const ModelConfig& c);
// Throws ConfigError on a bad truncation.
void check_truncation(const big::Truncation& t);

struct BuiltinInfo {
    std::string name;
    std::string summary;
};
std::vector<BuiltinInfo> builtin_models();
bool is_builtin(const std::string& name);
ModelConfig builtin_config(const std::string& name);
ModelConfig rand2d_config(std::uint64_t model_seed);

// Resolves a builtin name, a path, or a name under the model directory.
ModelConfig resolve_model(const std::string& spec, const std::string& model_dir);

std::string mode_name(ScalarMode m);
std::string normalization_name(big::Normalization n);

}  // namespace ttlift::io
