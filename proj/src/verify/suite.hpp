#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "big/context.hpp"
#include "json.hpp"

namespace ttlift::verify {

enum class Status { pass, fail, skipped };

struct Entry {
    std::string id;
    std::string group;
    Status status = Status::skipped;
    bool asserted = true;
    double max_residual = 0.0;
    bool exact_zero = true;
    int window = -1;  // smallest valid degree the residual was evaluated on
    std::string level_band;
    int samples = 0;
    std::uint64_t seed = 0;
    std::string note;
};

struct Options {
    std::vector<std::string> groups;  // empty = all
    std::uint64_t seed = 1;
    double tolerance = 1e-9;
    bool parallel = true;
};

const std::vector<std::string>& check_groups();
// Throws std::invalid_argument on an unknown group name.
std::vector<std::string> parse_groups(const std::string& csv);

std::vector<Entry> run_checks(const big::BigContext& ctx, const Options& opt);
// true iff no asserted entry failed
bool all_pass(const std::vector<Entry>& entries);

std::string status_name(Status s);
nlohmann::ordered_json entries_json(const std::vector<Entry>& entries);
std::string table(const std::vector<Entry>& entries);

}  // namespace ttlift::verify
