#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cqexp/extended.hpp"
#include "cqexp/states.hpp"

namespace cqexp {

// On-disk channel description: alphabet size, optional input distribution
// (uniform by default), complex output matrices with entries as [re, im]
// pairs, and an optional symmetry block of unitaries.
struct ChannelSpec {
    std::int64_t d = 2;
    std::optional<std::vector<double>> input_distribution;
    std::vector<Matrix> outputs;
    std::optional<std::vector<Matrix>> symmetry;
};

ChannelSpec parse_channel_spec(const std::string& json_text);
ChannelSpec load_channel_spec(const std::string& path);
std::string serialize_channel_spec(const ChannelSpec& spec);

// Normalization repair is opt-in: when enabled, slightly denormalized
// probabilities and traces are rescaled before validation.
CQChannel to_channel(const ChannelSpec& spec, bool repair_normalization = false,
                     const Tolerances& tol = default_tolerances());
ProbabilityVector input_distribution(const ChannelSpec& spec,
                                     bool repair_normalization = false,
                                     const Tolerances& tol = default_tolerances());
std::optional<GroupAction> spec_action(const ChannelSpec& spec);

// Stable numeric formatting for CSV output: shortest %.12g form with a
// trailing ".0" for integral values; extended reals serialize as "inf".
std::string format_double(double v);
std::string format_extended(const ExtendedReal& v);

} // namespace cqexp
