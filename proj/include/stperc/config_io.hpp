#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "stperc/configuration.hpp"
#include "stperc/rc.hpp"
#include "stperc/spacetime.hpp"

namespace stperc {

// Text formats. Every time is written with 17 significant digits, so a
// write/read cycle reproduces the exact double values; loading validates all
// structural invariants.

void write_configuration(std::ostream& os, const Configuration& config,
                         const SpaceTimeBox& box, uint64_t seed, uint64_t replica);
std::string configuration_to_string(const Configuration& config, const SpaceTimeBox& box,
                                    uint64_t seed, uint64_t replica);

struct LoadedConfiguration {
    Configuration config;
    SpaceTimeBox box;
    uint64_t seed = 0;
    uint64_t replica = 0;
};

LoadedConfiguration read_configuration(std::istream& is);

// Chain checkpoint: the configuration format plus spin pieces and the chain
// stream position; resuming from it is bit-exact.
void write_checkpoint(std::ostream& os, const RcState& state);
std::string checkpoint_to_string(const RcState& state);
RcState read_checkpoint(std::istream& is);

void save_text_file(const std::string& path, const std::string& content);
std::string load_text_file(const std::string& path);

}  // namespace stperc
