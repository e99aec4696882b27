#pragma once

#include "mmsim/env/action.hpp"
#include "mmsim/env/environment.hpp"

#include <cstdint>
#include <string>

namespace mmsim {

/// A quoting policy. act() must be deterministic given the observation
/// history and the seed passed to reset().
class Agent {
public:
    virtual ~Agent() = default;
    virtual QuoteSet act(const Observation& obs) = 0;
    virtual std::string name() const = 0;
    virtual void reset(std::uint64_t /*seed*/) {}
};

}  // namespace mmsim
