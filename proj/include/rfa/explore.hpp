#pragma once

#include "rfa/geometry.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rfa {

struct ExploreReport {
    std::uint64_t states = 0;      // distinct states visited
    std::uint64_t transitions = 0; // deliveries simulated
    std::uint64_t terminals = 0;   // states with nothing left to deliver
    bool truncated = false;        // state_limit reached
    std::vector<std::string> violations;
};

/// Every delivery interleaving of a fault-free broadcast with identity frames and an exact
/// channel (t = 0, sender 0). Checks that each terminal state has every node output
/// exactly the same vector, within 1e-12 of u, that epochs only grow, that ready1 is never
/// sent straight from epoch 1, and that nobody outputs twice.
ExploreReport explore_arcast(std::size_t n, const UnitVector& u, std::uint64_t state_limit = 5'000'000);

/// Every interleaving of broadcast completions and IC deliveries seen by the agreement
/// layer of n fault-free nodes (n <= 6) with distinct inputs. Checks identical election and
/// that every node outputs exactly the elected sender's input.
ExploreReport explore_agreement(std::size_t n, std::uint64_t state_limit = 5'000'000);

} // namespace rfa
