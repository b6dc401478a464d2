#pragma once

#include <random>

#include "minigo/model.hpp"

namespace gen {

/// Random model with at most three process definitions (entry included),
/// at most two channel declarations of capacity 0 or 1, and at most six IR
/// statements per body. With `local_channels`, a process may declare a
/// channel of its own. Loop bounds and capacities are
/// literals. Spawns never occur under unbounded loops and calls only go
/// to later definitions, so every model has a finite state space.
minigo::BehaviouralModel random_model(std::mt19937 &rng, bool local_channels = true);

} // namespace gen
