#pragma once

#include <random>
#include <string>

namespace gen {

/// Random MiniGo source: an entry `main`, workers taking channel
/// parameters, and optionally a second entry. Every name is distinct and
/// every call targets a later declaration, so the program is well formed.
std::string random_program(std::mt19937 &rng);

} // namespace gen
