#pragma once

#include <string>

#include "minigo/checker.hpp"
#include "minigo/model.hpp"

namespace minigo {

/// Renders `model` as a Promela unit with every parameter replaced by its
/// value from `bounds`. Throws MissingBound if a parameter has no value.
std::string emit_model(const BehaviouralModel &model, const Bounds &bounds);

/// File name used for the partition at position `index` of its source.
std::string promela_file_name(const BehaviouralModel &model, std::size_t index);

} // namespace minigo
