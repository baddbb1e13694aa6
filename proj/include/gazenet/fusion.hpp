#pragma once

#include <cstddef>

#include "gazenet/model.hpp"

namespace gazenet {

// Elements in [0,1] summing to 1 within tol.
bool is_valid_scores(const ScoreVector& s, double tol = 1e-6);

// Per-class mean of the two eye scores.
ScoreVector fuse_scores(const ScoreVector& left, const ScoreVector& right);

// Argmax, ties to the lowest index.
std::size_t predict_class(const ScoreVector& score);

}  // namespace gazenet
