#pragma once

#include <span>
#include <vector>

namespace gfamix {

/// Mann-Whitney AUC with half credit for ties. Throws ValidationError when
/// lengths differ or only one class is present.
double auc(std::span<const double> scores, std::span<const int> labels);

/// Hubert-Arabie adjusted Rand index between two labelings of equal length.
double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

} // namespace gfamix
