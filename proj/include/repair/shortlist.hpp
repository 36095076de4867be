#pragma once

#include <span>
#include <vector>

#include "repair/types.hpp"

namespace repair {

// Top-k shortlist under the base scores, descending score, ties broken by
// ascending class id. Throws ShortlistTooLarge when k exceeds the scored
// classes of the record.
ShortlistContext build_shortlist(const ScoreRecord& r, int k, int K);

// Shortlists for every record, input order preserved.
std::vector<ShortlistContext> build_contexts(const Dataset& d, int k);

// Fraction of contexts with covered == true. Throws EmptyInput.
double coverage(std::span<const ShortlistContext> contexts);

// Only the covered contexts, input order preserved.
std::vector<ShortlistContext> covered_subset(const Dataset& d, int k);
std::vector<ShortlistContext> covered_subset(std::span<const ShortlistContext> contexts);

}  // namespace repair
