#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "facecue/dataset.hpp"

namespace facecue {

// Subject-level fold assignment; all samples of a subject inherit its fold.
struct FoldPlan {
    int k = 0;
    std::map<std::string, int> assignment;
    std::uint64_t seed = 0;

    int fold_of(const std::string& subject_id) const; // throws Error(FoldCoverage)
};

// Seeded shuffle of the (deduplicated, sorted) subject ids followed by a
// round-robin deal into k folds; fold sizes differ by at most one subject.
FoldPlan grouped_kfold(std::vector<std::string> subject_ids, int k, std::uint64_t seed);

// Label-stratified variant: each label's subjects are shuffled and dealt
// round-robin separately, continuing the deal across labels so overall fold
// sizes still differ by at most one.
FoldPlan grouped_kfold_stratified(std::vector<std::string> subject_ids,
                                  const std::map<std::string, AnxietyClass>& label_of, int k,
                                  std::uint64_t seed);

} // namespace facecue
