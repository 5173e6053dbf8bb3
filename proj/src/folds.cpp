#include "facecue/folds.hpp"

#include <algorithm>

#include "facecue/errors.hpp"
#include "facecue/rng.hpp"

namespace facecue {
namespace {

std::vector<std::string> unique_sorted(std::vector<std::string> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

void check_k(std::size_t n_subjects, int k) {
    if (k < 2) throw Error(Errc::ConfigInvalid, "k must be at least 2");
    if (n_subjects < static_cast<std::size_t>(k))
        throw Error(Errc::TooFewSubjects, std::to_string(n_subjects) + " subjects cannot fill " +
                                              std::to_string(k) + " folds");
}

} // namespace

int FoldPlan::fold_of(const std::string& subject_id) const {
    const auto it = assignment.find(subject_id);
    if (it == assignment.end())
        throw Error(Errc::FoldCoverage, "subject '" + subject_id + "' missing from the fold plan");
    return it->second;
}

FoldPlan grouped_kfold(std::vector<std::string> subject_ids, int k, std::uint64_t seed) {
    auto ids = unique_sorted(std::move(subject_ids));
    check_k(ids.size(), k);

    SplitMix64 rng(derive_seed(seed, 0x6B666F6C64ULL)); // "kfold"
    rng.shuffle(ids);

    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    for (std::size_t i = 0; i < ids.size(); ++i)
        plan.assignment[ids[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
    return plan;
}

FoldPlan grouped_kfold_stratified(std::vector<std::string> subject_ids,
                                  const std::map<std::string, AnxietyClass>& label_of, int k,
                                  std::uint64_t seed) {
    auto ids = unique_sorted(std::move(subject_ids));
    check_k(ids.size(), k);

    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    std::size_t deal = 0;
    for (AnxietyClass c : {AnxietyClass::Anxious, AnxietyClass::Neutral, AnxietyClass::NonAnxious}) {
        std::vector<std::string> group;
        for (const auto& id : ids) {
            const auto it = label_of.find(id);
            if (it == label_of.end())
                throw Error(Errc::FoldCoverage, "subject '" + id + "' has no label for stratification");
            if (it->second == c) group.push_back(id);
        }
        SplitMix64 rng(derive_seed(seed, 0x6B666F6C64ULL, static_cast<std::uint64_t>(c) + 1));
        rng.shuffle(group);
        for (const auto& id : group)
            plan.assignment[id] = static_cast<int>(deal++ % static_cast<std::size_t>(k));
    }
    return plan;
}

} // namespace facecue
