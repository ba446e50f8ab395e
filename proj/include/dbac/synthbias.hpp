#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dbac/corpus.hpp"

namespace dbac {

// One controlled subset: a task word and two interchangeable verb classes
// whose usage frequency is the only gendered signal in the captions.
struct ControlledSubset {
    std::string task;
    std::vector<std::string> verb_class_1;
    std::vector<std::string> verb_class_2;
};

struct Ratio {
    int r1 = 0;  // captions using verb class 1 (per gender, majority side)
    int r2 = 0;  // captions using verb class 2
};

struct ControlledSpec {
    std::vector<ControlledSubset> subsets;
    int per_gender_count = 50;
    Ratio ratio{30, 20};
    std::vector<std::string> templates;  // placeholders: {gender} {verb} {task} {place}
    std::vector<std::string> places;
    std::uint64_t seed = 0;
};

// The built-in three subsets (bed: lay/sit, frisbee: throw/play,
// umbrella: hold/walk) with default templates.
ControlledSpec default_controlled_spec();

// Generates per subset `per_gender_count` male and `per_gender_count` female
// records. Male captions use verb class 1 r1 times and class 2 r2 times;
// female captions reverse the ratio. Male/female records are built from
// identical caption skeletons, so apart from gender words and verb choice the
// token statistics match exactly across genders. MGC == HGC. Requires
// r1 + r2 == per_gender_count and r1 > r2 >= 0.
Dataset generate_controlled(const ControlledSpec& spec);

// Same spec evaluated at several ratios (shared seed and templates).
std::vector<Dataset> ratio_sweep(const ControlledSpec& base, const std::vector<Ratio>& ratios);

// The four ratio settings used by the controlled experiment.
const std::vector<Ratio>& default_ratio_ladder();

}  // namespace dbac
