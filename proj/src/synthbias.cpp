#include "dbac/synthbias.hpp"

#include <sstream>

#include "dbac/error.hpp"
#include "dbac/rng.hpp"

namespace dbac {

namespace {

const std::vector<std::pair<std::string, std::string>>& gender_word_pairs() {
    static const std::vector<std::pair<std::string, std::string>> kPairs = {
        {"man", "woman"}, {"boy", "girl"}, {"gentleman", "lady"}};
    return kPairs;
}

std::string fill_template(std::string text, const std::string& gender,
                          const std::string& verb, const std::string& task,
                          const std::string& place) {
    auto replace_all = [&](const std::string& key, const std::string& value) {
        std::size_t pos = 0;
        while ((pos = text.find(key, pos)) != std::string::npos) {
            text.replace(pos, key.size(), value);
            pos += value.size();
        }
    };
    replace_all("{gender}", gender);
    replace_all("{verb}", verb);
    replace_all("{task}", task);
    replace_all("{place}", place);
    return text;
}

}  // namespace

ControlledSpec default_controlled_spec() {
    ControlledSpec spec;
    spec.subsets = {
        {"bed", {"laying", "lay", "lays"}, {"sitting", "sat", "sits"}},
        {"frisbee", {"throwing", "throws", "threw"}, {"playing", "plays", "played"}},
        {"umbrella", {"holding", "holds", "held"}, {"walking", "walks", "walked"}},
    };
    spec.per_gender_count = 50;
    spec.ratio = {30, 20};
    spec.templates = {
        "a {gender} {verb} with the {task} at the {place}",
        "the {gender} {verb} near a {task} by the {place}",
        "a {gender} {verb} beside the {task}",
        "one {gender} {verb} close to a {task} at the {place}",
    };
    spec.places = {"park", "room", "street", "beach", "market"};
    spec.seed = 0;
    return spec;
}

const std::vector<Ratio>& default_ratio_ladder() {
    static const std::vector<Ratio> kLadder = {{30, 20}, {35, 15}, {40, 10}, {45, 5}};
    return kLadder;
}

Dataset generate_controlled(const ControlledSpec& spec) {
    if (spec.subsets.empty()) {
        throw ConfigError("controlled spec has no subsets");
    }
    if (spec.ratio.r1 + spec.ratio.r2 != spec.per_gender_count) {
        std::ostringstream os;
        os << "ratio (" << spec.ratio.r1 << ", " << spec.ratio.r2
           << ") must sum to per_gender_count = " << spec.per_gender_count;
        throw ConfigError(os.str());
    }
    if (!(spec.ratio.r1 > spec.ratio.r2 && spec.ratio.r2 >= 0)) {
        throw ConfigError("ratio must satisfy r1 > r2 >= 0");
    }
    if (spec.templates.empty() || spec.places.empty()) {
        throw ConfigError("controlled spec needs at least one template and one place word");
    }
    for (const ControlledSubset& s : spec.subsets) {
        if (s.task.empty() || s.verb_class_1.empty() || s.verb_class_2.empty()) {
            throw ConfigError("controlled subset \"" + s.task +
                              "\" needs a task word and two non-empty verb classes");
        }
    }

    Dataset d;
    d.attribute_domain = {"male", "female"};
    for (const ControlledSubset& s : spec.subsets) d.task_lexicon.push_back(s.task);

    Rng rng(spec.seed);
    for (const ControlledSubset& s : spec.subsets) {
        for (int i = 0; i < spec.per_gender_count; ++i) {
            // Shared skeleton: template, place, gender word pair. Verb class
            // membership is the one thing that differs between the genders.
            const std::string& tmpl = spec.templates[rng.next_index(spec.templates.size())];
            const std::string& place = spec.places[rng.next_index(spec.places.size())];
            const auto& pair = gender_word_pairs()[rng.next_index(gender_word_pairs().size())];

            bool male_class_1 = i < spec.ratio.r1;
            const auto& male_verbs = male_class_1 ? s.verb_class_1 : s.verb_class_2;
            const auto& female_verbs = male_class_1 ? s.verb_class_2 : s.verb_class_1;
            const std::string& male_verb = male_verbs[rng.next_index(male_verbs.size())];
            const std::string& female_verb = female_verbs[rng.next_index(female_verbs.size())];

            auto push = [&](const std::string& gender, const std::string& gender_word,
                            const std::string& verb) {
                CaptionRecord rec;
                std::ostringstream id;
                id << s.task << "-" << gender << "-" << i;
                rec.image_id = id.str();
                rec.hgcs = {fill_template(tmpl, gender_word, verb, s.task, place)};
                rec.mgc = rec.hgcs[0];
                rec.attribute = gender;
                rec.tasks = {s.task};
                d.records.push_back(std::move(rec));
            };
            push("male", pair.first, male_verb);
            push("female", pair.second, female_verb);
        }
    }
    validate(d);
    return d;
}

std::vector<Dataset> ratio_sweep(const ControlledSpec& base, const std::vector<Ratio>& ratios) {
    if (ratios.empty()) {
        throw ConfigError("ratio sweep needs at least one ratio");
    }
    std::vector<Dataset> out;
    out.reserve(ratios.size());
    for (const Ratio& r : ratios) {
        ControlledSpec spec = base;
        spec.ratio = r;
        out.push_back(generate_controlled(spec));
    }
    return out;
}

}  // namespace dbac
