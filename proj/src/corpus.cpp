#include "dbac/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

#include "dbac/error.hpp"
#include "dbac/rng.hpp"
#include "dbac/tokenize.hpp"

namespace dbac {

using nlohmann::json;

std::string sidecar_header_path(const std::string& dataset_path) {
    std::size_t dot = dataset_path.find_last_of('.');
    std::size_t slash = dataset_path.find_last_of('/');
    std::string stem = dataset_path;
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
        stem = dataset_path.substr(0, dot);
    }
    return stem + ".header.json";
}

namespace {

std::string line_ref(const std::string& path, std::size_t line_no) {
    std::ostringstream os;
    os << path << ":" << line_no;
    return os.str();
}

json parse_json_or_throw(const std::string& text, const std::string& where) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) {
        throw DataError(where + ": malformed JSON");
    }
    return j;
}

std::string require_string(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || !j[key].is_string()) {
        throw DataError(where + ": missing or non-string field \"" + key + "\"");
    }
    return j[key].get<std::string>();
}

std::vector<std::string> require_string_array(const json& j, const char* key,
                                              const std::string& where) {
    if (!j.contains(key) || !j[key].is_array()) {
        throw DataError(where + ": missing or non-array field \"" + key + "\"");
    }
    std::vector<std::string> out;
    for (const auto& e : j[key]) {
        if (!e.is_string()) {
            throw DataError(where + ": field \"" + key + "\" has a non-string element");
        }
        out.push_back(e.get<std::string>());
    }
    return out;
}

}  // namespace

Dataset load_dataset(const std::string& path, const std::string& schema) {
    return load_dataset(path, sidecar_header_path(path), schema);
}

Dataset load_dataset(const std::string& path, const std::string& header_path,
                     const std::string& schema) {
    if (schema != "jsonl") {
        throw ConfigError("unknown dataset schema \"" + schema + "\" (supported: jsonl)");
    }

    std::ifstream header_in(header_path);
    if (!header_in) {
        throw DataError("cannot open dataset header " + header_path);
    }
    std::stringstream hbuf;
    hbuf << header_in.rdbuf();
    json header = parse_json_or_throw(hbuf.str(), header_path);

    Dataset d;
    d.attribute_domain = require_string_array(header, "attribute_domain", header_path);
    d.task_lexicon = require_string_array(header, "task_lexicon", header_path);

    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open dataset " + path);
    }

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        bool blank = line.find_first_not_of(" \t\r\n") == std::string::npos;
        if (blank) continue;
        const std::string where = line_ref(path, line_no);
        json j = parse_json_or_throw(line, where);
        if (!j.is_object()) {
            throw DataError(where + ": record is not a JSON object");
        }

        CaptionRecord rec;
        rec.image_id = require_string(j, "image_id", where);
        rec.hgcs = require_string_array(j, "hgcs", where);
        rec.mgc = require_string(j, "mgc", where);
        rec.attribute = require_string(j, "attribute", where);
        rec.tasks = require_string_array(j, "tasks", where);
        if (j.contains("split")) {
            if (!j["split"].is_string()) {
                throw DataError(where + ": field \"split\" must be a string");
            }
            std::string s = j["split"].get<std::string>();
            if (s == "train") {
                rec.split = Split::Train;
            } else if (s == "test") {
                rec.split = Split::Test;
            } else {
                throw DataError(where + ": split must be \"train\" or \"test\", got \"" + s + "\"");
            }
        }
        if (rec.hgcs.empty()) {
            throw DataError(where + ": record has no HGC captions");
        }
        d.records.push_back(std::move(rec));
    }

    validate(d);
    return d;
}

void save_dataset(const Dataset& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write dataset " + path);
    }
    for (const CaptionRecord& rec : d.records) {
        json j;
        j["image_id"] = rec.image_id;
        j["hgcs"] = rec.hgcs;
        j["mgc"] = rec.mgc;
        j["attribute"] = rec.attribute;
        j["tasks"] = rec.tasks;
        if (rec.split) {
            j["split"] = (*rec.split == Split::Train) ? "train" : "test";
        }
        out << j.dump() << "\n";
    }

    json header;
    header["attribute_domain"] = d.attribute_domain;
    header["task_lexicon"] = d.task_lexicon;
    std::string hpath = sidecar_header_path(path);
    std::ofstream hout(hpath);
    if (!hout) {
        throw DataError("cannot write dataset header " + hpath);
    }
    hout << header.dump(2) << "\n";
}

void validate(const Dataset& d) {
    if (d.records.empty()) {
        throw DataError("dataset is empty");
    }
    if (d.attribute_domain.size() < 2) {
        throw DataError("attribute_domain must declare at least 2 labels");
    }
    if (d.task_lexicon.empty()) {
        throw DataError("task_lexicon is empty");
    }

    std::unordered_set<std::string> domain(d.attribute_domain.begin(), d.attribute_domain.end());
    std::unordered_set<std::string> lexicon(d.task_lexicon.begin(), d.task_lexicon.end());
    std::unordered_set<std::string> seen_ids;
    for (const CaptionRecord& rec : d.records) {
        if (!seen_ids.insert(rec.image_id).second) {
            throw DataError("duplicate image_id \"" + rec.image_id + "\"");
        }
        if (rec.hgcs.empty()) {
            throw DataError("record " + rec.image_id + " has no HGC captions");
        }
        if (!domain.count(rec.attribute)) {
            throw DataError("record " + rec.image_id + " has attribute \"" + rec.attribute +
                            "\" outside the declared attribute_domain");
        }
        if (rec.tasks.empty()) {
            throw DataError("record " + rec.image_id + " has no task labels");
        }
        for (const std::string& t : rec.tasks) {
            if (!lexicon.count(t)) {
                throw DataError("record " + rec.image_id + " has task \"" + t +
                                "\" outside the declared task_lexicon");
            }
        }
    }
}

DatasetSplit split_dataset(const Dataset& d, double train_frac, std::uint64_t seed) {
    validate(d);
    if (!(train_frac > 0.0 && train_frac < 1.0)) {
        throw ConfigError("train_frac must be in (0, 1)");
    }

    const std::size_t n = d.records.size();
    const std::size_t target_train =
        static_cast<std::size_t>(std::llround(train_frac * static_cast<double>(n)));

    std::size_t fixed_train = 0;
    std::vector<std::size_t> unlabeled;
    for (std::size_t i = 0; i < n; ++i) {
        if (d.records[i].split) {
            if (*d.records[i].split == Split::Train) ++fixed_train;
        } else {
            unlabeled.push_back(i);
        }
    }

    std::size_t want = (target_train > fixed_train) ? target_train - fixed_train : 0;
    want = std::min(want, unlabeled.size());

    Rng rng(seed);
    rng.shuffle(unlabeled);
    std::unordered_set<std::size_t> to_train(unlabeled.begin(), unlabeled.begin() + want);

    DatasetSplit out;
    out.train.attribute_domain = out.test.attribute_domain = d.attribute_domain;
    out.train.task_lexicon = out.test.task_lexicon = d.task_lexicon;
    for (std::size_t i = 0; i < n; ++i) {
        CaptionRecord rec = d.records[i];
        bool is_train = rec.split ? (*rec.split == Split::Train) : to_train.count(i) > 0;
        rec.split = is_train ? Split::Train : Split::Test;
        (is_train ? out.train : out.test).records.push_back(std::move(rec));
    }
    if (out.train.records.empty() || out.test.records.empty()) {
        throw DataError("split produced an empty train or test side");
    }
    return out;
}

namespace {

bool token_matches_task(const std::string& token, const std::string& task, bool plural_forms) {
    if (token == task) return true;
    if (!plural_forms) return false;
    return token == task + "s" || token == task + "es";
}

}  // namespace

bool caption_contains_task(const std::string& caption, const std::string& task,
                           bool plural_forms) {
    std::string norm_task = normalize_token(task);
    for (const std::string& tok : tokenize(caption)) {
        if (token_matches_task(tok, norm_task, plural_forms)) return true;
    }
    return false;
}

Priors estimate_priors(const std::vector<std::string>& hgc_corpus,
                       const std::vector<std::string>& mgc_corpus,
                       const std::vector<std::string>& attrs,
                       const std::vector<std::string>& task_lexicon,
                       bool plural_forms) {
    if (attrs.empty()) {
        throw DataError("cannot estimate attribute priors from an empty label list");
    }

    Priors p;
    for (const std::string& a : attrs) p.attr[a] += 1.0;
    for (auto& [label, count] : p.attr) {
        (void)label;
        count /= static_cast<double>(attrs.size());
    }

    auto doc_freq = [&](const std::vector<std::string>& corpus, const std::string& task) {
        if (corpus.empty()) {
            throw DataError("cannot estimate task priors from an empty caption corpus");
        }
        std::size_t hits = 0;
        for (const std::string& cap : corpus) {
            if (caption_contains_task(cap, task, plural_forms)) ++hits;
        }
        return static_cast<double>(hits) / static_cast<double>(corpus.size());
    };

    for (const std::string& t : task_lexicon) {
        p.task_hgc[t] = doc_freq(hgc_corpus, t);
        p.task_mgc[t] = doc_freq(mgc_corpus, t);
    }
    return p;
}

}  // namespace dbac
