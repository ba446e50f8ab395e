#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dbac {

enum class Split { Train, Test };

// One image worth of captions: several human captions, one model caption,
// plus the image-level attribute and task labels.
struct CaptionRecord {
    std::string image_id;
    std::vector<std::string> hgcs;   // human-generated captions, >= 1
    std::string mgc;                 // model-generated caption
    std::string attribute;           // e.g. "male" / "female"
    std::vector<std::string> tasks;  // >= 1 task words, first one is primary
    std::optional<Split> split;      // image-level; absent means "assign me"
};

struct Dataset {
    std::vector<CaptionRecord> records;
    std::vector<std::string> attribute_domain;  // ordered label set
    std::vector<std::string> task_lexicon;      // ordered task word list
};

struct DatasetSplit {
    Dataset train;
    Dataset test;
};

// Word priors used for the Bayes correction of leakage scores.
//   attr:     P(a) from record label counts, sums to 1.
//   task_hgc: P(t) = fraction of HGC captions containing t (document freq).
//   task_mgc: same over the MGC corpus.
struct Priors {
    std::map<std::string, double> attr;
    std::map<std::string, double> task_hgc;
    std::map<std::string, double> task_mgc;
};

// Loads a JSON-lines dataset plus its sidecar header. `schema` names the
// on-disk format; "jsonl" is the only one supported. The header path is
// derived from `path` (see sidecar_header_path) unless given explicitly.
Dataset load_dataset(const std::string& path, const std::string& schema = "jsonl");
Dataset load_dataset(const std::string& path, const std::string& header_path,
                     const std::string& schema);

// "<stem>.header.json" next to the dataset file.
std::string sidecar_header_path(const std::string& dataset_path);

// Writes the JSONL file and its sidecar header.
void save_dataset(const Dataset& d, const std::string& path);

// Structural validation: non-empty, unique image ids, labels inside the
// declared domains, at least one HGC per record. Throws DataError.
void validate(const Dataset& d);

// Image-level split. Records with an explicit split label keep it; the rest
// are shuffled with `seed` and dealt so that |train| = round(train_frac * N)
// as closely as the labelled records allow.
DatasetSplit split_dataset(const Dataset& d, double train_frac, std::uint64_t seed);

// Document-frequency priors over the given caption corpora plus label counts
// over `attrs`. Task matching is whole-token via the shared tokenizer and
// includes "+s"/"+es" plural forms when `plural_forms` is set.
Priors estimate_priors(const std::vector<std::string>& hgc_corpus,
                       const std::vector<std::string>& mgc_corpus,
                       const std::vector<std::string>& attrs,
                       const std::vector<std::string>& task_lexicon,
                       bool plural_forms = true);

// True when any token of `caption` equals `task` (or a plural form of it).
bool caption_contains_task(const std::string& caption, const std::string& task,
                           bool plural_forms = true);

}  // namespace dbac
