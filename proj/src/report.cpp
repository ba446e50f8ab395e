#include "dbac/report.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "dbac/error.hpp"

namespace dbac {

StatSummary summarize_runs(const std::vector<double>& scores) {
    if (scores.empty()) throw DataError("summarize_runs over zero scores");
    if (scores.size() == 1) {
        StatSummary s;
        s.mean = scores[0];
        s.n = 1;
        return s;
    }
    return confidence_interval(scores);
}

nlohmann::json stats_json(const StatSummary& s, const std::vector<double>& per_seed) {
    nlohmann::json j;
    j["mean"] = s.mean;
    j["sample_std"] = s.sample_std;
    j["ci_halfwidth"] = s.ci_halfwidth;
    j["n"] = s.n;
    j["per_seed"] = per_seed;
    return j;
}

std::string format_scaled_ci(double mean, double ci_halfwidth, double scale, int decimals) {
    return format_subscript_ci(mean * scale, ci_halfwidth * scale, decimals);
}

void ensure_dir(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) {
        throw DataError("cannot create output directory " + path + ": " + ec.message());
    }
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << content;
    if (!out) throw DataError("short write to " + path);
}

}  // namespace dbac
