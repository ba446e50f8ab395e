#include "dbac/metrics.hpp"

#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

#include "dbac/error.hpp"

namespace dbac {

std::string direction_name(Direction d) {
    return d == Direction::AtoT ? "a2t" : "t2a";
}

OmegaScore leakage_omega(const QualityVector& q, const std::vector<double>& task_prior,
                         const std::vector<double>& attr_prior, Direction direction,
                         CorpusSide side, OmegaAggregation aggregation,
                         const std::vector<std::pair<int, int>>* group_keys) {
    const std::size_t n = q.values.size();
    if (n == 0) throw DataError("leakage_omega over zero samples");
    if (task_prior.size() != n || attr_prior.size() != n) {
        throw DataError("leakage_omega: quality/prior vector length mismatch");
    }

    auto ratio_at = [&](std::size_t i) {
        double num = direction == Direction::AtoT ? task_prior[i] : attr_prior[i];
        double den = direction == Direction::AtoT ? attr_prior[i] : task_prior[i];
        if (!(den > 0.0)) {
            throw DataError(std::string("leakage_omega: zero ") +
                            (direction == Direction::AtoT ? "attribute" : "task") +
                            " prior in the denominator");
        }
        if (num < 0.0) throw DataError("leakage_omega: negative prior");
        return num / den;
    };

    OmegaScore out;
    out.direction = direction;
    out.side = side;
    out.q_kind = q.kind;
    out.n_samples = n;

    if (aggregation == OmegaAggregation::PerSample) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += q.values[i] * ratio_at(i);
        out.value = sum / static_cast<double>(n);
        return out;
    }

    if (!group_keys || group_keys->size() != n) {
        throw DataError("group-wise leakage_omega needs an (attribute, task) key per sample");
    }
    // Unweighted mean over occupied (a, t) cells of the cell-mean contribution.
    std::map<std::pair<int, int>, std::pair<double, std::size_t>> cells;
    for (std::size_t i = 0; i < n; ++i) {
        auto& cell = cells[(*group_keys)[i]];
        cell.first += q.values[i] * ratio_at(i);
        cell.second += 1;
    }
    double sum = 0.0;
    for (const auto& [key, cell] : cells) {
        (void)key;
        sum += cell.first / static_cast<double>(cell.second);
    }
    out.value = sum / static_cast<double>(cells.size());
    return out;
}

double dbac_value(double omega_m, double omega_h, double epsilon) {
    if (!(epsilon > 0.0)) throw ConfigError("dbac epsilon must be > 0");
    if (omega_m < 0.0 || omega_h < 0.0) {
        throw NumericError("dbac expects non-negative leakage scores");
    }
    return (omega_m - omega_h) / (omega_m + omega_h + epsilon);
}

DbacScore dbac(const OmegaScore& omega_m, const OmegaScore& omega_h, double epsilon) {
    if (omega_m.direction != omega_h.direction) {
        throw ConfigError("dbac: leakage scores come from different directions");
    }
    if (omega_m.side != CorpusSide::Mgc || omega_h.side != CorpusSide::Hgc) {
        throw ConfigError("dbac: expected (MGC-side, HGC-side) leakage scores");
    }
    DbacScore out;
    out.direction = omega_m.direction;
    out.epsilon = epsilon;
    out.value = dbac_value(omega_m.value, omega_h.value, epsilon);
    return out;
}

namespace {

double lic_side(const std::vector<Eigen::VectorXd>& preds, const std::vector<int>& labels) {
    if (preds.empty() || preds.size() != labels.size()) {
        throw DataError("lic_score: empty predictions or prediction/label mismatch");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        int best = 0;
        for (int c = 1; c < preds[i].size(); ++c) {
            if (preds[i][c] > preds[i][best]) best = c;
        }
        if (best == labels[i]) sum += preds[i][best];
    }
    return sum / static_cast<double>(preds.size());
}

}  // namespace

double lic_side_value(const std::vector<Eigen::VectorXd>& preds,
                      const std::vector<int>& labels) {
    return lic_side(preds, labels);
}

LicScore lic_score(const std::vector<Eigen::VectorXd>& hgc_preds,
                   const std::vector<int>& hgc_labels,
                   const std::vector<Eigen::VectorXd>& mgc_preds,
                   const std::vector<int>& mgc_labels) {
    LicScore out;
    out.lic_h = lic_side(hgc_preds, hgc_labels);
    out.lic_m = lic_side(mgc_preds, mgc_labels);
    out.value = out.lic_m - out.lic_h;
    return out;
}

double cooccurrence_balance(const Dataset& d) {
    if (d.attribute_domain.size() != 2) {
        throw DataError("cooccurrence_balance requires a binary attribute domain");
    }
    std::map<std::string, std::map<std::string, std::size_t>> counts;  // task -> attr -> n
    for (const CaptionRecord& rec : d.records) {
        for (const std::string& t : rec.tasks) counts[t][rec.attribute] += 1;
    }
    double sum = 0.0;
    std::size_t used = 0;
    for (const std::string& t : d.task_lexicon) {
        auto it = counts.find(t);
        if (it == counts.end()) continue;  // task never occurs: skip
        std::size_t total = 0, best = 0;
        for (const auto& [attr, n] : it->second) {
            (void)attr;
            total += n;
            best = std::max(best, n);
        }
        sum += static_cast<double>(best) / static_cast<double>(total);
        ++used;
    }
    if (used == 0) throw DataError("cooccurrence_balance: no task ever occurs");
    return sum / static_cast<double>(used);
}

namespace {

StatSummary basic_stats(const std::vector<double>& scores) {
    StatSummary s;
    s.n = scores.size();
    double sum = 0.0;
    for (double v : scores) sum += v;
    s.mean = sum / static_cast<double>(s.n);
    if (s.n >= 2) {
        double sq = 0.0;
        for (double v : scores) sq += (v - s.mean) * (v - s.mean);
        s.sample_std = std::sqrt(sq / static_cast<double>(s.n - 1));
        s.ci_halfwidth = 1.96 * s.sample_std / std::sqrt(static_cast<double>(s.n));
    }
    return s;
}

}  // namespace

double coefficient_of_variation(const std::vector<double>& scores, double min_mean) {
    if (scores.size() < 2) {
        throw DataError("coefficient_of_variation needs at least 2 scores");
    }
    StatSummary s = basic_stats(scores);
    if (std::abs(s.mean) <= min_mean) {
        throw NumericError("coefficient_of_variation: mean too close to zero");
    }
    return s.sample_std / std::abs(s.mean);
}

double percent_reduction(double cv_ref, double cv_new) {
    if (!(cv_ref > 0.0)) {
        throw NumericError("percent_reduction: reference CV must be > 0");
    }
    return 100.0 * (cv_ref - cv_new) / cv_ref;
}

StatSummary confidence_interval(const std::vector<double>& scores) {
    if (scores.size() < 2) {
        throw DataError("confidence_interval needs at least 2 scores");
    }
    return basic_stats(scores);
}

std::string format_subscript_ci(double mean, double ci_halfwidth, int decimals) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(decimals) << mean << "_{" << ci_halfwidth << "}";
    return os.str();
}

}  // namespace dbac
